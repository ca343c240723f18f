use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn cylinder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cylinder"))
        .args(args)
        .env_remove("CYLINDER_MAX_DIM")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn simplex_listings() {
    let out = cylinder(&["simplex", "2", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("counts: (3,2)"), "{text}");
    assert!(text.contains("coequalizer up to dim 3: pass"));

    let out = cylinder(&["simplex", "1"]);
    assert!(stdout(&out).contains("counts: (2,1)"));

    let out = cylinder(&["simplex", "0", "0"]);
    assert_eq!(out.status.code(), Some(64));

    let out = cylinder(&["simplex", "3", "1", "--json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["counts"], serde_json::json!([4, 6, 3]));
    assert_eq!(json["coequalizer"], true);
}

#[test]
fn ring_dumps_are_byte_stable() {
    let a = cylinder(&["ring", "cyl", "2"]);
    let b = cylinder(&["ring", "cyl", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let horn = cylinder(&["horn-ring", "2", "1"]);
    let same = cylinder(&["ring", "horn", "2", "1"]);
    assert_eq!(horn.stdout, same.stdout);
    let json: serde_json::Value = serde_json::from_slice(&horn.stdout).unwrap();
    assert_eq!(json["basis"].as_array().unwrap().len(), 5);
}

#[test]
fn certificates() {
    let out = cylinder(&["ring", "cyl", "1", "--certify"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("H^0 = ℤ"), "{}", stderr(&out));

    let out = cylinder(&["ring", "horn", "2", "1", "--certify"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("surjective quasi-isomorphism: pass"));

    let dump = scratch("keller.json");
    let out = cylinder(&[
        "ring",
        "keller",
        "--coeff",
        &fixture("Z.json"),
        "--certify",
        "--dump",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("Cyl_Kel(B) ≅ Cyl_1(B): pass"));
    assert!(std::fs::read_to_string(dump).unwrap().contains("\"e01|1\""));
}

#[test]
fn fill_the_shipped_horn() {
    let out_path = scratch("filler.json");
    let out = cylinder(&[
        "fill-horn",
        "--presentation",
        &fixture("presentation.json"),
        "--coeff",
        &fixture("Z.json"),
        "--horn",
        "2,1",
        "--faces",
        &fixture("faces_2_1.json"),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let filler: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out_path).unwrap()).unwrap();
    let ids: Vec<&str> = filler["images"]["b"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["id"].as_str().unwrap())
        .collect();
    assert!(ids.contains(&"(0,2)|1"));
}

#[test]
fn incompatible_faces_exit_2() {
    let out = cylinder(&[
        "fill-horn",
        "--presentation",
        &fixture("presentation.json"),
        "--horn",
        "2,1",
        "--faces",
        &fixture("faces_2_1_incompatible.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("faces 0 and 2 disagree on a"));
}

#[test]
fn solver_failure_exits_3() {
    let faces = scratch("unliftable_faces.json");
    let out = cylinder(&[
        "sample-horn",
        "--horn",
        "2,1",
        "--presentation",
        &fixture("unliftable.json"),
        "--out-faces",
        faces.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sampled_horns_fill() {
    for (horn, seed) in [("2,0", "1"), ("3,1", "2"), ("3,3", "3")] {
        let (pres, faces) = (scratch(&format!("p{seed}.json")), scratch(&format!("f{seed}.json")));
        let out = cylinder(&[
            "sample-horn",
            "--horn",
            horn,
            "--seed",
            seed,
            "--out-presentation",
            pres.to_str().unwrap(),
            "--out-faces",
            faces.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        let out = cylinder(&[
            "fill-horn",
            "--presentation",
            pres.to_str().unwrap(),
            "--horn",
            horn,
            "--faces",
            faces.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    }
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(cylinder(&["ring", "cyl", "7"]).status.code(), Some(64));
    assert_eq!(cylinder(&["bogus"]).status.code(), Some(64));
    assert_eq!(cylinder(&["fill-horn", "--horn", "2"]).status.code(), Some(64));
    let out = cylinder(&[
        "fill-horn",
        "--presentation",
        &fixture("presentation.json"),
        "--horn",
        "9,1",
        "--faces",
        &fixture("faces_2_1.json"),
    ]);
    assert_eq!(out.status.code(), Some(64));
    assert!(stderr(&out).contains("dimension cap"));
}

#[test]
fn the_cap_can_be_raised() {
    let out = Command::new(env!("CARGO_BIN_EXE_cylinder"))
        .args(["simplex", "7"])
        .env("CYLINDER_MAX_DIM", "7")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = Command::new(env!("CARGO_BIN_EXE_cylinder"))
        .args(["simplex", "2"])
        .env("CYLINDER_MAX_DIM", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn explain_describes_the_command() {
    let out = cylinder(&[
        "--explain",
        "ring",
        "horn",
        "2",
        "1",
        "--dump",
        scratch("h.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("surjective quasi-isomorphism"));
}
