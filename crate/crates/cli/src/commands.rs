use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use cylinder::dg::{check_axioms, BasisDGRing};
use cylinder::horn::{certify_surjective_quasi_iso, HornSetting, QuasiIsoCertificate};
use cylinder::json;
use cylinder::kan::{HornFiller, KanError};
use cylinder::keller::{keller_to_cylinder, KellerCyl};
use cylinder::linalg::{cohomology, Cohomology};
use cylinder::nerve::cyl;
use cylinder::random::{self, Shape};
use cylinder::simplex::{check_coequalizer, HornDiagram, HornId, Space};

pub const MAX_DIM_VAR: &str = "CYLINDER_MAX_DIM";
const DEFAULT_MAX_DIM: usize = 6;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub const USAGE: u8 = 64;
    pub const INCOMPATIBLE: u8 = 2;
    pub const CERTIFICATE: u8 = 3;

    fn usage(message: impl Display) -> Self {
        Failure {
            code: Self::USAGE,
            message: message.to_string(),
        }
    }

    fn incompatible(message: impl Display) -> Self {
        Failure {
            code: Self::INCOMPATIBLE,
            message: message.to_string(),
        }
    }

    fn certificate(message: impl Display) -> Self {
        Failure {
            code: Self::CERTIFICATE,
            message: message.to_string(),
        }
    }
}

impl From<KanError> for Failure {
    fn from(e: KanError) -> Self {
        if e.is_incompatible_datum() {
            Failure::incompatible(e)
        } else {
            Failure::certificate(e)
        }
    }
}

type Outcome = Result<(), Failure>;

/// Exact computations with simplicial cylinder DG rings over the integers.
#[derive(Debug, Parser)]
#[command(name = "cylinder", version)]
pub struct Cli {
    /// Describe what the command computes and checks, then run it.
    #[arg(long, global = true)]
    explain: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Nondegenerate simplices of Δ^q, or of the horn Λ^q_i with its gluing data.
    Simplex {
        q: usize,
        i: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Dump or certify one of the rings.
    Ring {
        #[command(subcommand)]
        kind: RingKind,
    },
    /// Same as `ring horn`.
    HornRing {
        q: usize,
        i: usize,
        #[command(flatten)]
        opts: RingOpts,
    },
    /// Fill a horn in Hom(A, Cyl(B)).
    FillHorn {
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long)]
        coeff: Option<PathBuf>,
        /// The horn as `q,i`.
        #[arg(long, value_parser = parse_horn_arg)]
        horn: (usize, usize),
        #[arg(long)]
        faces: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a random presentation and the faces of a random homomorphism
    /// into Cyl_q(B), ready for `fill-horn`.
    SampleHorn {
        #[arg(long, value_parser = parse_horn_arg)]
        horn: (usize, usize),
        #[arg(long)]
        coeff: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use this presentation instead of sampling one.
        #[arg(long)]
        presentation: Option<PathBuf>,
        #[arg(long)]
        out_presentation: Option<PathBuf>,
        #[arg(long)]
        out_faces: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum RingKind {
    /// Cyl_q(B) = N(Δ^q, B).
    Cyl {
        q: usize,
        #[command(flatten)]
        opts: RingOpts,
    },
    /// N(Λ^q_i, B).
    Horn {
        q: usize,
        i: usize,
        #[command(flatten)]
        opts: RingOpts,
    },
    /// Cyl_Kel(B), the Keller cylinder.
    Keller {
        #[command(flatten)]
        opts: RingOpts,
    },
}

#[derive(Debug, Args)]
struct RingOpts {
    /// Coefficient ring as a ring dump; the integers by default.
    #[arg(long)]
    coeff: Option<PathBuf>,
    /// Write the ring dump here instead of to stdout.
    #[arg(long)]
    dump: Option<PathBuf>,
    #[arg(long)]
    certify: bool,
}

fn parse_horn_arg(text: &str) -> Result<(usize, usize), String> {
    let (q, i) = text.split_once(',').ok_or("expected q,i")?;
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|e| format!("{s:?}: {e}"));
    Ok((parse(q)?, parse(i)?))
}

fn max_dim() -> Result<usize, Failure> {
    match std::env::var(MAX_DIM_VAR) {
        Ok(v) => v
            .parse()
            .map_err(|_| Failure::usage(format!("{MAX_DIM_VAR}={v:?} is not a dimension"))),
        Err(_) => Ok(DEFAULT_MAX_DIM),
    }
}

fn check_cap(q: usize) -> Outcome {
    let cap = max_dim()?;
    if q > cap {
        return Err(Failure::usage(format!(
            "q = {q} exceeds the dimension cap {cap} (set {MAX_DIM_VAR} to raise it)"
        )));
    }
    Ok(())
}

fn horn_id(q: usize, i: usize) -> Result<HornId, Failure> {
    check_cap(q)?;
    HornId::new(q, i).map_err(Failure::usage)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_coeff(path: Option<&Path>) -> Result<Arc<BasisDGRing>, Failure> {
    let Some(path) = path else {
        return Ok(Arc::new(BasisDGRing::integers()));
    };
    let ring = json::parse_ring(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let report = check_axioms(&ring);
    if let Some(v) = report.violations.first() {
        return Err(Failure::usage(format!("{} is not a DG ring: {v}", path.display())));
    }
    Ok(Arc::new(ring))
}

pub fn run(cli: Cli) -> Outcome {
    if cli.explain {
        println!("{}", explain(&cli.command));
    }
    match cli.command {
        Command::Simplex { q, i, json } => simplex(q, i, json),
        Command::Ring { kind } => match kind {
            RingKind::Cyl { q, opts } => ring_cyl(q, &opts),
            RingKind::Horn { q, i, opts } => ring_horn(q, i, &opts),
            RingKind::Keller { opts } => ring_keller(&opts),
        },
        Command::HornRing { q, i, opts } => ring_horn(q, i, &opts),
        Command::FillHorn {
            presentation,
            coeff,
            horn,
            faces,
            out,
        } => fill_horn(&presentation, coeff.as_deref(), horn, &faces, out.as_deref()),
        Command::SampleHorn {
            horn,
            coeff,
            seed,
            presentation,
            out_presentation,
            out_faces,
        } => sample_horn(
            horn,
            coeff.as_deref(),
            seed,
            presentation.as_deref(),
            out_presentation.as_deref(),
            &out_faces,
        ),
    }
}

fn explain(command: &Command) -> &'static str {
    match command {
        Command::Simplex { .. } => {
            "Lists the nondegenerate simplices of Δ^q, or of Λ^q_i ⊂ Δ^q. For a horn it also prints the \
             face set J0, the overlap pairs J1, and a brute-force check that gluing the faces of Δ^q along \
             J1 yields exactly the horn, on all simplices and on nondegenerate ones."
        }
        Command::Ring { kind } => match kind {
            RingKind::Cyl { .. } => {
                "Builds Cyl_q(B) = R(Δ^q) ⊗ B from delta functions on nondegenerate simplices with the \
                 Alexander-Whitney product. --certify checks the DG ring axioms exhaustively and computes \
                 cohomology by Smith normal form."
            }
            RingKind::Horn { .. } => HORN,
            RingKind::Keller { .. } => {
                "Builds the Keller cylinder Cyl_Kel(B) = Cyl_Kel(Z) ⊗ B. --certify checks the axioms, \
                 computes cohomology, and verifies that e0, e1, e01 ↦ δ(0), δ(1), δ(0,1) is an isomorphism \
                 of DG rings onto Cyl_1(B)."
            }
        },
        Command::HornRing { .. } => HORN,
        Command::FillHorn { .. } => {
            "Reads homomorphisms A -> Cyl_(q-1)(B), one per face j ≠ i, checks that they agree on overlaps, \
             assembles them into A -> N(Λ^q_i, B) through the limit presentation of the horn ring, and lifts \
             along the restriction Cyl_q(B) -> N(Λ^q_i, B), which is certified to be a surjective \
             quasi-isomorphism. The faces of the filler are checked against the input. Exit 2: the faces are \
             incompatible; exit 3: a certificate or solver step failed."
        }
        Command::SampleHorn { .. } => {
            "Samples a homomorphism A -> Cyl_q(B) from a fixed seed and writes its faces along Λ^q_i, which \
             form a compatible horn by construction."
        }
    }
}

const HORN: &str = "Builds N(Λ^q_i, B) from delta functions on the nondegenerate simplices of the horn. --certify \
                    checks the axioms, computes cohomology, and certifies the restriction Cyl_q(B) -> N(Λ^q_i, B) \
                    as a surjective quasi-isomorphism: surjective in every degree, acyclic kernel, and equal \
                    cohomology on both sides.";

fn simplex(q: usize, i: Option<usize>, as_json: bool) -> Outcome {
    check_cap(q)?;
    let (space, horn) = match i {
        Some(i) => {
            let h = horn_id(q, i)?;
            (Space::Horn(h), Some(h))
        }
        None => (Space::Delta(q), None),
    };
    let levels: Vec<Vec<String>> = (0..=q)
        .map(|p| space.nondegenerate(p).iter().map(ToString::to_string).collect())
        .filter(|l: &Vec<String>| !l.is_empty())
        .collect();
    let gluing = horn.map(|h| (HornDiagram::new(h), check_coequalizer(h, q + 1)));
    if as_json {
        let mut out = json!({
            "space": space.to_string(),
            "nondegenerate": levels,
            "counts": levels.iter().map(Vec::len).collect::<Vec<_>>(),
        });
        if let Some((d, report)) = &gluing {
            out["j0"] = json!(d.j0());
            out["j1"] = json!(d.j1());
            out["coequalizer"] = json!(report.passed());
        }
        println!("{}", serde_json::to_string_pretty(&out).expect("JSON values serialize"));
    } else {
        println!("{space}");
        for (p, level) in levels.iter().enumerate() {
            println!("  dim {p}: {}", level.join(" "));
        }
        let counts: Vec<String> = levels.iter().map(|l| l.len().to_string()).collect();
        println!("  counts: ({})", counts.join(","));
        if let Some((d, report)) = &gluing {
            let j1: Vec<String> = d.j1().iter().map(|(k, l)| format!("({k},{l})")).collect();
            println!("  J0: {:?}", d.j0());
            println!("  J1: [{}]", j1.join(", "));
            println!("  coequalizer up to dim {}: {}", q + 1, verdict(report.passed()));
        }
    }
    match gluing {
        Some((_, report)) if !report.passed() => Err(Failure::certificate(format!("{report:?}"))),
        _ => Ok(()),
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn emit_dump(ring: &BasisDGRing, opts: &RingOpts) -> Outcome {
    let text = json::dump_ring(ring);
    match &opts.dump {
        Some(path) => write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Verdict lines go to stdout when the dump goes to a file, else to stderr.
fn report(opts: &RingOpts, line: String) {
    if opts.dump.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn show_cohomology(h: &Cohomology) -> String {
    let nonzero: Vec<String> = h
        .groups
        .iter()
        .filter(|g| !g.is_zero())
        .map(ToString::to_string)
        .collect();
    if nonzero.is_empty() {
        "H = 0".into()
    } else {
        nonzero.join(", ")
    }
}

/// Axioms and cohomology; returns whether the axioms hold.
fn certify_ring(ring: &BasisDGRing, name: &str, opts: &RingOpts) -> bool {
    let axioms = check_axioms(ring);
    report(
        opts,
        format!(
            "{name}: axioms {} ({} pairs, {} triples)",
            verdict(axioms.passed()),
            axioms.pairs_checked,
            axioms.triples_checked
        ),
    );
    if let Some(v) = axioms.violations.first() {
        report(opts, format!("  first violation: {v}"));
    }
    report(
        opts,
        format!("{name}: {}", show_cohomology(&cohomology(&ring.underlying_complex()))),
    );
    axioms.passed()
}

fn ring_cyl(q: usize, opts: &RingOpts) -> Outcome {
    check_cap(q)?;
    let coeff = load_coeff(opts.coeff.as_deref())?;
    let n = cyl(q, coeff);
    emit_dump(n.ring(), opts)?;
    if opts.certify && !certify_ring(n.ring(), &format!("Cyl_{q}(B)"), opts) {
        return Err(Failure::certificate("axioms fail"));
    }
    Ok(())
}

fn show_certificate(c: &QuasiIsoCertificate) -> Vec<String> {
    vec![
        format!("restriction surjective in every degree: {}", verdict(c.is_surjective())),
        format!("kernel acyclic: {}", verdict(c.kernel_acyclic())),
        format!("cohomology agrees: {}", verdict(c.cohomology_agrees())),
        format!("restriction is a DG ring map: {}", verdict(c.hom_violations.is_empty())),
        format!("surjective quasi-isomorphism: {}", verdict(c.passed())),
    ]
}

fn ring_horn(q: usize, i: usize, opts: &RingOpts) -> Outcome {
    let h = horn_id(q, i)?;
    let coeff = load_coeff(opts.coeff.as_deref())?;
    let setting = HornSetting::new(h, coeff);
    let ring = setting.horn_ring().ring();
    emit_dump(ring, opts)?;
    if opts.certify {
        let axioms = certify_ring(ring, &format!("N({h}, B)"), opts);
        let cert = certify_surjective_quasi_iso(&setting.restriction());
        for line in show_certificate(&cert) {
            report(opts, line);
        }
        if !axioms || !cert.passed() {
            return Err(Failure::certificate("certificate failed"));
        }
    }
    Ok(())
}

fn ring_keller(opts: &RingOpts) -> Outcome {
    let coeff = load_coeff(opts.coeff.as_deref())?;
    let kel = KellerCyl::new(coeff.clone());
    emit_dump(kel.ring(), opts)?;
    if opts.certify {
        let axioms = certify_ring(kel.ring(), "Cyl_Kel(B)", opts);
        let iso = keller_to_cylinder(&kel, &cyl(1, coeff))
            .ok()
            .filter(|f| cylinder::dg::check_hom(f).passed() && f.inverse().is_some());
        report(opts, format!("Cyl_Kel(B) ≅ Cyl_1(B): {}", verdict(iso.is_some())));
        if !axioms || iso.is_none() {
            return Err(Failure::certificate("certificate failed"));
        }
    }
    Ok(())
}

fn load_presentation(path: &Path) -> Result<Arc<cylinder::semifree::SemiFreePresentation>, Failure> {
    json::parse_presentation(&read(path)?)
        .map(Arc::new)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn fill_horn(
    presentation: &Path,
    coeff: Option<&Path>,
    (q, i): (usize, usize),
    faces: &Path,
    out: Option<&Path>,
) -> Outcome {
    let h = horn_id(q, i)?;
    if q == 0 {
        return Err(Failure::usage("no horns in dimension 0"));
    }
    let a = load_presentation(presentation)?;
    let coeff = load_coeff(coeff)?;
    let filler = HornFiller::new(h, coeff)?;
    let face_ring = filler.setting().face_cylinder().ring().clone();
    let faces = json::parse_faces(&read(faces)?, a, face_ring).map_err(Failure::incompatible)?;
    let datum = filler.datum(faces)?;
    let filled = filler.fill(&datum)?;
    if filler.boundary(&filled.hom)? != datum {
        return Err(Failure::certificate("boundary of the filler differs from the datum"));
    }
    let text = json::dump_hom(&filled.hom);
    match out {
        Some(path) => {
            write(path, &text)?;
            println!(
                "filled {h}: {} faces verified, filler written to {}",
                datum.faces().len(),
                path.display()
            );
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn sample_horn(
    (q, i): (usize, usize),
    coeff: Option<&Path>,
    seed: u64,
    presentation: Option<&Path>,
    out_presentation: Option<&Path>,
    out_faces: &Path,
) -> Outcome {
    let h = horn_id(q, i)?;
    let coeff = load_coeff(coeff)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = match presentation {
        Some(path) => load_presentation(path)?,
        None => Arc::new(random::presentation(&mut rng, &Shape::default())),
    };
    let setting = HornSetting::new(h, coeff.clone());
    let target = setting.cylinder().ring().clone();
    let f = random::hom(&mut rng, &a, &target, 500)
        .ok_or_else(|| Failure::certificate("no homomorphism found for this seed"))?;
    let faces: BTreeMap<usize, _> = setting
        .diagram()
        .j0()
        .iter()
        .map(|&j| {
            let face = setting.cylinder_face(j).map_err(Failure::certificate)?;
            Ok((j, f.then(&face).map_err(Failure::certificate)?))
        })
        .collect::<Result<_, Failure>>()?;
    if let Some(path) = out_presentation {
        write(path, &json::dump_presentation(&a))?;
    }
    write(out_faces, &json::dump_faces(&faces))
}
