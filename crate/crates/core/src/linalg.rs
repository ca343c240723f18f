//! Exact integer linear algebra: Smith normal form, integral solving,
//! kernels and cohomology of finite cochain complexes over ℤ.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("d∘d ≠ 0 between degrees {from} and {to}")]
    NotAComplex { from: i64, to: i64 },
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for k in 0..n {
            m.data[k * n + k] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Builds from small integer rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(rows.iter().all(|r| r.as_ref().len() == cols), "ragged rows");
        IntMatrix::from_fn(rows.len(), cols, |r, c| BigInt::from(rows[r].as_ref()[c]))
    }

    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        assert!(columns.iter().all(|c| c.len() == rows), "column length mismatch");
        IntMatrix::from_fn(rows, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigInt) {
        self.data[r * self.cols + c] = value;
    }

    pub fn entry_mut(&mut self, r: usize, c: usize) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        *out.entry_mut(r, c) += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Result<Vec<BigInt>, LinalgError> {
        if self.cols != x.len() {
            return Err(LinalgError::Shape(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::Shape(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// row[target] -= factor * row[source]
    fn sub_row(&mut self, target: usize, source: usize, factor: &BigInt) {
        for c in 0..self.cols {
            let s = self.get(source, c);
            if !s.is_zero() {
                let delta = factor * s;
                *self.entry_mut(target, c) -= delta;
            }
        }
    }

    /// col[target] -= factor * col[source]
    fn sub_col(&mut self, target: usize, source: usize, factor: &BigInt) {
        for r in 0..self.rows {
            let s = self.get(r, source);
            if !s.is_zero() {
                let delta = factor * s;
                *self.entry_mut(r, target) -= delta;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = self.entry_mut(r, c);
            *v = -std::mem::take(v);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `U·A·V = S` with `U`, `V` unimodular and `S` diagonal, `d_k | d_{k+1}`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    rank: usize,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The nonzero diagonal entries of `S`, all positive.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|k| self.s.get(k, k).clone()).collect()
    }

    /// The particular solution of `A·x = b` read off the decomposition,
    /// or `None` when there is no integral solution.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = self.u.mul_vec(b).ok()?;
        let n = self.v.rows();
        let mut y = vec![BigInt::zero(); n];
        for (k, ck) in c.iter().enumerate() {
            if k < self.rank {
                let (quot, rem) = ck.div_rem(self.s.get(k, k));
                if !rem.is_zero() {
                    return None;
                }
                y[k] = quot;
            } else if !ck.is_zero() {
                return None;
            }
        }
        self.v.mul_vec(&y).ok()
    }

    /// A ℤ-basis of the kernel: the trailing columns of `V`.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        (self.rank..self.v.cols()).map(|c| self.v.column(c)).collect()
    }
}

/// Smith normal form with deterministic pivoting: at every step the pivot is
/// the entry of smallest absolute value, ties broken by row-major position.
pub fn smith(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows, a.cols);
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut t = 0;
    while t < m.min(n) {
        let Some((pr, pc)) = smallest_entry(&s, t) else {
            break;
        };
        s.swap_rows(t, pr);
        u.swap_rows(t, pr);
        s.swap_cols(t, pc);
        v.swap_cols(t, pc);
        loop {
            let pivot = s.get(t, t).clone();
            let mut clean = true;
            for r in t + 1..m {
                if !s.get(r, t).is_zero() {
                    let q = s.get(r, t).div_floor(&pivot);
                    s.sub_row(r, t, &q);
                    u.sub_row(r, t, &q);
                    clean &= s.get(r, t).is_zero();
                }
            }
            for c in t + 1..n {
                if !s.get(t, c).is_zero() {
                    let q = s.get(t, c).div_floor(&pivot);
                    s.sub_col(c, t, &q);
                    v.sub_col(c, t, &q);
                    clean &= s.get(t, c).is_zero();
                }
            }
            if !clean {
                let (pr, pc) = smallest_entry(&s, t).expect("nonzero remainder exists");
                s.swap_rows(t, pr);
                u.swap_rows(t, pr);
                s.swap_cols(t, pc);
                v.swap_cols(t, pc);
                continue;
            }
            // divisibility of the remaining block by the pivot
            let bad_row = (t + 1..m).find(|&r| (t + 1..n).any(|c| !s.get(r, c).is_multiple_of(&pivot)));
            match bad_row {
                Some(r) => {
                    let minus_one = -BigInt::one();
                    s.sub_row(t, r, &minus_one);
                    u.sub_row(t, r, &minus_one);
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SmithDecomposition { u, s, v, rank: t }
}

fn smallest_entry(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in t..s.rows {
        for c in t..s.cols {
            let x = s.get(r, c);
            if x.is_zero() {
                continue;
            }
            match best {
                Some((br, bc)) if s.get(br, bc).abs() <= x.abs() => {}
                _ => best = Some((r, c)),
            }
        }
    }
    best
}

/// Solves `A·x = b` over ℤ. Returns the deterministic particular solution.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>, LinalgError> {
    if a.rows != b.len() {
        return Err(LinalgError::Shape(format!(
            "{} rows but right-hand side of length {}",
            a.rows,
            b.len()
        )));
    }
    Ok(smith(a).solve(b))
}

pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    smith(a).kernel_basis()
}

/// True iff the cokernel vanishes.
pub fn is_surjective(a: &IntMatrix) -> bool {
    let snf = smith(a);
    snf.rank() == a.rows && snf.invariant_factors().iter().all(One::is_one)
}

/// Inverse over ℤ, if `a` is unimodular.
pub fn inverse(a: &IntMatrix) -> Option<IntMatrix> {
    if a.rows != a.cols {
        return None;
    }
    let snf = smith(a);
    if snf.rank() != a.rows || !snf.invariant_factors().iter().all(One::is_one) {
        return None;
    }
    // U A V = I  =>  A^{-1} = V U
    snf.v.mul(&snf.u).ok()
}

/// A bounded cochain complex of free ℤ-modules `C^a -> C^{a+1} -> … -> C^b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntCochainComplex {
    start: i64,
    ranks: Vec<usize>,
    diffs: Vec<IntMatrix>,
}

impl IntCochainComplex {
    /// `diffs[k]` maps degree `start + k` to `start + k + 1`, so there is one
    /// fewer differential than ranks.
    pub fn new(start: i64, ranks: Vec<usize>, diffs: Vec<IntMatrix>) -> Result<Self, LinalgError> {
        if diffs.len() + 1 != ranks.len().max(1) {
            return Err(LinalgError::Shape(format!(
                "{} ranks need {} differentials, got {}",
                ranks.len(),
                ranks.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.rows() != ranks[k + 1] || d.cols() != ranks[k] {
                return Err(LinalgError::Shape(format!(
                    "differential from degree {} is {}x{}, expected {}x{}",
                    start + k as i64,
                    d.rows(),
                    d.cols(),
                    ranks[k + 1],
                    ranks[k]
                )));
            }
        }
        for k in 1..diffs.len() {
            if !diffs[k].mul(&diffs[k - 1]).expect("shapes checked").is_zero() {
                return Err(LinalgError::NotAComplex {
                    from: start + k as i64 - 1,
                    to: start + k as i64 + 1,
                });
            }
        }
        Ok(IntCochainComplex { start, ranks, diffs })
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank_in(&self, degree: i64) -> usize {
        let k = degree - self.start;
        if k < 0 {
            return 0;
        }
        self.ranks.get(k as usize).copied().unwrap_or(0)
    }

    /// The differential leaving `degree` (a zero matrix outside the range).
    pub fn differential(&self, degree: i64) -> IntMatrix {
        let k = degree - self.start;
        if k >= 0 && (k as usize) < self.diffs.len() {
            self.diffs[k as usize].clone()
        } else {
            IntMatrix::zeros(self.rank_in(degree + 1), self.rank_in(degree))
        }
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.ranks.len()).map(move |k| self.start + k as i64)
    }
}

/// `H^p` as a finitely generated abelian group `ℤ^rank ⊕ ⊕ ℤ/t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyGroup {
    pub degree: i64,
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl CohomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for CohomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank == 1 {
            parts.push("ℤ".to_string());
        } else if self.rank > 1 {
            parts.push(format!("ℤ^{}", self.rank));
        }
        parts.extend(self.torsion.iter().map(|t| format!("ℤ/{t}")));
        if parts.is_empty() {
            write!(f, "H^{} = 0", self.degree)
        } else {
            write!(f, "H^{} = {}", self.degree, parts.join(" ⊕ "))
        }
    }
}

/// Cohomology in every degree of the complex's range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cohomology {
    pub groups: Vec<CohomologyGroup>,
}

impl Cohomology {
    pub fn in_degree(&self, degree: i64) -> CohomologyGroup {
        self.groups
            .iter()
            .find(|g| g.degree == degree)
            .cloned()
            .unwrap_or(CohomologyGroup {
                degree,
                rank: 0,
                torsion: Vec::new(),
            })
    }

    pub fn is_acyclic(&self) -> bool {
        self.groups.iter().all(CohomologyGroup::is_zero)
    }

    /// ℤ in degree 0, zero elsewhere.
    pub fn is_integers_in_degree_zero(&self) -> bool {
        self.groups.iter().all(|g| {
            if g.degree == 0 {
                g.rank == 1 && g.torsion.is_empty()
            } else {
                g.is_zero()
            }
        }) && self.in_degree(0).rank == 1
    }

    /// Equality of the groups in every degree, ignoring zero groups.
    pub fn isomorphic_to(&self, other: &Cohomology) -> bool {
        let nonzero =
            |c: &Cohomology| -> Vec<CohomologyGroup> { c.groups.iter().filter(|g| !g.is_zero()).cloned().collect() };
        nonzero(self) == nonzero(other)
    }
}

pub fn cohomology(complex: &IntCochainComplex) -> Cohomology {
    let snfs: Vec<SmithDecomposition> = complex.diffs.iter().map(smith).collect();
    let groups = complex
        .degrees()
        .enumerate()
        .map(|(k, degree)| {
            let outgoing = snfs.get(k).map_or(0, SmithDecomposition::rank);
            let incoming = if k == 0 { None } else { snfs.get(k - 1) };
            let incoming_rank = incoming.map_or(0, SmithDecomposition::rank);
            let torsion = incoming
                .map(|snf| snf.invariant_factors().into_iter().filter(|f| !f.is_one()).collect())
                .unwrap_or_default();
            CohomologyGroup {
                degree,
                rank: complex.ranks[k] - outgoing - incoming_rank,
                torsion,
            }
        })
        .collect();
    Cohomology { groups }
}

pub fn to_bigints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        to_bigints(v)
    }

    fn check_decomposition(a: &IntMatrix) {
        let snf = smith(a);
        assert_eq!(snf.u.mul(a).unwrap().mul(&snf.v).unwrap(), snf.s);
        assert!(inverse(&snf.u).is_some() || snf.u.rows() == 0);
        let factors = snf.invariant_factors();
        for w in factors.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn smith_examples() {
        let id = IntMatrix::identity(3);
        assert_eq!(smith(&id).s, id);
        let a = IntMatrix::from_rows(&[[2, 4], [6, 8]]);
        assert_eq!(smith(&a).invariant_factors(), ints(&[2, 4]));
        check_decomposition(&a);
        let z = IntMatrix::zeros(2, 3);
        assert!(smith(&z).s.is_zero());
        assert_eq!(smith(&z).rank(), 0);
    }

    #[test]
    fn smith_non_square() {
        let a = IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]);
        let snf = smith(&a);
        assert_eq!(snf.invariant_factors(), ints(&[2, 6, 12]));
        check_decomposition(&a);
        check_decomposition(&a.transpose());
    }

    #[test]
    fn solving() {
        let id = IntMatrix::identity(3);
        assert_eq!(solve(&id, &ints(&[4, -1, 7])).unwrap(), Some(ints(&[4, -1, 7])));
        assert_eq!(solve(&IntMatrix::from_rows(&[[2]]), &ints(&[3])).unwrap(), None);
        let a = IntMatrix::from_rows(&[
            [1, 2, 0, -1, 3, 1],
            [0, 1, 1, 2, -2, 0],
            [3, 0, 1, 1, 1, 1],
            [1, 1, 1, 1, 1, 1],
        ]);
        let x0 = ints(&[1, -2, 3, 0, 5, -1]);
        let b = a.mul_vec(&x0).unwrap();
        let x = solve(&a, &b).unwrap().expect("solvable");
        assert_eq!(a.mul_vec(&x).unwrap(), b);
        assert!(solve(&a, &ints(&[1, 2])).is_err());
    }

    #[test]
    fn kernels() {
        assert!(kernel_basis(&IntMatrix::identity(3)).is_empty());
        let k = kernel_basis(&IntMatrix::from_rows(&[[1, 1]]));
        assert_eq!(k.len(), 1);
        assert!(k[0] == ints(&[1, -1]) || k[0] == ints(&[-1, 1]));
        let k = kernel_basis(&IntMatrix::zeros(2, 3));
        assert_eq!(k.len(), 3);
        let mut sorted = k.clone();
        sorted.sort();
        assert_eq!(sorted, vec![ints(&[0, 0, 1]), ints(&[0, 1, 0]), ints(&[1, 0, 0])]);
    }

    #[test]
    fn surjectivity() {
        assert!(is_surjective(&IntMatrix::identity(2)));
        assert!(!is_surjective(&IntMatrix::from_rows(&[[2]])));
        assert!(is_surjective(&IntMatrix::from_rows(&[[1, 1]])));
        assert!(is_surjective(&IntMatrix::zeros(0, 3)));
        assert!(!is_surjective(&IntMatrix::zeros(1, 3)));
    }

    #[test]
    fn cohomology_examples() {
        let point = IntCochainComplex::new(0, vec![1], vec![]).unwrap();
        let h = cohomology(&point);
        assert!(h.is_integers_in_degree_zero());

        let interval = IntCochainComplex::new(0, vec![2, 1], vec![IntMatrix::from_rows(&[[-1, 1]])]).unwrap();
        let h = cohomology(&interval);
        assert_eq!(h.in_degree(0).rank, 1);
        assert!(h.in_degree(1).is_zero());

        let horn =
            IntCochainComplex::new(0, vec![3, 2], vec![IntMatrix::from_rows(&[[-1, 1, 0], [0, -1, 1]])]).unwrap();
        assert!(cohomology(&horn).is_integers_in_degree_zero());

        let torsion = IntCochainComplex::new(3, vec![1, 1], vec![IntMatrix::from_rows(&[[2]])]).unwrap();
        let h = cohomology(&torsion);
        assert!(h.in_degree(3).is_zero());
        assert_eq!(h.in_degree(4).torsion, ints(&[2]));
        assert_eq!(h.in_degree(4).to_string(), "H^4 = ℤ/2");
    }

    #[test]
    fn rejects_non_complex() {
        let d0 = IntMatrix::from_rows(&[[1]]);
        let d1 = IntMatrix::from_rows(&[[1]]);
        assert!(matches!(
            IntCochainComplex::new(0, vec![1, 1, 1], vec![d0, d1]),
            Err(LinalgError::NotAComplex { .. })
        ));
    }

    #[test]
    fn exact_two_term_complex_is_acyclic() {
        let d = IntMatrix::from_rows(&[[2, 1], [1, 1]]);
        let c = IntCochainComplex::new(-1, vec![2, 2], vec![d]).unwrap();
        assert!(cohomology(&c).is_acyclic());
    }

    #[test]
    fn inverse_of_unimodular() {
        let a = IntMatrix::from_rows(&[[2, 1], [1, 1]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(a.mul(&inv).unwrap(), IntMatrix::identity(2));
        assert!(inverse(&IntMatrix::from_rows(&[[2, 0], [0, 1]])).is_none());
    }
}
