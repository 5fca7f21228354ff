//! Exact integer linear algebra and Cuntz–Krieger K-theory.
//!
//! K0 = Z^n / (1 − A^t) Z^n and K1 = ker(1 − A^t), read off from the Smith
//! normal form of 1 − A^t.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::BinaryMatrix;

/// A dense rectangular matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Clone + Into<BigInt>>(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Parse("ragged integer matrix".into()));
        }
        let data = rows.iter().flat_map(|row| row.iter().cloned().map(Into::into)).collect();
        Ok(Self { rows: r, cols: c, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    /// 1 − A^t for a square 0/1 matrix A.
    pub fn one_minus_transpose(a: &BinaryMatrix) -> Self {
        let n = a.size();
        let mut m = Self::identity(n);
        for i in 0..n {
            for j in 0..n {
                if a.get(j, i) {
                    m[(i, j)] -= 1;
                }
            }
        }
        m
    }

    /// Exact rank over the rationals by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        let mut prev = BigInt::one();
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| !m[(r, c)].is_zero()) else { continue };
            m.swap_rows(rank, p);
            for r in rank + 1..m.rows {
                for k in c + 1..m.cols {
                    let v = (&m[(rank, c)] * &m[(r, k)] - &m[(r, c)] * &m[(rank, k)]) / &prev;
                    m[(r, k)] = v;
                }
                m[(r, c)] = BigInt::zero();
            }
            prev = m[(rank, c)].clone();
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += f · row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        for j in 0..self.cols {
            let v = f * &self[(src, j)];
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += f · col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        for i in 0..self.rows {
            let v = f * &self[(i, src)];
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }

    /// Exact determinant of a square matrix (fraction-free elimination).
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[(r, c)].is_zero()) else {
                return BigInt::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                sign = -sign;
            }
            for r in c + 1..n {
                for k in c + 1..n {
                    let v = (&m[(c, c)] * &m[(r, k)] - &m[(r, c)] * &m[(c, k)]) / &prev;
                    m[(r, k)] = v;
                }
                m[(r, c)] = BigInt::zero();
            }
            prev = m[(c, c)].clone();
        }
        if n == 0 {
            return BigInt::one();
        }
        sign * &m[(n - 1, n - 1)]
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl From<&BinaryMatrix> for IntegerMatrix {
    fn from(a: &BinaryMatrix) -> Self {
        let n = a.size();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if a.get(i, j) {
                    m[(i, j)] = BigInt::one();
                }
            }
        }
        m
    }
}

impl TryFrom<&IntegerMatrix> for BinaryMatrix {
    type Error = Error;
    fn try_from(m: &IntegerMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidTransitionMatrix(format!(
                "matrix is {}x{}, not square",
                m.rows, m.cols
            )));
        }
        let mut b = BinaryMatrix::zeros(m.rows);
        for i in 0..m.rows {
            for j in 0..m.cols {
                let v = &m[(i, j)];
                if v.is_one() {
                    b.set(i, j, true);
                } else if !v.is_zero() {
                    return Err(Error::InvalidTransitionMatrix(format!(
                        "entry ({i},{j}) = {v} is not 0 or 1"
                    )));
                }
            }
        }
        Ok(b)
    }
}

/// U · M · V = diag(d_1, …, d_k) with U, V unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub diagonal: Vec<BigInt>,
    pub left: IntegerMatrix,
    pub right: IntegerMatrix,
}

impl SmithDecomposition {
    /// The rectangular diagonal matrix with the invariant factors.
    pub fn diagonal_matrix(&self) -> IntegerMatrix {
        let mut d = IntegerMatrix::zeros(self.left.rows, self.right.cols);
        for (i, v) in self.diagonal.iter().enumerate() {
            d[(i, i)] = v.clone();
        }
        d
    }

    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smith normal form with pivoting on the entry of least nonzero absolute
/// value.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);
    let k = rows.min(cols);

    for t in 0..k {
        loop {
            // Pivot: least nonzero |entry| in the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &a[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(a, u, v, k);
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -a[(i, t)].div_floor(&a[(t, t)]);
                a.add_row(i, t, &q);
                u.add_row(i, t, &q);
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -a[(t, j)].div_floor(&a[(t, t)]);
                a.add_col(j, t, &q);
                v.add_col(j, t, &q);
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // Divisibility: the pivot must divide every trailing entry.
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(i, j)].is_multiple_of(&a[(t, t)]));
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
                    a.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(a, u, v, k)
}

fn finish(a: IntegerMatrix, u: IntegerMatrix, v: IntegerMatrix, k: usize) -> SmithDecomposition {
    let diagonal = (0..k).map(|i| a[(i, i)].clone()).collect();
    SmithDecomposition { diagonal, left: u, right: v }
}

/// A finitely generated abelian group Z^rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_m with
/// d_1 | d_2 | … | d_m and every d_i ≥ 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroupDescriptor {
    pub rank: usize,
    #[serde(serialize_with = "serialize_torsion", deserialize_with = "deserialize_torsion")]
    pub torsion: Vec<BigInt>,
}

fn serialize_torsion<S: Serializer>(t: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(t.len()))?;
    for d in t {
        match d.to_u64() {
            Some(x) => seq.serialize_element(&x)?,
            None => seq.serialize_element(&d.to_string())?,
        }
    }
    seq.end()
}

fn deserialize_torsion<'de, D>(d: D) -> std::result::Result<Vec<BigInt>, D::Error>
where
    D: serde::Deserializer<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Entry {
        Num(u64),
        Str(String),
    }
    let raw = Vec::<Entry>::deserialize(d)?;
    raw.into_iter()
        .map(|e| match e {
            Entry::Num(x) => Ok(BigInt::from(x)),
            Entry::Str(s) => s.parse().map_err(serde::de::Error::custom),
        })
        .collect()
}

impl AbelianGroupDescriptor {
    pub fn free(rank: usize) -> Self {
        Self { rank, torsion: Vec::new() }
    }

    /// Cokernel Z^rows / M Z^cols.
    pub fn cokernel(m: &IntegerMatrix) -> Self {
        let snf = smith_normal_form(m);
        let nonzero = snf.rank();
        let rank = m.rows() - nonzero;
        let torsion = snf.diagonal.into_iter().filter(|d| *d > BigInt::one()).collect();
        Self { rank, torsion }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianGroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        if self.rank > 0 {
            parts.push(format!("Z^{}", self.rank));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeGroupRank {
    pub rank: usize,
}

/// K-groups of the Cuntz–Krieger algebra of a 0/1 matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KTheory {
    pub k0: AbelianGroupDescriptor,
    pub k1: FreeGroupRank,
}

impl KTheory {
    pub fn k1_group(&self) -> AbelianGroupDescriptor {
        AbelianGroupDescriptor::free(self.k1.rank)
    }
}

pub fn ck_k_theory(a: &BinaryMatrix) -> KTheory {
    let m = IntegerMatrix::one_minus_transpose(a);
    let k0 = AbelianGroupDescriptor::cokernel(&m);
    // Over a square matrix the cokernel rank equals the kernel rank.
    let k1 = FreeGroupRank { rank: a.size() - smith_normal_form(&m).rank() };
    KTheory { k0, k1 }
}

/// Like [`ck_k_theory`] but for an integer matrix that still needs to be
/// checked for the 0/1 shape.
pub fn ck_k_theory_checked(m: &IntegerMatrix) -> Result<KTheory> {
    Ok(ck_k_theory(&BinaryMatrix::try_from(m)?))
}

/// Strong connectivity of the directed graph on indices.
pub fn irreducibility_check(a: &BinaryMatrix) -> bool {
    let n = a.size();
    if n == 0 {
        return false;
    }
    let r = a.reachability();
    (0..n).all(|i| (0..n).all(|j| r.get(i, j)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "reason")]
pub enum StableIsoVerdict {
    StablyIsomorphic,
    Inconclusive(String),
}

/// K_0 of a crossed product recorded as a constant rather than computed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordedKGroup {
    pub name: String,
    pub k0: AbelianGroupDescriptor,
    pub summands: String,
}

#[derive(Deserialize)]
struct RecordedFile {
    groups: Vec<RecordedKGroup>,
}

/// K_0 of the boundary crossed products of the two CMSZ fake projective
/// plane groups, shipped in `data/cmsz_k_groups.json`.
pub fn cmsz_k_groups() -> Vec<RecordedKGroup> {
    let file: RecordedFile = serde_json::from_str(include_str!("../data/cmsz_k_groups.json"))
        .expect("bundled data file is valid");
    file.groups
}

/// One-sided criterion: irreducible, non-permutation, equal K0.
pub fn stable_iso_verdict(a: &BinaryMatrix, b: &BinaryMatrix) -> StableIsoVerdict {
    for (name, m) in [("first", a), ("second", b)] {
        if !irreducibility_check(m) {
            return StableIsoVerdict::Inconclusive(format!("{name} matrix is reducible"));
        }
        if m.is_permutation_matrix() {
            return StableIsoVerdict::Inconclusive(format!("{name} matrix is a permutation matrix"));
        }
    }
    let (ka, kb) = (ck_k_theory(a), ck_k_theory(b));
    if ka.k0 == kb.k0 {
        StableIsoVerdict::StablyIsomorphic
    } else {
        StableIsoVerdict::Inconclusive(format!("K0 differ: {} vs {}", ka.k0, kb.k0))
    }
}
