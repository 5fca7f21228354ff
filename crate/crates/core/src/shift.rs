//! Subshifts of finite type: admissible words, the cylinder-function
//! filtration, Perron data, the Parry measure, coboundary ranks and letter
//! automorphisms.
//!
//! For the free group on g generators the number of new cylinder functions
//! at level n ≥ 1 is 2g(2g−1)^{n−1}(2g−2), as counted by enumeration. A
//! printed variant with base (2g−2) does not match the count; we report the
//! enumerated value.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{cayley_schottky_matrix, EdgeMatrix};
use crate::ktheory::{irreducibility_check, IntegerMatrix};
use crate::matrix::BinaryMatrix;

pub type Word = Vec<usize>;

pub const DEFAULT_BUDGET: u128 = 1_000_000;
pub const BUDGET_ENV: &str = "MUMFORD_ENUM_BUDGET";
pub const AUTOMORPHISM_CAP: usize = 10;

/// Reads the enumeration budget override from the environment.
pub fn budget_from_env() -> u128 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// A one-sided subshift of finite type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SFTData {
    matrix: BinaryMatrix,
    labels: Vec<String>,
    involution: Option<Vec<usize>>,
    #[serde(skip, default = "default_budget")]
    budget: u128,
}

fn default_budget() -> u128 {
    DEFAULT_BUDGET
}

impl SFTData {
    pub fn new(
        matrix: BinaryMatrix,
        labels: Vec<String>,
        involution: Option<Vec<usize>>,
    ) -> Result<Self> {
        let n = matrix.size();
        if n == 0 {
            return Err(Error::InvalidTransitionMatrix("empty alphabet".into()));
        }
        // Every word must extend for V_n ⊂ V_{n+1}.
        if let Some(i) = (0..n).find(|&i| matrix.row_sum(i) == 0) {
            return Err(Error::InvalidTransitionMatrix(format!("row {i} is zero")));
        }
        if labels.len() != n {
            return Err(Error::InvalidParameter(format!(
                "{} labels for an alphabet of size {n}",
                labels.len()
            )));
        }
        if let Some(inv) = &involution {
            let ok = inv.len() == n
                && n % 2 == 0
                && inv.iter().enumerate().all(|(i, &j)| j < n && j != i && inv[j] == i);
            if !ok {
                return Err(Error::InvalidParameter(
                    "involution must be a fixed-point-free involution of the alphabet".into(),
                ));
            }
        }
        Ok(Self { matrix, labels, involution, budget: DEFAULT_BUDGET })
    }

    pub fn from_matrix(matrix: BinaryMatrix) -> Result<Self> {
        let labels = (0..matrix.size()).map(|i| i.to_string()).collect();
        Self::new(matrix, labels, None)
    }

    /// The full shift of a Schottky group of rank g, letters γ_i and γ_i^{-1}.
    pub fn schottky(g: usize) -> Result<Self> {
        let m = cayley_schottky_matrix(g)?;
        let labels = (0..2 * g)
            .map(|i| if i < g { format!("g{}", i + 1) } else { format!("g{}^-1", i - g + 1) })
            .collect();
        let inv = (0..2 * g).map(|i| (i + g) % (2 * g)).collect();
        Self::new(m.matrix, labels, Some(inv))
    }

    /// Shift on oriented edges with the edge reversal as involution.
    pub fn from_edge_matrix(e: &EdgeMatrix) -> Result<Self> {
        let labels = e
            .labels
            .iter()
            .map(|l| format!("e{}{}", l.edge, if l.forward { "+" } else { "-" }))
            .collect();
        Self::new(e.matrix.clone(), labels, Some(e.reversal_map()))
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn budget(&self) -> u128 {
        self.budget
    }

    pub fn matrix(&self) -> &BinaryMatrix {
        &self.matrix
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn involution(&self) -> Option<&[usize]> {
        self.involution.as_deref()
    }

    pub fn alphabet_size(&self) -> usize {
        self.matrix.size()
    }

    pub fn is_irreducible(&self) -> bool {
        irreducibility_check(&self.matrix)
    }

    pub fn is_admissible(&self, w: &[usize]) -> bool {
        let n = self.alphabet_size();
        !w.is_empty()
            && w.iter().all(|&a| a < n)
            && w.windows(2).all(|p| self.matrix.get(p[0], p[1]))
    }

    fn check_budget(&self, needed: u128) -> Result<()> {
        if needed > self.budget {
            return Err(Error::EnumerationBudgetExceeded { needed, budget: self.budget });
        }
        Ok(())
    }

    /// Number of admissible words of length `len`, by exact matrix powers.
    pub fn word_count(&self, len: usize) -> Result<u128> {
        if len == 0 {
            return Ok(1);
        }
        Ok(self.ending_counts(len)?.iter().sum())
    }

    /// c(i) = number of admissible words of length `len` ending in i.
    fn ending_counts(&self, len: usize) -> Result<Vec<u128>> {
        let n = self.alphabet_size();
        let mut c = vec![1u128; n];
        for _ in 1..len {
            let mut next = vec![0u128; n];
            for i in 0..n {
                for j in self.matrix.successors(i) {
                    next[j] = next[j]
                        .checked_add(c[i])
                        .ok_or_else(|| Error::Overflow(format!("word count at length {len}")))?;
                }
            }
            c = next;
        }
        Ok(c)
    }

    /// All admissible words of length n in lexicographic order.
    pub fn enumerate_words(&self, n: usize) -> Result<Vec<Word>> {
        if n == 0 {
            return Err(Error::InvalidParameter("word length must be at least 1".into()));
        }
        let count = self.word_count(n)?;
        self.check_budget(count)?;
        let mut out = Vec::with_capacity(count as usize);
        let mut stack: Vec<Word> = (0..self.alphabet_size()).rev().map(|a| vec![a]).collect();
        while let Some(w) = stack.pop() {
            if w.len() == n {
                out.push(w);
                continue;
            }
            let last = *w.last().unwrap();
            let succ: Vec<usize> = self.matrix.successors(last).collect();
            for &a in succ.iter().rev() {
                let mut x = w.clone();
                x.push(a);
                stack.push(x);
            }
        }
        Ok(out)
    }

    /// dim V_n for n = 0..=levels.
    pub fn filtration_dims(&self, levels: usize) -> Result<FiltrationDims> {
        let dims = (0..=levels).map(|n| self.word_count(n + 1)).collect::<Result<_>>()?;
        Ok(FiltrationDims { dims })
    }

    /// Perron eigenvalue and eigenvectors by power iteration on A + I, which
    /// shares the Perron vectors of A and is primitive for irreducible A.
    pub fn perron_data(&self) -> Result<PerronData> {
        if !self.is_irreducible() {
            return Err(Error::RequiresIrreducible);
        }
        let right = power_iteration(&self.matrix)?;
        let left = power_iteration(&self.matrix.transpose())?;
        let lambda = apply(&self.matrix, &right).iter().sum::<f64>();
        let residual = residual(&self.matrix, &right, lambda);
        Ok(PerronData { lambda, delta_h: lambda.ln(), left, right, residual })
    }

    pub fn parry_measure(&self) -> Result<ParryMeasure> {
        let perron = self.perron_data()?;
        let norm = perron.left.iter().zip(&perron.right).map(|(l, r)| l * r).sum();
        Ok(ParryMeasure { sft: self.clone(), perron, norm })
    }

    /// μ(w) under the Parry measure.
    pub fn parry_cylinder_measure(&self, w: &[usize]) -> Result<f64> {
        self.parry_measure()?.weight(w)
    }

    /// dim(V_n / δV_{n−1}) for n = 1..=levels, where δf = f − f∘T, from the
    /// exact rank of the integer coboundary matrix.
    pub fn cohomology_filtration_dims(&self, levels: usize) -> Result<Vec<CohomologyLevel>> {
        if levels == 0 {
            return Err(Error::InvalidParameter("level must be at least 1".into()));
        }
        (1..=levels)
            .map(|n| {
                let m = self.coboundary_matrix(n)?;
                let rank = m.rank() as u128;
                let dim_v = m.rows() as u128;
                Ok(CohomologyLevel { n, dim_v, coboundary_rank: rank, dim: dim_v - rank })
            })
            .collect()
    }

    /// Matrix of δ: V_{n−1} → V_n in the indicator bases. Rows are words of
    /// length n+1, columns words of length n.
    pub fn coboundary_matrix(&self, n: usize) -> Result<IntegerMatrix> {
        let rows = self.word_count(n + 1)?;
        let cols = self.word_count(n)?;
        self.check_budget(rows.saturating_mul(cols))?;
        let long = self.enumerate_words(n + 1)?;
        let short = self.enumerate_words(n)?;
        let index = |u: &[usize]| short.binary_search_by(|x| x.as_slice().cmp(u)).unwrap();
        let mut m = IntegerMatrix::zeros(long.len(), short.len());
        for (r, w) in long.iter().enumerate() {
            m[(r, index(&w[..n]))] += 1;
            m[(r, index(&w[1..]))] -= 1;
        }
        Ok(m)
    }

    /// Letter permutations σ with A(σi, σj) = A(i, j), commuting with the
    /// involution when one is present. Lexicographically sorted.
    pub fn alphabet_automorphisms(&self) -> Result<Vec<Vec<usize>>> {
        let n = self.alphabet_size();
        if n > AUTOMORPHISM_CAP {
            return Err(Error::EnumerationBudgetExceeded {
                needed: n as u128,
                budget: AUTOMORPHISM_CAP as u128,
            });
        }
        let mut out = Vec::new();
        let mut sigma = Vec::with_capacity(n);
        let mut used = vec![false; n];
        self.extend_automorphism(&mut sigma, &mut used, &mut out);
        Ok(out)
    }

    fn extend_automorphism(&self, sigma: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let n = self.alphabet_size();
        let i = sigma.len();
        if i == n {
            let commutes = self
                .involution
                .as_ref()
                .map_or(true, |inv| (0..n).all(|k| sigma[inv[k]] == inv[sigma[k]]));
            if commutes {
                out.push(sigma.clone());
            }
            return;
        }
        for t in 0..n {
            if used[t] || self.matrix.get(i, i) != self.matrix.get(t, t) {
                continue;
            }
            let ok = (0..i).all(|k| {
                self.matrix.get(i, k) == self.matrix.get(t, sigma[k])
                    && self.matrix.get(k, i) == self.matrix.get(sigma[k], t)
            });
            if ok {
                sigma.push(t);
                used[t] = true;
                self.extend_automorphism(sigma, used, out);
                used[t] = false;
                sigma.pop();
            }
        }
    }

    /// Blocks c_i(n) = #{admissible μ, |μ| = n, A(last μ, i) = 1} of the
    /// finite-dimensional algebras filtering the AF core, for n = 0..=levels.
    /// The empty word is composable with every letter.
    pub fn af_core_dims(&self, levels: usize) -> Result<Vec<AfCoreLevel>> {
        if !self.is_irreducible() {
            return Err(Error::RequiresIrreducible);
        }
        let n = self.alphabet_size();
        (0..=levels)
            .map(|lvl| {
                let blocks = if lvl == 0 {
                    vec![1u128; n]
                } else {
                    let ends = self.ending_counts(lvl)?;
                    (0..n)
                        .map(|i| (0..n).filter(|&j| self.matrix.get(j, i)).map(|j| ends[j]).sum())
                        .collect()
                };
                let total = blocks
                    .iter()
                    .try_fold(0u128, |acc: u128, &c| acc.checked_add(c.checked_mul(c)?))
                    .ok_or_else(|| Error::Overflow(format!("AF core dimension at level {lvl}")))?;
                // The budget applies to the words μ indexing the matrix units.
                self.check_budget(blocks.iter().sum())?;
                Ok(AfCoreLevel { level: lvl, blocks, total })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AfCoreLevel {
    pub level: usize,
    pub blocks: Vec<u128>,
    pub total: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyLevel {
    pub n: usize,
    pub dim_v: u128,
    pub coboundary_rank: u128,
    pub dim: u128,
}

/// dim V_n for n = 0..=N.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationDims {
    pub dims: Vec<u128>,
}

impl FiltrationDims {
    pub fn levels(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    pub fn v(&self, n: usize) -> u128 {
        self.dims[n]
    }

    /// dim Ê_n = dim V_n − dim V_{n−1}, with dim Ê_0 = dim V_0.
    pub fn e_hat(&self, n: usize) -> u128 {
        if n == 0 {
            self.dims[0]
        } else {
            self.dims[n] - self.dims[n - 1]
        }
    }

    pub fn e_hats(&self) -> Vec<u128> {
        (0..self.dims.len()).map(|n| self.e_hat(n)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerronData {
    pub lambda: f64,
    pub delta_h: f64,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub residual: f64,
}

fn apply(a: &BinaryMatrix, v: &[f64]) -> Vec<f64> {
    (0..a.size()).map(|i| a.successors(i).map(|j| v[j]).sum()).collect()
}

fn residual(a: &BinaryMatrix, v: &[f64], lambda: f64) -> f64 {
    let av = apply(a, v);
    let num = av.iter().zip(v).map(|(x, y)| (x - lambda * y).abs()).fold(0.0, f64::max);
    let den = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    num / den
}

const PERRON_TOL: f64 = 1e-12;
const PERRON_MAX_ITER: usize = 1_000_000;

fn power_iteration(a: &BinaryMatrix) -> Result<Vec<f64>> {
    let n = a.size();
    let mut v = vec![1.0 / n as f64; n];
    for _ in 0..PERRON_MAX_ITER {
        let av = apply(a, &v);
        let mut w: Vec<f64> = av.iter().zip(&v).map(|(x, y)| x + y).collect();
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
        let lambda = apply(a, &w).iter().sum::<f64>();
        v = w;
        if residual(a, &v, lambda) < PERRON_TOL / 10.0 {
            return Ok(v);
        }
    }
    Err(Error::NoConvergence("power iteration did not reach residual 1e-12".into()))
}

/// Parry measure of an irreducible SFT.
#[derive(Debug, Clone)]
pub struct ParryMeasure {
    sft: SFTData,
    perron: PerronData,
    norm: f64,
}

impl ParryMeasure {
    pub fn perron(&self) -> &PerronData {
        &self.perron
    }

    pub fn sft(&self) -> &SFTData {
        &self.sft
    }

    /// μ(w) = ℓ(w_0) r(w_last) λ^{−(|w|−1)} / Σ ℓ_i r_i.
    pub fn weight(&self, w: &[usize]) -> Result<f64> {
        if !self.sft.is_admissible(w) {
            return Err(Error::NotAdmissible(w.to_vec()));
        }
        Ok(self.weight_unchecked(w))
    }

    pub(crate) fn weight_unchecked(&self, w: &[usize]) -> f64 {
        let p = &self.perron;
        p.left[w[0]] * p.right[w[w.len() - 1]] * p.lambda.powi(1 - w.len() as i32) / self.norm
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{directed_edge_matrix, theta_graph};
    use proptest::prelude::*;

    #[test]
    fn zero_rows_are_rejected() {
        let m = BinaryMatrix::from_rows(&[vec![1u8, 1], vec![0, 0]]).unwrap();
        assert!(matches!(SFTData::from_matrix(m), Err(Error::InvalidTransitionMatrix(_))));
        // A zero column is allowed: letter 0 never follows anything.
        let m = BinaryMatrix::from_rows(&[vec![0u8, 1], vec![0, 1]]).unwrap();
        let d = SFTData::from_matrix(m).unwrap().filtration_dims(3).unwrap();
        assert_eq!(d.e_hats(), vec![2, 0, 0, 0]);
    }

    fn theta() -> SFTData {
        SFTData::from_edge_matrix(&directed_edge_matrix(&theta_graph()).unwrap()).unwrap()
    }

    fn one_letter() -> SFTData {
        SFTData::from_matrix(BinaryMatrix::identity(1)).unwrap()
    }

    /// All sequences of the given length filtered by admissibility.
    fn brute_words(s: &SFTData, len: usize) -> Vec<Word> {
        let n = s.alphabet_size();
        let mut out = Vec::new();
        for code in 0..n.pow(len as u32) {
            let mut w = Vec::with_capacity(len);
            let mut c = code;
            for _ in 0..len {
                w.push(c % n);
                c /= n;
            }
            w.reverse();
            if s.is_admissible(&w) {
                out.push(w);
            }
        }
        out
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let g2 = SFTData::schottky(2).unwrap();
        assert_eq!(g2.enumerate_words(2).unwrap().len(), 12);
        assert_eq!(theta().enumerate_words(3).unwrap().len(), 24);
        for len in 1..=4 {
            assert_eq!(g2.enumerate_words(len).unwrap(), brute_words(&g2, len));
            assert_eq!(theta().enumerate_words(len).unwrap(), brute_words(&theta(), len));
        }
        let single: Vec<Word> = (0..4).map(|a| vec![a]).collect();
        assert_eq!(g2.enumerate_words(1).unwrap(), single);
    }

    #[test]
    fn budget_is_enforced() {
        let g2 = SFTData::schottky(2).unwrap().with_budget(200);
        assert!(matches!(
            g2.enumerate_words(5),
            Err(Error::EnumerationBudgetExceeded { needed: 324, budget: 200 })
        ));
        assert!(g2.enumerate_words(4).is_ok());
    }

    #[test]
    fn filtration_dims_of_free_group() {
        let g2 = SFTData::schottky(2).unwrap();
        let f = g2.filtration_dims(6).unwrap();
        assert_eq!(&f.dims[..3], &[4, 12, 36]);
        for n in 1..=6 {
            assert_eq!(f.e_hat(n), 8 * 3u128.pow(n as u32 - 1));
        }
        for g in 2..=4u32 {
            let f = SFTData::schottky(g as usize).unwrap().filtration_dims(5).unwrap();
            let (a, b) = (2 * g as u128, 2 * g as u128 - 1);
            for n in 1..=5u32 {
                assert_eq!(f.e_hat(n as usize), a * b.pow(n - 1) * (a - 2));
            }
        }
        assert!(one_letter().filtration_dims(5).unwrap().dims.iter().all(|&d| d == 1));
    }

    #[test]
    fn perron_values() {
        let p = SFTData::schottky(2).unwrap().perron_data().unwrap();
        assert!((p.lambda - 3.0).abs() < 1e-12 && (p.delta_h - 3f64.ln()).abs() < 1e-12);
        assert!(p.residual < 1e-12);
        let p = one_letter().perron_data().unwrap();
        assert!((p.lambda - 1.0).abs() < 1e-12 && p.delta_h.abs() < 1e-12);
        let p = theta().perron_data().unwrap();
        assert!((p.lambda - 2.0).abs() < 1e-12);
        let red = SFTData::from_matrix(BinaryMatrix::identity(2)).unwrap();
        assert!(matches!(red.perron_data(), Err(Error::RequiresIrreducible)));
    }

    #[test]
    fn parry_values() {
        let g2 = SFTData::schottky(2).unwrap();
        assert!((g2.parry_cylinder_measure(&[0]).unwrap() - 0.25).abs() < 1e-14);
        assert!((g2.parry_cylinder_measure(&[0, 1]).unwrap() - 1.0 / 12.0).abs() < 1e-14);
        assert!(matches!(g2.parry_cylinder_measure(&[0, 2]), Err(Error::NotAdmissible(_))));
        assert!((one_letter().parry_cylinder_measure(&[0, 0, 0]).unwrap() - 1.0).abs() < 1e-14);
    }

    /// Rank of the coboundary via the n-block graph: δ is the incidence
    /// matrix of the graph on words of length n with an edge for each word of
    /// length n+1, so rank = #vertices − #weakly connected components.
    fn components_rank(s: &SFTData, n: usize) -> u128 {
        let short = s.enumerate_words(n).unwrap();
        let mut parent: Vec<usize> = (0..short.len()).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for w in s.enumerate_words(n + 1).unwrap() {
            let a = short.binary_search(&w[..n].to_vec()).unwrap();
            let b = short.binary_search(&w[1..].to_vec()).unwrap();
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let comps = (0..short.len()).filter(|&i| find(&mut parent, i) == i).count();
        (short.len() - comps) as u128
    }

    #[test]
    fn cohomology_dims() {
        let g2 = SFTData::schottky(2).unwrap();
        let levels = g2.cohomology_filtration_dims(4).unwrap();
        assert_eq!(levels[0].dim, 9);
        for l in &levels {
            assert_eq!(l.coboundary_rank, components_rank(&g2, l.n));
        }
        let one = one_letter().cohomology_filtration_dims(3).unwrap();
        assert!(one.iter().all(|l| l.dim == 1));
        let th = theta().cohomology_filtration_dims(3).unwrap();
        for l in &th {
            assert_eq!(l.coboundary_rank, components_rank(&theta(), l.n));
        }
        assert_eq!(th[0].dim, 12 - 5);
    }

    #[test]
    fn automorphisms() {
        let free = SFTData::from_matrix(cayley_schottky_matrix(2).unwrap().matrix).unwrap();
        assert_eq!(free.alphabet_automorphisms().unwrap().len(), 8);
        assert_eq!(SFTData::schottky(2).unwrap().alphabet_automorphisms().unwrap().len(), 8);
        let id = SFTData::from_matrix(BinaryMatrix::identity(4)).unwrap();
        assert_eq!(id.alphabet_automorphisms().unwrap().len(), 24);
        let th = theta().alphabet_automorphisms().unwrap();
        let words = theta().enumerate_words(4).unwrap();
        for s in &th {
            for w in &words {
                let img: Word = w.iter().map(|&a| s[a]).collect();
                assert!(theta().is_admissible(&img));
            }
        }
        // Brute force over all 720 permutations of the six oriented edges.
        let m = theta();
        let mut count = 0;
        let mut p: Vec<usize> = (0..6).collect();
        loop {
            let keeps = (0..6).all(|i| (0..6).all(|j| m.matrix().get(p[i], p[j]) == m.matrix().get(i, j)));
            let inv = m.involution().unwrap();
            if keeps && (0..6).all(|k| p[inv[k]] == inv[p[k]]) {
                count += 1;
            }
            // next permutation
            let Some(i) = (0..5).rev().find(|&i| p[i] < p[i + 1]) else { break };
            let j = (i + 1..6).rev().find(|&j| p[j] > p[i]).unwrap();
            p.swap(i, j);
            p[i + 1..].reverse();
        }
        assert_eq!(th.len(), count);
        let big = SFTData::from_matrix(BinaryMatrix::identity(11)).unwrap();
        assert!(big.alphabet_automorphisms().is_err());
    }

    #[test]
    fn af_core_blocks() {
        let g2 = SFTData::schottky(2).unwrap();
        let lv = g2.af_core_dims(3).unwrap();
        assert_eq!(lv[0].blocks, vec![1; 4]);
        assert_eq!(lv[0].total, 4);
        assert_eq!(lv[1].blocks, vec![3; 4]);
        assert_eq!(lv[1].total, 36);
        assert_eq!(lv[2].blocks, vec![9; 4]);
        assert_eq!(lv[2].total, 324);
        // Enumeration oracle for the block sizes.
        for l in &lv[1..] {
            let words = g2.enumerate_words(l.level).unwrap();
            for i in 0..4 {
                let c = words.iter().filter(|w| g2.matrix().get(*w.last().unwrap(), i)).count();
                assert_eq!(l.blocks[i], c as u128);
            }
        }
    }

    fn irreducible_sft() -> impl Strategy<Value = SFTData> {
        (2usize..=5).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
                // A cycle through all letters keeps the matrix irreducible.
                let m = BinaryMatrix::from_fn(n, |i, j| bits[i * n + j] || j == (i + 1) % n);
                SFTData::from_matrix(m).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn dims_telescope_and_match_enumeration(s in irreducible_sft()) {
            let f = s.filtration_dims(4).unwrap();
            let mut acc = 0;
            for n in 0..=4 {
                acc += f.e_hat(n);
                prop_assert_eq!(acc, f.v(n));
                prop_assert_eq!(f.v(n), s.enumerate_words(n + 1).unwrap().len() as u128);
            }
        }

        #[test]
        fn parry_additivity(s in irreducible_sft()) {
            let mu = s.parry_measure().unwrap();
            let ones: f64 = s.enumerate_words(1).unwrap().iter().map(|w| mu.weight(w).unwrap()).sum();
            prop_assert!((ones - 1.0).abs() < 1e-12);
            for len in 1..=3 {
                for w in s.enumerate_words(len).unwrap() {
                    let ext: f64 = s.matrix().successors(*w.last().unwrap())
                        .map(|a| { let mut x = w.clone(); x.push(a); mu.weight(&x).unwrap() })
                        .sum();
                    prop_assert!((ext - mu.weight(&w).unwrap()).abs() < 1e-12);
                }
            }
        }
    }
}
