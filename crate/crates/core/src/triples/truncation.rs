use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::{CooMatrix, CsrMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::operator_norm;
use crate::shift::{ParryMeasure, SFTData, Word};

/// The cylinder-function space V_N of an SFT with the Parry measure, in the
/// orthonormal basis e_w = χ_w / √μ(w), |w| = N + 1, together with the
/// partial isometries
///
/// (S_i f)(y) = A(i, y_0) c_i(y_0) f(i y),  c_i(y_0)² = ℓ(i) / (λ ℓ(y_0)),
///
/// which map V_{n+1} onto V_n. Their adjoints S_i^* are isometries on
/// cylinders and satisfy Σ_j S_j^* S_j = 1 and S_i S_i^* = Σ_j A_ij S_j^* S_j,
/// so the family {S_i^*} obeys the Cuntz–Krieger relations.
#[derive(Debug, Clone)]
pub struct SpectralTruncation {
    sft: SFTData,
    levels: usize,
    words: Vec<Word>,
    /// prefix[n][k] is the index of the length-(n+1) prefix of words[k].
    prefix: Vec<Vec<usize>>,
    /// Parry weights of the length-(n+1) words, n = 0..=N.
    level_mu: Vec<Vec<f64>>,
    sqrt_mu: Vec<f64>,
    s: Vec<CsrMatrix<f64>>,
    s_t: Vec<CsrMatrix<f64>>,
    schedule: Vec<f64>,
    twist: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CkResiduals {
    /// Truncation level N; residuals are measured on V_{N−1}.
    pub levels: usize,
    /// Frobenius norm of (Σ_j S_j^* S_j − 1) restricted to V_{N−1}.
    pub sum_relation: f64,
    /// Frobenius norms of (S_i S_i^* − Σ_j A_ij S_j^* S_j) on V_{N−1}.
    pub letter_relations: Vec<f64>,
}

impl CkResiduals {
    pub fn max(&self) -> f64 {
        self.letter_relations.iter().copied().fold(self.sum_relation, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorNorm {
    pub letter: String,
    pub norm: f64,
    pub k_i: usize,
}

impl SpectralTruncation {
    pub fn build(sft: &SFTData, levels: usize, twist: Option<Vec<usize>>) -> Result<Self> {
        if levels < 2 {
            return Err(Error::TruncationTooSmall(levels));
        }
        let mu = sft.parry_measure()?;
        if let Some(sigma) = &twist {
            check_twist(sft, sigma)?;
        }
        let level_words: Vec<Vec<Word>> =
            (0..=levels).map(|n| sft.enumerate_words(n + 1)).collect::<Result<_>>()?;
        let words = level_words[levels].clone();
        let level_mu: Vec<Vec<f64>> = level_words
            .iter()
            .map(|ws| ws.iter().map(|w| mu.weight(w)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let prefix = (0..=levels)
            .map(|n| {
                words
                    .iter()
                    .map(|w| index_of(&level_words[n], &w[..=n]))
                    .collect()
            })
            .collect();
        let sqrt_mu: Vec<f64> = level_mu[levels].iter().map(|m| m.sqrt()).collect();
        let s: Vec<CsrMatrix<f64>> = (0..sft.alphabet_size())
            .map(|i| letter_operator(sft, &mu, &words, &sqrt_mu, i))
            .collect();
        let s_t = s.iter().map(CsrMatrix::transpose).collect();
        let schedule = (0..=levels).map(|n| n as f64).collect();
        Ok(Self { sft: sft.clone(), levels, words, prefix, level_mu, sqrt_mu, s, s_t, schedule, twist })
    }

    /// Replaces the eigenvalue schedule λ_0..λ_N of D = Σ λ_n Π̂_n.
    pub fn with_schedule(mut self, schedule: Vec<f64>) -> Result<Self> {
        if schedule.len() != self.levels + 1 {
            return Err(Error::InvalidParameter(format!(
                "schedule needs {} entries",
                self.levels + 1
            )));
        }
        self.schedule = schedule;
        Ok(self)
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn sft(&self) -> &SFTData {
        &self.sft
    }

    pub fn twist(&self) -> Option<&[usize]> {
        self.twist.as_deref()
    }

    fn effective(&self, i: usize) -> usize {
        self.twist.as_ref().map_or(i, |s| s[i])
    }

    /// S_i, or S_{σ(i)} when a twist σ is present.
    pub fn letter(&self, i: usize) -> &CsrMatrix<f64> {
        &self.s[self.effective(i)]
    }

    pub fn letter_adjoint(&self, i: usize) -> &CsrMatrix<f64> {
        &self.s_t[self.effective(i)]
    }

    /// Untwisted S_i.
    pub fn base_letter(&self, i: usize) -> &CsrMatrix<f64> {
        &self.s[i]
    }

    /// Orthogonal projection Π_n onto V_n.
    pub fn project(&self, v: &DVector<f64>, n: usize) -> DVector<f64> {
        if n >= self.levels {
            return v.clone();
        }
        let mut sums = vec![0.0; self.level_mu[n].len()];
        for (k, &u) in self.prefix[n].iter().enumerate() {
            sums[u] += self.sqrt_mu[k] * v[k];
        }
        DVector::from_fn(self.dim(), |k, _| {
            let u = self.prefix[n][k];
            self.sqrt_mu[k] * sums[u] / self.level_mu[n][u]
        })
    }

    /// D v with D = λ_N + Σ_{n<N} (λ_n − λ_{n+1}) Π_n.
    pub fn apply_d(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut out = v * self.schedule[self.levels];
        for n in 0..self.levels {
            let c = self.schedule[n] - self.schedule[n + 1];
            if c != 0.0 {
                out.axpy(c, &self.project(v, n), 1.0);
            }
        }
        out
    }

    /// Orthonormal basis vectors of V_{N−1} in level-N coordinates.
    fn coarse_basis(&self) -> Vec<DVector<f64>> {
        let n = self.levels - 1;
        let count = self.level_mu[n].len();
        let mut basis = vec![DVector::zeros(self.dim()); count];
        for (k, &u) in self.prefix[n].iter().enumerate() {
            basis[u][k] = self.sqrt_mu[k] / self.level_mu[n][u].sqrt();
        }
        basis
    }

    /// Cuntz–Krieger residuals of the family {S_i^*} on V_{N−1}. Each
    /// Frobenius norm bounds the operator norm.
    pub fn ck_residuals(&self) -> CkResiduals {
        let a = self.sft.matrix();
        let letters = self.sft.alphabet_size();
        let mut sum_sq = 0.0;
        let mut letter_sq = vec![0.0; letters];
        for f in self.coarse_basis() {
            // P_j f = S_j^* S_j f.
            let p: Vec<DVector<f64>> =
                (0..letters).map(|j| &self.s_t[j] * (&self.s[j] * &f)).collect();
            let total = p.iter().fold(DVector::zeros(self.dim()), |acc, x| acc + x);
            sum_sq += (total - &f).norm_squared();
            for i in 0..letters {
                let mut r = &self.s[i] * (&self.s_t[i] * &f);
                for j in a.successors(i) {
                    r -= &p[j];
                }
                letter_sq[i] += r.norm_squared();
            }
        }
        CkResiduals {
            levels: self.levels,
            sum_relation: sum_sq.sqrt(),
            letter_relations: letter_sq.into_iter().map(f64::sqrt).collect(),
        }
    }

    /// Operator norm of [D, S_i] restricted to V_{N−1}, where S_i is twisted
    /// when a twist is present.
    pub fn commutator_norm(&self, i: usize) -> CommutatorNorm {
        let s = self.letter(i);
        let st = self.letter_adjoint(i);
        let coarse = self.levels - 1;
        let apply = |v: &DVector<f64>| {
            let pv = self.project(v, coarse);
            self.apply_d(&(s * &pv)) - s * self.apply_d(&pv)
        };
        let apply_t = |u: &DVector<f64>| {
            let w = st * self.apply_d(u) - self.apply_d(&(st * u));
            self.project(&w, coarse)
        };
        let norm = operator_norm(self.dim(), apply, apply_t);
        CommutatorNorm {
            letter: self.sft.labels()[i].clone(),
            norm,
            k_i: self.stabilization_level(i),
        }
    }

    /// Smallest k ≥ 1 with Π_k (weight of S_i) = weight of S_i. The Parry
    /// weight c_i depends only on the first coordinate, so it lies in V_0 and
    /// the level is 1.
    pub fn stabilization_level(&self, _i: usize) -> usize {
        1
    }

    pub fn commutator_norms(&self) -> Vec<CommutatorNorm> {
        (0..self.sft.alphabet_size()).map(|i| self.commutator_norm(i)).collect()
    }

    /// Dense copies for cross-checks at small sizes.
    pub fn dense_letter(&self, i: usize) -> DMatrix<f64> {
        let m = self.letter(i);
        let mut d = DMatrix::zeros(m.nrows(), m.ncols());
        for (r, c, v) in m.triplet_iter() {
            d[(r, c)] = *v;
        }
        d
    }

    pub fn dense_projection(&self, n: usize) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.dim(), self.dim());
        for k in 0..self.dim() {
            let col = self.project(&unit(self.dim(), k), n);
            d.set_column(k, &col);
        }
        d
    }

    pub fn dense_d(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.dim(), self.dim());
        for k in 0..self.dim() {
            let col = self.apply_d(&unit(self.dim(), k));
            d.set_column(k, &col);
        }
        d
    }
}

fn unit(n: usize, k: usize) -> DVector<f64> {
    let mut v = DVector::zeros(n);
    v[k] = 1.0;
    v
}

fn index_of(sorted: &[Word], w: &[usize]) -> usize {
    sorted
        .binary_search_by(|x| x.as_slice().cmp(w))
        .expect("prefix of an admissible word is admissible")
}

fn check_twist(sft: &SFTData, sigma: &[usize]) -> Result<()> {
    let n = sft.alphabet_size();
    let mut seen = vec![false; n];
    let perm = sigma.len() == n && sigma.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true));
    let a = sft.matrix();
    if !perm || !(0..n).all(|i| (0..n).all(|j| a.get(sigma[i], sigma[j]) == a.get(i, j))) {
        return Err(Error::InvalidParameter(
            "twist must be a letter permutation preserving the transition matrix".into(),
        ));
    }
    Ok(())
}

fn letter_operator(
    sft: &SFTData,
    mu: &ParryMeasure,
    words: &[Word],
    sqrt_mu: &[f64],
    i: usize,
) -> CsrMatrix<f64> {
    let d = words.len();
    let p = mu.perron();
    let mut coo = CooMatrix::new(d, d);
    let start = words.partition_point(|w| w[0] < i);
    for (k, w) in words.iter().enumerate().skip(start).take_while(|(_, w)| w[0] == i) {
        let c = (p.left[i] / (p.lambda * p.left[w[1]])).sqrt();
        let mut target: Word = w[1..].to_vec();
        target.push(0);
        for a in sft.matrix().successors(*w.last().unwrap()) {
            *target.last_mut().unwrap() = a;
            let row = index_of(words, &target);
            coo.push(row, k, c * sqrt_mu[row] / sqrt_mu[k]);
        }
    }
    CsrMatrix::from(&coo)
}
