use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shift::SFTData;

/// How the eigenspace dimensions beyond the stored levels are controlled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailModel {
    /// No levels beyond the stored ones.
    Finite,
    /// dim Ê_n ≤ constant · ratio^n with λ_n = n.
    Geometric { constant: f64, ratio: f64 },
    /// λ_n = (dim A_n)^exponent with dim Ê_n ≤ dim A_n and dim A_n ≥ n.
    AfPower { exponent: f64 },
}

/// D = Σ λ_n Π̂_n: eigenvalue λ_n with multiplicity dim Ê_n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradingOperator {
    multiplicities: Vec<u128>,
    eigenvalues: Vec<f64>,
    tail: TailModel,
}

impl GradingOperator {
    pub fn new(multiplicities: Vec<u128>, eigenvalues: Vec<f64>, tail: TailModel) -> Result<Self> {
        if multiplicities.len() != eigenvalues.len() {
            return Err(Error::InvalidParameter(
                "one eigenvalue per level is required".into(),
            ));
        }
        Ok(Self { multiplicities, eigenvalues, tail })
    }

    /// A finite spectrum with no tail.
    pub fn finite(multiplicities: Vec<u128>, eigenvalues: Vec<f64>) -> Result<Self> {
        Self::new(multiplicities, eigenvalues, TailModel::Finite)
    }

    /// D = Σ n Π̂_n on the cylinder filtration of an SFT, levels 0..=levels.
    ///
    /// With r the right Perron vector, 1^T A^n 1 ≤ λ^n Σr / min r, which
    /// bounds dim Ê_n ≤ dim V_n.
    pub fn from_sft(s: &SFTData, levels: usize) -> Result<Self> {
        let dims = s.filtration_dims(levels)?;
        let eigenvalues = (0..=levels).map(|n| n as f64).collect();
        let tail = if s.matrix().is_permutation_matrix() {
            // Every word has a unique continuation: V_n = V_0 for all n.
            TailModel::Finite
        } else {
            let p = s.perron_data()?;
            let sum: f64 = p.right.iter().sum();
            let min = p.right.iter().copied().fold(f64::INFINITY, f64::min);
            TailModel::Geometric { constant: sum / min * (1.0 + 1e-9), ratio: p.lambda * (1.0 + 1e-12) }
        };
        Self::new(dims.e_hats(), eigenvalues, tail)
    }

    pub fn levels(&self) -> usize {
        self.eigenvalues.len().saturating_sub(1)
    }

    pub fn multiplicities(&self) -> &[u128] {
        &self.multiplicities
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn tail(&self) -> TailModel {
        self.tail
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaTrace {
    pub t: f64,
    pub partial: f64,
    pub tail_bound: f64,
    pub levels: usize,
    pub converged: bool,
}

pub const CONVERGED_TAIL: f64 = 1e-12;

/// Tr e^{−tD²} truncated at the stored levels, with a certified tail bound.
pub fn theta_trace(d: &GradingOperator, t: f64) -> Result<ThetaTrace> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("t = {t} must be positive")));
    }
    let partial = d
        .multiplicities
        .iter()
        .zip(&d.eigenvalues)
        .map(|(&m, &l)| m as f64 * (-t * l * l).exp())
        .sum();
    let n = d.levels();
    let tail_bound = match d.tail {
        TailModel::Finite => 0.0,
        TailModel::Geometric { constant, ratio } => {
            // Terms C ρ^k e^{−t k²} for k > N; successive ratios are at most
            // ρ e^{−t(2N+3)} from k = N+1 on.
            let k = (n + 1) as f64;
            let first = constant * (k * ratio.ln() - t * k * k).exp();
            let r = ratio * (-t * (2.0 * k + 1.0)).exp();
            if r < 1.0 {
                first / (1.0 - r)
            } else {
                f64::INFINITY
            }
        }
        TailModel::AfPower { exponent } => {
            // y^k e^{−y} ≤ (k/e)^k with y = tλ², k = 3/(2q), then the
            // polynomial tail Σ_{m>N} m^{1−3} ≤ 1/N.
            if n == 0 {
                f64::INFINITY
            } else {
                let k = 1.5 / exponent;
                (k / std::f64::consts::E).powf(k) * t.powf(-k) / n as f64
            }
        }
    };
    Ok(ThetaTrace { t, partial, tail_bound, levels: n, converged: tail_bound < CONVERGED_TAIL })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZetaDiagnosis {
    /// Eigenspace dimensions grow geometrically with the given ratio.
    Divergent { growth_ratio: f64 },
    Convergent { tail_bound: f64 },
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaPartial {
    pub s: f64,
    pub partial: f64,
    pub diagnosis: ZetaDiagnosis,
}

/// Σ dim Ê_n (1 + λ_n²)^{−s/2} over the stored levels, with a diagnosis of
/// the full series.
pub fn zeta_partial(d: &GradingOperator, s: f64) -> ZetaPartial {
    let partial = d
        .multiplicities
        .iter()
        .zip(&d.eigenvalues)
        .map(|(&m, &l)| {
            if m == 0 {
                0.0
            } else {
                ((m as f64).ln() - 0.5 * s * (l * l).ln_1p()).exp()
            }
        })
        .sum();
    let n = d.levels();
    let diagnosis = match d.tail {
        TailModel::Finite => ZetaDiagnosis::Convergent { tail_bound: 0.0 },
        TailModel::Geometric { ratio, .. } if ratio > 1.0 + 1e-9 => {
            // Ratio test on the stored dimensions when they are available.
            let m = &d.multiplicities;
            let observed = if n >= 2 && m[n - 1] > 0 { m[n] as f64 / m[n - 1] as f64 } else { ratio };
            ZetaDiagnosis::Divergent { growth_ratio: observed }
        }
        TailModel::Geometric { .. } => ZetaDiagnosis::Undetermined,
        TailModel::AfPower { exponent } => {
            let sq = s * exponent;
            if sq > 2.0 && n >= 1 {
                ZetaDiagnosis::Convergent { tail_bound: (n as f64).powf(2.0 - sq) / (sq - 2.0) }
            } else {
                ZetaDiagnosis::Undetermined
            }
        }
    };
    ZetaPartial { s, partial, diagnosis }
}
