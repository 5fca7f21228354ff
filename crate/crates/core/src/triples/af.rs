use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use super::grading::{GradingOperator, TailModel};
use crate::error::{Error, Result};
use crate::shift::SFTData;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    /// Real schedule λ_n = (dim A_n)^q on H.
    Odd,
    /// Block operator on H ⊕ H with off-diagonal D_0 of complex schedule
    /// λ_n = i (dim A_n)^q; the spectrum of the block is ±|λ_n|.
    Even,
}

/// Summability data for an AF algebra A = lim A_n with a faithful state, so
/// that the level spaces have dimension dim A_n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AFTriple {
    dims: Vec<u128>,
    p: f64,
    q: f64,
    parity: Parity,
}

impl AFTriple {
    /// `dims[n-1] = dim A_n` for n = 1..=N.
    pub fn new(dims: Vec<u128>, p: f64, q: f64, parity: Parity) -> Result<Self> {
        if !(p > 0.0) {
            return Err(Error::InvalidParameter(format!("p = {p} must be positive")));
        }
        if !(q > 2.0 / p) {
            return Err(Error::SummabilityViolation { q, bound: 2.0 / p });
        }
        if dims.is_empty() {
            return Err(Error::InvalidParameter("at least one level is required".into()));
        }
        for (k, w) in dims.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(Error::InvalidParameter(format!(
                    "dim A_{} = {} does not exceed dim A_{} = {}",
                    k + 2,
                    w[1],
                    k + 1,
                    w[0]
                )));
            }
        }
        if let Some(n) = (1..=dims.len()).find(|&n| dims[n - 1] < n as u128) {
            return Err(Error::InvalidParameter(format!("dim A_{n} is smaller than {n}")));
        }
        Ok(Self { dims, p, q, parity })
    }

    /// Levels A_n = F_{A,n-1} of the AF core of a Cuntz–Krieger algebra.
    pub fn from_core(s: &SFTData, levels: usize, p: f64, q: f64, parity: Parity) -> Result<Self> {
        if levels == 0 {
            return Err(Error::InvalidParameter("at least one level is required".into()));
        }
        let dims = s.af_core_dims(levels - 1)?.into_iter().map(|l| l.total).collect();
        Self::new(dims, p, q, parity)
    }

    pub fn dims(&self) -> &[u128] {
        &self.dims
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn levels(&self) -> usize {
        self.dims.len()
    }

    /// dim Ê_n = dim A_n − dim A_{n−1} with A_0 = 0.
    pub fn multiplicity(&self, n: usize) -> u128 {
        self.dims[n - 1] - if n >= 2 { self.dims[n - 2] } else { 0 }
    }

    /// ln |λ_n| = q ln dim A_n.
    pub fn ln_modulus(&self, n: usize) -> f64 {
        self.q * (self.dims[n - 1] as f64).ln()
    }

    /// The eigenvalue schedule λ_1..λ_N.
    pub fn schedule(&self) -> Vec<Complex<f64>> {
        (1..=self.levels())
            .map(|n| {
                let m = self.ln_modulus(n).exp();
                match self.parity {
                    Parity::Odd => Complex::new(m, 0.0),
                    Parity::Even => Complex::new(0.0, m),
                }
            })
            .collect()
    }

    /// |D| as a grading operator on one copy of H.
    pub fn grading(&self) -> GradingOperator {
        let mult = (1..=self.levels()).map(|n| self.multiplicity(n)).collect();
        let eig = (1..=self.levels()).map(|n| self.ln_modulus(n).exp()).collect();
        GradingOperator::new(mult, eig, TailModel::AfPower { exponent: self.q })
            .expect("one eigenvalue per level")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AfReport {
    pub p: f64,
    pub q: f64,
    pub parity: Parity,
    pub partials: Vec<f64>,
    pub majorants: Vec<f64>,
    /// Every term is at most n^{1−pq} (times 2 for the even variant).
    pub termwise: bool,
    /// Every partial sum is at most the majorant partial sum.
    pub bounded: bool,
}

/// Partial sums of Tr (1 + D²)^{−p/2} against Σ n^{1−pq}.
pub fn af_summability_report(a: &AFTriple, levels: usize) -> Result<AfReport> {
    if levels == 0 || levels > a.levels() {
        return Err(Error::InvalidParameter(format!(
            "levels must lie in 1..={}",
            a.levels()
        )));
    }
    let copies = match a.parity {
        Parity::Odd => 1.0,
        Parity::Even => 2.0,
    };
    let (mut partial, mut major) = (0.0, 0.0);
    let (mut partials, mut majorants) = (Vec::new(), Vec::new());
    let mut termwise = true;
    for n in 1..=levels {
        let ln_l = a.ln_modulus(n);
        // ln (1 + λ²) = 2 ln λ + ln(1 + λ^{−2}).
        let ln_one_plus = 2.0 * ln_l + (-2.0 * ln_l).exp().ln_1p();
        let term = copies * (-0.5 * a.p * ln_one_plus + (a.multiplicity(n) as f64).ln()).exp();
        let bound = copies * (n as f64).powf(1.0 - a.p * a.q);
        termwise &= term <= bound;
        partial += term;
        major += bound;
        partials.push(partial);
        majorants.push(major);
    }
    let bounded = partials.iter().zip(&majorants).all(|(x, y)| x <= y);
    Ok(AfReport { p: a.p, q: a.q, parity: a.parity, partials, majorants, termwise, bounded })
}
