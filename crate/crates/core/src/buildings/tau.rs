use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const BRACKET: (f64, f64) = (1e-9, 64.0);
const REFINEMENT_STEPS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauRoot {
    pub x: f64,
    pub residual: f64,
}

/// Σ_i (q_i^x + q_{i+1}^x) / ((1 + q_i^x)(1 + q_{i+1}^x)) with cyclic
/// indices, and its derivative in x.
///
/// Each term equals (u + v)/((1 + u)(1 + v)) with u = q_i^{−x}, v = q_{i+1}^{−x},
/// which stays finite for large x.
pub fn tau_lhs(q: &[u64], x: f64) -> (f64, f64) {
    let r = q.len();
    let mut value = 0.0;
    let mut slope = 0.0;
    for i in 0..r {
        let (a, b) = ((q[i] as f64).ln(), (q[(i + 1) % r] as f64).ln());
        let (u, v) = ((-a * x).exp(), (-b * x).exp());
        let (du, dv) = (-a * u, -b * v);
        let den = (1.0 + u) * (1.0 + v);
        value += (u + v) / den;
        let dden = du * (1.0 + v) + dv * (1.0 + u);
        slope += ((du + dv) * den - (u + v) * dden) / (den * den);
    }
    (value, slope)
}

/// The positive root of Σ_i (q_i^x + q_{i+1}^x)/((1+q_i^x)(1+q_{i+1}^x)) = 2.
pub fn solve_tau(q: &[u64]) -> Result<TauRoot> {
    let r = q.len();
    if r < 4 {
        return Err(Error::InvalidPolygon(format!("{r} sides; at least 4 are required")));
    }
    if let Some(&bad) = q.iter().find(|&&w| w < 2) {
        return Err(Error::InvalidParameter(format!("weight {bad} is below 2")));
    }
    if r == 4 && q.iter().all(|&w| w == q[0]) {
        return Err(Error::DegenerateEuclidean);
    }
    let f = |x: f64| tau_lhs(q, x).0 - 2.0;
    let (mut lo, mut hi) = BRACKET;
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo > 0.0 && fhi < 0.0) {
        return Err(Error::BracketFailure { lo, hi });
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..REFINEMENT_STEPS {
        let (v, d) = tau_lhs(q, x);
        if d == 0.0 {
            break;
        }
        let next = x - (v - 2.0) / d;
        if next.is_finite() && (next - x).abs() <= 1e-10 && f(next).abs() <= f(x).abs() {
            x = next;
        }
    }
    Ok(TauRoot { x, residual: f(x).abs() })
}

/// Root of the symmetric case q_i = q: q^x = (r − 2 + √(r² − 4r))/2.
pub fn symmetric_tau(r: usize, q: u64) -> f64 {
    let r = r as f64;
    ((r - 2.0 + (r * r - 4.0 * r).sqrt()) / 2.0).ln() / (q as f64).ln()
}
