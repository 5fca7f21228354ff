use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::truncation::SpectralTruncation;
use crate::error::{Error, Result};

pub const DEFAULT_CUTOFF: u64 = 200;
pub const MIN_DISTINCT: usize = 50;

/// The even triple on ℓ²(Z, H) ⊕ ℓ²(Z, H) with off-diagonal
/// D_0 = D ⊗ 1 + i ⊗ ∂, truncated to Fourier modes |k| ≤ M.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossedProductTriple {
    /// Base eigenvalues λ_j with multiplicities.
    base: Vec<(f64, u64)>,
    cutoff: u64,
}

impl CrossedProductTriple {
    pub fn new(base: Vec<(f64, u64)>, cutoff: u64) -> Result<Self> {
        if base.iter().any(|(l, _)| !l.is_finite()) {
            return Err(Error::InvalidParameter("base eigenvalues must be finite".into()));
        }
        Ok(Self { base, cutoff })
    }

    /// Base spectrum λ_j = f(j) for j = 1..=n, each simple.
    pub fn from_schedule(n: u64, f: impl Fn(u64) -> f64, cutoff: u64) -> Result<Self> {
        Self::new((1..=n).map(|j| (f(j), 1)).collect(), cutoff)
    }

    pub fn base(&self) -> &[(f64, u64)] {
        &self.base
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }
}

/// Eigenvalue with multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralValue {
    pub value: f64,
    pub multiplicity: u64,
}

/// Merges equal values (relative tolerance 1e−12) of a sorted list.
fn merge_sorted(mut v: Vec<(f64, u64)>) -> Vec<SpectralValue> {
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<SpectralValue> = Vec::new();
    for (value, m) in v {
        match out.last_mut() {
            Some(last) if (last.value - value).abs() <= 1e-12 * value.abs().max(1.0) => {
                last.multiplicity += m
            }
            _ => out.push(SpectralValue { value, multiplicity: m }),
        }
    }
    out
}

/// {±√(λ_j² + k²)} for 0 ≤ k ≤ M, each with the multiplicity of λ_j.
///
/// The modes k and −k give the same modulus; they are folded into the
/// ± pair of the block operator, so each (λ_j, k) with k ≥ 0 contributes
/// one positive and one negative eigenvalue.
pub fn crossed_product_spectrum(c: &CrossedProductTriple) -> Vec<SpectralValue> {
    let mut raw = Vec::with_capacity(2 * c.base.len() * (c.cutoff as usize + 1));
    for &(l, m) in &c.base {
        for k in 0..=c.cutoff {
            let v = (l * l + (k * k) as f64).sqrt();
            raw.push((v, m));
            raw.push((-v, m));
        }
    }
    merge_sorted(raw)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    /// Range of Λ used in the fit.
    pub window: (f64, f64),
    pub distinct: usize,
}

/// Slope of log N(Λ) against log Λ, where N(Λ) counts eigenvalues with
/// |λ| ≤ Λ, fitted over the middle two quartiles of the distinct positive
/// moduli.
pub fn summability_exponent_fit(spectrum: &[SpectralValue]) -> Result<ExponentFit> {
    let moduli = merge_sorted(
        spectrum.iter().map(|s| (s.value.abs(), s.multiplicity)).collect(),
    );
    let positive = moduli.iter().filter(|s| s.value > 0.0).count();
    if positive < MIN_DISTINCT {
        return Err(Error::InsufficientSpectrum { distinct: positive, needed: MIN_DISTINCT });
    }
    let mut count = 0u64;
    let mut points = Vec::with_capacity(moduli.len());
    for s in &moduli {
        count += s.multiplicity;
        if s.value > 0.0 {
            points.push((s.value.ln(), (count as f64).ln()));
        }
    }
    let (lo, hi) = (points.len() / 4, 3 * points.len() / 4);
    let window = &points[lo..=hi.min(points.len() - 1)];
    let n = window.len() as f64;
    let mx = window.iter().map(|p| p.0).sum::<f64>() / n;
    let my = window.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = window.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = window.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(ExponentFit {
        slope: sxy / sxx,
        window: (window[0].0.exp(), window[window.len() - 1].0.exp()),
        distinct: positive,
    })
}

pub enum JloInput<'a> {
    Truncation(&'a SpectralTruncation),
    Crossed(&'a CrossedProductTriple),
    /// Even operator [[0, D_0*], [D_0, 0]] with D_0 : H⁺ → H⁻.
    Block(&'a DMatrix<f64>),
}

/// sTr e^{−s𝒟²} = Tr e^{−s D_0*D_0} − Tr e^{−s D_0 D_0*}.
pub fn jlo_phi0(input: JloInput<'_>, scale: f64) -> Result<f64> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::InvalidParameter(format!("scale = {scale} must be positive")));
    }
    match input {
        JloInput::Truncation(_) => Err(Error::RequiresEvenTriple),
        JloInput::Crossed(c) => {
            // D_0 is diagonal with entries λ_j − ik on each (j, k); both
            // graded parts see |λ_j − ik|².
            let (mut plus, mut minus) = (0.0, 0.0);
            for &(l, m) in &c.base {
                for k in -(c.cutoff as i64)..=(c.cutoff as i64) {
                    let d0 = nalgebra::Complex::new(l, -(k as f64));
                    plus += m as f64 * (-scale * (d0.conj() * d0).re).exp();
                    minus += m as f64 * (-scale * (d0 * d0.conj()).re).exp();
                }
            }
            Ok(plus - minus)
        }
        JloInput::Block(d0) => {
            let heat = |m: DMatrix<f64>| -> f64 {
                if m.is_empty() {
                    return 0.0;
                }
                SymmetricEigen::new(m).eigenvalues.iter().map(|e| (-scale * e).exp()).sum()
            };
            Ok(heat(d0.transpose() * d0) - heat(d0 * d0.transpose()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::SFTData;

    fn values(s: &[SpectralValue]) -> Vec<(f64, u64)> {
        s.iter().map(|v| (v.value, v.multiplicity)).collect()
    }

    #[test]
    fn zero_base() {
        let c = CrossedProductTriple::new(vec![(0.0, 1)], 1).unwrap();
        assert_eq!(values(&crossed_product_spectrum(&c)), vec![(-1.0, 1), (0.0, 2), (1.0, 1)]);
    }

    #[test]
    fn sqrt_five_has_multiplicity_two() {
        let c = CrossedProductTriple::new(vec![(1.0, 1), (2.0, 1)], 2).unwrap();
        let spectrum = crossed_product_spectrum(&c);
        let r5 = 5f64.sqrt();
        for sign in [1.0, -1.0] {
            let v = spectrum.iter().find(|v| (v.value - sign * r5).abs() < 1e-12).unwrap();
            assert_eq!(v.multiplicity, 2);
        }
        let total: u64 = spectrum.iter().map(|v| v.multiplicity).sum();
        assert_eq!(total, 2 * 2 * 3);
    }

    #[test]
    fn lattice_slopes() {
        let line = CrossedProductTriple::from_schedule(200, |j| j as f64, 200).unwrap();
        let fit = summability_exponent_fit(&crossed_product_spectrum(&line)).unwrap();
        assert!((fit.slope - 2.0).abs() < 0.15, "{fit:?}");

        let circle = CrossedProductTriple::new(vec![(0.0, 1)], 200).unwrap();
        let fit = summability_exponent_fit(&crossed_product_spectrum(&circle)).unwrap();
        assert!((fit.slope - 1.0).abs() < 0.1, "{fit:?}");

        let squares = CrossedProductTriple::from_schedule(60, |j| (j * j) as f64, 3600).unwrap();
        let fit = summability_exponent_fit(&crossed_product_spectrum(&squares)).unwrap();
        assert!((fit.slope - 1.5).abs() < 0.15, "{fit:?}");
    }

    #[test]
    fn base_slope_plus_one() {
        for (c, _) in [
            (CrossedProductTriple::from_schedule(200, |j| j as f64, 200).unwrap(), 1.0),
            (CrossedProductTriple::from_schedule(60, |j| (j * j) as f64, 3600).unwrap(), 0.5),
        ] {
            let base: Vec<SpectralValue> = c
                .base()
                .iter()
                .map(|&(value, multiplicity)| SpectralValue { value, multiplicity })
                .collect();
            let b = summability_exponent_fit(&base).unwrap().slope;
            let s = summability_exponent_fit(&crossed_product_spectrum(&c)).unwrap().slope;
            assert!((s - b - 1.0).abs() < 0.15, "base {b}, crossed {s}");
        }
    }

    #[test]
    fn too_few_values() {
        let c = CrossedProductTriple::new(vec![(1.0, 3)], 10).unwrap();
        assert!(matches!(
            summability_exponent_fit(&crossed_product_spectrum(&c)),
            Err(Error::InsufficientSpectrum { distinct: 11, needed: 50 })
        ));
    }

    #[test]
    fn supertraces() {
        let sq = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.5, -1.0]);
        assert!(jlo_phi0(JloInput::Block(&sq), 0.7).unwrap().abs() < 1e-12);
        let z = DMatrix::<f64>::zeros(1, 3);
        assert!((jlo_phi0(JloInput::Block(&z), 3.0).unwrap() - 2.0).abs() < 1e-14);
        let c = CrossedProductTriple::from_schedule(20, |j| j as f64, 20).unwrap();
        assert!(jlo_phi0(JloInput::Crossed(&c), 1.0).unwrap().abs() < 1e-12);
        let t = SpectralTruncation::build(&SFTData::schottky(2).unwrap(), 2, None).unwrap();
        assert!(matches!(jlo_phi0(JloInput::Truncation(&t), 1.0), Err(Error::RequiresEvenTriple)));
    }
}
