use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shift::SFTData;

/// Eigenspace dimensions dim E_m of the grading D = Σ_m m Σ_{k≤m} Π̂_{m−k,k}
/// for the product of two Cayley trees of the free group of rank g.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductGradingDims {
    pub g: usize,
    pub dims: Vec<u128>,
}

fn overflow() -> Error {
    Error::Overflow("product grading dimension".into())
}

/// The closed form: 2g(2g−1) for m = 0, 4g(2g−1)(2g−2) for m = 1 and
/// (m+1)·2g(2g−1)^{m−1}(2g−2)² for m ≥ 2.
pub fn product_grading_dims(g: usize, max_level: usize) -> Result<ProductGradingDims> {
    if g < 2 {
        return Err(Error::InvalidRank(format!("rank {g} is below 2")));
    }
    let g = g as u128;
    let dims = (0..=max_level)
        .map(|m| -> Option<u128> {
            match m {
                0 => (2 * g).checked_mul(2 * g - 1),
                1 => (4 * g).checked_mul(2 * g - 1)?.checked_mul(2 * g - 2),
                _ => (m as u128 + 1)
                    .checked_mul(2 * g)?
                    .checked_mul((2 * g - 1).checked_pow(m as u32 - 1)?)?
                    .checked_mul((2 * g - 2) * (2 * g - 2)),
            }
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(overflow)?;
    Ok(ProductGradingDims { g: g as usize, dims })
}

/// dim V_{ℓ,k} for 0 ≤ ℓ ≤ L, 0 ≤ k ≤ K: pairs of a horizontal admissible
/// word of length ℓ+1 and a vertical one of length k+1, each enumerated.
pub fn product_table(g: usize, max_l: usize, max_k: usize) -> Result<Vec<Vec<u128>>> {
    let s = SFTData::schottky(g)?;
    let counts = (1..=max_l.max(max_k) + 1)
        .map(|n| s.enumerate_words(n).map(|w| w.len() as u128))
        .collect::<Result<Vec<_>>>()?;
    (0..=max_l)
        .map(|l| (0..=max_k).map(|k| counts[l].checked_mul(counts[k]).ok_or_else(overflow)).collect())
        .collect()
}

/// d̂_{ℓ,k} = V_{ℓ,k} − V_{ℓ−1,k} − V_{ℓ,k−1} + V_{ℓ−1,k−1}, with V = 0 at
/// negative indices.
pub fn inclusion_exclusion(table: &[Vec<u128>]) -> Vec<Vec<i128>> {
    let v = |l: isize, k: isize| -> i128 {
        if l < 0 || k < 0 {
            0
        } else {
            table[l as usize][k as usize] as i128
        }
    };
    (0..table.len() as isize)
        .map(|l| {
            (0..table[l as usize].len() as isize)
                .map(|k| v(l, k) - v(l - 1, k) - v(l, k - 1) + v(l - 1, k - 1))
                .collect()
        })
        .collect()
}

/// Verifies that the inclusion–exclusion pieces d̂_{ℓ,k} for ℓ ≤ L, k ≤ K
/// are nonnegative and sum to dim V_{L,K}.
pub fn inclusion_exclusion_check(max_l: usize, max_k: usize, table: &[Vec<u128>]) -> Result<bool> {
    if table.len() <= max_l || table.iter().take(max_l + 1).any(|r| r.len() <= max_k) {
        return Err(Error::InvalidTable(format!("table does not cover level ({max_l}, {max_k})")));
    }
    let t: Vec<Vec<u128>> = table[..=max_l].iter().map(|r| r[..=max_k].to_vec()).collect();
    for l in 0..=max_l {
        for k in 0..=max_k {
            if (l > 0 && t[l][k] < t[l - 1][k]) || (k > 0 && t[l][k] < t[l][k - 1]) {
                return Err(Error::InvalidTable(format!("table decreases at ({l}, {k})")));
            }
        }
    }
    let hat = inclusion_exclusion(&t);
    let nonnegative = hat.iter().flatten().all(|&d| d >= 0);
    let total: i128 = hat.iter().flatten().sum();
    Ok(nonnegative && total == t[max_l][max_k] as i128)
}

/// dim E_m = Σ_{ℓ+k=m} d̂_{ℓ,k} from the enumerated product table.
pub fn product_grading_oracle(g: usize, max_level: usize) -> Result<Vec<u128>> {
    let table = product_table(g, max_level, max_level)?;
    let hat = inclusion_exclusion(&table);
    Ok((0..=max_level)
        .map(|m| (0..=m).map(|k| hat[m - k][k] as u128).sum())
        .collect())
}
