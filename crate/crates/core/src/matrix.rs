//! Square 0/1 matrices shared by the graph, K-theory and shift modules.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A square matrix with entries in {0, 1}, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u8>>", into = "Vec<Vec<u8>>")]
pub struct BinaryMatrix {
    n: usize,
    data: Vec<u8>,
}

impl BinaryMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from rows of integers, rejecting non-square shapes and
    /// entries outside {0, 1}.
    pub fn from_rows<T: Copy + Into<i128>>(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTransitionMatrix(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                match v.into() {
                    0 => {}
                    1 => m.set(i, j, true),
                    other => {
                        return Err(Error::InvalidTransitionMatrix(format!(
                            "entry ({i},{j}) = {other} is not 0 or 1"
                        )))
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.n + j] != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.data[i * self.n + j] = v as u8;
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(|c| c.to_vec()).collect()
    }

    pub fn row_sum(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| self.get(i, j)).count()
    }

    pub fn col_sum(&self, j: usize) -> usize {
        (0..self.n).filter(|&i| self.get(i, j)).count()
    }

    /// Indices j with A(i, j) = 1.
    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.get(i, j))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    /// The matrix B with B(p(i), p(j)) = A(i, j).
    pub fn permuted(&self, p: &[usize]) -> Self {
        assert_eq!(p.len(), self.n);
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(p[i], p[j], self.get(i, j));
            }
        }
        m
    }

    pub fn is_permutation_matrix(&self) -> bool {
        (0..self.n).all(|i| self.row_sum(i) == 1 && self.col_sum(i) == 1)
    }

    /// Transitive closure: entry (i, j) is set iff there is a path of length
    /// at least one from i to j.
    pub fn reachability(&self) -> Self {
        let mut r = self.clone();
        for k in 0..self.n {
            for i in 0..self.n {
                if r.get(i, k) {
                    for j in 0..self.n {
                        if r.get(k, j) {
                            r.set(i, j, true);
                        }
                    }
                }
            }
        }
        r
    }
}

impl TryFrom<Vec<Vec<u8>>> for BinaryMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<u8>>) -> Result<Self> {
        Self::from_rows(&rows)
    }
}

impl From<BinaryMatrix> for Vec<Vec<u8>> {
    fn from(m: BinaryMatrix) -> Self {
        m.rows()
    }
}

/// Finds a permutation p with `a.permuted(p) == b`, by backtracking over
/// index bijections.
pub fn permutation_equivalence(a: &BinaryMatrix, b: &BinaryMatrix) -> Option<Vec<usize>> {
    let n = a.size();
    if b.size() != n {
        return None;
    }
    let deg = |m: &BinaryMatrix, i: usize| (m.row_sum(i), m.col_sum(i), m.get(i, i));
    let mut p = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn go(
        i: usize,
        a: &BinaryMatrix,
        b: &BinaryMatrix,
        p: &mut Vec<usize>,
        used: &mut Vec<bool>,
        deg: &dyn Fn(&BinaryMatrix, usize) -> (usize, usize, bool),
    ) -> bool {
        let n = a.size();
        if i == n {
            return true;
        }
        for t in 0..n {
            if used[t] || deg(a, i) != deg(b, t) {
                continue;
            }
            let consistent = (0..i).all(|k| {
                a.get(i, k) == b.get(t, p[k]) && a.get(k, i) == b.get(p[k], t)
            });
            if !consistent {
                continue;
            }
            p[i] = t;
            used[t] = true;
            if go(i + 1, a, b, p, used, deg) {
                return true;
            }
            used[t] = false;
        }
        p[i] = usize::MAX;
        false
    }

    go(0, a, b, &mut p, &mut used, &deg).then_some(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_binary_and_ragged() {
        assert!(BinaryMatrix::from_rows(&[vec![0u8, 2], vec![0, 0]]).is_err());
        assert!(BinaryMatrix::from_rows(&[vec![0u8, 1], vec![0]]).is_err());
    }

    #[test]
    fn permutation_search_finds_relabeling() {
        let a = BinaryMatrix::from_rows(&[vec![0u8, 1, 0], vec![0, 0, 1], vec![1, 1, 0]]).unwrap();
        let p = vec![2, 0, 1];
        let b = a.permuted(&p);
        let q = permutation_equivalence(&a, &b).unwrap();
        assert_eq!(a.permuted(&q), b);
        assert!(permutation_equivalence(&a, &BinaryMatrix::identity(3)).is_none());
    }

    #[test]
    fn reachability_of_cycle_is_full() {
        let c = BinaryMatrix::from_fn(4, |i, j| j == (i + 1) % 4);
        assert!(c.reachability().data.iter().all(|&x| x == 1));
        assert!(c.is_permutation_matrix());
    }
}
