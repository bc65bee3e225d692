//! Compressed-row symmetric matrices with a matrix-market style dump.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};

const PAR_THRESHOLD: usize = 50_000;

/// Symmetric sparse matrix. Both triangles are stored so that products are a
/// single row sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetric {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSymmetric {
    /// Builds from `(row, col, value)` entries of one triangle; off-diagonal
    /// entries are mirrored and duplicates are summed.
    pub fn from_triplets(n: usize, entries: &[(usize, usize, f64)]) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(i, j, v) in entries {
            if i >= n || j >= n {
                return Err(Error::DimensionMismatch { expected: n, found: i.max(j) + 1 });
            }
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("matrix entry ({i}, {j}) = {v}")));
            }
            rows[i].push((j, v));
            if i != j {
                rows[j].push((i, v));
            }
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|e| e.0);
            let mut last = usize::MAX;
            for (j, v) in row {
                if j == last {
                    *values.last_mut().expect("entry pushed") += v;
                } else {
                    col_idx.push(j);
                    values.push(v);
                    last = j;
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self { n, row_ptr, col_idx, values })
    }

    pub fn from_diagonal(d: &[f64]) -> Result<Self> {
        let t: Vec<_> = d.iter().enumerate().map(|(i, &v)| (i, i, v)).collect();
        Self::from_triplets(d.len(), &t)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n]).expect("finite")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (s, e) = (self.row_ptr[i], self.row_ptr[i + 1]);
        self.col_idx[s..e].iter().cloned().zip(self.values[s..e].iter().cloned())
    }

    fn row_dot(&self, i: usize, x: &[f64]) -> f64 {
        let (s, e) = (self.row_ptr[i], self.row_ptr[i + 1]);
        let mut acc = 0.0;
        for k in s..e {
            acc += self.values[k] * x[self.col_idx[k]];
        }
        acc
    }

    /// `y = A x`. Rows are independent, so the parallel sweep is deterministic.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        if self.n >= PAR_THRESHOLD {
            y.par_iter_mut().enumerate().for_each(|(i, yi)| *yi = self.row_dot(i, x));
        } else {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = self.row_dot(i, x);
            }
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec(x, &mut y);
        y
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).find(|e| e.0 == i).map(|e| e.1).unwrap_or(0.0)).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).map(|e| e.1).sum()).collect()
    }

    /// Largest absolute row sum, an upper bound for the spectral radius.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n).map(|i| self.row(i).map(|e| e.1.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| {
            self.row(i).all(|(j, v)| {
                let vt = self.row(j).find(|e| e.0 == i).map(|e| e.1).unwrap_or(0.0);
                (v - vt).abs() <= tol * v.abs().max(1.0)
            })
        })
    }

    /// Coordinate dump of the upper triangle, 1-based, with a size header.
    pub fn to_matrix_market(&self) -> String {
        let upper: Vec<(usize, usize, f64)> =
            (0..self.n).flat_map(|i| self.row(i).filter(move |e| e.0 >= i).map(move |(j, v)| (i, j, v))).collect();
        let mut s = String::from("%%MatrixMarket matrix coordinate real symmetric\n");
        let _ = writeln!(s, "{} {} {}", self.n, self.n, upper.len());
        for (i, j, v) in upper {
            // matrix-market symmetric files list the lower triangle
            let _ = writeln!(s, "{} {} {:e}", j + 1, i + 1, v);
        }
        s
    }

    pub fn from_matrix_market(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.starts_with('%') && !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Config("empty matrix file".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Config(format!("bad size line: {header}"))))
            .collect::<Result<_>>()?;
        if dims.len() != 3 || dims[0] != dims[1] {
            return Err(Error::Config(format!("expected a square size line, got: {header}")));
        }
        let mut entries = Vec::with_capacity(dims[2]);
        for l in lines {
            let t: Vec<&str> = l.split_whitespace().collect();
            let bad = || Error::Config(format!("bad entry line: {l}"));
            if t.len() != 3 {
                return Err(bad());
            }
            let i: usize = t[0].parse().map_err(|_| bad())?;
            let j: usize = t[1].parse().map_err(|_| bad())?;
            let v: f64 = t[2].parse().map_err(|_| bad())?;
            if i == 0 || j == 0 {
                return Err(bad());
            }
            entries.push((i - 1, j - 1, v));
        }
        if entries.len() != dims[2] {
            return Err(Error::Config(format!("expected {} entries, found {}", dims[2], entries.len())));
        }
        Self::from_triplets(dims[0], &entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> SparseSymmetric {
        let mut t = Vec::new();
        for i in 0..n - 1 {
            t.push((i, i, 1.0));
            t.push((i + 1, i + 1, 1.0));
            t.push((i, i + 1, -1.0));
        }
        SparseSymmetric::from_triplets(n, &t).unwrap()
    }

    #[test]
    fn assembly_sums_duplicates_and_mirrors() {
        let a = chain(5);
        assert_eq!(a.diagonal(), vec![1.0, 2.0, 2.0, 2.0, 1.0]);
        assert!(a.row_sums().iter().all(|s| s.abs() < 1e-15));
        assert!(a.is_symmetric(0.0));
        assert_eq!(a.nnz(), 13);
        let y = a.apply(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(y, vec![-1.0, 0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn matrix_market_round_trip() {
        let a = chain(7);
        let text = a.to_matrix_market();
        assert!(text.starts_with("%%MatrixMarket"));
        let b = SparseSymmetric::from_matrix_market(&text).unwrap();
        assert_eq!(a, b);
        assert!(SparseSymmetric::from_matrix_market("3 3 1\n1 1\n").is_err());
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(SparseSymmetric::from_triplets(2, &[(0, 2, 1.0)]).is_err());
        assert!(SparseSymmetric::from_triplets(2, &[(0, 1, f64::NAN)]).is_err());
    }
}
