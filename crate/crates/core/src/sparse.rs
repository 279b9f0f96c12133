//! Minimal compressed-sparse-row complex matrices.
//!
//! Every operator in the crate is a sparse matrix over a [`crate::hilbert::QuasispinBasis`];
//! this module holds the raw storage and arithmetic, with a dense bridge for
//! the diagonalization oracle.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Compressed sparse row matrix over `Complex64`.
#[derive(Debug, Clone, PartialEq)]
pub struct CsMat {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<Complex64>,
}

impl CsMat {
    /// Build from (row, col, value) triplets; duplicate positions are summed,
    /// exact zeros dropped.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Self {
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); nrows];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet ({r},{c}) out of bounds");
            rows[r].push((c, v));
        }
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        let mut col_idx = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for row in &mut rows {
            row.sort_unstable_by_key(|&(c, _)| c);
            let mut i = 0;
            while i < row.len() {
                let c = row[i].0;
                let mut v = row[i].1;
                i += 1;
                while i < row.len() && row[i].0 == c {
                    v += row[i].1;
                    i += 1;
                }
                if v != Complex64::ZERO {
                    col_idx.push(c);
                    vals.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        CsMat { nrows, ncols, row_ptr, col_idx, vals }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        CsMat { nrows, ncols, row_ptr: vec![0; nrows + 1], col_idx: Vec::new(), vals: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, Complex64::ONE)))
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Iterate stored entries as (row, col, value).
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.nrows).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.col_idx[k], self.vals[k]))
        })
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let lo = self.row_ptr[r];
        let hi = self.row_ptr[r + 1];
        match self.col_idx[lo..hi].binary_search(&c) {
            Ok(k) => self.vals[lo + k],
            Err(_) => Complex64::ZERO,
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for v in &mut out.vals {
            *v *= s;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols), "shape mismatch in add");
        Self::from_triplets(self.nrows, self.ncols, self.iter().chain(other.iter()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-Complex64::ONE))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_triplets(self.ncols, self.nrows, self.iter().map(|(r, c, v)| (c, r, v.conj())))
    }

    /// Matrix product `self * other` (Gustavson row-wise accumulation).
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "inner dimension mismatch in matmul");
        let mut acc = vec![Complex64::ZERO; other.ncols];
        let mut marked: Vec<usize> = Vec::new();
        let mut row_ptr = Vec::with_capacity(self.nrows + 1);
        let mut col_idx = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for r in 0..self.nrows {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let a = self.vals[k];
                let mid = self.col_idx[k];
                for kk in other.row_ptr[mid]..other.row_ptr[mid + 1] {
                    let c = other.col_idx[kk];
                    if acc[c] == Complex64::ZERO && !marked.contains(&c) {
                        marked.push(c);
                    }
                    acc[c] += a * other.vals[kk];
                }
            }
            marked.sort_unstable();
            for &c in &marked {
                if acc[c] != Complex64::ZERO {
                    col_idx.push(c);
                    vals.push(acc[c]);
                }
                acc[c] = Complex64::ZERO;
            }
            marked.clear();
            row_ptr.push(col_idx.len());
        }
        CsMat { nrows: self.nrows, ncols: other.ncols, row_ptr, col_idx, vals }
    }

    /// Matrix-vector product.
    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.ncols, "vector length mismatch in matvec");
        let mut y = vec![Complex64::ZERO; self.nrows];
        for r in 0..self.nrows {
            let mut s = Complex64::ZERO;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                s += self.vals[k] * x[self.col_idx[k]];
            }
            y[r] = s;
        }
        y
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.vals.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `‖A − A†‖_F`, zero for Hermitian matrices.
    pub fn hermiticity_defect(&self) -> f64 {
        self.sub(&self.adjoint()).frobenius_norm()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.iter() {
            m[(r, c)] = v;
        }
        m
    }

    /// Dense real part; `None` if any entry has |imag| above `tol`.
    pub fn to_dense_real(&self, tol: f64) -> Option<DMatrix<f64>> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.iter() {
            if v.im.abs() > tol {
                return None;
            }
            m[(r, c)] = v.re;
        }
        Some(m)
    }

    /// Extract the submatrix with the given row and column index sets.
    /// Returns the block together with the largest |entry| whose row lies
    /// outside `rows` but whose column is selected (the "leakage" of a
    /// would-be invariant subspace).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> (Self, f64) {
        let mut row_of = vec![usize::MAX; self.nrows];
        for (i, &r) in rows.iter().enumerate() {
            row_of[r] = i;
        }
        let mut col_of = vec![usize::MAX; self.ncols];
        for (i, &c) in cols.iter().enumerate() {
            col_of[c] = i;
        }
        let mut leak = 0.0f64;
        let mut triplets = Vec::new();
        for (r, c, v) in self.iter() {
            if col_of[c] == usize::MAX {
                continue;
            }
            if row_of[r] == usize::MAX {
                leak = leak.max(v.norm());
            } else {
                triplets.push((row_of[r], col_of[c], v));
            }
        }
        (Self::from_triplets(rows.len(), cols.len(), triplets), leak)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn triplets_sum_duplicates_and_drop_zeros() {
        let m = CsMat::from_triplets(
            2,
            2,
            vec![(0, 1, c(1.0, 0.0)), (0, 1, c(2.0, 0.0)), (1, 0, c(3.0, 0.0)), (1, 0, c(-3.0, 0.0))],
        );
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 1), c(3.0, 0.0));
        assert_eq!(m.get(1, 0), Complex64::ZERO);
    }

    #[test]
    fn adjoint_conjugates() {
        let m = CsMat::from_triplets(2, 3, vec![(0, 2, c(1.0, 2.0))]);
        let a = m.adjoint();
        assert_eq!(a.nrows(), 3);
        assert_eq!(a.get(2, 0), c(1.0, -2.0));
    }

    #[test]
    fn submatrix_reports_leakage() {
        let m = CsMat::from_triplets(3, 3, vec![(0, 0, c(1.0, 0.0)), (2, 0, c(0.5, 0.0))]);
        let (blk, leak) = m.submatrix(&[0, 1], &[0, 1]);
        assert_eq!(blk.get(0, 0), c(1.0, 0.0));
        assert!((leak - 0.5).abs() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Sparse arithmetic agrees with the dense reference.
        #[test]
        fn matches_dense_reference(
            n in 1usize..6,
            m in 1usize..6,
            k in 1usize..6,
            a in proptest::collection::vec((0.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0), 0..24),
            b in proptest::collection::vec((0.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0), 0..24),
        ) {
            let build = |rows: usize, cols: usize, data: &[(f64, f64, f64)]| {
                CsMat::from_triplets(rows, cols, data.iter().map(|&(p, re, im)| {
                    let idx = (p * (rows * cols) as f64) as usize % (rows * cols);
                    (idx / cols, idx % cols, c(re, im))
                }))
            };
            let sa = build(n, k, &a);
            let sb = build(k, m, &b);
            let dense = sa.to_dense() * sb.to_dense();
            let sparse = sa.matmul(&sb).to_dense();
            prop_assert!((dense - sparse).norm() < 1e-12);

            let sb2 = build(n, k, &b);
            let dsum = sa.to_dense() + sb2.to_dense();
            prop_assert!((dsum - sa.add(&sb2).to_dense()).norm() < 1e-12);

            let x: Vec<Complex64> = (0..k).map(|i| c(i as f64 * 0.3 - 1.0, 0.7)).collect();
            let yd = sa.to_dense() * nalgebra::DVector::from_column_slice(&x);
            let ys = sa.matvec(&x);
            for i in 0..n {
                prop_assert!((yd[i] - ys[i]).norm() < 1e-12);
            }
        }
    }
}
