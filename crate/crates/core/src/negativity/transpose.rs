//! Partial transposition on the second factor of a bipartite operator and the
//! negativity read off its spectrum.
//!
//! Product basis index is `i_a * dim_b + i_b`.

use std::collections::BTreeMap;

use nalgebra::{ComplexField, DMatrix};

use crate::linalg::UnionFind;

/// Eigenvalues below `-NEGATIVE_EIGENVALUE_TOLERANCE` count as negative.
pub const NEGATIVE_EIGENVALUE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PartialTransposeSpectrum {
    /// `sum |lambda|` over negative eigenvalues.
    pub negativity: f64,
    pub negative_count: usize,
    pub min_eigenvalue: f64,
}

impl PartialTransposeSpectrum {
    pub fn from_eigenvalues<I: IntoIterator<Item = f64>>(eigenvalues: I) -> Self {
        let mut negativity = 0.0;
        let mut negative_count = 0;
        let mut min_eigenvalue = f64::INFINITY;
        for l in eigenvalues {
            min_eigenvalue = min_eigenvalue.min(l);
            if l < -NEGATIVE_EIGENVALUE_TOLERANCE {
                negativity -= l;
                negative_count += 1;
            }
        }
        PartialTransposeSpectrum {
            negativity,
            negative_count,
            min_eigenvalue,
        }
    }
}

/// `<a b| rho^{T_B} |a' b'> = <a b'| rho |a' b>`.
pub fn partial_transpose<T: ComplexField + Copy>(rho: &DMatrix<T>, dim_a: usize, dim_b: usize) -> DMatrix<T> {
    let n = dim_a * dim_b;
    assert_eq!(rho.nrows(), n, "operator is not on a {dim_a}x{dim_b} product space");
    assert_eq!(rho.ncols(), n);
    DMatrix::from_fn(n, n, |row, col| {
        let (a, b) = (row / dim_b, row % dim_b);
        let (ap, bp) = (col / dim_b, col % dim_b);
        rho[(a * dim_b + bp, ap * dim_b + b)]
    })
}

/// Dense route: partial transpose then a full Hermitian eigendecomposition.
pub fn negativity_of_density_matrix<T: ComplexField<RealField = f64> + Copy>(
    rho: &DMatrix<T>,
    dim_a: usize,
    dim_b: usize,
) -> PartialTransposeSpectrum {
    let pt = partial_transpose(rho, dim_a, dim_b);
    PartialTransposeSpectrum::from_eigenvalues(pt.symmetric_eigenvalues().iter().copied())
}

/// A real symmetric operator on a product space, stored by its nonzero entries.
#[derive(Debug, Clone, Default)]
pub struct SparseSymmetric {
    dim_a: usize,
    dim_b: usize,
    entries: BTreeMap<(usize, usize), f64>,
}

impl SparseSymmetric {
    pub fn new(dim_a: usize, dim_b: usize) -> Self {
        SparseSymmetric {
            dim_a,
            dim_b,
            entries: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn index(&self, a: usize, b: usize) -> usize {
        a * self.dim_b + b
    }

    /// Adds `value` at `(row, col)`; exact zeros are not stored.
    pub fn add(&mut self, row: usize, col: usize, value: f64) {
        if value != 0.0 {
            *self.entries.entry((row, col)).or_insert(0.0) += value;
        }
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries.get(&(row, col)).copied().unwrap_or(0.0)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim(), self.dim());
        for (&(i, j), &v) in &self.entries {
            m[(i, j)] = v;
        }
        m
    }

    /// Same index map as [`partial_transpose`], applied entry by entry.
    pub fn partial_transpose(&self) -> SparseSymmetric {
        let db = self.dim_b;
        let mut out = SparseSymmetric::new(self.dim_a, self.dim_b);
        for (&(row, col), &v) in &self.entries {
            let (a, bp) = (row / db, row % db);
            let (ap, b) = (col / db, col % db);
            out.entries.insert((a * db + b, ap * db + bp), v);
        }
        out
    }

    /// Splits the nonzero pattern into connected components. Basis states
    /// touched by no entry are left out (each is a zero eigenvalue).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut touched: Vec<usize> = self.entries.keys().flat_map(|&(i, j)| [i, j]).collect();
        touched.sort_unstable();
        touched.dedup();
        let local = |g: usize| touched.binary_search(&g).expect("touched index");
        let mut uf = UnionFind::new(touched.len());
        for &(i, j) in self.entries.keys() {
            uf.union(local(i), local(j));
        }
        uf.groups()
            .into_iter()
            .map(|g| g.into_iter().map(|l| touched[l]).collect())
            .collect()
    }

    /// All eigenvalues of the stored components (untouched basis states
    /// are omitted), each component diagonalized densely.
    pub fn component_eigenvalues(&self, max_component: usize) -> Result<Vec<f64>, usize> {
        let mut eigenvalues = Vec::new();
        for comp in self.components() {
            let k = comp.len();
            if k > max_component {
                return Err(k);
            }
            let block = DMatrix::from_fn(k, k, |i, j| self.get(comp[i], comp[j]));
            eigenvalues.extend(block.symmetric_eigenvalues().iter().copied());
        }
        Ok(eigenvalues)
    }
}
