//! Small dense helpers shared by the geometry and negativity modules.

use nalgebra::DMatrix;

/// Disjoint-set forest over `0..n`.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }

    /// Groups of indices sharing a root, each sorted, ordered by smallest member.
    pub(crate) fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            let r = self.find(i);
            by_root[r].push(i);
        }
        let mut groups: Vec<Vec<usize>> = by_root.into_iter().filter(|g| !g.is_empty()).collect();
        groups.sort_by_key(|g| g[0]);
        groups
    }
}

/// Connected components of the nonzero pattern of a square matrix.
pub(crate) fn dense_blocks(m: &DMatrix<f64>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut uf = UnionFind::new(n);
    for j in 0..n {
        for i in 0..n {
            if i != j && m[(i, j)] != 0.0 {
                uf.union(i, j);
            }
        }
    }
    uf.groups()
}

/// Principal square root of a symmetric positive definite matrix, computed
/// block by block over the connected components of its nonzero pattern so
/// that exact zeros between blocks stay exact.
///
/// Returns the root together with the smallest eigenvalue seen.
pub(crate) fn spd_sqrt(m: &DMatrix<f64>) -> (DMatrix<f64>, f64) {
    let n = m.nrows();
    let mut root = DMatrix::<f64>::zeros(n, n);
    let mut min_eigenvalue = f64::INFINITY;
    for block in dense_blocks(m) {
        let k = block.len();
        let sub = DMatrix::<f64>::from_fn(k, k, |i, j| m[(block[i], block[j])]);
        let eig = sub.symmetric_eigen();
        for &l in eig.eigenvalues.iter() {
            min_eigenvalue = min_eigenvalue.min(l);
        }
        let sqrt_vals = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
        let v = &eig.eigenvectors;
        let sub_root = v * DMatrix::from_diagonal(&sqrt_vals) * v.transpose();
        for (i, &bi) in block.iter().enumerate() {
            for (j, &bj) in block.iter().enumerate() {
                root[(bi, bj)] = sub_root[(i, j)];
            }
        }
    }
    (root, min_eigenvalue)
}

pub(crate) fn min_symmetric_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return f64::INFINITY;
    }
    m.clone().symmetric_eigenvalues().min()
}
