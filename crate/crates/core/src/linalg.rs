//! Small dense linear-algebra helpers shared by the Fock and Chernoff code.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[inline]
pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Kronecker product `a ⊗ b`; the left factor carries the slow index.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Largest entrywise deviation `|m_ij − conj(m_ji)|`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Columns are the eigenvectors, in the order of `values`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(m: &CMatrix) -> Self {
        let n = m.nrows();
        if n == 0 {
            return Self {
                values: Vec::new(),
                vectors: CMatrix::zeros(0, 0),
            };
        }
        // symmetrize so the solver sees an exactly Hermitian input
        let h = (m + m.adjoint()).scale(0.5);
        let eig = h.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        Self { values, vectors }
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Rebuilds `V f(Λ) V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (j, &v) in self.values.iter().enumerate() {
            let fv = f(v);
            for i in 0..n {
                scaled[(i, j)] *= fv;
            }
        }
        &scaled * self.vectors.adjoint()
    }
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    HermitianEigen::new(m).min()
}

/// Partition of `0..n` into the connected components of the sparsity graph of
/// the given square matrices (an edge wherever any matrix has a nonzero entry).
///
/// Every matrix is block diagonal with respect to the returned index groups,
/// so spectral computations can run block by block.
pub fn common_blocks(mats: &[&CMatrix]) -> Vec<Vec<usize>> {
    let n = mats.first().map_or(0, |m| m.nrows());
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for m in mats {
        for j in 0..n {
            for i in 0..j {
                if m[(i, j)] != ZERO || m[(j, i)] != ZERO {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri.max(rj)] = ri.min(rj);
                    }
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

/// Principal submatrix on the given index set.
pub fn submatrix(m: &CMatrix, idx: &[usize]) -> CMatrix {
    CMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_of_identities_is_identity() {
        let k = kron(&CMatrix::identity(2, 2), &CMatrix::identity(3, 3));
        assert_eq!(k, CMatrix::identity(6, 6));
    }

    #[test]
    fn kron_index_order() {
        let a = CMatrix::from_row_slice(2, 2, &[ONE, c(2.0), c(3.0), c(4.0)]);
        let b = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let k = kron(&a, &b);
        assert_eq!(k[(0, 1)], ONE);
        assert_eq!(k[(1, 2)], c(2.0));
        assert_eq!(k[(2, 1)], c(3.0));
        assert_eq!(k[(3, 2)], c(4.0));
    }

    #[test]
    fn eigen_roundtrip_and_order() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[c(2.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0), c(2.0)],
        );
        let e = HermitianEigen::new(&m);
        assert!((e.values[0] - 1.0).abs() < 1e-12);
        assert!((e.values[1] - 3.0).abs() < 1e-12);
        let back = e.map(|x| x);
        assert!((back - m).camax() < 1e-12);
    }

    #[test]
    fn blocks_follow_sparsity() {
        let mut a = CMatrix::zeros(4, 4);
        a[(0, 2)] = ONE;
        a[(2, 0)] = ONE;
        let mut b = CMatrix::zeros(4, 4);
        b[(1, 3)] = c(0.5);
        let blocks = common_blocks(&[&a, &b]);
        assert_eq!(blocks, vec![vec![0, 2], vec![1, 3]]);
    }
}
