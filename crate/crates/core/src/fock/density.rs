use nalgebra::DVector;

use super::Truncated;
use crate::error::{invalid, Error, Result};
use crate::linalg::{
    c, common_blocks, hermiticity_defect, submatrix, trace, CMatrix, CVector, HermitianEigen, C64,
    ZERO,
};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-8;
pub const PSD_TOL: f64 = 1e-9;

/// Density operator on a product of truncated Fock modes.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validated constructor: Hermitian, unit trace and positive semidefinite.
    pub fn new(dims: Vec<usize>, matrix: CMatrix) -> Result<Self> {
        let rho = Self::from_parts(dims, matrix);
        rho.check_shape()?;
        rho.validate()?;
        Ok(rho)
    }

    /// Constructor for states that are valid by construction.
    pub(crate) fn from_parts(dims: Vec<usize>, matrix: CMatrix) -> Self {
        Self { dims, matrix }
    }

    fn check_shape(&self) -> Result<()> {
        let d: usize = self.dims.iter().product();
        if self.dims.is_empty() || self.dims.contains(&0) {
            return invalid("mode dimensions must be nonempty and positive");
        }
        if self.matrix.shape() != (d, d) {
            return invalid(format!(
                "matrix shape {:?} does not match mode dimensions {:?}",
                self.matrix.shape(),
                self.dims
            ));
        }
        Ok(())
    }

    /// Checks the density-operator invariants, including a full
    /// eigendecomposition for positivity.
    pub fn validate(&self) -> Result<()> {
        let herm = hermiticity_defect(&self.matrix);
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min = self.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (min eigenvalue {min:e})"
            )));
        }
        Ok(())
    }

    /// Pure state `|ψ⟩⟨ψ|`, normalized.
    pub fn pure(dims: Vec<usize>, psi: &CVector) -> Result<Self> {
        let n = psi.norm();
        if n == 0.0 || !n.is_finite() {
            return invalid("state vector has zero or non-finite norm");
        }
        let psi = psi.unscale(n);
        let rho = Self::from_parts(dims, &psi * psi.adjoint());
        rho.check_shape()?;
        Ok(rho)
    }

    /// Single-mode state diagonal in the Fock basis.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        if probs.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return invalid("probabilities must be finite and nonnegative");
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > TRACE_TOL {
            return invalid(format!("probabilities sum to {total}"));
        }
        let diag = DVector::from_iterator(probs.len(), probs.iter().map(|&p| c(p)));
        Ok(Self::from_parts(
            vec![probs.len()],
            CMatrix::from_diagonal(&diag),
        ))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        trace(&self.matrix).re
    }

    /// Smallest eigenvalue, computed block by block over the sparsity pattern.
    pub fn min_eigenvalue(&self) -> f64 {
        common_blocks(&[&self.matrix])
            .iter()
            .map(|idx| HermitianEigen::new(&submatrix(&self.matrix, idx)).min())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::from_parts(dims, crate::linalg::kron(&self.matrix, &other.matrix))
    }

    /// `ρ / tr ρ`.
    pub(crate) fn renormalized(mut self) -> Self {
        let tr = self.trace();
        self.matrix.unscale_mut(tr);
        self
    }

    /// Reorders the tensor factors: mode `k` of the result is mode `order[k]`
    /// of `self`.
    pub fn permute_modes(&self, order: &[usize]) -> Result<DensityMatrix> {
        let m = self.dims.len();
        let mut seen = vec![false; m];
        if order.len() != m
            || order
                .iter()
                .any(|&k| k >= m || std::mem::replace(&mut seen[k], true))
        {
            return invalid(format!("{order:?} is not a permutation of {m} modes"));
        }
        let new_dims: Vec<usize> = order.iter().map(|&k| self.dims[k]).collect();
        let d = self.dim();
        // map new flat index -> old flat index
        let map: Vec<usize> = (0..d)
            .map(|idx| {
                let digits = unflatten(idx, &new_dims);
                let mut old = vec![0; m];
                for (k, &src) in order.iter().enumerate() {
                    old[src] = digits[k];
                }
                flatten(&old, &self.dims)
            })
            .collect();
        let matrix = CMatrix::from_fn(d, d, |i, j| self.matrix[(map[i], map[j])]);
        Ok(Self::from_parts(new_dims, matrix))
    }

    /// Reduced state on `keep` (kept in ascending mode order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let m = self.dims.len();
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() || keep.iter().any(|&k| k >= m) {
            return invalid(format!("invalid modes to keep {keep:?} for {m} modes"));
        }
        let traced: Vec<usize> = (0..m).filter(|k| !keep.contains(k)).collect();
        let kdims: Vec<usize> = keep.iter().map(|&k| self.dims[k]).collect();
        let tdims: Vec<usize> = traced.iter().map(|&k| self.dims[k]).collect();
        let dk: usize = kdims.iter().product();
        let dt: usize = tdims.iter().product();
        let compose = |ki: usize, ti: usize| -> usize {
            let kd = unflatten(ki, &kdims);
            let td = unflatten(ti, &tdims);
            let mut full = vec![0; m];
            for (slot, &mode) in keep.iter().enumerate() {
                full[mode] = kd[slot];
            }
            for (slot, &mode) in traced.iter().enumerate() {
                full[mode] = td[slot];
            }
            flatten(&full, &self.dims)
        };
        let index: Vec<Vec<usize>> = (0..dk)
            .map(|ki| (0..dt).map(|ti| compose(ki, ti)).collect())
            .collect();
        let mut out = CMatrix::zeros(dk, dk);
        for i in 0..dk {
            for j in 0..dk {
                out[(i, j)] = index[i]
                    .iter()
                    .zip(&index[j])
                    .fold(ZERO, |acc, (&r, &c)| acc + self.matrix[(r, c)]);
            }
        }
        Ok(Self::from_parts(kdims, out))
    }

    /// Photon-number distribution of one mode.
    pub fn photon_distribution(&self, mode: usize) -> Result<Vec<f64>> {
        let r = self.partial_trace(&[mode])?;
        Ok(r.matrix.diagonal().iter().map(|z| z.re).collect())
    }

    pub fn mean_photon(&self, mode: usize) -> Result<f64> {
        Ok(self
            .photon_distribution(mode)?
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum())
    }

    /// `½‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dims != other.dims {
            return invalid("trace distance between states of different shape");
        }
        let diff = &self.matrix - &other.matrix;
        Ok(0.5
            * HermitianEigen::new(&diff)
                .values
                .iter()
                .map(|v| v.abs())
                .sum::<f64>())
    }
}

pub(crate) fn unflatten(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
    out
}

pub(crate) fn flatten(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&d, &n)| acc * n + d)
}

/// Free-function form of [`DensityMatrix::partial_trace`].
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    rho.partial_trace(keep)
}

/// `tr(O ρ)`.
pub fn expectation(op: &CMatrix, rho: &DensityMatrix) -> Result<C64> {
    if op.shape() != rho.matrix.shape() {
        return invalid(format!(
            "operator shape {:?} does not match state dimension {}",
            op.shape(),
            rho.dim()
        ));
    }
    let mut acc = ZERO;
    for i in 0..rho.dim() {
        for j in 0..rho.dim() {
            acc += op[(i, j)] * rho.matrix[(j, i)];
        }
    }
    Ok(acc)
}

/// `⟨ψ|O|ψ⟩`.
pub fn expectation_pure(op: &CMatrix, psi: &CVector) -> Result<C64> {
    if op.shape() != (psi.len(), psi.len()) {
        return invalid("operator shape does not match state vector length");
    }
    Ok(psi.dotc(&(op * psi)))
}

/// Thermal state `p(n) = n̄ⁿ/(1+n̄)^{n+1}` renormalized on `0..=cutoff`; the
/// defect is the discarded tail `(n̄/(1+n̄))^{cutoff+1}`.
pub fn thermal_density(nbar: f64, cutoff: usize) -> Result<Truncated<DensityMatrix>> {
    if !nbar.is_finite() || nbar < 0.0 {
        return invalid(format!(
            "thermal occupancy must be finite and >= 0, got {nbar}"
        ));
    }
    let ratio = nbar / (1.0 + nbar);
    let mut p = Vec::with_capacity(cutoff + 1);
    let mut cur = 1.0 / (1.0 + nbar);
    for _ in 0..=cutoff {
        p.push(cur);
        cur *= ratio;
    }
    let tail = ratio.powf(cutoff as f64 + 1.0);
    let total: f64 = p.iter().sum();
    let diag = DVector::from_iterator(p.len(), p.iter().map(|&x| c(x / total)));
    Ok(Truncated {
        value: DensityMatrix::from_parts(vec![cutoff + 1], CMatrix::from_diagonal(&diag)),
        defect: tail,
    })
}
