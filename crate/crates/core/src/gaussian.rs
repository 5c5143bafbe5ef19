//! Two-mode Gaussian states in the covariance-matrix picture.
//!
//! Phase-space ordering is `(q_s, p_s, q_i, p_i)` with `q = a + a†` and
//! `p = i(a† − a)`; the vacuum covariance is the 4×4 identity and the Wigner
//! function of a state with mean `m` and covariance `V` is
//!
//! ```text
//! W(r) = exp(−½ (r−m)ᵀ V⁻¹ (r−m)) / ((2π)² √det V)
//! ```

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};

use crate::error::{invalid, Error, Result};
use crate::linalg::{CMatrix, HermitianEigen, C64};

/// Symmetry tolerance for covariance matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Lower bound on `min eig(V + iΩ)` for a physical state.
pub const UNCERTAINTY_TOL: f64 = 1e-9;
/// Determinant below which the covariance is treated as singular.
pub const DEGENERATE_DET: f64 = 1e-300;

/// Squeezing modulus `kappa ≥ 0` and phase in `[0, 2π)`.
///
/// The TMSV amplitudes are `(e^{iφ} tanh κ)ⁿ / cosh κ`, so the factor `iⁿ`
/// of the standard JTWPA expansion corresponds to `φ = π/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParam {
    kappa: f64,
    phase: f64,
}

impl SqueezeParam {
    pub fn new(kappa: f64, phase: f64) -> Result<Self> {
        if !kappa.is_finite() || kappa < 0.0 {
            return invalid(format!("kappa must be finite and >= 0, got {kappa}"));
        }
        if !phase.is_finite() {
            return invalid(format!("phase must be finite, got {phase}"));
        }
        let mut phase = phase.rem_euclid(TAU);
        if phase >= TAU {
            phase = 0.0;
        }
        Ok(Self { kappa, phase })
    }

    /// `φ = π/2`, the `iⁿ` convention.
    pub fn with_kappa(kappa: f64) -> Result<Self> {
        Self::new(kappa, FRAC_PI_2)
    }

    /// Squeezer whose mean photon number per mode is `n_s = sinh²κ`.
    pub fn from_mean_photons(n_s: f64) -> Result<Self> {
        if !n_s.is_finite() || n_s < 0.0 {
            return invalid(format!("mean photon number must be >= 0, got {n_s}"));
        }
        Self::with_kappa(n_s.sqrt().asinh())
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }
}

/// Phase-space coordinate of the two-mode system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quadrature {
    SignalQ,
    SignalP,
    IdlerQ,
    IdlerP,
}

impl Quadrature {
    pub const ALL: [Quadrature; 4] = [
        Quadrature::SignalQ,
        Quadrature::SignalP,
        Quadrature::IdlerQ,
        Quadrature::IdlerP,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Quadrature::SignalQ => "q_s",
            Quadrature::SignalP => "p_s",
            Quadrature::IdlerQ => "q_i",
            Quadrature::IdlerP => "p_i",
        }
    }
}

impl fmt::Display for Quadrature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quadrature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "q_s" | "qs" => Ok(Quadrature::SignalQ),
            "p_s" | "ps" => Ok(Quadrature::SignalP),
            "q_i" | "qi" => Ok(Quadrature::IdlerQ),
            "p_i" | "pi" => Ok(Quadrature::IdlerP),
            other => invalid(format!("unknown quadrature '{other}'")),
        }
    }
}

/// Outcome of the `V + iΩ ⪰ 0` test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyReport {
    pub passed: bool,
    pub min_eigenvalue: f64,
}

/// Quadrature means and covariance of a two-mode Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeGaussianState {
    mean: Vector4<f64>,
    cov: Matrix4<f64>,
}

impl TwoModeGaussianState {
    /// Checks finiteness and symmetry only; physicality is reported by
    /// [`uncertainty_check`](Self::uncertainty_check).
    pub fn new(mean: Vector4<f64>, cov: Matrix4<f64>) -> Result<Self> {
        if mean.iter().chain(cov.iter()).any(|v| !v.is_finite()) {
            return invalid("mean and covariance must be finite");
        }
        let asym = (cov - cov.transpose()).amax();
        if asym > SYMMETRY_TOL {
            return invalid(format!("covariance not symmetric (deviation {asym:e})"));
        }
        Ok(Self { mean, cov })
    }

    pub fn vacuum() -> Self {
        Self {
            mean: Vector4::zeros(),
            cov: Matrix4::identity(),
        }
    }

    /// Covariance of the two-mode squeezed vacuum.
    ///
    /// Diagonal blocks are `cosh 2κ · I₂`; the signal–idler block is
    /// `sinh 2κ · [[cos φ, sin φ], [sin φ, −cos φ]]`.
    pub fn tmsv(sp: SqueezeParam) -> Self {
        let ch = (2.0 * sp.kappa).cosh();
        let sh = (2.0 * sp.kappa).sinh();
        let (sin, cos) = sp.phase.sin_cos();
        let (xc, xs) = (sh * cos, sh * sin);
        #[rustfmt::skip]
        let cov = Matrix4::new(
            ch,  0.0, xc,  xs,
            0.0, ch,  xs,  -xc,
            xc,  xs,  ch,  0.0,
            xs,  -xc, 0.0, ch,
        );
        Self {
            mean: Vector4::zeros(),
            cov,
        }
    }

    pub fn mean(&self) -> &Vector4<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &Matrix4<f64> {
        &self.cov
    }

    /// Determinant via the Schur complement of the signal block, which keeps
    /// `det = 1` for strongly squeezed pure states where plain LU cancels.
    pub fn det(&self) -> f64 {
        let a = self.cov.fixed_view::<2, 2>(0, 0).into_owned();
        let b = self.cov.fixed_view::<2, 2>(0, 2).into_owned();
        let d = self.cov.fixed_view::<2, 2>(2, 2).into_owned();
        match a.try_inverse() {
            Some(ainv) => a.determinant() * (d - b.transpose() * ainv * b).determinant(),
            None => self.cov.determinant(),
        }
    }

    pub fn is_pure(&self) -> bool {
        (self.det() - 1.0).abs() <= 1e-9
    }

    /// Variance of `Σ coeffs_k x_k`, i.e. `cᵀ V c`.
    pub fn quadrature_variance(&self, coeffs: &Vector4<f64>) -> Result<f64> {
        if coeffs.iter().all(|&c| c == 0.0) {
            return invalid("quadrature coefficients are all zero");
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return invalid("quadrature coefficients must be finite");
        }
        Ok((coeffs.transpose() * self.cov * coeffs)[(0, 0)])
    }

    /// Minimum eigenvalue of `V + iΩ`, with `Ω = ⊕ [[0, 1], [−1, 0]]`.
    pub fn uncertainty_check(&self) -> UncertaintyReport {
        let m = CMatrix::from_fn(4, 4, |i, j| {
            let omega = match (i, j) {
                (0, 1) | (2, 3) => 1.0,
                (1, 0) | (3, 2) => -1.0,
                _ => 0.0,
            };
            C64::new(self.cov[(i, j)], omega)
        });
        let min = HermitianEigen::new(&m).min();
        UncertaintyReport {
            passed: min >= -UNCERTAINTY_TOL,
            min_eigenvalue: min,
        }
    }

    fn precision(&self) -> Result<(Matrix4<f64>, f64)> {
        let det = self.det();
        if det.is_nan() || det <= DEGENERATE_DET {
            return Err(Error::DegenerateState { det });
        }
        let inv = self
            .cov
            .try_inverse()
            .ok_or(Error::DegenerateState { det })?;
        Ok((inv, det))
    }

    pub fn wigner_density(&self, point: &Vector4<f64>) -> Result<f64> {
        let (inv, det) = self.precision()?;
        Ok(gaussian_at(&inv, det, &(point - self.mean)))
    }

    /// Evaluates the Wigner function on a 2-D slice.
    pub fn wigner_grid(&self, spec: &GridSpec) -> Result<WignerGrid> {
        spec.validate()?;
        let (inv, det) = self.precision()?;
        let (ax, ay) = spec.plane;
        let others = spec.fixed_axes();
        let xs = spec.x_axis.points();
        let ys = spec.y_axis.points();
        let mut values = Vec::with_capacity(xs.len() * ys.len());
        let mut r = Vector4::zeros();
        r[others[0].index()] = spec.fixed_values[0];
        r[others[1].index()] = spec.fixed_values[1];
        for &x in &xs {
            for &y in &ys {
                r[ax.index()] = x;
                r[ay.index()] = y;
                values.push(gaussian_at(&inv, det, &(r - self.mean)));
            }
        }
        Ok(WignerGrid {
            spec: spec.clone(),
            values,
        })
    }

    /// Marginal Wigner density of the two quadratures outside `plane`,
    /// evaluated at `fixed`; equals the integral of the slice over the plane.
    pub fn slice_mass(&self, plane: (Quadrature, Quadrature), fixed: [f64; 2]) -> Result<f64> {
        let others = complement(plane)?;
        let idx = [others[0].index(), others[1].index()];
        let sub = Matrix2::from_fn(|i, j| self.cov[(idx[i], idx[j])]);
        let det = sub.determinant();
        if det <= DEGENERATE_DET {
            return Err(Error::DegenerateState { det });
        }
        let inv = sub.try_inverse().ok_or(Error::DegenerateState { det })?;
        let d = Vector2::new(fixed[0] - self.mean[idx[0]], fixed[1] - self.mean[idx[1]]);
        let quad = (d.transpose() * inv * d)[(0, 0)];
        Ok((-0.5 * quad).exp() / (2.0 * PI * det.sqrt()))
    }

    /// Covariance of the normalized slice through `plane` at fixed outer
    /// coordinates: the inverse of the corresponding precision sub-block.
    pub fn slice_covariance(&self, plane: (Quadrature, Quadrature)) -> Result<Matrix2<f64>> {
        complement(plane)?;
        let (inv, det) = self.precision()?;
        let idx = [plane.0.index(), plane.1.index()];
        let sub = Matrix2::from_fn(|i, j| inv[(idx[i], idx[j])]);
        sub.try_inverse().ok_or(Error::DegenerateState { det })
    }
}

fn gaussian_at(inv: &Matrix4<f64>, det: f64, d: &Vector4<f64>) -> f64 {
    let quad = (d.transpose() * inv * d)[(0, 0)];
    (-0.5 * quad).exp() / ((2.0 * PI).powi(2) * det.sqrt())
}

/// Convenience wrapper for [`TwoModeGaussianState::tmsv`].
pub fn tmsv_covariance(sp: SqueezeParam) -> TwoModeGaussianState {
    TwoModeGaussianState::tmsv(sp)
}

/// The two quadratures not in `plane`, in ascending order.
pub fn complement(plane: (Quadrature, Quadrature)) -> Result<[Quadrature; 2]> {
    if plane.0 == plane.1 {
        return invalid(format!("plane axes must differ, got {} twice", plane.0));
    }
    let rest: Vec<Quadrature> = Quadrature::ALL
        .into_iter()
        .filter(|q| *q != plane.0 && *q != plane.1)
        .collect();
    Ok([rest[0], rest[1]])
}

/// Uniformly sampled closed interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub samples: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, samples: usize) -> Self {
        Self { min, max, samples }
    }

    pub fn symmetric(half_width: f64, samples: usize) -> Self {
        Self::new(-half_width, half_width, samples)
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.samples - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.samples).map(|k| self.min + h * k as f64).collect()
    }

    fn validate(&self, name: &str) -> Result<()> {
        if self.samples < 2 {
            return invalid(format!("{name} axis needs at least 2 samples"));
        }
        if !self.min.is_finite() || !self.max.is_finite() || self.max <= self.min {
            return invalid(format!(
                "{name} axis range [{}, {}] must be finite and increasing",
                self.min, self.max
            ));
        }
        Ok(())
    }
}

/// Which slice of the 4-D Wigner function to sample.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub plane: (Quadrature, Quadrature),
    /// Values of the two remaining quadratures, in ascending quadrature order.
    pub fixed_values: [f64; 2],
    pub x_axis: Axis,
    pub y_axis: Axis,
}

impl GridSpec {
    pub fn fixed_axes(&self) -> [Quadrature; 2] {
        complement(self.plane).expect("validated plane")
    }

    fn validate(&self) -> Result<()> {
        complement(self.plane)?;
        if self.fixed_values.iter().any(|v| !v.is_finite()) {
            return invalid("fixed quadrature values must be finite");
        }
        self.x_axis.validate("first")?;
        self.y_axis.validate("second")
    }
}

/// Wigner densities on a 2-D slice.
///
/// `values` is row-major with the first plane axis as the slow index:
/// `values[i * ny + j]` is the density at `(x_i, y_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub spec: GridSpec,
    pub values: Vec<f64>,
}

impl WignerGrid {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.spec.y_axis.samples + j]
    }

    pub fn cell_area(&self) -> f64 {
        self.spec.x_axis.step() * self.spec.y_axis.step()
    }

    pub fn peak(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}
