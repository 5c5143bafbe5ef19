use nalgebra::Matrix4;

use super::density::DensityMatrix;
use super::ops::ModeOps;
use crate::error::{Error, Result};
use crate::gaussian::SqueezeParam;
use crate::linalg::{c, CMatrix, C64, ZERO};
use crate::TRUNCATION_TOL;

/// Mean photon number per mode of the TMSV, `sinh²κ`.
pub fn mean_photon(sp: SqueezeParam) -> f64 {
    sp.kappa().sinh().powi(2)
}

/// Truncated Schmidt coefficients of the two-mode squeezed vacuum,
/// `c_n = (e^{iφ} tanh κ)ⁿ / cosh κ` for `n = 0..=cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockTMSV {
    pub sp: SqueezeParam,
    pub cutoff: usize,
    pub coeffs: Vec<C64>,
}

pub fn tmsv_fock(sp: SqueezeParam, cutoff: usize) -> FockTMSV {
    let t = sp.kappa().tanh();
    let ratio = C64::from_polar(t, sp.phase());
    let mut coeffs = Vec::with_capacity(cutoff + 1);
    let mut cur = c(1.0 / sp.kappa().cosh());
    for _ in 0..=cutoff {
        coeffs.push(cur);
        cur *= ratio;
    }
    FockTMSV { sp, cutoff, coeffs }
}

impl FockTMSV {
    /// `1 − Σ|c_n|²`, evaluated from the coefficients.
    pub fn norm_deficit(&self) -> f64 {
        1.0 - self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    /// Closed form of the norm deficit, `tanh^{2(N+1)} κ`.
    pub fn tail_mass(&self) -> f64 {
        tail_mass(self.sp, self.cutoff)
    }

    /// Photon-number distribution shared by both modes, renormalized over the
    /// truncated support.
    pub fn photon_distribution(&self) -> Vec<f64> {
        let p: Vec<f64> = self.coeffs.iter().map(|z| z.norm_sqr()).collect();
        let total: f64 = p.iter().sum();
        p.into_iter().map(|x| x / total).collect()
    }

    /// Two-mode amplitude matrix `ψ[n_s, n_i]`, without renormalization.
    pub fn to_pure(&self) -> TwoModePure {
        let d = self.cutoff + 1;
        let mut amps = CMatrix::zeros(d, d);
        for (n, &cn) in self.coeffs.iter().enumerate() {
            amps[(n, n)] = cn;
        }
        TwoModePure { amps }
    }
}

fn tail_mass(sp: SqueezeParam, cutoff: usize) -> f64 {
    sp.kappa().tanh().powf(2.0 * (cutoff as f64 + 1.0))
}

/// Pure state of a signal–idler pair stored as its amplitude matrix
/// `ψ[n_s, n_i] = ⟨n_s, n_i|ψ⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModePure {
    pub amps: CMatrix,
}

impl TwoModePure {
    pub fn cutoff_signal(&self) -> usize {
        self.amps.nrows() - 1
    }

    pub fn cutoff_idler(&self) -> usize {
        self.amps.ncols() - 1
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm_sqr().sqrt();
        Self {
            amps: self.amps.unscale(n),
        }
    }

    pub fn amplitude(&self, n_s: usize, n_i: usize) -> C64 {
        self.amps[(n_s, n_i)]
    }

    /// `⟨ψ| O_s ⊗ O_i |ψ⟩ = tr(Ψ† O_s Ψ O_iᵀ)`.
    pub fn expect_local(&self, op_signal: &CMatrix, op_idler: &CMatrix) -> Result<C64> {
        if op_signal.shape() != (self.amps.nrows(), self.amps.nrows())
            || op_idler.shape() != (self.amps.ncols(), self.amps.ncols())
        {
            return Err(Error::InvalidArgument(
                "operator dimensions do not match the two-mode state".into(),
            ));
        }
        let moved = op_signal * &self.amps * op_idler.transpose();
        Ok(self
            .amps
            .iter()
            .zip(moved.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Symmetrized quadrature covariance in `(q_s, p_s, q_i, p_i)` order.
    ///
    /// Single-mode products are taken from a padded basis so the top Fock
    /// level carries exact matrix elements.
    pub fn quadrature_covariance(&self) -> Matrix4<f64> {
        let quads = |cutoff: usize| -> [CMatrix; 2] {
            let ops = ModeOps::new(cutoff);
            [ops.q(), ops.p()]
        };
        let products = |cutoff: usize| -> [[CMatrix; 2]; 2] {
            let big = ModeOps::new(cutoff + 2);
            let ops = [big.q(), big.p()];
            let d = cutoff + 1;
            let mut out: [[CMatrix; 2]; 2] = Default::default();
            for i in 0..2 {
                for j in 0..2 {
                    let sym = (&ops[i] * &ops[j] + &ops[j] * &ops[i]) * c(0.5);
                    out[i][j] = sym.view((0, 0), (d, d)).into_owned();
                }
            }
            out
        };
        let (ns, ni) = (self.cutoff_signal(), self.cutoff_idler());
        let xs = quads(ns);
        let xi = quads(ni);
        let ps = products(ns);
        let pi = products(ni);
        let id_s = CMatrix::identity(ns + 1, ns + 1);
        let id_i = CMatrix::identity(ni + 1, ni + 1);

        let ev = |a: &CMatrix, b: &CMatrix| self.expect_local(a, b).expect("matching dims").re;
        let means = [
            ev(&xs[0], &id_i),
            ev(&xs[1], &id_i),
            ev(&id_s, &xi[0]),
            ev(&id_s, &xi[1]),
        ];
        let mut cov = Matrix4::zeros();
        for j in 0..4 {
            for k in j..4 {
                let second = match (j / 2, k / 2) {
                    (0, 0) => ev(&ps[j % 2][k % 2], &id_i),
                    (1, 1) => ev(&id_s, &pi[j % 2][k % 2]),
                    _ => ev(&xs[j % 2], &xi[k % 2]),
                };
                let v = second - means[j] * means[k];
                cov[(j, k)] = v;
                cov[(k, j)] = v;
            }
        }
        cov
    }

    pub fn to_density(&self) -> DensityMatrix {
        let (ds, di) = self.amps.shape();
        let psi = nalgebra::DVector::from_fn(ds * di, |k, _| self.amps[(k / di, k % di)]);
        DensityMatrix::from_parts(vec![ds, di], &psi * psi.adjoint())
    }
}

/// Applies `exp(ζ a_s† a_i† − ζ* a_s a_i)` with `ζ = κ e^{iφ}` to the two-mode
/// vacuum in the truncated basis and renormalizes.
///
/// With `φ = π/2` the result reproduces the `(i tanh κ)ⁿ / cosh κ` expansion.
/// The exponential is applied by Taylor steps of the generator's action on the
/// full `(cutoff+1)²` amplitude array.
pub fn squeeze_vacuum_operator(sp: SqueezeParam, cutoff: usize) -> Result<TwoModePure> {
    let tail = tail_mass(sp, cutoff);
    if !(tail < TRUNCATION_TOL) {
        return Err(Error::Truncation {
            what: "squeezed vacuum tail",
            defect: tail,
            tol: TRUNCATION_TOL,
        });
    }
    let d = cutoff + 1;
    let zeta = C64::from_polar(sp.kappa(), sp.phase());
    let sqrt: Vec<f64> = (0..=d).map(|n| (n as f64).sqrt()).collect();
    let apply = |psi: &CMatrix| -> CMatrix {
        let mut out = CMatrix::zeros(d, d);
        for n in 0..d {
            for m in 0..d {
                let mut acc = ZERO;
                if n > 0 && m > 0 {
                    acc += zeta * (sqrt[n] * sqrt[m]) * psi[(n - 1, m - 1)];
                }
                if n + 1 < d && m + 1 < d {
                    acc -= zeta.conj() * (sqrt[n + 1] * sqrt[m + 1]) * psi[(n + 1, m + 1)];
                }
                out[(n, m)] = acc;
            }
        }
        out
    };

    // ‖G‖ ≤ 2κ·cutoff; keep each step's norm at most 1.
    let steps = ((2.0 * sp.kappa() * cutoff as f64).ceil() as usize).max(1);
    let h = 1.0 / steps as f64;
    let mut psi = CMatrix::zeros(d, d);
    psi[(0, 0)] = c(1.0);
    for _ in 0..steps {
        let mut term = psi.clone();
        let mut acc = psi.clone();
        for k in 1..=80 {
            term = apply(&term) * c(h / k as f64);
            acc += &term;
            if term.norm() <= 1e-18 * acc.norm() {
                break;
            }
        }
        psi = acc;
    }
    Ok(TwoModePure { amps: psi }.normalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn sp(k: f64) -> SqueezeParam {
        SqueezeParam::with_kappa(k).unwrap()
    }

    #[test]
    fn vacuum_limit() {
        let f = tmsv_fock(sp(0.0), 5);
        assert_eq!(f.coeffs[0], c(1.0));
        assert!(f.coeffs[1..].iter().all(|z| *z == ZERO));
        assert_eq!(f.norm_deficit(), 0.0);
    }

    #[test]
    fn kappa_half_coefficients() {
        let f = tmsv_fock(sp(0.5), 10);
        assert_abs_diff_eq!(f.coeffs[0].norm(), 0.8868, epsilon = 1e-4);
        assert_abs_diff_eq!(f.coeffs[1].norm(), 0.4098, epsilon = 1e-4);
        assert_abs_diff_eq!(f.coeffs[1].arg(), FRAC_PI_2, epsilon = 1e-12);
        assert_abs_diff_eq!(f.coeffs[1].norm_sqr(), 0.1679477, epsilon = 1e-7);
        // i² = −1: c₂ is real and negative
        assert!(f.coeffs[2].re < 0.0 && f.coeffs[2].im.abs() < 1e-15);
    }

    #[test]
    fn norm_deficit_matches_geometric_tail() {
        let f = tmsv_fock(sp(0.5), 10);
        assert_abs_diff_eq!(f.tail_mass(), 4.2e-8, epsilon = 0.1e-8);
        for k in [0.1, 0.5, 1.0, 1.5] {
            for n in [0, 3, 10, 40] {
                let f = tmsv_fock(sp(k), n);
                assert_abs_diff_eq!(f.norm_deficit(), f.tail_mass(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn mean_photon_values() {
        assert_eq!(mean_photon(sp(0.0)), 0.0);
        assert_abs_diff_eq!(mean_photon(sp(0.5)), 0.27154, epsilon = 1e-5);
        let f = tmsv_fock(sp(0.5), 40);
        let direct: f64 = f
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, z)| n as f64 * z.norm_sqr())
            .sum();
        assert_abs_diff_eq!(direct, mean_photon(sp(0.5)), epsilon = 1e-12);
        assert_abs_diff_eq!(mean_photon(sp(3.0)), 100.36, epsilon = 1e-2);
    }

    #[test]
    fn operator_exponential_reproduces_expansion() {
        let op = squeeze_vacuum_operator(sp(0.5), 30).unwrap();
        let f = tmsv_fock(sp(0.5), 30);
        for n in 0..=30 {
            assert!((op.amplitude(n, n) - f.coeffs[n]).norm() < 1e-10, "n={n}");
        }
        let vac = squeeze_vacuum_operator(sp(0.0), 4).unwrap();
        assert_eq!(vac.amplitude(0, 0), c(1.0));
        assert!((vac.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn generator_sign_convention() {
        // first-order term of exp(ζ a†b† − ζ* ab)|00⟩ is ζ|11⟩, so ζ = iκ gives c₁ ∝ +i
        let op = squeeze_vacuum_operator(sp(0.1), 12).unwrap();
        let c1 = op.amplitude(1, 1);
        assert!(c1.im > 0.0 && c1.re.abs() < 1e-14);
    }

    #[test]
    fn operator_exponential_only_populates_pairs() {
        // tanh^{2(N+1)}(1.5) < 1e-6 needs N ≥ 69
        let op = squeeze_vacuum_operator(sp(1.5), 70).unwrap();
        for n in 0..=70 {
            for m in 0..=70 {
                if n != m {
                    assert!(op.amplitude(n, m).norm() < 1e-10);
                }
            }
        }
        assert!(op.amplitude(3, 3).norm() > 0.1);
    }

    #[test]
    fn insufficient_cutoff_is_a_truncation_error() {
        assert!(matches!(
            squeeze_vacuum_operator(sp(1.5), 60),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn general_phase_coefficients() {
        let s = SqueezeParam::new(0.7, 1.0).unwrap();
        let f = tmsv_fock(s, 3);
        assert_abs_diff_eq!(f.coeffs[2].arg(), 2.0, epsilon = 1e-12);
        let op = squeeze_vacuum_operator(s, 60).unwrap();
        for n in 0..=3 {
            assert!((op.amplitude(n, n) - f.coeffs[n]).norm() < 1e-10);
        }
    }
}
