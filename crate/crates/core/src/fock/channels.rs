//! Beam splitter and displacement on truncated modes.
//!
//! The beam splitter `U = exp(θ(a†b − ab†))`, `cos²θ = η`, conserves the total
//! photon number, so it is assembled exactly from its fixed-total blocks.
//! Restricting it to a finite box is then exact for every input component
//! whose image stays in the box; the remainder is reported as leaked trace.

use nalgebra::DMatrix;

use super::density::DensityMatrix;
use super::tmsv::FockTMSV;
use super::{check_defect, Truncated};
use crate::error::{invalid, Result};
use crate::linalg::{c, CMatrix, C64, ZERO};

/// Beam-splitter matrix on the `T`-photon subspace, basis `|k, T−k⟩` indexed
/// by the photon number `k` of the first mode.
pub fn beam_splitter_block(total: usize, eta: f64) -> DMatrix<f64> {
    let theta = eta.clamp(0.0, 1.0).sqrt().acos();
    let d = total + 1;
    let mut g = DMatrix::<f64>::zeros(d, d);
    for k in 0..total {
        let w = theta * (((k + 1) * (total - k)) as f64).sqrt();
        g[(k + 1, k)] = w;
        g[(k, k + 1)] = -w;
    }
    g.exp()
}

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return invalid(format!("transmissivity must lie in [0, 1], got {eta}"));
    }
    Ok(())
}

/// Beam splitter restricted to the box `n_a ≤ cutoff_a`, `n_b ≤ cutoff_b`,
/// flat index `n_a·(cutoff_b+1) + n_b`.
pub fn two_mode_beam_splitter(eta: f64, cutoff_a: usize, cutoff_b: usize) -> Result<CMatrix> {
    check_eta(eta)?;
    let db = cutoff_b + 1;
    let d = (cutoff_a + 1) * db;
    let mut u = CMatrix::zeros(d, d);
    for total in 0..=(cutoff_a + cutoff_b) {
        let block = beam_splitter_block(total, eta);
        let lo = total.saturating_sub(cutoff_b);
        let hi = total.min(cutoff_a);
        for k_in in lo..=hi {
            for k_out in lo..=hi {
                let row = k_out * db + (total - k_out);
                let col = k_in * db + (total - k_in);
                u[(row, col)] = c(block[(k_out, k_in)]);
            }
        }
    }
    Ok(u)
}

/// `U ρ U†` with `U` acting on the listed modes (in that order) and identity
/// elsewhere.
fn apply_local(rho: &DensityMatrix, modes: &[usize], u: &CMatrix) -> Result<DensityMatrix> {
    let m = rho.dims().len();
    let mut seen = vec![false; m];
    if modes
        .iter()
        .any(|&k| k >= m || std::mem::replace(&mut seen[k], true))
    {
        return invalid(format!("invalid mode selection {modes:?} for {m} modes"));
    }
    let mut order: Vec<usize> = modes.to_vec();
    order.extend((0..m).filter(|k| !modes.contains(k)));
    let front = rho.permute_modes(&order)?;
    let p: usize = modes.iter().map(|&k| rho.dims()[k]).product();
    if u.shape() != (p, p) {
        return invalid("local operator does not match the selected modes");
    }
    let rest = rho.dim() / p;
    let src = front.matrix();
    let mut out = CMatrix::zeros(rho.dim(), rho.dim());
    let ud = u.adjoint();
    for r in 0..rest {
        for s in 0..rest {
            let block = CMatrix::from_fn(p, p, |i, j| src[(i * rest + r, j * rest + s)]);
            if block.iter().all(|z| *z == ZERO) {
                continue;
            }
            let moved = u * block * &ud;
            for i in 0..p {
                for j in 0..p {
                    out[(i * rest + r, j * rest + s)] = moved[(i, j)];
                }
            }
        }
    }
    let moved = DensityMatrix::from_parts(front.dims().to_vec(), out);
    let mut inverse = vec![0; m];
    for (slot, &mode) in order.iter().enumerate() {
        inverse[mode] = slot;
    }
    moved.permute_modes(&inverse)
}

fn leak_checked(
    what: &'static str,
    before: f64,
    after: DensityMatrix,
) -> Result<Truncated<DensityMatrix>> {
    let defect = (before - after.trace()).max(0.0);
    check_defect(what, defect)?;
    Ok(Truncated {
        value: after.renormalized(),
        defect,
    })
}

/// Mixes modes `pair.0` and `pair.1` on a beam splitter of transmissivity
/// `eta`: the first mode leaves as `√η a + √(1−η) b`.
pub fn beam_splitter(
    rho: &DensityMatrix,
    eta: f64,
    pair: (usize, usize),
) -> Result<Truncated<DensityMatrix>> {
    check_eta(eta)?;
    if pair.0 == pair.1 {
        return invalid("beam splitter needs two distinct modes");
    }
    let dims = rho.dims();
    if pair.0 >= dims.len() || pair.1 >= dims.len() {
        return invalid(format!("mode pair {pair:?} out of range"));
    }
    let u = two_mode_beam_splitter(eta, dims[pair.0] - 1, dims[pair.1] - 1)?;
    let out = apply_local(rho, &[pair.0, pair.1], &u)?;
    leak_checked("beam splitter leakage", rho.trace(), out)
}

fn displacement_box(alpha: C64, cutoff: usize) -> (CMatrix, f64) {
    let a = alpha.norm();
    let pad = 16 + (8.0 * a * ((cutoff as f64 + 1.0).sqrt() + a)).ceil() as usize;
    let big = cutoff + pad;
    let d = big + 1;
    let mut g = CMatrix::zeros(d, d);
    for n in 1..d {
        let s = (n as f64).sqrt();
        g[(n, n - 1)] = alpha * s;
        g[(n - 1, n)] = -alpha.conj() * s;
    }
    let full = g.exp();
    let boxed = full.view((0, 0), (cutoff + 1, cutoff + 1)).into_owned();
    let kept: f64 = (0..=cutoff).map(|n| boxed[(n, 0)].norm_sqr()).sum();
    (boxed, (1.0 - kept).max(0.0))
}

/// Matrix elements `⟨m|D(α)|n⟩` for `m, n ≤ cutoff`, computed in a padded
/// basis. The defect is the coherent-state probability beyond `cutoff`.
pub fn displacement(alpha: C64, cutoff: usize) -> Result<Truncated<CMatrix>> {
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return invalid("displacement amplitude must be finite");
    }
    let (d, defect) = displacement_box(alpha, cutoff);
    check_defect("displacement tail", defect)?;
    Ok(Truncated { value: d, defect })
}

/// `D(α) ρ D(α)†` on one mode.
pub fn displace(rho: &DensityMatrix, alpha: C64, mode: usize) -> Result<Truncated<DensityMatrix>> {
    if mode >= rho.dims().len() {
        return invalid(format!("mode {mode} out of range"));
    }
    let d = displacement(alpha, rho.dims()[mode] - 1)?.value;
    let out = apply_local(rho, &[mode], &d)?;
    leak_checked("displacement leakage", rho.trace(), out)
}

/// Sends the signal half of a TMSV through a beam splitter of transmissivity
/// `eta` whose other port carries the diagonal single-mode state `noise`, and
/// traces out the noise port.
///
/// Returns the (return, idler) state with the return mode truncated at
/// `return_cutoff`. This is the same map as [`beam_splitter`] followed by
/// [`DensityMatrix::partial_trace`] on the three-mode state, computed from
/// the Schmidt form without building the three-mode matrix.
pub fn attenuate_tmsv_signal(
    tmsv: &FockTMSV,
    eta: f64,
    noise: &DensityMatrix,
    return_cutoff: usize,
) -> Result<Truncated<DensityMatrix>> {
    check_eta(eta)?;
    if noise.dims().len() != 1 {
        return invalid("noise must be a single-mode state");
    }
    let nm = noise.matrix();
    for i in 0..nm.nrows() {
        for j in 0..nm.ncols() {
            if i != j && nm[(i, j)] != ZERO {
                return invalid("noise state must be diagonal in the Fock basis");
            }
        }
    }
    let probs: Vec<f64> = nm.diagonal().iter().map(|z| z.re).collect();
    let norm = tmsv.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let coeffs: Vec<C64> = tmsv.coeffs.iter().map(|z| z / norm).collect();

    let di = tmsv.cutoff + 1;
    let dr = return_cutoff + 1;
    let k_max = probs.len() - 1;
    let blocks: Vec<DMatrix<f64>> = (0..=tmsv.cutoff + k_max)
        .map(|t| beam_splitter_block(t, eta))
        .collect();

    let mut out = CMatrix::zeros(dr * di, dr * di);
    let mut support: Vec<(usize, C64)> = Vec::with_capacity(di);
    for (k, &pk) in probs.iter().enumerate() {
        if pk == 0.0 {
            continue;
        }
        // j: photons left in the traced noise port
        for j in 0..=(tmsv.cutoff + k) {
            support.clear();
            for (n, &cn) in coeffs.iter().enumerate() {
                let total = n + k;
                if j > total || total - j > return_cutoff {
                    continue;
                }
                let r = total - j;
                let amp = cn * blocks[total][(r, n)];
                if amp != ZERO {
                    support.push((r * di + n, amp));
                }
            }
            for &(x, ax) in &support {
                for &(y, ay) in &support {
                    out[(x, y)] += ax * ay.conj() * pk;
                }
            }
        }
    }
    let state = DensityMatrix::from_parts(vec![dr, di], out);
    leak_checked("return-mode leakage", 1.0, state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{expectation, thermal_density, tmsv_fock, ModeOps};
    use crate::gaussian::SqueezeParam;
    use crate::linalg::CVector;
    use crate::Error;
    use approx::assert_abs_diff_eq;

    #[test]
    fn blocks_are_orthogonal() {
        for t in [0, 1, 5, 40] {
            for eta in [0.0, 0.1, 0.5, 1.0] {
                let b = beam_splitter_block(t, eta);
                let defect = (&b * b.transpose() - DMatrix::identity(t + 1, t + 1)).amax();
                assert!(defect < 1e-10, "T={t} eta={eta}: {defect:e}");
            }
        }
    }

    #[test]
    fn single_photon_amplitudes() {
        // |1,0⟩ → √η |1,0⟩ + √(1−η) |0,1⟩ up to the sign of the second port
        let eta: f64 = 0.3;
        let b = beam_splitter_block(1, eta);
        assert_abs_diff_eq!(b[(1, 1)], eta.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(b[(0, 1)].abs(), (1.0 - eta).sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn unit_transmissivity_is_identity() {
        let a = thermal_density(0.4, 5).unwrap().value;
        let b = thermal_density(2.0, 5).unwrap().value;
        let ab = a.tensor(&b);
        let out = beam_splitter(&ab, 1.0, (0, 1)).unwrap();
        assert!((out.value.matrix() - ab.matrix()).camax() < 1e-12);
    }

    #[test]
    fn zero_transmissivity_swaps() {
        let a = thermal_density(0.2, 12).unwrap().value;
        let b = thermal_density(0.05, 12).unwrap().value;
        let out = beam_splitter(&a.tensor(&b), 0.0, (0, 1)).unwrap();
        assert!(out.defect < 1e-6);
        let swapped = b.tensor(&a);
        assert!(out.value.trace_distance(&swapped).unwrap() < 1e-6);
    }

    #[test]
    fn rejects_bad_arguments() {
        let ab = thermal_density(0.1, 3)
            .unwrap()
            .value
            .tensor(&thermal_density(0.1, 3).unwrap().value);
        assert!(beam_splitter(&ab, 1.5, (0, 1)).is_err());
        assert!(beam_splitter(&ab, 0.5, (0, 0)).is_err());
        assert!(beam_splitter(&ab, 0.5, (0, 2)).is_err());
    }

    #[test]
    fn small_cutoff_leak_is_a_truncation_error() {
        let ab = thermal_density(3.0, 6)
            .unwrap()
            .value
            .tensor(&thermal_density(3.0, 6).unwrap().value);
        assert!(matches!(
            beam_splitter(&ab, 0.5, (0, 1)),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn returned_mean_photon_under_h1_convention() {
        // reduced TMSV signal (thermal 0.1) mixed with noise N_B/(1−η)
        let (eta, n_s, n_b) = (0.1, 0.1, 1.0);
        let cut = 32;
        let sig = thermal_density(n_s, cut).unwrap().value;
        let noise = thermal_density(n_b / (1.0 - eta), cut).unwrap().value;
        let out = beam_splitter(&sig.tensor(&noise), eta, (0, 1)).unwrap();
        let ret = out.value.mean_photon(0).unwrap();
        assert_abs_diff_eq!(ret, eta * n_s + n_b, epsilon = 2e-3);
        assert_abs_diff_eq!(out.value.trace(), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn displacement_cases() {
        let id = displacement(C64::new(0.0, 0.0), 6).unwrap();
        assert!((id.value - CMatrix::identity(7, 7)).camax() < 1e-14);

        let alpha = C64::new(0.3, 0.0);
        let d = displacement(alpha, 30).unwrap().value;
        let mut coeff = (-alpha.norm_sqr() / 2.0).exp();
        for n in 0..=30 {
            if n > 0 {
                coeff *= alpha.re / (n as f64).sqrt();
            }
            assert!((d[(n, 0)] - c(coeff)).norm() < 1e-8, "n={n}");
        }
        let ops = ModeOps::new(30);
        let col = CVector::from_fn(31, |n, _| d[(n, 0)]);
        let n_mean = crate::fock::expectation_pure(&ops.num, &col).unwrap().re;
        assert_abs_diff_eq!(n_mean, 0.09, epsilon = 1e-8);

        assert!(matches!(
            displacement(C64::new(4.0, 0.0), 5),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn displaced_thermal_mean() {
        let th = thermal_density(1.0, 50).unwrap().value;
        let alpha = C64::new(0.05f64.sqrt(), 0.0);
        let out = displace(&th, alpha, 0).unwrap();
        let ops = ModeOps::new(50);
        let n = expectation(&ops.num, &out.value).unwrap().re;
        assert_abs_diff_eq!(n, 1.05, epsilon = 1e-6);
        assert_abs_diff_eq!(out.value.trace(), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn attenuation_matches_three_mode_route() {
        // dense route: TMSV ⊗ noise, beam splitter on (signal, noise), trace noise
        let sp = SqueezeParam::from_mean_photons(0.1).unwrap();
        let (eta, nbar) = (0.3, 0.2);
        let (ci, cr) = (6, 12);
        let f = tmsv_fock(sp, ci);
        let noise = thermal_density(nbar, cr).unwrap().value;
        let fast = attenuate_tmsv_signal(&f, eta, &noise, cr).unwrap();

        // signal padded to the return cutoff so both beam-splitter ports match
        let mut amps = CMatrix::zeros(cr + 1, ci + 1);
        for n in 0..=ci {
            amps[(n, n)] = f.coeffs[n];
        }
        let pure = crate::fock::TwoModePure { amps }.normalized().to_density();
        let three = pure.tensor(&noise);
        let mixed = beam_splitter(&three, eta, (0, 2)).unwrap_or_else(|e| panic!("{e}"));
        let slow = mixed.value.partial_trace(&[0, 1]).unwrap();
        assert_eq!(slow.dims(), fast.value.dims());
        assert!((slow.matrix() - fast.value.matrix()).camax() < 1e-8);
    }
}
