//! Target-detection mathematics: error-rate envelopes for the coherent and
//! TMSV transmitters, the pulse budget `M = TW`, and a brute-force quantum
//! Chernoff bound over truncated Fock hypothesis states.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::fock::{
    attenuate_tmsv_signal, check_defect, displace, thermal_density, tmsv_fock, DensityMatrix,
};
use crate::gaussian::SqueezeParam;
use crate::linalg::{common_blocks, submatrix, HermitianEigen};

/// Tail probability targeted by the automatic cutoff choice.
pub const AUTO_TAIL_TOL: f64 = 1e-7;
/// Tolerance on negative eigenvalues before a state is rejected.
pub const NEGATIVE_EIGEN_TOL: f64 = 1e-9;
/// Golden-section stopping width in `s`.
pub const S_TOL: f64 = 1e-6;

fn check_range(name: &str, v: f64, lo: f64, hi: f64) -> Result<()> {
    if !v.is_finite() || v < lo || v > hi {
        return invalid(format!("{name} = {v} outside [{lo}, {hi}]"));
    }
    Ok(())
}

/// Physical parameters of one detection run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionScenario {
    /// Round-trip reflectance of the target.
    pub eta: f64,
    /// Signal photons per mode.
    pub n_s: f64,
    /// Background thermal photons per mode.
    pub n_b: f64,
    /// Integration time in seconds.
    pub t_int: f64,
    /// Source bandwidth in Hz.
    pub bandwidth: f64,
}

impl DetectionScenario {
    pub fn new(eta: f64, n_s: f64, n_b: f64, t_int: f64, bandwidth: f64) -> Result<Self> {
        check_range("eta", eta, 0.0, 1.0)?;
        for (name, v) in [
            ("n_s", n_s),
            ("n_b", n_b),
            ("t_int", t_int),
            ("bandwidth", bandwidth),
        ] {
            if !v.is_finite() || v < 0.0 {
                return invalid(format!("{name} must be finite and >= 0, got {v}"));
            }
        }
        Ok(Self {
            eta,
            n_s,
            n_b,
            t_int,
            bandwidth,
        })
    }

    pub fn pulses(&self) -> f64 {
        pulse_count(self.t_int, self.bandwidth)
    }

    fn rate_base(&self) -> Result<f64> {
        if self.n_b <= 0.0 {
            return Err(Error::Domain(
                "error rates need a nonzero background (n_b > 0)".into(),
            ));
        }
        Ok(self.eta * self.n_s / self.n_b)
    }
}

/// Coherent-state error-rate exponent `η N_S / (4 N_B)`.
pub fn classical_error_rate(scn: &DetectionScenario) -> Result<f64> {
    Ok(scn.rate_base()? / 4.0)
}

/// TMSV error-rate exponent `η N_S / N_B`.
pub fn quantum_error_rate(scn: &DetectionScenario) -> Result<f64> {
    scn.rate_base()
}

/// Number of independent pulses `M = T·W`, kept real.
pub fn pulse_count(t_int: f64, bandwidth: f64) -> f64 {
    t_int * bandwidth
}

/// Exponent advantage of the TMSV over the coherent transmitter in dB.
pub fn advantage_db() -> f64 {
    10.0 * 4f64.log10()
}

/// Value of an asymptotic error-probability envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub value: f64,
    /// False when `MR < 1` or `M < 100`, where the envelope is not reliable.
    pub asymptotic: bool,
}

/// Minimum pulse count reaching a target error probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseRequirement {
    pub pulses: f64,
    /// The product `M·R` at the solution.
    pub exponent: f64,
    /// False when the solution has `MR < 1` or `M < 100`.
    pub asymptotic: bool,
}

fn envelope_of(x: f64) -> f64 {
    (-x).exp() / (2.0 * (PI * x).sqrt())
}

fn asymptotic_flag(x: f64, m: f64) -> bool {
    x >= 1.0 && m >= 100.0
}

/// `P_e ≈ exp(−MR) / (2√(πMR))`.
pub fn error_probability(rate: f64, pulses: f64) -> Result<Envelope> {
    if !rate.is_finite() || !pulses.is_finite() || rate < 0.0 || pulses < 0.0 {
        return invalid(format!(
            "rate and pulse count must be finite and >= 0, got R={rate}, M={pulses}"
        ));
    }
    let x = rate * pulses;
    if x == 0.0 {
        return Err(Error::Domain("envelope diverges at MR = 0".into()));
    }
    Ok(Envelope {
        value: envelope_of(x),
        asymptotic: asymptotic_flag(x, pulses),
    })
}

/// Solves `exp(−MR)/(2√(πMR)) = target` for `M`.
pub fn required_pulses(rate: f64, target: f64) -> Result<PulseRequirement> {
    if !rate.is_finite() || rate <= 0.0 {
        return invalid(format!("rate must be finite and > 0, got {rate}"));
    }
    if !(target > 0.0 && target < 0.5) {
        return invalid(format!(
            "target error probability must lie in (0, 0.5), got {target}"
        ));
    }
    // g(x) = ln envelope(x) − ln target, strictly decreasing in x
    let ln_t = target.ln();
    let g = |x: f64| -x - 0.5 * (4.0 * PI * x).ln() - ln_t;
    let mut lo = 1e-300_f64.max(f64::MIN_POSITIVE);
    let mut hi = 1.0;
    while g(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let gx = g(x);
        if gx > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let step = gx / (-1.0 - 0.5 / x);
        let mut next = x - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-15 * x || hi - lo <= 1e-15 * hi {
            x = next;
            break;
        }
        x = next;
    }
    let residual = (envelope_of(x) / target - 1.0).abs();
    if !(residual <= 1e-10) {
        return Err(Error::NonConvergence(format!(
            "pulse root find residual {residual:e}"
        )));
    }
    let pulses = x / rate;
    Ok(PulseRequirement {
        pulses,
        exponent: x,
        asymptotic: asymptotic_flag(x, pulses),
    })
}

/// Transmitter whose hypotheses are being compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transmitter {
    /// TMSV signal with a retained idler.
    Quantum,
    /// Coherent state with the same mean photon number.
    Classical,
    /// States supplied directly by the caller.
    Custom,
}

impl fmt::Display for Transmitter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Transmitter::Quantum => "qi",
            Transmitter::Classical => "classical",
            Transmitter::Custom => "custom",
        })
    }
}

/// Parameters and truncation record of a hypothesis pair.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisLabel {
    pub transmitter: Transmitter,
    pub n_s: f64,
    pub eta: f64,
    pub n_b: f64,
    /// Named cutoffs used while building the states.
    pub cutoffs: Vec<(&'static str, usize)>,
    /// Named truncation defects incurred while building the states.
    pub defects: Vec<(&'static str, f64)>,
}

impl HypothesisLabel {
    fn custom() -> Self {
        Self {
            transmitter: Transmitter::Custom,
            n_s: f64::NAN,
            eta: f64::NAN,
            n_b: f64::NAN,
            cutoffs: Vec::new(),
            defects: Vec::new(),
        }
    }

    pub fn max_defect(&self) -> f64 {
        self.defects.iter().map(|d| d.1).fold(0.0, f64::max)
    }
}

/// Target-absent (`rho0`) and target-present (`rho1`) states.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisPair {
    pub rho0: DensityMatrix,
    pub rho1: DensityMatrix,
    pub label: HypothesisLabel,
}

impl HypothesisPair {
    /// Validated pair with an empty label.
    pub fn new(rho0: DensityMatrix, rho1: DensityMatrix) -> Result<Self> {
        Self::with_label(rho0, rho1, HypothesisLabel::custom())
    }

    pub fn with_label(
        rho0: DensityMatrix,
        rho1: DensityMatrix,
        label: HypothesisLabel,
    ) -> Result<Self> {
        if rho0.dims() != rho1.dims() {
            return invalid(format!(
                "hypothesis dimensions differ: {:?} vs {:?}",
                rho0.dims(),
                rho1.dims()
            ));
        }
        rho0.validate()?;
        rho1.validate()?;
        Ok(Self { rho0, rho1, label })
    }

    /// The same pair with the hypotheses exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            rho0: self.rho1.clone(),
            rho1: self.rho0.clone(),
            label: self.label.clone(),
        }
    }
}

/// Smallest cutoff whose thermal tail `(n̄/(1+n̄))^{N+1}` is below `tol`.
pub fn thermal_cutoff(nbar: f64, tol: f64) -> usize {
    let ratio = nbar / (1.0 + nbar);
    if ratio <= 0.0 {
        return 1;
    }
    let n = (tol.ln() / ratio.ln()).ceil() as usize;
    n.saturating_sub(1).max(1)
}

/// Fock cutoffs of the return and idler modes in the TMSV hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QiCutoffs {
    pub return_mode: usize,
    pub idler: usize,
}

impl QiCutoffs {
    /// Cutoffs whose thermal tails are below [`AUTO_TAIL_TOL`].
    pub fn auto(sp: SqueezeParam, eta: f64, n_b: f64) -> Self {
        let n_s = crate::fock::mean_photon(sp);
        Self {
            return_mode: thermal_cutoff(n_b + eta * n_s, AUTO_TAIL_TOL),
            idler: thermal_cutoff(n_s, AUTO_TAIL_TOL).max(4),
        }
    }

    /// Both cutoffs multiplied by `factor`, rounded up.
    pub fn scaled(&self, factor: f64) -> Self {
        let s = |n: usize| ((n as f64) * factor).ceil() as usize;
        Self {
            return_mode: s(self.return_mode),
            idler: s(self.idler),
        }
    }
}

/// Hypotheses for the TMSV transmitter.
///
/// `H₀`: thermal background of occupancy `n_b` on the return mode, times the
/// reduced idler (thermal with `sinh²κ`). `H₁`: the signal is mixed with a
/// thermal mode of occupancy `n_b/(1−η)` on a beam splitter of
/// transmissivity `η`, so the returned background is `n_b` in both cases.
pub fn build_qi_hypotheses(
    sp: SqueezeParam,
    eta: f64,
    n_b: f64,
    cutoffs: QiCutoffs,
) -> Result<HypothesisPair> {
    check_range("eta", eta, 0.0, 1.0)?;
    if !n_b.is_finite() || n_b < 0.0 {
        return invalid(format!("n_b must be finite and >= 0, got {n_b}"));
    }
    if cutoffs.return_mode == 0 || cutoffs.idler == 0 {
        return invalid("cutoffs must be positive");
    }
    let noise_mean = if n_b == 0.0 {
        0.0
    } else if eta >= 1.0 {
        return Err(Error::Domain(
            "a lossless return (eta = 1) cannot carry background n_b > 0".into(),
        ));
    } else {
        n_b / (1.0 - eta)
    };
    let n_s = crate::fock::mean_photon(sp);

    let bg = thermal_density(n_b, cutoffs.return_mode)?;
    check_defect("background tail", bg.defect)?;
    let idler = thermal_density(n_s, cutoffs.idler)?;
    check_defect("idler tail", idler.defect)?;
    let rho0 = bg.value.tensor(&idler.value);

    let noise_cutoff = thermal_cutoff(noise_mean, 1e-3 * AUTO_TAIL_TOL).max(cutoffs.return_mode);
    let noise = thermal_density(noise_mean, noise_cutoff)?;
    check_defect("noise tail", noise.defect)?;
    let tmsv = tmsv_fock(sp, cutoffs.idler);
    let signal_tail = tmsv.tail_mass();
    check_defect("tmsv tail", signal_tail)?;
    let rho1 = attenuate_tmsv_signal(&tmsv, eta, &noise.value, cutoffs.return_mode)?;

    let label = HypothesisLabel {
        transmitter: Transmitter::Quantum,
        n_s,
        eta,
        n_b,
        cutoffs: vec![
            ("return", cutoffs.return_mode),
            ("idler", cutoffs.idler),
            ("noise", noise_cutoff),
        ],
        defects: vec![
            ("background_tail", bg.defect),
            ("idler_tail", idler.defect),
            ("noise_tail", noise.defect),
            ("tmsv_tail", signal_tail),
            ("return_leakage", rho1.defect),
        ],
    };
    HypothesisPair::with_label(rho0, rho1.value, label)
}

/// Cutoff for the coherent-transmitter hypotheses whose tails are below
/// [`AUTO_TAIL_TOL`].
pub fn classical_cutoff(n_s: f64, eta: f64, n_b: f64) -> usize {
    thermal_cutoff(n_b + eta * n_s, AUTO_TAIL_TOL)
}

/// Hypotheses for the coherent transmitter: `H₀` thermal with `n_b`, `H₁` the
/// same thermal state displaced by `√(η n_s)`.
pub fn build_classical_hypotheses(
    n_s: f64,
    eta: f64,
    n_b: f64,
    cutoff: usize,
) -> Result<HypothesisPair> {
    check_range("eta", eta, 0.0, 1.0)?;
    for (name, v) in [("n_s", n_s), ("n_b", n_b)] {
        if !v.is_finite() || v < 0.0 {
            return invalid(format!("{name} must be finite and >= 0, got {v}"));
        }
    }
    if cutoff == 0 {
        return invalid("cutoff must be positive");
    }
    let bg = thermal_density(n_b, cutoff)?;
    check_defect("background tail", bg.defect)?;
    let alpha = (eta * n_s).sqrt();
    let (rho1, leak) = if alpha == 0.0 {
        (bg.value.clone(), 0.0)
    } else {
        let d = displace(&bg.value, Complex64::new(alpha, 0.0), 0)?;
        (d.value, d.defect)
    };
    let label = HypothesisLabel {
        transmitter: Transmitter::Classical,
        n_s,
        eta,
        n_b,
        cutoffs: vec![("return", cutoff)],
        defects: vec![
            ("background_tail", bg.defect),
            ("displacement_leakage", leak),
        ],
    };
    HypothesisPair::with_label(bg.value, rho1, label)
}

/// Diagnostics of a Chernoff evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ChernoffDiagnostics {
    /// Total magnitude of negative eigenvalues clipped to zero, per hypothesis.
    pub clipped_mass: [f64; 2],
    /// Number of independent blocks in the joint sparsity pattern.
    pub blocks: usize,
    pub largest_block: usize,
    pub dimension: usize,
    /// Evaluations of `Q(s)` during the minimization.
    pub evaluations: usize,
    /// Final bracket width in `s`.
    pub s_bracket: f64,
}

/// Outcome of [`chernoff_exponent`].
#[derive(Debug, Clone, PartialEq)]
pub struct ChernoffResult {
    pub s_star: f64,
    pub q_min: f64,
    /// `−ln q_min`; `+∞` when the hypotheses have orthogonal supports.
    pub exponent: f64,
    pub diagnostics: ChernoffDiagnostics,
    pub label: HypothesisLabel,
}

/// `Q(s) = tr(ρ₀^s ρ₁^{1−s})` in spectral form.
#[derive(Debug, Clone)]
pub struct ChernoffFunction {
    // (ln λ0_i, ln λ1_j, |⟨v0_i|v1_j⟩|²) over strictly positive eigenvalue pairs
    terms: Vec<(f64, f64, f64)>,
    clipped_mass: [f64; 2],
    blocks: usize,
    largest_block: usize,
    dimension: usize,
}

fn clipped_logs(e: &HermitianEigen, which: &str, clipped: &mut f64) -> Result<Vec<Option<f64>>> {
    let mut out = Vec::with_capacity(e.values.len());
    for &v in &e.values {
        if v < -NEGATIVE_EIGEN_TOL {
            return Err(Error::InvalidState(format!(
                "{which} has eigenvalue {v:e} below -{NEGATIVE_EIGEN_TOL:e}"
            )));
        }
        if v <= 0.0 {
            *clipped += -v;
            out.push(None);
        } else {
            out.push(Some(v.ln()));
        }
    }
    Ok(out)
}

impl ChernoffFunction {
    pub fn new(pair: &HypothesisPair) -> Result<Self> {
        let (m0, m1) = (pair.rho0.matrix(), pair.rho1.matrix());
        let groups = common_blocks(&[m0, m1]);
        let mut terms = Vec::new();
        let mut clipped_mass = [0.0; 2];
        let mut largest_block = 0;
        for idx in &groups {
            largest_block = largest_block.max(idx.len());
            let e0 = HermitianEigen::new(&submatrix(m0, idx));
            let e1 = HermitianEigen::new(&submatrix(m1, idx));
            let l0 = clipped_logs(&e0, "rho0", &mut clipped_mass[0])?;
            let l1 = clipped_logs(&e1, "rho1", &mut clipped_mass[1])?;
            let overlap = e0.vectors.adjoint() * &e1.vectors;
            for (i, a) in l0.iter().enumerate() {
                let Some(a) = *a else { continue };
                for (j, b) in l1.iter().enumerate() {
                    let Some(b) = *b else { continue };
                    let w = overlap[(i, j)].norm_sqr();
                    if w > 0.0 {
                        terms.push((a, b, w));
                    }
                }
            }
        }
        Ok(Self {
            terms,
            clipped_mass,
            blocks: groups.len(),
            largest_block,
            dimension: m0.nrows(),
        })
    }

    /// `Q(s)` with the convention `0^s = 0`.
    pub fn eval(&self, s: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(a, b, w)| w * (s * a + (1.0 - s) * b).exp())
            .sum()
    }

    /// Golden-section minimization over `s ∈ [0, 1]` down to [`S_TOL`].
    pub fn minimize(&self) -> Result<(f64, f64, usize, f64)> {
        if self.terms.is_empty() {
            return Ok((0.5, 0.0, 0, 0.0));
        }
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (0.0f64, 1.0f64);
        let mut x1 = b - inv_phi * (b - a);
        let mut x2 = a + inv_phi * (b - a);
        let mut f1 = self.eval(x1);
        let mut f2 = self.eval(x2);
        let mut evals = 2;
        while b - a > S_TOL {
            if !f1.is_finite() || !f2.is_finite() {
                return Err(Error::NonConvergence(format!(
                    "Q(s) is not finite near s = {x1}"
                )));
            }
            if f1 <= f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - inv_phi * (b - a);
                f1 = self.eval(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + inv_phi * (b - a);
                f2 = self.eval(x2);
            }
            evals += 1;
            if evals > 200 {
                return Err(Error::NonConvergence(
                    "golden-section search exceeded 200 evaluations".into(),
                ));
            }
        }
        let s = 0.5 * (a + b);
        let q = self.eval(s).min(f1).min(f2);
        Ok((s, q, evals + 1, b - a))
    }
}

/// Single-copy quantum Chernoff exponent `−ln min_s tr(ρ₀^s ρ₁^{1−s})`.
pub fn chernoff_exponent(pair: &HypothesisPair) -> Result<ChernoffResult> {
    let f = ChernoffFunction::new(pair)?;
    let (s_star, q, evaluations, width) = f.minimize()?;
    let q_min = q.clamp(0.0, 1.0);
    let exponent = if q_min == 0.0 {
        f64::INFINITY
    } else {
        (-q_min.ln()).max(0.0)
    };
    Ok(ChernoffResult {
        s_star,
        q_min,
        exponent,
        diagnostics: ChernoffDiagnostics {
            clipped_mass: f.clipped_mass,
            blocks: f.blocks,
            largest_block: f.largest_block,
            dimension: f.dimension,
            evaluations,
            s_bracket: width,
        },
        label: pair.label.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::ModeOps;
    use crate::linalg::{c, CMatrix};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn scn(eta: f64, n_s: f64, n_b: f64) -> DetectionScenario {
        DetectionScenario::new(eta, n_s, n_b, 1.0, 1.0).unwrap()
    }

    #[test]
    fn rates() {
        assert_eq!(classical_error_rate(&scn(1.0, 1.0, 1.0)).unwrap(), 0.25);
        assert_eq!(quantum_error_rate(&scn(1.0, 1.0, 1.0)).unwrap(), 1.0);
        assert_eq!(classical_error_rate(&scn(0.0, 1.0, 1.0)).unwrap(), 0.0);
        assert_relative_eq!(
            classical_error_rate(&scn(0.01, 0.01, 20.0)).unwrap(),
            0.01 * 0.01 / 80.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            quantum_error_rate(&scn(0.01, 0.01, 20.0)).unwrap(),
            5.0e-6,
            max_relative = 1e-12
        );
        assert!(matches!(
            classical_error_rate(&scn(0.5, 1.0, 0.0)),
            Err(Error::Domain(_))
        ));
        assert!(DetectionScenario::new(1.5, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(DetectionScenario::new(0.5, -1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn advantage() {
        assert_abs_diff_eq!(advantage_db(), 6.0206, epsilon = 1e-4);
        let s = scn(1.0, 1.0, 1.0);
        let r = quantum_error_rate(&s).unwrap() / classical_error_rate(&s).unwrap();
        assert_abs_diff_eq!(advantage_db(), 10.0 * r.log10(), epsilon = 1e-14);
    }

    #[test]
    fn envelope_values() {
        let e1 = error_probability(1.0, 1.0).unwrap();
        assert_abs_diff_eq!(
            e1.value,
            (-1.0f64).exp() / (2.0 * PI.sqrt()),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(e1.value, 0.10378, epsilon = 1e-5);
        assert!(!e1.asymptotic);
        let e10 = error_probability(0.01, 1000.0).unwrap();
        assert_relative_eq!(e10.value, 4.050e-6, max_relative = 1e-3);
        assert!(e10.asymptotic);
        assert!(matches!(error_probability(1.0, 0.0), Err(Error::Domain(_))));
        assert!(error_probability(-1.0, 1.0).is_err());
    }

    #[test]
    fn pulses() {
        assert_eq!(pulse_count(1e-3, 1e9), 1e6);
        assert_eq!(pulse_count(1.0, 0.0), 0.0);
        let r = required_pulses(1e-6, 1e-3).unwrap();
        assert_relative_eq!(r.pulses, 4.85e6, max_relative = 2e-3);
        let back = error_probability(1e-6, r.pulses).unwrap().value;
        assert_relative_eq!(back, 1e-3, max_relative = 1e-9);
        assert!(r.asymptotic);
        let weak = required_pulses(1.0, 0.2).unwrap();
        assert!(weak.exponent < 1.0 && !weak.asymptotic);
        assert!(required_pulses(1.0, 0.5).is_err());
        assert!(required_pulses(0.0, 0.1).is_err());
    }

    #[test]
    fn identical_and_orthogonal_pairs() {
        let th = thermal_density(0.5, 10).unwrap().value;
        let r = chernoff_exponent(&HypothesisPair::new(th.clone(), th).unwrap()).unwrap();
        assert_abs_diff_eq!(r.q_min, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.exponent, 0.0, epsilon = 1e-12);

        let p0 = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let p1 = DensityMatrix::diagonal(&[0.0, 1.0]).unwrap();
        let r = chernoff_exponent(&HypothesisPair::new(p0, p1).unwrap()).unwrap();
        assert_eq!(r.q_min, 0.0);
        assert_eq!(r.exponent, f64::INFINITY);
    }

    #[test]
    fn commuting_pair_matches_classical_formula() {
        // two diagonal states: Q(s) = Σ p^s q^{1−s}
        let p = [0.7, 0.2, 0.1];
        let q = [0.2, 0.3, 0.5];
        let pair = HypothesisPair::new(
            DensityMatrix::diagonal(&p).unwrap(),
            DensityMatrix::diagonal(&q).unwrap(),
        )
        .unwrap();
        let r = chernoff_exponent(&pair).unwrap();
        let brute = (1..10_000)
            .map(|k| {
                let s = k as f64 / 10_000.0;
                (0..3)
                    .map(|i| p[i].powf(s) * q[i].powf(1.0 - s))
                    .sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min);
        assert_abs_diff_eq!(r.q_min, brute, epsilon = 1e-8);
        assert!(r.q_min <= brute);
    }

    #[test]
    fn negative_state_is_rejected() {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.1), c(-0.1)]));
        assert!(DensityMatrix::new(vec![2], m.clone()).is_err());
        let pair = HypothesisPair {
            rho0: DensityMatrix::diagonal(&[0.5, 0.5]).unwrap(),
            rho1: DensityMatrix::from_parts(vec![2], m),
            label: HypothesisLabel::custom(),
        };
        assert!(matches!(
            chernoff_exponent(&pair),
            Err(Error::InvalidState(_))
        ));
    }

    #[test]
    fn qi_limits() {
        let sp = SqueezeParam::from_mean_photons(0.1).unwrap();
        let cut = QiCutoffs::auto(sp, 0.1, 1.0);
        let off = build_qi_hypotheses(sp, 0.0, 1.0, cut).unwrap();
        assert!(off.rho0.trace_distance(&off.rho1).unwrap() < 1e-8);

        let vac = SqueezeParam::with_kappa(0.0).unwrap();
        let pair = build_qi_hypotheses(vac, 0.3, 1.0, QiCutoffs::auto(vac, 0.3, 1.0)).unwrap();
        let r = chernoff_exponent(&pair).unwrap();
        assert_abs_diff_eq!(r.exponent, 0.0, epsilon = 1e-10);

        assert!(matches!(
            build_qi_hypotheses(sp, 1.0, 1.0, cut),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn qi_returned_photons() {
        let sp = SqueezeParam::from_mean_photons(0.1).unwrap();
        let pair = build_qi_hypotheses(sp, 0.1, 1.0, QiCutoffs::auto(sp, 0.1, 1.0)).unwrap();
        let n0 = pair.rho0.mean_photon(0).unwrap();
        let n1 = pair.rho1.mean_photon(0).unwrap();
        assert_abs_diff_eq!(n0, 1.0, epsilon = 2e-3);
        assert_abs_diff_eq!(n1, 1.01, epsilon = 2e-3);
        assert_eq!(pair.label.transmitter, Transmitter::Quantum);
    }

    #[test]
    fn classical_pairs() {
        let same = build_classical_hypotheses(0.0, 0.5, 1.0, 20).unwrap();
        assert_eq!(same.rho0, same.rho1);
        let pair = build_classical_hypotheses(0.1, 0.5, 1.0, 60).unwrap();
        let ops = ModeOps::new(60);
        let n1 = crate::fock::expectation(&ops.num, &pair.rho1).unwrap().re;
        assert_abs_diff_eq!(n1, 0.05 + 1.0, epsilon = 1e-6);
        pair.rho0.validate().unwrap();
        pair.rho1.validate().unwrap();
    }

    #[test]
    fn swap_symmetry() {
        let pair = build_classical_hypotheses(0.2, 0.5, 0.5, 30).unwrap();
        let a = chernoff_exponent(&pair).unwrap();
        let b = chernoff_exponent(&pair.swapped()).unwrap();
        assert_abs_diff_eq!(a.q_min, b.q_min, epsilon = 1e-9);
        assert_abs_diff_eq!(a.s_star, 1.0 - b.s_star, epsilon = 1e-4);
    }

    #[test]
    fn thermal_cutoff_rule() {
        assert_eq!(thermal_cutoff(0.0, 1e-7), 1);
        let n = thermal_cutoff(1.0, 1e-7);
        assert!(0.5f64.powi(n as i32 + 1) <= 1e-7);
        assert!(0.5f64.powi(n as i32) > 1e-7);
    }
}
