use clap::Args;
use qillum_core::illumination::{
    build_classical_hypotheses, build_qi_hypotheses, chernoff_exponent, classical_cutoff,
    classical_error_rate, quantum_error_rate, ChernoffResult, DetectionScenario, QiCutoffs,
    Transmitter,
};
use qillum_core::SqueezeParam;
use serde::Deserialize;

use super::Defaults;
use crate::output::{Cell, Report};
use crate::CliError;

/// Largest joint Hilbert-space dimension accepted for one hypothesis pair.
pub const MAX_DIMENSION: usize = 4000;

/// Single-copy quantum Chernoff exponents of the TMSV and coherent
/// transmitters.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QcbArgs {
    /// Transmitter: qi, classical or both [default: both]
    #[arg(long)]
    pub transmitter: Option<String>,
    /// Signal photons per mode [default: 0.1]
    #[arg(long)]
    pub n_s: Option<f64>,
    /// Target reflectance η in [0, 1) [default: 0.1]
    #[arg(long)]
    pub eta: Option<f64>,
    /// Background photons per mode, comma separated list [default: 1]
    #[arg(long, value_delimiter = ',')]
    pub n_b: Option<Vec<f64>>,
    /// Return-mode cutoff [default: chosen from the thermal tail]
    #[arg(long)]
    pub return_cutoff: Option<usize>,
    /// Idler cutoff [default: chosen from the thermal tail]
    #[arg(long)]
    pub idler_cutoff: Option<usize>,
    /// Factor applied to all cutoffs [default: 1]
    #[arg(long)]
    pub cutoff_scale: Option<f64>,
    /// Repeat each run with cutoffs ×1.5 and report the relative change
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub convergence: Option<bool>,
}

crate::layered!(QcbArgs {
    transmitter,
    n_s,
    eta,
    n_b,
    return_cutoff,
    idler_cutoff,
    cutoff_scale,
    convergence
});

impl Defaults for QcbArgs {
    fn defaults() -> Self {
        Self {
            transmitter: Some("both".into()),
            n_s: Some(0.1),
            eta: Some(0.1),
            n_b: Some(vec![1.0]),
            cutoff_scale: Some(1.0),
            convergence: Some(false),
            ..Default::default()
        }
    }
}

const COLUMNS: [&str; 19] = [
    "transmitter",
    "n_s",
    "eta",
    "n_b",
    "s_star",
    "q_min",
    "exponent",
    "reference_rate",
    "closed_form",
    "ratio",
    "return_cutoff",
    "idler_cutoff",
    "noise_cutoff",
    "max_defect",
    "clipped_mass",
    "blocks",
    "dimension",
    "evaluations",
    "cutoff_sensitivity",
];

struct Setup {
    n_s: f64,
    eta: f64,
    return_cutoff: Option<usize>,
    idler_cutoff: Option<usize>,
}

fn check_dimension(dim: usize) -> Result<(), CliError> {
    if dim > MAX_DIMENSION {
        return Err(CliError::Usage(format!(
            "hypothesis dimension {dim} exceeds {MAX_DIMENSION}; lower n_b or the cutoffs"
        )));
    }
    Ok(())
}

type Runner = fn(&Setup, f64, f64) -> Result<ChernoffResult, CliError>;

fn run_qi(s: &Setup, n_b: f64, scale: f64) -> Result<ChernoffResult, CliError> {
    let sp = SqueezeParam::from_mean_photons(s.n_s)?;
    let auto = QiCutoffs::auto(sp, s.eta, n_b);
    let cut = QiCutoffs {
        return_mode: s.return_cutoff.unwrap_or(auto.return_mode),
        idler: s.idler_cutoff.unwrap_or(auto.idler),
    }
    .scaled(scale);
    check_dimension((cut.return_mode + 1) * (cut.idler + 1))?;
    let pair = build_qi_hypotheses(sp, s.eta, n_b, cut)?;
    Ok(chernoff_exponent(&pair)?)
}

fn run_classical(s: &Setup, n_b: f64, scale: f64) -> Result<ChernoffResult, CliError> {
    let base = s
        .return_cutoff
        .unwrap_or_else(|| classical_cutoff(s.n_s, s.eta, n_b));
    let cutoff = ((base as f64) * scale).ceil() as usize;
    check_dimension(cutoff + 1)?;
    let pair = build_classical_hypotheses(s.n_s, s.eta, n_b, cutoff)?;
    Ok(chernoff_exponent(&pair)?)
}

fn cutoff_of(res: &ChernoffResult, name: &str) -> Cell {
    res.label
        .cutoffs
        .iter()
        .find(|c| c.0 == name)
        .map_or(Cell::Empty, |c| Cell::from(c.1))
}

pub fn run(args: QcbArgs) -> Result<Report, CliError> {
    let args = args.resolved();
    let which = args.transmitter.clone().unwrap();
    let (qi, classical) = match which.as_str() {
        "qi" => (true, false),
        "classical" => (false, true),
        "both" => (true, true),
        other => {
            return Err(CliError::Usage(format!(
                "unknown transmitter '{other}' (expected qi, classical or both)"
            )))
        }
    };
    let setup = Setup {
        n_s: args.n_s.unwrap(),
        eta: args.eta.unwrap(),
        return_cutoff: args.return_cutoff,
        idler_cutoff: args.idler_cutoff,
    };
    let n_bs = args.n_b.clone().unwrap();
    if n_bs.is_empty() {
        return Err(CliError::Usage("n_b list is empty".into()));
    }
    let scale = args.cutoff_scale.unwrap();
    if !(scale.is_finite() && scale > 0.0) {
        return Err(CliError::Usage(format!(
            "cutoff_scale must be > 0, got {scale}"
        )));
    }
    let convergence = args.convergence.unwrap();

    let mut r = Report::new("qcb", &COLUMNS);
    r.param("transmitter", which.as_str());
    r.param("n_s", setup.n_s);
    r.param("eta", setup.eta);
    r.param("n_b", &n_bs[..]);
    r.param("return_cutoff", setup.return_cutoff);
    r.param("idler_cutoff", setup.idler_cutoff);
    r.param("cutoff_scale", scale);
    r.param("convergence", convergence);

    let mut ratios = Vec::new();
    for &n_b in &n_bs {
        let mut results: Vec<(ChernoffResult, Option<f64>)> = Vec::new();
        let runs: [(bool, Runner); 2] = [(qi, run_qi), (classical, run_classical)];
        for (enabled, f) in runs {
            if !enabled {
                continue;
            }
            let res = f(&setup, n_b, scale)?;
            let sensitivity = if convergence {
                let fine = f(&setup, n_b, 1.5 * scale)?;
                Some((fine.exponent - res.exponent).abs() / res.exponent)
            } else {
                None
            };
            results.push((res, sensitivity));
        }
        let classical_exp = results
            .iter()
            .find(|(res, _)| res.label.transmitter == Transmitter::Classical)
            .map(|(res, _)| res.exponent);
        for (res, sensitivity) in &results {
            let scn = DetectionScenario::new(setup.eta, setup.n_s, n_b, 0.0, 0.0)?;
            let is_qi = res.label.transmitter == Transmitter::Quantum;
            let reference = if n_b > 0.0 {
                Some(if is_qi {
                    quantum_error_rate(&scn)?
                } else {
                    classical_error_rate(&scn)?
                })
            } else {
                None
            };
            let closed_form =
                (!is_qi).then(|| setup.eta * setup.n_s * ((n_b + 1.0).sqrt() - n_b.sqrt()).powi(2));
            let ratio = match (is_qi, classical_exp) {
                (true, Some(c)) => Some(res.exponent / c),
                _ => None,
            };
            if let Some(x) = ratio {
                ratios.push(x);
            }
            let d = &res.diagnostics;
            r.push(vec![
                Cell::from(res.label.transmitter.to_string()),
                Cell::Num(setup.n_s),
                Cell::Num(setup.eta),
                Cell::Num(n_b),
                Cell::Num(res.s_star),
                Cell::Num(res.q_min),
                Cell::Num(res.exponent),
                reference.into(),
                closed_form.into(),
                ratio.into(),
                cutoff_of(res, "return"),
                cutoff_of(res, "idler"),
                cutoff_of(res, "noise"),
                Cell::Num(res.label.max_defect()),
                Cell::Num(d.clipped_mass[0] + d.clipped_mass[1]),
                Cell::from(d.blocks),
                Cell::from(d.dimension),
                Cell::from(d.evaluations),
                (*sensitivity).into(),
            ]);
        }
    }
    if ratios.len() > 1 {
        let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
        r.footer("ratio_strictly_increasing", increasing);
    }
    Ok(r)
}
