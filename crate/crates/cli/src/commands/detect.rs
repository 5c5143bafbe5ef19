use clap::Args;
use qillum_core::illumination::{
    advantage_db, classical_error_rate, error_probability, pulse_count, quantum_error_rate,
    required_pulses, DetectionScenario,
};
use serde::Deserialize;

use super::{check_limit, Defaults};
use crate::output::{Cell, Report};
use crate::CliError;

/// Error-rate exponents and error-probability envelopes of the coherent and
/// TMSV transmitters.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectArgs {
    /// Target reflectance η in [0, 1] [default: 0.01]
    #[arg(long)]
    pub eta: Option<f64>,
    /// Signal photons per mode [default: 0.01]
    #[arg(long)]
    pub n_s: Option<f64>,
    /// Background photons per mode, > 0 [default: 20]
    #[arg(long)]
    pub n_b: Option<f64>,
    /// Integration time in seconds [default: 1e-3]
    #[arg(long)]
    pub t_int: Option<f64>,
    /// Bandwidth in Hz [default: 1e9]
    #[arg(long)]
    pub bandwidth: Option<f64>,
    /// Pulse count M; replaces t_int × bandwidth when given
    #[arg(long)]
    pub pulses: Option<f64>,
    /// Target error probability; adds the required pulse counts
    #[arg(long)]
    pub target_pe: Option<f64>,
    /// Variable to sweep: eta, n_s, n_b, t_int, bandwidth or pulses
    #[arg(long)]
    pub sweep: Option<String>,
    /// Values taken by the swept variable, comma separated
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
}

crate::layered!(DetectArgs {
    eta,
    n_s,
    n_b,
    t_int,
    bandwidth,
    pulses,
    target_pe,
    sweep,
    values
});

impl Defaults for DetectArgs {
    fn defaults() -> Self {
        Self {
            eta: Some(0.01),
            n_s: Some(0.01),
            n_b: Some(20.0),
            t_int: Some(1e-3),
            bandwidth: Some(1e9),
            ..Default::default()
        }
    }
}

const COLUMNS: [&str; 12] = [
    "eta",
    "n_s",
    "n_b",
    "snr",
    "pulses",
    "rate_classical",
    "rate_quantum",
    "pe_classical",
    "pe_quantum",
    "asymptotic_classical",
    "asymptotic_quantum",
    "advantage_db",
];

#[derive(Debug, Clone, Copy)]
struct Point {
    eta: f64,
    n_s: f64,
    n_b: f64,
    t_int: f64,
    bandwidth: f64,
    pulses: Option<f64>,
}

impl Point {
    fn set(&mut self, var: &str, v: f64) -> Result<(), CliError> {
        match var {
            "eta" => self.eta = v,
            "n_s" => self.n_s = v,
            "n_b" => self.n_b = v,
            "t_int" if self.pulses.is_none() => self.t_int = v,
            "bandwidth" if self.pulses.is_none() => self.bandwidth = v,
            "t_int" | "bandwidth" => {
                return Err(CliError::Usage(format!(
                    "sweeping {var} has no effect while pulses is set"
                )))
            }
            "pulses" => self.pulses = Some(v),
            other => {
                return Err(CliError::Usage(format!(
                    "cannot sweep '{other}' (expected eta, n_s, n_b, t_int, bandwidth or pulses)"
                )))
            }
        }
        Ok(())
    }
}

fn envelope(rate: f64, m: f64) -> Result<(Cell, bool), CliError> {
    if rate * m == 0.0 {
        return Ok((Cell::Empty, false));
    }
    let e = error_probability(rate, m)?;
    Ok((Cell::Num(e.value), e.asymptotic))
}

pub fn run(args: DetectArgs) -> Result<Report, CliError> {
    let args = args.resolved();
    let base = Point {
        eta: args.eta.unwrap(),
        n_s: args.n_s.unwrap(),
        n_b: args.n_b.unwrap(),
        t_int: args.t_int.unwrap(),
        bandwidth: args.bandwidth.unwrap(),
        pulses: args.pulses,
    };
    let points = match (&args.sweep, &args.values) {
        (None, None) => vec![base],
        (Some(var), Some(values)) if !values.is_empty() => {
            check_limit("values", values.len(), 1_000_000)?;
            let mut out = Vec::with_capacity(values.len());
            for &v in values {
                let mut p = base;
                p.set(var, v)?;
                out.push(p);
            }
            out
        }
        _ => {
            return Err(CliError::Usage(
                "sweep and values must be given together".into(),
            ))
        }
    };

    let mut columns: Vec<&str> = COLUMNS.to_vec();
    if args.target_pe.is_some() {
        columns.extend(["pulses_required_classical", "pulses_required_quantum"]);
    }
    let mut r = Report::new("detect", &columns);
    r.param("eta", base.eta);
    r.param("n_s", base.n_s);
    r.param("n_b", base.n_b);
    r.param("t_int", base.t_int);
    r.param("bandwidth", base.bandwidth);
    r.param("pulses", base.pulses);
    r.param("target_pe", args.target_pe);
    r.param("sweep", args.sweep.clone());
    r.param("values", args.values.as_deref());

    for p in points {
        let scn = DetectionScenario::new(p.eta, p.n_s, p.n_b, p.t_int, p.bandwidth)?;
        if let Some(m) = p.pulses {
            if !m.is_finite() || m < 0.0 {
                return Err(CliError::Usage(format!(
                    "pulses must be finite and >= 0, got {m}"
                )));
            }
        }
        let m = p
            .pulses
            .unwrap_or_else(|| pulse_count(scn.t_int, scn.bandwidth));
        let r_cl = classical_error_rate(&scn)?;
        let r_q = quantum_error_rate(&scn)?;
        let (pe_cl, ok_cl) = envelope(r_cl, m)?;
        let (pe_q, ok_q) = envelope(r_q, m)?;
        let mut row = vec![
            Cell::Num(scn.eta),
            Cell::Num(scn.n_s),
            Cell::Num(scn.n_b),
            Cell::Num(scn.n_s / scn.n_b),
            Cell::Num(m),
            Cell::Num(r_cl),
            Cell::Num(r_q),
            pe_cl,
            pe_q,
            Cell::Bool(ok_cl),
            Cell::Bool(ok_q),
            Cell::Num(advantage_db()),
        ];
        if let Some(target) = args.target_pe {
            for rate in [r_cl, r_q] {
                row.push(if rate > 0.0 {
                    Cell::Num(required_pulses(rate, target)?.pulses)
                } else {
                    Cell::Empty
                });
            }
        }
        r.push(row);
    }
    Ok(r)
}
