use std::f64::consts::FRAC_PI_2;

use clap::Args;
use qillum_core::fock::{mean_photon, tmsv_fock};
use qillum_core::SqueezeParam;
use serde::Deserialize;

use super::{check_limit, Defaults};
use crate::output::{Cell, Report};
use crate::CliError;

/// Fock-basis amplitudes of the two-mode squeezed vacuum.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateArgs {
    /// Squeezing magnitude κ ≥ 0 [default: 0.5]
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Squeezing phase φ in radians [default: π/2]
    #[arg(long)]
    pub phase: Option<f64>,
    /// Largest photon number listed [default: 10]
    #[arg(long)]
    pub cutoff: Option<usize>,
}

crate::layered!(StateArgs {
    kappa,
    phase,
    cutoff
});

impl Defaults for StateArgs {
    fn defaults() -> Self {
        Self {
            kappa: Some(0.5),
            phase: Some(FRAC_PI_2),
            cutoff: Some(10),
        }
    }
}

pub fn run(args: StateArgs) -> Result<Report, CliError> {
    let args = args.resolved();
    let (kappa, phase, cutoff) = (
        args.kappa.unwrap(),
        args.phase.unwrap(),
        args.cutoff.unwrap(),
    );
    check_limit("cutoff", cutoff, 100_000)?;
    let sp = SqueezeParam::new(kappa, phase)?;
    let f = tmsv_fock(sp, cutoff);

    let mut r = Report::new("state", &["n", "re", "im", "prob"]);
    r.param("kappa", sp.kappa());
    r.param("phase", sp.phase());
    r.param("cutoff", cutoff);
    for (n, c) in f.coeffs.iter().enumerate() {
        r.push(vec![
            Cell::from(n),
            c.re.into(),
            c.im.into(),
            c.norm_sqr().into(),
        ]);
    }
    r.footer("norm_deficit", f.norm_deficit());
    r.footer("tail_mass", f.tail_mass());
    r.footer("mean_photons", mean_photon(sp));
    Ok(r)
}
