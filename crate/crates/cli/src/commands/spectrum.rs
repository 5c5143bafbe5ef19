use clap::Args;
use qillum_core::spectrum::{
    spectrum_sweep, Mixing, ProfileShape, SpectrumProfile, DEFAULT_PUMP_HZ, DEFAULT_WIDTH_HZ,
};
use serde::Deserialize;

use super::{check_limit, Defaults};
use crate::config::Layered;
use crate::output::{Cell, Report};
use crate::CliError;

/// Squeezing-parameter profile and squeezing/gain spectrum over the signal
/// frequency.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumArgs {
    /// Named configuration: low (κ_max 0.5), mid (1.5), high (3)
    #[arg(long)]
    pub preset: Option<String>,
    /// Squeezing parameter at the band center [default: 1.5]
    #[arg(long)]
    pub kappa_max: Option<f64>,
    /// Pump frequency in Hz [default: 12e9]
    #[arg(long)]
    pub pump: Option<f64>,
    /// Mixing process: 3wm or 4wm [default: 3wm]
    #[arg(long)]
    pub mixing: Option<String>,
    /// Band center in Hz [default: degenerate point of the mixing process]
    #[arg(long)]
    pub center: Option<f64>,
    /// Band width in Hz [default: 8e9]
    #[arg(long)]
    pub width: Option<f64>,
    /// Profile shape: parabola, raised-cosine or rectangular [default: parabola]
    #[arg(long)]
    pub shape: Option<String>,
    /// Lowest signal frequency in Hz [default: lower band edge]
    #[arg(long)]
    pub nu_min: Option<f64>,
    /// Highest signal frequency in Hz [default: upper band edge]
    #[arg(long)]
    pub nu_max: Option<f64>,
    /// Number of frequency samples [default: 161]
    #[arg(long)]
    pub steps: Option<usize>,
}

crate::layered!(SpectrumArgs {
    preset,
    kappa_max,
    pump,
    mixing,
    center,
    width,
    shape,
    nu_min,
    nu_max,
    steps
});

impl Defaults for SpectrumArgs {
    fn defaults() -> Self {
        Self {
            kappa_max: Some(1.5),
            pump: Some(DEFAULT_PUMP_HZ),
            mixing: Some("3wm".into()),
            width: Some(DEFAULT_WIDTH_HZ),
            shape: Some("parabola".into()),
            steps: Some(161),
            ..Default::default()
        }
    }
}

pub const PRESETS: [&str; 3] = ["low", "mid", "high"];

fn preset(name: &str) -> Result<SpectrumArgs, CliError> {
    let kappa = match name {
        "low" => 0.5,
        "mid" => 1.5,
        "high" => 3.0,
        other => {
            return Err(CliError::Usage(format!(
                "unknown spectrum preset '{other}' (expected one of {})",
                PRESETS.join(", ")
            )))
        }
    };
    Ok(SpectrumArgs {
        preset: Some(name.into()),
        kappa_max: Some(kappa),
        ..Default::default()
    })
}

pub fn run(args: SpectrumArgs) -> Result<Report, CliError> {
    let args = match &args.preset {
        Some(name) => {
            let p = preset(name)?;
            args.over(p)
        }
        None => args,
    }
    .resolved();
    let mixing: Mixing = args.mixing.as_deref().unwrap().parse()?;
    let shape: ProfileShape = args.shape.as_deref().unwrap().parse()?;
    let pump = args.pump.unwrap();
    let center = args.center.unwrap_or_else(|| mixing.default_center(pump));
    let profile = SpectrumProfile::new(
        args.kappa_max.unwrap(),
        pump,
        mixing,
        center,
        args.width.unwrap(),
        shape,
    )?;
    let (lo, hi) = profile.band();
    let nu_min = args.nu_min.unwrap_or(lo);
    let nu_max = args.nu_max.unwrap_or(hi);
    let steps = args.steps.unwrap();
    check_limit("steps", steps, 1_000_000)?;
    let table = spectrum_sweep(&profile, (nu_min, nu_max), steps)?;

    let mut r = Report::new(
        "spectrum",
        &["nu_s", "nu_i", "kappa", "squeezing_db", "gain_db"],
    );
    r.param("preset", args.preset.clone());
    r.param("kappa_max", profile.kappa_max);
    r.param("pump", profile.pump_freq);
    r.param("mixing", profile.mixing.to_string());
    r.param("center", profile.band_center);
    r.param("width", profile.band_width);
    r.param("shape", profile.shape.to_string());
    r.param("nu_min", nu_min);
    r.param("nu_max", nu_max);
    r.param("steps", steps);
    for row in &table.rows {
        r.push(vec![
            Cell::Num(row.nu_s),
            Cell::Num(row.nu_i),
            Cell::Num(row.kappa),
            Cell::Num(row.squeezing_db),
            Cell::Num(row.gain_db),
        ]);
    }
    if let Some(d) = table.deepest() {
        r.footer("min_squeezing_db", d.squeezing_db);
        r.footer("nu_s_at_min", d.nu_s);
        r.footer("max_gain_db", d.gain_db);
    }
    Ok(r)
}
