use std::f64::consts::FRAC_PI_2;

use clap::Args;
use qillum_core::gaussian::{Axis, GridSpec, Quadrature};
use qillum_core::{SqueezeParam, TwoModeGaussianState};
use serde::Deserialize;

use super::{check_limit, Defaults};
use crate::config::Layered;
use crate::output::{Cell, Report};
use crate::CliError;

/// Two-dimensional slice of the TMSV Wigner function.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WignerArgs {
    /// Named configuration: vacuum, low-qs-pi, low-ps-qi, mid-qs-pi, mid-ps-qi
    #[arg(long)]
    pub preset: Option<String>,
    /// Squeezing magnitude κ ≥ 0 [default: 0.5]
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Squeezing phase φ in radians [default: π/2]
    #[arg(long)]
    pub phase: Option<f64>,
    /// Varied quadratures, e.g. "q_s,p_i" [default: q_s,p_i]
    #[arg(long)]
    pub plane: Option<String>,
    /// Values of the two remaining quadratures, ascending order [default: 0,0]
    #[arg(long, value_delimiter = ',', num_args = 2)]
    pub fixed: Option<Vec<f64>>,
    /// Half-width of both axes [default: 6]
    #[arg(long)]
    pub range: Option<f64>,
    /// Samples per axis [default: 121]
    #[arg(long)]
    pub samples: Option<usize>,
}

crate::layered!(WignerArgs {
    preset,
    kappa,
    phase,
    plane,
    fixed,
    range,
    samples
});

impl Defaults for WignerArgs {
    fn defaults() -> Self {
        Self {
            preset: None,
            kappa: Some(0.5),
            phase: Some(FRAC_PI_2),
            plane: Some("q_s,p_i".into()),
            fixed: Some(vec![0.0, 0.0]),
            range: Some(6.0),
            samples: Some(121),
        }
    }
}

pub const PRESETS: [&str; 5] = ["vacuum", "low-qs-pi", "low-ps-qi", "mid-qs-pi", "mid-ps-qi"];

fn preset(name: &str) -> Result<WignerArgs, CliError> {
    let make = |kappa: f64, plane: &str, range: f64, samples: usize| WignerArgs {
        preset: Some(name.to_string()),
        kappa: Some(kappa),
        plane: Some(plane.into()),
        range: Some(range),
        samples: Some(samples),
        ..Default::default()
    };
    Ok(match name {
        "vacuum" => make(0.0, "q_s,p_s", 4.0, 81),
        "low-qs-pi" => make(0.5, "q_s,p_i", 6.0, 121),
        "low-ps-qi" => make(0.5, "p_s,q_i", 6.0, 121),
        "mid-qs-pi" => make(1.5, "q_s,p_i", 16.0, 161),
        "mid-ps-qi" => make(1.5, "p_s,q_i", 16.0, 161),
        other => {
            return Err(CliError::Usage(format!(
                "unknown wigner preset '{other}' (expected one of {})",
                PRESETS.join(", ")
            )))
        }
    })
}

fn parse_plane(s: &str) -> Result<(Quadrature, Quadrature), CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!(
            "plane must name two quadratures like \"q_s,p_i\", got \"{s}\""
        )));
    }
    Ok((parts[0].parse()?, parts[1].parse()?))
}

pub fn run(args: WignerArgs) -> Result<Report, CliError> {
    let args = match &args.preset {
        Some(name) => {
            let p = preset(name)?;
            args.over(p)
        }
        None => args,
    }
    .resolved();
    let kappa = args.kappa.unwrap();
    let phase = args.phase.unwrap();
    let plane_text = args.plane.unwrap();
    let fixed = args.fixed.unwrap();
    let range = args.range.unwrap();
    let samples = args.samples.unwrap();
    check_limit("samples", samples, 4001)?;
    if fixed.len() != 2 {
        return Err(CliError::Usage(format!(
            "fixed needs exactly two values, got {}",
            fixed.len()
        )));
    }
    if !(range > 0.0) || !range.is_finite() {
        return Err(CliError::Usage(format!(
            "range must be finite and > 0, got {range}"
        )));
    }
    let plane = parse_plane(&plane_text)?;
    let sp = SqueezeParam::new(kappa, phase)?;
    let state = TwoModeGaussianState::tmsv(sp);
    let spec = GridSpec {
        plane,
        fixed_values: [fixed[0], fixed[1]],
        x_axis: Axis::symmetric(range, samples),
        y_axis: Axis::symmetric(range, samples),
    };
    let grid = state.wigner_grid(&spec)?;
    let slice_mass = state.slice_mass(plane, spec.fixed_values)?;
    let cov = state.slice_covariance(plane)?;
    let eig = cov.symmetric_eigen();
    let (v_min, v_max) = (eig.eigenvalues.min(), eig.eigenvalues.max());
    let fixed_axes = spec.fixed_axes();

    let mut r = Report::new("wigner", &[plane.0.name(), plane.1.name(), "w"]);
    r.param("preset", args.preset.clone());
    r.param("kappa", sp.kappa());
    r.param("phase", sp.phase());
    r.param("plane", format!("{},{}", plane.0.name(), plane.1.name()));
    r.param("fixed", &spec.fixed_values[..]);
    r.param("range", range);
    r.param("samples", samples);
    r.param(
        "fixed_quadratures",
        format!("{},{}", fixed_axes[0].name(), fixed_axes[1].name()),
    );
    let xs = spec.x_axis.points();
    let ys = spec.y_axis.points();
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            r.push(vec![Cell::Num(x), Cell::Num(y), Cell::Num(grid.get(i, j))]);
        }
    }
    let grid_mass = grid.values.iter().sum::<f64>() * grid.cell_area();
    r.footer("peak", grid.peak());
    r.footer("min", grid.min());
    r.footer("cell_area", grid.cell_area());
    r.footer("grid_mass", grid_mass);
    r.footer("slice_mass", slice_mass);
    r.footer("squeezed_variance", v_min);
    r.footer("antisqueezed_variance", v_max);
    Ok(r)
}
