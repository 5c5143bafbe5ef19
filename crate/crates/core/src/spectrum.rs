//! Frequency profiles of the squeezing parameter and the κ → squeezing and
//! gain mappings.

use std::f64::consts::{LN_10, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// Default pump frequency in Hz.
pub const DEFAULT_PUMP_HZ: f64 = 12e9;
/// Default band width in Hz.
pub const DEFAULT_WIDTH_HZ: f64 = 8e9;

/// Parametric process converting pump photons into signal–idler pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mixing {
    /// Three-wave mixing, `ν_s + ν_i = ν_p`.
    ThreeWave,
    /// Four-wave mixing, `ν_s + ν_i = 2ν_p`.
    FourWave,
}

impl Mixing {
    /// Sum `ν_s + ν_i` fixed by energy conservation.
    pub fn pair_sum(self, pump: f64) -> f64 {
        match self {
            Mixing::ThreeWave => pump,
            Mixing::FourWave => 2.0 * pump,
        }
    }

    /// Band center placing the degenerate point in the middle of the band.
    pub fn default_center(self, pump: f64) -> f64 {
        0.5 * self.pair_sum(pump)
    }
}

impl fmt::Display for Mixing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mixing::ThreeWave => "3wm",
            Mixing::FourWave => "4wm",
        })
    }
}

impl FromStr for Mixing {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "3wm" | "three-wave" => Ok(Mixing::ThreeWave),
            "4wm" | "four-wave" => Ok(Mixing::FourWave),
            _ => invalid(format!("unknown mixing type '{s}' (expected 3wm or 4wm)")),
        }
    }
}

/// Shape of `κ(ν)` inside the band, in terms of `x = (ν − center)/(width/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileShape {
    /// `1 − x²`.
    Parabola,
    /// `cos²(πx/2)`.
    RaisedCosine,
    /// `1` for `|x| < 1`, `0` at and beyond the edges.
    Rectangular,
}

impl fmt::Display for ProfileShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProfileShape::Parabola => "parabola",
            ProfileShape::RaisedCosine => "raised-cosine",
            ProfileShape::Rectangular => "rectangular",
        })
    }
}

impl FromStr for ProfileShape {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "parabola" => Ok(ProfileShape::Parabola),
            "raised-cosine" | "cosine" => Ok(ProfileShape::RaisedCosine),
            "rectangular" | "flat" => Ok(ProfileShape::Rectangular),
            _ => invalid(format!(
                "unknown profile shape '{s}' (expected parabola, raised-cosine or rectangular)"
            )),
        }
    }
}

/// Squeezing-parameter profile over the signal frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumProfile {
    pub kappa_max: f64,
    pub pump_freq: f64,
    pub mixing: Mixing,
    pub band_center: f64,
    pub band_width: f64,
    pub shape: ProfileShape,
}

impl SpectrumProfile {
    pub fn new(
        kappa_max: f64,
        pump_freq: f64,
        mixing: Mixing,
        band_center: f64,
        band_width: f64,
        shape: ProfileShape,
    ) -> Result<Self> {
        if !kappa_max.is_finite() || kappa_max < 0.0 {
            return invalid(format!(
                "kappa_max must be finite and >= 0, got {kappa_max}"
            ));
        }
        if !pump_freq.is_finite() || pump_freq <= 0.0 {
            return invalid(format!("pump frequency must be > 0, got {pump_freq}"));
        }
        if !band_center.is_finite() {
            return invalid("band center must be finite");
        }
        if !band_width.is_finite() || band_width <= 0.0 {
            return invalid(format!("band width must be > 0, got {band_width}"));
        }
        Ok(Self {
            kappa_max,
            pump_freq,
            mixing,
            band_center,
            band_width,
            shape,
        })
    }

    /// 12 GHz pump, parabolic profile, 8 GHz band centered on the degenerate
    /// point of the chosen mixing process.
    pub fn with_defaults(kappa_max: f64, mixing: Mixing) -> Result<Self> {
        Self::new(
            kappa_max,
            DEFAULT_PUMP_HZ,
            mixing,
            mixing.default_center(DEFAULT_PUMP_HZ),
            DEFAULT_WIDTH_HZ,
            ProfileShape::Parabola,
        )
    }

    pub fn band(&self) -> (f64, f64) {
        let h = 0.5 * self.band_width;
        (self.band_center - h, self.band_center + h)
    }

    pub fn in_band(&self, nu_s: f64) -> bool {
        let (lo, hi) = self.band();
        nu_s >= lo && nu_s <= hi
    }
}

/// `κ(ν_s)`: `kappa_max` times the shape, zero outside the band.
pub fn kappa_profile(nu_s: f64, profile: &SpectrumProfile) -> f64 {
    let x = (nu_s - profile.band_center) / (0.5 * profile.band_width);
    if !(x.abs() < 1.0) {
        return 0.0;
    }
    let f = match profile.shape {
        ProfileShape::Parabola => 1.0 - x * x,
        ProfileShape::RaisedCosine => (0.5 * PI * x).cos().powi(2),
        ProfileShape::Rectangular => 1.0,
    };
    profile.kappa_max * f
}

/// Idler frequency from energy conservation.
pub fn idler_frequency(nu_s: f64, profile: &SpectrumProfile) -> Result<f64> {
    if !profile.in_band(nu_s) {
        let (lo, hi) = profile.band();
        return Err(Error::Domain(format!(
            "signal frequency {nu_s} Hz outside the band [{lo}, {hi}] Hz"
        )));
    }
    conserved_idler(nu_s, profile)
}

fn conserved_idler(nu_s: f64, profile: &SpectrumProfile) -> Result<f64> {
    let nu_i = profile.mixing.pair_sum(profile.pump_freq) - nu_s;
    if !(nu_i > 0.0) {
        return Err(Error::Domain(format!(
            "signal frequency {nu_s} Hz leaves no positive idler frequency"
        )));
    }
    Ok(nu_i)
}

/// Squeezed joint-quadrature variance relative to vacuum, `10·log₁₀ e^{−2κ}`.
pub fn squeezing_magnitude_db(kappa: f64) -> f64 {
    -20.0 * kappa / LN_10
}

/// Anti-squeezed joint-quadrature variance relative to vacuum.
pub fn antisqueezing_db(kappa: f64) -> f64 {
    20.0 * kappa / LN_10
}

/// Phase-preserving amplifier gain `10·log₁₀ cosh²κ`.
pub fn gain_db(kappa: f64) -> f64 {
    20.0 * kappa.cosh().log10()
}

/// One signal-frequency sample of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow {
    pub nu_s: f64,
    pub nu_i: f64,
    pub kappa: f64,
    pub squeezing_db: f64,
    pub gain_db: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumTable {
    /// Row with the most negative squeezing.
    pub fn deepest(&self) -> Option<&SpectrumRow> {
        self.rows
            .iter()
            .min_by(|a, b| a.squeezing_db.total_cmp(&b.squeezing_db))
    }
}

/// Uniform sweep of `steps` signal frequencies over `[lo, hi]`.
///
/// Samples outside the band carry `κ = 0`; a sample whose idler frequency
/// would not be positive is an error.
pub fn spectrum_sweep(
    profile: &SpectrumProfile,
    nu_range: (f64, f64),
    steps: usize,
) -> Result<SpectrumTable> {
    let (lo, hi) = nu_range;
    if steps < 2 {
        return invalid(format!("a sweep needs at least 2 steps, got {steps}"));
    }
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return invalid(format!(
            "frequency range [{lo}, {hi}] must be finite and increasing"
        ));
    }
    let step = (hi - lo) / (steps - 1) as f64;
    let mut rows = Vec::with_capacity(steps);
    for k in 0..steps {
        let nu_s = if k == steps - 1 {
            hi
        } else {
            lo + step * k as f64
        };
        let nu_i = conserved_idler(nu_s, profile)?;
        let kappa = kappa_profile(nu_s, profile);
        rows.push(SpectrumRow {
            nu_s,
            nu_i,
            kappa,
            squeezing_db: squeezing_magnitude_db(kappa),
            gain_db: gain_db(kappa),
        });
    }
    Ok(SpectrumTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn default3(k: f64) -> SpectrumProfile {
        SpectrumProfile::with_defaults(k, Mixing::ThreeWave).unwrap()
    }

    #[test]
    fn profile_values() {
        let p = default3(3.0);
        assert_eq!(kappa_profile(6e9, &p), 3.0);
        assert_eq!(kappa_profile(2e9, &p), 0.0);
        assert_eq!(kappa_profile(10e9, &p), 0.0);
        assert_eq!(kappa_profile(11e9, &p), 0.0);
        assert_abs_diff_eq!(kappa_profile(4e9, &p), 2.25, epsilon = 1e-12);
        for shape in [ProfileShape::RaisedCosine, ProfileShape::Rectangular] {
            let q = SpectrumProfile { shape, ..p };
            assert_eq!(kappa_profile(6e9, &q), 3.0);
            assert_eq!(kappa_profile(10e9, &q), 0.0);
        }
    }

    #[test]
    fn idler_values() {
        let p = default3(1.0);
        assert_eq!(idler_frequency(4e9, &p).unwrap(), 8e9);
        assert_eq!(idler_frequency(6e9, &p).unwrap(), 6e9);
        assert!(matches!(idler_frequency(11e9, &p), Err(Error::Domain(_))));
        let q = SpectrumProfile::with_defaults(1.0, Mixing::FourWave).unwrap();
        assert_eq!(q.band_center, 12e9);
        assert_eq!(idler_frequency(10e9, &q).unwrap(), 14e9);
    }

    #[test]
    fn db_mappings() {
        assert_eq!(squeezing_magnitude_db(0.0), 0.0);
        assert_eq!(gain_db(0.0), 0.0);
        assert_abs_diff_eq!(squeezing_magnitude_db(0.5), -4.343, epsilon = 1e-3);
        assert_abs_diff_eq!(squeezing_magnitude_db(3.0), -26.06, epsilon = 1e-2);
        assert_abs_diff_eq!(gain_db(3.0), 20.06, epsilon = 1e-2);
        assert_abs_diff_eq!(gain_db(1.5), 7.43, epsilon = 1e-2);
        assert_abs_diff_eq!(gain_db(0.5), 1.04, epsilon = 1e-2);
        for k in [0.1, 1.0, 2.5] {
            let direct = 10.0 * (-2.0_f64 * k).exp().log10();
            assert_abs_diff_eq!(squeezing_magnitude_db(k), direct, epsilon = 1e-12);
        }
    }

    #[test]
    fn sweeps() {
        let t = spectrum_sweep(&default3(3.0), (2e9, 10e9), 81).unwrap();
        assert_eq!(t.rows.len(), 81);
        let d = t.deepest().unwrap();
        assert_eq!(d.nu_s, 6e9);
        assert_abs_diff_eq!(d.squeezing_db, -26.06, epsilon = 1e-2);
        for (a, b) in t.rows.iter().zip(t.rows.iter().rev()) {
            assert_abs_diff_eq!(a.squeezing_db, b.squeezing_db, epsilon = 1e-9);
        }
        let z = spectrum_sweep(&default3(0.0), (2e9, 10e9), 5).unwrap();
        assert!(z.rows.iter().all(|r| r.squeezing_db == 0.0));
        assert_eq!(
            spectrum_sweep(&default3(1.0), (1e9, 3e9), 2)
                .unwrap()
                .rows
                .len(),
            2
        );
        assert!(spectrum_sweep(&default3(1.0), (1e9, 3e9), 1).is_err());
        assert!(matches!(
            spectrum_sweep(&default3(1.0), (1e9, 13e9), 3),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn out_of_band_rows_are_flat() {
        let t = spectrum_sweep(&default3(2.0), (0.5e9, 1.5e9), 3).unwrap();
        assert!(t.rows.iter().all(|r| r.kappa == 0.0 && r.gain_db == 0.0));
    }

    #[test]
    fn parse_names() {
        assert_eq!("3WM".parse::<Mixing>().unwrap(), Mixing::ThreeWave);
        assert_eq!(
            "raised-cosine".parse::<ProfileShape>().unwrap(),
            ProfileShape::RaisedCosine
        );
        assert!("5wm".parse::<Mixing>().is_err());
        assert!(SpectrumProfile::new(
            -1.0,
            1.0,
            Mixing::ThreeWave,
            0.0,
            1.0,
            ProfileShape::Parabola
        )
        .is_err());
        assert!(SpectrumProfile::new(
            1.0,
            1.0,
            Mixing::ThreeWave,
            0.0,
            0.0,
            ProfileShape::Parabola
        )
        .is_err());
    }
}
