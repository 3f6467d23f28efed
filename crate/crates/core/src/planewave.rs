//! Monochromatic plane wave through the crystal and the filtered amplitude.
//!
//! The incoming wave is polarized at 45° to the y-axis, so it enters the
//! crystal as equal ordinary (y) and extraordinary (z) components. Behind the
//! crystal the filter projects onto the direction at angle `beta` from the
//! y-axis, leaving the relative amplitude
//!
//! ```text
//! z = (cos β + sin β · exp(i Δk d)) / √2
//! ```
//!
//! where `Δk d = ω Δn d / c` is the optical phase difference picked up in the
//! crystal. `z` vanishes at isolated points of the `(β, Δk d)` plane and its
//! phase winds once around each of them.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `|z|` below this is treated as an exact zero of the filtered amplitude.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Ordinary/extraordinary refractive indices and crystal width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrystalMedium {
    n_o: f64,
    n_e: f64,
    d: f64,
}

impl CrystalMedium {
    /// Crystal of unit width.
    pub fn new(n_o: f64, n_e: f64) -> Result<Self> {
        Self::with_width(n_o, n_e, 1.0)
    }

    pub fn with_width(n_o: f64, n_e: f64, d: f64) -> Result<Self> {
        if !(n_o.is_finite() && n_e.is_finite() && d.is_finite()) {
            return Err(Error::Domain("medium parameters must be finite".into()));
        }
        if n_o < 1.0 || n_e < 1.0 {
            return Err(Error::Domain(format!(
                "refractive indices must be >= 1 (n_o = {n_o}, n_e = {n_e})"
            )));
        }
        if n_e - n_o <= 0.0 {
            return Err(Error::Domain(format!(
                "the ordinary wave must be the fast one: n_e - n_o = {} is not positive",
                n_e - n_o
            )));
        }
        if d <= 0.0 {
            return Err(Error::Domain(format!("crystal width must be positive, got {d}")));
        }
        Ok(Self { n_o, n_e, d })
    }

    /// Unit-width crystal from the mean index `n̄` and the birefringence `Δn`.
    pub fn from_mean(n_bar: f64, delta_n: f64) -> Result<Self> {
        Self::new(n_bar - 0.5 * delta_n, n_bar + 0.5 * delta_n)
    }

    pub fn n_o(&self) -> f64 {
        self.n_o
    }

    pub fn n_e(&self) -> f64 {
        self.n_e
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn n_bar(&self) -> f64 {
        0.5 * (self.n_e + self.n_o)
    }

    pub fn delta_n(&self) -> f64 {
        self.n_e - self.n_o
    }

    /// Wave numbers `(k, k_o, k_e)` outside the crystal and for the two
    /// polarizations inside it.
    pub fn wave_numbers(&self, omega: f64) -> (f64, f64, f64) {
        (omega, omega * self.n_o, omega * self.n_e)
    }

    /// Optical phase difference `Δk d` accumulated across the crystal.
    pub fn dkd(&self, omega: f64) -> f64 {
        omega * self.delta_n() * self.d
    }
}

/// Polarization angle of the downstream filter, kept in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSetting {
    beta: f64,
}

impl FilterSetting {
    pub fn new(beta: f64) -> Self {
        let mut beta = beta.rem_euclid(TAU);
        // rem_euclid can round up to exactly 2π for tiny negative inputs
        if beta >= TAU {
            beta = 0.0;
        }
        Self { beta }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Filtered amplitude `z = |z| e^{iχ}` at one `(β, Δk d)` point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub beta: f64,
    pub dkd: f64,
    pub z: Complex64,
    pub modulus: f64,
    /// Principal argument of `z`, in `(-π, π]`.
    pub chi: f64,
}

/// Closed rectangle in the `(β, Δk d)` plane. A window with `lo > hi` on
/// either axis is empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub beta: (f64, f64),
    pub dkd: (f64, f64),
}

impl Window {
    pub fn new(beta: (f64, f64), dkd: (f64, f64)) -> Self {
        Self { beta, dkd }
    }

    pub fn is_empty(&self) -> bool {
        !(self.beta.0 <= self.beta.1 && self.dkd.0 <= self.dkd.1)
    }
}

/// Reflection coefficient `|(n1 - n2)/(n1 + n2)|²` for normal incidence.
pub fn fresnel_reflectance(n1: f64, n2: f64) -> Result<f64> {
    if !(n1 > 0.0 && n2 > 0.0) || !n1.is_finite() || !n2.is_finite() {
        return Err(Error::Domain(format!(
            "refractive indices must be positive and finite (n1 = {n1}, n2 = {n2})"
        )));
    }
    let r = (n1 - n2) / (n1 + n2);
    Ok(r * r)
}

pub fn filtered_amplitude(beta: f64, dkd: f64) -> Complex64 {
    let (sin_b, cos_b) = beta.sin_cos();
    (Complex64::from(cos_b) + sin_b * Complex64::cis(dkd)) * FRAC_1_SQRT_2
}

/// `|z| = sqrt([1 + sin 2β cos Δkd] / 2)`.
///
/// Loses relative accuracy near the zeros of `z` (cancellation under the
/// root); `filtered_amplitude(..).norm()` does not.
pub fn closed_form_modulus(beta: f64, dkd: f64) -> f64 {
    (0.5 * (1.0 + (2.0 * beta).sin() * dkd.cos())).max(0.0).sqrt()
}

/// Modulus and phase of the filtered amplitude.
///
/// Fails with [`Error::SingularPoint`] where `|z| < SINGULAR_TOL`, since the
/// phase has no value there.
pub fn modulus_and_phase(beta: f64, dkd: f64) -> Result<PhasePoint> {
    let z = filtered_amplitude(beta, dkd);
    let modulus = z.norm();
    if modulus < SINGULAR_TOL {
        return Err(Error::SingularPoint { beta, dkd });
    }
    Ok(PhasePoint {
        beta,
        dkd,
        z,
        modulus,
        chi: z.arg(),
    })
}

/// Every zero of the filtered amplitude inside `window`, sorted by `(β, Δkd)`.
///
/// Two families, both periodic with period π in β and 2π in Δkd:
/// `β = π/4 (mod π)` with `Δkd = π (mod 2π)`, and `β = 3π/4 (mod π)` with
/// `Δkd = 0 (mod 2π)`.
pub fn zero_points(window: &Window) -> Vec<(f64, f64)> {
    if window.is_empty() {
        return Vec::new();
    }
    let mut points = Vec::new();
    for (beta_base, dkd_base) in [(FRAC_PI_4, PI), (3.0 * FRAC_PI_4, 0.0)] {
        for beta in lattice_in(beta_base, PI, window.beta) {
            for dkd in lattice_in(dkd_base, TAU, window.dkd) {
                points.push((beta, dkd));
            }
        }
    }
    points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    points
}

/// Values `base + m·period` inside the closed interval `range`.
fn lattice_in(base: f64, period: f64, range: (f64, f64)) -> Vec<f64> {
    let (lo, hi) = range;
    let slack = 1e-12 * lo.abs().max(hi.abs()).max(1.0);
    let first = ((lo - slack - base) / period).ceil() as i64;
    let last = ((hi + slack - base) / period).floor() as i64;
    (first..=last)
        .map(|m| base + m as f64 * period)
        .filter(|v| *v >= lo - slack && *v <= hi + slack)
        .collect()
}

/// Winding number of the phase of `z` along a circle of `radius` around
/// `center = (β, Δkd)`, traversed counter-clockwise in the `(β, Δkd)` plane.
pub fn phase_winding(center: (f64, f64), radius: f64, samples: usize) -> Result<i32> {
    if samples < 16 {
        return Err(Error::Domain(format!("need at least 16 loop samples, got {samples}")));
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::Domain(format!("loop radius must be positive, got {radius}")));
    }
    let phase_at = |k: usize| -> Result<f64> {
        let theta = TAU * k as f64 / samples as f64;
        let beta = center.0 + radius * theta.cos();
        let dkd = center.1 + radius * theta.sin();
        let z = filtered_amplitude(beta, dkd);
        if z.norm() < SINGULAR_TOL {
            return Err(Error::DegenerateLoop { beta, dkd });
        }
        Ok(z.arg())
    };

    let first = phase_at(0)?;
    let mut prev = first;
    let mut total = 0.0;
    for k in 1..=samples {
        let current = if k == samples { first } else { phase_at(k)? };
        total += wrap_to_pi(current - prev);
        prev = current;
    }
    Ok((total / TAU).round() as i32)
}

/// Reduces an angle difference to `[-π, π)`.
pub(crate) fn wrap_to_pi(delta: f64) -> f64 {
    (delta + PI).rem_euclid(TAU) - PI
}
