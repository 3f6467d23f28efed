//! Stationary-phase time shift of the filtered peak.
//!
//! Requiring the total phase `kx - ωt + (k_o - k)d + χ` to be stationary in
//! `ω` puts the filtered peak at `x = ct + d - n_o d - c dχ/dω`. Relative to a
//! pulse crossing the same distance in vacuum that is a delay
//!
//! ```text
//! τ = dχ/dω + (n_o - 1) d/c
//!   = (d/c) [ n̄ - 1 - ½ cos 2β · Δn / (1 + cos Δkd · sin 2β) ]
//! ```
//!
//! Negative `τ` means the filtered peak leaves the crystal ahead of the
//! vacuum reference.

use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};
use crate::planewave::CrystalMedium;

/// Denominators `1 + cos Δkd · sin 2β` below this are treated as the vortex.
pub const DENOMINATOR_TOL: f64 = 1e-12;

/// `|ε|` or `|φ|` above this is reported as outside the first-order regime.
pub const SMALL_SIGNAL_LIMIT: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeShiftResult {
    /// Delay in units of `d/c`, scaled by the crystal width.
    pub tau: f64,
    /// `tau < 0`.
    pub superluminal: bool,
}

impl TimeShiftResult {
    fn new(tau: f64) -> Self {
        Self {
            tau,
            superluminal: tau < 0.0,
        }
    }
}

/// Offsets from the half-waveplate vortex: `β = π/4 + ε`,
/// `Δkd = (2N + 1)π + φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallSignalCoords {
    pub epsilon: f64,
    pub phi: f64,
    pub n: i64,
}

impl SmallSignalCoords {
    pub fn new(epsilon: f64, phi: f64, n: i64) -> Self {
        Self { epsilon, phi, n }
    }

    /// Coordinates of `(β, Δkd)` relative to the vortex of order `n`.
    pub fn from_angles(beta: f64, dkd: f64, n: i64) -> Self {
        Self {
            epsilon: beta - FRAC_PI_4,
            phi: dkd - (2 * n + 1) as f64 * std::f64::consts::PI,
            n,
        }
    }

    pub fn beta(&self) -> f64 {
        FRAC_PI_4 + self.epsilon
    }

    pub fn dkd(&self) -> f64 {
        (2 * self.n + 1) as f64 * std::f64::consts::PI + self.phi
    }

    pub fn out_of_regime(&self) -> bool {
        self.epsilon.abs() > SMALL_SIGNAL_LIMIT || self.phi.abs() > SMALL_SIGNAL_LIMIT
    }
}

/// First-order time shift together with the regime flag of its inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallSignalTau {
    pub shift: TimeShiftResult,
    pub out_of_regime: bool,
}

/// Exact stationary-phase delay of the filtered peak.
pub fn time_shift(medium: &CrystalMedium, beta: f64, dkd: f64) -> Result<TimeShiftResult> {
    let denom = 1.0 + dkd.cos() * (2.0 * beta).sin();
    if denom.abs() < DENOMINATOR_TOL {
        return Err(Error::SingularPoint { beta, dkd });
    }
    let term = 0.5 * (2.0 * beta).cos() * medium.delta_n() / denom;
    Ok(TimeShiftResult::new(medium.d() * (medium.n_bar() - 1.0 - term)))
}

/// First-order expansion of [`time_shift`] around the vortex:
/// `τ = (d/c) [n̄ - 1 + 2ε Δn / (4ε² + φ²)]`.
pub fn small_signal_tau(medium: &CrystalMedium, coords: SmallSignalCoords) -> Result<SmallSignalTau> {
    let SmallSignalCoords { epsilon, phi, .. } = coords;
    let rho2 = 4.0 * epsilon * epsilon + phi * phi;
    if rho2 == 0.0 {
        return Err(Error::SingularPoint {
            beta: coords.beta(),
            dkd: coords.dkd(),
        });
    }
    let tau = medium.d() * (medium.n_bar() - 1.0 + 2.0 * epsilon * medium.delta_n() / rho2);
    Ok(SmallSignalTau {
        shift: TimeShiftResult::new(tau),
        out_of_regime: coords.out_of_regime(),
    })
}

/// Semi-axis `a = Δn / (4(n̄ - 1))` of the first-order superluminal ellipse.
pub fn ellipse_semi_axis(medium: &CrystalMedium) -> f64 {
    medium.delta_n() / (4.0 * (medium.n_bar() - 1.0))
}

/// Strict interior of `(ε + a)²/a² + φ²/(4a²) < 1`.
pub fn superluminal_region(medium: &CrystalMedium, coords: SmallSignalCoords) -> bool {
    let a = ellipse_semi_axis(medium);
    let e = coords.epsilon + a;
    e * e / (a * a) + coords.phi * coords.phi / (4.0 * a * a) < 1.0
}
