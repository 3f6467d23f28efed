//! Brute-force synthesis of the Gaussian packet by quadrature over its
//! monochromatic components.
//!
//! Nothing here uses the closed forms of [`crate::pulse`]; the integrand is
//! the filtered plane wave of each region evaluated frequency by frequency.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::planewave::CrystalMedium;
use crate::pulse::{closed_form_field, GaussianPulse, Region};
use crate::quadrature::CompositeRule;

/// Discretization of the frequency integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    /// Total number of quadrature nodes.
    pub nodes: usize,
    /// Half-width of the integration window in spectral standard deviations
    /// `sqrt(2/σ)`.
    pub span: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { nodes: 2048, span: 8 }
    }
}

impl QuadratureSpec {
    pub fn new(nodes: usize, span: u32) -> Result<Self> {
        if nodes < 64 {
            return Err(Error::Domain(format!("quadrature needs at least 64 nodes, got {nodes}")));
        }
        if span < 6 {
            return Err(Error::Domain(format!("quadrature span must be >= 6 std, got {span}")));
        }
        Ok(Self { nodes, span })
    }

    pub fn doubled(&self) -> Self {
        Self {
            nodes: 2 * self.nodes,
            span: self.span,
        }
    }
}

/// Filtered monochromatic plane wave at `(x, t)` for angular frequency
/// `omega`, with `E₀ = 1`.
fn monochromatic_filtered(omega: f64, x: f64, t: f64, medium: &CrystalMedium, beta: f64) -> Complex64 {
    let (sin_b, cos_b) = beta.sin_cos();
    let d = medium.d();
    let (k, k_o, k_e) = medium.wave_numbers(omega);
    let w = match Region::of(x, medium) {
        Region::Before => (cos_b + sin_b) * Complex64::cis(k * x - omega * t),
        Region::Inside => {
            cos_b * Complex64::cis(k_o * x - omega * t) + sin_b * Complex64::cis(k_e * x - omega * t)
        }
        Region::After => {
            Complex64::cis(k * x - omega * t)
                * (cos_b * Complex64::cis((k_o - k) * d) + sin_b * Complex64::cis((k_e - k) * d))
        }
    };
    w * FRAC_1_SQRT_2
}

/// `sqrt(σ/4π) ∫ dω exp(-σ(ω - ω₀)²/4) E_β(ω; x, t)` by composite
/// Gauss–Legendre over `ω₀ ± span·sqrt(2/σ)`.
pub fn quadrature_field(
    x: f64,
    t: f64,
    medium: &CrystalMedium,
    beta: f64,
    pulse: &GaussianPulse,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let sigma = pulse.sigma();
    let omega0 = pulse.omega0();
    let half = spec.span as f64 * (2.0 / sigma).sqrt();
    let rule = CompositeRule::with_nodes(spec.nodes);
    let norm = (sigma / (4.0 * PI)).sqrt();

    let mut acc = Complex64::new(0.0, 0.0);
    for (omega, w) in rule.points(omega0 - half, omega0 + half) {
        let du = omega - omega0;
        let sample = (-0.25 * sigma * du * du).exp() * monochromatic_filtered(omega, x, t, medium, beta);
        if !(sample.re.is_finite() && sample.im.is_finite()) {
            return Err(Error::NonFinite { omega });
        }
        acc += w * sample;
    }
    Ok(norm * acc)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridComparison {
    pub max_abs_error: f64,
    /// `(x, t)` where the largest deviation occurred.
    pub argmax: (f64, f64),
    pub points: usize,
}

/// Largest deviation between the closed form and the quadrature over `grid`.
pub fn compare_grid(
    grid: &[(f64, f64)],
    medium: &CrystalMedium,
    beta: f64,
    pulse: &GaussianPulse,
    spec: &QuadratureSpec,
) -> Result<GridComparison> {
    let mut report = GridComparison {
        max_abs_error: 0.0,
        argmax: (f64::NAN, f64::NAN),
        points: grid.len(),
    };
    for &(x, t) in grid {
        let exact = closed_form_field(x, t, medium, beta, pulse).value;
        let numeric = quadrature_field(x, t, medium, beta, pulse, spec)?;
        let err = (exact - numeric).norm();
        if err > report.max_abs_error || report.argmax.0.is_nan() {
            report.max_abs_error = err;
            report.argmax = (x, t);
        }
    }
    Ok(report)
}

/// `per_region` space-time points in each of the three regions, placed where
/// the packet actually is: the time offsets sweep `±2ℓ` around the arrival
/// of the packet center at each `x`.
pub fn region_grid(medium: &CrystalMedium, pulse: &GaussianPulse, per_region: usize) -> Vec<(f64, f64)> {
    let d = medium.d();
    let ell = pulse.ell();
    let cols = 10.min(per_region).max(1);
    let rows = per_region.div_ceil(cols);
    let mut grid = Vec::with_capacity(3 * per_region);
    for region in [Region::Before, Region::Inside, Region::After] {
        let mut count = 0;
        'fill: for i in 0..rows {
            // open interval: stay clear of the faces
            let frac = (i as f64 + 0.5) / rows as f64;
            let x = match region {
                Region::Before => -3.0 * ell * (1.0 - frac) - 1e-3 * d,
                Region::Inside => frac * d,
                Region::After => d + 3.0 * ell * frac + 1e-3 * d,
            };
            // arrival time of the packet center at x
            let t_center = match region {
                Region::Before => x,
                Region::Inside => medium.n_bar() * x,
                Region::After => x + (medium.n_bar() - 1.0) * d,
            };
            for j in 0..cols {
                if count == per_region {
                    break 'fill;
                }
                let u = -2.0 + 4.0 * (j as f64 + 0.5) / cols as f64;
                grid.push((x, t_center + u * ell));
                count += 1;
            }
        }
    }
    grid
}
