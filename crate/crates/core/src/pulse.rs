//! Gaussian wave packet through the crystal.
//!
//! The packet is the superposition
//!
//! ```text
//! E(x, t) = sqrt(σ/4π) ∫ dω exp(-σ(ω - ω₀)²/4) E(ω; x, t)
//! ```
//!
//! of the plane waves in [`crate::planewave`]. Each polarization component
//! stays Gaussian in every region, with spatial width `ℓ = sqrt(σ) c` and a
//! displacement set by the index it travels through.
//!
//! After the crystal the filtered field is studied in the comoving
//! coordinate `ξ = (x - ct)/d + (n̄ - 1)`, where the ordinary and
//! extraordinary Gaussians sit at `ξ = ±Δn/2`. Under half-waveplate tuning
//! they carry opposite signs and the envelope `f = |E_β|²` becomes a
//! difference of two Gaussians with an advanced and a retarded maximum.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::planewave::CrystalMedium;

/// Residual exponents beyond this are evaluated rescaled by `exp(-|μ²ξΔn|)`.
const EXP_GUARD: f64 = 700.0;

/// Samples of the residual used to bracket its roots.
pub const BRACKET_SAMPLES: usize = 512;

/// Bisection stops once the bracket is narrower than this.
pub const BISECTION_TOL: f64 = 1e-13;

/// Search window half-extent beyond the two component centers, in units of
/// `1/μ`.
pub const WINDOW_WIDTHS: f64 = 6.0;

/// Gaussian input pulse with spectral weight `exp(-σ(ω - ω₀)²/4)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPulse {
    omega0: f64,
    sigma: f64,
    harmonic: Option<u32>,
}

impl GaussianPulse {
    pub fn new(omega0: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() || !omega0.is_finite() {
            return Err(Error::Domain(format!(
                "pulse needs finite omega0 and sigma > 0 (omega0 = {omega0}, sigma = {sigma})"
            )));
        }
        Ok(Self {
            omega0,
            sigma,
            harmonic: None,
        })
    }

    /// Pulse of spatial width `ell` whose carrier satisfies the half-waveplate
    /// condition of order `n` for `medium`.
    pub fn tuned(medium: &CrystalMedium, n: u32, ell: f64) -> Result<Self> {
        if !(ell > 0.0) || !ell.is_finite() {
            return Err(Error::Domain(format!("pulse width must be positive, got {ell}")));
        }
        let omega0 = half_waveplate_omega(medium, n)?;
        Ok(Self {
            omega0,
            sigma: ell * ell,
            harmonic: Some(n),
        })
    }

    /// Tuned pulse with `μ = d/ℓ`.
    pub fn tuned_mu(medium: &CrystalMedium, n: u32, mu: f64) -> Result<Self> {
        if !(mu > 0.0) {
            return Err(Error::Domain(format!("mu must be positive, got {mu}")));
        }
        Self::tuned(medium, n, medium.d() / mu)
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Half-waveplate order, when the pulse was built tuned.
    pub fn harmonic(&self) -> Option<u32> {
        self.harmonic
    }

    /// Spatial width `ℓ = sqrt(σ c²)`.
    pub fn ell(&self) -> f64 {
        self.sigma.sqrt()
    }

    /// `μ = d/ℓ`.
    pub fn mu(&self, medium: &CrystalMedium) -> f64 {
        medium.d() / self.ell()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Before,
    Inside,
    After,
}

impl Region {
    pub fn of(x: f64, medium: &CrystalMedium) -> Self {
        if x < 0.0 {
            Region::Before
        } else if x <= medium.d() {
            Region::Inside
        } else {
            Region::After
        }
    }
}

/// Filtered field `E_β / E₀` at one space-time point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub xi: f64,
    pub value: Complex64,
    pub region: Region,
}

impl FieldSample {
    /// Squared envelope `|E_β / E₀|²`.
    pub fn intensity(&self) -> f64 {
        self.value.norm_sqr()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub xi: f64,
    pub f: f64,
}

/// Extrema of the outgoing envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct PeakSet {
    /// Maximum with the largest `ξ`.
    pub advanced_peak: Extremum,
    /// Maximum with the smallest `ξ`, when there is more than one.
    pub retarded_peak: Option<Extremum>,
    /// Interior zeros of the envelope.
    pub minima: Vec<f64>,
    /// Every maximum found, ascending in `ξ`.
    pub maxima: Vec<Extremum>,
}

pub fn xi_of(x: f64, t: f64, medium: &CrystalMedium) -> f64 {
    (x - t) / medium.d() + (medium.n_bar() - 1.0)
}

/// Reference peak position of a pulse moving at the speed of light, `n̄ - 1`.
pub fn xi0(medium: &CrystalMedium) -> f64 {
    medium.n_bar() - 1.0
}

/// Gaussian with the carrier phase of the spectral weight's center:
/// `exp(-s²/σ) exp(i ω₀ s)`.
fn gaussian_packet(s: f64, pulse: &GaussianPulse) -> Complex64 {
    (-s * s / pulse.sigma).exp() * Complex64::cis(pulse.omega0 * s)
}

/// Closed-form filtered field in whichever region `x` falls, with `E₀ = 1`.
///
/// Each plane wave `exp(iω s)` integrates against the spectral weight to
/// `exp(-s²/σ) exp(iω₀ s)`, with `s = x - t` before the crystal,
/// `s = n x - t` inside it and `s = x - t + (n - 1)d` behind it, for
/// `n = n_o` (y component) and `n = n_e` (z component).
pub fn closed_form_field(
    x: f64,
    t: f64,
    medium: &CrystalMedium,
    beta: f64,
    pulse: &GaussianPulse,
) -> FieldSample {
    let (sin_b, cos_b) = beta.sin_cos();
    let region = Region::of(x, medium);
    let d = medium.d();
    let value = match region {
        Region::Before => (cos_b + sin_b) * gaussian_packet(x - t, pulse),
        Region::Inside => {
            cos_b * gaussian_packet(medium.n_o() * x - t, pulse)
                + sin_b * gaussian_packet(medium.n_e() * x - t, pulse)
        }
        Region::After => {
            cos_b * gaussian_packet(x - t + (medium.n_o() - 1.0) * d, pulse)
                + sin_b * gaussian_packet(x - t + (medium.n_e() - 1.0) * d, pulse)
        }
    };
    FieldSample {
        xi: xi_of(x, t, medium),
        value: value * std::f64::consts::FRAC_1_SQRT_2,
        region,
    }
}

/// Same pulse filtered at `beta` without any crystal in the way.
pub fn free_space_field(x: f64, t: f64, beta: f64, pulse: &GaussianPulse) -> Complex64 {
    let (sin_b, cos_b) = beta.sin_cos();
    (cos_b + sin_b) * gaussian_packet(x - t, pulse) * std::f64::consts::FRAC_1_SQRT_2
}

/// Outgoing envelope under half-waveplate tuning,
/// `f(ξ) = ½ [cos β e^{-μ²(ξ - Δn/2)²} - sin β e^{-μ²(ξ + Δn/2)²}]²`.
pub fn envelope_f(xi: f64, beta: f64, mu: f64, dn: f64) -> f64 {
    let amp = envelope_amplitude(xi, beta, mu, dn);
    0.5 * amp * amp
}

/// Signed amplitude whose square (times ½) is [`envelope_f`].
fn envelope_amplitude(xi: f64, beta: f64, mu: f64, dn: f64) -> f64 {
    let mu2 = mu * mu;
    let fast = (-mu2 * (xi - 0.5 * dn).powi(2)).exp();
    let slow = (-mu2 * (xi + 0.5 * dn).powi(2)).exp();
    beta.cos() * fast - beta.sin() * slow
}

/// Triangle-inequality bound on [`envelope_f`]: the envelope with the two
/// components added instead of subtracted.
pub fn envelope_bound(xi: f64, beta: f64, mu: f64, dn: f64) -> f64 {
    let mu2 = mu * mu;
    let fast = (-mu2 * (xi - 0.5 * dn).powi(2)).exp();
    let slow = (-mu2 * (xi + 0.5 * dn).powi(2)).exp();
    let amp = beta.cos() * fast + beta.sin() * slow;
    0.5 * amp * amp
}

/// Stationary-phase peak position under half-waveplate tuning,
/// `ξ₁ = (Δn/2)(cos β + sin β)/(cos β - sin β)`.
pub fn xi1_stationary(beta: f64, dn: f64) -> Result<f64> {
    let (sin_b, cos_b) = beta.sin_cos();
    let diff = cos_b - sin_b;
    if diff.abs() < 1e-12 {
        return Err(Error::Pole(format!(
            "stationary-phase peak diverges at beta = pi/4 (beta = {beta})"
        )));
    }
    Ok(0.5 * dn * (cos_b + sin_b) / diff)
}

/// Left side of the extremum condition
/// `cos β (ξ - Δn/2) e^{μ²ξΔn} - sin β (ξ + Δn/2) e^{-μ²ξΔn}`.
///
/// For `|μ²ξΔn| > 700` the value is returned multiplied by
/// `exp(-|μ²ξΔn|)` so that it stays finite; the sign is unchanged.
pub fn peak_residual(xi: f64, beta: f64, mu: f64, dn: f64) -> f64 {
    let kappa = mu * mu * xi * dn;
    let shift = if kappa.abs() > EXP_GUARD { kappa.abs() } else { 0.0 };
    residual_scaled(xi, beta, mu, dn, shift)
}

/// Residual times `exp(-shift)`.
fn residual_scaled(xi: f64, beta: f64, mu: f64, dn: f64, shift: f64) -> f64 {
    let kappa = mu * mu * xi * dn;
    beta.cos() * (xi - 0.5 * dn) * (kappa - shift).exp()
        - beta.sin() * (xi + 0.5 * dn) * (-kappa - shift).exp()
}

/// Envelope zero factor with the common Gaussian divided out:
/// `cos β e^{μ²ξΔn} - sin β e^{-μ²ξΔn}`, times `exp(-|μ²ξΔn|)`.
fn zero_factor_scaled(xi: f64, beta: f64, mu: f64, dn: f64) -> f64 {
    let kappa = mu * mu * xi * dn;
    let shift = kappa.abs();
    beta.cos() * (kappa - shift).exp() - beta.sin() * (-kappa - shift).exp()
}

/// Extrema of [`envelope_f`] for `0 ≤ β < π/2`.
///
/// `f' = A · A'` with `A` the signed amplitude; `A'` is proportional to
/// [`peak_residual`] and gives the maxima, `A = 0` gives the zeros of `f`.
/// Both factors are sampled on [`BRACKET_SAMPLES`] points across
/// `[-Δn/2 - 6/μ, Δn/2 + 6/μ]` and each sign change is bisected.
pub fn find_extrema(beta: f64, mu: f64, dn: f64) -> Result<PeakSet> {
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&beta) {
        return Err(Error::Domain(format!("beta must lie in [0, pi/2), got {beta}")));
    }
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::Domain(format!("mu must be positive, got {mu}")));
    }
    if !(dn > 0.0) || !dn.is_finite() {
        return Err(Error::Domain(format!("dn must be positive, got {dn}")));
    }
    let lo = -0.5 * dn - WINDOW_WIDTHS / mu;
    let hi = 0.5 * dn + WINDOW_WIDTHS / mu;

    let residual = |xi: f64| {
        let shift = (mu * mu * xi * dn).abs();
        residual_scaled(xi, beta, mu, dn, shift)
    };
    let critical = bracketed_roots(residual, lo, hi, BRACKET_SAMPLES);
    let minima = bracketed_roots(|xi| zero_factor_scaled(xi, beta, mu, dn), lo, hi, BRACKET_SAMPLES);

    let h = 1e-4 / mu;
    let maxima: Vec<Extremum> = critical
        .into_iter()
        .filter(|&xi| {
            let f = |x| envelope_f(x, beta, mu, dn);
            f(xi - h) + f(xi + h) - 2.0 * f(xi) < 0.0
        })
        .map(|xi| Extremum {
            xi,
            f: envelope_f(xi, beta, mu, dn),
        })
        .collect();

    let Some(advanced_peak) = maxima.last().copied() else {
        return Err(Error::SolverFailure(format!(
            "no maximum bracketed in xi in [{lo}, {hi}] for beta = {beta}, mu = {mu}, dn = {dn} \
             ({BRACKET_SAMPLES} samples)"
        )));
    };
    let retarded_peak = (maxima.len() > 1).then(|| maxima[0]);
    Ok(PeakSet {
        advanced_peak,
        retarded_peak,
        minima,
        maxima,
    })
}

/// Roots of `f` on `[lo, hi]`: sample uniformly, then bisect every sign
/// change down to [`BISECTION_TOL`].
fn bracketed_roots<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    let step = (hi - lo) / (samples - 1) as f64;
    let grid: Vec<(f64, f64)> = (0..samples)
        .map(|i| {
            let x = if i + 1 == samples { hi } else { lo + i as f64 * step };
            (x, f(x))
        })
        .collect();

    let mut roots = Vec::new();
    for (i, pair) in grid.windows(2).enumerate() {
        let (a, fa) = pair[0];
        let (b, fb) = pair[1];
        if fa == 0.0 {
            roots.push(a);
        } else if fa * fb < 0.0 {
            roots.push(bisect(&f, a, b, fa));
        }
        if i + 2 == grid.len() && fb == 0.0 {
            roots.push(b);
        }
    }
    roots
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    while b - a > BISECTION_TOL {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Pulse widths beyond which the stationary-phase peak position is
/// trustworthy on the superluminal side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityThreshold {
    /// `ℓ* = sqrt((cos β + sin β)/(cos β - sin β)) Δn d`; require `ℓ ≫ ℓ*`.
    pub ell_star: f64,
    /// `sqrt(2Δn(n̄ - 1)) d`, below `ℓ*` whenever `ξ₁ > ξ₀`.
    pub universal_bound: f64,
}

pub fn validity_constraint(beta: f64, medium: &CrystalMedium) -> Result<ValidityThreshold> {
    let (sin_b, cos_b) = beta.sin_cos();
    let diff = cos_b - sin_b;
    let sum = cos_b + sin_b;
    if beta >= FRAC_PI_4 || diff <= 1e-12 || sum <= 0.0 {
        return Err(Error::Domain(format!(
            "validity constraint needs -pi/4 < beta < pi/4, got {beta}"
        )));
    }
    let d = medium.d();
    let dn = medium.delta_n();
    Ok(ValidityThreshold {
        ell_star: (sum / diff).sqrt() * dn * d,
        universal_bound: (2.0 * dn * (medium.n_bar() - 1.0)).sqrt() * d,
    })
}

/// Carrier frequency `ω₀ = (2N + 1)π c / (Δn d)` satisfying the
/// half-waveplate condition.
pub fn half_waveplate_omega(medium: &CrystalMedium, n: u32) -> Result<f64> {
    let dn = medium.delta_n();
    if dn <= 0.0 {
        return Err(Error::Domain("half-waveplate frequency needs dn > 0".into()));
    }
    Ok((2 * n as u64 + 1) as f64 * PI / (dn * medium.d()))
}
