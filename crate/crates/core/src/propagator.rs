//! Free-particle kernels and the one-slit path-integral amplitude.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{bail, ensure_finite, ensure_positive, Result};
use crate::slit_model::{self, SlitGeometry};

/// Complex amplitude in units of length^(-d/2) for a d-dimensional kernel.
pub type ComplexAmplitude = Complex64;

/// Mass-to-ħ ratio of the particle together with the two flight times:
/// source to slit (`t_slit`, written T elsewhere) and slit to screen
/// (`t_screen`, written τ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicScale {
    pub mass_over_hbar: f64,
    pub t_slit: f64,
    pub t_screen: f64,
}

impl KinematicScale {
    pub fn new(mass_over_hbar: f64, t_slit: f64, t_screen: f64) -> Result<Self> {
        ensure_positive("mass_over_hbar", mass_over_hbar)?;
        ensure_positive("t_slit", t_slit)?;
        ensure_positive("t_screen", t_screen)?;
        Ok(Self { mass_over_hbar, t_slit, t_screen })
    }

    /// Free-particle scale with no slit timing attached.
    pub fn free(mass_over_hbar: f64) -> Result<Self> {
        Self::new(mass_over_hbar, 1.0, 1.0)
    }

    pub fn total_time(&self) -> f64 {
        self.t_slit + self.t_screen
    }
}

/// Centred complex Gaussian `(2πv)^(-1/2) exp(-x²/(2v))` with complex variance
/// `v` in the closed right half plane, principal square root throughout.
///
/// The free kernel over a time step ε is the member with `v = iε/(m/ħ)`;
/// convolution adds variances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexGaussian {
    pub variance: Complex64,
}

impl ComplexGaussian {
    pub fn free_kernel(dt: f64, mass_over_hbar: f64) -> Self {
        Self { variance: Complex64::new(0.0, dt / mass_over_hbar) }
    }

    pub fn convolve(self, other: Self) -> Self {
        Self { variance: self.variance + other.variance }
    }

    pub fn eval(self, x: f64) -> Complex64 {
        let v = self.variance;
        let norm = (v * (2.0 * PI)).sqrt().inv();
        norm * (-(x * x) / (v * 2.0)).exp()
    }
}

/// Free kernel `K₀(x_f, t_f; x_i, t_i)` in one dimension:
/// `e^{-iπ/4} (2πΔt/(m/ħ))^{-1/2} exp(i (m/ħ) Δx² / (2Δt))`.
pub fn free_propagator_1d(
    x_f: f64,
    t_f: f64,
    x_i: f64,
    t_i: f64,
    scale: &KinematicScale,
) -> Result<ComplexAmplitude> {
    ensure_finite("x_f", x_f)?;
    ensure_finite("x_i", x_i)?;
    let dt = t_f - t_i;
    if !(dt > 0.0) || !dt.is_finite() {
        bail!(Domain, "propagation time must be positive, got t_f - t_i = {dt}");
    }
    Ok(kernel_1d(x_f - x_i, dt, scale.mass_over_hbar))
}

pub(crate) fn kernel_1d(dx: f64, dt: f64, mass_over_hbar: f64) -> Complex64 {
    let amplitude = libm::sqrt(mass_over_hbar / (2.0 * PI * dt));
    let phase = mass_over_hbar * dx * dx / (2.0 * dt) - PI / 4.0;
    Complex64::from_polar(amplitude, phase)
}

/// Product of `d` one-dimensional kernels for `d ∈ {2, 3}`.
pub fn free_propagator_nd(
    displacement: &[f64],
    dt: f64,
    scale: &KinematicScale,
) -> Result<ComplexAmplitude> {
    let d = displacement.len();
    if !(2..=3).contains(&d) {
        bail!(Domain, "dimension must be 2 or 3, got {d}");
    }
    ensure_positive("dt", dt)?;
    let mut k = Complex64::new(1.0, 0.0);
    for &x in displacement {
        ensure_finite("displacement", x)?;
        k *= kernel_1d(x, dt, scale.mass_over_hbar);
    }
    Ok(k)
}

/// Kernel obtained by chaining `n` free steps of length `total_time / n`
/// through exact Gaussian convolution.
pub fn time_sliced_propagator(
    n: usize,
    x_f: f64,
    x_i: f64,
    total_time: f64,
    scale: &KinematicScale,
) -> Result<ComplexAmplitude> {
    if n == 0 {
        bail!(Domain, "time slicing needs at least one step");
    }
    ensure_positive("total_time", total_time)?;
    ensure_finite("x_f", x_f)?;
    ensure_finite("x_i", x_i)?;
    let step = ComplexGaussian::free_kernel(total_time / n as f64, scale.mass_over_hbar);
    let mut acc = step;
    for _ in 1..n {
        acc = acc.convolve(step);
    }
    Ok(acc.eval(x_f - x_i))
}

/// Amplitude through the slit of half-width `g.half_width` centred at
/// `g.center`, integrated in closed form over the slit coordinate.
///
/// The Fresnel arguments are built from the flight times and `m/ħ`,
/// independently of the wavelength-based route in [`slit_model`].
pub fn slit_propagator(x: f64, g: &SlitGeometry, scale: &KinematicScale) -> Result<ComplexAmplitude> {
    ensure_finite("x", x)?;
    ensure_positive("half_width", g.half_width)?;
    let (lo, hi) = physical_alphas(x, g.half_width, g.center, scale);
    let window = slit_model::fresnel_window(lo, hi)?;
    let m = scale.mass_over_hbar;
    let total = scale.total_time();
    // 1/sqrt((2i)² π ħ (T + τ) / m) on the principal branch
    let prefactor = (Complex64::new(-4.0 * PI * total / m, 0.0)).sqrt().inv();
    let chirp = Complex64::from_polar(1.0, m * x * x / (2.0 * total));
    Ok(prefactor * chirp * window)
}

/// Width of the convolution of two centred Gaussians, `√(σ₁² + σ₂²)`.
pub fn convolve_gaussians(sigma1: f64, sigma2: f64) -> Result<f64> {
    ensure_positive("sigma1", sigma1)?;
    ensure_positive("sigma2", sigma2)?;
    Ok(libm::hypot(sigma1, sigma2))
}

/// `α∓` for the slit edges `c ∓ a`, expressed through `T`, `τ` and `m/ħ`.
pub fn physical_alphas(x: f64, a: f64, center: f64, scale: &KinematicScale) -> (f64, f64) {
    let m = scale.mass_over_hbar;
    let (t, tau) = (scale.t_slit, scale.t_screen);
    let root = libm::sqrt(m / PI * (1.0 / t + 1.0 / tau));
    let stationary = x * t / (t + tau);
    (root * (center - a - stationary), root * (center + a - stationary))
}
