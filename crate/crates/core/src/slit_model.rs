//! Closed-form one- and two-slit amplitudes in terms of Fresnel integrals.
//!
//! All evaluation happens in dimensionless variables: `u = x/a`, `N_F(a)`,
//! `η` and `β`. Physical entry points convert once on the way in, and the
//! figure-unit intensity `f = P·λ(L+D)` is the natural output.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{bail, ensure_finite, ensure_positive, Result};
use crate::fresnel::fresnel;
use crate::propagator::{ComplexAmplitude, KinematicScale};

/// Physical description of the slit screen.
///
/// Slits have half-width `half_width` and sit at `±center`; a single slit
/// uses `center = 0`. The source is `source_to_slit` (D) before the slit
/// plane and the detection screen `slit_to_screen` (L) after it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitGeometry {
    pub half_width: f64,
    pub center: f64,
    pub slit_to_screen: f64,
    pub source_to_slit: f64,
    pub wavelength: f64,
}

/// Sign selector for slit edges `±a` and for the slit images `±b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn sign(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Number of open slits implied by a geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlitMode {
    Single,
    Double,
}

impl SlitGeometry {
    pub fn single(half_width: f64, slit_to_screen: f64, source_to_slit: f64, wavelength: f64) -> Result<Self> {
        let g = Self { half_width, center: 0.0, slit_to_screen, source_to_slit, wavelength };
        g.validate()?;
        Ok(g)
    }

    pub fn double(
        half_width: f64,
        center: f64,
        slit_to_screen: f64,
        source_to_slit: f64,
        wavelength: f64,
    ) -> Result<Self> {
        let g = Self { half_width, center, slit_to_screen, source_to_slit, wavelength };
        g.validate()?;
        if g.mode() != SlitMode::Double {
            bail!(Domain, "two slits need center > half_width, got b = {center}, a = {half_width}");
        }
        Ok(g)
    }

    /// Canonical geometry for a dimensionless triple: `a = 1`, `D = 1`,
    /// `L = η − 1`, `λ = 2a²/(N_F(a)·L)` and `b = βa`.
    pub fn from_dimensionless(nf_a: f64, eta: f64, beta: f64) -> Result<Self> {
        ensure_positive("nf_a", nf_a)?;
        ensure_finite("eta", eta)?;
        ensure_finite("beta", beta)?;
        if !(eta > 1.0) {
            bail!(Domain, "eta must exceed 1, got {eta}");
        }
        if beta < 0.0 {
            bail!(Domain, "beta must be non-negative, got {beta}");
        }
        let l = eta - 1.0;
        let g = Self {
            half_width: 1.0,
            center: beta,
            slit_to_screen: l,
            source_to_slit: 1.0,
            wavelength: 2.0 / (nf_a * l),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("half_width", self.half_width)?;
        ensure_positive("slit_to_screen", self.slit_to_screen)?;
        ensure_positive("source_to_slit", self.source_to_slit)?;
        ensure_positive("wavelength", self.wavelength)?;
        ensure_finite("center", self.center)?;
        if self.center < 0.0 {
            bail!(Domain, "slit center must be non-negative, got {}", self.center);
        }
        if self.center != 0.0 && self.center <= self.half_width {
            bail!(Domain, "slits at ±{} overlap for half-width {}", self.center, self.half_width);
        }
        Ok(())
    }

    pub fn mode(&self) -> SlitMode {
        if self.center == 0.0 { SlitMode::Single } else { SlitMode::Double }
    }

    /// Flight times for a particle of the given `m/ħ`, using `λ = 2π/((m/ħ)v)`,
    /// `T = D/v` and `τ = L/v`.
    pub fn kinematic_scale(&self, mass_over_hbar: f64) -> Result<KinematicScale> {
        ensure_positive("mass_over_hbar", mass_over_hbar)?;
        let v = 2.0 * PI / (mass_over_hbar * self.wavelength);
        KinematicScale::new(mass_over_hbar, self.source_to_slit / v, self.slit_to_screen / v)
    }

    /// `λ(L+D)`, the length² that turns raw densities into figure units.
    pub fn figure_scale(&self) -> f64 {
        self.wavelength * (self.slit_to_screen + self.source_to_slit)
    }
}

/// Dimensionless groups of a geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessParams {
    pub eta: f64,
    pub gamma: f64,
    pub beta: f64,
    pub nf_a: f64,
    pub nf_b: f64,
    pub nf: f64,
}

impl DimensionlessParams {
    fn root(&self) -> f64 {
        libm::sqrt(self.nf_a * self.eta)
    }
}

/// Computes `η = 1 + L/D`, `γ = L/D`, `β = b/a` and the Fresnel numbers
/// `2a²/λL`, `2b²/λL`, `2ab/λL`. For a single slit `β`, `N_F(b)` and `N_F` are zero.
pub fn derive_params(g: &SlitGeometry) -> Result<DimensionlessParams> {
    g.validate()?;
    let lambda_l = g.wavelength * g.slit_to_screen;
    let (a, b) = (g.half_width, g.center);
    let gamma = g.slit_to_screen / g.source_to_slit;
    Ok(DimensionlessParams {
        eta: 1.0 + gamma,
        gamma,
        beta: b / a,
        nf_a: 2.0 * a * a / lambda_l,
        nf_b: 2.0 * b * b / lambda_l,
        nf: 2.0 * a * b / lambda_l,
    })
}

/// `α(x;±a) = √(N_F(a)η)(±1 − x/(aη))`.
pub fn alpha_single(x: f64, sign: Sign, p: &DimensionlessParams, a: f64) -> f64 {
    p.root() * (sign.sign() - x / (a * p.eta))
}

/// `(α₋, α₊)` with `α± = √(N_F(a)η)(β ± 1 − (x/a)/η)` and `β = b/a`.
pub fn alpha_pm(x: f64, p: &DimensionlessParams, a: f64, b: f64) -> (f64, f64) {
    edge_alphas(x / a, p.root(), b / a, p.eta)
}

fn edge_alphas(u: f64, root: f64, beta: f64, eta: f64) -> (f64, f64) {
    let shift = beta - u / eta;
    (root * (shift - 1.0), root * (shift + 1.0))
}

/// `(C(hi) − C(lo)) + i(S(hi) − S(lo))`.
pub fn fresnel_window(lo: f64, hi: f64) -> Result<Complex64> {
    let h = fresnel(hi)?;
    let l = fresnel(lo)?;
    Ok(Complex64::new(h.c - l.c, h.s - l.s))
}

/// Dimensionless slit window `F = ΔC + iΔS` for the slit image at `±β`.
pub fn slit_window(u: f64, p: &DimensionlessParams, side: Sign) -> Result<Complex64> {
    let (lo, hi) = edge_alphas(u, p.root(), side.sign() * p.beta, p.eta);
    fresnel_window(lo, hi)
}

/// Amplitude `A₁(x)` for the slit at `+b` or, via `A₂(x;a,b) = A₁(x;a,−b)`,
/// at `−b`. Units of length^(-1/2); includes the common phase `e^{iπx²/(λ(L+D))}`.
pub fn amplitude_one_slit(x: f64, g: &SlitGeometry, side: Sign) -> Result<ComplexAmplitude> {
    ensure_finite("x", x)?;
    let p = derive_params(g)?;
    let window = slit_window(x / g.half_width, &p, side)?;
    let scale = g.figure_scale();
    let chirp = Complex64::from_polar(1.0, PI * x * x / scale);
    // 1/sqrt((2i)² π ħ (T+τ)/m) = −i / sqrt(2 λ (L+D))
    let prefactor = Complex64::new(0.0, -1.0 / libm::sqrt(2.0 * scale));
    Ok(prefactor * chirp * window)
}

/// Centred single-slit density `P(x)` in 1/length².
pub fn probability_one_slit(x: f64, g: &SlitGeometry) -> Result<f64> {
    ensure_finite("x", x)?;
    if g.mode() != SlitMode::Single {
        bail!(Domain, "single-slit probability needs center = 0, got {}", g.center);
    }
    let p = derive_params(g)?;
    let w = slit_window(x / g.half_width, &p, Sign::Plus)?;
    Ok(0.5 * w.norm_sqr() / g.figure_scale())
}

/// Two-slit density and its decomposition, all in the same units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSlitSample {
    pub p_total: f64,
    pub p1: f64,
    pub p2: f64,
    pub i12: f64,
}

impl TwoSlitSample {
    fn from_windows(f1: Complex64, f2: Complex64, scale: f64) -> Self {
        let p1 = 0.5 * f1.norm_sqr() * scale;
        let p2 = 0.5 * f2.norm_sqr() * scale;
        let i12 = (f1 * f2.conj()).re * scale;
        Self { p_total: p1 + p2 + i12, p1, p2, i12 }
    }

    fn scaled(self, k: f64) -> Self {
        Self { p_total: self.p_total * k, p1: self.p1 * k, p2: self.p2 * k, i12: self.i12 * k }
    }
}

/// `|A₁ + A₂|²` split into `|A₁|²`, `|A₂|²` and `2 Re(A₁A₂*)`, in 1/length².
pub fn probability_two_slit(x: f64, g: &SlitGeometry) -> Result<TwoSlitSample> {
    ensure_finite("x", x)?;
    if g.mode() != SlitMode::Double {
        bail!(Domain, "two-slit probability needs center > half_width");
    }
    let ev = CurveEvaluator::new(g, Units::Raw)?;
    ev.sample(x / g.half_width)
}

/// Output units of scanned curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Units {
    /// Dimensionless `P·λ(L+D)`, as on the figure ordinates.
    #[default]
    Figure,
    /// Raw density in 1/length².
    Raw,
}

/// Sampled intensity with its decomposition on a grid of `x/a`.
/// For a single slit `p1 = p_total` and `p2 = i12 = 0`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntensityCurve {
    pub grid: Vec<f64>,
    pub p_total: Vec<f64>,
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
    pub i12: Vec<f64>,
}

impl IntensityCurve {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn push(&mut self, u: f64, s: TwoSlitSample) {
        self.grid.push(u);
        self.p_total.push(s.p_total);
        self.p1.push(s.p1);
        self.p2.push(s.p2);
        self.i12.push(s.i12);
    }
}

/// Pointwise evaluator shared by [`scan_curve`] and parallel drivers.
#[derive(Debug, Clone, Copy)]
pub struct CurveEvaluator {
    params: DimensionlessParams,
    mode: SlitMode,
    unit_factor: f64,
}

impl CurveEvaluator {
    pub fn new(g: &SlitGeometry, units: Units) -> Result<Self> {
        let params = derive_params(g)?;
        let unit_factor = match units {
            Units::Figure => 1.0,
            Units::Raw => 1.0 / g.figure_scale(),
        };
        Ok(Self { params, mode: g.mode(), unit_factor })
    }

    pub fn params(&self) -> &DimensionlessParams {
        &self.params
    }

    pub fn mode(&self) -> SlitMode {
        self.mode
    }

    /// Sample at `u = x/a`.
    pub fn sample(&self, u: f64) -> Result<TwoSlitSample> {
        ensure_finite("x/a", u)?;
        let s = match self.mode {
            SlitMode::Single => {
                let f = slit_window(u, &self.params, Sign::Plus)?;
                let p1 = 0.5 * f.norm_sqr();
                TwoSlitSample { p_total: p1, p1, p2: 0.0, i12: 0.0 }
            }
            SlitMode::Double => {
                let f1 = slit_window(u, &self.params, Sign::Plus)?;
                let f2 = slit_window(u, &self.params, Sign::Minus)?;
                TwoSlitSample::from_windows(f1, f2, 1.0)
            }
        };
        Ok(s.scaled(self.unit_factor))
    }
}

/// Uniform grid `x_i = x_min + i (x_max − x_min)/(n − 1)` in physical units.
pub fn scan_grid(x_min: f64, x_max: f64, n_points: usize) -> Result<Vec<f64>> {
    ensure_finite("x_min", x_min)?;
    ensure_finite("x_max", x_max)?;
    if n_points < 2 {
        bail!(Domain, "scan needs at least 2 points, got {n_points}");
    }
    if !(x_min < x_max) {
        bail!(Domain, "scan range must satisfy x_min < x_max, got [{x_min}, {x_max}]");
    }
    let step = (x_max - x_min) / (n_points - 1) as f64;
    let mut grid: Vec<f64> = (0..n_points).map(|i| x_min + step * i as f64).collect();
    grid[n_points - 1] = x_max;
    Ok(grid)
}

/// Scans `[x_min, x_max]` (physical lengths) in figure units.
pub fn scan_curve(g: &SlitGeometry, x_min: f64, x_max: f64, n_points: usize) -> Result<IntensityCurve> {
    scan_curve_in(g, x_min, x_max, n_points, Units::Figure)
}

pub fn scan_curve_in(
    g: &SlitGeometry,
    x_min: f64,
    x_max: f64,
    n_points: usize,
    units: Units,
) -> Result<IntensityCurve> {
    let ev = CurveEvaluator::new(g, units)?;
    let mut curve = IntensityCurve::default();
    for x in scan_grid(x_min, x_max, n_points)? {
        let u = x / g.half_width;
        curve.push(u, ev.sample(u)?);
    }
    Ok(curve)
}

/// Direct quadrature of the slit-plane integral `∫ K₀(x,T+τ; w,T) K₀(w,T; 0,0) dw`
/// over one slit, independent of the Fresnel kernel.
pub mod oracle {
    use super::*;
    use crate::propagator::free_propagator_1d;
    use crate::quadrature::integrate_chirped;

    /// Screen positions at which the closed form is checked, as fractions of
    /// the plotted half-range.
    pub const PROBE_FRACTIONS: [f64; 7] = [-0.973, -0.375, -0.05, 0.0, 0.01, 0.125, 0.73];

    /// [`PROBE_FRACTIONS`] scaled to a half-range of `x_max_over_a`, in units of `a`.
    pub fn probe_points(x_max_over_a: f64) -> [f64; 7] {
        PROBE_FRACTIONS.map(|f| f * x_max_over_a)
    }

    /// Amplitude at `x` for the slit at `±b`, with relative accuracy about `rel_tol`.
    pub fn amplitude_quadrature(x: f64, g: &SlitGeometry, side: Sign, rel_tol: f64) -> Result<ComplexAmplitude> {
        ensure_finite("x", x)?;
        g.validate()?;
        let scale = g.kinematic_scale(1.0)?;
        let (t, tau) = (scale.t_slit, scale.t_screen);
        let c = side.sign() * g.center;
        let a = g.half_width;
        let integrand = |w: f64| {
            let second = free_propagator_1d(x, t + tau, w, t, &scale).unwrap_or_default();
            let first = free_propagator_1d(w, t, 0.0, 0.0, &scale).unwrap_or_default();
            second * first
        };
        let curvature = 0.5 * scale.mass_over_hbar * (1.0 / t + 1.0 / tau);
        let center = x * t / (t + tau);
        let bound = libm::sqrt(scale.mass_over_hbar / (2.0 * PI * t))
            * libm::sqrt(scale.mass_over_hbar / (2.0 * PI * tau))
            * 2.0
            * a;
        // Rounding of the kernel phases sets a noise level no tolerance can beat.
        let reach = libm::fmax(libm::fabs(x - (c - a)), libm::fabs(x - (c + a)));
        let far_edge = libm::fabs(c) + a;
        let largest_phase = scale.mass_over_hbar * (reach * reach / tau + far_edge * far_edge / t);
        let noise = 8.0 * f64::EPSILON * libm::fmax(largest_phase, 1.0) * bound;
        let rough = integrate_chirped(&integrand, c - a, c + a, center, curvature, libm::fmax(1e-6 * bound, noise))?;
        let target = libm::fmax(rel_tol * 0.1 * rough.value.norm(), noise);
        Ok(integrate_chirped(&integrand, c - a, c + a, center, curvature, target)?.value)
    }
}
