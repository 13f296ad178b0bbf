//! Probability interpretation of the slit amplitude: a root-Gaussian source
//! state is propagated to the slit, cut to the aperture, propagated to the
//! screen and normalized by the weight that passed the slit.
//!
//! The `σ → 0` limit of that conditional density is the single-slit
//! intensity divided by `∫₋ₐ⁺ᵃ |K₀(y,T;0,0)|² dy = 2a·(m/ħ)/(2πT)`.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{bail, ensure_finite, ensure_positive, Result};
use crate::fresnel::fresnel;
use crate::propagator::{kernel_1d, KinematicScale};
use crate::quadrature::{filon, integrate_chirped, simpson};
use crate::slit_model::{probability_one_slit, SlitGeometry, SlitMode};

/// Uniformly sampled complex wave function `ψ(start + i·step)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveGrid {
    pub start: f64,
    pub step: f64,
    pub values: Vec<Complex64>,
}

impl WaveGrid {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.start + self.step * i as f64
    }

    pub fn end(&self) -> f64 {
        self.x(self.len() - 1)
    }

    /// `∫ |ψ|² dx` by Simpson's rule.
    pub fn norm_sqr(&self) -> f64 {
        let density: Vec<f64> = self.values.iter().map(|v| v.norm_sqr()).collect();
        simpson(&density, self.step)
    }

    /// Mean and variance of the normalized density `|ψ|²`.
    pub fn moments(&self) -> (f64, f64) {
        let density: Vec<f64> = self.values.iter().map(|v| v.norm_sqr()).collect();
        let norm = simpson(&density, self.step);
        let first: Vec<f64> = density.iter().enumerate().map(|(i, d)| d * self.x(i)).collect();
        let mean = simpson(&first, self.step) / norm;
        let second: Vec<f64> = density
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let dx = self.x(i) - mean;
                d * dx * dx
            })
            .collect();
        (mean, simpson(&second, self.step) / norm)
    }

    /// Cubic Lagrange interpolation; zero outside the sampled range.
    pub fn interpolate(&self, x: f64) -> Complex64 {
        let n = self.len();
        let pos = (x - self.start) / self.step;
        if pos < -1e-9 || pos > (n - 1) as f64 + 1e-9 {
            return Complex64::new(0.0, 0.0);
        }
        let base = (libm::floor(pos) as isize - 1).clamp(0, n as isize - 4) as usize;
        let t = pos - base as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..4 {
            let mut w = 1.0;
            for k in 0..4 {
                if k != j {
                    w *= (t - k as f64) / (j as f64 - k as f64);
                }
            }
            acc += self.values[base + j] * w;
        }
        acc
    }
}

/// Symmetric sampling grid of `points` nodes on `[-half_width, half_width]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub half_width: f64,
    pub points: usize,
}

impl GridSpec {
    /// Grid covering `±coverage·σ` with `per_sigma` intervals per σ.
    pub fn for_sigma(sigma: f64, coverage: f64, per_sigma: usize) -> Self {
        let half = libm::ceil(coverage) as usize * per_sigma;
        Self { half_width: coverage * sigma, points: 2 * half + 1 }
    }
}

/// Sampled state descended from `φ_σ(x₀) = (2πσ²)^{-1/4} exp(-x₀²/4σ²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianRootState {
    pub sigma: f64,
    pub grid: WaveGrid,
}

/// Nodes per σ below which a root-Gaussian is considered under-sampled.
const MIN_NODES_PER_SIGMA: f64 = 4.0;

/// Root-Gaussian of width `σ` sampled on `spec`, rescaled so that its
/// Simpson norm is exactly one.
pub fn initial_state(sigma: f64, spec: GridSpec) -> Result<GaussianRootState> {
    ensure_positive("sigma", sigma)?;
    ensure_positive("half_width", spec.half_width)?;
    if spec.half_width < 6.0 * sigma {
        bail!(Coverage, "grid half-width {} is below 6σ = {}", spec.half_width, 6.0 * sigma);
    }
    if spec.points < 3 || spec.points.is_multiple_of(2) {
        bail!(Domain, "grid needs an odd number of at least 3 points, got {}", spec.points);
    }
    let step = 2.0 * spec.half_width / (spec.points - 1) as f64;
    if step * MIN_NODES_PER_SIGMA > sigma {
        bail!(Resolution, "grid step {step} does not resolve σ = {sigma}");
    }
    let values = (0..spec.points)
        .map(|i| Complex64::new(root_gaussian(-spec.half_width + step * i as f64, sigma), 0.0))
        .collect();
    let mut grid = WaveGrid { start: -spec.half_width, step, values };
    let scale = 1.0 / libm::sqrt(grid.norm_sqr());
    for v in &mut grid.values {
        *v *= scale;
    }
    Ok(GaussianRootState { sigma, grid })
}

fn root_gaussian(x: f64, sigma: f64) -> f64 {
    libm::pow(2.0 * PI * sigma * sigma, -0.25) * libm::exp(-x * x / (4.0 * sigma * sigma))
}

/// Free evolution over `dt` by product integration of the sampled state
/// against the exact kernel. The output grid keeps the input spacing and
/// widens with the spread of the packet.
pub fn evolve_free(state: &GaussianRootState, dt: f64, scale: &KinematicScale) -> Result<GaussianRootState> {
    ensure_positive("dt", dt)?;
    let src = &state.grid;
    if src.len() < 3 || src.len().is_multiple_of(2) {
        bail!(Domain, "state grid needs an odd number of at least 3 points");
    }
    let m = scale.mass_over_hbar;
    let spread = dt / (2.0 * m * state.sigma * state.sigma);
    let widening = libm::sqrt(1.0 + spread * spread);
    let center = 0.5 * (src.start + src.end());
    let half_width = 0.5 * (src.end() - src.start) * widening;
    let half_nodes = libm::ceil(half_width / src.step - 1e-6) as usize;
    const MAX_NODES: usize = 400_001;
    if 2 * half_nodes + 1 > MAX_NODES {
        bail!(Resolution, "evolved packet needs more than {MAX_NODES} nodes at this spacing");
    }
    let start = center - src.step * half_nodes as f64;
    let targets = (0..2 * half_nodes + 1).map(|i| start + src.step * i as f64);
    let values = propagate_samples(src, targets, dt, m);
    let grid = WaveGrid { start, step: src.step, values };

    let before = src.norm_sqr();
    let after = grid.norm_sqr();
    if libm::fabs(after - before) > 1e-3 * before {
        bail!(Resolution, "norm drifted from {before} to {after} during evolution");
    }
    Ok(GaussianRootState { sigma: state.sigma, grid })
}

/// Evaluates `∫ K₀(x, dt; x₀, 0) ψ(x₀) dx₀` at each target with ψ taken
/// piecewise quadratic on consecutive node pairs.
pub fn propagate_samples<I: Iterator<Item = f64>>(src: &WaveGrid, targets: I, dt: f64, mass_over_hbar: f64) -> Vec<Complex64> {
    let q = mass_over_hbar / (2.0 * dt);
    let prefactor = Complex64::from_polar(libm::sqrt(mass_over_hbar / (2.0 * PI * dt)), -FRAC_PI_4);
    let h = src.step;
    let pairs = (src.len() - 1) / 2;
    targets
        .map(|x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..pairs {
                let c = src.x(2 * j + 1);
                let (f0, f1, f2) = (src.values[2 * j], src.values[2 * j + 1], src.values[2 * j + 2]);
                let near = libm::fabs(c - x) - h;
                if near >= h && q * near * h >= ENDPOINT_PHASE {
                    // Exact moments would lose everything to phase rounding here.
                    let left = (f0 * -3.0 + f1 * 4.0 - f2) / (2.0 * h);
                    let right = (f0 - f1 * 4.0 + f2 * 3.0) / (2.0 * h);
                    acc += chirp_endpoint(q, c + h - x, f2, right) - chirp_endpoint(q, c - h - x, f0, left);
                    continue;
                }
                let (m0, m1, m2) = chirp_moments(q, c - x, h);
                let w0 = (m2 - m1 * h) / (2.0 * h * h);
                let w1 = (m0 * (h * h) - m2) / (h * h);
                let w2 = (m2 + m1 * h) / (2.0 * h * h);
                acc += f0 * w0 + f1 * w1 + f2 * w2;
            }
            prefactor * acc
        })
        .collect()
}

/// Phase change across a node pair beyond which its contribution is taken
/// from the endpoint expansion.
const ENDPOINT_PHASE: f64 = 1e6;

/// Antiderivative of `g(s) exp(i q s²)` to second order in `1/(q s)`, for
/// `g` with value `g` and slope `dg` at `s ≠ 0`.
fn chirp_endpoint(q: f64, s: f64, g: Complex64, dg: Complex64) -> Complex64 {
    let phase = Complex64::from_polar(1.0, q * s * s);
    phase * (g / Complex64::new(0.0, 2.0 * q * s) + (dg * s - g) / (4.0 * q * q * s * s))
}

/// `M_k = ∫_{-h}^{h} t^k exp(i q (t + d)²) dt` for `k = 0, 1, 2`.
fn chirp_moments(q: f64, d: f64, h: f64) -> (Complex64, Complex64, Complex64) {
    let near = libm::fmax(libm::fabs(d) - h, 0.0);
    let far = libm::fabs(d) + h;
    let variation = q * (far * far - near * near);
    if variation <= 3.0 {
        return gauss_moments(q, d, h);
    }
    // exact moments in s = t + d
    let (s1, s2) = (d - h, d + h);
    let scale = libm::sqrt(2.0 * q / PI);
    let (e1, e2) = match (fresnel(scale * s1), fresnel(scale * s2)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return gauss_moments(q, d, h),
    };
    let mu0 = Complex64::new(e2.c - e1.c, e2.s - e1.s) / scale;
    let mu1 = Complex64::from_polar(1.0, 0.5 * q * (s1 * s1 + s2 * s2)) * (libm::sin(0.5 * q * (s2 * s2 - s1 * s1)) / q);
    let ends = Complex64::from_polar(s2, q * s2 * s2) - Complex64::from_polar(s1, q * s1 * s1);
    let mu2 = (ends - mu0) / Complex64::new(0.0, 2.0 * q);
    (mu0, mu1 - mu0 * d, mu2 - mu1 * (2.0 * d) + mu0 * (d * d))
}

fn gauss_moments(q: f64, d: f64, h: f64) -> (Complex64, Complex64, Complex64) {
    let common = Complex64::from_polar(1.0, q * d * d);
    let mut m = [Complex64::new(0.0, 0.0); 3];
    for (t, w) in kronrod_nodes() {
        let t = t * h;
        let v = Complex64::from_polar(w * h, q * t * (2.0 * d + t));
        m[0] += v;
        m[1] += v * t;
        m[2] += v * (t * t);
    }
    (m[0] * common, m[1] * common, m[2] * common)
}

fn kronrod_nodes() -> impl Iterator<Item = (f64, f64)> {
    const X: [f64; 8] = [
        0.991_455_371_120_812_6,
        0.949_107_912_342_758_5,
        0.864_864_423_359_769_1,
        0.741_531_185_599_394_4,
        0.586_087_235_467_691_1,
        0.405_845_151_377_397_2,
        0.207_784_955_007_898_5,
        0.0,
    ];
    const W: [f64; 8] = [
        0.022_935_322_010_529_22,
        0.063_092_092_629_978_55,
        0.104_790_010_322_250_2,
        0.140_653_259_715_525_9,
        0.169_004_726_639_267_9,
        0.190_350_578_064_785_4,
        0.204_432_940_075_298_9,
        0.209_482_141_084_727_8,
    ];
    (0..15).map(|i| if i < 7 { (-X[i], W[i]) } else if i == 7 { (0.0, W[7]) } else { (X[14 - i], W[14 - i]) })
}

/// Restriction of a state to `[-a, a]` by interpolation onto a grid with
/// nodes exactly at `±a`. The result is not renormalized.
pub fn truncate_to_slit(state: &GaussianRootState, a: f64) -> Result<GaussianRootState> {
    ensure_positive("a", a)?;
    let src = &state.grid;
    if -a <= src.start && a >= src.end() {
        return Ok(state.clone());
    }
    let half_nodes = libm::ceil(a / src.step).max(1.0) as usize;
    let step = a / half_nodes as f64;
    let values = (0..2 * half_nodes + 1).map(|i| src.interpolate(-a + step * i as f64)).collect();
    Ok(GaussianRootState { sigma: state.sigma, grid: WaveGrid { start: -a, step, values } })
}

/// Conditional screen density for a root-Gaussian source of width σ,
/// precomputed at the slit so that many screen points can be evaluated.
#[derive(Debug, Clone)]
pub struct ConditionalDensity {
    slit: WaveGrid,
    /// `e^{i q_τ y²} φ_σ(y,T)` on the slit grid.
    chirped: Vec<Complex64>,
    q_screen: f64,
    weight: f64,
    half_width: f64,
}

/// Mass of a conditional density on `|x| ≤ x_max` plus the estimate for the rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScreenMass {
    pub window: f64,
    pub tail: f64,
}

impl ScreenMass {
    pub fn total(&self) -> f64 {
        self.window + self.tail
    }
}

impl ConditionalDensity {
    pub fn new(sigma: f64, g: &SlitGeometry, scale: &KinematicScale) -> Result<Self> {
        ensure_positive("sigma", sigma)?;
        check_consistent(g, scale)?;
        let a = g.half_width;
        let m = scale.mass_over_hbar;
        let (t, tau) = (scale.t_slit, scale.t_screen);
        let q_slit = m / (2.0 * t);
        let q_screen = m / (2.0 * tau);

        // Phase gradient of φ_σ(y,T) at the slit edge and of the screen chirp.
        let spread = t / (2.0 * m * sigma * sigma);
        let k_state = a * spread / (2.0 * sigma * sigma * (1.0 + spread * spread));
        let k_total = k_state + 2.0 * q_screen * a;
        let half_nodes = libm::fmax(200.0, libm::ceil(20.0 * a * k_total)) as usize;
        if half_nodes > 100_000 {
            bail!(Resolution, "slit field oscillates too fast to sample ({half_nodes} nodes per half)");
        }
        let step = a / half_nodes as f64;

        let reach = 10.0 * sigma;
        let mut values = Vec::with_capacity(2 * half_nodes + 1);
        for i in 0..=2 * half_nodes {
            let y = -a + step * i as f64;
            let integrand = |x0: f64| kernel_1d(y - x0, t, m) * root_gaussian(x0, sigma);
            let bound = libm::sqrt(m / (2.0 * PI * t)) * libm::pow(2.0 * PI * sigma * sigma, 0.25) * 2.0;
            let est = integrate_chirped(&integrand, -reach, reach, y, q_slit, 1e-13 * bound)?;
            values.push(est.value);
        }
        let slit = WaveGrid { start: -a, step, values };
        let weight = slit.norm_sqr();
        if !(weight > 0.0) {
            bail!(Domain, "no probability reaches the slit for σ = {sigma}");
        }
        let chirped = slit
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let y = slit.x(i);
                v * Complex64::from_polar(1.0, q_screen * y * y)
            })
            .collect();
        Ok(Self { slit, chirped, q_screen, weight, half_width: a })
    }

    /// `∫₋ₐ⁺ᵃ |φ_σ(y,T)|² dy`.
    pub fn slit_weight(&self) -> f64 {
        self.weight
    }

    pub fn slit_state(&self) -> &WaveGrid {
        &self.slit
    }

    /// `|Ψ_σ(x, T+τ)|² / ∫₋ₐ⁺ᵃ |φ_σ(y,T)|² dy` in 1/length.
    pub fn density(&self, x: f64) -> f64 {
        let q = self.q_screen;
        let transform = filon(&self.chirped, self.slit.start, self.slit.step, -2.0 * q * x);
        q / PI * transform.norm_sqr() / self.weight
    }

    /// Screen mass on `|x| ≤ x_max` by Simpson's rule, plus the
    /// large-|x| estimate `(|φ(a)|² + |φ(-a)|²)/(2π q_τ x_max)/Z` for the rest.
    pub fn screen_mass(&self, x_max: f64) -> Result<ScreenMass> {
        ensure_positive("x_max", x_max)?;
        let a = self.half_width;
        let period = PI / (2.0 * self.q_screen * a);
        let fine = libm::fmin(a / 50.0, period / 32.0);
        let coarse = libm::fmin(a / 8.0, period / 16.0);
        let near = libm::fmin(x_max, 50.0 * a);
        let mut window = 2.0 * self.simpson_between(0.0, near, fine);
        if x_max > near {
            window += 2.0 * self.simpson_between(near, x_max, coarse);
        }
        let edge = self.slit.values[0].norm_sqr() + self.slit.values[self.slit.len() - 1].norm_sqr();
        let tail = edge / (2.0 * PI * self.q_screen * x_max) / self.weight;
        Ok(ScreenMass { window, tail })
    }

    fn simpson_between(&self, lo: f64, hi: f64, max_step: f64) -> f64 {
        let intervals = 2 * (libm::ceil((hi - lo) / max_step / 2.0) as usize).max(1);
        let step = (hi - lo) / intervals as f64;
        let samples: Vec<f64> = (0..=intervals).map(|i| self.density(lo + step * i as f64)).collect();
        simpson(&samples, step)
    }
}

fn check_consistent(g: &SlitGeometry, scale: &KinematicScale) -> Result<()> {
    g.validate()?;
    if g.mode() != SlitMode::Single {
        bail!(Domain, "conditional normalization is defined for a single centred slit");
    }
    let m = scale.mass_over_hbar;
    let lhs = g.wavelength * (g.slit_to_screen + g.source_to_slit);
    let rhs = 2.0 * PI * scale.total_time() / m;
    let ratio_g = g.slit_to_screen / g.source_to_slit;
    let ratio_s = scale.t_screen / scale.t_slit;
    if libm::fabs(lhs - rhs) > 1e-9 * lhs || libm::fabs(ratio_g - ratio_s) > 1e-9 * ratio_g {
        bail!(Domain, "flight times do not match the geometry: λ(L+D) = {lhs}, 2π(T+τ)ħ/m = {rhs}");
    }
    Ok(())
}

/// Pointwise conditional density; builds the slit field on every call.
/// Use [`ConditionalDensity`] for repeated evaluation.
pub fn conditional_probability(x: f64, sigma: f64, g: &SlitGeometry, scale: &KinematicScale) -> Result<f64> {
    ensure_finite("x", x)?;
    Ok(ConditionalDensity::new(sigma, g, scale)?.density(x))
}

/// `σ → 0` density `P^{1Slit}(x) / (2a/(λD))` in 1/length.
pub fn conditional_probability_limit(x: f64, g: &SlitGeometry) -> Result<f64> {
    Ok(probability_one_slit(x, g)? * limit_factors(g).computed)
}

/// Constant multiplying `P^{1Slit}` in the `σ → 0` limit: the value
/// `λD/2a` computed from the slit-plane weight, and the `λL/2a` stated in
/// the source derivation. They agree only when `L = D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitFactors {
    pub computed: f64,
    pub stated: f64,
}

pub fn limit_factors(g: &SlitGeometry) -> LimitFactors {
    let two_a = 2.0 * g.half_width;
    LimitFactors {
        computed: g.wavelength * g.source_to_slit / two_a,
        stated: g.wavelength * g.slit_to_screen / two_a,
    }
}
