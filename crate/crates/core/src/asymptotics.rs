//! Regime classification and the asymptotic intensity formulas.
//!
//! Every approximation returns figure units `P·λ(L+D)` and refuses to
//! evaluate outside the region where it applies, unless called through
//! [`Approximation::evaluate_unguarded`]. Overall factors are those that
//! match the exact closed form.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{bail, ensure_finite, Result};
use crate::fringes;
use crate::slit_model::{DimensionlessParams, IntensityCurve};

/// Upper edge of the small-Fresnel-number regimes.
pub const SMALL: f64 = 0.1;
/// Lower edge of the large-Fresnel-number regimes.
pub const LARGE: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SingleSlitRegime {
    Fraunhofer,
    Intermediate,
    Fresnel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TwoSlitPhase {
    Mixed,
    Transitional,
    Separated,
}

/// Identifier of each asymptotic form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Approximation {
    FraunhoferEnvelope,
    FraunhoferFar,
    FresnelInside,
    FresnelOutside,
    TwoSlitMixed,
    TwoSlitOptical,
    TwoSlitSeparated,
}

impl Approximation {
    pub const ALL: [Approximation; 7] = [
        Approximation::FraunhoferEnvelope,
        Approximation::FraunhoferFar,
        Approximation::FresnelInside,
        Approximation::FresnelOutside,
        Approximation::TwoSlitMixed,
        Approximation::TwoSlitOptical,
        Approximation::TwoSlitSeparated,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Approximation::FraunhoferEnvelope => "fraunhofer_envelope",
            Approximation::FraunhoferFar => "fraunhofer_far",
            Approximation::FresnelInside => "fresnel_inside",
            Approximation::FresnelOutside => "fresnel_outside",
            Approximation::TwoSlitMixed => "two_slit_mixed",
            Approximation::TwoSlitOptical => "two_slit_optical",
            Approximation::TwoSlitSeparated => "two_slit_separated",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.id() == id)
    }

    /// Largest relative deviation from the exact curve accepted on the
    /// designated comparison set of this form.
    pub fn tolerance(self) -> f64 {
        match self {
            Approximation::FraunhoferEnvelope => 0.05,
            Approximation::FraunhoferFar => 0.05,
            Approximation::FresnelInside => 0.10,
            Approximation::FresnelOutside => 0.10,
            Approximation::TwoSlitMixed => 0.10,
            Approximation::TwoSlitOptical => 0.10,
            Approximation::TwoSlitSeparated => 0.10,
        }
    }

    /// Whether `u = x/a` lies inside the validity domain for `p`.
    pub fn check(self, u: f64, p: &DimensionlessParams) -> Result<()> {
        ensure_finite("x/a", u)?;
        let k = p.nf_a;
        let delta = 1.0 / libm::sqrt(k);
        let eta = p.eta;
        let ok = match self {
            Approximation::FraunhoferEnvelope => k <= SMALL && libm::fabs(u) / eta - 1.0 > delta,
            Approximation::FraunhoferFar => k <= SMALL && libm::fabs(u) >= 10.0 * eta,
            Approximation::FresnelInside => k >= LARGE && libm::fabs(u) < eta,
            Approximation::FresnelOutside => k >= LARGE && libm::fabs(u) > eta,
            Approximation::TwoSlitMixed => {
                let image = p.beta * eta;
                let clearance = eta * (1.0 + delta);
                k <= SMALL && libm::fabs(u - image) > clearance && libm::fabs(u + image) > clearance
            }
            Approximation::TwoSlitOptical => {
                k <= SMALL && p.nf * eta <= SMALL && libm::fabs(u) > 1.0 / k
            }
            Approximation::TwoSlitSeparated => k <= SMALL && p.nf * eta >= LARGE,
        };
        if !ok {
            bail!(
                Validity,
                "{} does not apply at x/a = {u} for N_F(a) = {k}, N_F·η = {}",
                self.id(),
                p.nf * eta
            );
        }
        Ok(())
    }

    /// Value at `u = x/a` after checking the validity domain.
    pub fn evaluate(self, u: f64, p: &DimensionlessParams) -> Result<f64> {
        self.check(u, p)?;
        Ok(self.evaluate_unguarded(u, p))
    }

    /// Value at `u = x/a` with no domain check, for plotting overlays.
    pub fn evaluate_unguarded(self, u: f64, p: &DimensionlessParams) -> f64 {
        let (k, eta) = (p.nf_a, p.eta);
        match self {
            Approximation::FraunhoferEnvelope | Approximation::FresnelOutside => {
                let w = u * u / (eta * eta) - 1.0;
                let s = libm::sin(PI * k * u);
                2.0 / (k * PI * PI * eta) * (1.0 / (w * w) + s * s / w)
            }
            Approximation::FraunhoferFar => {
                let s = libm::sin(PI * k * u);
                2.0 * eta * s * s / (k * PI * PI * u * u)
            }
            Approximation::FresnelInside => {
                let r = u / eta;
                let (s1, c1) = edge_term(k, eta, 1.0 - r);
                let (s2, c2) = edge_term(k, eta, 1.0 + r);
                let half = 0.5 * libm::sqrt(k);
                let re = half + s1 + s2;
                let im = half - c1 - c2;
                2.0 / k * (re * re + im * im)
            }
            Approximation::TwoSlitMixed => mixed_general(u, k, eta, p.beta),
            Approximation::TwoSlitOptical => {
                let s = libm::sin(PI * k * u);
                let c = libm::cos(PI * k * p.beta * u);
                8.0 * eta * s * s * c * c / (k * PI * PI * u * u)
            }
            Approximation::TwoSlitSeparated => {
                let image = if u >= 0.0 { p.beta * eta } else { -p.beta * eta };
                2.0 * eta / (k * PI * PI) * sinc_sq(PI * k, u - image)
            }
        }
    }
}

/// `sin(π/2 · kη t²) / (2π√η t)` and the matching cosine term.
fn edge_term(k: f64, eta: f64, t: f64) -> (f64, f64) {
    let phase = 0.5 * PI * k * eta * t * t;
    let denom = 2.0 * PI * libm::sqrt(eta) * t;
    (libm::sin(phase) / denom, libm::cos(phase) / denom)
}

/// `sin²(c t)/t²`, continuous through `t = 0`.
fn sinc_sq(c: f64, t: f64) -> f64 {
    let z = c * t;
    if libm::fabs(z) < 1e-6 {
        c * c * (1.0 - z * z / 3.0)
    } else {
        let s = libm::sin(z);
        s * s / (t * t)
    }
}

fn mixed_general(u: f64, k: f64, eta: f64, beta: f64) -> f64 {
    let nf = k * beta;
    let image = beta * eta;
    let direct = sinc_sq(PI * k, u - image) + sinc_sq(PI * k, u + image);
    let cross = libm::cos(2.0 * PI * (nf + k) * u) - libm::cos(2.0 * PI * nf * eta * (1.0 + u / eta))
        + libm::cos(2.0 * PI * (nf - k) * u)
        - libm::cos(2.0 * PI * nf * eta * (1.0 - u / eta));
    2.0 * eta / (k * PI * PI) * (direct - 0.5 * cross / (u * u - image * image))
}

fn to_u(x: f64, a: f64) -> Result<f64> {
    if !(a > 0.0) {
        bail!(Domain, "half-width must be positive, got {a}");
    }
    ensure_finite("x", x)?;
    Ok(x / a)
}

fn with_beta(p: &DimensionlessParams, a: f64, b: f64) -> Result<DimensionlessParams> {
    ensure_finite("b", b)?;
    if !(b > a) {
        bail!(Domain, "two-slit forms need b > a, got b = {b}, a = {a}");
    }
    let beta = b / a;
    Ok(DimensionlessParams { beta, nf: p.nf_a * beta, nf_b: p.nf_a * beta * beta, ..*p })
}

/// Single-slit Fraunhofer form with the near-lobe correction.
pub fn p1_fraunhofer_envelope(x: f64, p: &DimensionlessParams, a: f64) -> Result<f64> {
    Approximation::FraunhoferEnvelope.evaluate(to_u(x, a)?, p)
}

/// Single-slit far-field `sin²/x²` form.
pub fn p1_fraunhofer_far(x: f64, p: &DimensionlessParams, a: f64) -> Result<f64> {
    Approximation::FraunhoferFar.evaluate(to_u(x, a)?, p)
}

/// Large-Fresnel-number form inside the geometric shadow edge `|x| < aη`.
pub fn p1_fresnel_inside(x: f64, p: &DimensionlessParams, a: f64) -> Result<f64> {
    Approximation::FresnelInside.evaluate(to_u(x, a)?, p)
}

/// Large-Fresnel-number tail beyond `|x| > aη`.
pub fn p1_fresnel_outside(x: f64, p: &DimensionlessParams, a: f64) -> Result<f64> {
    Approximation::FresnelOutside.evaluate(to_u(x, a)?, p)
}

/// Selects the general four-term mixed-phase form or its optical reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MixedForm {
    #[default]
    General,
    Optical,
}

/// Two-slit intensity in the mixed phase.
pub fn p2_mixed(x: f64, p: &DimensionlessParams, a: f64, b: f64, form: MixedForm) -> Result<f64> {
    let q = with_beta(p, a, b)?;
    let approx = match form {
        MixedForm::General => Approximation::TwoSlitMixed,
        MixedForm::Optical => Approximation::TwoSlitOptical,
    };
    approx.evaluate(to_u(x, a)?, &q)
}

/// Two-slit intensity in the separated phase: the single-slit curve of the
/// image on the same side of the axis as `x`.
pub fn p2_separated(x: f64, p: &DimensionlessParams, a: f64, b: f64) -> Result<f64> {
    let q = with_beta(p, a, b)?;
    Approximation::TwoSlitSeparated.evaluate(to_u(x, a)?, &q)
}

/// Open interval of `x/a` (bounds may be infinite) with the form that applies there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityBand {
    pub lower: f64,
    pub upper: f64,
    pub approximation: Approximation,
}

impl ValidityBand {
    pub fn contains(&self, u: f64) -> bool {
        u > self.lower && u < self.upper
    }
}

/// The numbers the classification was based on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub nf_a: f64,
    pub nf_eta: f64,
    /// `√(λL/2)/a = 1/√N_F(a)`.
    pub edge_width_over_a: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport {
    pub single_slit_regime: SingleSlitRegime,
    pub two_slit_phase: Option<TwoSlitPhase>,
    pub validity_bands: Vec<ValidityBand>,
    pub thresholds: Thresholds,
}

impl RegimeReport {
    /// First band containing `u`, if any.
    pub fn approximation_at(&self, u: f64) -> Option<Approximation> {
        self.validity_bands.iter().find(|b| b.contains(u)).map(|b| b.approximation)
    }
}

pub fn classify(p: &DimensionlessParams, two_slit: bool) -> RegimeReport {
    let k = p.nf_a;
    let nf_eta = p.nf * p.eta;
    let delta = 1.0 / libm::sqrt(k);
    let eta = p.eta;
    let single = if k <= SMALL {
        SingleSlitRegime::Fraunhofer
    } else if k >= LARGE {
        SingleSlitRegime::Fresnel
    } else {
        SingleSlitRegime::Intermediate
    };
    let phase = two_slit.then_some({
        if nf_eta <= SMALL {
            TwoSlitPhase::Mixed
        } else if nf_eta >= LARGE {
            TwoSlitPhase::Separated
        } else {
            TwoSlitPhase::Transitional
        }
    });

    let mut half: Vec<(f64, f64, Approximation)> = Vec::new();
    let mut whole = None;
    match (phase, single) {
        (None, SingleSlitRegime::Fraunhofer) => {
            let envelope = eta * (1.0 + delta);
            let far = libm::fmax(10.0 * eta, envelope);
            if far > envelope {
                half.push((envelope, far, Approximation::FraunhoferEnvelope));
            }
            half.push((far, f64::INFINITY, Approximation::FraunhoferFar));
        }
        (None, SingleSlitRegime::Fresnel) => {
            whole = Some((eta - delta, Approximation::FresnelInside));
            half.push((eta + delta, f64::INFINITY, Approximation::FresnelOutside));
        }
        (Some(TwoSlitPhase::Mixed), SingleSlitRegime::Fraunhofer) => {
            let inner = p.beta * eta + eta * (1.0 + delta);
            let optical = libm::fmax(1.0 / k, inner);
            if optical > inner {
                half.push((inner, optical, Approximation::TwoSlitMixed));
            }
            half.push((optical, f64::INFINITY, Approximation::TwoSlitOptical));
        }
        (Some(TwoSlitPhase::Separated), SingleSlitRegime::Fraunhofer) => {
            whole = Some((f64::INFINITY, Approximation::TwoSlitSeparated));
        }
        _ => {}
    }

    let mut bands = Vec::new();
    for &(lo, hi, approx) in half.iter().rev() {
        bands.push(ValidityBand { lower: -hi, upper: -lo, approximation: approx });
    }
    if let Some((extent, approx)) = whole {
        if extent > 0.0 {
            bands.push(ValidityBand { lower: -extent, upper: extent, approximation: approx });
        }
    }
    for &(lo, hi, approx) in &half {
        bands.push(ValidityBand { lower: lo, upper: hi, approximation: approx });
    }

    RegimeReport {
        single_slit_regime: single,
        two_slit_phase: phase,
        validity_bands: bands,
        thresholds: Thresholds { nf_a: k, nf_eta, edge_width_over_a: delta },
    }
}

/// Samples per fringe below which visibility is refused.
pub const MIN_SAMPLES_PER_FRINGE: f64 = 8.0;

/// `(max − min)/(max + min)` of `p_total` over the local extrema inside
/// `[lo, hi]` (units of a). Extremal values are refined by parabolic
/// interpolation. Returns 0 when the window holds no interior extremum.
pub fn fringe_visibility(curve: &IntensityCurve, window: (f64, f64)) -> Result<f64> {
    let (lo, hi) = window;
    let grid = &curve.grid;
    if grid.len() < 3 {
        bail!(Resolution, "curve has only {} samples", grid.len());
    }
    if !(lo < hi) || lo < grid[0] || hi > grid[grid.len() - 1] {
        bail!(Coverage, "window [{lo}, {hi}] is not inside the grid [{}, {}]", grid[0], grid[grid.len() - 1]);
    }
    let start = grid.partition_point(|&u| u < lo);
    let end = grid.partition_point(|&u| u <= hi);
    let values = &curve.p_total;
    let inside = |i: usize| i > 0 && i + 1 < grid.len() && i >= start && i < end;

    let maxima: Vec<usize> = fringes::local_maxima(values).into_iter().filter(|&i| inside(i)).collect();
    let minima: Vec<usize> = fringes::local_minima(values).into_iter().filter(|&i| inside(i)).collect();
    if maxima.is_empty() || minima.is_empty() {
        return Ok(0.0);
    }
    let extrema = {
        let mut all: Vec<usize> = maxima.iter().chain(minima.iter()).copied().collect();
        all.sort_unstable();
        all
    };
    if extrema.len() >= 2 {
        let span = (extrema[extrema.len() - 1] - extrema[0]) as f64;
        // adjacent extrema are half a fringe apart
        let per_fringe = 2.0 * span / (extrema.len() - 1) as f64;
        if per_fringe < MIN_SAMPLES_PER_FRINGE {
            bail!(Resolution, "only {per_fringe:.1} samples per fringe in [{lo}, {hi}]");
        }
    }
    let top = maxima
        .iter()
        .map(|&i| fringes::parabolic_vertex(grid, values, i).1)
        .fold(f64::NEG_INFINITY, f64::max);
    let bottom = minima
        .iter()
        .map(|&i| fringes::parabolic_vertex(grid, values, i).1)
        .fold(f64::INFINITY, f64::min)
        .max(0.0);
    if top + bottom <= 0.0 {
        return Ok(0.0);
    }
    Ok(((top - bottom) / (top + bottom)).clamp(0.0, 1.0))
}
