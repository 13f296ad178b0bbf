//! Fresnel integrals `C(u) = ∫₀ᵘ cos(πt²/2) dt` and `S(u) = ∫₀ᵘ sin(πt²/2) dt`.
//!
//! A power series covers `|u| ≤ 1.5` and a continued fraction for the
//! complementary error function covers the rest. Both branches are evaluated
//! on `|u|` and the sign is reapplied, so oddness holds bit for bit.

use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{bail, ensure_finite, Result};
use crate::quadrature;

/// `C(u)` and `S(u)` evaluated together.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelPair {
    pub c: f64,
    pub s: f64,
}

impl FresnelPair {
    /// `C + iS`.
    pub fn as_complex(self) -> Complex64 {
        Complex64::new(self.c, self.s)
    }
}

const SERIES_LIMIT: f64 = 1.5;
const EPS: f64 = 1e-16;
const MAX_TERMS: usize = 200;

/// Evaluates `C(u)` and `S(u)` to about 1e-15 absolute.
pub fn fresnel(u: f64) -> Result<FresnelPair> {
    ensure_finite("u", u)?;
    let x = libm::fabs(u);
    let pair = if x == 0.0 {
        FresnelPair { c: 0.0, s: 0.0 }
    } else if x <= SERIES_LIMIT {
        series(x)
    } else if x > 1e150 {
        FresnelPair { c: 0.5, s: 0.5 }
    } else {
        continued_fraction(x)?
    };
    Ok(if u < 0.0 { FresnelPair { c: -pair.c, s: -pair.s } } else { pair })
}

pub fn fresnel_c(u: f64) -> Result<f64> {
    fresnel(u).map(|p| p.c)
}

pub fn fresnel_s(u: f64) -> Result<f64> {
    fresnel(u).map(|p| p.s)
}

/// `(cos(πu²/2), sin(πu²/2))` with the argument reduced exactly modulo 2π.
pub fn half_pi_square_phase(u: f64) -> (f64, f64) {
    let hi = u * u;
    let lo = libm::fma(u, u, -hi);
    // πu²/2 modulo 2π is (π/2)·(u² mod 4); fmod is exact.
    let reduced = libm::fmod(hi, 4.0) + lo;
    let angle = FRAC_PI_2 * reduced;
    (libm::cos(angle), libm::sin(angle))
}

fn series(x: f64) -> FresnelPair {
    let t = FRAC_PI_2 * x * x;
    let mut c = 0.0;
    let mut s = 0.0;
    // term_k = t^k / k!
    let mut term = 1.0;
    for k in 0..MAX_TERMS {
        if k > 0 {
            term *= t / k as f64;
        }
        let contrib = term / (2 * k + 1) as f64;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            c += sign * contrib;
        } else {
            s += sign * contrib;
        }
        if contrib < EPS * libm::fmax(libm::fabs(c), libm::fabs(s)) && k > 2 {
            break;
        }
    }
    FresnelPair { c: x * c, s: x * s }
}

fn continued_fraction(x: f64) -> Result<FresnelPair> {
    let pix2 = PI * x * x;
    let mut b = Complex64::new(1.0, -pix2);
    let mut cc = Complex64::new(1e300, 0.0);
    let mut d = Complex64::new(1.0, 0.0) / b;
    let mut h = d;
    let mut n = -1.0;
    let mut converged = false;
    for _ in 2..MAX_TERMS {
        n += 2.0;
        let a = -n * (n + 1.0);
        b += Complex64::new(4.0, 0.0);
        d = Complex64::new(1.0, 0.0) / (d * a + b);
        cc = b + Complex64::new(a, 0.0) / cc;
        let del = cc * d;
        h *= del;
        // `del` settles within rounding of 1, which can sit just above ε
        if libm::fabs(del.re - 1.0) + libm::fabs(del.im) <= 4.0 * f64::EPSILON {
            converged = true;
            break;
        }
    }
    if !converged {
        bail!(Convergence, "Fresnel continued fraction did not converge at u = {x}");
    }
    h *= Complex64::new(x, -x);
    let (cos, sin) = half_pi_square_phase(x);
    let value = Complex64::new(0.5, 0.5) * (Complex64::new(1.0, 0.0) - Complex64::new(cos, sin) * h);
    Ok(FresnelPair { c: value.re, s: value.im })
}

/// Leading large-argument form `C ≈ ±1/2 + sin(πu²/2)/(πu)`,
/// `S ≈ ±1/2 − cos(πu²/2)/(πu)`, valid for `|u| ≥ 1`.
pub fn fresnel_asymptotic(u: f64) -> Result<FresnelPair> {
    ensure_finite("u", u)?;
    if libm::fabs(u) < 1.0 {
        bail!(Validity, "asymptotic Fresnel form requires |u| >= 1, got {u}");
    }
    let half = if u > 0.0 { 0.5 } else { -0.5 };
    let (cos, sin) = half_pi_square_phase(u);
    Ok(FresnelPair {
        c: half + sin / (PI * u),
        s: half - cos / (PI * u),
    })
}

/// Direct adaptive quadrature of the defining integrals, split at the zeros
/// of the integrand phase. Independent of the series and continued fraction.
pub fn fresnel_oracle(u: f64, tol: f64) -> Result<FresnelPair> {
    ensure_finite("u", u)?;
    let x = libm::fabs(u);
    let integrand = |t: f64| {
        let (c, s) = half_pi_square_phase(t);
        Complex64::new(c, s)
    };
    let est = quadrature::integrate_chirped(&integrand, 0.0, x, 0.0, FRAC_PI_2, tol)?;
    let v = if u < 0.0 { -est.value } else { est.value };
    Ok(FresnelPair { c: v.re, s: v.im })
}
