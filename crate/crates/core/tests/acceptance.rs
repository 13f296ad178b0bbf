//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p slitpath-core --test acceptance`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use slitpath_core::asymptotics::{fringe_visibility, Approximation};
use slitpath_core::fixtures::{self, FigureFixture, FIG3A, FIG3B, FIG3C, FIG4A, FIG4C, SEPARATED};
use slitpath_core::fresnel::{fresnel, fresnel_oracle};
use slitpath_core::fringes::{golden_minimum, local_maxima, local_minima, mean_spacing, parabolic_vertex};
use slitpath_core::normalization::{conditional_probability_limit, ConditionalDensity};
use slitpath_core::propagator::{free_propagator_1d, slit_propagator, time_sliced_propagator, KinematicScale};
use slitpath_core::quadrature::{extrapolate_to_zero, integrate_chirped};
use slitpath_core::slit_model::{
    amplitude_one_slit, derive_params, oracle, scan_curve, CurveEvaluator, Sign, SlitGeometry, SlitMode, Units,
};

type Outcome = Result<(bool, String), slitpath_core::Error>;
type Criterion = (&'static str, fn() -> Outcome);

fn relative(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// Uniform grid in `u = x/a` together with the exact figure-unit curve.
fn sampled(fx: &FigureFixture, lo: f64, hi: f64, n: usize) -> Result<(CurveEvaluator, Vec<f64>, Vec<f64>), slitpath_core::Error> {
    let ev = CurveEvaluator::new(&fx.geometry()?, Units::Figure)?;
    let step = (hi - lo) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
    let ys = xs.iter().map(|&u| ev.sample(u).map(|s| s.p_total)).collect::<Result<Vec<_>, _>>()?;
    Ok((ev, xs, ys))
}

/// Local maxima of the exact curve refined by golden-section search.
fn refined_maxima(ev: &CurveEvaluator, xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let neg = |u: f64| -ev.sample(u).map(|s| s.p_total).unwrap_or(f64::NAN);
    local_maxima(ys).into_iter().map(|i| golden_minimum(neg, xs[i - 1], xs[i + 1], 1e-12).0).collect()
}

fn fresnel_kernel() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut odd = true;
    for i in 0..2000 {
        let u = -50.0 + 100.0 * (i as f64 + 0.5) / 2000.0;
        let got = fresnel(u)?;
        let want = fresnel_oracle(u, 1e-13)?;
        worst = worst.max((got.c - want.c).abs()).max((got.s - want.s).abs());
        let mirror = fresnel(-u)?;
        odd &= mirror.c.to_bits() == (-got.c).to_bits() && mirror.s.to_bits() == (-got.s).to_bits();
    }
    Ok((worst <= 1e-10 && odd, format!("max |Δ| = {worst:.2e} (≤ 1e-10), oddness bit-exact: {odd}")))
}

fn path_integral_consistency() -> Outcome {
    let scale = KinematicScale::free(2.5)?;
    let mut worst_sliced: f64 = 0.0;
    for &(x_f, x_i, t) in &[(1.3, -0.4, 0.9), (-2.0, 0.5, 3.0), (0.0, 0.0, 0.1)] {
        let closed = free_propagator_1d(x_f, t, x_i, 0.0, &scale)?;
        for n in 1..=64 {
            worst_sliced = worst_sliced.max(relative(time_sliced_propagator(n, x_f, x_i, t, &scale)?, closed));
        }
    }

    // Two slices integrated over the midpoint with a Gaussian regulator.
    let (x_f, x_i, t) = (0.8, -0.3, 1.0);
    let unit = KinematicScale::free(1.0)?;
    let closed = free_propagator_1d(x_f, t, x_i, 0.0, &unit)?;
    let mut samples = Vec::new();
    for &eps in &[1e-2, 1e-3, 1e-4] {
        let reach = (36.0f64 / eps).sqrt();
        let integrand = |w: f64| {
            let second = free_propagator_1d(x_f, t, w, 0.5 * t, &unit).unwrap();
            let first = free_propagator_1d(w, 0.5 * t, x_i, 0.0, &unit).unwrap();
            second * first * (-eps * w * w).exp()
        };
        let est = integrate_chirped(&integrand, -reach, reach, 0.5 * (x_f + x_i), 2.0 / t, 1e-11)?;
        samples.push((eps, est.value));
    }
    let extrapolated = relative(extrapolate_to_zero(&samples), closed);
    let pass = worst_sliced <= 1e-12 && extrapolated <= 1e-6;
    Ok((pass, format!("sliced n ≤ 64: {worst_sliced:.2e} (≤ 1e-12), two-slice quadrature: {extrapolated:.2e} (≤ 1e-6)")))
}

fn amplitude_vs_quadrature() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut label = String::new();
    for fx in &fixtures::FIGURES {
        let g = fx.geometry()?;
        let sides: &[Sign] = match g.mode() {
            SlitMode::Single => &[Sign::Plus],
            SlitMode::Double => &[Sign::Plus, Sign::Minus],
        };
        for u in oracle::probe_points(fx.x_max_over_a) {
            let x = u * g.half_width;
            for &side in sides {
                let closed = amplitude_one_slit(x, &g, side)?;
                let quad = oracle::amplitude_quadrature(x, &g, side, 1e-10)?;
                let r = relative(closed, quad);
                if r > worst {
                    worst = r;
                    label = format!("{} at x/a = {u}", fx.name);
                }
            }
        }
    }
    Ok((worst <= 1e-8, format!("max relative deviation {worst:.2e} (≤ 1e-8), worst {label}")))
}

fn fig3a_envelope_minima() -> Outcome {
    let (ev, xs, ys) = sampled(&FIG3A, 0.0, 1000.0, 20001)?;
    let f = |u: f64| ev.sample(u).map(|s| s.p_total).unwrap_or(f64::NAN);
    let minima: Vec<f64> = local_minima(&ys)
        .into_iter()
        .map(|i| golden_minimum(f, xs[i - 1], xs[i + 1], 1e-12).0)
        .filter(|&u| u > 50.0)
        .collect();
    let want = 1.0 / FIG3A.nf_a;
    let spacing = mean_spacing(&minima).unwrap_or(f64::NAN);
    let dev = (spacing / want - 1.0).abs();
    Ok((dev <= 0.02, format!("{} minima, spacing {spacing:.3}a vs {want}a, deviation {:.2}% (≤ 2%)", minima.len(), 100.0 * dev)))
}

fn fig3c_plateau() -> Outcome {
    let eta = FIG3C.eta;
    let (ev, _, ys) = sampled(&FIG3C, -0.5 * eta, 0.5 * eta, 4001)?;
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let outside = ev.sample(2.0 * eta)?.p_total.max(ev.sample(-2.0 * eta)?.p_total);
    let pass = (0.85..=1.15).contains(&mean) && outside < 0.05;
    Ok((pass, format!("plateau mean {mean:.4} (in [0.85, 1.15]), value at |x| = 2aη {outside:.2e} (< 0.05)")))
}

fn fig4a_spacings() -> Outcome {
    let (_, xs, ys) = sampled(&FIG4A, -5500.0, 5500.0, 44001)?;
    let peaks: Vec<(f64, f64)> = local_maxima(&ys).into_iter().map(|i| parabolic_vertex(&xs, &ys, i)).collect();
    let central: Vec<f64> = peaks.iter().map(|p| p.0).filter(|u| u.abs() <= 800.0).collect();
    let fringe = mean_spacing(&central).unwrap_or(f64::NAN);
    let fringe_want = 1.0 / (FIG4A.nf_a * FIG4A.beta);

    let (pos, height): (Vec<f64>, Vec<f64>) = peaks.iter().copied().unzip();
    let envelope_minima: Vec<f64> =
        local_minima(&height).into_iter().map(|i| parabolic_vertex(&pos, &height, i).0).collect();
    // The central lobe has no minimum, so each side is measured on its own.
    let (left, right): (Vec<f64>, Vec<f64>) = envelope_minima.iter().partition(|&&u| u < 0.0);
    let envelope = match (mean_spacing(&left), mean_spacing(&right)) {
        (Some(l), Some(r)) => 0.5 * (l + r),
        _ => f64::NAN,
    };
    let envelope_want = 1.0 / FIG4A.nf_a;
    let (d1, d2) = ((fringe / fringe_want - 1.0).abs(), (envelope / envelope_want - 1.0).abs());
    Ok((
        d1 <= 0.05 && d2 <= 0.05,
        format!(
            "fringes {fringe:.2}a vs {fringe_want:.2}a ({:.2}%), envelope minima {envelope:.1}a vs {envelope_want}a ({:.2}%), both ≤ 5%",
            100.0 * d1,
            100.0 * d2
        ),
    ))
}

fn fig4c_visibility() -> Outcome {
    let g = FIG4C.geometry()?;
    let curve = scan_curve(&g, -100.0, 100.0, 20001)?;
    let period = 1.0 / (FIG4C.nf_a * FIG4C.beta);
    let width = 4.0 * period;
    let mut quietest = (f64::INFINITY, 0.0);
    let mut start = 25.0;
    while start + width <= 75.0 {
        let v = fringe_visibility(&curve, (start, start + width))?;
        if v < quietest.0 {
            quietest = (v, start);
        }
        start += 0.25;
    }
    let lobe = FIG4C.beta * FIG4C.eta;
    let at_lobes = fringe_visibility(&curve, (lobe - 0.5 * width, lobe + 0.5 * width))?
        .min(fringe_visibility(&curve, (-lobe - 0.5 * width, -lobe + 0.5 * width))?);
    let pass = quietest.0 < 0.1 && at_lobes > 0.5;
    Ok((
        pass,
        format!(
            "min visibility in 25 ≤ x/a ≤ 75: {:.3} at [{:.2}, {:.2}] (< 0.1); at lobe centres ±{lobe}: {at_lobes:.3} (> 0.5)",
            quietest.0,
            quietest.1,
            quietest.1 + width
        ),
    ))
}

fn locked_tolerances() -> Result<BTreeMap<String, (String, f64)>, String> {
    let text = include_str!("fixtures/asymptotic_tolerances.toml");
    let table: toml::Table = text.parse().map_err(|e| format!("{e}"))?;
    let mut out = BTreeMap::new();
    for (id, entry) in table {
        let fixture = entry.get("fixture").and_then(|v| v.as_str()).ok_or(format!("{id}: fixture"))?;
        let tol = entry.get("tolerance").and_then(|v| v.as_float()).ok_or(format!("{id}: tolerance"))?;
        out.insert(id, (fixture.to_string(), tol));
    }
    Ok(out)
}

/// Largest relative deviation of `approx` from the exact curve on its
/// comparison set, together with the number of points compared.
fn asymptotic_deviation(approx: Approximation, fx: &FigureFixture) -> Result<(f64, usize), slitpath_core::Error> {
    let worst = |points: &[f64], ev: &CurveEvaluator| -> Result<(f64, usize), slitpath_core::Error> {
        let mut w: f64 = 0.0;
        for &u in points {
            let exact = ev.sample(u)?.p_total;
            w = w.max((approx.evaluate(u, ev.params())? / exact - 1.0).abs());
        }
        Ok((w, points.len()))
    };
    match approx {
        Approximation::FraunhoferEnvelope => {
            let (ev, xs, _) = sampled(fx, 0.0, fx.x_max_over_a, 20001)?;
            let set: Vec<f64> = xs.into_iter().filter(|&u| approx.check(u, ev.params()).is_ok()).collect();
            worst(&set, &ev)
        }
        Approximation::FraunhoferFar | Approximation::TwoSlitMixed => {
            let (ev, xs, ys) = sampled(fx, 0.0, fx.x_max_over_a, 40001)?;
            let set: Vec<f64> =
                refined_maxima(&ev, &xs, &ys).into_iter().filter(|&u| approx.check(u, ev.params()).is_ok()).collect();
            worst(&set, &ev)
        }
        Approximation::TwoSlitOptical => {
            let (ev, xs, ys) = sampled(fx, 0.0, fx.x_max_over_a, 40001)?;
            let p = *ev.params();
            let envelope = |u: f64| 8.0 * p.eta / (p.nf_a * PI * PI * u * u);
            let set: Vec<f64> = refined_maxima(&ev, &xs, &ys)
                .into_iter()
                .filter(|&u| approx.check(u, &p).is_ok())
                .filter(|&u| ev.sample(u).map(|s| s.p_total >= 0.05 * envelope(u)).unwrap_or(false))
                .collect();
            worst(&set, &ev)
        }
        Approximation::FresnelInside | Approximation::FresnelOutside => {
            // Both Fresnel arguments at least 2 in magnitude.
            let (ev, xs, _) = sampled(fx, -fx.x_max_over_a, fx.x_max_over_a, 16001)?;
            let p = *ev.params();
            let margin = 2.0 / (p.nf_a * p.eta).sqrt();
            let set: Vec<f64> = xs
                .into_iter()
                .filter(|&u| (1.0 - u.abs() / p.eta).abs() >= margin)
                .filter(|&u| approx.check(u, &p).is_ok())
                .collect();
            worst(&set, &ev)
        }
        Approximation::TwoSlitSeparated => {
            // Main lobe of each image, |x ∓ bη| ≤ λL/4a.
            let ev = CurveEvaluator::new(&fx.geometry()?, Units::Figure)?;
            let p = *ev.params();
            let half = 0.5 / p.nf_a;
            let image = p.beta * p.eta;
            let set: Vec<f64> = (0..=2000)
                .flat_map(|i| {
                    let d = -half + 2.0 * half * i as f64 / 2000.0;
                    [image + d, -image + d]
                })
                .collect();
            worst(&set, &ev)
        }
    }
}

fn separated_peaks() -> Result<f64, slitpath_core::Error> {
    let ev = CurveEvaluator::new(&SEPARATED.geometry()?, Units::Figure)?;
    let p = *ev.params();
    let image = p.beta * p.eta;
    let half = 0.5 / p.nf_a;
    let mut worst: f64 = 0.0;
    for centre in [image, -image] {
        let neg = |u: f64| -ev.sample(u).map(|s| s.p_total).unwrap_or(f64::NAN);
        let (peak, _) = golden_minimum(neg, centre - half, centre + half, 1e-12);
        worst = worst.max((peak - centre).abs());
    }
    Ok(worst / half)
}

fn asymptotic_agreement() -> Outcome {
    let locked = match locked_tolerances() {
        Ok(t) => t,
        Err(e) => return Ok((false, format!("tolerance fixture unreadable: {e}"))),
    };
    let mut pass = locked.len() == Approximation::ALL.len();
    let mut parts = Vec::new();
    for approx in Approximation::ALL {
        let Some((name, tol)) = locked.get(approx.id()) else {
            pass = false;
            parts.push(format!("{}: no locked tolerance", approx.id()));
            continue;
        };
        if *tol != approx.tolerance() {
            pass = false;
            parts.push(format!("{}: locked {tol} ≠ declared {}", approx.id(), approx.tolerance()));
            continue;
        }
        let fx = fixtures::lookup(name).expect("fixture named in the tolerance file");
        let (dev, n) = asymptotic_deviation(approx, &fx)?;
        pass &= n > 0 && dev <= *tol;
        parts.push(format!("{} {:.2}%/{:.0}% ({n} pts)", approx.id(), 100.0 * dev, 100.0 * tol));
    }
    let peak = separated_peaks()?;
    pass &= peak <= 1.0;
    parts.push(format!("separated peak offset {:.3}·λL/4a", peak));
    Ok((pass, parts.join(", ")))
}

fn decomposition_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut schwarz = true;
    for fx in &fixtures::FIGURES {
        let g = fx.geometry()?;
        let span = fx.x_max_over_a * g.half_width;
        let curve = scan_curve(&g, -span, span, 4001)?;
        let scale = g.figure_scale();
        for i in 0..curve.len() {
            let x = curve.grid[i] * g.half_width;
            let total = match g.mode() {
                SlitMode::Single => amplitude_one_slit(x, &g, Sign::Plus)?.norm_sqr(),
                SlitMode::Double => (amplitude_one_slit(x, &g, Sign::Plus)? + amplitude_one_slit(x, &g, Sign::Minus)?).norm_sqr(),
            } * scale;
            let (p1, p2, i12) = (curve.p1[i], curve.p2[i], curve.i12[i]);
            let sum = p1 + p2 + i12;
            let reference = p1 + p2;
            worst = worst.max((total - sum).abs() / reference).max((curve.p_total[i] - sum).abs() / reference);
            schwarz &= i12.abs() <= 2.0 * (p1 * p2).sqrt() * (1.0 + 1e-12);
        }
    }
    Ok((worst <= 1e-12 && schwarz, format!("max |p_total − Σ|/(p1+p2) = {worst:.2e} (≤ 1e-12), |i12| ≤ 2√(p1p2): {schwarz}")))
}

fn normalization() -> Outcome {
    let g = FIG3B.geometry()?;
    let scale = g.kinematic_scale(1.0)?;
    let a = g.half_width;
    let mut masses = Vec::new();
    for sigma in [a / 10.0, a / 100.0] {
        let d = ConditionalDensity::new(sigma, &g, &scale)?;
        masses.push(d.screen_mass(1e4 * a)?.total());
    }
    let mass_dev = masses.iter().map(|m| (m - 1.0).abs()).fold(0.0, f64::max);

    let grid: Vec<f64> = (0..=2000).map(|i| (-50.0 + 0.05 * i as f64) * a).collect();
    let limit = grid.iter().map(|&x| conditional_probability_limit(x, &g)).collect::<Result<Vec<_>, _>>()?;
    let mut distances = Vec::new();
    for sigma in [a / 10.0, a / 30.0, a / 100.0] {
        let d = ConditionalDensity::new(sigma, &g, &scale)?;
        let dist = grid.iter().zip(&limit).map(|(&x, &l)| (d.density(x) - l).abs()).fold(0.0, f64::max);
        distances.push(dist);
    }
    let monotone = distances.windows(2).all(|w| w[1] < w[0]);
    Ok((
        mass_dev <= 1e-4 && monotone,
        format!(
            "mass {:.6} / {:.6} (±1e-4), max-norm distance to limit {:.2e} > {:.2e} > {:.2e}",
            masses[0], masses[1], distances[0], distances[1], distances[2]
        ),
    ))
}

fn scaling_invariance() -> Outcome {
    let mut worst: f64 = 0.0;
    for fx in [FIG3B, FIG4C] {
        let base = fx.geometry()?;
        let reference = derive_params(&base)?;
        let probe: Vec<f64> = (0..100).map(|i| -fx.x_max_over_a + 2.0 * fx.x_max_over_a * (i as f64 + 0.37) / 100.0).collect();
        let density = |g: &SlitGeometry, x: f64| -> Result<f64, slitpath_core::Error> {
            let amp = match g.mode() {
                SlitMode::Single => amplitude_one_slit(x, g, Sign::Plus)?,
                SlitMode::Double => amplitude_one_slit(x, g, Sign::Plus)? + amplitude_one_slit(x, g, Sign::Minus)?,
            };
            Ok(amp.norm_sqr() * g.figure_scale())
        };
        let bound = |g: &SlitGeometry, x: f64| -> Result<f64, slitpath_core::Error> {
            let mut b = amplitude_one_slit(x, g, Sign::Plus)?.norm_sqr();
            if g.mode() == SlitMode::Double {
                b += amplitude_one_slit(x, g, Sign::Minus)?.norm_sqr();
            }
            Ok(2.0 * b * g.figure_scale())
        };
        for s in [0.1, 3.7, 1e3] {
            let g = SlitGeometry {
                half_width: s * base.half_width,
                center: s * base.center,
                wavelength: s * s * base.wavelength,
                ..base
            };
            let p = derive_params(&g)?;
            for (x, y) in [(p.nf_a, reference.nf_a), (p.eta, reference.eta), (p.beta, reference.beta), (p.nf, reference.nf)] {
                worst = worst.max((x - y).abs() / y.abs().max(f64::MIN_POSITIVE));
            }
            for &u in &probe {
                let want = density(&base, u * base.half_width)?;
                let got = density(&g, u * g.half_width)?;
                worst = worst.max((got - want).abs() / bound(&base, u * base.half_width)?);
            }
        }
    }
    Ok((worst <= 1e-12, format!("max relative change {worst:.2e} (≤ 1e-12) for s ∈ {{0.1, 3.7, 1e3}}")))
}

fn wide_slit_limit() -> Outcome {
    let g = SlitGeometry::from_dimensionless(1e4, 2.0, 0.0)?;
    let scale = g.kinematic_scale(1.0)?;
    let free = free_propagator_1d(0.0, scale.total_time(), 0.0, 0.0, &scale)?;
    let slit = slit_propagator(0.0, &g, &scale)?;
    let dev = relative(slit, free);
    let modulus = (slit.norm_sqr() / free.norm_sqr() - 1.0).abs();
    Ok((dev <= 1e-3, format!("|A − K₀|/|K₀| = {dev:.2e} (≤ 1e-3), ||A|²/|K₀|² − 1| = {modulus:.2e}, at N_F(a) = 1e4")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("fresnel kernel", fresnel_kernel),
        ("path-integral consistency", path_integral_consistency),
        ("closed form vs quadrature", amplitude_vs_quadrature),
        ("fig3a envelope minima", fig3a_envelope_minima),
        ("fig3c plateau", fig3c_plateau),
        ("fig4a spacings", fig4a_spacings),
        ("fig4c visibility", fig4c_visibility),
        ("asymptotic agreement", asymptotic_agreement),
        ("decomposition identity", decomposition_identity),
        ("normalization", normalization),
        ("scaling invariance", scaling_invariance),
        ("wide-slit limit", wide_slit_limit),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match check() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!("{verdict} {:>2} {name}: {detail} [{:.1}s]", n + 1, start.elapsed().as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
