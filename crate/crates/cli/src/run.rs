//! Evaluates a scenario and writes its artifacts.
//!
//! All artifacts are rendered in memory first and only then written, each
//! through a temporary file renamed into place. A failed run leaves no files
//! behind.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use slitpath_core::asymptotics::{classify, Approximation, RegimeReport};
use slitpath_core::normalization::{conditional_probability_limit, ConditionalDensity};
use slitpath_core::slit_model::{
    amplitude_one_slit, derive_params, oracle, scan_grid, CurveEvaluator, Sign, SlitGeometry, SlitMode,
    TwoSlitSample, Units,
};

use crate::scenario::{Mode, Normalization, Output, Scenario};

pub const INTENSITY_CSV: &str = "intensity.csv";
pub const ASYMPTOTIC_CSV: &str = "asymptotic.csv";
pub const SUMMARY_JSON: &str = "summary.json";
pub const PLOT_SCRIPT: &str = "plot.gp";

/// Largest closed-form vs quadrature deviation accepted by the oracle check.
pub const ORACLE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Channel {
    PTotal,
    P1,
    P2,
    I12,
}

impl Channel {
    pub const ALL: [Channel; 4] = [Channel::PTotal, Channel::P1, Channel::P2, Channel::I12];

    pub fn name(self) -> &'static str {
        match self {
            Channel::PTotal => "p_total",
            Channel::P1 => "p1",
            Channel::P2 => "p2",
            Channel::I12 => "i12",
        }
    }

    fn pick(self, s: &TwoSlitSample) -> f64 {
        match self {
            Channel::PTotal => s.p_total,
            Channel::P1 => s.p1,
            Channel::P2 => s.p2,
            Channel::I12 => s.i12,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Channels to write, in any order; `None` picks them from the scenario outputs.
    pub channels: Option<Vec<Channel>>,
    /// Adds the oracle check regardless of the scenario outputs.
    pub oracle_check: bool,
    /// Worker threads; `None` uses rayon's default.
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeResult {
    pub x_over_a: f64,
    pub slit: &'static str,
    pub relative_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSummary {
    pub probes: Vec<ProbeResult>,
    pub max_relative_deviation: f64,
    pub tolerance: f64,
    pub within_tolerance: bool,
}

/// One rendered file.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file_name: &'static str,
    pub contents: String,
}

#[derive(Debug, Clone)]
pub struct Rendered {
    pub artifacts: Vec<Artifact>,
    pub oracle: Option<OracleSummary>,
}

/// Evaluates `scenario` and writes its artifacts into `out_dir`.
pub fn run(scenario: &Scenario, options: &RunOptions, out_dir: &Path) -> Result<Rendered> {
    let rendered = render(scenario, options)?;
    fs::create_dir_all(out_dir).with_context(|| format!("cannot create {}", out_dir.display()))?;
    write_all(out_dir, &rendered.artifacts)?;
    Ok(rendered)
}

/// Evaluates `scenario` without touching the file system.
pub fn render(scenario: &Scenario, options: &RunOptions) -> Result<Rendered> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = options.threads {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().context("cannot start worker threads")?;
    pool.install(|| render_in_pool(scenario, options))
}

fn render_in_pool(scenario: &Scenario, options: &RunOptions) -> Result<Rendered> {
    let g = scenario.slit_geometry();
    let channels = select_channels(scenario, options)?;
    let grid = scan_grid(scenario.grid.x_min_over_a, scenario.grid.x_max_over_a, scenario.grid.n_points)?;
    let params = derive_params(&g)?;
    let report = classify(&params, g.mode() == SlitMode::Double);

    let mut artifacts = Vec::new();
    let mut files = Vec::new();
    let curves = scenario.wants(Output::Exact) || scenario.wants(Output::Decomposition);
    if curves {
        let samples = evaluate_curve(scenario, &g, &grid)?;
        artifacts.push(Artifact { file_name: INTENSITY_CSV, contents: intensity_csv(&grid, &samples, &channels) });
        files.push(INTENSITY_CSV);
    }
    if scenario.wants(Output::Asymptotic) {
        let overlay = evaluate_asymptotic(scenario, &g, &grid, &report)?;
        artifacts.push(Artifact { file_name: ASYMPTOTIC_CSV, contents: asymptotic_csv(&grid, &overlay) });
        files.push(ASYMPTOTIC_CSV);
    }
    let oracle = if options.oracle_check || scenario.wants(Output::OracleCheck) {
        Some(oracle_check(scenario, &g)?)
    } else {
        None
    };
    if curves || scenario.wants(Output::Asymptotic) {
        artifacts.push(Artifact {
            file_name: PLOT_SCRIPT,
            contents: plot_script(scenario, &channels, curves, scenario.wants(Output::Asymptotic)),
        });
        files.push(PLOT_SCRIPT);
    }
    files.push(SUMMARY_JSON);
    let summary = Summary::new(scenario, &g, &channels, &files, &report, oracle.as_ref());
    let mut json = serde_json::to_string_pretty(&summary)?;
    json.push('\n');
    artifacts.push(Artifact { file_name: SUMMARY_JSON, contents: json });
    Ok(Rendered { artifacts, oracle })
}

fn select_channels(scenario: &Scenario, options: &RunOptions) -> Result<Vec<Channel>> {
    let mut channels = match &options.channels {
        Some(c) if c.is_empty() => bail!("--channels needs at least one channel"),
        Some(c) => c.clone(),
        None if scenario.wants(Output::Decomposition) => Channel::ALL.to_vec(),
        None => vec![Channel::PTotal],
    };
    channels.sort_unstable();
    channels.dedup();
    if scenario.mode == Mode::OneSlit {
        if let Some(c) = channels.iter().find(|c| matches!(c, Channel::P2 | Channel::I12)) {
            bail!("channel {} needs a two_slit scenario", c.name());
        }
    }
    Ok(channels)
}

fn evaluate_curve(scenario: &Scenario, g: &SlitGeometry, grid: &[f64]) -> Result<Vec<TwoSlitSample>> {
    let a = g.half_width;
    let lift = |p: f64| TwoSlitSample { p_total: p, p1: p, p2: 0.0, i12: 0.0 };
    let samples = match scenario.normalization {
        Normalization::FigureUnits | Normalization::RawDensity => {
            let units = if scenario.normalization == Normalization::FigureUnits { Units::Figure } else { Units::Raw };
            let ev = CurveEvaluator::new(g, units)?;
            grid.par_iter().map(|&u| ev.sample(u)).collect::<slitpath_core::Result<Vec<_>>>()?
        }
        Normalization::Conditional => match scenario.sigma_over_a {
            Some(s) => {
                let density = ConditionalDensity::new(s * a, g, &g.kinematic_scale(1.0)?)?;
                grid.par_iter().map(|&u| lift(density.density(u * a) * a)).collect()
            }
            None => grid
                .par_iter()
                .map(|&u| conditional_probability_limit(u * a, g).map(|p| lift(p * a)))
                .collect::<slitpath_core::Result<Vec<_>>>()?,
        },
    };
    Ok(samples)
}

fn evaluate_asymptotic(
    scenario: &Scenario,
    g: &SlitGeometry,
    grid: &[f64],
    report: &RegimeReport,
) -> Result<Vec<Option<(Approximation, f64)>>> {
    let params = derive_params(g)?;
    let factor = match scenario.normalization {
        Normalization::RawDensity => 1.0 / g.figure_scale(),
        _ => 1.0,
    };
    let overlay = grid
        .par_iter()
        .map(|&u| match report.approximation_at(u) {
            Some(approx) => approx.evaluate(u, &params).map(|v| Some((approx, v * factor))),
            None => Ok(None),
        })
        .collect::<slitpath_core::Result<Vec<_>>>()?;
    Ok(overlay)
}

fn oracle_check(scenario: &Scenario, g: &SlitGeometry) -> Result<OracleSummary> {
    let reach = scenario.grid.x_min_over_a.abs().max(scenario.grid.x_max_over_a.abs());
    let sides: &[(Sign, &'static str)] = match g.mode() {
        SlitMode::Single => &[(Sign::Plus, "centre")],
        SlitMode::Double => &[(Sign::Plus, "upper"), (Sign::Minus, "lower")],
    };
    let jobs: Vec<(f64, Sign, &'static str)> = oracle::probe_points(reach)
        .into_iter()
        .flat_map(|u| sides.iter().map(move |&(s, n)| (u, s, n)))
        .collect();
    let probes = jobs
        .par_iter()
        .map(|&(u, side, slit)| {
            let x = u * g.half_width;
            let closed = amplitude_one_slit(x, g, side)?;
            let quad = oracle::amplitude_quadrature(x, g, side, 1e-10)?;
            Ok(ProbeResult { x_over_a: u, slit, relative_deviation: (closed - quad).norm() / quad.norm() })
        })
        .collect::<slitpath_core::Result<Vec<_>>>()?;
    let max = probes.iter().map(|p| p.relative_deviation).fold(0.0, f64::max);
    Ok(OracleSummary {
        probes,
        max_relative_deviation: max,
        tolerance: ORACLE_TOLERANCE,
        within_tolerance: max <= ORACLE_TOLERANCE,
    })
}

fn intensity_csv(grid: &[f64], samples: &[TwoSlitSample], channels: &[Channel]) -> String {
    let mut out = String::from("x_over_a");
    for c in channels {
        out.push(',');
        out.push_str(c.name());
    }
    out.push('\n');
    for (u, s) in grid.iter().zip(samples) {
        write!(out, "{u:.16e}").unwrap();
        for c in channels {
            write!(out, ",{:.16e}", c.pick(s)).unwrap();
        }
        out.push('\n');
    }
    out
}

fn asymptotic_csv(grid: &[f64], overlay: &[Option<(Approximation, f64)>]) -> String {
    let mut out = String::from("x_over_a,approximation,p_asymptotic\n");
    for (u, v) in grid.iter().zip(overlay) {
        match v {
            Some((approx, value)) => writeln!(out, "{u:.16e},{},{value:.16e}", approx.id()).unwrap(),
            None => writeln!(out, "{u:.16e},none,nan").unwrap(),
        }
    }
    out
}

fn plot_script(scenario: &Scenario, channels: &[Channel], curves: bool, asymptotic: bool) -> String {
    let ylabel = match scenario.normalization {
        Normalization::FigureUnits => "P λ(L+D)",
        Normalization::RawDensity => "P",
        Normalization::Conditional => "a · P(x | slit)",
    };
    let mut plots = Vec::new();
    if curves {
        for (i, c) in channels.iter().enumerate() {
            plots.push(format!("'{INTENSITY_CSV}' using 1:{} with lines title '{}'", i + 2, c.name()));
        }
    }
    if asymptotic {
        plots.push(format!("'{ASYMPTOTIC_CSV}' using 1:3 with lines dashtype 2 title 'asymptotic'"));
    }
    let title = scenario.name.as_deref().unwrap_or("scan");
    format!(
        "# gnuplot -p {PLOT_SCRIPT}\n\
         set datafile separator ','\n\
         set datafile missing 'nan'\n\
         set title '{title}'\n\
         set xlabel 'x/a'\n\
         set ylabel '{ylabel}'\n\
         set key top right\n\
         plot {}\n",
        plots.join(", \\\n     ")
    )
}

fn write_all(dir: &Path, artifacts: &[Artifact]) -> Result<()> {
    let staged: Vec<(PathBuf, PathBuf)> = artifacts
        .iter()
        .map(|a| (dir.join(format!(".{}.partial", a.file_name)), dir.join(a.file_name)))
        .collect();
    let mut placed = Vec::new();
    let result = (|| -> Result<()> {
        for ((tmp, _), artifact) in staged.iter().zip(artifacts) {
            fs::write(tmp, &artifact.contents).with_context(|| format!("cannot write {}", tmp.display()))?;
        }
        for (tmp, target) in &staged {
            fs::rename(tmp, target).with_context(|| format!("cannot move output into {}", target.display()))?;
            placed.push(target.clone());
        }
        Ok(())
    })();
    if result.is_err() {
        for (tmp, _) in &staged {
            let _ = fs::remove_file(tmp);
        }
        for target in &placed {
            let _ = fs::remove_file(target);
        }
    }
    result
}

#[derive(Serialize)]
struct Summary<'a> {
    scenario: Option<&'a str>,
    mode: String,
    normalization: Normalization,
    sigma_over_a: Option<f64>,
    geometry: GeometryEcho,
    dimensionless: ParamsEcho,
    grid: crate::scenario::Grid,
    channels: Vec<&'static str>,
    files: &'a [&'static str],
    #[serde(skip_serializing_if = "Option::is_none")]
    regime_report: Option<ReportEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_check: Option<&'a OracleSummary>,
}

#[derive(Serialize)]
struct GeometryEcho {
    half_width: f64,
    center: f64,
    slit_to_screen: f64,
    source_to_slit: f64,
    wavelength: f64,
}

#[derive(Serialize)]
struct ParamsEcho {
    nf_a: f64,
    eta: f64,
    gamma: f64,
    beta: f64,
    nf_b: f64,
    nf: f64,
}

#[derive(Serialize)]
struct ReportEcho {
    single_slit_regime: String,
    two_slit_phase: Option<String>,
    nf_a: f64,
    nf_eta: f64,
    edge_width_over_a: f64,
    validity_bands: Vec<BandEcho>,
}

/// Open band of `x/a`; a missing bound is unbounded.
#[derive(Serialize)]
struct BandEcho {
    lower: Option<f64>,
    upper: Option<f64>,
    approximation: &'static str,
    tolerance: f64,
}

impl<'a> Summary<'a> {
    fn new(
        scenario: &'a Scenario,
        g: &SlitGeometry,
        channels: &[Channel],
        files: &'a [&'static str],
        report: &RegimeReport,
        oracle: Option<&'a OracleSummary>,
    ) -> Self {
        let p = derive_params(g).expect("geometry was validated");
        let finite = |v: f64| v.is_finite().then_some(v);
        let regime_report = scenario.wants(Output::RegimeReport).then(|| ReportEcho {
            single_slit_regime: snake(&format!("{:?}", report.single_slit_regime)),
            two_slit_phase: report.two_slit_phase.map(|ph| snake(&format!("{ph:?}"))),
            nf_a: report.thresholds.nf_a,
            nf_eta: report.thresholds.nf_eta,
            edge_width_over_a: report.thresholds.edge_width_over_a,
            validity_bands: report
                .validity_bands
                .iter()
                .map(|b| BandEcho {
                    lower: finite(b.lower),
                    upper: finite(b.upper),
                    approximation: b.approximation.id(),
                    tolerance: b.approximation.tolerance(),
                })
                .collect(),
        });
        Summary {
            scenario: scenario.name.as_deref(),
            mode: scenario.mode.to_string(),
            normalization: scenario.normalization,
            sigma_over_a: scenario.sigma_over_a,
            geometry: GeometryEcho {
                half_width: g.half_width,
                center: g.center,
                slit_to_screen: g.slit_to_screen,
                source_to_slit: g.source_to_slit,
                wavelength: g.wavelength,
            },
            dimensionless: ParamsEcho { nf_a: p.nf_a, eta: p.eta, gamma: p.gamma, beta: p.beta, nf_b: p.nf_b, nf: p.nf },
            grid: scenario.grid,
            channels: channels.iter().map(|c| c.name()).collect(),
            files,
            regime_report,
            oracle_check: oracle,
        }
    }
}

fn snake(camel: &str) -> String {
    let mut out = String::new();
    for (i, ch) in camel.chars().enumerate() {
        if ch.is_uppercase() && i > 0 {
            out.push('_');
        }
        out.extend(ch.to_lowercase());
    }
    out
}
