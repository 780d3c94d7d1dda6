//! The `srl` command-line driver.
//!
//! Exit codes: 0 success, 1 failed verdict, 2 bad arguments, 3 numerical failure.

pub mod args;
mod config;
mod output;

use std::ffi::OsString;

use anyhow::{anyhow, Context};
use serde::{Deserialize, Serialize};
use srl_core::experiments::{
    sweep_dirichlet_equator, sweep_exterior_mass, sweep_neumann, sweep_sharpness, verify_totally_geodesic_contrast,
    ExteriorParams, SweepReport,
};
use srl_core::models::{
    disc_eigenfunction, sphere_highest_weight, torus_plane_wave, EigenfunctionSpec, FamilyKind, FamilySpec, ModelId,
};
use srl_core::rellich::{energy_balance, rellich_disc, RellichReport};
use srl_core::traces::{norm_l2, restrict, Data, Hypersurface, NormMethod, Trace};
use srl_core::windows::{window_decompose, Window, WindowReport};

pub use args::Cli;
use args::{Command, MeasureArg, ModelArg, ModelsCommand, SpecArgs, SurfaceArg, SweepCommand};
pub use config::{parse_args, ParseError};
pub use output::Envelope;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Bad input detected after parsing.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(UsageError(msg.into()))
}

/// Entry point shared by the binary and the tests.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match parse_args(argv) {
        Ok(cli) => cli,
        Err(ParseError::Display(text)) => {
            print!("{text}");
            return EXIT_OK;
        }
        Err(ParseError::Usage(msg)) => {
            eprintln!("srl: {msg}");
            return EXIT_USAGE;
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("srl: {msg}");
        return EXIT_USAGE;
    }
    match run(&cli) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VERDICT,
        Err(e) => {
            eprintln!("srl: {e:#}");
            exit_code_for(&e)
        }
    }
}

pub fn exit_code_for(e: &anyhow::Error) -> i32 {
    if let Some(core) = e.downcast_ref::<srl_core::Error>() {
        if core.is_numerical() {
            EXIT_NUMERICAL
        } else {
            EXIT_USAGE
        }
    } else if e.downcast_ref::<UsageError>().is_some() || e.downcast_ref::<std::io::Error>().is_some() {
        EXIT_USAGE
    } else {
        EXIT_NUMERICAL
    }
}

/// `SRL_THREADS` caps the sweep pool; unset or 0 leaves rayon's default.
fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("SRL_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("SRL_THREADS: `{raw}` is not a nonnegative integer"))?;
    if n > 0 {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelInfo {
    pub name: String,
    pub description: String,
    pub volume: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceNorms {
    pub dirichlet_quadrature: f64,
    pub dirichlet_parseval: f64,
    pub neumann_quadrature: f64,
    pub neumann_parseval: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    pub norms: TraceNorms,
    pub trace: Trace,
}

/// Run a parsed configuration; `Ok(false)` means a verdict failed.
pub fn run(cli: &Cli) -> anyhow::Result<bool> {
    let out = output::Sink::new(cli);
    match &cli.command {
        Command::Models(ModelsCommand::List) => {
            let models: Vec<ModelInfo> = ModelId::ALL
                .iter()
                .map(|m| ModelInfo {
                    name: m.name().into(),
                    description: m.description().into(),
                    volume: m.volume(),
                })
                .collect();
            let csv = models.iter().fold(String::from("name,volume,description\n"), |acc, m| {
                acc + &format!("{},{:.16e},\"{}\"\n", m.name, m.volume, m.description)
            });
            out.emit(&models, csv)?;
            Ok(true)
        }
        Command::Trace(a) => {
            let (spec, surface) = build_spec(&a.spec)?;
            let trace = restrict(&spec, &surface, a.spec.grid)?;
            let norms = TraceNorms {
                dirichlet_quadrature: norm_l2(&trace, Data::Dirichlet, NormMethod::Quadrature)?,
                dirichlet_parseval: norm_l2(&trace, Data::Dirichlet, NormMethod::Parseval)?,
                neumann_quadrature: norm_l2(&trace, Data::Neumann, NormMethod::Quadrature)?,
                neumann_parseval: norm_l2(&trace, Data::Neumann, NormMethod::Parseval)?,
            };
            let csv = trace.to_csv();
            out.emit(&TraceReport { norms, trace }, csv)?;
            Ok(true)
        }
        Command::Windows(a) => {
            let (spec, surface) = build_spec(&a.spec)?;
            let trace = restrict(&spec, &surface, a.spec.grid)?;
            let report: WindowReport = window_decompose(&trace, a.delta)?.report();
            let mut csv = String::from("window,norm,energy\n");
            for (name, w) in ["in", "tan", "out"].into_iter().zip(Window::ALL) {
                csv += &format!("{name},{:.16e},{:.16e}\n", report.norms.get(w), report.energies.get(w));
            }
            out.emit(&report, csv)?;
            Ok(report.energies.inner >= 0.0)
        }
        Command::Rellich(a) => {
            let (spec, surface) = build_spec(&a.spec)?;
            let trace = restrict(&spec, &surface, a.spec.grid)?;
            let report: RellichReport = if spec.model == ModelId::Disc {
                rellich_disc(&trace, a.delta, a.eps)?
            } else {
                energy_balance(&trace, a.delta)?
            };
            out.emit(&report, rellich_csv(&report))?;
            Ok(report.closes(1e-6) && report.t_in >= 0.0)
        }
        Command::Sweep(s) => {
            let report = run_sweep(s)?;
            let csv = report.to_csv();
            out.emit(&report, csv)?;
            if let Some(dir) = &cli.emit_plot_data {
                output::write_plot_data(dir, &report)?;
            }
            Ok(report.passed())
        }
    }
}

fn rellich_csv(r: &RellichReport) -> String {
    let mut rows = vec![
        ("h", Some(r.h)),
        ("delta", Some(r.delta)),
        ("t_tan", Some(r.t_tan)),
        ("t_neu", Some(r.t_neu)),
        ("t_in", Some(r.t_in)),
        ("t_tan_mid", Some(r.t_tan_mid)),
        ("t_out", Some(r.t_out)),
        ("curvature_correction", Some(r.curvature_correction)),
    ];
    rows.push(("normal_second", r.normal_second));
    rows.push(("commutator_lhs", r.commutator_lhs));
    rows.push(("closure_residual", r.closure_residual));
    rows.iter()
        .filter_map(|(k, v)| v.map(|v| format!("{k},{v:.16e}\n")))
        .fold(String::from("quantity,value\n"), |acc, line| acc + &line)
}

fn require<T: Copy>(v: Option<T>, flag: &str, model: &str) -> anyhow::Result<T> {
    v.ok_or_else(|| usage(format!("--{flag} is required for --model {model}")))
}

fn build_spec(a: &SpecArgs) -> anyhow::Result<(EigenfunctionSpec, Hypersurface)> {
    Ok(match a.model {
        ModelArg::Disc => {
            let n = require(a.n, "n", "disc")?;
            let k = require(a.k, "k", "disc")?;
            if k == 0 {
                return Err(usage("--k must be at least 1"));
            }
            (disc_eigenfunction(n, k)?, Hypersurface::disc_circle(a.r0)?)
        }
        ModelArg::Sphere => {
            let k = require(a.k, "k", "sphere")?;
            let surface = match a.surface {
                SurfaceArg::Meridian => Hypersurface::sphere_meridian(),
                SurfaceArg::Equator => Hypersurface::sphere_equator(),
            };
            (sphere_highest_weight(k)?, surface)
        }
        ModelArg::Torus => {
            let m1 = require(a.m1, "m1", "torus")?;
            let m2 = require(a.m2, "m2", "torus")?;
            (torus_plane_wave(m1, m2)?, Hypersurface::torus_line(a.c)?)
        }
    })
}

fn run_sweep(s: &SweepCommand) -> anyhow::Result<SweepReport> {
    Ok(match s {
        SweepCommand::Neumann(a) => {
            let (family, surface) = match a.model {
                ModelArg::Disc => (
                    FamilySpec {
                        kind: FamilyKind::DiscWhispering {
                            r0: a.r0,
                            offset_exponent: a.dprime,
                            offset: a.z,
                        },
                        range: a.n,
                    },
                    Hypersurface::disc_circle(a.r0)?,
                ),
                ModelArg::Sphere => (
                    FamilySpec {
                        kind: FamilyKind::SphereHighestWeight,
                        range: a.k,
                    },
                    match a.surface {
                        SurfaceArg::Meridian => Hypersurface::sphere_meridian(),
                        SurfaceArg::Equator => Hypersurface::sphere_equator(),
                    },
                ),
                ModelArg::Torus => (
                    FamilySpec {
                        kind: FamilyKind::TorusDirection {
                            step: a.step,
                            offset: a.offset,
                        },
                        range: a.t,
                    },
                    Hypersurface::torus_line(a.c)?,
                ),
            };
            let measure = match a.measure {
                MeasureArg::Neumann => Data::Neumann,
                MeasureArg::Dirichlet => Data::Dirichlet,
            };
            sweep_neumann(&family, &surface, a.delta, measure)?
        }
        SweepCommand::Dirichlet(a) => sweep_dirichlet_equator(a.k)?,
        SweepCommand::Exterior(a) => sweep_exterior_mass(ExteriorParams {
            r0: a.r0,
            dprime: a.dprime,
            z: a.z,
            delta_window: a.delta,
            range: a.n,
        })?,
        SweepCommand::Sharpness(a) => sweep_sharpness(a.k)?,
        SweepCommand::GeodesicContrast(a) => {
            verify_totally_geodesic_contrast(a.k, &a.deltas).context("geodesic contrast sweep")?
        }
    })
}
