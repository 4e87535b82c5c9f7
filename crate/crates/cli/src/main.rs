//! Command-line front end: scenario runs, the transition-curve tracer, the
//! verification suite, and the effective-defaults dump.
//!
//! Exit codes: 0 success, 2 configuration rejection, 3 solver failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use magnetoelast_core::acceptance;
use magnetoelast_core::error::Error;
use magnetoelast_core::runner;
use magnetoelast_core::scenario::{self, Scenario};
use magnetoelast_core::statics::{self, MinimizeOptions, RigidMagnet};

const THREADS_ENV: &str = "MAGNETOELAST_THREADS";

#[derive(Parser)]
#[command(name = "magnetoelast", about = "Eulerian thermo-magneto-viscoelastic simulator")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Execute a scenario's time loop and write the energy report.
    Run {
        scenario: PathBuf,
        /// Output directory (report and snapshots).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Snapshot cadence in steps (overrides the scenario).
        #[arg(long)]
        snapshots: Option<usize>,
        /// Worker threads; falls back to MAGNETOELAST_THREADS, then all cores.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Trace the ferro-to-paramagnetic transition curve of the scenario's
    /// [curve] block and emit CSV.
    Curve {
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run the verification suite and print one pass/fail line per criterion.
    Check {
        /// Skip the two long-running criteria (demag disk, energy audits).
        #[arg(long)]
        quick: bool,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Print the effective default scenario.
    DumpConfig,
}

fn setup_threads(flag: Option<usize>) {
    let n = flag.or_else(|| {
        std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok())
    });
    if let Some(n) = n {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn exit_code_for(err: &Error) -> ExitCode {
    match err {
        Error::Config(_) => ExitCode::from(2),
        _ => ExitCode::from(3),
    }
}

fn cmd_run(path: &PathBuf, out: Option<PathBuf>, snapshots: Option<usize>) -> ExitCode {
    let mut sc: Scenario<f64> = match scenario::parse_scenario(path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            return exit_code_for(&e);
        }
    };
    if let Some(n) = snapshots {
        sc.output.snapshot_every = n;
        if sc.output.dump_fields.is_empty() {
            sc.output.dump_fields =
                vec!["rho".into(), "v".into(), "m".into(), "theta".into()];
        }
    }
    match runner::run(&sc, out.as_deref()) {
        Ok(summary) => {
            let last = summary.reports.last();
            println!(
                "completed {} steps to t = {:.6}; cutoff active: {}; max rho*detF drift {:.3e}",
                summary.steps, summary.final_time, summary.cutoff_activated,
                summary.max_rho_detf_drift
            );
            if let Some(rep) = last {
                let scale = rep.energy_scale().max(1e-300);
                println!(
                    "final audit: residual_mech {:.3e}, residual_total {:.3e} (relative to energy scale {:.3e})",
                    rep.residual_mech / scale,
                    rep.residual_total / scale,
                    scale
                );
                println!(
                    "monitors: min theta {:.3e}, min det F {:.4}, total mass {:.12}",
                    rep.min_theta, rep.min_detf, rep.total_mass
                );
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("run failed: {e}");
            exit_code_for(&e)
        }
    }
}

fn cmd_curve(path: &PathBuf, out: Option<PathBuf>) -> ExitCode {
    let sc: Scenario<f64> = match scenario::parse_scenario(path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            return exit_code_for(&e);
        }
    };
    let Some(cfg) = sc.curve.clone() else {
        eprintln!("{}: scenario has no [curve] block", path.display());
        return ExitCode::from(2);
    };
    let grid = match sc.grid() {
        Ok(g) => g,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let rm = RigidMagnet {
        a0: cfg.a0,
        b0: cfg.b0,
        c0: sc.material.c0,
        theta_c: sc.material.theta_c,
        kappa: cfg.kappa,
        mu0: sc.material.mu0,
    };
    let opts = MinimizeOptions {
        tol: cfg.tol,
        demag: sc.demag_enabled(),
        demag_pad: sc.grid.demag_pad,
        ..Default::default()
    };
    match statics::transition_curve(&rm, grid, &cfg.thetas, cfg.h_ext, &opts) {
        Ok(points) => {
            let csv = statics::curve_to_csv(&points);
            let dir = out.unwrap_or_else(|| PathBuf::from("."));
            if let Err(e) = std::fs::create_dir_all(&dir) {
                eprintln!("{e}");
                return ExitCode::from(3);
            }
            let dest = dir.join("curve.csv");
            if let Err(e) = std::fs::write(&dest, csv) {
                eprintln!("{e}");
                return ExitCode::from(3);
            }
            println!("wrote {} points to {}", points.len(), dest.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("curve failed: {e}");
            exit_code_for(&e)
        }
    }
}

fn cmd_check(quick: bool) -> ExitCode {
    let results = acceptance::run_all(quick);
    let mut all = true;
    for r in &results {
        println!("{}", r.line());
        all &= r.passed;
    }
    if all {
        println!("all {} criteria passed", results.len());
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Run { scenario, out, snapshots, threads } => {
            setup_threads(threads);
            cmd_run(&scenario, out, snapshots)
        }
        Cmd::Curve { scenario, out, threads } => {
            setup_threads(threads);
            cmd_curve(&scenario, out)
        }
        Cmd::Check { quick, threads } => {
            setup_threads(threads);
            cmd_check(quick)
        }
        Cmd::DumpConfig => {
            print!("{}", scenario::default_scenario_text());
            ExitCode::SUCCESS
        }
    }
}
