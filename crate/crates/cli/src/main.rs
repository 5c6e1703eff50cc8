mod args;

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use beamsym::beam_model::{BeamConfig, Domain, Role, TemporalFactor};
use beamsym::catalog::{fmt_param, CaseBundle, CaseParams};
use beamsym::fdsolver::{compare, comparison_csv, simulate, FdError, Grid, Trajectory};
use beamsym::reduction::{reduce, MIN_CONSTANCY_POINTS};
use beamsym::symmetry::certify_seeded;
use clap::Parser;

use args::{CaseArgs, Cli, Command, Format, Initial, RunArgs};

/// Failure of a command: usage/parameter problems exit 2, numeric
/// verdicts exit 1.
enum Failure {
    Usage(String),
    Numeric(String),
}

impl Failure {
    fn usage(e: impl ToString) -> Self {
        Self::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            eprintln!("{first}");
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    if !(cli.tol > 0.0) || !cli.tol.is_finite() {
        return Err(Failure::Usage(format!("--tol must be positive, got {}", cli.tol)));
    }
    let config = match &cli.config {
        Some(path) => Some(load_config(path)?),
        None => None,
    };
    match &cli.command {
        Command::Catalog { case, n, format } => {
            let b = build(case, *n, None)?;
            let text = match format {
                Format::Text => b.to_string(),
                Format::Toml => b.to_toml_string().map_err(Failure::usage)?,
            };
            emit(cli, &text)
        }
        Command::Verify { case, n, perturb, samples } => {
            let mut b = build(case, *n, config)?;
            for arg in perturb {
                let (role, factor) = parse_perturb(arg)?;
                b.config = b.config.clone().scaled(role, factor);
            }
            verify(cli, &b, *samples)
        }
        Command::Reduce { case, n, x0, init_u, init_v } => {
            let b = build(case, *n, config)?;
            reduce_cmd(cli, &b, *x0, *init_u, *init_v)
        }
        Command::Simulate { case, run } => {
            let b = build(case, run.case_n, None)?;
            let traj = integrate(&b, config.as_ref(), run)?;
            emit(cli, &traj.to_csv(run.stride))
        }
        Command::Compare { case, run, max_rel_error } => {
            let b = build(case, run.case_n, None)?;
            let traj = integrate(&b, config.as_ref(), run)?;
            compare_cmd(cli, &b, &traj, run, *max_rel_error)
        }
    }
}

fn load_config(path: &Path) -> Result<BeamConfig, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    BeamConfig::from_toml_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn build(case: &CaseArgs, n: Option<f64>, config: Option<BeamConfig>) -> Result<CaseBundle, Failure> {
    let mut params = CaseParams::defaults(&case.case).map_err(Failure::usage)?;
    if let Some(n) = n {
        params.set("n", n).map_err(Failure::usage)?;
    }
    for (name, v) in case.overrides() {
        params.set(name, v).map_err(Failure::usage)?;
    }
    let mut b = params.build().map_err(Failure::usage)?;
    if let Some(c) = config {
        b.config = c;
    }
    Ok(b)
}

fn parse_perturb(arg: &str) -> Result<(Role, f64), Failure> {
    let bad = || Failure::Usage(format!("--perturb expects ROLE=FACTOR with ROLE in ei, m, t; got '{arg}'"));
    let (key, value) = arg.split_once('=').ok_or_else(bad)?;
    let role = Role::from_key(key.trim()).ok_or_else(bad)?;
    let factor: f64 = value.trim().parse().map_err(|_| bad())?;
    if !factor.is_finite() {
        return Err(bad());
    }
    Ok((role, factor))
}

fn emit(cli: &Cli, text: &str) -> Outcome {
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_out(cli: &Cli, text: &str) -> Outcome {
    if let Some(path) = &cli.out {
        fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn verify(cli: &Cli, b: &CaseBundle, samples: usize) -> Outcome {
    let pde = b.residual_sweep(41, 21).map_err(Failure::usage)?;
    let report = certify_seeded(&b.config, &b.inf, samples, cli.tol, cli.seed).map_err(Failure::usage)?;
    let mut out = String::new();
    let _ = writeln!(out, "case {} ({} samples, tol {:e})", b.name, samples, cli.tol);
    let pde_ok = pde <= cli.tol;
    let _ = writeln!(out, "pde residual: {pde:.3e} {}", verdict(pde_ok));
    let mut all = pde_ok;
    for e in &report.entries {
        let certified = b.certified.contains(&e.equation);
        let tag = if certified { verdict(e.pass) } else { "(not required)" };
        if certified && !e.pass {
            all = false;
        }
        let _ = writeln!(out, "{:<4} {:.3e} {tag}", e.equation.to_string(), e.max_residual);
    }
    let _ = writeln!(out, "result: {}", verdict(all));
    print!("{out}");
    write_out(cli, &report.to_csv())?;
    if all {
        Ok(())
    } else {
        Err(Failure::Numeric(format!("case {}: verification failed", b.name)))
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn reduce_cmd(cli: &Cli, b: &CaseBundle, x0: Option<f64>, init_u: f64, init_v: f64) -> Outcome {
    let r = reduce(&b.config, &b.inf, x0, init_u, init_v).map_err(Failure::usage)?;
    let mut out = String::new();
    let _ = writeln!(out, "case {}", b.name);
    let _ = writeln!(out, "profile: {}", r.form);
    let _ = writeln!(out, "x0 = {}", if r.x0.is_infinite() { "inf".to_string() } else { fmt_param(r.x0) });
    let _ = writeln!(out, "S = {}", fmt_param(r.separation.s));
    let _ = writeln!(
        out,
        "constant: {} (max deviation {:.3e}, {} points)",
        r.separation.constant,
        r.separation.max_deviation,
        r.separation.samples.len()
    );
    for note in &r.separation.notes {
        let _ = writeln!(out, "note: {note}");
    }
    let _ = writeln!(out, "F(t) = {}", temporal_text(&r.solution.temporal));
    let check = CaseBundle {
        solution: r.solution.clone(),
        ..b.clone()
    };
    let worst = check.residual_sweep(41, 21).map_err(Failure::usage)?;
    let _ = writeln!(out, "pde residual: {worst:.3e} {}", verdict(worst <= cli.tol));
    print!("{out}");
    write_out(cli, &r.separation.to_csv())?;
    if !r.separation.constant {
        let need = if r.separation.samples.len() < MIN_CONSTANCY_POINTS { " (too few points)" } else { "" };
        return Err(Failure::Numeric(format!("case {}: S(x) is not constant{need}", b.name)));
    }
    if worst > cli.tol {
        return Err(Failure::Numeric(format!("case {}: reduced solution residual {worst:.3e}", b.name)));
    }
    Ok(())
}

fn temporal_text(f: &TemporalFactor) -> String {
    match *f {
        TemporalFactor::Hyperbolic { lambda, a1, a2 } => {
            format!("{}*exp({l}*t) + {}*exp(-{l}*t)", fmt_param(a1), fmt_param(a2), l = fmt_param(lambda))
        }
        TemporalFactor::Affine { a1, a2 } => format!("{} + {}*t", fmt_param(a1), fmt_param(a2)),
        TemporalFactor::Trigonometric { nu, a1, a2 } => {
            format!("{}*cos({n}*t) + {}*sin({n}*t)", fmt_param(a1), fmt_param(a2), n = fmt_param(nu))
        }
    }
}

fn fd_failure(e: FdError) -> Failure {
    match e {
        FdError::Breakdown { .. } => Failure::Numeric(e.to_string()),
        _ => Failure::usage(e),
    }
}

fn same_domain(a: &Domain, b: &Domain) -> Outcome {
    if a != b {
        return Err(Failure::usage(FdError::DomainMismatch {
            a0: a.x_min(),
            a1: a.l(),
            b0: b.x_min(),
            b1: b.l(),
        }));
    }
    Ok(())
}

fn integrate(b: &CaseBundle, config: Option<&BeamConfig>, run: &RunArgs) -> Result<Trajectory, Failure> {
    let config = config.unwrap_or(&b.config);
    same_domain(&config.domain, &b.config.domain)?;
    let grid = Grid::new(config.domain, run.n).map_err(fd_failure)?;
    let nodes = grid.points.len();
    let (h, v0) = match run.h {
        Initial::Zero => (vec![0.0; nodes], vec![0.0; nodes]),
        Initial::Profile => {
            let mut h = Vec::with_capacity(nodes);
            let mut v = Vec::with_capacity(nodes);
            for &x in &grid.points {
                let j = b.solution.jet(x, 0.0).map_err(Failure::usage)?;
                h.push(j.value());
                v.push(j.dt(1));
            }
            (h, v)
        }
    };
    simulate(config, &h, &v0, run.dt, run.t_end, &grid).map_err(fd_failure)
}

fn compare_cmd(cli: &Cli, b: &CaseBundle, traj: &Trajectory, run: &RunArgs, limit: f64) -> Outcome {
    let table = compare(traj, &b.solution, &b.config.domain).map_err(fd_failure)?;
    let last = table.rows.last().map(|r| r.max_abs).unwrap_or(0.0);
    let ok = table.max_rel <= limit;
    println!("case {} (n = {}, dt = {:e}, t_end = {})", b.name, run.n, run.dt, run.t_end);
    println!("amplitude: {:.6e}", table.amplitude);
    println!("max_rel_error: {:.6e}", table.max_rel);
    println!("rms_rel_error: {:.6e}", table.rms_rel);
    println!("final max_abs_error: {last:.6e}");
    println!("result: {} (limit {limit:e})", verdict(ok));
    if cli.out.is_some() {
        let csv = comparison_csv(traj, &b.solution, &b.config.domain, run.stride).map_err(fd_failure)?;
        write_out(cli, &csv)?;
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Numeric(format!(
            "case {}: max relative error {:.3e} exceeds {limit:e}",
            b.name, table.max_rel
        )))
    }
}
