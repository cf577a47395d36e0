//! Command-line front end for `graphpde-core`: graph files, nonlinearity
//! specs, text and JSON-lines reports, solution files and path profiles.
//!
//! Exit codes: 0 success, 1 a hypothesis or solve failed, 2 bad input.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod graph_file;
pub mod nl_spec;
pub mod report;
pub mod solution_file;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use graphpde_core::nonlinearity::{ar_lower_bound, check_f, check_h, max_abs_primitive, HCheck};
use graphpde_core::solver::{solve_single, two_solutions, SolveReport};
use graphpde_core::spectral::{constants, lambda1};
use graphpde_core::{
    CheckExtras, GraphFunction, GridSpec, Hypothesis, HypothesisSet, HypothesisVerdict,
    KappaChoice, MeasureMode, Nonlinearity, Problem, SolverConfig, SolverError, TwoSolutionMode,
    VariationalError,
};

use graph_file::GraphFile;
use report::{Format, Report};

#[derive(Debug, Parser)]
#[command(
    name = "graphpde",
    version,
    about = "Semilinear Dirichlet problems on weighted graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Verify hypotheses on h (and on f with --nl); report λ₁ and embedding constants.
    #[command(allow_negative_numbers = true)]
    Check(Args),
    /// First Dirichlet eigenvalue and eigenfunction.
    #[command(allow_negative_numbers = true)]
    Eigen(Args),
    /// Compare the analytic gradient with finite differences of Φ.
    #[command(allow_negative_numbers = true)]
    Gradcheck(Args),
    /// One nontrivial solution by the mountain-pass solver.
    #[command(allow_negative_numbers = true)]
    Solve(Args),
    /// Two nontrivial solutions: a ball minimizer and a mountain-pass point.
    #[command(allow_negative_numbers = true)]
    Solve2(Args),
}

#[derive(Debug, clap::Args)]
struct Args {
    /// Graph file.
    graph: PathBuf,
    /// Nonlinearity, e.g. power:p=4 or power_plus_const:p=4,eps=0.1.
    #[arg(long)]
    nl: Option<String>,
    /// Lower bound h0 (defaults to min over Ω of h).
    #[arg(long)]
    h0: Option<f64>,
    /// AR exponent θ > 2.
    #[arg(long)]
    theta: Option<f64>,
    /// AR threshold M > 0.
    #[arg(long = "M")]
    m: Option<f64>,
    /// Squared H-norm radius of the ball.
    #[arg(long)]
    rho: Option<f64>,
    /// β > 0 for the ball condition (defaults to the largest admissible).
    #[arg(long)]
    beta: Option<f64>,
    /// Sup-norm level M0 for the level-set ball.
    #[arg(long = "M0")]
    m0: Option<f64>,
    /// Residual tolerance (solve, solve2) or eigenvalue tolerance (eigen).
    #[arg(long)]
    tol: Option<f64>,
    /// Deformation step budget (solve, solve2) or iteration cap (eigen).
    #[arg(long = "max-iter")]
    max_iter: Option<usize>,
    /// Seed for random test functions and gradcheck samples.
    #[arg(long)]
    seed: Option<u64>,
    /// Solution or eigenfunction file.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// CSV of (s, Φ) along the deformed path.
    #[arg(long = "emit-path-profile")]
    emit_path_profile: Option<PathBuf>,
}

impl Args {
    fn given(&self) -> Vec<&'static str> {
        let flags = [
            ("--nl", self.nl.is_some()),
            ("--h0", self.h0.is_some()),
            ("--theta", self.theta.is_some()),
            ("--M", self.m.is_some()),
            ("--rho", self.rho.is_some()),
            ("--beta", self.beta.is_some()),
            ("--M0", self.m0.is_some()),
            ("--tol", self.tol.is_some()),
            ("--max-iter", self.max_iter.is_some()),
            ("--seed", self.seed.is_some()),
            ("--out", self.out.is_some()),
            ("--emit-path-profile", self.emit_path_profile.is_some()),
        ];
        flags.into_iter().filter(|f| f.1).map(|f| f.0).collect()
    }
}

/// Why a command did not succeed.
#[derive(Debug)]
enum Failure {
    /// Malformed input or conflicting flags (exit 2).
    Input(String),
    /// A hypothesis or solve failed (exit 1); the partial report is kept.
    Verification(String, Report),
}

fn input(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let (name, args, allowed): (&str, &Args, &[&str]) = match &cli.command {
        Command::Check(a) => (
            "check",
            a,
            &["--nl", "--h0", "--theta", "--M", "--rho", "--beta", "--M0"],
        ),
        Command::Eigen(a) => ("eigen", a, &["--tol", "--max-iter", "--out"]),
        Command::Gradcheck(a) => (
            "gradcheck",
            a,
            &["--nl", "--h0", "--theta", "--M", "--seed"],
        ),
        Command::Solve(a) => (
            "solve",
            a,
            &[
                "--nl",
                "--h0",
                "--theta",
                "--M",
                "--tol",
                "--max-iter",
                "--seed",
                "--out",
                "--emit-path-profile",
            ],
        ),
        Command::Solve2(a) => (
            "solve2",
            a,
            &[
                "--nl",
                "--h0",
                "--theta",
                "--M",
                "--rho",
                "--beta",
                "--M0",
                "--tol",
                "--max-iter",
                "--seed",
                "--out",
                "--emit-path-profile",
            ],
        ),
    };
    let result = (|| {
        if let Some(flag) = args.given().into_iter().find(|f| !allowed.contains(f)) {
            return Err(input(format!("{flag} is not used by '{name}'")));
        }
        match &cli.command {
            Command::Check(a) => cmd_check(a),
            Command::Eigen(a) => cmd_eigen(a),
            Command::Gradcheck(a) => cmd_gradcheck(a),
            Command::Solve(a) => cmd_solve(a),
            Command::Solve2(a) => cmd_solve2(a),
        }
    })();
    match result {
        Ok(report) => {
            let _ = stdout.write_all(report.render(args.format).as_bytes());
            0
        }
        Err(Failure::Verification(msg, report)) => {
            let _ = stdout.write_all(report.render(args.format).as_bytes());
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}

fn load(args: &Args) -> Result<GraphFile, Failure> {
    let text = std::fs::read_to_string(&args.graph)
        .map_err(|e| input(format!("cannot read {}: {e}", args.graph.display())))?;
    graph_file::parse(&text).map_err(|e| input(format!("{}: {e}", args.graph.display())))
}

fn omega_min_h(gf: &GraphFile) -> f64 {
    gf.partition
        .omega()
        .iter()
        .map(|&x| gf.h[x])
        .fold(f64::INFINITY, f64::min)
}

fn resolve_h0(gf: &GraphFile, args: &Args) -> Result<f64, Failure> {
    match args.h0 {
        Some(h0) if h0 > 0.0 && h0.is_finite() => Ok(h0),
        Some(h0) => Err(input(format!("--h0 must be positive, got {h0}"))),
        None => {
            let min = omega_min_h(gf);
            if min > 0.0 {
                Ok(min)
            } else {
                Err(input(format!(
                    "min of h over the domain is {min}; pass --h0 explicitly for the integral-bound regime"
                )))
            }
        }
    }
}

fn resolve_nl(args: &Args, required: bool) -> Result<Option<Nonlinearity>, Failure> {
    let Some(spec) = &args.nl else {
        if required {
            return Err(input("--nl is required"));
        }
        if args.theta.is_some() || args.m.is_some() {
            return Err(input("--theta and --M need --nl"));
        }
        return Ok(None);
    };
    let mut nl = nl_spec::parse(spec).map_err(|e| input(format!("--nl: {e}")))?;
    if args.theta.is_some() || args.m.is_some() {
        let defaults = nl.ar_constants();
        let theta = args.theta.or(defaults.map(|d| d.0));
        let m = args.m.or(defaults.map(|d| d.1));
        let (Some(theta), Some(m)) = (theta, m) else {
            return Err(input(
                "no default AR constants for this family; pass both --theta and --M",
            ));
        };
        if !(theta > 2.0) || !theta.is_finite() {
            return Err(input(format!("--theta must exceed 2, got {theta}")));
        }
        if !(m > 0.0) || !m.is_finite() {
            return Err(input(format!("--M must be positive, got {m}")));
        }
        nl = nl.with_ar(theta, m);
    }
    Ok(Some(nl))
}

fn positive(name: &str, v: Option<f64>) -> Result<Option<f64>, Failure> {
    match v {
        Some(x) if !(x > 0.0) || !x.is_finite() => {
            Err(input(format!("{name} must be positive, got {x}")))
        }
        other => Ok(other),
    }
}

fn solver_config(args: &Args) -> Result<SolverConfig, Failure> {
    let mut cfg = SolverConfig::default();
    if let Some(tol) = positive("--tol", args.tol)? {
        cfg.newton_tol = tol;
    }
    if let Some(n) = args.max_iter {
        cfg.deform_steps = n;
    }
    cfg.seed = args.seed.unwrap_or(0);
    cfg.record_path_profile = args.emit_path_profile.is_some();
    cfg.validate().map_err(|e| input(e.to_string()))?;
    Ok(cfg)
}

fn meta(report: &mut Report, command: &str, args: &Args, gf: &GraphFile) {
    let g = &gf.graph;
    report.push(
        "meta",
        json!({
            "command": command,
            "graph_file": args.graph.display().to_string(),
            "vertices": g.len(),
            "edges": g.edges().len(),
            "omega": gf.partition.omega().iter().map(|&x| g.id(x)).collect::<Vec<_>>(),
            "boundary": gf.partition.boundary().iter().map(|&x| g.id(x)).collect::<Vec<_>>(),
            "exterior": gf.partition.exterior().iter().map(|&x| g.id(x)).collect::<Vec<_>>(),
            "measure_mode": match g.mode() { MeasureMode::Derived => "derived", MeasureMode::Given => "given" },
            "mu_min": g.mu_min(),
            "nonlinearity": args.nl.as_deref().and_then(|s| nl_spec::parse(s).ok()).map(|n| n.describe()),
        }),
    );
}

fn push_verdicts(report: &mut Report, verdicts: &[HypothesisVerdict]) {
    for v in verdicts {
        report.push(
            "verdict",
            json!({
                "name": v.name.name(),
                "statement": v.name.statement(),
                "holds": v.holds,
                "witness": v.witness,
                "sampled_range": v.sampled_range,
            }),
        );
    }
}

fn holds(verdicts: &[HypothesisVerdict], h: Hypothesis) -> bool {
    verdicts.iter().any(|v| v.name == h && v.holds)
}

fn verify(msg: String, report: Report) -> Failure {
    Failure::Verification(msg, report)
}

fn cmd_check(args: &Args) -> Result<Report, Failure> {
    let gf = load(args)?;
    let nl = resolve_nl(args, false)?;
    let rho = positive("--rho", args.rho)?;
    let m0 = positive("--M0", args.m0)?;
    let beta = positive("--beta", args.beta)?;
    if nl.is_none() && (rho.is_some() || m0.is_some() || beta.is_some()) {
        return Err(input("--rho, --beta and --M0 need --nl"));
    }
    let h0 = resolve_h0(&gf, args)?;
    let (g, p, h) = (&gf.graph, &gf.partition, &gf.h);

    let mut report = Report::new();
    meta(&mut report, "check", args, &gf);
    let mut verdicts = vec![
        check_h(g, p, h, HCheck::H1 { h0 }),
        check_h(g, p, h, HCheck::H2),
        check_h(g, p, h, HCheck::H3 { h0 }),
    ];
    let mut problems = Vec::new();
    match lambda1(g, p, 1e-12, 10_000) {
        Ok(eig) => {
            report.push("eigen", json!({ "lambda1": eig.lambda1, "iterations": eig.iterations, "residual": eig.residual }));
            match constants(g, p, h, h0, eig.lambda1) {
                Ok(c) => report.push("constants", &c),
                Err(e) => problems.push(format!("constants: {e}")),
            }
        }
        Err(e) => problems.push(format!("eigenvalue: {e}")),
    }

    let mut sets = Vec::new();
    if let Some(nl) = &nl {
        let (c, pp) = nl.growth_constants();
        let ar = nl.ar_constants();
        let mu_min = g.mu_min();
        let grid = GridSpec::default_for(ar.map(|a| a.1), m0);
        let mut extras = CheckExtras {
            theta: ar.map(|a| a.0),
            m: ar.map(|a| a.1),
            growth_c: Some(c),
            growth_p: Some(pp),
            mu_min: Some(mu_min),
            h0: Some(h0),
            m0,
            ..Default::default()
        };
        let mut f_list = vec![
            Hypothesis::F1,
            Hypothesis::F2,
            Hypothesis::F3,
            Hypothesis::F4,
            Hypothesis::F5,
            Hypothesis::F6,
            Hypothesis::F7,
        ];
        if let Some(m0) = m0 {
            let (max_f, _) = max_abs_primitive(nl, m0, grid.points);
            let beta_bound = m0 * m0 / (2.0 * mu_min * h0 * max_f) - 1.0;
            extras.beta = Some(beta.unwrap_or(beta_bound).max(f64::MIN_POSITIVE));
            report.push(
                "level_ball",
                json!({ "M0": m0, "rho": m0 * m0 / (mu_min * h0), "max_abs_primitive": max_f, "beta_bound": beta_bound, "beta": extras.beta }),
            );
            f_list.push(Hypothesis::F8);
        }
        for which in f_list {
            match check_f(nl, which, &grid, &extras) {
                Ok(v) => verdicts.push(v),
                Err(e) => verdicts.push(HypothesisVerdict {
                    name: which,
                    holds: false,
                    witness: format!("not checked: {e}"),
                    sampled_range: None,
                }),
            }
        }
        if let Some((theta, m)) = ar {
            match ar_lower_bound(nl, theta, m, &grid) {
                Ok(b) => report.push(
                    "ar_lower_bound",
                    json!({ "theta": b.theta, "M": b.m, "c_plus": b.c_plus, "c_minus": b.c_minus, "C": b.big_c, "gap_at_M": b.gap_at_m, "holds": b.verdict.holds, "witness": b.verdict.witness }),
                ),
                Err(e) => problems.push(format!("AR lower bound: {e}")),
            }
        }
        let mut beta_ok = false;
        if let Some(rho) = rho {
            let choice = if holds(&verdicts, Hypothesis::H1) {
                KappaChoice::LowerBound
            } else {
                KappaChoice::IntegralBound
            };
            match Problem::new(g.clone(), p.clone(), h.clone(), nl.clone(), h0)
                .and_then(|pr| pr.ball_constants(rho, choice, grid.points))
            {
                Ok(bc) => {
                    let beta_used = beta.unwrap_or(bc.beta_max);
                    beta_ok = beta_used > 0.0 && beta_used <= bc.beta_max;
                    report.push(
                        "ball",
                        json!({ "constants": bc, "beta": beta_used, "beta_admissible": beta_ok }),
                    );
                }
                Err(e) => problems.push(format!("ball constants: {e}")),
            }
        }
        for set in HypothesisSet::ALL {
            let applicable = match set {
                HypothesisSet::TwoSolutionsBall => rho.is_some(),
                HypothesisSet::TwoSolutionsLevel => m0.is_some(),
                _ => true,
            };
            if applicable {
                sets.push((set, set.holds(&verdicts, beta_ok)));
            }
        }
    }
    push_verdicts(&mut report, &verdicts);
    for (set, ok) in &sets {
        report.push("hypothesis_set", json!({ "name": set.name(), "holds": ok }));
    }

    let h_ok = holds(&verdicts, Hypothesis::H2)
        && (holds(&verdicts, Hypothesis::H1) || holds(&verdicts, Hypothesis::H3));
    let set_ok = nl.is_none() || sets.iter().any(|s| s.1);
    let status = if h_ok && set_ok { "ok" } else { "failed" };
    report.push("summary", json!({ "status": status, "problems": problems }));
    if !h_ok {
        return Err(verify("H2 fails or neither H1 nor H3 holds".into(), report));
    }
    if !set_ok {
        return Err(verify(
            "no hypothesis set of the existence results holds".into(),
            report,
        ));
    }
    Ok(report)
}

fn cmd_eigen(args: &Args) -> Result<Report, Failure> {
    let gf = load(args)?;
    let tol = positive("--tol", args.tol)?.unwrap_or(1e-12);
    let max_iter = args.max_iter.unwrap_or(10_000);
    let mut report = Report::new();
    meta(&mut report, "eigen", args, &gf);
    let eig = match lambda1(&gf.graph, &gf.partition, tol, max_iter) {
        Ok(e) => e,
        Err(e) => return Err(verify(e.to_string(), report)),
    };
    report.push(
        "eigen",
        json!({
            "lambda1": eig.lambda1,
            "iterations": eig.iterations,
            "residual": eig.residual,
            "eigenfunction": id_values(&gf, &eig.eigenfunction),
        }),
    );
    if let Some(path) = &args.out {
        write_file(
            path,
            &solution_file::write(
                &gf.graph,
                &[(String::from("eigenfunction"), &eig.eigenfunction)],
            ),
        )?;
    }
    Ok(report)
}

fn id_values(gf: &GraphFile, u: &GraphFunction) -> Vec<(String, f64)> {
    (0..gf.graph.len())
        .map(|x| (gf.graph.id(x).to_string(), u[x]))
        .collect()
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| input(format!("cannot write {}: {e}", path.display())))
}

fn build_problem(
    gf: &GraphFile,
    nl: Nonlinearity,
    h0: f64,
    report: Report,
) -> Result<Problem, Failure> {
    Problem::new(gf.graph.clone(), gf.partition.clone(), gf.h.clone(), nl, h0).map_err(|e| {
        let msg = match e {
            VariationalError::AdmissibilityFailed => {
                format!("{e}: neither h >= h0 = {h0} on the domain nor the integral bound holds")
            }
            other => other.to_string(),
        };
        verify(msg, report)
    })
}

fn cmd_gradcheck(args: &Args) -> Result<Report, Failure> {
    let gf = load(args)?;
    let nl = resolve_nl(args, true)?.expect("required");
    let h0 = resolve_h0(&gf, args)?;
    let mut report = Report::new();
    meta(&mut report, "gradcheck", args, &gf);
    let pr = build_problem(&gf, nl, h0, report.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed.unwrap_or(0));
    let (mut worst_fd, mut worst_weak) = (0.0f64, 0.0f64);
    const SAMPLES: usize = 5;
    for _ in 0..SAMPLES {
        let vals: Vec<f64> = (0..pr.interior_len())
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        let u = pr.partition.extend_by_zero(&vals);
        let grad = pr.gradient(&u).map_err(|e| input(e.to_string()))?;
        let r = pr
            .pointwise_residual(&u)
            .map_err(|e| input(e.to_string()))?;
        for &x in pr.partition.omega() {
            let step = 1e-6 * u[x].abs().max(1.0);
            let mut up = u.clone();
            up[x] += step;
            let mut dn = u.clone();
            dn[x] -= step;
            let fd = (pr.phi(&up).map_err(|e| input(e.to_string()))?
                - pr.phi(&dn).map_err(|e| input(e.to_string()))?)
                / (2.0 * step);
            worst_fd = worst_fd.max((fd - grad[x]).abs() / grad[x].abs().max(1e-3));
            let delta = GraphFunction::spike(pr.graph.len(), x, 1.0);
            let weak = pr
                .directional_derivative(&u, &delta)
                .map_err(|e| input(e.to_string()))?;
            let strong = pr.graph.measure(x) * r[x];
            worst_weak = worst_weak.max((weak - strong).abs() / strong.abs().max(1.0));
        }
    }
    let ok = worst_fd <= 1e-6 && worst_weak <= 1e-12;
    report.push(
        "gradcheck",
        json!({
            "samples": SAMPLES,
            "max_fd_relative_error": worst_fd,
            "fd_tolerance": 1e-6,
            "max_weak_vs_pointwise_error": worst_weak,
            "weak_tolerance": 1e-12,
            "holds": ok,
        }),
    );
    if ok {
        Ok(report)
    } else {
        Err(verify("gradient check exceeded tolerance".into(), report))
    }
}

fn solver_failure(e: SolverError, report: Report) -> Failure {
    match e {
        SolverError::InvalidConfig(m) => input(m),
        other => verify(other.to_string(), report),
    }
}

fn push_solve_report(report: &mut Report, gf: &GraphFile, rep: &SolveReport) {
    push_verdicts(report, &rep.hypothesis_verdicts);
    report.push("constants", &rep.constants);
    if let Some(ball) = &rep.ball {
        report.push("ball", ball);
    }
    if let Some(e) = &rep.endpoint {
        report.push(
            "endpoint",
            json!({
                "vertex": gf.graph.id(e.vertex),
                "t": e.t,
                "phi": e.phi,
                "empirical_radius": e.empirical_radius,
                "samples": e.samples,
            }),
        );
    }
    for (i, s) in rep.solutions.iter().enumerate() {
        report.push(
            "solution",
            json!({
                "index": i,
                "kind": s.kind.name(),
                "phi": s.phi_value,
                "grad_norm": s.grad_norm,
                "residual_max": s.residual_max,
                "h_norm": s.h_norm,
                "in_ball": s.in_ball,
                "rho": s.rho,
                "converged": s.converged,
                "newton_iterations": s.newton_iterations,
                "tikhonov_shift": s.tikhonov_shift,
                "weak_residual_max": s.weak_residual_max,
                "values": id_values(gf, &s.u),
            }),
        );
    }
    for t in &rep.iteration_trace {
        report.push(
            "trace",
            json!({ "solver": t.solver.name(), "iteration": t.iteration, "phi": t.phi, "grad_norm": t.grad_norm }),
        );
    }
    for (i, snap) in rep.snapshots.iter().enumerate() {
        report.push(
            "path_snapshot",
            json!({ "snapshot": i, "iteration": snap.iteration, "points": snap.points }),
        );
    }
    report.push(
        "summary",
        json!({
            "status": "ok",
            "lambda1": rep.lambda1,
            "solutions": rep.solutions.len(),
            "ps_diagnostic": rep.ps_diagnostic,
            "notes": rep.notes,
        }),
    );
}

fn write_outputs(args: &Args, gf: &GraphFile, rep: &SolveReport) -> Result<(), Failure> {
    if let Some(path) = &args.out {
        let blocks: Vec<(String, &GraphFunction)> = rep
            .solutions
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let ball = s
                    .in_ball
                    .map(|b| format!(" in_ball={b}"))
                    .unwrap_or_default();
                (
                    format!(
                        "solution {} kind={} phi={}{ball}",
                        i + 1,
                        s.kind.name(),
                        report::sig17(s.phi_value)
                    ),
                    &s.u,
                )
            })
            .collect();
        write_file(path, &solution_file::write(&gf.graph, &blocks))?;
    }
    if let Some(path) = &args.emit_path_profile {
        let mut csv = String::from("snapshot,iteration,s,phi\n");
        for (i, snap) in rep.snapshots.iter().enumerate() {
            for (s, phi) in &snap.points {
                csv.push_str(&format!(
                    "{i},{},{},{}\n",
                    snap.iteration,
                    report::sig17(*s),
                    report::sig17(*phi)
                ));
            }
        }
        write_file(path, &csv)?;
    }
    Ok(())
}

fn cmd_solve(args: &Args) -> Result<Report, Failure> {
    let gf = load(args)?;
    let nl = resolve_nl(args, true)?.expect("required");
    let h0 = resolve_h0(&gf, args)?;
    let cfg = solver_config(args)?;
    let mut report = Report::new();
    meta(&mut report, "solve", args, &gf);
    report.push("config", config_record(&cfg, h0));
    let pr = build_problem(&gf, nl, h0, report.clone())?;
    let rep = solve_single(&pr, &cfg).map_err(|e| solver_failure(e, report.clone()))?;
    push_solve_report(&mut report, &gf, &rep);
    write_outputs(args, &gf, &rep)?;
    Ok(report)
}

fn cmd_solve2(args: &Args) -> Result<Report, Failure> {
    let gf = load(args)?;
    let nl = resolve_nl(args, true)?.expect("required");
    let rho = positive("--rho", args.rho)?;
    let m0 = positive("--M0", args.m0)?;
    let beta = args.beta;
    let mode = match (rho, m0) {
        (Some(_), Some(_)) => {
            return Err(input(
                "--rho and --M0 select different balls; pass only one",
            ))
        }
        (None, None) => return Err(input("solve2 needs --rho or --M0")),
        (Some(rho), None) => TwoSolutionMode::Radius { rho, beta },
        (None, Some(m0)) => TwoSolutionMode::Level { m0, beta },
    };
    let h0 = resolve_h0(&gf, args)?;
    let cfg = solver_config(args)?;
    let mut report = Report::new();
    meta(&mut report, "solve2", args, &gf);
    report.push("config", config_record(&cfg, h0));
    let pr = build_problem(&gf, nl, h0, report.clone())?;
    let rep = two_solutions(&pr, &cfg, mode).map_err(|e| solver_failure(e, report.clone()))?;
    push_solve_report(&mut report, &gf, &rep);
    write_outputs(args, &gf, &rep)?;
    Ok(report)
}

fn config_record(cfg: &SolverConfig, h0: f64) -> serde_json::Value {
    json!({
        "h0": h0,
        "path_points": cfg.path_points,
        "deform_steps": cfg.deform_steps,
        "deform_tol": cfg.deform_tol,
        "newton_tol": cfg.newton_tol,
        "newton_max": cfg.newton_max,
        "step_rule": cfg.step_rule,
        "seed": cfg.seed,
        "weak_tests": cfg.weak_tests,
        "grid_points": cfg.grid_points,
    })
}
