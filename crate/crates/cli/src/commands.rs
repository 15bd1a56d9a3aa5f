use std::path::{Path, PathBuf};

use clap::Parser;
use pihier_core::acceptance::{self, default_fixture_dir, load_fixture, CriterionReport};
use pihier_core::diffpoly::{generate_equation, EquationOptions};
use pihier_core::gfun::{make_gfunction, pi2_crosscheck, verify_positivity};
use pihier_core::kdvlab::{
    build_initial_data, compare_double_scaling, critical_point, kdv_evolve, CompareOptions,
    CriticalPoint, DataParams, InitialDataSpec, KdvConfig, Taper,
};
use pihier_core::painleve::{solve_pole_free, verify_asymptotics, BvpConfig, SolvePath};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::*;
use crate::config::ExperimentConfig;
use crate::error::{schema, CliError};
use crate::manifest::RunManifest;
use crate::output::{columns_csv, fmt_f64, to_json, Sink};

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let sink = Sink {
        out_dir: cli.out_dir.clone(),
    };
    let fmt = cli.format;
    match &cli.command {
        Command::Hierarchy {
            action: HierarchyCmd::Gen(a),
        } => hierarchy(a, fmt, &sink),
        Command::Gfun(a) => gfun(a, fmt, &sink),
        Command::Painleve {
            action: PainleveCmd::Solve(a),
        } => painleve(a, fmt, &sink),
        Command::Kdv { action } => match action {
            KdvCmd::Critical(a) => critical(a, fmt, &sink),
            KdvCmd::Run(a) => kdv_run(a, fmt, &sink),
            KdvCmd::Compare(a) => compare(a, fmt, &sink),
        },
        Command::Compare(a) => compare(a, fmt, &sink),
        Command::Verify(a) => verify(a, fmt, &sink),
        Command::Run(a) => run(a, cli.out_dir.as_deref()),
    }
}

fn hierarchy(a: &GenArgs, fmt: Option<Format>, sink: &Sink) -> Result<(), CliError> {
    let opts = if a.no_times {
        EquationOptions::default()
    } else {
        EquationOptions::with_times()
    };
    // the symbolic recursion is defined for every m; only the solvers need m even
    let eq = generate_equation(a.m, opts.allow_odd())?;
    let text = match fmt.unwrap_or(Format::Json) {
        Format::Json => to_json(&eq),
        Format::Csv => {
            let mut out = String::from("coefficient,monomial\n");
            for (mono, c) in eq.paper_normalized.terms().rev() {
                out.push_str(&format!("{c},{mono}\n"));
            }
            out
        }
    };
    sink.emit(sink.resolve(a.out.as_deref(), None).as_deref(), &text)
}

#[derive(Serialize)]
struct GfunRecord {
    m: u32,
    sign: i32,
    z0: f64,
    c_asym: f64,
    c_coeffs: Vec<String>,
    b_coeffs: Vec<String>,
    positivity: bool,
    /// Only defined for m = 2, where the rescaling to Painlevé II applies.
    crosscheck: Option<f64>,
    real_roots: usize,
    min_g: f64,
}

fn gfun(a: &GfunArgs, fmt: Option<Format>, sink: &Sink) -> Result<(), CliError> {
    let pairs: Vec<(u32, i32)> =
        a.m.iter()
            .flat_map(|&m| a.sign.iter().map(move |&s| (m, s)))
            .collect();
    let records = pairs
        .par_iter()
        .map(|&(m, sign)| -> Result<GfunRecord, CliError> {
            let spec = make_gfunction(m, sign)?;
            let rep = verify_positivity(&spec);
            Ok(GfunRecord {
                m,
                sign,
                z0: spec.z0,
                c_asym: spec.c_asym,
                c_coeffs: spec.c_coeffs.iter().map(ToString::to_string).collect(),
                b_coeffs: spec.b_coeffs.iter().map(ToString::to_string).collect(),
                positivity: rep.passed,
                crosscheck: (m == 2).then(pi2_crosscheck),
                real_roots: rep.real_roots,
                min_g: rep.min_g,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let text = match fmt.unwrap_or(Format::Json) {
        Format::Json if records.len() == 1 => to_json(&records[0]),
        Format::Json => to_json(&records),
        Format::Csv => {
            let mut out = String::from("m,sign,z0,c_asym,positivity,crosscheck,real_roots,min_g\n");
            for r in &records {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    r.m,
                    r.sign,
                    fmt_f64(r.z0),
                    fmt_f64(r.c_asym),
                    r.positivity,
                    r.crosscheck.map(fmt_f64).unwrap_or_default(),
                    r.real_roots,
                    fmt_f64(r.min_g)
                ));
            }
            out
        }
    };
    sink.emit(sink.resolve(a.out.as_deref(), None).as_deref(), &text)
}

#[derive(Serialize)]
struct SolveSidecar {
    m: u32,
    t: Vec<f64>,
    #[serde(rename = "S")]
    s: f64,
    #[serde(rename = "N")]
    n: usize,
    residual_sup: f64,
    newton_iters: usize,
    converged: bool,
    path: SolvePath,
    /// Log-log slope of the correction to the leading behaviour for s > 0.
    fitted_exponent: Option<f64>,
    fitted_c: Option<f64>,
    fitted_exponent_negative: Option<f64>,
    fitted_c_negative: Option<f64>,
}

#[derive(Serialize)]
struct SolveDocument<'a> {
    #[serde(flatten)]
    meta: &'a SolveSidecar,
    s: &'a [f64],
    q: &'a [f64],
}

fn painleve(a: &SolveArgs, fmt: Option<Format>, sink: &Sink) -> Result<(), CliError> {
    let (s_default, n_default) = if a.m <= 2 { (40.0, 2000) } else { (60.0, 1201) };
    let mut cfg = BvpConfig::new(a.m, a.s.unwrap_or(s_default), a.n.unwrap_or(n_default));
    if !a.t.is_empty() {
        cfg = cfg.with_times(&a.t);
    }
    if let Some(p) = a.stencil_order {
        cfg.stencil_order = p;
    }
    if let Some(tol) = a.tol {
        cfg.newton_tol = tol;
    }
    let sol = solve_pole_free(&cfg)?;
    let fit = verify_asymptotics(&sol).ok();
    let meta = SolveSidecar {
        m: sol.m,
        t: sol.t.clone(),
        s: sol.half_width,
        n: sol.s_grid.len(),
        residual_sup: sol.residual_sup,
        newton_iters: sol.newton_iters,
        converged: sol.converged,
        path: sol.path,
        fitted_exponent: fit.as_ref().map(|f| f.exponent),
        fitted_c: fit.as_ref().map(|f| f.c_fit),
        fitted_exponent_negative: fit.as_ref().map(|f| f.exponent_negative),
        fitted_c_negative: fit.as_ref().map(|f| f.c_fit_negative),
    };
    match fmt.unwrap_or(Format::Csv) {
        Format::Csv => {
            let target = sink
                .resolve(a.out.as_deref(), Some("sol.csv"))
                .expect("a default name is given");
            sink.emit(
                Some(&target),
                &columns_csv(&["s", "q"], &[&sol.s_grid, &sol.q_values]),
            )?;
            sink.emit(Some(&sidecar_path(&target)), &to_json(&meta))
        }
        Format::Json => {
            let target = sink.resolve(a.out.as_deref(), Some("sol.json"));
            let doc = SolveDocument {
                meta: &meta,
                s: &sol.s_grid,
                q: &sol.q_values,
            };
            sink.emit(target.as_deref(), &to_json(&doc))
        }
    }
}

fn sidecar_path(target: &Path) -> PathBuf {
    let p = target.with_extension("json");
    if p == target {
        target.with_extension("meta.json")
    } else {
        p
    }
}

/// Initial data, order and the loaded config for the KdV commands.
struct Experiment {
    m: u32,
    data: InitialDataSpec,
    config: ExperimentConfig,
}

fn experiment(a: &DataArgs, half_width: Option<f64>) -> Result<Experiment, CliError> {
    let config = match &a.data {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    let m = match a.m {
        Some(m) => m,
        None => config.get("data", "m")?.unwrap_or(2),
    };
    let mut params = DataParams::default();
    if let Some(v) = config.get("data", "x_m")? {
        params.x_m = v;
    }
    if let Some(v) = config.get("data", "u_c")? {
        params.u_c = v;
    }
    if let Some(v) = config.get("data", "top_derivative")? {
        params.top_derivative = v;
    }
    if let Some(v) = config.get("data", "beta")? {
        params.beta = v;
    }
    if let Some(v) = half_width.or(config.get("grid", "L")?) {
        params.half_width = v;
    }
    let mut data = build_initial_data(m, &params)?;
    let start = config.get("data", "taper_start")?;
    let end = config.get("data", "taper_end")?;
    if start.is_some() || end.is_some() {
        let d = Taper::default();
        data.taper = Taper {
            start: start.unwrap_or(d.start),
            end: end.unwrap_or(d.end),
        };
        data.validate()?;
    }
    Ok(Experiment { m, data, config })
}

#[derive(Serialize)]
struct CriticalRecord<'a> {
    #[serde(flatten)]
    cp: &'a CriticalPoint,
    /// `F, F_u, F_uu` at the critical point.
    residuals: [f64; 3],
    data: &'a InitialDataSpec,
}

fn critical(a: &CriticalArgs, fmt: Option<Format>, sink: &Sink) -> Result<(), CliError> {
    let ex = experiment(&a.data, None)?;
    let cp = critical_point(&ex.data, ex.m)?;
    let text = match fmt.unwrap_or(Format::Json) {
        Format::Json => to_json(&CriticalRecord {
            cp: &cp,
            residuals: cp.residuals(&ex.data),
            data: &ex.data,
        }),
        Format::Csv => format!(
            "m,x_c,t_c,u_c,k\n{},{},{},{},{}\n",
            cp.m,
            fmt_f64(cp.x_c),
            fmt_f64(cp.t_c),
            fmt_f64(cp.u_c),
            fmt_f64(cp.k)
        ),
    };
    sink.emit(sink.resolve(a.out.as_deref(), None).as_deref(), &text)
}

fn required<T>(v: Option<T>, what: &str) -> Result<T, CliError> {
    v.ok_or_else(|| {
        schema(format!(
            "{what} is required, on the command line or in the config"
        ))
    })
}

#[derive(Serialize)]
struct FieldDocument<'a> {
    m: u32,
    eps: f64,
    t: f64,
    #[serde(rename = "L")]
    l: f64,
    #[serde(rename = "N")]
    n: usize,
    steps: usize,
    dt: f64,
    tail: f64,
    mass: f64,
    x: &'a [f64],
    u: &'a [f64],
}

fn kdv_run(a: &KdvRunArgs, fmt: Option<Format>, sink: &Sink) -> Result<(), CliError> {
    let ex = experiment(&a.data, a.l)?;
    let c = &ex.config;
    let eps = required(a.eps.or(c.get("grid", "eps")?), "eps")?;
    let t = required(a.t.or(c.get("grid", "t")?), "t")?;
    let n = a.n.or(c.get("grid", "N")?).unwrap_or(8192);
    let mut cfg = KdvConfig::new(eps, ex.data.half_width, n);
    if let Some(v) = a.courant.or(c.get("grid", "courant")?) {
        cfg.courant = v;
    }
    if let Some(v) = c.get("grid", "tail_tol")? {
        cfg.tail_tol = v;
    }
    let field = kdv_evolve(&ex.data, &cfg, t)?;
    let x = field.grid();
    match fmt.unwrap_or(Format::Csv) {
        Format::Csv => {
            let target = sink.resolve(a.out.as_deref(), Some("u.csv"));
            sink.emit(
                target.as_deref(),
                &columns_csv(&["x", "u"], &[&x, &field.values]),
            )
        }
        Format::Json => {
            let target = sink.resolve(a.out.as_deref(), Some("u.json"));
            let doc = FieldDocument {
                m: ex.m,
                eps,
                t: field.t,
                l: field.half_width,
                n: field.n,
                steps: field.steps,
                dt: field.dt,
                tail: field.tail,
                mass: field.mass(),
                x: &x,
                u: &field.values,
            };
            sink.emit(target.as_deref(), &to_json(&doc))
        }
    }
}

fn compare(a: &CompareArgs, fmt: Option<Format>, sink: &Sink) -> Result<(), CliError> {
    let ex = experiment(&a.data, None)?;
    let c = &ex.config;
    let eps = if a.eps.is_empty() {
        required(c.list("compare", "eps")?, "eps")?
    } else {
        a.eps.clone()
    };
    let mut opts = CompareOptions::for_order(ex.m);
    opts.kdv_half_width = ex.data.half_width;
    if let Some(v) = a.n.or(c.get("grid", "N")?) {
        opts.kdv_points = v;
    }
    if let Some(v) = c.get("grid", "courant")? {
        opts.courant = v;
    }
    if let Some(v) = c.get("grid", "tail_tol")? {
        opts.tail_tol = v;
    }
    let w = &mut opts.window;
    let [s_lo, s_hi] = &mut w.s;
    let [t_lo, t_hi] = &mut w.t1;
    for (key, slot) in [
        ("s_min", s_lo),
        ("s_max", s_hi),
        ("t1_min", t_lo),
        ("t1_max", t_hi),
    ] {
        if let Some(v) = c.get("compare", key)? {
            *slot = v;
        }
    }
    if let Some(v) = c.get("compare", "s_points")? {
        w.s_points = v;
    }
    if let Some(v) = c.get("compare", "t1_points")? {
        w.t1_points = v;
    }
    if w.s_points == 0 || w.t1_points == 0 {
        return Err(schema("window point counts must be positive"));
    }
    if let Some(v) = c.get("compare", "bvp_S")? {
        opts.bvp_half_width = v;
    }
    if let Some(v) = c.get("compare", "bvp_N")? {
        opts.bvp_points = v;
    }
    let report = compare_double_scaling(&ex.data, ex.m, &eps, &opts)?;
    match fmt.unwrap_or(Format::Json) {
        Format::Json => {
            let target = sink.resolve(a.out.as_deref(), Some("report.json"));
            sink.emit(target.as_deref(), &to_json(&report))
        }
        Format::Csv => {
            let target = sink.resolve(a.out.as_deref(), Some("report.csv"));
            let text = columns_csv(
                &["eps", "err", "err_leading"],
                &[&report.eps, &report.err, &report.err_leading],
            );
            sink.emit(target.as_deref(), &text)
        }
    }
}

fn verify(a: &VerifyArgs, fmt: Option<Format>, sink: &Sink) -> Result<(), CliError> {
    let dir = a.fixtures.clone().unwrap_or_else(default_fixture_dir);
    for m in 0..=4 {
        load_fixture(&dir.join(format!("hierarchy_m{m}.json")))?;
    }
    let mut criteria: Vec<Box<dyn Fn() -> CriterionReport>> = vec![
        Box::new(|| acceptance::a1(&dir)),
        Box::new(acceptance::a2),
        Box::new(acceptance::a3),
        Box::new(acceptance::a4),
        Box::new(acceptance::a5),
        Box::new(acceptance::a6),
        Box::new(acceptance::a7),
        Box::new(acceptance::a8),
    ];
    if a.long {
        criteria.push(Box::new(acceptance::a9));
        criteria.push(Box::new(acceptance::a10));
    }
    let json = fmt == Some(Format::Json);
    let mut reports = Vec::new();
    for run in &criteria {
        let r = run();
        if !json {
            println!("{r}");
        }
        reports.push(r);
    }
    let target = sink.resolve(a.out.as_deref(), None);
    if json || target.is_some() {
        sink.emit(target.as_deref(), &to_json(&reports))?;
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    if failed > 0 {
        return Err(CliError::CriteriaFailed {
            failed,
            total: reports.len(),
        });
    }
    Ok(())
}

fn run_manifest(path: &Path, out_dir: Option<&Path>) -> Result<(), CliError> {
    let manifest = RunManifest::load(path)?;
    let argv = manifest.to_argv()?;
    let mut cli = Cli::try_parse_from(&argv)
        .map_err(|e| schema(format!("{}: {}", path.display(), e.render())))?;
    cli.out_dir = out_dir.map(Path::to_path_buf);
    execute(&cli)
}

fn check_manifest(path: &Path) -> Result<String, CliError> {
    let manifest = RunManifest::load(path)?;
    Cli::try_parse_from(manifest.to_argv()?)
        .map_err(|e| schema(format!("{}: {}", path.display(), e.render())))?;
    Ok(manifest.to_json())
}

fn run(a: &RunArgs, out_dir: Option<&Path>) -> Result<(), CliError> {
    if a.check {
        for path in &a.manifest {
            print!("{}", check_manifest(path)?);
        }
        return Ok(());
    }
    let results: Vec<Result<(), CliError>> = a
        .manifest
        .par_iter()
        .map(|p| run_manifest(p, out_dir))
        .collect();
    let mut worst: Option<CliError> = None;
    for (path, r) in a.manifest.iter().zip(results) {
        let Err(e) = r else { continue };
        eprintln!("{}: {e}", path.display());
        if worst.as_ref().is_none_or(|w| e.exit_code() > w.exit_code()) {
            worst = Some(e);
        }
    }
    worst.map_or(Ok(()), Err)
}
