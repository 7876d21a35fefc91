//! `hvlab`: realize functions, apply operators, estimate norms and run the
//! registered experiments from the command line.

mod args;

use args::{parse_list, parse_n_list, Cli, Command, ExperimentArgs, Format};
use clap::Parser;
use hvlab_core::lab::{self, ExperimentParams, EXPERIMENTS};
use hvlab_core::norms::{estimate, SpaceSpec};
use hvlab_core::operators::{cesaro, companion_report, multiplication_report, volterra_report, Op};
use hvlab_core::report::{fmt_num, svg_plot, ExperimentReport};
use hvlab_core::series::realize;
use hvlab_core::{suite, FunctionSpec, HvError, RunConfig, Scalar, TaylorSeries};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_EXPECTATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

enum Failure {
    Usage(String),
    Numerical(String),
    Expectation(String),
}

impl From<HvError> for Failure {
    fn from(e: HvError) -> Self {
        match e {
            HvError::InvalidSpec(_)
            | HvError::InvalidConfig(_)
            | HvError::OrderOverflow { .. }
            | HvError::ConstantSymbol
            | HvError::Json(_)
            | HvError::Io(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("hvlab: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("hvlab: numerical validity failure: {m}");
            ExitCode::from(EXIT_NUMERICAL)
        }
        Err(Failure::Expectation(m)) => {
            eprintln!("{m}");
            ExitCode::from(EXIT_EXPECTATION)
        }
    }
}

fn threads() -> Result<usize, Failure> {
    match std::env::var("HVLAB_THREADS") {
        Err(_) => Ok(1),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(Failure::Usage(format!("HVLAB_THREADS must be a positive integer (got `{v}`)"))),
        },
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, Failure> {
    let mut cfg = match &cli.global.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let g = &cli.global;
    if let Some(v) = g.order {
        cfg.order = v;
    }
    if let Some(v) = g.ladder {
        cfg.ladder_depth = v;
    }
    if let Some(v) = g.depth {
        cfg.dyadic_depth = v;
    }
    if let Some(v) = g.tol {
        cfg.tol = v;
    }
    if let Some(v) = g.seed {
        cfg.seed = v;
    }
    if let Some(v) = &g.out {
        cfg.out = Some(v.display().to_string());
    }
    Ok(cfg.validate()?)
}

fn spec(text: &str) -> Result<FunctionSpec, Failure> {
    FunctionSpec::parse(text).map_err(|e| Failure::Usage(format!("cannot read function `{text}`: {e}")))
}

fn coefficients_csv(f: &TaylorSeries) -> String {
    let mut s = String::from("k,re,im\n");
    for (k, a) in f.coeffs().iter().enumerate() {
        s.push_str(&format!("{k},{},{}\n", fmt_num(a.re), fmt_num(a.im)));
    }
    s
}

fn coefficients_json(f: &TaylorSeries) -> serde_json::Value {
    serde_json::json!({
        "order": f.order(),
        "exact": f.is_exact(),
        "tail": f.tail_hint(),
        "coefficients": f.coeffs().iter().map(|a| [a.re, a.im]).collect::<Vec<_>>(),
    })
}

fn emit(out: Option<&Path>, file: &str, body: &str) -> Result<(), Failure> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(HvError::from)?;
            let tmp = dir.join(format!(".{file}.tmp"));
            std::fs::write(&tmp, body).map_err(HvError::from)?;
            std::fs::rename(&tmp, dir.join(file)).map_err(HvError::from)?;
            Ok(())
        }
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    let cfg = load_config(&cli)?;
    let out: Option<PathBuf> = cfg.out.as_ref().map(PathBuf::from);
    match &cli.command {
        Command::Realize { f, format } => {
            let s = realize(&spec(f)?, cfg.order)?;
            match format {
                Format::Csv => emit(out.as_deref(), "coefficients.csv", &coefficients_csv(&s)),
                Format::Json => emit(out.as_deref(), "coefficients.json", &(serde_json::to_string_pretty(&coefficients_json(&s)).unwrap() + "\n")),
            }
        }
        Command::ApplyOp { op, g, f, format } => {
            let op: Op = op.parse().map_err(Failure::Usage)?;
            let fs = realize(&spec(f)?, cfg.order)?;
            let (result, report) = match op {
                Op::Cesaro => {
                    let r = cesaro(&fs);
                    (r, None)
                }
                _ => {
                    let g = g.as_deref().ok_or_else(|| Failure::Usage(format!("operator {op:?} needs --g")))?;
                    let gs = realize(&spec(g)?, cfg.order)?;
                    let (r, rep) = match op {
                        Op::Volterra => volterra_report(&gs, &fs),
                        Op::Companion => companion_report(&gs, &fs),
                        _ => multiplication_report(&gs, &fs),
                    };
                    (r, Some(rep))
                }
            };
            if let Some(rep) = &report {
                eprintln!("{}", serde_json::to_string(rep).unwrap());
            }
            match format {
                Format::Csv => emit(out.as_deref(), "result.csv", &coefficients_csv(&result)),
                Format::Json => {
                    let v = serde_json::json!({ "result": coefficients_json(&result), "report": report });
                    emit(out.as_deref(), "result.json", &(serde_json::to_string_pretty(&v).unwrap() + "\n"))
                }
            }
        }
        Command::Norm { space, f, g, json, min_safe_radius } => {
            let space: SpaceSpec = space.parse()?;
            let fs = realize(&spec(f)?, cfg.order)?;
            let gs = match g {
                Some(g) => Some(realize(&spec(g)?, cfg.order)?),
                None => None,
            };
            let est = estimate(space, &fs, gs.as_ref(), &cfg.norm_context())?;
            if *json {
                emit(out.as_deref(), "estimate.json", &(est.to_json() + "\n"))?;
            } else {
                println!("{:?}", est.value);
                eprintln!("{} ({:?})", est.status, est.rule);
            }
            if let (Some(want), Some(got)) = (min_safe_radius, est.safe_radius) {
                if got < *want {
                    return Err(Failure::Numerical(format!("safe radius {got} is below the requested {want}")));
                }
            }
            Ok(())
        }
        Command::Experiment(args) => run_experiment(args, &cfg, out.as_deref()),
        Command::Suite { name } => {
            let outcome = suite::run_suite(name, &cfg, threads()?)?;
            if let Some(dir) = &out {
                outcome.write(dir)?;
            }
            print!("{}", outcome.summary());
            eprint!("{}", outcome.timings());
            if outcome.passed() {
                Ok(())
            } else {
                let mut m = String::new();
                for c in outcome.criteria.iter().filter(|c| !c.passed()) {
                    m.push_str(&format!("criterion {} ({}) failed\n{}", c.index, c.name, c.report.failure_summary()));
                }
                Err(Failure::Expectation(m))
            }
        }
    }
}

fn experiment_params(args: &ExperimentArgs) -> Result<ExperimentParams, Failure> {
    let mut p: ExperimentParams = match &args.params {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(HvError::from)?;
            serde_json::from_str(&text).map_err(HvError::from)?
        }
        None => ExperimentParams::default(),
    };
    let opt = |s: &Option<String>| s.as_deref().map(spec).transpose();
    p.g = opt(&args.g)?.or(p.g);
    p.f = opt(&args.f)?.or(p.f);
    p.h = opt(&args.h)?.or(p.h);
    p.f2 = opt(&args.f2)?.or(p.f2);
    p.symbol = opt(&args.symbol)?.or(p.symbol);
    p.p = args.p.or(p.p);
    p.p1 = args.p1.or(p.p1);
    p.p2 = args.p2.or(p.p2);
    p.gamma = args.gamma.or(p.gamma);
    p.delta = args.delta.or(p.delta);
    p.alpha = args.alpha.or(p.alpha);
    if let Some(n) = &args.n {
        p.n = Some(parse_n_list(n).map_err(Failure::Usage)?);
    }
    if let Some(d) = &args.degrees {
        p.degrees = Some(parse_list(d).map_err(Failure::Usage)?);
    }
    if let Some(z) = &args.zeros {
        let v: Vec<Scalar> = serde_json::from_str(z).map_err(|e| Failure::Usage(format!("--zeros expects a JSON list of scalars: {e}")))?;
        p.zeros = Some(v);
    }
    Ok(p)
}

fn run_experiment(args: &ExperimentArgs, cfg: &RunConfig, out: Option<&Path>) -> Result<(), Failure> {
    if !EXPERIMENTS.contains(&args.name.as_str()) {
        return Err(Failure::Usage(format!("unknown experiment `{}`; known: {}", args.name, EXPERIMENTS.join(", "))));
    }
    let params = experiment_params(args)?;
    let report = lab::run(&args.name, &params, cfg)?;
    match out {
        Some(dir) => {
            report.write(dir)?;
            if args.svg {
                write_plots(&report, dir)?;
            }
        }
        None => {
            for t in &report.tables {
                println!("# {}", t.name);
                print!("{}", t.to_csv());
            }
        }
    }
    for c in &report.checks {
        eprintln!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.rule);
    }
    expectation(&report)
}

fn write_plots(report: &ExperimentReport, dir: &Path) -> Result<(), Failure> {
    for t in &report.tables {
        let Some((x, ys)) = t.columns.split_first() else { continue };
        let ys: Vec<&str> = ys.iter().map(String::as_str).collect();
        if let Some(svg) = svg_plot(t, x, &ys, true) {
            std::fs::write(dir.join(format!("{}.svg", t.name)), svg).map_err(HvError::from)?;
        }
    }
    Ok(())
}

fn expectation(report: &ExperimentReport) -> Result<(), Failure> {
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Expectation(format!("experiment {} failed its registered expectations\n{}", report.id, report.failure_summary())))
    }
}
