//! The `paper-acceptance` suite: twelve criteria, one report each.

use crate::config::RunConfig;
use crate::disk::safe_radius_l2;
use crate::error::Result;
use crate::lab::{self, catalog, regression_pairs, ExperimentParams};
use crate::norms::{bmoa_norm_mobius, carleson_seminorm, h2_norm_exact, lp_functional, lp_functional_quadrature, mean_p, MobiusGrid};
use crate::operators::{cesaro, ibp_defect, volterra};
use crate::report::{fmt_num, ExperimentReport, Table};
use crate::series::{realize, shift_up, FunctionSpec, TaylorSeries};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

pub const SUITES: &[&str] = &["paper-acceptance"];

const TOTAL_BUDGET: Duration = Duration::from_secs(300);

#[derive(Clone, Debug)]
pub struct Criterion {
    pub index: usize,
    pub name: &'static str,
    pub report: ExperimentReport,
    pub elapsed: Duration,
    pub budget: Option<Duration>,
}

impl Criterion {
    pub fn within_budget(&self) -> bool {
        self.budget.is_none_or(|b| self.elapsed <= b)
    }

    pub fn passed(&self) -> bool {
        self.report.passed && self.within_budget()
    }

    /// `PASS  5 monomial-decay` plus the failing checks, if any. Timings are
    /// left out so that the line is reproducible.
    pub fn line(&self) -> String {
        let mut s = format!("{}  {:>2} {}", if self.passed() { "PASS" } else { "FAIL" }, self.index, self.name);
        let failed: Vec<&str> = self.report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        if !failed.is_empty() {
            s.push_str(&format!("  failed: {}", failed.join(", ")));
        }
        if !self.within_budget() {
            s.push_str("  runtime budget exceeded");
        }
        s
    }

    fn dir(&self) -> String {
        format!("{:02}-{}", self.index, self.name)
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub criteria: Vec<Criterion>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(Criterion::passed)
    }

    pub fn summary(&self) -> String {
        let mut s: String = self.criteria.iter().map(|c| c.line() + "\n").collect();
        let n = self.criteria.iter().filter(|c| c.passed()).count();
        s.push_str(&format!("{n}/{} criteria passed\n", self.criteria.len()));
        s
    }

    /// Every output file as `(relative path, contents)`.
    pub fn files(&self) -> Vec<(String, String)> {
        let mut out = vec![("summary.txt".to_string(), self.summary())];
        for c in &self.criteria {
            for (name, body) in c.report.files() {
                out.push((format!("{}/{name}", c.dir()), body));
            }
        }
        out
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        for c in &self.criteria {
            c.report.write(&dir.join(c.dir()))?;
        }
        std::fs::create_dir_all(dir)?;
        let tmp = dir.join(".summary.txt.tmp");
        std::fs::write(&tmp, self.summary())?;
        std::fs::rename(tmp, dir.join("summary.txt"))?;
        Ok(())
    }

    pub fn timings(&self) -> String {
        self.criteria.iter().map(|c| format!("{:>2} {:<24} {:>9.3} s\n", c.index, c.name, c.elapsed.as_secs_f64())).collect()
    }
}

pub fn run_suite(name: &str, cfg: &RunConfig, threads: usize) -> Result<SuiteOutcome> {
    match name {
        "paper-acceptance" => paper_acceptance(cfg, threads),
        other => Err(crate::HvError::InvalidSpec(format!("unknown suite `{other}`; known: {}", SUITES.join(", ")))),
    }
}

type Job = fn(&RunConfig) -> Result<ExperimentReport>;

const JOBS: [(&str, Option<u64>, Job); 11] = [
    ("cesaro-identity", Some(1), cesaro_identity),
    ("integration-by-parts", Some(5), integration_by_parts),
    ("parseval-bridge", Some(10), parseval_bridge),
    ("littlewood-paley", None, littlewood_paley),
    ("monomial-decay", Some(10), monomial_decay),
    ("witness-psi", Some(30), witness_psi),
    ("witness-carleson", None, witness_carleson),
    ("cyclicity", None, cyclicity),
    ("multiplier-bound", None, multiplier_bound),
    ("nonvanishing-derivative", None, nonvanishing_derivative),
    ("bmoa-closed-form", None, bmoa_closed_form),
];

/// Run one criterion job by name.
pub fn run_job(name: &str, cfg: &RunConfig) -> Result<ExperimentReport> {
    let job = JOBS.iter().find(|j| j.0 == name).ok_or_else(|| crate::HvError::InvalidSpec(format!("unknown criterion `{name}`")))?;
    (job.2)(cfg)
}

// Jobs are claimed from a shared counter and stored by index, so the outcome
// does not depend on the worker count.
fn run_jobs(cfg: &RunConfig, threads: usize) -> Result<Vec<Criterion>> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<Criterion>>>> = Mutex::new((0..JOBS.len()).map(|_| None).collect());
    let worker = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        let Some((name, budget, job)) = JOBS.get(i) else { break };
        let t = Instant::now();
        let out = job(cfg).map(|report| Criterion { index: i + 1, name, report, elapsed: t.elapsed(), budget: budget.map(Duration::from_secs) });
        slots.lock().expect("no worker panics while holding the lock")[i] = Some(out);
    };
    std::thread::scope(|s| {
        for _ in 1..threads.clamp(1, JOBS.len()) {
            s.spawn(worker);
        }
        worker();
    });
    slots.into_inner().expect("workers have finished").into_iter().map(|c| c.expect("every job ran")).collect()
}

/// Criteria 1 to 11, then a second in-process run compared byte for byte.
/// `threads` caps the number of criteria computed at once.
pub fn paper_acceptance(cfg: &RunConfig, threads: usize) -> Result<SuiteOutcome> {
    let start = Instant::now();
    let mut criteria = run_jobs(cfg, threads)?;
    let first_elapsed = start.elapsed();
    let t = Instant::now();
    let again = run_jobs(cfg, threads)?;
    let mut rep = ExperimentReport::new("determinism");
    let a = SuiteOutcome { criteria: criteria.clone() }.files();
    let b = SuiteOutcome { criteria: again }.files();
    let differing: Vec<&str> = a.iter().zip(&b).filter(|(x, y)| x != y).map(|(x, _)| x.0.as_str()).collect();
    rep.param("files_compared", a.len());
    rep.check(
        "rerun-identical",
        "a second in-process run of criteria 1-11 produces byte-identical output files",
        a.len() == b.len() && differing.is_empty(),
        if differing.is_empty() { String::new() } else { format!("differing: {}", differing.join(", ")) },
    );
    rep.check(
        "runtime",
        "one full run of criteria 1-11 takes under 5 minutes",
        first_elapsed <= TOTAL_BUDGET,
        String::new(),
    );
    rep.notes.push("the acceptance test target also runs the binary twice into separate directories and compares the files".into());
    criteria.push(Criterion { index: 12, name: "determinism", report: rep, elapsed: t.elapsed(), budget: None });
    Ok(SuiteOutcome { criteria })
}

/// Deterministic random polynomials with coefficients uniform in the unit square.
pub fn random_polynomials(seed: u64, count: usize, degree: usize) -> Vec<TaylorSeries> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let c: Vec<Complex64> = (0..=degree).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            TaylorSeries::polynomial(c).expect("finite coefficients")
        })
        .collect()
}

fn cesaro_identity(cfg: &RunConfig) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new("cesaro-identity");
    let order = 256;
    rep.param("seed", cfg.seed);
    rep.param("count", 20);
    rep.param("degree", 64);
    rep.param("order", order);
    let g = realize(&FunctionSpec::NegLogOneMinusZ, order)?;
    let mut table = Table::new("deviation", &["index", "max_deviation"]);
    let mut worst: f64 = 0.0;
    for (i, p) in random_polynomials(cfg.seed, 20, 64).iter().enumerate() {
        // as a series of order N, so that the Cesàro means continue past the degree
        let f = TaylorSeries::new(p.coeffs().iter().copied().chain(std::iter::repeat(Complex64::new(0.0, 0.0))).take(order + 1).collect())?;
        let lhs = volterra(&g, &f);
        let rhs = shift_up(&cesaro(&f), 1);
        let n = lhs.order().min(rhs.order());
        let d = (0..=n).map(|k| (lhs.coeff(k) - rhs.coeff(k)).norm()).fold(0.0, f64::max);
        worst = worst.max(d);
        table.push(vec![i as f64, d]);
    }
    rep.check("identity", "max |T_{-log(1-z)} f - z C(f)| over stored coefficients <= 1e-13", worst <= 1e-13, format!("max deviation {}", fmt_num(worst)));
    rep.tables.push(table);
    Ok(rep)
}

fn integration_by_parts(_cfg: &RunConfig) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new("integration-by-parts");
    let order = 512;
    let cat = catalog();
    rep.param("order", order);
    rep.param("pairs", regression_pairs().iter().map(|&(g, f)| format!("{} / {}", cat[g].0, cat[f].0)).collect::<Vec<_>>());
    let realized = cat.iter().map(|(_, s)| realize(s, order)).collect::<Result<Vec<_>>>()?;
    let mut table = Table::new("defects", &["pair", "g", "f", "defect"]);
    let mut worst: f64 = 0.0;
    for (i, (g, f)) in regression_pairs().into_iter().enumerate() {
        let d = ibp_defect(&realized[g], &realized[f]);
        worst = worst.max(d);
        table.push(vec![i as f64, g as f64, f as f64, d]);
    }
    rep.check("ibp", "ibp_defect <= 1e-12 on all 20 regression pairs", worst <= 1e-12, format!("max defect {}", fmt_num(worst)));
    rep.tables.push(table);
    Ok(rep)
}

fn parseval_bridge(cfg: &RunConfig) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new("parseval-bridge");
    let ladder = cfg.ladder();
    rep.param("order", cfg.order);
    rep.param("ladder_depth", cfg.ladder_depth);
    let mut table = Table::new("parseval", &["function", "r", "certified", "mean_squared", "coefficient_sum", "deviation"]);
    let mut worst: f64 = 0.0;
    let cat = catalog();
    for (i, (_, spec)) in cat.iter().enumerate() {
        let f = realize(spec, cfg.order)?;
        let safe = safe_radius_l2(&f, cfg.tol * h2_norm_exact(&f).max(1.0));
        for &r in &ladder.radii {
            let m = mean_p(&f, r, 2.0)?;
            let direct: f64 = f.coeffs().iter().enumerate().map(|(k, a)| a.norm_sqr() * r.powi(2 * k as i32)).sum();
            let d = (m * m - direct).abs();
            let certified = r <= safe;
            if certified {
                worst = worst.max(d);
            }
            table.push(vec![i as f64, r, if certified { 1.0 } else { 0.0 }, m * m, direct, d]);
        }
    }
    rep.param("functions", cat.iter().map(|c| c.0).collect::<Vec<_>>());
    rep.check(
        "parseval",
        "|M_2(r)^2 - sum |a_k|^2 r^{2k}| <= 1e-10 at every ladder radius below the safe radius, all catalog functions",
        worst <= 1e-10,
        format!("max deviation {}", fmt_num(worst)),
    );
    rep.tables.push(table);
    Ok(rep)
}

fn littlewood_paley(cfg: &RunConfig) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new("littlewood-paley");
    let order = 256;
    rep.param("order", order);
    rep.param("seed", cfg.seed);
    let mut fs = random_polynomials(cfg.seed ^ 0x5eed, 20, 64);
    for (_, spec) in catalog() {
        fs.push(realize(&spec, order)?.truncate(order));
    }
    let mut table = Table::new("sandwich", &["index", "h2_squared", "lp_functional", "quadrature", "quadrature_deviation"]);
    let (mut sandwich, mut worst) = (true, 0.0f64);
    for (i, f) in fs.iter().enumerate() {
        // the truncation as a polynomial, which the quadrature integrates exactly
        let p = TaylorSeries::polynomial(f.coeffs().to_vec())?;
        let s = h2_norm_exact(&p).powi(2);
        let phi = lp_functional(&p);
        let q = lp_functional_quadrature(&p)?;
        sandwich &= 0.5 * s <= phi && phi <= s;
        let d = (q - phi).abs() / phi.max(1.0);
        worst = worst.max(d);
        table.push(vec![i as f64, s, phi, q, d]);
    }
    rep.check("sandwich", "||f||^2/2 <= |f(0)|^2 + sum k/(k+1)|a_k|^2 <= ||f||^2 for every generated f", sandwich, String::new());
    rep.check("quadrature", "area quadrature of the functional agrees with the coefficient form to 1e-8 (relative to max(1, value))", worst <= 1e-8, format!("max deviation {}", fmt_num(worst)));
    rep.tables.push(table);
    Ok(rep)
}

fn monomial_decay(cfg: &RunConfig) -> Result<ExperimentReport> {
    let params = ExperimentParams { n: Some(lab::doubling(1, 1024)), ..Default::default() };
    lab::run("monomial-decay", &params, cfg)
}

fn witness_psi(cfg: &RunConfig) -> Result<ExperimentReport> {
    lab::witness_psi(2.0, cfg)
}

fn witness_carleson(cfg: &RunConfig) -> Result<ExperimentReport> {
    lab::witness_carleson(cfg)
}

fn cyclicity(cfg: &RunConfig) -> Result<ExperimentReport> {
    lab::cyclicity_residual(&FunctionSpec::SingularInner, &[0, 1, 2, 4, 8, 16, 32, 64], cfg)
}

fn multiplier_bound(cfg: &RunConfig) -> Result<ExperimentReport> {
    let g = FunctionSpec::NegLogOneMinusZ;
    let family = lab::concentration_family();
    let bounded = lab::multiplier_probe(&g, &FunctionSpec::poly(&[0.5, 0.5]), 2.0, &family, cfg)?;
    let unbounded = lab::multiplier_probe(&g, &FunctionSpec::NegLogOneMinusZ, 2.0, &family, cfg)?;
    let mut rep = ExperimentReport::new("multiplier-bound");
    let max_ratio = bounded.parameters["max_ratio"].as_f64().unwrap_or(f64::NAN);
    rep.check("bounded-h", "h = (1+z)/2: operator-ratio estimate <= 1 + 1e-3", max_ratio <= 1.0 + 1e-3, format!("max ratio {}", fmt_num(max_ratio)));
    let inc = unbounded.checks.iter().find(|c| c.name == "unbounded-multiplier");
    rep.check(
        "unbounded-h",
        "h = -log(1-z): ||h||_inf diverging and the ratio table strictly increasing along the family",
        inc.is_some_and(|c| c.passed),
        inc.map_or("||h||_inf estimate did not diverge".into(), |c| c.detail.clone()),
    );
    for (tag, r) in [("bounded", &bounded), ("unbounded", &unbounded)] {
        for t in &r.tables {
            let mut t = t.clone();
            t.name = format!("{tag}_{}", t.name);
            rep.tables.push(t);
        }
        for v in &r.verdicts {
            rep.verdict(&format!("{tag}: {}", v.name), v.estimate.clone());
        }
    }
    Ok(rep)
}

fn nonvanishing_derivative(cfg: &RunConfig) -> Result<ExperimentReport> {
    lab::blaschke_case(&[crate::Scalar::real(0.0)], &FunctionSpec::Monomial { n: 1 }, 1.0, 2.0, cfg)
}

fn bmoa_closed_form(cfg: &RunConfig) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new("bmoa-closed-form");
    let z = realize(&FunctionSpec::Monomial { n: 1 }, cfg.order)?;
    let b = bmoa_norm_mobius(&z, &MobiusGrid::ladder(cfg.ladder_depth, cfg.mobius_angles), cfg.tol)?;
    rep.check("bmoa-z", "bmoa_norm_mobius(z) within [1 - 1e-4, 1 + 1e-4]", (b.value - 1.0).abs() <= 1e-4, format!("value {}", fmt_num(b.value)));
    rep.verdict("BMOA z", b);

    let depth = cfg.dyadic_depth;
    let cz = carleson_seminorm(&z, depth, true, cfg.tol);
    let lg = realize(&FunctionSpec::NegLogOneMinusZ, cfg.carleson_order)?;
    let cl = carleson_seminorm(&lg, depth, true, cfg.tol);
    let mut table = Table::new("per_depth_log", &["depth", "identity", "neg_log", "log_weight"]);
    for l in 0..=depth {
        let w = (1.0 + l as f64 * std::f64::consts::LN_2).powi(2);
        table.push(vec![l as f64, cz.per_depth_max[l], cl.per_depth_max[l], w]);
    }
    rep.check("bounded-z", "g = z: per-depth log-weighted maxima bounded (running sup converged)", cz.estimate.is_converged(), format!("{:?}", cz.per_depth_max));
    let prof = &cl.per_depth_max[1..];
    let increasing = prof.windows(2).all(|w| w[1] > w[0]);
    let xs: Vec<f64> = (1..=depth).map(|l| 1.0 + l as f64 * std::f64::consts::LN_2).collect();
    let slope = lab::loglog_slope(&xs, prof).unwrap_or(f64::NAN);
    rep.param("neg_log_slope", slope);
    rep.param("neg_log_r_cut", cl.r_cut);
    rep.check(
        "growing-neg-log",
        "g = -log(1-z): per-depth maxima strictly increasing over 1 <= l <= L with log-log slope against (1 + l ln 2) in [1.5, 2.5]",
        increasing && (1.5..=2.5).contains(&slope),
        format!("slope {}", fmt_num(slope)),
    );
    rep.verdict("BMOA_log z", cz.estimate);
    rep.verdict("BMOA_log -log(1-z)", cl.estimate);
    rep.tables.push(table);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_polynomials_are_seeded() {
        let a = random_polynomials(7, 3, 4);
        assert_eq!(a, random_polynomials(7, 3, 4));
        assert_ne!(a, random_polynomials(8, 3, 4));
        assert_eq!(a[0].degree(), Some(4));
    }

    #[test]
    fn cheap_criteria_pass() {
        let cfg = RunConfig::default();
        for job in [cesaro_identity, integration_by_parts, littlewood_paley] {
            let r = job(&cfg).unwrap();
            assert!(r.passed, "{}", r.failure_summary());
        }
    }
}
