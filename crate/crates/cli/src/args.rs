use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "hvlab", version, about = "Numerical laboratory for Volterra-type operators on Hardy spaces")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

/// Overrides applied on top of the config file.
#[derive(Debug, Args)]
pub struct Global {
    /// Run configuration (JSON, see schema/run-config.schema.json).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; without it results go to standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Truncation order N.
    #[arg(long, global = true)]
    pub order: Option<usize>,
    /// Radius ladder depth J.
    #[arg(long, global = true)]
    pub ladder: Option<usize>,
    /// Dyadic depth L of Carleson boxes.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Certified tail tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the Taylor coefficients of a function.
    Realize {
        /// Function spec: JSON object or a bare kind such as `neg_log`.
        #[arg(long)]
        f: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Apply Tg, Sg, Mg or the Cesàro operator.
    ApplyOp {
        #[arg(long)]
        op: String,
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        f: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Estimate a norm; prints the value, or the full estimate with --json.
    Norm {
        /// H2, Hp:1.5, Hinf, BMOA, BMOAlog, Bloch, K:a, Lambda:a, A2w, domain:p, A21.
        #[arg(long)]
        space: String,
        #[arg(long)]
        f: String,
        /// Symbol for A2w and domain:p.
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        json: bool,
        /// Exit with status 3 if the certified safe radius is below this value.
        #[arg(long)]
        min_safe_radius: Option<f64>,
    },
    /// Run a registered experiment.
    #[command(alias = "run")]
    Experiment(ExperimentArgs),
    /// Run a named suite of criteria.
    Suite {
        #[arg(default_value = "paper-acceptance")]
        name: String,
    },
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    pub name: String,
    /// JSON file with experiment parameters; flags override its entries.
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long)]
    pub g: Option<String>,
    #[arg(long)]
    pub f: Option<String>,
    #[arg(long)]
    pub h: Option<String>,
    #[arg(long)]
    pub f2: Option<String>,
    #[arg(long)]
    pub symbol: Option<String>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub p1: Option<f64>,
    #[arg(long)]
    pub p2: Option<f64>,
    /// `a..b` for the doubling list a, 2a, ... <= b, or a comma list.
    #[arg(long)]
    pub n: Option<String>,
    /// Comma list of polynomial degrees.
    #[arg(long)]
    pub degrees: Option<String>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// JSON list of zeros, e.g. `[0.5, [0.3, 0.4]]`.
    #[arg(long)]
    pub zeros: Option<String>,
    /// Also write an SVG plot per table (needs --out).
    #[arg(long)]
    pub svg: bool,
}

pub fn parse_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| format!("cannot read `{t}` as a nonnegative integer"))).collect()
}

pub fn parse_n_list(s: &str) -> Result<Vec<usize>, String> {
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (parse_list(a)?, parse_list(b)?);
            match (a.as_slice(), b.as_slice()) {
                ([a], [b]) if *a >= 1 && a <= b => Ok(hvlab_core::lab::doubling(*a, *b)),
                _ => Err(format!("range `{s}` must read a..b with 1 <= a <= b")),
            }
        }
        None => parse_list(s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_lists() {
        assert_eq!(parse_n_list("16..128").unwrap(), vec![16, 32, 64, 128]);
        assert_eq!(parse_n_list("1, 3,5").unwrap(), vec![1, 3, 5]);
        assert!(parse_n_list("0..4").is_err());
        assert!(parse_n_list("x").is_err());
    }

    #[test]
    fn cli_shape() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
        let c = Cli::try_parse_from(["hvlab", "run", "monomial-decay", "--n", "16..1024", "--order", "512"]).unwrap();
        assert!(matches!(c.command, Command::Experiment(_)));
        assert_eq!(c.global.order, Some(512));
    }
}
