mod table;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use cinv_core::classify::{compare, traving_condition};
use cinv_core::exactmath::decimal;
use cinv_core::invariants::ProfileDocument;
use cinv_core::moduli::{
    family, family_ambient_dim, gamma_table, moduli_dimension, moduli_dimension_dfs,
    verify_monotonicity, BasePair,
};
use cinv_core::search::{
    find_collisions, verify_paper_examples_with, Checkpoint, CollisionKey, SearchConfig,
};
use cinv_core::{factorize, invariant_profile, BigInt, Error, MultiDegree};

use table::Table;

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY_FAILED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "cinv",
    version,
    about = "Exact invariants of complete intersections"
)]
struct Cli {
    /// Output format.
    #[arg(
        long,
        global = true,
        value_enum,
        env = "CINV_FORMAT",
        default_value = "table"
    )]
    format: Format,
    /// Worker threads for moduli and search; 1 runs serially.
    #[arg(long, global = true, env = "CINV_JOBS", default_value_t = 1,
          value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args, Clone)]
struct Degrees {
    /// Complex dimension.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    /// Comma-separated degrees; 1s are dropped.
    #[arg(long, value_delimiter = ',', required = true,
          value_parser = clap::value_parser!(u64).range(1..))]
    d: Vec<u64>,
}

#[derive(Args, Clone)]
struct PairArg {
    /// JSON file with two equal-length base degree lists.
    #[arg(long)]
    pair_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Total degree, Pontrjagin coefficients and Euler characteristic.
    Invariants {
        #[command(flatten)]
        x: Degrees,
    },
    /// Classify a pair of multidegrees of the same dimension.
    Compare {
        #[command(flatten)]
        x: Degrees,
        /// Degrees of the second variety.
        #[arg(long, value_delimiter = ',', required = true,
              value_parser = clap::value_parser!(u64).range(1..))]
        d2: Vec<u64>,
    },
    /// Prime-exponent condition on the total degree.
    Traving {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        /// Degrees whose product is tested.
        #[arg(long, value_delimiter = ',', conflicts_with = "total",
              required_unless_present = "total",
              value_parser = clap::value_parser!(u64).range(1..))]
        d: Vec<u64>,
        /// Total degree given directly.
        #[arg(long)]
        total: Option<BigInt>,
    },
    /// Moduli dimension of one complete intersection.
    Moduli {
        #[command(flatten)]
        x: Degrees,
        /// Use the index-subset recursion instead of grouped multiplicities.
        #[arg(long)]
        dfs: bool,
    },
    /// Moduli dimensions across a composed family of size s.
    Family {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        s: u64,
        #[command(flatten)]
        pair: PairArg,
    },
    /// Γ constants of a base pair.
    Gamma {
        /// Ambient dimension N.
        #[arg(long, conflicts_with = "s", required_unless_present = "s",
              value_parser = clap::value_parser!(u64).range(1..))]
        ambient: Option<u64>,
        /// Use the ambient dimension of the family of size s.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        s: Option<u64>,
        #[command(flatten)]
        pair: PairArg,
    },
    /// Bounded search for multidegrees with equal invariants.
    Search(SearchArgs),
    /// Recompute every published value and report mismatches.
    VerifyPaper {
        /// Perturb a named check to exercise the failure path.
        #[arg(long)]
        corrupt: Vec<String>,
        /// Also check positivity and monotonicity of family differences up to this s.
        #[arg(long)]
        monotonicity: Option<u64>,
    },
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    #[arg(long, default_value_t = 1)]
    r_min: usize,
    #[arg(long)]
    r_max: usize,
    #[arg(long)]
    max_degree: u64,
    #[arg(long)]
    total_degree: Option<u64>,
    /// Leading degrees fixed in every candidate.
    #[arg(long, value_delimiter = ',')]
    prefix: Vec<u64>,
    #[arg(long, value_enum, default_value = "full")]
    key: KeyArg,
    /// Maximum number of candidates held in memory.
    #[arg(long)]
    budget: Option<usize>,
    /// Where to write progress if the budget runs out.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KeyArg {
    /// d, Pontrjagin coefficients and e.
    Full,
    /// d and Pontrjagin coefficients.
    DegreeAndPontrjagin,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PairFile {
    Named { d: Vec<u64>, d_prime: Vec<u64> },
    Lists([Vec<u64>; 2]),
}

fn load_pair(arg: &PairArg) -> anyhow::Result<BasePair> {
    let Some(path) = &arg.pair_file else {
        return Ok(BasePair::default());
    };
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed: PairFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let (d, d_prime) = match parsed {
        PairFile::Named { d, d_prime } => (d, d_prime),
        PairFile::Lists([d, d_prime]) => (d, d_prime),
    };
    Ok(BasePair::new(d, d_prime)?)
}

fn multidegree(n: u32, degrees: &[u64]) -> anyhow::Result<MultiDegree> {
    let ones = degrees.iter().filter(|&&d| d == 1).count();
    if ones > 0 {
        eprintln!(
            "warning: dropped {ones} degree-1 entr{}",
            if ones == 1 { "y" } else { "ies" }
        );
    }
    Ok(MultiDegree::new(n, degrees.iter().copied())?)
}

/// What a subcommand produced.
struct Outcome {
    json: String,
    table: Table,
    verified: bool,
}

impl Outcome {
    fn ok(value: &impl Serialize, table: Table) -> anyhow::Result<Self> {
        Ok(Outcome {
            json: serde_json::to_string(value)?,
            table,
            verified: true,
        })
    }
}

#[derive(Serialize)]
struct ModuliOut {
    #[serde(with = "decimal")]
    m: BigInt,
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let jobs = cli.jobs as usize;
    match &cli.command {
        Command::Invariants { x } => {
            let md = multidegree(x.n, &x.d)?;
            let prof = invariant_profile(&md)?;
            let doc = ProfileDocument::new(&md, &prof);
            let mut t = Table::pairs();
            t.row(["multidegree", &md.to_string()]);
            t.row(["d", &doc.d.to_string()]);
            if let Ok(f) = factorize(&doc.d) {
                t.row(["d factored", &f.to_string()]);
            }
            for (k, p) in doc.p.iter().enumerate() {
                t.row([&format!("p_{}", k + 1), &p.to_string()]);
            }
            t.row(["e", &doc.e.to_string()]);
            t.row(["e/d", &prof.e_over_d().to_string()]);
            Outcome::ok(&doc, t)
        }
        Command::Compare { x, d2 } => {
            let a = multidegree(x.n, &x.d)?;
            let b = multidegree(x.n, d2)?;
            let cmp = compare(&a, &b)?;
            let mut t = Table::new(["", "left", "right"]);
            t.row(["multidegree", &a.to_string(), &b.to_string()]);
            t.row(["d", &cmp.left.d.to_string(), &cmp.right.d.to_string()]);
            for (k, (l, r)) in cmp.left.p.iter().zip(&cmp.right.p).enumerate() {
                t.row([&format!("p_{}", k + 1), &l.to_string(), &r.to_string()]);
            }
            t.row(["e", &cmp.left.e.to_string(), &cmp.right.e.to_string()]);
            t.footer(format!("verdict: {}", cmp.verdict));
            t.footer(format!(
                "traving: {}",
                if cmp.traving.holds { "holds" } else { "fails" }
            ));
            Outcome::ok(&cmp, t)
        }
        Command::Traving { n, d, total } => {
            let total = match total {
                Some(v) => v.clone(),
                None => cinv_core::invariants::total_degree(&multidegree(*n, d)?),
            };
            let rep = traving_condition(*n, &total)?;
            let mut t = Table::new(["p", "threshold", "exponent", "satisfied"]);
            for p in &rep.primes {
                t.row([
                    &p.p.to_string(),
                    &p.threshold.to_string(),
                    &p.exponent.to_string(),
                    &p.satisfied.to_string(),
                ]);
            }
            t.footer(format!("d = {}", rep.d));
            t.footer(format!("holds: {}", rep.holds));
            Outcome::ok(&rep, t)
        }
        Command::Moduli { x, dfs } => {
            let md = multidegree(x.n, &x.d)?;
            let m = if *dfs {
                moduli_dimension_dfs(&md)?
            } else {
                moduli_dimension(&md)?
            };
            let mut t = Table::pairs();
            t.row(["m", &m.to_string()]);
            Outcome::ok(&ModuliOut { m }, t)
        }
        Command::Family { s, pair } => {
            let pair = load_pair(pair)?;
            let rep = family(&pair, *s, jobs)?;
            let mut t = Table::new(["lambda", "mu", "m", "delta", "closed form", "agree"]);
            let opt = |v: &Option<BigInt>| v.as_ref().map_or(String::new(), |x| x.to_string());
            for r in &rep.rows {
                t.row([
                    &r.lambda.to_string(),
                    &r.mu.to_string(),
                    &r.m.to_string(),
                    &opt(&r.delta),
                    &opt(&r.closed_form_delta),
                    &r.agreement.map_or(String::new(), |a| a.to_string()),
                ]);
            }
            t.footer(format!("N = {}", rep.ambient_dim));
            t.footer(format!("strictly increasing: {}", rep.strictly_increasing));
            t.footer(format!("shared profile: {}", rep.shared_profile));
            t.footer(format!("traving: {}", rep.traving_holds));
            Outcome::ok(&rep, t)
        }
        Command::Gamma { ambient, s, pair } => {
            let pair = load_pair(pair)?;
            let n = match (ambient, s) {
                (Some(n), _) => *n,
                (None, Some(s)) => family_ambient_dim(&pair, *s),
                (None, None) => bail!("one of --ambient or --s is required"),
            };
            let g = gamma_table(&pair, n)?;
            let mut t = Table::pairs();
            t.row(["N", &n.to_string()]);
            for (name, v) in [
                ("ddd", &g.ddd),
                ("d'd'd'", &g.pppp),
                ("ddd' = dd'd", &g.ddp),
                ("d'dd' = d'd'd", &g.pdp),
                ("dd'd'", &g.dpp),
                ("d'dd", &g.pdd),
                ("d d<", &g.d_pairs_d),
                ("d' d<", &g.p_pairs_d),
                ("d d'<", &g.d_pairs_p),
                ("d' d'<", &g.p_pairs_p),
            ] {
                t.row([name, &v.to_string()]);
            }
            Outcome::ok(&g, t)
        }
        Command::Search(args) => search(args, jobs),
        Command::VerifyPaper {
            corrupt,
            monotonicity,
        } => verify(corrupt, *monotonicity, jobs),
    }
}

fn search(args: &SearchArgs, jobs: usize) -> anyhow::Result<Outcome> {
    let cfg = SearchConfig {
        n: args.n,
        codim_min: args.r_min,
        codim_max: args.r_max,
        max_degree: args.max_degree,
        total_degree: args.total_degree,
        prefix: args.prefix.clone(),
        jobs,
        key: match args.key {
            KeyArg::Full => CollisionKey::Full,
            KeyArg::DegreeAndPontrjagin => CollisionKey::DegreeAndPontrjagin,
        },
        budget: args.budget,
    };
    let records = match find_collisions(&cfg) {
        Err(Error::BudgetExceeded {
            budget,
            last_completed_partition,
        }) => {
            if let Some(path) = &args.checkpoint {
                let cp = Checkpoint {
                    last_completed_partition,
                };
                fs::write(path, serde_json::to_string(&cp)?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let last = last_completed_partition.map_or("none".to_string(), |p| p.to_string());
            bail!("budget of {budget} candidates exceeded; last completed partition {last}");
        }
        other => other?,
    };
    let mut t = Table::new(["d", "members", "verdicts"]);
    for r in &records {
        let members: Vec<String> = r.members.iter().map(|m| m.to_string()).collect();
        let verdicts: Vec<&str> = r.verdicts.iter().map(|v| v.verdict.name()).collect();
        t.row([
            &r.key.d.to_string(),
            &members.join(" "),
            &verdicts.join(","),
        ]);
    }
    t.footer(format!("{} collision groups", records.len()));
    Outcome::ok(&records, t)
}

#[derive(Serialize)]
struct VerifyOut {
    #[serde(flatten)]
    report: cinv_core::search::RegressionReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    monotonicity: Option<cinv_core::moduli::MonotonicityReport>,
}

fn verify(corrupt: &[String], monotonicity: Option<u64>, jobs: usize) -> anyhow::Result<Outcome> {
    let names: Vec<&str> = corrupt.iter().map(String::as_str).collect();
    let report = verify_paper_examples_with(&names)?;
    let mono = monotonicity
        .map(|s_max| verify_monotonicity(&BasePair::default(), s_max, jobs))
        .transpose()?;
    let mut t = Table::new(["check", "expected", "actual", "status"]);
    for c in &report.checks {
        t.row([
            &c.name,
            &c.expected,
            &c.actual,
            if c.pass { "ok" } else { "FAIL" },
        ]);
    }
    t.footer(format!("{} checks, {} failed", report.total, report.failed));
    if let Some(m) = &mono {
        for p in &m.per_s {
            t.footer(format!(
                "s = {}: min delta {}, increasing {}, closed form {}",
                p.s, p.min_delta, p.strictly_increasing, p.closed_form_agrees
            ));
        }
        t.footer(format!(
            "monotonicity: {}",
            if m.passed { "ok" } else { "FAIL" }
        ));
    }
    let verified = report.passed && mono.as_ref().is_none_or(|m| m.passed);
    let out = VerifyOut {
        report,
        monotonicity: mono,
    };
    Ok(Outcome {
        json: serde_json::to_string(&out)?,
        table: t,
        verified,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", out.json),
                Format::Table => print!("{}", out.table),
            }
            if out.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFY_FAILED)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
