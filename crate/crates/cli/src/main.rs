use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use bifree_core::bifree_product::{bifree_product, check_bifree};
use bifree_core::classifiers::{self, ClassReport};
use bifree_core::cumulants::CumulantTable;
use bifree_core::distributions::{load_model, Model, PairDistribution, Word};
use bifree_core::harness::{run_suite, SuiteReport};
use bifree_core::partitions::kreweras_bnc;
use bifree_core::{BncContext, ChiMap, Error, SetPartition};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bifree", version, about = "Exact bi-free combinatorics: partitions, cumulants, products and classifiers")]
struct Cli {
    /// Largest word length examined by checks.
    #[arg(long, global = true, default_value_t = 6)]
    max_degree: usize,
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomly drawn models.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cross-check every cumulant against direct Möbius inversion.
    #[arg(long, global = true)]
    paranoid: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List BNC(chi) in canonical order.
    Enumerate { chi: String },
    /// The BNC Möbius function; `0` and `1` name the bottom and top.
    Mobius { chi: String, tau: String, lambda: String },
    /// The Kreweras complement in BNC(chi).
    Kreweras { chi: String, tau: String },
    /// A bi-free cumulant of a word under a model.
    Cumulant {
        model: PathBuf,
        word: String,
        /// Evaluate the partitioned cumulant for this partition instead of the full one.
        #[arg(long)]
        partition: Option<String>,
    },
    /// Classify a pair.
    Check { kind: Kind, model: PathBuf },
    /// Bi-free product of models; model k supplies pair k.
    Product {
        #[arg(num_args = 2.., required = true)]
        models: Vec<PathBuf>,
        /// Print the joint moment and cumulant of this word instead of checking mixed cumulants.
        #[arg(long)]
        word: Option<String>,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::Paper)]
        suite: Suite,
        /// Restrict to these check ids.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Birdiagonal,
    Bieven,
    Bihaar,
    Rcyclic2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Paper,
}

enum Outcome {
    Pass,
    Fail,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::UnknownCheck(_)
        | Error::Model(_)
        | Error::Io(_)
        | Error::Json(_)
        | Error::ForeignLetter(_) => 2,
        Error::LimitExceeded { .. } | Error::DegreeExceeded { .. } => 4,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Enumerate { chi } => enumerate(cli, chi),
        Command::Mobius { chi, tau, lambda } => mobius(cli, chi, tau, lambda),
        Command::Kreweras { chi, tau } => kreweras(cli, chi, tau),
        Command::Cumulant { model, word, partition } => cumulant(cli, model, word, partition.as_deref()),
        Command::Check { kind, model } => check(cli, *kind, model),
        Command::Product { models, word } => product(cli, models, word.as_deref()),
        Command::Verify { suite: Suite::Paper, only } => verify(cli, only),
    }
}

fn print_json<T: serde::Serialize>(v: &T) -> Result<(), Error> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn partition_arg(ctx: &BncContext, s: &str) -> Result<SetPartition, Error> {
    match s {
        "0" => Ok(ctx.zero()),
        "1" => Ok(ctx.one()),
        _ => s.parse(),
    }
}

fn enumerate(cli: &Cli, chi: &str) -> Result<Outcome, Error> {
    let chi: ChiMap = chi.parse()?;
    let ctx = BncContext::new(&chi)?;
    if cli.json {
        let list: Vec<String> = ctx.elements().iter().map(ToString::to_string).collect();
        print_json(&serde_json::json!({ "chi": chi, "count": list.len(), "partitions": list }))?;
    } else {
        for p in ctx.elements() {
            println!("{p}");
        }
    }
    Ok(Outcome::Pass)
}

fn mobius(cli: &Cli, chi: &str, tau: &str, lambda: &str) -> Result<Outcome, Error> {
    let chi: ChiMap = chi.parse()?;
    let ctx = BncContext::new(&chi)?;
    let (t, l) = (partition_arg(&ctx, tau)?, partition_arg(&ctx, lambda)?);
    let mu = ctx.mobius(&t, &l)?;
    if cli.json {
        print_json(&serde_json::json!({ "chi": chi, "tau": t.to_string(), "lambda": l.to_string(), "mobius": mu }))?;
    } else {
        println!("{mu}");
    }
    Ok(Outcome::Pass)
}

fn kreweras(cli: &Cli, chi: &str, tau: &str) -> Result<Outcome, Error> {
    let chi: ChiMap = chi.parse()?;
    let ctx = BncContext::new(&chi)?;
    let t = partition_arg(&ctx, tau)?;
    let k = kreweras_bnc(&chi, &t)?;
    if cli.json {
        print_json(&serde_json::json!({ "chi": chi, "tau": t.to_string(), "kreweras": k.to_string() }))?;
    } else {
        println!("{k}");
    }
    Ok(Outcome::Pass)
}

fn table(cli: &Cli, model: Model) -> CumulantTable {
    if cli.paranoid {
        CumulantTable::paranoid(model)
    } else {
        CumulantTable::new(model)
    }
}

fn cumulant(cli: &Cli, path: &Path, word: &str, partition: Option<&str>) -> Result<Outcome, Error> {
    let model = load_model(path, 0)?;
    let w: Word = word.parse()?;
    model.check_word(&w)?;
    let t = table(cli, model);
    let value = match partition {
        Some(p) => t.kappa(&w, &p.parse()?)?,
        None => t.kappa_full(&w)?,
    };
    if cli.json {
        print_json(&serde_json::json!({ "word": w, "chi": w.chi()?, "partition": partition, "kappa": value }))?;
    } else {
        println!("{value}");
    }
    Ok(Outcome::Pass)
}

fn print_class(cli: &Cli, name: &str, r: &ClassReport) -> Result<Outcome, Error> {
    if cli.json {
        print_json(r)?;
    } else {
        let verdict = if r.verdict { "yes" } else { "no" };
        println!("{name}: {verdict} (all words of length <= {})", r.max_degree);
        if r.violations > 0 {
            println!("violations: {}", r.violations);
        }
        for w in &r.witnesses {
            let mut line = format!("  {}", w.word);
            if let Some(k) = &w.kappa {
                line += &format!("  kappa = {k}");
            }
            if let Some(m) = &w.moment {
                line += &format!("  moment = {m}");
            }
            if let Some(e) = &w.expected {
                line += &format!("  expected = {e}");
            }
            if let Some(n) = &w.note {
                line += &format!("  ({n})");
            }
            println!("{line}");
        }
    }
    Ok(if r.verdict { Outcome::Pass } else { Outcome::Fail })
}

fn check(cli: &Cli, kind: Kind, path: &Path) -> Result<Outcome, Error> {
    let model = load_model(path, 0)?;
    let p = PairDistribution::new(model.clone(), 0)?;
    let d = cli.max_degree;
    let (name, r) = match kind {
        Kind::Birdiagonal => ("bi-R-diagonal", classifiers::check_bi_r_diagonal_with(&p, &table(cli, model), d)?),
        Kind::Bieven => ("*-bi-even", classifiers::check_star_bi_even(&p, d)?),
        Kind::Bihaar => ("bi-Haar", classifiers::check_bi_haar(&p, d)?),
        Kind::Rcyclic2 => ("R-cyclic 2x2", classifiers::check_r_cyclic_2x2(&p, d)?),
    };
    print_class(cli, name, &r)
}

fn product(cli: &Cli, paths: &[PathBuf], word: Option<&str>) -> Result<Outcome, Error> {
    let models = paths
        .iter()
        .enumerate()
        .map(|(k, p)| load_model(p, k as u32))
        .collect::<Result<Vec<_>, _>>()?;
    let joint: Model = Arc::new(bifree_product(models)?);
    if let Some(word) = word {
        let w: Word = word.parse()?;
        let moment = joint.moment(&w)?;
        let kappa = table(cli, joint).kappa_full(&w)?;
        if cli.json {
            print_json(&serde_json::json!({ "word": w, "moment": moment, "kappa": kappa }))?;
        } else {
            println!("moment {moment}");
            println!("kappa {kappa}");
        }
        return Ok(Outcome::Pass);
    }
    let r = check_bifree(&joint, cli.max_degree)?;
    if cli.json {
        print_json(&r)?;
    } else {
        let verdict = if r.is_bifree() { "yes" } else { "no" };
        println!("bi-free: {verdict} (mixed words of length <= {})", r.max_degree);
        for f in &r.findings {
            println!("  {}  kappa = {}", f.word, f.kappa);
        }
    }
    Ok(if r.is_bifree() { Outcome::Pass } else { Outcome::Fail })
}

fn print_suite(r: &SuiteReport) {
    for (c, t) in r.checks.iter().zip(&r.timings) {
        let status = if c.passed { "PASS" } else { "FAIL" };
        println!("{status} {} [{}] ({:.1}s)", c.id, c.scope, t.as_secs_f64());
        println!("  {}", c.claim);
        for case in &c.cases {
            let mark = if case.passed { "ok" } else { "FAILED" };
            println!("  - {} [{mark}]", case.model);
            for v in &case.values {
                println!("      {} = {}", v.name, v.value);
            }
            for w in &case.witnesses {
                let value = w.kappa.as_ref().or(w.moment.as_ref()).map(ToString::to_string).unwrap_or_default();
                let note = w.note.as_deref().unwrap_or("");
                println!("      witness {}  {value}  {note}", w.word);
            }
        }
    }
    let passed = r.checks.iter().filter(|c| c.passed).count();
    println!("{passed}/{} checks passed (seed {}, max degree {})", r.checks.len(), r.seed, r.max_degree);
}

fn verify(cli: &Cli, only: &[String]) -> Result<Outcome, Error> {
    let r = run_suite(only, cli.max_degree, cli.seed)?;
    if cli.json {
        print_json(&r)?;
    } else {
        print_suite(&r);
    }
    Ok(if r.passed { Outcome::Pass } else { Outcome::Fail })
}
