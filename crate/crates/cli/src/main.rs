use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use zeta_forge::algebra::gen_relations;
use zeta_forge::solver::{SolveOutcome, SolverConfig, TableStore};
use zeta_forge::verify::{
    dimension_report, dimension_text, listing_text, minimal_depth_stats, paper_basis_check,
    recheck_relations, DepthStats, Sampling,
};
use zeta_forge::{candidate_pool, generate_l, BasisReport, CandidateSet, Error, RelationKinds};

const EXIT_CODES: &str = "\
Exit status:
  0  success
  2  usage error (unknown flag or subcommand, bad value)
  3  configuration error (e.g. unknown relation kind, jobs = 0)
  4  I/O error, including an unwritable table directory
  5  missing lower-weight tables
  6  corrupt data: manifest hash mismatch, foreign checkpoint, unparsable file
  7  verification failure
  8  inconsistent or under-determined relation system";

#[derive(Parser)]
#[command(name = "zeta-forge", version = env!("CARGO_PKG_VERSION"), about = "Exact double-shuffle reduction of multiple zeta values", after_help = EXIT_CODES)]
struct Cli {
    /// Output style for reports.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    /// Line-oriented `key = value`.
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Print the relations generated at one weight.
    Gen {
        #[arg(long)]
        weight: u32,
        #[command(flatten)]
        relations: RelationArgs,
    },
    /// Solve a weight, auto-solving any missing lower weights.
    Solve {
        #[arg(long)]
        weight: u32,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        table_dir: PathBuf,
        #[command(flatten)]
        relations: RelationArgs,
        /// Shuffle-phase pivots between checkpoints.
        #[arg(long, default_value_t = 1000)]
        checkpoint_every: usize,
    },
    /// Print the basis report of an already solved weight.
    Basis {
        #[arg(long)]
        weight: u32,
        #[arg(long)]
        table_dir: PathBuf,
    },
    /// Print the Lyndon set of a weight, or its extension pool.
    Lyndon {
        #[arg(long)]
        weight: u32,
        /// List every legal n-fold extension of each word.
        #[arg(long)]
        extended: bool,
    },
    /// Re-check solved tables and the shipped basis listings.
    Verify {
        /// Re-substitute every relation at this weight.
        #[arg(long)]
        weight: Option<u32>,
        #[arg(long)]
        table_dir: Option<PathBuf>,
        /// Check the shipped weight-27 and weight-28 bases.
        #[arg(long)]
        paper_basis: bool,
        /// Report dimensions through --max-weight.
        #[arg(long, requires = "max_weight")]
        dims: bool,
        #[arg(long)]
        max_weight: Option<u32>,
        /// Check a seeded random sample of this many relations (default: all
        /// up to weight 10, 10000 above).
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also write the `key = value` summary to this file.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Solve through a weight and print the dimension table.
    Dims {
        #[arg(long)]
        max_weight: u32,
        #[arg(long)]
        table_dir: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Args)]
struct RelationArgs {
    /// Comma-separated relation kinds: stuffle, shuffle, hoffman, duality.
    #[arg(long, default_value = "stuffle,shuffle,hoffman")]
    relations: String,
    /// Only use words of at most this depth.
    #[arg(long)]
    depth_cap: Option<usize>,
}

impl RelationArgs {
    fn kinds(&self) -> Result<RelationKinds, Failure> {
        Ok(self.relations.parse()?)
    }
}

enum Failure {
    Core(Error),
    Verification(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 3,
            Failure::Verification(_) => 7,
            Failure::Core(e) => match e {
                Error::InvalidWord(_)
                | Error::NotAdmissible(_)
                | Error::WeightMismatch(..)
                | Error::BinaryDecode(_)
                | Error::Extension { .. }
                | Error::Collapse { .. }
                | Error::UnknownRelationKind(_)
                | Error::Config(_) => 3,
                Error::Io { .. } => 4,
                Error::Halted => 1,
                Error::MissingTable(_) => 5,
                Error::HashMismatch { .. } | Error::CheckpointMismatch { .. } | Error::Parse { .. } => 6,
                Error::UnderDetermined { .. }
                | Error::Inconsistent { .. }
                | Error::DuplicatePivot(_)
                | Error::Unresolved(_) => 8,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Verification(m) | Failure::Usage(m) => m.clone(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen { weight, relations } => gen(weight, &relations),
        Command::Solve {
            weight,
            jobs,
            table_dir,
            relations,
            checkpoint_every,
        } => solve(weight, jobs, table_dir, &relations, checkpoint_every, cli.format),
        Command::Basis { weight, table_dir } => basis(weight, table_dir, cli.format),
        Command::Lyndon { weight, extended } => lyndon(weight, extended),
        Command::Verify {
            weight,
            table_dir,
            paper_basis,
            dims,
            max_weight,
            sample,
            seed,
            summary,
        } => verify(VerifyArgs {
            weight,
            table_dir,
            paper_basis,
            dims: dims.then_some(max_weight).flatten(),
            sample,
            seed,
            summary,
            format: cli.format,
        }),
        Command::Dims {
            max_weight,
            table_dir,
            jobs,
        } => dims(max_weight, table_dir, jobs, cli.format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("zeta-forge: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}

fn check_weight(weight: u32, min: u32) -> Outcome {
    if weight < min {
        return Err(Failure::Usage(format!("weight must be at least {min}, got {weight}")));
    }
    Ok(())
}

fn gen(weight: u32, args: &RelationArgs) -> Outcome {
    check_weight(weight, 3)?;
    let kinds = args.kinds()?;
    let pool = CandidateSet::for_weight(weight);
    let specs = gen_relations(weight, &kinds, args.depth_cap);
    let mut out = String::new();
    for spec in &specs {
        out.push_str(&spec.build().render(&pool));
        out.push('\n');
    }
    print!("{out}");
    eprintln!("{} relations at weight {weight} ({kinds})", specs.len());
    Ok(())
}

fn print_report(report: &BasisReport, format: Format) {
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Machine => print!("{}", report.to_summary()),
    }
}

fn print_solved(o: &SolveOutcome, format: Format) {
    if format == Format::Text {
        eprintln!(
            "solved weight {}: {} entries, {} generators, {} relations, peak {} master terms",
            o.table.weight,
            o.table.entries.len(),
            o.table.generators.len(),
            o.stats.stuffle_relations + o.stats.elimination_relations,
            o.stats.max_master_terms
        );
    }
}

fn solve(weight: u32, jobs: usize, dir: PathBuf, args: &RelationArgs, checkpoint_every: usize, format: Format) -> Outcome {
    check_weight(weight, 2)?;
    let kinds = args.kinds()?;
    let config = SolverConfig {
        jobs,
        kinds,
        checkpoint_every,
        ..SolverConfig::default()
    };
    config.validate()?;
    let store = TableStore::open(dir)?;
    let report = match args.depth_cap {
        None => {
            let tables = store.ensure(weight, &config, |o| print_solved(o, format))?;
            BasisReport::from_tables(weight, &tables)?
        }
        Some(cap) => {
            let lower = store.ensure(weight - 1, &config, |o| print_solved(o, format))?;
            let capped = SolverConfig {
                depth_cap: Some(cap),
                checkpoint_path: Some(store.checkpoint_path(weight)),
                ..config
            };
            let outcome = zeta_forge::solve_weight(weight, &lower, &capped)?;
            let path = store.save(&outcome.table)?;
            print_solved(&outcome, format);
            if format == Format::Text {
                eprintln!("wrote {}", path.display());
            }
            outcome.report
        }
    };
    print_report(&report, format);
    Ok(())
}

fn basis(weight: u32, dir: PathBuf, format: Format) -> Outcome {
    check_weight(weight, 2)?;
    let store = TableStore::open_read_only(dir);
    let tables = store.load_through(weight)?;
    let report = BasisReport::from_tables(weight, &tables)?;
    print_report(&report, format);
    let stats = minimal_depth_stats(&report, &tables)?;
    print!("{}", depth_text(&stats, format));
    Ok(())
}

fn depth_text(stats: &DepthStats, format: Format) -> String {
    let hist: Vec<String> = stats.histogram.iter().map(|(d, n)| format!("{d}:{n}")).collect();
    let minimal = match stats.is_minimal() {
        Some(true) => "yes",
        Some(false) => "no",
        None => "not checked",
    };
    match format {
        Format::Text => format!("depth histogram: {{{}}}\nminimal depth sum: {minimal}\n", hist.join(", ")),
        Format::Machine => format!("depth_histogram = {{{}}}\nminimal_depth = {minimal}\n", hist.join(", ")),
    }
}

fn lyndon(weight: u32, extended: bool) -> Outcome {
    check_weight(weight, 1)?;
    let mut out = String::new();
    if extended {
        let pool = candidate_pool(weight);
        for c in &pool {
            let _ = writeln!(out, "{}  n={} from {}", c.word, c.n, c.source);
        }
        let _ = writeln!(out, "# {} candidates from {} Lyndon words", pool.len(), generate_l(weight).len());
    } else {
        let set = generate_l(weight);
        for w in &set.words {
            let _ = writeln!(out, "{w}");
        }
        let _ = writeln!(out, "# {} Lyndon words of weight {weight}", set.len());
    }
    print!("{out}");
    Ok(())
}

struct VerifyArgs {
    weight: Option<u32>,
    table_dir: Option<PathBuf>,
    paper_basis: bool,
    dims: Option<u32>,
    sample: Option<usize>,
    seed: u64,
    summary: Option<PathBuf>,
    format: Format,
}

fn verify(a: VerifyArgs) -> Outcome {
    if !a.paper_basis && a.weight.is_none() && a.dims.is_none() {
        return Err(Failure::Usage("nothing to verify: pass --paper-basis, --weight or --dims".into()));
    }
    let mut text = String::new();
    let mut summary = String::new();
    let mut failures = Vec::new();

    if a.paper_basis {
        for r in paper_basis_check()? {
            text.push_str(&listing_text(&r));
            let key = r.name.to_lowercase();
            let _ = writeln!(summary, "{key}_elements = {}", r.elements.len());
            let _ = writeln!(summary, "{key}_lyndon_count = {}", r.lyndon_count);
            let twofold: Vec<String> = r.twofold.iter().map(ToString::to_string).collect();
            let _ = writeln!(summary, "{key}_twofold = {}", twofold.join(" "));
            let _ = writeln!(summary, "{key}_passed = {}", r.passed());
            if !r.passed() {
                failures.push(format!("{} listing check failed", r.name));
            }
        }
    }

    let need_tables = a.weight.into_iter().chain(a.dims).max();
    if let Some(max) = need_tables {
        let dir = a
            .table_dir
            .clone()
            .ok_or_else(|| Failure::Usage("--table-dir is required with --weight or --dims".into()))?;
        let tables = TableStore::open_read_only(dir).load_through(max)?;
        if let Some(weight) = a.weight {
            check_weight(weight, 3)?;
            let sampling = match a.sample {
                Some(size) => Sampling::Sample { size, seed: a.seed },
                None if weight <= 10 => Sampling::All,
                None => Sampling::Sample {
                    size: 10_000,
                    seed: a.seed,
                },
            };
            let r = recheck_relations(weight, &tables, sampling)?;
            text.push_str(&r.to_text());
            summary.push_str(&r.to_summary());
            if !r.passed() {
                failures.push(format!("{} relations at weight {weight} did not reduce to zero", r.survivors.len()));
            }
            let report = BasisReport::from_tables(weight, &tables)?;
            let stats = minimal_depth_stats(&report, &tables)?;
            text.push_str(&report.to_text());
            text.push_str(&depth_text(&stats, Format::Text));
            summary.push_str(&report.to_summary());
            summary.push_str(&depth_text(&stats, Format::Machine));
        }
        if let Some(max) = a.dims {
            let rows = dimension_report(max, &tables)?;
            text.push_str(&dimension_text(&rows));
            for r in &rows {
                let _ = writeln!(
                    summary,
                    "dims_{} = monomials={} generators={} lyndon={} agree={}",
                    r.weight, r.monomial_count, r.generator_count, r.lyndon_count, r.generators_agree
                );
                if !r.generators_agree {
                    failures.push(format!("generator count at weight {} differs from |L_W|", r.weight));
                }
            }
        }
    }

    let _ = writeln!(summary, "passed = {}", failures.is_empty());
    match a.format {
        Format::Text => print!("{text}"),
        Format::Machine => print!("{summary}"),
    }
    if let Some(path) = &a.summary {
        fs::write(path, &summary).map_err(|e| Error::Io {
            path: path.clone(),
            source: e,
        })?;
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(failures.join("; ")))
    }
}

fn dims(max_weight: u32, dir: PathBuf, jobs: usize, format: Format) -> Outcome {
    check_weight(max_weight, 2)?;
    let config = SolverConfig::default().with_jobs(jobs);
    config.validate()?;
    let store = TableStore::open(dir)?;
    let tables = store.ensure(max_weight, &config, |o| print_solved(o, format))?;
    let rows = dimension_report(max_weight, &tables)?;
    match format {
        Format::Text => print!("{}", dimension_text(&rows)),
        Format::Machine => {
            for r in &rows {
                println!(
                    "dims_{} = monomials={} generators={} lyndon={} agree={}",
                    r.weight, r.monomial_count, r.generator_count, r.lyndon_count, r.generators_agree
                );
            }
        }
    }
    Ok(())
}
