//! Command-line front end for the `apclass` engine.
//!
//! [`run`] parses arguments, executes one subcommand and writes its report.
//! Exit status: 0 on success, 1 when a verification fails, 2 on usage errors.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use apclass::analogy::{
    check_postulates, format_bits, parse_bits, solve_vector, AnalogyModel, DEFAULT_SOLUTION_CAP,
};
use apclass::boolfun::TruthTable;
use apclass::classifier::{
    ap_check, error_rate, leave_one_out, load_dataset, predict_unknown, write_report, ErrorMode,
    Strategy,
};
use apclass::galois::{pol, PolReport};
use apclass::relations::{Constraint, Registry};
use apclass::table::{verify_table, TableVerdict};
use clap::{Parser, Subcommand};

/// Environment variable holding the worker count; unset or `0` uses all cores.
pub const THREADS_ENV: &str = "APCLASS_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Default sample count when `--seed` is given without `--samples`.
pub const DEFAULT_SAMPLES: u64 = 100_000;

#[derive(Debug, Parser)]
#[command(
    name = "apclass",
    version,
    about = "Analogy-preserving Boolean classifiers"
)]
struct Cli {
    /// Emit structured JSON instead of the human-readable report.
    #[arg(long, global = true)]
    json: bool,
    /// Relation registry file (`name = matrix` lines) overlaid on R1–R5.
    #[arg(long, global = true, value_name = "PATH")]
    registry: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the relations of the registry.
    Relations,
    /// Audit the analogy postulates on a 4-ary relation.
    CheckPostulates { name: String },
    /// Enumerate polymorphisms of (SRC, DST′) or of explicit relation pairs.
    Pol {
        #[arg(long)]
        src: Option<String>,
        #[arg(long)]
        dst: Option<String>,
        /// Explicit constraint `ANTECEDENT:CONSEQUENT` (repeatable); `NAME'` extends a 4-ary relation.
        #[arg(long = "pair", value_name = "R:S")]
        pairs: Vec<String>,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
        /// List every member in the human report.
        #[arg(long)]
        members: bool,
    },
    /// Check the full classification table against the expected families.
    VerifyTable {
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
    },
    /// Check whether a function is analogy-preserving.
    ApCheck {
        #[arg(long = "fn", value_name = "ARITY:HEX")]
        function: String,
        #[arg(long)]
        src: String,
        #[arg(long)]
        dst: String,
    },
    /// Error rate of analogical inference through a function.
    ErrorRate {
        #[arg(long = "fn", value_name = "ARITY:HEX")]
        function: String,
        #[arg(long)]
        src: String,
        #[arg(long)]
        dst: String,
        /// Sample with this seed instead of enumerating exhaustively.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of samples (implies sampling; seed defaults to 0).
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Solve a : b :: c : x componentwise in a model.
    Solve {
        name: String,
        a: String,
        b: String,
        c: String,
    },
    /// Predict labels of a CSV dataset by analogical inference.
    Classify {
        dataset: PathBuf,
        #[arg(long, default_value = "R4")]
        src: String,
        #[arg(long, default_value = "R4")]
        dst: String,
        #[arg(long, default_value = "majority")]
        strategy: Strategy,
        /// Predict every known record from the others instead of the unknown ones.
        #[arg(long)]
        evaluate: bool,
    },
}

struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type Outcome = std::result::Result<(String, i32), UsageError>;

/// Runs one command line (including the program name) and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let pool = match worker_pool() {
        Ok(p) => p,
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn worker_pool() -> std::result::Result<rayon::ThreadPool, UsageError> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v.trim().parse::<usize>().map_err(|_| {
            UsageError(format!(
                "{THREADS_ENV} must be a non-negative integer, got {v:?}"
            ))
        })?,
        _ => 0,
    };
    Ok(rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()?)
}

fn registry(cli: &Cli) -> std::result::Result<Registry, UsageError> {
    match &cli.registry {
        None => Ok(Registry::builtin()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
            Ok(Registry::with_user_definitions(&text)?)
        }
    }
}

fn model(reg: &Registry, name: &str) -> std::result::Result<AnalogyModel, UsageError> {
    Ok(AnalogyModel::new(name, reg.get(name)?)?)
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = write_report(value);
    s.push('\n');
    s
}

fn execute(cli: &Cli) -> Outcome {
    let reg = registry(cli)?;
    match &cli.command {
        Command::Relations => relations(&reg, cli.json),
        Command::CheckPostulates { name } => {
            let report = check_postulates(&model(&reg, name)?);
            if cli.json {
                return Ok((json(&report), EXIT_OK));
            }
            let mut s = format!("{}\n", report.model);
            for v in &report.verdicts {
                let verdict = if v.holds { "holds" } else { "fails" };
                let _ = write!(s, "  {:<26}{verdict}", v.postulate.name());
                if let Some(w) = &v.witness {
                    let _ = write!(s, "  {w}");
                }
                s.push('\n');
            }
            Ok((s, EXIT_OK))
        }
        Command::Pol {
            src,
            dst,
            pairs,
            max_arity,
            members,
        } => pol_command(&reg, src, dst, pairs, *max_arity, *members, cli.json),
        Command::VerifyTable { max_arity } => {
            let verdict = verify_table(*max_arity)?;
            let code = if verdict.pass { EXIT_OK } else { EXIT_FAIL };
            let text = if cli.json {
                json(&verdict)
            } else {
                render_table(&verdict)
            };
            Ok((text, code))
        }
        Command::ApCheck { function, src, dst } => {
            let f: TruthTable = function.parse()?;
            let check = ap_check(&f, &model(&reg, src)?, &model(&reg, dst)?);
            let code = if check.holds { EXIT_OK } else { EXIT_FAIL };
            if cli.json {
                return Ok((json(&check), code));
            }
            let mut s = format!(
                "{} {} from {} to {}\n",
                if check.holds { "PASS" } else { "FAIL" },
                check.function,
                check.source,
                check.target
            );
            if let Some(w) = &check.witness {
                let _ = writeln!(s, "witness {w}");
            }
            Ok((s, code))
        }
        Command::ErrorRate {
            function,
            src,
            dst,
            seed,
            samples,
        } => {
            let f: TruthTable = function.parse()?;
            let mode = match (seed, samples) {
                (None, None) => ErrorMode::Exact,
                (seed, samples) => ErrorMode::Sampled {
                    seed: seed.unwrap_or(0),
                    samples: samples.unwrap_or(DEFAULT_SAMPLES),
                },
            };
            let r = error_rate(&f, &model(&reg, src)?, &model(&reg, dst)?, mode)?;
            if cli.json {
                return Ok((json(&r), EXIT_OK));
            }
            let mut s = String::new();
            let _ = writeln!(
                s,
                "function   {} from {} to {}",
                r.function, r.source, r.target
            );
            let _ = write!(s, "mode       {}", r.mode);
            if let (Some(seed), Some(n)) = (r.seed, r.samples) {
                let _ = write!(s, " (seed {seed}, {n} samples)");
            }
            s.push('\n');
            let _ = writeln!(s, "events     {}", r.event_space);
            let _ = writeln!(s, "selections {} ({} solvable)", r.selections, r.total);
            let _ = writeln!(
                s,
                "rate       {} = {:.6}{}",
                r.rate,
                r.rate_value,
                if r.degenerate { " (degenerate)" } else { "" }
            );
            let _ = writeln!(
                s,
                "nearest    {} at distance {} (epsilon {})",
                r.nearest_affine, r.distance, r.epsilon
            );
            if let Some(w) = &r.witness {
                let _ = writeln!(s, "witness    {w}");
            }
            Ok((s, EXIT_OK))
        }
        Command::Solve { name, a, b, c } => {
            let m = model(&reg, name)?;
            let sols = solve_vector(&m, &parse_bits(a)?, &parse_bits(b)?, &parse_bits(c)?)?;
            let list = sols.materialize(DEFAULT_SOLUTION_CAP)?;
            if cli.json {
                let v: Vec<String> = list.iter().map(|x| format_bits(x)).collect();
                return Ok((json(&v), EXIT_OK));
            }
            if list.is_empty() {
                return Ok(("no solutions\n".into(), EXIT_OK));
            }
            let mut s = String::new();
            for x in &list {
                s.push_str(&format_bits(x));
                s.push('\n');
            }
            Ok((s, EXIT_OK))
        }
        Command::Classify {
            dataset,
            src,
            dst,
            strategy,
            evaluate,
        } => {
            let text = std::fs::read_to_string(dataset)
                .map_err(|e| UsageError(format!("cannot read {}: {e}", dataset.display())))?;
            let ds = load_dataset(&text)?;
            let (src, dst) = (model(&reg, src)?, model(&reg, dst)?);
            let batch = if *evaluate {
                leave_one_out(&ds, &src, &dst, *strategy)?
            } else {
                predict_unknown(&ds, &src, &dst, *strategy)?
            };
            if cli.json {
                return Ok((json(&batch), EXIT_OK));
            }
            let mut s = String::new();
            for e in &batch.entries {
                let _ = write!(
                    s,
                    "record {:<4} {} -> {:<8} votes {}/{} from {} triples",
                    e.record,
                    format_bits(&e.query),
                    e.outcome,
                    e.votes[0],
                    e.votes[1],
                    e.applicable_triples
                );
                if let Some(x) = e.expected {
                    let _ = write!(s, " (expected {})", u8::from(x));
                }
                s.push('\n');
            }
            let _ = writeln!(
                s,
                "{} predictions: {} correct, {} wrong, {} abstained, {} ties",
                batch.entries.len(),
                batch.correct,
                batch.wrong,
                batch.abstained,
                batch.ties
            );
            Ok((s, EXIT_OK))
        }
    }
}

fn relations(reg: &Registry, as_json: bool) -> Outcome {
    if as_json {
        let map: std::collections::BTreeMap<&str, _> = reg.iter().collect();
        return Ok((json(&map), EXIT_OK));
    }
    let mut s = String::new();
    for (name, rel) in reg.iter() {
        let _ = writeln!(s, "{name}: arity {}, {} tuples", rel.arity(), rel.len());
        for line in rel.to_string().lines() {
            let _ = writeln!(s, "  {line}");
        }
    }
    Ok((s, EXIT_OK))
}

fn pol_command(
    reg: &Registry,
    src: &Option<String>,
    dst: &Option<String>,
    pairs: &[String],
    max_arity: usize,
    list_members: bool,
    as_json: bool,
) -> Outcome {
    let mut constraints = Vec::new();
    let mut names = Vec::new();
    match (src, dst) {
        (Some(s), Some(d)) => {
            let (s_model, d_model) = (model(reg, s)?, model(reg, d)?);
            constraints.push(apclass::analogy::analogical_constraint(&s_model, &d_model));
            names.push(format!("({s}, {d}')"));
        }
        (None, None) => {}
        _ => return Err(UsageError("--src and --dst must be given together".into())),
    }
    for p in pairs {
        let (a, c) = p
            .split_once(':')
            .ok_or_else(|| UsageError(format!("expected ANTECEDENT:CONSEQUENT, got {p:?}")))?;
        constraints.push(Constraint::new(reg.get(a.trim())?, reg.get(c.trim())?)?);
        names.push(format!("({}, {})", a.trim(), c.trim()));
    }
    if constraints.is_empty() {
        return Err(UsageError("give --src/--dst or at least one --pair".into()));
    }
    let reports: Vec<PolReport> = (0..=max_arity)
        .map(|n| pol(&constraints, n).map(|r| r.report(&names)))
        .collect::<Result<_, _>>()?;
    if as_json {
        return Ok((json(&reports), EXIT_OK));
    }
    let mut s = format!("Pol of {}\n", names.join(", "));
    for r in &reports {
        let tallies: Vec<String> = r.tallies.iter().map(|(k, v)| format!("{k} {v}")).collect();
        let _ = writeln!(
            s,
            "arity {}: {} members [{}]",
            r.arity,
            r.member_count,
            tallies.join(", ")
        );
        if list_members {
            let _ = writeln!(s, "  {}", r.members.join(" "));
        }
    }
    Ok((s, EXIT_OK))
}

fn render_table(v: &TableVerdict) -> String {
    let mut s = format!("AP(Ri, Rj) at arities 1..={}\n", v.max_arity);
    let _ = write!(s, "{:<6}", "");
    for j in 1..=5 {
        let _ = write!(s, "{:<12}", format!("R{j}"));
    }
    s.push('\n');
    for i in 1..=5 {
        let _ = write!(s, "{:<6}", format!("R{i}"));
        for j in 1..=5 {
            let cell = v.cell(i, j);
            let mark = if cell.matches { "ok" } else { "FAIL" };
            let _ = write!(s, "{:<12}", format!("{} {mark}", cell.expected));
        }
        s.push('\n');
    }
    for cell in v.cells.iter().filter(|c| !c.matches) {
        let _ = writeln!(
            s,
            "({}, {}) expected {}:",
            cell.source, cell.target, cell.expected
        );
        for c in &cell.counts {
            let _ = writeln!(
                s,
                "  arity {}: {} computed, {} expected",
                c.arity, c.computed, c.expected
            );
        }
        for m in &cell.mismatches {
            let _ = write!(s, "  {} {} (arity {})", m.kind, m.function, m.arity);
            if let Some(w) = &m.witness {
                let _ = write!(s, " rejected by columns {}", w.column_strings(4).join(" "));
            }
            s.push('\n');
        }
    }
    s.push_str(if v.pass { "PASS\n" } else { "FAIL\n" });
    s
}
