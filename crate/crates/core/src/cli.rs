//! Command-line front end: `solve`, `bench` and `verify`.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::benchmarks::{parse_inline, parse_problem, Benchmark, TruthTable};
use crate::error::Result;
use crate::sexpr::parse;
use crate::solver::{solve_observed, Budget, DEFAULT_MAX_NODES};
use crate::trace::TraceRecord;
use crate::verifier::{verify, verify_tree, VerifyReport};

/// Outcome of one solve. Serialized keys are fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub benchmark: String,
    pub v: usize,
    pub size: usize,
    #[serde(rename = "time_ms")]
    pub wall_time_ms: f64,
    pub perfect: bool,
    pub sexpr: String,
}

/// Solves and verifies one problem. Controller decisions go to `trace` as
/// JSON lines when given.
pub fn run_problem(
    name: &str,
    problem: &TruthTable,
    budget: Budget,
    trace: Option<&mut dyn Write>,
) -> anyhow::Result<RunRecord> {
    let mut records = Vec::new();
    let keep = trace.is_some();
    let start = Instant::now();
    let tree = solve_observed(problem, budget, |node, e| {
        if keep {
            records.push(TraceRecord::new(node, e));
        }
    })
    .with_context(|| format!("solving {name}"))?;
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;

    if let Some(out) = trace {
        for r in &records {
            serde_json::to_writer(&mut *out, r)?;
            out.write_all(b"\n")?;
        }
        out.flush()?;
    }
    let report = verify_tree(&tree, problem)?;
    Ok(RunRecord {
        benchmark: name.to_string(),
        v: problem.arity(),
        size: tree.size(),
        wall_time_ms,
        perfect: report.perfect,
        sexpr: tree.to_sexpr()?,
    })
}

/// Runs the listed benchmarks, in order. With `parallel`, each benchmark
/// gets its own thread; results keep the input order.
pub fn run_bench(
    list: &[Benchmark],
    budget: Budget,
    parallel: bool,
) -> anyhow::Result<Vec<RunRecord>> {
    let one = |b: &Benchmark| -> anyhow::Result<RunRecord> {
        run_problem(&b.to_string(), &b.table()?, budget, None)
    };
    if !parallel {
        return list.iter().map(one).collect();
    }
    std::thread::scope(|s| {
        let handles: Vec<_> = list.iter().map(|b| s.spawn(move || one(b))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("benchmark thread panicked"))
            .collect()
    })
}

pub fn format_table(records: &[RunRecord]) -> String {
    let mut s = format!(
        "{:<8} {:>3} {:>8} {:>12} {:>8}\n",
        "name", "v", "size", "time [ms]", "perfect"
    );
    for r in records {
        s.push_str(&format!(
            "{:<8} {:>3} {:>8} {:>12.3} {:>8}\n",
            r.benchmark, r.v, r.size, r.wall_time_ms, r.perfect
        ));
    }
    s
}

pub fn parse_only(list: &str) -> Result<Vec<Benchmark>> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect()
}

/// A benchmark name, or else a path to a problem file.
pub fn load_problem(arg: &str) -> anyhow::Result<(String, TruthTable)> {
    if let Ok(b) = arg.parse::<Benchmark>() {
        return Ok((b.to_string(), b.table()?));
    }
    let path = Path::new(arg);
    let text = fs::read_to_string(path)
        .with_context(|| format!("{arg:?} is neither a benchmark name nor a readable file"))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| arg.to_string());
    Ok((name, parse_problem(&text)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Sexpr,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "sbsynth", version, about = "Top-down Boolean function synthesis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct ProblemArgs {
    /// Benchmark name (cmp6, cmp8, maj6, maj8, mux6, mux11, par6, par8, par9, par10) or problem file
    #[arg(required_unless_present = "targets", conflicts_with = "targets")]
    pub problem: Option<String>,

    /// Inline problem, e.g. v=2:0110
    #[arg(long)]
    pub targets: Option<String>,
}

impl ProblemArgs {
    fn load(&self) -> anyhow::Result<(String, TruthTable)> {
        match (&self.problem, &self.targets) {
            (_, Some(t)) => Ok(("targets".to_string(), parse_inline(t)?)),
            (Some(p), None) => load_problem(p),
            (None, None) => bail!("no problem given"),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one problem and print the tree
    Solve {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
        max_nodes: usize,
        #[arg(long, value_enum, default_value_t = Emit::Sexpr)]
        emit: Emit,
        /// Write one JSON line per controller decision
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write output here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the benchmark grid
    Bench {
        /// Comma-separated benchmark names
        #[arg(long)]
        only: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
        max_nodes: usize,
        /// Print JSON lines instead of a table
        #[arg(long, value_enum)]
        emit: Option<Emit>,
        /// Also write all records as a JSON array
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run benchmarks concurrently
        #[arg(long)]
        parallel: bool,
    },
    /// Check an S-expression file against a problem
    Verify {
        tree: PathBuf,
        #[command(flatten)]
        problem: ProblemArgs,
    },
}

fn write_output(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn exit(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

pub fn report_line(r: &VerifyReport) -> String {
    match r.first_mismatch {
        None => format!("perfect: {}/{} cases", r.num_correct, r.num_cases),
        Some(row) => format!(
            "imperfect: {}/{} cases, first mismatch at row {row}",
            r.num_correct, r.num_cases
        ),
    }
}

pub fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Solve {
            problem,
            max_nodes,
            emit,
            trace,
            out,
        } => {
            let (name, table) = problem.load()?;
            let budget = Budget::new(max_nodes)?;
            let record = match &trace {
                Some(path) => {
                    let file = fs::File::create(path)
                        .with_context(|| format!("creating {}", path.display()))?;
                    let mut w = io::BufWriter::new(file);
                    run_problem(&name, &table, budget, Some(&mut w))?
                }
                None => run_problem(&name, &table, budget, None)?,
            };
            let text = match emit {
                Emit::Sexpr => format!("{}\n", record.sexpr),
                Emit::Json => format!("{}\n", serde_json::to_string(&record)?),
            };
            write_output(&out, &text)?;
            eprintln!(
                "{}: size {}, {:.3} ms, perfect {}",
                record.benchmark, record.size, record.wall_time_ms, record.perfect
            );
            Ok(exit(record.perfect))
        }
        Command::Bench {
            only,
            max_nodes,
            emit,
            out,
            parallel,
        } => {
            let list = match only {
                Some(l) => parse_only(&l)?,
                None => Benchmark::STANDARD.to_vec(),
            };
            let records = run_bench(&list, Budget::new(max_nodes)?, parallel)?;
            let text = match emit {
                Some(Emit::Json) => records
                    .iter()
                    .map(|r| serde_json::to_string(r).map(|s| s + "\n"))
                    .collect::<std::result::Result<String, _>>()?,
                _ => format_table(&records),
            };
            io::stdout().write_all(text.as_bytes())?;
            if let Some(p) = out {
                fs::write(&p, serde_json::to_string_pretty(&records)? + "\n")
                    .with_context(|| format!("writing {}", p.display()))?;
            }
            Ok(exit(records.iter().all(|r| r.perfect)))
        }
        Command::Verify { tree, problem } => {
            let src = fs::read_to_string(&tree)
                .with_context(|| format!("reading {}", tree.display()))?;
            let expr = parse(&src)?;
            let (_, table) = problem.load()?;
            let report = verify(&expr, &table)?;
            println!("{}", report_line(&report));
            Ok(exit(report.perfect))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_record_keys_are_fixed() {
        let p = parse_inline("v=2:0110").unwrap();
        let r = run_problem("xor", &p, Budget::default(), None).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort();
        assert_eq!(keys, ["benchmark", "perfect", "sexpr", "size", "time_ms", "v"]);
        assert!(r.perfect);
    }

    #[test]
    fn only_list() {
        let l = parse_only("cmp6,par6").unwrap();
        assert_eq!(l.len(), 2);
        assert!(parse_only("cmp6,bogus").is_err());
    }

    #[test]
    fn trace_record_count() {
        let b: Benchmark = "cmp6".parse().unwrap();
        let mut buf = Vec::new();
        let r = run_problem("cmp6", &b.table().unwrap(), Budget::default(), Some(&mut buf)).unwrap();
        let recs = crate::trace::read_jsonl(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(recs.len(), (r.size - 1) / 2);
    }

    #[test]
    fn cli_parses_flags() {
        let cli = Cli::try_parse_from(["sbsynth", "solve", "--targets", "v=2:0110", "--emit", "json"]).unwrap();
        assert!(matches!(cli.command, Command::Solve { emit: Emit::Json, .. }));
        assert!(Cli::try_parse_from(["sbsynth", "solve"]).is_err());
        let cli = Cli::try_parse_from(["sbsynth", "bench", "--only", "cmp6,par6", "--max-nodes", "10"]).unwrap();
        assert!(matches!(cli.command, Command::Bench { max_nodes: 10, .. }));
    }
}
