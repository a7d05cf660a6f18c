//! Truth-table problems: the standard comparator, majority, multiplexer and
//! parity benchmarks, and custom problems read from text.
//!
//! Row convention: input `A(k+1)` is bit `k` of the row index, so `A1` is the
//! least significant bit.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::semantics::BitArray;

pub const MAX_ARITY: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    v: usize,
    targets: BitArray,
    args: Vec<BitArray>,
}

impl TruthTable {
    pub fn new(v: usize, targets: BitArray) -> Result<Self> {
        let args = gen_arguments(v)?;
        if targets.len() != 1 << v {
            return Err(Error::ProblemFormat(format!(
                "expected {} target bits for v={v}, found {}",
                1usize << v,
                targets.len()
            )));
        }
        Ok(TruthTable { v, targets, args })
    }

    pub fn arity(&self) -> usize {
        self.v
    }

    pub fn num_cases(&self) -> usize {
        self.targets.len()
    }

    pub fn targets(&self) -> &BitArray {
        &self.targets
    }

    pub fn args(&self) -> &[BitArray] {
        &self.args
    }
}

pub fn gen_arguments(v: usize) -> Result<Vec<BitArray>> {
    if !(1..=MAX_ARITY).contains(&v) {
        return Err(Error::InvalidBenchmark(format!(
            "arity {v} outside 1..={MAX_ARITY}"
        )));
    }
    let n = 1usize << v;
    Ok((0..v)
        .map(|k| BitArray::from_fn(n, |i| (i >> k) & 1 == 1))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchmarkKind {
    Comparator,
    Majority,
    Multiplexer,
    Parity,
}

impl BenchmarkKind {
    fn prefix(self) -> &'static str {
        match self {
            BenchmarkKind::Comparator => "cmp",
            BenchmarkKind::Majority => "maj",
            BenchmarkKind::Multiplexer => "mux",
            BenchmarkKind::Parity => "par",
        }
    }
}

/// Address width `k` with `k + 2^k == v`, if one exists.
fn mux_address_bits(v: usize) -> Option<usize> {
    (1..usize::BITS as usize)
        .take_while(|&k| k + (1 << k) <= v)
        .find(|&k| k + (1 << k) == v)
}

pub fn gen_benchmark(kind: BenchmarkKind, v: usize) -> Result<TruthTable> {
    let invalid = || Error::InvalidBenchmark(format!("{}{v} is not a valid instance", kind.prefix()));
    if !(2..=MAX_ARITY).contains(&v) {
        return Err(invalid());
    }
    let n = 1usize << v;
    let targets = match kind {
        BenchmarkKind::Comparator => {
            if !v.is_multiple_of(2) {
                return Err(invalid());
            }
            let half = v / 2;
            let low_mask = (1usize << half) - 1;
            BitArray::from_fn(n, |i| (i & low_mask) < (i >> half))
        }
        BenchmarkKind::Majority => BitArray::from_fn(n, |i| 2 * i.count_ones() as usize > v),
        BenchmarkKind::Multiplexer => {
            let k = mux_address_bits(v).ok_or_else(invalid)?;
            BitArray::from_fn(n, |i| {
                let address = i & ((1 << k) - 1);
                (i >> (k + address)) & 1 == 1
            })
        }
        BenchmarkKind::Parity => BitArray::from_fn(n, |i| i.count_ones() % 2 == 1),
    };
    TruthTable::new(v, targets)
}

/// A named benchmark instance such as `cmp6` or `mux11`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Benchmark {
    pub kind: BenchmarkKind,
    pub v: usize,
}

impl Benchmark {
    /// The ten standard instances, in reporting order.
    pub const STANDARD: [Benchmark; 10] = [
        Benchmark::new(BenchmarkKind::Comparator, 6),
        Benchmark::new(BenchmarkKind::Comparator, 8),
        Benchmark::new(BenchmarkKind::Majority, 6),
        Benchmark::new(BenchmarkKind::Majority, 8),
        Benchmark::new(BenchmarkKind::Multiplexer, 6),
        Benchmark::new(BenchmarkKind::Multiplexer, 11),
        Benchmark::new(BenchmarkKind::Parity, 6),
        Benchmark::new(BenchmarkKind::Parity, 8),
        Benchmark::new(BenchmarkKind::Parity, 9),
        Benchmark::new(BenchmarkKind::Parity, 10),
    ];

    pub const fn new(kind: BenchmarkKind, v: usize) -> Self {
        Benchmark { kind, v }
    }

    pub fn table(&self) -> Result<TruthTable> {
        gen_benchmark(self.kind, self.v)
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.prefix(), self.v)
    }
}

impl FromStr for Benchmark {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Benchmark::STANDARD
            .into_iter()
            .find(|b| b.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidBenchmark(format!("unknown benchmark {s:?}")))
    }
}

fn parse_header(line: &str) -> Result<usize> {
    let rest = line
        .trim()
        .strip_prefix("v=")
        .ok_or_else(|| Error::ProblemFormat("missing \"v=<arity>\" header".into()))?;
    let v: usize = rest
        .trim()
        .parse()
        .map_err(|_| Error::ProblemFormat(format!("bad arity {rest:?}")))?;
    if !(1..=MAX_ARITY).contains(&v) {
        return Err(Error::ProblemFormat(format!("arity {v} outside 1..={MAX_ARITY}")));
    }
    Ok(v)
}

fn parse_targets(v: usize, body: &str) -> Result<TruthTable> {
    let body = body.trim();
    let targets: BitArray = body.parse().map_err(|e| match e {
        Error::InvalidSymbol(c) => Error::ProblemFormat(format!("illegal target character {c:?}")),
        other => other,
    })?;
    if targets.len() != 1 << v {
        return Err(Error::ProblemFormat(format!(
            "expected {} target bits for v={v}, found {}",
            1usize << v,
            targets.len()
        )));
    }
    TruthTable::new(v, targets)
}

/// Reads `v=<arity>` on the first line and `2^v` target characters on the
/// second, row 0 first.
pub fn parse_problem(text: &str) -> Result<TruthTable> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::ProblemFormat("missing \"v=<arity>\" header".into()))?;
    let v = parse_header(header)?;
    let body = lines
        .next()
        .ok_or_else(|| Error::ProblemFormat("missing target line".into()))?;
    if let Some(extra) = lines.next() {
        return Err(Error::ProblemFormat(format!("unexpected trailing line {extra:?}")));
    }
    parse_targets(v, body)
}

/// Inline form `v=<arity>:<bits>`.
pub fn parse_inline(text: &str) -> Result<TruthTable> {
    let (header, body) = text
        .split_once(':')
        .ok_or_else(|| Error::ProblemFormat("expected v=<arity>:<bits>".into()))?;
    parse_targets(parse_header(header)?, body)
}

/// Renders a table back into the file format.
pub fn format_problem(table: &TruthTable) -> String {
    format!("v={}\n{}\n", table.v, table.targets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argument_examples() {
        assert_eq!(gen_arguments(1).unwrap()[0].to_string(), "01");
        let a = gen_arguments(2).unwrap();
        assert_eq!(a[0].to_string(), "0101");
        assert_eq!(a[1].to_string(), "0011");
        assert_eq!(gen_arguments(3).unwrap()[2].to_string(), "00001111");
        assert!(gen_arguments(0).is_err());
        assert!(gen_arguments(25).is_err());
    }

    #[test]
    fn benchmark_examples() {
        let t = gen_benchmark(BenchmarkKind::Parity, 2).unwrap();
        assert_eq!(t.targets().to_string(), "0110");
        let t = gen_benchmark(BenchmarkKind::Comparator, 2).unwrap();
        assert_eq!(t.targets().to_string(), "0010");
        assert_eq!(
            gen_benchmark(BenchmarkKind::Majority, 6).unwrap().targets().count_ones(),
            22
        );
        assert_eq!(
            gen_benchmark(BenchmarkKind::Comparator, 6).unwrap().targets().count_ones(),
            28
        );
    }

    #[test]
    fn invalid_instances() {
        assert!(gen_benchmark(BenchmarkKind::Comparator, 7).is_err());
        assert!(gen_benchmark(BenchmarkKind::Multiplexer, 8).is_err());
        assert!(gen_benchmark(BenchmarkKind::Parity, 1).is_err());
        assert!(gen_benchmark(BenchmarkKind::Multiplexer, 3).is_ok());
        assert_eq!(mux_address_bits(6), Some(2));
        assert_eq!(mux_address_bits(11), Some(3));
        assert_eq!(mux_address_bits(20), Some(4));
    }

    #[test]
    fn names() {
        let names: Vec<String> = Benchmark::STANDARD.iter().map(|b| b.to_string()).collect();
        assert_eq!(
            names,
            ["cmp6", "cmp8", "maj6", "maj8", "mux6", "mux11", "par6", "par8", "par9", "par10"]
        );
        assert_eq!("MUX11".parse::<Benchmark>().unwrap().v, 11);
        assert!("xor2".parse::<Benchmark>().is_err());
    }

    #[test]
    fn problem_text() {
        let t = parse_problem("v=2\n0110\n").unwrap();
        assert_eq!(t, gen_benchmark(BenchmarkKind::Parity, 2).unwrap());
        assert!(matches!(parse_problem("v=2\n011\n"), Err(Error::ProblemFormat(_))));
        assert!(matches!(parse_problem("0110\n"), Err(Error::ProblemFormat(_))));
        assert!(matches!(parse_problem("v=2\n01x0\n"), Err(Error::ProblemFormat(_))));
        assert!(matches!(parse_problem(""), Err(Error::ProblemFormat(_))));

        // majority of three: popcount(row) > 1.5
        let maj3: String = (0..8u32).map(|i| if i.count_ones() > 1 { '1' } else { '0' }).collect();
        assert_eq!(maj3, "00010111");
        let t = parse_problem("v=3\n00010111\n").unwrap();
        assert_eq!(t, gen_benchmark(BenchmarkKind::Majority, 3).unwrap());

        let t = parse_inline("v=2:0110").unwrap();
        assert_eq!(format_problem(&t), "v=2\n0110\n");
        assert!(parse_inline("v=2").is_err());
    }
}
