//! Boolean function synthesis by growing a single expression tree from the
//! root down. Each unprocessed node's desired outputs are split into two
//! child output arrays by inverting an operator, and a deterministic greedy
//! controller picks the split that brings a child closest to an input.

pub mod benchmarks;
pub mod cli;
pub mod controller;
pub mod error;
pub mod semantics;
pub mod sexpr;
pub mod solver;
pub mod trace;
pub mod verifier;

pub use benchmarks::{gen_benchmark, Benchmark, BenchmarkKind, TruthTable};
pub use controller::{expand, Expansion};
pub use error::{Error, Result};
pub use semantics::{BitArray, BoolOp, TriArray, TriValue};
pub use sexpr::Expr;
pub use solver::{solve, Budget, SolutionTree};
pub use verifier::{verify, verify_tree, VerifyReport};
