//! Brute-force forward evaluation of finished programs, one fitness case at
//! a time. Shares nothing with the reverse semantics used during growth.

use crate::benchmarks::TruthTable;
use crate::error::{Error, Result};
use crate::semantics::{BitArray, TriValue};
use crate::sexpr::{Expr, Term};
use crate::solver::SolutionTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyReport {
    pub num_cases: usize,
    pub num_correct: usize,
    pub perfect: bool,
    pub first_mismatch: Option<usize>,
}

/// Value of every term on one row; the root's value is last.
fn evaluate_terms(expr: &Expr, row: usize, args: &[BitArray]) -> Result<Vec<bool>> {
    let mut values = Vec::with_capacity(expr.size());
    for term in expr.terms() {
        let v = match *term {
            Term::Arg(k) => {
                let arg = args.get(k - 1).ok_or(Error::ArityMismatch {
                    tree: k,
                    problem: args.len(),
                })?;
                arg.get(row)
            }
            Term::Op(op, l, r) => op.apply(values[l], values[r]),
        };
        values.push(v);
    }
    Ok(values)
}

pub fn evaluate_row(expr: &Expr, row: usize, args: &[BitArray]) -> Result<bool> {
    Ok(*evaluate_terms(expr, row, args)?.last().expect("non-empty expression"))
}

pub fn verify(expr: &Expr, problem: &TruthTable) -> Result<VerifyReport> {
    if expr.max_arg() > problem.arity() {
        return Err(Error::ArityMismatch {
            tree: expr.max_arg(),
            problem: problem.arity(),
        });
    }
    let mut num_correct = 0;
    let mut first_mismatch = None;
    for row in 0..problem.num_cases() {
        if evaluate_row(expr, row, problem.args())? == problem.targets().get(row) {
            num_correct += 1;
        } else if first_mismatch.is_none() {
            first_mismatch = Some(row);
        }
    }
    Ok(VerifyReport {
        num_cases: problem.num_cases(),
        num_correct,
        perfect: first_mismatch.is_none(),
        first_mismatch,
    })
}

pub fn verify_tree(tree: &SolutionTree, problem: &TruthTable) -> Result<VerifyReport> {
    if tree.arity() != problem.arity() {
        return Err(Error::ArityMismatch {
            tree: tree.arity(),
            problem: problem.arity(),
        });
    }
    verify(&tree.to_expr()?, problem)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SemanticsViolation {
    pub node: usize,
    pub row: usize,
}

/// Every (node, row) where a node's recorded outputs are concrete but its
/// subtree evaluates to something else.
pub fn node_semantics_violations(
    tree: &SolutionTree,
    problem: &TruthTable,
) -> Result<Vec<SemanticsViolation>> {
    let (expr, term_of) = tree.to_expr_with_map()?;
    let mut out = Vec::new();
    for row in 0..problem.num_cases() {
        let values = evaluate_terms(&expr, row, problem.args())?;
        for node in tree.nodes() {
            let expected = match node.outputs.get(row) {
                TriValue::Hash => continue,
                TriValue::Zero => false,
                TriValue::One => true,
            };
            if values[term_of[node.id]] != expected {
                out.push(SemanticsViolation { node: node.id, row });
            }
        }
    }
    Ok(out)
}
