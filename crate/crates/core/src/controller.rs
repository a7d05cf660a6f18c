//! Deterministic greedy controller.
//!
//! Given one unprocessed node, every (reverse operator, input argument) pair
//! is scored by an [`ErrorTable`] against the default child placement, the
//! tables are ranked, and the best one whose repaired children differ from
//! the node and its parent wins.

use crate::error::{Error, Result};
use crate::semantics::{
    match_argument, reverse_eval, swap_hash_words, BitArray, BoolOp, FlexMask, TriArray,
};

/// Argument bit value that a class of errors disagrees with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorClass {
    /// Argument is 0, left child is 1.
    Zero,
    /// Argument is 1, left child is 0.
    One,
}

impl ErrorClass {
    pub fn other(self) -> Self {
        match self {
            ErrorClass::Zero => ErrorClass::One,
            ErrorClass::One => ErrorClass::Zero,
        }
    }
}

/// Mismatch statistics of a left child against one input argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ErrorTable {
    pub op: BoolOp,
    /// 1-based argument index (`A1` is 1).
    pub arg_index: usize,
    pub e0: usize,
    pub e1: usize,
    pub m0: usize,
    pub m1: usize,
    pub c_hash_count: usize,
}

impl ErrorTable {
    pub fn errors(&self, class: ErrorClass) -> usize {
        match class {
            ErrorClass::Zero => self.e0,
            ErrorClass::One => self.e1,
        }
    }

    pub fn fixable(&self, class: ErrorClass) -> usize {
        match class {
            ErrorClass::Zero => self.m0,
            ErrorClass::One => self.m1,
        }
    }

    /// Errors of `class` left after moving every eligible `#` into the left child.
    pub fn remaining(&self, class: ErrorClass) -> usize {
        self.errors(class) - self.fixable(class)
    }
}

/// Ranking key; compared lexicographically on
/// `(rem_k, e_k, rem_j, e_j, c_hash_count)`, smaller is better.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RankKey {
    pub k: ErrorClass,
    pub rem_k: usize,
    pub e_k: usize,
    pub rem_j: usize,
    pub e_j: usize,
    pub c_hash_count: usize,
}

impl RankKey {
    pub fn tuple(&self) -> (usize, usize, usize, usize, usize) {
        (self.rem_k, self.e_k, self.rem_j, self.e_j, self.c_hash_count)
    }
}

/// Per-word mask of loci where `b` is concretely wrong for `arg` in `class`.
fn error_words(b: &TriArray, arg: &BitArray, class: ErrorClass) -> Vec<u64> {
    b.value_words()
        .iter()
        .zip(b.hash_words())
        .zip(arg.words())
        .map(|((&v, &h), &a)| match class {
            ErrorClass::Zero => !a & v & !h,
            ErrorClass::One => a & !v & !h,
        })
        .collect()
}

fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

fn masked_popcount(words: &[u64], mask: &[u64]) -> usize {
    words
        .iter()
        .zip(mask)
        .map(|(w, m)| (w & m).count_ones() as usize)
        .sum()
}

fn check_dims(b: &TriArray, flex: &FlexMask, arg: &BitArray) -> Result<()> {
    for found in [flex.len(), arg.len()] {
        if found != b.len() {
            return Err(Error::Dimension {
                expected: b.len(),
                found,
            });
        }
    }
    Ok(())
}

pub fn compute_error_table(
    b: &TriArray,
    flex: &FlexMask,
    arg: &BitArray,
    op: BoolOp,
    arg_index: usize,
    c_hash_count: usize,
) -> Result<ErrorTable> {
    check_dims(b, flex, arg)?;
    let zero = error_words(b, arg, ErrorClass::Zero);
    let one = error_words(b, arg, ErrorClass::One);
    Ok(ErrorTable {
        op,
        arg_index,
        e0: popcount(&zero),
        e1: popcount(&one),
        m0: masked_popcount(&zero, flex.words()),
        m1: masked_popcount(&one, flex.words()),
        c_hash_count,
    })
}

pub fn rank_key(t: &ErrorTable) -> RankKey {
    let k = if t.remaining(ErrorClass::One) <= t.remaining(ErrorClass::Zero) {
        ErrorClass::One
    } else {
        ErrorClass::Zero
    };
    let j = k.other();
    RankKey {
        k,
        rem_k: t.remaining(k),
        e_k: t.errors(k),
        rem_j: t.remaining(j),
        e_j: t.errors(j),
        c_hash_count: t.c_hash_count,
    }
}

/// Swaps every flexible locus whose left-child value is a `class` error
/// against `arg`. Returns the repaired pair and the number of swaps.
pub fn apply_fixes(
    b: &TriArray,
    c: &TriArray,
    flex: &FlexMask,
    arg: &BitArray,
    class: ErrorClass,
) -> Result<(TriArray, TriArray, usize)> {
    check_dims(b, flex, arg)?;
    if c.len() != b.len() {
        return Err(Error::Dimension {
            expected: b.len(),
            found: c.len(),
        });
    }
    let mut loci = error_words(b, arg, class);
    // only loci still in default placement can move
    for ((m, &f), &ch) in loci.iter_mut().zip(flex.words()).zip(c.hash_words()) {
        *m &= f & ch;
    }
    let swaps = popcount(&loci);
    let (mut b, mut c) = (b.clone(), c.clone());
    swap_hash_words(&mut b, &mut c, &loci);
    Ok((b, c, swaps))
}

/// Smallest 1-based index of an argument the outputs can represent.
pub fn try_assign(outputs: &TriArray, args: &[BitArray]) -> Option<usize> {
    args.iter()
        .position(|a| match_argument(outputs, a).unwrap_or(false))
        .map(|i| i + 1)
}

/// What the controller chose and why; enough to replay the decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub table: ErrorTable,
    pub class: ErrorClass,
    pub swaps: usize,
    /// Position of the winning table in the ranked list (0 = best).
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub op: BoolOp,
    pub b_outputs: TriArray,
    pub c_outputs: TriArray,
    pub b_arg: Option<usize>,
    pub c_arg: Option<usize>,
    pub decision: Decision,
}

struct Candidate {
    key: RankKey,
    table: ErrorTable,
    op_slot: usize,
    arg_slot: usize,
}

/// All four-by-v error tables for `node`, best first.
pub fn ranked_tables(node: &TriArray, args: &[BitArray]) -> Result<Vec<(RankKey, ErrorTable)>> {
    let preimages = BoolOp::ALL.map(|op| reverse_eval(op, node));
    Ok(rank(&preimages, args)?
        .into_iter()
        .map(|c| (c.key, c.table))
        .collect())
}

fn rank(preimages: &[crate::semantics::Preimage; 4], args: &[BitArray]) -> Result<Vec<Candidate>> {
    let mut candidates = Vec::with_capacity(4 * args.len());
    for (op_slot, (op, pre)) in BoolOp::ALL.iter().zip(preimages).enumerate() {
        let c_hash = pre.c.count_hash();
        for (arg_slot, arg) in args.iter().enumerate() {
            let table = compute_error_table(&pre.b, &pre.flex, arg, *op, arg_slot + 1, c_hash)?;
            candidates.push(Candidate {
                key: rank_key(&table),
                table,
                op_slot,
                arg_slot,
            });
        }
    }
    // stable sort: ties keep operator order, then argument order
    candidates.sort_by_key(|c| c.key.tuple());
    Ok(candidates)
}

/// One controller step on `node`. `parent` is the node's own parent, if any;
/// neither child may equal `node` or `parent` exactly.
pub fn expand(node: &TriArray, parent: Option<&TriArray>, args: &[BitArray]) -> Result<Expansion> {
    let preimages = BoolOp::ALL.map(|op| reverse_eval(op, node));
    let candidates = rank(&preimages, args)?;
    for (rank, cand) in candidates.iter().enumerate() {
        let pre = &preimages[cand.op_slot];
        let (b, c, swaps) =
            apply_fixes(&pre.b, &pre.c, &pre.flex, &args[cand.arg_slot], cand.key.k)?;
        let repeats = |x: &TriArray| x == node || parent.is_some_and(|p| x == p);
        if repeats(&b) || repeats(&c) {
            continue;
        }
        let b_arg = try_assign(&b, args);
        let c_arg = try_assign(&c, args);
        return Ok(Expansion {
            op: cand.table.op,
            b_outputs: b,
            c_outputs: c,
            b_arg,
            c_arg,
            decision: Decision {
                table: cand.table,
                class: cand.key.k,
                swaps,
                rank,
            },
        });
    }
    Err(Error::ControllerStuck {
        outputs: node.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(s: &str) -> TriArray {
        s.parse().unwrap()
    }

    fn bits(s: &str) -> BitArray {
        s.parse().unwrap()
    }

    fn table(e0: usize, m0: usize, e1: usize, m1: usize) -> ErrorTable {
        ErrorTable {
            op: BoolOp::And,
            arg_index: 1,
            e0,
            e1,
            m0,
            m1,
            c_hash_count: 0,
        }
    }

    #[test]
    fn error_table_examples() {
        let flex = reverse_eval(BoolOp::And, &tri("0110")).flex;
        let t = compute_error_table(&tri("011#"), &flex, &bits("0110"), BoolOp::And, 1, 0).unwrap();
        assert_eq!((t.e0, t.e1, t.m0, t.m1), (0, 0, 0, 0));

        let p = reverse_eval(BoolOp::Or, &tri("1100"));
        assert_eq!(p.b, tri("1100"));
        let t = compute_error_table(&p.b, &p.flex, &bits("0101"), BoolOp::Or, 1, p.c.count_hash())
            .unwrap();
        assert_eq!((t.e0, t.e1, t.m0, t.m1), (1, 1, 1, 0));

        let p = reverse_eval(BoolOp::And, &tri("00"));
        let t = compute_error_table(&p.b, &p.flex, &bits("11"), BoolOp::And, 1, 2).unwrap();
        assert_eq!((t.e0, t.e1, t.m0, t.m1), (0, 2, 0, 2));
    }

    #[test]
    fn error_table_dimension_error() {
        let p = reverse_eval(BoolOp::And, &tri("00"));
        assert!(matches!(
            compute_error_table(&p.b, &p.flex, &bits("110"), BoolOp::And, 1, 0),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn rank_key_examples() {
        let k = rank_key(&table(1, 1, 0, 0));
        assert_eq!(k.k, ErrorClass::One);
        assert_eq!(k.tuple(), (0, 0, 0, 1, 0));

        let k = rank_key(&table(0, 0, 0, 0));
        assert_eq!(k.k, ErrorClass::One);
        assert_eq!(k.tuple(), (0, 0, 0, 0, 0));

        let k = rank_key(&table(2, 0, 3, 3));
        assert_eq!(k.k, ErrorClass::One);
        assert_eq!(k.tuple(), (0, 3, 2, 2, 0));

        let k = rank_key(&table(2, 2, 3, 0));
        assert_eq!(k.k, ErrorClass::Zero);
        assert_eq!(k.tuple(), (0, 2, 3, 3, 0));
    }

    #[test]
    fn apply_fixes_examples() {
        let p = reverse_eval(BoolOp::Or, &tri("1100"));
        let (b, c, n) = apply_fixes(&p.b, &p.c, &p.flex, &bits("0101"), ErrorClass::Zero).unwrap();
        assert_eq!((b.to_string(), c.to_string(), n), ("#100".into(), "1#00".into(), 1));

        // no class-one errors are fixable for OR
        let (b, c, n) = apply_fixes(&p.b, &p.c, &p.flex, &bits("0101"), ErrorClass::One).unwrap();
        assert_eq!((b, c, n), (p.b.clone(), p.c.clone(), 0));

        let p = reverse_eval(BoolOp::And, &tri("00"));
        let (b, c, n) = apply_fixes(&p.b, &p.c, &p.flex, &bits("11"), ErrorClass::One).unwrap();
        assert_eq!((b.to_string(), c.to_string(), n), ("##".into(), "00".into(), 2));
    }

    #[test]
    fn try_assign_examples() {
        assert_eq!(try_assign(&tri("011#"), &[bits("0110")]), Some(1));
        assert_eq!(try_assign(&tri("##"), &[bits("01"), bits("11")]), Some(1));
        assert_eq!(try_assign(&tri("10"), &[bits("01")]), None);
        assert_eq!(try_assign(&tri("11"), &[bits("01"), bits("11")]), Some(2));
    }

    fn args2() -> Vec<BitArray> {
        vec![bits("0101"), bits("0011")]
    }

    #[test]
    fn expand_xor_first_step() {
        // every table ties at (0,1,1,1,2); ties fall back to AND, A1
        let e = expand(&tri("0110"), None, &args2()).unwrap();
        assert_eq!(e.op, BoolOp::And);
        assert_eq!(e.decision.table.arg_index, 1);
        assert_eq!(e.decision.swaps, 1);
        assert_eq!(e.b_outputs.to_string(), "011#");
        assert_eq!(e.c_outputs.to_string(), "#110");
        assert_eq!((e.b_arg, e.c_arg), (None, None));
    }

    #[test]
    fn expand_on_argument_array_is_defined() {
        let node = tri("0101");
        let e = expand(&node, None, &args2()).unwrap();
        assert_ne!(e.b_outputs, node);
        assert_ne!(e.c_outputs, node);
    }

    #[test]
    fn expand_all_hash_is_stuck() {
        // children of an all-# node are all-# and equal the node itself
        let err = expand(&TriArray::all_hash(4), None, &args2()).unwrap_err();
        assert!(matches!(err, Error::ControllerStuck { .. }));
        for (_, t) in ranked_tables(&TriArray::all_hash(4), &args2()).unwrap() {
            assert_eq!((t.e0, t.e1), (0, 0));
        }
    }

    #[test]
    fn expand_skips_parent_copies() {
        let node = tri("0110");
        let first = expand(&node, None, &args2()).unwrap();
        let blocked = first.c_outputs.clone();
        let e = expand(&node, Some(&blocked), &args2()).unwrap();
        assert_ne!(e.b_outputs, blocked);
        assert_ne!(e.c_outputs, blocked);
        assert!(e.decision.rank > 0);
    }
}
