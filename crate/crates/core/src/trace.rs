//! Line-delimited JSON records of controller decisions, one per expanded
//! node: the parent semantics, the chosen operator and error table, and the
//! resulting child pair.

use serde::{Deserialize, Serialize};

use crate::controller::{apply_fixes, compute_error_table, rank_key, Expansion};
use crate::error::{Error, Result};
use crate::semantics::{reverse_eval, BitArray, BoolOp, TriArray, TriValue};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub parent_outputs: String,
    pub op: String,
    pub arg_index: usize,
    pub e0: usize,
    pub e1: usize,
    pub m0: usize,
    pub m1: usize,
    pub swaps: usize,
    pub b_outputs: String,
    pub c_outputs: String,
    pub b_arg: Option<usize>,
    pub c_arg: Option<usize>,
}

impl TraceRecord {
    pub fn new(parent: &TriArray, e: &Expansion) -> Self {
        let t = &e.decision.table;
        TraceRecord {
            parent_outputs: parent.to_string(),
            op: e.op.name().to_string(),
            arg_index: t.arg_index,
            e0: t.e0,
            e1: t.e1,
            m0: t.m0,
            m1: t.m1,
            swaps: e.decision.swaps,
            b_outputs: e.b_outputs.to_string(),
            c_outputs: e.c_outputs.to_string(),
            b_arg: e.b_arg,
            c_arg: e.c_arg,
        }
    }

    /// Replays the decision from `parent_outputs` and checks that the
    /// recorded triplet is a legal, reverse-consistent result.
    pub fn validate(&self, args: &[BitArray]) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidTrace(msg));
        let parent: TriArray = self.parent_outputs.parse()?;
        let b: TriArray = self.b_outputs.parse()?;
        let c: TriArray = self.c_outputs.parse()?;
        let op = match BoolOp::from_name(&self.op) {
            Some(op) => op,
            None => return bad(format!("unknown operator {:?}", self.op)),
        };
        let arg = match self.arg_index.checked_sub(1).and_then(|i| args.get(i)) {
            Some(a) => a,
            None => return bad(format!("argument index {} out of range", self.arg_index)),
        };
        if b.len() != parent.len() || c.len() != parent.len() {
            return bad("child length differs from parent".into());
        }

        // every HASH resolution of the children must reproduce the parent
        for i in 0..parent.len() {
            let want = match parent.get(i) {
                TriValue::Hash => {
                    if b.get(i) != TriValue::Hash || c.get(i) != TriValue::Hash {
                        return bad(format!("locus {i}: # not propagated"));
                    }
                    continue;
                }
                v => v == TriValue::One,
            };
            let choices = |v: TriValue| match v {
                TriValue::Hash => vec![false, true],
                v => vec![v == TriValue::One],
            };
            for &x in &choices(b.get(i)) {
                for &y in &choices(c.get(i)) {
                    if op.apply(x, y) != want {
                        return bad(format!("locus {i}: {op} children do not reproduce parent"));
                    }
                }
            }
        }

        let pre = reverse_eval(op, &parent);
        // swaps only ever move a default # from c to b at a flexible locus
        let mut moved = 0;
        for i in 0..parent.len() {
            if (pre.b.get(i), pre.c.get(i)) == (b.get(i), c.get(i)) {
                continue;
            }
            let legal = pre.flex.get(i)
                && pre.c.get(i) == TriValue::Hash
                && b.get(i) == TriValue::Hash
                && c.get(i) == pre.b.get(i);
            if !legal {
                return bad(format!("locus {i}: illegal swap"));
            }
            moved += 1;
        }
        if moved != self.swaps {
            return bad(format!("recorded {} swaps, found {moved}", self.swaps));
        }

        let table = compute_error_table(&pre.b, &pre.flex, arg, op, self.arg_index, pre.c.count_hash())?;
        if (table.e0, table.e1, table.m0, table.m1) != (self.e0, self.e1, self.m0, self.m1) {
            return bad("error statistics do not match replay".into());
        }
        let (fb, fc, _) = apply_fixes(&pre.b, &pre.c, &pre.flex, arg, rank_key(&table).k)?;
        if fb != b || fc != c {
            return bad("children do not match replayed fixes".into());
        }

        for (child, label) in [(&b, self.b_arg), (&c, self.c_arg)] {
            if let Some(k) = label {
                let ok = args
                    .get(k.wrapping_sub(1))
                    .map(|a| crate::semantics::match_argument(child, a))
                    .transpose()?
                    .unwrap_or(false);
                if !ok {
                    return bad(format!("child labelled A{k} does not match it"));
                }
            }
        }
        Ok(())
    }
}

pub fn read_jsonl(text: &str) -> Result<Vec<TraceRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| Error::InvalidTrace(e.to_string())))
        .collect()
}
