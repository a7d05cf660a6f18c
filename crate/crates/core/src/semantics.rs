//! Three-valued node semantics and the forward/reverse Boolean operators.
//!
//! A node's semantics is its output over every fitness case. During top-down
//! growth those outputs may contain don't-care loci (`#`), so a [`TriArray`]
//! stores two bit-planes: a value plane and a hash plane. Canonical form keeps
//! the value bit cleared wherever the hash bit is set, and all bits past `len`
//! cleared, so derived equality is ternary element-wise equality.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// Mask of valid bits in word `w` of an array of `len` loci.
#[inline]
fn tail_mask(len: usize, w: usize) -> u64 {
    let start = w * WORD;
    let rem = len - start;
    if rem >= WORD {
        !0
    } else {
        (1u64 << rem) - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriValue {
    Zero,
    One,
    Hash,
}

impl TriValue {
    pub fn as_char(self) -> char {
        match self {
            TriValue::Zero => '0',
            TriValue::One => '1',
            TriValue::Hash => '#',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '0' => Some(TriValue::Zero),
            '1' => Some(TriValue::One),
            '#' => Some(TriValue::Hash),
            _ => None,
        }
    }
}

impl From<bool> for TriValue {
    fn from(b: bool) -> Self {
        if b {
            TriValue::One
        } else {
            TriValue::Zero
        }
    }
}

/// A concrete bit per fitness case.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitArray {
    len: usize,
    words: Vec<u64>,
}

impl BitArray {
    pub fn zeros(len: usize) -> Self {
        BitArray {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut out = Self::zeros(len);
        for i in 0..len {
            if f(i) {
                out.words[i / WORD] |= 1 << (i % WORD);
            }
        }
        out
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_fn(bits.len(), |i| bits[i])
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "locus {i} out of range for length {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn to_tri(&self) -> TriArray {
        TriArray {
            len: self.len,
            value: self.words.clone(),
            hash: vec![0; self.words.len()],
        }
    }
}

impl fmt::Display for BitArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitArray {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidSymbol(other)),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BitArray::from_bools(&bits))
    }
}

/// Ternary semantics over all fitness cases, rendered locus 0 first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriArray {
    len: usize,
    value: Vec<u64>,
    hash: Vec<u64>,
}

impl TriArray {
    pub fn all_hash(len: usize) -> Self {
        let n = words_for(len);
        let hash = (0..n).map(|w| tail_mask(len, w)).collect();
        TriArray {
            len,
            value: vec![0; n],
            hash,
        }
    }

    pub fn from_values(values: &[TriValue]) -> Self {
        let len = values.len();
        let n = words_for(len);
        let mut value = vec![0u64; n];
        let mut hash = vec![0u64; n];
        for (i, v) in values.iter().enumerate() {
            let bit = 1u64 << (i % WORD);
            match v {
                TriValue::Zero => {}
                TriValue::One => value[i / WORD] |= bit,
                TriValue::Hash => hash[i / WORD] |= bit,
            }
        }
        TriArray { len, value, hash }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> TriValue {
        assert!(i < self.len, "locus {i} out of range for length {}", self.len);
        let (w, b) = (i / WORD, i % WORD);
        if self.hash[w] >> b & 1 == 1 {
            TriValue::Hash
        } else if self.value[w] >> b & 1 == 1 {
            TriValue::One
        } else {
            TriValue::Zero
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = TriValue> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_values(&self) -> Vec<TriValue> {
        self.iter().collect()
    }

    pub fn count_hash(&self) -> usize {
        self.hash.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_all_hash(&self) -> bool {
        self.count_hash() == self.len
    }

    /// Concrete bits if the array holds no `#`.
    pub fn to_bits(&self) -> Option<BitArray> {
        if self.count_hash() != 0 {
            return None;
        }
        Some(BitArray {
            len: self.len,
            words: self.value.clone(),
        })
    }

    pub(crate) fn value_words(&self) -> &[u64] {
        &self.value
    }

    pub(crate) fn hash_words(&self) -> &[u64] {
        &self.hash
    }

    fn check_len(&self, other: usize) -> Result<()> {
        if self.len != other {
            return Err(Error::Dimension {
                expected: self.len,
                found: other,
            });
        }
        Ok(())
    }
}

impl fmt::Display for TriArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(TriValue::as_char).collect();
        f.write_str(&s)
    }
}

impl FromStr for TriArray {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .chars()
            .map(|c| TriValue::from_char(c).ok_or(Error::InvalidSymbol(c)))
            .collect::<Result<Vec<_>>>()?;
        Ok(TriArray::from_values(&values))
    }
}

impl From<&BitArray> for TriArray {
    fn from(bits: &BitArray) -> Self {
        bits.to_tri()
    }
}

/// Loci where a reverse operator could place the `#` in either child.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlexMask {
    len: usize,
    words: Vec<u64>,
}

impl FlexMask {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "locus {i} out of range for length {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoolOp {
    And,
    Or,
    Nand,
    Nor,
}

impl BoolOp {
    /// Fixed enumeration order; also the controller's tie-break order.
    pub const ALL: [BoolOp; 4] = [BoolOp::And, BoolOp::Or, BoolOp::Nand, BoolOp::Nor];

    pub fn name(self) -> &'static str {
        match self {
            BoolOp::And => "AND",
            BoolOp::Or => "OR",
            BoolOp::Nand => "NAND",
            BoolOp::Nor => "NOR",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        BoolOp::ALL
            .into_iter()
            .find(|op| op.name().eq_ignore_ascii_case(name))
    }

    #[inline]
    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::And => a & b,
            BoolOp::Or => a | b,
            BoolOp::Nand => !(a & b),
            BoolOp::Nor => !(a | b),
        }
    }

    #[inline]
    fn apply_word(self, a: u64, b: u64) -> u64 {
        match self {
            BoolOp::And => a & b,
            BoolOp::Or => a | b,
            BoolOp::Nand => !(a & b),
            BoolOp::Nor => !(a | b),
        }
    }

    /// Parent value at which the reverse table has two alternative rows.
    pub fn flexible_value(self) -> bool {
        matches!(self, BoolOp::Or | BoolOp::Nand)
    }

    /// Whether the children carry the complement of the parent.
    fn inverts(self) -> bool {
        matches!(self, BoolOp::Nand | BoolOp::Nor)
    }
}

impl fmt::Display for BoolOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn forward_eval(op: BoolOp, left: &BitArray, right: &BitArray) -> Result<BitArray> {
    if left.len != right.len {
        return Err(Error::Dimension {
            expected: left.len,
            found: right.len,
        });
    }
    let words = left
        .words
        .iter()
        .zip(&right.words)
        .enumerate()
        .map(|(w, (&a, &b))| op.apply_word(a, b) & tail_mask(left.len, w))
        .collect();
    Ok(BitArray {
        len: left.len,
        words,
    })
}

/// Child pair produced by a reverse operator, with the default placement
/// (every optional `#` in the right child).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preimage {
    pub b: TriArray,
    pub c: TriArray,
    pub flex: FlexMask,
}

pub fn reverse_eval(op: BoolOp, parent: &TriArray) -> Preimage {
    let len = parent.len;
    let n = parent.value.len();
    let mut b_val = Vec::with_capacity(n);
    let mut c_val = Vec::with_capacity(n);
    let mut c_hash = Vec::with_capacity(n);
    let mut flex = Vec::with_capacity(n);
    for w in 0..n {
        let concrete = !parent.hash[w] & tail_mask(len, w);
        let v = parent.value[w];
        let fx = if op.flexible_value() {
            concrete & v
        } else {
            concrete & !v
        };
        let bv = if op.inverts() { concrete & !v } else { v };
        b_val.push(bv);
        c_val.push(bv & !fx);
        c_hash.push(parent.hash[w] | fx);
        flex.push(fx);
    }
    Preimage {
        b: TriArray {
            len,
            value: b_val,
            hash: parent.hash.clone(),
        },
        c: TriArray {
            len,
            value: c_val,
            hash: c_hash,
        },
        flex: FlexMask { len, words: flex },
    }
}

/// Moves the `#` at a flexible locus from the right child to the left one.
pub fn swap_hash(
    b: &TriArray,
    c: &TriArray,
    flex: &FlexMask,
    locus: usize,
) -> Result<(TriArray, TriArray)> {
    let mut b = b.clone();
    let mut c = c.clone();
    swap_hash_in_place(&mut b, &mut c, flex, locus)?;
    Ok((b, c))
}

pub(crate) fn swap_hash_in_place(
    b: &mut TriArray,
    c: &mut TriArray,
    flex: &FlexMask,
    locus: usize,
) -> Result<()> {
    b.check_len(c.len)?;
    b.check_len(flex.len)?;
    if locus >= b.len
        || !flex.get(locus)
        || c.get(locus) != TriValue::Hash
        || b.get(locus) == TriValue::Hash
    {
        return Err(Error::InvalidSwap { locus });
    }
    let (w, bit) = (locus / WORD, 1u64 << (locus % WORD));
    let moved = b.value[w] & bit;
    b.value[w] &= !bit;
    b.hash[w] |= bit;
    c.hash[w] &= !bit;
    c.value[w] |= moved;
    Ok(())
}

/// Bulk swap at every locus in `loci` (one bit per locus). Caller guarantees
/// the loci are flexible and still in default placement.
pub(crate) fn swap_hash_words(b: &mut TriArray, c: &mut TriArray, loci: &[u64]) {
    for (w, &m) in loci.iter().enumerate() {
        let moved = b.value[w] & m;
        b.value[w] &= !m;
        b.hash[w] |= m;
        c.hash[w] &= !m;
        c.value[w] |= moved;
    }
}

/// True iff every non-`#` locus of `child` agrees with `arg`.
pub fn match_argument(child: &TriArray, arg: &BitArray) -> Result<bool> {
    child.check_len(arg.len)?;
    Ok(child
        .value
        .iter()
        .zip(&child.hash)
        .zip(&arg.words)
        .all(|((&v, &h), &a)| (v ^ a) & !h == 0))
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

    #[test]
    fn forward_examples() {
        assert_eq!(forward_eval(BoolOp::And, &bits("01"), &bits("11")).unwrap(), bits("01"));
        assert_eq!(forward_eval(BoolOp::Or, &bits("00"), &bits("00")).unwrap(), bits("00"));
        assert_eq!(
            forward_eval(BoolOp::Nand, &bits("101"), &bits("110")).unwrap(),
            bits("011")
        );
        assert!(matches!(
            forward_eval(BoolOp::And, &bits("01"), &bits("011")),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn forward_clears_tail_bits() {
        let out = forward_eval(BoolOp::Nor, &bits("000"), &bits("000")).unwrap();
        assert_eq!(out.count_ones(), 3);
    }

    #[test]
    fn reverse_examples() {
        let p = reverse_eval(BoolOp::And, &tri("01"));
        assert_eq!((p.b.to_string(), p.c.to_string()), ("01".into(), "#1".into()));
        assert_eq!(p.flex.to_bools(), vec![true, false]);

        let p = reverse_eval(BoolOp::Nor, &tri("1#"));
        assert_eq!((p.b.to_string(), p.c.to_string()), ("0#".into(), "0#".into()));
        assert_eq!(p.flex.to_bools(), vec![false, false]);

        let p = reverse_eval(BoolOp::Or, &tri("110#"));
        assert_eq!(p.b.to_string(), "110#");
        assert_eq!(p.c.to_string(), "##0#");
        assert_eq!(p.flex.to_bools(), vec![true, true, false, false]);
    }

    #[test]
    fn reverse_inverting_ops() {
        let p = reverse_eval(BoolOp::Nand, &tri("10#"));
        assert_eq!(p.b.to_string(), "01#");
        assert_eq!(p.c.to_string(), "#1#");
        let p = reverse_eval(BoolOp::Nor, &tri("10#"));
        assert_eq!(p.b.to_string(), "01#");
        assert_eq!(p.c.to_string(), "0##");
    }

    #[test]
    fn swap_examples() {
        let flex = reverse_eval(BoolOp::Or, &tri("11")).flex;
        let (b, c) = swap_hash(&tri("11"), &tri("##"), &flex, 0).unwrap();
        assert_eq!((b.to_string(), c.to_string()), ("#1".into(), "1#".into()));

        let p = reverse_eval(BoolOp::And, &tri("01"));
        assert!(matches!(
            swap_hash(&p.b, &p.c, &p.flex, 1),
            Err(Error::InvalidSwap { locus: 1 })
        ));

        let p = reverse_eval(BoolOp::And, &tri("00"));
        assert_eq!((p.b.to_string(), p.c.to_string()), ("00".into(), "##".into()));
        let (b, c) = swap_hash(&p.b, &p.c, &p.flex, 1).unwrap();
        assert_eq!((b.to_string(), c.to_string()), ("0#".into(), "#0".into()));
        // second swap on the same locus is no longer legal
        assert!(swap_hash(&b, &c, &p.flex, 1).is_err());
    }

    #[test]
    fn match_examples() {
        assert!(match_argument(&tri("011#"), &bits("0110")).unwrap());
        assert!(!match_argument(&tri("01"), &bits("10")).unwrap());
        for s in ["000", "101", "111"] {
            assert!(match_argument(&tri("###"), &bits(s)).unwrap());
        }
        assert!(match_argument(&tri("01"), &bits("011")).is_err());
    }

    #[test]
    fn rendering_round_trips_across_word_boundary() {
        let s: String = (0..130).map(|i| ['0', '1', '#'][i % 3]).collect();
        let t = tri(&s);
        assert_eq!(t.to_string(), s);
        assert_eq!(t.count_hash(), 43);
        assert!(TriArray::all_hash(130).is_all_hash());
        assert!(matches!("01x".parse::<TriArray>(), Err(Error::InvalidSymbol('x'))));
    }
}
