//! Flat S-expression programs over `AND`/`OR`/`NAND`/`NOR` and `A<k>` leaves.
//!
//! Terms are stored in post-order (children before parents) so both parsing
//! and evaluation run without recursion; grown trees can be thousands of
//! levels deep.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::semantics::BoolOp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Term {
    /// 1-based input index.
    Arg(usize),
    Op(BoolOp, usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Expr {
    terms: Vec<Term>,
}

impl Expr {
    /// Builds from post-ordered terms; the last term is the root.
    pub fn from_terms(terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Parse {
                offset: 0,
                message: "empty expression".into(),
            });
        }
        for (i, t) in terms.iter().enumerate() {
            match *t {
                Term::Arg(0) => {
                    return Err(Error::Parse {
                        offset: 0,
                        message: "argument indices start at 1".into(),
                    })
                }
                Term::Op(_, l, r) if l >= i || r >= i => {
                    return Err(Error::Parse {
                        offset: 0,
                        message: format!("term {i} refers forward"),
                    })
                }
                _ => {}
            }
        }
        Ok(Expr { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn root(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn size(&self) -> usize {
        self.terms.len()
    }

    /// Largest argument index referenced.
    pub fn max_arg(&self) -> usize {
        self.terms
            .iter()
            .filter_map(|t| match t {
                Term::Arg(k) => Some(*k),
                Term::Op(..) => None,
            })
            .max()
            .unwrap_or(0)
    }
}

enum Visit {
    Enter(usize),
    Close,
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut stack = vec![Visit::Enter(self.root())];
        let mut need_space = false;
        while let Some(item) = stack.pop() {
            match item {
                Visit::Enter(i) => {
                    if need_space {
                        f.write_str(" ")?;
                    }
                    match self.terms[i] {
                        Term::Arg(k) => {
                            write!(f, "A{k}")?;
                            need_space = true;
                        }
                        Term::Op(op, l, r) => {
                            write!(f, "({}", op.name())?;
                            need_space = true;
                            stack.push(Visit::Close);
                            stack.push(Visit::Enter(r));
                            stack.push(Visit::Enter(l));
                        }
                    }
                }
                Visit::Close => {
                    f.write_str(")")?;
                    need_space = true;
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, PartialEq)]
enum Token<'a> {
    Open,
    Close,
    Atom(&'a str),
}

fn tokenize(src: &str) -> Vec<(usize, Token<'_>)> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c == b'(' {
            out.push((i, Token::Open));
            i += 1;
        } else if c == b')' {
            out.push((i, Token::Close));
            i += 1;
        } else {
            let start = i;
            while i < bytes.len()
                && !bytes[i].is_ascii_whitespace()
                && bytes[i] != b'('
                && bytes[i] != b')'
            {
                i += 1;
            }
            out.push((start, Token::Atom(&src[start..i])));
        }
    }
    out
}

fn parse_arg(atom: &str, offset: usize) -> Result<usize> {
    let idx = atom
        .strip_prefix('A')
        .or_else(|| atom.strip_prefix('a'))
        .and_then(|n| n.parse::<usize>().ok())
        .filter(|&k| k >= 1);
    idx.ok_or_else(|| Error::Parse {
        offset,
        message: format!("expected argument A<k>, found {atom:?}"),
    })
}

struct Frame {
    op: BoolOp,
    offset: usize,
    children: Vec<usize>,
}

pub fn parse(src: &str) -> Result<Expr> {
    let tokens = tokenize(src);
    let err = |offset: usize, message: &str| Error::Parse {
        offset,
        message: message.to_string(),
    };
    let mut terms = Vec::new();
    let mut stack: Vec<Frame> = Vec::new();
    let mut root = None;
    let mut iter = tokens.into_iter().peekable();

    while let Some((offset, tok)) = iter.next() {
        if root.is_some() {
            return Err(err(offset, "trailing input after expression"));
        }
        let finished = match tok {
            Token::Open => {
                let (op_off, name) = match iter.next() {
                    Some((o, Token::Atom(a))) => (o, a),
                    Some((o, _)) => return Err(err(o, "expected operator name")),
                    None => return Err(err(src.len(), "unexpected end of input")),
                };
                let op = BoolOp::from_name(name)
                    .ok_or_else(|| err(op_off, &format!("unknown operator {name:?}")))?;
                stack.push(Frame {
                    op,
                    offset,
                    children: Vec::with_capacity(2),
                });
                None
            }
            Token::Close => {
                let frame = stack.pop().ok_or_else(|| err(offset, "unbalanced ')'"))?;
                if frame.children.len() != 2 {
                    return Err(err(
                        frame.offset,
                        &format!("{} takes 2 operands, found {}", frame.op, frame.children.len()),
                    ));
                }
                terms.push(Term::Op(frame.op, frame.children[0], frame.children[1]));
                Some(terms.len() - 1)
            }
            Token::Atom(a) => {
                terms.push(Term::Arg(parse_arg(a, offset)?));
                Some(terms.len() - 1)
            }
        };
        if let Some(idx) = finished {
            match stack.last_mut() {
                Some(parent) => {
                    if parent.children.len() == 2 {
                        return Err(err(offset, "too many operands"));
                    }
                    parent.children.push(idx);
                }
                None => root = Some(idx),
            }
        }
    }
    if !stack.is_empty() || root.is_none() {
        return Err(err(src.len(), "unexpected end of input"));
    }
    Expr::from_terms(terms)
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_canonically() {
        let e = parse("A1").unwrap();
        assert_eq!(e.to_string(), "A1");
        let e = parse("  ( and\n A1   A2 ) ").unwrap();
        assert_eq!(e.to_string(), "(AND A1 A2)");
        let src = "(AND (OR A1 A2) (NAND A3 A1))";
        assert_eq!(parse(src).unwrap().to_string(), src);
        assert_eq!(parse(src).unwrap().max_arg(), 3);
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["(AND A1", "(AND A1 A2 A3)", "(XOR A1 A2)", "A0", "B1", "()", ")", "A1 A2", "", "(AND A1)"] {
            assert!(matches!(parse(bad), Err(Error::Parse { .. })), "{bad:?}");
        }
    }

    #[test]
    fn deep_nesting_without_recursion() {
        let depth = 50_000;
        let mut s = String::new();
        for _ in 0..depth {
            s.push_str("(NOR A1 ");
        }
        s.push_str("A2");
        s.push_str(&")".repeat(depth));
        let e = parse(&s).unwrap();
        assert_eq!(e.size(), 2 * depth + 1);
        assert_eq!(e.to_string(), s);
    }

    #[test]
    fn from_terms_validates_order() {
        assert!(Expr::from_terms(vec![Term::Op(BoolOp::And, 1, 2), Term::Arg(1), Term::Arg(2)]).is_err());
        assert!(Expr::from_terms(vec![Term::Arg(1), Term::Arg(2), Term::Op(BoolOp::And, 0, 1)]).is_ok());
    }
}
