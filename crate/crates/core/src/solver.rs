//! Top-down growth loop: seed the root with the target outputs, then hand
//! unprocessed nodes to the controller until every branch ends in an input.

use crate::benchmarks::TruthTable;
use crate::controller::{expand, try_assign, Expansion};
use crate::error::{Error, Result};
use crate::semantics::{BoolOp, TriArray};
use crate::sexpr::{Expr, Term};

pub const DEFAULT_MAX_NODES: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Operator(BoolOp),
    /// 1-based input index.
    Argument(usize),
    Unprocessed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: usize,
    pub kind: NodeKind,
    pub outputs: TriArray,
    pub parent: Option<usize>,
    pub children: Option<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    max_nodes: usize,
}

impl Budget {
    pub fn new(max_nodes: usize) -> Result<Self> {
        if max_nodes == 0 {
            return Err(Error::BudgetExceeded { max_nodes });
        }
        Ok(Budget { max_nodes })
    }

    pub fn max_nodes(&self) -> usize {
        self.max_nodes
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: DEFAULT_MAX_NODES,
        }
    }
}

/// Nodes are indexed by id; a parent's id is always smaller than its children's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionTree {
    nodes: Vec<Node>,
    root: usize,
    arity: usize,
}

impl SolutionTree {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &Node {
        &self.nodes[id]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_finished(&self) -> bool {
        self.nodes.iter().all(|n| match n.kind {
            NodeKind::Unprocessed => false,
            NodeKind::Argument(_) => n.children.is_none(),
            NodeKind::Operator(_) => n.children.is_some(),
        })
    }

    /// Post-order program plus, for each node id, its term index.
    pub fn to_expr_with_map(&self) -> Result<(Expr, Vec<usize>)> {
        if !self.is_finished() {
            return Err(Error::UnfinishedTree);
        }
        let mut terms = Vec::with_capacity(self.nodes.len());
        let mut term_of = vec![usize::MAX; self.nodes.len()];
        let mut stack = vec![(self.root, false)];
        while let Some((id, expanded)) = stack.pop() {
            let node = &self.nodes[id];
            match (node.kind, node.children) {
                (NodeKind::Argument(k), _) => {
                    term_of[id] = terms.len();
                    terms.push(Term::Arg(k));
                }
                (NodeKind::Operator(op), Some((l, r))) => {
                    if expanded {
                        term_of[id] = terms.len();
                        terms.push(Term::Op(op, term_of[l], term_of[r]));
                    } else {
                        stack.push((id, true));
                        stack.push((r, false));
                        stack.push((l, false));
                    }
                }
                _ => return Err(Error::UnfinishedTree),
            }
        }
        Ok((Expr::from_terms(terms)?, term_of))
    }

    pub fn to_expr(&self) -> Result<Expr> {
        self.to_expr_with_map().map(|(e, _)| e)
    }

    pub fn to_sexpr(&self) -> Result<String> {
        Ok(self.to_expr()?.to_string())
    }
}

pub fn tree_size(tree: &SolutionTree) -> usize {
    tree.size()
}

pub fn solve(problem: &TruthTable, budget: Budget) -> Result<SolutionTree> {
    solve_observed(problem, budget, |_, _| {})
}

/// Like [`solve`], calling `observe(node_outputs, expansion)` after every
/// controller call, in expansion order.
pub fn solve_observed(
    problem: &TruthTable,
    budget: Budget,
    mut observe: impl FnMut(&TriArray, &Expansion),
) -> Result<SolutionTree> {
    let args = problem.args();
    let mut nodes = vec![Node {
        id: 0,
        kind: NodeKind::Unprocessed,
        outputs: problem.targets().to_tri(),
        parent: None,
        children: None,
    }];
    let mut unprocessed = vec![0usize];

    while let Some(id) = unprocessed.pop() {
        if let Some(k) = try_assign(&nodes[id].outputs, args) {
            nodes[id].kind = NodeKind::Argument(k);
            continue;
        }
        if nodes.len() + 2 > budget.max_nodes {
            return Err(Error::BudgetExceeded {
                max_nodes: budget.max_nodes,
            });
        }
        let parent_outputs = nodes[id].parent.map(|p| &nodes[p].outputs);
        let expansion = expand(&nodes[id].outputs, parent_outputs, args)?;
        observe(&nodes[id].outputs, &expansion);

        let Expansion {
            op,
            b_outputs,
            c_outputs,
            b_arg,
            c_arg,
            ..
        } = expansion;
        let (b_id, c_id) = (nodes.len(), nodes.len() + 1);
        for (child_id, outputs, arg) in [(b_id, b_outputs, b_arg), (c_id, c_outputs, c_arg)] {
            let kind = match arg {
                Some(k) => NodeKind::Argument(k),
                None => {
                    unprocessed.push(child_id);
                    NodeKind::Unprocessed
                }
            };
            nodes.push(Node {
                id: child_id,
                kind,
                outputs,
                parent: Some(id),
                children: None,
            });
        }
        nodes[id].kind = NodeKind::Operator(op);
        nodes[id].children = Some((b_id, c_id));
    }

    Ok(SolutionTree {
        nodes,
        root: 0,
        arity: problem.arity(),
    })
}
