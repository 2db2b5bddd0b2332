//! Graphviz rendering of transfer trees.
//!
//! Leaves carry `e`, internal edges carry `k` (dashed when the homotopy kills
//! the value passing through), and the root vertex is labelled with `p`.

use std::fmt::Write as _;

use super::trees::TransferTree;
use super::TransferContext;
use crate::linalg::SparseVec;

/// Per-vertex data for a diagram: the inputs on the leaves and, for every
/// non-root internal vertex in preorder, the value after `k`.
#[derive(Clone, Debug, Default)]
pub struct Decorations {
    pub leaf_labels: Vec<String>,
    pub homotopy_values: Vec<SparseVec>,
}

/// Evaluates `tree` on basis inputs of W to decorate its edges.
pub fn decorate(ctx: &TransferContext, tree: &TransferTree, inputs: &[usize]) -> Decorations {
    let vecs: Vec<SparseVec> = inputs.iter().map(|&i| SparseVec::basis(i)).collect();
    Decorations {
        leaf_labels: inputs.iter().map(|&i| ctx.basis_label(i)).collect(),
        homotopy_values: ctx.tree_eval_edges(tree, &vecs).1,
    }
}

pub fn emit_tree_diagram(tree: &TransferTree, decorations: Option<&Decorations>) -> String {
    let mut out = String::from("digraph transfer_tree {\n  rankdir=BT;\n  node [shape=circle, label=\"\"];\n");
    let mut next_id = 0usize;
    let mut internal = 0usize;
    walk(tree, true, decorations, &mut out, &mut next_id, &mut internal);
    out.push_str("}\n");
    out
}

/// Returns the vertex id and whether the value on its outgoing edge vanishes.
fn walk(
    tree: &TransferTree,
    root: bool,
    dec: Option<&Decorations>,
    out: &mut String,
    next_id: &mut usize,
    internal: &mut usize,
) -> (usize, bool) {
    let id = *next_id;
    *next_id += 1;
    match tree {
        TransferTree::Leaf(i) => {
            let label = dec.and_then(|d| d.leaf_labels.get(*i).cloned()).unwrap_or_else(|| format!("a{}", i + 1));
            let _ = writeln!(out, "  n{id} [shape=plaintext, label=\"{label}\"];");
            (id, false)
        }
        TransferTree::Node(l, r) => {
            let mut dead = false;
            if root {
                let _ = writeln!(out, "  n{id} [shape=box, label=\"p\"];");
            } else {
                let _ = writeln!(out, "  n{id} [label=\"·\"];");
                dead = dec.and_then(|d| d.homotopy_values.get(*internal)).is_some_and(|v| v.is_zero());
                *internal += 1;
            }
            for child in [l, r] {
                let (child_id, child_dead) = walk(child, false, dec, out, next_id, internal);
                let (label, style) = match **child {
                    TransferTree::Leaf(_) => ("e", "solid"),
                    _ if child_dead => ("k", "dashed"),
                    _ => ("k", "solid"),
                };
                let _ = writeln!(out, "  n{child_id} -> n{id} [label=\"{label}\", style={style}];");
            }
            (id, dead)
        }
    }
}
