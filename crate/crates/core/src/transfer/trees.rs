//! Full binary trees with ordered leaves.

use std::fmt;

use crate::error::{Error, Result};

pub const DEFAULT_ARITY_CAP: usize = 8;

/// Leaves are numbered left to right from 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TransferTree {
    Leaf(usize),
    Node(Box<TransferTree>, Box<TransferTree>),
}

impl TransferTree {
    pub fn leaves(&self) -> usize {
        match self {
            TransferTree::Leaf(_) => 1,
            TransferTree::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    pub fn internal_vertices(&self) -> usize {
        match self {
            TransferTree::Leaf(_) => 0,
            TransferTree::Node(l, r) => 1 + l.internal_vertices() + r.internal_vertices(),
        }
    }

    /// Nested-pair serialization such as `((0,1),2)`.
    pub fn serialize(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for TransferTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransferTree::Leaf(i) => write!(f, "{i}"),
            TransferTree::Node(l, r) => write!(f, "({l},{r})"),
        }
    }
}

fn build(lo: usize, hi: usize) -> Vec<TransferTree> {
    if hi - lo == 1 {
        return vec![TransferTree::Leaf(lo)];
    }
    let mut out = Vec::new();
    for split in (lo + 1)..hi {
        let left = build(lo, split);
        let right = build(split, hi);
        for l in &left {
            for r in &right {
                out.push(TransferTree::Node(Box::new(l.clone()), Box::new(r.clone())));
            }
        }
    }
    out
}

/// All trees with `n` leaves, ordered by the size of the left subtree.
pub fn enumerate_trees(n: usize) -> Result<Vec<TransferTree>> {
    enumerate_trees_capped(n, DEFAULT_ARITY_CAP)
}

pub fn enumerate_trees_capped(n: usize, cap: usize) -> Result<Vec<TransferTree>> {
    if n == 0 || n > cap {
        return Err(Error::ArityOverCap { arity: n, cap });
    }
    Ok(build(0, n))
}

/// Catalan number C_n.
pub fn catalan(n: usize) -> u64 {
    let mut c: u64 = 1;
    for k in 0..n as u64 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn count(n: usize) -> u64 {
        if n == 1 {
            return 1;
        }
        (1..n).map(|k| count(k) * count(n - k)).sum()
    }

    #[test]
    fn counts_and_shapes() {
        assert_eq!(enumerate_trees(2).unwrap().len(), 1);
        assert_eq!(enumerate_trees(3).unwrap().len(), 2);
        for n in 1..=8 {
            let trees = enumerate_trees(n).unwrap();
            assert_eq!(trees.len() as u64, count(n));
            assert_eq!(trees.len() as u64, catalan(n - 1));
            let distinct: HashSet<String> = trees.iter().map(|t| t.serialize()).collect();
            assert_eq!(distinct.len(), trees.len());
            assert!(trees.iter().all(|t| t.leaves() == n && t.internal_vertices() == n - 1));
        }
        assert_eq!(enumerate_trees(3).unwrap()[0].serialize(), "(0,(1,2))");
        assert!(matches!(enumerate_trees(9), Err(Error::ArityOverCap { arity: 9, cap: 8 })));
        assert!(enumerate_trees(0).is_err());
    }
}
