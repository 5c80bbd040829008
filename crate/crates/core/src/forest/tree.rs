use crate::data::DataMatrix;

use super::Partition;

/// One node of a binary partition tree.
#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    /// Rows with `x[feature] <= threshold` go to `left`, the rest to `right`.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        leaf_id: usize,
    },
}

/// A grown tree stored as a node arena with the root at index 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    nodes: Vec<TreeNode>,
    num_leaves: usize,
}

impl Tree {
    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn num_leaves(&self) -> usize {
        self.num_leaves
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[TreeNode], at: usize) -> usize {
            match nodes[at] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + go(nodes, left).max(go(nodes, right)),
            }
        }
        go(&self.nodes, 0)
    }

    /// Leaf id reached by routing `row` from the root.
    pub fn leaf_of(&self, row: &[f64]) -> usize {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                TreeNode::Leaf { leaf_id } => return leaf_id,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if row[feature] <= threshold {
                        left
                    } else {
                        right
                    }
                }
            }
        }
    }

    /// Route every row of `x` and return the induced partition. Leaves that
    /// receive no rows are dropped and the remaining ids compacted, so the
    /// result always satisfies the [`Partition`] invariants.
    pub fn partition(&self, x: &DataMatrix) -> Partition {
        let leaves: Vec<usize> = x.rows().map(|row| self.leaf_of(row)).collect();
        Partition::relabel(&leaves)
    }
}

/// Incremental arena construction used by the growers.
#[derive(Debug, Default)]
pub(crate) struct TreeBuilder {
    nodes: Vec<TreeNode>,
    num_leaves: usize,
}

impl TreeBuilder {
    /// Reserve a slot for a node whose shape is decided later.
    pub fn reserve(&mut self) -> usize {
        self.nodes.push(TreeNode::Leaf {
            leaf_id: usize::MAX,
        });
        self.nodes.len() - 1
    }

    pub fn set_leaf(&mut self, at: usize) {
        self.nodes[at] = TreeNode::Leaf {
            leaf_id: self.num_leaves,
        };
        self.num_leaves += 1;
    }

    /// Turn `at` into a split and return the (left, right) child slots.
    pub fn set_split(&mut self, at: usize, feature: usize, threshold: f64) -> (usize, usize) {
        let left = self.reserve();
        let right = self.reserve();
        self.nodes[at] = TreeNode::Split {
            feature,
            threshold,
            left,
            right,
        };
        (left, right)
    }

    pub fn finish(self) -> Tree {
        debug_assert!(self
            .nodes
            .iter()
            .all(|n| !matches!(n, TreeNode::Leaf { leaf_id } if *leaf_id == usize::MAX)));
        Tree {
            nodes: self.nodes,
            num_leaves: self.num_leaves,
        }
    }
}

/// Split threshold strictly between two distinct sorted values `lo < hi`,
/// such that `lo <= t < hi`.
pub(crate) fn midpoint(lo: f64, hi: f64) -> f64 {
    let mid = lo + (hi - lo) / 2.0;
    if mid < hi {
        mid
    } else {
        lo
    }
}
