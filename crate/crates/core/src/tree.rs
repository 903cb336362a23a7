//! Balanced search tree over open drones.
//!
//! Nodes are ordered by `(key, index)` where `key` is the drone's remaining
//! battery capacity and `index` its one-based drone number. The tree is an AVL
//! tree stored in an arena. Each node carries a payload: the latest rendezvous
//! time of the drone's assignment for the general greedy, or nothing for the
//! per-colour-class packer.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::model::{Delivery, Energy, Time, TreeOps};

/// A tree node as seen from outside.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DroneNode<D> {
    pub index: usize,
    pub key: Energy,
    pub data: D,
}

impl<D> DroneNode<D> {
    #[inline]
    fn order(&self) -> (Energy, usize) {
        (self.key, self.index)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("drone {0} is already in the tree")]
    DuplicateIndex(usize),
    #[error("drone {0} is not in the tree")]
    MissingIndex(usize),
}

#[derive(Debug, Clone)]
struct Slot<D> {
    node: DroneNode<D>,
    left: Option<usize>,
    right: Option<usize>,
    height: u32,
}

/// AVL tree keyed by `(remaining capacity, drone index)`.
#[derive(Debug, Clone)]
pub struct OrderedTree<D> {
    slots: Vec<Slot<D>>,
    free: Vec<usize>,
    root: Option<usize>,
    by_index: HashMap<usize, usize>,
    ops: TreeOps,
}

/// Tree used by the general greedy; payload is the max rendezvous time.
pub type DroneTree = OrderedTree<Time>;

/// Tree used inside one colour class; no payload.
pub type ClassTree = OrderedTree<()>;

/// Constant `c` in the audited bound `height <= c * log2(size + 1)`. AVL trees
/// never exceed roughly `1.4405 * log2(size + 2)`.
pub const HEIGHT_FACTOR: f64 = 1.45;

impl<D> Default for OrderedTree<D> {
    fn default() -> Self {
        OrderedTree {
            slots: Vec::new(),
            free: Vec::new(),
            root: None,
            by_index: HashMap::new(),
            ops: TreeOps::default(),
        }
    }
}

impl<D: Copy> OrderedTree<D> {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.by_index.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.by_index.is_empty()
    }

    /// Number of levels; an empty tree has height 0.
    #[inline]
    pub fn height(&self) -> u32 {
        self.h(self.root)
    }

    #[inline]
    pub fn ops(&self) -> TreeOps {
        self.ops
    }

    pub fn root(&self) -> Option<&DroneNode<D>> {
        self.root.map(|s| &self.slots[s].node)
    }

    pub fn get(&self, index: usize) -> Option<&DroneNode<D>> {
        self.by_index.get(&index).map(|&s| &self.slots[s].node)
    }

    pub fn insert(&mut self, index: usize, key: Energy, data: D) -> Result<(), TreeError> {
        if self.by_index.contains_key(&index) {
            return Err(TreeError::DuplicateIndex(index));
        }
        self.ops.inserts += 1;
        self.insert_node(DroneNode { index, key, data });
        Ok(())
    }

    /// Replaces a node's key and payload by deleting and re-inserting it.
    pub fn update(&mut self, index: usize, new_key: Energy, new_data: D) -> Result<(), TreeError> {
        let slot = *self
            .by_index
            .get(&index)
            .ok_or(TreeError::MissingIndex(index))?;
        let old = self.slots[slot].node;
        debug_assert!(new_key <= old.key, "remaining capacity only shrinks");
        self.ops.updates += 1;
        self.root = self.remove_at(self.root, old.order());
        self.by_index.remove(&index);
        self.insert_node(DroneNode {
            index,
            key: new_key,
            data: new_data,
        });
        Ok(())
    }

    /// The node with the largest `(key, index)`.
    pub fn max_node(&self) -> Option<&DroneNode<D>> {
        let mut cur = self.root?;
        while let Some(r) = self.slots[cur].right {
            cur = r;
        }
        Some(&self.slots[cur].node)
    }

    /// Nodes in decreasing `(key, index)` order.
    pub fn iter_desc(&self) -> RevInOrder<'_, D> {
        RevInOrder::new(self)
    }

    fn insert_node(&mut self, node: DroneNode<D>) {
        let slot = Slot {
            node,
            left: None,
            right: None,
            height: 1,
        };
        let id = match self.free.pop() {
            Some(id) => {
                self.slots[id] = slot;
                id
            }
            None => {
                self.slots.push(slot);
                self.slots.len() - 1
            }
        };
        self.by_index.insert(node.index, id);
        self.root = Some(self.insert_at(self.root, id));
    }

    #[inline]
    fn h(&self, at: Option<usize>) -> u32 {
        at.map_or(0, |s| self.slots[s].height)
    }

    fn fix_height(&mut self, s: usize) {
        let (l, r) = (self.slots[s].left, self.slots[s].right);
        self.slots[s].height = 1 + self.h(l).max(self.h(r));
    }

    fn balance_factor(&self, s: usize) -> i64 {
        self.h(self.slots[s].left) as i64 - self.h(self.slots[s].right) as i64
    }

    fn rotate_right(&mut self, s: usize) -> usize {
        let l = self.slots[s].left.expect("rotate_right needs a left child");
        self.slots[s].left = self.slots[l].right;
        self.slots[l].right = Some(s);
        self.fix_height(s);
        self.fix_height(l);
        l
    }

    fn rotate_left(&mut self, s: usize) -> usize {
        let r = self.slots[s].right.expect("rotate_left needs a right child");
        self.slots[s].right = self.slots[r].left;
        self.slots[r].left = Some(s);
        self.fix_height(s);
        self.fix_height(r);
        r
    }

    fn rebalance(&mut self, s: usize) -> usize {
        self.fix_height(s);
        let bf = self.balance_factor(s);
        if bf > 1 {
            let l = self.slots[s].left.unwrap();
            if self.balance_factor(l) < 0 {
                self.slots[s].left = Some(self.rotate_left(l));
            }
            self.rotate_right(s)
        } else if bf < -1 {
            let r = self.slots[s].right.unwrap();
            if self.balance_factor(r) > 0 {
                self.slots[s].right = Some(self.rotate_right(r));
            }
            self.rotate_left(s)
        } else {
            s
        }
    }

    fn insert_at(&mut self, at: Option<usize>, new: usize) -> usize {
        let Some(s) = at else {
            return new;
        };
        if self.slots[new].node.order() < self.slots[s].node.order() {
            let l = self.insert_at(self.slots[s].left, new);
            self.slots[s].left = Some(l);
        } else {
            let r = self.insert_at(self.slots[s].right, new);
            self.slots[s].right = Some(r);
        }
        self.rebalance(s)
    }

    /// Removes the node with the given order key from the subtree at `at`,
    /// returning the new subtree root. The removed slot goes on the free list.
    fn remove_at(&mut self, at: Option<usize>, target: (Energy, usize)) -> Option<usize> {
        let s = at?;
        let here = self.slots[s].node.order();
        if target < here {
            self.slots[s].left = self.remove_at(self.slots[s].left, target);
        } else if target > here {
            self.slots[s].right = self.remove_at(self.slots[s].right, target);
        } else {
            let (l, r) = (self.slots[s].left, self.slots[s].right);
            self.free.push(s);
            match (l, r) {
                (None, None) => return None,
                (Some(c), None) | (None, Some(c)) => return Some(c),
                (Some(l), Some(r)) => {
                    let (rest, succ) = self.detach_min(r);
                    self.slots[succ].left = Some(l);
                    self.slots[succ].right = rest;
                    return Some(self.rebalance(succ));
                }
            }
        }
        Some(self.rebalance(s))
    }

    /// Detaches the minimum of the subtree at `s`. Returns `(new root, min slot)`.
    fn detach_min(&mut self, s: usize) -> (Option<usize>, usize) {
        match self.slots[s].left {
            None => (self.slots[s].right, s),
            Some(l) => {
                let (rest, min) = self.detach_min(l);
                self.slots[s].left = rest;
                (Some(self.rebalance(s)), min)
            }
        }
    }

    /// Structural self-check: search order, stored heights, AVL balance, the
    /// logarithmic height bound, and the index map.
    pub fn audit(&self) -> Result<(), String> {
        let mut count = 0usize;
        self.audit_at(self.root, None, None, &mut count)?;
        if count != self.by_index.len() {
            return Err(format!(
                "index map has {} entries but tree has {count} nodes",
                self.by_index.len()
            ));
        }
        for (&index, &slot) in &self.by_index {
            if self.slots[slot].node.index != index {
                return Err(format!("index map entry {index} points at the wrong node"));
            }
        }
        let bound = HEIGHT_FACTOR * ((count + 1) as f64).log2();
        if self.height() as f64 > bound + 1e-9 {
            return Err(format!(
                "height {} exceeds {HEIGHT_FACTOR}*log2({}) = {bound:.3}",
                self.height(),
                count + 1
            ));
        }
        Ok(())
    }

    fn audit_at(
        &self,
        at: Option<usize>,
        lo: Option<(Energy, usize)>,
        hi: Option<(Energy, usize)>,
        count: &mut usize,
    ) -> Result<u32, String> {
        let Some(s) = at else {
            return Ok(0);
        };
        *count += 1;
        let slot = &self.slots[s];
        let k = slot.node.order();
        if lo.is_some_and(|lo| k <= lo) || hi.is_some_and(|hi| k >= hi) {
            return Err(format!("search order violated at drone {}", slot.node.index));
        }
        let lh = self.audit_at(slot.left, lo, Some(k), count)?;
        let rh = self.audit_at(slot.right, Some(k), hi, count)?;
        if lh.abs_diff(rh) > 1 {
            return Err(format!("unbalanced at drone {}", slot.node.index));
        }
        let h = 1 + lh.max(rh);
        if h != slot.height {
            return Err(format!("stale height at drone {}", slot.node.index));
        }
        Ok(h)
    }
}

impl<D: Copy + fmt::Debug> OrderedTree<D> {
    /// One `(index, key, data)` line per node, in decreasing key order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for n in self.iter_desc() {
            let _ = writeln!(out, "({}, {}, {:?})", n.index, n.key, n.data);
        }
        out
    }
}

/// Reverse in-order walk driven by an explicit stack.
pub struct RevInOrder<'a, D> {
    tree: &'a OrderedTree<D>,
    stack: Vec<usize>,
    descents: u64,
}

impl<'a, D: Copy> RevInOrder<'a, D> {
    fn new(tree: &'a OrderedTree<D>) -> Self {
        let mut it = RevInOrder {
            tree,
            stack: Vec::new(),
            descents: 0,
        };
        it.push_right_spine(tree.root);
        it
    }

    fn push_right_spine(&mut self, mut at: Option<usize>) {
        while let Some(s) = at {
            self.stack.push(s);
            self.descents += 1;
            at = self.tree.slots[s].right;
        }
    }

    /// Nodes pushed so far.
    pub fn descents(&self) -> u64 {
        self.descents
    }
}

impl<'a, D: Copy> Iterator for RevInOrder<'a, D> {
    type Item = &'a DroneNode<D>;

    fn next(&mut self) -> Option<Self::Item> {
        let s = self.stack.pop()?;
        self.push_right_spine(self.tree.slots[s].left);
        Some(&self.tree.slots[s].node)
    }
}

/// Remaining number of node checks allowed for one delivery: its conflict
/// count plus one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeBudget {
    remaining: usize,
}

impl ProbeBudget {
    pub fn new(conflicts: usize) -> Self {
        ProbeBudget {
            remaining: conflicts + 1,
        }
    }

    #[inline]
    pub fn remaining(&self) -> usize {
        self.remaining
    }

    #[inline]
    pub fn is_exhausted(&self) -> bool {
        self.remaining == 0
    }
}

/// Outcome of checking one node against one delivery.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Probe {
    Assign,
    StopSearch,
    Continue,
}

/// Decides whether `delivery` can join the drone at `node`.
///
/// Deliveries arrive in launch order, so the drone is compatible iff every
/// window it already flies ends strictly before this launch, i.e.
/// `node.data < launch`.
pub fn check(node: &DroneNode<Time>, delivery: &Delivery, budget: &mut ProbeBudget) -> Probe {
    if node.key >= delivery.cost && node.data < delivery.launch {
        Probe::Assign
    } else if node.key < delivery.cost {
        budget.remaining = 0;
        Probe::StopSearch
    } else {
        budget.remaining = budget.remaining.saturating_sub(1);
        Probe::Continue
    }
}

impl DroneTree {
    /// Finds the drone with the largest `(key, index)` that can take
    /// `delivery`, walking nodes in decreasing order and checking each.
    ///
    /// The walk ends at the first fitting node, at the first node whose
    /// capacity is below the cost, or when a failed check drains the budget.
    pub fn find_feasible(
        &mut self,
        delivery: &Delivery,
        budget: &mut ProbeBudget,
        check_calls: &mut u64,
    ) -> Option<DroneNode<Time>> {
        self.ops.finds += 1;
        let mut walk = RevInOrder::new(self);
        let mut found = None;
        for node in walk.by_ref() {
            *check_calls += 1;
            match check(node, delivery, budget) {
                Probe::Assign => {
                    found = Some(*node);
                    break;
                }
                Probe::StopSearch => break,
                Probe::Continue if budget.is_exhausted() => break,
                Probe::Continue => {}
            }
        }
        let descents = walk.descents();
        self.ops.descents += descents;
        found
    }
}

impl ClassTree {
    /// The max-key node if it can take `cost`; no other node could.
    pub fn find_max_key(&mut self, cost: Energy) -> Option<DroneNode<()>> {
        self.ops.finds += 1;
        self.max_node().filter(|n| n.key >= cost).copied()
    }
}
