//! The quadruple neighbor list.
//!
//! Items of a sequence are partitioned into horizontal lists by rising length:
//! list `t` holds every item whose longest non-decreasing subsequence ending at
//! it has length `t`. Inside a list, positions increase and values strictly
//! decrease from head to tail. Every node carries four links:
//!
//! ```text
//!   level 1:  3@1 ─────────────── 2@4
//!              ▲ up                ▲
//!   level 2:  9@2 ── 6@3 ──────── 5@6
//!                     ▲ up         ▲
//!   level 3:          8@5 ──────── 7@7
//! ```
//!
//! `left`/`right` link neighbors in the same list; `up` points at the rightmost
//! earlier item one level above and `down` at the rightmost earlier item one
//! level below. The number of lists equals the LIS length, and the tails read
//! top to bottom form a non-decreasing sequence, so an insertion only needs a
//! binary search over the tails.
//!
//! Nodes are stored in arrival order. Deletions only ever remove the oldest
//! node, so the arena is a deque addressed by insertion ordinal.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// Stable handle to a node. Handles are insertion ordinals and are never reused.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u64);

/// One item of the housed sequence together with its four neighbor links.
#[derive(Clone, Debug)]
pub struct Node {
    value: f64,
    position: u64,
    level: usize,
    pub(crate) left: Option<NodeId>,
    pub(crate) right: Option<NodeId>,
    pub(crate) up: Option<NodeId>,
    pub(crate) down: Option<NodeId>,
}

impl Node {
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn position(&self) -> u64 {
        self.position
    }

    /// Index of the horizontal list holding this node (1-based). Equals the
    /// node's rising length.
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn left(&self) -> Option<NodeId> {
        self.left
    }

    pub fn right(&self) -> Option<NodeId> {
        self.right
    }

    pub fn up(&self) -> Option<NodeId> {
        self.up
    }

    pub fn down(&self) -> Option<NodeId> {
        self.down
    }

    pub(crate) fn set_level(&mut self, level: usize) {
        self.level = level;
    }
}

/// Head and tail of one non-empty horizontal list.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct HorizontalList {
    pub(crate) head: NodeId,
    pub(crate) tail: NodeId,
}

impl HorizontalList {
    pub fn head(&self) -> NodeId {
        self.head
    }

    pub fn tail(&self) -> NodeId {
        self.tail
    }
}

/// Instrumentation counters for the two mutating operations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OpCounters {
    pub inserts: u64,
    /// Inserts that ran the tail search against at least one list.
    pub probed_inserts: u64,
    pub total_probes: u64,
    pub max_probes: u64,
    pub last_probes: u64,
    pub deletes: u64,
    pub total_touches: u64,
    pub max_touches: u64,
    pub last_touches: u64,
}

impl OpCounters {
    pub(crate) fn record_delete(&mut self, touches: u64) {
        self.deletes += 1;
        self.total_touches += touches;
        self.max_touches = self.max_touches.max(touches);
        self.last_touches = touches;
    }
}

/// Quadruple neighbor list over a window of items.
#[derive(Clone, Debug, Default)]
pub struct QnList {
    nodes: VecDeque<Node>,
    first_id: u64,
    lists: Vec<HorizontalList>,
    last_position: Option<u64>,
    generation: u64,
    counters: OpCounters,
}

impl QnList {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds the structure for `values`, assigning positions `1..=n`.
    pub fn build<I>(values: I) -> Result<Self>
    where
        I: IntoIterator<Item = f64>,
    {
        Self::from_items(values.into_iter().zip(1u64..))
    }

    /// Builds the structure from `(value, position)` pairs in arrival order.
    pub fn from_items<I>(items: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, u64)>,
    {
        let mut list = Self::new();
        for (value, position) in items {
            list.insert(value, position)?;
        }
        Ok(list)
    }

    /// Appends an item and returns the level it landed on.
    ///
    /// The item goes to the first list whose tail is strictly greater than
    /// `value`; ties fall through to deeper lists. When no such list exists a
    /// new bottom list is opened.
    pub fn insert(&mut self, value: f64, position: u64) -> Result<usize> {
        if !value.is_finite() {
            return Err(Error::NonFiniteValue(value));
        }
        if let Some(last) = self.last_position {
            if position <= last {
                return Err(Error::NonMonotonePosition { position, last });
            }
        }

        let m = self.lists.len();
        let (mut lo, mut hi) = (0usize, m);
        let mut probes = 0u64;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            probes += 1;
            if self.node(self.lists[mid].tail).value > value {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let k = lo;

        let id = NodeId(self.first_id + self.nodes.len() as u64);
        let up = k.checked_sub(1).map(|i| self.lists[i].tail);
        let down = self.lists.get(k + 1).map(|l| l.tail);
        let left = self.lists.get(k).map(|l| l.tail);
        self.nodes.push_back(Node {
            value,
            position,
            level: k + 1,
            left,
            right: None,
            up,
            down,
        });
        match left {
            Some(prev) => {
                self.node_mut(prev).right = Some(id);
                self.lists[k].tail = id;
            }
            None => self.lists.push(HorizontalList { head: id, tail: id }),
        }

        self.last_position = Some(position);
        self.generation += 1;
        let c = &mut self.counters;
        c.inserts += 1;
        if m > 0 {
            c.probed_inserts += 1;
        }
        c.total_probes += probes;
        c.max_probes = c.max_probes.max(probes);
        c.last_probes = probes;
        Ok(k + 1)
    }

    /// Number of live nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of horizontal lists, which is also the LIS length.
    pub fn list_count(&self) -> usize {
        self.lists.len()
    }

    pub fn lists(&self) -> &[HorizontalList] {
        &self.lists
    }

    /// The list at `level` (1-based).
    pub fn list(&self, level: usize) -> Option<HorizontalList> {
        level
            .checked_sub(1)
            .and_then(|i| self.lists.get(i))
            .copied()
    }

    /// Bumped by every mutation.
    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn counters(&self) -> &OpCounters {
        &self.counters
    }

    pub fn reset_counters(&mut self) {
        self.counters = OpCounters::default();
    }

    /// Panics if `id` does not refer to a live node.
    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[self.slot(id)]
    }

    pub fn get(&self, id: NodeId) -> Option<&Node> {
        id.0.checked_sub(self.first_id)
            .and_then(|i| self.nodes.get(i as usize))
    }

    pub fn value(&self, id: NodeId) -> f64 {
        self.node(id).value
    }

    pub fn position(&self, id: NodeId) -> u64 {
        self.node(id).position
    }

    /// Cached level of `id`, equal to its rising length.
    pub fn rising_length(&self, id: NodeId) -> usize {
        self.node(id).level
    }

    /// Dense index of `id` in `0..len()`, in arrival order. Side tables keyed
    /// by node use this.
    pub fn slot(&self, id: NodeId) -> usize {
        let slot =
            id.0.checked_sub(self.first_id)
                .expect("node handle refers to a deleted node") as usize;
        assert!(slot < self.nodes.len(), "node handle out of range");
        slot
    }

    /// Node handles in arrival order.
    pub fn ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len() as u64).map(move |i| NodeId(self.first_id + i))
    }

    pub fn oldest(&self) -> Option<NodeId> {
        (!self.nodes.is_empty()).then_some(NodeId(self.first_id))
    }

    /// Live node at `position`, if any.
    pub fn find_position(&self, position: u64) -> Option<NodeId> {
        self.nodes
            .binary_search_by_key(&position, |n| n.position)
            .ok()
            .map(|i| NodeId(self.first_id + i as u64))
    }

    /// `(value, position)` pairs in arrival order.
    pub fn items(&self) -> impl Iterator<Item = (f64, u64)> + '_ {
        self.nodes.iter().map(|n| (n.value, n.position))
    }

    /// Walks the list at `level` from head to tail.
    pub fn iter_list(&self, level: usize) -> ListIter<'_> {
        ListIter {
            list: self,
            next: self.list(level).map(|l| l.head),
        }
    }

    /// `a` precedes `b` and `a`'s value does not exceed `b`'s.
    pub fn compatible(&self, a: NodeId, b: NodeId) -> bool {
        let (a, b) = (self.node(a), self.node(b));
        a.position < b.position && a.value <= b.value
    }

    /// Predecessors of `id`, scanned from its up neighbor leftward.
    ///
    /// The predecessors of a node at level `t > 1` form a contiguous block of
    /// list `t - 1` ending at the up neighbor, so the scan stops at the first
    /// incompatible item.
    pub fn predecessors(&self, id: NodeId) -> Predecessors<'_> {
        Predecessors {
            list: self,
            target: id,
            next: self.node(id).up,
        }
    }

    /// Number of stored links (at most four per node).
    pub fn link_count(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| {
                [n.left, n.right, n.up, n.down]
                    .iter()
                    .filter(|l| l.is_some())
                    .count()
            })
            .sum()
    }

    /// Plain-data copy of the structure keyed by position, for comparing two
    /// structures node for node.
    pub fn snapshot(&self) -> Snapshot {
        let pos = |l: Option<NodeId>| l.map(|id| self.position(id));
        let levels = (1..=self.list_count())
            .map(|t| {
                self.iter_list(t)
                    .map(|id| {
                        let n = self.node(id);
                        NodeSnapshot {
                            position: n.position,
                            value: n.value,
                            level: n.level,
                            left: pos(n.left),
                            right: pos(n.right),
                            up: pos(n.up),
                            down: pos(n.down),
                        }
                    })
                    .collect()
            })
            .collect();
        Snapshot { levels }
    }

    /// Verifies the structural invariants and returns the first violation.
    pub fn check_invariants(&self) -> std::result::Result<(), InvariantViolation> {
        let fail = |kind, detail: String| Err(InvariantViolation { kind, detail });
        let mut seen = vec![false; self.nodes.len()];
        let mut visited = 0usize;

        for (idx, list) in self.lists.iter().enumerate() {
            let level = idx + 1;
            let mut prev: Option<NodeId> = None;
            let mut cur = Some(list.head);
            while let Some(id) = cur {
                let Some(n) = self.get(id) else {
                    return fail(
                        ViolationKind::Membership,
                        format!("list {level} links to a node outside the structure"),
                    );
                };
                let slot = self.slot(id);
                if seen[slot] {
                    return fail(
                        ViolationKind::Membership,
                        format!("node @{} reached twice while walking lists", n.position),
                    );
                }
                seen[slot] = true;
                visited += 1;
                if n.level != level {
                    return fail(
                        ViolationKind::LevelCache,
                        format!(
                            "node @{} caches level {} but sits in list {level}",
                            n.position, n.level
                        ),
                    );
                }
                if n.left != prev {
                    return fail(
                        ViolationKind::LinkSymmetry,
                        format!(
                            "left link of @{} does not point at its list predecessor",
                            n.position
                        ),
                    );
                }
                if let Some(p) = prev {
                    let p = self.node(p);
                    if !(p.value > n.value && p.position < n.position) {
                        return fail(
                            ViolationKind::ListOrder,
                            format!(
                                "list {level}: @{} ({}) followed by @{} ({}) breaks decreasing-value order",
                                p.position, p.value, n.position, n.value
                            ),
                        );
                    }
                }
                prev = Some(id);
                cur = n.right;
            }
            if prev != Some(list.tail) {
                return fail(
                    ViolationKind::LinkSymmetry,
                    format!("list {level}: walking right links does not end at the recorded tail"),
                );
            }
        }
        if visited != self.nodes.len() {
            return fail(
                ViolationKind::Membership,
                format!(
                    "{} nodes stored but {visited} reachable from list heads",
                    self.nodes.len()
                ),
            );
        }

        for pair in self.lists.windows(2) {
            let (upper, lower) = (self.node(pair[0].tail), self.node(pair[1].tail));
            if upper.value > lower.value {
                return fail(
                    ViolationKind::TailOrder,
                    format!(
                        "tail @{} ({}) exceeds the tail below it @{} ({})",
                        upper.position, upper.value, lower.position, lower.value
                    ),
                );
            }
        }

        for level in 1..=self.list_count() {
            let above = (level > 1).then(|| self.rightmost_before(level - 1, level));
            let below =
                (level < self.list_count()).then(|| self.rightmost_before(level + 1, level));
            for (i, id) in self.iter_list(level).enumerate() {
                let n = self.node(id);
                let expected_up = above.as_ref().and_then(|v| v[i]);
                if n.up != expected_up {
                    return fail(
                        ViolationKind::UpNeighbor,
                        format!(
                            "up link of @{} is not the rightmost earlier item one level above",
                            n.position
                        ),
                    );
                }
                if level > 1 {
                    match expected_up {
                        Some(u) if self.value(u) <= n.value => {}
                        _ => {
                            return fail(
                                ViolationKind::UpNeighbor,
                                format!(
                                    "@{} at level {level} has no compatible up neighbor",
                                    n.position
                                ),
                            )
                        }
                    }
                }
                let expected_down = below.as_ref().and_then(|v| v[i]);
                if n.down != expected_down {
                    return fail(
                        ViolationKind::DownNeighbor,
                        format!(
                            "down link of @{} is not the rightmost earlier item one level below",
                            n.position
                        ),
                    );
                }
                if let Some(d) = n.down {
                    if self.value(d) <= n.value {
                        return fail(
                            ViolationKind::DownValue,
                            format!("down neighbor of @{} is not larger than it", n.position),
                        );
                    }
                }
            }
        }
        Ok(())
    }

    /// For every node of list `of`, the rightmost node of list `from` with an
    /// earlier position. Linear two-pointer merge.
    fn rightmost_before(&self, from: usize, of: usize) -> Vec<Option<NodeId>> {
        let mut cursor: Option<NodeId> = None;
        let mut next = self.list(from).map(|l| l.head);
        self.iter_list(of)
            .map(|id| {
                let p = self.position(id);
                while let Some(c) = next {
                    if self.position(c) < p {
                        cursor = Some(c);
                        next = self.node(c).right;
                    } else {
                        break;
                    }
                }
                cursor
            })
            .collect()
    }

    pub(crate) fn node_mut(&mut self, id: NodeId) -> &mut Node {
        let slot = self.slot(id);
        &mut self.nodes[slot]
    }

    pub(crate) fn set_lists(&mut self, lists: Vec<HorizontalList>) {
        self.lists = lists;
    }

    /// Drops the oldest node from the arena. Links are the caller's concern.
    pub(crate) fn pop_oldest(&mut self) {
        if self.nodes.pop_front().is_some() {
            self.first_id += 1;
        }
    }

    pub(crate) fn bump_generation(&mut self) {
        self.generation += 1;
    }

    pub(crate) fn counters_mut(&mut self) -> &mut OpCounters {
        &mut self.counters
    }
}

/// Iterator over one horizontal list, head to tail.
pub struct ListIter<'a> {
    list: &'a QnList,
    next: Option<NodeId>,
}

impl Iterator for ListIter<'_> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        let id = self.next?;
        self.next = self.list.node(id).right;
        Some(id)
    }
}

/// Iterator over the predecessor block of a node, right to left.
pub struct Predecessors<'a> {
    list: &'a QnList,
    target: NodeId,
    next: Option<NodeId>,
}

impl Iterator for Predecessors<'_> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        let id = self.next?;
        if !self.list.compatible(id, self.target) {
            self.next = None;
            return None;
        }
        self.next = self.list.node(id).left;
        Some(id)
    }
}

/// Which structural property a violation breaks.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// left/right links are not mutual inverses or do not end at the tail.
    LinkSymmetry,
    /// A list is not strictly decreasing in value with increasing positions.
    ListOrder,
    /// List tails are not non-decreasing from the top list down.
    TailOrder,
    /// A node's cached level disagrees with the list holding it.
    LevelCache,
    /// An up link is not the rightmost earlier node one level above.
    UpNeighbor,
    /// A down link is not the rightmost earlier node one level below.
    DownNeighbor,
    /// A down neighbor is not strictly larger than its node.
    DownValue,
    /// Node bookkeeping: unreachable, duplicated or foreign nodes.
    Membership,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantViolation {
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.detail)
    }
}

impl std::error::Error for InvariantViolation {}

/// Position-keyed copy of one node.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeSnapshot {
    pub position: u64,
    pub value: f64,
    pub level: usize,
    pub left: Option<u64>,
    pub right: Option<u64>,
    pub up: Option<u64>,
    pub down: Option<u64>,
}

/// Position-keyed copy of a whole structure, one vector per level.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Snapshot {
    pub levels: Vec<Vec<NodeSnapshot>>,
}

impl Snapshot {
    /// Describes the first difference from `other`, or `None` if identical.
    pub fn first_difference(&self, other: &Snapshot) -> Option<String> {
        if self.levels.len() != other.levels.len() {
            return Some(format!(
                "list count {} vs {}",
                self.levels.len(),
                other.levels.len()
            ));
        }
        for (t, (a, b)) in self.levels.iter().zip(&other.levels).enumerate() {
            if a.len() != b.len() {
                return Some(format!(
                    "list {} has {} vs {} nodes",
                    t + 1,
                    a.len(),
                    b.len()
                ));
            }
            if let Some((x, y)) = a.iter().zip(b).find(|(x, y)| x != y) {
                return Some(format!("list {}: {x:?} vs {y:?}", t + 1));
            }
        }
        None
    }

    /// Values per level, head to tail.
    pub fn values(&self) -> Vec<Vec<f64>> {
        self.levels
            .iter()
            .map(|l| l.iter().map(|n| n.value).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const RUNNING: [f64; 7] = [3.0, 9.0, 6.0, 2.0, 8.0, 5.0, 7.0];

    fn at(list: &QnList, position: u64) -> NodeId {
        list.find_position(position).unwrap()
    }

    #[test]
    fn first_insert_opens_level_one() {
        let mut list = QnList::new();
        assert_eq!(list.insert(3.0, 1).unwrap(), 1);
        assert_eq!(list.snapshot().values(), vec![vec![3.0]]);
        assert_eq!(list.counters().last_probes, 0);
    }

    #[test]
    fn larger_second_item_opens_level_two() {
        let mut list = QnList::new();
        list.insert(3.0, 1).unwrap();
        assert_eq!(list.insert(9.0, 2).unwrap(), 2);
        assert_eq!(list.node(at(&list, 2)).up(), Some(at(&list, 1)));
    }

    #[test]
    fn seventh_running_item_joins_level_three() {
        let mut list = QnList::build(RUNNING[..6].iter().copied()).unwrap();
        assert_eq!(list.insert(7.0, 7).unwrap(), 3);
        let n = list.node(at(&list, 7));
        assert_eq!(n.left(), Some(at(&list, 5)));
        assert_eq!(n.up(), Some(at(&list, 6)));
        assert_eq!(n.down(), None);
    }

    #[test]
    fn running_example_partition() {
        let list = QnList::build(RUNNING).unwrap();
        assert_eq!(
            list.snapshot().values(),
            vec![vec![3.0, 2.0], vec![9.0, 6.0, 5.0], vec![8.0, 7.0]]
        );
        list.check_invariants().unwrap();
    }

    #[test]
    fn empty_and_descending_builds() {
        let empty = QnList::build([]).unwrap();
        assert_eq!(empty.list_count(), 0);
        assert!(empty.is_empty());
        let desc = QnList::build([5.0, 4.0, 3.0]).unwrap();
        assert_eq!(desc.snapshot().values(), vec![vec![5.0, 4.0, 3.0]]);
    }

    #[test]
    fn equal_values_go_deeper() {
        let list = QnList::build([2.0, 2.0, 2.0]).unwrap();
        assert_eq!(
            list.snapshot().values(),
            vec![vec![2.0], vec![2.0], vec![2.0]]
        );
    }

    #[test]
    fn rejects_bad_input() {
        let mut list = QnList::new();
        assert_eq!(
            list.insert(f64::NAN, 1).unwrap_err().to_string(),
            "value NaN is not a finite number"
        );
        assert!(matches!(
            list.insert(f64::INFINITY, 1),
            Err(Error::NonFiniteValue(_))
        ));
        list.insert(1.0, 5).unwrap();
        assert_eq!(
            list.insert(2.0, 5),
            Err(Error::NonMonotonePosition {
                position: 5,
                last: 5
            })
        );
        assert_eq!(list.len(), 1);
    }

    #[test]
    fn predecessor_blocks() {
        let list = QnList::build(RUNNING).unwrap();
        let preds = |p| -> Vec<u64> {
            list.predecessors(at(&list, p))
                .map(|id| list.position(id))
                .collect()
        };
        assert_eq!(preds(5), vec![3]);
        assert_eq!(preds(7), vec![6, 3]);
        assert!(preds(1).is_empty());
        assert!(preds(4).is_empty());
    }

    #[test]
    fn rising_lengths() {
        let list = QnList::build(RUNNING).unwrap();
        assert_eq!(list.rising_length(at(&list, 5)), 3);
        assert_eq!(list.rising_length(at(&list, 1)), 1);
        assert_eq!(list.rising_length(at(&list, 7)), 3);
    }

    #[test]
    fn corrupted_left_links_are_reported() {
        let mut list = QnList::build(RUNNING).unwrap();
        // swap the left links of 6@3 and 5@6
        let (a, b) = (at(&list, 3), at(&list, 6));
        let la = list.node(a).left;
        let lb = list.node(b).left;
        list.node_mut(a).left = lb;
        list.node_mut(b).left = la;
        let err = list.check_invariants().unwrap_err();
        assert_eq!(err.kind, ViolationKind::LinkSymmetry);
    }

    #[test]
    fn corrupted_up_link_is_reported() {
        let mut list = QnList::build(RUNNING).unwrap();
        let n = at(&list, 7);
        list.node_mut(n).up = Some(at(&list, 3));
        assert_eq!(
            list.check_invariants().unwrap_err().kind,
            ViolationKind::UpNeighbor
        );
    }

    #[test]
    fn corrupted_level_cache_is_reported() {
        let mut list = QnList::build(RUNNING).unwrap();
        let n = at(&list, 4);
        list.node_mut(n).set_level(2);
        assert_eq!(
            list.check_invariants().unwrap_err().kind,
            ViolationKind::LevelCache
        );
    }

    #[test]
    fn probe_count_is_logarithmic() {
        let mut list = QnList::new();
        for i in 0..1000u64 {
            let m = list.list_count();
            list.insert(i as f64, i + 1).unwrap();
            let bound = if m == 0 {
                0
            } else {
                (m as f64).log2().ceil() as u64 + 1
            };
            assert!(list.counters().last_probes <= bound);
        }
    }

    #[test]
    fn structure_is_send() {
        fn assert_send<T: Send + Sync>() {}
        assert_send::<QnList>();
    }
}
