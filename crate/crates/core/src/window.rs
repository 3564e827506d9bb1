//! Head deletion and the sliding-window step.
//!
//! Deleting the oldest item lowers the rising length of exactly those nodes
//! whose chain of up links leads back to it. In every list those nodes form a
//! prefix (the *left* part); the rest (the *right* part) keep their level.
//! Deletion therefore runs in four passes:
//!
//! 1. [`divide`] finds the boundary of the left part level by level, using the
//!    down link of the first right-part node one level above.
//! 2. [`merge_horizontal`] splices `Left(t + 1) ++ Right(t)` into the new list
//!    `t` and decrements the level cache of promoted nodes.
//! 3. [`update_up_neighbors`] repairs up links of promoted nodes.
//! 4. [`update_down_neighbors`] repairs down links of stationary nodes.
//!
//! Only nodes whose old up (down) link pointed at the last left-part node of
//! the adjacent level need new links; both repairs are monotone cursor sweeps.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::qnlist::{HorizontalList, NodeId, QnList};

/// Where one list splits into its left (promoted) and right (stationary) parts.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Split {
    /// The whole list is promoted.
    AllLeft,
    /// No node of the list is promoted.
    AllRight,
    /// The left part ends at this node, inclusive.
    After(NodeId),
}

/// Result of [`divide`]: one split per level of the pre-deletion structure.
///
/// Levels after a degenerate split are stored as a single cascade flag rather
/// than one entry each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Division {
    head: NodeId,
    prefix: Vec<Split>,
    cascade: Option<Split>,
    lists: Vec<HorizontalList>,
}

impl Division {
    /// The node being deleted.
    pub fn head(&self) -> NodeId {
        self.head
    }

    /// Number of levels before deletion.
    pub fn levels(&self) -> usize {
        self.lists.len()
    }

    /// Split of the pre-deletion list at `level` (1-based).
    pub fn split(&self, level: usize) -> Split {
        assert!(
            level >= 1 && level <= self.lists.len(),
            "level out of range"
        );
        match self.prefix.get(level - 1) {
            Some(&s) => s,
            None => self.cascade.expect("division covers every level"),
        }
    }

    /// `(head, tail)` of the left part of `level`.
    pub fn left_part(&self, level: usize) -> Option<(NodeId, NodeId)> {
        let list = self.lists[level - 1];
        match self.split(level) {
            Split::AllLeft => Some((list.head, list.tail)),
            Split::AllRight => None,
            Split::After(end) => Some((list.head, end)),
        }
    }

    /// `(head, tail)` of the right part of `level`. Needs the pre-merge links.
    fn right_part(&self, list: &QnList, level: usize) -> Option<(NodeId, NodeId)> {
        let l = self.lists[level - 1];
        match self.split(level) {
            Split::AllLeft => None,
            Split::AllRight => Some((l.head, l.tail)),
            Split::After(end) => list.node(end).right().map(|h| (h, l.tail)),
        }
    }

    fn left_tail(&self, level: usize) -> Option<NodeId> {
        if level == 0 || level > self.lists.len() {
            return None;
        }
        self.left_part(level).map(|(_, t)| t)
    }
}

/// Extra data gathered by the horizontal merge for the vertical passes.
#[derive(Clone, Debug, Default)]
pub struct MergeOutcome {
    /// Per pre-deletion level, `(head, tail)` of the right part.
    right_parts: Vec<Option<(NodeId, NodeId)>>,
}

/// Cost of one deletion.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct DeleteStats {
    /// Node visits across all four passes.
    pub touches: u64,
    /// List count before the deletion.
    pub levels_before: usize,
}

/// Splits every list into left and right parts for deleting `head`.
pub fn divide(list: &QnList, head: NodeId) -> Result<Division> {
    divide_counted(list, head, &mut 0)
}

fn divide_counted(list: &QnList, head: NodeId, touches: &mut u64) -> Result<Division> {
    match list.oldest() {
        None => return Err(Error::EmptyStructure),
        Some(oldest) if oldest != head => {
            let position = list.get(head).map(|n| n.position()).unwrap_or(0);
            return Err(Error::NotOldest { position });
        }
        _ => {}
    }
    let lists = list.lists().to_vec();
    let m = lists.len();
    let mut prefix = vec![Split::After(head)];
    let mut cascade = None;
    *touches += 1;
    for t in 1..m {
        let right_head = match prefix[t - 1] {
            Split::After(end) => list.node(end).right(),
            _ => unreachable!("degenerate splits end the prefix"),
        };
        let Some(first_right) = right_head else {
            cascade = Some(Split::AllLeft);
            break;
        };
        *touches += 1;
        match list.node(first_right).down() {
            None => {
                cascade = Some(Split::AllRight);
                break;
            }
            Some(d) => prefix.push(Split::After(d)),
        }
    }
    Ok(Division {
        head,
        prefix,
        cascade,
        lists,
    })
}

/// Rebuilds the horizontal lists as `Left(t + 1) ++ Right(t)` and unlinks the
/// deleted head. Up and down links are left untouched.
pub fn merge_horizontal(list: &mut QnList, division: &Division) -> MergeOutcome {
    merge_counted(list, division, &mut 0)
}

fn merge_counted(list: &mut QnList, division: &Division, touches: &mut u64) -> MergeOutcome {
    let m = division.levels();
    let right_parts: Vec<_> = (1..=m).map(|t| division.right_part(list, t)).collect();
    let mut lists = Vec::with_capacity(m);
    for t in 1..=m {
        let promoted = if t < m {
            division.left_part(t + 1)
        } else {
            None
        };
        let stationary = right_parts[t - 1];
        if let Some((head, tail)) = promoted {
            let mut cur = Some(head);
            while let Some(id) = cur {
                *touches += 1;
                let node = list.node_mut(id);
                node.set_level(t);
                cur = if id == tail { None } else { node.right() };
            }
        }
        let merged = match (promoted, stationary) {
            (Some((lh, lt)), Some((rh, rt))) => {
                list.node_mut(lt).right = Some(rh);
                list.node_mut(rh).left = Some(lt);
                *touches += 2;
                HorizontalList { head: lh, tail: rt }
            }
            (Some((lh, lt)), None) => {
                list.node_mut(lt).right = None;
                *touches += 1;
                HorizontalList { head: lh, tail: lt }
            }
            (None, Some((rh, rt))) => {
                list.node_mut(rh).left = None;
                *touches += 1;
                HorizontalList { head: rh, tail: rt }
            }
            (None, None) => {
                debug_assert_eq!(t, m, "only the bottom list can empty out");
                break;
            }
        };
        lists.push(merged);
    }
    list.set_lists(lists);
    MergeOutcome { right_parts }
}

/// Repairs up links of promoted nodes. Runs after [`merge_horizontal`].
pub fn update_up_neighbors(list: &mut QnList, division: &Division) {
    update_up_counted(list, division, &mut 0);
}

fn update_up_counted(list: &mut QnList, division: &Division, touches: &mut u64) {
    let m = division.levels();
    // Left(t + 1) now sits at level t; its new up neighbors live in new level t - 1.
    for t in 1..m {
        let Some((head, tail)) = division.left_part(t + 1) else {
            continue;
        };
        let stale = division
            .left_tail(t)
            .expect("promoted nodes hang below a promoted node");
        let mut cursor: Option<NodeId> = None;
        let mut cur = Some(head);
        while let Some(id) = cur {
            *touches += 1;
            let node = list.node(id);
            let next = if id == tail { None } else { node.right() };
            if t == 1 {
                list.node_mut(id).up = None;
            } else if node.up() == Some(stale) {
                let pos = node.position();
                let mut c = cursor.unwrap_or(stale);
                while let Some(r) = list.node(c).right() {
                    if list.position(r) < pos {
                        *touches += 1;
                        c = r;
                    } else {
                        break;
                    }
                }
                cursor = Some(c);
                list.node_mut(id).up = Some(c);
            }
            cur = next;
        }
    }
}

/// Repairs down links of stationary nodes. Runs after [`merge_horizontal`].
pub fn update_down_neighbors(list: &mut QnList, division: &Division, merged: &MergeOutcome) {
    update_down_counted(list, division, merged, &mut 0);
}

fn update_down_counted(
    list: &mut QnList,
    division: &Division,
    merged: &MergeOutcome,
    touches: &mut u64,
) {
    let m = division.levels();
    for t in 1..m {
        let Some((rhead, _)) = merged.right_parts[t - 1] else {
            continue;
        };
        let Some(stale) = division.left_tail(t + 1) else {
            continue;
        };
        // Stationary nodes whose down link pointed at the promoted tail form a
        // prefix of Right(t); find where it ends.
        let mut block_end = None;
        let mut cur = Some(rhead);
        while let Some(id) = cur {
            *touches += 1;
            let node = list.node(id);
            if node.down() != Some(stale) {
                break;
            }
            block_end = Some(id);
            cur = node.right();
        }
        let Some(block_end) = block_end else {
            continue;
        };
        // New level t + 1 starts with Left(t + 2); the answers all lie there.
        let mut cursor = division.left_tail(t + 2);
        let mut cur = Some(block_end);
        while let Some(id) = cur {
            *touches += 1;
            let pos = list.position(id);
            while let Some(c) = cursor {
                if list.position(c) > pos {
                    *touches += 1;
                    cursor = list.node(c).left();
                } else {
                    break;
                }
            }
            list.node_mut(id).down = cursor;
            cur = if id == rhead {
                None
            } else {
                list.node(id).left()
            };
        }
    }
}

/// Deletes the oldest node, leaving the structure identical to a fresh build
/// over the remaining items.
pub fn delete_head(list: &mut QnList) -> Result<DeleteStats> {
    let head = list.oldest().ok_or(Error::EmptyStructure)?;
    let mut touches = 0u64;
    let division = divide_counted(list, head, &mut touches)?;
    let merged = merge_counted(list, &division, &mut touches);
    update_up_counted(list, &division, &mut touches);
    update_down_counted(list, &division, &merged, &mut touches);
    list.pop_oldest();
    list.bump_generation();
    list.counters_mut().record_delete(touches);
    Ok(DeleteStats {
        touches,
        levels_before: division.levels(),
    })
}

/// What one [`WindowState::slide`] did.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SlideOutcome {
    /// `(position, value)` of the evicted item, if the window was full.
    pub evicted: Option<(u64, f64)>,
    pub delete: Option<DeleteStats>,
    /// Level the new item landed on.
    pub level: usize,
    pub position: u64,
}

/// Fixed-capacity window over a stream, with its structure kept current.
///
/// The structure's node arena is the window ring: nodes are stored in arrival
/// order and evicted from the front.
#[derive(Clone, Debug)]
pub struct WindowState {
    capacity: usize,
    structure: QnList,
    next_position: u64,
}

impl WindowState {
    /// Empty window; the first item gets position 1.
    pub fn new(capacity: usize) -> Result<Self> {
        Self::starting_at(capacity, 1)
    }

    pub fn starting_at(capacity: usize, first_position: u64) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::ZeroCapacity);
        }
        Ok(Self {
            capacity,
            structure: QnList::new(),
            next_position: first_position,
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn occupancy(&self) -> usize {
        self.structure.len()
    }

    pub fn is_full(&self) -> bool {
        self.occupancy() == self.capacity
    }

    pub fn next_position(&self) -> u64 {
        self.next_position
    }

    pub fn structure(&self) -> &QnList {
        &self.structure
    }

    /// `(value, position)` pairs of the live items, oldest first.
    pub fn contents(&self) -> VecDeque<(f64, u64)> {
        self.structure.items().collect()
    }

    /// Evicts the oldest item when full, then appends `value`.
    pub fn slide(&mut self, value: f64) -> Result<SlideOutcome> {
        if !value.is_finite() {
            return Err(Error::NonFiniteValue(value));
        }
        let (evicted, delete) = if self.is_full() {
            let oldest = self.structure.oldest().expect("full window is non-empty");
            let node = self.structure.node(oldest);
            let evicted = (node.position(), node.value());
            (Some(evicted), Some(delete_head(&mut self.structure)?))
        } else {
            (None, None)
        };
        let position = self.next_position;
        let level = self.structure.insert(value, position)?;
        self.next_position += 1;
        Ok(SlideOutcome {
            evicted,
            delete,
            level,
            position,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const RUNNING: [f64; 7] = [3.0, 9.0, 6.0, 2.0, 8.0, 5.0, 7.0];

    fn at(list: &QnList, position: u64) -> NodeId {
        list.find_position(position).unwrap()
    }

    fn parts(list: &QnList, div: &Division) -> Vec<(Vec<f64>, Vec<f64>)> {
        (1..=div.levels())
            .map(|t| {
                let all: Vec<NodeId> = list.iter_list(t).collect();
                let cut = match div.split(t) {
                    Split::AllLeft => all.len(),
                    Split::AllRight => 0,
                    Split::After(end) => all.iter().position(|&id| id == end).unwrap() + 1,
                };
                let vals = |ids: &[NodeId]| ids.iter().map(|&id| list.value(id)).collect();
                (vals(&all[..cut]), vals(&all[cut..]))
            })
            .collect()
    }

    #[test]
    fn divides_running_example() {
        let list = QnList::build(RUNNING).unwrap();
        let div = divide(&list, at(&list, 1)).unwrap();
        assert_eq!(
            parts(&list, &div),
            vec![
                (vec![3.0], vec![2.0]),
                (vec![9.0, 6.0], vec![5.0]),
                (vec![8.0], vec![7.0]),
            ]
        );
    }

    #[test]
    fn divides_singleton() {
        let list = QnList::build([4.0]).unwrap();
        let div = divide(&list, at(&list, 1)).unwrap();
        assert_eq!(parts(&list, &div), vec![(vec![4.0], vec![])]);
    }

    #[test]
    fn divide_stops_when_first_right_node_has_no_down_link() {
        let list = QnList::build([2.0, 1.0, 3.0]).unwrap();
        let div = divide(&list, at(&list, 1)).unwrap();
        assert_eq!(div.split(2), Split::AllRight);
        assert_eq!(
            parts(&list, &div),
            vec![(vec![2.0], vec![1.0]), (vec![], vec![3.0])]
        );
    }

    #[test]
    fn divide_rejects_non_oldest_head() {
        let list = QnList::build(RUNNING).unwrap();
        assert_eq!(
            divide(&list, at(&list, 3)),
            Err(Error::NotOldest { position: 3 })
        );
        assert_eq!(
            divide(&QnList::new(), at(&list, 1)),
            Err(Error::EmptyStructure)
        );
    }

    #[test]
    fn merge_then_repair_running_example() {
        let mut list = QnList::build(RUNNING).unwrap();
        let div = divide(&list, at(&list, 1)).unwrap();
        let merged = merge_horizontal(&mut list, &div);
        update_up_neighbors(&mut list, &div);
        update_down_neighbors(&mut list, &div, &merged);
        list.pop_oldest();
        assert_eq!(
            list.snapshot().values(),
            vec![vec![9.0, 6.0, 2.0], vec![8.0, 5.0], vec![7.0]]
        );
        assert_eq!(list.node(at(&list, 5)).up(), Some(at(&list, 4)));
        assert_eq!(list.node(at(&list, 6)).up(), Some(at(&list, 4)));
        assert_eq!(list.node(at(&list, 4)).down(), None);
        assert_eq!(list.node(at(&list, 6)).down(), None);
        assert_eq!(list.node(at(&list, 2)).up(), None);
        list.check_invariants().unwrap();
    }

    #[test]
    fn delete_head_matches_rebuild() {
        let mut list = QnList::build(RUNNING).unwrap();
        delete_head(&mut list).unwrap();
        let rebuilt = QnList::from_items(RUNNING.iter().copied().zip(1..).skip(1)).unwrap();
        assert_eq!(list.snapshot().first_difference(&rebuilt.snapshot()), None);
    }

    #[test]
    fn delete_sole_item_and_empty() {
        let mut list = QnList::build([4.0]).unwrap();
        delete_head(&mut list).unwrap();
        assert!(list.is_empty());
        assert_eq!(list.list_count(), 0);
        assert_eq!(delete_head(&mut list), Err(Error::EmptyStructure));
    }

    #[test]
    fn delete_from_two_one_three() {
        let mut list = QnList::build([2.0, 1.0, 3.0]).unwrap();
        delete_head(&mut list).unwrap();
        assert_eq!(list.snapshot().values(), vec![vec![1.0], vec![3.0]]);
        list.check_invariants().unwrap();
    }

    #[test]
    fn slide_full_window() {
        let mut w = WindowState::new(7).unwrap();
        for v in RUNNING {
            assert!(w.slide(v).unwrap().evicted.is_none());
        }
        let out = w.slide(4.0).unwrap();
        assert_eq!(out.evicted, Some((1, 3.0)));
        assert_eq!(out.position, 8);
        let rebuilt = QnList::from_items(w.contents()).unwrap();
        let values: Vec<f64> = w.contents().iter().map(|p| p.0).collect();
        assert_eq!(values, vec![9.0, 6.0, 2.0, 8.0, 5.0, 7.0, 4.0]);
        assert_eq!(w.structure().snapshot(), rebuilt.snapshot());
    }

    #[test]
    fn warm_up_and_capacity_one() {
        let mut w = WindowState::new(3).unwrap();
        w.slide(5.0).unwrap();
        assert_eq!(w.occupancy(), 1);

        let mut w = WindowState::new(1).unwrap();
        w.slide(3.0).unwrap();
        w.slide(7.0).unwrap();
        assert_eq!(w.contents(), VecDeque::from(vec![(7.0, 2)]));
        assert_eq!(w.structure().list_count(), 1);

        assert_eq!(WindowState::new(0).unwrap_err(), Error::ZeroCapacity);
        assert!(matches!(w.slide(f64::NAN), Err(Error::NonFiniteValue(_))));
    }
}
