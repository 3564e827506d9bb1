//! LIS queries over a [`QnList`].
//!
//! Every LIS ends in the bottom list and walks upward through predecessor
//! blocks, so all queries are depth-first scans over implicit predecessor
//! edges. Two per-node tables drive the constrained variants:
//!
//! * `head_right(n)`: follow up links to level 1. This is the rightmost (and
//!   smallest) possible first item of an LIS ending at `n`.
//! * `head_left(n)`: follow leftmost predecessors to level 1. This is the
//!   leftmost (and largest) possible first item.
//!
//! Every LIS ending at `n` is sandwiched between these two chains level by
//! level, which is what makes the weight, gap and width extrema cheap.

use serde::ser::{Serialize, SerializeTuple, Serializer};

use crate::error::{Error, Result};
use crate::qnlist::{NodeId, QnList};

/// One item of a reported sequence.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Item {
    pub position: u64,
    pub value: f64,
}

impl Serialize for Item {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = serializer.serialize_tuple(2)?;
        t.serialize_element(&self.position)?;
        t.serialize_element(&self.value)?;
        t.end()
    }
}

/// A reported subsequence, in increasing position order.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ResultSequence {
    pub items: Vec<Item>,
}

impl Serialize for ResultSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.items.serialize(serializer)
    }
}

impl ResultSequence {
    /// Builds a sequence from a chain given tail first.
    fn from_chain_rev(list: &QnList, chain: &[NodeId]) -> Self {
        let items = chain
            .iter()
            .rev()
            .map(|&id| Item {
                position: list.position(id),
                value: list.value(id),
            })
            .collect();
        Self { items }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn head(&self) -> Option<Item> {
        self.items.first().copied()
    }

    pub fn tail(&self) -> Option<Item> {
        self.items.last().copied()
    }

    pub fn weight(&self) -> f64 {
        self.items.iter().map(|i| i.value).sum()
    }

    pub fn gap(&self) -> f64 {
        match (self.head(), self.tail()) {
            (Some(h), Some(t)) => t.value - h.value,
            _ => 0.0,
        }
    }

    pub fn width(&self) -> u64 {
        match (self.head(), self.tail()) {
            (Some(h), Some(t)) => t.position - h.position,
            _ => 0,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        self.items.iter().map(|i| i.value).collect()
    }

    pub fn positions(&self) -> Vec<u64> {
        self.items.iter().map(|i| i.position).collect()
    }

    /// `(position, value)` pairs.
    pub fn pairs(&self) -> Vec<(u64, f64)> {
        self.items.iter().map(|i| (i.position, i.value)).collect()
    }
}

/// Per-node level-1 endpoint of one of the two extreme chains.
#[derive(Clone, Debug)]
pub struct HeadTable {
    generation: u64,
    heads: Vec<NodeId>,
}

impl HeadTable {
    /// Endpoint for `id`. Panics if the table is stale.
    pub fn get(&self, list: &QnList, id: NodeId) -> NodeId {
        assert!(
            self.is_current(list),
            "sweep table used after the structure changed"
        );
        self.heads[list.slot(id)]
    }

    pub fn is_current(&self, list: &QnList) -> bool {
        self.generation == list.generation()
    }
}

/// Both sweep tables for one structure generation.
#[derive(Clone, Debug)]
pub struct SweepTable {
    pub head_right: HeadTable,
    pub head_left: HeadTable,
}

impl SweepTable {
    pub fn compute(list: &QnList) -> Self {
        Self {
            head_right: sweep_khop_up(list),
            head_left: sweep_leftmost(list),
        }
    }

    pub fn is_current(&self, list: &QnList) -> bool {
        self.head_right.is_current(list) && self.head_left.is_current(list)
    }
}

/// `head_right(n) = un^(t-1)(n)` for every node, one pass per level.
pub fn sweep_khop_up(list: &QnList) -> HeadTable {
    let mut heads: Vec<NodeId> = list.ids().collect();
    for t in 2..=list.list_count() {
        for id in list.iter_list(t) {
            let up = list
                .node(id)
                .up()
                .expect("nodes below level 1 have an up link");
            heads[list.slot(id)] = heads[list.slot(up)];
        }
    }
    HeadTable {
        generation: list.generation(),
        heads,
    }
}

/// `head_left(n) = lm^(t-1)(n)` for every node.
///
/// The leftmost predecessor of a node is the leftmost item one level up whose
/// value does not exceed it. Walking a list left to right the node values
/// decrease, so the matching cursor in the level above only moves right.
pub fn sweep_leftmost(list: &QnList) -> HeadTable {
    let mut heads: Vec<NodeId> = list.ids().collect();
    for t in 2..=list.list_count() {
        let mut above = list.list(t - 1).map(|l| l.head);
        for id in list.iter_list(t) {
            let v = list.value(id);
            while let Some(k) = above {
                if list.value(k) > v {
                    above = list.node(k).right();
                } else {
                    break;
                }
            }
            let k = above.expect("nodes below level 1 have a predecessor");
            heads[list.slot(id)] = heads[list.slot(k)];
        }
    }
    HeadTable {
        generation: list.generation(),
        heads,
    }
}

/// Leftmost predecessor of `id`, or `None` at level 1.
pub fn leftmost_child(list: &QnList, id: NodeId) -> Option<NodeId> {
    list.predecessors(id).last()
}

/// LIS length: the number of horizontal lists.
pub fn lis_length(list: &QnList) -> usize {
    list.list_count()
}

/// Depth-first walk over all LIS ending at `seed` whose members pass
/// `accept`. `emit` receives each chain tail first.
fn walk_from<A, E>(list: &QnList, seed: NodeId, accept: A, emit: &mut E)
where
    A: Fn(NodeId) -> bool,
    E: FnMut(&[NodeId]),
{
    // Each frame keeps the next candidate to try in its predecessor block.
    let mut path = vec![seed];
    let mut next = vec![list.node(seed).up()];
    while let Some(&top) = path.last() {
        if list.rising_length(top) == 1 {
            emit(&path);
            path.pop();
            next.pop();
            continue;
        }
        let cursor = next.last_mut().expect("frames stay in lockstep");
        let mut candidate = *cursor;
        while let Some(c) = candidate {
            if !list.compatible(c, top) {
                candidate = None;
                break;
            }
            if accept(c) {
                break;
            }
            candidate = list.node(c).left();
        }
        match candidate {
            Some(c) => {
                *cursor = list.node(c).left();
                path.push(c);
                next.push(list.node(c).up());
            }
            None => {
                path.pop();
                next.pop();
            }
        }
    }
}

/// Calls `emit` with every LIS, tail first, in the documented order: seeds
/// are the bottom list head to tail, and predecessor blocks are scanned from
/// the up neighbor leftward.
pub fn for_each_lis<E: FnMut(&[NodeId])>(list: &QnList, mut emit: E) {
    let m = list.list_count();
    let seeds: Vec<NodeId> = list.iter_list(m).collect();
    for seed in seeds {
        walk_from(list, seed, |_| true, &mut emit);
    }
}

/// All LIS of the housed sequence.
pub fn enumerate(list: &QnList) -> Vec<ResultSequence> {
    let mut out = Vec::new();
    for_each_lis(list, |chain| {
        out.push(ResultSequence::from_chain_rev(list, chain))
    });
    out
}

fn require_nonempty(list: &QnList) -> Result<usize> {
    match list.list_count() {
        0 => Err(Error::EmptyStructure),
        m => Ok(m),
    }
}

fn up_chain(list: &QnList, from: NodeId) -> Vec<NodeId> {
    std::iter::successors(Some(from), |&id| list.node(id).up()).collect()
}

/// The up-link chain from the tail of the bottom list.
pub fn single_lis(list: &QnList) -> Result<ResultSequence> {
    min_weight(list)
}

/// LIS with the smallest weight: the up-link chain from the last item of the
/// bottom list.
pub fn min_weight(list: &QnList) -> Result<ResultSequence> {
    let m = require_nonempty(list)?;
    let tail = list.list(m).expect("non-empty").tail();
    Ok(ResultSequence::from_chain_rev(list, &up_chain(list, tail)))
}

/// LIS with the largest weight: the leftmost-predecessor chain from the first
/// item of the bottom list.
pub fn max_weight(list: &QnList) -> Result<ResultSequence> {
    let m = require_nonempty(list)?;
    let mut chain = vec![list.list(m).expect("non-empty").head()];
    while let Some(&top) = chain.last() {
        let Some(mut a) = list.node(top).up() else {
            break;
        };
        while let Some(l) = list.node(a).left() {
            if list.compatible(l, top) {
                a = l;
            } else {
                break;
            }
        }
        chain.push(a);
    }
    Ok(ResultSequence::from_chain_rev(list, &chain))
}

/// A set of LIS attaining an extremum, with the extremal value.
#[derive(Clone, Debug, PartialEq)]
pub struct Extreme {
    pub value: f64,
    pub sequences: Vec<ResultSequence>,
}

#[derive(Copy, Clone)]
enum Anchor {
    Right,
    Left,
}

/// For each qualifying bottom-list tail, enumerates all LIS between it and
/// its fixed first item.
fn extreme_by_head<S>(list: &QnList, anchor: Anchor, maximize: bool, score: S) -> Result<Extreme>
where
    S: Fn(NodeId, NodeId) -> f64,
{
    let m = require_nonempty(list)?;
    let table = match anchor {
        Anchor::Right => sweep_khop_up(list),
        Anchor::Left => sweep_leftmost(list),
    };
    let tails: Vec<(NodeId, NodeId, f64)> = list
        .iter_list(m)
        .map(|id| {
            let head = table.get(list, id);
            (id, head, score(id, head))
        })
        .collect();
    let best = tails
        .iter()
        .map(|t| t.2)
        .reduce(|a, b| if maximize { a.max(b) } else { a.min(b) })
        .expect("bottom list is non-empty");
    let mut sequences = Vec::new();
    for &(tail, head, s) in &tails {
        if s != best {
            continue;
        }
        walk_from(
            list,
            tail,
            |c| table.get(list, c) == head,
            &mut |chain: &[NodeId]| sequences.push(ResultSequence::from_chain_rev(list, chain)),
        );
    }
    Ok(Extreme {
        value: best,
        sequences,
    })
}

/// All LIS with the largest tail-minus-head value.
pub fn max_gap(list: &QnList) -> Result<Extreme> {
    extreme_by_head(list, Anchor::Right, true, |t, h| {
        list.value(t) - list.value(h)
    })
}

/// All LIS with the smallest tail-minus-head value.
pub fn min_gap(list: &QnList) -> Result<Extreme> {
    extreme_by_head(list, Anchor::Left, false, |t, h| {
        list.value(t) - list.value(h)
    })
}

/// All LIS with the largest tail-minus-head position.
pub fn max_width(list: &QnList) -> Result<Extreme> {
    extreme_by_head(list, Anchor::Left, true, |t, h| {
        (list.position(t) - list.position(h)) as f64
    })
}

/// All LIS with the smallest tail-minus-head position.
pub fn min_width(list: &QnList) -> Result<Extreme> {
    extreme_by_head(list, Anchor::Right, false, |t, h| {
        (list.position(t) - list.position(h)) as f64
    })
}

/// Per-node exclusion marks for one constrained query, keyed by node slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorMarks {
    black: Vec<bool>,
}

impl ColorMarks {
    fn new(list: &QnList) -> Self {
        Self {
            black: vec![false; list.len()],
        }
    }

    pub fn is_black(&self, list: &QnList, id: NodeId) -> bool {
        self.black[list.slot(id)]
    }

    fn set_black(&mut self, list: &QnList, id: NodeId) {
        self.black[list.slot(id)] = true;
    }

    pub fn black_count(&self) -> usize {
        self.black.iter().filter(|&&b| b).count()
    }
}

/// Validated index-gap and value-gap ranges for a range-constrained LIS.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct RangeParams {
    min_index: u64,
    max_index: u64,
    min_value: f64,
    max_value: f64,
}

impl RangeParams {
    /// Requires `0 < min_index <= max_index` and `0 <= min_value <= max_value`.
    pub fn new(min_index: u64, max_index: u64, min_value: f64, max_value: f64) -> Result<Self> {
        if min_index == 0 || min_index > max_index {
            return Err(Error::InvalidRange(format!(
                "index gaps need 0 < min <= max, got [{min_index}, {max_index}]"
            )));
        }
        if !(min_value.is_finite()
            && max_value.is_finite()
            && 0.0 <= min_value
            && min_value <= max_value)
        {
            return Err(Error::InvalidRange(format!(
                "value gaps need 0 <= min <= max, got [{min_value}, {max_value}]"
            )));
        }
        Ok(Self {
            min_index,
            max_index,
            min_value,
            max_value,
        })
    }

    pub fn min_index(&self) -> u64 {
        self.min_index
    }

    pub fn max_index(&self) -> u64 {
        self.max_index
    }

    pub fn min_value(&self) -> f64 {
        self.min_value
    }

    pub fn max_value(&self) -> f64 {
        self.max_value
    }
}

fn position_gap(list: &QnList, from: NodeId, to: NodeId) -> i128 {
    list.position(to) as i128 - list.position(from) as i128
}

fn validate_slope(slope: f64) -> Result<()> {
    if slope.is_finite() && slope >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidSlope(slope))
    }
}

fn slope_proper(list: &QnList, marks: &ColorMarks, pred: NodeId, node: NodeId, slope: f64) -> bool {
    !marks.is_black(list, pred)
        && list.compatible(pred, node)
        && list.value(node) - list.value(pred) >= slope * position_gap(list, pred, node) as f64
}

fn range_proper(
    list: &QnList,
    marks: &ColorMarks,
    pred: NodeId,
    node: NodeId,
    r: &RangeParams,
) -> bool {
    let di = position_gap(list, pred, node);
    let dv = list.value(node) - list.value(pred);
    !marks.is_black(list, pred)
        && (r.min_index as i128..=r.max_index as i128).contains(&di)
        && r.min_value <= dv
        && dv <= r.max_value
}

/// Marks nodes that cannot end a slope-constrained increasing chain.
pub fn slope_coloring(list: &QnList, slope: f64) -> Result<ColorMarks> {
    validate_slope(slope)?;
    let mut marks = ColorMarks::new(list);
    for t in 2..=list.list_count() {
        let mut above = list.list(t - 1).map(|l| l.head);
        for id in list.iter_list(t) {
            // Items skipped here fail the slope test for every later node of
            // this list too, so the cursor never moves back.
            while let Some(k) = above {
                if list.position(k) < list.position(id) && !slope_proper(list, &marks, k, id, slope)
                {
                    above = list.node(k).right();
                } else {
                    break;
                }
            }
            match above {
                Some(k) if list.position(k) < list.position(id) => {}
                _ => marks.set_black(list, id),
            }
        }
    }
    Ok(marks)
}

/// Marks nodes that cannot end a range-constrained increasing chain.
pub fn range_coloring(list: &QnList, range: &RangeParams) -> ColorMarks {
    let mut marks = ColorMarks::new(list);
    for t in 2..=list.list_count() {
        let mut above = list.list(t - 1).map(|l| l.head);
        for id in list.iter_list(t) {
            // Advance to the leftmost non-black item meeting the lower value
            // bound and the upper index bound; the node has a range-proper
            // predecessor iff that item is one.
            while let Some(k) = above {
                let partial = !marks.is_black(list, k)
                    && range.min_value <= list.value(id) - list.value(k)
                    && position_gap(list, k, id) <= range.max_index as i128;
                if partial {
                    break;
                }
                above = list.node(k).right();
            }
            match above {
                Some(k) if range_proper(list, &marks, k, id, range) => {}
                _ => marks.set_black(list, id),
            }
        }
    }
    marks
}

/// Walks down from the leftmost non-black bottom node, at each step taking
/// the rightmost predecessor accepted by `proper`.
fn constrained_chain<P>(list: &QnList, marks: &ColorMarks, proper: P) -> Option<ResultSequence>
where
    P: Fn(NodeId, NodeId) -> bool,
{
    let m = list.list_count();
    let start = list.iter_list(m).find(|&id| !marks.is_black(list, id))?;
    let mut chain = vec![start];
    while let Some(&top) = chain.last() {
        let Some(up) = list.node(top).up() else {
            break;
        };
        let mut a = up;
        while !proper(a, top) {
            a = list
                .node(a)
                .left()
                .expect("a non-black node has a proper predecessor");
        }
        chain.push(a);
    }
    Some(ResultSequence::from_chain_rev(list, &chain))
}

/// One LIS whose consecutive items rise by at least `slope` per position
/// step, or `None` if there is none.
pub fn slis(list: &QnList, slope: f64) -> Result<Option<ResultSequence>> {
    let marks = slope_coloring(list, slope)?;
    if list.is_empty() {
        return Ok(None);
    }
    Ok(constrained_chain(list, &marks, |p, n| {
        slope_proper(list, &marks, p, n, slope)
    }))
}

/// One LIS whose consecutive items respect both gap ranges, or `None`.
pub fn rlis(list: &QnList, range: &RangeParams) -> Option<ResultSequence> {
    if list.is_empty() {
        return None;
    }
    let marks = range_coloring(list, range);
    constrained_chain(list, &marks, |p, n| range_proper(list, &marks, p, n, range))
}

#[cfg(test)]
mod tests {
    use super::*;

    const RUNNING: [f64; 7] = [3.0, 9.0, 6.0, 2.0, 8.0, 5.0, 7.0];

    fn running() -> QnList {
        QnList::build(RUNNING).unwrap()
    }

    fn vals(seqs: &[ResultSequence]) -> Vec<Vec<f64>> {
        let mut v: Vec<_> = seqs.iter().map(|s| s.values()).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    fn at(list: &QnList, p: u64) -> NodeId {
        list.find_position(p).unwrap()
    }

    #[test]
    fn lengths() {
        assert_eq!(lis_length(&running()), 3);
        assert_eq!(lis_length(&QnList::new()), 0);
        assert_eq!(lis_length(&QnList::build([3.0, 2.0, 1.0]).unwrap()), 1);
    }

    #[test]
    fn enumerates_running_example() {
        let all = enumerate(&running());
        assert_eq!(
            vals(&all),
            vec![
                vec![2.0, 5.0, 7.0],
                vec![3.0, 5.0, 7.0],
                vec![3.0, 6.0, 7.0],
                vec![3.0, 6.0, 8.0],
            ]
        );
        // seed 8@5 first, then 7@7 with 5@6 before 6@3
        let order: Vec<Vec<u64>> = all.iter().map(|s| s.positions()).collect();
        assert_eq!(
            order,
            vec![vec![1, 3, 5], vec![4, 6, 7], vec![1, 6, 7], vec![1, 3, 7]]
        );
    }

    #[test]
    fn enumerates_small_cases() {
        let chain = QnList::build([1.0, 2.0, 3.0]).unwrap();
        assert_eq!(vals(&enumerate(&chain)), vec![vec![1.0, 2.0, 3.0]]);
        let pair = QnList::build([2.0, 1.0]).unwrap();
        assert_eq!(vals(&enumerate(&pair)), vec![vec![1.0], vec![2.0]]);
        assert!(enumerate(&QnList::new()).is_empty());
    }

    #[test]
    fn single_lis_is_up_chain() {
        assert_eq!(
            single_lis(&running()).unwrap().values(),
            vec![2.0, 5.0, 7.0]
        );
        assert_eq!(
            single_lis(&QnList::build([4.0]).unwrap()).unwrap().values(),
            vec![4.0]
        );
        assert_eq!(single_lis(&QnList::new()), Err(Error::EmptyStructure));
    }

    #[test]
    fn sweeps() {
        let list = running();
        let right = sweep_khop_up(&list);
        let left = sweep_leftmost(&list);
        assert_eq!(right.get(&list, at(&list, 7)), at(&list, 4));
        assert_eq!(right.get(&list, at(&list, 5)), at(&list, 1));
        assert_eq!(right.get(&list, at(&list, 2)), at(&list, 1));
        assert_eq!(right.get(&list, at(&list, 4)), at(&list, 4));
        assert_eq!(leftmost_child(&list, at(&list, 7)), Some(at(&list, 3)));
        assert_eq!(left.get(&list, at(&list, 7)), at(&list, 1));
        assert_eq!(left.get(&list, at(&list, 1)), at(&list, 1));
    }

    #[test]
    fn stale_sweep_is_detected() {
        let mut list = running();
        let table = SweepTable::compute(&list);
        assert!(table.is_current(&list));
        list.insert(1.0, 8).unwrap();
        assert!(!table.is_current(&list));
    }

    #[test]
    fn weights() {
        let list = running();
        let max = max_weight(&list).unwrap();
        assert_eq!(max.values(), vec![3.0, 6.0, 8.0]);
        assert_eq!(max.weight(), 17.0);
        let min = min_weight(&list).unwrap();
        assert_eq!(min.values(), vec![2.0, 5.0, 7.0]);
        assert_eq!(min.weight(), 14.0);

        let small = QnList::build([2.0, 1.0, 3.0]).unwrap();
        assert_eq!(max_weight(&small).unwrap().values(), vec![2.0, 3.0]);
        assert_eq!(min_weight(&small).unwrap().values(), vec![1.0, 3.0]);
        let chain = QnList::build([1.0, 2.0, 3.0]).unwrap();
        assert_eq!(max_weight(&chain).unwrap().values(), vec![1.0, 2.0, 3.0]);
        assert_eq!(max_weight(&QnList::new()), Err(Error::EmptyStructure));
    }

    #[test]
    fn gaps() {
        let list = running();
        let max = max_gap(&list).unwrap();
        assert_eq!(max.value, 5.0);
        assert_eq!(
            vals(&max.sequences),
            vec![vec![2.0, 5.0, 7.0], vec![3.0, 6.0, 8.0]]
        );
        let min = min_gap(&list).unwrap();
        assert_eq!(min.value, 4.0);
        assert_eq!(
            vals(&min.sequences),
            vec![vec![3.0, 5.0, 7.0], vec![3.0, 6.0, 7.0]]
        );

        let small = QnList::build([2.0, 1.0, 3.0]).unwrap();
        let max = max_gap(&small).unwrap();
        assert_eq!(
            (max.value, vals(&max.sequences)),
            (2.0, vec![vec![1.0, 3.0]])
        );
        let min = min_gap(&small).unwrap();
        assert_eq!(
            (min.value, vals(&min.sequences)),
            (1.0, vec![vec![2.0, 3.0]])
        );
        assert_eq!(max_gap(&QnList::new()), Err(Error::EmptyStructure));
    }

    #[test]
    fn widths() {
        let list = running();
        let max = max_width(&list).unwrap();
        assert_eq!(max.value, 6.0);
        let mut pos: Vec<_> = max.sequences.iter().map(|s| s.positions()).collect();
        pos.sort();
        assert_eq!(pos, vec![vec![1, 3, 7], vec![1, 6, 7]]);
        let min = min_width(&list).unwrap();
        assert_eq!(min.value, 3.0);
        assert_eq!(min.sequences.len(), 1);
        assert_eq!(min.sequences[0].positions(), vec![4, 6, 7]);

        let chain = QnList::build([1.0, 2.0, 3.0]).unwrap();
        assert_eq!(max_width(&chain).unwrap().value, 2.0);
        let small = QnList::build([2.0, 1.0, 3.0]).unwrap();
        assert_eq!(
            max_width(&small).unwrap().sequences[0].positions(),
            vec![1, 3]
        );
        assert_eq!(
            min_width(&small).unwrap().sequences[0].positions(),
            vec![2, 3]
        );
    }

    #[test]
    fn slope_constrained() {
        let list = running();
        let one = slis(&list, 1.0).unwrap().unwrap();
        assert_eq!(one.pairs(), vec![(1, 3.0), (3, 6.0), (5, 8.0)]);
        assert_eq!(slis(&list, 2.0).unwrap(), None);
        assert_eq!(slis(&list, 0.0).unwrap().unwrap().len(), 3);
        assert_eq!(slis(&list, -1.0), Err(Error::InvalidSlope(-1.0)));
        assert!(slis(&list, f64::NAN).is_err());
        let marks = slope_coloring(&list, 2.0).unwrap();
        assert!(list.iter_list(1).all(|id| !marks.is_black(&list, id)));
    }

    #[test]
    fn range_constrained() {
        let list = running();
        let r = RangeParams::new(1, 2, 1.0, 3.0).unwrap();
        assert_eq!(
            rlis(&list, &r).unwrap().pairs(),
            vec![(1, 3.0), (3, 6.0), (5, 8.0)]
        );
        let far = RangeParams::new(1, 6, 10.0, 20.0).unwrap();
        assert_eq!(rlis(&list, &far), None);
        let pair = QnList::build([1.0, 2.0]).unwrap();
        let exact = RangeParams::new(1, 1, 1.0, 1.0).unwrap();
        assert_eq!(rlis(&pair, &exact).unwrap().values(), vec![1.0, 2.0]);
    }

    #[test]
    fn range_validation() {
        assert!(RangeParams::new(0, 2, 0.0, 1.0).is_err());
        assert!(RangeParams::new(3, 2, 0.0, 1.0).is_err());
        assert!(RangeParams::new(1, 2, -1.0, 1.0).is_err());
        assert!(RangeParams::new(1, 2, 2.0, 1.0).is_err());
        assert!(RangeParams::new(1, 2, 0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn serializes_as_position_value_pairs() {
        let seq = max_weight(&running()).unwrap();
        assert_eq!(
            serde_json::to_string(&seq).unwrap(),
            "[[1,3.0],[3,6.0],[5,8.0]]"
        );
    }
}
