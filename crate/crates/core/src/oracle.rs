//! Brute-force reference answers.
//!
//! Everything here works directly on value slices with quadratic dynamic
//! programming or exhaustive subset search. None of it touches the linked
//! structure, so it can be used to cross-check it.
//!
//! Sequences are returned as index vectors into the input slice. Callers that
//! need stream positions add their own offset.

use std::cmp::Ordering;

use thiserror::Error;

/// Longest input accepted by [`brute_feasible`].
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Longest input callers should hand to [`dp_enumerate`]. Not enforced: the
/// output size, not the table, is what grows out of hand.
pub const ENUMERATION_LIMIT: usize = 256;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("exhaustive search is limited to {limit} items, got {len}")]
    TooLong { len: usize, limit: usize },
}

/// Rising length and predecessor sets per index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpTable {
    pub rl: Vec<usize>,
    pub preds: Vec<Vec<usize>>,
}

pub fn dp_table(values: &[f64]) -> DpTable {
    let n = values.len();
    let mut rl = vec![0usize; n];
    for i in 0..n {
        let best = (0..i)
            .filter(|&j| values[j] <= values[i])
            .map(|j| rl[j])
            .max()
            .unwrap_or(0);
        rl[i] = best + 1;
    }
    let preds = (0..n)
        .map(|i| {
            (0..i)
                .filter(|&j| values[j] <= values[i] && rl[j] + 1 == rl[i])
                .collect()
        })
        .collect();
    DpTable { rl, preds }
}

pub fn dp_rising_lengths(values: &[f64]) -> Vec<usize> {
    dp_table(values).rl
}

/// Every maximum-length non-decreasing subsequence, as index vectors.
pub fn dp_enumerate(values: &[f64]) -> Vec<Vec<usize>> {
    let table = dp_table(values);
    let Some(&best) = table.rl.iter().max() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for end in (0..values.len()).filter(|&i| table.rl[i] == best) {
        chains_ending_at(&table, end, &mut vec![end], &mut out);
    }
    out
}

/// Every maximum-length non-decreasing subsequence ending at `end`.
pub fn dp_chains_ending_at(values: &[f64], end: usize) -> Vec<Vec<usize>> {
    let table = dp_table(values);
    let mut out = Vec::new();
    chains_ending_at(&table, end, &mut vec![end], &mut out);
    out
}

fn chains_ending_at(table: &DpTable, at: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if table.rl[at] == 1 {
        out.push(path.iter().rev().copied().collect());
        return;
    }
    for &p in &table.preds[at] {
        path.push(p);
        chains_ending_at(table, p, path, out);
        path.pop();
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Measure {
    Weight,
    Gap,
    Width,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Extremum {
    Max,
    Min,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Criterion {
    pub measure: Measure,
    pub extremum: Extremum,
}

impl Criterion {
    pub fn new(measure: Measure, extremum: Extremum) -> Self {
        Self { measure, extremum }
    }

    /// Measure of a `(position, value)` sequence.
    pub fn measure(&self, seq: &[(u64, f64)]) -> f64 {
        let (Some(first), Some(last)) = (seq.first(), seq.last()) else {
            return 0.0;
        };
        match self.measure {
            Measure::Weight => seq.iter().map(|&(_, v)| v).sum(),
            Measure::Gap => last.1 - first.1,
            Measure::Width => (last.0 - first.0) as f64,
        }
    }
}

/// Keeps the members of `set` that attain the extremum under `criterion`.
pub fn post_filter(set: &[Vec<(u64, f64)>], criterion: Criterion) -> Vec<Vec<(u64, f64)>> {
    let scores: Vec<f64> = set.iter().map(|s| criterion.measure(s)).collect();
    let best = scores
        .iter()
        .copied()
        .reduce(|a, b| match criterion.extremum {
            Extremum::Max => a.max(b),
            Extremum::Min => a.min(b),
        });
    match best {
        None => Vec::new(),
        Some(best) => set
            .iter()
            .zip(&scores)
            .filter(|(_, &s)| s.partial_cmp(&best) == Some(Ordering::Equal))
            .map(|(seq, _)| seq.clone())
            .collect(),
    }
}

/// Pairwise predicate on consecutive members of a constrained LIS.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Constraint {
    /// Rise over run between consecutive members is at least the bound.
    Slope(f64),
    /// Index gap within `[min_index, max_index]` and value gap within
    /// `[min_value, max_value]`.
    Range {
        min_index: u64,
        max_index: u64,
        min_value: f64,
        max_value: f64,
    },
}

impl Constraint {
    /// Whether `(i, vi)` may directly follow `(j, vj)` where `j < i`.
    pub fn allows(&self, j: usize, vj: f64, i: usize, vi: f64) -> bool {
        let di = (i - j) as u64;
        let dv = vi - vj;
        match *self {
            Constraint::Slope(slope) => dv >= slope * di as f64,
            Constraint::Range {
                min_index,
                max_index,
                min_value,
                max_value,
            } => (min_index..=max_index).contains(&di) && min_value <= dv && dv <= max_value,
        }
    }

    fn allows_chain(&self, values: &[f64], chain: &[usize]) -> bool {
        chain
            .windows(2)
            .all(|w| self.allows(w[0], values[w[0]], w[1], values[w[1]]))
    }
}

/// Every LIS of `values` satisfying `constraint`, by trying all subsets.
pub fn brute_feasible(
    values: &[f64],
    constraint: Constraint,
) -> Result<Vec<Vec<usize>>, OracleError> {
    let n = values.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(OracleError::TooLong {
            len: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut best = 0usize;
    let mut increasing: Vec<Vec<usize>> = Vec::new();
    for mask in 1u32..(1u32 << n) {
        let chain: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        if chain.windows(2).all(|w| values[w[0]] <= values[w[1]]) {
            match chain.len().cmp(&best) {
                Ordering::Greater => {
                    best = chain.len();
                    increasing.clear();
                    increasing.push(chain);
                }
                Ordering::Equal => increasing.push(chain),
                Ordering::Less => {}
            }
        }
    }
    increasing.retain(|c| constraint.allows_chain(values, c));
    increasing.sort();
    Ok(increasing)
}

/// Constrained LIS via the DP enumeration instead of subset search. Usable on
/// inputs longer than [`BRUTE_FORCE_LIMIT`] as long as the LIS count stays
/// manageable.
pub fn dp_feasible(values: &[f64], constraint: Constraint) -> Vec<Vec<usize>> {
    let mut out: Vec<_> = dp_enumerate(values)
        .into_iter()
        .filter(|c| constraint.allows_chain(values, c))
        .collect();
    out.sort();
    out
}

/// Maps index vectors to `(position, value)` pairs with position `first + index`.
pub fn with_positions(values: &[f64], first: u64, chains: &[Vec<usize>]) -> Vec<Vec<(u64, f64)>> {
    chains
        .iter()
        .map(|c| c.iter().map(|&i| (first + i as u64, values[i])).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const RUNNING: [f64; 7] = [3.0, 9.0, 6.0, 2.0, 8.0, 5.0, 7.0];

    fn sorted(mut v: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        v.sort();
        v
    }

    fn running_lis() -> Vec<Vec<(u64, f64)>> {
        with_positions(&RUNNING, 1, &dp_enumerate(&RUNNING))
    }

    #[test]
    fn rising_lengths() {
        assert_eq!(dp_rising_lengths(&RUNNING), vec![1, 2, 2, 1, 3, 2, 3]);
        assert!(dp_rising_lengths(&[]).is_empty());
        assert_eq!(dp_rising_lengths(&[5.0, 4.0, 3.0]), vec![1, 1, 1]);
    }

    #[test]
    fn enumerates_the_four_running_lis() {
        // {3,6,7} {3,6,8} {2,5,7} {3,5,7}
        let expected = vec![vec![0, 2, 4], vec![0, 2, 6], vec![0, 5, 6], vec![3, 5, 6]];
        assert_eq!(sorted(dp_enumerate(&RUNNING)), expected);
        assert_eq!(dp_enumerate(&[1.0, 2.0, 3.0]), vec![vec![0, 1, 2]]);
        assert_eq!(sorted(dp_enumerate(&[2.0, 1.0])), vec![vec![0], vec![1]]);
        assert!(dp_enumerate(&[]).is_empty());
    }

    #[test]
    fn post_filter_extremes() {
        let set = running_lis();
        let max_gap = post_filter(&set, Criterion::new(Measure::Gap, Extremum::Max));
        let mut vals: Vec<Vec<f64>> = max_gap
            .iter()
            .map(|s| s.iter().map(|p| p.1).collect())
            .collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(vals, vec![vec![2.0, 5.0, 7.0], vec![3.0, 6.0, 8.0]]);

        let min_weight = post_filter(&set, Criterion::new(Measure::Weight, Extremum::Min));
        assert_eq!(min_weight, vec![vec![(4, 2.0), (6, 5.0), (7, 7.0)]]);

        let single = vec![vec![(1, 1.0)]];
        assert_eq!(
            post_filter(&single, Criterion::new(Measure::Width, Extremum::Max)),
            single
        );
        assert!(post_filter(&[], Criterion::new(Measure::Gap, Extremum::Min)).is_empty());
    }

    #[test]
    fn brute_feasible_slopes_and_ranges() {
        assert_eq!(
            brute_feasible(&RUNNING, Constraint::Slope(1.0)).unwrap(),
            vec![vec![0, 2, 4], vec![3, 5, 6]]
        );
        assert!(brute_feasible(&RUNNING, Constraint::Slope(2.0))
            .unwrap()
            .is_empty());
        let exact = Constraint::Range {
            min_index: 1,
            max_index: 1,
            min_value: 1.0,
            max_value: 1.0,
        };
        assert_eq!(
            brute_feasible(&[1.0, 2.0], exact).unwrap(),
            vec![vec![0, 1]]
        );
        assert_eq!(
            brute_feasible(&[0.0; 21], Constraint::Slope(0.0)),
            Err(OracleError::TooLong { len: 21, limit: 20 })
        );
    }

    #[test]
    fn dp_feasible_agrees_with_subset_search() {
        for c in [
            Constraint::Slope(0.0),
            Constraint::Slope(1.0),
            Constraint::Slope(2.0),
        ] {
            assert_eq!(
                dp_feasible(&RUNNING, c),
                brute_feasible(&RUNNING, c).unwrap()
            );
        }
    }
}
