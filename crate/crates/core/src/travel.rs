//! Top, bottom and plain travels through a sign matrix.
//!
//! A travel is a staircase of row segments. Top and plain travels start at
//! `a[1][1]` and move right, dropping one row at each breakpoint; the segment
//! of row `i` runs from column `j_{i-1}` (shared with row `i-1`) to `j_i`.
//! The bottom travel is the mirror image: it starts at `a[r][n]`, moves left
//! and climbs one row at each breakpoint.
//!
//! The greedy top travel keeps going while the sign equals the segment's
//! first entry and descends at the first change. In the last row a change
//! cannot descend, so the travel stops on the entry before it; the matroid is
//! cyclic exactly when that happens.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::matroid::{ReorientationSet, Sign, SignMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TravelKind {
    Plain,
    Top,
    Bottom,
}

/// Row `i` of a top or plain travel ends at `breakpoints[i-1]`; row `r+1-i`
/// of a bottom travel ends at `breakpoints[i-1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Travel {
    pub kind: TravelKind,
    pub breakpoints: Vec<usize>,
}

impl Travel {
    pub fn rows_visited(&self) -> usize {
        self.breakpoints.len()
    }

    /// All entries of the travel in visiting order, for a matrix of the
    /// given shape. Descent entries appear once.
    pub fn entries(&self, rows: usize, cols: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        match self.kind {
            TravelKind::Top | TravelKind::Plain => {
                let mut start = 1;
                for (t, &end) in self.breakpoints.iter().enumerate() {
                    out.extend((start..=end).map(|j| (t + 1, j)));
                    start = end;
                }
            }
            TravelKind::Bottom => {
                let mut start = cols;
                for (t, &end) in self.breakpoints.iter().enumerate() {
                    out.extend((end..=start).rev().map(|j| (rows - t, j)));
                    start = end;
                }
            }
        }
        out
    }

    /// Whether this travel ends in the position that certifies a cyclic
    /// matroid: a top travel stopping in row `r` before column `n`, or a
    /// bottom travel stopping in row 1 after column 1.
    pub fn ends_cyclic(&self, rows: usize, cols: usize) -> bool {
        let last = *self.breakpoints.last().expect("travels are nonempty");
        match self.kind {
            TravelKind::Top => self.rows_visited() == rows && last < cols,
            TravelKind::Bottom => self.rows_visited() == rows && last > 1,
            TravelKind::Plain => false,
        }
    }
}

/// Greedy walk from `a[1][1]`, reading entry `(i, j)` as `a[i][j]·flips[j-1]`.
fn greedy_top(m: &SignMatrix, flips: Option<&[Sign]>) -> (Vec<usize>, bool) {
    let (r, n) = (m.rows(), m.cols());
    let at = |i: usize, j: usize| match flips {
        Some(f) => m.get(i, j) * f[j - 1],
        None => m.get(i, j),
    };
    let mut breakpoints = Vec::with_capacity(r);
    let mut start = 1;
    for i in 1..=r {
        let reference = at(i, start);
        let change = (start + 1..=n).find(|&j| at(i, j) != reference);
        match change {
            None => {
                breakpoints.push(n);
                return (breakpoints, false);
            }
            Some(j) if i == r => {
                breakpoints.push(j - 1);
                return (breakpoints, true);
            }
            Some(j) => {
                breakpoints.push(j);
                start = j;
            }
        }
    }
    unreachable!("the last row always terminates the walk")
}

/// The top travel: maximal greedy path from `a[1][1]`.
pub fn top_travel(m: &SignMatrix) -> Travel {
    Travel { kind: TravelKind::Top, breakpoints: greedy_top(m, None).0 }
}

/// The bottom travel: greedy path from `a[r][n]` moving left and up.
pub fn bottom_travel(m: &SignMatrix) -> Travel {
    let (r, n) = (m.rows(), m.cols());
    let mut breakpoints = Vec::with_capacity(r);
    let mut start = n;
    for i in (1..=r).rev() {
        let reference = m.get(i, start);
        let change = (1..start).rev().find(|&j| m.get(i, j) != reference);
        match change {
            None => {
                breakpoints.push(1);
                break;
            }
            Some(j) if i == 1 => {
                breakpoints.push(j + 1);
                break;
            }
            Some(j) => {
                breakpoints.push(j);
                start = j;
            }
        }
    }
    Travel { kind: TravelKind::Bottom, breakpoints }
}

/// Travel-based cyclicity test. The top and bottom travel verdicts are
/// computed independently and must agree.
pub fn is_cyclic_travel(m: &SignMatrix) -> Result<bool> {
    let (r, n) = (m.rows(), m.cols());
    let top = top_travel(m).ends_cyclic(r, n);
    let bottom = bottom_travel(m).ends_cyclic(r, n);
    if top != bottom {
        return Err(Error::Consistency(format!(
            "top travel says cyclic={top}, bottom travel says cyclic={bottom} on\n{m}"
        )));
    }
    Ok(top)
}

/// Top-travel cyclicity of `m` reoriented by `flips`, without building the
/// reoriented matrix.
pub fn is_cyclic_under(m: &SignMatrix, flips: &[Sign]) -> bool {
    debug_assert_eq!(flips.len(), m.cols());
    greedy_top(m, Some(flips)).1
}

/// Whether `breakpoints` describe a plain travel of an `r × n` matrix:
/// `2 ≤ j_1 < … < j_{s-1} ≤ j_s = n` with `s ≤ r`.
pub fn is_plain_breakpoints(breakpoints: &[usize], rows: usize, cols: usize) -> bool {
    let s = breakpoints.len();
    if s == 0 || s > rows || breakpoints[s - 1] != cols {
        return false;
    }
    let inner = &breakpoints[..s - 1];
    inner.iter().all(|&j| (2..=cols).contains(&j)) && inner.windows(2).all(|w| w[0] < w[1])
}

/// Every plain travel of `m`, in lexicographic breakpoint order.
pub fn plain_travels(m: &SignMatrix) -> Vec<Travel> {
    let (r, n) = (m.rows(), m.cols());
    let mut out: Vec<Travel> = (1..=r)
        .flat_map(|s| {
            (2..=n).combinations(s - 1).map(move |mut bps| {
                bps.push(n);
                Travel { kind: TravelKind::Plain, breakpoints: bps }
            })
        })
        .collect();
    out.sort();
    out
}

/// The acyclic reorientation class mapped to `t`: the unique `S` with
/// `1 ∉ S` whose reorientation has `t` as its top travel.
///
/// The column multipliers are forced segment by segment: constant along a
/// segment, a sign change at each breakpoint, and column 1 fixed.
pub fn travel_to_reorientation(m: &SignMatrix, t: &Travel) -> Result<ReorientationSet> {
    let (r, n) = (m.rows(), m.cols());
    if t.kind == TravelKind::Bottom || !is_plain_breakpoints(&t.breakpoints, r, n) {
        return Err(Error::input(format!("{:?} is not a plain travel of a {r}x{n} matrix", t.breakpoints)));
    }
    let mut sigma = vec![Sign::Plus; n + 1];
    let s = t.breakpoints.len();
    let mut start = 1;
    for (idx, &end) in t.breakpoints.iter().enumerate() {
        let i = idx + 1;
        let reference = m.get(i, start) * sigma[start];
        let last_row = i == s;
        for j in start + 1..=end {
            let want = if j == end && !last_row { -reference } else { reference };
            sigma[j] = want * m.get(i, j);
        }
        start = end;
    }
    Ok((2..=n).filter(|&j| sigma[j] == Sign::Minus).collect())
}

/// Oracle: acyclic reorientation classes by brute force, each represented by
/// the member of `{S, complement}` that omits column 1.
pub fn acyclic_reorientation_classes(m: &SignMatrix) -> Vec<ReorientationSet> {
    let n = m.cols();
    (0u64..1 << (n - 1))
        .map(|mask| (2..=n).filter(|j| mask >> (j - 2) & 1 == 1).collect::<ReorientationSet>())
        .filter(|s| m.reorient(s).expect("columns in range").is_acyclic_bruteforce())
        .collect()
}
