//! The diagonal chessboard families `CB(r, n, k)` and the search for small
//! cyclic reorientations of their members.
//!
//! A chessboard fixes every 2×2 product, so a member is determined by its
//! first row and first column. Members are addressed by a *realization
//! code*: bits `0..n` hold the first row, bits `n..n+r-1` hold the first
//! column of rows `2..=r` (set bit = `-1`).

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::{Budget, Coverage};
use crate::chessboard::{Chessboard, Entry};
use crate::matroid::{ReorientationSet, Sign, SignMatrix};
use crate::travel::{bottom_travel, is_cyclic_travel, is_cyclic_under, top_travel};
use crate::{Error, Result};

/// Acyclic members listed individually in a [`LemmaReport`] before the list
/// is truncated.
pub const ENTRY_LIMIT: usize = 1 << 14;

const CHUNK: u64 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyParams {
    pub r: usize,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
}

impl FamilyParams {
    pub fn new(r: usize, k: usize, l: Option<usize>) -> Result<Self> {
        let p = FamilyParams { r, k, l };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let FamilyParams { r, k, l } = *self;
        if r < 2 {
            return Err(Error::input(format!("family rank must be at least 2, got {r}")));
        }
        match k {
            0 | 1 => Err(Error::input(format!("family parameter k must be at least 2, got {k}"))),
            2 => match l {
                None => Ok(()),
                Some(_) => Err(Error::input("the k=2 family takes no phase l")),
            },
            _ => {
                let Some(l) = l else { return Err(Error::input(format!("k={k} needs a phase l"))) };
                if 2 * (r - 1) < k - 1 {
                    return Err(Error::input(format!("k={k} too large for rank {r}")));
                }
                let s = self.s().expect("k >= 3");
                if !(1..=s).contains(&l) {
                    return Err(Error::input(format!("phase l={l} outside 1..={s}")));
                }
                let singles = self.single_rows().len();
                if singles != k - 2 {
                    return Err(Error::input(format!(
                        "r={r}, k={k}, l={l} gives {singles} single-block rows, need {}",
                        k - 2
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn n(&self) -> usize {
        if self.k == 2 {
            2 * (self.r - 1) + 1
        } else {
            2 * (self.r - 1) - (self.k - 2) + 1
        }
    }

    pub fn s(&self) -> Option<usize> {
        (self.k >= 3).then(|| (self.r - 1).div_ceil(self.k - 2))
    }

    /// Rows of the diagonal holding a single black cell: `i ≡ l (mod s)`.
    pub fn single_rows(&self) -> Vec<usize> {
        match (self.s(), self.l) {
            (Some(s), Some(l)) => (1..self.r).filter(|i| i % s == l % s).collect(),
            _ => Vec::new(),
        }
    }

    /// The range where the lemmas claim a cyclic reorientation with at most
    /// `k` columns: any rank for `k = 2`, `3 ≤ k ≤ ⌊r/2⌋` otherwise.
    pub fn in_lemma_range(&self) -> bool {
        self.k == 2 || (3..=self.r / 2).contains(&self.k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyBoard {
    pub params: FamilyParams,
    pub board: Chessboard,
}

/// The normalized staircase: rows `1..r` carry contiguous black runs of
/// width 2 (width 1 on single-block rows), the first starting at column 1.
pub fn build_board(p: FamilyParams) -> Result<FamilyBoard> {
    p.validate()?;
    let singles = p.single_rows();
    let mut cells = Vec::with_capacity(p.n() - 1);
    let mut j = 1;
    for i in 1..p.r {
        let width = if singles.contains(&i) { 1 } else { 2 };
        cells.extend((j..j + width).map(|c| (i, c)));
        j += width;
    }
    debug_assert_eq!(j, p.n());
    let board = Chessboard::from_black_cells(p.r - 1, p.n() - 1, cells)?;
    Ok(FamilyBoard { params: p, board })
}

/// The black cells given by the printed index formulas, before
/// normalization: `j = 2i − ⌈(i−1+l)/s⌉`, plus `j+1` unless
/// `i + s − l ≡ 0 (mod s)`. For `k = 2`: `j ∈ {2i−1, 2i}`.
pub fn raw_black_cells(p: FamilyParams) -> Vec<Entry> {
    let mut cells = Vec::new();
    for i in 1..p.r {
        match (p.s(), p.l) {
            (Some(s), Some(l)) => {
                let j = 2 * i - (i - 1 + l).div_ceil(s);
                cells.push((i, j));
                if (i + s - l) % s != 0 {
                    cells.push((i, j + 1));
                }
            }
            _ => cells.extend([(i, 2 * i - 1), (i, 2 * i)]),
        }
    }
    cells
}

/// How the printed formulas differ from the normalized board.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RawComparison {
    pub out_of_board: Vec<Entry>,
    pub missing: Vec<Entry>,
    pub extra: Vec<Entry>,
}

impl RawComparison {
    pub fn agrees(&self) -> bool {
        self.out_of_board.is_empty() && self.missing.is_empty() && self.extra.is_empty()
    }
}

pub fn compare_raw(p: FamilyParams) -> Result<RawComparison> {
    let normalized: BTreeSet<Entry> = build_board(p)?.board.black_cells().into_iter().collect();
    let (rows, cols) = (p.r - 1, p.n() - 1);
    let (inside, out_of_board): (Vec<Entry>, Vec<Entry>) =
        raw_black_cells(p).into_iter().partition(|&(i, j)| i <= rows && (1..=cols).contains(&j));
    let raw: BTreeSet<Entry> = inside.into_iter().collect();
    Ok(RawComparison {
        out_of_board,
        missing: normalized.difference(&raw).copied().collect(),
        extra: raw.difference(&normalized).copied().collect(),
    })
}

impl FamilyBoard {
    pub fn rows(&self) -> usize {
        self.params.r
    }

    pub fn cols(&self) -> usize {
        self.params.n()
    }

    pub fn free_bits(&self) -> usize {
        self.rows() + self.cols() - 1
    }

    pub fn realization_count(&self) -> u64 {
        1u64 << self.free_bits()
    }

    /// The member with the given realization code.
    pub fn realization(&self, code: u64) -> Result<SignMatrix> {
        if code >= self.realization_count() {
            return Err(Error::input(format!("realization code {code} out of range")));
        }
        let (r, n) = (self.rows(), self.cols());
        let bit = |b: usize| if code >> b & 1 == 1 { Sign::Minus } else { Sign::Plus };
        let mut e = vec![Sign::Plus; r * n];
        for j in 0..n {
            e[j] = bit(j);
        }
        for i in 1..r {
            e[i * n] = bit(n + i - 1);
            for j in 1..n {
                let color = if self.board.is_black(i, j) { Sign::Minus } else { Sign::Plus };
                e[i * n + j] = color * e[(i - 1) * n + j - 1] * e[(i - 1) * n + j] * e[i * n + j - 1];
            }
        }
        SignMatrix::new(r, n, e)
    }

    /// The realization code of `m`, if `m` is a member.
    pub fn code_of(&self, m: &SignMatrix) -> Option<u64> {
        if (m.rows(), m.cols()) != (self.rows(), self.cols()) || Chessboard::of(m).ok()? != self.board {
            return None;
        }
        let n = self.cols();
        let mut code = 0u64;
        for j in 1..=n {
            code |= u64::from(m.get(1, j) == Sign::Minus) << (j - 1);
        }
        for i in 2..=self.rows() {
            code |= u64::from(m.get(i, 1) == Sign::Minus) << (n + i - 2);
        }
        Some(code)
    }

    pub fn realizations(&self) -> impl Iterator<Item = SignMatrix> + '_ {
        (0..self.realization_count()).map(|c| self.realization(c).expect("code in range"))
    }
}

/// Smallest `S` (by size, then lexicographically) with `|S| ≤ budget` whose
/// reorientation is cyclic; `∅` when `m` already is.
pub fn min_cyclic_reorientation(m: &SignMatrix, budget: usize) -> Option<ReorientationSet> {
    let n = m.cols();
    let mut flips = vec![Sign::Plus; n];
    for size in 0..=budget.min(n) {
        for combo in (1..=n).combinations(size) {
            for &j in &combo {
                flips[j - 1] = Sign::Minus;
            }
            let hit = is_cyclic_under(m, &flips);
            for &j in &combo {
                flips[j - 1] = Sign::Plus;
            }
            if hit {
                return Some(combo.into_iter().collect());
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

/// Acyclic members sharing a (TT, BT) pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeSummary {
    pub top: Vec<usize>,
    pub bottom: Vec<usize>,
    pub count: u64,
    pub min_sets: BTreeSet<ReorientationSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub params: FamilyParams,
    pub mode: Mode,
    pub coverage: Coverage,
    pub cyclic: u64,
    pub acyclic: u64,
    pub max_set_size: usize,
    pub shapes: Vec<ShapeSummary>,
    /// `(code, S)` for acyclic members in code order, at most [`ENTRY_LIMIT`].
    pub entries: Vec<(u64, ReorientationSet)>,
    pub entries_complete: bool,
    /// Codes of acyclic members with no cyclic reorientation of size `≤ k`.
    pub counterexamples: Vec<u64>,
}

impl LemmaReport {
    pub fn verified(&self) -> bool {
        self.coverage.is_complete() && self.counterexamples.is_empty()
    }
}

enum Outcome {
    Cyclic,
    Acyclic { top: Vec<usize>, bottom: Vec<usize>, set: Option<ReorientationSet> },
}

fn examine(fb: &FamilyBoard, code: u64) -> Result<Outcome> {
    let m = fb.realization(code)?;
    if is_cyclic_travel(&m)? {
        return Ok(Outcome::Cyclic);
    }
    let set = min_cyclic_reorientation(&m, fb.params.k);
    if let Some(s) = &set {
        if !is_cyclic_travel(&m.reorient(s)?)? {
            return Err(Error::Consistency(format!("reorientation {s} of member {code} is not cyclic")));
        }
    }
    Ok(Outcome::Acyclic { top: top_travel(&m).breakpoints, bottom: bottom_travel(&m).breakpoints, set })
}

/// Checks every member (or a seeded sample) of the family: each one is
/// cyclic or has a cyclic reorientation with at most `k` columns.
pub fn verify_lemma_family(p: FamilyParams, mode: Mode, budget: &Budget) -> Result<LemmaReport> {
    let fb = build_board(p)?;
    let codes: Box<dyn Fn(u64) -> u64 + Sync> = match mode {
        Mode::Exhaustive => Box::new(|i| i),
        Mode::Sampled { seed, count } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let total = fb.realization_count();
            let drawn: Vec<u64> = (0..count).map(|_| rng.gen_range(0..total)).collect();
            Box::new(move |i| drawn[i as usize])
        }
    };
    let total = match mode {
        Mode::Exhaustive => fb.realization_count(),
        Mode::Sampled { count, .. } => count,
    };
    let limit = budget.case_limit(total);

    let mut report = LemmaReport {
        params: p,
        mode,
        coverage: Coverage { checked: 0, total },
        cyclic: 0,
        acyclic: 0,
        max_set_size: 0,
        shapes: Vec::new(),
        entries: Vec::new(),
        entries_complete: true,
        counterexamples: Vec::new(),
    };
    let mut shapes: BTreeMap<(Vec<usize>, Vec<usize>), ShapeSummary> = BTreeMap::new();
    let mut entries: BTreeMap<u64, ReorientationSet> = BTreeMap::new();
    let mut counterexamples: BTreeSet<u64> = BTreeSet::new();

    let mut start = 0;
    while start < limit && !budget.expired() {
        let end = (start + CHUNK).min(limit);
        let outcomes: Vec<(u64, Outcome)> = (start..end)
            .into_par_iter()
            .map(|i| {
                let code = codes(i);
                examine(&fb, code).map(|o| (code, o))
            })
            .collect::<Result<_>>()?;
        for (code, o) in outcomes {
            match o {
                Outcome::Cyclic => report.cyclic += 1,
                Outcome::Acyclic { top, bottom, set } => {
                    report.acyclic += 1;
                    let shape = shapes.entry((top.clone(), bottom.clone())).or_insert_with(|| ShapeSummary {
                        top,
                        bottom,
                        count: 0,
                        min_sets: BTreeSet::new(),
                    });
                    shape.count += 1;
                    match set {
                        Some(s) => {
                            report.max_set_size = report.max_set_size.max(s.len());
                            shape.min_sets.insert(s.clone());
                            if entries.len() < ENTRY_LIMIT || entries.contains_key(&code) {
                                entries.insert(code, s);
                            } else {
                                report.entries_complete = false;
                            }
                        }
                        None => {
                            counterexamples.insert(code);
                        }
                    }
                }
            }
        }
        report.coverage.checked = end;
        start = end;
    }

    report.shapes = shapes.into_values().collect();
    report.entries = entries.into_iter().collect();
    report.counterexamples = counterexamples.into_iter().collect();
    Ok(report)
}
