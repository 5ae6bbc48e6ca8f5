//! The `(r-1) × (n-1)` board of 2×2 entry products of a sign matrix.

use std::collections::BTreeSet;
use std::fmt;

use crate::matroid::{Sign, SignMatrix};
use crate::{Error, Result};

/// Cell `s(i, j)` is black iff `a[i][j]·a[i][j+1]·a[i+1][j]·a[i+1][j+1] = -1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chessboard {
    rows: usize,
    cols: usize,
    black: Vec<bool>,
}

/// A matrix entry position `(i, j)`, 1-based.
pub type Entry = (usize, usize);

impl Chessboard {
    pub fn from_black_cells(rows: usize, cols: usize, cells: impl IntoIterator<Item = Entry>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::input("chessboard needs at least one row and column"));
        }
        let mut black = vec![false; rows * cols];
        for (i, j) in cells {
            if !(1..=rows).contains(&i) || !(1..=cols).contains(&j) {
                return Err(Error::input(format!("cell ({i},{j}) outside a {rows}x{cols} board")));
            }
            black[(i - 1) * cols + j - 1] = true;
        }
        Ok(Chessboard { rows, cols, black })
    }

    pub fn of(m: &SignMatrix) -> Result<Self> {
        if m.rows() < 2 || m.cols() < 2 {
            return Err(Error::input(format!(
                "chessboard needs at least a 2x2 matrix, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let (rows, cols) = (m.rows() - 1, m.cols() - 1);
        let mut black = Vec::with_capacity(rows * cols);
        for i in 1..=rows {
            for j in 1..=cols {
                let p = m.get(i, j) * m.get(i, j + 1) * m.get(i + 1, j) * m.get(i + 1, j + 1);
                black.push(p == Sign::Minus);
            }
        }
        Ok(Chessboard { rows, cols, black })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Out-of-board cells read as white, which keeps the UD/LD formulas
    /// uniform at the edges.
    pub fn is_black(&self, i: usize, j: usize) -> bool {
        (1..=self.rows).contains(&i) && (1..=self.cols).contains(&j) && self.black[(i - 1) * self.cols + j - 1]
    }

    pub fn black_cells(&self) -> Vec<Entry> {
        let mut out = Vec::new();
        for i in 1..=self.rows {
            for j in 1..=self.cols {
                if self.is_black(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn black_count(&self) -> usize {
        self.black.iter().filter(|&&b| b).count()
    }

    /// Per-row black runs `(first, last)` if the black cells form a monotone
    /// staircase: every row holds one nonempty contiguous run and each run
    /// starts one column after the previous row's run ends.
    pub fn staircase_runs(&self) -> Option<Vec<(usize, usize)>> {
        let mut runs = Vec::with_capacity(self.rows);
        for i in 1..=self.rows {
            let cols: Vec<usize> = (1..=self.cols).filter(|&j| self.is_black(i, j)).collect();
            let (&first, &last) = (cols.first()?, cols.last()?);
            if last - first + 1 != cols.len() {
                return None;
            }
            if let Some(&(_, prev_last)) = runs.last() {
                if first != prev_last + 1 {
                    return None;
                }
            }
            runs.push((first, last));
        }
        Some(runs)
    }

    /// Builds the board rows as strings of `#` (black) and `.` (white).
    pub fn to_lines(&self) -> Vec<String> {
        (1..=self.rows)
            .map(|i| (1..=self.cols).map(|j| if self.is_black(i, j) { '#' } else { '.' }).collect())
            .collect()
    }
}

impl fmt::Display for Chessboard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.to_lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// The entries touching the black diagonal from above (`UD`) and below (`LD`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalSets {
    pub upper: BTreeSet<Entry>,
    pub lower: BTreeSet<Entry>,
}

impl DiagonalSets {
    pub fn intersection(&self) -> BTreeSet<Entry> {
        self.upper.intersection(&self.lower).copied().collect()
    }
}

/// `UD = {(i,j) : s(i,j) or s(i,j-1) black}`,
/// `LD = {(i,j) : s(i-1,j-1) or s(i-1,j) black}`, over the `(rows+1) × (cols+1)`
/// entries of the underlying matrix.
pub fn diagonal_sets(b: &Chessboard) -> Result<DiagonalSets> {
    if b.staircase_runs().is_none() {
        return Err(Error::Contract("black cells do not form a staircase diagonal".into()));
    }
    let mut upper = BTreeSet::new();
    let mut lower = BTreeSet::new();
    for i in 1..=b.rows + 1 {
        for j in 1..=b.cols + 1 {
            if b.is_black(i, j) || (j > 1 && b.is_black(i, j - 1)) {
                upper.insert((i, j));
            }
            if i > 1 && ((j > 1 && b.is_black(i - 1, j - 1)) || b.is_black(i - 1, j)) {
                lower.insert((i, j));
            }
        }
    }
    Ok(DiagonalSets { upper, lower })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::ReorientationSet;

    #[test]
    fn all_plus_is_all_white() {
        let b = Chessboard::of(&SignMatrix::all_plus(3, 4).unwrap()).unwrap();
        assert_eq!((b.rows(), b.cols()), (2, 3));
        assert_eq!(b.black_count(), 0);
    }

    #[test]
    fn single_minus_gives_single_black() {
        let b = Chessboard::of(&"++\n+-".parse().unwrap()).unwrap();
        assert_eq!(b.black_cells(), vec![(1, 1)]);
    }

    #[test]
    fn too_small_is_rejected() {
        assert!(Chessboard::of(&SignMatrix::all_plus(1, 4).unwrap()).is_err());
        assert!(Chessboard::of(&SignMatrix::all_plus(3, 1).unwrap()).is_err());
    }

    #[test]
    fn invariant_under_every_reorientation_at_3x4() {
        let subsets: Vec<ReorientationSet> =
            (0u32..16).map(|mask| (1..=4).filter(|j| mask >> (j - 1) & 1 == 1).collect()).collect();
        for a in SignMatrix::all_of_shape(3, 4) {
            let board = Chessboard::of(&a).unwrap();
            for s in &subsets {
                assert_eq!(Chessboard::of(&a.reorient(s).unwrap()).unwrap(), board);
            }
        }
    }

    #[test]
    fn invariant_under_row_negation() {
        for a in SignMatrix::all_of_shape(3, 3) {
            let board = Chessboard::of(&a).unwrap();
            for i in 1..=3 {
                assert_eq!(Chessboard::of(&a.negate_row(i).unwrap()).unwrap(), board);
            }
        }
    }

    #[test]
    fn diagonal_sets_of_rank_three_step_board() {
        let b = Chessboard::from_black_cells(2, 4, [(1, 1), (1, 2), (2, 3), (2, 4)]).unwrap();
        let d = diagonal_sets(&b).unwrap();
        for e in [(1, 1), (1, 2), (1, 3)] {
            assert!(d.upper.contains(&e));
        }
        for e in [(2, 1), (2, 2), (2, 3)] {
            assert!(d.lower.contains(&e));
        }
        let expect_upper: BTreeSet<Entry> = [(1, 1), (1, 2), (1, 3), (2, 3), (2, 4), (2, 5)].into();
        let expect_lower: BTreeSet<Entry> = [(2, 1), (2, 2), (2, 3), (3, 3), (3, 4), (3, 5)].into();
        assert_eq!(d.upper, expect_upper);
        assert_eq!(d.lower, expect_lower);
        assert_eq!(d.intersection(), [(2, 3)].into());
    }

    #[test]
    fn diagonal_sets_reject_non_staircases() {
        let white = Chessboard::from_black_cells(2, 4, []).unwrap();
        assert!(matches!(diagonal_sets(&white), Err(Error::Contract(_))));
        let gap = Chessboard::from_black_cells(2, 4, [(1, 1), (2, 3)]).unwrap();
        assert!(diagonal_sets(&gap).is_err());
        let split = Chessboard::from_black_cells(2, 4, [(1, 1), (1, 3), (2, 4)]).unwrap();
        assert!(diagonal_sets(&split).is_err());
    }
}
