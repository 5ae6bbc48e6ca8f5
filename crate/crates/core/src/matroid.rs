//! Lawrence oriented matroids as ±1 matrices.
//!
//! An `r × n` sign matrix `a` encodes the rank-`r` oriented matroid on the
//! columns `1..=n` whose chirotope on an increasing basis `j_1 < … < j_r` is
//! `a[1][j_1] · a[2][j_2] ⋯ a[r][j_r]`. All indices in the public API are
//! 1-based, rows and columns alike.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i8(v: i8) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }

    /// `(-1)^e`.
    pub fn parity(e: usize) -> Sign {
        if e.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.to_i8())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = i8::deserialize(d)?;
        Sign::from_i8(v).ok_or_else(|| serde::de::Error::custom(format!("sign must be ±1, got {v}")))
    }
}

/// An immutable `rows × cols` matrix of signs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Sign>,
}

impl SignMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Sign>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::input("sign matrix needs at least one row and one column"));
        }
        if entries.len() != rows * cols {
            return Err(Error::input(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(SignMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: &[Vec<i8>]) -> Result<Self> {
        let r = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(format!("row {} has {} entries, expected {n}", i + 1, row.len())));
            }
            for &v in row {
                entries.push(Sign::from_i8(v).ok_or_else(|| Error::input(format!("entry {v} is not ±1")))?);
            }
        }
        SignMatrix::new(r, n, entries)
    }

    pub fn all_plus(rows: usize, cols: usize) -> Result<Self> {
        SignMatrix::new(rows, cols, vec![Sign::Plus; rows * cols])
    }

    /// The matrix whose entry `(i, j)` is bit `(i-1)*cols + (j-1)` of `bits`
    /// (set bit = `-1`). Used by the exhaustive enumerations.
    pub fn from_bits(rows: usize, cols: usize, bits: u64) -> Result<Self> {
        if rows * cols > 64 {
            return Err(Error::input("bit encoding supports at most 64 entries"));
        }
        let entries = (0..rows * cols)
            .map(|b| if bits >> b & 1 == 1 { Sign::Minus } else { Sign::Plus })
            .collect();
        SignMatrix::new(rows, cols, entries)
    }

    /// Every sign matrix of the given shape, in increasing bit order.
    pub fn all_of_shape(rows: usize, cols: usize) -> impl Iterator<Item = SignMatrix> {
        let count = 1u64 << (rows * cols);
        (0..count).map(move |bits| SignMatrix::from_bits(rows, cols, bits).expect("shape checked by caller"))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry `a[i][j]`, 1-based.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Sign {
        debug_assert!((1..=self.rows).contains(&i) && (1..=self.cols).contains(&j));
        self.entries[(i - 1) * self.cols + (j - 1)]
    }

    pub fn row(&self, i: usize) -> &[Sign] {
        &self.entries[(i - 1) * self.cols..i * self.cols]
    }

    /// Negates exactly the columns in `s`.
    pub fn reorient(&self, s: &ReorientationSet) -> Result<SignMatrix> {
        s.check_within(self.cols)?;
        let mut entries = self.entries.clone();
        for &j in s.iter() {
            for i in 0..self.rows {
                let e = &mut entries[i * self.cols + j - 1];
                *e = -*e;
            }
        }
        Ok(SignMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn negate_row(&self, i: usize) -> Result<SignMatrix> {
        if !(1..=self.rows).contains(&i) {
            return Err(Error::input(format!("row {i} out of range 1..={}", self.rows)));
        }
        let mut entries = self.entries.clone();
        for e in &mut entries[(i - 1) * self.cols..i * self.cols] {
            *e = -*e;
        }
        Ok(SignMatrix { rows: self.rows, cols: self.cols, entries })
    }

    /// The matrix turned by 180 degrees: `a'[i][j] = a[r+1-i][n+1-j]`.
    /// It represents the same oriented matroid with the column order reversed.
    pub fn rotated(&self) -> SignMatrix {
        let mut entries = self.entries.clone();
        entries.reverse();
        SignMatrix { rows: self.rows, cols: self.cols, entries }
    }

    /// `χ(B) = ∏ a[i][j_i]` for an increasing basis `j_1 < … < j_r`.
    pub fn chirotope(&self, basis: &[usize]) -> Result<Sign> {
        if basis.len() != self.rows {
            return Err(Error::input(format!("basis must have {} columns, got {}", self.rows, basis.len())));
        }
        check_increasing(basis, self.cols)?;
        Ok(self.chirotope_unchecked(basis))
    }

    fn chirotope_unchecked(&self, basis: &[usize]) -> Sign {
        basis
            .iter()
            .enumerate()
            .fold(Sign::Plus, |acc, (i, &j)| acc * self.get(i + 1, j))
    }

    /// Signed circuit on an `(r+1)`-element support.
    ///
    /// The `i`-th support element gets `(-1)^i · χ(support ∖ j_i)`, then the
    /// whole circuit is scaled so the first element is positive.
    pub fn circuit_signs(&self, support: &[usize]) -> Result<SignedCircuit> {
        if support.len() != self.rows + 1 {
            return Err(Error::input(format!(
                "circuit support must have {} columns, got {}",
                self.rows + 1,
                support.len()
            )));
        }
        check_increasing(support, self.cols)?;
        Ok(self.circuit_unchecked(support))
    }

    fn circuit_unchecked(&self, support: &[usize]) -> SignedCircuit {
        let mut rest = Vec::with_capacity(self.rows);
        let mut signs: Vec<Sign> = (0..support.len())
            .map(|i| {
                rest.clear();
                rest.extend(support.iter().enumerate().filter(|&(t, _)| t != i).map(|(_, &j)| j));
                Sign::parity(i + 1) * self.chirotope_unchecked(&rest)
            })
            .collect();
        if signs[0] == Sign::Minus {
            signs.iter_mut().for_each(|s| *s = -*s);
        }
        SignedCircuit { support: support.to_vec(), signs }
    }

    /// One canonical circuit per `(r+1)`-subset of columns, in lexicographic
    /// support order. Empty when `n ≤ r`.
    pub fn enumerate_circuits(&self) -> Vec<SignedCircuit> {
        (1..=self.cols)
            .combinations(self.rows + 1)
            .map(|support| self.circuit_unchecked(&support))
            .collect()
    }

    /// Oracle: no circuit (of either orientation) is uniformly signed.
    pub fn is_acyclic_bruteforce(&self) -> bool {
        (1..=self.cols)
            .combinations(self.rows + 1)
            .all(|support| !self.circuit_unchecked(&support).is_uniform())
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.rows {
            let line: String = self.row(i).iter().map(|s| s.as_char()).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

impl FromStr for SignMatrix {
    type Err = Error;

    /// `r` lines of `n` characters from `{+,-}`. Blank lines are ignored,
    /// ragged lines are rejected.
    fn from_str(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut cols = None;
        let mut rows = 0;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let row: Vec<Sign> = line
                .chars()
                .map(|c| match c {
                    '+' => Ok(Sign::Plus),
                    '-' => Ok(Sign::Minus),
                    other => Err(Error::Parse { line: lineno + 1, msg: format!("unexpected character {other:?}") }),
                })
                .collect::<Result<_>>()?;
            match cols {
                None => cols = Some(row.len()),
                Some(n) if n != row.len() => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: format!("ragged row: {} entries, expected {n}", row.len()),
                    })
                }
                _ => {}
            }
            entries.extend(row);
            rows += 1;
        }
        let cols = cols.ok_or(Error::Parse { line: 0, msg: "empty matrix".into() })?;
        SignMatrix::new(rows, cols, entries)
    }
}

fn check_increasing(cols: &[usize], n: usize) -> Result<()> {
    if cols.iter().any(|&j| j == 0 || j > n) {
        return Err(Error::input(format!("column index out of range 1..={n}: {cols:?}")));
    }
    if cols.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::input(format!("column indices must be strictly increasing: {cols:?}")));
    }
    Ok(())
}

/// A signed circuit in canonical form (smallest support element positive).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedCircuit {
    pub support: Vec<usize>,
    pub signs: Vec<Sign>,
}

impl SignedCircuit {
    pub fn is_uniform(&self) -> bool {
        self.signs.iter().all_equal()
    }

    pub fn positive(&self) -> impl Iterator<Item = usize> + '_ {
        self.support.iter().zip(&self.signs).filter(|(_, s)| s.is_plus()).map(|(&j, _)| j)
    }

    pub fn negative(&self) -> impl Iterator<Item = usize> + '_ {
        self.support.iter().zip(&self.signs).filter(|(_, s)| !s.is_plus()).map(|(&j, _)| j)
    }
}

/// A set `S` of 1-based column indices to negate.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReorientationSet(BTreeSet<usize>);

impl ReorientationSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.contains(&j)
    }

    pub fn iter(&self) -> impl Iterator<Item = &usize> {
        self.0.iter()
    }

    pub fn symmetric_difference(&self, other: &ReorientationSet) -> ReorientationSet {
        ReorientationSet(self.0.symmetric_difference(&other.0).copied().collect())
    }

    /// Column `j`'s multiplier under this reorientation, indexed `0..n`.
    pub fn flips(&self, n: usize) -> Vec<Sign> {
        (1..=n).map(|j| if self.contains(j) { Sign::Minus } else { Sign::Plus }).collect()
    }

    pub fn check_within(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&j| j == 0 || j > n) {
            Some(j) => Err(Error::input(format!("reorientation column {j} out of range 1..={n}"))),
            None => Ok(()),
        }
    }
}

impl FromIterator<usize> for ReorientationSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        ReorientationSet(iter.into_iter().collect())
    }
}

impl fmt::Display for ReorientationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(text: &str) -> SignMatrix {
        text.parse().unwrap()
    }

    #[test]
    fn reorient_empty_is_identity() {
        let a = m("+-+\n--+\n");
        assert_eq!(a.reorient(&ReorientationSet::empty()).unwrap(), a);
    }

    #[test]
    fn reorient_is_involution() {
        let a = m("+-+\n--+\n");
        let s: ReorientationSet = [2].into_iter().collect();
        assert_eq!(a.reorient(&s).unwrap().reorient(&s).unwrap(), a);
    }

    #[test]
    fn reorient_single_column_of_all_plus() {
        let a = SignMatrix::all_plus(2, 3).unwrap();
        let b = a.reorient(&[1].into_iter().collect()).unwrap();
        assert_eq!(b, m("-++\n-++"));
    }

    #[test]
    fn reorient_rejects_bad_column() {
        let a = SignMatrix::all_plus(2, 3).unwrap();
        assert!(a.reorient(&[4].into_iter().collect()).is_err());
        assert!(a.reorient(&[0].into_iter().collect()).is_err());
    }

    #[test]
    fn chirotope_examples() {
        let a = SignMatrix::all_plus(3, 5).unwrap();
        assert_eq!(a.chirotope(&[1, 3, 5]).unwrap(), Sign::Plus);
        let b = m("+++\n++-");
        assert_eq!(b.chirotope(&[1, 3]).unwrap(), Sign::Minus);
        assert_eq!(b.chirotope(&[1, 2]).unwrap(), Sign::Plus);
        assert!(b.chirotope(&[3, 1]).is_err());
        assert!(b.chirotope(&[1]).is_err());
        assert!(b.chirotope(&[2, 2]).is_err());
    }

    #[test]
    fn chirotope_flips_iff_column_in_basis() {
        for a in SignMatrix::all_of_shape(2, 3) {
            for basis in (1..=3).combinations(2) {
                for j in 1..=3 {
                    let b = a.reorient(&[j].into_iter().collect()).unwrap();
                    let expect = if basis.contains(&j) { -a.chirotope(&basis).unwrap() } else { a.chirotope(&basis).unwrap() };
                    assert_eq!(b.chirotope(&basis).unwrap(), expect);
                }
            }
        }
    }

    #[test]
    fn all_plus_circuits_alternate() {
        let a = SignMatrix::all_plus(3, 5).unwrap();
        for c in a.enumerate_circuits() {
            let expect: Vec<Sign> = (0..4).map(Sign::parity).collect();
            assert_eq!(c.signs, expect);
        }
    }

    #[test]
    fn rank_one_mixed_row_gives_uniform_circuit() {
        let c = m("+-").circuit_signs(&[1, 2]).unwrap();
        assert_eq!(c.signs, vec![Sign::Plus, Sign::Plus]);
        let c = m("++").circuit_signs(&[1, 2]).unwrap();
        assert_eq!(c.signs, vec![Sign::Plus, Sign::Minus]);
    }

    #[test]
    fn one_by_two_plus_plus_is_acyclic() {
        // Two parallel vectors pointing the same way.
        assert!(m("++").is_acyclic_bruteforce());
        assert!(!m("+-").is_acyclic_bruteforce());
    }

    #[test]
    fn consecutive_sign_relation_holds_exhaustively() {
        for (r, n) in [(1, 3), (2, 4), (3, 5)] {
            for a in SignMatrix::all_of_shape(r, n) {
                for c in a.enumerate_circuits() {
                    for i in 1..=r {
                        let lhs = c.signs[i - 1] * c.signs[i];
                        let rhs = -(a.get(i, c.support[i]) * a.get(i, c.support[i - 1]));
                        assert_eq!(lhs, rhs, "{a}circuit {:?} position {i}", c.support);
                    }
                }
            }
        }
    }

    #[test]
    fn circuit_counts() {
        assert_eq!(SignMatrix::all_plus(2, 3).unwrap().enumerate_circuits().len(), 1);
        assert_eq!(SignMatrix::all_plus(3, 5).unwrap().enumerate_circuits().len(), 5);
        let c = SignMatrix::all_plus(2, 4).unwrap().enumerate_circuits();
        assert_eq!(c.len(), 4);
        assert!(c.iter().all(|c| c.support.len() == 3));
        assert!(SignMatrix::all_plus(3, 3).unwrap().enumerate_circuits().is_empty());
    }

    #[test]
    fn circuit_signs_rejects_wrong_support() {
        let a = SignMatrix::all_plus(2, 4).unwrap();
        assert!(a.circuit_signs(&[1, 2]).is_err());
        assert!(a.circuit_signs(&[1, 2, 5]).is_err());
    }

    #[test]
    fn all_plus_is_acyclic() {
        for (r, n) in [(1, 2), (2, 3), (2, 5), (3, 4), (3, 6)] {
            assert!(SignMatrix::all_plus(r, n).unwrap().is_acyclic_bruteforce());
        }
    }

    #[test]
    fn text_round_trip_and_errors() {
        let a = m("+-+\n-++\n");
        assert_eq!(a.to_text().parse::<SignMatrix>().unwrap(), a);
        assert!(matches!("++\n+".parse::<SignMatrix>(), Err(Error::Parse { line: 2, .. })));
        assert!("+x".parse::<SignMatrix>().is_err());
        assert!("".parse::<SignMatrix>().is_err());
    }

    #[test]
    fn rotation_preserves_acyclicity() {
        for a in SignMatrix::all_of_shape(2, 4) {
            assert_eq!(a.is_acyclic_bruteforce(), a.rotated().is_acyclic_bruteforce());
        }
    }

    #[test]
    fn symmetric_difference_composes() {
        let a = m("+-+-\n--++\n");
        let s: ReorientationSet = [1, 3].into_iter().collect();
        let t: ReorientationSet = [3, 4].into_iter().collect();
        let lhs = a.reorient(&s).unwrap().reorient(&t).unwrap();
        assert_eq!(lhs, a.reorient(&s.symmetric_difference(&t)).unwrap());
    }
}
