use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::exact::linalg::{det, mat_vec, rank};
use crate::exact::rational::{int, vectors_from_json, vectors_to_json};
use crate::exact::Q;
use crate::{Error, Result};

/// `n` labelled points in `Q^d`. Labels run `1..=n` in storage order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointConfig {
    points: Vec<Vec<Q>>,
    dim: usize,
}

impl PointConfig {
    pub fn new(points: Vec<Vec<Q>>) -> Result<Self> {
        let dim = points.first().map(Vec::len).ok_or_else(|| Error::input("configuration has no points"))?;
        if dim == 0 {
            return Err(Error::input("points must have dimension at least 1"));
        }
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::input("points have different dimensions"));
        }
        Ok(PointConfig { points, dim })
    }

    pub fn from_ints(points: &[Vec<i64>]) -> Result<Self> {
        PointConfig::new(points.iter().map(|p| p.iter().map(|&v| int(v)).collect()).collect())
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        PointConfig::new(vectors_from_json(v)?)
    }

    pub fn to_json(&self) -> Value {
        vectors_to_json(&self.points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<Q>] {
        &self.points
    }

    /// The point with 1-based `label`.
    pub fn point(&self, label: usize) -> &[Q] {
        &self.points[label - 1]
    }

    /// `(x, 1)` for the point with 1-based `label`.
    pub fn lifted(&self, label: usize) -> Vec<Q> {
        let mut v = self.point(label).to_vec();
        v.push(Q::one());
        v
    }

    /// The `(d+1) × n` matrix of lifted points as columns.
    pub fn lifted_matrix(&self) -> Vec<Vec<Q>> {
        let mut rows: Vec<Vec<Q>> = (0..self.dim).map(|t| self.points.iter().map(|p| p[t].clone()).collect()).collect();
        rows.push(vec![Q::one(); self.len()]);
        rows
    }

    /// Sign of `det[(x_{i_0},1) … (x_{i_d},1)]` for `d+1` labels, as -1, 0 or 1.
    pub fn orientation(&self, labels: &[usize]) -> i8 {
        assert_eq!(labels.len(), self.dim + 1, "orientation needs d+1 labels");
        let m: Vec<Vec<Q>> = labels.iter().map(|&l| self.lifted(l)).collect();
        let d = det(&m);
        if d.is_zero() {
            0
        } else if d.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Every `(d+1)`-subset is affinely independent. With fewer than `d+1`
    /// points the whole set must be.
    pub fn is_general_position(&self) -> bool {
        let k = self.dim + 1;
        if self.len() < k {
            return rank(&self.lifted_matrix()) == self.len();
        }
        (1..=self.len()).combinations(k).all(|s| self.orientation(&s) != 0)
    }

    pub fn require_general_position(&self) -> Result<()> {
        if self.is_general_position() {
            Ok(())
        } else {
            Err(Error::input("configuration is not in general position"))
        }
    }

    /// `x ↦ M x + t`.
    pub fn affine_image(&self, m: &[Vec<Q>], t: &[Q]) -> Result<PointConfig> {
        if t.is_empty() || m.iter().any(|row| row.len() != self.dim) || m.len() != t.len() {
            return Err(Error::input("affine map shape does not match the configuration"));
        }
        let pts = self.points.iter().map(|p| mat_vec(m, p).into_iter().zip(t).map(|(a, b)| a + b).collect()).collect();
        PointConfig::new(pts)
    }

    pub fn subset(&self, labels: &[usize]) -> Result<PointConfig> {
        if labels.iter().any(|&l| l == 0 || l > self.len()) {
            return Err(Error::input("label out of range"));
        }
        PointConfig::new(labels.iter().map(|&l| self.point(l).to_vec()).collect())
    }
}

/// `t ↦ (t, t², …, t^d)` for each parameter.
pub fn moment_curve_points(d: usize, params: &[Q]) -> Result<PointConfig> {
    if params.iter().tuple_combinations().any(|(a, b)| a == b) {
        return Err(Error::input("moment curve parameters must be distinct"));
    }
    let pts = params
        .iter()
        .map(|t| {
            let mut p = Vec::with_capacity(d);
            let mut v = t.clone();
            for _ in 0..d {
                p.push(v.clone());
                v *= t;
            }
            p
        })
        .collect();
    PointConfig::new(pts)
}

pub fn moment_curve_ints(d: usize, params: impl IntoIterator<Item = i64>) -> Result<PointConfig> {
    moment_curve_points(d, &params.into_iter().map(int).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::frac;

    #[test]
    fn line_points_are_general() {
        let x = PointConfig::from_ints(&[vec![0], vec![1], vec![2], vec![3]]).unwrap();
        assert!(x.is_general_position());
        let dup = PointConfig::from_ints(&[vec![0], vec![1], vec![1]]).unwrap();
        assert!(!dup.is_general_position());
    }

    #[test]
    fn collinear_triple_is_degenerate() {
        let x = PointConfig::from_ints(&[vec![0, 0], vec![1, 1], vec![2, 2], vec![0, 1]]).unwrap();
        assert!(!x.is_general_position());
        assert!(x.require_general_position().is_err());
    }

    #[test]
    fn moment_curve_values() {
        let x = moment_curve_ints(2, [0, 1, 2]).unwrap();
        assert_eq!(x, PointConfig::from_ints(&[vec![0, 0], vec![1, 1], vec![2, 4]]).unwrap());
        assert!(moment_curve_ints(2, [1, 1]).is_err());
    }

    #[test]
    fn moment_curve_is_general_position() {
        for d in 1..=4 {
            let params: Vec<Q> = (0..d as i64 + 5).map(|t| frac(2 * t - 3, 3)).collect();
            assert!(moment_curve_points(d, &params).unwrap().is_general_position());
        }
    }

    #[test]
    fn orientation_of_triangle() {
        let x = PointConfig::from_ints(&[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(x.orientation(&[1, 2, 3]), 1);
        assert_eq!(x.orientation(&[2, 1, 3]), -1);
    }

    #[test]
    fn constructor_checks() {
        assert!(PointConfig::new(vec![]).is_err());
        assert!(PointConfig::new(vec![vec![]]).is_err());
        assert!(PointConfig::from_ints(&[vec![1, 2], vec![3]]).is_err());
    }

    #[test]
    fn few_points_general_position_is_independence() {
        let x = PointConfig::from_ints(&[vec![0, 0, 0], vec![1, 0, 0]]).unwrap();
        assert!(x.is_general_position());
    }
}
