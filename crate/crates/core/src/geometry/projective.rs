//! Permissible projective maps `P(x) = (Ax + b) / (⟨c,x⟩ + δ)`.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::config::PointConfig;
use crate::exact::linalg::det;
use crate::exact::lp::{self, Feasibility};
use crate::exact::rational::{dot, int, vector_from_json, vector_to_json, vectors_from_json, vectors_to_json};
use crate::exact::{format_rational, parse_rational, Q};
use crate::matroid::Sign;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectiveMap {
    pub a: Vec<Vec<Q>>,
    pub b: Vec<Q>,
    pub c: Vec<Q>,
    pub delta: Q,
}

impl ProjectiveMap {
    pub fn identity(d: usize) -> Self {
        let a = (0..d).map(|i| (0..d).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
        ProjectiveMap { a, b: vec![Q::zero(); d], c: vec![Q::zero(); d], delta: Q::one() }
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    /// `[[A, b], [cᵀ, δ]]`.
    pub fn lifted(&self) -> Vec<Vec<Q>> {
        let mut rows: Vec<Vec<Q>> =
            self.a.iter().zip(&self.b).map(|(row, bi)| row.iter().cloned().chain([bi.clone()]).collect()).collect();
        rows.push(self.c.iter().cloned().chain([self.delta.clone()]).collect());
        rows
    }

    pub fn is_regular(&self) -> bool {
        !det(&self.lifted()).is_zero()
    }

    pub fn denominator(&self, x: &[Q]) -> Q {
        dot(&self.c, x) + &self.delta
    }

    pub fn is_permissible(&self, x: &PointConfig) -> bool {
        x.dim() == self.dim() && x.points().iter().all(|p| !self.denominator(p).is_zero())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "a": vectors_to_json(&self.a),
            "b": vector_to_json(&self.b),
            "c": vector_to_json(&self.c),
            "delta": format_rational(&self.delta),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let p = ProjectiveMap {
            a: vectors_from_json(&v["a"])?,
            b: vector_from_json(&v["b"])?,
            c: vector_from_json(&v["c"])?,
            delta: parse_rational(v["delta"].as_str().ok_or_else(|| Error::input("delta must be a rational string"))?)?,
        };
        let d = p.b.len();
        if p.c.len() != d || p.a.len() != d || p.a.iter().any(|r| r.len() != d) {
            return Err(Error::input("projective map has inconsistent shape"));
        }
        Ok(p)
    }
}

/// A regular map whose denominator has sign `ε_i` at `x_i`, found by the
/// feasibility problem `ε_i(⟨c,x_i⟩ + δ) ≥ 1`. The numerator completes
/// `(c, δ)` to a basis with unit rows.
pub fn projective_from_signs(x: &PointConfig, e: &[Sign]) -> Result<ProjectiveMap> {
    if e.len() != x.len() {
        return Err(Error::input("sign vector length differs from the number of points"));
    }
    let d = x.dim();
    if e.iter().all(|s| s.is_plus()) {
        return Ok(ProjectiveMap::identity(d));
    }
    // Variables: c⁺, c⁻, δ⁺, δ⁻, then one surplus per point.
    let n = x.len();
    let cols = 2 * d + 2 + n;
    let mut m = vec![vec![Q::zero(); cols]; n];
    for (i, (p, s)) in x.points().iter().zip(e).enumerate() {
        let eps = int(s.to_i8().into());
        for t in 0..d {
            m[i][t] = &eps * &p[t];
            m[i][d + t] = -(&eps * &p[t]);
        }
        m[i][2 * d] = eps.clone();
        m[i][2 * d + 1] = -eps;
        m[i][2 * d + 2 + i] = -Q::one();
    }
    let Feasibility::Feasible(v) = lp::solve(&m, &vec![Q::one(); n]) else { return Err(Error::NotRealizable) };
    let c: Vec<Q> = (0..d).map(|t| &v[t] - &v[d + t]).collect();
    let delta = &v[2 * d] - &v[2 * d + 1];

    let q = if delta.is_zero() { c.iter().position(|v| !v.is_zero()).expect("c and δ not both zero") } else { d };
    let rows: Vec<usize> = (0..=d).filter(|&t| t != q).collect();
    let unit = |t: usize| -> Vec<Q> { (0..=d).map(|u| if u == t { Q::one() } else { Q::zero() }).collect() };
    let a = rows.iter().map(|&t| unit(t)[..d].to_vec()).collect();
    let b = rows.iter().map(|&t| unit(t)[d].clone()).collect();
    let p = ProjectiveMap { a, b, c, delta };
    debug_assert!(p.is_regular());
    Ok(p)
}

/// `(A x_i + b) / (⟨c, x_i⟩ + δ)` for every point.
pub fn apply_projective(p: &ProjectiveMap, x: &PointConfig) -> Result<PointConfig> {
    if !p.is_permissible(x) {
        return Err(Error::input("projective map is not permissible for the configuration"));
    }
    let pts = x
        .points()
        .iter()
        .map(|pt| {
            let den = p.denominator(pt);
            p.a.iter().zip(&p.b).map(|(row, bi)| (dot(row, pt) + bi) / &den).collect()
        })
        .collect();
    PointConfig::new(pts)
}

/// Whether `sign(⟨c, x_i⟩ + δ) = ε_i` for every point.
pub fn realizes_signs(p: &ProjectiveMap, x: &PointConfig, e: &[Sign]) -> bool {
    use num_traits::Signed;
    e.len() == x.len()
        && x.points().iter().zip(e).all(|(pt, s)| {
            let v = p.denominator(pt);
            if s.is_plus() { v.is_positive() } else { v.is_negative() }
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::config::moment_curve_ints;
    use crate::geometry::gale::{gale_transform, is_gale_diagram_of};
    use crate::geometry::sample::random_general_position;
    use Sign::{Minus as M, Plus as P};

    fn line(v: &[i64]) -> PointConfig {
        PointConfig::from_ints(&v.iter().map(|&t| vec![t]).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn all_plus_is_identity() {
        let x = line(&[0, 1, 2]);
        let p = projective_from_signs(&x, &[P, P, P]).unwrap();
        assert_eq!(p, ProjectiveMap::identity(1));
        assert_eq!(apply_projective(&p, &x).unwrap(), x);
    }

    #[test]
    fn one_sign_change_on_a_line() {
        let x = line(&[0, 1, 2]);
        let e = [M, P, P];
        let p = projective_from_signs(&x, &e).unwrap();
        assert!(realizes_signs(&p, &x, &e));
        assert!(p.is_regular() && p.is_permissible(&x));
    }

    #[test]
    fn two_sign_changes_on_a_line_are_not_realizable() {
        let x = line(&[0, 1, 2]);
        assert!(matches!(projective_from_signs(&x, &[P, M, P]), Err(Error::NotRealizable)));
    }

    #[test]
    fn zero_delta_completion_is_regular() {
        let x = line(&[-1, 1]);
        let p = projective_from_signs(&x, &[M, P]).unwrap();
        assert!(p.is_regular());
        assert!(realizes_signs(&p, &x, &[M, P]));
    }

    #[test]
    fn non_permissible_map_is_rejected() {
        let x = line(&[0, 1]);
        let p = ProjectiveMap { a: vec![vec![int(1)]], b: vec![int(0)], c: vec![int(1)], delta: int(-1) };
        assert!(apply_projective(&p, &x).is_err());
    }

    #[test]
    fn image_gale_vectors_are_rescaled() {
        for seed in 0..10 {
            let x = random_general_position(7, 2, 600 + seed, 10).unwrap();
            let e: Vec<Sign> = (0..7).map(|i| if (seed + i) % 3 == 0 { M } else { P }).collect();
            let Ok(p) = projective_from_signs(&x, &e) else { continue };
            let y = apply_projective(&p, &x).unwrap();
            let ell: Vec<Q> = x.points().iter().map(|pt| p.denominator(pt)).collect();
            let scaled = gale_transform(&x).unwrap().scaled(&ell);
            assert!(is_gale_diagram_of(&y, &scaled));
        }
    }

    #[test]
    fn json_round_trip() {
        let x = moment_curve_ints(2, 0..5).unwrap();
        let p = projective_from_signs(&x, &[P, P, M, M, M]).unwrap();
        assert_eq!(ProjectiveMap::from_json(&p.to_json()).unwrap(), p);
    }
}
