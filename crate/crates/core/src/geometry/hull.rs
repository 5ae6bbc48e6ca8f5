//! Convex hull intersection and origin membership, decided by exact LP
//! feasibility. Infeasible instances yield a strictly separating hyperplane.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::config::PointConfig;
use super::gale::GaleDiagram;
use crate::exact::lp::{self, Feasibility};
use crate::exact::rational::{dot, int, vector_from_json, vector_to_json};
use crate::exact::Q;
use crate::{Error, Result};
use itertools::Itertools;

/// A bipartition `(A, B)` of the labels `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    a: BTreeSet<usize>,
    b: BTreeSet<usize>,
}

impl Partition {
    /// `A` as given, `B` its complement in `1..=n`. Both must be nonempty.
    pub fn new(n: usize, a: BTreeSet<usize>) -> Result<Self> {
        if a.iter().any(|&l| l == 0 || l > n) {
            return Err(Error::input("partition label out of range"));
        }
        let b: BTreeSet<usize> = (1..=n).filter(|l| !a.contains(l)).collect();
        if a.is_empty() || b.is_empty() {
            return Err(Error::input("both sides of a partition must be nonempty"));
        }
        Ok(Partition { a, b })
    }

    /// The partition of `1..=n` with `B = {l : bit l-2 of mask}`, label 1 in `A`.
    pub fn from_b_mask(n: usize, mask: u64) -> Result<Self> {
        Partition::new(n, (1..=n).filter(|&l| l == 1 || mask >> (l - 2) & 1 == 0).collect())
    }

    pub fn a(&self) -> &BTreeSet<usize> {
        &self.a
    }

    pub fn b(&self) -> &BTreeSet<usize> {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.a.len() + self.b.len()
    }

    /// Both sides together cover `1..=n` exactly.
    pub fn is_partition_of(&self, n: usize) -> bool {
        self.n() == n && self.a.is_disjoint(&self.b) && self.a.iter().chain(&self.b).all(|&l| (1..=n).contains(&l))
    }
}

/// `{x : ⟨normal, x⟩ = offset}`, oriented so the `A` side is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    pub normal: Vec<Q>,
    pub offset: Q,
}

impl Hyperplane {
    pub fn value(&self, x: &[Q]) -> Q {
        dot(&self.normal, x) - &self.offset
    }

    /// `⟨n,a⟩ > offset` on every `a` and `⟨n,b⟩ < offset` on every `b`.
    pub fn strictly_separates<'a>(
        &self,
        a: impl IntoIterator<Item = &'a [Q]>,
        b: impl IntoIterator<Item = &'a [Q]>,
    ) -> bool {
        a.into_iter().all(|p| self.value(p) > Q::zero()) && b.into_iter().all(|p| self.value(p) < Q::zero())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "normal": vector_to_json(&self.normal), "offset": crate::exact::format_rational(&self.offset) })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let normal = vector_from_json(&v["normal"])?;
        let offset = crate::exact::parse_rational(
            v["offset"].as_str().ok_or_else(|| Error::input("hyperplane offset must be a rational string"))?,
        )?;
        Ok(Hyperplane { normal, offset })
    }
}

/// Either a common point of the two hulls or a hyperplane separating them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Intersection {
    Common(Vec<Q>),
    Separated(Hyperplane),
}

fn survivors<'a>(x: &'a PointConfig, side: &BTreeSet<usize>, removed: &BTreeSet<usize>) -> Vec<&'a [Q]> {
    side.iter().filter(|l| !removed.contains(l)).map(|&l| x.point(l)).collect()
}

/// Decides `conv(A∖R) ∩ conv(B∖R) ≠ ∅`.
pub fn hull_intersection(x: &PointConfig, part: &Partition, removed: &BTreeSet<usize>) -> Intersection {
    let a = survivors(x, part.a(), removed);
    let b = survivors(x, part.b(), removed);
    separate_sets(&a, &b, x.dim())
}

pub fn separate_sets(a: &[&[Q]], b: &[&[Q]], d: usize) -> Intersection {
    if a.is_empty() || b.is_empty() {
        let mut normal = vec![Q::zero(); d];
        normal[0] = Q::one();
        let offset = match (a.is_empty(), b.is_empty()) {
            (true, false) => b.iter().map(|p| p[0].clone()).max().unwrap() + int(1),
            (false, true) => a.iter().map(|p| p[0].clone()).min().unwrap() - int(1),
            _ => Q::zero(),
        };
        return Intersection::Separated(Hyperplane { normal, offset });
    }
    // Columns (a_i, 1, 0) and (-b_j, 0, 1); right-hand side (0, 1, 1).
    let cols = a.len() + b.len();
    let mut m = vec![vec![Q::zero(); cols]; d + 2];
    for (c, p) in a.iter().enumerate() {
        for t in 0..d {
            m[t][c] = p[t].clone();
        }
        m[d][c] = Q::one();
    }
    for (c, p) in b.iter().enumerate() {
        for t in 0..d {
            m[t][a.len() + c] = -p[t].clone();
        }
        m[d + 1][a.len() + c] = Q::one();
    }
    let mut rhs = vec![Q::zero(); d + 2];
    rhs[d] = Q::one();
    rhs[d + 1] = Q::one();
    match lp::solve(&m, &rhs) {
        Feasibility::Feasible(lambda) => {
            let mut point = vec![Q::zero(); d];
            for (p, l) in a.iter().zip(&lambda) {
                for t in 0..d {
                    point[t] += &p[t] * l;
                }
            }
            Intersection::Common(point)
        }
        Feasibility::Infeasible(w) => {
            // w_c·a ≥ -α and w_c·b ≤ β with α + β < 0.
            let (alpha, beta) = (&w[d], &w[d + 1]);
            let offset = (beta - alpha) / int(2);
            Intersection::Separated(Hyperplane { normal: w[..d].to_vec(), offset })
        }
    }
}

pub fn hulls_intersect(x: &PointConfig, part: &Partition, removed: &BTreeSet<usize>) -> bool {
    matches!(hull_intersection(x, part, removed), Intersection::Common(_))
}

/// Whether the origin counts when it lies on the boundary of the hull.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HullMembership {
    #[default]
    Closed,
    RelativeInterior,
}

/// `0 ∈ conv(vs)` (closed hull), or `0 ∈ relint conv(vs)`.
pub fn zero_in_hull(vs: &[&[Q]], membership: HullMembership) -> bool {
    let Some(first) = vs.first() else { return false };
    let m = first.len();
    let cols = vs.len();
    match membership {
        HullMembership::Closed => {
            let mut a = vec![vec![Q::zero(); cols]; m + 1];
            for (c, v) in vs.iter().enumerate() {
                for t in 0..m {
                    a[t][c] = v[t].clone();
                }
                a[m][c] = Q::one();
            }
            let mut rhs = vec![Q::zero(); m + 1];
            rhs[m] = Q::one();
            lp::solve(&a, &rhs).is_feasible()
        }
        HullMembership::RelativeInterior => {
            // Σ μ_i v_i = -Σ v_i with μ ≥ 0, i.e. a strictly positive combination.
            let mut a = vec![vec![Q::zero(); cols]; m];
            let mut rhs = vec![Q::zero(); m];
            for (c, v) in vs.iter().enumerate() {
                for t in 0..m {
                    a[t][c] = v[t].clone();
                    rhs[t] -= &v[t];
                }
            }
            lp::solve(&a, &rhs).is_feasible()
        }
    }
}

/// For every `k`-subset `F` of labels, `0 ∈ conv(x̄_i : i ∉ F)`.
pub fn zero_in_hull_complements(g: &GaleDiagram, k: usize) -> bool {
    first_hull_complement_failure(g, k, HullMembership::Closed).is_none()
}

/// The lexicographically first `k`-subset whose complement misses the origin.
pub fn first_hull_complement_failure(g: &GaleDiagram, k: usize, membership: HullMembership) -> Option<Vec<usize>> {
    let n = g.len();
    if k > n {
        return None;
    }
    (1..=n).combinations(k).find(|f| {
        let rest: Vec<&[Q]> = (1..=n).filter(|i| !f.contains(i)).map(|i| g.vectors()[i - 1].as_slice()).collect();
        !zero_in_hull(&rest, membership)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::frac;
    use crate::geometry::sample::random_general_position;

    fn line(v: &[i64]) -> PointConfig {
        PointConfig::from_ints(&v.iter().map(|&t| vec![t]).collect::<Vec<_>>()).unwrap()
    }

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn overlapping_intervals() {
        let x = line(&[0, 2, 1, 3]);
        let p = Partition::new(4, set(&[1, 2])).unwrap();
        assert!(hulls_intersect(&x, &p, &set(&[])));
    }

    #[test]
    fn reflected_sets_share_their_centre() {
        let x = PointConfig::from_ints(&[vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]]).unwrap();
        let p = Partition::new(4, set(&[1, 2])).unwrap();
        match hull_intersection(&x, &p, &set(&[])) {
            Intersection::Common(pt) => assert_eq!(pt, vec![int(0), int(0)]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn square_diagonals_separate_after_removal() {
        let x = PointConfig::from_ints(&[vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 1]]).unwrap();
        let p = Partition::new(4, set(&[1, 3])).unwrap();
        assert!(hulls_intersect(&x, &p, &set(&[])));
        for r in 1..=4 {
            let removed = set(&[r]);
            let Intersection::Separated(h) = hull_intersection(&x, &p, &removed) else { panic!("removing {r}") };
            let a = survivors(&x, p.a(), &removed);
            let b = survivors(&x, p.b(), &removed);
            assert!(h.strictly_separates(a, b));
        }
    }

    #[test]
    fn emptied_side_is_separated() {
        let x = line(&[0, 1, 2]);
        let p = Partition::new(3, set(&[1])).unwrap();
        let removed = set(&[1]);
        let Intersection::Separated(h) = hull_intersection(&x, &p, &removed) else { panic!() };
        assert!(h.strictly_separates(survivors(&x, p.a(), &removed), survivors(&x, p.b(), &removed)));
        let all = set(&[1, 2, 3]);
        assert!(!hulls_intersect(&x, &p, &all));
    }

    #[test]
    fn separation_certificates_on_random_instances() {
        for seed in 0..20 {
            let x = random_general_position(7, 2, seed, 15).unwrap();
            for mask in [1u64, 5, 9, 21, 33] {
                let p = Partition::from_b_mask(7, mask).unwrap();
                for r in [set(&[]), set(&[2]), set(&[1, 4])] {
                    match hull_intersection(&x, &p, &r) {
                        Intersection::Common(pt) => {
                            let a = survivors(&x, p.a(), &r);
                            let b = survivors(&x, p.b(), &r);
                            assert!(zero_in_hull(&shift(&a, &pt), HullMembership::Closed));
                            assert!(zero_in_hull(&shift(&b, &pt), HullMembership::Closed));
                        }
                        Intersection::Separated(h) => {
                            assert!(h.strictly_separates(survivors(&x, p.a(), &r), survivors(&x, p.b(), &r)))
                        }
                    }
                }
            }
        }
    }

    fn shift(ps: &[&[Q]], c: &[Q]) -> Vec<Vec<Q>> {
        ps.iter().map(|p| p.iter().zip(c).map(|(a, b)| a - b).collect()).collect()
    }

    fn zero_in_hull(vs: &[Vec<Q>], m: HullMembership) -> bool {
        super::zero_in_hull(&vs.iter().map(Vec::as_slice).collect::<Vec<_>>(), m)
    }

    #[test]
    fn removal_is_monotone() {
        let x = random_general_position(8, 2, 3, 20).unwrap();
        let p = Partition::from_b_mask(8, 0b1010101).unwrap();
        for r in (1..=8).combinations(2) {
            let r = set(&r);
            if !hulls_intersect(&x, &p, &r) {
                for extra in 1..=8 {
                    let mut bigger = r.clone();
                    bigger.insert(extra);
                    assert!(!hulls_intersect(&x, &p, &bigger));
                }
            }
        }
    }

    #[test]
    fn origin_membership() {
        let pm = vec![vec![int(1), int(0)], vec![int(-1), int(0)], vec![int(0), int(1)], vec![int(0), int(-1)]];
        let g = GaleDiagram::new(pm.clone()).unwrap();
        assert!(zero_in_hull_complements(&g, 0));
        assert!(zero_in_hull_complements(&g, 1));
        assert!(!zero_in_hull_complements(&g, 2));
        let tri = GaleDiagram::new(vec![vec![int(1), int(0)], vec![int(-1), int(1)], vec![int(-1), int(-1)]]).unwrap();
        assert!(zero_in_hull_complements(&tri, 0));
        assert_eq!(first_hull_complement_failure(&tri, 1, HullMembership::Closed), Some(vec![1]));
        assert!(zero_in_hull(&pm, HullMembership::RelativeInterior));
        let boundary = vec![vec![int(1), int(0)], vec![int(-1), int(0)], vec![int(0), int(1)]];
        assert!(zero_in_hull(&boundary, HullMembership::Closed));
        assert!(!zero_in_hull(&boundary, HullMembership::RelativeInterior));
        let segment = vec![vec![int(1), int(1)], vec![frac(-1, 2), frac(-1, 2)]];
        assert!(zero_in_hull(&segment, HullMembership::RelativeInterior));
        assert!(!zero_in_hull(&[], HullMembership::Closed));
    }

    #[test]
    fn closed_and_relint_agree_on_generic_gale_diagrams() {
        for seed in 0..10 {
            let x = random_general_position(7, 2, 50 + seed, 20).unwrap();
            let g = crate::geometry::gale::gale_transform(&x).unwrap();
            for k in 0..=2 {
                assert_eq!(
                    first_hull_complement_failure(&g, k, HullMembership::Closed),
                    first_hull_complement_failure(&g, k, HullMembership::RelativeInterior)
                );
            }
        }
    }

    #[test]
    fn partition_masks() {
        let p = Partition::from_b_mask(4, 0b101).unwrap();
        assert_eq!(p.a(), &set(&[1, 3]));
        assert_eq!(p.b(), &set(&[2, 4]));
        assert!(p.is_partition_of(4));
        assert!(Partition::new(3, set(&[1, 2, 3])).is_err());
        assert!(Partition::from_b_mask(3, 0).is_err());
    }
}
