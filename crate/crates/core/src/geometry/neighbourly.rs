//! k-neighbourliness through affine circuits, with the Gale-dual test.

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::config::PointConfig;
use super::gale::gale_transform;
use super::hull::zero_in_hull_complements;
use crate::exact::linalg::kernel;
use crate::matroid::Sign;
use crate::{Error, Result};

/// The affine dependence on `d+2` points in general position, up to sign.
/// The smallest label is normalized to `+`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineCircuit {
    pub support: Vec<usize>,
    pub signs: Vec<Sign>,
}

impl AffineCircuit {
    pub fn positive(&self) -> usize {
        self.signs.iter().filter(|s| s.is_plus()).count()
    }

    pub fn negative(&self) -> usize {
        self.signs.len() - self.positive()
    }
}

pub fn affine_circuit(x: &PointConfig, support: &[usize]) -> Result<AffineCircuit> {
    if support.len() != x.dim() + 2 {
        return Err(Error::input("an affine circuit needs d+2 points"));
    }
    let sub = x.subset(support)?;
    let k = kernel(&sub.lifted_matrix(), support.len());
    if k.len() != 1 || k[0].iter().any(Zero::is_zero) {
        return Err(Error::input("points of the circuit are not in general position"));
    }
    let flip = k[0][0].is_negative();
    let signs = k[0].iter().map(|v| if v.is_positive() != flip { Sign::Plus } else { Sign::Minus }).collect();
    Ok(AffineCircuit { support: support.to_vec(), signs })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighbourlyReport {
    pub holds: bool,
    pub circuits_checked: u64,
    pub violation: Option<AffineCircuit>,
}

/// Every `k`-subset spans a face iff every circuit has at least `k+1`
/// elements of each sign. Circuits are visited in lexicographic support
/// order; the first violating one is reported.
pub fn neighbourly_report(x: &PointConfig, k: usize) -> Result<NeighbourlyReport> {
    if x.len() < x.dim() + 2 {
        return Err(Error::input("neighbourliness needs n ≥ d+2"));
    }
    x.require_general_position()?;
    let mut checked = 0;
    for s in (1..=x.len()).combinations(x.dim() + 2) {
        let c = affine_circuit(x, &s)?;
        checked += 1;
        if c.positive() <= k || c.negative() <= k {
            return Ok(NeighbourlyReport { holds: false, circuits_checked: checked, violation: Some(c) });
        }
    }
    Ok(NeighbourlyReport { holds: true, circuits_checked: checked, violation: None })
}

pub fn is_k_neighbourly(x: &PointConfig, k: usize) -> Result<bool> {
    Ok(neighbourly_report(x, k)?.holds)
}

/// The same property read off the Gale diagram: the origin lies in the hull
/// of the vectors outside every `k`-subset.
pub fn is_k_neighbourly_gale(x: &PointConfig, k: usize) -> Result<bool> {
    Ok(zero_in_hull_complements(&gale_transform(x)?, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::config::moment_curve_ints;
    use crate::geometry::sample::random_general_position;

    #[test]
    fn convex_pentagon_is_a_polytope() {
        let x = PointConfig::from_ints(&[vec![0, 0], vec![4, 0], vec![5, 3], vec![2, 5], vec![-1, 3]]).unwrap();
        assert!(is_k_neighbourly(&x, 1).unwrap());
        assert!(!is_k_neighbourly(&x, 2).unwrap());
    }

    #[test]
    fn interior_point_breaks_neighbourliness() {
        let x = PointConfig::from_ints(&[vec![0, 0], vec![6, 0], vec![0, 6], vec![1, 1]]).unwrap();
        let r = neighbourly_report(&x, 1).unwrap();
        assert!(!r.holds);
        let v = r.violation.unwrap();
        assert_eq!((v.positive().min(v.negative()), v.positive().max(v.negative())), (1, 3));
    }

    #[test]
    fn cyclic_polytopes_are_half_dimension_neighbourly() {
        assert!(is_k_neighbourly(&moment_curve_ints(4, 0..8).unwrap(), 2).unwrap());
        assert!(is_k_neighbourly(&moment_curve_ints(2, 0..6).unwrap(), 1).unwrap());
        assert!(!is_k_neighbourly(&moment_curve_ints(4, 0..8).unwrap(), 3).unwrap());
    }

    #[test]
    fn moment_curve_circuits_alternate() {
        let x = moment_curve_ints(3, [-2, -1, 0, 1, 3]).unwrap();
        let c = affine_circuit(&x, &[1, 2, 3, 4, 5]).unwrap();
        assert_eq!(c.signs, vec![Sign::Plus, Sign::Minus, Sign::Plus, Sign::Minus, Sign::Plus]);
    }

    #[test]
    fn circuit_and_gale_criteria_agree() {
        for seed in 0..25 {
            let d = 2 + seed as usize % 3;
            let n = d + 2 + seed as usize % 4;
            let x = random_general_position(n, d, 500 + seed, 12).unwrap();
            for k in 0..=d / 2 {
                assert_eq!(is_k_neighbourly(&x, k).unwrap(), is_k_neighbourly_gale(&x, k).unwrap(), "seed {seed} k {k}");
            }
        }
        for (d, n) in [(4, 8), (2, 6), (4, 9)] {
            let x = moment_curve_ints(d, 0..n).unwrap();
            assert!(is_k_neighbourly_gale(&x, d / 2).unwrap());
        }
    }
}
