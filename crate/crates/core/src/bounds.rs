//! Index arithmetic between the extremal numbers ν, λ and μ.
//!
//! * `ν(d,k) = max { w : w ≥ λ(w−d−2, k) }`
//! * `λ(d,k) = min { w : w ≤ ν(w−d−2, k) }`
//! * `μ(d+1,k) = λ(d,k)`
//!
//! Facts are affine bounds `slope·d + intercept` on a range of `d`. The
//! propagation is pointwise; searches over `w` run up to a horizon.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Nu,
    Lambda,
    Mu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `quantity(d,k) ≥ value`
    Lower,
    /// `quantity(d,k) ≤ value`
    Upper,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundFact {
    pub quantity: Quantity,
    pub k: usize,
    pub d_min: usize,
    #[serde(default)]
    pub d_max: Option<usize>,
    pub slope: i64,
    pub intercept: i64,
    pub direction: Direction,
    #[serde(default)]
    pub source: String,
}

impl BoundFact {
    pub fn exact_at(quantity: Quantity, d: usize, k: usize, value: i64, source: &str) -> [BoundFact; 2] {
        [Direction::Lower, Direction::Upper].map(|direction| BoundFact {
            quantity,
            k,
            d_min: d,
            d_max: Some(d),
            slope: 0,
            intercept: value,
            direction,
            source: source.to_string(),
        })
    }

    pub fn covers(&self, d: usize) -> bool {
        d >= self.d_min && self.d_max.is_none_or(|m| d <= m)
    }

    pub fn value(&self, d: usize) -> i64 {
        self.slope * d as i64 + self.intercept
    }
}

/// A bound at one index, with the sources it was derived from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedBound {
    pub quantity: Quantity,
    pub d: usize,
    pub k: usize,
    pub direction: Direction,
    pub value: i64,
    pub from: BTreeSet<String>,
}

/// Best known `(value, sources)` for a bound, if any.
type Best = Option<(i64, BTreeSet<String>)>;

struct Table<'a> {
    facts: &'a [BoundFact],
    horizon: usize,
}

impl Table<'_> {
    /// Direct facts on `q`, plus the `λ(d) = μ(d+1)` identity.
    fn direct(&self, q: Quantity, d: usize, k: usize, dir: Direction) -> Best {
        let mut best: Best = None;
        let mut consider = |value: i64, src: &str| {
            let better = match &best {
                None => true,
                Some((b, _)) => match dir {
                    Direction::Lower => value > *b,
                    Direction::Upper => value < *b,
                },
            };
            if better {
                best = Some((value, [src.to_string()].into()));
            }
        };
        for f in self.facts.iter().filter(|f| f.k == k && f.direction == dir) {
            let shifted = match (f.quantity, q) {
                (a, b) if a == b => Some(d),
                (Quantity::Mu, Quantity::Lambda) => Some(d + 1),
                (Quantity::Lambda, Quantity::Mu) => d.checked_sub(1),
                _ => None,
            };
            if let Some(e) = shifted.filter(|&e| f.covers(e)) {
                consider(f.value(e), &f.source);
            }
        }
        best
    }

    fn check(&self, q: Quantity, d: usize, k: usize) -> Result<()> {
        if let (Some((lo, a)), Some((hi, b))) =
            (self.direct(q, d, k, Direction::Lower), self.direct(q, d, k, Direction::Upper))
        {
            if lo > hi {
                return Err(Error::InconsistentTable(format!(
                    "{q:?}({d},{k}) ≥ {lo} from {a:?} but ≤ {hi} from {b:?}"
                )));
            }
        }
        Ok(())
    }

    /// `ν(d) ≥ w` whenever `λ(w−d−2) ≤ w`: the largest such `w` below the horizon.
    fn nu_lower(&self, d: usize, k: usize) -> Best {
        (d + 3..=d + 2 + self.horizon).rev().find_map(|w| {
            let (u, src) = self.direct(Quantity::Lambda, w - d - 2, k, Direction::Upper)?;
            (u <= w as i64).then_some((w as i64, src))
        })
    }

    /// `ν(d) ≤ W` when `λ(w−d−2) > w` for every `w > W`. The tail is settled
    /// by an unbounded lower rule that eventually outgrows `w`.
    fn nu_upper(&self, d: usize, k: usize) -> Best {
        let dd = d as i64 + 2;
        let (tail, tail_start) = self
            .facts
            .iter()
            .filter(|f| {
                f.quantity == Quantity::Lambda && f.k == k && f.direction == Direction::Lower && f.d_max.is_none()
            })
            .filter_map(|f| {
                // s(w−d−2) + c > w for all w ≥ t.
                let need = f.slope * dd - f.intercept;
                let t = match f.slope {
                    s if s < 1 => return None,
                    1 if need < 0 => 0,
                    1 => return None,
                    s => need.div_euclid(s - 1) + 1,
                };
                Some((f, t.max(dd + f.d_min as i64).max(dd + 1)))
            })
            .min_by_key(|&(_, t)| t)?;
        let mut from: BTreeSet<String> = [tail.source.clone()].into();
        for w in (d + 3..tail_start as usize).rev() {
            match self.direct(Quantity::Lambda, w - d - 2, k, Direction::Lower) {
                Some((l, src)) if l > w as i64 => from.extend(src),
                _ => return Some((w as i64, from)),
            }
        }
        Some((dd, from))
    }

    /// `λ(d) ≤ w` whenever `w ≤ ν(w−d−2)`: the smallest such `w`.
    fn lambda_upper_from_nu(&self, d: usize, k: usize) -> Best {
        (d + 3..=d + 2 + self.horizon).find_map(|w| {
            let (l, src) = self.direct(Quantity::Nu, w - d - 2, k, Direction::Lower)?;
            (l >= w as i64).then_some((w as i64, src))
        })
    }

    /// `λ(d) ≥ W` when `ν(w−d−2) < w` for every `w < W`.
    fn lambda_lower_from_nu(&self, d: usize, k: usize) -> Best {
        let mut from = BTreeSet::new();
        for w in d + 3..=d + 2 + self.horizon {
            match self.direct(Quantity::Nu, w - d - 2, k, Direction::Upper) {
                Some((u, src)) if u < w as i64 => from.extend(src),
                _ => return (!from.is_empty()).then_some((w as i64, from)),
            }
        }
        None
    }
}

/// Every bound implied by `facts` at `d ∈ ds`, `k ∈ ks`: the direct and
/// shifted bounds on λ and μ, and the propagated bounds on ν and λ.
/// A lower bound exceeding an upper bound anywhere in range is an error.
pub fn index_relations(facts: &[BoundFact], ds: std::ops::RangeInclusive<usize>, ks: &[usize]) -> Result<Vec<DerivedBound>> {
    for f in facts {
        if f.d_max.is_some_and(|m| m < f.d_min) {
            return Err(Error::input(format!("fact {:?} has an empty range", f.source)));
        }
    }
    let t = Table { facts, horizon: 64.max(4 * (facts.iter().map(|f| f.d_min).max().unwrap_or(0) + *ds.end())) };
    let mut out = Vec::new();
    let push = |out: &mut Vec<DerivedBound>, quantity, d, k, direction, best: Best| {
        if let Some((value, from)) = best {
            out.push(DerivedBound { quantity, d, k, direction, value, from });
        }
    };
    for &k in ks {
        for d in 1..=*ds.end() + t.horizon + 3 {
            for q in [Quantity::Nu, Quantity::Lambda, Quantity::Mu] {
                t.check(q, d, k)?;
            }
        }
        for d in ds.clone() {
            for q in [Quantity::Lambda, Quantity::Mu] {
                for dir in [Direction::Lower, Direction::Upper] {
                    push(&mut out, q, d, k, dir, t.direct(q, d, k, dir));
                }
            }
            push(&mut out, Quantity::Nu, d, k, Direction::Lower, t.nu_lower(d, k));
            push(&mut out, Quantity::Nu, d, k, Direction::Upper, t.nu_upper(d, k));
            push(&mut out, Quantity::Lambda, d, k, Direction::Upper, t.lambda_upper_from_nu(d, k));
            push(&mut out, Quantity::Lambda, d, k, Direction::Lower, t.lambda_lower_from_nu(d, k));
        }
    }
    for b in &out {
        let opposite = out.iter().find(|o| {
            (o.quantity, o.d, o.k) == (b.quantity, b.d, b.k)
                && b.direction == Direction::Lower
                && o.direction == Direction::Upper
                && b.value > o.value
        });
        if let Some(o) = opposite {
            return Err(Error::InconsistentTable(format!(
                "{:?}({},{}) derived ≥ {} from {:?} and ≤ {} from {:?}",
                b.quantity, b.d, b.k, b.value, b.from, o.value, o.from
            )));
        }
    }
    Ok(out)
}

/// The best derived bound of one kind, if any.
pub fn best(bounds: &[DerivedBound], q: Quantity, d: usize, k: usize, dir: Direction) -> Option<i64> {
    let it = bounds.iter().filter(|b| (b.quantity, b.d, b.k, b.direction) == (q, d, k, dir)).map(|b| b.value);
    match dir {
        Direction::Lower => it.max(),
        Direction::Upper => it.min(),
    }
}

/// `(k+1)((s−1)(d−1)+1)`.
pub fn tverberg_bound(d: u64, s: u64, k: u64) -> u64 {
    (k + 1) * ((s - 1) * (d.saturating_sub(1)) + 1)
}

/// `λ(d,k) ≤ (k+1)d + (k+2)` for all `d ≥ 1`.
pub fn divisibility_rule(k: usize) -> BoundFact {
    BoundFact {
        quantity: Quantity::Lambda,
        k,
        d_min: 1,
        d_max: None,
        slope: k as i64 + 1,
        intercept: k as i64 + 2,
        direction: Direction::Upper,
        source: format!("lambda(d,{k}) <= {}d+{}", k + 1, k + 2),
    }
}
