//! k-divisibility: a partition whose hulls keep meeting after any `k`
//! points are deleted.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::config::PointConfig;
use super::hull::{hull_intersection, Hyperplane, Intersection, Partition};
use crate::exact::lp::{self, Feasibility};
use crate::exact::Q;
use crate::{Error, Result};

/// A removal set after which the partition's hulls are strictly separated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub partition: Partition,
    pub removed: BTreeSet<usize>,
    pub hyperplane: Hyperplane,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Divisibility {
    Divisible(Partition),
    /// One refutation per bipartition, in bipartition order.
    NotDivisible(Vec<Refutation>),
}

impl Divisibility {
    pub fn is_divisible(&self) -> bool {
        matches!(self, Divisibility::Divisible(_))
    }
}

/// Bipartitions up to swapping sides: `2^{n-1} - 1`.
pub fn bipartition_count(n: usize) -> u64 {
    (1u64 << (n - 1)) - 1
}

fn check_k(x: &PointConfig, k: usize) -> Result<()> {
    if x.len() < 2 {
        return Err(Error::input("divisibility needs at least two points"));
    }
    if k > x.len() {
        return Err(Error::input(format!("cannot remove {k} of {} points", x.len())));
    }
    if x.len() > 63 {
        return Err(Error::input("too many points for bipartition search"));
    }
    x.require_general_position()
}

/// The lexicographically first `k`-subset whose removal separates the
/// partition, with the separating hyperplane.
pub fn refute_partition(x: &PointConfig, part: &Partition, k: usize) -> Option<Refutation> {
    (1..=x.len()).combinations(k).find_map(|r| {
        let removed: BTreeSet<usize> = r.into_iter().collect();
        match hull_intersection(x, part, &removed) {
            Intersection::Common(_) => None,
            Intersection::Separated(hyperplane) => Some(Refutation { partition: part.clone(), removed, hyperplane }),
        }
    })
}

/// Whether `r` is a valid refutation of its partition for `x` and `k`.
pub fn check_refutation(x: &PointConfig, r: &Refutation, k: usize) -> bool {
    let side = |s: &BTreeSet<usize>| s.iter().filter(|l| !r.removed.contains(l)).map(|&l| x.point(l)).collect::<Vec<_>>();
    r.partition.is_partition_of(x.len())
        && r.removed.len() == k
        && r.removed.iter().all(|&l| (1..=x.len()).contains(&l))
        && r.hyperplane.normal.len() == x.dim()
        && r.hyperplane.strictly_separates(side(r.partition.a()), side(r.partition.b()))
}

/// Searches bipartitions in increasing `B`-mask order (label 1 always in
/// `A`, label `l ≥ 2` in `B` iff bit `l-2` is set). The first witness is
/// returned; otherwise every bipartition is refuted.
pub fn is_k_divisible(x: &PointConfig, k: usize) -> Result<Divisibility> {
    check_k(x, k)?;
    let n = x.len();
    let masks = 1..=bipartition_count(n);
    let witness = masks.clone().into_par_iter().find_map_first(|mask| {
        let p = Partition::from_b_mask(n, mask).expect("mask in range");
        refute_partition(x, &p, k).is_none().then_some(p)
    });
    if let Some(p) = witness {
        return Ok(Divisibility::Divisible(p));
    }
    let refutations = masks
        .into_par_iter()
        .map(|mask| {
            let p = Partition::from_b_mask(n, mask).expect("mask in range");
            refute_partition(x, &p, k).expect("no witness exists")
        })
        .collect();
    Ok(Divisibility::NotDivisible(refutations))
}

/// Stirling number of the second kind `S(n, s)`.
pub fn stirling2(n: usize, s: usize) -> u128 {
    let mut row = vec![0u128; s + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=s.min(i)).rev() {
            row[j] = row[j].saturating_mul(j as u128).saturating_add(row[j - 1]);
        }
        row[0] = 0;
    }
    row[s]
}

/// Set partitions of `1..=n` into exactly `s` nonempty blocks, as
/// restricted-growth strings in lexicographic order. Blocks are ordered by
/// their smallest label.
pub fn set_partitions(n: usize, s: usize) -> Vec<Vec<BTreeSet<usize>>> {
    fn go(i: usize, n: usize, s: usize, used: usize, rgs: &mut Vec<usize>, out: &mut Vec<Vec<BTreeSet<usize>>>) {
        if n - i < s - used {
            return;
        }
        if i == n {
            let mut blocks = vec![BTreeSet::new(); s];
            for (l, &b) in rgs.iter().enumerate() {
                blocks[b].insert(l + 1);
            }
            out.push(blocks);
            return;
        }
        for b in 0..=used.min(s - 1) {
            rgs.push(b);
            go(i + 1, n, s, used.max(b + 1), rgs, out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    if s >= 1 && s <= n {
        go(0, n, s, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// A point common to the hulls of every block's survivors, if any.
pub fn common_point(x: &PointConfig, blocks: &[BTreeSet<usize>], removed: &BTreeSet<usize>) -> Option<Vec<Q>> {
    let d = x.dim();
    let s = blocks.len();
    let alive: Vec<Vec<usize>> = blocks.iter().map(|b| b.iter().filter(|l| !removed.contains(l)).copied().collect()).collect();
    if alive.iter().any(Vec::is_empty) {
        return None;
    }
    let offsets: Vec<usize> = alive.iter().scan(0, |acc, b| { let o = *acc; *acc += b.len(); Some(o) }).collect();
    let cols = alive.iter().map(Vec::len).sum();
    let rows = (s - 1) * d + s;
    let mut m = vec![vec![Q::zero(); cols]; rows];
    let mut rhs = vec![Q::zero(); rows];
    for t in 1..s {
        for t2 in [0, t] {
            for (c, &l) in alive[t2].iter().enumerate() {
                for u in 0..d {
                    let v = x.point(l)[u].clone();
                    m[(t - 1) * d + u][offsets[t2] + c] = if t2 == 0 { -v } else { v };
                }
            }
        }
    }
    for t in 0..s {
        for c in 0..alive[t].len() {
            m[(s - 1) * d + t][offsets[t] + c] = Q::one();
        }
        rhs[(s - 1) * d + t] = Q::one();
    }
    match lp::solve(&m, &rhs) {
        Feasibility::Feasible(lambda) => {
            let mut p = vec![Q::zero(); d];
            for (c, &l) in alive[0].iter().enumerate() {
                for u in 0..d {
                    p[u] += &x.point(l)[u] * &lambda[c];
                }
            }
            Some(p)
        }
        Feasibility::Infeasible(_) => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SDivisibility {
    Divisible(Vec<BTreeSet<usize>>),
    NotDivisible { partitions_checked: u64 },
}

/// The first `s`-block partition whose hulls share a point after every
/// `k`-removal. Fails with [`Error::SearchCap`] when `S(n, s)` exceeds `cap`.
pub fn is_s_k_divisible(x: &PointConfig, s: usize, k: usize, cap: u128) -> Result<SDivisibility> {
    check_k(x, k)?;
    if s < 2 {
        return Err(Error::input("s-divisibility needs s ≥ 2"));
    }
    let needed = stirling2(x.len(), s);
    if needed > cap {
        return Err(Error::SearchCap { needed, cap });
    }
    let parts = set_partitions(x.len(), s);
    let found = parts.par_iter().find_first(|blocks| {
        (1..=x.len()).combinations(k).all(|r| common_point(x, blocks, &r.into_iter().collect()).is_some())
    });
    Ok(match found {
        Some(b) => SDivisibility::Divisible(b.clone()),
        None => SDivisibility::NotDivisible { partitions_checked: parts.len() as u64 },
    })
}
