//! Seeded random configurations and the cyclic-polytope construction of
//! k-divisible sets.

use itertools::Itertools;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{moment_curve_ints, PointConfig};
use super::gale::gale_transform;
use super::hull::Partition;
use crate::exact::rational::{dot, frac, int};
use crate::exact::Q;
use crate::{Error, Result};

const MAX_ATTEMPTS: usize = 10_000;

/// `n` points with integer coordinates in `[-range, range]^d`, in general
/// position, drawn by rejection from a seeded generator.
pub fn random_general_position(n: usize, d: usize, seed: u64, range: i64) -> Result<PointConfig> {
    if d == 0 || range < 1 {
        return Err(Error::input("need d ≥ 1 and a positive coordinate range"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<Vec<Q>> = Vec::with_capacity(n);
    let mut attempts = 0;
    while pts.len() < n {
        attempts += 1;
        if attempts > MAX_ATTEMPTS {
            return Err(Error::input(format!("could not place {n} points in general position in range {range}")));
        }
        let cand: Vec<Q> = (0..d).map(|_| int(rng.gen_range(-range..=range))).collect();
        let mut trial = pts.clone();
        trial.push(cand);
        let x = PointConfig::new(trial.clone())?;
        let last = trial.len();
        let ok = if last <= d + 1 {
            x.is_general_position()
        } else {
            (1..last).combinations(d).all(|mut s| {
                s.push(last);
                x.orientation(&s) != 0
            })
        };
        if ok {
            pts = trial;
        }
    }
    PointConfig::new(pts)
}

/// Adds to every coordinate an independent offset `m / denom` with
/// `|m| ≤ 1`, from a seeded generator. The result is not checked for
/// general position.
pub fn perturb(x: &PointConfig, seed: u64, denom: i64) -> PointConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = x
        .points()
        .iter()
        .map(|p| p.iter().map(|v| v + frac(rng.gen_range(-1..=1), denom)).collect())
        .collect();
    PointConfig::new(pts).expect("same shape as the input")
}

/// `(k+1)d + (k+2)`.
pub fn radon_size(d: usize, k: usize) -> usize {
    (k + 1) * d + (k + 2)
}

/// `(k+1)d + (k+2)` vertices of a cyclic polytope in dimension `lift_dim`,
/// carried to an affine Gale diagram: the Gale vectors are centrally
/// projected onto `⟨c, y⟩ = 1` for `c = (1, t, t², …)` and the first
/// coordinate dropped. The partition is the sign of `⟨c, x̄_i⟩`.
///
/// `lift_dim = k(d+1)` gives points in `Q^d`.
pub fn cyclic_gale_instance(d: usize, k: usize, lift_dim: usize) -> Result<(PointConfig, Partition)> {
    let n = radon_size(d, k);
    if lift_dim + 2 > n {
        return Err(Error::input("lift dimension leaves no room for a Gale diagram"));
    }
    let vertices = moment_curve_ints(lift_dim, 0..n as i64)?;
    let g = gale_transform(&vertices)?;
    let m = g.dim();
    if m < 2 {
        return Err(Error::input("Gale dimension must be at least 2 for an affine diagram"));
    }
    for t in 2..1000i64 {
        let c: Vec<Q> = (0..m as u32).map(|e| int(t.pow(e))).collect();
        let values: Vec<Q> = g.vectors().iter().map(|v| dot(&c, v)).collect();
        if values.iter().any(Zero::is_zero) {
            continue;
        }
        let pts: Vec<Vec<Q>> = g.vectors().iter().zip(&values).map(|(v, s)| v[1..].iter().map(|x| x / s).collect()).collect();
        let x = PointConfig::new(pts)?;
        if !x.is_general_position() {
            continue;
        }
        let a = (1..=n).filter(|&i| values[i - 1].is_positive() == values[0].is_positive()).collect();
        return Ok((x, Partition::new(n, a)?));
    }
    Err(Error::input("no admissible projection direction found"))
}
