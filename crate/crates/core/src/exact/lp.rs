//! Exact feasibility of `A x = b, x ≥ 0` by a Phase-I simplex with Bland's
//! rule. Infeasible systems come with a Farkas certificate `w` satisfying
//! `wᵀA ≥ 0` and `wᵀb < 0`.

use num_traits::{One, Signed, Zero};

use super::rational::dot;
use super::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Q>),
    Infeasible(Vec<Q>),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Feasibility {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    assert_eq!(b.len(), m, "rhs length must match row count");
    let width = n + m + 1;

    // Rows with negative rhs are negated so the artificial basis starts feasible.
    let flip: Vec<bool> = b.iter().map(Signed::is_negative).collect();
    let mut t: Vec<Vec<Q>> = (0..m)
        .map(|i| {
            let mut row = Vec::with_capacity(width);
            let s = if flip[i] { -Q::one() } else { Q::one() };
            row.extend(a[i].iter().map(|v| v * &s));
            row.extend((0..m).map(|k| if k == i { Q::one() } else { Q::zero() }));
            row.push(&b[i] * &s);
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();

    let mut cost: Vec<Q> = vec![Q::zero(); width];
    for row in &t {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[width - 1] -= &row[width - 1];
    }

    while let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // Phase I is bounded below by zero, so an entering column always has a leaving row.
        let (p, _) = leave.expect("phase I objective is bounded");
        pivot(&mut t, &mut cost, p, enter);
        basis[p] = enter;
    }

    if cost[width - 1].is_zero() {
        let mut x = vec![Q::zero(); n];
        for (i, &v) in basis.iter().enumerate() {
            if v < n {
                x[v] = t[i][width - 1].clone();
            }
        }
        Feasibility::Feasible(x)
    } else {
        let w = (0..m)
            .map(|i| {
                let y = Q::one() - &cost[n + i];
                if flip[i] { y } else { -y }
            })
            .collect();
        Feasibility::Infeasible(w)
    }
}

fn pivot(t: &mut [Vec<Q>], cost: &mut [Q], p: usize, c: usize) {
    let inv = Q::one() / &t[p][c];
    for x in t[p].iter_mut() {
        *x *= &inv;
    }
    let prow = t[p].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != p && !row[c].is_zero() {
            eliminate(row, &prow, c);
        }
    }
    if !cost[c].is_zero() {
        eliminate(cost, &prow, c);
    }
}

fn eliminate(row: &mut [Q], prow: &[Q], c: usize) {
    let f = row[c].clone();
    for (x, pv) in row.iter_mut().zip(prow) {
        if !pv.is_zero() {
            *x -= &f * pv;
        }
    }
}

pub fn check_solution(a: &[Vec<Q>], b: &[Q], x: &[Q]) -> bool {
    x.len() == a.first().map_or(0, Vec::len)
        && x.iter().all(|v| !v.is_negative())
        && a.iter().zip(b).all(|(row, bi)| dot(row, x) == *bi)
}

pub fn check_farkas(a: &[Vec<Q>], b: &[Q], w: &[Q]) -> bool {
    let n = a.first().map_or(0, Vec::len);
    w.len() == a.len()
        && (0..n).all(|j| !a.iter().zip(w).fold(Q::zero(), |acc, (row, wi)| acc + &row[j] * wi).is_negative())
        && dot(w, b).is_negative()
}
