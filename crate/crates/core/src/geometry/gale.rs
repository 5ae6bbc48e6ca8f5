//! Gale transforms. The Gale vectors of `n` points in `Q^d` are the rows
//! of a basis matrix of the kernel of the lifted `(d+1) × n` matrix.

use num_traits::{One, Signed, Zero};
use serde_json::Value;

use super::config::PointConfig;
use super::hull::Partition;
use crate::exact::linalg::{kernel, mat_vec, rank, transpose};
use crate::exact::rational::{vectors_from_json, vectors_to_json};
use crate::exact::Q;
use crate::{Error, Result};

/// `n` vectors `x̄_1, …, x̄_n`, all of one dimension (possibly 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaleDiagram {
    vectors: Vec<Vec<Q>>,
}

impl GaleDiagram {
    pub fn new(vectors: Vec<Vec<Q>>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::input("Gale diagram has no vectors"));
        }
        let m = vectors[0].len();
        if vectors.iter().any(|v| v.len() != m) {
            return Err(Error::input("Gale vectors have different dimensions"));
        }
        Ok(GaleDiagram { vectors })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        GaleDiagram::new(vectors_from_json(v)?)
    }

    pub fn to_json(&self) -> Value {
        vectors_to_json(&self.vectors)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn vectors(&self) -> &[Vec<Q>] {
        &self.vectors
    }

    /// `{ε_i · x̄_i}`.
    pub fn flipped(&self, signs: &[crate::matroid::Sign]) -> GaleDiagram {
        let vectors = self
            .vectors
            .iter()
            .zip(signs)
            .map(|(v, s)| if s.is_plus() { v.clone() } else { v.iter().map(|x| -x).collect() })
            .collect();
        GaleDiagram { vectors }
    }

    /// The diagram with each vector scaled by the matching factor.
    pub fn scaled(&self, factors: &[Q]) -> GaleDiagram {
        let vectors = self.vectors.iter().zip(factors).map(|(v, f)| v.iter().map(|x| x * f).collect()).collect();
        GaleDiagram { vectors }
    }

    /// Rank of the `n × m` matrix with the vectors as rows.
    pub fn rank(&self) -> usize {
        rank(&self.vectors)
    }
}

/// The diagram whose columns are the RREF kernel basis of the lifted matrix,
/// one column per free variable in increasing order.
pub fn gale_transform(x: &PointConfig) -> Result<GaleDiagram> {
    if x.len() < x.dim() + 2 {
        return Err(Error::input(format!("Gale transform needs n ≥ d+2, got n={} d={}", x.len(), x.dim())));
    }
    x.require_general_position()?;
    let basis = kernel(&x.lifted_matrix(), x.len());
    GaleDiagram::new(transpose_or_empty(&basis, x.len()))
}

fn transpose_or_empty(basis: &[Vec<Q>], n: usize) -> Vec<Vec<Q>> {
    if basis.is_empty() {
        vec![Vec::new(); n]
    } else {
        transpose(basis)
    }
}

/// `Xᵀ·G = 0`, `1ᵀ·G = 0` and `rank(G) = n−d−1`.
pub fn is_gale_diagram_of(x: &PointConfig, g: &GaleDiagram) -> bool {
    if g.len() != x.len() || g.dim() + x.dim() + 1 != x.len() {
        return false;
    }
    let columns = transpose_or_empty(g.vectors(), 0);
    let annihilated = columns.iter().all(|col| mat_vec(&x.lifted_matrix(), col).iter().all(Zero::is_zero));
    annihilated && g.rank() == g.dim()
}

/// A configuration in dimension `n − m − 1` whose Gale diagram spans the
/// same column space as `g`: a basis of `ker Gᵀ` starting from `1`, with the
/// non-constant members as coordinates.
pub fn gale_inverse(g: &GaleDiagram) -> Result<PointConfig> {
    let n = g.len();
    let m = g.dim();
    if g.rank() != m {
        return Err(Error::input("Gale vectors do not have full rank"));
    }
    if n < m + 2 {
        return Err(Error::input("Gale diagram too small to invert"));
    }
    let ones = vec![Q::one(); n];
    let gt = transpose_or_empty(g.vectors(), 0);
    if gt.iter().any(|col| !col.iter().fold(Q::zero(), |a, b| a + b).is_zero()) {
        return Err(Error::input("Gale vectors do not sum to zero"));
    }
    let mut chosen = vec![ones];
    for v in kernel(&gt, n) {
        chosen.push(v);
        if rank(&chosen) < chosen.len() {
            chosen.pop();
        }
    }
    let d = n - m - 1;
    debug_assert_eq!(chosen.len(), d + 1);
    let points = (0..n).map(|i| chosen[1..].iter().map(|v| v[i].clone()).collect()).collect();
    PointConfig::new(points)
}

/// The Radon partition of `d+2` points: the sign classes of the
/// one-dimensional Gale diagram, label 1 placed in `A`.
pub fn radon_partition(x: &PointConfig) -> Result<Partition> {
    if x.len() != x.dim() + 2 {
        return Err(Error::input("Radon partition needs exactly d+2 points"));
    }
    let g = gale_transform(x)?;
    let first_positive = g.vectors()[0][0].is_positive();
    let a = (1..=x.len()).filter(|&i| g.vectors()[i - 1][0].is_positive() == first_positive).collect();
    Partition::new(x.len(), a)
}
