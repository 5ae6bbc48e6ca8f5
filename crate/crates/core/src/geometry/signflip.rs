//! Search for a sign vector `E` making every `k`-complement of the flipped
//! Gale diagram contain the origin.

use rayon::prelude::*;

use super::gale::GaleDiagram;
use super::hull::zero_in_hull_complements;
use crate::matroid::Sign;

/// `E` with `ε_1 = +` for enumeration index `mask`: `ε_i = -` iff bit
/// `n - i` is set, so element 2 is the most significant and increasing
/// masks are lexicographic with `+ < −`.
pub fn signs_of_mask(n: usize, mask: u64) -> Vec<Sign> {
    (1..=n).map(|i| if i > 1 && mask >> (n - i) & 1 == 1 { Sign::Minus } else { Sign::Plus }).collect()
}

pub fn satisfies_flip(g: &GaleDiagram, signs: &[Sign], k: usize) -> bool {
    signs.len() == g.len() && zero_in_hull_complements(&g.flipped(signs), k)
}

/// The lexicographically smallest `E` (first sign `+`) with the property.
/// Complement symmetry makes fixing `ε_1` lossless.
pub fn find_sign_flip(g: &GaleDiagram, k: usize) -> Option<Vec<Sign>> {
    let n = g.len();
    assert!(n <= 63, "sign search supports at most 63 vectors");
    (0..1u64 << (n - 1))
        .into_par_iter()
        .map(|mask| signs_of_mask(n, mask))
        .find_first(|e| satisfies_flip(g, e, k))
}
