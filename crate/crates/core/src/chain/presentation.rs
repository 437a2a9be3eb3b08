use std::sync::Arc;

use num_traits::One;

use crate::error::{Error, Result};
use crate::exactlinalg::Int;
use crate::groupring::{FiniteGroup, GroupRingMatrix};

use super::complex::{AugmentedComplex, ChainComplex};

/// A word in the generators: letter `k + 1` is generator `k`, `-(k + 1)`
/// its inverse.
pub type Word = Vec<i32>;

/// Fox derivative `d w / d x_j` evaluated in `group`, as coefficients.
pub fn fox_derivative(group: &FiniteGroup, images: &[usize], word: &[i32], j: usize) -> Vec<Int> {
    let mut out = vec![Int::default(); group.order()];
    let mut prefix = group.identity();
    for &letter in word {
        let k = letter.unsigned_abs() as usize - 1;
        let g = images[k];
        if letter > 0 {
            if k == j {
                out[prefix] += 1;
            }
            prefix = group.mul(prefix, g);
        } else {
            prefix = group.mul(prefix, group.inv(g));
            if k == j {
                out[prefix] -= 1;
            }
        }
    }
    out
}

/// Equivariant cellular chains of the universal cover of the presentation
/// complex of `<x_1, ..., x_m | r_1, ..., r_k>` where `x_j` maps to
/// `images[j]`. Degrees `0..=2`.
pub fn presentation_complex(group: Arc<FiniteGroup>, images: &[usize], relators: &[Word]) -> Result<AugmentedComplex> {
    let n = group.order();
    if let Some(&bad) = images.iter().find(|&&g| g >= n) {
        return Err(Error::InvalidComplex(format!("generator image {bad} is not a group element")));
    }
    let m = images.len();
    for (r, word) in relators.iter().enumerate() {
        if word.iter().any(|&l| l == 0 || l.unsigned_abs() as usize > m) {
            return Err(Error::InvalidComplex(format!("relator {r} uses an unknown generator")));
        }
        if group.evaluate(images, word) != group.identity() {
            return Err(Error::RelatorNotTrivial(r));
        }
    }
    let mut d1 = GroupRingMatrix::zeros(group.clone(), 1, m);
    for (j, &g) in images.iter().enumerate() {
        *d1.coeff_mut(0, j, g) += 1;
        *d1.coeff_mut(0, j, 0) -= 1;
    }
    let entries = (0..m)
        .flat_map(|j| relators.iter().map(move |w| (j, w)))
        .map(|(j, w)| fox_derivative(&group, images, w, j))
        .collect();
    let d2 = GroupRingMatrix::from_entries(group.clone(), m, relators.len(), entries)?;
    let complex = ChainComplex::new(group, vec![1, m, relators.len()], vec![d1, d2])?;
    AugmentedComplex::new(complex, vec![Int::one()])
}
