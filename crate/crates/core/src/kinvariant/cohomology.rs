use num_integer::Integer;
use num_traits::{One, Zero};

use crate::chain::{ChainComplex, PiModule};
use crate::error::{Error, Result};
use crate::exactlinalg::{kernel_basis, lattice_basis, smith_with_inverses, solve_integer_system, Int, IntMatrix};

use super::cochain::precompose_operator;

/// `H^n(C; M)` for equivariant cochains `Hom_G(C_n, M)`.
///
/// A cochain is a `gens(M) x rank(C_n)` integer matrix. The group is
/// `Z/factors[0] + Z/factors[1] + ...` (a factor `0` is a copy of `Z`) with
/// `generators[k]` a cocycle representing the `k`-th summand.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    pub degree: usize,
    pub module: PiModule,
    pub factors: Vec<Int>,
    pub generators: Vec<IntMatrix>,
    cocycles: IntMatrix,
    coordinates: IntMatrix,
    cols: usize,
}

impl CohomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.factors.is_empty()
    }

    /// Coordinates of the class of a cocycle, reduced modulo the factors.
    pub fn coordinates(&self, c: &IntMatrix) -> Result<Vec<Int>> {
        if c.rows() != self.module.gens() || c.cols() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "cochain is {}x{}, expected {}x{}",
                c.rows(),
                c.cols(),
                self.module.gens(),
                self.cols
            )));
        }
        let y = solve_integer_system(&self.cocycles, &IntMatrix::column_vector(&c.vectorize()))?
            .ok_or_else(|| Error::CocycleCheckFailed("cochain is not a cocycle".into()))?;
        let raw = &self.coordinates * &y;
        Ok(self
            .factors
            .iter()
            .enumerate()
            .map(|(k, s)| if s.is_zero() { raw[(k, 0)].clone() } else { raw[(k, 0)].mod_floor(s) })
            .collect())
    }

    /// Whether a cocycle is a coboundary.
    pub fn is_trivial_class(&self, c: &IntMatrix) -> Result<bool> {
        Ok(self.coordinates(c)?.iter().all(Zero::is_zero))
    }
}

/// `H^n(C; M)` computed from the lattice of cocycles modulo coboundaries.
pub fn cohomology(c: &ChainComplex, module: &PiModule, n: usize) -> Result<CohomologyGroup> {
    if **c.group() != **module.group() {
        return Err(Error::GroupMismatch);
    }
    let g = module.gens();
    let r = c.rank(n);
    let size = g * r;
    let id = IntMatrix::identity(g);
    let rel = module.relations();

    let next = precompose_operator(module.actions(), &id, &c.d(n + 1));
    let cocycles = if rel.cols() == 0 {
        kernel_basis(&next)
    } else {
        let slack = IntMatrix::identity(c.rank(n + 1)).kron(rel).scale(&Int::from(-1));
        let k = kernel_basis(&next.hstack(&slack)?);
        lattice_basis(&k.row_range(0, size))
    };

    let prev = if n == 0 {
        IntMatrix::zeros(size, 0)
    } else {
        precompose_operator(module.actions(), &id, &c.d(n))
    };
    let trivial = prev.hstack(&IntMatrix::identity(r).kron(rel))?;
    let y = solve_integer_system(&cocycles, &trivial)?
        .ok_or_else(|| Error::Internal("coboundaries are not cocycles".into()))?;

    let full = smith_with_inverses(&y);
    let snf = &full.decomposition;
    let z = cocycles.cols();
    let factor = |k: usize| if k < snf.rank { snf.s[(k, k)].clone() } else { Int::zero() };
    let kept: Vec<usize> = (0..z).filter(|&k| !factor(k).is_one()).collect();
    let generators = kept
        .iter()
        .map(|&k| {
            let v = &cocycles * &full.u_inv.select_columns(&[k]);
            IntMatrix::from_vectorized(g, r, &v.column(0))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CohomologyGroup {
        degree: n,
        module: module.clone(),
        factors: kept.iter().map(|&k| factor(k)).collect(),
        generators,
        coordinates: snf.u.select_rows(&kept),
        cocycles,
        cols: r,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::groupring::FiniteGroup;
    use crate::lifting::periodic_cyclic_resolution;

    #[test]
    fn cohomology_of_c2() {
        let c = periodic_cyclic_resolution(2, 5).unwrap();
        let g = Arc::new(FiniteGroup::cyclic(2));
        let minus = PiModule::sign(g.clone(), &[1, -1]).unwrap();
        let z = PiModule::trivial(g);
        let factors = |m: &PiModule, n| cohomology(&c, m, n).unwrap().factors;
        assert!(factors(&minus, 0).is_empty());
        assert_eq!(factors(&minus, 1), vec![Int::from(2)]);
        assert!(factors(&minus, 2).is_empty());
        assert_eq!(factors(&minus, 3), vec![Int::from(2)]);
        assert_eq!(factors(&z, 0), vec![Int::zero()]);
        assert!(factors(&z, 1).is_empty());
        assert_eq!(factors(&z, 2), vec![Int::from(2)]);
        let h3 = cohomology(&c, &minus, 3).unwrap();
        assert_eq!(h3.coordinates(&IntMatrix::from_rows(&[[3]])).unwrap(), vec![Int::one()]);
        assert!(h3.is_trivial_class(&IntMatrix::from_rows(&[[4]])).unwrap());
    }
}
