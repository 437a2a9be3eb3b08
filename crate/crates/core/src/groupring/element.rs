use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::group::FiniteGroup;
use crate::error::{Error, Result};
use crate::exactlinalg::Int;

/// An element of `Z[G]`: one integer coefficient per group element.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupRingElement {
    group: Arc<FiniteGroup>,
    coeffs: Vec<Int>,
}

impl GroupRingElement {
    pub fn new(group: Arc<FiniteGroup>, coeffs: Vec<Int>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a group of order {}",
                coeffs.len(),
                group.order()
            )));
        }
        Ok(GroupRingElement { group, coeffs })
    }

    pub fn from_i64(group: Arc<FiniteGroup>, coeffs: &[i64]) -> Result<Self> {
        Self::new(group, coeffs.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn zero(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        GroupRingElement { group, coeffs: vec![Int::zero(); n] }
    }

    pub fn one(group: Arc<FiniteGroup>) -> Self {
        Self::basis(group, 0)
    }

    /// The group element `g` viewed in the group ring.
    pub fn basis(group: Arc<FiniteGroup>, g: usize) -> Self {
        let mut e = Self::zero(group);
        e.coeffs[g] = Int::one();
        e
    }

    /// Sum of all group elements.
    pub fn norm(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        GroupRingElement { group, coeffs: vec![Int::one(); n] }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Int> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The augmentation `sum_g a_g`.
    pub fn augmentation(&self) -> Int {
        self.coeffs.iter().sum()
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.group != rhs.group {
            return Err(Error::GroupMismatch);
        }
        Ok(GroupRingElement { group: self.group.clone(), coeffs: multiply(&self.group, &self.coeffs, &rhs.coeffs) })
    }
}

/// Product of coefficient vectors in `Z[G]`.
pub(crate) fn multiply(group: &FiniteGroup, a: &[Int], b: &[Int]) -> Vec<Int> {
    let mut out = vec![Int::zero(); group.order()];
    multiply_into(group, a, b, &mut out);
    out
}

/// `out += a * b`
pub(crate) fn multiply_into(group: &FiniteGroup, a: &[Int], b: &[Int], out: &mut [Int]) {
    for (g, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (h, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[group.mul(g, h)] += x * y;
            }
        }
    }
}

impl Mul for &GroupRingElement {
    type Output = GroupRingElement;
    fn mul(self, rhs: &GroupRingElement) -> GroupRingElement {
        self.checked_mul(rhs).expect("group ring elements over different groups")
    }
}

impl Add for &GroupRingElement {
    type Output = GroupRingElement;
    fn add(self, rhs: &GroupRingElement) -> GroupRingElement {
        assert!(self.group == rhs.group, "group ring elements over different groups");
        GroupRingElement {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &GroupRingElement {
    type Output = GroupRingElement;
    fn sub(self, rhs: &GroupRingElement) -> GroupRingElement {
        self + &(-rhs)
    }
}

impl Neg for &GroupRingElement {
    type Output = GroupRingElement;
    fn neg(self) -> GroupRingElement {
        GroupRingElement { group: self.group.clone(), coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (g, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if g == 0 {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "g{g}")?;
            } else {
                write!(f, "{c}*g{g}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
