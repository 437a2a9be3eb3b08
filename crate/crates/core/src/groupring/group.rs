use std::sync::Arc;

use crate::error::{Error, Result};

/// A finite group given by its multiplication table. Element `0` is the
/// identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a multiplication table, `table[a][b] = a * b`.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::MalformedTable);
        }
        let mul: Vec<usize> = table.iter().flatten().copied().collect();
        let at = |a: usize, b: usize| mul[a * n + b];

        let identity = (0..n).find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x));
        match identity {
            None => return Err(Error::MissingIdentity),
            Some(e) if e != 0 => return Err(Error::IdentityNotFirst(e)),
            Some(_) => {}
        }
        let mut inv = vec![0; n];
        for a in 0..n {
            inv[a] = (0..n)
                .find(|&b| at(a, b) == 0 && at(b, a) == 0)
                .ok_or(Error::MissingInverse(a))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(Error::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(FiniteGroup { order: n, mul, inv })
    }

    pub fn trivial() -> Self {
        FiniteGroup { order: 1, mul: vec![0], inv: vec![0] }
    }

    /// Cyclic group of order `n`; element `k` is the `k`-th power of the generator `1`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(&table).expect("cyclic table")
    }

    /// Direct product; element `(a, b)` has index `a * |H| + b`.
    pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let (m, n) = (g.order, h.order);
        let table: Vec<Vec<usize>> = (0..m * n)
            .map(|x| {
                (0..m * n)
                    .map(|y| g.mul(x / n, y / n) * n + h.mul(x % n, y % n))
                    .collect()
            })
            .collect();
        Self::from_table(&table).expect("product table")
    }

    /// Symmetric group on three letters, elements ordered as permutations
    /// in lexicographic order of their images (identity first).
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] =
            [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let table: Vec<Vec<usize>> = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    // (a * b)(x) = a(b(x))
                    .map(|b| index([a[b[0]], a[b[1]], a[b[2]]]))
                    .collect()
            })
            .collect();
        Self::from_table(&table).expect("S3 table")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    /// Evaluates a word of signed generator indices (`k+1` for generator
    /// `k`, `-(k+1)` for its inverse) with the given generator images.
    pub fn evaluate(&self, images: &[usize], word: &[i32]) -> usize {
        word.iter().fold(0, |acc, &l| {
            let g = images[l.unsigned_abs() as usize - 1];
            self.mul(acc, if l > 0 { g } else { self.inv(g) })
        })
    }

    /// Smallest subgroup containing `gens`, as a sorted element list.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.order).filter(|&x| seen[x]).collect()
    }
}

/// A group isomorphism `u: source -> target`, stored as an index map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupIso {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    map: Vec<usize>,
}

impl GroupIso {
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: Vec<usize>) -> Result<Self> {
        let n = source.order();
        if target.order() != n || map.len() != n {
            return Err(Error::InvalidIsomorphism("orders differ".into()));
        }
        let mut hit = vec![false; n];
        for &x in &map {
            if x >= n || std::mem::replace(&mut hit[x], true) {
                return Err(Error::InvalidIsomorphism("not a bijection".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(Error::InvalidIsomorphism(format!(
                        "u({a}*{b}) != u({a})*u({b})"
                    )));
                }
            }
        }
        Ok(GroupIso { source, target, map })
    }

    pub fn identity(group: Arc<FiniteGroup>) -> Self {
        let map = group.elements().collect();
        GroupIso { source: group.clone(), target: group, map }
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    #[inline]
    pub fn apply(&self, g: usize) -> usize {
        self.map[g]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (a, &b) in self.map.iter().enumerate() {
            inv[b] = a;
        }
        GroupIso { source: self.target.clone(), target: self.source.clone(), map: inv }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_and_c2() {
        assert_eq!(FiniteGroup::from_table(&[vec![0]]).unwrap().order(), 1);
        let c2 = FiniteGroup::from_table(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(c2.order(), 2);
        assert_eq!(c2.inv(1), 1);
    }

    #[test]
    fn table_errors_are_distinct() {
        assert_eq!(
            FiniteGroup::from_table(&[vec![0, 1], vec![1, 1]]),
            Err(Error::MissingInverse(1))
        );
        assert_eq!(FiniteGroup::from_table(&[vec![1, 0], vec![0, 0]]), Err(Error::MissingIdentity));
        assert_eq!(FiniteGroup::from_table(&[vec![1, 0], vec![0, 1]]), Err(Error::IdentityNotFirst(1)));
        assert_eq!(FiniteGroup::from_table(&[vec![0, 2], vec![1, 0]]), Err(Error::MalformedTable));
        // a loop with identity and inverses that is not associative
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_table(&t), Err(Error::NotAssociative(..))));
    }

    #[test]
    fn standard_groups_validate() {
        for g in [
            FiniteGroup::cyclic(4),
            FiniteGroup::symmetric3(),
            FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)),
        ] {
            FiniteGroup::from_table(&g.table()).unwrap();
        }
        let s3 = FiniteGroup::symmetric3();
        assert!((0..6).any(|a| (0..6).any(|b| s3.mul(a, b) != s3.mul(b, a))));
    }

    #[test]
    fn isomorphism_candidates() {
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        assert!(GroupIso::new(c2.clone(), c2.clone(), vec![0, 1]).is_ok());
        assert!(GroupIso::new(c2.clone(), c2.clone(), vec![1, 0]).is_err());

        let c3 = Arc::new(FiniteGroup::cyclic(3));
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let valid: Vec<_> = perms
            .iter()
            .filter(|p| GroupIso::new(c3.clone(), c3.clone(), p.to_vec()).is_ok())
            .collect();
        assert_eq!(valid, vec![&[0, 1, 2], &[0, 2, 1]]);
    }

    #[test]
    fn words() {
        let c3 = FiniteGroup::cyclic(3);
        assert_eq!(c3.evaluate(&[1], &[1, 1, 1]), 0);
        assert_eq!(c3.evaluate(&[1], &[-1]), 2);
        assert_eq!(c3.generated_subgroup(&[1]).len(), 3);
    }
}
