//! Bundled example complexes and seeded random instances.

use std::collections::VecDeque;
use std::sync::Arc;

use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::chain::{presentation_complex, AugmentedComplex, ChainComplex, PiModule, SubcomplexMarker, Word};
use crate::error::Result;
use crate::exactlinalg::{kernel_basis, Int, IntMatrix};
use crate::groupring::{FiniteGroup, GroupIso, GroupRingMatrix};

/// A finite presentation together with the images of its generators.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub group: Arc<FiniteGroup>,
    pub images: Vec<usize>,
    pub relators: Vec<Word>,
}

impl Presentation {
    /// `<x | x^n>`.
    pub fn cyclic(n: usize) -> Self {
        Presentation { group: Arc::new(FiniteGroup::cyclic(n)), images: vec![1 % n], relators: vec![vec![1; n]] }
    }

    /// `<x, y | x^2, y^2, x y x^-1 y^-1>`.
    pub fn klein_four() -> Self {
        let c2 = FiniteGroup::cyclic(2);
        Presentation {
            group: Arc::new(FiniteGroup::product(&c2, &c2)),
            images: vec![2, 1],
            relators: vec![vec![1, 1], vec![2, 2], vec![1, 2, -1, -2]],
        }
    }

    /// `<x, y | x^2, y^3, x y x y>` with `x` a transposition.
    pub fn symmetric3() -> Self {
        Presentation {
            group: Arc::new(FiniteGroup::symmetric3()),
            images: vec![1, 3],
            relators: vec![vec![1, 1], vec![2, 2, 2], vec![1, 2, 1, 2]],
        }
    }

    pub fn generators(&self) -> usize {
        self.images.len()
    }

    pub fn complex(&self) -> Result<AugmentedComplex> {
        presentation_complex(self.group.clone(), &self.images, &self.relators)
    }

    /// Shortest words for every group element in the generators.
    pub fn words(&self) -> Vec<Word> {
        let n = self.group.order();
        let mut words: Vec<Option<Word>> = vec![None; n];
        words[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            let w = words[x].clone().expect("visited");
            for k in 0..self.generators() {
                for letter in [k as i32 + 1, -(k as i32) - 1] {
                    let y = self.group.evaluate(&self.images, &[letter]);
                    let z = self.group.mul(x, y);
                    if words[z].is_none() {
                        let mut wz = w.clone();
                        wz.push(letter);
                        words[z] = Some(wz);
                        queue.push_back(z);
                    }
                }
            }
        }
        words.into_iter().map(|w| w.expect("generators generate")).collect()
    }

    /// Homomorphisms to `{1, -1}`, as sign lists over the group elements.
    pub fn sign_characters(&self) -> Vec<Vec<i64>> {
        let words = self.words();
        let m = self.generators();
        (0..1usize << m)
            .filter_map(|mask| {
                let sign = |w: &[i32]| -> i64 {
                    w.iter().map(|&l| if mask >> (l.unsigned_abs() - 1) & 1 == 1 { -1 } else { 1 }).product()
                };
                if self.relators.iter().any(|r| sign(r) != 1) {
                    return None;
                }
                Some(words.iter().map(|w| sign(w)).collect())
            })
            .collect()
    }
}

/// One vertex and nothing else, over the trivial group.
pub fn point() -> AugmentedComplex {
    let t = Arc::new(FiniteGroup::trivial());
    let c = ChainComplex::new(
        t.clone(),
        vec![1, 0, 0],
        vec![GroupRingMatrix::zeros(t.clone(), 1, 0), GroupRingMatrix::zeros(t, 0, 0)],
    )
    .expect("point");
    AugmentedComplex::new(c, vec![Int::one()]).expect("point")
}

/// The 2-sphere with one vertex and one 2-cell.
pub fn s2() -> AugmentedComplex {
    let t = Arc::new(FiniteGroup::trivial());
    let c = ChainComplex::new(
        t.clone(),
        vec![1, 0, 1],
        vec![GroupRingMatrix::zeros(t.clone(), 1, 0), GroupRingMatrix::zeros(t, 0, 1)],
    )
    .expect("S2");
    AugmentedComplex::new(c, vec![Int::one()]).expect("S2")
}

/// The universal cover of `RP^2` as the presentation complex of `<x | x^2>`.
pub fn rp2() -> AugmentedComplex {
    Presentation::cyclic(2).complex().expect("RP2")
}

/// The lens space `L(n, 1)`: `<x | x^n>` with a 3-cell attached along
/// `(x - 1) e_2`.
pub fn lens(n: usize) -> AugmentedComplex {
    let p = Presentation::cyclic(n);
    let k = p.complex().expect("presentation");
    let mut coeffs = vec![0i64; n];
    coeffs[0] = -1;
    coeffs[1 % n] += 1;
    let cell = GroupRingMatrix::from_i64(p.group.clone(), &[vec![coeffs]]).expect("boundary");
    let empty0 = GroupRingMatrix::zeros(p.group.clone(), k.rank(0), 0);
    let empty1 = GroupRingMatrix::zeros(p.group.clone(), k.rank(1), 0);
    k.extended(&[empty0, empty1, cell]).expect("lens space")
}

pub fn rp3() -> AugmentedComplex {
    lens(2)
}

/// A named example complex.
#[derive(Clone, Debug)]
pub struct Example {
    pub name: &'static str,
    pub complex: AugmentedComplex,
}

/// The bundled examples.
pub fn bundled() -> Vec<Example> {
    let c3 = Presentation::cyclic(3).complex().expect("C3 presentation");
    let klein = Presentation::klein_four().complex().expect("Klein four presentation");
    vec![
        Example { name: "point", complex: point() },
        Example { name: "s2", complex: s2() },
        Example { name: "rp2", complex: rp2() },
        Example { name: "rp3", complex: rp3() },
        Example { name: "lens3", complex: lens(3) },
        Example { name: "c3", complex: c3 },
        Example { name: "klein", complex: klein },
    ]
}

pub fn example(name: &str) -> Option<AugmentedComplex> {
    bundled().into_iter().find(|e| e.name == name).map(|e| e.complex)
}

/// Nontrivial automorphisms of a group, found by brute force over the
/// images of a generating pair (groups here are tiny).
pub fn automorphisms(p: &Presentation) -> Vec<GroupIso> {
    let g = &p.group;
    let n = g.order();
    let words = p.words();
    let m = p.generators();
    let mut out = Vec::new();
    let mut images = vec![0usize; m];
    loop {
        let ok = p.relators.iter().all(|r| g.evaluate(&images, r) == 0);
        if ok {
            let map: Vec<usize> = words.iter().map(|w| g.evaluate(&images, w)).collect();
            let identity = map.iter().enumerate().all(|(a, &b)| a == b);
            if !identity {
                if let Ok(u) = GroupIso::new(g.clone(), g.clone(), map) {
                    out.push(u);
                }
            }
        }
        let mut k = 0;
        while k < m {
            images[k] += 1;
            if images[k] < n {
                break;
            }
            images[k] = 0;
            k += 1;
        }
        if k == m {
            return out;
        }
    }
}

fn random_word(rng: &mut ChaCha8Rng, gens: usize, max_len: usize) -> Word {
    let len = rng.gen_range(1..=max_len);
    (0..len)
        .map(|_| {
            let k = rng.gen_range(0..gens) as i32 + 1;
            if rng.gen_bool(0.5) {
                k
            } else {
                -k
            }
        })
        .collect()
}

/// Random extra relators and (optionally) one Tietze generator added to a
/// base presentation. The result presents the same group.
pub fn random_presentation(rng: &mut ChaCha8Rng, base: &Presentation, extra_relators: usize, tietze: bool) -> Presentation {
    let mut p = base.clone();
    if tietze {
        let w = random_word(rng, p.generators(), 3);
        let image = p.group.evaluate(&p.images, &w);
        let y = p.generators() as i32 + 1;
        let mut relator = vec![y];
        relator.extend(w.iter().rev().map(|l| -l));
        p.images.push(image);
        p.relators.push(relator);
    }
    let words = p.words();
    for _ in 0..extra_relators {
        let u = random_word(rng, p.generators(), 4);
        let g = p.group.evaluate(&p.images, &u);
        let mut relator = u;
        relator.extend(words[p.group.inv(g)].iter().copied());
        p.relators.push(relator);
    }
    p.relators.shuffle(rng);
    p
}

/// A random 2-cycle of `k`, as a column over the flattened basis.
fn random_cycle(rng: &mut ChaCha8Rng, k: &AugmentedComplex) -> Option<IntMatrix> {
    let z = kernel_basis(&k.d(2).flatten());
    if z.cols() == 0 {
        return None;
    }
    let mut v = IntMatrix::zeros(z.rows(), 1);
    for _ in 0..2 {
        let j = rng.gen_range(0..z.cols());
        let c = Int::from(rng.gen_range(-1i64..=1));
        v = &v + &z.select_columns(&[j]).scale(&c);
    }
    (!v.is_zero()).then_some(v)
}

/// Attaches up to `cells` 3-cells along random 2-cycles.
pub fn with_random_3_cells(rng: &mut ChaCha8Rng, k: &AugmentedComplex, cells: usize) -> Result<AugmentedComplex> {
    let mut cols = Vec::new();
    for _ in 0..cells {
        if let Some(v) = random_cycle(rng, k) {
            cols.push(v);
        }
    }
    if cols.is_empty() {
        return Ok(k.clone());
    }
    let images = cols.iter().skip(1).try_fold(cols[0].clone(), |acc, c| acc.hstack(c))?;
    let g = k.group().clone();
    let block = GroupRingMatrix::from_basis_images(g.clone(), k.rank(2), &images)?;
    k.extended(&[
        GroupRingMatrix::zeros(g.clone(), k.rank(0), 0),
        GroupRingMatrix::zeros(g, k.rank(1), 0),
        block,
    ])
}

/// A random basis-spanned subcomplex: random cells, closed under taking
/// boundaries.
pub fn random_subcomplex(rng: &mut ChaCha8Rng, k: &ChainComplex) -> SubcomplexMarker {
    let top = k.top();
    let mut chosen: Vec<Vec<bool>> = (0..=top).map(|i| (0..k.rank(i)).map(|_| rng.gen_bool(0.5)).collect()).collect();
    close_downward(k, &mut chosen);
    to_marker(&chosen)
}

/// A random subcomplex containing every cell of degrees 0 and 1.
pub fn random_marker_with_1_skeleton(rng: &mut ChaCha8Rng, k: &ChainComplex) -> SubcomplexMarker {
    let top = k.top();
    let mut chosen: Vec<Vec<bool>> = (0..=top)
        .map(|i| (0..k.rank(i)).map(|_| i <= 1 || rng.gen_bool(0.4)).collect())
        .collect();
    // drop top cells whose boundary is not marked instead of adding cells
    for i in 2..=top {
        let d = k.d(i);
        for j in 0..k.rank(i) {
            if chosen[i][j] && (0..k.rank(i - 1)).any(|r| !chosen[i - 1][r] && !d.entry(r, j).is_zero()) {
                chosen[i][j] = false;
            }
        }
    }
    to_marker(&chosen)
}

/// A random pair `L ⊆ L'` of subcomplexes.
pub fn random_nested(rng: &mut ChaCha8Rng, k: &ChainComplex) -> (SubcomplexMarker, SubcomplexMarker) {
    let outer = random_subcomplex(rng, k);
    let top = k.top();
    let mut chosen: Vec<Vec<bool>> =
        (0..=top).map(|i| (0..k.rank(i)).map(|j| outer.contains(i, j) && rng.gen_bool(0.5)).collect()).collect();
    close_downward(k, &mut chosen);
    (to_marker(&chosen), outer)
}

fn close_downward(k: &ChainComplex, chosen: &mut [Vec<bool>]) {
    for i in (1..chosen.len()).rev() {
        let d = k.d(i);
        for j in 0..k.rank(i) {
            if chosen[i][j] {
                for r in 0..k.rank(i - 1) {
                    if !d.entry(r, j).is_zero() {
                        chosen[i - 1][r] = true;
                    }
                }
            }
        }
    }
}

fn to_marker(chosen: &[Vec<bool>]) -> SubcomplexMarker {
    SubcomplexMarker::new(
        chosen.iter().map(|c| c.iter().enumerate().filter(|(_, &b)| b).map(|(j, _)| j).collect()).collect(),
    )
}

/// Coefficient modules for a presentation: trivial `Z`, trivial `Z/2`,
/// and the sign modules of its characters.
pub fn coefficient_modules(p: &Presentation) -> Vec<PiModule> {
    let n = p.group.order();
    let mut out = vec![PiModule::trivial(p.group.clone())];
    let z2 = PiModule::new(p.group.clone(), 1, IntMatrix::from_rows(&[[2]]), vec![IntMatrix::identity(1); n]);
    out.extend(z2);
    for s in p.sign_characters() {
        if s.contains(&-1) {
            out.extend(PiModule::sign(p.group.clone(), &s));
        }
    }
    out
}
