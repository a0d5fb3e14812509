//! The finite image of the braid group in Q_n.
//!
//! Conjugation x ↦ s_i⁻¹ x s_i sends every basis word to ± a basis word, so
//! the group G_n generated by s_1, …, s_{n−1} acts on Q_n through signed
//! permutations. The image of that action is G_n / (G_n ∩ Z(Q_n)).
//!
//! Conjugation is an algebra automorphism, so an element of the image is
//! pinned down by where it sends the 2(n−1) generators u_j, v_j. Group
//! enumeration works with these generator images ([`Automorphism`]) instead
//! of full permutations of all 4^{n−1} words; [`Automorphism::to_permutation`]
//! expands one back.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{center, Element, Word};
use crate::error::{Error, Result};
use crate::hecke::HeckeGenerators;
use crate::linalg::determinant;
use crate::scalar::Scalar;

pub const DEFAULT_MAX_ELEMENTS: usize = 2_000_000;

/// Largest n for which full 4^{n−1}-entry permutations are built.
pub const MAX_PERMUTATION_STRANDS: usize = 10;

/// Largest n for which G_n itself is enumerated inside Q_n.
pub const MAX_ALGEBRA_GROUP_STRANDS: usize = 4;

/// Largest n accepted by [`left_regular_determinant`].
pub const MAX_DETERMINANT_STRANDS: usize = 4;

fn check_generator(i: usize, n: usize) -> Result<()> {
    if i == 0 || i >= n {
        return Err(Error::GeneratorOutOfRange { index: i as i64, strands: n });
    }
    Ok(())
}

fn check_strands(n: usize, max: usize) -> Result<()> {
    if !(2..=max).contains(&n) {
        return Err(Error::StrandsOutOfRange { n, min: 2, max });
    }
    Ok(())
}

/// A signed permutation of the word basis of Q_n, indexed by [`Word::index`]:
/// basis word x goes to (−1)^{neg[x]} · word perm[x].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    n: usize,
    perm: Vec<u32>,
    neg: Vec<bool>,
}

impl SignedPermutation {
    pub fn identity(n: usize) -> Self {
        let len = Word::count(n);
        SignedPermutation { n, perm: (0..len as u32).collect(), neg: vec![false; len] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Image of word `w` as (negative, word).
    pub fn image(&self, w: Word) -> (bool, Word) {
        let x = w.index();
        (self.neg[x], Word::from_index(self.n, self.perm[x] as usize))
    }

    /// self ∘ other.
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        assert_eq!(self.n, other.n);
        let (perm, neg) =
            other.perm.iter().zip(&other.neg).map(|(&y, &s)| (self.perm[y as usize], s ^ self.neg[y as usize])).unzip();
        SignedPermutation { n: self.n, perm, neg }
    }

    pub fn inverse(&self) -> SignedPermutation {
        let mut perm = vec![0u32; self.len()];
        let mut neg = vec![false; self.len()];
        for (x, (&y, &s)) in self.perm.iter().zip(&self.neg).enumerate() {
            perm[y as usize] = x as u32;
            neg[y as usize] = s;
        }
        SignedPermutation { n: self.n, perm, neg }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(x, &y)| x as u32 == y) && !self.neg.iter().any(|&s| s)
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.len()];
        self.perm.iter().all(|&y| (y as usize) < seen.len() && !std::mem::replace(&mut seen[y as usize], true))
    }

    /// Smallest k ≥ 1 with selfᵏ = 1, or `None` past `limit`.
    pub fn order(&self, limit: u64) -> Option<u64> {
        let mut p = self.clone();
        for k in 1..=limit {
            if p.is_identity() {
                return Some(k);
            }
            p = self.compose(&p);
        }
        None
    }

    /// Little-endian perm entries followed by the sign bits, packed.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 * self.len() + self.len().div_ceil(8));
        for y in &self.perm {
            out.extend_from_slice(&y.to_le_bytes());
        }
        for chunk in self.neg.chunks(8) {
            out.push(chunk.iter().enumerate().fold(0u8, |b, (k, &s)| b | (s as u8) << k));
        }
        out
    }
}

/// w ↦ s_i⁻¹ w s_i on every basis word, computed by multiplication in Q_n.
pub fn conjugation_action(i: usize, n: usize) -> Result<SignedPermutation> {
    check_strands(n, MAX_PERMUTATION_STRANDS)?;
    check_generator(i, n)?;
    let g = HeckeGenerators::new(n)?;
    let images: Vec<(bool, Word)> = Word::all(n)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|w| {
            let c = &(g.s_inv(i) * &Element::word(w)) * g.s(i);
            c.as_signed_word().ok_or_else(|| Error::NotSignedWord {
                generator: i,
                word: w.to_string(),
                image: c.to_string(),
            })
        })
        .collect::<Result<_>>()?;
    let (neg, perm) = images.into_iter().map(|(s, w)| (s, w.index() as u32)).unzip();
    Ok(SignedPermutation { n, perm, neg })
}

/// Number of pairs (i, w) for which s_i⁻¹ w s_i is not ± a single word.
pub fn signed_word_violations(n: usize) -> Result<usize> {
    check_strands(n, MAX_PERMUTATION_STRANDS)?;
    let g = HeckeGenerators::new(n)?;
    let words: Vec<Word> = Word::all(n).collect();
    Ok((1..n)
        .map(|i| {
            words
                .par_iter()
                .filter(|&&w| (&(g.s_inv(i) * &Element::word(w)) * g.s(i)).as_signed_word().is_none())
                .count()
        })
        .sum())
}

/// An automorphism of Q_n that maps each generator to ± a word, stored as
/// the images of u_1, …, u_{n−1}, v_1, …, v_{n−1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Automorphism {
    n: usize,
    images: Vec<(bool, Word)>,
}

impl Automorphism {
    pub fn identity(n: usize) -> Self {
        let images = (1..n).map(|j| Word::u(n, j)).chain((1..n).map(|j| Word::v(n, j))).map(|w| (false, w)).collect();
        Automorphism { n, images }
    }

    fn from_conjugation(n: usize, left: &Element, right: &Element) -> Result<Self> {
        let images = Automorphism::identity(n)
            .images
            .into_iter()
            .map(|(_, w)| {
                let c = &(left * &Element::word(w)) * right;
                c.as_signed_word().ok_or_else(|| Error::NotSignedWord {
                    generator: 0,
                    word: w.to_string(),
                    image: c.to_string(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(Automorphism { n, images })
    }

    /// x ↦ s_i⁻¹ x s_i.
    pub fn conjugation(i: usize, n: usize) -> Result<Self> {
        check_generator(i, n)?;
        let g = HeckeGenerators::new(n)?;
        Automorphism::from_conjugation(n, g.s_inv(i), g.s(i)).map_err(|e| with_generator(e, i))
    }

    /// x ↦ s_i x s_i⁻¹.
    pub fn inverse_conjugation(i: usize, n: usize) -> Result<Self> {
        check_generator(i, n)?;
        let g = HeckeGenerators::new(n)?;
        Automorphism::from_conjugation(n, g.s(i), g.s_inv(i)).map_err(|e| with_generator(e, i))
    }

    /// Restriction of a signed permutation that respects multiplication.
    pub fn from_permutation(p: &SignedPermutation) -> Self {
        let images = Automorphism::identity(p.n).images.into_iter().map(|(_, w)| p.image(w)).collect();
        Automorphism { n: p.n, images }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Images of u_1, …, u_{n−1}, v_1, …, v_{n−1} in that order.
    pub fn images(&self) -> &[(bool, Word)] {
        &self.images
    }

    /// Image of a basis word: the product of the generator images in the
    /// word's normal-form order.
    pub fn apply(&self, w: Word) -> (bool, Word) {
        let m = self.n - 1;
        let mut acc = (false, Word::identity(self.n));
        for (k, &(s, img)) in self.images.iter().enumerate() {
            let bit = if k < m { w.eps() >> k & 1 } else { w.nu() >> (k - m) & 1 };
            if bit == 1 {
                let (neg, prod) = acc.1.mul_unchecked(&img);
                acc = (acc.0 ^ s ^ neg, prod);
            }
        }
        acc
    }

    /// self ∘ other.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        let images = other
            .images
            .iter()
            .map(|&(s, w)| {
                let (t, x) = self.apply(w);
                (s ^ t, x)
            })
            .collect();
        Automorphism { n: self.n, images }
    }

    pub fn is_identity(&self) -> bool {
        *self == Automorphism::identity(self.n)
    }

    pub fn order(&self, limit: u64) -> Option<u64> {
        let mut p = self.clone();
        for k in 1..=limit {
            if p.is_identity() {
                return Some(k);
            }
            p = self.compose(&p);
        }
        None
    }

    /// The full signed permutation of all 4^{n−1} words.
    pub fn to_permutation(&self) -> SignedPermutation {
        let (neg, perm) = Word::all(self.n)
            .map(|w| {
                let (s, x) = self.apply(w);
                (s, x.index() as u32)
            })
            .unzip();
        SignedPermutation { n: self.n, perm, neg }
    }

    /// Compact hash key: one u64 per image plus one word of sign bits.
    pub fn key(&self) -> Vec<u64> {
        let mut signs = 0u64;
        let mut key: Vec<u64> = self
            .images
            .iter()
            .enumerate()
            .map(|(k, &(s, w))| {
                signs |= (s as u64) << k;
                (w.eps() as u64) << 32 | w.nu() as u64
            })
            .collect();
        key.push(signs);
        key
    }
}

fn with_generator(e: Error, i: usize) -> Error {
    match e {
        Error::NotSignedWord { word, image, .. } => Error::NotSignedWord { generator: i, word, image },
        other => other,
    }
}

/// The enumerated conjugation image.
#[derive(Clone, Debug)]
pub struct ImageGroup {
    pub n: usize,
    pub generators: Vec<Automorphism>,
    pub elements: Vec<Automorphism>,
}

impl ImageGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements commuting with every generator.
    pub fn center(&self) -> Vec<Automorphism> {
        self.elements
            .par_iter()
            .filter(|z| self.generators.iter().all(|g| z.compose(g) == g.compose(z)))
            .cloned()
            .collect()
    }
}

pub enum Enumeration {
    Complete(ImageGroup),
    /// More than `cap` elements were found; `visited` were stored.
    CapExceeded {
        visited: usize,
        cap: usize,
    },
}

/// Breadth-first closure of the conjugation actions of the s_i and their
/// inverses. Each frontier is expanded in parallel and merged in order, so
/// the element list does not depend on the thread count.
pub fn enumerate_image(n: usize, max_elements: usize) -> Result<Enumeration> {
    check_strands(n, crate::algebra::MAX_STRANDS)?;
    let generators = (1..n).map(|i| Automorphism::conjugation(i, n)).collect::<Result<Vec<_>>>()?;
    let inverses = (1..n).map(|i| Automorphism::inverse_conjugation(i, n)).collect::<Result<Vec<_>>>()?;
    let moves: Vec<&Automorphism> = generators.iter().chain(&inverses).collect();
    let id = Automorphism::identity(n);
    let mut seen: HashSet<Vec<u64>> = HashSet::from([id.key()]);
    let mut elements = vec![id];
    let mut start = 0;
    while start < elements.len() {
        let end = elements.len();
        let products: Vec<(Vec<u64>, Automorphism)> = elements[start..end]
            .par_iter()
            .flat_map_iter(|x| moves.iter().map(move |g| g.compose(x)))
            .map(|p| (p.key(), p))
            .collect();
        for (key, p) in products {
            if seen.insert(key) {
                if elements.len() >= max_elements {
                    return Ok(Enumeration::CapExceeded { visited: elements.len(), cap: max_elements });
                }
                elements.push(p);
            }
        }
        start = end;
    }
    Ok(Enumeration::Complete(ImageGroup { n, generators, elements }))
}

/// (1/3) · 2^{(n−1)(n−2)/2} · ∏_{i=1}^{n−1} (2^i − (−1)^i), the approximate
/// projective order; `None` on overflow.
pub fn formula_estimate(n: usize) -> Option<u128> {
    if n < 2 {
        return None;
    }
    let mut acc: u128 = 1u128.checked_shl(((n - 1) * (n - 2) / 2) as u32)?;
    for i in 1..n as u32 {
        let two_i = 1u128.checked_shl(i)?;
        let term = if i % 2 == 0 { two_i - 1 } else { two_i + 1 };
        acc = acc.checked_mul(term)?;
    }
    Some(acc / 3)
}

/// Upper bound on |G_n ∩ Z(Q_n)| and whether it is only a bound.
///
/// For 3 ∤ n the center is Q(ζ)·1 and the only roots of unity in Q(ζ) are
/// the sixth roots. For 3 | n the center is spanned by commuting 1, U, V, UV
/// with U² = V² = 1, i.e. it is Q(ζ)⁴, whose torsion units number 6⁴.
pub fn kernel_bound(n: usize) -> (u64, bool) {
    if n.is_multiple_of(3) {
        (1296, true)
    } else {
        (6, false)
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GroupReport {
    pub n: usize,
    pub max_elements: usize,
    pub conclusive: bool,
    pub elements_visited: usize,
    pub image_order: Option<u64>,
    pub image_center_order: Option<u64>,
    pub projective_order: Option<u64>,
    /// Order of each conjugation action σ(s_i) in the image.
    pub generator_order: Vec<u64>,
    pub generator_cubes_trivial: bool,
    pub braid_relations_hold: bool,
    pub formula_estimate: Option<u128>,
    /// image order × kernel bound; an upper bound on |G_n|.
    pub group_order_bound: Option<u64>,
    pub kernel_bound: u64,
    pub kernel_bound_approximate: bool,
}

/// Braid relations and σ(s_i)³ = 1 for the generator automorphisms.
pub fn check_generator_relations(generators: &[Automorphism]) -> (bool, bool) {
    let cubes = generators.iter().all(|g| g.compose(&g.compose(g)).is_identity());
    let mut braids = true;
    for (a, ga) in generators.iter().enumerate() {
        for (b, gb) in generators.iter().enumerate().skip(a + 1) {
            braids &= if b == a + 1 {
                ga.compose(&gb.compose(ga)) == gb.compose(&ga.compose(gb))
            } else {
                ga.compose(gb) == gb.compose(ga)
            };
        }
    }
    (braids, cubes)
}

pub fn enumerate_group(n: usize, max_elements: usize) -> Result<GroupReport> {
    let enumeration = enumerate_image(n, max_elements)?;
    let generators = (1..n).map(|i| Automorphism::conjugation(i, n)).collect::<Result<Vec<_>>>()?;
    let (braid_relations_hold, generator_cubes_trivial) = check_generator_relations(&generators);
    let generator_order = generators.iter().map(|g| g.order(1 << 20).unwrap_or(0)).collect();
    let (kernel_bound, kernel_bound_approximate) = kernel_bound(n);
    let mut report = GroupReport {
        n,
        max_elements,
        conclusive: false,
        elements_visited: 0,
        image_order: None,
        image_center_order: None,
        projective_order: None,
        generator_order,
        generator_cubes_trivial,
        braid_relations_hold,
        formula_estimate: formula_estimate(n),
        group_order_bound: None,
        kernel_bound,
        kernel_bound_approximate,
    };
    match enumeration {
        Enumeration::CapExceeded { visited, .. } => report.elements_visited = visited,
        Enumeration::Complete(group) => {
            let order = group.order() as u64;
            let z = group.center().len() as u64;
            report.conclusive = true;
            report.elements_visited = group.order();
            report.image_order = Some(order);
            report.image_center_order = Some(z);
            report.projective_order = Some(order / z);
            report.group_order_bound = order.checked_mul(kernel_bound);
        }
    }
    Ok(report)
}

/// G_n enumerated inside Q_n itself, for small n.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AlgebraGroupReport {
    pub n: usize,
    pub order: u64,
    /// Elements acting trivially by conjugation, i.e. G_n ∩ Z(Q_n).
    pub kernel_order: u64,
    /// Every kernel element is supported on the center basis words.
    pub kernel_in_center: bool,
    /// Every kernel element is a scalar root of unity.
    pub kernel_scalar: bool,
    /// |G_n| / |kernel|, to compare with the conjugation image.
    pub image_order: u64,
}

pub fn enumerate_algebra_group(n: usize, max_elements: usize) -> Result<AlgebraGroupReport> {
    check_strands(n, MAX_ALGEBRA_GROUP_STRANDS)?;
    let g = HeckeGenerators::new(n)?;
    let moves: Vec<&Element> = (1..n).flat_map(|i| [g.s(i), g.s_inv(i)]).collect();
    let mut seen: HashSet<Element> = HashSet::from([Element::one(n)]);
    let mut elements = vec![Element::one(n)];
    let mut start = 0;
    while start < elements.len() {
        let end = elements.len();
        for k in start..end {
            for m in &moves {
                let p = &elements[k] * *m;
                if seen.insert(p.clone()) {
                    if elements.len() >= max_elements {
                        return Err(Error::CapExceeded { cap: max_elements });
                    }
                    elements.push(p);
                }
            }
        }
        start = end;
    }
    let gens: Vec<Element> =
        (1..n).flat_map(|j| [Element::word(Word::u(n, j)), Element::word(Word::v(n, j))]).collect();
    let center_words: HashSet<Word> = center(n)?.into_iter().collect();
    let kernel: Vec<&Element> = elements.iter().filter(|x| gens.iter().all(|w| (*x * w) == (w * *x))).collect();
    let kernel_in_center = kernel.iter().all(|x| x.terms().all(|(w, _)| center_words.contains(w)));
    let kernel_scalar = kernel.iter().all(|x| x.as_scalar().is_some_and(|c| c.root_of_unity_exponent().is_some()));
    let order = elements.len() as u64;
    let kernel_order = kernel.len() as u64;
    Ok(AlgebraGroupReport {
        n,
        order,
        kernel_order,
        kernel_in_center,
        kernel_scalar,
        image_order: order / kernel_order,
    })
}

/// Determinant of x ↦ s_i x on Q_n.
pub fn left_regular_determinant(i: usize, n: usize) -> Result<Scalar> {
    check_strands(n, MAX_DETERMINANT_STRANDS)?;
    check_generator(i, n)?;
    let g = HeckeGenerators::new(n)?;
    let words: Vec<Word> = Word::all(n).collect();
    let columns: Vec<Vec<Scalar>> = words.iter().map(|&w| (g.s(i) * &Element::word(w)).to_dense()).collect();
    let size = words.len();
    let rows = (0..size).map(|r| (0..size).map(|c| columns[c][r].clone()).collect()).collect();
    Ok(determinant(rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugation_examples() {
        let p = conjugation_action(1, 2).unwrap();
        assert_eq!(p.image(Word::u(2, 1)), (false, Word::new(2, 1, 1).unwrap()));
        assert_eq!(p.image(Word::identity(2)), (false, Word::identity(2)));
        let p = conjugation_action(1, 3).unwrap();
        assert_eq!(p.image(Word::v(3, 2)), (true, Word::new(3, 0b01, 0b11).unwrap()));
        assert!(p.is_bijection());
        assert!(conjugation_action(3, 3).is_err());
    }

    #[test]
    fn automorphism_matches_full_permutation() {
        for n in 2..=5 {
            for i in 1..n {
                let full = conjugation_action(i, n).unwrap();
                let auto = Automorphism::conjugation(i, n).unwrap();
                assert_eq!(Automorphism::from_permutation(&full), auto);
                assert_eq!(auto.to_permutation(), full, "n={n} i={i}");
                let inv = Automorphism::inverse_conjugation(i, n).unwrap();
                assert_eq!(inv.to_permutation(), full.inverse());
            }
        }
    }

    #[test]
    fn permutation_relations() {
        let n = 4;
        let c: Vec<SignedPermutation> = (1..n).map(|i| conjugation_action(i, n).unwrap()).collect();
        for p in &c {
            assert_eq!(p.order(10), Some(3));
        }
        assert_eq!(c[0].compose(&c[1]).compose(&c[0]), c[1].compose(&c[0]).compose(&c[1]));
        assert_eq!(c[0].compose(&c[2]), c[2].compose(&c[0]));
        assert!(c[0].compose(&c[0].inverse()).is_identity());
        assert_ne!(c[0].canonical_bytes(), c[1].canonical_bytes());
        assert_eq!(c[0].canonical_bytes().len(), 4 * 64 + 8);
    }

    #[test]
    fn small_images() {
        let r = enumerate_group(2, 100).unwrap();
        assert_eq!(r.image_order, Some(3));
        assert_eq!(r.generator_order, vec![3]);
        assert!(r.braid_relations_hold && r.generator_cubes_trivial);
        let r = enumerate_group(3, 1000).unwrap();
        assert!(r.conclusive);
        assert!(matches!(enumerate_image(4, 10).unwrap(), Enumeration::CapExceeded { visited: 10, .. }));
    }

    #[test]
    fn image_order_agrees_with_algebra_enumeration() {
        for n in 2..=4 {
            let a = enumerate_algebra_group(n, 100_000).unwrap();
            let r = enumerate_group(n, 100_000).unwrap();
            assert_eq!(Some(a.image_order), r.image_order, "n={n}");
            assert!(a.kernel_in_center);
            if n % 3 != 0 {
                assert!(a.kernel_scalar);
            }
            assert!(a.kernel_order <= r.kernel_bound);
        }
    }

    #[test]
    fn formula_values() {
        assert_eq!(formula_estimate(2), Some(1));
        assert_eq!(formula_estimate(3), Some(6));
        assert_eq!(formula_estimate(5), Some(25920));
    }

    #[test]
    fn determinant_n2() {
        let d = left_regular_determinant(1, 2).unwrap();
        assert_eq!(d, Scalar::qpow(2));
        assert!(d.pow(6).is_one());
    }
}
