//! The algebra Q_n generated by u_1, v_1, …, u_{n−1}, v_{n−1} with
//!
//! * u_i² = v_i² = −1,
//! * u_i v_j = −v_j u_i when |i − j| ≤ 1, and u_i v_j = v_j u_i otherwise,
//! * all u's commute with each other, as do all v's.
//!
//! Every product of generators reduces to ± a normal-form word
//! u_1^{ε_1}…u_{n−1}^{ε_{n−1}} v_1^{ν_1}…v_{n−1}^{ν_{n−1}}, so Q_n has
//! dimension 4^{n−1}. Words carry the exponent vectors as bitmasks with bit
//! `i − 1` standing for index `i`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::f2::BitMatrix;
use crate::scalar::Scalar;

/// Largest strand count representable with 32-bit exponent masks.
pub const MAX_STRANDS: usize = 33;

/// A normal-form basis word of Q_n.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    n: u8,
    eps: u32,
    nu: u32,
}

fn mask(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        (((1u64) << (n - 1)) - 1) as u32
    }
}

fn check_strands(n: usize) -> Result<()> {
    if (1..=MAX_STRANDS).contains(&n) {
        Ok(())
    } else {
        Err(Error::StrandsOutOfRange { n, min: 1, max: MAX_STRANDS })
    }
}

impl Word {
    /// Word with the given exponent masks; bits beyond index n−1 are an error.
    pub fn new(n: usize, eps: u32, nu: u32) -> Result<Self> {
        check_strands(n)?;
        let m = mask(n);
        if eps & !m != 0 || nu & !m != 0 {
            return Err(Error::Unsupported(format!("exponent bits beyond index {} in Q_{n}", n - 1)));
        }
        Ok(Word { n: n as u8, eps, nu })
    }

    pub fn identity(n: usize) -> Self {
        Word { n: n as u8, eps: 0, nu: 0 }
    }

    /// The generator u_i (1-based).
    pub fn u(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i < n, "u_{i} does not exist in Q_{n}");
        Word { n: n as u8, eps: 1 << (i - 1), nu: 0 }
    }

    /// The generator v_i (1-based).
    pub fn v(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i < n, "v_{i} does not exist in Q_{n}");
        Word { n: n as u8, eps: 0, nu: 1 << (i - 1) }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn eps(&self) -> u32 {
        self.eps
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn is_identity(&self) -> bool {
        self.eps == 0 && self.nu == 0
    }

    /// Number of basis words of Q_n, 4^{n−1}.
    pub fn count(n: usize) -> usize {
        1usize << (2 * (n - 1))
    }

    /// Dense index `eps · 2^{n−1} + nu`.
    pub fn index(&self) -> usize {
        ((self.eps as usize) << (self.n as usize - 1)) | self.nu as usize
    }

    pub fn from_index(n: usize, idx: usize) -> Self {
        let shift = n - 1;
        Word { n: n as u8, eps: (idx >> shift) as u32, nu: (idx & ((1 << shift) - 1)) as u32 }
    }

    /// All 4^{n−1} words in index order.
    pub fn all(n: usize) -> impl Iterator<Item = Word> {
        (0..Word::count(n)).map(move |k| Word::from_index(n, k))
    }

    /// The same word viewed in Q_m for m ≥ n.
    pub fn embed(&self, m: usize) -> Self {
        assert!(m >= self.n(), "cannot embed Q_{} into Q_{m}", self.n);
        Word { n: m as u8, ..*self }
    }

    /// Product of two words: returns `(negative, word)` with the sign as a flag.
    pub fn mul(&self, rhs: &Word) -> Result<(bool, Word)> {
        if self.n != rhs.n {
            return Err(Error::StrandMismatch(self.n(), rhs.n()));
        }
        Ok(self.mul_unchecked(rhs))
    }

    #[inline]
    pub(crate) fn mul_unchecked(&self, rhs: &Word) -> (bool, Word) {
        // v's of the left word pass u's of the right word; v_i anticommutes
        // with u_{i−1}, u_i, u_{i+1}.
        let m = mask(self.n());
        let cross = (self.nu & rhs.eps).count_ones()
            + (self.nu & (rhs.eps << 1) & m).count_ones()
            + (self.nu & (rhs.eps >> 1)).count_ones();
        let squares = (self.eps & rhs.eps).count_ones() + (self.nu & rhs.nu).count_ones();
        let neg = (cross + squares) % 2 == 1;
        (neg, Word { n: self.n, eps: self.eps ^ rhs.eps, nu: self.nu ^ rhs.nu })
    }

    /// Whether the two words commute (otherwise they anticommute).
    pub fn commutes_with(&self, other: &Word) -> bool {
        let (a, _) = self.mul_unchecked(other);
        let (b, _) = other.mul_unchecked(self);
        a == b
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        for i in 0..self.n() - 1 {
            if self.eps >> i & 1 == 1 {
                write!(f, "u{}", i + 1)?;
            }
        }
        for i in 0..self.n() - 1 {
            if self.nu >> i & 1 == 1 {
                write!(f, "v{}", i + 1)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word[Q_{}]({self})", self.n)
    }
}

/// An element of Q_n, as a sparse combination of normal-form words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    n: usize,
    terms: BTreeMap<Word, Scalar>,
}

impl Element {
    pub fn zero(n: usize) -> Self {
        Element { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Element::term(Scalar::one(), Word::identity(n))
    }

    pub fn scalar(n: usize, c: Scalar) -> Self {
        Element::term(c, Word::identity(n))
    }

    pub fn term(c: Scalar, w: Word) -> Self {
        let mut e = Element::zero(w.n());
        if !c.is_zero() {
            e.terms.insert(w, c);
        }
        e
    }

    pub fn word(w: Word) -> Self {
        Element::term(Scalar::one(), w)
    }

    pub fn signed_word(negative: bool, w: Word) -> Self {
        Element::term(if negative { Scalar::from(-1) } else { Scalar::one() }, w)
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Word, Scalar)>) -> Result<Self> {
        let mut e = Element::zero(n);
        for (w, c) in terms {
            if w.n() != n {
                return Err(Error::StrandMismatch(n, w.n()));
            }
            e.add_term(w, &c);
        }
        Ok(e)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, w: Word, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    fn sub_term(&mut self, w: Word, c: &Scalar) {
        self.add_term(w, &-c);
    }

    /// Coefficient of the identity word; the normalized trace Tr.
    pub fn trace(&self) -> Scalar {
        self.coeff(&Word::identity(self.n))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Element::zero(self.n);
        }
        Element { n: self.n, terms: self.terms.iter().map(|(w, x)| (*w, x * c)).collect() }
    }

    /// `Some(c)` if the element is `c · 1`.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (w, c) = self.terms.iter().next()?;
                w.is_identity().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// `Some((negative, w))` if the element is exactly ±w for a single word.
    pub fn as_signed_word(&self) -> Option<(bool, Word)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (w, c) = self.terms.iter().next()?;
        if c.is_one() {
            Some((false, *w))
        } else if (-c).is_one() {
            Some((true, *w))
        } else {
            None
        }
    }

    pub fn embed(&self, m: usize) -> Self {
        Element { n: m, terms: self.terms.iter().map(|(w, c)| (w.embed(m), c.clone())).collect() }
    }

    pub fn checked_mul(&self, rhs: &Element) -> Result<Self> {
        if self.n != rhs.n {
            return Err(Error::StrandMismatch(self.n, rhs.n));
        }
        let mut out = Element::zero(self.n);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                let (neg, w) = w1.mul_unchecked(w2);
                let c = c1 * c2;
                if neg {
                    out.sub_term(w, &c);
                } else {
                    out.add_term(w, &c);
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, rhs: &Element) -> Result<Self> {
        if self.n != rhs.n {
            return Err(Error::StrandMismatch(self.n, rhs.n));
        }
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(*w, c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, rhs: &Element) -> Result<Self> {
        self.checked_add(&-rhs)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Element::one(self.n);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Dense coefficient vector indexed by [`Word::index`].
    pub fn to_dense(&self) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); Word::count(self.n)];
        for (w, c) in &self.terms {
            v[w.index()] = c.clone();
        }
        v
    }

    pub fn from_dense(n: usize, v: &[Scalar]) -> Self {
        let terms = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (Word::from_index(n, k), c.clone()))
            .collect();
        Element { n, terms }
    }
}

// The operator forms panic on mismatched strand counts; use the `checked_*`
// methods when the operands come from untrusted input.
impl Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        self.checked_mul(rhs).expect("multiplying elements of different Q_n")
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.checked_add(rhs).expect("adding elements of different Q_n")
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.checked_sub(rhs).expect("subtracting elements of different Q_n")
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element { n: self.n, terms: self.terms.iter().map(|(w, c)| (*w, -c)).collect() }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Factor out a common coefficient when all terms agree up to sign,
        // e.g. "(-1/2 + 1/2q)(1 + u1 + v1 + u1v1)".
        let mut terms: Vec<(&Word, &Scalar)> = self.terms.iter().collect();
        terms.sort_by_key(|(w, _)| (w.eps.count_ones() + w.nu.count_ones(), w.nu, w.eps));
        let first = terms[0].1;
        let common = terms.len() > 1 && terms.iter().all(|(_, c)| *c == first || **c == -first);
        if common {
            write!(f, "({first})(")?;
            for (k, (w, c)) in terms.iter().enumerate() {
                let neg = *c != first;
                match (k, neg) {
                    (0, _) => write!(f, "{w}")?,
                    (_, false) => write!(f, " + {w}")?,
                    (_, true) => write!(f, " - {w}")?,
                }
            }
            return write!(f, ")");
        }
        for (k, (w, c)) in terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if w.is_identity() {
                write!(f, "({c})")?;
            } else if c.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "({c}){w}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q_{}[{self}]", self.n)
    }
}

/// Exponent masks `x` with Σ_{|i−j|≤1} x_i = 0 (mod 2) for every j: the
/// words whose u-part (resp. v-part) commutes with every v_j (resp. u_j).
fn central_masks(n: usize) -> Vec<u32> {
    let k = n - 1;
    let mut sys = BitMatrix::zeros(k, k);
    for j in 0..k {
        for i in j.saturating_sub(1)..=(j + 1).min(k - 1) {
            sys.set(j, i, true);
        }
    }
    let basis: Vec<u32> = sys
        .nullspace()
        .into_iter()
        .map(|x| x.iter().enumerate().filter(|(_, b)| **b).fold(0u32, |m, (i, _)| m | 1 << i))
        .collect();
    // span of the basis
    let mut span = vec![0u32];
    for b in basis {
        let shifted: Vec<u32> = span.iter().map(|m| m ^ b).collect();
        span.extend(shifted);
    }
    span.sort_unstable();
    span
}

/// Basis words of the center Z(Q_n), from the two F₂ systems on ε and ν.
pub fn center(n: usize) -> Result<Vec<Word>> {
    if !(2..=MAX_STRANDS).contains(&n) {
        return Err(Error::StrandsOutOfRange { n, min: 2, max: MAX_STRANDS });
    }
    let masks = central_masks(n);
    let mut words: Vec<Word> =
        masks.iter().flat_map(|&nu| masks.iter().map(move |&eps| Word { n: n as u8, eps, nu })).collect();
    words.sort();
    Ok(words)
}

/// Center by exhaustive commutation against every generator.
pub fn center_brute_force(n: usize) -> Result<Vec<Word>> {
    if !(2..=12).contains(&n) {
        return Err(Error::StrandsOutOfRange { n, min: 2, max: 12 });
    }
    let gens: Vec<Word> = (1..n).flat_map(|i| [Word::u(n, i), Word::v(n, i)]).collect();
    Ok(Word::all(n).filter(|w| gens.iter().all(|g| w.commutes_with(g))).collect())
}

/// The central words U = ∏_{3∤i} u_i and V = ∏_{3∤i} v_i (meaningful when 3 | n).
pub fn central_pair(n: usize) -> (Word, Word) {
    let m = (1..n).filter(|i| i % 3 != 0).fold(0u32, |m, i| m | 1 << (i - 1));
    (Word { n: n as u8, eps: m, nu: 0 }, Word { n: n as u8, eps: 0, nu: m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn u(n: usize, i: usize) -> Word {
        Word::u(n, i)
    }
    fn v(n: usize, i: usize) -> Word {
        Word::v(n, i)
    }

    #[test]
    fn generator_products() {
        let n = 4;
        assert_eq!(u(n, 1).mul(&u(n, 1)).unwrap(), (true, Word::identity(n)));
        let u1v1 = Word::new(n, 1, 1).unwrap();
        assert_eq!(v(n, 1).mul(&u(n, 1)).unwrap(), (true, u1v1));
        assert_eq!(v(n, 1).mul(&u(n, 3)).unwrap(), (false, Word::new(n, 0b100, 1).unwrap()));
        assert_eq!(u1v1.mul(&u1v1).unwrap(), (true, Word::identity(n)));
    }

    #[test]
    fn mismatched_strands() {
        assert!(matches!(u(3, 1).mul(&u(4, 1)), Err(Error::StrandMismatch(3, 4))));
        assert!(Element::one(3).checked_mul(&Element::one(4)).is_err());
    }

    #[test]
    fn quaternion_subgroup() {
        let n = 3;
        let i = Element::word(u(n, 1));
        let j = Element::word(v(n, 1));
        let k = &i * &j;
        let minus_one = Element::scalar(n, Scalar::from(-1));
        assert_eq!(&i * &i, minus_one);
        assert_eq!(&j * &j, minus_one);
        assert_eq!(&k * &k, minus_one);
        assert_eq!(&(&i * &j) * &k, minus_one);
        assert_eq!(&j * &k, i);
        assert_eq!(&k * &i, j);
        assert_eq!(&j * &i, -&k);
    }

    #[test]
    fn element_products() {
        let n = 3;
        let a = Element::word(u(n, 1));
        let b = Element::word(v(n, 1));
        let x = &(&a + &b) * &(&a - &b);
        let expected = Element::term(Scalar::from(-2), Word::new(n, 1, 1).unwrap());
        assert_eq!(x, expected);
        assert_eq!(&Element::one(n) * &x, x);
    }

    #[test]
    fn trace_values() {
        let n = 3;
        assert!(Element::one(n).trace().is_one());
        assert!(Element::word(Word::new(n, 1, 2).unwrap()).trace().is_zero());
    }

    #[test]
    fn every_word_squares_to_sign() {
        for n in 1..=5 {
            for w in Word::all(n) {
                let (_, sq) = w.mul(&w).unwrap();
                assert!(sq.is_identity());
            }
        }
    }

    #[test]
    fn index_round_trip() {
        for n in 1..=5 {
            for (k, w) in Word::all(n).enumerate() {
                assert_eq!(w.index(), k);
            }
        }
    }

    #[test]
    fn center_matches_brute_force() {
        for n in 2..=7 {
            let fast = center(n).unwrap();
            assert_eq!(fast, center_brute_force(n).unwrap(), "n = {n}");
            assert_eq!(fast.len(), if n % 3 == 0 { 4 } else { 1 }, "n = {n}");
        }
    }

    #[test]
    fn center_examples() {
        assert_eq!(center(4).unwrap(), vec![Word::identity(4)]);
        let c3 = center(3).unwrap();
        let (uu, vv) = central_pair(3);
        assert_eq!(uu, Word::new(3, 0b11, 0).unwrap());
        let uv = uu.mul(&vv).unwrap().1;
        let mut expected = vec![Word::identity(3), uu, vv, uv];
        expected.sort();
        assert_eq!(c3, expected);
        let (u6, _) = central_pair(6);
        assert_eq!(u6.eps(), 0b11011);
        assert!(center(6).unwrap().contains(&u6));
        assert!(center(1).is_err());
    }

    #[test]
    fn display_notation() {
        let n = 3;
        let e = Element::from_terms(
            n,
            [Word::identity(n), u(n, 1), v(n, 1), Word::new(n, 1, 1).unwrap()]
                .into_iter()
                .map(|w| (w, Scalar::ratio(1, 2))),
        )
        .unwrap();
        assert_eq!(e.to_string(), "(1/2)(1 + u1 + v1 + u1v1)");
        assert_eq!(Element::word(Word::new(3, 0b11, 0b10).unwrap()).to_string(), "u1u2v2");
    }

    /// Rewrites a string of generators into normal form one adjacent swap
    /// at a time, using only the defining relations.
    fn rewrite(n: usize, letters: &[(bool, usize)]) -> (bool, Word) {
        // (is_v, index)
        let mut s: Vec<(bool, usize)> = letters.to_vec();
        let mut neg = false;
        loop {
            let mut changed = false;
            let mut k = 0;
            while k + 1 < s.len() {
                let (a, b) = (s[k], s[k + 1]);
                if a == b {
                    // x² = −1
                    neg = !neg;
                    s.drain(k..k + 2);
                    changed = true;
                    continue;
                }
                if a > b {
                    // u < v, then by index
                    let anti = a.0 != b.0 && a.1.abs_diff(b.1) <= 1;
                    if anti {
                        neg = !neg;
                    }
                    s.swap(k, k + 1);
                    changed = true;
                }
                k += 1;
            }
            if !changed {
                break;
            }
        }
        let mut eps = 0;
        let mut nu = 0;
        for (is_v, i) in s {
            if is_v {
                nu |= 1 << (i - 1);
            } else {
                eps |= 1 << (i - 1);
            }
        }
        (neg, Word::new(n, eps, nu).unwrap())
    }

    fn letters_of(w: &Word) -> Vec<(bool, usize)> {
        let mut out = Vec::new();
        for i in 1..w.n() {
            if w.eps() >> (i - 1) & 1 == 1 {
                out.push((false, i));
            }
        }
        for i in 1..w.n() {
            if w.nu() >> (i - 1) & 1 == 1 {
                out.push((true, i));
            }
        }
        out
    }

    #[test]
    fn closed_form_sign_matches_rewriting_exhaustively() {
        for n in 2..=4 {
            for a in Word::all(n) {
                for b in Word::all(n) {
                    let mut letters = letters_of(&a);
                    letters.extend(letters_of(&b));
                    assert_eq!(a.mul(&b).unwrap(), rewrite(n, &letters), "{a} * {b}");
                }
            }
        }
    }

    fn word_strategy(n: usize) -> impl Strategy<Value = Word> {
        (0..Word::count(n)).prop_map(move |k| Word::from_index(n, k))
    }

    fn element_strategy(n: usize) -> impl Strategy<Value = Element> {
        proptest::collection::vec((word_strategy(n), -3i64..=3, -3i64..=3), 0..6).prop_map(move |ts| {
            Element::from_terms(n, ts.into_iter().map(|(w, a, b)| (w, Scalar::from_ints(a, b)))).unwrap()
        })
    }

    proptest! {
        #[test]
        fn word_product_associative(n in 2usize..=5, seed in any::<u64>()) {
            let c = Word::count(n) as u64;
            let a = Word::from_index(n, (seed % c) as usize);
            let b = Word::from_index(n, ((seed / c) % c) as usize);
            let d = Word::from_index(n, ((seed / c / c) % c) as usize);
            let (s1, ab) = a.mul(&b).unwrap();
            let (s2, ab_d) = ab.mul(&d).unwrap();
            let (s3, bd) = b.mul(&d).unwrap();
            let (s4, a_bd) = a.mul(&bd).unwrap();
            prop_assert_eq!(ab_d, a_bd);
            prop_assert_eq!(s1 ^ s2, s3 ^ s4);
        }

        #[test]
        fn random_strings_match_rewriting(letters in proptest::collection::vec((any::<bool>(), 1usize..4), 0..10)) {
            let n = 4;
            let mut acc = (false, Word::identity(n));
            for &(is_v, i) in &letters {
                let g = if is_v { Word::v(n, i) } else { Word::u(n, i) };
                let (s, w) = acc.1.mul(&g).unwrap();
                acc = (acc.0 ^ s, w);
            }
            prop_assert_eq!(acc, rewrite(n, &letters));
        }

        #[test]
        fn trace_is_cyclic(x in element_strategy(4), y in element_strategy(4)) {
            prop_assert_eq!((&x * &y).trace(), (&y * &x).trace());
        }

        #[test]
        fn element_product_associative(x in element_strategy(3), y in element_strategy(3), z in element_strategy(3)) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        }
    }
}
