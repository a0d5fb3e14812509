//! The Hecke quotient inside Q_n.
//!
//! The elements
//!
//! ```text
//! s_i = −1/(2q) (1 + u_i + v_i + u_i v_i),   q = ζ = e^{iπ/3}
//! ```
//!
//! satisfy the braid relations and (s_i − q)(s_i + 1) = 0, so g_i ↦ s_i
//! defines a homomorphism from the Hecke algebra H_n(q) onto the subalgebra
//! A_n ⊂ Q_n they generate. The trace Tr restricted to A_n is the Markov
//! trace with η = 1/2, which makes A_n the (3,6)-quotient. The checks here
//! witness that computationally: relations, the Markov property, and the
//! dimension of A_n.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{Element, Word};
use crate::error::{Error, Result};
use crate::linalg::EchelonBasis;
use crate::scalar::Scalar;

/// Largest n accepted by [`subalgebra_dimension`].
pub const MAX_SPAN_STRANDS: usize = 6;

/// s_i, s_i⁻¹ and f_i = (q − s_i)/(1 + q) for i = 1..n−1 (stored 0-based).
#[derive(Clone, Debug)]
pub struct HeckeGenerators {
    n: usize,
    s: Vec<Element>,
    s_inv: Vec<Element>,
    f: Vec<Element>,
}

fn quaternion_combo(n: usize, i: usize, c: &Scalar, sign: i64) -> Element {
    let u = Word::u(n, i);
    let v = Word::v(n, i);
    let uv = u.mul_unchecked(&v).1;
    let sc = c * &Scalar::from(sign);
    Element::from_terms(n, [(Word::identity(n), c.clone()), (u, sc.clone()), (v, sc.clone()), (uv, sc)])
        .expect("words share n")
}

/// Coefficient −1/(2q) of s_i.
pub fn s_coefficient() -> Scalar {
    -Scalar::qpow(-1).scale(&num_rational::BigRational::new(1.into(), 2.into()))
}

/// Tr(x·s_n) = z₊·Tr(x) and Tr(x·s_n⁻¹) = z₋·Tr(x) for x ∈ Q_n; returns (z₊, z₋).
pub fn markov_constants() -> (Scalar, Scalar) {
    let q = Scalar::zeta();
    let half = Scalar::ratio(1, 2);
    let z_plus = &(&q - &Scalar::one()) * &half;
    let z_minus = (&(&Scalar::one() - &q) * &half).checked_div(&q).expect("q is a unit");
    (z_plus, z_minus)
}

impl HeckeGenerators {
    pub fn new(n: usize) -> Result<Self> {
        if !(1..=crate::algebra::MAX_STRANDS).contains(&n) {
            return Err(Error::StrandsOutOfRange { n, min: 1, max: crate::algebra::MAX_STRANDS });
        }
        let q = Scalar::zeta();
        let c_s = s_coefficient();
        let c_inv = -q.scale(&num_rational::BigRational::new(1.into(), 2.into()));
        let one_plus_q = &Scalar::one() + &q;
        let s: Vec<Element> = (1..n).map(|i| quaternion_combo(n, i, &c_s, 1)).collect();
        let s_inv = (1..n).map(|i| quaternion_combo(n, i, &c_inv, -1)).collect();
        let inv = one_plus_q.inv()?;
        let f = s.iter().map(|si| (&Element::scalar(n, q.clone()) - si).scale(&inv)).collect();
        Ok(HeckeGenerators { n, s, s_inv, f })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// s_i for 1 ≤ i ≤ n−1.
    pub fn s(&self, i: usize) -> &Element {
        &self.s[i - 1]
    }

    pub fn s_inv(&self, i: usize) -> &Element {
        &self.s_inv[i - 1]
    }

    pub fn f(&self, i: usize) -> &Element {
        &self.f[i - 1]
    }
}

/// Outcome of one relation instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub indices: Vec<usize>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl RelationCheck {
    fn equality(relation: &str, indices: Vec<usize>, lhs: &Element, rhs: &Element) -> Self {
        let pass = lhs == rhs;
        let witness = (!pass).then(|| format!("lhs - rhs = {}", lhs - rhs));
        RelationCheck { relation: relation.to_string(), indices, pass, witness }
    }

    fn scalar_equality(relation: &str, indices: Vec<usize>, lhs: &Scalar, rhs: &Scalar) -> Self {
        let pass = lhs == rhs;
        let witness = (!pass).then(|| format!("{lhs} != {rhs}"));
        RelationCheck { relation: relation.to_string(), indices, pass, witness }
    }
}

fn require_strands(n: usize, min: usize, max: usize) -> Result<()> {
    if (min..=max).contains(&n) {
        Ok(())
    } else {
        Err(Error::StrandsOutOfRange { n, min, max })
    }
}

/// Braid relations, the quadratic relation, s_i³ = −1, inverses, and the
/// idempotent relations (H1)–(H3) for the f_i, all by exact arithmetic.
pub fn verify_relations(n: usize) -> Result<Vec<RelationCheck>> {
    require_strands(n, 2, 10)?;
    let g = HeckeGenerators::new(n)?;
    let q = Scalar::zeta();
    let one = Element::one(n);
    let q_el = Element::scalar(n, q.clone());
    let mut out = Vec::new();

    for i in 1..n {
        let s = g.s(i);
        let e1 = &(s - &q_el) * &(s + &one);
        out.push(RelationCheck::equality("E1", vec![i], &e1, &Element::zero(n)));
        let cube = &(s * s) * s;
        out.push(RelationCheck::equality("cube", vec![i], &cube, &Element::scalar(n, Scalar::from(-1))));
        out.push(RelationCheck::equality("inverse", vec![i], &(s * g.s_inv(i)), &one));
        let f = g.f(i);
        out.push(RelationCheck::equality("H1", vec![i], &(f * f), f));
    }
    for i in 1..n.saturating_sub(1) {
        let (a, b) = (g.s(i), g.s(i + 1));
        out.push(RelationCheck::equality("B1", vec![i, i + 1], &(&(a * b) * a), &(&(b * a) * b)));
        let (fa, fb) = (g.f(i), g.f(i + 1));
        // q/(1+q)²
        let c = q.checked_div(&(&Scalar::one() + &q).pow(2))?;
        let lhs = &(&(fa * fb) * fa) - &fa.scale(&c);
        let rhs = &(&(fb * fa) * fb) - &fb.scale(&c);
        out.push(RelationCheck::equality("H3", vec![i, i + 1], &lhs, &rhs));
    }
    for i in 1..n {
        for j in i + 2..n {
            let (a, b) = (g.s(i), g.s(j));
            out.push(RelationCheck::equality("B2", vec![i, j], &(a * b), &(b * a)));
            let (fa, fb) = (g.f(i), g.f(j));
            out.push(RelationCheck::equality("H2", vec![i, j], &(fa * fb), &(fb * fa)));
        }
    }
    Ok(out)
}

/// Conjugation s_1⁻¹ x s_1 for x ∈ {u_1, v_1, u_2, v_2} against the table
///
/// ```text
/// u_1 ↦ u_1v_1,  v_1 ↦ u_1,  u_2 ↦ u_2v_1,  v_2 ↦ −u_1v_1v_2
/// ```
///
/// plus, for n ≥ 4, that u_3 and v_3 are fixed.
pub fn verify_conjugation_table(n: usize) -> Result<Vec<RelationCheck>> {
    require_strands(n, 3, 10)?;
    let g = HeckeGenerators::new(n)?;
    let w = |eps: u32, nu: u32| Word::new(n, eps, nu).expect("valid word");
    let mut table = vec![
        ("u1", w(0b01, 0), Element::word(w(0b01, 0b01))),
        ("v1", w(0, 0b01), Element::word(w(0b01, 0))),
        ("u2", w(0b10, 0), Element::word(w(0b10, 0b01))),
        ("v2", w(0, 0b10), Element::signed_word(true, w(0b01, 0b11))),
    ];
    if n >= 4 {
        table.push(("u3", w(0b100, 0), Element::word(w(0b100, 0))));
        table.push(("v3", w(0, 0b100), Element::word(w(0, 0b100))));
    }
    Ok(table
        .into_iter()
        .map(|(name, x, expected)| {
            let conj = &(g.s_inv(1) * &Element::word(x)) * g.s(1);
            RelationCheck::equality(&format!("conj s1 {name}"), vec![1], &conj, &expected)
        })
        .collect())
}

fn random_element(rng: &mut ChaCha8Rng, n: usize, support: usize) -> Element {
    let terms = (0..rng.gen_range(1..=6)).map(|_| {
        let idx = rng.gen_range(0..Word::count(support));
        let w = Word::from_index(support, idx).embed(n);
        (w, Scalar::from_ints(rng.gen_range(-3..=3), rng.gen_range(-3..=3)))
    });
    Element::from_terms(n, terms).expect("words share n")
}

/// Markov-property checks for the trace on Q_n against f_{n−1}.
///
/// b ranges over every word of Q_{n−1} (a spanning set), a seeded random
/// sample of elements of Q_{n−1}, and random products of the s_i, f_i with
/// i ≤ n − 2.
pub fn verify_markov(n: usize, seed: u64) -> Result<Vec<RelationCheck>> {
    require_strands(n, 3, 8)?;
    let g = HeckeGenerators::new(n)?;
    let half = Scalar::ratio(1, 2);
    let f_last = g.f(n - 1);
    let mut out = vec![RelationCheck::scalar_equality("Tr(f_last)", vec![n - 1], &f_last.trace(), &half)];

    let mut check_all = |name: &str, bs: &mut dyn Iterator<Item = Element>| {
        let mut count = 0;
        let mut failure = None;
        for b in bs {
            count += 1;
            let expected = &half * &b.trace();
            let left = (f_last * &b).trace();
            let right = (&b * f_last).trace();
            if failure.is_none() && (left != expected || right != expected) {
                failure = Some(format!("b = {b}: Tr(f b) = {left}, Tr(b f) = {right}, (1/2)Tr(b) = {expected}"));
            }
        }
        out.push(RelationCheck {
            relation: format!("{name} ({count} elements)"),
            indices: vec![n - 1],
            pass: failure.is_none(),
            witness: failure,
        });
    };

    check_all("Markov on words of Q_{n-1}", &mut Word::all(n - 1).map(|w| Element::word(w.embed(n))));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample: Vec<Element> = (0..32).map(|_| random_element(&mut rng, n, n - 1)).collect();
    check_all("Markov on random elements of Q_{n-1}", &mut sample.into_iter());

    let products: Vec<Element> = (0..16)
        .map(|_| {
            let mut x = Element::one(n);
            for _ in 0..rng.gen_range(0..6) {
                let i = rng.gen_range(1..=n - 2);
                let factor = match rng.gen_range(0..3) {
                    0 => g.s(i),
                    1 => g.s_inv(i),
                    _ => g.f(i),
                };
                x = &x * factor;
            }
            x
        })
        .collect();
    check_all("Markov on products in A_{n-1}", &mut products.into_iter());

    let (z_plus, z_minus) = markov_constants();
    let mut plus_ok = None;
    let mut minus_ok = None;
    for w in Word::all(n - 1) {
        let x = Element::word(w.embed(n));
        let tr = x.trace();
        if plus_ok.is_none() && (&x * g.s(n - 1)).trace() != &z_plus * &tr {
            plus_ok = Some(format!("fails at {w}"));
        }
        if minus_ok.is_none() && (&x * g.s_inv(n - 1)).trace() != &z_minus * &tr {
            minus_ok = Some(format!("fails at {w}"));
        }
    }
    out.push(RelationCheck {
        relation: "Tr(x s_last) = (q-1)/2 Tr(x)".into(),
        indices: vec![n - 1],
        pass: plus_ok.is_none(),
        witness: plus_ok,
    });
    out.push(RelationCheck {
        relation: "Tr(x s_last^-1) = (1-q)/(2q) Tr(x)".into(),
        indices: vec![n - 1],
        pass: minus_ok.is_none(),
        witness: minus_ok,
    });
    Ok(out)
}

/// Echelon basis of the unital subalgebra A_n generated by s_1, …, s_{n−1}.
///
/// Closes {1} under right multiplication by the generators, keeping only
/// products that enlarge the span.
pub fn subalgebra_basis(n: usize) -> Result<EchelonBasis> {
    require_strands(n, 1, MAX_SPAN_STRANDS)?;
    let g = HeckeGenerators::new(n)?;
    let mut basis = EchelonBasis::new(Word::count(n));
    let one = Element::one(n);
    basis.insert(one.to_dense());
    let mut frontier = vec![one];
    while let Some(x) = frontier.pop() {
        for i in 1..n {
            let y = &x * g.s(i);
            if basis.insert(y.to_dense()) {
                frontier.push(y);
            }
        }
    }
    Ok(basis)
}

/// dim A_n.
pub fn subalgebra_dimension(n: usize) -> Result<usize> {
    Ok(subalgebra_basis(n)?.rank())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_shapes() {
        let g = HeckeGenerators::new(3).unwrap();
        assert_eq!(g.s(1).len(), 4);
        assert_eq!(g.s(1).to_string(), "(-1/2 + 1/2q)(1 + u1 + v1 + u1v1)");
        assert_eq!(g.s_inv(2).to_string(), "(-1/2q)(1 - u2 - v2 - u2v2)");
        assert_eq!(g.s(1) * g.s_inv(1), Element::one(3));
    }

    #[test]
    fn trace_of_s() {
        let g = HeckeGenerators::new(2).unwrap();
        // −1/(2q) = (q − 1)/2
        let expected = (Scalar::zeta() - Scalar::one()).scale(&num_rational::BigRational::new(1.into(), 2.into()));
        assert_eq!(g.s(1).trace(), expected);
        assert_eq!(g.f(1).trace(), Scalar::ratio(1, 2));
    }

    #[test]
    fn relations_small() {
        for n in 2..=5 {
            let checks = verify_relations(n).unwrap();
            assert!(checks.iter().all(|c| c.pass), "{:?}", checks.iter().find(|c| !c.pass));
        }
        let n3 = verify_relations(3).unwrap();
        for name in ["B1", "E1", "H1", "H3", "cube"] {
            assert!(n3.iter().any(|c| c.relation == name));
        }
        let n5 = verify_relations(5).unwrap();
        for pair in [[1, 3], [1, 4], [2, 4]] {
            assert!(n5.iter().any(|c| c.relation == "B2" && c.indices == pair && c.pass));
        }
    }

    #[test]
    fn conjugation_table() {
        for n in 3..=5 {
            let checks = verify_conjugation_table(n).unwrap();
            assert!(checks.iter().all(|c| c.pass), "{checks:?}");
        }
        assert_eq!(verify_conjugation_table(4).unwrap().len(), 6);
    }

    #[test]
    fn markov_small() {
        for n in 3..=4 {
            let checks = verify_markov(n, 7).unwrap();
            assert!(checks.iter().all(|c| c.pass), "{checks:?}");
        }
    }

    #[test]
    fn markov_examples() {
        let g = HeckeGenerators::new(3).unwrap();
        assert_eq!((g.f(2) * &Element::word(Word::u(3, 1))).trace(), Scalar::zero());
        assert_eq!((g.f(2) * g.f(1)).trace(), Scalar::ratio(1, 4));
    }

    #[test]
    fn markov_constant_values() {
        let (zp, zm) = markov_constants();
        assert_eq!(&zp * &zm, Scalar::ratio(1, 4));
        // 2 q^{-2} z₊ = 1 and 2 q^{2} z₋ = 1 fix the invariant's normalization
        assert!((&(&Scalar::from(2) * &Scalar::qpow(-2)) * &zp).is_one());
        assert!((&(&Scalar::from(2) * &Scalar::qpow(2)) * &zm).is_one());
    }

    #[test]
    fn small_dimensions() {
        assert_eq!(subalgebra_dimension(1).unwrap(), 1);
        assert_eq!(subalgebra_dimension(2).unwrap(), 2);
        assert_eq!(subalgebra_dimension(3).unwrap(), 6);
        assert_eq!(subalgebra_dimension(4).unwrap(), 22);
        assert!(subalgebra_dimension(7).is_err());
    }

    #[test]
    fn s_cubed_is_minus_one() {
        for n in 2..=6 {
            let g = HeckeGenerators::new(n).unwrap();
            for i in 1..n {
                assert_eq!(g.s(i).pow(3).as_scalar(), Some(Scalar::from(-1)));
            }
        }
    }
}
