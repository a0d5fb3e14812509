//! Braid words, their images in Q_n, and the closed-braid invariant.
//!
//! With z₊ = Tr(x s_n)/Tr(x) = (q − 1)/2 and z₋ = Tr(x s_n⁻¹)/Tr(x) =
//! (1 − q)/(2q), the quantity
//!
//! ```text
//! I(β) = 2^{n−1} · q^{−2e} · Tr(φ_n(β)),     e = exponent sum of β
//! ```
//!
//! is unchanged by conjugation (Tr is a trace) and by either stabilization
//! β ↦ β σ_n^{±1}: a positive one multiplies by 2·q^{−2}·z₊ = 1 and a
//! negative one by 2·q^{2}·z₋ = 1. The empty braid on one strand gives 1.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Element, MAX_STRANDS};
use crate::error::{Error, Result};
use crate::hecke::HeckeGenerators;
use crate::scalar::Scalar;

/// A word in the Artin generators: `+i` is σ_i, `−i` is σ_i⁻¹.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
    exponent_sum: i64,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if !(1..=MAX_STRANDS).contains(&strands) {
            return Err(Error::StrandsOutOfRange { n: strands, min: 1, max: MAX_STRANDS });
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(Error::GeneratorOutOfRange { index: l as i64, strands });
            }
        }
        let exponent_sum = letters.iter().map(|l| l.signum() as i64).sum();
        Ok(BraidWord { strands, letters, exponent_sum })
    }

    /// Parses whitespace- or comma-separated signed generator indices.
    pub fn parse(strands: usize, text: &str) -> Result<Self> {
        let letters = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i32>().map_err(|e| Error::Unsupported(format!("bad braid letter {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        BraidWord::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// Σ of letter signs (the writhe of the closure).
    pub fn exponent_sum(&self) -> i64 {
        self.exponent_sum
    }

    pub fn inverse(&self) -> Self {
        let letters = self.letters.iter().rev().map(|l| -l).collect();
        BraidWord::new(self.strands, letters).expect("same generators")
    }

    /// γ β γ⁻¹.
    pub fn conjugate_by(&self, gamma: &BraidWord) -> Result<Self> {
        if gamma.strands != self.strands {
            return Err(Error::StrandMismatch(self.strands, gamma.strands));
        }
        let mut letters = gamma.letters.clone();
        letters.extend_from_slice(&self.letters);
        letters.extend(gamma.letters.iter().rev().map(|l| -l));
        BraidWord::new(self.strands, letters)
    }

    /// β σ_n^{±1} on n + 1 strands.
    pub fn stabilize(&self, positive: bool) -> Result<Self> {
        let n = self.strands as i32;
        let mut letters = self.letters.clone();
        letters.push(if positive { n } else { -n });
        BraidWord::new(self.strands + 1, letters)
    }

    pub fn random(rng: &mut impl Rng, strands: usize, len: usize) -> Self {
        let letters = if strands < 2 {
            Vec::new()
        } else {
            (0..len)
                .map(|_| {
                    let i = rng.gen_range(1..strands as i32);
                    if rng.gen_bool(0.5) {
                        i
                    } else {
                        -i
                    }
                })
                .collect()
        };
        BraidWord::new(strands, letters).expect("letters in range")
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters: Vec<String> = self.letters.iter().map(i32::to_string).collect();
        write!(f, "B{}[{}]", self.strands, letters.join(" "))
    }
}

impl fmt::Debug for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// φ_n(β): the product of s_i / s_i⁻¹ in Q_n.
pub fn evaluate(beta: &BraidWord) -> Result<Element> {
    let g = HeckeGenerators::new(beta.strands)?;
    Ok(evaluate_with(&g, beta))
}

fn evaluate_with(g: &HeckeGenerators, beta: &BraidWord) -> Element {
    beta.letters.iter().fold(Element::one(g.n()), |acc, &l| {
        let i = l.unsigned_abs() as usize;
        if l > 0 {
            &acc * g.s(i)
        } else {
            &acc * g.s_inv(i)
        }
    })
}

/// I(β) = 2^{n−1} q^{−2e} Tr(φ_n(β)).
pub fn invariant(beta: &BraidWord) -> Result<Scalar> {
    let tr = evaluate(beta)?.trace();
    let norm = &Scalar::from(1i64 << (beta.strands - 1).min(62)) * &Scalar::qpow(-2 * beta.exponent_sum);
    Ok(&norm * &tr)
}

/// Shape of an invariant value v with v² = ±2^k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PhaseMagnitude {
    /// k with normSq(v) = 2^k.
    pub log2_norm_sq: u32,
    /// v² / normSq(v), either +1 or −1.
    pub square_sign: i8,
}

/// `Some` iff normSq(v) is a power of two and v²/normSq(v) = ±1.
pub fn phase_magnitude(v: &Scalar) -> Option<PhaseMagnitude> {
    use num_traits::{One, Zero};
    let ns = v.norm_sq();
    if ns.is_zero() {
        return None;
    }
    let mag = ns.numer().magnitude();
    if !ns.denom().is_one() || mag.count_ones() != 1 {
        return None;
    }
    let k = mag.trailing_zeros()? as u32;
    let ratio = (v * v).scale(&ns.recip());
    let square_sign = if ratio.is_one() {
        1
    } else if (-&ratio).is_one() {
        -1
    } else {
        return None;
    };
    Some(PhaseMagnitude { log2_norm_sq: k, square_sign })
}

/// One Markov move applied during [`markov_move_test`].
#[derive(Clone, Debug, Serialize)]
pub struct MarkovMove {
    pub kind: String,
    pub braid: String,
    pub value: Scalar,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MarkovReport {
    pub braid: String,
    pub value: Scalar,
    pub seed: u64,
    pub moves: Vec<MarkovMove>,
    pub pass: bool,
}

/// Applies `trials` random conjugations γβγ⁻¹, and stabilizes each of them
/// (alternating sign), checking the invariant is unchanged every time.
pub fn markov_move_test(beta: &BraidWord, trials: usize, seed: u64) -> Result<MarkovReport> {
    if trials == 0 {
        return Err(Error::Unsupported("markov test needs at least one trial".into()));
    }
    let value = invariant(beta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates = Vec::with_capacity(2 * trials);
    for t in 0..trials {
        let len = rng.gen_range(0..=4);
        let gamma = BraidWord::random(&mut rng, beta.strands, len);
        let conj = beta.conjugate_by(&gamma)?;
        let positive = t % 2 == 0;
        candidates
            .push((if positive { "conjugate+stabilize+" } else { "conjugate+stabilize-" }, conj.stabilize(positive)?));
        candidates.push(("conjugate", conj));
    }
    let moves = candidates
        .into_par_iter()
        .map(|(kind, b)| {
            let v = invariant(&b)?;
            Ok(MarkovMove { kind: kind.to_string(), braid: b.to_string(), pass: v == value, value: v })
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = moves.iter().all(|m| m.pass);
    Ok(MarkovReport { braid: beta.to_string(), value, seed, moves, pass })
}

/// Summary of [`markov_sweep`].
#[derive(Clone, Debug, Serialize)]
pub struct MarkovSweep {
    pub seed: u64,
    pub braids: usize,
    pub moves: usize,
    /// Braids (with the offending move) whose invariant changed.
    pub failures: Vec<String>,
}

/// For `count` random braids with 1..=`max_strands` strands and up to
/// `max_len` letters, checks the invariant under a random conjugation and
/// under positive and negative stabilization. Braid k is drawn from its own
/// generator seeded with (seed, k), so the result ignores thread scheduling.
pub fn markov_sweep(count: usize, max_strands: usize, max_len: usize, seed: u64) -> Result<MarkovSweep> {
    if max_strands == 0 || max_strands >= MAX_STRANDS {
        return Err(Error::StrandsOutOfRange { n: max_strands, min: 1, max: MAX_STRANDS - 1 });
    }
    let results = (0..count)
        .into_par_iter()
        .map(|k| -> Result<Vec<String>> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let strands = rng.gen_range(1..=max_strands);
            let len = rng.gen_range(0..=max_len);
            let beta = BraidWord::random(&mut rng, strands, len);
            let gamma_len = rng.gen_range(0..=4);
            let gamma = BraidWord::random(&mut rng, strands, gamma_len);
            let value = invariant(&beta)?;
            let mut failures = Vec::new();
            for (kind, moved) in [
                ("conjugate", beta.conjugate_by(&gamma)?),
                ("stabilize+", beta.stabilize(true)?),
                ("stabilize-", beta.stabilize(false)?),
            ] {
                let v = invariant(&moved)?;
                if v != value {
                    failures.push(format!("{beta} {kind}: {value} -> {v}"));
                }
            }
            Ok(failures)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MarkovSweep { seed, braids: count, moves: 3 * count, failures: results.into_iter().flatten().collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: usize, w: &[i32]) -> BraidWord {
        BraidWord::new(n, w.to_vec()).unwrap()
    }

    #[test]
    fn validation() {
        assert!(BraidWord::new(2, vec![2]).is_err());
        assert!(BraidWord::new(3, vec![0]).is_err());
        assert!(BraidWord::new(0, vec![]).is_err());
        assert_eq!(BraidWord::parse(3, "1, -2 1").unwrap().letters(), &[1, -2, 1]);
        assert_eq!(b(3, &[1, -2, 1]).exponent_sum(), 1);
        assert!(BraidWord::parse(3, "1 x").is_err());
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(evaluate(&b(1, &[])).unwrap(), Element::one(1));
        assert_eq!(evaluate(&b(2, &[1, 1, 1])).unwrap().as_scalar(), Some(Scalar::from(-1)));
        assert_eq!(evaluate(&b(2, &[1, -1])).unwrap(), Element::one(2));
        assert!(evaluate(&b(4, &[1, 2, 3, -3, -2, -1])).unwrap() == Element::one(4));
    }

    #[test]
    fn invariant_anchors() {
        assert!(invariant(&b(1, &[])).unwrap().is_one());
        assert!(invariant(&b(2, &[1])).unwrap().is_one());
        assert!(invariant(&b(2, &[-1])).unwrap().is_one());
        assert!(invariant(&b(3, &[1, 2])).unwrap().is_one());
        assert_eq!(invariant(&b(2, &[1, 1, 1])).unwrap(), Scalar::from(-2));
        assert_eq!(invariant(&b(2, &[1, 1])).unwrap(), Scalar::from(-1));
    }

    #[test]
    fn stabilized_trefoil() {
        let t = b(2, &[1, 1, 1]);
        assert_eq!(invariant(&t.stabilize(true).unwrap()).unwrap(), Scalar::from(-2));
        assert_eq!(invariant(&t.stabilize(false).unwrap()).unwrap(), Scalar::from(-2));
    }

    #[test]
    fn markov_report() {
        let r = markov_move_test(&b(2, &[1, 1, 1]), 6, 11).unwrap();
        assert!(r.pass);
        assert_eq!(r.moves.len(), 12);
        let r = markov_move_test(&b(1, &[]), 2, 0).unwrap();
        assert!(r.pass && r.value.is_one());
        assert!(markov_move_test(&b(1, &[]), 0, 0).is_err());
    }

    #[test]
    fn small_sweep_is_deterministic() {
        let a = markov_sweep(40, 4, 8, 5).unwrap();
        assert!(a.failures.is_empty(), "{:?}", a.failures);
        assert_eq!(a.moves, 120);
        assert!(markov_sweep(1, 0, 1, 0).is_err());
    }

    #[test]
    fn phase_magnitude_shapes() {
        assert_eq!(phase_magnitude(&Scalar::from(-2)), Some(PhaseMagnitude { log2_norm_sq: 2, square_sign: 1 }));
        assert_eq!(phase_magnitude(&Scalar::from(1)), Some(PhaseMagnitude { log2_norm_sq: 0, square_sign: 1 }));
        assert_eq!(phase_magnitude(&Scalar::from(3)), None);
        assert_eq!(phase_magnitude(&Scalar::zeta()), None);
        assert_eq!(phase_magnitude(&Scalar::zero()), None);
    }
}
