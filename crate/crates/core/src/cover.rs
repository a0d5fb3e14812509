//! Homology of cyclic branched covers from a Seifert matrix.
//!
//! For a Seifert matrix V of size s, H₁ of the triple cyclic branched cover
//! Σ₃(L) is presented by the 2s × 2s integer matrix
//!
//! ```text
//! M = | V + Vᵀ    V     |
//!     | Vᵀ        V + Vᵀ |
//! ```
//!
//! so dim H₁(Σ₃(L); Z₂) is the nullity of M over F₂, and |det M| is the
//! order of H₁ (zero when it is infinite).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2::BitMatrix;
use crate::linalg::determinant;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct SeifertMatrix {
    entries: Vec<Vec<i64>>,
}

impl TryFrom<Vec<Vec<i64>>> for SeifertMatrix {
    type Error = Error;
    fn try_from(entries: Vec<Vec<i64>>) -> Result<Self> {
        SeifertMatrix::new(entries)
    }
}

impl From<SeifertMatrix> for Vec<Vec<i64>> {
    fn from(m: SeifertMatrix) -> Self {
        m.entries
    }
}

impl SeifertMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let rows = entries.len();
        if let Some((row, r)) = entries.iter().enumerate().find(|(_, r)| r.len() != rows) {
            return Err(Error::NotSquare { rows, row, len: r.len() });
        }
        Ok(SeifertMatrix { entries })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let s = self.size();
        SeifertMatrix { entries: (0..s).map(|i| (0..s).map(|j| self.entries[j][i]).collect()).collect() }
    }

    fn symmetrized(&self) -> Vec<Vec<i64>> {
        let s = self.size();
        (0..s).map(|i| (0..s).map(|j| self.entries[i][j] + self.entries[j][i]).collect()).collect()
    }

    /// det(V − Vᵀ); ±1 for a knot's Seifert matrix.
    pub fn intersection_determinant(&self) -> BigInt {
        let s = self.size();
        let m: Vec<Vec<i64>> =
            (0..s).map(|i| (0..s).map(|j| self.entries[i][j] - self.entries[j][i]).collect()).collect();
        integer_determinant(&m)
    }

    /// P V Pᵀ.
    pub fn congruent(&self, p: &[Vec<i64>]) -> Self {
        let s = self.size();
        let pv: Vec<Vec<i64>> =
            (0..s).map(|i| (0..s).map(|j| (0..s).map(|k| p[i][k] * self.entries[k][j]).sum()).collect()).collect();
        let entries = (0..s).map(|i| (0..s).map(|j| (0..s).map(|k| pv[i][k] * p[j][k]).sum()).collect()).collect();
        SeifertMatrix { entries }
    }
}

/// The 2s × 2s presentation matrix of H₁(Σ₃).
pub fn triple_cover_presentation(v: &SeifertMatrix) -> Vec<Vec<i64>> {
    let s = v.size();
    let sym = v.symmetrized();
    let mut m = vec![vec![0i64; 2 * s]; 2 * s];
    for i in 0..s {
        for j in 0..s {
            m[i][j] = sym[i][j];
            m[s + i][s + j] = sym[i][j];
            m[i][s + j] = v.entries[i][j];
            m[s + i][j] = v.entries[j][i];
        }
    }
    m
}

/// dim H₁(Σ₃(L); Z₂).
pub fn triple_cover_dim(v: &SeifertMatrix) -> usize {
    BitMatrix::from_int_rows(&triple_cover_presentation(v)).nullity()
}

/// |H₁(Σ₃(L); Z)| as |det M|; zero means H₁ is infinite.
pub fn triple_cover_order(v: &SeifertMatrix) -> BigInt {
    integer_determinant(&triple_cover_presentation(v)).abs()
}

/// Δ(ω) = det(V − ωVᵀ) at ω = ζ² = e^{2πi/3}. Its squared modulus
/// |Δ(ω)Δ(ω²)| is the order of H₁(Σ₃) by Fox's formula.
pub fn alexander_at_cube_root(v: &SeifertMatrix) -> Scalar {
    let s = v.size();
    let omega = Scalar::qpow(2);
    let m = (0..s)
        .map(|i| (0..s).map(|j| &Scalar::from(v.entries[i][j]) - &(&omega * &Scalar::from(v.entries[j][i]))).collect())
        .collect();
    determinant(m)
}

/// Double-cover data: (det(V + Vᵀ), nullity of V + Vᵀ over F₂).
pub fn double_cover_data(v: &SeifertMatrix) -> (BigInt, usize) {
    let sym = v.symmetrized();
    (integer_determinant(&sym), BitMatrix::from_int_rows(&sym).nullity())
}

/// Nullity over F₂ is positive exactly when the determinant is even.
pub fn double_cover_consistent(v: &SeifertMatrix) -> bool {
    let (det, nullity) = double_cover_data(v);
    det.is_even() == (nullity > 0)
}

/// Fraction-free (Bareiss) integer determinant.
pub fn integer_determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn sm(rows: &[&[i64]]) -> SeifertMatrix {
        SeifertMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(triple_cover_dim(&sm(&[])), 0);
        assert_eq!(triple_cover_dim(&sm(&[&[-1, 1], &[0, -1]])), 2);
        assert_eq!(triple_cover_dim(&sm(&[&[1]])), 0);
        assert_eq!(triple_cover_order(&sm(&[&[1]])), BigInt::from(3));
        assert_eq!(triple_cover_order(&sm(&[&[-1, 1], &[0, -1]])), BigInt::from(4));
    }

    #[test]
    fn rejects_non_square() {
        assert!(matches!(SeifertMatrix::new(vec![vec![1, 2]]), Err(Error::NotSquare { .. })));
        assert!(serde_json::from_str::<SeifertMatrix>("[[1],[2]]").is_err());
        let ok: SeifertMatrix = serde_json::from_str("[[1,0],[1,1]]").unwrap();
        assert_eq!(ok.size(), 2);
    }

    #[test]
    fn bareiss_matches_exact_elimination() {
        let m = vec![vec![2, -1, 0, 3], vec![1, 4, -2, 0], vec![0, 5, 1, -1], vec![3, 0, 2, 2]];
        let exact = determinant(m.iter().map(|r| r.iter().map(|&x| Scalar::from(x)).collect()).collect());
        assert_eq!(Scalar::rational(BigRational::from_integer(integer_determinant(&m))), exact);
        assert_eq!(integer_determinant(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
    }

    #[test]
    fn fox_formula_agrees_with_presentation() {
        let cases = [
            sm(&[&[-1, 1], &[0, -1]]),
            sm(&[&[-1, 1], &[0, 1]]),
            sm(&[&[-1, 1], &[0, -2]]),
            sm(&[&[-1, 1], &[0, 2]]),
            sm(&[&[-1, 1, 0, 0], &[0, -1, 1, 0], &[0, 0, -1, 1], &[0, 0, 0, -1]]),
            sm(&[&[1]]),
        ];
        for v in &cases {
            let fox = alexander_at_cube_root(v).norm_sq();
            assert_eq!(fox, BigRational::from_integer(triple_cover_order(v)), "{v:?}");
        }
    }

    #[test]
    fn knot_matrices_are_unimodular_on_the_antisymmetric_part() {
        let trefoil = sm(&[&[-1, 1], &[0, -1]]);
        assert_eq!(trefoil.intersection_determinant().abs(), BigInt::one());
        assert!(double_cover_consistent(&trefoil));
        assert_eq!(double_cover_data(&trefoil).0.abs(), BigInt::from(3));
    }

    fn unimodular(seed: u64, s: usize) -> Vec<Vec<i64>> {
        let mut p: Vec<Vec<i64>> = (0..s).map(|i| (0..s).map(|j| (i == j) as i64).collect()).collect();
        let mut x = seed;
        for _ in 0..6 {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let i = (x >> 33) as usize % s;
            let j = (x >> 40) as usize % s;
            if i == j {
                p[i].iter_mut().for_each(|e| *e = -*e);
                continue;
            }
            let c = ((x >> 50) % 3) as i64 - 1;
            let row_j = p[j].clone();
            for (a, b) in p[i].iter_mut().zip(row_j) {
                *a += c * b;
            }
        }
        p
    }

    proptest! {
        #[test]
        fn nullity_invariant_under_congruence(seed in any::<u64>(), which in 0usize..4) {
            let mats = [
                sm(&[&[-1, 1], &[0, -1]]),
                sm(&[&[-1, 1], &[0, 1]]),
                sm(&[&[-1, 1], &[0, -2]]),
                sm(&[&[-1, 1, 0, 0], &[0, -1, 1, 0], &[0, 0, -1, 1], &[0, 0, 0, -1]]),
            ];
            let v = &mats[which];
            let p = unimodular(seed, v.size());
            prop_assert_eq!(integer_determinant(&p).abs(), BigInt::one());
            let w = v.congruent(&p);
            prop_assert_eq!(triple_cover_dim(&w), triple_cover_dim(v));
            prop_assert_eq!(triple_cover_order(&w), triple_cover_order(v));
        }
    }
}
