//! Exact linear algebra over Q(ζ).

use crate::scalar::Scalar;

/// Determinant by Gaussian elimination with first-nonzero pivoting.
/// Panics on a non-square matrix.
pub fn determinant(mut m: Vec<Vec<Scalar>>) -> Scalar {
    let size = m.len();
    assert!(m.iter().all(|r| r.len() == size), "determinant of a non-square matrix");
    let mut det = Scalar::one();
    for c in 0..size {
        let Some(p) = (c..size).find(|&r| !m[r][c].is_zero()) else {
            return Scalar::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det = &det * &pivot;
        let inv = pivot.inv().expect("pivot is nonzero");
        for r in c + 1..size {
            if m[r][c].is_zero() {
                continue;
            }
            let factor = &m[r][c] * &inv;
            let (top, bottom) = m.split_at_mut(r);
            let src = &top[c];
            for (x, y) in bottom[0][c..].iter_mut().zip(&src[c..]) {
                *x -= &(&factor * y);
            }
        }
    }
    det
}

/// An incrementally built basis kept in reduced echelon form.
///
/// Each stored row has a leading 1 in its pivot column and zeros in the
/// pivot columns of all other rows.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    dim: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Reduces `v` against the basis, returning the residual.
    pub fn reduce(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        assert_eq!(v.len(), self.dim);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &(&factor * y);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v.to_vec()).iter().all(Scalar::is_zero)
    }

    /// Inserts `v` if it is independent of the current span; returns whether
    /// the rank grew.
    pub fn insert(&mut self, v: Vec<Scalar>) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("pivot is nonzero");
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for row in &mut self.rows {
            if row[p].is_zero() {
                continue;
            }
            let factor = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x -= &(&factor * y);
                }
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(a: i64, b: i64) -> Scalar {
        Scalar::from_ints(a, b)
    }

    #[test]
    fn small_determinants() {
        assert!(determinant(vec![]).is_one());
        assert_eq!(determinant(vec![vec![s(0, 1)]]), Scalar::zeta());
        // [[0,1],[1,0]] has determinant −1 and needs a row swap
        assert_eq!(determinant(vec![vec![s(0, 0), s(1, 0)], vec![s(1, 0), s(0, 0)]]), s(-1, 0));
        // [[q, 1],[1, q]] → q² − 1 = q − 2
        assert_eq!(determinant(vec![vec![s(0, 1), s(1, 0)], vec![s(1, 0), s(0, 1)]]), s(-2, 1));
        assert!(determinant(vec![vec![s(1, 1), s(2, 2)], vec![s(1, 1), s(2, 2)]]).is_zero());
    }

    #[test]
    fn echelon_rank() {
        let mut b = EchelonBasis::new(3);
        assert!(b.insert(vec![s(1, 0), s(0, 1), s(0, 0)]));
        assert!(!b.insert(vec![s(0, 1), s(-1, 1), s(0, 0)])); // q · first row
        assert!(b.insert(vec![s(0, 0), s(1, 0), s(1, 0)]));
        assert_eq!(b.rank(), 2);
        assert!(b.contains(&[s(1, 0), s(1, 1), s(1, 0)]));
        assert!(!b.contains(&[s(0, 0), s(0, 0), s(1, 0)]));
    }
}
