use std::sync::Arc;

use super::{Base, Moments, Word};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A square matrix with exact entries, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Model("matrix must be nonempty".into()));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::SizeMismatch { expected: dim, got: r.len() });
        }
        Ok(Matrix { dim, data: rows.into_iter().flatten().collect() })
    }

    /// Integer entries, for tests and fixed examples.
    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect()).collect())
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Scalar::zero(); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Scalar::one();
        }
        Matrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.data.chunks(self.dim).map(<[Scalar]>::to_vec).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        let d = self.dim;
        let data = (0..d * d).map(|k| self.get(k % d, k / d).conj()).collect();
        Matrix { dim: d, data }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let d = self.dim;
        let mut data = vec![Scalar::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        data[i * d + j] += a * b;
                    }
                }
            }
        }
        Matrix { dim: d, data }
    }

    pub fn trace(&self) -> Scalar {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }
}

/// A pair of `d×d` matrices `(X, Y)` under the normalised trace.
#[derive(Clone, Debug)]
pub struct MatrixState {
    pair: u32,
    // X, X*, Y, Y*
    mats: Arc<[Matrix; 4]>,
    bound: usize,
}

impl MatrixState {
    pub const DEFAULT_BOUND: usize = 64;

    pub fn new(pair: u32, x: Matrix, y: Matrix) -> Result<Self> {
        if x.dim() != y.dim() {
            return Err(Error::SizeMismatch { expected: x.dim(), got: y.dim() });
        }
        let (xs, ys) = (x.adjoint(), y.adjoint());
        Ok(MatrixState { pair, mats: Arc::new([x, xs, y, ys]), bound: Self::DEFAULT_BOUND })
    }

    pub fn with_bound(mut self, bound: usize) -> Self {
        self.bound = bound;
        self
    }

    pub fn dim(&self) -> usize {
        self.mats[0].dim()
    }

    pub fn x(&self) -> &Matrix {
        &self.mats[0]
    }

    pub fn y(&self) -> &Matrix {
        &self.mats[2]
    }

    /// The product of the matrices spelled by `w`.
    pub fn evaluate(&self, w: &Word) -> Result<Matrix> {
        self.check_word(w)?;
        let mut acc = Matrix::identity(self.dim());
        for l in w.letters() {
            let k = match l.base {
                Base::First => 0,
                Base::Second => 2,
            } + usize::from(l.starred);
            acc = acc.mul(&self.mats[k]);
        }
        Ok(acc)
    }
}

impl Moments for MatrixState {
    fn pair_ids(&self) -> Vec<u32> {
        vec![self.pair]
    }

    fn degree_bound(&self) -> usize {
        self.bound
    }

    fn moment(&self, w: &Word) -> Result<Scalar> {
        let m = self.evaluate(w)?;
        Ok(&m.trace() * &Scalar::ratio(1, self.dim() as i64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::Letter;

    // Z = e_11, W = e_21 in (M_2, tr)
    fn zw() -> MatrixState {
        let z = Matrix::from_ints(&[&[1, 0], &[0, 0]]).unwrap();
        let w = Matrix::from_ints(&[&[0, 0], &[1, 0]]).unwrap();
        MatrixState::new(0, z, w).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn trace_values() {
        let m = zw();
        assert_eq!(m.moment(&w("X* X")).unwrap(), Scalar::ratio(1, 2));
        assert_eq!(m.moment(&w("Y* Y")).unwrap(), Scalar::ratio(1, 2));
        assert_eq!(m.moment(&w("X* X Y* Y")).unwrap(), Scalar::ratio(1, 2));
        assert_eq!(m.moment(&w("X X")).unwrap(), Scalar::ratio(1, 2));
        assert_eq!(m.moment(&Word::empty()).unwrap(), Scalar::one());
    }

    #[test]
    fn complex_adjoint() {
        let i = Scalar::i();
        let x = Matrix::from_rows(vec![vec![Scalar::zero(), i.clone()], vec![Scalar::zero(), Scalar::zero()]]).unwrap();
        assert_eq!(x.adjoint().get(1, 0), &-i);
    }

    #[test]
    fn positivity_of_trace() {
        let m = zw();
        for n in 0..=6 {
            for word in Word::all_of_length(&Letter::alphabet(0), n) {
                let v = m.moment(&word.concat(&word.adjoint())).unwrap();
                assert!(v.is_real());
                assert!(!num_traits::Signed::is_negative(v.re()));
            }
        }
    }

    #[test]
    fn off_diagonal_pair_has_no_odd_moments() {
        let z = Matrix::from_ints(&[&[0, 2], &[-1, 0]]).unwrap();
        let y = Matrix::from_ints(&[&[0, 1], &[3, 0]]).unwrap();
        let m = MatrixState::new(0, z, y).unwrap();
        for n in (1..=5).step_by(2) {
            for word in Word::all_of_length(&Letter::alphabet(0), n) {
                assert!(m.moment(&word).unwrap().is_zero());
            }
        }
    }
}
