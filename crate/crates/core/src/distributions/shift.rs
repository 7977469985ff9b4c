use super::{Base, Moments, Word};
use crate::error::Result;
use crate::scalar::Scalar;

/// The bi-Haar pair `(u_l, u_r)` realised by the bilateral shift: both faces
/// act as the same unitary, so a word reduces to `u_l^a u_r^b` and
/// `φ = [a + b = 0]`.
#[derive(Clone, Debug)]
pub struct ShiftBiHaar {
    pair: u32,
    bound: usize,
}

impl ShiftBiHaar {
    pub const DEFAULT_BOUND: usize = 64;

    pub fn new(pair: u32) -> Self {
        ShiftBiHaar { pair, bound: Self::DEFAULT_BOUND }
    }

    pub fn with_bound(pair: u32, bound: usize) -> Self {
        ShiftBiHaar { pair, bound }
    }

    /// Exponents `(a, b)` of the reduced form `u_l^a u_r^b`.
    pub fn reduce(w: &Word) -> (i64, i64) {
        let (mut a, mut b) = (0, 0);
        for l in w.letters() {
            let e = if l.starred { -1 } else { 1 };
            match l.base {
                Base::First => a += e,
                Base::Second => b += e,
            }
        }
        (a, b)
    }
}

impl Moments for ShiftBiHaar {
    fn pair_ids(&self) -> Vec<u32> {
        vec![self.pair]
    }

    fn degree_bound(&self) -> usize {
        self.bound
    }

    fn moment(&self, w: &Word) -> Result<Scalar> {
        self.check_word(w)?;
        let (a, b) = Self::reduce(w);
        Ok(if a + b == 0 { Scalar::one() } else { Scalar::zero() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn moment_examples() {
        let m = ShiftBiHaar::new(0);
        assert_eq!(m.moment(&w("ul ur")).unwrap(), Scalar::zero());
        assert_eq!(m.moment(&w("ul ur*")).unwrap(), Scalar::one());
        assert_eq!(m.moment(&Word::empty()).unwrap(), Scalar::one());
        assert!(matches!(m.moment(&w("X1")), Err(Error::ForeignLetter(_))));
        let small = ShiftBiHaar::with_bound(0, 2);
        assert!(matches!(small.moment(&w("X X X")), Err(Error::DegreeExceeded { .. })));
    }
}
