use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use super::{Base, Letter, Model, Moments, Word};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A noncommutative polynomial: a linear combination of words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly(Vec<(Scalar, Word)>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly::word(Word::empty())
    }

    pub fn word(w: Word) -> Self {
        Poly(vec![(Scalar::one(), w)])
    }

    pub fn letter(l: Letter) -> Self {
        Poly::word(Word::new(vec![l]))
    }

    pub fn terms(&self) -> &[(Scalar, Word)] {
        &self.0
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly(self.0.iter().map(|(a, w)| (a * c, w.clone())).collect()).normalized()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        Poly(self.0.iter().chain(&other.0).cloned().collect()).normalized()
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Vec::with_capacity(self.0.len() * other.0.len());
        for (a, u) in &self.0 {
            for (b, v) in &other.0 {
                out.push((a * b, u.concat(v)));
            }
        }
        Poly(out).normalized()
    }

    pub fn pow(&self, p: u32) -> Poly {
        (0..p).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// `P*`: adjoint words with conjugated coefficients.
    pub fn adjoint(&self) -> Poly {
        Poly(self.0.iter().map(|(a, w)| (a.conj(), w.adjoint())).collect())
    }

    /// Longest word with a nonzero coefficient.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|(_, w)| w.len()).max().unwrap_or(0)
    }

    fn normalized(self) -> Poly {
        let mut acc: BTreeMap<Word, Scalar> = BTreeMap::new();
        for (c, w) in self.0 {
            *acc.entry(w).or_default() += c;
        }
        Poly(acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(w, c)| (c, w)).collect())
    }
}

/// New pairs whose letters are polynomials in a base model's letters. The
/// image of `X*` is the adjoint of the image of `X`, likewise for `Y`.
pub struct Derived {
    base: Model,
    // per pair: images of X, X*, Y, Y*
    images: BTreeMap<u32, [Poly; 4]>,
    cache: RwLock<HashMap<Word, Scalar>>,
}

impl Derived {
    pub fn new(base: Model) -> Self {
        Derived { base, images: BTreeMap::new(), cache: RwLock::default() }
    }

    /// A one-pair model `(x, y)` over `base`.
    pub fn pair(base: Model, pair: u32, x: Poly, y: Poly) -> Result<Self> {
        Derived::new(base).with_pair(pair, x, y)
    }

    pub fn with_pair(mut self, pair: u32, x: Poly, y: Poly) -> Result<Self> {
        if self.images.contains_key(&pair) {
            return Err(Error::DuplicatePair(pair));
        }
        let (xs, ys) = (x.adjoint(), y.adjoint());
        self.images.insert(pair, [x, xs, y, ys]);
        Ok(self)
    }

    pub fn base(&self) -> &Model {
        &self.base
    }

    fn image(&self, l: &Letter) -> &Poly {
        let k = match l.base {
            Base::First => 0,
            Base::Second => 2,
        } + usize::from(l.starred);
        &self.images[&l.pair][k]
    }

    /// Whether the letter and its adjoint spell the same polynomial.
    pub fn is_self_adjoint(&self, l: &Letter) -> Result<bool> {
        self.check_word(&Word::new(vec![*l]))?;
        Ok(self.image(l) == self.image(&l.star()))
    }

    /// The base-model polynomial spelled by `w`.
    pub fn expand(&self, w: &Word) -> Result<Poly> {
        self.check_word(w)?;
        Ok(w.letters().iter().fold(Poly::one(), |acc, l| acc.mul(self.image(l))))
    }
}

impl Moments for Derived {
    fn pair_ids(&self) -> Vec<u32> {
        self.images.keys().copied().collect()
    }

    fn degree_bound(&self) -> usize {
        let widest = self.images.values().flat_map(|im| im.iter().map(Poly::degree)).max().unwrap_or(1);
        self.base.degree_bound() / widest.max(1)
    }

    fn moment(&self, w: &Word) -> Result<Scalar> {
        if let Some(v) = self.cache.read().unwrap().get(w) {
            return Ok(v.clone());
        }
        let mut acc = Scalar::zero();
        for (c, u) in self.expand(w)?.terms() {
            let m = self.base.moment(u)?;
            if !m.is_zero() {
                acc += &(c * &m);
            }
        }
        self.cache.write().unwrap().insert(w.clone(), acc.clone());
        Ok(acc)
    }
}
