//! Two-faced *-alphabets, words, and moment oracles.

mod derived;
mod matrix;
mod model_file;
mod shift;
mod table;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use derived::{Derived, Poly};
pub use matrix::{Matrix, MatrixState};
pub use model_file::{load_model, model_from_json};
pub use shift::ShiftBiHaar;
pub use table::TableModel;

use crate::chi_order::{ChiMap, Side};
use crate::error::{Error, Result};
use crate::partitions::SetPartition;
use crate::scalar::Scalar;

/// Which element of a pair: `First` is the left face, `Second` the right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Base {
    First,
    Second,
}

impl Base {
    pub fn side(self) -> Side {
        match self {
            Base::First => Side::Left,
            Base::Second => Side::Right,
        }
    }
}

/// One of `X, X*, Y, Y*` for a given pair.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub pair: u32,
    pub base: Base,
    pub starred: bool,
}

impl Letter {
    pub fn new(pair: u32, base: Base, starred: bool) -> Self {
        Letter { pair, base, starred }
    }

    pub fn x(pair: u32) -> Self {
        Letter::new(pair, Base::First, false)
    }

    pub fn y(pair: u32) -> Self {
        Letter::new(pair, Base::Second, false)
    }

    pub fn side(self) -> Side {
        self.base.side()
    }

    pub fn star(self) -> Self {
        Letter { starred: !self.starred, ..self }
    }

    /// The four letters of a pair in the order `X, X*, Y, Y*`.
    pub fn alphabet(pair: u32) -> [Letter; 4] {
        let (x, y) = (Letter::x(pair), Letter::y(pair));
        [x, x.star(), y, y.star()]
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.base {
            Base::First => "X",
            Base::Second => "Y",
        };
        f.write_str(name)?;
        if self.pair != 0 {
            write!(f, "{}", self.pair)?;
        }
        if self.starred {
            f.write_str("*")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Letter {
    type Err = Error;

    /// Tokens `X`, `Y`, `ul`, `ur`, each with an optional pair index and an
    /// optional trailing `*`: `X*`, `ur2*`, `Y1`.
    fn from_str(tok: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown token '{tok}'"));
        let (body, starred) = match tok.strip_suffix('*') {
            Some(b) => (b, true),
            None => (tok, false),
        };
        let (base, rest) = if let Some(r) = body.strip_prefix("ul") {
            (Base::First, r)
        } else if let Some(r) = body.strip_prefix("ur") {
            (Base::Second, r)
        } else if let Some(r) = body.strip_prefix('X') {
            (Base::First, r)
        } else if let Some(r) = body.strip_prefix('Y') {
            (Base::Second, r)
        } else {
            return Err(bad());
        };
        let pair = if rest.is_empty() {
            0
        } else if rest.bytes().all(|b| b.is_ascii_digit()) {
            rest.parse().map_err(|_| bad())?
        } else {
            return Err(bad());
        };
        Ok(Letter { pair, base, starred })
    }
}

/// A finite sequence of letters; the empty word is the unit.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The side of each letter; fails on the empty word.
    pub fn chi(&self) -> Result<ChiMap> {
        ChiMap::new(self.0.iter().map(|l| l.side()).collect())
    }

    /// `w*`: reversed with every letter starred.
    pub fn adjoint(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.star()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The subword at the given 1-based positions, in increasing order.
    pub fn restrict(&self, v: &[usize]) -> Result<Word> {
        if v.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut v = v.to_vec();
        v.sort_unstable();
        v.dedup();
        v.iter()
            .map(|&i| {
                if i == 0 || i > self.len() {
                    Err(Error::IndexOutOfRange { index: i, n: self.len() })
                } else {
                    Ok(self.0[i - 1])
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    /// Distinct pair ids, ascending.
    pub fn pair_ids(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = self.0.iter().map(|l| l.pair).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// All words of length exactly `n` over `letters`, in lexicographic
    /// order of the given letter sequence.
    pub fn all_of_length(letters: &[Letter], n: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|w| {
                    letters.iter().map(move |&l| {
                        let mut v = w.0.clone();
                        v.push(l);
                        Word(v)
                    })
                })
                .collect();
        }
        out
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self.0.iter().map(Letter::to_string).collect();
        f.write_str(&toks.join(" "))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace().map(str::parse).collect::<Result<Vec<_>>>().map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A unital moment functional on words over the alphabets of some pairs.
pub trait Moments: Send + Sync {
    /// Pair ids this model knows, ascending.
    fn pair_ids(&self) -> Vec<u32>;

    /// Longest word the oracle accepts.
    fn degree_bound(&self) -> usize;

    /// `φ(w)`; `φ(∅) = 1`.
    fn moment(&self, w: &Word) -> Result<Scalar>;

    /// The standard guard: length bound and alphabet membership.
    fn check_word(&self, w: &Word) -> Result<()> {
        if w.len() > self.degree_bound() {
            return Err(Error::DegreeExceeded { len: w.len(), bound: self.degree_bound() });
        }
        let ids = self.pair_ids();
        if let Some(l) = w.letters().iter().find(|l| ids.binary_search(&l.pair).is_err()) {
            return Err(Error::ForeignLetter(l.to_string()));
        }
        Ok(())
    }
}

pub type Model = Arc<dyn Moments>;

/// `φ((a_1,…,a_n)|_V)`.
pub fn moment_restricted(model: &dyn Moments, w: &Word, v: &[usize]) -> Result<Scalar> {
    model.moment(&w.restrict(v)?)
}

/// `φ_π(a_1,…,a_n) = ∏_{V∈π} φ((a_1,…,a_n)|_V)`.
pub fn phi_pi(model: &dyn Moments, w: &Word, p: &SetPartition) -> Result<Scalar> {
    if p.n() != w.len() {
        return Err(Error::SizeMismatch { expected: w.len(), got: p.n() });
    }
    let mut acc = Scalar::one();
    for block in p.blocks() {
        let m = moment_restricted(model, w, block)?;
        if m.is_zero() {
            return Ok(Scalar::zero());
        }
        acc *= &m;
    }
    Ok(acc)
}

/// One pair of a (possibly multi-pair) model.
#[derive(Clone)]
pub struct PairDistribution {
    model: Model,
    pair: u32,
}

impl PairDistribution {
    pub fn new(model: Model, pair: u32) -> Result<Self> {
        if !model.pair_ids().contains(&pair) {
            return Err(Error::ForeignLetter(Letter::x(pair).to_string()));
        }
        Ok(PairDistribution { model, pair })
    }

    /// The model's only pair.
    pub fn single(model: Model) -> Result<Self> {
        match model.pair_ids().as_slice() {
            [p] => Ok(PairDistribution { pair: *p, model }),
            ids => Err(Error::Precondition(format!("expected one pair, model has {}", ids.len()))),
        }
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn pair(&self) -> u32 {
        self.pair
    }

    pub fn alphabet(&self) -> [Letter; 4] {
        Letter::alphabet(self.pair)
    }

    pub fn degree_bound(&self) -> usize {
        self.model.degree_bound()
    }

    pub fn moment(&self, w: &Word) -> Result<Scalar> {
        if let Some(l) = w.letters().iter().find(|l| l.pair != self.pair) {
            return Err(Error::ForeignLetter(l.to_string()));
        }
        self.model.moment(w)
    }
}
