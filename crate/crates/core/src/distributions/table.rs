use std::collections::HashMap;

use super::{Moments, Word};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An explicit finite table of moments over the letters of some pairs.
#[derive(Clone, Debug)]
pub struct TableModel {
    pairs: Vec<u32>,
    entries: HashMap<Word, Scalar>,
    bound: usize,
    default_zero: bool,
}

impl TableModel {
    /// The empty word is added with value 1 when absent; any other value for
    /// it is rejected.
    pub fn new(pair: u32, entries: HashMap<Word, Scalar>, bound: usize, default_zero: bool) -> Result<Self> {
        TableModel::multi(vec![pair], entries, bound, default_zero)
    }

    /// A table over several pairs at once.
    pub fn multi(
        mut pairs: Vec<u32>,
        mut entries: HashMap<Word, Scalar>,
        bound: usize,
        default_zero: bool,
    ) -> Result<Self> {
        pairs.sort_unstable();
        pairs.dedup();
        match entries.get(&Word::empty()) {
            Some(v) if !v.is_one() => {
                return Err(Error::Model(format!("empty word must have moment 1, got {v}")));
            }
            Some(_) => {}
            None => {
                entries.insert(Word::empty(), Scalar::one());
            }
        }
        if let Some(w) = entries.keys().find(|w| w.letters().iter().any(|l| pairs.binary_search(&l.pair).is_err())) {
            return Err(Error::ForeignLetter(w.to_string()));
        }
        Ok(TableModel { pairs, entries, bound, default_zero })
    }

    /// Tabulates every word of length `≤ bound` over one pair of `model`.
    pub fn tabulate(model: &dyn Moments, pair: u32, bound: usize) -> Result<Self> {
        let alphabet = super::Letter::alphabet(pair);
        let mut entries = HashMap::new();
        for n in 0..=bound {
            for w in Word::all_of_length(&alphabet, n) {
                let v = model.moment(&w)?;
                entries.insert(w, v);
            }
        }
        TableModel::new(pair, entries, bound, false)
    }

    pub fn entries(&self) -> &HashMap<Word, Scalar> {
        &self.entries
    }

    pub fn default_zero(&self) -> bool {
        self.default_zero
    }
}

impl Moments for TableModel {
    fn pair_ids(&self) -> Vec<u32> {
        self.pairs.clone()
    }

    fn degree_bound(&self) -> usize {
        self.bound
    }

    fn moment(&self, w: &Word) -> Result<Scalar> {
        self.check_word(w)?;
        match self.entries.get(w) {
            Some(v) => Ok(v.clone()),
            None if self.default_zero => Ok(Scalar::zero()),
            None => Err(Error::MissingEntry(w.to_string())),
        }
    }
}
