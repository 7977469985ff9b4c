//! Bi-free products of pair distributions, and a bi-freeness test.
//!
//! The joint moment of a word is the moment-cumulant sum over BNC(χ) in
//! which every block mixing letters of different components is dropped and
//! every other block takes its cumulant from its own component.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::chi_order::ChiMap;
use crate::cumulants::{nc_block_sum, CumulantTable};
use crate::distributions::{Letter, Model, Moments, Word};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The component pair id at each position of a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonMap(Vec<u32>);

impl EpsilonMap {
    pub fn of(w: &Word) -> Self {
        EpsilonMap(w.letters().iter().map(|l| l.pair).collect())
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn is_constant(&self) -> bool {
        self.0.windows(2).all(|p| p[0] == p[1])
    }
}

/// The bi-free product of several models with disjoint pair ids. A
/// component may itself hold several pairs; those keep their joint
/// distribution.
pub struct JointDistribution {
    components: Vec<CumulantTable>,
    owner: BTreeMap<u32, usize>,
    bound: usize,
    cache: RwLock<HashMap<Word, Scalar>>,
}

pub fn bifree_product(models: Vec<Model>) -> Result<JointDistribution> {
    if models.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut owner = BTreeMap::new();
    for (k, m) in models.iter().enumerate() {
        for p in m.pair_ids() {
            if owner.insert(p, k).is_some() {
                return Err(Error::DuplicatePair(p));
            }
        }
    }
    let bound = models.iter().map(|m| m.degree_bound()).min().unwrap_or(0);
    Ok(JointDistribution {
        components: models.into_iter().map(CumulantTable::new).collect(),
        owner,
        bound,
        cache: RwLock::default(),
    })
}

impl JointDistribution {
    pub fn components(&self) -> impl Iterator<Item = &Model> {
        self.components.iter().map(CumulantTable::model)
    }

    fn component_of(&self, l: &Letter) -> usize {
        self.owner[&l.pair]
    }

    fn compute(&self, w: &Word) -> Result<Scalar> {
        let comp: Vec<usize> = w.letters().iter().map(|l| self.component_of(l)).collect();
        if comp.windows(2).all(|p| p[0] == p[1]) {
            return self.components[comp[0]].model().moment(w);
        }
        let order = w.chi()?.chi_order();
        let block = |b: &[usize]| {
            let positions: Vec<usize> = b.iter().map(|&k| order[k]).collect();
            let c = comp[positions[0] - 1];
            self.components[c].kappa_full(&w.restrict(&positions)?)
        };
        let joinable = |a: usize, x: usize| comp[order[a] - 1] == comp[order[x] - 1];
        nc_block_sum(w.len(), &block, &joinable, false)
    }
}

impl Moments for JointDistribution {
    fn pair_ids(&self) -> Vec<u32> {
        self.owner.keys().copied().collect()
    }

    fn degree_bound(&self) -> usize {
        self.bound
    }

    fn moment(&self, w: &Word) -> Result<Scalar> {
        self.check_word(w)?;
        if w.is_empty() {
            return Ok(Scalar::one());
        }
        if let Some(v) = self.cache.read().unwrap().get(w) {
            return Ok(v.clone());
        }
        let v = self.compute(w)?;
        self.cache.write().unwrap().insert(w.clone(), v.clone());
        Ok(v)
    }
}

/// A mixed word with a nonzero cumulant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixedCumulant {
    pub word: Word,
    pub chi: ChiMap,
    pub kappa: Scalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct BifreeReport {
    pub max_degree: usize,
    pub findings: Vec<MixedCumulant>,
}

impl BifreeReport {
    pub fn is_bifree(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Every word over the model's letters of length `2..=max_degree` that uses
/// at least two pairs and has a nonzero cumulant.
pub fn check_bifree(model: &Model, max_degree: usize) -> Result<BifreeReport> {
    let letters: Vec<Letter> = model.pair_ids().into_iter().flat_map(Letter::alphabet).collect();
    check_bifree_over(model, &letters, max_degree)
}

/// As [`check_bifree`], over words in the given letters only. Useful when
/// some letters are equal as elements, e.g. self-adjoint ones.
pub fn check_bifree_over(model: &Model, letters: &[Letter], max_degree: usize) -> Result<BifreeReport> {
    if max_degree > model.degree_bound() {
        return Err(Error::DegreeExceeded { len: max_degree, bound: model.degree_bound() });
    }
    let table = CumulantTable::new(model.clone());
    let mut findings = Vec::new();
    for n in 2..=max_degree {
        let words: Vec<Word> =
            Word::all_of_length(letters, n).into_iter().filter(|w| w.pair_ids().len() > 1).collect();
        let found: Vec<Option<MixedCumulant>> = words
            .into_par_iter()
            .map(|w| {
                let k = table.kappa_full(&w)?;
                if k.is_zero() {
                    return Ok(None);
                }
                Ok(Some(MixedCumulant { chi: w.chi()?, word: w, kappa: k }))
            })
            .collect::<Result<_>>()?;
        findings.extend(found.into_iter().flatten());
    }
    Ok(BifreeReport { max_degree, findings })
}
