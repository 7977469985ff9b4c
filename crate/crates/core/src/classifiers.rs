//! Degree-bounded tests for bi-R-diagonal, *-bi-even and bi-Haar pairs, and
//! the R-cyclicity of the associated 2×2 matrix pair.
//!
//! Every verdict means "no violation up to `max_degree`".

use rayon::prelude::*;
use serde::Serialize;

use crate::chi_order::ChiMap;
use crate::cumulants::CumulantTable;
use crate::distributions::{Base, Letter, PairDistribution, Word};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const WITNESS_CAP: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternReason {
    OddLength,
    StarNonalternating,
    BaseOrderViolation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PatternVerdict {
    pub admissible: bool,
    pub reason: Option<PatternReason>,
}

/// Whether `κ_χ(w)` may be nonzero for a bi-R-diagonal pair: even length,
/// alternating stars in χ-order, and all `X`-letters before all `Y`-letters
/// in χ-order.
pub fn is_admissible_pattern(chi: &ChiMap, w: &Word) -> Result<PatternVerdict> {
    if chi.len() != w.len() {
        return Err(Error::SizeMismatch { expected: chi.len(), got: w.len() });
    }
    if w.pair_ids().len() > 1 {
        return Err(Error::Precondition(format!("'{w}' mixes letters of several pairs")));
    }
    if let Some(k) = (0..w.len()).find(|&k| w.letters()[k].side() != chi.sides()[k]) {
        return Err(Error::Precondition(format!("letter {} of '{w}' is not on side {}", k + 1, chi)));
    }
    let reject = |r| Ok(PatternVerdict { admissible: false, reason: Some(r) });
    if w.len() % 2 == 1 {
        return reject(PatternReason::OddLength);
    }
    let read: Vec<Letter> = chi.chi_order().iter().map(|&i| w.letters()[i - 1]).collect();
    if read.windows(2).any(|p| p[0].starred == p[1].starred) {
        return reject(PatternReason::StarNonalternating);
    }
    if read.windows(2).any(|p| p[0].base == Base::Second && p[1].base == Base::First) {
        return reject(PatternReason::BaseOrderViolation);
    }
    Ok(PatternVerdict { admissible: true, reason: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub word: Word,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<ChiMap>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Scalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moment: Option<Scalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Scalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Witness {
    fn kappa(word: Word, value: Scalar) -> Result<Self> {
        Ok(Witness { chi: Some(word.chi()?), word, kappa: Some(value), moment: None, expected: None, note: None })
    }

    fn moment(word: Word, value: Scalar, expected: Scalar, note: &str) -> Self {
        let chi = word.chi().ok();
        Witness { word, chi, kappa: None, moment: Some(value), expected: Some(expected), note: Some(note.into()) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub verdict: bool,
    pub max_degree: usize,
    /// Number of failed constraints; only the first few are kept as witnesses.
    pub violations: usize,
    pub witnesses: Vec<Witness>,
}

impl ClassReport {
    fn from_witnesses(max_degree: usize, mut all: Vec<Witness>) -> Self {
        all.sort_by(|a, b| (a.word.len(), &a.word).cmp(&(b.word.len(), &b.word)));
        let violations = all.len();
        all.truncate(WITNESS_CAP);
        ClassReport { verdict: violations == 0, max_degree, violations, witnesses: all }
    }
}

fn check_degree(p: &PairDistribution, max_degree: usize) -> Result<()> {
    if max_degree > p.degree_bound() {
        return Err(Error::DegreeExceeded { len: max_degree, bound: p.degree_bound() });
    }
    Ok(())
}

fn words_up_to(p: &PairDistribution, lo: usize, hi: usize) -> Vec<Word> {
    (lo..=hi).flat_map(|n| Word::all_of_length(&p.alphabet(), n)).collect()
}

/// Runs `f` on every word, in parallel, keeping the order of the input.
fn scan<F>(words: Vec<Word>, f: F) -> Result<Vec<Witness>>
where
    F: Fn(Word) -> Result<Option<Witness>> + Sync + Send,
{
    let found: Vec<Option<Witness>> = words.into_par_iter().map(f).collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Every cumulant of a non-admissible pattern vanishes up to `max_degree`.
pub fn check_bi_r_diagonal(p: &PairDistribution, max_degree: usize) -> Result<ClassReport> {
    check_bi_r_diagonal_with(p, &CumulantTable::new(p.model().clone()), max_degree)
}

/// As [`check_bi_r_diagonal`], reusing a cumulant table of the pair's model.
pub fn check_bi_r_diagonal_with(p: &PairDistribution, table: &CumulantTable, max_degree: usize) -> Result<ClassReport> {
    check_degree(p, max_degree)?;
    let found = scan(words_up_to(p, 1, max_degree), |w| {
        if is_admissible_pattern(&w.chi()?, &w)?.admissible {
            return Ok(None);
        }
        let k = table.kappa_full(&w)?;
        if k.is_zero() {
            Ok(None)
        } else {
            Witness::kappa(w, k).map(Some)
        }
    })?;
    Ok(ClassReport::from_witnesses(max_degree, found))
}

/// All odd moments vanish, and so do all odd cumulants.
pub fn check_star_bi_even(p: &PairDistribution, max_degree: usize) -> Result<ClassReport> {
    check_degree(p, max_degree)?;
    let odd: Vec<Word> =
        (1..=max_degree).step_by(2).flat_map(|n| Word::all_of_length(&p.alphabet(), n)).collect();
    let table = CumulantTable::new(p.model().clone());
    let found = scan(odd, |w| {
        let m = p.moment(&w)?;
        if !m.is_zero() {
            return Ok(Some(Witness::moment(w, m, Scalar::zero(), "odd moment")));
        }
        let k = table.kappa_full(&w)?;
        if k.is_zero() {
            Ok(None)
        } else {
            Witness::kappa(w, k).map(Some)
        }
    })?;
    Ok(ClassReport::from_witnesses(max_degree, found))
}

/// Unitarity (`u u* = u* u = 1` inside any word), commutation of opposite
/// faces, and `φ(u_l^n u_r^m) = [n + m = 0]`.
pub fn check_bi_haar(p: &PairDistribution, max_degree: usize) -> Result<ClassReport> {
    check_degree(p, max_degree)?;
    let [x, xs, y, ys] = p.alphabet();
    let units = [[x, xs], [xs, x], [y, ys], [ys, y]];

    let unitarity = scan(words_up_to(p, 0, max_degree.saturating_sub(2)), |w| {
        let base = p.moment(&w)?;
        for k in 0..=w.len() {
            for u in &units {
                let mut v = w.letters().to_vec();
                v.splice(k..k, u.iter().copied());
                let longer = Word::new(v);
                let m = p.moment(&longer)?;
                if m != base {
                    return Ok(Some(Witness::moment(longer, m, base, "unitarity")));
                }
            }
        }
        Ok(None)
    })?;

    let commutation = scan(words_up_to(p, 2, max_degree), |w| {
        let ls = w.letters();
        let Some(k) = (0..ls.len() - 1).find(|&k| ls[k].side() != ls[k + 1].side()) else {
            return Ok(None);
        };
        let base = p.moment(&w)?;
        for k in k..ls.len() - 1 {
            if ls[k].side() == ls[k + 1].side() {
                continue;
            }
            let mut v = ls.to_vec();
            v.swap(k, k + 1);
            let swapped = Word::new(v);
            let m = p.moment(&swapped)?;
            if m != base {
                return Ok(Some(Witness::moment(swapped, m, base, "commutation")));
            }
        }
        Ok(None)
    })?;

    let d = max_degree as i64;
    let mut powers = Vec::new();
    for n in -d..=d {
        for m in -(d - n.abs())..=(d - n.abs()) {
            if n == 0 && m == 0 {
                continue;
            }
            let pw = |l: Letter, e: i64| std::iter::repeat_n(if e < 0 { l.star() } else { l }, e.unsigned_abs() as usize);
            let w = Word::new(pw(x, n).chain(pw(y, m)).collect());
            let want = if n + m == 0 { Scalar::one() } else { Scalar::zero() };
            let got = p.moment(&w)?;
            if got != want {
                powers.push(Witness::moment(w, got, want, "power moment"));
            }
        }
    }

    let mut all = unitarity;
    all.extend(commutation);
    all.extend(powers);
    Ok(ClassReport::from_witnesses(max_degree, all))
}

/// For `Z = [[0, X], [X*, 0]]` and `W = [[0, Y], [Y*, 0]]`: every entry
/// cumulant whose index cycle `j_{s(k)} = i_{s(k+1)}` breaks must vanish.
/// Entries on the diagonal are the zero element, so only off-diagonal
/// index choices are evaluated.
pub fn check_r_cyclic_2x2(p: &PairDistribution, max_degree: usize) -> Result<ClassReport> {
    check_degree(p, max_degree)?;
    let table = CumulantTable::new(p.model().clone());
    let pair = p.pair();
    let mut jobs = Vec::new();
    for n in 1..=max_degree {
        for chi in ChiMap::all(n) {
            // bit k of `mask` picks the (2,1) entry at position k+1
            for mask in 0u32..1 << n {
                jobs.push((chi.clone(), mask));
            }
        }
    }
    let found = jobs
        .into_par_iter()
        .map(|(chi, mask)| {
            let n = chi.len();
            let idx: Vec<(u8, u8)> = (0..n).map(|k| if mask >> k & 1 == 1 { (2, 1) } else { (1, 2) }).collect();
            let s = chi.chi_order();
            let cyclic = (0..n).all(|k| idx[s[k] - 1].1 == idx[s[(k + 1) % n] - 1].0);
            if cyclic {
                return Ok(None);
            }
            let letters = (0..n)
                .map(|k| {
                    let base = match chi.sides()[k] {
                        crate::chi_order::Side::Left => Base::First,
                        crate::chi_order::Side::Right => Base::Second,
                    };
                    Letter::new(pair, base, idx[k] == (2, 1))
                })
                .collect();
            let w = Word::new(letters);
            let k = table.kappa_full(&w)?;
            if k.is_zero() {
                Ok(None)
            } else {
                Witness::kappa(w, k).map(Some)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassReport::from_witnesses(max_degree, found.into_iter().flatten().collect()))
}
