//! Bi-free cumulants: Möbius inversion of moments over BNC(χ).
//!
//! The full cumulant `κ_χ(w)` is computed by peeling off the single-block
//! term from the moment-cumulant sum `φ(w) = Σ_{τ∈BNC(χ)} κ_{χ,τ}(w)`. That
//! sum runs over non-crossing partitions of the positions listed in χ-order,
//! and every proper block is a cumulant of a shorter subword.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::distributions::{phi_pi, Model, Word};
use crate::error::{Error, Result};
use crate::partitions::{bnc_closure, is_bnc, BncContext, SetPartition};
use crate::scalar::Scalar;

/// `Σ_{π∈NC(n)} ∏_{B∈π} block(B)` with blocks given as ascending index
/// lists in `0..n`. `joinable(a, x)` may veto putting `x` in the block whose
/// least element is `a`; such blocks contribute zero. With `skip_full` the
/// single-block partition is left out.
pub(crate) fn nc_block_sum(
    n: usize,
    block: &dyn Fn(&[usize]) -> Result<Scalar>,
    joinable: &dyn Fn(usize, usize) -> bool,
    skip_full: bool,
) -> Result<Scalar> {
    let mut solver = NcSum { n, block, joinable, skip_full, memo: vec![None; (n + 1) * (n + 1)] };
    solver.interval(0, n)
}

struct NcSum<'a> {
    n: usize,
    block: &'a dyn Fn(&[usize]) -> Result<Scalar>,
    joinable: &'a dyn Fn(usize, usize) -> bool,
    skip_full: bool,
    memo: Vec<Option<Scalar>>,
}

impl NcSum<'_> {
    // sum over NC partitions of the interval [a, b)
    fn interval(&mut self, a: usize, b: usize) -> Result<Scalar> {
        if a >= b {
            return Ok(Scalar::one());
        }
        let key = a * (self.n + 1) + b;
        if let Some(v) = &self.memo[key] {
            return Ok(v.clone());
        }
        let mut blk = vec![a];
        let mut total = Scalar::zero();
        self.grow(a, b, &mut blk, Scalar::one(), &mut total)?;
        self.memo[key] = Some(total.clone());
        Ok(total)
    }

    // `inner` is the product over the gaps already enclosed by `blk`
    fn grow(&mut self, a: usize, b: usize, blk: &mut Vec<usize>, inner: Scalar, total: &mut Scalar) -> Result<()> {
        let last = *blk.last().unwrap();
        let full = self.skip_full && a == 0 && b == self.n && blk.len() == self.n;
        if !full {
            let tail = self.interval(last + 1, b)?;
            if !tail.is_zero() {
                let k = (self.block)(blk)?;
                if !k.is_zero() {
                    *total += &(&(&k * &inner) * &tail);
                }
            }
        }
        for nxt in last + 1..b {
            if !(self.joinable)(a, nxt) {
                continue;
            }
            let gap = self.interval(last + 1, nxt)?;
            if gap.is_zero() {
                continue;
            }
            blk.push(nxt);
            self.grow(a, b, blk, &inner * &gap, total)?;
            blk.pop();
        }
        Ok(())
    }
}

/// Memoised bi-free cumulants of one model.
pub struct CumulantTable {
    model: Model,
    memo: RwLock<HashMap<Word, Scalar>>,
    paranoid: bool,
}

impl CumulantTable {
    pub fn new(model: Model) -> Self {
        CumulantTable { model, memo: RwLock::default(), paranoid: false }
    }

    /// Every full cumulant is also recomputed by direct Möbius inversion and
    /// the two must agree.
    pub fn paranoid(model: Model) -> Self {
        CumulantTable { model, memo: RwLock::default(), paranoid: true }
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    /// `κ_χ(w)` with `χ` read off the letters of `w`.
    pub fn kappa_full(&self, w: &Word) -> Result<Scalar> {
        if w.is_empty() {
            return Err(Error::Precondition("cumulant of the empty word".into()));
        }
        if let Some(v) = self.memo.read().unwrap().get(w) {
            return Ok(v.clone());
        }
        self.model.check_word(w)?;
        let order = w.chi()?.chi_order();
        let block = |b: &[usize]| {
            let positions: Vec<usize> = b.iter().map(|&k| order[k]).collect();
            self.kappa_full(&w.restrict(&positions)?)
        };
        let rest = nc_block_sum(w.len(), &block, &|_, _| true, true)?;
        let value = &self.model.moment(w)? - &rest;
        if self.paranoid {
            let direct = self.kappa_mobius(w, &SetPartition::one(w.len()))?;
            if direct != value {
                return Err(Error::Inconsistent(format!("κ({w}): recursion {value}, Möbius {direct}")));
            }
        }
        self.memo.write().unwrap().insert(w.clone(), value.clone());
        Ok(value)
    }

    /// `κ_{χ,τ}(w) = ∏_{V∈τ} κ_{χ|V}(w|V)`.
    pub fn kappa(&self, w: &Word, tau: &SetPartition) -> Result<Scalar> {
        let chi = w.chi()?;
        if !is_bnc(&chi, tau)? {
            return Err(Error::NotBiNonCrossing { partition: tau.to_string(), chi: chi.to_string() });
        }
        let mut acc = Scalar::one();
        for block in tau.blocks() {
            let k = self.kappa_full(&w.restrict(block)?)?;
            if k.is_zero() {
                return Ok(Scalar::zero());
            }
            acc *= &k;
        }
        if self.paranoid {
            let direct = self.kappa_mobius(w, tau)?;
            if direct != acc {
                return Err(Error::Inconsistent(format!("κ_τ({w}), τ={tau}: blocks {acc}, Möbius {direct}")));
            }
        }
        Ok(acc)
    }

    /// `Σ_{λ≤τ} φ_λ(w)·μ_BNC(λ, τ)`, straight from the definition.
    pub fn kappa_mobius(&self, w: &Word, tau: &SetPartition) -> Result<Scalar> {
        let ctx = BncContext::shared(&w.chi()?)?;
        let t = ctx.index_of(tau)?;
        let col = ctx.mobius_col(t);
        let mut acc = Scalar::zero();
        for (l, lam) in ctx.elements().iter().enumerate() {
            if col[l] == 0 {
                continue;
            }
            let phi = phi_pi(self.model.as_ref(), w, lam)?;
            if !phi.is_zero() {
                acc += &(&phi * &Scalar::from_int(col[l]));
            }
        }
        Ok(acc)
    }

    /// `Σ_{τ∈BNC(χ)} κ_{χ,τ}(w)`; 1 on the empty word.
    pub fn moments_from_cumulants(&self, w: &Word) -> Result<Scalar> {
        if w.is_empty() {
            return Ok(Scalar::one());
        }
        self.model.check_word(w)?;
        let ctx = BncContext::shared(&w.chi()?)?;
        let mut acc = Scalar::zero();
        for tau in ctx.elements() {
            acc += &self.kappa(w, tau)?;
        }
        Ok(acc)
    }

    /// The cumulant of the products `P_1, …, P_m` given as letter segments,
    /// by summing `κ_{χ̂,τ}` over `τ ∈ BNC(χ̂)` whose join with the segment
    /// partition closes up to `1_χ̂`.
    pub fn kappa_of_products(&self, segments: &[Word]) -> Result<Scalar> {
        if segments.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut sizes = Vec::with_capacity(segments.len());
        for seg in segments {
            if seg.is_empty() {
                return Err(Error::Precondition("empty segment".into()));
            }
            let side = seg.letters()[0].side();
            if seg.letters().iter().any(|l| l.side() != side) {
                return Err(Error::Precondition(format!("segment '{seg}' mixes left and right letters")));
            }
            sizes.push(seg.len());
        }
        let word = segments.iter().fold(Word::empty(), |acc, s| acc.concat(s));
        let chi_hat = word.chi()?;
        let zero_hat = SetPartition::intervals(&sizes)?;
        let one = SetPartition::one(word.len());
        let ctx = BncContext::shared(&chi_hat)?;
        let mut acc = Scalar::zero();
        for tau in ctx.elements() {
            if bnc_closure(&chi_hat, &tau.join(&zero_hat)?)? == one {
                acc += &self.kappa(&word, tau)?;
            }
        }
        Ok(acc)
    }
}
