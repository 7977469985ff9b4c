use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use super::{block_weight, kreweras_nc, nc_partitions, SetPartition};
use crate::chi_order::{ChiMap, Perm};
use crate::error::{Error, Result};

/// Default enumeration guard: `C_12 = 208012` partitions.
pub const DEFAULT_LIMIT: usize = 12;

/// BNC(χ) with its order structure and a Möbius memo.
pub struct BncContext {
    chi: ChiMap,
    s: Perm,
    s_inv: Perm,
    elements: Vec<SetPartition>,
    masks: Vec<u128>,
    index: HashMap<SetPartition, usize>,
    // μ(τ, ·) rows, keyed by the index of τ
    rows: RwLock<HashMap<usize, Arc<Vec<i64>>>>,
}

impl BncContext {
    pub fn new(chi: &ChiMap) -> Result<Self> {
        Self::with_limit(chi, DEFAULT_LIMIT)
    }

    pub fn with_limit(chi: &ChiMap, limit: usize) -> Result<Self> {
        let n = chi.len();
        if n > limit || n > 16 {
            return Err(Error::LimitExceeded { n, limit: limit.min(16) });
        }
        let s = chi.s_chi();
        let s_inv = s.inverse();
        let mut elements: Vec<SetPartition> =
            nc_partitions(n).iter().map(|p| p.apply_perm(&s).expect("same size")).collect();
        elements.sort_unstable();
        let masks = elements.iter().map(SetPartition::pair_mask).collect();
        let index = elements.iter().cloned().enumerate().map(|(k, p)| (p, k)).collect();
        Ok(BncContext { chi: chi.clone(), s, s_inv, elements, masks, index, rows: RwLock::default() })
    }

    /// A process-wide shared context; cached for `n ≤ 10`.
    pub fn shared(chi: &ChiMap) -> Result<Arc<BncContext>> {
        static CACHE: OnceLock<RwLock<HashMap<ChiMap, Arc<BncContext>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(ctx) = cache.read().unwrap().get(chi) {
            return Ok(ctx.clone());
        }
        let ctx = Arc::new(BncContext::new(chi)?);
        if chi.len() <= 10 {
            cache.write().unwrap().entry(chi.clone()).or_insert_with(|| ctx.clone());
        }
        Ok(ctx)
    }

    pub fn chi(&self) -> &ChiMap {
        &self.chi
    }

    pub fn n(&self) -> usize {
        self.chi.len()
    }

    pub fn s_chi(&self) -> &Perm {
        &self.s
    }

    /// BNC(χ) in canonical order.
    pub fn elements(&self) -> &[SetPartition] {
        &self.elements
    }

    pub fn contains(&self, p: &SetPartition) -> bool {
        self.index.contains_key(p)
    }

    pub fn index_of(&self, p: &SetPartition) -> Result<usize> {
        self.index.get(p).copied().ok_or_else(|| Error::NotBiNonCrossing {
            partition: p.to_string(),
            chi: self.chi.to_string(),
        })
    }

    /// `elements[a] ≤ elements[b]` in refinement order.
    pub fn leq_idx(&self, a: usize, b: usize) -> bool {
        self.masks[a] & !self.masks[b] == 0
    }

    /// Pulls a partition back to NC(n) by `s_χ^{-1}`.
    pub fn pull_back(&self, p: &SetPartition) -> SetPartition {
        p.apply_perm(&self.s_inv).expect("size checked by caller")
    }

    /// μ_BNC(t, l) by the defining recursion.
    pub fn mobius(&self, t: &SetPartition, l: &SetPartition) -> Result<i64> {
        let (a, b) = (self.index_of(t)?, self.index_of(l)?);
        Ok(self.mobius_idx(a, b))
    }

    pub fn mobius_idx(&self, a: usize, b: usize) -> i64 {
        if !self.leq_idx(a, b) {
            return 0;
        }
        self.mobius_row(a)[b]
    }

    /// μ(elements[a], ·) over all of BNC(χ); zero outside the up-set of `a`.
    pub fn mobius_row(&self, a: usize) -> Arc<Vec<i64>> {
        if let Some(row) = self.rows.read().unwrap().get(&a) {
            return row.clone();
        }
        let mut up: Vec<usize> = (0..self.elements.len()).filter(|&r| self.leq_idx(a, r)).collect();
        // finer partitions first, so every ρ < λ is settled before λ
        up.sort_by_key(|&r| std::cmp::Reverse(self.elements[r].block_count()));
        let mut row = vec![0i64; self.elements.len()];
        for (k, &lam) in up.iter().enumerate() {
            if lam == a {
                row[lam] = 1;
                continue;
            }
            let mut acc = 0i64;
            for &rho in &up[..k] {
                if rho != lam && self.leq_idx(rho, lam) {
                    acc += row[rho];
                }
            }
            row[lam] = -acc;
        }
        let row = Arc::new(row);
        self.rows.write().unwrap().entry(a).or_insert(row).clone()
    }

    /// μ(·, elements[b]) by the dual recursion `Σ_{λ≤ρ≤b} μ(ρ, b) = δ_{λb}`;
    /// zero outside the down-set of `b`.
    pub fn mobius_col(&self, b: usize) -> Vec<i64> {
        let mut down: Vec<usize> = (0..self.elements.len()).filter(|&r| self.leq_idx(r, b)).collect();
        down.sort_by_key(|&r| self.elements[r].block_count());
        let mut col = vec![0i64; self.elements.len()];
        for (k, &lam) in down.iter().enumerate() {
            if lam == b {
                col[lam] = 1;
                continue;
            }
            let mut acc = 0i64;
            for &rho in &down[..k] {
                if rho != lam && self.leq_idx(lam, rho) {
                    acc += col[rho];
                }
            }
            col[lam] = -acc;
        }
        col
    }

    /// μ_BNC(t, l) from the block-product formula: pull back to NC(n); for
    /// each block `W` of `l`, take the Kreweras complement of `t|_W` and
    /// multiply `(−1)^{|V|−1}·C_{|V|−1}` over its blocks `V`.
    pub fn mobius_product_formula(&self, t: &SetPartition, l: &SetPartition) -> Result<i64> {
        self.index_of(t)?;
        self.index_of(l)?;
        if !t.leq(l) {
            return Ok(0);
        }
        let (pt, pl) = (self.pull_back(t), self.pull_back(l));
        let mut acc = 1i64;
        for w in pl.blocks() {
            let k = kreweras_nc(&pt.restrict(w))?;
            for v in k.blocks() {
                acc *= block_weight(v.len());
            }
        }
        Ok(acc)
    }

    pub fn zero(&self) -> SetPartition {
        SetPartition::zero(self.n())
    }

    pub fn one(&self) -> SetPartition {
        SetPartition::one(self.n())
    }
}
