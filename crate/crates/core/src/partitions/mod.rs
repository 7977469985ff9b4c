//! Set partitions, the non-crossing lattice NC(n) and its bi-non-crossing
//! images BNC(χ).

mod bnc;
mod set_partition;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

pub use bnc::{BncContext, DEFAULT_LIMIT};
pub use set_partition::SetPartition;

use crate::chi_order::ChiMap;
use crate::error::{Error, Result};

/// Catalan numbers `C_0, C_1, …` built from the convolution recurrence.
#[derive(Clone, Debug)]
pub struct Catalan {
    values: Vec<u64>,
}

impl Catalan {
    /// `C_0..=C_n`. Panics past `C_35`, the last value that fits in `u64`.
    pub fn up_to(n: usize) -> Self {
        assert!(n <= 35, "C_{n} does not fit in u64");
        let mut values = vec![1u64];
        for m in 0..n {
            let next = (0..=m).map(|k| values[k] * values[m - k]).sum();
            values.push(next);
        }
        Catalan { values }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn get(&self, n: usize) -> u64 {
        self.values[n]
    }
}

pub fn catalan(n: usize) -> u64 {
    Catalan::up_to(n).get(n)
}

/// `(−1)^{k−1}·C_{k−1}`, the Möbius weight of a `k`-element block.
pub(crate) fn block_weight(k: usize) -> i64 {
    let c = catalan(k - 1) as i64;
    if k % 2 == 1 {
        c
    } else {
        -c
    }
}

fn nc_cache() -> &'static RwLock<HashMap<usize, Arc<Vec<SetPartition>>>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<Vec<SetPartition>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// All of NC(n), sorted canonically. Shared across threads.
pub fn nc_partitions(n: usize) -> Arc<Vec<SetPartition>> {
    if let Some(v) = nc_cache().read().unwrap().get(&n) {
        return v.clone();
    }
    let mut out = Vec::new();
    let mut labels = vec![0; n];
    let mut pending = vec![(0, n)];
    nc_rec(&mut pending, &mut labels, 0, &mut out);
    out.sort_unstable();
    let out = Arc::new(out);
    nc_cache().write().unwrap().entry(n).or_insert(out).clone()
}

// Pops the next open interval, picks the block containing its first point,
// and queues the gaps that block leaves behind.
fn nc_rec(
    pending: &mut Vec<(usize, usize)>,
    labels: &mut [usize],
    next: usize,
    out: &mut Vec<SetPartition>,
) {
    let Some((a, b)) = pending.pop() else {
        out.push(SetPartition::from_labels(labels));
        return;
    };
    if a >= b {
        nc_rec(pending, labels, next, out);
    } else {
        labels[a] = next;
        extend_block(a, b, pending, labels, next, out);
    }
    pending.push((a, b));
}

fn extend_block(
    last: usize,
    b: usize,
    pending: &mut Vec<(usize, usize)>,
    labels: &mut [usize],
    label: usize,
    out: &mut Vec<SetPartition>,
) {
    // close the block here
    pending.push((last + 1, b));
    nc_rec(pending, labels, label + 1, out);
    pending.pop();
    // or add another element `nxt`, leaving the gap (last, nxt) open
    for nxt in last + 1..b {
        labels[nxt] = label;
        pending.push((last + 1, nxt));
        extend_block(nxt, b, pending, labels, label, out);
        pending.pop();
    }
}

/// K_NC(π): the blocks of the permutation `P_π^{-1} ∘ γ`, where `P_π` cycles
/// each block in increasing order and `γ = (1 2 … n)`.
pub fn kreweras_nc(p: &SetPartition) -> Result<SetPartition> {
    if !p.is_noncrossing() {
        return Err(Error::NotNonCrossing(p.to_string()));
    }
    let n = p.n();
    let mut p_inv = vec![0; n];
    for block in p.blocks() {
        for k in 0..block.len() {
            let next = block[(k + 1) % block.len()];
            p_inv[next - 1] = block[k] - 1;
        }
    }
    let mut labels = vec![usize::MAX; n];
    for start in 0..n {
        if labels[start] != usize::MAX {
            continue;
        }
        let mut x = start;
        while labels[x] == usize::MAX {
            labels[x] = start;
            x = p_inv[(x + 1) % n];
        }
    }
    Ok(SetPartition::from_labels(&labels))
}

fn check_size(chi: &ChiMap, p: &SetPartition) -> Result<()> {
    if chi.len() != p.n() {
        return Err(Error::SizeMismatch { expected: chi.len(), got: p.n() });
    }
    Ok(())
}

/// `s_χ^{-1}·p` is non-crossing.
pub fn is_bnc(chi: &ChiMap, p: &SetPartition) -> Result<bool> {
    check_size(chi, p)?;
    Ok(p.apply_perm(&chi.s_chi().inverse())?.is_noncrossing())
}

/// K_BNC(τ) = s_χ·K_NC(s_χ^{-1}·τ).
pub fn kreweras_bnc(chi: &ChiMap, p: &SetPartition) -> Result<SetPartition> {
    check_size(chi, p)?;
    let s = chi.s_chi();
    let pulled = p.apply_perm(&s.inverse())?;
    if !pulled.is_noncrossing() {
        return Err(Error::NotBiNonCrossing { partition: p.to_string(), chi: chi.to_string() });
    }
    kreweras_nc(&pulled)?.apply_perm(&s)
}

/// The least element of BNC(χ) above `p`.
pub fn bnc_closure(chi: &ChiMap, p: &SetPartition) -> Result<SetPartition> {
    check_size(chi, p)?;
    let s = chi.s_chi();
    p.apply_perm(&s.inverse())?.nc_closure().apply_perm(&s)
}

/// For `χ̂` of length `2n` built from pairs of equal sides: whether
/// `s(1) ∼ s(2n)` and `s(2i) ∼ s(2i+1)` for all `1 ≤ i < n`, with `s = s_χ̂`.
pub fn connects_consecutive(chi_hat: &ChiMap, t: &SetPartition) -> Result<bool> {
    check_size(chi_hat, t)?;
    let len = chi_hat.len();
    if !len.is_multiple_of(2) {
        return Err(Error::Precondition(format!("chi_hat '{chi_hat}' has odd length")));
    }
    let sides = chi_hat.sides();
    if sides.chunks(2).any(|c| c[0] != c[1]) {
        return Err(Error::Precondition(format!("chi_hat '{chi_hat}' is not built from pairs")));
    }
    let s = chi_hat.s_chi();
    let labels = t.labels();
    let same = |a: usize, b: usize| labels[s.apply(a) - 1] == labels[s.apply(b) - 1];
    Ok(same(1, len) && (1..len / 2).all(|i| same(2 * i, 2 * i + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> SetPartition {
        s.parse().unwrap()
    }

    fn chi(s: &str) -> ChiMap {
        s.parse().unwrap()
    }

    #[test]
    fn catalan_numbers() {
        assert_eq!(Catalan::up_to(8).values(), &[1, 1, 2, 5, 14, 42, 132, 429, 1430]);
        assert_eq!(catalan(12), 208012);
    }

    #[test]
    fn nc_counts_and_membership() {
        for n in 0..=9 {
            let all = nc_partitions(n);
            assert_eq!(all.len() as u64, catalan(n));
            assert!(all.iter().all(SetPartition::is_noncrossing));
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn bnc_worked_example() {
        let tau = p("{1,4|2,5|3,6}");
        assert!(is_bnc(&chi("lllrrl"), &tau).unwrap());
        assert!(!is_bnc(&chi("llllll"), &tau).unwrap());
        assert!(is_bnc(&chi("rlrlrl"), &SetPartition::one(6)).unwrap());
    }

    #[test]
    fn kreweras_small_cases() {
        assert_eq!(kreweras_nc(&p("{1,3|2}")).unwrap(), p("{1,2|3}"));
        assert_eq!(kreweras_nc(&p("{1,2|3}")).unwrap(), p("{1|2,3}"));
        for n in 1..=5 {
            assert_eq!(kreweras_nc(&SetPartition::zero(n)).unwrap(), SetPartition::one(n));
            assert_eq!(kreweras_nc(&SetPartition::one(n)).unwrap(), SetPartition::zero(n));
        }
        assert_eq!(kreweras_nc(&p("{1|2}")).unwrap(), p("{1,2}"));
        assert!(matches!(kreweras_nc(&p("{1,3|2,4}")), Err(Error::NotNonCrossing(_))));
    }

    #[test]
    fn kreweras_twice_is_a_rotation() {
        // K∘K is conjugation by γ: i ↦ i+1 mod n
        for n in 1..=7 {
            let rot = crate::chi_order::Perm::new((1..=n).map(|i| i % n + 1).collect()).unwrap();
            for q in nc_partitions(n).iter() {
                let kk = kreweras_nc(&kreweras_nc(q).unwrap()).unwrap();
                let rotated = q.apply_perm(&rot).unwrap();
                let back = q.apply_perm(&rot.inverse()).unwrap();
                assert!(kk == rotated || kk == back, "{q} -> {kk}");
            }
        }
    }

    #[test]
    fn kreweras_bnc_extremes() {
        for c in ChiMap::all(4) {
            let k0 = kreweras_bnc(&c, &SetPartition::zero(4)).unwrap();
            assert_eq!(k0, SetPartition::one(4));
            assert_eq!(kreweras_bnc(&c, &SetPartition::one(4)).unwrap(), SetPartition::zero(4));
        }
        assert!(kreweras_bnc(&chi("llll"), &p("{1,3|2,4}")).is_err());
    }

    #[test]
    fn closure_examples() {
        let tau = p("{1,4|2,5|3,6}");
        assert_eq!(bnc_closure(&chi("lllrrl"), &tau).unwrap(), tau);
        assert_eq!(bnc_closure(&chi("llll"), &p("{1,3|2,4}")).unwrap(), SetPartition::one(4));
        assert_eq!(bnc_closure(&chi("lrlr"), &SetPartition::one(4)).unwrap(), SetPartition::one(4));
    }

    #[test]
    fn connects_consecutive_examples() {
        let c = chi("llll");
        assert!(connects_consecutive(&c, &SetPartition::one(4)).unwrap());
        assert!(connects_consecutive(&c, &p("{1,4|2,3}")).unwrap());
        assert!(!connects_consecutive(&c, &p("{1,2|3,4}")).unwrap());
        assert!(connects_consecutive(&chi("lr"), &SetPartition::zero(2)).is_err());
        assert!(connects_consecutive(&chi("lll"), &SetPartition::zero(3)).is_err());
    }
}
