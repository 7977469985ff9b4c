use bifree_core::partitions::{bnc_closure, catalan, connects_consecutive, is_bnc, kreweras_bnc};
use bifree_core::{BncContext, ChiMap, Scalar, SetPartition, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn signed_catalan(k: usize) -> i64 {
    let c = catalan(k - 1) as i64;
    if k % 2 == 1 {
        c
    } else {
        -c
    }
}

#[test]
fn restriction_commutes_with_reading() {
    for n in 1..=6 {
        for chi in ChiMap::all(n) {
            let order = chi.chi_order();
            for mask in 1u32..1 << n {
                let v: Vec<usize> = (1..=n).filter(|&i| mask >> (i - 1) & 1 == 1).collect();
                // read then restrict
                let direct: Vec<usize> = order.iter().copied().filter(|i| v.contains(i)).collect();
                // restrict then read, mapping positions of V back
                let sub = chi.restrict(&v).unwrap();
                let via: Vec<usize> = sub.chi_order().iter().map(|&k| v[k - 1]).collect();
                assert_eq!(direct, via, "chi={chi} V={v:?}");
            }
        }
    }
}

#[test]
fn bnc_has_catalan_many_elements() {
    for n in 1..=8 {
        for chi in ChiMap::all(n) {
            let ctx = BncContext::new(&chi).unwrap();
            assert_eq!(ctx.elements().len() as u64, catalan(n), "chi={chi}");
            assert!(ctx.elements().iter().all(|p| is_bnc(&chi, p).unwrap()));
        }
    }
}

#[test]
fn mobius_from_bottom_is_a_block_product() {
    for n in 1..=6 {
        for chi in ChiMap::all(n) {
            let ctx = BncContext::new(&chi).unwrap();
            let zero = ctx.zero();
            for tau in ctx.elements() {
                let want: i64 = tau.blocks().iter().map(|b| signed_catalan(b.len())).product();
                assert_eq!(ctx.mobius(&zero, tau).unwrap(), want, "chi={chi} tau={tau}");
            }
        }
    }
}

#[test]
fn cancellation_lemma() {
    for seed in 0..3u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for n in 1..=5 {
            for chi in ChiMap::all(n) {
                let ctx = BncContext::new(&chi).unwrap();
                let els = ctx.elements();
                let d: Vec<Scalar> =
                    els.iter().map(|_| Scalar::ratio(rng.gen_range(-20..=20), rng.gen_range(1..=9))).collect();
                let zero = ctx.zero();
                let mut total = Scalar::zero();
                for tau in els {
                    let mu = ctx.mobius(&zero, tau).unwrap();
                    if mu == 0 {
                        continue;
                    }
                    let k = kreweras_bnc(&chi, tau).unwrap();
                    let mut inner = Scalar::zero();
                    for (lam, dl) in els.iter().zip(&d) {
                        if lam.leq(&k) {
                            inner += dl;
                        }
                    }
                    total += &(&Scalar::from_int(mu) * &inner);
                }
                let top = ctx.index_of(&ctx.one()).unwrap();
                assert_eq!(total, d[top], "chi={chi} seed={seed}");
            }
        }
    }
}

#[test]
fn kreweras_is_an_order_reversing_bijection() {
    for n in 1..=6 {
        for chi in ChiMap::all(n) {
            let ctx = BncContext::new(&chi).unwrap();
            let els = ctx.elements();
            let k: Vec<SetPartition> = els.iter().map(|p| kreweras_bnc(&chi, p).unwrap()).collect();
            let mut sorted = k.clone();
            sorted.sort();
            assert_eq!(sorted, els, "not a bijection for chi={chi}");
            assert_eq!(kreweras_bnc(&chi, &ctx.zero()).unwrap(), ctx.one());
            assert_eq!(kreweras_bnc(&chi, &ctx.one()).unwrap(), ctx.zero());
            for (a, ka) in els.iter().zip(&k) {
                for (b, kb) in els.iter().zip(&k) {
                    assert_eq!(a.leq(b), kb.leq(ka), "chi={chi} {a} {b}");
                }
            }
        }
    }
}

#[test]
fn even_blocks_equivalence() {
    for n in 1..=4 {
        for base in ChiMap::all(n) {
            let chi_hat = base.repeat_each(&vec![2; n]).unwrap();
            let zero_hat = SetPartition::intervals(&vec![2; n]).unwrap();
            let ctx = BncContext::new(&chi_hat).unwrap();
            let one = ctx.one();
            let s = chi_hat.s_chi();
            for tau in ctx.elements() {
                // least upper bound in BNC(χ̂) is 1 iff no proper element lies above both
                let only_top = ctx.elements().iter().all(|l| l == &one || !(tau.leq(l) && zero_hat.leq(l)));
                assert_eq!(only_top, bnc_closure(&chi_hat, &tau.join(&zero_hat).unwrap()).unwrap() == one);
                let even = tau.blocks().iter().all(|b| b.len() % 2 == 0);
                let lhs = only_top && even;
                let len = 2 * n;
                let rhs = tau.same_block(s.apply(1), s.apply(len))
                    && (1..n).all(|i| tau.same_block(s.apply(2 * i), s.apply(2 * i + 1)));
                assert_eq!(lhs, rhs, "chi_hat={chi_hat} tau={tau}");
                assert_eq!(connects_consecutive(&chi_hat, tau).unwrap(), rhs);
            }
        }
    }
}

#[test]
fn constant_chi_recovers_noncrossing() {
    for n in 1..=7 {
        for side in [Side::Left, Side::Right] {
            let chi = ChiMap::constant(side, n).unwrap();
            let ctx = BncContext::new(&chi).unwrap();
            assert!(ctx.elements().iter().all(SetPartition::is_noncrossing));
        }
    }
}
