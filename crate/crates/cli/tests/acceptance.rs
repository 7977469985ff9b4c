//! Acceptance gate: one PASS/FAIL line per criterion, each against its
//! runtime budget. Values are compared exactly.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use bifree_core::cumulants::CumulantTable;
use bifree_core::distributions::{Derived, Letter, Model, Word};
use bifree_core::harness::run_suite;
use bifree_core::partitions::{bnc_closure, catalan, kreweras_bnc};
use bifree_core::{BncContext, ChiMap, Scalar, SetPartition, Side};
use common::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn signed_catalan(k: usize) -> i64 {
    let c = catalan(k - 1) as i64;
    if k % 2 == 1 {
        c
    } else {
        -c
    }
}

fn catalan_counts() -> Outcome {
    let mut lattices = 0;
    for n in 1..=8 {
        for chi in ChiMap::all(n) {
            let ctx = BncContext::new(&chi).map_err(|e| e.to_string())?;
            ensure(ctx.elements().len() as u64 == catalan(n), || format!("|BNC({chi})| = {}", ctx.elements().len()))?;
            lattices += 1;
        }
    }
    Ok(format!("{lattices} chi maps, n <= 8"))
}

fn mobius_values() -> Outcome {
    for n in 1..=8 {
        for chi in ChiMap::all(n) {
            let ctx = BncContext::new(&chi).map_err(|e| e.to_string())?;
            let top = ctx.index_of(&ctx.one()).unwrap();
            let mu = ctx.mobius_col(top)[ctx.index_of(&ctx.zero()).unwrap()];
            ensure(mu == signed_catalan(n), || format!("mu(0,1) = {mu} for chi={chi}"))?;
        }
    }
    let mut intervals = 0;
    for n in 1..=5 {
        for chi in ChiMap::all(n) {
            let ctx = BncContext::new(&chi).unwrap();
            for t in ctx.elements() {
                for l in ctx.elements() {
                    let rec = ctx.mobius(t, l).unwrap();
                    let prod = ctx.mobius_product_formula(t, l).unwrap();
                    ensure(rec == prod, || format!("chi={chi} [{t}, {l}]: {rec} vs {prod}"))?;
                    intervals += 1;
                }
            }
        }
    }
    Ok(format!("mu(0,1) for n <= 8; {intervals} pairs for n <= 5"))
}

fn cancellation() -> Outcome {
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
                    let inner = els.iter().zip(&d).filter(|(l, _)| l.leq(&k)).fold(Scalar::zero(), |a, (_, x)| &a + x);
                    total += &(&Scalar::from_int(mu) * &inner);
                }
                let top = ctx.index_of(&ctx.one()).unwrap();
                ensure(total == d[top], || format!("chi={chi} seed={seed}: {total} vs {}", d[top]))?;
            }
        }
    }
    Ok("n <= 5, seeds 0..3".into())
}

/// Reads the stars of `w` in χ-order and returns the value predicted for a
/// Haar unitary: nonzero only on even alternating words.
fn haar_prediction(w: &Word) -> Scalar {
    let n = w.len();
    if n == 0 || n % 2 == 1 {
        return Scalar::zero();
    }
    let order = w.chi().unwrap().chi_order();
    let stars: Vec<bool> = order.iter().map(|&i| w.letters()[i - 1].starred).collect();
    if stars.windows(2).any(|p| p[0] == p[1]) {
        return Scalar::zero();
    }
    Scalar::from_int(signed_catalan(n / 2))
}

fn bi_haar_spectrum() -> Outcome {
    let table = CumulantTable::new(shift(0));
    let mut count = 0;
    for n in 1..=8 {
        for w in Word::all_of_length(&Letter::alphabet(0), n) {
            let got = table.kappa_full(&w).map_err(|e| e.to_string())?;
            let want = haar_prediction(&w);
            ensure(got == want, || format!("{w}: {got} vs {want}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} words of length <= 8"))
}

fn random_segments(rng: &mut ChaCha8Rng, pairs: &[u32], total: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut left = total;
    while left > 0 {
        let len = rng.gen_range(1..=left.min(3));
        let side = if rng.gen_bool(0.5) { Side::Left } else { Side::Right };
        let pool: Vec<Letter> =
            pairs.iter().flat_map(|&p| Letter::alphabet(p)).filter(|l| l.side() == side).collect();
        out.push(Word::new((0..len).map(|_| *pool.choose(rng).unwrap()).collect()));
        left -= len;
    }
    out
}

fn products_formula() -> Outcome {
    let mut corpus: Vec<(&str, Model, Vec<u32>)> =
        single_pair_corpus().into_iter().map(|(name, m)| (name, m, vec![0])).collect();
    corpus.push(("bi-Haar * matrix units", joint(vec![shift(0), matrix_units(1)]), vec![0, 1]));
    corpus.push(("bi-Haar * bi-Haar", joint(vec![shift(0), shift(1)]), vec![0, 1]));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut count = 0;
    for (name, model, pairs) in corpus {
        let table = CumulantTable::new(model.clone());
        for total in 1..=8 {
            for _ in 0..48 {
                let segs = random_segments(&mut rng, &pairs, total);
                let got = table.kappa_of_products(&segs).map_err(|e| e.to_string())?;
                let want = kappa_of_products_by_definition(model.as_ref(), &segs);
                ensure(got == want, || format!("{name} {segs:?}: {got} vs {want}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} groupings"))
}

fn both_routes(model: &Model, segs: &[&str], want: Scalar) -> Result<(), String> {
    let segs: Vec<Word> = segs.iter().map(|s| w(s)).collect();
    let fast = CumulantTable::new(model.clone()).kappa_of_products(&segs).map_err(|e| e.to_string())?;
    let slow = kappa_of_products_by_definition(model.as_ref(), &segs);
    ensure(fast == want && slow == want, || format!("{segs:?}: {fast} / {slow}, expected {want}"))
}

fn exact_values() -> Outcome {
    // pair 0: bi-Haar (u_l, u_r); pair 2: Z = e11, W = e21
    let base = joint(vec![shift(0), matrix_units(2)]);
    both_routes(&base, &["X2* X*", "X X2", "Y2* Y*", "Y Y2"], Scalar::ratio(1, 4))?;
    // X = u_l Z, Y = W u_r as pair 3
    let built: Model = Arc::new(Derived::pair(base, 3, x(0).mul(&x(2)), y(2).mul(&y(0))).unwrap());
    both_routes(&built, &["X3* X3", "Y3 Y3*"], Scalar::ratio(-1, 4))?;
    // v is pair 0, u is pair 1
    let two = joint(vec![shift(0), shift(1)]);
    both_routes(&two, &["X", "Y*"], Scalar::one())?;
    both_routes(&two, &["X1 X", "Y* Y1*"], Scalar::zero())?;
    let ids = ["quarter-counterexample", "neg-quarter-counterexample", "invariance-counterexample"];
    let r = run_suite(&ids.map(String::from), 6, 0).map_err(|e| e.to_string())?;
    ensure(r.passed, || "suite counterexample checks failed".into())?;
    Ok("1/4, -1/4, 1, 0".into())
}

fn theorem_suite() -> Outcome {
    let ids = [
        "sum-of-birdiag",
        "prod-birdiag-any",
        "prod-birdiag-both",
        "powers",
        "selfadjoint-bifree",
        "bieven-product",
        "key-lemma",
        "invariance",
        "equivalence-i-iii",
        "rcyclic-equivalence",
    ];
    let r = run_suite(&ids.map(String::from), 6, 0).map_err(|e| e.to_string())?;
    let failed: Vec<&str> = r.checks.iter().filter(|c| !c.passed).map(|c| c.id.as_str()).collect();
    ensure(failed.is_empty(), || format!("failed: {failed:?}"))?;
    ensure(r.checks.iter().all(|c| c.degree == 6 && !c.scope.is_empty()), || "missing degree bound".into())?;
    Ok(format!("{} checks at degree 6", r.checks.len()))
}

fn even_blocks() -> Outcome {
    let mut count = 0;
    for n in 1..=4 {
        for base in ChiMap::all(n) {
            let chi_hat = base.repeat_each(&vec![2; n]).unwrap();
            let zero_hat = SetPartition::intervals(&vec![2; n]).unwrap();
            let ctx = BncContext::new(&chi_hat).unwrap();
            let one = ctx.one();
            let s = chi_hat.s_chi();
            for tau in ctx.elements() {
                let only_top = ctx.elements().iter().all(|l| l == &one || !(tau.leq(l) && zero_hat.leq(l)));
                let closure_top = bnc_closure(&chi_hat, &tau.join(&zero_hat).unwrap()).unwrap() == one;
                ensure(only_top == closure_top, || format!("join of {tau} in BNC({chi_hat})"))?;
                let even = tau.blocks().iter().all(|b| b.len() % 2 == 0);
                let m = 2 * n;
                let consecutive = tau.same_block(s.apply(1), s.apply(m))
                    && (1..n).all(|i| tau.same_block(s.apply(2 * i), s.apply(2 * i + 1)));
                ensure((only_top && even) == consecutive, || format!("chi_hat={chi_hat} tau={tau}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} partitions, 2n <= 8"))
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_bifree"))
            .args(["verify", "--suite", "paper", "--json"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success(), || format!("exit {:?}", a.status.code()))?;
    ensure(a.stdout == b.stdout, || "reports differ".into())?;
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).map_err(|e| e.to_string())?;
    ensure(v["passed"] == true, || "suite did not pass".into())?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 Catalan lattice counts", catalan_counts, 10),
        ("2 Mobius values", mobius_values, 30),
        ("3 cancellation identity", cancellation, 30),
        ("4 bi-Haar cumulant spectrum", bi_haar_spectrum, 120),
        ("5 products formula oracle", products_formula, 120),
        ("6 exact counterexample values", exact_values, 10),
        ("7 theorem suite at degree 6", theorem_suite, 900),
        ("8 even-blocks equivalence", even_blocks, 60),
        ("9 deterministic verify report", determinism, 1800),
    ];
    let mut failures = Vec::new();
    for (name, f, budget) in criteria {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let line = match outcome {
            Ok(_) if took > Duration::from_secs(budget) => Err(format!("over budget of {budget}s")),
            other => other,
        };
        match line {
            Ok(detail) => println!("PASS {name}: {detail} ({:.1}s)", took.as_secs_f64()),
            Err(why) => {
                println!("FAIL {name}: {why} ({:.1}s)", took.as_secs_f64());
                failures.push(name);
            }
        }
    }
    if !failures.is_empty() {
        println!("failed criteria: {failures:?}");
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
