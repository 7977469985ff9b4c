//! The verification suite. Each check rebuilds one result on concrete
//! models, by exhaustive computation up to a degree bound, and reports the
//! exact values it saw.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bifree_product::{bifree_product, check_bifree_over};
use crate::chi_order::Side;
use crate::classifiers::{check_bi_haar, check_bi_r_diagonal, check_r_cyclic_2x2, check_star_bi_even, ClassReport, Witness};
use crate::cumulants::CumulantTable;
use crate::distributions::{Base, Derived, Letter, Matrix, MatrixState, Model, PairDistribution, Poly, ShiftBiHaar, Word};
use crate::error::{Error, Result};
use crate::partitions::catalan;
use crate::scalar::Scalar;

pub const CHECK_IDS: [&str; 14] = [
    "sum-of-birdiag",
    "prod-birdiag-any",
    "quarter-counterexample",
    "prod-birdiag-both",
    "powers",
    "selfadjoint-bifree",
    "neg-quarter-counterexample",
    "bieven-product",
    "key-lemma",
    "invariance",
    "invariance-counterexample",
    "equivalence-i-iii",
    "rcyclic-equivalence",
    "bihaar-cumulants",
];

/// Words compared through the grouped-products formula are kept to this
/// expanded length; longer ones use the derived-pair route only.
const PRODUCT_ROUTE_LIMIT: usize = 8;

/// Witnesses kept per failed requirement.
const KEEP: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub value: Scalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub model: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<NamedValue>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
}

impl CaseReport {
    fn new(model: impl Into<String>) -> Self {
        CaseReport { model: model.into(), passed: true, values: Vec::new(), witnesses: Vec::new() }
    }

    fn value(&mut self, name: impl Into<String>, value: Scalar) {
        self.values.push(NamedValue { name: name.into(), value });
    }

    /// Requires `got == want`, recording the value either way.
    fn expect(&mut self, name: &str, got: Scalar, want: &Scalar) {
        self.passed &= &got == want;
        self.value(name, got);
    }

    /// Requires a classifier verdict; keeps a few witnesses labelled `what`.
    fn verdict(&mut self, what: &str, r: &ClassReport, want: bool) {
        self.passed &= r.verdict == want;
        self.witnesses(what, &r.witnesses);
    }

    fn witnesses(&mut self, what: &str, ws: &[Witness]) {
        for w in ws.iter().take(KEEP) {
            let mut w = w.clone();
            w.note = Some(match w.note {
                Some(n) => format!("{what}: {n}"),
                None => what.to_string(),
            });
            self.witnesses.push(w);
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub claim: String,
    pub passed: bool,
    pub degree: usize,
    pub scope: String,
    pub cases: Vec<CaseReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub max_degree: usize,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
    /// Wall time per check, in the order of `checks`. Not serialized.
    #[serde(skip)]
    pub timings: Vec<Duration>,
}

/// Degree used for single-pair cumulant spectra: two above the product degree.
pub fn spectrum_degree(max_degree: usize) -> usize {
    max_degree + 2
}

/// Runs the selected checks, or all of them when `selection` is empty.
/// Checks run in parallel; the report keeps the order of the selection.
pub fn run_suite(selection: &[String], max_degree: usize, seed: u64) -> Result<SuiteReport> {
    let mut ids: Vec<usize> = Vec::new();
    if selection.is_empty() {
        ids.extend(0..CHECK_IDS.len());
    }
    for s in selection {
        let k = CHECK_IDS.iter().position(|id| id == s).ok_or_else(|| Error::UnknownCheck(s.clone()))?;
        if !ids.contains(&k) {
            ids.push(k);
        }
    }
    let done: Vec<(CheckReport, Duration)> = ids
        .par_iter()
        .map(|&k| {
            let start = Instant::now();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let report = run_check(CHECK_IDS[k], max_degree, &mut rng)?;
            Ok((report, start.elapsed()))
        })
        .collect::<Result<_>>()?;
    let (checks, timings): (Vec<_>, Vec<_>) = done.into_iter().unzip();
    Ok(SuiteReport {
        suite: "paper".into(),
        seed,
        max_degree,
        passed: checks.iter().all(|c| c.passed),
        checks,
        timings,
    })
}

fn run_check(id: &str, d: usize, rng: &mut ChaCha8Rng) -> Result<CheckReport> {
    match id {
        "sum-of-birdiag" => sum_of_birdiag(d),
        "prod-birdiag-any" => prod_birdiag_any(d, rng),
        "quarter-counterexample" => quarter_counterexample(),
        "prod-birdiag-both" => prod_birdiag_both(d),
        "powers" => powers(d),
        "selfadjoint-bifree" => selfadjoint_bifree(d, rng),
        "neg-quarter-counterexample" => neg_quarter_counterexample(),
        "bieven-product" => bieven_product(d, rng),
        "key-lemma" => key_lemma(d, rng),
        "invariance" => invariance(d),
        "invariance-counterexample" => invariance_counterexample(),
        "equivalence-i-iii" => equivalence(d, rng),
        "rcyclic-equivalence" => rcyclic_equivalence(d, rng),
        "bihaar-cumulants" => bihaar_cumulants(spectrum_degree(d)),
        other => Err(Error::UnknownCheck(other.to_string())),
    }
}

fn bounded(id: &str, claim: &str, degree: usize, cases: Vec<CaseReport>) -> CheckReport {
    CheckReport {
        id: id.into(),
        claim: claim.into(),
        passed: !cases.is_empty() && cases.iter().all(|c| c.passed),
        degree,
        scope: format!("verified on all words of length <= {degree}; the statement covers every order"),
        cases,
    }
}

fn exact(id: &str, claim: &str, degree: usize, cases: Vec<CaseReport>) -> CheckReport {
    CheckReport {
        id: id.into(),
        claim: claim.into(),
        passed: !cases.is_empty() && cases.iter().all(|c| c.passed),
        degree,
        scope: "exact values".into(),
        cases,
    }
}

// pair ids used by the builders
const U: u32 = 0;
const V: u32 = 1;
const M: u32 = 2;
const N: u32 = 3;
const B: u32 = 4;
const D: u32 = 5;
const F1: u32 = 6;
const F2: u32 = 7;

fn x(p: u32) -> Poly {
    Poly::letter(Letter::x(p))
}

fn y(p: u32) -> Poly {
    Poly::letter(Letter::y(p))
}

fn shift(p: u32) -> Model {
    Arc::new(ShiftBiHaar::new(p))
}

fn e11_e21() -> (Matrix, Matrix) {
    let z = Matrix::from_ints(&[&[1, 0], &[0, 0]]).expect("2x2");
    let w = Matrix::from_ints(&[&[0, 0], &[1, 0]]).expect("2x2");
    (z, w)
}

fn matrix_pair(p: u32) -> Result<Model> {
    let (z, w) = e11_e21();
    Ok(Arc::new(MatrixState::new(p, z, w)?))
}

fn draw_entry(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::ratio(rng.gen_range(-2..=2), rng.gen_range(1..=2))
}

/// `Z = [[0, a], [b, 0]]`, `W = [[0, c], [d, 0]]` with neither matrix zero.
fn off_diagonal(p: u32, rng: &mut ChaCha8Rng) -> Result<(Model, String)> {
    loop {
        let e: Vec<Scalar> = (0..4).map(|_| draw_entry(rng)).collect();
        if (e[0].is_zero() && e[1].is_zero()) || (e[2].is_zero() && e[3].is_zero()) {
            continue;
        }
        let off = |a: &Scalar, b: &Scalar| Matrix::from_rows(vec![vec![Scalar::zero(), a.clone()], vec![b.clone(), Scalar::zero()]]);
        let name = format!("Z=[[0,{}],[{},0]], W=[[0,{}],[{},0]]", e[0], e[1], e[2], e[3]);
        let model: Model = Arc::new(MatrixState::new(p, off(&e[0], &e[1])?, off(&e[2], &e[3])?)?);
        return Ok((model, name));
    }
}

fn joint(models: Vec<Model>) -> Result<Model> {
    Ok(Arc::new(bifree_product(models)?))
}

fn derived(base: Model, pair: u32, x: Poly, y: Poly) -> Result<Model> {
    Ok(Arc::new(Derived::pair(base, pair, x, y)?))
}

/// A pair together with a short description of how it was built.
#[derive(Clone)]
struct Subject {
    name: String,
    model: Model,
    pair: u32,
}

impl Subject {
    fn bi_haar(p: u32) -> Self {
        Subject { name: format!("bi-Haar (u{p}_l, u{p}_r)"), model: shift(p), pair: p }
    }

    /// `(u_l Z, W u_r)` for a bi-Haar pair `u` bi-free from `(Z, W)`.
    fn product_built(u: u32, inner: Model, ip: u32, inner_name: &str, out: u32) -> Result<Self> {
        let base = joint(vec![shift(u), inner])?;
        Ok(Subject {
            name: format!("(u_l Z, W u_r) over {inner_name}"),
            model: derived(base, out, x(u).mul(&x(ip)), y(ip).mul(&y(u)))?,
            pair: out,
        })
    }

    /// The product-built pair over the 2x2 matrix units `(e11, e21)`.
    fn standard(u: u32, out: u32) -> Result<Self> {
        Subject::product_built(u, matrix_pair(M)?, M, "(Z, W) = (e11, e21)", out)
    }

    fn matrix_units(p: u32) -> Result<Self> {
        Ok(Subject { name: "(Z, W) = (e11, e21)".into(), model: matrix_pair(p)?, pair: p })
    }

    fn off_diagonal(p: u32, rng: &mut ChaCha8Rng) -> Result<Self> {
        let (model, name) = off_diagonal(p, rng)?;
        Ok(Subject { name, model, pair: p })
    }

    fn dist(&self) -> Result<PairDistribution> {
        PairDistribution::new(self.model.clone(), self.pair)
    }

    fn birdiag(&self, d: usize) -> Result<ClassReport> {
        check_bi_r_diagonal(&self.dist()?, d)
    }
}

fn birdiag(model: &Model, pair: u32, d: usize) -> Result<ClassReport> {
    check_bi_r_diagonal(&PairDistribution::new(model.clone(), pair)?, d)
}

fn kappa(model: &Model, word: &str) -> Result<Scalar> {
    CumulantTable::new(model.clone()).kappa_full(&word.parse()?)
}

fn segments(words: &[&str]) -> Result<Vec<Word>> {
    words.iter().map(|s| s.parse()).collect()
}

fn sum_of_birdiag(d: usize) -> Result<CheckReport> {
    let subjects = [Subject::bi_haar(V), Subject::standard(V, B)?];
    let mut cases = Vec::new();
    for b in subjects {
        let a = Subject::bi_haar(U);
        let mut case = CaseReport::new(format!("(X,Y) = {}, (Z,W) = {}", a.name, b.name));
        case.verdict("(X,Y) bi-R-diagonal", &a.birdiag(d)?, true);
        case.verdict("(Z,W) bi-R-diagonal", &b.birdiag(d)?, true);
        let base = joint(vec![a.model, b.model])?;
        let sum = derived(base, D, x(U).add(&x(b.pair)), y(U).add(&y(b.pair)))?;
        case.verdict("(X+Z, Y+W)", &birdiag(&sum, D, d)?, true);
        cases.push(case);
    }
    Ok(bounded("sum-of-birdiag", "(X+Z, Y+W) is bi-R-diagonal", d, cases))
}

fn prod_birdiag_any(d: usize, rng: &mut ChaCha8Rng) -> Result<CheckReport> {
    let pairs = [
        (Subject::bi_haar(U), Subject::matrix_units(M)?),
        (Subject::bi_haar(U), Subject::off_diagonal(M, rng)?),
        (Subject::standard(V, B)?, Subject::off_diagonal(N, rng)?),
    ];
    let mut cases = Vec::new();
    for (a, b) in pairs {
        let mut case = CaseReport::new(format!("(X,Y) = {}, (Z,W) = {}", a.name, b.name));
        case.verdict("(X,Y) bi-R-diagonal", &a.birdiag(d)?, true);
        let base = joint(vec![a.model, b.model])?;
        let prod = derived(base, D, x(a.pair).mul(&x(b.pair)), y(b.pair).mul(&y(a.pair)))?;
        case.verdict("(XZ, WY)", &birdiag(&prod, D, d)?, true);
        cases.push(case);
    }
    Ok(bounded("prod-birdiag-any", "(XZ, WY) is bi-R-diagonal when (X,Y) is", d, cases))
}

fn quarter_counterexample() -> Result<CheckReport> {
    let want = Scalar::ratio(1, 4);
    let base = joint(vec![shift(U), matrix_pair(M)?])?;
    let mut case = CaseReport::new("(u_l Z, u_r W) with (Z, W) = (e11, e21)");
    let table = CumulantTable::new(base.clone());
    let grouped = table.kappa_of_products(&segments(&["X2* X*", "X X2", "Y2* Y*", "Y Y2"])?)?;
    case.expect("kappa(Z* ul*, ul Z, W* ur*, ur W) by grouped products", grouped, &want);
    let pair = derived(base, D, x(U).mul(&x(M)), y(U).mul(&y(M)))?;
    case.expect("kappa(X5* X5 Y5* Y5) of the derived pair", kappa(&pair, "X5* X5 Y5* Y5")?, &want);
    // tr(Z*Z W*W) − tr(Z*Z) tr(W*W) straight from the matrices
    let (z, w) = e11_e21();
    let (zz, ww) = (z.adjoint().mul(&z), w.adjoint().mul(&w));
    let half = Scalar::ratio(1, 2);
    let direct = &(&zz.mul(&ww).trace() * &half) - &(&(&zz.trace() * &half) * &(&ww.trace() * &half));
    case.expect("tr(Z*Z W*W) - tr(Z*Z) tr(W*W)", direct, &want);
    case.verdict("(u_l Z, u_r W) bi-R-diagonal", &birdiag(&pair, D, 4)?, false);
    Ok(exact("quarter-counterexample", "without reversing the right factors the product need not be bi-R-diagonal", 4, vec![case]))
}

fn prod_birdiag_both(d: usize) -> Result<CheckReport> {
    let subjects = [Subject::bi_haar(V), Subject::standard(V, B)?];
    let mut cases = Vec::new();
    for b in subjects {
        let a = Subject::bi_haar(U);
        let mut case = CaseReport::new(format!("(X,Y) = {}, (Z,W) = {}", a.name, b.name));
        case.verdict("(Z,W) bi-R-diagonal", &b.birdiag(d)?, true);
        let base = joint(vec![a.model, b.model])?;
        let prod = derived(base, D, x(U).mul(&x(b.pair)), y(U).mul(&y(b.pair)))?;
        case.verdict("(XZ, YW)", &birdiag(&prod, D, d)?, true);
        cases.push(case);
    }
    Ok(bounded("prod-birdiag-both", "(XZ, YW) is bi-R-diagonal when both pairs are", d, cases))
}

fn powers(d: usize) -> Result<CheckReport> {
    let mut cases = Vec::new();
    for s in [Subject::bi_haar(U), Subject::standard(U, B)?] {
        let hyp = s.birdiag(d)?;
        for p in [2, 3] {
            let mut case = CaseReport::new(format!("(X^{p}, Y^{p}) for (X,Y) = {}", s.name));
            case.verdict("(X,Y) bi-R-diagonal", &hyp, true);
            let pw = derived(s.model.clone(), D, x(s.pair).pow(p), y(s.pair).pow(p))?;
            case.verdict("(X^p, Y^p)", &birdiag(&pw, D, d)?, true);
            cases.push(case);
        }
    }
    Ok(bounded("powers", "(X^p, Y^p) is bi-R-diagonal for p = 2, 3", d, cases))
}

/// Pairs `(XX*, Y*Y)` as `F1` and `(X*X, YY*)` as `F2` over `s`.
fn square_family(s: &Subject, first: (bool, bool), second: (bool, bool)) -> Result<Derived> {
    let (xp, yp) = (x(s.pair), y(s.pair));
    let sq = |p: &Poly, star_first: bool| if star_first { p.adjoint().mul(p) } else { p.mul(&p.adjoint()) };
    Derived::new(s.model.clone())
        .with_pair(F1, sq(&xp, first.0), sq(&yp, first.1))?
        .with_pair(F2, sq(&xp, second.0), sq(&yp, second.1))
}

fn selfadjoint_bifree(d: usize, rng: &mut ChaCha8Rng) -> Result<CheckReport> {
    let (off, off_name) = off_diagonal(M, rng)?;
    let subjects = [Subject::standard(U, D)?, Subject::product_built(U, off, M, &off_name, D)?];
    let letters = [Letter::x(F1), Letter::y(F1), Letter::x(F2), Letter::y(F2)];
    let mut cases = Vec::new();
    for s in subjects {
        let mut case = CaseReport::new(format!("(X,Y) = {}", s.name));
        case.verdict("(X,Y) bi-R-diagonal", &s.birdiag(d)?, true);
        let fam = square_family(&s, (false, true), (true, false))?;
        // each letter equals its adjoint, so words in the unstarred letters cover everything
        for l in &letters {
            case.passed &= fam.is_self_adjoint(l)?;
        }
        let fam: Model = Arc::new(fam);
        let report = check_bifree_over(&fam, &letters, d)?;
        case.passed &= report.is_bifree();
        let found: Vec<Witness> = report
            .findings
            .iter()
            .map(|f| Witness { word: f.word.clone(), chi: Some(f.chi.clone()), kappa: Some(f.kappa.clone()), moment: None, expected: None, note: None })
            .collect();
        case.witnesses("mixed cumulant of (XX*, Y*Y) and (X*X, YY*)", &found);
        cases.push(case);
    }
    Ok(bounded("selfadjoint-bifree", "(XX*, Y*Y) and (X*X, YY*) are bi-free", d, cases))
}

fn neg_quarter_counterexample() -> Result<CheckReport> {
    let want = Scalar::ratio(-1, 4);
    let s = Subject::standard(U, D)?;
    let mut case = CaseReport::new(format!("(X*X, Y*Y) and (XX*, YY*) for (X,Y) = {}", s.name));
    let fam: Model = Arc::new(square_family(&s, (true, true), (false, false))?);
    case.expect("kappa(X6 Y7) of the derived family", kappa(&fam, "X6 Y7")?, &want);
    let base = joint(vec![shift(U), matrix_pair(M)?])?;
    let grouped = CumulantTable::new(base).kappa_of_products(&segments(&["X2* X* X X2", "Y2 Y Y* Y2*"])?)?;
    case.expect("kappa(Z* ul* ul Z, W ur ur* W*) by grouped products", grouped, &want);
    let (z, w) = e11_e21();
    let (zz, ww) = (z.adjoint().mul(&z), w.mul(&w.adjoint()));
    let half = Scalar::ratio(1, 2);
    let direct = &(&zz.mul(&ww).trace() * &half) - &(&(&zz.trace() * &half) * &(&ww.trace() * &half));
    case.expect("tr(Z*Z WW*) - tr(Z*Z) tr(WW*)", direct, &want);
    Ok(exact("neg-quarter-counterexample", "(X*X, Y*Y) and (XX*, YY*) need not be bi-free", 2, vec![case]))
}

fn bieven_product(d: usize, rng: &mut ChaCha8Rng) -> Result<CheckReport> {
    let mut cases = Vec::new();
    for _ in 0..2 {
        let a = Subject::off_diagonal(M, rng)?;
        let b = Subject::off_diagonal(N, rng)?;
        let mut case = CaseReport::new(format!("(X,Y): {}; (Z,W): {}", a.name, b.name));
        case.verdict("(X,Y) *-bi-even", &check_star_bi_even(&a.dist()?, d)?, true);
        case.verdict("(Z,W) *-bi-even", &check_star_bi_even(&b.dist()?, d)?, true);
        let base = joint(vec![a.model, b.model])?;
        let prod = derived(base, D, x(M).mul(&x(N)), y(N).mul(&y(M)))?;
        case.verdict("(XZ, WY)", &birdiag(&prod, D, d)?, true);
        cases.push(case);
    }
    Ok(bounded("bieven-product", "(XZ, WY) is bi-R-diagonal when both pairs are *-bi-even", d, cases))
}

/// Every word over `pair` of even length `<= d` whose stars alternate in
/// χ-order.
fn alternating_words(pair: u32, d: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for n in (2..=d).step_by(2) {
        for chi in crate::chi_order::ChiMap::all(n) {
            let order = chi.chi_order();
            for first_starred in [false, true] {
                let mut letters = vec![Letter::x(pair); n];
                for (k, &pos) in order.iter().enumerate() {
                    let base = match chi.sides()[pos - 1] {
                        Side::Left => Base::First,
                        Side::Right => Base::Second,
                    };
                    letters[pos - 1] = Letter::new(pair, base, first_starred ^ (k % 2 == 1));
                }
                out.push(Word::new(letters));
            }
        }
    }
    out
}

fn relabel(w: &Word, pair: u32) -> Word {
    Word::new(w.letters().iter().map(|l| Letter::new(pair, l.base, l.starred)).collect())
}

fn key_lemma(d: usize, rng: &mut ChaCha8Rng) -> Result<CheckReport> {
    let mut cases = Vec::new();
    for _ in 0..2 {
        let zw = Subject::off_diagonal(M, rng)?;
        let mut case = CaseReport::new(format!("(u_l Z, W u_r) with {}", zw.name));
        case.verdict("(Z,W) *-bi-even", &check_star_bi_even(&zw.dist()?, d)?, true);
        let base = joint(vec![shift(U), zw.model.clone()])?;
        let pair = derived(base.clone(), D, x(U).mul(&x(M)), y(M).mul(&y(U)))?;
        let (ta, tb, tj) = (CumulantTable::new(pair), CumulantTable::new(zw.model), CumulantTable::new(base));
        // the base-letter segment each derived letter stands for
        let segment = |l: &Letter| -> Result<Word> {
            let s = match (l.base, l.starred) {
                (Base::First, false) => "X X2",
                (Base::First, true) => "X2* X*",
                (Base::Second, false) => "Y2 Y",
                (Base::Second, true) => "Y* Y2*",
            };
            s.parse()
        };
        let words = alternating_words(D, d);
        let found: Vec<Option<Witness>> = words
            .par_iter()
            .map(|a| {
                let ka = ta.kappa_full(a)?;
                let kb = tb.kappa_full(&relabel(a, M))?;
                let mut ok = ka == kb;
                if 2 * a.len() <= PRODUCT_ROUTE_LIMIT {
                    let segs: Vec<Word> = a.letters().iter().map(segment).collect::<Result<_>>()?;
                    ok &= tj.kappa_of_products(&segs)? == kb;
                }
                Ok((!ok).then(|| Witness {
                    chi: a.chi().ok(),
                    word: a.clone(),
                    kappa: Some(ka),
                    moment: None,
                    expected: Some(kb),
                    note: None,
                }))
            })
            .collect::<Result<_>>()?;
        let found: Vec<Witness> = found.into_iter().flatten().collect();
        case.passed &= found.is_empty();
        case.witnesses("kappa(a) != kappa(b)", &found);
        case.value("admissible words compared", Scalar::from_int(words.len() as i64));
        cases.push(case);
    }
    Ok(bounded("key-lemma", "kappa(a_1..a_2m) = kappa(b_1..b_2m) on star-alternating words", d, cases))
}

/// Words of length `<= d` over `pa` on which `a` and `b` (over `pb`) differ.
fn moment_mismatches(a: &Model, pa: u32, b: &Model, pb: u32, d: usize) -> Result<Vec<Witness>> {
    let words: Vec<Word> = (1..=d).flat_map(|n| Word::all_of_length(&Letter::alphabet(pa), n)).collect();
    let found: Vec<Option<Witness>> = words
        .into_par_iter()
        .map(|w| {
            let got = a.moment(&w)?;
            let want = b.moment(&relabel(&w, pb))?;
            Ok((got != want).then(|| Witness {
                chi: w.chi().ok(),
                word: w,
                kappa: None,
                moment: Some(got),
                expected: Some(want),
                note: None,
            }))
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// `(u_l X, Y u_r)` with a fresh bi-Haar pair bi-free from `s`.
fn rotated(s: &Subject) -> Result<Model> {
    let base = joint(vec![shift(U), s.model.clone()])?;
    derived(base, F1, x(U).mul(&x(s.pair)), y(s.pair).mul(&y(U)))
}

fn invariance(d: usize) -> Result<CheckReport> {
    let mut cases = Vec::new();
    for s in [Subject::bi_haar(V), Subject::standard(V, B)?] {
        let mut case = CaseReport::new(format!("(X,Y) = {}", s.name));
        case.verdict("(X,Y) bi-R-diagonal", &s.birdiag(d)?, true);
        let bad = moment_mismatches(&rotated(&s)?, F1, &s.model, s.pair, d)?;
        case.passed &= bad.is_empty();
        case.witnesses("moment of (u_l X, Y u_r) differs", &bad);
        cases.push(case);
    }
    Ok(bounded("invariance", "(u_l X, Y u_r) has the joint *-distribution of (X, Y)", d, cases))
}

fn invariance_counterexample() -> Result<CheckReport> {
    let mut case = CaseReport::new("bi-Haar pairs u, v; the pair (u_l v_l, u_r v_r)");
    case.expect("kappa(v_l, v_r*)", kappa(&shift(V), "X1 Y1*")?, &Scalar::one());
    let base = joint(vec![shift(U), shift(V)])?;
    let pair = derived(base.clone(), D, x(U).mul(&x(V)), y(U).mul(&y(V)))?;
    case.expect("kappa(u_l v_l, v_r* u_r*) of the derived pair", kappa(&pair, "X5 Y5*")?, &Scalar::zero());
    let grouped = CumulantTable::new(base).kappa_of_products(&segments(&["X X1", "Y1* Y*"])?)?;
    case.expect("kappa(u_l v_l, v_r* u_r*) by grouped products", grouped, &Scalar::zero());
    Ok(exact("invariance-counterexample", "without reversing the right factors the distribution can change", 2, vec![case]))
}

fn equivalence_corpus(rng: &mut ChaCha8Rng) -> Result<Vec<Subject>> {
    Ok(vec![
        Subject::bi_haar(V),
        Subject::standard(V, B)?,
        Subject::matrix_units(M)?,
        Subject::off_diagonal(M, rng)?,
    ])
}

fn equivalence(d: usize, rng: &mut ChaCha8Rng) -> Result<CheckReport> {
    let mut cases = Vec::new();
    let mut seen = [false; 2];
    for s in equivalence_corpus(rng)? {
        let mut case = CaseReport::new(format!("(X,Y) = {}", s.name));
        let r = s.birdiag(d)?;
        let bad = moment_mismatches(&rotated(&s)?, F1, &s.model, s.pair, d)?;
        let invariant = bad.is_empty();
        seen[usize::from(r.verdict)] = true;
        case.passed = r.verdict == invariant;
        case.value("(i) bi-R-diagonal", Scalar::from_int(i64::from(r.verdict)));
        case.value("(ii)/(iii) distribution unchanged by (u_l X, Y u_r)", Scalar::from_int(i64::from(invariant)));
        case.witnesses("(i) fails", &r.witnesses);
        case.witnesses("(iii) fails", &bad);
        cases.push(case);
    }
    let mut report = bounded("equivalence-i-iii", "bi-R-diagonal iff invariant under (u_l X, Y u_r)", d, cases);
    // the corpus must exercise both directions
    report.passed &= seen[0] && seen[1];
    Ok(report)
}

fn rcyclic_equivalence(d: usize, rng: &mut ChaCha8Rng) -> Result<CheckReport> {
    let mut cases = Vec::new();
    let mut seen = [false; 2];
    for s in equivalence_corpus(rng)? {
        let mut case = CaseReport::new(format!("(X,Y) = {}", s.name));
        let r = s.birdiag(d)?;
        let c = check_r_cyclic_2x2(&s.dist()?, d)?;
        seen[usize::from(r.verdict)] = true;
        case.passed = r.verdict == c.verdict;
        case.value("bi-R-diagonal", Scalar::from_int(i64::from(r.verdict)));
        case.value("2x2 matrix pair R-cyclic", Scalar::from_int(i64::from(c.verdict)));
        case.witnesses("R-cyclic condition fails", &c.witnesses);
        cases.push(case);
    }
    let mut report = bounded("rcyclic-equivalence", "bi-R-diagonal iff the 2x2 matrix pair is R-cyclic", d, cases);
    report.passed &= seen[0] && seen[1];
    Ok(report)
}

/// `(−1)^{n−1} C_{n−1}` for words of length `2n` whose stars alternate in
/// χ-order, `0` otherwise.
fn bihaar_expected(w: &Word) -> Result<Scalar> {
    let order = w.chi()?.chi_order();
    let read: Vec<bool> = order.iter().map(|&i| w.letters()[i - 1].starred).collect();
    if w.len() % 2 == 1 || read.windows(2).any(|p| p[0] == p[1]) {
        return Ok(Scalar::zero());
    }
    let n = w.len() / 2;
    let c = catalan(n - 1) as i64;
    Ok(Scalar::from_int(if n % 2 == 1 { c } else { -c }))
}

fn bihaar_cumulants(d: usize) -> Result<CheckReport> {
    let s = Subject::bi_haar(U);
    let mut case = CaseReport::new(s.name.clone());
    let table = CumulantTable::new(s.model.clone());
    let words: Vec<Word> = (1..=d).flat_map(|n| Word::all_of_length(&Letter::alphabet(U), n)).collect();
    let found: Vec<Option<Witness>> = words
        .par_iter()
        .map(|w| {
            let got = table.kappa_full(w)?;
            let want = bihaar_expected(w)?;
            Ok((got != want).then(|| Witness {
                chi: w.chi().ok(),
                word: w.clone(),
                kappa: Some(got),
                moment: None,
                expected: Some(want),
                note: None,
            }))
        })
        .collect::<Result<_>>()?;
    let found: Vec<Witness> = found.into_iter().flatten().collect();
    case.passed &= found.is_empty();
    case.witnesses("cumulant differs from (-1)^(n-1) C_(n-1) or 0", &found);
    for n in (2..=d).step_by(2) {
        // χ = l^n with alternating stars
        let w = Word::new((0..n).map(|k| if k % 2 == 0 { Letter::x(U) } else { Letter::x(U).star() }).collect());
        case.value(format!("kappa of an alternating word of length {n}"), table.kappa_full(&w)?);
    }
    case.verdict("classified as bi-Haar", &check_bi_haar(&s.dist()?, d)?, true);
    Ok(bounded("bihaar-cumulants", "bi-Haar cumulants are (-1)^(n-1) C_(n-1) on alternating words and 0 otherwise", d, vec![case]))
}
