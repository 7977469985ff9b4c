#![allow(dead_code)]

use std::sync::Arc;

use bifree_core::bifree_product::bifree_product;
use bifree_core::distributions::{Derived, Letter, Matrix, MatrixState, Model, Moments, Poly, ShiftBiHaar, Word};
use bifree_core::{BncContext, Scalar};

pub fn w(s: &str) -> Word {
    s.parse().unwrap()
}

pub fn shift(p: u32) -> Model {
    Arc::new(ShiftBiHaar::new(p))
}

pub fn matrix_units(p: u32) -> Model {
    let z = Matrix::from_ints(&[&[1, 0], &[0, 0]]).unwrap();
    let y = Matrix::from_ints(&[&[0, 0], &[1, 0]]).unwrap();
    Arc::new(MatrixState::new(p, z, y).unwrap())
}

pub fn off_diagonal(p: u32, a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Model {
    let off = |x: Scalar, y: Scalar| Matrix::from_rows(vec![vec![Scalar::zero(), x], vec![y, Scalar::zero()]]).unwrap();
    Arc::new(MatrixState::new(p, off(a, b), off(c, d)).unwrap())
}

pub fn sample_off_diagonal(p: u32) -> Model {
    off_diagonal(p, Scalar::one(), Scalar::ratio(1, 2), Scalar::from_int(-1), Scalar::from_int(2))
}

/// A non-self-adjoint complex pair.
pub fn complex_pair(p: u32) -> Model {
    let i = Scalar::i();
    let z = Matrix::from_rows(vec![vec![Scalar::zero(), i.clone()], vec![Scalar::one(), Scalar::ratio(1, 2)]]).unwrap();
    let y = Matrix::from_rows(vec![vec![Scalar::one(), Scalar::zero()], vec![-i, Scalar::zero()]]).unwrap();
    Arc::new(MatrixState::new(p, z, y).unwrap())
}

pub fn joint(models: Vec<Model>) -> Model {
    Arc::new(bifree_product(models).unwrap())
}

pub fn x(p: u32) -> Poly {
    Poly::letter(Letter::x(p))
}

pub fn y(p: u32) -> Poly {
    Poly::letter(Letter::y(p))
}

/// `(u_l Z, W u_r)` as pair `out`, with `u` bi-Haar (pair 0) and `(Z, W)` the
/// matrix units (pair 1).
pub fn product_built(out: u32) -> Model {
    let base = joint(vec![shift(0), matrix_units(1)]);
    Arc::new(Derived::pair(base, out, x(0).mul(&x(1)), y(1).mul(&y(0))).unwrap())
}

/// Single-pair models, all on pair 0.
pub fn single_pair_corpus() -> Vec<(&'static str, Model)> {
    vec![
        ("bi-Haar", shift(0)),
        ("matrix units", matrix_units(0)),
        ("off-diagonal", sample_off_diagonal(0)),
        ("complex", complex_pair(0)),
        ("product-built", product_built(0)),
    ]
}

/// `κ_χ(P_1, …, P_m)` straight from the definition: Möbius inversion of the
/// moments of the products over BNC(χ).
pub fn kappa_of_products_by_definition(model: &dyn Moments, segments: &[Word]) -> Scalar {
    let sides: Vec<_> = segments.iter().map(|s| s.letters()[0].side()).collect();
    let chi = bifree_core::ChiMap::new(sides).unwrap();
    let ctx = BncContext::new(&chi).unwrap();
    let one = ctx.one();
    let mut acc = Scalar::zero();
    for pi in ctx.elements() {
        let mu = ctx.mobius(pi, &one).unwrap();
        if mu == 0 {
            continue;
        }
        let mut term = Scalar::from_int(mu);
        for block in pi.blocks() {
            let word = block.iter().fold(Word::empty(), |acc, &k| acc.concat(&segments[k - 1]));
            term = &term * &model.moment(&word).unwrap();
        }
        acc += &term;
    }
    acc
}
