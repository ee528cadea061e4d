//! Seeded random generators for the acceptance suite, built on the
//! public API only.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use linpoly::autogroup::TameFactor;
use linpoly::field::{Field, FqElem};
use linpoly::matq::{ElementaryOp, FqMatrix, PolyMatrix};
use linpoly::polyring::UniPoly;

pub fn random_fq(field: &Field, rng: &mut ChaCha8Rng) -> FqElem {
    FqElem::from_index(field, rng.gen_range(0..field.order().unwrap()))
}

pub fn random_poly(field: &Field, rng: &mut ChaCha8Rng, max_deg: usize) -> UniPoly {
    let deg = rng.gen_range(0..=max_deg);
    let coeffs = (0..=deg).map(|_| random_fq(field, rng)).collect();
    UniPoly::from_coeffs(field, coeffs)
}

pub fn random_matrix(
    field: &Field,
    rng: &mut ChaCha8Rng,
    rows: usize,
    cols: usize,
    max_deg: usize,
) -> PolyMatrix {
    PolyMatrix::from_fn(field, rows, cols, |_, _| random_poly(field, rng, max_deg))
}

/// Product of random add-multiple row operations applied to the identity.
pub fn random_unimodular(field: &Field, rng: &mut ChaCha8Rng, n: usize, ops: usize) -> PolyMatrix {
    let mut m = PolyMatrix::identity(field, n);
    if n == 1 {
        return m;
    }
    for _ in 0..ops {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let coef = random_poly(field, rng, 2);
        ElementaryOp::AddRow { dst: i, src: j, coef }.apply(&mut m);
    }
    m
}

pub fn random_invertible_constant(field: &Field, rng: &mut ChaCha8Rng, n: usize) -> FqMatrix {
    loop {
        let c = FqMatrix::from_fn(field, n, n, |_, _| random_fq(field, rng));
        if !c.det().unwrap().is_zero() {
            return c;
        }
    }
}

/// Random tame factors: elementary shifts of bounded degree mixed with
/// invertible constant matrices.
pub fn random_tame_factors(
    field: &Field,
    rng: &mut ChaCha8Rng,
    n: usize,
    count: usize,
    max_deg: usize,
) -> Vec<TameFactor> {
    let mut factors = Vec::with_capacity(count);
    for _ in 0..count {
        if n > 1 && rng.gen_bool(0.6) {
            let index = rng.gen_range(0..n);
            let mut row = vec![UniPoly::zero(field); n];
            for (j, slot) in row.iter_mut().enumerate() {
                if j != index && rng.gen_bool(0.7) {
                    *slot = random_poly(field, rng, max_deg);
                }
            }
            factors.push(TameFactor::Elementary {
                index,
                shift: linpoly::linmap::LinPoly::from_row(field, row),
            });
        } else {
            factors.push(TameFactor::Linear(random_invertible_constant(field, rng, n)));
        }
    }
    factors
}
