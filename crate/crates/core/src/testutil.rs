//! Seeded random generators shared by the unit tests.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::field::{Field, FqElem};
use crate::matq::{ElementaryOp, PolyMatrix};
use crate::polyring::UniPoly;

pub(crate) fn random_fq(field: &Field, rng: &mut ChaCha8Rng) -> FqElem {
    FqElem::from_index(field, rng.gen_range(0..field.order().unwrap()))
}

pub(crate) fn random_poly(field: &Field, rng: &mut ChaCha8Rng, max_deg: usize) -> UniPoly {
    let deg = rng.gen_range(0..=max_deg);
    let coeffs = (0..=deg).map(|_| random_fq(field, rng)).collect();
    UniPoly::from_coeffs(field, coeffs)
}

pub(crate) fn random_matrix(
    field: &Field,
    rng: &mut ChaCha8Rng,
    rows: usize,
    cols: usize,
    max_deg: usize,
) -> PolyMatrix {
    PolyMatrix::from_fn(field, rows, cols, |_, _| random_poly(field, rng, max_deg))
}

/// Product of random add-multiple row operations applied to the identity.
pub(crate) fn random_unimodular(field: &Field, rng: &mut ChaCha8Rng, n: usize) -> PolyMatrix {
    let mut m = PolyMatrix::identity(field, n);
    if n == 1 {
        return m;
    }
    for _ in 0..8 {
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
