//! Automorphism-level operations on linearized polynomial maps:
//! invertibility, inversion, tame factorizations, diagonalization,
//! coordinate recognition and completion, univariate factorization of a
//! single linearized polynomial, ideal normal forms and polynomial-ring
//! recognition.
//!
//! Everything here rides on the matrix encoding: a square map is an
//! automorphism exactly when its matrix has unit determinant, and the
//! elementary operations of a Smith normal form translate one-for-one
//! into tame factors.

use crate::error::{Error, Result};
use crate::field::{Field, FqElem};
use crate::linmap::{LinMap, LinPoly};
use crate::matq::{
    self, complete_unimodular_row, inverse_unimodular, smith_normal_form, ElementaryOp, FqMatrix,
    PolyMatrix,
};
use crate::polyring::UniPoly;

/// Generator of the tame subgroup: either an elementary map, which adds a
/// linearized polynomial in the other variables to one coordinate, or an
/// invertible constant linear map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TameFactor {
    Elementary {
        /// 0-based index of the shifted coordinate.
        index: usize,
        /// The added polynomial; its own row entry at `index` is zero.
        shift: LinPoly,
    },
    Linear(FqMatrix),
}

impl TameFactor {
    pub fn to_map(&self) -> LinMap {
        match self {
            TameFactor::Elementary { index, shift } => {
                debug_assert!(
                    shift.row()[*index].is_zero(),
                    "elementary shift must not involve its own coordinate"
                );
                let field = shift.field().clone();
                let n = shift.nvars();
                let mut m = PolyMatrix::identity(&field, n);
                for (j, p) in shift.row().iter().enumerate() {
                    if !p.is_zero() {
                        let v = m.get(*index, j).add(p);
                        m.set(*index, j, v);
                    }
                }
                LinMap::from_matrix(&m)
            }
            TameFactor::Linear(c) => LinMap::from_matrix(&PolyMatrix::from_constant(c)),
        }
    }

    fn is_identity(&self) -> bool {
        match self {
            TameFactor::Elementary { shift, .. } => shift.is_zero(),
            TameFactor::Linear(c) => c.is_identity(),
        }
    }
}

/// Composes factors in list order: `[h1, h2, h3]` yields h1 ∘ h2 ∘ h3.
pub fn compose_factors(field: &Field, nvars: usize, factors: &[TameFactor]) -> LinMap {
    let mut acc = LinMap::identity(field, nvars);
    for f in factors {
        acc = acc.compose(&f.to_map()).expect("factors share dimensions");
    }
    acc
}

/// True iff the map is invertible, i.e. its matrix determinant is a
/// nonzero constant.
pub fn is_automorphism(f: &LinMap) -> Result<bool> {
    let m = f.to_matrix();
    if !m.is_square() {
        return Err(Error::NotSquare);
    }
    Ok(m.det()?.is_unit())
}

/// Inverse map, through the matrix inverse.
pub fn invert_map(f: &LinMap) -> Result<LinMap> {
    let inv = inverse_unimodular(&f.to_matrix())?;
    Ok(LinMap::from_matrix(&inv))
}

fn op_to_factor(field: &Field, n: usize, op: &ElementaryOp) -> TameFactor {
    // an add-multiple with constant coefficient is itself a linear map;
    // classifying it as Linear lets constant runs collapse into one factor
    fn shear(field: &Field, n: usize, row: usize, col: usize, coef: &UniPoly) -> TameFactor {
        if coef.degree() == Some(0) {
            let mut c = FqMatrix::identity(field, n);
            c.set(row, col, coef.coeff(0));
            TameFactor::Linear(c)
        } else {
            let mut shift_row = vec![UniPoly::zero(field); n];
            shift_row[col] = coef.clone();
            TameFactor::Elementary {
                index: row,
                shift: LinPoly::from_row(field, shift_row),
            }
        }
    }
    match op {
        // as a left multiplication, row dst += coef * row src is
        // I + coef*E(dst,src): the map shifting coordinate dst by src
        ElementaryOp::AddRow { dst, src, coef } => shear(field, n, *dst, *src, coef),
        // as a right multiplication, col dst += coef * col src is
        // I + coef*E(src,dst): the map shifting coordinate src by dst
        ElementaryOp::AddCol { dst, src, coef } => shear(field, n, *src, *dst, coef),
        ElementaryOp::SwapRows(i, j) | ElementaryOp::SwapCols(i, j) => {
            let mut c = FqMatrix::zero(field, n, n);
            for k in 0..n {
                let dst = if k == *i {
                    *j
                } else if k == *j {
                    *i
                } else {
                    k
                };
                c.set(k, dst, FqElem::one(field));
            }
            TameFactor::Linear(c)
        }
        ElementaryOp::ScaleRow { row, by } | ElementaryOp::ScaleCol { col: row, by } => {
            let mut c = FqMatrix::identity(field, n);
            c.set(*row, *row, by.clone());
            TameFactor::Linear(c)
        }
    }
}

/// Merges adjacent factors when the product is again a single factor:
/// consecutive linear factors multiply, consecutive elementary factors
/// with the same target coordinate add their shifts.
fn merge_factors(factors: Vec<TameFactor>) -> Vec<TameFactor> {
    let mut out: Vec<TameFactor> = Vec::with_capacity(factors.len());
    for f in factors {
        if f.is_identity() {
            continue;
        }
        match (out.last_mut(), f) {
            (Some(TameFactor::Linear(a)), TameFactor::Linear(b)) => {
                *a = a.mul(&b);
                if out.last().is_some_and(TameFactor::is_identity) {
                    out.pop();
                }
            }
            (
                Some(TameFactor::Elementary { index: i, shift: s }),
                TameFactor::Elementary { index, shift },
            ) if *i == index => {
                *s = s.add(&shift);
                if out.last().is_some_and(TameFactor::is_identity) {
                    out.pop();
                }
            }
            (_, f) => out.push(f),
        }
    }
    out
}

/// Tame factorization of an automorphism: the elementary operations of
/// the Smith normal form of the matrix, inverted and read back as maps.
/// Composing the returned factors in order reproduces `f` exactly.
pub fn tame_decompose(f: &LinMap) -> Result<Vec<TameFactor>> {
    let m = f.to_matrix();
    if !m.is_square() {
        return Err(Error::NotSquare);
    }
    let n = m.cols();
    let field = m.field().clone();
    let snf = smith_normal_form(&m);
    if !snf.diag.is_identity() {
        return Err(Error::NotUnimodular);
    }
    // left * A * right = I with left = L_s...L_1 and right = R_1...R_l, so
    // A = inv(L_1)...inv(L_s) * inv(R_l)...inv(R_1)
    let mut factors = Vec::with_capacity(snf.ops_left.len() + snf.ops_right.len());
    for op in &snf.ops_left {
        factors.push(op_to_factor(&field, n, &op.inverse()));
    }
    for op in snf.ops_right.iter().rev() {
        factors.push(op_to_factor(&field, n, &op.inverse()));
    }
    Ok(merge_factors(factors))
}

/// A tame-equivalent diagonal form `h1 ∘ f ∘ h2 = g` with g diagonal,
/// together with tame factorizations of h1 and h2.
#[derive(Debug, Clone)]
pub struct DiagonalizationResult {
    pub h1: LinMap,
    pub diagonal: LinMap,
    pub h2: LinMap,
    pub h1_factors: Vec<TameFactor>,
    pub h2_factors: Vec<TameFactor>,
}

/// Diagonalizes an arbitrary (possibly non-square, non-invertible) map by
/// the Smith normal form of its matrix.
pub fn diagonalize_map(f: &LinMap) -> DiagonalizationResult {
    let m = f.to_matrix();
    let field = m.field().clone();
    let snf = smith_normal_form(&m);
    // left = L_s...L_1 composes as the factor list [L_s, ..., L_1]
    let h1_factors = merge_factors(
        snf.ops_left
            .iter()
            .rev()
            .map(|op| op_to_factor(&field, m.rows(), op))
            .collect(),
    );
    // right = R_1...R_l composes as [R_1, ..., R_l]
    let h2_factors = merge_factors(
        snf.ops_right
            .iter()
            .map(|op| op_to_factor(&field, m.cols(), op))
            .collect(),
    );
    DiagonalizationResult {
        h1: LinMap::from_matrix(&snf.left),
        diagonal: LinMap::from_matrix(&snf.diag),
        h2: LinMap::from_matrix(&snf.right),
        h1_factors,
        h2_factors,
    }
}

/// A linearized polynomial is a coordinate of some automorphism iff the
/// gcd of its row entries is a nonzero constant. The zero polynomial is
/// not a coordinate.
///
/// Being a coordinate of a general polynomial automorphism and of a
/// linearized one are equivalent for linearized polynomials, so this
/// single test answers both questions; the completion produced by
/// [`complete_coordinate`] is always a linearized automorphism, and no
/// search over general automorphisms is attempted.
pub fn is_coordinate(f: &LinPoly) -> bool {
    row_gcd(f).is_some_and(|g| g.is_unit())
}

fn row_gcd(f: &LinPoly) -> Option<UniPoly> {
    let mut acc: Option<UniPoly> = None;
    for p in f.row() {
        if p.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => p.make_monic(),
            Some(g) => g.gcd(p).expect("operands not both zero"),
        });
    }
    acc
}

/// Completes a coordinate to a full automorphism having it as first
/// component.
pub fn complete_coordinate(f: &LinPoly) -> Result<LinMap> {
    let completion = complete_unimodular_row(f.row())?;
    Ok(LinMap::from_matrix(&completion))
}

/// Writes f as h ∘ g with h univariate linearized and g a coordinate:
/// h is the monic gcd of the row, g the gcd-free part.
pub fn univariate_factor(f: &LinPoly) -> Result<(LinPoly, LinPoly)> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let field = f.field().clone();
    let h = row_gcd(f).expect("nonzero polynomial has a gcd");
    let reduced: Vec<UniPoly> = f.row().iter().map(|p| p.div_exact(&h)).collect();
    let h_tilde = LinPoly::from_row(&field, vec![h]);
    let f_tilde = LinPoly::from_row(&field, reduced);
    Ok((h_tilde, f_tilde))
}

/// Composes a univariate linearized polynomial with an arbitrary one: the
/// row of the result is the row of h times the row of g.
pub fn compose_univariate(h: &LinPoly, g: &LinPoly) -> LinPoly {
    assert_eq!(h.nvars(), 1, "outer polynomial must be univariate");
    let d = &h.row()[0];
    let row = g.row().iter().map(|p| d.mul(p)).collect();
    LinPoly::from_row(g.field(), row)
}

/// Normal form of an ideal generated by linearized polynomials: an
/// automorphism h and nonzero univariate linearized g_i with the ideal
/// equal to (g_1(h_1), ..., g_r(h_r)).
#[derive(Debug, Clone)]
pub struct IdealNormalForm {
    pub automorphism: LinMap,
    pub gs: Vec<LinPoly>,
}

impl IdealNormalForm {
    pub fn rank(&self) -> usize {
        self.gs.len()
    }

    /// The generators g_i(h_i) in row form, as a matrix.
    pub fn generator_matrix(&self) -> PolyMatrix {
        let h = self.automorphism.to_matrix();
        let field = h.field().clone();
        PolyMatrix::from_fn(&field, self.gs.len(), h.cols(), |i, j| {
            self.gs[i].row()[0].mul(h.get(i, j))
        })
    }
}

/// Computes the ideal normal form. Zero generators are dropped; an
/// all-zero generator list yields rank 0 with the identity map.
pub fn ideal_normal_form(generators: &[LinPoly]) -> Result<IdealNormalForm> {
    let (field, nvars) = match generators.first() {
        Some(g) => (g.field().clone(), g.nvars()),
        None => return Err(Error::DimensionMismatch("empty generator list".into())),
    };
    if generators.iter().any(|g| g.nvars() != nvars) {
        return Err(Error::DimensionMismatch(
            "generators disagree on the variable count".into(),
        ));
    }
    let nonzero: Vec<&LinPoly> = generators.iter().filter(|g| !g.is_zero()).collect();
    if nonzero.is_empty() {
        return Ok(IdealNormalForm {
            automorphism: LinMap::identity(&field, nvars),
            gs: vec![],
        });
    }
    let m = PolyMatrix::from_fn(&field, nonzero.len(), nvars, |i, j| {
        nonzero[i].row()[j].clone()
    });
    let snf = smith_normal_form(&m);
    let h_matrix = inverse_unimodular(&snf.right)?;
    let gs = (0..snf.rank())
        .map(|k| LinPoly::from_row(&field, vec![snf.diag.get(k, k).clone()]))
        .collect();
    Ok(IdealNormalForm {
        automorphism: LinMap::from_matrix(&h_matrix),
        gs,
    })
}

/// Outcome of polynomial-ring recognition for the quotient by an ideal of
/// linearized polynomials.
#[derive(Debug, Clone)]
pub enum RingRecognition {
    /// The quotient is a polynomial ring in `dim` variables.
    PolynomialRing { dim: usize, witness: IdealNormalForm },
    /// The quotient has zero divisors; `witness_index` points at a g_i of
    /// positive t-degree in the witness normal form.
    NotDomain {
        witness_index: usize,
        witness: IdealNormalForm,
    },
}

/// The quotient by the ideal is a polynomial ring iff it is a domain iff
/// every g_i in the normal form has t-degree zero, i.e. is a unit
/// multiple of a coordinate.
pub fn recognize_polynomial_ring(generators: &[LinPoly]) -> Result<RingRecognition> {
    let nf = ideal_normal_form(generators)?;
    let nvars = nf.automorphism.nvars();
    match nf
        .gs
        .iter()
        .position(|g| g.row()[0].degree().is_some_and(|d| d >= 1))
    {
        Some(i) => Ok(RingRecognition::NotDomain {
            witness_index: i,
            witness: nf,
        }),
        None => Ok(RingRecognition::PolynomialRing {
            dim: nvars - nf.gs.len(),
            witness: nf,
        }),
    }
}

/// Equality of row modules of two generator matrices, decided by their
/// canonical Hermite forms.
pub fn same_row_module(a: &PolyMatrix, b: &PolyMatrix) -> bool {
    matq::row_module_canonical(a) == matq::row_module_canonical(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::testutil::{random_fq, random_matrix, random_poly, random_unimodular};
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f2() -> Field {
        FieldSpec::prime(2).unwrap()
    }

    fn lp(field: &Field, s: &str, n: usize) -> LinPoly {
        LinPoly::parse(field, s, n).unwrap()
    }

    #[test]
    fn automorphism_examples() {
        let f = f2();
        assert!(is_automorphism(&LinMap::identity(&f, 3)).unwrap());

        // (X + X^4 + Y^4, X^4 + Y + Y^4), determinant 1 in char 2
        let map = LinMap::parse(&f, "X + X^[2] + Y^[2]; X^[2] + Y + Y^[2]", 2).unwrap();
        assert!(is_automorphism(&map).unwrap());

        let not = LinMap::parse(&f, "X1^[1]; X2", 2).unwrap();
        assert!(!is_automorphism(&not).unwrap());
    }

    #[test]
    fn invert_examples() {
        let f = f2();
        let id = LinMap::identity(&f, 2);
        assert_eq!(invert_map(&id).unwrap(), id);

        let map = LinMap::parse(&f, "X + X^[2] + Y^[2]; X^[2] + Y + Y^[2]", 2).unwrap();
        let inv = invert_map(&map).unwrap();
        assert!(map.compose(&inv).unwrap().is_identity());
        assert!(inv.compose(&map).unwrap().is_identity());

        let not = LinMap::parse(&f, "X1^[1]; X2", 2).unwrap();
        assert_eq!(invert_map(&not).unwrap_err(), Error::NotUnimodular);
    }

    fn random_tame(field: &Field, rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<TameFactor> {
        let mut factors = Vec::new();
        for _ in 0..k {
            if rng.gen_bool(0.5) && n > 1 {
                let index = rng.gen_range(0..n);
                let mut row = vec![UniPoly::zero(field); n];
                for (j, slot) in row.iter_mut().enumerate() {
                    if j != index && rng.gen_bool(0.7) {
                        *slot = random_poly(field, rng, 2);
                    }
                }
                factors.push(TameFactor::Elementary {
                    index,
                    shift: LinPoly::from_row(field, row),
                });
            } else {
                // a random invertible constant matrix, by rejection
                loop {
                    let c = FqMatrix::from_fn(field, n, n, |_, _| random_fq(field, rng));
                    if !c.det().unwrap().is_zero() {
                        factors.push(TameFactor::Linear(c));
                        break;
                    }
                }
            }
        }
        factors
    }

    #[test]
    fn invert_round_trip_random_tame_products() {
        let fields = [
            f2(),
            FieldSpec::prime(3).unwrap(),
            FieldSpec::new(2, 2, None).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for trial in 0..100 {
            let field = &fields[trial % fields.len()];
            let n = rng.gen_range(1..=3);
            let f = compose_factors(field, n, &random_tame(field, &mut rng, n, 4));
            assert!(is_automorphism(&f).unwrap());
            let inv = invert_map(&f).unwrap();
            assert!(f.compose(&inv).unwrap().is_identity());
            assert!(inv.compose(&f).unwrap().is_identity());
        }
    }

    #[test]
    fn tame_decompose_examples() {
        let f = f2();
        assert!(tame_decompose(&LinMap::identity(&f, 2)).unwrap().is_empty());

        // a single elementary map comes back as a single factor
        let e = LinMap::parse(&f, "X1 + X2^[1]; X2", 2).unwrap();
        let factors = tame_decompose(&e).unwrap();
        assert_eq!(factors.len(), 1);
        assert_eq!(compose_factors(&f, 2, &factors), e);

        let not = LinMap::parse(&f, "X1^[1]; X2", 2).unwrap();
        assert_eq!(tame_decompose(&not).unwrap_err(), Error::NotUnimodular);
    }

    #[test]
    fn tame_decompose_recomposes_random_products() {
        let fields = [f2(), FieldSpec::prime(3).unwrap()];
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for trial in 0..60 {
            let field = &fields[trial % fields.len()];
            let n = rng.gen_range(2..=3);
            let f = compose_factors(field, n, &random_tame(field, &mut rng, n, 5));
            let factors = tame_decompose(&f).unwrap();
            assert_eq!(compose_factors(field, n, &factors), f);
        }
    }

    #[test]
    fn diagonalize_examples() {
        let f = f2();
        // already diagonal in divisibility order: identity transforms
        let d = LinMap::parse(&f, "X1; X2^[1]", 2).unwrap();
        let res = diagonalize_map(&d);
        assert!(res.h1.is_identity());
        assert!(res.h2.is_identity());
        assert_eq!(res.diagonal, d);

        // (X^q, X): one column, two rows
        let tall = LinMap::parse(&f, "X1^[1]; X1", 1).unwrap();
        let res = diagonalize_map(&tall);
        let m = res.diagonal.to_matrix();
        assert!(m.get(0, 0).is_one());
        assert!(m.get(1, 0).is_zero());
    }

    #[test]
    fn diagonalize_reconstruction_randomized() {
        let fields = [f2(), FieldSpec::new(3, 2, None).unwrap()];
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for trial in 0..40 {
            let field = &fields[trial % fields.len()];
            let rows = rng.gen_range(1..=3);
            let cols = rng.gen_range(1..=3);
            let f = LinMap::from_matrix(&random_matrix(field, &mut rng, rows, cols, 3));
            let res = diagonalize_map(&f);
            // h1 o f o h2 = diagonal
            let lhs = res.h1.compose(&f).unwrap().compose(&res.h2).unwrap();
            assert_eq!(lhs, res.diagonal);
            // the factor lists compose to h1 and h2
            assert_eq!(compose_factors(field, rows, &res.h1_factors), res.h1);
            assert_eq!(compose_factors(field, cols, &res.h2_factors), res.h2);
            // diagonal shape
            let d = res.diagonal.to_matrix();
            for i in 0..rows {
                for j in 0..cols {
                    if i != j {
                        assert!(d.get(i, j).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn coordinate_examples() {
        let f = f2();
        assert!(is_coordinate(&LinPoly::coordinate(&f, 2, 0)));
        assert!(!is_coordinate(&lp(&f, "X1^[1]", 1)));
        // row (1+t, t^2) has unit gcd
        assert!(is_coordinate(&lp(&f, "X + X^[1] + Y^[2]", 2)));
        assert!(!is_coordinate(&LinPoly::zero(&f, 2)));
    }

    #[test]
    fn complete_coordinate_examples() {
        let f = f2();
        let x1 = LinPoly::coordinate(&f, 2, 0);
        let c = complete_coordinate(&x1).unwrap();
        assert!(c.is_identity());

        let p = lp(&f, "X + X^[1] + Y^[2]", 2);
        let c = complete_coordinate(&p).unwrap();
        assert!(is_automorphism(&c).unwrap());
        assert_eq!(c.component(0), &p);

        assert_eq!(
            complete_coordinate(&lp(&f, "X1^[1]", 1)).unwrap_err(),
            Error::NotUnimodularRow
        );
    }

    #[test]
    fn coordinate_duality_randomized() {
        // gcd criterion <=> completion succeeds <=> completion is an
        // automorphism
        let fields = [f2(), FieldSpec::prime(3).unwrap()];
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for trial in 0..100 {
            let field = &fields[trial % fields.len()];
            let n = rng.gen_range(1..=3);
            let mut row: Vec<UniPoly> = (0..n).map(|_| random_poly(field, &mut rng, 3)).collect();
            if trial % 2 == 0 {
                // force a unit gcd by dividing it out
                if row.iter().all(|p| p.is_zero()) {
                    row[0] = UniPoly::one(field);
                }
                let g = {
                    let mut acc: Option<UniPoly> = None;
                    for p in &row {
                        if p.is_zero() {
                            continue;
                        }
                        acc = Some(match acc {
                            None => p.make_monic(),
                            Some(g) => g.gcd(p).unwrap(),
                        });
                    }
                    acc.unwrap()
                };
                for p in row.iter_mut() {
                    *p = p.div_exact(&g);
                }
            }
            let f = LinPoly::from_row(field, row);
            let coord = is_coordinate(&f);
            match complete_coordinate(&f) {
                Ok(c) => {
                    assert!(coord);
                    assert!(is_automorphism(&c).unwrap());
                    assert_eq!(c.component(0), &f);
                }
                Err(_) => assert!(!coord),
            }
        }
    }

    #[test]
    fn univariate_factor_examples() {
        let f = f2();
        // a coordinate factors trivially
        let p = lp(&f, "X1 + X2^[1]", 2);
        let (h, g) = univariate_factor(&p).unwrap();
        assert_eq!(h, LinPoly::coordinate(&f, 1, 0));
        assert_eq!(g, p);

        // X^q + Y^q = (X^q) o (X + Y) in char 2
        let p = lp(&f, "X1^[1] + X2^[1]", 2);
        let (h, g) = univariate_factor(&p).unwrap();
        assert_eq!(h, lp(&f, "X1^[1]", 1));
        assert_eq!(g, lp(&f, "X1 + X2", 2));
        assert_eq!(compose_univariate(&h, &g), p);

        // X^(q^2) in one variable
        let p = lp(&f, "X1^[2]", 1);
        let (h, g) = univariate_factor(&p).unwrap();
        assert_eq!(h, lp(&f, "X1^[2]", 1));
        assert_eq!(g, lp(&f, "X1", 1));

        assert_eq!(
            univariate_factor(&LinPoly::zero(&f, 1)).unwrap_err(),
            Error::ZeroPolynomial
        );
    }

    #[test]
    fn univariate_factor_randomized() {
        let fields = [
            f2(),
            FieldSpec::new(2, 2, None).unwrap(),
            FieldSpec::prime(5).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for trial in 0..100 {
            let field = &fields[trial % fields.len()];
            let n = rng.gen_range(1..=3);
            let f = LinPoly::from_row(
                field,
                (0..n).map(|_| random_poly(field, &mut rng, 3)).collect(),
            );
            if f.is_zero() {
                continue;
            }
            let (h, g) = univariate_factor(&f).unwrap();
            assert_eq!(compose_univariate(&h, &g), f);
            assert!(is_coordinate(&g));
            assert!(h.row()[0].is_monic());
        }
    }

    #[test]
    fn ideal_normal_form_examples() {
        let f = f2();
        // single coordinate generator
        let nf = ideal_normal_form(&[LinPoly::coordinate(&f, 1, 0)]).unwrap();
        assert_eq!(nf.rank(), 1);
        assert!(nf.automorphism.is_identity());
        assert_eq!(nf.gs[0], LinPoly::coordinate(&f, 1, 0));

        // (X^q, X) = (X)
        let nf = ideal_normal_form(&[lp(&f, "X1^[1]", 1), lp(&f, "X1", 1)]).unwrap();
        assert_eq!(nf.rank(), 1);
        assert_eq!(nf.gs[0], LinPoly::coordinate(&f, 1, 0));

        // (X + Y) in two variables: rank 1 with h_1 = X + Y
        let nf = ideal_normal_form(&[lp(&f, "X1 + X2", 2)]).unwrap();
        assert_eq!(nf.rank(), 1);
        assert_eq!(nf.gs[0], LinPoly::coordinate(&f, 1, 0));
        assert!(is_automorphism(&nf.automorphism).unwrap());
        assert_eq!(nf.automorphism.component(0), &lp(&f, "X1 + X2", 2));

        // all-zero generators
        let nf = ideal_normal_form(&[LinPoly::zero(&f, 2)]).unwrap();
        assert_eq!(nf.rank(), 0);
        assert!(nf.automorphism.is_identity());
    }

    #[test]
    fn ideal_normal_form_preserves_row_module() {
        let fields = [f2(), FieldSpec::prime(3).unwrap()];
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for trial in 0..50 {
            let field = &fields[trial % fields.len()];
            let n = rng.gen_range(1..=3);
            let m = rng.gen_range(1..=3);
            let gens: Vec<LinPoly> = (0..m)
                .map(|_| {
                    LinPoly::from_row(
                        field,
                        (0..n).map(|_| random_poly(field, &mut rng, 3)).collect(),
                    )
                })
                .collect();
            let nf = ideal_normal_form(&gens).unwrap();
            assert!(is_automorphism(&nf.automorphism).unwrap());
            for g in &nf.gs {
                assert!(!g.is_zero());
            }
            let input = PolyMatrix::from_fn(field, m, n, |i, j| gens[i].row()[j].clone());
            assert!(same_row_module(&input, &nf.generator_matrix()));
        }
    }

    #[test]
    fn ring_recognition_examples() {
        let f = f2();
        // (X1) in two variables: polynomial ring of dimension 1
        match recognize_polynomial_ring(&[LinPoly::coordinate(&f, 2, 0)]).unwrap() {
            RingRecognition::PolynomialRing { dim, .. } => assert_eq!(dim, 1),
            other => panic!("expected PolynomialRing, got {other:?}"),
        }

        // (X^q): X is nilpotent mod the ideal
        match recognize_polynomial_ring(&[lp(&f, "X1^[1]", 1)]).unwrap() {
            RingRecognition::NotDomain {
                witness_index,
                witness,
            } => {
                assert_eq!(witness_index, 0);
                assert!(witness.gs[0].row()[0].degree().unwrap() >= 1);
            }
            other => panic!("expected NotDomain, got {other:?}"),
        }

        // (X + Y^q) is generated by a coordinate
        match recognize_polynomial_ring(&[lp(&f, "X1 + X2^[1]", 2)]).unwrap() {
            RingRecognition::PolynomialRing { dim, .. } => assert_eq!(dim, 1),
            other => panic!("expected PolynomialRing, got {other:?}"),
        }

        // zero ideal: the full polynomial ring
        match recognize_polynomial_ring(&[LinPoly::zero(&f, 2)]).unwrap() {
            RingRecognition::PolynomialRing { dim, .. } => assert_eq!(dim, 2),
            other => panic!("expected PolynomialRing, got {other:?}"),
        }
    }

    #[test]
    fn single_generator_ring_recognition_matches_coordinate_test() {
        let fields = [f2(), FieldSpec::prime(3).unwrap()];
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        for trial in 0..100 {
            let field = &fields[trial % fields.len()];
            let n = rng.gen_range(1..=3);
            let g = LinPoly::from_row(
                field,
                (0..n).map(|_| random_poly(field, &mut rng, 3)).collect(),
            );
            if g.is_zero() {
                continue;
            }
            let rec = recognize_polynomial_ring(std::slice::from_ref(&g)).unwrap();
            if let RingRecognition::PolynomialRing { dim, .. } = rec {
                if dim == n - 1 {
                    assert!(is_coordinate(&g));
                }
            }
        }
    }

    #[test]
    fn unimodular_transform_keeps_tame_decomposition_valid() {
        let f = FieldSpec::new(2, 2, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..20 {
            let u = random_unimodular(&f, &mut rng, 3);
            let map = LinMap::from_matrix(&u);
            let factors = tame_decompose(&map).unwrap();
            assert_eq!(compose_factors(&f, 3, &factors), map);
        }
    }
}
