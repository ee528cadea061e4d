//! Linearized polynomials and linearized polynomial maps.
//!
//! A linearized polynomial in X_1, ..., X_n over F_q is an F_q-linear
//! combination of monomials X_i^(q^m). Collecting, for each variable, the
//! coefficients of X_i^(q^m) as the t^m-coefficients of a univariate
//! polynomial yields a row vector over F_q[t]; stacking the rows of a map
//! yields an m-by-n matrix. That encoding is one-to-one, and composition
//! of maps corresponds to multiplication of the matrices. The matrix is
//! the canonical internal representation here; the expanded multivariate
//! form exists for parsing, printing, evaluation and the substitution
//! oracle [`LinMap::compose_symbolic`].

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{coeff_string, Field, FieldEmbedding, FieldSpec, FqElem};
use crate::lex::{Lexer, Tok};
use crate::matq::PolyMatrix;
use crate::polyring::UniPoly;

/// A single linearized polynomial, stored as its row vector over F_q[t]:
/// entry j carries the coefficients of the q-power monomials in X_(j+1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinPoly {
    field: Field,
    nvars: usize,
    row: Vec<UniPoly>,
}

impl LinPoly {
    pub fn zero(field: &Field, nvars: usize) -> LinPoly {
        LinPoly {
            field: field.clone(),
            nvars,
            row: vec![UniPoly::zero(field); nvars],
        }
    }

    pub fn from_row(field: &Field, row: Vec<UniPoly>) -> LinPoly {
        LinPoly {
            field: field.clone(),
            nvars: row.len(),
            row,
        }
    }

    /// The coordinate polynomial X_(index+1).
    pub fn coordinate(field: &Field, nvars: usize, index: usize) -> LinPoly {
        let mut p = LinPoly::zero(field, nvars);
        p.row[index] = UniPoly::one(field);
        p
    }

    /// c * X_(index+1)^(q^m)
    pub fn monomial(field: &Field, nvars: usize, index: usize, m: usize, c: FqElem) -> LinPoly {
        let mut p = LinPoly::zero(field, nvars);
        p.row[index] = UniPoly::monomial(c, m);
        p
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn row(&self) -> &[UniPoly] {
        &self.row
    }

    pub fn is_zero(&self) -> bool {
        self.row.iter().all(|p| p.is_zero())
    }

    pub fn add(&self, other: &LinPoly) -> LinPoly {
        assert_eq!(self.nvars, other.nvars);
        let row = self
            .row
            .iter()
            .zip(&other.row)
            .map(|(a, b)| a.add(b))
            .collect();
        LinPoly::from_row(&self.field, row)
    }

    pub fn sub(&self, other: &LinPoly) -> LinPoly {
        assert_eq!(self.nvars, other.nvars);
        let row = self
            .row
            .iter()
            .zip(&other.row)
            .map(|(a, b)| a.sub(b))
            .collect();
        LinPoly::from_row(&self.field, row)
    }

    pub fn scale(&self, c: &FqElem) -> LinPoly {
        let row = self.row.iter().map(|p| p.scale(c)).collect();
        LinPoly::from_row(&self.field, row)
    }

    /// Parses the linearized-polynomial DSL. `X1^[m]` denotes X_1^(q^m); a
    /// plain exponent such as `X1^4` is accepted when it is a power of q.
    /// Terms that mix variables or use a non-q-power exponent are
    /// rejected.
    pub fn parse(field: &Field, text: &str, nvars: usize) -> Result<LinPoly> {
        let mut lx = Lexer::new(text)?;
        let p = parse_linpoly(field, &mut lx, nvars)?;
        lx.expect_end()?;
        Ok(p)
    }

    /// Expanded multivariate form.
    pub fn expand(&self) -> DensePoly {
        let mut terms = BTreeMap::new();
        for (j, poly) in self.row.iter().enumerate() {
            for (m, c) in poly.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut exps = vec![0u128; self.nvars];
                exps[j] = q_pow(&self.field, m);
                terms.insert(exps, c.clone());
            }
        }
        DensePoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    /// Value at a point with coordinates in an extension field F_(q^k),
    /// computed by iterated Frobenius on the embedded coefficients.
    pub fn evaluate(&self, point: &[FqElem]) -> Result<FqElem> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coordinates, got {}",
                self.nvars,
                point.len()
            )));
        }
        let ext = point
            .first()
            .map(|x| x.field().clone())
            .unwrap_or_else(|| self.field.clone());
        if point.iter().any(|x| !FieldSpec::same(x.field(), &ext)) {
            return Err(Error::FieldMismatch);
        }
        let emb = FieldEmbedding::new(&self.field, &ext)?;
        let mut acc = FqElem::zero(&ext);
        for (j, poly) in self.row.iter().enumerate() {
            // successive q-powers of the coordinate, q the base field order
            let mut vq = point[j].clone();
            for (m, c) in poly.coeffs().iter().enumerate() {
                if m > 0 {
                    for _ in 0..self.field.r() {
                        vq = vq.frobenius();
                    }
                }
                if !c.is_zero() {
                    acc = acc.add(&emb.embed(c).mul(&vq));
                }
            }
        }
        Ok(acc)
    }
}

fn q_pow(field: &Field, m: usize) -> u128 {
    let q = field.order().expect("field order fits in u64") as u128;
    let mut acc: u128 = 1;
    for _ in 0..m {
        acc = acc.checked_mul(q).expect("monomial exponent overflow");
    }
    acc
}

/// Exponent e = q^m exactly; returns m.
fn q_log(field: &Field, mut e: u128) -> Option<usize> {
    let q = field.order().expect("field order fits in u64") as u128;
    let mut m = 0;
    while e > 1 {
        if !e.is_multiple_of(q) {
            return None;
        }
        e /= q;
        m += 1;
    }
    Some(m)
}

// ---------------------------------------------------------------------------
// Maps

/// A linearized polynomial map with `ncomponents` components in `nvars`
/// variables; row i of the matrix is the row form of component i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinMap {
    field: Field,
    nvars: usize,
    components: Vec<LinPoly>,
}

impl LinMap {
    pub fn identity(field: &Field, n: usize) -> LinMap {
        LinMap::from_matrix(&PolyMatrix::identity(field, n))
    }

    pub fn from_components(field: &Field, components: Vec<LinPoly>) -> Result<LinMap> {
        let nvars = components.first().map_or(0, |c| c.nvars());
        if components.iter().any(|c| c.nvars() != nvars) {
            return Err(Error::DimensionMismatch(
                "components disagree on the variable count".into(),
            ));
        }
        Ok(LinMap {
            field: field.clone(),
            nvars,
            components,
        })
    }

    /// One half of the bijection with matrices over F_q[t].
    pub fn from_matrix(m: &PolyMatrix) -> LinMap {
        let components = (0..m.rows())
            .map(|i| {
                LinPoly::from_row(
                    m.field(),
                    (0..m.cols()).map(|j| m.get(i, j).clone()).collect(),
                )
            })
            .collect();
        LinMap {
            field: m.field().clone(),
            nvars: m.cols(),
            components,
        }
    }

    /// The other half of the bijection.
    pub fn to_matrix(&self) -> PolyMatrix {
        PolyMatrix::from_fn(&self.field, self.components.len(), self.nvars, |i, j| {
            self.components[i].row()[j].clone()
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn ncomponents(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[LinPoly] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &LinPoly {
        &self.components[i]
    }

    pub fn is_identity(&self) -> bool {
        self.to_matrix().is_identity()
    }

    /// Composition through the matrix encoding: the product of the two
    /// matrices.
    pub fn compose(&self, other: &LinMap) -> Result<LinMap> {
        if self.nvars != other.ncomponents() {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose: left takes {} variables, right yields {}",
                self.nvars,
                other.ncomponents()
            )));
        }
        if !FieldSpec::same(&self.field, &other.field) {
            return Err(Error::FieldMismatch);
        }
        Ok(LinMap::from_matrix(
            &self.to_matrix().mul(&other.to_matrix()),
        ))
    }

    /// Composition by brute substitution: expand every component, raise
    /// the expanded right-hand components to the required q-powers by
    /// repeated multiplication, re-collect, and classify the result as
    /// linearized again. Independent of the matrix route, so the two can
    /// be checked against each other.
    pub fn compose_symbolic(&self, other: &LinMap) -> Result<LinMap> {
        if self.nvars != other.ncomponents() {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose: left takes {} variables, right yields {}",
                self.nvars,
                other.ncomponents()
            )));
        }
        if !FieldSpec::same(&self.field, &other.field) {
            return Err(Error::FieldMismatch);
        }
        let l = other.nvars;
        let expanded: Vec<DensePoly> = other.components.iter().map(|g| g.expand()).collect();
        // powers[k][m] = expand(g_k)^(q^m), built incrementally
        let mut powers: Vec<Vec<DensePoly>> = expanded.into_iter().map(|g| vec![g]).collect();
        let mut components = Vec::with_capacity(self.components.len());
        for f_i in &self.components {
            let mut acc = DensePoly::zero(&self.field, l);
            for (k, poly) in f_i.row().iter().enumerate() {
                for (m, c) in poly.coeffs().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    while powers[k].len() <= m {
                        let next = powers[k].last().unwrap().q_power();
                        powers[k].push(next);
                    }
                    acc = acc.add(&powers[k][m].scale(c));
                }
            }
            components.push(acc.classify()?);
        }
        LinMap::from_components(&self.field, components)
    }

    pub fn parse(field: &Field, text: &str, nvars: usize) -> Result<LinMap> {
        let components = text
            .split(';')
            .map(|part| LinPoly::parse(field, part, nvars))
            .collect::<Result<Vec<_>>>()?;
        LinMap::from_components(field, components)
    }

    /// Value of the map at a point over an extension field.
    pub fn evaluate(&self, point: &[FqElem]) -> Result<Vec<FqElem>> {
        self.components.iter().map(|c| c.evaluate(point)).collect()
    }
}

impl fmt::Display for LinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Expanded multivariate form

/// General multivariate polynomial over F_q in expanded form, used for
/// printing, evaluation and the substitution oracle. Keys are exponent
/// vectors; absent keys mean zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensePoly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Vec<u128>, FqElem>,
}

impl DensePoly {
    pub fn zero(field: &Field, nvars: usize) -> DensePoly {
        DensePoly {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        field: &Field,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u128>, FqElem)>,
    ) -> DensePoly {
        let mut out = DensePoly::zero(field, nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            if c.is_zero() {
                continue;
            }
            let entry = out
                .terms
                .entry(e.clone())
                .or_insert_with(|| FqElem::zero(field));
            *entry = entry.add(&c);
            if entry.is_zero() {
                out.terms.remove(&e);
            }
        }
        out
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u128>, &FqElem)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &DensePoly) -> DensePoly {
        assert_eq!(self.nvars, other.nvars);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms
                .entry(e.clone())
                .or_insert_with(|| FqElem::zero(&self.field));
            *entry = entry.add(c);
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        DensePoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    pub fn scale(&self, c: &FqElem) -> DensePoly {
        if c.is_zero() {
            return DensePoly::zero(&self.field, self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, x)| (e.clone(), x.mul(c)))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        DensePoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    pub fn mul(&self, other: &DensePoly) -> DensePoly {
        assert_eq!(self.nvars, other.nvars);
        let mut terms: BTreeMap<Vec<u128>, FqElem> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u128> = ea
                    .iter()
                    .zip(eb)
                    .map(|(x, y)| x.checked_add(*y).expect("exponent overflow"))
                    .collect();
                let prod = ca.mul(cb);
                if prod.is_zero() {
                    continue;
                }
                let entry = terms
                    .entry(exps.clone())
                    .or_insert_with(|| FqElem::zero(&self.field));
                *entry = entry.add(&prod);
                if entry.is_zero() {
                    terms.remove(&exps);
                }
            }
        }
        DensePoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    /// p-th power by honest repeated multiplication; binomial coefficients
    /// divisible by p cancel on their own during coefficient arithmetic.
    pub fn char_power(&self) -> DensePoly {
        let p = self.field.p();
        let mut acc = self.clone();
        for _ in 1..p {
            acc = acc.mul(self);
        }
        acc
    }

    /// q-th power: r successive p-th powers.
    pub fn q_power(&self) -> DensePoly {
        let mut acc = self.clone();
        for _ in 0..self.field.r() {
            acc = acc.char_power();
        }
        acc
    }

    /// Reads the expanded polynomial back as a linearized one. Fails with
    /// `MixedOrNonQPowerTerm` when some monomial involves several
    /// variables or an exponent that is not a power of q.
    pub fn classify(&self) -> Result<LinPoly> {
        let mut row = vec![UniPoly::zero(&self.field); self.nvars];
        let mut row_coeffs: Vec<BTreeMap<usize, FqElem>> = vec![BTreeMap::new(); self.nvars];
        for (exps, c) in &self.terms {
            let nonzero: Vec<usize> = (0..self.nvars).filter(|&j| exps[j] != 0).collect();
            if nonzero.len() != 1 {
                return Err(Error::MixedOrNonQPowerTerm {
                    monomial: monomial_string(c, exps),
                });
            }
            let j = nonzero[0];
            let m = q_log(&self.field, exps[j]).ok_or_else(|| Error::MixedOrNonQPowerTerm {
                monomial: monomial_string(c, exps),
            })?;
            row_coeffs[j].insert(m, c.clone());
        }
        for (j, coeffs) in row_coeffs.into_iter().enumerate() {
            if let Some(&max) = coeffs.keys().max() {
                let mut v = vec![FqElem::zero(&self.field); max + 1];
                for (m, c) in coeffs {
                    v[m] = c;
                }
                row[j] = UniPoly::from_coeffs(&self.field, v);
            }
        }
        Ok(LinPoly::from_row(&self.field, row))
    }
}

fn monomial_string(c: &FqElem, exps: &[u128]) -> String {
    let mut s = String::new();
    if !c.is_one() {
        s.push_str(&coeff_string(c));
        s.push('*');
    }
    let mut saw_var = false;
    for (j, &e) in exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if saw_var {
            s.push('*');
        }
        saw_var = true;
        if e == 1 {
            s.push_str(&format!("X{}", j + 1));
        } else {
            s.push_str(&format!("X{}^{e}", j + 1));
        }
    }
    if !saw_var {
        s = c.to_string();
    }
    s
}

// ---------------------------------------------------------------------------
// DSL parsing and printing

fn parse_linpoly(field: &Field, lx: &mut Lexer, nvars: usize) -> Result<LinPoly> {
    let mut acc = LinPoly::zero(field, nvars);
    let mut negate = false;
    if lx.eat(&Tok::Minus) {
        negate = true;
    }
    // the zero polynomial is written `0`
    if let Some(Tok::Num(n)) = lx.peek() {
        if n == "0" {
            lx.next();
            if lx.at_end() {
                return Ok(acc);
            }
            return Err(Error::Parse("unexpected input after '0'".into()));
        }
    }
    loop {
        let term = parse_linterm(field, lx, nvars)?;
        acc = if negate { acc.sub(&term) } else { acc.add(&term) };
        if lx.eat(&Tok::Plus) {
            negate = false;
        } else if lx.eat(&Tok::Minus) {
            negate = true;
        } else {
            return Ok(acc);
        }
    }
}

fn parse_linterm(field: &Field, lx: &mut Lexer, nvars: usize) -> Result<LinPoly> {
    // optional coefficient atoms separated by '*'
    let mut coef = FqElem::one(field);
    loop {
        match lx.peek() {
            Some(Tok::LParen) => {
                lx.next();
                let c = crate::field::parse_fq_sum(field, lx)?;
                lx.expect(&Tok::RParen)?;
                coef = coef.mul(&c);
                lx.expect(&Tok::Star)?;
            }
            Some(Tok::Num(_)) => {
                let k = lx.expect_u64()?;
                coef = coef.mul(&FqElem::from_int(field, k));
                lx.expect(&Tok::Star)?;
            }
            Some(Tok::Ident(name)) if name == "a" && field.r() > 1 => {
                lx.next();
                let exp = if lx.eat(&Tok::Caret) { lx.expect_u64()? } else { 1 };
                coef = coef.mul(&FqElem::generator(field).pow(exp));
                lx.expect(&Tok::Star)?;
            }
            _ => break,
        }
    }
    let index = parse_var_index(lx, nvars)?;
    // exponent: ^[m] means q^m; a plain ^e must be a power of q
    let m = if lx.eat(&Tok::Caret) {
        if lx.eat(&Tok::LBracket) {
            let m = lx.expect_usize()?;
            lx.expect(&Tok::RBracket)?;
            m
        } else {
            let e = lx.expect_num()?;
            let e: u128 = e
                .parse()
                .map_err(|_| Error::Parse(format!("exponent {e} out of range")))?;
            q_log(field, e).ok_or_else(|| Error::MixedOrNonQPowerTerm {
                monomial: format!("X{}^{e}", index + 1),
            })?
        }
    } else {
        0
    };
    Ok(LinPoly::monomial(field, nvars, index, m, coef))
}

/// Variable token: `X3` (1-based index), with `X`, `Y`, `Z` accepted as
/// shorthands for the first three variables.
fn parse_var_index(lx: &mut Lexer, nvars: usize) -> Result<usize> {
    match lx.next() {
        Some(Tok::Ident(name)) => {
            let index = match name.as_str() {
                "X" => 0,
                "Y" => 1,
                "Z" => 2,
                _ => {
                    let (head, digits) = name.split_at(1);
                    if head != "X" || digits.is_empty() {
                        return Err(Error::Parse(format!("unknown variable '{name}'")));
                    }
                    let idx: usize = digits
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad variable index in '{name}'")))?;
                    if idx == 0 {
                        return Err(Error::Parse("variable indices start at 1".into()));
                    }
                    idx - 1
                }
            };
            if index >= nvars {
                return Err(Error::Parse(format!(
                    "variable X{} exceeds the declared count {nvars}",
                    index + 1
                )));
            }
            Ok(index)
        }
        other => Err(Error::Parse(format!("expected a variable, found {other:?}"))),
    }
}

impl fmt::Display for LinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, poly) in self.row.iter().enumerate() {
            for (m, c) in poly.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                if !c.is_one() {
                    write!(f, "{}*", coeff_string(c))?;
                }
                write!(f, "X{}", j + 1)?;
                if m > 0 {
                    write!(f, "^[{m}]")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::testutil::random_matrix;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f2() -> Field {
        FieldSpec::prime(2).unwrap()
    }

    #[test]
    fn parse_examples() {
        let f = f2();
        let p = LinPoly::parse(&f, "X1^[2] + X2^[0]", 2).unwrap();
        assert_eq!(p.row()[0], UniPoly::parse(&f, "t^2").unwrap());
        assert_eq!(p.row()[1], UniPoly::one(&f));

        let id = LinPoly::parse(&f, "X1", 3).unwrap();
        assert_eq!(id, LinPoly::coordinate(&f, 3, 0));

        // 3 is not a power of 2
        assert!(matches!(
            LinPoly::parse(&f, "X1^3", 1).unwrap_err(),
            Error::MixedOrNonQPowerTerm { .. }
        ));
        // but 4 = 2^2 is
        let p = LinPoly::parse(&f, "X1^4", 1).unwrap();
        assert_eq!(p.row()[0], UniPoly::parse(&f, "t^2").unwrap());
    }

    #[test]
    fn matrix_bijection() {
        let f = f2();
        let id = LinMap::identity(&f, 3);
        assert!(id.is_identity());

        let m = PolyMatrix::parse(&f, "t").unwrap();
        let map = LinMap::from_matrix(&m);
        assert_eq!(map.to_string(), "X1^[1]");

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let m = random_matrix(&f, &mut rng, 2, 3, 4);
            assert_eq!(LinMap::from_matrix(&m).to_matrix(), m);
        }
    }

    #[test]
    fn expand_examples() {
        let f = f2();
        let p = LinPoly::from_row(
            &f,
            vec![UniPoly::parse(&f, "1+t").unwrap(), UniPoly::zero(&f)],
        );
        let d = p.expand();
        let exps: Vec<(Vec<u128>, FqElem)> =
            d.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
        assert_eq!(
            exps,
            vec![(vec![1, 0], FqElem::one(&f)), (vec![2, 0], FqElem::one(&f))]
        );
        assert!(LinPoly::zero(&f, 3).expand().is_zero());

        let p = LinPoly::parse(&f, "X1^[2] + X2^[2]", 2).unwrap();
        let d = p.expand();
        let exps: Vec<Vec<u128>> = d.terms().map(|(e, _)| e.clone()).collect();
        assert_eq!(exps, vec![vec![0, 4], vec![4, 0]]);
    }

    #[test]
    fn classify_round_trip_and_rejection() {
        let f = f2();
        let p = LinPoly::parse(&f, "X1 + X1^[2] + X2^[1]", 2).unwrap();
        assert_eq!(p.expand().classify().unwrap(), p);

        // X^2 * Y is mixed
        let d = DensePoly::from_terms(&f, 2, [(vec![2u128, 1], FqElem::one(&f))]);
        assert!(matches!(
            d.classify().unwrap_err(),
            Error::MixedOrNonQPowerTerm { .. }
        ));
    }

    #[test]
    fn evaluate_frobenius() {
        let f = f2();
        let f4 = FieldSpec::new(2, 2, None).unwrap();
        // f = X + X^2 at a: a + (a+1) = 1
        let p = LinPoly::parse(&f, "X1 + X1^[1]", 1).unwrap();
        let a = FqElem::generator(&f4);
        assert!(p.evaluate(&[a]).unwrap().is_one());

        // identity coordinate
        let c = LinPoly::coordinate(&f, 2, 0);
        let x = FqElem::generator(&f4);
        let y = FqElem::one(&f4);
        assert_eq!(c.evaluate(&[x.clone(), y]).unwrap(), x);
    }

    #[test]
    fn evaluate_is_linear_over_extension() {
        // additivity and F_q-homogeneity of the induced map on F_(q^3)
        let fields = [
            f2(),
            FieldSpec::prime(3).unwrap(),
            FieldSpec::new(2, 2, None).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for field in &fields {
            let ext = FieldSpec::new(field.p(), field.r() * 3, None).unwrap();
            let emb = FieldEmbedding::new(field, &ext).unwrap();
            for _ in 0..20 {
                let m = random_matrix(field, &mut rng, 1, 2, 3);
                let p = LinMap::from_matrix(&m).component(0).clone();
                let pt1: Vec<FqElem> = (0..2)
                    .map(|_| FqElem::from_index(&ext, rng.gen_range(0..ext.order().unwrap())))
                    .collect();
                let pt2: Vec<FqElem> = (0..2)
                    .map(|_| FqElem::from_index(&ext, rng.gen_range(0..ext.order().unwrap())))
                    .collect();
                let sum: Vec<FqElem> = pt1.iter().zip(&pt2).map(|(x, y)| x.add(y)).collect();
                let lhs = p.evaluate(&sum).unwrap();
                let rhs = p.evaluate(&pt1).unwrap().add(&p.evaluate(&pt2).unwrap());
                assert_eq!(lhs, rhs);

                let c = FqElem::from_index(field, rng.gen_range(0..field.order().unwrap()));
                let c_ext = emb.embed(&c);
                let scaled: Vec<FqElem> = pt1.iter().map(|x| x.mul(&c_ext)).collect();
                assert_eq!(
                    p.evaluate(&scaled).unwrap(),
                    p.evaluate(&pt1).unwrap().mul(&c_ext)
                );
            }
        }
    }

    #[test]
    fn compose_examples() {
        let f = f2();
        // (X^2) o (X + X^2) = X^2 + X^4
        let fmap = LinMap::parse(&f, "X1^[1]", 1).unwrap();
        let g = LinMap::parse(&f, "X1 + X1^[1]", 1).unwrap();
        let comp = fmap.compose(&g).unwrap();
        assert_eq!(comp, LinMap::parse(&f, "X1^[1] + X1^[2]", 1).unwrap());
        assert_eq!(fmap.compose_symbolic(&g).unwrap(), comp);

        // (X + X^2) o (X + X^2) = X + X^4: middle terms cancel in char 2
        let gg = g.compose_symbolic(&g).unwrap();
        assert_eq!(gg, LinMap::parse(&f, "X1 + X1^[2]", 1).unwrap());
        assert_eq!(g.compose(&g).unwrap(), gg);

        // identity is neutral on both sides
        let id = LinMap::identity(&f, 1);
        assert_eq!(id.compose_symbolic(&id).unwrap(), id);
        assert_eq!(fmap.compose(&id).unwrap(), fmap);
        assert_eq!(id.compose(&fmap).unwrap(), fmap);
    }

    #[test]
    fn compose_matrix_matches_symbolic_randomized() {
        let fields = [
            FieldSpec::prime(2).unwrap(),
            FieldSpec::prime(3).unwrap(),
            FieldSpec::new(2, 2, None).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for field in &fields {
            for _ in 0..15 {
                let m = rng.gen_range(1..=3);
                let n = rng.gen_range(1..=3);
                let l = rng.gen_range(1..=3);
                let a = random_matrix(field, &mut rng, m, n, 3);
                let b = random_matrix(field, &mut rng, n, l, 3);
                let fmap = LinMap::from_matrix(&a);
                let g = LinMap::from_matrix(&b);
                assert_eq!(fmap.compose(&g).unwrap(), fmap.compose_symbolic(&g).unwrap());
            }
        }
    }

    #[test]
    fn univariate_row_form_is_a_ring_isomorphism() {
        // for n = 1 the row form turns composition into multiplication and
        // addition into addition
        let f9 = FieldSpec::new(3, 2, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..25 {
            let a = random_matrix(&f9, &mut rng, 1, 1, 4);
            let b = random_matrix(&f9, &mut rng, 1, 1, 4);
            let fa = LinMap::from_matrix(&a);
            let fb = LinMap::from_matrix(&b);
            let comp = fa.compose_symbolic(&fb).unwrap();
            assert_eq!(comp.to_matrix().get(0, 0), &a.get(0, 0).mul(b.get(0, 0)));
            let sum = fa.component(0).add(fb.component(0));
            assert_eq!(sum.row()[0], a.get(0, 0).add(b.get(0, 0)));
        }
    }

    #[test]
    fn display_parse_round_trip() {
        let f9 = FieldSpec::new(3, 2, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for _ in 0..30 {
            let m = random_matrix(&f9, &mut rng, 2, 2, 3);
            let map = LinMap::from_matrix(&m);
            let s = map.to_string();
            assert_eq!(LinMap::parse(&f9, &s, 2).unwrap(), map, "string was {s}");
        }
        assert_eq!(LinMap::parse(&f9, "0; X1", 2).unwrap().to_string(), "0; X1");
    }

    #[test]
    fn paper_style_variable_names() {
        let f = f2();
        let p = LinPoly::parse(&f, "X + Y^[2]", 2).unwrap();
        assert_eq!(p, LinPoly::parse(&f, "X1 + X2^[2]", 2).unwrap());
    }
}
