//! The Euclidean domain F_q[t]: exact arithmetic, extended gcd, and
//! factorization of squarefree polynomials.
//!
//! The same type doubles as F_q[X] when minimal and characteristic
//! polynomials are involved; only the display variable differs.

use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{coeff_string, parse_fq_sum, Field, FieldSpec, FqElem};
use crate::lex::{Lexer, Tok};

/// Dense univariate polynomial over F_q, constant coefficient first, no
/// trailing zeros. The zero polynomial has an empty coefficient vector and
/// `degree() == None`.
#[derive(Debug, Clone)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<FqElem>,
}

impl PartialEq for UniPoly {
    fn eq(&self, other: &Self) -> bool {
        FieldSpec::same(&self.field, &other.field) && self.coeffs == other.coeffs
    }
}

impl Eq for UniPoly {}

impl UniPoly {
    pub fn zero(field: &Field) -> UniPoly {
        UniPoly {
            field: field.clone(),
            coeffs: vec![],
        }
    }

    pub fn one(field: &Field) -> UniPoly {
        UniPoly::constant(FqElem::one(field))
    }

    pub fn constant(c: FqElem) -> UniPoly {
        let field = c.field().clone();
        UniPoly::from_coeffs(&field, vec![c])
    }

    /// c * t^m
    pub fn monomial(c: FqElem, m: usize) -> UniPoly {
        let field = c.field().clone();
        let mut coeffs = vec![FqElem::zero(&field); m + 1];
        coeffs[m] = c;
        UniPoly::from_coeffs(&field, coeffs)
    }

    /// The variable t.
    pub fn var(field: &Field) -> UniPoly {
        UniPoly::monomial(FqElem::one(field), 1)
    }

    pub fn from_coeffs(field: &Field, mut coeffs: Vec<FqElem>) -> UniPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    /// Coefficient of t^k (zero when k exceeds the degree).
    pub fn coeff(&self, k: usize) -> FqElem {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| FqElem::zero(&self.field))
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Nonzero constant polynomial.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn leading_coeff(&self) -> Option<&FqElem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(|c| c.is_one())
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k).add(&other.coeff(k))).collect();
        UniPoly::from_coeffs(&self.field, coeffs)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k).sub(&other.coeff(k))).collect();
        UniPoly::from_coeffs(&self.field, coeffs)
    }

    pub fn neg(&self) -> UniPoly {
        let coeffs = self.coeffs.iter().map(FqElem::neg).collect();
        UniPoly::from_coeffs(&self.field, coeffs)
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(&self.field);
        }
        let mut coeffs =
            vec![FqElem::zero(&self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&x.mul(y));
            }
        }
        UniPoly::from_coeffs(&self.field, coeffs)
    }

    pub fn scale(&self, c: &FqElem) -> UniPoly {
        let coeffs = self.coeffs.iter().map(|x| x.mul(c)).collect();
        UniPoly::from_coeffs(&self.field, coeffs)
    }

    /// t^k * self
    pub fn shift(&self, k: usize) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![FqElem::zero(&self.field); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly::from_coeffs(&self.field, coeffs)
    }

    /// Euclidean division: returns (quotient, remainder) with
    /// deg(remainder) < deg(divisor).
    pub fn divmod(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dlead_inv = divisor.leading_coeff().unwrap().inv()?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![
            FqElem::zero(&self.field);
            self.coeffs.len().saturating_sub(divisor.coeffs.len()) + 1
        ];
        while rem.len() > dd {
            let c = rem.last().unwrap().mul(&dlead_inv);
            let shift = rem.len() - 1 - dd;
            if !c.is_zero() {
                quot[shift] = c.clone();
                for (j, dj) in divisor.coeffs.iter().enumerate() {
                    rem[shift + j] = rem[shift + j].sub(&c.mul(dj));
                }
            }
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        Ok((
            UniPoly::from_coeffs(&self.field, quot),
            UniPoly::from_coeffs(&self.field, rem),
        ))
    }

    /// Exact division; panics if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &UniPoly) -> UniPoly {
        let (q, r) = self.divmod(divisor).expect("division by zero");
        assert!(r.is_zero(), "division was not exact");
        q
    }

    pub fn rem(&self, modulus: &UniPoly) -> UniPoly {
        self.divmod(modulus).expect("division by zero").1
    }

    pub fn eval(&self, x: &FqElem) -> FqElem {
        let mut acc = FqElem::zero(x.field());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero(&self.field);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(k, c)| c.scale((k + 1) as u64 % self.field.p()))
            .collect();
        UniPoly::from_coeffs(&self.field, coeffs)
    }

    pub fn make_monic(&self) -> UniPoly {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) => self.scale(&c.inv().expect("leading coefficient is nonzero")),
        }
    }

    /// Monic gcd; gcd(f, 0) = monic(f).
    pub fn gcd(&self, other: &UniPoly) -> Result<UniPoly> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::GcdUndefined);
        }
        let (mut x, mut y) = (self.clone(), other.clone());
        while !y.is_zero() {
            let r = x.rem(&y);
            x = y;
            y = r;
        }
        Ok(x.make_monic())
    }

    /// Extended gcd: returns (d, u, v) with d = u*f + v*g, d monic.
    pub fn gcd_ext(&self, other: &UniPoly) -> Result<(UniPoly, UniPoly, UniPoly)> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::GcdUndefined);
        }
        let field = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut u0, mut u1) = (UniPoly::one(field), UniPoly::zero(field));
        let (mut v0, mut v1) = (UniPoly::zero(field), UniPoly::one(field));
        while !r1.is_zero() {
            let (q, r2) = r0.divmod(&r1)?;
            let u2 = u0.sub(&q.mul(&u1));
            let v2 = v0.sub(&q.mul(&v1));
            r0 = std::mem::replace(&mut r1, r2);
            u0 = std::mem::replace(&mut u1, u2);
            v0 = std::mem::replace(&mut v1, v2);
        }
        let lc_inv = r0.leading_coeff().unwrap().inv()?;
        let c = UniPoly::constant(lc_inv);
        Ok((r0.mul(&c), u0.mul(&c), v0.mul(&c)))
    }

    /// self^e mod m.
    pub fn pow_mod(&self, mut e: u128, m: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::one(&self.field).rem(m);
        let mut base = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// self^(q^k) mod m.
    pub fn frobenius_pow_mod(&self, k: usize, m: &UniPoly) -> UniPoly {
        let p = self.field.p() as u128;
        let mut acc = self.rem(m);
        for _ in 0..k * self.field.r() {
            acc = acc.pow_mod(p, m);
        }
        acc
    }

    /// Irreducibility over F_q: t^(q^d) = t mod f, and t^(q^(d/l)) - t is
    /// coprime to f for every prime l dividing d = deg f.
    pub fn is_irreducible(&self) -> bool {
        let d = match self.degree() {
            Some(d) if d >= 1 => d,
            _ => return false,
        };
        if d == 1 {
            return true;
        }
        let t = UniPoly::var(&self.field);
        let tq = t.frobenius_pow_mod(d, self);
        if tq != t.rem(self) {
            return false;
        }
        let mut rest = d;
        let mut prime_divs = vec![];
        let mut l = 2;
        while l * l <= rest {
            if rest % l == 0 {
                prime_divs.push(l);
                while rest % l == 0 {
                    rest /= l;
                }
            }
            l += 1;
        }
        if rest > 1 {
            prime_divs.push(rest);
        }
        for l in prime_divs {
            let te = t.frobenius_pow_mod(d / l, self);
            let g = self.gcd(&te.sub(&t)).unwrap();
            if !g.is_one() {
                return false;
            }
        }
        true
    }

    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.degree() == Some(0) {
            return true;
        }
        let d = self.derivative();
        if d.is_zero() {
            return false;
        }
        self.gcd(&d).is_ok_and(|g| g.is_one())
    }

    /// Factors a monic squarefree polynomial into distinct monic
    /// irreducibles: distinct-degree splitting followed by seeded
    /// Cantor-Zassenhaus equal-degree splitting. The factor list is sorted
    /// by degree, then by coefficient indices, so identical inputs and
    /// seeds reproduce identical output.
    pub fn factor_squarefree(&self, rng_seed: u64) -> Result<Vec<UniPoly>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        assert!(self.is_monic(), "factorization input must be monic");
        if !self.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        if self.degree() == Some(0) {
            return Ok(vec![]);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let mut factors = Vec::new();
        // distinct-degree phase
        let t = UniPoly::var(&self.field);
        let mut h = t.rem(self);
        let mut rest = self.clone();
        let mut d = 0usize;
        while rest.degree().is_some_and(|deg| deg > 0) {
            d += 1;
            if 2 * d > rest.degree().unwrap() {
                // what is left is a single irreducible factor
                factors.push(rest.clone());
                break;
            }
            h = h.frobenius_pow_mod(1, &rest);
            let g = rest.gcd(&h.sub(&t))?;
            if !g.is_one() {
                equal_degree_split(&g, d, &mut rng, &mut factors);
                rest = rest.div_exact(&g);
                h = h.rem(&rest);
            }
        }
        factors.sort_by(cmp_poly);
        // re-multiplication sanity check
        let mut prod = UniPoly::one(&self.field);
        for f in &factors {
            prod = prod.mul(f);
        }
        assert_eq!(prod, *self, "factorization failed to re-multiply");
        Ok(factors)
    }

    /// Parses `t^2 + a*t + 1` style text (`0` for the zero polynomial).
    /// The variable name defaults to `t`; `var` overrides it.
    pub fn parse_with_var(field: &Field, text: &str, var: &str) -> Result<UniPoly> {
        let mut lx = Lexer::new(text)?;
        let p = parse_unipoly(field, &mut lx, var)?;
        lx.expect_end()?;
        Ok(p)
    }

    pub fn parse(field: &Field, text: &str) -> Result<UniPoly> {
        UniPoly::parse_with_var(field, text, "t")
    }

    pub fn display_with_var<'a>(&'a self, var: &'a str) -> UniPolyDisplay<'a> {
        UniPolyDisplay { poly: self, var }
    }
}

fn cmp_poly(a: &UniPoly, b: &UniPoly) -> std::cmp::Ordering {
    let da = a.coeffs().len();
    let db = b.coeffs().len();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.coeffs().iter().zip(b.coeffs()).rev() {
            let ord = x.coeffs().cmp(y.coeffs());
            if ord != std::cmp::Ordering::Equal {
                return ord;
            }
        }
        std::cmp::Ordering::Equal
    })
}

/// Splits a product of distinct irreducibles of known equal degree d.
fn equal_degree_split(g: &UniPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<UniPoly>) {
    let deg = g.degree().unwrap();
    if deg == d {
        out.push(g.make_monic());
        return;
    }
    let field = g.field().clone();
    let p = field.p();
    loop {
        // random polynomial of degree < deg
        let coeffs: Vec<FqElem> = (0..deg)
            .map(|_| {
                let idx = rng.gen_range(0..field.order().expect("field order fits in u64"));
                FqElem::from_index(&field, idx)
            })
            .collect();
        let a = UniPoly::from_coeffs(&field, coeffs);
        if a.is_zero() {
            continue;
        }
        let c = g.gcd(&a).unwrap();
        let candidate = if !c.is_one() && c != *g {
            c
        } else if p == 2 {
            // additive trace to F_2
            let mut b = UniPoly::zero(&field);
            let mut ai = a.rem(g);
            for _ in 0..field.r() * d {
                b = b.add(&ai);
                ai = ai.mul(&ai).rem(g);
            }
            let c = g.gcd(&b).unwrap();
            if c.is_one() || c == *g {
                continue;
            }
            c
        } else {
            let e = (pow_u128(field.order().unwrap() as u128, d) - 1) / 2;
            let b = a.pow_mod(e, g);
            let c = g.gcd(&b.sub(&UniPoly::one(&field))).unwrap();
            if c.is_one() || c == *g {
                continue;
            }
            c
        };
        let other = g.div_exact(&candidate);
        equal_degree_split(&candidate, d, rng, out);
        equal_degree_split(&other, d, rng, out);
        return;
    }
}

fn pow_u128(b: u128, e: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(b).expect("exponent overflow");
    }
    acc
}

fn parse_unipoly(field: &Field, lx: &mut Lexer, var: &str) -> Result<UniPoly> {
    let mut acc = UniPoly::zero(field);
    let mut negate = false;
    if lx.eat(&Tok::Minus) {
        negate = true;
    }
    loop {
        let term = parse_uniterm(field, lx, var)?;
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

fn parse_uniterm(field: &Field, lx: &mut Lexer, var: &str) -> Result<UniPoly> {
    // a term is a '*'-separated product of coefficient atoms (integer,
    // generator power, parenthesized element sum) followed by an optional
    // power of the variable
    let mut coef = FqElem::one(field);
    let mut have_atom = false;
    loop {
        match lx.peek() {
            Some(Tok::LParen) => {
                lx.next();
                let c = parse_fq_sum(field, lx)?;
                lx.expect(&Tok::RParen)?;
                coef = coef.mul(&c);
            }
            Some(Tok::Num(_)) => {
                let k = lx.expect_u64()?;
                coef = coef.mul(&FqElem::from_int(field, k));
            }
            Some(Tok::Ident(name)) if name == "a" && field.r() > 1 => {
                lx.next();
                let exp = if lx.eat(&Tok::Caret) { lx.expect_u64()? } else { 1 };
                coef = coef.mul(&FqElem::generator(field).pow(exp));
            }
            Some(Tok::Ident(name)) if name == var => {
                lx.next();
                let exp = if lx.eat(&Tok::Caret) { lx.expect_usize()? } else { 1 };
                return Ok(UniPoly::monomial(coef, exp));
            }
            other => {
                if have_atom {
                    return Ok(UniPoly::constant(coef));
                }
                return Err(Error::Parse(format!(
                    "expected '{var}' or a coefficient, found {other:?}"
                )));
            }
        }
        have_atom = true;
        if !lx.eat(&Tok::Star) {
            return Ok(UniPoly::constant(coef));
        }
    }
}

pub struct UniPolyDisplay<'a> {
    poly: &'a UniPoly,
    var: &'a str,
}

impl fmt::Display for UniPolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.poly;
        if p.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..p.coeffs.len()).rev() {
            let c = &p.coeffs[k];
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = coeff_string(c);
            match (k, c.is_one()) {
                (0, _) => write!(f, "{cs}")?,
                (1, true) => write!(f, "{}", self.var)?,
                (1, false) => write!(f, "{cs}*{}", self.var)?,
                (k, true) => write!(f, "{}^{k}", self.var)?,
                (k, false) => write!(f, "{cs}*{}^{k}", self.var)?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with_var("t"))
    }
}
