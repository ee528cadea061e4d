//! Exact arithmetic in finite fields F_q, q = p^r.
//!
//! A [`FieldSpec`] fixes the prime p, the extension degree r and a monic
//! irreducible modulus over F_p; elements are coefficient vectors in the
//! basis 1, a, ..., a^(r-1), where `a` is the class of the modulus
//! variable. Elements are kept fully reduced at all times and equality is
//! structural, so identical field specs built in different places compare
//! equal.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lex::{Lexer, Tok};

/// Description of F_q = F_p[a]/(modulus), q = p^r.
#[derive(Debug, PartialEq, Eq)]
pub struct FieldSpec {
    p: u64,
    r: usize,
    /// Monic of degree r over F_p, constant coefficient first.
    /// For r = 1 this is the polynomial `a` itself, so elements are plain
    /// residues mod p.
    modulus: Vec<u64>,
}

/// Shared handle to a field description; every element carries one.
pub type Field = Arc<FieldSpec>;

impl FieldSpec {
    /// Builds F_(p^r). When `modulus` is `None` the default modulus is the
    /// first monic irreducible of degree r in base-p counting order of the
    /// non-leading coefficient tuple (c_0, ..., c_(r-1)).
    pub fn new(p: u64, r: usize, modulus: Option<Vec<u64>>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        assert!(r >= 1, "extension degree must be positive");
        let modulus = match modulus {
            Some(m) => {
                let m: Vec<u64> = m.iter().map(|c| c % p).collect();
                let m = pm_trim(m);
                if pm_deg(&m) != Some(r) || *m.last().unwrap() != 1 {
                    return Err(Error::ModulusDegree {
                        expected: r,
                        found: pm_deg(&m).unwrap_or(0),
                    });
                }
                if r == 1 {
                    // canonical representative: residues mod p
                    vec![0, 1]
                } else if pm_irreducible(&m, p) {
                    m
                } else {
                    return Err(Error::ReducibleModulus { p });
                }
            }
            None => default_modulus(p, r),
        };
        Ok(Arc::new(FieldSpec { p, r, modulus }))
    }

    /// Builds the prime field F_p.
    pub fn prime(p: u64) -> Result<Field> {
        FieldSpec::new(p, 1, None)
    }

    /// Builds F_q from a prime-power order q.
    pub fn from_order(q: u64, modulus: Option<Vec<u64>>) -> Result<Field> {
        let (p, r) = split_prime_power(q).ok_or(Error::NotPrime(q))?;
        FieldSpec::new(p, r, modulus)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// q = p^r, or `None` if it does not fit in 64 bits.
    pub fn order(&self) -> Option<u64> {
        let mut q: u64 = 1;
        for _ in 0..self.r {
            q = q.checked_mul(self.p)?;
        }
        Some(q)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Structural equality of two field handles.
    pub fn same(a: &Field, b: &Field) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

/// Returns (p, r) with q = p^r, if q is a prime power > 1.
pub fn split_prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let mut p = q;
    // the prime divisor of a prime power is found by trial division
    let mut d = 2u64;
    while d * d <= q {
        if q.is_multiple_of(d) {
            p = d;
            break;
        }
        d += 1;
    }
    let mut r = 0usize;
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
        r += 1;
    }
    if rest == 1 && is_prime(p) {
        Some((p, r))
    } else {
        None
    }
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

// ---------------------------------------------------------------------------
// Polynomial helpers over F_p, used for modulus selection and element
// arithmetic. Vectors hold residues mod p, constant coefficient first, no
// trailing zeros.

pub(crate) fn pm_trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

pub(crate) fn pm_deg(v: &[u64]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

fn pm_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    pm_trim(out)
}

fn pm_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    pm_trim(out)
}

/// Remainder of a modulo m; m monic.
fn pm_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    debug_assert_eq!(*m.last().unwrap(), 1);
    let mut rem: Vec<u64> = a.to_vec();
    let dm = m.len() - 1;
    while pm_deg(&rem).is_some_and(|d| d >= dm) {
        let d = rem.len() - 1;
        let c = rem[d];
        let shift = d - dm;
        for (j, &mj) in m.iter().enumerate() {
            rem[shift + j] = (rem[shift + j] + p - mul_mod(c, mj, p)) % p;
        }
        rem = pm_trim(rem);
    }
    rem
}

fn pm_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        let lead = *y.last().unwrap();
        let inv = mod_pow(lead, p - 2, p);
        let monic: Vec<u64> = y.iter().map(|&c| mul_mod(c, inv, p)).collect();
        let r = pm_rem(&x, &monic, p);
        x = y;
        y = r;
    }
    x
}

/// Extended gcd restricted to what element inversion needs: returns u with
/// u*a = gcd(a, m) mod m, gcd normalized monic.
fn pm_inv_mod(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    // iterative extended Euclid over F_p[x]
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    let (mut t0, mut t1) = (vec![], vec![1u64]);
    while !r1.is_empty() {
        // divide r0 by r1
        let lead = *r1.last().unwrap();
        let linv = mod_pow(lead, p - 2, p);
        let mut rem = r0.clone();
        let mut quot = vec![0u64; rem.len().saturating_sub(r1.len()) + 1];
        while pm_deg(&rem).is_some_and(|d| d >= r1.len() - 1) {
            let d = rem.len() - 1;
            let c = mul_mod(rem[d], linv, p);
            let shift = d - (r1.len() - 1);
            quot[shift] = c;
            for (j, &mj) in r1.iter().enumerate() {
                rem[shift + j] = (rem[shift + j] + p - mul_mod(c, mj, p)) % p;
            }
            rem = pm_trim(rem);
        }
        let quot = pm_trim(quot);
        let t2 = pm_sub(&t0, &pm_mul(&quot, &t1, p), p);
        r0 = std::mem::replace(&mut r1, rem);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if pm_deg(&r0) != Some(0) {
        return None; // gcd not a unit
    }
    let inv = mod_pow(r0[0], p - 2, p);
    Some(pm_trim(t0.iter().map(|&c| mul_mod(c, inv, p)).collect()))
}

/// x^(p^k) mod m, with m monic.
fn pm_frob_pow(x: &[u64], k: usize, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = x.to_vec();
    for _ in 0..k {
        // acc^p mod m by square-and-multiply on the exponent p
        let mut result = vec![1u64];
        let mut base = acc.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                result = pm_rem(&pm_mul(&result, &base, p), m, p);
            }
            base = pm_rem(&pm_mul(&base, &base, p), m, p);
            e >>= 1;
        }
        acc = result;
    }
    acc
}

/// Irreducibility of a monic f over F_p: x^(p^deg) = x mod f and
/// gcd(x^(p^(deg/l)) - x, f) = 1 for every prime l dividing deg.
pub(crate) fn pm_irreducible(f: &[u64], p: u64) -> bool {
    let d = match pm_deg(f) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if d == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let xq = pm_frob_pow(&x, d, f, p);
    if pm_sub(&xq, &x, p) != Vec::<u64>::new() {
        return false;
    }
    let mut rest = d;
    let mut l = 2;
    let mut prime_divs = vec![];
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
        let xe = pm_frob_pow(&x, d / l, f, p);
        let g = pm_gcd(f, &pm_sub(&xe, &x, p), p);
        if pm_deg(&g) != Some(0) {
            return false;
        }
    }
    true
}

fn default_modulus(p: u64, r: usize) -> Vec<u64> {
    if r == 1 {
        return vec![0, 1];
    }
    // enumerate (c_0, ..., c_(r-1)) in base-p counting order, c_0 least
    // significant, and take the first irreducible x^r + sum c_i x^i
    let mut k = 0u64;
    loop {
        let mut coeffs = Vec::with_capacity(r + 1);
        let mut v = k;
        for _ in 0..r {
            coeffs.push(v % p);
            v /= p;
        }
        assert_eq!(v, 0, "no irreducible of degree {r} found over F_{p}");
        coeffs.push(1);
        if pm_irreducible(&coeffs, p) {
            return coeffs;
        }
        k += 1;
    }
}

// ---------------------------------------------------------------------------
// Elements

/// Element of F_q in the basis 1, a, ..., a^(r-1); coefficients are fully
/// reduced residues mod p.
#[derive(Debug, Clone)]
pub struct FqElem {
    field: Field,
    coeffs: Vec<u64>, // length r
}

impl PartialEq for FqElem {
    fn eq(&self, other: &Self) -> bool {
        FieldSpec::same(&self.field, &other.field) && self.coeffs == other.coeffs
    }
}

impl Eq for FqElem {}

impl FqElem {
    pub fn zero(field: &Field) -> FqElem {
        FqElem {
            field: field.clone(),
            coeffs: vec![0; field.r],
        }
    }

    pub fn one(field: &Field) -> FqElem {
        FqElem::from_int(field, 1)
    }

    pub fn from_int(field: &Field, k: u64) -> FqElem {
        let mut coeffs = vec![0; field.r];
        coeffs[0] = k % field.p;
        FqElem {
            field: field.clone(),
            coeffs,
        }
    }

    /// The class of the modulus variable `a`. For r = 1 this reduces to 0.
    pub fn generator(field: &Field) -> FqElem {
        FqElem::from_poly(field, &[0, 1])
    }

    /// Reduces an arbitrary coefficient vector (constant first) modulo the
    /// field modulus.
    pub fn from_poly(field: &Field, coeffs: &[u64]) -> FqElem {
        let reduced: Vec<u64> = coeffs.iter().map(|c| c % field.p).collect();
        let mut rem = pm_rem(&pm_trim(reduced), &field.modulus, field.p);
        rem.resize(field.r, 0);
        FqElem {
            field: field.clone(),
            coeffs: rem,
        }
    }

    /// Element number k in base-p counting order (c_0 least significant).
    pub fn from_index(field: &Field, k: u64) -> FqElem {
        let mut coeffs = Vec::with_capacity(field.r);
        let mut v = k;
        for _ in 0..field.r {
            coeffs.push(v % field.p);
            v /= field.p;
        }
        FqElem {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn check_same_field(&self, other: &FqElem) {
        assert!(
            FieldSpec::same(&self.field, &other.field),
            "operands belong to different fields"
        );
    }

    pub fn add(&self, other: &FqElem) -> FqElem {
        self.check_same_field(other);
        let p = self.field.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&x, &y)| (x + y) % p)
            .collect();
        FqElem {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, other: &FqElem) -> FqElem {
        self.check_same_field(other);
        let p = self.field.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&x, &y)| (x + p - y) % p)
            .collect();
        FqElem {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn neg(&self) -> FqElem {
        let p = self.field.p;
        let coeffs = self.coeffs.iter().map(|&x| (p - x) % p).collect();
        FqElem {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn mul(&self, other: &FqElem) -> FqElem {
        self.check_same_field(other);
        let p = self.field.p;
        let prod = pm_mul(&pm_trim(self.coeffs.clone()), &pm_trim(other.coeffs.clone()), p);
        let mut rem = pm_rem(&prod, &self.field.modulus, p);
        rem.resize(self.field.r, 0);
        FqElem {
            field: self.field.clone(),
            coeffs: rem,
        }
    }

    pub fn scale(&self, k: u64) -> FqElem {
        let p = self.field.p;
        let k = k % p;
        let coeffs = self.coeffs.iter().map(|&x| mul_mod(x, k, p)).collect();
        FqElem {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn inv(&self) -> Result<FqElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let u = pm_inv_mod(&pm_trim(self.coeffs.clone()), &self.field.modulus, self.field.p)
            .expect("nonzero element of a field is invertible");
        let mut coeffs = u;
        coeffs.resize(self.field.r, 0);
        Ok(FqElem {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn pow(&self, mut e: u64) -> FqElem {
        let mut acc = FqElem::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// x^p, the Frobenius endomorphism.
    pub fn frobenius(&self) -> FqElem {
        self.pow(self.field.p)
    }

    /// x^(q^m), m iterations of the q-power map.
    pub fn q_power(&self, m: usize) -> FqElem {
        let mut acc = self.clone();
        for _ in 0..m * self.field.r {
            acc = acc.frobenius();
        }
        acc
    }

    /// Parses an element literal: a decimal residue for prime fields, a
    /// polynomial in `a` (e.g. `a+1`, `2*a^2+a`) for extensions.
    pub fn parse(field: &Field, text: &str) -> Result<FqElem> {
        let mut lx = Lexer::new(text)?;
        let e = parse_fq_sum(field, &mut lx)?;
        lx.expect_end()?;
        Ok(e)
    }
}

impl std::ops::Add for &FqElem {
    type Output = FqElem;
    fn add(self, rhs: &FqElem) -> FqElem {
        FqElem::add(self, rhs)
    }
}

impl std::ops::Sub for &FqElem {
    type Output = FqElem;
    fn sub(self, rhs: &FqElem) -> FqElem {
        FqElem::sub(self, rhs)
    }
}

impl std::ops::Mul for &FqElem {
    type Output = FqElem;
    fn mul(self, rhs: &FqElem) -> FqElem {
        FqElem::mul(self, rhs)
    }
}

impl std::ops::Neg for &FqElem {
    type Output = FqElem;
    fn neg(self) -> FqElem {
        FqElem::neg(self)
    }
}

/// Parses a sum of field-element terms; used both for standalone literals
/// and for coefficients inside polynomial grammars.
pub(crate) fn parse_fq_sum(field: &Field, lx: &mut Lexer) -> Result<FqElem> {
    let mut acc = FqElem::zero(field);
    let mut negate = false;
    if lx.eat(&Tok::Minus) {
        negate = true;
    }
    loop {
        let term = parse_fq_term(field, lx)?;
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

fn parse_fq_term(field: &Field, lx: &mut Lexer) -> Result<FqElem> {
    let mut coef: Option<u64> = None;
    if let Some(Tok::Num(_)) = lx.peek() {
        coef = Some(lx.expect_u64()?);
        if !lx.eat(&Tok::Star) {
            return Ok(FqElem::from_int(field, coef.unwrap()));
        }
    }
    match lx.peek() {
        Some(Tok::Ident(name)) if name == "a" => {
            if field.r() == 1 {
                return Err(Error::Parse(
                    "generator 'a' is not available in a prime field".into(),
                ));
            }
            lx.next();
            let exp = if lx.eat(&Tok::Caret) { lx.expect_u64()? } else { 1 };
            let g = FqElem::generator(field).pow(exp);
            Ok(g.scale(coef.unwrap_or(1)))
        }
        other => Err(Error::Parse(format!(
            "expected field element term, found {other:?}"
        ))),
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = self.coeffs[k];
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (k, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "a")?,
                (1, c) => write!(f, "{c}*a")?,
                (k, 1) => write!(f, "a^{k}")?,
                (k, c) => write!(f, "{c}*a^{k}")?,
            }
        }
        Ok(())
    }
}

/// Printed form wrapped in parentheses when it is a sum, for use inside
/// polynomial output.
pub(crate) fn coeff_string(c: &FqElem) -> String {
    let s = c.to_string();
    if s.contains('+') {
        format!("({s})")
    } else {
        s
    }
}

// ---------------------------------------------------------------------------
// Embeddings into extension fields

/// The inclusion F_q -> F_(q^k), realized by sending the base generator to
/// the first root of the base modulus in the big field (first in base-p
/// counting order).
#[derive(Debug, Clone)]
pub struct FieldEmbedding {
    base: Field,
    ext: Field,
    gen_powers: Vec<FqElem>, // 1, g, g^2, ..., g^(r-1) in the big field
}

impl FieldEmbedding {
    pub fn new(base: &Field, ext: &Field) -> Result<FieldEmbedding> {
        if base.p() != ext.p() || !ext.r().is_multiple_of(base.r()) {
            return Err(Error::FieldMismatch);
        }
        if FieldSpec::same(base, ext) {
            let g = FqElem::generator(ext);
            return Ok(Self::from_gen(base, ext, g));
        }
        let count = ext.order().ok_or(Error::FieldTooLarge)?;
        for k in 0..count {
            let x = FqElem::from_index(ext, k);
            // evaluate the base modulus at x
            let mut val = FqElem::zero(ext);
            let mut xp = FqElem::one(ext);
            for &c in base.modulus() {
                val = val.add(&xp.scale(c));
                xp = xp.mul(&x);
            }
            if val.is_zero() {
                return Ok(Self::from_gen(base, ext, x));
            }
        }
        unreachable!("the subfield of the stated degree always exists")
    }

    fn from_gen(base: &Field, ext: &Field, g: FqElem) -> FieldEmbedding {
        let mut gen_powers = Vec::with_capacity(base.r());
        let mut acc = FqElem::one(ext);
        for _ in 0..base.r() {
            gen_powers.push(acc.clone());
            acc = acc.mul(&g);
        }
        FieldEmbedding {
            base: base.clone(),
            ext: ext.clone(),
            gen_powers,
        }
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn ext(&self) -> &Field {
        &self.ext
    }

    pub fn embed(&self, x: &FqElem) -> FqElem {
        assert!(FieldSpec::same(x.field(), &self.base));
        let mut val = FqElem::zero(&self.ext);
        for (c, gp) in x.coeffs().iter().zip(&self.gen_powers) {
            val = val.add(&gp.scale(*c));
        }
        val
    }
}
