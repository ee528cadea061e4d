//! Exact matrix algorithms over the Euclidean domain F_q[t]: determinant,
//! Smith normal form with a faithful log of elementary operations,
//! unimodular inversion and row completion, kernel bases, and the Hermite
//! canonical form used to compare row modules. A small companion type
//! handles plain linear algebra over F_q itself.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FqElem};
use crate::polyring::UniPoly;

/// Dense matrix over F_q[t], row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<UniPoly>,
}

impl PolyMatrix {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix {
            field: field.clone(),
            rows,
            cols,
            entries: vec![UniPoly::zero(field); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, UniPoly::one(field));
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<UniPoly>>) -> Result<PolyMatrix> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged matrix".into()));
        }
        Ok(PolyMatrix {
            field: field.clone(),
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(
        field: &Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> UniPoly,
    ) -> PolyMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix {
            field: field.clone(),
            rows,
            cols,
            entries,
        }
    }

    /// Constant matrix lifted into F_q[t].
    pub fn from_constant(m: &FqMatrix) -> PolyMatrix {
        PolyMatrix::from_fn(m.field(), m.rows(), m.cols(), |i, j| {
            UniPoly::constant(m.get(i, j).clone())
        })
    }

    /// The converse of [`PolyMatrix::from_constant`]: succeeds when every
    /// entry has t-degree at most 0.
    pub fn to_constant(&self) -> Option<FqMatrix> {
        if self.entries.iter().any(|e| e.degree().is_some_and(|d| d > 0)) {
            return None;
        }
        Some(FqMatrix::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.get(i, j).coeff(0)
        }))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &UniPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: UniPoly) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.get(i, j).is_one()
                    } else {
                        self.get(i, j).is_zero()
                    }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Largest t-degree appearing in the matrix; `None` for the zero matrix.
    pub fn max_degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(|e| e.degree()).max()
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        PolyMatrix::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.get(i, j).add(other.get(i, j))
        })
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        PolyMatrix::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.get(i, j).sub(other.get(i, j))
        })
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        PolyMatrix::from_fn(&self.field, self.rows, other.cols, |i, j| {
            let mut acc = UniPoly::zero(&self.field);
            for k in 0..self.cols {
                acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
            }
            acc
        })
    }

    pub fn transpose(&self) -> PolyMatrix {
        PolyMatrix::from_fn(&self.field, self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn pow(&self, mut e: u64) -> PolyMatrix {
        assert!(self.is_square());
        let mut acc = PolyMatrix::identity(&self.field, self.rows);
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

    /// Evaluates a polynomial with coefficients in F_q at this matrix.
    pub fn eval_poly(&self, f: &UniPoly) -> PolyMatrix {
        assert!(self.is_square());
        let n = self.rows;
        let mut acc = PolyMatrix::zero(&self.field, n, n);
        for c in f.coeffs().iter().rev() {
            acc = acc.mul(self);
            for i in 0..n {
                let v = acc.get(i, i).add(&UniPoly::constant(c.clone()));
                acc.set(i, i, v);
            }
        }
        acc
    }

    /// Places `blocks` on the diagonal, zero elsewhere.
    pub fn block_diagonal(field: &Field, blocks: &[PolyMatrix]) -> PolyMatrix {
        let n: usize = blocks.iter().map(|b| b.rows()).sum();
        let m: usize = blocks.iter().map(|b| b.cols()).sum();
        let mut out = PolyMatrix::zero(field, n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows();
            c0 += b.cols();
        }
        out
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix::from_fn(&self.field, rows, cols, |i, j| {
            self.get(r0 + i, c0 + j).clone()
        })
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<UniPoly> {
        if !self.is_square() {
            return Err(Error::NotSquare);
        }
        let n = self.rows;
        if n == 0 {
            return Ok(UniPoly::one(&self.field));
        }
        let mut a = self.clone();
        let mut negate = false;
        let mut prev = UniPoly::one(&self.field);
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            let x = a.get(k, j).clone();
                            let y = a.get(i, j).clone();
                            a.set(k, j, y);
                            a.set(i, j, x);
                        }
                        negate = !negate;
                    }
                    None => return Ok(UniPoly::zero(&self.field)),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a
                        .get(k, k)
                        .mul(a.get(i, j))
                        .sub(&a.get(i, k).mul(a.get(k, j)));
                    a.set(i, j, num.div_exact(&prev));
                }
                a.set(i, k, UniPoly::zero(&self.field));
            }
            prev = a.get(k, k).clone();
        }
        let d = a.get(n - 1, n - 1).clone();
        Ok(if negate { d.neg() } else { d })
    }

    /// True when the determinant is a nonzero constant, i.e. the matrix is
    /// invertible over F_q[t].
    pub fn is_unimodular(&self) -> bool {
        self.det().is_ok_and(|d| d.is_unit())
    }

    /// Parses the `row; row` / `entry, entry` text format.
    pub fn parse(field: &Field, text: &str) -> Result<PolyMatrix> {
        let mut rows = Vec::new();
        for row_text in text.split(';') {
            let mut row = Vec::new();
            for entry in row_text.split(',') {
                row.push(UniPoly::parse(field, entry.trim())?);
            }
            rows.push(row);
        }
        PolyMatrix::from_rows(field, rows)
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Elementary operations and Smith normal form

/// Invertible elementary row/column operation over F_q[t].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementaryOp {
    /// row dst += coef * row src
    AddRow {
        dst: usize,
        src: usize,
        coef: UniPoly,
    },
    SwapRows(usize, usize),
    /// row *= by, with by a nonzero constant
    ScaleRow { row: usize, by: FqElem },
    /// col dst += coef * col src
    AddCol {
        dst: usize,
        src: usize,
        coef: UniPoly,
    },
    SwapCols(usize, usize),
    ScaleCol { col: usize, by: FqElem },
}

impl ElementaryOp {
    pub fn is_row_op(&self) -> bool {
        matches!(
            self,
            ElementaryOp::AddRow { .. } | ElementaryOp::SwapRows(..) | ElementaryOp::ScaleRow { .. }
        )
    }

    pub fn apply(&self, m: &mut PolyMatrix) {
        match self {
            ElementaryOp::AddRow { dst, src, coef } => {
                for j in 0..m.cols() {
                    let v = m.get(*dst, j).add(&m.get(*src, j).mul(coef));
                    m.set(*dst, j, v);
                }
            }
            ElementaryOp::SwapRows(a, b) => {
                for j in 0..m.cols() {
                    let x = m.get(*a, j).clone();
                    let y = m.get(*b, j).clone();
                    m.set(*a, j, y);
                    m.set(*b, j, x);
                }
            }
            ElementaryOp::ScaleRow { row, by } => {
                for j in 0..m.cols() {
                    let v = m.get(*row, j).scale(by);
                    m.set(*row, j, v);
                }
            }
            ElementaryOp::AddCol { dst, src, coef } => {
                for i in 0..m.rows() {
                    let v = m.get(i, *dst).add(&m.get(i, *src).mul(coef));
                    m.set(i, *dst, v);
                }
            }
            ElementaryOp::SwapCols(a, b) => {
                for i in 0..m.rows() {
                    let x = m.get(i, *a).clone();
                    let y = m.get(i, *b).clone();
                    m.set(i, *a, y);
                    m.set(i, *b, x);
                }
            }
            ElementaryOp::ScaleCol { col, by } => {
                for i in 0..m.rows() {
                    let v = m.get(i, *col).scale(by);
                    m.set(i, *col, v);
                }
            }
        }
    }

    pub fn inverse(&self) -> ElementaryOp {
        match self {
            ElementaryOp::AddRow { dst, src, coef } => ElementaryOp::AddRow {
                dst: *dst,
                src: *src,
                coef: coef.neg(),
            },
            ElementaryOp::SwapRows(a, b) => ElementaryOp::SwapRows(*a, *b),
            ElementaryOp::ScaleRow { row, by } => ElementaryOp::ScaleRow {
                row: *row,
                by: by.inv().expect("scale factor is nonzero"),
            },
            ElementaryOp::AddCol { dst, src, coef } => ElementaryOp::AddCol {
                dst: *dst,
                src: *src,
                coef: coef.neg(),
            },
            ElementaryOp::SwapCols(a, b) => ElementaryOp::SwapCols(*a, *b),
            ElementaryOp::ScaleCol { col, by } => ElementaryOp::ScaleCol {
                col: *col,
                by: by.inv().expect("scale factor is nonzero"),
            },
        }
    }
}

/// Smith normal form `left * A * right = diag`, with the elementary
/// operations that produced it. Replaying `ops_left` then `ops_right` on A
/// reproduces `diag` exactly.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub left: PolyMatrix,
    pub diag: PolyMatrix,
    pub right: PolyMatrix,
    pub ops_left: Vec<ElementaryOp>,
    pub ops_right: Vec<ElementaryOp>,
}

impl SnfResult {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        (0..self.diag.rows().min(self.diag.cols()))
            .take_while(|&k| !self.diag.get(k, k).is_zero())
            .count()
    }

    pub fn diagonal_entries(&self) -> Vec<UniPoly> {
        (0..self.diag.rows().min(self.diag.cols()))
            .map(|k| self.diag.get(k, k).clone())
            .collect()
    }
}

struct SnfState {
    d: PolyMatrix,
    left: PolyMatrix,
    right: PolyMatrix,
    ops_left: Vec<ElementaryOp>,
    ops_right: Vec<ElementaryOp>,
}

impl SnfState {
    fn apply(&mut self, op: ElementaryOp) {
        op.apply(&mut self.d);
        if op.is_row_op() {
            op.apply(&mut self.left);
            self.ops_left.push(op);
        } else {
            op.apply(&mut self.right);
            self.ops_right.push(op);
        }
    }

    /// Minimal-degree nonzero entry of the trailing submatrix, ties broken
    /// by smallest (row, column).
    fn find_pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in k..self.d.rows() {
            for j in k..self.d.cols() {
                if let Some(deg) = self.d.get(i, j).degree() {
                    if best.is_none_or(|(bd, _, _)| deg < bd) {
                        best = Some((deg, i, j));
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    /// Brings the trailing submatrix starting at (start, start) to diagonal
    /// form.
    fn diagonalize_from(&mut self, start: usize) {
        let limit = self.d.rows().min(self.d.cols());
        for k in start..limit {
            loop {
                let Some((pi, pj)) = self.find_pivot(k) else {
                    return; // all remaining entries vanish
                };
                if pi != k {
                    self.apply(ElementaryOp::SwapRows(k, pi));
                }
                if pj != k {
                    self.apply(ElementaryOp::SwapCols(k, pj));
                }
                let mut clean = true;
                for i in k + 1..self.d.rows() {
                    if self.d.get(i, k).is_zero() {
                        continue;
                    }
                    let (q, r) = self.d.get(i, k).divmod(self.d.get(k, k)).unwrap();
                    if !q.is_zero() {
                        self.apply(ElementaryOp::AddRow {
                            dst: i,
                            src: k,
                            coef: q.neg(),
                        });
                    }
                    if !r.is_zero() {
                        clean = false;
                    }
                }
                for j in k + 1..self.d.cols() {
                    if self.d.get(k, j).is_zero() {
                        continue;
                    }
                    let (q, r) = self.d.get(k, j).divmod(self.d.get(k, k)).unwrap();
                    if !q.is_zero() {
                        self.apply(ElementaryOp::AddCol {
                            dst: j,
                            src: k,
                            coef: q.neg(),
                        });
                    }
                    if !r.is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    break;
                }
            }
        }
    }
}

/// Smith normal form over F_q[t]. Fully deterministic: the pivot is always
/// the nonzero entry of minimal degree with ties broken by smallest
/// (row, column); diagonal entries come out monic, nonzero first, each one
/// dividing the next.
pub fn smith_normal_form(a: &PolyMatrix) -> SnfResult {
    let field = a.field().clone();
    let mut st = SnfState {
        d: a.clone(),
        left: PolyMatrix::identity(&field, a.rows()),
        right: PolyMatrix::identity(&field, a.cols()),
        ops_left: vec![],
        ops_right: vec![],
    };
    st.diagonalize_from(0);
    // divisibility chain: after settling position k, d_k divides every
    // later diagonal entry
    let limit = a.rows().min(a.cols());
    let mut k = 0;
    while k < limit {
        if st.d.get(k, k).is_zero() {
            break;
        }
        let offender = (k + 1..limit).find(|&l| {
            let dl = st.d.get(l, l);
            !dl.is_zero() && !dl.rem(st.d.get(k, k)).is_zero()
        });
        match offender {
            Some(l) => {
                st.apply(ElementaryOp::AddRow {
                    dst: k,
                    src: l,
                    coef: UniPoly::one(&field),
                });
                st.diagonalize_from(k);
            }
            None => k += 1,
        }
    }
    // monic normalization
    for k in 0..limit {
        if let Some(lc) = st.d.get(k, k).leading_coeff() {
            if !lc.is_one() {
                let by = lc.inv().expect("leading coefficient is nonzero");
                st.apply(ElementaryOp::ScaleRow { row: k, by });
            }
        }
    }
    debug_assert_eq!(st.left.clone().mul(a).mul(&st.right), st.d);
    SnfResult {
        left: st.left,
        diag: st.d,
        right: st.right,
        ops_left: st.ops_left,
        ops_right: st.ops_right,
    }
}

/// Inverse of a matrix with unit determinant; fails with `NotUnimodular`
/// otherwise.
pub fn inverse_unimodular(a: &PolyMatrix) -> Result<PolyMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare);
    }
    let snf = smith_normal_form(a);
    if !snf.diag.is_identity() {
        return Err(Error::NotUnimodular);
    }
    // left * A * right = I, so A^(-1) = right * left
    let inv = snf.right.mul(&snf.left);
    debug_assert!(inv.mul(a).is_identity() && a.mul(&inv).is_identity());
    Ok(inv)
}

/// Completes a row with unit entry-gcd to a square matrix with unit
/// determinant whose first row is the given one verbatim.
pub fn complete_unimodular_row(row: &[UniPoly]) -> Result<PolyMatrix> {
    assert!(!row.is_empty());
    let field = row[0].field().clone();
    let n = row.len();
    let mat = PolyMatrix::from_rows(&field, vec![row.to_vec()])?;
    let snf = smith_normal_form(&mat);
    // row * right = (u, 0, ..., 0); the row is unimodular iff u is a unit
    let reduced = mat.mul(&snf.right);
    let u = reduced.get(0, 0);
    if !u.is_unit() || (1..n).any(|j| !reduced.get(0, j).is_zero()) {
        return Err(Error::NotUnimodularRow);
    }
    let right_inv = inverse_unimodular(&snf.right)?;
    // the first row of right_inv is u^(-1) * row; rescale so the completion
    // contains the row itself
    let mut completion = right_inv;
    let scale = UniPoly::constant(u.coeff(0));
    for j in 0..n {
        let v = completion.get(0, j).mul(&scale);
        completion.set(0, j, v);
    }
    for (j, entry) in row.iter().enumerate() {
        debug_assert_eq!(completion.get(0, j), entry);
    }
    debug_assert!(completion.is_unimodular());
    Ok(completion)
}

/// Free-module basis of the right kernel { v : A v = 0 }.
/// Returns an empty list when the kernel is trivial.
pub fn kernel_basis(a: &PolyMatrix) -> Vec<Vec<UniPoly>> {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    (rank..a.cols())
        .map(|j| (0..a.cols()).map(|i| snf.right.get(i, j).clone()).collect())
        .collect()
}

/// Kernel basis together with a unimodular matrix whose first
/// `rank(kernel)` columns are that basis.
pub fn kernel_with_completion(a: &PolyMatrix) -> (Vec<Vec<UniPoly>>, PolyMatrix) {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let n = a.cols();
    let field = a.field().clone();
    let basis: Vec<Vec<UniPoly>> = (rank..n)
        .map(|j| (0..n).map(|i| snf.right.get(i, j).clone()).collect())
        .collect();
    // a cyclic column permutation putting the kernel columns first keeps
    // the matrix unimodular
    let full = PolyMatrix::from_fn(&field, n, n, |i, j| {
        let src = (j + rank) % n;
        snf.right.get(i, src).clone()
    });
    (basis, full)
}

/// Canonical row Hermite normal form: row echelon with monic pivots,
/// entries above each pivot reduced, zero rows at the bottom. Two matrices
/// span the same row module over F_q[t] iff their Hermite forms agree
/// after dropping zero rows.
pub fn hermite_normal_form(a: &PolyMatrix) -> PolyMatrix {
    let mut h = a.clone();
    let (rows, cols) = (h.rows(), h.cols());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // gcd-reduce column c below row r
        loop {
            let pivot = (r..rows)
                .filter(|&i| !h.get(i, c).is_zero())
                .min_by_key(|&i| (h.get(i, c).degree().unwrap(), i));
            let Some(pi) = pivot else { break };
            if pi != r {
                ElementaryOp::SwapRows(r, pi).apply(&mut h);
            }
            let mut again = false;
            for i in r + 1..rows {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let (q, rem) = h.get(i, c).divmod(h.get(r, c)).unwrap();
                ElementaryOp::AddRow {
                    dst: i,
                    src: r,
                    coef: q.neg(),
                }
                .apply(&mut h);
                if !rem.is_zero() {
                    again = true;
                }
            }
            if !again {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        let lc = h.get(r, c).leading_coeff().unwrap().clone();
        if !lc.is_one() {
            ElementaryOp::ScaleRow {
                row: r,
                by: lc.inv().unwrap(),
            }
            .apply(&mut h);
        }
        for i in 0..r {
            if h.get(i, c).is_zero() {
                continue;
            }
            let (q, _) = h.get(i, c).divmod(h.get(r, c)).unwrap();
            if !q.is_zero() {
                ElementaryOp::AddRow {
                    dst: i,
                    src: r,
                    coef: q.neg(),
                }
                .apply(&mut h);
            }
        }
        r += 1;
    }
    h
}

/// Nonzero rows of the Hermite form; a canonical label for the row module.
pub fn row_module_canonical(a: &PolyMatrix) -> Vec<Vec<UniPoly>> {
    let h = hermite_normal_form(a);
    (0..h.rows())
        .filter(|&i| (0..h.cols()).any(|j| !h.get(i, j).is_zero()))
        .map(|i| (0..h.cols()).map(|j| h.get(i, j).clone()).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// Constant matrices over F_q

/// Dense matrix over F_q itself, used for linear factors, companion blocks
/// and the F_q-linear algebra behind minimal polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<FqElem>,
}

impl FqMatrix {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> FqMatrix {
        FqMatrix {
            field: field.clone(),
            rows,
            cols,
            entries: vec![FqElem::zero(field); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> FqMatrix {
        let mut m = FqMatrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, FqElem::one(field));
        }
        m
    }

    pub fn from_fn(
        field: &Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FqElem,
    ) -> FqMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        FqMatrix {
            field: field.clone(),
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<FqElem>>) -> Result<FqMatrix> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged matrix".into()));
        }
        Ok(FqMatrix {
            field: field.clone(),
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FqElem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FqElem) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, other.rows);
        FqMatrix::from_fn(&self.field, self.rows, other.cols, |i, j| {
            let mut acc = FqElem::zero(&self.field);
            for k in 0..self.cols {
                acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
            }
            acc
        })
    }

    pub fn pow(&self, mut e: u64) -> FqMatrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = FqMatrix::identity(&self.field, self.rows);
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

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.get(i, j).is_one()
                    } else {
                        self.get(i, j).is_zero()
                    }
                })
            })
    }

    pub fn det(&self) -> Result<FqElem> {
        if self.rows != self.cols {
            return Err(Error::NotSquare);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = FqElem::one(&self.field);
        for k in 0..n {
            let Some(pi) = (k..n).find(|&i| !a.get(i, k).is_zero()) else {
                return Ok(FqElem::zero(&self.field));
            };
            if pi != k {
                for j in 0..n {
                    let x = a.get(k, j).clone();
                    let y = a.get(pi, j).clone();
                    a.set(k, j, y);
                    a.set(pi, j, x);
                }
                det = det.neg();
            }
            let pinv = a.get(k, k).inv().unwrap();
            det = det.mul(a.get(k, k));
            for i in k + 1..n {
                let factor = a.get(i, k).mul(&pinv);
                for j in k..n {
                    let v = a.get(i, j).sub(&factor.mul(a.get(k, j)));
                    a.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<FqMatrix> {
        if self.rows != self.cols {
            return Err(Error::NotSquare);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = FqMatrix::identity(&self.field, n);
        for k in 0..n {
            let pi = (k..n)
                .find(|&i| !a.get(i, k).is_zero())
                .ok_or(Error::NotUnimodular)?;
            if pi != k {
                for j in 0..n {
                    let x = a.get(k, j).clone();
                    a.set(k, j, a.get(pi, j).clone());
                    a.set(pi, j, x);
                    let x = inv.get(k, j).clone();
                    inv.set(k, j, inv.get(pi, j).clone());
                    inv.set(pi, j, x);
                }
            }
            let pinv = a.get(k, k).inv().unwrap();
            for j in 0..n {
                let v = a.get(k, j).mul(&pinv);
                a.set(k, j, v);
                let v = inv.get(k, j).mul(&pinv);
                inv.set(k, j, v);
            }
            for i in 0..n {
                if i == k || a.get(i, k).is_zero() {
                    continue;
                }
                let factor = a.get(i, k).clone();
                for j in 0..n {
                    let v = a.get(i, j).sub(&factor.mul(a.get(k, j)));
                    a.set(i, j, v);
                    let v = inv.get(i, j).sub(&factor.mul(inv.get(k, j)));
                    inv.set(i, j, v);
                }
            }
        }
        Ok(inv)
    }

    /// Basis of the right kernel over the field.
    pub fn kernel(&self) -> Vec<Vec<FqElem>> {
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pi) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            if pi != r {
                for j in 0..cols {
                    let x = a.get(r, j).clone();
                    a.set(r, j, a.get(pi, j).clone());
                    a.set(pi, j, x);
                }
            }
            let pinv = a.get(r, c).inv().unwrap();
            for j in 0..cols {
                let v = a.get(r, j).mul(&pinv);
                a.set(r, j, v);
            }
            for i in 0..rows {
                if i == r || a.get(i, c).is_zero() {
                    continue;
                }
                let factor = a.get(i, c).clone();
                for j in 0..cols {
                    let v = a.get(i, j).sub(&factor.mul(a.get(r, j)));
                    a.set(i, j, v);
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
        free_cols
            .iter()
            .map(|&fc| {
                let mut v = vec![FqElem::zero(&self.field); cols];
                v[fc] = FqElem::one(&self.field);
                for (row, &pc) in pivot_cols.iter().enumerate() {
                    v[pc] = a.get(row, fc).neg();
                }
                v
            })
            .collect()
    }

    pub fn block_diagonal(field: &Field, blocks: &[FqMatrix]) -> FqMatrix {
        let n: usize = blocks.iter().map(|b| b.rows()).sum();
        let m: usize = blocks.iter().map(|b| b.cols()).sum();
        let mut out = FqMatrix::zero(field, n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows();
            c0 += b.cols();
        }
        out
    }

    pub fn transpose(&self) -> FqMatrix {
        FqMatrix::from_fn(&self.field, self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }
}

impl fmt::Display for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        Ok(())
    }
}
