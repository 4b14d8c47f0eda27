use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// Dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::MalformedMatrix(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix {
            rows,
            cols,
            data: entries,
        })
    }

    /// Convenience constructor from machine integers.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&e| BigInt::from(e)))
            .collect();
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn diagonal(diag: &[BigInt]) -> Self {
        let n = diag.len();
        let mut m = IntMatrix::zero(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n + i] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.at(i, j).clone();
            }
        }
        out
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.at(k, j);
                    if !b.is_zero() {
                        let cur = out.at(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols, "dimension mismatch in apply");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for j in 0..self.cols {
                    let a = self.at(i, j);
                    if !a.is_zero() && !x[j].is_zero() {
                        acc += a * &x[j];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        let data = self.data.iter().map(|e| e * c).collect();
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn add(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a + b)
            .collect();
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a - b)
            .collect();
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            if !self.data[idx].is_zero() {
                let v = -std::mem::take(&mut self.data[idx]);
                self.data[idx] = v;
            }
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let idx = i * self.cols + j;
            if !self.data[idx].is_zero() {
                let v = -std::mem::take(&mut self.data[idx]);
                self.data[idx] = v;
            }
        }
    }

    /// row[target] += q * row[source]
    fn row_op(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self.data[source * self.cols + j].clone();
            if !s.is_zero() {
                let idx = target * self.cols + j;
                self.data[idx] += q * s;
            }
        }
    }

    /// col[target] += q * col[source]
    fn col_op(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.data[i * self.cols + source].clone();
            if !s.is_zero() {
                let idx = i * self.cols + target;
                self.data[idx] += q * s;
            }
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant needs a square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut w = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if w.at(k, k).is_zero() {
                let pivot = (k + 1..n).find(|&i| !w.at(i, k).is_zero());
                match pivot {
                    Some(i) => {
                        w.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j);
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    w.set(i, j, q);
                }
            }
            for i in k + 1..n {
                w.set(i, k, BigInt::zero());
            }
            prev = w.at(k, k).clone();
        }
        sign * w.at(n - 1, n - 1).clone()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Which change-of-basis matrices `smith_with` should track.
#[derive(Clone, Copy, Default)]
pub(crate) struct Transforms {
    pub u: bool,
    pub u_inv: bool,
    pub v: bool,
    pub v_inv: bool,
}

impl Transforms {
    pub fn all() -> Self {
        Transforms {
            u: true,
            u_inv: true,
            v: true,
            v_inv: true,
        }
    }
}

/// Result of a Smith reduction `U * A * V = D`.
pub(crate) struct SmithForm {
    pub rank: usize,
    /// The min(rows, cols) diagonal entries of D; nonnegative, divisibility
    /// chain on the nonzero prefix, zeros trailing.
    pub diag: Vec<BigInt>,
    pub u: Option<IntMatrix>,
    pub u_inv: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub v_inv: Option<IntMatrix>,
}

struct SmithWork {
    w: IntMatrix,
    u: Option<IntMatrix>,
    u_inv: Option<IntMatrix>,
    v: Option<IntMatrix>,
    v_inv: Option<IntMatrix>,
}

impl SmithWork {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.w.swap_rows(a, b);
        if let Some(u) = &mut self.u {
            u.swap_rows(a, b);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.swap_cols(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.w.swap_cols(a, b);
        if let Some(v) = &mut self.v {
            v.swap_cols(a, b);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.swap_rows(a, b);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.w.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.negate_col(i);
        }
    }

    /// row[i] += q * row[t]
    fn row_op(&mut self, i: usize, t: usize, q: &BigInt) {
        self.w.row_op(i, t, q);
        if let Some(u) = &mut self.u {
            u.row_op(i, t, q);
        }
        if let Some(ui) = &mut self.u_inv {
            // (U^-1 E^-1): col[t] -= q * col[i]
            let nq = -q;
            ui.col_op(t, i, &nq);
        }
    }

    /// col[j] += q * col[t]
    fn col_op(&mut self, j: usize, t: usize, q: &BigInt) {
        self.w.col_op(j, t, q);
        if let Some(v) = &mut self.v {
            v.col_op(j, t, q);
        }
        if let Some(vi) = &mut self.v_inv {
            let nq = -q;
            vi.row_op(t, j, &nq);
        }
    }
}

/// Smith normal form with selectable transform tracking.
pub(crate) fn smith_with(a: &IntMatrix, want: Transforms) -> SmithForm {
    let (r, c) = (a.rows(), a.cols());
    let mut s = SmithWork {
        w: a.clone(),
        u: want.u.then(|| IntMatrix::identity(r)),
        u_inv: want.u_inv.then(|| IntMatrix::identity(r)),
        v: want.v.then(|| IntMatrix::identity(c)),
        v_inv: want.v_inv.then(|| IntMatrix::identity(c)),
    };
    let bound = r.min(c);
    let mut rank = 0;

    for t in 0..bound {
        // Pivot search over the trailing submatrix: smallest absolute value,
        // early exit on a unit.
        let mut pivot: Option<(usize, usize)> = None;
        let mut best: Option<BigInt> = None;
        'search: for i in t..r {
            for j in t..c {
                let e = s.w.at(i, j);
                if e.is_zero() {
                    continue;
                }
                let mag = e.abs();
                if best.as_ref().is_none_or(|b| mag < *b) {
                    let unit = mag.is_one();
                    pivot = Some((i, j));
                    best = Some(mag);
                    if unit {
                        break 'search;
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        s.swap_rows(t, pi);
        s.swap_cols(t, pj);
        if s.w.at(t, t).is_negative() {
            s.negate_row(t);
        }

        // Clear row t and column t; each remainder swap strictly shrinks the
        // pivot, so this terminates.
        loop {
            let mut clean = true;
            for i in t + 1..r {
                if s.w.at(i, t).is_zero() {
                    continue;
                }
                let (q, rem) = s.w.at(i, t).div_mod_floor(s.w.at(t, t));
                let nq = -q;
                s.row_op(i, t, &nq);
                if !rem.is_zero() {
                    s.swap_rows(t, i);
                    if s.w.at(t, t).is_negative() {
                        s.negate_row(t);
                    }
                    clean = false;
                }
            }
            for j in t + 1..c {
                if s.w.at(t, j).is_zero() {
                    continue;
                }
                let (q, rem) = s.w.at(t, j).div_mod_floor(s.w.at(t, t));
                let nq = -q;
                s.col_op(j, t, &nq);
                if !rem.is_zero() {
                    s.swap_cols(t, j);
                    clean = false;
                }
                if s.w.at(t, t).is_negative() {
                    s.negate_row(t);
                }
            }
            if clean && (t + 1..r).all(|i| s.w.at(i, t).is_zero()) {
                break;
            }
        }
        rank = t + 1;
    }

    // Enforce the divisibility chain d_1 | d_2 | ... on the diagonal.
    loop {
        let mut changed = false;
        for i in 0..rank.saturating_sub(1) {
            for j in i + 1..rank {
                let di = s.w.at(i, i).clone();
                let dj = s.w.at(j, j).clone();
                if (&dj % &di).is_zero() {
                    continue;
                }
                fix_diagonal_pair(&mut s, i, j);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let diag: Vec<BigInt> = (0..bound).map(|i| s.w.at(i, i).clone()).collect();
    debug_assert!(diag.iter().take(rank).all(|d| d.is_positive()));
    SmithForm {
        rank,
        diag,
        u: s.u,
        u_inv: s.u_inv,
        v: s.v,
        v_inv: s.v_inv,
    }
}

/// Replace diag entries (a, b) at positions (i, j) by (gcd, lcm) with
/// unimodular row/column operations touching only rows/cols i and j.
fn fix_diagonal_pair(s: &mut SmithWork, i: usize, j: usize) {
    // Bring b alongside a: row i gains the entry b at column j.
    s.row_op(i, j, &BigInt::one());
    // Euclid between columns i and j on row i. Row j entries stay multiples
    // of b, so the final cleanup division is exact.
    loop {
        let ai = s.w.at(i, i).clone();
        let aj = s.w.at(i, j).clone();
        if aj.is_zero() {
            break;
        }
        if ai.is_zero() {
            s.swap_cols(i, j);
            continue;
        }
        let (q, _) = ai.div_mod_floor(&aj);
        // reduce the larger by the smaller
        if ai.abs() >= aj.abs() {
            let nq = -q;
            s.col_op(i, j, &nq);
        } else {
            let (q2, _) = aj.div_mod_floor(&ai);
            let nq2 = -q2;
            s.col_op(j, i, &nq2);
        }
    }
    if s.w.at(i, i).is_negative() {
        s.negate_row(i);
    }
    // Clear the stray entries in rows i/j at columns i/j.
    let g = s.w.at(i, i).clone();
    let low = s.w.at(j, i).clone();
    if !low.is_zero() {
        let (q, rem) = low.div_mod_floor(&g);
        debug_assert!(rem.is_zero(), "pair fix left a non-multiple below the gcd");
        let nq = -q;
        s.row_op(j, i, &nq);
    }
    if s.w.at(j, j).is_negative() {
        s.negate_row(j);
    }
    debug_assert!(s.w.at(i, j).is_zero() && s.w.at(j, i).is_zero());
}

/// Smith normal form: returns (U, D, V) with U*A*V = D, U and V unimodular,
/// D diagonal with d_1 | d_2 | ... and zero diagonal entries trailing.
pub fn smith_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let form = smith_with(
        a,
        Transforms {
            u: true,
            u_inv: false,
            v: true,
            v_inv: false,
        },
    );
    let mut d = IntMatrix::zero(a.rows(), a.cols());
    for (i, e) in form.diag.iter().enumerate() {
        d.set(i, i, e.clone());
    }
    (form.u.unwrap(), d, form.v.unwrap())
}
