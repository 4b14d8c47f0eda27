//! Subquotient engine: presents (kernel of congruence constraints)/(span of
//! denominator columns) of Z^N over a finite ambient group, entirely through
//! Smith reductions of accumulated echelon forms.
//!
//! Constraint rows and denominator columns are streamed sparsely, so the
//! working set scales with the number of ambient generators, never with the
//! (much larger) number of constraints.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

use super::group::FinAbGroup;
use super::matrix::{smith_with, IntMatrix, Transforms};
use crate::error::{Error, Result};

/// Sparse integer vector: (index, value) pairs sorted by index, values nonzero.
pub(crate) type SparseVec = Vec<(usize, BigInt)>;

pub(crate) fn sparse_from_dense(v: &[BigInt]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, e)| !e.is_zero())
        .map(|(i, e)| (i, e.clone()))
        .collect()
}

fn dense_from_sparse(v: &SparseVec, n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for (i, e) in v {
        out[*i] = e.clone();
    }
    out
}

/// a + q*b over sorted sparse vectors; entries reduced mod m unless m == 1.
fn sparse_axpy(a: &SparseVec, q: &BigInt, b: &SparseVec, m: &BigInt) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let (idx, val) = match (a.get(i), b.get(j)) {
            (Some((ia, va)), Some((ib, vb))) => {
                if ia < ib {
                    i += 1;
                    (*ia, va.clone())
                } else if ib < ia {
                    j += 1;
                    (*ib, q * vb)
                } else {
                    i += 1;
                    j += 1;
                    (*ia, va + q * vb)
                }
            }
            (Some((ia, va)), None) => {
                i += 1;
                (*ia, va.clone())
            }
            (None, Some((ib, vb))) => {
                j += 1;
                (*ib, q * vb)
            }
            (None, None) => unreachable!(),
        };
        let val = if m.is_one() { val } else { val.mod_floor(m) };
        if !val.is_zero() {
            out.push((idx, val));
        }
    }
    out
}

fn sparse_scale(a: &SparseVec, c: &BigInt, m: &BigInt) -> SparseVec {
    a.iter()
        .filter_map(|(i, v)| {
            let w = if m.is_one() { v * c } else { (v * c).mod_floor(m) };
            (!w.is_zero()).then_some((*i, w))
        })
        .collect()
}

/// Row echelon accumulator modulo a uniform modulus. The represented object
/// is the congruence system {r . x = 0 (mod m)} spanned by the inserted
/// rows; unimodular pair operations and shifts by m*e_j keep it invariant.
pub(crate) struct RowEchelon {
    modulus: BigInt,
    /// lead column -> row
    rows: BTreeMap<usize, SparseVec>,
}

impl RowEchelon {
    pub fn new(modulus: BigInt) -> Self {
        assert!(modulus.is_positive());
        RowEchelon {
            modulus,
            rows: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, row: SparseVec) {
        let m = self.modulus.clone();
        let mut cur: SparseVec = row
            .into_iter()
            .filter_map(|(i, v)| {
                let w = v.mod_floor(&m);
                (!w.is_zero()).then_some((i, w))
            })
            .collect();
        while let Some((lead, lv)) = cur.first().cloned() {
            let Some(pivot_row) = self.rows.get(&lead) else {
                self.rows.insert(lead, cur);
                return;
            };
            let pv = pivot_row[0].1.clone();
            if (&lv % &pv).is_zero() {
                let q = -(&lv / &pv);
                cur = sparse_axpy(&cur, &q, pivot_row, &m);
            } else {
                // unimodular 2x2: (pivot, cur) -> (gcd combination, remainder)
                let e = pv.extended_gcd(&lv);
                let pivot_row = pivot_row.clone();
                let new_pivot = sparse_axpy(&sparse_scale(&pivot_row, &e.x, &m), &e.y, &cur, &m);
                let rem = sparse_axpy(
                    &sparse_scale(&cur, &(&pv / &e.gcd), &m),
                    &-(&lv / &e.gcd),
                    &pivot_row,
                    &m,
                );
                debug_assert_eq!(new_pivot.first().map(|p| p.0), Some(lead));
                self.rows.insert(lead, new_pivot);
                cur = rem;
            }
            debug_assert!(cur.first().is_none_or(|(i, _)| *i > lead));
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = (&usize, &SparseVec)> {
        self.rows.iter()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }
}

/// Machine-word variant of the row accumulator for small moduli; constraint
/// rows live entirely in Z/m, so u64 arithmetic loses nothing.
struct SmallEchelon {
    m: u64,
    rows: BTreeMap<usize, Vec<(usize, u64)>>,
}

fn axpy64(a: &[(usize, u64)], q: u64, b: &[(usize, u64)], m: u64) -> Vec<(usize, u64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let (idx, val) = match (a.get(i), b.get(j)) {
            (Some(&(ia, va)), Some(&(ib, vb))) => {
                if ia < ib {
                    i += 1;
                    (ia, va)
                } else if ib < ia {
                    j += 1;
                    (ib, q * vb % m)
                } else {
                    i += 1;
                    j += 1;
                    ((ia), (va + q * vb) % m)
                }
            }
            (Some(&(ia, va)), None) => {
                i += 1;
                (ia, va)
            }
            (None, Some(&(ib, vb))) => {
                j += 1;
                (ib, q * vb % m)
            }
            (None, None) => unreachable!(),
        };
        if val != 0 {
            out.push((idx, val));
        }
    }
    out
}

fn scale64(a: &[(usize, u64)], c: u64, m: u64) -> Vec<(usize, u64)> {
    a.iter()
        .filter_map(|&(i, v)| {
            let w = v * c % m;
            (w != 0).then_some((i, w))
        })
        .collect()
}

fn xgcd64(a: u64, b: u64) -> (u64, i128, i128) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 as u64, s0, t0)
}

impl SmallEchelon {
    fn new(m: u64) -> Self {
        assert!(m > 1 && m <= u32::MAX as u64);
        SmallEchelon {
            m,
            rows: BTreeMap::new(),
        }
    }

    fn insert(&mut self, row: Vec<(usize, u64)>) {
        let m = self.m;
        let mut cur: Vec<(usize, u64)> = row
            .into_iter()
            .filter_map(|(i, v)| {
                let w = v % m;
                (w != 0).then_some((i, w))
            })
            .collect();
        while let Some(&(lead, lv)) = cur.first() {
            let Some(pivot_row) = self.rows.get(&lead) else {
                self.rows.insert(lead, cur);
                return;
            };
            let pv = pivot_row[0].1;
            if lv % pv == 0 {
                let q = (m - lv / pv % m) % m;
                cur = axpy64(&cur, q, pivot_row, m);
            } else {
                let (g, x, y) = xgcd64(pv, lv);
                let xm = x.rem_euclid(m as i128) as u64;
                let ym = y.rem_euclid(m as i128) as u64;
                let pivot_row = pivot_row.clone();
                let new_pivot = axpy64(&scale64(&pivot_row, xm, m), ym, &cur, m);
                let qm = (-((lv / g) as i128)).rem_euclid(m as i128) as u64;
                let rem = axpy64(&scale64(&cur, pv / g % m, m), qm, &pivot_row, m);
                debug_assert_eq!(new_pivot.first(), Some(&(lead, g)));
                self.rows.insert(lead, new_pivot);
                cur = rem;
            }
            debug_assert!(cur.first().is_none_or(|&(i, _)| i > lead));
        }
    }

    fn into_bigint_rows(self) -> Vec<(usize, SparseVec)> {
        self.rows
            .into_iter()
            .map(|(lead, row)| {
                let big: SparseVec = row
                    .into_iter()
                    .map(|(i, v)| (i, BigInt::from(v)))
                    .collect();
                (lead, big)
            })
            .collect()
    }
}

/// Column echelon accumulator with one pivot column per ambient row, seeded
/// with the relation columns d_r * e_r. Entries at row r reduce modulo the
/// seeded relation, which is itself in the spanned lattice.
pub(crate) struct ColEchelon {
    moduli: Vec<BigInt>,
    /// lead row -> column (always present: seeded)
    cols: Vec<Option<SparseVec>>,
}

impl ColEchelon {
    pub fn seeded(moduli: Vec<BigInt>) -> Self {
        let cols = moduli
            .iter()
            .enumerate()
            .map(|(r, m)| {
                assert!(m.is_positive());
                Some(vec![(r, m.clone())])
            })
            .collect();
        ColEchelon { moduli, cols }
    }

    fn reduce(&self, col: SparseVec) -> SparseVec {
        col.into_iter()
            .filter_map(|(r, v)| {
                let w = v.mod_floor(&self.moduli[r]);
                (!w.is_zero()).then_some((r, w))
            })
            .collect()
    }

    pub fn insert(&mut self, col: SparseVec) {
        let mut cur = self.reduce(col);
        while let Some((lead, lv)) = cur.first().cloned() {
            let pivot_col = self.cols[lead].clone().expect("every row is seeded");
            let pv = pivot_col[0].1.clone();
            if (&lv % &pv).is_zero() {
                let q = -(&lv / &pv);
                cur = self.reduce(sparse_axpy(&cur, &q, &pivot_col, &BigInt::one()));
            } else {
                let e = pv.extended_gcd(&lv);
                let new_pivot = self.reduce(sparse_axpy(
                    &sparse_scale(&pivot_col, &e.x, &BigInt::one()),
                    &e.y,
                    &cur,
                    &BigInt::one(),
                ));
                let rem = self.reduce(sparse_axpy(
                    &sparse_scale(&cur, &(&pv / &e.gcd), &BigInt::one()),
                    &-(&lv / &e.gcd),
                    &pivot_col,
                    &BigInt::one(),
                ));
                debug_assert_eq!(new_pivot.first().map(|p| p.0), Some(lead));
                self.cols[lead] = Some(new_pivot);
                cur = rem;
            }
            debug_assert!(cur.first().is_none_or(|(r, _)| *r > lead));
        }
    }

    /// Invariant factors of Z^N / span(columns). Unit pivots are eliminated
    /// sparsely; the small non-unit core goes through a dense Smith pass.
    pub fn cokernel_invariants(mut self) -> Result<Vec<BigInt>> {
        let n = self.cols.len();
        let mut touching: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (key, col) in self.cols.iter().enumerate() {
            for (r, _) in col.as_ref().unwrap() {
                if *r != key {
                    touching[*r].push(key);
                }
            }
        }
        // Clearing a unit-pivot row j zeroes that row in every other column;
        // column j's tail then dies to row operations that touch nothing
        // else, so column j and row j drop out of the presentation together.
        let mut dead = vec![false; n];
        for j in 0..n {
            if !self.cols[j].as_ref().unwrap()[0].1.is_one() {
                continue;
            }
            let pivot_col = self.cols[j].take().unwrap();
            dead[j] = true;
            let users = std::mem::take(&mut touching[j]);
            for key in users {
                if dead[key] {
                    continue;
                }
                let col = self.cols[key].take().unwrap();
                let coeff = col
                    .iter()
                    .find(|(r, _)| *r == j)
                    .map(|(_, v)| v.clone())
                    .unwrap_or_else(BigInt::zero);
                let newcol = if coeff.is_zero() {
                    col
                } else {
                    self.reduce(sparse_axpy(&col, &-coeff, &pivot_col, &BigInt::one()))
                };
                for (r, _) in &newcol {
                    if *r != key && !touching[*r].contains(&key) {
                        touching[*r].push(key);
                    }
                }
                self.cols[key] = Some(newcol);
            }
        }
        let live: Vec<usize> = (0..n).filter(|&j| !dead[j]).collect();
        let mut factors: Vec<BigInt> = Vec::new();
        if !live.is_empty() {
            let pos: BTreeMap<usize, usize> =
                live.iter().enumerate().map(|(i, &r)| (r, i)).collect();
            let mut core = IntMatrix::zero(live.len(), live.len());
            for (ci, &key) in live.iter().enumerate() {
                for (r, v) in self.cols[key].as_ref().unwrap() {
                    let Some(&ri) = pos.get(r) else {
                        return Err(Error::Internal(
                            "live column touches an eliminated row".into(),
                        ));
                    };
                    core.set(ri, ci, v.clone());
                }
            }
            let form = smith_with(&core, Transforms::default());
            for d in &form.diag {
                if d.is_zero() {
                    return Err(Error::Internal(
                        "cokernel of a full-rank lattice came out infinite".into(),
                    ));
                }
                if !d.is_one() {
                    factors.push(d.clone());
                }
            }
        }
        factors.sort();
        Ok(factors)
    }

    fn basis(&self) -> Vec<SparseVec> {
        self.cols
            .iter()
            .map(|c| c.clone().expect("seeded store keeps every pivot"))
            .collect()
    }
}

/// Basis of the solution lattice {x : constraints hold} with the machinery to
/// express lattice vectors in basis coordinates.
enum KernelBasis {
    /// Echelon rows split by whether their lead is a unit modulo m. Unit-lead
    /// rows solve by back-substitution (their columns carry the basis vectors
    /// m * e_u); the small residual system on the non-unit rows' column
    /// support goes through an exact Smith reduction. Coordinate differences
    /// from the canonical basis land in the span of the relation columns at
    /// unit positions, which are always part of the denominator.
    Hybrid {
        modulus: BigInt,
        n: usize,
        /// (lead column, row with lead normalized to 1), ascending leads
        unit_rows: Vec<(usize, SparseVec)>,
        is_unit_col: Vec<bool>,
        /// columns touched by the non-unit rows, ascending
        support: Vec<usize>,
        /// column -> position in `support`
        support_pos: Vec<Option<usize>>,
        delta: Vec<BigInt>,
        v_inv: IntMatrix,
    },
    /// Full Smith form of the accumulated constraint matrix; carries the
    /// explicit basis for representative reconstruction.
    Smith {
        n: usize,
        delta: Vec<BigInt>,
        v: Option<IntMatrix>,
        v_inv: IntMatrix,
    },
}

impl KernelBasis {
    /// Basis coordinates of the sparse ambient vector `w`, up to the span of
    /// the relation columns at unit positions. Errors when `w` violates a
    /// constraint.
    fn solve(&self, w: &SparseVec) -> Result<Vec<BigInt>> {
        match self {
            KernelBasis::Hybrid {
                modulus,
                n,
                unit_rows,
                is_unit_col,
                support,
                support_pos,
                delta,
                v_inv,
            } => {
                let wd = dense_from_sparse(w, *n);
                let mut y = vec![BigInt::zero(); *n];
                // residual system on the support columns
                if !support.is_empty() {
                    let ws: Vec<BigInt> =
                        support.iter().map(|&c| wd[c].clone()).collect();
                    for (i, &c) in support.iter().enumerate() {
                        let mut acc = BigInt::zero();
                        for (j, wj) in ws.iter().enumerate() {
                            if !wj.is_zero() {
                                let e = v_inv.at(i, j);
                                if !e.is_zero() {
                                    acc += e * wj;
                                }
                            }
                        }
                        let (q, r) = acc.div_mod_floor(&delta[i]);
                        if !r.is_zero() {
                            return Err(Error::NotACocycle(format!(
                                "constraint violated at support column {c}"
                            )));
                        }
                        y[c] = q;
                    }
                }
                // untouched free columns pass through
                for j in 0..*n {
                    if !is_unit_col[j] && support_pos[j].is_none() {
                        y[j] = wd[j].clone();
                    }
                }
                // z: a lattice point matching w away from the unit columns,
                // built by descending back-substitution
                let mut z: Vec<BigInt> = vec![BigInt::zero(); *n];
                for j in 0..*n {
                    if !is_unit_col[j] && !wd[j].is_zero() {
                        z[j] = wd[j].mod_floor(modulus);
                    }
                }
                for (lead, row) in unit_rows.iter().rev() {
                    let mut acc = BigInt::zero();
                    for (c, v) in row.iter().skip(1) {
                        if !z[*c].is_zero() {
                            acc += v * &z[*c];
                        }
                    }
                    z[*lead] = (-acc).mod_floor(modulus);
                }
                for (lead, _) in unit_rows {
                    let diff = &wd[*lead] - &z[*lead];
                    let (q, r) = diff.div_mod_floor(modulus);
                    if !r.is_zero() {
                        return Err(Error::NotACocycle(format!(
                            "constraint violated at coordinate {lead}"
                        )));
                    }
                    y[*lead] = q;
                }
                Ok(y)
            }
            KernelBasis::Smith {
                n, delta, v_inv, ..
            } => {
                let mut y = vec![BigInt::zero(); *n];
                for i in 0..*n {
                    let mut acc = BigInt::zero();
                    for (j, wj) in w {
                        let e = v_inv.at(i, *j);
                        if !e.is_zero() {
                            acc += e * wj;
                        }
                    }
                    let (q, r) = acc.div_mod_floor(&delta[i]);
                    if !r.is_zero() {
                        return Err(Error::NotACocycle(format!(
                            "constraint violated at basis position {i}"
                        )));
                    }
                    y[i] = q;
                }
                Ok(y)
            }
        }
    }

    /// Apply the basis matrix to coordinates; Smith path only.
    fn apply_basis(&self, y: &[BigInt]) -> Option<Vec<BigInt>> {
        match self {
            KernelBasis::Hybrid { .. } => None,
            KernelBasis::Smith { n, delta, v, .. } => {
                let v = v.as_ref()?;
                let scaled: Vec<BigInt> = y.iter().zip(delta).map(|(a, d)| a * d).collect();
                let _ = n;
                Some(v.apply(&scaled))
            }
        }
    }
}

/// Unit u modulo m with u*v = gcd(v, m) (mod m).
fn associate_unit(v: &BigInt, m: &BigInt) -> BigInt {
    let g = v.gcd(m);
    let v1 = v / &g;
    let m1 = m / &g;
    let w0 = mod_inverse(&v1.mod_floor(&m1), &m1).unwrap_or_else(BigInt::one);
    let mut w = w0;
    while !w.gcd(m).is_one() {
        w += &m1;
    }
    w.mod_floor(m)
}

struct SqMaps {
    kernel: KernelBasis,
    u_t: IntMatrix,
    u_t_inv: IntMatrix,
    t_diag: Vec<BigInt>,
    keep: Vec<usize>,
}

/// A computed subquotient of an ambient finite abelian group, with optional
/// maps between ambient coordinates and the canonical form.
pub(crate) struct Subquotient {
    pub ambient: FinAbGroup,
    pub group: FinAbGroup,
    maps: Option<SqMaps>,
}

impl Subquotient {
    /// Canonical coordinates of the class of `x`, which must satisfy the
    /// numerator constraints.
    pub fn class_of(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        let maps = self
            .maps
            .as_ref()
            .ok_or_else(|| Error::Internal("subquotient was computed without maps".into()))?;
        let y = maps.kernel.solve(&sparse_from_dense(x))?;
        let uy = maps.u_t.apply(&y);
        Ok(maps
            .keep
            .iter()
            .map(|&i| uy[i].mod_floor(&maps.t_diag[i]))
            .collect())
    }

    /// An ambient representative of the class with the given coordinates.
    pub fn rep_of(&self, class: &[BigInt]) -> Result<Vec<BigInt>> {
        let maps = self
            .maps
            .as_ref()
            .ok_or_else(|| Error::Internal("subquotient was computed without maps".into()))?;
        assert_eq!(class.len(), maps.keep.len());
        let n = maps.t_diag.len();
        let mut embedded = vec![BigInt::zero(); n];
        for (v, &i) in class.iter().zip(&maps.keep) {
            embedded[i] = v.clone();
        }
        let y = maps.u_t_inv.apply(&embedded);
        let x = maps
            .kernel
            .apply_basis(&y)
            .ok_or_else(|| Error::Internal("map-enabled subquotient lost its basis".into()))?;
        Ok(self.ambient.reduce(&x))
    }

    /// Representatives of the canonical generators.
    pub fn generator_reps(&self) -> Result<Vec<Vec<BigInt>>> {
        let rank = self.group.rank();
        (0..rank)
            .map(|i| {
                let mut e = vec![BigInt::zero(); rank];
                e[i] = BigInt::one();
                self.rep_of(&e)
            })
            .collect()
    }
}

/// Compute (constraint kernel)/(denominator span) inside the ambient group.
///
/// `modulus` must be a positive common multiple of the ambient exponent and
/// all constraint moduli. Constraint rows are sparse with a modulus each;
/// denominator columns must satisfy the constraints. The ambient relations
/// are always part of the denominator.
pub(crate) fn subquotient(
    ambient: &FinAbGroup,
    modulus: &BigInt,
    rows: impl IntoIterator<Item = (SparseVec, BigInt)>,
    denom_cols: impl IntoIterator<Item = SparseVec>,
    want_maps: bool,
) -> Result<Subquotient> {
    let n = ambient.rank();
    if n == 0 {
        return Ok(Subquotient {
            ambient: ambient.clone(),
            group: FinAbGroup::trivial(),
            maps: want_maps.then_some(SqMaps {
                kernel: KernelBasis::Smith {
                    n: 0,
                    delta: vec![],
                    v: Some(IntMatrix::identity(0)),
                    v_inv: IntMatrix::identity(0),
                },
                u_t: IntMatrix::identity(0),
                u_t_inv: IntMatrix::identity(0),
                t_diag: vec![],
                keep: vec![],
            }),
        });
    }
    debug_assert!((modulus % ambient.exponent()).is_zero());

    let probe = std::env::var_os("GCOHOM_TIMING").is_some();
    let t0 = std::time::Instant::now();
    let small_mod = if *modulus > BigInt::one() && *modulus <= BigInt::from(u32::MAX) {
        use num_traits::ToPrimitive;
        modulus.to_u64()
    } else {
        None
    };
    let echelon_rows: Vec<(usize, SparseVec)> = if let Some(m64) = small_mod {
        let mut ech = SmallEchelon::new(m64);
        for (row, q) in rows {
            debug_assert!((modulus % &q).is_zero(), "constraint modulus must divide");
            if q.is_one() {
                continue; // vacuous constraint
            }
            use num_traits::ToPrimitive;
            let scale = (modulus / &q).mod_floor(modulus).to_u64().unwrap() % m64;
            let scaled: Vec<(usize, u64)> = row
                .into_iter()
                .filter_map(|(i, v)| {
                    let w = v.mod_floor(modulus).to_u64().unwrap() * scale % m64;
                    (w != 0).then_some((i, w))
                })
                .collect();
            ech.insert(scaled);
        }
        ech.into_bigint_rows()
    } else {
        let mut ech = RowEchelon::new(modulus.clone());
        for (row, q) in rows {
            debug_assert!((modulus % &q).is_zero(), "constraint modulus must divide");
            if q.is_one() {
                continue;
            }
            let scale = modulus / &q;
            let scaled: SparseVec = if scale.is_one() {
                row
            } else {
                row.into_iter().map(|(i, v)| (i, v * &scale)).collect()
            };
            ech.insert(scaled);
        }
        ech.rows()
            .map(|(lead, row)| (*lead, row.clone()))
            .collect()
    };
    if probe {
        let nnz: usize = echelon_rows.iter().map(|(_, r)| r.len()).sum();
        eprintln!(
            "[sq] n={n} accumulate: {:?} rows={} nnz={}",
            t0.elapsed(),
            echelon_rows.len(),
            nnz
        );
    }
    let t1 = std::time::Instant::now();

    let kernel = if !want_maps {
        // Normalize every row so its lead becomes gcd(lead, modulus), then
        // split: unit leads solve by back-substitution, the rest form a small
        // residual system.
        let mut unit_rows: Vec<(usize, SparseVec)> = Vec::new();
        let mut rest_rows: Vec<SparseVec> = Vec::new();
        let mut is_unit_col = vec![false; n];
        for (lead, row) in &echelon_rows {
            let lead = *lead;
            let u = associate_unit(&row[0].1, modulus);
            let scaled = sparse_scale(row, &u, modulus);
            debug_assert_eq!(scaled[0].0, lead);
            if scaled[0].1.is_one() {
                is_unit_col[lead] = true;
                unit_rows.push((lead, scaled));
            } else {
                rest_rows.push(scaled);
            }
        }
        // Clear unit columns out of the residual rows; fill-in lands strictly
        // to the right, so an ascending sweep terminates.
        let unit_by_col: BTreeMap<usize, &SparseVec> =
            unit_rows.iter().map(|(lead, row)| (*lead, row)).collect();
        for row in rest_rows.iter_mut() {
            loop {
                let hit = row
                    .iter()
                    .find(|(c, _)| is_unit_col[*c])
                    .map(|(c, v)| (*c, v.clone()));
                let Some((c, v)) = hit else { break };
                let pivot = unit_by_col[&c];
                *row = sparse_axpy(row, &-v, pivot, modulus);
            }
        }
        rest_rows.retain(|r| !r.is_empty());
        let mut support: Vec<usize> = rest_rows
            .iter()
            .flat_map(|r| r.iter().map(|(c, _)| *c))
            .collect();
        support.sort_unstable();
        support.dedup();
        let mut support_pos: Vec<Option<usize>> = vec![None; n];
        for (i, &c) in support.iter().enumerate() {
            support_pos[c] = Some(i);
        }
        if probe {
            eprintln!(
                "[sq] split: units={} rest={} support={}",
                unit_rows.len(),
                rest_rows.len(),
                support.len()
            );
        }
        let s = support.len();
        let mut small = IntMatrix::zero(rest_rows.len(), s);
        for (t, row) in rest_rows.iter().enumerate() {
            for (c, v) in row {
                small.set(t, support_pos[*c].unwrap(), v.clone());
            }
        }
        let form = smith_with(
            &small,
            Transforms {
                u: false,
                u_inv: false,
                v: false,
                v_inv: true,
            },
        );
        let mut delta = Vec::with_capacity(s);
        for i in 0..s {
            let d = if i < form.rank {
                modulus / form.diag[i].gcd(modulus)
            } else {
                BigInt::one()
            };
            delta.push(d);
        }
        KernelBasis::Hybrid {
            modulus: modulus.clone(),
            n,
            unit_rows,
            is_unit_col,
            support,
            support_pos,
            delta,
            v_inv: form.v_inv.expect("v_inv requested"),
        }
    } else {
        // Dense Smith reduction of the accumulated rows, with columns
        // pre-permuted so the echelon leads land on the diagonal.
        let r = echelon_rows.len();
        let mut perm: Vec<usize> = Vec::with_capacity(n); // new -> old
        let mut lead_cols = vec![false; n];
        for (lead, _) in &echelon_rows {
            perm.push(*lead);
            lead_cols[*lead] = true;
        }
        for (j, is_lead) in lead_cols.iter().enumerate() {
            if !is_lead {
                perm.push(j);
            }
        }
        let mut perm_inv = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            perm_inv[old] = new;
        }
        let mut rmat = IntMatrix::zero(r, n);
        for (t, (_, row)) in echelon_rows.iter().enumerate() {
            for (c, v) in row {
                rmat.set(t, perm_inv[*c], v.clone());
            }
        }
        let form = smith_with(
            &rmat,
            Transforms {
                u: false,
                u_inv: false,
                v: want_maps,
                v_inv: true,
            },
        );
        let mut delta = Vec::with_capacity(n);
        for i in 0..n {
            let d = if i < form.rank {
                modulus / form.diag[i].gcd(modulus)
            } else {
                BigInt::one()
            };
            delta.push(d);
        }
        // Undo the column permutation: V_total = P V, V_total^-1 = V^-1 P^T.
        let vs_inv = form.v_inv.expect("v_inv requested");
        let mut v_inv = IntMatrix::zero(n, n);
        for i in 0..n {
            for old in 0..n {
                let e = vs_inv.at(i, perm_inv[old]);
                if !e.is_zero() {
                    v_inv.set(i, old, e.clone());
                }
            }
        }
        let v = form.v.map(|vm| {
            let mut out = IntMatrix::zero(n, n);
            for old in 0..n {
                for j in 0..n {
                    let e = vm.at(perm_inv[old], j);
                    if !e.is_zero() {
                        out.set(old, j, e.clone());
                    }
                }
            }
            out
        });
        KernelBasis::Smith {
            n,
            delta,
            v,
            v_inv,
        }
    };

    if probe {
        eprintln!("[sq] kernel stage: {:?}", t1.elapsed());
    }
    let t2 = std::time::Instant::now();
    // Express the denominator in kernel coordinates; ambient relations are
    // always included.
    let mut mapped: Vec<SparseVec> = Vec::new();
    for col in denom_cols {
        mapped.push(sparse_from_dense(&kernel.solve(&col)?));
    }
    for (j, d) in ambient.invariant_factors().iter().enumerate() {
        let y = kernel.solve(&vec![(j, d.clone())]).map_err(|_| {
            Error::Internal("ambient relation escaped the constraint kernel".into())
        })?;
        mapped.push(sparse_from_dense(&y));
    }

    if want_maps {
        let mut t = IntMatrix::zero(n, mapped.len() + n);
        for (c, col) in mapped.iter().enumerate() {
            for (i, v) in col {
                t.set(*i, c, v.clone());
            }
        }
        // modulus * e_i lies in the denominator lattice too
        for i in 0..n {
            t.set(i, mapped.len() + i, modulus.clone());
        }
        let form = smith_with(
            &t,
            Transforms {
                u: true,
                u_inv: true,
                v: false,
                v_inv: false,
            },
        );
        let mut t_diag = form.diag.clone();
        t_diag.truncate(n);
        let mut keep = Vec::new();
        let mut factors = Vec::new();
        for (i, d) in t_diag.iter().enumerate() {
            if d.is_zero() {
                return Err(Error::Internal(
                    "finite subquotient came out infinite".into(),
                ));
            }
            if !d.is_one() {
                keep.push(i);
                factors.push(d.clone());
            }
        }
        Ok(Subquotient {
            ambient: ambient.clone(),
            group: FinAbGroup::new(factors)?,
            maps: Some(SqMaps {
                kernel,
                u_t: form.u.unwrap(),
                u_t_inv: form.u_inv.unwrap(),
                t_diag,
                keep,
            }),
        })
    } else {
        if probe {
            eprintln!("[sq] denominator solve: {:?}", t2.elapsed());
        }
        let t3 = std::time::Instant::now();
        let mut store = ColEchelon::seeded(vec![modulus.clone(); n]);
        for col in mapped {
            store.insert(col);
        }
        let factors = store.cokernel_invariants()?;
        if probe {
            eprintln!("[sq] cokernel stage: {:?}", t3.elapsed());
        }
        Ok(Subquotient {
            ambient: ambient.clone(),
            group: FinAbGroup::new(factors)?,
            maps: None,
        })
    }
}

/// Subgroup of `ambient` spanned by the given element columns: the canonical
/// group plus generator representatives inside the ambient group.
pub(crate) fn span(
    ambient: &FinAbGroup,
    columns: impl IntoIterator<Item = SparseVec>,
) -> Result<(FinAbGroup, Vec<Vec<BigInt>>)> {
    let n = ambient.rank();
    if n == 0 {
        return Ok((FinAbGroup::trivial(), vec![]));
    }
    let mut store = ColEchelon::seeded(ambient.invariant_factors().to_vec());
    for col in columns {
        store.insert(col);
    }
    let basis = store.basis();
    // C = B^-1 * diag(ambient), exact because the relations lie in the span.
    let mut c = IntMatrix::zero(n, n);
    for (j, d) in ambient.invariant_factors().iter().enumerate() {
        let mut target: BTreeMap<usize, BigInt> = BTreeMap::new();
        target.insert(j, d.clone());
        let mut x = vec![BigInt::zero(); n];
        while let Some((&r, _)) = target.iter().next() {
            let tv = target.remove(&r).unwrap();
            if tv.is_zero() {
                continue;
            }
            let pivot = &basis[r][0].1;
            let (q, rem) = tv.div_mod_floor(pivot);
            if !rem.is_zero() {
                return Err(Error::Internal(
                    "ambient relation is not in the spanned lattice".into(),
                ));
            }
            x[r] = q.clone();
            for (rr, vv) in basis[r].iter().skip(1) {
                let e = target.entry(*rr).or_insert_with(BigInt::zero);
                *e -= &q * vv;
            }
        }
        for (i, xi) in x.into_iter().enumerate() {
            if !xi.is_zero() {
                c.set(i, j, xi);
            }
        }
    }
    let form = smith_with(
        &c,
        Transforms {
            u: false,
            u_inv: true,
            v: false,
            v_inv: false,
        },
    );
    let u_inv = form.u_inv.unwrap();
    let mut factors = Vec::new();
    let mut reps = Vec::new();
    for (i, d) in form.diag.iter().enumerate() {
        if d.is_zero() {
            return Err(Error::Internal(
                "span inside a finite group came out infinite".into(),
            ));
        }
        if d.is_one() {
            continue;
        }
        factors.push(d.clone());
        // generator = B * (column i of U^-1)
        let mut x = vec![BigInt::zero(); n];
        for r in 0..n {
            let coeff = u_inv.at(r, i);
            if coeff.is_zero() {
                continue;
            }
            for (rr, vv) in &basis[r] {
                x[*rr] += coeff * vv;
            }
        }
        reps.push(ambient.reduce(&x));
    }
    Ok((FinAbGroup::new(factors)?, reps))
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}
