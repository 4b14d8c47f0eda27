use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

use crate::abelian::subquotient::SparseVec;
use crate::abelian::{AbHom, FinAbGroup, IntMatrix};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gmodule::GModule;

/// Index bookkeeping for C^n(G, M) = Map(G^n, M), materialized as the direct
/// sum of |G|^n copies of M. Coordinates are generator-major: basis element
/// (j, tuple) sits at j * |G|^n + lex(tuple), which keeps the invariant
/// factors of the cochain group in ascending order.
#[derive(Clone, Copy)]
pub(crate) struct CochainLayout {
    pub group_order: usize,
    pub degree: usize,
    pub gens: usize,
    pub tuples: usize,
}

impl CochainLayout {
    pub fn new(m: &GModule, degree: usize, budget: &Budget) -> Result<Self> {
        let g = m.group().order();
        let k = m.carrier().rank();
        let tuples = checked_power(g, degree).ok_or(Error::BudgetExceeded {
            what: format!("cochain group in degree {degree}"),
            needed: usize::MAX,
            limit: budget.max_columns,
        })?;
        let rank = tuples.checked_mul(k.max(1)).ok_or(Error::BudgetExceeded {
            what: format!("cochain group in degree {degree}"),
            needed: usize::MAX,
            limit: budget.max_columns,
        })?;
        budget.check_columns(&format!("cochain group in degree {degree}"), rank)?;
        Ok(CochainLayout {
            group_order: g,
            degree,
            gens: k,
            tuples,
        })
    }

    pub fn rank(&self) -> usize {
        self.gens * self.tuples
    }

    pub fn index(&self, gen: usize, tuple: usize) -> usize {
        gen * self.tuples + tuple
    }

    pub fn tuple_index(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.degree);
        tuple.iter().fold(0, |acc, &t| acc * self.group_order + t)
    }

    pub fn unpack_tuple(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0usize; self.degree];
        for slot in out.iter_mut().rev() {
            *slot = idx % self.group_order;
            idx /= self.group_order;
        }
        out
    }
}

fn checked_power(base: usize, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// The cochain group C^n(G, M) in canonical form.
pub(crate) fn cochain_group(m: &GModule, degree: usize, budget: &Budget) -> Result<FinAbGroup> {
    let layout = CochainLayout::new(m, degree, budget)?;
    let mut factors = Vec::with_capacity(layout.rank());
    for d in m.carrier().invariant_factors() {
        for _ in 0..layout.tuples {
            factors.push(d.clone());
        }
    }
    FinAbGroup::new(factors)
}

/// Streamed rows of the differential d_n : C^n -> C^{n+1}. Each row comes
/// with the invariant factor of its target coordinate as constraint modulus.
pub(crate) fn differential_rows<'a>(
    m: &'a GModule,
    degree: usize,
    budget: &Budget,
) -> Result<impl Iterator<Item = (SparseVec, BigInt)> + 'a> {
    let src = CochainLayout::new(m, degree, budget)?;
    let tgt = CochainLayout::new(
        m,
        degree + 1,
        &Budget::new(budget.max_rows().max(budget.max_columns)),
    )?;
    budget.check_rows(
        &format!("differential rows out of degree {degree}"),
        tgt.rank(),
    )?;
    let n = degree;
    let iter = (0..tgt.tuples).flat_map(move |sigma_idx| {
        let sigma = tgt.unpack_tuple(sigma_idx);
        let group = m.group();
        // column tuples hit by this (n+1)-tuple
        let tail = src.tuple_index(&sigma[1..]);
        let head = src.tuple_index(&sigma[..n]);
        let merges: Vec<(usize, i64)> = (1..=n)
            .map(|i| {
                let mut merged = Vec::with_capacity(n);
                merged.extend_from_slice(&sigma[..i - 1]);
                merged.push(group.mul(sigma[i - 1], sigma[i]));
                merged.extend_from_slice(&sigma[i + 1..]);
                (src.tuple_index(&merged), if i % 2 == 0 { 1 } else { -1 })
            })
            .collect();
        let last_sign: i64 = if (n + 1) % 2 == 0 { 1 } else { -1 };
        let first = m.action(sigma.first().copied().unwrap_or(0)).matrix().clone();
        (0..src.gens).map(move |i| {
            let mut row: BTreeMap<usize, BigInt> = BTreeMap::new();
            for j in 0..src.gens {
                let coeff = first.at(i, j);
                if !coeff.is_zero() {
                    *row.entry(src.index(j, tail)).or_insert_with(BigInt::zero) += coeff;
                }
            }
            for (merged, sign) in &merges {
                *row.entry(src.index(i, *merged)).or_insert_with(BigInt::zero) +=
                    BigInt::from(*sign);
            }
            *row.entry(src.index(i, head)).or_insert_with(BigInt::zero) +=
                BigInt::from(last_sign);
            let sparse: SparseVec = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            let modulus = m.carrier().invariant_factors()[i].clone();
            (sparse, modulus)
        })
    });
    Ok(iter)
}

/// Streamed columns of the differential d_n : C^n -> C^{n+1}, as sparse
/// vectors in the target cochain group.
pub(crate) fn differential_cols<'a>(
    m: &'a GModule,
    degree: usize,
    budget: &Budget,
) -> Result<impl Iterator<Item = SparseVec> + 'a> {
    let src = CochainLayout::new(m, degree, budget)?;
    let tgt = CochainLayout::new(
        m,
        degree + 1,
        &Budget::new(budget.max_rows().max(budget.max_columns)),
    )?;
    let n = degree;
    let iter = (0..src.gens).flat_map(move |j| {
        (0..src.tuples).map(move |tau_idx| {
            let tau = src.unpack_tuple(tau_idx);
            let group = m.group();
            let mut col: BTreeMap<usize, BigInt> = BTreeMap::new();
            // first term: sigma = (a, tau), coefficient action(a)[i][j]
            for a in group.elements() {
                let mut sigma = Vec::with_capacity(n + 1);
                sigma.push(a);
                sigma.extend_from_slice(&tau);
                let sidx = tgt.tuple_index(&sigma);
                let act = m.action(a).matrix();
                for i in 0..src.gens {
                    let coeff = act.at(i, j);
                    if !coeff.is_zero() {
                        *col.entry(tgt.index(i, sidx)).or_insert_with(BigInt::zero) += coeff;
                    }
                }
            }
            // middle terms: split tau_i into a * (a^-1 tau_i)
            for i in 1..=n {
                let sign = BigInt::from(if i % 2 == 0 { 1i64 } else { -1 });
                for a in group.elements() {
                    let b = group.mul(group.inverse(a), tau[i - 1]);
                    let mut sigma = Vec::with_capacity(n + 1);
                    sigma.extend_from_slice(&tau[..i - 1]);
                    sigma.push(a);
                    sigma.push(b);
                    sigma.extend_from_slice(&tau[i..]);
                    let sidx = tgt.tuple_index(&sigma);
                    *col.entry(tgt.index(j, sidx)).or_insert_with(BigInt::zero) += &sign;
                }
            }
            // last term: sigma = (tau, a)
            let sign = BigInt::from(if (n + 1) % 2 == 0 { 1i64 } else { -1 });
            for a in group.elements() {
                let mut sigma = Vec::with_capacity(n + 1);
                sigma.extend_from_slice(&tau);
                sigma.push(a);
                let sidx = tgt.tuple_index(&sigma);
                *col.entry(tgt.index(j, sidx)).or_insert_with(BigInt::zero) += &sign;
            }
            col.into_iter().filter(|(_, v)| !v.is_zero()).collect()
        })
    });
    Ok(iter)
}

/// Apply d_n to an explicit cochain vector.
pub(crate) fn apply_differential(
    m: &GModule,
    degree: usize,
    cochain: &[BigInt],
    budget: &Budget,
) -> Result<Vec<BigInt>> {
    let src = CochainLayout::new(m, degree, budget)?;
    let tgt = CochainLayout::new(
        m,
        degree + 1,
        &Budget::new(budget.max_rows().max(budget.max_columns)),
    )?;
    assert_eq!(cochain.len(), src.rank());
    let n = degree;
    let mut out = vec![BigInt::zero(); tgt.rank()];
    for sigma_idx in 0..tgt.tuples {
        let sigma = tgt.unpack_tuple(sigma_idx);
        let tail = src.tuple_index(&sigma[1..]);
        let head = src.tuple_index(&sigma[..n]);
        let act = m.action(sigma.first().copied().unwrap_or(0)).matrix();
        for i in 0..src.gens {
            let mut acc = BigInt::zero();
            for j in 0..src.gens {
                let coeff = act.at(i, j);
                if !coeff.is_zero() {
                    acc += coeff * &cochain[src.index(j, tail)];
                }
            }
            for split in 1..=n {
                let mut merged = Vec::with_capacity(n);
                merged.extend_from_slice(&sigma[..split - 1]);
                merged.push(m.group().mul(sigma[split - 1], sigma[split]));
                merged.extend_from_slice(&sigma[split + 1..]);
                let v = &cochain[src.index(i, src.tuple_index(&merged))];
                if split % 2 == 0 {
                    acc += v;
                } else {
                    acc -= v;
                }
            }
            let v = &cochain[src.index(i, head)];
            if (n + 1) % 2 == 0 {
                acc += v;
            } else {
                acc -= v;
            }
            out[tgt.index(i, sigma_idx)] = acc;
        }
    }
    let group = cochain_group(m, degree + 1, &Budget::new(budget.max_rows()))?;
    Ok(group.reduce(&out))
}

/// The materialized bar complex up to a fixed degree: cochain groups
/// C^0..C^{max+1} and the differentials between them, with d.d = 0 verified
/// at build time for every stored consecutive pair.
pub struct CochainComplex {
    module: GModule,
    max_degree: usize,
    groups: Vec<FinAbGroup>,
    differentials: Vec<AbHom>,
}

impl CochainComplex {
    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// C^n for n <= max_degree + 1.
    pub fn group(&self, n: usize) -> &FinAbGroup {
        &self.groups[n]
    }

    /// d_n : C^n -> C^{n+1} for n <= max_degree.
    pub fn differential(&self, n: usize) -> &AbHom {
        &self.differentials[n]
    }
}

/// Materialize the complex. The budget bounds the rank of the largest stored
/// cochain group, C^{max_degree + 1}.
pub fn build_complex(m: &GModule, max_degree: usize, budget: &Budget) -> Result<CochainComplex> {
    let mut groups = Vec::with_capacity(max_degree + 2);
    for n in 0..=max_degree + 1 {
        groups.push(cochain_group(m, n, budget)?);
    }
    let mut differentials = Vec::with_capacity(max_degree + 1);
    for n in 0..=max_degree {
        let src = &groups[n];
        let tgt = &groups[n + 1];
        let mut mat = IntMatrix::zero(tgt.rank(), src.rank());
        for (c, col) in differential_cols(m, n, budget)?.enumerate() {
            for (r, v) in col {
                mat.set(r, c, v);
            }
        }
        differentials.push(AbHom::new(src.clone(), tgt.clone(), mat)?);
    }
    // d_{n+1} . d_n = 0, checked exactly on every stored pair
    for n in 0..max_degree {
        let composite = differentials[n + 1].compose(&differentials[n])?;
        if !composite.is_zero() {
            return Err(Error::Internal(format!(
                "differential square is nonzero out of degree {n}"
            )));
        }
    }
    Ok(CochainComplex {
        module: m.clone(),
        max_degree,
        groups,
        differentials,
    })
}
