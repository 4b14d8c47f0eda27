use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;

use super::group::FinAbGroup;
use super::matrix::{smith_with, IntMatrix, Transforms};
use super::subquotient::{span, sparse_from_dense, subquotient, SparseVec};
use crate::error::{Error, Result};

/// Homomorphism between finite abelian groups in canonical form. Column j of
/// the matrix is the image of the j-th domain generator; entries are stored
/// reduced modulo the codomain invariants, so equality of homs is plain
/// structural equality.
#[derive(Clone, PartialEq, Eq)]
pub struct AbHom {
    domain: FinAbGroup,
    codomain: FinAbGroup,
    matrix: IntMatrix,
}

impl AbHom {
    /// Well-definedness: for a domain generator of order d, d times its image
    /// must vanish in the codomain.
    pub fn new(domain: FinAbGroup, codomain: FinAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != codomain.rank() || matrix.cols() != domain.rank() {
            return Err(Error::MalformedHom(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                codomain.rank(),
                domain.rank()
            )));
        }
        let mut reduced = IntMatrix::zero(matrix.rows(), matrix.cols());
        for i in 0..matrix.rows() {
            let m = &codomain.invariant_factors()[i];
            for j in 0..matrix.cols() {
                reduced.set(i, j, matrix.at(i, j).mod_floor(m));
            }
        }
        for (j, d) in domain.invariant_factors().iter().enumerate() {
            for (i, m) in codomain.invariant_factors().iter().enumerate() {
                if !(d * reduced.at(i, j)).mod_floor(m).is_zero() {
                    return Err(Error::MalformedHom(format!(
                        "generator {j} of order {d} maps to an element not killed by {d}"
                    )));
                }
            }
        }
        Ok(AbHom {
            domain,
            codomain,
            matrix: reduced,
        })
    }

    pub fn identity(g: &FinAbGroup) -> Self {
        AbHom {
            domain: g.clone(),
            codomain: g.clone(),
            matrix: IntMatrix::identity(g.rank()),
        }
    }

    pub fn zero(domain: &FinAbGroup, codomain: &FinAbGroup) -> Self {
        AbHom {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix: IntMatrix::zero(codomain.rank(), domain.rank()),
        }
    }

    /// Multiplication by a fixed integer.
    pub fn scalar(g: &FinAbGroup, c: &BigInt) -> Self {
        let n = g.rank();
        let mut m = IntMatrix::zero(n, n);
        for (i, d) in g.invariant_factors().iter().enumerate() {
            m.set(i, i, c.mod_floor(d));
        }
        AbHom {
            domain: g.clone(),
            codomain: g.clone(),
            matrix: m,
        }
    }

    pub fn domain(&self) -> &FinAbGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FinAbGroup {
        &self.codomain
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.codomain.reduce(&self.matrix.apply(x))
    }

    /// self after first: (self . first)(x) = self(first(x)).
    pub fn compose(&self, first: &AbHom) -> Result<AbHom> {
        if first.codomain != self.domain {
            return Err(Error::MalformedHom(
                "composition with mismatched middle group".into(),
            ));
        }
        AbHom::new(
            first.domain.clone(),
            self.codomain.clone(),
            self.matrix.mul(&first.matrix),
        )
    }

    pub fn add(&self, other: &AbHom) -> Result<AbHom> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::MalformedHom("sum of homs with different ends".into()));
        }
        AbHom::new(
            self.domain.clone(),
            self.codomain.clone(),
            self.matrix.add(&other.matrix),
        )
    }

    pub fn sub(&self, other: &AbHom) -> Result<AbHom> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::MalformedHom(
                "difference of homs with different ends".into(),
            ));
        }
        AbHom::new(
            self.domain.clone(),
            self.codomain.clone(),
            self.matrix.sub(&other.matrix),
        )
    }

    pub fn scale(&self, c: &BigInt) -> AbHom {
        AbHom::new(
            self.domain.clone(),
            self.codomain.clone(),
            self.matrix.scale(c),
        )
        .expect("scaling preserves well-definedness")
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Constraint rows (row, modulus) expressing h(x) = 0.
    pub(crate) fn kernel_rows(&self) -> Vec<(SparseVec, BigInt)> {
        (0..self.matrix.rows())
            .map(|i| {
                let row = sparse_from_dense(self.matrix.row(i));
                (row, self.codomain.invariant_factors()[i].clone())
            })
            .collect()
    }

    /// Image columns as sparse codomain vectors.
    pub(crate) fn image_cols(&self) -> Vec<SparseVec> {
        (0..self.matrix.cols())
            .map(|j| sparse_from_dense(&self.matrix.column(j)))
            .collect()
    }
}

impl fmt::Debug for AbHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "AbHom {} -> {} via {:?}",
            self.domain, self.codomain, self.matrix
        )
    }
}

/// Kernel of a homomorphism: the canonical group and its inclusion into the
/// domain.
pub fn hom_kernel(h: &AbHom) -> Result<(FinAbGroup, AbHom)> {
    let modulus = lcm_big(&h.domain().exponent(), &h.codomain().exponent());
    let sq = subquotient(
        h.domain(),
        &modulus,
        h.kernel_rows(),
        std::iter::empty(),
        true,
    )?;
    let group = sq.group.clone();
    let mut incl = IntMatrix::zero(h.domain().rank(), group.rank());
    for (c, rep) in sq.generator_reps()?.into_iter().enumerate() {
        for (i, v) in rep.into_iter().enumerate() {
            incl.set(i, c, v);
        }
    }
    let inclusion = AbHom::new(group.clone(), h.domain().clone(), incl)?;
    Ok((group, inclusion))
}

/// Image of a homomorphism: the canonical group and its inclusion into the
/// codomain.
pub fn hom_image(h: &AbHom) -> Result<(FinAbGroup, AbHom)> {
    let (group, reps) = span(h.codomain(), h.image_cols())?;
    let mut incl = IntMatrix::zero(h.codomain().rank(), group.rank());
    for (c, rep) in reps.into_iter().enumerate() {
        for (i, v) in rep.into_iter().enumerate() {
            incl.set(i, c, v);
        }
    }
    let inclusion = AbHom::new(group.clone(), h.codomain().clone(), incl)?;
    Ok((group, inclusion))
}

/// Quotient of a group by the subgroup its listed elements generate: the
/// canonical quotient and the projection onto it.
pub fn quotient(g: &FinAbGroup, sub_gens: &[Vec<BigInt>]) -> Result<(FinAbGroup, AbHom)> {
    for e in sub_gens {
        if e.len() != g.rank() {
            return Err(Error::BadInput(format!(
                "subgroup generator has {} coordinates, group has rank {}",
                e.len(),
                g.rank()
            )));
        }
    }
    let sq = subquotient(
        g,
        &g.exponent(),
        std::iter::empty(),
        sub_gens.iter().map(|e| sparse_from_dense(e)),
        true,
    )?;
    let quot = sq.group.clone();
    let mut proj = IntMatrix::zero(quot.rank(), g.rank());
    for j in 0..g.rank() {
        let mut e = vec![BigInt::zero(); g.rank()];
        e[j] = BigInt::one();
        let cls = sq.class_of(&e)?;
        for (i, v) in cls.into_iter().enumerate() {
            proj.set(i, j, v);
        }
    }
    let projection = AbHom::new(g.clone(), quot.clone(), proj)?;
    Ok((quot, projection))
}

/// Solver for h(x) = t with the codomain relations taken into account.
pub(crate) struct HomSolver {
    dom_rank: usize,
    rank: usize,
    diag: Vec<BigInt>,
    u: IntMatrix,
    v: IntMatrix,
    domain: FinAbGroup,
}

impl HomSolver {
    pub fn new(h: &AbHom) -> Self {
        // stacked system [M | diag(codomain)] z = t over Z
        let rows = h.codomain().rank();
        let cols = h.domain().rank() + rows;
        let mut a = IntMatrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..h.domain().rank() {
                a.set(i, j, h.matrix().at(i, j).clone());
            }
            a.set(
                i,
                h.domain().rank() + i,
                h.codomain().invariant_factors()[i].clone(),
            );
        }
        let form = smith_with(
            &a,
            Transforms {
                u: true,
                u_inv: false,
                v: true,
                v_inv: false,
            },
        );
        HomSolver {
            dom_rank: h.domain().rank(),
            rank: form.rank,
            diag: form.diag,
            u: form.u.unwrap(),
            v: form.v.unwrap(),
            domain: h.domain().clone(),
        }
    }

    /// Some solution x with h(x) = t, or None when t is not in the image.
    pub fn solve(&self, t: &[BigInt]) -> Option<Vec<BigInt>> {
        let w = self.u.apply(t);
        let mut z = vec![BigInt::zero(); self.v.rows()];
        for (i, wi) in w.iter().enumerate() {
            if i < self.rank {
                let (q, r) = wi.div_mod_floor(&self.diag[i]);
                if !r.is_zero() {
                    return None;
                }
                z[i] = q;
            } else if !wi.is_zero() {
                return None;
            }
        }
        let full = self.v.apply(&z);
        Some(self.domain.reduce(&full[..self.dom_rank]))
    }
}

pub(crate) fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_one() {
        return b.clone();
    }
    if b.is_one() {
        return a.clone();
    }
    a / a.gcd(b) * b
}
