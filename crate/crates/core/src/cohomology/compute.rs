use num_bigint::BigInt;

use super::complex::{cochain_group, differential_cols, differential_rows, CochainLayout};
use crate::abelian::subquotient::{subquotient, Subquotient};
use crate::abelian::{AbHom, FinAbGroup};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gmodule::{augmentation_generators, norm_map, GModule};

/// A computed cohomology group in canonical form, optionally with
/// representative cocycles (coordinates in the cochain group) for its
/// canonical generators.
#[derive(Clone, Debug)]
pub struct CohomologyResult {
    pub degree: i64,
    pub group: FinAbGroup,
    pub representatives: Option<Vec<Vec<BigInt>>>,
}

/// H^n(G, M) = ker d_n / im d_{n-1} from the bar complex, invariants only.
/// The computation splits along the canonical primary decomposition of the
/// carrier, which the differentials respect.
pub fn cohomology(m: &GModule, degree: usize, budget: &Budget) -> Result<CohomologyResult> {
    if m.carrier().is_trivial() {
        return Ok(CohomologyResult {
            degree: degree as i64,
            group: FinAbGroup::trivial(),
            representatives: None,
        });
    }
    let parts = m.primary_decomposition()?;
    let group = if parts.len() > 1 {
        let mut acc = FinAbGroup::trivial();
        for (_, part, _, _) in &parts {
            acc = acc.direct_sum(&cohomology_unsplit(part, degree, budget)?);
        }
        acc
    } else {
        cohomology_unsplit(m, degree, budget)?
    };
    Ok(CohomologyResult {
        degree: degree as i64,
        group,
        representatives: None,
    })
}

fn cohomology_unsplit(m: &GModule, degree: usize, budget: &Budget) -> Result<FinAbGroup> {
    let ambient = cochain_group(m, degree, budget)?;
    let modulus = m.carrier().exponent();
    let rows = differential_rows(m, degree, budget)?;
    let sq = if degree == 0 {
        subquotient(&ambient, &modulus, rows, std::iter::empty(), false)?
    } else {
        let cols = differential_cols(m, degree - 1, budget)?;
        subquotient(&ambient, &modulus, rows, cols, false)?
    };
    Ok(sq.group)
}

/// H^n with class/representative maps; used by the induced-map machinery.
pub struct CohomologySpace {
    module: GModule,
    degree: usize,
    layout: CochainLayout,
    sq: Subquotient,
}

impl CohomologySpace {
    pub fn group(&self) -> &FinAbGroup {
        &self.sq.group
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub(crate) fn layout(&self) -> &CochainLayout {
        &self.layout
    }

    /// Canonical class coordinates of a cocycle; errors when the vector is
    /// not a cocycle.
    pub fn class_of(&self, cocycle: &[BigInt]) -> Result<Vec<BigInt>> {
        self.sq.class_of(cocycle)
    }

    /// Canonical representative cocycle of a class.
    pub fn rep_of(&self, class: &[BigInt]) -> Result<Vec<BigInt>> {
        self.sq.rep_of(class)
    }

    pub fn generator_reps(&self) -> Result<Vec<Vec<BigInt>>> {
        self.sq.generator_reps()
    }

    pub fn result(&self) -> Result<CohomologyResult> {
        Ok(CohomologyResult {
            degree: self.degree as i64,
            group: self.sq.group.clone(),
            representatives: Some(self.generator_reps()?),
        })
    }
}

pub fn cohomology_space(m: &GModule, degree: usize, budget: &Budget) -> Result<CohomologySpace> {
    let ambient = cochain_group(m, degree, budget)?;
    let layout = CochainLayout::new(m, degree, budget)?;
    let modulus = m.carrier().exponent();
    let rows = differential_rows(m, degree, budget)?;
    let sq = if degree == 0 {
        subquotient(&ambient, &modulus, rows, std::iter::empty(), true)?
    } else {
        let cols = differential_cols(m, degree - 1, budget)?;
        subquotient(&ambient, &modulus, rows, cols, true)?
    };
    Ok(CohomologySpace {
        module: m.clone(),
        degree,
        layout,
        sq,
    })
}

/// Tate cohomology: ordinary cohomology in positive degrees, M^G/N(M) in
/// degree 0, ker N / I_G M in degree -1, and 2-periodic reduction into that
/// band for cyclic groups in lower degrees.
pub fn tate_cohomology(m: &GModule, degree: i64, budget: &Budget) -> Result<CohomologyResult> {
    match degree {
        d if d >= 1 => cohomology(m, d as usize, budget),
        0 => {
            let n = norm_map(m);
            let sq = tate_zero_subquotient(m, &n)?;
            Ok(CohomologyResult {
                degree: 0,
                group: sq.group.clone(),
                representatives: Some(sq.generator_reps()?),
            })
        }
        -1 => {
            let n = norm_map(m);
            let sq = subquotient(
                m.carrier(),
                &m.carrier().exponent(),
                n.kernel_rows(),
                augmentation_generators(m),
                true,
            )?;
            Ok(CohomologyResult {
                degree: -1,
                group: sq.group.clone(),
                representatives: Some(sq.generator_reps()?),
            })
        }
        d => {
            if !m.group().is_cyclic() {
                return Err(Error::UnsupportedDegree {
                    degree: d,
                    reason: "degrees below -1 need a cyclic group (2-periodicity)".into(),
                });
            }
            let band = if d.rem_euclid(2) == 0 { 0 } else { -1 };
            let mut shifted = tate_cohomology(m, band, budget)?;
            shifted.degree = d;
            Ok(shifted)
        }
    }
}

fn tate_zero_subquotient(m: &GModule, n: &AbHom) -> Result<Subquotient> {
    // M^G / N(M): fixed-point constraints over the norm image
    let id = AbHom::identity(m.carrier());
    let mut rows = Vec::new();
    for g in m.group().elements().skip(1) {
        rows.extend(m.action(g).sub(&id)?.kernel_rows());
    }
    subquotient(
        m.carrier(),
        &m.carrier().exponent(),
        rows,
        n.image_cols(),
        true,
    )
}

/// Closed forms for cyclic groups: in even Tate degree M^G/N(M), in odd
/// degree ker N / (s - 1)M for a generator s. Used as the independent route
/// against the bar-resolution computation.
pub fn cyclic_closed_form(m: &GModule, degree: i64) -> Result<FinAbGroup> {
    let s = m.group().cyclic_generator().ok_or_else(|| {
        Error::UnsupportedDegree {
            degree,
            reason: "closed forms require a cyclic group".into(),
        }
    })?;
    let n = norm_map(m);
    let id = AbHom::identity(m.carrier());
    let shift = m.action(s).sub(&id)?;
    let sq = if degree.rem_euclid(2) == 0 {
        // M^G via the generator alone, modulo norms
        subquotient(
            m.carrier(),
            &m.carrier().exponent(),
            shift.kernel_rows(),
            n.image_cols(),
            false,
        )?
    } else {
        subquotient(
            m.carrier(),
            &m.carrier().exponent(),
            n.kernel_rows(),
            shift.image_cols(),
            false,
        )?
    };
    Ok(sq.group)
}
