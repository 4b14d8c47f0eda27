use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::complex::{apply_differential, CochainLayout};
use super::compute::{cohomology, cohomology_space, CohomologyResult, CohomologySpace};
use crate::abelian::subquotient::subquotient;
use crate::abelian::{hom_image, hom_kernel, AbHom, FinAbGroup, HomSolver, IntMatrix};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gmodule::{
    fixed_points, induced_module, restrict_module, GModule, ShortExactSequence,
};
use crate::report::{Check, Report};

fn cochain_value(layout: &CochainLayout, f: &[BigInt], tuple_idx: usize) -> Vec<BigInt> {
    (0..layout.gens)
        .map(|j| f[layout.index(j, tuple_idx)].clone())
        .collect()
}

fn set_cochain_value(layout: &CochainLayout, f: &mut [BigInt], tuple_idx: usize, value: &[BigInt]) {
    for (j, v) in value.iter().enumerate() {
        f[layout.index(j, tuple_idx)] = v.clone();
    }
}

/// Columns of an induced cohomology map, one per generator of `src`, by
/// mapping representative cocycles and canonicalizing in `tgt`.
fn induced_map(
    src: &CohomologySpace,
    tgt: &CohomologySpace,
    mut map_cochain: impl FnMut(&[BigInt]) -> Result<Vec<BigInt>>,
) -> Result<AbHom> {
    let mut mat = IntMatrix::zero(tgt.group().rank(), src.group().rank());
    for (c, rep) in src.generator_reps()?.into_iter().enumerate() {
        let image = map_cochain(&rep)?;
        let class = tgt.class_of(&image)?;
        for (r, v) in class.into_iter().enumerate() {
            mat.set(r, c, v);
        }
    }
    AbHom::new(src.group().clone(), tgt.group().clone(), mat)
}

/// Cochain-level coefficient change along an equivariant hom of carriers.
fn map_coefficients(
    src: &CochainLayout,
    tgt: &CochainLayout,
    t: &AbHom,
    f: &[BigInt],
) -> Vec<BigInt> {
    debug_assert_eq!(src.tuples, tgt.tuples);
    let mut out = vec![BigInt::zero(); tgt.rank()];
    for tuple in 0..src.tuples {
        let v = t.apply(&cochain_value(src, f, tuple));
        set_cochain_value(tgt, &mut out, tuple, &v);
    }
    out
}

/// Cochain-level restriction to a subgroup along the embedding list.
fn restrict_cochain(
    g_layout: &CochainLayout,
    u_layout: &CochainLayout,
    embed: &[usize],
    f: &[BigInt],
) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); u_layout.rank()];
    for u_tuple in 0..u_layout.tuples {
        let local = u_layout.unpack_tuple(u_tuple);
        let ambient: Vec<usize> = local.iter().map(|&i| embed[i]).collect();
        let g_tuple = g_layout.tuple_index(&ambient);
        let v = cochain_value(g_layout, f, g_tuple);
        set_cochain_value(u_layout, &mut out, u_tuple, &v);
    }
    out
}

/// The induced restriction map res: H^n(G, M) -> H^n(U, M).
pub fn restriction_hom(
    m: &GModule,
    u_elems: &[usize],
    degree: usize,
    budget: &Budget,
) -> Result<AbHom> {
    let (_, embed) = m.group().subgroup(u_elems)?;
    let m_u = restrict_module(m, u_elems)?;
    let s_g = cohomology_space(m, degree, budget)?;
    let s_u = cohomology_space(&m_u, degree, budget)?;
    let gl = *s_g.layout();
    let ul = *s_u.layout();
    induced_map(&s_g, &s_u, |f| Ok(restrict_cochain(&gl, &ul, &embed, f)))
}

/// Restriction applied to explicit classes: maps each representative of `x`
/// and returns H^n(U, M) with the canonicalized images.
pub fn restriction(
    m: &GModule,
    u_elems: &[usize],
    x: &CohomologyResult,
    budget: &Budget,
) -> Result<CohomologyResult> {
    let reps = x
        .representatives
        .as_ref()
        .ok_or(Error::MissingRepresentative)?;
    if x.degree < 0 {
        return Err(Error::UnsupportedDegree {
            degree: x.degree,
            reason: "cochain-level restriction needs ordinary degrees".into(),
        });
    }
    let degree = x.degree as usize;
    let (_, embed) = m.group().subgroup(u_elems)?;
    let m_u = restrict_module(m, u_elems)?;
    let s_g = cohomology_space(m, degree, budget)?;
    let s_u = cohomology_space(&m_u, degree, budget)?;
    let mapped: Vec<Vec<BigInt>> = reps
        .iter()
        .map(|f| {
            let res = restrict_cochain(s_g.layout(), s_u.layout(), &embed, f);
            s_u.rep_of(&s_u.class_of(&res)?)
        })
        .collect::<Result<_>>()?;
    Ok(CohomologyResult {
        degree: x.degree,
        group: s_u.group().clone(),
        representatives: Some(mapped),
    })
}

struct Corestriction {
    s_u: CohomologySpace,
    s_g: CohomologySpace,
    map: AbHom,
}

/// Corestriction through the induced module: invert the evaluation-at-the-
/// identity-coset isomorphism H^n(G, Ind) -> H^n(U, M) and push forward
/// along the equivariant trace phi -> sum over cosets of r^-1 . phi(r).
fn corestriction_data(
    m: &GModule,
    u_elems: &[usize],
    degree: usize,
    budget: &Budget,
) -> Result<Corestriction> {
    if degree > 2 {
        return Err(Error::UnsupportedDegree {
            degree: degree as i64,
            reason: "corestriction is provided in degrees 0..=2".into(),
        });
    }
    let g = m.group();
    let (_, embed) = g.subgroup(u_elems)?;
    let m_u = restrict_module(m, u_elems)?;
    let ind = induced_module(g, u_elems, &m_u)?;
    let s_u = cohomology_space(&m_u, degree, budget)?;
    let s_ind = cohomology_space(&ind, degree, budget)?;
    let s_g = cohomology_space(m, degree, budget)?;
    let (reps, _) = g.right_cosets(&embed);
    let t = reps.len();
    let k = m.carrier().rank();

    // evaluation at the identity coset, cochain level
    let ind_layout = *s_ind.layout();
    let u_layout = *s_u.layout();
    let eval = |f: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); u_layout.rank()];
        for u_tuple in 0..u_layout.tuples {
            let local = u_layout.unpack_tuple(u_tuple);
            let ambient: Vec<usize> = local.iter().map(|&i| embed[i]).collect();
            let g_tuple = ind_layout.tuple_index(&ambient);
            for j in 0..k {
                out[u_layout.index(j, u_tuple)] =
                    f[ind_layout.index(j * t, g_tuple)].clone();
            }
        }
        out
    };
    let shapiro = induced_map(&s_ind, &s_u, |f| Ok(eval(f)))?;
    if s_ind.group() != s_u.group() {
        return Err(Error::Internal(format!(
            "induced-module cohomology {} differs from subgroup cohomology {}",
            s_ind.group(),
            s_u.group()
        )));
    }
    let solver = HomSolver::new(&shapiro);
    let mut inv = IntMatrix::zero(s_ind.group().rank(), s_u.group().rank());
    for i in 0..s_u.group().rank() {
        let mut e = vec![BigInt::zero(); s_u.group().rank()];
        e[i] = BigInt::one();
        let pre = solver.solve(&e).ok_or_else(|| {
            Error::Internal("evaluation isomorphism failed to invert".into())
        })?;
        for (r, v) in pre.into_iter().enumerate() {
            inv.set(r, i, v);
        }
    }
    let shapiro_inv = AbHom::new(s_u.group().clone(), s_ind.group().clone(), inv)?;

    // trace Ind -> M, using the full G-action on M
    let mut tr = IntMatrix::zero(k, k * t);
    for (i, &r) in reps.iter().enumerate() {
        let block = m.action(g.inverse(r)).matrix();
        for jo in 0..k {
            for ji in 0..k {
                let e = block.at(jo, ji);
                if !e.is_zero() {
                    tr.set(jo, ji * t + i, e.clone());
                }
            }
        }
    }
    let tr = AbHom::new(ind.carrier().clone(), m.carrier().clone(), tr)?;
    let g_layout = *s_g.layout();
    let trace_star = induced_map(&s_ind, &s_g, |f| {
        Ok(map_coefficients(&ind_layout, &g_layout, &tr, f))
    })?;
    let map = trace_star.compose(&shapiro_inv)?;
    Ok(Corestriction { s_u, s_g, map })
}

/// The induced corestriction map cor: H^n(U, M) -> H^n(G, M).
pub fn corestriction_hom(
    m: &GModule,
    u_elems: &[usize],
    degree: usize,
    budget: &Budget,
) -> Result<AbHom> {
    Ok(corestriction_data(m, u_elems, degree, budget)?.map)
}

/// Corestriction applied to explicit classes over the subgroup.
pub fn corestriction(
    m: &GModule,
    u_elems: &[usize],
    x: &CohomologyResult,
    budget: &Budget,
) -> Result<CohomologyResult> {
    let reps = x
        .representatives
        .as_ref()
        .ok_or(Error::MissingRepresentative)?;
    if x.degree < 0 {
        return Err(Error::UnsupportedDegree {
            degree: x.degree,
            reason: "cochain-level corestriction needs ordinary degrees".into(),
        });
    }
    let data = corestriction_data(m, u_elems, x.degree as usize, budget)?;
    let mapped: Vec<Vec<BigInt>> = reps
        .iter()
        .map(|f| {
            let class = data.s_u.class_of(f)?;
            data.s_g.rep_of(&data.map.apply(&class))
        })
        .collect::<Result<_>>()?;
    Ok(CohomologyResult {
        degree: x.degree,
        group: data.s_g.group().clone(),
        representatives: Some(mapped),
    })
}

/// M^U as a module over G/U (U normal), with the inclusion of carriers.
pub fn fixed_point_module(m: &GModule, u_elems: &[usize]) -> Result<(GModule, AbHom, Vec<usize>)> {
    let (q_group, proj) = m.group().quotient_by(u_elems)?;
    let m_u = restrict_module(m, u_elems)?;
    let (fix, incl) = fixed_points(&m_u)?;
    let solver = HomSolver::new(&incl);
    let coset_rep = |c: usize| -> usize {
        m.group()
            .elements()
            .find(|&g| proj[g] == c)
            .expect("every coset has elements")
    };
    let mut action = Vec::with_capacity(q_group.order());
    for c in q_group.elements() {
        let rep = coset_rep(c);
        let mut mat = IntMatrix::zero(fix.rank(), fix.rank());
        for j in 0..fix.rank() {
            let mut e = vec![BigInt::zero(); fix.rank()];
            e[j] = BigInt::one();
            let image = m.action(rep).apply(&incl.apply(&e));
            let pre = solver.solve(&image).ok_or_else(|| {
                Error::Internal("fixed points are not stable under the quotient action".into())
            })?;
            for (r, v) in pre.into_iter().enumerate() {
                mat.set(r, j, v);
            }
        }
        action.push(AbHom::new(fix.clone(), fix.clone(), mat)?);
    }
    Ok((GModule::new(q_group, fix, action)?, incl, proj))
}

/// The induced inflation map inf: H^n(G/U, M^U) -> H^n(G, M), U normal.
pub fn inflation_hom(
    m: &GModule,
    u_elems: &[usize],
    degree: usize,
    budget: &Budget,
) -> Result<AbHom> {
    let (mq, incl, proj) = fixed_point_module(m, u_elems)?;
    let s_q = cohomology_space(&mq, degree, budget)?;
    let s_g = cohomology_space(m, degree, budget)?;
    let ql = *s_q.layout();
    let gl = *s_g.layout();
    induced_map(&s_q, &s_g, |f| {
        let mut out = vec![BigInt::zero(); gl.rank()];
        for g_tuple in 0..gl.tuples {
            let ambient = gl.unpack_tuple(g_tuple);
            let projected: Vec<usize> = ambient.iter().map(|&g| proj[g]).collect();
            let q_tuple = ql.tuple_index(&projected);
            let v = incl.apply(&cochain_value(&ql, f, q_tuple));
            set_cochain_value(&gl, &mut out, g_tuple, &v);
        }
        Ok(out)
    })
}

/// Inflation applied to explicit classes over the quotient acting on M^U.
pub fn inflation(
    m: &GModule,
    u_elems: &[usize],
    x: &CohomologyResult,
    budget: &Budget,
) -> Result<CohomologyResult> {
    let reps = x
        .representatives
        .as_ref()
        .ok_or(Error::MissingRepresentative)?;
    if x.degree < 0 {
        return Err(Error::UnsupportedDegree {
            degree: x.degree,
            reason: "cochain-level inflation needs ordinary degrees".into(),
        });
    }
    let degree = x.degree as usize;
    let (mq, incl, proj) = fixed_point_module(m, u_elems)?;
    let s_q = cohomology_space(&mq, degree, budget)?;
    let s_g = cohomology_space(m, degree, budget)?;
    let ql = *s_q.layout();
    let gl = *s_g.layout();
    let mapped: Vec<Vec<BigInt>> = reps
        .iter()
        .map(|f| {
            let mut out = vec![BigInt::zero(); gl.rank()];
            for g_tuple in 0..gl.tuples {
                let ambient = gl.unpack_tuple(g_tuple);
                let projected: Vec<usize> = ambient.iter().map(|&g| proj[g]).collect();
                let v = incl.apply(&cochain_value(&ql, f, ql.tuple_index(&projected)));
                set_cochain_value(&gl, &mut out, g_tuple, &v);
            }
            s_g.rep_of(&s_g.class_of(&out)?)
        })
        .collect::<Result<_>>()?;
    Ok(CohomologyResult {
        degree: x.degree,
        group: s_g.group().clone(),
        representatives: Some(mapped),
    })
}

/// Snake-lemma connecting homomorphism H^n(quo) -> H^{n+1}(sub): lift a
/// cocycle through the projection pointwise, apply the differential, pull
/// the result back through the inclusion.
pub fn connecting_hom(
    ses: &ShortExactSequence,
    degree: usize,
    budget: &Budget,
) -> Result<AbHom> {
    let s_n = cohomology_space(&ses.quo, degree, budget)?;
    let s_l = cohomology_space(&ses.sub, degree + 1, budget)?;
    let proj_solver = HomSolver::new(&ses.proj);
    let incl_solver = HomSolver::new(&ses.incl);
    let nl = *s_n.layout();
    let ml = CochainLayout::new(&ses.mid, degree, budget)?;
    let ll = *s_l.layout();
    let mid_tgt = CochainLayout::new(&ses.mid, degree + 1, &Budget::new(budget.max_rows()))?;
    induced_map(&s_n, &s_l, |z| {
        let mut w = vec![BigInt::zero(); ml.rank()];
        for tuple in 0..nl.tuples {
            let value = cochain_value(&nl, z, tuple);
            let lift = proj_solver
                .solve(&value)
                .ok_or_else(|| Error::Internal("projection lost surjectivity".into()))?;
            set_cochain_value(&ml, &mut w, tuple, &lift);
        }
        let dw = apply_differential(&ses.mid, degree, &w, budget)?;
        let mut v = vec![BigInt::zero(); ll.rank()];
        for tuple in 0..mid_tgt.tuples {
            let value = cochain_value(&mid_tgt, &dw, tuple);
            let pre = incl_solver.solve(&value).ok_or_else(|| {
                Error::NotExact("differential of the lift misses the submodule".into())
            })?;
            set_cochain_value(&ll, &mut v, tuple, &pre);
        }
        Ok(v)
    })
}

/// Invariant-factor comparison of H^n(U, M) with H^n(G, Ind_U^G M) for
/// n = 0, 1, 2.
pub fn shapiro_check(
    g: &crate::gmodule::FiniteGroup,
    u_elems: &[usize],
    m_over_u: &GModule,
    budget: &Budget,
) -> Result<Report> {
    let ind = induced_module(g, u_elems, m_over_u)?;
    let mut report = Report::new(format!(
        "shapiro: |U| = {}, [G:U] = {}, M = {}",
        m_over_u.group().order(),
        g.order() / m_over_u.group().order(),
        m_over_u.carrier()
    ));
    for n in 0..=2 {
        let lhs = cohomology(m_over_u, n, budget)?.group;
        let rhs = cohomology(&ind, n, budget)?.group;
        report.push(Check::eq(format!("H^{n}(U, M) = H^{n}(G, Ind M)"), lhs, rhs));
    }
    Ok(report)
}

/// Vanishing of H^1 and H^2 when the group and module orders are coprime.
pub fn coprime_vanishing_check(m: &GModule, budget: &Budget) -> Result<Report> {
    let g_order = BigInt::from(m.group().order());
    if !g_order.gcd(&m.carrier().order()).is_one() {
        return Err(Error::BadInput(format!(
            "|G| = {} and |M| = {} are not coprime",
            g_order,
            m.carrier().order()
        )));
    }
    let mut report = Report::new(format!(
        "coprime vanishing: |G| = {}, M = {}",
        m.group().order(),
        m.carrier()
    ));
    for n in 1..=2 {
        let h = cohomology(m, n, budget)?.group;
        report.push(Check::new(
            format!("H^{n}(G, M) = 0"),
            h.is_trivial(),
            h,
            FinAbGroup::trivial(),
        ));
    }
    Ok(report)
}

/// Exactness of the nine-term H^0..H^2 window of the long exact sequence at
/// every interior node, via image/kernel cardinalities.
pub fn les_window_check(ses: &ShortExactSequence, budget: &Budget) -> Result<Report> {
    let mut report = Report::new(format!(
        "long exact sequence window: 0 -> {} -> {} -> {} -> 0 over group of order {}",
        ses.sub.carrier(),
        ses.mid.carrier(),
        ses.quo.carrier(),
        ses.mid.group().order()
    ));
    let spaces_l: Vec<CohomologySpace> = (0..=2)
        .map(|n| cohomology_space(&ses.sub, n, budget))
        .collect::<Result<_>>()?;
    let spaces_m: Vec<CohomologySpace> = (0..=2)
        .map(|n| cohomology_space(&ses.mid, n, budget))
        .collect::<Result<_>>()?;
    let spaces_n: Vec<CohomologySpace> = (0..=2)
        .map(|n| cohomology_space(&ses.quo, n, budget))
        .collect::<Result<_>>()?;

    let coeff_map = |src: &CohomologySpace, tgt: &CohomologySpace, t: &AbHom| -> Result<AbHom> {
        let sl = *src.layout();
        let tl = *tgt.layout();
        let t = t.clone();
        induced_map(src, tgt, |f| Ok(map_coefficients(&sl, &tl, &t, f)))
    };

    let mut maps: Vec<(String, AbHom)> = Vec::new();
    for q in 0..=2usize {
        maps.push((
            format!("H^{q}(L) -> H^{q}(M)"),
            coeff_map(&spaces_l[q], &spaces_m[q], &ses.incl)?,
        ));
        maps.push((
            format!("H^{q}(M) -> H^{q}(N)"),
            coeff_map(&spaces_m[q], &spaces_n[q], &ses.proj)?,
        ));
        if q < 2 {
            maps.push((
                format!("H^{q}(N) -> H^{}(L)", q + 1),
                connecting_hom(ses, q, budget)?,
            ));
        }
    }

    // injectivity at the leading node
    let (k0, _) = hom_kernel(&maps[0].1)?;
    report.push(Check::new(
        "H^0(L) -> H^0(M) injective",
        k0.is_trivial(),
        format!("kernel {k0}"),
        "kernel 0",
    ));
    for w in maps.windows(2) {
        let (in_name, f) = &w[0];
        let (out_name, h) = &w[1];
        let composed_zero = h.compose(f)?.is_zero();
        let (im, _) = hom_image(f)?;
        let (ker, _) = hom_kernel(h)?;
        report.push(Check::new(
            format!("exact between ({in_name}) and ({out_name})"),
            composed_zero && im.order() == ker.order(),
            format!("im {}", im.order()),
            format!("ker {} (composite zero: {composed_zero})", ker.order()),
        ));
    }
    Ok(report)
}

/// The degree-1 inflation-restriction sequence for a normal subgroup:
/// injectivity of inflation, exactness at H^1(G, M), invariance of the
/// restriction image under conjugation, and (when H^2(G/U, M^U) vanishes)
/// surjectivity onto the conjugation-fixed part.
pub fn inflation_restriction_check(
    m: &GModule,
    u_elems: &[usize],
    budget: &Budget,
) -> Result<Report> {
    let mut report = Report::new(format!(
        "inflation-restriction at degree 1: |G| = {}, |U| = {}, M = {}",
        m.group().order(),
        u_elems.len(),
        m.carrier()
    ));
    let inf1 = inflation_hom(m, u_elems, 1, budget)?;
    let res1 = restriction_hom(m, u_elems, 1, budget)?;
    let (ker_inf, _) = hom_kernel(&inf1)?;
    report.push(Check::new(
        "inflation injective",
        ker_inf.is_trivial(),
        format!("kernel {ker_inf}"),
        "kernel 0",
    ));
    let composed = res1.compose(&inf1)?;
    let (im_inf, _) = hom_image(&inf1)?;
    let (ker_res, _) = hom_kernel(&res1)?;
    report.push(Check::new(
        "image of inflation = kernel of restriction",
        composed.is_zero() && im_inf.order() == ker_res.order(),
        format!("im {}", im_inf.order()),
        format!("ker {}", ker_res.order()),
    ));

    // conjugation action of G on H^1(U, M)
    let (_, embed) = m.group().subgroup(u_elems)?;
    let m_u = restrict_module(m, u_elems)?;
    let s_u = cohomology_space(&m_u, 1, budget)?;
    let ul = *s_u.layout();
    let (reps, _) = m.group().right_cosets(&embed);
    let mut conj_maps = Vec::new();
    for &g in &reps {
        let conj = induced_map(&s_u, &s_u, |f| {
            let mut out = vec![BigInt::zero(); ul.rank()];
            for tuple in 0..ul.tuples {
                let local = ul.unpack_tuple(tuple);
                let conjugated: Vec<usize> = local
                    .iter()
                    .map(|&i| {
                        let u = embed[i];
                        let c = m
                            .group()
                            .mul(m.group().mul(m.group().inverse(g), u), g);
                        embed
                            .iter()
                            .position(|&x| x == c)
                            .expect("conjugation preserves a normal subgroup")
                    })
                    .collect();
                let v = m
                    .action(g)
                    .apply(&cochain_value(&ul, f, ul.tuple_index(&conjugated)));
                set_cochain_value(&ul, &mut out, tuple, &v);
            }
            Ok(out)
        })?;
        conj_maps.push(conj);
    }
    let mut image_invariant = true;
    for conj in &conj_maps {
        if conj.compose(&res1)? != res1 {
            image_invariant = false;
        }
    }
    report.push(Check::new(
        "restriction image is conjugation-invariant",
        image_invariant,
        image_invariant.to_string(),
        "true",
    ));

    // fixed part of H^1(U, M) under conjugation
    let h1u = s_u.group().clone();
    let id = AbHom::identity(&h1u);
    let mut rows = Vec::new();
    for conj in &conj_maps {
        rows.extend(conj.sub(&id)?.kernel_rows());
    }
    let fixed = subquotient(&h1u, &h1u.exponent(), rows, std::iter::empty(), false)?;
    let (im_res, _) = hom_image(&res1)?;
    report.push(Check::new(
        "restriction image sits inside the fixed part",
        (fixed.group.order() % im_res.order()).is_zero(),
        format!("im {}", im_res.order()),
        format!("fixed {}", fixed.group.order()),
    ));
    let (mq, _, _) = fixed_point_module(m, u_elems)?;
    let h2q = cohomology(&mq, 2, budget)?.group;
    if h2q.is_trivial() {
        report.push(Check::new(
            "restriction onto the fixed part (transgression target vanishes)",
            im_res.order() == fixed.group.order(),
            format!("im {}", im_res.order()),
            format!("fixed {}", fixed.group.order()),
        ));
    }
    Ok(report)
}
