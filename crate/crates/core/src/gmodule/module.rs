use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;

use super::group::FiniteGroup;
use crate::abelian::subquotient::{mod_inverse, span, sparse_from_dense, subquotient, SparseVec};
use crate::abelian::{hom_image, hom_kernel, quotient, AbHom, FinAbGroup, HomSolver, IntMatrix};
use crate::error::{Error, Result};

/// Finite abelian group with an action of a finite group by automorphisms.
#[derive(Clone)]
pub struct GModule {
    group: FiniteGroup,
    carrier: FinAbGroup,
    /// action[g] for every group element, index-aligned with the group
    action: Vec<AbHom>,
}

impl GModule {
    /// Checks the action axioms exhaustively: identity acts as the identity
    /// and action(g*h) = action(g) . action(h) for all pairs.
    pub fn new(group: FiniteGroup, carrier: FinAbGroup, action: Vec<AbHom>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::BadAction(format!(
                "{} action maps for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        for (g, h) in action.iter().enumerate() {
            if h.domain() != &carrier || h.codomain() != &carrier {
                return Err(Error::BadAction(format!(
                    "action of element {g} is not an endomorphism of the carrier"
                )));
            }
        }
        if action[0] != AbHom::identity(&carrier) {
            return Err(Error::BadAction("identity element acts nontrivially".into()));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let gh = group.mul(g, h);
                let composed = action[g].compose(&action[h])?;
                if composed != action[gh] {
                    return Err(Error::BadAction(format!(
                        "action({g})*action({h}) differs from action of their product"
                    )));
                }
            }
        }
        // invertibility follows: action(g) . action(g^-1) = identity
        Ok(GModule {
            group,
            carrier,
            action,
        })
    }

    pub fn trivial(group: FiniteGroup, carrier: FinAbGroup) -> Self {
        let id = AbHom::identity(&carrier);
        let action = vec![id; group.order()];
        GModule {
            group,
            carrier,
            action,
        }
    }

    /// Build a module from actions of a generating set, expanding to all
    /// elements by following words in the Cayley graph, then validating.
    pub fn from_generator_actions(
        group: FiniteGroup,
        carrier: FinAbGroup,
        gens: &[(usize, AbHom)],
    ) -> Result<Self> {
        let n = group.order();
        let mut action: Vec<Option<AbHom>> = vec![None; n];
        action[0] = Some(AbHom::identity(&carrier));
        let mut frontier = vec![0usize];
        while let Some(g) = frontier.pop() {
            for (s, h) in gens {
                let gs = group.mul(*s, g);
                if action[gs].is_none() {
                    let composed = h.compose(action[g].as_ref().unwrap())?;
                    action[gs] = Some(composed);
                    frontier.push(gs);
                }
            }
        }
        let action: Vec<AbHom> = action
            .into_iter()
            .enumerate()
            .map(|(g, a)| {
                a.ok_or_else(|| {
                    Error::BadAction(format!(
                        "element {g} is not reachable from the given generators"
                    ))
                })
            })
            .collect::<Result<_>>()?;
        GModule::new(group, carrier, action)
    }

    /// Cyclic-group module determined by the action of the generator 1.
    pub fn cyclic_action(group: FiniteGroup, carrier: FinAbGroup, gen_action: AbHom) -> Result<Self> {
        if group.order() == 1 {
            return Ok(GModule::trivial(group, carrier));
        }
        GModule::from_generator_actions(group, carrier, &[(1, gen_action)])
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn carrier(&self) -> &FinAbGroup {
        &self.carrier
    }

    pub fn action(&self, g: usize) -> &AbHom {
        &self.action[g]
    }

    /// Canonical splitting into primary parts; the projector onto each part
    /// commutes with every action map, so each part is a module again.
    pub fn primary_decomposition(&self) -> Result<Vec<(BigInt, GModule, AbHom, AbHom)>> {
        let mut out = Vec::new();
        for p in self.carrier.primes() {
            let part = self.carrier.primary_part(&p)?;
            let mut incl = IntMatrix::zero(self.carrier.rank(), part.rank());
            let mut proj = IntMatrix::zero(part.rank(), self.carrier.rank());
            let mut c = 0usize;
            for (j, d) in self.carrier.invariant_factors().iter().enumerate() {
                let mut pa = BigInt::one();
                let mut rest = d.clone();
                while (&rest % &p).is_zero() {
                    rest /= &p;
                    pa *= &p;
                }
                if pa.is_one() {
                    continue;
                }
                let w = mod_inverse(&rest, &pa).ok_or_else(|| {
                    Error::Internal("coprime part not invertible in primary split".into())
                })?;
                incl.set(j, c, rest.clone());
                proj.set(c, j, w);
                c += 1;
            }
            let incl = AbHom::new(part.clone(), self.carrier.clone(), incl)?;
            let proj = AbHom::new(self.carrier.clone(), part.clone(), proj)?;
            let action: Vec<AbHom> = (0..self.group.order())
                .map(|g| proj.compose(&self.action[g].compose(&incl)?))
                .collect::<Result<_>>()?;
            let module = GModule::new(self.group.clone(), part, action)?;
            out.push((p, module, incl, proj));
        }
        Ok(out)
    }
}

impl fmt::Debug for GModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GModule({} over group of order {})",
            self.carrier,
            self.group.order()
        )
    }
}

/// Multiplicative character with values in the units of Z/m.
#[derive(Clone, Debug)]
pub struct Character {
    modulus: BigInt,
    values: Vec<BigInt>,
}

impl Character {
    pub fn new(group: &FiniteGroup, modulus: BigInt, values: Vec<BigInt>) -> Result<Self> {
        if modulus < BigInt::one() {
            return Err(Error::BadCharacter("modulus below 1".into()));
        }
        if values.len() != group.order() {
            return Err(Error::BadCharacter("one value per element required".into()));
        }
        let values: Vec<BigInt> = values.into_iter().map(|v| v.mod_floor(&modulus)).collect();
        if !modulus.is_one() {
            if !values[0].is_one() {
                return Err(Error::BadCharacter("identity must map to 1".into()));
            }
            for (g, v) in values.iter().enumerate() {
                if !v.gcd(&modulus).is_one() {
                    return Err(Error::BadCharacter(format!(
                        "value at element {g} is not a unit"
                    )));
                }
            }
            for g in 0..group.order() {
                for h in 0..group.order() {
                    let gh = group.mul(g, h);
                    if (&values[g] * &values[h] - &values[gh]).mod_floor(&modulus) != BigInt::zero()
                    {
                        return Err(Error::BadCharacter(format!(
                            "multiplicativity fails at ({g}, {h})"
                        )));
                    }
                }
            }
        }
        Ok(Character { modulus, values })
    }

    pub fn trivial(group: &FiniteGroup, modulus: BigInt) -> Self {
        Character {
            values: vec![BigInt::one().mod_floor(&modulus); group.order()],
            modulus,
        }
    }

    /// Order-2 group character sending the non-identity element to -1.
    pub fn sign_of_order_two(group: &FiniteGroup, modulus: BigInt) -> Result<Self> {
        if group.order() != 2 {
            return Err(Error::BadCharacter("group must have order 2".into()));
        }
        let minus_one = (-BigInt::one()).mod_floor(&modulus);
        Character::new(group, modulus.clone(), vec![BigInt::one(), minus_one])
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn value(&self, g: usize) -> &BigInt {
        &self.values[g]
    }
}

/// Fixed points M^G with the inclusion into the carrier.
pub fn fixed_points(m: &GModule) -> Result<(FinAbGroup, AbHom)> {
    let carrier = m.carrier();
    let id = AbHom::identity(carrier);
    let mut rows: Vec<(SparseVec, BigInt)> = Vec::new();
    for g in m.group().elements().skip(1) {
        let diff = m.action(g).sub(&id)?;
        rows.extend(diff.kernel_rows());
    }
    let sq = subquotient(carrier, &carrier.exponent(), rows, std::iter::empty(), true)?;
    let group = sq.group.clone();
    let mut incl = IntMatrix::zero(carrier.rank(), group.rank());
    for (c, rep) in sq.generator_reps()?.into_iter().enumerate() {
        for (i, v) in rep.into_iter().enumerate() {
            incl.set(i, c, v);
        }
    }
    Ok((group.clone(), AbHom::new(group, carrier.clone(), incl)?))
}

/// The norm N: m -> sum over g of g.m, as an endomorphism of the carrier.
pub fn norm_map(m: &GModule) -> AbHom {
    let mut acc = AbHom::identity(m.carrier());
    for g in m.group().elements().skip(1) {
        acc = acc.add(m.action(g)).expect("norm summands share ends");
    }
    acc
}

/// Generators g.x - x of the augmentation submodule, as carrier columns.
pub(crate) fn augmentation_generators(m: &GModule) -> Vec<SparseVec> {
    let id = AbHom::identity(m.carrier());
    let mut cols = Vec::new();
    for g in m.group().elements().skip(1) {
        let diff = m.action(g).sub(&id).expect("difference of endomorphisms");
        cols.extend(diff.image_cols());
    }
    cols
}

/// The subgroup generated by all g.x - x.
pub fn augmentation_submodule(m: &GModule) -> Result<FinAbGroup> {
    let (group, _) = span(m.carrier(), augmentation_generators(m))?;
    Ok(group)
}

/// Dual of a homomorphism under Hom(-, Q/Z), with the canonical
/// identification Hom(Z/d, Q/Z) = Z/d.
fn dual_hom(h: &AbHom) -> Result<AbHom> {
    let a = h.domain();
    let b = h.codomain();
    let mut m = IntMatrix::zero(a.rank(), b.rank());
    for i in 0..a.rank() {
        let ai = &a.invariant_factors()[i];
        for j in 0..b.rank() {
            let bj = &b.invariant_factors()[j];
            let num = ai * h.matrix().at(j, i);
            let (q, r) = num.div_mod_floor(bj);
            if !r.is_zero() {
                return Err(Error::Internal(
                    "dual of a well-defined hom must divide exactly".into(),
                ));
            }
            m.set(i, j, q.mod_floor(ai));
        }
    }
    AbHom::new(b.clone(), a.clone(), m)
}

/// Pontryagin dual module: same carrier invariants, contragredient action
/// (g.f)(x) = f(g^-1 x).
pub fn dual_module(m: &GModule) -> Result<GModule> {
    let action: Vec<AbHom> = m
        .group()
        .elements()
        .map(|g| dual_hom(m.action(m.group().inverse(g))))
        .collect::<Result<_>>()?;
    GModule::new(m.group().clone(), m.carrier().clone(), action)
}

/// Twist the action by a character: action(g) becomes chi(g) * action(g).
/// The character modulus must be a multiple of the carrier exponent.
pub fn twist(m: &GModule, chi: &Character) -> Result<GModule> {
    let exp = m.carrier().exponent();
    if !(chi.modulus() % &exp).is_zero() {
        return Err(Error::BadCharacter(format!(
            "character modulus {} is not a multiple of the carrier exponent {exp}",
            chi.modulus()
        )));
    }
    let action: Vec<AbHom> = m
        .group()
        .elements()
        .map(|g| m.action(g).scale(&chi.value(g).mod_floor(&exp)))
        .collect();
    GModule::new(m.group().clone(), m.carrier().clone(), action)
}

/// Induced module Ind_U^G M: U-equivariant maps G -> M, realized on the
/// fixed right-coset representative list. Coordinates are (M-generator,
/// coset), generator-major; the G-action permutes cosets with U-twists.
pub fn induced_module(g: &FiniteGroup, u_elems: &[usize], m: &GModule) -> Result<GModule> {
    let (u_group, embed) = g.subgroup(u_elems)?;
    if &u_group != m.group() {
        return Err(Error::BadAction(
            "module is not over the named subgroup".into(),
        ));
    }
    let (reps, coset_of) = g.right_cosets(&embed);
    let t = reps.len();
    let k = m.carrier().rank();
    let mut factors = Vec::with_capacity(k * t);
    for d in m.carrier().invariant_factors() {
        for _ in 0..t {
            factors.push(d.clone());
        }
    }
    let carrier = FinAbGroup::new(factors)?;
    let index = |j: usize, i: usize| j * t + i;
    let u_local = |u: usize| {
        embed
            .iter()
            .position(|&x| x == u)
            .expect("coset twist lands in the subgroup")
    };
    let mut action = Vec::with_capacity(g.order());
    for a in g.elements() {
        let mut mat = IntMatrix::zero(k * t, k * t);
        for i in 0..t {
            // (a . phi)(r_i) = u . phi(r_j) where r_i a = u r_j
            let x = g.mul(reps[i], a);
            let j_cos = coset_of[x];
            let u = g.mul(x, g.inverse(reps[j_cos]));
            let block = m.action(u_local(u)).matrix();
            for jm_out in 0..k {
                for jm_in in 0..k {
                    let e = block.at(jm_out, jm_in);
                    if !e.is_zero() {
                        mat.set(index(jm_out, i), index(jm_in, j_cos), e.clone());
                    }
                }
            }
        }
        action.push(AbHom::new(carrier.clone(), carrier.clone(), mat)?);
    }
    GModule::new(g.clone(), carrier, action)
}

/// Restrict the action to a subgroup (same carrier).
pub fn restrict_module(m: &GModule, u_elems: &[usize]) -> Result<GModule> {
    let (u_group, embed) = m.group().subgroup(u_elems)?;
    let action: Vec<AbHom> = embed.iter().map(|&g| m.action(g).clone()).collect();
    GModule::new(u_group, m.carrier().clone(), action)
}

/// Direct sum of two modules over the same group, with the canonical
/// inclusions and projections (the carrier is renormalized to
/// invariant-factor form, so the maps carry the change of basis).
pub struct ModuleSum {
    pub module: GModule,
    pub include_left: AbHom,
    pub include_right: AbHom,
    pub project_left: AbHom,
    pub project_right: AbHom,
}

pub fn direct_sum_module(a: &GModule, b: &GModule) -> Result<ModuleSum> {
    if a.group() != b.group() {
        return Err(Error::BadAction("direct sum over different groups".into()));
    }
    let ka = a.carrier().rank();
    let kb = b.carrier().rank();
    let mut concat: Vec<BigInt> = a.carrier().invariant_factors().to_vec();
    concat.extend(b.carrier().invariant_factors().iter().cloned());
    // Canonicalize Z^k/diag(concat) via a Smith form of the diagonal.
    let diag = IntMatrix::diagonal(&concat);
    let form = crate::abelian::smith_with(
        &diag,
        crate::abelian::Transforms {
            u: true,
            u_inv: true,
            v: false,
            v_inv: false,
        },
    );
    let u = form.u.unwrap();
    let u_inv = form.u_inv.unwrap();
    let keep: Vec<usize> = form
        .diag
        .iter()
        .enumerate()
        .filter(|(_, d)| !d.is_one())
        .map(|(i, _)| i)
        .collect();
    let sum_factors: Vec<BigInt> = keep.iter().map(|&i| form.diag[i].clone()).collect();
    let carrier = FinAbGroup::new(sum_factors)?;
    let k = ka + kb;
    // concat coords -> canonical coords
    let to_canon = |x: &[BigInt]| -> Vec<BigInt> {
        let ux = u.apply(x);
        carrier.reduce(&keep.iter().map(|&i| ux[i].clone()).collect::<Vec<_>>())
    };
    // canonical generator i -> concat coords
    let section: Vec<Vec<BigInt>> = keep
        .iter()
        .map(|&i| (0..k).map(|r| u_inv.at(r, i).clone()).collect())
        .collect();

    let build_hom = |blocks: &dyn Fn(&[BigInt]) -> Vec<BigInt>| -> Result<AbHom> {
        let mut mat = IntMatrix::zero(carrier.rank(), carrier.rank());
        for (c, s) in section.iter().enumerate() {
            let image = blocks(s);
            let canon = to_canon(&image);
            for (r, v) in canon.into_iter().enumerate() {
                mat.set(r, c, v);
            }
        }
        AbHom::new(carrier.clone(), carrier.clone(), mat)
    };

    let mut action = Vec::with_capacity(a.group().order());
    for g in a.group().elements() {
        let act_a = a.action(g).matrix().clone();
        let act_b = b.action(g).matrix().clone();
        let hom = build_hom(&|x: &[BigInt]| {
            let xa = &x[..ka];
            let xb = &x[ka..];
            let mut out = act_a.apply(xa);
            out.extend(act_b.apply(xb));
            out
        })?;
        action.push(hom);
    }
    let module = GModule::new(a.group().clone(), carrier.clone(), action)?;

    let mut inc_l = IntMatrix::zero(carrier.rank(), ka);
    for j in 0..ka {
        let mut x = vec![BigInt::zero(); k];
        x[j] = BigInt::one();
        for (r, v) in to_canon(&x).into_iter().enumerate() {
            inc_l.set(r, j, v);
        }
    }
    let mut inc_r = IntMatrix::zero(carrier.rank(), kb);
    for j in 0..kb {
        let mut x = vec![BigInt::zero(); k];
        x[ka + j] = BigInt::one();
        for (r, v) in to_canon(&x).into_iter().enumerate() {
            inc_r.set(r, j, v);
        }
    }
    let mut pr_l = IntMatrix::zero(ka, carrier.rank());
    let mut pr_r = IntMatrix::zero(kb, carrier.rank());
    for (c, s) in section.iter().enumerate() {
        for j in 0..ka {
            pr_l.set(j, c, s[j].clone());
        }
        for j in 0..kb {
            pr_r.set(j, c, s[ka + j].clone());
        }
    }
    Ok(ModuleSum {
        include_left: AbHom::new(a.carrier().clone(), carrier.clone(), inc_l)?,
        include_right: AbHom::new(b.carrier().clone(), carrier.clone(), inc_r)?,
        project_left: AbHom::new(carrier.clone(), a.carrier().clone(), pr_l)?,
        project_right: AbHom::new(carrier.clone(), b.carrier().clone(), pr_r)?,
        module,
    })
}

/// Submodule generated by the orbit closure of the given carrier elements,
/// with the restricted action and the inclusion map.
pub fn submodule_from(m: &GModule, elements: &[Vec<BigInt>]) -> Result<(GModule, AbHom)> {
    let mut cols: Vec<SparseVec> = Vec::new();
    for e in elements {
        for g in m.group().elements() {
            cols.push(sparse_from_dense(&m.action(g).apply(e)));
        }
    }
    let (sub, reps) = span(m.carrier(), cols)?;
    let mut incl = IntMatrix::zero(m.carrier().rank(), sub.rank());
    for (c, rep) in reps.iter().enumerate() {
        for (i, v) in rep.iter().enumerate() {
            incl.set(i, c, v.clone());
        }
    }
    let inclusion = AbHom::new(sub.clone(), m.carrier().clone(), incl)?;
    let solver = HomSolver::new(&inclusion);
    let action: Vec<AbHom> = m
        .group()
        .elements()
        .map(|g| {
            let mut mat = IntMatrix::zero(sub.rank(), sub.rank());
            for (c, rep) in reps.iter().enumerate() {
                let image = m.action(g).apply(rep);
                let pre = solver.solve(&image).ok_or_else(|| {
                    Error::Internal("orbit closure is not action-stable".into())
                })?;
                for (r, v) in pre.into_iter().enumerate() {
                    mat.set(r, c, v);
                }
            }
            AbHom::new(sub.clone(), sub.clone(), mat)
        })
        .collect::<Result<_>>()?;
    Ok((GModule::new(m.group().clone(), sub, action)?, inclusion))
}

/// Quotient module by the submodule generated by the orbit closure of the
/// given elements, with the projection.
pub fn quotient_module(m: &GModule, elements: &[Vec<BigInt>]) -> Result<(GModule, AbHom)> {
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    for e in elements {
        for g in m.group().elements() {
            gens.push(m.action(g).apply(e));
        }
    }
    let (q, proj) = quotient(m.carrier(), &gens)?;
    let solver = HomSolver::new(&proj);
    let sections: Vec<Vec<BigInt>> = (0..q.rank())
        .map(|i| {
            let mut e = vec![BigInt::zero(); q.rank()];
            e[i] = BigInt::one();
            solver
                .solve(&e)
                .ok_or_else(|| Error::Internal("projection is not surjective".into()))
        })
        .collect::<Result<_>>()?;
    let action: Vec<AbHom> = m
        .group()
        .elements()
        .map(|g| {
            let mut mat = IntMatrix::zero(q.rank(), q.rank());
            for (c, s) in sections.iter().enumerate() {
                let image = proj.apply(&m.action(g).apply(s));
                for (r, v) in image.into_iter().enumerate() {
                    mat.set(r, c, v);
                }
            }
            AbHom::new(q.clone(), q.clone(), mat)
        })
        .collect::<Result<_>>()?;
    Ok((GModule::new(m.group().clone(), q, action)?, proj))
}

/// A short exact sequence of modules over one group, validated at
/// construction: the maps are equivariant, the inclusion is injective, the
/// projection surjective, and image = kernel in the middle.
pub struct ShortExactSequence {
    pub sub: GModule,
    pub mid: GModule,
    pub quo: GModule,
    pub incl: AbHom,
    pub proj: AbHom,
}

impl ShortExactSequence {
    pub fn new(
        sub: GModule,
        mid: GModule,
        quo: GModule,
        incl: AbHom,
        proj: AbHom,
    ) -> Result<Self> {
        if sub.group() != mid.group() || mid.group() != quo.group() {
            return Err(Error::NotExact("modules over different groups".into()));
        }
        if incl.domain() != sub.carrier()
            || incl.codomain() != mid.carrier()
            || proj.domain() != mid.carrier()
            || proj.codomain() != quo.carrier()
        {
            return Err(Error::NotExact("maps do not line up with the modules".into()));
        }
        for g in sub.group().elements() {
            if incl.compose(sub.action(g))? != mid.action(g).compose(&incl)? {
                return Err(Error::NotExact(format!(
                    "inclusion is not equivariant at element {g}"
                )));
            }
            if proj.compose(mid.action(g))? != quo.action(g).compose(&proj)? {
                return Err(Error::NotExact(format!(
                    "projection is not equivariant at element {g}"
                )));
            }
        }
        let (ker_incl, _) = hom_kernel(&incl)?;
        if !ker_incl.is_trivial() {
            return Err(Error::NotExact("inclusion is not injective".into()));
        }
        let (im_proj, _) = hom_image(&proj)?;
        if im_proj != *quo.carrier() {
            return Err(Error::NotExact("projection is not surjective".into()));
        }
        if !proj.compose(&incl)?.is_zero() {
            return Err(Error::NotExact("composite of the two maps is nonzero".into()));
        }
        let (im_incl, _) = hom_image(&incl)?;
        let (ker_proj, _) = hom_kernel(&proj)?;
        if im_incl != ker_proj {
            return Err(Error::NotExact(
                "image of the inclusion differs from the kernel of the projection".into(),
            ));
        }
        Ok(ShortExactSequence {
            sub,
            mid,
            quo,
            incl,
            proj,
        })
    }

    /// The sequence 0 -> S -> M -> M/S -> 0 for the submodule generated by
    /// the given elements.
    pub fn from_submodule(m: &GModule, elements: &[Vec<BigInt>]) -> Result<Self> {
        let (sub, incl) = submodule_from(m, elements)?;
        let (quo, proj) = quotient_module(m, elements)?;
        ShortExactSequence::new(sub, m.clone(), quo, incl, proj)
    }
}
