use super::*;
use crate::abelian::{hom_image, AbHom, FinAbGroup, IntMatrix};
use num_bigint::BigInt;

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn group(factors: &[i64]) -> FinAbGroup {
    FinAbGroup::new(factors.iter().map(|&x| big(x)).collect()).unwrap()
}

fn inversion_module(n: i64) -> GModule {
    let g = FiniteGroup::cyclic(2).unwrap();
    let carrier = group(&[n]);
    GModule::cyclic_action(g, carrier.clone(), AbHom::scalar(&carrier, &big(-1))).unwrap()
}

#[test]
fn fixed_points_examples() {
    let z6 = group(&[6]);
    let m = GModule::trivial(FiniteGroup::cyclic(3).unwrap(), z6.clone());
    let (fix, _) = fixed_points(&m).unwrap();
    assert_eq!(fix, z6);

    let (fix, _) = fixed_points(&inversion_module(3)).unwrap();
    assert!(fix.is_trivial());

    let (fix, incl) = fixed_points(&inversion_module(4)).unwrap();
    assert_eq!(fix, group(&[2]));
    assert_eq!(incl.apply(&[big(1)]), vec![big(2)]);
}

#[test]
fn norm_map_examples() {
    let z4 = group(&[4]);
    let m = GModule::trivial(FiniteGroup::cyclic(2).unwrap(), z4.clone());
    assert_eq!(norm_map(&m), AbHom::scalar(&z4, &big(2)));

    assert!(norm_map(&inversion_module(4)).is_zero());

    let t = GModule::trivial(FiniteGroup::cyclic(1).unwrap(), z4.clone());
    assert_eq!(norm_map(&t), AbHom::identity(&z4));
}

#[test]
fn augmentation_examples() {
    let m = GModule::trivial(FiniteGroup::cyclic(2).unwrap(), group(&[6]));
    assert!(augmentation_submodule(&m).unwrap().is_trivial());

    assert_eq!(
        augmentation_submodule(&inversion_module(4)).unwrap(),
        group(&[2])
    );

    // swap action on Z/2 + Z/2: differences span the diagonal
    let c2 = FiniteGroup::cyclic(2).unwrap();
    let v = group(&[2, 2]);
    let swap = AbHom::new(
        v.clone(),
        v.clone(),
        IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]),
    )
    .unwrap();
    let m = GModule::cyclic_action(c2, v, swap).unwrap();
    assert_eq!(augmentation_submodule(&m).unwrap(), group(&[2]));
}

#[test]
fn dual_module_examples() {
    let m = GModule::trivial(FiniteGroup::cyclic(2).unwrap(), group(&[5]));
    let d = dual_module(&m).unwrap();
    assert_eq!(d.carrier(), m.carrier());
    assert_eq!(d.action(1), &AbHom::identity(m.carrier()));

    let inv = inversion_module(3);
    let d = dual_module(&inv).unwrap();
    assert_eq!(d.action(1), &AbHom::scalar(&group(&[3]), &big(-1)));

    // double dual comes back on the nose in canonical coordinates
    let c2 = FiniteGroup::cyclic(2).unwrap();
    let v = group(&[2, 4]);
    let act = AbHom::new(
        v.clone(),
        v.clone(),
        IntMatrix::from_rows(&[vec![1, 2], vec![0, 3]]),
    )
    .unwrap();
    let m = GModule::cyclic_action(c2, v, act).unwrap();
    let dd = dual_module(&dual_module(&m).unwrap()).unwrap();
    for g in m.group().elements() {
        assert_eq!(dd.action(g), m.action(g));
    }
}

#[test]
fn twist_examples() {
    let c2 = FiniteGroup::cyclic(2).unwrap();
    let m = GModule::trivial(c2.clone(), group(&[5]));
    let chi = Character::trivial(&c2, big(5));
    let t = twist(&m, &chi).unwrap();
    assert_eq!(t.action(1), m.action(1));

    // -1 = 1 mod 2: the twist of the trivial Z/2 module stays trivial
    let m2 = GModule::trivial(c2.clone(), group(&[2]));
    let sign = Character::sign_of_order_two(&c2, big(2)).unwrap();
    assert_eq!(twist(&m2, &sign).unwrap().action(1), m2.action(1));

    // over Z/3 the sign twist is inversion
    let m3 = GModule::trivial(c2.clone(), group(&[3]));
    let sign = Character::sign_of_order_two(&c2, big(3)).unwrap();
    assert_eq!(
        twist(&m3, &sign).unwrap().action(1),
        &AbHom::scalar(&group(&[3]), &big(-1))
    );

    // modulus must be a multiple of the exponent
    let bad = Character::sign_of_order_two(&c2, big(4)).unwrap();
    assert!(twist(&m3, &bad).is_err());
}

#[test]
fn induced_module_examples() {
    let g = FiniteGroup::cyclic(4).unwrap();
    let whole: Vec<usize> = g.elements().collect();

    // U = G: carrier unchanged
    let m = GModule::trivial(g.clone(), group(&[3]));
    let ind = induced_module(&g, &whole, &m).unwrap();
    assert_eq!(ind.carrier(), m.carrier());
    for a in g.elements() {
        assert_eq!(ind.action(a), m.action(a));
    }

    // U = {e}, M = Z/2: the regular permutation module
    let triv_group = FiniteGroup::cyclic(1).unwrap();
    let me = GModule::trivial(triv_group, group(&[2]));
    let reg = induced_module(&g, &[0], &me).unwrap();
    assert_eq!(reg.carrier(), &group(&[2, 2, 2, 2]));
    // the generator permutes coordinates with no fixed basis vector
    let act = reg.action(1).matrix();
    for i in 0..4 {
        assert!(act.at(i, i).bits() == 0);
    }

    // G = Z/4, U = Z/2, M = Z/2 trivial: carrier of order 4
    let (u_group, _) = g.subgroup(&[0, 2]).unwrap();
    let mu = GModule::trivial(u_group, group(&[2]));
    let ind = induced_module(&g, &[0, 2], &mu).unwrap();
    assert_eq!(ind.carrier().order(), big(4));
}

#[test]
fn induced_restricted_to_identity_coset_recovers_module() {
    // Restricting Ind back to U and evaluating at the identity coset is
    // U-equivariant onto M.
    let g = FiniteGroup::cyclic(6).unwrap();
    let u_elems = vec![0usize, 3];
    let (u_group, embed) = g.subgroup(&u_elems).unwrap();
    let carrier = group(&[4]);
    let m = GModule::from_generator_actions(
        u_group.clone(),
        carrier.clone(),
        &[(1, AbHom::scalar(&carrier, &big(-1)))],
    )
    .unwrap();
    let ind = induced_module(&g, &u_elems, &m).unwrap();
    let res = restrict_module(&ind, &u_elems).unwrap();
    // selection of the identity-coset block
    let t = ind.carrier().rank() / m.carrier().rank();
    let mut sel = IntMatrix::zero(m.carrier().rank(), ind.carrier().rank());
    for j in 0..m.carrier().rank() {
        sel.set(j, j * t, BigInt::from(1));
    }
    let sel = AbHom::new(ind.carrier().clone(), m.carrier().clone(), sel).unwrap();
    for (local, _) in embed.iter().enumerate() {
        let lhs = sel.compose(res.action(local)).unwrap();
        let rhs = m.action(local).compose(&sel).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn restrict_module_examples() {
    let g = FiniteGroup::cyclic(4).unwrap();
    let z5 = group(&[5]);
    let m =
        GModule::cyclic_action(g.clone(), z5.clone(), AbHom::scalar(&z5, &big(2))).unwrap();

    let whole: Vec<usize> = g.elements().collect();
    let r = restrict_module(&m, &whole).unwrap();
    for a in g.elements() {
        assert_eq!(r.action(a), m.action(a));
    }

    let r = restrict_module(&m, &[0]).unwrap();
    assert_eq!(r.group().order(), 1);

    // the index-2 subgroup acts through the square: 2^2 = 4 = -1 mod 5
    let r = restrict_module(&m, &[0, 2]).unwrap();
    assert_eq!(r.action(1), &AbHom::scalar(&z5, &big(4)));

    assert!(restrict_module(&m, &[0, 1]).is_err());
}

#[test]
fn norm_image_sits_in_fixed_points_and_kills_augmentation() {
    for m in [
        inversion_module(4),
        inversion_module(9),
        GModule::trivial(FiniteGroup::cyclic(3).unwrap(), group(&[2, 4])),
    ] {
        let n = norm_map(&m);
        for g in m.group().elements() {
            // g . N = N, so the image is fixed
            assert_eq!(m.action(g).compose(&n).unwrap(), n);
            // N . (g - 1) = 0
            let diff = m.action(g).sub(&AbHom::identity(m.carrier())).unwrap();
            assert!(n.compose(&diff).unwrap().is_zero());
        }
        let (fix, incl) = fixed_points(&m).unwrap();
        let (im, _) = hom_image(&n).unwrap();
        // |im(N)| divides |M^G|
        assert!((fix.order() % im.order()).bits() == 0 || im.order() <= fix.order());
        let _ = incl;
    }
}

#[test]
fn fixed_point_dimensions_match_dual_for_cyclic_groups() {
    // For cyclic G and M a vector space over F_p, M^G and (M*)^G have the
    // same dimension.
    let c2 = FiniteGroup::cyclic(2).unwrap();
    let c3 = FiniteGroup::cyclic(3).unwrap();
    let v22 = group(&[2, 2]);
    let swap = AbHom::new(
        v22.clone(),
        v22.clone(),
        IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]),
    )
    .unwrap();
    // unipotent, so of order 3 over F_3
    let v33 = group(&[3, 3]);
    let rot = AbHom::new(
        v33.clone(),
        v33.clone(),
        IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]),
    )
    .unwrap();
    let modules = vec![
        GModule::cyclic_action(c2.clone(), v22.clone(), swap).unwrap(),
        inversion_module(3),
        inversion_module(5),
        GModule::cyclic_action(c3.clone(), v33, rot).unwrap(),
        GModule::trivial(c3, group(&[7, 7])),
    ];
    for m in modules {
        let (fix, _) = fixed_points(&m).unwrap();
        let (dfix, _) = fixed_points(&dual_module(&m).unwrap()).unwrap();
        assert_eq!(fix.rank(), dfix.rank(), "module {m:?}");
        assert_eq!(fix.order(), dfix.order());
    }
}

#[test]
fn primary_decomposition_reassembles() {
    let c2 = FiniteGroup::cyclic(2).unwrap();
    let z12 = group(&[12]);
    let m = GModule::cyclic_action(c2, z12.clone(), AbHom::scalar(&z12, &big(-1))).unwrap();
    let parts = m.primary_decomposition().unwrap();
    assert_eq!(parts.len(), 2);
    let mut total = FinAbGroup::trivial();
    for (_, part, incl, proj) in &parts {
        total = total.direct_sum(part.carrier());
        // inclusion and projection are equivariant sections
        for g in m.group().elements() {
            assert_eq!(
                incl.compose(part.action(g)).unwrap(),
                m.action(g).compose(incl).unwrap()
            );
        }
        let comp = proj.compose(incl).unwrap();
        assert_eq!(comp, AbHom::identity(part.carrier()));
    }
    assert_eq!(total, z12);
}

#[test]
fn invalid_action_is_rejected() {
    // multiplication by 2 on Z/5 has order 4, not 2
    let c2 = FiniteGroup::cyclic(2).unwrap();
    let z5 = group(&[5]);
    let err = GModule::cyclic_action(c2, z5.clone(), AbHom::scalar(&z5, &big(2)));
    assert!(err.is_err());
}

#[test]
fn direct_sum_module_splits_exactly() {
    let c2 = FiniteGroup::cyclic(2).unwrap();
    let a = inversion_module(4);
    let b = GModule::trivial(c2, group(&[6]));
    let sum = direct_sum_module(&a, &b).unwrap();
    assert_eq!(sum.module.carrier().order(), big(24));
    let ses = ShortExactSequence::new(
        a.clone(),
        sum.module.clone(),
        b.clone(),
        sum.include_left.clone(),
        sum.project_right.clone(),
    );
    assert!(ses.is_ok());
    // projections retract the inclusions
    assert_eq!(
        sum.project_left.compose(&sum.include_left).unwrap(),
        AbHom::identity(a.carrier())
    );
    assert_eq!(
        sum.project_right.compose(&sum.include_right).unwrap(),
        AbHom::identity(b.carrier())
    );
}

#[test]
fn submodule_and_quotient_form_exact_sequences() {
    let c2 = FiniteGroup::cyclic(2).unwrap();
    let z8 = group(&[8]);
    let m = GModule::cyclic_action(c2, z8.clone(), AbHom::scalar(&z8, &big(3))).unwrap();
    let ses = ShortExactSequence::from_submodule(&m, &[vec![big(2)]]).unwrap();
    assert_eq!(ses.sub.carrier(), &group(&[4]));
    assert_eq!(ses.quo.carrier(), &group(&[2]));
}

#[test]
fn group_machinery() {
    let s3 = FiniteGroup::from_permutations(3, &[vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
    assert_eq!(s3.order(), 6);
    assert!(!s3.is_cyclic());
    let subs = s3.cyclic_subgroups();
    // {e}, three transpositions, one rotation subgroup
    assert_eq!(subs.len(), 5);
    let rot: Vec<usize> = subs.iter().find(|s| s.len() == 3).unwrap().clone();
    assert!(s3.is_normal(&rot));
    let (q, _) = s3.quotient_by(&rot).unwrap();
    assert_eq!(q.order(), 2);
    let two: Vec<usize> = subs.iter().find(|s| s.len() == 2).unwrap().clone();
    assert!(!s3.is_normal(&two));
}
