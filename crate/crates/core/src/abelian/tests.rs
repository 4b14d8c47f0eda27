use super::subquotient::span;
use super::*;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn bigs(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| big(x)).collect()
}

fn group(factors: &[i64]) -> FinAbGroup {
    FinAbGroup::new(bigs(factors)).unwrap()
}

#[test]
fn snf_identity() {
    let a = IntMatrix::identity(2);
    let (u, d, v) = smith_normal_form(&a);
    assert_eq!(u, IntMatrix::identity(2));
    assert_eq!(d, IntMatrix::identity(2));
    assert_eq!(v, IntMatrix::identity(2));
}

#[test]
fn snf_hand_oracle() {
    // oracle: d1 = gcd of all entries, d1*d2 = |det|
    let a = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
    let det = a.det();
    assert_eq!(det, big(-8));
    let (u, d, v) = smith_normal_form(&a);
    assert_eq!(d.at(0, 0), &big(2));
    assert_eq!(d.at(1, 1), &big(4));
    assert_eq!(u.mul(&a).mul(&v), d);
}

#[test]
fn snf_zero() {
    let a = IntMatrix::zero(2, 3);
    let (u, d, v) = smith_normal_form(&a);
    assert!(d.is_zero());
    assert_eq!(u, IntMatrix::identity(2));
    assert_eq!(v, IntMatrix::identity(3));
}

#[test]
fn kernel_zero_map_on_z4() {
    let z4 = group(&[4]);
    let h = AbHom::zero(&z4, &z4);
    let (k, incl) = hom_kernel(&h).unwrap();
    assert_eq!(k, z4);
    assert!(h.compose(&incl).unwrap().is_zero());
}

#[test]
fn kernel_mul2_on_z4() {
    let z4 = group(&[4]);
    let h = AbHom::scalar(&z4, &big(2));
    let (k, incl) = hom_kernel(&h).unwrap();
    assert_eq!(k, group(&[2]));
    // the inclusion lands on the 2-torsion
    let img = incl.apply(&bigs(&[1]));
    assert_eq!(img, bigs(&[2]));
}

#[test]
fn kernel_sum_map_with_enumeration_oracle() {
    let dom = group(&[2, 2]);
    let cod = group(&[2]);
    let h = AbHom::new(
        dom.clone(),
        cod.clone(),
        IntMatrix::from_rows(&[vec![1, 1]]),
    )
    .unwrap();
    // oracle: enumerate all four elements
    let by_hand: Vec<_> = dom
        .elements()
        .into_iter()
        .filter(|e| cod.is_zero_element(&h.apply(e)))
        .collect();
    assert_eq!(by_hand.len(), 2);
    let (k, _) = hom_kernel(&h).unwrap();
    assert_eq!(k, group(&[2]));
}

#[test]
fn quotient_examples() {
    let (q, proj) = quotient(&group(&[4]), &[bigs(&[2])]).unwrap();
    assert_eq!(q, group(&[2]));
    assert!(q.is_zero_element(&proj.apply(&bigs(&[2]))));
    assert!(!q.is_zero_element(&proj.apply(&bigs(&[1]))));

    let (q, _) = quotient(&group(&[2, 2]), &[]).unwrap();
    assert_eq!(q, group(&[2, 2]));

    let (q, _) = quotient(&group(&[8]), &[bigs(&[2])]).unwrap();
    assert_eq!(q, group(&[2]));
}

#[test]
fn direct_sum_examples() {
    assert_eq!(group(&[2]).direct_sum(&group(&[3])), group(&[6]));
    assert_eq!(group(&[2]).direct_sum(&group(&[2])), group(&[2, 2]));
    assert_eq!(group(&[4]).direct_sum(&group(&[6])), group(&[2, 12]));
}

#[test]
fn primary_part_examples() {
    let z12 = group(&[12]);
    assert_eq!(z12.primary_part(&big(2)).unwrap(), group(&[4]));
    assert_eq!(z12.primary_part(&big(3)).unwrap(), group(&[3]));
    assert_eq!(z12.primary_part(&big(5)).unwrap(), FinAbGroup::trivial());
    assert!(z12.primary_part(&big(6)).is_err());
}

#[test]
fn canonical_from_normalizes() {
    let g = FinAbGroup::canonical_from(bigs(&[6, 4, 1])).unwrap();
    assert_eq!(g, group(&[2, 12]));
    assert_eq!(g.order(), big(24));
}

#[test]
fn hom_rejects_ill_defined_matrix() {
    // Z/2 -> Z/4 sending the generator to an element of order 4
    let r = AbHom::new(group(&[2]), group(&[4]), IntMatrix::from_rows(&[vec![1]]));
    assert!(r.is_err());
}

#[test]
fn span_subgroup_of_z8() {
    let z8 = group(&[8]);
    let (sub, reps) = span(&z8, vec![vec![(0usize, big(2))]]).unwrap();
    assert_eq!(sub, group(&[4]));
    assert_eq!(reps.len(), 1);
    // the generator has order 4 in Z/8
    assert_eq!(&reps[0][0] % big(2), BigInt::zero());
}

#[test]
fn solver_finds_preimages() {
    let z4 = group(&[4]);
    let z2 = group(&[2]);
    let h = AbHom::new(z4.clone(), z2.clone(), IntMatrix::from_rows(&[vec![1]])).unwrap();
    let s = HomSolver::new(&h);
    let x = s.solve(&bigs(&[1])).unwrap();
    assert_eq!(h.apply(&x), bigs(&[1]));
    // mult-by-2 on Z/4 misses odd elements
    let d = AbHom::scalar(&z4, &big(2));
    let s = HomSolver::new(&d);
    assert!(s.solve(&bigs(&[1])).is_none());
    assert!(s.solve(&bigs(&[2])).is_some());
}

fn arb_group() -> impl Strategy<Value = FinAbGroup> {
    prop::collection::vec(2i64..=12, 0..=3)
        .prop_map(|v| FinAbGroup::canonical_from(bigs(&v)).unwrap())
}

fn arb_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
        prop::collection::vec(-9i64..=9, r * c).prop_map(move |entries| {
            IntMatrix::from_entries(r, c, bigs(&entries)).unwrap()
        })
    })
}

/// A well-defined hom between random groups: entry (i, j) must be a multiple
/// of d_i / gcd(d_i, d_j).
fn arb_hom() -> impl Strategy<Value = AbHom> {
    (arb_group(), arb_group(), prop::collection::vec(0u64..1 << 16, 25)).prop_map(
        |(dom, cod, seeds)| {
            let mut m = IntMatrix::zero(cod.rank(), dom.rank());
            let mut s = seeds.into_iter().cycle();
            for i in 0..cod.rank() {
                for j in 0..dom.rank() {
                    let di = &cod.invariant_factors()[i];
                    let dj = &dom.invariant_factors()[j];
                    let g = num_integer::Integer::gcd(di, dj);
                    let step = di / &g;
                    let k = BigInt::from(s.next().unwrap()) % g;
                    m.set(i, j, step * k);
                }
            }
            AbHom::new(dom, cod, m).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_decomposition_properties(a in arb_matrix()) {
        let (u, d, v) = smith_normal_form(&a);
        prop_assert_eq!(u.mul(&a).mul(&v), d.clone());
        prop_assert!(u.det().abs().is_one());
        prop_assert!(v.det().abs().is_one());
        let mut seen_zero = false;
        for t in 0..d.rows().min(d.cols()) {
            for j in 0..d.cols() {
                if j != t {
                    prop_assert!(d.at(t, j).is_zero());
                }
            }
            let e = d.at(t, t);
            prop_assert!(!e.is_negative());
            if e.is_zero() {
                seen_zero = true;
            } else {
                prop_assert!(!seen_zero, "zero diagonal entries must trail");
                if t > 0 && !d.at(t - 1, t - 1).is_zero() {
                    prop_assert!((e % d.at(t - 1, t - 1)).is_zero());
                }
            }
        }
    }

    #[test]
    fn kernel_image_order_product(h in arb_hom()) {
        let (k, incl) = hom_kernel(&h).unwrap();
        let (im, _) = hom_image(&h).unwrap();
        prop_assert_eq!(k.order() * im.order(), h.domain().order());
        prop_assert!(h.compose(&incl).unwrap().is_zero());
    }

    #[test]
    fn quotient_order_product(g in arb_group(), seeds in prop::collection::vec(0u64..1 << 16, 6)) {
        let gens: Vec<Vec<BigInt>> = seeds
            .chunks(3)
            .map(|chunk| {
                (0..g.rank())
                    .map(|i| BigInt::from(chunk[i % chunk.len()]) % &g.invariant_factors()[i])
                    .collect()
            })
            .collect();
        let (sub, _) = span(&g, gens.iter().map(|e| {
            e.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect()
        })).unwrap();
        let (q, proj) = quotient(&g, &gens).unwrap();
        prop_assert_eq!(sub.order() * q.order(), g.order());
        for e in &gens {
            prop_assert!(q.is_zero_element(&proj.apply(e)));
        }
    }

    #[test]
    fn primary_parts_reassemble(g in arb_group()) {
        let mut total = FinAbGroup::trivial();
        for p in g.primes() {
            total = total.direct_sum(&g.primary_part(&p).unwrap());
        }
        prop_assert_eq!(total, g);
    }
}
