use gcohom::abelian::{AbHom, FinAbGroup, IntMatrix};
use gcohom::budget::Budget;
use gcohom::cohomology::{cohomology, cyclic_closed_form};
use gcohom::gmodule::{FiniteGroup, GModule};
use num_bigint::BigInt;
use std::time::Instant;

fn main() {
    let g = FiniteGroup::cyclic(6).unwrap();
    let v = FinAbGroup::new(vec![BigInt::from(2), BigInt::from(2), BigInt::from(2)]).unwrap();
    // order-3 cyclic permutation of the three coordinates... needs order | 6: ok
    let rot = AbHom::new(v.clone(), v.clone(), IntMatrix::from_rows(&[vec![0,0,1], vec![1,0,0], vec![0,1,0]])).unwrap();
    let m = GModule::cyclic_action(g.clone(), v.clone(), rot).unwrap();
    let budget = Budget::default();
    for n in 0..=4usize {
        let t0 = Instant::now();
        let h = cohomology(&m, n, &budget).unwrap().group;
        let dt = t0.elapsed();
        let closed = if n >= 1 { format!("{}", cyclic_closed_form(&m, n as i64).unwrap()) } else { "-".into() };
        println!("H^{} = {}  (closed {})  [{:?}]", n, h, closed, dt);
    }
    // the mu = 8 worst: Z/8 trivial over Z/6 at degree 4 (generic BigInt path)
    let z8 = FinAbGroup::new(vec![BigInt::from(8)]).unwrap();
    let m8 = GModule::trivial(g.clone(), z8);
    for n in 3..=4usize {
        let t0 = Instant::now();
        let h = cohomology(&m8, n, &budget).unwrap().group;
        println!("Z/8 trivial H^{} = {} [{:?}]", n, h, t0.elapsed());
    }
    // (2,4) with an action over Z/6: k=2, mu=4 generic path
    let v24 = FinAbGroup::new(vec![BigInt::from(2), BigInt::from(4)]).unwrap();
    let act = AbHom::new(v24.clone(), v24.clone(), IntMatrix::from_rows(&[vec![1,0],vec![2,1]])).unwrap();
    // check order divides 6: compute below; fall back to -1 scalar
    let m24 = GModule::cyclic_action(g.clone(), v24.clone(), act)
        .or_else(|_| GModule::cyclic_action(g, v24.clone(), AbHom::scalar(&v24, &BigInt::from(-1))))
        .unwrap();
    for n in 3..=4usize {
        let t0 = Instant::now();
        let h = cohomology(&m24, n, &budget).unwrap().group;
        println!("(2,4) H^{} = {} [{:?}]", n, h, t0.elapsed());
    }
}
