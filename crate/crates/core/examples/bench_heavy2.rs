use gcohom::abelian::{AbHom, FinAbGroup, IntMatrix};
use gcohom::budget::Budget;
use gcohom::cohomology::cohomology;
use gcohom::gmodule::{FiniteGroup, GModule};
use num_bigint::BigInt;
use std::time::Instant;

fn main() {
    let g = FiniteGroup::cyclic(6).unwrap();
    let v24 = FinAbGroup::new(vec![BigInt::from(2), BigInt::from(4)]).unwrap();
    let act = AbHom::new(
        v24.clone(),
        v24.clone(),
        IntMatrix::from_rows(&[vec![1, 0], vec![2, 1]]),
    )
    .unwrap();
    let m24 = GModule::cyclic_action(g, v24, act).unwrap();
    let budget = Budget::default();
    for n in 3..=4usize {
        let t0 = Instant::now();
        let h = cohomology(&m24, n, &budget).unwrap().group;
        println!("(2,4) H^{} = {} [{:?}]", n, h, t0.elapsed());
    }
}
