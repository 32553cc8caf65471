use std::collections::BTreeMap;
use std::sync::Arc;
use surgerykit::exact::RingSpec;
use surgerykit::kbased::duality::*;
use surgerykit::kbased::{Graded, Variance};
use surgerykit::simplicial::OrderedComplex;

fn main() {
    let host = Arc::new(OrderedComplex::from_simplices(vec![vec![0, 1]]));
    let e = host.id_of(&[0, 1]).unwrap();
    let a = KObject {
        host: host.clone(),
        variance: Variance::Contravariant,
        ring: RingSpec::integers(),
        module: Graded { ranks: [(e, 1usize), (0, 1usize)].into_iter().collect() },
    };
    let iota = a.iota();
    let ta = t_object(&a).unwrap();
    println!("TA ranks: {:?}", ta.degrees().map(|q| (q, ta.total_rank(q))).collect::<Vec<_>>());
    println!("TA d(0):\n{}", ta.diff(0));
    let tta = t_complex(&ta).unwrap();
    println!("T²A ranks: {:?}", tta.degrees().map(|q| (q, tta.total_rank(q))).collect::<Vec<_>>());
    for q in tta.degrees().collect::<Vec<_>>() {
        println!("T²A d({q}):\n{}", tta.diff(q));
        for sig in host.ids() {
            let g = tta.graded(q);
            if g.rank(sig) > 0 {
                println!("  slot σ={:?} rank {}", host.simplex(sig), g.rank(sig));
            }
        }
    }
    let d_a = d_complex(&iota, &tta).unwrap();
    for (q, m) in &d_a {
        println!("D(A) at {q}:\n{}", m);
    }
    match verify_flat_chain_map(&d_a, &tta, &iota) {
        Ok(()) => println!("D(A) chain map ok"),
        Err(e) => println!("D(A) chain map FAIL: {e}"),
    }
    let ttta = t_complex(&tta).unwrap();
    println!("T³A ranks: {:?}", ttta.degrees().map(|q| (q, ttta.total_rank(q))).collect::<Vec<_>>());
    for q in ttta.degrees().collect::<Vec<_>>() {
        println!("T³A d({q}):
{}", ttta.diff(q));
    }
    let t_da = t_chain_map(&d_a, &tta, &iota, &ttta, &ta).unwrap();
    for (q, m) in &t_da {
        println!("T(D(A)) at {q}:
{}", m);
    }
    match verify_flat_chain_map(&t_da, &ta, &ttta) {
        Ok(()) => println!("T(D(A)) chain map ok"),
        Err(e) => println!("T(D(A)) chain map FAIL: {e}"),
    }
    let d_ta = d_complex(&ta, &ttta).unwrap();
    for (q, m) in &d_ta {
        println!("D(TA) at {q}:
{}", m);
    }
    match verify_flat_chain_map(&d_ta, &ttta, &ta) {
        Ok(()) => println!("D(TA) chain map ok"),
        Err(e) => println!("D(TA) chain map FAIL: {e}"),
    }
}
