use std::collections::BTreeMap;
use std::sync::Arc;
use surgerykit::exact::RingSpec;
use surgerykit::kbased::duality::*;
use surgerykit::kbased::{Graded, Variance};
use surgerykit::simplicial::OrderedComplex;

fn main() {
    let host = Arc::new(OrderedComplex::full_simplex(3));
    println!("simplices:");
    for (i, s) in host.simplices_iter() {
        println!("  {i}: {:?}", s);
    }
    let n = host.len();
    for mask in 1..(1u32 << n) {
        let mut ranks = BTreeMap::new();
        for i in 0..n {
            if (mask >> i) & 1 == 1 {
                ranks.insert(i, 1usize);
            }
        }
        let a = KObject {
            host: host.clone(),
            variance: Variance::Covariant,
            ring: RingSpec::integers(),
            module: Graded { ranks: ranks.clone() },
        };
        if let Err(e) = verify_duality_axioms(&a) {
            println!("FAIL mask {:07b} ranks {:?}: {e}", mask, ranks.keys().collect::<Vec<_>>());
            if ranks.len() <= 2 {
                // print data for a small case
                let iota = a.iota();
                let ta = t_object(&a).unwrap();
                let tta = t_complex(&ta).unwrap();
                println!("TA: {:?}", ta.degrees().map(|q| (q, ta.total_rank(q))).collect::<Vec<_>>());
                for q in ta.degrees().collect::<Vec<_>>() { println!("dTA({q}):\n{}", ta.diff(q)); }
                println!("T2A: {:?}", tta.degrees().map(|q| (q, tta.total_rank(q))).collect::<Vec<_>>());
                for q in tta.degrees().collect::<Vec<_>>() { println!("dT2A({q}):\n{}", tta.diff(q)); }
                let d_a = d_complex(&iota, &tta).unwrap();
                for (q, m) in &d_a { println!("D(A)({q}):\n{}", m); }
                break;
            }
        }
    }
    println!("done");
}
