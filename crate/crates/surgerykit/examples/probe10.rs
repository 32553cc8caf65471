// search contravariant T-extension twists: incidence extra (-1)^(a1+b1|σ|),
// diagonal extra (-1)^(a2+b2|σ|), against the duality axioms
use rand::Rng;
use std::collections::BTreeMap;
use std::sync::Arc;
use surgerykit::exact::RingSpec;
use surgerykit::kbased::duality::*;
use surgerykit::kbased::{Graded, Variance};
use surgerykit::simplicial::OrderedComplex;

fn main() {
    let mut rng = surgerykit::forms::gen::rng(7007);
    let hosts = [
        Arc::new(OrderedComplex::from_simplices(vec![vec![0, 1]])),
        Arc::new(OrderedComplex::simplex_boundary(3)),
        Arc::new(OrderedComplex::full_simplex(3)),
    ];
    let mut objects = Vec::new();
    for t in 0..9 {
        let host = &hosts[t % hosts.len()];
        let mut ranks = BTreeMap::new();
        for id in host.ids() {
            let k = rng.gen_range(0..=2usize);
            if k > 0 { ranks.insert(id, k); }
        }
        if ranks.is_empty() { continue; }
        objects.push(KObject {
            host: host.clone(),
            variance: Variance::Contravariant,
            ring: RingSpec::integers(),
            module: Graded { ranks },
        });
    }
    for mask in 0..128u32 {
        let twists = [
            ((mask >> 0) & 1) as i64, ((mask >> 1) & 1) as i64,
            ((mask >> 2) & 1) as i64, ((mask >> 3) & 1) as i64,
            ((mask >> 4) & 1) as i64, ((mask >> 5) & 1) as i64,
            ((mask >> 6) & 1) as i64,
        ];
        surgerykit::kbased::duality::set_contra_twists(twists);
        let mut fails: Vec<String> = Vec::new();
        for (i, a) in objects.iter().enumerate() {
            if let Err(e) = verify_duality_axioms(a) {
                fails.push(format!("obj{i}: {e}"));
                if fails.len() > 1 { break; }
            }
        }
        if fails.is_empty() {
            println!("PASS twists = {:?}", twists);
        } else if twists == [0,0,0,0,0,1,1] || twists == [0,0,0,0,1,1,1] {
            println!("twists {:?}: {}", twists, fails.join("; "));
        }
    }
    println!("done");
}
