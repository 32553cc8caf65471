use std::collections::BTreeMap;
use surgerykit::chain::{ChainComplex, ChainMap};
use surgerykit::exact::RingSpec;
use surgerykit::forms::manifest::{BlockKind, SignRule};
use surgerykit::forms::{gen, manifest, signsearch, thom, QuadraticPair};

fn main() {
    let man = manifest::sign_manifest();
    let b = signsearch::battery(0x5157_4b49);
    println!("battery: {} quadratics, {} pairs", b.quadratics.len(), b.pairs.len());
    let zero_d = ChainComplex::zero(&RingSpec::integers());
    let mut suspension_pairs = Vec::new();
    for q in b.quadratics.iter().chain(b.poincare.iter()) {
        if let Ok(p) = QuadraticPair::new(
            ChainMap::zero(),
            q.c.clone(),
            zero_d.clone(),
            q.n,
            BTreeMap::new(),
            q.psi.clone(),
        ) {
            suspension_pairs.push(p);
        }
    }
    println!("suspension pairs: {}", suspension_pairs.len());
    let mut candidates = vec![(BlockKind::Zero, SignRule::new(false, false, false, false))];
    for kind in [BlockKind::Psi, BlockKind::TPsi] {
        for rule in SignRule::enumerate_rns() {
            candidates.push((kind, rule));
        }
    }
    for lr in &candidates {
        let cand = surgerykit::forms::manifest::SignManifest {
            thom_upper_right: (BlockKind::Zero, SignRule::new(false, false, false, false)),
            thom_lower_left: (BlockKind::Zero, SignRule::new(false, false, false, false)),
            thom_lower_right: *lr,
            ..man.clone()
        };
        let mut pass = 0;
        let mut fail = 0;
        for p in &suspension_pairs {
            match thom::algebraic_thom_with(p, &cand) {
                Ok(t) => match t.verify() {
                    Ok(v) if v.is_empty() => pass += 1,
                    _ => fail += 1,
                },
                Err(_) => fail += 1,
            }
        }
        if fail == 0 {
            println!("PASS lr = {:?} ({} instances)", lr, pass);
        }
    }
    println!("done");
}
