use std::sync::Arc;
use surgerykit::kbased::localdual::*;
use surgerykit::kbased::KComplex;
use surgerykit::simplicial::OrderedComplex;

fn main() {
    let k = OrderedComplex::from_simplices(vec![vec![0]]);
    let xc = KComplex::covariant_restriction_sphere(&k, 2).unwrap();
    println!("xc ranks: {:?}", xc.degrees().map(|r| (r, xc.total_rank(r))).collect::<Vec<_>>());
    let h = hyperbolic_kquadratic(&xc, 0).unwrap();
    println!("valid: {:?}", h.verify().unwrap());
    println!("C ranks: {:?}", h.complex.degrees().map(|r| (r, h.complex.total_rank(r))).collect::<Vec<_>>());
    let fails = h.poincare_failures_z().unwrap();
    println!("poincare failures at simplices: {:?}", fails.iter().map(|&s| h.complex.host.simplex(s)).collect::<Vec<_>>());
    let phi = h.symmetrize_flat();
    for (r, m) in &phi {
        println!("phi({r}) =\n{}", m);
    }
    for (key, m) in &h.psi {
        println!("psi{:?} =\n{}", key, m);
    }
}
