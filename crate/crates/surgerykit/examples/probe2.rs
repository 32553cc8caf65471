// search the W^%-boundary convention: term2 k1=(-1)^(a1+b1*q+c1*(m+b)),
// term3 k2=(-1)^(a2+c2*m+d2*b) on phi_{b-1}, term4 k3 likewise on (T phi_{b-1})
use rand::Rng;
use std::collections::BTreeMap;
use surgerykit::chain::ChainComplex;
use surgerykit::exact::{sign, ExactMatrix, Scalar};
use surgerykit::forms::gen;
use surgerykit::forms::tensor::{interval_complex, omega_i, nu};
use surgerykit::forms::StructureBlocks;

#[derive(Clone)]
struct Fam {
    d: ChainComplex,
    m: i64,
    phi: StructureBlocks,
}

fn block(f: &Fam, b: i64, q: i64) -> ExactMatrix {
    f.phi.get(&(b, q)).cloned().unwrap_or_else(|| {
        ExactMatrix::zero(&f.d.ring, f.d.rank(q), f.d.rank(f.m + b - q))
    })
}

fn t_block(f: &Fam, b: i64, q: i64) -> ExactMatrix {
    let src = f.m + b - q;
    block(f, b, src).involution_dual().scale_int(sign(src * q))
}

fn boundary(f: &Fam, k: &[i64; 9]) -> Fam {
    let [a1, b1, c1, a2, c2, d2, a3, c3, d3] = *k;
    let mut out: StructureBlocks = BTreeMap::new();
    let bmax = f.phi.keys().map(|&(b, _)| b).max().unwrap_or(0) + 1;
    for b in 0..=bmax {
        for q in f.d.degrees().collect::<Vec<_>>() {
            let rows = f.d.rank(q);
            let cols = f.d.rank(f.m - 1 + b - q);
            if rows * cols == 0 { continue; }
            let mut total = ExactMatrix::zero(&f.d.ring, rows, cols);
            total = total.add(&f.d.diff(q + 1).mul(&block(f, b, q + 1)).unwrap()).unwrap();
            let dd = f.d.diff(f.m + b - q).involution_dual();
            total = total
                .add(&block(f, b, q).mul(&dd).unwrap().scale_int(sign(a1 + b1 * q + c1 * (f.m + b))))
                .unwrap();
            if b >= 1 {
                total = total.add(&block(f, b - 1, q).scale_int(sign(a2 + c2 * f.m + d2 * b))).unwrap();
                total = total.add(&t_block(f, b - 1, q).scale_int(sign(a3 + c3 * f.m + d3 * b))).unwrap();
            }
            if !total.is_zero() { out.insert((b, q), total); }
        }
    }
    Fam { d: f.d.clone(), m: f.m - 1, phi: out }
}

fn main() {
    // random families for the d^2 = 0 test
    let mut rng = gen::rng(99);
    let mut fams = Vec::new();
    for t in 0..10 {
        let d = gen::random_complex(&mut rng, 0, 2, 1);
        let m = (t % 4) as i64;
        let mut phi: StructureBlocks = BTreeMap::new();
        for b in 0..3i64 {
            for q in d.degrees().collect::<Vec<_>>() {
                let rows = d.rank(q);
                let cols = d.rank(m + b - q);
                if rows * cols == 0 { continue; }
                let mat = ExactMatrix::from_fn(&d.ring, rows, cols, |_, _| {
                    Scalar::from_int(&d.ring, rng.gen_range(-2..=2i64))
                });
                phi.insert((b, q), mat);
            }
        }
        fams.push(Fam { d, m, phi });
    }
    // the omega instance and its expected boundary
    let w = omega_i();
    let omega = Fam { d: w.i.clone(), m: 1, phi: w.omega.phi.clone() };
    let point = nu();
    let push = |f: &surgerykit::chain::ChainMap| -> StructureBlocks {
        let mut out = BTreeMap::new();
        for (&(b, q), mat) in &point.phi {
            let ft = f.component(&point.d, &w.i, q);
            let fs = f.component(&point.d, &w.i, 0 + b - q).involution_dual();
            let m2 = ft.mul(mat).unwrap().mul(&fs).unwrap();
            if !m2.is_zero() { out.insert((b, q), m2); }
        }
        out
    };
    let p1 = push(&w.i1);
    let p0 = push(&w.i0);
    let mut expected: StructureBlocks = BTreeMap::new();
    for (&k, m) in &p1 { expected.insert(k, m.clone()); }
    for (&k, m) in &p0 {
        let cur = expected.remove(&k).unwrap_or_else(|| ExactMatrix::zero(&w.i.ring, m.rows, m.cols));
        let d = cur.sub(m).unwrap();
        if !d.is_zero() { expected.insert(k, d); }
    }
    let _ = interval_complex();
    let mut found = Vec::new();
    for a1 in 0..2i64 { for b1 in 0..2i64 { for c1 in 0..2i64 {
    for a2 in 0..2i64 { for c2 in 0..2i64 { for d2 in 0..2i64 {
    for a3 in 0..2i64 { for c3 in 0..2i64 { for d3 in 0..2i64 {
        let k = [a1, b1, c1, a2, c2, d2, a3, c3, d3];
        // omega identity
        let bd = boundary(&omega, &k);
        if bd.phi != expected { continue; }
        // d^2 = 0
        if !fams.iter().all(|f| boundary(&boundary(f, &k), &k).phi.is_empty()) { continue; }
        found.push(k);
    }}}}}}}}}
    println!("found {} conventions:", found.len());
    for k in found.iter().take(8) { println!("  {:?}", k); }
}
