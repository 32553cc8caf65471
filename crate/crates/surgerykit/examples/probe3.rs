// search tensor pairing signs against the displayed four-term relation:
// blocksign = (-1)^(a2*q + a3*pq + a4*p*lb + a5*q*la + a6*p)
// koszul    = (-1)^(b1*v + b2*v*n + b3*v*s + b4*v(v-1)/2)
use std::collections::BTreeMap;
use surgerykit::exact::{sign, ExactMatrix};
use surgerykit::forms::tensor::{nu, omega_i, tensor_complex, SymmetricStructure};
use surgerykit::forms::{gen, QuadraticComplex, StructureBlocks};

fn kron(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    let bi = b.to_int().unwrap();
    let mut out = ExactMatrix::zero(&a.ring, a.rows * bi.rows, a.cols * bi.cols);
    for i in 0..a.rows { for k in 0..a.cols {
        let av = a.at(i, k); if av.is_zero() { continue; }
        for j in 0..bi.rows { for l in 0..bi.cols {
            let bv = bi.at(j, l);
            if !num_traits::Zero::is_zero(bv) {
                *out.at_mut(i * bi.rows + j, k * bi.cols + l) = av.scale(bv);
            }
        }}
    }}
    out
}

fn block_offset(c: &surgerykit::chain::ChainComplex, d: &surgerykit::chain::ChainComplex, p: i64, q: i64) -> usize {
    let rho = p + q;
    let mut off = 0;
    for cp in c.degrees() {
        let cq = rho - cp;
        if cp == p && cq == q { return off; }
        off += c.rank(cp) * d.rank(cq);
    }
    off
}

fn tensor_with(psi: &QuadraticComplex, phi: &SymmetricStructure, e: &[i64; 9]) -> Option<QuadraticComplex> {
    let [a2, a3, a4, a5, a6, b1, b2, b3, b4] = *e;
    let c = &psi.c; let d = &phi.d;
    let n = psi.n; let m = phi.m;
    let tc = tensor_complex(c, d).ok()?;
    let total = n + m;
    let mut out: StructureBlocks = BTreeMap::new();
    let vmax = phi.phi.keys().map(|&(b, _)| b).max().unwrap_or(0);
    let smax = surgerykit::forms::max_level(c, n).max(0) + vmax + 1;
    for s in 0..=smax { for v in 0..=vmax {
        let alpha: BTreeMap<i64, ExactMatrix> = if v % 2 == 0 { psi.level(s + v) } else { psi.t_level(s + v) };
        if alpha.is_empty() { continue; }
        let la = n - s - v; let lb = m + v;
        let koszul = sign(b1 * v + b2 * v * n + b3 * v * s + b4 * v * (v - 1) / 2);
        for (&p, ablk) in &alpha {
            if ablk.is_zero() { continue; }
            for q in d.degrees().collect::<Vec<_>>() {
                let bblk = phi.block(v, q);
                if bblk.is_zero() { continue; }
                let rho = p + q; let src_rho = total - s - rho;
                if tc.rank(rho) == 0 || tc.rank(src_rho) == 0 { continue; }
                let bs = sign(a2 * q + a3 * p * q + a4 * p * lb + a5 * q * la + a6 * p);
                let blk = kron(&ablk.scale_int(koszul * bs), &bblk);
                let toff = block_offset(c, d, p, q);
                let soff = block_offset(c, d, la - p, lb - q);
                let key = (s, rho);
                let mut acc = out.remove(&key).unwrap_or_else(|| ExactMatrix::zero(&c.ring, tc.rank(rho), tc.rank(src_rho)));
                for i in 0..blk.rows { for j in 0..blk.cols {
                    let cur = acc.at(toff + i, soff + j).add(blk.at(i, j));
                    *acc.at_mut(toff + i, soff + j) = cur;
                }}
                out.insert(key, acc);
            }
        }
    }}
    out.retain(|_, mat| !mat.is_zero());
    QuadraticComplex::new(tc, total, out).ok()
}

fn main() {
    let mut rng = gen::rng(41);
    let mut qs = Vec::new();
    for t in 0..30 {
        let c = gen::random_complex(&mut rng, 0, 2, 1);
        let n = (t % 4) as i64;
        if let Some(q) = gen::sample_quadratic(&mut rng, &c, n) {
            if q.psi.values().any(|m| !m.is_zero()) { qs.push(q); }
        }
        if qs.len() >= 10 { break; }
    }
    println!("battery {}", qs.len());
    let w = omega_i();
    let unit = nu();
    let mut found = Vec::new();
    for mask in 0..(1 << 9) {
        let e: [i64; 9] = core::array::from_fn(|i| ((mask >> i) & 1) as i64);
        // unit law
        let ok_unit = qs.iter().all(|q| {
            tensor_with(q, &unit, &e).map_or(false, |t| t.psi == q.psi)
        });
        if !ok_unit { continue; }
        let ok = qs.iter().all(|q| {
            tensor_with(q, &w.omega, &e).map_or(false, |t| matches!(t.verify(), Ok(v) if v.is_empty()))
        });
        if ok { found.push(e); }
    }
    println!("found {}", found.len());
    for e in found.iter().take(10) { println!("  {:?}", e); }
}
