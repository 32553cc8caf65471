// refine: c = (-1)^(s+pq+sq+vs + n(x1 v + x2 s + x3 q + x4 p + x5) + x6 vq + x7 v)
// g = (-1)^(g0 + g1 n); appendix convention oracle over mixed parities
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

fn tensor_with(psi6: &QuadraticComplex, phi: &SymmetricStructure, x: &[i64]) -> Option<QuadraticComplex> {
    let c = &psi6.c; let d = &phi.d;
    let n = psi6.n; let m = phi.m;
    let tc = tensor_complex(c, d).ok()?;
    let total = n + m;
    let mut out: StructureBlocks = BTreeMap::new();
    let vmax = phi.phi.keys().map(|&(b, _)| b).max().unwrap_or(0);
    let smax = surgerykit::forms::max_level(c, n).max(0) + vmax + 1;
    for s in 0..=smax { for v in 0..=vmax {
        let alpha: BTreeMap<i64, ExactMatrix> = if v % 2 == 0 { psi6.level(s + v) } else { psi6.t_level(s + v) };
        if alpha.is_empty() { continue; }
        let la = n - s - v; let lb = m + v;
        for (&p, ablk) in &alpha {
            if ablk.is_zero() { continue; }
            for q in d.degrees().collect::<Vec<_>>() {
                let bblk = phi.block(v, q);
                if bblk.is_zero() { continue; }
                let rho = p + q; let src_rho = total - s - rho;
                if tc.rank(rho) == 0 || tc.rank(src_rho) == 0 { continue; }
                let e = s + p*q + s*q + v*s
                    + n*(x[0]*v + x[1]*s + x[2]*q + x[3]*p + x[4])
                    + x[5]*v*q + x[6]*v;
                let blk = kron(&ablk.scale_int(sign(e)), &bblk);
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

fn pushforward_end(psi6: &QuadraticComplex, tc: &surgerykit::chain::ChainComplex, iend: usize) -> StructureBlocks {
    let c = &psi6.c;
    let i = omega_i().i;
    let mut e = ExactMatrix::zero(&c.ring, 2, 2);
    *e.at_mut(iend, iend) = surgerykit::exact::Scalar::from_int(&c.ring, 1);
    let mut out: StructureBlocks = BTreeMap::new();
    for (&(s, r), blk) in &psi6.psi {
        let kb = kron(blk, &e);
        let toff = block_offset(c, &i, r, 0);
        let soff = block_offset(c, &i, psi6.n - s - r, 0);
        let mut acc = ExactMatrix::zero(&c.ring, tc.rank(r), tc.rank(psi6.n - s - r));
        for a in 0..kb.rows { for b in 0..kb.cols {
            *acc.at_mut(toff + a, soff + b) = kb.at(a, b).clone();
        }}
        out.insert((s, r), acc);
    }
    out
}

fn boundary6(q: &QuadraticComplex) -> StructureBlocks {
    let mut out: StructureBlocks = BTreeMap::new();
    let lo = q.c.min_degree().unwrap();
    let hi = q.c.max_degree().unwrap();
    let smax = (q.n - 2 * lo + 1).max(1);
    for s in 0..=smax {
        for r in lo - 1..=hi + 1 {
            let rel = q.relation_appendix(s, r).unwrap();
            if !rel.is_zero() { out.insert((s, r), rel); }
        }
    }
    out
}

fn main() {
    let mut rng = gen::rng(41);
    let mut qs = Vec::new();
    for t in 0..60 {
        let c = gen::random_complex(&mut rng, 0, 2, 1);
        let n = (t % 4) as i64;
        if let Some(q) = gen::sample_quadratic(&mut rng, &c, n) {
            if q.psi.values().any(|mm| !mm.is_zero()) { qs.push(q.convert_convention()); }
        }
        if qs.len() >= 16 { break; }
    }
    println!("battery {} (dims {:?})", qs.len(), qs.iter().map(|q| q.n).collect::<Vec<_>>());
    let w = omega_i();
    let unit = nu();
    let ns: Vec<i64> = qs.iter().map(|q| q.n).collect();
    println!("parities: {:?}", ns);
    let mut found = Vec::new();
    for mask in 0..(1u32 << 9) {
        let x: Vec<i64> = (0..7).map(|i| ((mask >> i) & 1) as i64).collect();
        let g0 = ((mask >> 7) & 1) as i64;
        let g1 = ((mask >> 8) & 1) as i64;
        let ok = qs.iter().all(|q6| {
            if !tensor_with(q6, &unit, &x).map_or(false, |t| t.psi == q6.psi) { return false; }
            let Some(t) = tensor_with(q6, &w.omega, &x) else { return false; };
            let bd = boundary6(&t);
            let tc = &t.c;
            let p1 = pushforward_end(q6, tc, 1);
            let p0 = pushforward_end(q6, tc, 0);
            let g = sign(g0 + g1 * q6.n);
            let keys: std::collections::BTreeSet<(i64,i64)> = bd.keys().chain(p1.keys()).chain(p0.keys()).copied().collect();
            keys.iter().all(|k| {
                let zero = ExactMatrix::zero(&q6.c.ring, tc.rank(k.1), tc.rank(q6.n - k.0 - k.1));
                let a = bd.get(k).cloned().unwrap_or_else(|| zero.clone());
                let b1 = p1.get(k).cloned().unwrap_or_else(|| zero.clone());
                let b0 = p0.get(k).cloned().unwrap_or_else(|| zero.clone());
                if a.rows != b1.rows || a.cols != b1.cols { return false; }
                let want = b1.sub(&b0).unwrap().scale_int(g);
                a.sub(&want).unwrap().is_zero()
            })
        });
        if ok { found.push((x, g0, g1)); }
    }
    println!("found {}", found.len());
    for f in found.iter().take(8) { println!("  x={:?} g0={} g1={}", f.0, f.1, f.2); }
}
