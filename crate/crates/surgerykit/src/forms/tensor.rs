//! Symmetric structures, the interval witness ω_I, and the pairing of a
//! quadratic structure with a symmetric one on the tensor complex.
//!
//! A symmetric structure of dimension m is a family φ = {φ_b} with
//! φ_b^q: D^{m+b−q} → D_q. Its boundary is
//!
//!   (dφ)_b^q = d φ_b^{q+1} + (−1)^q φ_b^q d†
//!              + (−1)^m φ_{b−1}^q + (−1)^{m+b} (Tφ_{b−1})^q,
//!
//! the convention fixed by the interval identity d ω_I = 𝐢₁^%ν − 𝐢₀^%ν on
//! the displayed values of ω_I, together with d² = 0.
//!
//! The pairing takes ψ of dimension n on C and φ of dimension m on D (a
//! ℤ-complex) to the (n+m)-dimensional family on C⊗D
//!
//!   (ψ⊗φ)_s = Σ_{v≥0} (T^v ψ_{s+v}) ⊠ φ_v,
//!
//! where the block landing in C_p ⊗ D_q carries the sign
//! (−1)^{pq + sm + sq + vs + nq + nm} (appendix convention). The signs are
//! pinned by ψ⊗ν = ψ together with the interval identity
//! d(ψ⊗ω_I) = (𝐢₁)_% ψ − (𝐢₀)_% ψ, both exact.

use super::{FormsError, QuadraticComplex, StructureBlocks};
use crate::chain::{ChainComplex, ChainError, ChainMap};
use crate::exact::{ExactMatrix, RingSpec};
use std::collections::BTreeMap;

/// m-dimensional symmetric structure on a complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricStructure {
    pub d: ChainComplex,
    pub m: i64,
    /// blocks φ_b^q: D^{m+b−q} → D_q keyed by (b, q)
    pub phi: StructureBlocks,
}

impl SymmetricStructure {
    pub fn new(d: ChainComplex, m: i64, phi: StructureBlocks) -> Result<Self, FormsError> {
        for (&(b, q), mat) in &phi {
            let rows = d.rank(q);
            let cols = d.rank(m + b - q);
            if mat.rows != rows || mat.cols != cols {
                return Err(FormsError::BadBlockShape(b, q, mat.rows, mat.cols, rows, cols));
            }
        }
        Ok(SymmetricStructure { d, m, phi })
    }

    pub fn block(&self, b: i64, q: i64) -> ExactMatrix {
        match self.phi.get(&(b, q)) {
            Some(mat) => mat.clone(),
            None => ExactMatrix::zero(&self.d.ring, self.d.rank(q), self.d.rank(self.m + b - q)),
        }
    }

    /// (Tφ_b)^q = (−1)^{(m+b−q)q} (φ_b^{m+b−q})†.
    pub fn t_block(&self, b: i64, q: i64) -> ExactMatrix {
        let src = self.m + b - q;
        self.block(b, src)
            .involution_dual()
            .scale_int(crate::exact::sign(src * q))
    }

    /// The W^%-boundary family (dimension m−1).
    pub fn boundary(&self) -> SymmetricStructure {
        let d = &self.d;
        let m = self.m;
        let mut out: StructureBlocks = BTreeMap::new();
        let bmax = self
            .phi
            .keys()
            .map(|&(b, _)| b)
            .max()
            .unwrap_or(0)
            + 1;
        for b in 0..=bmax {
            for q in d.degrees().collect::<Vec<_>>() {
                let rows = d.rank(q);
                let cols = d.rank(m - 1 + b - q);
                if rows * cols == 0 {
                    continue;
                }
                let mut total = ExactMatrix::zero(&d.ring, rows, cols);
                let t1 = d.diff(q + 1).mul(&self.block(b, q + 1)).expect("shape");
                total = total.add(&t1).unwrap();
                let dd = d.diff(m + b - q).involution_dual();
                let t2 = self
                    .block(b, q)
                    .mul(&dd)
                    .expect("shape")
                    .scale_int(crate::exact::sign(q));
                total = total.add(&t2).unwrap();
                if b >= 1 {
                    let t3 = self.block(b - 1, q).scale_int(crate::exact::sign(m));
                    total = total.add(&t3).unwrap();
                    let t4 = self.t_block(b - 1, q).scale_int(crate::exact::sign(m + b));
                    total = total.add(&t4).unwrap();
                }
                if !total.is_zero() {
                    out.insert((b, q), total);
                }
            }
        }
        SymmetricStructure {
            d: d.clone(),
            m: m - 1,
            phi: out,
        }
    }

    /// The W^% cycle condition: boundary vanishes identically.
    pub fn verify_cycle(&self) -> bool {
        self.boundary().phi.is_empty()
    }

    /// Pushforward along a chain map f: D → E (degree 0): f^%φ with blocks
    /// f φ_b f†.
    pub fn pushforward(&self, f: &ChainMap, e: &ChainComplex) -> Result<SymmetricStructure, FormsError> {
        let mut out: StructureBlocks = BTreeMap::new();
        for (&(b, q), mat) in &self.phi {
            let ft = f.component(&self.d, e, q);
            let fsrc = f.component(&self.d, e, self.m + b - q).involution_dual();
            let m2 = ft.mul(mat)?.mul(&fsrc)?;
            if !m2.is_zero() {
                out.insert((b, q), m2);
            }
        }
        SymmetricStructure::new(e.clone(), self.m, out)
    }
}

/// The cellular interval: ℤ² in degree 0 (σ₀, σ₁), ℤ in degree 1 (σ₀₁),
/// d σ₀₁ = σ₁ − σ₀.
pub fn interval_complex() -> ChainComplex {
    let z = RingSpec::integers();
    let mut ranks = BTreeMap::new();
    ranks.insert(0, 2);
    ranks.insert(1, 1);
    let mut d = BTreeMap::new();
    d.insert(1, ExactMatrix::from_int_rows(&[vec![-1], vec![1]]));
    ChainComplex::new(z, ranks, d).unwrap()
}

/// The point complex 0ℤ with its unit symmetric structure ν.
pub fn nu() -> SymmetricStructure {
    let z = RingSpec::integers();
    let d = ChainComplex::concentrated(&z, 0, 1);
    let mut phi = BTreeMap::new();
    phi.insert((0, 0), ExactMatrix::from_int_rows(&[vec![1]]));
    SymmetricStructure::new(d, 0, phi).unwrap()
}

/// The interval complex with its two end inclusions and ω_I.
pub struct IntervalWitness {
    pub i: ChainComplex,
    pub i0: ChainMap,
    pub i1: ChainMap,
    pub omega: SymmetricStructure,
}

/// The explicit ω_I with (ω_I)₀⁰(σ₀₁*) = σ₀, (ω_I)₀¹(σ₁*) = σ₀₁,
/// (ω_I)₁¹(σ₀₁*) = −σ₀₁.
pub fn omega_i() -> IntervalWitness {
    let i = interval_complex();
    let mut phi = BTreeMap::new();
    phi.insert((0, 0), ExactMatrix::from_int_rows(&[vec![1], vec![0]]));
    phi.insert((0, 1), ExactMatrix::from_int_rows(&[vec![0, 1]]));
    phi.insert((1, 1), ExactMatrix::from_int_rows(&[vec![-1]]));
    let omega = SymmetricStructure::new(i.clone(), 1, phi).unwrap();
    let mut c0 = BTreeMap::new();
    c0.insert(0, ExactMatrix::from_int_rows(&[vec![1], vec![0]]));
    let mut c1 = BTreeMap::new();
    c1.insert(0, ExactMatrix::from_int_rows(&[vec![0], vec![1]]));
    IntervalWitness {
        i,
        i0: ChainMap { degree: 0, components: c0 },
        i1: ChainMap { degree: 0, components: c1 },
        omega,
    }
}

impl IntervalWitness {
    /// d ω_I = 𝐢₁^%ν − 𝐢₀^%ν, exactly.
    pub fn verify_boundary_identity(&self) -> Result<(), FormsError> {
        let boundary = self.omega.boundary();
        let nu = nu();
        let point = nu.d.clone();
        let push1 = nu.pushforward(&self.i1, &self.i)?;
        let push0 = nu.pushforward(&self.i0, &self.i)?;
        self.i0.verify(&point, &self.i)?;
        self.i1.verify(&point, &self.i)?;
        let mut want: StructureBlocks = BTreeMap::new();
        for (&k, m) in &push1.phi {
            want.insert(k, m.clone());
        }
        for (&k, m) in &push0.phi {
            let cur = want
                .remove(&k)
                .unwrap_or_else(|| ExactMatrix::zero(&self.i.ring, m.rows, m.cols));
            let diff = cur.sub(m)?;
            if !diff.is_zero() {
                want.insert(k, diff);
            }
        }
        // compare block families
        let keys: std::collections::BTreeSet<(i64, i64)> =
            boundary.phi.keys().chain(want.keys()).copied().collect();
        for k in keys {
            let a = boundary
                .phi
                .get(&k)
                .cloned()
                .unwrap_or_else(|| want[&k].clone().scale_int(0));
            let b = want
                .get(&k)
                .cloned()
                .unwrap_or_else(|| boundary.phi[&k].clone().scale_int(0));
            if !a.sub(&b)?.is_zero() {
                return Err(FormsError::Other(format!(
                    "interval boundary identity fails at {:?}",
                    k
                )));
            }
        }
        Ok(())
    }
}

/// The tensor complex C⊗D with blocks ordered by ascending C-degree.
/// d(x⊗y) = dx⊗y + (−1)^p x⊗dy.
pub fn tensor_complex(c: &ChainComplex, d: &ChainComplex) -> Result<ChainComplex, ChainError> {
    if !d.ring.is_integers() {
        return Err(ChainError::UnsupportedRing("second tensor factor must be over ℤ"));
    }
    let ring = c.ring.clone();
    let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
    let mut layout: BTreeMap<i64, Vec<(i64, i64, usize)>> = BTreeMap::new();
    let cd: Vec<i64> = c.degrees().collect();
    let dd: Vec<i64> = d.degrees().collect();
    for &p in &cd {
        for &q in &dd {
            let rho = p + q;
            let entry = layout.entry(rho).or_default();
            let off = ranks.get(&rho).copied().unwrap_or(0);
            entry.push((p, q, off));
            *ranks.entry(rho).or_default() += c.rank(p) * d.rank(q);
        }
    }
    let mut diffs = BTreeMap::new();
    for (&rho, blocks) in &layout {
        let rows = ranks.get(&(rho - 1)).copied().unwrap_or(0);
        let cols = ranks[&rho];
        if rows * cols == 0 {
            continue;
        }
        let target = layout.get(&(rho - 1)).cloned().unwrap_or_default();
        let find = |p: i64, q: i64| -> Option<usize> {
            target
                .iter()
                .find(|&&(tp, tq, _)| tp == p && tq == q)
                .map(|&(_, _, off)| off)
        };
        let mut m = ExactMatrix::zero(&ring, rows, cols);
        for &(p, q, off) in blocks {
            let rp = c.rank(p);
            let rq = d.rank(q);
            if rp * rq == 0 {
                continue;
            }
            // dx ⊗ y
            if c.rank(p - 1) > 0 {
                if let Some(toff) = find(p - 1, q) {
                    let dc = c.diff(p);
                    let id_q = ExactMatrix::identity(&RingSpec::integers(), rq);
                    let blk = kronecker(&dc, &id_q, &ring)?;
                    m.set_block(toff, off, &blk);
                }
            }
            // (−1)^p x ⊗ dy
            if d.rank(q - 1) > 0 {
                if let Some(toff) = find(p, q - 1) {
                    let id_p = ExactMatrix::identity(&ring, rp);
                    let dd_m = d.diff(q).scale_int(crate::exact::sign(p));
                    let blk = kronecker(&id_p, &dd_m, &ring)?;
                    m.set_block(toff, off, &blk);
                }
            }
        }
        diffs.insert(rho, m);
    }
    ChainComplex::new(ring, ranks.into_iter().filter(|&(_, k)| k > 0).collect(), diffs)
}

/// Kronecker product: (A⊗B)[(i,j),(k,l)] = A[i,k]·B[j,l]; B must be an
/// integer matrix.
fn kronecker(a: &ExactMatrix, b: &ExactMatrix, ring: &RingSpec) -> Result<ExactMatrix, ChainError> {
    let bi = b.to_int()?;
    let mut out = ExactMatrix::zero(ring, a.rows * bi.rows, a.cols * bi.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let av = a.at(i, k);
            if av.is_zero() {
                continue;
            }
            for j in 0..bi.rows {
                for l in 0..bi.cols {
                    let bv = bi.at(j, l);
                    if num_traits::Zero::is_zero(bv) {
                        continue;
                    }
                    *out.at_mut(i * bi.rows + j, k * bi.cols + l) = av.scale(bv);
                }
            }
        }
    }
    Ok(out)
}

/// Offset of the (p,q)-block inside (C⊗D)_ρ.
fn block_offset(c: &ChainComplex, d: &ChainComplex, p: i64, q: i64) -> usize {
    let rho = p + q;
    let mut off = 0;
    for cp in c.degrees() {
        let cq = rho - cp;
        if cp == p && cq == q {
            return off;
        }
        off += c.rank(cp) * d.rank(cq);
    }
    off
}

/// ψ ⊗ φ on the tensor complex: an (n+m)-dimensional quadratic structure
/// satisfying the displayed four-term relation. Internally computed in the
/// convention of the appendix block formulas, then converted.
pub fn w_tensor(
    psi: &QuadraticComplex,
    phi: &SymmetricStructure,
) -> Result<QuadraticComplex, FormsError> {
    let converted = psi.convert_convention();
    let out = w_tensor_core(&converted, phi)?;
    Ok(out.convert_convention())
}

/// The pairing in the appendix convention (used directly by the
/// simplex-graded constructions).
pub fn w_tensor_core(
    psi: &QuadraticComplex,
    phi: &SymmetricStructure,
) -> Result<QuadraticComplex, FormsError> {
    let c = &psi.c;
    let d = &phi.d;
    let n = psi.n;
    let m = phi.m;
    let tc = tensor_complex(c, d)?;
    let total_dim = n + m;
    let mut out: StructureBlocks = BTreeMap::new();
    let vmax = phi.phi.keys().map(|&(b, _)| b).max().unwrap_or(0);
    let smax = super::max_level(c, n).max(0) + vmax + 1;
    for s in 0..=smax {
        for v in 0..=vmax {
            // α = T^v ψ_{s+v} with Hom-degree n−s−v
            let alpha: BTreeMap<i64, ExactMatrix> = if v % 2 == 0 {
                psi.level(s + v)
            } else {
                psi.t_level(s + v)
            };
            if alpha.is_empty() {
                continue;
            }
            let l_alpha = n - s - v;
            let l_beta = m + v;
            for (&p, ablk) in &alpha {
                if ablk.is_zero() {
                    continue;
                }
                for q in d.degrees().collect::<Vec<_>>() {
                    let bblk = phi.block(v, q);
                    if bblk.is_zero() {
                        continue;
                    }
                    let rho = p + q;
                    let src_rho = total_dim - s - rho;
                    if tc.rank(rho) == 0 || tc.rank(src_rho) == 0 {
                        continue;
                    }
                    let sign =
                        crate::exact::sign(p * q + s * m + s * q + v * s + n * q + n * m);
                    let blk = kronecker(&ablk.scale_int(sign), &bblk, &c.ring)?;
                    // target block (p,q) in (C⊗D)_rho; source block
                    // (l_alpha−p, l_beta−q) in (C⊗D)_{src_rho}
                    let toff = block_offset(c, d, p, q);
                    let soff = block_offset(c, d, l_alpha - p, l_beta - q);
                    let key = (s, rho);
                    let mut acc = out.remove(&key).unwrap_or_else(|| {
                        ExactMatrix::zero(&c.ring, tc.rank(rho), tc.rank(src_rho))
                    });
                    // accumulate
                    for i in 0..blk.rows {
                        for j in 0..blk.cols {
                            let cur = acc.at(toff + i, soff + j).add(blk.at(i, j));
                            *acc.at_mut(toff + i, soff + j) = cur;
                        }
                    }
                    out.insert(key, acc);
                }
            }
        }
    }
    out.retain(|_, mat| !mat.is_zero());
    QuadraticComplex::new(tc, total_dim, out)
}

/// The chain map 1⊗f: C = C⊗pt → C⊗I for an end inclusion f: pt → I,
/// in the tensor block layout.
pub fn interval_inclusion_on_tensor(c: &ChainComplex, f: &ChainMap) -> ChainMap {
    let i = interval_complex();
    let point = ChainComplex::concentrated(&RingSpec::integers(), 0, 1);
    let tc = tensor_complex(c, &i).expect("tensor with the interval");
    let fm = f.component(&point, &i, 0).to_int().expect("integer end inclusion");
    let mut comps = BTreeMap::new();
    for p in c.degrees().collect::<Vec<_>>() {
        let rows = tc.rank(p);
        let cols = c.rank(p);
        if rows * cols == 0 {
            continue;
        }
        let mut m = ExactMatrix::zero(&c.ring, rows, cols);
        let off = block_offset(c, &i, p, 0);
        for a in 0..cols {
            for b in 0..2usize {
                if !num_traits::Zero::is_zero(fm.at(b, 0)) {
                    *m.at_mut(off + a * 2 + b, a) =
                        crate::exact::Scalar::from_int(&c.ring, fm.at(b, 0).clone());
                }
            }
        }
        comps.insert(p, m);
    }
    ChainMap { degree: 0, components: comps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::ChainMap;
    use crate::forms::gen;
    use crate::exact::Scalar;

    #[test]
    fn omega_values_match_display() {
        let w = omega_i();
        // (ω_I)₀⁰(σ₀₁*) = σ₀
        assert_eq!(
            w.omega.block(0, 0).to_int().unwrap(),
            crate::exact::IntMatrix::from_rows(&[vec![1], vec![0]])
        );
        // (ω_I)₁¹(σ₀₁*) = −σ₀₁
        assert_eq!(
            w.omega.block(1, 1).to_int().unwrap(),
            crate::exact::IntMatrix::from_rows(&[vec![-1]])
        );
    }

    #[test]
    fn omega_boundary_identity() {
        omega_i().verify_boundary_identity().unwrap();
    }

    #[test]
    fn nu_is_a_cycle() {
        assert!(nu().verify_cycle());
    }

    #[test]
    fn symmetric_boundary_squares_to_zero() {
        // d² = 0 on arbitrary (non-cycle) families
        let mut rng = gen::rng(23);
        for t in 0..12 {
            let d = gen::random_complex(&mut rng, 0, 2, 1);
            let m = (t % 3) as i64;
            let mut phi: StructureBlocks = BTreeMap::new();
            for b in 0..3i64 {
                for q in d.degrees().collect::<Vec<_>>() {
                    let rows = d.rank(q);
                    let cols = d.rank(m + b - q);
                    if rows * cols == 0 {
                        continue;
                    }
                    use rand::Rng;
                    let mat = ExactMatrix::from_fn(&d.ring, rows, cols, |_, _| {
                        Scalar::from_int(&d.ring, rng.gen_range(-2..=2i64))
                    });
                    phi.insert((b, q), mat);
                }
            }
            let s = SymmetricStructure::new(d, m, phi).unwrap();
            let dd = s.boundary().boundary();
            assert!(dd.phi.is_empty(), "d² ≠ 0 at m={m}");
        }
    }

    #[test]
    fn unit_law_is_exact() {
        let mut rng = gen::rng(31);
        for t in 0..10 {
            let c = gen::random_complex(&mut rng, 0, 2, 1);
            let n = (t % 4) as i64;
            let Some(q) = gen::sample_quadratic(&mut rng, &c, n) else {
                continue;
            };
            let out = w_tensor(&q, &nu()).unwrap();
            assert_eq!(out.n, q.n);
            // identical block families
            assert_eq!(out.psi, q.psi, "ψ⊗ν ≠ ψ");
        }
    }

    #[test]
    fn zero_tensor_is_zero() {
        let c = ChainComplex::concentrated(&RingSpec::integers(), 0, 2);
        let q = QuadraticComplex::new(c, 0, BTreeMap::new()).unwrap();
        let out = w_tensor(&q, &omega_i().omega).unwrap();
        assert!(out.psi.is_empty());
    }

    #[test]
    fn tensor_with_interval_is_the_cylinder_cobordism() {
        // ω_I is not a cycle (dω_I = 𝐢₁ν − 𝐢₀ν), so ψ⊗ω_I is not closed;
        // its boundary is exactly the difference of the end pushforwards.
        let mut rng = gen::rng(41);
        let w = omega_i();
        let mut checked = 0;
        for t in 0..16 {
            let c = gen::random_complex(&mut rng, 0, 2, 1);
            let n = (t % 4) as i64;
            let Some(q) = gen::sample_quadratic(&mut rng, &c, n) else {
                continue;
            };
            let q6 = q.convert_convention();
            let out = w_tensor_core(&q6, &w.omega).unwrap();
            let tc = &out.c;
            let bd = out.boundary_family_appendix().unwrap();
            let push = |f: &ChainMap| {
                let one_x_f = interval_inclusion_on_tensor(&q6.c, f);
                q6.pushforward(&one_x_f, tc).unwrap()
            };
            let p1 = push(&w.i1);
            let p0 = push(&w.i0);
            let keys: std::collections::BTreeSet<(i64, i64)> = bd
                .keys()
                .chain(p1.psi.keys())
                .chain(p0.psi.keys())
                .copied()
                .collect();
            for k in keys {
                let zero = ExactMatrix::zero(&q.c.ring, tc.rank(k.1), tc.rank(q.n - k.0 - k.1));
                let a = bd.get(&k).cloned().unwrap_or_else(|| zero.clone());
                let b1 = p1.psi.get(&k).cloned().unwrap_or_else(|| zero.clone());
                let b0 = p0.psi.get(&k).cloned().unwrap_or_else(|| zero.clone());
                let want = b1.sub(&b0).unwrap();
                assert!(
                    a.sub(&want).unwrap().is_zero(),
                    "cylinder identity fails at {:?} (n={n})",
                    k
                );
            }
            checked += 1;
        }
        assert!(checked > 6);
    }

    #[test]
    fn tensor_with_a_symmetric_cycle_is_quadratic() {
        // pushing ν to an end of the interval gives a genuine cycle, and
        // pairing with a cycle produces a valid quadratic structure.
        let w = omega_i();
        let end = nu().pushforward(&w.i0, &w.i).unwrap();
        assert!(end.verify_cycle());
        let mut rng = gen::rng(47);
        let mut checked = 0;
        for t in 0..14 {
            let c = gen::random_complex(&mut rng, 0, 2, 1);
            let n = (t % 4) as i64;
            let Some(q) = gen::sample_quadratic(&mut rng, &c, n) else {
                continue;
            };
            let out = w_tensor(&q, &end).unwrap();
            assert!(out.verify().unwrap().is_empty(), "ψ⊗(𝐢₀ν) invalid (n={n})");
            checked += 1;
        }
        assert!(checked > 5);
    }

    #[test]
    fn tensor_complex_squares_to_zero() {
        let mut rng = gen::rng(43);
        for _ in 0..6 {
            let c = gen::random_complex(&mut rng, 0, 3, 1);
            let t = tensor_complex(&c, &interval_complex()).unwrap();
            assert!(t.verify().is_empty());
        }
    }
}
