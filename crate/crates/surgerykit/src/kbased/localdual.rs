//! Local dualisation between quadratic complexes on K_c and on the dual
//! cells of Σ^l.
//!
//! Č_r(σ*) = C_r(σ), d_Č(τ*,σ*) = d_C(τ,σ), and
//! ψ̌_u^r(τ*,σ*) = (−1)^{k + J_σ^all + l|σ| + lr + l(l−1)/2} ψ_u^r(τ,σ),
//! a bijection onto (k−l)-dimensional structures on the contravariant
//! side (cells stored as complement subsets of {0,…,l+1}).

use super::quadratic::KQuadraticComplex;
use super::{Graded, KComplex, KError, Variance};
use crate::exact::ExactMatrix;
use crate::simplicial::dual::{sphere_complex, SphereEmbedding};
use crate::simplicial::DualComplex;
use std::collections::BTreeMap;
use std::sync::Arc;

/// The covariant complex of dual modules: position r holds C^{n−r} with
/// the dual differential.
pub fn dual_position_complex(x: &KComplex, n: i64) -> Result<KComplex, KError> {
    let dmax = x.host.dim();
    let lo = x.min_degree().unwrap_or(0);
    let hi = x.max_degree().unwrap_or(0);
    let mut modules = BTreeMap::new();
    for r in lo - dmax - 1..=hi + dmax + 1 {
        let g = super::assembly::dual_graded(x, n - r, None).1;
        if g.total() > 0 {
            modules.insert(r, g);
        }
    }
    let mut d = BTreeMap::new();
    let keys: Vec<i64> = modules.keys().copied().collect();
    for &r in &keys {
        if modules.contains_key(&(r - 1)) {
            d.insert(r, super::quadratic::dual_diff(x, n - r));
        }
    }
    KComplex::new(x.host.clone(), x.variance, x.ring.clone(), modules, d)
}

/// The hyperbolic quadratic complex on X ⊕ (dual of X): ψ₀ is the signed
/// identity from the dual-of-X columns onto the dual summand. Always
/// valid, and Poincaré componentwise.
pub fn hyperbolic_kquadratic(x: &KComplex, n: i64) -> Result<KQuadraticComplex, KError> {
    let dual = dual_position_complex(x, n)?;
    // C = X ⊕ dual, degreewise
    let mut modules: BTreeMap<i64, Graded> = BTreeMap::new();
    let degs: std::collections::BTreeSet<i64> =
        x.degrees().chain(dual.degrees()).collect();
    // the direct sum interleaves ranks per simplex: X part first
    let mut part_x: BTreeMap<i64, Graded> = BTreeMap::new();
    let mut part_d: BTreeMap<i64, Graded> = BTreeMap::new();
    for &r in &degs {
        let gx = x.graded(r);
        let gd = dual.graded(r);
        let mut ranks = BTreeMap::new();
        for id in x.host.ids() {
            let k = gx.rank(id) + gd.rank(id);
            if k > 0 {
                ranks.insert(id, k);
            }
        }
        modules.insert(r, Graded { ranks });
        part_x.insert(r, gx);
        part_d.insert(r, gd);
    }
    // embed a block matrix (X-part or dual-part) into the sum layout
    let embed = |m: &ExactMatrix,
                 rows_part: &Graded,
                 cols_part: &Graded,
                 rows_sum: &Graded,
                 cols_sum: &Graded,
                 row_in_x: bool,
                 col_in_x: bool,
                 rows_x: &Graded,
                 cols_x: &Graded|
     -> ExactMatrix {
        let mut out = ExactMatrix::zero(&x.ring, rows_sum.total(), cols_sum.total());
        for (&tau, &rk) in &rows_part.ranks {
            for (&sigma, &ck) in &cols_part.ranks {
                let b = m.block(rows_part.offset(tau), cols_part.offset(sigma), rk, ck);
                if b.is_zero() {
                    continue;
                }
                let ro = rows_sum.offset(tau) + if row_in_x { 0 } else { rows_x.rank(tau) };
                let co = cols_sum.offset(sigma) + if col_in_x { 0 } else { cols_x.rank(sigma) };
                let mut acc = out.block(ro, co, rk, ck);
                acc = acc.add(&b).expect("shape");
                out.set_block(ro, co, &acc);
            }
        }
        out
    };
    let mut d = BTreeMap::new();
    for &r in &degs {
        let rows_sum = modules.get(&(r - 1)).cloned().unwrap_or_default();
        let cols_sum = modules.get(&r).cloned().unwrap_or_default();
        if rows_sum.total() * cols_sum.total() == 0 {
            continue;
        }
        let mut m = ExactMatrix::zero(&x.ring, rows_sum.total(), cols_sum.total());
        let bx = embed(
            &x.diff(r),
            &x.graded(r - 1),
            &x.graded(r),
            &rows_sum,
            &cols_sum,
            true,
            true,
            &x.graded(r - 1),
            &x.graded(r),
        );
        let bd = embed(
            &dual.diff(r),
            &dual.graded(r - 1),
            &dual.graded(r),
            &rows_sum,
            &cols_sum,
            false,
            false,
            &x.graded(r - 1),
            &x.graded(r),
        );
        m = m.add(&bx)?.add(&bd)?;
        d.insert(r, m);
    }
    let c = KComplex::new(x.host.clone(), x.variance, x.ring.clone(), modules, d)?;
    // ψ₀^r: the dual-of-X columns of C^{n−r} map by (−1)^{nr}·id onto the
    // dual summand of C_r. The dual module of C at m decomposes per slot as
    // (X-part ⊕ dual-part) of the inner degree; the X-originating inner
    // entries correspond to the dual module of X, which is dual_r = C-dual
    // part at position n−m.
    let mut psi = BTreeMap::new();
    for r in c.degrees().collect::<Vec<_>>() {
        let m_deg = n - r;
        let dm_sum = c.dual_module(m_deg);
        let dm_x = x.dual_module(m_deg);
        let rows = c.graded(r);
        if rows.total() * dm_sum.total() == 0 {
            continue;
        }
        let mut mat = ExactMatrix::zero(&x.ring, rows.total(), dm_sum.total());
        // for each slot σ: inner pieces (κ, rank) of the summed complex are
        // rank_X(inner)(κ) + rank_dual(inner)(κ); the X-part pieces align
        // with the X-dual module, which equals dual.graded(r) at slot σ.
        for (&sigma, inner_sum) in &dm_sum.slots {
            let Some(inner_x) = dm_x.slots.get(&sigma) else {
                continue;
            };
            // target: dual summand of C_r at σ
            let tgt_off = rows.offset(sigma) + x.graded(r).rank(sigma);
            // the X-dual module at superscript m is exactly dual.graded(r)
            // at σ with the same inner order, entry for entry
            let mut src_inner_off = 0usize;
            let mut x_inner_off = 0usize;
            let mut ix = 0usize;
            for &(kappa, krank_sum) in inner_sum {
                let x_rank = inner_x
                    .iter()
                    .find(|&&(k2, _)| k2 == kappa)
                    .map(|&(_, k)| k)
                    .unwrap_or(0);
                if ix < inner_x.len() && x_rank > 0 {
                    for t in 0..x_rank {
                        *mat.at_mut(
                            tgt_off + x_inner_off + t,
                            dm_sum.offset(sigma) + src_inner_off + t,
                        ) = crate::exact::Scalar::from_int(
                            &x.ring,
                            crate::exact::sign(n * r),
                        );
                    }
                    x_inner_off += x_rank;
                    ix += 1;
                }
                src_inner_off += krank_sum;
            }
        }
        if !mat.is_zero() {
            psi.insert((0, r), mat);
        }
    }
    KQuadraticComplex::new(c, n, psi)
}

/// The local dual data of a covariant quadratic complex through a sphere
/// embedding. Simplices listed in `kill` (the subcomplex L_c) must carry
/// zero modules.
pub struct LocalDual {
    pub l: i64,
    pub output: KQuadraticComplex,
}

fn sphere_image(emb: &SphereEmbedding, host_id: usize) -> Vec<u32> {
    emb.image(host_id)
}

pub fn local_dual(
    q: &KQuadraticComplex,
    emb: &SphereEmbedding,
    kill: &std::collections::BTreeSet<usize>,
) -> Result<LocalDual, KError> {
    if q.complex.variance != Variance::Covariant {
        return Err(KError::Other("local dual expects a covariant input".into()));
    }
    let l = emb.l;
    let k_dim = q.n;
    let sphere = Arc::new(sphere_complex(l));
    let dual = DualComplex { l };
    for id in kill {
        for r in q.complex.degrees().collect::<Vec<_>>() {
            if q.complex.graded(r).rank(*id) > 0 {
                return Err(KError::Other(format!(
                    "module at a killed simplex {:?}",
                    q.complex.host.simplex(*id)
                )));
            }
        }
    }
    // simplex id in input host → simplex id of σ* in the sphere host
    let to_star = |id: usize| -> usize {
        let img = sphere_image(emb, id);
        let star = dual.dual_cell(&img);
        sphere.id_of(&star).expect("dual cell lives in the sphere")
    };
    let mut modules: BTreeMap<i64, Graded> = BTreeMap::new();
    for r in q.complex.degrees().collect::<Vec<_>>() {
        let g = q.complex.graded(r);
        let mut ranks = BTreeMap::new();
        for (&id, &kk) in &g.ranks {
            ranks.insert(to_star(id), kk);
        }
        if !ranks.is_empty() {
            modules.insert(r, Graded { ranks });
        }
    }
    let mut d = BTreeMap::new();
    for r in q.complex.degrees().collect::<Vec<_>>() {
        let gt = q.complex.graded(r - 1);
        let gs = q.complex.graded(r);
        let rows = modules.get(&(r - 1)).cloned().unwrap_or_default();
        let cols = modules.get(&r).cloned().unwrap_or_default();
        if rows.total() * cols.total() == 0 {
            continue;
        }
        let dflat = q.complex.diff(r);
        let mut m = ExactMatrix::zero(&q.complex.ring, rows.total(), cols.total());
        for (&tau, &rk) in &gt.ranks {
            for (&sigma, &ck) in &gs.ranks {
                let b = dflat.block(gt.offset(tau), gs.offset(sigma), rk, ck);
                if !b.is_zero() {
                    m.set_block(rows.offset(to_star(tau)), cols.offset(to_star(sigma)), &b);
                }
            }
        }
        d.insert(r, m);
    }
    let out_complex = KComplex::new(
        sphere.clone(),
        Variance::Contravariant,
        q.complex.ring.clone(),
        modules,
        d,
    )?;
    // ψ̌ blocks with the displayed sign
    let n_out = k_dim - l;
    let mut psi = BTreeMap::new();
    for (&(u, r), flat) in &q.psi {
        let dm_in = q.complex.dual_module(k_dim - u - r);
        let dm_out = out_complex.dual_module(n_out - u - r);
        let gt_in = q.complex.graded(r);
        let gt_out = out_complex.graded(r);
        if gt_out.total() * dm_out.total() == 0 {
            continue;
        }
        let mut m = ExactMatrix::zero(&q.complex.ring, gt_out.total(), dm_out.total());
        for (&tau, &rk) in &gt_in.ranks {
            for (&sigma, inner_in) in &dm_in.slots {
                let sgn = {
                    let img = sphere_image(emb, sigma);
                    let j_all = dual.j_all(&img);
                    let ds = q.complex.host.dim_of(sigma);
                    crate::exact::sign(
                        k_dim + j_all + l * ds + l * r + l * (l - 1) / 2,
                    )
                };
                let sigma_star = to_star(sigma);
                let Some(inner_out) = dm_out.slots.get(&sigma_star) else {
                    continue;
                };
                // inner pieces: κ ≥ σ in the input ↔ κ* ≤ σ* in the output
                for &(kappa, kk) in inner_in {
                    let in_off = dm_in.inner_offset(sigma, kappa).unwrap();
                    let kappa_star = to_star(kappa);
                    let Some(out_off) = dm_out.inner_offset(sigma_star, kappa_star) else {
                        continue;
                    };
                    debug_assert!(inner_out.iter().any(|&(k2, _)| k2 == kappa_star));
                    let b = flat.block(gt_in.offset(tau), dm_in.offset(sigma) + in_off, rk, kk);
                    if b.is_zero() {
                        continue;
                    }
                    let mut acc = m.block(
                        gt_out.offset(to_star(tau)),
                        dm_out.offset(sigma_star) + out_off,
                        rk,
                        kk,
                    );
                    acc = acc.add(&b.scale_int(sgn))?;
                    m.set_block(
                        gt_out.offset(to_star(tau)),
                        dm_out.offset(sigma_star) + out_off,
                        &acc,
                    );
                }
            }
        }
        if !m.is_zero() {
            psi.insert((u, r), m);
        }
    }
    let output = KQuadraticComplex::new(out_complex, n_out, psi)?;
    Ok(LocalDual { l, output })
}

/// Invert the correspondence back onto the original host.
pub fn local_dual_inverse(
    ld: &KQuadraticComplex,
    emb: &SphereEmbedding,
    original_host: Arc<crate::simplicial::OrderedComplex>,
    k_dim: i64,
) -> Result<KQuadraticComplex, KError> {
    let l = emb.l;
    let dual = DualComplex { l };
    let sphere = &ld.complex.host;
    // invert the star map
    let mut from_star: BTreeMap<usize, usize> = BTreeMap::new();
    for id in original_host.ids() {
        let img = emb.image(id);
        let star = dual.dual_cell(&img);
        from_star.insert(sphere.id_of(&star).expect("star"), id);
    }
    let mut modules: BTreeMap<i64, Graded> = BTreeMap::new();
    for r in ld.complex.degrees().collect::<Vec<_>>() {
        let g = ld.complex.graded(r);
        let mut ranks = BTreeMap::new();
        for (&id, &kk) in &g.ranks {
            ranks.insert(from_star[&id], kk);
        }
        modules.insert(r, Graded { ranks });
    }
    let mut d = BTreeMap::new();
    for r in ld.complex.degrees().collect::<Vec<_>>() {
        let gt = ld.complex.graded(r - 1);
        let gs = ld.complex.graded(r);
        let rows = modules.get(&(r - 1)).cloned().unwrap_or_default();
        let cols = modules.get(&r).cloned().unwrap_or_default();
        if rows.total() * cols.total() == 0 {
            continue;
        }
        let dflat = ld.complex.diff(r);
        let mut m = ExactMatrix::zero(&ld.complex.ring, rows.total(), cols.total());
        for (&tau, &rk) in &gt.ranks {
            for (&sigma, &ck) in &gs.ranks {
                let b = dflat.block(gt.offset(tau), gs.offset(sigma), rk, ck);
                if !b.is_zero() {
                    m.set_block(rows.offset(from_star[&tau]), cols.offset(from_star[&sigma]), &b);
                }
            }
        }
        d.insert(r, m);
    }
    let out_complex = KComplex::new(
        original_host.clone(),
        Variance::Covariant,
        ld.complex.ring.clone(),
        modules,
        d,
    )?;
    let mut psi = BTreeMap::new();
    for (&(u, r), flat) in &ld.psi {
        let dm_in = ld.complex.dual_module(ld.n - u - r);
        let dm_out = out_complex.dual_module(k_dim - u - r);
        let gt_in = ld.complex.graded(r);
        let gt_out = out_complex.graded(r);
        let mut m = ExactMatrix::zero(&ld.complex.ring, gt_out.total(), dm_out.total());
        for (&tau_star, &rk) in &gt_in.ranks {
            for (&sigma_star, inner_in) in &dm_in.slots {
                let sigma = from_star[&sigma_star];
                let sgn = {
                    let img = emb.image(sigma);
                    let j_all = dual.j_all(&img);
                    let ds = original_host.dim_of(sigma);
                    crate::exact::sign(k_dim + j_all + l * ds + l * r + l * (l - 1) / 2)
                };
                for &(kappa_star, kk) in inner_in {
                    let in_off = dm_in.inner_offset(sigma_star, kappa_star).unwrap();
                    let kappa = from_star[&kappa_star];
                    let Some(out_off) = dm_out.inner_offset(sigma, kappa) else {
                        continue;
                    };
                    let b = flat.block(
                        gt_in.offset(tau_star),
                        dm_in.offset(sigma_star) + in_off,
                        rk,
                        kk,
                    );
                    if b.is_zero() {
                        continue;
                    }
                    let mut acc = m.block(
                        gt_out.offset(from_star[&tau_star]),
                        dm_out.offset(sigma) + out_off,
                        rk,
                        kk,
                    );
                    acc = acc.add(&b.scale_int(sgn))?;
                    m.set_block(
                        gt_out.offset(from_star[&tau_star]),
                        dm_out.offset(sigma) + out_off,
                        &acc,
                    );
                }
            }
        }
        if !m.is_zero() {
            psi.insert((u, r), m);
        }
    }
    KQuadraticComplex::new(out_complex, k_dim, psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::OrderedComplex;

    #[test]
    fn hyperbolic_is_valid_and_poincare() {
        let hosts = vec![
            Arc::new(OrderedComplex::from_simplices(vec![vec![0]])),
            Arc::new(OrderedComplex::from_simplices(vec![vec![0, 1]])),
            Arc::new(OrderedComplex::simplex_boundary(3)),
        ];
        for host in hosts {
            let x = KComplex::simplicial(host.clone()).unwrap();
            // covariant instances via the sphere restriction
            let k = OrderedComplex::from_simplices(
                host.simplices_iter().map(|(_, s)| s.clone()).collect::<Vec<_>>(),
            );
            let verts = k.vertices().len() as i64;
            let l = (verts + 1).max(k.dim() + 1);
            let xc = KComplex::covariant_restriction_sphere(&k, l).unwrap();
            let _ = x;
            for n in 0..3i64 {
                let h = hyperbolic_kquadratic(&xc, n).unwrap();
                assert!(h.verify().unwrap().is_empty(), "relation fails n={n}");
                assert!(
                    h.poincare_failures_z().unwrap().is_empty(),
                    "not Poincaré n={n}"
                );
            }
        }
    }

    #[test]
    fn vertex_local_dual_carries_the_displayed_scalar() {
        // K_c = one vertex embedded at 0 in ∂Δ^{l+1}, C = ℤ at the vertex
        let kc = OrderedComplex::from_simplices(vec![vec![0]]);
        let l = 1;
        let emb = SphereEmbedding::natural(kc.clone(), l).unwrap();
        let host = Arc::new(kc);
        let v = host.id_of(&[0]).unwrap();
        let mut modules = BTreeMap::new();
        modules.insert(0, Graded { ranks: [(v, 1usize)].into_iter().collect() });
        let c = KComplex::new(
            host,
            Variance::Covariant,
            crate::exact::RingSpec::integers(),
            modules,
            BTreeMap::new(),
        )
        .unwrap();
        let mut psi = BTreeMap::new();
        psi.insert((0, 0), ExactMatrix::from_int_rows(&[vec![1]]));
        let q = KQuadraticComplex::new(c, 0, psi).unwrap();
        assert!(q.verify().unwrap().is_empty());
        let ld = local_dual(&q, &emb, &Default::default()).unwrap();
        // n_out = −l; the block carries (−1)^{k+J+l|σ|+lr+l(l−1)/2}
        // with k = 0, J_{0}^all = 1+2 = 3, |σ| = 0, r = 0, l = 1: (−1)^3 = −1
        let block = ld.output.block(0, 0);
        assert_eq!(
            block.to_int().unwrap(),
            crate::exact::IntMatrix::from_rows(&[vec![-1]])
        );
        assert!(ld.output.verify().unwrap().is_empty());
    }

    #[test]
    fn local_dual_round_trip_and_relation() {
        let mut rng = crate::forms::gen::rng(2024);
        // host: ∂Δ² embedded naturally in ∂Δ^{l+1}
        let kc = OrderedComplex::simplex_boundary(3);
        let l = 3;
        let emb = SphereEmbedding::natural(kc.clone(), l).unwrap();
        let host = Arc::new(kc.clone());
        let mut tested = 0;
        for n in 1..4i64 {
            let x = KComplex::covariant_restriction_sphere(&kc, l).unwrap();
            let _ = x;
            // covariant structures on the abstract host: hyperbolics over
            // the sphere restriction are on the sphere host; instead build
            // covariant complexes on the host itself with zero differential
            let mut modules = BTreeMap::new();
            use rand::Rng;
            for r in 0..=n.min(2) {
                let mut ranks = BTreeMap::new();
                for id in host.ids() {
                    let k = rng.gen_range(0..=1usize);
                    if k > 0 {
                        ranks.insert(id, k);
                    }
                }
                if !ranks.is_empty() {
                    modules.insert(r, Graded { ranks });
                }
            }
            if modules.is_empty() {
                continue;
            }
            let c = KComplex::new(
                host.clone(),
                Variance::Covariant,
                crate::exact::RingSpec::integers(),
                modules,
                BTreeMap::new(),
            )
            .unwrap();
            let Some(q) = super::super::quadratic::sample_kquadratic(&mut rng, &c, n).unwrap()
            else {
                continue;
            };
            let ld = local_dual(&q, &emb, &Default::default()).unwrap();
            assert!(
                ld.output.verify().unwrap().is_empty(),
                "local dual fails the relation at n={n}"
            );
            let back = local_dual_inverse(&ld.output, &emb, host.clone(), n).unwrap();
            assert_eq!(back.psi, q.psi, "round trip differs at n={n}");
            assert_eq!(back.complex.flatten().unwrap(), q.complex.flatten().unwrap());
            tested += 1;
        }
        assert!(tested >= 2);
    }

    #[test]
    fn local_dual_preserves_poincare_componentwise() {
        let kc = OrderedComplex::full_simplex(2);
        let l = 2;
        let emb = SphereEmbedding::natural(kc.clone(), l).unwrap();
        // hyperbolic on a covariant complex over the abstract host
        let host = Arc::new(kc);
        let e = host.id_of(&[0, 1]).unwrap();
        let v = host.id_of(&[0]).unwrap();
        let mut modules = BTreeMap::new();
        modules.insert(
            0,
            Graded { ranks: [(v, 1usize), (e, 1usize)].into_iter().collect() },
        );
        let x = KComplex::new(
            host,
            Variance::Covariant,
            crate::exact::RingSpec::integers(),
            modules,
            BTreeMap::new(),
        )
        .unwrap();
        for n in 0..2i64 {
            let h = hyperbolic_kquadratic(&x, n).unwrap();
            assert!(h.poincare_failures_z().unwrap().is_empty());
            let ld = local_dual(&h, &emb, &Default::default()).unwrap();
            assert!(ld.output.verify().unwrap().is_empty());
            assert!(
                ld.output.poincare_failures_z().unwrap().is_empty(),
                "Poincaré not preserved at n={n}"
            );
        }
    }
}