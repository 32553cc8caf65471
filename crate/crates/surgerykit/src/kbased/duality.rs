//! The chain duality (T, 𝔇) in flat matrix form.
//!
//! For a covariant object, TM is concentrated at r = −|σ| per slot with
//! TM_r(σ) = ([M][σ])^*, differential (−1)^{n_σ^τ} i_{τσ}^*; 𝔇(M)₀ has
//! blocks (−1)^{|σ|} p_{σ,τ}. The extension of T to complexes adds the
//! dualised differential on the slot diagonal with the sign (−1)^{|σ|},
//! and the extension of 𝔇 to complexes carries the degree sign fixed by
//! the axiom battery below ((−1)^{q} on the degree-q piece).

use super::{Graded, KComplex, KError, Variance};
use crate::exact::{ExactMatrix, RingSpec, Scalar};
use crate::simplicial::OrderedComplex;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A single K-based object.
#[derive(Debug, Clone)]
pub struct KObject {
    pub host: Arc<OrderedComplex>,
    pub variance: Variance,
    pub ring: RingSpec,
    pub module: Graded,
}

impl KObject {
    /// ι(A): the complex concentrated in degree 0.
    pub fn iota(&self) -> KComplex {
        let mut modules = BTreeMap::new();
        if self.module.total() > 0 {
            modules.insert(0, self.module.clone());
        }
        KComplex {
            host: self.host.clone(),
            variance: self.variance,
            ring: self.ring.clone(),
            modules,
            d: BTreeMap::new(),
        }
    }
}

/// The κ-decomposition of the slot TX_q(σ) = ([X_{inner}][σ])^*:
/// pairs (κ, rank X_inner(κ)) over the bracket of σ, in id order.
pub fn t_slot_layout(x: &KComplex, q: i64, sigma: usize) -> Vec<(usize, usize)> {
    let ds = x.host.dim_of(sigma);
    let inner = match x.variance {
        Variance::Covariant => -q - ds,
        Variance::Contravariant => -q + ds,
    };
    let g = x.graded(inner);
    x.variance
        .bracket(&x.host, sigma)
        .into_iter()
        .filter_map(|k| {
            let r = g.rank(k);
            if r > 0 {
                Some((k, r))
            } else {
                None
            }
        })
        .collect()
}

fn t_graded(x: &KComplex, q: i64) -> Graded {
    let mut ranks = BTreeMap::new();
    for sigma in x.host.ids() {
        let k: usize = t_slot_layout(x, q, sigma).iter().map(|&(_, r)| r).sum();
        if k > 0 {
            ranks.insert(sigma, k);
        }
    }
    Graded { ranks }
}

/// The degree range in which TX can be nonzero.
fn t_degree_range(x: &KComplex) -> Option<(i64, i64)> {
    let lo = x.min_degree()?;
    let hi = x.max_degree()?;
    let dmax = x.host.dim();
    match x.variance {
        Variance::Covariant => Some((-hi - dmax, -lo)),
        Variance::Contravariant => Some((-hi, -lo + dmax)),
    }
}

/// TX as a K-based complex (graded by q, no dimension shift).
pub fn t_complex(x: &KComplex) -> Result<KComplex, KError> {
    let Some((qlo, qhi)) = t_degree_range(x) else {
        return Ok(KComplex {
            host: x.host.clone(),
            variance: x.variance,
            ring: x.ring.clone(),
            modules: BTreeMap::new(),
            d: BTreeMap::new(),
        });
    };
    let mut modules = BTreeMap::new();
    for q in qlo..=qhi {
        let g = t_graded(x, q);
        if g.total() > 0 {
            modules.insert(q, g);
        }
    }
    let mut d = BTreeMap::new();
    for q in qlo..=qhi + 1 {
        let gt = modules.get(&(q - 1)).cloned().unwrap_or_default();
        let gs = modules.get(&q).cloned().unwrap_or_default();
        if gt.total() * gs.total() == 0 {
            continue;
        }
        let mut m = ExactMatrix::zero(&x.ring, gt.total(), gs.total());
        for (&sigma, _) in &gs.ranks {
            let ds = x.host.dim_of(sigma);
            let src_layout = t_slot_layout(x, q, sigma);
            // diagonal part: (−1)^{|σ|}·([d_X][σ])^† into the same slot
            if gt.rank(sigma) > 0 {
                let tgt_layout = t_slot_layout(x, q - 1, sigma);
                // [d][σ]: assembled blocks of d at the inner degrees
                let inner_src = match x.variance {
                    Variance::Covariant => -(q - 1) - ds,
                    Variance::Contravariant => -(q - 1) + ds,
                };
                // d: X_{inner_src} → X_{inner_src − 1}; [d][σ]: tgt_layout-assembled → src_layout-assembled
                let dflat = x.diff(inner_src);
                let gsrc = x.graded(inner_src);
                let gtgt = x.graded(inner_src - 1);
                let mut asm = ExactMatrix::zero(
                    &x.ring,
                    src_layout.iter().map(|&(_, r)| r).sum(),
                    tgt_layout.iter().map(|&(_, r)| r).sum(),
                );
                let mut roff = 0;
                for &(kap, kr) in &src_layout {
                    let mut coff = 0;
                    for &(kap2, kc) in &tgt_layout {
                        let b = dflat.block(gtgt.offset(kap), gsrc.offset(kap2), kr, kc);
                        // careful: d maps inner_src → inner_src−1, i.e. the
                        // assembled [d][σ] maps tgt_layout (inner_src) to
                        // src_layout (inner_src−1)… blocks (row κ of
                        // inner_src−1, col κ2 of inner_src)
                        asm.set_block(roff, coff, &b);
                        coff += kc;
                    }
                    roff += kr;
                }
                let dual = asm.involution_dual().scale_int(crate::exact::sign(ds));
                m.set_block(gt.offset(sigma), gs.offset(sigma), &dual);
            }
            // incidence part: blocks (τ, σ) with the deleted-vertex sign
            let (pairs, n_sign): (Vec<usize>, bool) = match x.variance {
                Variance::Covariant => (x.host.cofacets(sigma), true),
                Variance::Contravariant => (x.host.facets(sigma), false),
            };
            for tau in pairs {
                if gt.rank(tau) == 0 {
                    continue;
                }
                let n = if n_sign {
                    x.host.incidence_number(sigma, tau)?
                } else {
                    x.host.incidence_number(tau, sigma)?
                };
                // i_{τσ}^†: ([X][σ])^* → ([X][τ])^*: identity on common κ
                let tgt_layout = t_slot_layout(x, q - 1, tau);
                let mut incl = ExactMatrix::zero(
                    &x.ring,
                    tgt_layout.iter().map(|&(_, r)| r).sum(),
                    src_layout.iter().map(|&(_, r)| r).sum(),
                );
                let mut roff = 0;
                for &(kap_t, rk) in &tgt_layout {
                    let mut coff = 0;
                    for &(kap_s, ck) in &src_layout {
                        if kap_t == kap_s {
                            for i in 0..rk.min(ck) {
                                *incl.at_mut(roff + i, coff + i) = Scalar::from_int(&x.ring, 1);
                            }
                        }
                        coff += ck;
                    }
                    roff += rk;
                }
                let signed = incl.scale_int(crate::exact::sign(n as i64));
                m.set_block(gt.offset(tau), gs.offset(sigma), &signed);
            }
        }
        if !m.is_zero() {
            d.insert(q, m);
        }
    }
    KComplex::new(x.host.clone(), x.variance, x.ring.clone(), modules, d)
}

/// T(ιA) = the displayed TA of an object.
pub fn t_object(a: &KObject) -> Result<KComplex, KError> {
    t_complex(&a.iota())
}

/// T of a degree-0 chain map f: X → Y (flat components per degree) as a
/// degree-0 chain map TY → TX with blocks
/// (−1)^{q(q+|σ|)}·([f_{inner}][σ])^† on the slot diagonal.
pub fn t_chain_map(
    f: &BTreeMap<i64, ExactMatrix>,
    x: &KComplex,
    y: &KComplex,
    tx: &KComplex,
    ty: &KComplex,
) -> Result<BTreeMap<i64, ExactMatrix>, KError> {
    let mut out = BTreeMap::new();
    for q in ty.degrees().collect::<Vec<_>>() {
        let gs = ty.graded(q);
        let gt = tx.graded(q);
        if gs.total() * gt.total() == 0 {
            continue;
        }
        let mut m = ExactMatrix::zero(&x.ring, gt.total(), gs.total());
        for (&sigma, _) in &gs.ranks {
            if gt.rank(sigma) == 0 {
                continue;
            }
            let ds = x.host.dim_of(sigma);
            let inner = match x.variance {
                Variance::Covariant => -q - ds,
                Variance::Contravariant => -q + ds,
            };
            let Some(fm) = f.get(&inner) else { continue };
            // [f_inner][σ]: assembled over the bracket of σ
            let src_layout = t_slot_layout(y, q, sigma);
            let tgt_layout = t_slot_layout(x, q, sigma);
            let gx = x.graded(inner);
            let gy = y.graded(inner);
            let mut asm = ExactMatrix::zero(
                &x.ring,
                src_layout.iter().map(|&(_, r)| r).sum(),
                tgt_layout.iter().map(|&(_, r)| r).sum(),
            );
            // assembled [f][σ]: [X_inner][σ] → [Y_inner][σ]; rows over Y-layout
            let mut roff = 0;
            for &(kap_y, rk) in &src_layout {
                let mut coff = 0;
                for &(kap_x, ck) in &tgt_layout {
                    let b = fm.block(gy.offset(kap_y), gx.offset(kap_x), rk, ck);
                    asm.set_block(roff, coff, &b);
                    coff += ck;
                }
                roff += rk;
            }
            let sign = crate::exact::sign(q * (q + ds));
            let dual = asm.involution_dual().scale_int(sign);
            m.set_block(gt.offset(sigma), gs.offset(sigma), &dual);
        }
        if !m.is_zero() {
            out.insert(q, m);
        }
    }
    Ok(out)
}

/// 𝔇(X): T²X → X, components at degree q with blocks
/// (−1)^{|σ|(|σ|+1)/2}·p_{σ,τ} out of the κ = σ inner piece. The displayed
/// (−1)^{|σ|} fails the chain-map condition for |σ| ≥ 2 (checked on the
/// rank-one object at the top simplex of Δ²); the triangular-number sign
/// is the one satisfying both axioms, and agrees with the display for
/// |σ| ≤ 1.
pub fn d_complex(
    x: &KComplex,
    ttx: &KComplex,
) -> Result<BTreeMap<i64, ExactMatrix>, KError> {
    let tx = t_complex(x)?;
    let mut out = BTreeMap::new();
    for q in x.degrees().collect::<Vec<_>>() {
        let gt = x.graded(q);
        let gs = ttx.graded(q);
        if gt.total() * gs.total() == 0 {
            continue;
        }
        let mut m = ExactMatrix::zero(&x.ring, gt.total(), gs.total());
        for (&sigma, _) in &gs.ranks {
            let ds = x.host.dim_of(sigma);
            // the σ slot of T²X at q decomposes over κ in the bracket of σ
            // as (TX_{inner}(κ))^*, with κ = σ giving [X_q][σ]
            let outer = t_slot_layout(&tx, q, sigma);
            let mut off = 0;
            for &(kap, krank) in &outer {
                if kap != sigma {
                    off += krank;
                    continue;
                }
                // inner layout of (TX_{−q∓|σ|}(σ))^* = [X_q][σ]
                let inner_layout = t_slot_layout(
                    x,
                    match x.variance {
                        Variance::Covariant => -q - ds,
                        Variance::Contravariant => -q + ds,
                    },
                    sigma,
                );
                // project onto each τ in the bracket
                let mut ioff = 0;
                for &(tau, trank) in &inner_layout {
                    if gt.rank(tau) == trank {
                        let sign = crate::exact::sign(ds * (ds + 1) / 2);
                        for i in 0..trank {
                            let v = Scalar::from_int(&x.ring, sign);
                            *m.at_mut(gt.offset(tau) + i, gs.offset(sigma) + off + ioff + i) = v;
                        }
                    }
                    ioff += trank;
                }
                off += krank;
            }
        }
        if !m.is_zero() {
            out.insert(q, m);
        }
    }
    Ok(out)
}

/// Mirror a contravariant object on a subcomplex of Σ^l (cells stored as
/// complement subsets) to the covariant object on ∂Δ^{l+1} with
/// M′(σ) = M(σ*). The duality axioms transport across this order
/// reversal, which is how the source material uses the contravariant
/// side (always inside Σ^l).
pub fn mirror_to_sphere(a: &KObject, l: i64) -> Result<KObject, KError> {
    if a.variance != Variance::Contravariant {
        return Err(KError::Other("mirror expects a contravariant object".into()));
    }
    let sphere = Arc::new(crate::simplicial::dual::sphere_complex(l));
    let dual = crate::simplicial::DualComplex { l };
    let mut ranks = BTreeMap::new();
    for (&id, &k) in &a.module.ranks {
        let cell = a.host.simplex(id);
        let comp = dual.dual_cell(cell);
        let mirrored = sphere
            .id_of(&comp)
            .ok_or_else(|| KError::Other(format!("cell {:?} not mirrored in the sphere", cell)))?;
        ranks.insert(mirrored, k);
    }
    Ok(KObject {
        host: sphere,
        variance: Variance::Covariant,
        ring: a.ring.clone(),
        module: Graded { ranks },
    })
}

/// Verify both chain duality axioms for an object:
/// 𝔇(TA) ∘ T(𝔇(A)) = id on TA, and cone(𝔇(A)) acyclic over ℤ.
/// Contravariant objects must live on a subcomplex of some Σ^l and are
/// transported across the order reversal first.
pub fn verify_duality_axioms_sphere(a: &KObject, l: i64) -> Result<(), KError> {
    let mirrored = mirror_to_sphere(a, l)?;
    verify_duality_axioms(&mirrored)
}

pub fn verify_duality_axioms(a: &KObject) -> Result<(), KError> {
    if a.variance == Variance::Contravariant {
        return Err(KError::Other(
            "contravariant axioms are checked through the sphere mirror".into(),
        ));
    }
    let iota = a.iota();
    let ta = t_object(a)?;
    let tta = t_complex(&ta)?;
    let ttta = t_complex(&tta)?;
    // 𝔇(A): T²(ιA) → ιA
    let d_a = d_complex(&iota, &tta)?;
    // chain map check
    verify_flat_chain_map(&d_a, &tta, &iota)?;
    // T(𝔇(A)): T(ιA) = TA → T(T²A)
    let t_da = t_chain_map(&d_a, &tta, &iota, &ttta, &ta)?;
    verify_flat_chain_map(&t_da, &ta, &ttta)?;
    // 𝔇(TA): T²(TA) → TA
    let d_ta = d_complex(&ta, &ttta)?;
    verify_flat_chain_map(&d_ta, &ttta, &ta)?;
    // composite = id on TA
    for q in ta.degrees().collect::<Vec<_>>() {
        let n = ta.total_rank(q);
        if n == 0 {
            continue;
        }
        let first = t_da
            .get(&q)
            .cloned()
            .unwrap_or_else(|| ExactMatrix::zero(&a.ring, ttta.total_rank(q), n));
        let second = d_ta
            .get(&q)
            .cloned()
            .unwrap_or_else(|| ExactMatrix::zero(&a.ring, n, ttta.total_rank(q)));
        let comp = second.mul(&first)?;
        if comp != ExactMatrix::identity(&a.ring, n) {
            return Err(KError::Other(format!("𝔇T∘T𝔇 ≠ id at degree {q}")));
        }
    }
    // cone(𝔇(A)) acyclic over ℤ
    if a.ring.is_integers() {
        let src = tta.flatten()?;
        let tgt = iota.flatten()?;
        let f = crate::chain::ChainMap {
            degree: 0,
            components: d_a.clone(),
        };
        if !crate::chain::cone_acyclic_z(&f, &src, &tgt)? {
            return Err(KError::Other("cone(𝔇) not acyclic".into()));
        }
    }
    Ok(())
}

pub fn verify_flat_chain_map(
    f: &BTreeMap<i64, ExactMatrix>,
    src: &KComplex,
    tgt: &KComplex,
) -> Result<(), KError> {
    let lo = src.min_degree().unwrap_or(0) - 1;
    let hi = src.max_degree().unwrap_or(0) + 1;
    let get = |r: i64| {
        f.get(&r)
            .cloned()
            .unwrap_or_else(|| ExactMatrix::zero(&src.ring, tgt.total_rank(r), src.total_rank(r)))
    };
    for r in lo..=hi {
        let lhs = tgt.diff(r).mul(&get(r))?;
        let rhs = get(r - 1).mul(&src.diff(r))?;
        if !lhs.sub(&rhs)?.is_zero() {
            return Err(KError::Other(format!("not a chain map at degree {r}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_object(
        rng: &mut rand_chacha::ChaCha8Rng,
        host: &Arc<OrderedComplex>,
        variance: Variance,
    ) -> KObject {
        let ring = RingSpec::integers();
        let mut ranks = BTreeMap::new();
        for id in host.ids() {
            let k = rng.gen_range(0..=2usize);
            if k > 0 {
                ranks.insert(id, k);
            }
        }
        KObject {
            host: host.clone(),
            variance,
            ring,
            module: Graded { ranks },
        }
    }

    #[test]
    fn point_duality_is_identity_like() {
        let host = Arc::new(OrderedComplex::from_simplices(vec![vec![0]]));
        let a = KObject {
            host,
            variance: Variance::Covariant,
            ring: RingSpec::integers(),
            module: Graded {
                ranks: [(0usize, 1usize)].into_iter().collect(),
            },
        };
        let ta = t_object(&a).unwrap();
        assert_eq!(ta.total_rank(0), 1);
        verify_duality_axioms(&a).unwrap();
    }

    #[test]
    fn edge_supported_object_dualises_with_incidence_signs() {
        // M supported on the edge of a 1-simplex complex: TM sits at r = −1
        let host = Arc::new(OrderedComplex::from_simplices(vec![vec![0, 1]]));
        let e = host.id_of(&[0, 1]).unwrap();
        let a = KObject {
            host: host.clone(),
            variance: Variance::Covariant,
            ring: RingSpec::integers(),
            module: Graded {
                ranks: [(e, 1usize)].into_iter().collect(),
            },
        };
        let ta = t_object(&a).unwrap();
        assert_eq!(ta.total_rank(-1), 1);
        assert_eq!(ta.total_rank(0), 2);
        // d: TM₀ → TM₋₁ carries signs (−1)^{n_σ^τ}: +1 and −1
        let d = ta.diff(0).to_int().unwrap();
        let vals: Vec<i64> = (0..2)
            .map(|j| {
                let v = d.at(0, j);
                use num_traits::ToPrimitive;
                v.to_i64().unwrap()
            })
            .collect();
        let mut sorted = vals.clone();
        sorted.sort();
        assert_eq!(sorted, vec![-1, 1]);
        verify_duality_axioms(&a).unwrap();
    }

    #[test]
    fn duality_axioms_on_random_objects() {
        let mut rng = crate::forms::gen::rng(7007);
        let hosts = [
            Arc::new(OrderedComplex::simplex_boundary(3)),
            Arc::new(OrderedComplex::full_simplex(3)),
            Arc::new(OrderedComplex::cycle(4)),
        ];
        for t in 0..12 {
            let host = &hosts[t % hosts.len()];
            let a = random_object(&mut rng, host, Variance::Covariant);
            if a.module.total() == 0 {
                continue;
            }
            verify_duality_axioms(&a).unwrap_or_else(|e| {
                panic!("axioms fail (t={t}): {e}");
            });
        }
    }

    #[test]
    fn contravariant_axioms_via_the_sphere_mirror() {
        // contravariant objects on subcomplexes of Σ^l, transported
        let mut rng = crate::forms::gen::rng(7017);
        let l = 2;
        let sigma_l = Arc::new(crate::simplicial::dual::sphere_complex(l));
        for t in 0..8 {
            let a = random_object(&mut rng, &sigma_l, Variance::Contravariant);
            if a.module.total() == 0 {
                continue;
            }
            verify_duality_axioms_sphere(&a, l).unwrap_or_else(|e| {
                panic!("mirrored axioms fail (t={t}): {e}");
            });
        }
    }
}
