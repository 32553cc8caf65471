//! Quadratic structures on K-based complexes.
//!
//! ψ_u^r maps the dual module C^{n−u−r} to C_r; the relation checked is
//! the displayed one:
//!
//!   0 = d ψ_u^{r+1} − (−1)^{n−u} ψ_u^r d_{C^{-*}} + (−1)^{n−u−1} ψ_{u+1}^r
//!       + (−1)^n Tψ_{u+1}^r,
//!
//! with T the chain-duality involution: blockwise,
//! Tψ_u^s(τ,σ) = (−1)^{m(s+|σ|)+|σ|} p_{σ,τ} ∘ ⊞_κ (ψ_u^{q}(κ,σ))†,
//! m = n−u−s and q = m∓|σ| by variance.

use super::{DualModule, Graded, KComplex, KError, Variance};
use crate::exact::{ExactMatrix, IntMatrix, LinearSystem};
use std::collections::BTreeMap;

/// Sparse record of one T-entry: output (row, col) takes the value
/// sign · ψ[key][(i, j)].
pub type TEntry = (usize, usize, (i64, i64), usize, usize, i64);

#[derive(Debug, Clone)]
pub struct KQuadraticComplex {
    pub complex: KComplex,
    pub n: i64,
    /// flat blocks ψ_u^r: C^{n−u−r} → C_r keyed by (u, r)
    pub psi: BTreeMap<(i64, i64), ExactMatrix>,
}

impl KQuadraticComplex {
    pub fn new(
        complex: KComplex,
        n: i64,
        psi: BTreeMap<(i64, i64), ExactMatrix>,
    ) -> Result<Self, KError> {
        let q = KQuadraticComplex { complex, n, psi };
        for (&(u, r), m) in &q.psi {
            let rows = q.complex.total_rank(r);
            let dm = q.complex.dual_module(n - u - r);
            if m.rows != rows || m.cols != dm.total() {
                return Err(KError::Other(format!(
                    "psi block ({u},{r}) has shape {}x{}, want {}x{}",
                    m.rows,
                    m.cols,
                    rows,
                    dm.total()
                )));
            }
            // triangularity of the blocks
            let gt = q.complex.graded(r);
            for (&tau, &kt) in &gt.ranks {
                for (&sigma, _) in &dm.slots {
                    if q.complex.variance.allows(&q.complex.host, tau, sigma) {
                        continue;
                    }
                    let b = m.block(gt.offset(tau), dm.offset(sigma), kt, dm.slot_rank(sigma));
                    if !b.is_zero() {
                        return Err(KError::NotTriangular(tau, sigma));
                    }
                }
            }
        }
        Ok(q)
    }

    pub fn block(&self, u: i64, r: i64) -> ExactMatrix {
        match self.psi.get(&(u, r)) {
            Some(m) => m.clone(),
            None => ExactMatrix::zero(
                &self.complex.ring,
                self.complex.total_rank(r),
                self.complex.dual_module(self.n - u - r).total(),
            ),
        }
    }

    /// The (τ, σ) block of ψ_u^r.
    pub fn psi_block(&self, u: i64, r: i64, tau: usize, sigma: usize) -> ExactMatrix {
        let m = self.block(u, r);
        let gt = self.complex.graded(r);
        let dm = self.complex.dual_module(self.n - u - r);
        m.block(
            gt.offset(tau),
            dm.offset(sigma),
            gt.rank(tau),
            dm.slot_rank(sigma),
        )
    }

    /// Entries of the T-dual at level u, target degree s, as sparse
    /// references into ψ.
    pub fn t_entries(&self, u: i64, s: i64) -> Vec<TEntry> {
        t_entries_for(&self.complex, self.n, u, s)
    }

    /// Tψ at level u, target degree s, as a flat matrix
    /// C^{n−u−s} → C_s.
    pub fn t_dual(&self, u: i64, s: i64) -> ExactMatrix {
        let rows = self.complex.total_rank(s);
        let cols = self.complex.dual_module(self.n - u - s).total();
        let mut out = ExactMatrix::zero(&self.complex.ring, rows, cols);
        for (row, col, key, i, j, sign) in self.t_entries(u, s) {
            if let Some(m) = self.psi.get(&key) {
                let v = m.at(i, j).involute(&self.complex.ring);
                let cur = out.at(row, col).add(&v.scale(&crate::exact::big(sign)));
                *out.at_mut(row, col) = cur;
            }
        }
        out
    }

    /// The displayed relation at (u, target degree r):
    /// a matrix C^{n−u−1−r} → C_r.
    pub fn relation(&self, u: i64, r: i64) -> Result<ExactMatrix, KError> {
        let n = self.n;
        let term1 = self.complex.diff(r + 1).mul(&self.block(u, r + 1))?;
        let dd = dual_diff(&self.complex, n - u - r - 1);
        let term2 = self
            .block(u, r)
            .mul(&dd)?
            .scale_int(-crate::exact::sign(n - u));
        let term3 = self
            .block(u + 1, r)
            .scale_int(crate::exact::sign(n - u - 1));
        let term4 = self.t_dual(u + 1, r).scale_int(crate::exact::sign(n));
        Ok(term1.add(&term2)?.add(&term3)?.add(&term4)?)
    }

    /// All failing (u, r); empty means valid.
    pub fn verify(&self) -> Result<Vec<(i64, i64)>, KError> {
        let Some(lo) = self.complex.min_degree() else {
            return Ok(Vec::new());
        };
        let hi = self.complex.max_degree().unwrap();
        let dmax = self.complex.host.dim();
        let umax = (self.n - 2 * lo + dmax + 2).max(1);
        let mut bad = Vec::new();
        for u in 0..=umax {
            for r in lo - 1..=hi + 1 {
                if !self.relation(u, r)?.is_zero() {
                    bad.push((u, r));
                }
            }
        }
        Ok(bad)
    }

    pub fn is_valid(&self) -> bool {
        matches!(self.verify(), Ok(v) if v.is_empty())
    }

    /// (1+T)ψ₀ as flat components per target degree.
    pub fn symmetrize_flat(&self) -> BTreeMap<i64, ExactMatrix> {
        let mut out = BTreeMap::new();
        for r in self.complex.degrees().collect::<Vec<_>>() {
            let a = self.block(0, r);
            let b = self.t_dual(0, r);
            let total = a.add(&b).expect("shapes agree");
            if !total.is_zero() {
                out.insert(r, total);
            }
        }
        out
    }

    /// Componentwise Poincaré test over ℤ: for every σ, the (σ,σ)
    /// component of (1+T)ψ₀ is a ℤ-equivalence between the diagonal
    /// complexes. Returns the failing simplices.
    pub fn poincare_failures_z(&self) -> Result<Vec<usize>, KError> {
        if !self.complex.ring.is_integers() {
            return Err(KError::Other("integers required".into()));
        }
        let phi = self.symmetrize_flat();
        let mut bad = Vec::new();
        for sigma in self.complex.host.ids() {
            if !self.diagonal_component_is_equivalence(&phi, sigma)? {
                bad.push(sigma);
            }
        }
        Ok(bad)
    }

    fn diagonal_component_is_equivalence(
        &self,
        phi: &BTreeMap<i64, ExactMatrix>,
        sigma: usize,
    ) -> Result<bool, KError> {
        let n = self.n;
        let c = &self.complex;
        let lo = c.min_degree().unwrap_or(0);
        let hi = c.max_degree().unwrap_or(0);
        let dmax = c.host.dim();
        // target complex: r ↦ C_r(σ) with diagonal differential blocks
        let mut t_ranks = BTreeMap::new();
        let mut t_d = BTreeMap::new();
        for r in lo..=hi {
            let g = c.graded(r);
            if g.rank(sigma) > 0 {
                t_ranks.insert(r, g.rank(sigma));
            }
        }
        for r in lo..=hi + 1 {
            let gt = c.graded(r - 1);
            let gs = c.graded(r);
            if gt.rank(sigma) * gs.rank(sigma) == 0 {
                continue;
            }
            t_d.insert(r, c.block_of(&c.diff(r), r - 1, r, sigma, sigma));
        }
        let target = crate::chain::ChainComplex::new(c.ring.clone(), t_ranks, t_d)?;
        // source complex: position r ↦ σ-slot of C^{n−r}, diagonal blocks of
        // the dual differential
        let mut s_ranks = BTreeMap::new();
        let mut s_d = BTreeMap::new();
        for r in lo - dmax - 1..=hi + dmax + 1 {
            let dm = c.dual_module(n - r);
            if dm.slot_rank(sigma) > 0 {
                s_ranks.insert(r, dm.slot_rank(sigma));
            }
        }
        let rs: Vec<i64> = s_ranks.keys().copied().collect();
        for &r in &rs {
            if !s_ranks.contains_key(&(r - 1)) {
                continue;
            }
            let m = n - r;
            let dd = dual_diff(c, m);
            let dm_src = c.dual_module(m);
            let dm_tgt = c.dual_module(m + 1);
            let b = dd.block(
                dm_tgt.offset(sigma),
                dm_src.offset(sigma),
                dm_tgt.slot_rank(sigma),
                dm_src.slot_rank(sigma),
            );
            s_d.insert(r, b);
        }
        let source = crate::chain::ChainComplex::new(c.ring.clone(), s_ranks, s_d)?;
        // the component map
        let mut comps = BTreeMap::new();
        for r in source.degrees().collect::<Vec<_>>() {
            let rows = target.rank(r);
            let cols = source.rank(r);
            if rows * cols == 0 {
                continue;
            }
            let b = match phi.get(&r) {
                Some(m) => {
                    let gt = c.graded(r);
                    let dm = c.dual_module(n - r);
                    m.block(gt.offset(sigma), dm.offset(sigma), rows, cols)
                }
                None => ExactMatrix::zero(&c.ring, rows, cols),
            };
            comps.insert(r, b);
        }
        // the component commutes with the differentials up to a uniform
        // sign pattern; strictify by trying the two degreewise twists
        for twist in [0i64, 1] {
            let mut tw = BTreeMap::new();
            for (&r, m) in &comps {
                tw.insert(r, m.scale_int(crate::exact::sign(twist * r)));
            }
            let f = crate::chain::ChainMap { degree: 0, components: tw };
            if f.verify(&source, &target).is_ok() {
                return Ok(crate::chain::cone_acyclic_z(&f, &source, &target)?);
            }
        }
        Err(KError::Other(format!(
            "diagonal component at simplex {sigma} is not a chain map"
        )))
    }
}

/// The T-operator entry table for arbitrary families on a K-complex.
pub fn t_entries_for(c: &KComplex, n: i64, u: i64, s: i64) -> Vec<TEntry> {
    let mut out = Vec::new();
    let m = n - u - s;
    let gt = c.graded(s);
    let dm_out = c.dual_module(m);
    for (&sigma, _) in &dm_out.slots {
        let ds = c.host.dim_of(sigma);
        let q = match c.variance {
            Variance::Covariant => m - ds,
            Variance::Contravariant => m + ds,
        };
        // ψ_u^q: C^{n−u−q} → C_q; its (κ, σ)-blocks for κ in the bracket
        let dm_src = c.dual_module(n - u - q);
        if dm_src.slot_rank(sigma) == 0 {
            continue;
        }
        let gq = c.graded(q);
        let sign = crate::exact::sign(m * (s + ds) + ds);
        // the σ-slot of C^{n−u−q} has inner pieces (κ′, rank C_s(κ′));
        // (ψ_u^q(κ,σ))† maps C_q(κ)^* into that dual, i.e. [C_s][σ]
        for (kappa, krank) in dm_out.slots[&sigma].clone() {
            // output columns: inner piece κ of the σ-slot of C^{n−u−s}
            let col0 = dm_out.offset(sigma) + dm_out.inner_offset(sigma, kappa).unwrap();
            debug_assert_eq!(krank, gq.rank(kappa));
            // ψ_u^q block (κ, σ): rows C_q(κ), cols σ-slot of dual(n−u−q)
            let p_rows = gq.rank(kappa);
            let p_row0 = gq.offset(kappa);
            let p_col0 = dm_src.offset(sigma);
            // its dual contributes to rows [C_s][σ]-pieces; we keep only the
            // τ-row written by p_{σ,τ}: all τ in the bracket with the inner
            // offset of τ inside the σ-slot of dual(n−u−q)
            for (tau, trank) in dm_src.slots[&sigma].clone() {
                if gt.rank(tau) != trank {
                    continue;
                }
                let inner0 = dm_src.inner_offset(sigma, tau).unwrap();
                let row0 = gt.offset(tau);
                for i in 0..trank {
                    for j in 0..p_rows {
                        // output[(row0+i, col0+j)] += sign · (ψ[(u,q)])†[(inner0+i, j)]
                        //   = sign · involute(ψ[(u,q)][(p_row0+j, p_col0+inner0+i)])
                        out.push((
                            row0 + i,
                            col0 + j,
                            (u, q),
                            p_row0 + j,
                            p_col0 + inner0 + i,
                            sign,
                        ));
                    }
                }
            }
        }
    }
    out
}

/// Flat dual-complex differential C^m → C^{m+1} per the displayed blocks.
pub fn dual_diff(c: &KComplex, m: i64) -> ExactMatrix {
    let src = c.dual_module(m);
    let tgt = c.dual_module(m + 1);
    let mut out = ExactMatrix::zero(&c.ring, tgt.total(), src.total());
    for (&sigma, inner_src) in &src.slots {
        let ds = c.host.dim_of(sigma);
        // diagonal: (−1)^{m+|σ|} ([d][σ])†
        if tgt.slot_rank(sigma) > 0 {
            let inner_deg = match c.variance {
                Variance::Covariant => m - ds,
                Variance::Contravariant => m + ds,
            };
            // d: C_{inner_deg+1} → C_{inner_deg}; assembled over the bracket
            let dflat = c.diff(inner_deg + 1);
            let g_lo = c.graded(inner_deg);
            let g_hi = c.graded(inner_deg + 1);
            let inner_tgt = &tgt.slots[&sigma];
            let mut asm = ExactMatrix::zero(
                &c.ring,
                inner_src.iter().map(|&(_, k)| k).sum(),
                inner_tgt.iter().map(|&(_, k)| k).sum(),
            );
            let mut roff = 0;
            for &(ka, kr) in inner_src {
                let mut coff = 0;
                for &(kb, kc) in inner_tgt {
                    let b = dflat.block(g_lo.offset(ka), g_hi.offset(kb), kr, kc);
                    asm.set_block(roff, coff, &b);
                    coff += kc;
                }
                roff += kr;
            }
            let dual = asm
                .involution_dual()
                .scale_int(crate::exact::sign(m + ds));
            out.set_block(tgt.offset(sigma), src.offset(sigma), &dual);
        }
        // incidence part
        let (pairs, use_sigma_tau): (Vec<usize>, bool) = match c.variance {
            Variance::Covariant => (c.host.cofacets(sigma), true),
            Variance::Contravariant => (c.host.facets(sigma), false),
        };
        for tau in pairs {
            if tgt.slot_rank(tau) == 0 {
                continue;
            }
            let n_inc = if use_sigma_tau {
                c.host.incidence_number(sigma, tau).expect("cofacet")
            } else {
                c.host.incidence_number(tau, sigma).expect("facet")
            };
            // (i_{τσ})†: identity on common κ pieces
            let inner_tgt = &tgt.slots[&tau];
            let mut roff = 0;
            for &(kt, rk) in inner_tgt {
                let mut coff = 0;
                for &(ks, ck) in inner_src {
                    if kt == ks {
                        for i in 0..rk.min(ck) {
                            let v = crate::exact::Scalar::from_int(
                                &c.ring,
                                crate::exact::sign(m + n_inc as i64),
                            );
                            *out.at_mut(
                                tgt.offset(tau) + roff + i,
                                src.offset(sigma) + coff + i,
                            ) = v;
                        }
                    }
                    coff += ck;
                }
                roff += rk;
            }
        }
    }
    out
}

/// The dual modules assemble into a cochain complex: check d∘d = 0.
pub fn dual_diff_squares_to_zero(c: &KComplex, m: i64) -> bool {
    let a = dual_diff(c, m + 1);
    let b = dual_diff(c, m);
    matches!(a.mul(&b), Ok(p) if p.is_zero())
}

/// Kernel-sample a valid K-based quadratic structure on `c`.
pub fn sample_kquadratic(
    rng: &mut rand_chacha::ChaCha8Rng,
    c: &KComplex,
    n: i64,
) -> Result<Option<KQuadraticComplex>, KError> {
    use rand::Rng;
    if !c.ring.is_integers() {
        return Err(KError::Other("integers required for sampling".into()));
    }
    let lo = match c.min_degree() {
        Some(x) => x,
        None => return Ok(None),
    };
    let hi = c.max_degree().unwrap();
    let dmax = c.host.dim();
    let umax = (n - 2 * lo + dmax + 2).max(1);
    // unknown layout: allowed (triangular) entries of each ψ_u^r
    let mut unknowns: Vec<((i64, i64), usize, usize)> = Vec::new();
    let mut index: BTreeMap<((i64, i64), usize, usize), usize> = BTreeMap::new();
    for u in 0..=umax {
        for r in lo..=hi {
            let rows = c.total_rank(r);
            let dm = c.dual_module(n - u - r);
            if rows * dm.total() == 0 {
                continue;
            }
            let gt = c.graded(r);
            for (&tau, &kt) in &gt.ranks {
                for (&sigma, _) in &dm.slots {
                    if !c.variance.allows(&c.host, tau, sigma) {
                        continue;
                    }
                    for i in 0..kt {
                        for j in 0..dm.slot_rank(sigma) {
                            let key = ((u, r), gt.offset(tau) + i, dm.offset(sigma) + j);
                            index.insert(key, unknowns.len());
                            unknowns.push(key);
                        }
                    }
                }
            }
        }
    }
    if unknowns.is_empty() {
        return Ok(None);
    }
    let lookup = |key: (i64, i64), i: usize, j: usize| index.get(&(key, i, j)).copied();
    let mut sys = LinearSystem::new(unknowns.len());
    let to_int = |m: &ExactMatrix| m.to_int().expect("integer complex");
    for u in 0..=umax {
        for r in lo - 1..=hi + 1 {
            let rel_rows = c.total_rank(r);
            let dm_rel = c.dual_module(n - u - 1 - r);
            if rel_rows * dm_rel.total() == 0 {
                continue;
            }
            let mut rows_map = BTreeMap::new();
            for i in 0..rel_rows {
                for j in 0..dm_rel.total() {
                    rows_map.insert((i, j), sys.new_row());
                }
            }
            // term1: d ∘ ψ_u^{r+1}
            let d1 = to_int(&c.diff(r + 1));
            for (&(i, j), &row) in &rows_map {
                for k in 0..d1.cols {
                    if let Some(col) = lookup((u, r + 1), k, j) {
                        sys.add(row, col, d1.at(i, k).clone());
                    }
                }
            }
            // term2: −(−1)^{n−u} ψ_u^r ∘ dual_diff(n−u−r−1)
            let dd = to_int(&dual_diff(c, n - u - r - 1));
            let sgn2 = -crate::exact::sign(n - u);
            for (&(i, j), &row) in &rows_map {
                for k in 0..dd.rows {
                    if let Some(col) = lookup((u, r), i, k) {
                        sys.add(row, col, dd.at(k, j) * crate::exact::big(sgn2));
                    }
                }
            }
            // term3: (−1)^{n−u−1} ψ_{u+1}^r
            let sgn3 = crate::exact::sign(n - u - 1);
            for (&(i, j), &row) in &rows_map {
                if let Some(col) = lookup((u + 1, r), i, j) {
                    sys.add(row, col, crate::exact::big(sgn3));
                }
            }
            // term4: (−1)^n Tψ_{u+1}^r
            let sgn4 = crate::exact::sign(n);
            for (orow, ocol, key, pi, pj, sign) in t_entries_for(c, n, u + 1, r) {
                if let Some(&row) = rows_map.get(&(orow, ocol)) {
                    if let Some(col) = lookup(key, pi, pj) {
                        sys.add(row, col, crate::exact::big(sign * sgn4));
                    }
                }
            }
        }
    }
    let kernel = sys.kernel();
    if kernel.cols == 0 {
        return Ok(None);
    }
    let mut v = IntMatrix::zero(kernel.rows, 1);
    let mut any = false;
    for j in 0..kernel.cols {
        let coeff: i64 = rng.gen_range(-2..=2);
        if coeff == 0 {
            continue;
        }
        any = true;
        for i in 0..kernel.rows {
            let add = kernel.at(i, j) * crate::exact::big(coeff);
            *v.at_mut(i, 0) += add;
        }
    }
    if !any {
        let j = rng.gen_range(0..kernel.cols);
        for i in 0..kernel.rows {
            *v.at_mut(i, 0) += kernel.at(i, j);
        }
    }
    let mut psi: BTreeMap<(i64, i64), ExactMatrix> = BTreeMap::new();
    for (t, &(key, i, j)) in unknowns.iter().enumerate() {
        let val = v.at(t, 0).clone();
        if num_traits::Zero::is_zero(&val) {
            continue;
        }
        let entry = psi.entry(key).or_insert_with(|| {
            ExactMatrix::zero(
                &c.ring,
                c.total_rank(key.1),
                c.dual_module(n - key.0 - key.1).total(),
            )
        });
        *entry.at_mut(i, j) = crate::exact::Scalar::from_int(&c.ring, val);
    }
    let q = KQuadraticComplex::new(c.clone(), n, psi)?;
    debug_assert!(q.is_valid());
    Ok(Some(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::OrderedComplex;
    use std::sync::Arc;

    fn hosts() -> Vec<Arc<OrderedComplex>> {
        vec![
            Arc::new(OrderedComplex::from_simplices(vec![vec![0]])),
            Arc::new(OrderedComplex::from_simplices(vec![vec![0, 1]])),
            Arc::new(OrderedComplex::simplex_boundary(3)),
            Arc::new(OrderedComplex::full_simplex(3)),
        ]
    }

    #[test]
    fn dual_complex_squares_to_zero() {
        for host in hosts() {
            let c = KComplex::simplicial(host).unwrap();
            for m in -2..4i64 {
                assert!(dual_diff_squares_to_zero(&c, m), "fails at m={m}");
            }
        }
    }

    #[test]
    fn t_is_an_involution_on_sampled_structures() {
        let mut rng = crate::forms::gen::rng(171);
        let mut checked = 0;
        for host in hosts() {
            let c = KComplex::simplicial(host).unwrap();
            for n in 0..3i64 {
                let Some(q) = sample_kquadratic(&mut rng, &c, n).unwrap() else {
                    continue;
                };
                // T(Tψ_u) = ψ_u at every level
                for (&(u, _), _) in q.psi.clone().iter() {
                    let mut tq = q.clone();
                    tq.psi.clear();
                    for r in q.complex.degrees().collect::<Vec<_>>() {
                        let t = q.t_dual(u, r);
                        if !t.is_zero() {
                            tq.psi.insert((u, r), t);
                        }
                    }
                    for r in q.complex.degrees().collect::<Vec<_>>() {
                        let tt = tq.t_dual(u, r);
                        let orig = q.block(u, r);
                        assert!(
                            tt.sub(&orig).unwrap().is_zero(),
                            "T² ≠ id at u={u}, r={r}"
                        );
                    }
                }
                checked += 1;
            }
        }
        assert!(checked >= 4);
    }

    #[test]
    fn sampled_structures_satisfy_the_relation() {
        let mut rng = crate::forms::gen::rng(191);
        let mut produced = 0;
        for host in hosts() {
            let c = KComplex::simplicial(host).unwrap();
            for n in 0..4i64 {
                if let Some(q) = sample_kquadratic(&mut rng, &c, n).unwrap() {
                    assert!(q.verify().unwrap().is_empty());
                    produced += 1;
                }
            }
        }
        assert!(produced >= 6, "only {produced} samples");
    }
}