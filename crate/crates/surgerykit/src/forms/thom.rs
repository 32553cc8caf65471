//! Algebraic Thom construction, boundary thickening and pair duality.
//!
//! The boundary of an n-dimensional quadratic complex is the degree
//! shifted cone of the symmetrisation, ∂C_r = C_{r+1} ⊕ (C^{n−*})_r,
//! carrying the (n−1)-dimensional structure ∂ψ, and sits in the
//! n-dimensional pair (∂C → C^{n−*}, (0, ∂ψ)). The Thom construction
//! inverts the thickening on the mapping cone. All block signs come from
//! the frozen manifest.

use super::manifest::{BlockKind, SignManifest};
use super::{FormsError, QuadraticComplex, QuadraticPair, StructureBlocks};
use crate::chain::{ChainComplex, ChainHomotopy, ChainMap, HomologySummary};
use crate::exact::ExactMatrix;
use std::collections::BTreeMap;

/// Symmetrisation with the manifest twist: a strict degree-0 chain map
/// C^{n−*} → C.
pub fn symmetrize_with(q: &QuadraticComplex, man: &SignManifest) -> ChainMap {
    let t0 = q.t_level(0);
    let mut components = BTreeMap::new();
    for r in q.c.degrees() {
        let a = q
            .block(0, r)
            .scale_int(man.sym_psi.eval(r, q.n, 0));
        let b = match t0.get(&r) {
            Some(m) => m.scale_int(man.sym_tpsi.eval(r, q.n, 0)),
            None => ExactMatrix::zero(&q.c.ring, a.rows, a.cols),
        };
        let total = a.add(&b).expect("shapes agree");
        if !total.is_zero() {
            components.insert(r, total);
        }
    }
    ChainMap { degree: 0, components }
}

/// The boundary complex ∂C together with the block data needed to talk
/// about its two summands.
pub struct BoundaryData {
    pub complex: ChainComplex,
    /// offsets: ∂C_r = C_{r+1} ⊕ (C^{n−*})_r
    pub q_dim: i64,
}

/// Boundary thickening with explicit manifest. Returns the n-dimensional
/// pair (proj: ∂C → C^{n−*}, (0, ∂ψ)).
pub fn boundary_thickening_with(
    q: &QuadraticComplex,
    man: &SignManifest,
) -> Result<QuadraticPair, FormsError> {
    let n = q.n;
    let c = &q.c;
    let dual = c.dual(n);
    let phi = symmetrize_with(q, man);
    phi.verify(&dual, c)?;
    // ∂C
    let mut ranks = BTreeMap::new();
    let degs: std::collections::BTreeSet<i64> = c
        .degrees()
        .map(|r| r - 1)
        .chain(dual.degrees())
        .collect();
    for &r in &degs {
        let k = c.rank(r + 1) + dual.rank(r);
        if k > 0 {
            ranks.insert(r, k);
        }
    }
    let mut d = BTreeMap::new();
    for &r in &degs {
        let rows = c.rank(r) + dual.rank(r - 1);
        let cols = c.rank(r + 1) + dual.rank(r);
        if rows * cols == 0 {
            continue;
        }
        let mut m = ExactMatrix::zero(&c.ring, rows, cols);
        m.set_block(0, 0, &c.diff(r + 1));
        m.set_block(
            0,
            c.rank(r + 1),
            &phi.component(&dual, c, r).scale_int(man.boundary_coupling.eval(r, n, 0)),
        );
        m.set_block(c.rank(r), c.rank(r + 1), &dual.diff(r));
        d.insert(r, m);
    }
    let bc = ChainComplex::new(c.ring.clone(), ranks, d)?;
    if !bc.verify().is_empty() {
        return Err(FormsError::Other(
            "boundary complex does not square to zero".into(),
        ));
    }
    // ∂ψ on bc, dimension n−1.
    // source (∂C)^{n−1−s−r} = C_{n−s−r}^* ⊕ C_{s+r+1}; target ∂C_r = C_{r+1} ⊕ C_{n−r}^*.
    let mut psi: StructureBlocks = BTreeMap::new();
    let smax = super::max_level(&bc, n - 1) + 2;
    for r in bc.degrees().collect::<Vec<_>>() {
        for s in 0..=smax {
            let src_deg = n - 1 - s - r;
            let rows = bc.rank(r);
            let cols = bc.rank(src_deg);
            if rows * cols == 0 {
                continue;
            }
            let mut m = ExactMatrix::zero(&c.ring, rows, cols);
            let rows_c = c.rank(r + 1);
            let cols_c = c.rank(n - s - r);
            if s == 0 {
                // at most one identity block
                if let Some(rule) = man.boundary_psi0_upper {
                    let id_upper = ExactMatrix::identity(&c.ring, c.rank(r + 1))
                        .scale_int(rule.eval(r, n, 0));
                    // block (2 → 1): C_{r+1} part of the source to C_{r+1}
                    m.set_block(0, cols_c, &id_upper);
                }
                if let Some(rule) = man.boundary_psi0_lower {
                    let id_lower = ExactMatrix::identity(&c.ring, c.rank(n - r))
                        .scale_int(rule.eval(r, n, 0));
                    // block (1 → 2): C_{n−r}^* to C_{n−r}^*
                    m.set_block(rows_c, 0, &id_lower);
                }
            } else {
                let (kind, rule) = man.boundary_psi_s;
                let level = s - 1;
                let block = match kind {
                    BlockKind::Zero => None,
                    BlockKind::Psi => Some(q.block(level, r + 1)),
                    BlockKind::TPsi => {
                        let t = q.t_level(level);
                        Some(match t.get(&(r + 1)) {
                            Some(x) => x.clone(),
                            None => ExactMatrix::zero(&c.ring, c.rank(r + 1), c.rank(n - s - r)),
                        })
                    }
                };
                if let Some(b) = block {
                    if b.rows * b.cols > 0 {
                        m.set_block(0, 0, &b.scale_int(rule.eval(r, n, s)));
                    }
                }
            }
            if !m.is_zero() {
                psi.insert((s, r), m);
            }
        }
    }
    // projection onto the second summand is a chain map ∂C → C^{n−*}
    let mut comps = BTreeMap::new();
    for r in bc.degrees() {
        let rows = dual.rank(r);
        let cols = bc.rank(r);
        if rows * cols == 0 {
            continue;
        }
        let mut p = ExactMatrix::zero(&c.ring, rows, cols);
        for i in 0..rows {
            *p.at_mut(i, c.rank(r + 1) + i) = crate::exact::Scalar::from_int(&c.ring, 1);
        }
        comps.insert(r, p);
    }
    let f = ChainMap { degree: 0, components: comps };
    QuadraticPair::new(f, bc, dual, n - 1, BTreeMap::new(), psi)
}

pub fn boundary_thickening(q: &QuadraticComplex) -> Result<QuadraticPair, FormsError> {
    boundary_thickening_with(q, &super::manifest::sign_manifest())
}

/// Algebraic Thom construction with explicit manifest: the quadratic
/// complex (Cone(f), δψ/ψ) of dimension n+1.
pub fn algebraic_thom_with(
    pair: &QuadraticPair,
    man: &SignManifest,
) -> Result<QuadraticComplex, FormsError> {
    let n = pair.n;
    let cone = crate::chain::mapping_cone(&pair.f, &pair.c, &pair.d)?;
    let mut psi: StructureBlocks = BTreeMap::new();
    let t_levels: BTreeMap<i64, BTreeMap<i64, ExactMatrix>> = {
        let src = pair.source_quadratic();
        let mut m = BTreeMap::new();
        let max_s = super::max_level(&pair.c, n) + 2;
        for s in 0..=max_s {
            m.insert(s, src.t_level(s));
        }
        m
    };
    let pick = |kind: BlockKind, s: i64, r: i64, rows: usize, cols: usize| -> ExactMatrix {
        match kind {
            BlockKind::Zero => ExactMatrix::zero(&pair.d.ring, rows, cols),
            BlockKind::Psi => {
                let m = super::family_block(&pair.c, n, &pair.psi, s, r);
                if m.rows == rows && m.cols == cols {
                    m
                } else {
                    ExactMatrix::zero(&pair.d.ring, rows, cols)
                }
            }
            BlockKind::TPsi => match t_levels.get(&s).and_then(|lv| lv.get(&r)) {
                Some(m) if m.rows == rows && m.cols == cols => m.clone(),
                _ => ExactMatrix::zero(&pair.d.ring, rows, cols),
            },
        }
    };
    for r in cone.degrees().collect::<Vec<_>>() {
        let mut s = 0;
        loop {
            let src_deg = n + 1 - s - r;
            let rows = cone.rank(r);
            let cols = cone.rank(src_deg);
            if rows * cols > 0 {
                // source = D_{n+1−s−r}^* ⊕ C_{n−s−r}^*, target = D_r ⊕ C_{r−1}
                let mut m = ExactMatrix::zero(&pair.d.ring, rows, cols);
                let d_rows = pair.d.rank(r);
                let d_cols = pair.d.rank(n + 1 - s - r);
                m.set_block(0, 0, &super::family_block(&pair.d, n + 1, &pair.delta_psi, s, r));
                // upper-right: C_{n−s−r}^* → D_r via f ∘ (ψ-piece)^r
                {
                    let (kind, rule) = man.thom_upper_right;
                    let piece = pick(kind, s, r, pair.c.rank(r), pair.c.rank(n - s - r));
                    if piece.rows * piece.cols > 0 {
                        let fr = pair.f.component(&pair.c, &pair.d, r);
                        let b = fr.mul(&piece)?.scale_int(rule.eval(r, n, s));
                        m.set_block(0, d_cols, &b);
                    }
                }
                // lower-left: D_{n+1−s−r}^* → C_{r−1} via (ψ-piece)^{r−1} ∘ f†
                {
                    let (kind, rule) = man.thom_lower_left;
                    let piece = pick(kind, s, r - 1, pair.c.rank(r - 1), pair.c.rank(n + 1 - s - r));
                    if piece.rows * piece.cols > 0 {
                        let fd = pair
                            .f
                            .component(&pair.c, &pair.d, n + 1 - s - r)
                            .involution_dual();
                        let b = piece.mul(&fd)?.scale_int(rule.eval(r, n, s));
                        m.set_block(d_rows, 0, &b);
                    }
                }
                // lower-right: C_{n−s−r}^* → C_{r−1} at level s+1
                {
                    let (kind, rule) = man.thom_lower_right;
                    let piece = pick(kind, s + 1, r - 1, pair.c.rank(r - 1), pair.c.rank(n - s - r));
                    if piece.rows * piece.cols > 0 {
                        m.set_block(d_rows, d_cols, &piece.scale_int(rule.eval(r, n, s)));
                    }
                }
                if !m.is_zero() {
                    psi.insert((s, r), m);
                }
            }
            s += 1;
            if s > super::max_level(&cone, n + 1) + 2 {
                break;
            }
        }
    }
    QuadraticComplex::new(cone, n + 1, psi)
}

pub fn algebraic_thom(pair: &QuadraticPair) -> Result<QuadraticComplex, FormsError> {
    algebraic_thom_with(pair, &super::manifest::sign_manifest())
}

/// The relative duality map Γ: D^{n+1−*} → Cone(f) of a pair, a strict
/// chain map when the pair relations hold.
pub fn relative_duality_map_with(
    pair: &QuadraticPair,
    man: &SignManifest,
) -> Result<(ChainMap, ChainComplex, ChainComplex), FormsError> {
    let n = pair.n;
    let cone = crate::chain::mapping_cone(&pair.f, &pair.c, &pair.d)?;
    let dual = pair.d.dual(n + 1);
    // Γ1 = symmetrised δψ₀ at dimension n+1; Γ2 = γ·φ_{r−1}∘f†
    let delta_q = QuadraticComplex {
        c: pair.d.clone(),
        n: n + 1,
        psi: pair.delta_psi.clone(),
    };
    let t0 = delta_q.t_level(0);
    let phi_c = symmetrize_with(&pair.source_quadratic(), man);
    let mut comps = BTreeMap::new();
    for r in cone.degrees().collect::<Vec<_>>() {
        let rows = cone.rank(r);
        let cols = dual.rank(r);
        if rows * cols == 0 {
            continue;
        }
        let mut m = ExactMatrix::zero(&pair.d.ring, rows, cols);
        let a = delta_q
            .block(0, r)
            .scale_int(man.sym_psi.eval(r, n + 1, 0));
        let b = match t0.get(&r) {
            Some(x) => x.scale_int(man.sym_tpsi.eval(r, n + 1, 0)),
            None => ExactMatrix::zero(&pair.d.ring, a.rows, a.cols),
        };
        m.set_block(0, 0, &a.add(&b)?);
        // second component: D_{n+1−r}^* --f†--> C_{n+1−r}^* --φ--> C_{r−1}
        let fd = pair
            .f
            .component(&pair.c, &pair.d, n + 1 - r)
            .involution_dual();
        let cd = pair.c.dual(n);
        let phi_r1 = phi_c.component(&cd, &pair.c, r - 1);
        if phi_r1.rows * fd.cols > 0 && phi_r1.cols == fd.rows {
            let g = phi_r1.mul(&fd)?.scale_int(man.pair_gamma.eval(r, n, 0));
            m.set_block(pair.d.rank(r), 0, &g);
        }
        if !m.is_zero() {
            comps.insert(r, m);
        }
    }
    let gamma = ChainMap { degree: 0, components: comps };
    Ok((gamma, dual, cone))
}

pub fn relative_duality_map(
    pair: &QuadraticPair,
) -> Result<(ChainMap, ChainComplex, ChainComplex), FormsError> {
    relative_duality_map_with(pair, &super::manifest::sign_manifest())
}

/// Poincaré test for pairs over ℤ via the cone of the relative duality map.
pub fn is_poincare_pair_z(
    pair: &QuadraticPair,
) -> Result<Result<ChainHomotopy, HomologySummary>, FormsError> {
    let (gamma, dual, cone) = relative_duality_map(pair)?;
    gamma.verify(&dual, &cone)?;
    let gcone = crate::chain::mapping_cone(&gamma, &dual, &cone)?;
    Ok(crate::chain::chain_contraction_z(&gcone)?)
}
