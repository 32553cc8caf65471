//! Integral homology and chain contractions via Smith normal form.

use super::{ChainComplex, ChainError, ChainHomotopy};
use crate::exact::{ExactMatrix, IntMatrix};
use num_bigint::BigInt;
use num_traits::One;
use std::collections::BTreeMap;

/// Per-degree free rank and torsion coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HomologySummary {
    pub groups: BTreeMap<i64, (usize, Vec<BigInt>)>,
}

impl HomologySummary {
    pub fn free_rank(&self, r: i64) -> usize {
        self.groups.get(&r).map_or(0, |(f, _)| *f)
    }

    pub fn torsion(&self, r: i64) -> Vec<BigInt> {
        self.groups.get(&r).map_or_else(Vec::new, |(_, t)| t.clone())
    }

    pub fn is_trivial(&self) -> bool {
        self.groups
            .values()
            .all(|(f, t)| *f == 0 && t.is_empty())
    }

    /// First degree carrying a nonzero group, if any.
    pub fn witness(&self) -> Option<i64> {
        self.groups
            .iter()
            .find(|(_, (f, t))| *f > 0 || !t.is_empty())
            .map(|(&r, _)| r)
    }
}

/// Exact homology of an integer chain complex.
pub fn homology_z(c: &ChainComplex) -> Result<HomologySummary, ChainError> {
    if !c.ring.is_integers() {
        return Err(ChainError::UnsupportedRing("integers required"));
    }
    let mut out = HomologySummary::default();
    for r in c.degrees().collect::<Vec<_>>() {
        let d_r = c.diff(r).to_int()?;
        let d_up = c.diff(r + 1).to_int()?;
        let k = d_r.kernel_basis();
        if k.cols == 0 {
            continue;
        }
        // columns of d_{r+1} expressed in kernel coordinates
        let mut cols = Vec::new();
        for j in 0..d_up.cols {
            let col = d_up.column(j);
            let x = k
                .solve(&col)
                .expect("boundary must lie in the kernel lattice");
            cols.push(x);
        }
        let mut x = IntMatrix::zero(k.cols, cols.len());
        for (j, v) in cols.iter().enumerate() {
            for i in 0..k.cols {
                *x.at_mut(i, j) = v.at(i, 0).clone();
            }
        }
        let s = x.smith();
        let free = k.cols - s.rank;
        let torsion: Vec<BigInt> = s
            .diagonal()
            .into_iter()
            .filter(|d| d > &BigInt::one())
            .collect();
        if free > 0 || !torsion.is_empty() {
            out.groups.insert(r, (free, torsion));
        }
    }
    Ok(out)
}

/// `coords` matrix G with G·K = I for a saturated kernel basis K.
fn left_inverse(k: &IntMatrix) -> IntMatrix {
    let s = k.smith();
    debug_assert!(s.diagonal().iter().all(|d| d.is_one()), "kernel basis not saturated");
    // G = V · [I 0] · U
    let mut proj = IntMatrix::zero(k.cols, k.rows);
    for i in 0..k.cols {
        *proj.at_mut(i, i) = BigInt::one();
    }
    s.v.mul(&proj).mul(&s.u)
}

/// Contraction h with d·h + h·d = id, when the complex is ℤ-acyclic.
/// Otherwise returns the homology summary as a witness.
pub fn chain_contraction_z(
    c: &ChainComplex,
) -> Result<Result<ChainHomotopy, HomologySummary>, ChainError> {
    if !c.ring.is_integers() {
        return Err(ChainError::UnsupportedRing("integers required"));
    }
    if !c.verify().is_empty() {
        return Err(ChainError::NotAComplex(c.verify()[0]));
    }
    let h = homology_z(c)?;
    if !h.is_trivial() {
        return Ok(Err(h));
    }
    let degs: Vec<i64> = c.degrees().collect();
    // Per degree: K_r (kernel basis), W_r with d_{r+1}·W_r = K_r, G_r = K_r-coords.
    let mut kmat = BTreeMap::new();
    let mut wmat = BTreeMap::new();
    let mut gmat = BTreeMap::new();
    for &r in &degs {
        let d_r = c.diff(r).to_int()?;
        let k = d_r.kernel_basis();
        let d_up = c.diff(r + 1).to_int()?;
        let mut w = IntMatrix::zero(c.rank(r + 1), k.cols);
        for j in 0..k.cols {
            let sol = d_up
                .solve(&k.column(j))
                .expect("acyclic complex splits integrally");
            for i in 0..w.rows {
                *w.at_mut(i, j) = sol.at(i, 0).clone();
            }
        }
        let g = if k.cols > 0 {
            left_inverse(&k)
        } else {
            IntMatrix::zero(0, c.rank(r))
        };
        kmat.insert(r, k);
        wmat.insert(r, w);
        gmat.insert(r, g);
    }
    let mut comps = BTreeMap::new();
    for &r in &degs {
        let n_r = c.rank(r);
        let d_r = c.diff(r).to_int()?;
        let wg_prev = match (wmat.get(&(r - 1)), gmat.get(&(r - 1))) {
            (Some(w), Some(g)) if w.cols > 0 => w.mul(g),
            _ => IntMatrix::zero(c.rank(r), c.rank(r - 1)),
        };
        // x ↦ x − σ(d x) lands in ker d_r
        let mut proj = IntMatrix::identity(n_r);
        let corr = wg_prev.mul(&d_r);
        proj = proj.add(&corr.neg());
        let h_r = wmat[&r].mul(&gmat[&r]).mul(&proj);
        if !h_r.is_zero() {
            comps.insert(r, ExactMatrix::from_int_matrix(&h_r));
        }
    }
    let h = ChainHomotopy { components: comps };
    // defensive: the identity dh + hd = id is re-checked exactly
    let id = super::ChainMap::identity(c);
    let zero = super::ChainMap::zero();
    h.verify(c, c, &id, &zero)?;
    Ok(Ok(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{mapping_cone, ChainMap};
    use crate::exact::{big, ExactMatrix, RingSpec};

    fn z() -> RingSpec {
        RingSpec::integers()
    }

    /// Simplicial chain complex of the 3-cycle (a triangle's boundary).
    fn circle() -> ChainComplex {
        let mut ranks = BTreeMap::new();
        ranks.insert(0, 3);
        ranks.insert(1, 3);
        let mut d = BTreeMap::new();
        // edges 01, 02, 12 with ∂[ab] = b − a
        d.insert(
            1,
            ExactMatrix::from_int_rows(&[vec![-1, -1, 0], vec![1, 0, -1], vec![0, 1, 1]]),
        );
        ChainComplex::new(z(), ranks, d).unwrap()
    }

    /// Simplicial chain complex of ∂Δ³ (the 2-sphere on 4 vertices).
    pub fn boundary_delta3() -> ChainComplex {
        crate::simplicial::OrderedComplex::simplex_boundary(4)
            .chain_complex()
            .unwrap()
    }

    #[test]
    fn circle_homology() {
        let h = homology_z(&circle()).unwrap();
        assert_eq!(h.free_rank(0), 1);
        assert_eq!(h.free_rank(1), 1);
        assert!(h.torsion(0).is_empty() && h.torsion(1).is_empty());
    }

    #[test]
    fn sphere_homology() {
        let h = homology_z(&boundary_delta3()).unwrap();
        assert_eq!(h.free_rank(0), 1);
        assert_eq!(h.free_rank(1), 0);
        assert_eq!(h.free_rank(2), 1);
    }

    #[test]
    fn contraction_of_identity_cone() {
        let c = circle();
        let id = ChainMap::identity(&c);
        let cone = mapping_cone(&id, &c, &c).unwrap();
        let h = chain_contraction_z(&cone).unwrap().unwrap();
        let idm = ChainMap::identity(&cone);
        h.verify(&cone, &cone, &idm, &ChainMap::zero()).unwrap();
    }

    #[test]
    fn circle_has_no_contraction() {
        let c = circle();
        let w = chain_contraction_z(&c).unwrap().unwrap_err();
        assert_eq!(w.free_rank(1), 1);
    }

    #[test]
    fn torsion_detected() {
        let mut ranks = BTreeMap::new();
        ranks.insert(0, 1);
        ranks.insert(1, 1);
        let mut d = BTreeMap::new();
        d.insert(1, ExactMatrix::from_int_rows(&[vec![6]]));
        let c = ChainComplex::new(z(), ranks, d).unwrap();
        let h = homology_z(&c).unwrap();
        assert_eq!(h.torsion(0), vec![big(6)]);
        let w = chain_contraction_z(&c).unwrap().unwrap_err();
        assert_eq!(w.witness(), Some(0));
    }

    #[test]
    fn random_acyclic_cones_contract() {
        // cone of a random isomorphism-ish map: use upper triangular with ±1 diagonal
        let mut ranks = BTreeMap::new();
        ranks.insert(0, 2);
        ranks.insert(1, 2);
        let mut d = BTreeMap::new();
        d.insert(1, ExactMatrix::from_int_rows(&[vec![0, 0], vec![0, 0]]));
        let c = ChainComplex::new(z(), ranks, d).unwrap();
        let mut comps = BTreeMap::new();
        comps.insert(0, ExactMatrix::from_int_rows(&[vec![1, 7], vec![0, -1]]));
        comps.insert(1, ExactMatrix::from_int_rows(&[vec![-1, 3], vec![0, 1]]));
        let f = ChainMap { degree: 0, components: comps };
        let cone = mapping_cone(&f, &c, &c).unwrap();
        let h = chain_contraction_z(&cone).unwrap().unwrap();
        h.verify(&cone, &cone, &ChainMap::identity(&cone), &ChainMap::zero())
            .unwrap();
    }
}
