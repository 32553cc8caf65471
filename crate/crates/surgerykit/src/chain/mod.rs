//! Bounded chain complexes of based free modules.
//!
//! Complexes live on an explicit finite window of degrees in ℤ. The dual
//! complex C^{n−*} has (C^{n−*})_r = (C_{n−r})* and differential
//! (−1)^r · d*, following d_{C^{-*}} = (−1)^r d_C^* shifted to degree n.

use crate::exact::{ExactError, ExactMatrix, IntMatrix, RingSpec};
use std::collections::BTreeMap;

pub mod homology;
pub mod hom;

pub use homology::{chain_contraction_z, homology_z, HomologySummary};
pub use hom::HomElement;

#[derive(Debug, thiserror::Error, PartialEq, Eq, Clone)]
pub enum ChainError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("differential shape at degree {0}: want {1}x{2}, got {3}x{4}")]
    BadDifferential(i64, usize, usize, usize, usize),
    #[error("d² ≠ 0 at degree {0}")]
    NotAComplex(i64),
    #[error("map does not commute with differentials at degree {0}")]
    NotAChainMap(i64),
    #[error("ring mismatch")]
    RingMismatch,
    #[error("unsupported ring: {0}")]
    UnsupportedRing(&'static str),
    #[error("degree mismatch: {0}")]
    Degree(String),
}

/// Bounded based free chain complex. `ranks` holds the nonzero degrees;
/// `d` holds d_r: C_r → C_{r−1} as a rank(r−1) × rank(r) matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    pub ring: RingSpec,
    ranks: BTreeMap<i64, usize>,
    d: BTreeMap<i64, ExactMatrix>,
}

impl ChainComplex {
    /// Build a complex; differentials for degrees where source or target
    /// vanish may be omitted. Does not insist on d² = 0 (use `verify`).
    pub fn new(
        ring: RingSpec,
        ranks: BTreeMap<i64, usize>,
        mut d: BTreeMap<i64, ExactMatrix>,
    ) -> Result<Self, ChainError> {
        let ranks: BTreeMap<i64, usize> = ranks.into_iter().filter(|&(_, n)| n > 0).collect();
        let rank_at = |r: i64| ranks.get(&r).copied().unwrap_or(0);
        d.retain(|&r, m| rank_at(r) > 0 && rank_at(r - 1) > 0 && !m.is_zero());
        for (&r, m) in &d {
            if m.ring != ring {
                return Err(ChainError::RingMismatch);
            }
            if m.rows != rank_at(r - 1) || m.cols != rank_at(r) {
                return Err(ChainError::BadDifferential(
                    r,
                    rank_at(r - 1),
                    rank_at(r),
                    m.rows,
                    m.cols,
                ));
            }
        }
        // absent differentials are zero maps
        Ok(ChainComplex { ring, ranks, d })
    }

    /// A single module in degree `deg`.
    pub fn concentrated(ring: &RingSpec, deg: i64, rank: usize) -> Self {
        let mut ranks = BTreeMap::new();
        if rank > 0 {
            ranks.insert(deg, rank);
        }
        ChainComplex {
            ring: ring.clone(),
            ranks,
            d: BTreeMap::new(),
        }
    }

    pub fn zero(ring: &RingSpec) -> Self {
        ChainComplex {
            ring: ring.clone(),
            ranks: BTreeMap::new(),
            d: BTreeMap::new(),
        }
    }

    pub fn rank(&self, r: i64) -> usize {
        self.ranks.get(&r).copied().unwrap_or(0)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.ranks.keys().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.ranks.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.ranks.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.is_empty()
    }

    /// d_r: C_r → C_{r−1}, a zero matrix when either side vanishes.
    pub fn diff(&self, r: i64) -> ExactMatrix {
        match self.d.get(&r) {
            Some(m) => m.clone(),
            None => ExactMatrix::zero(&self.ring, self.rank(r - 1), self.rank(r)),
        }
    }

    /// Degrees r where d_{r−1} ∘ d_r ≠ 0. Empty means valid.
    pub fn verify(&self) -> Vec<i64> {
        let mut bad = Vec::new();
        for &r in self.ranks.keys() {
            let sq = self.diff(r - 1).mul(&self.diff(r)).expect("shapes checked");
            if !sq.is_zero() {
                bad.push(r);
            }
        }
        bad
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.values().sum()
    }

    /// The dual complex C^{n−*}: (C^{n−*})_r = (C_{n−r})*,
    /// d_r = (−1)^r · (d_{n−r+1})^†.
    pub fn dual(&self, n: i64) -> ChainComplex {
        let mut ranks = BTreeMap::new();
        for (&r, &k) in &self.ranks {
            ranks.insert(n - r, k);
        }
        let mut d = BTreeMap::new();
        for &r in ranks.keys() {
            let src = n - r;
            if self.rank(src) > 0 && self.rank(src + 1) > 0 {
                let m = self.diff(src + 1).involution_dual().scale_int(crate::exact::sign(r));
                d.insert(r, m);
            }
        }
        ChainComplex {
            ring: self.ring.clone(),
            ranks,
            d,
        }
    }

    /// Degreewise signs (−1)^{r(n+1)} identifying (C^{n−*})^{n−*} with C.
    pub fn double_dual_identification(&self, n: i64) -> ChainMap {
        let mut f = BTreeMap::new();
        for (&r, &k) in &self.ranks {
            f.insert(
                r,
                ExactMatrix::identity(&self.ring, k).scale_int(crate::exact::sign(r * (n + 1))),
            );
        }
        ChainMap {
            degree: 0,
            components: f,
        }
    }

    pub fn direct_sum(&self, other: &ChainComplex) -> Result<ChainComplex, ChainError> {
        if self.ring != other.ring {
            return Err(ChainError::RingMismatch);
        }
        let mut ranks = BTreeMap::new();
        let degs: std::collections::BTreeSet<i64> =
            self.ranks.keys().chain(other.ranks.keys()).copied().collect();
        for &r in &degs {
            let k = self.rank(r) + other.rank(r);
            if k > 0 {
                ranks.insert(r, k);
            }
        }
        let mut d = BTreeMap::new();
        for &r in &degs {
            if ranks.get(&r).is_some() && ranks.get(&(r - 1)).is_some() {
                let mut m = ExactMatrix::zero(
                    &self.ring,
                    self.rank(r - 1) + other.rank(r - 1),
                    self.rank(r) + other.rank(r),
                );
                m.set_block(0, 0, &self.diff(r));
                m.set_block(self.rank(r - 1), self.rank(r), &other.diff(r));
                d.insert(r, m);
            }
        }
        Ok(ChainComplex {
            ring: self.ring.clone(),
            ranks,
            d,
        })
    }

    /// Shift up by k: (S^k C)_r = C_{r−k} with differential (−1)^k d.
    pub fn shift(&self, k: i64) -> ChainComplex {
        let ranks = self.ranks.iter().map(|(&r, &n)| (r + k, n)).collect();
        let d = self
            .d
            .iter()
            .map(|(&r, m)| (r + k, m.scale_int(crate::exact::sign(k))))
            .collect();
        ChainComplex {
            ring: self.ring.clone(),
            ranks,
            d,
        }
    }
}

/// A degree-`degree` map of complexes: components f_r: C_r → D_{r+degree}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap {
    pub degree: i64,
    pub components: BTreeMap<i64, ExactMatrix>,
}

impl ChainMap {
    pub fn zero() -> Self {
        ChainMap {
            degree: 0,
            components: BTreeMap::new(),
        }
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let components = c
            .degrees()
            .map(|r| (r, ExactMatrix::identity(&c.ring, c.rank(r))))
            .collect();
        ChainMap {
            degree: 0,
            components,
        }
    }

    pub fn component(&self, c: &ChainComplex, d: &ChainComplex, r: i64) -> ExactMatrix {
        match self.components.get(&r) {
            Some(m) => m.clone(),
            None => ExactMatrix::zero(&c.ring, d.rank(r + self.degree), c.rank(r)),
        }
    }

    /// Chain-map verification: d_D f = (−1)^degree f d_C in every degree.
    pub fn verify(&self, src: &ChainComplex, tgt: &ChainComplex) -> Result<(), ChainError> {
        let k = self.degree;
        let lo = src.min_degree().unwrap_or(0) - 1;
        let hi = src.max_degree().unwrap_or(0) + 1;
        for r in lo..=hi {
            let lhs = tgt.diff(r + k).mul(&self.component(src, tgt, r))?;
            let rhs = self
                .component(src, tgt, r - 1)
                .mul(&src.diff(r))?
                .scale_int(crate::exact::sign(k));
            if !lhs.sub(&rhs)?.is_zero() {
                return Err(ChainError::NotAChainMap(r));
            }
        }
        Ok(())
    }

    pub fn compose(
        &self,
        other: &ChainMap,
        osrc: &ChainComplex,
        omid: &ChainComplex,
        tgt: &ChainComplex,
    ) -> Result<ChainMap, ChainError> {
        // self ∘ other, other: osrc → omid, self: omid → tgt
        let mut components = BTreeMap::new();
        for r in osrc.degrees() {
            let m = self
                .component(omid, tgt, r + other.degree)
                .mul(&other.component(osrc, omid, r))?;
            if !m.is_zero() {
                components.insert(r, m);
            }
        }
        Ok(ChainMap {
            degree: self.degree + other.degree,
            components,
        })
    }
}

/// h_r: C_r → D_{r+1} with d·h + h·d = f − g.
#[derive(Debug, Clone)]
pub struct ChainHomotopy {
    pub components: BTreeMap<i64, ExactMatrix>,
}

impl ChainHomotopy {
    pub fn component(&self, src: &ChainComplex, tgt: &ChainComplex, r: i64) -> ExactMatrix {
        match self.components.get(&r) {
            Some(m) => m.clone(),
            None => ExactMatrix::zero(&src.ring, tgt.rank(r + 1), src.rank(r)),
        }
    }

    /// Check d·h + h·d = f − g exactly.
    pub fn verify(
        &self,
        src: &ChainComplex,
        tgt: &ChainComplex,
        f: &ChainMap,
        g: &ChainMap,
    ) -> Result<(), ChainError> {
        let lo = src.min_degree().unwrap_or(0) - 1;
        let hi = src.max_degree().unwrap_or(0) + 1;
        for r in lo..=hi {
            let dh = tgt.diff(r + 1).mul(&self.component(src, tgt, r))?;
            let hd = self.component(src, tgt, r - 1).mul(&src.diff(r))?;
            let want = f
                .component(src, tgt, r)
                .sub(&g.component(src, tgt, r))?;
            if !dh.add(&hd)?.sub(&want)?.is_zero() {
                return Err(ChainError::NotAChainMap(r));
            }
        }
        Ok(())
    }
}

/// Standard mapping cone of a degree-0 chain map f: C → D:
/// Cone(f)_r = D_r ⊕ C_{r−1}, d = [[d_D, f],[0, −d_C]].
pub fn mapping_cone(
    f: &ChainMap,
    src: &ChainComplex,
    tgt: &ChainComplex,
) -> Result<ChainComplex, ChainError> {
    if f.degree != 0 {
        return Err(ChainError::Degree("mapping cone needs a degree-0 map".into()));
    }
    f.verify(src, tgt)?;
    let ring = tgt.ring.clone();
    let mut ranks = BTreeMap::new();
    let degs: std::collections::BTreeSet<i64> = tgt
        .degrees()
        .chain(src.degrees().map(|r| r + 1))
        .collect();
    for &r in &degs {
        let k = tgt.rank(r) + src.rank(r - 1);
        if k > 0 {
            ranks.insert(r, k);
        }
    }
    let mut d = BTreeMap::new();
    for &r in &degs {
        let rows = tgt.rank(r - 1) + src.rank(r - 2);
        let cols = tgt.rank(r) + src.rank(r - 1);
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = ExactMatrix::zero(&ring, rows, cols);
        m.set_block(0, 0, &tgt.diff(r));
        m.set_block(0, tgt.rank(r), &f.component(src, tgt, r - 1));
        m.set_block(tgt.rank(r - 1), tgt.rank(r), &src.diff(r - 1).neg());
        d.insert(r, m);
    }
    ChainComplex::new(ring, ranks, d)
}

/// Whether the cone of f is acyclic over ℤ (f a quasi-isomorphism).
pub fn cone_acyclic_z(
    f: &ChainMap,
    src: &ChainComplex,
    tgt: &ChainComplex,
) -> Result<bool, ChainError> {
    let cone = mapping_cone(f, src, tgt)?;
    Ok(homology_z(&cone)?.is_trivial())
}

/// Convert all differentials to integer matrices (ring must be ℤ).
pub fn to_int_diffs(c: &ChainComplex) -> Result<BTreeMap<i64, IntMatrix>, ChainError> {
    if !c.ring.is_integers() {
        return Err(ChainError::UnsupportedRing("integers required"));
    }
    let mut out = BTreeMap::new();
    let lo = c.min_degree().unwrap_or(0);
    let hi = c.max_degree().unwrap_or(0) + 1;
    for r in lo..=hi {
        out.insert(r, c.diff(r).to_int()?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RingSpec;

    fn z() -> RingSpec {
        RingSpec::integers()
    }

    /// 0 → ℤ --a--> ℤ → 0 in degrees 1, 0.
    fn two_term(a: i64) -> ChainComplex {
        let mut ranks = BTreeMap::new();
        ranks.insert(0, 1);
        ranks.insert(1, 1);
        let mut d = BTreeMap::new();
        d.insert(1, ExactMatrix::from_int_rows(&[vec![a]]));
        ChainComplex::new(z(), ranks, d).unwrap()
    }

    #[test]
    fn point_complex_is_valid() {
        let c = ChainComplex::concentrated(&z(), 0, 1);
        assert!(c.verify().is_empty());
    }

    #[test]
    fn consecutive_twos_and_threes_fail() {
        let mut ranks = BTreeMap::new();
        ranks.insert(0, 1);
        ranks.insert(1, 1);
        ranks.insert(2, 1);
        let mut d = BTreeMap::new();
        d.insert(1, ExactMatrix::from_int_rows(&[vec![2]]));
        d.insert(2, ExactMatrix::from_int_rows(&[vec![3]]));
        let c = ChainComplex::new(z(), ranks, d).unwrap();
        assert_eq!(c.verify(), vec![2]);
    }

    #[test]
    fn dual_of_point_is_point() {
        let c = ChainComplex::concentrated(&z(), 0, 1);
        let d = c.dual(0);
        assert_eq!(d.rank(0), 1);
        assert!(d.verify().is_empty());
    }

    #[test]
    fn dual_sign_on_two_term() {
        // C: ℤ→ℤ with d=(2) in degrees 1→0, n=1: dual differential is
        // (−1)^1·2 = −2 at position 1.
        let c = two_term(2);
        let cd = c.dual(1);
        assert_eq!(cd.rank(0), 1);
        assert_eq!(cd.rank(1), 1);
        let m = cd.diff(1).to_int().unwrap();
        assert_eq!(m.at(0, 0), &crate::exact::big(-2));
    }

    #[test]
    fn double_dual_identification_is_chain_iso() {
        for n in -1..3i64 {
            let c = two_term(3);
            let dd = c.dual(n).dual(n);
            let phi = c.double_dual_identification(n);
            // phi: dd → c must be a chain map and degreewise ±1.
            phi.verify(&dd, &c).unwrap();
        }
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let c = two_term(5);
        let id = ChainMap::identity(&c);
        assert!(cone_acyclic_z(&id, &c, &c).unwrap());
    }

    #[test]
    fn cone_of_zero_map_has_both_homologies() {
        let c0 = ChainComplex::concentrated(&z(), 0, 1);
        let f = ChainMap {
            degree: 0,
            components: BTreeMap::new(),
        };
        let cone = mapping_cone(&f, &c0, &c0).unwrap();
        let h = homology_z(&cone).unwrap();
        assert_eq!(h.free_rank(0), 1);
        assert_eq!(h.free_rank(1), 1);
    }

    #[test]
    fn cone_of_times_two() {
        let c0 = ChainComplex::concentrated(&z(), 0, 1);
        let mut comps = BTreeMap::new();
        comps.insert(0, ExactMatrix::from_int_rows(&[vec![2]]));
        let f = ChainMap {
            degree: 0,
            components: comps,
        };
        let cone = mapping_cone(&f, &c0, &c0).unwrap();
        let h = homology_z(&cone).unwrap();
        assert_eq!(h.free_rank(0), 0);
        assert_eq!(h.torsion(0), vec![crate::exact::big(2)]);
        assert_eq!(h.free_rank(1), 0);
    }
}