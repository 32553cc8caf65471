//! Quadratic and symmetric structures on chain complexes.
//!
//! A quadratic structure of dimension n is a family ψ = {ψ_s^r} with
//! ψ_s^r: (C^{n−s−*})_r → C_r stored target-indexed (source C_{n−s−r}^*),
//! subject to the four-term relation, evaluated on C_m^*:
//!
//!   d_C ψ_s − (−1)^{r₀} ψ_s d_C^* + (−1)^{(r₀+1)(n+s)} ψ_{s+1}^*
//!     + (−1)^s ψ_{s+1} = 0,     r₀ = n−m−s−1.
//!
//! The T-involution follows the composition of the duality functor with
//! 𝔇, which over a plain ring reduces to (Tψ_s)^r = (−1)^{(n−s−r)r}(ψ_s^{n−s−r})^†.

use crate::chain::{ChainComplex, ChainError, ChainHomotopy, ChainMap};
use crate::exact::ExactMatrix;
use std::collections::BTreeMap;

pub mod gen;
pub mod manifest;
pub mod signsearch;
pub mod tensor;
pub mod thom;

pub use manifest::{sign_manifest, SignManifest};
pub use tensor::{omega_i, w_tensor, IntervalWitness, SymmetricStructure};
pub use thom::{algebraic_thom, boundary_thickening, is_poincare_pair_z, relative_duality_map};

#[derive(Debug, thiserror::Error, PartialEq, Eq, Clone)]
pub enum FormsError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Exact(#[from] crate::exact::ExactError),
    #[error("psi block ({0},{1}) has shape {2}x{3}, want {4}x{5}")]
    BadBlockShape(i64, i64, usize, usize, usize, usize),
    #[error("structure relation fails at (s,r) = {0:?}")]
    RelationFails(Vec<(i64, i64)>),
    #[error("input is not a valid quadratic complex")]
    InvalidInput,
    #[error("{0}")]
    Other(String),
}

/// A level-graded family of matrices: family[(s, r)]: C_{base−s−r}^* → C_r
/// on a fixed complex, where `base` is the Hom-degree of level 0.
pub type StructureBlocks = BTreeMap<(i64, i64), ExactMatrix>;

/// n-dimensional quadratic complex (C, ψ).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticComplex {
    pub c: ChainComplex,
    pub n: i64,
    pub psi: StructureBlocks,
}

/// Retrieve a block of a family with Hom-degree base `l(s) = base − s`,
/// zero when absent.
pub fn family_block(
    c: &ChainComplex,
    base: i64,
    family: &StructureBlocks,
    s: i64,
    r: i64,
) -> ExactMatrix {
    match family.get(&(s, r)) {
        Some(m) => m.clone(),
        None => ExactMatrix::zero(&c.ring, c.rank(r), c.rank(base - s - r)),
    }
}

/// Check every stored block against the expected shape.
pub fn check_family_shapes(
    c: &ChainComplex,
    base: i64,
    family: &StructureBlocks,
) -> Result<(), FormsError> {
    for (&(s, r), m) in family {
        let rows = c.rank(r);
        let cols = c.rank(base - s - r);
        if m.rows != rows || m.cols != cols {
            return Err(FormsError::BadBlockShape(s, r, m.rows, m.cols, rows, cols));
        }
        if m.ring != c.ring {
            return Err(FormsError::Other("ring mismatch in structure".into()));
        }
    }
    Ok(())
}

/// Largest level that can carry a nonzero block for dimension-base `base`.
pub fn max_level(c: &ChainComplex, base: i64) -> i64 {
    match (c.min_degree(), c.max_degree()) {
        (Some(lo), Some(hi)) => (base - 2 * lo).max(base - (lo + (base - hi))).max(0),
        _ => 0,
    }
}

/// T-involution on a level family of Hom-degree l over a plain ring:
/// (Tf)^r = (−1)^{(l−r)r} (f^{l−r})^†.
pub fn t_dual_level(
    c: &ChainComplex,
    l: i64,
    level: &BTreeMap<i64, ExactMatrix>,
) -> BTreeMap<i64, ExactMatrix> {
    let mut out = BTreeMap::new();
    for r in c.degrees() {
        let src = l - r;
        let f = match level.get(&src) {
            Some(m) => m.clone(),
            None => ExactMatrix::zero(&c.ring, c.rank(src), c.rank(r)),
        };
        if f.rows * f.cols == 0 {
            continue;
        }
        let t = f.involution_dual().scale_int(crate::exact::sign((l - r) * r));
        if !t.is_zero() {
            out.insert(r, t);
        }
    }
    out
}

impl QuadraticComplex {
    pub fn new(c: ChainComplex, n: i64, psi: StructureBlocks) -> Result<Self, FormsError> {
        check_family_shapes(&c, n, &psi)?;
        if !c.verify().is_empty() {
            return Err(FormsError::Chain(ChainError::NotAComplex(c.verify()[0])));
        }
        Ok(QuadraticComplex { c, n, psi })
    }

    /// Block ψ_s^r: C_{n−s−r}^* → C_r (zero when absent).
    pub fn block(&self, s: i64, r: i64) -> ExactMatrix {
        family_block(&self.c, self.n, &self.psi, s, r)
    }

    /// Source-indexed component ψ_s⟨m⟩: C_m^* → C_{n−s−m}.
    pub fn block_src(&self, s: i64, m: i64) -> ExactMatrix {
        self.block(s, self.n - s - m)
    }

    /// Level-s family keyed by target degree.
    pub fn level(&self, s: i64) -> BTreeMap<i64, ExactMatrix> {
        self.psi
            .iter()
            .filter(|((ls, _), _)| *ls == s)
            .map(|((_, r), m)| (*r, m.clone()))
            .collect()
    }

    pub fn t_level(&self, s: i64) -> BTreeMap<i64, ExactMatrix> {
        t_dual_level(&self.c, self.n - s, &self.level(s))
    }

    /// The four-term relation at (s, source degree m), as a matrix
    /// C_m^* → C_{n−m−s−1}.
    pub fn relation(&self, s: i64, m: i64) -> Result<ExactMatrix, FormsError> {
        let n = self.n;
        let r0 = n - m - s - 1;
        let term1 = self.c.diff(n - m - s).mul(&self.block_src(s, m))?;
        let dd = self.c.diff(m + 1).involution_dual();
        let term2 = self
            .block_src(s, m + 1)
            .mul(&dd)?
            .scale_int(-crate::exact::sign(r0));
        let term3 = self
            .block_src(s + 1, r0)
            .involution_dual()
            .scale_int(crate::exact::sign((r0 + 1) * (n + s)));
        let term4 = self.block_src(s + 1, m).scale_int(crate::exact::sign(s));
        Ok(term1.add(&term2)?.add(&term3)?.add(&term4)?)
    }

    /// The four-term relation in the appendix convention, target-indexed:
    /// d ψ_s^{r+1} + (−1)^r ψ_s^r d† + (−1)^{n+s+1} ψ_{s+1}^r
    ///   + (−1)^{n+(n−s−1−r)r} (ψ_{s+1}^{n−s−1−r})†,
    /// a matrix C^{n−s−1−r} → C_r. The two conventions are exchanged by
    /// `convert_convention`.
    pub fn relation_appendix(&self, s: i64, r: i64) -> Result<ExactMatrix, FormsError> {
        let n = self.n;
        let m = n - s - 1 - r;
        let term1 = self.c.diff(r + 1).mul(&self.block(s, r + 1))?;
        let dd = self.c.diff(n - s - r).involution_dual();
        let term2 = self.block(s, r).mul(&dd)?.scale_int(crate::exact::sign(r));
        let term3 = self
            .block(s + 1, r)
            .scale_int(crate::exact::sign(n + s + 1));
        let term4 = self
            .block(s + 1, m)
            .involution_dual()
            .scale_int(crate::exact::sign(n + m * r));
        Ok(term1.add(&term2)?.add(&term3)?.add(&term4)?)
    }

    /// Failures of the appendix-convention relation.
    pub fn verify_appendix(&self) -> Result<Vec<(i64, i64)>, FormsError> {
        check_family_shapes(&self.c, self.n, &self.psi)?;
        let Some(lo) = self.c.min_degree() else {
            return Ok(Vec::new());
        };
        let hi = self.c.max_degree().unwrap();
        let mut bad = Vec::new();
        let smax = (self.n - 2 * lo + 1).max(1);
        for s in 0..=smax {
            for r in lo - 1..=hi + 1 {
                if !self.relation_appendix(s, r)?.is_zero() {
                    bad.push((s, r));
                }
            }
        }
        Ok(bad)
    }

    /// All (s, m) with a failing relation; empty means valid.
    pub fn verify(&self) -> Result<Vec<(i64, i64)>, FormsError> {
        check_family_shapes(&self.c, self.n, &self.psi)?;
        let Some(lo) = self.c.min_degree() else {
            return Ok(Vec::new());
        };
        let hi = self.c.max_degree().unwrap();
        let mut bad = Vec::new();
        let smax = (self.n - 2 * lo + 1).max(1);
        for s in 0..=smax {
            for m in lo - 1..=hi + 1 {
                let rel = self.relation(s, m)?;
                if !rel.is_zero() {
                    bad.push((s, m));
                }
            }
        }
        Ok(bad)
    }

    pub fn is_valid(&self) -> bool {
        matches!(self.verify(), Ok(v) if v.is_empty())
    }

    /// The symmetrisation (1+T)ψ₀, twisted by the manifest signs into a
    /// strict degree-0 chain map C^{n−*} → C.
    pub fn symmetrize(&self) -> ChainMap {
        thom::symmetrize_with(self, &manifest::sign_manifest())
    }

    /// Symmetrisation as a verified chain map (errors on invalid input).
    pub fn symmetrize_checked(&self) -> Result<ChainMap, FormsError> {
        if !self.is_valid() {
            return Err(FormsError::InvalidInput);
        }
        let f = self.symmetrize();
        f.verify(&self.c.dual(self.n), &self.c)?;
        Ok(f)
    }

    /// Poincaré over ℤ: the cone of (1+T)ψ₀ is acyclic. Returns either a
    /// contraction of the cone or the homology witness.
    pub fn is_poincare_z(
        &self,
    ) -> Result<Result<ChainHomotopy, crate::chain::HomologySummary>, FormsError> {
        if !self.c.ring.is_integers() {
            return Err(FormsError::Chain(ChainError::UnsupportedRing(
                "integers required; supply homotopy data over group rings",
            )));
        }
        let phi = self.symmetrize_checked()?;
        let cone = crate::chain::mapping_cone(&phi, &self.c.dual(self.n), &self.c)?;
        Ok(crate::chain::chain_contraction_z(&cone)?)
    }

    /// Certificate route for group rings: verify a caller-provided
    /// homotopy inverse of the symmetrisation.
    pub fn verify_poincare_certificate(
        &self,
        inverse: &ChainMap,
        h_src: &ChainHomotopy,
        h_tgt: &ChainHomotopy,
    ) -> Result<(), FormsError> {
        let dual = self.c.dual(self.n);
        let phi = self.symmetrize_checked()?;
        inverse.verify(&self.c, &dual)?;
        let gf = inverse.compose(&phi, &dual, &self.c, &dual)?;
        let fg = phi.compose(inverse, &self.c, &dual, &self.c)?;
        h_src.verify(&dual, &dual, &ChainMap::identity(&dual), &gf)?;
        h_tgt.verify(&self.c, &self.c, &ChainMap::identity(&self.c), &fg)?;
        Ok(())
    }

    pub fn direct_sum(&self, other: &QuadraticComplex) -> Result<QuadraticComplex, FormsError> {
        if self.n != other.n {
            return Err(FormsError::Other("dimension mismatch".into()));
        }
        let c = self.c.direct_sum(&other.c)?;
        let mut psi = BTreeMap::new();
        let keys: std::collections::BTreeSet<(i64, i64)> = self
            .psi
            .keys()
            .chain(other.psi.keys())
            .copied()
            .collect();
        for &(s, r) in &keys {
            let rows = c.rank(r);
            let cols = c.rank(self.n - s - r);
            if rows * cols == 0 {
                continue;
            }
            let mut m = ExactMatrix::zero(&c.ring, rows, cols);
            m.set_block(0, 0, &self.block(s, r));
            m.set_block(self.c.rank(r), self.c.rank(self.n - s - r), &other.block(s, r));
            psi.insert((s, r), m);
        }
        QuadraticComplex::new(c, self.n, psi)
    }

    pub fn negate(&self) -> QuadraticComplex {
        QuadraticComplex {
            c: self.c.clone(),
            n: self.n,
            psi: self.psi.iter().map(|(k, m)| (*k, m.neg())).collect(),
        }
    }

    /// The appendix-convention boundary family (dimension n−1), keyed by
    /// (s, target degree).
    pub fn boundary_family_appendix(&self) -> Result<StructureBlocks, FormsError> {
        let mut out: StructureBlocks = BTreeMap::new();
        let Some(lo) = self.c.min_degree() else {
            return Ok(out);
        };
        let hi = self.c.max_degree().unwrap();
        let smax = (self.n - 2 * lo + 1).max(1);
        for s in 0..=smax {
            for r in lo - 1..=hi + 1 {
                let rel = self.relation_appendix(s, r)?;
                if !rel.is_zero() {
                    out.insert((s, r), rel);
                }
            }
        }
        Ok(out)
    }

    /// Pushforward f_%ψ along a degree-0 chain map f: C → E, with blocks
    /// f ψ_s f†.
    pub fn pushforward(&self, f: &ChainMap, e: &ChainComplex) -> Result<QuadraticComplex, FormsError> {
        let mut psi: StructureBlocks = BTreeMap::new();
        for (&(s, r), blk) in &self.psi {
            let ft = f.component(&self.c, e, r);
            let fs = f.component(&self.c, e, self.n - s - r).involution_dual();
            let m = ft.mul(blk)?.mul(&fs)?;
            if !m.is_zero() {
                psi.insert((s, r), m);
            }
        }
        QuadraticComplex::new(e.clone(), self.n, psi)
    }

    /// The involutive rescaling ψ_s^r ↦ (−1)^{r+n·s} ψ_s^r exchanging the
    /// two four-term sign conventions used by the source material.
    pub fn convert_convention(&self) -> QuadraticComplex {
        QuadraticComplex {
            c: self.c.clone(),
            n: self.n,
            psi: self
                .psi
                .iter()
                .map(|(&(s, r), m)| ((s, r), m.scale_int(crate::exact::sign(r + self.n * s))))
                .collect(),
        }
    }
}

/// (n+1)-dimensional quadratic pair (f: C → D, (δψ, ψ)).
#[derive(Debug, Clone)]
pub struct QuadraticPair {
    pub f: ChainMap,
    pub c: ChainComplex,
    pub d: ChainComplex,
    /// dimension of (C, ψ); the pair has dimension n+1
    pub n: i64,
    pub delta_psi: StructureBlocks,
    pub psi: StructureBlocks,
}

impl QuadraticPair {
    pub fn new(
        f: ChainMap,
        c: ChainComplex,
        d: ChainComplex,
        n: i64,
        delta_psi: StructureBlocks,
        psi: StructureBlocks,
    ) -> Result<Self, FormsError> {
        check_family_shapes(&c, n, &psi)?;
        check_family_shapes(&d, n + 1, &delta_psi)?;
        f.verify(&c, &d)?;
        Ok(QuadraticPair { f, c, d, n, delta_psi, psi })
    }

    pub fn delta_block_src(&self, s: i64, m: i64) -> ExactMatrix {
        family_block(&self.d, self.n + 1, &self.delta_psi, s, self.n + 1 - s - m)
    }

    pub fn psi_block_src(&self, s: i64, m: i64) -> ExactMatrix {
        family_block(&self.c, self.n, &self.psi, s, self.n - s - m)
    }

    pub fn source_quadratic(&self) -> QuadraticComplex {
        QuadraticComplex {
            c: self.c.clone(),
            n: self.n,
            psi: self.psi.clone(),
        }
    }

    /// Five-term relation at (s, source degree m), a matrix D_m^* → D_{n−m−s}.
    pub fn relation(&self, s: i64, m: i64) -> Result<ExactMatrix, FormsError> {
        let n = self.n;
        let r1 = n - m - s;
        let term1 = self.d.diff(n + 1 - m - s).mul(&self.delta_block_src(s, m))?;
        let dd = self.d.diff(m + 1).involution_dual();
        let term2 = self
            .delta_block_src(s, m + 1)
            .mul(&dd)?
            .scale_int(-crate::exact::sign(r1));
        let term3 = self
            .delta_block_src(s + 1, r1)
            .involution_dual()
            .scale_int(crate::exact::sign((r1 + 1) * (n + 1 + s)));
        let term4 = self.delta_block_src(s + 1, m).scale_int(crate::exact::sign(s));
        let fm = self.f.component(&self.c, &self.d, m);
        let f_tgt = self.f.component(&self.c, &self.d, n - m - s);
        let term5 = f_tgt.mul(&self.psi_block_src(s, m))?.mul(&fm.involution_dual())?;
        Ok(term1.add(&term2)?.add(&term3)?.add(&term4)?.add(&term5)?)
    }

    /// Failures of the five-term relation plus the source four-term relation.
    pub fn verify(&self) -> Result<Vec<(i64, i64)>, FormsError> {
        let mut bad = self.source_quadratic().verify()?;
        let (lo, hi) = match (self.d.min_degree(), self.d.max_degree()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Ok(bad),
        };
        let smax = (self.n + 1 - 2 * lo + 1).max(1);
        for s in 0..=smax {
            for m in lo - 1..=hi + 1 {
                if !self.relation(s, m)?.is_zero() {
                    bad.push((s, m));
                }
            }
        }
        Ok(bad)
    }

    pub fn is_valid(&self) -> bool {
        matches!(self.verify(), Ok(v) if v.is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{big, RingSpec};

    fn z() -> RingSpec {
        RingSpec::integers()
    }

    fn hyperbolic() -> QuadraticComplex {
        let c = ChainComplex::concentrated(&z(), 0, 2);
        let mut psi = BTreeMap::new();
        psi.insert((0, 0), ExactMatrix::from_int_rows(&[vec![0, 1], vec![0, 0]]));
        QuadraticComplex::new(c, 0, psi).unwrap()
    }

    #[test]
    fn hyperbolic_form_is_valid_and_poincare() {
        let q = hyperbolic();
        assert!(q.verify().unwrap().is_empty());
        let phi = q.symmetrize();
        let m = phi.components[&0].to_int().unwrap();
        assert_eq!(
            m,
            crate::exact::IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]])
        );
        assert!(q.is_poincare_z().unwrap().is_ok());
    }

    #[test]
    fn rank_one_symmetrization_doubles() {
        let c = ChainComplex::concentrated(&z(), 0, 1);
        let mut psi = BTreeMap::new();
        psi.insert((0, 0), ExactMatrix::from_int_rows(&[vec![1]]));
        let q = QuadraticComplex::new(c, 0, psi).unwrap();
        let phi = q.symmetrize();
        assert_eq!(phi.components[&0].to_int().unwrap().at(0, 0), &big(2));
        // not Poincaré: witness ℤ/2
        let w = q.is_poincare_z().unwrap().unwrap_err();
        let t: Vec<_> = w.groups.values().flat_map(|(_, t)| t.clone()).collect();
        assert_eq!(t, vec![big(2)]);
    }

    #[test]
    fn nonsymmetric_top_level_fails_at_s0() {
        // C = ℤ² in degree 0, n = 1: the only slot is ψ₁ (Hom degree 0)
        // and the s = 0 relation reads ψ₁ − ψ₁^† = 0.
        let c = ChainComplex::concentrated(&z(), 0, 2);
        let mut psi = BTreeMap::new();
        psi.insert((1, 0), ExactMatrix::from_int_rows(&[vec![0, 1], vec![0, 0]]));
        let q = QuadraticComplex::new(c, 1, psi).unwrap();
        let bad = q.verify().unwrap();
        assert!(bad.iter().all(|&(s, _)| s == 0));
        assert!(!bad.is_empty());
        // and the symmetric version passes
        let mut psi2 = BTreeMap::new();
        psi2.insert((1, 0), ExactMatrix::from_int_rows(&[vec![2, 1], vec![1, 0]]));
        let q2 = QuadraticComplex::new(
            ChainComplex::concentrated(&z(), 0, 2),
            1,
            psi2,
        )
        .unwrap();
        assert!(q2.verify().unwrap().is_empty());
    }

    #[test]
    fn t_is_an_involution_on_levels() {
        // degree-0 maps between degree-0 complexes: Tf = f^†
        let c = ChainComplex::concentrated(&z(), 0, 2);
        let mut level = BTreeMap::new();
        let f = ExactMatrix::from_int_rows(&[vec![1, 2], vec![3, 4]]);
        level.insert(0, f.clone());
        let t = t_dual_level(&c, 0, &level);
        assert_eq!(t[&0], f.involution_dual());
        let tt = t_dual_level(&c, 0, &t);
        assert_eq!(tt[&0], f);
    }

    #[test]
    fn pair_with_zero_c_reduces_to_complex_relation() {
        // C = 0: the five-term relation is the four-term relation on (D, δψ)
        // shifted to dimension n+1.
        let d = ChainComplex::concentrated(&z(), 0, 2);
        let f = ChainMap::zero();
        let mut dpsi = BTreeMap::new();
        dpsi.insert((1, 0), ExactMatrix::from_int_rows(&[vec![0, 2], vec![2, 5]]));
        let pair = QuadraticPair::new(
            f,
            ChainComplex::zero(&z()),
            d.clone(),
            0,
            dpsi.clone(),
            BTreeMap::new(),
        )
        .unwrap();
        assert!(pair.verify().unwrap().is_empty());
        let as_complex = QuadraticComplex::new(d, 1, dpsi).unwrap();
        assert!(as_complex.verify().unwrap().is_empty());
    }
}