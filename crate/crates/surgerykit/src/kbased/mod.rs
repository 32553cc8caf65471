//! Complexes graded by the simplices of an ordered complex, with the
//! chain duality (T, 𝔇).
//!
//! Objects are simplex-graded based free modules; morphisms are
//! triangular with respect to the face order (covariant: f(τ,σ) = 0
//! unless σ ≤ τ; contravariant: unless σ ≥ τ). Everything is held in
//! flattened matrix form with block extraction against the per-simplex
//! offsets, so the displayed identities become exact matrix identities.
//!
//! The dual machinery follows the displayed block formulas: for a
//! covariant object, TM_r(σ) = ([M][σ])^* at r = −|σ| with incidence
//! signs (−1)^{n_σ^τ}, 𝔇(M)₀(τ,σ) = (−1)^{|σ|} p_{σ,τ}; mirrored for the
//! contravariant side.

use crate::chain::{ChainComplex, ChainError};
use crate::exact::{ExactMatrix, RingSpec};
use crate::simplicial::OrderedComplex;
use std::collections::BTreeMap;
use std::sync::Arc;

pub mod assembly;
pub mod appendix;
pub mod duality;
pub mod localdual;
pub mod quadratic;

pub use quadratic::KQuadraticComplex;

#[derive(Debug, thiserror::Error, Clone)]
pub enum KError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Exact(#[from] crate::exact::ExactError),
    #[error(transparent)]
    Simplicial(#[from] crate::simplicial::SimplicialError),
    #[error(transparent)]
    Forms(#[from] crate::forms::FormsError),
    #[error("morphism not triangular at block ({0}, {1})")]
    NotTriangular(usize, usize),
    #[error("{0}")]
    Other(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variance {
    Covariant,
    Contravariant,
}

impl Variance {
    /// Whether a block M(σ) → N(τ) is allowed.
    pub fn allows(&self, host: &OrderedComplex, tau: usize, sigma: usize) -> bool {
        match self {
            Variance::Covariant => host.is_face(sigma, tau),
            Variance::Contravariant => host.is_face(tau, sigma),
        }
    }

    /// Simplices κ entering [M][σ]: cofaces for covariant, faces otherwise.
    pub fn bracket(&self, host: &OrderedComplex, sigma: usize) -> Vec<usize> {
        match self {
            Variance::Covariant => host.cofaces(sigma),
            Variance::Contravariant => host.faces(sigma),
        }
    }
}

/// A per-simplex graded module layout: simplex id → rank, with flat
/// offsets in id order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graded {
    pub ranks: BTreeMap<usize, usize>,
}

impl Graded {
    pub fn total(&self) -> usize {
        self.ranks.values().sum()
    }

    pub fn rank(&self, sigma: usize) -> usize {
        self.ranks.get(&sigma).copied().unwrap_or(0)
    }

    pub fn offset(&self, sigma: usize) -> usize {
        self.ranks
            .iter()
            .take_while(|(&s, _)| s < sigma)
            .map(|(_, &k)| k)
            .sum()
    }

    /// Restriction to a simplex subset, with the embedding matrix into self.
    pub fn submodule(&self, keep: &dyn Fn(usize) -> bool) -> Graded {
        Graded {
            ranks: self
                .ranks
                .iter()
                .filter(|(&s, _)| keep(s))
                .map(|(&s, &k)| (s, k))
                .collect(),
        }
    }
}

/// Inclusion matrix of a graded submodule sub ⊆ sup (blockwise identity).
pub fn inclusion_matrix(ring: &RingSpec, sub: &Graded, sup: &Graded) -> ExactMatrix {
    let mut m = ExactMatrix::zero(ring, sup.total(), sub.total());
    for (&s, &k) in &sub.ranks {
        debug_assert!(sup.rank(s) == k, "submodule rank mismatch at {s}");
        let r0 = sup.offset(s);
        let c0 = sub.offset(s);
        for i in 0..k {
            *m.at_mut(r0 + i, c0 + i) = crate::exact::Scalar::from_int(ring, 1);
        }
    }
    m
}

/// Projection matrix sup → sub (transpose pattern of the inclusion).
pub fn projection_matrix(ring: &RingSpec, sup: &Graded, sub: &Graded) -> ExactMatrix {
    inclusion_matrix(ring, sub, sup).involution_dual()
}

/// A complex of K-based objects in flat matrix form.
#[derive(Debug, Clone)]
pub struct KComplex {
    pub host: Arc<OrderedComplex>,
    pub variance: Variance,
    pub ring: RingSpec,
    /// per degree, the simplex-graded layout
    pub modules: BTreeMap<i64, Graded>,
    /// flat differentials d_r: total(r) → total(r−1)
    pub d: BTreeMap<i64, ExactMatrix>,
}

impl KComplex {
    pub fn new(
        host: Arc<OrderedComplex>,
        variance: Variance,
        ring: RingSpec,
        modules: BTreeMap<i64, Graded>,
        d: BTreeMap<i64, ExactMatrix>,
    ) -> Result<Self, KError> {
        let k = KComplex { host, variance, ring, modules, d };
        for (&r, m) in &k.d {
            let rows = k.total_rank(r - 1);
            let cols = k.total_rank(r);
            if m.rows != rows || m.cols != cols {
                return Err(KError::Other(format!(
                    "differential at {r} has shape {}x{}, want {rows}x{cols}",
                    m.rows, m.cols
                )));
            }
            k.check_triangular(r - 1, r, m)?;
        }
        if !k.flatten()?.verify().is_empty() {
            return Err(KError::Other("d² ≠ 0".into()));
        }
        Ok(k)
    }

    pub fn graded(&self, r: i64) -> Graded {
        self.modules.get(&r).cloned().unwrap_or_default()
    }

    pub fn total_rank(&self, r: i64) -> usize {
        self.graded(r).total()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.modules.keys().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.modules.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.modules.keys().next_back().copied()
    }

    pub fn diff(&self, r: i64) -> ExactMatrix {
        match self.d.get(&r) {
            Some(m) => m.clone(),
            None => ExactMatrix::zero(&self.ring, self.total_rank(r - 1), self.total_rank(r)),
        }
    }

    /// The underlying plain chain complex.
    pub fn flatten(&self) -> Result<ChainComplex, KError> {
        let ranks = self
            .modules
            .iter()
            .map(|(&r, g)| (r, g.total()))
            .filter(|&(_, k)| k > 0)
            .collect();
        let d = self
            .d
            .iter()
            .filter(|(_, m)| m.rows * m.cols > 0)
            .map(|(&r, m)| (r, m.clone()))
            .collect();
        Ok(ChainComplex::new(self.ring.clone(), ranks, d)?)
    }

    fn check_triangular(&self, rt: i64, rs: i64, m: &ExactMatrix) -> Result<(), KError> {
        let gt = self.graded(rt);
        let gs = self.graded(rs);
        for (&tau, &kt) in &gt.ranks {
            for (&sigma, &ks) in &gs.ranks {
                if self.variance.allows(&self.host, tau, sigma) {
                    continue;
                }
                let b = m.block(gt.offset(tau), gs.offset(sigma), kt, ks);
                if !b.is_zero() {
                    return Err(KError::NotTriangular(tau, sigma));
                }
            }
        }
        Ok(())
    }

    /// Extract the (τ, σ) block of a flat map graded(rs) → graded(rt).
    pub fn block_of(
        &self,
        m: &ExactMatrix,
        rt: i64,
        rs: i64,
        tau: usize,
        sigma: usize,
    ) -> ExactMatrix {
        let gt = self.graded(rt);
        let gs = self.graded(rs);
        m.block(gt.offset(tau), gs.offset(sigma), gt.rank(tau), gs.rank(sigma))
    }

    /// The tautological K-based structure on the simplicial chain complex:
    /// C_r(σ) = ℤ for |σ| = r with incidence-sign differentials. The
    /// differential maps each simplex to its faces, so this lives on the
    /// contravariant side.
    pub fn simplicial(host: Arc<OrderedComplex>) -> Result<KComplex, KError> {
        let ring = RingSpec::integers();
        let mut modules: BTreeMap<i64, Graded> = BTreeMap::new();
        for id in host.ids() {
            let r = host.dim_of(id);
            modules
                .entry(r)
                .or_default()
                .ranks
                .insert(id, 1);
        }
        let mut d = BTreeMap::new();
        let degs: Vec<i64> = modules.keys().copied().collect();
        for &r in &degs {
            if !modules.contains_key(&(r - 1)) {
                continue;
            }
            let gt = modules[&(r - 1)].clone();
            let gs = modules[&r].clone();
            let mut m = ExactMatrix::zero(&ring, gt.total(), gs.total());
            for (&tau, _) in &gs.ranks {
                for sigma in host.facets(tau) {
                    let n = host.incidence_number(sigma, tau)?;
                    *m.at_mut(gt.offset(sigma), gs.offset(tau)) =
                        crate::exact::Scalar::from_int(&ring, crate::exact::sign(n as i64));
                }
            }
            d.insert(r, m);
        }
        KComplex::new(host, Variance::Contravariant, ring, modules, d)
    }

    /// The dual-cell chain complex of ∂Δ^{l+1}, graded covariantly over it:
    /// C_r(σ) = ℤ·σ* for r = l − |σ|, with the incidence signs of Σ^l.
    pub fn dual_cell_sphere(l: i64) -> Result<KComplex, KError> {
        let host = Arc::new(crate::simplicial::dual::sphere_complex(l));
        let dual = crate::simplicial::DualComplex { l };
        let ring = RingSpec::integers();
        let mut modules: BTreeMap<i64, Graded> = BTreeMap::new();
        for id in host.ids() {
            let r = l - host.dim_of(id);
            modules.entry(r).or_default().ranks.insert(id, 1);
        }
        let mut d = BTreeMap::new();
        let degs: Vec<i64> = modules.keys().copied().collect();
        for &r in &degs {
            if !modules.contains_key(&(r - 1)) {
                continue;
            }
            let gt = modules[&(r - 1)].clone();
            let gs = modules[&r].clone();
            let mut m = ExactMatrix::zero(&ring, gt.total(), gs.total());
            for (&sigma, _) in &gs.ranks {
                // facets of σ* are τ* for cofacets τ of σ
                for tau in host.cofacets(sigma) {
                    if gt.rank(tau) == 0 {
                        continue;
                    }
                    let n = dual.dual_incidence(host.simplex(sigma), host.simplex(tau))?;
                    *m.at_mut(gt.offset(tau), gs.offset(sigma)) =
                        crate::exact::Scalar::from_int(&ring, crate::exact::sign(n as i64));
                }
            }
            d.insert(r, m);
        }
        KComplex::new(host, Variance::Covariant, ring, modules, d)
    }

    /// The covariant complex on ∂Δ^{l+1} supported on the simplices of a
    /// subcomplex K: the dual-cell chains of the sphere restricted to K,
    /// with C_r(σ) = ℤ·σ* at r = l − |σ|. Since K is a subcomplex, the
    /// restriction still squares to zero.
    pub fn covariant_restriction_sphere(
        k: &OrderedComplex,
        l: i64,
    ) -> Result<KComplex, KError> {
        let host = Arc::new(crate::simplicial::dual::sphere_complex(l));
        let dual = crate::simplicial::DualComplex { l };
        let ring = RingSpec::integers();
        let mut modules: BTreeMap<i64, Graded> = BTreeMap::new();
        let mut support = Vec::new();
        for (_, s) in k.simplices_iter() {
            let id = host
                .id_of(s)
                .ok_or_else(|| KError::Other(format!("{:?} not in the sphere", s)))?;
            support.push(id);
            let r = l - host.dim_of(id);
            modules.entry(r).or_default().ranks.insert(id, 1);
        }
        let mut d = BTreeMap::new();
        let degs: Vec<i64> = modules.keys().copied().collect();
        for &r in &degs {
            if !modules.contains_key(&(r - 1)) {
                continue;
            }
            let gt = modules[&(r - 1)].clone();
            let gs = modules[&r].clone();
            let mut m = ExactMatrix::zero(&ring, gt.total(), gs.total());
            for (&sigma, _) in &gs.ranks {
                for tau in host.cofacets(sigma) {
                    if gt.rank(tau) == 0 {
                        continue;
                    }
                    let n = dual.dual_incidence(host.simplex(sigma), host.simplex(tau))?;
                    *m.at_mut(gt.offset(tau), gs.offset(sigma)) =
                        crate::exact::Scalar::from_int(&ring, crate::exact::sign(n as i64));
                }
            }
            d.insert(r, m);
        }
        KComplex::new(host, Variance::Covariant, ring, modules, d)
    }

    /// Fail unless all stored modules have finite support on the host.
    pub fn object_at(&self, r: i64) -> Graded {
        self.graded(r)
    }
}

/// The layout of the dual module C^m = ⊕_σ ([C_{m∓|σ|}][σ])^* and its
/// inner (κ-indexed) structure per slot.
#[derive(Debug, Clone)]
pub struct DualModule {
    /// per simplex σ: the κ-list with ranks, in id order
    pub slots: BTreeMap<usize, Vec<(usize, usize)>>,
}

impl DualModule {
    pub fn slot_rank(&self, sigma: usize) -> usize {
        self.slots
            .get(&sigma)
            .map(|v| v.iter().map(|&(_, k)| k).sum())
            .unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.slots.keys().map(|&s| self.slot_rank(s)).sum()
    }

    pub fn offset(&self, sigma: usize) -> usize {
        self.slots
            .iter()
            .take_while(|(&s, _)| s < sigma)
            .map(|(_, v)| v.iter().map(|&(_, k)| k).sum::<usize>())
            .sum()
    }

    /// Offset of the κ-indexed inner piece within the σ slot.
    pub fn inner_offset(&self, sigma: usize, kappa: usize) -> Option<usize> {
        let v = self.slots.get(&sigma)?;
        let mut off = 0;
        for &(k, rank) in v {
            if k == kappa {
                return Some(off);
            }
            off += rank;
        }
        None
    }

    pub fn graded(&self) -> Graded {
        Graded {
            ranks: self
                .slots
                .keys()
                .map(|&s| (s, self.slot_rank(s)))
                .filter(|&(_, k)| k > 0)
                .collect(),
        }
    }
}

impl KComplex {
    /// The dual module layout at superscript m: slot σ is
    /// ([C_{m−|σ|}][σ])^* (covariant) or ([C_{m+|σ|}][σ])^* (contravariant).
    pub fn dual_module(&self, m: i64) -> DualModule {
        let mut slots = BTreeMap::new();
        for sigma in self.host.ids() {
            let dim = self.host.dim_of(sigma) + 1; // |σ| in vertex count − 1… use |σ| = dim
            let d_sigma = dim - 1;
            let inner_deg = match self.variance {
                Variance::Covariant => m - d_sigma,
                Variance::Contravariant => m + d_sigma,
            };
            let g = self.graded(inner_deg);
            let mut v = Vec::new();
            for kappa in self.variance.bracket(&self.host, sigma) {
                let k = g.rank(kappa);
                if k > 0 {
                    v.push((kappa, k));
                }
            }
            if !v.is_empty() {
                slots.insert(sigma, v);
            }
        }
        DualModule { slots }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tautological_chain_complex_is_triangular_and_squares_to_zero() {
        let host = Arc::new(OrderedComplex::simplex_boundary(4));
        let k = KComplex::simplicial(host).unwrap();
        let flat = k.flatten().unwrap();
        assert!(flat.verify().is_empty());
        let h = crate::chain::homology_z(&flat).unwrap();
        assert_eq!(h.free_rank(0), 1);
        assert_eq!(h.free_rank(2), 1);
    }

    #[test]
    fn dual_module_of_point() {
        let host = Arc::new(OrderedComplex::from_simplices(vec![vec![0]]));
        let k = KComplex::simplicial(host).unwrap();
        let dm = k.dual_module(0);
        assert_eq!(dm.total(), 1);
    }
}