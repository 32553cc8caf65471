//! Order-preserving embeddings into ∂Δ^{l+1} and the dual complex Σ^l.
//!
//! Σ^l has one k-cell σ* per (l−k)-simplex σ of ∂Δ^{l+1}, realised here
//! as the complement subset {0,…,l+1} ∖ σ, with σ* ≤ τ* iff σ ≥ τ.
//! J_σ maps i to the (i+1)-th element of the complement; J_σ^all is the
//! sum of the complement.

use super::{OrderedComplex, SimplicialError};
use std::collections::BTreeSet;

/// An injective, order-preserving simplicial embedding K_c ↪ ∂Δ^{l+1}.
#[derive(Debug, Clone)]
pub struct SphereEmbedding {
    pub complex: OrderedComplex,
    pub l: i64,
    /// image of the i-th vertex of the complex, strictly increasing
    pub vertex_map: Vec<u32>,
}

impl SphereEmbedding {
    pub fn new(
        complex: OrderedComplex,
        l: i64,
        vertex_map: Vec<u32>,
    ) -> Result<Self, SimplicialError> {
        let verts = complex.vertices();
        if verts.len() != vertex_map.len() {
            return Err(SimplicialError::BadEmbedding(
                "vertex map size mismatch".into(),
            ));
        }
        let bound = (l + 2) as u32;
        for w in vertex_map.windows(2) {
            if w[0] >= w[1] {
                return Err(SimplicialError::BadEmbedding(
                    "vertex map must be strictly increasing".into(),
                ));
            }
        }
        if vertex_map.iter().any(|&v| v >= bound) {
            return Err(SimplicialError::BadEmbedding(format!(
                "vertex image exceeds {}",
                bound - 1
            )));
        }
        // no simplex may use the full vertex set of Δ^{l+1}
        if complex.dim() + 1 >= (l + 2) as i64 {
            return Err(SimplicialError::BadEmbedding(
                "complex too large for the sphere".into(),
            ));
        }
        Ok(SphereEmbedding { complex, l, vertex_map })
    }

    /// Minimal natural embedding: i-th vertex ↦ i, with l = dim-forced floor.
    pub fn natural(complex: OrderedComplex, l: i64) -> Result<Self, SimplicialError> {
        let n = complex.vertices().len();
        let map: Vec<u32> = (0..n as u32).collect();
        SphereEmbedding::new(complex, l, map)
    }

    /// Image of a simplex as a subset of {0,…,l+1}.
    pub fn image(&self, id: usize) -> Vec<u32> {
        let verts = self.complex.vertices();
        let pos = |v: u32| verts.binary_search(&v).expect("vertex of the complex");
        self.complex.simplex(id).iter().map(|&v| self.vertex_map[pos(v)]).collect()
    }

    pub fn dual(&self) -> DualComplex {
        DualComplex { l: self.l }
    }
}

/// The dual complex Σ^l. Cells are stored as the complement subsets, so
/// the order on Σ^l is the subset order inherited from ∂Δ^{l+1}.
#[derive(Debug, Clone, Copy)]
pub struct DualComplex {
    pub l: i64,
}

impl DualComplex {
    /// σ* = {0,…,l+1} ∖ σ.
    pub fn dual_cell(&self, sigma: &[u32]) -> Vec<u32> {
        let s: BTreeSet<u32> = sigma.iter().copied().collect();
        (0..(self.l + 2) as u32).filter(|v| !s.contains(v)).collect()
    }

    /// J_σ(i): the (i+1)-th element of the complement.
    pub fn j_map(&self, sigma: &[u32]) -> Vec<u32> {
        self.dual_cell(sigma)
    }

    /// J_σ^all = Σ_i J_σ(i).
    pub fn j_all(&self, sigma: &[u32]) -> i64 {
        self.dual_cell(sigma).iter().map(|&v| v as i64).sum()
    }

    /// n_{τ*}^{σ*} for σ ≤ τ of codimension 1 in ∂Δ^{l+1}: the position in
    /// σ* of the vertex deleted to give τ*.
    pub fn dual_incidence(&self, sigma: &[u32], tau: &[u32]) -> Result<usize, SimplicialError> {
        let ds = self.dual_cell(sigma);
        let dt: BTreeSet<u32> = self.dual_cell(tau).into_iter().collect();
        if dt.len() + 1 != ds.len() {
            return Err(SimplicialError::NotCodimOneFace);
        }
        for (i, v) in ds.iter().enumerate() {
            if !dt.contains(v) {
                return Ok(i);
            }
        }
        Err(SimplicialError::NotCodimOneFace)
    }

    /// underline(V) for a subcomplex V of ∂Δ^{l+1}: the cells σ* with σ ∉ V.
    pub fn underline(&self, ambient: &OrderedComplex, v: &BTreeSet<usize>) -> Vec<Vec<u32>> {
        ambient
            .ids()
            .filter(|id| !v.contains(id))
            .map(|id| self.dual_cell(ambient.simplex(id)))
            .collect()
    }
}

/// ∂Δ^{l+1} as an ordered complex on vertices 0..l+2.
pub fn sphere_complex(l: i64) -> OrderedComplex {
    OrderedComplex::simplex_boundary((l + 2) as usize)
}

/// Exhaustive Lemma-style check of n_σ^τ + n_{τ*}^{σ*} = J_σ^all − J_τ^all
/// over all codimension-1 pairs of ∂Δ^{l+1}. Returns the failures.
pub fn dual_incidence_failures(l: i64) -> Vec<(Vec<u32>, Vec<u32>)> {
    let k = sphere_complex(l);
    let dual = DualComplex { l };
    let mut bad = Vec::new();
    for sigma in k.ids() {
        for tau in k.cofacets(sigma) {
            let s = k.simplex(sigma);
            let t = k.simplex(tau);
            let n1 = k.incidence_number(sigma, tau).unwrap() as i64;
            let n2 = dual.dual_incidence(s, t).unwrap() as i64;
            if n1 + n2 != dual.j_all(s) - dual.j_all(t) {
                bad.push((s.to_vec(), t.to_vec()));
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_cell_of_vertex() {
        // l = 1, σ = {0} → σ* = {1,2}
        let d = DualComplex { l: 1 };
        assert_eq!(d.dual_cell(&[0]), vec![1, 2]);
    }

    #[test]
    fn j_tables() {
        // l = 2, σ = {1} → J_σ = (0,2,3), J_σ^all = 5
        let d = DualComplex { l: 2 };
        assert_eq!(d.j_map(&[1]), vec![0, 2, 3]);
        assert_eq!(d.j_all(&[1]), 5);
    }

    #[test]
    fn dual_incidence_example() {
        // l = 2, σ = {1} < τ = {1,2}: n_σ^τ + n_{τ*}^{σ*} = 5 − 3
        let d = DualComplex { l: 2 };
        let k = sphere_complex(2);
        let s = k.id_of(&[1]).unwrap();
        let t = k.id_of(&[1, 2]).unwrap();
        let n1 = k.incidence_number(s, t).unwrap() as i64;
        let n2 = d.dual_incidence(&[1], &[1, 2]).unwrap() as i64;
        assert_eq!(n1 + n2, d.j_all(&[1]) - d.j_all(&[1, 2]));
        assert_eq!(d.j_all(&[1]) - d.j_all(&[1, 2]), 2);
    }

    #[test]
    fn dual_incidence_exhaustive_small() {
        for l in 1..=3 {
            assert!(dual_incidence_failures(l).is_empty(), "failed at l={l}");
        }
    }

    #[test]
    fn dual_order_reversal() {
        let l = 2;
        let k = sphere_complex(l);
        let d = DualComplex { l };
        for a in k.ids() {
            for b in k.ids() {
                let fwd = k.is_face(a, b);
                let da = d.dual_cell(k.simplex(a));
                let db = d.dual_cell(k.simplex(b));
                let bwd = db.iter().all(|v| da.binary_search(v).is_ok());
                assert_eq!(fwd, bwd);
            }
        }
    }

    #[test]
    fn embedding_validation() {
        let k = OrderedComplex::cycle(3);
        assert!(SphereEmbedding::natural(k.clone(), 2).is_ok());
        assert!(SphereEmbedding::new(k, 2, vec![0, 0, 1]).is_err());
    }
}
