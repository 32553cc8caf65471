//! Ordered simplicial complexes and the combinatorics around them.
//!
//! Simplices are strictly increasing vertex tuples; the vertex order is
//! the numeric order on `u32` labels. Incidence numbers follow
//! ∂_{n_σ^τ} τ = σ (position of the deleted vertex).

use crate::chain::{ChainComplex, ChainError};
use crate::exact::{ExactMatrix, RingSpec, Scalar};
use std::collections::{BTreeMap, BTreeSet};

pub mod cover;
pub mod distance;
pub mod dual;
pub mod product;

pub use cover::FiniteGaloisCover;
pub use distance::DistanceData;
pub use dual::{DualComplex, SphereEmbedding};
pub use product::ProductDecomposition;

#[derive(Debug, thiserror::Error, PartialEq, Eq, Clone)]
pub enum SimplicialError {
    #[error("simplex {0:?} is not in the complex")]
    MissingSimplex(Vec<u32>),
    #[error("not a codimension-1 face")]
    NotCodimOneFace,
    #[error("set is not upper closed (witness simplex {0:?} with coface {1:?})")]
    NotUpperClosed(Vec<u32>, Vec<u32>),
    #[error("embedding invalid: {0}")]
    BadEmbedding(String),
    #[error("cover invalid: {0}")]
    BadCover(String),
    #[error("unreachable vertices from the boundary: {0:?}")]
    Unreachable(Vec<u32>),
    #[error("{0}")]
    Other(String),
}

/// An ordered simplicial complex: a face-closed set of sorted vertex tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedComplex {
    simplices: Vec<Vec<u32>>,
    index: BTreeMap<Vec<u32>, usize>,
}

impl OrderedComplex {
    /// Close the given simplices under faces and sort.
    pub fn from_simplices<I: IntoIterator<Item = Vec<u32>>>(simplices: I) -> Self {
        let mut set: BTreeSet<Vec<u32>> = BTreeSet::new();
        let mut stack: Vec<Vec<u32>> = Vec::new();
        for mut s in simplices {
            s.sort_unstable();
            s.dedup();
            if !s.is_empty() {
                stack.push(s);
            }
        }
        while let Some(s) = stack.pop() {
            if set.contains(&s) {
                continue;
            }
            if s.len() > 1 {
                for i in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(i);
                    stack.push(f);
                }
            }
            set.insert(s);
        }
        let mut simplices: Vec<Vec<u32>> = set.into_iter().collect();
        simplices.sort_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
        let index = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        OrderedComplex { simplices, index }
    }

    /// ∂Δ^{n−1} on vertices 0..n (all proper nonempty subsets).
    pub fn simplex_boundary(n: usize) -> Self {
        let all: Vec<u32> = (0..n as u32).collect();
        let mut tops = Vec::new();
        for i in 0..n {
            let mut s = all.clone();
            s.remove(i);
            tops.push(s);
        }
        OrderedComplex::from_simplices(tops)
    }

    /// Full simplex Δ^{n−1} on vertices 0..n.
    pub fn full_simplex(n: usize) -> Self {
        OrderedComplex::from_simplices(vec![(0..n as u32).collect::<Vec<u32>>()])
    }

    /// Cycle graph on n vertices (a triangulated circle for n ≥ 3).
    pub fn cycle(n: usize) -> Self {
        let mut tops = Vec::new();
        for i in 0..n as u32 {
            tops.push(vec![i, (i + 1) % n as u32]);
        }
        OrderedComplex::from_simplices(tops)
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplex(&self, id: usize) -> &[u32] {
        &self.simplices[id]
    }

    pub fn id_of(&self, s: &[u32]) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn ids(&self) -> impl Iterator<Item = usize> {
        0..self.simplices.len()
    }

    /// Geometric dimension |σ| (vertex count minus one).
    pub fn dim_of(&self, id: usize) -> i64 {
        self.simplices[id].len() as i64 - 1
    }

    pub fn dim(&self) -> i64 {
        self.simplices.iter().map(|s| s.len() as i64 - 1).max().unwrap_or(-1)
    }

    pub fn vertices(&self) -> Vec<u32> {
        let mut vs: BTreeSet<u32> = BTreeSet::new();
        for s in &self.simplices {
            vs.extend(s.iter().copied());
        }
        vs.into_iter().collect()
    }

    pub fn simplices_of_dim(&self, d: i64) -> Vec<usize> {
        self.ids().filter(|&i| self.dim_of(i) == d).collect()
    }

    pub fn is_face(&self, sub: usize, sup: usize) -> bool {
        let a = &self.simplices[sub];
        let b = &self.simplices[sup];
        a.iter().all(|v| b.binary_search(v).is_ok())
    }

    /// Codimension-1 faces of `id`, in deletion order.
    pub fn facets(&self, id: usize) -> Vec<usize> {
        let s = &self.simplices[id];
        if s.len() == 1 {
            return Vec::new();
        }
        (0..s.len())
            .map(|i| {
                let mut f = s.clone();
                f.remove(i);
                self.index[&f]
            })
            .collect()
    }

    /// Cofaces of codimension 1: K^*(σ).
    pub fn cofacets(&self, id: usize) -> Vec<usize> {
        let s = &self.simplices[id];
        self.ids()
            .filter(|&t| self.simplices[t].len() == s.len() + 1 && self.is_face(id, t))
            .collect()
    }

    /// All cofaces τ ≥ σ (including σ).
    pub fn cofaces(&self, id: usize) -> Vec<usize> {
        self.ids()
            .filter(|&t| self.is_face(id, t))
            .collect()
    }

    /// All faces τ ≤ σ (including σ).
    pub fn faces(&self, id: usize) -> Vec<usize> {
        self.ids().filter(|&t| self.is_face(t, id)).collect()
    }

    /// The unique n with ∂_n τ = σ.
    pub fn incidence_number(&self, sigma: usize, tau: usize) -> Result<usize, SimplicialError> {
        let s = &self.simplices[sigma];
        let t = &self.simplices[tau];
        if t.len() != s.len() + 1 || !self.is_face(sigma, tau) {
            return Err(SimplicialError::NotCodimOneFace);
        }
        for (i, v) in t.iter().enumerate() {
            if s.binary_search(v).is_err() {
                return Ok(i);
            }
        }
        unreachable!("codim-1 face has exactly one deleted vertex")
    }

    /// Simplicial chain complex over ℤ with the standard boundary signs.
    pub fn chain_complex(&self) -> Result<ChainComplex, ChainError> {
        let ring = RingSpec::integers();
        let top = self.dim();
        let mut ranks = BTreeMap::new();
        let mut pos: BTreeMap<usize, usize> = BTreeMap::new();
        for d in 0..=top.max(0) {
            let list = self.simplices_of_dim(d);
            if !list.is_empty() {
                ranks.insert(d, list.len());
            }
            for (k, &id) in list.iter().enumerate() {
                pos.insert(id, k);
            }
        }
        let mut diffs = BTreeMap::new();
        for r in 1..=top {
            let rows = self.simplices_of_dim(r - 1).len();
            let cols_list = self.simplices_of_dim(r);
            if rows == 0 || cols_list.is_empty() {
                continue;
            }
            let mut m = ExactMatrix::zero(&ring, rows, cols_list.len());
            for (j, &tau) in cols_list.iter().enumerate() {
                for sigma in self.facets(tau) {
                    let n = self.incidence_number(sigma, tau).expect("facet");
                    let i = pos[&sigma];
                    *m.at_mut(i, j) = Scalar::from_int(&ring, crate::exact::sign(n as i64));
                }
            }
            diffs.insert(r, m);
        }
        ChainComplex::new(ring, ranks, diffs)
    }

    /// Whether `s` (a set of simplex ids) is upper closed.
    pub fn is_upper_closed(&self, s: &BTreeSet<usize>) -> Result<(), SimplicialError> {
        for &id in s {
            for t in self.cofaces(id) {
                if !s.contains(&t) {
                    return Err(SimplicialError::NotUpperClosed(
                        self.simplices[id].clone(),
                        self.simplices[t].clone(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// (closure, boundary, interior) of an upper closed set.
    pub fn upper_closed_calculus(
        &self,
        s: &BTreeSet<usize>,
    ) -> Result<(BTreeSet<usize>, BTreeSet<usize>, BTreeSet<usize>), SimplicialError> {
        self.is_upper_closed(s)?;
        let mut closure = s.clone();
        for &id in s {
            closure.extend(self.faces(id));
        }
        let boundary: BTreeSet<usize> = closure.difference(s).copied().collect();
        let boundary_vertices: BTreeSet<u32> = boundary
            .iter()
            .flat_map(|&id| self.simplices[id].iter().copied())
            .collect();
        let interior: BTreeSet<usize> = s
            .iter()
            .copied()
            .filter(|&id| {
                self.simplices[id]
                    .iter()
                    .all(|v| !boundary_vertices.contains(v))
            })
            .collect();
        Ok((closure, boundary, interior))
    }

    /// Vertex-set subcomplex check.
    pub fn is_subcomplex(&self, s: &BTreeSet<usize>) -> bool {
        s.iter().all(|&id| self.faces(id).iter().all(|f| s.contains(f)))
    }

    pub fn simplices_iter(&self) -> impl Iterator<Item = (usize, &Vec<u32>)> {
        self.simplices.iter().enumerate().map(|(i, s)| (i, s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incidence_positions() {
        let k = OrderedComplex::full_simplex(3);
        let tau = k.id_of(&[0, 1, 2]).unwrap();
        let s02 = k.id_of(&[0, 2]).unwrap();
        let s12 = k.id_of(&[1, 2]).unwrap();
        assert_eq!(k.incidence_number(s02, tau).unwrap(), 1);
        assert_eq!(k.incidence_number(s12, tau).unwrap(), 0);
        let s0 = k.id_of(&[0]).unwrap();
        assert!(k.incidence_number(s0, tau).is_err());
    }

    #[test]
    fn boundary_signs_square_to_zero() {
        // consistency of incidence bookkeeping with ∂∂ = 0 on ∂Δ³
        let k = OrderedComplex::simplex_boundary(4);
        let c = k.chain_complex().unwrap();
        assert!(c.verify().is_empty());
    }

    #[test]
    fn upper_closed_calculus_trivia() {
        let k = OrderedComplex::simplex_boundary(3);
        let all: BTreeSet<usize> = k.ids().collect();
        let (closure, boundary, interior) = k.upper_closed_calculus(&all).unwrap();
        assert_eq!(closure, all);
        assert!(boundary.is_empty());
        assert_eq!(interior, all);
        let empty = BTreeSet::new();
        let (c2, b2, i2) = k.upper_closed_calculus(&empty).unwrap();
        assert!(c2.is_empty() && b2.is_empty() && i2.is_empty());
    }

    #[test]
    fn star_of_an_edge_in_triangle_boundary() {
        // K = Δ², S = open star of edge [0,1]: the simplices ⊇ [0,1]
        let k = OrderedComplex::full_simplex(3);
        let e = k.id_of(&[0, 1]).unwrap();
        let s: BTreeSet<usize> = k.cofaces(e).into_iter().collect();
        let (closure, boundary, interior) = k.upper_closed_calculus(&s).unwrap();
        // closure adds vertices 0,1,2 and edges [0,2],[1,2]
        assert_eq!(closure.len(), s.len() + 5);
        assert_eq!(boundary.len(), 5);
        // every simplex of S touches the boundary subcomplex
        assert!(interior.is_empty());
        // complement of an upper closed set is a subcomplex
        let comp: BTreeSet<usize> = k.ids().filter(|i| !s.contains(i)).collect();
        assert!(k.is_subcomplex(&comp));
    }

    #[test]
    fn rejects_non_upper_closed() {
        let k = OrderedComplex::full_simplex(3);
        let v0 = k.id_of(&[0]).unwrap();
        let s: BTreeSet<usize> = [v0].into_iter().collect();
        assert!(k.is_upper_closed(&s).is_err());
    }
}