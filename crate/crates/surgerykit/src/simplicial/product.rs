//! Collars L⊗[−1,1] with the staircase triangulation of each half.
//!
//! The staircase (monotone-path) triangulation of σ×[0,1] over an ordered
//! simplex σ = [w₀<…<w_p] has maximal cells {w₀⁰,…,w_i⁰, w_i¹,…,w_p¹}.
//! A set B⁰ ∪ T¹ is a cell iff B∪T is a simplex of L and max B ≤ min T,
//! which makes the bottom face (s∩L)₀ and top face (s∩L)₁ well defined.

use super::{OrderedComplex, SimplicialError};
use std::collections::{BTreeMap, BTreeSet};

/// A host complex containing a collar over a base complex L.
///
/// Vertex labels: level −1 copies come first, then level 0 (the middle
/// copy, "L" itself), then level 1, then any extra K₀ vertices, so each
/// product cell is sorted bottom-before-top.
#[derive(Debug, Clone)]
pub struct ProductDecomposition {
    pub k: OrderedComplex,
    pub base: OrderedComplex,
    pub v_minus: Vec<u32>,
    pub v_mid: Vec<u32>,
    pub v_plus: Vec<u32>,
    /// ids of the subcomplex K₀ in `k`
    pub k0: BTreeSet<usize>,
}

fn staircase_cells(base: &OrderedComplex, lower: &[u32], upper: &[u32]) -> Vec<Vec<u32>> {
    let verts = base.vertices();
    let rank: BTreeMap<u32, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut out = Vec::new();
    for (_, s) in base.simplices_iter() {
        let rs: Vec<usize> = s.iter().map(|v| rank[v]).collect();
        for i in 0..rs.len() {
            let mut cell: Vec<u32> = rs[..=i].iter().map(|&r| lower[r]).collect();
            cell.extend(rs[i..].iter().map(|&r| upper[r]));
            out.push(cell);
        }
    }
    out
}

impl ProductDecomposition {
    /// Just L⊗[0,1]; K₀ is taken to be the top copy L⊗1.
    pub fn interval_product(base: &OrderedComplex) -> ProductDecomposition {
        ProductDecomposition::with_extra(base, &[], false)
    }

    /// K = K₀ ∪_{L⊗{±1}} L⊗[−1,1] where K₀ consists of the two boundary
    /// copies, the given extra simplices (using `ExtraVertex(i)` labels
    /// offset after the collar), and their faces. Extra simplices refer to
    /// collar boundary vertices via `MinusCopy(r)` / `PlusCopy(r)` ranks.
    pub fn collar(base: &OrderedComplex, extra: &[Vec<CollarVertex>]) -> ProductDecomposition {
        ProductDecomposition::with_extra(base, extra, true)
    }

    fn with_extra(
        base: &OrderedComplex,
        extra: &[Vec<CollarVertex>],
        lower_half: bool,
    ) -> ProductDecomposition {
        let m = base.vertices().len() as u32;
        let v_minus: Vec<u32> = if lower_half { (0..m).collect() } else { Vec::new() };
        let off0 = if lower_half { m } else { 0 };
        let v_mid: Vec<u32> = (off0..off0 + m).collect();
        let v_plus: Vec<u32> = (off0 + m..off0 + 2 * m).collect();
        let off_extra = off0 + 2 * m;
        let mut tops: Vec<Vec<u32>> = Vec::new();
        if lower_half {
            tops.extend(staircase_cells(base, &v_minus, &v_mid));
        }
        tops.extend(staircase_cells(base, &v_mid, &v_plus));
        let resolve = |cv: &CollarVertex| -> u32 {
            match *cv {
                CollarVertex::MinusCopy(r) => v_minus[r],
                CollarVertex::PlusCopy(r) => v_plus[r],
                CollarVertex::Extra(i) => off_extra + i,
            }
        };
        let mut k0_tops: Vec<Vec<u32>> = Vec::new();
        for s in extra {
            k0_tops.push(s.iter().map(resolve).collect());
        }
        // K₀ always contains the glued boundary copies of L
        let rank_map: Vec<usize> = (0..m as usize).collect();
        for (_, s) in base.simplices_iter() {
            let verts = base.vertices();
            let rk: Vec<usize> = s
                .iter()
                .map(|v| verts.binary_search(v).unwrap())
                .map(|r| rank_map[r])
                .collect();
            k0_tops.push(rk.iter().map(|&r| v_plus[r]).collect());
            if lower_half {
                k0_tops.push(rk.iter().map(|&r| v_minus[r]).collect());
            }
        }
        tops.extend(k0_tops.iter().cloned());
        let k = OrderedComplex::from_simplices(tops);
        let k0_complex = OrderedComplex::from_simplices(k0_tops);
        let k0: BTreeSet<usize> = k0_complex
            .simplices_iter()
            .map(|(_, s)| k.id_of(s).expect("K₀ is a subcomplex of K"))
            .collect();
        ProductDecomposition {
            k,
            base: base.clone(),
            v_minus,
            v_mid,
            v_plus,
            k0,
        }
    }

    fn base_rank(&self, v: u32) -> usize {
        self.base.vertices().binary_search(&v).expect("base vertex")
    }

    /// The id in `k` of the middle copy of a base simplex.
    pub fn mid_id(&self, base_id: usize) -> usize {
        let img: Vec<u32> = self
            .base
            .simplex(base_id)
            .iter()
            .map(|&v| self.v_mid[self.base_rank(v)])
            .collect();
        self.k.id_of(&img).expect("middle copy lives in K")
    }

    /// L₀ = K₀.
    pub fn l0(&self) -> BTreeSet<usize> {
        self.k0.clone()
    }

    /// L₁ = K₀ ∪ L (the middle copy).
    pub fn l1(&self) -> BTreeSet<usize> {
        let mut s = self.k0.clone();
        for id in self.base.ids() {
            s.insert(self.mid_id(id));
        }
        s
    }

    /// L₂ = K₀ ∪ L⊗[0,1].
    pub fn l2(&self) -> BTreeSet<usize> {
        let mut s = self.l1();
        s.extend(self.upper_collar_open());
        s
    }

    /// The open part L⊗[0,1] ∖ L⊗∂[0,1]: cells with vertices at both
    /// level 0 and level 1.
    pub fn upper_collar_open(&self) -> BTreeSet<usize> {
        let mid: BTreeSet<u32> = self.v_mid.iter().copied().collect();
        let plus: BTreeSet<u32> = self.v_plus.iter().copied().collect();
        self.k
            .ids()
            .filter(|&id| {
                let s = self.k.simplex(id);
                let has_mid = s.iter().any(|v| mid.contains(v));
                let has_plus = s.iter().any(|v| plus.contains(v));
                let only_collar = s.iter().all(|v| mid.contains(v) || plus.contains(v));
                has_mid && has_plus && only_collar
            })
            .collect()
    }

    /// Bottom face (s∩L)₀ of an open-collar cell, as a base simplex id.
    pub fn bottom_face(&self, id: usize) -> Result<usize, SimplicialError> {
        self.level_face(id, &self.v_mid)
    }

    /// Top face (s∩L)₁ of an open-collar cell, as a base simplex id.
    pub fn top_face(&self, id: usize) -> Result<usize, SimplicialError> {
        self.level_face(id, &self.v_plus)
    }

    fn level_face(&self, id: usize, level: &[u32]) -> Result<usize, SimplicialError> {
        let lv: BTreeSet<u32> = level.iter().copied().collect();
        let verts: Vec<u32> = self
            .k
            .simplex(id)
            .iter()
            .copied()
            .filter(|v| lv.contains(v))
            .collect();
        if verts.is_empty() {
            return Err(SimplicialError::Other("cell misses the level".into()));
        }
        let base_verts: Vec<u32> = verts
            .iter()
            .map(|v| {
                let r = level.iter().position(|w| w == v).unwrap();
                self.base.vertices()[r]
            })
            .collect();
        self.base
            .id_of(&base_verts)
            .ok_or_else(|| SimplicialError::MissingSimplex(base_verts.clone()))
    }

    /// A_σ = {s ∈ L₂∖L₁ | s > σ} for a base simplex σ.
    pub fn a_set(&self, base_id: usize) -> Vec<usize> {
        let mid = self.mid_id(base_id);
        let mut out: Vec<usize> = self
            .upper_collar_open()
            .into_iter()
            .filter(|&s| self.k.is_face(mid, s))
            .collect();
        out.sort_unstable();
        out
    }

    /// B_σ = A_σ ∖ ⋃_{τ>σ} A_τ = {s | (s∩L)₀ = σ}.
    pub fn b_set(&self, base_id: usize) -> Vec<usize> {
        self.a_set(base_id)
            .into_iter()
            .filter(|&s| self.bottom_face(s) == Ok(base_id))
            .collect()
    }

    /// Join t₀ * t₁ of faces of the bottom and top copies, as an id in K.
    pub fn join(&self, bottom: &[u32], top: &[u32]) -> Option<usize> {
        let mut verts: Vec<u32> = bottom
            .iter()
            .map(|&v| self.v_mid[self.base_rank(v)])
            .collect();
        verts.extend(top.iter().map(|&v| self.v_plus[self.base_rank(v)]));
        verts.sort_unstable();
        self.k.id_of(&verts)
    }
}

/// Vertex reference for K₀ simplices in `ProductDecomposition::collar`.
#[derive(Debug, Clone, Copy)]
pub enum CollarVertex {
    MinusCopy(usize),
    PlusCopy(usize),
    Extra(u32),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex_product_is_an_edge() {
        let l = OrderedComplex::from_simplices(vec![vec![0]]);
        let p = ProductDecomposition::interval_product(&l);
        let open: Vec<usize> = p.upper_collar_open().into_iter().collect();
        assert_eq!(open.len(), 1);
        assert_eq!(p.k.simplex(open[0]).len(), 2);
        let v = l.id_of(&[0]).unwrap();
        assert_eq!(p.b_set(v), open);
    }

    #[test]
    fn edge_product_staircase() {
        // L = single edge: the open part has 2 triangles, 3 edges (two
        // slanted/vertical plus the diagonal) minus the pure-level ones,
        // and B over a vertex collects the cells whose bottom face is it.
        let l = OrderedComplex::from_simplices(vec![vec![0, 1]]);
        let p = ProductDecomposition::interval_product(&l);
        let open = p.upper_collar_open();
        let triangles = open
            .iter()
            .filter(|&&id| p.k.simplex(id).len() == 3)
            .count();
        assert_eq!(triangles, 2);
        let v0 = l.id_of(&[0]).unwrap();
        for &s in &p.b_set(v0) {
            assert_eq!(p.bottom_face(s).unwrap(), v0);
        }
        let e = l.id_of(&[0, 1]).unwrap();
        // B over the edge: bottom face is the whole edge
        assert!(p.b_set(e).iter().all(|&s| p.bottom_face(s).unwrap() == e));
    }

    #[test]
    fn b_sets_partition_open_collar() {
        for base in [
            OrderedComplex::from_simplices(vec![vec![0, 1], vec![1, 2]]),
            OrderedComplex::cycle(4),
            OrderedComplex::full_simplex(3),
        ] {
            let p = ProductDecomposition::interval_product(&base);
            let open = p.upper_collar_open();
            let mut seen: BTreeSet<usize> = BTreeSet::new();
            for sigma in base.ids() {
                for s in p.b_set(sigma) {
                    assert!(seen.insert(s), "B-sets overlap");
                }
            }
            assert_eq!(seen, open, "B-sets must cover the open collar");
        }
    }

    #[test]
    fn a_set_membership_via_bottom_face() {
        let base = OrderedComplex::cycle(3);
        let p = ProductDecomposition::interval_product(&base);
        for sigma in base.ids() {
            for s in p.a_set(sigma) {
                let b = p.bottom_face(s).unwrap();
                assert!(base.is_face(sigma, b));
            }
        }
    }

    #[test]
    fn collar_contains_both_halves_and_k0() {
        let base = OrderedComplex::from_simplices(vec![vec![0, 1]]);
        let p = ProductDecomposition::collar(&base, &[]);
        assert!(!p.v_minus.is_empty());
        // K₀ holds both boundary copies of the edge
        assert!(p.k0.len() >= 6);
        let l1 = p.l1();
        let l2 = p.l2();
        assert!(l1.is_subset(&l2));
        assert!(p.k.is_subcomplex(&l1));
        assert!(p.k.is_subcomplex(&l2));
    }

    #[test]
    fn top_vertex_comes_after_sigma() {
        // order property used for n_σ^τ = |σ|+1 in the collar
        let base = OrderedComplex::full_simplex(3);
        let p = ProductDecomposition::interval_product(&base);
        for sigma in base.ids() {
            let mid = p.mid_id(sigma);
            for tau in p.k.cofacets(mid) {
                if p.upper_collar_open().contains(&tau) {
                    let n = p.k.incidence_number(mid, tau).unwrap();
                    assert_eq!(n, p.k.simplex(mid).len());
                }
            }
        }
    }
}
