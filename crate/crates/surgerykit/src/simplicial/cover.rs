//! Finite Galois covers given by free simplicial group actions.

use super::{OrderedComplex, SimplicialError};
use crate::exact::GroupTable;
use std::collections::BTreeMap;

/// A Galois covering p: K̃ → K with finite transformation group.
#[derive(Debug, Clone)]
pub struct FiniteGaloisCover {
    pub total: OrderedComplex,
    pub base: OrderedComplex,
    pub group: GroupTable,
    /// vertex permutation per group element (indexed by vertex label)
    action: Vec<BTreeMap<u32, u32>>,
    /// projection on vertex labels
    proj: BTreeMap<u32, u32>,
}

impl FiniteGaloisCover {
    pub fn new(
        total: OrderedComplex,
        base: OrderedComplex,
        group: GroupTable,
        action: Vec<BTreeMap<u32, u32>>,
        proj: BTreeMap<u32, u32>,
    ) -> Result<Self, SimplicialError> {
        let cover = FiniteGaloisCover { total, base, group, action, proj };
        cover.validate()?;
        Ok(cover)
    }

    fn validate(&self) -> Result<(), SimplicialError> {
        let n = self.group.order;
        if self.action.len() != n {
            return Err(SimplicialError::BadCover("one permutation per element".into()));
        }
        // each g maps simplices to simplices; composition respects the table
        for g in 0..n {
            for (_, s) in self.total.simplices_iter() {
                let img = self.apply_simplex(g as u32, s)?;
                if self.total.id_of(&img).is_none() {
                    return Err(SimplicialError::BadCover(format!(
                        "g{} does not act simplicially on {:?}",
                        g, s
                    )));
                }
            }
        }
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                let ab = self.group.mul(a, b);
                for &v in &self.total.vertices() {
                    let lhs = self.apply_vertex(a, self.apply_vertex(b, v)?)?;
                    let rhs = self.apply_vertex(ab, v)?;
                    if lhs != rhs {
                        return Err(SimplicialError::BadCover("action is not a homomorphism".into()));
                    }
                }
            }
        }
        // projection is simplicial onto the base, commutes with the action,
        // is injective on each simplex, and fibers are single orbits
        let mut fibers: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (id, s) in self.total.simplices_iter() {
            let mut img: Vec<u32> = s
                .iter()
                .map(|v| {
                    self.proj
                        .get(v)
                        .copied()
                        .ok_or_else(|| SimplicialError::BadCover(format!("vertex {v} unprojected")))
                })
                .collect::<Result<_, _>>()?;
            img.sort_unstable();
            img.dedup();
            if img.len() != s.len() {
                return Err(SimplicialError::BadCover(format!(
                    "projection collapses simplex {:?}",
                    s
                )));
            }
            let b = self
                .base
                .id_of(&img)
                .ok_or_else(|| SimplicialError::BadCover(format!("{:?} not in base", img)))?;
            fibers.entry(b).or_default().push(id);
        }
        for g in 0..n as u32 {
            for &v in &self.total.vertices() {
                if self.proj[&self.apply_vertex(g, v)?] != self.proj[&v] {
                    return Err(SimplicialError::BadCover("p∘g ≠ p".into()));
                }
            }
        }
        for (b, fiber) in &fibers {
            if fiber.len() != n {
                return Err(SimplicialError::BadCover(format!(
                    "fiber over {:?} has size {} ≠ |G|",
                    self.base.simplex(*b),
                    fiber.len()
                )));
            }
            // freeness + transitivity: g·fiber[0] enumerates the fiber without repeats
            let s0 = self.total.simplex(fiber[0]).to_vec();
            let mut seen = std::collections::BTreeSet::new();
            for g in 0..n as u32 {
                let img = self.apply_simplex(g, &s0)?;
                let id = self.total.id_of(&img).unwrap();
                if !seen.insert(id) {
                    return Err(SimplicialError::BadCover(format!(
                        "action not free over {:?}",
                        self.base.simplex(*b)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn apply_vertex(&self, g: u32, v: u32) -> Result<u32, SimplicialError> {
        self.action[g as usize]
            .get(&v)
            .copied()
            .ok_or_else(|| SimplicialError::BadCover(format!("vertex {v} not in action domain")))
    }

    pub fn apply_simplex(&self, g: u32, s: &[u32]) -> Result<Vec<u32>, SimplicialError> {
        let mut img: Vec<u32> = s
            .iter()
            .map(|&v| self.apply_vertex(g, v))
            .collect::<Result<_, _>>()?;
        img.sort_unstable();
        Ok(img)
    }

    pub fn apply_id(&self, g: u32, id: usize) -> usize {
        let img = self.apply_simplex(g, self.total.simplex(id)).expect("validated");
        self.total.id_of(&img).expect("validated")
    }

    /// p(σ̃) as a base simplex id.
    pub fn project(&self, id: usize) -> usize {
        let mut img: Vec<u32> = self
            .total
            .simplex(id)
            .iter()
            .map(|v| self.proj[v])
            .collect();
        img.sort_unstable();
        self.base.id_of(&img).expect("validated")
    }

    /// The identity cover of a complex.
    pub fn trivial(base: &OrderedComplex) -> FiniteGaloisCover {
        let group = GroupTable::cyclic(1);
        let ident: BTreeMap<u32, u32> = base.vertices().into_iter().map(|v| (v, v)).collect();
        FiniteGaloisCover {
            total: base.clone(),
            base: base.clone(),
            group,
            action: vec![ident.clone()],
            proj: ident,
        }
    }

    /// ℤ/k cover of the n-cycle by the nk-cycle (rotation action).
    pub fn cycle_cover(n: usize, k: usize) -> FiniteGaloisCover {
        assert!(n >= 3 && k >= 1);
        let total = OrderedComplex::cycle(n * k);
        let base = OrderedComplex::cycle(n);
        let group = GroupTable::cyclic(k);
        let nk = (n * k) as u32;
        let mut action = Vec::new();
        for g in 0..k as u32 {
            let map: BTreeMap<u32, u32> =
                (0..nk).map(|v| (v, (v + g * n as u32) % nk)).collect();
            action.push(map);
        }
        let proj: BTreeMap<u32, u32> = (0..nk).map(|v| (v, v % n as u32)).collect();
        FiniteGaloisCover::new(total, base, group, action, proj).expect("rotation cover is Galois")
    }

    /// Disconnected double cover: two disjoint copies swapped by ℤ/2.
    pub fn disjoint_double(base: &OrderedComplex) -> FiniteGaloisCover {
        let verts = base.vertices();
        let off = verts.iter().max().copied().unwrap_or(0) + 1;
        let mut tops: Vec<Vec<u32>> = Vec::new();
        for (_, s) in base.simplices_iter() {
            tops.push(s.clone());
            tops.push(s.iter().map(|&v| v + off).collect());
        }
        let total = OrderedComplex::from_simplices(tops);
        let group = GroupTable::cyclic(2);
        let ident: BTreeMap<u32, u32> = total.vertices().into_iter().map(|v| (v, v)).collect();
        let swap: BTreeMap<u32, u32> = total
            .vertices()
            .into_iter()
            .map(|v| if v < off { (v, v + off) } else { (v, v - off) })
            .collect();
        let proj: BTreeMap<u32, u32> = total
            .vertices()
            .into_iter()
            .map(|v| if v < off { (v, v) } else { (v, v - off) })
            .collect();
        FiniteGaloisCover::new(total, base.clone(), group, vec![ident, swap], proj)
            .expect("disjoint double cover is Galois")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_cover_validates() {
        let k = OrderedComplex::simplex_boundary(3);
        let c = FiniteGaloisCover::trivial(&k);
        assert_eq!(c.total.len(), k.len());
    }

    #[test]
    fn hexagon_over_triangle() {
        let c = FiniteGaloisCover::cycle_cover(3, 2);
        assert_eq!(c.total.len(), 12); // 6 vertices + 6 edges
        assert_eq!(c.base.len(), 6);
        // each base simplex has fiber of size 2
        for id in c.base.ids() {
            let fiber = c
                .total
                .ids()
                .filter(|&t| c.project(t) == id)
                .count();
            assert_eq!(fiber, 2);
        }
    }

    #[test]
    fn fixed_vertex_rejected() {
        // ℤ/2 "action" fixing everything on two disjoint edges
        let base = OrderedComplex::from_simplices(vec![vec![0, 1]]);
        let total = base.clone();
        let ident: BTreeMap<u32, u32> = total.vertices().into_iter().map(|v| (v, v)).collect();
        let res = FiniteGaloisCover::new(
            total,
            base,
            GroupTable::cyclic(2),
            vec![ident.clone(), ident.clone()],
            ident,
        );
        assert!(res.is_err());
    }

    #[test]
    fn disjoint_double_cover() {
        let base = OrderedComplex::full_simplex(3);
        let c = FiniteGaloisCover::disjoint_double(&base);
        assert_eq!(c.total.len(), 2 * base.len());
    }
}
