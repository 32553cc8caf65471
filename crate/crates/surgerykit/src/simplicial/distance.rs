//! Graph distance to a boundary subcomplex and the band decomposition.

use super::{OrderedComplex, SimplicialError};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Vertex distances d_∞ and the induced band decomposition.
#[derive(Debug, Clone)]
pub struct DistanceData {
    pub dist: BTreeMap<u32, u64>,
}

impl DistanceData {
    /// BFS on the 1-skeleton from the vertices of the boundary set.
    pub fn new(k: &OrderedComplex, boundary: &BTreeSet<usize>) -> Result<Self, SimplicialError> {
        let mut dist: BTreeMap<u32, u64> = BTreeMap::new();
        let mut queue = VecDeque::new();
        for &id in boundary {
            for &v in k.simplex(id) {
                if dist.insert(v, 0).is_none() {
                    queue.push_back(v);
                }
            }
        }
        if queue.is_empty() {
            return Err(SimplicialError::Other("empty boundary".into()));
        }
        // adjacency via edges
        let mut adj: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for (_, s) in k.simplices_iter() {
            if s.len() == 2 {
                adj.entry(s[0]).or_default().push(s[1]);
                adj.entry(s[1]).or_default().push(s[0]);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            for &w in adj.get(&v).into_iter().flatten() {
                if !dist.contains_key(&w) {
                    dist.insert(w, d + 1);
                    queue.push_back(w);
                }
            }
        }
        let missing: Vec<u32> = k
            .vertices()
            .into_iter()
            .filter(|v| !dist.contains_key(v))
            .collect();
        if !missing.is_empty() {
            return Err(SimplicialError::Unreachable(missing));
        }
        Ok(DistanceData { dist })
    }

    /// Band of a simplex: the maximum vertex distance.
    pub fn band(&self, k: &OrderedComplex, id: usize) -> u64 {
        k.simplex(id).iter().map(|v| self.dist[v]).max().unwrap()
    }

    /// K^b: the full subcomplex on vertices of distance ≤ b.
    pub fn sublevel(&self, k: &OrderedComplex, b: u64) -> BTreeSet<usize> {
        k.ids()
            .filter(|&id| self.band(k, id) <= b)
            .collect()
    }

    /// K_b = K^b ∖ K^{b−1}: the simplices whose band is exactly b.
    pub fn band_simplices(&self, k: &OrderedComplex, b: u64) -> Vec<usize> {
        k.ids().filter(|&id| self.band(k, id) == b).collect()
    }

    pub fn max_band(&self) -> u64 {
        self.dist.values().copied().max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_distances() {
        let k = OrderedComplex::from_simplices(vec![vec![0, 1]]);
        let b: BTreeSet<usize> = [k.id_of(&[0]).unwrap()].into_iter().collect();
        let d = DistanceData::new(&k, &b).unwrap();
        assert_eq!(d.dist[&0], 0);
        assert_eq!(d.dist[&1], 1);
    }

    #[test]
    fn path_distances() {
        let k = OrderedComplex::from_simplices(vec![vec![0, 1], vec![1, 2], vec![2, 3]]);
        let b: BTreeSet<usize> = [k.id_of(&[0]).unwrap()].into_iter().collect();
        let d = DistanceData::new(&k, &b).unwrap();
        assert_eq!(
            (0..4).map(|v| d.dist[&v]).collect::<Vec<_>>(),
            vec![0, 1, 2, 3]
        );
    }

    #[test]
    fn unreachable_reported() {
        let k = OrderedComplex::from_simplices(vec![vec![0, 1], vec![5]]);
        let b: BTreeSet<usize> = [k.id_of(&[0]).unwrap()].into_iter().collect();
        match DistanceData::new(&k, &b) {
            Err(SimplicialError::Unreachable(vs)) => assert_eq!(vs, vec![5]),
            other => panic!("expected unreachable error, got {other:?}"),
        }
    }

    #[test]
    fn adjacent_simplices_differ_by_at_most_one() {
        // Lemma-style property on a random-ish complex
        let k = OrderedComplex::from_simplices(vec![
            vec![0, 1, 2],
            vec![2, 3],
            vec![3, 4, 5],
            vec![5, 6],
            vec![6, 0],
        ]);
        let b: BTreeSet<usize> = [k.id_of(&[0]).unwrap()].into_iter().collect();
        let d = DistanceData::new(&k, &b).unwrap();
        for (id, s) in k.simplices_iter() {
            for &v in s {
                let dv = d.dist[&v] as i64;
                for t in k.faces(id) {
                    for &w in k.simplex(t) {
                        let dw = d.dist[&w] as i64;
                        assert!((dv - dw).abs() <= s.len() as i64, "sanity");
                        // vertices of a common simplex are pairwise adjacent
                        if s.contains(&w) {
                            assert!((dv - dw).abs() <= 1);
                        }
                    }
                }
            }
        }
        // bands partition
        let mut total = 0;
        for b0 in 0..=d.max_band() {
            total += d.band_simplices(&k, b0).len();
        }
        assert_eq!(total, k.len());
    }
}
