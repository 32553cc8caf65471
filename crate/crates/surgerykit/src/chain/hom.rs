//! Hom complexes in operator form.
//!
//! Hom(C,D)_r = ⊕_q Hom(C_q, D_{r+q}) with differential
//! f ↦ d_D f + (−1)^{r+q} f d_C. Elements are kept as sparse component
//! families rather than materialised modules, which keeps noncommutative
//! ground rings uniform.

use super::{ChainComplex, ChainError};
use crate::exact::ExactMatrix;
use std::collections::BTreeMap;

/// Element of Hom(C,D)_degree with components f_q: C_q → D_{q+degree}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomElement {
    pub degree: i64,
    pub components: BTreeMap<i64, ExactMatrix>,
}

impl HomElement {
    pub fn zero(degree: i64) -> Self {
        HomElement {
            degree,
            components: BTreeMap::new(),
        }
    }

    pub fn component(&self, c: &ChainComplex, d: &ChainComplex, q: i64) -> ExactMatrix {
        match self.components.get(&q) {
            Some(m) => m.clone(),
            None => ExactMatrix::zero(&c.ring, d.rank(q + self.degree), c.rank(q)),
        }
    }

    /// The Hom-complex differential of `self`.
    pub fn boundary(&self, c: &ChainComplex, d: &ChainComplex) -> Result<HomElement, ChainError> {
        let r = self.degree;
        let mut components = BTreeMap::new();
        let lo = c.min_degree().unwrap_or(0);
        let hi = c.max_degree().unwrap_or(0);
        for q in lo..=hi + 1 {
            let first = d.diff(q + r).mul(&self.component(c, d, q))?;
            let second = self
                .component(c, d, q - 1)
                .mul(&c.diff(q))?
                .scale_int(crate::exact::sign(r + q));
            let total = first.add(&second)?;
            if !total.is_zero() {
                components.insert(q, total);
            }
        }
        Ok(HomElement {
            degree: r - 1,
            components,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(ExactMatrix::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::ChainComplex;
    use crate::exact::RingSpec;
    use std::collections::BTreeMap;

    fn z() -> RingSpec {
        RingSpec::integers()
    }

    #[test]
    fn identity_on_point_is_a_cycle() {
        let c = ChainComplex::concentrated(&z(), 0, 1);
        let mut comps = BTreeMap::new();
        comps.insert(0, ExactMatrix::from_int_rows(&[vec![1]]));
        let f = HomElement { degree: 0, components: comps };
        assert!(f.boundary(&c, &c).unwrap().is_zero());
    }

    #[test]
    fn chain_maps_are_cycles() {
        // a degree-0 chain map f has d(f) = d f − f d = 0
        let mut ranks = BTreeMap::new();
        ranks.insert(0, 1);
        ranks.insert(1, 1);
        let mut d = BTreeMap::new();
        d.insert(1, ExactMatrix::from_int_rows(&[vec![4]]));
        let c = ChainComplex::new(z(), ranks, d).unwrap();
        let mut comps = BTreeMap::new();
        comps.insert(0, ExactMatrix::from_int_rows(&[vec![3]]));
        comps.insert(1, ExactMatrix::from_int_rows(&[vec![3]]));
        let f = HomElement { degree: 0, components: comps };
        assert!(f.boundary(&c, &c).unwrap().is_zero());
    }

    #[test]
    fn boundary_squares_to_zero() {
        let mut ranks = BTreeMap::new();
        ranks.insert(0, 2);
        ranks.insert(1, 1);
        ranks.insert(2, 2);
        let mut d = BTreeMap::new();
        d.insert(1, ExactMatrix::from_int_rows(&[vec![2], vec![-2]]));
        d.insert(2, ExactMatrix::from_int_rows(&[vec![0, 0]]));
        let c = ChainComplex::new(z(), ranks, d).unwrap();
        for deg in -1..3i64 {
            let mut comps = BTreeMap::new();
            for q in 0..3i64 {
                let rows = c.rank(q + deg);
                let cols = c.rank(q);
                if rows * cols > 0 {
                    comps.insert(
                        q,
                        ExactMatrix::from_fn(&z(), rows, cols, |i, j| {
                            crate::exact::Scalar::from_int(&z(), (i as i64 + 2 * j as i64 + q) % 5 - 2)
                        }),
                    );
                }
            }
            let f = HomElement { degree: deg, components: comps };
            let df = f.boundary(&c, &c).unwrap();
            let ddf = df.boundary(&c, &c).unwrap();
            assert!(ddf.is_zero(), "d² f ≠ 0 at degree {deg}");
        }
    }
}
