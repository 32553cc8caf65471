//! Sparse integer linear systems with lattice kernel sampling.
//!
//! Used to sample quadratic structures: the structure relations are
//! ℤ-linear in the unknown blocks, so valid structures are exactly the
//! kernel lattice of the assembled system.

use super::snf::IntMatrix;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Debug, Default)]
pub struct LinearSystem {
    n_unknowns: usize,
    rows: Vec<BTreeMap<usize, BigInt>>,
}

impl LinearSystem {
    pub fn new(n_unknowns: usize) -> Self {
        LinearSystem {
            n_unknowns,
            rows: Vec::new(),
        }
    }

    pub fn n_unknowns(&self) -> usize {
        self.n_unknowns
    }

    pub fn new_row(&mut self) -> usize {
        self.rows.push(BTreeMap::new());
        self.rows.len() - 1
    }

    pub fn add(&mut self, row: usize, unknown: usize, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        assert!(unknown < self.n_unknowns);
        let e = self.rows[row].entry(unknown).or_insert_with(BigInt::zero);
        *e += coeff;
        if e.is_zero() {
            self.rows[row].remove(&unknown);
        }
    }

    pub fn to_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zero(self.rows.len(), self.n_unknowns);
        for (i, row) in self.rows.iter().enumerate() {
            for (&j, c) in row {
                *m.at_mut(i, j) = c.clone();
            }
        }
        m
    }

    /// ℤ-basis of the solution lattice of the homogeneous system.
    pub fn kernel(&self) -> IntMatrix {
        if self.rows.is_empty() {
            return IntMatrix::identity(self.n_unknowns);
        }
        self.to_matrix().kernel_basis()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::big;

    #[test]
    fn kernel_of_sum_zero() {
        // x + y = 0 over two unknowns
        let mut sys = LinearSystem::new(2);
        let r = sys.new_row();
        sys.add(r, 0, big(1));
        sys.add(r, 1, big(1));
        let k = sys.kernel();
        assert_eq!(k.cols, 1);
        assert_eq!(k.at(0, 0) + k.at(1, 0), big(0));
    }
}
