//! Smith normal form over ℤ with full transform bookkeeping.
//!
//! `U·A·V = D` with unimodular U, V and a divisibility chain on the
//! diagonal of D. The inverses of U and V are tracked alongside so that
//! kernels, images and integral solving come out as exact lattice data.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    e: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, e: Vec<BigInt>) -> Self {
        assert_eq!(e.len(), rows * cols);
        IntMatrix { rows, cols, e }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = IntMatrix::zero(r, c);
        for i in 0..r {
            for j in 0..c {
                *m.at_mut(i, j) = BigInt::from(rows[i][j]);
            }
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.e[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.e[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        let prod = a * b;
                        *out.at_mut(i, j) += prod;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let e = self.e.iter().zip(&other.e).map(|(a, b)| a + b).collect();
        IntMatrix::new(self.rows, self.cols, e)
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix::new(self.rows, self.cols, self.e.iter().map(|a| -a).collect())
    }

    pub fn column(&self, j: usize) -> IntMatrix {
        let mut c = IntMatrix::zero(self.rows, 1);
        for i in 0..self.rows {
            *c.at_mut(i, 0) = self.at(i, j).clone();
        }
        c
    }

    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = IntMatrix::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(i, j) = self.at(i, j).clone();
            }
            for j in 0..other.cols {
                *out.at_mut(i, self.cols + j) = other.at(i, j).clone();
            }
        }
        out
    }

    /// Smith normal form with transforms.
    pub fn smith(&self) -> SmithDecomposition {
        SmithDecomposition::compute(self)
    }

    /// Some integral solution of self·x = b, or None.
    pub fn solve(&self, b: &IntMatrix) -> Option<IntMatrix> {
        assert_eq!(b.rows, self.rows);
        assert_eq!(b.cols, 1);
        let s = self.smith();
        let ub = s.u.mul(b);
        let mut y = IntMatrix::zero(self.cols, 1);
        for i in 0..self.rows.max(self.cols) {
            let rhs = if i < self.rows { ub.at(i, 0).clone() } else { BigInt::zero() };
            if i < s.rank {
                let d = s.d.at(i, i);
                let (q, r) = rhs.div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                *y.at_mut(i, 0) = q;
            } else if i < self.rows && !rhs.is_zero() {
                return None;
            }
        }
        Some(s.v.mul(&y))
    }

    /// Columns forming a ℤ-basis of the kernel lattice.
    pub fn kernel_basis(&self) -> IntMatrix {
        let s = self.smith();
        let k = self.cols - s.rank;
        let mut out = IntMatrix::zero(self.cols, k);
        for j in 0..k {
            for i in 0..self.cols {
                *out.at_mut(i, j) = s.v.at(i, s.rank + j).clone();
            }
        }
        out
    }

    /// Columns generating the image lattice.
    pub fn image_basis(&self) -> IntMatrix {
        let s = self.smith();
        let mut out = IntMatrix::zero(self.rows, s.rank);
        for j in 0..s.rank {
            let d = s.d.at(j, j);
            for i in 0..self.rows {
                *out.at_mut(i, j) = s.u_inv.at(i, j) * d;
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.smith().rank
    }
}

/// U·A·V = D with det U, det V ∈ {±1} and d₁ | d₂ | … on the diagonal.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub d: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.at(i, i).clone()).collect()
    }

    fn compute(a: &IntMatrix) -> SmithDecomposition {
        let mut d = a.clone();
        let (m, n) = (d.rows, d.cols);
        let mut u = IntMatrix::identity(m);
        let mut u_inv = IntMatrix::identity(m);
        let mut v = IntMatrix::identity(n);
        let mut v_inv = IntMatrix::identity(n);

        // row i ← row i + c·row k  (and inverse bookkeeping)
        fn row_add(d: &mut IntMatrix, u: &mut IntMatrix, u_inv: &mut IntMatrix, i: usize, k: usize, c: &BigInt) {
            for j in 0..d.cols {
                let t = d.at(k, j) * c;
                *d.at_mut(i, j) += t;
            }
            for j in 0..u.cols {
                let t = u.at(k, j) * c;
                *u.at_mut(i, j) += t;
            }
            // (R)^{-1} subtracts: u_inv ← u_inv · R^{-1}, i.e. col k ← col k − c·col i
            for r in 0..u_inv.rows {
                let t = u_inv.at(r, i) * c;
                *u_inv.at_mut(r, k) -= t;
            }
        }
        fn col_add(d: &mut IntMatrix, v: &mut IntMatrix, v_inv: &mut IntMatrix, j: usize, k: usize, c: &BigInt) {
            for i in 0..d.rows {
                let t = d.at(i, k) * c;
                *d.at_mut(i, j) += t;
            }
            for i in 0..v.rows {
                let t = v.at(i, k) * c;
                *v.at_mut(i, j) += t;
            }
            for s in 0..v_inv.cols {
                let t = v_inv.at(j, s).clone();
                *v_inv.at_mut(k, s) -= &t * c;
            }
        }
        fn row_swap(d: &mut IntMatrix, u: &mut IntMatrix, u_inv: &mut IntMatrix, i: usize, k: usize) {
            if i == k {
                return;
            }
            for j in 0..d.cols {
                let tmp = d.at(i, j).clone();
                *d.at_mut(i, j) = d.at(k, j).clone();
                *d.at_mut(k, j) = tmp;
            }
            for j in 0..u.cols {
                let tmp = u.at(i, j).clone();
                *u.at_mut(i, j) = u.at(k, j).clone();
                *u.at_mut(k, j) = tmp;
            }
            for r in 0..u_inv.rows {
                let tmp = u_inv.at(r, i).clone();
                *u_inv.at_mut(r, i) = u_inv.at(r, k).clone();
                *u_inv.at_mut(r, k) = tmp;
            }
        }
        fn col_swap(d: &mut IntMatrix, v: &mut IntMatrix, v_inv: &mut IntMatrix, j: usize, k: usize) {
            if j == k {
                return;
            }
            for i in 0..d.rows {
                let tmp = d.at(i, j).clone();
                *d.at_mut(i, j) = d.at(i, k).clone();
                *d.at_mut(i, k) = tmp;
            }
            for i in 0..v.rows {
                let tmp = v.at(i, j).clone();
                *v.at_mut(i, j) = v.at(i, k).clone();
                *v.at_mut(i, k) = tmp;
            }
            for s in 0..v_inv.cols {
                let tmp = v_inv.at(j, s).clone();
                *v_inv.at_mut(j, s) = v_inv.at(k, s).clone();
                *v_inv.at_mut(k, s) = tmp;
            }
        }
        fn row_negate(d: &mut IntMatrix, u: &mut IntMatrix, u_inv: &mut IntMatrix, i: usize) {
            for j in 0..d.cols {
                let t = -d.at(i, j).clone();
                *d.at_mut(i, j) = t;
            }
            for j in 0..u.cols {
                let t = -u.at(i, j).clone();
                *u.at_mut(i, j) = t;
            }
            for r in 0..u_inv.rows {
                let t = -u_inv.at(r, i).clone();
                *u_inv.at_mut(r, i) = t;
            }
        }

        let bound = m.min(n);
        let mut t = 0;
        while t < bound {
            // find a pivot of minimal absolute value in the remaining block
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !d.at(i, j).is_zero() {
                        match pivot {
                            None => pivot = Some((i, j)),
                            Some((pi, pj)) => {
                                if d.at(i, j).abs() < d.at(pi, pj).abs() {
                                    pivot = Some((i, j));
                                }
                            }
                        }
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            row_swap(&mut d, &mut u, &mut u_inv, t, pi);
            col_swap(&mut d, &mut v, &mut v_inv, t, pj);

            loop {
                // clear column t by division steps
                let mut dirty = false;
                for i in t + 1..m {
                    if d.at(i, t).is_zero() {
                        continue;
                    }
                    let q = -(d.at(i, t) / d.at(t, t));
                    if !q.is_zero() {
                        row_add(&mut d, &mut u, &mut u_inv, i, t, &q);
                    }
                    if !d.at(i, t).is_zero() {
                        // remainder is smaller: swap up and restart
                        row_swap(&mut d, &mut u, &mut u_inv, t, i);
                        dirty = true;
                    }
                }
                for j in t + 1..n {
                    if d.at(t, j).is_zero() {
                        continue;
                    }
                    let q = -(d.at(t, j) / d.at(t, t));
                    if !q.is_zero() {
                        col_add(&mut d, &mut v, &mut v_inv, j, t, &q);
                    }
                    if !d.at(t, j).is_zero() {
                        col_swap(&mut d, &mut v, &mut v_inv, t, j);
                        dirty = true;
                    }
                }
                if !dirty {
                    let col_clear = (t + 1..m).all(|i| d.at(i, t).is_zero());
                    let row_clear = (t + 1..n).all(|j| d.at(t, j).is_zero());
                    if col_clear && row_clear {
                        break;
                    }
                }
            }

            // make the pivot divide every remaining entry
            let mut adjusted = true;
            while adjusted {
                adjusted = false;
                'scan: for i in t + 1..m {
                    for j in t + 1..n {
                        if !(d.at(i, j) % d.at(t, t)).is_zero() {
                            let one = BigInt::one();
                            row_add(&mut d, &mut u, &mut u_inv, t, i, &one);
                            // re-clear row t
                            loop {
                                let mut dirty = false;
                                for jj in t + 1..n {
                                    if d.at(t, jj).is_zero() {
                                        continue;
                                    }
                                    let q = -(d.at(t, jj) / d.at(t, t));
                                    if !q.is_zero() {
                                        col_add(&mut d, &mut v, &mut v_inv, jj, t, &q);
                                    }
                                    if !d.at(t, jj).is_zero() {
                                        col_swap(&mut d, &mut v, &mut v_inv, t, jj);
                                        dirty = true;
                                    }
                                }
                                for ii in t + 1..m {
                                    if d.at(ii, t).is_zero() {
                                        continue;
                                    }
                                    let q = -(d.at(ii, t) / d.at(t, t));
                                    if !q.is_zero() {
                                        row_add(&mut d, &mut u, &mut u_inv, ii, t, &q);
                                    }
                                    if !d.at(ii, t).is_zero() {
                                        row_swap(&mut d, &mut u, &mut u_inv, t, ii);
                                        dirty = true;
                                    }
                                }
                                if !dirty {
                                    break;
                                }
                            }
                            adjusted = true;
                            break 'scan;
                        }
                    }
                }
            }

            if d.at(t, t).is_negative() {
                row_negate(&mut d, &mut u, &mut u_inv, t);
            }
            t += 1;
        }

        let rank = (0..bound).take_while(|&i| !d.at(i, i).is_zero()).count();
        SmithDecomposition { u, u_inv, v, v_inv, d, rank }
    }

    /// Exact recomposition check: U·A·V = D, U·U⁻¹ = I, V·V⁻¹ = I.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        let lhs = self.u.mul(a).mul(&self.v);
        if lhs != self.d {
            return false;
        }
        if self.u.mul(&self.u_inv) != IntMatrix::identity(self.u.rows) {
            return false;
        }
        if self.v.mul(&self.v_inv) != IntMatrix::identity(self.v.rows) {
            return false;
        }
        for i in 1..self.rank {
            if !(self.d.at(i, i) % self.d.at(i - 1, i - 1)).is_zero() {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn snf_divisibility_example() {
        // d₁ = gcd of entries = 2, d₁·d₂ = |det| = 8.
        let a = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let s = a.smith();
        assert!(s.verify(&a));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn snf_identity_and_zero() {
        let i3 = IntMatrix::identity(3);
        let s = i3.smith();
        assert!(s.verify(&i3));
        assert_eq!(s.rank, 3);
        assert!(s.diagonal().iter().all(|d| d == &BigInt::from(1)));

        let z = IntMatrix::zero(2, 3);
        let s = z.smith();
        assert!(s.verify(&z));
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn snf_random_recompose() {
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut rng = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _ in 0..40 {
            let r = (rng() % 5 + 1) as usize;
            let c = (rng() % 5 + 1) as usize;
            let mut m = IntMatrix::zero(r, c);
            for i in 0..r {
                for j in 0..c {
                    *m.at_mut(i, j) = BigInt::from((rng() % 21) as i64 - 10);
                }
            }
            let s = m.smith();
            assert!(s.verify(&m), "failed on\n{:?}", m);
        }
    }

    #[test]
    fn kernel_and_image_are_exact() {
        let a = IntMatrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let k = a.kernel_basis();
        assert_eq!(k.cols, 2);
        for j in 0..k.cols {
            assert!(a.mul(&k.column(j)).is_zero());
        }
        let im = a.image_basis();
        assert_eq!(im.cols, 1);
        // every image generator must be solvable back
        for j in 0..im.cols {
            assert!(a.solve(&im.column(j)).is_some());
        }
    }

    #[test]
    fn solve_parity_obstruction() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]]);
        assert!(a.solve(&IntMatrix::from_rows(&[vec![3], vec![2]])).is_none());
        let x = a.solve(&IntMatrix::from_rows(&[vec![4], vec![-6]])).unwrap();
        assert_eq!(a.mul(&x), IntMatrix::from_rows(&[vec![4], vec![-6]]));
    }
}
