//! Exact scalars and matrices over rings with involution.
//!
//! A scalar is a finite formal ℤ-linear combination of group elements:
//! plain integers (trivial group), elements of ℤ[G] for a finite group
//! given by its multiplication table, or ℤ[ℤ^k] with Laurent monomials.
//! The involution is g ↦ g⁻¹ extended ℤ-linearly. Matrices are dense,
//! act on column vectors of right modules, and the matrix of the dual
//! morphism is the entrywise-involuted transpose.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub mod linsys;
pub mod snf;

pub use linsys::LinearSystem;
pub use snf::{IntMatrix, SmithDecomposition};

#[derive(Debug, thiserror::Error, PartialEq, Eq, Clone)]
pub enum ExactError {
    #[error("ring mismatch")]
    RingMismatch,
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("unsupported ring: {0}")]
    UnsupportedRing(&'static str),
    #[error("invalid group table: {0}")]
    InvalidGroupTable(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Multiplication table of a finite group. Element 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    pub order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl GroupTable {
    /// Build and validate a table: `mul[a * order + b]` is the product ab.
    /// Checks closure, the identity at index 0, inverses and associativity.
    pub fn new(order: usize, mul: Vec<u32>) -> Result<Self, ExactError> {
        if order == 0 || mul.len() != order * order {
            return Err(ExactError::InvalidGroupTable("bad table size".into()));
        }
        let at = |a: usize, b: usize| mul[a * order + b] as usize;
        for a in 0..order {
            for b in 0..order {
                if at(a, b) >= order {
                    return Err(ExactError::InvalidGroupTable("not closed".into()));
                }
            }
        }
        for a in 0..order {
            if at(0, a) != a || at(a, 0) != a {
                return Err(ExactError::InvalidGroupTable(
                    "index 0 is not an identity".into(),
                ));
            }
        }
        let mut inv = vec![u32::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if at(a, b) == 0 && at(b, a) == 0 {
                    inv[a] = b as u32;
                }
            }
            if inv[a] == u32::MAX {
                return Err(ExactError::InvalidGroupTable(format!("{a} has no inverse")));
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(ExactError::InvalidGroupTable("not associative".into()));
                    }
                }
            }
        }
        Ok(GroupTable { order, mul, inv })
    }

    /// Cyclic group ℤ/n.
    pub fn cyclic(n: usize) -> Self {
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = ((a + b) % n) as u32;
            }
        }
        GroupTable::new(n, mul).expect("cyclic table is a group")
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.order + b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingKind {
    Integers,
    FiniteGroupRing(GroupTable),
    /// Laurent group ring ℤ[ℤ^k], k ≥ 1.
    LaurentGroupRing(usize),
}

/// Shared handle on a ring description.
#[derive(Debug, Clone)]
pub struct RingSpec(Arc<RingKind>);

impl PartialEq for RingSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for RingSpec {}

impl RingSpec {
    pub fn integers() -> Self {
        RingSpec(Arc::new(RingKind::Integers))
    }

    pub fn finite_group(table: GroupTable) -> Self {
        RingSpec(Arc::new(RingKind::FiniteGroupRing(table)))
    }

    pub fn laurent(rank: usize) -> Self {
        assert!(rank >= 1, "Laurent ring needs rank >= 1");
        RingSpec(Arc::new(RingKind::LaurentGroupRing(rank)))
    }

    pub fn kind(&self) -> &RingKind {
        &self.0
    }

    pub fn is_integers(&self) -> bool {
        matches!(*self.0, RingKind::Integers)
    }

    fn mul_elt(&self, a: &GroupElt, b: &GroupElt) -> GroupElt {
        match (self.kind(), a, b) {
            (RingKind::Integers, GroupElt::Unit, GroupElt::Unit) => GroupElt::Unit,
            (RingKind::FiniteGroupRing(t), GroupElt::Fin(x), GroupElt::Fin(y)) => {
                GroupElt::Fin(t.mul(*x, *y))
            }
            (RingKind::LaurentGroupRing(k), GroupElt::Lau(x), GroupElt::Lau(y)) => {
                debug_assert!(x.len() == *k && y.len() == *k);
                GroupElt::Lau(x.iter().zip(y).map(|(a, b)| a + b).collect())
            }
            _ => panic!("group element does not belong to ring"),
        }
    }

    fn inv_elt(&self, a: &GroupElt) -> GroupElt {
        match (self.kind(), a) {
            (RingKind::Integers, GroupElt::Unit) => GroupElt::Unit,
            (RingKind::FiniteGroupRing(t), GroupElt::Fin(x)) => GroupElt::Fin(t.inv(*x)),
            (RingKind::LaurentGroupRing(_), GroupElt::Lau(x)) => {
                GroupElt::Lau(x.iter().map(|a| -a).collect())
            }
            _ => panic!("group element does not belong to ring"),
        }
    }

    pub fn one_elt(&self) -> GroupElt {
        match self.kind() {
            RingKind::Integers => GroupElt::Unit,
            RingKind::FiniteGroupRing(_) => GroupElt::Fin(0),
            RingKind::LaurentGroupRing(k) => GroupElt::Lau(vec![0; *k]),
        }
    }
}

/// A group element indexing one formal term of a scalar.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupElt {
    Unit,
    Fin(u32),
    Lau(Vec<i64>),
}

/// Finite-support ℤ-linear combination of group elements.
/// Zero coefficients are never stored, so equality is support-wise.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Scalar {
    terms: BTreeMap<GroupElt, BigInt>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn from_int<T: Into<BigInt>>(ring: &RingSpec, n: T) -> Self {
        let n: BigInt = n.into();
        let mut s = Scalar::zero();
        if !n.is_zero() {
            s.terms.insert(ring.one_elt(), n);
        }
        s
    }

    pub fn monomial<T: Into<BigInt>>(g: GroupElt, c: T) -> Self {
        let c: BigInt = c.into();
        let mut s = Scalar::zero();
        if !c.is_zero() {
            s.terms.insert(g, c);
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElt, &BigInt)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, g: GroupElt, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(g.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(g, c)| (g.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Scalar {
        if k.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(g, c)| (g.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Scalar, ring: &RingSpec) -> Scalar {
        let mut out = Scalar::zero();
        for (g, c) in &self.terms {
            for (h, d) in &other.terms {
                out.add_term(ring.mul_elt(g, h), &(c * d));
            }
        }
        out
    }

    /// The involution: g ↦ g⁻¹ extended ℤ-linearly.
    pub fn involute(&self, ring: &RingSpec) -> Scalar {
        let mut out = Scalar::zero();
        for (g, c) in &self.terms {
            out.add_term(ring.inv_elt(g), c);
        }
        out
    }

    /// The integer value, when the scalar lies in ℤ·1.
    pub fn as_int(&self) -> Option<BigInt> {
        if self.terms.is_empty() {
            return Some(BigInt::zero());
        }
        if self.terms.len() == 1 {
            let (g, c) = self.terms.iter().next().unwrap();
            match g {
                GroupElt::Unit => return Some(c.clone()),
                GroupElt::Fin(0) => return Some(c.clone()),
                GroupElt::Lau(v) if v.iter().all(|e| *e == 0) => return Some(c.clone()),
                _ => {}
            }
        }
        None
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (g, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match g {
                GroupElt::Unit => write!(f, "{}", c)?,
                GroupElt::Fin(i) => write!(f, "{}*g{}", c, i)?,
                GroupElt::Lau(v) => {
                    write!(f, "{}*t^", c)?;
                    write!(f, "{:?}", v)?
                }
            }
        }
        Ok(())
    }
}

/// Dense matrix of scalars over a fixed ring. Acts on column vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    pub ring: RingSpec,
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zero(ring: &RingSpec, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            ring: ring.clone(),
            rows,
            cols,
            entries: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(ring: &RingSpec, n: usize) -> Self {
        let mut m = ExactMatrix::zero(ring, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Scalar::from_int(ring, 1);
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Scalar>(
        ring: &RingSpec,
        rows: usize,
        cols: usize,
        mut f: F,
    ) -> Self {
        let mut m = ExactMatrix::zero(ring, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                *m.at_mut(i, j) = f(i, j);
            }
        }
        m
    }

    /// Integer matrix literal over ℤ.
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let ring = RingSpec::integers();
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        ExactMatrix::from_fn(&ring, r, c, |i, j| Scalar::from_int(&ring, rows[i][j]))
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        &mut self.entries[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &ExactMatrix) -> Result<ExactMatrix, ExactError> {
        if self.ring != other.ring {
            return Err(ExactError::RingMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(ExactError::ShapeMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a = a.add(b);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ExactMatrix) -> Result<ExactMatrix, ExactError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ExactMatrix {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a = a.neg();
        }
        out
    }

    pub fn scale_int(&self, k: i64) -> ExactMatrix {
        let k = BigInt::from(k);
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a = a.scale(&k);
        }
        out
    }

    /// Matrix product: `self ∘ other` as maps of column vectors.
    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix, ExactError> {
        if self.ring != other.ring {
            return Err(ExactError::RingMismatch);
        }
        if self.cols != other.rows {
            return Err(ExactError::ShapeMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut out = ExactMatrix::zero(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let p = a.mul(b, &self.ring);
                    let cur = out.at(i, j).add(&p);
                    *out.at_mut(i, j) = cur;
                }
            }
        }
        Ok(out)
    }

    /// Matrix of the dual morphism: transpose with entrywise involution.
    pub fn involution_dual(&self) -> ExactMatrix {
        let ring = self.ring.clone();
        ExactMatrix::from_fn(&ring, self.cols, self.rows, |i, j| {
            self.at(j, i).involute(&ring)
        })
    }

    /// Stack `self` and `other` along the diagonal.
    pub fn direct_sum(&self, other: &ExactMatrix) -> Result<ExactMatrix, ExactError> {
        if self.ring != other.ring {
            return Err(ExactError::RingMismatch);
        }
        let mut out = ExactMatrix::zero(&self.ring, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(i, j) = self.at(i, j).clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                *out.at_mut(self.rows + i, self.cols + j) = other.at(i, j).clone();
            }
        }
        Ok(out)
    }

    /// Copy `block` into `self` with its (0,0) entry at (i0, j0).
    pub fn set_block(&mut self, i0: usize, j0: usize, block: &ExactMatrix) {
        assert!(i0 + block.rows <= self.rows && j0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                *self.at_mut(i0 + i, j0 + j) = block.at(i, j).clone();
            }
        }
    }

    pub fn block(&self, i0: usize, j0: usize, rows: usize, cols: usize) -> ExactMatrix {
        assert!(i0 + rows <= self.rows && j0 + cols <= self.cols);
        ExactMatrix::from_fn(&self.ring, rows, cols, |i, j| self.at(i0 + i, j0 + j).clone())
    }

    /// Reinterpret as a plain integer matrix; errors off ℤ.
    pub fn to_int(&self) -> Result<IntMatrix, ExactError> {
        if !self.ring.is_integers() {
            return Err(ExactError::UnsupportedRing("integer matrix required"));
        }
        let mut e = Vec::with_capacity(self.rows * self.cols);
        for s in &self.entries {
            e.push(s.as_int().ok_or(ExactError::UnsupportedRing("non-integer entry"))?);
        }
        Ok(IntMatrix::new(self.rows, self.cols, e))
    }

    pub fn from_int_matrix(m: &IntMatrix) -> ExactMatrix {
        let ring = RingSpec::integers();
        ExactMatrix::from_fn(&ring, m.rows, m.cols, |i, j| {
            Scalar::from_int(&ring, m.at(i, j).clone())
        })
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Solve A·x = b over ℤ. Returns `None` when no integral solution exists.
pub fn solve_linear(a: &ExactMatrix, b: &ExactMatrix) -> Result<Option<IntMatrix>, ExactError> {
    if b.cols != 1 || b.rows != a.rows {
        return Err(ExactError::DimensionMismatch(format!(
            "want {}x1 rhs, got {}x{}",
            a.rows, b.rows, b.cols
        )));
    }
    let a = a.to_int()?;
    let b = b.to_int()?;
    Ok(a.solve(&b))
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn big_one() -> BigInt {
    BigInt::one()
}

/// (-1)^n as a BigInt-friendly integer sign.
pub fn sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub fn sign_big(n: i64) -> BigInt {
    BigInt::from(sign(n))
}

pub fn abs_big(n: &BigInt) -> BigInt {
    n.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> RingSpec {
        RingSpec::integers()
    }

    #[test]
    fn involution_trivial_on_integers() {
        let m = ExactMatrix::from_int_rows(&[vec![3]]);
        assert_eq!(m.involution_dual(), m);
    }

    #[test]
    fn involution_inverts_laurent_generator() {
        let ring = RingSpec::laurent(1);
        let t = Scalar::monomial(GroupElt::Lau(vec![1]), 1);
        let m = ExactMatrix::from_fn(&ring, 1, 1, |_, _| t.clone());
        let d = m.involution_dual();
        assert_eq!(*d.at(0, 0), Scalar::monomial(GroupElt::Lau(vec![-1]), 1));
    }

    #[test]
    fn involution_dual_is_transpose_on_integers() {
        let m = ExactMatrix::from_int_rows(&[vec![1, 2], vec![3, 4]]);
        let d = m.involution_dual();
        assert_eq!(d, ExactMatrix::from_int_rows(&[vec![1, 3], vec![2, 4]]));
        assert_eq!(d.involution_dual(), m);
    }

    #[test]
    fn dual_reverses_products() {
        let ring = RingSpec::finite_group(GroupTable::cyclic(3));
        let g = |i: u32| Scalar::monomial(GroupElt::Fin(i), 1);
        let a = ExactMatrix::from_fn(&ring, 2, 2, |i, j| g(((i + 2 * j) % 3) as u32));
        let b = ExactMatrix::from_fn(&ring, 2, 2, |i, j| {
            g(((2 * i + j) % 3) as u32).add(&Scalar::from_int(&ring, (i == j) as i64))
        });
        let ab = a.mul(&b).unwrap();
        let lhs = ab.involution_dual();
        let rhs = b.involution_dual().mul(&a.involution_dual()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn scalar_involution_antimultiplicative() {
        let ring = RingSpec::laurent(2);
        let x = Scalar::monomial(GroupElt::Lau(vec![1, -2]), 3)
            .add(&Scalar::monomial(GroupElt::Lau(vec![0, 1]), -1));
        let y = Scalar::monomial(GroupElt::Lau(vec![2, 0]), 2)
            .add(&Scalar::from_int(&ring, 5));
        let lhs = x.mul(&y, &ring).involute(&ring);
        let rhs = y.involute(&ring).mul(&x.involute(&ring), &ring);
        assert_eq!(lhs, rhs);
        assert_eq!(x.involute(&ring).involute(&ring), x);
    }

    #[test]
    fn rejects_bad_group_table() {
        // A table whose "identity" row is shifted.
        let res = GroupTable::new(2, vec![1, 0, 0, 1]);
        assert!(res.is_err());
    }

    #[test]
    fn solve_examples() {
        let a = ExactMatrix::from_int_rows(&[vec![2]]);
        let b = ExactMatrix::from_int_rows(&[vec![4]]);
        let x = solve_linear(&a, &b).unwrap().unwrap();
        assert_eq!(x.at(0, 0), &big(2));
        let b2 = ExactMatrix::from_int_rows(&[vec![3]]);
        assert!(solve_linear(&a, &b2).unwrap().is_none());
        // underdetermined: any (a, 5-a)
        let a3 = ExactMatrix::from_int_rows(&[vec![1, 1]]);
        let b3 = ExactMatrix::from_int_rows(&[vec![5]]);
        let x3 = solve_linear(&a3, &b3).unwrap().unwrap();
        assert_eq!(x3.at(0, 0) + x3.at(1, 0), big(5));
    }

    #[test]
    fn mismatched_shapes_error() {
        let a = ExactMatrix::from_int_rows(&[vec![1, 2]]);
        let b = ExactMatrix::from_int_rows(&[vec![1, 2]]);
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn z_ring_helper() {
        let s = Scalar::from_int(&z(), 0);
        assert!(s.is_zero());
    }
}
