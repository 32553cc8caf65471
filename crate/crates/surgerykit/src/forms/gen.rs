//! Deterministic random generators for complexes and structures.
//!
//! Valid quadratic structures and pairs are sampled from the kernel
//! lattice of their (ℤ-linear) structure relations, so every generated
//! instance satisfies the relations exactly by construction.

use super::{QuadraticComplex, QuadraticPair, StructureBlocks};
use crate::chain::{ChainComplex, ChainMap};
use crate::exact::{big, ExactMatrix, IntMatrix, LinearSystem, RingSpec, Scalar};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Unimodular matrix built from a few elementary operations, with inverse.
pub fn random_unimodular(rng: &mut ChaCha8Rng, k: usize) -> (IntMatrix, IntMatrix) {
    let mut u = IntMatrix::identity(k);
    let mut uinv = IntMatrix::identity(k);
    if k == 0 {
        return (u, uinv);
    }
    for _ in 0..2 * k {
        let i = rng.gen_range(0..k);
        let mut j = rng.gen_range(0..k);
        if i == j {
            j = (j + 1) % k;
        }
        if i == j {
            continue;
        }
        let c: i64 = *[-1i64, 1].get(rng.gen_range(0..2)).unwrap();
        // row i += c·row j on u; column j -= c·column i on uinv
        for t in 0..k {
            let add = u.at(j, t) * big(c);
            *u.at_mut(i, t) += add;
        }
        for t in 0..k {
            let sub = uinv.at(t, i).clone() * big(c);
            *uinv.at_mut(t, j) -= sub;
        }
    }
    (u, uinv)
}

/// Random bounded complex over ℤ with exact d² = 0: a direct sum of
/// elementary two-term pieces and free summands on disjoint index
/// segments, conjugated degreewise by unimodular matrices. per degree:
/// [free | targets of pieces from r+1 | sources of pieces at r].
pub fn random_complex(rng: &mut ChaCha8Rng, min_deg: i64, max_deg: i64, max_rank: usize) -> ChainComplex {
    let z = RingSpec::integers();
    loop {
        let mut free: BTreeMap<i64, usize> = BTreeMap::new();
        let mut pieces: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        for r in min_deg..=max_deg {
            free.insert(r, rng.gen_range(0..=max_rank.min(2)));
            if r > min_deg {
                let k = rng.gen_range(0..=max_rank.min(2));
                let mut v = Vec::new();
                for _ in 0..k {
                    v.push([0i64, 1, 1, 2, 3][rng.gen_range(0..5)]);
                }
                pieces.insert(r, v);
            }
        }
        let n_pieces = |r: i64| pieces.get(&r).map_or(0, Vec::len);
        let rank_at =
            |r: i64| free.get(&r).copied().unwrap_or(0) + n_pieces(r + 1) + n_pieces(r);
        if (min_deg..=max_deg).all(|r| rank_at(r) == 0) {
            continue;
        }
        let mut d: BTreeMap<i64, IntMatrix> = BTreeMap::new();
        for r in min_deg..=max_deg + 1 {
            let rows = rank_at(r - 1);
            let cols = rank_at(r);
            if rows == 0 || cols == 0 {
                continue;
            }
            let mut m = IntMatrix::zero(rows, cols);
            // sources of degree-r pieces start after free + incoming targets
            let src0 = free.get(&r).copied().unwrap_or(0) + n_pieces(r + 1);
            let tgt0 = free.get(&(r - 1)).copied().unwrap_or(0);
            for (t, a) in pieces.get(&r).into_iter().flatten().enumerate() {
                *m.at_mut(tgt0 + t, src0 + t) = big(*a);
            }
            d.insert(r, m);
        }
        let mut units: BTreeMap<i64, (IntMatrix, IntMatrix)> = BTreeMap::new();
        for r in min_deg - 1..=max_deg + 1 {
            units.insert(r, random_unimodular(rng, rank_at(r)));
        }
        let mut dm: BTreeMap<i64, ExactMatrix> = BTreeMap::new();
        for (&r, m) in &d {
            let conj = units[&(r - 1)].0.mul(m).mul(&units[&r].1);
            dm.insert(r, ExactMatrix::from_int_matrix(&conj));
        }
        let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
        for r in min_deg..=max_deg {
            if rank_at(r) > 0 {
                ranks.insert(r, rank_at(r));
            }
        }
        let c = ChainComplex::new(z.clone(), ranks, dm).expect("segment layout is consistent");
        debug_assert!(c.verify().is_empty());
        if !c.is_zero() {
            return c;
        }
    }
}

/// Layout of the unknown blocks of a structure family.
#[derive(Debug, Clone)]
pub struct FamilyLayout {
    /// (s, r, rows, cols, offset)
    pub blocks: Vec<(i64, i64, usize, usize, usize)>,
    pub total: usize,
}

impl FamilyLayout {
    pub fn new(c: &ChainComplex, base: i64) -> FamilyLayout {
        let mut blocks = Vec::new();
        let mut total = 0;
        if let (Some(lo), Some(hi)) = (c.min_degree(), c.max_degree()) {
            let smax = (base - 2 * lo).max(0);
            for s in 0..=smax {
                for r in lo..=hi {
                    let rows = c.rank(r);
                    let cols = c.rank(base - s - r);
                    if rows * cols > 0 {
                        blocks.push((s, r, rows, cols, total));
                        total += rows * cols;
                    }
                }
            }
        }
        FamilyLayout { blocks, total }
    }

    /// Column index of entry (i,j) of block (s,r), if the block exists.
    pub fn index(&self, s: i64, r: i64, i: usize, j: usize) -> Option<usize> {
        self.blocks
            .iter()
            .find(|&&(bs, br, _, _, _)| bs == s && br == r)
            .map(|&(_, _, _, cols, off)| off + i * cols + j)
    }

    pub fn assemble(&self, _c: &ChainComplex, v: &IntMatrix) -> StructureBlocks {
        let z = RingSpec::integers();
        let mut out = BTreeMap::new();
        for &(s, r, rows, cols, off) in &self.blocks {
            let mut m = ExactMatrix::zero(&z, rows, cols);
            let mut nonzero = false;
            for i in 0..rows {
                for j in 0..cols {
                    let val = v.at(off + i * cols + j, 0).clone();
                    if !val.is_zero() {
                        nonzero = true;
                    }
                    *m.at_mut(i, j) = Scalar::from_int(&z, val);
                }
            }
            if nonzero {
                out.insert((s, r), m);
            }
        }
        out
    }
}

fn add_composite_left(
    sys: &mut LinearSystem,
    rows: &BTreeMap<(usize, usize), usize>,
    fixed: &IntMatrix,
    layout: &FamilyLayout,
    s: i64,
    r: i64,
    sign: i64,
) {
    // contribution sign·fixed·X where X = block (s,r)
    for (&(i, j), &row) in rows {
        for k in 0..fixed.cols {
            if let Some(col) = layout.index(s, r, k, j) {
                sys.add(row, col, fixed.at(i, k) * big(sign));
            }
        }
    }
}

fn add_composite_right(
    sys: &mut LinearSystem,
    rows: &BTreeMap<(usize, usize), usize>,
    layout: &FamilyLayout,
    s: i64,
    r: i64,
    fixed: &IntMatrix,
    sign: i64,
) {
    // contribution sign·X·fixed
    for (&(i, j), &row) in rows {
        for k in 0..fixed.rows {
            if let Some(col) = layout.index(s, r, i, k) {
                sys.add(row, col, fixed.at(k, j) * big(sign));
            }
        }
    }
}

fn add_dual(
    sys: &mut LinearSystem,
    rows: &BTreeMap<(usize, usize), usize>,
    layout: &FamilyLayout,
    s: i64,
    r: i64,
    sign: i64,
) {
    // contribution sign·X^† (plain transpose over ℤ)
    for (&(i, j), &row) in rows {
        if let Some(col) = layout.index(s, r, j, i) {
            sys.add(row, col, big(sign));
        }
    }
}

fn add_direct(
    sys: &mut LinearSystem,
    rows: &BTreeMap<(usize, usize), usize>,
    layout: &FamilyLayout,
    s: i64,
    r: i64,
    sign: i64,
) {
    for (&(i, j), &row) in rows {
        if let Some(col) = layout.index(s, r, i, j) {
            sys.add(row, col, big(sign));
        }
    }
}

fn relation_rows(sys: &mut LinearSystem, rows: usize, cols: usize) -> BTreeMap<(usize, usize), usize> {
    let mut map = BTreeMap::new();
    for i in 0..rows {
        for j in 0..cols {
            map.insert((i, j), sys.new_row());
        }
    }
    map
}

/// Assemble the four-term relation system for an n-dimensional structure
/// on `c` into `sys` (unknown layout `layout`, unknown offset base 0).
pub fn quadratic_relations(
    sys: &mut LinearSystem,
    c: &ChainComplex,
    n: i64,
    layout: &FamilyLayout,
) {
    let (Some(lo), Some(hi)) = (c.min_degree(), c.max_degree()) else {
        return;
    };
    let smax = (n - 2 * lo + 1).max(1);
    let dint = crate::chain::to_int_diffs(c).expect("integer complex");
    let dual = |r: i64| dint.get(&r).map(IntMatrix::transpose);
    for s in 0..=smax {
        for m in lo - 1..=hi + 1 {
            let rel_rows = c.rank(n - m - s - 1);
            let rel_cols = c.rank(m);
            if rel_rows * rel_cols == 0 {
                continue;
            }
            let rows = relation_rows(sys, rel_rows, rel_cols);
            let r0 = n - m - s - 1;
            // term 1: d ∘ ψ_s⟨m⟩, ψ_s⟨m⟩ target degree n−s−m
            if let Some(d) = dint.get(&(n - m - s)) {
                add_composite_left(sys, &rows, d, layout, s, n - s - m, 1);
            }
            // term 2: −(−1)^{r0} ψ_s⟨m+1⟩ ∘ d†
            if let Some(dd) = dual(m + 1) {
                add_composite_right(
                    sys,
                    &rows,
                    layout,
                    s,
                    n - s - m - 1,
                    &dd,
                    -crate::exact::sign(r0),
                );
            }
            // term 3: (−1)^{(r0+1)(n+s)} (ψ_{s+1}⟨r0⟩)† ; target degree of
            // ψ_{s+1}⟨r0⟩ is m
            add_dual(
                sys,
                &rows,
                layout,
                s + 1,
                m,
                crate::exact::sign((r0 + 1) * (n + s)),
            );
            // term 4: (−1)^s ψ_{s+1}⟨m⟩, target degree n−s−1−m
            add_direct(sys, &rows, layout, s + 1, n - s - 1 - m, crate::exact::sign(s));
        }
    }
}

fn sample_from_kernel(rng: &mut ChaCha8Rng, kernel: &IntMatrix) -> Option<IntMatrix> {
    if kernel.cols == 0 {
        return None;
    }
    let mut v = IntMatrix::zero(kernel.rows, 1);
    let mut any = false;
    for j in 0..kernel.cols {
        let c: i64 = rng.gen_range(-2..=2);
        if c == 0 {
            continue;
        }
        any = true;
        for i in 0..kernel.rows {
            let add = kernel.at(i, j) * big(c);
            *v.at_mut(i, 0) += add;
        }
    }
    if !any {
        // force at least one generator
        let j = rng.gen_range(0..kernel.cols);
        for i in 0..kernel.rows {
            *v.at_mut(i, 0) += kernel.at(i, j);
        }
    }
    Some(v)
}

/// Sample a valid n-dimensional quadratic structure on `c`, if any
/// nonzero one exists.
pub fn sample_quadratic(rng: &mut ChaCha8Rng, c: &ChainComplex, n: i64) -> Option<QuadraticComplex> {
    let layout = FamilyLayout::new(c, n);
    if layout.total == 0 {
        return None;
    }
    let mut sys = LinearSystem::new(layout.total);
    quadratic_relations(&mut sys, c, n, &layout);
    let kernel = sys.kernel();
    let v = sample_from_kernel(rng, &kernel)?;
    let psi = layout.assemble(c, &v);
    let q = QuadraticComplex::new(c.clone(), n, psi).ok()?;
    debug_assert!(q.is_valid());
    Some(q)
}

/// Sample a degree-0 chain map c → d from the kernel of its defining system.
pub fn sample_chain_map(rng: &mut ChaCha8Rng, c: &ChainComplex, d: &ChainComplex) -> Option<ChainMap> {
    // unknowns: f_r entries
    let mut blocks = Vec::new();
    let mut total = 0;
    let (lo, hi) = (c.min_degree()?, c.max_degree()?);
    for r in lo..=hi {
        let rows = d.rank(r);
        let cols = c.rank(r);
        if rows * cols > 0 {
            blocks.push((r, rows, cols, total));
            total += rows * cols;
        }
    }
    if total == 0 {
        return None;
    }
    let index = |r: i64, i: usize, j: usize| -> Option<usize> {
        blocks
            .iter()
            .find(|&&(br, _, _, _)| br == r)
            .map(|&(_, _, cols, off)| off + i * cols + j)
    };
    let dc = crate::chain::to_int_diffs(c).ok()?;
    let dd = crate::chain::to_int_diffs(d).ok()?;
    let mut sys = LinearSystem::new(total);
    for r in lo..=hi + 1 {
        let rel_rows = d.rank(r - 1);
        let rel_cols = c.rank(r);
        if rel_rows * rel_cols == 0 {
            continue;
        }
        let rows = relation_rows(&mut sys, rel_rows, rel_cols);
        // d_D f_r − f_{r−1} d_C = 0
        if let Some(dm) = dd.get(&r) {
            for (&(i, j), &row) in &rows {
                for k in 0..dm.cols {
                    if let Some(col) = index(r, k, j) {
                        sys.add(row, col, dm.at(i, k).clone());
                    }
                }
            }
        }
        if let Some(dm) = dc.get(&r) {
            for (&(i, j), &row) in &rows {
                for k in 0..dm.rows {
                    if let Some(col) = index(r - 1, i, k) {
                        sys.add(row, col, -dm.at(k, j).clone());
                    }
                }
            }
        }
    }
    let v = sample_from_kernel(rng, &sys.kernel())?;
    let z = RingSpec::integers();
    let mut components = BTreeMap::new();
    for &(r, rows, cols, off) in &blocks {
        let mut m = ExactMatrix::zero(&z, rows, cols);
        let mut nonzero = false;
        for i in 0..rows {
            for j in 0..cols {
                let val = v.at(off + i * cols + j, 0).clone();
                if !val.is_zero() {
                    nonzero = true;
                }
                *m.at_mut(i, j) = Scalar::from_int(&z, val);
            }
        }
        if nonzero {
            components.insert(r, m);
        }
    }
    let f = ChainMap { degree: 0, components };
    f.verify(c, d).ok()?;
    Some(f)
}

/// Sample a valid (n+1)-dimensional quadratic pair over a sampled chain map.
pub fn sample_pair(
    rng: &mut ChaCha8Rng,
    c: &ChainComplex,
    d: &ChainComplex,
    n: i64,
) -> Option<QuadraticPair> {
    let f = sample_chain_map(rng, c, d)?;
    sample_pair_over(rng, f, c, d, n)
}

/// Sample (δψ, ψ) for a fixed chain map.
pub fn sample_pair_over(
    rng: &mut ChaCha8Rng,
    f: ChainMap,
    c: &ChainComplex,
    d: &ChainComplex,
    n: i64,
) -> Option<QuadraticPair> {
    let layout_psi = FamilyLayout::new(c, n);
    let layout_delta = FamilyLayout::new(d, n + 1);
    let total = layout_psi.total + layout_delta.total;
    if total == 0 {
        return None;
    }
    // shift the delta layout after the psi layout
    let mut layout_delta_shift = layout_delta.clone();
    for b in layout_delta_shift.blocks.iter_mut() {
        b.4 += layout_psi.total;
    }
    layout_delta_shift.total = total;
    let mut sys = LinearSystem::new(total);
    quadratic_relations(&mut sys, c, n, &layout_psi);
    // five-term relations on D
    let (lo, hi) = (d.min_degree()?, d.max_degree()?);
    let dd_int = crate::chain::to_int_diffs(d).ok()?;
    let smax = (n + 1 - 2 * lo + 1).max(1);
    let fint = |r: i64| f.component(c, d, r).to_int().expect("integer map");
    for s in 0..=smax {
        for m in lo - 1..=hi + 1 {
            let rel_rows = d.rank(n - m - s);
            let rel_cols = d.rank(m);
            if rel_rows * rel_cols == 0 {
                continue;
            }
            let rows = relation_rows(&mut sys, rel_rows, rel_cols);
            let r1 = n - m - s;
            if let Some(dm) = dd_int.get(&(n + 1 - m - s)) {
                add_composite_left(&mut sys, &rows, dm, &layout_delta_shift, s, n + 1 - s - m, 1);
            }
            if let Some(dm) = dd_int.get(&(m + 1)) {
                let ddual = dm.transpose();
                add_composite_right(
                    &mut sys,
                    &rows,
                    &layout_delta_shift,
                    s,
                    n - s - m,
                    &ddual,
                    -crate::exact::sign(r1),
                );
            }
            add_dual(
                &mut sys,
                &rows,
                &layout_delta_shift,
                s + 1,
                m,
                crate::exact::sign((r1 + 1) * (n + 1 + s)),
            );
            add_direct(
                &mut sys,
                &rows,
                &layout_delta_shift,
                s + 1,
                n - s - m,
                crate::exact::sign(s),
            );
            // f ψ_s⟨m⟩ f†: fixed on both sides of the ψ-unknown
            let f_tgt = fint(n - m - s);
            let f_src_t = fint(m).transpose();
            // contribution f_tgt · X · f_src_t with X = ψ block (s, n−s−m)
            for (&(i, j), &row) in &rows {
                for a in 0..f_tgt.cols {
                    for b in 0..f_src_t.rows {
                        if let Some(col) = layout_psi.index(s, n - s - m, a, b) {
                            sys.add(row, col, f_tgt.at(i, a) * f_src_t.at(b, j));
                        }
                    }
                }
            }
        }
    }
    let v = sample_from_kernel(rng, &sys.kernel())?;
    let mut v_psi = IntMatrix::zero(layout_psi.total.max(1), 1);
    for i in 0..layout_psi.total {
        *v_psi.at_mut(i, 0) = v.at(i, 0).clone();
    }
    let mut v_delta = IntMatrix::zero(layout_delta.total.max(1), 1);
    for i in 0..layout_delta.total {
        *v_delta.at_mut(i, 0) = v.at(layout_psi.total + i, 0).clone();
    }
    let psi = layout_psi.assemble(c, &v_psi);
    let delta = layout_delta.assemble(d, &v_delta);
    let pair = QuadraticPair::new(f, c.clone(), d.clone(), n, delta, psi).ok()?;
    debug_assert!(pair.is_valid());
    Some(pair)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_complexes_are_complexes() {
        let mut r = rng(7);
        for _ in 0..20 {
            let c = random_complex(&mut r, 0, 3, 1);
            assert!(c.verify().is_empty());
        }
    }

    #[test]
    fn sampled_quadratics_satisfy_the_relation() {
        let mut r = rng(11);
        let mut produced = 0;
        for t in 0..30 {
            let c = random_complex(&mut r, 0, 2, 1);
            let n = (t % 4) as i64;
            if let Some(q) = sample_quadratic(&mut r, &c, n) {
                assert!(q.verify().unwrap().is_empty(), "invalid sample n={n}");
                produced += 1;
            }
        }
        assert!(produced > 10, "generator should usually produce structures");
    }

    #[test]
    fn sampled_pairs_satisfy_the_relations() {
        let mut r = rng(13);
        let mut produced = 0;
        for t in 0..20 {
            let c = random_complex(&mut r, 0, 2, 1);
            let d = random_complex(&mut r, 0, 2, 1);
            let n = (t % 3) as i64;
            if let Some(p) = sample_pair(&mut r, &c, &d, n) {
                assert!(p.verify().unwrap().is_empty());
                produced += 1;
            }
        }
        assert!(produced > 5);
    }
}
