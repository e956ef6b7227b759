//! Causally and chronologically complete subsets of a bounded integer grid
//! in `n`-dimensional Minkowski space, with their lattice operations.
//!
//! All complements are taken relative to the box. Intervals are computed in
//! integers, so lightlike separation is exact.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type GridPoint = Vec<i64>;

/// Axis 0 is time; extents are inclusive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridBox {
    pub n: usize,
    pub extents: Vec<[i64; 2]>,
}

impl GridBox {
    pub fn new(extents: Vec<[i64; 2]>) -> Result<Self> {
        if extents.len() < 2 {
            return Err(Error::Precondition("grid needs n >= 2".into()));
        }
        if extents.iter().any(|e| e[0] > e[1]) {
            return Err(Error::Precondition("empty extent".into()));
        }
        Ok(GridBox { n: extents.len(), extents })
    }

    /// `side` points per axis centred on the origin (`side` odd).
    pub fn centred(n: usize, side: i64) -> Result<Self> {
        if side < 1 || side % 2 == 0 {
            return Err(Error::Precondition("side must be a positive odd number".into()));
        }
        let h = side / 2;
        Self::new(vec![[-h, h]; n])
    }

    pub fn len(&self) -> usize {
        self.extents.iter().map(|e| (e[1] - e[0] + 1) as usize).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        p.len() == self.n && p.iter().zip(&self.extents).all(|(x, e)| e[0] <= *x && *x <= e[1])
    }

    pub fn index(&self, p: &[i64]) -> Option<usize> {
        if !self.contains(p) {
            return None;
        }
        let mut i = 0usize;
        for (x, e) in p.iter().zip(&self.extents) {
            i = i * (e[1] - e[0] + 1) as usize + (x - e[0]) as usize;
        }
        Some(i)
    }

    pub fn point(&self, mut i: usize) -> GridPoint {
        let mut p = vec![0; self.n];
        for k in (0..self.n).rev() {
            let w = (self.extents[k][1] - self.extents[k][0] + 1) as usize;
            p[k] = self.extents[k][0] + (i % w) as i64;
            i /= w;
        }
        p
    }

    /// Chebyshev distance from `p` to the nearest face of the box.
    pub fn margin(&self, p: &[i64]) -> i64 {
        p.iter().zip(&self.extents).map(|(x, e)| (x - e[0]).min(e[1] - x)).min().unwrap_or(0)
    }
}

/// `(p - q)^2 = dt^2 - sum dx_i^2`.
pub fn interval(p: &[i64], q: &[i64]) -> i64 {
    let dt = p[0] - q[0];
    dt * dt - p[1..].iter().zip(&q[1..]).map(|(a, b)| (a - b) * (a - b)).sum::<i64>()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeparationMode {
    /// disjoint iff strictly spacelike
    Causal,
    /// disjoint iff distinct and not timelike
    Chronological,
}

impl SeparationMode {
    pub fn disjoint(self, p: &[i64], q: &[i64]) -> bool {
        let s = interval(p, q);
        match self {
            SeparationMode::Causal => s < 0,
            SeparationMode::Chronological => s <= 0 && p != q,
        }
    }
}

/// A subset of the box, stored as a bitset over point indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Region {
    bits: FixedBitSet,
}

impl Region {
    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_subset(&self, other: &Region) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn intersection(&self, other: &Region) -> Region {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Region { bits }
    }

    pub fn union(&self, other: &Region) -> Region {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Region { bits }
    }

    pub fn difference(&self, other: &Region) -> Region {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        Region { bits }
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.bits.contains(i)
    }
}

/// The box with one separation mode and a precomputed disjointness mask
/// per point.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub gbox: GridBox,
    pub mode: SeparationMode,
    points: Vec<GridPoint>,
    masks: Vec<FixedBitSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionFile {
    #[serde(rename = "box")]
    pub gbox: GridBox,
    pub points: Vec<GridPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiamondSpec {
    pub p: GridPoint,
    pub q: GridPoint,
    pub closed: bool,
}

/// Region given either by explicit points or by a diamond.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RegionSpec {
    Points(RegionFile),
    Diamond { diamond: DiamondSpec },
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrthoReport {
    pub holds: bool,
    /// `b ∧ (a ∨ b') \ a`
    pub excess: Region,
}

impl Lattice {
    pub fn new(gbox: GridBox, mode: SeparationMode) -> Self {
        let n = gbox.len();
        let points: Vec<GridPoint> = (0..n).map(|i| gbox.point(i)).collect();
        let mut masks = vec![FixedBitSet::with_capacity(n); n];
        for i in 0..n {
            for j in i + 1..n {
                if mode.disjoint(&points[i], &points[j]) {
                    masks[i].insert(j);
                    masks[j].insert(i);
                }
            }
        }
        Lattice { gbox, mode, points, masks }
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn empty(&self) -> Region {
        Region { bits: FixedBitSet::with_capacity(self.size()) }
    }

    pub fn full(&self) -> Region {
        let mut bits = FixedBitSet::with_capacity(self.size());
        bits.insert_range(..);
        Region { bits }
    }

    pub fn point(&self, i: usize) -> &GridPoint {
        &self.points[i]
    }

    pub fn region(&self, pts: &[GridPoint]) -> Result<Region> {
        let mut r = self.empty();
        for p in pts {
            let i = self.gbox.index(p).ok_or(Error::OutsideDomain)?;
            r.bits.insert(i);
        }
        Ok(r)
    }

    pub fn region_from_fn(&self, f: impl Fn(&[i64]) -> bool) -> Region {
        let mut r = self.empty();
        for (i, p) in self.points.iter().enumerate() {
            if f(p) {
                r.bits.insert(i);
            }
        }
        r
    }

    /// Points in canonical (index) order.
    pub fn points(&self, r: &Region) -> Vec<GridPoint> {
        r.indices().map(|i| self.points[i].clone()).collect()
    }

    /// Closed: `(C+_p ∩ C-_q) ∪ (C+_q ∩ C-_p)` with non-strict inequalities;
    /// open: strict.
    pub fn diamond(&self, p: &[i64], q: &[i64], closed: bool) -> Result<Region> {
        if !self.gbox.contains(p) || !self.gbox.contains(q) {
            return Err(Error::OutsideDomain);
        }
        let future = |x: &[i64], o: &[i64]| {
            let s = interval(x, o);
            if closed {
                s >= 0 && x[0] >= o[0]
            } else {
                s > 0 && x[0] > o[0]
            }
        };
        Ok(self.region_from_fn(|x| (future(x, p) && future(q, x)) || (future(x, q) && future(p, x))))
    }

    pub fn complement(&self, s: &Region) -> Region {
        let mut out = self.full();
        for i in s.indices() {
            out.bits.intersect_with(&self.masks[i]);
        }
        out
    }

    pub fn completion(&self, s: &Region) -> Region {
        self.complement(&self.complement(s))
    }

    pub fn is_complete(&self, s: &Region) -> bool {
        self.completion(s) == *s
    }

    fn require_complete(&self, s: &Region) -> Result<()> {
        if self.is_complete(s) {
            Ok(())
        } else {
            Err(Error::Precondition("region is not complete".into()))
        }
    }

    pub fn meet(&self, a: &Region, b: &Region) -> Result<Region> {
        self.require_complete(a)?;
        self.require_complete(b)?;
        Ok(a.intersection(b))
    }

    pub fn join(&self, a: &Region, b: &Region) -> Result<Region> {
        self.require_complete(a)?;
        self.require_complete(b)?;
        Ok(self.join_unchecked(a, b))
    }

    fn join_unchecked(&self, a: &Region, b: &Region) -> Region {
        self.complement(&self.complement(a).intersection(&self.complement(b)))
    }

    /// Tests `a = b ∧ (a ∨ b')` for complete `a ⊆ b`.
    pub fn check_orthomodular(&self, a: &Region, b: &Region) -> Result<OrthoReport> {
        self.require_complete(a)?;
        self.require_complete(b)?;
        if !a.is_subset(b) {
            return Err(Error::Precondition("a must be contained in b".into()));
        }
        let rhs = b.intersection(&self.join_unchecked(a, &self.complement(b)));
        Ok(OrthoReport { holds: rhs == *a, excess: rhs.difference(a) })
    }

    /// `a = (a ∧ b) ∨ (a ∧ b')`.
    pub fn compatibility(&self, a: &Region, b: &Region) -> Result<bool> {
        self.require_complete(a)?;
        self.require_complete(b)?;
        let nb = self.complement(b);
        Ok(self.join_unchecked(&a.intersection(b), &a.intersection(&nb)) == *a)
    }

    /// Smallest distance from a point of `r` to the box boundary.
    pub fn margin(&self, r: &Region) -> Option<i64> {
        r.indices().map(|i| self.gbox.margin(&self.points[i])).min()
    }

    /// A complete region strictly between the atom `{p}` and `{p} ∨ {q}`.
    pub fn covering_witness(&self, p: &[i64], q: &[i64]) -> Result<Option<Region>> {
        let rp = self.region(&[p.to_vec()])?;
        let rq = self.region(&[q.to_vec()])?;
        let top = self.join(&rp, &rq)?;
        for i in top.indices() {
            let x = &self.points[i];
            if x == p || x == q {
                continue;
            }
            let mut s = rp.clone();
            s.bits.insert(i);
            let c = self.completion(&s);
            if c != rp && c != top && c.is_subset(&top) {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }

    pub fn to_file(&self, r: &Region) -> RegionFile {
        RegionFile { gbox: self.gbox.clone(), points: self.points(r) }
    }

    pub fn from_spec(&self, spec: &RegionSpec) -> Result<Region> {
        match spec {
            RegionSpec::Points(f) => {
                if f.gbox != self.gbox {
                    return Err(Error::Precondition("region file box differs from the lattice box".into()));
                }
                self.region(&f.points)
            }
            RegionSpec::Diamond { diamond: d } => self.diamond(&d.p, &d.q, d.closed),
        }
    }
}

/// The regions of the non-orthomodularity counterexample: a large open
/// diamond `b'`, its complement `b` (a closed double wedge) and a small
/// closed diamond `a` inside the left wedge of `b`. The lower-right edge of
/// `a` lies on the null line through the left corner and the top of `b'`.
#[derive(Clone, Debug)]
pub struct CounterExample {
    pub a: Region,
    pub b: Region,
    pub b_prime: Region,
    pub a_join_b_prime: Region,
    pub report: OrthoReport,
}

/// Builds the counterexample in a 2-D causal lattice. `r` is the half-height
/// of `b'`, `s` the half-height of `a`; `r = 4, s = 2` fits a 41x41 box.
pub fn fig2_counterexample(lat: &Lattice, r: i64, s: i64) -> Result<CounterExample> {
    if lat.mode != SeparationMode::Causal || lat.gbox.n != 2 {
        return Err(Error::Precondition("counterexample is built in the 2-D causal lattice".into()));
    }
    let b_prime = lat.diamond(&[-r, 0], &[r, 0], false)?;
    let b = lat.complement(&b_prime);
    // null line t - x = r through the left corner (0, -r) and the top (r, 0);
    // a's bottom tip and right corner sit on it below the left corner
    let p = [-r - 2 * s, -2 * r - 2 * s];
    let q = [p[0] + 2 * s, p[1]];
    let a = lat.diamond(&p, &q, true)?;
    let a_join_b_prime = lat.join(&a, &b_prime)?;
    let report = lat.check_orthomodular(&a, &b)?;
    Ok(CounterExample { a, b, b_prime, a_join_b_prime, report })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(mode: SeparationMode) -> Lattice {
        Lattice::new(GridBox::centred(2, 11).unwrap(), mode)
    }

    #[test]
    fn box_indexing_roundtrip() {
        let b = GridBox::new(vec![[-2, 3], [0, 4], [-1, 1]]).unwrap();
        for i in 0..b.len() {
            assert_eq!(b.index(&b.point(i)), Some(i));
        }
        assert_eq!(b.index(&[4, 0, 0]), None);
    }

    #[test]
    fn diamonds() {
        let l = lat(SeparationMode::Causal);
        let d = l.diamond(&[0, 0], &[0, 0], true).unwrap();
        assert_eq!(l.points(&d), vec![vec![0, 0]]);
        assert!(l.diamond(&[0, 0], &[2, 2], false).unwrap().is_empty());
        let d = l.diamond(&[0, 0], &[2, 0], true).unwrap();
        let mut pts = l.points(&d);
        pts.sort();
        assert_eq!(pts, vec![vec![0, 0], vec![1, -1], vec![1, 0], vec![1, 1], vec![2, 0]]);
    }

    #[test]
    fn complement_basics() {
        for mode in [SeparationMode::Causal, SeparationMode::Chronological] {
            let l = lat(mode);
            assert_eq!(l.complement(&l.empty()), l.full());
            let p = l.region(&[vec![0, 0]]).unwrap();
            let c = l.complement(&p);
            for i in c.indices() {
                assert!(mode.disjoint(l.point(i), &[0, 0]));
            }
            assert!(l.is_complete(&p));
        }
    }

    #[test]
    fn timelike_pair_completes_to_diamond() {
        let l = lat(SeparationMode::Causal);
        let s = l.region(&[vec![-2, 0], vec![2, 1]]).unwrap();
        assert_eq!(l.completion(&s), l.diamond(&[-2, 0], &[2, 1], true).unwrap());
    }

    #[test]
    fn mismatched_preconditions() {
        let l = lat(SeparationMode::Causal);
        let s = l.region(&[vec![-2, 0], vec![2, 1]]).unwrap();
        assert!(l.meet(&s, &l.full()).is_err());
        let a = l.region(&[vec![0, 0]]).unwrap();
        let b = l.region(&[vec![0, 3]]).unwrap();
        assert!(l.check_orthomodular(&a, &b).is_err());
    }
}
