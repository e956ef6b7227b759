//! Minkowski vector and affine primitives.
//!
//! Signature is (+, -, ..., -); the light speed `c` lives on the metric and is
//! only consulted where a formula actually carries it.

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative threshold below which `v^2` counts as zero.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    n: usize,
    c: f64,
}

impl Metric {
    pub fn new(n: usize, c: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition(format!("dimension {n} < 2")));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Precondition(format!("light speed {c} must be positive")));
        }
        Ok(Metric { n, c })
    }

    /// Four-dimensional Minkowski space with c = 1.
    pub fn minkowski4() -> Self {
        Metric { n: 4, c: 1.0 }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Diagonal entry `g_ii`.
    pub fn sign(&self, i: usize) -> f64 {
        if i == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| if i == j { self.sign(i) } else { 0.0 })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variance {
    Contravariant,
    Covariant,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpacetimeVector {
    pub comps: DVector<f64>,
    pub variance: Variance,
}

impl SpacetimeVector {
    pub fn new(comps: DVector<f64>) -> Self {
        SpacetimeVector { comps, variance: Variance::Contravariant }
    }

    pub fn from_slice(xs: &[f64]) -> Self {
        Self::new(DVector::from_column_slice(xs))
    }

    pub fn covector(xs: &[f64]) -> Self {
        SpacetimeVector { comps: DVector::from_column_slice(xs), variance: Variance::Covariant }
    }

    /// Basis vector `e_i` in dimension `n`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn norm_inf(&self) -> f64 {
        self.comps.amax()
    }

    pub fn scale(&self, s: f64) -> Self {
        SpacetimeVector { comps: &self.comps * s, variance: self.variance }
    }

    pub fn add(&self, other: &Self) -> Self {
        SpacetimeVector { comps: &self.comps + &other.comps, variance: self.variance }
    }

    pub fn sub(&self, other: &Self) -> Self {
        SpacetimeVector { comps: &self.comps - &other.comps, variance: self.variance }
    }
}

/// A point of the affine space, in the one global inertial chart.
#[derive(Clone, Debug, PartialEq)]
pub struct Event {
    pub coords: DVector<f64>,
}

impl Event {
    pub fn new(coords: DVector<f64>) -> Self {
        Event { coords }
    }

    pub fn from_slice(xs: &[f64]) -> Self {
        Event { coords: DVector::from_column_slice(xs) }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// `self - other` as a vector.
    pub fn diff(&self, other: &Event) -> SpacetimeVector {
        SpacetimeVector::new(&self.coords - &other.coords)
    }

    pub fn translate(&self, v: &SpacetimeVector) -> Event {
        Event { coords: &self.coords + &v.comps }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CausalKind {
    Timelike,
    Lightlike,
    Spacelike,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Future,
    Past,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CausalClass {
    pub kind: CausalKind,
    pub orientation: Option<Orientation>,
}

fn check_dim(m: &Metric, v: &SpacetimeVector) -> Result<()> {
    if v.dim() != m.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), got: v.dim() });
    }
    Ok(())
}

/// `u . v`. Mixed variance gives the natural pairing.
pub fn inner(u: &SpacetimeVector, v: &SpacetimeVector, m: &Metric) -> Result<f64> {
    check_dim(m, u)?;
    check_dim(m, v)?;
    if u.variance != v.variance {
        return Ok(u.comps.dot(&v.comps));
    }
    // diag(1,-1,...) is its own inverse, so both pure variances use it
    let mut s = u.comps[0] * v.comps[0];
    for i in 1..m.dim() {
        s -= u.comps[i] * v.comps[i];
    }
    Ok(s)
}

/// `v^2`.
pub fn square(v: &SpacetimeVector, m: &Metric) -> Result<f64> {
    inner(v, v, m)
}

/// `sqrt(|v^2|)`.
pub fn norm_g(v: &SpacetimeVector, m: &Metric) -> Result<f64> {
    Ok(square(v, m)?.abs().sqrt())
}

/// Scale-aware zero test for a squared norm.
pub fn is_null_square(sq: f64, v: &SpacetimeVector) -> bool {
    let s = v.norm_inf().max(1.0);
    sq.abs() < DEGENERACY_TOL * s * s
}

pub fn causal_class(
    v: &SpacetimeVector,
    v_star: Option<&SpacetimeVector>,
    m: &Metric,
) -> Result<CausalClass> {
    check_dim(m, v)?;
    if v.comps.iter().all(|x| *x == 0.0) {
        return Err(Error::ZeroVector);
    }
    let sq = square(v, m)?;
    let kind = if is_null_square(sq, v) {
        CausalKind::Lightlike
    } else if sq > 0.0 {
        CausalKind::Timelike
    } else {
        CausalKind::Spacelike
    };
    let orientation = match (kind, v_star) {
        (CausalKind::Spacelike, _) | (_, None) => None,
        (_, Some(w)) => {
            let wsq = square(w, m)?;
            if wsq <= 0.0 || is_null_square(wsq, w) {
                return Err(Error::Precondition("reference vector must be timelike".into()));
            }
            Some(if inner(v, w, m)? > 0.0 { Orientation::Future } else { Orientation::Past })
        }
    };
    Ok(CausalClass { kind, orientation })
}

/// Index lowering: `v_a = v^b g_ba`.
pub fn lower(x: &SpacetimeVector, m: &Metric) -> SpacetimeVector {
    let comps = DVector::from_fn(x.dim(), |i, _| m.sign(i) * x.comps[i]);
    SpacetimeVector { comps, variance: Variance::Covariant }
}

/// Index raising: `a^a = g^ab a_b`.
pub fn raise(x: &SpacetimeVector, m: &Metric) -> SpacetimeVector {
    let comps = DVector::from_fn(x.dim(), |i, _| m.sign(i) * x.comps[i]);
    SpacetimeVector { comps, variance: Variance::Contravariant }
}

/// Flips the variance tag, lowering or raising as appropriate.
pub fn raise_lower(x: &SpacetimeVector, m: &Metric) -> SpacetimeVector {
    match x.variance {
        Variance::Contravariant => lower(x, m),
        Variance::Covariant => raise(x, m),
    }
}

/// Reflection of `x` at the hyperplane orthogonal to `v`.
pub fn reflect(v: &SpacetimeVector, x: &SpacetimeVector, m: &Metric) -> Result<SpacetimeVector> {
    let vv = square(v, m)?;
    if is_null_square(vv, v) {
        return Err(Error::DegenerateHyperplane(vv));
    }
    let vx = inner(v, x, m)?;
    Ok(x.sub(&v.scale(2.0 * vx / vv)))
}

/// Matrix of `x -> x - 2 v (v.x)/v^2` for a general symmetric form `g`.
pub fn reflection_matrix_form(v: &DVector<f64>, g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let gv = g * v;
    let vv = v.dot(&gv);
    let s = v.amax().max(1.0);
    if vv.abs() < DEGENERACY_TOL * s * s {
        return Err(Error::DegenerateHyperplane(vv));
    }
    let n = v.len();
    Ok(DMatrix::identity(n, n) - (v * gv.transpose()) * (2.0 / vv))
}

/// Matrix of the reflection `reflect(v, .)` under the Minkowski metric.
pub fn reflection_matrix(v: &SpacetimeVector, m: &Metric) -> Result<DMatrix<f64>> {
    check_dim(m, v)?;
    reflection_matrix_form(&v.comps, &m.matrix())
}

/// Parameters `lambda` with `(r + lambda v - p)^2 = 0`, larger root first.
fn cone_roots(p: &Event, r: &Event, v: &SpacetimeVector, m: &Metric) -> Result<Vec<f64>> {
    let w = r.diff(p);
    let a = square(v, m)?;
    let b = inner(v, &w, m)?;
    let cc = square(&w, m)?;
    if is_null_square(cc, &w) {
        return Err(Error::Precondition("r lies on the light cone of p".into()));
    }
    if is_null_square(a, v) {
        let scale = v.norm_inf() * w.norm_inf().max(1.0);
        if b.abs() <= DEGENERACY_TOL * scale.max(1.0) {
            return Ok(vec![]);
        }
        return Ok(vec![-cc / (2.0 * b)]);
    }
    if a < 0.0 {
        return Err(Error::Precondition("direction must be timelike or lightlike".into()));
    }
    let disc = b * b - a * cc;
    if disc < 0.0 {
        return Ok(vec![]);
    }
    let sq = disc.sqrt();
    if sq == 0.0 {
        return Ok(vec![-b / a]);
    }
    let s = -(b + b.signum() * sq);
    let s = if b == 0.0 { -sq } else { s };
    let (l1, l2) = (s / a, cc / s);
    Ok(if l1 >= l2 { vec![l1, l2] } else { vec![l2, l1] })
}

/// Intersection of the line `r + lambda v` with the light double-cone at `p`.
pub fn line_cone_intersection(p: &Event, r: &Event, v: &SpacetimeVector, m: &Metric) -> Result<Vec<Event>> {
    check_dim(m, v)?;
    Ok(cone_roots(p, r, v, m)?.into_iter().map(|l| r.translate(&v.scale(l))).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadarProducts {
    /// `|(q - p)^2|`
    pub sq_dist: f64,
    /// `||q+ - q|| * ||q - q-||`
    pub radar: f64,
    pub is_midpoint: bool,
}

/// Compares the squared distance from `p` to `q` with the product of the
/// radar legs along the timelike line `(r, v)` through `q`.
pub fn radar_products(
    p: &Event,
    r: &Event,
    v: &SpacetimeVector,
    q: &Event,
    m: &Metric,
) -> Result<RadarProducts> {
    let vv = square(v, m)?;
    if vv <= 0.0 || is_null_square(vv, v) {
        return Err(Error::Precondition("line direction must be timelike".into()));
    }
    let qr = q.diff(r);
    let lq = inner(&qr, v, m)? / vv;
    let off = qr.sub(&v.scale(lq));
    if off.norm_inf() > 1e-9 * qr.norm_inf().max(1.0) {
        return Err(Error::Precondition("q is not on the line".into()));
    }
    let roots = cone_roots(p, r, v, m)?;
    if roots.len() != 2 {
        return Err(Error::Precondition("line meets the cone in fewer than two points".into()));
    }
    let (lp, lm) = (roots[0], roots[1]);
    let eps = 1e-12 * (lp - lm).abs().max(1.0);
    if !(lq > lm + eps && lq < lp - eps) {
        return Err(Error::Precondition("q is not strictly between the cone intersections".into()));
    }
    let vn = vv.sqrt();
    let qp = q.diff(p);
    let sq_dist = square(&qp, m)?.abs();
    let radar = (lp - lq) * vn * (lq - lm) * vn;
    let scale = qp.norm_inf().max(1.0) * v.norm_inf().max(1.0);
    let is_midpoint = inner(&qp, v, m)?.abs() <= 1e-12 * scale;
    Ok(RadarProducts { sq_dist, radar, is_midpoint })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Line {
    pub point: Event,
    pub dir: SpacetimeVector,
}

impl Line {
    pub fn new(point: Event, dir: SpacetimeVector) -> Self {
        Line { point, dir }
    }

    pub fn at(&self, lambda: f64) -> Event {
        self.point.translate(&self.dir.scale(lambda))
    }
}

/// The unique pair `q` on `l1`, `q'` on `l2` with `q - q'` orthogonal to both
/// directions.
pub fn mutual_simultaneous_pair(l1: &Line, l2: &Line, m: &Metric) -> Result<(Event, Event)> {
    let (v, w) = (&l1.dir, &l2.dir);
    let vv = square(v, m)?;
    let ww = square(w, m)?;
    if vv <= 0.0 || ww <= 0.0 || is_null_square(vv, v) || is_null_square(ww, w) {
        return Err(Error::Precondition("both lines must be timelike".into()));
    }
    let vw = inner(v, w, m)?;
    let d = l2.point.diff(&l1.point);
    let a = Matrix2::new(vv, -vw, vw, -ww);
    let det = vw * vw - vv * ww;
    if det.abs() <= 1e-12 * (vv * ww).max(1.0) {
        return Err(Error::Precondition("lines are parallel".into()));
    }
    let rhs = Vector2::new(inner(&d, v, m)?, inner(&d, w, m)?);
    let sol = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Precondition("singular simultaneity system".into()))?;
    Ok((l1.at(sol[0]), l2.at(sol[1])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2() -> Metric {
        Metric::new(2, 1.0).unwrap()
    }

    #[test]
    fn signature() {
        let m = Metric::minkowski4();
        let e0 = SpacetimeVector::basis(4, 0);
        assert_eq!(inner(&e0, &e0, &m).unwrap(), 1.0);
        let l = SpacetimeVector::from_slice(&[1.0, 1.0, 0.0, 0.0]);
        assert_eq!(square(&l, &m).unwrap(), 0.0);
        let a = SpacetimeVector::from_slice(&[2.0, 1.0, 0.0, 0.0]);
        let b = SpacetimeVector::from_slice(&[1.0, 2.0, 0.0, 0.0]);
        assert_eq!(inner(&a, &b, &m).unwrap(), 0.0);
    }

    #[test]
    fn dimension_mismatch() {
        let m = Metric::minkowski4();
        let a = SpacetimeVector::from_slice(&[1.0, 0.0]);
        assert!(matches!(inner(&a, &a, &m), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn classes() {
        let m = Metric::minkowski4();
        let k = |xs: &[f64]| causal_class(&SpacetimeVector::from_slice(xs), None, &m).unwrap().kind;
        assert_eq!(k(&[1.0, 0.0, 0.0, 0.0]), CausalKind::Timelike);
        assert_eq!(k(&[1.0, 1.0, 0.0, 0.0]), CausalKind::Lightlike);
        assert_eq!(k(&[0.0, 1.0, 0.0, 0.0]), CausalKind::Spacelike);
        assert_eq!(
            causal_class(&SpacetimeVector::from_slice(&[0.0; 4]), None, &m),
            Err(Error::ZeroVector)
        );
        let star = SpacetimeVector::basis(4, 0);
        let past = SpacetimeVector::from_slice(&[-1.0, 1.0, 0.0, 0.0]);
        let c = causal_class(&past, Some(&star), &m).unwrap();
        assert_eq!(c.orientation, Some(Orientation::Past));
        let sp = SpacetimeVector::from_slice(&[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(causal_class(&sp, Some(&star), &m).unwrap().orientation, None);
    }

    #[test]
    fn lowering() {
        let m = Metric::minkowski4();
        let v = SpacetimeVector::from_slice(&[0.0, 1.0, 0.0, 0.0]);
        let l = raise_lower(&v, &m);
        assert_eq!(l.comps.as_slice(), &[0.0, -1.0, 0.0, 0.0]);
        assert_eq!(l.variance, Variance::Covariant);
        assert_eq!(raise_lower(&l, &m), v);
    }

    #[test]
    fn reflections() {
        let m = Metric::minkowski4();
        let e0 = SpacetimeVector::basis(4, 0);
        let e1 = SpacetimeVector::basis(4, 1);
        assert_eq!(reflect(&e1, &e1, &m).unwrap(), e1.scale(-1.0));
        assert_eq!(reflect(&e1, &e0, &m).unwrap(), e0);
        let null = SpacetimeVector::from_slice(&[1.0, 1.0, 0.0, 0.0]);
        assert!(matches!(reflect(&null, &e0, &m), Err(Error::DegenerateHyperplane(_))));
    }

    #[test]
    fn cone_two_points() {
        let m = m2();
        let p = Event::from_slice(&[0.0, 0.0]);
        let r = Event::from_slice(&[0.0, 1.0]);
        let v = SpacetimeVector::from_slice(&[1.0, 0.0]);
        let pts = line_cone_intersection(&p, &r, &v, &m).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0].coords.as_slice(), &[1.0, 1.0]);
        assert_eq!(pts[1].coords.as_slice(), &[-1.0, 1.0]);
    }

    #[test]
    fn cone_lightlike_direction() {
        let m = m2();
        let p = Event::from_slice(&[0.0, 0.0]);
        let v = SpacetimeVector::from_slice(&[1.0, 1.0]);
        let r = Event::from_slice(&[0.0, 3.0]);
        let pts = line_cone_intersection(&p, &r, &v, &m).unwrap();
        assert_eq!(pts.len(), 1);
        // p - r in v^perp: the null line never meets the cone
        let m3 = Metric::new(3, 1.0).unwrap();
        let v3 = SpacetimeVector::from_slice(&[1.0, 1.0, 0.0]);
        let p3 = Event::from_slice(&[0.0, 0.0, 0.0]);
        let r3 = Event::from_slice(&[0.0, 0.0, 1.0]);
        assert!(line_cone_intersection(&p3, &r3, &v3, &m3).unwrap().is_empty());
        let r2 = Event::from_slice(&[1.0, 0.0]);
        let pts2 = line_cone_intersection(&p, &r2, &v, &m).unwrap();
        assert_eq!(pts2.len(), 1);
        assert!(square(&pts2[0].diff(&p), &m).unwrap().abs() < 1e-12);
    }

    #[test]
    fn cone_on_cone_is_error() {
        let m = m2();
        let p = Event::from_slice(&[0.0, 0.0]);
        let r = Event::from_slice(&[1.0, 1.0]);
        let v = SpacetimeVector::from_slice(&[1.0, 0.0]);
        assert!(line_cone_intersection(&p, &r, &v, &m).is_err());
    }

    #[test]
    fn radar_symmetric_and_offset() {
        let m = m2();
        let p = Event::from_slice(&[0.0, 0.0]);
        let r = Event::from_slice(&[0.0, 1.0]);
        let v = SpacetimeVector::from_slice(&[1.0, 0.0]);
        let rp = radar_products(&p, &r, &v, &Event::from_slice(&[0.0, 1.0]), &m).unwrap();
        assert_eq!((rp.sq_dist, rp.radar, rp.is_midpoint), (1.0, 1.0, true));
        let rq = radar_products(&p, &r, &v, &Event::from_slice(&[0.5, 1.0]), &m).unwrap();
        assert!((rq.sq_dist - 0.75).abs() < 1e-15);
        assert!((rq.radar - 0.5 * 1.5).abs() < 1e-15);
        assert!(!rq.is_midpoint);
        assert!(radar_products(&p, &r, &v, &Event::from_slice(&[2.0, 1.0]), &m).is_err());
    }

    #[test]
    fn simultaneity_of_intersecting_lines() {
        let m = Metric::new(3, 1.0).unwrap();
        let x = Event::from_slice(&[1.0, 2.0, -1.0]);
        let l1 = Line::new(x.clone(), SpacetimeVector::from_slice(&[1.0, 0.0, 0.0]));
        let l2 = Line::new(
            x.translate(&SpacetimeVector::from_slice(&[1.0, 0.3, 0.1])),
            SpacetimeVector::from_slice(&[1.0, 0.3, 0.1]),
        );
        let (q, q2) = mutual_simultaneous_pair(&l1, &l2, &m).unwrap();
        assert!((&q.coords - &x.coords).amax() < 1e-12);
        assert!((&q2.coords - &x.coords).amax() < 1e-12);
        let par = Line::new(Event::from_slice(&[0.0, 5.0, 0.0]), SpacetimeVector::from_slice(&[2.0, 0.0, 0.0]));
        assert!(mutual_simultaneous_pair(&l1, &par, &m).is_err());
    }
}
