//! The Lorentz group O(1,3) and the Galilei group as matrix groups.
//!
//! Four-dimensional matrices act on `(x^0, x^1, x^2, x^3)` with `x^0 = ct`;
//! boost parameters are dimensionless `beta = v/c`.

use nalgebra::{DMatrix, DVector, Matrix3, Matrix4, Rotation3, Unit, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::velocity;

/// Default absolute tolerance on the defining-relation residual.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

pub fn eta() -> Matrix4<f64> {
    Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, -1.0, -1.0))
}

/// Lorentz factor of a dimensionless velocity.
pub fn gamma(beta: &Vector3<f64>) -> f64 {
    1.0 / (1.0 - beta.norm_squared()).sqrt()
}

pub fn check_subluminal(beta: &Vector3<f64>) -> Result<()> {
    let b = beta.norm();
    if !(b < 1.0) {
        return Err(Error::Superluminal(b));
    }
    Ok(())
}

/// `(gamma - 1) bhat bhat^T`, written without dividing by `|beta|`.
pub(crate) fn radial_projector(beta: &Vector3<f64>, g: f64) -> Matrix3<f64> {
    beta * beta.transpose() * (g * g / (1.0 + g))
}

/// Symmetric pure boost `B(beta)`.
pub fn boost(beta: &Vector3<f64>) -> Result<Matrix4<f64>> {
    check_subluminal(beta)?;
    Ok(boost_unchecked(beta))
}

pub(crate) fn boost_unchecked(beta: &Vector3<f64>) -> Matrix4<f64> {
    let g = gamma(beta);
    let mut m = Matrix4::zeros();
    m[(0, 0)] = g;
    let sp = Matrix3::identity() + radial_projector(beta, g);
    for i in 0..3 {
        m[(0, i + 1)] = g * beta[i];
        m[(i + 1, 0)] = g * beta[i];
        for j in 0..3 {
            m[(i + 1, j + 1)] = sp[(i, j)];
        }
    }
    m
}

pub fn is_rotation(d: &Matrix3<f64>, tol: f64) -> bool {
    (d.transpose() * d - Matrix3::identity()).amax() <= tol && d.determinant() > 0.0
}

/// Rotation by `angle` about `axis` (right-handed).
pub fn axis_angle(axis: &Vector3<f64>, angle: f64) -> Matrix3<f64> {
    Rotation3::from_axis_angle(&Unit::new_normalize(*axis), angle).into_inner()
}

/// Block-diagonal embedding `R(D)`.
pub fn rotation(d: &Matrix3<f64>) -> Result<Matrix4<f64>> {
    if !is_rotation(d, MEMBERSHIP_TOL) {
        return Err(Error::NotInGroup((d.transpose() * d - Matrix3::identity()).amax()));
    }
    Ok(embed_rotation(d))
}

pub(crate) fn embed_rotation(d: &Matrix3<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::identity();
    m.fixed_view_mut::<3, 3>(1, 1).copy_from(d);
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComponentTag {
    ProperOrtho,
    ImproperOrtho,
    ProperAntichron,
    ImproperAntichron,
}

/// `max |L^T g L - g|`.
pub fn defining_residual(l: &Matrix4<f64>) -> f64 {
    (l.transpose() * eta() * l - eta()).amax()
}

pub fn classify(l: &Matrix4<f64>, tol: f64) -> (bool, ComponentTag) {
    let member = defining_residual(l) <= tol;
    let proper = l.determinant() > 0.0;
    let ortho = l[(0, 0)] > 0.0;
    let tag = match (proper, ortho) {
        (true, true) => ComponentTag::ProperOrtho,
        (false, true) => ComponentTag::ImproperOrtho,
        (true, false) => ComponentTag::ProperAntichron,
        (false, false) => ComponentTag::ImproperAntichron,
    };
    (member, tag)
}

/// The 1+3 split `L = [[gamma, a^T], [b, M]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Split {
    pub gamma: f64,
    pub a: Vector3<f64>,
    pub b: Vector3<f64>,
    pub m: Matrix3<f64>,
}

pub fn split(l: &Matrix4<f64>) -> Split {
    Split {
        gamma: l[(0, 0)],
        a: Vector3::new(l[(0, 1)], l[(0, 2)], l[(0, 3)]),
        b: Vector3::new(l[(1, 0)], l[(2, 0)], l[(3, 0)]),
        m: l.fixed_view::<3, 3>(1, 1).into_owned(),
    }
}

impl Split {
    /// Rotation factor `D = M - b a^T / (1 + gamma)`.
    pub fn rotation(&self) -> Matrix3<f64> {
        self.m - self.b * self.a.transpose() / (1.0 + self.gamma)
    }

    /// Boost factor built from `gamma` and `b`.
    pub fn boost(&self) -> Matrix4<f64> {
        let mut m = Matrix4::zeros();
        m[(0, 0)] = self.gamma;
        let sp = Matrix3::identity() + self.b * self.b.transpose() / (1.0 + self.gamma);
        for i in 0..3 {
            m[(0, i + 1)] = self.b[i];
            m[(i + 1, 0)] = self.b[i];
        }
        m.fixed_view_mut::<3, 3>(1, 1).copy_from(&sp);
        m
    }

    pub fn beta(&self) -> Vector3<f64> {
        self.b / self.gamma
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoostRotationParams {
    pub beta: Vector3<f64>,
    pub d: Matrix3<f64>,
}

impl BoostRotationParams {
    pub fn new(beta: Vector3<f64>, d: Matrix3<f64>) -> Result<Self> {
        check_subluminal(&beta)?;
        if !is_rotation(&d, MEMBERSHIP_TOL) {
            return Err(Error::NotInGroup((d.transpose() * d - Matrix3::identity()).amax()));
        }
        Ok(BoostRotationParams { beta, d })
    }

    pub fn identity() -> Self {
        BoostRotationParams { beta: Vector3::zeros(), d: Matrix3::identity() }
    }

    /// `L(beta, D) = B(beta) R(D)`.
    pub fn matrix(&self) -> Matrix4<f64> {
        boost_unchecked(&self.beta) * embed_rotation(&self.d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Polar {
    pub boost: Matrix4<f64>,
    pub rotation: Matrix4<f64>,
    pub params: BoostRotationParams,
}

fn require_proper_ortho(l: &Matrix4<f64>, tol: f64) -> Result<()> {
    let (member, tag) = classify(l, tol);
    if !member {
        return Err(Error::NotInGroup(defining_residual(l)));
    }
    if tag != ComponentTag::ProperOrtho {
        return Err(Error::WrongComponent(format!("{tag:?}")));
    }
    Ok(())
}

/// Polar decomposition `L = B R` from the closed form in the entries of `L`.
pub fn polar_decompose(l: &Matrix4<f64>, tol: f64) -> Result<Polar> {
    require_proper_ortho(l, tol)?;
    let s = split(l);
    let d = s.rotation();
    Ok(Polar {
        boost: s.boost(),
        rotation: embed_rotation(&d),
        params: BoostRotationParams { beta: s.beta(), d },
    })
}

/// Polar decomposition through the positive square root of `L L^T`.
pub fn polar_decompose_sqrt(l: &Matrix4<f64>, tol: f64) -> Result<Polar> {
    require_proper_ortho(l, tol)?;
    let eig = (l * l.transpose()).symmetric_eigen();
    let sqrt = eig.eigenvalues.map(|x| x.max(0.0).sqrt());
    let b = eig.eigenvectors * Matrix4::from_diagonal(&sqrt) * eig.eigenvectors.transpose();
    let b = (b + b.transpose()) * 0.5;
    let binv = b.try_inverse().ok_or(Error::NotInGroup(f64::NAN))?;
    let r = binv * l;
    let beta = Vector3::new(b[(1, 0)], b[(2, 0)], b[(3, 0)]) / b[(0, 0)];
    let d = r.fixed_view::<3, 3>(1, 1).into_owned();
    Ok(Polar { boost: b, rotation: r, params: BoostRotationParams { beta, d } })
}

/// Reversed decomposition `L = R(D) B(beta')` with `beta' = D^T beta`.
pub fn polar_decompose_reversed(l: &Matrix4<f64>, tol: f64) -> Result<(Matrix4<f64>, Matrix4<f64>, Vector3<f64>)> {
    let p = polar_decompose(l, tol)?;
    let beta2 = p.params.d.transpose() * p.params.beta;
    Ok((p.rotation, boost_unchecked(&beta2), beta2))
}

/// Group law on `(beta, D)`: `(beta1 * D1 beta2, T[beta1, D1 beta2] D1 D2)`.
pub fn compose_params(p1: &BoostRotationParams, p2: &BoostRotationParams) -> BoostRotationParams {
    let rb2 = p1.d * p2.beta;
    BoostRotationParams {
        beta: velocity::star(&p1.beta, &rb2),
        d: velocity::gyr(&p1.beta, &rb2) * p1.d * p2.d,
    }
}

/// `(-D^{-1} beta, D^{-1})`.
pub fn invert_params(p: &BoostRotationParams) -> BoostRotationParams {
    let dinv = p.d.transpose();
    BoostRotationParams { beta: -(dinv * p.beta), d: dinv }
}

/// Galilei transformation `(t, x) -> (t, D x + v t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GalileiParams {
    pub v: Vector3<f64>,
    pub d: Matrix3<f64>,
}

impl GalileiParams {
    pub fn identity() -> Self {
        GalileiParams { v: Vector3::zeros(), d: Matrix3::identity() }
    }

    /// `G(v, D) = [[1, 0], [v, D]]`.
    pub fn matrix(&self) -> Matrix4<f64> {
        let mut m = embed_rotation(&self.d);
        for i in 0..3 {
            m[(i + 1, 0)] = self.v[i];
        }
        m
    }
}

pub fn galilei_compose(p1: &GalileiParams, p2: &GalileiParams) -> GalileiParams {
    GalileiParams { v: p1.v + p1.d * p2.v, d: p1.d * p2.d }
}

pub fn galilei_invert(p: &GalileiParams) -> GalileiParams {
    let dinv = p.d.transpose();
    GalileiParams { v: -(dinv * p.v), d: dinv }
}

/// Reflection vectors `v_1..v_k` with `L = rho_{v_1} ... rho_{v_k}`, where
/// `rho_v(x) = x - 2 v (v.x)/v^2` for the symmetric form `g`.
///
/// Walks an orthogonal basis of `g`; each step fixes one basis vector with one
/// or two reflections, so `k <= 2n - 1`.
pub fn cartan_dieudonne_factor(l: &DMatrix<f64>, g: &DMatrix<f64>) -> Result<Vec<DVector<f64>>> {
    let n = g.nrows();
    if g.ncols() != n || l.nrows() != n || l.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: l.nrows() });
    }
    if (g - g.transpose()).amax() > 1e-12 * g.amax().max(1.0) {
        return Err(Error::Precondition("form must be symmetric".into()));
    }
    let scale = l.amax().max(1.0);
    let resid = (l.transpose() * g * l - g).amax();
    if resid > MEMBERSHIP_TOL * scale * scale * g.amax().max(1.0) {
        return Err(Error::NotInGroup(resid));
    }
    let eig = g.clone().symmetric_eigen();
    if eig.eigenvalues.iter().any(|x| x.abs() < 1e-12 * g.amax()) {
        return Err(Error::DegenerateForm);
    }
    let q = |x: &DVector<f64>| x.dot(&(g * x));
    let mut phi = l.clone();
    let mut out = Vec::new();
    for k in 0..n {
        let v: DVector<f64> = eig.eigenvectors.column(k).into_owned();
        let w = &phi * &v;
        let diff = &v - &w;
        if diff.amax() <= 1e-12 * scale {
            continue;
        }
        let dd = q(&diff);
        let steps = if dd.abs() > 1e-8 * diff.norm_squared() {
            vec![diff]
        } else {
            vec![&v + &w, v.clone()]
        };
        for s in steps {
            phi = reflection_matrix_form(&s, g)? * phi;
            out.push(s);
        }
    }
    Ok(out)
}

fn reflection_matrix_form(v: &DVector<f64>, g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    crate::geometry::reflection_matrix_form(v, g)
}

/// `rho_{v_1} ... rho_{v_k}` as a matrix.
pub fn recompose_reflections(vs: &[DVector<f64>], g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = g.nrows();
    let mut m = DMatrix::identity(n, n);
    for v in vs {
        m *= reflection_matrix_form(v, g)?;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn boost_basics() {
        assert_eq!(boost(&Vector3::zeros()).unwrap(), Matrix4::identity());
        let b = boost(&Vector3::new(0.6, 0.0, 0.0)).unwrap();
        assert_eq!(b[(0, 0)], 1.25);
        assert!((b[(0, 1)] - 0.75).abs() < 1e-15);
        assert!((b[(1, 1)] - 1.25).abs() < 1e-15);
        assert!(matches!(boost(&Vector3::new(1.0, 0.0, 0.0)), Err(Error::Superluminal(_))));
        let inv = boost(&Vector3::new(-0.6, 0.0, 0.0)).unwrap();
        assert!((b * inv - Matrix4::identity()).amax() < 1e-14);
    }

    #[test]
    fn rotation_embedding() {
        let d = axis_angle(&Vector3::z(), PI);
        let r = rotation(&d).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| r[(i, i)].round()).collect();
        assert_eq!(diag, vec![1.0, -1.0, -1.0, 1.0]);
        assert!(rotation(&Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0))).is_err());
    }

    #[test]
    fn components() {
        let tag = |d: [f64; 4]| classify(&Matrix4::from_diagonal(&d.into()), MEMBERSHIP_TOL);
        assert_eq!(tag([1.0, 1.0, 1.0, 1.0]), (true, ComponentTag::ProperOrtho));
        assert_eq!(tag([1.0, -1.0, 1.0, 1.0]), (true, ComponentTag::ImproperOrtho));
        assert_eq!(tag([-1.0, 1.0, 1.0, 1.0]), (true, ComponentTag::ImproperAntichron));
        assert_eq!(tag([-1.0, -1.0, 1.0, 1.0]), (true, ComponentTag::ProperAntichron));
        assert!(!tag([2.0, 1.0, 1.0, 1.0]).0);
    }

    #[test]
    fn polar_of_product() {
        let beta = Vector3::new(0.6, 0.0, 0.0);
        let d = axis_angle(&Vector3::z(), PI / 2.0);
        let l = boost(&beta).unwrap() * rotation(&d).unwrap();
        let p = polar_decompose(&l, MEMBERSHIP_TOL).unwrap();
        assert!((p.params.beta - beta).amax() < 1e-12);
        assert!((p.params.d - d).amax() < 1e-12);
        let id = polar_decompose(&Matrix4::identity(), MEMBERSHIP_TOL).unwrap();
        assert_eq!(id.params, BoostRotationParams::identity());
        assert!(polar_decompose(&Matrix4::from_diagonal(&[-1.0, 1.0, 1.0, -1.0].into()), MEMBERSHIP_TOL).is_err());
    }

    #[test]
    fn param_identities() {
        let p = BoostRotationParams::new(Vector3::new(0.3, -0.2, 0.5), axis_angle(&Vector3::new(1.0, 2.0, 0.5), 0.7)).unwrap();
        let e = BoostRotationParams::identity();
        let q = compose_params(&p, &e);
        assert!((q.beta - p.beta).amax() < 1e-15 && (q.d - p.d).amax() < 1e-15);
        let pure = BoostRotationParams::new(Vector3::new(0.4, 0.1, 0.0), Matrix3::identity()).unwrap();
        assert_eq!(invert_params(&pure).beta, -pure.beta);
        assert_eq!(invert_params(&e), e);
    }

    #[test]
    fn galilei_collinear_addition() {
        let a = GalileiParams { v: Vector3::new(2.0, 0.0, 0.0), d: Matrix3::identity() };
        let b = GalileiParams { v: Vector3::new(3.5, 0.0, 0.0), d: Matrix3::identity() };
        assert_eq!(galilei_compose(&a, &b).v, Vector3::new(5.5, 0.0, 0.0));
        assert_eq!(galilei_compose(&a, &GalileiParams::identity()), a);
    }

    #[test]
    fn cartan_dieudonne_small_cases() {
        let g = eta();
        let g = DMatrix::from_fn(4, 4, |i, j| g[(i, j)]);
        assert!(cartan_dieudonne_factor(&DMatrix::identity(4, 4), &g).unwrap().is_empty());
        let u = DVector::from_vec(vec![0.3, 1.0, -0.5, 0.2]);
        let r = crate::geometry::reflection_matrix_form(&u, &g).unwrap();
        let vs = cartan_dieudonne_factor(&r, &g).unwrap();
        assert_eq!(vs.len(), 1);
        assert!((recompose_reflections(&vs, &g).unwrap() - r).amax() < 1e-12);
        let b = boost(&Vector3::new(0.6, 0.0, 0.0)).unwrap();
        let b = DMatrix::from_fn(4, 4, |i, j| b[(i, j)]);
        let vs = cartan_dieudonne_factor(&b, &g).unwrap();
        assert!(vs.len() <= 7);
        assert!((recompose_reflections(&vs, &g).unwrap() - b).amax() < 1e-10);
        let bad = DMatrix::from_element(4, 4, 1.0);
        assert!(cartan_dieudonne_factor(&bad, &g).is_err());
    }
}
