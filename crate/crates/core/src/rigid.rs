//! Born rigidity of normalized timelike vector fields on Minkowski space.
//!
//! Coordinates are `(ct, x, y, z)`. Jacobians are stored as
//! `J[(mu, nu)] = d_mu u^nu`; two-tensors carry lower indices. The horizontal
//! metric is `h = u (x) u / c^2 - g`, positive on vectors orthogonal to `u`,
//! so that `L_u h = -2 theta`.

use std::sync::{Arc, Mutex};

use nalgebra::{Matrix4, Vector3, Vector4};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::worldline::{flat, mdot, WorldLine};

pub type V4 = Vector4<f64>;
pub type M4 = Matrix4<f64>;

pub const DEFAULT_FD_STEP: f64 = 1e-5;

fn eta() -> M4 {
    M4::from_diagonal(&V4::new(1.0, -1.0, -1.0, -1.0))
}

type FieldFn = dyn Fn(&V4) -> Option<V4> + Send + Sync;
type JacFn = dyn Fn(&V4) -> Option<M4> + Send + Sync;

/// A user-supplied field; `None` marks points outside its domain.
#[derive(Clone)]
pub struct CustomField {
    pub name: String,
    pub u: Arc<FieldFn>,
    pub jacobian: Option<Arc<JacFn>>,
}

/// `u = z'(sigma(x))` where `sigma(x)` labels the hyperplane through `x`
/// orthogonal to the worldline.
pub struct IrrotationalField {
    pub worldline: WorldLine,
    /// proper-time window searched when no warm start is available
    pub tau_range: (f64, f64),
    warm: Mutex<Option<f64>>,
}

impl Clone for IrrotationalField {
    fn clone(&self) -> Self {
        IrrotationalField {
            worldline: self.worldline.clone(),
            tau_range: self.tau_range,
            warm: Mutex::new(*self.warm.lock().unwrap()),
        }
    }
}

#[derive(Clone)]
pub enum FieldKind {
    /// normalized `x d/d(ct) + ct d/dx`, on `x > |ct|`
    BoostKilling,
    /// normalized `d/dt + kappa d/dpsi`, on `kappa rho < c`
    RotationKilling { kappa: f64 },
    Constant { beta: Vector3<f64> },
    WorldlineIrrotational(Arc<IrrotationalField>),
    Custom(CustomField),
}

#[derive(Clone)]
pub struct VelocityField {
    pub c: f64,
    pub kind: FieldKind,
}

impl std::fmt::Debug for VelocityField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match &self.kind {
            FieldKind::BoostKilling => "boost".to_string(),
            FieldKind::RotationKilling { kappa } => format!("rotation(kappa = {kappa})"),
            FieldKind::Constant { beta } => format!("constant({:?})", beta.as_slice()),
            FieldKind::WorldlineIrrotational(w) => format!("irrotational({})", w.worldline.name()),
            FieldKind::Custom(c) => format!("custom({})", c.name),
        };
        write!(f, "VelocityField[{name}, c = {}]", self.c)
    }
}

/// `u = c V / sqrt(V.V)` and its Jacobian from that of `V`.
fn normalize(c: f64, v: V4, dv: M4) -> Option<(V4, M4)> {
    let s2 = mdot(&v, &v);
    if !(s2 > 0.0) {
        return None;
    }
    let s = s2.sqrt();
    let vf = flat(&v);
    // d_mu s = (V_nu d_mu V^nu) / s
    let ds = dv * vf / s;
    let jac = dv * (c / s) - ds * v.transpose() * (c / s2);
    Some((v * (c / s), jac))
}

impl VelocityField {
    pub fn boost_killing(c: f64) -> Self {
        VelocityField { c, kind: FieldKind::BoostKilling }
    }

    pub fn rotation_killing(c: f64, kappa: f64) -> Self {
        VelocityField { c, kind: FieldKind::RotationKilling { kappa } }
    }

    pub fn constant(c: f64, beta: Vector3<f64>) -> Result<Self> {
        if !(beta.norm() < 1.0) {
            return Err(Error::Superluminal(beta.norm()));
        }
        Ok(VelocityField { c, kind: FieldKind::Constant { beta } })
    }

    pub fn irrotational(worldline: WorldLine, tau_range: (f64, f64)) -> Self {
        let c = worldline.c();
        VelocityField {
            c,
            kind: FieldKind::WorldlineIrrotational(Arc::new(IrrotationalField {
                worldline,
                tau_range,
                warm: Mutex::new(None),
            })),
        }
    }

    pub fn custom(c: f64, field: CustomField) -> Self {
        VelocityField { c, kind: FieldKind::Custom(field) }
    }

    /// Normalization of `(1, lambda x, 0, 0)`: an expanding flow that is not rigid.
    pub fn shear_witness(c: f64, lambda: f64) -> Self {
        let jac = move |x: &V4| {
            let v = V4::new(1.0, lambda * x[1], 0.0, 0.0);
            let mut dv = M4::zeros();
            dv[(1, 1)] = lambda;
            normalize(c, v, dv)
        };
        let jac2 = jac;
        Self::custom(
            c,
            CustomField {
                name: format!("shear(lambda = {lambda})"),
                u: Arc::new(move |x| jac(x).map(|p| p.0)),
                jacobian: Some(Arc::new(move |x| jac2(x).map(|p| p.1))),
            },
        )
    }

    /// Parses `boost`, `rotation:kappa`, `constant:bx,by,bz`, `shear:lambda`
    /// or `worldline:<worldline form>`.
    pub fn parse(spec: &str, c: f64) -> Result<Self> {
        let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
        let nums = || -> Result<Vec<f64>> {
            args.split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{s}: {e}"))))
                .collect()
        };
        match name {
            "boost" => Ok(Self::boost_killing(c)),
            "rotation" => {
                let v = nums()?;
                Ok(Self::rotation_killing(c, v[0]))
            }
            "constant" => {
                let v = nums()?;
                if v.len() != 3 {
                    return Err(Error::Parse("constant expects 3 numbers".into()));
                }
                Self::constant(c, Vector3::new(v[0], v[1], v[2]))
            }
            "shear" => Ok(Self::shear_witness(c, nums()?[0])),
            "worldline" => Ok(Self::irrotational(WorldLine::parse(args, c)?, (-20.0, 20.0))),
            _ => Err(Error::Parse(format!("unknown field form '{name}'"))),
        }
    }

    pub fn u(&self, x: &V4) -> Result<V4> {
        Ok(self.u_and_jacobian(x)?.0)
    }

    /// Field value and Jacobian; finite differences when no analytic
    /// Jacobian is known.
    pub fn u_and_jacobian(&self, x: &V4) -> Result<(V4, M4)> {
        let c = self.c;
        match &self.kind {
            FieldKind::BoostKilling => {
                if !(x[1] > x[0].abs()) {
                    return Err(Error::OutsideDomain);
                }
                let k = V4::new(x[1], x[0], 0.0, 0.0);
                let mut dk = M4::zeros();
                dk[(0, 1)] = 1.0;
                dk[(1, 0)] = 1.0;
                normalize(c, k, dk).ok_or(Error::OutsideDomain)
            }
            FieldKind::RotationKilling { kappa } => {
                let rho2 = x[1] * x[1] + x[2] * x[2];
                if !(kappa * kappa * rho2 < c * c) {
                    return Err(Error::OutsideDomain);
                }
                let k = V4::new(c, -kappa * x[2], kappa * x[1], 0.0);
                let mut dk = M4::zeros();
                dk[(1, 2)] = *kappa;
                dk[(2, 1)] = -kappa;
                normalize(c, k, dk).ok_or(Error::OutsideDomain)
            }
            FieldKind::Constant { beta } => {
                let g = 1.0 / (1.0 - beta.norm_squared()).sqrt();
                Ok((V4::new(c * g, c * g * beta[0], c * g * beta[1], c * g * beta[2]), M4::zeros()))
            }
            FieldKind::WorldlineIrrotational(f) => {
                let (sigma, n) = f.sigma(x)?;
                let j = f.worldline.jet(sigma);
                // d sigma = z'_flat / (c^2 N)
                let dsigma = flat(&j.dz) / (c * c * n);
                Ok((j.dz, dsigma * j.ddz.transpose()))
            }
            FieldKind::Custom(f) => {
                let u = (f.u)(x).ok_or(Error::OutsideDomain)?;
                let jac = match &f.jacobian {
                    Some(jf) => jf(x).ok_or(Error::OutsideDomain)?,
                    None => fd_jacobian(&|y| (f.u)(y).ok_or(Error::OutsideDomain), x, DEFAULT_FD_STEP)?,
                };
                Ok((u, jac))
            }
        }
    }
}

fn fd_offset(x: &V4, mu: usize, step: f64) -> f64 {
    step * x[mu].abs().max(1.0)
}

/// Central-difference Jacobian `J[(mu, nu)] = d_mu f^nu`.
pub fn fd_jacobian(f: &dyn Fn(&V4) -> Result<V4>, x: &V4, step: f64) -> Result<M4> {
    let mut j = M4::zeros();
    for mu in 0..4 {
        let h = fd_offset(x, mu, step);
        let mut xp = *x;
        let mut xm = *x;
        xp[mu] += h;
        xm[mu] -= h;
        let d = (f(&xp)? - f(&xm)?) / (2.0 * h);
        j.set_row(mu, &d.transpose());
    }
    Ok(j)
}

/// Central-difference partials `d_mu S` of a tensor-valued function.
fn fd_partials(f: &dyn Fn(&V4) -> Result<M4>, x: &V4, step: f64) -> Result<[M4; 4]> {
    let mut out = [M4::zeros(); 4];
    for (mu, o) in out.iter_mut().enumerate() {
        let h = fd_offset(x, mu, step);
        let mut xp = *x;
        let mut xm = *x;
        xp[mu] += h;
        xm[mu] -= h;
        *o = (f(&xp)? - f(&xm)?) / (2.0 * h);
    }
    Ok(out)
}

/// `(L_W S)_{mu nu} = W^a d_a S_{mu nu} + S_{a nu} d_mu W^a + S_{mu a} d_nu W^a`.
pub fn lie_derivative_2tensor(
    w: &dyn Fn(&V4) -> Result<V4>,
    s: &dyn Fn(&V4) -> Result<M4>,
    x: &V4,
    step: f64,
) -> Result<M4> {
    let wx = w(x)?;
    let jw = fd_jacobian(w, x, step)?;
    let ds = fd_partials(s, x, step)?;
    let sx = s(x)?;
    let mut out = jw * sx + sx * jw.transpose();
    for (a, d) in ds.iter().enumerate() {
        out += d * wx[a];
    }
    Ok(out)
}

/// `(L_W alpha)_nu = W^mu d_mu alpha_nu + alpha_mu d_nu W^mu`.
pub fn lie_derivative_covector(
    w: &dyn Fn(&V4) -> Result<V4>,
    alpha: &dyn Fn(&V4) -> Result<V4>,
    x: &V4,
    step: f64,
) -> Result<V4> {
    let wx = w(x)?;
    let jw = fd_jacobian(w, x, step)?;
    let da = fd_jacobian(alpha, x, step)?;
    Ok(jw * alpha(x)? + da.transpose() * wx)
}

/// Expansion/shear `theta`, vorticity `omega` and acceleration `a` at a point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Kinematics {
    pub point: [f64; 4],
    pub theta: M4,
    pub omega: M4,
    /// contravariant `a = nabla_u u`
    pub accel: V4,
    /// `|nabla u_flat - theta - omega - u_flat (x) a_flat / c^2|_inf`
    pub reconstruction_residual: f64,
}

impl Kinematics {
    pub fn accel_norm(&self) -> f64 {
        (-mdot(&self.accel, &self.accel)).max(0.0).sqrt()
    }
}

/// Horizontal projector `P[(a, mu)] = delta - u^a u_mu / c^2`.
pub fn horizontal_projector(u: &V4, c: f64) -> M4 {
    M4::identity() - u * flat(u).transpose() / (c * c)
}

pub fn horizontal_metric(u: &V4, c: f64) -> M4 {
    let uf = flat(u);
    uf * uf.transpose() / (c * c) - eta()
}

fn kinematics_from(u: &V4, jac: &M4, c: f64, x: &V4) -> Kinematics {
    // (nabla u_flat)_{mu nu} = d_mu u_nu
    let t = jac * eta();
    let p = horizontal_projector(u, c);
    let tp = p.transpose() * t * p;
    let theta = (tp + tp.transpose()) * 0.5;
    let omega = (tp - tp.transpose()) * 0.5;
    let accel = jac.transpose() * u;
    let recon = t - theta - omega - flat(u) * flat(&accel).transpose() / (c * c);
    Kinematics { point: [x[0], x[1], x[2], x[3]], theta, omega, accel, reconstruction_residual: recon.amax() }
}

pub fn decompose_kinematics(f: &VelocityField, x: &V4) -> Result<Kinematics> {
    let (u, jac) = f.u_and_jacobian(x)?;
    Ok(kinematics_from(&u, &jac, f.c, x))
}

/// Same, with the Jacobian always taken by central differences.
pub fn decompose_kinematics_fd(f: &VelocityField, x: &V4, step: f64) -> Result<Kinematics> {
    let u = f.u(x)?;
    let jac = fd_jacobian(&|y| f.u(y), x, step)?;
    Ok(kinematics_from(&u, &jac, f.c, x))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BornReport {
    /// `|L_u h|_inf` by finite differences of `h`
    pub direct: f64,
    /// `2 |theta|_inf`
    pub via_theta: f64,
    /// `|L_u h + 2 theta|_inf`
    pub agreement: f64,
}

pub fn born_residual(f: &VelocityField, x: &V4, step: f64) -> Result<BornReport> {
    born_residual_scaled(f, &|_| 1.0, x, step)
}

/// Rigidity test for the flow of `phi u`: the scalar factor changes the
/// size of `L h` but not where it vanishes.
pub fn born_residual_scaled(f: &VelocityField, phi: &dyn Fn(&V4) -> f64, x: &V4, step: f64) -> Result<BornReport> {
    let c = f.c;
    let w = |y: &V4| Ok(f.u(y)? * phi(y));
    let h = |y: &V4| Ok(horizontal_metric(&f.u(y)?, c));
    let lh = lie_derivative_2tensor(&w, &h, x, step)?;
    let k = decompose_kinematics(f, x)?;
    let via_theta = 2.0 * k.theta.amax() * phi(x);
    Ok(BornReport { direct: lh.amax(), via_theta, agreement: (lh + k.theta * (2.0 * phi(x))).amax() })
}

/// `|L_u omega|_inf` by finite differences.
pub fn vorticity_transport_residual(f: &VelocityField, x: &V4, step: f64) -> Result<f64> {
    let w = |y: &V4| f.u(y);
    let om = |y: &V4| Ok(decompose_kinematics(f, y)?.omega);
    Ok(lie_derivative_2tensor(&w, &om, x, step)?.amax())
}

/// `|d a_flat|_inf` by finite differences (zero when `a_flat` is exact).
pub fn accel_exterior_derivative(f: &VelocityField, x: &V4, step: f64) -> Result<f64> {
    let a = |y: &V4| Ok(flat(&decompose_kinematics(f, y)?.accel));
    let da = fd_jacobian(&a, x, step)?;
    Ok((da - da.transpose()).amax())
}

impl IrrotationalField {
    /// `sigma(x)` solving `z'(s).(x - z(s)) = 0`, and `N = 1 - z''.(x - z)/c^2`.
    pub fn sigma(&self, x: &V4) -> Result<(f64, f64)> {
        let c = self.worldline.c();
        let f = |s: f64| {
            let j = self.worldline.jet(s);
            let d = x - j.z;
            (mdot(&j.dz, &d), mdot(&j.ddz, &d) - c * c)
        };
        let start = match *self.warm.lock().unwrap() {
            Some(s) => s,
            None => {
                let (lo, hi) = self.tau_range;
                let n = 400;
                (0..=n)
                    .map(|i| lo + (hi - lo) * i as f64 / n as f64)
                    .min_by(|a, b| f(*a).0.abs().partial_cmp(&f(*b).0.abs()).unwrap())
                    .unwrap()
            }
        };
        let mut s = start;
        let tol = 1e-12 * c * c * x.amax().max(1.0);
        let mut converged = false;
        for _ in 0..50 {
            let (v, dv) = f(s);
            if !v.is_finite() || !dv.is_finite() || dv == 0.0 {
                break;
            }
            let step = v / dv;
            s -= step;
            if v.abs() <= tol || step.abs() <= 1e-15 * s.abs().max(1.0) {
                converged = f(s).0.abs() <= tol.max(1e-9 * c * c);
                break;
            }
        }
        if !converged {
            *self.warm.lock().unwrap() = None;
            return Err(Error::NoConvergence);
        }
        let j = self.worldline.jet(s);
        let n = 1.0 - mdot(&j.ddz, &(x - j.z)) / (c * c);
        if !(n > 0.0) {
            return Err(Error::OutsideDomain);
        }
        *self.warm.lock().unwrap() = Some(s);
        Ok((s, n))
    }

    /// Acceleration one-form `a_flat = z''_flat(sigma) / N`.
    pub fn accel_flat(&self, x: &V4) -> Result<V4> {
        let (s, n) = self.sigma(x)?;
        Ok(flat(&self.worldline.jet(s).ddz) / n)
    }

    /// Closed forms of `L_u a_flat`: the full expression
    /// `(P_h z''')_flat / N^2 + z''_flat (z'''.(x - z)) / (c^2 N^3)` and the
    /// leading term alone, which agrees with it where `z'''.(x - z) = 0`.
    pub fn lie_accel_closed_form(&self, x: &V4) -> Result<(V4, V4)> {
        let c = self.worldline.c();
        let (s, n) = self.sigma(x)?;
        let j = self.worldline.jet(s);
        let ph = j.dddz - j.dz * (mdot(&j.dz, &j.dddz) / (c * c));
        let lead = flat(&ph) / (n * n);
        let extra = flat(&j.ddz) * (mdot(&j.dddz, &(x - j.z)) / (c * c * n * n * n));
        Ok((lead + extra, lead))
    }
}

/// `L_u a_flat` by finite differences for an irrotational field.
pub fn lie_accel_fd(f: &VelocityField, x: &V4, step: f64) -> Result<V4> {
    let FieldKind::WorldlineIrrotational(irr) = &f.kind else {
        return Err(Error::Precondition("field is not built from a worldline".into()));
    };
    let w = |y: &V4| f.u(y);
    let a = |y: &V4| irr.accel_flat(y);
    lie_derivative_covector(&w, &a, x, step)
}

/// Point reached at proper time `tau` on the boost orbit through `(0, x0)`.
pub fn boost_flow(x0: f64, tau: f64, c: f64) -> Result<V4> {
    if !(x0 > 0.0) {
        return Err(Error::Precondition("x0 must be positive".into()));
    }
    let r = c * tau / x0;
    Ok(V4::new(x0 * r.sinh(), x0 * r.cosh(), 0.0, 0.0))
}

/// `lambda = atanh(ct / x)` on `|ct| < x`.
pub fn killing_time(ct: f64, x: f64) -> Result<f64> {
    if !(ct.abs() < x) {
        return Err(Error::OutsideDomain);
    }
    Ok((ct / x).atanh())
}

/// Proper time for the orbit through `x0` to reach speed `v`.
pub fn eigentime_to_speed(v: f64, x0: f64, c: f64) -> Result<f64> {
    if !(x0 > 0.0) {
        return Err(Error::Precondition("x0 must be positive".into()));
    }
    if !(v.abs() < c) {
        return Err(Error::Superluminal(v.abs() / c));
    }
    Ok(x0 / c * (v / c).atanh())
}

/// Residual table for a field at sample points.
#[derive(Clone, Debug, Serialize)]
pub struct FieldReportRow {
    pub point: [f64; 4],
    pub normalization: f64,
    pub theta: f64,
    pub omega: f64,
    pub accel_norm: f64,
    pub born_direct: f64,
    pub born_via_theta: f64,
    pub vorticity_transport: f64,
}

pub fn field_report(f: &VelocityField, points: &[V4], step: f64) -> Result<Vec<FieldReportRow>> {
    points
        .iter()
        .map(|x| {
            let u = f.u(x)?;
            let k = decompose_kinematics(f, x)?;
            let b = born_residual(f, x, step)?;
            Ok(FieldReportRow {
                point: k.point,
                normalization: (mdot(&u, &u) - f.c * f.c).abs(),
                theta: k.theta.amax(),
                omega: k.omega.amax(),
                accel_norm: k.accel_norm(),
                born_direct: b.direct,
                born_via_theta: b.via_theta,
                vorticity_transport: vorticity_transport_residual(f, x, step)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boost_field_acceleration() {
        let c = 2.0;
        let f = VelocityField::boost_killing(c);
        let k = decompose_kinematics(&f, &V4::new(0.0, 1.5, 0.3, 0.0)).unwrap();
        assert!(k.theta.amax() < 1e-14 && k.omega.amax() < 1e-14);
        assert!((k.accel_norm() - c * c / 1.5).abs() < 1e-12);
        assert!(k.reconstruction_residual < 1e-13);
        assert!(f.u(&V4::new(2.0, 1.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn rotation_field_vortical() {
        let c = 1.0;
        let kappa = 0.5;
        let f = VelocityField::rotation_killing(c, kappa);
        let x = V4::new(0.3, 0.6, 0.8, 0.1);
        let k = decompose_kinematics(&f, &x).unwrap();
        assert!(k.theta.amax() < 1e-14);
        assert!(k.omega.amax() > 0.1);
    }

    #[test]
    fn constant_field_trivial() {
        let f = VelocityField::constant(1.0, Vector3::new(0.1, 0.2, 0.0)).unwrap();
        let k = decompose_kinematics(&f, &V4::new(1.0, 2.0, 3.0, 4.0)).unwrap();
        assert_eq!(k.theta, M4::zeros());
        assert_eq!(k.accel, V4::zeros());
    }

    #[test]
    fn flow_helpers() {
        assert_eq!(boost_flow(2.0, 0.0, 1.0).unwrap(), V4::new(0.0, 2.0, 0.0, 0.0));
        assert_eq!(eigentime_to_speed(0.0, 1.0, 1.0).unwrap(), 0.0);
        assert!((eigentime_to_speed(0.6, 1.0, 1.0).unwrap() - 0.6f64.atanh()).abs() < 1e-15);
        assert!(killing_time(2.0, 1.0).is_err());
        assert!(boost_flow(-1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn straight_worldline_gives_constant_field() {
        let wl = WorldLine::straight(1.0, V4::zeros(), [0.3, 0.0, 0.1]).unwrap();
        let f = VelocityField::irrotational(wl.clone(), (-10.0, 10.0));
        let u0 = wl.jet(0.0).dz;
        for x in [V4::new(1.0, 2.0, 0.0, 0.0), V4::new(-3.0, 0.5, 1.0, 2.0)] {
            assert!((f.u(&x).unwrap() - u0).amax() < 1e-14);
        }
    }
}
