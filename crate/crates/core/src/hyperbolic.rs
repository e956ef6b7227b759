//! Velocity space as the hyperboloid of four-velocities: radial charts,
//! rapidity distance, the hyperbolic cosine law, Fermi-Walker transport and
//! hodograph holonomy.

use nalgebra::{Matrix3, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz;
use crate::velocity;
use crate::worldline::{mdot, CubicSpline, WorldLine};

/// Default number of RK4 steps per loop.
pub const DEFAULT_STEPS: usize = 2000;
/// Endpoint tolerance (four-velocity components, units of c) for closed loops.
pub const CLOSED_LOOP_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicPoint {
    pub beta: Vector3<f64>,
    pub c: f64,
}

impl HyperbolicPoint {
    pub fn new(beta: Vector3<f64>, c: f64) -> Result<Self> {
        lorentz::check_subluminal(&beta)?;
        Ok(HyperbolicPoint { beta, c })
    }

    /// `u = c gamma (1, beta)`.
    pub fn four_velocity(&self) -> Vector4<f64> {
        let g = lorentz::gamma(&self.beta);
        Vector4::new(1.0, self.beta[0], self.beta[1], self.beta[2]) * (self.c * g)
    }
}

pub fn rapidity(beta: f64) -> Result<f64> {
    if !(beta.abs() < 1.0) {
        return Err(Error::Superluminal(beta.abs()));
    }
    Ok(beta.atanh())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChartKind {
    /// speed `beta` in `[0, 1)`
    Beta,
    /// `R = beta / sqrt(1 - beta^2)` in `[0, inf)`
    BigR,
    /// `r = beta / (1 + sqrt(1 - beta^2))` in `[0, 1)`
    SmallR,
    /// rapidity in `[0, inf)`
    Rho,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialChart {
    pub kind: ChartKind,
    pub value: f64,
    pub theta: f64,
    pub phi: f64,
}

fn check_range(kind: ChartKind, x: f64) -> Result<()> {
    let ok = match kind {
        ChartKind::Beta | ChartKind::SmallR => (0.0..1.0).contains(&x),
        ChartKind::BigR | ChartKind::Rho => x >= 0.0 && x.is_finite(),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{kind:?} value {x} out of range")))
    }
}

fn convert_radial(kind: ChartKind, x: f64, target: ChartKind) -> f64 {
    use ChartKind::*;
    match (kind, target) {
        (a, b) if a == b => x,
        (SmallR, BigR) => 2.0 * x / (1.0 - x * x),
        (BigR, SmallR) => x / (1.0 + (1.0 + x * x).sqrt()),
        (Beta, BigR) => x / (1.0 - x * x).sqrt(),
        (Beta, SmallR) => x / (1.0 + (1.0 - x * x).sqrt()),
        (Beta, Rho) => x.atanh(),
        (BigR, Rho) => x.asinh(),
        (SmallR, Rho) => 2.0 * x.atanh(),
        (BigR, Beta) => x / (1.0 + x * x).sqrt(),
        (SmallR, Beta) => 2.0 * x / (1.0 + x * x),
        (Rho, Beta) => x.tanh(),
        (Rho, BigR) => x.sinh(),
        (Rho, SmallR) => (0.5 * x).tanh(),
        _ => unreachable!(),
    }
}

pub fn chart_convert(x: &RadialChart, target: ChartKind) -> Result<RadialChart> {
    check_range(x.kind, x.value)?;
    Ok(RadialChart { kind: target, value: convert_radial(x.kind, x.value, target), ..*x })
}

/// `ds^2 = gamma^4 |d beta_par|^2 + gamma^2 |d beta_perp|^2`.
pub fn metric_eval(beta: &Vector3<f64>, dbeta: &Vector3<f64>) -> Result<f64> {
    lorentz::check_subluminal(beta)?;
    let g2 = 1.0 / (1.0 - beta.norm_squared());
    let b2 = beta.norm_squared();
    let (par2, perp2) = if b2 == 0.0 {
        (0.0, dbeta.norm_squared())
    } else {
        let p = beta.dot(dbeta);
        let par2 = p * p / b2;
        (par2, (dbeta.norm_squared() - par2).max(0.0))
    };
    Ok(g2 * g2 * par2 + g2 * perp2)
}

/// Line element of the radial chart `kind` for radial increment `dx` and
/// squared angular increment `domega2`.
pub fn line_element(kind: ChartKind, x: f64, dx: f64, domega2: f64) -> f64 {
    match kind {
        ChartKind::Beta => {
            let q = 1.0 - x * x;
            dx * dx / (q * q) + x * x / q * domega2
        }
        ChartKind::BigR => dx * dx / (1.0 + x * x) + x * x * domega2,
        ChartKind::SmallR => {
            let q = 1.0 - x * x;
            4.0 / (q * q) * (dx * dx + x * x * domega2)
        }
        ChartKind::Rho => dx * dx + x.sinh().powi(2) * domega2,
    }
}

/// `d(chart value)/d beta` at speed `beta`.
pub fn chart_derivative(kind: ChartKind, beta: f64) -> f64 {
    let s = (1.0 - beta * beta).sqrt();
    match kind {
        ChartKind::Beta => 1.0,
        ChartKind::BigR => 1.0 / (s * s * s),
        ChartKind::SmallR => 1.0 / (s * (1.0 + s)),
        ChartKind::Rho => 1.0 / (s * s),
    }
}

/// Rapidity distance between two velocities (rescaled metric `c^-2 h_c`).
pub fn geodesic_distance(b1: &Vector3<f64>, b2: &Vector3<f64>) -> Result<f64> {
    lorentz::check_subluminal(b1)?;
    lorentz::check_subluminal(b2)?;
    rapidity(velocity::relative_speed(b1, b2))
}

/// Third side of a hyperbolic triangle, `cosh r3 = cosh r1 cosh r2 + sinh r1 sinh r2 cos phi`,
/// evaluated through half-angle squares to keep small results accurate.
pub fn hyperbolic_cosine_law(r1: f64, r2: f64, phi: f64) -> Result<f64> {
    if !(r1 >= 0.0 && r2 >= 0.0) {
        return Err(Error::Precondition("rapidities must be non-negative".into()));
    }
    if !(0.0..=std::f64::consts::PI).contains(&phi) {
        return Err(Error::Precondition(format!("angle {phi} outside [0, pi]")));
    }
    let sp = (0.5 * (r1 + r2)).sinh();
    let sm = (0.5 * (r1 - r2)).sinh();
    let (ch, sh) = ((0.5 * phi).cos(), (0.5 * phi).sin());
    let s2 = sp * sp * ch * ch + sm * sm * sh * sh;
    Ok(2.0 * s2.sqrt().asinh())
}

fn rk4<const N: usize>(
    y: &mut [Vector4<f64>; N],
    t: f64,
    h: f64,
    f: &impl Fn(f64, &Vector4<f64>) -> Vector4<f64>,
) {
    for x in y.iter_mut() {
        let k1 = f(t, x);
        let k2 = f(t + 0.5 * h, &(*x + k1 * (0.5 * h)));
        let k3 = f(t + 0.5 * h, &(*x + k2 * (0.5 * h)));
        let k4 = f(t + h, &(*x + k3 * h));
        *x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
}

/// Fermi-Walker transport of `x0` along `wl` from `tau0` to `tau1`.
pub fn fermi_walker_transport(
    wl: &WorldLine,
    x0: &Vector4<f64>,
    tau0: f64,
    tau1: f64,
    steps: usize,
) -> Result<Vector4<f64>> {
    if steps == 0 {
        return Err(Error::Precondition("step count must be positive".into()));
    }
    let c2 = wl.c() * wl.c();
    let rhs = |t: f64, x: &Vector4<f64>| {
        let j = wl.jet(t);
        (j.ddz * mdot(&j.dz, x) - j.dz * mdot(&j.ddz, x)) / c2
    };
    let h = (tau1 - tau0) / steps as f64;
    let mut y = [*x0];
    for k in 0..steps {
        rk4(&mut y, tau0 + k as f64 * h, h, &rhs);
    }
    if !y[0].iter().all(|v| v.is_finite()) {
        return Err(Error::Precondition(format!("integration diverged along {}", wl.name())));
    }
    Ok(y[0])
}

/// A curve of four-velocities.
#[derive(Clone, Debug)]
pub enum Hodograph {
    /// `beta(s) = beta (cos omega s, sin omega s, 0)`, one period.
    Circular { beta: f64, omega: f64, c: f64 },
    /// Cubic-spline interpolation of `(s, beta)` samples.
    Sampled { splines: [CubicSpline; 3], c: f64 },
}

impl Hodograph {
    pub fn circular(beta: f64, omega: f64, c: f64) -> Result<Self> {
        if !(beta.abs() < 1.0) {
            return Err(Error::Superluminal(beta.abs()));
        }
        if omega == 0.0 {
            return Err(Error::Precondition("omega must be nonzero".into()));
        }
        Ok(Hodograph::Circular { beta, omega, c })
    }

    pub fn sampled(samples: &[(f64, [f64; 3])], c: f64) -> Result<Self> {
        for (_, b) in samples {
            lorentz::check_subluminal(&Vector3::from(*b))?;
        }
        let s: Vec<f64> = samples.iter().map(|x| x.0).collect();
        let comp = |i: usize| CubicSpline::new(s.clone(), samples.iter().map(|x| x.1[i]).collect());
        Ok(Hodograph::Sampled { splines: [comp(0)?, comp(1)?, comp(2)?], c })
    }

    /// Parses `circular:beta,omega`.
    pub fn parse(spec: &str, c: f64) -> Result<Self> {
        let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
        let nums: Vec<f64> = args
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{s}: {e}"))))
            .collect::<Result<_>>()?;
        match (name, nums.as_slice()) {
            ("circular", [b, w]) => Self::circular(*b, *w, c),
            _ => Err(Error::Parse(format!("unknown hodograph form '{spec}'"))),
        }
    }

    pub fn c(&self) -> f64 {
        match self {
            Hodograph::Circular { c, .. } | Hodograph::Sampled { c, .. } => *c,
        }
    }

    pub fn range(&self) -> (f64, f64) {
        match self {
            Hodograph::Circular { omega, .. } => (0.0, 2.0 * std::f64::consts::PI / omega.abs()),
            Hodograph::Sampled { splines, .. } => splines[0].range(),
        }
    }

    /// Velocity and its parameter derivative.
    pub fn beta(&self, s: f64) -> (Vector3<f64>, Vector3<f64>) {
        match self {
            Hodograph::Circular { beta, omega, .. } => {
                let (sn, cs) = ((omega * s).sin(), (omega * s).cos());
                (
                    Vector3::new(beta * cs, beta * sn, 0.0),
                    Vector3::new(-beta * omega * sn, beta * omega * cs, 0.0),
                )
            }
            Hodograph::Sampled { splines, .. } => {
                let e: Vec<(f64, f64, f64)> = splines.iter().map(|sp| sp.eval(s)).collect();
                (Vector3::new(e[0].0, e[1].0, e[2].0), Vector3::new(e[0].1, e[1].1, e[2].1))
            }
        }
    }

    /// Four-velocity `u` and `du/ds`.
    pub fn u(&self, s: f64) -> (Vector4<f64>, Vector4<f64>) {
        let c = self.c();
        let (b, db) = self.beta(s);
        let g = lorentz::gamma(&b);
        let dg = g * g * g * b.dot(&db);
        let u = Vector4::new(1.0, b[0], b[1], b[2]) * (c * g);
        let du = Vector4::new(dg, dg * b[0] + g * db[0], dg * b[1] + g * db[1], dg * b[2] + g * db[2]) * c;
        (u, du)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Holonomy {
    /// Net rotation of the transported frame, `X_j(end) = sum_i R_ij X_i(start)`.
    pub rotation: Matrix3<f64>,
    /// Signed angle about the `z` axis of the rest frame at the start point.
    pub angle_z: f64,
}

/// Parallel transport of an orthonormal tangent frame around a closed
/// hodograph, `dX/ds = -u (X . du/ds)/c^2`, repeated `laps` times.
pub fn hodograph_holonomy(h: &Hodograph, steps: usize, laps: usize) -> Result<Holonomy> {
    if steps == 0 || laps == 0 {
        return Err(Error::Precondition("steps and laps must be positive".into()));
    }
    let c = h.c();
    let (s0, s1) = h.range();
    let (ua, _) = h.u(s0);
    let (ub, _) = h.u(s1);
    let gap = (ua - ub).amax() / c;
    if gap > CLOSED_LOOP_TOL {
        return Err(Error::OpenLoop(gap));
    }
    let b0 = lorentz::boost_unchecked(&h.beta(s0).0);
    let frame0: [Vector4<f64>; 3] = [
        b0.column(1).into_owned(),
        b0.column(2).into_owned(),
        b0.column(3).into_owned(),
    ];
    let rhs = |s: f64, x: &Vector4<f64>| {
        let (u, du) = h.u(s);
        -u * (mdot(x, &du) / (c * c))
    };
    let dt = (s1 - s0) / steps as f64;
    let mut y = frame0;
    for _ in 0..laps {
        for k in 0..steps {
            rk4(&mut y, s0 + k as f64 * dt, dt, &rhs);
        }
    }
    let rotation = Matrix3::from_fn(|i, j| -mdot(&frame0[i], &y[j]));
    let angle_z = velocity::rotation_angle_about(&rotation, &Vector3::z());
    Ok(Holonomy { rotation, angle_z })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn chart_values() {
        let b = RadialChart { kind: ChartKind::Beta, value: 0.6, theta: 0.0, phi: 0.0 };
        assert!((chart_convert(&b, ChartKind::BigR).unwrap().value - 0.75).abs() < 1e-15);
        assert!((chart_convert(&b, ChartKind::SmallR).unwrap().value - 1.0 / 3.0).abs() < 1e-16);
        let z = RadialChart { value: 0.0, ..b };
        for k in [ChartKind::BigR, ChartKind::SmallR, ChartKind::Rho] {
            assert_eq!(chart_convert(&z, k).unwrap().value, 0.0);
        }
        assert!(chart_convert(&RadialChart { value: 1.0, ..b }, ChartKind::Rho).is_err());
        assert!(rapidity(1.0).is_err());
    }

    #[test]
    fn metric_special_cases() {
        let d = Vector3::new(0.01, -0.02, 0.03);
        assert!((metric_eval(&Vector3::zeros(), &d).unwrap() - d.norm_squared()).abs() < 1e-18);
        let b = Vector3::new(0.6, 0.0, 0.0);
        let dr = Vector3::new(0.01, 0.0, 0.0);
        assert!((metric_eval(&b, &dr).unwrap() - 1.25f64.powi(4) * 1e-4).abs() < 1e-16);
    }

    #[test]
    fn cosine_law_degenerate_angles() {
        let (a, b) = (0.7, 1.3);
        assert!((hyperbolic_cosine_law(a, b, 0.0).unwrap() - (a + b)).abs() < 1e-14);
        assert!(hyperbolic_cosine_law(a, a, PI).unwrap().abs() < 1e-15);
        assert!((hyperbolic_cosine_law(a, b, PI).unwrap() - (b - a)).abs() < 1e-14);
    }

    #[test]
    fn geodesic_basics() {
        let b = Vector3::new(0.2, -0.1, 0.4);
        assert_eq!(geodesic_distance(&b, &b).unwrap(), 0.0);
        let d = geodesic_distance(&Vector3::zeros(), &Vector3::new(0.6, 0.0, 0.0)).unwrap();
        assert!((d - 0.6f64.atanh()).abs() < 1e-15);
    }

    #[test]
    fn inertial_transport_is_constant() {
        let wl = WorldLine::straight(1.0, Vector4::zeros(), [0.3, 0.0, 0.1]).unwrap();
        let x = Vector4::new(0.2, 1.0, -0.5, 0.3);
        assert!((fermi_walker_transport(&wl, &x, 0.0, 5.0, 100).unwrap() - x).amax() < 1e-14);
    }

    #[test]
    fn point_hodograph_has_trivial_holonomy() {
        let samples: Vec<(f64, [f64; 3])> = (0..5).map(|i| (i as f64, [0.3, 0.1, 0.0])).collect();
        let h = Hodograph::sampled(&samples, 1.0).unwrap();
        let hol = hodograph_holonomy(&h, 200, 1).unwrap();
        assert!((hol.rotation - Matrix3::identity()).amax() < 1e-13);
    }

    #[test]
    fn open_loop_rejected() {
        let samples: Vec<(f64, [f64; 3])> = (0..5).map(|i| (i as f64, [0.1 * i as f64, 0.0, 0.0])).collect();
        let h = Hodograph::sampled(&samples, 1.0).unwrap();
        assert!(matches!(hodograph_holonomy(&h, 100, 1), Err(Error::OpenLoop(_))));
    }
}
