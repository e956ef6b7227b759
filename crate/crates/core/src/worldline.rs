//! Timelike worldlines parameterized by proper time, and a cubic spline used
//! for sampled input.

use std::sync::Arc;

use nalgebra::Vector4;

use crate::error::{Error, Result};

/// Position and its first three proper-time derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub z: Vector4<f64>,
    pub dz: Vector4<f64>,
    pub ddz: Vector4<f64>,
    pub dddz: Vector4<f64>,
}

type JetFn = dyn Fn(f64) -> Jet + Send + Sync;

/// A worldline `tau -> z(tau)` with `z^0 = ct` and `dz.dz = c^2`.
#[derive(Clone)]
pub struct WorldLine {
    c: f64,
    name: String,
    jet: Arc<JetFn>,
}

impl std::fmt::Debug for WorldLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "WorldLine({}, c = {})", self.name, self.c)
    }
}

/// Minkowski product with `x^0 = ct`.
pub fn mdot(a: &Vector4<f64>, b: &Vector4<f64>) -> f64 {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
}

/// Index lowering `diag(1,-1,-1,-1)`.
pub fn flat(a: &Vector4<f64>) -> Vector4<f64> {
    Vector4::new(a[0], -a[1], -a[2], -a[3])
}

impl WorldLine {
    pub fn from_fn(c: f64, name: &str, f: impl Fn(f64) -> Jet + Send + Sync + 'static) -> Self {
        WorldLine { c, name: name.to_string(), jet: Arc::new(f) }
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn jet(&self, tau: f64) -> Jet {
        (self.jet)(tau)
    }

    /// Inertial motion through `x0` with velocity `beta`.
    pub fn straight(c: f64, x0: Vector4<f64>, beta: [f64; 3]) -> Result<Self> {
        let b2 = beta.iter().map(|b| b * b).sum::<f64>();
        if b2 >= 1.0 {
            return Err(Error::Superluminal(b2.sqrt()));
        }
        let g = 1.0 / (1.0 - b2).sqrt();
        let u = Vector4::new(c * g, c * g * beta[0], c * g * beta[1], c * g * beta[2]);
        Ok(Self::from_fn(c, "straight", move |t| Jet {
            z: x0 + u * t,
            dz: u,
            ddz: Vector4::zeros(),
            dddz: Vector4::zeros(),
        }))
    }

    /// Uniform acceleration `c^2/x0` along x, through `(0, x0)` at `tau = 0`.
    pub fn hyperbolic(c: f64, x0: f64) -> Result<Self> {
        if !(x0 > 0.0) {
            return Err(Error::Precondition("x0 must be positive".into()));
        }
        Ok(Self::from_fn(c, "hyperbolic", move |t| {
            let (s, ch) = ((c * t / x0).sinh(), (c * t / x0).cosh());
            let k = c / x0;
            Jet {
                z: Vector4::new(x0 * s, x0 * ch, 0.0, 0.0),
                dz: Vector4::new(c * ch, c * s, 0.0, 0.0),
                ddz: Vector4::new(c * k * s, c * k * ch, 0.0, 0.0),
                dddz: Vector4::new(c * k * k * ch, c * k * k * s, 0.0, 0.0),
            }
        }))
    }

    /// Circle of radius `r` in the x-y plane, coordinate angular velocity `omega`.
    pub fn circular(c: f64, r: f64, omega: f64) -> Result<Self> {
        let v = r * omega;
        if !(v.abs() < c) {
            return Err(Error::Superluminal(v.abs() / c));
        }
        let g = 1.0 / (1.0 - (v / c).powi(2)).sqrt();
        let w = omega * g;
        Ok(Self::from_fn(c, "circular", move |t| {
            let (s, co) = ((w * t).sin(), (w * t).cos());
            Jet {
                z: Vector4::new(c * g * t, r * co, r * s, 0.0),
                dz: Vector4::new(c * g, -r * w * s, r * w * co, 0.0),
                ddz: Vector4::new(0.0, -r * w * w * co, -r * w * w * s, 0.0),
                dddz: Vector4::new(0.0, r * w * w * w * s, -r * w * w * w * co, 0.0),
            }
        }))
    }

    /// Linear motion with rapidity `asinh(k tau)`, so the proper acceleration
    /// `c k / (1 + k^2 tau^2)` is not constant.
    pub fn varying_acceleration(c: f64, k: f64) -> Result<Self> {
        if k == 0.0 {
            return Err(Error::Precondition("k must be nonzero".into()));
        }
        Ok(Self::from_fn(c, "var_accel", move |t| {
            let q = 1.0 + k * k * t * t;
            let s = q.sqrt();
            Jet {
                z: Vector4::new(0.5 * c * (t * s + (k * t).asinh() / k), 0.5 * c * k * t * t, 0.0, 0.0),
                dz: Vector4::new(c * s, c * k * t, 0.0, 0.0),
                ddz: Vector4::new(c * k * k * t / s, c * k, 0.0, 0.0),
                dddz: Vector4::new(c * k * k / (q * s), 0.0, 0.0, 0.0),
            }
        }))
    }

    /// Parses `hyperbolic:x0`, `circular:R,omega`, `straight:bx,by,bz` or `var_accel:k`.
    pub fn parse(spec: &str, c: f64) -> Result<Self> {
        let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
        let nums: Vec<f64> = if args.is_empty() {
            vec![]
        } else {
            args.split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{s}: {e}"))))
                .collect::<Result<_>>()?
        };
        let need = |k: usize| {
            if nums.len() != k {
                Err(Error::Parse(format!("{name} expects {k} numbers, got {}", nums.len())))
            } else {
                Ok(())
            }
        };
        match name {
            "hyperbolic" => {
                need(1)?;
                Self::hyperbolic(c, nums[0])
            }
            "circular" => {
                need(2)?;
                Self::circular(c, nums[0], nums[1])
            }
            "straight" => {
                need(3)?;
                Self::straight(c, Vector4::zeros(), [nums[0], nums[1], nums[2]])
            }
            "var_accel" => {
                need(1)?;
                Self::varying_acceleration(c, nums[0])
            }
            _ => Err(Error::Parse(format!("unknown worldline form '{name}'"))),
        }
    }
}

/// Natural cubic spline through `(x_i, y_i)`.
#[derive(Clone, Debug)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 3 || y.len() != n {
            return Err(Error::Precondition("spline needs at least 3 matching samples".into()));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Precondition("sample abscissae must be strictly increasing".into()));
        }
        // tridiagonal system for the second derivatives, m_0 = m_{n-1} = 0
        let mut a = vec![0.0; n];
        let mut b = vec![1.0; n];
        let mut cc = vec![0.0; n];
        let mut d = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            a[i] = h0 / 6.0;
            b[i] = (h0 + h1) / 3.0;
            cc[i] = h1 / 6.0;
            d[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
        }
        for i in 1..n {
            let w = a[i] / b[i - 1];
            b[i] -= w * cc[i - 1];
            d[i] -= w * d[i - 1];
        }
        let mut m = vec![0.0; n];
        m[n - 1] = d[n - 1] / b[n - 1];
        for i in (0..n - 1).rev() {
            m[i] = (d[i] - cc[i] * m[i + 1]) / b[i];
        }
        Ok(CubicSpline { x, y, m })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    /// Value, first and second derivative at `t` (clamped to the range).
    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        let n = self.x.len();
        let t = t.clamp(self.x[0], self.x[n - 1]);
        let i = match self.x.binary_search_by(|v| v.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(i) => (i - 1).min(n - 2),
        };
        let h = self.x[i + 1] - self.x[i];
        let (a, b) = ((self.x[i + 1] - t) / h, (t - self.x[i]) / h);
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let y = a * self.y[i] + b * self.y[i + 1] + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let dy = (self.y[i + 1] - self.y[i]) / h - (3.0 * a * a - 1.0) * h * m0 / 6.0 + (3.0 * b * b - 1.0) * h * m1 / 6.0;
        let ddy = a * m0 + b * m1;
        (y, dy, ddy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_normalized(w: &WorldLine, taus: &[f64]) {
        let c = w.c();
        for &t in taus {
            let j = w.jet(t);
            assert!((mdot(&j.dz, &j.dz) - c * c).abs() < 1e-10 * c * c, "{:?} at {t}", w);
            assert!(mdot(&j.dz, &j.ddz).abs() < 1e-10 * c * c);
            // derivative consistency
            let h = 1e-5;
            let (p, m) = (w.jet(t + h), w.jet(t - h));
            assert!(((p.z - m.z) / (2.0 * h) - j.dz).amax() < 1e-6 * c);
            assert!(((p.dz - m.dz) / (2.0 * h) - j.ddz).amax() < 1e-5 * c);
            assert!(((p.ddz - m.ddz) / (2.0 * h) - j.dddz).amax() < 1e-4 * c);
        }
    }

    #[test]
    fn named_worldlines_are_normalized() {
        let taus = [-1.3, 0.0, 0.4, 2.0];
        check_normalized(&WorldLine::hyperbolic(2.0, 1.5).unwrap(), &taus);
        check_normalized(&WorldLine::circular(1.0, 0.7, 0.9).unwrap(), &taus);
        check_normalized(&WorldLine::varying_acceleration(1.5, 0.8).unwrap(), &taus);
        check_normalized(&WorldLine::straight(1.0, Vector4::zeros(), [0.1, 0.2, 0.3]).unwrap(), &taus);
        assert!(WorldLine::circular(1.0, 2.0, 0.6).is_err());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(WorldLine::parse("hyperbolic:2", 1.0).unwrap().name(), "hyperbolic");
        assert_eq!(WorldLine::parse("circular:1,0.5", 1.0).unwrap().name(), "circular");
        assert!(WorldLine::parse("circular:1", 1.0).is_err());
        assert!(WorldLine::parse("bogus:1", 1.0).is_err());
    }

    #[test]
    fn spline_reproduces_cubic_interior() {
        let xs: Vec<f64> = (0..41).map(|i| i as f64 * 0.05).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x.sin()).collect();
        let s = CubicSpline::new(xs, ys).unwrap();
        let (y, dy, _) = s.eval(1.03);
        assert!((y - 1.03f64.sin()).abs() < 1e-6);
        assert!((dy - 1.03f64.cos()).abs() < 1e-4);
    }
}
