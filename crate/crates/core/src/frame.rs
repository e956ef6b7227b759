//! The uniformly rotating frame `K = d/dt + kappa d/dphi` on `kappa rho < c`.
//!
//! Co-rotating coordinates are `(t, z, rho, psi)` with `psi = phi - kappa t`.
//! Cartesian helpers use `(ct, x, y, z)` so they can be compared with the
//! rigid-motion fields.

use nalgebra::{DMatrix, Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_PANELS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotatingFrame {
    pub kappa: f64,
    pub c: f64,
}

/// Closed loop in co-rotating `(z, rho, psi)`; `psi` is unwrapped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopPath {
    pub points: Vec<[f64; 3]>,
}

impl LoopPath {
    /// Planar circle of constant `rho` and `z`, traversed once with `psi` increasing.
    pub fn circle(z: f64, rho: f64, samples: usize) -> Self {
        let n = samples.max(2);
        let points = (0..=n)
            .map(|i| [z, rho, 2.0 * std::f64::consts::PI * i as f64 / n as f64])
            .collect();
        LoopPath { points }
    }

    fn is_closed(&self) -> bool {
        let (Some(a), Some(b)) = (self.points.first(), self.points.last()) else {
            return false;
        };
        let turns = (b[2] - a[2]) / (2.0 * std::f64::consts::PI);
        (a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12 && (turns - turns.round()).abs() < 1e-9
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Connection {
    pub dt: f64,
    pub dpsi: f64,
}

impl RotatingFrame {
    pub fn new(kappa: f64, c: f64) -> Result<Self> {
        if !(kappa > 0.0) || !(c > 0.0) {
            return Err(Error::Precondition("kappa and c must be positive".into()));
        }
        Ok(RotatingFrame { kappa, c })
    }

    /// `kappa rho / c`, rejecting `>= 1`.
    pub fn x(&self, rho: f64) -> Result<f64> {
        let x = self.kappa * rho.abs() / self.c;
        if !(x < 1.0) {
            return Err(Error::OutsideDomain);
        }
        Ok(x)
    }

    fn q(&self, rho: f64) -> Result<f64> {
        let x = self.x(rho)?;
        Ok(1.0 - x * x)
    }

    /// `Phi = (c^2 / 2) ln(1 - (kappa rho / c)^2)`.
    pub fn potential(&self, rho: f64) -> Result<f64> {
        Ok(0.5 * self.c * self.c * self.q(rho)?.ln())
    }

    pub fn connection(&self, rho: f64) -> Result<Connection> {
        let q = self.q(rho)?;
        Ok(Connection { dt: 1.0, dpsi: -(self.kappa * rho * rho / (self.c * self.c)) / q })
    }

    /// The single component `F_{rho psi}` of `F = dA`.
    pub fn curvature(&self, rho: f64) -> Result<f64> {
        let q = self.q(rho)?;
        Ok(-(self.kappa / (self.c * self.c)) * 2.0 * rho / (q * q))
    }

    /// Lower components of `A = K_flat / K^2` in `(ct, x, y, z)`.
    pub fn connection_cartesian(&self, p: &Vector4<f64>) -> Result<Vector4<f64>> {
        let (c, k) = (self.c, self.kappa);
        let rho = p[1].hypot(p[2]);
        let k2 = c * c * self.q(rho)?;
        Ok(Vector4::new(c, k * p[2], -k * p[1], 0.0) / k2)
    }

    /// `F = dA` in `(ct, x, y, z)`: `F_{rho psi} d rho ^ (d phi - kappa dt)`.
    pub fn curvature_cartesian(&self, p: &Vector4<f64>) -> Result<Matrix4<f64>> {
        let (x, y) = (p[1], p[2]);
        let rho = x.hypot(y);
        let f = self.curvature(rho)?;
        let mut out = Matrix4::zeros();
        if rho == 0.0 {
            return Ok(out);
        }
        let drho = Vector4::new(0.0, x / rho, y / rho, 0.0);
        let dphi = Vector4::new(0.0, -y / (rho * rho), x / (rho * rho), 0.0);
        let dt = Vector4::new(1.0 / self.c, 0.0, 0.0, 0.0);
        let beta = dphi - dt * self.kappa;
        out += (drho * beta.transpose() - beta * drho.transpose()) * f;
        Ok(out)
    }

    /// Lower components of `d Phi` in `(ct, x, y, z)`.
    pub fn potential_gradient_cartesian(&self, p: &Vector4<f64>) -> Result<Vector4<f64>> {
        let rho = p[1].hypot(p[2]);
        let q = self.q(rho)?;
        // dPhi/drho = -kappa^2 rho / q, and drho = (x dx + y dy)/rho
        let s = -self.kappa * self.kappa / q;
        Ok(Vector4::new(0.0, s * p[1], s * p[2], 0.0))
    }

    /// Coordinate-time lapse `Delta t = -oint A_space` by the trapezoid rule,
    /// and the proper-time lapse of a clock at the starting point.
    pub fn loop_lapse(&self, path: &LoopPath) -> Result<(f64, f64)> {
        if path.points.len() < 2 || !path.is_closed() {
            return Err(Error::OpenLoop(match (path.points.first(), path.points.last()) {
                (Some(a), Some(b)) => (a[1] - b[1]).abs().max((a[0] - b[0]).abs()),
                _ => f64::NAN,
            }));
        }
        let w = |p: &[f64; 3]| -> Result<f64> { Ok(-self.connection(p[1])?.dpsi) };
        let mut dt = 0.0;
        for s in path.points.windows(2) {
            dt += 0.5 * (w(&s[0])? + w(&s[1])?) * (s[1][2] - s[0][2]);
            // the rho and z legs carry no A component
        }
        let phi0 = self.potential(path.points[0][1])?;
        Ok((dt, dt * (phi0 / (self.c * self.c)).exp()))
    }

    /// `Delta t = (2 pi / kappa) x^2 / (1 - x^2)` for a planar circle.
    pub fn circle_lapse(&self, rho: f64) -> Result<f64> {
        let x = self.x(rho)?;
        Ok(2.0 * std::f64::consts::PI / self.kappa * x * x / (1.0 - x * x))
    }

    /// `Delta tau = (2 pi / kappa) x^2 / sqrt(1 - x^2)`.
    pub fn circle_proper_lapse(&self, rho: f64) -> Result<f64> {
        let x = self.x(rho)?;
        Ok(2.0 * std::f64::consts::PI / self.kappa * x * x / (1.0 - x * x).sqrt())
    }

    pub fn sagnac_phase(&self, nu: f64, rho: f64) -> Result<f64> {
        Ok(2.0 * nu * self.circle_proper_lapse(rho)?)
    }

    pub fn circumference(&self, rho: f64) -> Result<f64> {
        Ok(2.0 * std::f64::consts::PI * rho / self.q(rho)?.sqrt())
    }

    pub fn area(&self, rho: f64) -> Result<f64> {
        let (c, k) = (self.c, self.kappa);
        let x = self.x(rho)?;
        // 1 - sqrt(1 - x^2) without cancellation
        let d = x * x / (1.0 + (1.0 - x * x).sqrt());
        Ok(2.0 * std::f64::consts::PI * c * c / (k * k) * d)
    }

    /// Length of the circle from the `h` line element, by quadrature in `psi`.
    pub fn circumference_quadrature(&self, rho: f64, panels: usize) -> Result<f64> {
        let q = self.q(rho)?;
        richardson_trapezoid(|_| rho / q.sqrt(), 0.0, 2.0 * std::f64::consts::PI, panels)
    }

    /// Area of the disk from the `h` area element, by quadrature in `rho`.
    pub fn area_quadrature(&self, rho: f64, panels: usize) -> Result<f64> {
        self.x(rho)?;
        let a = (self.kappa / self.c).powi(2);
        let radial = richardson_trapezoid(|r| r / (1.0 - a * r * r).sqrt(), 0.0, rho, panels)?;
        Ok(2.0 * std::f64::consts::PI * radial)
    }

    /// `K = -3 (kappa / c)^2 / (1 - x^2)^2`.
    pub fn gaussian_curvature(&self, rho: f64) -> Result<f64> {
        let q = self.q(rho)?;
        Ok(-3.0 * (self.kappa / self.c).powi(2) / (q * q))
    }

    /// `-(sqrt G)'' / sqrt G` for the `(rho, psi)` metric `d rho^2 + G d psi^2`,
    /// by central differences; `step` is in units of `c / kappa`.
    pub fn gaussian_curvature_fd(&self, rho: f64, step: f64) -> Result<f64> {
        let h = step * self.c / self.kappa;
        self.x(rho + h)?;
        let a = (self.kappa / self.c).powi(2);
        let sg = |r: f64| r / (1.0 - a * r * r).sqrt();
        let d2 = (sg(rho + h) - 2.0 * sg(rho) + sg(rho - h)) / (h * h);
        Ok(-d2 / sg(rho))
    }

    /// `h = dz^2 + d rho^2 + rho^2 d psi^2 / (1 - x^2)` in `(z, rho, psi)`.
    pub fn spatial_metric(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        let rho = p[1];
        let q = self.q(rho)?;
        Ok(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 1.0, rho * rho / q])))
    }

    /// `F_ij F^ij` with indices raised by `h`.
    pub fn curvature_norm_sq(&self, rho: f64) -> Result<f64> {
        let f = self.curvature(rho)?;
        let h = self.spatial_metric(&[0.0, rho, 0.0])?;
        Ok(2.0 * f * f / (h[(1, 1)] * h[(2, 2)]))
    }

    /// `R_h - 2 e^{-Phi/c^2} Lap_h e^{Phi/c^2} + (c^2/4) e^{2 Phi/c^2} |F|^2`
    /// with `R_h` and the Laplacian by central differences of step
    /// `step * c / kappa`; the error is `O(step^2)`.
    pub fn kaluza_klein_signed(&self, rho: f64, step: f64) -> Result<f64> {
        let h = step * self.c / self.kappa;
        if rho - 2.0 * h <= 0.0 {
            return Err(Error::Precondition("stencil reaches the axis".into()));
        }
        if self.x(rho + 2.0 * h).is_err() {
            return Err(Error::Precondition("too close to the critical radius for this step".into()));
        }
        let c2 = self.c * self.c;
        let metric = |p: &[f64]| self.spatial_metric(p);
        let p = [0.0, rho, 0.0];
        let r = scalar_curvature_fd(&metric, &p, h)?;
        let ephi = |p: &[f64]| -> Result<f64> { Ok((self.potential(p[1])? / c2).exp()) };
        let lap = laplacian_fd(&metric, &ephi, &p, h)?;
        let e = (self.potential(rho)? / c2).exp();
        Ok(r - 2.0 / e * lap + 0.25 * c2 * e * e * self.curvature_norm_sq(rho)?)
    }

    /// Magnitude of the identity residual after one Richardson step
    /// (`step` and `step / 2`).
    pub fn kaluza_klein_residual(&self, rho: f64, step: f64) -> Result<f64> {
        let (r1, r2) = (self.kaluza_klein_signed(rho, step)?, self.kaluza_klein_signed(rho, 0.5 * step)?);
        Ok((r2 + (r2 - r1) / 3.0).abs())
    }

    /// `c^2 e^{2 Phi/c^2} A (x) A - h` in `(t, z, rho, psi)`.
    pub fn metric_from_kk(&self, rho: f64) -> Result<Matrix4<f64>> {
        let a = self.connection(rho)?;
        let av = Vector4::new(a.dt, 0.0, 0.0, a.dpsi);
        let e2 = (2.0 * self.potential(rho)? / (self.c * self.c)).exp();
        let hs = self.spatial_metric(&[0.0, rho, 0.0])?;
        let mut h = Matrix4::zeros();
        for i in 0..3 {
            h[(i + 1, i + 1)] = hs[(i, i)];
        }
        Ok(av * av.transpose() * (self.c * self.c * e2) - h)
    }

    /// Minkowski metric written in `(t, z, rho, psi)`.
    pub fn minkowski_corotating(&self, rho: f64) -> Result<Matrix4<f64>> {
        self.x(rho)?;
        let (c, k) = (self.c, self.kappa);
        let mut g = Matrix4::zeros();
        g[(0, 0)] = c * c - k * k * rho * rho;
        g[(0, 3)] = -k * rho * rho;
        g[(3, 0)] = -k * rho * rho;
        g[(1, 1)] = -1.0;
        g[(2, 2)] = -1.0;
        g[(3, 3)] = -rho * rho;
        Ok(g)
    }
}

/// Composite trapezoid on `n` and `2n` panels, combined to cancel the
/// leading `h^2` error term.
pub fn richardson_trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Precondition("need at least one panel".into()));
    }
    let trap = |m: usize| {
        let h = (b - a) / m as f64;
        let inner: f64 = (1..m).map(|i| f(a + h * i as f64)).sum();
        h * (0.5 * (f(a) + f(b)) + inner)
    };
    let (t1, t2) = (trap(n), trap(2 * n));
    Ok(t2 + (t2 - t1) / 3.0)
}

type MetricFn<'a> = dyn Fn(&[f64]) -> Result<DMatrix<f64>> + 'a;

fn christoffel(metric: &MetricFn, p: &[f64], h: f64) -> Result<Vec<DMatrix<f64>>> {
    let n = p.len();
    let g = metric(p)?;
    let gi = g.clone().try_inverse().ok_or(Error::DegenerateForm)?;
    let mut dg = Vec::with_capacity(n);
    for k in 0..n {
        let (mut pp, mut pm) = (p.to_vec(), p.to_vec());
        pp[k] += h;
        pm[k] -= h;
        dg.push((metric(&pp)? - metric(&pm)?) / (2.0 * h));
    }
    // Gamma[k][(i, j)] = Gamma^k_{ij}
    let mut gam = vec![DMatrix::zeros(n, n); n];
    for (k, gk) in gam.iter_mut().enumerate() {
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += gi[(k, l)] * (dg[i][(l, j)] + dg[j][(l, i)] - dg[l][(i, j)]);
                }
                gk[(i, j)] = 0.5 * s;
            }
        }
    }
    Ok(gam)
}

/// Scalar curvature `g^{ij} R_ij` by nested central differences; positive
/// on spheres.
pub fn scalar_curvature_fd(metric: &MetricFn, p: &[f64], h: f64) -> Result<f64> {
    let n = p.len();
    let gam = christoffel(metric, p, h)?;
    let mut dgam = Vec::with_capacity(n);
    for m in 0..n {
        let (mut pp, mut pm) = (p.to_vec(), p.to_vec());
        pp[m] += h;
        pm[m] -= h;
        let (a, b) = (christoffel(metric, &pp, h)?, christoffel(metric, &pm, h)?);
        dgam.push((0..n).map(|k| (&a[k] - &b[k]) / (2.0 * h)).collect::<Vec<_>>());
    }
    let gi = metric(p)?.try_inverse().ok_or(Error::DegenerateForm)?;
    let mut r = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut rij = 0.0;
            for k in 0..n {
                rij += dgam[k][k][(i, j)] - dgam[j][k][(i, k)];
                for l in 0..n {
                    rij += gam[k][(k, l)] * gam[l][(i, j)] - gam[k][(j, l)] * gam[l][(i, k)];
                }
            }
            r += gi[(i, j)] * rij;
        }
    }
    Ok(r)
}

/// `(1/sqrt|g|) d_i (sqrt|g| g^{ij} d_j f)` by nested central differences.
pub fn laplacian_fd(metric: &MetricFn, f: &dyn Fn(&[f64]) -> Result<f64>, p: &[f64], h: f64) -> Result<f64> {
    let n = p.len();
    let flux = |q: &[f64], i: usize| -> Result<f64> {
        let g = metric(q)?;
        let gi = g.clone().try_inverse().ok_or(Error::DegenerateForm)?;
        let sq = g.determinant().abs().sqrt();
        let mut s = 0.0;
        for j in 0..n {
            let (mut qp, mut qm) = (q.to_vec(), q.to_vec());
            qp[j] += h;
            qm[j] -= h;
            s += gi[(i, j)] * (f(&qp)? - f(&qm)?) / (2.0 * h);
        }
        Ok(sq * s)
    };
    let mut div = 0.0;
    for i in 0..n {
        let (mut pp, mut pm) = (p.to_vec(), p.to_vec());
        pp[i] += h;
        pm[i] -= h;
        div += (flux(&pp, i)? - flux(&pm, i)?) / (2.0 * h);
    }
    Ok(div / metric(p)?.determinant().abs().sqrt())
}

#[derive(Clone, Debug, Serialize)]
pub struct FrameRow {
    pub rho: f64,
    pub x: f64,
    pub potential: f64,
    pub lapse: f64,
    pub proper_lapse: f64,
    pub circumference: f64,
    pub area: f64,
    pub gaussian_curvature: f64,
    pub kk_residual: f64,
}

pub fn frame_report(frame: &RotatingFrame, rhos: &[f64], step: f64) -> Result<Vec<FrameRow>> {
    rhos.iter()
        .map(|&rho| {
            Ok(FrameRow {
                rho,
                x: frame.x(rho)?,
                potential: frame.potential(rho)?,
                lapse: frame.circle_lapse(rho)?,
                proper_lapse: frame.circle_proper_lapse(rho)?,
                circumference: frame.circumference(rho)?,
                area: frame.area(rho)?,
                gaussian_curvature: frame.gaussian_curvature(rho)?,
                kk_residual: frame.kaluza_klein_residual(rho, step)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn axis_values() {
        let f = RotatingFrame::new(0.5, 2.0).unwrap();
        assert_eq!(f.potential(0.0).unwrap(), 0.0);
        assert_eq!(f.connection(0.0).unwrap(), Connection { dt: 1.0, dpsi: 0.0 });
        assert_eq!(f.gaussian_curvature(0.0).unwrap(), -3.0 * 0.0625);
        assert!(f.potential(4.0).is_err());
    }

    #[test]
    fn circle_lapse_half() {
        let f = RotatingFrame::new(1.0, 1.0).unwrap();
        let (dt, dtau) = f.loop_lapse(&LoopPath::circle(0.0, 0.5, DEFAULT_PANELS)).unwrap();
        assert!((dt - 2.0 * PI / 3.0).abs() < 1e-12);
        assert!((dtau - 2.0 * PI * 0.25 / 0.75f64.sqrt()).abs() < 1e-12);
        assert!((f.sagnac_phase(1.0, 0.5).unwrap() - 2.0 * dtau).abs() < 1e-12);
    }

    #[test]
    fn open_loop_rejected() {
        let f = RotatingFrame::new(1.0, 1.0).unwrap();
        let p = LoopPath { points: vec![[0.0, 0.2, 0.0], [0.0, 0.3, 1.0]] };
        assert!(matches!(f.loop_lapse(&p), Err(Error::OpenLoop(_))));
    }

    #[test]
    fn circumference_06() {
        let f = RotatingFrame::new(0.6, 1.0).unwrap();
        assert!((f.circumference(1.0).unwrap() - 2.0 * PI / 0.8).abs() < 1e-14);
        assert!((f.circumference_quadrature(1.0, 100).unwrap() - 2.0 * PI / 0.8).abs() < 1e-12);
        assert!((f.area_quadrature(1.0, DEFAULT_PANELS).unwrap() - f.area(1.0).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn sphere_scalar_curvature() {
        // round sphere of radius 2 in (theta, phi): R = 2 / r^2
        let m = |p: &[f64]| -> Result<DMatrix<f64>> {
            Ok(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![4.0, 4.0 * p[0].sin().powi(2)])))
        };
        let r = scalar_curvature_fd(&m, &[1.0, 0.3], 1e-3).unwrap();
        assert!((r - 0.5).abs() < 1e-5, "{r}");
    }
}
