//! Reference constructions built without the library's closed forms.

use nalgebra::{Matrix2, Matrix3, Matrix4, Vector3, Vector4};
use num_rational::Rational64;
use num_traits::{One, Zero};

pub type Q = Rational64;

pub fn eta() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, -1.0, -1.0))
}

pub fn rodrigues(axis: &Vector3<f64>, angle: f64) -> Matrix3<f64> {
    let n = axis.normalize();
    let k = n.cross_matrix();
    Matrix3::identity() + k * angle.sin() + k * k * (1.0 - angle.cos())
}

/// `exp(rho K_n)` with `K_n = [[0, n^T], [n, 0]]`, summed in closed form.
pub fn boost(beta: &Vector3<f64>) -> Matrix4<f64> {
    let b = beta.norm();
    if b == 0.0 {
        return Matrix4::identity();
    }
    let rho = b.atanh();
    let n = beta / b;
    let mut k = Matrix4::zeros();
    for i in 0..3 {
        k[(0, i + 1)] = n[i];
        k[(i + 1, 0)] = n[i];
    }
    Matrix4::identity() + k * rho.sinh() + k * k * (rho.cosh() - 1.0)
}

pub fn embed(d: &Matrix3<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::identity();
    for i in 0..3 {
        for j in 0..3 {
            m[(i + 1, j + 1)] = d[(i, j)];
        }
    }
    m
}

pub fn lorentz(beta: &Vector3<f64>, d: &Matrix3<f64>) -> Matrix4<f64> {
    boost(beta) * embed(d)
}

/// `(t, x) -> (t, D x + v t)`.
pub fn galilei(v: &Vector3<f64>, d: &Matrix3<f64>) -> Matrix4<f64> {
    let mut m = embed(d);
    for i in 0..3 {
        m[(i + 1, 0)] = v[i];
    }
    m
}

pub fn spatial(m: &Matrix4<f64>) -> Matrix3<f64> {
    m.fixed_view::<3, 3>(1, 1).into_owned()
}

/// Velocity of the image of the rest frame, `L e_0`.
pub fn velocity_of(l: &Matrix4<f64>) -> Vector3<f64> {
    Vector3::new(l[(1, 0)], l[(2, 0)], l[(3, 0)]) / l[(0, 0)]
}

/// Principal square root of a symmetric positive matrix by Denman-Beavers.
pub fn spd_sqrt(a: &Matrix4<f64>) -> Matrix4<f64> {
    let mut y = *a;
    let mut z = Matrix4::identity();
    for _ in 0..100 {
        let yi = y.try_inverse().expect("positive definite");
        let zi = z.try_inverse().expect("positive definite");
        let yn = (y + zi) * 0.5;
        let zn = (z + yi) * 0.5;
        let done = (yn - y).amax() <= 1e-15 * yn.amax();
        y = yn;
        z = zn;
        if done {
            break;
        }
    }
    (y + y.transpose()) * 0.5
}

/// `L = B R` with `B = sqrt(L L^T)`.
pub fn polar(l: &Matrix4<f64>) -> (Matrix4<f64>, Matrix4<f64>) {
    let b = spd_sqrt(&(l * l.transpose()));
    let r = b.try_inverse().expect("invertible") * l;
    (b, r)
}

/// Polar factors read off the image of the rest frame: the boost is
/// `B(v)` with `v` the velocity of `L e_0`, and `R = B(-v) L`.
pub fn polar_by_velocity(l: &Matrix4<f64>) -> (Matrix4<f64>, Matrix4<f64>) {
    let v = velocity_of(l);
    (boost(&v), boost(&(-v)) * l)
}

/// Rotation angle in `[0, pi]`.
pub fn rotation_angle(r: &Matrix3<f64>) -> f64 {
    ((r.trace() - 1.0) * 0.5).clamp(-1.0, 1.0).acos()
}

/// Maximizer of a unimodal `f` on `[a, b]` by golden-section search.
pub fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
        if b - a < 1e-14 {
            break;
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Four-velocity `c gamma (1, beta)`.
pub fn four_velocity(beta: &Vector3<f64>, c: f64) -> Vector4<f64> {
    let g = 1.0 / (1.0 - beta.norm_squared()).sqrt();
    Vector4::new(1.0, beta[0], beta[1], beta[2]) * (c * g)
}

fn mdot(a: &Vector4<f64>, b: &Vector4<f64>) -> f64 {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
}

/// Pure boost carrying the four-velocity `u` to `w`.
pub fn boost_between(u: &Vector4<f64>, w: &Vector4<f64>, c: f64) -> Matrix4<f64> {
    let c2 = c * c;
    let g = mdot(u, w) / c2;
    let s = u + w;
    let mut m = Matrix4::identity();
    let e = eta();
    // x -> x - s (s.x)/(c^2 (1 + g)) + 2 w (u.x)/c^2
    m -= s * (e * s).transpose() / (c2 * (1.0 + g));
    m += w * (e * u).transpose() * (2.0 / c2);
    m
}

/// Holonomy of the circular hodograph `beta (cos s, sin s, 0)` from the
/// product of `n` chord boosts, as the rotation
/// `R_ij = -g(X_i(0), X_j(end))` of the rest frame at `s = 0`.
pub fn chord_holonomy(beta: f64, c: f64, n: usize) -> Matrix3<f64> {
    let u_at = |k: usize| {
        let s = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        four_velocity(&Vector3::new(beta * s.cos(), beta * s.sin(), 0.0), c)
    };
    let mut p = Matrix4::identity();
    for k in 0..n {
        p = boost_between(&u_at(k), &u_at(k + 1), c) * p;
    }
    let b0 = boost(&Vector3::new(beta, 0.0, 0.0));
    let m = b0.try_inverse().expect("boost") * p * b0;
    spatial(&m)
}

/// Signed angle of a rotation about `+z`.
pub fn angle_about_z(r: &Matrix3<f64>) -> f64 {
    (r[(1, 0)] - r[(0, 1)]).atan2(r[(0, 0)] + r[(1, 1)])
}

/// Planar boost on `(t, x)` for parameter `k`; sends `(1, 0)` to `a (1, -v)`.
pub fn planar_boost(v: f64, k: f64) -> Matrix2<f64> {
    let a = 1.0 / (1.0 + k * v * v).sqrt();
    Matrix2::new(a, k * v * a, -v * a, a)
}

/// Composition through the additive chart of each regime: `tan` for
/// `k > 0`, `tanh` for `k < 0`, plain sum for `k = 0`.
pub fn chart_sum(v: f64, w: f64, k: f64) -> f64 {
    if k > 0.0 {
        let s = k.sqrt();
        ((s * v).atan() + (s * w).atan()).tan() / s
    } else if k < 0.0 {
        let s = (-k).sqrt();
        ((s * v).atanh() + (s * w).atanh()).tanh() / s
    } else {
        v + w
    }
}

// --- exact rational linear algebra for Lie brackets ---

#[derive(Clone, Debug, PartialEq)]
pub struct QMat {
    pub n: usize,
    pub d: Vec<Q>,
}

impl QMat {
    pub fn zeros(n: usize) -> Self {
        QMat { n, d: vec![Q::zero(); n * n] }
    }
    pub fn at(&self, i: usize, j: usize) -> Q {
        self.d[i * self.n + j]
    }
    pub fn put(&mut self, i: usize, j: usize, v: Q) {
        self.d[i * self.n + j] = v;
    }
    pub fn mul(&self, o: &QMat) -> QMat {
        let mut r = QMat::zeros(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..self.n {
                    r.d[i * self.n + j] += a * o.at(k, j);
                }
            }
        }
        r
    }
    pub fn comm(&self, o: &QMat) -> QMat {
        let (a, b) = (self.mul(o), o.mul(self));
        QMat { n: self.n, d: a.d.iter().zip(&b.d).map(|(x, y)| x - y).collect() }
    }
}

fn eps3(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

/// Affine 5x5 generators of the `mu`-deformed inhomogeneous group acting
/// on `(1, t, x, y, z)`, in the order `J1..3, K1..3, P1..3, E`.
/// Boosts: `t -> t + mu x_i s`, `x_i -> x_i + t s`.
pub fn physical_generators(mu: Q) -> Vec<QMat> {
    let mut out = Vec::new();
    for i in 0..3 {
        let mut m = QMat::zeros(5);
        // infinitesimal rotation about axis i: x_j -> x_j - eps_ijk x_k
        for j in 0..3 {
            for k in 0..3 {
                let e = eps3(i, j, k);
                if e != 0 {
                    m.put(2 + j, 2 + k, Q::from_integer(-e));
                }
            }
        }
        out.push(m);
    }
    for i in 0..3 {
        let mut m = QMat::zeros(5);
        m.put(2 + i, 1, Q::one());
        m.put(1, 2 + i, mu);
        out.push(m);
    }
    for i in 0..3 {
        let mut m = QMat::zeros(5);
        m.put(2 + i, 0, Q::one());
        out.push(m);
    }
    let mut e = QMat::zeros(5);
    e.put(1, 0, Q::one());
    out.push(e);
    out
}

/// Exact solution of `sum_g c_g basis[g] = target`, or `None` when `target`
/// is outside the span.
pub fn coordinates(basis: &[QMat], target: &QMat) -> Option<Vec<Q>> {
    let cols: Vec<Vec<Q>> = basis.iter().map(|b| b.d.clone()).collect();
    solve_span(&cols, &target.d)
}

/// Same for plain coefficient vectors.
pub fn solve_span(basis: &[Vec<Q>], target: &[Q]) -> Option<Vec<Q>> {
    let rows = target.len();
    let cols = basis.len();
    // augmented matrix, one row per component
    let mut a: Vec<Vec<Q>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Q> = basis.iter().map(|b| b[r]).collect();
            row.push(target[r]);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Q::one() / a[r][c];
        for x in a[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c];
                for j in 0..=cols {
                    let v = a[r][j];
                    a[i][j] -= f * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][cols];
    }
    Some(x)
}

// --- lattice ---

/// Points of the box `[-h, h]^2` (time first) strictly spacelike to all of `s`.
pub fn causal_complement_bruteforce(h: i64, s: &[[i64; 2]]) -> Vec<[i64; 2]> {
    let mut out = Vec::new();
    for t in -h..=h {
        for x in -h..=h {
            if s.iter().all(|p| {
                let (dt, dx) = (t - p[0], x - p[1]);
                dt * dt < dx * dx
            }) {
                out.push([t, x]);
            }
        }
    }
    out
}

/// Closed 2-D diamond between timelike-ordered `p` and `q` by coordinate bounds:
/// `|x - x_p| <= t - t_p` and `|x - x_q| <= t_q - t`.
pub fn closed_diamond_bruteforce(h: i64, p: [i64; 2], q: [i64; 2]) -> Vec<[i64; 2]> {
    let mut out = Vec::new();
    for t in -h..=h {
        for x in -h..=h {
            if (x - p[1]).abs() <= t - p[0] && (x - q[1]).abs() <= q[0] - t {
                out.push([t, x]);
            }
        }
    }
    out
}

// --- rotating frame and rigid fields ---

/// Minkowski metric `diag(c^2, -1, -1, -1)` in `(t, x, y, z)` pulled back to
/// co-rotating `(t, z, rho, psi)` through the coordinate Jacobian.
pub fn corotating_pullback(kappa: f64, c: f64, t: f64, rho: f64, psi: f64) -> Matrix4<f64> {
    let ph = psi + kappa * t;
    let (s, co) = ph.sin_cos();
    // rows: t, x, y, z; columns: d/dt, d/dz, d/drho, d/dpsi
    let j = Matrix4::new(
        1.0, 0.0, 0.0, 0.0,
        -kappa * rho * s, 0.0, co, -rho * s,
        kappa * rho * co, 0.0, s, rho * co,
        0.0, 1.0, 0.0, 0.0,
    );
    let g = Matrix4::from_diagonal(&Vector4::new(c * c, -1.0, -1.0, -1.0));
    j.transpose() * g * j
}

/// Gaussian curvature of `E du^2 + G dv^2` (no cross term) at `u`, from the
/// Brioschi formula with central differences of `E` and `G` in `u`.
pub fn brioschi_orthogonal(e: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64, u: f64, h: f64) -> f64 {
    let d1 = |f: &dyn Fn(f64) -> f64| (f(u + h) - f(u - h)) / (2.0 * h);
    let d2 = |f: &dyn Fn(f64) -> f64| (f(u + h) - 2.0 * f(u) + f(u - h)) / (h * h);
    let (ev, gv) = (e(u), g(u));
    let (eu, gu, guu) = (d1(&e), d1(&g), d2(&g));
    // metric independent of v: K = -(1/(2 sqrt(EG))) d/du (G_u / sqrt(EG))
    let w = (ev * gv).sqrt();
    let wu = (eu * gv + ev * gu) / (2.0 * w);
    -(guu * w - gu * wu) / (2.0 * w * w * w)
}

/// Boost Killing field `c (x, ct, 0, 0) / sqrt(x^2 - (ct)^2)` and its
/// Jacobian `J[(mu, nu)] = d_mu u^nu`, on `x > |ct|`.
pub fn boost_field(c: f64, p: &Vector4<f64>) -> (Vector4<f64>, Matrix4<f64>) {
    let (t, x) = (p[0], p[1]);
    let n = (x * x - t * t).sqrt();
    let u = Vector4::new(x, t, 0.0, 0.0) * (c / n);
    let mut j = Matrix4::zeros();
    // d/dt (x/n) = x t / n^3, d/dx (x/n) = -t^2/n^3
    j[(0, 0)] = c * x * t / n.powi(3);
    j[(1, 0)] = -c * t * t / n.powi(3);
    // d/dt (t/n) = x^2/n^3, d/dx (t/n) = -t x / n^3
    j[(0, 1)] = c * x * x / n.powi(3);
    j[(1, 1)] = -c * t * x / n.powi(3);
    (u, j)
}
