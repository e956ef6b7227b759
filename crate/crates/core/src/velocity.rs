//! The velocity loop `(B_1, *)`: relativistic velocity composition, the
//! Thomas rotation (gyration) and quasigroup division.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::lorentz::{self, radial_projector, Split};

/// `beta1 * beta2 = (beta1 + beta2_par + beta2_perp / gamma1) / (1 + beta1.beta2)`,
/// the split taken relative to `beta1`.
pub fn star(b1: &Vector3<f64>, b2: &Vector3<f64>) -> Vector3<f64> {
    let g1 = lorentz::gamma(b1);
    let d = b1.dot(b2);
    // beta2_par + beta2_perp/g1 = beta2/g1 + (1 - 1/g1) beta2_par
    let par = b1 * (d * g1 / (1.0 + g1));
    (b1 + b2 / g1 + par) / (1.0 + d)
}

pub fn try_star(b1: &Vector3<f64>, b2: &Vector3<f64>) -> Result<Vector3<f64>> {
    lorentz::check_subluminal(b1)?;
    lorentz::check_subluminal(b2)?;
    Ok(star(b1, b2))
}

/// Closed-form 1+3 split of `B(beta1) B(beta2)`.
pub fn composition_split(b1: &Vector3<f64>, b2: &Vector3<f64>) -> Split {
    let (g1, g2) = (lorentz::gamma(b1), lorentz::gamma(b2));
    let d = b1.dot(b2);
    let gamma = g1 * g2 * (1.0 + d);
    let a = (b2 + b1 / g2 + b2 * (d * g2 / (1.0 + g2))) * (g1 * g2);
    let b = (b1 + b2 / g1 + b1 * (d * g1 / (1.0 + g1))) * (g1 * g2);
    let p1 = radial_projector(b1, g1);
    let p2 = radial_projector(b2, g2);
    let m = Matrix3::identity() + p1 + p2 + b1 * b2.transpose() * (g1 * g2) + p1 * p2;
    Split { gamma, a, b, m }
}

/// Thomas rotation `T[beta1, beta2]`: `B(b1) B(b2) = B(b1 * b2) R(T)`.
pub fn gyr(b1: &Vector3<f64>, b2: &Vector3<f64>) -> Matrix3<f64> {
    composition_split(b1, b2).rotation()
}

/// Signed rotation angle of `d` about `axis`, in `(-pi, pi]`.
pub fn rotation_angle_about(d: &Matrix3<f64>, axis: &Vector3<f64>) -> f64 {
    let n = axis.normalize();
    let w = Vector3::new(d[(2, 1)] - d[(1, 2)], d[(0, 2)] - d[(2, 0)], d[(1, 0)] - d[(0, 1)]) * 0.5;
    let c = (d.trace() - 1.0) * 0.5;
    w.dot(&n).atan2(c)
}

/// Angle of `T[beta1, beta2]` about `beta1 x beta2`; zero for collinear inputs.
pub fn gyr_angle_signed(b1: &Vector3<f64>, b2: &Vector3<f64>) -> f64 {
    let n = b1.cross(b2);
    if n.norm() == 0.0 {
        return 0.0;
    }
    rotation_angle_about(&gyr(b1, b2), &n)
}

/// `cos theta` from the trace: `1 + 2 cos theta = tr M - a.b/(1 + gamma)`.
pub fn cos_thomas_trace(s: &Split) -> f64 {
    (s.m.trace() - s.a.dot(&s.b) / (1.0 + s.gamma) - 1.0) * 0.5
}

/// `cos theta` from the speeds and the angle `phi` between the velocities.
pub fn cos_thomas_phi(g1: f64, g2: f64, phi: f64) -> f64 {
    let s = phi.sin();
    let den = 1.0 + g1 * g2 + ((g1 * g1 - 1.0) * (g2 * g2 - 1.0)).sqrt() * phi.cos();
    1.0 - (g1 - 1.0) * (g2 - 1.0) * s * s / den
}

/// `cos theta` from the three Lorentz factors.
pub fn cos_thomas_sym(g1: f64, g2: f64, g: f64) -> f64 {
    let num = 1.0 + g + g1 + g2;
    num * num / ((1.0 + g) * (1.0 + g1) * (1.0 + g2)) - 1.0
}

fn check_gamma(g: f64) -> Result<()> {
    if !(g >= 1.0) {
        return Err(Error::Precondition(format!("Lorentz factor {g} < 1")));
    }
    Ok(())
}

/// Magnitude of the Thomas rotation, in `[0, pi]`.
pub fn thomas_angle(g1: f64, g2: f64, phi: f64) -> Result<f64> {
    check_gamma(g1)?;
    check_gamma(g2)?;
    if !(0.0..=std::f64::consts::PI).contains(&phi) {
        return Err(Error::Precondition(format!("angle {phi} outside [0, pi]")));
    }
    Ok(cos_thomas_phi(g1, g2, phi).clamp(-1.0, 1.0).acos())
}

/// Location `phi_m` and value `theta_m` of the largest Thomas angle.
pub fn thomas_angle_max(g1: f64, g2: f64) -> Result<(f64, f64)> {
    check_gamma(g1)?;
    check_gamma(g2)?;
    let q = (g1 - 1.0) * (g2 - 1.0) / ((g1 + 1.0) * (g2 + 1.0));
    let phi_m = (-q.sqrt()).acos();
    let theta_m = (1.0 - 2.0 * q).clamp(-1.0, 1.0).acos();
    Ok((phi_m, theta_m))
}

/// Equal speed at which the largest Thomas angle reaches `pi/2`, by bisection.
pub fn critical_equal_speed_beta() -> f64 {
    let f = |b: f64| {
        let g = 1.0 / (1.0 - b * b).sqrt();
        let r = (g - 1.0) / (g + 1.0);
        1.0 - 2.0 * r * r
    };
    let (mut lo, mut hi) = (0.0f64, 1.0 - 1e-15);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The unique `beta1` with `beta1 * beta2 = beta3`.
pub fn solve_left(b2: &Vector3<f64>, b3: &Vector3<f64>) -> Vector3<f64> {
    star(b3, &(-(gyr(b3, b2) * b2)))
}

/// The unique `beta2` with `beta1 * beta2 = beta3`.
pub fn solve_right(b1: &Vector3<f64>, b3: &Vector3<f64>) -> Vector3<f64> {
    star(&(-b1), b3)
}

/// Speed of `beta3` relative to `beta1`; symmetric in its arguments.
pub fn relative_speed(b1: &Vector3<f64>, b3: &Vector3<f64>) -> f64 {
    let num = (b3 - b1).norm_squared() - b3.cross(b1).norm_squared();
    let den = 1.0 - b3.dot(b1);
    (num.max(0.0)).sqrt() / den
}

/// `|beta1 * beta2|` from the moduli formula.
pub fn composed_speed(b1: &Vector3<f64>, b2: &Vector3<f64>) -> f64 {
    let num = (b1 + b2).norm_squared() - b1.cross(b2).norm_squared();
    let den = 1.0 + b1.dot(b2);
    (num.max(0.0)).sqrt() / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_and_inverse() {
        let b = Vector3::new(0.3, -0.4, 0.5);
        assert_eq!(star(&Vector3::zeros(), &b), b);
        assert!((star(&b, &Vector3::zeros()) - b).amax() < 1e-16);
        assert!(star(&b, &(-b)).amax() < 1e-16);
    }

    #[test]
    fn perpendicular_078() {
        let b1 = Vector3::new(0.78, 0.0, 0.0);
        let b2 = Vector3::new(0.0, 0.78, 0.0);
        let s = star(&b1, &b2);
        let ginv = (1.0f64 - 0.78 * 0.78).sqrt();
        assert!((s - (b1 + b2 * ginv)).amax() < 1e-15);
        assert!((ginv - 0.625).abs() < 1e-3);
        assert!(gyr_angle_signed(&b1, &b2) < 0.0);
    }

    #[test]
    fn collinear_gyration_trivial() {
        let b1 = Vector3::new(0.5, 0.2, 0.0);
        assert!((gyr(&b1, &(b1 * 0.7)) - Matrix3::identity()).amax() < 1e-15);
        assert!((gyr(&b1, &(b1 * -0.9)) - Matrix3::identity()).amax() < 1e-14);
        assert!((gyr(&b1, &Vector3::zeros()) - Matrix3::identity()).amax() < 1e-15);
    }

    #[test]
    fn thomas_angle_limits() {
        assert_eq!(thomas_angle(3.0, 5.0, 0.0).unwrap(), 0.0);
        assert!(thomas_angle(0.5, 2.0, 1.0).is_err());
        // large gammas: magnitude tends to phi, i.e. the signed angle to 2 pi - phi
        let phi = 1.1;
        let t = thomas_angle(1e8, 1e8, phi).unwrap();
        assert!((t - phi).abs() < 1e-6);
    }

    #[test]
    fn critical_speed() {
        let b = critical_equal_speed_beta();
        let closed = 2f64.powf(1.25) / (2f64.sqrt() + 1.0);
        assert!((b - closed).abs() < 1e-12);
        assert!((b - 0.98517).abs() < 1e-5);
        let g = 1.0 / (1.0 - b * b).sqrt();
        assert!((g - (3.0 + 2.0 * 2f64.sqrt())).abs() < 1e-6);
    }

    #[test]
    fn relative_and_composed() {
        let a = Vector3::new(0.5, 0.0, 0.0);
        let b = Vector3::new(0.8, 0.0, 0.0);
        assert!((relative_speed(&a, &b) - 0.5).abs() < 1e-15);
        assert_eq!(relative_speed(&a, &a), 0.0);
        let c = Vector3::new(0.1, 0.6, -0.2);
        assert!((relative_speed(&a, &c) - relative_speed(&c, &a)).abs() < 1e-15);
        assert!((composed_speed(&a, &c) - star(&a, &c).norm()).abs() < 1e-15);
    }

    #[test]
    fn division_trivial_cases() {
        let b3 = Vector3::new(0.2, 0.3, -0.1);
        assert!((solve_left(&Vector3::zeros(), &b3) - b3).amax() < 1e-16);
        assert!(solve_right(&b3, &b3).amax() < 1e-16);
    }
}
