//! Plot tables: the composition of two velocities at an angle, and the
//! Thomas angle as a function of that angle.

use std::fmt::Write;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::velocity;

/// Fixed-point formatting keeps the tables byte-stable across platforms.
fn num(x: f64) -> String {
    let s = format!("{x:.12}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

/// `beta1 = b1 e_x`, `beta2 = b2 (cos phi, sin phi, 0)` and the derived rows.
pub fn composition_csv(b1: f64, b2: f64, phi: f64) -> Result<String> {
    let v1 = Vector3::new(b1, 0.0, 0.0);
    let v2 = Vector3::new(b2 * phi.cos(), b2 * phi.sin(), 0.0);
    let s12 = velocity::try_star(&v1, &v2)?;
    let s21 = velocity::star(&v2, &v1);
    let ginv = (1.0 - b1 * b1).sqrt();
    let mut out = String::from("row,x,y,z\n");
    let mut vec_row = |name: &str, v: &Vector3<f64>| {
        writeln!(out, "{name},{},{},{}", num(v[0]), num(v[1]), num(v[2])).unwrap();
    };
    vec_row("beta1", &v1);
    vec_row("beta2", &v2);
    vec_row("star", &s12);
    vec_row("star_reversed", &s21);
    let par = v1 * (v1.dot(&v2) / (b1 * b1).max(f64::MIN_POSITIVE));
    vec_row("beta1_plus_par_plus_ginv_perp", &(v1 + par + (v2 - par) * ginv));
    writeln!(out, "gamma1_inv,{},,", num(ginv)).unwrap();
    writeln!(out, "thomas_angle_signed,{},,", num(velocity::gyr_angle_signed(&v1, &v2))).unwrap();
    Ok(out)
}

/// `phi, theta, cos theta` on `n + 1` evenly spaced angles in `[0, pi]`.
pub fn thomas_table_csv(g1: f64, g2: f64, n: usize) -> Result<String> {
    if n == 0 {
        return Err(Error::Precondition("need at least one interval".into()));
    }
    let mut out = String::from("phi,theta,cos_theta\n");
    for i in 0..=n {
        let phi = std::f64::consts::PI * i as f64 / n as f64;
        let th = velocity::thomas_angle(g1, g2, phi)?;
        writeln!(out, "{},{},{}", num(phi), num(th), num(velocity::cos_thomas_phi(g1, g2, phi))).unwrap();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perpendicular_rows() {
        let csv = composition_csv(0.78, 0.78, std::f64::consts::FRAC_PI_2).unwrap();
        let star = csv.lines().find(|l| l.starts_with("star,")).unwrap();
        assert!(star.starts_with("star,0.780000000000,0.4881"), "{star}");
        assert!(composition_csv(0.5, 1.2, 0.0).is_err());
    }

    #[test]
    fn negative_zero_printed_plain() {
        assert_eq!(num(-0.0), "0.000000000000");
        assert_eq!(num(-1e-15), "0.000000000000");
    }
}
