//! The one-parameter family of kinematics allowed by the relativity
//! principle: planar boosts `A(v) = [[a, k v a], [-v a, a]]` with
//! `a = 1/sqrt(1 + k v^2)`, acting on `(t, x)`.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime")]
pub enum Regime {
    /// `k > 0`: boosts act as Euclidean rotations by `arctan(sqrt(k) v)`.
    EuclideanRotations,
    Galilei,
    Lorentz { c: f64 },
}

pub fn classify_k(k: f64) -> Regime {
    if k > 0.0 {
        Regime::EuclideanRotations
    } else if k == 0.0 {
        Regime::Galilei
    } else {
        Regime::Lorentz { c: 1.0 / (-k).sqrt() }
    }
}

/// `a(v) = 1/sqrt(1 + k v^2)`, positive root.
pub fn a_of(v: f64, k: f64) -> Result<f64> {
    let q = 1.0 + k * v * v;
    if !(q > 0.0) {
        return Err(Error::OutOfSpectrum { v, k });
    }
    Ok(1.0 / q.sqrt())
}

/// `b(v) = (a/v)(1/a^2 - 1)`, which reduces to `k v a`.
pub fn b_of(v: f64, k: f64) -> Result<f64> {
    let a = a_of(v, k)?;
    if v == 0.0 {
        return Ok(0.0);
    }
    Ok(a / v * (1.0 / (a * a) - 1.0))
}

pub fn boost_matrix_k(v: f64, k: f64) -> Result<Matrix2<f64>> {
    let a = a_of(v, k)?;
    Ok(Matrix2::new(a, k * v * a, -v * a, a))
}

/// Velocity carried by a planar boost: `v = -A_10 / A_00`.
pub fn velocity_of(m: &Matrix2<f64>) -> f64 {
    -m[(1, 0)] / m[(0, 0)]
}

/// `v'' = (v + v') / (1 - k v v')`.
pub fn compose_velocity_k(v: f64, w: f64, k: f64) -> Result<f64> {
    let den = 1.0 - k * v * w;
    if den == 0.0 {
        return Err(Error::InfiniteVelocity);
    }
    Ok((v + w) / den)
}

/// Angle chart for `k > 0`: `alpha = arctan(sqrt(k) v)`; composition adds angles.
pub fn rotation_angle(v: f64, k: f64) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::Precondition("angle chart needs k > 0".into()));
    }
    Ok((k.sqrt() * v).atan())
}

/// Residuals of `a a' (1 - k v v') = a''` and `a a' (v + v') = v'' a''`.
pub fn functional_equation_residuals(v: f64, w: f64, k: f64) -> Result<(f64, f64)> {
    let (a, aw) = (a_of(v, k)?, a_of(w, k)?);
    let vv = compose_velocity_k(v, w, k)?;
    let avv = a_of(vv, k)?;
    // sign of the composed determinant factor: the product of two admissible
    // boosts can leave the a > 0 branch when k > 0
    let s = (1.0 - k * v * w).signum();
    Ok(((a * aw * (1.0 - k * v * w) - s * avv).abs(), (a * aw * (v + w) - s * vv * avv).abs()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub k: f64,
    pub regime: Regime,
    pub samples: Vec<CompositionSample>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompositionSample {
    pub v: f64,
    pub w: f64,
    /// `None` when the composition diverges.
    pub composed: Option<f64>,
    pub alpha_sum: Option<f64>,
}

pub fn regime_report(k: f64, pairs: &[(f64, f64)]) -> RegimeReport {
    let samples = pairs
        .iter()
        .map(|&(v, w)| CompositionSample {
            v,
            w,
            composed: compose_velocity_k(v, w, k).ok(),
            alpha_sum: match (rotation_angle(v, k), rotation_angle(w, k)) {
                (Ok(a), Ok(b)) => Some(a + b),
                _ => None,
            },
        })
        .collect();
    RegimeReport { k, regime: classify_k(k), samples }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrices() {
        assert_eq!(boost_matrix_k(0.0, -1.0).unwrap(), Matrix2::identity());
        let m = boost_matrix_k(0.6, -1.0).unwrap();
        assert!((m[(0, 0)] - 1.25).abs() < 1e-15);
        assert!((m.determinant() - 1.0).abs() < 1e-14);
        assert_eq!(boost_matrix_k(0.7, 0.0).unwrap(), Matrix2::new(1.0, 0.0, -0.7, 1.0));
        assert!(matches!(boost_matrix_k(1.0, -1.0), Err(Error::OutOfSpectrum { .. })));
    }

    #[test]
    fn compositions() {
        assert_eq!(compose_velocity_k(2.0, 3.0, 0.0).unwrap(), 5.0);
        assert!((compose_velocity_k(0.5, 0.5, -1.0).unwrap() - 0.8).abs() < 1e-15);
        assert_eq!(compose_velocity_k(0.5, 2.0, 1.0), Err(Error::InfiniteVelocity));
        assert!((compose_velocity_k(2.0, 2.0, 1.0).unwrap() + 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn regimes() {
        assert_eq!(classify_k(-1.0), Regime::Lorentz { c: 1.0 });
        assert_eq!(classify_k(0.0), Regime::Galilei);
        assert_eq!(classify_k(0.25), Regime::EuclideanRotations);
        assert_eq!(classify_k(-0.25), Regime::Lorentz { c: 2.0 });
    }

    #[test]
    fn b_recovery() {
        for &(v, k) in &[(0.3, -1.0), (1.7, 0.4), (-2.0, 0.0), (0.9, -0.5)] {
            let expect = k * v * a_of(v, k).unwrap();
            assert!((b_of(v, k).unwrap() - expect).abs() < 1e-14);
        }
    }
}
