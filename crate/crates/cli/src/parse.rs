use nalgebra::{Matrix3, Matrix4, Vector3};
use num_rational::Rational64;

fn numbers(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| format!("'{x}': {e}"))).collect()
}

pub fn vec3(s: &str) -> Result<Vector3<f64>, String> {
    match numbers(s)?.as_slice() {
        [x, y, z] => Ok(Vector3::new(*x, *y, *z)),
        v => Err(format!("expected 3 comma-separated numbers, got {}", v.len())),
    }
}

pub fn list(s: &str) -> Result<Vec<f64>, String> {
    numbers(s)
}

/// 16 numbers, row major.
pub fn matrix4(s: &str) -> Result<Matrix4<f64>, String> {
    let v = numbers(s)?;
    if v.len() != 16 {
        return Err(format!("expected 16 numbers, got {}", v.len()));
    }
    Ok(Matrix4::from_row_slice(&v))
}

/// `t,x,y,z` groups separated by `;`.
pub fn points4(s: &str) -> Result<Vec<[f64; 4]>, String> {
    s.split(';')
        .map(|p| match numbers(p)?.as_slice() {
            [t, x, y, z] => Ok([*t, *x, *y, *z]),
            v => Err(format!("expected 4 numbers per point, got {}", v.len())),
        })
        .collect()
}

/// `v:w` pairs separated by `;`.
pub fn pairs(s: &str) -> Result<Vec<(f64, f64)>, String> {
    s.split(';')
        .map(|p| {
            let (v, w) = p.split_once(':').ok_or_else(|| format!("'{p}' is not v:w"))?;
            Ok((v.trim().parse().map_err(|e| format!("{v}: {e}"))?, w.trim().parse().map_err(|e| format!("{w}: {e}"))?))
        })
        .collect()
}

/// `p/q` or an integer.
pub fn rational(s: &str) -> Result<Rational64, String> {
    let parse = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("'{x}': {e}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse(d)?;
            if d == 0 {
                return Err("zero denominator".into());
            }
            Ok(Rational64::new(parse(n)?, d))
        }
        None => Ok(Rational64::from_integer(parse(s)?)),
    }
}

pub fn rotation(axis: Option<Vector3<f64>>, angle: f64) -> Matrix3<f64> {
    match axis {
        Some(a) if a.norm() > 0.0 => relkin::lorentz::axis_angle(&a, angle),
        _ => Matrix3::identity(),
    }
}
