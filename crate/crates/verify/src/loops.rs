use nalgebra::{Vector3, Vector4};
use rand::Rng;
use relkin::hyperbolic::{self, ChartKind, Hodograph, RadialChart};
use relkin::velocity::{gyr, solve_left, solve_right, star};

use crate::oracle;
use crate::{attempt, rand_beta, rand_unit, Check, Ctx};

const SAMPLES: usize = 1000;

pub fn loop_axioms(ctx: &Ctx) -> Vec<Check> {
    let mut rng = ctx.rng(5);
    let zero = Vector3::zeros();
    let mut m = [0.0f64; 7];
    for _ in 0..SAMPLES {
        let (u, v, w) = (rand_beta(&mut rng, 0.9), rand_beta(&mut rng, 0.9), rand_beta(&mut rng, 0.9));
        let up = |m: &mut f64, x: f64| *m = m.max(x);
        up(&mut m[0], (star(&zero, &u) - u).amax().max((star(&u, &zero) - u).amax()));
        up(&mut m[1], star(&u, &(-u)).amax().max(star(&(-u), &u).amax()));
        // u * x = w and x * v = w
        up(&mut m[2], (star(&u, &solve_right(&u, &w)) - w).amax());
        up(&mut m[3], (star(&solve_left(&v, &w), &v) - w).amax());
        let lhs = star(&u, &star(&v, &w));
        let rhs = star(&star(&u, &v), &(gyr(&u, &v) * w));
        up(&mut m[4], (lhs - rhs).amax());
        let t = gyr(&u, &v);
        up(&mut m[5], (t - gyr(&u, &star(&v, &u))).amax().max((t - gyr(&star(&u, &v), &v)).amax()));
        up(&mut m[6], (t.transpose() - gyr(&v, &u)).amax());
    }
    vec![
        Check::le("two-sided unit", m[0], 1e-11),
        Check::le("two-sided inverse", m[1], 1e-11),
        Check::le("right division substitution", m[2], 1e-11),
        Check::le("left division substitution", m[3], 1e-11),
        Check::le("gyroassociativity", m[4], 1e-10),
        Check::le("loop property", m[5], 1e-10),
        Check::le("gyration inverse is the swapped gyration", m[6], 1e-10),
    ]
}

/// `-(du . du)` for `u = gamma (1, beta)` along `d beta`, with `du` written out
/// by the product rule.
fn pullback_line_element(beta: &Vector3<f64>, db: &Vector3<f64>) -> f64 {
    let g = 1.0 / (1.0 - beta.norm_squared()).sqrt();
    let dg = g * g * g * beta.dot(db);
    let du = Vector4::new(dg, dg * beta[0] + g * db[0], dg * beta[1] + g * db[1], dg * beta[2] + g * db[2]);
    du.fixed_rows::<3>(1).norm_squared() - du[0] * du[0]
}

pub fn hyperbolic(ctx: &Ctx) -> Vec<Check> {
    let mut rng = ctx.rng(6);
    let (mut law, mut charts, mut roundtrip, mut dist) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut errors = 0;
    for _ in 0..SAMPLES {
        let (b1, b2) = (rand_beta(&mut rng, 0.9), rand_beta(&mut rng, 0.9));
        let (r1, r2) = (b1.norm().atanh(), b2.norm().atanh());
        let phi = (b1.dot(&b2) / (b1.norm() * b2.norm())).clamp(-1.0, 1.0).acos();
        match hyperbolic::hyperbolic_cosine_law(r1, r2, phi) {
            Ok(r3) => law = law.max((r3 - star(&b1, &b2).norm().atanh()).abs()),
            Err(_) => errors += 1,
        }
        // geodesic distance from the origin to b1 * b2 is the same side
        if let Ok(d) = hyperbolic::geodesic_distance(&(-b1), &b2) {
            let via_star = star(&b1, &b2).norm().atanh();
            dist = dist.max((d - via_star).abs());
        }

        let beta = rand_beta(&mut rng, 0.95);
        let db = rand_unit(&mut rng) * rng.random_range(0.01..1.0);
        let want = pullback_line_element(&beta, &db);
        let b = beta.norm();
        let n = beta / b;
        let dr = n.dot(&db);
        let dom2 = (db - n * dr).norm_squared() / (b * b);
        let scale = want.abs().max(1.0);
        if let Ok(v) = hyperbolic::metric_eval(&beta, &db) {
            charts = charts.max((v - want).abs() / scale);
        }
        for kind in [ChartKind::Beta, ChartKind::BigR, ChartKind::SmallR, ChartKind::Rho] {
            let x0 = RadialChart { kind: ChartKind::Beta, value: b, theta: 0.0, phi: 0.0 };
            let Ok(x) = hyperbolic::chart_convert(&x0, kind) else {
                errors += 1;
                continue;
            };
            let dx = hyperbolic::chart_derivative(kind, b) * dr;
            let ds2 = hyperbolic::line_element(kind, x.value, dx, dom2);
            charts = charts.max((ds2 - want).abs() / scale);
            match hyperbolic::chart_convert(&x, ChartKind::Beta) {
                Ok(back) => roundtrip = roundtrip.max((back.value - b).abs()),
                Err(_) => errors += 1,
            }
        }
    }
    let mut add = 0.0f64;
    for _ in 0..SAMPLES {
        let n = rand_unit(&mut rng);
        let (a, b) = (rng.random_range(-0.7..0.7), rng.random_range(-0.7..0.7));
        let s = star(&(n * a), &(n * b)).dot(&n);
        let sum = f64::atanh(a) + f64::atanh(b);
        add = add.max((s.atanh() - sum).abs());
        if a >= 0.0 && b >= 0.0 {
            if let Ok(r) = hyperbolic::hyperbolic_cosine_law(a.atanh(), b.atanh(), 0.0) {
                add = add.max((r - sum).abs());
            }
        }
    }
    vec![
        Check::flag("no domain errors on admissible inputs", errors == 0),
        Check::le("cosine law vs star-modulus rapidity", law, 1e-11),
        Check::le("geodesic distance vs star-modulus rapidity", dist, 1e-11),
        Check::le("chart line elements vs four-velocity pullback", charts, 1e-11),
        Check::le("chart round trips", roundtrip, 1e-11),
        Check::le("collinear rapidity additivity", add, 1e-13),
    ]
}

pub const HOLONOMY_BETA: f64 = 0.5;
pub const HOLONOMY_STEPS: usize = 2000;

pub fn holonomy(_ctx: &Ctx) -> Vec<Check> {
    let (beta, c) = (HOLONOMY_BETA, 1.0);
    let mut checks = Vec::new();
    let hol = match Hodograph::circular(beta, 1.0, c).and_then(|h| hyperbolic::hodograph_holonomy(&h, HOLONOMY_STEPS, 1)) {
        Ok(h) => h,
        Err(e) => return vec![Check::error("parallel transport", e)],
    };
    let chord = oracle::chord_holonomy(beta, c, HOLONOMY_STEPS);
    let ang = oracle::angle_about_z(&chord);
    checks.push(Check::near("holonomy angle vs chord-boost product", hol.angle_z, ang, 1e-3));
    checks.push(Check::le("holonomy matrix vs chord-boost product", (hol.rotation - chord).amax(), 1e-3));
    // the chord product converges to the transport as n^-2
    let err = |n: usize| (oracle::angle_about_z(&oracle::chord_holonomy(beta, c, n)) - hol.angle_z).abs();
    let (e1, e2, e3) = (err(100), err(200), err(400));
    let order = 0.5 * ((e1 / e2).log2() + (e2 / e3).log2());
    checks.push(Check::near("convergence order under halving", order, 2.0, 0.2).with_note(format!("errors {e1:.3e} {e2:.3e} {e3:.3e}")));
    checks.push(attempt("transport step refinement", || {
        let h = Hodograph::circular(beta, 1.0, c)?;
        let fine = hyperbolic::hodograph_holonomy(&h, 2 * HOLONOMY_STEPS, 1)?;
        Ok(Check::le("transport step refinement", (fine.angle_z - hol.angle_z).abs(), 1e-9))
    }));
    let g = 1.0 / (1.0 - beta * beta).sqrt();
    let thomas = 2.0 * std::f64::consts::PI * (g - 1.0);
    checks.push(Check::near("magnitude 2 pi (gamma - 1)", hol.angle_z.abs(), thomas, 1e-6));
    checks
}
