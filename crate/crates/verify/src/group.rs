use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Matrix4, SymmetricEigen, Vector3};
use rand::Rng;
use relkin::lorentz::{self, BoostRotationParams, GalileiParams};
use relkin::{figures, velocity};

use crate::oracle;
use crate::{attempt, rand_beta, rand_rotation, Check, Ctx};

const SAMPLES: usize = 1000;

fn inf_norm(m: &Matrix4<f64>) -> f64 {
    m.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

pub fn group_laws(ctx: &Ctx) -> Vec<Check> {
    let mut rng = ctx.rng(1);
    let (mut comp, mut inv, mut gcomp, mut ginv) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..SAMPLES {
        let (b1, d1, b2, d2) = (rand_beta(&mut rng, 0.95), rand_rotation(&mut rng), rand_beta(&mut rng, 0.95), rand_rotation(&mut rng));
        let p1 = BoostRotationParams { beta: b1, d: d1 };
        let p2 = BoostRotationParams { beta: b2, d: d2 };
        let l1 = oracle::lorentz(&b1, &d1);
        let l2 = oracle::lorentz(&b2, &d2);
        let c = lorentz::compose_params(&p1, &p2);
        comp = comp.max((oracle::lorentz(&c.beta, &c.d) - l1 * l2).amax());
        let i = lorentz::invert_params(&p1);
        inv = inv.max((oracle::lorentz(&i.beta, &i.d) - l1.try_inverse().unwrap()).amax());

        let (v1, v2) = (b1 * 3.0, b2 * 3.0);
        let g1 = GalileiParams { v: v1, d: d1 };
        let g2 = GalileiParams { v: v2, d: d2 };
        let (m1, m2) = (oracle::galilei(&v1, &d1), oracle::galilei(&v2, &d2));
        let gc = lorentz::galilei_compose(&g1, &g2);
        gcomp = gcomp.max((oracle::galilei(&gc.v, &gc.d) - m1 * m2).amax());
        let gi = lorentz::galilei_invert(&g1);
        // G(v, D)^{-1} = G(-D^T v, D^T) exactly, but compare against a numeric inverse
        ginv = ginv.max((oracle::galilei(&gi.v, &gi.d) * m1 - Matrix4::identity()).amax());
    }
    vec![
        Check::le("compose_params vs matrix product", comp, 1e-11),
        Check::le("invert_params vs matrix inverse", inv, 1e-11),
        Check::le("galilei compose vs matrix product", gcomp, 1e-13),
        Check::le("galilei invert times original", ginv, 1e-13),
    ]
}

pub fn polar(ctx: &Ctx) -> Vec<Check> {
    let mut rng = ctx.rng(2);
    let (mut recon, mut eig, mut sym, mut uniq_b, mut uniq_d, mut vs_oracle) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut failures = 0;
    for _ in 0..SAMPLES {
        let beta = rand_beta(&mut rng, 0.95);
        let d = rand_rotation(&mut rng);
        let l = oracle::lorentz(&beta, &d);
        let Ok(p) = lorentz::polar_decompose(&l, 1e-9) else {
            failures += 1;
            continue;
        };
        recon = recon.max(inf_norm(&(p.boost * p.rotation - l)));
        sym = sym.max((p.boost - p.boost.transpose()).amax());
        let g = 1.0 / (1.0 - beta.norm_squared()).sqrt();
        let s = (g * g - 1.0).sqrt();
        let mut want = [g - s, 1.0, 1.0, g + s];
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut got: Vec<f64> = SymmetricEigen::new(p.boost).eigenvalues.iter().copied().collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        eig = eig.max(got.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        uniq_b = uniq_b.max((p.params.beta - beta).amax());
        uniq_d = uniq_d.max((p.params.d - d).amax());
        let (ob, or) = oracle::polar(&l);
        vs_oracle = vs_oracle.max((ob - p.boost).amax()).max((or - p.rotation).amax());
    }
    vec![
        Check::flag("all samples decomposed", failures == 0),
        Check::le("reconstruction |BR - L|_inf", recon, 1e-11),
        Check::le("boost factor symmetric", sym, 1e-9),
        Check::le("boost eigenvalues {g-s, 1, 1, g+s}", eig, 1e-9),
        Check::le("recovered beta", uniq_b, 1e-10),
        Check::le("recovered rotation", uniq_d, 1e-10),
        Check::le("closed form vs square-root oracle", vs_oracle, 1e-10),
    ]
}

pub fn thomas(ctx: &Ctx) -> Vec<Check> {
    let mut rng = ctx.rng(3);
    let (mut forms, mut gyr) = (0.0f64, 0.0f64);
    for _ in 0..SAMPLES {
        let b1 = rand_beta(&mut rng, 0.95);
        let b2 = rand_beta(&mut rng, 0.95);
        let s = velocity::composition_split(&b1, &b2);
        let (g1, g2) = (lorentz::gamma(&b1), lorentz::gamma(&b2));
        let phi = (b1.dot(&b2) / (b1.norm() * b2.norm())).clamp(-1.0, 1.0).acos();
        let c = [
            velocity::cos_thomas_trace(&s),
            velocity::cos_thomas_phi(g1, g2, phi),
            velocity::cos_thomas_sym(g1, g2, s.gamma),
        ];
        forms = forms.max((c[0] - c[1]).abs()).max((c[1] - c[2]).abs()).max((c[0] - c[2]).abs());
        let (_, r) = oracle::polar_by_velocity(&(oracle::boost(&b1) * oracle::boost(&b2)));
        gyr = gyr.max((oracle::spatial(&r) - velocity::gyr(&b1, &b2)).amax());
    }
    let mut checks = vec![
        Check::le("three cos forms agree", forms, 1e-10),
        Check::le("gyr vs polar-decomposition oracle", gyr, 1e-10),
    ];
    let (mut loc, mut val) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let g1 = 1.0 / (1.0 - rng.random_range(0.3f64..0.99).powi(2)).sqrt();
        let g2 = 1.0 / (1.0 - rng.random_range(0.3f64..0.99).powi(2)).sqrt();
        let f = |phi: f64| velocity::thomas_angle(g1, g2, phi).unwrap_or(f64::NAN);
        let (phi_n, th_n) = oracle::golden_max(f, 0.0, PI);
        match velocity::thomas_angle_max(g1, g2) {
            Ok((phi_m, th_m)) => {
                loc = loc.max((phi_m - phi_n).abs());
                val = val.max((th_m - th_n).abs());
            }
            Err(_) => loc = f64::NAN,
        }
    }
    checks.push(Check::le("maximum location vs golden-section search", loc, 1e-6));
    checks.push(Check::le("maximum value vs golden-section search", val, 1e-6));
    let bc = velocity::critical_equal_speed_beta();
    checks.push(Check::near("equal-speed pi/2 threshold", bc, 0.98517, 1e-5));
    let gc = 1.0 / (1.0 - bc * bc).sqrt();
    let (_, th) = oracle::golden_max(|phi| velocity::thomas_angle(gc, gc, phi).unwrap_or(f64::NAN), 0.0, PI);
    checks.push(Check::near("largest angle at threshold", th, FRAC_PI_2, 1e-6));
    checks
}

fn row(csv: &str, name: &str) -> Option<Vec<f64>> {
    let line = csv.lines().find(|l| l.split(',').next() == Some(name))?;
    line.split(',').skip(1).filter(|s| !s.is_empty()).map(|s| s.parse().ok()).collect()
}

pub fn fig1(_ctx: &Ctx) -> Vec<Check> {
    let b = 0.78;
    let csv = match figures::composition_csv(b, b, FRAC_PI_2) {
        Ok(s) => s,
        Err(e) => return vec![Check::error("composition table", e)],
    };
    let ginv = (1.0 - b * b).sqrt();
    let want = Vector3::new(b, ginv * b, 0.0);
    let mut checks = vec![attempt("star row = beta1 + beta2/gamma1", || {
        let s = row(&csv, "star").ok_or_else(|| relkin::Error::Parse("star row".into()))?;
        Ok(Check::le("star row = beta1 + beta2/gamma1", (Vector3::new(s[0], s[1], s[2]) - want).amax(), 1e-11))
    })];
    checks.push(attempt("inverse Lorentz factor", || {
        let g = row(&csv, "gamma1_inv").ok_or_else(|| relkin::Error::Parse("gamma1_inv row".into()))?;
        Ok(Check::near("inverse Lorentz factor", g[0], 0.6258, 5e-4))
    }));
    let b1 = Vector3::new(b, 0.0, 0.0);
    let b2 = Vector3::new(0.0, b, 0.0);
    let via_matrix = oracle::velocity_of(&(oracle::boost(&b1) * oracle::boost(&b2)));
    checks.push(Check::le("star vs boost-product velocity", (velocity::star(&b1, &b2) - via_matrix).amax(), 1e-12));
    let again = figures::composition_csv(b, b, FRAC_PI_2).unwrap_or_default();
    checks.push(Check::flag("regeneration is byte-identical", again == csv));
    checks.push(Check::flag("matches golden file", csv == crate::FIG1_GOLDEN));
    checks
}
