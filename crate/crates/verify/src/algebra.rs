use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use relkin::lie::{self, PhysicalAlgebra, SqMat, StructureConstants};
use relkin::rp::{self, Regime};

use crate::oracle::{self, Q};
use crate::{Check, Ctx};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

pub fn rp_regimes(_ctx: &Ctx) -> Vec<Check> {
    let slow = [-0.9, -0.5, -0.1, 0.0, 0.3, 0.7, 0.95];
    let fast = [-3.0, -1.5, -0.9, -0.5, -0.1, 0.0, 0.3, 0.7, 0.95, 2.0, 5.0];
    let (mut law, mut mat, mut chart, mut feq) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut errors = 0;
    for k in [-1.0, 0.0, 1.0] {
        let grid: &[f64] = if k < 0.0 { &slow } else { &fast };
        for &v in grid {
            for &w in grid {
                if 1.0 - k * v * w == 0.0 {
                    continue;
                }
                let Ok(vv) = rp::compose_velocity_k(v, w, k) else {
                    errors += 1;
                    continue;
                };
                let prod = oracle::planar_boost(v, k) * oracle::planar_boost(w, k);
                law = law.max(rel(vv, -prod[(1, 0)] / prod[(0, 0)]));
                match (rp::boost_matrix_k(v, k), rp::boost_matrix_k(w, k)) {
                    (Ok(a), Ok(b)) => mat = mat.max(rel(rp::velocity_of(&(a * b)), vv)),
                    _ => errors += 1,
                }
                chart = chart.max(rel(oracle::chart_sum(v, w, k), vv));
                match rp::functional_equation_residuals(v, w, k) {
                    Ok((r1, r2)) => feq = feq.max(r1).max(r2),
                    Err(_) => errors += 1,
                }
            }
        }
    }
    let regimes = rp::classify_k(-1.0) == Regime::Lorentz { c: 1.0 }
        && rp::classify_k(0.0) == Regime::Galilei
        && rp::classify_k(1.0) == Regime::EuclideanRotations;
    let infinite = matches!(rp::compose_velocity_k(0.5, 2.0, 1.0), Err(relkin::Error::InfiniteVelocity));
    let neg = rp::compose_velocity_k(2.0, 2.0, 1.0).unwrap_or(f64::NAN);
    let flip = oracle::planar_boost(2.0, 1.0) * oracle::planar_boost(2.0, 1.0);
    vec![
        Check::flag("no errors on the grid", errors == 0),
        Check::le("composition law vs matrix product", law, 1e-12),
        Check::le("library matrices reproduce the law", mat, 1e-12),
        Check::le("additive chart of each regime", chart, 1e-12),
        Check::le("functional equations", feq, 1e-12),
        Check::flag("regime classification", regimes),
        Check::flag("k = +1: v v' = 1/k diverges", infinite),
        Check::near("k = +1: 2 (+) 2 = -4/3", neg, -4.0 / 3.0, 1e-15),
        Check::flag("k = +1: product leaves the a > 0 branch", flip[(0, 0)] < 0.0),
    ]
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

fn same_table(a: &StructureConstants<Q>, b: &StructureConstants<Q>) -> bool {
    let n = a.dim();
    n == b.dim() && (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| a.get(i, j, k) == b.get(i, j, k))))
}

/// Brackets of the physical basis from the matrix commutators of the
/// oracle's own representation.
fn rep_mismatches(mu: Q) -> usize {
    let gens = oracle::physical_generators(mu);
    let table = lie::poincare_table(mu);
    let mut bad = 0;
    for a in 0..10 {
        for b in a + 1..10 {
            match oracle::coordinates(&gens, &gens[a].comm(&gens[b])) {
                Some(c) if c == table.bracket_basis(a, b) => {}
                _ => bad += 1,
            }
        }
    }
    bad
}

fn library_rep_matches(mu: Q) -> bool {
    let gens = oracle::physical_generators(mu);
    let alg = PhysicalAlgebra::new(mu).expect("mu >= 0");
    (0..10).all(|g| {
        alg.defining_rep(&alg.basis(g))
            .map(|m| (0..5).all(|i| (0..5).all(|j| m.get(i, j) == gens[g].at(i, j))))
            .unwrap_or(false)
    })
}

/// Physical basis written in the `M_ab, T_a` basis of the form
/// `diag(1, -1, -1, -1)` on `(ct, x, y, z)`: `J_i = M_jk`, `K_i = -M_0i / c`,
/// `P_i = T_i`, `E = c T_0`.
fn physical_from_general(c: i64) -> Option<StructureConstants<Q>> {
    let mut omega = SqMat::<Q>::zeros(4);
    omega.set(0, 0, Q::one());
    for i in 1..4 {
        omega.set(i, i, -Q::one());
    }
    let g = lie::build_general_algebra(&omega, 1).ok()?;
    let idx = |name: &str| g.names.iter().position(|n| n == name);
    let unit = |i: usize, s: Q| {
        let mut v = vec![Q::zero(); 10];
        v[i] = s;
        v
    };
    let cq = Q::from_integer(c);
    let basis = vec![
        unit(idx("M23")?, Q::one()),
        unit(idx("M13")?, -Q::one()),
        unit(idx("M12")?, Q::one()),
        unit(idx("M01")?, -Q::one() / cq),
        unit(idx("M02")?, -Q::one() / cq),
        unit(idx("M03")?, -Q::one() / cq),
        unit(idx("T1")?, Q::one()),
        unit(idx("T2")?, Q::one()),
        unit(idx("T3")?, Q::one()),
        unit(idx("T0")?, cq),
    ];
    let mut out = StructureConstants::zeros(lie::poincare_names());
    for a in 0..10 {
        for b in 0..10 {
            let br = g.bracket(&basis[a], &basis[b]);
            let coords = oracle::solve_span(&basis, &br)?;
            for (k, v) in coords.into_iter().enumerate() {
                if !v.is_zero() && a < b {
                    out.set(a, b, k, v);
                }
            }
        }
    }
    Some(out)
}

pub fn lie(ctx: &Ctx) -> Vec<Check> {
    let mut rng = ctx.rng(9);
    let mut checks = Vec::new();
    for mu in [q(1, 1), q(1, 4), q(0, 1)] {
        checks.push(Check::flag(&format!("45 brackets = rep commutators (mu = {mu})"), rep_mismatches(mu) == 0));
    }
    checks.push(Check::flag("library rep = oracle rep", [q(1, 1), q(1, 4), q(0, 1)].into_iter().all(library_rep_matches)));
    let jac = [q(1, 1), q(1, 4), q(0, 1)].iter().all(|&mu| lie::poincare_table(mu).jacobi_residual().is_zero());
    checks.push(Check::flag("Jacobi residual 0", jac));

    let mut h = vec![false; 10];
    for i in [0, 1, 2, lie::E] {
        h[i] = true;
    }
    let galilei = lie::contract(&lie::poincare_table(q(1, 1)), &h);
    checks.push(Check::flag(
        "contraction about {J, E} gives the Galilei table",
        galilei.as_ref().is_ok_and(|t| same_table(t, &lie::poincare_table(q(0, 1)))),
    ));
    let hj: Vec<bool> = (0..6).map(|i| i < 3).collect();
    checks.push(Check::flag(
        "contraction about {J} gives homogeneous Galilei",
        lie::contract(&lie::lorentz_table(q(1, 1)), &hj).is_ok_and(|t| same_table(&t, &lie::lorentz_table(q(0, 1)))),
    ));
    if let Ok(limit) = &galilei {
        let eps = q(1, 1000);
        let r = lie::rescale(&lie::poincare_table(q(1, 1)), &h, eps);
        let mut dev = Q::zero();
        for a in 0..10 {
            for b in 0..10 {
                for k in 0..10 {
                    let d = (r.get(a, b, k) - limit.get(a, b, k)).abs();
                    if d > dev {
                        dev = d;
                    }
                }
            }
        }
        checks.push(Check::flag("rescaled table within eps of the limit", dev <= eps));
    }
    let boosts_only: Vec<bool> = (0..10).map(|i| (3..6).contains(&i)).collect();
    checks.push(Check::flag(
        "contraction about {K} is obstructed",
        matches!(lie::contract(&lie::poincare_table(q(1, 1)), &boosts_only), Err(relkin::Error::ContractionObstructed { .. })),
    ));

    let m = q(3, 2);
    let ext_ok = match PhysicalAlgebra::central_extend_mass(q(0, 1), m) {
        Ok(ext) => {
            let t = &ext.table;
            let kp = (0..3).all(|i| {
                (0..3).all(|j| {
                    let br = t.bracket_basis(lie::K + i, lie::P + j);
                    let mut want = vec![Q::zero(); 11];
                    if i == j {
                        want[lie::M] = m;
                    }
                    br == want
                })
            });
            let central = (0..11).all(|x| t.bracket_basis(lie::M, x).iter().all(|v| v.is_zero()));
            kp && central && t.jacobi_residual().is_zero()
        }
        Err(_) => false,
    };
    checks.push(Check::flag("central extension [K_i, P_j] = delta_ij m M, M central", ext_ok));

    let (mut det, mut det_c, mut inv) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let x = DMatrix::<f64>::from_fn(4, 4, |_, _| rng.random_range(-1.0..1.0));
        det = det.max(lie::det_exp_trace_check(&x));
        let e = lie::mat_exp(&x);
        inv = inv.max((&e * lie::mat_exp(&(-&x)) - DMatrix::identity(4, 4)).amax());
        let z = DMatrix::<Complex64>::from_fn(4, 4, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        det_c = det_c.max(lie::det_exp_trace_check(&z));
    }
    checks.push(Check::le("det exp = exp tr, real 4x4", det, 1e-10));
    checks.push(Check::le("det exp = exp tr, complex 4x4", det_c, 1e-10));
    checks.push(Check::le("exp(X) exp(-X) = 1", inv, 1e-10));
    let witnesses = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(2.0, 3.0)]
        .iter()
        .all(|&a| lie::exp_image_witness(a, 257).is_ok_and(|w| w.valid));
    checks.push(Check::flag("SL(2,C) exponential-image witness", witnesses));

    let dims = [(4usize, 1i32), (3, 1), (2, -1), (4, -1)].iter().all(|&(n, e)| {
        let mut w = SqMat::<Q>::zeros(n);
        for i in 0..n {
            if e == 1 {
                w.set(i, i, if i == 0 { Q::one() } else { -Q::one() });
            } else if i % 2 == 0 {
                w.set(i, i + 1, Q::one());
                w.set(i + 1, i, -Q::one());
            }
        }
        lie::build_general_algebra(&w, e)
            .is_ok_and(|g| g.dim() as i32 == n as i32 * (n as i32 + 2 - e) / 2 && g.jacobi_residual().is_zero())
    });
    checks.push(Check::flag("general algebras: dimension n(n+2-eps)/2 and Jacobi", dims));
    checks.push(Check::flag(
        "general algebra in the physical basis (c = 2)",
        physical_from_general(2).is_some_and(|t| same_table(&t, &lie::poincare_table(q(1, 4)))),
    ));
    checks
}
