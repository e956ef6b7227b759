use std::f64::consts::PI;

use nalgebra::Vector4;
use relkin::frame::{LoopPath, RotatingFrame, DEFAULT_PANELS};
use relkin::rigid::{self, VelocityField, V4};
use relkin::worldline::{flat, WorldLine};

use crate::oracle;
use crate::{attempt, Check, Ctx};

const STEP: f64 = 1e-5;
/// Kaluza-Klein stencil step in units of `c / kappa`.
const KK_STEP: f64 = 2e-3;

fn max_over<T>(items: &[T], f: impl Fn(&T) -> relkin::Result<f64>) -> relkin::Result<f64> {
    items.iter().try_fold(0.0f64, |m, x| Ok(m.max(f(x)?)))
}

pub fn rigid(_ctx: &Ctx) -> Vec<Check> {
    let c = 2.0;
    let kappa = 0.5;
    let boost = VelocityField::boost_killing(c);
    let rot = VelocityField::rotation_killing(c, kappa);
    let boost_pts = [V4::new(0.3, 1.5, 0.2, -0.1), V4::new(-0.5, 2.5, 1.0, 0.5), V4::new(1.0, 3.0, 0.0, 2.0)];
    let rot_pts = [V4::new(0.1, 1.0, 0.5, 0.3), V4::new(0.7, -2.0, 1.5, 1.0), V4::new(-1.2, 0.4, -3.1, 0.0)];
    let mut checks = vec![
        attempt("boost field Born residual", || {
            Ok(Check::le("boost field Born residual", max_over(&boost_pts, |x| Ok(rigid::born_residual(&boost, x, STEP)?.direct))?, 1e-8))
        }),
        attempt("rotation field Born residual", || {
            Ok(Check::le("rotation field Born residual", max_over(&rot_pts, |x| Ok(rigid::born_residual(&rot, x, STEP)?.direct))?, 1e-8))
        }),
    ];
    checks.push(attempt("finite-difference order", || {
        let x = boost_pts[0];
        let (_, exact) = oracle::boost_field(c, &x);
        let err = |h: f64| -> relkin::Result<f64> { Ok((rigid::fd_jacobian(&|y| boost.u(y), &x, h)? - exact).amax()) };
        let (e1, e2, e3) = (err(4e-2)?, err(2e-2)?, err(1e-2)?);
        let order = 0.5 * ((e1 / e2).log2() + (e2 / e3).log2());
        Ok(Check::near("finite-difference order", order, 2.0, 0.1).with_note(format!("errors {e1:.3e} {e2:.3e} {e3:.3e}")))
    }));
    checks.push(attempt("analytic Jacobian vs oracle", || {
        let d = max_over(&boost_pts, |x| Ok((boost.u_and_jacobian(x)?.1 - oracle::boost_field(c, x).1).amax()))?;
        Ok(Check::le("analytic Jacobian vs oracle", d, 1e-12))
    }));
    checks.push(attempt("|a| = c^2 / x0", || {
        let d = max_over(&boost_pts, |x| {
            let x0 = (x[1] * x[1] - x[0] * x[0]).sqrt();
            Ok((rigid::decompose_kinematics_fd(&boost, x, STEP)?.accel_norm() - c * c / x0).abs())
        })?;
        Ok(Check::le("|a| = c^2 / x0", d, 1e-6))
    }));
    checks.push(attempt("rotation: L_u omega", || {
        Ok(Check::le("rotation: L_u omega", max_over(&rot_pts, |x| rigid::vorticity_transport_residual(&rot, x, STEP))?, 1e-6))
    }));

    let Ok(wl) = WorldLine::varying_acceleration(c, 0.5) else {
        checks.push(Check::flag("curved worldline", false));
        return checks;
    };
    let irr = VelocityField::irrotational(wl.clone(), (-10.0, 10.0));
    let on = |tau: f64, off: V4| wl.jet(tau).z + off;
    // offsets with no x component keep z'''.(x - z) = 0
    let transverse = [on(0.3, V4::new(0.0, 0.0, 0.4, 0.1)), on(-1.0, V4::new(0.0, 0.0, -0.2, 0.3)), on(1.5, V4::new(0.0, 0.0, 0.0, -0.5))];
    let general = [on(0.3, V4::new(0.05, 0.1, 0.4, 0.1)), on(-1.0, V4::new(-0.1, 0.2, 0.0, 0.3)), on(1.5, V4::new(0.2, -0.15, 0.1, 0.0))];
    let all: Vec<V4> = transverse.iter().chain(&general).copied().collect();
    checks.push(attempt("irrotational field: theta", || {
        Ok(Check::le("irrotational field: theta", max_over(&all, |x| Ok(rigid::decompose_kinematics_fd(&irr, x, STEP)?.theta.amax()))?, 1e-6))
    }));
    checks.push(attempt("irrotational field: omega", || {
        Ok(Check::le("irrotational field: omega", max_over(&all, |x| Ok(rigid::decompose_kinematics_fd(&irr, x, STEP)?.omega.amax()))?, 1e-6))
    }));
    let rigid::FieldKind::WorldlineIrrotational(inner) = &irr.kind else {
        checks.push(Check::flag("irrotational field kind", false));
        return checks;
    };
    checks.push(attempt("L_u a closed form, transverse points", || {
        let d = max_over(&transverse, |x| Ok((rigid::lie_accel_fd(&irr, x, 1e-4)? - inner.lie_accel_closed_form(x)?.1).amax()))?;
        Ok(Check::le("L_u a closed form, transverse points", d, 1e-5))
    }));
    checks.push(attempt("L_u a full closed form, general points", || {
        let d = max_over(&general, |x| Ok((rigid::lie_accel_fd(&irr, x, 1e-4)? - inner.lie_accel_closed_form(x)?.0).amax()))?;
        let lead = max_over(&general, |x| Ok((rigid::lie_accel_fd(&irr, x, 1e-4)? - inner.lie_accel_closed_form(x)?.1).amax()))?;
        Ok(Check::le("L_u a full closed form, general points", d, 1e-5).with_note(format!("leading term alone misses by {lead:.3e}")))
    }));
    // d a_flat = 0 needs rigidity as well; the varying acceleration field is
    // irrotational only, the boost field and the uniformly accelerated
    // worldline give rigid irrotational flows
    checks.push(attempt("rigid irrotational flows: d a = 0", || {
        let hyp = VelocityField::irrotational(WorldLine::hyperbolic(c, 1.5)?, (-10.0, 10.0));
        let near = [V4::new(0.2, 1.4, 0.3, 0.0), V4::new(-0.4, 1.8, 0.0, 0.5)];
        let d1 = max_over(&boost_pts, |x| rigid::accel_exterior_derivative(&boost, x, 1e-4))?;
        let d2 = max_over(&near, |x| rigid::accel_exterior_derivative(&hyp, x, 1e-4))?;
        let nonrigid = max_over(&general, |x| rigid::accel_exterior_derivative(&irr, x, 1e-4))?;
        Ok(Check::le("rigid irrotational flows: d a = 0", d1.max(d2), 1e-6)
            .with_note(format!("non-rigid irrotational field: |d a| = {nonrigid:.3e}")))
    }));
    checks
}

/// `Delta t = 2 pi kappa rho^2 / (c^2 - kappa^2 rho^2)` for the planar circle.
fn lapse_closed(kappa: f64, c: f64, rho: f64) -> f64 {
    2.0 * PI * kappa * rho * rho / (c * c - kappa * kappa * rho * rho)
}

pub fn frame(_ctx: &Ctx) -> Vec<Check> {
    let mut checks = Vec::new();
    for (kappa, c) in [(1.0, 1.0), (0.5, 2.0)] {
        let Ok(fr) = RotatingFrame::new(kappa, c) else {
            checks.push(Check::flag("frame", false));
            continue;
        };
        let tag = format!("kappa {kappa}, c {c}");
        let radii: Vec<f64> = [0.2, 0.5, 0.8].iter().map(|x| x * c / kappa).collect();
        checks.push(attempt(&format!("loop lapse quadrature ({tag})"), || {
            let d = max_over(&radii, |&r| {
                let (dt, dtau) = fr.loop_lapse(&LoopPath::circle(0.3, r, DEFAULT_PANELS))?;
                let want = lapse_closed(kappa, c, r);
                let q = 1.0 - (kappa * r / c).powi(2);
                Ok((dt - want).abs().max((dtau - want * q.sqrt()).abs()).max((fr.circle_lapse(r)? - want).abs()))
            })?;
            Ok(Check::le(&format!("loop lapse quadrature ({tag})"), d, 1e-8))
        }));
        checks.push(attempt(&format!("circumference and area ({tag})"), || {
            let d = max_over(&radii, |&r| {
                let q = 1.0 - (kappa * r / c).powi(2);
                let circ = 2.0 * PI * r / q.sqrt();
                let area = 2.0 * PI * (c / kappa).powi(2) * (1.0 - q.sqrt());
                let (cq, aq) = (fr.circumference_quadrature(r, DEFAULT_PANELS)?, fr.area_quadrature(r, DEFAULT_PANELS)?);
                Ok(((cq - circ).abs() / circ).max((aq - area).abs() / area))
            })?;
            Ok(Check::le(&format!("circumference and area ({tag})"), d, 1e-10))
        }));
        checks.push(attempt(&format!("C > 2 pi rho and S > pi rho^2 ({tag})"), || {
            let ok = radii.iter().try_fold(true, |ok, &r| {
                Ok::<_, relkin::Error>(ok && fr.circumference(r)? > 2.0 * PI * r && fr.area(r)? > PI * r * r)
            })?;
            Ok(Check::flag(&format!("C > 2 pi rho and S > pi rho^2 ({tag})"), ok))
        }));
        checks.push(attempt(&format!("Gaussian curvature ({tag})"), || {
            let a = (kappa / c).powi(2);
            let d = max_over(&radii, |&r| {
                let h = 1e-3 * c / kappa;
                let brioschi = oracle::brioschi_orthogonal(|_| 1.0, |s| s * s / (1.0 - a * s * s), r, h);
                let k = fr.gaussian_curvature(r)?;
                Ok(((brioschi - k).abs() / k.abs()).max((fr.gaussian_curvature_fd(r, 1e-3)? - k).abs() / k.abs()))
            })?;
            Ok(Check::le(&format!("Gaussian curvature ({tag})"), d, 1e-4))
        }));
        checks.push(attempt(&format!("Kaluza-Klein residual ({tag})"), || {
            Ok(Check::le(&format!("Kaluza-Klein residual ({tag})"), max_over(&radii, |&r| fr.kaluza_klein_residual(r, KK_STEP))?, 1e-3))
        }));
        checks.push(attempt(&format!("metric reconstruction ({tag})"), || {
            let d = max_over(&radii, |&r| {
                let g = oracle::corotating_pullback(kappa, c, 0.3, r, 0.7);
                Ok((fr.metric_from_kk(r)? - g).amax().max((fr.minkowski_corotating(r)? - g).amax()))
            })?;
            Ok(Check::le(&format!("metric reconstruction ({tag})"), d, 1e-11))
        }));
        checks.push(attempt(&format!("F and a from the rotating flow ({tag})"), || {
            let field = VelocityField::rotation_killing(c, kappa);
            let pts: Vec<V4> = radii.iter().map(|&r| Vector4::new(0.4, r * 0.6, r * 0.8, 0.2)).collect();
            let d = max_over(&pts, |p| {
                let k = rigid::decompose_kinematics(&field, p)?;
                let rho = p[1].hypot(p[2]);
                let e = (-fr.potential(rho)? / (c * c)).exp();
                let f_err = (fr.curvature_cartesian(p)? - k.omega * (2.0 * e / (c * c))).amax();
                let a_err = (flat(&k.accel) + fr.potential_gradient_cartesian(p)?).amax();
                Ok(f_err.max(a_err))
            })?;
            Ok(Check::le(&format!("F and a from the rotating flow ({tag})"), d, 1e-10))
        }));
    }
    checks
}
