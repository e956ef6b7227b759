use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use nalgebra::{DMatrix, Matrix3, Matrix4, Vector3, Vector4};
use num_complex::Complex64;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relkin::hyperbolic::{self, ChartKind, Hodograph, RadialChart};
use relkin::lattice::{self, GridBox, GridPoint, Lattice, Region, RegionSpec, SeparationMode};
use relkin::lie::{self, PhysicalAlgebra};
use relkin::lorentz::{self, BoostRotationParams, GalileiParams};
use relkin::rigid::{self, VelocityField};
use relkin::{figures, frame, rp, velocity};
use relkin_verify::Check;
use serde::Serialize;
use serde_json::{json, Value};

use crate::parse;
use crate::{Format, Global};

/// `Ok(pass)` or a usage / I/O message.
pub type Outcome = Result<bool, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

#[derive(Serialize)]
struct Report<'a> {
    command: &'a str,
    c: f64,
    seed: u64,
    pass: bool,
    result: Value,
    checks: Vec<Check>,
}

fn apply_tol(checks: &mut [Check], tol: Option<f64>) {
    if let Some(t) = tol {
        for c in checks.iter_mut().filter(|c| c.tol > 0.0) {
            c.tol = t;
            c.pass = c.value <= t;
        }
    }
}

fn emit(g: &Global, name: &str, ext: &str, text: &str) -> Result<(), String> {
    match &g.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
            let path = dir.join(format!("{name}.{ext}"));
            std::fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn finish(g: &Global, command: &str, result: Value, mut checks: Vec<Check>, csv: Option<String>) -> Outcome {
    apply_tol(&mut checks, g.tol);
    let pass = checks.iter().all(|c| c.pass);
    match g.format {
        Format::Json => {
            let report = Report { command, c: g.c, seed: g.seed, pass, result, checks };
            emit(g, command, "json", &(serde_json::to_string_pretty(&report).map_err(err)? + "\n"))?;
        }
        Format::Csv => {
            let text = csv.ok_or_else(|| format!("{command} has no csv table; use --format json"))?;
            emit(g, command, "csv", &text)?;
            for c in checks.iter().filter(|c| !c.pass) {
                eprintln!("check failed: {} ({} > {})", c.name, c.value, c.tol);
            }
        }
    }
    Ok(pass)
}

fn v3(v: &Vector3<f64>) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

fn rows3(m: &Matrix3<f64>) -> Vec<[f64; 3]> {
    (0..3).map(|i| [m[(i, 0)], m[(i, 1)], m[(i, 2)]]).collect()
}

fn rows4(m: &Matrix4<f64>) -> Vec<[f64; 4]> {
    (0..4).map(|i| [m[(i, 0)], m[(i, 1)], m[(i, 2)], m[(i, 3)]]).collect()
}

fn inf_norm(m: &Matrix4<f64>) -> f64 {
    m.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

fn params_json(p: &BoostRotationParams) -> Value {
    json!({ "beta": v3(&p.beta), "d": rows3(&p.d), "gamma": lorentz::gamma(&p.beta), "matrix": rows4(&p.matrix()) })
}

// compose

#[derive(Args, Debug)]
pub struct ComposeArgs {
    /// First velocity as x,y,z, in units of c (a plain velocity with --galilei)
    #[arg(long, value_parser = parse::vec3, allow_hyphen_values = true)]
    beta1: Vector3<f64>,
    /// Second velocity as x,y,z
    #[arg(long, value_parser = parse::vec3, allow_hyphen_values = true)]
    beta2: Vector3<f64>,
    /// Rotation axis of the first pair (identity when absent)
    #[arg(long, value_parser = parse::vec3, allow_hyphen_values = true)]
    axis1: Option<Vector3<f64>>,
    /// Rotation angle of the first pair in radians
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    angle1: f64,
    #[arg(long, value_parser = parse::vec3, allow_hyphen_values = true)]
    axis2: Option<Vector3<f64>>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    angle2: f64,
    /// Compose Galilei pairs (v, D) instead
    #[arg(long)]
    galilei: bool,
}

pub fn compose(g: &Global, a: &ComposeArgs) -> Outcome {
    let (d1, d2) = (parse::rotation(a.axis1, a.angle1), parse::rotation(a.axis2, a.angle2));
    if a.galilei {
        let p1 = GalileiParams { v: a.beta1, d: d1 };
        let p2 = GalileiParams { v: a.beta2, d: d2 };
        let c = lorentz::galilei_compose(&p1, &p2);
        let i = lorentz::galilei_invert(&p1);
        let checks = vec![
            Check::le("composition vs matrix product", (c.matrix() - p1.matrix() * p2.matrix()).amax(), 1e-13),
            Check::le("inverse times original", (i.matrix() * p1.matrix() - Matrix4::identity()).amax(), 1e-13),
        ];
        let result = json!({ "group": "galilei", "v": v3(&c.v), "d": rows3(&c.d), "matrix": rows4(&c.matrix()) });
        return finish(g, "compose", result, checks, None);
    }
    let p1 = BoostRotationParams::new(a.beta1, d1).map_err(err)?;
    let p2 = BoostRotationParams::new(a.beta2, d2).map_err(err)?;
    let c = lorentz::compose_params(&p1, &p2);
    let i = lorentz::invert_params(&p1);
    let checks = vec![
        Check::le("composition vs matrix product", (c.matrix() - p1.matrix() * p2.matrix()).amax(), 1e-11),
        Check::le("inverse times original", (i.matrix() * p1.matrix() - Matrix4::identity()).amax(), 1e-11),
        Check::le("L^T g L = g", lorentz::defining_residual(&c.matrix()), 1e-9),
    ];
    let result = json!({ "group": "lorentz", "composed": params_json(&c), "inverse_of_first": params_json(&i) });
    finish(g, "compose", result, checks, None)
}

// polar

#[derive(Args, Debug)]
pub struct PolarArgs {
    /// The 16 entries of L, row major, comma separated
    #[arg(long, value_parser = parse::matrix4, allow_hyphen_values = true)]
    matrix: Option<Matrix4<f64>>,
    /// JSON file holding L as an array of four rows
    #[arg(long, conflicts_with = "matrix")]
    file: Option<PathBuf>,
    /// Build L = B(beta) R from a velocity and a rotation instead
    #[arg(long, value_parser = parse::vec3, allow_hyphen_values = true, conflicts_with_all = ["matrix", "file"])]
    beta: Option<Vector3<f64>>,
    #[arg(long, value_parser = parse::vec3, allow_hyphen_values = true)]
    axis: Option<Vector3<f64>>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    angle: f64,
}

fn read_matrix(path: &Path) -> Result<Matrix4<f64>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let rows: Vec<Vec<f64>> = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
        return Err(format!("{}: expected a 4x4 array", path.display()));
    }
    Ok(Matrix4::from_fn(|i, j| rows[i][j]))
}

pub fn polar(g: &Global, a: &PolarArgs) -> Outcome {
    let l = match (&a.matrix, &a.file, &a.beta) {
        (Some(m), _, _) => *m,
        (_, Some(f), _) => read_matrix(f)?,
        (_, _, Some(b)) => BoostRotationParams::new(*b, parse::rotation(a.axis, a.angle)).map_err(err)?.matrix(),
        _ => return Err("give --matrix, --file or --beta".into()),
    };
    let p = lorentz::polar_decompose(&l, lorentz::MEMBERSHIP_TOL).map_err(err)?;
    let mut checks = vec![
        Check::le("reconstruction |BR - L|_inf", inf_norm(&(p.boost * p.rotation - l)), 1e-11),
        Check::le("boost factor symmetric", (p.boost - p.boost.transpose()).amax(), 1e-9),
    ];
    match lorentz::polar_decompose_sqrt(&l, lorentz::MEMBERSHIP_TOL) {
        Ok(s) => checks.push(Check::le("closed form vs matrix square root", (s.boost - p.boost).amax().max((s.rotation - p.rotation).amax()), 1e-8)),
        Err(e) => checks.push(Check::error("closed form vs matrix square root", e)),
    }
    let reversed = lorentz::polar_decompose_reversed(&l, lorentz::MEMBERSHIP_TOL).map_err(err)?;
    checks.push(Check::le("reversed factors R B' = L", inf_norm(&(reversed.0 * reversed.1 - l)), 1e-11));
    let result = json!({
        "boost": rows4(&p.boost),
        "rotation": rows4(&p.rotation),
        "beta": v3(&p.params.beta),
        "d": rows3(&p.params.d),
        "reversed": { "boost": rows4(&reversed.1), "beta": v3(&reversed.2) },
    });
    finish(g, "polar", result, checks, None)
}

// thomas

#[derive(Args, Debug)]
pub struct ThomasArgs {
    /// Speed of the first velocity, in units of c
    #[arg(long)]
    beta1: f64,
    /// Speed of the second velocity
    #[arg(long)]
    beta2: f64,
    /// Perpendicular velocities: print the composition table
    #[arg(long, conflicts_with = "phi")]
    perp: bool,
    /// Angle between the velocities: print the composition table
    #[arg(long)]
    phi: Option<f64>,
    /// Same as --format csv
    #[arg(long)]
    csv: bool,
    /// Intervals of the theta(phi) table on [0, pi]
    #[arg(long, default_value_t = 36)]
    n: usize,
}

pub fn thomas(g: &Global, a: &ThomasArgs) -> Outcome {
    let mut g = g.clone();
    if a.csv {
        g.format = Format::Csv;
    }
    let phi = if a.perp { Some(FRAC_PI_2) } else { a.phi };
    let gam = |b: f64| -> Result<f64, String> {
        if !(0.0..1.0).contains(&b) {
            return Err(format!("speed {b} must lie in [0, 1)"));
        }
        Ok(1.0 / (1.0 - b * b).sqrt())
    };
    let (g1, g2) = (gam(a.beta1)?, gam(a.beta2)?);
    if let Some(phi) = phi {
        let csv = figures::composition_csv(a.beta1, a.beta2, phi).map_err(err)?;
        let b1 = Vector3::new(a.beta1, 0.0, 0.0);
        let b2 = Vector3::new(a.beta2 * phi.cos(), a.beta2 * phi.sin(), 0.0);
        let s = velocity::star(&b1, &b2);
        let via = lorentz::boost(&b1).map_err(err)? * lorentz::boost(&b2).map_err(err)?;
        let v = Vector3::new(via[(1, 0)], via[(2, 0)], via[(3, 0)]) / via[(0, 0)];
        let split = velocity::composition_split(&b1, &b2);
        let cos = [velocity::cos_thomas_trace(&split), velocity::cos_thomas_phi(g1, g2, phi), velocity::cos_thomas_sym(g1, g2, split.gamma)];
        let mut checks = vec![
            Check::le("star vs boost-product velocity", (s - v).amax(), 1e-12),
            Check::le("three cos theta forms agree", (cos[0] - cos[1]).abs().max((cos[1] - cos[2]).abs()), 1e-10),
        ];
        if a.perp {
            checks.push(Check::le("star = beta1 + beta2 / gamma1", (s - (b1 + b2 / g1)).amax(), 1e-12));
        }
        let result = json!({
            "beta1": v3(&b1),
            "beta2": v3(&b2),
            "star": v3(&s),
            "star_reversed": v3(&velocity::star(&b2, &b1)),
            "gamma1_inv": 1.0 / g1,
            "gyr": rows3(&velocity::gyr(&b1, &b2)),
            "thomas_angle_signed": velocity::gyr_angle_signed(&b1, &b2),
        });
        return finish(&g, "thomas", result, checks, Some(csv));
    }
    let csv = figures::thomas_table_csv(g1, g2, a.n).map_err(err)?;
    let mut rows = Vec::new();
    let mut top = 0.0f64;
    for i in 0..=a.n {
        let phi = PI * i as f64 / a.n as f64;
        let th = velocity::thomas_angle(g1, g2, phi).map_err(err)?;
        top = top.max(th);
        rows.push(json!({ "phi": phi, "theta": th, "cos_theta": velocity::cos_thomas_phi(g1, g2, phi) }));
    }
    let (phi_m, th_m) = velocity::thomas_angle_max(g1, g2).map_err(err)?;
    let checks = vec![Check::le("no table entry above the closed-form maximum", (top - th_m).max(0.0), 1e-12)];
    let result = json!({ "gamma1": g1, "gamma2": g2, "table": rows, "maximum": { "phi": phi_m, "theta": th_m } });
    finish(&g, "thomas", result, checks, Some(csv))
}

// velocity

#[derive(Args, Debug)]
pub struct VelocityArgs {
    /// First velocity x,y,z in units of c
    #[arg(long, value_parser = parse::vec3, allow_hyphen_values = true)]
    u: Vector3<f64>,
    /// Second velocity
    #[arg(long, value_parser = parse::vec3, allow_hyphen_values = true)]
    v: Vector3<f64>,
    /// Optional third velocity for the gyroassociative law
    #[arg(long, value_parser = parse::vec3, allow_hyphen_values = true)]
    w: Option<Vector3<f64>>,
}

pub fn velocity(g: &Global, a: &VelocityArgs) -> Outcome {
    let (u, v) = (a.u, a.v);
    let uv = velocity::try_star(&u, &v).map_err(err)?;
    let vu = velocity::star(&v, &u);
    let gy = velocity::gyr(&u, &v);
    // u * x = v and y * u = v
    let x = velocity::solve_right(&u, &v);
    let y = velocity::solve_left(&u, &v);
    let mut checks = vec![
        Check::le("u * (u \\ v) = v", (velocity::star(&u, &x) - v).amax(), 1e-11),
        Check::le("(v / u) * u = v", (velocity::star(&y, &u) - v).amax(), 1e-11),
        Check::le("gyr orthogonal", (gy.transpose() * gy - Matrix3::identity()).amax(), 1e-12),
        Check::le("u * v = gyr[u, v](v * u)", (uv - gy * vu).amax(), 1e-10),
    ];
    if let Some(w) = a.w {
        velocity::try_star(&v, &w).map_err(err)?;
        let lhs = velocity::star(&u, &velocity::star(&v, &w));
        let rhs = velocity::star(&uv, &(gy * w));
        checks.push(Check::le("gyroassociative law", (lhs - rhs).amax(), 1e-10));
    }
    let result = json!({
        "star": v3(&uv),
        "star_reversed": v3(&vu),
        "gyr": rows3(&gy),
        "gyr_angle_signed": velocity::gyr_angle_signed(&u, &v),
        "right_division": v3(&x),
        "left_division": v3(&y),
        "relative_speed": velocity::relative_speed(&u, &v),
        "composed_speed": velocity::composed_speed(&u, &v),
    });
    finish(g, "velocity", result, checks, None)
}

// hyperbolic

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Chart {
    Beta,
    BigR,
    SmallR,
    Rho,
}

impl From<Chart> for ChartKind {
    fn from(c: Chart) -> Self {
        match c {
            Chart::Beta => ChartKind::Beta,
            Chart::BigR => ChartKind::BigR,
            Chart::SmallR => ChartKind::SmallR,
            Chart::Rho => ChartKind::Rho,
        }
    }
}

#[derive(Args, Debug)]
pub struct HyperbolicArgs {
    /// Velocity pair for distance and cosine law
    #[arg(long, value_parser = parse::vec3, allow_hyphen_values = true, requires = "beta2")]
    beta1: Option<Vector3<f64>>,
    #[arg(long, value_parser = parse::vec3, allow_hyphen_values = true, requires = "beta1")]
    beta2: Option<Vector3<f64>>,
    /// Radial coordinate to convert between charts
    #[arg(long)]
    value: Option<f64>,
    /// Chart of --value
    #[arg(long, value_enum, default_value_t = Chart::Beta)]
    from: Chart,
    /// Hodograph for parallel transport, e.g. circular:0.5,1
    #[arg(long)]
    hodograph: Option<String>,
    /// Integration steps per lap
    #[arg(long, default_value_t = hyperbolic::DEFAULT_STEPS)]
    steps: usize,
    #[arg(long, default_value_t = 1)]
    laps: usize,
}

pub fn hyperbolic(g: &Global, a: &HyperbolicArgs) -> Outcome {
    let mut result = serde_json::Map::new();
    let mut checks = Vec::new();
    if let (Some(b1), Some(b2)) = (a.beta1, a.beta2) {
        let d = hyperbolic::geodesic_distance(&b1, &b2).map_err(err)?;
        let via_star = velocity::star(&(-b1), &b2).norm().atanh();
        let (r1, r2) = (hyperbolic::rapidity(b1.norm()).map_err(err)?, hyperbolic::rapidity(b2.norm()).map_err(err)?);
        let phi = if b1.norm() > 0.0 && b2.norm() > 0.0 { (-b1.dot(&b2) / (b1.norm() * b2.norm())).clamp(-1.0, 1.0).acos() } else { 0.0 };
        let law = hyperbolic::hyperbolic_cosine_law(r1, r2, phi).map_err(err)?;
        checks.push(Check::le("distance = rapidity of (-beta1) * beta2", (d - via_star).abs(), 1e-11));
        checks.push(Check::le("cosine law = distance", (law - d).abs(), 1e-11));
        result.insert("distance".into(), json!({ "rapidity1": r1, "rapidity2": r2, "angle_at_origin": phi, "distance": d }));
    }
    if let Some(x) = a.value {
        let start = RadialChart { kind: a.from.into(), value: x, theta: 0.0, phi: 0.0 };
        let mut charts = serde_json::Map::new();
        let mut trip = 0.0f64;
        for (name, kind) in [("beta", ChartKind::Beta), ("big_r", ChartKind::BigR), ("small_r", ChartKind::SmallR), ("rho", ChartKind::Rho)] {
            let y = hyperbolic::chart_convert(&start, kind).map_err(err)?;
            let back = hyperbolic::chart_convert(&y, start.kind).map_err(err)?;
            trip = trip.max((back.value - x).abs());
            charts.insert(name.into(), json!(y.value));
        }
        checks.push(Check::le("chart round trips", trip, 1e-11));
        result.insert("charts".into(), Value::Object(charts));
    }
    if let Some(spec) = &a.hodograph {
        let h = Hodograph::parse(spec, g.c).map_err(err)?;
        let hol = hyperbolic::hodograph_holonomy(&h, a.steps, a.laps).map_err(err)?;
        let fine = hyperbolic::hodograph_holonomy(&h, 2 * a.steps, a.laps).map_err(err)?;
        checks.push(Check::le("step refinement", (fine.angle_z - hol.angle_z).abs(), 1e-8));
        let beta = spec.strip_prefix("circular:").and_then(|s| s.split(',').next()).and_then(|s| s.trim().parse::<f64>().ok());
        if let (Some(b), 1) = (beta, a.laps) {
            let want = 2.0 * PI * (1.0 / (1.0 - b * b).sqrt() - 1.0);
            if want < PI {
                checks.push(Check::near("|angle| = 2 pi (gamma - 1)", hol.angle_z.abs(), want, 1e-6));
            }
        }
        result.insert("holonomy".into(), json!({ "angle_z": hol.angle_z, "rotation": rows3(&hol.rotation), "steps": a.steps, "laps": a.laps }));
    }
    if result.is_empty() {
        return Err("nothing to do: give --beta1/--beta2, --value or --hodograph".into());
    }
    finish(g, "hyperbolic", Value::Object(result), checks, None)
}

// rp

#[derive(Args, Debug)]
pub struct RpArgs {
    /// Comma-separated k values; defaults to -1/c^2, 0, 1/c^2
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    /// Velocity pairs v:w separated by ';'; defaults scale with c
    #[arg(long, allow_hyphen_values = true)]
    pairs: Option<String>,
}

pub fn rp(g: &Global, a: &RpArgs) -> Outcome {
    let ks = match &a.k {
        Some(s) => parse::list(s)?,
        None => vec![-1.0 / (g.c * g.c), 0.0, 1.0 / (g.c * g.c)],
    };
    let pairs = match &a.pairs {
        Some(s) => parse::pairs(s)?,
        None => [(0.3, 0.4), (0.5, 0.9), (-0.7, 0.2), (0.9, 0.9), (2.0, 0.5)].iter().map(|&(v, w)| (v * g.c, w * g.c)).collect(),
    };
    let reports: Vec<rp::RegimeReport> = ks.iter().map(|&k| rp::regime_report(k, &pairs)).collect();
    let (mut feq, mut law) = (0.0f64, 0.0f64);
    let mut csv = String::from("k,regime,v,w,composed,alpha_sum\n");
    for r in &reports {
        for s in &r.samples {
            if let Ok((r1, r2)) = rp::functional_equation_residuals(s.v, s.w, r.k) {
                feq = feq.max(r1).max(r2);
            }
            if let (Some(vv), Ok(m1), Ok(m2)) = (s.composed, rp::boost_matrix_k(s.v, r.k), rp::boost_matrix_k(s.w, r.k)) {
                if (m1 * m2)[(0, 0)] > 0.0 {
                    law = law.max((rp::velocity_of(&(m1 * m2)) - vv).abs() / vv.abs().max(1.0));
                }
            }
            let opt = |x: Option<f64>| x.map(|x| x.to_string()).unwrap_or_default();
            let regime = match r.regime {
                rp::Regime::EuclideanRotations => "euclidean".to_string(),
                rp::Regime::Galilei => "galilei".to_string(),
                rp::Regime::Lorentz { c } => format!("lorentz(c={c})"),
            };
            writeln!(csv, "{},{regime},{},{},{},{}", r.k, s.v, s.w, opt(s.composed), opt(s.alpha_sum)).unwrap();
        }
    }
    let checks = vec![
        Check::le("functional equations", feq, 1e-12),
        Check::le("composition law vs boost-matrix product", law, 1e-12),
    ];
    finish(g, "rp", serde_json::to_value(&reports).map_err(err)?, checks, Some(csv))
}

// lie

#[derive(Args, Debug)]
pub struct LieArgs {
    /// Deformation mu = 1/c^2 as p/q; defaults to 1/c^2 for integer c
    #[arg(long)]
    mu: Option<String>,
    /// Contract about the span of these generators, e.g. J,E or J1,J2,J3
    #[arg(long)]
    contract: Option<String>,
    /// Central mass extension of the Galilei algebra, mass as p/q
    #[arg(long)]
    mass: Option<String>,
    /// Random 4x4 matrices for det exp X = exp tr X
    #[arg(long, default_value_t = 100)]
    samples: usize,
}

fn generator_mask(spec: &str) -> Result<Vec<bool>, String> {
    let names = lie::poincare_names();
    let mut mask = vec![false; names.len()];
    for tok in spec.split(',').map(str::trim) {
        let hits: Vec<usize> = match tok {
            "J" => (lie::J..lie::K).collect(),
            "K" => (lie::K..lie::P).collect(),
            "P" => (lie::P..lie::E).collect(),
            _ => names.iter().position(|n| n == tok).into_iter().collect(),
        };
        if hits.is_empty() {
            return Err(format!("unknown generator '{tok}'"));
        }
        for i in hits {
            mask[i] = true;
        }
    }
    Ok(mask)
}

pub fn lie(g: &Global, a: &LieArgs) -> Outcome {
    let mu = match &a.mu {
        Some(s) => parse::rational(s)?,
        None if g.c.fract() == 0.0 && g.c > 0.0 => Rational64::new(1, (g.c * g.c) as i64),
        None => return Err("non-integer c: give --mu as p/q".into()),
    };
    let alg = PhysicalAlgebra::new(mu).map_err(err)?;
    let table = lie::poincare_table(mu);
    let mut checks = vec![
        Check::flag("antisymmetry", table.antisymmetry_residual() == Rational64::from_integer(0)),
        Check::flag("Jacobi identity", table.jacobi_residual() == Rational64::from_integer(0)),
    ];
    let mut bad = 0;
    for x in 0..10 {
        for y in x + 1..10 {
            let (bx, by) = (alg.basis(x), alg.basis(y));
            let ok = match (alg.bracket(&bx, &by), alg.defining_rep(&bx), alg.defining_rep(&by)) {
                (Ok(b), Ok(rx), Ok(ry)) => alg.defining_rep(&b).is_ok_and(|rb| rb == rx.commutator(&ry)),
                _ => false,
            };
            if !ok {
                bad += 1;
            }
        }
    }
    checks.push(Check::flag("defining representation respects all 45 brackets", bad == 0));
    let mut result = json!({ "mu": mu.to_string(), "table": table.to_json() });
    if let Some(spec) = &a.contract {
        let mask = generator_mask(spec)?;
        match lie::contract(&table, &mask) {
            Ok(t) => {
                checks.push(Check::flag("contraction defined", true));
                checks.push(Check::flag("contracted Jacobi identity", t.jacobi_residual() == Rational64::from_integer(0)));
                result["contraction"] = t.to_json();
            }
            Err(e) => {
                checks.push(Check::flag("contraction defined", false).with_note(e.to_string()));
                result["contraction"] = json!({ "obstructed": e.to_string() });
            }
        }
    }
    if let Some(m) = &a.mass {
        let ext = PhysicalAlgebra::central_extend_mass(mu, parse::rational(m)?).map_err(err)?;
        checks.push(Check::flag("extended Jacobi identity", ext.table.jacobi_residual() == Rational64::from_integer(0)));
        result["extension"] = ext.table.to_json();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let (mut det, mut det_c) = (0.0f64, 0.0f64);
    for _ in 0..a.samples {
        let x = DMatrix::<f64>::from_fn(4, 4, |_, _| rng.random_range(-1.0..1.0));
        det = det.max(lie::det_exp_trace_check(&x));
        let z = DMatrix::<Complex64>::from_fn(4, 4, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        det_c = det_c.max(lie::det_exp_trace_check(&z));
    }
    checks.push(Check::le("det exp X = exp tr X, real", det, 1e-10));
    checks.push(Check::le("det exp X = exp tr X, complex", det_c, 1e-10));
    let witness = lie::exp_image_witness(Complex64::new(1.0, 0.0), 257).map_err(err)?;
    checks.push(Check::flag("SL(2,C) element outside the exponential image", witness.valid));
    result["exp_witness"] = serde_json::to_value(&witness).map_err(err)?;
    finish(g, "lie", result, checks, None)
}

// lattice

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Mode {
    /// disjoint iff strictly spacelike
    Caus,
    /// disjoint iff distinct and not timelike
    Chron,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Witness {
    /// complete a within b with b meet (a join b') strictly above a
    Fig2,
}

#[derive(Args, Debug)]
pub struct LatticeArgs {
    /// Dimension of the grid (time plus n - 1 space axes)
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Odd side length of the centred box
    #[arg(long = "box", default_value_t = 41)]
    side: i64,
    #[arg(long, value_enum, default_value_t = Mode::Caus)]
    mode: Mode,
    /// Build a known witness
    #[arg(long, value_enum)]
    witness: Option<Witness>,
    /// Half-height of b' in the witness
    #[arg(long, default_value_t = 4)]
    r: i64,
    /// Half-height of a in the witness
    #[arg(long, default_value_t = 2)]
    s: i64,
    /// Orthomodularity battery over this many random nested complete pairs
    #[arg(long)]
    battery: Option<usize>,
    /// Region file: {"box": .., "points": [..]} or {"diamond": {"p", "q", "closed"}}
    #[arg(long)]
    a: Option<PathBuf>,
    #[arg(long)]
    b: Option<PathBuf>,
}

fn read_region(lat: &Lattice, path: &Path) -> Result<Region, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let spec: RegionSpec = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    lat.from_spec(&spec).map_err(err)
}

fn battery(lat: &Lattice, pairs: usize, rng: &mut ChaCha8Rng) -> (usize, usize, Option<Value>) {
    let reach = (lat.gbox.extents[0][1] - 2).max(0);
    let n = lat.gbox.n;
    let pts = |k: usize, rng: &mut ChaCha8Rng| -> Vec<GridPoint> {
        (0..k).map(|_| (0..n).map(|_| rng.random_range(-reach..=reach)).collect()).collect()
    };
    let (mut fails, mut laws, mut first) = (0, 0, None);
    for _ in 0..pairs {
        let k = rng.random_range(2..=4);
        let Ok(s) = lat.region(&pts(k, rng)) else { continue };
        let b = lat.completion(&s);
        let inside = lat.points(&b);
        let m = rng.random_range(1..=2);
        let pick: Vec<GridPoint> = (0..m).map(|_| inside[rng.random_range(0..inside.len())].clone()).collect();
        let Ok(a) = lat.region(&pick) else { continue };
        let a = lat.completion(&a);
        let nb = lat.complement(&b);
        if lat.complement(&nb) != b || !lat.meet(&b, &nb).is_ok_and(|x| x.is_empty()) {
            laws += 1;
        }
        match lat.check_orthomodular(&a, &b) {
            Ok(r) if r.holds => {}
            Ok(r) => {
                fails += 1;
                if first.is_none() {
                    first = Some(json!({ "a": lat.points(&a), "b_generators": lat.points(&s), "excess": lat.points(&r.excess) }));
                }
            }
            Err(_) => fails += 1,
        }
    }
    (fails, laws, first)
}

pub fn lattice(g: &Global, a: &LatticeArgs) -> Outcome {
    let gbox = GridBox::centred(a.n, a.side).map_err(err)?;
    let mode = match a.mode {
        Mode::Caus => SeparationMode::Causal,
        Mode::Chron => SeparationMode::Chronological,
    };
    let lat = Lattice::new(gbox, mode);
    let mut result = serde_json::Map::new();
    result.insert("box".into(), serde_json::to_value(&lat.gbox).map_err(err)?);
    result.insert("mode".into(), serde_json::to_value(mode).map_err(err)?);
    let mut checks = Vec::new();
    if let Some(Witness::Fig2) = a.witness {
        let ce = lattice::fig2_counterexample(&lat, a.r, a.s).map_err(err)?;
        let margin = lat.margin(&ce.a_join_b_prime).unwrap_or(0);
        checks.push(Check::flag("a nonempty and within b", !ce.a.is_empty() && ce.a.is_subset(&ce.b)));
        checks.push(Check::flag("b meet (a join b') strictly above a", !ce.report.holds && !ce.report.excess.is_empty()));
        checks.push(Check::flag("witness clear of the box boundary", margin >= 1).with_note(format!("margin {margin}")));
        result.insert(
            "witness".into(),
            json!({
                "a": lat.points(&ce.a),
                "b_prime": lat.points(&ce.b_prime),
                "b_size": ce.b.len(),
                "a_join_b_prime_size": ce.a_join_b_prime.len(),
                "orthomodular": ce.report.holds,
                "excess": lat.points(&ce.report.excess),
            }),
        );
    }
    if let Some(pairs) = a.battery {
        let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
        let (fails, laws, first) = battery(&lat, pairs, &mut rng);
        checks.push(Check::le("orthocomplement laws on b", laws as f64, 0.0));
        checks.push(Check::le(&format!("orthomodular on {pairs} nested pairs"), fails as f64, 0.0));
        result.insert("battery".into(), json!({ "pairs": pairs, "orthomodular_failures": fails, "first_failure": first }));
    }
    match (&a.a, &a.b) {
        (Some(pa), Some(pb)) => {
            let (ra, rb) = (read_region(&lat, pa)?, read_region(&lat, pb)?);
            let (ca, cb) = (lat.is_complete(&ra), lat.is_complete(&rb));
            let mut ops = json!({
                "a_complete": ca,
                "b_complete": cb,
                "a_complement": lat.points(&lat.complement(&ra)),
                "b_complement": lat.points(&lat.complement(&rb)),
            });
            if ca && cb {
                ops["meet"] = json!(lat.points(&lat.meet(&ra, &rb).map_err(err)?));
                ops["join"] = json!(lat.points(&lat.join(&ra, &rb).map_err(err)?));
                ops["compatible"] = json!(lat.compatibility(&ra, &rb).map_err(err)?);
                if ra.is_subset(&rb) {
                    let r = lat.check_orthomodular(&ra, &rb).map_err(err)?;
                    checks.push(Check::flag("b meet (a join b') = a", r.holds));
                    ops["excess"] = json!(lat.points(&r.excess));
                }
            }
            result.insert("regions".into(), ops);
        }
        (None, None) => {}
        _ => return Err("--a and --b go together".into()),
    }
    if checks.is_empty() && !result.contains_key("regions") {
        return Err("nothing to do: give --witness, --battery or --a/--b".into());
    }
    finish(g, "lattice", Value::Object(result), checks, None)
}

// rigid

#[derive(Args, Debug)]
pub struct RigidArgs {
    /// boost, rotation:kappa, constant:bx,by,bz, shear:lambda or worldline:<form>
    /// with forms hyperbolic:x0, circular:R,omega, straight:bx,by,bz, var_accel:k
    #[arg(long, default_value = "boost")]
    field: String,
    /// Events ct,x,y,z separated by ';'
    #[arg(long, default_value = "0,1.5,0.2,-0.1;0.3,2,0,0.5", allow_hyphen_values = true)]
    points: String,
    /// Finite-difference step
    #[arg(long, default_value_t = rigid::DEFAULT_FD_STEP)]
    step: f64,
    /// Also require Born rigidity at every point
    #[arg(long)]
    expect_rigid: bool,
}

pub fn rigid(g: &Global, a: &RigidArgs) -> Outcome {
    let field = VelocityField::parse(&a.field, g.c).map_err(err)?;
    let pts: Vec<Vector4<f64>> = parse::points4(&a.points)?.iter().map(|p| Vector4::from_row_slice(p)).collect();
    let rows = rigid::field_report(&field, &pts, a.step).map_err(err)?;
    let scale = g.c * g.c;
    let norm = rows.iter().map(|r| r.normalization / scale).fold(0.0, f64::max);
    let two_ways = rows.iter().map(|r| (r.born_direct - r.born_via_theta).abs()).fold(0.0, f64::max);
    let mut checks = vec![
        Check::le("u.u = c^2 (relative)", norm, 1e-9),
        Check::le("Born residual: direct vs 2 theta", two_ways, 1e-6),
    ];
    if a.expect_rigid {
        checks.push(Check::le("Born rigid", rows.iter().map(|r| r.born_direct).fold(0.0, f64::max), 1e-6));
    }
    let mut csv = String::from("ct,x,y,z,normalization,theta,omega,accel_norm,born_direct,born_via_theta,vorticity_transport\n");
    for r in &rows {
        let p = r.point;
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{},{}",
            p[0], p[1], p[2], p[3], r.normalization, r.theta, r.omega, r.accel_norm, r.born_direct, r.born_via_theta, r.vorticity_transport
        )
        .unwrap();
    }
    let result = json!({ "field": a.field, "step": a.step, "rows": rows });
    finish(g, "rigid", result, checks, Some(csv))
}

// frame

#[derive(Args, Debug)]
pub struct FrameArgs {
    /// Angular velocity of the frame
    #[arg(long, default_value_t = 0.5)]
    kappa: f64,
    /// Comma-separated radii; defaults to 0.1, 0.2, .., 0.9 of c/kappa
    #[arg(long)]
    rho: Option<String>,
    /// Kaluza-Klein stencil step in units of c/kappa
    #[arg(long, default_value_t = 2e-3)]
    step: f64,
}

pub fn frame(g: &Global, a: &FrameArgs) -> Outcome {
    let fr = frame::RotatingFrame::new(a.kappa, g.c).map_err(err)?;
    let unit = g.c / a.kappa;
    let rhos = match &a.rho {
        Some(s) => parse::list(s)?,
        None => (1..10).map(|i| i as f64 * 0.1 * unit).collect(),
    };
    let rows = frame::frame_report(&fr, &rhos, a.step).map_err(err)?;
    let (mut quad, mut longer) = (0.0f64, true);
    for &r in &rhos {
        let c = fr.circumference(r).map_err(err)?;
        let cq = fr.circumference_quadrature(r, frame::DEFAULT_PANELS).map_err(err)?;
        quad = quad.max((cq - c).abs() / c);
        longer &= c > 2.0 * PI * r;
    }
    let checks = vec![
        Check::le("Kaluza-Klein residual", rows.iter().map(|r| r.kk_residual).fold(0.0, f64::max), 1e-3),
        Check::le("circumference quadrature (relative)", quad, 1e-10),
        Check::flag("C > 2 pi rho", longer),
    ];
    let mut csv = String::from("rho,x,potential,lapse,proper_lapse,circumference,area,gaussian_curvature,kk_residual\n");
    for r in &rows {
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{}",
            r.rho, r.x, r.potential, r.lapse, r.proper_lapse, r.circumference, r.area, r.gaussian_curvature, r.kk_residual
        )
        .unwrap();
    }
    let result = json!({ "kappa": a.kappa, "step": a.step, "rows": rows });
    finish(g, "frame", result, checks, Some(csv))
}

// verify-all

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Run only these criteria, e.g. 1,4,10
    #[arg(long)]
    only: Option<String>,
}

pub fn verify_all(g: &Global, a: &VerifyArgs) -> Outcome {
    let only: Vec<u32> = match &a.only {
        Some(s) => s.split(',').map(|x| x.trim().parse::<u32>().map_err(|e| format!("'{x}': {e}"))).collect::<Result<_, _>>()?,
        None => vec![],
    };
    let known = relkin_verify::criterion_ids();
    if let Some(bad) = only.iter().find(|i| !known.contains(i)) {
        return Err(format!("no criterion {bad}"));
    }
    let report = relkin_verify::run(g.seed, g.tol, &only);
    for line in report.summary_lines() {
        println!("{line}");
    }
    let dir = g.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let (path, text) = match g.format {
        Format::Json => (dir.join("verify-all.json"), serde_json::to_string_pretty(&report).map_err(err)? + "\n"),
        Format::Csv => {
            let mut s = String::from("criterion,check,value,tol,pass\n");
            for c in &report.criteria {
                for k in &c.checks {
                    writeln!(s, "{},\"{}\",{},{},{}", c.id, k.name.replace('"', "'"), k.value, k.tol, k.pass).unwrap();
                }
            }
            (dir.join("verify-all.csv"), s)
        }
    };
    std::fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?;
    let failed = report.criteria.iter().filter(|c| !c.pass).count();
    println!("{} of {} criteria pass; report written to {}", report.criteria.len() - failed, report.criteria.len(), path.display());
    Ok(report.pass)
}
