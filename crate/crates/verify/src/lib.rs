//! Acceptance suite for `relkin`. Each criterion compares library output
//! with an oracle written here from scratch, at a pinned tolerance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

mod algebra;
mod group;
mod lattice;
mod loops;
mod motion;
pub mod oracle;

pub const DEFAULT_SEED: u64 = 42;

/// Golden copy of the perpendicular-composition table.
pub const FIG1_GOLDEN: &str = include_str!("../tests/golden/fig1.csv");

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// measured residual or error; `0` / `1` for yes-no checks
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    /// Passes when `value <= tol`; NaN fails.
    pub fn le(name: &str, value: f64, tol: f64) -> Self {
        Check { name: name.into(), value, tol, pass: value <= tol, note: None }
    }

    /// `|value - target| <= tol`, reporting the deviation.
    pub fn near(name: &str, value: f64, target: f64, tol: f64) -> Self {
        let d = (value - target).abs();
        Check { name: name.into(), value: d, tol, pass: d <= tol, note: Some(format!("measured {value}, target {target}")) }
    }

    pub fn flag(name: &str, ok: bool) -> Self {
        Check { name: name.into(), value: if ok { 0.0 } else { 1.0 }, tol: 0.0, pass: ok, note: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn error(name: &str, e: impl std::fmt::Display) -> Self {
        Check { name: name.into(), value: f64::NAN, tol: 0.0, pass: false, note: Some(format!("error: {e}")) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Criterion {
    pub id: u32,
    pub title: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_override: Option<f64>,
    pub pass: bool,
    pub criteria: Vec<Criterion>,
}

impl Report {
    pub fn summary_lines(&self) -> Vec<String> {
        self.criteria
            .iter()
            .map(|c| {
                let worst = c.checks.iter().filter(|k| !k.pass).map(|k| k.name.as_str()).collect::<Vec<_>>();
                let tag = if c.pass { "PASS" } else { "FAIL" };
                if worst.is_empty() {
                    format!("{tag} {:>2} {} ({} checks)", c.id, c.title, c.checks.len())
                } else {
                    format!("{tag} {:>2} {} (failing: {})", c.id, c.title, worst.join(", "))
                }
            })
            .collect()
    }
}

/// Settings shared by every criterion.
#[derive(Clone, Copy, Debug)]
pub struct Ctx {
    pub seed: u64,
    pub tol_override: Option<f64>,
}

impl Ctx {
    /// Seeded generator, independent per criterion.
    pub(crate) fn rng(&self, id: u32) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(1_000_003).wrapping_add(id as u64))
    }
}

type CriterionFn = fn(&Ctx) -> Vec<Check>;

const CRITERIA: [(u32, &str, CriterionFn); 12] = [
    (1, "group laws", group::group_laws),
    (2, "polar decomposition", group::polar),
    (3, "Thomas rotation", group::thomas),
    (4, "perpendicular composition table", group::fig1),
    (5, "loop axioms", loops::loop_axioms),
    (6, "hyperbolic velocity space", loops::hyperbolic),
    (7, "hodograph holonomy", loops::holonomy),
    (8, "one-parameter kinematics", algebra::rp_regimes),
    (9, "Lie algebra", algebra::lie),
    (10, "causal lattice", lattice::lattice),
    (11, "rigid motion", motion::rigid),
    (12, "rotating frame", motion::frame),
];

pub fn criterion_ids() -> Vec<u32> {
    CRITERIA.iter().map(|c| c.0).collect()
}

/// Runs the selected criteria (all when `only` is empty), in id order.
pub fn run(seed: u64, tol_override: Option<f64>, only: &[u32]) -> Report {
    let ctx = Ctx { seed, tol_override };
    let criteria: Vec<Criterion> = CRITERIA
        .iter()
        .filter(|(id, _, _)| only.is_empty() || only.contains(id))
        .map(|&(id, title, f)| {
            let mut checks = f(&ctx);
            if let Some(t) = tol_override {
                for c in checks.iter_mut().filter(|c| c.tol > 0.0) {
                    c.tol = t;
                    c.pass = c.value <= t;
                }
            }
            let pass = !checks.is_empty() && checks.iter().all(|c| c.pass);
            Criterion { id, title: title.into(), pass, checks }
        })
        .collect();
    Report { seed, tol_override, pass: criteria.iter().all(|c| c.pass), criteria }
}

pub fn run_all(seed: u64, tol_override: Option<f64>) -> Report {
    run(seed, tol_override, &[])
}

/// Collects `Result`-producing measurements, turning errors into failed checks.
pub(crate) fn attempt(name: &str, f: impl FnOnce() -> Result<Check, relkin::Error>) -> Check {
    f().unwrap_or_else(|e| Check::error(name, e))
}

pub(crate) fn rand_unit(rng: &mut impl Rng) -> nalgebra::Vector3<f64> {
    loop {
        let v = nalgebra::Vector3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 0.05 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Uniform speed in `[0, max)`, uniform direction.
pub(crate) fn rand_beta(rng: &mut impl Rng, max: f64) -> nalgebra::Vector3<f64> {
    rand_unit(rng) * (max * rng.random::<f64>())
}

pub(crate) fn rand_rotation(rng: &mut impl Rng) -> nalgebra::Matrix3<f64> {
    oracle::rodrigues(&rand_unit(rng), rng.random_range(0.0..std::f64::consts::PI))
}
