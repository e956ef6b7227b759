use rand::seq::IndexedRandom;
use rand::Rng;
use relkin::lattice::{self, GridBox, GridPoint, Lattice, Region, SeparationMode};

use crate::oracle;
use crate::{Check, Ctx};

pub const SIDE: i64 = 41;
const HALF: i64 = SIDE / 2;
const PAIRS: usize = 200;

fn random_points(rng: &mut impl Rng, k: usize, reach: i64) -> Vec<GridPoint> {
    (0..k).map(|_| vec![rng.random_range(-reach..=reach), rng.random_range(-reach..=reach)]).collect()
}

fn random_complete(lat: &Lattice, rng: &mut impl Rng) -> Region {
    let k = rng.random_range(1..=3);
    let s = lat.region(&random_points(rng, k, 12)).expect("inside the box");
    lat.completion(&s)
}

fn laws(lat: &Lattice, rng: &mut impl Rng) -> (usize, usize) {
    let (mut demorgan, mut ortho) = (0, 0);
    for _ in 0..PAIRS {
        let (a, b) = (random_complete(lat, rng), random_complete(lat, rng));
        let (na, nb) = (lat.complement(&a), lat.complement(&b));
        let ok = (|| -> relkin::Result<bool> {
            Ok(lat.complement(&lat.meet(&a, &b)?) == lat.join(&na, &nb)?
                && lat.complement(&lat.join(&a, &b)?) == lat.meet(&na, &nb)?)
        })();
        if !ok.unwrap_or(false) {
            demorgan += 1;
        }
        let ok = (|| -> relkin::Result<bool> {
            Ok(lat.complement(&na) == a && lat.meet(&a, &na)?.is_empty() && lat.join(&a, &na)? == lat.full())
        })();
        if !ok.unwrap_or(false) {
            ortho += 1;
        }
    }
    (demorgan, ortho)
}

fn as_region(lat: &Lattice, pts: &[[i64; 2]]) -> Region {
    let pts: Vec<GridPoint> = pts.iter().map(|p| p.to_vec()).collect();
    lat.region(&pts).expect("inside the box")
}

pub fn lattice(ctx: &Ctx) -> Vec<Check> {
    let mut rng = ctx.rng(10);
    let gbox = GridBox::centred(2, SIDE).expect("odd side");
    let caus = Lattice::new(gbox.clone(), SeparationMode::Causal);
    let chron = Lattice::new(gbox, SeparationMode::Chronological);
    let mut checks = Vec::new();

    let mut bad = 0;
    for _ in 0..20 {
        let k = rng.random_range(1..=4);
        let pts = random_points(&mut rng, k, HALF);
        let s: Vec<[i64; 2]> = pts.iter().map(|p| [p[0], p[1]]).collect();
        if caus.complement(&caus.region(&pts).expect("box")) != as_region(&caus, &oracle::causal_complement_bruteforce(HALF, &s)) {
            bad += 1;
        }
    }
    checks.push(Check::flag("causal complement vs brute-force scan", bad == 0));

    for (name, lat) in [("Caus", &caus), ("Chron", &chron)] {
        let (dm, oc) = laws(lat, &mut rng);
        checks.push(Check::flag(&format!("{name}: De Morgan on {PAIRS} complete pairs"), dm == 0));
        checks.push(Check::flag(&format!("{name}: orthocomplement laws on {PAIRS} complete regions"), oc == 0));
    }

    // the grid keeps these laws but loses orthomodularity at unit scale
    let (mut fails, mut first) = (0usize, None);
    for _ in 0..PAIRS {
        let k = rng.random_range(2..=4);
        let b = chron.completion(&chron.region(&random_points(&mut rng, k, 12)).expect("box"));
        let inside = chron.points(&b);
        let m = rng.random_range(1..=2);
        let pick: Vec<GridPoint> = inside.choose_multiple(&mut rng, m).cloned().collect();
        let a = chron.completion(&chron.region(&pick).expect("box"));
        match chron.check_orthomodular(&a, &b) {
            Ok(r) if r.holds => {}
            Ok(r) => {
                fails += 1;
                if first.is_none() {
                    first = Some(format!("a = {:?}, excess = {:?}", pick, chron.points(&r.excess)));
                }
            }
            Err(_) => fails += 1,
        }
    }
    let check = Check::le(&format!("Chron orthomodular on {PAIRS} nested pairs"), fails as f64, 0.0);
    checks.push(match first {
        Some(ex) => check.with_note(format!("{fails} pairs fail; first: {ex}")),
        None => check,
    });

    match lattice::fig2_counterexample(&caus, 4, 2) {
        Ok(ce) => {
            checks.push(Check::flag("counterexample: a nonempty, a within b", !ce.a.is_empty() && ce.a.is_subset(&ce.b)));
            checks.push(
                Check::flag("Caus: b meet (a join b') strictly above a", !ce.report.holds && !ce.report.excess.is_empty())
                    .with_note(format!("excess {} points", ce.report.excess.len())),
            );
            let margin = caus.margin(&ce.a_join_b_prime).unwrap_or(0);
            checks.push(Check::flag("witness clear of the box boundary", margin >= 1).with_note(format!("margin {margin}")));
        }
        Err(e) => checks.push(Check::error("counterexample", e)),
    }

    let (p, q) = ([-3i64, 0i64], [4i64, 2i64]);
    let (rp, rq) = (as_region(&caus, &[p]), as_region(&caus, &[q]));
    let diamond = as_region(&caus, &oracle::closed_diamond_bruteforce(HALF, p, q));
    checks.push(Check::flag("timelike atoms: join = closed diamond", caus.join(&rp, &rq).is_ok_and(|j| j == diamond)));
    checks.push(Check::flag("timelike atoms: meet = empty", caus.meet(&rp, &rq).is_ok_and(|m| m.is_empty())));
    checks.push(Check::flag(
        "library closed diamond = brute force",
        caus.diamond(&p, &q, true).is_ok_and(|d| d == diamond),
    ));
    checks.push(Check::flag(
        "no covering: a complete region strictly between {p} and {p} join {q}",
        caus.covering_witness(&p, &q).is_ok_and(|w| w.is_some()),
    ));
    checks
}
