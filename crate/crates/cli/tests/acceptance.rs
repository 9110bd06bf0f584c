//! Acceptance criteria, one PASS/FAIL line each. Every comparison is exact:
//! the tolerance for all ten criteria is zero.

use std::process::Command as Process;
use std::time::Instant;

use inertia_cli::suites;
use inertia_core::catalog;
use inertia_core::chen_ruan::{compare_hp_horb, point_quotient_sectors};
use inertia_core::config::check_equivariance;
use inertia_core::groupoid::{group_as_groupoid, inertia, FiniteGroupoid, GroupTable};
use inertia_core::homology::{
    connes_maps, hochschild_homology, homology, normalized_chains, periodic_homology, DegreeHomology, Ring,
};
use inertia_core::nerve::{cyclic_nerve, free_cyclic, inertia_simplicial, iso_f_map, iso_h_map, nerve};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const IDENTITY_CAP: usize = 5;
const ISO_CAP: usize = 4;
const HH_CAP: usize = 5;
const CONNES_CAP: usize = 5;
const HP_CAP: usize = 5;
const EQUIVARIANCE_LEVEL: usize = 2;
const EQUIVARIANCE_DEN: i64 = 4;
const RANDOM_CASES: usize = 1000;
const RANDOM_DEN: i64 = 32;
const ROUND_TRIP_POINTS: usize = 3;
const ROUND_TRIP_DEN: i64 = 8;
const TOLERANCE: &str = "exact";

type Check = fn() -> (bool, String);

fn six() -> Vec<(&'static str, FiniteGroupoid)> {
    ["trivial", "Z2", "Z3", "Z4", "S3", "S3_on_3"]
        .into_iter()
        .map(|n| (n, catalog::groupoid(n).unwrap()))
        .collect()
}

/// Number of conjugacy classes, by brute force over the table.
fn class_count(g: &GroupTable, elems: &[usize]) -> usize {
    let mut seen = vec![false; g.order()];
    let mut count = 0;
    for &a in elems {
        if seen[a] {
            continue;
        }
        count += 1;
        for &x in elems {
            seen[g.mul(g.mul(g.inverse(x), a), x)] = true;
        }
    }
    count
}

fn subgroup_table(g: &GroupTable, elems: &[usize]) -> GroupTable {
    let pos = |x: usize| elems.iter().position(|&y| y == x).unwrap();
    let names = elems.iter().map(|&x| g.names()[x].clone()).collect();
    let table = elems
        .iter()
        .map(|&x| elems.iter().map(|&y| pos(g.mul(x, y))).collect())
        .collect();
    GroupTable::new(names, table).unwrap()
}

/// `H_n(Bℤ/m; ℤ)` from the periodic resolution.
fn cyclic_group_homology(m: usize, n: usize) -> DegreeHomology {
    match n {
        0 => DegreeHomology::free(1),
        n if n % 2 == 1 => DegreeHomology {
            rank: 0,
            torsion: vec![BigInt::from(m)],
        },
        _ => DegreeHomology::default(),
    }
}

fn criterion_1() -> (bool, String) {
    let mut bad = Vec::new();
    let mut simplices = 0;
    for (name, g) in six() {
        let x = nerve(&g, IDENTITY_CAP);
        let y = cyclic_nerve(&g, IDENTITY_CAP);
        let l = inertia_simplicial(&g, IDENTITY_CAP);
        let f = free_cyclic(&x);
        simplices += (0..=IDENTITY_CAP)
            .map(|n| x.count(n) + y.count(n) + l.count(n) + f.count(n))
            .sum::<usize>();
        let v = x.verify_identities().len()
            + y.verify_identities().len()
            + l.verify_identities().len()
            + f.verify_identities().len();
        if v > 0 {
            bad.push(format!("{name}: {v} violations"));
        }
    }
    (
        bad.is_empty(),
        format!("cap {IDENTITY_CAP}, {simplices} simplices checked; failing: {bad:?}"),
    )
}

fn criterion_2() -> (bool, String) {
    let mut bad = Vec::new();
    for (name, g) in six() {
        let y = cyclic_nerve(&g, ISO_CAP);
        let l = inertia_simplicial(&g, ISO_CAP);
        let (f, h) = (iso_f_map(&g, &l, &y).unwrap(), iso_h_map(&g, &y, &l).unwrap());
        let ok = f.then(&h).is_identity()
            && h.then(&f).is_identity()
            && f.verify_cyclic(&l, &y).is_empty()
            && h.verify_cyclic(&y, &l).is_empty();
        if !ok {
            bad.push(name);
        }
    }
    (bad.is_empty(), format!("cap {ISO_CAP}; failing: {bad:?}"))
}

fn criterion_3() -> (bool, String) {
    let mut detail = Vec::new();
    let mut ok = true;
    for (m, top) in [(2usize, 7usize), (3, 5)] {
        let g = group_as_groupoid(&GroupTable::cyclic(m));
        let h = homology(&normalized_chains(&nerve(&g, top + 1), Ring::Integers, top + 1).unwrap());
        let got: Vec<String> = (0..=top)
            .map(|n| h.degree(n).map_or("?".into(), |d| d.to_string()))
            .collect();
        let want: Vec<String> = (0..=top).map(|n| cyclic_group_homology(m, n).to_string()).collect();
        ok &= got == want;
        detail.push(format!("Z{m}: ({})", got.join(", ")));
    }
    (ok, detail.join("; "))
}

fn criterion_4() -> (bool, String) {
    let mut detail = Vec::new();
    let mut ok = true;
    for name in ["Z2", "Z3", "S3"] {
        let t = catalog::group(name).unwrap();
        let g = group_as_groupoid(&t);
        let hh = hochschild_homology(&cyclic_nerve(&g, HH_CAP), Ring::Integers, HH_CAP).unwrap();
        let (ig, _) = inertia(&g).unwrap();
        let hi = homology(&normalized_chains(&nerve(&ig, HH_CAP), Ring::Integers, HH_CAP).unwrap());
        let mut reps = Vec::new();
        let mut seen = vec![false; t.order()];
        for a in 0..t.order() {
            if !seen[a] {
                reps.push(a);
                for x in 0..t.order() {
                    seen[t.mul(t.mul(t.inverse(x), a), x)] = true;
                }
            }
        }
        let mut oracle = vec![DegreeHomology::default(); HH_CAP];
        for &a in &reps {
            let c: Vec<usize> = (0..t.order()).filter(|&x| t.mul(a, x) == t.mul(x, a)).collect();
            let cg = group_as_groupoid(&subgroup_table(&t, &c));
            let hc = homology(&normalized_chains(&nerve(&cg, HH_CAP), Ring::Integers, HH_CAP).unwrap());
            for (n, slot) in oracle.iter_mut().enumerate() {
                *slot = slot.sum(hc.degree(n).unwrap());
            }
        }
        let top = hh.validity().unwrap();
        let same = top + 1 == HH_CAP
            && (0..=top).all(|n| hh.degree(n).ok() == hi.degree(n).ok() && hh.degree(n).ok() == Some(&oracle[n]));
        ok &= same;
        let shown: Vec<String> = hh.degrees().iter().map(ToString::to_string).collect();
        detail.push(format!("{name}: ({})", shown.join(", ")));
    }
    (ok, format!("cap {HH_CAP}; {}", detail.join("; ")))
}

fn criterion_5() -> (bool, String) {
    let mut bad = Vec::new();
    let mut detail = Vec::new();
    for (name, g) in six() {
        let maps = connes_maps(&cyclic_nerve(&g, CONNES_CAP), Ring::Rationals, CONNES_CAP).unwrap();
        let ranks = maps.ranks.as_ref().unwrap();
        let hc: Vec<usize> = ranks.iter().map(|r| r.hc).collect();
        let hh: Vec<usize> = ranks.iter().map(|r| r.hh).collect();
        let splits = (0..hc.len()).all(|k| hc[k] == (0..=k / 2).map(|j| hh[k - 2 * j]).sum::<usize>());
        if !splits || !maps.splitting_failures().is_empty() {
            bad.push(name);
        }
        detail.push(format!("{name} HC {hc:?}"));
    }
    (
        bad.is_empty(),
        format!("cap {CONNES_CAP}; {}; failing: {bad:?}", detail.join(", ")),
    )
}

/// Σ over orbits of the number of conjugacy classes of a point stabilizer.
fn orbit_stabilizer_count(g: &GroupTable, action: &[Vec<usize>], points: usize) -> usize {
    let mut seen = vec![false; points];
    let mut total = 0;
    for x in 0..points {
        if seen[x] {
            continue;
        }
        for row in action {
            seen[row[x]] = true;
        }
        let stab: Vec<usize> = (0..g.order()).filter(|&h| action[h][x] == x).collect();
        total += class_count(g, &stab);
    }
    total
}

fn criterion_6() -> (bool, String) {
    let s3 = GroupTable::symmetric(3);
    let action: Vec<Vec<usize>> = s3
        .names()
        .iter()
        .map(|w| w.bytes().map(|b| (b - b'1') as usize).collect())
        .collect();
    let all = |t: &GroupTable| class_count(t, &(0..t.order()).collect::<Vec<_>>());
    let expected = [
        all(&GroupTable::trivial()),
        all(&GroupTable::cyclic(2)),
        all(&GroupTable::cyclic(3)),
        all(&GroupTable::cyclic(4)),
        all(&s3),
        orbit_stabilizer_count(&s3, &action, 3),
    ];
    let mut ok = expected == [1, 2, 3, 4, 3, 2];
    let mut got = Vec::new();
    for ((name, g), want) in six().into_iter().zip(expected) {
        match periodic_homology(&cyclic_nerve(&g, HP_CAP), 0, HP_CAP) {
            Ok(p) => {
                ok &= p.hp == [want, 0] && p.hochschild_sum == p.hp;
                got.push(format!("{name} {:?}", p.hp));
            }
            Err(e) => {
                ok = false;
                got.push(format!("{name} error: {e}"));
            }
        }
    }
    (
        ok,
        format!("cap {HP_CAP}; HP0 expected {expected:?}; got {}", got.join(", ")),
    )
}

fn random_case(rng: &mut ChaCha8Rng, g: &FiniteGroupoid) -> (Vec<usize>, Vec<BigRational>, usize) {
    let n = rng.gen_range(0..=3);
    let y = cyclic_nerve(g, n);
    let nondeg: Vec<usize> = y.simplicial().nondegenerate(n).collect();
    let k = *nondeg.choose(rng).unwrap();
    let x: Vec<usize> = y.simplex(n, k).iter().map(|&m| m as usize).collect();
    let den = rng.gen_range(n as i64 + 1..=RANDOM_DEN);
    let mut cuts: Vec<i64> = (1..den).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<i64> = cuts.into_iter().take(n).collect();
    cuts.sort_unstable();
    let bounds: Vec<i64> = std::iter::once(0).chain(cuts).chain(std::iter::once(den)).collect();
    let u = bounds
        .windows(2)
        .map(|w| BigRational::new((w[1] - w[0]).into(), den.into()))
        .collect();
    (x, u, rng.gen_range(0..=n))
}

fn criterion_7() -> (bool, String) {
    let mut cases = 0;
    let mut failures = 0;
    let groupoids = [catalog::groupoid("Z2").unwrap(), catalog::groupoid("S3").unwrap()];
    for g in &groupoids {
        let r = suites::equivariance(g, EQUIVARIANCE_LEVEL, EQUIVARIANCE_DEN);
        cases += r.cases;
        failures += r.failures;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x51);
    let mut random_failures = 0;
    for i in 0..RANDOM_CASES {
        let g = &groupoids[i % 2];
        let (x, u, r) = random_case(&mut rng, g);
        if check_equivariance(g, &x, &u, r) != Ok(true) {
            random_failures += 1;
        }
    }
    (
        failures == 0 && random_failures == 0,
        format!(
            "exhaustive {cases} cases (levels <= {EQUIVARIANCE_LEVEL}, denominators <= {EQUIVARIANCE_DEN}), {failures} failures; \
             random {RANDOM_CASES} cases (denominators <= {RANDOM_DEN}), {random_failures} failures"
        ),
    )
}

fn criterion_8() -> (bool, String) {
    let mut detail = Vec::new();
    let mut ok = true;
    for name in ["Z2", "S3_on_3"] {
        let g = catalog::groupoid(name).unwrap();
        for r in suites::round_trips(&g, ROUND_TRIP_POINTS, ROUND_TRIP_DEN) {
            ok &= r.passed() && r.cases > 0;
            detail.push(format!("{name} {}: {}/{}", r.name, r.cases - r.failures, r.cases));
        }
    }
    (
        ok,
        format!(
            "<= {ROUND_TRIP_POINTS} points, denominators <= {ROUND_TRIP_DEN}; {}",
            detail.join(", ")
        ),
    )
}

fn criterion_9() -> (bool, String) {
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, want) in [("Z2", 2), ("Z3", 3), ("S3", 3)] {
        let t = catalog::group(name).unwrap();
        let classes = class_count(&t, &(0..t.order()).collect::<Vec<_>>());
        let p = periodic_homology(&cyclic_nerve(&group_as_groupoid(&t), HP_CAP), 0, HP_CAP).unwrap();
        let c = compare_hp_horb(&point_quotient_sectors(&t), p.hp[0], p.hp[1]).unwrap();
        ok &= c.matches() && c.even_rank == want && classes == want && c.odd_rank == 0;
        detail.push(format!(
            "{name}: even {} = HP0 {} = classes {classes}, odd {}",
            c.even_rank, c.hp0_rank, c.odd_rank
        ));
    }
    (ok, detail.join("; "))
}

fn criterion_10() -> (bool, String) {
    let run = || {
        Process::new(env!("CARGO_BIN_EXE_inertia"))
            .args(["verify", "S3_on_3", "--cap", "3"])
            .output()
            .expect("run inertia")
    };
    let (a, b) = (run(), run());
    let ok = a.status.success() && b.status.success() && a.stdout == b.stdout && !a.stdout.is_empty();
    (
        ok,
        format!(
            "`verify S3_on_3 --cap 3` twice: {} bytes each, identical: {}",
            a.stdout.len(),
            a.stdout == b.stdout
        ),
    )
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("structure identities", criterion_1),
        ("f/h cyclic isomorphisms", criterion_2),
        ("group homology oracle", criterion_3),
        ("HH theorem", criterion_4),
        ("Connes splitting", criterion_5),
        ("periodic homology", criterion_6),
        ("phi equivariance", criterion_7),
        ("encode/decode round trips", criterion_8),
        ("Chen-Ruan triangle", criterion_9),
        ("determinism", criterion_10),
    ];
    println!("tolerance: {TOLERANCE}");
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = check();
        failed += usize::from(!ok);
        println!(
            "{} {:>2} {name}: {detail} [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
