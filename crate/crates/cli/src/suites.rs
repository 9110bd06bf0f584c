//! Verification suites run by `verify`. Each suite counts the cases it
//! checked and the ones that failed.

use inertia_core::config::{
    check_equivariance, decode_phi, encode_phi, interval_to_nerve_point, nerve_point_to_interval, Ambient,
    Configuration,
};
use inertia_core::groupoid::{connected_components, inertia, FiniteGroupoid, MorphismId};
use inertia_core::homology::{
    connes_maps, hochschild_homology, homology, normalized_chains, periodic_homology, HomologyError, Ring,
};
use inertia_core::nerve::{cyclic_nerve, free_cyclic, inertia_simplicial, iso_f_map, iso_h_map, nerve};
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub detail: String,
}

impl SuiteResult {
    fn new(name: impl Into<String>, cases: usize, failures: usize, detail: impl Into<String>) -> Self {
        SuiteResult {
            name: name.into(),
            cases,
            failures,
            detail: detail.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn simplices_up_to(counts: impl Iterator<Item = usize>) -> usize {
    counts.sum()
}

/// Simplicial and cyclic identities of the nerve, the cyclic nerve, the
/// inertia simplicial set and the free cyclic set on the nerve.
pub fn identities(g: &FiniteGroupoid, cap: usize) -> Vec<SuiteResult> {
    let x = nerve(g, cap);
    let y = cyclic_nerve(g, cap);
    let l = inertia_simplicial(g, cap);
    let f = free_cyclic(&x);
    let total = |s: &inertia_core::nerve::SimplicialLevelSet| simplices_up_to((0..=s.max_level()).map(|n| s.count(n)));
    vec![
        SuiteResult::new("identities nerve", total(&x), x.verify_identities().len(), ""),
        SuiteResult::new(
            "identities cyclic nerve",
            total(y.simplicial()),
            y.verify_identities().len(),
            "",
        ),
        SuiteResult::new(
            "identities inertia",
            total(l.simplicial()),
            l.verify_identities().len(),
            "",
        ),
        SuiteResult::new(
            "identities free cyclic",
            total(f.simplicial()),
            f.verify_identities().len(),
            "",
        ),
    ]
}

/// `f` and `h` are inverse bijections commuting with every structure map.
pub fn isomorphisms(g: &FiniteGroupoid, cap: usize) -> SuiteResult {
    let y = cyclic_nerve(g, cap);
    let l = inertia_simplicial(g, cap);
    let cases = (0..=cap).map(|n| y.count(n)).sum();
    let (f, h) = match (iso_f_map(g, &l, &y), iso_h_map(g, &y, &l)) {
        (Ok(f), Ok(h)) => (f, h),
        (Err(e), _) | (_, Err(e)) => return SuiteResult::new("isomorphisms f/h", cases, cases.max(1), e.to_string()),
    };
    let failures = usize::from(!f.then(&h).is_identity())
        + usize::from(!h.then(&f).is_identity())
        + f.verify_cyclic(&l, &y).len()
        + h.verify_cyclic(&y, &l).len();
    SuiteResult::new("isomorphisms f/h", cases, failures, "")
}

/// `HH_*(cyclic nerve)` against `H_*(nerve(∧G))`.
pub fn hochschild_theorem(g: &FiniteGroupoid, ring: Ring, cap: usize) -> Result<SuiteResult, HomologyError> {
    let hh = hochschild_homology(&cyclic_nerve(g, cap), ring, cap)?;
    let (ig, _) = inertia(g).map_err(|e| HomologyError::Inconsistent(e.to_string()))?;
    let h = homology(&normalized_chains(&nerve(&ig, cap), ring, cap)?);
    let top = hh.validity().min(h.validity()).unwrap_or(0);
    let failures = (0..=top).filter(|&n| hh.degree(n).ok() != h.degree(n).ok()).count()
        + usize::from(hh.validity() != h.validity());
    Ok(SuiteResult::new(
        "HH = H(nerve of inertia)",
        top + 1,
        failures,
        format!("ring {ring}, degrees 0..{top}"),
    ))
}

/// `0 → HH_k → HC_k → HC_{k−2} → 0` over ℚ in every degree within validity.
pub fn connes_splitting(g: &FiniteGroupoid, cap: usize) -> Result<SuiteResult, HomologyError> {
    let maps = connes_maps(&cyclic_nerve(g, cap), Ring::Rationals, cap)?;
    let degrees = maps.validity().map_or(0, |v| v + 1);
    Ok(SuiteResult::new(
        "Connes splitting",
        degrees,
        maps.splitting_failures().len(),
        format!("ring Q, degrees 0..{}", degrees.saturating_sub(1)),
    ))
}

/// `HP_0` equals the number of inertia components and `HP_1 = 0`.
pub fn periodic(g: &FiniteGroupoid, cap: usize) -> Result<SuiteResult, HomologyError> {
    let (ig, _) = inertia(g).map_err(|e| HomologyError::Inconsistent(e.to_string()))?;
    let components = connected_components(&ig).len();
    let detail = format!("HP0 expected {components}");
    match periodic_homology(&cyclic_nerve(g, cap), 0, cap) {
        Ok(p) => {
            let failures = usize::from(p.hp[0] != components) + usize::from(p.hp[1] != 0);
            Ok(SuiteResult::new(
                "periodic homology",
                2,
                failures,
                format!("{detail}, got {}", p.hp[0]),
            ))
        }
        Err(HomologyError::Inconsistent(why)) => Ok(SuiteResult::new("periodic homology", 2, 2, why)),
        Err(e) => Err(e),
    }
}

/// Positive rationals with denominator at most `max_den` and numerator
/// below it, in increasing order, deduplicated.
fn fractions(max_den: i64, include_zero: bool, include_one: bool) -> Vec<BigRational> {
    let mut v: Vec<BigRational> = (1..=max_den)
        .flat_map(|d| (0..=d).map(move |n| BigRational::new(n.into(), d.into())))
        .filter(|q| (include_zero || !q.is_zero()) && (include_one || !q.is_one()))
        .collect();
    v.sort();
    v.dedup();
    v
}

/// Tuples of `len` values from `values` summing to one.
fn compositions(values: &[BigRational], len: usize) -> Vec<Vec<BigRational>> {
    fn go(
        values: &[BigRational],
        left: usize,
        rest: BigRational,
        cur: &mut Vec<BigRational>,
        out: &mut Vec<Vec<BigRational>>,
    ) {
        if left == 1 {
            if values.contains(&rest) {
                cur.push(rest);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for v in values {
            if *v < rest {
                cur.push(v.clone());
                go(values, left - 1, &rest - v, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(values, len, BigRational::one(), &mut Vec::new(), &mut out);
    out
}

/// Increasing `k`-subsets of `values`.
fn subsets(values: &[BigRational], k: usize) -> Vec<Vec<BigRational>> {
    fn go(values: &[BigRational], from: usize, k: usize, cur: &mut Vec<BigRational>, out: &mut Vec<Vec<BigRational>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in from..values.len() {
            cur.push(values[i].clone());
            go(values, i + 1, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(values, 0, k, &mut Vec::new(), &mut out);
    out
}

/// The equivariance identity on every nondegenerate cyclic-nerve simplex of
/// level at most `max_level`, every coordinate vector with denominators at
/// most `max_den`, and every rotation index.
pub fn equivariance(g: &FiniteGroupoid, max_level: usize, max_den: i64) -> SuiteResult {
    let y = cyclic_nerve(g, max_level);
    let values = fractions(max_den, false, true);
    let (mut cases, mut failures) = (0, 0);
    for n in 0..=max_level {
        let coords = compositions(&values, n + 1);
        for k in y.simplicial().nondegenerate(n) {
            let x: Vec<MorphismId> = y.simplex(n, k).iter().map(|&m| m as usize).collect();
            for u in &coords {
                for r in 0..=n {
                    cases += 1;
                    if check_equivariance(g, &x, u, r) != Ok(true) {
                        failures += 1;
                    }
                }
            }
        }
    }
    SuiteResult::new(
        "equivariance",
        cases,
        failures,
        format!("levels 0..{max_level}, denominators <= {max_den}"),
    )
}

fn non_identity(g: &FiniteGroupoid, s: &[u32]) -> Option<Vec<MorphismId>> {
    s.iter()
        .map(|&m| (!g.is_identity(m as usize)).then_some(m as usize))
        .collect()
}

/// All valid configurations with at most `max_points` support points whose
/// positions have denominators at most `max_den`.
pub fn configurations(g: &FiniteGroupoid, ambient: Ambient, max_points: usize, max_den: i64) -> Vec<Configuration<'_>> {
    let mut out: Vec<Configuration<'_>> = (0..g.num_objects())
        .map(|x| Configuration::empty(g, ambient, x))
        .collect();
    let positions = fractions(max_den, ambient == Ambient::Circle, false);
    for m in 1..=max_points {
        let labels: Vec<Vec<MorphismId>> = match ambient {
            Ambient::Circle => {
                let y = cyclic_nerve(g, m - 1);
                y.simplicial()
                    .simplices(m - 1)
                    .filter_map(|s| non_identity(g, s))
                    .collect()
            }
            Ambient::Interval => {
                let x = nerve(g, m);
                x.simplices(m).filter_map(|s| non_identity(g, s)).collect()
            }
        };
        if labels.is_empty() {
            continue;
        }
        for pos in subsets(&positions, m) {
            for l in &labels {
                out.push(Configuration {
                    groupoid: g,
                    ambient,
                    support: pos.iter().cloned().zip(l.iter().copied()).collect(),
                    base: None,
                });
            }
        }
    }
    out
}

/// `decode ∘ encode = id` on circle configurations and the interval
/// correspondence round trip on interval configurations.
pub fn round_trips(g: &FiniteGroupoid, max_points: usize, max_den: i64) -> Vec<SuiteResult> {
    let detail = format!("up to {max_points} points, denominators <= {max_den}");
    let circle = configurations(g, Ambient::Circle, max_points, max_den);
    let circle_failures = circle
        .iter()
        .filter(|c| encode_phi(c).and_then(|p| decode_phi(g, &p)).as_ref() != Ok(*c))
        .count();
    let interval = configurations(g, Ambient::Interval, max_points, max_den);
    let interval_failures = interval
        .iter()
        .filter(|c| {
            interval_to_nerve_point(c)
                .and_then(|p| nerve_point_to_interval(g, &p))
                .as_ref()
                != Ok(*c)
        })
        .count();
    vec![
        SuiteResult::new("round trip circle", circle.len(), circle_failures, detail.clone()),
        SuiteResult::new("round trip interval", interval.len(), interval_failures, detail),
    ]
}
