#![allow(dead_code)]

use inertia_core::catalog;
use inertia_core::groupoid::{FiniteGroupoid, GroupTable};
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

/// The six test groupoids with their number of inertia components.
pub fn six() -> Vec<(&'static str, FiniteGroupoid, usize)> {
    [
        ("trivial", 1),
        ("Z2", 2),
        ("Z3", 3),
        ("Z4", 4),
        ("S3", 3),
        ("S3_on_3", 2),
    ]
    .into_iter()
    .map(|(name, comps)| (name, catalog::groupoid(name).unwrap(), comps))
    .collect()
}

/// Centralizer of `a` in `g`, as its own group table.
pub fn centralizer(g: &GroupTable, a: usize) -> GroupTable {
    let elems: Vec<usize> = (0..g.order()).filter(|&x| g.mul(a, x) == g.mul(x, a)).collect();
    let pos = |x: usize| elems.iter().position(|&y| y == x).unwrap();
    let names = elems.iter().map(|&x| g.names()[x].clone()).collect();
    let table = elems
        .iter()
        .map(|&x| elems.iter().map(|&y| pos(g.mul(x, y))).collect())
        .collect();
    GroupTable::new(names, table).unwrap()
}

/// Conjugacy class representatives by brute force.
pub fn class_representatives(g: &GroupTable) -> Vec<usize> {
    let mut seen = vec![false; g.order()];
    let mut reps = Vec::new();
    for a in 0..g.order() {
        if seen[a] {
            continue;
        }
        reps.push(a);
        for x in 0..g.order() {
            seen[g.mul(g.mul(g.inverse(x), a), x)] = true;
        }
    }
    reps
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `k` distinct rationals in `[lo, 1)` with denominators at most `max_den`,
/// sorted. `lo` is 0 or a tiny positive bound.
pub fn distinct_positions(rng: &mut impl Rng, k: usize, max_den: i64, open_at_zero: bool) -> Option<Vec<BigRational>> {
    let mut pool: Vec<BigRational> = (1..=max_den)
        .flat_map(|d| (0..d).map(move |n| q(n, d)))
        .filter(|p| !(open_at_zero && *p == q(0, 1)))
        .collect();
    pool.sort();
    pool.dedup();
    if pool.len() < k {
        return None;
    }
    let mut pick: Vec<BigRational> = pool.choose_multiple(rng, k).cloned().collect();
    pick.sort();
    Some(pick)
}

/// Positive rationals with denominators at most `max_den` summing to 1.
pub fn interior_coords(rng: &mut impl Rng, parts: usize, max_den: i64) -> Option<Vec<BigRational>> {
    let cuts = distinct_positions(rng, parts - 1, max_den, true)?;
    let mut bounds = vec![q(0, 1)];
    bounds.extend(cuts);
    bounds.push(q(1, 1));
    Some(bounds.windows(2).map(|w| &w[1] - &w[0]).collect())
}
