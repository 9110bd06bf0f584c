//! Simplicial and cyclic sets built from a finite groupoid: the nerve, the
//! cyclic nerve, the simplicial set of the inertia groupoid, and the free
//! cyclic set on a simplicial set.
//!
//! Simplices are tuples of ids (`u32`), sorted lexicographically within each
//! degree. Degree 0 of the nerve holds object ids; everything else holds
//! morphism ids (the free cyclic set holds `(r, k)` pairs, see
//! [`free_cyclic`]).

mod iso;
mod level;

pub use iso::{
    inertia_chain_map, is_cyclic_nerve_simplex, is_inertia_simplex, iso_f, iso_f_map, iso_h, iso_h_map, LevelMap,
    MapError, MapViolation, NotInLevel,
};
pub use level::{CyclicLevelSet, IdentityViolation, Relation, SimplicialLevelSet, OUT_OF_LEVEL};

use crate::groupoid::{FiniteGroupoid, MorphismId};
use level::{build_cyclic, build_simplicial, mark_degenerate, Level, TupleRules};

pub const DEFAULT_CAP: usize = 6;

fn ix(m: MorphismId) -> u32 {
    m as u32
}

fn extend_chains(
    g: &FiniteGroupoid,
    prefix: &mut Vec<u32>,
    remaining: usize,
    out: &mut Vec<Vec<u32>>,
    accept: &dyn Fn(&[u32]) -> bool,
) {
    if remaining == 0 {
        if accept(prefix) {
            out.push(prefix.clone());
        }
        return;
    }
    let last = *prefix.last().expect("nonempty prefix") as usize;
    for &m in g.outgoing(g.tgt(last)) {
        prefix.push(ix(m));
        extend_chains(g, prefix, remaining - 1, out, accept);
        prefix.pop();
    }
}

/// All composable chains `(g_1, …, g_len)`, `len ≥ 1`, with first arrow drawn
/// from `firsts`.
fn chains(
    g: &FiniteGroupoid,
    firsts: impl Iterator<Item = MorphismId>,
    len: usize,
    accept: &dyn Fn(&[u32]) -> bool,
) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(len);
    for m in firsts {
        prefix.push(ix(m));
        extend_chains(g, &mut prefix, len - 1, &mut out, accept);
        prefix.pop();
    }
    out
}

fn compose(g: &FiniteGroupoid, a: u32, b: u32) -> u32 {
    ix(g.compose(a as usize, b as usize))
}

struct NerveRules<'a>(&'a FiniteGroupoid);

impl TupleRules for NerveRules<'_> {
    fn enumerate(&self, n: usize) -> Vec<Vec<u32>> {
        let g = self.0;
        if n == 0 {
            (0..g.num_objects()).map(|x| vec![x as u32]).collect()
        } else {
            chains(g, 0..g.num_morphisms(), n, &|_| true)
        }
    }

    fn face(&self, n: usize, i: usize, s: &[u32], out: &mut Vec<u32>) {
        let g = self.0;
        if n == 1 {
            let m = s[0] as usize;
            out.push(if i == 0 { g.tgt(m) } else { g.src(m) } as u32);
        } else if i == 0 {
            out.extend_from_slice(&s[1..]);
        } else if i == n {
            out.extend_from_slice(&s[..n - 1]);
        } else {
            out.extend_from_slice(&s[..i - 1]);
            out.push(compose(g, s[i - 1], s[i]));
            out.extend_from_slice(&s[i + 1..]);
        }
    }

    fn degeneracy(&self, n: usize, i: usize, s: &[u32], out: &mut Vec<u32>) {
        let g = self.0;
        if n == 0 {
            out.push(ix(g.ident(s[0] as usize)));
            return;
        }
        let x = if i < n {
            g.src(s[i] as usize)
        } else {
            g.tgt(s[n - 1] as usize)
        };
        out.extend_from_slice(&s[..i]);
        out.push(ix(g.ident(x)));
        out.extend_from_slice(&s[i..]);
    }
}

/// The nerve `G_*`: degree `n` holds the composable chains
/// `x_0 →g_1→ x_1 → ⋯ →g_n→ x_n` (degree 0 holds the objects).
///
/// `d_0` drops `g_1`, `d_n` drops `g_n`, the inner faces compose
/// `g_i g_{i+1}`; `s_i` inserts the identity at `x_i` in position `i`.
/// A chain is degenerate iff it contains an identity.
pub fn nerve(g: &FiniteGroupoid, cap: usize) -> SimplicialLevelSet {
    build_simplicial(&NerveRules(g), cap, |n| n.max(1))
}

struct CyclicNerveRules<'a>(&'a FiniteGroupoid);

impl TupleRules for CyclicNerveRules<'_> {
    fn enumerate(&self, n: usize) -> Vec<Vec<u32>> {
        let g = self.0;
        chains(g, 0..g.num_morphisms(), n + 1, &|c| {
            g.tgt(*c.last().unwrap() as usize) == g.src(c[0] as usize)
        })
    }

    fn face(&self, n: usize, i: usize, s: &[u32], out: &mut Vec<u32>) {
        let g = self.0;
        if i < n {
            out.extend_from_slice(&s[..i]);
            out.push(compose(g, s[i], s[i + 1]));
            out.extend_from_slice(&s[i + 2..]);
        } else {
            out.push(compose(g, s[n], s[0]));
            out.extend_from_slice(&s[1..n]);
        }
    }

    fn degeneracy(&self, _n: usize, i: usize, s: &[u32], out: &mut Vec<u32>) {
        let g = self.0;
        out.extend_from_slice(&s[..=i]);
        out.push(ix(g.ident(g.tgt(s[i] as usize))));
        out.extend_from_slice(&s[i + 1..]);
    }

    fn cyclic(&self, _n: usize, s: &[u32], out: &mut Vec<u32>) {
        Self::rotate(s, out);
    }
}

/// The cyclic nerve `Y_*(G)`: degree `n` holds loops `(g_0, …, g_n)` of
/// composable arrows with `tgt(g_n) = src(g_0)`.
///
/// `d_i` composes `g_i g_{i+1}` for `i < n`, `d_n` gives
/// `(g_n g_0, g_1, …, g_{n-1})`, `s_i` inserts an identity after `g_i`, and
/// `t_n` rotates right: `(g_n, g_0, …, g_{n-1})`.
pub fn cyclic_nerve(g: &FiniteGroupoid, cap: usize) -> CyclicLevelSet {
    build_cyclic(&CyclicNerveRules(g), cap, |n| n + 1)
}

/// `t_n` on a cyclic nerve tuple.
pub fn rotate_loop(s: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(s.len());
    CyclicNerveRules::rotate(s, &mut out);
    out
}

impl CyclicNerveRules<'_> {
    fn rotate(s: &[u32], out: &mut Vec<u32>) {
        let n = s.len() - 1;
        out.push(s[n]);
        out.extend_from_slice(&s[..n]);
    }
}

struct InertiaRules<'a>(&'a FiniteGroupoid);

impl TupleRules for InertiaRules<'_> {
    fn enumerate(&self, n: usize) -> Vec<Vec<u32>> {
        let g = self.0;
        let autos = g.automorphisms();
        if n == 0 {
            return autos.map(|a| vec![ix(a)]).collect();
        }
        let mut out = Vec::new();
        for a in autos {
            let mut prefix = vec![ix(a)];
            for &v in g.outgoing(g.src(a)) {
                prefix.push(ix(v));
                extend_chains(g, &mut prefix, n - 1, &mut out, &|_| true);
                prefix.pop();
            }
        }
        out
    }

    fn face(&self, n: usize, i: usize, s: &[u32], out: &mut Vec<u32>) {
        let g = self.0;
        if i == 0 {
            out.push(ix(g.conjugate(s[0] as usize, s[1] as usize)));
            out.extend_from_slice(&s[2..]);
        } else if i == n {
            out.extend_from_slice(&s[..n]);
        } else {
            out.extend_from_slice(&s[..i]);
            out.push(compose(g, s[i], s[i + 1]));
            out.extend_from_slice(&s[i + 2..]);
        }
    }

    fn degeneracy(&self, _n: usize, i: usize, s: &[u32], out: &mut Vec<u32>) {
        let g = self.0;
        let x = if i == 0 {
            g.src(s[0] as usize)
        } else {
            g.tgt(s[i] as usize)
        };
        out.extend_from_slice(&s[..=i]);
        out.push(ix(g.ident(x)));
        out.extend_from_slice(&s[i + 1..]);
    }

    fn cyclic(&self, n: usize, s: &[u32], out: &mut Vec<u32>) {
        let g = self.0;
        if n == 0 {
            out.push(s[0]);
            return;
        }
        let a = s[0] as usize;
        let path = g.compose_all(&s[1..].iter().map(|&v| v as usize).collect::<Vec<_>>());
        let back = g.compose(g.inv(path), a);
        out.push(ix(g.compose(back, path)));
        out.push(ix(back));
        out.extend_from_slice(&s[1..n]);
    }
}

/// The simplicial set `∧G_*` of the inertia groupoid, written as tuples
/// `(a, v_1, …, v_n)`: `a` an automorphism and `v_1, …, v_n` a chain
/// starting at its object, with the cyclic operator
/// `t(a, v_1, …, v_n) = (V⁻¹·a·V, V⁻¹·a, v_1, …, v_{n-1})`, `V = v_1⋯v_n`.
pub fn inertia_simplicial(g: &FiniteGroupoid, cap: usize) -> CyclicLevelSet {
    build_cyclic(&InertiaRules(g), cap, |n| n + 1)
}

/// The free cyclic set `S¹ ×~ X`: degree `n` is `ℤ/(n+1) × X_n`, stored as
/// tuples `[r, k]` with `k` the index of a simplex of `X_n`.
pub fn free_cyclic(x: &SimplicialLevelSet) -> CyclicLevelSet {
    let top = x.max_level();
    let mut levels: Vec<Level> = (0..=top)
        .map(|n| {
            let cx = x.count(n) as u32;
            let mut data = Vec::with_capacity(2 * (n + 1) * cx as usize);
            for r in 0..=n as u32 {
                for k in 0..cx {
                    data.extend_from_slice(&[r, k]);
                }
            }
            Level {
                width: 2,
                data,
                faces: Vec::new(),
                degeneracies: Vec::new(),
                degenerate: Vec::new(),
            }
        })
        .collect();
    let index = |n: usize, r: usize, k: u32| -> u32 {
        if k == OUT_OF_LEVEL {
            OUT_OF_LEVEL
        } else {
            (r * x.count(n) + k as usize) as u32
        }
    };

    let mut cyclic = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let cx = x.count(n);
        let pairs = || (0..=n).flat_map(move |r| (0..cx).map(move |k| (r, k)));
        if n >= 1 {
            levels[n].faces = (0..=n)
                .map(|i| {
                    pairs()
                        .map(|(r, k)| {
                            if r <= i {
                                index(n - 1, r % n, x.face(n, i - r, k))
                            } else {
                                index(n - 1, r - 1, x.face(n, n - r + i + 1, k))
                            }
                        })
                        .collect()
                })
                .collect();
        }
        if n < top {
            levels[n].degeneracies = (0..=n)
                .map(|i| {
                    pairs()
                        .map(|(r, k)| {
                            let (r2, j) = if r <= i { (r, i - r) } else { (r + 1, n - r + i + 1) };
                            index(n + 1, r2, x.degeneracy(n, j, k).unwrap_or(OUT_OF_LEVEL))
                        })
                        .collect()
                })
                .collect();
        }
        cyclic.push(pairs().map(|(r, k)| index(n, (r + 1) % (n + 1), k as u32)).collect());
    }
    mark_degenerate(&mut levels);
    CyclicLevelSet {
        simplicial: SimplicialLevelSet { levels },
        cyclic,
    }
}

/// The one-point simplicial set (a single simplex in every degree).
pub fn point(cap: usize) -> SimplicialLevelSet {
    let mut levels: Vec<Level> = (0..=cap)
        .map(|n| Level {
            width: 1,
            data: vec![0],
            faces: if n == 0 { Vec::new() } else { vec![vec![0]; n + 1] },
            degeneracies: if n == cap { Vec::new() } else { vec![vec![0]; n + 1] },
            degenerate: Vec::new(),
        })
        .collect();
    mark_degenerate(&mut levels);
    SimplicialLevelSet { levels }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{group_as_groupoid, GroupTable};

    fn z2() -> FiniteGroupoid {
        group_as_groupoid(&GroupTable::cyclic(2))
    }

    #[test]
    fn trivial_nerve_is_degenerate_above_zero() {
        let x = nerve(&group_as_groupoid(&GroupTable::trivial()), 3);
        for n in 0..=3 {
            assert_eq!(x.count(n), 1);
            assert_eq!(x.nondegenerate_count(n), usize::from(n == 0));
        }
    }

    #[test]
    fn z2_nerve_counts_and_faces() {
        let x = nerve(&z2(), 3);
        for n in 1..=3 {
            assert_eq!(x.count(n), 1 << n);
            assert_eq!(x.nondegenerate_count(n), 1);
            let k = x.nondegenerate(n).next().unwrap();
            assert!(x.simplex(n, k).iter().all(|&m| m == 1));
        }
        // d_1(s, s) = (s·s) = (e), the degenerate 1-simplex
        let ss = x.find(2, &[1, 1]).unwrap();
        let d1 = x.face(2, 1, ss) as usize;
        assert_eq!(x.simplex(1, d1), &[0]);
        assert!(x.is_degenerate(1, d1));
    }

    #[test]
    fn z2_cyclic_nerve() {
        let y = cyclic_nerve(&z2(), 3);
        for n in 0..=3 {
            assert_eq!(y.count(n), 1 << (n + 1));
        }
        let k = y.find(2, &[1, 0, 1]).unwrap();
        let t1 = y.cyclic(2, k) as usize;
        assert_eq!(y.simplex(2, t1), &[1, 1, 0]);
        let t3 = y.cyclic(2, y.cyclic(2, t1) as usize) as usize;
        assert_eq!(t3, k);
    }

    #[test]
    fn trivial_cyclic_nerve_has_identity_rotation() {
        let y = cyclic_nerve(&group_as_groupoid(&GroupTable::trivial()), 4);
        for n in 0..=4 {
            assert_eq!(y.count(n), 1);
            assert_eq!(y.cyclic(n, 0), 0);
        }
    }

    #[test]
    fn z2_inertia_simplicial() {
        let l = inertia_simplicial(&z2(), 2);
        assert_eq!(l.count(1), 4);
        let k = l.find(1, &[1, 1]).unwrap();
        assert_eq!(l.simplex(1, l.cyclic(1, k) as usize), &[1, 0]);
    }

    #[test]
    fn free_cyclic_on_point_is_circle() {
        let c = free_cyclic(&point(4));
        for n in 0..=4 {
            assert_eq!(c.count(n), n + 1);
        }
        assert!(c.verify_identities().is_empty());
        let fc = free_cyclic(&nerve(&z2(), 3));
        assert_eq!(fc.count(1), 4);
        for n in 0..=3 {
            for k in 0..fc.count(n) {
                let mut y = k as u32;
                for _ in 0..=n {
                    y = fc.cyclic(n, y as usize);
                }
                assert_eq!(y, k as u32);
            }
        }
    }

    #[test]
    fn structures_satisfy_identities() {
        let s3 = group_as_groupoid(&GroupTable::symmetric(3));
        assert!(nerve(&s3, 4).verify_identities().is_empty());
        assert!(cyclic_nerve(&s3, 4).verify_identities().is_empty());
        assert!(inertia_simplicial(&s3, 4).verify_identities().is_empty());
        assert!(free_cyclic(&nerve(&s3, 3)).verify_identities().is_empty());
    }

    #[test]
    fn corrupted_face_is_reported() {
        let mut x = nerve(&z2(), 3);
        let k = x.find(2, &[1, 1]).unwrap();
        let wrong = x.find(1, &[1]).unwrap() as u32;
        x.override_face(2, 1, k, wrong);
        let report = x.verify_identities();
        assert!(!report.is_empty());
        assert!(report.iter().any(|v| v.level == 2 || v.level == 3));

        let mut y = cyclic_nerve(&z2(), 2);
        y.override_cyclic(1, 0, 1);
        assert!(y
            .verify_identities()
            .iter()
            .any(|v| v.relation == Relation::CyclicOrder));
    }
}
