use std::fmt;

use rayon::prelude::*;

/// Marker for a structure map whose value could not be located in the
/// target level.
pub const OUT_OF_LEVEL: u32 = u32::MAX;

/// One degree of a simplicial set: its simplices (as id tuples, sorted
/// lexicographically) and the structure maps leaving it, stored as index
/// tables.
#[derive(Clone, Debug)]
pub(crate) struct Level {
    pub(crate) width: usize,
    pub(crate) data: Vec<u32>,
    /// `faces[i][k]` is the index of `d_i` of simplex `k` in the level below.
    pub(crate) faces: Vec<Vec<u32>>,
    /// `degeneracies[i][k]` is the index of `s_i` of simplex `k` in the level
    /// above; empty at the top level.
    pub(crate) degeneracies: Vec<Vec<u32>>,
    pub(crate) degenerate: Vec<bool>,
}

impl Level {
    pub(crate) fn count(&self) -> usize {
        self.data.len().checked_div(self.width).unwrap_or(0)
    }

    pub(crate) fn get(&self, k: usize) -> &[u32] {
        &self.data[k * self.width..(k + 1) * self.width]
    }

    pub(crate) fn find(&self, s: &[u32]) -> Option<u32> {
        if s.len() != self.width {
            return None;
        }
        let (mut lo, mut hi) = (0, self.count());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(s) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid as u32),
            }
        }
        None
    }
}

/// Simplicial set enumerated up to a degree cap.
#[derive(Clone, Debug)]
pub struct SimplicialLevelSet {
    pub(crate) levels: Vec<Level>,
}

impl SimplicialLevelSet {
    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    /// Number of simplices (degenerate ones included) in degree `n`.
    pub fn count(&self, n: usize) -> usize {
        self.levels[n].count()
    }

    pub fn simplex(&self, n: usize, k: usize) -> &[u32] {
        self.levels[n].get(k)
    }

    pub fn simplices(&self, n: usize) -> impl Iterator<Item = &[u32]> + '_ {
        let lvl = &self.levels[n];
        (0..lvl.count()).map(move |k| lvl.get(k))
    }

    /// Index of a simplex given by its tuple.
    pub fn find(&self, n: usize, s: &[u32]) -> Option<usize> {
        self.levels.get(n)?.find(s).map(|k| k as usize)
    }

    pub fn face(&self, n: usize, i: usize, k: usize) -> u32 {
        self.levels[n].faces[i][k]
    }

    /// `s_i` of simplex `k` in degree `n`; `None` at the top level.
    pub fn degeneracy(&self, n: usize, i: usize, k: usize) -> Option<u32> {
        self.levels[n].degeneracies.get(i).map(|t| t[k])
    }

    pub fn is_degenerate(&self, n: usize, k: usize) -> bool {
        self.levels[n].degenerate[k]
    }

    pub fn nondegenerate(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        let d = &self.levels[n].degenerate;
        (0..d.len()).filter(move |&k| !d[k])
    }

    pub fn nondegenerate_count(&self, n: usize) -> usize {
        self.levels[n].degenerate.iter().filter(|&&d| !d).count()
    }

    /// Overwrites one entry of a face table. Used to inject faults when
    /// exercising [`SimplicialLevelSet::verify_identities`].
    pub fn override_face(&mut self, n: usize, i: usize, k: usize, target: u32) {
        self.levels[n].faces[i][k] = target;
    }

    /// Exhaustively checks the simplicial identities on every simplex for
    /// which all maps involved are enumerated.
    pub fn verify_identities(&self) -> Vec<IdentityViolation> {
        let mut out = Vec::new();
        for n in 0..=self.max_level() {
            out.extend(self.verify_level(n));
        }
        out
    }

    fn verify_level(&self, n: usize) -> Vec<IdentityViolation> {
        let top = self.max_level();
        let count = self.count(n);
        (0..count)
            .into_par_iter()
            .flat_map_iter(|k| {
                let mut v = Vec::new();
                let mut bad = |relation, i, j| {
                    v.push(IdentityViolation {
                        relation,
                        level: n,
                        i,
                        j,
                        simplex: self.simplex(n, k).to_vec(),
                    })
                };
                let d = |m: usize, i: usize, x: u32| -> u32 {
                    if x == OUT_OF_LEVEL {
                        OUT_OF_LEVEL
                    } else {
                        self.face(m, i, x as usize)
                    }
                };
                let s = |m: usize, i: usize, x: u32| -> u32 {
                    if x == OUT_OF_LEVEL {
                        OUT_OF_LEVEL
                    } else {
                        self.degeneracy(m, i, x as usize).unwrap_or(OUT_OF_LEVEL)
                    }
                };
                let k32 = k as u32;
                if n >= 1 {
                    for i in 0..=n {
                        if self.face(n, i, k) == OUT_OF_LEVEL {
                            bad(Relation::FaceDefined, i, i);
                        }
                    }
                }
                if n < top {
                    for i in 0..=n {
                        if self.degeneracy(n, i, k) == Some(OUT_OF_LEVEL) {
                            bad(Relation::DegeneracyDefined, i, i);
                        }
                    }
                }
                // d_i d_j = d_{j-1} d_i for i < j
                if n >= 2 {
                    for j in 0..=n {
                        for i in 0..j {
                            let lhs = d(n - 1, i, d(n, j, k32));
                            let rhs = d(n - 1, j - 1, d(n, i, k32));
                            if lhs != rhs || lhs == OUT_OF_LEVEL {
                                bad(Relation::FaceFace, i, j);
                            }
                        }
                    }
                }
                // s_i s_j = s_{j+1} s_i for i <= j
                if n + 2 <= top {
                    for j in 0..=n {
                        for i in 0..=j {
                            let lhs = s(n + 1, i, s(n, j, k32));
                            let rhs = s(n + 1, j + 1, s(n, i, k32));
                            if lhs != rhs || lhs == OUT_OF_LEVEL {
                                bad(Relation::DegeneracyDegeneracy, i, j);
                            }
                        }
                    }
                }
                // d_i s_j
                if n < top {
                    for j in 0..=n {
                        let sj = s(n, j, k32);
                        for i in 0..=n + 1 {
                            let lhs = d(n + 1, i, sj);
                            let rhs = if i == j || i == j + 1 {
                                k32
                            } else if n == 0 {
                                continue;
                            } else if i < j {
                                s(n - 1, j - 1, d(n, i, k32))
                            } else {
                                s(n - 1, j, d(n, i - 1, k32))
                            };
                            if lhs != rhs || lhs == OUT_OF_LEVEL {
                                bad(Relation::FaceDegeneracy, i, j);
                            }
                        }
                    }
                }
                v
            })
            .collect()
    }
}

/// Cyclic set: a simplicial set with compatible cyclic operators `t_n`.
#[derive(Clone, Debug)]
pub struct CyclicLevelSet {
    pub(crate) simplicial: SimplicialLevelSet,
    pub(crate) cyclic: Vec<Vec<u32>>,
}

impl CyclicLevelSet {
    pub fn simplicial(&self) -> &SimplicialLevelSet {
        &self.simplicial
    }

    pub fn max_level(&self) -> usize {
        self.simplicial.max_level()
    }

    pub fn count(&self, n: usize) -> usize {
        self.simplicial.count(n)
    }

    pub fn simplex(&self, n: usize, k: usize) -> &[u32] {
        self.simplicial.simplex(n, k)
    }

    pub fn find(&self, n: usize, s: &[u32]) -> Option<usize> {
        self.simplicial.find(n, s)
    }

    /// `t_n` applied to simplex `k` of degree `n`.
    pub fn cyclic(&self, n: usize, k: usize) -> u32 {
        self.cyclic[n][k]
    }

    pub fn override_cyclic(&mut self, n: usize, k: usize, target: u32) {
        self.cyclic[n][k] = target;
    }

    /// Simplicial identities plus `d_i t = t d_{i-1}`, `s_i t = t s_{i-1}`
    /// (`1 ≤ i ≤ n`), `t^{n+1} = id`, and the consequences `d_0 t = d_n`,
    /// `s_0 t = t² s_n`.
    pub fn verify_identities(&self) -> Vec<IdentityViolation> {
        let mut out = self.simplicial.verify_identities();
        let x = &self.simplicial;
        let top = x.max_level();
        for n in 0..=top {
            let viol: Vec<IdentityViolation> = (0..x.count(n))
                .into_par_iter()
                .flat_map_iter(|k| {
                    let mut v = Vec::new();
                    let mut bad = |relation, i| {
                        v.push(IdentityViolation {
                            relation,
                            level: n,
                            i,
                            j: i,
                            simplex: x.simplex(n, k).to_vec(),
                        })
                    };
                    let t = |m: usize, y: u32| -> u32 {
                        if y == OUT_OF_LEVEL {
                            OUT_OF_LEVEL
                        } else {
                            self.cyclic[m][y as usize]
                        }
                    };
                    let d = |m: usize, i: usize, y: u32| -> u32 {
                        if y == OUT_OF_LEVEL {
                            OUT_OF_LEVEL
                        } else {
                            x.face(m, i, y as usize)
                        }
                    };
                    let s = |m: usize, i: usize, y: u32| -> u32 {
                        if y == OUT_OF_LEVEL {
                            OUT_OF_LEVEL
                        } else {
                            x.degeneracy(m, i, y as usize).unwrap_or(OUT_OF_LEVEL)
                        }
                    };
                    let k32 = k as u32;
                    let tk = t(n, k32);
                    if tk == OUT_OF_LEVEL {
                        bad(Relation::CyclicDefined, 0);
                        return v;
                    }
                    let mut y = k32;
                    for _ in 0..=n {
                        y = t(n, y);
                    }
                    if y != k32 {
                        bad(Relation::CyclicOrder, n + 1);
                    }
                    if n >= 1 {
                        for i in 1..=n {
                            let lhs = d(n, i, tk);
                            if lhs != t(n - 1, d(n, i - 1, k32)) || lhs == OUT_OF_LEVEL {
                                bad(Relation::FaceCyclic, i);
                            }
                        }
                        if d(n, 0, tk) != d(n, n, k32) {
                            bad(Relation::FaceCyclic, 0);
                        }
                    }
                    if n < top {
                        for i in 1..=n {
                            let lhs = s(n, i, tk);
                            if lhs != t(n + 1, s(n, i - 1, k32)) || lhs == OUT_OF_LEVEL {
                                bad(Relation::DegeneracyCyclic, i);
                            }
                        }
                        if s(n, 0, tk) != t(n + 1, t(n + 1, s(n, n, k32))) {
                            bad(Relation::DegeneracyCyclic, 0);
                        }
                    }
                    v
                })
                .collect();
            out.extend(viol);
        }
        out
    }
}

impl AsRef<SimplicialLevelSet> for CyclicLevelSet {
    fn as_ref(&self) -> &SimplicialLevelSet {
        &self.simplicial
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    FaceDefined,
    DegeneracyDefined,
    CyclicDefined,
    /// `d_i d_j = d_{j-1} d_i`, `i < j`
    FaceFace,
    /// `s_i s_j = s_{j+1} s_i`, `i ≤ j`
    DegeneracyDegeneracy,
    /// mixed `d_i s_j` relations
    FaceDegeneracy,
    /// `d_i t = t d_{i-1}` (and `d_0 t = d_n` when `i = 0`)
    FaceCyclic,
    /// `s_i t = t s_{i-1}` (and `s_0 t = t² s_n` when `i = 0`)
    DegeneracyCyclic,
    /// `t^{n+1} = id`
    CyclicOrder,
}

/// A failed identity: which relation, at which degree and indices, on which
/// simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityViolation {
    pub relation: Relation,
    pub level: usize,
    pub i: usize,
    pub j: usize,
    pub simplex: Vec<u32>,
}

impl fmt::Display for IdentityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} fails at level {} (i={}, j={}) on {:?}",
            self.relation, self.level, self.i, self.j, self.simplex
        )
    }
}

/// Rules that generate a simplicial (optionally cyclic) set from tuples.
pub(crate) trait TupleRules: Sync {
    /// All tuples of degree `n`; need not be sorted.
    fn enumerate(&self, n: usize) -> Vec<Vec<u32>>;
    fn face(&self, n: usize, i: usize, s: &[u32], out: &mut Vec<u32>);
    fn degeneracy(&self, n: usize, i: usize, s: &[u32], out: &mut Vec<u32>);
    fn cyclic(&self, _n: usize, _s: &[u32], _out: &mut Vec<u32>) {
        unreachable!("not a cyclic structure")
    }
}

fn build_level(mut tuples: Vec<Vec<u32>>, width: usize) -> Level {
    tuples.sort_unstable();
    tuples.dedup();
    let mut data = Vec::with_capacity(tuples.len() * width);
    for t in &tuples {
        debug_assert_eq!(t.len(), width);
        data.extend_from_slice(t);
    }
    Level {
        width,
        data,
        faces: Vec::new(),
        degeneracies: Vec::new(),
        degenerate: Vec::new(),
    }
}

fn map_table<F>(from: &Level, to: &Level, f: F) -> Vec<u32>
where
    F: Fn(&[u32], &mut Vec<u32>) + Sync,
{
    (0..from.count())
        .into_par_iter()
        .map_init(Vec::new, |buf, k| {
            buf.clear();
            f(from.get(k), buf);
            to.find(buf).unwrap_or(OUT_OF_LEVEL)
        })
        .collect()
}

pub(crate) fn mark_degenerate(levels: &mut [Level]) {
    if let Some(first) = levels.first_mut() {
        first.degenerate = vec![false; first.count()];
    }
    for n in 1..levels.len() {
        let mut flags = vec![false; levels[n].count()];
        for table in &levels[n - 1].degeneracies {
            for &k in table {
                if k != OUT_OF_LEVEL {
                    flags[k as usize] = true;
                }
            }
        }
        levels[n].degenerate = flags;
    }
}

pub(crate) fn build_simplicial<R: TupleRules>(
    rules: &R,
    max_level: usize,
    width: impl Fn(usize) -> usize,
) -> SimplicialLevelSet {
    let mut levels: Vec<Level> = (0..=max_level)
        .map(|n| build_level(rules.enumerate(n), width(n)))
        .collect();
    for n in 0..=max_level {
        if n >= 1 {
            let faces = (0..=n)
                .map(|i| map_table(&levels[n], &levels[n - 1], |s, out| rules.face(n, i, s, out)))
                .collect();
            levels[n].faces = faces;
        }
        if n < max_level {
            let degs = (0..=n)
                .map(|i| map_table(&levels[n], &levels[n + 1], |s, out| rules.degeneracy(n, i, s, out)))
                .collect();
            levels[n].degeneracies = degs;
        }
    }
    mark_degenerate(&mut levels);
    SimplicialLevelSet { levels }
}

pub(crate) fn build_cyclic<R: TupleRules>(
    rules: &R,
    max_level: usize,
    width: impl Fn(usize) -> usize,
) -> CyclicLevelSet {
    let simplicial = build_simplicial(rules, max_level, width);
    let cyclic = (0..=max_level)
        .map(|n| {
            let lvl = &simplicial.levels[n];
            map_table(lvl, lvl, |s, out| rules.cyclic(n, s, out))
        })
        .collect();
    CyclicLevelSet { simplicial, cyclic }
}
