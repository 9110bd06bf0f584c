use rayon::prelude::*;
use thiserror::Error;

use super::level::{CyclicLevelSet, SimplicialLevelSet, OUT_OF_LEVEL};
use crate::groupoid::{FiniteGroupoid, InertiaLabel};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{tuple:?} is not a simplex of {structure}")]
pub struct NotInLevel {
    pub structure: &'static str,
    pub tuple: Vec<u32>,
}

fn composable(g: &FiniteGroupoid, chain: &[u32]) -> bool {
    chain.iter().all(|&m| (m as usize) < g.num_morphisms())
        && chain.windows(2).all(|w| g.tgt(w[0] as usize) == g.src(w[1] as usize))
}

/// Is `x = (a, v_1, …, v_n)` an element of `∧G_n`?
pub fn is_inertia_simplex(g: &FiniteGroupoid, x: &[u32]) -> bool {
    !x.is_empty() && composable(g, x) && g.is_automorphism(x[0] as usize)
}

/// Is `y = (g_0, …, g_n)` an element of `Y_n(G)`?
pub fn is_cyclic_nerve_simplex(g: &FiniteGroupoid, y: &[u32]) -> bool {
    !y.is_empty() && composable(g, y) && g.tgt(*y.last().unwrap() as usize) == g.src(y[0] as usize)
}

/// `f_n(a, v_1, …, v_n) = (v_n⁻¹⋯v_1⁻¹·a, v_1, …, v_n)`.
pub fn iso_f(g: &FiniteGroupoid, x: &[u32]) -> Result<Vec<u32>, NotInLevel> {
    if !is_inertia_simplex(g, x) {
        return Err(NotInLevel {
            structure: "the inertia simplicial set",
            tuple: x.to_vec(),
        });
    }
    let mut out = x.to_vec();
    if x.len() > 1 {
        let path = g.compose_all(&x[1..].iter().map(|&v| v as usize).collect::<Vec<_>>());
        out[0] = g.compose(g.inv(path), x[0] as usize) as u32;
    }
    Ok(out)
}

/// `h_n(g_0, …, g_n) = (g_1⋯g_n·g_0, g_1, …, g_n)`.
pub fn iso_h(g: &FiniteGroupoid, y: &[u32]) -> Result<Vec<u32>, NotInLevel> {
    if !is_cyclic_nerve_simplex(g, y) {
        return Err(NotInLevel {
            structure: "the cyclic nerve",
            tuple: y.to_vec(),
        });
    }
    let mut out = y.to_vec();
    if y.len() > 1 {
        let path = g.compose_all(&y[1..].iter().map(|&v| v as usize).collect::<Vec<_>>());
        out[0] = g.compose(path, y[0] as usize) as u32;
    }
    Ok(out)
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum MapError {
    #[error("map is undefined on simplex {tuple:?} of degree {level}")]
    Undefined { level: usize, tuple: Vec<u32> },
    #[error("image {image:?} of {tuple:?} is not a simplex of the target in degree {level}")]
    NotInTarget {
        level: usize,
        tuple: Vec<u32>,
        image: Vec<u32>,
    },
    #[error("source and target are enumerated to different degrees ({0} and {1})")]
    LevelMismatch(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapViolationKind {
    Face,
    Degeneracy,
    Cyclic,
}

/// A structure map the level map fails to commute with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapViolation {
    pub kind: MapViolationKind,
    pub level: usize,
    pub index: usize,
    pub simplex: Vec<u32>,
}

/// Degreewise function between two enumerated level sets, stored as index
/// tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelMap {
    levels: Vec<Vec<u32>>,
}

impl LevelMap {
    /// Tabulates a tuple-level function. Every image must be found in the
    /// target.
    pub fn from_tuples<F>(a: &SimplicialLevelSet, b: &SimplicialLevelSet, f: F) -> Result<Self, MapError>
    where
        F: Fn(usize, &[u32]) -> Option<Vec<u32>> + Sync,
    {
        if a.max_level() != b.max_level() {
            return Err(MapError::LevelMismatch(a.max_level(), b.max_level()));
        }
        let levels = (0..=a.max_level())
            .map(|n| {
                (0..a.count(n))
                    .into_par_iter()
                    .map(|k| {
                        let s = a.simplex(n, k);
                        let image = f(n, s).ok_or_else(|| MapError::Undefined {
                            level: n,
                            tuple: s.to_vec(),
                        })?;
                        b.find(n, &image)
                            .map(|i| i as u32)
                            .ok_or_else(|| MapError::NotInTarget {
                                level: n,
                                tuple: s.to_vec(),
                                image,
                            })
                    })
                    .collect::<Result<Vec<u32>, MapError>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LevelMap { levels })
    }

    pub fn apply(&self, n: usize, k: usize) -> usize {
        self.levels[n][k] as usize
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &LevelMap) -> LevelMap {
        LevelMap {
            levels: self
                .levels
                .iter()
                .zip(&other.levels)
                .map(|(f, g)| f.iter().map(|&k| g[k as usize]).collect())
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.levels
            .iter()
            .all(|l| l.iter().enumerate().all(|(k, &v)| v as usize == k))
    }

    pub fn is_bijective(&self, b: &SimplicialLevelSet) -> bool {
        self.levels.iter().enumerate().all(|(n, l)| {
            if l.len() != b.count(n) {
                return false;
            }
            let mut seen = vec![false; l.len()];
            l.iter().all(|&k| !std::mem::replace(&mut seen[k as usize], true))
        })
    }

    /// Checks `f d_i = d_i f` and `f s_i = s_i f` on every simplex.
    pub fn verify_simplicial(&self, a: &SimplicialLevelSet, b: &SimplicialLevelSet) -> Vec<MapViolation> {
        let top = a.max_level();
        let mut out = Vec::new();
        for n in 0..=top {
            for k in 0..a.count(n) {
                let fk = self.apply(n, k);
                let mut bad = |kind, index| {
                    out.push(MapViolation {
                        kind,
                        level: n,
                        index,
                        simplex: a.simplex(n, k).to_vec(),
                    })
                };
                if n >= 1 {
                    for i in 0..=n {
                        let da = a.face(n, i, k);
                        let lhs = if da == OUT_OF_LEVEL {
                            OUT_OF_LEVEL
                        } else {
                            self.levels[n - 1][da as usize]
                        };
                        if lhs != b.face(n, i, fk) || lhs == OUT_OF_LEVEL {
                            bad(MapViolationKind::Face, i);
                        }
                    }
                }
                if n < top {
                    for i in 0..=n {
                        let sa = a.degeneracy(n, i, k).unwrap_or(OUT_OF_LEVEL);
                        let lhs = if sa == OUT_OF_LEVEL {
                            OUT_OF_LEVEL
                        } else {
                            self.levels[n + 1][sa as usize]
                        };
                        if Some(lhs) != b.degeneracy(n, i, fk) || lhs == OUT_OF_LEVEL {
                            bad(MapViolationKind::Degeneracy, i);
                        }
                    }
                }
            }
        }
        out
    }

    /// Simplicial checks plus `f t = t f`.
    pub fn verify_cyclic(&self, a: &CyclicLevelSet, b: &CyclicLevelSet) -> Vec<MapViolation> {
        let mut out = self.verify_simplicial(a.simplicial(), b.simplicial());
        for n in 0..=a.max_level() {
            for k in 0..a.count(n) {
                let lhs = self.levels[n][a.cyclic(n, k) as usize];
                if lhs != b.cyclic(n, self.apply(n, k)) {
                    out.push(MapViolation {
                        kind: MapViolationKind::Cyclic,
                        level: n,
                        index: 0,
                        simplex: a.simplex(n, k).to_vec(),
                    });
                }
            }
        }
        out
    }
}

/// `f_*` as a level map `∧G_* → Y_*(G)`.
pub fn iso_f_map(g: &FiniteGroupoid, inertia: &CyclicLevelSet, cyclic: &CyclicLevelSet) -> Result<LevelMap, MapError> {
    LevelMap::from_tuples(inertia.simplicial(), cyclic.simplicial(), |_, x| iso_f(g, x).ok())
}

/// `h_*` as a level map `Y_*(G) → ∧G_*`.
pub fn iso_h_map(g: &FiniteGroupoid, cyclic: &CyclicLevelSet, inertia: &CyclicLevelSet) -> Result<LevelMap, MapError> {
    LevelMap::from_tuples(cyclic.simplicial(), inertia.simplicial(), |_, y| iso_h(g, y).ok())
}

/// Identifies `(a, v_1, …, v_n) ∈ ∧G_n` with the chain
/// `((a_0, v_1), (a_1, v_2), …)` in the nerve of the inertia groupoid, where
/// `a_0 = a` and `a_i = v_i⁻¹·a_{i-1}·v_i`. Degree 0 sends `(a)` to the object
/// labelled `a`.
pub fn inertia_chain_map(
    g: &FiniteGroupoid,
    label: &InertiaLabel,
    inertia: &SimplicialLevelSet,
    nerve_of_inertia: &SimplicialLevelSet,
) -> Result<LevelMap, MapError> {
    LevelMap::from_tuples(inertia, nerve_of_inertia, |n, x| {
        let mut a = x[0] as usize;
        if n == 0 {
            return label.object_of(a).map(|o| vec![o as u32]);
        }
        let mut out = Vec::with_capacity(n);
        for &v in &x[1..] {
            out.push(label.morphism_of(a, v as usize)? as u32);
            a = g.conjugate(a, v as usize);
        }
        Some(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{group_as_groupoid, inertia, GroupTable};
    use crate::nerve::{cyclic_nerve, inertia_simplicial, nerve};

    #[test]
    fn level_zero_is_identity() {
        let g = group_as_groupoid(&GroupTable::cyclic(2));
        assert_eq!(iso_f(&g, &[1]).unwrap(), vec![1]);
        assert_eq!(iso_h(&g, &[1]).unwrap(), vec![1]);
    }

    #[test]
    fn z2_level_one() {
        let g = group_as_groupoid(&GroupTable::cyclic(2));
        assert_eq!(iso_f(&g, &[1, 1]).unwrap(), vec![0, 1]);
        assert_eq!(iso_h(&g, &[0, 1]).unwrap(), vec![1, 1]);
        for a in 0..2 {
            for v in 0..2 {
                assert_eq!(iso_h(&g, &iso_f(&g, &[a, v]).unwrap()).unwrap(), vec![a, v]);
            }
        }
    }

    #[test]
    fn rejects_non_members() {
        let s3 = GroupTable::symmetric(3);
        let pts: Vec<String> = (1..=3).map(|i| i.to_string()).collect();
        let act = s3
            .names()
            .iter()
            .map(|p| p.chars().map(|c| c.to_digit(10).unwrap() as usize - 1).collect())
            .collect::<Vec<Vec<usize>>>();
        let g = crate::groupoid::action_groupoid(&group_as_groupoid(&s3), &pts, &act).unwrap();
        // (1, 132) moves 2 to 3: not an automorphism
        let m = g.morphism_by_name("(2,132)").unwrap() as u32;
        assert!(iso_f(&g, &[m]).is_err());
        assert!(iso_h(&g, &[m]).is_err());
    }

    #[test]
    fn maps_are_inverse_cyclic_isomorphisms() {
        let g = group_as_groupoid(&GroupTable::symmetric(3));
        let l = inertia_simplicial(&g, 3);
        let y = cyclic_nerve(&g, 3);
        let f = iso_f_map(&g, &l, &y).unwrap();
        let h = iso_h_map(&g, &y, &l).unwrap();
        assert!(f.then(&h).is_identity());
        assert!(h.then(&f).is_identity());
        assert!(f.verify_cyclic(&l, &y).is_empty());
        assert!(h.verify_cyclic(&y, &l).is_empty());
    }

    #[test]
    fn inertia_simplicial_matches_nerve_of_inertia() {
        let g = group_as_groupoid(&GroupTable::symmetric(3));
        let (ig, label) = inertia(&g).unwrap();
        let l = inertia_simplicial(&g, 3);
        let n = nerve(&ig, 3);
        let map = inertia_chain_map(&g, &label, l.simplicial(), &n).unwrap();
        assert!(map.is_bijective(&n));
        assert!(map.verify_simplicial(l.simplicial(), &n).is_empty());
    }
}
