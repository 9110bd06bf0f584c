use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use super::{HomologyError, Ring};
use crate::linalg::{merge_invariants, rank, smith_normal_form, SparseMatrix};
use crate::nerve::{SimplicialLevelSet, OUT_OF_LEVEL};

/// A bounded chain complex of free modules with explicit bases.
///
/// `boundary(n)` is `∂_n : C_n → C_{n-1}` for `1 ≤ n ≤ cap`. A complex built
/// from a simplicial set is a truncation of an infinite complex, so only
/// degrees below `cap` are exact; complexes assembled by hand with
/// [`ChainComplex::finite`] are exact through `cap`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    ring: Ring,
    dims: Vec<usize>,
    boundaries: Vec<SparseMatrix>,
    bases: Vec<Vec<u32>>,
    truncated: bool,
}

impl ChainComplex {
    /// A complex that is zero above degree `boundaries.len()`. `dims[0]` is
    /// the rank of `C_0`; `boundaries[n-1]` is `∂_n`.
    pub fn finite(ring: Ring, dim0: usize, boundaries: Vec<SparseMatrix>) -> Result<Self, HomologyError> {
        let mut dims = vec![dim0];
        for (n, d) in boundaries.iter().enumerate() {
            if d.nrows() != dims[n] {
                return Err(HomologyError::Shape { degree: n + 1 });
            }
            dims.push(d.ncols());
        }
        let bases = dims.iter().map(|&d| (0..d as u32).collect()).collect();
        let mut all = vec![SparseMatrix::zeros(0, dim0)];
        all.extend(boundaries);
        let c = ChainComplex {
            ring,
            dims,
            boundaries: all,
            bases,
            truncated: false,
        };
        c.check_square_zero()?;
        Ok(c)
    }

    pub(crate) fn truncated(
        ring: Ring,
        bases: Vec<Vec<u32>>,
        boundaries: Vec<SparseMatrix>,
    ) -> Result<Self, HomologyError> {
        let dims = bases.iter().map(Vec::len).collect();
        let c = ChainComplex {
            ring,
            dims,
            boundaries,
            bases,
            truncated: true,
        };
        c.check_square_zero()?;
        Ok(c)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn cap(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims[n]
    }

    /// Simplex indices (within the source level set) forming the basis of
    /// `C_n`.
    pub fn basis(&self, n: usize) -> &[u32] {
        &self.bases[n]
    }

    pub fn boundary(&self, n: usize) -> &SparseMatrix {
        &self.boundaries[n]
    }

    /// Highest degree whose homology is determined by the stored data.
    pub fn validity(&self) -> Option<usize> {
        if self.truncated {
            self.cap().checked_sub(1)
        } else {
            Some(self.cap())
        }
    }

    fn check_square_zero(&self) -> Result<(), HomologyError> {
        let bad = (2..=self.cap())
            .into_par_iter()
            .find_first(|&n| !self.boundaries[n - 1].mul(&self.boundaries[n]).is_zero());
        match bad {
            Some(degree) => Err(HomologyError::BoundarySquare { degree }),
            None => Ok(()),
        }
    }
}

/// Normalized chains: basis in degree `n` is the nondegenerate `n`-simplices,
/// and `∂` is the alternating face sum with degenerate faces dropped.
pub fn normalized_chains(x: &SimplicialLevelSet, ring: Ring, cap: usize) -> Result<ChainComplex, HomologyError> {
    simplicial_chains(x, ring, cap, true)
}

/// Unnormalized chains: every simplex is a basis element.
pub fn unnormalized_chains(x: &SimplicialLevelSet, ring: Ring, cap: usize) -> Result<ChainComplex, HomologyError> {
    simplicial_chains(x, ring, cap, false)
}

fn simplicial_chains(
    x: &SimplicialLevelSet,
    ring: Ring,
    cap: usize,
    normalized: bool,
) -> Result<ChainComplex, HomologyError> {
    check_cap(cap, x.max_level())?;
    let bases: Vec<Vec<u32>> = (0..=cap)
        .map(|n| {
            if normalized {
                x.nondegenerate(n).map(|k| k as u32).collect()
            } else {
                (0..x.count(n) as u32).collect()
            }
        })
        .collect();
    let positions: Vec<Vec<u32>> = (0..=cap).map(|n| position_map(x.count(n), &bases[n])).collect();
    let boundaries = (0..=cap)
        .into_par_iter()
        .map(|n| {
            if n == 0 {
                return SparseMatrix::zeros(0, bases[0].len());
            }
            let cols = bases[n]
                .iter()
                .map(|&k| {
                    (0..=n)
                        .filter_map(|i| {
                            let f = x.face(n, i, k as usize);
                            let row = positions[n - 1][f as usize];
                            (row != OUT_OF_LEVEL).then_some((row, sign(i)))
                        })
                        .collect()
                })
                .collect();
            SparseMatrix::from_columns(bases[n - 1].len(), cols)
        })
        .collect();
    ChainComplex::truncated(ring, bases, boundaries)
}

pub(crate) fn check_cap(cap: usize, max_level: usize) -> Result<(), HomologyError> {
    if cap == 0 {
        return Err(HomologyError::CapTooSmall { cap, needed: 1 });
    }
    if cap > max_level {
        return Err(HomologyError::CapExceedsEnumeration { cap, max_level });
    }
    Ok(())
}

pub(crate) fn position_map(count: usize, basis: &[u32]) -> Vec<u32> {
    let mut pos = vec![OUT_OF_LEVEL; count];
    for (p, &k) in basis.iter().enumerate() {
        pos[k as usize] = p as u32;
    }
    pos
}

pub(crate) fn sign(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Homology in one degree: free rank plus torsion invariants
/// `d_1 | d_2 | ⋯`, each at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DegreeHomology {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl DegreeHomology {
    pub fn free(rank: usize) -> Self {
        DegreeHomology {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Direct sum.
    pub fn sum(&self, other: &DegreeHomology) -> DegreeHomology {
        let all = self.torsion.iter().chain(&other.torsion).cloned().collect();
        DegreeHomology {
            rank: self.rank + other.rank,
            torsion: merge_invariants(all).into_iter().filter(|d| !d.is_one()).collect(),
        }
    }
}

impl fmt::Display for DegreeHomology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|t| *t == d).count();
            parts.push(if run == 1 {
                format!("Z/{d}")
            } else {
                format!("(Z/{d})^{run}")
            });
            i += run;
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Homology of a complex, exact through `validity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyResult {
    pub ring: Ring,
    degrees: Vec<DegreeHomology>,
}

impl HomologyResult {
    pub fn new(ring: Ring, degrees: Vec<DegreeHomology>) -> Self {
        HomologyResult { ring, degrees }
    }

    /// Highest degree with a trustworthy value, if any.
    pub fn validity(&self) -> Option<usize> {
        self.degrees.len().checked_sub(1)
    }

    pub fn degree(&self, n: usize) -> Result<&DegreeHomology, HomologyError> {
        self.degrees.get(n).ok_or(HomologyError::OutOfRange {
            degree: n,
            validity: self.validity(),
        })
    }

    pub fn rank(&self, n: usize) -> Result<usize, HomologyError> {
        self.degree(n).map(|d| d.rank)
    }

    pub fn degrees(&self) -> &[DegreeHomology] {
        &self.degrees
    }

    /// Restricts to degrees `≤ top`.
    pub fn truncate(mut self, top: usize) -> Self {
        self.degrees.truncate(top + 1);
        self
    }
}

/// Boundary data for one matrix: its rank, and over ℤ its invariant factors.
pub(crate) struct Reduced {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

pub(crate) fn reduce(m: &SparseMatrix, ring: Ring) -> Reduced {
    match ring {
        Ring::Rationals => Reduced {
            rank: rank(m),
            torsion: Vec::new(),
        },
        Ring::Integers => {
            let inv = smith_normal_form(m);
            Reduced {
                rank: inv.len(),
                torsion: inv.into_iter().filter(|d| !d.is_one()).collect(),
            }
        }
    }
}

/// Assembles `H_n = ker ∂_n / im ∂_{n+1}` from reduced boundaries; entry `n`
/// of `reduced` describes `∂_n` (entry 0 is the zero map).
pub(crate) fn assemble(ring: Ring, dims: &[usize], reduced: &[Reduced], validity: Option<usize>) -> HomologyResult {
    let Some(top) = validity else {
        return HomologyResult::new(ring, Vec::new());
    };
    let degrees = (0..=top)
        .map(|n| {
            let out = reduced[n].rank;
            let (inc_rank, torsion) = match reduced.get(n + 1) {
                Some(r) => (r.rank, r.torsion.clone()),
                None => (0, Vec::new()),
            };
            DegreeHomology {
                rank: dims[n] - out - inc_rank,
                torsion,
            }
        })
        .collect();
    HomologyResult::new(ring, degrees)
}

/// `ker ∂_n / im ∂_{n+1}` for every degree within the complex's validity.
/// Over ℤ torsion comes from the Smith form of `∂_{n+1}`; over ℚ only ranks
/// are computed.
pub fn homology(c: &ChainComplex) -> HomologyResult {
    let reduced: Vec<Reduced> = (0..=c.cap())
        .into_par_iter()
        .map(|n| reduce(c.boundary(n), c.ring))
        .collect();
    assemble(c.ring, &c.dims, &reduced, c.validity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{group_as_groupoid, GroupTable};
    use crate::nerve::nerve;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn two_term_complex() {
        let c = ChainComplex::finite(Ring::Integers, 1, vec![SparseMatrix::from_dense(&[vec![2]])]).unwrap();
        let h = homology(&c);
        assert_eq!(
            h.degree(0).unwrap(),
            &DegreeHomology {
                rank: 0,
                torsion: big(&[2])
            }
        );
        assert!(h.degree(1).unwrap().is_zero());
        assert!(matches!(h.degree(2), Err(HomologyError::OutOfRange { .. })));
    }

    #[test]
    fn nonzero_square_is_rejected() {
        let d1 = SparseMatrix::from_dense(&[vec![1]]);
        let d2 = SparseMatrix::from_dense(&[vec![1]]);
        assert!(matches!(
            ChainComplex::finite(Ring::Integers, 1, vec![d1, d2]),
            Err(HomologyError::BoundarySquare { degree: 2 })
        ));
    }

    #[test]
    fn z2_nerve_chains() {
        let x = nerve(&group_as_groupoid(&GroupTable::cyclic(2)), 8);
        let c = normalized_chains(&x, Ring::Integers, 8).unwrap();
        for n in 1..=8 {
            assert_eq!(c.dim(n), 1);
            let expected = if n % 2 == 0 { 2 } else { 0 };
            assert_eq!(c.boundary(n).get(0, 0), expected);
        }
        let h = homology(&c);
        assert_eq!(h.validity(), Some(7));
        assert_eq!(h.degree(0).unwrap(), &DegreeHomology::free(1));
        for n in 1..=7 {
            let expected = if n % 2 == 1 { big(&[2]) } else { vec![] };
            assert_eq!(h.degree(n).unwrap().torsion, expected, "degree {n}");
            assert_eq!(h.degree(n).unwrap().rank, 0);
        }
    }

    #[test]
    fn rational_group_homology_vanishes() {
        let x = nerve(&group_as_groupoid(&GroupTable::cyclic(3)), 5);
        let h = homology(&normalized_chains(&x, Ring::Rationals, 5).unwrap());
        assert_eq!(h.rank(0).unwrap(), 1);
        assert!((1..=4).all(|n| h.degree(n).unwrap().is_zero()));
    }

    #[test]
    fn s3_basis_size() {
        let x = nerve(&group_as_groupoid(&GroupTable::symmetric(3)), 2);
        assert_eq!(normalized_chains(&x, Ring::Integers, 2).unwrap().dim(1), 5);
        assert!(matches!(
            normalized_chains(&x, Ring::Integers, 3),
            Err(HomologyError::CapExceedsEnumeration { .. })
        ));
    }

    #[test]
    fn direct_sum_of_torsion() {
        let a = DegreeHomology {
            rank: 1,
            torsion: big(&[2]),
        };
        let b = DegreeHomology {
            rank: 0,
            torsion: big(&[3]),
        };
        assert_eq!(
            a.sum(&b),
            DegreeHomology {
                rank: 1,
                torsion: big(&[6])
            }
        );
        let c = DegreeHomology {
            rank: 0,
            torsion: big(&[2]),
        };
        assert_eq!(a.sum(&c).torsion, big(&[2, 2]));
        let d = DegreeHomology {
            rank: 0,
            torsion: big(&[2, 4]),
        };
        assert_eq!(d.sum(&b).torsion, big(&[2, 12]));
        assert_eq!(d.sum(&b).to_string(), "Z/2 + Z/12");
        assert_eq!(a.sum(&c).to_string(), "Z + (Z/2)^2");
    }
}
