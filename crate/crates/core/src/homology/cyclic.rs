use rayon::prelude::*;

use super::complex::{assemble, check_cap, normalized_chains, reduce, sign, HomologyResult, Reduced};
use super::{homology, HomologyError, Ring};
use crate::linalg::{rank, BlockBuilder, SparseMatrix};
use crate::nerve::CyclicLevelSet;

/// `b`, `b′`, `T = (−1)^n t_n` and `N = 1 + T + ⋯ + T^n` in every degree
/// `≤ cap`, on unnormalized chains (basis: every simplex of the level).
///
/// `b′` omits the last face, which does not preserve the degenerate
/// subcomplex, so these live on the unnormalized complex. Entry 0 of `b` and
/// `b′` is the zero map out of degree 0.
#[derive(Clone, Debug)]
pub struct HochschildOperators {
    pub ring: Ring,
    dims: Vec<usize>,
    pub b: Vec<SparseMatrix>,
    pub b_prime: Vec<SparseMatrix>,
    pub t: Vec<SparseMatrix>,
    pub n: Vec<SparseMatrix>,
}

impl HochschildOperators {
    pub fn cap(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims[n]
    }

    /// Checks `b² = 0`, `b′² = 0`, `(1−T)b′ = b(1−T)` and `Nb = b′N`.
    pub fn verify(&self) -> Result<(), HomologyError> {
        let fail = (1..=self.cap()).into_par_iter().find_map_first(|n| {
            let one_minus_t = |m: usize| SparseMatrix::identity(self.dims[m]).sub(&self.t[m]);
            if n >= 2 && !self.b[n - 1].mul(&self.b[n]).is_zero() {
                return Some(("b∘b = 0", n));
            }
            if n >= 2 && !self.b_prime[n - 1].mul(&self.b_prime[n]).is_zero() {
                return Some(("b′∘b′ = 0", n));
            }
            if one_minus_t(n - 1).mul(&self.b_prime[n]) != self.b[n].mul(&one_minus_t(n)) {
                return Some(("(1−T)b′ = b(1−T)", n));
            }
            if self.n[n - 1].mul(&self.b[n]) != self.b_prime[n].mul(&self.n[n]) {
                return Some(("Nb = b′N", n));
            }
            None
        });
        match fail {
            Some((identity, degree)) => Err(HomologyError::OperatorIdentity { identity, degree }),
            None => Ok(()),
        }
    }
}

/// Builds the Hochschild operators of a cyclic set and verifies their
/// identities.
pub fn hochschild_operators(x: &CyclicLevelSet, ring: Ring, cap: usize) -> Result<HochschildOperators, HomologyError> {
    check_cap(cap, x.max_level())?;
    let s = x.simplicial();
    let dims: Vec<usize> = (0..=cap).map(|n| x.count(n)).collect();
    let face_sum = |n: usize, last: usize| {
        if n == 0 {
            return SparseMatrix::zeros(0, dims[0]);
        }
        let cols = (0..dims[n])
            .map(|k| (0..=last).map(|i| (s.face(n, i, k), sign(i))).collect())
            .collect();
        SparseMatrix::from_columns(dims[n - 1], cols)
    };
    let per_degree: Vec<_> = (0..=cap)
        .into_par_iter()
        .map(|n| {
            let b = face_sum(n, n);
            let b_prime = if n == 0 { b.clone() } else { face_sum(n, n - 1) };
            let tsign = sign(n);
            let t = SparseMatrix::from_columns(dims[n], (0..dims[n]).map(|k| vec![(x.cyclic(n, k), tsign)]).collect());
            let norm = SparseMatrix::from_columns(
                dims[n],
                (0..dims[n])
                    .map(|k| {
                        let mut col = Vec::with_capacity(n + 1);
                        let (mut at, mut coeff) = (k as u32, 1);
                        for _ in 0..=n {
                            col.push((at, coeff));
                            at = x.cyclic(n, at as usize);
                            coeff *= tsign;
                        }
                        col
                    })
                    .collect(),
            );
            (b, b_prime, t, norm)
        })
        .collect();
    let mut ops = HochschildOperators {
        ring,
        dims,
        b: Vec::new(),
        b_prime: Vec::new(),
        t: Vec::new(),
        n: Vec::new(),
    };
    for (b, bp, t, n) in per_degree {
        ops.b.push(b);
        ops.b_prime.push(bp);
        ops.t.push(t);
        ops.n.push(n);
    }
    ops.verify()?;
    Ok(ops)
}

/// The first-quadrant bicomplex with columns `(b, −b′, b, −b′, …)` and
/// horizontal maps `1−T` (odd to even column) and `N` (even to odd), folded
/// into its total complex. Total degree `k` is `⊕_{p=0}^{k} C_{k−p}`, column
/// `p` first.
#[derive(Clone, Debug)]
pub struct CyclicBicomplex {
    ops: HochschildOperators,
}

impl CyclicBicomplex {
    pub fn new(ops: HochschildOperators) -> Self {
        CyclicBicomplex { ops }
    }

    pub fn operators(&self) -> &HochschildOperators {
        &self.ops
    }

    pub fn cap(&self) -> usize {
        self.ops.cap()
    }

    pub fn total_dim(&self, k: usize) -> usize {
        (0..=k).map(|p| self.ops.dims[k - p]).sum()
    }

    /// Offset of column `p` inside total degree `k`.
    pub fn column_offset(&self, k: usize, p: usize) -> usize {
        (0..p).map(|q| self.ops.dims[k - q]).sum()
    }

    /// `D_k : Tot_k → Tot_{k−1}`.
    pub fn total_boundary(&self, k: usize) -> SparseMatrix {
        if k == 0 {
            return SparseMatrix::zeros(0, self.total_dim(0));
        }
        let ops = &self.ops;
        let mut bb = BlockBuilder::new(self.total_dim(k - 1), self.total_dim(k));
        for p in 0..=k {
            let q = k - p;
            let col = self.column_offset(k, p);
            if q >= 1 {
                let v = if p % 2 == 0 {
                    ops.b[q].clone()
                } else {
                    ops.b_prime[q].scale(-1)
                };
                bb.place(self.column_offset(k - 1, p), col, &v);
            }
            if p >= 1 {
                let h = if p % 2 == 1 {
                    SparseMatrix::identity(ops.dims[q]).sub(&ops.t[q])
                } else {
                    ops.n[q].clone()
                };
                bb.place(self.column_offset(k - 1, p - 1), col, &h);
            }
        }
        bb.build()
    }

    /// `I_k : C_k → Tot_k`, inclusion of column 0.
    pub fn inclusion(&self, k: usize) -> SparseMatrix {
        let d = self.ops.dims[k];
        let mut bb = BlockBuilder::new(self.total_dim(k), d);
        bb.place(0, 0, &SparseMatrix::identity(d));
        bb.build()
    }

    /// `S_k : Tot_k → Tot_{k−2}`: column `p+2` to column `p`, columns 0 and 1
    /// to zero.
    pub fn periodicity(&self, k: usize) -> SparseMatrix {
        assert!(k >= 2);
        let mut bb = BlockBuilder::new(self.total_dim(k - 2), self.total_dim(k));
        for p in 2..=k {
            let d = self.ops.dims[k - p];
            bb.place(
                self.column_offset(k - 2, p - 2),
                self.column_offset(k, p),
                &SparseMatrix::identity(d),
            );
        }
        bb.build()
    }
}

/// Cyclic homology as the homology of the total complex; exact for degrees
/// `≤ cap − 1`.
pub fn cyclic_homology(x: &CyclicLevelSet, ring: Ring, cap: usize) -> Result<HomologyResult, HomologyError> {
    let bi = CyclicBicomplex::new(hochschild_operators(x, ring, cap)?);
    Ok(bicomplex_homology(&bi))
}

fn bicomplex_homology(bi: &CyclicBicomplex) -> HomologyResult {
    let cap = bi.cap();
    let ring = bi.ops.ring;
    let dims: Vec<usize> = (0..=cap).map(|k| bi.total_dim(k)).collect();
    let reduced: Vec<Reduced> = (0..=cap)
        .into_par_iter()
        .map(|k| reduce(&bi.total_boundary(k), ring))
        .collect();
    assemble(ring, &dims, &reduced, cap.checked_sub(1))
}

/// Hochschild homology: homology of the normalized chains under `b`.
pub fn hochschild_homology(x: &CyclicLevelSet, ring: Ring, cap: usize) -> Result<HomologyResult, HomologyError> {
    Ok(homology(&normalized_chains(x.simplicial(), ring, cap)?))
}

/// Ranks over ℚ of the Connes maps and of the groups they connect, in one
/// total degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnesRanks {
    pub degree: usize,
    pub hh: usize,
    pub hc: usize,
    /// `rank HC_{k−2}` (0 for `k < 2`).
    pub hc_shifted: usize,
    pub i_rank: usize,
    pub s_rank: usize,
}

impl ConnesRanks {
    /// `0 → HH_k → HC_k → HC_{k−2} → 0` is exact.
    pub fn splits(&self) -> bool {
        self.hc == self.hh + self.hc_shifted && self.i_rank == self.hh && self.s_rank == self.hc_shifted
    }

    /// `ker S = im I` at `HC_k`.
    pub fn exact_at_hc(&self) -> bool {
        self.hc - self.s_rank == self.i_rank
    }
}

/// The chain maps `I_k : C_k → Tot_k` and `S_k : Tot_k → Tot_{k−2}`, plus
/// their induced ranks when the ring is ℚ.
#[derive(Clone, Debug)]
pub struct ConnesMaps {
    pub bicomplex: CyclicBicomplex,
    pub inclusion: Vec<SparseMatrix>,
    /// Entry `k` is `S_k`; entries 0 and 1 are empty.
    pub periodicity: Vec<SparseMatrix>,
    pub ranks: Option<Vec<ConnesRanks>>,
}

impl ConnesMaps {
    pub fn validity(&self) -> Option<usize> {
        self.bicomplex.cap().checked_sub(1)
    }

    pub fn ranks_at(&self, k: usize) -> Result<Option<&ConnesRanks>, HomologyError> {
        if self.validity().is_none_or(|v| k > v) {
            return Err(HomologyError::OutOfRange {
                degree: k,
                validity: self.validity(),
            });
        }
        Ok(self.ranks.as_ref().map(|r| &r[k]))
    }

    /// Degrees where the splitting or exactness fails (empty over ℤ, where
    /// ranks are not computed).
    pub fn splitting_failures(&self) -> Vec<usize> {
        self.ranks
            .iter()
            .flatten()
            .filter(|r| !(r.splits() && r.exact_at_hc()))
            .map(|r| r.degree)
            .collect()
    }
}

/// Rank of the map induced on `H_k` by a chain map `f_k : A_k → B_k`.
fn induced_rank(da_k: &SparseMatrix, f_k: &SparseMatrix, db_k1: &SparseMatrix, ra: usize, rb: usize) -> usize {
    let mut bb = BlockBuilder::new(da_k.nrows() + f_k.nrows(), da_k.ncols() + db_k1.ncols());
    bb.place(0, 0, da_k);
    bb.place(da_k.nrows(), 0, f_k);
    bb.place(da_k.nrows(), da_k.ncols(), db_k1);
    rank(&bb.build()) - ra - rb
}

pub fn connes_maps(x: &CyclicLevelSet, ring: Ring, cap: usize) -> Result<ConnesMaps, HomologyError> {
    let bi = CyclicBicomplex::new(hochschild_operators(x, ring, cap)?);
    let total: Vec<SparseMatrix> = (0..=cap).into_par_iter().map(|k| bi.total_boundary(k)).collect();
    let inclusion: Vec<SparseMatrix> = (0..=cap).map(|k| bi.inclusion(k)).collect();
    let periodicity: Vec<SparseMatrix> = (0..=cap)
        .map(|k| {
            if k < 2 {
                SparseMatrix::zeros(0, 0)
            } else {
                bi.periodicity(k)
            }
        })
        .collect();

    for k in 1..=cap {
        if total[k].mul(&inclusion[k]) != inclusion[k - 1].mul(&bi.ops.b[k]) {
            return Err(HomologyError::OperatorIdentity {
                identity: "D∘I = I∘b",
                degree: k,
            });
        }
        if k >= 3 && total[k - 2].mul(&periodicity[k]) != periodicity[k - 1].mul(&total[k]) {
            return Err(HomologyError::OperatorIdentity {
                identity: "D∘S = S∘D",
                degree: k,
            });
        }
    }

    let ranks = (ring == Ring::Rationals).then(|| {
        let rb: Vec<usize> = bi.ops.b.par_iter().map(rank).collect();
        let rd: Vec<usize> = total.par_iter().map(rank).collect();
        let hh = |k: usize| bi.ops.dims[k] - rb[k] - rb[k + 1];
        let hc = |k: usize| bi.total_dim(k) - rd[k] - rd[k + 1];
        (0..cap)
            .into_par_iter()
            .map(|k| {
                let i_rank = induced_rank(&bi.ops.b[k], &inclusion[k], &total[k + 1], rb[k], rd[k + 1]);
                let s_rank = if k < 2 {
                    0
                } else {
                    induced_rank(&total[k], &periodicity[k], &total[k - 1], rd[k], rd[k - 1])
                };
                ConnesRanks {
                    degree: k,
                    hh: hh(k),
                    hc: hc(k),
                    hc_shifted: if k < 2 { 0 } else { hc(k - 2) },
                    i_rank,
                    s_rank,
                }
            })
            .collect()
    });

    Ok(ConnesMaps {
        bicomplex: bi,
        inclusion,
        periodicity,
        ranks,
    })
}

/// `HP_0` and `HP_1` over ℚ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicHomology {
    pub hp: [usize; 2],
    /// The `HC` degree `2l + k` each value was read from.
    pub source_degree: [usize; 2],
    /// `Σ_n rank HH_{2n+k}` over the degrees within validity.
    pub hochschild_sum: [usize; 2],
    pub hc: HomologyResult,
    pub hh: HomologyResult,
}

/// Periodic homology of a cyclic set whose Hochschild homology vanishes
/// above `dim_bound`, read off as `HP_k = HC_{2l+k}` for the least `l` with
/// `2l ≥ dim_bound`, and cross-checked against `Σ_n HH_{2n+k}` and against
/// the stability of `HC_{2l'+k}` for every larger `l'` within validity.
pub fn periodic_homology(x: &CyclicLevelSet, dim_bound: usize, cap: usize) -> Result<PeriodicHomology, HomologyError> {
    if cap < dim_bound + 2 {
        return Err(HomologyError::CapTooSmall {
            cap,
            needed: dim_bound + 2,
        });
    }
    let (hc, hh) = rayon::join(
        || cyclic_homology(x, Ring::Rationals, cap),
        || hochschild_homology(x, Ring::Rationals, cap),
    );
    let (hc, hh) = (hc?, hh?);
    let validity = cap - 1;
    let mut hp = [0; 2];
    let mut source_degree = [0; 2];
    let mut hochschild_sum = [0; 2];
    for k in 0..2 {
        let l = dim_bound.div_ceil(2);
        let first = 2 * l + k;
        if first > validity {
            return Err(HomologyError::CapTooSmall { cap, needed: first + 1 });
        }
        hp[k] = hc.rank(first)?;
        source_degree[k] = first;
        for deg in (first..=validity).step_by(2).skip(1) {
            let r = hc.rank(deg)?;
            if r != hp[k] {
                return Err(HomologyError::Inconsistent(format!(
                    "HC_{first} has rank {} but HC_{deg} has rank {r}",
                    hp[k]
                )));
            }
        }
        hochschild_sum[k] = (k..=validity)
            .step_by(2)
            .map(|n| hh.rank(n))
            .sum::<Result<usize, _>>()?;
        if hochschild_sum[k] != hp[k] {
            return Err(HomologyError::Inconsistent(format!(
                "HP_{k} from HC_{first} has rank {} but the Hochschild sum is {}",
                hp[k], hochschild_sum[k]
            )));
        }
    }
    Ok(PeriodicHomology {
        hp,
        source_degree,
        hochschild_sum,
        hc,
        hh,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{group_as_groupoid, GroupTable};
    use crate::nerve::cyclic_nerve;

    fn cn(g: GroupTable, cap: usize) -> CyclicLevelSet {
        cyclic_nerve(&group_as_groupoid(&g), cap)
    }

    #[test]
    fn trivial_group_operators() {
        let ops = hochschild_operators(&cn(GroupTable::trivial(), 3), Ring::Integers, 3).unwrap();
        assert_eq!(ops.t[0].to_dense(), vec![vec![1]]);
        assert_eq!(ops.n[0].to_dense(), vec![vec![1]]);
    }

    #[test]
    fn z2_rotation_sign() {
        let y = cn(GroupTable::cyclic(2), 2);
        let ops = hochschild_operators(&y, Ring::Integers, 2).unwrap();
        let es = y.find(1, &[0, 1]).unwrap();
        let se = y.find(1, &[1, 0]).unwrap();
        let ss = y.find(1, &[1, 1]).unwrap();
        let ee = y.find(1, &[0, 0]).unwrap();
        let t = &ops.t[1];
        assert_eq!(t.get(se, es), -1);
        assert_eq!(t.get(es, se), -1);
        assert_eq!(t.get(ss, ss), -1);
        assert_eq!(t.get(ee, ee), -1);
        assert_eq!(t.nnz(), 4);
    }

    #[test]
    fn broken_rotation_fails_verification() {
        let mut y = cn(GroupTable::cyclic(2), 2);
        let es = y.find(1, &[0, 1]).unwrap();
        let target = y.find(1, &[0, 1]).unwrap() as u32;
        let se = y.find(1, &[1, 0]).unwrap();
        y.override_cyclic(1, se, target);
        y.override_cyclic(1, es, target);
        assert!(matches!(
            hochschild_operators(&y, Ring::Integers, 2),
            Err(HomologyError::OperatorIdentity { .. })
        ));
    }

    #[test]
    fn point_cyclic_homology() {
        let hc = cyclic_homology(&cn(GroupTable::trivial(), 6), Ring::Integers, 6).unwrap();
        assert_eq!(hc.validity(), Some(5));
        for k in 0..=5 {
            let d = hc.degree(k).unwrap();
            assert!(d.torsion.is_empty());
            assert_eq!(d.rank, usize::from(k % 2 == 0), "degree {k}");
        }
        assert!(matches!(hc.degree(6), Err(HomologyError::OutOfRange { .. })));
    }

    #[test]
    fn z2_rational_cyclic_homology() {
        let y = cn(GroupTable::cyclic(2), 4);
        let hc = cyclic_homology(&y, Ring::Rationals, 4).unwrap();
        assert_eq!(
            (0..=3).map(|k| hc.rank(k).unwrap()).collect::<Vec<_>>(),
            vec![2, 0, 2, 0]
        );
        let hh = hochschild_homology(&y, Ring::Integers, 4).unwrap();
        assert_eq!(hh.rank(0).unwrap(), 2);
        let connes = connes_maps(&y, Ring::Rationals, 4).unwrap();
        assert!(connes.splitting_failures().is_empty());
        let r2 = connes.ranks_at(2).unwrap().unwrap();
        assert_eq!((r2.hc, r2.hh, r2.hc_shifted), (2, 0, 2));
    }

    #[test]
    fn trivial_periodicity_is_iso() {
        let connes = connes_maps(&cn(GroupTable::trivial(), 4), Ring::Rationals, 4).unwrap();
        let r2 = connes.ranks_at(2).unwrap().unwrap();
        assert_eq!((r2.hc, r2.hc_shifted, r2.s_rank), (1, 1, 1));
        assert!(connes.ranks_at(4).is_err());
    }

    #[test]
    fn periodic_small_groups() {
        let p = periodic_homology(&cn(GroupTable::cyclic(2), 3), 0, 3).unwrap();
        assert_eq!(p.hp, [2, 0]);
        let p = periodic_homology(&cn(GroupTable::trivial(), 4), 0, 4).unwrap();
        assert_eq!(p.hp, [1, 0]);
        assert!(matches!(
            periodic_homology(&cn(GroupTable::trivial(), 4), 3, 4),
            Err(HomologyError::CapTooSmall { .. })
        ));
    }

    #[test]
    fn s3_operator_identities() {
        let y = cn(GroupTable::symmetric(3), 4);
        hochschild_operators(&y, Ring::Integers, 4).unwrap();
    }
}
