//! Degree shifting numbers and additive Chen–Ruan orbifold cohomology ranks.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::groupoid::GroupTable;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ChenRuanError {
    #[error("exponent {index} is {value}, outside [0, 1)")]
    ExponentOutOfRange { index: usize, value: BigRational },
    #[error("sector `{sector}` has negative age {age}")]
    NegativeAge { sector: String, age: BigRational },
    #[error("sector `{sector}` has non-integral age {age}; the comparison needs integral ages")]
    NotSl { sector: String, age: BigRational },
}

/// Exponents `a_j ∈ [0, 1)` of the eigenvalues `e^{2πi a_j}` of a
/// finite-order linear map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenExponents(Vec<BigRational>);

impl EigenExponents {
    pub fn new(exponents: Vec<BigRational>) -> Result<Self, ChenRuanError> {
        for (index, a) in exponents.iter().enumerate() {
            if a.is_negative() || *a >= BigRational::one() {
                return Err(ChenRuanError::ExponentOutOfRange {
                    index,
                    value: a.clone(),
                });
            }
        }
        Ok(EigenExponents(exponents))
    }

    pub fn exponents(&self) -> &[BigRational] {
        &self.0
    }

    /// Exponents of the inverse map: `a ↦ 1 − a` for `a ≠ 0`.
    pub fn inverse(&self) -> EigenExponents {
        EigenExponents(
            self.0
                .iter()
                .map(|a| if a.is_zero() { a.clone() } else { BigRational::one() - a })
                .collect(),
        )
    }

    pub fn nonzero_count(&self) -> usize {
        self.0.iter().filter(|a| !a.is_zero()).count()
    }
}

/// The age `Σ a_j`.
pub fn age(e: &EigenExponents) -> BigRational {
    e.0.iter().sum()
}

/// Whether every element has integral age (determinant one).
pub fn is_sl(elements: &[EigenExponents]) -> bool {
    elements.iter().all(|e| age(e).is_integer())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorData {
    pub id: String,
    pub age: BigRational,
    pub betti: Vec<usize>,
}

impl SectorData {
    pub fn new(id: impl Into<String>, age: BigRational, betti: Vec<usize>) -> Result<Self, ChenRuanError> {
        let id = id.into();
        if age.is_negative() {
            return Err(ChenRuanError::NegativeAge { sector: id, age });
        }
        Ok(SectorData { id, age, betti })
    }
}

/// `rank H_orb^m = Σ_sectors betti[m − 2·age]`, keyed by the (possibly
/// fractional) degree `m`. Degrees of rank zero are omitted.
pub fn orbifold_cohomology_ranks(sectors: &[SectorData]) -> BTreeMap<BigRational, usize> {
    let mut table = BTreeMap::new();
    for s in sectors {
        let shift = &s.age * BigRational::from_integer(BigInt::from(2));
        for (k, &b) in s.betti.iter().enumerate() {
            if b > 0 {
                *table.entry(BigRational::from_integer(k.into()) + &shift).or_insert(0) += b;
            }
        }
    }
    table
}

/// The table with integer degrees, or `None` if some degree is fractional.
pub fn integral_degrees(table: &BTreeMap<BigRational, usize>) -> Option<BTreeMap<BigInt, usize>> {
    table
        .iter()
        .map(|(d, &r)| d.is_integer().then(|| (d.to_integer(), r)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HorbComparison {
    pub even_rank: usize,
    pub odd_rank: usize,
    pub hp0_rank: usize,
    pub hp1_rank: usize,
}

impl HorbComparison {
    pub fn matches(&self) -> bool {
        self.even_rank == self.hp0_rank && self.odd_rank == self.hp1_rank
    }
}

/// Compares the even and odd total ranks of orbifold cohomology with
/// `HP_0` and `HP_1`. Sectors with fractional age are refused.
pub fn compare_hp_horb(
    sectors: &[SectorData],
    hp0_rank: usize,
    hp1_rank: usize,
) -> Result<HorbComparison, ChenRuanError> {
    if let Some(s) = sectors.iter().find(|s| !s.age.is_integer()) {
        return Err(ChenRuanError::NotSl {
            sector: s.id.clone(),
            age: s.age.clone(),
        });
    }
    let table = integral_degrees(&orbifold_cohomology_ranks(sectors)).expect("integral ages give integral degrees");
    let two = BigInt::from(2);
    let (mut even_rank, mut odd_rank) = (0, 0);
    for (d, r) in table {
        if (d % &two).is_zero() {
            even_rank += r;
        } else {
            odd_rank += r;
        }
    }
    Ok(HorbComparison {
        even_rank,
        odd_rank,
        hp0_rank,
        hp1_rank,
    })
}

/// Sectors of the point quotient `[pt/G]`: one point of age 0 per conjugacy
/// class, named by its first element.
pub fn point_quotient_sectors(g: &GroupTable) -> Vec<SectorData> {
    g.conjugacy_classes()
        .iter()
        .map(|class| SectorData {
            id: format!("({})", g.names()[class[0]]),
            age: BigRational::zero(),
            betti: vec![1],
        })
        .collect()
}

/// Rank of `K_orb([pt/G]) ⊗ ℂ`, taken as the number of conjugacy classes
/// (the rank of the representation ring).
pub fn korb_rank_point_quotient(g: &GroupTable) -> usize {
    g.conjugacy_classes().len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn exps(v: &[(i64, i64)]) -> EigenExponents {
        EigenExponents::new(v.iter().map(|&(n, d)| q(n, d)).collect()).unwrap()
    }

    #[test]
    fn ages() {
        assert_eq!(age(&exps(&[(0, 1), (0, 1)])), q(0, 1));
        let z3 = exps(&[(1, 3), (2, 3)]);
        assert_eq!(age(&z3), q(1, 1));
        let half = exps(&[(1, 2)]);
        assert_eq!(age(&half), q(1, 2));
        assert!(is_sl(&[z3.clone(), exps(&[(0, 1), (0, 1)])]));
        assert!(!is_sl(&[half]));
        assert!(is_sl(&[exps(&[(0, 1)])]));
        assert_eq!(age(&z3) + age(&z3.inverse()), q(z3.nonzero_count() as i64, 1));
        assert!(EigenExponents::new(vec![q(1, 1)]).is_err());
    }

    #[test]
    fn shifted_tables() {
        let pt = |age: i64, betti: Vec<usize>| SectorData::new("x", q(age, 1), betti).unwrap();
        let s3 = point_quotient_sectors(&GroupTable::symmetric(3));
        let t = orbifold_cohomology_ranks(&s3);
        assert_eq!(t.into_iter().collect::<Vec<_>>(), vec![(q(0, 1), 3)]);
        let t = orbifold_cohomology_ranks(&[pt(1, vec![1])]);
        assert_eq!(t.into_iter().collect::<Vec<_>>(), vec![(q(2, 1), 1)]);
        let t = orbifold_cohomology_ranks(&[pt(0, vec![1, 0, 1]), pt(1, vec![1])]);
        assert_eq!(t.into_iter().collect::<Vec<_>>(), vec![(q(0, 1), 1), (q(2, 1), 2)]);
    }

    #[test]
    fn comparison() {
        let c = compare_hp_horb(&point_quotient_sectors(&GroupTable::symmetric(3)), 3, 0).unwrap();
        assert!(c.matches());
        assert_eq!(c.even_rank, 3);
        let c = compare_hp_horb(&point_quotient_sectors(&GroupTable::cyclic(2)), 2, 0).unwrap();
        assert!(c.matches());
        let frac = SectorData::new("h", q(1, 2), vec![1]).unwrap();
        assert!(matches!(
            compare_hp_horb(&[frac], 1, 0),
            Err(ChenRuanError::NotSl { .. })
        ));
        assert_eq!(korb_rank_point_quotient(&GroupTable::trivial()), 1);
    }
}
