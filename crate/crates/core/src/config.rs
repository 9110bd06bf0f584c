//! Configurations of groupoid-labelled points on the circle and the
//! interval, their encoding as points of the realized cyclic nerve, and the
//! rotation and cut maps.
//!
//! A configuration lists only the points whose label is not an identity;
//! everywhere else the label is the identity at the adjacent object. With no
//! points at all, the object has to be given explicitly as the base.
//!
//! Positions are exact rationals. Circle positions lie in `[0, 1)`,
//! interval positions in the open interval `(0, 1)`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::groupoid::{FiniteGroupoid, MorphismId, ObjectId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ambient {
    Circle,
    Interval,
}

#[derive(Clone, Debug)]
pub struct Configuration<'g> {
    pub groupoid: &'g FiniteGroupoid,
    pub ambient: Ambient,
    pub support: Vec<(BigRational, MorphismId)>,
    /// The object of an empty configuration; `None` otherwise.
    pub base: Option<ObjectId>,
}

impl PartialEq for Configuration<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.groupoid, other.groupoid)
            && self.ambient == other.ambient
            && self.support == other.support
            && self.base == other.base
    }
}

impl Eq for Configuration<'_> {}

impl fmt::Display for Configuration<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.ambient {
            Ambient::Circle => "circle",
            Ambient::Interval => "interval",
        };
        if self.support.is_empty() {
            let base = self.base.map_or("?", |x| self.groupoid.object_name(x));
            return write!(f, "{kind}{{}} at {base}");
        }
        let pts: Vec<String> = self
            .support
            .iter()
            .map(|(p, m)| format!("({p}, {})", self.groupoid.morphism_name(*m)))
            .collect();
        write!(f, "{kind}{{{}}}", pts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConfigViolation {
    #[error("point {index} has position outside the allowed range")]
    PositionOutOfRange { index: usize },
    #[error("positions are not strictly increasing at point {index}")]
    NotIncreasing { index: usize },
    #[error("point {index} carries an identity")]
    IdentityLabel { index: usize },
    #[error("point {index} carries an unknown morphism")]
    UnknownMorphism { index: usize },
    #[error("labels of points {index} and {} are not composable", .index + 1)]
    NotComposable { index: usize },
    #[error("last label does not end where the first begins")]
    Wrap,
    #[error("empty configuration without a base object")]
    MissingBase,
    #[error("nonempty configuration also names a base object")]
    UnexpectedBase,
    #[error("base object is out of range")]
    UnknownBase,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("invalid configuration: {}", render(.0))]
    Invalid(Vec<ConfigViolation>),
    #[error("expected a {expected:?} configuration")]
    WrongAmbient { expected: Ambient },
    #[error("simplex has {simplex} entries but {coords} coordinates")]
    LengthMismatch { simplex: usize, coords: usize },
    #[error("coordinates must be positive and sum to 1")]
    NotInterior,
    #[error("simplex is empty")]
    EmptySimplex,
    #[error("simplex entry {position} is not a morphism of the groupoid")]
    UnknownMorphism { position: usize },
    #[error("simplex entries {position} and {} are not composable", .position + 1)]
    NotComposable { position: usize },
    #[error("identity in simplex position {position}; only position 0 may hold one")]
    DegenerateSimplex { position: usize },
    #[error("rotation index {r} exceeds level {n}")]
    RotationIndex { r: usize, n: usize },
}

fn render(v: &[ConfigViolation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// A point in the interior of a simplex of the cyclic nerve (or the nerve):
/// `coords` are positive and sum to 1, one per entry of `simplex`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimplexPoint {
    pub simplex: Vec<MorphismId>,
    pub coords: Vec<BigRational>,
}

/// A point of the realized nerve. Level 0 stores `[object]`, matching the
/// nerve's level-0 tuples; level `n ≥ 1` stores the chain `(g_1, …, g_n)`
/// with `n + 1` coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NervePoint {
    pub simplex: Vec<usize>,
    pub coords: Vec<BigRational>,
}

fn frac(q: &BigRational) -> BigRational {
    q - q.floor()
}

fn in_range(p: &BigRational, ambient: Ambient) -> bool {
    let lower_ok = match ambient {
        Ambient::Circle => !p.is_negative(),
        Ambient::Interval => p.is_positive(),
    };
    lower_ok && *p < BigRational::one()
}

impl<'g> Configuration<'g> {
    pub fn circle(groupoid: &'g FiniteGroupoid, support: Vec<(BigRational, MorphismId)>) -> Self {
        Configuration {
            groupoid,
            ambient: Ambient::Circle,
            support,
            base: None,
        }
    }

    pub fn interval(groupoid: &'g FiniteGroupoid, support: Vec<(BigRational, MorphismId)>) -> Self {
        Configuration {
            groupoid,
            ambient: Ambient::Interval,
            support,
            base: None,
        }
    }

    pub fn empty(groupoid: &'g FiniteGroupoid, ambient: Ambient, base: ObjectId) -> Self {
        Configuration {
            groupoid,
            ambient,
            support: Vec::new(),
            base: Some(base),
        }
    }

    /// All violated invariants; empty iff the configuration is valid.
    pub fn validate(&self) -> Vec<ConfigViolation> {
        let g = self.groupoid;
        let mut out = Vec::new();
        match (self.support.is_empty(), self.base) {
            (true, None) => out.push(ConfigViolation::MissingBase),
            (true, Some(x)) if x >= g.num_objects() => out.push(ConfigViolation::UnknownBase),
            (false, Some(_)) => out.push(ConfigViolation::UnexpectedBase),
            _ => {}
        }
        let mut known = true;
        for (index, (p, m)) in self.support.iter().enumerate() {
            if !in_range(p, self.ambient) {
                out.push(ConfigViolation::PositionOutOfRange { index });
            }
            if index > 0 && self.support[index - 1].0 >= *p {
                out.push(ConfigViolation::NotIncreasing { index });
            }
            if *m >= g.num_morphisms() {
                out.push(ConfigViolation::UnknownMorphism { index });
                known = false;
            } else if g.is_identity(*m) {
                out.push(ConfigViolation::IdentityLabel { index });
            }
        }
        if known {
            for index in 1..self.support.len() {
                if g.tgt(self.support[index - 1].1) != g.src(self.support[index].1) {
                    out.push(ConfigViolation::NotComposable { index: index - 1 });
                }
            }
            if self.ambient == Ambient::Circle {
                if let (Some(first), Some(last)) = (self.support.first(), self.support.last()) {
                    if g.src(first.1) != g.tgt(last.1) {
                        out.push(ConfigViolation::Wrap);
                    }
                }
            }
        }
        out
    }

    fn ensure(&self, ambient: Ambient) -> Result<(), ConfigError> {
        if self.ambient != ambient {
            return Err(ConfigError::WrongAmbient { expected: ambient });
        }
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(v))
        }
    }

    /// The labelled object of an empty configuration, or the source of the
    /// first label.
    pub fn start_object(&self) -> ObjectId {
        match self.support.first() {
            Some(&(_, m)) => self.groupoid.src(m),
            None => self.base.expect("validated configuration"),
        }
    }
}

/// φ: a circle configuration with points `x_0 < ⋯ < x_n` and labels
/// `g_0, …, g_n` goes to `((g_0, …, g_n); (x_1, x_2 − x_1, …, 1 − x_n))` when
/// `x_0 = 0`, and to `((e, g_0, …, g_n); (x_0, x_1 − x_0, …, 1 − x_n))`
/// with `e` the identity at `src(g_0)` otherwise. The empty configuration at
/// `x` goes to `((e_x); (1))`.
pub fn encode_phi(c: &Configuration<'_>) -> Result<SimplexPoint, ConfigError> {
    c.ensure(Ambient::Circle)?;
    let g = c.groupoid;
    if c.support.is_empty() {
        return Ok(SimplexPoint {
            simplex: vec![g.ident(c.start_object())],
            coords: vec![BigRational::one()],
        });
    }
    let mut simplex = Vec::with_capacity(c.support.len() + 1);
    let mut cuts = Vec::with_capacity(c.support.len() + 1);
    if !c.support[0].0.is_zero() {
        simplex.push(g.ident(c.start_object()));
        cuts.push(BigRational::zero());
    }
    for (p, m) in &c.support {
        simplex.push(*m);
        cuts.push(p.clone());
    }
    cuts.push(BigRational::one());
    let coords = cuts.windows(2).map(|w| &w[1] - &w[0]).collect();
    Ok(SimplexPoint { simplex, coords })
}

fn check_loop(g: &FiniteGroupoid, simplex: &[MorphismId], coords: &[BigRational]) -> Result<(), ConfigError> {
    if simplex.is_empty() {
        return Err(ConfigError::EmptySimplex);
    }
    if simplex.len() != coords.len() {
        return Err(ConfigError::LengthMismatch {
            simplex: simplex.len(),
            coords: coords.len(),
        });
    }
    if coords.iter().any(|u| !u.is_positive()) || coords.iter().sum::<BigRational>() != BigRational::one() {
        return Err(ConfigError::NotInterior);
    }
    if let Some(position) = simplex.iter().position(|&m| m >= g.num_morphisms()) {
        return Err(ConfigError::UnknownMorphism { position });
    }
    let n = simplex.len();
    for position in 0..n {
        if g.tgt(simplex[position]) != g.src(simplex[(position + 1) % n]) {
            return Err(ConfigError::NotComposable { position });
        }
    }
    Ok(())
}

fn place_labels<'g>(g: &'g FiniteGroupoid, p: &SimplexPoint) -> Configuration<'g> {
    let mut support = Vec::new();
    let mut at = BigRational::zero();
    for (m, u) in p.simplex.iter().zip(&p.coords) {
        if !g.is_identity(*m) {
            support.push((at.clone(), *m));
        }
        at += u;
    }
    let base = support.is_empty().then(|| g.src(p.simplex[0]));
    Configuration {
        groupoid: g,
        ambient: Ambient::Circle,
        support,
        base,
    }
}

/// φ⁻¹: entry `k` of the simplex is placed at `u_0 + ⋯ + u_{k−1}`. An
/// identity is accepted only in position 0, where it is background.
pub fn decode_phi<'g>(g: &'g FiniteGroupoid, p: &SimplexPoint) -> Result<Configuration<'g>, ConfigError> {
    check_loop(g, &p.simplex, &p.coords)?;
    if let Some(position) = p.simplex.iter().skip(1).position(|&m| g.is_identity(m)) {
        return Err(ConfigError::DegenerateSimplex { position: position + 1 });
    }
    Ok(place_labels(g, p))
}

/// Like [`decode_phi`] but identities anywhere are treated as background,
/// which is the configuration a possibly degenerate point represents.
pub fn realize_point<'g>(g: &'g FiniteGroupoid, p: &SimplexPoint) -> Result<Configuration<'g>, ConfigError> {
    check_loop(g, &p.simplex, &p.coords)?;
    Ok(place_labels(g, p))
}

/// ρ(θ, α)(x) = α(θ + x): every position moves to `(x − θ) mod 1`.
pub fn rotate<'g>(c: &Configuration<'g>, theta: &BigRational) -> Result<Configuration<'g>, ConfigError> {
    c.ensure(Ambient::Circle)?;
    let mut support: Vec<(BigRational, MorphismId)> = c.support.iter().map(|(p, m)| (frac(&(p - theta)), *m)).collect();
    support.sort();
    Ok(Configuration { support, ..c.clone() })
}

/// ε(α, θ)(x) = α(θ + x) on `(0, 1)`: the point at angle `θ`, if any, is
/// removed and the rest is read as an interval configuration. When that
/// empties the support, the base is the target of the removed label.
pub fn cut_epsilon<'g>(c: &Configuration<'g>, theta: &BigRational) -> Result<Configuration<'g>, ConfigError> {
    c.ensure(Ambient::Circle)?;
    let mut removed = None;
    let mut support = Vec::with_capacity(c.support.len());
    for (p, m) in &c.support {
        let q = frac(&(p - theta));
        if q.is_zero() {
            removed = Some(*m);
        } else {
            support.push((q, *m));
        }
    }
    support.sort();
    let base = if !support.is_empty() {
        None
    } else {
        Some(match removed {
            Some(m) => c.groupoid.tgt(m),
            None => c.start_object(),
        })
    };
    Ok(Configuration {
        groupoid: c.groupoid,
        ambient: Ambient::Interval,
        support,
        base,
    })
}

/// Interval configuration `x_1 < ⋯ < x_n` labelled `g_1, …, g_n` to the nerve
/// point `((g_1, …, g_n); (x_1, x_2 − x_1, …, 1 − x_n))`; the empty
/// configuration at `x` goes to `([x]; (1))`.
pub fn interval_to_nerve_point(c: &Configuration<'_>) -> Result<NervePoint, ConfigError> {
    c.ensure(Ambient::Interval)?;
    if c.support.is_empty() {
        return Ok(NervePoint {
            simplex: vec![c.start_object()],
            coords: vec![BigRational::one()],
        });
    }
    let mut cuts = vec![BigRational::zero()];
    cuts.extend(c.support.iter().map(|(p, _)| p.clone()));
    cuts.push(BigRational::one());
    Ok(NervePoint {
        simplex: c.support.iter().map(|&(_, m)| m).collect(),
        coords: cuts.windows(2).map(|w| &w[1] - &w[0]).collect(),
    })
}

/// Inverse of [`interval_to_nerve_point`] on interior points of
/// nondegenerate simplices.
pub fn nerve_point_to_interval<'g>(g: &'g FiniteGroupoid, p: &NervePoint) -> Result<Configuration<'g>, ConfigError> {
    let level0 = p.simplex.len() == 1 && p.coords.len() == 1;
    if !level0 && p.coords.len() != p.simplex.len() + 1 {
        return Err(ConfigError::LengthMismatch {
            simplex: p.simplex.len(),
            coords: p.coords.len(),
        });
    }
    if p.simplex.is_empty() {
        return Err(ConfigError::EmptySimplex);
    }
    if p.coords.iter().any(|u| !u.is_positive()) || p.coords.iter().sum::<BigRational>() != BigRational::one() {
        return Err(ConfigError::NotInterior);
    }
    if level0 {
        let x = p.simplex[0];
        let c = Configuration::empty(g, Ambient::Interval, x);
        return c.ensure(Ambient::Interval).map(|_| c);
    }
    let mut at = BigRational::zero();
    let mut support = Vec::with_capacity(p.simplex.len());
    for (m, u) in p.simplex.iter().zip(&p.coords) {
        at += u;
        support.push((at.clone(), *m));
    }
    let c = Configuration::interval(g, support);
    c.ensure(Ambient::Interval)?;
    Ok(c)
}

/// The S¹-equivariance identity of φ on one point: with `s = u_r + ⋯ + u_n`,
/// rotating `φ⁻¹(x; u_r, …, u_n, u_0, …, u_{r−1})` by `s` must give the
/// configuration realized by `(t^r x; u_0, …, u_n)`.
pub fn check_equivariance(
    g: &FiniteGroupoid,
    x: &[MorphismId],
    u: &[BigRational],
    r: usize,
) -> Result<bool, ConfigError> {
    let n = x.len().checked_sub(1).ok_or(ConfigError::EmptySimplex)?;
    if r > n {
        return Err(ConfigError::RotationIndex { r, n });
    }
    let shifted: Vec<BigRational> = u[r..].iter().chain(&u[..r]).cloned().collect();
    let left = decode_phi(
        g,
        &SimplexPoint {
            simplex: x.to_vec(),
            coords: shifted,
        },
    )?;
    let s: BigRational = u[r..].iter().sum();
    let left = rotate(&left, &s)?;
    let mut rotated = x.to_vec();
    rotated.rotate_right(r);
    let right = realize_point(
        g,
        &SimplexPoint {
            simplex: rotated,
            coords: u.to_vec(),
        },
    )?;
    Ok(left == right)
}
