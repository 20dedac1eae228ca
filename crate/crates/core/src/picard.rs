//! Exact finite model of `Pic(X)` and `Jac(X)`.
//!
//! A line-bundle class is an integer degree together with Abel-Jacobi
//! coordinates in `(Q/Z)^{2g}`. Doubling is surjective on this model with
//! kernel `(Z/2)^{2g}`, so square roots come in torsors of size `2^{2g}`.

use crate::exact::{frac01, rat, Rat};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PicardError {
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("genus must be at least 1, got {0}")]
    BadGenus(i64),
    #[error("Jacobian vector has {found} coordinates, expected {expected}")]
    JacLength { expected: usize, found: usize },
    #[error("degree {0} is odd, no square root exists")]
    DegreeParity(i64),
    #[error("h0 override {value} contradicts Riemann-Roch in degree {degree} (genus {genus})")]
    InvalidOverride { value: i64, degree: i64, genus: i64 },
    #[error("section divisor is not effective")]
    NotEffective,
    #[error("section divisor has class {found}, expected {expected}")]
    SectionClass { expected: PicClass, found: PicClass },
}

/// Abel-Jacobi coordinates, every entry reduced into `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JacVector(Vec<Rat>);

impl JacVector {
    pub fn new(coords: Vec<Rat>) -> Self {
        JacVector(coords.into_iter().map(frac01).collect())
    }

    pub fn zero(genus: usize) -> Self {
        JacVector(vec![Rat::from_integer(0); 2 * genus])
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == Rat::from_integer(0))
    }

    pub fn scale(&self, k: i64) -> Self {
        JacVector::new(self.0.iter().map(|c| *c * k).collect())
    }

    fn zip(&self, other: &Self, f: impl Fn(Rat, Rat) -> Rat) -> Self {
        assert_eq!(self.len(), other.len(), "Jacobian vectors of different genus");
        JacVector::new(self.0.iter().zip(&other.0).map(|(a, b)| f(*a, *b)).collect())
    }
}

impl Serialize for JacVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        crate::exact::rat_vec::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for JacVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        crate::exact::rat_vec::deserialize(d).map(JacVector::new)
    }
}

/// Class of a line bundle: degree plus Jacobian coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PicClass {
    pub degree: i64,
    pub jac: JacVector,
}

impl PicClass {
    pub fn new(degree: i64, jac: JacVector) -> Self {
        PicClass { degree, jac }
    }

    pub fn trivial(genus: usize) -> Self {
        PicClass::new(0, JacVector::zero(genus))
    }

    /// Degree-`degree` class with zero Jacobian coordinates.
    pub fn of_degree(degree: i64, genus: usize) -> Self {
        PicClass::new(degree, JacVector::zero(genus))
    }

    pub fn genus(&self) -> usize {
        self.jac.len() / 2
    }

    pub fn times(&self, k: i64) -> Self {
        PicClass::new(self.degree * k, self.jac.scale(k))
    }

    pub fn is_trivial(&self) -> bool {
        self.degree == 0 && self.jac.is_zero()
    }
}

impl Add for &PicClass {
    type Output = PicClass;
    fn add(self, rhs: &PicClass) -> PicClass {
        PicClass::new(self.degree + rhs.degree, self.jac.zip(&rhs.jac, |a, b| a + b))
    }
}

impl Sub for &PicClass {
    type Output = PicClass;
    fn sub(self, rhs: &PicClass) -> PicClass {
        PicClass::new(self.degree - rhs.degree, self.jac.zip(&rhs.jac, |a, b| a - b))
    }
}

impl Neg for &PicClass {
    type Output = PicClass;
    fn neg(self) -> PicClass {
        self.times(-1)
    }
}

impl fmt::Display for PicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; ", self.degree)?;
        for (i, c) in self.jac.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", crate::exact::ShowRat(*c))?;
        }
        write!(f, ")")
    }
}

/// Curve of genus `g` with registered points and their Abel-Jacobi images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CurveModel {
    pub genus: usize,
    #[serde(default)]
    pub points: BTreeMap<String, JacVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical_class_jac: Option<JacVector>,
}

impl CurveModel {
    pub fn new(genus: usize) -> Result<Self, PicardError> {
        if genus < 1 {
            return Err(PicardError::BadGenus(genus as i64));
        }
        Ok(CurveModel { genus, points: BTreeMap::new(), canonical_class_jac: None })
    }

    /// Checks coordinate lengths after deserialization.
    pub fn validate(&self) -> Result<(), PicardError> {
        if self.genus < 1 {
            return Err(PicardError::BadGenus(self.genus as i64));
        }
        let expected = 2 * self.genus;
        let all = self.points.values().chain(self.canonical_class_jac.iter());
        for v in all {
            if v.len() != expected {
                return Err(PicardError::JacLength { expected, found: v.len() });
            }
        }
        Ok(())
    }

    pub fn add_point(&mut self, id: impl Into<String>, aj: JacVector) -> Result<(), PicardError> {
        if aj.len() != 2 * self.genus {
            return Err(PicardError::JacLength { expected: 2 * self.genus, found: aj.len() });
        }
        self.points.insert(id.into(), aj);
        Ok(())
    }

    pub fn with_point(mut self, id: &str, coords: &[(i64, i64)]) -> Result<Self, PicardError> {
        let aj = JacVector::new(coords.iter().map(|&(n, d)| rat(n, d)).collect());
        self.add_point(id, aj)?;
        Ok(self)
    }

    /// Genus below 2 carries no theorem-backed verdicts.
    pub fn model_only(&self) -> bool {
        self.genus < 2
    }

    pub fn trivial(&self) -> PicClass {
        PicClass::trivial(self.genus)
    }

    pub fn canonical(&self) -> PicClass {
        let jac = self.canonical_class_jac.clone().unwrap_or_else(|| JacVector::zero(self.genus));
        PicClass::new(2 * self.genus as i64 - 2, jac)
    }

    pub fn aj(&self, id: &str) -> Result<&JacVector, PicardError> {
        self.points.get(id).ok_or_else(|| PicardError::UnknownPoint(id.to_string()))
    }
}

/// Finite formal sum of registered points.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Divisor {
    #[serde(rename = "points")]
    support: BTreeMap<String, i64>,
}

impl Divisor {
    pub fn zero() -> Self {
        Divisor::default()
    }

    pub fn from_points<'a>(pts: impl IntoIterator<Item = (&'a str, i64)>) -> Self {
        let mut d = Divisor::zero();
        for (p, m) in pts {
            d.add_point(p, m);
        }
        d
    }

    pub fn point(id: &str) -> Self {
        Divisor::from_points([(id, 1)])
    }

    pub fn add_point(&mut self, id: &str, mult: i64) {
        let entry = self.support.entry(id.to_string()).or_insert(0);
        *entry += mult;
        if *entry == 0 {
            self.support.remove(id);
        }
    }

    /// Drops zero multiplicities left over by deserialization.
    pub fn normalized(mut self) -> Self {
        self.support.retain(|_, m| *m != 0);
        self
    }

    pub fn degree(&self) -> i64 {
        self.support.values().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.support.values().all(|m| *m > 0)
    }

    pub fn multiplicity(&self, id: &str) -> i64 {
        self.support.get(id).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = (&str, i64)> {
        self.support.iter().map(|(p, m)| (p.as_str(), *m))
    }

    pub fn support_len(&self) -> usize {
        self.support.len()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn scale(&self, k: i64) -> Self {
        Divisor::from_points(self.support().map(|(p, m)| (p, m * k)))
    }

    /// `self >= other` pointwise.
    pub fn dominates(&self, other: &Divisor) -> bool {
        (self - other).is_effective()
    }

    /// `D/2` when every multiplicity is even.
    pub fn halve(&self) -> Option<Divisor> {
        if self.support.values().all(|m| m % 2 == 0) {
            Some(Divisor::from_points(self.support().map(|(p, m)| (p, m / 2))))
        } else {
            None
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.support.values().all(|m| *m == 1)
    }
}

impl Add for &Divisor {
    type Output = Divisor;
    fn add(self, rhs: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (p, m) in rhs.support() {
            out.add_point(p, m);
        }
        out
    }
}

impl Sub for &Divisor {
    type Output = Divisor;
    fn sub(self, rhs: &Divisor) -> Divisor {
        self + &rhs.scale(-1)
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .support()
            .map(|(p, m)| if m == 1 { p.to_string() } else { format!("{m}{p}") })
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}

/// A holomorphic section, recorded only through its divisor of zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub enum SectionModel {
    #[default]
    Zero,
    NonZero(Divisor),
}

impl SectionModel {
    pub fn vanishing(divisor: Divisor) -> Self {
        SectionModel::NonZero(divisor)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, SectionModel::Zero)
    }

    pub fn divisor(&self) -> Option<&Divisor> {
        match self {
            SectionModel::Zero => None,
            SectionModel::NonZero(d) => Some(d),
        }
    }

    /// Checks that a non-zero section is a section of `target`.
    pub fn check(&self, curve: &CurveModel, target: &PicClass) -> Result<(), PicardError> {
        let Some(div) = self.divisor() else { return Ok(()) };
        if !div.is_effective() {
            return Err(PicardError::NotEffective);
        }
        let found = class_of_divisor(div, curve)?;
        if &found != target {
            return Err(PicardError::SectionClass { expected: target.clone(), found });
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SectionRepr {
    divisor: Divisor,
}

impl Serialize for SectionModel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.divisor().map(|d| SectionRepr { divisor: d.clone() }).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SectionModel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match Option::<SectionRepr>::deserialize(d)? {
            None => SectionModel::Zero,
            Some(r) => SectionModel::NonZero(r.divisor.normalized()),
        })
    }
}

/// Abel-Jacobi image of a divisor.
pub fn class_of_divisor(div: &Divisor, curve: &CurveModel) -> Result<PicClass, PicardError> {
    let mut acc = vec![Rat::from_integer(0); 2 * curve.genus];
    for (p, m) in div.support() {
        for (a, c) in acc.iter_mut().zip(curve.aj(p)?.coords()) {
            *a += *c * m;
        }
    }
    Ok(PicClass::new(div.degree(), JacVector::new(acc)))
}

/// All `x` with `2x = c`, in a fixed order (torsion translate enumerated by bitmask).
pub fn square_roots(c: &PicClass) -> Vec<PicClass> {
    if c.degree % 2 != 0 {
        return Vec::new();
    }
    let half = rat(1, 2);
    let base: Vec<Rat> = c.jac.coords().iter().map(|x| *x * half).collect();
    let n = base.len();
    (0u64..1 << n)
        .map(|mask| {
            let coords = base
                .iter()
                .enumerate()
                .map(|(i, b)| if mask >> i & 1 == 1 { *b + half } else { *b })
                .collect();
            PicClass::new(c.degree / 2, JacVector::new(coords))
        })
        .collect()
}

/// Special values of `h^0` that the generic formula cannot see.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum H0Override {
    /// The trivial class: `h^0 = 1`.
    Trivial,
    /// The canonical class: `h^0 = g`.
    Canonical,
    Value(i64),
}

/// `h^0` of a degree-`e` class on a genus-`g` curve.
pub fn h0(e: i64, g: i64, special: Option<H0Override>) -> Result<i64, PicardError> {
    if g < 1 {
        return Err(PicardError::BadGenus(g));
    }
    let rr = e - g + 1;
    let generic = if e < 0 { 0 } else { rr.max(0) };
    let Some(special) = special else { return Ok(generic) };
    let invalid = |value| PicardError::InvalidOverride { value, degree: e, genus: g };
    let value = match special {
        H0Override::Trivial if e == 0 => 1,
        H0Override::Trivial => return Err(invalid(1)),
        H0Override::Canonical if e == 2 * g - 2 => g,
        H0Override::Canonical => return Err(invalid(g)),
        H0Override::Value(v) => v,
    };
    let forced = e < 0 || e > 2 * g - 2;
    let consistent = value >= rr.max(0) && (!forced || value == generic) && value <= e.max(0) + 1;
    if consistent {
        Ok(value)
    } else {
        Err(invalid(value))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rank1EmptyReason {
    AlphaExceedsDegree,
    NoNonzeroSection,
}

/// Shape of the moduli of rank-1 pairs of degree `d'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Rank1Verdict {
    Empty { reason: Rank1EmptyReason },
    SquareRootSet { count: u64 },
    Cover { dimension: i64 },
}

pub fn rank1_verdict(degree: i64, alpha: Rat, u: &PicClass, curve: &CurveModel) -> Rank1Verdict {
    if alpha > Rat::from_integer(degree) {
        Rank1Verdict::Empty { reason: Rank1EmptyReason::AlphaExceedsDegree }
    } else if 2 * degree > u.degree {
        Rank1Verdict::Empty { reason: Rank1EmptyReason::NoNonzeroSection }
    } else if 2 * degree == u.degree {
        Rank1Verdict::SquareRootSet { count: 1 << (2 * curve.genus) }
    } else {
        Rank1Verdict::Cover { dimension: u.degree - 2 * degree }
    }
}

/// Line bundles `L` with `L^2 = U(-D)`: the fibre of the rank-1 moduli over `D`.
pub fn rank1_fibre(d: &Divisor, u: &PicClass, curve: &CurveModel) -> Result<Vec<PicClass>, PicardError> {
    let rest = u - &class_of_divisor(d, curve)?;
    if rest.degree % 2 != 0 {
        return Err(PicardError::DegreeParity(rest.degree));
    }
    Ok(square_roots(&rest))
}
