//! Truncated power series over the Gaussian rationals, restriction to divisors,
//! and exact square roots by Hensel lifting.

use crate::batch::{self, Mode};
use crate::dimensions::DimError;
use crate::picard::Divisor;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("point `{point}` needs {needed} coefficients, got {given}")]
    InsufficientCoefficients { point: String, needed: usize, given: usize },
    #[error("{0} has no square root in Q(i); a field extension is required")]
    NonSquareScalar(String),
    #[error("g11 does not vanish to order {order} at `{point}`")]
    DivisorMismatch { point: String, order: usize },
    #[error("jet length must be at least 1")]
    EmptyJet,
    #[error("divisor must be effective")]
    NotEffective,
}

/// Element `re + i*im` of `Q(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    pub re: BigRational,
    pub im: BigRational,
}

fn big(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| BigRational::new(rn, rd))
}

impl Scalar {
    pub fn real(q: BigRational) -> Self {
        Scalar { re: q, im: BigRational::zero() }
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::real(big(n, d))
    }

    pub fn int(n: i64) -> Self {
        Scalar::ratio(n, 1)
    }

    pub fn gaussian(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar::int(0)
    }

    pub fn one() -> Self {
        Scalar::real(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn inverse(&self) -> Option<Scalar> {
        let norm = &self.re * &self.re + &self.im * &self.im;
        (!norm.is_zero()).then(|| Scalar { re: &self.re / &norm, im: -&self.im / &norm })
    }

    /// One square root in `Q(i)`; the other is its negative.
    pub fn sqrt(&self) -> Option<Scalar> {
        if self.im.is_zero() {
            return match rational_sqrt(&self.re) {
                Some(r) => Some(Scalar::real(r)),
                None => rational_sqrt(&-&self.re).map(|r| Scalar::gaussian(BigRational::zero(), r)),
            };
        }
        let modulus = rational_sqrt(&(&self.re * &self.re + &self.im * &self.im))?;
        let x = rational_sqrt(&((&self.re + &modulus) / BigRational::from_integer(2.into())))?;
        let y = &self.im / (&x * BigRational::from_integer(2.into()));
        Some(Scalar::gaussian(x, y))
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        Scalar { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -&self.re, im: -&self.im }
    }
}

fn fmt_rational(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return fmt_rational(&self.re, f);
        }
        write!(f, "(")?;
        fmt_rational(&self.re, f)?;
        write!(f, "{}", if self.im.is_negative() { "-" } else { "+" })?;
        fmt_rational(&self.im.abs(), f)?;
        write!(f, "i)")
    }
}

fn big_json(n: &BigInt) -> serde_json::Value {
    match n.to_i64() {
        Some(v) => serde_json::json!(v),
        None => serde_json::json!(n.to_string()),
    }
}

fn rational_json(q: &BigRational) -> serde_json::Value {
    serde_json::json!([big_json(q.numer()), big_json(q.denom())])
}

fn rational_from_json(v: &serde_json::Value) -> Result<BigRational, String> {
    let part = |x: &serde_json::Value| -> Result<BigInt, String> {
        match x {
            serde_json::Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| format!("not an integer: {n}")),
            serde_json::Value::String(s) => s.parse().map_err(|_| format!("not an integer: {s}")),
            other => Err(format!("expected integer, got {other}")),
        }
    };
    match v {
        serde_json::Value::Array(xs) if xs.len() == 2 => {
            let (n, d) = (part(&xs[0])?, part(&xs[1])?);
            if d.is_zero() {
                return Err("zero denominator".into());
            }
            Ok(BigRational::new(n, d))
        }
        other => part(other).map(BigRational::from_integer),
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.im.is_zero() {
            rational_json(&self.re).serialize(s)
        } else {
            serde_json::json!({"re": rational_json(&self.re), "im": rational_json(&self.im)}).serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match &v {
            serde_json::Value::Object(map) => {
                let get = |k: &str| map.get(k).map(rational_from_json).unwrap_or(Ok(BigRational::zero()));
                Ok(Scalar::gaussian(get("re").map_err(D::Error::custom)?, get("im").map_err(D::Error::custom)?))
            }
            other => rational_from_json(other).map(Scalar::real).map_err(D::Error::custom),
        }
    }
}

/// Element of `K[z]/(z^n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Jet {
    coeffs: Vec<Scalar>,
}

impl Jet {
    pub fn new(coeffs: Vec<Scalar>) -> Result<Self, JetError> {
        if coeffs.is_empty() {
            return Err(JetError::EmptyJet);
        }
        Ok(Jet { coeffs })
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        Jet { coeffs: xs.iter().map(|x| Scalar::int(*x)).collect() }
    }

    pub fn zero(len: usize) -> Self {
        Jet { coeffs: vec![Scalar::zero(); len.max(1)] }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Index of the first non-zero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    pub fn truncate(&self, len: usize) -> Jet {
        Jet { coeffs: self.coeffs[..len.min(self.len())].to_vec() }
    }

    pub fn scale(&self, s: &Scalar) -> Jet {
        Jet { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn square(&self) -> Jet {
        self * self
    }

    fn zip(&self, o: &Jet, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Jet {
        let n = self.len().min(o.len());
        Jet { coeffs: (0..n).map(|i| f(&self.coeffs[i], &o.coeffs[i])).collect() }
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        self.zip(o, |a, b| a + b)
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        self.zip(o, |a, b| a - b)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

/// Product modulo `z^n` with `n` the shorter length.
impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, o: &Jet) -> Jet {
        let n = self.len().min(o.len());
        let coeffs = (0..n)
            .map(|k| (0..=k).fold(Scalar::zero(), |acc, i| &acc + &(&self.coeffs[i] * &o.coeffs[k - i])))
            .collect();
        Jet { coeffs }
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")?;
        } else {
            write!(f, "{}", terms.join(" + "))?;
        }
        write!(f, " mod z^{}", self.len())
    }
}

/// Square roots of a jet. When `free_tail > 0` each representative stands for
/// an affine family whose top `free_tail` coefficients are arbitrary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SqrtSet {
    pub roots: Vec<Jet>,
    pub free_tail: usize,
}

impl SqrtSet {
    pub fn empty() -> Self {
        SqrtSet { roots: Vec::new(), free_tail: 0 }
    }

    /// Number of solutions, `None` for an infinite family.
    pub fn count(&self) -> Option<usize> {
        (self.free_tail == 0 || self.roots.is_empty()).then_some(self.roots.len())
    }
}

fn sqrt_unit(c: &Jet) -> Result<Jet, JetError> {
    let root0 = c.coeffs[0].sqrt().ok_or_else(|| JetError::NonSquareScalar(c.coeffs[0].to_string()))?;
    let inv_two_root = (&root0 * &Scalar::int(2)).inverse().expect("unit has non-zero root");
    let mut q = vec![root0];
    for k in 1..c.len() {
        let cross = (1..k).fold(Scalar::zero(), |acc, i| &acc + &(&q[i] * &q[k - i]));
        q.push(&(&c.coeffs[k] - &cross) * &inv_two_root);
    }
    Ok(Jet { coeffs: q })
}

/// All `q` with `q^2 = c mod z^n`.
pub fn jet_sqrt(c: &Jet) -> Result<SqrtSet, JetError> {
    let n = c.len();
    let Some(ord) = c.order() else {
        return Ok(SqrtSet { roots: vec![Jet::zero(n)], free_tail: n / 2 });
    };
    if ord % 2 == 1 {
        return Ok(SqrtSet::empty());
    }
    let m = ord / 2;
    let unit = Jet { coeffs: c.coeffs[ord..].to_vec() };
    let v = sqrt_unit(&unit)?;
    let lift = |w: &Jet| {
        let mut coeffs = vec![Scalar::zero(); n];
        for (i, x) in w.coeffs.iter().enumerate() {
            coeffs[m + i] = x.clone();
        }
        Jet { coeffs }
    };
    Ok(SqrtSet { roots: vec![lift(&v), lift(&-&v)], free_tail: m })
}

/// Per-point jets over an effective divisor; the jet at `p` has length `D(p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct JetOnDivisor {
    pub divisor: Divisor,
    pub per_point: BTreeMap<String, Jet>,
}

impl JetOnDivisor {
    pub fn is_zero(&self) -> bool {
        self.per_point.values().all(Jet::is_zero)
    }

    pub fn map(&self, f: impl Fn(&Jet) -> Jet) -> JetOnDivisor {
        JetOnDivisor {
            divisor: self.divisor.clone(),
            per_point: self.per_point.iter().map(|(p, j)| (p.clone(), f(j))).collect(),
        }
    }

    pub fn square(&self) -> JetOnDivisor {
        self.map(Jet::square)
    }
}

/// Coefficient lists per point, as read from input.
pub type Series = BTreeMap<String, Vec<Scalar>>;

/// Truncation of each expansion to `D(p)` coefficients.
pub fn restrict(series: &Series, d: &Divisor) -> Result<JetOnDivisor, JetError> {
    if !d.is_effective() {
        return Err(JetError::NotEffective);
    }
    let mut per_point = BTreeMap::new();
    for (p, m) in d.support() {
        let needed = m as usize;
        let given = series.get(p).map_or(0, Vec::len);
        if given < needed {
            return Err(JetError::InsufficientCoefficients { point: p.to_string(), needed, given });
        }
        per_point.insert(p.to_string(), Jet { coeffs: series[p][..needed].to_vec() });
    }
    Ok(JetOnDivisor { divisor: d.clone(), per_point })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct QSolutions {
    pub solutions: Vec<JetOnDivisor>,
    /// Sum of the per-point free tails; non-zero means each solution is a family representative.
    pub free_tail: usize,
    pub field_note: Option<String>,
}

impl QSolutions {
    pub fn count(&self) -> Option<usize> {
        (self.free_tail == 0 || self.solutions.is_empty()).then_some(self.solutions.len())
    }
}

/// Solutions of `q^2 + eta|_D = 0`, the product over points of the local solution sets.
pub fn solve_q(eta: &JetOnDivisor, mode: Mode) -> QSolutions {
    let points: Vec<(&String, &Jet)> = eta.per_point.iter().collect();
    let local = batch::map(mode, &points, |(_, j)| jet_sqrt(&-*j));
    let mut field_note = None;
    let mut free_tail = 0;
    let mut partial: Vec<BTreeMap<String, Jet>> = vec![BTreeMap::new()];
    for ((p, _), set) in points.iter().zip(local) {
        let set = match set {
            Ok(s) => s,
            Err(e) => {
                field_note = Some(format!("at `{p}`: {e}"));
                SqrtSet::empty()
            }
        };
        free_tail += set.free_tail;
        partial = partial
            .into_iter()
            .flat_map(|acc| {
                set.roots.iter().map(move |r| {
                    let mut next = acc.clone();
                    next.insert((*p).clone(), r.clone());
                    next
                })
            })
            .collect();
    }
    let solutions = partial
        .into_iter()
        .map(|per_point| JetOnDivisor { divisor: eta.divisor.clone(), per_point })
        .collect();
    QSolutions { solutions, free_tail, field_note }
}

/// Local expansions of the three entries of gamma at one point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalEntries {
    pub g11: Vec<Scalar>,
    pub g12: Vec<Scalar>,
    pub g22: Vec<Scalar>,
}

/// Localized pair: expansions at the points of `D = div(g11)`, where `g11` is
/// the entry of the type-C factor.
pub type LocalizedPair = BTreeMap<String, LocalEntries>;

fn entry_series(lp: &LocalizedPair, pick: impl Fn(&LocalEntries) -> &Vec<Scalar>) -> Series {
    lp.iter().map(|(p, e)| (p.clone(), pick(e).clone())).collect()
}

/// `theta = r(D)(g12)`, after checking that `g11` vanishes along `D`.
pub fn theta_gamma(lp: &LocalizedPair, d: &Divisor) -> Result<JetOnDivisor, JetError> {
    let g11 = restrict(&entry_series(lp, |e| &e.g11), d)?;
    if let Some((p, j)) = g11.per_point.iter().find(|(_, j)| !j.is_zero()) {
        return Err(JetError::DivisorMismatch { point: p.clone(), order: j.len() });
    }
    restrict(&entry_series(lp, |e| &e.g12), d)
}

/// `r(D)(g11*g22 - g12^2) = -theta^2`.
pub fn det_identity_check(lp: &LocalizedPair, d: &Divisor) -> Result<bool, JetError> {
    let theta = theta_gamma(lp, d)?;
    let g11 = restrict(&entry_series(lp, |e| &e.g11), d)?;
    let g12 = restrict(&entry_series(lp, |e| &e.g12), d)?;
    let g22 = restrict(&entry_series(lp, |e| &e.g22), d)?;
    let ok = d.support().all(|(p, _)| {
        let det = &(&g11.per_point[p] * &g22.per_point[p]) - &g12.per_point[p].square();
        det == -&theta.per_point[p].square()
    });
    Ok(ok)
}

/// Regularity along `D` of the diagonal block `(g12^2 + eta) / gamma'` of the
/// reconstructed form, `gamma'` having divisor exactly `D`.
pub fn diagonal_block_regular(g12: &Series, eta: &Series, d: &Divisor) -> Result<bool, JetError> {
    let g12 = restrict(g12, d)?;
    let eta = restrict(eta, d)?;
    Ok(d.support().all(|(p, _)| (&g12.per_point[p].square() + &eta.per_point[p]).is_zero()))
}

/// Dimensions of the cone `C` and of the variety `Q = C / C^*`.
pub fn dim_c(g: i64, d: i64, d_u: i64) -> Result<(i64, i64), DimError> {
    if d_u - d <= g - 1 {
        return Err(DimError::HypothesisFails { gap: d_u - d, threshold: g - 1 });
    }
    let dim_c = 2 * (d_u - d) + 1 - g;
    Ok((dim_c, dim_c - 1))
}
