//! Stability of explicit rank-2 quadratic pairs.
//!
//! A line subbundle `L` of `(V, gamma)` is of type A if `gamma(L) = 0`, type B
//! if `gamma(L)` lies in `L^perp U`, type C otherwise, with degree bounds
//! `alpha`, `d/2` and `d - alpha` respectively.

use crate::chambers::{critical_values, decomposition};
use crate::exact::{half, int, Rat, ShowRat};
use crate::jets::{self, JetError, LocalEntries, LocalizedPair};
use crate::picard::{class_of_divisor, CurveModel, Divisor, PicClass, PicardError, SectionModel};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PairError {
    #[error(transparent)]
    Picard(#[from] PicardError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("gamma must have a non-zero entry")]
    ZeroGamma,
    #[error("invalid candidate: {0}")]
    InvalidCandidate(String),
    #[error("{0} is not a critical value")]
    NotCritical(String),
    #[error("no type-C factor of degree d - alpha_k = {0}")]
    MissingWitness(i64),
    #[error("extension is trivial; model it as a decomposable pair")]
    DegenerateExtension,
    #[error("alpha must lie below d/2")]
    AlphaNotBelowMax,
    #[error("jet data disagrees with the divisor model at the theta test")]
    JetMismatch,
}

/// One of the two summands of `V = L1 + L2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Side {
    One,
    Two,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::One => Side::Two,
            Side::Two => Side::One,
        }
    }
}

impl TryFrom<u8> for Side {
    type Error = String;
    fn try_from(v: u8) -> Result<Self, String> {
        match v {
            1 => Ok(Side::One),
            2 => Ok(Side::Two),
            _ => Err(format!("side must be 1 or 2, got {v}")),
        }
    }
}

impl From<Side> for u8 {
    fn from(s: Side) -> u8 {
        match s {
            Side::One => 1,
            Side::Two => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CondClass {
    A,
    B,
    C,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Determinate(CondClass),
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// Which non-zero multiple of a section with the given divisor is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GraphScalar {
    /// A scalar for which `gamma` restricted to the graph vanishes.
    Isotropic(Sign),
    Generic,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Candidate {
    Factor1,
    Factor2,
    /// Graph of `f: L_over -> L_other`; `divisor = None` for a symbolic section.
    Graph {
        over: Side,
        divisor: Option<Divisor>,
        #[serde(default = "generic_scalar")]
        scalar: GraphScalar,
    },
    /// User-asserted subbundle with known degree and type.
    Explicit { label: String, degree: i64, class: CondClass },
}

fn generic_scalar() -> GraphScalar {
    GraphScalar::Generic
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Exactness {
    Exact,
    CandidateRelative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Stable,
    StrictlySemistable,
    Unstable,
    EmptyRegime,
}

impl Status {
    pub fn is_semistable(self) -> bool {
        matches!(self, Status::Stable | Status::StrictlySemistable)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub candidate: Candidate,
    pub class: CondClass,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StabilityVerdict {
    pub status: Status,
    pub semistable_types: BTreeSet<CondClass>,
    pub polystable: bool,
    pub witness: Option<Witness>,
    pub exactness: Exactness,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl StabilityVerdict {
    fn empty_regime(note: &str) -> Self {
        StabilityVerdict {
            status: Status::EmptyRegime,
            semistable_types: BTreeSet::new(),
            polystable: false,
            witness: None,
            exactness: Exactness::Exact,
            notes: vec![note.to_string()],
        }
    }

    pub fn is_semistable(&self) -> bool {
        self.status.is_semistable()
    }
}

fn bound(class: CondClass, alpha: Rat, d: i64) -> Rat {
    match class {
        CondClass::A => alpha,
        CondClass::B => half(d),
        CondClass::C => int(d) - alpha,
    }
}

/// `V = L1 + L2` with `gamma = [[g11, g12], [g12, g22]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposablePair {
    pub curve: CurveModel,
    #[serde(rename = "U")]
    pub u: PicClass,
    #[serde(rename = "L1")]
    pub l1: PicClass,
    #[serde(rename = "L2")]
    pub l2: PicClass,
    #[serde(default)]
    pub g11: SectionModel,
    #[serde(default)]
    pub g12: SectionModel,
    #[serde(default)]
    pub g22: SectionModel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jets: Option<LocalizedPair>,
}

impl DecomposablePair {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        curve: CurveModel,
        u: PicClass,
        l1: PicClass,
        l2: PicClass,
        g11: SectionModel,
        g12: SectionModel,
        g22: SectionModel,
    ) -> Result<Self, PairError> {
        let pair = DecomposablePair { curve, u, l1, l2, g11, g12, g22, jets: None };
        pair.validate()?;
        Ok(pair)
    }

    pub fn validate(&self) -> Result<(), PairError> {
        self.curve.validate()?;
        if self.g11.is_zero() && self.g12.is_zero() && self.g22.is_zero() {
            return Err(PairError::ZeroGamma);
        }
        for (i, j) in [(Side::One, Side::One), (Side::One, Side::Two), (Side::Two, Side::Two)] {
            self.entry(i, j).check(&self.curve, &self.target(i, j))?;
        }
        Ok(())
    }

    pub fn with_jets(mut self, jets: LocalizedPair) -> Self {
        self.jets = Some(jets);
        self
    }

    pub fn d(&self) -> i64 {
        self.l1.degree + self.l2.degree
    }

    pub fn d_u(&self) -> i64 {
        self.u.degree
    }

    pub fn summand(&self, s: Side) -> &PicClass {
        match s {
            Side::One => &self.l1,
            Side::Two => &self.l2,
        }
    }

    pub fn entry(&self, i: Side, j: Side) -> &SectionModel {
        match (i, j) {
            (Side::One, Side::One) => &self.g11,
            (Side::Two, Side::Two) => &self.g22,
            _ => &self.g12,
        }
    }

    /// Class of the line bundle `L_i^{-1} L_j^{-1} U` carrying entry `(i, j)`.
    pub fn target(&self, i: Side, j: Side) -> PicClass {
        &(&self.u - self.summand(i)) - self.summand(j)
    }

    pub fn summands_isomorphic(&self) -> bool {
        self.l1 == self.l2
    }

    /// Diagonal, anti-diagonal or rank-one block shape.
    pub fn is_canonical_form(&self) -> bool {
        self.g12.is_zero() || (self.g11.is_zero() && self.g22.is_zero())
    }

    pub fn generic_rank(&self) -> ModelRank {
        let nonzero = [&self.g11, &self.g12, &self.g22].iter().filter(|s| !s.is_zero()).count();
        match (self.g12.is_zero(), nonzero) {
            (true, 1) => ModelRank::One,
            (_, 3) => ModelRank::Unknown,
            _ => ModelRank::Two,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelRank {
    Two,
    One,
    Unknown,
}

fn divisor_of(s: &SectionModel) -> &Divisor {
    s.divisor().expect("non-zero section")
}

/// Type of a candidate subbundle together with its degree.
pub fn condition_class(pair: &DecomposablePair, cand: &Candidate) -> Result<(Classification, i64), PairError> {
    use Classification::*;
    let factor = |s: Side| {
        let (own, cross) = (pair.entry(s, s), &pair.g12);
        let class = match (own.is_zero(), cross.is_zero()) {
            (true, true) => CondClass::A,
            (true, false) => CondClass::B,
            _ => CondClass::C,
        };
        (Determinate(class), pair.summand(s).degree)
    };
    match cand {
        Candidate::Factor1 => Ok(factor(Side::One)),
        Candidate::Factor2 => Ok(factor(Side::Two)),
        Candidate::Explicit { degree, class, .. } => Ok((Determinate(*class), *degree)),
        Candidate::Graph { over, divisor, scalar } => {
            let degree = pair.summand(*over).degree;
            let Some(e) = divisor else { return Ok((Indeterminate, degree)) };
            let hom = pair.summand(over.other()) - pair.summand(*over);
            if !e.is_effective() || class_of_divisor(e, &pair.curve)? != hom {
                return Err(PairError::InvalidCandidate(format!("graph divisor {e} is not a section of L_j - L_i")));
            }
            let cancelling = isotropic_divisors(pair, *over)?;
            let class = match (scalar, cancelling) {
                (GraphScalar::Isotropic(_), Some(ds)) if ds.contains(e) => Determinate(CondClass::B),
                (GraphScalar::Isotropic(_), _) => {
                    return Err(PairError::InvalidCandidate(format!("graph with divisor {e} is not isotropic")))
                }
                (GraphScalar::Generic, Some(ds)) if ds.contains(e) => Indeterminate,
                (GraphScalar::Generic, None) if quadratic_terms(pair, *over) == 3 => Indeterminate,
                (GraphScalar::Generic, _) => Determinate(CondClass::C),
            };
            Ok((class, degree))
        }
    }
}

/// Number of non-zero terms of `q(f) = g_ii + 2 f g_ij + f^2 g_jj`.
fn quadratic_terms(pair: &DecomposablePair, over: Side) -> usize {
    let (i, j) = (over, over.other());
    [pair.entry(i, i), pair.entry(i, j), pair.entry(j, j)].iter().filter(|s| !s.is_zero()).count()
}

/// Divisors of the sections `f` for which `q(f) = 0` is attainable, when `q`
/// has exactly two terms. `None` when `q` has one or three terms.
fn isotropic_divisors(pair: &DecomposablePair, over: Side) -> Result<Option<Vec<Divisor>>, PairError> {
    let (i, j) = (over, over.other());
    let (a, b, c) = (pair.entry(i, i), pair.entry(i, j), pair.entry(j, j));
    if quadratic_terms(pair, over) != 2 {
        return Ok(None);
    }
    let hom = pair.summand(j) - pair.summand(i);
    let candidate = match (a.is_zero(), b.is_zero(), c.is_zero()) {
        (false, false, true) => Some(divisor_of(a) - divisor_of(b)),
        (true, false, false) => Some(divisor_of(b) - divisor_of(c)),
        (false, true, false) => (divisor_of(a) - divisor_of(c)).halve(),
        _ => None,
    };
    let mut out = Vec::new();
    if let Some(e) = candidate {
        if e.is_effective() && class_of_divisor(&e, &pair.curve)? == hom {
            out.push(e);
        }
    }
    Ok(Some(out))
}

/// Graph subbundles that can change a verdict: isotropic graphs, and symbolic
/// graphs when all three entries are non-zero.
pub fn auto_candidates(pair: &DecomposablePair) -> Result<Vec<Candidate>, PairError> {
    let mut out = Vec::new();
    for over in [Side::One, Side::Two] {
        let e = pair.summand(over.other()).degree - pair.summand(over).degree;
        // graphs of isomorphisms are already listed over L1
        if e < 0 || (over == Side::Two && e == 0) {
            continue;
        }
        if quadratic_terms(pair, over) == 3 {
            out.push(Candidate::Graph { over, divisor: None, scalar: GraphScalar::Generic });
            continue;
        }
        let both_signs = !pair.entry(over, over).is_zero() && pair.g12.is_zero();
        for div in isotropic_divisors(pair, over)?.unwrap_or_default() {
            let signs: &[Sign] = if both_signs { &[Sign::Plus, Sign::Minus] } else { &[Sign::Plus] };
            for s in signs {
                out.push(Candidate::Graph { over, divisor: Some(div.clone()), scalar: GraphScalar::Isotropic(*s) });
            }
        }
    }
    Ok(out)
}

struct Classified {
    cand: Candidate,
    class: CondClass,
    degree: i64,
}

fn classify_all(pair: &DecomposablePair, extra: &[Candidate]) -> Result<(Vec<Classified>, bool), PairError> {
    let mut cands = vec![Candidate::Factor1, Candidate::Factor2];
    cands.extend(extra.iter().cloned());
    cands.extend(auto_candidates(pair)?);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut indeterminate = false;
    for cand in cands {
        if !seen.insert(cand.clone()) {
            continue;
        }
        match condition_class(pair, &cand)? {
            (Classification::Determinate(class), degree) => out.push(Classified { cand, class, degree }),
            (Classification::Indeterminate, _) => indeterminate = true,
        }
    }
    Ok((out, indeterminate))
}

/// `(type, degree)` of every candidate whose type is decidable.
pub fn classified_candidates(pair: &DecomposablePair) -> Result<Vec<(CondClass, i64)>, PairError> {
    Ok(classify_all(pair, &[])?.0.into_iter().map(|c| (c.class, c.degree)).collect())
}

fn polystable_for(pair: &DecomposablePair, class: CondClass, witnesses: &[&Classified]) -> bool {
    let is_factor = |c: &Candidate| matches!(c, Candidate::Factor1 | Candidate::Factor2);
    match class {
        CondClass::A => witnesses.iter().any(|w| is_factor(&w.cand)),
        CondClass::B => witnesses.iter().filter(|w| !matches!(w.cand, Candidate::Explicit { .. })).count() >= 2,
        CondClass::C => pair.g12.is_zero() && witnesses.iter().any(|w| is_factor(&w.cand)),
    }
}

/// Verdict at `alpha` over the factors, `extra` and the automatic graph candidates.
pub fn alpha_verdict(pair: &DecomposablePair, alpha: Rat, extra: &[Candidate]) -> Result<StabilityVerdict, PairError> {
    let d = pair.d();
    if d > pair.d_u() {
        return Ok(StabilityVerdict::empty_regime("d > d_U: no semistable pairs for any alpha"));
    }
    if alpha > half(d) {
        return Ok(StabilityVerdict::empty_regime("alpha > d/2: no semistable pairs"));
    }
    let (classified, indeterminate) = classify_all(pair, extra)?;
    let exact = !indeterminate && !pair.summands_isomorphic() && pair.is_canonical_form();
    let exactness = if exact { Exactness::Exact } else { Exactness::CandidateRelative };
    let mut notes = Vec::new();
    if indeterminate {
        notes.push("some graph subbundles have undecidable type in the divisor model".to_string());
    }
    if let Some(bad) = classified.iter().find(|c| int(c.degree) > bound(c.class, alpha, d)) {
        return Ok(StabilityVerdict {
            status: Status::Unstable,
            semistable_types: BTreeSet::new(),
            polystable: false,
            witness: Some(Witness { candidate: bad.cand.clone(), class: bad.class, degree: bad.degree }),
            exactness,
            notes,
        });
    }
    let tight: Vec<&Classified> = classified.iter().filter(|c| int(c.degree) == bound(c.class, alpha, d)).collect();
    if tight.is_empty() {
        return Ok(StabilityVerdict {
            status: Status::Stable,
            semistable_types: BTreeSet::new(),
            polystable: true,
            witness: None,
            exactness,
            notes,
        });
    }
    let types: BTreeSet<CondClass> = tight.iter().map(|c| c.class).collect();
    let polystable = types.iter().all(|t| {
        let ws: Vec<&Classified> = tight.iter().copied().filter(|c| c.class == *t).collect();
        polystable_for(pair, *t, &ws)
    });
    if !polystable {
        notes.push("non-split strictly semistable; its polystable S-equivalent is not computed".to_string());
    }
    let first = tight[0];
    Ok(StabilityVerdict {
        status: Status::StrictlySemistable,
        semistable_types: types,
        polystable,
        witness: Some(Witness { candidate: first.cand.clone(), class: first.class, degree: first.degree }),
        exactness,
        notes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum AuditViolation {
    SeveralTypeA { count: usize },
    SeveralTypeC { count: usize },
    TooManyTypeB { count: usize },
    TypeAWithTypeB,
    TypeCWithTypeB,
    TypeAAndCDoNotSplit,
    TypeBPairDoesNotSplit,
}

/// Checks the uniqueness pattern of destabilizing subbundles at `alpha < d/2`.
pub fn destab_audit(pair: &DecomposablePair, alpha: Rat) -> Result<Vec<AuditViolation>, PairError> {
    let d = pair.d();
    if alpha >= half(d) {
        return Err(PairError::AlphaNotBelowMax);
    }
    let (classified, _) = classify_all(pair, &[])?;
    let destab = |class: CondClass| -> Vec<&Classified> {
        classified.iter().filter(|c| c.class == class && int(c.degree) >= bound(class, alpha, d)).collect()
    };
    let (a, b, c) = (destab(CondClass::A), destab(CondClass::B), destab(CondClass::C));
    let mut out = Vec::new();
    if a.len() > 1 {
        out.push(AuditViolation::SeveralTypeA { count: a.len() });
    }
    if c.len() > 1 {
        out.push(AuditViolation::SeveralTypeC { count: c.len() });
    }
    if b.len() > 2 {
        out.push(AuditViolation::TooManyTypeB { count: b.len() });
    }
    if !a.is_empty() && !b.is_empty() {
        out.push(AuditViolation::TypeAWithTypeB);
    }
    if !c.is_empty() && !b.is_empty() {
        out.push(AuditViolation::TypeCWithTypeB);
    }
    if let (Some(x), Some(y)) = (a.first(), c.first()) {
        if x.cand == y.cand || x.degree + y.degree != d {
            out.push(AuditViolation::TypeAAndCDoNotSplit);
        }
    }
    if b.len() == 2 && b[0].degree + b[1].degree != d {
        out.push(AuditViolation::TypeBPairDoesNotSplit);
    }
    Ok(out)
}

/// `(pair is d/2-semistable, V is semistable)`; the two always agree.
pub fn bundle_semistability_bridge(pair: &DecomposablePair) -> Result<(bool, bool), PairError> {
    let pair_ss = alpha_verdict(pair, half(pair.d()), &[])?.is_semistable();
    let bundle_ss = pair.l1.degree == pair.l2.degree;
    Ok((pair_ss, bundle_ss))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SMinusKind {
    S0,
    S1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "side")]
pub enum WallSide {
    SPlus,
    SMinus { sub: SMinusKind },
    NotInFlip,
    NotSemistableAtWall,
    /// The wall `alpha = d/2`, where the flip loci are not compared.
    MaxWall,
}

/// Decomposable or extension model, for mixed families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "camelCase")]
pub enum PairModel {
    Decomposable(DecomposablePair),
    Extension(ExtensionPair),
}

impl PairModel {
    pub fn d(&self) -> i64 {
        match self {
            PairModel::Decomposable(p) => p.d(),
            PairModel::Extension(e) => e.d(),
        }
    }

    pub fn d_u(&self) -> i64 {
        match self {
            PairModel::Decomposable(p) => p.d_u(),
            PairModel::Extension(e) => e.u.degree,
        }
    }

    pub fn verdict(&self, alpha: Rat) -> Result<StabilityVerdict, PairError> {
        match self {
            PairModel::Decomposable(p) => alpha_verdict(p, alpha, &[]),
            PairModel::Extension(e) => extension_pair_verdict(e, alpha),
        }
    }
}

/// Position of a model relative to the flip loci at the wall `alpha_k`.
pub fn wall_side(model: &PairModel, alpha_k: Rat) -> Result<WallSide, PairError> {
    let (d, d_u) = (model.d(), model.d_u());
    let not_critical = || PairError::NotCritical(ShowRat(alpha_k).to_string());
    let dec = decomposition(d, d_u).map_err(|_| not_critical())?;
    let (below, above) = dec.neighbours(alpha_k).ok_or_else(not_critical)?;
    let Some(above) = above else { return Ok(WallSide::MaxWall) };
    let ss_minus = model.verdict(below)?.is_semistable();
    let ss_plus = model.verdict(above)?.is_semistable();
    let at = model.verdict(alpha_k)?;
    Ok(match (ss_minus, ss_plus) {
        (false, true) => WallSide::SPlus,
        (true, false) => {
            let PairModel::Decomposable(p) = model else { unreachable!("extensions are unstable below the wall") };
            let sub = if theta_vanishes(p, alpha_k)? { SMinusKind::S0 } else { SMinusKind::S1 };
            WallSide::SMinus { sub }
        }
        (true, true) => WallSide::NotInFlip,
        (false, false) if at.is_semistable() => WallSide::NotInFlip,
        (false, false) => WallSide::NotSemistableAtWall,
    })
}

/// Convenience wrapper of [`wall_side`] for decomposable pairs.
pub fn wall_side_decomposable(pair: &DecomposablePair, alpha_k: Rat) -> Result<WallSide, PairError> {
    wall_side(&PairModel::Decomposable(pair.clone()), alpha_k)
}

/// Whether `gamma` restricted to the type-C witness vanishes along `D = div(gamma')`.
pub fn theta_vanishes(pair: &DecomposablePair, alpha_k: Rat) -> Result<bool, PairError> {
    if !alpha_k.is_integer() || !critical_values(pair.d(), pair.d_u()).is_ok_and(|c| c.contains(&alpha_k)) {
        return Err(PairError::NotCritical(ShowRat(alpha_k).to_string()));
    }
    let m_degree = pair.d() - alpha_k.to_integer();
    let side = [Side::One, Side::Two]
        .into_iter()
        .find(|s| pair.summand(*s).degree == m_degree && !pair.entry(*s, *s).is_zero())
        .ok_or(PairError::MissingWitness(m_degree))?;
    let d = divisor_of(pair.entry(side, side)).clone();
    let vanishes = match pair.g12.divisor() {
        None => true,
        Some(cross) => cross.dominates(&d),
    };
    if let Some(local) = &pair.jets {
        let covered = d.support().all(|(p, _)| local.contains_key(p));
        if covered {
            let oriented: LocalizedPair = local
                .iter()
                .map(|(p, e)| {
                    let e = match side {
                        Side::One => e.clone(),
                        Side::Two => LocalEntries { g11: e.g22.clone(), g12: e.g12.clone(), g22: e.g11.clone() },
                    };
                    (p.clone(), e)
                })
                .collect();
            if jets::theta_gamma(&oriented, &d)?.is_zero() != vanishes {
                return Err(PairError::JetMismatch);
            }
        }
    }
    Ok(vanishes)
}

/// Non-split extension `0 -> L -> V -> M -> 0` with `gamma` pulled back from `(M, gamma')`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtensionPair {
    pub curve: CurveModel,
    #[serde(rename = "U")]
    pub u: PicClass,
    pub sub: PicClass,
    pub quot: PicClass,
    pub gamma_quot: SectionModel,
    pub ext_nontrivial: bool,
}

impl ExtensionPair {
    pub fn new(
        curve: CurveModel,
        u: PicClass,
        sub: PicClass,
        quot: PicClass,
        gamma_quot: SectionModel,
        ext_nontrivial: bool,
    ) -> Result<Self, PairError> {
        let ep = ExtensionPair { curve, u, sub, quot, gamma_quot, ext_nontrivial };
        ep.validate()?;
        Ok(ep)
    }

    pub fn validate(&self) -> Result<(), PairError> {
        self.curve.validate()?;
        if self.gamma_quot.is_zero() {
            return Err(PairError::ZeroGamma);
        }
        let target = &self.u - &self.quot.times(2);
        self.gamma_quot.check(&self.curve, &target)?;
        Ok(())
    }

    pub fn d(&self) -> i64 {
        self.sub.degree + self.quot.degree
    }

    /// Dimension of the projective space of extensions, `h^1(M^{-1} L) - 1`.
    pub fn splus_fibre_dim(&self) -> i64 {
        self.d() - 2 * self.sub.degree + self.curve.genus as i64 - 2
    }
}

pub fn extension_pair_verdict(ep: &ExtensionPair, alpha: Rat) -> Result<StabilityVerdict, PairError> {
    if !ep.ext_nontrivial {
        return Err(PairError::DegenerateExtension);
    }
    let d = ep.d();
    if d > ep.u.degree {
        return Ok(StabilityVerdict::empty_regime("d > d_U: no semistable pairs for any alpha"));
    }
    if alpha > half(d) {
        return Ok(StabilityVerdict::empty_regime("alpha > d/2: no semistable pairs"));
    }
    let a = ep.sub.degree;
    let witness = Witness {
        candidate: Candidate::Explicit { label: "sub".into(), degree: a, class: CondClass::A },
        class: CondClass::A,
        degree: a,
    };
    let fibre = format!("extension fibre dimension {}", ep.splus_fibre_dim());
    // other subbundles map non-trivially to M and have degree at most d - a - 1
    let exactness = if alpha < int(a + 1) { Exactness::Exact } else { Exactness::CandidateRelative };
    let verdict = if int(a) > alpha {
        StabilityVerdict {
            status: Status::Unstable,
            semistable_types: BTreeSet::new(),
            polystable: false,
            witness: Some(witness),
            exactness,
            notes: vec![fibre],
        }
    } else if int(a) == alpha {
        StabilityVerdict {
            status: Status::StrictlySemistable,
            semistable_types: [CondClass::A].into(),
            polystable: false,
            witness: Some(witness),
            exactness,
            notes: vec![fibre, "non-split strictly semistable; its polystable S-equivalent is not computed".into()],
        }
    } else {
        StabilityVerdict {
            status: Status::Stable,
            semistable_types: BTreeSet::new(),
            polystable: true,
            witness: None,
            exactness,
            notes: vec![fibre],
        }
    };
    Ok(verdict)
}

/// Both sides of the wall-crossing identity `N+ \ S+ = N- \ S-` over a family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FlipSets {
    pub plus_side: BTreeSet<usize>,
    pub minus_side: BTreeSet<usize>,
    pub tags: BTreeMap<usize, WallSide>,
}

impl FlipSets {
    pub fn holds(&self) -> bool {
        self.plus_side == self.minus_side
    }
}

pub fn flip_sets(family: &[PairModel], alpha_k: Rat) -> Result<FlipSets, PairError> {
    let mut out = FlipSets { plus_side: BTreeSet::new(), minus_side: BTreeSet::new(), tags: BTreeMap::new() };
    for (i, m) in family.iter().enumerate() {
        let dec = decomposition(m.d(), m.d_u()).map_err(|_| PairError::NotCritical(ShowRat(alpha_k).to_string()))?;
        let (below, above) = dec.neighbours(alpha_k).ok_or(PairError::NotCritical(ShowRat(alpha_k).to_string()))?;
        let above = above.ok_or(PairError::AlphaNotBelowMax)?;
        let tag = wall_side(m, alpha_k)?;
        if m.verdict(above)?.is_semistable() && tag != WallSide::SPlus {
            out.plus_side.insert(i);
        }
        if m.verdict(below)?.is_semistable() && !matches!(tag, WallSide::SMinus { .. }) {
            out.minus_side.insert(i);
        }
        out.tags.insert(i, tag);
    }
    Ok(out)
}
