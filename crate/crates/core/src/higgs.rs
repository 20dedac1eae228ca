//! Enhanced symplectic Higgs bundles: topological invariants, Milnor-Wood
//! bounds, duality, the `SO0(2,3)` dictionary and component counts.

use crate::exact::int;
use crate::pairs::{alpha_verdict, DecomposablePair, Exactness, PairError, StabilityVerdict, Status};
use crate::picard::{CurveModel, PicClass, PicardError, SectionModel};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum HiggsError {
    #[error("rank n = {0} must be even")]
    OddN(i64),
    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(i64),
    #[error("bundle-level operations need n = 2, got {0}")]
    UnsupportedRank(i64),
    #[error("degree-only bundle data cannot be tested for stability")]
    UnsupportedModel,
    #[error(transparent)]
    Picard(#[from] PicardError),
    #[error(transparent)]
    Pair(#[from] PairError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pi1Group {
    #[serde(rename = "Z")]
    Z,
    #[serde(rename = "ZxZ")]
    ZxZ,
    #[serde(rename = "ZxZ/2")]
    ZxZ2,
}

impl fmt::Display for Pi1Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pi1Group::Z => "Z",
            Pi1Group::ZxZ => "Z x Z",
            Pi1Group::ZxZ2 => "Z x Z/2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Pi1Tables {
    pub n: i64,
    pub enhanced_unitary: Pi1Group,
    pub unitary_mod_center: Pi1Group,
}

/// Fundamental groups of `EU(n)` and `U(n)/(Z/2)`.
pub fn pi1_tables(n: i64) -> Pi1Tables {
    let unitary_mod_center = if n % 2 == 0 { Pi1Group::ZxZ2 } else { Pi1Group::Z };
    Pi1Tables { n, enhanced_unitary: Pi1Group::ZxZ, unitary_mod_center }
}

fn require_even(n: i64) -> Result<(), HiggsError> {
    if n % 2 == 0 {
        Ok(())
    } else {
        Err(HiggsError::OddN(n))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HiggsInvariants {
    pub n: i64,
    pub d1: i64,
    pub d2: i64,
    pub a: i64,
    pub b: u8,
}

/// `(a, b) = (d1 - n d2 / 2, d2 mod 2)`.
pub fn project_invariants(d1: i64, d2: i64, n: i64) -> Result<HiggsInvariants, HiggsError> {
    require_even(n)?;
    Ok(HiggsInvariants { n, d1, d2, a: d1 - n * d2 / 2, b: d2.rem_euclid(2) as u8 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MilnorWood {
    pub valid: bool,
    /// Bounds on `d1`: `n(1-g) + n d2/2 <= d1 <= n(g-1) + n d2/2`.
    pub d1_lower: i64,
    pub d1_upper: i64,
    /// Bound on `|a|`.
    pub toledo_bound: i64,
    pub a: i64,
}

pub fn milnor_wood(d1: i64, d2: i64, n: i64, g: i64) -> Result<MilnorWood, HiggsError> {
    if g < 2 {
        return Err(HiggsError::GenusTooSmall(g));
    }
    let inv = project_invariants(d1, d2, n)?;
    let shift = n * d2 / 2;
    let (lo, hi) = (n * (1 - g) + shift, n * (g - 1) + shift);
    let by_degree = lo <= d1 && d1 <= hi;
    let by_toledo = inv.a.abs() <= n * (g - 1);
    assert_eq!(by_degree, by_toledo, "the two Milnor-Wood forms disagree at ({d1}, {d2}, n={n}, g={g})");
    Ok(MilnorWood { valid: by_degree, d1_lower: lo, d1_upper: hi, toledo_bound: n * (g - 1), a: inv.a })
}

/// `(V, L) -> (V^* L, L)` on degrees.
pub fn dualize(d1: i64, d2: i64, n: i64) -> (i64, i64) {
    (n * d2 - d1, d2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalized {
    pub d1: i64,
    pub d2: i64,
    /// Degree of the twisting line bundle.
    pub m: i64,
}

/// Twist by a degree-`m` bundle so that `deg L` becomes 0 or 1.
pub fn normalize(d1: i64, d2: i64, n: i64) -> Result<Normalized, HiggsError> {
    require_even(n)?;
    let m = -d2.div_euclid(2);
    Ok(Normalized { d1: d1 + n * m, d2: d2 + 2 * m, m })
}

pub fn lift_to_sp(d2: i64) -> bool {
    d2 % 2 == 0
}

/// `d_U = deg L0 + 2g - 2` for the pairs at the minima of the Hitchin functional.
pub fn minima_translate(g: i64, deg_l0: i64) -> i64 {
    deg_l0 + 2 * g - 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct So23Invariants {
    pub a: i64,
    pub w: u8,
}

pub fn so23_from_ab(a: i64, b: u8) -> So23Invariants {
    So23Invariants { a, w: ((a + b as i64).rem_euclid(2)) as u8 }
}

pub fn so23_to_ab(inv: So23Invariants) -> (i64, u8) {
    (inv.a, ((inv.a + inv.w as i64).rem_euclid(2)) as u8)
}

/// Lifting to `Sp(4, R)` stated on the `SO0(2,3)` side: `a = w mod 2`.
pub fn so23_lifts(inv: So23Invariants) -> bool {
    inv.a.rem_euclid(2) == inv.w as i64
}

/// The orthogonal rank-3 bundle `W = S^2 V (x) det V^{-1}` and the line bundle
/// `F = det V (x) L^{-1}` of the associated `SO0(2,3)` Higgs bundle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct So23Bundle {
    pub w_summands: [PicClass; 3],
    pub w_degree: i64,
    #[serde(rename = "F")]
    pub f: PicClass,
    /// `deg F`, the Toledo invariant.
    pub toledo: i64,
}

pub fn so23_bundle(l1: &PicClass, l2: &PicClass, l: &PicClass) -> So23Bundle {
    let diff = l1 - l2;
    let w_summands = [diff.clone(), PicClass::trivial(l1.genus()), -&diff];
    let f = &(l1 + l2) - l;
    So23Bundle { w_degree: w_summands.iter().map(|c| c.degree).sum(), toledo: f.degree, w_summands, f }
}

/// Entries of a symmetric 2x2 matrix of sections.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymEntries {
    #[serde(default)]
    pub g11: SectionModel,
    #[serde(default)]
    pub g12: SectionModel,
    #[serde(default)]
    pub g22: SectionModel,
}

impl SymEntries {
    pub fn is_zero(&self) -> bool {
        self.g11.is_zero() && self.g12.is_zero() && self.g22.is_zero()
    }

    fn get(&self, i: usize, j: usize) -> &SectionModel {
        match (i.min(j), i.max(j)) {
            (0, 0) => &self.g11,
            (1, 1) => &self.g22,
            _ => &self.g12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BundleModel {
    Split {
        #[serde(rename = "L1")]
        l1: PicClass,
        #[serde(rename = "L2")]
        l2: PicClass,
    },
    DegreeOnly {
        #[serde(rename = "degreeOnly")]
        degree: i64,
    },
}

impl BundleModel {
    pub fn degree(&self) -> i64 {
        match self {
            BundleModel::Split { l1, l2 } => l1.degree + l2.degree,
            BundleModel::DegreeOnly { degree } => *degree,
        }
    }
}

/// `(V, L, beta, gamma)` with `beta in S^2 V L^{-1} K`, `gamma in S^2 V^* L K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EspQuadruple {
    #[serde(default = "two")]
    pub n: i64,
    pub curve: CurveModel,
    #[serde(rename = "V")]
    pub bundle: BundleModel,
    #[serde(rename = "L")]
    pub l: PicClass,
    #[serde(default)]
    pub beta: SymEntries,
    #[serde(default)]
    pub gamma: SymEntries,
}

fn two() -> i64 {
    2
}

impl EspQuadruple {
    /// `U = L K`, the twist of the quadratic pair at `beta = 0`.
    pub fn u(&self) -> PicClass {
        &self.l + &self.curve.canonical()
    }

    pub fn invariants(&self) -> Result<HiggsInvariants, HiggsError> {
        project_invariants(self.bundle.degree(), self.l.degree, self.n)
    }

    /// Checks that every non-zero `beta_ij` is a section of `L_i L_j L^{-1} K`.
    pub fn validate_beta(&self) -> Result<(), HiggsError> {
        let BundleModel::Split { l1, l2 } = &self.bundle else { return Ok(()) };
        let twist = &self.curve.canonical() - &self.l;
        let ls = [l1, l2];
        for (i, j) in [(0, 0), (0, 1), (1, 1)] {
            self.beta.get(i, j).check(&self.curve, &(&(ls[i] + ls[j]) + &twist))?;
        }
        Ok(())
    }

    /// The quadratic pair `(V, gamma)` twisted by `U = L K`.
    pub fn quadratic_pair(&self) -> Result<DecomposablePair, HiggsError> {
        let BundleModel::Split { l1, l2 } = &self.bundle else { return Err(HiggsError::UnsupportedModel) };
        let g = &self.gamma;
        Ok(DecomposablePair::new(
            self.curve.clone(),
            self.u(),
            l1.clone(),
            l2.clone(),
            g.g11.clone(),
            g.g12.clone(),
            g.g22.clone(),
        )?)
    }
}

/// Line subbundle data for the filtration test: degree, `gamma(M, M) = 0`,
/// `gamma(M, V) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LineData {
    pub degree: i64,
    pub isotropic: bool,
    pub annihilated: bool,
}

/// Indices of the summands contained in a coordinate subbundle.
type Mask = u8;
const FULL: Mask = 0b11;

fn contains(mask: Mask, i: usize) -> bool {
    mask >> i & 1 == 1
}

/// `beta` in `S^2 V2 + V1 V` and `gamma` in `S^2 V1^perp + V2^perp V^*`.
fn filtration_allowed(q: &SymEntries, beta: &SymEntries, v1: Mask, v2: Mask) -> bool {
    let pairs = [(0, 0), (0, 1), (1, 1)];
    let beta_ok = pairs.iter().all(|&(i, j)| {
        beta.get(i, j).is_zero()
            || (contains(v2, i) && contains(v2, j))
            || contains(v1, i)
            || contains(v1, j)
    });
    let gamma_ok = pairs.iter().all(|&(i, j)| {
        q.get(i, j).is_zero()
            || (!contains(v1, i) && !contains(v1, j))
            || !contains(v2, i)
            || !contains(v2, j)
    });
    beta_ok && gamma_ok
}

/// Semistability through the filtration inequality `deg V1 + deg V2 <= deg V`
/// over coordinate filtrations and the given extra line subbundles (which
/// are only admissible when `beta = 0`).
pub fn esp_filtration_verdict(
    q: &EspQuadruple,
    extra_lines: &[LineData],
) -> Result<StabilityVerdict, HiggsError> {
    let BundleModel::Split { l1, l2 } = &q.bundle else { return Err(HiggsError::UnsupportedModel) };
    let degs = [l1.degree, l2.degree];
    let deg_of = |m: Mask| (0..2).filter(|i| contains(m, *i)).map(|i| degs[i]).sum::<i64>();
    let d = l1.degree + l2.degree;
    let mut tight = false;
    let mut check = |lhs: i64| -> bool {
        tight |= lhs == d;
        lhs <= d
    };
    let mut ok = true;
    for v2 in 0..=FULL {
        for v1 in (0..=v2).filter(|v1| v1 & v2 == *v1) {
            if (v1, v2) == (0, FULL) || !filtration_allowed(&q.gamma, &q.beta, v1, v2) {
                continue;
            }
            ok &= check(deg_of(v1) + deg_of(v2));
        }
    }
    if q.beta.is_zero() {
        for line in extra_lines {
            ok &= check(line.degree);
            if line.isotropic {
                ok &= check(2 * line.degree);
            }
            if line.annihilated {
                ok &= check(line.degree + d);
            }
        }
    }
    let status = match (ok, tight) {
        (false, _) => Status::Unstable,
        (true, true) => Status::StrictlySemistable,
        (true, false) => Status::Stable,
    };
    Ok(StabilityVerdict {
        status,
        semistable_types: BTreeSet::new(),
        polystable: status == Status::Stable,
        witness: None,
        exactness: Exactness::CandidateRelative,
        notes: vec!["filtrations built from the summands only".into()],
    })
}

/// At `beta = 0` the quadruple is the quadratic pair `(V, gamma)` with
/// `U = L K`, tested at `alpha = 0`.
pub fn esp_semistable(q: &EspQuadruple) -> Result<StabilityVerdict, HiggsError> {
    if q.n != 2 {
        return Err(HiggsError::UnsupportedRank(q.n));
    }
    if let BundleModel::DegreeOnly { degree } = q.bundle {
        if q.beta.is_zero() && degree > q.u().degree {
            return Ok(StabilityVerdict {
                status: Status::EmptyRegime,
                semistable_types: BTreeSet::new(),
                polystable: false,
                witness: None,
                exactness: Exactness::Exact,
                notes: vec!["d > d_U: no semistable pairs for any alpha".into()],
            });
        }
        return Err(HiggsError::UnsupportedModel);
    }
    q.validate_beta()?;
    if q.beta.is_zero() {
        return Ok(alpha_verdict(&q.quadratic_pair()?, int(0), &[])?);
    }
    esp_filtration_verdict(q, &[])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "count")]
pub enum ComponentVerdict {
    Connected(u32),
    Empty,
    /// `|a| = 0` or `|a| = 2g - 2`: not determined here.
    OutOfScope,
}

pub fn component_count(g: i64, a: i64, _w: u8) -> Result<ComponentVerdict, HiggsError> {
    if g < 2 {
        return Err(HiggsError::GenusTooSmall(g));
    }
    let top = 2 * g - 2;
    Ok(match a.abs() {
        x if x > top => ComponentVerdict::Empty,
        x if x == 0 || x == top => ComponentVerdict::OutOfScope,
        _ => ComponentVerdict::Connected(1),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentRow {
    pub a: i64,
    pub w: u8,
    pub verdict: ComponentVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ComponentTable {
    pub g: i64,
    pub rows: Vec<ComponentRow>,
    /// Components counted where the count is determined.
    pub in_range_total: u32,
}

/// Verdicts for `|a| <= 2g - 1`, one row beyond the Milnor-Wood range on each side.
pub fn component_table(g: i64) -> Result<ComponentTable, HiggsError> {
    let reach = 2 * g - 1;
    let mut rows = Vec::new();
    for a in -reach..=reach {
        for w in 0..2u8 {
            rows.push(ComponentRow { a, w, verdict: component_count(g, a, w)? });
        }
    }
    let in_range_total = rows
        .iter()
        .map(|r| match r.verdict {
            ComponentVerdict::Connected(k) => k,
            _ => 0,
        })
        .sum();
    Ok(ComponentTable { g, rows, in_range_total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::Builder;
    use crate::picard::Divisor;

    #[test]
    fn pi1_examples() {
        assert_eq!(pi1_tables(2).unitary_mod_center, Pi1Group::ZxZ2);
        assert_eq!(pi1_tables(3).unitary_mod_center, Pi1Group::Z);
        assert_eq!(pi1_tables(4).enhanced_unitary, Pi1Group::ZxZ);
        assert_eq!(Pi1Group::ZxZ2.to_string(), "Z x Z/2");
    }

    #[test]
    fn invariants_examples() {
        let ab = |d1, d2| {
            let i = project_invariants(d1, d2, 2).unwrap();
            (i.a, i.b)
        };
        assert_eq!((ab(3, 1), ab(0, 0), ab(4, 2)), ((2, 1), (0, 0), (2, 0)));
        assert_eq!(project_invariants(1, 1, 3), Err(HiggsError::OddN(3)));
    }

    #[test]
    fn milnor_wood_examples() {
        let mw = milnor_wood(3, 1, 2, 2).unwrap();
        assert!(mw.valid);
        assert_eq!(mw.a, 2);
        assert!(!milnor_wood(4, 1, 2, 2).unwrap().valid);
        let low = milnor_wood(-1, 1, 2, 2).unwrap();
        assert!(low.valid && low.a == -2);
        assert!(milnor_wood(0, 0, 4, 3).unwrap().valid);
        assert_eq!(milnor_wood(0, 0, 2, 1), Err(HiggsError::GenusTooSmall(1)));
    }

    #[test]
    fn duality_and_normalization() {
        assert_eq!(dualize(3, 1, 2), (-1, 1));
        assert_eq!(dualize(0, 0, 2), (0, 0));
        assert_eq!(project_invariants(-1, 1, 2).unwrap().a, -2);
        assert_eq!(normalize(3, 1, 2).unwrap(), Normalized { d1: 3, d2: 1, m: 0 });
        assert_eq!(normalize(5, 3, 2).unwrap(), Normalized { d1: 3, d2: 1, m: -1 });
        assert_eq!(normalize(4, -2, 2).unwrap(), Normalized { d1: 6, d2: 0, m: 1 });
        assert!(lift_to_sp(0) && !lift_to_sp(1) && lift_to_sp(-2));
        assert_eq!(minima_translate(2, 1), 3);
    }

    #[test]
    fn so23_dictionary_examples() {
        assert_eq!(so23_from_ab(2, 1), So23Invariants { a: 2, w: 1 });
        assert_eq!(so23_from_ab(0, 0), So23Invariants { a: 0, w: 0 });
        for a in 0..2 {
            for b in 0..2u8 {
                let inv = so23_from_ab(a, b);
                assert_eq!(so23_to_ab(inv), (a, b));
                assert_eq!(so23_lifts(inv), b == 0);
            }
        }
    }

    #[test]
    fn so23_bundle_examples() {
        let l1 = PicClass::of_degree(1, 2);
        let l2 = PicClass::of_degree(3, 2);
        let l = PicClass::of_degree(1, 2);
        let b = so23_bundle(&l1, &l2, &l);
        assert_eq!((b.toledo, b.w_degree), (3, 0));
        assert_eq!(b.toledo, project_invariants(4, 1, 2).unwrap().a);
        assert_eq!(so23_bundle(&l1, &PicClass::of_degree(0, 2), &l).toledo, 0);
        // V^* L = (L - L1) + (L - L2)
        let dual = so23_bundle(&(&l - &l1), &(&l - &l2), &l);
        assert_eq!(dual.toledo, -b.toledo);
    }

    fn quadruple(b: &mut Builder, l1: i64, l2: i64, gamma: SymEntries) -> EspQuadruple {
        let l = PicClass::of_degree(1, 2);
        EspQuadruple {
            n: 2,
            curve: b.curve().clone(),
            bundle: BundleModel::Split { l1: PicClass::of_degree(l1, 2), l2: PicClass::of_degree(l2, 2) },
            l,
            beta: SymEntries::default(),
            gamma,
        }
    }

    #[test]
    fn esp_examples() {
        let mut b = Builder::new(2, 3);
        let cross = b.divisor_in_class(&PicClass::of_degree(1, 2)).unwrap();
        let q = quadruple(&mut b, 1, 1, SymEntries { g12: SectionModel::vanishing(cross), ..Default::default() });
        let v = esp_semistable(&q).unwrap();
        assert_eq!(v.status, Status::StrictlySemistable);
        assert_eq!(v.semistable_types, [crate::pairs::CondClass::B].into());
        let first = b.divisor_in_class(&PicClass::of_degree(3, 2)).unwrap();
        let q = quadruple(&mut b, 0, 2, SymEntries { g11: SectionModel::vanishing(first), ..Default::default() });
        assert_eq!(esp_semistable(&q).unwrap().status, Status::Unstable);
        assert_eq!(esp_filtration_verdict(&q, &[]).unwrap().status, Status::Unstable);
        let big = EspQuadruple { bundle: BundleModel::DegreeOnly { degree: 4 }, ..q.clone() };
        assert_eq!(esp_semistable(&big).unwrap().status, Status::EmptyRegime);
        let small = EspQuadruple { bundle: BundleModel::DegreeOnly { degree: 2 }, ..q };
        assert_eq!(esp_semistable(&small), Err(HiggsError::UnsupportedModel));
    }

    #[test]
    fn esp_with_beta_uses_filtrations() {
        let mut b = Builder::new(2, 4);
        let cross = b.divisor_in_class(&PicClass::of_degree(1, 2)).unwrap();
        let beta11 = b.divisor_in_class(&PicClass::of_degree(3, 2)).unwrap();
        let mut q = quadruple(&mut b, 1, 1, SymEntries { g12: SectionModel::vanishing(cross), ..Default::default() });
        q.beta.g11 = SectionModel::vanishing(beta11);
        let v = esp_semistable(&q).unwrap();
        assert_eq!(v.exactness, Exactness::CandidateRelative);
        assert_eq!(v.status, Status::StrictlySemistable);
        q.beta.g22 = SectionModel::vanishing(Divisor::zero());
        assert!(matches!(esp_semistable(&q), Err(HiggsError::Picard(_))));
    }

    #[test]
    fn component_examples() {
        assert_eq!(component_count(2, 1, 0).unwrap(), ComponentVerdict::Connected(1));
        assert_eq!(component_count(2, 3, 1).unwrap(), ComponentVerdict::Empty);
        assert_eq!(component_count(2, 2, 0).unwrap(), ComponentVerdict::OutOfScope);
        let totals: Vec<u32> = (2..=4).map(|g| component_table(g).unwrap().in_range_total).collect();
        assert_eq!(totals, vec![4, 12, 20]);
    }

    #[test]
    fn delegation_matches_filtrations_at_beta_zero() {
        use crate::pairs::{auto_candidates, Candidate, GraphScalar};
        for seed in 0..80 {
            let mut b = Builder::new(2, 100 + seed);
            let d_u = 3 + (seed as i64 % 2);
            let pair = crate::fixtures::random_decomposable(&mut b, 2 + seed as i64 % 2, d_u);
            let q = EspQuadruple {
                n: 2,
                curve: pair.curve.clone(),
                bundle: BundleModel::Split { l1: pair.l1.clone(), l2: pair.l2.clone() },
                l: &pair.u - &pair.curve.canonical(),
                beta: SymEntries::default(),
                gamma: SymEntries { g11: pair.g11.clone(), g12: pair.g12.clone(), g22: pair.g22.clone() },
            };
            let lines: Vec<LineData> = auto_candidates(&pair)
                .unwrap()
                .into_iter()
                .filter_map(|c| match c {
                    Candidate::Graph { over, scalar: GraphScalar::Isotropic(_), .. } => Some(LineData {
                        degree: pair.summand(over).degree,
                        isotropic: true,
                        annihilated: false,
                    }),
                    _ => None,
                })
                .collect();
            let delegated = esp_semistable(&q).unwrap();
            let filtered = esp_filtration_verdict(&q, &lines).unwrap();
            assert_eq!(delegated.is_semistable(), filtered.is_semistable(), "seed {seed}");
            if delegated.is_semistable() {
                assert_eq!(delegated.status, filtered.status, "seed {seed}");
            }
        }
    }
}
