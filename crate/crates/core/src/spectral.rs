//! Hitchin invariants, the double cover of effective divisors, and spectral-curve types.

use crate::chambers::alpha_bounds;
use crate::exact::{half, int, Rat, ShowRat};
use crate::jets::{Jet, JetError};
use crate::pairs::{self, alpha_verdict, CondClass, DecomposablePair, PairError};
use crate::picard::{class_of_divisor, square_roots, CurveModel, Divisor, PicClass, PicardError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error(transparent)]
    Picard(#[from] PicardError),
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("det(gamma) vanishes identically: gamma has rank one")]
    DegenerateGamma,
    #[error("divisor is not a section of xi^2")]
    NotInPX,
    #[error("alpha = {alpha} is not below alpha_m = {alpha_min}")]
    WrongChamber { alpha: String, alpha_min: String },
}

/// A divisor `D` in `|xi^2|` together with `xi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralData {
    #[serde(rename = "D")]
    pub divisor: Divisor,
    pub xi: PicClass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpectralClass {
    SmoothIrreducible,
    SingularIrreducible,
    Reducible,
}

/// Vanishing order of `det(gamma)` read off a truncated jet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "order", rename_all = "camelCase")]
pub enum LocalOrder {
    Exact(usize),
    /// The jet vanished to its full length.
    AtLeast(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum DetDivisor {
    Exact { divisor: Divisor },
    ClassOnly { class: PicClass, local_orders: BTreeMap<String, LocalOrder> },
}

impl DetDivisor {
    pub fn class(&self, curve: &CurveModel) -> Result<PicClass, PicardError> {
        match self {
            DetDivisor::Exact { divisor } => class_of_divisor(divisor, curve),
            DetDivisor::ClassOnly { class, .. } => Ok(class.clone()),
        }
    }

    pub fn divisor(&self) -> Option<&Divisor> {
        match self {
            DetDivisor::Exact { divisor } => Some(divisor),
            DetDivisor::ClassOnly { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HitchinInvariant {
    pub det: DetDivisor,
    pub xi: PicClass,
}

impl HitchinInvariant {
    pub fn spectral_data(&self) -> Option<SpectralData> {
        self.det.divisor().map(|d| SpectralData { divisor: d.clone(), xi: self.xi.clone() })
    }
}

pub fn xi_of(pair: &DecomposablePair) -> PicClass {
    &(&pair.u - &pair.l1) - &pair.l2
}

fn local_det_orders(pair: &DecomposablePair) -> Result<BTreeMap<String, LocalOrder>, JetError> {
    let Some(local) = &pair.jets else { return Ok(BTreeMap::new()) };
    local
        .iter()
        .map(|(p, e)| {
            let (a, b, c) = (Jet::new(e.g11.clone())?, Jet::new(e.g12.clone())?, Jet::new(e.g22.clone())?);
            let det = &(&a * &c) - &b.square();
            let order = det.order().map_or(LocalOrder::AtLeast(det.len()), LocalOrder::Exact);
            Ok((p.clone(), order))
        })
        .collect()
}

/// `(div det(gamma), xi)` with `xi = U - L1 - L2`.
pub fn hitchin_invariant(pair: &DecomposablePair) -> Result<HitchinInvariant, SpectralError> {
    let xi = xi_of(pair);
    let entries = (pair.g11.divisor(), pair.g12.divisor(), pair.g22.divisor());
    let det = match entries {
        (Some(a), None, Some(c)) => DetDivisor::Exact { divisor: a + c },
        (None, Some(b), None) | (Some(_), Some(b), None) | (None, Some(b), Some(_)) => {
            DetDivisor::Exact { divisor: b.scale(2) }
        }
        (Some(_), Some(_), Some(_)) => {
            DetDivisor::ClassOnly { class: xi.times(2), local_orders: local_det_orders(pair)? }
        }
        _ => return Err(SpectralError::DegenerateGamma),
    };
    Ok(HitchinInvariant { det, xi })
}

/// `O(D) = L^2`.
pub fn px_member(d: &Divisor, l: &PicClass, curve: &CurveModel) -> Result<bool, PicardError> {
    Ok(d.is_effective() && class_of_divisor(d, curve)? == l.times(2))
}

/// The `2^{2g}` classes `L` with `L^2 = O(D)`.
pub fn px_fibre(d: &Divisor, curve: &CurveModel) -> Result<Vec<PicClass>, PicardError> {
    if d.degree() % 2 != 0 {
        return Err(PicardError::DegreeParity(d.degree()));
    }
    Ok(square_roots(&class_of_divisor(d, curve)?))
}

pub fn spectral_classify(sd: &SpectralData, curve: &CurveModel) -> Result<SpectralClass, SpectralError> {
    if !px_member(&sd.divisor, &sd.xi, curve)? {
        return Err(SpectralError::NotInPX);
    }
    if let Some(root) = sd.divisor.halve() {
        if class_of_divisor(&root, curve)? == sd.xi {
            return Ok(SpectralClass::Reducible);
        }
    }
    Ok(if sd.divisor.is_reduced() { SpectralClass::SmoothIrreducible } else { SpectralClass::SingularIrreducible })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TwistedHiggsInvariants {
    pub xi: PicClass,
    pub trace_zero: bool,
    pub det: DetDivisor,
}

/// Invariants of `phi = g^{-1} gamma`. The entries are stored as divisors, so
/// `gamma -> lambda * gamma` leaves the input and hence the output unchanged.
pub fn twisted_higgs(pair: &DecomposablePair) -> Result<TwistedHiggsInvariants, SpectralError> {
    let inv = hitchin_invariant(pair)?;
    Ok(TwistedHiggsInvariants { xi: inv.xi, trace_zero: true, det: inv.det })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StabilityTransfer {
    pub quadratic: bool,
    pub higgs: bool,
    /// Some `phi`-invariant subbundle has degree exactly `d/2`.
    pub strict: bool,
}

impl StabilityTransfer {
    pub fn agrees(&self) -> bool {
        self.quadratic == self.higgs
    }
}

/// Semistability of the pair below `alpha_m` and of `(V, phi)`, over the
/// same candidate subbundles.
pub fn stability_transfer(pair: &DecomposablePair, alpha: Rat) -> Result<StabilityTransfer, SpectralError> {
    let alpha_min = alpha_bounds(pair.d(), pair.d_u()).0;
    if alpha >= alpha_min {
        return Err(SpectralError::WrongChamber {
            alpha: ShowRat(alpha).to_string(),
            alpha_min: ShowRat(alpha_min).to_string(),
        });
    }
    let quadratic = alpha_verdict(pair, alpha, &[])?.status.is_semistable();
    // phi(L) in L xi exactly for the A and B subbundles
    let invariant = pairs::classified_candidates(pair)?
        .into_iter()
        .filter(|(class, _)| matches!(class, CondClass::A | CondClass::B))
        .map(|(_, degree)| int(degree))
        .collect::<Vec<_>>();
    let injective = !matches!(hitchin_invariant(pair), Err(SpectralError::DegenerateGamma));
    let higgs = injective && invariant.iter().all(|deg| *deg <= half(pair.d()));
    let strict = invariant.iter().any(|deg| *deg == half(pair.d()));
    Ok(StabilityTransfer { quadratic, higgs, strict })
}
