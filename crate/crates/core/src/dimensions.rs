//! Closed-form dimension and codimension counts, and the connectedness verdict engine.

use crate::chambers::{alpha_bounds, critical_values, region, RegionTag};
use crate::exact::{half, Rat};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DimError {
    #[error("alpha_k = {0} is not a critical value below d/2")]
    NotCritical(String),
    #[error("hypothesis d_U - d > g - 1 fails (d_U - d = {gap}, g - 1 = {threshold})")]
    HypothesisFails { gap: i64, threshold: i64 },
    #[error("no dimension count in region {0:?}")]
    Region(RegionTag),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExpectedDim {
    pub expected: i64,
    /// Euler characteristic of `S^2 V^* (x) U`.
    pub chi_s2: i64,
    /// Euler characteristic of `End V`.
    pub chi_end: i64,
}

pub fn expected_dim(g: i64, d: i64, d_u: i64) -> ExpectedDim {
    let chi_s2 = 3 * (d_u - d) + 3 * (1 - g);
    let chi_end = 4 * (1 - g);
    ExpectedDim { expected: chi_s2 - chi_end, chi_s2, chi_end }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DimFlag {
    /// `alpha_k` is the lowest critical value.
    AlphaMinWall,
    /// At `alpha_m` with `d_U` even every S^- member is split, so S^1 is empty.
    SMinusOneEmpty,
    /// Dimensions are expected dimensions, not computed ones.
    ExpectedOnly,
}

/// `None` entries are outside the range where the count is proven.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DimensionReport {
    pub expected_dim_n: i64,
    pub dim_splus: i64,
    pub splus_fibre_dim: i64,
    pub dim_sminus0: i64,
    pub dim_rank1_base: i64,
    pub dim_sminus1: Option<i64>,
    pub dim_q: Option<i64>,
    #[serde(rename = "dimPX")]
    pub dim_px: i64,
    pub dim_hitchin_fibre: i64,
    pub codim_splus: Option<i64>,
    pub codim_sminus_lower_bound: Option<i64>,
    pub flags: Vec<DimFlag>,
}

fn hypothesis(g: i64, d: i64, d_u: i64) -> Result<(), DimError> {
    if d_u - d > g - 1 {
        Ok(())
    } else {
        Err(DimError::HypothesisFails { gap: d_u - d, threshold: g - 1 })
    }
}

/// Integer value of a critical `alpha_k < d/2`.
fn critical_below_max(d: i64, d_u: i64, alpha_k: Rat) -> Result<i64, DimError> {
    let crit = critical_values(d, d_u).map_err(|_| DimError::Region(region(alpha_k, d, d_u)))?;
    if alpha_k < half(d) && crit.contains(&alpha_k) {
        Ok(alpha_k.to_integer())
    } else {
        Err(DimError::NotCritical(crate::exact::ShowRat(alpha_k).to_string()))
    }
}

pub fn flip_dimensions(g: i64, d: i64, d_u: i64, alpha_k: Rat) -> Result<DimensionReport, DimError> {
    let ak = critical_below_max(d, d_u, alpha_k)?;
    let expected = expected_dim(g, d, d_u).expected;
    let dim_splus = d_u - d + 2 * g - 2;
    let dim_rank1_base = 2 * ak - 2 * d + d_u + g;
    let proven = hypothesis(g, d, d_u).is_ok();
    let dim_q = proven.then_some(2 * (d_u - d) - g);
    let dim_sminus1 = dim_q.map(|q| dim_rank1_base + q);
    let mut flags = vec![DimFlag::ExpectedOnly];
    if Rat::from_integer(ak) == alpha_bounds(d, d_u).0 {
        flags.push(DimFlag::AlphaMinWall);
        if d_u % 2 == 0 {
            flags.push(DimFlag::SMinusOneEmpty);
        }
    }
    Ok(DimensionReport {
        expected_dim_n: expected,
        dim_splus,
        splus_fibre_dim: d - 2 * ak + g - 2,
        dim_sminus0: 2 * d_u - 2 * d,
        dim_rank1_base,
        dim_sminus1,
        dim_q,
        dim_px: 2 * d_u - 2 * d,
        dim_hitchin_fibre: d_u - d + g - 1,
        codim_splus: proven.then_some(expected - dim_splus),
        codim_sminus_lower_bound: dim_sminus1.map(|s| expected - s),
        flags,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CodimCheck {
    pub codim_splus: i64,
    pub codim_sminus_lower_bound: i64,
    pub threshold: i64,
    pub splus_exceeds: bool,
    pub sminus_exceeds: bool,
}

pub fn codim_check(g: i64, d: i64, d_u: i64, alpha_k: Rat) -> Result<CodimCheck, DimError> {
    hypothesis(g, d, d_u)?;
    let ak = critical_below_max(d, d_u, alpha_k)?;
    let codim_splus = 2 * (d_u - d) - g + 1;
    let codim_sminus_lower_bound = d + g - 1 - 2 * ak;
    Ok(CodimCheck {
        codim_splus,
        codim_sminus_lower_bound,
        threshold: g - 1,
        splus_exceeds: codim_splus > g - 1,
        sminus_exceeds: codim_sminus_lower_bound > g - 1,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "camelCase")]
pub enum ConnectednessVerdict {
    Empty { reason: RegionTag },
    ConnectedExtremal,
    ConnectedByMainThm,
    SpecialDEqualsDU,
    HypothesisFails { note: String },
}

impl ConnectednessVerdict {
    pub fn component_count(&self) -> Option<u32> {
        match self {
            ConnectednessVerdict::ConnectedExtremal | ConnectednessVerdict::ConnectedByMainThm => Some(1),
            _ => None,
        }
    }
}

pub fn connectedness(g: i64, d: i64, d_u: i64, alpha: Rat) -> ConnectednessVerdict {
    let tag = region(alpha, d, d_u);
    if tag.is_empty() {
        return ConnectednessVerdict::Empty { reason: tag };
    }
    if tag == RegionTag::SpecialDEqualsDU {
        return ConnectednessVerdict::SpecialDEqualsDU;
    }
    if alpha < alpha_bounds(d, d_u).0 {
        return ConnectednessVerdict::ConnectedExtremal;
    }
    if d_u - d > g - 1 && alpha <= half(d) {
        return ConnectednessVerdict::ConnectedByMainThm;
    }
    ConnectednessVerdict::HypothesisFails {
        note: format!("d_U - d = {} does not exceed g - 1 = {} and alpha is not below alpha_m", d_u - d, g - 1),
    }
}

pub fn hitchin_dims(g: i64, d: i64, d_u: i64) -> Result<(i64, i64), DimError> {
    if d >= d_u {
        return Err(DimError::Region(region(Rat::from_integer(0), d, d_u)));
    }
    Ok((2 * d_u - 2 * d, d_u - d + g - 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DHalfFibre {
    pub chi: i64,
    pub generic_fibre_dim: i64,
    /// `h^1 = 0` holds only for generic stable `V`.
    pub h1_vanishing_generic: bool,
}

/// Fibre of the forgetful map at `alpha = d/2` over a stable bundle.
pub fn dhalf_fibre_chi(g: i64, d: i64, d_u: i64) -> Result<DHalfFibre, DimError> {
    hypothesis(g, d, d_u)?;
    let chi = expected_dim(g, d, d_u).chi_s2;
    Ok(DHalfFibre { chi, generic_fibre_dim: chi - 1, h1_vanishing_generic: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn expected_examples() {
        assert_eq!(expected_dim(2, 4, 9).expected, 16);
        assert_eq!(expected_dim(2, 9, 9).expected, 1);
        assert_eq!(expected_dim(3, 0, 5).expected, 17);
        let e = expected_dim(2, 4, 9);
        assert_eq!((e.chi_s2, e.chi_end), (12, -4));
    }

    #[test]
    fn flip_examples() {
        let r = flip_dimensions(2, 4, 9, int(1)).unwrap();
        assert_eq!(
            (r.dim_splus, r.dim_sminus0, r.dim_sminus1, r.dim_q, r.splus_fibre_dim),
            (7, 10, Some(13), Some(8), 2)
        );
        assert_eq!(r.dim_rank1_base, 5);
        assert!(!r.flags.contains(&DimFlag::AlphaMinWall));
        let r0 = flip_dimensions(2, 4, 9, int(0)).unwrap();
        assert_eq!((r0.dim_sminus1, r0.dim_sminus0), (Some(11), 10));
        assert!(r0.flags.contains(&DimFlag::AlphaMinWall));
        assert!(!r0.flags.contains(&DimFlag::SMinusOneEmpty));
        assert!(matches!(flip_dimensions(2, 4, 9, rat(3, 2)), Err(DimError::NotCritical(_))));
        assert!(matches!(flip_dimensions(2, 4, 9, int(2)), Err(DimError::NotCritical(_))));
        let even = flip_dimensions(2, 4, 8, int(0)).unwrap();
        assert!(even.flags.contains(&DimFlag::SMinusOneEmpty));
        assert_eq!(even.dim_sminus1, Some(even.dim_sminus0));
    }

    #[test]
    fn codim_examples() {
        let c = codim_check(2, 4, 9, int(1)).unwrap();
        assert_eq!((c.codim_splus, c.codim_sminus_lower_bound), (9, 3));
        assert!(c.splus_exceeds && c.sminus_exceeds);
        assert!(codim_check(2, 7, 9, int(3)).is_ok());
        assert!(matches!(codim_check(2, 8, 9, int(4)), Err(DimError::HypothesisFails { .. })));
        assert_eq!(codim_check(2, 0, 9, int(-4)).unwrap().codim_sminus_lower_bound, 9);
    }

    #[test]
    fn connectedness_examples() {
        assert_eq!(connectedness(2, 4, 9, int(2)), ConnectednessVerdict::ConnectedByMainThm);
        assert_eq!(connectedness(2, 7, 9, int(-10)), ConnectednessVerdict::ConnectedExtremal);
        assert_eq!(connectedness(2, 7, 9, int(3)), ConnectednessVerdict::ConnectedByMainThm);
        assert!(matches!(connectedness(3, 7, 9, int(3)), ConnectednessVerdict::HypothesisFails { .. }));
        assert_eq!(connectedness(2, 9, 9, int(0)), ConnectednessVerdict::SpecialDEqualsDU);
        assert_eq!(
            connectedness(2, 10, 9, int(0)),
            ConnectednessVerdict::Empty { reason: RegionTag::EmptyDegreeTooBig }
        );
        assert_eq!(connectedness(2, 4, 9, int(2)).component_count(), Some(1));
    }

    #[test]
    fn hitchin_and_fibre() {
        assert_eq!(hitchin_dims(2, 4, 9), Ok((10, 6)));
        assert_eq!(hitchin_dims(2, 8, 9), Ok((2, 2)));
        assert_eq!(hitchin_dims(2, 9, 9), Err(DimError::Region(RegionTag::SpecialDEqualsDU)));
        let f = dhalf_fibre_chi(2, 4, 9).unwrap();
        assert_eq!((f.chi, f.generic_fibre_dim), (12, 11));
        assert!(dhalf_fibre_chi(2, 8, 9).is_err());
        assert_eq!(dhalf_fibre_chi(2, 0, 3).unwrap().chi, 6);
    }
}
