//! Chamber decomposition of the stability parameter for type `(2, d)` pairs.
//!
//! Critical values are the integers in `[alpha_m, floor(d/2)]` together with
//! `d/2`, where `alpha_m = d - floor(d_U/2)`. Below `d - d_U/2` nothing changes.

use crate::exact::{floor, half, int, rat, Rat, ShowRat};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub g: i64,
    pub d_u: i64,
    pub d: i64,
}

impl ParamSpec {
    pub fn new(g: i64, d_u: i64, d: i64) -> Self {
        ParamSpec { g, d_u, d }
    }

    /// Outside `g >= 2`, `d_U > 0` the formulas are computed but not theorem-backed.
    pub fn model_only(&self) -> bool {
        self.g < 2 || self.d_u <= 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RegionTag {
    EmptyDegreeTooBig,
    EmptyAlphaTooBig,
    SpecialDEqualsDU,
    StableZone,
    WallZone,
}

impl RegionTag {
    pub fn is_empty(self) -> bool {
        matches!(self, RegionTag::EmptyDegreeTooBig | RegionTag::EmptyAlphaTooBig)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GenericRank {
    Two,
    PossiblyOne,
}

/// Label of a critical value: `alpha_k = floor(d/2) + k`, or the maximal wall `d/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CriticalId {
    K(i64),
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChamberLocation {
    Critical(CriticalId),
    Chamber(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ChamberError {
    #[error("critical values are undefined in region {0:?}")]
    CriticalsUndefined(RegionTag),
    #[error("alpha lies outside the chambers ({0:?})")]
    OutOfRange(RegionTag),
    #[error("empty diagram window")]
    EmptyWindow,
}

/// Open interval `(lower, upper)`; `lower = None` means unbounded below.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lower: Option<Rat>,
    pub upper: Rat,
}

impl Interval {
    pub fn contains(&self, a: Rat) -> bool {
        a < self.upper && self.lower.is_none_or(|l| a > l)
    }

    /// Deterministic interior point.
    pub fn sample(&self) -> Rat {
        match self.lower {
            Some(l) => (l + self.upper) / 2,
            None => self.upper - 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberDecomposition {
    pub criticals: Vec<Rat>,
    pub alpha_min: Rat,
    pub alpha_max: Rat,
    pub chambers: Vec<Interval>,
}

pub fn alpha_bounds(d: i64, d_u: i64) -> (Rat, Rat) {
    (int(d - d_u.div_euclid(2)), half(d))
}

pub fn critical_values(d: i64, d_u: i64) -> Result<Vec<Rat>, ChamberError> {
    if d >= d_u {
        return Err(ChamberError::CriticalsUndefined(region(int(0), d, d_u)));
    }
    let floor_half = d.div_euclid(2);
    let k_min = d - floor_half - d_u.div_euclid(2);
    let mut out: Vec<Rat> = (k_min..=0).map(|k| int(floor_half + k)).collect();
    if out.last() != Some(&half(d)) {
        out.push(half(d));
    }
    Ok(out)
}

pub fn decomposition(d: i64, d_u: i64) -> Result<ChamberDecomposition, ChamberError> {
    let criticals = critical_values(d, d_u)?;
    let (alpha_min, alpha_max) = alpha_bounds(d, d_u);
    let chambers = criticals
        .iter()
        .enumerate()
        .map(|(i, c)| Interval { lower: i.checked_sub(1).map(|j| criticals[j]), upper: *c })
        .collect();
    Ok(ChamberDecomposition { criticals, alpha_min, alpha_max, chambers })
}

impl ChamberDecomposition {
    pub fn locate(&self, alpha: Rat, d: i64) -> Option<ChamberLocation> {
        if alpha > self.alpha_max {
            return None;
        }
        if alpha == half(d) {
            return Some(ChamberLocation::Critical(CriticalId::Max));
        }
        if self.criticals.contains(&alpha) {
            return Some(ChamberLocation::Critical(CriticalId::K(floor(alpha) - d.div_euclid(2))));
        }
        Some(ChamberLocation::Chamber(self.criticals.iter().filter(|c| **c < alpha).count()))
    }

    /// Interior points of the chambers immediately below and above a critical value.
    pub fn neighbours(&self, critical: Rat) -> Option<(Rat, Option<Rat>)> {
        let j = self.criticals.iter().position(|c| *c == critical)?;
        let below = self.chambers[j].sample();
        let above = self.chambers.get(j + 1).map(Interval::sample);
        Some((below, above))
    }
}

pub fn chamber_index(alpha: Rat, spec: ParamSpec) -> Result<ChamberLocation, ChamberError> {
    let dec = decomposition(spec.d, spec.d_u)?;
    dec.locate(alpha, spec.d).ok_or(ChamberError::OutOfRange(RegionTag::EmptyAlphaTooBig))
}

pub fn is_critical(alpha: Rat, d: i64, d_u: i64) -> bool {
    critical_values(d, d_u).is_ok_and(|c| c.contains(&alpha))
}

pub fn region(alpha: Rat, d: i64, d_u: i64) -> RegionTag {
    if d > d_u {
        RegionTag::EmptyDegreeTooBig
    } else if d == d_u {
        RegionTag::SpecialDEqualsDU
    } else if alpha > half(d) {
        RegionTag::EmptyAlphaTooBig
    } else if alpha < int(d) - half(d_u) {
        RegionTag::StableZone
    } else {
        RegionTag::WallZone
    }
}

pub fn generic_rank(alpha: Rat, d: i64, d_u: i64) -> GenericRank {
    if alpha < int(d) - half(d_u) {
        GenericRank::Two
    } else {
        GenericRank::PossiblyOne
    }
}

/// One diagram row: `d` and the tagged alpha samples.
pub type GridRow = (i64, Vec<(Rat, RegionTag)>);

/// Rectangular `(d, alpha)` window sampled on an `alpha` grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiagramWindow {
    pub d_u: i64,
    pub d_range: (i64, i64),
    pub alpha_range: (Rat, Rat),
    pub alpha_step: Rat,
}

impl DiagramWindow {
    pub fn new(d_u: i64, d_range: (i64, i64), alpha_range: (Rat, Rat)) -> Self {
        DiagramWindow { d_u, d_range, alpha_range, alpha_step: rat(1, 2) }
    }

    fn check(&self) -> Result<(), ChamberError> {
        let ok = self.d_range.0 <= self.d_range.1
            && self.alpha_range.0 <= self.alpha_range.1
            && self.alpha_step > int(0);
        if ok {
            Ok(())
        } else {
            Err(ChamberError::EmptyWindow)
        }
    }

    fn alphas(&self) -> Vec<Rat> {
        let mut out = Vec::new();
        let mut a = self.alpha_range.0;
        while a <= self.alpha_range.1 {
            out.push(a);
            a += self.alpha_step;
        }
        out
    }

    fn ds(&self) -> impl Iterator<Item = i64> {
        (self.d_range.0..=self.d_range.1).rev()
    }

    /// Region tags row by row, highest `d` first.
    pub fn grid(&self) -> Result<Vec<GridRow>, ChamberError> {
        self.check()?;
        let alphas = self.alphas();
        Ok(self
            .ds()
            .map(|d| (d, alphas.iter().map(|a| (*a, region(*a, d, self.d_u))).collect()))
            .collect())
    }
}

fn cell_char(alpha: Rat, d: i64, d_u: i64, tag: RegionTag) -> char {
    match tag {
        RegionTag::EmptyDegreeTooBig => '#',
        RegionTag::SpecialDEqualsDU => '=',
        RegionTag::EmptyAlphaTooBig => ' ',
        _ if alpha == half(d) => '/',
        _ if alpha == alpha_bounds(d, d_u).0 => '|',
        RegionTag::StableZone => '.',
        RegionTag::WallZone => 'w',
    }
}

pub fn diagram_ascii(w: &DiagramWindow) -> Result<String, ChamberError> {
    let grid = w.grid()?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "region diagram  d_U={}  d=[{},{}]  alpha=[{},{}] step {}",
        w.d_u,
        w.d_range.0,
        w.d_range.1,
        ShowRat(w.alpha_range.0),
        ShowRat(w.alpha_range.1),
        ShowRat(w.alpha_step)
    );
    let _ = writeln!(out, "legend: . stable zone, w wall zone, / alpha=d/2, | alpha=d-[d_U/2],");
    let _ = writeln!(out, "        blank alpha>d/2 (empty), = d=d_U (special), # d>d_U (empty)");
    let _ = writeln!(out, "axis ticks: 0 at alpha=0, ' at other integers");
    for (d, row) in &grid {
        let cells: String = row.iter().map(|(a, t)| cell_char(*a, *d, w.d_u, *t)).collect();
        let _ = writeln!(out, "{d:>4} |{cells}|");
    }
    let width = grid.first().map_or(0, |(_, r)| r.len());
    let _ = writeln!(out, "     +{}+", "-".repeat(width));
    let ticks: String = w
        .alphas()
        .iter()
        .map(|a| if a.is_integer() && *a == int(0) { '0' } else if a.is_integer() { '\'' } else { ' ' })
        .collect();
    let _ = writeln!(out, "      {}", ticks.trim_end());
    Ok(out)
}

const CELL: i64 = 20;
const MARGIN: i64 = 40;

fn fill(tag: RegionTag) -> &'static str {
    match tag {
        RegionTag::EmptyDegreeTooBig => "#bdbdbd",
        RegionTag::EmptyAlphaTooBig => "#eeeeee",
        RegionTag::SpecialDEqualsDU => "#f4d27a",
        RegionTag::StableZone => "#a8d5a2",
        RegionTag::WallZone => "#9ecae1",
    }
}

/// Two-decimal rendering of an exact rational (half away from zero).
fn dec(r: Rat) -> String {
    let scaled = r * 100;
    let rounded = (scaled + if scaled < int(0) { rat(-1, 2) } else { rat(1, 2) }).trunc().to_integer();
    let sign = if rounded < 0 { "-" } else { "" };
    let a = rounded.abs();
    format!("{sign}{}.{:02}", a / 100, a % 100)
}

pub fn diagram_svg(w: &DiagramWindow) -> Result<String, ChamberError> {
    let grid = w.grid()?;
    let cols = grid.first().map_or(0, |(_, r)| r.len()) as i64;
    let rows = grid.len() as i64;
    let (width, height) = (2 * MARGIN + cols * CELL, 2 * MARGIN + rows * CELL);
    let x_of = |a: Rat| int(MARGIN) + (a - w.alpha_range.0) / w.alpha_step * CELL + CELL / 2;
    let y_of = |d: Rat| int(MARGIN) + (int(w.d_range.1) - d) * CELL + CELL / 2;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        out,
        r#"<clipPath id="window"><rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}"/></clipPath>"#,
        cols * CELL,
        rows * CELL
    );
    for (r, (d, row)) in grid.iter().enumerate() {
        for (c, (a, tag)) in row.iter().enumerate() {
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="{}"><title>d={d} alpha={} {:?}</title></rect>"#,
                MARGIN + c as i64 * CELL,
                MARGIN + r as i64 * CELL,
                fill(*tag),
                ShowRat(*a),
                tag
            );
        }
    }
    let (d_lo, d_hi) = (int(w.d_range.0) - 1, int(w.d_range.1) + 1);
    let mut line = |x1: Rat, y1: Rat, x2: Rat, y2: Rat, name: &str, dash: &str| {
        let _ = writeln!(
            out,
            r#"<line class="{name}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1.5"{dash} clip-path="url(#window)"/>"#,
            dec(x1),
            dec(y1),
            dec(x2),
            dec(y2)
        );
    };
    let (a_lo, a_hi) = (w.alpha_range.0 - w.alpha_step, w.alpha_range.1 + w.alpha_step);
    line(x_of(a_lo), y_of(int(w.d_u)), x_of(a_hi), y_of(int(w.d_u)), "d-equals-dU", "");
    line(x_of(d_lo / 2), y_of(d_lo), x_of(d_hi / 2), y_of(d_hi), "alpha-max", "");
    let shift = int(w.d_u.div_euclid(2));
    line(x_of(d_lo - shift), y_of(d_lo), x_of(d_hi - shift), y_of(d_hi), "alpha-min", r#" stroke-dasharray="4 3""#);
    for (r, (d, _)) in grid.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="10" text-anchor="end">{d}</text>"#,
            MARGIN - 4,
            MARGIN + r as i64 * CELL + CELL / 2 + 4
        );
    }
    for (c, a) in w.alphas().iter().enumerate().filter(|(_, a)| a.is_integer()) {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="10" text-anchor="middle">{}</text>"#,
            MARGIN + c as i64 * CELL + CELL / 2,
            height - MARGIN + 14,
            ShowRat(*a)
        );
    }
    let _ = writeln!(out, "</svg>");
    Ok(out)
}
