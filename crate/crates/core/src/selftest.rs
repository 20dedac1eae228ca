//! Invariant sweeps shared by `quadpair selftest` and the benchmarks.

use crate::batch::{self, Mode};
use crate::chambers::{critical_values, decomposition};
use crate::dimensions::{codim_check, expected_dim, flip_dimensions, hitchin_dims};
use crate::exact::{half, int, Rat};
use crate::fixtures::{self, Builder};
use crate::higgs;
use crate::jets::{det_identity_check, jet_sqrt, Jet, Scalar};
use crate::pairs::{destab_audit, flip_sets, PairModel};
use crate::picard::{square_roots, JacVector, PicClass};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl CheckResult {
    fn from_outcomes(name: &'static str, outcomes: Vec<Result<(), String>>) -> Self {
        let failures: Vec<String> = outcomes.iter().filter_map(|o| o.clone().err()).collect();
        CheckResult { name, cases: outcomes.len(), failures: failures.len(), first_failure: failures.into_iter().next() }
    }

    pub fn ok(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub seed: u64,
    pub quick: bool,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.ok()).count()
    }

    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(CheckResult::ok)
    }
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

/// Parameter triples `(g, d, d_U)` with `2 <= g <= 4`, `0 <= d < d_U <= 12`.
pub fn parameter_range() -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    for g in 2..=4 {
        for d_u in 1..=12 {
            for d in 0..d_u {
                out.push((g, d, d_u));
            }
        }
    }
    out
}

/// Walls found by scanning a half-integer grid for parameters admitting a
/// strictly semistable split witness.
fn critical_oracle(d: i64, d_u: i64) -> Vec<Rat> {
    let lowest = int(d - d_u - 2);
    let steps = ((half(d) - lowest) * 2).to_integer();
    (0..=steps)
        .map(|k| lowest + Rat::new(k, 2))
        .filter(|a| *a == half(d) || (a.is_integer() && d_u - 2 * (d - a.to_integer()) >= 0))
        .collect()
}

pub fn criticals_sweep(mode: Mode) -> CheckResult {
    let outcomes = batch::map(mode, &parameter_range(), |&(_, d, d_u)| {
        let found = critical_values(d, d_u).map_err(|e| e.to_string())?;
        ensure(found == critical_oracle(d, d_u), || format!("criticals differ at d={d}, d_U={d_u}"))
    });
    CheckResult::from_outcomes("critical values vs oracle", outcomes)
}

pub fn dimension_sweep(mode: Mode) -> CheckResult {
    let outcomes = batch::map(mode, &parameter_range(), |&(g, d, d_u)| {
        let expected = expected_dim(g, d, d_u);
        ensure(expected.expected == expected.chi_s2 - expected.chi_end, || "expected dim".into())?;
        let (px, fibre) = hitchin_dims(g, d, d_u).map_err(|e| e.to_string())?;
        ensure(px + fibre == expected.expected, || format!("hitchin dims at {g},{d},{d_u}"))?;
        if d_u - d <= g - 1 {
            return Ok(());
        }
        for ak in critical_values(d, d_u).map_err(|e| e.to_string())?.into_iter().filter(|a| *a < half(d)) {
            let r = flip_dimensions(g, d, d_u, ak).map_err(|e| e.to_string())?;
            let c = codim_check(g, d, d_u, ak).map_err(|e| e.to_string())?;
            let s1 = r.dim_sminus1.ok_or("missing S^1 dimension")?;
            let ok = r.dim_splus < expected.expected
                && r.dim_sminus0 < expected.expected
                && s1 < expected.expected
                && c.splus_exceeds
                && c.sminus_exceeds
                && s1 >= r.dim_sminus0;
            ensure(ok, || format!("dimension inequalities at g={g}, d={d}, d_U={d_u}, alpha_k={ak}"))?;
        }
        Ok(())
    });
    CheckResult::from_outcomes("dimension counts", outcomes)
}

fn random_class(rng: &mut ChaCha8Rng, genus: usize, degree: i64) -> PicClass {
    let coords = (0..2 * genus).map(|_| Rat::new(rng.random_range(0..60), 60)).collect();
    PicClass::new(degree, JacVector::new(coords))
}

pub fn square_root_sweep(seed: u64, per_genus: usize, mode: Mode) -> CheckResult {
    let cases: Vec<(usize, u64)> = (1..=3).flat_map(|g| (0..per_genus as u64).map(move |i| (g, i))).collect();
    let outcomes = batch::map(mode, &cases, |&(g, i)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (g as u64) << 32 ^ i);
        let degree = 2 * rng.random_range(-5..=5);
        let c = random_class(&mut rng, g, degree);
        let roots = square_roots(&c);
        ensure(roots.len() == 1 << (2 * g), || format!("root count {} for genus {g}", roots.len()))?;
        ensure(roots.iter().all(|r| r.times(2) == c), || "root does not double back".into())
    });
    CheckResult::from_outcomes("square roots", outcomes)
}

fn random_unit_jet(rng: &mut ChaCha8Rng) -> Jet {
    let len = rng.random_range(1..=5);
    let mut coeffs: Vec<Scalar> = (0..len).map(|_| Scalar::ratio(rng.random_range(-9..=9), rng.random_range(1..=5))).collect();
    // a square leading term keeps the root inside Q(i)
    let lead = Scalar::ratio(rng.random_range(1..=6), rng.random_range(1..=4));
    coeffs[0] = if rng.random_bool(0.5) { &lead * &lead } else { -&(&lead * &lead) };
    Jet::new(coeffs).expect("non-empty")
}

pub fn jet_sqrt_batch(seed: u64, count: usize, mode: Mode) -> CheckResult {
    let outcomes = batch::map_range(mode, 0..count as u64, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i));
        let c = random_unit_jet(&mut rng);
        let set = jet_sqrt(&c).map_err(|e| e.to_string())?;
        ensure(set.count() == Some(2), || format!("{} roots of {c}", set.roots.len()))?;
        ensure(set.roots.iter().all(|r| r.square() == c), || format!("root of {c} does not square back"))
    });
    CheckResult::from_outcomes("jet square roots", outcomes)
}

pub fn det_identity_batch(seed: u64, count: usize, mode: Mode) -> CheckResult {
    let outcomes = batch::map_range(mode, 0..count as u64, |i| {
        let mut b = Builder::new(2, seed.wrapping_add(i));
        let degree = b.rng().random_range(1..=4);
        let div = b.random_divisor(degree);
        let local = fixtures::random_localized_pair(b.rng(), &div);
        ensure(det_identity_check(&local, &div).map_err(|e| e.to_string())?, || format!("det identity fails on {div}"))
    });
    CheckResult::from_outcomes("det identity", outcomes)
}

pub fn audit_batch(seed: u64, count: usize, mode: Mode) -> CheckResult {
    let outcomes = batch::map_range(mode, 0..count as u64, |i| {
        let mut b = Builder::new(2, seed.wrapping_add(i));
        let pair = fixtures::random_decomposable(&mut b, 4, 9);
        let dec = decomposition(4, 9).map_err(|e| e.to_string())?;
        for alpha in dec.criticals.iter().copied().chain(dec.chambers.iter().map(|c| c.sample())) {
            if alpha < half(4) {
                let v = destab_audit(&pair, alpha).map_err(|e| e.to_string())?;
                ensure(v.is_empty(), || format!("audit violations {v:?} at alpha {alpha}"))?;
            }
        }
        Ok(())
    });
    CheckResult::from_outcomes("destabilizer audit", outcomes)
}

/// Verdicts of a random family at every chamber sample; the benchmark workload.
pub fn family_verdicts(family: &[PairModel], mode: Mode) -> Vec<Vec<bool>> {
    let dec = decomposition(4, 9).expect("d < d_U");
    let samples: Vec<Rat> = dec.chambers.iter().map(|c| c.sample()).collect();
    batch::map(mode, family, |m| samples.iter().map(|a| m.verdict(*a).is_ok_and(|v| v.is_semistable())).collect())
}

pub fn flip_check(seed: u64, size: usize) -> CheckResult {
    let family = fixtures::random_family(2, 4, 9, size, seed);
    let outcomes = [int(0), int(1)]
        .into_iter()
        .map(|ak| {
            let f = flip_sets(&family, ak).map_err(|e| e.to_string())?;
            ensure(f.holds(), || format!("flip sets differ at alpha_k = {ak}"))
        })
        .collect();
    CheckResult::from_outcomes("flip set equation", outcomes)
}

pub fn higgs_sweep(seed: u64, count: usize, mode: Mode) -> CheckResult {
    let outcomes = batch::map_range(mode, 0..count as u64, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i));
        let n = 2 * rng.random_range(1..=3);
        let (d1, d2, g) = (rng.random_range(-20..=20), rng.random_range(-10..=10), rng.random_range(2..=6));
        let mw = higgs::milnor_wood(d1, d2, n, g).map_err(|e| e.to_string())?;
        ensure(mw.valid == (mw.a.abs() <= n * (g - 1)), || "milnor-wood forms".into())?;
        let (e1, e2) = higgs::dualize(d1, d2, n);
        ensure(higgs::dualize(e1, e2, n) == (d1, d2), || "dualize is not an involution".into())?;
        let (ab, dual) = (higgs::project_invariants(d1, d2, n), higgs::project_invariants(e1, e2, n));
        let (ab, dual) = (ab.map_err(|e| e.to_string())?, dual.map_err(|e| e.to_string())?);
        ensure(dual.a == -ab.a && dual.b == ab.b, || "duality on (a, b)".into())?;
        let norm = higgs::normalize(d1, d2, n).map_err(|e| e.to_string())?;
        let after = higgs::project_invariants(norm.d1, norm.d2, n).map_err(|e| e.to_string())?;
        ensure((after.a, after.b) == (ab.a, ab.b) && (0..=1).contains(&norm.d2), || "normalize".into())
    });
    CheckResult::from_outcomes("higgs arithmetic", outcomes)
}

pub fn component_check() -> CheckResult {
    let outcomes = (2..=6)
        .map(|g| {
            let t = higgs::component_table(g).map_err(|e| e.to_string())?;
            ensure(t.in_range_total as i64 == 4 * (2 * g - 3), || format!("component total at g={g}"))
        })
        .collect();
    CheckResult::from_outcomes("component tables", outcomes)
}

pub fn run(seed: u64, quick: bool, mode: Mode) -> Report {
    let scale = |full: usize, small: usize| if quick { small } else { full };
    let checks = vec![
        criticals_sweep(mode),
        dimension_sweep(mode),
        square_root_sweep(seed, scale(50, 10), mode),
        jet_sqrt_batch(seed, scale(500, 50), mode),
        det_identity_batch(seed, scale(100, 20), mode),
        audit_batch(seed, scale(200, 20), mode),
        flip_check(seed, scale(120, 24)),
        higgs_sweep(seed, scale(1000, 100), mode),
        component_check(),
    ];
    Report { seed, quick, checks }
}
