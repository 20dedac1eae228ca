//! Acceptance suite: eleven criteria, each checked against an oracle written
//! here rather than taken from the library. Prints one line per criterion and
//! exits non-zero if any fails.

use num_rational::Rational64 as Rat;
use quadpair::batch::Mode;
use quadpair::chambers::{critical_values, decomposition};
use quadpair::dimensions::{codim_check, expected_dim, flip_dimensions, hitchin_dims};
use quadpair::fixtures::{self, random_decomposable, random_family, random_localized_pair, Builder};
use quadpair::higgs::{
    component_table, dualize, esp_filtration_verdict, esp_semistable, milnor_wood, normalize, project_invariants,
    so23_from_ab, so23_lifts, so23_to_ab, BundleModel, ComponentVerdict, EspQuadruple, LineData, So23Invariants,
    SymEntries,
};
use quadpair::jets::{det_identity_check, jet_sqrt, restrict, solve_q, Jet, LocalEntries, LocalizedPair, Scalar, Series};
use quadpair::pairs::{
    alpha_verdict, auto_candidates, destab_audit, flip_sets, wall_side, Candidate, CondClass, DecomposablePair,
    GraphScalar, PairModel, Status, StabilityVerdict, WallSide,
};
use quadpair::picard::{square_roots, CurveModel, Divisor, JacVector, PicClass};
use quadpair::spectral::{spectral_classify, SpectralClass, SpectralData, SpectralError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn i(n: i64) -> Rat {
    Rat::from_integer(n)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn params() -> impl Iterator<Item = (i64, i64, i64)> {
    (2..=4).flat_map(|g| (1..=12).flat_map(move |d_u| (0..d_u).map(move |d| (g, d, d_u))))
}

fn frac(x: Rat) -> Rat {
    x - x.floor()
}

// 1. Critical values against destabilizer feasibility.

/// Walls from an enumeration of split witnesses `V = L + M`, `deg L + deg M = d`,
/// with `gamma = diag(0, g_MM)`, which exists when `h^0(U M^{-2}) > 0`. `L` is a
/// type-A line, tight at `alpha = deg L`; `M` is a type-C line, tight at
/// `alpha = d - deg M`. The type-B wall is `d/2`.
fn brute_force_criticals(d: i64, d_u: i64) -> Vec<Rat> {
    let half = r(d, 2);
    let mut walls = BTreeSet::from([half]);
    for deg_l in -(d_u + 2)..=(d + d_u + 2) {
        let deg_m = d - deg_l;
        if d_u - 2 * deg_m < 0 {
            continue;
        }
        for alpha in [i(deg_l), i(d - deg_m)] {
            if alpha <= half {
                walls.insert(alpha);
            }
        }
    }
    walls.into_iter().collect()
}

fn criterion_1() -> Outcome {
    let mut cases = 0;
    for (_, d, d_u) in params() {
        let found = critical_values(d, d_u).map_err(|e| e.to_string())?;
        let oracle = brute_force_criticals(d, d_u);
        check(found == oracle, || format!("d={d}, d_U={d_u}: {found:?} vs {oracle:?}"))?;
        cases += 1;
    }
    Ok(format!("{cases} parameter triples"))
}

// 2. Codimension positivity, 3. consistency identities.

fn criticals_below_half(d: i64, d_u: i64) -> Vec<Rat> {
    brute_force_criticals(d, d_u).into_iter().filter(|a| *a < r(d, 2)).collect()
}

fn criterion_2() -> Outcome {
    let mut cases = 0;
    for (g, d, d_u) in params().filter(|(g, d, d_u)| d_u - d > g - 1) {
        let expected = 3 * (d_u - d) + g - 1;
        for ak in criticals_below_half(d, d_u) {
            let k = ak.to_integer();
            let rep = flip_dimensions(g, d, d_u, ak).map_err(|e| e.to_string())?;
            let cc = codim_check(g, d, d_u, ak).map_err(|e| e.to_string())?;
            let splus = d_u - d + 2 * g - 2;
            let sminus0 = 2 * d_u - 2 * d;
            let sminus1 = 3 * d_u - 4 * d + 2 * k;
            let ctx = || format!("g={g}, d={d}, d_U={d_u}, alpha_k={k}");
            check(rep.expected_dim_n == expected, || format!("expected dim at {}", ctx()))?;
            check(rep.dim_splus == splus && rep.dim_sminus0 == sminus0, || format!("S+/S-0 at {}", ctx()))?;
            check(rep.dim_sminus1 == Some(sminus1), || format!("S-1 at {}", ctx()))?;
            check(splus < expected && sminus0 < expected && sminus1 < expected, || format!("dims at {}", ctx()))?;
            check(cc.codim_splus == 2 * (d_u - d) - g + 1 && cc.codim_splus > g - 1, || format!("codim S+ at {}", ctx()))?;
            check(
                cc.codim_sminus_lower_bound == d + g - 1 - 2 * k && cc.codim_sminus_lower_bound > g - 1,
                || format!("codim S- at {}", ctx()),
            )?;
            cases += 1;
        }
    }
    check(cases > 0, || "no walls in range".into())?;
    Ok(format!("{cases} walls"))
}

fn criterion_3() -> Outcome {
    let mut cases = 0;
    for (g, d, d_u) in params() {
        let e = expected_dim(g, d, d_u);
        let chi_s2 = 3 * (d_u - d) + 3 * (1 - g);
        let chi_end = 4 * (1 - g);
        check(e.chi_s2 == chi_s2 && e.chi_end == chi_end && e.expected == chi_s2 - chi_end, || {
            format!("Euler characteristics at g={g}, d={d}, d_U={d_u}")
        })?;
        let (px, fibre) = hitchin_dims(g, d, d_u).map_err(|e| e.to_string())?;
        check((px, fibre) == (2 * d_u - 2 * d, d_u - d + g - 1) && px + fibre == e.expected, || {
            format!("Hitchin dims at g={g}, d={d}, d_U={d_u}")
        })?;
        cases += 1;
        if d_u - d <= g - 1 {
            continue;
        }
        let alpha_min = d - d_u.div_euclid(2);
        for ak in criticals_below_half(d, d_u) {
            let k = ak.to_integer();
            let rep = flip_dimensions(g, d, d_u, ak).map_err(|e| e.to_string())?;
            let base = 2 * k - 2 * d + d_u + g;
            let q = 2 * (d_u - d) - g;
            let s1 = rep.dim_sminus1.ok_or("missing S-1")?;
            check(rep.dim_rank1_base == base && rep.dim_q == Some(q) && s1 == base + q, || {
                format!("S-1 additivity at g={g}, d={d}, d_U={d_u}, alpha_k={k}")
            })?;
            let equal_expected = k == alpha_min && d_u % 2 == 0;
            check(s1 >= rep.dim_sminus0 && (s1 == rep.dim_sminus0) == equal_expected, || {
                format!("S-1 vs S-0 at g={g}, d={d}, d_U={d_u}, alpha_k={k}")
            })?;
            cases += 1;
        }
    }
    Ok(format!("{cases} identities"))
}

// 4. Square roots in the Picard group.

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut cases = 0;
    for g in 1..=3usize {
        for _ in 0..50 {
            let degree = 2 * rng.random_range(-5..=5);
            let coords: Vec<Rat> = (0..2 * g).map(|_| r(rng.random_range(0..64), 64)).collect();
            let class = PicClass::new(degree, JacVector::new(coords.clone()));
            let roots = square_roots(&class);
            check(roots.len() == 1 << (2 * g), || format!("genus {g}: {} roots", roots.len()))?;
            let distinct: BTreeSet<_> = roots.iter().collect();
            check(distinct.len() == roots.len(), || format!("genus {g}: repeated roots"))?;
            for root in &roots {
                let doubled: Vec<Rat> = root.jac.coords().iter().map(|c| frac(*c * 2)).collect();
                let target: Vec<Rat> = coords.iter().map(|c| frac(*c)).collect();
                check(root.degree * 2 == degree && doubled == target, || format!("genus {g}: root does not double back"))?;
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} classes"))
}

// 5. Jet engine.

fn mul_trunc(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    (0..a.len())
        .map(|k| (0..=k).fold(Scalar::zero(), |acc, j| &acc + &(&a[j] * &b[k - j])))
        .collect()
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::ratio(rng.random_range(-12..=12), rng.random_range(1..=6))
}

fn random_unit(rng: &mut ChaCha8Rng, len: usize) -> Vec<Scalar> {
    let mut c: Vec<Scalar> = (0..len).map(|_| random_scalar(rng)).collect();
    c[0] = Scalar::ratio(rng.random_range(1..=9) * if rng.random_bool(0.5) { 1 } else { -1 }, rng.random_range(1..=5));
    c
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    // (a) square roots of unit jets
    let mut verified = 0;
    for trial in 0..500 {
        let len = rng.random_range(1..=5);
        let target = if trial % 2 == 0 {
            let base = random_unit(&mut rng, len);
            mul_trunc(&base, &base)
        } else {
            random_unit(&mut rng, len)
        };
        let jet = Jet::new(target.clone()).map_err(|e| e.to_string())?;
        match jet_sqrt(&jet) {
            Ok(set) => {
                check(set.roots.len() == 2 && set.free_tail == 0, || format!("unit jet {jet}: {} roots", set.roots.len()))?;
                for root in &set.roots {
                    check(mul_trunc(root.coeffs(), root.coeffs()) == target, || format!("root of {jet} fails"))?;
                }
                verified += set.roots.len();
            }
            Err(e) => check(trial % 2 == 1, || format!("square {jet} reported as {e}"))?,
        }
    }

    // (b) solution counts of q^2 + eta = 0 on divisors with at most four points
    let mut counted = 0;
    for _ in 0..100 {
        let npts = rng.random_range(1..=4);
        let mut div = Divisor::zero();
        let mut series = Series::new();
        for p in 0..npts {
            let name = format!("x{p}");
            let mult = rng.random_range(1..=5);
            div.add_point(&name, mult);
            let base = random_unit(&mut rng, mult as usize);
            series.insert(name, mul_trunc(&base, &base).iter().map(|c| -c).collect());
        }
        let eta = restrict(&series, &div).map_err(|e| e.to_string())?;
        let sol = solve_q(&eta, Mode::default());
        check(sol.count() == Some(1 << npts), || format!("{:?} solutions over {npts} points", sol.count()))?;
        for q in &sol.solutions {
            for (p, jet) in &q.per_point {
                let lhs = mul_trunc(jet.coeffs(), jet.coeffs());
                let ok = lhs.iter().zip(&series[p]).all(|(a, b)| (a + b).is_zero());
                check(ok, || format!("q^2 + eta != 0 at {p}"))?;
            }
        }
        counted += 1;
    }

    // (c) determinant identity on localized pairs
    for n in 0..100 {
        let mut div = Divisor::zero();
        for p in 0..rng.random_range(1..=3) {
            div.add_point(&format!("y{p}"), rng.random_range(1..=4));
        }
        let local: LocalizedPair = if n % 2 == 0 {
            random_localized_pair(&mut rng, &div)
        } else {
            div.support()
                .map(|(p, m)| {
                    let len = m as usize + 1;
                    let mut g11: Vec<Scalar> = (0..len).map(|_| random_scalar(&mut rng)).collect();
                    g11.iter_mut().take(m as usize).for_each(|c| *c = Scalar::zero());
                    let g12 = (0..len).map(|_| random_scalar(&mut rng)).collect();
                    let g22 = (0..len).map(|_| random_scalar(&mut rng)).collect();
                    (p.to_string(), LocalEntries { g11, g12, g22 })
                })
                .collect()
        };
        for (p, m) in div.support() {
            let e = &local[p];
            let m = m as usize;
            let det: Vec<Scalar> =
                mul_trunc(&e.g11[..m], &e.g22[..m]).iter().zip(mul_trunc(&e.g12[..m], &e.g12[..m])).map(|(a, b)| a - &b).collect();
            let theta_sq: Vec<Scalar> = mul_trunc(&e.g12[..m], &e.g12[..m]).iter().map(|c| -c).collect();
            check(det == theta_sq, || format!("oracle: identity fails at {p}"))?;
        }
        let holds = det_identity_check(&local, &div).map_err(|e| e.to_string())?;
        check(holds, || format!("det identity reported false on pair {n}"))?;
    }
    Ok(format!("{verified} roots, {counted} divisors, 100 localized pairs"))
}

// 6. Stability engine regression.

/// Destabilizing lines of the fixtures, read off their construction:
/// P1 diagonal with both diagonal entries non-zero, P2 anti-diagonal on two
/// degree-2 lines, P3 with only `g22` non-zero.
fn fixture_lines(name: &str) -> Vec<(CondClass, i64)> {
    match name {
        "P1" => vec![(CondClass::C, 1), (CondClass::C, 3)],
        "P2" => vec![(CondClass::B, 2), (CondClass::B, 2)],
        "P3" => vec![(CondClass::A, 1), (CondClass::C, 3)],
        _ => unreachable!(),
    }
}

fn expected_status(lines: &[(CondClass, i64)], alpha: Rat, d: i64) -> (Status, BTreeSet<CondClass>) {
    if alpha > r(d, 2) {
        return (Status::EmptyRegime, BTreeSet::new());
    }
    let bound = |c: CondClass| match c {
        CondClass::A => alpha,
        CondClass::B => r(d, 2),
        CondClass::C => i(d) - alpha,
    };
    if lines.iter().any(|(c, e)| i(*e) > bound(*c)) {
        return (Status::Unstable, BTreeSet::new());
    }
    let tight: BTreeSet<CondClass> = lines.iter().filter(|(c, e)| i(*e) == bound(*c)).map(|(c, _)| *c).collect();
    if tight.is_empty() {
        (Status::Stable, tight)
    } else {
        (Status::StrictlySemistable, tight)
    }
}

/// Sample points: every critical value, three points inside each bounded
/// chamber, three points of the unbounded one, and one point above `d/2`.
fn sample_alphas(d: i64, d_u: i64) -> Vec<(Option<usize>, Rat)> {
    let dec = decomposition(d, d_u).expect("d < d_U");
    let mut out: Vec<(Option<usize>, Rat)> = dec.criticals.iter().map(|c| (None, *c)).collect();
    for (idx, ch) in dec.chambers.iter().enumerate() {
        let pts = match ch.lower {
            Some(lo) => [1, 2, 3].map(|k| lo + (ch.upper - lo) * r(k, 4)),
            None => [r(-1, 3), r(-5, 2), i(-40)].map(|x| ch.upper + x),
        };
        out.extend(pts.into_iter().map(|a| (Some(idx), a)));
    }
    out.push((None, r(d, 2) + r(1, 2)));
    out
}

fn verdict(p: &DecomposablePair, alpha: Rat) -> Result<StabilityVerdict, String> {
    alpha_verdict(p, alpha, &[]).map_err(|e| e.to_string())
}

fn criterion_6() -> Outcome {
    for (name, pair) in [("P1", fixtures::p1()), ("P2", fixtures::p2()), ("P3", fixtures::p3())] {
        let lines = fixture_lines(name);
        for (_, alpha) in sample_alphas(pair.d(), pair.d_u()) {
            let v = verdict(&pair, alpha)?;
            let (status, types) = expected_status(&lines, alpha, pair.d());
            check(v.status == status && v.semistable_types == types, || {
                format!("{name} at alpha={alpha}: {:?} {:?}, expected {status:?} {types:?}", v.status, v.semistable_types)
            })?;
            if status == Status::StrictlySemistable {
                check(v.polystable, || format!("{name} at alpha={alpha} should be polystable"))?;
            }
        }
    }
    let shapes = [(4, 9), (5, 9), (3, 8), (2, 7), (6, 10)];
    let mut audited = 0;
    for seed in 0..200u64 {
        let (d, d_u) = shapes[seed as usize % shapes.len()];
        let mut b = Builder::new(2, 6_000 + seed);
        let pair = random_decomposable(&mut b, d, d_u);
        let mut per_chamber: BTreeMap<usize, (Status, BTreeSet<CondClass>)> = BTreeMap::new();
        for (chamber, alpha) in sample_alphas(d, d_u) {
            if alpha >= r(d, 2) {
                continue;
            }
            let audit = destab_audit(&pair, alpha).map_err(|e| e.to_string())?;
            check(audit.is_empty(), || format!("seed {seed}, alpha={alpha}: {audit:?}"))?;
            audited += 1;
            let Some(chamber) = chamber else { continue };
            let v = verdict(&pair, alpha)?;
            let key = (v.status, v.semistable_types);
            let first = per_chamber.entry(chamber).or_insert_with(|| key.clone());
            check(*first == key, || format!("seed {seed}: verdict varies inside chamber {chamber}"))?;
        }
    }
    Ok(format!("3 fixture tables, {audited} audits on 200 pairs"))
}

// 7. Flip set equation.

fn criterion_7() -> Outcome {
    let family = random_family(2, 4, 9, 120, 0x5eed_0007);
    let mut seen_plus = 0;
    let mut seen_minus = 0;
    for ak in [i(0), i(1)] {
        let (below, above) = (ak - r(1, 2), ak + r(1, 2));
        let mut ss_plus = BTreeSet::new();
        let mut ss_minus = BTreeSet::new();
        let mut splus = BTreeSet::new();
        let mut sminus = BTreeSet::new();
        for (idx, m) in family.iter().enumerate() {
            let v_below = m.verdict(below).map_err(|e| e.to_string())?;
            let v_above = m.verdict(above).map_err(|e| e.to_string())?;
            if v_above.is_semistable() {
                ss_plus.insert(idx);
            }
            if v_below.is_semistable() {
                ss_minus.insert(idx);
            }
            match wall_side(m, ak).map_err(|e| e.to_string())? {
                WallSide::SPlus => {
                    // destabilized just below the wall by a type-A line of degree alpha_k
                    let w = v_below.witness.as_ref().ok_or("S+ member without witness")?;
                    check(w.class == CondClass::A && i(w.degree) == ak, || format!("S+ member {idx}: witness {w:?}"))?;
                    check(v_above.is_semistable(), || format!("S+ member {idx} unstable above"))?;
                    splus.insert(idx);
                }
                WallSide::SMinus { .. } => {
                    let w = v_above.witness.as_ref().ok_or("S- member without witness")?;
                    check(w.class == CondClass::C && i(4 - w.degree) == ak, || format!("S- member {idx}: witness {w:?}"))?;
                    check(matches!(m, PairModel::Decomposable(_)), || format!("S- member {idx} is an extension"))?;
                    check(v_below.is_semistable(), || format!("S- member {idx} unstable below"))?;
                    sminus.insert(idx);
                }
                _ => {}
            }
        }
        let lhs: BTreeSet<usize> = ss_plus.difference(&splus).copied().collect();
        let rhs: BTreeSet<usize> = ss_minus.difference(&sminus).copied().collect();
        check(lhs == rhs, || format!("alpha_k={ak}: {lhs:?} vs {rhs:?}"))?;
        let lib = flip_sets(&family, ak).map_err(|e| e.to_string())?;
        check(lib.plus_side == lhs && lib.minus_side == rhs, || format!("library flip sets differ at alpha_k={ak}"))?;
        seen_plus += splus.len();
        seen_minus += sminus.len();
    }
    check(seen_plus > 0 && seen_minus > 0, || format!("family too thin: {seen_plus} S+, {seen_minus} S-"))?;
    Ok(format!("{} models, {seen_plus} S+ and {seen_minus} S- memberships", family.len()))
}

// 8. Spectral classification.

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let names = ["a", "b", "c", "e"];
    let mut curve = CurveModel::new(2).map_err(|e| e.to_string())?;
    let mut aj: BTreeMap<&str, Vec<Rat>> = BTreeMap::new();
    for n in names {
        let coords: Vec<Rat> = (0..4).map(|_| r(rng.random_range(0..16), 16)).collect();
        curve.add_point(n, JacVector::new(coords.clone())).map_err(|e| e.to_string())?;
        aj.insert(n, coords);
    }
    let class_coords = |mults: &[i64], scale: Rat| -> Vec<Rat> {
        (0..4).map(|k| frac(names.iter().zip(mults).map(|(n, m)| aj[n][k] * *m * scale).sum())).collect()
    };
    let mut cases = 0;
    for m0 in 0..=6i64 {
        for m1 in 0..=6 - m0 {
            for m2 in 0..=6 - m0 - m1 {
                for m3 in 0..=6 - m0 - m1 - m2 {
                    let mults = [m0, m1, m2, m3];
                    let degree: i64 = mults.iter().sum();
                    let div = Divisor::from_points(names.iter().zip(mults).map(|(n, m)| (*n, m)));
                    for _ in 0..20 {
                        let torsion: Vec<Rat> = (0..4).map(|_| r(rng.random_range(0..2), 2)).collect();
                        let xi_coords: Vec<Rat> =
                            class_coords(&mults, r(1, 2)).iter().zip(&torsion).map(|(a, t)| frac(*a + *t)).collect();
                        let xi = PicClass::new(degree.div_euclid(2), JacVector::new(xi_coords.clone()));
                        let got = spectral_classify(&SpectralData { divisor: div.clone(), xi }, &curve);
                        if degree % 2 == 1 {
                            check(matches!(got, Err(SpectralError::NotInPX)), || format!("odd {div}: {got:?}"))?;
                            continue;
                        }
                        let got = got.map_err(|e| format!("{div}: {e}"))?;
                        let all_even = mults.iter().all(|m| m % 2 == 0);
                        let halves: Vec<i64> = mults.iter().map(|m| m / 2).collect();
                        let expected = if all_even && class_coords(&halves, i(1)) == xi_coords {
                            SpectralClass::Reducible
                        } else if mults.iter().all(|m| *m <= 1) {
                            SpectralClass::SmoothIrreducible
                        } else {
                            SpectralClass::SingularIrreducible
                        };
                        check(got == expected, || format!("{div}: {got:?}, expected {expected:?}"))?;
                        cases += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{cases} classifications"))
}

// 9. Higgs invariant arithmetic.

fn esp_from_pair(pair: &DecomposablePair) -> EspQuadruple {
    EspQuadruple {
        n: 2,
        curve: pair.curve.clone(),
        bundle: BundleModel::Split { l1: pair.l1.clone(), l2: pair.l2.clone() },
        l: &pair.u - &pair.curve.canonical(),
        beta: SymEntries::default(),
        gamma: SymEntries { g11: pair.g11.clone(), g12: pair.g12.clone(), g22: pair.g22.clone() },
    }
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in [2, 4, 6] {
        for d1 in -15..=15 {
            for d2 in -7..=7 {
                let inv = project_invariants(d1, d2, n).map_err(|e| e.to_string())?;
                check(inv.a == d1 - n * d2 / 2 && inv.b as i64 == d2.rem_euclid(2), || format!("(a,b) of ({d1},{d2})"))?;
                let (e1, e2) = dualize(d1, d2, n);
                check(dualize(e1, e2, n) == (d1, d2), || format!("dualize not an involution at ({d1},{d2})"))?;
                let dual = project_invariants(e1, e2, n).map_err(|e| e.to_string())?;
                check((dual.a, dual.b) == (-inv.a, inv.b), || format!("dual invariants at ({d1},{d2})"))?;
                let nm = normalize(d1, d2, n).map_err(|e| e.to_string())?;
                let after = project_invariants(nm.d1, nm.d2, n).map_err(|e| e.to_string())?;
                check((after.a, after.b) == (inv.a, inv.b) && (0..=1).contains(&nm.d2), || {
                    format!("normalize at ({d1},{d2},n={n})")
                })?;
            }
        }
    }
    for _ in 0..1000 {
        let n = 2 * rng.random_range(1..=4);
        let g = rng.random_range(2..=8);
        let d2 = rng.random_range(-10..=10);
        let d1 = rng.random_range(-40..=40);
        let by_degree = n * (1 - g) + n * d2 / 2 <= d1 && d1 <= n * (g - 1) + n * d2 / 2;
        let by_toledo = (d1 - n * d2 / 2i64).abs() <= n * (g - 1);
        check(by_degree == by_toledo, || format!("oracle forms disagree at ({d1},{d2},{n},{g})"))?;
        let mw = milnor_wood(d1, d2, n, g).map_err(|e| e.to_string())?;
        check(mw.valid == by_degree, || format!("Milnor-Wood at ({d1},{d2},{n},{g})"))?;
    }
    for a in -30..=30 {
        for b in 0..2u8 {
            let inv = so23_from_ab(a, b);
            check(so23_to_ab(inv) == (a, b), || format!("(a,b)=({a},{b}) does not round-trip"))?;
            check(so23_lifts(inv) == (b == 0), || format!("lifting at ({a},{b})"))?;
            let w = So23Invariants { a, w: b };
            check(so23_from_ab(a, so23_to_ab(w).1) == w, || format!("(a,w)=({a},{b}) does not round-trip"))?;
        }
    }
    let mut agree = 0;
    for seed in 0..100u64 {
        let mut b = Builder::new(2, 9_000 + seed);
        let d = 2 + seed as i64 % 3;
        let pair = random_decomposable(&mut b, d, d + 1 + seed as i64 % 3);
        let q = esp_from_pair(&pair);
        let esp = esp_semistable(&q).map_err(|e| e.to_string())?;
        let direct = verdict(&pair, i(0))?;
        check(esp.status == direct.status, || format!("seed {seed}: {:?} vs {:?}", esp.status, direct.status))?;
        let lines: Vec<LineData> = auto_candidates(&pair)
            .map_err(|e| e.to_string())?
            .into_iter()
            .filter_map(|c| match c {
                Candidate::Graph { over, scalar: GraphScalar::Isotropic(_), .. } => {
                    Some(LineData { degree: pair.summand(over).degree, isotropic: true, annihilated: false })
                }
                _ => None,
            })
            .collect();
        let filtered = esp_filtration_verdict(&q, &lines).map_err(|e| e.to_string())?;
        check(filtered.is_semistable() == esp.is_semistable(), || format!("seed {seed}: filtration route disagrees"))?;
        agree += 1;
    }
    Ok(format!("exhaustive dictionaries, 1000 Milnor-Wood tuples, {agree} quadruples"))
}

// 10. Component tables.

fn criterion_10() -> Outcome {
    for g in 2..=6i64 {
        let table = component_table(g).map_err(|e| e.to_string())?;
        let top = 2 * g - 2;
        let mut counted = 0;
        for a in -top..=top {
            for w in 0..2u8 {
                check(table.rows.iter().any(|row| row.a == a && row.w == w), || format!("g={g}: row ({a},{w}) missing"))?;
            }
        }
        for row in &table.rows {
            let expected = match row.a.abs() {
                x if x > top => ComponentVerdict::Empty,
                x if x == 0 || x == top => ComponentVerdict::OutOfScope,
                _ => ComponentVerdict::Connected(1),
            };
            check(row.verdict == expected, || format!("g={g}, (a,w)=({},{}): {:?}", row.a, row.w, row.verdict))?;
            if let ComponentVerdict::Connected(k) = row.verdict {
                counted += k;
            }
        }
        let formula = 4 * (2 * g - 3) as u32;
        check(counted == formula && table.in_range_total == formula, || {
            format!("g={g}: counted {counted}, table {}, formula {formula}", table.in_range_total)
        })?;
    }
    let totals: Vec<u32> = (2..=4).map(|g| component_table(g).map(|t| t.in_range_total).unwrap_or(0)).collect();
    check(totals == [4, 12, 20], || format!("totals {totals:?}"))?;
    Ok("g = 2..6".into())
}

// 11. CLI determinism and golden files.

fn run_cli(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_quadpair"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env_remove("QUADPAIR_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    check(out.status.success(), || format!("{args:?} exited with {:?}", out.status.code()))?;
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

/// Independent cell rule for the ASCII diagram.
fn diagram_cell(d: i64, d_u: i64, alpha: Rat) -> char {
    if d > d_u {
        '#'
    } else if d == d_u {
        '='
    } else if alpha > r(d, 2) {
        ' '
    } else if alpha == r(d, 2) {
        '/'
    } else if alpha == i(d - d_u.div_euclid(2)) {
        '|'
    } else if alpha < i(d) - r(d_u, 2) {
        '.'
    } else {
        'w'
    }
}

fn criterion_11() -> Outcome {
    let args = ["region-diagram", "--dU", "9", "--d-range", "0:10", "--alpha-range=-2:5", "--format", "ascii"];
    let first = run_cli(&args)?;
    check(first == run_cli(&args)?, || "region diagram is not deterministic".into())?;
    let golden = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/region_dU9_d0-10.txt"))
        .map_err(|e| e.to_string())?;
    check(first == golden, || "region diagram differs from golden file".into())?;
    let rows: Vec<&str> = golden
        .lines()
        .filter(|l| l.split_once(" |").is_some_and(|(label, _)| label.trim().parse::<i64>().is_ok()))
        .collect();
    check(rows.len() == 11, || format!("{} diagram rows", rows.len()))?;
    for line in rows {
        let (label, cells) = line.split_once(" |").ok_or("bad row")?;
        let d: i64 = label.trim().parse().map_err(|_| format!("bad row label {label:?}"))?;
        let cells: Vec<char> = cells.trim_end_matches('|').chars().collect();
        check(cells.len() == 15, || format!("row {d}: {} cells", cells.len()))?;
        for (k, c) in cells.iter().enumerate() {
            let alpha = i(-2) + r(k as i64, 2);
            let want = diagram_cell(d, 9, alpha);
            check(*c == want, || format!("cell d={d}, alpha={alpha}: {c:?}, expected {want:?}"))?;
        }
    }

    let chambers: serde_json::Value =
        serde_json::from_str(&run_cli(&["chambers", "--g", "2", "--dU", "9", "--d", "4", "--json"])?).map_err(|e| e.to_string())?;
    let p = &chambers["payload"];
    check(p["criticals"] == serde_json::json!([0, 1, 2]) && p["alphaMin"] == 0 && p["alphaMax"] == 2, || {
        format!("chambers example: {p}")
    })?;
    let table = run_cli(&["so23", "components", "--g", "2"])?;
    let connected = table.lines().filter(|l| l.ends_with("Connected(1)")).count();
    check(connected == 4, || format!("so23 example: {connected} Connected rows"))?;
    let sqrt: serde_json::Value =
        serde_json::from_str(&run_cli(&["jets", "sqrt", "--coeffs", "1,1,0", "--len", "3", "--json"])?).map_err(|e| e.to_string())?;
    let roots = sqrt["payload"]["roots"].as_array().map_or(0, Vec::len);
    check(roots == 2 && sqrt["payload"]["verified"] == true, || format!("jets example: {}", sqrt["payload"]))?;
    Ok("golden diagram and 3 documented examples".into())
}

struct Criterion {
    id: u8,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, name: "critical values match destabilizer enumeration", budget: Some(Duration::from_secs(1)), run: criterion_1 },
    Criterion { id: 2, name: "codimension positivity", budget: Some(Duration::from_secs(1)), run: criterion_2 },
    Criterion { id: 3, name: "dimension identities", budget: None, run: criterion_3 },
    Criterion { id: 4, name: "square-root counts", budget: Some(Duration::from_secs(5)), run: criterion_4 },
    Criterion { id: 5, name: "jet engine", budget: Some(Duration::from_secs(10)), run: criterion_5 },
    Criterion { id: 6, name: "stability engine regression", budget: Some(Duration::from_secs(30)), run: criterion_6 },
    Criterion { id: 7, name: "flip set equation", budget: None, run: criterion_7 },
    Criterion { id: 8, name: "spectral classification", budget: Some(Duration::from_secs(5)), run: criterion_8 },
    Criterion { id: 9, name: "Higgs invariant arithmetic", budget: None, run: criterion_9 },
    Criterion { id: 10, name: "component tables", budget: None, run: criterion_10 },
    Criterion { id: 11, name: "CLI determinism and golden files", budget: None, run: criterion_11 },
];

fn main() -> ExitCode {
    let mut failed = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let mut result = (c.run)();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(budget)) = (&result, c.budget) {
            if elapsed > budget {
                result = Err(format!("took {elapsed:.2?}, budget {budget:?}"));
            }
        }
        match result {
            Ok(detail) => println!("PASS  {:>2}  {:<48} {detail} ({elapsed:.2?})", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2}  {:<48} {why} ({elapsed:.2?})", c.id, c.name);
            }
        }
    }
    println!("{}/{} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
