//! Seeded construction of curves, divisors and pairs with consistent classes.
//!
//! Points get random dyadic Abel-Jacobi coordinates. A divisor of a prescribed
//! class is built from random points plus one "solver" point placed where the
//! class forces it.

use crate::exact::rat;
use crate::jets::{LocalEntries, LocalizedPair, Scalar};
use crate::pairs::{DecomposablePair, ExtensionPair, PairModel};
use crate::picard::{class_of_divisor, CurveModel, Divisor, JacVector, PicClass, SectionModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Denominator of generated Abel-Jacobi coordinates.
const AJ_DENOM: i64 = 16;

pub struct Builder {
    curve: CurveModel,
    rng: ChaCha8Rng,
    next: usize,
}

impl Builder {
    pub fn new(genus: usize, seed: u64) -> Self {
        let curve = CurveModel::new(genus).expect("genus >= 1");
        Builder { curve, rng: ChaCha8Rng::seed_from_u64(seed), next: 0 }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn curve(&self) -> &CurveModel {
        &self.curve
    }

    pub fn finish(self) -> CurveModel {
        self.curve
    }

    fn random_jac(&mut self) -> JacVector {
        let coords = (0..2 * self.curve.genus).map(|_| rat(self.rng.random_range(0..AJ_DENOM), AJ_DENOM)).collect();
        JacVector::new(coords)
    }

    fn point_at(&mut self, jac: JacVector) -> String {
        let id = format!("p{}", self.next);
        self.next += 1;
        self.curve.add_point(id.clone(), jac).expect("coordinate count matches genus");
        id
    }

    /// Registers a new point with random coordinates.
    pub fn point(&mut self) -> String {
        let jac = self.random_jac();
        self.point_at(jac)
    }

    pub fn random_class(&mut self, degree: i64) -> PicClass {
        PicClass::new(degree, self.random_jac())
    }

    /// Effective divisor of the given degree on fresh points; multiplicities
    /// above one occur with probability `1/4` per point after the first.
    pub fn random_divisor(&mut self, degree: i64) -> Divisor {
        let mut div = Divisor::zero();
        let mut last: Option<String> = None;
        for _ in 0..degree {
            let id = match &last {
                Some(p) if self.rng.random_ratio(1, 4) => p.clone(),
                _ => self.point(),
            };
            div.add_point(&id, 1);
            last = Some(id);
        }
        div
    }

    /// Reduced effective divisor of the given degree on fresh points.
    pub fn reduced_divisor(&mut self, degree: i64) -> Divisor {
        let mut div = Divisor::zero();
        for _ in 0..degree {
            let id = self.point();
            div.add_point(&id, 1);
        }
        div
    }

    /// Effective divisor in `target`, or `None` when the class has no sections
    /// in this model (negative degree, or non-trivial of degree 0).
    pub fn divisor_in_class(&mut self, target: &PicClass) -> Option<Divisor> {
        match target.degree {
            d if d < 0 => None,
            0 => target.is_trivial().then(Divisor::zero),
            d => {
                let mut div = self.random_divisor(d - 1);
                let rest = class_of_divisor(&div, &self.curve).expect("registered points");
                let missing = target - &rest;
                let solver = self.point_at(missing.jac);
                div.add_point(&solver, 1);
                Some(div)
            }
        }
    }

    fn class(&self, div: &Divisor) -> PicClass {
        class_of_divisor(div, &self.curve).expect("registered points")
    }
}

/// Shared data behind the fixtures `P1`, its theta variants and `P3`.
struct P1Data {
    curve: CurveModel,
    u: PicClass,
    l1: PicClass,
    l2: PicClass,
    g11: Divisor,
    g22: Divisor,
    g12_containing: Divisor,
    g12_away: Divisor,
}

fn p1_data() -> P1Data {
    let mut b = Builder::new(2, 0x5eed_0001);
    let l1 = b.random_class(1);
    let e = b.reduced_divisor(2);
    let l2 = &l1 + &b.class(&e);
    let g22 = b.reduced_divisor(3);
    let u = &l2.times(2) + &b.class(&g22);
    let g11 = &g22 + &e.scale(2);
    let g12_containing = &g22 + &e;
    let g12_away = b.divisor_in_class(&(&(&u - &l1) - &l2)).expect("degree 5");
    P1Data { curve: b.finish(), u, l1, l2, g11, g22, g12_containing, g12_away }
}

fn p1_with(g12: SectionModel) -> DecomposablePair {
    let p = p1_data();
    DecomposablePair::new(
        p.curve,
        p.u,
        p.l1,
        p.l2,
        SectionModel::vanishing(p.g11),
        g12,
        SectionModel::vanishing(p.g22),
    )
    .expect("consistent fixture")
}

/// Diagonal pair, `g = 2`, `d = 4`, `d_U = 9`, degrees `(1, 3)`.
pub fn p1() -> DecomposablePair {
    p1_with(SectionModel::Zero)
}

/// `P1` with an off-diagonal entry vanishing along `div(g22)`.
pub fn p1_theta_containing() -> DecomposablePair {
    let g12 = p1_data().g12_containing;
    p1_with(SectionModel::vanishing(g12))
}

/// `P1` with an off-diagonal entry supported away from `div(g22)`.
pub fn p1_theta_away() -> DecomposablePair {
    let g12 = p1_data().g12_away;
    p1_with(SectionModel::vanishing(g12))
}

/// Anti-diagonal pair on two non-isomorphic degree-2 summands.
pub fn p2() -> DecomposablePair {
    let mut b = Builder::new(2, 0x5eed_0002);
    let l1 = b.random_class(2);
    let mut l2 = b.random_class(2);
    while l2 == l1 {
        l2 = b.random_class(2);
    }
    let g12 = b.reduced_divisor(5);
    let u = &(&l1 + &l2) + &b.class(&g12);
    let curve = b.finish();
    DecomposablePair::new(curve, u, l1, l2, SectionModel::Zero, SectionModel::vanishing(g12), SectionModel::Zero)
        .expect("consistent fixture")
}

/// Pair with only `g22` non-zero: `L1` is isotropic of type A.
pub fn p3() -> DecomposablePair {
    let p = p1_data();
    DecomposablePair::new(
        p.curve,
        p.u,
        p.l1,
        p.l2,
        SectionModel::Zero,
        SectionModel::Zero,
        SectionModel::vanishing(p.g22),
    )
    .expect("consistent fixture")
}

/// Non-split extension with `deg L = 1`, `deg M = 3`, `d_U = 9`.
pub fn extension_example() -> ExtensionPair {
    let mut b = Builder::new(2, 0x5eed_0003);
    let sub = b.random_class(1);
    let quot = b.random_class(3);
    let gq = b.reduced_divisor(3);
    let u = &quot.times(2) + &b.class(&gq);
    ExtensionPair::new(b.finish(), u, sub, quot, SectionModel::vanishing(gq), true).expect("consistent fixture")
}

/// Shape of a random decomposable pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    DiagonalIndependent,
    DiagonalCorrelated,
    AntiDiagonal,
    OnlyFirst,
    OnlySecond,
    CrossAndFirstCorrelated,
    CrossAndSecondCorrelated,
    CrossAndFirst,
    Full,
}

const SHAPES: [Shape; 9] = [
    Shape::DiagonalIndependent,
    Shape::DiagonalCorrelated,
    Shape::AntiDiagonal,
    Shape::OnlyFirst,
    Shape::OnlySecond,
    Shape::CrossAndFirstCorrelated,
    Shape::CrossAndSecondCorrelated,
    Shape::CrossAndFirst,
    Shape::Full,
];

/// Random decomposable pair of total degree `d` with `deg U = d_u`, mixing
/// shapes that produce isotropic graph subbundles. `None` if the sampled
/// shape has no sections on this model.
pub fn try_random_decomposable(b: &mut Builder, d: i64, d_u: i64) -> Option<DecomposablePair> {
    let lo = d - d_u.div_euclid(2);
    let deg1 = b.rng().random_range(lo.min(d / 2)..=d / 2);
    let shape = SHAPES[b.rng().random_range(0..SHAPES.len())];
    // L2 = L1 + class(E) with deg L2 >= deg L1
    let l1 = b.random_class(deg1);
    let e = b.random_divisor(d - 2 * deg1);
    let l2 = &l1 + &b.class(&e);
    let (t22_deg, t12_deg, t11_deg) = (d_u - 2 * (d - deg1), d_u - d, d_u - 2 * deg1);
    let (mut g11, mut g12, mut g22) = (None, None, None);
    let u = match shape {
        Shape::DiagonalIndependent | Shape::DiagonalCorrelated | Shape::OnlySecond => {
            let d22 = (t22_deg >= 0).then(|| b.random_divisor(t22_deg))?;
            let u = &l2.times(2) + &b.class(&d22);
            g11 = match shape {
                Shape::DiagonalIndependent => Some(b.divisor_in_class(&(&u - &l1.times(2)))?),
                Shape::DiagonalCorrelated => Some(&d22 + &e.scale(2)),
                _ => None,
            };
            g22 = Some(d22);
            u
        }
        Shape::OnlyFirst => {
            let d11 = b.random_divisor(t11_deg);
            let u = &l1.times(2) + &b.class(&d11);
            g11 = Some(d11);
            u
        }
        Shape::AntiDiagonal | Shape::CrossAndFirstCorrelated | Shape::CrossAndFirst => {
            let d12 = b.random_divisor(t12_deg);
            let u = &(&l1 + &l2) + &b.class(&d12);
            g11 = match shape {
                Shape::CrossAndFirstCorrelated => Some(&d12 + &e),
                Shape::CrossAndFirst => Some(b.divisor_in_class(&(&u - &l1.times(2)))?),
                _ => None,
            };
            g12 = Some(d12);
            u
        }
        Shape::CrossAndSecondCorrelated => {
            let d22 = (t22_deg >= 0).then(|| b.random_divisor(t22_deg))?;
            let u = &l2.times(2) + &b.class(&d22);
            g12 = Some(&d22 + &e);
            g22 = Some(d22);
            u
        }
        Shape::Full => {
            let d22 = (t22_deg >= 0).then(|| b.random_divisor(t22_deg))?;
            let u = &l2.times(2) + &b.class(&d22);
            g12 = Some(b.divisor_in_class(&(&(&u - &l1) - &l2))?);
            g11 = Some(b.divisor_in_class(&(&u - &l1.times(2)))?);
            g22 = Some(d22);
            u
        }
    };
    let section = |d: Option<Divisor>| d.map_or(SectionModel::Zero, SectionModel::vanishing);
    let (mut l1, mut l2, mut s11, s12, mut s22) = (l1, l2, section(g11), section(g12), section(g22));
    if b.rng().random_bool(0.5) {
        std::mem::swap(&mut l1, &mut l2);
        std::mem::swap(&mut s11, &mut s22);
    }
    DecomposablePair::new(b.curve().clone(), u, l1, l2, s11, s12, s22).ok()
}

pub fn random_decomposable(b: &mut Builder, d: i64, d_u: i64) -> DecomposablePair {
    loop {
        if let Some(p) = try_random_decomposable(b, d, d_u) {
            return p;
        }
    }
}

/// Random non-split extension with `deg L` in `[d - d_U/2, d/2]`.
pub fn random_extension(b: &mut Builder, d: i64, d_u: i64) -> ExtensionPair {
    let lo = d - d_u.div_euclid(2);
    let a = b.rng().random_range(lo.min(d / 2)..=d / 2);
    let sub = b.random_class(a);
    let quot = b.random_class(d - a);
    let gq = b.random_divisor(d_u - 2 * (d - a));
    let u = &quot.times(2) + &b.class(&gq);
    ExtensionPair::new(b.curve().clone(), u, sub, quot, SectionModel::vanishing(gq), true)
        .expect("classes consistent by construction")
}

/// Family mixing decomposable and extension models, one fresh builder per member.
pub fn random_family(genus: usize, d: i64, d_u: i64, size: usize, seed: u64) -> Vec<PairModel> {
    (0..size)
        .map(|i| {
            let mut b = Builder::new(genus, seed.wrapping_mul(1_000_003).wrapping_add(i as u64));
            if i % 4 == 3 {
                PairModel::Extension(random_extension(&mut b, d, d_u))
            } else {
                PairModel::Decomposable(random_decomposable(&mut b, d, d_u))
            }
        })
        .collect()
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::ratio(rng.random_range(-9..=9), rng.random_range(1..=4))
}

fn random_series(rng: &mut ChaCha8Rng, len: usize, vanishing: usize) -> Vec<Scalar> {
    (0..len).map(|i| if i < vanishing { Scalar::zero() } else { random_scalar(rng) }).collect()
}

/// Local entries at the points of `div` with `g11` vanishing to order `div(p)`.
pub fn random_localized_pair(rng: &mut ChaCha8Rng, div: &Divisor) -> LocalizedPair {
    div.support()
        .map(|(p, m)| {
            let len = m as usize + 2;
            let entries = LocalEntries {
                g11: random_series(rng, len, m as usize),
                g12: random_series(rng, len, 0),
                g22: random_series(rng, len, 0),
            };
            (p.to_string(), entries)
        })
        .collect()
}
