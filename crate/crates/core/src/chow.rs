//! Künneth-basis homology classes of `G`-orbit closures in `(ℙᵈ)ⁿ`.
//!
//! The class of a `(d+1)`-cycle is recorded by one integer per weight vector
//! `m = (m₁, …, mₙ)` with `Σ mᵢ = d + 1` and `0 ≤ mᵢ ≤ d`. For a
//! full-dimensional orbit the coefficient of `m` is 1 exactly when, for
//! general linear subspaces `Lᵢ` of codimension `mᵢ`, a unique `g ∈ G`
//! moves every `pᵢ` into `Lᵢ`. With `g = (w, u)` each incidence condition
//! `c₀ + Σⱼ cⱼ (w·pᵢⱼ + uⱼ) = 0` is linear in the unknowns, so each
//! coefficient is decided by one exact `(d+1)×(d+1)` solve.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contraction::{configuration_cycle, support_profile, ConfigurationCycle};
use crate::error::{Error, Result};
use crate::exact::AffinePoint;
use crate::group::Configuration;
use crate::trees::StableTree;

pub const DEFAULT_TRIALS: usize = 3;
/// Random linear-form coefficients are drawn from `[-R, R]` with this initial `R`.
pub const INITIAL_COEFF_RANGE: i128 = 1_000_000;
/// Each disagreement multiplies the range by this factor.
pub const ESCALATION_FACTOR: i128 = 1_000;
pub const MAX_ESCALATIONS: usize = 5;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(pub Vec<u32>);

impl WeightVector {
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }
}

/// All weight vectors for `(d, n)`, in lexicographic order.
pub fn weight_vectors(d: usize, n: usize) -> Vec<WeightVector> {
    fn rec(d: u32, remaining: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<WeightVector>) {
        if slots == 0 {
            if remaining == 0 {
                out.push(WeightVector(prefix.clone()));
            }
            return;
        }
        // the remaining slots can absorb at most d each
        for m in 0..=remaining.min(d) {
            if remaining - m > d * (slots as u32 - 1) {
                continue;
            }
            prefix.push(m);
            rec(d, remaining - m, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(d as u32, d as u32 + 1, n, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Integer coefficients on the Künneth basis, one entry per weight vector.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct KunnethClass {
    coeffs: BTreeMap<WeightVector, i64>,
}

#[derive(Serialize, Deserialize)]
struct ClassEntry {
    m: Vec<u32>,
    coeff: i64,
}

impl Serialize for KunnethClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<ClassEntry> =
            self.coeffs.iter().map(|(m, &coeff)| ClassEntry { m: m.0.clone(), coeff }).collect();
        entries.serialize(s)
    }
}

impl<'de> Deserialize<'de> for KunnethClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<ClassEntry>::deserialize(d)?;
        Ok(KunnethClass { coeffs: entries.into_iter().map(|e| (WeightVector(e.m), e.coeff)).collect() })
    }
}

impl KunnethClass {
    pub fn zero(d: usize, n: usize) -> Self {
        KunnethClass { coeffs: weight_vectors(d, n).into_iter().map(|m| (m, 0)).collect() }
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (WeightVector, i64)>) -> Self {
        KunnethClass { coeffs: entries.into_iter().collect() }
    }

    pub fn coeff(&self, m: &[u32]) -> Option<i64> {
        self.coeffs.get(&WeightVector(m.to_vec())).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&WeightVector, i64)> {
        self.coeffs.iter().map(|(m, &c)| (m, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_all_ones(&self) -> bool {
        !self.coeffs.is_empty() && self.coeffs.values().all(|&c| c == 1)
    }

    pub fn add(&self, other: &KunnethClass) -> KunnethClass {
        let mut coeffs = self.coeffs.clone();
        for (m, c) in &other.coeffs {
            *coeffs.entry(m.clone()).or_default() += c;
        }
        KunnethClass { coeffs }
    }
}

/// Class together with how many times the coefficient range had to be
/// escalated before all trials agreed (maximum over weight vectors).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassReport {
    pub class: KunnethClass,
    pub escalations: usize,
}

fn derive_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer over (seed, index)
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// An affine point with denominators cleared: `p = num / den`.
struct ClearedPoint {
    num: Vec<BigInt>,
    den: BigInt,
    small: Option<(Vec<i128>, i128)>,
}

/// Entries below this bound keep every 4×4 Bareiss step inside `i128` for
/// the initial coefficient range; larger inputs take the checked path.
const SMALL: i128 = 1 << 40;

impl ClearedPoint {
    fn new(p: &AffinePoint) -> Self {
        let den = p.coords().iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let num: Vec<BigInt> = p.coords().iter().map(|x| x.numer() * (&den / x.denom())).collect();
        let fits = |x: &BigInt| x.to_i128().filter(|v| v.abs() < SMALL);
        let small = num.iter().map(fits).collect::<Option<Vec<i128>>>().zip(fits(&den));
        ClearedPoint { num, den, small }
    }
}

/// Determinant of a square integer matrix by fraction-free elimination;
/// `None` on `i128` overflow.
fn bareiss_i128(mut m: Vec<Vec<i128>>) -> Option<i128> {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Some(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].checked_mul(m[k][k])?;
                let b = m[i][k].checked_mul(m[k][j])?;
                m[i][j] = a.checked_sub(b)? / prev;
            }
        }
        prev = m[k][k];
    }
    Some(sign * m[n - 1][n - 1])
}

fn bareiss_big(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// `mᵢ` random linear forms `(c₀, …, c_d)` for each label `i`, tagged by label index.
fn draw_forms(m: &WeightVector, d: usize, range: i128, rng: &mut ChaCha8Rng) -> Vec<(Vec<i128>, usize)> {
    let mut forms = Vec::with_capacity(d + 1);
    for (i, &mi) in m.0.iter().enumerate() {
        for _ in 0..mi {
            let c: Vec<i128> = (0..=d).map(|_| rng.gen_range(-range..=range)).collect();
            forms.push((c, i));
        }
    }
    forms
}

/// Rows `[Σⱼ cⱼ·pᵢⱼ, c₁, …, c_d | −c₀]` scaled by the denominator of `pᵢ`.
fn system_small(points: &[&ClearedPoint], forms: &[(Vec<i128>, usize)]) -> Option<(Vec<Vec<i128>>, Vec<i128>)> {
    let mut a = Vec::with_capacity(forms.len());
    let mut b = Vec::with_capacity(forms.len());
    for (c, i) in forms {
        let (num, den) = points[*i].small.as_ref()?;
        let mut first = 0i128;
        for (cj, x) in c[1..].iter().zip(num) {
            first = first.checked_add(cj.checked_mul(*x)?)?;
        }
        let mut row = vec![first];
        for cj in &c[1..] {
            row.push(cj.checked_mul(*den)?);
        }
        a.push(row);
        b.push(c[0].checked_mul(*den)?.checked_neg()?);
    }
    Some((a, b))
}

fn system_big(points: &[&ClearedPoint], forms: &[(Vec<i128>, usize)]) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut a = Vec::with_capacity(forms.len());
    let mut b = Vec::with_capacity(forms.len());
    for (c, i) in forms {
        let p = points[*i];
        let c: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        let mut row = vec![c[1..].iter().zip(&p.num).map(|(cj, x)| cj * x).sum::<BigInt>()];
        row.extend(c[1..].iter().map(|cj| cj * &p.den));
        a.push(row);
        b.push(-(&c[0] * &p.den));
    }
    (a, b)
}

fn with_first_column<T: Clone>(a: &[Vec<T>], b: &[T]) -> Vec<Vec<T>> {
    a.iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r[0] = x.clone();
            r
        })
        .collect()
}

/// One random incidence trial: does a unique `(w, u)` with `w ≠ 0` move
/// every point into its random linear subspace? By Cramer's rule this is
/// `det A ≠ 0` and `det A₀ ≠ 0`, with `A₀` the matrix whose `w`-column is
/// replaced by the right-hand side.
fn incidence_trial(points: &[&ClearedPoint], m: &WeightVector, d: usize, range: i128, rng: &mut ChaCha8Rng) -> bool {
    let forms = draw_forms(m, d, range, rng);
    if let Some((a, b)) = system_small(points, &forms) {
        let a0 = with_first_column(&a, &b);
        if let (Some(det), Some(det0)) = (bareiss_i128(a), bareiss_i128(a0)) {
            return det != 0 && det0 != 0;
        }
    }
    let (a, b) = system_big(points, &forms);
    let a0 = with_first_column(&a, &b);
    !bareiss_big(a).is_zero() && !bareiss_big(a0).is_zero()
}

fn coefficient(config: &Configuration, cleared: &[Option<ClearedPoint>], m: &WeightVector, trials: usize, seed: u64) -> Result<(i64, usize)> {
    // a positive weight on a point of H kills the coefficient: G fixes it
    if cleared.iter().zip(&m.0).any(|(p, &mi)| mi > 0 && p.is_none()) {
        return Ok((0, 0));
    }
    let placeholder = cleared.iter().flatten().next().expect("full-dimensional");
    // weight-zero points never contribute a row
    let points: Vec<&ClearedPoint> = cleared.iter().map(|p| p.as_ref().unwrap_or(placeholder)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut range = INITIAL_COEFF_RANGE;
    for escalation in 0..=MAX_ESCALATIONS {
        let verdicts: Vec<bool> =
            (0..trials.max(1)).map(|_| incidence_trial(&points, m, config.d(), range, &mut rng)).collect();
        if verdicts.iter().all(|&v| v == verdicts[0]) {
            return Ok((i64::from(verdicts[0]), escalation));
        }
        range *= ESCALATION_FACTOR;
    }
    Err(Error::GenericityFailure(m.0.clone()))
}

/// Randomized exact incidence computation of `[closure(G·c)]`.
pub fn orbit_class(c: &Configuration, trials: usize, seed: u64) -> Result<KunnethClass> {
    orbit_class_report(c, trials, seed).map(|r| r.class)
}

pub fn orbit_class_report(c: &Configuration, trials: usize, seed: u64) -> Result<ClassReport> {
    if !c.is_full_dimensional() {
        return Err(Error::NotFullDimensional);
    }
    let weights = weight_vectors(c.d(), c.n());
    let cleared: Vec<Option<ClearedPoint>> = c.points().iter().map(|p| p.as_affine().map(ClearedPoint::new)).collect();
    let results: Vec<(WeightVector, i64, usize)> = weights
        .into_par_iter()
        .enumerate()
        .map(|(i, m)| {
            let (coeff, esc) = coefficient(c, &cleared, &m, trials, derive_seed(seed, i as u64))?;
            Ok((m, coeff, esc))
        })
        .collect::<Result<Vec<_>>>()?;
    let escalations = results.iter().map(|r| r.2).max().unwrap_or(0);
    let class = KunnethClass::from_entries(results.into_iter().map(|(m, c, _)| (m, c)));
    debug_assert!(class.iter().all(|(_, c)| c == 0 || c == 1));
    Ok(ClassReport { class, escalations })
}

/// Closed-form classifier: the coefficient of `m` is 1 iff no weight sits on
/// `H` and the weights collected at distinct affine support points are
/// positive on at least two of them.
pub fn orbit_class_deterministic(c: &Configuration) -> Result<KunnethClass> {
    if !c.is_full_dimensional() {
        return Err(Error::NotFullDimensional);
    }
    let profile = support_profile(c);
    let entries = weight_vectors(c.d(), c.n()).into_iter().map(|m| {
        let on_h: u32 = profile.infinity.iter().map(|&l| m.0[l - 1]).sum();
        let loaded = profile
            .affine
            .iter()
            .filter(|(_, group)| group.iter().map(|&l| m.0[l - 1]).sum::<u32>() > 0)
            .count();
        let coeff = i64::from(on_h == 0 && loaded >= 2);
        (m, coeff)
    });
    Ok(KunnethClass::from_entries(entries))
}

/// Sum of the orbit classes of the members.
pub fn cycle_class(z: &ConfigurationCycle, trials: usize, seed: u64) -> Result<KunnethClass> {
    cycle_class_report(z, trials, seed).map(|r| r.class)
}

pub fn cycle_class_report(z: &ConfigurationCycle, trials: usize, seed: u64) -> Result<ClassReport> {
    let first = z.members.first().ok_or(Error::NotFullDimensional)?;
    let mut total = KunnethClass::zero(first.config.d(), first.config.n());
    let mut escalations = 0;
    for (i, member) in z.members.iter().enumerate() {
        let r = orbit_class_report(&member.config, trials, derive_seed(seed, 1_000_003 + i as u64))?;
        escalations = escalations.max(r.escalations);
        total = total.add(&r.class);
    }
    Ok(ClassReport { class: total, escalations })
}

/// Class of the configuration cycle of `tree`.
pub fn tree_class(tree: &StableTree, trials: usize, seed: u64) -> Result<KunnethClass> {
    cycle_class(&configuration_cycle(tree)?, trials, seed)
}

/// Whether the two trees have different configuration cycles, compared as
/// multisets of `G`-orbits.
pub fn separates_boundary(t1: &StableTree, t2: &StableTree) -> Result<bool> {
    if (t1.d, t1.n) != (t2.d, t2.n) {
        return Err(Error::ShapeMismatch { left: (t1.d, t1.n), right: (t2.d, t2.n) });
    }
    let a = configuration_cycle(t1)?.orbit_multiset()?;
    let b = configuration_cycle(t2)?.orbit_multiset()?;
    Ok(a != b)
}
