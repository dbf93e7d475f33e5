//! Limits of one-parameter families `pᵢ(t)` of distinct affine configurations.
//!
//! The limit tree is built by recursive cluster-and-rescale: at a node with
//! label set `S` and base `b(t)`, rescale by `x ↦ (x − b(t))/tᵏ` with `k` the
//! smallest pairwise valuation in `S`; labels whose limits coincide form the
//! clusters below the node.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::contraction::contract;
use crate::error::{Error, Result};
use crate::exact::{
    vector_coeff, vector_sub, vector_valuation, AffinePoint, HyperplaneDirection, Rational, RationalPoly, Valuation,
};
use crate::group::{random_rational, ConfigPoint, Configuration, GroupElement};
use crate::trees::{Attachment, Mark, StableTree, Vertex, VertexId};

/// `n` points of `𝔸ᵈ` with polynomial coordinates in `t`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawFamily")]
pub struct FamilyConfiguration {
    d: usize,
    points: Vec<Vec<RationalPoly>>,
}

/// A coordinate on input: a polynomial, or a quotient of two.
#[derive(Deserialize)]
#[serde(untagged)]
enum RawCoordinate {
    Poly(RationalPoly),
    Ratio { num: RationalPoly, den: RationalPoly },
}

#[derive(Deserialize)]
struct RawFamily {
    d: usize,
    points: Vec<Vec<RawCoordinate>>,
}

impl TryFrom<RawFamily> for FamilyConfiguration {
    type Error = Error;

    /// Quotients are cleared by the homothety `x ↦ L(t)·x` with `L` the
    /// product of all denominators, which does not move the limit.
    fn try_from(raw: RawFamily) -> Result<Self> {
        let mut dens: Vec<RationalPoly> = Vec::new();
        for c in raw.points.iter().flatten() {
            if let RawCoordinate::Ratio { den, .. } = c {
                if den.is_zero() {
                    return Err(Error::Parse("zero denominator in family".into()));
                }
                dens.push(den.clone());
            }
        }
        let product = |skip: Option<usize>| {
            dens.iter()
                .enumerate()
                .filter(|(i, _)| Some(*i) != skip)
                .fold(RationalPoly::constant(Rational::one()), |acc, (_, d)| acc.mul(d))
        };
        let mut next = 0;
        let mut points = Vec::with_capacity(raw.points.len());
        for p in raw.points {
            let mut row = Vec::with_capacity(p.len());
            for c in p {
                row.push(match c {
                    RawCoordinate::Poly(x) => x.mul(&product(None)),
                    RawCoordinate::Ratio { num, .. } => {
                        next += 1;
                        num.mul(&product(Some(next - 1)))
                    }
                });
            }
            points.push(row);
        }
        FamilyConfiguration::new(raw.d, points)
    }
}

impl FamilyConfiguration {
    pub fn new(d: usize, points: Vec<Vec<RationalPoly>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::Parse("dimension d must be at least 1".into()));
        }
        if points.len() < 2 {
            return Err(Error::Parse(format!("need at least 2 points, got {}", points.len())));
        }
        for p in &points {
            if p.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: p.len() });
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(Error::NotGenericallyDistinct(i + 1, j + 1));
                }
            }
        }
        Ok(FamilyConfiguration { d, points })
    }

    /// Family from integer coefficient lists, one list per coordinate.
    pub fn from_ints(d: usize, points: &[&[&[i64]]]) -> Result<Self> {
        Self::new(d, points.iter().map(|p| p.iter().map(|c| RationalPoly::from_ints(c)).collect()).collect())
    }

    /// The constant family at `c`.
    pub fn constant(c: &Configuration) -> Result<Self> {
        let points = c
            .points()
            .iter()
            .map(|p| match p {
                ConfigPoint::Affine(x) => Ok(x.coords().iter().cloned().map(RationalPoly::constant).collect()),
                ConfigPoint::AtInfinity(_) => Err(Error::Parse("constant families must be affine".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(c.d(), points)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Vec<RationalPoly>] {
        &self.points
    }

    fn point(&self, label: usize) -> &[RationalPoly] {
        &self.points[label - 1]
    }

    /// Largest degree among the coordinates.
    pub fn degree(&self) -> usize {
        self.points.iter().flatten().filter_map(RationalPoly::degree).max().unwrap_or(0)
    }

    /// Applies a constant group element to every member of the family.
    pub fn act(&self, g: &GroupElement) -> Result<Self> {
        if g.dim() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: g.dim() });
        }
        let points = self
            .points
            .iter()
            .map(|p| {
                p.iter()
                    .zip(g.u().coords())
                    .map(|(x, u)| x.scale(g.w()).add(&RationalPoly::constant(u.clone())))
                    .collect()
            })
            .collect();
        Self::new(self.d, points)
    }

    /// The member at a specific parameter value.
    pub fn at(&self, t: &Rational) -> Result<Configuration> {
        Configuration::from_affine(
            self.d,
            self.points.iter().map(|p| AffinePoint(p.iter().map(|x| x.eval(t)).collect())).collect(),
        )
    }
}

/// The vertex-`v` rescaling `(x − b_v(t))/t^k` applied to every label, at `t = 0`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ScaledLimit {
    pub vertex: VertexId,
    pub base: Vec<RationalPoly>,
    pub exponent: usize,
    pub limit: Configuration,
}

/// Limit tree plus the rescaling used at each vertex (indexed by vertex id).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Degeneration {
    pub tree: StableTree,
    pub bases: Vec<usize>,
    pub exponents: Vec<usize>,
}

/// Limit tree with the lowest label of each cluster as its base.
pub fn limit_tree(f: &FamilyConfiguration) -> Result<StableTree> {
    Ok(degenerate(f)?.tree)
}

pub fn limit_tree_with(f: &FamilyConfiguration, base: impl Fn(&BTreeSet<usize>) -> usize) -> Result<StableTree> {
    Ok(degenerate_with(f, base)?.tree)
}

pub fn degenerate(f: &FamilyConfiguration) -> Result<Degeneration> {
    degenerate_with(f, |s| *s.iter().next().expect("nonempty cluster"))
}

/// Vertex ids are assigned root first, clusters in order of smallest label.
pub fn degenerate_with(f: &FamilyConfiguration, base: impl Fn(&BTreeSet<usize>) -> usize) -> Result<Degeneration> {
    let mut out = Degeneration {
        tree: StableTree { d: f.d, n: f.n(), root: 0, vertices: Vec::new() },
        bases: Vec::new(),
        exponents: Vec::new(),
    };
    let all: BTreeSet<usize> = (1..=f.n()).collect();
    build(f, &all, None, &base, &mut out)?;
    debug_assert!(out.tree.is_valid(), "{:?}", out.tree.validate());
    Ok(out)
}

fn build(
    f: &FamilyConfiguration,
    labels: &BTreeSet<usize>,
    parent: Option<VertexId>,
    choose: &impl Fn(&BTreeSet<usize>) -> usize,
    out: &mut Degeneration,
) -> Result<VertexId> {
    let b = choose(labels);
    if !labels.contains(&b) {
        return Err(Error::BadLabels(format!("base {b} is not in the cluster {labels:?}")));
    }
    let diffs: Vec<(usize, Vec<RationalPoly>)> =
        labels.iter().map(|&i| (i, vector_sub(f.point(i), f.point(b)))).collect();
    // min pairwise valuation equals min valuation against any member
    let k = diffs
        .iter()
        .filter(|(i, _)| *i != b)
        .map(|(_, v)| vector_valuation(v))
        .min()
        .and_then(Valuation::finite)
        .ok_or(Error::NotGenericallyDistinct(b, b))?;
    let mut clusters: Vec<(AffinePoint, BTreeSet<usize>)> = Vec::new();
    for (i, v) in &diffs {
        let q = AffinePoint(vector_coeff(v, k));
        match clusters.iter_mut().find(|(p, _)| *p == q) {
            Some((_, s)) => {
                s.insert(*i);
            }
            None => clusters.push((q, BTreeSet::from([*i]))),
        }
    }
    let id = out.tree.vertices.len();
    out.tree.vertices.push(Vertex { id, parent, marks: vec![], children: vec![] });
    out.bases.push(b);
    out.exponents.push(k);
    for (q, s) in clusters {
        if s.len() == 1 {
            let label = *s.iter().next().expect("singleton");
            out.tree.vertices[id].marks.push(Mark { label, at: q });
        } else {
            let child = build(f, &s, Some(id), choose, out)?;
            out.tree.vertices[id].children.push(Attachment { id: child, at: q });
        }
    }
    Ok(id)
}

fn scaled_limit_in(f: &FamilyConfiguration, deg: &Degeneration, v: VertexId) -> Result<ScaledLimit> {
    deg.tree.vertex(v)?;
    let base = f.point(deg.bases[v]).to_vec();
    let k = deg.exponents[v];
    let points = (1..=f.n())
        .map(|i| {
            let diff = vector_sub(f.point(i), &base);
            match vector_valuation(&diff) {
                Valuation::Finite(j) if j < k => Ok(ConfigPoint::AtInfinity(HyperplaneDirection::new(vector_coeff(&diff, j))?)),
                _ => Ok(ConfigPoint::Affine(AffinePoint(vector_coeff(&diff, k)))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScaledLimit { vertex: v, base, exponent: k, limit: Configuration::new(f.d, points)? })
}

/// Rescaled limit of the whole family at vertex `v` of `limit_tree(f)`.
pub fn scaled_limit(f: &FamilyConfiguration, v: VertexId) -> Result<ScaledLimit> {
    scaled_limit_in(f, &degenerate(f)?, v)
}

/// Every component configuration of the limit tree is, up to `G`, the
/// rescaled limit of the family at that vertex.
pub fn check_limit_compatibility(f: &FamilyConfiguration) -> Result<bool> {
    let deg = degenerate(f)?;
    for v in deg.tree.preorder() {
        let scaled = scaled_limit_in(f, &deg, v)?.limit.canonicalize()?.0;
        let contracted = contract(&deg.tree, v)?.config.canonicalize()?.0;
        if scaled != contracted {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Random family with small rational coefficients and pairwise distinct points.
pub fn random_family(d: usize, n: usize, max_degree: usize, seed: u64) -> Result<FamilyConfiguration> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let points = (0..n)
            .map(|_| {
                (0..d)
                    .map(|_| {
                        let deg = rng.gen_range(0..=max_degree);
                        // sparse coefficients make collisions at t = 0 common
                        RationalPoly::new(
                            (0..=deg)
                                .map(|_| if rng.gen_bool(0.5) { Rational::zero() } else { random_rational(&mut rng, 3, 2) })
                                .collect(),
                        )
                    })
                    .collect()
            })
            .collect();
        match FamilyConfiguration::new(d, points) {
            Err(Error::NotGenericallyDistinct(..)) => continue,
            other => return other,
        }
    }
}

/// A family degenerating to `tree`: the mark `i` follows
/// `Σⱼ tʲ · (branch point of i at depth j)`, plus random terms of order
/// above the depth of `i` (up to `max_degree`).
pub fn family_towards(tree: &StableTree, max_degree: usize, seed: u64) -> Result<FamilyConfiguration> {
    tree.ensure_valid()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(tree.n);
    for label in 1..=tree.n {
        let w = tree.mark_vertex(label)?;
        let path = tree.path_from_root(w)?;
        let mut coords = vec![RationalPoly::zero(); tree.d];
        for (depth, &v) in path.iter().enumerate() {
            let at = if v == w { tree.mark_position(label)? } else { tree.determined_attachment(v, w)? };
            for (c, x) in coords.iter_mut().zip(at.coords()) {
                *c = c.add(&RationalPoly::monomial(x.clone(), depth));
            }
        }
        for depth in path.len()..=max_degree {
            for c in coords.iter_mut() {
                *c = c.add(&RationalPoly::monomial(random_rational(&mut rng, 5, 3), depth));
            }
        }
        points.push(coords);
    }
    FamilyConfiguration::new(tree.d, points)
}
