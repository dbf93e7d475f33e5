//! The group `G ≅ 𝔾ₘ ⋉ 𝔾ₐᵈ` of projectivities of ℙᵈ fixing the hyperplane
//! `H = V(x₀)` pointwise, acting diagonally on configurations of points.
//!
//! An element is stored as a pair `(w, u)` acting on the affine chart
//! `x₀ = 1` by `x ↦ w·x + u`. In matrix form this is the lower-triangular
//! matrix with first row `(1, 0, …, 0)`, first column `(1, u)` and `w` on
//! the rest of the diagonal; when `w = t^{d+1}` it rescales to the
//! unit-determinant normal form with `t^{-d}` in the corner and `u = t^d s`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{AffinePoint, HyperplaneDirection, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawGroupElement")]
pub struct GroupElement {
    w: Rational,
    u: AffinePoint,
}

#[derive(Deserialize)]
struct RawGroupElement {
    w: Rational,
    u: AffinePoint,
}

impl TryFrom<RawGroupElement> for GroupElement {
    type Error = Error;
    fn try_from(raw: RawGroupElement) -> Result<Self> {
        GroupElement::new(raw.w, raw.u)
    }
}

impl GroupElement {
    /// Fails if `w == 0`.
    pub fn new(w: Rational, u: AffinePoint) -> Result<Self> {
        if w.is_zero() {
            return Err(Error::Parse("homothety factor w must be nonzero".into()));
        }
        Ok(GroupElement { w, u })
    }

    pub fn identity(d: usize) -> Self {
        GroupElement { w: Rational::one(), u: AffinePoint::origin(d) }
    }

    pub fn translation(u: AffinePoint) -> Self {
        GroupElement { w: Rational::one(), u }
    }

    pub fn w(&self) -> &Rational {
        &self.w
    }

    pub fn u(&self) -> &AffinePoint {
        &self.u
    }

    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    pub fn apply(&self, x: &AffinePoint) -> AffinePoint {
        AffinePoint(x.0.iter().zip(&self.u.0).map(|(xi, ui)| &self.w * xi + ui).collect())
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &GroupElement) -> Result<GroupElement> {
        check_dim(self.dim(), first.dim())?;
        Ok(GroupElement { w: &self.w * &first.w, u: self.apply(&first.u) })
    }

    pub fn inverse(&self) -> GroupElement {
        let winv = self.w.recip().expect("w is nonzero");
        let u = AffinePoint(self.u.0.iter().map(|ui| -(&winv * ui)).collect());
        GroupElement { w: winv, u }
    }

    pub fn act(&self, c: &Configuration) -> Result<Configuration> {
        check_dim(c.d, self.dim())?;
        let points = c
            .points
            .iter()
            .map(|p| match p {
                ConfigPoint::Affine(x) => ConfigPoint::Affine(self.apply(x)),
                ConfigPoint::AtInfinity(y) => ConfigPoint::AtInfinity(y.clone()),
            })
            .collect();
        Ok(Configuration { d: c.d, points })
    }

    /// The `(d+1)×(d+1)` matrix acting on homogeneous coordinates `(x₀, x)`,
    /// normalized with top-left entry 1.
    pub fn to_projective_matrix(&self) -> Vec<Vec<Rational>> {
        let d = self.dim();
        let mut m = vec![vec![Rational::zero(); d + 1]; d + 1];
        m[0][0] = Rational::one();
        for j in 0..d {
            m[j + 1][0] = self.u.0[j].clone();
            m[j + 1][j + 1] = self.w.clone();
        }
        m
    }

    /// A random element with small rational entries.
    pub fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        let w = loop {
            let w = random_rational(rng, 9, 4);
            if !w.is_zero() {
                break w;
            }
        };
        let u = AffinePoint((0..d).map(|_| random_rational(rng, 20, 5)).collect());
        GroupElement { w, u }
    }
}

/// Uniform-ish rational `a/b` with `|a| ≤ num_bound`, `1 ≤ b ≤ den_bound`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, num_bound: i64, den_bound: i64) -> Rational {
    Rational::new(rng.gen_range(-num_bound..=num_bound), rng.gen_range(1..=den_bound))
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// One entry of a configuration: a point off `H` or a point of `H`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum ConfigPoint {
    #[serde(rename = "affine")]
    Affine(AffinePoint),
    #[serde(rename = "infinity")]
    AtInfinity(HyperplaneDirection),
}

impl ConfigPoint {
    pub fn dim(&self) -> usize {
        match self {
            ConfigPoint::Affine(x) => x.dim(),
            ConfigPoint::AtInfinity(y) => y.dim(),
        }
    }

    pub fn as_affine(&self) -> Option<&AffinePoint> {
        match self {
            ConfigPoint::Affine(x) => Some(x),
            ConfigPoint::AtInfinity(_) => None,
        }
    }

    pub fn is_at_infinity(&self) -> bool {
        matches!(self, ConfigPoint::AtInfinity(_))
    }
}

/// `n ≥ 2` labelled points of ℙᵈ; label `i` is stored at index `i - 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawConfiguration")]
pub struct Configuration {
    d: usize,
    points: Vec<ConfigPoint>,
}

#[derive(Deserialize)]
struct RawConfiguration {
    d: usize,
    points: Vec<ConfigPoint>,
}

impl TryFrom<RawConfiguration> for Configuration {
    type Error = Error;
    fn try_from(raw: RawConfiguration) -> Result<Self> {
        Configuration::new(raw.d, raw.points)
    }
}

impl Configuration {
    pub fn new(d: usize, points: Vec<ConfigPoint>) -> Result<Self> {
        if d == 0 {
            return Err(Error::Parse("dimension d must be at least 1".into()));
        }
        if points.len() < 2 {
            return Err(Error::Parse(format!("need at least 2 points, got {}", points.len())));
        }
        for p in &points {
            check_dim(d, p.dim())?;
        }
        Ok(Configuration { d, points })
    }

    pub fn from_affine(d: usize, points: Vec<AffinePoint>) -> Result<Self> {
        Self::new(d, points.into_iter().map(ConfigPoint::Affine).collect())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[ConfigPoint] {
        &self.points
    }

    /// Point carrying the 1-based `label`.
    pub fn point(&self, label: usize) -> &ConfigPoint {
        &self.points[label - 1]
    }

    /// Distinct affine points of the support, in order of first appearance.
    pub fn affine_support(&self) -> Vec<&AffinePoint> {
        let mut out: Vec<&AffinePoint> = Vec::new();
        for p in self.points.iter().filter_map(ConfigPoint::as_affine) {
            if !out.contains(&p) {
                out.push(p);
            }
        }
        out
    }

    /// Dimension of the stabilizer in `G`: 0 with two distinct affine support
    /// points, 1 with exactly one, and `d + 1` with none.
    pub fn stabilizer_dimension(&self) -> usize {
        match self.affine_support().len() {
            0 => self.d + 1,
            1 => 1,
            _ => 0,
        }
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.stabilizer_dimension() == 0
    }

    /// Canonical representative of the `G`-orbit together with the element
    /// reaching it: the lowest-indexed affine point goes to the origin, and the
    /// first nonzero coordinate of the next distinct affine point becomes 1.
    pub fn canonicalize(&self) -> Result<(Configuration, GroupElement)> {
        let support = self.affine_support();
        if support.len() < 2 {
            return Err(Error::NotFullDimensional);
        }
        let (base, other) = (support[0], support[1]);
        let diff = other.sub(base);
        let lead = diff.iter().find(|x| !x.is_zero()).expect("distinct points");
        let w = lead.recip().expect("nonzero");
        let u = AffinePoint(base.0.iter().map(|b| -(&w * b)).collect());
        let g = GroupElement { w, u };
        let canon = g.act(self)?;
        Ok((canon, g))
    }

    /// Equality of `G`-orbits for full-dimensional configurations.
    pub fn same_orbit(&self, other: &Configuration) -> Result<bool> {
        Ok(self.canonicalize()?.0 == other.canonicalize()?.0)
    }
}
