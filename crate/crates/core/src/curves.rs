//! The line case `d = 1`, where `T_{1,n}` is the moduli space of stable
//! rational curves with `n + 1` marks, the root hyperplane being mark `n + 1`.
//!
//! Triple invariants are the cross-ratios of `(a, b, c, root)`; multidegree
//! `(1,1,1)` forms on `(ℙ¹)³` give the Chow points of `T_{1,3}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::contraction::ConfigurationCycle;
use crate::degeneration::FamilyConfiguration;
use crate::error::{Error, Result};
use crate::exact::{Rational, RationalPoly, Valuation};
use crate::group::{ConfigPoint, Configuration};
use crate::trees::{Attachment, Mark, StableTree, Vertex, VertexId};

/// A point of ℙ¹ in the affine coordinate of the cross-ratio.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum CrossRatioValue {
    Finite(Rational),
    Infinity,
}

impl fmt::Display for CrossRatioValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrossRatioValue::Finite(x) => write!(f, "{x}"),
            CrossRatioValue::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for CrossRatioValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CrossRatioValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "inf" {
            return Ok(CrossRatioValue::Infinity);
        }
        s.parse().map(CrossRatioValue::Finite).map_err(serde::de::Error::custom)
    }
}

fn require_line(tree: &StableTree) -> Result<()> {
    if tree.d != 1 {
        return Err(Error::RequiresLineCase(tree.d));
    }
    Ok(())
}

/// Forgets every mark outside `labels` and contracts the components left
/// with fewer than two special points. Mark `labels[k]` becomes `k + 1`.
pub fn stabilize(tree: &StableTree, labels: &[usize]) -> Result<StableTree> {
    require_line(tree)?;
    tree.ensure_valid()?;
    let keep: BTreeSet<usize> = labels.iter().copied().collect();
    if keep.len() != labels.len() || keep.len() < 2 || labels.iter().any(|&l| l == 0 || l > tree.n) {
        return Err(Error::BadLabels(format!("{labels:?} is not a set of at least two labels in 1..={}", tree.n)));
    }
    let mut verts: BTreeMap<VertexId, Vertex> = tree.vertices.iter().map(|v| (v.id, v.clone())).collect();
    for v in verts.values_mut() {
        v.marks.retain(|m| keep.contains(&m.label));
    }
    let mut root = tree.root;
    loop {
        let unstable = verts.values().find(|v| v.id != root && v.special_count() < 2).map(|v| v.id);
        if let Some(id) = unstable {
            let v = verts.remove(&id).expect("present");
            let parent = verts.get_mut(&v.parent.expect("non-root")).expect("parent present");
            let slot = parent.children.iter().position(|c| c.id == id).expect("listed under parent");
            let at = parent.children.remove(slot).at;
            if let Some(m) = v.marks.first() {
                parent.marks.push(Mark { label: m.label, at });
            } else if let Some(c) = v.children.first() {
                parent.children.insert(slot, Attachment { id: c.id, at });
                let pid = parent.id;
                verts.get_mut(&c.id).expect("child present").parent = Some(pid);
            }
            continue;
        }
        let r = &verts[&root];
        if r.marks.is_empty() && r.children.len() == 1 {
            let child = r.children[0].id;
            verts.remove(&root);
            verts.get_mut(&child).expect("child present").parent = None;
            root = child;
            continue;
        }
        break;
    }
    // compact ids in root-first order and relabel
    let relabel: BTreeMap<usize, usize> = labels.iter().enumerate().map(|(k, &l)| (l, k + 1)).collect();
    let mut order = Vec::new();
    let mut stack = vec![root];
    while let Some(id) = stack.pop() {
        order.push(id);
        stack.extend(verts[&id].children.iter().rev().map(|c| c.id));
    }
    let new_id: BTreeMap<VertexId, VertexId> = order.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let vertices = order
        .iter()
        .map(|id| {
            let v = &verts[id];
            Vertex {
                id: new_id[id],
                parent: v.parent.map(|p| new_id[&p]),
                marks: v.marks.iter().map(|m| Mark { label: relabel[&m.label], at: m.at.clone() }).collect(),
                children: v.children.iter().map(|c| Attachment { id: new_id[&c.id], at: c.at.clone() }).collect(),
            }
        })
        .collect();
    let out = StableTree { d: 1, n: labels.len(), root: 0, vertices };
    debug_assert!(out.is_valid(), "{:?}", out.validate());
    Ok(out)
}

fn cross_ratio(a: &Rational, b: &Rational, c: &Rational) -> CrossRatioValue {
    CrossRatioValue::Finite((c - a) * (b - a).recip().expect("distinct"))
}

fn collided_value(pair: (usize, usize)) -> CrossRatioValue {
    match pair {
        (1, 3) => CrossRatioValue::Finite(Rational::zero()),
        (2, 3) => CrossRatioValue::Finite(Rational::one()),
        _ => CrossRatioValue::Infinity,
    }
}

fn check_triple(tree: &StableTree, triple: [usize; 3]) -> Result<()> {
    let [a, b, c] = triple;
    if a == b || b == c || a == c || triple.iter().any(|&l| l == 0 || l > tree.n) {
        return Err(Error::BadLabels(format!("{triple:?} is not a triple of distinct labels in 1..={}", tree.n)));
    }
    Ok(())
}

/// Cross-ratio of `(a, b, c, root)` on the stabilized curve:
/// `(p_c − p_a)/(p_b − p_a)` on the interior; 0, 1, ∞ when `{a,c}`, `{b,c}`,
/// `{a,b}` have collided.
pub fn triple_invariant(tree: &StableTree, triple: [usize; 3]) -> Result<CrossRatioValue> {
    require_line(tree)?;
    check_triple(tree, triple)?;
    let s = stabilize(tree, &triple)?;
    if s.is_interior() {
        let p = |l: usize| s.mark_position(l).map(|x| x.coords()[0].clone());
        return Ok(cross_ratio(&p(1)?, &p(2)?, &p(3)?));
    }
    let child = s.vertex(s.root_vertex().children[0].id)?;
    let mut pair: Vec<usize> = child.marks.iter().map(|m| m.label).collect();
    pair.sort_unstable();
    Ok(collided_value((pair[0], pair[1])))
}

/// The same invariant read off directly at the deepest component containing
/// all three marks, without building the stabilized tree.
pub fn triple_invariant_at_meet(tree: &StableTree, triple: [usize; 3]) -> Result<CrossRatioValue> {
    require_line(tree)?;
    check_triple(tree, triple)?;
    let homes = triple.map(|l| tree.mark_vertex(l));
    let [ha, hb, hc] = [homes[0].clone()?, homes[1].clone()?, homes[2].clone()?];
    let v = tree.meet(tree.meet(ha, hb)?, hc)?;
    let pos = |l: usize, h: VertexId| -> Result<Rational> {
        let x = if h == v { tree.mark_position(l)? } else { tree.determined_attachment(v, h)? };
        Ok(x.coords()[0].clone())
    };
    let (a, b, c) = (pos(triple[0], ha)?, pos(triple[1], hb)?, pos(triple[2], hc)?);
    Ok(if a == c {
        collided_value((1, 3))
    } else if b == c {
        collided_value((2, 3))
    } else if a == b {
        collided_value((1, 2))
    } else {
        cross_ratio(&a, &b, &c)
    })
}

/// All triples `a < b < c`.
pub fn triples(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// Whether some triple invariant differs between the two trees.
pub fn separates(t1: &StableTree, t2: &StableTree) -> Result<bool> {
    require_line(t1)?;
    require_line(t2)?;
    if t1.n != t2.n {
        return Err(Error::ShapeMismatch { left: (t1.d, t1.n), right: (t2.d, t2.n) });
    }
    for t in triples(t1.n) {
        if triple_invariant(t1, t)? != triple_invariant(t2, t)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Label sets cut off by the edges of the curve, as subsets of `1..=n+1`
/// not containing the root label `n + 1`.
fn edge_sides(tree: &StableTree) -> Vec<BTreeSet<usize>> {
    tree.boundary_decomposition()
}

/// Whether the curve lies on the boundary divisor `D_{K,L}`, for a partition
/// `K ⊔ L = {1, …, n+1}`: some edge separates `K` from `L`.
pub fn on_divisor(tree: &StableTree, k: &BTreeSet<usize>, l: &BTreeSet<usize>) -> Result<bool> {
    require_line(tree)?;
    let all: BTreeSet<usize> = (1..=tree.n + 1).collect();
    if k.len() < 2 || l.len() < 2 || !k.is_disjoint(l) || (k | l) != all {
        return Err(Error::BadLabels(format!("{k:?} | {l:?} is not a partition of 1..={} into parts of size >= 2", tree.n + 1)));
    }
    Ok(edge_sides(tree).iter().any(|s| s == k || s == l))
}

/// Whether the stabilization to `K′ ∪ L′` (two labels each, possibly including
/// the root label `n + 1`) lies on the divisor `D_{K′,L′}` of `M̄_{0,4}`.
pub fn quadruple_on_divisor(tree: &StableTree, k: [usize; 2], l: [usize; 2]) -> Result<bool> {
    require_line(tree)?;
    let split = |s: &BTreeSet<usize>, x: [usize; 2], y: [usize; 2]| {
        x.iter().all(|a| s.contains(a)) && y.iter().all(|b| !s.contains(b))
    };
    Ok(edge_sides(tree).iter().any(|s| split(s, k, l) || split(s, l, k)))
}

/// Whether the stabilization to four labels is an interior point of `M̄_{0,4}`.
pub fn quadruple_is_interior(tree: &StableTree, q: [usize; 4]) -> Result<bool> {
    let [a, b, c, d] = q;
    for (k, l) in [([a, b], [c, d]), ([a, c], [b, d]), ([a, d], [b, c])] {
        if quadruple_on_divisor(tree, k, l)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn pairs(s: &BTreeSet<usize>) -> Vec<[usize; 2]> {
    let v: Vec<usize> = s.iter().copied().collect();
    let mut out = Vec::new();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            out.push([v[i], v[j]]);
        }
    }
    out
}

/// For a curve off `D_{K,L}`, two labels from each side (the root label
/// among the four) whose stabilization stays off `D_{K′,L′}`. `None` when the
/// curve is on `D_{K,L}` or no such choice exists.
pub fn divisor_witness(tree: &StableTree, k: &BTreeSet<usize>, l: &BTreeSet<usize>) -> Result<Option<([usize; 2], [usize; 2])>> {
    if on_divisor(tree, k, l)? {
        return Ok(None);
    }
    let root = tree.n + 1;
    for kp in pairs(k) {
        for lp in pairs(l) {
            if !kp.contains(&root) && !lp.contains(&root) {
                continue;
            }
            if !quadruple_on_divisor(tree, kp, lp)? {
                return Ok(Some((kp, lp)));
            }
        }
    }
    Ok(None)
}

/// Every partition `K ⊔ L` of `1..=n+1` with both parts of size at least 2.
pub fn divisor_partitions(n: usize) -> Vec<(BTreeSet<usize>, BTreeSet<usize>)> {
    let m = n + 1;
    let mut out = Vec::new();
    // K is the part not containing the root label
    for mask in 0u32..(1 << n) {
        let k: BTreeSet<usize> = (1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect();
        let l: BTreeSet<usize> = (1..=m).filter(|i| !k.contains(i)).collect();
        if k.len() >= 2 && l.len() >= 2 {
            out.push((k, l));
        }
    }
    out
}

/// One factor of a monomial on `(ℙ¹)³`: `xᵢ`, `zᵢ`, or nothing in slot `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Factor {
    X,
    Z,
    One,
}

pub type Monomial = [Factor; 3];

/// The eight monomials of multidegree `(1,1,1)`, in output order.
pub fn monomials_111() -> Vec<Monomial> {
    use Factor::{X, Z};
    let mut out = Vec::with_capacity(8);
    for a in [X, Z] {
        for b in [X, Z] {
            for c in [X, Z] {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn monomial_name(m: &Monomial) -> String {
    m.iter()
        .enumerate()
        .filter_map(|(i, f)| match f {
            Factor::X => Some(format!("x{}", i + 1)),
            Factor::Z => Some(format!("z{}", i + 1)),
            Factor::One => None,
        })
        .collect()
}

/// A form on `(ℙ¹)³` of degree at most one in each factor, up to scale.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiForm {
    degree: [u8; 3],
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiForm {
    fn from_terms(degree: [u8; 3], terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            let e = map.entry(m).or_insert_with(Rational::zero);
            *e = &*e + &c;
        }
        map.retain(|_, c| !c.is_zero());
        MultiForm { degree, terms: map }
    }

    fn linear(slot: usize, x: Rational, z: Rational) -> Self {
        let mut deg = [0; 3];
        deg[slot] = 1;
        let mono = |f: Factor| {
            let mut m = [Factor::One; 3];
            m[slot] = f;
            m
        };
        Self::from_terms(deg, [(mono(Factor::X), x), (mono(Factor::Z), z)])
    }

    pub fn degree(&self) -> [u8; 3] {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Product of forms supported on disjoint slots.
    pub fn mul(&self, other: &MultiForm) -> Result<MultiForm> {
        let degree = [0, 1, 2].map(|i| self.degree[i] + other.degree[i]);
        if degree.iter().any(|&k| k > 1) {
            return Err(Error::ClassMismatch(degree.to_vec()));
        }
        let mut terms = Vec::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let m = [0, 1, 2].map(|i| if a[i] == Factor::One { b[i] } else { a[i] });
                terms.push((m, ca * cb));
            }
        }
        Ok(Self::from_terms(degree, terms))
    }

    /// Scaled so the first nonzero coefficient is 1.
    pub fn normalized(&self) -> MultiForm {
        match self.terms.values().next() {
            None => self.clone(),
            Some(lead) => {
                let inv = lead.recip().expect("nonzero");
                MultiForm { degree: self.degree, terms: self.terms.iter().map(|(m, c)| (*m, c * &inv)).collect() }
            }
        }
    }

    /// Value at `((x₁:z₁), (x₂:z₂), (x₃:z₃))`.
    pub fn eval(&self, at: &[(Rational, Rational); 3]) -> Rational {
        self.terms
            .iter()
            .map(|(m, c)| {
                (0..3).fold(c.clone(), |acc, i| match m[i] {
                    Factor::X => acc * &at[i].0,
                    Factor::Z => acc * &at[i].1,
                    Factor::One => acc,
                })
            })
            .sum()
    }

    /// The eight coefficients in output order; only for degree `(1,1,1)`.
    pub fn coefficients_111(&self) -> Result<Vec<Rational>> {
        if self.degree != [1, 1, 1] {
            return Err(Error::ClassMismatch(self.degree.to_vec()));
        }
        Ok(monomials_111().iter().map(|m| self.coeff(m)).collect())
    }
}

impl fmt::Display for MultiForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let name = monomial_name(m);
            let (sign, mag) = if c.is_negative() { ("-", c.abs()) } else { ("+", c.clone()) };
            match (i, sign) {
                (0, "-") => f.write_str("-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            if mag.is_one() {
                f.write_str(&name)?;
            } else {
                write!(f, "{mag}*{name}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct RawForm {
    degree: [u8; 3],
    terms: BTreeMap<String, Rational>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    coefficients: Option<Vec<Rational>>,
}

impl Serialize for MultiForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawForm {
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (monomial_name(m), c.clone())).collect(),
            coefficients: self.coefficients_111().ok(),
        }
        .serialize(s)
    }
}

fn parse_monomial(name: &str, degree: [u8; 3]) -> Option<Monomial> {
    let mut m = [Factor::One; 3];
    let bytes = name.as_bytes();
    if !bytes.len().is_multiple_of(2) {
        return None;
    }
    for pair in bytes.chunks(2) {
        let slot = match pair[1] {
            b'1' => 0,
            b'2' => 1,
            b'3' => 2,
            _ => return None,
        };
        if m[slot] != Factor::One {
            return None;
        }
        m[slot] = match pair[0] {
            b'x' => Factor::X,
            b'z' => Factor::Z,
            _ => return None,
        };
    }
    let ok = (0..3).all(|i| (m[i] != Factor::One) == (degree[i] == 1));
    ok.then_some(m)
}

impl<'de> Deserialize<'de> for MultiForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawForm::deserialize(d)?;
        if raw.degree.iter().any(|&k| k > 1) {
            return Err(serde::de::Error::custom("degree entries must be 0 or 1"));
        }
        let mut terms = Vec::new();
        for (name, c) in raw.terms {
            let m = parse_monomial(&name, raw.degree)
                .ok_or_else(|| serde::de::Error::custom(format!("bad monomial {name:?}")))?;
            terms.push((m, c));
        }
        Ok(MultiForm::from_terms(raw.degree, terms))
    }
}

/// Raw coefficients of `(p₂−p₃)x₁z₂z₃ + (p₃−p₁)z₁x₂z₃ + (p₁−p₂)z₁z₂x₃`, in
/// output order. Linear in the points.
pub fn interior_form_coefficients(p: [&Rational; 3]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); 8];
    out[3] = p[1] - p[2];
    out[5] = p[2] - p[0];
    out[6] = p[0] - p[1];
    out
}

fn interior_form(p: [&Rational; 3]) -> MultiForm {
    MultiForm::from_terms([1, 1, 1], monomials_111().into_iter().zip(interior_form_coefficients(p)))
}

fn line_config(c: &Configuration) -> Result<()> {
    if c.d() != 1 {
        return Err(Error::RequiresLineCase(c.d()));
    }
    if c.n() != 3 {
        return Err(Error::BadLabels(format!("Chow forms need n = 3, got {}", c.n())));
    }
    if !c.is_full_dimensional() {
        return Err(Error::NotFullDimensional);
    }
    Ok(())
}

/// Defining form of the orbit closure of a full-dimensional triple on ℙ¹.
/// Distinct points give a `(1,1,1)` form; a coincident pair `i < j` gives
/// `xᵢzⱼ − zᵢxⱼ`; a point of `H` in slot `i` gives `zᵢ`.
pub fn chow_form_111(c: &Configuration) -> Result<MultiForm> {
    line_config(c)?;
    let x = |i: usize| c.points()[i].as_affine().map(|p| &p.coords()[0]);
    if let Some(i) = (0..3).find(|&i| x(i).is_none()) {
        return Ok(MultiForm::linear(i, Rational::zero(), Rational::one()));
    }
    let p = [0, 1, 2].map(|i| x(i).expect("affine"));
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if p[i] == p[j] {
            let xi = MultiForm::linear(i, Rational::one(), Rational::zero());
            let zi = MultiForm::linear(i, Rational::zero(), Rational::one());
            let xj = MultiForm::linear(j, Rational::one(), Rational::zero());
            let zj = MultiForm::linear(j, Rational::zero(), Rational::one());
            let a = xi.mul(&zj)?;
            let b = zi.mul(&xj)?;
            let terms = a.terms.into_iter().chain(b.terms.into_iter().map(|(m, c)| (m, -c)));
            return Ok(MultiForm::from_terms(a.degree, terms).normalized());
        }
    }
    Ok(interior_form(p).normalized())
}

/// Product of the member forms; the total multidegree must be `(1,1,1)`.
pub fn chow_form_of_cycle(z: &ConfigurationCycle) -> Result<MultiForm> {
    let forms = z.members.iter().map(|m| chow_form_111(&m.config)).collect::<Result<Vec<_>>>()?;
    let total = forms.iter().fold([0u8; 3], |acc, f| [0, 1, 2].map(|i| acc[i] + f.degree[i]));
    if total != [1, 1, 1] {
        return Err(Error::ClassMismatch(total.to_vec()));
    }
    let mut out = MultiForm::from_terms([0, 0, 0], [([Factor::One; 3], Rational::one())]);
    for f in &forms {
        out = out.mul(f)?;
    }
    Ok(out.normalized())
}

/// `t → 0` limit in ℙ⁷ of the forms of a line family of three points.
pub fn limit_chow_form(f: &FamilyConfiguration) -> Result<MultiForm> {
    if f.d() != 1 {
        return Err(Error::RequiresLineCase(f.d()));
    }
    if f.n() != 3 {
        return Err(Error::BadLabels(format!("Chow forms need n = 3, got {}", f.n())));
    }
    let p: Vec<&RationalPoly> = f.points().iter().map(|q| &q[0]).collect();
    let mut polys = vec![RationalPoly::zero(); 8];
    polys[3] = p[1].sub(p[2]);
    polys[5] = p[2].sub(p[0]);
    polys[6] = p[0].sub(p[1]);
    let k = polys
        .iter()
        .map(RationalPoly::valuation)
        .min()
        .and_then(Valuation::finite)
        .ok_or(Error::NotGenericallyDistinct(1, 2))?;
    let coeffs = polys.iter().map(|q| q.coeff(k));
    Ok(MultiForm::from_terms([1, 1, 1], monomials_111().into_iter().zip(coeffs)).normalized())
}

/// Homogeneous coordinates of a configuration point of ℙ¹.
pub fn homogeneous(p: &ConfigPoint) -> (Rational, Rational) {
    match p {
        ConfigPoint::Affine(x) => (x.coords()[0].clone(), Rational::one()),
        ConfigPoint::AtInfinity(_) => (Rational::one(), Rational::zero()),
    }
}
