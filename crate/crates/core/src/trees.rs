//! Stable rooted trees of pointed projective spaces: the closed points of `T_{d,n}`.
//!
//! Each vertex `v` stores the blown-down component `X̄_v ≅ ℙᵈ` in the affine
//! chart whose hyperplane at infinity is `H_v`. Marks and blown-up points
//! (one per child) are affine points of that chart. A child's hyperplane is
//! glued to the exceptional divisor over its attachment point by the
//! standard identification: the direction `y` at the attachment point is the
//! child's point `(0 : y)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::AffinePoint;
use crate::group::{random_rational, ConfigPoint, Configuration, GroupElement};

pub type VertexId = usize;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Mark {
    pub label: usize,
    pub at: AffinePoint,
}

/// A child vertex together with the blown-up point of the parent it sits over.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Attachment {
    pub id: VertexId,
    pub at: AffinePoint,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Vertex {
    pub id: VertexId,
    pub parent: Option<VertexId>,
    pub marks: Vec<Mark>,
    pub children: Vec<Attachment>,
}

impl Vertex {
    /// Marks and attachment points, marks first.
    pub fn special_points(&self) -> impl Iterator<Item = &AffinePoint> {
        self.marks.iter().map(|m| &m.at).chain(self.children.iter().map(|c| &c.at))
    }

    pub fn special_count(&self) -> usize {
        self.marks.len() + self.children.len()
    }

    pub fn attachment_of(&self, child: VertexId) -> Option<&AffinePoint> {
        self.children.iter().find(|c| c.id == child).map(|c| &c.at)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StableTree {
    pub d: usize,
    pub n: usize,
    pub root: VertexId,
    pub vertices: Vec<Vertex>,
}

/// Position of `v` relative to `w` in the rooted order (root minimal).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TreeOrder {
    Equal,
    /// `v < w`
    Ancestor,
    /// `v > w`
    Descendant,
    Incomparable,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    BadParameters { d: usize, n: usize },
    DuplicateVertex(VertexId),
    MissingRoot(VertexId),
    RootHasParent(VertexId),
    UnknownChild { parent: VertexId, child: VertexId },
    ParentMismatch { child: VertexId, listed_under: VertexId, claims: Option<VertexId> },
    Unreachable(VertexId),
    LabelOutOfRange(usize),
    DuplicateLabel(usize),
    MissingLabel(usize),
    WrongDimension { vertex: VertexId },
    CoincidentSpecialPoints { vertex: VertexId },
    TooFewSpecialPoints { vertex: VertexId, count: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadParameters { d, n } => write!(f, "need d >= 1 and n >= 2 (got d={d}, n={n})"),
            Violation::DuplicateVertex(v) => write!(f, "vertex id {v} appears more than once"),
            Violation::MissingRoot(v) => write!(f, "root {v} is not a vertex"),
            Violation::RootHasParent(v) => write!(f, "root {v} has a parent"),
            Violation::UnknownChild { parent, child } => write!(f, "vertex {parent} lists unknown child {child}"),
            Violation::ParentMismatch { child, listed_under, claims } => {
                write!(f, "vertex {child} is listed under {listed_under} but its parent is {claims:?}")
            }
            Violation::Unreachable(v) => write!(f, "vertex {v} is not reachable from the root exactly once"),
            Violation::LabelOutOfRange(l) => write!(f, "mark label {l} is outside 1..=n"),
            Violation::DuplicateLabel(l) => write!(f, "mark label {l} appears more than once"),
            Violation::MissingLabel(l) => write!(f, "mark label {l} is missing"),
            Violation::WrongDimension { vertex } => write!(f, "vertex {vertex} has a point of the wrong dimension"),
            Violation::CoincidentSpecialPoints { vertex } => {
                write!(f, "vertex {vertex} has coincident special points")
            }
            Violation::TooFewSpecialPoints { vertex, count } => {
                write!(f, "vertex {vertex} has {count} special point(s); at least two special points are required")
            }
        }
    }
}

impl StableTree {
    pub fn vertex(&self, id: VertexId) -> Result<&Vertex> {
        self.vertices.iter().find(|v| v.id == id).ok_or(Error::UnknownVertex(id))
    }

    fn vertex_mut(&mut self, id: VertexId) -> Result<&mut Vertex> {
        self.vertices.iter_mut().find(|v| v.id == id).ok_or(Error::UnknownVertex(id))
    }

    pub fn root_vertex(&self) -> &Vertex {
        self.vertex(self.root).expect("root exists in a valid tree")
    }

    /// Checks every structural and stability condition.
    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        if self.d == 0 || self.n < 2 {
            out.push(Violation::BadParameters { d: self.d, n: self.n });
        }
        let mut ids = BTreeSet::new();
        for v in &self.vertices {
            if !ids.insert(v.id) {
                out.push(Violation::DuplicateVertex(v.id));
            }
        }
        let by_id: BTreeMap<VertexId, &Vertex> = self.vertices.iter().map(|v| (v.id, v)).collect();
        match by_id.get(&self.root) {
            None => out.push(Violation::MissingRoot(self.root)),
            Some(r) if r.parent.is_some() => out.push(Violation::RootHasParent(self.root)),
            _ => {}
        }
        for v in &self.vertices {
            for c in &v.children {
                match by_id.get(&c.id) {
                    None => out.push(Violation::UnknownChild { parent: v.id, child: c.id }),
                    Some(child) if child.parent != Some(v.id) => out.push(Violation::ParentMismatch {
                        child: c.id,
                        listed_under: v.id,
                        claims: child.parent,
                    }),
                    _ => {}
                }
            }
        }
        // every vertex reached exactly once from the root, every non-root
        // vertex listed under the parent it names
        if by_id.contains_key(&self.root) {
            let mut seen: BTreeMap<VertexId, usize> = BTreeMap::new();
            let mut stack = vec![self.root];
            while let Some(id) = stack.pop() {
                let count = seen.entry(id).or_default();
                *count += 1;
                if *count > 1 {
                    continue;
                }
                if let Some(v) = by_id.get(&id) {
                    stack.extend(v.children.iter().map(|c| c.id).filter(|c| by_id.contains_key(c)));
                }
            }
            for id in by_id.keys() {
                if seen.get(id) != Some(&1) {
                    out.push(Violation::Unreachable(*id));
                }
            }
        }
        let mut labels = BTreeSet::new();
        for v in &self.vertices {
            for m in &v.marks {
                if m.label == 0 || m.label > self.n {
                    out.push(Violation::LabelOutOfRange(m.label));
                } else if !labels.insert(m.label) {
                    out.push(Violation::DuplicateLabel(m.label));
                }
            }
        }
        for l in 1..=self.n {
            if !labels.contains(&l) {
                out.push(Violation::MissingLabel(l));
            }
        }
        for v in &self.vertices {
            if v.special_points().any(|p| p.dim() != self.d) {
                out.push(Violation::WrongDimension { vertex: v.id });
            }
            let pts: Vec<&AffinePoint> = v.special_points().collect();
            let distinct: BTreeSet<&AffinePoint> = pts.iter().copied().collect();
            if distinct.len() != pts.len() {
                out.push(Violation::CoincidentSpecialPoints { vertex: v.id });
            }
            if v.special_count() < 2 {
                out.push(Violation::TooFewSpecialPoints { vertex: v.id, count: v.special_count() });
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Like [`validate`](Self::validate) but folded into the crate error type.
    pub fn ensure_valid(&self) -> Result<()> {
        self.validate().map_err(|v| {
            Error::InvalidTree(v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))
        })
    }

    /// Vertices from the root down to `id`, inclusive.
    pub fn path_from_root(&self, id: VertexId) -> Result<Vec<VertexId>> {
        let mut path = vec![id];
        let mut cur = self.vertex(id)?;
        while let Some(p) = cur.parent {
            path.push(p);
            cur = self.vertex(p)?;
            if path.len() > self.vertices.len() {
                return Err(Error::InvalidTree("parent pointers form a cycle".into()));
            }
        }
        path.reverse();
        Ok(path)
    }

    pub fn partial_order(&self, v: VertexId, w: VertexId) -> Result<TreeOrder> {
        let pv = self.path_from_root(v)?;
        let pw = self.path_from_root(w)?;
        Ok(if v == w {
            TreeOrder::Equal
        } else if pw.contains(&v) {
            TreeOrder::Ancestor
        } else if pv.contains(&w) {
            TreeOrder::Descendant
        } else {
            TreeOrder::Incomparable
        })
    }

    /// Deepest common ancestor of `v` and `w`.
    pub fn meet(&self, v: VertexId, w: VertexId) -> Result<VertexId> {
        let pv = self.path_from_root(v)?;
        let pw = self.path_from_root(w)?;
        Ok(pv.iter().zip(&pw).take_while(|(a, b)| a == b).last().map(|(a, _)| *a).expect("shared root"))
    }

    /// The daughter of `v` on the path towards `w` (`v < w` required).
    pub fn determined_child(&self, v: VertexId, w: VertexId) -> Result<VertexId> {
        self.vertex(v)?;
        let pw = self.path_from_root(w)?;
        match pw.iter().position(|&x| x == v) {
            Some(i) if i + 1 < pw.len() => Ok(pw[i + 1]),
            _ => Err(Error::NotAncestor(v, w)),
        }
    }

    /// The point of `X̄_v` determined by `w`: the attachment point of the
    /// daughter of `v` lying below or at `w`.
    pub fn determined_attachment(&self, v: VertexId, w: VertexId) -> Result<&AffinePoint> {
        let child = self.determined_child(v, w)?;
        self.vertex(v)?
            .attachment_of(child)
            .ok_or_else(|| Error::InvalidTree(format!("vertex {child} is not listed under {v}")))
    }

    /// Vertex carrying mark `label`.
    pub fn mark_vertex(&self, label: usize) -> Result<VertexId> {
        self.vertices
            .iter()
            .find(|v| v.marks.iter().any(|m| m.label == label))
            .map(|v| v.id)
            .ok_or_else(|| Error::BadLabels(format!("label {label} not present")))
    }

    pub fn mark_position(&self, label: usize) -> Result<&AffinePoint> {
        let v = self.vertex(self.mark_vertex(label)?)?;
        Ok(&v.marks.iter().find(|m| m.label == label).expect("found above").at)
    }

    /// Root-first order, children in the order listed.
    pub fn preorder(&self) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(self.vertices.len());
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            out.push(id);
            if let Ok(v) = self.vertex(id) {
                stack.extend(v.children.iter().rev().map(|c| c.id));
            }
        }
        out
    }

    /// Labels of marks at or below `id`.
    pub fn labels_below(&self, id: VertexId) -> Result<BTreeSet<usize>> {
        let v = self.vertex(id)?;
        let mut out: BTreeSet<usize> = v.marks.iter().map(|m| m.label).collect();
        for c in &v.children {
            out.extend(self.labels_below(c.id)?);
        }
        Ok(out)
    }

    /// One label set per edge: the marks at or below the child endpoint.
    pub fn boundary_decomposition(&self) -> Vec<BTreeSet<usize>> {
        self.preorder()
            .into_iter()
            .filter(|&id| id != self.root)
            .map(|id| self.labels_below(id).expect("valid tree"))
            .collect()
    }

    pub fn is_maximally_degenerate(&self) -> bool {
        self.vertices.iter().all(|v| v.special_count() == 2)
    }

    pub fn is_interior(&self) -> bool {
        self.vertices.len() == 1
    }

    /// Moves every special point of vertex `id` by `g`. Represents the same
    /// point of `T_{d,n}` when the tree is compared canonically.
    pub fn transform_vertex(&mut self, id: VertexId, g: &GroupElement) -> Result<()> {
        let v = self.vertex_mut(id)?;
        for m in &mut v.marks {
            m.at = g.apply(&m.at);
        }
        for c in &mut v.children {
            c.at = g.apply(&c.at);
        }
        Ok(())
    }

    /// The stratum this tree lies on.
    pub fn shape(&self) -> StratumShape {
        fn build(t: &StableTree, id: VertexId) -> StratumShape {
            let v = t.vertex(id).expect("valid tree");
            StratumShape {
                marks: v.marks.iter().map(|m| m.label).collect(),
                children: v.children.iter().map(|c| build(t, c.id)).collect(),
            }
            .canonical()
        }
        build(self, self.root)
    }

    /// Coordinate-free normal form: per vertex, the special points are ordered
    /// by the smallest label they carry and moved into canonical `G`-position.
    pub fn canonical_form(&self) -> Result<CanonicalTree> {
        self.ensure_valid()?;
        Ok(CanonicalTree(self.canonical_vertex(self.root)?))
    }

    fn canonical_vertex(&self, id: VertexId) -> Result<CanonicalVertex> {
        let v = self.vertex(id)?;
        let mut branches: Vec<(usize, AffinePoint, CanonicalBranch)> = Vec::new();
        for m in &v.marks {
            branches.push((m.label, m.at.clone(), CanonicalBranch::Mark(m.label)));
        }
        for c in &v.children {
            let key = *self.labels_below(c.id)?.iter().next().expect("nonempty subtree");
            branches.push((key, c.at.clone(), CanonicalBranch::Child(Box::new(self.canonical_vertex(c.id)?))));
        }
        branches.sort_by_key(|b| b.0);
        let config = Configuration::from_affine(self.d, branches.iter().map(|b| b.1.clone()).collect())?;
        let (canon, _) = config.canonicalize()?;
        let points = canon
            .points()
            .iter()
            .zip(branches)
            .map(|(p, b)| (p.as_affine().expect("affine").clone(), b.2))
            .collect();
        Ok(CanonicalVertex { points })
    }

    pub fn canonically_equal(&self, other: &StableTree) -> Result<bool> {
        Ok(self.d == other.d && self.n == other.n && self.canonical_form()? == other.canonical_form()?)
    }

    /// The `n` marks as a configuration, for single-vertex trees.
    pub fn interior_configuration(&self) -> Option<Configuration> {
        if !self.is_interior() {
            return None;
        }
        let mut pts: Vec<(usize, AffinePoint)> =
            self.root_vertex().marks.iter().map(|m| (m.label, m.at.clone())).collect();
        pts.sort_by_key(|p| p.0);
        Configuration::new(self.d, pts.into_iter().map(|p| ConfigPoint::Affine(p.1)).collect()).ok()
    }

    /// Single-vertex tree with mark `i` at `points[i-1]`.
    pub fn interior(d: usize, points: Vec<AffinePoint>) -> Self {
        let n = points.len();
        let marks = points.into_iter().enumerate().map(|(i, at)| Mark { label: i + 1, at }).collect();
        StableTree { d, n, root: 0, vertices: vec![Vertex { id: 0, parent: None, marks, children: vec![] }] }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalTree(CanonicalVertex);

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalVertex {
    points: Vec<(AffinePoint, CanonicalBranch)>,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum CanonicalBranch {
    Mark(usize),
    Child(Box<CanonicalVertex>),
}

/// Combinatorial type of a tree: rooted shape plus the distribution of labels.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct StratumShape {
    pub marks: Vec<usize>,
    pub children: Vec<StratumShape>,
}

impl StratumShape {
    pub fn leaf(marks: Vec<usize>) -> Self {
        StratumShape { marks, children: vec![] }
    }

    pub fn labels(&self) -> BTreeSet<usize> {
        let mut out: BTreeSet<usize> = self.marks.iter().copied().collect();
        for c in &self.children {
            out.extend(c.labels());
        }
        out
    }

    fn min_label(&self) -> usize {
        self.labels().into_iter().next().unwrap_or(usize::MAX)
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.children.iter().map(StratumShape::vertex_count).sum::<usize>()
    }

    /// Marks sorted, children sorted by smallest label, recursively.
    pub fn canonical(mut self) -> Self {
        self.marks.sort_unstable();
        self.children = self.children.into_iter().map(StratumShape::canonical).collect();
        self.children.sort_by_key(StratumShape::min_label);
        self
    }

    /// Every node has at least two special points and the labels are exactly `1..=n`.
    pub fn check(&self, n: usize) -> Result<()> {
        fn walk(s: &StratumShape, seen: &mut Vec<usize>) -> Result<()> {
            if s.marks.len() + s.children.len() < 2 {
                return Err(Error::InvalidShape(format!(
                    "node with marks {:?} has fewer than two special points",
                    s.marks
                )));
            }
            seen.extend(&s.marks);
            s.children.iter().try_for_each(|c| walk(c, seen))
        }
        let mut seen = Vec::new();
        walk(self, &mut seen)?;
        seen.sort_unstable();
        if seen != (1..=n).collect::<Vec<_>>() {
            return Err(Error::InvalidShape(format!("labels {seen:?} are not exactly 1..={n}")));
        }
        Ok(())
    }

    /// All strata of `T_{d,n}` (independent of `d`), in canonical form.
    pub fn enumerate(n: usize) -> Vec<StratumShape> {
        let labels: Vec<usize> = (1..=n).collect();
        shapes_over(&labels)
    }

    /// Two-vertex shape of the boundary divisor where the labels `collided`
    /// sit on a non-root component.
    pub fn divisor(n: usize, collided: &BTreeSet<usize>) -> Result<Self> {
        let rest: Vec<usize> = (1..=n).filter(|l| !collided.contains(l)).collect();
        let s = StratumShape {
            marks: rest,
            children: vec![StratumShape::leaf(collided.iter().copied().collect())],
        }
        .canonical();
        s.check(n)?;
        Ok(s)
    }
}

/// Vertices over a label set correspond to set partitions with at least two
/// blocks; singletons are marks, larger blocks are children.
fn shapes_over(labels: &[usize]) -> Vec<StratumShape> {
    let mut out = Vec::new();
    for partition in set_partitions(labels) {
        if partition.len() < 2 {
            continue;
        }
        let marks: Vec<usize> = partition.iter().filter(|b| b.len() == 1).map(|b| b[0]).collect();
        let blocks: Vec<&Vec<usize>> = partition.iter().filter(|b| b.len() > 1).collect();
        let mut combos: Vec<Vec<StratumShape>> = vec![vec![]];
        for b in blocks {
            let subs = shapes_over(b);
            combos = combos
                .into_iter()
                .flat_map(|prefix| {
                    subs.iter().map(move |s| {
                        let mut p = prefix.clone();
                        p.push(s.clone());
                        p
                    })
                })
                .collect();
        }
        for children in combos {
            out.push(StratumShape { marks: marks.clone(), children }.canonical());
        }
    }
    out
}

fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = items.split_first() else {
        return vec![vec![]];
    };
    let mut out = Vec::new();
    for p in set_partitions(rest) {
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].insert(0, first);
            out.push(q);
        }
        let mut q = p;
        q.insert(0, vec![first]);
        out.push(q);
    }
    out
}

/// Random point of the stratum `shape` with small rational coordinates.
/// Vertex ids are assigned in root-first order starting at 0.
pub fn random_tree(d: usize, n: usize, shape: &StratumShape, seed: u64) -> Result<StableTree> {
    if d == 0 || n < 2 {
        return Err(Error::InvalidShape(format!("need d >= 1 and n >= 2 (got d={d}, n={n})")));
    }
    shape.check(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vertices = Vec::new();
    build_random(shape, None, d, &mut rng, &mut vertices);
    let tree = StableTree { d, n, root: 0, vertices };
    debug_assert!(tree.is_valid());
    Ok(tree)
}

fn build_random(
    shape: &StratumShape,
    parent: Option<VertexId>,
    d: usize,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Vertex>,
) -> VertexId {
    let id = out.len();
    let count = shape.marks.len() + shape.children.len();
    let mut pts: Vec<AffinePoint> = Vec::with_capacity(count);
    while pts.len() < count {
        let p = AffinePoint((0..d).map(|_| random_rational(rng, 12, 3)).collect());
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    let marks = shape.marks.iter().zip(&pts).map(|(&label, at)| Mark { label, at: at.clone() }).collect();
    out.push(Vertex { id, parent, marks, children: vec![] });
    let mut children = Vec::new();
    for (c, at) in shape.children.iter().zip(&pts[shape.marks.len()..]) {
        let cid = build_random(c, Some(id), d, rng, out);
        children.push(Attachment { id: cid, at: at.clone() });
    }
    out[id].children = children;
    id
}
