//! Component configurations `π_v` and the configuration cycle `Z(X)`.
//!
//! For a vertex `v`, the contraction onto `X̄_v` acts on a mark `q` sitting
//! on vertex `w` as follows, with `a` the deepest common ancestor of `v`, `w`:
//!
//! * `a = v`: the mark stays at `q` when `w = v`, otherwise it collapses to
//!   the point of `X̄_v` determined by `w`;
//! * `a < v`: collapse inside `X̄_a` to `x` (either `q` or the point
//!   determined by `w`), then project from the point `p` of `X̄_a` determined
//!   by `v`. The image lies on `H_v` in direction `x − p`; later projections
//!   along the chain from `a` to `v` fix it.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{AffinePoint, HyperplaneDirection};
use crate::group::{ConfigPoint, Configuration};
use crate::trees::{StableTree, VertexId};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct ComponentConfiguration {
    pub vertex: VertexId,
    #[serde(flatten)]
    pub config: Configuration,
}

/// Component configurations of every vertex, root first, siblings ordered by
/// the smallest label below them; each stored in canonical `G`-orbit form.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConfigurationCycle {
    pub members: Vec<ComponentConfiguration>,
}

impl ConfigurationCycle {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The cycle as a multiset of canonical orbit representatives, sorted.
    pub fn orbit_multiset(&self) -> Result<Vec<Configuration>> {
        let mut out = self
            .members
            .iter()
            .map(|m| m.config.canonicalize().map(|c| c.0))
            .collect::<Result<Vec<_>>>()?;
        out.sort();
        Ok(out)
    }
}

/// Image of the marks under the contraction onto vertex `v`.
pub fn contract(tree: &StableTree, v: VertexId) -> Result<ComponentConfiguration> {
    tree.vertex(v)?;
    let mut points = Vec::with_capacity(tree.n);
    for label in 1..=tree.n {
        let w = tree.mark_vertex(label)?;
        let q = tree.mark_position(label)?;
        let a = tree.meet(w, v)?;
        let image = if a == v {
            if w == v {
                ConfigPoint::Affine(q.clone())
            } else {
                ConfigPoint::Affine(tree.determined_attachment(v, w)?.clone())
            }
        } else {
            let x: &AffinePoint = if w == a { q } else { tree.determined_attachment(a, w)? };
            let p = tree.determined_attachment(a, v)?;
            if x == p {
                return Err(Error::ContractionDegenerate(a));
            }
            ConfigPoint::AtInfinity(HyperplaneDirection::new(x.sub(p))?)
        };
        points.push(image);
    }
    Ok(ComponentConfiguration { vertex: v, config: Configuration::new(tree.d, points)? })
}

/// Root first, then each subtree in order of its smallest label.
pub fn canonical_traversal(tree: &StableTree) -> Result<Vec<VertexId>> {
    fn walk(tree: &StableTree, id: VertexId, out: &mut Vec<VertexId>) -> Result<()> {
        out.push(id);
        let mut kids = Vec::new();
        for c in &tree.vertex(id)?.children {
            let key = *tree.labels_below(c.id)?.iter().next().expect("nonempty");
            kids.push((key, c.id));
        }
        kids.sort_unstable();
        kids.into_iter().try_for_each(|(_, c)| walk(tree, c, out))
    }
    let mut out = Vec::with_capacity(tree.vertices.len());
    walk(tree, tree.root, &mut out)?;
    Ok(out)
}

pub fn configuration_cycle(tree: &StableTree) -> Result<ConfigurationCycle> {
    tree.ensure_valid()?;
    let members = canonical_traversal(tree)?
        .into_iter()
        .map(|v| {
            let cc = contract(tree, v)?;
            let (config, _) = cc.config.canonicalize()?;
            Ok(ComponentConfiguration { vertex: v, config })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConfigurationCycle { members })
}

/// Labels grouped by coincident affine image, plus the labels sent to `H`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SupportProfile {
    /// Ordered by smallest label.
    pub affine: Vec<(AffinePoint, BTreeSet<usize>)>,
    pub infinity: BTreeSet<usize>,
}

pub fn support_profile(config: &Configuration) -> SupportProfile {
    let mut affine: Vec<(AffinePoint, BTreeSet<usize>)> = Vec::new();
    let mut infinity = BTreeSet::new();
    for (i, p) in config.points().iter().enumerate() {
        let label = i + 1;
        match p {
            ConfigPoint::AtInfinity(_) => {
                infinity.insert(label);
            }
            ConfigPoint::Affine(x) => match affine.iter_mut().find(|(y, _)| y == x) {
                Some((_, group)) => {
                    group.insert(label);
                }
                None => affine.push((x.clone(), BTreeSet::from([label]))),
            },
        }
    }
    SupportProfile { affine, infinity }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::tests::{chain, figure_three, pt, two_daughters};
    use crate::trees::{Attachment, Mark, Vertex};

    fn inf(c: &[i64]) -> ConfigPoint {
        ConfigPoint::AtInfinity(HyperplaneDirection::from_ints(c).unwrap())
    }

    fn aff(c: &[i64]) -> ConfigPoint {
        ConfigPoint::Affine(pt(c))
    }

    /// d = 1: root has mark 3 at 1 and a child attached at 0 carrying marks
    /// 1 at 0 and 2 at 1.
    pub(crate) fn two_vertex_line() -> StableTree {
        StableTree {
            d: 1,
            n: 3,
            root: 0,
            vertices: vec![
                Vertex { id: 0, parent: None, marks: vec![Mark { label: 3, at: pt(&[1]) }], children: vec![Attachment { id: 1, at: pt(&[0]) }] },
                Vertex {
                    id: 1,
                    parent: Some(0),
                    marks: vec![Mark { label: 1, at: pt(&[0]) }, Mark { label: 2, at: pt(&[1]) }],
                    children: vec![],
                },
            ],
        }
    }

    fn labels(s: &[usize]) -> BTreeSet<usize> {
        s.iter().copied().collect()
    }

    #[test]
    fn single_vertex_contraction_is_identity() {
        let t = StableTree::interior(2, vec![pt(&[0, 0]), pt(&[1, 2]), pt(&[3, 1])]);
        let cc = contract(&t, 0).unwrap();
        assert_eq!(cc.config, t.interior_configuration().unwrap());
    }

    #[test]
    fn two_vertex_line_contractions() {
        let t = two_vertex_line();
        let root = contract(&t, 0).unwrap().config;
        assert_eq!(root.points(), &[aff(&[0]), aff(&[0]), aff(&[1])]);
        let child = contract(&t, 1).unwrap().config;
        assert_eq!(child.points(), &[aff(&[0]), aff(&[1]), inf(&[1])]);

        let cyc = configuration_cycle(&t).unwrap();
        assert_eq!(cyc.members.len(), 2);
        assert_eq!(cyc.members[0].config, root.canonicalize().unwrap().0);
        assert_eq!(cyc.members[1].config, child.canonicalize().unwrap().0);
    }

    #[test]
    fn figure_three_root_support_is_three_and_two() {
        let t = figure_three();
        let root = contract(&t, 0).unwrap().config;
        let prof = support_profile(&root);
        assert!(prof.infinity.is_empty());
        let sizes: Vec<usize> = prof.affine.iter().map(|g| g.1.len()).collect();
        assert_eq!(sizes, vec![2, 3]);
        let cyc = configuration_cycle(&t).unwrap();
        assert_eq!(cyc.len(), 4);
        for v in [0, 1, 2, 3] {
            let prof = support_profile(&contract(&t, v).unwrap().config);
            assert_eq!(prof.affine.len(), 2, "vertex {v}");
        }
    }

    #[test]
    fn support_profile_examples() {
        let t = two_vertex_line();
        let root = support_profile(&contract(&t, 0).unwrap().config);
        assert_eq!(root.affine, vec![(pt(&[0]), labels(&[1, 2])), (pt(&[1]), labels(&[3]))]);
        assert!(root.infinity.is_empty());
        let child = support_profile(&contract(&t, 1).unwrap().config);
        assert_eq!(child.affine, vec![(pt(&[0]), labels(&[1])), (pt(&[1]), labels(&[2]))]);
        assert_eq!(child.infinity, labels(&[3]));

        let c = Configuration::from_affine(1, vec![pt(&[0]), pt(&[4]), pt(&[2])]).unwrap();
        let p = support_profile(&c);
        assert_eq!(p.affine.len(), 3);
        assert!(p.infinity.is_empty());
    }

    #[test]
    fn chain_projects_through_intermediate_vertex() {
        // root(4 at 5) -> a(3 at 1) attached at 0 -> b(1 at 0, 2 at 1) attached at 0
        let t = chain();
        let b = contract(&t, 2).unwrap().config;
        // mark 4 projects from root's attachment 0 in direction 5 - 0, mark 3
        // from a's attachment 0 in direction 1 - 0.
        assert_eq!(b.points(), &[aff(&[0]), aff(&[1]), inf(&[1]), inf(&[1])]);
        let a = contract(&t, 1).unwrap().config;
        assert_eq!(a.points(), &[aff(&[0]), aff(&[0]), aff(&[1]), inf(&[1])]);
    }

    #[test]
    fn incomparable_branches_go_to_infinity() {
        let t = two_daughters();
        let v1 = contract(&t, 1).unwrap().config;
        // marks 3, 4 live under the sibling attached at (1,0); v1 hangs at (0,0)
        assert_eq!(v1.point(3), &inf(&[1, 0]));
        assert_eq!(v1.point(4), &inf(&[1, 0]));
        assert_eq!(v1.point(1), &aff(&[0, 0]));
    }

    #[test]
    fn cycle_serializes_with_vertex_tags() {
        let cyc = configuration_cycle(&two_vertex_line()).unwrap();
        let json = serde_json::to_string(&cyc).unwrap();
        assert!(json.starts_with(r#"[{"vertex":0,"d":1,"points":"#), "{json}");
        let back: ConfigurationCycle = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cyc);
    }

    #[test]
    fn unknown_vertex_is_rejected() {
        assert_eq!(contract(&two_vertex_line(), 7).unwrap_err(), Error::UnknownVertex(7));
    }
}
