use super::arena::{Arena, Built, Node};
use super::{perm_sign, Slot, Tree, TreeError};
use crate::exactla::{ChainComplex, ExactMatrix, GradedFreeModule, Ring};
use std::collections::{BTreeMap, HashMap, HashSet};

/// Largest vertex count accepted by [`w_cell_complex`].
pub const W_CELL_MAX_VERTICES: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CollapseKind {
    InternalEdge,
    RootEdge,
    Bud,
}

/// A codimension-one collapse. `vertex` is the vertex of the source tree that
/// disappears: the upper end of an internal edge, the root's child for a
/// root-edge collapse, or the bud.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CollapseMove {
    pub kind: CollapseKind,
    pub vertex: usize,
    pub sign: i32,
}

/// Where the decorations of a collapsed tree go.
#[derive(Clone, Debug)]
pub enum CoverDetail {
    /// `child` (the `at`-th child of `parent`) is merged into `parent`. The
    /// merged vertex has position `merged`; `layout_perm[p]` is the canonical
    /// child position of input `p` of the partial composite `parent ∘_at child`.
    InternalEdge { parent: usize, child: usize, at: usize, merged: usize, layout_perm: Vec<usize> },
    /// `child` (the `at`-th child of the root) is merged into the root.
    RootEdge { child: usize, at: usize, layout_perm: Vec<usize> },
    /// `bud` and its leaves (by leaf index, in child order) become the leaf `new_leaf`.
    Bud { bud: usize, leaves: Vec<usize>, new_leaf: usize },
}

#[derive(Clone, Debug)]
pub struct CoverPlan {
    pub target: Tree,
    pub mv: CollapseMove,
    /// Old vertex to new vertex; the removed vertex maps to `None`.
    pub vertex_map: Vec<Option<usize>>,
    /// Old leaf to new leaf; leaves absorbed by a bud collapse map to `None`.
    pub leaf_map: Vec<Option<usize>>,
    pub detail: CoverDetail,
}

fn orientation_sign(kind: CollapseKind, removed: usize, vertex_map: &[Option<usize>]) -> i32 {
    let order: Vec<usize> = vertex_map.iter().flatten().copied().collect();
    let kappa = if kind == CollapseKind::Bud { -1 } else { 1 };
    let parity = if removed.is_multiple_of(2) { 1 } else { -1 };
    kappa * parity * perm_sign(&order)
}

fn finish(built: &Built, s: usize, leaves: usize, removed: usize) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    let vertex_map = (0..s).map(|w| if w == removed { None } else { built.vertex_pos[w] }).collect();
    let leaf_map = (0..leaves).map(|j| built.leaf_pos[s + j]).collect();
    (vertex_map, leaf_map)
}

/// All collapse moves out of `t` with the data needed to transport decorations.
pub fn cover_plans(t: &Tree) -> Vec<CoverPlan> {
    let layout = t.layout();
    let s = layout.vertices.len();
    let nleaves = layout.leaves.len();
    let base = Arena::from_layout(&layout);
    let mut out = Vec::new();
    for v in 0..s {
        let v_children: Vec<usize> = match &base.nodes[v] {
            Node::Vertex(c) => c.clone(),
            Node::Leaf(_) => unreachable!(),
        };
        // edge above v
        let mut arena = base.clone();
        let parent = layout.vertices[v].parent;
        let siblings = match parent {
            Some(u) => match &arena.nodes[u] {
                Node::Vertex(c) => c.clone(),
                Node::Leaf(_) => unreachable!(),
            },
            None => arena.root.clone(),
        };
        let at = siblings.iter().position(|x| *x == v).expect("child of parent");
        let mut standard = siblings[..at].to_vec();
        standard.extend(&v_children);
        standard.extend(&siblings[at + 1..]);
        match parent {
            Some(u) => arena.nodes[u] = Node::Vertex(standard.clone()),
            None => arena.root = standard.clone(),
        }
        arena.nodes[v] = Node::Vertex(Vec::new());
        let built = arena.build();
        let sorted = match parent {
            Some(u) => &built.sorted_children[u],
            None => &built.sorted_root,
        };
        let layout_perm: Vec<usize> =
            standard.iter().map(|x| sorted.iter().position(|y| y == x).expect("present")).collect();
        let (vertex_map, leaf_map) = finish(&built, s, nleaves, v);
        let (kind, detail) = match parent {
            Some(u) => (
                CollapseKind::InternalEdge,
                CoverDetail::InternalEdge {
                    parent: u,
                    child: v,
                    at,
                    merged: built.vertex_pos[u].expect("parent kept"),
                    layout_perm,
                },
            ),
            None => (CollapseKind::RootEdge, CoverDetail::RootEdge { child: v, at, layout_perm }),
        };
        let sign = orientation_sign(kind, v, &vertex_map);
        out.push(CoverPlan { target: built.tree, mv: CollapseMove { kind, vertex: v, sign }, vertex_map, leaf_map, detail });

        // bud collapse
        let leaves: Option<Vec<usize>> = layout.vertices[v]
            .children
            .iter()
            .map(|c| match c {
                Slot::Leaf(j) => Some(*j),
                Slot::Vertex(_) => None,
            })
            .collect();
        if let Some(leaves) = leaves {
            let mut arena = base.clone();
            let mut labels = Vec::new();
            for j in &leaves {
                labels.extend(&layout.leaves[*j]);
                arena.nodes[s + j] = Node::Leaf(Vec::new());
            }
            labels.sort_unstable();
            arena.nodes[v] = Node::Leaf(labels);
            let built = arena.build();
            let (vertex_map, leaf_map) = finish(&built, s, nleaves, v);
            let sign = orientation_sign(CollapseKind::Bud, v, &vertex_map);
            out.push(CoverPlan {
                target: built.tree,
                mv: CollapseMove { kind: CollapseKind::Bud, vertex: v, sign },
                vertex_map,
                leaf_map,
                detail: CoverDetail::Bud { bud: v, leaves, new_leaf: built.leaf_pos[v].expect("new leaf") },
            });
        }
    }
    out
}

/// Codimension-one predecessors of `t` in the collapse order, with signs.
pub fn covers(t: &Tree) -> Vec<(Tree, CollapseMove)> {
    cover_plans(t).into_iter().map(|p| (p.target, p.mv)).collect()
}

/// Whether `u` is obtained from `t` by a sequence of collapses.
pub fn leq(u: &Tree, t: &Tree) -> bool {
    if u == t {
        return true;
    }
    if u.labels() != t.labels() {
        return false;
    }
    let target = u.vertex_count();
    let mut frontier = vec![t.clone()];
    let mut seen = HashSet::new();
    while let Some(x) = frontier.pop() {
        if x.vertex_count() <= target {
            continue;
        }
        for (y, _) in covers(&x) {
            if &y == u {
                return true;
            }
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    false
}

/// Cellular chains of the weight space of `t`: all `u ≤ t`, graded by vertex count.
pub fn w_cell_complex(t: &Tree) -> Result<ChainComplex, TreeError> {
    let s = t.vertex_count();
    if s > W_CELL_MAX_VERTICES {
        return Err(TreeError::TooLarge { vertices: s, max: W_CELL_MAX_VERTICES });
    }
    let mut by_degree: BTreeMap<usize, Vec<Tree>> = BTreeMap::new();
    let mut seen: HashSet<Tree> = HashSet::from([t.clone()]);
    let mut frontier = vec![t.clone()];
    while let Some(x) = frontier.pop() {
        for (y, _) in covers(&x) {
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
        by_degree.entry(x.vertex_count()).or_default().push(x);
    }
    let mut module = GradedFreeModule::new();
    let mut index: HashMap<Tree, usize> = HashMap::new();
    for (d, trees) in by_degree.iter_mut() {
        trees.sort();
        for x in trees.iter() {
            index.insert(x.clone(), module.push(*d as i64, x.serialize().to_string()));
        }
    }
    let mut diffs = BTreeMap::new();
    for (d, trees) in &by_degree {
        if *d == 0 {
            continue;
        }
        let mut entries = Vec::new();
        for (col, x) in trees.iter().enumerate() {
            for (y, mv) in covers(x) {
                entries.push((index[&y], col, crate::exactla::q_int(mv.sign as i64)));
            }
        }
        let rows = by_degree.get(&(d - 1)).map_or(0, Vec::len);
        diffs.insert(*d as i64, ExactMatrix::from_triplets(Ring::Int, rows, trees.len(), entries).expect("integral"));
    }
    ChainComplex::new(Ring::Int, module, diffs).map_err(|e| TreeError::Complex(e.to_string()))
}
