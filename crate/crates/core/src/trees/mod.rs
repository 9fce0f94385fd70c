//! Rooted labelled trees (standard and generalized), their collapse order,
//! grafting, and the orientation signs used by the bar and cobar differentials.
//!
//! # Serialization
//!
//! ```text
//! tree    := "{" node ("," node)* "}"        children of the root
//! node    := leaf | vertex
//! leaf    := "[" label ("," label)* "]"      sorted labels
//! vertex  := "(" node "," node ("," node)* ")"
//! ```
//!
//! Children always appear sorted by their minimum label, so the string is a
//! canonical form. `{[1]}` is the unit tree, `{([1],[2])}` the corolla on two
//! inputs and `{[1],[2]}` the generalized tree whose root has two leaf edges.

mod arena;
mod covers;
mod graft;
mod serial;

pub use covers::{covers, cover_plans, leq, w_cell_complex, CollapseKind, CollapseMove, CoverDetail, CoverPlan};
pub use graft::{graft, split, ungraft, ungraft_partition, Split};

use std::collections::HashMap;
use std::fmt;

/// Largest label count accepted by enumeration.
pub const MAX_LABELS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Species {
    /// Single root edge, singleton leaves.
    Standard,
    /// No constraint.
    Generalized,
    /// Single root edge.
    Root,
    /// Singleton leaves.
    Leaf,
}

impl Species {
    fn single_root(self) -> bool {
        matches!(self, Species::Standard | Species::Root)
    }

    fn singleton_leaves(self) -> bool {
        matches!(self, Species::Standard | Species::Leaf)
    }
}

impl std::str::FromStr for Species {
    type Err = TreeError;
    fn from_str(s: &str) -> Result<Self, TreeError> {
        match s.to_ascii_lowercase().as_str() {
            "standard" => Ok(Species::Standard),
            "generalized" => Ok(Species::Generalized),
            "root" => Ok(Species::Root),
            "leaf" => Ok(Species::Leaf),
            _ => Err(TreeError::Parse(format!("unknown species `{s}`"))),
        }
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("label count {n} outside 1..={max}")]
    OutOfRange { n: usize, max: usize },
    #[error("tree has {vertices} vertices, more than the bound {max}")]
    TooLarge { vertices: usize, max: usize },
    #[error("grafted tree must have a single root edge")]
    NotSingleRootEdge,
    #[error("no leaf carries exactly the label {0}")]
    LeafNotFound(u32),
    #[error("label sets overlap outside the grafting label: {0:?}")]
    LabelClash(Vec<u32>),
    #[error("relabelling is not injective on the labels")]
    NotInjective,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cell complex rejected: {0}")]
    Complex(String),
}

/// Child of the root or of a vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Subtree {
    Leaf(Vec<u32>),
    Vertex(Vec<Subtree>),
}

impl Subtree {
    pub fn min_label(&self) -> u32 {
        match self {
            Subtree::Leaf(l) => l[0],
            Subtree::Vertex(c) => c[0].min_label(),
        }
    }

    fn collect_labels(&self, out: &mut Vec<u32>) {
        match self {
            Subtree::Leaf(l) => out.extend(l),
            Subtree::Vertex(c) => c.iter().for_each(|s| s.collect_labels(out)),
        }
    }

    pub fn labels(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_labels(&mut out);
        out.sort_unstable();
        out
    }

    fn vertex_count(&self) -> usize {
        match self {
            Subtree::Leaf(_) => 0,
            Subtree::Vertex(c) => 1 + c.iter().map(Subtree::vertex_count).sum::<usize>(),
        }
    }

    /// Vertex with children put into canonical order.
    pub fn vertex(mut children: Vec<Subtree>) -> Subtree {
        children.sort_by_key(Subtree::min_label);
        Subtree::Vertex(children)
    }
}

/// A tree in canonical form. Equality, hashing and ordering go through the
/// canonical serialization.
#[derive(Clone)]
pub struct Tree {
    root: Vec<Subtree>,
    key: String,
}

impl Tree {
    /// Canonicalizes the given root children.
    pub fn from_root_children(mut root: Vec<Subtree>) -> Tree {
        fn canon(s: &mut Subtree) {
            match s {
                Subtree::Leaf(l) => l.sort_unstable(),
                Subtree::Vertex(c) => {
                    c.iter_mut().for_each(canon);
                    c.sort_by_key(Subtree::min_label);
                }
            }
        }
        root.iter_mut().for_each(canon);
        root.sort_by_key(Subtree::min_label);
        let key = serial::serialize(&root);
        Tree { root, key }
    }

    pub fn parse(s: &str) -> Result<Tree, TreeError> {
        let t = Tree::from_root_children(serial::parse(s)?);
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<(), TreeError> {
        let labels = self.labels();
        if labels.is_empty() || labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(TreeError::Parse(format!("labels of `{}` are empty or repeated", self.key)));
        }
        Ok(())
    }

    /// Unit tree: one root edge ending in the leaf `label`.
    pub fn unit(label: u32) -> Tree {
        Tree::from_root_children(vec![Subtree::Leaf(vec![label])])
    }

    /// Corolla with singleton leaves `1..=n`.
    pub fn corolla(n: u32) -> Tree {
        let leaves = (1..=n).map(|i| Subtree::Leaf(vec![i])).collect();
        Tree::from_root_children(vec![Subtree::vertex(leaves)])
    }

    pub fn root_children(&self) -> &[Subtree] {
        &self.root
    }

    pub fn serialize(&self) -> &str {
        &self.key
    }

    /// Number of internal vertices.
    pub fn vertex_count(&self) -> usize {
        self.root.iter().map(Subtree::vertex_count).sum()
    }

    pub fn labels(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.root.iter().for_each(|s| s.collect_labels(&mut out));
        out.sort_unstable();
        out
    }

    pub fn fits(&self, species: Species) -> bool {
        if species.single_root() && self.root.len() != 1 {
            return false;
        }
        !species.singleton_leaves() || self.layout().leaves.iter().all(|l| l.len() == 1)
    }

    /// Arena view with vertices in canonical order.
    pub fn layout(&self) -> Layout {
        Layout::of(self)
    }

    /// Relabels by an injective map, returning the transported data.
    pub fn relabel_with<F: Fn(u32) -> u32>(&self, f: F) -> Result<RelabelPlan, TreeError> {
        arena::relabel(self, f)
    }

    /// Relabels by a permutation of `1..=n` given as `sigma[i-1] = σ(i)`.
    pub fn relabel(&self, sigma: &[u32]) -> Result<(Tree, i32), TreeError> {
        let plan = self.relabel_with(|x| sigma.get(x as usize - 1).copied().unwrap_or(0))?;
        Ok((plan.target, plan.sign))
    }

    /// Order-preserving relabelling that sends the i-th smallest label to `i`.
    pub fn standardize(&self) -> Tree {
        let labels = self.labels();
        let pos: HashMap<u32, u32> = labels.iter().enumerate().map(|(i, l)| (*l, i as u32 + 1)).collect();
        self.relabel_with(|x| pos[&x]).expect("monotone relabelling").target
    }
}

impl PartialEq for Tree {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}
impl Eq for Tree {}
impl std::hash::Hash for Tree {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key.hash(state)
    }
}
impl PartialOrd for Tree {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Tree {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key.cmp(&other.key)
    }
}
impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key)
    }
}
impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tree({})", self.key)
    }
}

/// Reference to a child position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Vertex(usize),
    Leaf(usize),
}

#[derive(Clone, Debug)]
pub struct VertexData {
    /// `None` when the parent is the root.
    pub parent: Option<usize>,
    pub children: Vec<Slot>,
}

/// Flattened tree. Vertices are numbered in canonical order (depth first,
/// children in canonical order); leaves are numbered by minimum label.
#[derive(Clone, Debug)]
pub struct Layout {
    pub root: Vec<Slot>,
    pub vertices: Vec<VertexData>,
    pub leaves: Vec<Vec<u32>>,
}

impl Layout {
    fn of(t: &Tree) -> Layout {
        let mut vertices = Vec::new();
        let mut leaf_nodes: Vec<Vec<u32>> = Vec::new();
        fn walk(s: &Subtree, parent: Option<usize>, vs: &mut Vec<VertexData>, ls: &mut Vec<Vec<u32>>) -> Slot {
            match s {
                Subtree::Leaf(l) => {
                    ls.push(l.clone());
                    Slot::Leaf(ls.len() - 1)
                }
                Subtree::Vertex(c) => {
                    let id = vs.len();
                    vs.push(VertexData { parent, children: Vec::new() });
                    let kids = c.iter().map(|x| walk(x, Some(id), vs, ls)).collect();
                    vs[id].children = kids;
                    Slot::Vertex(id)
                }
            }
        }
        let mut root: Vec<Slot> = t.root.iter().map(|s| walk(s, None, &mut vertices, &mut leaf_nodes)).collect();
        // renumber leaves by minimum label
        let mut order: Vec<usize> = (0..leaf_nodes.len()).collect();
        order.sort_by_key(|i| leaf_nodes[*i][0]);
        let mut new_pos = vec![0; order.len()];
        for (p, i) in order.iter().enumerate() {
            new_pos[*i] = p;
        }
        let fix = |s: &mut Slot| {
            if let Slot::Leaf(i) = s {
                *i = new_pos[*i];
            }
        };
        root.iter_mut().for_each(fix);
        for v in vertices.iter_mut() {
            v.children.iter_mut().for_each(fix);
        }
        let leaves = order.into_iter().map(|i| leaf_nodes[i].clone()).collect();
        Layout { root, vertices, leaves }
    }
}

/// Result of relabelling a tree, with everything needed to transport decorations.
#[derive(Clone, Debug)]
pub struct RelabelPlan {
    pub target: Tree,
    /// Sign of the permutation from the transported vertex order to the canonical one.
    pub sign: i32,
    /// Old vertex index to new vertex index.
    pub vertex_map: Vec<usize>,
    /// Old leaf index to new leaf index.
    pub leaf_map: Vec<usize>,
    /// Per old vertex: old child position to new child position.
    pub vertex_child_perm: Vec<Vec<usize>>,
    /// Root: old child position to new child position.
    pub root_child_perm: Vec<usize>,
    /// Per old leaf: position of each old sorted label among the new sorted labels.
    pub leaf_label_perm: Vec<Vec<usize>>,
}

/// Sign of a permutation given as a list of images.
pub fn perm_sign(p: &[usize]) -> i32 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut j = i;
        let mut len = 0;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// All set partitions of `items`, blocks in order of their first element.
pub fn set_partitions<T: Clone>(items: &[T]) -> Vec<Vec<Vec<T>>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let first = items[0].clone();
    let mut out = Vec::new();
    for p in set_partitions(&items[1..]) {
        let mut alone = vec![vec![first.clone()]];
        alone.extend(p.iter().cloned());
        out.push(alone);
        for b in 0..p.len() {
            let mut q = Vec::with_capacity(p.len());
            let mut head = p[b].clone();
            head.insert(0, first.clone());
            q.push(head);
            q.extend(p.iter().enumerate().filter(|(i, _)| *i != b).map(|(_, x)| x.clone()));
            out.push(q);
        }
    }
    out
}

/// Set partitions of `1..=n` as sorted blocks sorted by minimum.
pub fn label_partitions(n: u32) -> Vec<Vec<Vec<u32>>> {
    let items: Vec<u32> = (1..=n).collect();
    let mut out = set_partitions(&items);
    for p in out.iter_mut() {
        for b in p.iter_mut() {
            b.sort_unstable();
        }
        p.sort_by_key(|b| b[0]);
    }
    out
}

/// All trees of a species on the labels `1..=n`, in canonical serialization order.
pub fn enumerate_trees(n: usize, species: Species) -> Result<Vec<Tree>, TreeError> {
    if n == 0 || n > MAX_LABELS {
        return Err(TreeError::OutOfRange { n, max: MAX_LABELS });
    }
    Ok(enumerate_on(&(1..=n as u32).collect::<Vec<_>>(), species))
}

/// All trees of a species on an arbitrary label set.
pub fn enumerate_on(labels: &[u32], species: Species) -> Vec<Tree> {
    let mut memo: HashMap<Vec<u32>, Vec<Subtree>> = HashMap::new();
    let mut out: Vec<Tree> = if species.single_root() {
        nodes_on(labels, species, &mut memo).into_iter().map(|s| Tree::from_root_children(vec![s])).collect()
    } else {
        let mut trees = Vec::new();
        for blocks in set_partitions(labels) {
            let options: Vec<Vec<Subtree>> = blocks.iter().map(|b| nodes_on(b, species, &mut memo)).collect();
            for combo in product(&options) {
                trees.push(Tree::from_root_children(combo));
            }
        }
        trees
    };
    out.sort();
    out.dedup();
    out
}

fn nodes_on(labels: &[u32], species: Species, memo: &mut HashMap<Vec<u32>, Vec<Subtree>>) -> Vec<Subtree> {
    let mut key = labels.to_vec();
    key.sort_unstable();
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let mut out = Vec::new();
    if key.len() == 1 || !species.singleton_leaves() {
        out.push(Subtree::Leaf(key.clone()));
    }
    if key.len() >= 2 {
        for blocks in set_partitions(&key) {
            if blocks.len() < 2 {
                continue;
            }
            let options: Vec<Vec<Subtree>> = blocks.iter().map(|b| nodes_on(b, species, memo)).collect();
            for combo in product(&options) {
                out.push(Subtree::vertex(combo));
            }
        }
    }
    memo.insert(key, out.clone());
    out
}

fn product(options: &[Vec<Subtree>]) -> Vec<Vec<Subtree>> {
    let mut acc: Vec<Vec<Subtree>> = vec![Vec::new()];
    for opts in options {
        let mut next = Vec::with_capacity(acc.len() * opts.len());
        for a in &acc {
            for o in opts {
                let mut v = a.clone();
                v.push(o.clone());
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

#[cfg(test)]
mod tests;
