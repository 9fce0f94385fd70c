use super::arena::{Arena, Node};
use super::{Subtree, Tree, TreeError};

/// A tree cut along some of its edges into an outer tree and subtrees.
///
/// Piece `0` is the outer tree, piece `j + 1` the `j`-th subtree.
#[derive(Clone, Debug)]
pub struct Split {
    pub outer: Tree,
    pub inner: Vec<Tree>,
    /// For each vertex of the cut tree: `(piece, vertex index in that piece)`.
    pub vertex_home: Vec<(usize, usize)>,
    /// For each leaf of the cut tree: `(piece, leaf index in that piece)`.
    pub leaf_home: Vec<(usize, usize)>,
}

/// Cuts `v` above the nodes carrying exactly the label sets `blocks`; the cut
/// node `j` is replaced in the outer tree by a leaf labelled `replacement[j]`.
pub fn split(v: &Tree, blocks: &[Vec<u32>], replacement: &[u32]) -> Option<Split> {
    let layout = v.layout();
    let s = layout.vertices.len();
    let base = Arena::from_layout(&layout);
    let mut cut = Vec::with_capacity(blocks.len());
    for b in blocks {
        let mut b = b.clone();
        b.sort_unstable();
        let node = (0..base.nodes.len()).find(|x| base.labels_below(*x) == b)?;
        cut.push(node);
    }
    let mut outer = base.clone();
    for (x, label) in cut.iter().zip(replacement) {
        outer.nodes.push(Node::Leaf(vec![*label]));
        let fresh = outer.nodes.len() - 1;
        let swap = |c: &mut Vec<usize>| c.iter_mut().filter(|y| **y == *x).for_each(|y| *y = fresh);
        swap(&mut outer.root);
        for n in outer.nodes.iter_mut() {
            if let Node::Vertex(c) = n {
                swap(c);
            }
        }
    }
    let outer_built = outer.build();
    let inner_built: Vec<_> = cut.iter().map(|x| base.build_from(&[*x])).collect();
    let home = |node: usize, pos: &dyn Fn(&super::arena::Built, usize) -> Option<usize>| {
        for (j, b) in inner_built.iter().enumerate() {
            if let Some(p) = pos(b, node) {
                return (j + 1, p);
            }
        }
        (0, pos(&outer_built, node).expect("node in outer tree"))
    };
    let vertex_home = (0..s).map(|w| home(w, &|b, n| b.vertex_pos[n])).collect();
    let leaf_home = (0..layout.leaves.len()).map(|j| home(s + j, &|b, n| b.leaf_pos.get(n).copied().flatten())).collect();
    Some(Split {
        outer: outer_built.tree,
        inner: inner_built.into_iter().map(|b| b.tree).collect(),
        vertex_home,
        leaf_home,
    })
}

/// Grafts the root edge of `u` onto the leaf `a` of `t`.
pub fn graft(t: &Tree, a: u32, u: &Tree) -> Result<Tree, TreeError> {
    if u.root_children().len() != 1 {
        return Err(TreeError::NotSingleRootEdge);
    }
    let clash: Vec<u32> = t.labels().into_iter().filter(|x| *x != a && u.labels().contains(x)).collect();
    if !clash.is_empty() {
        return Err(TreeError::LabelClash(clash));
    }
    let mut found = false;
    fn replace(s: &Subtree, a: u32, with: &Subtree, found: &mut bool) -> Subtree {
        match s {
            Subtree::Leaf(l) if l.as_slice() == [a] => {
                *found = true;
                with.clone()
            }
            Subtree::Leaf(_) => s.clone(),
            Subtree::Vertex(c) => Subtree::Vertex(c.iter().map(|x| replace(x, a, with, found)).collect()),
        }
    }
    let root = t.root_children().iter().map(|x| replace(x, a, &u.root_children()[0], &mut found)).collect();
    if !found {
        return Err(TreeError::LeafNotFound(a));
    }
    Ok(Tree::from_root_children(root))
}

/// The unique `(t, u)` with `v = t ∪_a u`, if `v` has a node carrying exactly the labels `b`.
pub fn ungraft(v: &Tree, a_labels: &[u32], b_labels: &[u32], a: u32) -> Option<(Tree, Tree)> {
    let mut expected: Vec<u32> = a_labels.iter().copied().filter(|x| *x != a).chain(b_labels.iter().copied()).collect();
    expected.sort_unstable();
    if expected != v.labels() {
        return None;
    }
    let sp = split(v, &[b_labels.to_vec()], &[a])?;
    Some((sp.outer, sp.inner.into_iter().next().expect("one piece")))
}

/// Decomposes `v` as `t ∪_J (u_1, …, u_k)` for the blocks (sorted by minimum);
/// `t` is labelled by the block indices `1..=k`.
pub fn ungraft_partition(v: &Tree, blocks: &[Vec<u32>]) -> Option<(Tree, Vec<Tree>)> {
    let sp = partition_split(v, blocks)?;
    Some((sp.outer, sp.inner))
}

pub(crate) fn partition_split(v: &Tree, blocks: &[Vec<u32>]) -> Option<Split> {
    let mut blocks: Vec<Vec<u32>> = blocks.iter().map(|b| {
        let mut b = b.clone();
        b.sort_unstable();
        b
    }).collect();
    if blocks.iter().any(Vec::is_empty) {
        return None;
    }
    blocks.sort_by_key(|b| b[0]);
    let mut all: Vec<u32> = blocks.concat();
    all.sort_unstable();
    if all != v.labels() {
        return None;
    }
    let idx: Vec<u32> = (1..=blocks.len() as u32).collect();
    split(v, &blocks, &idx)
}
