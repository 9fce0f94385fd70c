//! Mutable node arena used to edit trees and re-canonicalize them while
//! keeping track of where every vertex and leaf ended up.

use super::{perm_sign, Layout, RelabelPlan, Slot, Subtree, Tree, TreeError};
use std::collections::HashSet;

#[derive(Clone, Debug)]
pub(crate) enum Node {
    Leaf(Vec<u32>),
    Vertex(Vec<usize>),
}

#[derive(Clone, Debug)]
pub(crate) struct Arena {
    pub nodes: Vec<Node>,
    pub root: Vec<usize>,
}

pub(crate) struct Built {
    pub tree: Tree,
    pub vertex_pos: Vec<Option<usize>>,
    pub leaf_pos: Vec<Option<usize>>,
    pub sorted_children: Vec<Vec<usize>>,
    pub sorted_root: Vec<usize>,
}

impl Arena {
    /// Vertices become nodes `0..s`, leaves nodes `s..s+L`, in layout order.
    pub fn from_layout(l: &Layout) -> Arena {
        let s = l.vertices.len();
        let id = |slot: &Slot| match slot {
            Slot::Vertex(v) => *v,
            Slot::Leaf(i) => s + i,
        };
        let mut nodes: Vec<Node> = l.vertices.iter().map(|v| Node::Vertex(v.children.iter().map(id).collect())).collect();
        nodes.extend(l.leaves.iter().map(|x| Node::Leaf(x.clone())));
        Arena { nodes, root: l.root.iter().map(id).collect() }
    }

    fn min_label(&self, n: usize) -> u32 {
        match &self.nodes[n] {
            Node::Leaf(l) => *l.iter().min().expect("nonempty leaf"),
            Node::Vertex(c) => c.iter().map(|x| self.min_label(*x)).min().expect("vertex with children"),
        }
    }

    pub fn labels_below(&self, n: usize) -> Vec<u32> {
        let mut out = Vec::new();
        let mut stack = vec![n];
        while let Some(x) = stack.pop() {
            match &self.nodes[x] {
                Node::Leaf(l) => out.extend(l),
                Node::Vertex(c) => stack.extend(c),
            }
        }
        out.sort_unstable();
        out
    }

    pub fn build(&self) -> Built {
        self.build_from(&self.root)
    }

    /// Canonicalizes the tree whose root children are `root`.
    pub fn build_from(&self, root: &[usize]) -> Built {
        let n = self.nodes.len();
        let mins: Vec<u32> = (0..n).map(|i| if self.reachable_shape(i) { self.min_label(i) } else { 0 }).collect();
        let sort = |v: &[usize]| {
            let mut v = v.to_vec();
            v.sort_by_key(|x| mins[*x]);
            v
        };
        let sorted_children: Vec<Vec<usize>> = self
            .nodes
            .iter()
            .map(|node| match node {
                Node::Vertex(c) => sort(c),
                Node::Leaf(_) => Vec::new(),
            })
            .collect();
        let sorted_root = sort(root);
        let mut vertex_pos = vec![None; n];
        let mut leaf_nodes = Vec::new();
        let mut counter = 0;
        fn walk(
            x: usize,
            a: &Arena,
            sc: &[Vec<usize>],
            vp: &mut [Option<usize>],
            leaves: &mut Vec<usize>,
            counter: &mut usize,
        ) -> Subtree {
            match &a.nodes[x] {
                Node::Leaf(l) => {
                    leaves.push(x);
                    let mut l = l.clone();
                    l.sort_unstable();
                    Subtree::Leaf(l)
                }
                Node::Vertex(_) => {
                    vp[x] = Some(*counter);
                    *counter += 1;
                    Subtree::Vertex(sc[x].iter().map(|c| walk(*c, a, sc, vp, leaves, counter)).collect())
                }
            }
        }
        let subtrees: Vec<Subtree> = sorted_root
            .iter()
            .map(|x| walk(*x, self, &sorted_children, &mut vertex_pos, &mut leaf_nodes, &mut counter))
            .collect();
        leaf_nodes.sort_by_key(|x| mins[*x]);
        let mut leaf_pos = vec![None; n];
        for (p, x) in leaf_nodes.iter().enumerate() {
            leaf_pos[*x] = Some(p);
        }
        Built { tree: Tree::from_root_children(subtrees), vertex_pos, leaf_pos, sorted_children, sorted_root }
    }

    fn reachable_shape(&self, i: usize) -> bool {
        match &self.nodes[i] {
            Node::Leaf(l) => !l.is_empty(),
            Node::Vertex(c) => !c.is_empty(),
        }
    }
}

pub(crate) fn relabel<F: Fn(u32) -> u32>(t: &Tree, f: F) -> Result<RelabelPlan, TreeError> {
    let layout = t.layout();
    let s = layout.vertices.len();
    let mut arena = Arena::from_layout(&layout);
    let mut seen = HashSet::new();
    let mut leaf_label_perm = Vec::with_capacity(layout.leaves.len());
    for (j, old) in layout.leaves.iter().enumerate() {
        let new: Vec<u32> = old.iter().map(|x| f(*x)).collect();
        for x in &new {
            if *x == 0 || !seen.insert(*x) {
                return Err(TreeError::NotInjective);
            }
        }
        let mut sorted = new.clone();
        sorted.sort_unstable();
        leaf_label_perm.push(new.iter().map(|x| sorted.binary_search(x).expect("present")).collect());
        arena.nodes[s + j] = super::arena::Node::Leaf(sorted);
    }
    let built = arena.build();
    let vertex_map: Vec<usize> = (0..s).map(|v| built.vertex_pos[v].expect("vertex kept")).collect();
    let leaf_map: Vec<usize> = (0..layout.leaves.len()).map(|j| built.leaf_pos[s + j].expect("leaf kept")).collect();
    let position = |sorted: &[usize], x: usize| sorted.iter().position(|y| *y == x).expect("child present");
    let vertex_child_perm = (0..s)
        .map(|v| match &arena.nodes[v] {
            Node::Vertex(c) => c.iter().map(|x| position(&built.sorted_children[v], *x)).collect(),
            Node::Leaf(_) => unreachable!(),
        })
        .collect();
    let root_child_perm = arena.root.iter().map(|x| position(&built.sorted_root, *x)).collect();
    Ok(RelabelPlan {
        sign: perm_sign(&vertex_map),
        target: built.tree,
        vertex_map,
        leaf_map,
        vertex_child_perm,
        root_child_perm,
        leaf_label_perm,
    })
}
