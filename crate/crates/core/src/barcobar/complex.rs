use super::BarcobarError;
use crate::exactla::{ChainComplex, ExactMatrix, GradedFreeModule, Ring, Q};
use crate::opalg::tensor::{flatten, unflatten};
use crate::opalg::{invert_perm, Cooperad, LeftKey, Operad, Side, SidedModule, SymSeq};
use crate::trees::{cover_plans, enumerate_trees, CoverDetail, Layout, Species, Tree};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Construction {
    Bar,
    Cobar,
}

/// The structure in the middle of a two-sided construction.
#[derive(Clone, Debug, PartialEq)]
pub enum Middle {
    Operad(Operad),
    Cooperad(Cooperad),
}

impl Middle {
    pub fn seq(&self) -> &SymSeq {
        match self {
            Middle::Operad(p) => p.seq(),
            Middle::Cooperad(q) => q.seq(),
        }
    }
}

/// Right coefficients, middle (co)operad and left coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Coefficients {
    pub right: SidedModule,
    pub middle: Middle,
    pub left: SidedModule,
}

impl Coefficients {
    pub fn bar(right: SidedModule, p: Operad, left: SidedModule) -> Result<Self, BarcobarError> {
        let c = Coefficients { right, middle: Middle::Operad(p), left };
        c.check(Side::RightModule, Side::LeftModule)?;
        Ok(c)
    }

    pub fn cobar(right: SidedModule, q: Cooperad, left: SidedModule) -> Result<Self, BarcobarError> {
        let c = Coefficients { right, middle: Middle::Cooperad(q), left };
        c.check(Side::RightComodule, Side::LeftComodule)?;
        Ok(c)
    }

    /// `(I, P, I)`.
    pub fn reduced_bar(p: &Operad) -> Self {
        Coefficients {
            right: SidedModule::unit(Side::RightModule, p.seq()),
            middle: Middle::Operad(p.clone()),
            left: SidedModule::unit(Side::LeftModule, p.seq()),
        }
    }

    /// `(I, Q, I)`.
    pub fn reduced_cobar(q: &Cooperad) -> Self {
        Coefficients {
            right: SidedModule::unit(Side::RightComodule, q.seq()),
            middle: Middle::Cooperad(q.clone()),
            left: SidedModule::unit(Side::LeftComodule, q.seq()),
        }
    }

    /// `(I, Q, L)` for a left comodule `L`.
    pub fn left_cobar(q: &Cooperad, left: SidedModule) -> Result<Self, BarcobarError> {
        Self::cobar(SidedModule::unit(Side::RightComodule, q.seq()), q.clone(), left)
    }

    /// `(I, P, L)` for a left module `L`.
    pub fn left_bar(p: &Operad, left: SidedModule) -> Result<Self, BarcobarError> {
        Self::bar(SidedModule::unit(Side::RightModule, p.seq()), p.clone(), left)
    }

    fn check(&self, right: Side, left: Side) -> Result<(), BarcobarError> {
        if self.right.side() != right || self.left.side() != left {
            return Err(BarcobarError::Incompatible(format!(
                "expected a {right} and a {left}, got {} and {}",
                self.right.side(),
                self.left.side()
            )));
        }
        let m = self.middle.seq();
        if m.module(1).total_rank() != 1 || m.module(1).rank(0) != 1 {
            return Err(BarcobarError::NotReduced(m.name().to_string()));
        }
        for s in [&self.right, &self.left] {
            if s.ring() != m.ring() {
                return Err(BarcobarError::Incompatible(format!("{} and {} have different rings", s.name(), m.name())));
            }
            let n = s.over().max_arity().min(m.max_arity());
            if s.over().modules()[..n] != m.modules()[..n] {
                return Err(BarcobarError::Incompatible(format!("{} is not over {}", s.name(), m.name())));
            }
        }
        Ok(())
    }

    pub fn max_arity(&self) -> usize {
        self.right.max_arity().min(self.middle.seq().max_arity()).min(self.left.max_arity())
    }

    pub fn describe(&self) -> String {
        format!("({}, {}, {})", self.right.name(), self.middle.seq().name(), self.left.name())
    }

    pub(crate) fn slot_seq(&self, slot: usize, vertices: usize) -> &SymSeq {
        if slot == 0 {
            self.right.seq()
        } else if slot <= vertices {
            self.middle.seq()
        } else {
            self.left.seq()
        }
    }
}

/// Basis element of a bar or cobar complex: a tree with one basis index per
/// slot (root, vertices in canonical order, leaves by minimum label).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BarBasisLabel {
    pub tree: Tree,
    pub decoration: Vec<usize>,
    pub tree_degree: i64,
    pub internal_degree: i64,
}

impl BarBasisLabel {
    pub fn total_degree(&self) -> i64 {
        self.tree_degree + self.internal_degree
    }
}

/// Arity of every slot of a tree.
pub(crate) fn slot_arities(layout: &Layout) -> Vec<usize> {
    std::iter::once(layout.root.len())
        .chain(layout.vertices.iter().map(|v| v.children.len()))
        .chain(layout.leaves.iter().map(Vec::len))
        .collect()
}

#[derive(Clone, Debug)]
pub(crate) struct TreeBlock {
    pub tree: Tree,
    pub layout: Layout,
    pub arities: Vec<usize>,
    pub dims: Vec<usize>,
    pub degs: Vec<Vec<i64>>,
    /// `(degree, position)` of each decoration in lexicographic order.
    pub position: Vec<(i64, usize)>,
}

impl TreeBlock {
    pub fn vertices(&self) -> usize {
        self.layout.vertices.len()
    }

    pub fn internal_degree(&self, deco: &[usize]) -> i64 {
        deco.iter().enumerate().map(|(s, i)| self.degs[s][*i]).sum()
    }
}

/// A bar or cobar complex with its decorated-tree basis.
#[derive(Clone, Debug)]
pub struct BarComplex {
    construction: Construction,
    arity: usize,
    complex: Arc<ChainComplex>,
    pub(crate) blocks: Vec<TreeBlock>,
    tree_index: HashMap<Tree, usize>,
    /// Per degree and position: `(block, lexicographic decoration index)`.
    basis: BTreeMap<i64, Vec<(usize, usize)>>,
    coeffs: Arc<Coefficients>,
}

/// Sign of reordering graded factors when factor `i` moves to position `target[i]`.
pub(crate) fn sign_by_targets(degs: &[i64], target: &[usize]) -> bool {
    let mut odd = false;
    for i in 0..degs.len() {
        if degs[i] % 2 == 0 {
            continue;
        }
        for j in i + 1..degs.len() {
            if degs[j] % 2 != 0 && target[i] > target[j] {
                odd = !odd;
            }
        }
    }
    odd
}

enum MapKey {
    Edge(usize, usize, usize, Vec<usize>),
    Root(usize, usize, usize, Vec<usize>),
    Bud(LeftKey),
}

struct Collapse {
    target: usize,
    sign: i32,
    /// T slot and U slot of every slot outside the merged group.
    others: Vec<(usize, usize)>,
    group: Vec<usize>,
    group_dims: Vec<usize>,
    merged: usize,
    target_pos: Vec<usize>,
    map: Arc<ExactMatrix>,
}

impl BarComplex {
    pub fn build(
        construction: Construction,
        coeffs: Arc<Coefficients>,
        arity: usize,
        ring: Ring,
    ) -> Result<BarComplex, BarcobarError> {
        match (&coeffs.middle, construction) {
            (Middle::Operad(_), Construction::Bar) | (Middle::Cooperad(_), Construction::Cobar) => {}
            _ => return Err(BarcobarError::Incompatible("bar needs an operad, cobar a cooperad".into())),
        }
        let max = coeffs.max_arity();
        if arity == 0 || arity > max {
            return Err(BarcobarError::ArityBound { arity, max });
        }
        let sign_of_tree = if construction == Construction::Bar { 1 } else { -1 };
        let mut module = GradedFreeModule::new();
        let mut blocks = Vec::new();
        let mut basis: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
        for tree in enumerate_trees(arity, Species::Generalized)? {
            let layout = tree.layout();
            let s = layout.vertices.len();
            let arities = slot_arities(&layout);
            let seqs: Vec<&SymSeq> = (0..arities.len()).map(|k| coeffs.slot_seq(k, s)).collect();
            let dims: Vec<usize> = arities.iter().zip(&seqs).map(|(a, q)| q.dim(*a)).collect();
            if dims.contains(&0) {
                continue;
            }
            let degs: Vec<Vec<i64>> = arities.iter().zip(&seqs).map(|(a, q)| q.degrees(*a)).collect();
            let total: usize = dims.iter().product();
            let b = blocks.len();
            let tree_degree = sign_of_tree * s as i64;
            let mut position = Vec::with_capacity(total);
            for lex in 0..total {
                let deco = unflatten(lex, &dims);
                let d = tree_degree + deco.iter().enumerate().map(|(k, i)| degs[k][*i]).sum::<i64>();
                let mut label = tree.serialize().to_string();
                label.push(' ');
                for (k, i) in deco.iter().enumerate() {
                    let _ = write!(label, "{}{i}", if k == 0 { "" } else { "." });
                }
                let pos = module.push(d, label);
                basis.entry(d).or_default().push((b, lex));
                position.push((d, pos));
            }
            blocks.push(TreeBlock { tree, layout, arities, dims, degs, position });
        }
        let tree_index = blocks.iter().enumerate().map(|(i, b)| (b.tree.clone(), i)).collect();
        let mut bc = BarComplex {
            construction,
            arity,
            complex: Arc::new(ChainComplex::zero_differential(ring, GradedFreeModule::new())?),
            blocks,
            tree_index,
            basis,
            coeffs,
        };
        let diffs = bc.assemble(ring, &module)?;
        bc.complex = Arc::new(ChainComplex::new(ring, module, diffs).map_err(|e| {
            BarcobarError::Internal(format!("{} {} at arity {arity}: {e}", bc.kind_name(), bc.coeffs.describe()))
        })?);
        Ok(bc)
    }

    fn kind_name(&self) -> &'static str {
        match self.construction {
            Construction::Bar => "bar",
            Construction::Cobar => "cobar",
        }
    }

    fn structure_matrix(&self, key: &MapKey) -> Result<ExactMatrix, BarcobarError> {
        let c = &self.coeffs;
        let m = match (&c.middle, key) {
            (Middle::Operad(p), MapKey::Edge(cu, at, cv, perm)) => {
                p.seq().action(cu + cv - 1, perm).mul(&p.composition(*cu, at + 1, *cv))?
            }
            (Middle::Cooperad(q), MapKey::Edge(cu, at, cv, perm)) => {
                q.cocomposition(*cu, at + 1, *cv).mul(&q.seq().action(cu + cv - 1, &invert_perm(perm)))?
            }
            (Middle::Operad(_), MapKey::Root(r, at, cv, perm)) => {
                c.right.seq().action(r + cv - 1, perm).mul(&c.right.partial_map(*r, at + 1, *cv))?
            }
            (Middle::Cooperad(_), MapKey::Root(r, at, cv, perm)) => {
                c.right.partial_map(*r, at + 1, *cv).mul(&c.right.seq().action(r + cv - 1, &invert_perm(perm)))?
            }
            (_, MapKey::Bud(blocks)) => c.left.block_map(blocks),
        };
        Ok(m)
    }

    fn collapses(&self, b: usize, cache: &mut HashMap<String, Arc<ExactMatrix>>) -> Result<Vec<Collapse>, BarcobarError> {
        let block = &self.blocks[b];
        let s = block.vertices();
        let mut out = Vec::new();
        for plan in cover_plans(&block.tree) {
            let Some(&target) = self.tree_index.get(&plan.target) else { continue };
            let u = &self.blocks[target];
            let su = u.vertices();
            let (group, merged, key) = match &plan.detail {
                CoverDetail::InternalEdge { parent, child, at, merged, layout_perm } => (
                    vec![1 + parent, 1 + child],
                    1 + merged,
                    MapKey::Edge(block.arities[1 + parent], *at, block.arities[1 + child], layout_perm.clone()),
                ),
                CoverDetail::RootEdge { child, at, layout_perm } => (
                    vec![0, 1 + child],
                    0,
                    MapKey::Root(block.arities[0], *at, block.arities[1 + child], layout_perm.clone()),
                ),
                CoverDetail::Bud { bud, leaves, new_leaf } => {
                    let sets: Vec<Vec<u32>> = leaves.iter().map(|j| block.layout.leaves[*j].clone()).collect();
                    let mut g = vec![1 + bud];
                    g.extend(leaves.iter().map(|j| 1 + s + j));
                    (g, 1 + su + new_leaf, MapKey::Bud(crate::opalg::standardize_blocks(&sets)))
                }
            };
            let mut others = vec![];
            if merged != 0 {
                others.push((0, 0));
            }
            for (w, nw) in plan.vertex_map.iter().enumerate() {
                if let Some(nw) = nw {
                    if !group.contains(&(1 + w)) {
                        others.push((1 + w, 1 + nw));
                    }
                }
            }
            for (j, nj) in plan.leaf_map.iter().enumerate() {
                if let Some(nj) = nj {
                    others.push((1 + s + j, 1 + su + nj));
                }
            }
            // expanded order of U's slots, the merged slot replaced by its group
            let mut target_pos = vec![0; block.dims.len()];
            let mut by_u: Vec<Option<usize>> = vec![None; u.dims.len()];
            for (t, nu) in &others {
                by_u[*nu] = Some(*t);
            }
            let mut p = 0;
            for (nu, t) in by_u.iter().enumerate() {
                if nu == merged {
                    for g in &group {
                        target_pos[*g] = p;
                        p += 1;
                    }
                } else {
                    target_pos[t.expect("slot accounted for")] = p;
                    p += 1;
                }
            }
            let key_text = match &key {
                MapKey::Edge(a, b, c, d) => format!("e{a},{b},{c},{d:?}"),
                MapKey::Root(a, b, c, d) => format!("r{a},{b},{c},{d:?}"),
                MapKey::Bud(k) => format!("b{k:?}"),
            };
            let map = match cache.get(&key_text) {
                Some(m) => m.clone(),
                None => {
                    let m = Arc::new(self.structure_matrix(&key)?);
                    cache.insert(key_text, m.clone());
                    m
                }
            };
            let group_dims = group.iter().map(|g| block.dims[*g]).collect();
            out.push(Collapse { target, sign: plan.mv.sign, others, group, group_dims, merged, target_pos, map });
        }
        Ok(out)
    }

    fn assemble(&self, ring: Ring, module: &GradedFreeModule) -> Result<BTreeMap<i64, ExactMatrix>, BarcobarError> {
        let mut entries: BTreeMap<i64, Vec<(usize, usize, Q)>> = BTreeMap::new();
        let mut cache = HashMap::new();
        for (b, block) in self.blocks.iter().enumerate() {
            for col in self.collapses(b, &mut cache)? {
                let u = &self.blocks[col.target];
                match self.construction {
                    Construction::Bar => {
                        for (lex, (d, pos)) in block.position.iter().enumerate() {
                            let x = unflatten(lex, &block.dims);
                            let g = flatten(&col.group.iter().map(|k| x[*k]).collect::<Vec<_>>(), &col.group_dims);
                            let coeff = self.collapse_sign(block, &x, &col);
                            let mut y = vec![0; u.dims.len()];
                            for (t, nu) in &col.others {
                                y[*nu] = x[*t];
                            }
                            for (m, c) in col.map.column(g) {
                                y[col.merged] = *m;
                                let (_, upos) = u.position[flatten(&y, &u.dims)];
                                entries.entry(*d).or_default().push((upos, *pos, &coeff * c));
                            }
                        }
                    }
                    Construction::Cobar => {
                        for (lex, (d, pos)) in u.position.iter().enumerate() {
                            let y = unflatten(lex, &u.dims);
                            let mut x = vec![0; block.dims.len()];
                            for (t, nu) in &col.others {
                                x[*t] = y[*nu];
                            }
                            for (g, c) in col.map.column(y[col.merged]) {
                                for (k, gi) in col.group.iter().zip(unflatten(*g, &col.group_dims)) {
                                    x[*k] = gi;
                                }
                                let coeff = self.collapse_sign(block, &x, &col);
                                let (_, tpos) = block.position[flatten(&x, &block.dims)];
                                entries.entry(*d).or_default().push((tpos, *pos, &coeff * c));
                            }
                        }
                    }
                }
            }
        }
        let mut diffs = BTreeMap::new();
        for (d, e) in entries {
            let m = ExactMatrix::from_triplets(ring, module.rank(d - 1), module.rank(d), e)?;
            if !m.is_zero() {
                diffs.insert(d, m);
            }
        }
        Ok(diffs)
    }

    fn collapse_sign(&self, block: &TreeBlock, x: &[usize], col: &Collapse) -> Q {
        let degs: Vec<i64> = x.iter().enumerate().map(|(k, i)| block.degs[k][*i]).collect();
        let odd = sign_by_targets(&degs, &col.target_pos);
        if (col.sign < 0) != odd {
            -Q::one()
        } else {
            Q::one()
        }
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn ring(&self) -> Ring {
        self.complex.ring()
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn complex_arc(&self) -> Arc<ChainComplex> {
        self.complex.clone()
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coeffs
    }

    pub fn trees(&self) -> impl Iterator<Item = &Tree> {
        self.blocks.iter().map(|b| &b.tree)
    }

    pub(crate) fn block_of(&self, t: &Tree) -> Option<usize> {
        self.tree_index.get(t).copied()
    }

    pub fn label(&self, degree: i64, pos: usize) -> Option<BarBasisLabel> {
        let (b, lex) = *self.basis.get(&degree)?.get(pos)?;
        let block = &self.blocks[b];
        let decoration = unflatten(lex, &block.dims);
        let internal_degree = block.internal_degree(&decoration);
        Some(BarBasisLabel { tree: block.tree.clone(), decoration, tree_degree: degree - internal_degree, internal_degree })
    }

    /// `(degree, position)` of a decorated tree.
    pub fn index_of(&self, tree: &Tree, decoration: &[usize]) -> Option<(i64, usize)> {
        let block = &self.blocks[*self.tree_index.get(tree)?];
        if decoration.len() != block.dims.len() || decoration.iter().zip(&block.dims).any(|(i, d)| i >= d) {
            return None;
        }
        Some(block.position[flatten(decoration, &block.dims)])
    }

    pub(crate) fn position(&self, block: usize, decoration: &[usize]) -> (i64, usize) {
        let b = &self.blocks[block];
        b.position[flatten(decoration, &b.dims)]
    }

    /// Internal degrees occurring in the basis.
    pub fn internal_degrees(&self) -> Vec<i64> {
        let mut ds: Vec<i64> = self
            .blocks
            .iter()
            .flat_map(|b| (0..b.position.len()).map(move |lex| b.internal_degree(&unflatten(lex, &b.dims))))
            .collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// The direct summand of internal degree `t`, a subcomplex since the
    /// differential preserves internal degree.
    pub fn internal_slice(&self, t: i64) -> Result<ChainComplex, BarcobarError> {
        let mut module = GradedFreeModule::new();
        let mut new_pos: BTreeMap<i64, Vec<Option<usize>>> = BTreeMap::new();
        for (d, items) in &self.basis {
            let labels = self.complex.module().labels(*d);
            let v = new_pos.entry(*d).or_default();
            for (pos, (b, lex)) in items.iter().enumerate() {
                let block = &self.blocks[*b];
                if block.internal_degree(&unflatten(*lex, &block.dims)) == t {
                    v.push(Some(module.push(*d, labels[pos].clone())));
                } else {
                    v.push(None);
                }
            }
        }
        let mut diffs = BTreeMap::new();
        for d in self.complex.degrees() {
            let Some(m) = self.complex.differential(d) else { continue };
            let (src, dst) = (&new_pos[&d], new_pos.get(&(d - 1)));
            let mut e = Vec::new();
            for (r, c, v) in m.entries() {
                if let (Some(c2), Some(r2)) = (src[c], dst.and_then(|x| x[r])) {
                    e.push((r2, c2, v.clone()));
                } else if src[c].is_some() {
                    return Err(BarcobarError::Internal("differential changes internal degree".into()));
                }
            }
            if !e.is_empty() {
                diffs.insert(d, ExactMatrix::from_triplets(self.ring(), module.rank(d - 1), module.rank(d), e)?);
            }
        }
        Ok(ChainComplex::new(self.ring(), module, diffs)?)
    }

    /// Signed relabelling action of a permutation (`sigma[i-1] = σ(i)`) as
    /// degree-wise matrices.
    pub fn relabel_action(&self, sigma: &[u32]) -> Result<BTreeMap<i64, ExactMatrix>, BarcobarError> {
        let c = &self.coeffs;
        let mut entries: BTreeMap<i64, Vec<(usize, usize, Q)>> = BTreeMap::new();
        for block in &self.blocks {
            let plan = block.tree.relabel_with(|x| sigma.get(x as usize - 1).copied().unwrap_or(0))?;
            let tb = *self
                .tree_index
                .get(&plan.target)
                .ok_or_else(|| BarcobarError::Internal("relabelled tree missing".into()))?;
            let target = &self.blocks[tb];
            let s = block.vertices();
            let mut new_slot = vec![0; block.dims.len()];
            let mut actions = Vec::with_capacity(block.dims.len());
            actions.push(c.right.seq().action(block.arities[0], &plan.root_child_perm));
            for v in 0..s {
                new_slot[1 + v] = 1 + plan.vertex_map[v];
                actions.push(c.middle.seq().action(block.arities[1 + v], &plan.vertex_child_perm[v]));
            }
            for j in 0..block.layout.leaves.len() {
                new_slot[1 + s + j] = 1 + s + plan.leaf_map[j];
                actions.push(c.left.seq().action(block.arities[1 + s + j], &plan.leaf_label_perm[j]));
            }
            for (lex, (d, pos)) in block.position.iter().enumerate() {
                let x = unflatten(lex, &block.dims);
                let degs: Vec<i64> = x.iter().enumerate().map(|(k, i)| block.degs[k][*i]).collect();
                let odd = sign_by_targets(&degs, &new_slot);
                let base = if (plan.sign < 0) != odd { -Q::one() } else { Q::one() };
                let mut terms: Vec<(Vec<usize>, Q)> = vec![(vec![0; x.len()], base)];
                for (k, xi) in x.iter().enumerate() {
                    let col = actions[k].column(*xi);
                    let mut next = Vec::with_capacity(terms.len() * col.len());
                    for (y, v) in &terms {
                        for (i, w) in col {
                            let mut y = y.clone();
                            y[new_slot[k]] = *i;
                            next.push((y, v * w));
                        }
                    }
                    terms = next;
                }
                for (y, v) in terms {
                    if v.is_zero() {
                        continue;
                    }
                    let (_, tpos) = target.position[flatten(&y, &target.dims)];
                    entries.entry(*d).or_default().push((tpos, *pos, v));
                }
            }
        }
        let ring = self.ring();
        let mut out = BTreeMap::new();
        for d in self.complex.degrees() {
            let n = self.complex.rank(d);
            out.insert(d, ExactMatrix::from_triplets(ring, n, n, entries.remove(&d).unwrap_or_default())?);
        }
        Ok(out)
    }

    /// Basis table and sparse differential in a stable text format.
    pub fn export_text(&self) -> String {
        let mut s = format!("{} {} arity {}\n", self.kind_name(), self.coeffs.describe(), self.arity);
        for (d, items) in &self.basis {
            for (pos, _) in items.iter().enumerate() {
                let l = self.label(*d, pos).expect("basis element");
                let deco = l.decoration.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
                let _ = writeln!(s, "basis {d} {pos} {} tree_degree {} internal {} deco {deco}", l.tree, l.tree_degree, l.internal_degree);
            }
        }
        for d in self.complex.degrees() {
            if let Some(m) = self.complex.differential(d) {
                let _ = writeln!(s, "differential {d}");
                s.push_str(&m.export_text());
            }
        }
        s
    }
}
