use super::complex::{sign_by_targets, Coefficients};
use super::BarcobarError;
use crate::exactla::{sparse, sparse::SparseVec, ChainComplex, ExactMatrix, GradedFreeModule, Q};
use crate::opalg::tensor::{flatten, unflatten};
use crate::opalg::{standardize_blocks, LeftKey, Operad, SidedModule};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

/// Normalized chains of the simplicial bar construction `R ∘ P^{∘k} ∘ L`.
///
/// A basis element is a strict flag of set partitions `π_0 < … < π_k` of
/// `{1..n}` with `L` on the blocks of `π_0`, `P` on each block of `π_i` (with
/// inputs the blocks of `π_{i-1}` inside it) and `R` on the blocks of `π_k`.
#[derive(Clone, Debug)]
pub struct SimplicialBar {
    pub complex: ChainComplex,
    /// The partitions of each basis flag, by degree and position.
    pub flags: BTreeMap<i64, Vec<Vec<LeftKey>>>,
}

struct Chain {
    parts: Vec<usize>,
    arities: Vec<usize>,
    dims: Vec<usize>,
    degs: Vec<Vec<i64>>,
    position: Vec<(i64, usize)>,
}

enum Op {
    Left(LeftKey),
    Middle(Vec<usize>, Vec<usize>),
    Right(Vec<usize>, Vec<usize>),
}

struct Group {
    new_slot: usize,
    old: Vec<usize>,
    op: Op,
}

struct Face {
    target: usize,
    negative: bool,
    keep: Vec<(usize, usize)>,
    groups: Vec<Group>,
    target_pos: Vec<usize>,
}

struct Lattice {
    parts: Vec<LeftKey>,
}

impl Lattice {
    fn new(n: usize) -> Self {
        Lattice { parts: SidedModule::partitions(n) }
    }

    /// `a` strictly refines `b`.
    fn below(&self, a: usize, b: usize) -> bool {
        let (pa, pb) = (&self.parts[a], &self.parts[b]);
        pa.len() > pb.len() && pa.iter().all(|x| pb.iter().any(|y| x.iter().all(|l| y.contains(l))))
    }

    /// Indices of the blocks of `fine` inside each block of `coarse`.
    fn children(&self, fine: usize, coarse: usize) -> Vec<Vec<usize>> {
        let (pf, pc) = (&self.parts[fine], &self.parts[coarse]);
        pc.iter().map(|c| (0..pf.len()).filter(|i| c.contains(&pf[*i][0])).collect()).collect()
    }
}

/// Slot layout `[R, level k blocks, …, level 1 blocks, L blocks]`.
fn layout(lat: &Lattice, parts: &[usize]) -> Vec<usize> {
    let k = parts.len() - 1;
    let mut a = vec![lat.parts[parts[k]].len()];
    for i in (1..=k).rev() {
        a.extend(lat.children(parts[i - 1], parts[i]).iter().map(Vec::len));
    }
    a.extend(lat.parts[parts[0]].iter().map(Vec::len));
    a
}

fn right_full(r: &SidedModule, m: usize, x: &[(usize, Q)], ys: &[(usize, SparseVec)]) -> SparseVec {
    let mut acc = x.to_vec();
    let mut arity = m;
    let mut pos = 1;
    for (l, y) in ys {
        let map = r.partial_map(arity, pos, *l);
        let dy = r.over().dim(*l);
        let mut out = Vec::new();
        for (i, u) in &acc {
            for (j, v) in y {
                out = sparse::axpy(&out, &(u * v), map.column(i * dy + j));
            }
        }
        acc = out;
        arity += l - 1;
        pos += l;
    }
    acc
}

/// Permutation sending the concatenated children order to sorted order.
fn sort_perm(concat: &[usize]) -> Vec<usize> {
    let mut sorted = concat.to_vec();
    sorted.sort_unstable();
    concat.iter().map(|x| sorted.binary_search(x).expect("child")).collect()
}

pub fn simplicial_bar_complex(
    right: &SidedModule,
    p: &Operad,
    left: &SidedModule,
    arity: usize,
) -> Result<SimplicialBar, BarcobarError> {
    let coeffs = Coefficients::bar(right.clone(), p.clone(), left.clone())?;
    let max = coeffs.max_arity();
    if arity == 0 || arity > max {
        return Err(BarcobarError::ArityBound { arity, max });
    }
    let ring = p.ring();
    let lat = Lattice::new(arity);
    let np = lat.parts.len();
    // all strict flags, by DFS upwards
    let mut flags: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..np).map(|i| vec![i]).collect();
    while let Some(f) = stack.pop() {
        let last = *f.last().expect("nonempty");
        for j in 0..np {
            if lat.below(last, j) {
                let mut g = f.clone();
                g.push(j);
                stack.push(g);
            }
        }
        flags.push(f);
    }
    flags.sort();
    let mut module = GradedFreeModule::new();
    let mut chains: Vec<Chain> = Vec::new();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut flag_table: BTreeMap<i64, Vec<Vec<LeftKey>>> = BTreeMap::new();
    for f in flags {
        let arities = layout(&lat, &f);
        let nleaves = lat.parts[f[0]].len();
        let first_leaf = arities.len() - nleaves;
        let seq = |s: usize| if s == 0 { right.seq() } else if s >= first_leaf { left.seq() } else { p.seq() };
        let dims: Vec<usize> = arities.iter().enumerate().map(|(s, a)| seq(s).dim(*a)).collect();
        if dims.contains(&0) {
            continue;
        }
        let degs: Vec<Vec<i64>> = arities.iter().enumerate().map(|(s, a)| seq(s).degrees(*a)).collect();
        let k = f.len() as i64 - 1;
        let total: usize = dims.iter().product();
        let name: String = f.iter().map(|i| format_partition(&lat.parts[*i])).collect::<Vec<_>>().join("<");
        let mut position = Vec::with_capacity(total);
        for lex in 0..total {
            let x = unflatten(lex, &dims);
            let d = k + x.iter().enumerate().map(|(s, i)| degs[s][*i]).sum::<i64>();
            let mut label = name.clone();
            for (s, i) in x.iter().enumerate() {
                let _ = write!(label, "{}{i}", if s == 0 { " " } else { "." });
            }
            let pos = module.push(d, label);
            flag_table.entry(d).or_default().push(f.iter().map(|i| lat.parts[*i].clone()).collect());
            position.push((d, pos));
        }
        index.insert(f.clone(), chains.len());
        chains.push(Chain { parts: f, arities, dims, degs, position });
    }
    let mut entries: BTreeMap<i64, Vec<(usize, usize, Q)>> = BTreeMap::new();
    for chain in &chains {
        for face in faces(&lat, chain, &index) {
            let target = &chains[face.target];
            for (lex, (d, pos)) in chain.position.iter().enumerate() {
                let x = unflatten(lex, &chain.dims);
                let degs: Vec<i64> = x.iter().enumerate().map(|(s, i)| chain.degs[s][*i]).collect();
                let odd = sign_by_targets(&degs, &face.target_pos);
                let base = if odd != face.negative { -Q::one() } else { Q::one() };
                let mut y = vec![0; target.dims.len()];
                for (o, n) in &face.keep {
                    y[*n] = x[*o];
                }
                let mut terms: Vec<(Vec<usize>, Q)> = vec![(y, base)];
                for g in &face.groups {
                    let comps: Vec<usize> = g.old.iter().map(|s| x[*s]).collect();
                    let v = eval(g, &comps, chain, p, right, left);
                    let mut next = Vec::with_capacity(terms.len() * v.len());
                    for (y, c) in &terms {
                        for (i, w) in &v {
                            let mut y = y.clone();
                            y[g.new_slot] = *i;
                            next.push((y, c * w));
                        }
                    }
                    terms = next;
                }
                for (y, c) in terms {
                    if c.is_zero() {
                        continue;
                    }
                    let (_, tpos) = target.position[flatten(&y, &target.dims)];
                    entries.entry(*d).or_default().push((tpos, *pos, c));
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
    let complex = ChainComplex::new(ring, module, diffs)
        .map_err(|e| BarcobarError::Internal(format!("simplicial bar {}: {e}", coeffs.describe())))?;
    Ok(SimplicialBar { complex, flags: flag_table })
}

fn format_partition(p: &LeftKey) -> String {
    p.iter().map(|b| b.iter().map(u32::to_string).collect::<String>()).collect::<Vec<_>>().join("|")
}

fn eval(g: &Group, comps: &[usize], chain: &Chain, p: &Operad, right: &SidedModule, left: &SidedModule) -> SparseVec {
    match &g.op {
        Op::Left(key) => {
            let dims: Vec<usize> = g.old.iter().map(|s| chain.dims[*s]).collect();
            left.block_map(key).column(flatten(comps, &dims)).to_vec()
        }
        Op::Middle(arities, perm) => {
            let ys: Vec<(usize, SparseVec)> = arities.iter().zip(&comps[1..]).map(|(l, c)| (*l, sparse::unit(*c))).collect();
            let v = p.full_compose(arities.len(), &sparse::unit(comps[0]), &ys);
            p.seq().act(perm.len(), perm, &v)
        }
        Op::Right(arities, perm) => {
            let ys: Vec<(usize, SparseVec)> = arities.iter().zip(&comps[1..]).map(|(l, c)| (*l, sparse::unit(*c))).collect();
            let v = right_full(right, arities.len(), &sparse::unit(comps[0]), &ys);
            right.seq().act(perm.len(), perm, &v)
        }
    }
}

/// Faces `d_0, …, d_k` of a flag with `k ≥ 1`.
fn faces(lat: &Lattice, chain: &Chain, index: &HashMap<Vec<usize>, usize>) -> Vec<Face> {
    let f = &chain.parts;
    let k = f.len() - 1;
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    let nslots = chain.arities.len();
    // slot ranges of each level; level 0 stands for the leaves
    let mut range = vec![(0usize, 0usize); k + 1];
    let mut at = 1;
    for i in (1..=k).rev() {
        let n = lat.parts[f[i]].len();
        range[i] = (at, at + n);
        at += n;
    }
    range[0] = (at, nslots);
    for i in 0..=k {
        let mut g = f.clone();
        g.remove(i);
        let Some(&target) = index.get(&g) else { continue };
        // old slots in new order, with merged groups expanded
        let mut order: Vec<Vec<usize>> = Vec::new();
        let mut groups = Vec::new();
        if i == k {
            // right action absorbs the top level
            let kids = lat.children(f[k - 1], f[k]);
            let mut old = vec![0];
            old.extend(range[k].0..range[k].1);
            let concat: Vec<usize> = kids.concat();
            groups.push(Group { new_slot: 0, old: old.clone(), op: Op::Right(kids.iter().map(Vec::len).collect(), sort_perm(&concat)) });
            order.push(old);
            for s in range[k].1..nslots {
                order.push(vec![s]);
            }
        } else {
            order.push(vec![0]);
            for j in (i + 2..=k).rev() {
                for s in range[j].0..range[j].1 {
                    order.push(vec![s]);
                }
            }
            // blocks of f[i+1], each absorbing its children in f[i]
            let kids = lat.children(f[i], f[i + 1]);
            let upper = range[i + 1].0;
            let lower = range[i].0;
            let below = if i == 0 { None } else { Some(lat.children(f[i - 1], f[i])) };
            for (c, ch) in kids.iter().enumerate() {
                let mut old = vec![upper + c];
                old.extend(ch.iter().map(|d| lower + d));
                let new_slot = order.len();
                let op = match &below {
                    None => {
                        let sets: Vec<Vec<u32>> = ch.iter().map(|d| lat.parts[f[0]][*d].clone()).collect();
                        Op::Left(standardize_blocks(&sets))
                    }
                    Some(grand) => {
                        let concat: Vec<usize> = ch.iter().flat_map(|d| grand[*d].iter().copied()).collect();
                        Op::Middle(ch.iter().map(|d| grand[*d].len()).collect(), sort_perm(&concat))
                    }
                };
                groups.push(Group { new_slot, old: old.clone(), op });
                order.push(old);
            }
            if i >= 1 {
                for j in (0..i).rev() {
                    for s in range[j].0..range[j].1 {
                        order.push(vec![s]);
                    }
                }
            }
        }
        let mut target_pos = vec![0; nslots];
        let mut keep = Vec::new();
        let mut p = 0;
        for (new_slot, olds) in order.iter().enumerate() {
            if olds.len() == 1 && !groups.iter().any(|g| g.new_slot == new_slot) {
                keep.push((olds[0], new_slot));
            }
            for o in olds {
                target_pos[*o] = p;
                p += 1;
            }
        }
        out.push(Face { target, negative: i % 2 == 1, keep, groups, target_pos });
    }
    out
}
