use super::module::{standardize_blocks, LeftKey, SidedModule};
use super::operad::{partial_keys, Cooperad, Operad};
use super::symseq::{adjacent, compose_perm, SymSeq};
use super::tensor::{reorder_matrix, tensor_degrees};
use super::{OpalgError, MAX_ARITY};
use crate::exactla::{q_int, ExactMatrix, GradedFreeModule, Ring};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Com,
    Ass,
    Unit,
}

impl std::str::FromStr for Builtin {
    type Err = OpalgError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "com" => Ok(Builtin::Com),
            "ass" => Ok(Builtin::Ass),
            "unit" | "i" => Ok(Builtin::Unit),
            other => Err(OpalgError::Unknown(other.to_string())),
        }
    }
}

fn check_bound(max_arity: usize) -> Result<(), OpalgError> {
    if max_arity == 0 || max_arity > MAX_ARITY {
        return Err(OpalgError::ArityBound { arity: max_arity, max: MAX_ARITY });
    }
    Ok(())
}

pub fn builtin(which: Builtin, ring: Ring, max_arity: usize) -> Result<Operad, OpalgError> {
    match which {
        Builtin::Com => com(ring, max_arity),
        Builtin::Ass => ass(ring, max_arity),
        Builtin::Unit => {
            check_bound(max_arity)?;
            Ok(Operad::unit(ring, max_arity))
        }
    }
}

/// Rank one in every arity with trivial action.
fn trivial_seq(name: &str, ring: Ring, max_arity: usize, degree: i64, prefix: &str) -> SymSeq {
    let modules = (1..=max_arity).map(|_| GradedFreeModule::uniform(degree, 1, prefix)).collect();
    let ts = (1..=max_arity).map(|n| vec![ExactMatrix::identity(ring, 1); n - 1]).collect();
    SymSeq::new(name, ring, modules, ts).expect("trivial action")
}

/// The commutative operad: every structure map is the identity of `k`.
pub fn com(ring: Ring, max_arity: usize) -> Result<Operad, OpalgError> {
    check_bound(max_arity)?;
    let seq = trivial_seq("com", ring, max_arity, 0, "mu");
    let comps = partial_keys(max_arity).into_iter().map(|k| (k, ExactMatrix::identity(ring, 1))).collect();
    Operad::new(seq, comps)
}

/// Permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn go(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                go(n, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    go(n, &mut cur, &mut used, &mut out);
    out
}

/// Substitutes the word `y` for the letter `a` of `x` (all 0-based).
pub(crate) fn substitute(x: &[usize], a: usize, y: &[usize]) -> Vec<usize> {
    let n = y.len();
    let mut out = Vec::with_capacity(x.len() + n - 1);
    for &l in x {
        if l == a {
            out.extend(y.iter().map(|v| v + a));
        } else if l > a {
            out.push(l + n - 1);
        } else {
            out.push(l);
        }
    }
    out
}

/// The associative operad: `Ass(n)` has the words in `n` letters as basis,
/// with the regular action and composition by substitution.
pub fn ass(ring: Ring, max_arity: usize) -> Result<Operad, OpalgError> {
    check_bound(max_arity)?;
    let words: Vec<Vec<Vec<usize>>> = (1..=max_arity).map(permutations).collect();
    let index = |w: &[usize]| words[w.len() - 1].binary_search(&w.to_vec()).expect("word");
    let label = |w: &Vec<usize>| format!("w{}", w.iter().map(|x| (x + 1).to_string()).collect::<String>());
    let modules: Vec<GradedFreeModule> = words
        .iter()
        .map(|ws| GradedFreeModule::from_parts(BTreeMap::from([(0, ws.iter().map(label).collect())])).expect("distinct words"))
        .collect();
    let ts = (1..=max_arity)
        .map(|n| {
            (0..n - 1)
                .map(|i| {
                    let s = adjacent(n, i);
                    let ws = &words[n - 1];
                    let entries: Vec<_> = ws.iter().enumerate().map(|(c, w)| (index(&compose_perm(&s, w)), c, q_int(1))).collect();
                    ExactMatrix::from_triplets(ring, ws.len(), ws.len(), entries).expect("permutation matrix")
                })
                .collect()
        })
        .collect();
    let seq = SymSeq::new("ass", ring, modules, ts)?;
    let mut comps = BTreeMap::new();
    for (m, a, n) in partial_keys(max_arity) {
        let (xs, ys) = (&words[m - 1], &words[n - 1]);
        let mut entries = Vec::with_capacity(xs.len() * ys.len());
        for (i, x) in xs.iter().enumerate() {
            for (j, y) in ys.iter().enumerate() {
                entries.push((index(&substitute(x, a - 1, y)), i * ys.len() + j, q_int(1)));
            }
        }
        let rows = words[m + n - 2].len();
        comps.insert((m, a, n), ExactMatrix::from_triplets(ring, rows, xs.len() * ys.len(), entries)?);
    }
    Operad::new(seq, comps)
}

fn single_block(n: usize) -> LeftKey {
    vec![(1..=n as u32).collect()]
}

/// Left comodule over the cocommutative cooperad: rank one in degree `r` in
/// every arity, with only the counit component nonzero.
pub fn sphere_comodule(r: i64, ring: Ring, max_arity: usize) -> Result<SidedModule, OpalgError> {
    check_bound(max_arity)?;
    let seq = trivial_seq(&format!("sphere({r})"), ring, max_arity, r, "s");
    let blocks = (1..=max_arity).map(|n| (single_block(n), ExactMatrix::identity(ring, 1))).collect();
    SidedModule::left_comodule(seq, blocks, &com(ring, max_arity)?.dual())
}

/// Left module over the commutative operad dual to [`sphere_comodule`].
pub fn sphere_module(r: i64, ring: Ring, max_arity: usize) -> Result<SidedModule, OpalgError> {
    check_bound(max_arity)?;
    let seq = trivial_seq(&format!("sphere({r})"), ring, max_arity, r, "s");
    let blocks = (1..=max_arity).map(|n| (single_block(n), ExactMatrix::identity(ring, 1))).collect();
    SidedModule::left_module(seq, blocks, &com(ring, max_arity)?)
}

/// The left comodule `C` in every arity over the cocommutative cooperad, for a
/// reduced coalgebra `C` with coproduct `delta : C → C ⊗ C`. The component of a
/// partition into `k` blocks is the iterated coproduct `C → C^{⊗k}`.
///
/// Coassociativity and graded cocommutativity are checked first.
pub fn coalgebra_comodule(
    name: &str,
    c: &GradedFreeModule,
    delta: &ExactMatrix,
    max_arity: usize,
) -> Result<SidedModule, OpalgError> {
    check_bound(max_arity)?;
    let ring = delta.ring();
    let d = c.total_rank();
    if delta.rows() != d * d || delta.cols() != d {
        return Err(OpalgError::shape(format!("coproduct must be {}x{d}", d * d)));
    }
    let degs = c.flat_degrees();
    let pair = tensor_degrees(&[degs.clone(), degs.clone()]);
    if delta.entries().any(|(r, col, _)| pair[r] != degs[col]) {
        return Err(OpalgError::axiom("coproduct preserves degree", name.to_string()));
    }
    let id = ExactMatrix::identity(ring, d);
    let left = delta.kron(&id).mul(delta)?;
    let right = id.kron(delta).mul(delta)?;
    if left.sub(&right)?.nnz() != 0 {
        return Err(OpalgError::axiom("coassociativity", name.to_string()));
    }
    let swap = reorder_matrix(ring, &[degs.clone(), degs.clone()], &[1, 0]);
    if swap.mul(delta)?.sub(delta)?.nnz() != 0 {
        return Err(OpalgError::axiom("cocommutativity", name.to_string()));
    }
    // iterated[k-1] : C → C^{⊗k}
    let mut iterated = vec![id.clone()];
    for k in 2..=max_arity {
        let prev = &iterated[k - 2];
        let ids = (0..k - 2).fold(ExactMatrix::identity(ring, 1), |acc, _| acc.kron(&id));
        iterated.push(delta.kron(&ids).mul(prev)?);
    }
    let modules = (1..=max_arity).map(|_| c.clone()).collect();
    let ts = (1..=max_arity).map(|n| vec![id.clone(); n - 1]).collect();
    let seq = SymSeq::new(name, ring, modules, ts)?;
    let mut blocks = BTreeMap::new();
    for n in 1..=max_arity {
        for key in SidedModule::partitions(n) {
            debug_assert_eq!(standardize_blocks(&key), key);
            blocks.insert(key.clone(), iterated[key.len() - 1].clone());
        }
    }
    SidedModule::left_comodule(seq, blocks, &com(ring, max_arity)?.dual())
}

/// Cocommutative cooperad, the dual of [`com`].
pub fn cocom(ring: Ring, max_arity: usize) -> Result<Cooperad, OpalgError> {
    Ok(com(ring, max_arity)?.dual())
}
