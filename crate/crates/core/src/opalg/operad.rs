use super::symseq::{adjacent, identity_perm, permute, SymSeq};
use super::tensor::{block_perm, reorder_matrix, unflatten};
use super::OpalgError;
use crate::exactla::{sparse, sparse::SparseVec, ExactMatrix, LinAlgError, Ring, Q};
use std::collections::BTreeMap;

/// Key `(m, a, n)` of a partial composition `∘_a : P(m) ⊗ P(n) → P(m+n-1)`, `a` 1-based.
pub type PartialKey = (usize, usize, usize);

/// Reduced operad given by partial compositions on canonical label sets.
#[derive(Clone, Debug, PartialEq)]
pub struct Operad {
    seq: SymSeq,
    comps: BTreeMap<PartialKey, ExactMatrix>,
}

/// Reduced cooperad given by partial cocompositions `Q(m+n-1) → Q(m) ⊗ Q(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cooperad {
    seq: SymSeq,
    cocomps: BTreeMap<PartialKey, ExactMatrix>,
}

pub fn partial_keys(max: usize) -> Vec<PartialKey> {
    let mut keys = Vec::new();
    for m in 1..=max {
        for n in 1..=max + 1 - m {
            for a in 1..=m {
                keys.push((m, a, n));
            }
        }
    }
    keys
}

/// Old-to-new index map on a tensor product when every factor is re-indexed.
pub(crate) fn tensor_reindex(maps: &[Vec<usize>]) -> Vec<usize> {
    let dims: Vec<usize> = maps.iter().map(Vec::len).collect();
    let total: usize = dims.iter().product();
    (0..total)
        .map(|idx| {
            let parts = unflatten(idx, &dims);
            parts.iter().enumerate().fold(0, |acc, (f, p)| acc * dims[f] + maps[f][*p])
        })
        .collect()
}

fn check_reduced(seq: &SymSeq) -> Result<(), OpalgError> {
    let one = seq.module(1);
    if one.total_rank() != 1 || one.rank(0) != 1 {
        return Err(OpalgError::axiom("reduced", "arity 1 must be rank 1 in degree 0"));
    }
    Ok(())
}

/// Shape-checked lookup of a partial map; absent maps are zero.
fn partial_or_zero(
    maps: &BTreeMap<PartialKey, ExactMatrix>,
    key: PartialKey,
    ring: Ring,
    rows: usize,
    cols: usize,
) -> ExactMatrix {
    maps.get(&key).cloned().unwrap_or_else(|| ExactMatrix::zeros(ring, rows, cols))
}

/// Axioms (1)–(4) and equivariance for partial maps `O(m) ⊗ P(n) → O(m+n-1)`
/// where `O` is either `P` itself or a right module over `P`.
pub(crate) fn check_partial_axioms(
    outer: &SymSeq,
    outer_map: &dyn Fn(PartialKey) -> ExactMatrix,
    inner: &Operad,
    outer_is_inner: bool,
) -> Result<(), OpalgError> {
    let ring = outer.ring();
    let p = inner.seq();
    let max = outer.max_arity();
    if p.max_arity() < max {
        return Err(OpalgError::shape(format!("operad known only up to arity {}, need {max}", p.max_arity())));
    }
    if p.ring() != ring {
        return Err(OpalgError::Linear(crate::exactla::LinAlgError::RingMismatch { expected: ring, found: p.ring() }));
    }
    let id = |s: &SymSeq, n: usize| ExactMatrix::identity(ring, s.dim(n));
    // shapes
    for (m, a, n) in partial_keys(max) {
        let f = outer_map((m, a, n));
        if f.rows() != outer.dim(m + n - 1) || f.cols() != outer.dim(m) * p.dim(n) {
            return Err(OpalgError::shape(format!("partial map ({m},{a},{n}) has wrong shape")));
        }
        let (dt, ds) = (outer.degrees(m + n - 1), super::tensor::tensor_degrees(&[outer.degrees(m), p.degrees(n)]));
        if f.entries().any(|(r, c, _)| dt[r] != ds[c]) {
            return Err(OpalgError::axiom("composition preserves degree", format!("({m},{a},{n})")));
        }
    }
    // (3), (4) units
    for m in 1..=max {
        for a in 1..=m {
            if outer_map((m, a, 1)).sub(&id(outer, m))?.nnz() != 0 {
                return Err(OpalgError::axiom("(4) right unit", format!("arity {m}, position {a}")));
            }
        }
        if outer_is_inner && outer_map((1, 1, m)).sub(&id(outer, m))?.nnz() != 0 {
            return Err(OpalgError::axiom("(3) left unit", format!("arity {m}")));
        }
    }
    for m in 2..=max {
        for n in 2..=max {
            for q in 2..=max {
                if m + n + q - 2 > max {
                    continue;
                }
                let fmn = |a| outer_map((m, a, n));
                // (1) sequential
                for a in 1..=m {
                    for b in 1..=n {
                        let lhs = outer_map((m + n - 1, a + b - 1, q)).mul(&fmn(a).kron(&id(p, q)))?;
                        let rhs = outer_map((m, a, n + q - 1)).mul(&id(outer, m).kron(&inner.composition(n, b, q)))?;
                        if lhs.sub(&rhs)?.nnz() != 0 {
                            return Err(OpalgError::axiom(
                                "(1) sequential associativity",
                                format!("arities ({m},{n},{q}), positions ({a},{b})"),
                            ));
                        }
                    }
                }
                // (2) parallel
                let swap = reorder_matrix(ring, &[outer.degrees(m), p.degrees(n), p.degrees(q)], &[0, 2, 1]);
                for a in 1..=m {
                    for a2 in a + 1..=m {
                        let lhs = outer_map((m + n - 1, a2 + n - 1, q)).mul(&fmn(a).kron(&id(p, q)))?;
                        let rhs = outer_map((m + q - 1, a, n))
                            .mul(&outer_map((m, a2, q)).kron(&id(p, n)))?
                            .mul(&swap)?;
                        if lhs.sub(&rhs)?.nnz() != 0 {
                            return Err(OpalgError::axiom(
                                "(2) parallel associativity",
                                format!("arities ({m},{n},{q}), positions ({a},{a2})"),
                            ));
                        }
                    }
                }
            }
        }
    }
    // equivariance
    for (m, a, n) in partial_keys(max) {
        let f = outer_map((m, a, n));
        for i in 0..m.saturating_sub(1) {
            let sigma = adjacent(m, i);
            let lhs = outer.action(m + n - 1, &block_perm(&sigma, a - 1, &identity_perm(n))).mul(&f)?;
            let rhs = outer_map((m, sigma[a - 1] + 1, n)).mul(&outer.action(m, &sigma).kron(&id(p, n)))?;
            if lhs.sub(&rhs)?.nnz() != 0 {
                return Err(OpalgError::axiom("equivariance", format!("({m},{a},{n}) under s{} of the outer factor", i + 1)));
            }
        }
        for j in 0..n.saturating_sub(1) {
            let tau = adjacent(n, j);
            let lhs = outer.action(m + n - 1, &block_perm(&identity_perm(m), a - 1, &tau)).mul(&f)?;
            let rhs = f.mul(&id(outer, m).kron(&p.action(n, &tau)))?;
            if lhs.sub(&rhs)?.nnz() != 0 {
                return Err(OpalgError::axiom("equivariance", format!("({m},{a},{n}) under s{} of the inner factor", j + 1)));
            }
        }
    }
    Ok(())
}

impl Operad {
    /// Validates reducedness, axioms (1)–(4) and equivariance up to the maximum arity.
    pub fn new(seq: SymSeq, comps: BTreeMap<PartialKey, ExactMatrix>) -> Result<Self, OpalgError> {
        check_reduced(&seq)?;
        let op = Operad { seq, comps: comps.into_iter().filter(|(_, m)| !m.is_zero()).collect() };
        check_partial_axioms(&op.seq, &|k| op.composition(k.0, k.1, k.2), &op, true)?;
        Ok(op)
    }

    pub fn seq(&self) -> &SymSeq {
        &self.seq
    }

    pub fn name(&self) -> &str {
        self.seq.name()
    }

    pub fn ring(&self) -> Ring {
        self.seq.ring()
    }

    pub fn max_arity(&self) -> usize {
        self.seq.max_arity()
    }

    pub fn compositions(&self) -> &BTreeMap<PartialKey, ExactMatrix> {
        &self.comps
    }

    /// Matrix of `∘_a : P(m) ⊗ P(n) → P(m+n-1)`.
    pub fn composition(&self, m: usize, a: usize, n: usize) -> ExactMatrix {
        let s = &self.seq;
        partial_or_zero(&self.comps, (m, a, n), s.ring(), s.dim(m + n - 1), s.dim(m) * s.dim(n))
    }

    /// `x ∘_a y` for basis elements `x ∈ P(m)`, `y ∈ P(n)`.
    pub fn compose_basis(&self, m: usize, a: usize, n: usize, x: usize, y: usize) -> SparseVec {
        match self.comps.get(&(m, a, n)) {
            Some(c) => c.column(x * self.seq.dim(n) + y).to_vec(),
            None => Vec::new(),
        }
    }

    /// Bilinear extension of [`Operad::compose_basis`].
    pub fn compose(&self, m: usize, a: usize, n: usize, x: &[(usize, Q)], y: &[(usize, Q)]) -> SparseVec {
        let mut out = Vec::new();
        for (i, u) in x {
            for (j, v) in y {
                let c = u * v;
                out = sparse::axpy(&out, &c, &self.compose_basis(m, a, n, *i, *j));
            }
        }
        out
    }

    /// `γ(x; y_1, …, y_k) = (…((x ∘_1 y_1) ∘_{l_1+1} y_2)…)`, no signs since the
    /// tensor order is kept.
    pub fn full_compose(&self, k: usize, x: &[(usize, Q)], ys: &[(usize, SparseVec)]) -> SparseVec {
        assert_eq!(ys.len(), k);
        let mut acc = x.to_vec();
        let mut arity = k;
        let mut pos = 1;
        for (l, y) in ys {
            acc = self.compose(arity, pos, *l, &acc, y);
            arity += l - 1;
            pos += l;
        }
        acc
    }

    /// Linear dual: a cooperad with transposed maps and negated degrees.
    pub fn dual(&self) -> Cooperad {
        Cooperad { seq: self.seq.dual(), cocomps: dual_maps(&self.seq, &self.comps, false) }
    }

    /// Operad with only the unit: `P(1) = k`, zero above.
    pub fn unit(ring: Ring, max_arity: usize) -> Operad {
        let comps = BTreeMap::from([((1, 1, 1), ExactMatrix::identity(ring, 1))]);
        Operad { seq: SymSeq::unit(ring, max_arity), comps }
    }

    /// Truncation to a smaller maximum arity.
    pub fn truncated(&self, max_arity: usize) -> Result<Operad, OpalgError> {
        let (seq, comps) = truncate(&self.seq, &self.comps, max_arity)?;
        Ok(Operad { seq, comps })
    }

    /// The same operad over another ring.
    pub fn with_ring(&self, ring: Ring) -> Result<Operad, OpalgError> {
        Ok(Operad { seq: self.seq.with_ring(ring)?, comps: self.comps.iter().map(|(k, m)| Ok((*k, m.with_ring(ring)?))).collect::<Result<_, LinAlgError>>()? })
    }
}

impl Cooperad {
    /// Validates the duals of the operad axioms.
    pub fn new(seq: SymSeq, cocomps: BTreeMap<PartialKey, ExactMatrix>) -> Result<Self, OpalgError> {
        check_reduced(&seq)?;
        let q = Cooperad { seq, cocomps: cocomps.into_iter().filter(|(_, m)| !m.is_zero()).collect() };
        let s = &q.seq;
        for (m, a, n) in partial_keys(s.max_arity()) {
            let c = q.cocomposition(m, a, n);
            if let Some(given) = q.cocomps.get(&(m, a, n)) {
                if given.rows() != c.rows() || given.cols() != c.cols() {
                    return Err(OpalgError::shape(format!("cocomposition ({m},{a},{n}) has wrong shape")));
                }
            }
        }
        let d = q.dual();
        check_partial_axioms(d.seq(), &|k| d.composition(k.0, k.1, k.2), &d, true)?;
        Ok(q)
    }

    pub fn seq(&self) -> &SymSeq {
        &self.seq
    }

    pub fn name(&self) -> &str {
        self.seq.name()
    }

    pub fn ring(&self) -> Ring {
        self.seq.ring()
    }

    pub fn max_arity(&self) -> usize {
        self.seq.max_arity()
    }

    pub fn cocompositions(&self) -> &BTreeMap<PartialKey, ExactMatrix> {
        &self.cocomps
    }

    /// Matrix of `Q(m+n-1) → Q(m) ⊗ Q(n)`.
    pub fn cocomposition(&self, m: usize, a: usize, n: usize) -> ExactMatrix {
        let s = &self.seq;
        partial_or_zero(&self.cocomps, (m, a, n), s.ring(), s.dim(m) * s.dim(n), s.dim(m + n - 1))
    }

    /// Cocomposition of a basis element as a vector on the lexicographic tensor basis.
    pub fn cocompose_basis(&self, m: usize, a: usize, n: usize, z: usize) -> SparseVec {
        match self.cocomps.get(&(m, a, n)) {
            Some(c) => c.column(z).to_vec(),
            None => Vec::new(),
        }
    }

    pub fn dual(&self) -> Operad {
        Operad { seq: self.seq.dual(), comps: dual_maps(&self.seq, &self.cocomps, true) }
    }

    pub fn truncated(&self, max_arity: usize) -> Result<Cooperad, OpalgError> {
        let (seq, cocomps) = truncate(&self.seq, &self.cocomps, max_arity)?;
        Ok(Cooperad { seq, cocomps })
    }

    /// The same cooperad over another ring.
    pub fn with_ring(&self, ring: Ring) -> Result<Cooperad, OpalgError> {
        Ok(Cooperad { seq: self.seq.with_ring(ring)?, cocomps: self.cocomps.iter().map(|(k, m)| Ok((*k, m.with_ring(ring)?))).collect::<Result<_, LinAlgError>>()? })
    }
}

fn truncate(
    seq: &SymSeq,
    maps: &BTreeMap<PartialKey, ExactMatrix>,
    max: usize,
) -> Result<(SymSeq, BTreeMap<PartialKey, ExactMatrix>), OpalgError> {
    let max = max.min(seq.max_arity());
    let modules = seq.modules()[..max].to_vec();
    let ts = (1..=max).map(|n| seq.transpositions(n).to_vec()).collect();
    let s = SymSeq::new(seq.name(), seq.ring(), modules, ts)?;
    let m = maps.iter().filter(|((m, _, n), _)| m + n - 1 <= max).map(|(k, v)| (*k, v.clone())).collect();
    Ok((s, m))
}

/// Transposes partial maps into the dual flat order. `co` is true when the
/// input maps are cocompositions.
fn dual_maps(
    seq: &SymSeq,
    maps: &BTreeMap<PartialKey, ExactMatrix>,
    co: bool,
) -> BTreeMap<PartialKey, ExactMatrix> {
    maps.iter()
        .map(|((m, a, n), f)| {
            let single = seq.dual_reindex(m + n - 1);
            let pair = tensor_reindex(&[seq.dual_reindex(*m), seq.dual_reindex(*n)]);
            let t = f.transpose();
            let t = if co { permute(&t, &single, &pair) } else { permute(&t, &pair, &single) };
            ((*m, *a, *n), t)
        })
        .collect()
}
