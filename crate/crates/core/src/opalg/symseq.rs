use super::OpalgError;
use crate::exactla::{sparse::SparseVec, ExactMatrix, GradedFreeModule, LinAlgError, Ring};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Permutation of `0..n` as a list of images.
pub type Perm = Vec<usize>;

pub fn identity_perm(n: usize) -> Perm {
    (0..n).collect()
}

/// Adjacent transposition swapping `i` and `i + 1` (0-based).
pub fn adjacent(n: usize, i: usize) -> Perm {
    let mut p = identity_perm(n);
    p.swap(i, i + 1);
    p
}

pub fn compose_perm(outer: &[usize], inner: &[usize]) -> Perm {
    inner.iter().map(|i| outer[*i]).collect()
}

pub fn invert_perm(p: &[usize]) -> Perm {
    let mut inv = vec![0; p.len()];
    for (i, x) in p.iter().enumerate() {
        inv[*x] = i;
    }
    inv
}

/// Symmetric sequence: a graded free module per arity with the action of the
/// adjacent transpositions. `σ` acts so that input `σ(i)` of `σ·x` is input
/// `i` of `x`; this is a left action.
pub struct SymSeq {
    name: String,
    ring: Ring,
    modules: Vec<GradedFreeModule>,
    transpositions: Vec<Vec<ExactMatrix>>,
    cache: Mutex<HashMap<(usize, Perm), Arc<ExactMatrix>>>,
}

impl Clone for SymSeq {
    fn clone(&self) -> Self {
        SymSeq {
            name: self.name.clone(),
            ring: self.ring,
            modules: self.modules.clone(),
            transpositions: self.transpositions.clone(),
            cache: Mutex::new(HashMap::new()),
        }
    }
}

impl PartialEq for SymSeq {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.ring == other.ring
            && self.modules == other.modules
            && self.transpositions == other.transpositions
    }
}

impl std::fmt::Debug for SymSeq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SymSeq").field("name", &self.name).field("ring", &self.ring).field("dims", &self.dims()).finish()
    }
}

impl SymSeq {
    /// Validates shapes, degree preservation and the Coxeter relations.
    pub fn new(
        name: impl Into<String>,
        ring: Ring,
        modules: Vec<GradedFreeModule>,
        transpositions: Vec<Vec<ExactMatrix>>,
    ) -> Result<Self, OpalgError> {
        let s = SymSeq { name: name.into(), ring, modules, transpositions, cache: Mutex::new(HashMap::new()) };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<(), OpalgError> {
        if self.transpositions.len() != self.modules.len() {
            return Err(OpalgError::shape("one list of transpositions per arity"));
        }
        for n in 1..=self.max_arity() {
            let d = self.dim(n);
            let ts = &self.transpositions[n - 1];
            if ts.len() != n - 1 {
                return Err(OpalgError::shape(format!("arity {n} needs {} transpositions", n - 1)));
            }
            let degs = self.degrees(n);
            for (i, t) in ts.iter().enumerate() {
                if t.rows() != d || t.cols() != d {
                    return Err(OpalgError::shape(format!("transposition s{} at arity {n} is not {d}x{d}", i + 1)));
                }
                if t.entries().any(|(r, c, _)| degs[r] != degs[c]) {
                    return Err(OpalgError::axiom("action preserves degree", format!("s{} at arity {n}", i + 1)));
                }
                let id = ExactMatrix::identity(self.ring, d);
                if t.mul(t)?.sub(&id)?.nnz() != 0 {
                    return Err(OpalgError::axiom("Coxeter s_i^2 = 1", format!("s{} at arity {n}", i + 1)));
                }
                if i + 1 < ts.len() {
                    let st = t.mul(&ts[i + 1])?;
                    let cube = st.mul(&st)?.mul(&st)?;
                    if cube.sub(&id)?.nnz() != 0 {
                        return Err(OpalgError::axiom("Coxeter (s_i s_{i+1})^3 = 1", format!("i = {} at arity {n}", i + 1)));
                    }
                }
                for (j, u) in ts.iter().enumerate().skip(i + 2) {
                    if t.mul(u)?.sub(&u.mul(t)?)?.nnz() != 0 {
                        return Err(OpalgError::axiom(
                            "Coxeter s_i s_j = s_j s_i",
                            format!("i = {}, j = {} at arity {n}", i + 1, j + 1),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// The same sequence over another ring; fails on non-integral entries for `Ring::Int`.
    pub fn with_ring(&self, ring: Ring) -> Result<SymSeq, LinAlgError> {
        let ts = self
            .transpositions
            .iter()
            .map(|v| v.iter().map(|m| m.with_ring(ring)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SymSeq { name: self.name.clone(), ring, modules: self.modules.clone(), transpositions: ts, cache: Mutex::new(HashMap::new()) })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn max_arity(&self) -> usize {
        self.modules.len()
    }

    /// Component in arity `n`; arities beyond the maximum are zero.
    pub fn module(&self, n: usize) -> GradedFreeModule {
        self.modules.get(n.wrapping_sub(1)).cloned().unwrap_or_default()
    }

    pub fn module_ref(&self, n: usize) -> Option<&GradedFreeModule> {
        self.modules.get(n.wrapping_sub(1))
    }

    pub fn modules(&self) -> &[GradedFreeModule] {
        &self.modules
    }

    pub fn dim(&self, n: usize) -> usize {
        self.module_ref(n).map_or(0, GradedFreeModule::total_rank)
    }

    pub fn dims(&self) -> Vec<usize> {
        (1..=self.max_arity()).map(|n| self.dim(n)).collect()
    }

    /// Degree of every flat basis element in arity `n`.
    pub fn degrees(&self, n: usize) -> Vec<i64> {
        self.module_ref(n).map(GradedFreeModule::flat_degrees).unwrap_or_default()
    }

    pub fn transposition(&self, n: usize, i: usize) -> &ExactMatrix {
        &self.transpositions[n - 1][i]
    }

    pub fn transpositions(&self, n: usize) -> &[ExactMatrix] {
        &self.transpositions[n - 1]
    }

    /// Matrix of `σ ∈ Σ_n` built from adjacent transpositions and cached.
    pub fn action(&self, n: usize, sigma: &[usize]) -> Arc<ExactMatrix> {
        let key = (n, sigma.to_vec());
        if let Some(m) = self.cache.lock().expect("cache lock").get(&key) {
            return m.clone();
        }
        let m = match (0..n.saturating_sub(1)).find(|&i| sigma[i] > sigma[i + 1]) {
            None => ExactMatrix::identity(self.ring, self.dim(n)),
            Some(i) => {
                // σ = (σ ∘ s_i) ∘ s_i with one inversion fewer
                let shorter = compose_perm(sigma, &adjacent(n, i));
                self.action(n, &shorter).mul(self.transposition(n, i)).expect("square")
            }
        };
        let m = Arc::new(m);
        self.cache.lock().expect("cache lock").insert(key, m.clone());
        m
    }

    pub fn act(&self, n: usize, sigma: &[usize], v: &[(usize, crate::exactla::Q)]) -> SparseVec {
        if sigma.iter().enumerate().all(|(i, x)| i == *x) {
            return v.to_vec();
        }
        self.action(n, sigma).apply(v)
    }

    /// Degrees negated, action transposed. The flat order is re-indexed so that
    /// degrees stay ascending; `dual_reindex(n)` gives the old-to-new map.
    pub fn dual(&self) -> SymSeq {
        let modules = self.modules.iter().map(GradedFreeModule::negated).collect();
        let transpositions = (1..=self.max_arity())
            .map(|n| {
                let r = self.dual_reindex(n);
                self.transpositions[n - 1].iter().map(|t| permute_both(&t.transpose(), &r)).collect()
            })
            .collect();
        SymSeq { name: format!("dual({})", self.name), ring: self.ring, modules, transpositions, cache: Mutex::new(HashMap::new()) }
    }

    /// Position in the dual's flat order of each flat basis element.
    pub fn dual_reindex(&self, n: usize) -> Vec<usize> {
        let Some(m) = self.module_ref(n) else { return Vec::new() };
        let dual = m.negated();
        m.flat().into_iter().map(|(d, p)| dual.flat_index(-d, p)).collect()
    }

    /// Unit symmetric sequence: rank one in arity one.
    pub fn unit(ring: Ring, max_arity: usize) -> SymSeq {
        let modules = (1..=max_arity)
            .map(|n| if n == 1 { GradedFreeModule::uniform(0, 1, "1") } else { GradedFreeModule::new() })
            .collect();
        let transpositions =
            (1..=max_arity).map(|n| (1..n).map(|_| ExactMatrix::zeros(ring, 0, 0)).collect()).collect();
        SymSeq { name: "unit".into(), ring, modules, transpositions, cache: Mutex::new(HashMap::new()) }
    }
}

/// Renumbers rows and columns of a square matrix by `r` (old index to new index).
pub(crate) fn permute_both(m: &ExactMatrix, r: &[usize]) -> ExactMatrix {
    permute(m, r, r)
}

/// Renumbers rows by `rows` and columns by `cols` (old index to new index).
pub(crate) fn permute(m: &ExactMatrix, rows: &[usize], cols: &[usize]) -> ExactMatrix {
    let entries: Vec<_> = m.entries().map(|(i, j, v)| (rows[i], cols[j], v.clone())).collect();
    ExactMatrix::from_triplets(m.ring(), m.rows(), m.cols(), entries).expect("permuted entries")
}
