use super::complex::{BarComplex, Coefficients, Construction, Middle};
use super::maps::{bar_cocomposition, canonical_sets, cobar_composition, module_structure_map, StructureMap};
use super::BarcobarError;
use crate::exactla::{homology, sparse, ChainMap, Echelon, ExactMatrix, GradedFreeModule, HomologyBasis, HomologySummary, Ring, Q};
use crate::exactla::sparse::SparseVec;
use crate::opalg::tensor::unflatten;
use crate::opalg::{adjacent, compose_product, partial_keys, Cooperad, Operad, SidedModule, SymSeq};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Homology of one arity of a construction.
#[derive(Clone, Debug, PartialEq)]
pub struct ArityReport {
    pub arity: usize,
    pub homology: HomologySummary,
    /// Tree degree where homology must sit: `n − 1` for bar, `1 − n` for cobar.
    pub tree_degree: i64,
    /// Homology of each internal-degree summand sits in `tree_degree + t`.
    pub concentrated: bool,
}

/// Koszul duality data of an operad (via its bar construction) or of a
/// cooperad (via its cobar construction), over the rationals.
#[derive(Clone, Debug)]
pub struct KoszulReport {
    pub name: String,
    pub construction: Construction,
    pub arities: Vec<ArityReport>,
    /// The homology (co)operad, present when every arity is concentrated.
    pub dual: Option<Middle>,
}

impl KoszulReport {
    pub fn is_koszul(&self) -> bool {
        self.arities.iter().all(|a| a.concentrated)
    }

    /// Total homology rank per arity.
    pub fn dims(&self) -> Vec<usize> {
        self.arities.iter().map(|a| a.homology.total_rank()).collect()
    }

    pub fn cooperad(&self) -> Option<&Cooperad> {
        match &self.dual {
            Some(Middle::Cooperad(q)) => Some(q),
            _ => None,
        }
    }

    pub fn operad(&self) -> Option<&Operad> {
        match &self.dual {
            Some(Middle::Operad(p)) => Some(p),
            _ => None,
        }
    }
}

/// A homology basis for every degree of one complex, flattened by ascending degree.
struct HomologyData {
    bc: Arc<BarComplex>,
    bases: BTreeMap<i64, HomologyBasis>,
    offsets: BTreeMap<i64, usize>,
    module: GradedFreeModule,
}

impl HomologyData {
    fn new(bc: Arc<BarComplex>, prefix: &str) -> Self {
        let c = bc.complex();
        let mut bases = BTreeMap::new();
        let mut offsets = BTreeMap::new();
        let mut module = GradedFreeModule::new();
        let mut total = 0;
        for d in c.degrees() {
            let b = HomologyBasis::new(c, d);
            if b.dim() == 0 {
                continue;
            }
            offsets.insert(d, total);
            for i in 0..b.dim() {
                module.push(d, format!("{prefix}{}_{}", bc.arity(), total + i));
            }
            total += b.dim();
            bases.insert(d, b);
        }
        HomologyData { bc, bases, offsets, module }
    }

    fn dim(&self) -> usize {
        self.module.total_rank()
    }

    /// Flat index and representative of every class, by ascending degree.
    fn classes(&self) -> Vec<(i64, usize, &SparseVec)> {
        self.bases
            .iter()
            .flat_map(|(d, b)| b.representatives().iter().enumerate().map(move |(i, z)| (*d, self.offsets[d] + i, z)))
            .collect()
    }

    /// Matrix of a degree-preserving chain endomorphism on homology.
    fn induced_endo(&self, g: &BTreeMap<i64, ExactMatrix>) -> Result<ExactMatrix, BarcobarError> {
        let n = self.dim();
        let mut entries = Vec::new();
        for (d, b) in &self.bases {
            let m = b.induced(b, &g[d])?;
            let off = self.offsets[d];
            entries.extend(m.entries().map(|(r, c, v)| (off + r, off + c, v.clone())));
        }
        Ok(ExactMatrix::from_triplets(Ring::Rat, n, n, entries)?)
    }

    /// Induced action of the adjacent transpositions, checked as chain maps first.
    fn transpositions(&self) -> Result<Vec<ExactMatrix>, BarcobarError> {
        let n = self.bc.arity();
        (0..n.saturating_sub(1))
            .map(|t| {
                let sigma: Vec<u32> = adjacent(n, t).iter().map(|x| *x as u32 + 1).collect();
                let g = self.bc.relabel_action(&sigma)?;
                ChainMap::new(self.bc.complex_arc(), self.bc.complex_arc(), g.clone())
                    .map_err(|e| BarcobarError::Internal(format!("relabelling is not a chain map: {e}")))?;
                self.induced_endo(&g)
            })
            .collect()
    }
}

/// Product classes of the tensor side of a structure map, per degree, with
/// their lexicographic index over the factors' flat homology bases.
fn product_bases(smap: &StructureMap, factors: &[&HomologyData]) -> Result<BTreeMap<i64, (HomologyBasis, Vec<usize>)>, BarcobarError> {
    let dims: Vec<usize> = factors.iter().map(|f| f.dim()).collect();
    let classes: Vec<Vec<(i64, usize, &SparseVec)>> = factors.iter().map(|f| f.classes()).collect();
    let mut by_degree: BTreeMap<i64, (Vec<SparseVec>, Vec<usize>)> = BTreeMap::new();
    let total: usize = dims.iter().product();
    for lex in 0..total {
        let picked: Vec<&(i64, usize, &SparseVec)> =
            unflatten(lex, &dims).into_iter().enumerate().map(|(f, i)| &classes[f][i]).collect();
        let degree: i64 = picked.iter().map(|c| c.0).sum();
        let mut terms: Vec<(Vec<(i64, usize)>, Q)> = vec![(Vec::new(), Q::one())];
        for (d, _, z) in &picked {
            let mut next = Vec::with_capacity(terms.len() * z.len());
            for (parts, v) in &terms {
                for (p, w) in z.iter() {
                    let mut parts = parts.clone();
                    parts.push((*d, *p));
                    next.push((parts, v * w));
                }
            }
            terms = next;
        }
        let mut vec = Vec::with_capacity(terms.len());
        for (parts, v) in terms {
            let (_, pos) = smap.tensor.index_of(&parts).ok_or_else(|| BarcobarError::Internal("missing tensor generator".into()))?;
            vec.push((pos, v));
        }
        let entry = by_degree.entry(degree).or_default();
        entry.0.push(sparse::from_entries(vec));
        entry.1.push(lex);
    }
    let tc = &smap.tensor.complex;
    let mut out = BTreeMap::new();
    for (d, (cands, lex)) in by_degree {
        let (basis, all) = HomologyBasis::from_candidates(tc, d, cands);
        if !all {
            return Err(BarcobarError::Internal("product classes are dependent".into()));
        }
        out.insert(d, (basis, lex));
    }
    Ok(out)
}

/// Map induced on homology by a structure map between `whole` and the tensor of `factors`.
fn induced_structure(smap: &StructureMap, whole: &HomologyData, factors: &[&HomologyData]) -> Result<ExactMatrix, BarcobarError> {
    let products = product_bases(smap, factors)?;
    let tensor_dim: usize = factors.iter().map(|f| f.dim()).product();
    let mut entries = Vec::new();
    match whole.bc.construction() {
        Construction::Bar => {
            for (d, j, z) in whole.classes() {
                let image = smap.map.component(d).apply(z);
                if image.is_empty() {
                    continue;
                }
                let (basis, lex) = products.get(&d).ok_or_else(|| BarcobarError::Internal("image outside product classes".into()))?;
                for (i, v) in basis.coordinates(&image)?.into_iter().enumerate() {
                    if !v.is_zero() {
                        entries.push((lex[i], j, v));
                    }
                }
            }
            Ok(ExactMatrix::from_triplets(Ring::Rat, tensor_dim, whole.dim(), entries)?)
        }
        Construction::Cobar => {
            for (d, (basis, lex)) in &products {
                for (z, l) in basis.representatives().iter().zip(lex) {
                    let image = smap.map.component(*d).apply(z);
                    if image.is_empty() {
                        continue;
                    }
                    let target = whole.bases.get(d).ok_or_else(|| BarcobarError::Internal("image outside homology".into()))?;
                    let off = whole.offsets[d];
                    for (i, v) in target.coordinates(&image)?.into_iter().enumerate() {
                        if !v.is_zero() {
                            entries.push((off + i, *l, v));
                        }
                    }
                }
            }
            Ok(ExactMatrix::from_triplets(Ring::Rat, whole.dim(), tensor_dim, entries)?)
        }
    }
}

fn arity_report(bc: &BarComplex) -> Result<ArityReport, BarcobarError> {
    let n = bc.arity() as i64;
    let tree_degree = match bc.construction() {
        Construction::Bar => n - 1,
        Construction::Cobar => 1 - n,
    };
    let h = homology(bc.complex())?;
    let internal = bc.internal_degrees();
    let concentrated = if internal.len() <= 1 {
        internal.first().is_none_or(|t| h.is_concentrated_in(tree_degree + t))
    } else {
        let mut ok = true;
        for t in internal {
            ok &= homology(&bc.internal_slice(t)?)?.is_concentrated_in(tree_degree + t);
        }
        ok
    };
    Ok(ArityReport { arity: bc.arity(), homology: h, tree_degree, concentrated })
}

fn run(construction: Construction, coeffs: Coefficients, max_arity: usize) -> Result<(KoszulReport, Vec<HomologyData>), BarcobarError> {
    let name = coeffs.middle.seq().name().to_string();
    let coeffs = Arc::new(coeffs);
    let complexes = super::family(construction, &coeffs, max_arity, Ring::Rat)?;
    let arities = complexes.iter().map(|c| arity_report(c)).collect::<Result<Vec<_>, _>>()?;
    let mut report = KoszulReport { name: name.clone(), construction, arities, dual: None };
    if !report.is_koszul() {
        return Ok((report, Vec::new()));
    }
    let data: Vec<HomologyData> = complexes.into_iter().map(|c| HomologyData::new(c, "k")).collect();
    let modules = data.iter().map(|d| d.module.clone()).collect();
    let ts = data.iter().map(|d| d.transpositions()).collect::<Result<Vec<_>, _>>()?;
    let seq = SymSeq::new(format!("koszul({name})"), Ring::Rat, modules, ts)?;
    let mut maps = BTreeMap::new();
    for (m, a, n) in partial_keys(max_arity) {
        let (sa, sb) = canonical_sets(m, a, n);
        let (t, u, v) = (&data[m - 1], &data[n - 1], &data[m + n - 2]);
        let smap = match construction {
            Construction::Bar => bar_cocomposition(&v.bc, &t.bc, &u.bc, &sa, &sb, a as u32)?,
            Construction::Cobar => cobar_composition(&t.bc, &u.bc, &v.bc, &sa, &sb, a as u32)?,
        };
        let mat = induced_structure(&smap, v, &[t, u])?;
        if !mat.is_zero() {
            maps.insert((m, a, n), mat);
        }
    }
    report.dual = Some(match construction {
        Construction::Bar => Middle::Cooperad(Cooperad::new(seq, maps)?),
        Construction::Cobar => Middle::Operad(Operad::new(seq, maps)?),
    });
    Ok((report, data))
}

/// Koszul report of an operad through `B(I, P, I)` in arities `1..=max_arity`.
pub fn koszul(p: &Operad, max_arity: usize) -> Result<KoszulReport, BarcobarError> {
    Ok(run(Construction::Bar, Coefficients::reduced_bar(&p.with_ring(Ring::Rat)?), max_arity)?.0)
}

/// Koszul report of a cooperad through `Ω(I, Q, I)` in arities `1..=max_arity`.
pub fn koszul_of_cooperad(q: &Cooperad, max_arity: usize) -> Result<KoszulReport, BarcobarError> {
    Ok(run(Construction::Cobar, Coefficients::reduced_cobar(&q.with_ring(Ring::Rat)?), max_arity)?.0)
}

/// Outcome of the Jacobi test on the binary generator of an operad.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiCheck {
    /// Eigenvalue of the transposition on the binary generator.
    pub bracket_sign: i64,
    /// Rank of the span of the three cyclic translates of `g ∘_1 g`.
    pub translates_rank: usize,
    /// Relation among the translates, first nonzero coefficient normalized to one.
    pub relation: Vec<Q>,
    /// The relation space is one-dimensional with every coefficient `±1`.
    pub holds: bool,
}

/// Tests the Jacobi relation among the cyclic translates of `g ∘_1 g` for the
/// generator `g` of a rank-one arity two.
pub fn jacobi_relation(p: &Operad) -> Result<JacobiCheck, BarcobarError> {
    if p.max_arity() < 3 || p.seq().dim(2) != 1 {
        return Err(BarcobarError::Incompatible("needs arity three and a rank-one arity two".into()));
    }
    let s = p.seq().transposition(2, 0).get(0, 0);
    let bracket_sign = if s == Q::one() {
        1
    } else if s == -Q::one() {
        -1
    } else {
        return Err(BarcobarError::Incompatible("transposition does not act by a sign".into()));
    };
    let g = sparse::unit(0);
    let x = p.compose(2, 1, 2, &g, &g);
    let cycles: [Vec<usize>; 3] = [vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
    let translates: Vec<SparseVec> = cycles.iter().map(|c| p.seq().act(3, c, &x)).collect();
    let mut ech = Echelon::new();
    let mut kernel = Vec::new();
    for (j, col) in translates.iter().enumerate() {
        let (res, combo) = ech.reduce(col);
        if res.is_empty() {
            kernel.push(sparse::axpy(&sparse::unit(j), &-Q::one(), &combo));
        } else {
            ech.insert(col, &sparse::unit(j));
        }
    }
    let translates_rank = ech.len();
    let relation = match kernel.first() {
        Some(k) => {
            let lead = k[0].1.clone();
            (0..3).map(|i| sparse::get(k, i) / &lead).collect()
        }
        None => vec![Q::zero(); 3],
    };
    let holds = kernel.len() == 1 && relation.iter().all(|c| c.abs() == Q::one());
    Ok(JacobiCheck { bracket_sign, translates_rank, relation, holds })
}

/// Homology of the derivatives of the identity, `Ω(I, coCom, I)`, with its operad structure.
#[derive(Clone, Debug)]
pub struct DerivativesReport {
    pub koszul: KoszulReport,
    /// Homology is `(n − 1)!` copies of the ground ring in degree `1 − n`.
    pub ranks_match: bool,
    pub jacobi: Option<JacobiCheck>,
}

impl DerivativesReport {
    pub fn operad(&self) -> Option<&Operad> {
        self.koszul.operad()
    }
}

pub fn derivatives_homology(max_arity: usize) -> Result<DerivativesReport, BarcobarError> {
    let q = crate::opalg::cocom(Ring::Rat, max_arity)?;
    let koszul = koszul_of_cooperad(&q, max_arity)?;
    let ranks_match = koszul.arities.iter().all(|a| {
        let n = a.arity as i64;
        let f: usize = (1..a.arity).product();
        a.homology.ranks() == BTreeMap::from([(1 - n, f)])
    });
    let jacobi = match koszul.operad() {
        Some(p) if max_arity >= 3 => Some(jacobi_relation(p)?),
        _ => None,
    };
    Ok(DerivativesReport { koszul, ranks_match, jacobi })
}

/// Homology of `Ω(I, coCom, L)` for a left comodule `L`, with its left module
/// structure over the homology of the derivatives of the identity.
#[derive(Clone, Debug)]
pub struct ModuleMxReport {
    pub name: String,
    pub arities: Vec<ArityReport>,
    /// The induced left module, validated against the module axioms.
    pub module: SidedModule,
    /// Ranks of `(H(∂I) ∘ L)(n)` for comparison.
    pub compose_ranks: Vec<BTreeMap<i64, usize>>,
}

impl ModuleMxReport {
    pub fn ranks(&self) -> Vec<BTreeMap<i64, usize>> {
        self.arities.iter().map(|a| a.homology.ranks()).collect()
    }

    pub fn matches_compose(&self) -> bool {
        self.ranks() == self.compose_ranks
    }
}

pub fn module_mx_homology(left: &SidedModule, max_arity: usize) -> Result<ModuleMxReport, BarcobarError> {
    let q = crate::opalg::cocom(Ring::Rat, max_arity)?;
    let (deriv, dd) = run(Construction::Cobar, Coefficients::reduced_cobar(&q), max_arity)?;
    let Some(Middle::Operad(h)) = deriv.dual else {
        return Err(BarcobarError::Internal("derivatives of the identity are not concentrated".into()));
    };
    let left = left.with_ring(Ring::Rat)?;
    let coeffs = Arc::new(Coefficients::left_cobar(&q, left.clone())?);
    let complexes = super::family(Construction::Cobar, &coeffs, max_arity, Ring::Rat)?;
    let arities = complexes
        .iter()
        .map(|c| {
            let h = homology(c.complex())?;
            Ok(ArityReport { arity: c.arity(), homology: h, tree_degree: 1 - c.arity() as i64, concentrated: false })
        })
        .collect::<Result<Vec<_>, BarcobarError>>()?;
    let data: Vec<HomologyData> = complexes.into_iter().map(|c| HomologyData::new(c, "m")).collect();
    let modules = data.iter().map(|d| d.module.clone()).collect();
    let ts = data.iter().map(|d| d.transpositions()).collect::<Result<Vec<_>, _>>()?;
    let seq = SymSeq::new(format!("mx({})", left.name()), Ring::Rat, modules, ts)?;
    let mut blocks = BTreeMap::new();
    for n in 1..=max_arity {
        for key in SidedModule::partitions(n) {
            let parts: Vec<&BarComplex> = key.iter().map(|b| data[b.len() - 1].bc.as_ref()).collect();
            let outer = &dd[key.len() - 1];
            let smap = module_structure_map(&data[n - 1].bc, &outer.bc, &parts, &key)?;
            let mut factors = vec![outer];
            factors.extend(key.iter().map(|b| &data[b.len() - 1]));
            let mat = induced_structure(&smap, &data[n - 1], &factors)?;
            if !mat.is_zero() {
                blocks.insert(key, mat);
            }
        }
    }
    let compose_ranks = (1..=max_arity)
        .map(|n| compose_product(h.seq(), left.seq(), n).map(|c| c.ranks()))
        .collect::<Result<Vec<_>, _>>()?;
    let module = SidedModule::left_module(seq, blocks, &h)?;
    Ok(ModuleMxReport { name: left.name().to_string(), arities, module, compose_ranks })
}
