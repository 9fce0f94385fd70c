use crate::cache::{file_digest, Cache, Request};
use crate::output::Document;
use crate::{inputs, CliError, Command, Construct};
use opbar::acceptance::{run_criterion, CRITERIA};
use opbar::barcobar::{bar_complex, cobar_complex, derivatives_homology, koszul, module_mx_homology, BarComplex};
use opbar::exactla::{homology, HomologySummary, Ring};
use opbar::opalg::{compose_product, sphere_comodule, sphere_module, Side, SidedModule};
use opbar::partition::{partition_character, partition_complex};
use opbar::trees::{enumerate_trees, Species};
use serde_json::{json, Value};
use std::path::Path;

pub struct Outcome {
    pub doc: Document,
    pub failed: Vec<(u8, &'static str)>,
}

impl From<Document> for Outcome {
    fn from(doc: Document) -> Self {
        Outcome { doc, failed: Vec::new() }
    }
}

pub fn run(command: &Command, cache: Option<&Cache>) -> Result<Outcome, CliError> {
    if let Command::Verify { max_arity, criterion } = command {
        return verify(*max_arity, criterion);
    }
    let req = request(command)?;
    let exporting = matches!(command, Command::Bar { common, .. } | Command::Cobar { common, .. } if common.export.is_some());
    if let (Some(c), false) = (cache, exporting) {
        if let Some(doc) = c.get(&req) {
            return Ok(doc.into());
        }
    }
    let doc = compute(command)?;
    if let Some(c) = cache {
        c.put(&req, &doc)?;
    }
    Ok(doc.into())
}

fn file_param(path: &Path) -> Result<String, CliError> {
    file_digest(path).map(|d| format!("sha256:{d}")).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Structure names stand for themselves; file paths are replaced by their content hash.
fn named(input: &str) -> Result<String, CliError> {
    let p = Path::new(input);
    if matches!(input, "com" | "ass" | "cocom" | "coass") || input.starts_with("sphere:") || !p.exists() {
        Ok(input.to_string())
    } else {
        file_param(p)
    }
}

fn construct_params(req: Request, c: &Construct) -> Request {
    let req = match c.arity {
        Some(n) => req.param("arity", n),
        None => req.param("max_arity", c.max_arity),
    };
    let req = req.param("ring", c.ring);
    match c.sphere {
        Some(r) => req.param("sphere", r),
        None => req,
    }
}

fn request(command: &Command) -> Result<Request, CliError> {
    Ok(match command {
        Command::Trees { n, species, count } => {
            Request::new("trees").param("n", n).param("species", species.to_ascii_lowercase()).param("count", count)
        }
        Command::Bar { operad, common } => construct_params(Request::new("bar").param("operad", named(operad)?), common),
        Command::Cobar { cooperad, common } => {
            construct_params(Request::new("cobar").param("cooperad", named(cooperad)?), common)
        }
        Command::Koszul { operad, max_arity } => {
            Request::new("koszul").param("operad", named(operad)?).param("max_arity", max_arity)
        }
        Command::Partition { n, character, ring } => {
            Request::new("partition").param("n", n).param("character", character).param("ring", ring)
        }
        Command::Derivatives { max_arity } => Request::new("derivatives").param("max_arity", max_arity),
        Command::ModuleMx { sphere, coalgebra, max_arity } => {
            let req = Request::new("module-mx").param("max_arity", max_arity);
            match (sphere, coalgebra) {
                (Some(r), _) => req.param("sphere", r),
                (None, Some(p)) => req.param("coalgebra", file_param(p)?),
                (None, None) => return Err(CliError::Usage("need --sphere or --coalgebra".into())),
            }
        }
        Command::Compose { outer, inner, arity } => {
            Request::new("compose").param("outer", named(outer)?).param("inner", named(inner)?).param("arity", arity)
        }
        Command::Verify { .. } => unreachable!("verify is never cached"),
    })
}

fn compute(command: &Command) -> Result<Document, CliError> {
    match command {
        Command::Trees { n, species, count } => trees(*n, species, *count),
        Command::Bar { operad, common } => {
            let top = common.arities().end().to_owned();
            let p = inputs::operad(operad, common.ring, top)?;
            let left = match common.sphere {
                Some(r) => sphere_module(r, common.ring, top)?,
                None => SidedModule::unit(Side::LeftModule, p.seq()),
            };
            let right = SidedModule::unit(Side::RightModule, p.seq());
            constructions("bar", common, |n| Ok(bar_complex(&right, &p, &left, n)?))
        }
        Command::Cobar { cooperad, common } => {
            let top = common.arities().end().to_owned();
            let q = inputs::cooperad(cooperad, common.ring, top)?;
            let left = match common.sphere {
                Some(r) => sphere_comodule(r, common.ring, top)?,
                None => SidedModule::unit(Side::LeftComodule, q.seq()),
            };
            let right = SidedModule::unit(Side::RightComodule, q.seq());
            constructions("cobar", common, |n| Ok(cobar_complex(&right, &q, &left, n)?))
        }
        Command::Koszul { operad, max_arity } => {
            let p = inputs::operad(operad, Ring::Rat, *max_arity)?;
            let report = koszul(&p, *max_arity)?;
            let mut doc = Document::new("koszul", &["arity", "degree", "rank", "concentrated"]);
            for a in &report.arities {
                let ranks = a.homology.ranks();
                if ranks.is_empty() {
                    doc.push(vec![json!(a.arity), Value::Null, json!(0), json!(a.concentrated)]);
                }
                for (d, r) in ranks {
                    doc.push(vec![json!(a.arity), json!(d), json!(r), json!(a.concentrated)]);
                }
            }
            Ok(doc)
        }
        Command::Partition { n, character, ring } => {
            if *character {
                let mut doc = Document::new("partition", &["cycle_type", "character"]);
                for c in partition_character(*n)? {
                    let ct: Vec<String> = c.cycle_type.iter().map(usize::to_string).collect();
                    let v = c.value.to_string();
                    doc.push(vec![json!(ct.join(",")), v.parse::<i64>().map_or(json!(v), |x| json!(x))]);
                }
                Ok(doc)
            } else {
                let c = partition_complex(*n)?.complex.with_ring(*ring)?;
                let mut doc = Document::new("partition", &["n", "degree", "rank", "torsion"]);
                homology_rows(&mut doc, *n, &homology(&c)?);
                Ok(doc)
            }
        }
        Command::Derivatives { max_arity } => {
            let report = derivatives_homology(*max_arity)?;
            let mut doc = Document::new("derivatives", &["arity", "degree", "rank", "jacobi"]);
            for a in &report.koszul.arities {
                let jacobi = match (&report.jacobi, a.arity) {
                    (Some(j), 3) if j.holds => {
                        let rel: Vec<String> = j.relation.iter().map(|c| c.to_string()).collect();
                        json!(format!("found ({})", rel.join(",")))
                    }
                    (Some(_), 3) => json!("missing"),
                    _ => Value::Null,
                };
                for (d, r) in a.homology.ranks() {
                    doc.push(vec![json!(a.arity), json!(d), json!(r), jacobi.clone()]);
                }
            }
            Ok(doc)
        }
        Command::ModuleMx { sphere, coalgebra, max_arity } => {
            let left = match (sphere, coalgebra) {
                (Some(r), _) => sphere_comodule(*r, Ring::Rat, *max_arity)?,
                (None, Some(p)) => inputs::coalgebra(p, *max_arity)?,
                (None, None) => return Err(CliError::Usage("need --sphere or --coalgebra".into())),
            };
            let report = module_mx_homology(&left, *max_arity)?;
            let mut doc = Document::new("module-mx", &["arity", "degree", "rank", "compose_rank"]);
            for (a, want) in report.arities.iter().zip(&report.compose_ranks) {
                let ranks = a.homology.ranks();
                let degrees: std::collections::BTreeSet<i64> = ranks.keys().chain(want.keys()).copied().collect();
                for d in degrees {
                    let r = ranks.get(&d).copied().unwrap_or(0);
                    let w = want.get(&d).copied().unwrap_or(0);
                    doc.push(vec![json!(a.arity), json!(d), json!(r), json!(w)]);
                }
            }
            Ok(doc)
        }
        Command::Compose { outer, inner, arity } => {
            let m = inputs::sequence(outer, Ring::Int, *arity)?;
            let n = inputs::sequence(inner, Ring::Int, *arity)?;
            let c = compose_product(&m, &n, *arity)?;
            let mut doc = Document::new("compose", &["arity", "degree", "rank"]);
            for (d, r) in c.ranks() {
                doc.push(vec![json!(arity), json!(d), json!(r)]);
            }
            Ok(doc)
        }
        Command::Verify { .. } => unreachable!("handled by run"),
    }
}

fn trees(n: usize, species: &str, count: bool) -> Result<Document, CliError> {
    let s: Species = species.parse().map_err(|e: opbar::trees::TreeError| CliError::Usage(e.to_string()))?;
    let all = enumerate_trees(n, s)?;
    if count {
        let mut doc = Document::new("trees", &["n", "species", "count"]);
        doc.push(vec![json!(n), json!(species.to_ascii_lowercase()), json!(all.len())]);
        return Ok(doc);
    }
    let mut doc = Document::new("trees", &["index", "tree", "vertices"]);
    for (i, t) in all.iter().enumerate() {
        doc.push(vec![json!(i), json!(t.serialize()), json!(t.vertex_count())]);
    }
    Ok(doc)
}

fn homology_rows(doc: &mut Document, arity: usize, h: &HomologySummary) {
    for (d, dh) in &h.degrees {
        let t: Vec<String> = dh.torsion.iter().map(|x| x.to_string()).collect();
        doc.push(vec![json!(arity), json!(d), json!(dh.rank), json!(t.join(","))]);
    }
}

fn constructions(
    name: &str,
    common: &Construct,
    build: impl Fn(usize) -> Result<BarComplex, CliError>,
) -> Result<Document, CliError> {
    let mut doc = Document::new(name, &["arity", "degree", "rank", "torsion"]);
    for n in common.arities() {
        let b = build(n)?;
        if let Some(path) = &common.export {
            write_atomic(path, &b.export_text())?;
        }
        homology_rows(&mut doc, n, &homology(b.complex())?);
    }
    Ok(doc)
}

fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    use std::io::Write as _;
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn verify(max_arity: usize, only: &[u8]) -> Result<Outcome, CliError> {
    if let Some(bad) = only.iter().find(|id| !CRITERIA.iter().any(|(c, _)| c == *id)) {
        return Err(CliError::Usage(format!("no criterion {bad}; criteria are 1..={}", CRITERIA.len())));
    }
    let mut doc = Document::new("verify", &["criterion", "title", "status", "detail"]);
    let mut failed = Vec::new();
    for (id, title) in CRITERIA.iter().filter(|(id, _)| only.is_empty() || only.contains(id)) {
        let r = run_criterion(*id, max_arity);
        if !r.passed {
            failed.push((*id, *title));
        }
        doc.push(vec![json!(id), json!(title), json!(if r.passed { "PASS" } else { "FAIL" }), json!(r.detail)]);
    }
    Ok(Outcome { doc, failed })
}
