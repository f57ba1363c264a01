use std::path::{Path, PathBuf};

use semicat::bigraph::{self, BipartiteGraph, BipartiteIso};
use semicat::finsemi::{self, FiniteSemigroup};
use semicat::formats::{parse_str, FormatError, Structure};
use semicat::groups;
use semicat::orbits::{self, OrbitError, PermutationGroup};
use semicat::rees::ReesMatrixSemigroup;
use semicat::reesiso::{self, ReesIso};
use semicat::verify;
use serde_json::{json, Value};
use thiserror::Error;

use crate::report::InputDigest;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{0}")]
    Unsupported(String),
    #[error("{0}")]
    Limit(String),
}

impl CliError {
    /// 1 for inputs that fail to parse or validate, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Format(FormatError::Io { .. }) | CliError::Limit(_) => 2,
            CliError::Format(_) | CliError::Unsupported(_) => 1,
        }
    }
}

fn limit(e: impl std::fmt::Display) -> CliError {
    CliError::Limit(e.to_string())
}

/// What a command produced; `failed` marks a completed run whose checks did not hold.
pub struct Outcome {
    pub results: Value,
    pub warnings: Vec<String>,
    pub failed: bool,
}

impl Outcome {
    fn ok(results: Value) -> Self {
        Self { results, warnings: Vec::new(), failed: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Structured,
    Brute,
}

#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub max_order: usize,
    pub candidate_limit: u64,
}

/// Reads input files and records their digests.
#[derive(Default)]
pub struct Inputs {
    pub digests: Vec<InputDigest>,
}

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let bytes = std::fs::read(path).map_err(|e| FormatError::Io { path: path.to_path_buf(), message: e.to_string() })?;
        self.digests.push(InputDigest::of(path, &bytes));
        String::from_utf8(bytes).map_err(|_| CliError::Format(FormatError::Parse { line: 1, message: "file is not UTF-8".into() }))
    }

    pub fn structure(&mut self, path: &Path) -> Result<Structure, CliError> {
        let text = self.read(path)?;
        Ok(parse_str(&text, path.parent())?)
    }

    /// A subset file: whitespace-separated element indices, `#` comments.
    fn subset(&mut self, path: &Path, degree: usize) -> Result<Vec<usize>, CliError> {
        let text = self.read(path)?;
        let mut out = Vec::new();
        for (k, line) in text.lines().enumerate() {
            for token in line.split('#').next().unwrap_or("").split_whitespace() {
                let x: usize = token.parse().ok().filter(|&x| x < degree).ok_or_else(|| {
                    FormatError::Parse { line: k + 1, message: format!("`{token}` is not an element index below {degree}") }
                })?;
                out.push(x);
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

fn unsupported(command: &str, s: &Structure) -> CliError {
    CliError::Unsupported(format!("`{command}` does not apply to a {} file", s.kind()))
}

fn semigroup_of(command: &str, s: &Structure) -> Result<FiniteSemigroup, CliError> {
    s.as_semigroup().ok_or_else(|| unsupported(command, s))
}

fn quadruple_json(phi: &ReesIso) -> Value {
    json!({ "theta": phi.theta.images, "psi": { "left": phi.psi.left, "right": phi.psi.right }, "u": phi.u, "v": phi.v })
}

fn vertex_map(iso: &BipartiteIso) -> Vec<usize> {
    let offset = iso.left.len();
    iso.left.iter().copied().chain(iso.right.iter().map(|&r| r + offset)).collect()
}

fn plain_graph(s: &Structure) -> Option<BipartiteGraph> {
    match s {
        Structure::Bigraph(g) => Some(g.clone()),
        Structure::LabelledBigraph(g) => Some(g.forget_labels()),
        Structure::Rees(r) => Some(r.induced_graph()),
        _ => None,
    }
}

fn default_method(s: &Structure) -> Method {
    match s {
        Structure::Rees(_) | Structure::Group(_) | Structure::Bigraph(_) | Structure::LabelledBigraph(_) => Method::Structured,
        _ => Method::Brute,
    }
}

pub fn check(inputs: &mut Inputs, path: &Path) -> Result<Outcome, CliError> {
    let s = inputs.structure(path)?;
    let details = match &s {
        Structure::Group(g) => json!({ "order": g.order(), "abelian": g.is_abelian() }),
        Structure::Semigroup(t) => json!({
            "order": t.order(),
            "idempotents": t.idempotents().len(),
            "band": t.is_band(),
            "commutative": t.is_commutative(),
            "zero": t.zero(),
        }),
        Structure::RectangularBand(b) => json!({ "left": b.left_size(), "right": b.right_size(), "order": b.order() }),
        Structure::Bigraph(g) => json!({
            "left": g.left_size(), "right": g.right_size(), "edges": g.edge_count(), "components": g.components().len(), "labelled": false,
        }),
        Structure::LabelledBigraph(g) => json!({
            "left": g.graph().left_size(), "right": g.graph().right_size(), "edges": g.graph().edge_count(),
            "components": g.graph().components().len(), "labelled": true, "alphabet": g.alphabet(),
        }),
        Structure::Rees(r) => json!({
            "group_order": r.group().order(), "index_size": r.index_size(), "lambda_size": r.lambda_size(),
            "order": r.order(), "components": r.decompose_components().components.len(),
        }),
        Structure::Semilattice(y) => json!({ "order": y.order(), "zero": y.zero() }),
        Structure::Strong(t) => json!({
            "lattice_order": t.lattice().order(),
            "component_orders": t.components().iter().map(FiniteSemigroup::order).collect::<Vec<_>>(),
            "order": t.order(),
            "injective_connectors": t.connectors_injective(),
        }),
    };
    Ok(Outcome::ok(json!({ "kind": s.kind(), "valid": true, "details": details })))
}

pub fn aut(inputs: &mut Inputs, path: &Path, method: Option<Method>, limits: Limits) -> Result<Outcome, CliError> {
    let s = inputs.structure(path)?;
    let method = method.unwrap_or_else(|| default_method(&s));
    let mut results = serde_json::Map::new();
    let maps: Vec<Vec<usize>> = match (method, &s) {
        (Method::Structured, Structure::Rees(r)) => {
            let auts = reesiso::enumerate_automorphisms(r, limits.candidate_limit).map_err(limit)?;
            results.insert("quadruples".into(), auts.iter().map(quadruple_json).collect());
            auts.iter().map(|a| a.to_map(r, r)).collect()
        }
        (Method::Structured, Structure::Group(g)) => groups::group_automorphisms(g).into_iter().map(|m| m.images).collect(),
        (Method::Structured, Structure::Bigraph(g)) => bigraph::automorphisms(g).iter().map(vertex_map).collect(),
        (Method::Structured, Structure::LabelledBigraph(g)) => bigraph::labelled_automorphisms(g).iter().map(vertex_map).collect(),
        (Method::Structured, other) => {
            return Err(CliError::Unsupported(format!("no structured method for a {} file; use --method brute", other.kind())))
        }
        (Method::Brute, other) => {
            let t = semigroup_of("aut --method brute", other)?;
            finsemi::brute_force_automorphisms(&t, limits.max_order).map_err(limit)?
        }
    };
    let mut maps = maps;
    maps.sort();
    maps.dedup();
    results.insert("method".into(), json!(method_name(method)));
    results.insert("count".into(), json!(maps.len()));
    results.insert("maps".into(), json!(maps));
    Ok(Outcome::ok(Value::Object(results)))
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Structured => "structured",
        Method::Brute => "brute",
    }
}

pub fn iso(inputs: &mut Inputs, a: &Path, b: &Path, method: Option<Method>, limits: Limits) -> Result<Outcome, CliError> {
    let s = inputs.structure(a)?;
    let t = inputs.structure(b)?;
    let method = method.unwrap_or_else(|| if s.kind() == t.kind() { default_method(&s) } else { Method::Brute });
    let mut results = serde_json::Map::new();
    let map: Option<Vec<usize>> = match (method, &s, &t) {
        (Method::Structured, Structure::Rees(x), Structure::Rees(y)) => {
            let found = reesiso::first_iso(x, y, limits.candidate_limit).map_err(limit)?;
            results.insert("quadruple".into(), found.as_ref().map_or(Value::Null, quadruple_json));
            found.map(|phi| phi.to_map(x, y))
        }
        (Method::Structured, Structure::Group(x), Structure::Group(y)) => groups::group_isomorphisms(x, y).into_iter().next().map(|m| m.images),
        (Method::Structured, Structure::Bigraph(x), Structure::Bigraph(y)) => bigraph::bigraph_iso(x, y).map(|i| vertex_map(&i)),
        (Method::Structured, Structure::LabelledBigraph(x), Structure::LabelledBigraph(y)) => {
            bigraph::labelled_bigraph_iso(x, y).map(|i| vertex_map(&i))
        }
        (Method::Structured, x, y) => {
            return Err(CliError::Unsupported(format!(
                "no structured method for a {} and a {} file; use --method brute",
                x.kind(),
                y.kind()
            )))
        }
        (Method::Brute, x, y) => {
            let (x, y) = (semigroup_of("iso --method brute", x)?, semigroup_of("iso --method brute", y)?);
            finsemi::first_isomorphism(&x, &y, limits.max_order).map_err(limit)?
        }
    };
    results.insert("method".into(), json!(method_name(method)));
    results.insert("isomorphic".into(), json!(map.is_some()));
    results.insert("map".into(), json!(map));
    Ok(Outcome::ok(Value::Object(results)))
}

/// Automorphisms as permutations of the carrier: elements for algebraic
/// structures, vertices (left side first) for graphs.
fn automorphism_permutations(s: &Structure, limits: Limits) -> Result<(usize, Vec<Vec<usize>>), CliError> {
    Ok(match s {
        Structure::Rees(r) => {
            let auts = reesiso::enumerate_automorphisms(r, limits.candidate_limit).map_err(limit)?;
            (r.order(), auts.iter().map(|a| a.to_map(r, r)).collect())
        }
        Structure::Group(g) => (g.order(), groups::group_automorphisms(g).into_iter().map(|m| m.images).collect()),
        Structure::Bigraph(g) => (g.vertex_count(), bigraph::automorphisms(g).iter().map(vertex_map).collect()),
        Structure::LabelledBigraph(g) => (g.graph().vertex_count(), bigraph::labelled_automorphisms(g).iter().map(vertex_map).collect()),
        other => {
            let t = semigroup_of("orbits", other)?;
            (t.order(), finsemi::brute_force_automorphisms(&t, limits.max_order).map_err(limit)?)
        }
    })
}

fn orbit_error(e: OrbitError) -> CliError {
    match e {
        OrbitError::DegreeMismatch { .. } | OrbitError::NotAPermutation { .. } | OrbitError::MalformedFamily(_) => CliError::Unsupported(e.to_string()),
        _ => limit(e),
    }
}

pub fn orbits(inputs: &mut Inputs, path: &Path, n: usize, fix: &[PathBuf], limits: Limits) -> Result<Outcome, CliError> {
    let s = inputs.structure(path)?;
    let (degree, perms) = automorphism_permutations(&s, limits)?;
    let full = PermutationGroup::from_elements(degree, &perms).map_err(orbit_error)?;
    let subsets = fix.iter().map(|f| inputs.subset(f, degree)).collect::<Result<Vec<_>, _>>()?;
    let group = if subsets.is_empty() { full.clone() } else { orbits::set_extension_stabilizer(&full, &subsets) };
    let profile = orbits::oligomorphy_profile(&group, n);
    let mut outcome = Outcome::ok(Value::Null);
    let cross_check = match orbits::union_find_profile(&group, n, orbits::DEFAULT_TUPLE_LIMIT) {
        Ok(uf) => {
            let agrees = uf == profile;
            outcome.failed = !agrees;
            json!(agrees)
        }
        Err(e) => {
            outcome.warnings.push(format!("union-find cross-check skipped: {e}"));
            Value::Null
        }
    };
    outcome.results = json!({
        "degree": degree,
        "automorphism_group_order": full.order(),
        "fixed_subsets": subsets,
        "group_order": group.order(),
        "profile": profile,
        "union_find_agrees": cross_check,
    });
    outcome.warnings.push("orbit counts on a finite structure are finite evidence only; they do not decide properties of infinite structures".into());
    Ok(outcome)
}

fn rees_of<'a>(command: &str, s: &'a Structure) -> Result<&'a ReesMatrixSemigroup, CliError> {
    match s {
        Structure::Rees(r) => Ok(r),
        other => Err(unsupported(command, other)),
    }
}

fn matrix_json(rows: Vec<Vec<Option<usize>>>) -> Value {
    json!(rows)
}

pub fn decompose(inputs: &mut Inputs, path: &Path, limits: Limits) -> Result<Outcome, CliError> {
    let s = inputs.structure(path)?;
    if let Some(g) = match &s {
        Structure::Bigraph(g) => Some(g.clone()),
        Structure::LabelledBigraph(g) => Some(g.forget_labels()),
        _ => None,
    } {
        let comps: Vec<Value> = g.components().iter().map(|c| json!({ "left": c.left, "right": c.right, "edges": c.graph.edges() })).collect();
        return Ok(Outcome::ok(json!({ "components": comps })));
    }
    let r = rees_of("decompose", &s)?;
    let d = r.decompose_components();
    let eta = reesiso::eta_relation(r, &d, limits.candidate_limit).map_err(limit)?;
    let comps: Vec<Value> = d
        .components
        .iter()
        .map(|c| json!({ "indices": c.indices, "lambdas": c.lambdas, "matrix": matrix_json(c.matrix.to_rows()), "elements": c.elements_in(r) }))
        .collect();
    Ok(Outcome::ok(json!({
        "components": comps,
        "row_order": d.row_order,
        "col_order": d.col_order,
        "block_matrix": matrix_json(d.block_matrix(r).to_rows()),
        "isomorphism_classes": eta.classes(),
    })))
}

pub fn normalize(inputs: &mut Inputs, path: &Path) -> Result<Outcome, CliError> {
    let s = inputs.structure(path)?;
    let r = rees_of("normalize", &s)?;
    let n = r.graham_normalize();
    let verdict = reesiso::validate_iso(r, &n.semigroup, &n.iso).map_err(limit)?;
    Ok(Outcome {
        failed: !verdict.is_valid(),
        warnings: Vec::new(),
        results: json!({
            "matrix": matrix_json(n.semigroup.matrix().to_rows()),
            "iso": quadruple_json(&n.iso),
            "tree_edges": n.tree_edges,
            "check": verdict,
            "file": Structure::Rees(n.semigroup.clone()).to_text(),
        }),
    })
}

pub fn classify_graph(inputs: &mut Inputs, path: &Path) -> Result<Outcome, CliError> {
    let s = inputs.structure(path)?;
    let g = plain_graph(&s).ok_or_else(|| unsupported("classify-graph", &s))?;
    let class = bigraph::classify_homogeneous(&g);
    Ok(Outcome::ok(json!({
        "class": class,
        "name": format!("{class:?}"),
        "left": g.left_size(),
        "right": g.right_size(),
        "edges": g.edge_count(),
    })))
}

pub fn predicates(inputs: &mut Inputs, path: &Path) -> Result<Outcome, CliError> {
    let s = inputs.structure(path)?;
    let r = rees_of("predicates", &s)?;
    Ok(Outcome::ok(json!({
        "predicates": r.structural_predicates(),
        "idempotents": r.idempotents(),
        "entries": r.entry_set(),
    })))
}

pub fn verify(suite: &str) -> Result<Outcome, CliError> {
    let outcomes = verify::run(suite).map_err(|e| CliError::Unsupported(e.to_string()))?;
    let passed = outcomes.iter().all(|o| o.passed);
    Ok(Outcome { failed: !passed, warnings: Vec::new(), results: json!({ "passed": passed, "suites": outcomes }) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use semicat::groups::FiniteGroup;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Format(FormatError::Parse { line: 1, message: String::new() }).exit_code(), 1);
        assert_eq!(CliError::Format(FormatError::Io { path: "x".into(), message: String::new() }).exit_code(), 2);
        assert_eq!(CliError::Limit(String::new()).exit_code(), 2);
    }

    #[test]
    fn group_structure_has_element_permutations() {
        let (degree, perms) = automorphism_permutations(&Structure::Group(FiniteGroup::klein()), Limits { max_order: 12, candidate_limit: 1000 }).unwrap();
        assert_eq!((degree, perms.len()), (4, 6));
    }
}
