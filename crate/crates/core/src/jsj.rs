//! Catalog of explicit cyclic graph-of-groups decompositions, their text
//! serialization, structural validation, and the algebraic-closure data
//! read off them.
//!
//! Text format, one record per line (`#` starts a comment):
//!
//! ```text
//! graph <name> rank=<r> kind=jsj|free-factor
//! relative: <word>; <word>; ...
//! vertex <id> rigid gens: <word>; <word>; ...
//! vertex <id> surface genus=<g> boundary=<b> gens: <word>; ...
//! edge <id> <id> gen: <word>
//! ```
//!
//! Words use the usual word grammar. The `graph` line comes first; the other
//! records may appear in any order.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::sequence::{step_commutator, witness};
use crate::stallings::SubgroupGraph;
use crate::whitehead::is_free_factor_tuple;
use crate::word::{commutator, parse_word, parse_word_list, primitive_root, product, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsjError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("the relative subgroup is not contained in a single rigid vertex group")]
    NotElliptic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum VertexKind {
    Rigid,
    Surface { genus: u32, boundary: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexGroup {
    pub id: usize,
    pub kind: VertexKind,
    /// A basis of the vertex group inside the ambient free group.
    pub generators: Vec<Word>,
}

impl VertexGroup {
    pub fn graph(&self) -> SubgroupGraph {
        SubgroupGraph::build(&self.generators)
    }

    pub fn is_rigid(&self) -> bool {
        self.kind == VertexKind::Rigid
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeGroup {
    pub endpoints: (usize, usize),
    pub generator: Word,
}

/// `Jsj` entries are decompositions of the whole ambient group. A
/// `FreeFactor` entry records a single subgroup that is a free factor of the
/// ambient group, for which the algebraic closure is the factor itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CatalogKind {
    Jsj,
    FreeFactor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphOfGroups {
    pub name: String,
    pub kind: CatalogKind,
    pub ambient_rank: u32,
    pub vertices: Vec<VertexGroup>,
    pub edges: Vec<EdgeGroup>,
    pub relative_to: Vec<Word>,
}

/// Relative JSJ decomposition of `F_2n` with respect to
/// `<[e1,e2]...[e_(2n-1),e_(2n)]>`: a genus-`n` once-punctured surface
/// vertex amalgamated with the cyclic rigid vertex along the boundary word.
pub fn example_jsj(n: usize) -> GraphOfGroups {
    assert!(n >= 1);
    let boundary = boundary_word(1, n);
    GraphOfGroups {
        name: format!("example-{n}"),
        kind: CatalogKind::Jsj,
        ambient_rank: 2 * n as u32,
        vertices: vec![
            VertexGroup { id: 0, kind: VertexKind::Rigid, generators: vec![boundary.clone()] },
            VertexGroup {
                id: 1,
                kind: VertexKind::Surface { genus: n as u32, boundary: 1 },
                generators: (1..=2 * n as u32).map(Word::gen).collect(),
            },
        ],
        edges: vec![EdgeGroup { endpoints: (0, 1), generator: boundary.clone() }],
        relative_to: vec![boundary],
    }
}

/// `[e_s, e_(s+1)] [e_(s+2), e_(s+3)] ...` with `genus` factors.
fn boundary_word(start: u32, genus: usize) -> Word {
    let factors: Vec<Word> = (0..genus as u32)
        .map(|j| {
            let k = start + 2 * j;
            commutator(&Word::gen(k), &Word::gen(k + 1))
        })
        .collect();
    product(&factors)
}

/// Decomposition of `F_(2i+1)` relative to `<a_0, ..., a_i>`: a rigid vertex
/// `<a_0, ..., a_i>` with `i` once-punctured tori `<e_2j, e_(2j+1)>` attached
/// along `[e_2j, e_(2j+1)] = a_(j-1)^-1 a_j`.
pub fn witness_jsj_left(i: usize) -> GraphOfGroups {
    assert!(i >= 1);
    let rigid: Vec<Word> = (0..=i).map(witness).collect();
    let mut vertices = vec![VertexGroup { id: 0, kind: VertexKind::Rigid, generators: rigid.clone() }];
    let mut edges = Vec::new();
    for j in 1..=i {
        vertices.push(torus(j, j));
        edges.push(EdgeGroup { endpoints: (0, j), generator: step_commutator(j) });
    }
    GraphOfGroups {
        name: format!("left-{i}"),
        kind: CatalogKind::Jsj,
        ambient_rank: 2 * i as u32 + 1,
        vertices,
        edges,
        relative_to: rigid,
    }
}

/// Decomposition of `F_(2i+3)` relative to `<a_0, ..., a_(i-1), a_(i+1)>`:
/// a rigid vertex on those words, `i - 1` once-punctured tori, and one
/// genus-2 once-punctured surface `<e_2i, ..., e_(2i+3)>` attached along
/// `a_(i-1)^-1 a_(i+1)`.
pub fn witness_jsj_right(i: usize) -> GraphOfGroups {
    assert!(i >= 1);
    let mut rigid: Vec<Word> = (0..i).map(witness).collect();
    rigid.push(witness(i + 1));
    let mut vertices = vec![VertexGroup { id: 0, kind: VertexKind::Rigid, generators: rigid.clone() }];
    let mut edges = Vec::new();
    for j in 1..i {
        vertices.push(torus(j, j));
        edges.push(EdgeGroup { endpoints: (0, j), generator: step_commutator(j) });
    }
    let first = 2 * i as u32;
    vertices.push(VertexGroup {
        id: i,
        kind: VertexKind::Surface { genus: 2, boundary: 1 },
        generators: (first..first + 4).map(Word::gen).collect(),
    });
    edges.push(EdgeGroup { endpoints: (0, i), generator: step_commutator(i).multiply(&step_commutator(i + 1)) });
    GraphOfGroups {
        name: format!("right-{i}"),
        kind: CatalogKind::Jsj,
        ambient_rank: 2 * i as u32 + 3,
        vertices,
        edges,
        relative_to: rigid,
    }
}

fn torus(id: usize, j: usize) -> VertexGroup {
    let k = 2 * j as u32;
    VertexGroup {
        id,
        kind: VertexKind::Surface { genus: 1, boundary: 1 },
        generators: vec![Word::gen(k), Word::gen(k + 1)],
    }
}

/// Single-vertex entry for a cyclic free factor `<w>` of `F_rank`.
pub fn cyclic_factor(w: &Word, ambient_rank: u32) -> GraphOfGroups {
    GraphOfGroups {
        name: format!("factor-{}", w.to_string().replace(' ', "")),
        kind: CatalogKind::FreeFactor,
        ambient_rank,
        vertices: vec![VertexGroup { id: 0, kind: VertexKind::Rigid, generators: vec![w.clone()] }],
        edges: Vec::new(),
        relative_to: vec![w.clone()],
    }
}

impl GraphOfGroups {
    pub fn vertex(&self, id: usize) -> Option<&VertexGroup> {
        self.vertices.iter().find(|v| v.id == id)
    }

    /// The rigid vertex whose group contains every relative word.
    pub fn relative_vertex(&self) -> Result<&VertexGroup, JsjError> {
        self.vertices
            .iter()
            .filter(|v| v.is_rigid())
            .find(|v| {
                let g = v.graph();
                self.relative_to.iter().all(|w| g.contains(w))
            })
            .ok_or(JsjError::NotElliptic)
    }

    /// Boundary subgroups of surface vertices: generators of incident edges.
    pub fn boundary_words(&self) -> Vec<&Word> {
        self.edges
            .iter()
            .filter(|e| {
                let (u, v) = e.endpoints;
                [u, v].iter().any(|&x| self.vertex(x).is_some_and(|vg| !vg.is_rigid()))
            })
            .map(|e| &e.generator)
            .collect()
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Graphviz rendering of the underlying graph.
    pub fn to_dot(&self) -> String {
        let mut s = format!("graph \"{}\" {{\n", self.name);
        for v in &self.vertices {
            let kind = match v.kind {
                VertexKind::Rigid => "rigid".to_string(),
                VertexKind::Surface { genus, boundary } => format!("surface g={genus} b={boundary}"),
            };
            let gens: Vec<String> = v.generators.iter().map(|w| w.to_string()).collect();
            s += &format!("  v{} [label=\"v{} {}\\n{}\"];\n", v.id, v.id, kind, gens.join("; "));
        }
        for e in &self.edges {
            s += &format!("  v{} -- v{} [label=\"{}\"];\n", e.endpoints.0, e.endpoints.1, e.generator);
        }
        s += "}\n";
        s
    }

    pub fn parse(text: &str) -> Result<GraphOfGroups, JsjError> {
        parse_catalog(text)
    }
}

fn join_words(ws: &[Word]) -> String {
    ws.iter().map(|w| w.to_string()).collect::<Vec<_>>().join("; ")
}

impl fmt::Display for GraphOfGroups {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            CatalogKind::Jsj => "jsj",
            CatalogKind::FreeFactor => "free-factor",
        };
        writeln!(f, "graph {} rank={} kind={}", self.name, self.ambient_rank, kind)?;
        writeln!(f, "relative: {}", join_words(&self.relative_to))?;
        for v in &self.vertices {
            match v.kind {
                VertexKind::Rigid => writeln!(f, "vertex {} rigid gens: {}", v.id, join_words(&v.generators))?,
                VertexKind::Surface { genus, boundary } => writeln!(
                    f,
                    "vertex {} surface genus={} boundary={} gens: {}",
                    v.id,
                    genus,
                    boundary,
                    join_words(&v.generators)
                )?,
            }
        }
        for e in &self.edges {
            writeln!(f, "edge {} {} gen: {}", e.endpoints.0, e.endpoints.1, e.generator)?;
        }
        Ok(())
    }
}

fn parse_catalog(text: &str) -> Result<GraphOfGroups, JsjError> {
    let mut header: Option<(String, u32, CatalogKind)> = None;
    let mut relative = Vec::new();
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let err = |message: String| JsjError::Parse { line: line_no, message };
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (head, words) = match line.split_once(':') {
            Some((h, w)) => (h.trim(), Some(w)),
            None => (line, None),
        };
        let parse_words = |w: Option<&str>| -> Result<Vec<Word>, JsjError> {
            parse_word_list(w.unwrap_or("")).map_err(|e| err(e.to_string()))
        };
        let mut fields: Vec<&str> = head.split_whitespace().collect();
        let labelled = matches!(fields.last(), Some(&"gens") | Some(&"gen"));
        if labelled {
            fields.pop();
        }
        if matches!(fields.first(), Some(&"vertex") | Some(&"edge")) && !labelled {
            return Err(err("missing gens".into()));
        }
        match fields.first().copied() {
            Some("graph") => {
                if header.is_some() {
                    return Err(err("duplicate graph record".into()));
                }
                let name = fields.get(1).ok_or_else(|| err("missing graph name".into()))?.to_string();
                let kv = key_values(&fields[2..]).map_err(err)?;
                let rank = kv
                    .get("rank")
                    .ok_or_else(|| err("missing rank".into()))?
                    .parse::<u32>()
                    .map_err(|_| err("bad rank".into()))?;
                let kind = match kv.get("kind").map(String::as_str).unwrap_or("jsj") {
                    "jsj" => CatalogKind::Jsj,
                    "free-factor" => CatalogKind::FreeFactor,
                    other => return Err(err(format!("unknown kind '{other}'"))),
                };
                header = Some((name, rank, kind));
            }
            Some(_) if header.is_none() => return Err(err("the graph record must come first".into())),
            Some("relative") => relative.extend(parse_words(words)?),
            Some("vertex") => {
                let id =
                    fields.get(1).and_then(|s| s.parse::<usize>().ok()).ok_or_else(|| err("bad vertex id".into()))?;
                let kind = match fields.get(2).copied() {
                    Some("rigid") => VertexKind::Rigid,
                    Some("surface") => {
                        let kv = key_values(&fields[3..]).map_err(err)?;
                        let get = |k: &str| -> Result<u32, JsjError> {
                            kv.get(k)
                                .ok_or_else(|| err(format!("missing {k}")))?
                                .parse::<u32>()
                                .map_err(|_| err(format!("bad {k}")))
                        };
                        VertexKind::Surface { genus: get("genus")?, boundary: get("boundary")? }
                    }
                    _ => return Err(err("vertex kind must be rigid or surface".into())),
                };
                if words.is_none() {
                    return Err(err("missing gens".into()));
                }
                vertices.push(VertexGroup { id, kind, generators: parse_words(words)? });
            }
            Some("edge") => {
                let ids: Vec<usize> = fields[1..]
                    .iter()
                    .map(|s| s.parse::<usize>().map_err(|_| err(format!("bad vertex id '{s}'"))))
                    .collect::<Result<_, _>>()?;
                let [u, v] = ids[..] else {
                    return Err(err("an edge needs two vertex ids".into()));
                };
                let gen =
                    parse_word(words.ok_or_else(|| err("missing gen".into()))?).map_err(|e| err(e.to_string()))?;
                edges.push(EdgeGroup { endpoints: (u, v), generator: gen });
            }
            Some(other) => return Err(err(format!("unknown record '{other}'"))),
            None => unreachable!(),
        }
    }
    let (name, ambient_rank, kind) = header.ok_or(JsjError::Parse { line: 0, message: "no graph record".into() })?;
    Ok(GraphOfGroups { name, kind, ambient_rank, vertices, edges, relative_to: relative })
}

fn key_values(fields: &[&str]) -> Result<BTreeMap<String, String>, String> {
    fields
        .iter()
        .map(|f| {
            f.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| format!("expected key=value, got '{f}'"))
        })
        .collect()
}

/// Algebraic closure of the relative subgroup: the rigid vertex group that
/// contains it. In every catalog entry the elliptic abelian neighborhood of
/// that vertex is the vertex group itself (see [`validate`]'s root-closure
/// check).
pub fn acl_from_catalog(g: &GraphOfGroups) -> Result<SubgroupGraph, JsjError> {
    Ok(g.relative_vertex()?.graph())
}

/// Whether the conjugacy class of `w` lies in the conjugacy part of the
/// algebraic closure: `w` is conjugate into a rigid vertex group or into a
/// boundary subgroup of a surface vertex.
pub fn aclc_member_from_catalog(g: &GraphOfGroups, w: &Word) -> bool {
    let rigid = g.vertices.iter().filter(|v| v.is_rigid()).any(|v| v.graph().is_conjugate_into(w));
    rigid || g.boundary_words().into_iter().any(|b| SubgroupGraph::build(std::slice::from_ref(b)).is_conjugate_into(w))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        CheckResult { name, passed, detail: detail.into() }
    }
}

pub fn all_passed(checks: &[CheckResult]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// Structural checks on a catalog entry. Failures are reported as data.
pub fn validate(g: &GraphOfGroups) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let graphs: BTreeMap<usize, SubgroupGraph> = g.vertices.iter().map(|v| (v.id, v.graph())).collect();

    let ids_unique = graphs.len() == g.vertices.len();
    let endpoints_known =
        g.edges.iter().all(|e| graphs.contains_key(&e.endpoints.0) && graphs.contains_key(&e.endpoints.1));
    out.push(CheckResult::new(
        "well-formed",
        ids_unique && endpoints_known && !g.vertices.is_empty(),
        format!("{} vertices, {} edges", g.vertices.len(), g.edges.len()),
    ));

    let in_rank = g
        .vertices
        .iter()
        .flat_map(|v| &v.generators)
        .chain(g.edges.iter().map(|e| &e.generator))
        .chain(&g.relative_to)
        .all(|w| w.max_index() <= g.ambient_rank);
    out.push(CheckResult::new("words-in-ambient-rank", in_rank, format!("ambient rank {}", g.ambient_rank)));

    out.push(CheckResult::new("connected", is_connected(g), ""));

    let ranks: usize = graphs.values().map(SubgroupGraph::rank).sum();
    match g.kind {
        CatalogKind::Jsj => {
            let euler = ranks as i64 - g.edges.len() as i64;
            out.push(CheckResult::new(
                "euler-bookkeeping",
                euler == g.ambient_rank as i64,
                format!("sum of vertex ranks {ranks} - edges {} = {euler}", g.edges.len()),
            ));
            let all: Vec<Word> = g.vertices.iter().flat_map(|v| v.generators.iter().cloned()).collect();
            let whole = SubgroupGraph::build(&all);
            let generates = whole.vertex_count() == 1 && whole.edge_count() == g.ambient_rank as usize;
            out.push(CheckResult::new("vertex-groups-generate", generates, format!("generated rank {}", whole.rank())));
        }
        CatalogKind::FreeFactor => {
            let gens: Vec<Word> = g.vertices.iter().flat_map(|v| v.generators.iter().cloned()).collect();
            let factor = in_rank && is_free_factor_tuple(&gens, g.ambient_rank).unwrap_or(false);
            out.push(CheckResult::new("free-factor", factor, "vertex group is a free factor of the ambient group"));
        }
    }

    let mut contained = true;
    let mut detail = String::new();
    for e in &g.edges {
        for id in [e.endpoints.0, e.endpoints.1] {
            if !graphs.get(&id).is_some_and(|vg| vg.contains(&e.generator)) {
                contained = false;
                detail += &format!("edge generator {} not in vertex {id}; ", e.generator);
            }
        }
    }
    out.push(CheckResult::new("edge-containment", contained, detail));

    let mut surface_ok = true;
    let mut detail = String::new();
    for v in &g.vertices {
        if let VertexKind::Surface { genus, boundary } = v.kind {
            let expected = 2 * genus as usize + boundary as usize - 1;
            let got = graphs[&v.id].rank();
            if boundary == 0 || got != expected || v.generators.len() != got {
                surface_ok = false;
                detail += &format!("vertex {}: rank {got}, expected {expected}; ", v.id);
            }
        }
    }
    out.push(CheckResult::new("surface-rank", surface_ok, detail));

    let elliptic = g.relative_vertex().is_ok();
    out.push(CheckResult::new("relative-elliptic", elliptic, "relative words lie in one rigid vertex group"));

    // centralizers of vertex and edge generators stay inside the vertex groups
    let mut roots_ok = true;
    let mut detail = String::new();
    for w in g.vertices.iter().flat_map(|v| &v.generators).chain(g.edges.iter().map(|e| &e.generator)) {
        match primitive_root(w) {
            Ok((_, 1)) => {}
            Ok((_, k)) => {
                roots_ok = false;
                detail += &format!("{w} is a proper power (exponent {k}); ");
            }
            Err(_) => {
                roots_ok = false;
                detail += "trivial generator; ";
            }
        }
    }
    out.push(CheckResult::new("root-closure", roots_ok, detail));

    let rigid: Vec<&SubgroupGraph> = g.vertices.iter().filter(|v| v.is_rigid()).map(|v| &graphs[&v.id]).collect();
    let redundant = g.boundary_words().iter().all(|b| rigid.iter().any(|r| r.is_conjugate_into(b)));
    out.push(CheckResult::new(
        "boundary-in-rigid",
        redundant,
        "every boundary subgroup is conjugate into a rigid vertex group",
    ));
    out
}

fn is_connected(g: &GraphOfGroups) -> bool {
    if g.vertices.is_empty() {
        return false;
    }
    let mut seen = vec![g.vertices[0].id];
    let mut head = 0;
    while head < seen.len() {
        let v = seen[head];
        head += 1;
        for e in &g.edges {
            let other = if e.endpoints.0 == v {
                e.endpoints.1
            } else if e.endpoints.1 == v {
                e.endpoints.0
            } else {
                continue;
            };
            if !seen.contains(&other) {
                seen.push(other);
            }
        }
    }
    g.vertices.iter().all(|v| seen.contains(&v.id))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    fn assert_valid(g: &GraphOfGroups) {
        let checks = validate(g);
        for c in &checks {
            assert!(c.passed, "{}: {} failed ({})", g.name, c.name, c.detail);
        }
    }

    #[test]
    fn example_shapes() {
        let g = example_jsj(1);
        assert_eq!(g.ambient_rank, 2);
        assert_eq!(g.vertices[1].kind, VertexKind::Surface { genus: 1, boundary: 1 });
        assert_eq!(g.edges[0].generator, w("[e1,e2]"));
        let g = example_jsj(2);
        assert_eq!(g.vertices[1].kind, VertexKind::Surface { genus: 2, boundary: 1 });
        assert_eq!(g.edges[0].generator, w("[e1,e2][e3,e4]"));
        assert_valid(&g);
        let g = example_jsj(3);
        assert_eq!(g.vertices[1].graph().rank(), 6);
        assert_valid(&g);
    }

    #[test]
    fn witness_shapes() {
        let g = witness_jsj_left(1);
        assert_eq!(g.vertices.len(), 2);
        assert_eq!(g.vertices[1].generators, vec![w("e2"), w("e3")]);
        assert_eq!(g.edges[0].generator, w("[e2,e3]"));
        let g = witness_jsj_left(2);
        assert_eq!(g.ambient_rank, 5);
        assert_eq!(g.vertices.len(), 3);
        let g = witness_jsj_right(1);
        assert_eq!(g.vertices[1].generators, vec![w("e2"), w("e3"), w("e4"), w("e5")]);
        assert_eq!(g.relative_to, vec![w("e1"), witness(2)]);
        let g = witness_jsj_right(2);
        assert_eq!(g.ambient_rank, 7);
        assert_eq!(g.vertices.len(), 3);
        assert_eq!(g.vertices[1].kind, VertexKind::Surface { genus: 1, boundary: 1 });
        assert_eq!(g.vertices[2].kind, VertexKind::Surface { genus: 2, boundary: 1 });
        for i in 1..=3 {
            assert_valid(&witness_jsj_left(i));
            assert_valid(&witness_jsj_right(i));
        }
    }

    #[test]
    fn edge_generators_are_witness_quotients() {
        for i in 1..=3 {
            let left = witness_jsj_left(i);
            let rigid = left.vertices[0].graph();
            for (j, e) in left.edges.iter().enumerate() {
                assert_eq!(e.generator, witness(j).inverse().multiply(&witness(j + 1)));
                assert!(rigid.contains(&e.generator));
            }
            let right = witness_jsj_right(i);
            let last = &right.edges.last().unwrap().generator;
            assert_eq!(*last, witness(i - 1).inverse().multiply(&witness(i + 1)));
            assert!(right.vertices[0].graph().contains(last));
        }
    }

    #[test]
    fn acl_extraction() {
        for i in 1..=3 {
            let h1 = acl_from_catalog(&witness_jsj_left(i)).unwrap();
            assert_eq!(h1, SubgroupGraph::build(&(0..=i).map(witness).collect::<Vec<_>>()));
            let mut gens: Vec<Word> = (0..i).map(witness).collect();
            gens.push(witness(i + 1));
            assert_eq!(acl_from_catalog(&witness_jsj_right(i)).unwrap(), SubgroupGraph::build(&gens));
        }
        let f = cyclic_factor(&w("e1"), 3);
        assert_eq!(acl_from_catalog(&f).unwrap(), SubgroupGraph::build(&[w("e1")]));
        assert_valid(&f);
        assert_valid(&cyclic_factor(&witness(1), 3));
    }

    #[test]
    fn aclc_membership() {
        let g = witness_jsj_left(1);
        assert!(aclc_member_from_catalog(&g, &w("e1")));
        assert!(!aclc_member_from_catalog(&g, &w("e2")));
        assert!(aclc_member_from_catalog(&g, &w("[e2,e3]")));
        assert!(aclc_member_from_catalog(&g, &w("e4 [e3,e2] E4")));
    }

    #[test]
    fn negative_controls() {
        let mut g = witness_jsj_left(1);
        g.edges[0].generator = w("e2 e3");
        let checks = validate(&g);
        assert!(!checks.iter().find(|c| c.name == "edge-containment").unwrap().passed);

        let mut g = example_jsj(2);
        g.vertices[1].kind = VertexKind::Surface { genus: 1, boundary: 1 };
        assert!(!validate(&g).iter().find(|c| c.name == "surface-rank").unwrap().passed);

        let mut g = witness_jsj_right(1);
        g.edges.clear();
        let checks = validate(&g);
        assert!(!checks.iter().find(|c| c.name == "connected").unwrap().passed);
        assert!(!checks.iter().find(|c| c.name == "euler-bookkeeping").unwrap().passed);

        let mut g = witness_jsj_left(1);
        g.vertices[0].generators.push(w("e2 e2"));
        assert!(!validate(&g).iter().find(|c| c.name == "root-closure").unwrap().passed);

        assert!(!validate(&cyclic_factor(&w("[e2,e3]"), 3)).iter().all(|c| c.passed));
    }

    #[test]
    fn text_round_trip() {
        for g in [example_jsj(2), witness_jsj_left(2), witness_jsj_right(3), cyclic_factor(&w("e1"), 3)] {
            let text = g.to_text();
            assert_eq!(GraphOfGroups::parse(&text).unwrap(), g, "{text}");
        }
    }

    #[test]
    fn parse_hand_written() {
        let text = "# punctured torus over its boundary\n\
                    graph torus rank=2\n\
                    relative: [e1,e2]\n\
                    vertex 0 rigid gens: [e1,e2]\n\
                    vertex 1 surface genus=1 boundary=1 gens: e1; e2\n\
                    edge 0 1 gen: e1 e2 E1 E2\n";
        let g = GraphOfGroups::parse(text).unwrap();
        assert_eq!(g.kind, CatalogKind::Jsj);
        assert_eq!(g, GraphOfGroups { name: "torus".into(), ..example_jsj(1) });
        assert!(matches!(GraphOfGroups::parse("vertex 0 rigid gens: e1"), Err(JsjError::Parse { line: 1, .. })));
        assert!(matches!(GraphOfGroups::parse("graph g rank=2\nedge 0 gen: e1"), Err(JsjError::Parse { line: 2, .. })));
        assert!(matches!(
            GraphOfGroups::parse("graph g rank=2\nvertex 0 surface genus=1 gens: e1"),
            Err(JsjError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn dot_output() {
        let dot = example_jsj(1).to_dot();
        assert!(dot.starts_with("graph \"example-1\" {"));
        assert!(dot.contains("v0 -- v1"));
    }
}
