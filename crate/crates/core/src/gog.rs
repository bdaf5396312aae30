//! Finite graphs of ℤⁿ-groups: the input model, validation, presentations and
//! local structure of the Bass–Serre tree.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::IntMatrix;
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSpec {
    pub name: String,
    pub source: String,
    pub target: String,
    /// Inclusion of the edge group into the source vertex group.
    pub alpha: IntMatrix,
    /// Inclusion of the edge group into the target vertex group.
    pub omega: IntMatrix,
}

/// A graph of ℤⁿ-groups as written down, before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoGSpec {
    pub rank: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    /// Edge names of a spanning tree; `None` lets the tool choose one.
    pub spanning_tree: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    ZeroRank,
    NoVertices,
    DuplicateVertex {
        vertex: String,
    },
    DuplicateEdge {
        edge: String,
    },
    UnknownEndpoint {
        edge: String,
        vertex: String,
    },
    DimensionMismatch {
        edge: String,
        map: &'static str,
        rows: usize,
        cols: usize,
        rank: usize,
    },
    NotInjective {
        edge: String,
        map: &'static str,
    },
    Disconnected,
    BadSpanningTree {
        reason: String,
    },
    NameClash {
        name: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroRank => write!(f, "rank must be at least 1"),
            Violation::NoVertices => write!(f, "graph has no vertices"),
            Violation::DuplicateVertex { vertex } => write!(f, "duplicate vertex `{vertex}`"),
            Violation::DuplicateEdge { edge } => write!(f, "duplicate edge `{edge}`"),
            Violation::UnknownEndpoint { edge, vertex } => {
                write!(f, "edge `{edge}` refers to unknown vertex `{vertex}`")
            }
            Violation::DimensionMismatch {
                edge,
                map,
                rows,
                cols,
                rank,
            } => write!(
                f,
                "dimension mismatch: {map} of edge `{edge}` is {rows}×{cols}, expected {rank}×{rank}"
            ),
            Violation::NotInjective { edge, map } => {
                write!(
                    f,
                    "edge inclusion not injective: {map} of edge `{edge}` has determinant 0"
                )
            }
            Violation::Disconnected => write!(f, "graph not connected"),
            Violation::BadSpanningTree { reason } => write!(f, "bad spanning tree: {reason}"),
            Violation::NameClash { name } => write!(f, "generator name `{name}` is used twice"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "OK");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GogError {
    #[error("invalid graph of groups:\n{0}")]
    Invalid(ValidationReport),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
}

/// One traversal of an edge: `forward` goes source → target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub edge: usize,
    pub forward: bool,
}

impl Step {
    pub fn reverse(self) -> Step {
        Step {
            edge: self.edge,
            forward: !self.forward,
        }
    }
}

/// A generator of the presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    /// Basis vector `coord` of the vertex group at `vertex`.
    Vertex { vertex: usize, coord: usize },
    /// Stable letter of a non-tree edge.
    Stable { edge: usize },
}

fn vertex_letter_names(spec: &GoGSpec) -> Vec<Vec<String>> {
    const ALPHABET: &str = "abcdefghijklmnopqrstuvwxyz";
    let n = spec.rank;
    if spec.vertices.len() == 1 {
        let taken: BTreeSet<&str> = spec.edges.iter().map(|e| e.name.as_str()).collect();
        let free: Vec<String> = ALPHABET
            .chars()
            .map(String::from)
            .filter(|c| !taken.contains(c.as_str()))
            .collect();
        let names = if free.len() >= n {
            free.into_iter().take(n).collect()
        } else {
            (1..=n).map(|i| format!("x{i}")).collect()
        };
        return vec![names];
    }
    spec.vertices
        .iter()
        .map(|v| {
            (0..n)
                .map(|i| match ALPHABET.chars().nth(i) {
                    Some(c) if n <= 26 => format!("{v}_{c}"),
                    _ => format!("{v}_{}", i + 1),
                })
                .collect()
        })
        .collect()
}

pub fn validate(spec: &GoGSpec) -> ValidationReport {
    let mut violations = Vec::new();
    if spec.rank == 0 {
        violations.push(Violation::ZeroRank);
    }
    if spec.vertices.is_empty() {
        violations.push(Violation::NoVertices);
    }
    let mut vertex_ix = HashMap::new();
    for (i, v) in spec.vertices.iter().enumerate() {
        if vertex_ix.insert(v.as_str(), i).is_some() {
            violations.push(Violation::DuplicateVertex { vertex: v.clone() });
        }
    }
    let mut edge_names = BTreeSet::new();
    let mut endpoints = Vec::new();
    for e in &spec.edges {
        if !edge_names.insert(e.name.as_str()) {
            violations.push(Violation::DuplicateEdge { edge: e.name.clone() });
        }
        let mut ends = [None, None];
        for (slot, v) in [&e.source, &e.target].into_iter().enumerate() {
            match vertex_ix.get(v.as_str()) {
                Some(&ix) => ends[slot] = Some(ix),
                None => violations.push(Violation::UnknownEndpoint {
                    edge: e.name.clone(),
                    vertex: v.clone(),
                }),
            }
        }
        if let [Some(s), Some(t)] = ends {
            endpoints.push((s, t));
        }
        for (map, m) in [("alpha", &e.alpha), ("omega", &e.omega)] {
            let (rows, cols) = m.shape();
            if rows != spec.rank || cols != spec.rank {
                violations.push(Violation::DimensionMismatch {
                    edge: e.name.clone(),
                    map,
                    rows,
                    cols,
                    rank: spec.rank,
                });
            } else if m.det().is_zero() {
                violations.push(Violation::NotInjective {
                    edge: e.name.clone(),
                    map,
                });
            }
        }
    }
    if !violations.is_empty() {
        return ValidationReport { violations };
    }

    let nv = spec.vertices.len();
    if components(nv, &endpoints) > 1 {
        violations.push(Violation::Disconnected);
    }
    if let Some(tree) = &spec.spanning_tree {
        if let Err(reason) = check_spanning_tree(spec, tree, &endpoints) {
            violations.push(Violation::BadSpanningTree { reason });
        }
    }

    let mut names = BTreeSet::new();
    let letters = vertex_letter_names(spec);
    let tree: BTreeSet<&str> = spec.spanning_tree.iter().flatten().map(String::as_str).collect();
    for name in letters
        .iter()
        .flatten()
        .map(String::as_str)
        .chain(spec.edges.iter().map(|e| e.name.as_str()).filter(|n| !tree.contains(n)))
    {
        if !names.insert(name) {
            violations.push(Violation::NameClash { name: name.to_string() });
        }
    }
    ValidationReport { violations }
}

fn components(nv: usize, endpoints: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &(s, t) in endpoints {
        let (a, b) = (find(&mut parent, s), find(&mut parent, t));
        parent[a] = b;
    }
    (0..nv).filter(|&v| find(&mut parent, v) == v).count()
}

fn check_spanning_tree(spec: &GoGSpec, tree: &[String], endpoints: &[(usize, usize)]) -> Result<(), String> {
    let nv = spec.vertices.len();
    let mut seen = BTreeSet::new();
    let mut chosen = Vec::new();
    for name in tree {
        if !seen.insert(name.as_str()) {
            return Err(format!("edge `{name}` listed twice"));
        }
        let Some(ix) = spec.edges.iter().position(|e| &e.name == name) else {
            return Err(format!("unknown edge `{name}`"));
        };
        let (s, t) = endpoints[ix];
        if s == t {
            return Err(format!("edge `{name}` is a loop"));
        }
        chosen.push((s, t));
    }
    if chosen.len() + 1 != nv {
        return Err(format!(
            "{} edges listed, a spanning tree needs {}",
            chosen.len(),
            nv - 1
        ));
    }
    if components(nv, &chosen) != 1 {
        return Err("listed edges do not connect every vertex".to_string());
    }
    Ok(())
}

/// A validated graph of groups with its chosen spanning tree and generator names.
#[derive(Clone, Debug)]
pub struct GraphOfGroups {
    spec: GoGSpec,
    source: Vec<usize>,
    target: Vec<usize>,
    in_tree: Vec<bool>,
    base: usize,
    tree_paths: Vec<Vec<Step>>,
    vertex_letters: Vec<Vec<String>>,
    generators: Vec<(String, Generator)>,
    lookup: HashMap<String, Generator>,
}

impl GraphOfGroups {
    pub fn new(spec: GoGSpec) -> Result<Self, GogError> {
        let report = validate(&spec);
        if !report.is_ok() {
            return Err(GogError::Invalid(report));
        }
        let vix: HashMap<&str, usize> = spec.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let source: Vec<usize> = spec.edges.iter().map(|e| vix[e.source.as_str()]).collect();
        let target: Vec<usize> = spec.edges.iter().map(|e| vix[e.target.as_str()]).collect();
        let base = (0..spec.vertices.len())
            .min_by(|&a, &b| spec.vertices[a].cmp(&spec.vertices[b]))
            .expect("validated graphs have a vertex");

        let mut in_tree = vec![false; spec.edges.len()];
        match &spec.spanning_tree {
            Some(names) => {
                for name in names {
                    let ix = spec.edges.iter().position(|e| &e.name == name).expect("validated");
                    in_tree[ix] = true;
                }
            }
            None => {
                let mut seen = vec![false; spec.vertices.len()];
                seen[base] = true;
                let mut queue = VecDeque::from([base]);
                while let Some(v) = queue.pop_front() {
                    for e in 0..spec.edges.len() {
                        let other = if source[e] == v {
                            target[e]
                        } else if target[e] == v {
                            source[e]
                        } else {
                            continue;
                        };
                        if !seen[other] {
                            seen[other] = true;
                            in_tree[e] = true;
                            queue.push_back(other);
                        }
                    }
                }
            }
        }

        // Paths from the base vertex along the tree.
        let mut tree_paths: Vec<Option<Vec<Step>>> = vec![None; spec.vertices.len()];
        tree_paths[base] = Some(Vec::new());
        let mut queue = VecDeque::from([base]);
        while let Some(v) = queue.pop_front() {
            let path = tree_paths[v].clone().expect("visited");
            for e in (0..spec.edges.len()).filter(|&e| in_tree[e]) {
                let (other, forward) = if source[e] == v {
                    (target[e], true)
                } else if target[e] == v {
                    (source[e], false)
                } else {
                    continue;
                };
                if tree_paths[other].is_none() {
                    let mut p = path.clone();
                    p.push(Step { edge: e, forward });
                    tree_paths[other] = Some(p);
                    queue.push_back(other);
                }
            }
        }
        let tree_paths = tree_paths.into_iter().map(|p| p.expect("tree spans")).collect();

        let vertex_letters = vertex_letter_names(&spec);
        let mut generators = Vec::new();
        for (v, names) in vertex_letters.iter().enumerate() {
            for (coord, name) in names.iter().enumerate() {
                generators.push((name.clone(), Generator::Vertex { vertex: v, coord }));
            }
        }
        for (e, edge) in spec.edges.iter().enumerate() {
            if !in_tree[e] {
                generators.push((edge.name.clone(), Generator::Stable { edge: e }));
            }
        }
        let lookup = generators.iter().cloned().collect();
        Ok(GraphOfGroups {
            spec,
            source,
            target,
            in_tree,
            base,
            tree_paths,
            vertex_letters,
            generators,
            lookup,
        })
    }

    pub fn spec(&self) -> &GoGSpec {
        &self.spec
    }

    pub fn rank(&self) -> usize {
        self.spec.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.spec.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.spec.edges.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.spec.vertices[v]
    }

    pub fn edge(&self, e: usize) -> &EdgeSpec {
        &self.spec.edges[e]
    }

    pub fn source(&self, e: usize) -> usize {
        self.source[e]
    }

    pub fn target(&self, e: usize) -> usize {
        self.target[e]
    }

    pub fn in_tree(&self, e: usize) -> bool {
        self.in_tree[e]
    }

    pub fn base_vertex(&self) -> usize {
        self.base
    }

    /// Tree path from the base vertex to `v`.
    pub fn tree_path(&self, v: usize) -> &[Step] {
        &self.tree_paths[v]
    }

    pub fn vertex_letters(&self, v: usize) -> &[String] {
        &self.vertex_letters[v]
    }

    /// Presentation generators in order: vertex letters, then stable letters.
    pub fn generators(&self) -> &[(String, Generator)] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Result<Generator, GogError> {
        self.lookup
            .get(name)
            .copied()
            .ok_or_else(|| GogError::UnknownLetter(name.to_string()))
    }

    pub fn stable_edges(&self) -> Vec<usize> {
        (0..self.edge_count()).filter(|&e| !self.in_tree[e]).collect()
    }

    pub fn step_start(&self, s: Step) -> usize {
        if s.forward {
            self.source[s.edge]
        } else {
            self.target[s.edge]
        }
    }

    pub fn step_end(&self, s: Step) -> usize {
        if s.forward {
            self.target[s.edge]
        } else {
            self.source[s.edge]
        }
    }

    /// Inclusion of the edge group at the vertex a step leaves from.
    pub fn start_inclusion(&self, s: Step) -> &IntMatrix {
        let e = &self.spec.edges[s.edge];
        if s.forward {
            &e.alpha
        } else {
            &e.omega
        }
    }

    /// Inclusion of the edge group at the vertex a step arrives at.
    pub fn end_inclusion(&self, s: Step) -> &IntMatrix {
        let e = &self.spec.edges[s.edge];
        if s.forward {
            &e.omega
        } else {
            &e.alpha
        }
    }

    /// Word `∏ letterᵢ^{xᵢ}` for a vertex-group element.
    pub fn vertex_element_word(&self, v: usize, x: &[BigInt]) -> Word {
        let mut w = Word::empty();
        for (name, c) in self.vertex_letters[v].iter().zip(x) {
            let exp: i64 = c.try_into().expect("vertex exponent fits in i64");
            w.push(name, exp);
        }
        w
    }

    fn render_vertex_element(&self, v: usize, x: &[BigInt]) -> String {
        let compact = self.vertex_letters[v].iter().all(|n| n.chars().count() == 1);
        let parts: Vec<String> = self.vertex_letters[v]
            .iter()
            .zip(x)
            .filter(|(_, c)| !c.is_zero())
            .map(|(name, c)| {
                if c.is_one() {
                    name.clone()
                } else {
                    format!("{name}^{c}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(if compact { "" } else { " " })
        }
    }

    pub fn presentation(&self) -> Presentation {
        let n = self.rank();
        let mut relations = Vec::new();
        for v in 0..self.vertex_count() {
            let letters = &self.vertex_letters[v];
            for i in 0..n {
                for j in i + 1..n {
                    let (x, y) = (&letters[i], &letters[j]);
                    let sep = if x.chars().count() == 1 && y.chars().count() == 1 {
                        ""
                    } else {
                        " "
                    };
                    relations.push(Relation {
                        lhs: Word::from_letters([(x.as_str(), 1), (y.as_str(), 1)]),
                        rhs: Word::from_letters([(y.as_str(), 1), (x.as_str(), 1)]),
                        display: format!("{x}{sep}{y} = {y}{sep}{x}"),
                    });
                }
            }
        }
        for (e, edge) in self.spec.edges.iter().enumerate() {
            let (s, t) = (self.source[e], self.target[e]);
            for c in 0..n {
                let a = edge.alpha.column(c);
                let o = edge.omega.column(c);
                let a_word = self.vertex_element_word(s, &a);
                let o_word = self.vertex_element_word(t, &o);
                if self.in_tree[e] {
                    relations.push(Relation {
                        display: format!(
                            "{} = {}",
                            self.render_vertex_element(s, &a),
                            self.render_vertex_element(t, &o)
                        ),
                        lhs: a_word,
                        rhs: o_word,
                    });
                } else {
                    let single = a_word.letters().len() == 1 && a_word.letters()[0].exp == 1;
                    let base = self.render_vertex_element(s, &a);
                    let base = if single { base } else { format!("({base})") };
                    let lhs = Word::letter(&edge.name, -1)
                        .concat(&a_word)
                        .concat(&Word::letter(&edge.name, 1));
                    relations.push(Relation {
                        display: format!("{base}^{} = {}", edge.name, self.render_vertex_element(t, &o)),
                        lhs,
                        rhs: o_word,
                    });
                }
            }
        }
        Presentation {
            generators: self.generators.iter().map(|(n, _)| n.clone()).collect(),
            relations,
        }
    }

    /// Local data of the Bass–Serre tree: the degree of each vertex lift and the
    /// number of ends.
    pub fn bass_serre_degrees(&self) -> BassSerreLocalData {
        let nv = self.vertex_count();
        let ne = self.edge_count();
        let alpha_ix: Vec<BigInt> = self.spec.edges.iter().map(|e| e.alpha.det().abs()).collect();
        let omega_ix: Vec<BigInt> = self.spec.edges.iter().map(|e| e.omega.det().abs()).collect();
        let mut degrees = vec![BigInt::zero(); nv];
        for e in 0..ne {
            degrees[self.source[e]] += &alpha_ix[e];
            degrees[self.target[e]] += &omega_ix[e];
        }

        // Collapse leaves (one incident edge-end of index 1) to reach the minimal subtree.
        let mut alive_v = vec![true; nv];
        let mut alive_e = vec![true; ne];
        loop {
            let mut pruned = false;
            for v in 0..nv {
                if !alive_v[v] {
                    continue;
                }
                let ends: Vec<(usize, bool)> = (0..ne)
                    .filter(|&e| alive_e[e])
                    .flat_map(|e| {
                        let mut out = Vec::new();
                        if self.source[e] == v {
                            out.push((e, true));
                        }
                        if self.target[e] == v {
                            out.push((e, false));
                        }
                        out
                    })
                    .collect();
                if let [(e, at_source)] = ends[..] {
                    let ix = if at_source { &alpha_ix[e] } else { &omega_ix[e] };
                    if ix.is_one() {
                        alive_v[v] = false;
                        alive_e[e] = false;
                        pruned = true;
                    }
                }
            }
            if !pruned {
                break;
            }
        }
        let ends = if !alive_e.iter().any(|&a| a) {
            Ends::Bounded
        } else {
            let mut minimal = vec![BigInt::zero(); nv];
            for e in (0..ne).filter(|&e| alive_e[e]) {
                minimal[self.source[e]] += &alpha_ix[e];
                minimal[self.target[e]] += &omega_ix[e];
            }
            let two = BigInt::from(2);
            if (0..nv).filter(|&v| alive_v[v]).all(|v| minimal[v] == two) {
                Ends::TwoEnded
            } else {
                Ends::InfinitelyMany
            }
        };
        BassSerreLocalData {
            degrees: self
                .spec
                .vertices
                .iter()
                .cloned()
                .zip(degrees)
                .map(|(vertex, degree)| VertexDegree { vertex, degree })
                .collect(),
            ends,
        }
    }

    /// Free rank of the underlying graph, `#edges − #vertices + 1`.
    pub fn underlying_rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    #[serde(skip)]
    pub lhs: Word,
    #[serde(skip)]
    pub rhs: Word,
    pub display: String,
}

impl Relation {
    /// `lhs · rhs⁻¹`
    pub fn relator(&self) -> Word {
        self.lhs.concat(&self.rhs.inverse())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relations: Vec<Relation>,
}

impl Presentation {
    pub fn relators(&self) -> Vec<Word> {
        self.relations.iter().map(Relation::relator).collect()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<&str> = self.relations.iter().map(|r| r.display.as_str()).collect();
        write!(f, "⟨{} | {}⟩", self.generators.join(", "), rels.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Ends {
    /// The tree is finite (the group fixes a vertex).
    Bounded,
    /// The minimal subtree is a line.
    TwoEnded,
    InfinitelyMany,
}

impl fmt::Display for Ends {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ends::Bounded => "bounded",
            Ends::TwoEnded => "two-ended (line)",
            Ends::InfinitelyMany => "infinitely many ends",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexDegree {
    pub vertex: String,
    #[serde(serialize_with = "crate::linalg::rational::serialize_bigint")]
    pub degree: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BassSerreLocalData {
    pub degrees: Vec<VertexDegree>,
    pub ends: Ends,
}

impl BassSerreLocalData {
    pub fn degree_of(&self, vertex: &str) -> Option<&BigInt> {
        self.degrees.iter().find(|d| d.vertex == vertex).map(|d| &d.degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{bs12, spec_a, spec_b};

    #[test]
    fn sample_graphs_validate() {
        assert!(validate(&spec_a()).is_ok());
        assert!(validate(&spec_b()).is_ok());
    }

    #[test]
    fn singular_inclusion_is_reported() {
        let mut s = spec_a();
        s.edges[0].alpha = IntMatrix::from_i64(&[&[1, 0], &[0, 0]]);
        let report = validate(&s);
        assert!(report.to_string().contains("edge inclusion not injective"));
    }

    #[test]
    fn two_components_are_reported() {
        let mut s = spec_a();
        s.vertices.push("Z".into());
        let report = validate(&s);
        assert_eq!(report.violations, vec![Violation::Disconnected]);
        assert_eq!(report.to_string(), "graph not connected");
    }

    #[test]
    fn dimension_and_tree_checks() {
        let mut s = spec_a();
        s.edges[1].omega = IntMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(matches!(
            validate(&s).violations[0],
            Violation::DimensionMismatch { .. }
        ));
        let mut s = spec_a();
        s.spanning_tree = Some(vec!["h".into()]);
        assert!(matches!(validate(&s).violations[0], Violation::BadSpanningTree { .. }));
    }

    #[test]
    fn presentations_match_displayed_ones() {
        let a = GraphOfGroups::new(spec_a()).unwrap().presentation();
        assert_eq!(
            a.to_string(),
            "⟨a, b, h, p | ab = ba, a^h = a^2, (b^2)^h = b, a^p = a, b^p = ab⟩"
        );
        let b = GraphOfGroups::new(spec_b()).unwrap().presentation();
        assert_eq!(
            b.to_string(),
            "⟨a, b, h, p, e | ab = ba, a^h = a^2, (b^2)^h = b, a^p = a, b^p = ab, a^e = b^-1, b^e = a⟩"
        );
        let bs = GraphOfGroups::new(bs12()).unwrap().presentation();
        assert_eq!(bs.to_string(), "⟨a, t | a^t = a^2⟩");
    }

    #[test]
    fn degrees_of_sample_trees() {
        let a = GraphOfGroups::new(spec_a()).unwrap().bass_serre_degrees();
        assert_eq!(a.degree_of("X"), Some(&BigInt::from(6)));
        assert_eq!(a.ends, Ends::InfinitelyMany);
        let b = GraphOfGroups::new(spec_b()).unwrap().bass_serre_degrees();
        assert_eq!(b.degree_of("X"), Some(&BigInt::from(8)));
        assert_eq!(b.ends, Ends::InfinitelyMany);
    }

    #[test]
    fn identity_loop_is_a_line() {
        let mut s = spec_a();
        s.edges.truncate(1);
        s.edges[0].alpha = IntMatrix::identity(2);
        s.edges[0].omega = IntMatrix::identity(2);
        let g = GraphOfGroups::new(s).unwrap();
        let d = g.bass_serre_degrees();
        assert_eq!(d.degree_of("X"), Some(&BigInt::from(2)));
        assert_eq!(d.ends, Ends::TwoEnded);
    }

    #[test]
    fn underlying_ranks() {
        assert_eq!(GraphOfGroups::new(spec_a()).unwrap().underlying_rank(), 2);
        assert_eq!(GraphOfGroups::new(spec_b()).unwrap().underlying_rank(), 3);
        let tree = GoGSpec {
            rank: 1,
            vertices: vec!["U".into(), "W".into()],
            edges: vec![EdgeSpec {
                name: "e".into(),
                source: "U".into(),
                target: "W".into(),
                alpha: IntMatrix::from_i64(&[&[2]]),
                omega: IntMatrix::from_i64(&[&[3]]),
            }],
            spanning_tree: None,
        };
        let g = GraphOfGroups::new(tree).unwrap();
        assert_eq!(g.underlying_rank(), 0);
        assert!(g.stable_edges().is_empty());
        assert_eq!(g.presentation().to_string(), "⟨U_a, W_a | U_a^2 = W_a^3⟩");
        // Z *_{2Z=3Z} Z: degrees 2 and 3, infinitely many ends.
        assert_eq!(g.bass_serre_degrees().ends, Ends::InfinitelyMany);
    }

    #[test]
    fn leaf_with_surjective_end_is_pruned() {
        let spec = GoGSpec {
            rank: 1,
            vertices: vec!["U".into(), "W".into()],
            edges: vec![EdgeSpec {
                name: "e".into(),
                source: "U".into(),
                target: "W".into(),
                alpha: IntMatrix::from_i64(&[&[1]]),
                omega: IntMatrix::from_i64(&[&[3]]),
            }],
            spanning_tree: Some(vec!["e".into()]),
        };
        let g = GraphOfGroups::new(spec).unwrap();
        assert_eq!(g.bass_serre_degrees().ends, Ends::Bounded);
    }
}
