//! Bipartite dual principal graphs: construction, DOT output and golden comparison.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::double::{Mode, SectorKind, SectorSystem};
use crate::error::{Error, Result};
use crate::inclusion::{ChiralData, InclusionSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub top: usize,
    pub bottom: usize,
    pub mult: u32,
}

/// Chiral vertices of color zero on top, double sectors on the bottom.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BipartiteGraph {
    pub name: String,
    pub top: Vec<String>,
    pub bottom: Vec<String>,
    pub edges: Vec<Edge>,
    /// Empty for graphs read back from text.
    #[serde(skip)]
    pub top_dims: Vec<f64>,
    #[serde(skip)]
    pub bottom_dims: Vec<f64>,
}

impl BipartiteGraph {
    pub fn empty(name: &str) -> Self {
        BipartiteGraph {
            name: name.to_string(),
            top: Vec::new(),
            bottom: Vec::new(),
            edges: Vec::new(),
            top_dims: Vec::new(),
            bottom_dims: Vec::new(),
        }
    }

    /// Number of edges counted with multiplicity.
    pub fn edge_count(&self) -> u32 {
        self.edges.iter().map(|e| e.mult).sum()
    }

    pub fn node_count(&self) -> usize {
        self.top.len() + self.bottom.len()
    }

    /// Bottom neighbours of a top vertex with multiplicities.
    pub fn neighbors(&self, top: &str) -> Vec<(&str, u32)> {
        let Some(t) = self.top.iter().position(|x| x == top) else {
            return Vec::new();
        };
        self.edges.iter().filter(|e| e.top == t).map(|e| (self.bottom[e.bottom].as_str(), e.mult)).collect()
    }

    pub fn degree(&self, top: &str) -> u32 {
        self.neighbors(top).iter().map(|(_, m)| m).sum()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n == 0 {
            return true;
        }
        let adj = self.adjacency();
        let seen = reach(&adj, 0);
        seen.iter().all(|&s| s)
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let nt = self.top.len();
        let mut adj = vec![Vec::new(); self.node_count()];
        for e in &self.edges {
            adj[e.top].push(nt + e.bottom);
            adj[nt + e.bottom].push(e.top);
        }
        adj
    }

    /// Largest relative violation of `Σ_top mult · d_top = d_bottom`, if dims are known.
    pub fn perron_balance_deviation(&self) -> Option<f64> {
        if self.top_dims.len() != self.top.len() || self.bottom_dims.len() != self.bottom.len() {
            return None;
        }
        let mut sums = vec![0.0; self.bottom.len()];
        for e in &self.edges {
            sums[e.bottom] += e.mult as f64 * self.top_dims[e.top];
        }
        Some(
            sums.iter()
                .zip(&self.bottom_dims)
                .map(|(s, d)| (s - d).abs() / d.max(1.0))
                .fold(0.0, f64::max),
        )
    }

    /// Edge vector of a bottom vertex keyed by top name.
    fn bottom_vector(&self, b: usize) -> BTreeMap<&str, u32> {
        self.edges.iter().filter(|e| e.bottom == b).map(|e| (self.top[e.top].as_str(), e.mult)).collect()
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            schema: crate::SCHEMA.to_string(),
            graph: self.name.clone(),
            top: self.top.clone(),
            bottom: self.bottom.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDocument {
                    top: self.top[e.top].clone(),
                    bottom: self.bottom[e.bottom].clone(),
                    mult: e.mult,
                })
                .collect(),
        }
    }

    pub fn from_document(doc: GraphDocument, origin: &str) -> Result<Self> {
        if doc.schema != crate::SCHEMA {
            return Err(Error::spec(format!("{origin}: schema"), format!("expected \"{}\"", crate::SCHEMA)));
        }
        let find = |names: &[String], x: &str, side: &str| {
            names
                .iter()
                .position(|n| n == x)
                .ok_or_else(|| Error::spec(format!("{origin}: edges"), format!("unknown {side} vertex `{x}`")))
        };
        let mut edges = Vec::with_capacity(doc.edges.len());
        for e in &doc.edges {
            if e.mult == 0 {
                return Err(Error::spec(format!("{origin}: edges"), "multiplicities must be positive"));
            }
            edges.push(Edge { top: find(&doc.top, &e.top, "top")?, bottom: find(&doc.bottom, &e.bottom, "bottom")?, mult: e.mult });
        }
        edges.sort();
        Ok(BipartiteGraph { name: doc.graph, top: doc.top, bottom: doc.bottom, edges, top_dims: vec![], bottom_dims: vec![] })
    }
}

fn reach(adj: &[Vec<usize>], start: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDocument {
    pub top: String,
    pub bottom: String,
    pub mult: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub schema: String,
    pub graph: String,
    pub top: Vec<String>,
    pub bottom: Vec<String>,
    pub edges: Vec<EdgeDocument>,
}

/// Edge vectors `T_τ M_λ e_id` over all chiral vertices, one per generator.
fn generator_vectors(chiral: &ChiralData, sys: &SectorSystem) -> Result<Vec<Vec<i64>>> {
    sys.generators
        .iter()
        .map(|g| match g.kind {
            SectorKind::ChiralPair { lambda, tau } => {
                let m = chiral.m.get(lambda).and_then(Option::as_ref).ok_or_else(|| {
                    Error::Precondition(format!("no chiral action for `{}`", g.name))
                })?;
                let t = chiral.t.get(tau).ok_or_else(|| Error::Precondition("ambichiral action missing".into()))?;
                Ok((t * m).column(chiral.id_vertex).iter().copied().collect())
            }
            SectorKind::FullPair { .. } => Err(Error::Precondition("dual graph needs chiral products".into())),
        })
        .collect()
}

/// Edge vectors of irreducibles: read off unsplit generators, and share a
/// split remainder equally among twin columns.
fn irreducible_vectors(sys: &SectorSystem, gens: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let m = sys.irreducibles.len();
    let nv = gens.first().map_or(0, Vec::len);
    let column = |c: usize| sys.b.iter().map(|r| r[c]).collect::<Vec<_>>();
    let mut w: Vec<Option<Vec<i64>>> = vec![None; m];
    loop {
        let mut progress = false;
        for (i, row) in sys.b.iter().enumerate() {
            let unknown: Vec<usize> = (0..m).filter(|&c| row[c] > 0 && w[c].is_none()).collect();
            let Some(&first) = unknown.first() else { continue };
            let a = row[first];
            let col = column(first);
            if unknown.iter().any(|&c| row[c] != a || column(c) != col) {
                continue;
            }
            let mut rest = gens[i].clone();
            for c in (0..m).filter(|&c| row[c] > 0 && w[c].is_some()) {
                let known = w[c].as_ref().expect("known");
                for v in 0..nv {
                    rest[v] -= row[c] as i64 * known[v];
                }
            }
            let parts = a as i64 * unknown.len() as i64;
            if rest.iter().any(|&x| x < 0 || x % parts != 0) {
                return Err(Error::SplitDistribution(format!(
                    "`{}` leaves {:?}, not divisible into {parts} equal parts; explicit split data required",
                    sys.generators[i].name, rest
                )));
            }
            let share: Vec<i64> = rest.iter().map(|x| x / parts).collect();
            for &c in &unknown {
                w[c] = Some(share.clone());
            }
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let w: Vec<Vec<i64>> = w
        .into_iter()
        .enumerate()
        .map(|(c, v)| {
            v.ok_or_else(|| {
                Error::SplitDistribution(format!("no determining generator for `{}`", sys.irreducibles[c].name))
            })
        })
        .collect::<Result<_>>()?;
    for (i, row) in sys.b.iter().enumerate() {
        let sum: Vec<i64> = (0..nv).map(|v| (0..m).map(|c| row[c] as i64 * w[c][v]).sum()).collect();
        if sum != gens[i] {
            return Err(Error::SplitDistribution(format!(
                "edge vectors do not add up for `{}`",
                sys.generators[i].name
            )));
        }
    }
    Ok(w)
}

/// The connected component of the identity in the graph joining color-zero
/// chiral vertices to the double sectors containing them.
pub fn dual_principal_graph(spec: &InclusionSpec, chiral: &ChiralData, sys: &SectorSystem) -> Result<BipartiteGraph> {
    if sys.mode != Mode::Chiral || !sys.is_resolved() {
        return Err(Error::Precondition("dual graph needs a resolved chiral sector system".into()));
    }
    let gens = generator_vectors(chiral, sys)?;
    let w = irreducible_vectors(sys, &gens)?;
    let tops = chiral.color_zero_vertices();
    let nt = tops.len();
    let mut edges = Vec::new();
    for (b, vec) in w.iter().enumerate() {
        for (t, &v) in tops.iter().enumerate() {
            if vec[v] > 0 {
                edges.push(Edge { top: t, bottom: b, mult: vec[v] as u32 });
            }
        }
    }
    let full = BipartiteGraph {
        name: spec.graph_name.clone(),
        top: tops.iter().map(|&v| spec.chiral_graph.vertices[v].clone()).collect(),
        bottom: sys.irreducibles.iter().map(|i| i.name.clone()).collect(),
        edges,
        top_dims: tops.iter().map(|&v| chiral.chiral_dims[v]).collect(),
        bottom_dims: sys.irreducibles.iter().map(|i| i.dim).collect(),
    };
    let id_top = tops
        .iter()
        .position(|&v| v == chiral.id_vertex)
        .ok_or_else(|| Error::Precondition("identity vertex has nonzero color".into()))?;
    let seen = reach(&full.adjacency(), id_top);
    Ok(restrict(&full, &seen[..nt], &seen[nt..]))
}

fn restrict(g: &BipartiteGraph, keep_top: &[bool], keep_bottom: &[bool]) -> BipartiteGraph {
    let remap = |keep: &[bool]| {
        let mut next = 0;
        keep.iter()
            .map(|&k| {
                k.then(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect::<Vec<_>>()
    };
    let (tmap, bmap) = (remap(keep_top), remap(keep_bottom));
    let pick = |v: &[String], keep: &[bool]| v.iter().zip(keep).filter(|(_, &k)| k).map(|(x, _)| x.clone()).collect();
    let pickf = |v: &[f64], keep: &[bool]| v.iter().zip(keep).filter(|(_, &k)| k).map(|(x, _)| *x).collect();
    BipartiteGraph {
        name: g.name.clone(),
        top: pick(&g.top, keep_top),
        bottom: pick(&g.bottom, keep_bottom),
        edges: g
            .edges
            .iter()
            .filter_map(|e| Some(Edge { top: tmap[e.top]?, bottom: bmap[e.bottom]?, mult: e.mult }))
            .collect(),
        top_dims: pickf(&g.top_dims, keep_top),
        bottom_dims: pickf(&g.bottom_dims, keep_bottom),
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Deterministic DOT text; top vertices are boxes, multiplicities are edge attributes.
pub fn emit_dot(g: &BipartiteGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph {} {{", quote(&g.name));
    if g.node_count() > 0 {
        let _ = writeln!(out, "  rankdir=TB;");
    }
    for t in &g.top {
        let _ = writeln!(out, "  {} [label={}, shape=box];", quote(&format!("t:{t}")), quote(t));
    }
    for b in &g.bottom {
        let _ = writeln!(out, "  {} [label={}, shape=ellipse];", quote(&format!("b:{b}")), quote(b));
    }
    let mut edges = g.edges.clone();
    edges.sort();
    for e in &edges {
        let _ = writeln!(
            out,
            "  {} -- {} [mult={}, label={}];",
            quote(&format!("t:{}", g.top[e.top])),
            quote(&format!("b:{}", g.bottom[e.bottom])),
            e.mult,
            quote(&e.mult.to_string())
        );
    }
    out.push_str("}\n");
    out
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
}

impl Lexer<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::DotParse { line: self.line, message: message.into() }
    }

    fn skip_space(&mut self) {
        while self.chars.peek().is_some_and(|c| c.is_whitespace() && *c != '\n') {
            self.chars.next();
        }
    }

    fn token(&mut self) -> Result<Option<String>> {
        self.skip_space();
        let Some(&c) = self.chars.peek() else { return Ok(None) };
        if c == '"' {
            self.chars.next();
            let mut s = String::new();
            loop {
                match self.chars.next() {
                    Some('\\') => s.push(self.chars.next().ok_or_else(|| self.err("unterminated escape"))?),
                    Some('"') => return Ok(Some(s)),
                    Some('\n') | None => return Err(self.err("unterminated string")),
                    Some(c) => s.push(c),
                }
            }
        }
        if "{}[];=,".contains(c) {
            self.chars.next();
            return Ok(Some(c.to_string()));
        }
        if c == '-' {
            self.chars.next();
            return match self.chars.next() {
                Some('-') => Ok(Some("--".into())),
                _ => Err(self.err("expected `--`")),
            };
        }
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_alphanumeric() || c == '_' || c == '.' {
                s.push(c);
                self.chars.next();
            } else {
                break;
            }
        }
        if s.is_empty() {
            return Err(self.err(format!("unexpected character `{c}`")));
        }
        Ok(Some(s))
    }
}

fn attributes(tokens: &[String], line: usize) -> Result<HashMap<String, String>> {
    let err = |m: &str| Error::DotParse { line, message: m.to_string() };
    let mut out = HashMap::new();
    let mut i = 0;
    while i < tokens.len() {
        if i + 2 >= tokens.len() || tokens[i + 1] != "=" {
            return Err(err("malformed attribute list"));
        }
        out.insert(tokens[i].clone(), tokens[i + 2].clone());
        i += 3;
        if i < tokens.len() {
            if tokens[i] != "," {
                return Err(err("expected `,` between attributes"));
            }
            i += 1;
        }
    }
    Ok(out)
}

/// Parses the DOT dialect written by [`emit_dot`].
pub fn parse_dot(text: &str) -> Result<BipartiteGraph> {
    let mut graph: Option<BipartiteGraph> = None;
    let mut closed = false;
    let mut pending = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let mut lx = Lexer { chars: raw.chars().peekable(), line };
        let mut toks = Vec::new();
        while let Some(t) = lx.token()? {
            toks.push(t);
        }
        if toks.is_empty() {
            continue;
        }
        let err = |m: &str| Error::DotParse { line, message: m.to_string() };
        if closed {
            return Err(err("content after closing brace"));
        }
        let Some(g) = graph.as_mut() else {
            if toks.len() == 3 && toks[0] == "graph" && toks[2] == "{" {
                graph = Some(BipartiteGraph::empty(&toks[1]));
                continue;
            }
            return Err(err("expected `graph \"NAME\" {`"));
        };
        if toks == ["}"] {
            closed = true;
            continue;
        }
        if toks.last().map(String::as_str) != Some(";") {
            return Err(err("statement must end with `;`"));
        }
        let body = &toks[..toks.len() - 1];
        let bracket = |from: usize| -> Result<HashMap<String, String>> {
            if body.len() == from {
                return Ok(HashMap::new());
            }
            if body[from] != "[" || body.last().map(String::as_str) != Some("]") {
                return Err(err("expected attribute list"));
            }
            attributes(&body[from + 1..body.len() - 1], line)
        };
        if body.len() == 3 && body[1] == "=" {
            continue;
        }
        if body.len() >= 3 && body[1] == "--" {
            let attrs = bracket(3)?;
            let mult: u32 = attrs
                .get("mult")
                .map_or(Ok(1), |m| m.parse())
                .map_err(|_| err("mult must be a positive integer"))?;
            if mult == 0 {
                return Err(err("mult must be a positive integer"));
            }
            pending.push((body[0].clone(), body[2].clone(), mult, line));
            continue;
        }
        let attrs = bracket(1)?;
        let id = &body[0];
        let label = attrs.get("label").cloned();
        if let Some(name) = id.strip_prefix("t:") {
            g.top.push(label.unwrap_or_else(|| name.to_string()));
        } else if let Some(name) = id.strip_prefix("b:") {
            g.bottom.push(label.unwrap_or_else(|| name.to_string()));
        } else {
            return Err(err("node ids must start with `t:` or `b:`"));
        }
    }
    let mut g = graph.ok_or(Error::DotParse { line: 0, message: "empty document".into() })?;
    if !closed {
        return Err(Error::DotParse { line: text.lines().count(), message: "missing closing brace".into() });
    }
    for (a, b, mult, line) in pending {
        let err = |m: String| Error::DotParse { line, message: m };
        let top = a
            .strip_prefix("t:")
            .and_then(|n| g.top.iter().position(|x| x == n))
            .ok_or_else(|| err(format!("unknown top vertex `{a}`")))?;
        let bottom = b
            .strip_prefix("b:")
            .and_then(|n| g.bottom.iter().position(|x| x == n))
            .ok_or_else(|| err(format!("unknown bottom vertex `{b}`")))?;
        g.edges.push(Edge { top, bottom, mult });
    }
    g.edges.sort();
    Ok(g)
}

/// Reads a golden graph: a bundled golden file name, or a path on disk.
pub fn load_golden(source: &str) -> Result<BipartiteGraph> {
    let (text, origin) = if std::path::Path::new(source).exists() {
        crate::data::read_path(source)?
    } else {
        crate::data::read_golden(source)?
    };
    let doc: GraphDocument =
        serde_json::from_str(&text).map_err(|source| Error::Parse { path: origin.clone(), source })?;
    BipartiteGraph::from_document(doc, &origin)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeDiff {
    pub top: String,
    pub bottom: String,
    pub mult: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoldenReport {
    pub matched: bool,
    /// Edges in the golden graph that were not computed.
    pub missing: Vec<EdgeDiff>,
    /// Computed edges absent from the golden graph.
    pub extra: Vec<EdgeDiff>,
    pub missing_vertices: Vec<String>,
    pub extra_vertices: Vec<String>,
    /// Computed split siblings renamed to match the golden numbering.
    pub renamed: Vec<(String, String)>,
}

fn base_name(name: &str) -> &str {
    match name.rsplit_once('_') {
        Some((base, idx)) if !idx.is_empty() && idx.chars().all(|c| c.is_ascii_digit()) => base,
        _ => name,
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn distance(a: &BTreeMap<&str, u32>, b: &BTreeMap<&str, u32>) -> u32 {
    let keys: std::collections::BTreeSet<&&str> = a.keys().chain(b.keys()).collect();
    keys.into_iter().map(|k| a.get(*k).copied().unwrap_or(0).abs_diff(b.get(*k).copied().unwrap_or(0))).sum()
}

/// Compares edge multisets by vertex label, allowing split siblings
/// (`X_1`, `X_2`, ...) to be matched in any order.
pub fn compare_golden(g: &BipartiteGraph, golden: &BipartiteGraph) -> GoldenReport {
    let mut rename: Vec<String> = g.bottom.clone();
    let mut renamed = Vec::new();
    let mut groups: BTreeMap<&str, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, b) in g.bottom.iter().enumerate() {
        groups.entry(base_name(b)).or_default().0.push(i);
    }
    for (i, b) in golden.bottom.iter().enumerate() {
        groups.entry(base_name(b)).or_default().1.push(i);
    }
    for (ours, theirs) in groups.values() {
        if ours.len() < 2 || ours.len() != theirs.len() || ours.len() > 6 {
            continue;
        }
        let best = permutations(ours.len())
            .into_iter()
            .min_by_key(|p| {
                p.iter()
                    .enumerate()
                    .map(|(k, &j)| distance(&g.bottom_vector(ours[k]), &golden.bottom_vector(theirs[j])))
                    .sum::<u32>()
            })
            .expect("non-empty");
        for (k, &j) in best.iter().enumerate() {
            let to = golden.bottom[theirs[j]].clone();
            if g.bottom[ours[k]] != to {
                renamed.push((g.bottom[ours[k]].clone(), to.clone()));
            }
            rename[ours[k]] = to;
        }
    }
    let edge_map = |tops: &[String], bottoms: &[String], edges: &[Edge]| -> BTreeMap<(String, String), u32> {
        edges.iter().map(|e| ((tops[e.top].clone(), bottoms[e.bottom].clone()), e.mult)).collect()
    };
    let ours = edge_map(&g.top, &rename, &g.edges);
    let theirs = edge_map(&golden.top, &golden.bottom, &golden.edges);
    let mut missing = Vec::new();
    let mut extra = Vec::new();
    let keys: std::collections::BTreeSet<&(String, String)> = ours.keys().chain(theirs.keys()).collect();
    for k in keys {
        let (a, b) = (ours.get(k).copied().unwrap_or(0), theirs.get(k).copied().unwrap_or(0));
        let diff = EdgeDiff { top: k.0.clone(), bottom: k.1.clone(), mult: a.abs_diff(b) };
        if b > a {
            missing.push(diff);
        } else if a > b {
            extra.push(diff);
        }
    }
    let names = |v: &[String]| v.iter().cloned().collect::<std::collections::BTreeSet<_>>();
    let (mine, gold) = (
        names(&g.top).into_iter().chain(names(&rename)).collect::<std::collections::BTreeSet<_>>(),
        names(&golden.top).into_iter().chain(names(&golden.bottom)).collect::<std::collections::BTreeSet<_>>(),
    );
    let missing_vertices: Vec<String> = gold.difference(&mine).cloned().collect();
    let extra_vertices: Vec<String> = mine.difference(&gold).cloned().collect();
    GoldenReport {
        matched: missing.is_empty() && extra.is_empty() && missing_vertices.is_empty() && extra_vertices.is_empty(),
        missing,
        extra,
        missing_vertices,
        extra_vertices,
        renamed,
    }
}

impl std::fmt::Display for GoldenReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.matched {
            return writeln!(f, "golden: match");
        }
        writeln!(f, "golden: MISMATCH")?;
        for e in &self.missing {
            writeln!(f, "  missing edge {} -- {} (x{})", e.top, e.bottom, e.mult)?;
        }
        for e in &self.extra {
            writeln!(f, "  extra edge {} -- {} (x{})", e.top, e.bottom, e.mult)?;
        }
        for v in &self.missing_vertices {
            writeln!(f, "  missing vertex {v}")?;
        }
        for v in &self.extra_vertices {
            writeln!(f, "  extra vertex {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> BipartiteGraph {
        BipartiteGraph {
            name: "toy".into(),
            top: vec!["0".into(), "a \"b\"".into()],
            bottom: vec!["(0,0)".into(), "(1,1)_1".into(), "(1,1)_2".into()],
            edges: vec![
                Edge { top: 0, bottom: 0, mult: 1 },
                Edge { top: 1, bottom: 1, mult: 2 },
                Edge { top: 1, bottom: 2, mult: 2 },
            ],
            top_dims: vec![],
            bottom_dims: vec![],
        }
    }

    #[test]
    fn empty_graph_is_a_valid_document() {
        let text = emit_dot(&BipartiteGraph::empty("nothing"));
        assert_eq!(text, "graph \"nothing\" {\n}\n");
        let back = parse_dot(&text).unwrap();
        assert_eq!(back.node_count(), 0);
    }

    #[test]
    fn reemission_is_byte_identical() {
        let text = emit_dot(&sample());
        let back = parse_dot(&text).unwrap();
        assert_eq!(emit_dot(&back), text);
        assert_eq!(back.top[1], "a \"b\"");
        assert_eq!(back.edge_count(), 5);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let err = parse_dot("graph \"x\" {\n  \"t:0\" -- \"b:1\" [mult=1];\n}\n").unwrap_err();
        assert!(matches!(err, Error::DotParse { line: 2, .. }), "{err}");
        let err = parse_dot("graph \"x\" {\n  \"q:0\";\n").unwrap_err();
        assert!(matches!(err, Error::DotParse { line: 2, .. }));
        assert!(parse_dot("graph \"x\" {\n").is_err());
        assert!(parse_dot("").is_err());
    }

    #[test]
    fn sibling_permutation_is_tolerated() {
        let mut ours = sample();
        ours.edges.push(Edge { top: 0, bottom: 2, mult: 1 });
        let mut theirs = ours.clone();
        theirs.bottom.swap(1, 2);
        let report = compare_golden(&ours, &theirs);
        assert!(report.matched, "{report}");
        assert_eq!(report.renamed.len(), 2);
    }

    #[test]
    fn mismatch_lists_edges() {
        let ours = sample();
        let mut theirs = sample();
        theirs.edges.remove(0);
        theirs.edges[0].mult = 3;
        let report = compare_golden(&ours, &theirs);
        assert!(!report.matched);
        assert_eq!(report.extra.iter().filter(|e| e.top == "0").count(), 1);
        assert_eq!(report.missing.len(), 1);
        assert_eq!(report.missing[0].mult, 1);
    }

    #[test]
    fn base_names() {
        assert_eq!(base_name("(5,1)_2"), "(5,1)");
        assert_eq!(base_name("tau_1"), "tau");
        assert_eq!(base_name("(0,0)"), "(0,0)");
        assert_eq!(base_name("x_"), "x_");
    }

    #[test]
    fn document_round_trip() {
        let g = sample();
        let back = BipartiteGraph::from_document(g.to_document(), "mem").unwrap();
        assert_eq!(back.edges, g.edges);
        let mut doc = g.to_document();
        doc.edges[0].bottom = "nope".into();
        assert!(BipartiteGraph::from_document(doc, "mem").is_err());
    }
}
