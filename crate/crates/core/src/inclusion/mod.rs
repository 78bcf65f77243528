//! Conformal inclusions as data: branching coefficients, the ambichiral ring,
//! the chiral graph, and everything derived from them.

mod chiral;
mod rational;

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::data;
use crate::error::{Error, Result};
use crate::fusion::{build_su2_ring, build_su3_ring, verify_ring, Algebra, FusionRing, Label};
use crate::modular::{ModularData, Subsystem};
use crate::tolerance::{close, CERTIFICATE, IDENTITY, MATRIX};

pub use chiral::{chiral_multiplicities, derive_ambichiral_action, ChiralData};

pub type IMatrix = DMatrix<i64>;

/// The chiral graph: vertices, the adjacency `A[to][from]` of the fundamental
/// label's action, and the identity vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiralGraph {
    pub vertices: Vec<String>,
    pub adjacency: IMatrix,
    pub id_vertex: usize,
}

impl ChiralGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }
}

#[derive(Debug, Clone)]
pub struct InclusionSpec {
    pub name: String,
    pub title: String,
    pub ambient: String,
    pub graph_name: String,
    /// Where the descriptor was read from; used in error messages.
    pub origin: String,
    pub ring: Arc<FusionRing>,
    /// Ambichiral fusion ring; label colors hold the grade read off from the branching.
    pub ambichiral: Arc<FusionRing>,
    /// `b[ℓ][λ]`, rows ambichiral labels and columns ring labels.
    pub branching: Vec<Vec<u32>>,
    pub chiral_graph: ChiralGraph,
    pub fundamental: usize,
    pub ambi_embed: Vec<usize>,
    pub ambi_action: Option<Vec<IMatrix>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbichiralDocument {
    pub labels: Vec<String>,
    pub fusion: Vec<[usize; 4]>,
    pub dims: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChiralGraphDocument {
    pub vertices: Vec<String>,
    /// `[from, to, multiplicity]` for the action of the fundamental label.
    pub edges: Vec<(String, String, u32)>,
    pub id_vertex: String,
    pub fundamental: String,
}

/// Inclusion descriptor as stored on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InclusionDocument {
    pub schema: String,
    pub name: String,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub ambient: String,
    #[serde(default)]
    pub graph_name: String,
    pub algebra: Algebra,
    pub level: u32,
    pub ambichiral: AmbichiralDocument,
    pub branching: Vec<(usize, String, u32)>,
    pub chiral_graph: ChiralGraphDocument,
    pub ambi_embed: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambi_action: Option<Vec<Vec<Vec<i64>>>>,
}

/// Loads a built-in descriptor by name (`e6`, `e8`, `e8cc`, `e12`, `e24`) or a
/// descriptor file by path.
pub fn load_inclusion(source: &str) -> Result<InclusionSpec> {
    let (text, origin) = match data::builtin(source) {
        Some(b) => data::read_builtin(b)?,
        None if std::path::Path::new(source).exists() => data::read_path(source)?,
        None => {
            let names: Vec<&str> = data::BUILTINS.iter().map(|b| b.name).collect();
            return Err(Error::spec(
                "spec",
                format!("`{source}` is neither a built-in ({}) nor an existing file", names.join(", ")),
            ));
        }
    };
    parse_inclusion(&text, &origin)
}

/// Parses and validates descriptor text; `origin` names it in errors.
pub fn parse_inclusion(text: &str, origin: &str) -> Result<InclusionSpec> {
    let doc: InclusionDocument = serde_json::from_str(text).map_err(|source| Error::Parse {
        path: origin.to_string(),
        source,
    })?;
    from_document(doc, origin)
}

fn field_err(origin: &str, field: &str, message: impl fmt::Display) -> Error {
    Error::spec(format!("{origin}: {field}"), message.to_string())
}

pub fn from_document(doc: InclusionDocument, origin: &str) -> Result<InclusionSpec> {
    let e = |field: &str, msg: String| field_err(origin, field, msg);
    if doc.schema != crate::SCHEMA {
        return Err(e("schema", format!("expected \"{}\", found \"{}\"", crate::SCHEMA, doc.schema)));
    }
    let ring = match doc.algebra {
        Algebra::Su2 => build_su2_ring(doc.level),
        Algebra::Su3 => build_su3_ring(doc.level),
        Algebra::Abstract => Err(Error::Precondition("abstract algebra".into())),
    }
    .map_err(|err| e("level", err.to_string()))?;
    let ring = Arc::new(ring);
    let n = ring.len();

    let n_amb = doc.ambichiral.labels.len();
    if n_amb == 0 {
        return Err(e("ambichiral.labels", "empty".into()));
    }
    let mut branching = vec![vec![0u32; n]; n_amb];
    for (i, (l, lam, v)) in doc.branching.iter().enumerate() {
        let field = format!("branching[{i}]");
        if *l >= n_amb {
            return Err(e(&field, format!("ambichiral index {l} out of range")));
        }
        let col = ring.index_of(lam).map_err(|err| e(&field, err.to_string()))?;
        if *v == 0 {
            return Err(e(&field, "zero entries are implicit".into()));
        }
        branching[*l][col] = *v;
    }
    if branching[0][ring.identity()] != 1 {
        return Err(e("branching", "b[0][id] must be 1".into()));
    }
    let mut grades = Vec::with_capacity(n_amb);
    for (l, row) in branching.iter().enumerate() {
        let colors: Vec<u32> = (0..n).filter(|&c| row[c] > 0).map(|c| ring.color(c)).collect();
        match colors.first() {
            None => return Err(e("branching", format!("row {l} is zero"))),
            Some(&g) if colors.iter().all(|&c| c == g) => grades.push(g),
            Some(_) => return Err(e("branching", format!("row {l} mixes colors"))),
        }
    }

    let amb_labels: Vec<Label> = doc
        .ambichiral
        .labels
        .iter()
        .enumerate()
        .map(|(index, name)| Label { index, name: name.clone(), weight: vec![], color: grades[index] })
        .collect();
    for (i, q) in doc.ambichiral.fusion.iter().enumerate() {
        if q[..3].iter().any(|&x| x >= n_amb) {
            return Err(e(&format!("ambichiral.fusion[{i}]"), "label index out of range".into()));
        }
    }
    let ambichiral = FusionRing::from_entries(
        Algebra::Abstract,
        None,
        ring.modulus(),
        amb_labels,
        doc.ambichiral.fusion.iter().map(|q| (q[0], q[1], q[2], q[3] as u32)),
        None,
    )
    .map_err(|err| e("ambichiral.fusion", err.to_string()))?;
    let report = verify_ring(&ambichiral);
    if let Some(f) = report.failures().next() {
        return Err(e(
            "ambichiral.fusion",
            format!("{} fails: {}", f.invariant, f.witness.clone().unwrap_or_default()),
        ));
    }
    if ambichiral.identity() != 0 {
        return Err(e("ambichiral.fusion", "label 0 must be the identity".into()));
    }
    if doc.ambichiral.dims.len() != n_amb {
        return Err(e("ambichiral.dims", format!("expected {n_amb} entries")));
    }
    for (i, (&given, &pf)) in doc.ambichiral.dims.iter().zip(ambichiral.dims()).enumerate() {
        if !close(given, pf, IDENTITY) {
            return Err(e(
                &format!("ambichiral.dims[{i}]"),
                format!("{given} differs from Perron-Frobenius value {pf}"),
            ));
        }
    }

    let cg = &doc.chiral_graph;
    let nv = cg.vertices.len();
    for (i, v) in cg.vertices.iter().enumerate() {
        if cg.vertices[..i].contains(v) {
            return Err(e("chiral_graph.vertices", format!("duplicate vertex `{v}`")));
        }
    }
    let vertex = |field: &str, name: &str| {
        cg.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| e(field, format!("unknown vertex `{name}`")))
    };
    let mut adjacency = IMatrix::zeros(nv, nv);
    for (i, (from, to, m)) in cg.edges.iter().enumerate() {
        let field = format!("chiral_graph.edges[{i}]");
        let (a, b) = (vertex(&field, from)?, vertex(&field, to)?);
        adjacency[(b, a)] += *m as i64;
    }
    let id_vertex = vertex("chiral_graph.id_vertex", &cg.id_vertex)?;
    let fundamental = ring
        .index_of(&cg.fundamental)
        .map_err(|err| e("chiral_graph.fundamental", err.to_string()))?;
    if Some(fundamental) != ring.fundamental() {
        return Err(e("chiral_graph.fundamental", "must be the generating label of the ring".into()));
    }

    if doc.ambi_embed.len() != n_amb {
        return Err(e("ambi_embed", format!("expected {n_amb} entries")));
    }
    let ambi_embed = doc
        .ambi_embed
        .iter()
        .map(|name| vertex("ambi_embed", name))
        .collect::<Result<Vec<_>>>()?;
    if ambi_embed[0] != id_vertex {
        return Err(e("ambi_embed", "the ambichiral identity must embed at the identity vertex".into()));
    }

    let ambi_action = match &doc.ambi_action {
        None => None,
        Some(ms) => {
            if ms.len() != n_amb {
                return Err(e("ambi_action", format!("expected {n_amb} matrices")));
            }
            let mut out = Vec::with_capacity(n_amb);
            for (l, m) in ms.iter().enumerate() {
                if m.len() != nv || m.iter().any(|r| r.len() != nv) {
                    return Err(e(&format!("ambi_action[{l}]"), format!("must be {nv}×{nv}")));
                }
                out.push(IMatrix::from_fn(nv, nv, |i, j| m[i][j]));
            }
            Some(out)
        }
    };

    Ok(InclusionSpec {
        name: doc.name,
        title: doc.title,
        ambient: doc.ambient,
        graph_name: doc.graph_name,
        origin: origin.to_string(),
        ring,
        ambichiral: Arc::new(ambichiral),
        branching,
        chiral_graph: ChiralGraph { vertices: cg.vertices.clone(), adjacency, id_vertex },
        fundamental,
        ambi_embed,
        ambi_action,
    })
}

impl InclusionSpec {
    pub fn n_ambichiral(&self) -> usize {
        self.ambichiral.len()
    }

    /// Grade of an ambichiral label: the color of the ring labels it occurs in.
    pub fn grade(&self, tau: usize) -> u32 {
        self.ambichiral.color(tau)
    }

    pub fn nonzero_branching(&self) -> usize {
        self.branching.iter().flatten().filter(|&&b| b > 0).count()
    }

    /// Serializes back into the descriptor format.
    pub fn to_document(&self) -> InclusionDocument {
        let amb = &self.ambichiral;
        let v = &self.chiral_graph.vertices;
        let a = &self.chiral_graph.adjacency;
        InclusionDocument {
            schema: crate::SCHEMA.to_string(),
            name: self.name.clone(),
            title: self.title.clone(),
            ambient: self.ambient.clone(),
            graph_name: self.graph_name.clone(),
            algebra: self.ring.algebra(),
            level: self.ring.level().unwrap_or(0),
            ambichiral: AmbichiralDocument {
                labels: amb.labels().iter().map(|l| l.name.clone()).collect(),
                fusion: amb.entries().map(|(x, y, z, m)| [x, y, z, m as usize]).collect(),
                dims: amb.dims().to_vec(),
            },
            branching: self
                .branching
                .iter()
                .enumerate()
                .flat_map(|(l, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|(_, &b)| b > 0)
                        .map(move |(c, &b)| (l, self.ring.name(c).to_string(), b))
                })
                .collect(),
            chiral_graph: ChiralGraphDocument {
                vertices: v.clone(),
                edges: (0..v.len())
                    .flat_map(|from| (0..v.len()).map(move |to| (from, to)))
                    .filter(|&(from, to)| a[(to, from)] > 0)
                    .map(|(from, to)| (v[from].clone(), v[to].clone(), a[(to, from)] as u32))
                    .collect(),
                id_vertex: v[self.chiral_graph.id_vertex].clone(),
                fundamental: self.ring.name(self.fundamental).to_string(),
            },
            ambi_embed: self.ambi_embed.iter().map(|&i| v[i].clone()).collect(),
            ambi_action: self.ambi_action.as_ref().map(|ms| {
                ms.iter()
                    .map(|m| (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect())
                    .collect()
            }),
        }
    }
}

/// `Z = bᵀ b`.
pub fn modular_invariant_z(spec: &InclusionSpec) -> Result<IMatrix> {
    let n = spec.ring.len();
    let z = IMatrix::from_fn(n, n, |a, c| {
        spec.branching.iter().map(|row| row[a] as i64 * row[c] as i64).sum()
    });
    let id = spec.ring.identity();
    if z[(id, id)] != 1 {
        return Err(Error::spec("branching", format!("Z[0][0] = {} != 1", z[(id, id)])));
    }
    Ok(z)
}

/// Outcome of checking that Z commutes with S and T.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZReport {
    pub s_commutator: f64,
    pub t_commutator: f64,
    /// Entry of the larger commutator where the deviation peaks, as label names.
    pub witness: Option<(String, String)>,
    pub nonnegative: bool,
    pub passed: bool,
}

impl fmt::Display for ZReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "‖ZS−SZ‖∞ = {:.3e}, ‖ZT−TZ‖∞ = {:.3e}",
            self.s_commutator, self.t_commutator
        )?;
        if let Some((a, b)) = &self.witness {
            write!(f, ", worst entry ({a}, {b})")?;
        }
        Ok(())
    }
}

/// Verifies `ZS = SZ`, `ZT = TZ` and non-negativity of Z.
pub fn validate_z(z: &IMatrix, md: &ModularData) -> ZReport {
    let n = md.len();
    let nonzero: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|a| (0..n).filter(|&c| z[(a, c)] != 0).map(|c| (c, z[(a, c)] as f64)).collect())
        .collect();
    let commutator = |m: &DMatrix<Complex64>| {
        let mut worst = (0.0, 0, 0);
        for a in 0..n {
            for b in 0..n {
                let zm: Complex64 = nonzero[a].iter().map(|&(c, v)| m[(c, b)] * v).sum();
                let mz: Complex64 = nonzero[b].iter().map(|&(c, v)| m[(a, c)] * v).sum();
                let d = (zm - mz).norm();
                if d > worst.0 {
                    worst = (d, a, b);
                }
            }
        }
        worst
    };
    let (s_dev, sa, sb) = commutator(&md.s);
    let (t_dev, ta, tb) = commutator(&md.t);
    let nonnegative = z.iter().all(|&x| x >= 0);
    let passed = s_dev < MATRIX && t_dev < MATRIX && nonnegative;
    let (wa, wb) = if t_dev >= s_dev { (ta, tb) } else { (sa, sb) };
    ZReport {
        s_commutator: s_dev,
        t_commutator: t_dev,
        witness: (!passed).then(|| (md.ring.name(wa).to_string(), md.ring.name(wb).to_string())),
        nonnegative,
        passed,
    }
}

/// Both sides of `[[Y_M^0]]·[[Y_N]] = (Σ_{ρ∈deg} d_ρ Z_{ρ0})·[[Y_M^+]]²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiralIndexReport {
    pub ambichiral_index: f64,
    pub chiral_index: f64,
    pub subsystem_index: f64,
    pub degenerate_weight: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub passed: bool,
}

/// Checks the global-index identity relating the color-zero ambichiral and
/// chiral systems to the subsystem `sub` (which must be resolved).
pub fn chiral_global_index_check(
    spec: &InclusionSpec,
    z: &IMatrix,
    sub: &Subsystem,
    chiral: &ChiralData,
) -> ChiralIndexReport {
    let ring = &spec.ring;
    let id = ring.identity();
    let ambichiral_index: f64 = (0..spec.n_ambichiral())
        .filter(|&t| spec.grade(t) == 0)
        .map(|t| spec.ambichiral.dim(t).powi(2))
        .sum();
    let chiral_index = chiral.color_zero_index();
    let subsystem_index = crate::fusion::global_index(ring, &sub.members);
    let degenerate_weight: f64 = sub.deg().iter().map(|&r| ring.dim(r) * z[(r, id)] as f64).sum();
    let lhs = ambichiral_index * subsystem_index;
    let rhs = degenerate_weight * chiral_index * chiral_index;
    ChiralIndexReport {
        ambichiral_index,
        chiral_index,
        subsystem_index,
        degenerate_weight,
        lhs,
        rhs,
        passed: close(lhs, rhs, CERTIFICATE),
    }
}
