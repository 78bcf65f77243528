use nalgebra::DMatrix;
use serde::Serialize;

use super::rational::{Rref, Q};
use super::{IMatrix, InclusionSpec};
use crate::error::{Error, Result};
use crate::tolerance::{close, IDENTITY};

const SEARCH_LIMIT: usize = 1_000_000;

/// Module action of the ring and of the ambichiral system on chiral vertices.
///
/// `M_λ[w][v] = ⟨w, v α_λ⟩`, so the column of `M_λ` at the identity vertex is
/// the decomposition of `α_λ`.
#[derive(Debug, Clone, Serialize)]
pub struct ChiralData {
    #[serde(skip)]
    pub m: Vec<Option<IMatrix>>,
    #[serde(skip)]
    pub t: Vec<IMatrix>,
    pub chiral_dims: Vec<f64>,
    pub vertex_colors: Vec<u32>,
    pub id_vertex: usize,
}

impl ChiralData {
    pub fn n_vertices(&self) -> usize {
        self.chiral_dims.len()
    }

    /// `M_λ`; panics if `λ` was outside the computed scope.
    pub fn m(&self, label: usize) -> &IMatrix {
        self.m[label].as_ref().expect("label outside chiral scope")
    }

    /// Decomposition of `α_λ` over chiral vertices.
    pub fn alpha(&self, label: usize) -> Vec<i64> {
        self.m(label).column(self.id_vertex).iter().copied().collect()
    }

    pub fn color_zero_vertices(&self) -> Vec<usize> {
        (0..self.n_vertices()).filter(|&v| self.vertex_colors[v] == 0).collect()
    }

    /// `Σ chiral_dims²` over color-zero vertices.
    pub fn color_zero_index(&self) -> f64 {
        self.color_zero_vertices().iter().map(|&v| self.chiral_dims[v].powi(2)).sum()
    }
}

fn dense_perron(m: &DMatrix<f64>, base: usize) -> Vec<f64> {
    let n = m.nrows();
    let shifted = m + m.transpose() + DMatrix::identity(n, n);
    let mut v = nalgebra::DVector::from_element(n, 1.0);
    for _ in 0..100_000 {
        let next = &shifted * &v;
        let norm = next.amax();
        let next = next / norm;
        let done = (&next - &v).amax() < 1e-15;
        v = next;
        if done {
            break;
        }
    }
    let b = v[base];
    v.iter().map(|x| x / b).collect()
}

/// Computes `M_λ` for every label reachable from the identity by fusing with
/// the fundamental label and its conjugate, then verifies the module property
/// `M_λ M_μ = Σ_ν N_{λμ}^ν M_ν`, `M_λ̄ = M_λᵀ` and Perron consistency.
///
/// With `scope = Some(labels)`, only those matrices are retained.
pub fn chiral_multiplicities(spec: &InclusionSpec, scope: Option<&[usize]>) -> Result<ChiralData> {
    let ring = &spec.ring;
    let n = ring.len();
    let nv = spec.chiral_graph.len();
    let f = spec.fundamental;
    let fb = ring.conj(f);
    let adj = &spec.chiral_graph.adjacency;
    let id_v = spec.chiral_graph.id_vertex;

    let mut m: Vec<Option<IMatrix>> = vec![None; n];
    m[ring.identity()] = Some(IMatrix::identity(nv, nv));
    m[f] = Some(adj.clone());
    m[fb] = Some(adj.transpose());
    let mut progress = true;
    while progress {
        progress = false;
        for mu in 0..n {
            if m[mu].is_none() {
                continue;
            }
            for g in [f, fb] {
                let terms = ring.product(g, mu);
                let unknown: Vec<_> = terms.iter().filter(|t| m[t.label].is_none()).collect();
                if unknown.len() != 1 {
                    continue;
                }
                let new = unknown[0];
                let mut rest = m[g].as_ref().unwrap() * m[mu].as_ref().unwrap();
                for t in terms.iter().filter(|t| t.label != new.label) {
                    rest -= m[t.label].as_ref().unwrap() * t.mult as i64;
                }
                let k = new.mult as i64;
                if let Some(bad) = rest.iter().find(|&&x| x < 0 || x % k != 0) {
                    return Err(Error::NotAModule(format!(
                        "M_{} would contain {}/{} (from {}·{})",
                        ring.name(new.label),
                        bad,
                        k,
                        ring.name(g),
                        ring.name(mu)
                    )));
                }
                m[new.label] = Some(rest / k);
                progress = true;
            }
        }
    }
    if let Some(l) = (0..n).find(|&l| m[l].is_none()) {
        return Err(Error::NotAModule(format!(
            "label {} is not reached from the fundamental",
            ring.name(l)
        )));
    }

    let m_all: Vec<&IMatrix> = m.iter().map(|x| x.as_ref().unwrap()).collect();
    for a in 0..n {
        if m_all[ring.conj(a)] != &m_all[a].transpose() {
            return Err(Error::NotAModule(format!(
                "M of the conjugate of {} is not the transpose",
                ring.name(a)
            )));
        }
        for b in a..n {
            let mut lhs = m_all[a] * m_all[b];
            for t in ring.product(a, b) {
                lhs -= m_all[t.label] * t.mult as i64;
            }
            if lhs.iter().any(|&x| x != 0) {
                return Err(Error::NotAModule(format!(
                    "M_{} M_{} differs from the fused combination",
                    ring.name(a),
                    ring.name(b)
                )));
            }
        }
    }

    let chiral_dims = dense_perron(&adj.map(|x| x as f64), id_v);
    for a in 0..n {
        let md = m_all[a].map(|x| x as f64) * nalgebra::DVector::from_column_slice(&chiral_dims);
        if let Some(v) = (0..nv).find(|&v| !close(md[v], ring.dim(a) * chiral_dims[v], IDENTITY)) {
            return Err(Error::NotAModule(format!(
                "Perron inconsistency for M_{} at vertex {}",
                ring.name(a),
                spec.chiral_graph.vertices[v]
            )));
        }
    }

    let mut vertex_colors = vec![u32::MAX; nv];
    for a in 0..n {
        for v in 0..nv {
            if m_all[a][(v, id_v)] > 0 {
                let c = ring.color(a);
                if vertex_colors[v] == u32::MAX {
                    vertex_colors[v] = c;
                } else if vertex_colors[v] != c {
                    return Err(Error::NotAModule(format!(
                        "vertex {} occurs in labels of different colors",
                        spec.chiral_graph.vertices[v]
                    )));
                }
            }
        }
    }
    if let Some(v) = vertex_colors.iter().position(|&c| c == u32::MAX) {
        return Err(Error::NotAModule(format!(
            "vertex {} occurs in no α_λ",
            spec.chiral_graph.vertices[v]
        )));
    }

    if let Some(scope) = scope {
        for (l, slot) in m.iter_mut().enumerate() {
            if !scope.contains(&l) {
                *slot = None;
            }
        }
    }
    Ok(ChiralData { m, t: Vec::new(), chiral_dims, vertex_colors, id_vertex: id_v })
}

/// Checks `T_0 = 1`, commutation with every computed `M_λ`, the ambichiral
/// fusion relations, Perron consistency and the embedding columns.
fn check_action(spec: &InclusionSpec, chiral: &ChiralData, t: &[IMatrix]) -> Result<()> {
    let amb = &spec.ambichiral;
    let nv = chiral.n_vertices();
    let err = |msg: String| Err(Error::AmbichiralAction(msg));
    if t.len() != amb.len() {
        return err(format!("{} matrices for {} ambichiral labels", t.len(), amb.len()));
    }
    if t[0] != IMatrix::identity(nv, nv) {
        return err("T_0 is not the identity".into());
    }
    for (l, tl) in t.iter().enumerate() {
        if tl.iter().any(|&x| x < 0) {
            return err(format!("T_{} has a negative entry", amb.name(l)));
        }
        for (lam, m) in chiral.m.iter().enumerate() {
            if let Some(m) = m {
                if tl * m != m * tl {
                    return err(format!(
                        "T_{} does not commute with M_{}",
                        amb.name(l),
                        spec.ring.name(lam)
                    ));
                }
            }
        }
        for (mm, tm) in t.iter().enumerate() {
            let mut rhs = IMatrix::zeros(nv, nv);
            for term in amb.product(l, mm) {
                rhs += &t[term.label] * term.mult as i64;
            }
            if tl * tm != rhs {
                return err(format!("T_{} T_{} breaks the fusion rules", amb.name(l), amb.name(mm)));
            }
        }
        for v in 0..nv {
            let lhs: f64 = (0..nv).map(|w| tl[(v, w)] as f64 * chiral.chiral_dims[w]).sum();
            if !close(lhs, amb.dim(l) * chiral.chiral_dims[v], IDENTITY) {
                return err(format!("T_{} is not Perron consistent", amb.name(l)));
            }
        }
        for (mm, &e) in spec.ambi_embed.iter().enumerate() {
            let expect: Vec<i64> = (0..nv)
                .map(|v| {
                    amb.product(l, mm)
                        .iter()
                        .filter(|term| spec.ambi_embed[term.label] == v)
                        .map(|term| term.mult as i64)
                        .sum()
                })
                .collect();
            if tl.column(e).iter().copied().collect::<Vec<_>>() != expect {
                return err(format!(
                    "T_{} column at the embedding of {} disagrees with the ambichiral fusion",
                    amb.name(l),
                    amb.name(mm)
                ));
            }
        }
    }
    Ok(())
}

/// Enumerates the non-negative integer matrices compatible with the linear
/// constraints for one ambichiral label.
fn candidates_for(
    spec: &InclusionSpec,
    chiral: &ChiralData,
    tau: usize,
    bound: i64,
) -> Result<Vec<IMatrix>> {
    let amb = &spec.ambichiral;
    let nv = chiral.n_vertices();
    let image = |mm: usize| -> Vec<i64> {
        let mut y = vec![0; nv];
        for term in amb.product(tau, mm) {
            y[spec.ambi_embed[term.label]] += term.mult as i64;
        }
        y
    };
    let mut xs: Vec<Vec<i64>> = Vec::new();
    let mut ys: Vec<Vec<i64>> = Vec::new();
    let matrices: Vec<&IMatrix> = chiral.m.iter().flatten().collect();
    for (mm, &e) in spec.ambi_embed.iter().enumerate() {
        let y0 = image(mm);
        for m in &matrices {
            xs.push(m.column(e).iter().copied().collect());
            ys.push((0..nv).map(|v| (0..nv).map(|w| m[(v, w)] * y0[w]).sum()).collect());
        }
    }
    let rows: Vec<Vec<Q>> = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| x.iter().chain(y).map(|&v| Q::from_integer(v as i128)).collect())
        .collect();
    let rref = Rref::new(rows, nv);
    if let Some(r) = rref.inconsistent().first() {
        return Err(Error::AmbichiralAction(format!(
            "no solution for T_{} (row {})",
            amb.name(tau),
            spec.chiral_graph.vertices[*r]
        )));
    }
    let free = rref.free_columns();
    let dims = &chiral.chiral_dims;
    let mut row_options: Vec<Vec<Vec<i64>>> = Vec::with_capacity(nv);
    for r in 0..nv {
        let combos = (bound as usize + 1).checked_pow(free.len() as u32).unwrap_or(usize::MAX);
        if combos > SEARCH_LIMIT {
            return Err(Error::AmbichiralAction(format!(
                "search space for T_{} too large ({} free entries per row)",
                amb.name(tau),
                free.len()
            )));
        }
        let mut options = Vec::new();
        for code in 0..combos {
            let mut c = code;
            let assignment: Vec<(usize, Q)> = free
                .iter()
                .map(|&col| {
                    let v = (c % (bound as usize + 1)) as i128;
                    c /= bound as usize + 1;
                    (col, Q::from_integer(v))
                })
                .collect();
            let x = rref.solve(r, &assignment);
            if x.iter().any(|q| !q.is_integer() || *q.numer() < 0) {
                continue;
            }
            let row: Vec<i64> = x.iter().map(|q| *q.numer() as i64).collect();
            let weighted: f64 = row.iter().zip(dims).map(|(&a, d)| a as f64 * d).sum();
            if close(weighted, amb.dim(tau) * dims[r], IDENTITY) {
                options.push(row);
            }
        }
        if options.is_empty() {
            return Err(Error::AmbichiralAction(format!(
                "no non-negative integer row {} for T_{}",
                spec.chiral_graph.vertices[r],
                amb.name(tau)
            )));
        }
        row_options.push(options);
    }
    let total = row_options.iter().try_fold(1usize, |acc, o| acc.checked_mul(o.len()));
    if total.is_none_or(|t| t > SEARCH_LIMIT) {
        return Err(Error::AmbichiralAction(format!(
            "too many row combinations for T_{}",
            amb.name(tau)
        )));
    }
    let mf = chiral.m(spec.fundamental);
    let mut out = Vec::new();
    for code in 0..total.unwrap() {
        let mut c = code;
        let t = IMatrix::from_fn(nv, nv, |_, _| 0);
        let mut t = t;
        for (r, options) in row_options.iter().enumerate() {
            let row = &options[c % options.len()];
            c /= options.len();
            for (w, &v) in row.iter().enumerate() {
                t[(r, w)] = v;
            }
        }
        if &t * mf == mf * &t && &t * mf.transpose() == mf.transpose() * &t {
            out.push(t);
        }
    }
    Ok(out)
}

/// Returns the ambichiral action matrices `T_ℓ`: validated if the spec supplies
/// them, otherwise derived from the constraints and required to be unique.
///
/// Entry bound for the search is `⌈max d_τ · max chiral_dim / min chiral_dim⌉`.
pub fn derive_ambichiral_action(spec: &InclusionSpec, chiral: &ChiralData) -> Result<Vec<IMatrix>> {
    if let Some(given) = &spec.ambi_action {
        check_action(spec, chiral, given)?;
        return Ok(given.clone());
    }
    let amb = &spec.ambichiral;
    let dmax = chiral.chiral_dims.iter().cloned().fold(0.0, f64::max);
    let dmin = chiral.chiral_dims.iter().cloned().fold(f64::INFINITY, f64::min);
    let tmax = amb.dims().iter().cloned().fold(0.0, f64::max);
    let bound = (tmax * dmax / dmin - 1e-9).ceil() as i64;

    let mut per_tau = Vec::with_capacity(amb.len());
    for tau in 0..amb.len() {
        let c = candidates_for(spec, chiral, tau, bound)?;
        if c.is_empty() {
            return Err(Error::AmbichiralAction(format!(
                "no matrix for T_{} commutes with the chiral graph",
                amb.name(tau)
            )));
        }
        per_tau.push(c);
    }
    let total: usize = per_tau.iter().map(Vec::len).product();
    if total > SEARCH_LIMIT {
        return Err(Error::AmbichiralAction("too many candidate families".into()));
    }
    let mut solutions: Vec<Vec<IMatrix>> = Vec::new();
    for code in 0..total {
        let mut c = code;
        let family: Vec<IMatrix> = per_tau
            .iter()
            .map(|opts| {
                let t = opts[c % opts.len()].clone();
                c /= opts.len();
                t
            })
            .collect();
        if check_action(spec, chiral, &family).is_ok() {
            solutions.push(family);
        }
    }
    match solutions.len() {
        0 => Err(Error::AmbichiralAction("inconsistent spec: no action satisfies all constraints".into())),
        1 => Ok(solutions.pop().unwrap()),
        k => Err(Error::AmbichiralAction(format!(
            "{k} candidate actions: {}",
            solutions
                .iter()
                .map(|fam| format!("{:?}", fam.iter().map(|t| t.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>()))
                .collect::<Vec<_>>()
                .join("; ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inclusion::load_inclusion;

    fn setup(name: &str) -> (InclusionSpec, ChiralData) {
        let spec = load_inclusion(name).unwrap();
        let mut chiral = chiral_multiplicities(&spec, None).unwrap();
        chiral.t = derive_ambichiral_action(&spec, &chiral).unwrap();
        (spec, chiral)
    }

    #[test]
    fn e6_identity_and_alpha_10() {
        let (spec, chiral) = setup("e6");
        assert_eq!(chiral.m(0), &IMatrix::identity(6, 6));
        let a10 = chiral.alpha(10);
        assert_eq!(a10.iter().sum::<i64>(), 1);
        assert_eq!(a10[spec.chiral_graph.index_of("10").unwrap()], 1);
    }

    #[test]
    fn e6_tau1_times_alpha5() {
        let (spec, chiral) = setup("e6");
        let lhs = &chiral.t[1] * chiral.m(5);
        let rhs = chiral.m(2) * 2;
        let id = spec.chiral_graph.id_vertex;
        assert_eq!(lhs.column(id), rhs.column(id));
    }

    #[test]
    fn e12_action_is_z3_permutations() {
        let (_, chiral) = setup("e12");
        for t in &chiral.t {
            for r in 0..t.nrows() {
                assert_eq!(t.row(r).iter().sum::<i64>(), 1);
                assert_eq!(t.column(r).iter().sum::<i64>(), 1);
            }
        }
        assert_eq!(&chiral.t[1] * &chiral.t[1], chiral.t[2]);
        assert_eq!(&chiral.t[1] * &chiral.t[2], chiral.t[0]);
    }

    #[test]
    fn e8cc_color_zero_vertices() {
        let (spec, chiral) = setup("e8cc");
        let names: Vec<&str> = chiral
            .color_zero_vertices()
            .iter()
            .map(|&v| spec.chiral_graph.vertices[v].as_str())
            .collect();
        assert_eq!(names, ["(0,0)", "(5,4)", "(5,1)", "(3,0)^(1)"]);
    }

    #[test]
    fn supplied_action_is_validated() {
        let (mut spec, chiral) = setup("e6");
        spec.ambi_action = Some(chiral.t.clone());
        assert_eq!(derive_ambichiral_action(&spec, &chiral).unwrap(), chiral.t);
        let mut bad = chiral.t.clone();
        bad[1] = IMatrix::identity(6, 6);
        spec.ambi_action = Some(bad);
        assert!(derive_ambichiral_action(&spec, &chiral).is_err());
    }

    #[test]
    fn broken_graph_is_not_a_module() {
        let mut spec = load_inclusion("e6").unwrap();
        spec.chiral_graph.adjacency[(3, 2)] = 2;
        assert!(matches!(chiral_multiplicities(&spec, None), Err(Error::NotAModule(_))));
    }

    #[test]
    fn scope_restricts_matrices() {
        let spec = load_inclusion("e6").unwrap();
        let chiral = chiral_multiplicities(&spec, Some(&[0, 2, 4])).unwrap();
        assert!(chiral.m[1].is_none());
        assert!(chiral.m[4].is_some());
    }
}
