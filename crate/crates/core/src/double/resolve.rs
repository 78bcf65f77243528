use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use super::{Certificate, Irreducible, SectorSystem, Share};
use crate::error::{Error, Result};
use crate::tolerance::{Tolerances, IDENTITY};

/// Maximum number of search nodes before the factorization gives up.
pub const NODE_BUDGET: usize = 20_000_000;

#[derive(Clone)]
struct Candidate {
    xs: Vec<(usize, u32)>,
    fresh: u32,
}

struct Search<'a> {
    gram: &'a [Vec<u32>],
    dims: &'a [f64],
    /// Sparse columns: `(row, multiplicity)` in row order.
    cols: Vec<Vec<(usize, u32)>>,
    /// `twin[c]`: column `c` equals column `c - 1` on all processed rows.
    twin: Vec<bool>,
    known: Vec<Option<f64>>,
    nodes: usize,
    budget: usize,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::AmbiguousFactorization(format!(
                "search budget of {} nodes exhausted",
                self.budget
            )));
        }
        Ok(())
    }

    /// Every way of writing row `k` over existing columns plus fresh ones.
    fn candidates(&mut self, k: usize) -> Result<Vec<Candidate>> {
        let row = &self.gram[k];
        let diag = row[k];
        let mut active = Vec::new();
        for (c, col) in self.cols.iter().enumerate() {
            let hi = col.iter().map(|&(i, v)| row[i] / v).min().unwrap_or(0);
            if hi > 0 {
                active.push((c, hi));
            }
        }
        let targets: Vec<usize> = (0..k).filter(|&i| row[i] > 0).collect();
        let mut last_touch: HashMap<usize, usize> = HashMap::new();
        for (pos, &(c, _)) in active.iter().enumerate() {
            for &(i, _) in &self.cols[c] {
                last_touch.insert(i, pos);
            }
        }
        let mut closes: Vec<Vec<usize>> = vec![Vec::new(); active.len()];
        for &i in &targets {
            match last_touch.get(&i) {
                Some(&pos) => closes[pos].push(i),
                None => return Ok(Vec::new()),
            }
        }
        let mut out = Vec::new();
        let mut partial = vec![0u32; k];
        let mut xs = vec![0u32; active.len()];
        self.enumerate(k, diag, &active, &closes, 0, 0, 0.0, &mut partial, &mut xs, &mut out)?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate(
        &mut self,
        k: usize,
        diag: u32,
        active: &[(usize, u32)],
        closes: &[Vec<usize>],
        pos: usize,
        sumsq: u32,
        known_dim: f64,
        partial: &mut [u32],
        xs: &mut [u32],
        out: &mut Vec<Candidate>,
    ) -> Result<()> {
        self.tick()?;
        let row = &self.gram[k];
        if pos == active.len() {
            let fresh = diag - sumsq;
            let gen = self.dims[k];
            let tol = IDENTITY * gen.max(1.0);
            let unknown = active.iter().zip(xs.iter()).any(|(&(c, _), &x)| x > 0 && self.known[c].is_none());
            if fresh == 0 && !unknown && (known_dim - gen).abs() > tol {
                return Ok(());
            }
            if fresh > 0 && !unknown && known_dim > gen - tol {
                return Ok(());
            }
            out.push(Candidate {
                xs: active.iter().zip(xs.iter()).filter(|(_, &x)| x > 0).map(|(&(c, _), &x)| (c, x)).collect(),
                fresh,
            });
            return Ok(());
        }
        let (c, hi) = active[pos];
        let mut hi = self.cols[c].iter().map(|&(i, v)| (row[i] - partial[i]) / v).min().unwrap_or(0).min(hi);
        if self.twin[c] && pos > 0 && active[pos - 1].0 == c - 1 {
            hi = hi.min(xs[pos - 1]);
        }
        for x in (0..=hi).rev() {
            let sq = sumsq + x * x;
            if sq > diag {
                continue;
            }
            let d = known_dim + self.known[c].map_or(0.0, |d| x as f64 * d);
            if d > self.dims[k] * (1.0 + IDENTITY) + IDENTITY {
                continue;
            }
            for &(i, v) in &self.cols[c] {
                partial[i] += x * v;
            }
            let complete = closes[pos].iter().all(|&i| partial[i] == row[i]);
            xs[pos] = x;
            if complete {
                self.enumerate(k, diag, active, closes, pos + 1, sq, d, partial, xs, out)?;
            }
            for &(i, v) in &self.cols[c] {
                partial[i] -= x * v;
            }
        }
        xs[pos] = 0;
        Ok(())
    }

    fn apply(&mut self, k: usize, cand: &Candidate) -> Vec<bool> {
        let saved = self.twin.clone();
        let mut value = vec![0u32; self.cols.len()];
        for &(c, x) in &cand.xs {
            self.cols[c].push((k, x));
            value[c] = x;
        }
        for c in 1..self.cols.len() {
            self.twin[c] = self.twin[c] && value[c] == value[c - 1];
        }
        let first = self.cols.len();
        let known = (cand.fresh == 1)
            .then(|| {
                let mut rest = 0.0;
                for &(c, x) in &cand.xs {
                    rest += x as f64 * self.known[c]?;
                }
                Some(self.dims[k] - rest)
            })
            .flatten();
        for f in 0..cand.fresh {
            self.cols.push(vec![(k, 1)]);
            self.twin.push(f > 0);
            self.known.push(known);
        }
        debug_assert_eq!(self.cols.len(), first + cand.fresh as usize);
        saved
    }

    fn undo(&mut self, cand: &Candidate, saved: Vec<bool>) {
        let keep = saved.len();
        self.cols.truncate(keep);
        self.known.truncate(keep);
        for &(c, _) in &cand.xs {
            self.cols[c].pop();
        }
        self.twin = saved;
    }

    fn rows(&self, g: usize) -> Vec<Vec<u32>> {
        let mut b = vec![vec![0u32; self.cols.len()]; g];
        for (c, col) in self.cols.iter().enumerate() {
            for &(i, x) in col {
                b[i][c] = x;
            }
        }
        b
    }
}

struct Frame {
    candidates: Vec<Candidate>,
    next: usize,
    applied: Option<(usize, Vec<bool>)>,
}

/// Finds up to `limit` inequivalent factorizations `B Bᵀ = G`.
fn factorizations(gram: &[Vec<u32>], dims: &[f64], limit: usize, budget: usize) -> Result<Vec<Vec<Vec<u32>>>> {
    let g = gram.len();
    let mut search = Search { gram, dims, cols: Vec::new(), twin: Vec::new(), known: Vec::new(), nodes: 0, budget };
    let mut found = Vec::new();
    if g == 0 {
        return Ok(vec![Vec::new()]);
    }
    let mut stack = vec![Frame { candidates: search.candidates(0)?, next: 0, applied: None }];
    while !stack.is_empty() {
        let k = stack.len() - 1;
        let frame = stack.last_mut().expect("non-empty");
        if let Some((idx, saved)) = frame.applied.take() {
            let cand = frame.candidates[idx].clone();
            search.undo(&cand, saved);
        }
        let frame = stack.last_mut().expect("non-empty");
        if frame.next == frame.candidates.len() {
            stack.pop();
            continue;
        }
        let idx = frame.next;
        frame.next += 1;
        let cand = frame.candidates[idx].clone();
        let saved = search.apply(k, &cand);
        stack.last_mut().expect("non-empty").applied = Some((idx, saved));
        if k + 1 == g {
            found.push(search.rows(g));
            if found.len() >= limit {
                break;
            }
        } else {
            let next = search.candidates(k + 1)?;
            stack.push(Frame { candidates: next, next: 0, applied: None });
        }
    }
    Ok(found)
}

fn check_gram(sys: &SectorSystem) -> Result<()> {
    let g = &sys.gram;
    let n = sys.len();
    if g.len() != n || g.iter().any(|r| r.len() != n) {
        return Err(Error::InconsistentGram(format!("Gram matrix is not {n}x{n}")));
    }
    for i in 0..n {
        if g[i][i] == 0 {
            return Err(Error::InconsistentGram(format!("zero diagonal at `{}`", sys.generators[i].name)));
        }
        for j in 0..i {
            if g[i][j] != g[j][i] {
                return Err(Error::InconsistentGram(format!(
                    "asymmetric at `{}`, `{}`",
                    sys.generators[i].name, sys.generators[j].name
                )));
            }
        }
    }
    Ok(())
}

fn describe(sys: &SectorSystem, b: &[Vec<u32>]) -> String {
    let rows: Vec<String> = sys
        .generators
        .iter()
        .zip(b)
        .filter(|(_, r)| r.iter().filter(|&&x| x > 0).count() > 1 || r.iter().any(|&x| x > 1))
        .map(|(g, r)| format!("{}={:?}", g.name, r.iter().enumerate().filter(|(_, &x)| x > 0).collect::<Vec<_>>()))
        .collect();
    format!("{} columns [{}]", b.first().map_or(0, |r| r.len()), rows.join(", "))
}

/// Dimensions fixed exactly by a generator whose decomposition is a uniform
/// multiple of the twin group containing the column.
fn exact_shares(b: &[Vec<u32>]) -> Vec<Option<Share>> {
    let m = b.first().map_or(0, |r| r.len());
    let column = |c: usize| b.iter().map(|r| r[c]).collect::<Vec<_>>();
    let mut groups: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
    for c in 0..m {
        groups.entry(column(c)).or_default().push(c);
    }
    (0..m)
        .map(|c| {
            let group = &groups[&column(c)];
            b.iter().enumerate().find_map(|(i, row)| {
                let a = row[c];
                let pure = a > 0
                    && row.iter().enumerate().all(|(j, &x)| if group.contains(&j) { x == a } else { x == 0 });
                pure.then(|| Share { generator: i, numer: 1, denom: (a as usize * group.len()) as i64 })
            })
        })
        .collect()
}

fn min_norm_dims(b: &[Vec<u32>], gen_dims: &[f64]) -> Result<Vec<f64>> {
    let (g, m) = (b.len(), b.first().map_or(0, |r| r.len()));
    let mat = DMatrix::from_fn(g, m, |i, c| b[i][c] as f64);
    let rhs = DVector::from_column_slice(gen_dims);
    let svd = mat.clone().svd(true, true);
    let x = svd.solve(&rhs, 1e-12).map_err(|e| Error::Certificate(e.to_string()))?;
    let residual = (&mat * &x - &rhs).amax();
    if residual > IDENTITY * rhs.amax().max(1.0) {
        return Err(Error::Certificate(format!("dimension conservation fails by {residual:e}")));
    }
    Ok(x.iter().copied().collect())
}

/// [`resolve_sectors_with`] at default tolerances.
pub fn resolve_sectors(sys: SectorSystem, target: f64) -> Result<SectorSystem> {
    resolve_sectors_with(sys, target, &Tolerances::default())
}

/// Factors the Gram matrix as `B Bᵀ`, assigns irreducible dimensions and
/// certifies `Σ dim² = target`.
pub fn resolve_sectors_with(mut sys: SectorSystem, target: f64, tol: &Tolerances) -> Result<SectorSystem> {
    check_gram(&sys)?;
    let gen_dims: Vec<f64> = sys.generators.iter().map(|g| g.dim).collect();
    let mut solutions = factorizations(&sys.gram, &gen_dims, 2, NODE_BUDGET)?;
    let b = match solutions.len() {
        0 => return Err(Error::InconsistentGram("no non-negative integer factorization exists".into())),
        1 => solutions.pop().expect("one solution"),
        _ => {
            return Err(Error::AmbiguousFactorization(format!(
                "inequivalent factorizations: {} | {}",
                describe(&sys, &solutions[0]),
                describe(&sys, &solutions[1])
            )))
        }
    };
    let m = b.first().map_or(0, |r| r.len());
    let shares = exact_shares(&b);
    let dims: Vec<f64> = if shares.iter().all(Option::is_some) {
        shares.iter().map(|s| s.map_or(0.0, |s| gen_dims[s.generator] * s.numer as f64 / s.denom as f64)).collect()
    } else {
        let numeric = min_norm_dims(&b, &gen_dims)?;
        numeric
            .iter()
            .zip(&shares)
            .map(|(&x, s)| s.map_or(x, |s| gen_dims[s.generator] * s.numer as f64 / s.denom as f64))
            .collect()
    };
    if let Some(c) = dims.iter().position(|&d| d.is_nan() || d <= 0.0) {
        return Err(Error::Certificate(format!("irreducible {c} receives non-positive dimension {}", dims[c])));
    }

    let first: Vec<usize> = (0..m).map(|c| (0..b.len()).find(|&i| b[i][c] > 0).expect("column used")).collect();
    let mut siblings: HashMap<usize, usize> = HashMap::new();
    for &i in &first {
        *siblings.entry(i).or_default() += 1;
    }
    let mut seen: HashMap<usize, usize> = HashMap::new();
    sys.irreducibles = (0..m)
        .map(|c| {
            let i = first[c];
            let base = &sys.generators[i].name;
            let name = if siblings[&i] > 1 {
                let n = seen.entry(i).or_default();
                *n += 1;
                format!("{base}_{n}")
            } else {
                base.clone()
            };
            Irreducible {
                name,
                dim: dims[c],
                share: shares[c],
                provenance: (0..b.len()).filter(|&i| b[i][c] > 0).map(|i| (i, b[i][c])).collect(),
            }
        })
        .collect();
    sys.b = b;

    let achieved: f64 = dims.iter().map(|d| d * d).sum();
    let relative_gap = (achieved - target).abs() / target.abs().max(f64::MIN_POSITIVE);
    let passed = relative_gap < tol.certificate;
    sys.certificate = Some(Certificate { achieved, target, relative_gap, tolerance: tol.certificate, passed });
    if !passed {
        return Err(Error::Certificate(format!(
            "Σ dim² = {achieved} against target {target}, relative gap {relative_gap:e}"
        )));
    }
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::double::{Mode, ProductSector, SectorKind};

    fn system(gram: Vec<Vec<u32>>, dims: Vec<f64>) -> SectorSystem {
        let generators = dims
            .iter()
            .enumerate()
            .map(|(i, &dim)| ProductSector {
                name: format!("g{i}"),
                kind: SectorKind::ChiralPair { lambda: i, tau: 0 },
                dim,
            })
            .collect();
        SectorSystem { mode: Mode::Chiral, generators, gram, b: vec![], irreducibles: vec![], certificate: None }
    }

    #[test]
    fn single_generator() {
        let s = resolve_sectors(system(vec![vec![1]], vec![1.0]), 1.0).unwrap();
        assert_eq!(s.b, vec![vec![1]]);
        assert_eq!(s.irreducibles[0].name, "g0");
    }

    #[test]
    fn identification_and_split() {
        let gram = vec![vec![1, 1, 0], vec![1, 1, 0], vec![0, 0, 2]];
        let s = resolve_sectors(system(gram, vec![1.0, 1.0, 2.0]), 1.0 + 2.0).unwrap();
        assert_eq!(s.irreducibles.len(), 3);
        assert_eq!(s.irreducibles[1].name, "g2_1");
        assert_eq!(s.irreducibles[2].name, "g2_2");
        assert_eq!(s.irreducibles[2].share.unwrap().ratio(), Ratio::new(1, 2));
        assert!(s.certificate.unwrap().passed);
    }

    #[test]
    fn impossible_gram() {
        let gram = vec![vec![1, 1], vec![1, 2]];
        assert!(matches!(
            resolve_sectors(system(vec![vec![1, 2], vec![2, 1]], vec![1.0, 1.0]), 1.0),
            Err(Error::InconsistentGram(_))
        ));
        let s = resolve_sectors(system(gram, vec![1.0, 2.0]), 2.0).unwrap();
        assert_eq!(s.b, vec![vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn asymmetric_gram() {
        let r = resolve_sectors(system(vec![vec![1, 0], vec![1, 1]], vec![1.0, 1.0]), 2.0);
        assert!(matches!(r, Err(Error::InconsistentGram(m)) if m.contains("asymmetric")));
    }

    #[test]
    fn certificate_gap_is_reported() {
        let r = resolve_sectors(system(vec![vec![1]], vec![2.0]), 5.0);
        assert!(matches!(r, Err(Error::Certificate(m)) if m.contains("gap")));
    }

    #[test]
    fn dims_rule_out_wrong_sharing() {
        // g2 pairs once with g0 and g1, but dimensions forbid g2 ⊃ g0 ⊕ g1 with a third part.
        let gram = vec![vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 2]];
        let s = resolve_sectors(system(gram, vec![1.0, 1.5, 2.5]), 3.25).unwrap();
        assert_eq!(s.b[2], vec![1, 1]);
    }

    use num_rational::Ratio;
}
