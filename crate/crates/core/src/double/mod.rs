//! Product sectors, their Gram matrices and the irreducible double system.

mod pairing;
mod resolve;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

pub use pairing::{
    as_rational, pair_ambi_alpha, pair_chiral, pair_full, pair_mixed_sign, pair_same_sign,
    upsilon_index_ratio,
};
pub use resolve::{resolve_sectors, resolve_sectors_with, NODE_BUDGET};

use crate::error::{Error, Result};
use crate::fusion::{Algebra, FusionRing};
use crate::inclusion::{IMatrix, InclusionSpec};
use crate::modular::{is_nondegenerate, is_nondegenerate_subsystem, ModularData, Subsystem};
use crate::tolerance::IDENTITY;

/// Upper bound on generators for full-system runs; the Gram matrix is dense.
pub const MAX_FULL_GENERATORS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SectorKind {
    FullPair { lambda: usize, mu: usize },
    ChiralPair { lambda: usize, tau: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductSector {
    pub name: String,
    #[serde(flatten)]
    pub kind: SectorKind,
    pub dim: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Chiral,
    Full,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Chiral => "chiral",
            Mode::Full => "full",
        }
    }
}

/// Dimension of a split irreducible as an exact fraction of a generator's.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Share {
    pub generator: usize,
    pub numer: i64,
    pub denom: i64,
}

impl Share {
    pub fn ratio(&self) -> Ratio<i64> {
        Ratio::new(self.numer, self.denom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Irreducible {
    pub name: String,
    pub dim: f64,
    pub share: Option<Share>,
    /// `(generator, multiplicity)` for every generator containing this sector.
    pub provenance: Vec<(usize, u32)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub achieved: f64,
    pub target: f64,
    pub relative_gap: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorSystem {
    pub mode: Mode,
    pub generators: Vec<ProductSector>,
    pub gram: Vec<Vec<u32>>,
    /// Rows are generators, columns irreducibles; empty until resolved.
    pub b: Vec<Vec<u32>>,
    pub irreducibles: Vec<Irreducible>,
    pub certificate: Option<Certificate>,
}

impl SectorSystem {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_resolved(&self) -> bool {
        self.certificate.is_some()
    }

    /// Irreducible columns of generator `i` with their multiplicities.
    pub fn constituents(&self, i: usize) -> Vec<(usize, u32)> {
        self.b[i].iter().enumerate().filter(|(_, &x)| x > 0).map(|(c, &x)| (c, x)).collect()
    }

    pub fn splits(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.b.get(i).is_some_and(|r| r.iter().filter(|&&x| x > 0).count() > 1)).collect()
    }

    /// Maximal groups of generators with pairwise pairing one and unit
    /// diagonal, i.e. generators identified to the same irreducible.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let d = self.gram[i][i];
            let orbit: Vec<usize> =
                (i..n).filter(|&j| !seen[j] && self.gram[j][j] == d && self.gram[i][j] == d).collect();
            for &j in &orbit {
                seen[j] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn to_document(&self) -> SystemDocument<'_> {
        SystemDocument { schema: crate::SCHEMA, system: self }
    }
}

#[derive(Debug, Serialize)]
pub struct SystemDocument<'a> {
    pub schema: &'static str,
    #[serde(flatten)]
    pub system: &'a SectorSystem,
}

fn label_with_tau(ring: &FusionRing, lambda: usize, tau_name: &str) -> String {
    let name = ring.name(lambda);
    match ring.algebra() {
        Algebra::Su3 => format!("{};{tau_name})", name.trim_end_matches(')')),
        _ => format!("({name},{tau_name})"),
    }
}

/// Chiral generating family `(λ, τ)` with `color(λ) + grade(τ) ≡ 0`, ordered
/// by `τ` then `λ`. Labels range over `sub.members` when products with
/// ambichirals exhaust the double, over the whole ring otherwise.
pub fn chiral_generators(md: &ModularData, sub: &Subsystem, z: &IMatrix, spec: &InclusionSpec) -> Vec<ProductSector> {
    let ring = &spec.ring;
    let amb = &spec.ambichiral;
    let ratio = upsilon_index_ratio(md, sub, z);
    let labels: Vec<usize> =
        if (ratio - 1.0).abs() < IDENTITY { sub.members.clone() } else { (0..ring.len()).collect() };
    let modulus = ring.modulus();
    let mut out = Vec::new();
    for tau in 0..amb.len() {
        for &lambda in &labels {
            if (ring.color(lambda) + spec.grade(tau)).is_multiple_of(modulus) {
                out.push(ProductSector {
                    name: label_with_tau(ring, lambda, amb.name(tau)),
                    kind: SectorKind::ChiralPair { lambda, tau },
                    dim: ring.dim(lambda) * amb.dim(tau),
                });
            }
        }
    }
    out
}

/// All `(λ, μ)` over the ring, row-major.
pub fn full_generators(ring: &FusionRing) -> Result<Vec<ProductSector>> {
    let n = ring.len();
    if n * n > MAX_FULL_GENERATORS {
        return Err(Error::Precondition(format!(
            "full generating family has {} products, above the limit {MAX_FULL_GENERATORS}",
            n * n
        )));
    }
    Ok((0..n)
        .flat_map(|lambda| (0..n).map(move |mu| (lambda, mu)))
        .map(|(lambda, mu)| ProductSector {
            name: format!("({}|{})", ring.name(lambda), ring.name(mu)),
            kind: SectorKind::FullPair { lambda, mu },
            dim: ring.dim(lambda) * ring.dim(mu),
        })
        .collect())
}

/// Fills the Gram matrix of `generators` from the pairing formulas.
pub fn build_gram(
    md: &ModularData,
    sub: &Subsystem,
    z: &IMatrix,
    spec: &InclusionSpec,
    generators: Vec<ProductSector>,
) -> Result<SectorSystem> {
    let mode = match generators.first().map(|g| g.kind) {
        Some(SectorKind::FullPair { .. }) | None => Mode::Full,
        Some(SectorKind::ChiralPair { .. }) => Mode::Chiral,
    };
    for g in &generators {
        let ok = matches!(
            (mode, g.kind),
            (Mode::Full, SectorKind::FullPair { .. }) | (Mode::Chiral, SectorKind::ChiralPair { .. })
        );
        if !ok {
            return Err(Error::InvalidSpec {
                field: "generators".into(),
                message: format!("mixed product kinds: `{}` is not a {} product", g.name, mode.as_str()),
            });
        }
        let valid = match g.kind {
            SectorKind::FullPair { lambda, mu } => lambda < md.len() && mu < md.len(),
            SectorKind::ChiralPair { lambda, tau } => lambda < spec.ring.len() && tau < spec.n_ambichiral(),
        };
        if !valid || g.dim.is_nan() || g.dim <= 0.0 {
            return Err(Error::spec("generators", format!("invalid product sector `{}`", g.name)));
        }
    }
    let pair = |a: SectorKind, b: SectorKind| -> u32 {
        match (a, b) {
            (SectorKind::FullPair { lambda, mu }, SectorKind::FullPair { lambda: l2, mu: m2 }) => {
                pair_full(md, sub, z, (lambda, mu), (l2, m2)) as u32
            }
            (SectorKind::ChiralPair { lambda, tau }, SectorKind::ChiralPair { lambda: l2, tau: t2 }) => {
                pair_chiral(sub, spec, (lambda, tau), (l2, t2)) as u32
            }
            _ => unreachable!(),
        }
    };
    let n = generators.len();
    let upper: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|i| (i..n).map(|j| pair(generators[i].kind, generators[j].kind)).collect())
        .collect();
    let mut gram = vec![vec![0u32; n]; n];
    for (i, row) in upper.iter().enumerate() {
        for (k, &v) in row.iter().enumerate() {
            gram[i][i + k] = v;
            gram[i + k][i] = v;
        }
    }
    Ok(SectorSystem { mode, generators, gram, b: Vec::new(), irreducibles: Vec::new(), certificate: None })
}

/// Multiplicity table of the canonical endomorphism in the non-degenerate case.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplicityTable {
    pub mode: Mode,
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    pub entries: Vec<Vec<u32>>,
    /// `Σ mult · d_row · d_col`.
    pub dimension: f64,
}

/// `Z` over `(λ, μ)` in full mode and `bᵀ` over `(λ, τ)` in chiral mode.
pub fn canonical_multiplicities(spec: &InclusionSpec, md: &ModularData, mode: Mode) -> Result<MultiplicityTable> {
    if !is_nondegenerate(md) {
        return Err(Error::Precondition("formula valid only in non-degenerate case".into()));
    }
    let ring = &spec.ring;
    let names = |r: &FusionRing| r.labels().iter().map(|l| l.name.clone()).collect::<Vec<_>>();
    let (columns, entries, col_dims): (Vec<String>, Vec<Vec<u32>>, Vec<f64>) = match mode {
        Mode::Full => {
            let z = crate::inclusion::modular_invariant_z(spec)?;
            (
                names(ring),
                (0..ring.len()).map(|l| (0..ring.len()).map(|m| z[(l, m)] as u32).collect()).collect(),
                ring.dims().to_vec(),
            )
        }
        Mode::Chiral => (
            names(&spec.ambichiral),
            (0..ring.len()).map(|l| spec.branching.iter().map(|row| row[l]).collect()).collect(),
            spec.ambichiral.dims().to_vec(),
        ),
    };
    let dimension = entries
        .iter()
        .enumerate()
        .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &x)| (r, c, x)))
        .map(|(r, c, x)| x as f64 * ring.dim(r) * col_dims[c])
        .sum();
    Ok(MultiplicityTable { mode, rows: names(ring), columns, entries, dimension })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductReport {
    pub skipped: Option<String>,
    pub full_sample: usize,
    pub chiral_sample: usize,
    /// First off-diagonal or non-unit entry found, as generator names and value.
    pub witness: Option<(String, String, u64)>,
    pub passed: bool,
}

fn spread(n: usize, k: usize) -> Vec<usize> {
    if n <= k {
        return (0..n).collect();
    }
    (0..k).map(|i| i * (n - 1) / (k - 1)).collect()
}

/// Checks that sampled full and chiral Gram matrices collapse to the identity
/// on a non-degenerate full system; skipped otherwise.
pub fn nondegenerate_product_check(
    md: &ModularData,
    sub: &Subsystem,
    z: &IMatrix,
    spec: &InclusionSpec,
    sample: usize,
) -> ProductReport {
    let ring = &md.ring;
    if sub.members.len() != ring.len() || !is_nondegenerate_subsystem(md, sub) {
        return ProductReport {
            skipped: Some("degenerate: precondition requires the non-degenerate full system".into()),
            full_sample: 0,
            chiral_sample: 0,
            witness: None,
            passed: true,
        };
    }
    let n = ring.len();
    let full: Vec<(usize, usize)> = spread(n * n, sample).into_iter().map(|p| (p / n, p % n)).collect();
    let na = spec.n_ambichiral();
    let chiral: Vec<(usize, usize)> = spread(n * na, sample).into_iter().map(|p| (p / na, p % na)).collect();
    let mut witness = None;
    'full: for (i, &a) in full.iter().enumerate() {
        for (j, &b) in full.iter().enumerate() {
            let v = pair_full(md, sub, z, a, b);
            if v != (i == j) as u64 {
                witness = Some((
                    format!("({}|{})", ring.name(a.0), ring.name(a.1)),
                    format!("({}|{})", ring.name(b.0), ring.name(b.1)),
                    v,
                ));
                break 'full;
            }
        }
    }
    if witness.is_none() {
        'chiral: for (i, &a) in chiral.iter().enumerate() {
            for (j, &b) in chiral.iter().enumerate() {
                let v = pair_chiral(sub, spec, a, b);
                if v != (i == j) as u64 {
                    let amb = &spec.ambichiral;
                    witness = Some((
                        label_with_tau(ring, a.0, amb.name(a.1)),
                        label_with_tau(ring, b.0, amb.name(b.1)),
                        v,
                    ));
                    break 'chiral;
                }
            }
        }
    }
    ProductReport {
        skipped: None,
        full_sample: full.len(),
        chiral_sample: chiral.len(),
        passed: witness.is_none(),
        witness,
    }
}
