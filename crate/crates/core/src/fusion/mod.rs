//! Commutative fusion rings and the SU(2)_k / SU(3)_k Verlinde rings.

mod perron;
mod su2;
mod su3;
mod verify;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use su2::{build_su2_ring, SU2_MAX_LEVEL};
pub use su3::{build_su3_ring, su3_weights, SU3_MAX_LEVEL};
pub use verify::{verify_ring, InvariantCheck, RingReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algebra {
    Su2,
    Su3,
    /// A ring given only by its structure constants, e.g. an ambichiral system.
    Abstract,
}

impl Algebra {
    pub fn as_str(self) -> &'static str {
        match self {
            Algebra::Su2 => "su2",
            Algebra::Su3 => "su3",
            Algebra::Abstract => "abstract",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Algebra::Su2 => "SU(2)",
            Algebra::Su3 => "SU(3)",
            Algebra::Abstract => "abstract",
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Label {
    pub index: usize,
    pub name: String,
    pub weight: Vec<u32>,
    pub color: u32,
}

/// One nonzero entry of a fusion product row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term {
    pub label: usize,
    pub mult: u32,
}

/// A commutative fusion ring with exact structure constants.
///
/// The tensor is stored sparsely: for every ordered pair `(λ, μ)` the nonzero
/// coefficients `N[λ][μ][ν]` are kept sorted by `ν`.
#[derive(Debug, Clone)]
pub struct FusionRing {
    algebra: Algebra,
    level: Option<u32>,
    modulus: u32,
    labels: Vec<Label>,
    identity: usize,
    conj: Vec<usize>,
    dims: Vec<f64>,
    fundamental: Option<usize>,
    offsets: Vec<usize>,
    terms: Vec<Term>,
}

impl FusionRing {
    /// Assembles a ring from sparse entries `(λ, μ, ν, count)`.
    ///
    /// Conjugates are read off from `N[λ][μ][id] > 0` and dimensions from the
    /// Perron-Frobenius vector. No axiom is checked here; use [`verify_ring`].
    pub fn from_entries(
        algebra: Algebra,
        level: Option<u32>,
        modulus: u32,
        labels: Vec<Label>,
        entries: impl IntoIterator<Item = (usize, usize, usize, u32)>,
        fundamental: Option<usize>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidRing("no labels".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.index != i {
                return Err(Error::InvalidRing(format!(
                    "label `{}` has index {} at position {i}",
                    l.name, l.index
                )));
            }
        }
        let mut rows: Vec<Vec<Term>> = vec![Vec::new(); n * n];
        for (a, b, c, m) in entries {
            if a >= n || b >= n || c >= n {
                return Err(Error::InvalidRing(format!(
                    "entry ({a},{b},{c}) out of range for {n} labels"
                )));
            }
            if m == 0 {
                continue;
            }
            let row = &mut rows[a * n + b];
            match row.binary_search_by_key(&c, |t| t.label) {
                Ok(pos) => row[pos].mult += m,
                Err(pos) => row.insert(pos, Term { label: c, mult: m }),
            }
        }
        let mut ring = Self::from_rows(algebra, level, modulus, labels, rows, fundamental);
        ring.identity = ring.find_identity()?;
        ring.conj = ring.find_conjugates()?;
        ring.dims = perron::perron_dims(&ring);
        Ok(ring)
    }

    fn from_rows(
        algebra: Algebra,
        level: Option<u32>,
        modulus: u32,
        labels: Vec<Label>,
        rows: Vec<Vec<Term>>,
        fundamental: Option<usize>,
    ) -> Self {
        let n = labels.len();
        let mut offsets = Vec::with_capacity(n * n + 1);
        let mut terms = Vec::with_capacity(rows.iter().map(Vec::len).sum());
        offsets.push(0);
        for row in rows {
            terms.extend(row);
            offsets.push(terms.len());
        }
        FusionRing {
            algebra,
            level,
            modulus: modulus.max(1),
            labels,
            identity: 0,
            conj: (0..n).collect(),
            dims: vec![1.0; n],
            fundamental,
            offsets,
            terms,
        }
    }

    fn find_identity(&self) -> Result<usize> {
        (0..self.len())
            .find(|&e| {
                (0..self.len()).all(|m| {
                    let row = self.product(e, m);
                    row.len() == 1 && row[0].label == m && row[0].mult == 1
                })
            })
            .ok_or_else(|| Error::InvalidRing("no identity label".into()))
    }

    fn find_conjugates(&self) -> Result<Vec<usize>> {
        (0..self.len())
            .map(|a| {
                (0..self.len())
                    .find(|&b| self.coeff(a, b, self.identity) > 0)
                    .ok_or_else(|| {
                        Error::InvalidRing(format!(
                            "label `{}` has no conjugate",
                            self.labels[a].name
                        ))
                    })
            })
            .collect()
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn level(&self) -> Option<u32> {
        self.level
    }

    /// Modulus of the grading carried by [`Label::color`].
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.labels[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.labels[i].name
    }

    pub fn color(&self, i: usize) -> u32 {
        self.labels[i].color
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn conj(&self, i: usize) -> usize {
        self.conj[i]
    }

    pub fn dims(&self) -> &[f64] {
        &self.dims
    }

    pub fn dim(&self, i: usize) -> f64 {
        self.dims[i]
    }

    /// The generating label used for dimensions and module recursions.
    pub fn fundamental(&self) -> Option<usize> {
        self.fundamental
    }

    /// Always true: every ring built by this crate is commutative.
    pub fn commutative(&self) -> bool {
        true
    }

    /// Finds a label by name; whitespace and a leading `j=` are ignored.
    pub fn index_of(&self, name: &str) -> Result<usize> {
        let key: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        let key = key
            .strip_prefix("j=")
            .or_else(|| key.strip_prefix("(p,q)="))
            .unwrap_or(&key);
        self.labels
            .iter()
            .position(|l| l.name == key)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    /// Label index of an alcove weight.
    pub fn index_of_weight(&self, weight: &[u32]) -> Option<usize> {
        self.labels.iter().position(|l| l.weight == weight)
    }

    /// Nonzero entries of the product `λ μ`, sorted by label.
    pub fn product(&self, a: usize, b: usize) -> &[Term] {
        let n = self.len();
        &self.terms[self.offsets[a * n + b]..self.offsets[a * n + b + 1]]
    }

    pub fn coeff(&self, a: usize, b: usize, c: usize) -> u32 {
        let row = self.product(a, b);
        row.binary_search_by_key(&c, |t| t.label)
            .map(|p| row[p].mult)
            .unwrap_or(0)
    }

    /// Dense row `N[λ][μ][·]`.
    pub fn fuse(&self, a: usize, b: usize) -> Vec<u32> {
        let mut out = vec![0; self.len()];
        for t in self.product(a, b) {
            out[t.label] = t.mult;
        }
        out
    }

    /// All nonzero entries `(λ, μ, ν, N)` in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, u32)> + '_ {
        let n = self.len();
        (0..n * n).flat_map(move |ab| {
            self.terms[self.offsets[ab]..self.offsets[ab + 1]]
                .iter()
                .map(move |t| (ab / n, ab % n, t.label, t.mult))
        })
    }

    /// Returns a copy whose entry `N[λ][μ][ν]` is replaced by `count`; conjugates
    /// and dimensions are carried over unchanged.
    pub fn with_coefficient(&self, a: usize, b: usize, c: usize, count: u32) -> FusionRing {
        let n = self.len();
        let mut rows: Vec<Vec<Term>> = (0..n * n)
            .map(|ab| self.terms[self.offsets[ab]..self.offsets[ab + 1]].to_vec())
            .collect();
        let row = &mut rows[a * n + b];
        match row.binary_search_by_key(&c, |t| t.label) {
            Ok(p) if count == 0 => {
                row.remove(p);
            }
            Ok(p) => row[p].mult = count,
            Err(p) if count > 0 => row.insert(p, Term { label: c, mult: count }),
            Err(_) => {}
        }
        let mut ring = Self::from_rows(
            self.algebra,
            self.level,
            self.modulus,
            self.labels.clone(),
            rows,
            self.fundamental,
        );
        ring.identity = self.identity;
        ring.conj = self.conj.clone();
        ring.dims = self.dims.clone();
        ring
    }

    /// Smallest fusion-closed subset containing `seeds` and the identity.
    pub fn closure(&self, seeds: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.len()];
        inside[self.identity] = true;
        for &s in seeds {
            inside[s] = true;
        }
        loop {
            let current: Vec<usize> = (0..self.len()).filter(|&i| inside[i]).collect();
            let mut grew = false;
            for &a in &current {
                if !inside[self.conj(a)] {
                    inside[self.conj(a)] = true;
                    grew = true;
                }
                for &b in &current {
                    for t in self.product(a, b) {
                        if !inside[t.label] {
                            inside[t.label] = true;
                            grew = true;
                        }
                    }
                }
            }
            if !grew {
                return (0..self.len()).filter(|&i| inside[i]).collect();
            }
        }
    }

    pub fn to_document(&self) -> RingDocument {
        RingDocument {
            schema: crate::SCHEMA.to_string(),
            algebra: self.algebra,
            level: self.level,
            labels: self
                .labels
                .iter()
                .map(|l| LabelDocument {
                    name: l.name.clone(),
                    weight: l.weight.clone(),
                    color: l.color,
                })
                .collect(),
            fusion: self.entries().map(|(a, b, c, m)| [a, b, c, m as usize]).collect(),
        }
    }

    /// Rebuilds a ring from its serialized form. SU(2) and SU(3) documents
    /// take their fundamental label from the canonical weight `(1)` or `(1,0)`.
    pub fn from_document(doc: &RingDocument) -> Result<FusionRing> {
        let labels: Vec<Label> = doc
            .labels
            .iter()
            .enumerate()
            .map(|(index, l)| Label {
                index,
                name: l.name.clone(),
                weight: l.weight.clone(),
                color: l.color,
            })
            .collect();
        let modulus = match doc.algebra {
            Algebra::Su2 => 2,
            Algebra::Su3 => 3,
            Algebra::Abstract => labels.iter().map(|l| l.color + 1).max().unwrap_or(1),
        };
        let fundamental = match doc.algebra {
            Algebra::Su2 => labels.iter().position(|l| l.weight == [1]),
            Algebra::Su3 => labels.iter().position(|l| l.weight == [1, 0]),
            Algebra::Abstract => None,
        };
        let entries = doc
            .fusion
            .iter()
            .map(|e| (e[0], e[1], e[2], e[3] as u32))
            .collect::<Vec<_>>();
        FusionRing::from_entries(doc.algebra, doc.level, modulus, labels, entries, fundamental)
    }
}

/// Sum of squared dimensions over `subset`.
pub fn global_index(ring: &FusionRing, subset: &[usize]) -> f64 {
    subset.iter().map(|&i| ring.dim(i) * ring.dim(i)).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelDocument {
    pub name: String,
    pub weight: Vec<u32>,
    pub color: u32,
}

/// Serialized ring: sparse quadruples `[λ, μ, ν, count]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingDocument {
    pub schema: String,
    pub algebra: Algebra,
    pub level: Option<u32>,
    pub labels: Vec<LabelDocument>,
    pub fusion: Vec<[usize; 4]>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_of_accepts_decorated_names() {
        let r = build_su3_ring(3).unwrap();
        assert_eq!(r.index_of("(2, 1)").unwrap(), r.index_of("(2,1)").unwrap());
        assert_eq!(r.index_of("(p,q)=(2,1)").unwrap(), 4);
        let s = build_su2_ring(4).unwrap();
        assert_eq!(s.index_of("j=3").unwrap(), 3);
        assert!(s.index_of("7").is_err());
    }

    #[test]
    fn document_round_trip_preserves_ring() {
        let r = build_su3_ring(4).unwrap();
        let doc = r.to_document();
        let json = serde_json::to_string(&doc).unwrap();
        let back = FusionRing::from_document(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.entries().collect::<Vec<_>>(), r.entries().collect::<Vec<_>>());
        assert_eq!(back.fundamental(), r.fundamental());
        for (x, y) in back.dims().iter().zip(r.dims()) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn closure_of_even_spin_is_color_zero() {
        let r = build_su2_ring(10).unwrap();
        assert_eq!(r.closure(&[2]), vec![0, 2, 4, 6, 8, 10]);
    }

    #[test]
    fn with_coefficient_changes_only_one_entry() {
        let r = build_su2_ring(6).unwrap();
        let c = r.with_coefficient(2, 3, 3, 4);
        let diff: Vec<_> = (0..7)
            .flat_map(|a| (0..7).flat_map(move |b| (0..7).map(move |x| (a, b, x))))
            .filter(|&(a, b, x)| r.coeff(a, b, x) != c.coeff(a, b, x))
            .collect();
        assert_eq!(diff, vec![(2, 3, 3)]);
    }

    #[test]
    fn abstract_ring_from_entries() {
        let labels = (0..2)
            .map(|i| Label { index: i, name: i.to_string(), weight: vec![], color: 0 })
            .collect();
        let r = FusionRing::from_entries(
            Algebra::Abstract,
            None,
            1,
            labels,
            vec![(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1), (1, 1, 1, 1)],
            None,
        )
        .unwrap();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((r.dim(1) - golden).abs() < 1e-12);
        assert_eq!(r.conj(1), 1);
    }
}
