use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::FusionRing;
use crate::tolerance::{close, IDENTITY};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantCheck {
    pub invariant: &'static str,
    pub passed: bool,
    /// First counterexample found, with the offending label indices.
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RingReport {
    pub checks: Vec<InvariantCheck>,
}

impl RingReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &InvariantCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, invariant: &str) -> Option<&InvariantCheck> {
        self.checks.iter().find(|c| c.invariant == invariant)
    }
}

impl fmt::Display for RingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "FAIL" };
            write!(f, "{status} {}", c.invariant)?;
            if let Some(w) = &c.witness {
                write!(f, ": {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn check(invariant: &'static str, witness: Option<String>) -> InvariantCheck {
    InvariantCheck {
        invariant,
        passed: witness.is_none(),
        witness,
    }
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
}

/// Checks every fusion-ring axiom and reports the first witness of each failure.
pub fn verify_ring(ring: &FusionRing) -> RingReport {
    let n = ring.len();
    let id = ring.identity();
    let name = |i: usize| ring.name(i).to_string();
    let mut checks = Vec::new();

    checks.push(check(
        "identity",
        triples(n)
            .find(|&(_, m, v)| {
                let delta = (m == v) as u32;
                ring.coeff(id, m, v) != delta || ring.coeff(m, id, v) != delta
            })
            .map(|(_, m, v)| format!("N[id][{}][{}] or N[{}][id][{}]", name(m), name(v), name(m), name(v))),
    ));

    checks.push(check(
        "duality",
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .find(|&(a, b)| ring.coeff(a, b, id) != (b == ring.conj(a)) as u32)
            .map(|(a, b)| {
                format!("N[{}][{}][id] = {}", name(a), name(b), ring.coeff(a, b, id))
            }),
    ));

    checks.push(check(
        "commutativity",
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .find(|&(a, b)| ring.product(a, b) != ring.product(b, a))
            .map(|(a, b)| format!("N[{}][{}] != N[{}][{}]", name(a), name(b), name(b), name(a))),
    ));

    checks.push(check(
        "conjugation",
        ring.entries()
            .find(|&(a, b, c, _)| {
                ring.coeff(a, b, c) != ring.coeff(ring.conj(a), ring.conj(b), ring.conj(c))
            })
            .map(|(a, b, c, _)| format!("N[{}][{}][{}] differs from its conjugate", name(a), name(b), name(c))),
    ));

    checks.push(check("associativity", associativity_witness(ring)));

    let dims = ring.dims();
    let dim_witness = (0..n)
        .find(|&a| dims[a].is_nan() || dims[a] <= 0.0 || !close(dims[a], dims[ring.conj(a)], IDENTITY))
        .map(|a| format!("d[{}] = {} not positive or not conjugation invariant", name(a), dims[a]))
        .or_else(|| {
            (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .find(|&(a, b)| {
                    let rhs: f64 = ring.product(a, b).iter().map(|t| t.mult as f64 * dims[t.label]).sum();
                    !close(dims[a] * dims[b], rhs, IDENTITY)
                })
                .map(|(a, b)| format!("d[{}]·d[{}] != Σ_ν N d_ν", name(a), name(b)))
        })
        .or_else(|| (!close(dims[id], 1.0, IDENTITY)).then(|| "d[id] != 1".to_string()));
    checks.push(check("dimensions", dim_witness));

    let modulus = ring.modulus();
    checks.push(check(
        "color",
        ring.entries()
            .find(|&(a, b, c, _)| (ring.color(a) + ring.color(b)) % modulus != ring.color(c) % modulus)
            .map(|(a, b, c, _)| format!("N[{}][{}][{}] > 0 breaks color additivity", name(a), name(b), name(c))),
    ));

    RingReport { checks }
}

/// `(λμ)ν = λ(μν)` as sparse vectors over the fusion basis.
fn associativity_witness(ring: &FusionRing) -> Option<String> {
    let n = ring.len();
    (0..n)
        .into_par_iter()
        .find_map_first(|a| {
            let mut left = vec![0u64; n];
            let mut right = vec![0u64; n];
            for b in 0..n {
                for c in 0..n {
                    for s in ring.product(a, b) {
                        for t in ring.product(s.label, c) {
                            left[t.label] += (s.mult * t.mult) as u64;
                        }
                    }
                    for s in ring.product(b, c) {
                        for t in ring.product(a, s.label) {
                            right[t.label] += (s.mult * t.mult) as u64;
                        }
                    }
                    let bad = (0..n).find(|&d| left[d] != right[d]);
                    left.iter_mut().for_each(|x| *x = 0);
                    right.iter_mut().for_each(|x| *x = 0);
                    if let Some(d) = bad {
                        return Some(format!(
                            "({}·{})·{} and {}·({}·{}) differ at {}",
                            ring.name(a), ring.name(b), ring.name(c),
                            ring.name(a), ring.name(b), ring.name(c),
                            ring.name(d)
                        ));
                    }
                }
            }
            None
        })
}
