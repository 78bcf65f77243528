//! Hom-space dimensions between η-extended sectors.

use num_rational::Ratio;

use crate::inclusion::{IMatrix, InclusionSpec};
use crate::modular::{ModularData, Subsystem};

fn in_set(set: &[usize], x: usize) -> bool {
    set.contains(&x)
}

/// `Σ_{ρ∈deg} N_{ρλ}^μ Z_{ρ0}`: pairing of same-sign extensions of `α_λ` and `α_μ`.
pub fn pair_same_sign(md: &ModularData, sub: &Subsystem, z: &IMatrix, lambda: usize, mu: usize) -> u64 {
    let ring = &md.ring;
    let id = ring.identity();
    sub.deg()
        .iter()
        .map(|&r| ring.coeff(r, lambda, mu) as u64 * z[(r, id)] as u64)
        .sum()
}

/// Mixed-sign pairing: the same-sign value when both labels lie in the
/// relative permutant, zero otherwise.
pub fn pair_mixed_sign(md: &ModularData, sub: &Subsystem, z: &IMatrix, lambda: usize, mu: usize) -> u64 {
    if in_set(sub.per(), lambda) && in_set(sub.per(), mu) {
        pair_same_sign(md, sub, z, lambda, mu)
    } else {
        0
    }
}

/// Pairing of the full-system products `(λ, μ)` and `(λ', μ')`:
/// `Σ_{ν,ξ∈per} Σ_{ρ∈deg} N_{λ̄'λ}^ν N_{μ'μ̄}^ξ N_{νξ}^ρ Z_{ρ0}`.
pub fn pair_full(
    md: &ModularData,
    sub: &Subsystem,
    z: &IMatrix,
    (lambda, mu): (usize, usize),
    (lambda2, mu2): (usize, usize),
) -> u64 {
    let ring = &md.ring;
    let id = ring.identity();
    let per = sub.per();
    let mut total = 0u64;
    for a in ring.product(ring.conj(lambda2), lambda).iter().filter(|t| in_set(per, t.label)) {
        for b in ring.product(mu2, ring.conj(mu)).iter().filter(|t| in_set(per, t.label)) {
            for &r in sub.deg() {
                let n = ring.coeff(a.label, b.label, r) as u64;
                total += a.mult as u64 * b.mult as u64 * n * z[(r, id)] as u64;
            }
        }
    }
    total
}

/// `b[τ][λ]` when `λ` lies in the relative permutant, zero otherwise.
pub fn pair_ambi_alpha(sub: &Subsystem, spec: &InclusionSpec, tau: usize, lambda: usize) -> u64 {
    if in_set(sub.per(), lambda) {
        spec.branching[tau][lambda] as u64
    } else {
        0
    }
}

/// Pairing of chiral products `(λ, τ)` and `(μ, τ')`:
/// `Σ_{τ''} Σ_{ρ∈per} N_{τ̄τ'}^{τ''} N_{λμ̄}^ρ b[τ''][ρ]`.
pub fn pair_chiral(
    sub: &Subsystem,
    spec: &InclusionSpec,
    (lambda, tau): (usize, usize),
    (mu, tau2): (usize, usize),
) -> u64 {
    let ring = &spec.ring;
    let amb = &spec.ambichiral;
    let per = sub.per();
    let mut total = 0u64;
    for t in amb.product(amb.conj(tau), tau2) {
        for r in ring.product(lambda, ring.conj(mu)).iter().filter(|r| in_set(per, r.label)) {
            total += t.mult as u64 * r.mult as u64 * spec.branching[t.label][r.label] as u64;
        }
    }
    total
}

/// `(Σ_{ρ∈deg} d_ρ Z_{ρ0}) / Σ_{ρ∈deg} d_ρ²`, the share of the quantum double
/// reached by products of color-zero extensions with ambichirals.
pub fn upsilon_index_ratio(md: &ModularData, sub: &Subsystem, z: &IMatrix) -> f64 {
    let ring = &md.ring;
    let id = ring.identity();
    let num: f64 = sub.deg().iter().map(|&r| ring.dim(r) * z[(r, id)] as f64).sum();
    let den: f64 = sub.deg().iter().map(|&r| ring.dim(r).powi(2)).sum();
    num / den
}

/// Nearest fraction with denominator at most `max_den`, if within `tol`.
pub fn as_rational(x: f64, max_den: i64, tol: f64) -> Option<Ratio<i64>> {
    (1..=max_den).find_map(|d| {
        let n = (x * d as f64).round();
        ((x - n / d as f64).abs() < tol).then(|| Ratio::new(n as i64, d))
    })
}
