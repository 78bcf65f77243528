use super::FusionRing;
use crate::tolerance::PERRON_RESIDUAL;

const MAX_ITERATIONS: usize = 200_000;

/// Perron-Frobenius vector of `I + N_f + N_f̄` (or `I + Σ_λ N_λ` when the ring
/// has no distinguished fundamental), normalized so that `d_id = 1`.
///
/// The shift by the identity and the symmetrization over `f, f̄` push every
/// other eigenvalue strictly inside the Perron radius, so plain power
/// iteration converges even when `N_f` has unimodular eigenvalue multiples.
pub(super) fn perron_dims(ring: &FusionRing) -> Vec<f64> {
    let n = ring.len();
    let generators: Vec<usize> = match ring.fundamental() {
        Some(f) => {
            let fb = ring.conj(f);
            if fb == f {
                vec![f]
            } else {
                vec![f, fb]
            }
        }
        None => (0..n).collect(),
    };
    let apply = |d: &[f64], out: &mut [f64]| {
        for (mu, o) in out.iter_mut().enumerate() {
            let mut s = d[mu];
            for &g in &generators {
                for t in ring.product(g, mu) {
                    s += t.mult as f64 * d[t.label];
                }
            }
            *o = s;
        }
    };

    let mut d = vec![1.0; n];
    let mut next = vec![0.0; n];
    let mut best = f64::INFINITY;
    let mut stale = 0;
    for _ in 0..MAX_ITERATIONS {
        apply(&d, &mut next);
        let norm = next.iter().cloned().fold(0.0, f64::max);
        if norm <= 0.0 || !norm.is_finite() {
            break;
        }
        let scale = d.iter().cloned().fold(0.0, f64::max);
        let theta = norm / scale;
        let residual = next
            .iter()
            .zip(&d)
            .map(|(a, b)| (a - theta * b).abs())
            .fold(0.0, f64::max)
            / norm;
        for (x, y) in d.iter_mut().zip(&next) {
            *x = y / norm;
        }
        if residual < best * 0.999 {
            best = residual;
            stale = 0;
        } else {
            stale += 1;
        }
        if residual < PERRON_RESIDUAL * 1e-3 || (best < PERRON_RESIDUAL && stale > 20) {
            break;
        }
    }
    let id = ring.identity();
    let base = d[id];
    if base > 0.0 {
        for x in &mut d {
            *x /= base;
        }
    }
    let sym: Vec<f64> = (0..n).map(|i| 0.5 * (d[i] + d[ring.conj(i)])).collect();
    sym
}
