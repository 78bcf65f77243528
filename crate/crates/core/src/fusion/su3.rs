use rayon::prelude::*;

use super::{Algebra, FusionRing, Label};
use crate::error::{Error, Result};

/// `(a, b, c, N_ab^c)` with `a <= b`.
type Entry = (usize, usize, usize, u32);

pub const SU3_MAX_LEVEL: u32 = 32;

/// Weights of the SU(3) irreducible with Young rows `(p, q, 0)`, listed with
/// multiplicity via Gelfand-Tsetlin patterns, in row-length coordinates.
pub fn su3_weights(p: u32, q: u32) -> Vec<[i32; 3]> {
    let (p, q) = (p as i32, q as i32);
    let mut out = Vec::new();
    for m12 in q..=p {
        for m22 in 0..=q {
            for m11 in m22..=m12 {
                out.push([m11, m12 + m22 - m11, p + q - m12 - m22]);
            }
        }
    }
    out
}

/// Brings `y` into the open fundamental alcove of the level-`K` shifted affine
/// Weyl group. Returns the accumulated sign, or `None` on a wall.
fn fold(mut y: [i32; 3], big_k: i32) -> Option<(i32, [i32; 3])> {
    let mut sign = 1;
    loop {
        for _ in 0..3 {
            for j in 0..2 {
                if y[j] < y[j + 1] {
                    y.swap(j, j + 1);
                    sign = -sign;
                } else if y[j] == y[j + 1] {
                    return None;
                }
            }
        }
        let spread = y[0] - y[2];
        if spread < big_k {
            return Some((sign, y));
        }
        if spread == big_k {
            return None;
        }
        let (a, c) = (y[0], y[2]);
        y[0] = c + big_k;
        y[2] = a - big_k;
        sign = -sign;
    }
}

/// The SU(3)_k Verlinde ring on Young-row labels `(p, q)`, `0 ≤ q ≤ p ≤ k`, in
/// lexicographic order, computed by Kac-Walton folding of tensor products.
pub fn build_su3_ring(k: u32) -> Result<FusionRing> {
    if !(1..=SU3_MAX_LEVEL).contains(&k) {
        return Err(Error::LevelOutOfRange {
            algebra: "su3",
            level: k,
            max: SU3_MAX_LEVEL,
        });
    }
    let weights: Vec<(u32, u32)> = (0..=k).flat_map(|p| (0..=p).map(move |q| (p, q))).collect();
    let n = weights.len();
    let index = |p: i32, q: i32| -> usize {
        let (p, q) = (p as usize, q as usize);
        p * (p + 1) / 2 + q
    };
    let labels = weights
        .iter()
        .enumerate()
        .map(|(i, &(p, q))| Label {
            index: i,
            name: format!("({p},{q})"),
            weight: vec![p, q],
            color: (p + q) % 3,
        })
        .collect();
    let big_k = k as i32 + 3;
    let weight_lists: Vec<Vec<[i32; 3]>> =
        weights.iter().map(|&(p, q)| su3_weights(p, q)).collect();

    let rows: Vec<Result<Vec<Entry>>> = (0..n)
        .into_par_iter()
        .map(|a| {
            let (p, q) = (weights[a].0 as i32, weights[a].1 as i32);
            let mut out = Vec::new();
            let mut acc = vec![0i64; n];
            for b in a..n {
                acc.iter_mut().for_each(|x| *x = 0);
                for x in &weight_lists[b] {
                    if let Some((sign, y)) = fold([p + x[0] + 2, q + x[1] + 1, x[2]], big_k) {
                        acc[index(y[0] - y[2] - 2, y[1] - y[2] - 1)] += sign as i64;
                    }
                }
                for (c, &m) in acc.iter().enumerate() {
                    if m < 0 {
                        return Err(Error::InvalidRing(format!(
                            "negative folded multiplicity at ({a},{b},{c})"
                        )));
                    }
                    if m > 0 {
                        out.push((a, b, c, m as u32));
                        if a != b {
                            out.push((b, a, c, m as u32));
                        }
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let mut entries = Vec::new();
    for r in rows {
        entries.extend(r?);
    }
    FusionRing::from_entries(Algebra::Su3, Some(k), 3, labels, entries, Some(1))
}
