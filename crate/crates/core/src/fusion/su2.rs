use super::{Algebra, FusionRing, Label};
use crate::error::{Error, Result};

pub const SU2_MAX_LEVEL: u32 = 64;

/// The SU(2)_k Verlinde ring on spins `j = 0..=k` (twice the usual spin).
///
/// `N[a][b][c] = 1` iff `|a−b| ≤ c ≤ min(a+b, 2k−a−b)` and `c ≡ a+b (mod 2)`.
pub fn build_su2_ring(k: u32) -> Result<FusionRing> {
    if !(1..=SU2_MAX_LEVEL).contains(&k) {
        return Err(Error::LevelOutOfRange {
            algebra: "su2",
            level: k,
            max: SU2_MAX_LEVEL,
        });
    }
    let k = k as usize;
    let labels = (0..=k)
        .map(|j| Label {
            index: j,
            name: j.to_string(),
            weight: vec![j as u32],
            color: (j % 2) as u32,
        })
        .collect();
    let mut entries = Vec::new();
    for a in 0..=k {
        for b in 0..=k {
            let hi = (a + b).min(2 * k - a - b);
            let mut c = a.abs_diff(b);
            while c <= hi {
                entries.push((a, b, c, 1));
                c += 2;
            }
        }
    }
    FusionRing::from_entries(Algebra::Su2, Some(k as u32), 2, labels, entries, Some(1.min(k)))
}
