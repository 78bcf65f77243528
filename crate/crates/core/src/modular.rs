//! Statistics phases, the monodromy matrix Y, modular S and T, and the
//! degenerate / relative-permutant classification of subsystems.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion::{Algebra, FusionRing};
use crate::tolerance::{self, IDENTITY, MATRIX, ROUNDING};

pub type CMatrix = DMatrix<Complex64>;

/// Conformal weights `h` in canonical label order, as exact fractions.
///
/// SU(2): `h_j = j(j+2) / 4(k+2)`. SU(3) with Dynkin labels `(a, b) = (p−q, q)`:
/// `h = (a² + ab + b² + 3a + 3b) / 3(k+3)`.
pub fn conformal_weights(algebra: Algebra, level: u32) -> Result<Vec<Ratio<i64>>> {
    let k = level as i64;
    match algebra {
        Algebra::Su2 => Ok((0..=k).map(|j| Ratio::new(j * (j + 2), 4 * (k + 2))).collect()),
        Algebra::Su3 => Ok((0..=k)
            .flat_map(|p| (0..=p).map(move |q| (p - q, q)))
            .map(|(a, b)| Ratio::new(a * a + a * b + b * b + 3 * a + 3 * b, 3 * (k + 3)))
            .collect()),
        Algebra::Abstract => Err(Error::Precondition(
            "conformal weights are only defined for su2 and su3".into(),
        )),
    }
}

/// Statistics phases `ω = exp(2πi h)`.
pub fn conformal_phases(algebra: Algebra, level: u32) -> Result<Vec<Complex64>> {
    Ok(conformal_weights(algebra, level)?
        .into_iter()
        .map(|h| {
            let frac = h - h.floor();
            let x = *frac.numer() as f64 / *frac.denom() as f64;
            Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * x)
        })
        .collect())
}

/// Modular data of a braided fusion ring.
#[derive(Debug, Clone)]
pub struct ModularData {
    pub ring: Arc<FusionRing>,
    pub omega: Vec<Complex64>,
    pub y: CMatrix,
    pub z: Complex64,
    /// Central charge, reported in `[0, 8)`.
    pub c: f64,
    pub s: CMatrix,
    pub t: CMatrix,
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Largest entrywise deviation of `a` from `b`, relative to `max(1, ‖b‖_max)`.
fn deviation(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs(&(a - b)) / max_abs(b).max(1.0)
}

/// Monodromy matrix `Y_{λμ} = Σ_ρ (ω_λ ω_μ / ω_ρ) N_{λμ}^ρ d_ρ`.
pub fn monodromy_matrix(ring: &FusionRing, omega: &[Complex64]) -> CMatrix {
    let n = ring.len();
    CMatrix::from_fn(n, n, |a, b| {
        ring.product(a, b)
            .iter()
            .map(|t| omega[a] * omega[b] / omega[t.label] * (t.mult as f64 * ring.dim(t.label)))
            .sum()
    })
}

/// Builds Y, z, c, S and T and verifies the modular identities.
pub fn build_modular(ring: Arc<FusionRing>, omega: Vec<Complex64>) -> Result<ModularData> {
    let n = ring.len();
    if omega.len() != n {
        return Err(Error::Precondition(format!(
            "{} phases for {n} labels",
            omega.len()
        )));
    }
    let y = monodromy_matrix(&ring, &omega);
    let z: Complex64 = (0..n).map(|i| omega[i] * ring.dim(i).powi(2)).sum();
    if z.norm() <= 1e-9 {
        return Err(Error::CentralChargeUndefined(z.norm()));
    }
    let c = (4.0 * z.arg() / std::f64::consts::PI).rem_euclid(8.0);
    let s = y.map(|x| x / z.norm());
    let phase = Complex64::from_polar(1.0, -std::f64::consts::PI * c / 12.0);
    let t = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        omega.iter().map(|w| w * phase),
    ));
    let md = ModularData { ring, omega, y, z, c, s, t };
    md.check_identities()?;
    Ok(md)
}

impl ModularData {
    /// Builds the modular data of the SU(2)_k or SU(3)_k Verlinde ring.
    pub fn for_ring(ring: Arc<FusionRing>) -> Result<ModularData> {
        let level = ring
            .level()
            .ok_or_else(|| Error::Precondition("ring has no level".into()))?;
        let omega = conformal_phases(ring.algebra(), level)?;
        build_modular(ring, omega)
    }

    pub fn len(&self) -> usize {
        self.ring.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ring.is_empty()
    }

    fn omega_matrix(&self) -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.omega))
    }

    /// Deviation of each defining identity, largest entry relative to the
    /// scale of the right-hand side.
    pub fn identity_deviations(&self) -> Vec<(&'static str, f64)> {
        let n = self.len();
        let y = &self.y;
        let sym = deviation(y, &y.transpose());
        let conj = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| (y[(self.ring.conj(a), b)] - y[(a, b)].conj()).norm())
            .fold(0.0, f64::max)
            / max_abs(y).max(1.0);
        let vacuum = (0..n)
            .map(|a| (y[(a, self.ring.identity())] - Complex64::new(self.ring.dim(a), 0.0)).norm())
            .fold(0.0, f64::max);
        let om = self.omega_matrix();
        let lhs = &om * y * &om * y * &om;
        let rhs = y.map(|x| x * self.z);
        let omega_y = deviation(&lhs, &rhs);
        let tstst = deviation(&(&self.t * &self.s * &self.t * &self.s * &self.t), &self.s);
        vec![
            ("Y symmetric", sym),
            ("Y conjugation", conj),
            ("Y vacuum column", vacuum),
            ("ΩYΩYΩ = zY", omega_y),
            ("TSTST = S", tstst),
        ]
    }

    fn check_identities(&self) -> Result<()> {
        for (invariant, dev) in self.identity_deviations() {
            if dev.is_nan() || dev >= IDENTITY {
                return Err(Error::ModularInvariant { invariant, deviation: dev });
            }
        }
        Ok(())
    }

    /// `‖S S† − 1‖_max`.
    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.s)
    }

    /// `|z|²` relative to the global index of the full ring.
    pub fn index_deviation(&self) -> f64 {
        let idx: f64 = self.ring.dims().iter().map(|d| d * d).sum();
        (self.z.norm_sqr() - idx).abs() / idx
    }

    pub fn to_document(&self) -> ModularDocument {
        let pair = |x: &Complex64| [x.re, x.im];
        let rows = |m: &CMatrix| -> Vec<Vec<[f64; 2]>> {
            (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| pair(&m[(i, j)])).collect()).collect()
        };
        ModularDocument {
            schema: crate::SCHEMA,
            algebra: self.ring.algebra(),
            level: self.ring.level(),
            labels: self.ring.labels().iter().map(|l| l.name.clone()).collect(),
            omega: self.omega.iter().map(pair).collect(),
            y: rows(&self.y),
            z: pair(&self.z),
            c: self.c,
            s: rows(&self.s),
            t: rows(&self.t),
        }
    }
}

fn unitarity_deviation(s: &CMatrix) -> f64 {
    let n = s.nrows();
    let prod = s * s.adjoint();
    max_abs(&(prod - CMatrix::identity(n, n)))
}

/// Complex matrices serialize as `[re, im]` pairs.
#[derive(Debug, Clone, Serialize)]
pub struct ModularDocument {
    pub schema: &'static str,
    pub algebra: Algebra,
    pub level: Option<u32>,
    pub labels: Vec<String>,
    pub omega: Vec<[f64; 2]>,
    pub y: Vec<Vec<[f64; 2]>>,
    pub z: [f64; 2],
    pub c: f64,
    pub s: Vec<Vec<[f64; 2]>>,
    pub t: Vec<Vec<[f64; 2]>>,
}

/// True iff `S S† = 1` to [`MATRIX`].
pub fn is_nondegenerate(md: &ModularData) -> bool {
    md.unitarity_deviation() < MATRIX
}

/// Non-degeneracy of the braiding restricted to `sub`: the S-matrix built
/// from `Y` on the members and `z_sub = Σ d² ω` over them must be unitary.
pub fn is_nondegenerate_subsystem(md: &ModularData, sub: &Subsystem) -> bool {
    let m = &sub.members;
    let z: Complex64 = m.iter().map(|&i| md.omega[i] * md.ring.dim(i).powi(2)).sum();
    if z.norm() <= 1e-9 {
        return false;
    }
    let s = CMatrix::from_fn(m.len(), m.len(), |a, b| md.y[(m[a], m[b])] / z.norm());
    unitarity_deviation(&s) < MATRIX
}

/// Verlinde formula `N_{λμ}^ν = Σ_σ S_{λσ} S_{μσ} S*_{νσ} / S_{0σ}`; returns the
/// first triple whose value does not round to the stored coefficient.
pub fn verlinde_mismatch(md: &ModularData) -> Option<(usize, usize, usize, f64)> {
    let n = md.len();
    let id = md.ring.identity();
    let s_re = md.s.map(|x| x.re);
    let s_im = md.s.map(|x| x.im);
    (0..n).into_par_iter().find_map_first(|a| {
        let ratio: Vec<Complex64> = (0..n).map(|sg| md.s[(a, sg)] / md.s[(id, sg)]).collect();
        let scaled = CMatrix::from_fn(n, n, |b, sg| md.s[(b, sg)] * ratio[sg]);
        let re = scaled.map(|x| x.re);
        let im = scaled.map(|x| x.im);
        let real = &re * s_re.transpose() + &im * s_im.transpose();
        for b in 0..n {
            for c in 0..n {
                let x = real[(b, c)];
                let stored = md.ring.coeff(a, b, c) as f64;
                if (x - stored).abs() >= ROUNDING {
                    return Some((a, b, c, x));
                }
            }
        }
        None
    })
}

/// A fusion- and conjugation-closed set of labels, with its degenerate set
/// and relative permutant once computed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Subsystem {
    pub members: Vec<usize>,
    pub deg: Option<Vec<usize>>,
    pub per: Option<Vec<usize>>,
}

impl Subsystem {
    /// Validates closure of `members` and returns the unresolved subsystem.
    pub fn new(ring: &FusionRing, mut members: Vec<usize>) -> Result<Subsystem> {
        members.sort_unstable();
        members.dedup();
        let mut inside = vec![false; ring.len()];
        for &m in &members {
            if m >= ring.len() {
                return Err(Error::Precondition(format!("label index {m} out of range")));
            }
            inside[m] = true;
        }
        if !inside[ring.identity()] {
            return Err(Error::Precondition("subsystem lacks the identity".into()));
        }
        for &a in &members {
            if !inside[ring.conj(a)] {
                return Err(Error::Precondition(format!(
                    "subsystem not closed under conjugation at {}",
                    ring.name(a)
                )));
            }
            for &b in &members {
                if let Some(t) = ring.product(a, b).iter().find(|t| !inside[t.label]) {
                    return Err(Error::Precondition(format!(
                        "subsystem not closed: {}·{} contains {}",
                        ring.name(a),
                        ring.name(b),
                        ring.name(t.label)
                    )));
                }
            }
        }
        Ok(Subsystem { members, deg: None, per: None })
    }

    pub fn full(ring: &FusionRing) -> Subsystem {
        Subsystem { members: (0..ring.len()).collect(), deg: None, per: None }
    }

    /// Fills `deg` and `per` with the default degeneracy tolerance.
    pub fn resolve(self, md: &ModularData) -> Subsystem {
        self.resolve_with(md, tolerance::DEGENERACY)
    }

    pub fn resolve_with(mut self, md: &ModularData, tol: f64) -> Subsystem {
        self.deg = Some(degenerate_set_with(md, &self, tol));
        self.per = Some(relative_permutant_with(md, &self, tol));
        self
    }

    pub fn contains(&self, label: usize) -> bool {
        self.members.binary_search(&label).is_ok()
    }

    pub fn deg(&self) -> &[usize] {
        self.deg.as_deref().expect("degenerate set not computed")
    }

    pub fn per(&self) -> &[usize] {
        self.per.as_deref().expect("relative permutant not computed")
    }
}

/// Labels of color zero.
pub fn color_zero_subsystem(ring: &FusionRing) -> Subsystem {
    Subsystem {
        members: (0..ring.len()).filter(|&i| ring.color(i) == 0).collect(),
        deg: None,
        per: None,
    }
}

fn trivial_monodromy(md: &ModularData, a: usize, b: usize, tol: f64) -> bool {
    let d = md.ring.dims();
    (md.y[(a, b)] - Complex64::new(d[a] * d[b], 0.0)).norm() < tol
}

/// Members with trivial monodromy against every member.
pub fn degenerate_set(md: &ModularData, sub: &Subsystem) -> Vec<usize> {
    degenerate_set_with(md, sub, tolerance::DEGENERACY)
}

pub fn degenerate_set_with(md: &ModularData, sub: &Subsystem, tol: f64) -> Vec<usize> {
    let id = md.ring.identity();
    sub.members
        .iter()
        .copied()
        .filter(|&r| r == id || sub.members.iter().all(|&v| trivial_monodromy(md, v, r, tol)))
        .collect()
}

/// Labels of the full ring with trivial monodromy against every member.
pub fn relative_permutant(md: &ModularData, sub: &Subsystem) -> Vec<usize> {
    relative_permutant_with(md, sub, tolerance::DEGENERACY)
}

pub fn relative_permutant_with(md: &ModularData, sub: &Subsystem, tol: f64) -> Vec<usize> {
    (0..md.len())
        .filter(|&l| sub.members.iter().all(|&r| trivial_monodromy(md, l, r, tol)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::{build_su2_ring, build_su3_ring};

    fn su2(k: u32) -> ModularData {
        ModularData::for_ring(Arc::new(build_su2_ring(k).unwrap())).unwrap()
    }

    fn su3(k: u32) -> ModularData {
        ModularData::for_ring(Arc::new(build_su3_ring(k).unwrap())).unwrap()
    }

    #[test]
    fn vacuum_phase_is_one() {
        for (alg, k) in [(Algebra::Su2, 10), (Algebra::Su3, 9)] {
            let w = conformal_phases(alg, k).unwrap();
            assert!((w[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn conjugate_simple_currents_share_phase() {
        let ring = build_su3_ring(9).unwrap();
        let w = conformal_phases(Algebra::Su3, 9).unwrap();
        for l in 0..ring.len() {
            assert!((w[l] - w[ring.conj(l)]).norm() < 1e-12);
        }
        let (a, b) = (ring.index_of("(9,0)").unwrap(), ring.index_of("(9,9)").unwrap());
        assert!((w[a] - w[b]).norm() < 1e-12);
    }

    #[test]
    fn su2_s_matrix_matches_closed_form() {
        let md = su2(10);
        let q = std::f64::consts::PI / 12.0;
        for a in 0..11 {
            for b in 0..11 {
                let closed = (2.0f64 / 12.0).sqrt() * (q * (a + 1) as f64 * (b + 1) as f64).sin();
                assert!((md.s[(a, b)] - Complex64::new(closed, 0.0)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn su2_central_charge() {
        let md = su2(10);
        assert!((md.c - 3.0 * 10.0 / 12.0).abs() < 1e-9);
        assert!(md.index_deviation() < 1e-8);
    }

    #[test]
    fn trivial_phases_give_rank_one_y() {
        let ring = build_su2_ring(4).unwrap();
        let y = monodromy_matrix(&ring, &[Complex64::new(1.0, 0.0); 5]);
        for a in 0..5 {
            for b in 0..5 {
                assert!((y[(a, b)].re - ring.dim(a) * ring.dim(b)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn trivial_phases_leave_charge_defined_but_degenerate() {
        let ring = Arc::new(build_su2_ring(4).unwrap());
        let n = ring.len();
        let md = build_modular(ring, vec![Complex64::new(1.0, 0.0); n]).unwrap();
        assert!(!is_nondegenerate(&md));
    }

    #[test]
    fn zero_z_is_rejected() {
        let ring = Arc::new(build_su2_ring(1).unwrap());
        let omega = vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
        assert!(matches!(
            build_modular(ring, omega),
            Err(Error::CentralChargeUndefined(_))
        ));
    }

    #[test]
    fn su2_28_vacuum_row() {
        let md = su2(28);
        for l in 0..29 {
            assert!((md.y[(0, l)].re - md.ring.dim(l)).abs() < 1e-9);
        }
    }

    #[test]
    fn color_zero_members() {
        let md = su2(10);
        assert_eq!(color_zero_subsystem(&md.ring).members, vec![0, 2, 4, 6, 8, 10]);
        let ring = build_su3_ring(5).unwrap();
        let names: Vec<&str> = color_zero_subsystem(&ring).members.iter().map(|&i| ring.name(i)).collect();
        assert_eq!(names, ["(0,0)", "(2,1)", "(3,0)", "(3,3)", "(4,2)", "(5,1)", "(5,4)"]);
        assert_eq!(color_zero_subsystem(&build_su3_ring(9).unwrap()).members.len(), 19);
    }

    #[test]
    fn su2_10_color_zero_degeneracy() {
        let md = su2(10);
        let sub = Subsystem::new(&md.ring, color_zero_subsystem(&md.ring).members)
            .unwrap()
            .resolve(&md);
        assert_eq!(sub.deg(), &[0, 10]);
        assert_eq!(sub.per(), &[0, 10]);
        assert!(is_nondegenerate(&md));
        assert!(!is_nondegenerate_subsystem(&md, &sub));
        assert!(is_nondegenerate_subsystem(&md, &Subsystem::full(&md.ring)));
    }

    #[test]
    fn su2_28_permutant() {
        let md = su2(28);
        let sub = color_zero_subsystem(&md.ring).resolve(&md);
        assert_eq!(sub.per(), &[0, 28]);
        assert_eq!(sub.deg(), &[0, 28]);
    }

    #[test]
    fn full_system_permutant_is_identity() {
        let md = su3(5);
        let sub = Subsystem::full(&md.ring).resolve(&md);
        assert_eq!(sub.deg(), &[0]);
        assert_eq!(sub.per(), &[0]);
    }

    #[test]
    fn closure_violations_are_reported() {
        let ring = build_su2_ring(6).unwrap();
        assert!(Subsystem::new(&ring, vec![0, 1]).is_err());
        assert!(Subsystem::new(&ring, vec![2, 4]).is_err());
        assert!(Subsystem::new(&ring, vec![0, 2, 4, 6]).is_ok());
    }

    #[test]
    fn verlinde_round_trip_small_levels() {
        for md in [su2(10), su3(5), su3(4)] {
            assert_eq!(verlinde_mismatch(&md), None);
        }
    }

    #[test]
    fn verlinde_detects_corruption() {
        let md = su2(6);
        let bad = Arc::new(md.ring.with_coefficient(2, 2, 2, 3));
        let corrupt = ModularData { ring: bad, ..md };
        assert_eq!(verlinde_mismatch(&corrupt).map(|w| (w.0, w.1, w.2)), Some((2, 2, 2)));
    }
}
