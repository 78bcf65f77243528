//! Library results against independently computed reference values.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use sector_doubler::analysis::Analysis;
use sector_doubler::double::Mode;
use sector_doubler::fusion::{build_su2_ring, build_su3_ring, FusionRing};
use sector_doubler::inclusion::load_inclusion;
use sector_doubler::modular::{color_zero_subsystem, ModularData};
use sector_doubler::tolerance::Tolerances;

/// Truncated Clebsch-Gordan rule written out directly.
fn su2_oracle(k: u32, a: u32, b: u32, c: u32) -> u32 {
    let lo = a.abs_diff(b);
    let hi = (a + b).min(2 * k - a - b);
    (c >= lo && c <= hi && (a + b + c).is_multiple_of(2)) as u32
}

#[test]
fn su2_fusion_matches_clebsch_gordan() {
    for k in [1, 4, 10, 28] {
        let ring = build_su2_ring(k).unwrap();
        for a in 0..=k {
            for b in 0..=k {
                for c in 0..=k {
                    assert_eq!(
                        ring.coeff(a as usize, b as usize, c as usize),
                        su2_oracle(k, a, b, c),
                        "k={k} N[{a}][{b}][{c}]"
                    );
                }
            }
        }
    }
}

#[test]
fn su2_dims_are_quantum_integers() {
    let ring = build_su2_ring(28).unwrap();
    for j in 0..=28 {
        let d = ((j + 1) as f64 * PI / 30.0).sin() / (PI / 30.0).sin();
        assert!((ring.dim(j) - d).abs() < 1e-9);
    }
}

fn su3_shifted(p: u32, q: u32) -> [f64; 3] {
    let v = [p as f64 + 2.0, q as f64 + 1.0, 0.0];
    let mean = (v[0] + v[1] + v[2]) / 3.0;
    [v[0] - mean, v[1] - mean, v[2] - mean]
}

const PERMS: [([usize; 3], f64); 6] = [
    ([0, 1, 2], 1.0),
    ([1, 2, 0], 1.0),
    ([2, 0, 1], 1.0),
    ([1, 0, 2], -1.0),
    ([0, 2, 1], -1.0),
    ([2, 1, 0], -1.0),
];

/// Kac-Peterson S-matrix of SU(3)_k from the Weyl group alternating sum,
/// normalized to be unitary with positive real `S_00`.
fn su3_kac_peterson(ring: &FusionRing, k: u32) -> DMatrix<Complex64> {
    let n = ring.len();
    let big = (k + 3) as f64;
    let labels: Vec<[f64; 3]> = ring.labels().iter().map(|l| su3_shifted(l.weight[0], l.weight[1])).collect();
    let a = DMatrix::from_fn(n, n, |i, j| {
        PERMS
            .iter()
            .map(|(p, sign)| {
                let dot: f64 = (0..3).map(|t| labels[i][p[t]] * labels[j][t]).sum();
                Complex64::from_polar(*sign, -2.0 * PI * dot / big)
            })
            .sum::<Complex64>()
    });
    let norm = (0..n).map(|j| a[(0, j)].norm_sqr()).sum::<f64>().sqrt();
    let phase = a[(0, 0)] / a[(0, 0)].norm();
    a.map(|x| x / (norm * phase))
}

#[test]
fn su3_fusion_matches_verlinde_from_kac_peterson() {
    for k in [1, 2, 3, 5] {
        let ring = build_su3_ring(k).unwrap();
        let s = su3_kac_peterson(&ring, k);
        let n = ring.len();
        let unit = &s * s.adjoint() - DMatrix::identity(n, n);
        assert!(unit.iter().all(|x| x.norm() < 1e-10), "k={k} oracle not unitary");
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let v: Complex64 = (0..n).map(|x| s[(a, x)] * s[(b, x)] * s[(c, x)].conj() / s[(0, x)]).sum();
                    assert!((v.re - ring.coeff(a, b, c) as f64).abs() < 1e-8, "k={k} {a} {b} {c}: {v}");
                }
            }
        }
    }
}

#[test]
fn su3_s_matrix_matches_kac_peterson_up_to_conjugation() {
    for k in [3, 5, 9] {
        let ring = Arc::new(build_su3_ring(k).unwrap());
        let s = su3_kac_peterson(&ring, k);
        let md = ModularData::for_ring(Arc::clone(&ring)).unwrap();
        let direct = (&md.s - &s).iter().map(|x| x.norm()).fold(0.0, f64::max);
        let conj = (&md.s - s.map(|x| x.conj())).iter().map(|x| x.norm()).fold(0.0, f64::max);
        assert!(direct.min(conj) < 1e-9, "k={k}: {direct:e} / {conj:e}");
    }
}

#[test]
fn central_charges_match_sugawara_and_ambient() {
    // k·dim(g)/(k + h∨) for the level ring and for the ambient algebra at level 1.
    let cases: [(&str, f64, f64); 5] = [("e6", 30.0 / 12.0, 10.0 / 4.0), ("e8", 84.0 / 30.0, 14.0 / 5.0), ("e8cc", 5.0, 35.0 / 7.0), ("e12", 6.0, 78.0 / 13.0), ("e24", 7.0, 133.0 / 19.0)];
    for (name, c, ambient) in cases {
        assert!((c - ambient).abs() < 1e-12);
        let spec = load_inclusion(name).unwrap();
        let md = ModularData::for_ring(Arc::clone(&spec.ring)).unwrap();
        let diff = (md.c - c).rem_euclid(8.0);
        assert!(diff.min(8.0 - diff) < 1e-9, "{name}: c = {}", md.c);
    }
}

/// `h_J + h_μ − h_{Jμ}` for the simple current `J = (k,0)` and label `μ`.
fn su3_h(p: u32, q: u32, k: u32) -> f64 {
    let (a, b) = ((p - q) as f64, q as f64);
    (a * a + a * b + b * b + 3.0 * a + 3.0 * b) / (3.0 * (k + 3) as f64)
}

#[test]
fn relative_permutant_of_su3_is_the_simple_current_group_on_color_zero() {
    for k in [5, 9] {
        let spec = load_inclusion(if k == 5 { "e8cc" } else { "e12" }).unwrap();
        let ring = &spec.ring;
        let md = ModularData::for_ring(Arc::clone(ring)).unwrap();
        let sub = color_zero_subsystem(ring).resolve(&md);
        // Oracle: λ has trivial monodromy with all color-zero μ iff
        // h_λ + h_μ − h_ν ∈ Z for every ν in λ × μ.
        let oracle: Vec<usize> = (0..ring.len())
            .filter(|&l| {
                sub.members.iter().all(|&m| {
                    ring.product(l, m).iter().all(|t| {
                        let w = |i: usize| ring.label(i).weight.clone();
                        let (wl, wm, wn) = (w(l), w(m), w(t.label));
                        let x = su3_h(wl[0], wl[1], k) + su3_h(wm[0], wm[1], k) - su3_h(wn[0], wn[1], k);
                        (x - x.round()).abs() < 1e-9
                    })
                })
            })
            .collect();
        assert_eq!(sub.per(), oracle.as_slice(), "k={k}");
        let j = ring.index_of("(5,0)").ok().filter(|_| k == 5);
        if let Some(j) = j {
            assert!(oracle.contains(&j));
        }
    }
}

fn perron(adj: &DMatrix<f64>) -> Vec<f64> {
    let eig = SymmetricEigen::new(adj.clone());
    let top = eig.eigenvalues.imax();
    let v = eig.eigenvectors.column(top);
    let sign = v[0].signum();
    v.iter().map(|x| x * sign / (v[0] * sign)).collect()
}

/// Chiral dimensions of the E6 and E8 graphs from the Dynkin diagrams,
/// and the certificate target they imply.
#[test]
fn double_index_matches_dynkin_perron_vector() {
    for (name, n) in [("e6", 6usize), ("e8", 8)] {
        let spec = load_inclusion(name).unwrap();
        let adj = spec.chiral_graph.adjacency.map(|x| x as f64);
        let sym = &adj + adj.transpose();
        assert_eq!(sym.nrows(), n);
        let degrees: Vec<f64> = (0..n).map(|i| sym.row(i).iter().map(|x| (x > &0.0) as u8 as f64).sum()).collect();
        let leaves = degrees.iter().filter(|&&d| d == 1.0).count();
        assert_eq!(leaves, 3, "{name} graph is a three-armed tree");
        let pf = perron(&sym.map(|x| (x > 0.0) as u8 as f64));
        let a = Analysis::load(name, Mode::Chiral, &Tolerances::default()).unwrap();
        let chiral = a.chiral.as_ref().unwrap();
        for (v, d) in pf.iter().enumerate() {
            assert!((chiral.chiral_dims[v] - d).abs() < 1e-9, "{name} vertex {v}");
        }
        let delta: f64 = chiral.color_zero_vertices().iter().map(|&v| pf[v] * pf[v]).sum();
        let achieved: f64 = a.system.irreducibles.iter().map(|i| i.dim * i.dim).sum();
        assert!((achieved - delta * delta).abs() / (delta * delta) < 1e-8, "{name}");
    }
}

#[test]
fn upsilon_by_hand_for_e6() {
    let spec = load_inclusion("e6").unwrap();
    let md = ModularData::for_ring(Arc::clone(&spec.ring)).unwrap();
    let sub = color_zero_subsystem(&spec.ring).resolve(&md);
    assert_eq!(sub.deg(), &[0, 10]);
    // (d_0 Z_00 + d_10 Z_10,0) / (d_0² + d_10²) with Z_10,0 = 0.
    let z = sector_doubler::inclusion::modular_invariant_z(&spec).unwrap();
    assert_eq!(z[(10, 0)], 0);
    let ratio = sector_doubler::double::upsilon_index_ratio(&md, &sub, &z);
    assert!((ratio - 0.5).abs() < 1e-12);
}
