use sector_doubler::analysis::{prepare, Analysis};
use sector_doubler::double::{
    build_gram, canonical_multiplicities, chiral_generators, nondegenerate_product_check, pair_chiral, pair_full,
    pair_mixed_sign, pair_same_sign, resolve_sectors, Mode, ProductSector, SectorKind,
};
use sector_doubler::inclusion::{load_inclusion, modular_invariant_z};
use sector_doubler::modular::Subsystem;
use sector_doubler::tolerance::Tolerances;
use sector_doubler::Error;

fn analysis(name: &str) -> Analysis {
    Analysis::load(name, Mode::Chiral, &Tolerances::default()).unwrap()
}

#[test]
fn e8_alpha_14_pairs_twice() {
    let a = analysis("e8");
    assert_eq!(pair_same_sign(&a.md, &a.sub, &a.z, 14, 14), 2);
}

#[test]
fn e12_alpha_63_pairs_three_times() {
    let a = analysis("e12");
    let l = a.spec.ring.index_of("(6,3)").unwrap();
    assert_eq!(pair_same_sign(&a.md, &a.sub, &a.z, l, l), 3);
}

#[test]
fn e24_single_three_on_alpha_diagonal() {
    let a = analysis("e24");
    let ring = &a.spec.ring;
    let threes: Vec<&str> = a
        .sub
        .members
        .iter()
        .filter(|&&l| pair_chiral(&a.sub, &a.spec, (l, 0), (l, 0)) == 3)
        .map(|&l| ring.name(l))
        .collect();
    assert_eq!(threes, ["(14,7)"]);
    let diag: Vec<u64> = a.sub.members.iter().map(|&l| pair_chiral(&a.sub, &a.spec, (l, 0), (l, 0))).collect();
    assert!(diag.iter().all(|&d| d == 1 || d == 3));
}

#[test]
fn e6_gram_diagonal() {
    let a = analysis("e6");
    let sys = &a.system;
    let twos: Vec<&str> = (0..sys.len()).filter(|&i| sys.gram[i][i] == 2).map(|i| sys.generators[i].name.as_str()).collect();
    assert_eq!(twos, ["(5,1)"]);
    assert!((0..sys.len()).all(|i| sys.gram[i][i] <= 2));
    // generators with j + ℓ even only
    for g in &sys.generators {
        let SectorKind::ChiralPair { lambda, tau } = g.kind else { panic!() };
        assert_eq!((lambda + tau) % 2, 0, "{}", g.name);
    }
}

#[test]
fn single_generator_gram() {
    let a = analysis("e6");
    let one = vec![ProductSector { name: "(0,0)".into(), kind: SectorKind::ChiralPair { lambda: 0, tau: 0 }, dim: 1.0 }];
    let sys = build_gram(&a.md, &a.sub, &a.z, &a.spec, one).unwrap();
    assert_eq!(sys.gram, vec![vec![1]]);
}

#[test]
fn mixed_kinds_are_rejected() {
    let a = analysis("e6");
    let gens = vec![
        ProductSector { name: "a".into(), kind: SectorKind::ChiralPair { lambda: 0, tau: 0 }, dim: 1.0 },
        ProductSector { name: "b".into(), kind: SectorKind::FullPair { lambda: 0, mu: 0 }, dim: 1.0 },
    ];
    assert!(build_gram(&a.md, &a.sub, &a.z, &a.spec, gens).is_err());
}

#[test]
fn counts_and_splits() {
    for (name, count, split_dims) in [("e6", 10, 2), ("e8", 18, 2), ("e8cc", 14, 0), ("e12", 27, 3), ("e24", 62, 3)] {
        let a = analysis(name);
        let sys = &a.system;
        assert_eq!(sys.irreducibles.len(), count, "{name}");
        for i in sys.splits() {
            let parts = sys.constituents(i);
            assert_eq!(parts.len(), split_dims, "{name}");
            for (c, m) in parts {
                assert_eq!(m, 1);
                let share = sys.irreducibles[c].share.unwrap();
                assert_eq!(share.denom as usize, split_dims);
                assert!((sys.irreducibles[c].dim - sys.generators[i].dim / split_dims as f64).abs() < 1e-12);
            }
        }
        let cert = sys.certificate.as_ref().unwrap();
        assert!(cert.relative_gap < 1e-8, "{name}");
    }
}

#[test]
fn factorization_reproduces_gram_and_dims() {
    for name in ["e6", "e8", "e12", "e24"] {
        let sys = analysis(name).system;
        let g = sys.len();
        let m = sys.irreducibles.len();
        for i in 0..g {
            for j in 0..g {
                let v: u32 = (0..m).map(|c| sys.b[i][c] * sys.b[j][c]).sum();
                assert_eq!(v, sys.gram[i][j], "{name} {i} {j}");
            }
            let d: f64 = (0..m).map(|c| sys.b[i][c] as f64 * sys.irreducibles[c].dim).sum();
            assert!((d - sys.generators[i].dim).abs() < 1e-9 * d, "{name} {i}");
        }
    }
}

#[test]
fn orbits_have_size_of_degenerate_set() {
    for name in ["e6", "e8", "e12", "e24"] {
        let a = analysis(name);
        let deg = a.sub.deg().len();
        let sys = &a.system;
        for orbit in sys.orbits() {
            let d = sys.gram[orbit[0]][orbit[0]] as usize;
            // a fixed point of the simple-current action is its own orbit with diagonal |deg|
            assert!(orbit.len() == deg || (orbit.len() == 1 && d == deg), "{name}: {orbit:?} diag {d}");
        }
    }
}

#[test]
fn wrong_target_fails_certificate() {
    let a = analysis("e6");
    let generators = chiral_generators(&a.md, &a.sub, &a.z, &a.spec);
    let sys = build_gram(&a.md, &a.sub, &a.z, &a.spec, generators).unwrap();
    assert!(matches!(resolve_sectors(sys, a.target * 1.01), Err(Error::Certificate(_))));
}

#[test]
fn nondegenerate_full_pairing_is_kronecker() {
    let spec = load_inclusion("e6").unwrap();
    let (md, _, z, _) = prepare(&spec, &Tolerances::default()).unwrap();
    let full = Subsystem::full(&spec.ring).resolve(&md);
    assert_eq!(full.deg(), &[0]);
    for (l, m, l2, m2) in [(0, 0, 0, 0), (3, 4, 3, 4), (3, 4, 4, 3), (1, 0, 0, 1), (10, 10, 10, 10)] {
        let want = (l == l2 && m == m2) as u64;
        assert_eq!(pair_full(&md, &full, &z, (l, m), (l2, m2)), want);
    }
    assert_eq!(pair_mixed_sign(&md, &full, &z, 0, 0), 1);
    assert_eq!(pair_mixed_sign(&md, &full, &z, 0, 2), 0);
}

#[test]
fn product_check() {
    for name in ["e6", "e8cc"] {
        let spec = load_inclusion(name).unwrap();
        let (md, sub, z, _) = prepare(&spec, &Tolerances::default()).unwrap();
        let full = Subsystem::full(&spec.ring).resolve(&md);
        let r = nondegenerate_product_check(&md, &full, &z, &spec, 20);
        assert!(r.passed && r.skipped.is_none(), "{name}: {r:?}");
        assert_eq!(r.full_sample, 20);
        if name == "e6" {
            let skipped = nondegenerate_product_check(&md, &sub, &z, &spec, 20);
            assert!(skipped.skipped.unwrap().contains("degenerate"));
        }
    }
}

#[test]
fn canonical_tables() {
    let spec = load_inclusion("e8cc").unwrap();
    let (md, ..) = prepare(&spec, &Tolerances::default()).unwrap();
    let z = modular_invariant_z(&spec).unwrap();
    let full = canonical_multiplicities(&spec, &md, Mode::Full).unwrap();
    for l in 0..spec.ring.len() {
        for m in 0..spec.ring.len() {
            assert_eq!(full.entries[l][m] as i64, z[(l, m)]);
        }
    }
    let chiral = canonical_multiplicities(&spec, &md, Mode::Chiral).unwrap();
    for (t, row) in spec.branching.iter().enumerate() {
        for (l, &b) in row.iter().enumerate() {
            assert_eq!(chiral.entries[l][t], b);
        }
    }
    let expected: f64 = (0..spec.ring.len())
        .flat_map(|l| (0..spec.n_ambichiral()).map(move |t| (l, t)))
        .map(|(l, t)| spec.branching[t][l] as f64 * spec.ring.dim(l) * spec.ambichiral.dim(t))
        .sum();
    assert!((chiral.dimension - expected).abs() < 1e-9);
}

#[test]
fn full_mode_dimensions_are_products() {
    let a = Analysis::load("e8cc", Mode::Full, &Tolerances::default()).unwrap();
    let n = a.spec.ring.len();
    assert_eq!(a.system.irreducibles.len(), n * n);
    assert!(a.system.certificate.as_ref().unwrap().passed);
}
