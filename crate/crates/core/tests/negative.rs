use std::path::{Path, PathBuf};

use sector_doubler::analysis::{prepare, Analysis};
use sector_doubler::data::export_bundle;
use sector_doubler::double::{canonical_multiplicities, pair_full, Mode};
use sector_doubler::inclusion::{load_inclusion, modular_invariant_z, validate_z};
use num_complex::Complex64;
use sector_doubler::modular::{monodromy_matrix, ModularData};
use sector_doubler::tolerance::Tolerances;
use sector_doubler::Error;
use serde_json::Value;

fn bundle() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    export_bundle(dir.path()).unwrap();
    dir
}

fn edit(dir: &Path, file: &str, f: impl FnOnce(&mut Value)) -> PathBuf {
    let path = dir.join(file);
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    f(&mut doc);
    std::fs::write(&path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    path
}

#[test]
fn moved_branching_entry_breaks_modular_invariance() {
    let dir = bundle();
    let path = edit(dir.path(), "e6_su2_10.json", |d| d["branching"][1][1] = "8".into());
    let spec = load_inclusion(path.to_str().unwrap()).unwrap();
    let md = ModularData::for_ring(spec.ring.clone()).unwrap();
    let z = modular_invariant_z(&spec).unwrap();
    let report = validate_z(&z, &md);
    assert!(!report.passed, "{report}");
    assert!(report.witness.is_some());
    if let Ok(a) = Analysis::load(path.to_str().unwrap(), Mode::Chiral, &Tolerances::default()) {
        let r = a.report();
        assert!(!r.z_validation.passed);
        assert!(!r.passed());
    }
}

#[test]
fn corrupted_ambichiral_fusion_is_rejected_with_witness() {
    let dir = bundle();
    let path = edit(dir.path(), "e6_su2_10.json", |d| {
        let fusion = d["ambichiral"]["fusion"].as_array_mut().unwrap();
        for entry in fusion.iter_mut() {
            if entry[0] == 1 && entry[1] == 1 && entry[2] == 2 {
                entry[3] = 2.into();
            }
        }
    });
    match load_inclusion(path.to_str().unwrap()) {
        Err(e @ Error::InvalidSpec { .. }) => {
            let msg = e.to_string();
            assert!(msg.contains("ambichiral.fusion"), "{msg}");
            assert!(msg.contains("e6_su2_10.json"), "{msg}");
        }
        other => panic!("expected an invalid spec, got {other:?}"),
    }
}

#[test]
fn malformed_json_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\n  \"schema\": \"v1\",\n  \"name\": \n}\n").unwrap();
    let err = load_inclusion(path.to_str().unwrap()).unwrap_err();
    assert!(matches!(err, Error::Parse { .. }));
    let msg = err.to_string();
    assert!(msg.contains("broken.json") && msg.contains("line 4"), "{msg}");
    assert!(err.is_input_error());
}

#[test]
fn unknown_spec_is_an_input_error() {
    let err = load_inclusion("no-such-inclusion").unwrap_err();
    assert!(err.is_input_error());
    assert_eq!(err.module(), "inclusion_data");
}

#[test]
fn wrong_schema_is_rejected() {
    let dir = bundle();
    let path = edit(dir.path(), "e8cc_su3_5.json", |d| d["schema"] = "v2".into());
    let err = load_inclusion(path.to_str().unwrap()).unwrap_err();
    assert!(err.to_string().contains("schema"), "{err}");
}

#[test]
fn canonical_multiplicities_need_a_nondegenerate_braiding() {
    let spec = load_inclusion("e6").unwrap();
    let (mut md, ..) = prepare(&spec, &Tolerances::default()).unwrap();
    let z = modular_invariant_z(&spec).unwrap();
    let table = canonical_multiplicities(&spec, &md, Mode::Full).unwrap();
    assert_eq!(table.entries[6][0] as i64, z[(6, 0)]);

    // trivial twists: the monodromy collapses to d_a d_b and S is no longer unitary
    let n = spec.ring.len();
    md.omega = vec![Complex64::new(1.0, 0.0); n];
    md.y = monodromy_matrix(&spec.ring, &md.omega);
    md.z = spec.ring.dims().iter().map(|d| Complex64::new(d * d, 0.0)).sum();
    md.s = md.y.map(|x| x / md.z.norm());
    for mode in [Mode::Full, Mode::Chiral] {
        match canonical_multiplicities(&spec, &md, mode) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("non-degenerate"), "{msg}"),
            other => panic!("expected a precondition error, got {other:?}"),
        }
    }
}

#[test]
fn degenerate_subsystem_collapses_the_product() {
    let spec = load_inclusion("e6").unwrap();
    let (md, sub, z, _) = prepare(&spec, &Tolerances::default()).unwrap();
    let n = spec.ring.len();
    let top = n - 1;
    assert_eq!(pair_full(&md, &sub, &z, (top, top), (0, 0)), 1);
    assert_eq!(pair_full(&md, &sub, &z, (top, top), (top, top)), 1);
    let full = sector_doubler::modular::Subsystem::full(&spec.ring).resolve(&md);
    assert_eq!(pair_full(&md, &full, &z, (top, top), (0, 0)), 0);
}

#[test]
fn full_mode_on_large_rings_is_refused() {
    match Analysis::load("e24", Mode::Full, &Tolerances::default()) {
        Err(Error::Precondition(msg)) => assert!(msg.contains("4096"), "{msg}"),
        other => panic!("expected a precondition error, got {:?}", other.map(|a| a.system.len())),
    }
}
