//! The acceptance suite over the bundled inclusions.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::analysis::{prepare, Analysis};
use crate::data::{builtin, BUILTINS};
use crate::double::{
    as_rational, nondegenerate_product_check, pair_ambi_alpha, pair_chiral, pair_same_sign, Mode,
};
use crate::fusion::verify_ring;
use crate::graph::{compare_golden, load_golden};
use crate::inclusion::{load_inclusion, modular_invariant_z, validate_z, InclusionSpec};
use crate::modular::{verlinde_mismatch, Subsystem};
use crate::tolerance::{Tolerances, MATRIX};

#[derive(Debug, Clone, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// Specs the criterion was evaluated on.
    pub scope: Vec<String>,
    pub details: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub schema: &'static str,
    pub passed: bool,
    pub criteria: Vec<Criterion>,
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.criteria {
            writeln!(
                f,
                "{} {}. {} [{}]",
                if c.passed { "PASS" } else { "FAIL" },
                c.id,
                c.name,
                c.scope.join(", ")
            )?;
            for d in &c.details {
                writeln!(f, "     {d}")?;
            }
        }
        write!(f, "{}", if self.passed { "all criteria passed" } else { "some criteria FAILED" })
    }
}

struct Expected {
    name: &'static str,
    deg: &'static [&'static str],
    /// `None` when the relative permutant coincides with `deg`.
    per: Option<&'static [&'static str]>,
    upsilon: (i64, i64),
    irreducibles: usize,
    /// Sizes of the distinct split sectors, sorted.
    splits: &'static [usize],
    /// `(λ, τ, μ, τ', value)` for chiral pairings.
    chiral_pairs: &'static [(&'static str, usize, &'static str, usize, u64)],
    /// `(λ, μ, value)` for same-sign pairings.
    same_sign: &'static [(&'static str, &'static str, u64)],
    /// `(τ, λ, value)` for ambichiral pairings.
    ambi: &'static [(usize, &'static str, u64)],
}

const EXPECTED: [Expected; 5] = [
    Expected {
        name: "e6",
        per: None,
        deg: &["0", "10"],
        upsilon: (1, 2),
        irreducibles: 10,
        splits: &[2],
        chiral_pairs: &[
            ("5", 1, "5", 1, 2),
            ("1", 1, "9", 1, 1),
            ("3", 1, "7", 1, 1),
            ("0", 0, "10", 2, 1),
            ("2", 0, "8", 2, 1),
            ("4", 0, "6", 2, 1),
            ("6", 0, "4", 2, 1),
            ("8", 0, "2", 2, 1),
            ("10", 0, "0", 2, 1),
        ],
        same_sign: &[("0", "0", 1), ("2", "2", 1), ("4", "4", 1), ("6", "6", 1), ("8", "8", 1), ("10", "10", 1)],
        ambi: &[(2, "10", 1), (0, "0", 1)],
    },
    Expected {
        name: "e8",
        per: None,
        deg: &["0", "28"],
        upsilon: (1, 1),
        irreducibles: 18,
        splits: &[2, 2],
        chiral_pairs: &[],
        same_sign: &[("14", "14", 2)],
        ambi: &[(0, "0", 1)],
    },
    Expected {
        name: "e8cc",
        deg: &["(0,0)"],
        per: Some(&["(0,0)", "(5,0)", "(5,5)"]),
        upsilon: (1, 1),
        irreducibles: 14,
        splits: &[],
        chiral_pairs: &[],
        same_sign: &[],
        ambi: &[(0, "(0,0)", 1)],
    },
    Expected {
        name: "e12",
        per: None,
        deg: &["(0,0)", "(9,0)", "(9,9)"],
        upsilon: (1, 1),
        irreducibles: 27,
        splits: &[3, 3, 3],
        chiral_pairs: &[],
        same_sign: &[("(6,3)", "(6,3)", 3)],
        ambi: &[(0, "(0,0)", 1), (1, "(0,0)", 0), (2, "(0,0)", 0)],
    },
    Expected {
        name: "e24",
        per: None,
        deg: &["(0,0)", "(21,0)", "(21,21)"],
        upsilon: (1, 1),
        irreducibles: 62,
        splits: &[3, 3],
        chiral_pairs: &[("(14,7)", 0, "(14,7)", 0, 3)],
        same_sign: &[],
        ambi: &[(0, "(0,0)", 1)],
    },
];

/// Lazily computed chiral analyses, keyed by builtin name.
struct Cache {
    tol: Tolerances,
    analyses: HashMap<&'static str, std::result::Result<Analysis, String>>,
}

impl Cache {
    fn get(&mut self, name: &'static str) -> std::result::Result<&Analysis, String> {
        let tol = self.tol;
        self.analyses
            .entry(name)
            .or_insert_with(|| Analysis::load(name, Mode::Chiral, &tol).map_err(|e| format!("{name}: {e}")))
            .as_ref()
            .map_err(Clone::clone)
    }
}

struct Check {
    passed: bool,
    details: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check { passed: true, details: Vec::new() }
    }

    fn expect(&mut self, ok: bool, message: impl FnOnce() -> String) {
        if !ok {
            self.passed = false;
            self.details.push(message());
        }
    }

    fn fail(&mut self, message: String) {
        self.passed = false;
        self.details.push(message);
    }

    fn note(&mut self, message: String) {
        self.details.push(message);
    }
}

fn modular_check(a: &Analysis, c: &mut Check) {
    let origin = &a.spec.origin;
    let ring = &a.spec.ring;
    let label = format!("{}_{}", ring.algebra().display_name(), ring.level().unwrap_or(0));
    for (name, dev) in a.md.identity_deviations() {
        c.expect(dev < MATRIX, || format!("{origin}: {label} {name} deviates by {dev:e}"));
    }
    let u = a.md.unitarity_deviation();
    c.expect(u < MATRIX, || format!("{origin}: {label} S not unitary ({u:e})"));
    if let Some((x, y, z, v)) = verlinde_mismatch(&a.md) {
        c.fail(format!(
            "{origin}: {label} Verlinde gives {v} for N[{}][{}][{}] = {}",
            ring.name(x),
            ring.name(y),
            ring.name(z),
            ring.coeff(x, y, z)
        ));
    }
    let zr = &a.z_report;
    c.expect(zr.passed, || match &zr.witness {
        Some((x, y)) => format!("{origin}: modular invariant fails ({zr}), witness Z[{x}][{y}]"),
        None => format!("{origin}: modular invariant fails ({zr})"),
    });
}

fn names(a: &Analysis, set: &[usize]) -> BTreeSet<String> {
    set.iter().map(|&i| a.spec.ring.name(i).to_string()).collect()
}

fn degeneracy_check(a: &Analysis, e: &Expected, c: &mut Check) {
    let set = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<BTreeSet<String>>();
    let (want_deg, want_per) = (set(e.deg), set(e.per.unwrap_or(e.deg)));
    let (deg, per) = (names(a, a.sub.deg()), names(a, a.sub.per()));
    c.expect(deg == want_deg, || format!("{}: deg = {deg:?}, expected {want_deg:?}", a.spec.origin));
    c.expect(per == want_per, || format!("{}: per = {per:?}, expected {want_per:?}", a.spec.origin));
}

fn pairing_check(a: &Analysis, e: &Expected, c: &mut Check) {
    let ring = &a.spec.ring;
    let idx = |s: &str| ring.index_of(s).map_err(|err| err.to_string());
    let origin = &a.spec.origin;
    for &(l, t, m, t2, want) in e.chiral_pairs {
        match (idx(l), idx(m)) {
            (Ok(l2), Ok(m2)) => {
                let got = pair_chiral(&a.sub, &a.spec, (l2, t), (m2, t2));
                c.expect(got == want, || format!("{origin}: <({l},t{t}),({m},t{t2})> = {got}, expected {want}"));
            }
            (Err(err), _) | (_, Err(err)) => c.fail(format!("{origin}: {err}")),
        }
    }
    for &(l, m, want) in e.same_sign {
        match (idx(l), idx(m)) {
            (Ok(l2), Ok(m2)) => {
                let got = pair_same_sign(&a.md, &a.sub, &a.z, l2, m2);
                c.expect(got == want, || format!("{origin}: <a+{l},a+{m}> = {got}, expected {want}"));
            }
            (Err(err), _) | (_, Err(err)) => c.fail(format!("{origin}: {err}")),
        }
    }
    for &(t, l, want) in e.ambi {
        match idx(l) {
            Ok(l2) => {
                let got = pair_ambi_alpha(&a.sub, &a.spec, t, l2);
                c.expect(got == want, || format!("{origin}: <a+{l},t{t}> = {got}, expected {want}"));
            }
            Err(err) => c.fail(format!("{origin}: {err}")),
        }
    }
}

fn upsilon_check(a: &Analysis, e: &Expected, c: &mut Check) {
    let want = Ratio::new(e.upsilon.0, e.upsilon.1);
    let got = as_rational(a.upsilon, 64, 1e-9);
    c.expect(got == Some(want), || format!("{}: ratio {} is not {want}", a.spec.origin, a.upsilon));
}

/// Sizes of distinct split sectors (generators splitting into the same set count once).
pub fn split_sizes(a: &Analysis) -> Vec<usize> {
    let sys = &a.system;
    let sets: BTreeSet<Vec<usize>> = sys
        .splits()
        .into_iter()
        .map(|i| sys.constituents(i).into_iter().map(|(col, _)| col).collect())
        .collect();
    let mut sizes: Vec<usize> = sets.iter().map(Vec::len).collect();
    sizes.sort();
    sizes
}

fn sector_check(a: &Analysis, e: &Expected, c: &mut Check) {
    let sys = &a.system;
    let origin = &a.spec.origin;
    let n = sys.irreducibles.len();
    c.expect(n == e.irreducibles, || format!("{origin}: {n} irreducibles, expected {}", e.irreducibles));
    let sizes = split_sizes(a);
    c.expect(sizes == e.splits, || format!("{origin}: split sizes {sizes:?}, expected {:?}", e.splits));
    for i in sys.splits() {
        let parts = sys.constituents(i);
        let each = sys.generators[i].dim / parts.len() as f64;
        let equal = parts.iter().all(|&(col, m)| m == 1 && (sys.irreducibles[col].dim - each).abs() < 1e-9 * each);
        c.expect(equal, || format!("{origin}: split of {} is not into equal dimensions", sys.generators[i].name));
    }
    match &sys.certificate {
        Some(cert) => c.expect(cert.passed, || format!("{origin}: certificate gap {:e}", cert.relative_gap)),
        None => c.fail(format!("{origin}: no certificate")),
    }
}

fn golden_check(a: &Analysis, golden: &str, c: &mut Check) {
    let graph = match a.graph() {
        Ok(g) => g,
        Err(err) => return c.fail(format!("{}: {err}", a.spec.origin)),
    };
    match load_golden(golden) {
        Ok(g) => {
            let report = compare_golden(&graph, &g);
            if !report.matched {
                c.fail(format!("{} vs {golden}:", a.spec.name));
                for line in report.to_string().lines().skip(1) {
                    c.note(line.trim().to_string());
                }
            }
        }
        Err(err) => c.fail(err.to_string()),
    }
}

fn collapse_check(spec: &InclusionSpec, tol: &Tolerances, c: &mut Check) {
    let (md, _, z, _) = match prepare(spec, tol) {
        Ok(p) => p,
        Err(err) => return c.fail(format!("{}: {err}", spec.origin)),
    };
    let full = Subsystem::full(&spec.ring).resolve_with(&md, tol.degeneracy);
    let r = nondegenerate_product_check(&md, &full, &z, spec, 20);
    let label = format!("{}_{}", spec.ring.algebra().display_name(), spec.ring.level().unwrap_or(0));
    if let Some(reason) = &r.skipped {
        c.fail(format!("{label}: skipped ({reason})"));
    }
    if let Some((x, y, v)) = &r.witness {
        c.fail(format!("{label}: <{x},{y}> = {v} breaks the identity Gram"));
    }
}

/// Every nonzero branching entry and every ambichiral fusion entry, when
/// incremented, must be caught with a witness.
pub fn negative_controls(spec: &InclusionSpec, tol: &Tolerances, c: &mut Vec<String>) -> bool {
    let mut ok = true;
    let md = match prepare(spec, tol) {
        Ok((md, ..)) => md,
        Err(err) => {
            c.push(format!("{}: {err}", spec.origin));
            return false;
        }
    };
    for t in 0..spec.n_ambichiral() {
        for l in 0..spec.ring.len() {
            if spec.branching[t][l] == 0 {
                continue;
            }
            let mut bad = spec.clone();
            bad.branching[t][l] += 1;
            let caught = match modular_invariant_z(&bad) {
                Err(_) => true,
                Ok(z) => {
                    let r = validate_z(&z, &md);
                    !r.passed && r.witness.is_some()
                }
            };
            if !caught {
                ok = false;
                c.push(format!("{}: corrupting b[{t}][{}] went unnoticed", spec.origin, spec.ring.name(l)));
            }
        }
    }
    let amb = &spec.ambichiral;
    for (a, b, x, n) in amb.entries().collect::<Vec<_>>() {
        let bad = amb.with_coefficient(a, b, x, n + 1).with_coefficient(b, a, x, n + 1);
        let report = verify_ring(&bad);
        if report.passed() || report.failures().any(|f| f.witness.is_none()) {
            ok = false;
            c.push(format!(
                "{}: corrupting ambichiral N[{}][{}][{}] went unnoticed",
                spec.origin,
                amb.name(a),
                amb.name(b),
                amb.name(x)
            ));
        }
    }
    ok
}

fn level_ring_controls(spec: &InclusionSpec, c: &mut Check) {
    let ring = &spec.ring;
    let entries: Vec<_> = ring.entries().filter(|&(a, b, _, _)| a <= b).collect();
    let step = (entries.len() / 40).max(1);
    for &(a, b, x, n) in entries.iter().step_by(step) {
        let bad = ring.with_coefficient(a, b, x, n + 1).with_coefficient(b, a, x, n + 1);
        let report = verify_ring(&bad);
        c.expect(!report.passed() && report.failures().all(|f| f.witness.is_some()), || {
            format!("{}: corrupting N[{}][{}][{}] went unnoticed", spec.origin, ring.name(a), ring.name(b), ring.name(x))
        });
    }
}

/// Runs every criterion, or those touching one builtin when `only` is given.
pub fn run_suite(only: Option<&str>, tol: &Tolerances) -> SuiteReport {
    let selected: Vec<&Expected> = EXPECTED.iter().filter(|e| only.is_none_or(|o| o == e.name)).collect();
    let mut cache = Cache { tol: *tol, analyses: HashMap::new() };
    let mut criteria = Vec::new();

    type PerSpec = fn(&Analysis, &Expected, &mut Check);
    let per_spec: [(u8, &'static str, PerSpec); 5] = [
        (1, "modular data identities, Verlinde round trip and modular invariant", |a, _, c| modular_check(a, c)),
        (2, "degenerate set and relative permutant", degeneracy_check),
        (3, "pairing spot checks", pairing_check),
        (4, "upsilon index ratio", upsilon_check),
        (5, "sector enumeration with global-index certificate", sector_check),
    ];
    for (id, name, f) in per_spec {
        let mut c = Check::new();
        let mut scope = Vec::new();
        for e in &selected {
            scope.push(e.name.to_string());
            match cache.get(e.name) {
                Ok(a) => f(a, e, &mut c),
                Err(err) => c.fail(err),
            }
        }
        if !scope.is_empty() {
            criteria.push(Criterion { id, name, passed: c.passed, scope, details: c.details });
        }
    }

    let mut c = Check::new();
    let mut scope = Vec::new();
    for e in &selected {
        if let Some(golden) = builtin(e.name).and_then(|b| b.golden) {
            scope.push(e.name.to_string());
            match cache.get(e.name) {
                Ok(a) => golden_check(a, golden, &mut c),
                Err(err) => c.fail(err),
            }
        }
    }
    if !scope.is_empty() {
        criteria.push(Criterion { id: 6, name: "dual principal graphs match goldens", passed: c.passed, scope, details: c.details });
    }

    let mut c = Check::new();
    let mut scope = Vec::new();
    for e in selected.iter().filter(|e| matches!(e.name, "e6" | "e8cc")) {
        scope.push(e.name.to_string());
        match load_inclusion(e.name) {
            Ok(spec) => collapse_check(&spec, tol, &mut c),
            Err(err) => c.fail(err.to_string()),
        }
    }
    if !scope.is_empty() {
        criteria.push(Criterion { id: 7, name: "non-degenerate Kronecker collapse", passed: c.passed, scope, details: c.details });
    }

    let mut c = Check::new();
    let mut scope = Vec::new();
    for e in &selected {
        scope.push(e.name.to_string());
        match load_inclusion(e.name) {
            Ok(spec) => {
                let mut notes = Vec::new();
                if !negative_controls(&spec, tol, &mut notes) {
                    c.passed = false;
                }
                c.details.extend(notes);
                if matches!(e.name, "e6" | "e8cc") {
                    level_ring_controls(&spec, &mut c);
                }
            }
            Err(err) => c.fail(err.to_string()),
        }
    }
    criteria.push(Criterion { id: 8, name: "corrupted data is rejected with a witness", passed: c.passed, scope, details: c.details });

    SuiteReport { schema: crate::SCHEMA, passed: criteria.iter().all(|c| c.passed), criteria }
}

/// Generic checks for a descriptor that is not one of the builtins.
pub fn run_generic(source: &str, tol: &Tolerances) -> SuiteReport {
    let mut criteria = Vec::new();
    let mut push = |id, name, c: Check| {
        criteria.push(Criterion { id, name, passed: c.passed, scope: vec![source.to_string()], details: c.details })
    };
    let spec = match load_inclusion(source) {
        Ok(s) => s,
        Err(err) => {
            let mut c = Check::new();
            c.fail(err.to_string());
            push(0, "descriptor loads", c);
            return SuiteReport { schema: crate::SCHEMA, passed: false, criteria };
        }
    };
    match Analysis::run(spec.clone(), Mode::Chiral, tol) {
        Ok(a) => {
            let mut c = Check::new();
            modular_check(&a, &mut c);
            push(1, "modular data identities, Verlinde round trip and modular invariant", c);
            let mut c = Check::new();
            sector_check_generic(&a, &mut c);
            push(5, "sector enumeration with global-index certificate", c);
        }
        Err(err) => {
            let mut c = Check::new();
            c.fail(format!("{}: {err}", spec.origin));
            push(5, "sector enumeration with global-index certificate", c);
        }
    }
    let mut notes = Vec::new();
    let ok = negative_controls(&spec, tol, &mut notes);
    push(8, "corrupted data is rejected with a witness", Check { passed: ok, details: notes });
    SuiteReport { schema: crate::SCHEMA, passed: criteria.iter().all(|c| c.passed), criteria }
}

fn sector_check_generic(a: &Analysis, c: &mut Check) {
    match &a.system.certificate {
        Some(cert) => c.expect(cert.passed, || format!("{}: certificate gap {:e}", a.spec.origin, cert.relative_gap)),
        None => c.fail(format!("{}: no certificate", a.spec.origin)),
    }
}

/// Whether `name` has an entry in the expectation table.
pub fn is_known(name: &str) -> bool {
    EXPECTED.iter().any(|e| e.name == name) && BUILTINS.iter().any(|b| b.name == name)
}
