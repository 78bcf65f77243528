//! End-to-end analysis of one inclusion: modular data, subsystem, sector
//! system and dual graph, with a printable report.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::double::{
    as_rational, build_gram, chiral_generators, full_generators, resolve_sectors_with, upsilon_index_ratio, Mode,
    SectorSystem,
};
use crate::error::Result;
use crate::fusion::global_index;
use crate::graph::{dual_principal_graph, BipartiteGraph};
use crate::inclusion::{
    chiral_global_index_check, chiral_multiplicities, derive_ambichiral_action, load_inclusion, modular_invariant_z,
    validate_z, ChiralData, ChiralIndexReport, IMatrix, InclusionSpec, ZReport,
};
use crate::modular::{color_zero_subsystem, ModularData, Subsystem};
use crate::tolerance::Tolerances;

pub struct Analysis {
    pub spec: InclusionSpec,
    pub mode: Mode,
    pub md: ModularData,
    pub sub: Subsystem,
    pub z: IMatrix,
    pub z_report: ZReport,
    /// Present in chiral mode.
    pub chiral: Option<ChiralData>,
    pub chiral_index: Option<ChiralIndexReport>,
    pub upsilon: f64,
    pub target: f64,
    pub system: SectorSystem,
}

/// Modular data, invariant and resolved color-zero subsystem of a spec.
pub fn prepare(spec: &InclusionSpec, tol: &Tolerances) -> Result<(ModularData, Subsystem, IMatrix, ZReport)> {
    let md = ModularData::for_ring(Arc::clone(&spec.ring))?;
    let sub = color_zero_subsystem(&spec.ring).resolve_with(&md, tol.degeneracy);
    let z = modular_invariant_z(spec)?;
    let z_report = validate_z(&z, &md);
    Ok((md, sub, z, z_report))
}

/// Chiral multiplicities for every label together with the ambichiral action.
pub fn chiral_data(spec: &InclusionSpec) -> Result<ChiralData> {
    let mut chiral = chiral_multiplicities(spec, None)?;
    chiral.t = derive_ambichiral_action(spec, &chiral)?;
    Ok(chiral)
}

impl Analysis {
    pub fn load(source: &str, mode: Mode, tol: &Tolerances) -> Result<Analysis> {
        Analysis::run(load_inclusion(source)?, mode, tol)
    }

    pub fn run(spec: InclusionSpec, mode: Mode, tol: &Tolerances) -> Result<Analysis> {
        let (md, sub, z, z_report) = prepare(&spec, tol)?;
        let upsilon = upsilon_index_ratio(&md, &sub, &z);
        let (sub, chiral, chiral_index, generators, target) = match mode {
            Mode::Chiral => {
                let chiral = chiral_data(&spec)?;
                let report = chiral_global_index_check(&spec, &z, &sub, &chiral);
                let generators = chiral_generators(&md, &sub, &z, &spec);
                let target = chiral.color_zero_index().powi(2);
                (sub, Some(chiral), Some(report), generators, target)
            }
            Mode::Full => {
                let full = Subsystem::full(&spec.ring).resolve_with(&md, tol.degeneracy);
                let generators = full_generators(&spec.ring)?;
                let target = global_index(&spec.ring, &full.members).powi(2);
                (full, None, None, generators, target)
            }
        };
        let system = build_gram(&md, &sub, &z, &spec, generators)?;
        let system = resolve_sectors_with(system, target, tol)?;
        Ok(Analysis { spec, mode, md, sub, z, z_report, chiral, chiral_index, upsilon, target, system })
    }

    /// Dual principal graph; chiral mode only.
    pub fn graph(&self) -> Result<BipartiteGraph> {
        let chiral = self.chiral.as_ref().ok_or_else(|| {
            crate::Error::Precondition("the dual principal graph is computed in chiral mode".into())
        })?;
        dual_principal_graph(&self.spec, chiral, &self.system)
    }

    pub fn report(&self) -> Report {
        let ring = &self.spec.ring;
        let names = |v: &[usize]| v.iter().map(|&i| ring.name(i).to_string()).collect::<Vec<_>>();
        let sys = &self.system;
        let gname = |i: usize| sys.generators[i].name.clone();
        let splits = sys
            .splits()
            .into_iter()
            .map(|i| SplitSummary {
                generator: gname(i),
                parts: sys.constituents(i).iter().map(|&(c, m)| (sys.irreducibles[c].name.clone(), m)).collect(),
            })
            .collect();
        let orbits = sys
            .orbits()
            .into_iter()
            .filter(|o| o.len() > 1)
            .map(|o| o.into_iter().map(gname).collect())
            .collect();
        let rational = as_rational(self.upsilon, 64, 1e-9).map(|r| format!("{r}"));
        Report {
            schema: crate::SCHEMA,
            name: self.spec.name.clone(),
            title: self.spec.title.clone(),
            mode: self.mode,
            ring: RingStats {
                algebra: ring.algebra().display_name().to_string(),
                level: ring.level().unwrap_or(0),
                labels: ring.len(),
                global_index: global_index(ring, &(0..ring.len()).collect::<Vec<_>>()),
                central_charge: self.md.c,
            },
            branching_nonzero: self.spec.nonzero_branching(),
            subsystem: SubsystemSummary {
                members: self.sub.members.len(),
                deg: names(self.sub.deg()),
                per: names(self.sub.per()),
            },
            z_validation: self.z_report.clone(),
            chiral_index: self.chiral_index.clone(),
            upsilon_ratio: self.upsilon,
            upsilon_rational: rational,
            generators: sys.len(),
            irreducible_count: sys.irreducibles.len(),
            target_index: self.target,
            splits,
            orbits,
            system: sys.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RingStats {
    pub algebra: String,
    pub level: u32,
    pub labels: usize,
    pub global_index: f64,
    pub central_charge: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubsystemSummary {
    pub members: usize,
    pub deg: Vec<String>,
    pub per: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitSummary {
    pub generator: String,
    pub parts: Vec<(String, u32)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub name: String,
    pub title: String,
    pub mode: Mode,
    pub ring: RingStats,
    pub branching_nonzero: usize,
    pub subsystem: SubsystemSummary,
    pub z_validation: ZReport,
    pub chiral_index: Option<ChiralIndexReport>,
    pub upsilon_ratio: f64,
    pub upsilon_rational: Option<String>,
    pub generators: usize,
    pub irreducible_count: usize,
    pub target_index: f64,
    pub splits: Vec<SplitSummary>,
    /// Groups of generators identified with one another.
    pub orbits: Vec<Vec<String>>,
    pub system: SectorSystem,
}

impl Report {
    /// Every invariant in the report holds.
    pub fn passed(&self) -> bool {
        self.z_validation.passed
            && self.chiral_index.as_ref().is_none_or(|c| c.passed)
            && self.system.certificate.as_ref().is_some_and(|c| c.passed)
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let r = &self.ring;
        let _ = writeln!(s, "{}: {} ({} mode)", self.name, self.title, self.mode.as_str());
        let _ = writeln!(
            s,
            "ring: {}_{} with {} labels, global index {:.6}, c = {:.6}",
            r.algebra, r.level, r.labels, r.global_index, r.central_charge
        );
        let _ = writeln!(s, "branching: {} nonzero coefficients", self.branching_nonzero);
        let z = &self.z_validation;
        let _ = writeln!(
            s,
            "modular invariant: {} (|[Z,S]| = {:.1e}, |[Z,T]| = {:.1e})",
            if z.passed { "valid" } else { "INVALID" },
            z.s_commutator,
            z.t_commutator
        );
        let _ = writeln!(
            s,
            "subsystem: {} labels, deg = {{{}}}, per = {{{}}}",
            self.subsystem.members,
            self.subsystem.deg.join(", "),
            self.subsystem.per.join(", ")
        );
        if let Some(c) = &self.chiral_index {
            let _ = writeln!(
                s,
                "chiral index identity: {} ({:.6} vs {:.6})",
                if c.passed { "holds" } else { "FAILS" },
                c.lhs,
                c.rhs
            );
        }
        let _ = writeln!(
            s,
            "upsilon ratio: {:.9}{}",
            self.upsilon_ratio,
            self.upsilon_rational.as_ref().map_or(String::new(), |q| format!(" = {q}"))
        );
        let _ = writeln!(s, "generators: {}", self.generators);
        let sys = &self.system;
        let unusual: Vec<String> = (0..sys.len())
            .filter(|&i| sys.gram[i][i] > 1)
            .map(|i| format!("<{0},{0}> = {1}", sys.generators[i].name, sys.gram[i][i]))
            .collect();
        if !unusual.is_empty() {
            let _ = writeln!(s, "  non-unit diagonal: {}", unusual.join(", "));
        }
        for o in &self.orbits {
            let _ = writeln!(s, "  identified: {}", o.join(" ~ "));
        }
        for sp in &self.splits {
            let parts: Vec<String> = sp
                .parts
                .iter()
                .map(|(n, m)| if *m == 1 { n.clone() } else { format!("{m}·{n}") })
                .collect();
            let _ = writeln!(s, "  split: {} = {}", sp.generator, parts.join(" + "));
        }
        let _ = writeln!(s, "irreducibles: {}", self.irreducible_count);
        for irr in &sys.irreducibles {
            let share = irr
                .share
                .map(|sh| format!("  [= {} · d({})]", sh.ratio(), sys.generators[sh.generator].name))
                .unwrap_or_default();
            let _ = writeln!(s, "  {:<16} d = {:.9}{}", irr.name, irr.dim, share);
        }
        if let Some(c) = &sys.certificate {
            let _ = writeln!(
                s,
                "certificate: {} (sum of dim^2 = {:.9}, target {:.9}, relative gap {:.1e})",
                if c.passed { "pass" } else { "FAIL" },
                c.achieved,
                c.target,
                c.relative_gap
            );
        }
        s
    }
}

/// One line of the bundled-example listing.
#[derive(Debug, Clone, Serialize)]
pub struct ExampleEntry {
    pub name: String,
    pub title: String,
    pub graph: String,
    pub algebra: String,
    pub level: u32,
    pub ambient: String,
    pub file: String,
    pub labels: usize,
    pub ambichiral: usize,
    pub chiral_vertices: usize,
    pub branching_nonzero: usize,
    pub golden: Option<String>,
}

/// Loads every bundled descriptor and summarizes it.
pub fn examples() -> Result<Vec<ExampleEntry>> {
    crate::data::BUILTINS
        .iter()
        .map(|b| {
            let spec = load_inclusion(b.name)?;
            Ok(ExampleEntry {
                name: b.name.to_string(),
                title: spec.title.clone(),
                graph: spec.graph_name.clone(),
                algebra: spec.ring.algebra().display_name().to_string(),
                level: spec.ring.level().unwrap_or(0),
                ambient: spec.ambient.clone(),
                file: b.file.to_string(),
                labels: spec.ring.len(),
                ambichiral: spec.n_ambichiral(),
                chiral_vertices: spec.chiral_graph.len(),
                branching_nonzero: spec.nonzero_branching(),
                golden: b.golden.map(str::to_string),
            })
        })
        .collect()
}
