//! Bundled inclusion descriptors and golden graphs.
//!
//! Files are compiled into the binary; setting `SECTOR_DOUBLER_DATA` to a
//! directory makes every lookup read `<dir>/<file>` (and `<dir>/golden/<file>`)
//! from disk instead.

use std::path::PathBuf;

use crate::error::{Error, Result};

pub const DATA_ENV: &str = "SECTOR_DOUBLER_DATA";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Builtin {
    pub name: &'static str,
    pub file: &'static str,
    pub golden: Option<&'static str>,
    contents: &'static str,
}

pub const BUILTINS: [Builtin; 5] = [
    Builtin {
        name: "e6",
        file: "e6_su2_10.json",
        golden: Some("e6_dual_graph.json"),
        contents: include_str!("../data/e6_su2_10.json"),
    },
    Builtin {
        name: "e8",
        file: "e8_su2_28.json",
        golden: Some("e8_dual_graph.json"),
        contents: include_str!("../data/e8_su2_28.json"),
    },
    Builtin {
        name: "e8cc",
        file: "e8cc_su3_5.json",
        golden: Some("e8cc_dual_graph.json"),
        contents: include_str!("../data/e8cc_su3_5.json"),
    },
    Builtin {
        name: "e12",
        file: "e12_su3_9.json",
        golden: None,
        contents: include_str!("../data/e12_su3_9.json"),
    },
    Builtin {
        name: "e24",
        file: "e24_su3_21.json",
        golden: None,
        contents: include_str!("../data/e24_su3_21.json"),
    },
];

const GOLDENS: [(&str, &str); 3] = [
    ("e6_dual_graph.json", include_str!("../data/golden/e6_dual_graph.json")),
    ("e8_dual_graph.json", include_str!("../data/golden/e8_dual_graph.json")),
    ("e8cc_dual_graph.json", include_str!("../data/golden/e8cc_dual_graph.json")),
];

pub fn builtin(name: &str) -> Option<&'static Builtin> {
    BUILTINS.iter().find(|b| b.name == name)
}

/// The override directory, if `SECTOR_DOUBLER_DATA` is set and non-empty.
pub fn data_dir() -> Option<PathBuf> {
    std::env::var_os(DATA_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

fn read(path: PathBuf) -> Result<(String, String)> {
    let origin = path.display().to_string();
    std::fs::read_to_string(&path)
        .map(|text| (text, origin.clone()))
        .map_err(|source| Error::Io { path: origin, source })
}

/// Text of a bundled descriptor together with the origin used in messages.
pub fn read_builtin(b: &Builtin) -> Result<(String, String)> {
    match data_dir() {
        Some(dir) => read(dir.join(b.file)),
        None => Ok((b.contents.to_string(), format!("<bundled>/{}", b.file))),
    }
}

/// Text of a bundled golden graph.
pub fn read_golden(file: &str) -> Result<(String, String)> {
    if let Some(dir) = data_dir() {
        return read(dir.join("golden").join(file));
    }
    GOLDENS
        .iter()
        .find(|(f, _)| *f == file)
        .map(|(f, text)| (text.to_string(), format!("<bundled>/golden/{f}")))
        .ok_or_else(|| Error::Io {
            path: file.to_string(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such bundled golden"),
        })
}

/// Reads a user-supplied file.
pub fn read_path(path: &str) -> Result<(String, String)> {
    read(PathBuf::from(path))
}

/// Writes every bundled file under `dir`, mirroring the override layout.
pub fn export_bundle(dir: &std::path::Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir.join("golden"))?;
    for b in &BUILTINS {
        std::fs::write(dir.join(b.file), b.contents)?;
    }
    for (f, text) in &GOLDENS {
        std::fs::write(dir.join("golden").join(f), text)?;
    }
    Ok(())
}
