//! Run manifests.

use std::collections::BTreeMap;

use fblab_core::fields::{GRAPH_INTERPOLATION_SPEC, INTERPOLATION_SPEC};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::params::Params;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Version of the CSV column layouts; bump on any schema change.
pub const CSV_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub id: String,
    pub experiment: String,
    pub parameters: BTreeMap<String, String>,
    pub master_seed: u64,
    pub profile: String,
    pub interpolation: BTreeMap<String, String>,
    pub tool_version: String,
    pub csv_schema: u32,
    pub started_unix: u64,
    pub finished_unix: u64,
    /// Tolerances attached to solver output, which is reproducible only up to them.
    pub tolerance_tags: BTreeMap<String, String>,
    pub files: Vec<FileEntry>,
}

pub fn sha256_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

/// Identifier derived from everything that determines the numerical output.
pub fn manifest_id(params: &Params, seed: u64) -> String {
    let mut text = format!("fblab {TOOL_VERSION}\nschema {CSV_SCHEMA}\nexperiment {}\nseed {seed}\n", params.experiment);
    for (k, v) in &params.values {
        text.push_str(&format!("{k}={v}\n"));
    }
    text.push_str(INTERPOLATION_SPEC);
    text.push('\n');
    text.push_str(GRAPH_INTERPOLATION_SPEC);
    sha256_hex(text.as_bytes())[..16].to_string()
}

pub fn interpolation() -> BTreeMap<String, String> {
    BTreeMap::from([
        ("twist".to_string(), INTERPOLATION_SPEC.to_string()),
        ("graph".to_string(), GRAPH_INTERPOLATION_SPEC.to_string()),
    ])
}

pub fn profile_label(params: &Params) -> String {
    let get = |k: &str| params.values.get(k).cloned();
    match params.experiment.as_str() {
        "blowup" => return "twist loglog".to_string(),
        "phase" | "corkscrew" => return format!("twist power:{}", get("p").unwrap_or_default()),
        _ => {}
    }
    match (get("domain").as_deref(), get("profile"), get("amplitude")) {
        (Some("graph"), _, Some(a)) => format!("graph amplitude {a}"),
        (_, Some(p), _) => format!("twist {p}"),
        (_, None, Some(a)) => format!("graph amplitude {a}"),
        _ => "n/a".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::p;

    #[test]
    fn id_depends_on_parameters_and_seed_only() {
        let defs = [p("rho", "100", "")];
        let a = Params::resolve("x", &defs, None, &[]).unwrap();
        let b = Params::resolve("x", &defs, None, &[("rho".into(), "101".into())]).unwrap();
        assert_eq!(manifest_id(&a, 1), manifest_id(&a, 1));
        assert_ne!(manifest_id(&a, 1), manifest_id(&b, 1));
        assert_ne!(manifest_id(&a, 1), manifest_id(&a, 2));
        assert_eq!(manifest_id(&a, 1).len(), 16);
    }

    #[test]
    fn sha256_of_abc() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
