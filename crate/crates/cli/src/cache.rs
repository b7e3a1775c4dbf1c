//! Catalog cache: a JSON-lines catalog file plus a manifest recording, per
//! degree, the construction route, entry count and completeness tier. A
//! rebuild with an unchanged configuration is a cache hit and performs no
//! group construction.

use anyhow::{bail, Context, Result};
use orbitcheck_core::zoo::{self, Catalog, CATALOG_SCHEMA_VERSION};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub const CACHE_ENV: &str = "ORBITCHECK_CACHE";
pub const DEFAULT_CACHE_DIR: &str = ".orbitcheck-cache";

#[derive(Debug, Serialize, Deserialize)]
pub struct DegreeManifest {
    pub entries: usize,
    pub tier: u8,
    pub completeness: String,
    pub routes: Vec<String>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
pub struct Manifest {
    pub schema: u32,
    pub config_hash: String,
    pub degrees: BTreeMap<u64, DegreeManifest>,
}

pub struct BuildStats {
    pub built: Vec<u64>,
    pub cached: Vec<u64>,
}

pub fn cache_dir(cli_value: Option<&Path>) -> PathBuf {
    if let Some(p) = cli_value {
        return p.to_path_buf();
    }
    if let Ok(env) = std::env::var(CACHE_ENV) {
        if !env.is_empty() {
            return PathBuf::from(env);
        }
    }
    PathBuf::from(DEFAULT_CACHE_DIR)
}

fn catalog_path(dir: &Path) -> PathBuf {
    dir.join(format!("catalog-v{CATALOG_SCHEMA_VERSION}.jsonl"))
}

fn manifest_path(dir: &Path) -> PathBuf {
    dir.join("manifest.json")
}

fn config_hash() -> String {
    // The construction is parameterized by the schema version and the route
    // table constants; degree coverage is tracked per degree.
    let mut hasher = Sha256::new();
    hasher.update(format!(
        "catalog-v{};gl-cap={};tier1={:?};tier2={:?}",
        CATALOG_SCHEMA_VERSION,
        zoo::EXHAUSTIVE_GL_CAP,
        zoo::TIER1_DEGREES,
        zoo::TIER2_DEGREES
    ));
    format!("{:x}", hasher.finalize())
}

pub fn load_manifest(dir: &Path) -> Result<Option<Manifest>> {
    let path = manifest_path(dir);
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&path)
        .with_context(|| format!("reading {}", path.display()))?;
    let manifest: Manifest = serde_json::from_str(&text).context("parsing manifest")?;
    Ok(Some(manifest))
}

/// Ensures the cache covers `degrees`; builds only the missing ones.
pub fn ensure_catalog(dir: &Path, degrees: &[u64]) -> Result<(Catalog, BuildStats)> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("creating cache directory {}", dir.display()))?;
    let hash = config_hash();
    let mut manifest = match load_manifest(dir)? {
        Some(m) if m.config_hash == hash && m.schema == CATALOG_SCHEMA_VERSION => m,
        Some(_) => Manifest {
            schema: CATALOG_SCHEMA_VERSION,
            config_hash: hash.clone(),
            degrees: BTreeMap::new(),
        },
        None => Manifest {
            schema: CATALOG_SCHEMA_VERSION,
            config_hash: hash.clone(),
            degrees: BTreeMap::new(),
        },
    };
    let path = catalog_path(dir);
    let mut catalog = if path.exists() && !manifest.degrees.is_empty() {
        zoo::catalog_load(&path)?
    } else {
        Catalog::default()
    };
    let mut stats = BuildStats {
        built: Vec::new(),
        cached: Vec::new(),
    };
    for &degree in degrees {
        if manifest.degrees.contains_key(&degree) && catalog.entries.contains_key(&degree) {
            stats.cached.push(degree);
            continue;
        }
        let routes = zoo::degree_routes(degree).map_err(|e| anyhow::anyhow!("{e}"))?;
        let built = zoo::build_catalog(&[degree]).map_err(|e| anyhow::anyhow!("{e}"))?;
        let meta = built
            .meta
            .get(&degree)
            .ok_or_else(|| anyhow::anyhow!("catalog build produced no metadata"))?
            .clone();
        let entries = built.entries.get(&degree).cloned().unwrap_or_default();
        manifest.degrees.insert(
            degree,
            DegreeManifest {
                entries: entries.len(),
                tier: routes.tier,
                completeness: meta.completeness.clone(),
                routes: meta.routes.clone(),
            },
        );
        catalog.entries.insert(degree, entries);
        catalog.meta.insert(degree, meta);
        stats.built.push(degree);
    }
    if !stats.built.is_empty() {
        zoo::catalog_store(&catalog, &path)?;
        let text = serde_json::to_string_pretty(&manifest)?;
        std::fs::write(manifest_path(dir), text)?;
    }
    // Re-attach metadata for cached degrees (catalog_load derives it).
    for (&d, m) in &manifest.degrees {
        if !catalog.meta.contains_key(&d) && catalog.entries.contains_key(&d) {
            catalog.meta.insert(
                d,
                zoo::DegreeMeta {
                    tier: m.tier,
                    complete: m.completeness.starts_with("complete"),
                    completeness: m.completeness.clone(),
                    routes: m.routes.clone(),
                },
            );
        }
    }
    for &degree in degrees {
        if !catalog.entries.contains_key(&degree) {
            bail!("cache inconsistent: degree {degree} missing after build");
        }
    }
    Ok((catalog, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_is_idempotent() {
        let dir = tempfile::tempdir().unwrap();
        let (cat1, stats1) = ensure_catalog(dir.path(), &[4, 8]).unwrap();
        assert_eq!(stats1.built, vec![4, 8]);
        assert_eq!(cat1.at(4).len(), 2);
        let (cat2, stats2) = ensure_catalog(dir.path(), &[4, 8]).unwrap();
        assert!(stats2.built.is_empty());
        assert_eq!(stats2.cached, vec![4, 8]);
        assert_eq!(cat2.at(4).len(), 2);
        // Incremental extension builds only the new degree.
        let (_, stats3) = ensure_catalog(dir.path(), &[4, 9]).unwrap();
        assert_eq!(stats3.built, vec![9]);
        assert_eq!(stats3.cached, vec![4]);
    }

    #[test]
    fn env_and_flag_resolution() {
        assert_eq!(
            cache_dir(Some(Path::new("/tmp/x"))),
            PathBuf::from("/tmp/x")
        );
    }
}
