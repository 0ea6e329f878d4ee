//! Append-only JSON-lines store of exponent profiles keyed by the canonical
//! forms of `(H, T)`.
//!
//! Profiles are stored in the canonical labelling of `H` and translated back
//! to the caller's labelling on the way out. A record is only trusted after
//! `verify_profile` accepts it, so corrupt or edited lines are skipped and a
//! fresh record is appended after them.

use std::fs::{File, OpenOptions};
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use turan_core::blowup::{exponent_r, verify_profile, ExponentProfile};
use turan_core::graph::canonical_labeling;
use turan_core::{Graph, Result};

pub const TOOL_VERSION: &str = concat!("turan ", env!("CARGO_PKG_VERSION"));
pub const CACHE_ENV: &str = "TURAN_CACHE";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub key: (String, String),
    pub profile: ExponentProfile,
    pub tool_version: String,
    pub timestamp: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CacheStatus {
    Hit,
    /// Computed and appended to the store.
    Miss,
    /// Computed, but the store could not be written.
    ComputeOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CacheOutcome {
    pub profile: ExponentProfile,
    pub status: CacheStatus,
    pub key: (String, String),
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// `$TURAN_CACHE`, else `~/.cache/turan/profiles.jsonl`, else a relative
/// `profiles.jsonl` when no home directory is known.
pub fn default_store() -> PathBuf {
    if let Some(p) = std::env::var_os(CACHE_ENV).filter(|p| !p.is_empty()) {
        return PathBuf::from(p);
    }
    match std::env::var_os("HOME").filter(|h| !h.is_empty()) {
        Some(home) => PathBuf::from(home).join(".cache").join("turan").join("profiles.jsonl"),
        None => PathBuf::from("profiles.jsonl"),
    }
}

/// Every parseable record, in file order. A missing store reads as empty.
/// Reads take no lock: appends are single writes of whole lines, so a
/// reader sees some prefix, and a torn last line fails to parse and is
/// skipped.
pub fn read_records(store: &Path) -> io::Result<Vec<CacheRecord>> {
    let text = match std::fs::read_to_string(store) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    Ok(text.lines().filter_map(|line| serde_json::from_str(line).ok()).collect())
}

/// Appends one record under an exclusive advisory lock.
pub fn append_record(store: &Path, record: &CacheRecord) -> io::Result<()> {
    if let Some(dir) = store.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let file: File = OpenOptions::new().create(true).append(true).open(store)?;
    file.lock()?;
    // via Value so the keys come out sorted
    let value = serde_json::to_value(record).map_err(io::Error::other)?;
    let mut line = value.to_string();
    line.push('\n');
    let written = (&file).write_all(line.as_bytes());
    file.unlock()?;
    written
}

pub fn lookup_or_compute(h_graph: &Graph, tree: &Graph, store: &Path) -> Result<CacheOutcome> {
    let (h_canon, perm) = canonical_labeling(h_graph)?;
    let (t_canon, t_perm) = canonical_labeling(tree)?;
    let hc = h_graph.permute(&perm);
    let tc = tree.permute(&t_perm);
    let key = (h_canon, t_canon);
    let mut warning = None;

    match read_records(store) {
        Ok(records) => {
            let hit = records
                .into_iter()
                .filter(|rec| rec.key == key)
                .find(|rec| verify_profile(&hc, &tc, &rec.profile).valid);
            if let Some(rec) = hit {
                let profile = to_input_labels(rec.profile, &perm);
                return Ok(CacheOutcome { profile, status: CacheStatus::Hit, key, warning });
            }
        }
        Err(e) => warning = Some(format!("cache store {} unreadable: {e}", store.display())),
    }

    let profile = exponent_r(&hc, &tc)?;
    let record = CacheRecord {
        key: key.clone(),
        profile: profile.clone(),
        tool_version: TOOL_VERSION.to_string(),
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
    };
    let status = match append_record(store, &record) {
        Ok(()) if warning.is_none() => CacheStatus::Miss,
        Ok(()) => CacheStatus::ComputeOnly,
        Err(e) => {
            warning = Some(format!("cache store {} not writable, computing only: {e}", store.display()));
            CacheStatus::ComputeOnly
        }
    };
    Ok(CacheOutcome { profile: to_input_labels(profile, &perm), status, key, warning })
}

/// `perm[v]` is the canonical name of input vertex `v`.
fn to_input_labels(profile: ExponentProfile, perm: &[usize]) -> ExponentProfile {
    match profile {
        ExponentProfile::Finite { r, witness, t_used } => {
            let mut inverse = vec![0; perm.len()];
            for (v, &c) in perm.iter().enumerate() {
                inverse[c] = v;
            }
            let mut witness: Vec<usize> = witness.into_iter().map(|c| inverse[c]).collect();
            witness.sort_unstable();
            ExponentProfile::Finite { r, witness, t_used }
        }
        zero => zero,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_is_translated_to_input_labels() {
        // canonical vertex 0 is input vertex 2
        let p = ExponentProfile::Finite { r: 2, witness: vec![0], t_used: 4 };
        let out = to_input_labels(p, &[1, 2, 0]);
        assert_eq!(out.witness(), Some(&[2][..]));
    }

    #[test]
    fn translated_witness_verifies_on_the_input_graph() {
        let dir = tempfile::tempdir().unwrap();
        let store = dir.path().join("p.jsonl");
        // a star on 4 leaves relabelled so the centre is vertex 3
        let h = Graph::from_edges(5, &[(3, 0), (3, 1), (3, 2), (3, 4)]).unwrap();
        let t = Graph::path(4);
        for _ in 0..2 {
            let out = lookup_or_compute(&h, &t, &store).unwrap();
            assert!(verify_profile(&h, &t, &out.profile).valid, "{out:?}");
            assert_eq!(out.profile.witness(), Some(&[3][..]));
        }
    }
}
