use std::fs;

use turan_cli::cache::{append_record, lookup_or_compute, read_records, CacheRecord, CacheStatus};
use turan_core::blowup::{verify_profile, ExponentProfile};
use turan_core::Graph;

fn lines(path: &std::path::Path) -> usize {
    fs::read_to_string(path).map(|t| t.lines().count()).unwrap_or(0)
}

#[test]
fn empty_store_computes_then_hits() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("nested").join("profiles.jsonl");
    let (k2, p3) = (Graph::path(2), Graph::path(3));

    let first = lookup_or_compute(&k2, &p3, &store).unwrap();
    assert_eq!(first.status, CacheStatus::Miss);
    assert_eq!(first.profile.r(), Some(1));
    assert_eq!(lines(&store), 1);

    let second = lookup_or_compute(&k2, &p3, &store).unwrap();
    assert_eq!(second.status, CacheStatus::Hit);
    assert_eq!(second.profile, first.profile);
    assert_eq!(lines(&store), 1);
}

#[test]
fn tampered_record_is_ignored_and_superseded() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("p.jsonl");
    let (k2, p3) = (Graph::path(2), Graph::path(3));
    lookup_or_compute(&k2, &p3, &store).unwrap();
    let tampered = fs::read_to_string(&store).unwrap().replace("\"r\":1", "\"r\":2");
    assert!(tampered.contains("\"r\":2"));
    fs::write(&store, format!("not json at all\n{tampered}")).unwrap();

    let out = lookup_or_compute(&k2, &p3, &store).unwrap();
    assert_eq!(out.status, CacheStatus::Miss);
    assert_eq!(out.profile.r(), Some(1));
    assert_eq!(lines(&store), 3);
    assert_eq!(lookup_or_compute(&k2, &p3, &store).unwrap().status, CacheStatus::Hit);
    assert_eq!(lines(&store), 3);
}

#[test]
fn isomorphic_inputs_share_a_record() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("p.jsonl");
    let tree = Graph::path(4);
    let a = Graph::star(3);
    let b = Graph::from_edges(4, &[(2, 0), (2, 1), (2, 3)]).unwrap();
    assert_eq!(lookup_or_compute(&a, &tree, &store).unwrap().status, CacheStatus::Miss);
    let out = lookup_or_compute(&b, &tree, &store).unwrap();
    assert_eq!(out.status, CacheStatus::Hit);
    assert_eq!(out.profile.witness(), Some(&[2][..]));
    assert!(verify_profile(&b, &tree, &out.profile).valid);
}

#[test]
fn zero_profiles_are_cached_too() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("p.jsonl");
    let out = lookup_or_compute(&Graph::path(4), &Graph::path(3), &store).unwrap();
    assert_eq!(out.profile, ExponentProfile::Zero { t_used: 3 });
    let again = lookup_or_compute(&Graph::path(4), &Graph::path(3), &store).unwrap();
    assert_eq!(again.status, CacheStatus::Hit);
}

#[test]
fn unwritable_store_falls_back_to_computing() {
    let dir = tempfile::tempdir().unwrap();
    // a regular file where a directory is expected
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let store = blocker.join("p.jsonl");
    let out = lookup_or_compute(&Graph::complete(3), &Graph::star(3), &store).unwrap();
    assert_eq!(out.status, CacheStatus::ComputeOnly);
    assert!(out.warning.is_some());
    assert_eq!(out.profile.r(), Some(1));
}

#[test]
fn records_carry_version_and_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("p.jsonl");
    lookup_or_compute(&Graph::complete(3), &Graph::star(3), &store).unwrap();
    let recs = read_records(&store).unwrap();
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0].key, ("Bw".to_string(), "CF".to_string()));
    assert!(recs[0].tool_version.starts_with("turan "));
    assert!(chrono::DateTime::parse_from_rfc3339(&recs[0].timestamp).is_ok(), "{}", recs[0].timestamp);
}

#[test]
fn concurrent_appends_keep_whole_lines() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("p.jsonl");
    let record = CacheRecord {
        key: ("A_".into(), "BW".into()),
        profile: ExponentProfile::Finite { r: 1, witness: vec![], t_used: 3 },
        tool_version: "test".into(),
        timestamp: "2026-01-01T00:00:00Z".into(),
    };
    std::thread::scope(|s| {
        for _ in 0..8 {
            s.spawn(|| {
                for _ in 0..25 {
                    append_record(&store, &record).unwrap();
                }
            });
        }
        // a reader running alongside only ever sees whole records
        s.spawn(|| {
            for _ in 0..50 {
                for rec in read_records(&store).unwrap() {
                    assert_eq!(rec, record);
                }
            }
        });
    });
    let text = fs::read_to_string(&store).unwrap();
    assert_eq!(text.lines().count(), 200);
    assert_eq!(read_records(&store).unwrap().len(), 200);
}
