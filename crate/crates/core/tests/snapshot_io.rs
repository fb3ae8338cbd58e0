use std::time::Instant;

use percolab::invasion::{grow, InvasionCluster, StopRule};
use percolab::{Error, WeightField};

#[test]
fn million_edge_snapshot_round_trips_quickly() {
    let c = grow(&WeightField::new(3), &StopRule::EdgeBudget { edges: 1_000_000 }).unwrap();
    assert_eq!(c.steps(), 1_000_000);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ipc.txt");
    let start = Instant::now();
    c.save(&path).unwrap();
    let back = InvasionCluster::load(&path).unwrap();
    let elapsed = start.elapsed();
    assert_eq!(back.edges(), c.edges());
    assert_eq!(back.weights(), c.weights());
    assert!(elapsed.as_secs_f64() < 5.0, "round trip took {elapsed:?}");
}

#[test]
fn truncated_snapshot_reports_the_line() {
    let c = grow(&WeightField::new(4), &StopRule::EdgeBudget { edges: 50 }).unwrap();
    let mut buf = Vec::new();
    c.write_snapshot(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let cut = text.lines().take(20).collect::<Vec<_>>().join("\n") + "\n21 0";
    match InvasionCluster::read_snapshot(cut.as_bytes()) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 21),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn snapshot_rejects_a_detached_edge() {
    let text = "# percolab-invasion version=1 seed=none stop={\"rule\":\"edge_budget\",\"edges\":1}\n1 5 5 6 5 0.25\n";
    let err = InvasionCluster::read_snapshot(text.as_bytes()).unwrap_err();
    assert!(err.to_string().starts_with("line 2:"), "{err}");
}
