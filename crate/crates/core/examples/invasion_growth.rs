// Grow an invasion cluster, look at its window and outlets, and round-trip
// the snapshot format.
use percolab::invasion::{grow, InvasionCluster, StopRule};
use percolab::{BoxRegion, WeightField};

fn main() -> percolab::Result<()> {
    let n = 32;
    let field = WeightField::new(7);
    let cluster = grow(&field, &StopRule::for_window(n))?;
    let window = cluster.window(BoxRegion::centered(n))?;
    println!("invaded {} edges, reach {}", cluster.steps(), cluster.reach());
    println!("window S({n}): {} sites, {} edges", window.site_count(), window.edge_count());

    let stats = cluster.trace_stats();
    println!("{} outlets", stats.outlet_steps.len());
    for (step, w) in stats.outlet_steps.iter().zip(&stats.record_weights).rev().take(5) {
        println!("  step {step:>6}  weight {w:.6}");
    }

    let mut buf = Vec::new();
    cluster.write_snapshot(&mut buf)?;
    let back = InvasionCluster::read_snapshot(buf.as_slice())?;
    assert_eq!(back.edges(), cluster.edges());
    println!("snapshot: {} bytes, round trip ok", buf.len());
    Ok(())
}
