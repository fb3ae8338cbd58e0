// Local times of a walk on a critical cluster, the backbone re-entry
// property and an empirical Gaussian tail for the backbone walk.
use percolab::metrics::{backbone, BackboneQuery};
use percolab::walk::{cv_tail, exit_time, local_times, reentry_violations};
use percolab::{analysis::iic_sample, ORIGIN};

fn main() -> percolab::Result<()> {
    let n = 12;
    let sample = iic_sample(2 * n, n, 100_000, 9)?;
    let g = &sample.window;
    let t = exit_time(g, ORIGIN, n, 1, 1 << 28)?;
    println!("exit time {} (capped: {})", t.tau, t.capped);
    let trace = t.trace.expect("exit_time records the trace").sites;

    let ledger = local_times(&trace, t.tau)?;
    println!("{} sites visited, total local time {}", ledger.visited(), ledger.total());
    let mut csv = Vec::new();
    ledger.write_csv(&mut csv)?;
    println!("{}", String::from_utf8_lossy(&csv).lines().take(4).collect::<Vec<_>>().join("\n"));

    let bb = backbone(g, &BackboneQuery::origin_to_boundary(g, n))?;
    println!("re-entry violations: {}", reentry_violations(&trace, &bb));
    if bb.contains(&ORIGIN) {
        for row in cv_tail(g, &bb, ORIGIN, &[16, 64], &[1.0, 2.0, 3.0], 200, 2)? {
            println!("k={:<3} lambda={} tail {:.3}", row.k, row.lambda, row.frequency);
        }
    }
    Ok(())
}
