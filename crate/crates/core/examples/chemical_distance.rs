// Graph distance from the origin to the box boundary inside invasion windows.
use percolab::analysis::{chemical_distance_scan, HostKind, ScanSettings};
use percolab::invasion::StopRule;

fn main() -> percolab::Result<()> {
    let mut settings = ScanSettings::new(HostKind::Ipc, vec![8, 16, 32, 64], 8, 0, 5);
    settings.stop = Some(StopRule::for_window(64));
    let scan = chemical_distance_scan(&settings)?;
    for r in &scan.rows {
        println!("env {:>2}  n={:<3} distance {:?}", r.environment, r.n, r.distance);
    }
    if let Some(fit) = &scan.fit {
        println!("exponent {:.3} CI [{:.3}, {:.3}]", fit.slope, fit.ci95.0, fit.ci95.1);
    }
    Ok(())
}
