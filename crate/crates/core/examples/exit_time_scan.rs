// Quenched mean exit times on invasion windows and on the full lattice.
use percolab::analysis::{exit_time_scan, HostKind, ScanSettings};

fn main() -> percolab::Result<()> {
    for host in [HostKind::FullLattice, HostKind::Ipc] {
        let settings = ScanSettings::new(host, vec![4, 8, 16, 32], 6, 10, 1);
        let scan = exit_time_scan(&settings)?;
        println!("{host}:");
        for &n in &settings.radii {
            let taus: Vec<f64> = scan.rows.iter().filter(|r| r.n == n).map(|r| r.mean_tau).collect();
            let mean = taus.iter().sum::<f64>() / taus.len() as f64;
            println!("  n={n:<3} mean tau {mean:>10.1}");
        }
        if let Some(fit) = &scan.fit {
            println!("  exponent {:.3} CI [{:.3}, {:.3}]", fit.slope, fit.ci95.0, fit.ci95.1);
        }
    }
    Ok(())
}
