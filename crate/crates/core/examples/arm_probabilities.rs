// Arm probabilities at criticality on shared replica seeds, with a power-law
// fit for each kind and the normalised two-arm ratios.
use percolab::analysis::{arm_scan, fit_exponent, two_arm_ratios};
use percolab::percolation::ArmKind;
use percolab::P_C;

fn main() -> percolab::Result<()> {
    let radii = [4, 8, 16, 32];
    let replicas = 400;
    for kind in ArmKind::ALL {
        let scan = arm_scan(kind, &radii, P_C, replicas, 11)?;
        for (n, e) in &scan {
            println!("{kind:>22}  n={n:<3} {:.4} ± {:.4}", e.mean, e.stderr);
        }
        let pts: Vec<(f64, f64)> = scan.iter().map(|(n, e)| (*n as f64, e.mean)).collect();
        if let Ok(fit) = fit_exponent(&pts) {
            println!("{kind:>22}  slope {:.3} CI [{:.3}, {:.3}]", fit.slope, fit.ci95.0, fit.ci95.1);
        }
        if kind == ArmKind::TwoArmBox {
            for r in two_arm_ratios(&scan).iter().filter(|r| r.r < r.s) {
                println!("  rho({})·{} / rho({})·{} = {:.3}", r.r, r.r, r.s, r.s, r.normalized.mean);
            }
        }
    }
    Ok(())
}
