// Finite-size correlation lengths above criticality and the scale table
// built from them.
use percolab::analysis::{correlation_length, scale_table, DEFAULT_EPS};

fn main() -> percolab::Result<()> {
    let grid = [4, 6, 8, 11, 16, 23, 32, 45, 64];
    let mut table = Vec::new();
    for p in [0.56, 0.6, 0.65, 0.7, 0.8, 0.9] {
        let c = correlation_length(p, DEFAULT_EPS, 200, &grid, 2)?;
        println!("p={p:.2}  L={:?}", c.value);
        table.push((p, c.value));
    }

    // piecewise-constant interpolation of the measured lengths
    let length = |p: f64| table.iter().find(|(q, _)| *q >= p).and_then(|(_, l)| l.map(|l| l as f64));
    let t = scale_table(1e5, 1.0, length)?;
    for row in &t.rows {
        println!("j={} target {:.1} p={:?}", row.j, row.target, row.p);
    }
    Ok(())
}
