// Crossing events of a critical rectangle: existence, the lowest crossing,
// the number of disjoint crossings and an open circuit in an annulus.
use percolab::percolation::{count_disjoint_crossings, has_crossing, has_open_circuit, lowest_crossing, CrossingSpec};
use percolab::{Annulus, Rect, WeightField, P_C};

fn main() -> percolab::Result<()> {
    let rect = Rect::with_size(24, 24)?;
    for seed in 0..6 {
        let f = WeightField::new(seed);
        let spec = CrossingSpec::horizontal(rect, P_C);
        let lowest = lowest_crossing(&f, &spec)?;
        println!(
            "seed {seed}: crossing {:5}  lowest length {:>4}  disjoint {}  circuit in A(4,12) {}",
            has_crossing(&f, &spec),
            lowest.map_or("-".to_string(), |p| p.len().to_string()),
            count_disjoint_crossings(&f, &spec)?,
            has_open_circuit(&f, P_C, &Annulus::centered(4, 12)?)?
        );
    }
    Ok(())
}
