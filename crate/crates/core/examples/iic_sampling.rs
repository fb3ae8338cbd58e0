// Rejection sampling of critical clusters conditioned to reach far away.
use percolab::analysis::iic_sample;

fn main() -> percolab::Result<()> {
    let (l, n) = (32, 16);
    for seed in 0..5 {
        let s = iic_sample(l, n, 100_000, seed)?;
        println!(
            "seed {seed}: accepted after {:>4} draws, window {} sites, path length {}",
            s.attempts,
            s.window.site_count(),
            s.certificate.len()
        );
    }
    Ok(())
}
