// Compare the time a walk spends crossing an annulus with the time it spends
// on the annulus backbone, at several tile sizes.
use percolab::analysis::{environment_stats, kesten_environment, kesten_trace, walk_seed};

fn main() -> percolab::Result<()> {
    let m = 8;
    let env_seed = 4;
    let env = kesten_environment(m, env_seed, None)?;
    println!("annulus A({m},{}): {} sites, backbone {}", env.n, env.gamma.site_count(), env.backbone.len());
    for q in [2, 4, 8] {
        let stats = environment_stats(&env, q)?;
        println!("q={q}: {stats:?}");
        for w in 0..3 {
            let Some(t) = kesten_trace(&env, q, walk_seed(env_seed, w), 1 << 30, Some(1.0))? else {
                continue;
            };
            println!(
                "  walk {w}: sigma*={} b={} lhs={:.2} rhs={:?} holds={:?} volume ratio {:?}",
                t.sigma_star, t.b, t.lhs, t.rhs, t.holds, t.volume_ratio
            );
        }
    }
    Ok(())
}
