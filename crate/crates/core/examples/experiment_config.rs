// Run an experiment from a TOML description and print where the results went.
use percolab::harness::{run, ExperimentConfig};

const CONFIG: &str = r#"
seed = 3
plots = true

[experiment]
kind = "arms"
kinds = ["one_arm_box", "two_arm_box"]
radii = [4, 8, 16]
replicas = 200
"#;

fn main() -> percolab::Result<()> {
    let mut cfg = ExperimentConfig::from_toml(CONFIG)?;
    cfg.output = Some(std::env::temp_dir().join("percolab-example"));
    println!("{}", cfg.to_toml()?);
    let report = run(&cfg)?;
    println!("wrote {:?} to {}", report.manifest.outputs, report.dir.display());
    Ok(())
}
