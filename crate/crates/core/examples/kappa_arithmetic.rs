// Exact exponent arithmetic on rational inputs.
use percolab::analysis::{
    exit_exponent_bound, kappa_bound, kappa_from_exit_bound, parse_rational, KappaInputs, KappaMode, Variant,
};

fn main() -> percolab::Result<()> {
    let hex = KappaInputs::parse("5/48", "17/48", Variant::Hexagonal)?;
    println!("hexagonal kappa         {}", kappa_bound(&hex)?);
    println!("exit-bound form         {}", kappa_from_exit_bound(&hex)?);
    let lower = hex.clone().with_mode(KappaMode::Eta2LowerBound);
    println!("eta2 >= 1/4 lower bound {}", kappa_bound(&lower)?);

    let square = KappaInputs::parse("0.1", "0.35", Variant::Square)?;
    println!("square kappa            {}", kappa_bound(&square)?);
    let (s1, s2) = (parse_rational("1")?, parse_rational("5/4")?);
    println!("exit exponent bound     {}", exit_exponent_bound(&s1, &s2, &square)?);
    Ok(())
}
