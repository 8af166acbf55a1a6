//! Symmetry checks against the heat equation.
//!
//!     cargo run --example symmetry

use jetcalc::compat::symmetry_check;
use jetcalc::ideal::IdealOptions;
use jetcalc::parse::parse;
use jetcalc::JetContext;

fn main() -> jetcalc::Result<()> {
    let ctx = JetContext::new(&["t", "x"], &["u"])?;
    let heat = parse("u_t - u_xx", &ctx)?;
    for g in ["u_x", "2*t*u_x + x*u", "x^2 + 2*t", "x^2", "t*u_t - x*u_x + 3*x^3"] {
        let r = symmetry_check(&ctx, &heat, &parse(g, &ctx)?, None, IdealOptions::default())?;
        let verdict = if r.obstructions.is_empty() { "symmetry" } else { "not a symmetry" };
        println!("{g}: {verdict}");
    }
    Ok(())
}
