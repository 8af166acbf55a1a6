//! Compatibility verdicts and one projection step.
//!
//!     cargo run --example compatibility

use jetcalc::compat::{is_compatible_pair, EquationSystem};
use jetcalc::ideal::IdealOptions;
use jetcalc::parse::parse;
use jetcalc::JetContext;

fn main() -> jetcalc::Result<()> {
    let ctx = JetContext::new(&["t", "x"], &["u"])?;
    let heat = parse("u_t - u_xx", &ctx)?;

    let g = parse(
        "(u_t^2 + u_x^2)*cosh(2*x) - 2*u_t*u_x*sinh(2*x) + 2*exp(2*t)*(u_t - u)",
        &ctx,
    )?;
    let r = is_compatible_pair(&ctx, &heat, &g, IdealOptions::default())?;
    println!("cosh constraint: {} (transversal {})", r.verdict, r.transversal);

    let g = parse("t*u_t - x*u_x + 3*x^3", &ctx)?;
    let sys = EquationSystem::new(&ctx, vec![heat.clone(), g])?;
    let r = sys.check_compatibility()?;
    println!("scaling constraint: {}", r.verdict);
    for c in sys.integrability_conditions()? {
        println!("  add {c} = 0");
    }

    let sys = EquationSystem::new(&ctx, vec![parse("u_t - u - 1", &ctx)?, parse("u_x - 1", &ctx)?])?;
    println!("u_t = u + 1, u_x = 1: {}", sys.check_compatibility()?.verdict);
    Ok(())
}
