//! Mayer brackets: `{F, G}` reduced modulo the prolonged pair.
//!
//!     cargo run --example mayer

use jetcalc::compat::EquationSystem;
use jetcalc::parse::parse;
use jetcalc::{Expr, JetContext};

fn main() -> jetcalc::Result<()> {
    // Laplace with a square-root gradient constraint.
    let ctx = JetContext::new(&["t", "x"], &["u"])?.with_parameters(&["alpha"])?;
    let f = parse("u_tt + u_xx - 1", &ctx)?;
    let g = parse("(u_t^2 + u_x^2)/(4*u) - alpha", &ctx)?;
    let sys = EquationSystem::new(&ctx, vec![f, g])?;
    let red = sys.mayer_reduce()?;
    println!("[F, G] = {}", red.value);
    for d in &red.cleared {
        println!("  assuming {d} != 0");
    }
    let scaled = sys.mayer_reduce_with(&parse("2*u", &ctx)?, &parse("(1 - 2*alpha)*(1 - 4*alpha)", &ctx)?)?;
    println!("2u [F, G] - (1 - 2 alpha)(1 - 4 alpha) = {}", scaled.value);

    // Reaction-diffusion with an arbitrary source term.
    let ctx = JetContext::new(&["t", "x"], &["u"])?.with_functions(&["f"])?;
    let f = parse("u_t - u_xx - f(u)", &ctx)?;
    let g = parse("u_x*u_xxx - u_xx^2 - f(u)*u_xx + f'(u)*u_x^2", &ctx)?;
    let red = EquationSystem::new(&ctx, vec![f, g])?.mayer_reduce()?;
    println!("KPP: [F, G] = {}", red.value);
    assert_eq!(red.value, Expr::zero());
    Ok(())
}
