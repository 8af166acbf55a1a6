//! Linearization operators, evolutionary derivatives and principal symbols.
//!
//!     cargo run --example linearization

use jetcalc::linops::{evolutionary_derivative, linearize};
use jetcalc::parse::parse;
use jetcalc::JetContext;

fn main() -> jetcalc::Result<()> {
    let ctx = JetContext::new(&["t", "x"], &["u"])?.with_functions(&["f"])?;
    let kpp = parse("u_t - u_xx - f(u)", &ctx)?;
    for op in linearize(&ctx, &kpp)? {
        println!("l_F = {}", op.display(&ctx));
    }
    let g = parse("u_x", &ctx)?;
    println!("Э_G(F) = {}", evolutionary_derivative(&ctx, &[g], &kpp)?);
    println!("symbol = {}", ctx.symbol(&kpp)?.scalar().display(&ctx));

    // With t of weight 2 the heat operator has a homogeneous symbol.
    let weighted = JetContext::new(&["t", "x"], &["u"])?.with_weights(&[2, 1])?;
    let heat = parse("u_t - u_xx", &weighted)?;
    println!("weighted symbol = {}", weighted.symbol(&heat)?.scalar().display(&weighted));
    Ok(())
}
