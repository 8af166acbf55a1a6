//! Ideals of differential polynomials: normal forms under different orders
//! and localization.
//!
//!     cargo run --example groebner

use jetcalc::ideal::{Ideal, IdealOptions, MonomialOrder};
use jetcalc::parse::parse;
use jetcalc::JetContext;

fn main() -> jetcalc::Result<()> {
    let ctx = JetContext::new(&["t", "x"], &["u"])?;
    let eqs = [parse("u_t - u_xx", &ctx)?, parse("u_x - u", &ctx)?];
    let gens = ctx.prolong_system(&eqs, 2)?;
    let e = parse("u_tx*u + u_t^2", &ctx)?;
    for order in [MonomialOrder::JetLexBlock, MonomialOrder::BlockGrevlex, MonomialOrder::Grevlex] {
        let ideal = Ideal::new(&gens, &[], ctx.weights(), IdealOptions { order, ..Default::default() })?;
        println!("{order:?}: {} basis elements, NF = {}", ideal.basis_len(), ideal.normal_form(&e)?.value);
    }

    // u_x*u_t - u_t*u is only a combination after dividing by u_x - u.
    let g = [parse("(u_x - u)*(u_t - u)", &ctx)?];
    let plain = Ideal::new(&g, &[], ctx.weights(), IdealOptions::default())?;
    let local = Ideal::localized(&g, &[parse("u_x - u", &ctx)?], &[], ctx.weights(), IdealOptions::default())?;
    let e = parse("u_t - u", &ctx)?;
    println!("plain: {}, localized: {}", plain.contains(&e)?, local.contains(&e)?);
    Ok(())
}
