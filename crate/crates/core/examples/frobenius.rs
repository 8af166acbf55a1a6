//! Cross-derivative checks of solved systems.
//!
//!     cargo run --example frobenius

use jetcalc::compat::{frobenius_check, SolvedRule};
use jetcalc::parse::{parse, parse_equation};
use jetcalc::JetContext;

fn rules(ctx: &JetContext, src: &[&str]) -> jetcalc::Result<Vec<SolvedRule>> {
    src.iter()
        .map(|s| {
            let (lhs, rhs) = parse_equation(s, ctx)?;
            SolvedRule::from_equation(&lhs, rhs)
        })
        .collect()
}

fn main() -> jetcalc::Result<()> {
    let ctx = JetContext::new(&["t", "x"], &["u"])?.with_functions(&["f"])?;
    let solved = rules(
        &ctx,
        &[
            "u_tt = u_t^2*(u_t - f(u))/u_x^2",
            "u_tx = u_t*(u_t - f(u))/u_x",
            "u_xx = u_t - f(u)",
        ],
    )?;
    println!("{}", frobenius_check(&ctx, &solved)?.verdict);

    let solved = rules(&ctx, &["u_t = u + 1", "u_x = 1"])?;
    let r = frobenius_check(&ctx, &solved)?;
    println!("{}: {}", r.verdict, r.obstructions[0]);
    let _ = parse("u", &ctx)?;
    Ok(())
}
