//! Reduced brackets for equations whose symbols share a factor.
//!
//!     cargo run --example reduced_bracket

use jetcalc::compat::{reduced_bracket, reduced_operators};
use jetcalc::ideal::IdealOptions;
use jetcalc::parse::{parse, parse_symbol};
use jetcalc::JetContext;

fn main() -> jetcalc::Result<()> {
    let ctx = JetContext::new(&["t", "x"], &["u"])?;
    let q = parse_symbol("xi_t", &ctx)?;
    for (f, g) in [("u_tx - u_x", "u_t - u"), ("u_tx - u", "u_t - u")] {
        let (f, g) = (parse(f, &ctx)?, parse(g, &ctx)?);
        let (s, t) = reduced_operators(&ctx, &f, &g, &q)?;
        let r = reduced_bracket(&ctx, &f, &g, &s, &t, &q, IdealOptions::default())?;
        println!("S = {}, T = {}: {}", s.display(&ctx), t.display(&ctx), r.value);
    }
    Ok(())
}
