//! Evaluating constraints on solution families and separation ansatzes.
//!
//!     cargo run --example ansatz

use jetcalc::parse::parse;
use jetcalc::{AnsatzBinding, JetContext};

fn main() -> jetcalc::Result<()> {
    let ctx = JetContext::new(&["t", "x"], &["u"])?
        .with_parameters(&["c_1", "c_2"])?
        .with_functions(&["f", "g", "U"])?;
    let check = |family: &str, eq: &str| -> jetcalc::Result<()> {
        let b = AnsatzBinding::new("u", parse(family, &ctx)?);
        println!("{eq} on u = {family}: {}", ctx.evaluate_on_ansatz(&parse(eq, &ctx)?, &[b])?);
        Ok(())
    };
    check("c_1*exp(t - x) + c_2*exp(t + x) + c_1^2 + c_2^2", "u_t - u_xx")?;
    check(
        "c_1*exp(t - x) + c_2*exp(t + x) + c_1^2 + c_2^2",
        "(u_t^2 + u_x^2)*cosh(2*x) - 2*u_t*u_x*sinh(2*x) + 2*exp(2*t)*(u_t - u)",
    )?;
    check("f(t)*g(x)", "u*u_tx - u_t*u_x")?;
    check(
        "U(f(t) + g(x))",
        "u_t*u_x^2*u_ttx - u_t^2*u_x*u_txx + u_tx*(u_t^2*u_xx - u_x^2*u_tt)",
    )?;
    check("U(f(t) + g(x))", "u*u_tx - u_t*u_x")?;
    Ok(())
}
