//! Jacobi brackets, a two-field multi-bracket and the Hessian.
//!
//!     cargo run --example brackets

use jetcalc::linops::{hessian, jacobi_bracket, multi_bracket};
use jetcalc::parse::parse;
use jetcalc::JetContext;

fn main() -> jetcalc::Result<()> {
    let ctx = JetContext::new(&["t", "x"], &["u"])?;
    let heat = parse("u_t - u_xx", &ctx)?;
    let g = parse("t*u_t - x*u_x + 3*x^3", &ctx)?;
    println!("{{F, G}} = {}", jacobi_bracket(&ctx, &heat, &g)?);

    // A base-only G brackets to L[g] against a linear F.
    let g = parse("x^2 + t", &ctx)?;
    println!("{{F, x^2 + t}} = {}", jacobi_bracket(&ctx, &heat, &g)?);

    let f = parse("u*u_tx - u_t*u_x", &ctx)?;
    let u = parse("u", &ctx)?;
    println!("Hess_F(u, u) = {}", hessian(&ctx, &f, &u, &u)?);

    let two = JetContext::new(&["t", "x"], &["u", "v"])?;
    let fs = ["u*u_t", "v*v_x", "u*v"].map(|s| parse(s, &two).unwrap());
    println!("{{u u_t, v v_x, u v}} = {}", multi_bracket(&two, &fs)?);
    Ok(())
}
