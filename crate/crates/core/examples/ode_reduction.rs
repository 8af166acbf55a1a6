//! Intermediate integrals `u' = phi(x, u)` of second order ODEs.
//!
//!     cargo run --example ode_reduction

use jetcalc::compat::ode_intermediate_pde;
use jetcalc::parse::parse;
use jetcalc::{AnsatzBinding, JetContext};

fn main() -> jetcalc::Result<()> {
    let ode = JetContext::new(&["x"], &["u"])?.with_parameters(&["c"])?;
    for (rhs, phi) in [("u_x", "c*exp(x)"), ("u*u_x", "u^2/2 + c"), ("u_x^2/u", "c*u")] {
        let (pde, r) = ode_intermediate_pde(&ode, &parse(rhs, &ode)?)?;
        let v = pde.evaluate_on_ansatz(&r, &[AnsatzBinding::new("phi", parse(phi, &pde)?)])?;
        println!("u'' = {rhs}: {r} = 0; phi = {phi} leaves {v}");
    }
    Ok(())
}
