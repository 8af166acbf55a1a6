//! Random expressions and ideal fixtures shared by the property suites.
#![allow(dead_code)]

use jetcalc::compat::separants;
use jetcalc::ideal::{Ideal, IdealOptions, MonomialOrder};
use jetcalc::linops::jacobi_bracket;
use jetcalc::parse::parse;
use jetcalc::{Expr, JetContext};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ATOMS: [&str; 8] = ["t", "x", "u", "u_t", "u_x", "u_tt", "u_tx", "u_xx"];

pub fn plane() -> JetContext {
    JetContext::new(&["t", "x"], &["u"]).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Source text of a random polynomial of order at most 2: up to `terms`
/// terms, each of total degree at most 2.
pub fn random_source(rng: &mut impl Rng, terms: usize) -> String {
    let n = rng.gen_range(1..=terms);
    let mut parts = Vec::new();
    for _ in 0..n {
        let c: i32 = rng.gen_range(-3..=3);
        let c = if c == 0 { 1 } else { c };
        let mut term = c.to_string();
        for _ in 0..rng.gen_range(0..=2) {
            term.push('*');
            term.push_str(ATOMS.choose(rng).unwrap());
        }
        parts.push(format!("({term})"));
    }
    parts.join(" + ")
}

pub fn random_expr(ctx: &JetContext, rng: &mut impl Rng, terms: usize) -> Expr {
    parse(&random_source(rng, terms), ctx).unwrap()
}

/// A pair of equations together with everything needed to build the ideal
/// their Mayer bracket is reduced in.
pub struct Fixture {
    pub name: &'static str,
    pub ctx: JetContext,
    pub equations: Vec<Expr>,
    pub generators: Vec<Expr>,
    pub bracket: Expr,
}

impl Fixture {
    fn new(name: &'static str, ctx: JetContext, f: &str, g: &str, cap: u32) -> Fixture {
        let f = parse(f, &ctx).unwrap();
        let g = parse(g, &ctx).unwrap();
        let generators = ctx.module_generators(&[f.clone(), g.clone()], cap).unwrap();
        let bracket = jacobi_bracket(&ctx, &f, &g).unwrap();
        Fixture {
            name,
            ctx,
            equations: vec![f, g],
            generators,
            bracket,
        }
    }

    pub fn ideal(&self, order: MonomialOrder) -> Ideal {
        let inverted = separants(&self.ctx, &self.equations).unwrap();
        let options = IdealOptions {
            order,
            ..IdealOptions::default()
        };
        Ideal::localized(&self.generators, &inverted, &[], self.ctx.weights(), options).unwrap()
    }

    /// Random element of the ideal, plus a random perturbation half of
    /// the time.
    pub fn sample(&self, rng: &mut impl Rng) -> Expr {
        let mut e = Expr::zero();
        for _ in 0..rng.gen_range(1..=2) {
            let g = self.generators.choose(rng).unwrap();
            e = e.add(&g.mul(&random_expr(&self.ctx, rng, 2)));
        }
        if rng.gen_bool(0.5) {
            e = e.add(&random_expr(&self.ctx, rng, 2));
        }
        e
    }
}

pub fn laplace() -> Fixture {
    let ctx = plane().with_parameters(&["alpha"]).unwrap();
    Fixture::new("laplace", ctx, "u_tt + u_xx - 1", "(u_t^2 + u_x^2)/(4*u) - alpha", 2)
}

pub fn heat_scaling() -> Fixture {
    Fixture::new("heat scaling", plane(), "u_t - u_xx", "t*u_t - x*u_x + 3*x^3", 2)
}

pub fn kpp() -> Fixture {
    let ctx = plane().with_functions(&["f"]).unwrap();
    Fixture::new(
        "kpp",
        ctx,
        "u_t - u_xx - f(u)",
        "u_x*u_xxx - u_xx^2 - f(u)*u_xx + f'(u)*u_x^2",
        4,
    )
}

/// Identities checked on random triples `(F, G, H)`. Each returns the
/// nonzero defect on failure.
pub mod identities {
    use super::*;
    use jetcalc::ideal::MonomialOrder;
    use jetcalc::linops::{hessian, linearize_scalar, multi_bracket};
    use jetcalc::parse::format;

    pub type Check = fn(u64) -> Result<(), String>;

    pub const ALL: [(&str, Check); 8] = [
        ("bracket antisymmetry", antisymmetry),
        ("Jacobi identity", jacobi),
        ("two-term multi-bracket", multi_is_jacobi),
        ("Hessian symmetry", hessian_symmetry),
        ("compensated Leibniz", compensated_leibniz),
        ("linearization anomaly", anomaly),
        ("D_t D_x = D_x D_t", derivatives_commute),
        ("format/parse round trip", round_trip),
    ];

    fn triple(seed: u64) -> (JetContext, Expr, Expr, Expr) {
        let ctx = plane();
        let mut r = rng(seed);
        let f = random_expr(&ctx, &mut r, 3);
        let g = random_expr(&ctx, &mut r, 3);
        let h = random_expr(&ctx, &mut r, 3);
        (ctx, f, g, h)
    }

    fn zero(defect: Expr) -> Result<(), String> {
        if defect.is_zero() {
            Ok(())
        } else {
            Err(format(&defect))
        }
    }

    fn br(c: &JetContext, a: &Expr, b: &Expr) -> Expr {
        jacobi_bracket(c, a, b).unwrap()
    }

    fn lin(c: &JetContext, f: &Expr, h: &Expr) -> Expr {
        linearize_scalar(c, f).unwrap().apply(c, h).unwrap()
    }

    pub fn antisymmetry(seed: u64) -> Result<(), String> {
        let (c, f, g, _) = triple(seed);
        zero(br(&c, &f, &g).add(&br(&c, &g, &f)))
    }

    pub fn jacobi(seed: u64) -> Result<(), String> {
        let (c, f, g, h) = triple(seed);
        zero(br(&c, &f, &br(&c, &g, &h)).add(&br(&c, &g, &br(&c, &h, &f))).add(&br(&c, &h, &br(&c, &f, &g))))
    }

    pub fn multi_is_jacobi(seed: u64) -> Result<(), String> {
        let (c, f, g, _) = triple(seed);
        zero(multi_bracket(&c, &[f.clone(), g.clone()]).unwrap().sub(&br(&c, &f, &g)))
    }

    pub fn hessian_symmetry(seed: u64) -> Result<(), String> {
        let (c, f, g, h) = triple(seed);
        zero(hessian(&c, &f, &g, &h).unwrap().sub(&hessian(&c, &f, &h, &g).unwrap()))
    }

    /// `{F, l_G(H)} = l_{F,G}(H) + l_G({F, H}) - Hess_F(G, H)`.
    pub fn compensated_leibniz(seed: u64) -> Result<(), String> {
        let (c, f, g, h) = triple(seed);
        let lhs = br(&c, &f, &lin(&c, &g, &h));
        let rhs = lin(&c, &br(&c, &f, &g), &h)
            .add(&lin(&c, &g, &br(&c, &f, &h)))
            .sub(&hessian(&c, &f, &g, &h).unwrap());
        zero(lhs.sub(&rhs))
    }

    /// `[l_F, l_G](H) = l_{F,G}(H) + Hess_G(F, H) - Hess_F(G, H)`.
    pub fn anomaly(seed: u64) -> Result<(), String> {
        let (c, f, g, h) = triple(seed);
        let lhs = lin(&c, &f, &lin(&c, &g, &h)).sub(&lin(&c, &g, &lin(&c, &f, &h)));
        let rhs = lin(&c, &br(&c, &f, &g), &h)
            .add(&hessian(&c, &g, &f, &h).unwrap())
            .sub(&hessian(&c, &f, &g, &h).unwrap());
        zero(lhs.sub(&rhs))
    }

    pub fn derivatives_commute(seed: u64) -> Result<(), String> {
        let (c, f, _, _) = triple(seed);
        let dtx = c.total_derivative(&c.total_derivative(&f, 0).unwrap(), 1).unwrap();
        let dxt = c.total_derivative(&c.total_derivative(&f, 1).unwrap(), 0).unwrap();
        zero(dtx.sub(&dxt))
    }

    pub fn round_trip(seed: u64) -> Result<(), String> {
        let (c, f, g, _) = triple(seed);
        let quotient = f.mul(&parse("u^(-1)*u_x^(-2)", &c).unwrap());
        for e in [f.clone(), quotient, br(&c, &f, &g)] {
            let text = format(&e);
            match parse(&text, &c) {
                Ok(back) if back == e => {}
                _ => return Err(text),
            }
        }
        Ok(())
    }

    /// Zero membership agrees between the jet-lex and block grevlex orders
    /// on `count` sampled elements. Returns the number of members.
    pub fn orders_agree(fx: &Fixture, count: u64) -> Result<usize, String> {
        let a = fx.ideal(MonomialOrder::JetLexBlock);
        let b = fx.ideal(MonomialOrder::BlockGrevlex);
        let mut members = 0;
        for seed in 0..count {
            let e = fx.sample(&mut rng(seed));
            let za = a.normal_form(&e).unwrap().is_zero();
            let zb = b.normal_form(&e).unwrap().is_zero();
            if za != zb {
                return Err(format!("{} seed {seed}: {}", fx.name, format(&e)));
            }
            members += za as usize;
        }
        let za = a.normal_form(&fx.bracket).unwrap().is_zero();
        let zb = b.normal_form(&fx.bracket).unwrap().is_zero();
        if za != zb {
            return Err(format!("{}: bracket", fx.name));
        }
        Ok(members)
    }
}
