//! Acceptance run: one PASS/FAIL line per criterion. All comparisons are
//! exact, so the tolerance is an empty normal form.
//!
//! AC6, AC8 and AC9 are diagnostic: a nonzero residual is printed as an
//! erratum and does not fail the run.

mod common;

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use jetcalc::compat::{
    complete_intersection_check, frobenius_check, is_compatible_pair, ode_intermediate_pde, EquationSystem,
    SolvedRule, Verdict,
};
use jetcalc::ideal::IdealOptions;
use jetcalc::linops::jacobi_bracket;
use jetcalc::parse::{format, parse};
use jetcalc::{AnsatzBinding, Expr, JetContext, Kernel, MultiIndex};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const TOLERANCE: &str = "exact (normal form must be the empty sum)";

fn plane() -> JetContext {
    common::plane()
}

fn p(ctx: &JetContext, s: &str) -> Expr {
    parse(s, ctx).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn require(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn mayer(ctx: &JetContext, f: &Expr, g: &Expr, cap: Option<u32>, scale: &Expr, shift: &Expr) -> Expr {
    let mut sys = EquationSystem::new(ctx, vec![f.clone(), g.clone()]).unwrap();
    if let Some(cap) = cap {
        sys = sys.with_cap(cap);
    }
    sys.mayer_reduce_with(scale, shift).unwrap().value
}

fn on_ansatz(ctx: &JetContext, e: &Expr, dep: &str, value: &Expr) -> Expr {
    ctx.evaluate_on_ansatz(e, &[AnsatzBinding::new(dep, value.clone())]).unwrap()
}

fn ac1() -> Outcome {
    let c = plane().with_parameters(&["alpha"]).unwrap();
    let f = p(&c, "u_tt + u_xx - 1");
    let g = p(&c, "(u_t^2 + u_x^2)/(4*u) - alpha");
    let target = p(&c, "(1 - 2*alpha)*(1 - 4*alpha)");
    let nf = mayer(&c, &f, &g, Some(2), &p(&c, "2*u"), &target);
    require(nf.is_zero(), format!("residual {}", format(&nf)))?;
    for a in [(1, 2), (1, 4)] {
        let mut vals = BTreeMap::new();
        vals.insert("alpha".into(), BigRational::new(BigInt::from(a.0), BigInt::from(a.1)));
        let gs = g.eval_params(&vals).unwrap();
        require(target.eval_params(&vals).unwrap().is_zero(), "target does not vanish")?;
        let nf = mayer(&c, &f, &gs, Some(2), &Expr::one(), &Expr::zero());
        require(nf.is_zero(), format!("alpha = {}/{}: {}", a.0, a.1, format(&nf)))?;
    }
    // alpha = 1/4 admits the family u = ((t - a)^2 + (x - b)^2)/4.
    let q = plane().with_parameters(&["a", "b"]).unwrap();
    let fam = p(&q, "((t - a)^2 + (x - b)^2)/4");
    for e in ["u_tt + u_xx - 1", "(u_t^2 + u_x^2) - u"] {
        require(on_ansatz(&q, &p(&q, e), "u", &fam).is_zero(), format!("family fails {e}"))?;
    }
    Ok("2u{F,G} = (1-2a)(1-4a) mod J_2; vanishes at a = 1/2, 1/4".into())
}

/// Jets of a solution of `u_t = -a u`, `c u_tt = u_xx` through order 3,
/// written in `u`, `u_x`. Built by hand from the two equations.
fn wave_jets(c: &JetContext) -> HashMap<Kernel, Expr> {
    let mut m = HashMap::new();
    let rules = [
        ([1, 0], "-a(t)*u"),
        ([2, 0], "(a(t)^2 - a'(t))*u"),
        ([1, 1], "-a(t)*u_x"),
        ([0, 2], "c(t)*(a(t)^2 - a'(t))*u"),
        ([3, 0], "(3*a(t)*a'(t) - a''(t) - a(t)^3)*u"),
        ([2, 1], "(a(t)^2 - a'(t))*u_x"),
        ([1, 2], "-a(t)*c(t)*(a(t)^2 - a'(t))*u"),
        ([0, 3], "c(t)*(a(t)^2 - a'(t))*u_x"),
    ];
    for (sigma, rhs) in rules {
        m.insert(c.jet_kernel(0, MultiIndex::new(sigma.to_vec())).unwrap(), p(c, rhs));
    }
    m
}

fn ac2() -> Outcome {
    let c = plane().with_functions(&["a", "c"]).unwrap();
    let f = p(&c, "c(t)*u_tt - u_xx");
    let g = p(&c, "u_t + a(t)*u");
    let target = p(&c, "u*(c(t)*a''(t) + c'(t)*a'(t) - 2*c(t)*a(t)*a'(t) - a(t)^2*c'(t))");
    let nf = mayer(&c, &f, &g, None, &Expr::one(), &target);
    require(nf.is_zero(), format!("residual {}", format(&nf)))?;
    // Oracle: substitute the solved jets directly, no Groebner basis.
    let bracket = jacobi_bracket(&c, &f, &g).unwrap();
    let oracle = bracket.sub(&target).substitute(&wave_jets(&c)).unwrap();
    require(oracle.is_zero(), format!("oracle residual {}", format(&oracle)))?;
    Ok("{F,G} = u(c a'' + c'a' - 2c a a' - a^2 c') mod J_2; jet substitution agrees".into())
}

fn ac3() -> Outcome {
    let c = plane().with_parameters(&["c"]).unwrap();
    let f = p(&c, "u_t - u_xx");
    let g = p(&c, "t*u_t - x*u_x + 3*x^3");
    let b = jacobi_bracket(&c, &f, &g).unwrap();
    require(b == p(&c, "u_t + 2*u_xx - 18*x"), format!("bracket {}", format(&b)))?;
    let nf = mayer(&c, &f, &g, None, &Expr::one(), &p(&c, "3*(u_t - 6*x)"));
    require(nf.is_zero(), format!("residual {}", format(&nf)))?;
    let fam = p(&c, "x^3 + 6*t*x + c");
    for e in [&f, &g, &p(&c, "u_t - 6*x")] {
        let v = on_ansatz(&c, e, "u", &fam);
        require(v.is_zero(), format!("{} on family: {}", format(e), format(&v)))?;
    }
    Ok("{F,G} = 3(u_t - 6x) mod J_2; F, G, H vanish on x^3 + 6tx + c".into())
}

fn ac4() -> Outcome {
    let c = plane();
    let f = p(&c, "u_t - u_xx");
    let g = p(&c, "u*u_tx - u_t*u_x");
    let lhs = p(&c, "u")
        .mul(&c.total_derivative(&f, 0).unwrap())
        .add(&c.total_derivative(&g, 1).unwrap())
        .sub(&p(&c, "u_t").mul(&f));
    require(lhs == p(&c, "u*u_tt - u_t^2"), format!("identity gives {}", format(&lhs)))?;
    let rule = |l: &str, r: &str| SolvedRule::from_equation(&p(&c, l), p(&c, r)).unwrap();
    let rules = [rule("u_tt", "u_t^2/u"), rule("u_tx", "u_t*u_x/u"), rule("u_xx", "u_t")];
    let r = frobenius_check(&c, &rules).unwrap();
    require(r.verdict == Verdict::Compatible, format!("frobenius verdict {}", r.verdict))?;
    Ok("uD_tF + D_xG - u_tF = u u_tt - u_t^2; Frobenius system compatible".into())
}

fn kpp_ctx() -> JetContext {
    plane().with_functions(&["f"]).unwrap()
}

const KPP_G: &str = "u_x*u_xxx - u_xx^2 - f(u)*u_xx + f'(u)*u_x^2";

fn ac5() -> Outcome {
    let c = kpp_ctx();
    let f = p(&c, "u_t - u_xx - f(u)");
    let g = p(&c, KPP_G);
    let nf = mayer(&c, &f, &g, Some(4), &Expr::one(), &Expr::zero());
    require(nf.is_zero(), format!("residual {}", format(&nf)))?;
    Ok("{F,G} = 0 mod J_4".into())
}

fn ac6() -> Outcome {
    let c = kpp_ctx();
    let f = p(&c, "u_t - u_xx - f(u)");
    let g = p(&c, KPP_G);
    let g1 = p(
        &c,
        "u_x^2*u_xxxx - (3*u_x*u_xx + f(u)*u_x)*u_xxx + 2*u_xx^3 + 2*f(u)*u_xx^2 - f'(u)*u_x^2*u_xx + f''(u)*u_x^4",
    );
    let g2 = p(&c, "f(u)*u_x*u_xxx - 2*f(u)*u_xx^2 + f'(u)*u_x^2*u_xx - f''(u)*u_x^4");
    // G1 is u_x^3 (u_t/u_x)_xx restricted to F = 0.
    let q = p(&c, "(u_xx + f(u))/u_x");
    let derived = c.total_derivative(&c.total_derivative(&q, 1).unwrap(), 1).unwrap().mul(&p(&c, "u_x^3"));
    require(derived == g1, "G1 differs from u_x^3 (u_t/u_x)_xx")?;
    let shift = g.mul(&g2).scale(&jetcalc::RatFunc::from_integer(2));
    let literal = mayer(&c, &f, &g1, Some(5), &Expr::one(), &shift);
    let scaled = mayer(&c, &f, &g1, Some(5), &p(&c, "u_x^2"), &shift);
    require(scaled.is_zero(), format!("scaled residual {}", format(&scaled)))?;
    if literal.is_zero() {
        Ok("{F,G1} = 2 G G2 mod J_5".into())
    } else {
        Err(format!(
            "ERRATUM {{F,G1}} - 2 G G2 is not in J_5; u_x^2 {{F,G1}} - 2 G G2 is. residual: {}",
            format(&literal)
        ))
    }
}

const COSH: &str = "(u_t^2 + u_x^2)*cosh(2*x) - 2*u_t*u_x*sinh(2*x) + 2*exp(2*t)*(u_t - u)";

fn ac7() -> Outcome {
    let c = plane().with_parameters(&["c_1", "c_2"]).unwrap();
    let f = p(&c, "u_t - u_xx");
    let g = p(&c, COSH);
    let fam = p(&c, "c_1*exp(t - x) + c_2*exp(t + x) + c_1^2 + c_2^2");
    for e in [&f, &g] {
        let v = on_ansatz(&c, e, "u", &fam);
        require(v.is_zero(), format!("{} on family: {}", format(e), format(&v)))?;
    }
    let r = is_compatible_pair(&c, &f, &g, IdealOptions::default()).unwrap();
    require(r.verdict == Verdict::Compatible, format!("verdict {}", r.verdict))?;
    Ok(format!("family solves F, G; compatible with {} cleared denominators", r.cleared_denominators.len()))
}

fn ac8() -> Outcome {
    let c = plane();
    let f = p(&c, "u_t - u_xx");
    let g = p(
        &c,
        "x^2*(2*u_t^2 + 2*u_tt^2 - u_tt + u_t) + 2*u_tt*(1 - t + 2*x*u_tx - 2*x*u_x) \
         + 2*u_t*(t - 2*x^2*u_tt - 2*x*u_tx + 2*x*u_x) + 2*u_tx*(u_tx - x - 2*u_x) + 2*(x*u_x + u_x^2 - u)",
    );
    let nf = mayer(&c, &f, &g, Some(3), &Expr::one(), &Expr::zero());
    if nf.is_zero() {
        Ok("{F,G} = 0 mod J_3".into())
    } else {
        Err(format!("ERRATUM {{F,G}} mod J_3 = {} ({} terms)", format(&nf), nf.len()))
    }
}

fn ac9() -> Outcome {
    let c = plane().with_parameters(&["a", "b"]).unwrap();
    let g = p(&c, "u_tt*u_xx - u_tx^2 + a*exp(b*u)");
    let mut errs = Vec::new();
    for f in ["u_tt + u_xx", "u_tt - u_xx"] {
        let nf = mayer(&c, &p(&c, f), &g, None, &Expr::one(), &Expr::zero());
        if !nf.is_zero() {
            errs.push(format!("ERRATUM F = {f}: {}", format(&nf)));
        }
    }
    if errs.is_empty() {
        Ok("mayer = 0 for both signs".into())
    } else {
        Err(errs.join("; "))
    }
}

fn ac10() -> Outcome {
    let c = plane().with_functions(&["f", "g", "U"]).unwrap();
    let cases = [
        ("u_tx", "f(t) + g(x)"),
        ("u*u_tx - u_t*u_x", "f(t)*g(x)"),
        (
            "u_t*u_x^2*u_ttx - u_t^2*u_x*u_txx + u_tx*(u_t^2*u_xx - u_x^2*u_tt)",
            "U(f(t) + g(x))",
        ),
    ];
    for (e, fam) in cases {
        let v = on_ansatz(&c, &p(&c, e), "u", &p(&c, fam));
        require(v.is_zero(), format!("{e} on {fam}: {}", format(&v)))?;
    }
    Ok("additive, multiplicative and functional separation".into())
}

fn ac11() -> Outcome {
    let c = plane();
    let ci = complete_intersection_check(&c, &[p(&c, "u_tx - u"), p(&c, "u_t - u")]).unwrap();
    require(!ci, "u_tx - u, u_t - u reported transversal")?;
    let rule = |l: &str, r: &str| SolvedRule::from_equation(&p(&c, l), p(&c, r)).unwrap();
    let r = frobenius_check(&c, &[rule("u_t", "u + 1"), rule("u_x", "1")]).unwrap();
    require(r.verdict == Verdict::Obstruction, format!("frobenius verdict {}", r.verdict))?;
    require(r.obstructions == vec![Expr::one()], "residual is not 1")?;
    let atoms = ["u", "u_t", "u_x", "u_tt", "u_tx", "u_xx"];
    let mut rng = common::rng(11);
    let mut random_linear = || {
        let terms: Vec<String> = atoms
            .iter()
            .map(|a| format!("({}/{})*{a}", rng.gen_range(-5..=5), rng.gen_range(1..=4)))
            .collect();
        p(&c, &terms.join(" + "))
    };
    for _ in 0..50 {
        let (l1, l2) = (random_linear(), random_linear());
        let b = jacobi_bracket(&c, &l1, &l2).unwrap();
        require(b.is_zero(), format!("{{{}, {}}} = {}", format(&l1), format(&l2), format(&b)))?;
    }
    Ok("not transversal; Frobenius residual 1; 50 constant-coefficient pairs commute".into())
}

fn ac12() -> Outcome {
    const CASES: u64 = 200;
    let mut summary = Vec::new();
    for (name, check) in common::identities::ALL {
        for seed in 0..CASES {
            check(seed).map_err(|d| format!("{name}, seed {seed}: {d}"))?;
        }
        summary.push(name);
    }
    for fx in [common::laplace(), common::heat_scaling(), common::kpp()] {
        let members = common::identities::orders_agree(&fx, CASES)?;
        summary.push(fx.name);
        require(members > 0 && members < CASES as usize, format!("{}: degenerate sample", fx.name))?;
    }
    Ok(format!("{CASES} cases each: {}", summary.join(", ")))
}

fn ac13() -> Outcome {
    let ode = JetContext::new(&["x"], &["u"]).unwrap().with_parameters(&["c"]).unwrap();
    for (rhs, phi) in [("0", "c"), ("u_x", "c*exp(x)")] {
        let (pde, r) = ode_intermediate_pde(&ode, &p(&ode, rhs)).unwrap();
        let v = on_ansatz(&pde, &r, "phi", &p(&pde, phi));
        require(v.is_zero(), format!("F = {rhs}, phi = {phi}: {}", format(&v)))?;
    }
    let aux = JetContext::new(&["x", "u"], &["phi"])
        .unwrap()
        .with_parameters(&["alpha", "beta", "c"])
        .unwrap();
    let cases = [
        ("phi_x", "u^2"),
        ("u*phi_u - phi", "c*u"),
        ("alpha*phi_x + beta*phi_u + (alpha - beta)*phi", "exp(u - x)"),
    ];
    for (eq, phi) in cases {
        let v = on_ansatz(&aux, &p(&aux, eq), "phi", &p(&aux, phi));
        require(v.is_zero(), format!("{eq} on phi = {phi}: {}", format(&v)))?;
    }
    Ok("intermediate-integral residuals and the three auxiliary equations vanish".into())
}

fn main() {
    let diagnostic = ["AC6", "AC8", "AC9"];
    let criteria: [Criterion; 13] = [
        ("AC1", ac1),
        ("AC2", ac2),
        ("AC3", ac3),
        ("AC4", ac4),
        ("AC5", ac5),
        ("AC6", ac6),
        ("AC7", ac7),
        ("AC8", ac8),
        ("AC9", ac9),
        ("AC10", ac10),
        ("AC11", ac11),
        ("AC12", ac12),
        ("AC13", ac13),
    ];
    println!("tolerance: {TOLERANCE}");
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("{name} PASS ({ms} ms) {detail}"),
            Err(detail) => {
                let tag = if diagnostic.contains(&name) { " [diagnostic]" } else { "" };
                println!("{name} FAIL{tag} ({ms} ms) {detail}");
                if tag.is_empty() {
                    failed.push(name);
                }
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}
