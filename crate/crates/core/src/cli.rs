//! Command line front end.
//!
//! Exit codes: 0 for a zero result, a compatible system or `true`; 1 for a
//! nonzero result, an obstruction, an inconclusive verdict or `false`; 2 for
//! usage, parse and validation errors; 3 when the Groebner budget runs out.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::compat::{
    complete_intersection_check, frobenius_check, is_compatible_pair, ode_intermediate_pde, reduced_bracket,
    reduced_operators, symmetry_check, CompatReport, EquationSystem, SolvedRule, Verdict,
};
use crate::config::ContextConfig;
use crate::error::{Error, Result};
use crate::expr::{Expr, KernelKind};
use crate::ideal::{IdealOptions, MonomialOrder, DEFAULT_BUDGET};
use crate::jet::{AnsatzBinding, JetContext};
use crate::linops::{jacobi_bracket, linearize, multi_bracket};
use crate::parse::{format, parse, parse_equation, parse_symbol};

#[derive(Parser, Debug)]
#[command(name = "jetcalc", version, about = "Jet-space calculus: brackets, linearizations and compatibility checks")]
pub struct Cli {
    /// Context file (JSON). Defaults to independents t, x and dependent u.
    #[arg(long, global = true)]
    pub ctx: Option<PathBuf>,
    /// Structured output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Prolongation cap override.
    #[arg(long, global = true)]
    pub cap: Option<u32>,
    /// Monomial order for Groebner bases.
    #[arg(long, global = true, value_enum, default_value_t = OrderArg::JetLex)]
    pub order: OrderArg,
    /// Maximum number of S-polynomial reductions.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    JetLex,
    BlockGrevlex,
    Grevlex,
}

impl From<OrderArg> for MonomialOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::JetLex => MonomialOrder::JetLexBlock,
            OrderArg::BlockGrevlex => MonomialOrder::BlockGrevlex,
            OrderArg::Grevlex => MonomialOrder::Grevlex,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Normalize an expression.
    Eval { expr: String },
    /// Total derivative along an independent variable.
    Td { var: String, expr: String },
    /// Linearization operator(s).
    Lin { expr: String },
    /// Jacobi bracket {F, G}.
    Bracket { f: String, g: String },
    /// Multi-bracket of m + 1 expressions.
    Multibracket {
        #[arg(required = true)]
        exprs: Vec<String>,
    },
    /// Mayer bracket: {F, G} reduced by the prolonged pair.
    Mayer {
        f: String,
        g: String,
        /// Reduce `scale * {F, G}` instead.
        #[arg(long)]
        scale: Option<String>,
        /// Subtract this expression before reducing.
        #[arg(long)]
        minus: Option<String>,
    },
    /// Compatibility of a system (a pair, or m + 1 tuples in general).
    Compat {
        #[arg(required = true, num_args = 2..)]
        exprs: Vec<String>,
    },
    /// Whether G is a symmetry of F.
    Symmetry { f: String, g: String },
    /// Principal symbol.
    Symbol { expr: String },
    /// Pairwise symbol transversality.
    CiCheck {
        #[arg(required = true, num_args = 2..)]
        exprs: Vec<String>,
    },
    /// Reduced bracket T(F) - S(G) with S, T built from the symbols divided
    /// by q.
    ReducedBracket { f: String, g: String, q: String },
    /// Cross-derivative check of `lead = rhs` rules.
    Frobenius {
        #[arg(required = true)]
        rules: Vec<String>,
    },
    /// Integrability conditions of one projection step.
    Iconds {
        #[arg(required = true)]
        exprs: Vec<String>,
    },
    /// Evaluate expressions on an ansatz; `dep = value` arguments are
    /// bindings, the rest expressions.
    AnsatzCheck {
        #[arg(required = true)]
        args: Vec<String>,
    },
    /// Intermediate-integral PDE of `u'' = F(x, u, u')`, optionally
    /// evaluated on a candidate `phi`.
    OdeIi { rhs: String, phi: Option<String> },
}

/// Exit code and output of a command.
struct Outcome {
    code: i32,
    text: String,
    json: Value,
}

fn expr_outcome(e: &Expr) -> Outcome {
    Outcome {
        code: if e.is_zero() { 0 } else { 1 },
        text: format(e),
        json: json!({"result": format(e), "zero": e.is_zero()}),
    }
}

fn report_json(r: &CompatReport) -> Value {
    json!({
        "verdict": r.verdict.to_string(),
        "obstructions": r.obstructions.iter().map(format).collect::<Vec<_>>(),
        "transversal": r.transversal,
        "clearedDenominators": r.cleared_denominators.iter().map(format).collect::<Vec<_>>(),
    })
}

fn report_text(r: &CompatReport) -> String {
    let mut s = r.verdict.to_string();
    for o in &r.obstructions {
        s.push_str(&format!("\nobstruction: {}", format(o)));
    }
    s.push_str(&format!("\ntransversal: {}", r.transversal));
    for d in &r.cleared_denominators {
        s.push_str(&format!("\ncleared: {}", format(d)));
    }
    s
}

fn report_outcome(r: &CompatReport, code: i32) -> Outcome {
    Outcome {
        code,
        text: report_text(r),
        json: report_json(r),
    }
}

fn verdict_code(r: &CompatReport) -> i32 {
    if r.verdict == Verdict::Compatible {
        0
    } else {
        1
    }
}

fn bool_outcome(b: bool) -> Outcome {
    Outcome {
        code: if b { 0 } else { 1 },
        text: b.to_string(),
        json: json!({"result": b}),
    }
}

fn list_outcome(items: &[Expr]) -> Outcome {
    let strs: Vec<String> = items.iter().map(format).collect();
    Outcome {
        code: if items.iter().all(Expr::is_zero) { 0 } else { 1 },
        text: strs.join("\n"),
        json: json!({"result": strs, "zero": items.iter().all(Expr::is_zero)}),
    }
}

fn default_context() -> Result<JetContext> {
    JetContext::new(&["t", "x"], &["u"])
}

fn parse_all(exprs: &[String], ctx: &JetContext) -> Result<Vec<Expr>> {
    exprs.iter().map(|s| parse(s, ctx)).collect()
}

fn execute(cli: &Cli, ctx: &JetContext) -> Result<Outcome> {
    let options = IdealOptions {
        order: cli.order.into(),
        budget: cli.budget,
    };
    let p = |s: &str| parse(s, ctx);
    let out = match &cli.command {
        Command::Eval { expr } => expr_outcome(&p(expr)?),
        Command::Td { var, expr } => {
            let i = ctx
                .independent_index(var)
                .ok_or_else(|| Error::UndeclaredIdentifier(var.clone()))?;
            expr_outcome(&ctx.total_derivative(&p(expr)?, i)?)
        }
        Command::Lin { expr } => {
            let ops = linearize(ctx, &p(expr)?)?;
            let strs: Vec<String> = ops.iter().map(|o| o.display(ctx).to_string()).collect();
            let zero = ops.iter().all(|o| o.is_zero());
            Outcome {
                code: if zero { 0 } else { 1 },
                text: strs.join("\n"),
                json: json!({"result": strs, "zero": zero}),
            }
        }
        Command::Bracket { f, g } => expr_outcome(&jacobi_bracket(ctx, &p(f)?, &p(g)?)?),
        Command::Multibracket { exprs } => expr_outcome(&multi_bracket(ctx, &parse_all(exprs, ctx)?)?),
        Command::Mayer { f, g, scale, minus } => {
            let mut sys = EquationSystem::new(ctx, vec![p(f)?, p(g)?])?.with_options(options);
            if let Some(cap) = cli.cap {
                sys = sys.with_cap(cap);
            }
            let scale = scale.as_deref().map(p).transpose()?.unwrap_or_else(Expr::one);
            let minus = minus.as_deref().map(p).transpose()?.unwrap_or_else(Expr::zero);
            expr_outcome(&sys.mayer_reduce_with(&scale, &minus)?.value)
        }
        Command::Compat { exprs } => {
            let eqs = parse_all(exprs, ctx)?;
            let report = if eqs.len() == 2 && ctx.m() == 1 && cli.cap.is_none() {
                is_compatible_pair(ctx, &eqs[0], &eqs[1], options)?
            } else {
                let mut sys = EquationSystem::new(ctx, eqs)?.with_options(options);
                if let Some(cap) = cli.cap {
                    sys = sys.with_cap(cap);
                }
                sys.check_compatibility()?
            };
            report_outcome(&report, verdict_code(&report))
        }
        Command::Symmetry { f, g } => {
            let report = symmetry_check(ctx, &p(f)?, &p(g)?, cli.cap, options)?;
            let code = if report.obstructions.is_empty() { 0 } else { 1 };
            report_outcome(&report, code)
        }
        Command::Symbol { expr } => {
            let s = ctx.symbol(&p(expr)?)?;
            let comps: Vec<String> = s.components.iter().map(|c| format(&c.to_expr(ctx))).collect();
            Outcome {
                code: 0,
                text: comps.join("\n"),
                json: json!({"order": s.order, "components": comps}),
            }
        }
        Command::CiCheck { exprs } => bool_outcome(complete_intersection_check(ctx, &parse_all(exprs, ctx)?)?),
        Command::ReducedBracket { f, g, q } => {
            let (f, g) = (p(f)?, p(g)?);
            let q = parse_symbol(q, ctx)?;
            let (s, t) = reduced_operators(ctx, &f, &g, &q)?;
            expr_outcome(&reduced_bracket(ctx, &f, &g, &s, &t, &q, options)?.value)
        }
        Command::Frobenius { rules } => {
            let rules = rules
                .iter()
                .map(|r| {
                    let (lhs, rhs) = parse_equation(r, ctx)?;
                    SolvedRule::from_equation(&lhs, rhs)
                })
                .collect::<Result<Vec<_>>>()?;
            let report = frobenius_check(ctx, &rules)?;
            report_outcome(&report, verdict_code(&report))
        }
        Command::Iconds { exprs } => {
            let mut sys = EquationSystem::new(ctx, parse_all(exprs, ctx)?)?.with_options(options);
            if let Some(cap) = cli.cap {
                sys = sys.with_cap(cap);
            }
            list_outcome(&sys.integrability_conditions()?)
        }
        Command::AnsatzCheck { args } => {
            let mut bindings = Vec::new();
            let mut exprs = Vec::new();
            for a in args {
                if a.contains('=') {
                    let (lhs, rhs) = parse_equation(a, ctx)?;
                    bindings.push(AnsatzBinding::new(&binding_name(ctx, &lhs)?, rhs));
                } else {
                    exprs.push(p(a)?);
                }
            }
            let values = exprs
                .iter()
                .map(|e| ctx.evaluate_on_ansatz(e, &bindings))
                .collect::<Result<Vec<_>>>()?;
            list_outcome(&values)
        }
        Command::OdeIi { rhs, phi } => {
            let (pde, residual) = ode_intermediate_pde(ctx, &p(rhs)?)?;
            match phi {
                None => expr_outcome(&residual),
                Some(phi) => {
                    let value = parse(phi, &pde)?;
                    expr_outcome(&pde.evaluate_on_ansatz(&residual, &[AnsatzBinding::new("phi", value)])?)
                }
            }
        }
    };
    Ok(out)
}

fn binding_name(ctx: &JetContext, lhs: &Expr) -> Result<String> {
    if let Some((m, c)) = lhs.as_single_term() {
        if c.is_one() && m.factors().len() == 1 {
            if let KernelKind::Jet { dep, sigma } = m.factors()[0].0.kind() {
                if sigma.is_zero() {
                    return Ok(ctx.dependent()[*dep].clone());
                }
            }
        }
    }
    Err(Error::Validation(format!("binding left side `{lhs}` is not a dependent variable")))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget(_) => 3,
        _ => 2,
    }
}

/// Run with the given arguments (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let ctx = match &cli.ctx {
        Some(path) => ContextConfig::from_path(path).and_then(|c| c.build()),
        None => default_context(),
    };
    let result = ctx.and_then(|ctx| execute(&cli, &ctx));
    match result {
        Ok(o) => {
            let _ = if cli.json {
                writeln!(out, "{}", o.json)
            } else {
                writeln!(out, "{}", o.text)
            };
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("jetcalc").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn expression_commands() {
        assert_eq!(call(&["eval", "u_x - u_x"]), (0, "0\n".into(), String::new()));
        assert_eq!(call(&["td", "x", "u^2"]).1, "2*u*u_x\n");
        assert_eq!(call(&["symbol", "u_t - u_xx"]).1, "-xi_x^2\n");
        assert_eq!(call(&["bracket", "u_t", "u_x"]).0, 0);
        assert_eq!(call(&["multibracket", "u_t - u_xx", "u^2"]).0, 1);
        assert_eq!(call(&["lin", "u_t"]), (1, "D_t\n".into(), String::new()));
    }

    #[test]
    fn mayer_scale_and_shift() {
        let args = ["mayer", "u_t - u_xx", "t*u_t - x*u_x + 3*x^3"];
        assert_eq!(call(&args).0, 1);
        let shifted = [&args[..], &["--minus", "3*u_t - 18*x"]].concat();
        assert_eq!(call(&shifted).1, "0\n");
        let scaled = [&args[..], &["--scale", "2", "--minus", "6*u_t - 36*x"]].concat();
        assert_eq!(call(&scaled).1, "0\n");
    }

    #[test]
    fn reports() {
        let (code, text, _) = call(&["compat", "u_t - u", "u_x - u"]);
        assert_eq!(code, 0);
        assert!(text.starts_with("compatible\ntransversal: true"));
        let (code, text, _) = call(&["--json", "compat", "u_t - u_xx", "u_t - u_xx"]);
        assert_eq!(code, 1);
        assert!(text.contains("\"verdict\":\"inconclusive\""));
        assert_eq!(call(&["symmetry", "u_t - u_xx", "x^2"]).0, 1);
        assert_eq!(call(&["iconds", "u_t - u", "u_x - u"]).0, 0);
        assert_eq!(call(&["ci-check", "u_t - u", "u_x - u"]).1, "true\n");
    }

    #[test]
    fn ansatz_and_ode() {
        assert_eq!(call(&["ansatz-check", "u = exp(t + x)", "u_t - u_xx", "u_x - u"]).0, 0);
        assert_eq!(call(&["ansatz-check", "u = x^2", "u_t - u_xx"]).1, "-2\n");
        assert_eq!(call(&["ansatz-check", "u_x = x", "u"]).0, 2);
        let (code, text, _) = call(&["--ctx", "/nonexistent", "eval", "u"]);
        assert_eq!((code, text.as_str()), (2, ""));
    }

    #[test]
    fn errors_map_to_exit_codes() {
        assert_eq!(call(&[]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
        assert_eq!(call(&["eval", "w"]).0, 2);
        assert_eq!(call(&["frobenius", "u_t"]).0, 2);
        assert_eq!(exit_code(&Error::Budget(1)), 3);
        assert_eq!(call(&["--order", "grevlex", "mayer", "u_t", "u_x"]).0, 0);
    }
}
