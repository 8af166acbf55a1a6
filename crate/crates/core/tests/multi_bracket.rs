//! Multi-brackets for two dependent variables against a literal expansion
//! that builds each linearization component from jet partials.

use jetcalc::linops::multi_bracket;
use jetcalc::parse::parse;
use jetcalc::{Expr, JetContext};

fn ctx() -> JetContext {
    JetContext::new(&["t", "x"], &["u", "v"]).unwrap()
}

/// `l_{F, dep}(H) = sum_sigma dF/du^dep_sigma D_sigma H`.
fn lin_component(c: &JetContext, f: &Expr, dep: usize, h: &Expr) -> Expr {
    let mut out = Expr::zero();
    for k in c.jets(f) {
        let (d, sigma) = k.as_jet().unwrap();
        if d != dep {
            continue;
        }
        let coeff = c.jet_partial(f, &k).unwrap();
        out = out.add(&coeff.mul(&c.total_derivative_multi(h, sigma).unwrap()));
    }
    out
}

fn oracle(c: &JetContext, fs: &[Expr; 3]) -> Expr {
    let s3: [([usize; 3], i64); 6] = [
        ([0, 1, 2], 1),
        ([0, 2, 1], -1),
        ([1, 0, 2], -1),
        ([1, 2, 0], 1),
        ([2, 0, 1], 1),
        ([2, 1, 0], -1),
    ];
    let s2: [([usize; 2], i64); 2] = [([0, 1], 1), ([1, 0], -1)];
    let mut total = Expr::zero();
    for (b, sb) in s3 {
        for (a, sa) in s2 {
            let inner = lin_component(c, &fs[b[1]], a[1], &fs[b[2]]);
            let outer = lin_component(c, &fs[b[0]], a[0], &inner);
            total = total.add(&outer.scale(&jetcalc::RatFunc::from_integer(sa * sb)));
        }
    }
    total.scale(&jetcalc::RatFunc::from_ratio(1, 2))
}

#[test]
fn pinned_linear_triple() {
    let c = ctx();
    let fs = [parse("u_t", &c).unwrap(), parse("v_x", &c).unwrap(), parse("u + v", &c).unwrap()];
    assert!(oracle(&c, &fs).is_zero());
    assert!(multi_bracket(&c, &fs).unwrap().is_zero());
}

#[test]
fn nonlinear_triples_match_expansion() {
    let c = ctx();
    let cases = [
        ["u*u_t", "v*v_x", "u*v"],
        ["u_t - v_xx", "v_t - u_x^2", "u_x*v_x"],
        ["u_tx + t*v", "x*u*v_t", "u^2 + v_x"],
    ];
    for case in cases {
        let fs = case.map(|s| parse(s, &c).unwrap());
        let got = multi_bracket(&c, &fs).unwrap();
        assert_eq!(got, oracle(&c, &fs), "{case:?}");
    }
    let fs = cases[0].map(|s| parse(s, &c).unwrap());
    let pinned = "(1/2)*u^2*v*v_tx + (1/2)*u^2*v_t*v_x + u*u_t*v*v_x + (1/2)*u*u_tx*v^2 \
                  + 2*u*u_x*v*v_t + (1/2)*u_t*u_x*v^2";
    assert_eq!(multi_bracket(&c, &fs).unwrap(), parse(pinned, &c).unwrap());
}

#[test]
fn wrong_count_is_rejected() {
    let c = ctx();
    let u = parse("u", &c).unwrap();
    assert!(multi_bracket(&c, &[u.clone(), u]).is_err());
}
