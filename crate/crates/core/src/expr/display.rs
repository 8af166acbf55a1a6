use std::fmt;

use num_traits::{One, Signed};

use super::{Expr, Exponent, Monomial, RatFunc};

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (i, (k, e)) in self.factors().iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{k}")?;
            write_exponent(*e, f)?;
        }
        Ok(())
    }
}

fn write_exponent(e: Exponent, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if e.is_one() {
        Ok(())
    } else if e.is_integer() && e.is_positive() {
        write!(f, "^{}", e.numer())
    } else if e.is_integer() {
        write!(f, "^({})", e.numer())
    } else {
        write!(f, "^({}/{})", e.numer(), e.denom())
    }
}

/// Coefficient written as a factor in front of a non-constant monomial,
/// including the trailing `*`. Empty for 1.
fn coefficient_prefix(c: &RatFunc) -> String {
    match c {
        RatFunc::Rational(q) if q.is_one() => String::new(),
        RatFunc::Rational(q) if q.is_integer() => format!("{}*", q.numer()),
        RatFunc::Rational(q) => format!("({}/{})*", q.numer(), q.denom()),
        RatFunc::Fraction { num, den } => {
            let den_one = den.as_constant().is_some_and(|d| d.is_one());
            if den_one && num.terms().count() == 1 {
                format!("{num}*")
            } else if den_one {
                format!("({num})*")
            } else {
                format!("({num})/({den})*")
            }
        }
    }
}

/// Constant term inside a longer sum.
fn constant_term(c: &RatFunc) -> String {
    match c {
        RatFunc::Fraction { num, den }
            if den.as_constant().is_some_and(|d| d.is_one()) && num.terms().count() > 1 =>
        {
            format!("({num})")
        }
        _ => c.to_string(),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if let Some(c) = self.as_constant() {
            return write!(f, "{c}");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let a = if neg { c.neg() } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if m.is_one() {
                write!(f, "{}", constant_term(&a))?;
            } else {
                write!(f, "{}{m}", coefficient_prefix(&a))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}
