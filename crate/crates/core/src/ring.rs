//! Minimal algebraic interfaces shared by the exact containers.
//!
//! Matrices and polynomials are generic over these so that the same division-free
//! characteristic-polynomial recurrence runs over `Q(i)`, `Q(i)[x]` and rational
//! function fields.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::GaussianRational;

pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(n: i64) -> Self {
        let mut acc = Self::zero();
        let mut base = if n < 0 { -Self::one() } else { Self::one() };
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc + base.clone();
            }
            base = base.clone() + base;
            k >>= 1;
        }
        acc
    }

    fn from_scalar(c: &GaussianRational) -> Self;
}

/// A ring in which every nonzero element is invertible. `Div` panics on zero.
pub trait Field: Ring + Div<Output = Self> {}

impl Ring for GaussianRational {
    fn from_i64(n: i64) -> Self {
        GaussianRational::from_int(n)
    }
    fn from_scalar(c: &GaussianRational) -> Self {
        c.clone()
    }
}

impl Field for GaussianRational {}

/// Human-readable rendering with caller-supplied indeterminate names.
///
/// `vars[0]` names the outermost indeterminate; nested coefficient types consume
/// the rest of the slice.
pub trait Pretty {
    fn pretty(&self, vars: &[&str]) -> String;
}

impl Pretty for GaussianRational {
    fn pretty(&self, _vars: &[&str]) -> String {
        self.to_string()
    }
}

/// Splits a rendered coefficient into (negative, magnitude text, needs parentheses).
pub(crate) fn coefficient_parts(text: &str) -> (bool, &str, bool) {
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) if !is_compound(rest) => (true, rest),
        _ => (false, text),
    };
    (neg, body, is_compound(body))
}

fn is_compound(s: &str) -> bool {
    s.contains(' ') || s.chars().skip(1).any(|c| c == '+' || c == '-')
}

/// Joins `(coefficient text, monomial text)` pairs, leading term first, into
/// `a*m1 - b*m2 + m3` form. An empty monomial text marks the constant term.
pub(crate) fn join_terms(terms: impl IntoIterator<Item = (String, String)>) -> String {
    let mut out = String::new();
    for (k, (coef, mono)) in terms.into_iter().enumerate() {
        let (neg, body, compound) = match coef.strip_prefix('-') {
            Some(rest) if mono.is_empty() && coef.contains(' ') => (true, rest, false),
            None if mono.is_empty() && coef.contains(' ') => (false, coef.as_str(), false),
            _ => coefficient_parts(&coef),
        };
        let body_text = if mono.is_empty() {
            if compound && k > 0 {
                format!("({body})")
            } else {
                body.to_string()
            }
        } else if body == "1" {
            mono.clone()
        } else if compound {
            format!("({body})*{mono}")
        } else {
            format!("{body}*{mono}")
        };
        match (k, neg) {
            (0, true) => {
                out.push('-');
                out.push_str(&body_text);
            }
            (0, false) => out.push_str(&body_text),
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body_text);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body_text);
            }
        }
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_i64_by_doubling() {
        assert_eq!(<GaussianRational as Ring>::from_i64(-13), GaussianRational::from_int(-13));
        let p = crate::poly::UniPoly::<GaussianRational>::from_i64(6);
        assert_eq!(p, crate::poly::UniPoly::constant(GaussianRational::from_int(6)));
    }

    #[test]
    fn term_joining() {
        let t = join_terms(vec![
            ("1".to_string(), "y^2".to_string()),
            ("-6".to_string(), "y".to_string()),
            ("9".to_string(), String::new()),
        ]);
        assert_eq!(t, "y^2 - 6*y + 9");
        let t = join_terms(vec![("1+i".to_string(), "x".to_string()), ("-1/2".to_string(), String::new())]);
        assert_eq!(t, "(1+i)*x - 1/2");
        let t = join_terms(vec![("1".to_string(), "D".to_string()), ("-x^2 - 1".to_string(), String::new())]);
        assert_eq!(t, "D - x^2 - 1");
        assert_eq!(join_terms(Vec::new()), "0");
    }
}
