//! Exact Gaussian-rational scalars `a + b·i` with `a, b ∈ Q`, plus the bridge to
//! double-precision complex numbers used by the numeric eigenvalue layer.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

/// Double-precision complex value produced by [`GaussianRational::to_approx`].
pub type ApproxComplex = Complex64;

/// An exact element of `Q(i)`.
///
/// Both parts are kept in lowest terms with positive denominators (this is what
/// `BigRational` guarantees), so structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_integers(re: i64, im: i64) -> Self {
        Self::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_integers(n, 0)
    }

    /// `numer / denom` as a real Gaussian rational. Panics when `denom == 0`.
    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::new(BigRational::new(numer.into(), denom.into()), BigRational::zero())
    }

    pub fn i() -> Self {
        Self::from_integers(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `a² + b²`, always a non-negative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    /// Whether both parts have denominator one.
    pub fn is_gaussian_integer(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }

    /// Least common multiple of the two part denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }

    /// Componentwise nearest doubles.
    ///
    /// Parts whose magnitude exceeds the double range come back as `±inf`; callers
    /// treat that as an input outside the numeric layer's scope.
    pub fn to_approx(&self) -> ApproxComplex {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    /// Nearest Gaussian integer to `z`, `None` for non-finite input.
    pub fn round_from_approx(z: ApproxComplex) -> Option<Self> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return None;
        }
        let re = BigRational::from_float(z.re.round())?;
        let im = BigRational::from_float(z.im.round())?;
        Some(Self::new(re, im))
    }

    /// Exact value of a finite double, `None` for NaN/inf.
    pub fn from_f64(x: f64) -> Option<Self> {
        Some(Self::new(BigRational::from_float(x)?, BigRational::zero()))
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }
}

fn rational_to_f64(q: &BigRational) -> f64 {
    match q.to_f64() {
        Some(x) => x,
        None if q.is_negative() => f64::NEG_INFINITY,
        None => f64::INFINITY,
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(q: BigRational) -> Self {
        Self::new(q, BigRational::zero())
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussianRational::from(&self.re * &o.re);
        }
        GaussianRational::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, o: &GaussianRational) -> GaussianRational {
        let inv = o.inv().expect("division by zero Gaussian rational");
        Mul::mul(self, &inv)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

macro_rules! forward_by_value {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: GaussianRational) -> GaussianRational {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: &GaussianRational) -> GaussianRational {
                (&self).$m(o)
            }
        }
    )*};
}
forward_by_value!(Add add, Sub sub, Mul mul, Div div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, o: &GaussianRational) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, o: &GaussianRational) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, o: &GaussianRational) {
        *self = &*self * o;
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for GaussianRational {
    /// Canonical text form: `a`, `c*i`, `a+c*i` or `a-c*i` with `a`, `c` written
    /// as `n` or `n/d`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_text = |abs_im: &BigRational| -> String {
            if abs_im.is_one() {
                "i".to_string()
            } else {
                format!("{}*i", fmt_rational(abs_im))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => {
                let sign = if self.im.is_negative() { "-" } else { "" };
                write!(f, "{sign}{}", im_text(&self.im.abs()))
            }
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(f, "{}{sign}{}", fmt_rational(&self.re), im_text(&self.im.abs()))
            }
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `n`, `n/d` or a decimal like `-1.25` into an exact rational.
pub(crate) fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let bad = || ParseError::Scalar(s.to_string());
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() {
        return Err(bad());
    }
    let q = if let Some((n, d)) = body.split_once('/') {
        let n: BigInt = parse_digits(n).ok_or_else(bad)?;
        let d: BigInt = parse_digits(d).ok_or_else(bad)?;
        if d.is_zero() {
            return Err(ParseError::ZeroDenominator(s.to_string()));
        }
        BigRational::new(n, d)
    } else if let Some((int, frac)) = body.split_once('.') {
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        let int = if int.is_empty() { BigInt::zero() } else { parse_digits(int).ok_or_else(bad)? };
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let frac = if frac.is_empty() { BigInt::zero() } else { parse_digits(frac).ok_or_else(bad)? };
        BigRational::new(int * &scale + frac, scale)
    } else {
        BigRational::from_integer(parse_digits(body).ok_or_else(bad)?)
    };
    Ok(if sign < 0 { -q } else { q })
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl FromStr for GaussianRational {
    type Err = ParseError;

    /// Accepts `a`, `a/b`, `c/d*i`, `a/b+c/d*i`, `a-c*i`, `i`, `-i` and decimals.
    fn from_str(raw: &str) -> Result<Self, ParseError> {
        let s: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(ParseError::Scalar(raw.to_string()));
        }
        // Split before the last sign that is not in leading position.
        let split = s.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(k, _)| k).last();
        let (first, second) = match split {
            Some(k) => (&s[..k], Some(&s[k..])),
            None => (s.as_str(), None),
        };
        let imag_part = |t: &str| -> Result<BigRational, ParseError> {
            let body = t.strip_suffix('i').ok_or_else(|| ParseError::Scalar(raw.to_string()))?;
            let body = body.strip_suffix('*').unwrap_or(body);
            match body {
                "" | "+" => Ok(BigRational::one()),
                "-" => Ok(-BigRational::one()),
                _ => parse_rational(body).map_err(|_| ParseError::Scalar(raw.to_string())),
            }
        };
        let real_part = |t: &str| parse_rational(t).map_err(|_| ParseError::Scalar(raw.to_string()));
        match second {
            None if first.ends_with('i') => Ok(Self::new(BigRational::zero(), imag_part(first)?)),
            None => Ok(Self::from(real_part(first)?)),
            Some(second) if second.ends_with('i') && !first.ends_with('i') => {
                Ok(Self::new(real_part(first)?, imag_part(second)?))
            }
            Some(_) => Err(ParseError::Scalar(raw.to_string())),
        }
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(Self::from_int(n)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    #[test]
    fn approx_examples() {
        let x = q("1/2+1/3*i").to_approx();
        assert_eq!(x.re, 0.5);
        assert_eq!(x.im, 1.0 / 3.0);
        assert_eq!(GaussianRational::zero().to_approx(), Complex64::new(0.0, 0.0));
        assert_eq!(q("7").to_approx(), Complex64::new(7.0, 0.0));
    }

    #[test]
    fn approx_overflows_to_infinity() {
        let huge = GaussianRational::from(BigRational::from_integer(BigInt::from(10).pow(400)));
        assert_eq!(huge.to_approx().re, f64::INFINITY);
        assert_eq!((-huge).to_approx().re, f64::NEG_INFINITY);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(q("3"), GaussianRational::from_int(3));
        assert_eq!(q("-3/6"), GaussianRational::from_ratio(-1, 2));
        assert_eq!(q("i"), GaussianRational::i());
        assert_eq!(q("-i"), -GaussianRational::i());
        assert_eq!(q("2*i"), GaussianRational::from_integers(0, 2));
        assert_eq!(q("1/2 - 3/4*i").im(), &BigRational::new((-3).into(), 4.into()));
        assert_eq!(q("+1-i"), GaussianRational::from_integers(1, -1));
        assert_eq!(q("0.25"), GaussianRational::from_ratio(1, 4));
        assert!("1/0".parse::<GaussianRational>().is_err());
        assert!("abc".parse::<GaussianRational>().is_err());
        assert!("1+2".parse::<GaussianRational>().is_err());
        assert!("i+i".parse::<GaussianRational>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["0", "5", "-1/2", "i", "-i", "3/4*i", "1/2+1/3*i", "-2-7/5*i"] {
            assert_eq!(q(s).to_string(), s);
            assert_eq!(q(&q(s).to_string()), q(s));
        }
    }

    #[test]
    fn inverse_and_division() {
        let z = q("1+2*i");
        assert_eq!(&z * &z.inv().unwrap(), GaussianRational::one());
        assert_eq!(&q("5") / &z, q("1-2*i"));
        assert!(GaussianRational::zero().inv().is_none());
    }

    #[test]
    fn serde_accepts_text_and_integers() {
        let v: Vec<GaussianRational> = serde_json::from_str(r#"["1/2", 3, "-i"]"#).unwrap();
        assert_eq!(v, vec![q("1/2"), q("3"), q("-i")]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["1/2","3","-i"]"#);
    }
}
