use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign as FloatSign};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

pub(crate) fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Slight upward nudge so that f64 bookkeeping of bounds never undershoots.
const INFLATE: f64 = 1.0 + 1e-12;

fn ulp(p: usize) -> f64 {
    2f64.powi(1 - p as i32)
}

/// A real number at a fixed binary precision together with a bound on its
/// absolute error.
#[derive(Clone, Debug)]
pub struct BigReal {
    v: BigFloat,
    err: f64,
    p: usize,
}

impl BigReal {
    pub(crate) fn from_parts(v: BigFloat, err: f64, p: usize) -> Self {
        BigReal { v, err, p }
    }

    /// Wraps a freshly rounded value, charging one rounding error.
    pub(crate) fn rounded(v: BigFloat, err: f64, p: usize) -> Self {
        let mut r = BigReal { v, err, p };
        r.err = (r.err + r.abs_f64() * ulp(p)) * INFLATE;
        r
    }

    pub fn zero(p: usize) -> Self {
        BigReal::from_parts(BigFloat::from_word(0, p), 0.0, p)
    }

    pub fn one(p: usize) -> Self {
        BigReal::from_parts(BigFloat::from_word(1, p), 0.0, p)
    }

    pub fn from_i64(n: i64, p: usize) -> Self {
        BigReal::from_parts(BigFloat::from_i64(n, p.max(64)), 0.0, p)
    }

    pub fn from_u64(n: u64, p: usize) -> Self {
        BigReal::from_parts(BigFloat::from_u64(n, p.max(64)), 0.0, p)
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64, p: usize) -> Self {
        BigReal::from_parts(BigFloat::from_f64(x, p.max(64)), 0.0, p)
    }

    pub fn from_ratio(num: i64, den: i64, p: usize) -> Self {
        BigReal::from_i64(num, p) / BigReal::from_i64(den, p)
    }

    pub fn from_bigint(n: &BigInt, p: usize) -> Self {
        if let Some(small) = n.to_i64() {
            return BigReal::from_i64(small, p);
        }
        let (sign, digits) = n.to_u64_digits();
        let base = BigReal::from_f64(18446744073709551616.0, p);
        let mut acc = BigReal::zero(p);
        for d in digits.iter().rev() {
            acc = &(&acc * &base) + &BigReal::from_u64(*d, p);
        }
        if sign == num_bigint::Sign::Minus {
            acc = -acc;
        }
        acc
    }

    pub fn from_rational(q: &BigRational, p: usize) -> Self {
        if q.is_zero() {
            return BigReal::zero(p);
        }
        BigReal::from_bigint(q.numer(), p) / BigReal::from_bigint(q.denom(), p)
    }

    pub fn pi(p: usize) -> Self {
        let v = with_consts(|cc| cc.pi(p, RM));
        BigReal::rounded(v, 0.0, p)
    }

    pub fn ln2(p: usize) -> Self {
        let v = with_consts(|cc| cc.ln_2(p, RM));
        BigReal::rounded(v, 0.0, p)
    }

    pub fn prec(&self) -> usize {
        self.p
    }

    pub fn error(&self) -> f64 {
        self.err
    }

    pub fn value(&self) -> &BigFloat {
        &self.v
    }

    pub fn with_error(mut self, err: f64) -> Self {
        self.err = err;
        self
    }

    /// Widens the bound by `extra` (truncation of a series, say).
    pub fn add_error(mut self, extra: f64) -> Self {
        self.err = (self.err + extra.abs()) * INFLATE;
        self
    }

    pub fn set_prec(&self, p: usize) -> Self {
        let mut v = self.v.clone();
        if v.set_precision(p.max(64), RM).is_err() {
            return self.clone().with_error(f64::INFINITY);
        }
        BigReal::rounded(v, self.err, p)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative() && !self.v.is_zero()
    }

    /// Nearest double (truncated mantissa).
    pub fn to_f64(&self) -> f64 {
        match self.v.as_raw_parts() {
            None => f64::NAN,
            Some((m, _, s, e, _)) => {
                let top = match m.last() {
                    Some(&w) if w != 0 => w,
                    _ => return 0.0,
                };
                let next = if m.len() >= 2 { m[m.len() - 2] } else { 0 };
                let frac = top as f64 + next as f64 / 18446744073709551616.0;
                let mag = frac * 2f64.powi(e - 64);
                if s == FloatSign::Neg {
                    -mag
                } else {
                    mag
                }
            }
        }
    }

    /// Upper bound on `|value|` as a double.
    pub fn abs_f64(&self) -> f64 {
        self.to_f64().abs() * (1.0 + 1e-15)
    }

    /// Upper bound on `|x|` over the enclosed interval.
    pub fn mag(&self) -> f64 {
        (self.abs_f64() + self.err) * INFLATE
    }

    /// Lower bound on `|x|` over the enclosed interval (zero if it may vanish).
    pub fn mig(&self) -> f64 {
        (self.to_f64().abs() * (1.0 - 1e-15) - self.err).max(0.0)
    }

    pub fn abs(&self) -> Self {
        BigReal::from_parts(self.v.abs(), self.err, self.p)
    }

    pub fn mul_i64(&self, n: i64) -> Self {
        self * &BigReal::from_i64(n, self.p)
    }

    pub fn div_i64(&self, n: i64) -> Self {
        self / &BigReal::from_i64(n, self.p)
    }

    /// Exact multiplication by `2^k`.
    pub fn mul_pow2(&self, k: i32) -> Self {
        if self.v.is_zero() {
            return BigReal::from_parts(self.v.clone(), self.err * 2f64.powi(k), self.p);
        }
        let mut v = self.v.clone();
        let e = v.exponent().unwrap_or(0);
        v.set_exponent(e + k);
        BigReal::from_parts(v, self.err * 2f64.powi(k), self.p)
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = BigReal::one(self.p);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn recip(&self) -> Self {
        &BigReal::one(self.p) / self
    }

    pub fn sqr(&self) -> Self {
        self * self
    }

    /// Numeric comparison of the midpoints.
    pub fn cmp_value(&self, other: &BigReal) -> Ordering {
        match self.v.cmp(&other.v) {
            Some(c) if c < 0 => Ordering::Less,
            Some(c) if c > 0 => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }

    /// `|a - b|` as a double, ignoring error bounds.
    pub fn distance(&self, other: &BigReal) -> f64 {
        let p = self.p.max(other.p);
        BigReal::from_parts(self.v.sub(&other.v, p, RM), 0.0, p).abs_f64()
    }

    /// Decimal digits of the midpoint, `digits` significant figures.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.v.is_zero() {
            return "0".to_string();
        }
        let raw = with_consts(|cc| self.v.format(Radix::Dec, RM, cc)).unwrap_or_default();
        format_decimal(&raw, digits.max(1))
    }

    /// `value±err` with as many digits as the bound supports.
    pub fn render(&self) -> String {
        let mag = self.to_f64().abs();
        let digits = if self.err > 0.0 && mag > 0.0 {
            ((mag / self.err).log10().floor() as i64 + 1).clamp(1, 60) as usize
        } else {
            (self.p as f64 / std::f64::consts::LOG2_10) as usize
        };
        format!("{}±{:.1e}", self.to_decimal(digits), self.err)
    }

    /// `x` must enclose only positive values.
    pub fn require_positive(&self, what: &str) -> Result<()> {
        if self.is_negative() || self.mig() == 0.0 {
            return Err(Error::Domain(format!("{what} requires a positive argument")));
        }
        Ok(())
    }
}

/// Rounds a `d.ddd…e±x` string to `digits` significant figures and lays it
/// out in fixed notation when the exponent is moderate.
fn format_decimal(raw: &str, digits: usize) -> String {
    let (neg, body) = match raw.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, raw),
    };
    let (mant, exp) = match body.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let mut ds: Vec<u8> = mant.bytes().filter(u8::is_ascii_digit).map(|b| b - b'0').collect();
    let lead = ds.iter().position(|&d| d != 0).unwrap_or(ds.len());
    if lead == ds.len() {
        return "0".to_string();
    }
    let point = mant.find('.').unwrap_or(mant.len()) as i64;
    let mut exp10 = exp + point - 1 - lead as i64;
    ds.drain(..lead);
    if ds.len() > digits {
        let round_up = ds[digits] >= 5;
        ds.truncate(digits);
        if round_up {
            let mut i = digits;
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    ds.truncate(digits);
                    exp10 += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
    }
    while ds.len() > 1 && *ds.last().unwrap() == 0 {
        ds.pop();
    }
    let text: String = ds.iter().map(|d| char::from(b'0' + d)).collect();
    let out = if (-6..21).contains(&exp10) {
        if exp10 < 0 {
            format!("0.{}{}", "0".repeat((-exp10 - 1) as usize), text)
        } else if (exp10 as usize) + 1 >= text.len() {
            format!("{}{}", text, "0".repeat(exp10 as usize + 1 - text.len()))
        } else {
            let (a, b) = text.split_at(exp10 as usize + 1);
            format!("{a}.{b}")
        }
    } else if text.len() == 1 {
        format!("{text}e{exp10}")
    } else {
        format!("{}.{}e{exp10}", &text[..1], &text[1..])
    };
    if neg {
        format!("-{out}")
    } else {
        out
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<'a> Add<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    fn add(self, o: &BigReal) -> BigReal {
        let p = self.p.max(o.p);
        BigReal::rounded(self.v.add(&o.v, p, RM), self.err + o.err, p)
    }
}

impl<'a> Sub<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, o: &BigReal) -> BigReal {
        let p = self.p.max(o.p);
        BigReal::rounded(self.v.sub(&o.v, p, RM), self.err + o.err, p)
    }
}

impl<'a> Mul<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    fn mul(self, o: &BigReal) -> BigReal {
        let p = self.p.max(o.p);
        let err = self.abs_f64() * o.err + o.abs_f64() * self.err + self.err * o.err;
        BigReal::rounded(self.v.mul(&o.v, p, RM), err, p)
    }
}

impl<'a> Div<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    fn div(self, o: &BigReal) -> BigReal {
        let p = self.p.max(o.p);
        let q = self.v.div(&o.v, p, RM);
        let denom = o.mig();
        let qa = BigReal::from_parts(q.clone(), 0.0, p).abs_f64();
        let err = if o.err == 0.0 && self.err == 0.0 {
            0.0
        } else if denom > 0.0 {
            (self.err + qa * o.err) / denom
        } else {
            f64::INFINITY
        };
        if q.is_nan() || q.is_inf() {
            return BigReal::from_parts(BigFloat::from_word(0, p), f64::INFINITY, p);
        }
        BigReal::rounded(q, err, p)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        let mut v = self.v.clone();
        v.inv_sign();
        BigReal::from_parts(v, self.err, self.p)
    }
}

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, o: BigReal) -> BigReal {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, o: &BigReal) -> BigReal {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $m(self, o: BigReal) -> BigReal {
                self.$m(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

/// Sum of a sequence at the precision of its first element.
pub fn sum<'a>(p: usize, items: impl IntoIterator<Item = &'a BigReal>) -> BigReal {
    items
        .into_iter()
        .fold(BigReal::zero(p), |acc, x| &acc + x)
}

/// Rational approximation helper for reports: the closest `n/d` with `d <= cap`.
pub fn best_rational(x: f64, cap: i64) -> Option<(i64, i64)> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > cap as i128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = y - a;
        if frac.abs() < 1e-18 {
            break;
        }
        y = 1.0 / frac;
    }
    if k1 == 0 {
        return None;
    }
    Some((h1 as i64, k1 as i64))
}

/// Exact rational from a small numerator/denominator pair.
pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: usize = 160;

    #[test]
    fn exact_small_integers() {
        let a = BigReal::from_i64(7, P);
        let b = BigReal::from_i64(-3, P);
        let s = &a + &b;
        assert_eq!(s.to_f64(), 4.0);
        assert_eq!((&a * &b).to_f64(), -21.0);
        assert!(s.error() < 1e-40);
    }

    #[test]
    fn to_f64_reads_mantissa() {
        let x = BigReal::from_f64(-25.75, P);
        assert_eq!(x.to_f64(), -25.75);
        assert_eq!(BigReal::from_f64(1e-30, P).to_f64(), 1e-30);
        assert_eq!(BigReal::zero(P).to_f64(), 0.0);
    }

    #[test]
    fn division_bounds() {
        let third = BigReal::from_ratio(1, 3, P);
        let back = &third * &BigReal::from_i64(3, P);
        assert!((back.to_f64() - 1.0).abs() < 1e-15);
        assert!(back.distance(&BigReal::one(P)) <= back.error());
        let fuzzy = BigReal::from_i64(1, P).with_error(2.0);
        assert!((&third / &fuzzy).error().is_infinite());
    }

    #[test]
    fn pow2_is_exact() {
        let x = BigReal::from_ratio(1, 3, P);
        let y = x.mul_pow2(5);
        assert!(y.distance(&x.mul_i64(32)) < 1e-40);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(BigReal::from_f64(-25.75, P).to_decimal(4), "-25.75");
        assert_eq!(BigReal::from_f64(-25.75, P).to_decimal(3), "-25.8");
        assert_eq!(BigReal::from_f64(0.00125, P).to_decimal(2), "0.0013");
        assert_eq!(BigReal::from_f64(999.96, P).to_decimal(4), "1000");
        assert_eq!(BigReal::from_f64(1e30, P).to_decimal(3), "1e30");
        let pi = BigReal::pi(P);
        assert_eq!(pi.to_decimal(20), "3.1415926535897932385");
        assert!(pi.render().starts_with("3.14159265358979323846264338327950288"));
    }

    #[test]
    fn best_rational_recovers_small_fractions() {
        assert_eq!(best_rational(31.0 / 16.0, 1_000_000_000), Some((31, 16)));
        assert_eq!(best_rational(-0.4375, 1000), Some((-7, 16)));
    }

    #[test]
    fn bigint_conversion() {
        let n: BigInt = "123456789012345678901234567890".parse().unwrap();
        let x = BigReal::from_bigint(&n, P);
        assert!((x.to_f64() / 1.2345678901234568e29 - 1.0).abs() < 1e-14);
        let q = BigRational::new(BigInt::from(-691), BigInt::from(2730));
        assert!((BigReal::from_rational(&q, P).to_f64() + 691.0 / 2730.0).abs() < 1e-16);
    }
}
