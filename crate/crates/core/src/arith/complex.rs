use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::{BigReal, PrecisionContext};
use crate::error::{Error, Result};

/// A complex number as a pair of [`BigReal`]s; each part carries its own bound.
#[derive(Clone, Debug)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        BigComplex { re, im }
    }

    pub fn real(re: BigReal) -> Self {
        let p = re.prec();
        BigComplex {
            re,
            im: BigReal::zero(p),
        }
    }

    pub fn zero(p: usize) -> Self {
        BigComplex::real(BigReal::zero(p))
    }

    pub fn one(p: usize) -> Self {
        BigComplex::real(BigReal::one(p))
    }

    pub fn i(p: usize) -> Self {
        BigComplex::new(BigReal::zero(p), BigReal::one(p))
    }

    pub fn from_f64(re: f64, im: f64, p: usize) -> Self {
        BigComplex::new(BigReal::from_f64(re, p), BigReal::from_f64(im, p))
    }

    pub fn prec(&self) -> usize {
        self.re.prec().max(self.im.prec())
    }

    /// Bound on `|error|` as a complex number.
    pub fn error(&self) -> f64 {
        self.re.error().hypot(self.im.error())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        BigComplex::new(self.re.clone(), -&self.im)
    }

    pub fn scale(&self, s: &BigReal) -> Self {
        BigComplex::new(&self.re * s, &self.im * s)
    }

    pub fn norm_sqr(&self) -> BigReal {
        &self.re.sqr() + &self.im.sqr()
    }

    pub fn abs(&self) -> BigReal {
        self.norm_sqr().sqrt().expect("non-negative")
    }

    pub fn mul_i64(&self, n: i64) -> Self {
        BigComplex::new(self.re.mul_i64(n), self.im.mul_i64(n))
    }

    pub fn div_i64(&self, n: i64) -> Self {
        BigComplex::new(self.re.div_i64(n), self.im.div_i64(n))
    }

    pub fn recip(&self) -> Self {
        &BigComplex::one(self.prec()) / self
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = BigComplex::one(self.prec());
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

    /// `|a - b|` of the midpoints.
    pub fn distance(&self, other: &BigComplex) -> f64 {
        self.re.distance(&other.re).hypot(self.im.distance(&other.im))
    }

    /// Principal argument in `(-π, π]`; the negative real axis maps to `+π`.
    pub fn arg(&self) -> Result<BigReal> {
        let p = self.prec();
        let x = &self.re;
        let y = &self.im;
        if x.is_zero() && y.is_zero() {
            return Err(Error::Domain("argument of zero".into()));
        }
        let pi = BigReal::pi(p);
        if x.to_f64().abs() >= y.to_f64().abs() {
            let base = (y / x).atan();
            if x.is_negative() {
                if y.is_negative() {
                    Ok(&base - &pi)
                } else {
                    Ok(&base + &pi)
                }
            } else {
                Ok(base)
            }
        } else {
            let base = (x / y).atan();
            let half = pi.mul_pow2(-1);
            if y.is_negative() {
                Ok(&(-&half) - &base)
            } else {
                Ok(&half - &base)
            }
        }
    }

    pub fn exp(&self) -> Self {
        let m = self.re.exp();
        BigComplex::new(&m * &self.im.cos(), &m * &self.im.sin())
    }

    /// Principal logarithm, cut along the negative real axis.
    pub fn ln(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("log of zero".into()));
        }
        let modulus = self.norm_sqr().ln()?.mul_pow2(-1);
        Ok(BigComplex::new(modulus, self.arg()?))
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(BigComplex::zero(self.prec()));
        }
        Ok(self.ln()?.scale(&BigReal::from_f64(0.5, self.prec())).exp())
    }

    /// Principal power `exp(α log z)`.
    pub fn pow(&self, alpha: &BigComplex) -> Result<Self> {
        Ok((alpha * &self.ln()?).exp())
    }

    pub fn sin(&self) -> Self {
        BigComplex::new(
            &self.re.sin() * &self.im.cosh(),
            &self.re.cos() * &self.im.sinh(),
        )
    }

    pub fn cos(&self) -> Self {
        BigComplex::new(
            &self.re.cos() * &self.im.cosh(),
            -(&self.re.sin() * &self.im.sinh()),
        )
    }

    pub fn cot(&self) -> Result<Self> {
        let s = self.sin();
        if s.re.mig() == 0.0 && s.im.mig() == 0.0 {
            return Err(Error::Domain("cot at a pole".into()));
        }
        Ok(&self.cos() / &s)
    }

    pub fn render(&self) -> String {
        format!("({}, {})", self.re.render(), self.im.render())
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Elementary functions reachable through [`elementary`].
#[derive(Debug, Clone)]
pub enum Elementary {
    Exp,
    Log,
    Sqrt,
    Sin,
    Cot,
    Power(BigComplex),
}

pub fn elementary(f: &Elementary, z: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    let z = BigComplex::new(z.re.set_prec(ctx.bits()), z.im.set_prec(ctx.bits()));
    match f {
        Elementary::Exp => Ok(z.exp()),
        Elementary::Log => z.ln(),
        Elementary::Sqrt => z.sqrt(),
        Elementary::Sin => Ok(z.sin()),
        Elementary::Cot => z.cot(),
        Elementary::Power(a) => z.pow(a),
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, o: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, o: &BigComplex) -> BigComplex {
        if self.im.is_zero() && self.im.error() == 0.0 {
            return o.scale(&self.re);
        }
        if o.im.is_zero() && o.im.error() == 0.0 {
            return self.scale(&o.re);
        }
        BigComplex::new(
            &(&self.re * &o.re) - &(&self.im * &o.im),
            &(&self.re * &o.im) + &(&self.im * &o.re),
        )
    }
}

impl<'a> Div<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn div(self, o: &BigComplex) -> BigComplex {
        if o.im.is_zero() && o.im.error() == 0.0 {
            return BigComplex::new(&self.re / &o.re, &self.im / &o.re);
        }
        let d = o.norm_sqr();
        let num = self * &o.conj();
        BigComplex::new(&num.re / &d, &num.im / &d)
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(-&self.re, -&self.im)
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, o: BigComplex) -> BigComplex {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, o: &BigComplex) -> BigComplex {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<BigComplex> for &'a BigComplex {
            type Output = BigComplex;
            fn $m(self, o: BigComplex) -> BigComplex {
                self.$m(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::digits(30).unwrap()
    }

    #[test]
    fn exp_zero_is_one() {
        let c = ctx();
        let r = elementary(&Elementary::Exp, &BigComplex::zero(c.bits()), &c).unwrap();
        assert!(r.distance(&BigComplex::one(c.bits())) <= r.error());
    }

    #[test]
    fn sqrt_minus_one_is_i() {
        let c = ctx();
        let z = BigComplex::from_f64(-1.0, 0.0, c.bits());
        let r = elementary(&Elementary::Sqrt, &z, &c).unwrap();
        assert!(r.distance(&BigComplex::i(c.bits())) <= r.error() + 1e-40);
        assert!(r.error() < c.epsilon());
    }

    #[test]
    fn cot_quarter_pi() {
        let c = ctx();
        let z = BigComplex::real(BigReal::pi(c.bits()).mul_pow2(-2));
        let r = elementary(&Elementary::Cot, &z, &c).unwrap();
        assert!(r.distance(&BigComplex::one(c.bits())) <= r.error());
        assert!(r.error() < c.epsilon());
    }

    #[test]
    fn log_zero_is_domain_error() {
        let c = ctx();
        assert!(matches!(
            elementary(&Elementary::Log, &BigComplex::zero(c.bits()), &c),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn branch_cut_sides() {
        let c = ctx();
        let p = c.bits();
        let above = BigComplex::from_f64(-2.0, 1e-30, p).ln().unwrap();
        let below = BigComplex::from_f64(-2.0, -1e-30, p).ln().unwrap();
        assert!((above.im.to_f64() - std::f64::consts::PI).abs() < 1e-15);
        assert!((below.im.to_f64() + std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn power_and_trig() {
        let p = ctx().bits();
        let z = BigComplex::from_f64(0.3, 0.7, p);
        let sq = z.pow(&BigComplex::from_f64(2.0, 0.0, p)).unwrap();
        assert!(sq.distance(&(&z * &z)) <= sq.error() + (&z * &z).error());
        let s = z.sin();
        let co = z.cos();
        let one = &(&s * &s) + &(&co * &co);
        assert!(one.distance(&BigComplex::one(p)) <= one.error());
        let back = z.exp().ln().unwrap();
        assert!(back.distance(&z) <= back.error());
    }
}
