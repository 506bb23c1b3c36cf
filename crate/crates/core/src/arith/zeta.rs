use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::bernoulli::bernoulli;
use super::{BigReal, PrecisionContext};
use crate::error::{Error, Result};

fn cache() -> &'static Mutex<HashMap<(u32, usize), BigReal>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), BigReal>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `ζ(2m) = (-1)^{m+1} B_{2m} (2π)^{2m} / (2 (2m)!)`.
pub fn zeta_even(n: u32, p: usize) -> BigReal {
    debug_assert!(n >= 2 && n.is_multiple_of(2));
    let m = n / 2;
    let mut coeff = bernoulli(n as usize) / BigRational::from_integer(factorial(n) * BigInt::from(2));
    if m.is_multiple_of(2) {
        coeff = -coeff;
    }
    let two_pi = BigReal::pi(p).mul_pow2(1);
    &BigReal::from_rational(&coeff, p) * &two_pi.powi(n)
}

/// Dirichlet eta `η(n)` by Borwein's acceleration; the remainder is charged
/// to the error bound.
pub fn eta(n: u32, p: usize) -> BigReal {
    let rate = (3.0 + 8f64.sqrt()).log2();
    let big_n = ((p as f64 + 4.0) / rate).ceil() as u32 + 1;
    let mut d = Vec::with_capacity(big_n as usize + 1);
    let mut acc = BigRational::zero();
    let nn = BigInt::from(big_n);
    for i in 0..=big_n {
        let num = factorial(big_n + i - 1) * BigInt::from(4).pow(i);
        let den = factorial(big_n - i) * factorial(2 * i);
        acc += BigRational::new(num * &nn, den);
        d.push(acc.clone());
    }
    let d_n = d[big_n as usize].clone();
    let mut s = BigReal::zero(p);
    for k in 0..big_n {
        let w = (&d[k as usize] - &d_n) / &d_n;
        let term = &BigReal::from_rational(&w, p) / &BigReal::from_u64(k as u64 + 1, p).powi(n);
        s = if k % 2 == 0 { &s - &term } else { &s + &term };
    }
    let tail = 4.0 * (3.0 + 8f64.sqrt()).powi(-(big_n as i32));
    s.add_error(tail)
}

/// `ζ(n)` through `η(n) / (1 - 2^{1-n})` for any `n >= 2`.
pub fn zeta_series(n: u32, p: usize) -> Result<BigReal> {
    if n < 2 {
        return Err(Error::Divergent(format!("zeta({n})")));
    }
    let one = BigReal::one(p);
    let factor = &one - &one.mul_pow2(1 - n as i32);
    Ok(&eta(n, p) / &factor)
}

/// Cached `ζ(n)` at `p` bits: even `n` from Bernoulli numbers, odd `n` from
/// the eta series.
pub fn zeta_at(n: u32, p: usize) -> Result<BigReal> {
    if n < 2 {
        return Err(Error::Divergent(format!("zeta({n})")));
    }
    if let Some(v) = cache().lock().expect("zeta cache").get(&(n, p)) {
        return Ok(v.clone());
    }
    let v = if n.is_multiple_of(2) {
        zeta_even(n, p)
    } else {
        zeta_series(n, p)?
    };
    cache()
        .lock()
        .expect("zeta cache")
        .insert((n, p), v.clone());
    Ok(v)
}

pub fn zeta_int(n: u32, ctx: &PrecisionContext) -> Result<BigReal> {
    zeta_at(n, ctx.bits())
}

/// Series route for every `n`, used to cross-check the Bernoulli closed form.
pub fn zeta_int_series(n: u32, ctx: &PrecisionContext) -> Result<BigReal> {
    zeta_series(n, ctx.bits())
}

/// `ζ(n̄) = -(1 - 2^{1-n}) ζ(n)`.
pub fn zeta_bar_at(n: u32, p: usize) -> Result<BigReal> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "alternating zeta at {n} is outside the supported range n >= 2"
        )));
    }
    let z = zeta_at(n, p)?;
    let one = BigReal::one(p);
    let factor = &one - &one.mul_pow2(1 - n as i32);
    Ok(-(&factor * &z))
}

pub fn zeta_bar(n: u32, ctx: &PrecisionContext) -> Result<BigReal> {
    zeta_bar_at(n, ctx.bits())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::digits(30).unwrap()
    }

    fn within(a: &BigReal, b: &BigReal) -> bool {
        a.distance(b) <= a.error() + b.error()
    }

    #[test]
    fn even_values() {
        let c = ctx();
        let p = c.bits();
        let pi = BigReal::pi(p);
        let z2 = zeta_int(2, &c).unwrap();
        assert!(within(&z2, &pi.powi(2).div_i64(6)));
        let z6 = zeta_int(6, &c).unwrap();
        assert!(within(&z6, &pi.powi(6).div_i64(945)));
        assert!(z6.error() < c.epsilon());
    }

    #[test]
    fn zeta3_against_direct_alternating_sum() {
        // Oracle: η(3) = Σ (-1)^{m-1}/m^3 summed in f64 with pairing, tail < 1/M^3.
        let mut eta3 = 0.0f64;
        for m in (1..=200_000u64).rev() {
            let t = 1.0 / (m as f64).powi(3);
            eta3 += if m % 2 == 1 { t } else { -t };
        }
        let oracle = eta3 / 0.75;
        let z3 = zeta_int(3, &ctx()).unwrap();
        assert!((z3.to_f64() - oracle).abs() < 1e-14);
        assert!(z3.to_decimal(10).starts_with("1.202056903"));
    }

    #[test]
    fn bernoulli_and_series_agree() {
        let c = ctx();
        for m in 1..=10 {
            let a = zeta_int(2 * m, &c).unwrap();
            let b = zeta_int_series(2 * m, &c).unwrap();
            assert!(a.distance(&b) <= c.epsilon(), "m = {m}");
            assert!(within(&a, &b));
        }
    }

    #[test]
    fn bar_values() {
        let c = ctx();
        let p = c.bits();
        let b2 = zeta_bar(2, &c).unwrap();
        assert!(within(&b2, &(-BigReal::pi(p).powi(2).div_i64(12))));
        let b3 = zeta_bar(3, &c).unwrap();
        let z3 = zeta_int(3, &c).unwrap();
        assert!(within(&b3, &(-(&z3 * &BigReal::from_ratio(3, 4, p)))));
        // Oracle: Σ (-1)^m / m^12, tail below 1/M^12.
        let mut direct = BigReal::zero(p);
        for m in 1..=400u64 {
            let t = BigReal::from_u64(m, p).powi(12).recip();
            direct = if m % 2 == 1 { &direct - &t } else { &direct + &t };
        }
        let direct = direct.add_error(401f64.powi(-12));
        assert!(within(&zeta_bar(12, &c).unwrap(), &direct));
        assert!(zeta_bar(1, &c).is_err());
    }

    #[test]
    fn small_arguments_rejected() {
        assert!(zeta_int(1, &ctx()).is_err());
        assert!(zeta_int(0, &ctx()).is_err());
    }
}
