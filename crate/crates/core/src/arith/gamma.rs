use super::bernoulli::bernoulli;
use super::{BigComplex, BigReal, PrecisionContext};
use crate::error::{Error, Result};

fn is_pole(z: &BigComplex) -> bool {
    if !z.im.is_zero() {
        return false;
    }
    let x = z.re.to_f64();
    x <= 0.0 && x == x.round() && z.re.distance(&BigReal::from_f64(x, z.re.prec())) == 0.0
}

/// `log Γ(w)` by Stirling's series; needs `Re w` large enough for `p` bits.
fn ln_gamma_stirling(w: &BigComplex, p: usize) -> Result<BigComplex> {
    let half = BigReal::from_f64(0.5, p);
    let ln_w = w.ln()?;
    let w_minus_half = BigComplex::new(&w.re - &half, w.im.clone());
    let ln_2pi = BigReal::pi(p).mul_pow2(1).ln()?;
    let mut acc = &(&w_minus_half * &ln_w) - w;
    acc.re = &acc.re + &ln_2pi.mul_pow2(-1);

    let modulus = w.abs().to_f64();
    let cos_theta = (w.re.to_f64() / modulus).clamp(-1.0, 1.0);
    let sec_half = 1.0 / ((1.0 + cos_theta) / 2.0).sqrt();
    let target = 2f64.powi(-(p as i32));

    let inv = w.recip();
    let inv2 = &inv * &inv;
    let mut pow = inv.clone();
    let mut k = 1usize;
    loop {
        let b = BigReal::from_rational(&bernoulli(2 * k), p);
        let denom = (2 * k * (2 * k - 1)) as i64;
        acc = &acc + &pow.scale(&b.div_i64(denom));
        let b_next = BigReal::from_rational(&bernoulli(2 * k + 2), p).abs_f64();
        let bound = b_next / ((2 * k + 2) as f64 * (2 * k + 1) as f64)
            * modulus.powi(-(2 * k as i32 + 1))
            * sec_half.powi(2 * k as i32 + 2);
        if bound < target || k > 4 * p {
            acc.re = acc.re.add_error(bound);
            acc.im = acc.im.add_error(bound);
            return Ok(acc);
        }
        pow = &pow * &inv2;
        k += 1;
    }
}

fn gamma_at(z: &BigComplex, p: usize) -> Result<BigComplex> {
    if is_pole(z) {
        return Err(Error::Domain(format!("Gamma pole at {}", z.re.to_f64())));
    }
    let half = BigReal::from_f64(0.5, p);
    if z.re.cmp_value(&half).is_lt() {
        let pi = BigReal::pi(p);
        let one = BigComplex::one(p);
        let reflected = gamma_at(&(&one - z), p)?;
        let s = z.scale(&pi).sin();
        return Ok(&BigComplex::real(pi) / &(&s * &reflected));
    }
    let shift = (0.11 * p as f64).ceil() as i64 + 5;
    let w = BigComplex::new(&z.re + &BigReal::from_i64(shift, p), z.im.clone());
    let big = ln_gamma_stirling(&w, p)?.exp();
    let mut prod = z.clone();
    for j in 1..shift {
        let zj = BigComplex::new(&z.re + &BigReal::from_i64(j, p), z.im.clone());
        prod = &prod * &zj;
    }
    Ok(&big / &prod)
}

/// `Γ(z)` for complex `z`, reflecting when `Re z < 1/2`.
pub fn gamma(z: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    let p = ctx.bits();
    let z = BigComplex::new(z.re.set_prec(p), z.im.set_prec(p));
    gamma_at(&z, p)
}

pub fn gamma_real(x: &BigReal, ctx: &PrecisionContext) -> Result<BigReal> {
    Ok(gamma(&BigComplex::real(x.clone()), ctx)?.re)
}
