//! Generating series for repeated arguments and closed evaluations of
//! zeta-half values in terms of single and double zeta values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::arith::{
    bernoulli, best_rational, zeta_at, zeta_bar_at, BigComplex, BigReal, PowerSeries,
    PrecisionContext,
};
use crate::error::{Error, Result};
use crate::index::Index;
use crate::nested::Evaluator;

/// Denominator cap used when a value is displayed as a rational multiple of a zeta value.
pub const RATIONAL_DENOMINATOR_CAP: i64 = 1_000_000_000;

/// `Σ_n ζ({s}^n) y^n` in the grouped variable `y = λ^s`.
#[derive(Debug, Clone)]
pub struct ZSeries {
    pub s: u32,
    pub series: PowerSeries,
}

impl ZSeries {
    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn coeff(&self, n: usize) -> Result<BigReal> {
        self.series.coeff(n)
    }
}

fn zeta(n: u32, p: usize) -> Result<BigReal> {
    zeta_at(n, p)
}

fn exact(n: i64, d: i64, p: usize) -> BigReal {
    BigReal::from_ratio(n, d, p)
}

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc as i64
}

fn pow2(k: i32, p: usize) -> BigReal {
    BigReal::one(p).mul_pow2(k)
}

/// `E_s(y) = exp(Σ_k (-1)^{k-1} ζ(sk) y^k / k)` truncated at `y^N`.
fn log_series(s: u32, n: usize, p: usize, alternate: bool) -> Result<PowerSeries> {
    let mut coeffs = vec![BigReal::zero(p)];
    for k in 1..=n {
        let mut c = zeta(s * k as u32, p)?.div_i64(k as i64);
        if alternate && k % 2 == 0 {
            c = -c;
        }
        coeffs.push(c);
    }
    PowerSeries::new(coeffs)
}

/// `𝔷_s` with coefficient `n` standing for `λ^{sn}`.
pub fn z_series(s: u32, n: usize, ctx: &PrecisionContext) -> Result<ZSeries> {
    if s < 2 {
        return Err(Error::Parameter(format!("z_series needs s >= 2, got {s}")));
    }
    if n < 1 {
        return Err(Error::Parameter("z_series needs order >= 1".into()));
    }
    let series = log_series(s, n, ctx.bits(), true)?.exp()?;
    Ok(ZSeries { s, series })
}

/// `f(y) ↦ f(c y)` on the grouped variable.
fn substitute(z: &ZSeries, c: &BigReal) -> PowerSeries {
    z.series.scale_arg(c)
}

/// `Σ ζ*({s}^n) y^n = 1/𝔷_s(-x)`.
pub fn repeated_star_series(s: u32, n: usize, ctx: &PrecisionContext) -> Result<PowerSeries> {
    let z = z_series(s, n, ctx)?;
    let minus = BigReal::from_i64(-1, ctx.bits());
    substitute(&z, &minus).recip()
}

/// `Σ t({s}^n) y^n = 𝔷_s(x)/𝔷_s(x/2)`.
pub fn repeated_t_series(s: u32, n: usize, ctx: &PrecisionContext) -> Result<PowerSeries> {
    let z = z_series(s, n, ctx)?;
    let scaled = substitute(&z, &pow2(-(s as i32), ctx.bits()));
    Ok(z.series.mul(&scaled.recip()?))
}

/// `Q_n(x_1, …, x_n)`: the complete homogeneous symmetric polynomial in
/// terms of power sums, via `n Q_n = Σ_{i=1}^n x_i Q_{n-i}`.
pub fn q_poly(n: usize, xs: &[BigReal]) -> Result<BigReal> {
    if xs.len() < n {
        return Err(Error::Parameter(format!(
            "Q_{n} needs {n} arguments, got {}",
            xs.len()
        )));
    }
    let p = xs.first().map(BigReal::prec).unwrap_or(64);
    let mut q = vec![BigReal::one(p)];
    for m in 1..=n {
        let mut acc = BigReal::zero(p);
        for i in 1..=m {
            acc = &acc + &(&xs[i - 1] * &q[m - i]);
        }
        q.push(acc.div_i64(m as i64));
    }
    Ok(q.swap_remove(n))
}

fn check_ab(a: u32, b: u32) -> Result<()> {
    if a < 3 || b < 1 {
        return Err(Error::Parameter(format!(
            "need a >= 3 and b >= 1, got a = {a}, b = {b}"
        )));
    }
    Ok(())
}

/// The index `(1, {{1}^{a-3}, 3}^{b-1}, {1}^{a-3}, 2)`.
pub fn prop21_index(a: u32, b: u32) -> Result<Index> {
    check_ab(a, b)?;
    let ones = (a - 3) as usize;
    let mut parts = vec![1];
    for _ in 1..b {
        parts.extend(std::iter::repeat_n(1, ones));
        parts.push(3);
    }
    parts.extend(std::iter::repeat_n(1, ones));
    parts.push(2);
    Index::new(parts)
}

/// `2^{2b-1} [z^{ab}] (-𝔷_a(-z)/𝔷_a(-z/2)^2)`.
pub fn prop21_coeff(a: u32, b: u32, ctx: &PrecisionContext) -> Result<BigReal> {
    check_ab(a, b)?;
    let p = ctx.bits();
    let z = z_series(a, b as usize, ctx)?;
    let num = substitute(&z, &BigReal::from_i64(-1, p));
    let den = substitute(&z, &-pow2(-(a as i32), p));
    let den_inv = den.recip()?;
    let ratio = num.mul(&den_inv).mul(&den_inv);
    Ok((-ratio.coeff(b as usize)?).mul_pow2(2 * b as i32 - 1))
}

/// `-2^{2b-1} Q_b(ζ(ā), ζ(2ā), …, ζ(ab̄))`.
pub fn prop21_qform(a: u32, b: u32, ctx: &PrecisionContext) -> Result<BigReal> {
    check_ab(a, b)?;
    let p = ctx.bits();
    let xs = (1..=b)
        .map(|j| zeta_bar_at(a * j, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(-q_poly(b as usize, &xs)?.mul_pow2(2 * b as i32 - 1))
}

/// Cotangent-product route for `a = 2m`: the product
/// `i^{m+1} (πz/2)^m ∏_j cot(e^{ijπ/m} πz/2)` equals `-∏_j f(e^{ijπ/m} πz/2)`
/// with `f(w) = w cot w`, expanded in `u = (πz/2)^2`.
pub fn prop21_cotangent(m: u32, b: u32, ctx: &PrecisionContext) -> Result<BigReal> {
    if m < 2 || b < 1 {
        return Err(Error::Parameter(format!(
            "need m >= 2 and b >= 1, got m = {m}, b = {b}"
        )));
    }
    let p = ctx.bits();
    let order = (m * b) as usize;
    // w cot w = Σ (-1)^n 2^{2n} B_{2n} w^{2n} / (2n)!
    let mut base = Vec::with_capacity(order + 1);
    let mut fact = BigInt::one();
    for n in 0..=order {
        if n > 0 {
            fact *= BigInt::from((2 * n - 1) * (2 * n));
        }
        let mut c = bernoulli(2 * n) * BigRational::from_integer(BigInt::one() << (2 * n))
            / BigRational::from_integer(fact.clone());
        if n % 2 == 1 {
            c = -c;
        }
        base.push(BigReal::from_rational(&c, p));
    }
    let pi = BigReal::pi(p);
    let mut prod: Vec<BigComplex> = (0..=order)
        .map(|n| if n == 0 { BigComplex::one(p) } else { BigComplex::zero(p) })
        .collect();
    for j in 0..m {
        // w^{2n} picks up e^{2ijnπ/m}
        let factor: Vec<BigComplex> = base
            .iter()
            .enumerate()
            .map(|(n, c)| {
                let angle = (&pi * &BigReal::from_i64(2 * (j as i64) * n as i64, p))
                    .div_i64(m as i64);
                BigComplex::new(c * &angle.cos(), c * &angle.sin())
            })
            .collect();
        let mut next = vec![BigComplex::zero(p); order + 1];
        for (i, x) in prod.iter().enumerate() {
            if x.is_zero() && x.error() == 0.0 {
                continue;
            }
            for (k, y) in factor.iter().enumerate().take(order + 1 - i) {
                next[i + k] = &next[i + k] + &(x * y);
            }
        }
        prod = next;
    }
    let c = -&prod[order].re;
    let scale = pi.mul_pow2(-1).powi(2 * order as u32);
    Ok((&c * &scale).mul_pow2(2 * b as i32 - 1))
}

fn parity_check(a: u32, b: u32) -> Result<()> {
    if a < 1 || b < 2 {
        return Err(Error::Parameter(format!(
            "need a >= 1 and b >= 2, got ({a},{b})"
        )));
    }
    if (a + b).is_multiple_of(2) {
        return Err(Error::Parameter(format!(
            "parity reduction needs odd weight, got ({a},{b})"
        )));
    }
    Ok(())
}

/// `Σ_{2s+k=w, s>0, k>1} c(s) ζ(2s) ζ(k) {C(k-1,a-1) + C(k-1,b-1)}`.
fn parity_sum(
    a: u32,
    b: u32,
    p: usize,
    weight_of: impl Fn(u32) -> BigReal,
) -> Result<BigReal> {
    let w = a + b;
    let mut acc = BigReal::zero(p);
    let mut s = 1;
    while w >= 2 * s + 2 {
        let k = w - 2 * s;
        let c = binom(k as i64 - 1, a as i64 - 1) + binom(k as i64 - 1, b as i64 - 1);
        if c != 0 {
            let term = &(&zeta(2 * s, p)? * &zeta(k, p)?) * &weight_of(s);
            acc = &acc + &term.mul_i64(c);
        }
        s += 1;
    }
    Ok(acc)
}

fn sign_pow(n: u32) -> i64 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `ζ(a,b)` for odd `a+b` as a polynomial in single zeta values. For `a = 1`
/// the product term `ζ(1)ζ(b)` is dropped.
pub fn parity_double_zeta(a: u32, b: u32, ctx: &PrecisionContext) -> Result<BigReal> {
    parity_check(a, b)?;
    let p = ctx.bits();
    let w = a + b;
    let sa = sign_pow(a);
    let zw = zeta(w, p)?;
    let c = binom(w as i64 - 1, a as i64 - 1) + binom(w as i64 - 1, b as i64 - 1);
    let mut acc = -&zw.mul_pow2(-1);
    acc = &acc - &zw.mul_i64(sa * c).mul_pow2(-1);
    if b.is_multiple_of(2) && a >= 2 {
        acc = &acc + &(&zeta(a, p)? * &zeta(b, p)?);
    }
    let one = BigReal::one(p);
    let sum = parity_sum(a, b, p, |_| one.clone())?;
    Ok(&acc + &sum.mul_i64(sa))
}

/// `t(a,b)` for odd `a+b`. For `a = 1` the factor `(1-2^{-1})ζ(1)` is
/// replaced by `log 2`.
pub fn parity_double_t(a: u32, b: u32, ctx: &PrecisionContext) -> Result<BigReal> {
    parity_check(a, b)?;
    let p = ctx.bits();
    let w = a + b;
    let one = BigReal::one(p);
    let odd_factor = |n: u32| &one - &pow2(-(n as i32), p);
    let mut acc = -&(&odd_factor(w) * &zeta(w, p)?).mul_pow2(-1);
    if b.is_multiple_of(2) {
        let ta = if a == 1 {
            BigReal::ln2(p)
        } else {
            &odd_factor(a) * &zeta(a, p)?
        };
        acc = &acc + &(&(&ta * &odd_factor(b)) * &zeta(b, p)?);
    }
    let sum = parity_sum(a, b, p, |s| {
        odd_factor(2 * s).mul_pow2(-((w - 2 * s) as i32))
    })?;
    Ok(&acc + &sum.mul_i64(sign_pow(a)))
}

/// `Σ_{i+j=total, i,j>=2} c(i) ζ(i,j)`.
fn double_zeta_sum(
    total: u32,
    ev: &Evaluator,
    coeff: impl Fn(u32) -> BigReal,
) -> Result<BigReal> {
    let p = ev.bits();
    let mut acc = BigReal::zero(p);
    for i in 2..=total.saturating_sub(2) {
        let z = ev.mzv(&Index::new(vec![i, total - i])?)?;
        acc = &acc + &(&coeff(i) * &z);
    }
    Ok(acc)
}

/// `t(2,k)` through double zeta values.
pub fn t_two_k(k: u32, ctx: &PrecisionContext) -> Result<BigReal> {
    if k < 2 {
        return Err(Error::Parameter(format!("t(2,k) needs k >= 2, got {k}")));
    }
    let ev = Evaluator::new(*ctx);
    let p = ctx.bits();
    let mut acc = double_zeta_sum(k + 2, &ev, |i| {
        BigReal::from_i64(i as i64 - 1, p).mul_pow2(-(i as i32 + 1))
    })?;
    acc = &acc + &ev.mzv(&Index::new(vec![2, k])?)?.mul_pow2(-(k as i32 + 2));
    acc = &acc + &(&zeta(k, p)? * &zeta(2, p)?).mul_pow2(-(k as i32 + 1));
    let c = BigReal::from_i64((k * (k + 5)) as i64, p).mul_pow2(-(k as i32 + 4));
    Ok(&acc - &(&c * &zeta(k + 2, p)?))
}

/// The index `({1}^n, 4)`.
pub fn z114_index(n: u32) -> Index {
    let mut parts = vec![1; n as usize];
    parts.push(4);
    Index::new(parts).expect("positive parts")
}

/// The index `(3, {1}^{n-1}, 2)` for `n >= 1`.
pub fn z3112_index(n: u32) -> Result<Index> {
    if n < 1 {
        return Err(Error::Parameter("(3,{1}^(n-1),2) needs n >= 1".into()));
    }
    let mut parts = vec![3];
    parts.extend(std::iter::repeat_n(1, n as usize - 1));
    parts.push(2);
    Index::new(parts)
}

/// The index `({1}^i, 3, {1}^j, 2)`.
pub fn z113112_index(i: u32, j: u32) -> Index {
    let mut parts = vec![1; i as usize];
    parts.push(3);
    parts.extend(std::iter::repeat_n(1, j as usize));
    parts.push(2);
    Index::new(parts).expect("positive parts")
}

/// `ζ^{1/2}({1}^n, 4)` through double zeta values.
pub fn prop22_z114(n: u32, ctx: &PrecisionContext) -> Result<BigReal> {
    let ev = Evaluator::new(*ctx);
    let p = ctx.bits();
    let acc = double_zeta_sum(n + 4, &ev, |i| {
        BigReal::from_i64(1 - i as i64, p).mul_pow2(2 - i as i32)
    })?;
    let c = BigReal::from_i64(((n + 2) * (n + 7)) as i64, p).mul_pow2(-(n as i32 + 3));
    Ok(&acc + &(&c * &zeta(n + 4, p)?))
}

/// `Σ_{2i+j=2m+5, i>=1, j>=2} 8(1 - 2^{1-2i}) ζ(2i) c(j) ζ(j)`.
fn odd_branch_sum(m: u32, p: usize, c: impl Fn(u32) -> BigReal) -> Result<BigReal> {
    let w = 2 * m + 5;
    let one = BigReal::one(p);
    let mut acc = BigReal::zero(p);
    let mut i = 1;
    while w >= 2 * i + 2 {
        let j = w - 2 * i;
        let f = (&one - &pow2(1 - 2 * i as i32, p)).mul_pow2(3);
        let term = &(&f * &zeta(2 * i, p)?) * &(&c(j) * &zeta(j, p)?);
        acc = &acc + &term;
        i += 1;
    }
    Ok(acc)
}

/// `ζ^{1/2}({1}^{2m+1}, 4)` through single zeta values.
pub fn prop22_z114_odd(m: u32, ctx: &PrecisionContext) -> Result<BigReal> {
    let p = ctx.bits();
    let acc = odd_branch_sum(m, p, |j| {
        BigReal::from_i64(1 - j as i64, p).mul_pow2(-(j as i32))
    })?;
    let c = &(&BigReal::from_i64(4, p) - &exact(3, 1, p).mul_pow2(-(2 * m as i32 + 1)))
        - &BigReal::from_i64((m * (2 * m + 9)) as i64, p).mul_pow2(-(2 * m as i32 + 3));
    Ok(&acc + &(&c * &zeta(2 * m + 5, p)?))
}

/// `ζ^{1/2}(3, {1}^{n-1}, 2)` through double zeta values.
pub fn prop22_z3112(n: u32, ctx: &PrecisionContext) -> Result<BigReal> {
    if n < 1 {
        return Err(Error::Parameter("prop22_z3112 needs n >= 1".into()));
    }
    let ev = Evaluator::new(*ctx);
    let p = ctx.bits();
    let mut acc = double_zeta_sum(n + 4, &ev, |i| {
        BigReal::from_i64(i as i64 - 1, p).mul_pow2(2 - i as i32)
    })?;
    let c2 = &BigReal::from_i64(4, p) - &pow2(1 - n as i32, p);
    acc = &acc - &(&c2 * &(&zeta(2, p)? * &zeta(n + 2, p)?));
    let c4 = &(&BigReal::from_i64(8, p) - &pow2(-(n as i32), p))
        - &BigReal::from_i64(((n + 2) * (n + 7)) as i64, p).mul_pow2(-(n as i32 + 3));
    Ok(&acc + &(&c4 * &zeta(n + 4, p)?))
}

/// `ζ^{1/2}(3, {1}^{2m}, 2)` through single zeta values.
pub fn prop22_z3112_even(m: u32, ctx: &PrecisionContext) -> Result<BigReal> {
    let p = ctx.bits();
    let mut acc = odd_branch_sum(m, p, |j| {
        BigReal::from_i64(j as i64 - 1, p).mul_pow2(-(j as i32))
    })?;
    let c2 = &BigReal::from_i64(4, p) - &pow2(-(2 * m as i32), p);
    acc = &acc - &(&c2 * &(&zeta(2, p)? * &zeta(2 * m + 3, p)?));
    let c4 = &(&BigReal::from_i64(4, p) + &pow2(-(2 * m as i32), p))
        + &BigReal::from_i64((m * (2 * m + 9)) as i64, p).mul_pow2(-(2 * m as i32 + 3));
    Ok(&acc + &(&c4 * &zeta(2 * m + 5, p)?))
}

/// `ζ^{1/2}({1}^n,4) + ζ^{1/2}(3,{1}^{n-1},2)`.
pub fn prop22_sum(n: u32, ctx: &PrecisionContext) -> Result<BigReal> {
    if n < 1 {
        return Err(Error::Parameter("prop22_sum needs n >= 1".into()));
    }
    let p = ctx.bits();
    let one = BigReal::one(p);
    let c2 = (&one - &pow2(-(n as i32 + 1), p)).mul_i64(-4);
    let c4 = &BigReal::from_i64(8, p) - &pow2(-(n as i32), p);
    Ok(&(&c2 * &(&zeta(2, p)? * &zeta(n + 2, p)?)) + &(&c4 * &zeta(n + 4, p)?))
}

/// `ζ^{1/2}({1}^i, 3, {1}^j, 2)` for even `i+j` as a polynomial in single zeta values.
pub fn prop23(i: u32, j: u32, ctx: &PrecisionContext) -> Result<BigReal> {
    if (i + j) % 2 == 1 {
        return Err(Error::Parameter(format!(
            "prop23 needs i + j even, got ({i},{j})"
        )));
    }
    let p = ctx.bits();
    let w = i + j + 5;
    let (si, sj) = (sign_pow(i), sign_pow(j));
    let mut acc = BigReal::zero(p);
    let mut s = 1;
    while w >= 2 * s + 2 {
        let k = w - 2 * s;
        let b = binom(k as i64 - 1, i as i64 + 1) + binom(k as i64 - 1, j as i64 + 2);
        if b != 0 {
            let num = &BigReal::from_i64(sj, p).mul_pow2(2 * s as i32)
                - &BigReal::from_i64(sj + si, p);
            let c = num.mul_i64(b).mul_pow2(-(i as i32 + j as i32 + 2));
            acc = &acc + &(&c * &(&zeta(2 * s, p)? * &zeta(k, p)?));
        }
        s += 1;
    }
    let mut mid = (&pow2(j as i32 + 3, p) - &BigReal::from_i64(2, p))
        .mul_pow2(-(i as i32 + j as i32 + 2));
    if i.is_multiple_of(2) {
        let d = &(&BigReal::from_i64(8, p) - &pow2(1 - i as i32, p)) - &pow2(-(j as i32), p);
        mid = &mid - &d;
    }
    acc = &acc + &(&mid * &(&zeta(i + 2, p)? * &zeta(j + 3, p)?));
    let b = binom(w as i64 - 1, i as i64 + 1) + binom(w as i64 - 1, j as i64 + 2);
    let last = (&(&pow2(w as i32, p) - &BigReal::from_i64(2, p))
        + &BigReal::from_i64(si * b, p))
        .mul_pow2(-(w as i32 - 2));
    Ok(&acc + &(&last * &zeta(w, p)?))
}

/// Recognises `value ≈ (n/d) ζ(k)` with `d` at most [`RATIONAL_DENOMINATOR_CAP`].
pub fn recognize_zeta_multiple(value: &BigReal, k: u32) -> Result<Option<BigRational>> {
    let p = value.prec();
    let z = zeta(k, p)?;
    let ratio = value / &z;
    let Some((n, d)) = best_rational(ratio.to_f64(), RATIONAL_DENOMINATOR_CAP) else {
        return Ok(None);
    };
    let q = BigRational::new(BigInt::from(n), BigInt::from(d));
    let diff = &ratio - &BigReal::from_rational(&q, p);
    let slack = ratio.error() + 1e-20 * ratio.abs_f64().max(1.0);
    Ok((diff.abs_f64() <= slack).then_some(q))
}

/// `"31/16·ζ(6)"`-style label, or `None` if no small rational fits.
pub fn zeta_multiple_label(value: &BigReal, k: u32) -> Result<Option<String>> {
    Ok(recognize_zeta_multiple(value, k)?.map(|q| {
        let body = if q.denom().is_one() {
            q.numer().to_string()
        } else {
            format!("{}/{}", q.numer(), q.denom())
        };
        format!("{body}·ζ({k})")
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;
    use crate::nested::{half, MtvRoute};

    fn ctx() -> PrecisionContext {
        PrecisionContext::digits(30).unwrap()
    }

    fn close(a: &BigReal, b: &BigReal, tol: f64) {
        let d = a.distance(b);
        assert!(
            d <= tol + a.error() + b.error(),
            "{} vs {} (diff {d:e})",
            a.render(),
            b.render()
        );
    }

    fn zq(n: i64, d: i64, k: u32) -> BigReal {
        let p = ctx().bits();
        &BigReal::from_ratio(n, d, p) * &zeta_at(k, p).unwrap()
    }

    #[test]
    fn z2_matches_sine_product() {
        let c = ctx();
        let p = c.bits();
        let z = z_series(2, 5, &c).unwrap();
        let pi = BigReal::pi(p);
        let mut fact = BigInt::one();
        for n in 0..=5u32 {
            if n > 0 {
                fact *= BigInt::from(2 * n * (2 * n + 1));
            }
            let want = &pi.powi(2 * n) / &BigReal::from_bigint(&fact, p);
            close(&z.coeff(n as usize).unwrap(), &want, 1e-40);
        }
    }

    #[test]
    fn z6_first_coefficient() {
        let c = ctx();
        let z = z_series(6, 2, &c).unwrap();
        close(&z.coeff(1).unwrap(), &zeta_at(6, c.bits()).unwrap(), 1e-40);
    }

    #[test]
    fn repeated_series_against_nested_values() {
        let c = ctx();
        let ev = Evaluator::new(c);
        let star = repeated_star_series(2, 3, &c).unwrap();
        close(&star.coeff(0).unwrap(), &BigReal::one(c.bits()), 0.0);
        close(&star.coeff(2).unwrap(), &ev.zstar(&Index::repeated(2, 2).unwrap()).unwrap(), 1e-28);
        let t = repeated_t_series(2, 3, &c).unwrap();
        close(&t.coeff(1).unwrap(), &zq(3, 4, 2), 1e-40);
        for n in 2..=3 {
            let want = ev.mtv(&Index::repeated(3, n).unwrap(), MtvRoute::Direct).unwrap();
            let got = repeated_t_series(3, 3, &c).unwrap().coeff(n).unwrap();
            close(&got, &want, 1e-28);
        }
    }

    fn partition_sum(n: usize, xs: &[f64]) -> f64 {
        // sum over multiplicities j_1..j_n with Σ i j_i = n
        fn rec(i: usize, left: usize, xs: &[f64], acc: f64) -> f64 {
            if left == 0 {
                return acc;
            }
            if i > left {
                return 0.0;
            }
            let mut total = 0.0;
            let mut j = 0usize;
            let mut term = acc;
            while j * i <= left {
                total += rec(i + 1, left - j * i, xs, term);
                j += 1;
                term *= xs[i - 1] / (i as f64 * j as f64);
            }
            total
        }
        rec(1, n, xs, 1.0)
    }

    #[test]
    fn q_poly_small_cases() {
        let p = 128;
        let xs: Vec<BigReal> = [0.7, -1.3, 2.1, 0.4, -0.9, 1.7]
            .iter()
            .map(|&x| BigReal::from_f64(x, p))
            .collect();
        let f: Vec<f64> = xs.iter().map(BigReal::to_f64).collect();
        assert!((q_poly(1, &xs).unwrap().to_f64() - f[0]).abs() < 1e-15);
        let q2 = (f[0] * f[0] + f[1]) / 2.0;
        assert!((q_poly(2, &xs).unwrap().to_f64() - q2).abs() < 1e-15);
        let q3 = (f[0].powi(3) + 3.0 * f[0] * f[1] + 2.0 * f[2]) / 6.0;
        assert!((q_poly(3, &xs).unwrap().to_f64() - q3).abs() < 1e-14);
        for n in 0..=6 {
            let got = q_poly(n, &xs).unwrap().to_f64();
            assert!((got - partition_sum(n, &f)).abs() < 1e-13, "Q_{n}");
        }
    }

    #[test]
    fn prop21_known_values() {
        let c = ctx();
        close(&prop21_coeff(6, 1, &c).unwrap(), &zq(31, 16, 6), 1e-40);
        close(&prop21_coeff(6, 2, &c).unwrap(), &zq(40247, 353792, 12), 1e-40);
        close(&prop21_coeff(6, 3, &c).unwrap(), &zq(1595681, 224599040, 18), 1e-40);
        close(&prop21_qform(3, 1, &c).unwrap(), &zq(3, 2, 3), 1e-40);
    }

    #[test]
    fn prop21_routes_agree() {
        let c = ctx();
        for a in 3..=6 {
            for b in 1..=3 {
                let x = prop21_coeff(a, b, &c).unwrap();
                close(&x, &prop21_qform(a, b, &c).unwrap(), 1e-35);
                if a % 2 == 0 {
                    close(&x, &prop21_cotangent(a / 2, b, &c).unwrap(), 1e-35);
                }
            }
        }
    }

    #[test]
    fn prop21_cotangent_coefficients() {
        let c = ctx();
        let p = c.bits();
        let pi = BigReal::pi(p);
        let want = (&pi.powi(6) * &exact(31, 30240, p)).mul_i64(2);
        close(&prop21_cotangent(3, 1, &c).unwrap(), &want, 1e-40);
        let want = (&pi.powi(12) / &BigReal::from_u64(2615348736000, p))
            .mul_i64(8)
            .mul_i64(40247);
        close(&prop21_cotangent(3, 2, &c).unwrap(), &want, 1e-40);
    }

    #[test]
    fn prop21_against_evaluator() {
        let c = PrecisionContext::digits(20).unwrap();
        let ev = Evaluator::new(c);
        for (a, b) in [(3, 1), (4, 1), (3, 2), (5, 2), (4, 3)] {
            let idx = prop21_index(a, b).unwrap();
            close(&prop21_coeff(a, b, &c).unwrap(), &ev.zhalf(&idx).unwrap(), 1e-18);
        }
    }

    #[test]
    fn parity_formulas_against_evaluator() {
        let c = ctx();
        let ev = Evaluator::new(c);
        for w in [3u32, 5, 7, 9] {
            for a in 1..w - 1 {
                let idx = Index::new(vec![a, w - a]).unwrap();
                close(&parity_double_zeta(a, w - a, &c).unwrap(), &ev.mzv(&idx).unwrap(), 1e-28);
                let t = ev.mtv(&idx, MtvRoute::Direct).unwrap();
                close(&parity_double_t(a, w - a, &c).unwrap(), &t, 1e-28);
            }
        }
        assert!(parity_double_zeta(2, 2, &c).is_err());
    }

    #[test]
    fn t12_closed_value() {
        let c = ctx();
        let p = c.bits();
        let pi2 = BigReal::pi(p).sqr();
        let want = &zq(-7, 16, 3) + &(&pi2.mul_pow2(-3) * &BigReal::ln2(p));
        close(&parity_double_t(1, 2, &c).unwrap(), &want, 1e-40);
        close(&parity_double_zeta(1, 2, &c).unwrap(), &zq(1, 1, 3), 1e-40);
    }

    #[test]
    fn t_two_k_against_evaluator() {
        let c = ctx();
        let ev = Evaluator::new(c);
        for k in 2..=6 {
            let t = ev.mtv(&Index::new(vec![2, k]).unwrap(), MtvRoute::Direct).unwrap();
            close(&t_two_k(k, &c).unwrap(), &t, 1e-28);
        }
        close(&t_two_k(3, &c).unwrap(), &parity_double_t(2, 3, &c).unwrap(), 1e-28);
    }

    #[test]
    fn prop22_against_evaluator() {
        let c = ctx();
        let ev = Evaluator::new(c);
        for n in 0..=4 {
            let v = ev.zhalf(&z114_index(n)).unwrap();
            close(&prop22_z114(n, &c).unwrap(), &v, 1e-27);
        }
        for m in 0..=1 {
            close(&prop22_z114_odd(m, &c).unwrap(), &prop22_z114(2 * m + 1, &c).unwrap(), 1e-28);
            close(
                &prop22_z3112_even(m, &c).unwrap(),
                &prop22_z3112(2 * m + 1, &c).unwrap(),
                1e-28,
            );
        }
        for n in 1..=4 {
            let v = ev.zhalf(&z3112_index(n).unwrap()).unwrap();
            close(&prop22_z3112(n, &c).unwrap(), &v, 1e-27);
            let s = &prop22_z114(n, &c).unwrap() + &prop22_z3112(n, &c).unwrap();
            close(&prop22_sum(n, &c).unwrap(), &s, 1e-28);
        }
    }

    #[test]
    fn prop23_against_evaluator() {
        let c = ctx();
        let ev = Evaluator::new(c);
        for (i, j) in [(0, 0), (1, 1), (2, 0), (0, 2), (3, 1), (2, 2)] {
            let v = ev.interpolated(&z113112_index(i, j), &half()).unwrap();
            close(&prop23(i, j, &c).unwrap(), &v, 1e-27);
        }
        assert!(prop23(1, 0, &c).is_err());
    }

    #[test]
    fn recognition() {
        let c = ctx();
        let v = prop21_coeff(6, 2, &c).unwrap();
        assert_eq!(recognize_zeta_multiple(&v, 12).unwrap(), Some(rational(40247, 353792)));
        assert_eq!(
            zeta_multiple_label(&prop21_coeff(6, 1, &c).unwrap(), 6).unwrap().as_deref(),
            Some("31/16·ζ(6)")
        );
        assert_eq!(recognize_zeta_multiple(&BigReal::ln2(c.bits()), 3).unwrap(), None);
    }
}
