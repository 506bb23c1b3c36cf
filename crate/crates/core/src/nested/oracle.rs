//! Slow reference values: plain truncation of the defining nested sums in
//! double precision with an integral bound on the omitted tail.

use crate::error::{Error, Result};
use crate::index::{Sign, SignedIndex};

/// A truncated sum and a bound on what was left out.
#[derive(Debug, Clone, Copy)]
pub struct OracleValue {
    pub value: f64,
    pub tail: f64,
}

impl OracleValue {
    /// Tail plus a generous allowance for double rounding.
    pub fn tolerance(&self) -> f64 {
        self.tail + 1e-12 * self.value.abs().max(1.0)
    }

    pub fn agrees_with(&self, x: f64) -> bool {
        (self.value - x).abs() <= self.tolerance()
    }
}

/// `∫_M^∞ (1 + ln x)^a x^{-k} dx <= (1 + ln M)^a M^{1-k} / ((k - 1) - a/(1 + ln M))`.
fn integral_tail(m: usize, a: u32, k: u32) -> f64 {
    let lm = 1.0 + (m as f64).ln();
    let denom = (k as f64 - 1.0) - a as f64 / lm;
    if denom <= 0.0 {
        return f64::INFINITY;
    }
    lm.powi(a as i32) * (m as f64).powf(1.0 - k as f64) / denom
}

/// `Σ ε^m r^{#equalities} / (m_1^{k_1} ⋯ m_d^{k_d})` over `m_1 <= … <= m_d <= M`,
/// optionally restricted to odd `m_i`.
pub fn nested_sum(sidx: &SignedIndex, r: f64, odd_only: bool, m: usize) -> Result<OracleValue> {
    if !sidx.is_convergent() {
        return Err(Error::Divergent(sidx.to_string()));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Parameter("r must lie in [0, 1]".into()));
    }
    let parts = sidx.parts();
    if parts.is_empty() {
        return Ok(OracleValue { value: 1.0, tail: 0.0 });
    }
    let keep = |n: usize| !odd_only || n % 2 == 1;
    let sign = |e: Sign, n: usize| if e == Sign::Minus && n % 2 == 1 { -1.0 } else { 1.0 };

    // a[n] = contribution with the current outermost variable equal to n.
    let mut a = vec![0.0f64; m + 1];
    let (k1, e1) = parts[0];
    for n in 1..=m {
        if keep(n) {
            a[n] = sign(e1, n) / (n as f64).powi(k1 as i32);
        }
    }
    for &(k, e) in &parts[1..] {
        let mut next = vec![0.0f64; m + 1];
        let mut prefix = 0.0f64;
        for n in 1..=m {
            if keep(n) {
                next[n] = sign(e, n) * (prefix + r * a[n]) / (n as f64).powi(k as i32);
            }
            prefix += a[n];
        }
        a = next;
    }
    // Kahan summation from the small end.
    let (mut s, mut comp) = (0.0f64, 0.0f64);
    for &x in a.iter().rev() {
        let y = x - comp;
        let t = s + y;
        comp = (t - s) - y;
        s = t;
    }

    let ones = parts[..parts.len() - 1].iter().filter(|p| p.0 == 1).count() as u32;
    let inner: f64 = parts[..parts.len() - 1]
        .iter()
        .filter(|p| p.0 >= 2)
        .map(|p| 1.0 + 1.0 / (p.0 as f64 - 1.0))
        .product();
    let (kd, ed) = parts[parts.len() - 1];
    let tail = if kd >= 2 {
        inner * integral_tail(m, ones, kd)
    } else if ed == Sign::Minus && parts.len() == 1 {
        1.0 / (m as f64 + 1.0)
    } else {
        return Err(Error::Parameter(format!(
            "no tail bound for outer part {kd} in ({sidx})"
        )));
    };
    Ok(OracleValue { value: s, tail })
}
