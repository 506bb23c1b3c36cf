//! Iterated integrals over `[0, 1]` with letters drawn from the span of
//! `ω_0 = dt/t`, `ω_1 = dt/(t-1)` and `ω_{-1} = dt/(t+1)`.
//!
//! A word is listed innermost letter first, so `I(L_1 … L_n)` integrates
//! `L_1` over the smallest variable. The path is cut at `1/2`; the piece on
//! `[1/2, 1]` is mapped back by `t ↦ 1 - t`, which sends `ω_c` to `-ω_{1-c}`.
//! After `t = s/2` both pieces are power series in `s` whose nonzero poles
//! have modulus at least 2, so their coefficients decay like `2^{-m}`.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::BigReal;
use crate::error::{Error, Result};
use crate::index::{Sign, SignedIndex};

/// `a0·ω_0 + a1·ω_1 + am1·ω_{-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Letter {
    pub a0: BigRational,
    pub a1: BigRational,
    pub am1: BigRational,
}

impl Letter {
    pub fn new(a0: BigRational, a1: BigRational, am1: BigRational) -> Self {
        Letter { a0, a1, am1 }
    }

    pub fn omega0() -> Self {
        Letter::new(BigRational::one(), BigRational::zero(), BigRational::zero())
    }
}

/// The word whose integral is `ζ^r(k; ε)`: the innermost letter is `-ω_{y_1}`,
/// each later part opens with `r·ω_0 - ω_{y_i}`, and every part `k_i`
/// contributes `ω_0^{k_i - 1}`, where `y_i = ε_i ε_{i+1} ⋯ ε_d`.
pub fn interpolated_word(sidx: &SignedIndex, r: &BigRational) -> Vec<Letter> {
    let parts = sidx.parts();
    let d = parts.len();
    let mut ys = vec![Sign::Plus; d];
    let mut acc = Sign::Plus;
    for i in (0..d).rev() {
        acc = acc.mul(parts[i].1);
        ys[i] = acc;
    }
    let mut word = Vec::with_capacity(sidx.weight() as usize);
    for (i, &(k, _)) in parts.iter().enumerate() {
        let a0 = if i == 0 { BigRational::zero() } else { r.clone() };
        let (a1, am1) = match ys[i] {
            Sign::Plus => (-BigRational::one(), BigRational::zero()),
            Sign::Minus => (BigRational::zero(), -BigRational::one()),
        };
        word.push(Letter::new(a0, a1, am1));
        for _ in 1..k {
            word.push(Letter::omega0());
        }
    }
    word
}

/// The word whose integral is the odd-denominator sum `t(k)`.
pub fn mtv_word(parts: &[u32]) -> Vec<Letter> {
    let half = BigRational::new(1.into(), 2.into());
    let mut word = Vec::new();
    for (i, &k) in parts.iter().enumerate() {
        let am1 = if i == 0 { half.clone() } else { -half.clone() };
        word.push(Letter::new(BigRational::zero(), -half.clone(), am1));
        for _ in 1..k {
            word.push(Letter::omega0());
        }
    }
    word
}

/// A letter in the variable `s = 2t`: `a0·ds/s + Σ c·ds/(s - pole)`.
struct SLetter {
    a0: Option<Coeff>,
    poles: Vec<(i64, Coeff)>,
    a0_abs: f64,
    pole_abs: f64,
}

/// Coefficient applied by the cheapest exact route available.
enum Coeff {
    Pow2 { neg: bool, k: i32 },
    General(BigReal),
}

impl Coeff {
    fn new(q: &BigRational, p: usize) -> Self {
        let num = q.numer().abs();
        let den = q.denom();
        let neg = q.is_negative();
        let is_pow2 = |x: &num_bigint::BigInt| x.is_positive() && (x & (x - 1u32)).is_zero();
        if is_pow2(&num) && is_pow2(den) {
            let k = num.bits() as i32 - den.bits() as i32;
            return Coeff::Pow2 { neg, k };
        }
        Coeff::General(BigReal::from_rational(q, p))
    }

    fn apply(&self, x: &BigReal) -> BigReal {
        match self {
            Coeff::Pow2 { neg, k } => {
                let y = if *k == 0 { x.clone() } else { x.mul_pow2(*k) };
                if *neg {
                    -y
                } else {
                    y
                }
            }
            Coeff::General(c) => c * x,
        }
    }
}

fn q_abs(q: &BigRational) -> f64 {
    q.abs().to_f64().unwrap_or(f64::INFINITY)
}

fn s_letter(a0: &BigRational, poles: &[(i64, &BigRational)], p: usize) -> SLetter {
    let mut out = SLetter {
        a0: None,
        poles: Vec::new(),
        a0_abs: q_abs(a0),
        pole_abs: 0.0,
    };
    if !a0.is_zero() {
        out.a0 = Some(Coeff::new(a0, p));
    }
    for &(pole, c) in poles {
        if !c.is_zero() {
            out.pole_abs += q_abs(c);
            out.poles.push((pole, Coeff::new(c, p)));
        }
    }
    out
}

/// Letters of the piece on `[0, 1/2]`.
fn forward_letters(word: &[Letter], p: usize) -> Vec<SLetter> {
    word.iter()
        .map(|l| s_letter(&l.a0, &[(2, &l.a1), (-2, &l.am1)], p))
        .collect()
}

/// Letters of the piece on `[1/2, 1]` after `t ↦ 1 - t`, innermost first,
/// without the sign `-1` each letter picks up.
fn reflected_letters(word: &[Letter], p: usize) -> Vec<SLetter> {
    word.iter()
        .rev()
        .map(|l| s_letter(&l.a1, &[(2, &l.a0), (4, &l.am1)], p))
        .collect()
}

/// Majorant coefficients `c_j` of `Σ c_j L^j / j!`, `L = -log(1 - s/2)`,
/// after each prefix.
fn majorants(letters: &[SLetter]) -> Vec<Vec<f64>> {
    let mut c = vec![1.0f64];
    let mut out = vec![c.clone()];
    for l in letters {
        let mut next = vec![0.0; c.len() + 1];
        for (j, &cj) in c.iter().enumerate() {
            next[j] += l.a0_abs * cj;
            next[j + 1] += l.pole_abs * cj;
        }
        c = next;
        out.push(c.clone());
    }
    out
}

fn harmonic(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

/// Bound on `Σ_{m>M} [s^m] Σ_j c_j L^j/j!` at `s = 1`, using
/// `[s^m] L^j/j! <= 2^{-m} H_{m-1}^{j-1} / ((j-1)! m)`.
fn tail_bound(c: &[f64], m: usize, h_m: f64) -> f64 {
    let mut total = 0.0;
    let mut fact = 1.0f64;
    for (j, &cj) in c.iter().enumerate().skip(1) {
        if j > 1 {
            fact *= (j - 1) as f64;
        }
        if cj == 0.0 {
            continue;
        }
        let e = (j - 1) as i32;
        let first = 2f64.powi(-(m as i32 + 1)) * h_m.powi(e) / (fact * (m + 1) as f64);
        let ratio = 0.5 * (1.0 + 1.0 / ((m + 1) as f64 * h_m)).powi(e);
        if ratio >= 1.0 {
            return f64::INFINITY;
        }
        total += cj * first / (1.0 - ratio);
    }
    total
}

/// Values at `s = 1` of every prefix (lengths `0..=n`) of an `s`-word,
/// each carrying its truncation bound.
fn prefix_values(letters: &[SLetter], terms: usize, tails: &[f64], p: usize) -> Vec<BigReal> {
    let zero = BigReal::zero(p);
    let mut f = vec![zero.clone(); terms + 1];
    f[0] = BigReal::one(p);
    let mut out = vec![BigReal::one(p)];
    for (idx, l) in letters.iter().enumerate() {
        let mut g = vec![zero.clone(); terms + 1];
        if let Some(a0) = &l.a0 {
            for n in 1..=terms {
                if f[n].is_zero() && f[n].error() == 0.0 {
                    continue;
                }
                g[n] = a0.apply(&f[n].div_i64(n as i64));
            }
        }
        for (pole, c) in &l.poles {
            let mut h = zero.clone();
            for n in 0..terms {
                let num = &h.mul_i64(n as i64) - &f[n];
                h = num.div_i64(pole * (n as i64 + 1));
                g[n + 1] = &g[n + 1] + &c.apply(&h);
            }
        }
        f = g;
        let total = f[1..].iter().fold(zero.clone(), |acc, x| &acc + x);
        out.push(total.add_error(tails[idx + 1]));
    }
    out
}

/// `I(word)` on `[0, 1]`, certified to roughly `2^-p` absolute accuracy.
pub fn eval_word(word: &[Letter], p: usize, max_terms: usize) -> Result<BigReal> {
    if word.is_empty() {
        return Ok(BigReal::one(p));
    }
    if !word[0].a0.is_zero() {
        return Err(Error::Divergent(
            "innermost letter has a dt/t component".into(),
        ));
    }
    if !word[word.len() - 1].a1.is_zero() {
        return Err(Error::Divergent(
            "outermost letter has a dt/(t-1) component".into(),
        ));
    }
    let fwd = forward_letters(word, p);
    let rev = reflected_letters(word, p);
    let maj_f = majorants(&fwd);
    let maj_r = majorants(&rev);

    let target = 2f64.powi(-(p as i32) - 4);
    let mut terms = p.max(32);
    let mut h = harmonic(terms);
    let (tails_f, tails_r) = loop {
        let tf: Vec<f64> = maj_f.iter().map(|c| tail_bound(c, terms, h)).collect();
        let tr: Vec<f64> = maj_r.iter().map(|c| tail_bound(c, terms, h)).collect();
        let worst = tf.iter().chain(tr.iter()).cloned().fold(0.0, f64::max);
        if worst <= target {
            break (tf, tr);
        }
        let next = terms + 16;
        if next > max_terms {
            return Err(Error::MaxTermsExceeded(max_terms));
        }
        for k in terms + 1..=next {
            h += 1.0 / k as f64;
        }
        terms = next;
    };

    let a = prefix_values(&fwd, terms, &tails_f, p);
    let b = prefix_values(&rev, terms, &tails_r, p);
    let n = word.len();
    let mut total = BigReal::zero(p);
    for i in 0..=n {
        let term = &a[i] * &b[n - i];
        total = if (n - i) % 2 == 1 {
            &total - &term
        } else {
            &total + &term
        };
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: usize = 180;

    fn signed(s: &str) -> SignedIndex {
        s.parse().unwrap()
    }

    fn value(word: &[Letter]) -> BigReal {
        eval_word(word, P, 1_000_000).unwrap()
    }

    #[test]
    fn single_zeta_values() {
        let z2 = value(&interpolated_word(&signed("2"), &BigRational::zero()));
        let pi2_6 = BigReal::pi(P).powi(2).div_i64(6);
        assert!(z2.distance(&pi2_6) <= z2.error() + pi2_6.error());
        assert!(z2.error() < 1e-45);
        let l2 = value(&interpolated_word(&signed("1b"), &BigRational::zero()));
        let ln2 = -BigReal::ln2(P);
        assert!(l2.distance(&ln2) <= l2.error() + ln2.error());
    }

    #[test]
    fn euler_double_value() {
        // ζ(1,2) = ζ(3)
        let a = value(&interpolated_word(&signed("1,2"), &BigRational::zero()));
        let b = value(&interpolated_word(&signed("3"), &BigRational::zero()));
        assert!(a.distance(&b) <= a.error() + b.error());
    }

    #[test]
    fn t_of_two() {
        let t2 = value(&mtv_word(&[2]));
        let want = BigReal::pi(P).powi(2).div_i64(8);
        assert!(t2.distance(&want) <= t2.error() + want.error());
    }

    #[test]
    fn divergent_words_rejected() {
        let w = interpolated_word(&signed("2,1"), &BigRational::zero());
        assert!(matches!(eval_word(&w, P, 1_000_000), Err(Error::Divergent(_))));
        let w = vec![Letter::omega0()];
        assert!(eval_word(&w, P, 1_000_000).is_err());
    }

    #[test]
    fn tail_bound_dominates_coefficients() {
        // [s^m] L^j/j! = 2^{-m} |s(m, j)| / m!, computed exactly for small m.
        let mut stirling = vec![vec![0f64; 8]; 40];
        stirling[0][0] = 1.0;
        for m in 1..40 {
            for j in 1..8 {
                stirling[m][j] = stirling[m - 1][j - 1] + (m - 1) as f64 * stirling[m - 1][j];
            }
        }
        let mut fact = 1.0f64;
        for m in 1..40usize {
            fact *= m as f64;
            for j in 1..8usize {
                let exact = 2f64.powi(-(m as i32)) * stirling[m][j] / fact;
                let jf: f64 = (1..j).map(|x| x as f64).product();
                let bound = 2f64.powi(-(m as i32)) * harmonic(m - 1).powi(j as i32 - 1) / (jf * m as f64);
                assert!(exact <= bound * (1.0 + 1e-12), "m={m} j={j}");
            }
        }
    }
}
