//! Evaluation of alternating and classical multiple zeta values, multiple
//! t-values, interpolated values `ζ^r` and the rescalings `ž^½`, `ť`.
//!
//! The production path turns every value into a single iterated integral
//! (see [`word`]) and sums two geometrically convergent series. The
//! [`oracle`] module keeps the slow truncated nested sums for testing.

pub mod oracle;
pub mod word;

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{zeta_at, zeta_bar_at, BigReal, PrecisionContext};
use crate::error::{Error, Result};
use crate::index::{Index, Sign, SignedIndex};

pub use word::{eval_word, interpolated_word, mtv_word, Letter};

/// How a multiple t-value is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MtvRoute {
    /// One iterated integral with odd-parity letters.
    Direct,
    /// `2^{-d} Σ_ε ε_1⋯ε_d ζ(k; ε)` over all sign vectors.
    ViaAmzv,
}

/// How an interpolated value is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InterpRoute {
    /// Sum over the `2^{d-1}` contractions, each an (A)MZV.
    Compositions,
    /// One iterated integral carrying `r` in its letters.
    SingleWord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rescaled {
    /// `2^{dp} ζ^{1/2}`.
    ZetaHalfTilde,
    /// `2^{wt} t`.
    TTilde,
}

/// Depth above which [`InterpRoute::Compositions`] hands over to the single word.
pub const COMPOSITION_DEPTH_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    Amzv(SignedIndex),
    Mtv(Index, MtvRoute),
    Interp(SignedIndex, BigRational, InterpRoute),
}

/// Memoizing evaluator bound to one precision context; safe to share
/// between threads.
pub struct Evaluator {
    ctx: PrecisionContext,
    cache: Mutex<HashMap<Key, BigReal>>,
}

impl Evaluator {
    pub fn new(ctx: PrecisionContext) -> Self {
        Evaluator {
            ctx,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    pub fn bits(&self) -> usize {
        self.ctx.bits()
    }

    fn cached(&self, key: Key, compute: impl FnOnce() -> Result<BigReal>) -> Result<BigReal> {
        if let Some(v) = self.cache.lock().expect("evaluator cache").get(&key) {
            return Ok(v.clone());
        }
        let v = compute()?;
        self.cache
            .lock()
            .expect("evaluator cache")
            .insert(key, v.clone());
        Ok(v)
    }

    /// `ζ(k; ε) = Σ_{0<m_1<⋯<m_d} ε_1^{m_1}⋯ε_d^{m_d} / (m_1^{k_1}⋯m_d^{k_d})`.
    pub fn amzv(&self, sidx: &SignedIndex) -> Result<BigReal> {
        if !sidx.is_convergent() {
            return Err(Error::Divergent(format!("zeta({sidx})")));
        }
        let p = self.bits();
        match sidx.parts() {
            [] => Ok(BigReal::one(p)),
            [(1, Sign::Minus)] => Ok(-BigReal::ln2(p)),
            [(k, Sign::Plus)] => zeta_at(*k, p),
            [(k, Sign::Minus)] => zeta_bar_at(*k, p),
            _ => self.cached(Key::Amzv(sidx.clone()), || {
                eval_word(
                    &interpolated_word(sidx, &BigRational::zero()),
                    p,
                    self.ctx.max_terms,
                )
            }),
        }
    }

    pub fn mzv(&self, idx: &Index) -> Result<BigReal> {
        if !idx.is_admissible() {
            return Err(Error::NotAdmissible(idx.to_string()));
        }
        self.amzv(&idx.to_signed())
    }

    pub fn mtv(&self, idx: &Index, route: MtvRoute) -> Result<BigReal> {
        if !idx.is_admissible() {
            return Err(Error::NotAdmissible(idx.to_string()));
        }
        let p = self.bits();
        if idx.is_empty() {
            return Ok(BigReal::one(p));
        }
        self.cached(Key::Mtv(idx.clone(), route), || match route {
            MtvRoute::Direct => eval_word(&mtv_word(idx.parts()), p, self.ctx.max_terms),
            MtvRoute::ViaAmzv => {
                let d = idx.depth();
                let mut total = BigReal::zero(p);
                for mask in 0u32..(1 << d) {
                    let parts: Vec<(u32, Sign)> = idx
                        .parts()
                        .iter()
                        .enumerate()
                        .map(|(i, &k)| {
                            let s = if mask >> i & 1 == 1 { Sign::Minus } else { Sign::Plus };
                            (k, s)
                        })
                        .collect();
                    let v = self.amzv(&SignedIndex::new(parts)?)?;
                    total = if mask.count_ones() % 2 == 1 {
                        &total - &v
                    } else {
                        &total + &v
                    };
                }
                Ok(total.mul_pow2(-(d as i32)))
            }
        })
    }

    /// `ζ^r(k)` for an unsigned admissible index.
    pub fn interpolated(&self, idx: &Index, r: &BigRational) -> Result<BigReal> {
        if !idx.is_admissible() {
            return Err(Error::NotAdmissible(idx.to_string()));
        }
        self.interpolated_signed(&idx.to_signed(), r)
    }

    /// `ζ^r(k; ε)`: merging adjacent parts adds exponents, multiplies signs
    /// and costs a factor `r`.
    pub fn interpolated_signed(&self, sidx: &SignedIndex, r: &BigRational) -> Result<BigReal> {
        let route = if sidx.depth() > COMPOSITION_DEPTH_LIMIT {
            InterpRoute::SingleWord
        } else {
            InterpRoute::Compositions
        };
        self.interpolated_route(sidx, r, route)
    }

    pub fn interpolated_route(
        &self,
        sidx: &SignedIndex,
        r: &BigRational,
        route: InterpRoute,
    ) -> Result<BigReal> {
        if r < &BigRational::zero() || r > &BigRational::one() {
            return Err(Error::Parameter(format!("r = {r} outside [0, 1]")));
        }
        if !sidx.is_convergent() {
            return Err(Error::Divergent(format!("zeta^r({sidx})")));
        }
        let p = self.bits();
        if sidx.depth() <= 1 || r.is_zero() {
            return self.amzv(sidx);
        }
        self.cached(Key::Interp(sidx.clone(), r.clone(), route), || match route {
            InterpRoute::SingleWord => {
                eval_word(&interpolated_word(sidx, r), p, self.ctx.max_terms)
            }
            InterpRoute::Compositions => {
                let mut total = BigReal::zero(p);
                for (weight, contracted) in contractions(sidx, r) {
                    let v = self.amzv(&contracted).map_err(|e| match e {
                        Error::Divergent(_) => {
                            Error::Divergent(format!("zeta({contracted}) in zeta^r({sidx})"))
                        }
                        other => other,
                    })?;
                    total = &total + &(&BigReal::from_rational(&weight, p) * &v);
                }
                Ok(total)
            }
        })
    }

    /// `ζ*(k) = ζ^1(k)`.
    pub fn zstar(&self, idx: &Index) -> Result<BigReal> {
        self.interpolated(idx, &BigRational::one())
    }

    /// `ζ^{1/2}(k)`.
    pub fn zhalf(&self, idx: &Index) -> Result<BigReal> {
        self.interpolated(idx, &half())
    }

    pub fn rescaled(&self, family: Rescaled, idx: &Index) -> Result<BigReal> {
        match family {
            Rescaled::ZetaHalfTilde => {
                Ok(self.zhalf(idx)?.mul_pow2(idx.depth() as i32))
            }
            Rescaled::TTilde => Ok(self
                .mtv(idx, MtvRoute::Direct)?
                .mul_pow2(idx.weight() as i32)),
        }
    }

    /// `ž^{1/2}` of a signed index.
    pub fn zhalf_tilde_signed(&self, sidx: &SignedIndex) -> Result<BigReal> {
        Ok(self
            .interpolated_signed(sidx, &half())?
            .mul_pow2(sidx.depth() as i32))
    }

    pub fn zhalf_tilde(&self, idx: &Index) -> Result<BigReal> {
        self.rescaled(Rescaled::ZetaHalfTilde, idx)
    }

    pub fn t_tilde(&self, idx: &Index) -> Result<BigReal> {
        self.rescaled(Rescaled::TTilde, idx)
    }
}

pub fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// All contractions of `sidx` with their weights `r^{#merges}`.
pub fn contractions(sidx: &SignedIndex, r: &BigRational) -> Vec<(BigRational, SignedIndex)> {
    let parts = sidx.parts();
    let d = parts.len();
    if d == 0 {
        return vec![(BigRational::one(), sidx.clone())];
    }
    let mut out = Vec::with_capacity(1 << (d - 1));
    for mask in 0u64..(1u64 << (d - 1)) {
        let mut merged: Vec<(u32, Sign)> = vec![parts[0]];
        for (i, &part) in parts.iter().enumerate().skip(1) {
            if mask >> (i - 1) & 1 == 1 {
                let last = merged.last_mut().unwrap();
                last.0 += part.0;
                last.1 = last.1.mul(part.1);
            } else {
                merged.push(part);
            }
        }
        let weight = num_traits::pow(r.clone(), mask.count_ones() as usize);
        out.push((weight, SignedIndex::new(merged).expect("positive parts")));
    }
    out
}

pub fn eval_amzv(sidx: &SignedIndex, ctx: &PrecisionContext) -> Result<BigReal> {
    Evaluator::new(*ctx).amzv(sidx)
}

pub fn eval_mzv(idx: &Index, ctx: &PrecisionContext) -> Result<BigReal> {
    if idx.is_empty() {
        return Err(Error::InvalidIndex("empty index".into()));
    }
    Evaluator::new(*ctx).mzv(idx)
}

pub fn eval_mtv(idx: &Index, ctx: &PrecisionContext, route: MtvRoute) -> Result<BigReal> {
    Evaluator::new(*ctx).mtv(idx, route)
}

/// `ζ^r` of `idx`, with optional signs attached part by part.
pub fn eval_interpolated(
    idx: &Index,
    r: &BigRational,
    signs: Option<&[Sign]>,
    ctx: &PrecisionContext,
) -> Result<BigReal> {
    let ev = Evaluator::new(*ctx);
    match signs {
        None => ev.interpolated(idx, r),
        Some(s) => {
            if s.len() != idx.depth() {
                return Err(Error::Parameter(format!(
                    "{} signs for an index of depth {}",
                    s.len(),
                    idx.depth()
                )));
            }
            let parts = idx.parts().iter().copied().zip(s.iter().copied()).collect();
            ev.interpolated_signed(&SignedIndex::new(parts)?, r)
        }
    }
}

pub fn eval_rescaled(family: Rescaled, idx: &Index, ctx: &PrecisionContext) -> Result<BigReal> {
    if !idx.is_admissible() {
        return Err(Error::NotAdmissible(idx.to_string()));
    }
    Evaluator::new(*ctx).rescaled(family, idx)
}
