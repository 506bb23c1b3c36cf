//! Numerical certification of the convolution, descent, matrix, antipode
//! and two-one identities, with serialisable reports.

mod report;
mod suite;

use std::collections::BTreeMap;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::One;

use crate::arith::{BigReal, PrecisionContext};
use crate::error::{Error, Result};
use crate::index::{bar_evens, bl, Index};
use crate::nested::{contractions, Evaluator, MtvRoute};

pub use report::{decide, VerificationReport, Verdict, BOUND_SLACK};
pub use suite::{verify_suite, verify_suite_with, SuiteOptions, ADMISSIBLE_CAP, GS_DIGITS, HIGH_WEIGHT, MAX_WEIGHT_CAP};

/// Formal integer combination of indices.
pub type Combination = BTreeMap<Index, i64>;

/// Quasi-shuffle (stuffle) product, recursing on the last (outermost) part.
pub fn stuffle_product(a: &Index, b: &Index) -> Combination {
    fn rec(a: &[u32], b: &[u32], memo: &mut BTreeMap<(Vec<u32>, Vec<u32>), Combination>) -> Combination {
        if a.is_empty() || b.is_empty() {
            let w = if a.is_empty() { b } else { a };
            return Combination::from([(Index::new(w.to_vec()).expect("positive parts"), 1)]);
        }
        let key = (a.to_vec(), b.to_vec());
        if let Some(c) = memo.get(&key) {
            return c.clone();
        }
        let (x, u) = a.split_last().unwrap();
        let (y, v) = b.split_last().unwrap();
        let mut out = Combination::new();
        let mut push = |c: Combination, last: u32| {
            for (idx, n) in c {
                let mut parts = idx.into_parts();
                parts.push(last);
                *out.entry(Index::new(parts).expect("positive parts")).or_insert(0) += n;
            }
        };
        push(rec(u, b, memo), *x);
        push(rec(a, v, memo), *y);
        push(rec(u, v, memo), x + y);
        memo.insert(key, out.clone());
        out
    }
    rec(a.parts(), b.parts(), &mut BTreeMap::new())
}

/// Evaluator wrapper running the individual checks; shares one cache.
pub struct Verifier {
    ev: Evaluator,
}

fn sign(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn require_maximal_height(idx: &Index) -> Result<()> {
    if idx.is_maximal_height() {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "({idx}) is not of maximal height: every part must be at least 2"
        )))
    }
}

fn run(
    id: &str,
    inputs: String,
    ctx: &PrecisionContext,
    f: impl FnOnce() -> Result<VerificationReport>,
) -> VerificationReport {
    let start = Instant::now();
    match f() {
        Ok(r) => r.timed(start),
        Err(e) => VerificationReport::failed(id, inputs, e.to_string(), ctx).timed(start),
    }
}

impl Verifier {
    pub fn new(ctx: PrecisionContext) -> Self {
        Verifier {
            ev: Evaluator::new(ctx),
        }
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.ev
    }

    pub fn ctx(&self) -> &PrecisionContext {
        self.ev.ctx()
    }

    fn p(&self) -> usize {
        self.ev.bits()
    }

    /// `ζ*` with the empty value `1`.
    fn zstar(&self, idx: &Index) -> Result<BigReal> {
        if idx.is_empty() {
            return Ok(BigReal::one(self.p()));
        }
        self.ev.zstar(idx)
    }

    /// `ζ` with the empty value `1`.
    fn zeta(&self, idx: &Index) -> Result<BigReal> {
        if idx.is_empty() {
            return Ok(BigReal::one(self.p()));
        }
        self.ev.mzv(idx)
    }

    /// `-ž^{1/2}(bl(idx))`.
    fn conv_lhs(&self, idx: &Index) -> Result<BigReal> {
        Ok(-self.ev.zhalf_tilde(&bl(idx)?)?)
    }

    /// `Σ_{i=0}^d (-1)^i ť(k_1..k_i) ζ*(k_d..k_{i+1})` for `k = reverse(idx)`.
    fn conv_rhs(&self, idx: &Index) -> Result<BigReal> {
        let k = idx.reversed();
        let d = k.depth();
        let mut acc = BigReal::zero(self.p());
        for i in 0..=d {
            let t = self.ev.t_tilde(&k.slice(0, i))?;
            let z = self.zstar(&k.slice(i, d).reversed())?;
            acc = &acc + &(&t * &z).mul_i64(sign(i));
        }
        Ok(acc)
    }

    /// `-ž^{1/2}(bl(idx)) = Σ_i (-1)^i ť(k_1..k_i) ζ*(k_d..k_{i+1})`, where
    /// `idx = (k_d, …, k_1)` is the argument of `bl`.
    pub fn convolution(&self, idx: &Index) -> VerificationReport {
        run("convolution", idx.to_string(), self.ctx(), || {
            require_maximal_height(idx)?;
            let lhs = self.conv_lhs(idx)?;
            let rhs = self.conv_rhs(idx)?;
            Ok(VerificationReport::compare("convolution", idx.to_string(), &lhs, &rhs, self.ctx()))
        })
    }

    /// `ť(k) = ζ(k) + Σ_i (-1)^{i-1} ζ(k_{i+1}..k_d) ž^{1/2}(bl(k_i..k_1))`.
    pub fn descent(&self, idx: &Index) -> VerificationReport {
        run("descent", idx.to_string(), self.ctx(), || {
            require_maximal_height(idx)?;
            let d = idx.depth();
            let lhs = self.ev.t_tilde(idx)?;
            let mut rhs = self.zeta(idx)?;
            for i in 1..=d {
                let z = self.zeta(&idx.slice(i, d))?;
                let h = self.ev.zhalf_tilde(&bl(&idx.slice(0, i).reversed())?)?;
                rhs = &rhs + &(&z * &h).mul_i64(sign(i - 1));
            }
            Ok(VerificationReport::compare("descent", idx.to_string(), &lhs, &rhs, self.ctx()))
        })
    }

    /// The unitriangular `ζ*` matrix, its claimed `ζ` inverse, and the two
    /// column vectors, for `idx = (k_1, …, k_d)`.
    fn matrices(&self, idx: &Index) -> Result<MatrixData> {
        let d = idx.depth();
        let p = self.p();
        let k = idx.parts();
        // rows/columns 0..=d; entry (r, c) involves k_{d-c+1..d-r} (1-based)
        let sub = |r: usize, c: usize| Index::new(k[d - c..d - r].to_vec()).expect("positive parts");
        let mut star = vec![vec![BigReal::zero(p); d + 1]; d + 1];
        let mut inv = vec![vec![BigReal::zero(p); d + 1]; d + 1];
        for r in 0..=d {
            for c in r..=d {
                let s = sub(r, c);
                star[r][c] = self.zstar(&s.reversed())?;
                inv[r][c] = self.zeta(&s)?.mul_i64(sign(c - r));
            }
        }
        let mut t = Vec::with_capacity(d + 1);
        let mut z = Vec::with_capacity(d + 1);
        for r in 0..=d {
            let prefix = idx.slice(0, d - r);
            t.push(self.ev.t_tilde(&prefix)?.mul_i64(sign(d - r)));
            z.push(if r == d {
                BigReal::one(p)
            } else {
                -self.ev.zhalf_tilde(&bl(&prefix.reversed())?)?
            });
        }
        Ok(MatrixData { star, inv, t, z })
    }

    /// `Z* · Z⁻¹ = I`, `z = Z* t` and `t = Z⁻¹ z`; the residual is the
    /// largest entrywise deviation.
    pub fn matrix(&self, idx: &Index) -> VerificationReport {
        run("matrix", idx.to_string(), self.ctx(), || {
            require_maximal_height(idx)?;
            let m = self.matrices(idx)?;
            let n = m.t.len();
            let p = self.p();
            let mut residual = 0.0f64;
            let mut bound = 0.0f64;
            let mut note = |value: &BigReal, target: &BigReal| {
                residual = residual.max(value.distance(target));
                bound = bound.max(value.error() + target.error());
            };
            for r in 0..n {
                for c in 0..n {
                    let mut acc = BigReal::zero(p);
                    for j in 0..n {
                        acc = &acc + &(&m.star[r][j] * &m.inv[j][c]);
                    }
                    let id = if r == c { BigReal::one(p) } else { BigReal::zero(p) };
                    note(&acc, &id);
                }
                let mut zt = BigReal::zero(p);
                let mut tz = BigReal::zero(p);
                for j in 0..n {
                    zt = &zt + &(&m.star[r][j] * &m.t[j]);
                    tz = &tz + &(&m.inv[r][j] * &m.z[j]);
                }
                note(&zt, &m.z[r]);
                note(&tz, &m.t[r]);
            }
            Ok(VerificationReport::new(
                "matrix",
                idx.to_string(),
                format!("{n}x{n} products"),
                "identity".into(),
                residual,
                bound,
                self.ctx(),
            ))
        })
    }

    /// Stuffle-regularized `ζ(idx)` with `ζ(1) = 0`.
    pub fn zeta_regularized(&self, idx: &Index) -> Result<BigReal> {
        let parts = idx.parts();
        let r = parts.iter().rev().take_while(|&&k| k == 1).count();
        if r == 0 {
            return self.zeta(idx);
        }
        // (a, 1^{r-1}) * (1) = r (a, 1^r) + terms with fewer trailing ones; the product regularizes to 0
        let shorter = Index::new(parts[..parts.len() - 1].to_vec())?;
        let one = Index::new(vec![1])?;
        let mut acc = BigReal::zero(self.p());
        let mut lead = 0;
        for (term, n) in stuffle_product(&shorter, &one) {
            if &term == idx {
                lead = n;
                continue;
            }
            acc = &acc + &self.zeta_regularized(&term)?.mul_i64(n);
        }
        Ok(-acc.div_i64(lead))
    }

    /// Regularized `ζ*` as the sum over contractions of regularized `ζ`.
    pub fn zstar_regularized(&self, idx: &Index) -> Result<BigReal> {
        if idx.is_admissible() {
            return self.zstar(idx);
        }
        let mut acc = BigReal::zero(self.p());
        for (_, c) in contractions(&idx.to_signed(), &BigRational::one()) {
            acc = &acc + &self.zeta_regularized(&c.unsigned())?;
        }
        Ok(acc)
    }

    /// `Σ_i (-1)^i ζ(k_1..k_i) ζ*(k_d..k_{i+1}) = 0`; interior values ending
    /// in `1` are stuffle-regularized.
    pub fn antipode(&self, idx: &Index) -> VerificationReport {
        run("antipode", idx.to_string(), self.ctx(), || {
            if idx.is_empty() || !idx.is_admissible() || !idx.reversed().is_admissible() {
                return Err(Error::Divergent(format!(
                    "antipode needs ({idx}) and its reverse admissible"
                )));
            }
            let d = idx.depth();
            let mut acc = BigReal::zero(self.p());
            for i in 0..=d {
                let z = self.zeta_regularized(&idx.slice(0, i))?;
                let s = self.zstar_regularized(&idx.slice(i, d).reversed())?;
                acc = &acc + &(&z * &s).mul_i64(sign(i));
            }
            let zero = BigReal::zero(self.p());
            Ok(VerificationReport::compare("antipode", idx.to_string(), &acc, &zero, self.ctx()))
        })
    }

    /// `ž^{1/2}(B(bl(k))) = ε ζ*(k)` with `ε = 1` if `k_1 = 1` and `-1` otherwise.
    pub fn two_one(&self, idx: &Index) -> VerificationReport {
        run("two_one", idx.to_string(), self.ctx(), || {
            idx.require_admissible()?;
            if idx.is_empty() {
                return Err(Error::InvalidIndex("empty index".into()));
            }
            let b = bar_evens(&bl(idx)?);
            let lhs = self.ev.zhalf_tilde_signed(&b)?;
            let eps = if idx.parts()[0] == 1 { 1 } else { -1 };
            let rhs = self.zstar(idx)?.mul_i64(eps);
            Ok(VerificationReport::compare("two_one", idx.to_string(), &lhs, &rhs, self.ctx()))
        })
    }

    /// `ť(1,2) = -7/2 ζ(3) + π² log 2`.
    pub fn t12(&self) -> VerificationReport {
        run("t12", "1,2".into(), self.ctx(), || {
            let p = self.p();
            let lhs = self.ev.t_tilde(&Index::new(vec![1, 2])?)?;
            let z3 = self.ev.mzv(&Index::new(vec![3])?)?;
            let rhs = &z3.mul_i64(-7).mul_pow2(-1) + &(&BigReal::pi(p).sqr() * &BigReal::ln2(p));
            Ok(VerificationReport::compare("t12", "1,2".into(), &lhs, &rhs, self.ctx()))
        })
    }

    /// `t(n) = (1 - 2^{-n}) ζ(n)`.
    pub fn t_single(&self, n: u32) -> VerificationReport {
        run("t_single", n.to_string(), self.ctx(), || {
            let p = self.p();
            let idx = Index::new(vec![n])?;
            let lhs = self.ev.mtv(&idx, MtvRoute::Direct)?;
            let one = BigReal::one(p);
            let rhs = &(&one - &one.mul_pow2(-(n as i32))) * &self.ev.mzv(&idx)?;
            Ok(VerificationReport::compare("t_single", n.to_string(), &lhs, &rhs, self.ctx()))
        })
    }

    /// A closed value against an evaluator value.
    pub fn compare_with(
        &self,
        id: &str,
        inputs: String,
        closed: impl FnOnce(&PrecisionContext) -> Result<BigReal>,
        oracle: impl FnOnce(&Evaluator) -> Result<BigReal>,
    ) -> VerificationReport {
        let ctx = *self.ctx();
        run(id, inputs.clone(), &ctx, || {
            let lhs = closed(&ctx)?;
            let rhs = oracle(&self.ev)?;
            Ok(VerificationReport::compare(id, inputs.clone(), &lhs, &rhs, &ctx))
        })
    }
}

struct MatrixData {
    star: Vec<Vec<BigReal>>,
    inv: Vec<Vec<BigReal>>,
    t: Vec<BigReal>,
    z: Vec<BigReal>,
}

pub fn verify_convolution(idx: &Index, ctx: &PrecisionContext) -> VerificationReport {
    Verifier::new(*ctx).convolution(idx)
}

pub fn verify_descent(idx: &Index, ctx: &PrecisionContext) -> VerificationReport {
    Verifier::new(*ctx).descent(idx)
}

pub fn verify_matrix(idx: &Index, ctx: &PrecisionContext) -> VerificationReport {
    Verifier::new(*ctx).matrix(idx)
}

pub fn verify_antipode(idx: &Index, ctx: &PrecisionContext) -> VerificationReport {
    Verifier::new(*ctx).antipode(idx)
}

pub fn verify_two_one(idx: &Index, ctx: &PrecisionContext) -> VerificationReport {
    Verifier::new(*ctx).two_one(idx)
}

pub fn verify_t12(ctx: &PrecisionContext) -> VerificationReport {
    Verifier::new(*ctx).t12()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ix(s: &str) -> Index {
        s.parse().unwrap()
    }

    fn ctx() -> PrecisionContext {
        PrecisionContext::digits(30).unwrap()
    }

    #[test]
    fn stuffle_small() {
        let c = stuffle_product(&ix("2"), &ix("3"));
        assert_eq!(c, Combination::from([(ix("2,3"), 1), (ix("3,2"), 1), (ix("5"), 1)]));
        let c = stuffle_product(&ix("2"), &ix("2"));
        assert_eq!(c, Combination::from([(ix("2,2"), 2), (ix("4"), 1)]));
        let c = stuffle_product(&ix("2"), &ix("1,2"));
        assert_eq!(c.values().sum::<i64>(), 5);
        assert_eq!(c[&ix("1,2,2")], 2);
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn stuffle_numeric() {
        let v = Verifier::new(ctx());
        for (a, b) in [("2", "1,2"), ("2,3", "3"), ("1,2", "2,2")] {
            let (a, b) = (ix(a), ix(b));
            let lhs = &v.zeta(&a).unwrap() * &v.zeta(&b).unwrap();
            let mut rhs = BigReal::zero(v.p());
            for (t, n) in stuffle_product(&a, &b) {
                rhs = &rhs + &v.zeta(&t).unwrap().mul_i64(n);
            }
            assert!(lhs.distance(&rhs) < 1e-35);
        }
    }

    #[test]
    fn convolution_examples() {
        let c = PrecisionContext::digits(15).unwrap();
        let r = verify_convolution(&ix("2,3,4,5"), &c);
        assert!(r.pass, "{r}");
        assert!(r.lhs.starts_with("-25.79239988"), "{}", r.lhs);
        for s in ["2", "3,2", "2,3"] {
            assert!(verify_convolution(&ix(s), &ctx()).pass);
        }
        assert!(!verify_convolution(&ix("1,2"), &ctx()).pass);
    }

    #[test]
    fn descent_and_matrix_examples() {
        let v = Verifier::new(ctx());
        for s in ["2", "2,3", "3,2,2"] {
            assert!(v.descent(&ix(s)).pass, "{s}");
            assert!(v.matrix(&ix(s)).pass, "{s}");
        }
    }

    #[test]
    fn matrix_depth_one_inverse() {
        let v = Verifier::new(ctx());
        let m = v.matrices(&ix("2")).unwrap();
        let z2 = v.zeta(&ix("2")).unwrap();
        assert!(m.star[0][1].distance(&z2) < 1e-40);
        assert!(m.inv[0][1].distance(&-z2) < 1e-40);
    }

    #[test]
    fn antipode_examples() {
        let v = Verifier::new(ctx());
        for s in ["3", "2,3", "2,3,4", "2,1,2", "3,1,1,2"] {
            let r = v.antipode(&ix(s));
            assert!(r.pass, "{r}");
        }
        assert!(!v.antipode(&ix("1,2")).pass);
    }

    #[test]
    fn regularization_of_depth_two() {
        // ζ(2)ζ(1) = ζ(2,1) + ζ(1,2) + ζ(3) with ζ(1) = 0
        let v = Verifier::new(ctx());
        let got = v.zeta_regularized(&ix("2,1")).unwrap();
        let want = -(&v.zeta(&ix("1,2")).unwrap() + &v.zeta(&ix("3")).unwrap());
        assert!(got.distance(&want) < 1e-40);
        assert!(v.zeta_regularized(&ix("1")).unwrap().is_zero());
    }

    #[test]
    fn two_one_examples() {
        let v = Verifier::new(PrecisionContext::digits(15).unwrap());
        for s in ["2,3,4,5", "2", "1,2", "1,1,3"] {
            let r = v.two_one(&ix(s));
            assert!(r.pass, "{r}");
        }
    }

    #[test]
    fn t12_tolerance_semantics() {
        let r = verify_t12(&ctx());
        assert!(r.pass);
        let tight = r.clone().with_tolerance(r.error_bound * 1e-3);
        assert_eq!(tight.verdict, Verdict::Inconclusive);
        let r60 = verify_t12(&PrecisionContext::digits(60).unwrap());
        assert!(r60.pass && r60.error_bound < r.error_bound);
    }
}
