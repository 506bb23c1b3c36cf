use rayon::prelude::*;

use super::{Verifier, VerificationReport};
use crate::arith::{BigReal, PrecisionContext};
use crate::closed_form as cf;
use crate::error::Result;
use crate::hypergeom::{check_4f3_identity, check_generating_series, GsKind};
use crate::index::{admissible_up_to, maximal_height_up_to, Index};
use crate::nested::{half, MtvRoute};

/// Weight from which the suite drops to `high_weight_digits`.
pub const HIGH_WEIGHT: u32 = 14;

/// Largest supported weight cap.
pub const MAX_WEIGHT_CAP: u32 = 16;

/// Antipode and two-one checks stop at this weight.
pub const ADMISSIBLE_CAP: u32 = 9;

/// Digits used for the generating-series checks.
pub const GS_DIGITS: u32 = 20;

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub weight_cap: u32,
    pub ctx: PrecisionContext,
    /// Target digits for indices of weight `>= HIGH_WEIGHT`.
    pub high_weight_digits: u32,
    pub closed_forms: bool,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl SuiteOptions {
    pub fn new(weight_cap: u32, ctx: PrecisionContext) -> Self {
        SuiteOptions {
            weight_cap,
            ctx,
            high_weight_digits: 15,
            closed_forms: true,
            jobs: None,
        }
    }
}

type Check = Box<dyn Fn(&Verifier) -> VerificationReport + Send + Sync>;

struct Job {
    id: &'static str,
    weight: u32,
    check: Check,
}

fn job(id: &'static str, weight: u32, f: impl Fn(&Verifier) -> VerificationReport + Send + Sync + 'static) -> Job {
    Job {
        id,
        weight,
        check: Box::new(f),
    }
}

fn closed(
    id: &'static str,
    weight: u32,
    inputs: String,
    lhs: impl Fn(&PrecisionContext) -> Result<BigReal> + Send + Sync + 'static,
    rhs: impl Fn(&Verifier) -> Result<BigReal> + Send + Sync + 'static,
) -> Job {
    job(id, weight, move |v| {
        v.compare_with(id, inputs.clone(), &lhs, |_| rhs(v))
    })
}

fn index_jobs(cap: u32) -> Vec<Job> {
    let mut jobs = Vec::new();
    for idx in maximal_height_up_to(cap) {
        let w = idx.weight();
        let (a, b, c) = (idx.clone(), idx.clone(), idx);
        jobs.push(job("convolution", w, move |v| v.convolution(&a)));
        jobs.push(job("descent", w, move |v| v.descent(&b)));
        jobs.push(job("matrix", w, move |v| v.matrix(&c)));
    }
    for idx in admissible_up_to(cap.min(ADMISSIBLE_CAP)) {
        let w = idx.weight();
        if idx.reversed().is_admissible() {
            let a = idx.clone();
            jobs.push(job("antipode", w, move |v| v.antipode(&a)));
        }
        jobs.push(job("two_one", w, move |v| v.two_one(&idx)));
    }
    jobs
}

fn mzv(parts: Vec<u32>) -> impl Fn(&Verifier) -> Result<BigReal> {
    move |v| v.evaluator().mzv(&Index::new(parts.clone())?)
}

fn mtv(parts: Vec<u32>) -> impl Fn(&Verifier) -> Result<BigReal> {
    move |v| v.evaluator().mtv(&Index::new(parts.clone())?, MtvRoute::Direct)
}

fn zhalf(idx: Index) -> impl Fn(&Verifier) -> Result<BigReal> {
    move |v| v.evaluator().interpolated(&idx, &half())
}

fn closed_form_jobs(cap: u32) -> Vec<Job> {
    let mut jobs = Vec::new();
    for a in 3..=6u32 {
        for b in 1..=3u32 {
            let w = a * b;
            if w > cap {
                continue;
            }
            let inputs = format!("a={a},b={b}");
            jobs.push(closed(
                "prop21_qform",
                w,
                inputs.clone(),
                move |c| cf::prop21_coeff(a, b, c),
                move |v| cf::prop21_qform(a, b, v.ctx()),
            ));
            if a % 2 == 0 {
                jobs.push(closed(
                    "prop21_cot",
                    w,
                    inputs.clone(),
                    move |c| cf::prop21_coeff(a, b, c),
                    move |v| cf::prop21_cotangent(a / 2, b, v.ctx()),
                ));
            }
            if w <= 12 {
                let idx = cf::prop21_index(a, b).expect("a >= 3, b >= 1");
                jobs.push(closed(
                    "prop21_oracle",
                    w,
                    inputs,
                    move |c| cf::prop21_coeff(a, b, c),
                    zhalf(idx),
                ));
            }
        }
    }
    for w in (3..=cap.min(11)).step_by(2) {
        for a in 1..w - 1 {
            let b = w - a;
            let inputs = format!("{a},{b}");
            jobs.push(closed(
                "parity_zeta",
                w,
                inputs.clone(),
                move |c| cf::parity_double_zeta(a, b, c),
                mzv(vec![a, b]),
            ));
            jobs.push(closed(
                "parity_t",
                w,
                inputs,
                move |c| cf::parity_double_t(a, b, c),
                mtv(vec![a, b]),
            ));
        }
    }
    for k in 2..=6u32 {
        if k + 2 <= cap {
            jobs.push(closed(
                "t_two_k",
                k + 2,
                format!("2,{k}"),
                move |c| cf::t_two_k(k, c),
                mtv(vec![2, k]),
            ));
        }
    }
    for n in 0..=cap.saturating_sub(4) {
        let w = n + 4;
        jobs.push(closed(
            "prop22_z114",
            w,
            format!("n={n}"),
            move |c| cf::prop22_z114(n, c),
            zhalf(cf::z114_index(n)),
        ));
        if n % 2 == 1 {
            let m = (n - 1) / 2;
            jobs.push(closed(
                "prop22_z114_odd",
                w,
                format!("n={n}"),
                move |c| cf::prop22_z114_odd(m, c),
                move |v| cf::prop22_z114(n, v.ctx()),
            ));
            jobs.push(closed(
                "prop22_z3112_even",
                w,
                format!("n={n}"),
                move |c| cf::prop22_z3112_even(m, c),
                move |v| cf::prop22_z3112(n, v.ctx()),
            ));
        }
        if n >= 1 {
            let idx = cf::z3112_index(n).expect("n >= 1");
            jobs.push(closed(
                "prop22_z3112",
                w,
                format!("n={n}"),
                move |c| cf::prop22_z3112(n, c),
                zhalf(idx),
            ));
            jobs.push(closed(
                "prop22_sum",
                w,
                format!("n={n}"),
                move |c| cf::prop22_sum(n, c),
                move |v| Ok(&cf::prop22_z114(n, v.ctx())? + &cf::prop22_z3112(n, v.ctx())?),
            ));
        }
    }
    for s in (0..=cap.saturating_sub(5)).step_by(2) {
        for i in 0..=s {
            let j = s - i;
            jobs.push(closed(
                "prop23",
                s + 5,
                format!("i={i},j={j}"),
                move |c| cf::prop23(i, j, c),
                zhalf(cf::z113112_index(i, j)),
            ));
        }
    }
    for n in 2..=cap.min(8) {
        jobs.push(job("t_single", n, move |v| v.t_single(n)));
    }
    if cap >= 3 {
        jobs.push(job("t12", 3, |v| v.t12()));
    }
    for (n, d) in [(1, 10), (1, 5), (3, 10)] {
        jobs.push(job("4f3", 0, move |v| {
            let x = BigReal::from_ratio(n, d, v.ctx().bits());
            check_4f3_identity(&x, v.ctx())
        }));
    }
    for kind in GsKind::ALL {
        for (n, d) in [(1, 10), (1, 5)] {
            jobs.push(job(kind.id(), 0, move |v| {
                let ctx = v.ctx().with_target(GS_DIGITS).unwrap_or(*v.ctx());
                check_generating_series(kind, &BigReal::from_ratio(n, d, ctx.bits()), &ctx)
            }));
        }
    }
    jobs
}

fn plan(opts: &SuiteOptions) -> Vec<Job> {
    if opts.weight_cap < 2 {
        return Vec::new();
    }
    let mut jobs = index_jobs(opts.weight_cap);
    if opts.closed_forms {
        jobs.extend(closed_form_jobs(opts.weight_cap));
    }
    jobs.sort_by_key(|j| j.id);
    jobs
}

/// Every applicable check up to `weight_cap`, in a fixed order.
pub fn verify_suite(weight_cap: u32, ctx: &PrecisionContext) -> Vec<VerificationReport> {
    verify_suite_with(&SuiteOptions::new(weight_cap, *ctx))
}

pub fn verify_suite_with(opts: &SuiteOptions) -> Vec<VerificationReport> {
    let jobs = plan(opts);
    let main = Verifier::new(opts.ctx);
    let high = opts
        .ctx
        .with_target(opts.high_weight_digits)
        .ok()
        .filter(|_| opts.weight_cap >= HIGH_WEIGHT)
        .map(Verifier::new);
    let run = || {
        jobs.par_iter()
            .map(|j| {
                let v = match &high {
                    Some(h) if j.weight >= HIGH_WEIGHT => h,
                    _ => &main,
                };
                (j.check)(v)
            })
            .collect::<Vec<_>>()
    };
    match opts
        .jobs
        .and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok())
    {
        Some(pool) => pool.install(run),
        None => run(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_below_two() {
        let ctx = PrecisionContext::digits(20).unwrap();
        assert!(verify_suite(1, &ctx).is_empty());
    }

    #[test]
    fn small_suite_passes_in_order() {
        let ctx = PrecisionContext::digits(20).unwrap();
        let mut opts = SuiteOptions::new(5, ctx);
        opts.closed_forms = false;
        let a = verify_suite_with(&opts);
        assert!(a.iter().all(|r| r.pass), "{:#?}", a.iter().find(|r| !r.pass));
        let ids: Vec<_> = a.iter().map(|r| r.identity_id.clone()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
        opts.jobs = Some(1);
        let b = verify_suite_with(&opts);
        assert!(a.iter().zip(&b).all(|(x, y)| x.same_outcome(y)));
    }
}
