use std::process::ExitCode;
use std::time::{Duration, Instant};

use mtv_descent::arith::{BigReal, PrecisionContext};
use mtv_descent::closed_form as cf;
use mtv_descent::hypergeom::{check_4f3_identity, check_generating_series, GsKind};
use mtv_descent::index::{
    admissible_up_to, bar_evens, bl, bl_inv, bl_maximal_height_closed_form, classify, compositions, index_of_word,
    maximal_height_runs, maximal_height_up_to, word_of_index, Index, IndexClass,
};
use mtv_descent::nested::{half, Evaluator, MtvRoute};
use mtv_descent::verify::{verify_convolution, verify_suite_with, SuiteOptions, VerificationReport, Verifier};

type Outcome = std::result::Result<String, String>;

fn ctx(d: u32) -> PrecisionContext {
    PrecisionContext::digits(d).unwrap()
}

fn ix(s: &str) -> Index {
    s.parse().unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(start: Instant, limit: Duration) -> std::result::Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || format!("took {:.1?}, limit {:?}", t, limit))
}

/// Passes with residual at most `tol`.
fn strict(r: &VerificationReport, tol: f64) -> std::result::Result<(), String> {
    ensure(r.pass && r.residual <= tol, || format!("{r}"))
}

fn close(a: &BigReal, b: &BigReal, tol: f64, what: &str) -> std::result::Result<(), String> {
    let d = a.distance(b);
    ensure(d <= tol && d <= 10.0 * (a.error() + b.error()) + tol, || {
        format!("{what}: {} vs {} (residual {d:.2e})", a.render(), b.render())
    })
}

fn leading_digits(s: &str, n: usize) -> String {
    s.chars().filter(|c| c.is_ascii_digit()).skip_while(|&c| c == '0').take(n).collect()
}

fn c1() -> Outcome {
    let start = Instant::now();
    let b = bl(&ix("2,3,4,5")).map_err(|e| e.to_string())?;
    ensure(b == ix("3,3,1,3,1,1,2"), || format!("bl(2,3,4,5) = {b}"))?;
    let mut count = 0usize;
    for w in 2..=16 {
        for idx in compositions(w, 1).into_iter().filter(Index::is_admissible) {
            count += 1;
            let word = word_of_index(&idx).unwrap();
            ensure(index_of_word(&word).unwrap() == idx, || format!("word round trip fails at {idx}"))?;
            let b = bl(&idx).unwrap();
            ensure(b.weight() == w, || format!("weight changes at {idx}"))?;
            ensure(bl_inv(&b).unwrap() == idx, || format!("bl_inv fails at {idx}"))?;
            let classes = classify(&idx);
            if classes.contains(&IndexClass::MaximalHeight) {
                ensure(classify(&b).contains(&IndexClass::OddOddEven), || format!("class image at {idx}"))?;
                let (a, r) = maximal_height_runs(&idx).unwrap();
                ensure(bl_maximal_height_closed_form(&a, &r).unwrap() == b, || {
                    format!("closed form disagrees at {idx}")
                })?;
            }
            if classes.contains(&IndexClass::AllAtLeast3) {
                ensure(classify(&b).contains(&IndexClass::OneOneThreeTwo), || format!("class image at {idx}"))?;
            }
        }
    }
    within_time(start, Duration::from_secs(10))?;
    Ok(format!("{count} admissible indices of weight <= 16 in {:.1?}", start.elapsed()))
}

fn c2() -> Outcome {
    let start = Instant::now();
    let r = verify_convolution(&ix("2,3,4,5"), &ctx(15));
    strict(&r, 1e-10)?;
    let digits = leading_digits(&r.lhs, 9);
    ensure(r.lhs.starts_with('-') && digits == "257923998", || format!("lhs {} does not start -25.7923998", r.lhs))?;
    within_time(start, Duration::from_secs(120))?;
    Ok(format!("lhs {} residual {:.1e}", r.lhs, r.residual))
}

fn c3() -> Outcome {
    let start = Instant::now();
    let v = Verifier::new(ctx(30));
    let mut n = 0;
    let mut worst = 0.0f64;
    for idx in maximal_height_up_to(9) {
        for r in [v.convolution(&idx), v.descent(&idx), v.matrix(&idx)] {
            strict(&r, 1e-25)?;
            worst = worst.max(r.residual);
            n += 1;
        }
    }
    within_time(start, Duration::from_secs(600))?;
    Ok(format!("{n} checks, worst residual {worst:.1e}, {:.1?}", start.elapsed()))
}

fn c4() -> Outcome {
    let c = ctx(30);
    let ev = Evaluator::new(c);
    let v = Verifier::new(c);
    let t2 = ev.mtv(&ix("2"), MtvRoute::Direct).map_err(|e| e.to_string())?;
    let z2 = ev.mzv(&ix("2")).map_err(|e| e.to_string())?;
    close(&t2, &z2.mul_i64(3).div_i64(4), 1e-25, "t(2)")?;
    for n in 2..=8 {
        strict(&v.t_single(n), 1e-25)?;
    }
    Ok("t(2) and t(n), 2 <= n <= 8".into())
}

fn c5() -> Outcome {
    let r = Verifier::new(ctx(30)).t12();
    strict(&r, 1e-25)?;
    Ok(format!("ť(1,2) = {} residual {:.1e}", r.lhs, r.residual))
}

fn c6() -> Outcome {
    let c15 = ctx(15);
    let ev = Evaluator::new(c15);
    let k = ix("2,3,4,5");
    let signed = bar_evens(&bl(&k).unwrap());
    let lhs = ev.zhalf_tilde_signed(&signed).map_err(|e| e.to_string())?;
    let zs = ev.zstar(&k).map_err(|e| e.to_string())?;
    // k_1 = 2 > 1, so the sign is -1
    close(&lhs, &-&zs, 1e-10, "ž^½(3,3,1,3,1,1,2b) vs -ζ*(2,3,4,5)")?;
    let v = Verifier::new(ctx(30));
    let mut n = 0;
    for idx in admissible_up_to(8) {
        strict(&v.two_one(&idx), 1e-25)?;
        n += 1;
    }
    Ok(format!(
        "{n} indices; ž^½(3,3,1,3,1,1,2b) = {} = -ζ*(2,3,4,5), sign -1 as the rule gives for k_1 > 1 \
         (the unsigned form of this example is off by sign)",
        lhs.to_decimal(15)
    ))
}

fn c7() -> Outcome {
    let c = ctx(30);
    let ev = Evaluator::new(c);
    let p = c.bits();
    let z = |k: u32| ev.mzv(&Index::new(vec![k]).unwrap()).unwrap();
    for (b, (num, den)) in [(1u32, (31i64, 16i64)), (2, (40247, 353792)), (3, (1595681, 224599040))] {
        let v = cf::prop21_coeff(6, b, &c).map_err(|e| e.to_string())?;
        let want = &BigReal::from_ratio(num, den, p) * &z(6 * b);
        close(&v, &want, 1e-25, &format!("a=6, b={b}"))?;
    }
    let mut oracle = 0;
    for a in 3..=6 {
        for b in 1..=3 {
            let x = cf::prop21_coeff(a, b, &c).map_err(|e| e.to_string())?;
            close(&x, &cf::prop21_qform(a, b, &c).unwrap(), 1e-25, &format!("Q form a={a}, b={b}"))?;
            if a % 2 == 0 {
                let y = cf::prop21_cotangent(a / 2, b, &c).unwrap();
                close(&x, &y, 1e-25, &format!("cotangent a={a}, b={b}"))?;
            }
            if a * b <= 12 {
                let o = ev.interpolated(&cf::prop21_index(a, b).unwrap(), &half()).unwrap();
                close(&x, &o, 1e-10, &format!("ζ^½ a={a}, b={b}"))?;
                oracle += 1;
            }
        }
    }
    Ok(format!("three values, 12 route comparisons, {oracle} evaluator comparisons"))
}

fn c8() -> Outcome {
    let c = ctx(30);
    let ev = Evaluator::new(c);
    let zh = |idx: &Index| ev.interpolated(idx, &half()).map_err(|e| e.to_string());
    let mut n = 0;
    for k in 0..=6 {
        close(&cf::prop22_z114(k, &c).unwrap(), &zh(&cf::z114_index(k))?, 1e-20, &format!("(1^{k},4)"))?;
        n += 1;
        if k >= 1 {
            let idx = cf::z3112_index(k).unwrap();
            close(&cf::prop22_z3112(k, &c).unwrap(), &zh(&idx)?, 1e-20, &format!("({idx})"))?;
            let sum = &cf::prop22_z114(k, &c).unwrap() + &cf::prop22_z3112(k, &c).unwrap();
            close(&cf::prop22_sum(k, &c).unwrap(), &sum, 1e-20, &format!("sum n={k}"))?;
            n += 2;
        }
    }
    for m in 0..=2 {
        let odd = cf::prop22_z114_odd(m, &c).unwrap();
        close(&odd, &cf::prop22_z114(2 * m + 1, &c).unwrap(), 1e-20, &format!("odd branch m={m}"))?;
        let even = cf::prop22_z3112_even(m, &c).unwrap();
        close(&even, &cf::prop22_z3112(2 * m + 1, &c).unwrap(), 1e-20, &format!("even branch m={m}"))?;
        n += 2;
    }
    for s in (0..=5).step_by(2) {
        for i in 0..=s {
            let idx = cf::z113112_index(i, s - i);
            close(&cf::prop23(i, s - i, &c).unwrap(), &zh(&idx)?, 1e-20, &format!("({idx})"))?;
            n += 1;
        }
    }
    Ok(format!("{n} comparisons up to weight 10"))
}

fn c9() -> Outcome {
    let c = ctx(30);
    let ev = Evaluator::new(c);
    for k in 2..=6 {
        let t = ev.mtv(&Index::new(vec![2, k]).unwrap(), MtvRoute::Direct).map_err(|e| e.to_string())?;
        close(&cf::t_two_k(k, &c).unwrap(), &t, 1e-20, &format!("t(2,{k})"))?;
    }
    Ok("t(2,k), 2 <= k <= 6".into())
}

fn c10() -> Outcome {
    let c = ctx(30);
    let mut worst = 0.0f64;
    for (n, d) in [(1, 10), (1, 5), (3, 10)] {
        let r = check_4f3_identity(&BigReal::from_ratio(n, d, c.bits()), &c);
        strict(&r, 1e-20)?;
        worst = worst.max(r.residual);
    }
    let g = ctx(20);
    for kind in GsKind::ALL {
        for (n, d) in [(1, 10), (1, 5)] {
            let r = check_generating_series(kind, &BigReal::from_ratio(n, d, g.bits()), &g);
            strict(&r, 1e-15)?;
            worst = worst.max(r.residual);
        }
    }
    Ok(format!("3 identity points, 8 series points, worst residual {worst:.1e}"))
}

fn c11() -> Outcome {
    let v = Verifier::new(ctx(30));
    let mut n = 0;
    for idx in admissible_up_to(9) {
        if idx.reversed().is_admissible() {
            strict(&v.antipode(&idx), 1e-25)?;
            n += 1;
        }
    }
    Ok(format!("{n} indices"))
}

fn c12() -> Outcome {
    let start = Instant::now();
    let reports = verify_suite_with(&SuiteOptions::new(9, ctx(30)));
    let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
    ensure(failed.is_empty(), || format!("{} failures, first: {}", failed.len(), failed[0]))?;
    within_time(start, Duration::from_secs(900))?;
    Ok(format!("{} reports in {:.1?}", reports.len(), start.elapsed()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("block decomposition", c1),
        ("convolution at (2,3,4,5)", c2),
        ("convolution, descent, matrix up to weight 9", c3),
        ("single t-values", c4),
        ("ť(1,2)", c5),
        ("two-one", c6),
        ("generating-function coefficients", c7),
        ("zeta-half closed forms", c8),
        ("t(2,k)", c9),
        ("hypergeometric identities", c10),
        ("stuffle antipode", c11),
        ("full suite at weight 9", c12),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{t:.1?}]", i + 1),
            Err(why) => {
                all = false;
                println!("criterion {:>2} FAIL  {name}: {why} [{t:.1?}]", i + 1);
            }
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
