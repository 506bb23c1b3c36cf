use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
#[cfg(test)]
use num_traits::Zero;

fn table() -> &'static Mutex<Vec<BigRational>> {
    static TABLE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(Vec::new()))
}

/// `B_0..=B_n` by the Akiyama–Tanigawa transform.
fn akiyama_tanigawa(n: usize) -> Vec<BigRational> {
    let mut a: Vec<BigRational> = Vec::with_capacity(n + 1);
    let mut out = Vec::with_capacity(n + 1);
    for m in 0..=n {
        a.push(BigRational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            let diff = &a[j - 1] - &a[j];
            a[j - 1] = diff * BigInt::from(j);
        }
        out.push(a[0].clone());
    }
    if n >= 1 {
        out[1] = -out[1].clone();
    }
    out
}

/// Exact `B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> BigRational {
    let mut t = table().lock().expect("bernoulli table");
    if t.len() <= n {
        let want = (n + 1).max(2 * t.len()).max(32);
        *t = akiyama_tanigawa(want);
    }
    t[n].clone()
}

/// `B_0..=B_n` in one go.
pub fn bernoulli_upto(n: usize) -> Vec<BigRational> {
    bernoulli(n);
    let t = table().lock().expect("bernoulli table");
    t[..=n].to_vec()
}
