use super::BigReal;
use crate::error::{Error, Result};

/// Truncated power series `c_0 + c_1 x + … + c_N x^N`.
#[derive(Clone, Debug)]
pub struct PowerSeries {
    coeffs: Vec<BigReal>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<BigReal>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Parameter("power series needs at least c_0".into()));
        }
        Ok(PowerSeries { coeffs })
    }

    pub fn zero(order: usize, p: usize) -> Self {
        PowerSeries {
            coeffs: vec![BigReal::zero(p); order + 1],
        }
    }

    pub fn one(order: usize, p: usize) -> Self {
        let mut s = PowerSeries::zero(order, p);
        s.coeffs[0] = BigReal::one(p);
        s
    }

    /// `x` truncated at `order`.
    pub fn variable(order: usize, p: usize) -> Self {
        let mut s = PowerSeries::zero(order, p);
        if order >= 1 {
            s.coeffs[1] = BigReal::one(p);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigReal] {
        &self.coeffs
    }

    fn prec(&self) -> usize {
        self.coeffs[0].prec()
    }

    pub fn coeff(&self, n: usize) -> Result<BigReal> {
        self.coeffs.get(n).cloned().ok_or_else(|| {
            Error::Parameter(format!(
                "coefficient {n} beyond truncation order {}",
                self.order()
            ))
        })
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.order().min(other.order());
        PowerSeries {
            coeffs: (0..=n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.order().min(other.order());
        PowerSeries {
            coeffs: (0..=n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect(),
        }
    }

    pub fn scale(&self, c: &BigReal) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.order().min(other.order());
        let p = self.prec().max(other.prec());
        let coeffs = (0..=n)
            .map(|k| {
                let mut acc = BigReal::zero(p);
                for i in 0..=k {
                    if self.coeffs[i].is_zero() && self.coeffs[i].error() == 0.0 {
                        continue;
                    }
                    acc = &acc + &(&self.coeffs[i] * &other.coeffs[k - i]);
                }
                acc
            })
            .collect();
        PowerSeries { coeffs }
    }

    /// `exp(f)` for `f(0) = 0`, from `n e_n = Σ k f_k e_{n-k}`.
    pub fn exp(&self) -> Result<PowerSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Parameter("series exp needs c_0 = 0".into()));
        }
        let n = self.order();
        let p = self.prec();
        let mut e = vec![BigReal::one(p)];
        for m in 1..=n {
            let mut acc = BigReal::zero(p);
            for k in 1..=m {
                if self.coeffs[k].is_zero() && self.coeffs[k].error() == 0.0 {
                    continue;
                }
                acc = &acc + &(&self.coeffs[k].mul_i64(k as i64) * &e[m - k]);
            }
            e.push(acc.div_i64(m as i64));
        }
        Ok(PowerSeries { coeffs: e })
    }

    /// `1/f` for `f(0) ≠ 0`.
    pub fn recip(&self) -> Result<PowerSeries> {
        if self.coeffs[0].mig() == 0.0 {
            return Err(Error::Parameter("series reciprocal needs c_0 != 0".into()));
        }
        let n = self.order();
        let inv0 = self.coeffs[0].recip();
        let mut h = vec![inv0.clone()];
        for m in 1..=n {
            let mut acc = BigReal::zero(self.prec());
            for k in 1..=m {
                acc = &acc + &(&self.coeffs[k] * &h[m - k]);
            }
            h.push(-(&acc * &inv0));
        }
        Ok(PowerSeries { coeffs: h })
    }

    /// `f(c x)`: coefficient `n` scaled by `c^n`.
    pub fn scale_arg(&self, c: &BigReal) -> PowerSeries {
        let mut pw = BigReal::one(self.prec());
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            coeffs.push(x * &pw);
            pw = &pw * c;
        }
        PowerSeries { coeffs }
    }

    /// Keeps coefficients `0..=order`.
    pub fn truncate(&self, order: usize) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }
}

pub fn ps_mul(a: &PowerSeries, b: &PowerSeries) -> PowerSeries {
    a.mul(b)
}

pub fn ps_exp(a: &PowerSeries) -> Result<PowerSeries> {
    a.exp()
}

pub fn ps_recip(a: &PowerSeries) -> Result<PowerSeries> {
    a.recip()
}

pub fn ps_scale_arg(a: &PowerSeries, c: &BigReal) -> PowerSeries {
    a.scale_arg(c)
}

pub fn ps_coeff(a: &PowerSeries, n: usize) -> Result<BigReal> {
    a.coeff(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: usize = 160;

    fn r(n: i64, d: i64) -> BigReal {
        BigReal::from_ratio(n, d, P)
    }

    fn assert_coeffs(s: &PowerSeries, want: &[BigReal]) {
        assert_eq!(s.order() + 1, want.len());
        for (a, b) in s.coeffs().iter().zip(want) {
            assert!(a.distance(b) <= a.error() + b.error() + 1e-45);
        }
    }

    #[test]
    fn exp_of_x() {
        let e = ps_exp(&PowerSeries::variable(3, P)).unwrap();
        assert_coeffs(&e, &[r(1, 1), r(1, 1), r(1, 2), r(1, 6)]);
        assert!(ps_exp(&PowerSeries::one(3, P)).is_err());
    }

    #[test]
    fn recip_geometric() {
        let s = PowerSeries::new(vec![r(1, 1), r(-1, 1), r(0, 1), r(0, 1)]).unwrap();
        assert_coeffs(&ps_recip(&s).unwrap(), &[r(1, 1), r(1, 1), r(1, 1), r(1, 1)]);
        assert!(ps_recip(&PowerSeries::variable(2, P)).is_err());
    }

    #[test]
    fn scale_arg_power() {
        let s = PowerSeries::new(vec![r(0, 1), r(0, 1), r(0, 1), r(0, 1), r(5, 1)]).unwrap();
        let t = ps_scale_arg(&s, &r(1, 2));
        assert!(ps_coeff(&t, 4).unwrap().distance(&r(5, 16)) < 1e-45);
        assert!(ps_coeff(&t, 5).is_err());
    }

    #[test]
    fn truncation_orders_propagate() {
        let a = PowerSeries::one(5, P);
        let b = PowerSeries::one(3, P);
        assert_eq!(ps_mul(&a, &b).order(), 3);
        assert_eq!(a.add(&b).order(), 3);
    }
}
