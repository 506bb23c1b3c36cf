//! Real elementary functions with propagated error bounds.

use super::real::{with_consts, BigReal, RM};
use crate::error::{Error, Result};

impl BigReal {
    pub fn exp(&self) -> BigReal {
        let p = self.prec();
        let v = with_consts(|cc| self.value().exp(p, RM, cc));
        let r = BigReal::from_parts(v, 0.0, p);
        let prop = r.abs_f64() * self.error().exp_m1();
        BigReal::rounded(r.value().clone(), 2.0 * r.abs_f64() * 2f64.powi(1 - p as i32) + prop, p)
    }

    pub fn ln(&self) -> Result<BigReal> {
        let p = self.prec();
        if self.is_negative() || self.is_zero() {
            return Err(Error::Domain("log of a non-positive real".into()));
        }
        let lo = self.mig();
        if lo == 0.0 {
            return Err(Error::Domain("log argument interval contains zero".into()));
        }
        let v = with_consts(|cc| self.value().ln(p, RM, cc));
        let r = BigReal::from_parts(v, 0.0, p);
        let prop = self.error() / lo;
        let extra = 2.0 * r.abs_f64() * 2f64.powi(1 - p as i32);
        Ok(BigReal::rounded(r.value().clone(), prop + extra, p))
    }

    pub fn sqrt(&self) -> Result<BigReal> {
        let p = self.prec();
        if self.is_negative() {
            return Err(Error::Domain("sqrt of a negative real".into()));
        }
        if self.is_zero() {
            return Ok(BigReal::zero(p).with_error(self.error().sqrt()));
        }
        let v = self.value().sqrt(p, RM);
        let r = BigReal::from_parts(v, 0.0, p);
        let root = r.to_f64().abs() * (1.0 - 1e-15);
        let prop = if root > 0.0 {
            (self.error() / root).min(self.error().sqrt())
        } else {
            self.error().sqrt()
        };
        Ok(BigReal::rounded(r.value().clone(), prop, p))
    }

    fn lipschitz(&self, v: astro_float::BigFloat, lip: f64) -> BigReal {
        let p = self.prec();
        let r = BigReal::from_parts(v, 0.0, p);
        let extra = 2.0 * r.abs_f64() * 2f64.powi(1 - p as i32) + 2f64.powi(1 - p as i32);
        BigReal::rounded(r.value().clone(), lip * self.error() + extra, p)
    }

    pub fn sin(&self) -> BigReal {
        let v = with_consts(|cc| self.value().sin(self.prec(), RM, cc));
        self.lipschitz(v, 1.0)
    }

    pub fn cos(&self) -> BigReal {
        let v = with_consts(|cc| self.value().cos(self.prec(), RM, cc));
        self.lipschitz(v, 1.0)
    }

    pub fn atan(&self) -> BigReal {
        let v = with_consts(|cc| self.value().atan(self.prec(), RM, cc));
        self.lipschitz(v, 1.0)
    }

    pub fn sinh(&self) -> BigReal {
        let v = with_consts(|cc| self.value().sinh(self.prec(), RM, cc));
        let lip = (self.to_f64().abs() + self.error()).cosh();
        self.lipschitz(v, lip)
    }

    pub fn cosh(&self) -> BigReal {
        let v = with_consts(|cc| self.value().cosh(self.prec(), RM, cc));
        let lip = (self.to_f64().abs() + self.error()).sinh().max(1.0);
        self.lipschitz(v, lip)
    }

    /// `x^y = exp(y ln x)` for positive `x`.
    pub fn pow(&self, y: &BigReal) -> Result<BigReal> {
        Ok((y * &self.ln()?).exp())
    }
}
