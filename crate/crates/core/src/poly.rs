//! Dense univariate polynomials with exact integer coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Result, ZetaError};

/// Coefficients in ascending powers of `u`, without trailing zeros.
/// The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `u^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn max_abs_coefficient(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn eval_int(&self, u: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * u + c)
    }

    /// Horner evaluation in double precision.
    pub fn eval(&self, u: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| {
            acc * u + c.to_f64().unwrap_or(f64::INFINITY)
        })
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::default();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    pub fn sub(&self, other: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPolynomial::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn pow(&self, e: u32) -> IntPolynomial {
        (0..e).fold(IntPolynomial::one(), |acc, _| acc.mul(self))
    }

    /// Exact quotient by a divisor whose constant coefficient is `1` or `-1`.
    ///
    /// Divides from the low-order end, so every step stays in the integers.
    /// Fails if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &IntPolynomial) -> Result<IntPolynomial> {
        let d0 = divisor.coeff(0);
        if !d0.abs().is_one() {
            return Err(ZetaError::input(
                "exact division needs a divisor with constant term +-1",
            ));
        }
        if self.is_zero() {
            return Ok(IntPolynomial::default());
        }
        let dd = divisor.degree().unwrap();
        let nd = self.degree().unwrap();
        if nd < dd {
            return Err(ZetaError::numeric("inexact polynomial division"));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for k in 0..quot.len() {
            let c = &rem[k] * &d0;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(ZetaError::numeric("inexact polynomial division"));
        }
        Ok(IntPolynomial::new(quot))
    }

    /// Long division over the rationals: `self = q * divisor + r` with
    /// `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &IntPolynomial) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
        let dd = divisor
            .degree()
            .ok_or_else(|| ZetaError::input("division by the zero polynomial"))?;
        let lead = BigRational::from_integer(divisor.leading_coefficient());
        let mut rem: Vec<BigRational> = self
            .coeffs
            .iter()
            .cloned()
            .map(BigRational::from_integer)
            .collect();
        if rem.len() <= dd {
            return Ok((Vec::new(), rem));
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * BigRational::from_integer(d.clone());
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        while rem.last().is_some_and(Zero::is_zero) {
            rem.pop();
        }
        Ok((quot, rem))
    }

    /// True iff `divisor` divides `self` in `Q[u]`.
    pub fn is_divisible_by(&self, divisor: &IntPolynomial) -> Result<bool> {
        Ok(self.div_rem(divisor)?.1.is_empty())
    }

    /// Taylor coefficients `c_1..c_terms` of `log p(u)` at `u = 0`.
    ///
    /// Requires `p(0) = 1`. Uses `(log p)' = p'/p`, where `1/p` has integer
    /// coefficients because the constant term is a unit.
    pub fn log_series(&self, terms: usize) -> Result<Vec<BigRational>> {
        if !self.coeff(0).is_one() {
            return Err(ZetaError::input("log series needs constant coefficient 1"));
        }
        // inv = 1/p mod u^terms
        let mut inv = vec![BigInt::zero(); terms];
        if terms > 0 {
            inv[0] = BigInt::one();
        }
        for n in 1..terms {
            let mut s = BigInt::zero();
            for k in 1..=n.min(self.coeffs.len().saturating_sub(1)) {
                s += &self.coeffs[k] * &inv[n - k];
            }
            inv[n] = -s;
        }
        let deriv: Vec<BigInt> = (1..self.coeffs.len())
            .map(|k| &self.coeffs[k] * BigInt::from(k))
            .collect();
        let mut out = Vec::with_capacity(terms);
        for m in 1..=terms {
            // coefficient of u^{m-1} in p' * inv
            let mut s = BigInt::zero();
            for (j, d) in deriv.iter().enumerate().take(m) {
                s += d * &inv[m - 1 - j];
            }
            out.push(BigRational::new(s, BigInt::from(m)));
        }
        Ok(out)
    }

    /// JSON integer array, ascending powers. Written by hand so that
    /// coefficients beyond 64 bits stay exact.
    pub fn to_json(&self) -> String {
        let body: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        format!("[{}]", body.join(","))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let t = text.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| ZetaError::input("polynomial JSON must be an integer array"))?;
        if inner.trim().is_empty() {
            return Ok(IntPolynomial::default());
        }
        let coeffs = inner
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<BigInt>()
                    .map_err(|e| ZetaError::input(format!("bad coefficient {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntPolynomial::new(coeffs))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ if a.is_one() => {}
                _ => write!(f, "{a}")?,
            }
            match k {
                0 => {}
                1 => write!(f, "u")?,
                _ => write!(f, "u^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn trims_and_displays() {
        let a = p(&[1, 0, -2, 0, 0]);
        assert_eq!(a.degree(), Some(2));
        assert_eq!(a.to_string(), "1 - 2u^2");
        assert_eq!(p(&[0, 0]).degree(), None);
    }

    #[test]
    fn exact_division() {
        let a = p(&[1, -1]);
        let b = p(&[1, 1, 1]);
        let prod = a.mul(&b);
        assert_eq!(prod, p(&[1, 0, 0, -1]));
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(p(&[1, 0, 1]).div_exact(&a).is_err());
        assert!(prod.is_divisible_by(&b).unwrap());
        assert!(!p(&[1, 0, 1]).is_divisible_by(&p(&[0, 2])).unwrap());
    }

    #[test]
    fn log_of_one_minus_u_cubed_squared() {
        let z = p(&[1, 0, 0, -1]).pow(2);
        let c = z.log_series(6).unwrap();
        let r = |n: i64| BigRational::from_integer(BigInt::from(n));
        assert_eq!(c, vec![r(0), r(0), r(-2), r(0), r(0), r(-1)]);
    }

    #[test]
    fn json_with_big_coefficients() {
        let big = "[1,-340282366920938463463374607431768211457,3]";
        let q = IntPolynomial::from_json(big).unwrap();
        assert_eq!(q.to_json(), big);
        assert!(IntPolynomial::from_json("{1}").is_err());
    }

    proptest! {
        #[test]
        fn product_divides_back(a in proptest::collection::vec(-20i64..20, 1..6),
                                b in proptest::collection::vec(-20i64..20, 1..6)) {
            let mut b = b;
            b[0] = 1;
            let pa = p(&a);
            let pb = p(&b);
            let prod = pa.mul(&pb);
            prop_assert_eq!(prod.div_exact(&pb).unwrap(), pa.clone());
            let (q, r) = prod.div_rem(&pb).unwrap();
            prop_assert!(r.is_empty());
            let back: Vec<BigRational> = pa.coeffs().iter().cloned().map(BigRational::from_integer).collect();
            prop_assert_eq!(q, back);
        }

        #[test]
        fn eval_matches_integer_eval(a in proptest::collection::vec(-50i64..50, 0..8), x in -5i64..5) {
            let pa = p(&a);
            let exact = pa.eval_int(&BigInt::from(x)).to_f64().unwrap();
            let approx = pa.eval(Complex64::new(x as f64, 0.0));
            prop_assert!((approx.re - exact).abs() < 1e-9 * exact.abs().max(1.0));
        }
    }
}
