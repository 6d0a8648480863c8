use std::ops::{Add, Mul};

use num_traits::{One, Zero};

use super::BigRational;

/// Dense univariate polynomial in `z`, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UPoly(pub Vec<BigRational>);

impl UPoly {
    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn constant(c: BigRational) -> Self {
        UPoly(vec![c]).trimmed()
    }

    /// `c0 + c1·z`
    pub fn linear(c0: BigRational, c1: BigRational) -> Self {
        UPoly(vec![c0, c1]).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.0.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Multiplicity of the root at `z = 0`.
    pub fn valuation(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    /// Drops the first `k` coefficients (division by `z^k` when exact).
    pub fn shift_down(&self, k: usize) -> UPoly {
        UPoly(self.0.iter().skip(k).cloned().collect()).trimmed()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn mul_trunc(&self, other: &UPoly, len: usize) -> UPoly {
        let mut out = vec![BigRational::zero(); len.min(self.0.len() + other.0.len())];
        for (i, a) in self.0.iter().enumerate() {
            if i >= out.len() || a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                if i + j >= out.len() {
                    break;
                }
                out[i + j] += a * b;
            }
        }
        UPoly(out).trimmed()
    }

    /// Power series coefficients of `self / den` up to `z^(len-1)`;
    /// requires `den(0) != 0`.
    pub fn series_div(&self, den: &UPoly, len: usize) -> Vec<BigRational> {
        let d0 = den.coeff(0);
        assert!(!d0.is_zero(), "series division by a series with zero constant term");
        let inv = d0.recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = self.coeff(k);
            for j in 1..=k.min(den.0.len().saturating_sub(1)) {
                acc -= &den.0[j] * &out[k - j];
            }
            out.push(acc * &inv);
        }
        out
    }

    pub fn eval(&self, z: &BigRational) -> BigRational {
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * z + c)
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        UPoly((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect()).trimmed()
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        self.mul_trunc(o, self.0.len() + o.0.len())
    }
}

impl UPoly {
    pub fn one() -> Self {
        UPoly(vec![BigRational::one()])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qi};

    #[test]
    fn geometric_series() {
        // 1 / (1 - z) = 1 + z + z^2 + ...
        let s = UPoly::one().series_div(&UPoly::linear(qi(1), qi(-1)), 4);
        assert_eq!(s, vec![qi(1), qi(1), qi(1), qi(1)]);
        let s = UPoly::linear(qi(0), qi(1)).series_div(&UPoly::constant(qi(2)), 3);
        assert_eq!(s, vec![qi(0), q(1, 2), qi(0)]);
    }

    #[test]
    fn valuation_and_shift() {
        let p = UPoly(vec![qi(0), qi(0), qi(3), qi(1)]);
        assert_eq!(p.valuation(), Some(2));
        assert_eq!(p.shift_down(2), UPoly(vec![qi(3), qi(1)]));
        assert_eq!(UPoly::zero().valuation(), None);
    }
}
