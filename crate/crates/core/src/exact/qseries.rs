use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{fmt_q, BigRational};
use crate::error::{Error, Result};

/// Power series in `q` truncated after `q^order`, exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<BigRational>,
}

impl QSeries {
    /// Builds a series from its coefficients `q^0 ..= q^N`.
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least the q^0 coefficient");
        QSeries { coeffs }
    }

    pub fn one(order: usize) -> Self {
        let mut c = vec![BigRational::zero(); order + 1];
        c[0] = BigRational::one();
        QSeries { coeffs: c }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    pub fn truncate(&self, order: usize) -> QSeries {
        assert!(order <= self.order());
        QSeries::new(self.coeffs[..=order].to_vec())
    }

    fn check_order(&self, other: &QSeries) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &QSeries) -> Result<QSeries> {
        self.check_order(other)?;
        let n = self.order();
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(QSeries { coeffs: out })
    }

    pub fn div(&self, other: &QSeries) -> Result<QSeries> {
        self.check_order(other)?;
        let b0 = &other.coeffs[0];
        if b0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv = b0.recip();
        let n = self.order();
        let mut out: Vec<BigRational> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                acc -= &other.coeffs[j] * &out[k - j];
            }
            out.push(acc * &inv);
        }
        Ok(QSeries { coeffs: out })
    }

    /// First index where the two series differ.
    pub fn first_difference(&self, other: &QSeries) -> Option<usize> {
        let n = self.order().min(other.order());
        (0..=n).find(|&k| self.coeffs[k] != other.coeffs[k])
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(fmt_q).collect()
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_strings().join(", "))
    }
}

impl Serialize for QSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        let coeffs = raw
            .iter()
            .map(|s| super::parse_q(s).ok_or_else(|| serde::de::Error::custom(format!("bad fraction {s}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if coeffs.is_empty() {
            return Err(serde::de::Error::custom("empty series"));
        }
        Ok(QSeries::new(coeffs))
    }
}

/// `Ξ(q)^{-x} = ∏_{n≥1} (1 - q^n)^{-x}` truncated at `q^order`.
///
/// Each factor is expanded with the generalized binomial series
/// `(1-u)^{-x} = Σ_k x(x+1)…(x+k-1)/k! · u^k`.
pub fn xi_pow(x: &BigRational, order: usize) -> QSeries {
    let mut acc = QSeries::one(order);
    if x.is_zero() {
        return acc;
    }
    for n in 1..=order {
        let mut factor = vec![BigRational::zero(); order + 1];
        let mut binom = BigRational::one();
        let mut k = 0usize;
        while k * n <= order {
            factor[k * n] = binom.clone();
            let kk = BigRational::from_integer((k as i64).into());
            binom = binom * (x + &kk) / (kk + BigRational::one());
            k += 1;
        }
        acc = acc
            .mul(&QSeries { coeffs: factor })
            .expect("orders agree by construction");
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qi};

    fn ints(v: &[i64]) -> QSeries {
        QSeries::new(v.iter().map(|&c| qi(c)).collect())
    }

    #[test]
    fn xi_pow_small_cases() {
        assert_eq!(xi_pow(&qi(0), 5), QSeries::one(5));
        assert_eq!(xi_pow(&qi(1), 4), ints(&[1, 1, 2, 3, 5]));
        assert_eq!(xi_pow(&qi(3), 3), ints(&[1, 3, 9, 22]));
        // Ξ itself: Euler's pentagonal series 1 - q - q^2 + q^5 + q^7
        assert_eq!(xi_pow(&qi(-1), 7), ints(&[1, -1, -1, 0, 0, 1, 0, 1]));
    }

    #[test]
    fn product_and_quotient() {
        let a = ints(&[1, 1, 0]);
        let b = ints(&[1, -1, 0]);
        assert_eq!(a.mul(&b).unwrap(), ints(&[1, 0, -1]));
        assert_eq!(a.div(&a).unwrap(), QSeries::one(2));
        let r = xi_pow(&qi(-3), 5).div(&xi_pow(&qi(-2), 5)).unwrap();
        assert_eq!(r, xi_pow(&qi(-1), 5));
        let r = xi_pow(&qi(3), 5).div(&xi_pow(&qi(2), 5)).unwrap();
        assert_eq!(r, xi_pow(&qi(1), 5));
    }

    #[test]
    fn errors() {
        assert_eq!(ints(&[1, 2]).div(&ints(&[0, 1])), Err(Error::DivisionByZero));
        assert_eq!(ints(&[1, 2]).mul(&ints(&[1])), Err(Error::OrderMismatch(1, 0)));
    }

    #[test]
    fn rational_exponent() {
        // (1-q)^{-1/2} (1-q^2)^{-1/2}: q^1 coefficient 1/2, q^2: 3/8 + 1/2
        let s = xi_pow(&q(1, 2), 2);
        assert_eq!(s.coeffs(), &[qi(1), q(1, 2), q(7, 8)]);
    }

    #[test]
    fn json_round_trip() {
        let s = xi_pow(&q(-5, 3), 4);
        let text = serde_json::to_string(&s).unwrap();
        let back: QSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
