use std::fmt;

use num_traits::Zero;

use super::{BigRational, MPoly};
use crate::error::{Error, Result};
use crate::exact::fmt_q;

/// Quotient of polynomials in the torus parameters, kept in canonical form:
/// common factors cancelled, denominator an integer primitive polynomial with
/// positive graded-lex leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc { num, den }.normalized())
    }

    pub fn from_poly(p: MPoly) -> Self {
        let n = p.nvars();
        RatFunc {
            num: p,
            den: MPoly::one(n),
        }
        .normalized()
    }

    pub fn zero(nvars: usize) -> Self {
        RatFunc::from_poly(MPoly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        RatFunc::from_poly(MPoly::one(nvars))
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalized(self) -> Self {
        let n = self.num.nvars();
        if self.num.is_zero() {
            return RatFunc {
                num: MPoly::zero(n),
                den: MPoly::one(n),
            };
        }
        let g = self.num.gcd(&self.den);
        let num = self.num.div_exact(&g).expect("gcd divides numerator");
        let den = self.den.div_exact(&g).expect("gcd divides denominator");
        let (den, factor) = den.primitive_integer();
        RatFunc {
            num: num.scale(&factor),
            den,
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        RatFunc {
            num,
            den: &self.den * &other.den,
        }
        .normalized()
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: -self.num.clone(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
        }
        .normalized()
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc {
            num: &self.num * &other.den,
            den: &self.den * &other.num,
        }
        .normalized())
    }

    /// The value if this is a constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        (self.num.is_constant() && self.den.is_constant())
            .then(|| self.num.constant_term() / self.den.constant_term())
    }
}

/// Substitutes `t1 ← z`, `t2 ← ρ·z` in a function of the two torus
/// parameters, giving a rational function of `z` alone.
pub fn rf_specialize(x: &RatFunc, rho: &BigRational) -> Result<RatFunc> {
    assert_eq!(x.nvars(), 2, "rf_specialize expects a function of (t1, t2)");
    let z = MPoly::var(1, 0);
    let images = [z.clone(), z.scale(rho)];
    let den = x.den.substitute(&images);
    if den.is_zero() {
        return Err(Error::DegenerateDirection { rho: fmt_q(rho) });
    }
    RatFunc::new(x.num.substitute(&images), den)
}

/// Value at `z = 0` of a univariate rational function, after cancelling
/// common powers of `z`.
pub fn rf_value_at_zero(x: &RatFunc) -> Result<BigRational> {
    assert_eq!(x.nvars(), 1, "rf_value_at_zero expects a function of z");
    let d0 = x.den.constant_term();
    if d0.is_zero() {
        let order = x.den.terms().map(|(e, _)| e[0]).min().unwrap_or(0);
        return Err(Error::Pole { order });
    }
    Ok(x.num.constant_term() / d0)
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.constant_term() == BigRational::from_integer(1.into()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qi};

    fn t(i: usize) -> MPoly {
        MPoly::var(2, i)
    }

    fn rf(n: MPoly, d: MPoly) -> RatFunc {
        RatFunc::new(n, d).unwrap()
    }

    #[test]
    fn sum_by_cross_multiplication() {
        let x = rf(t(0), t(1));
        let y = rf(t(1), t(0));
        let s = x.add(&y);
        let expected = rf(&(&t(0) * &t(0)) + &(&t(1) * &t(1)), &t(0) * &t(1));
        assert_eq!(s, expected);
        assert_eq!(s.den(), &(&t(0) * &t(1)));
    }

    #[test]
    fn multiplicative_identity() {
        let x = rf(&t(0) + &t(1), &t(0) - &t(1));
        assert_eq!(x.mul(&RatFunc::one(2)), x);
    }

    #[test]
    fn common_factor_cancels() {
        let x = rf(&(&t(0) * &t(0)) - &(&t(1) * &t(1)), &t(0) - &t(1));
        assert_eq!(x, RatFunc::from_poly(&t(0) + &t(1)));
        assert!(x.den().is_constant());
    }

    #[test]
    fn x_minus_x_is_zero() {
        let x = rf(&t(0) * &t(1), &(&t(0) - &t(1)) * &t(1));
        assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(RatFunc::new(t(0), MPoly::zero(2)), Err(Error::DivisionByZero));
        assert!(RatFunc::one(2).div(&RatFunc::zero(2)).is_err());
    }

    #[test]
    fn specialization_examples() {
        let x = rf(&t(0) + &t(1), t(0));
        let s = rf_specialize(&x, &qi(2)).unwrap();
        assert_eq!(s.as_constant(), Some(qi(3)));

        let y = RatFunc::from_poly(&t(0) * &t(1));
        let s = rf_specialize(&y, &q(1, 2)).unwrap();
        assert_eq!(s, RatFunc::from_poly(MPoly::monomial(vec![2], q(1, 2))));

        let w = rf(&t(0) * &t(1), &t(0) - &t(1));
        assert!(matches!(
            rf_specialize(&w, &qi(1)),
            Err(Error::DegenerateDirection { .. })
        ));
    }

    #[test]
    fn value_at_zero_examples() {
        let z = MPoly::var(1, 0);
        let x = rf(&(&z * &z) + &z.scale(&qi(3)), z.clone());
        assert_eq!(rf_value_at_zero(&x), Ok(qi(3)));
        let y = rf(MPoly::one(1), z.clone());
        assert_eq!(rf_value_at_zero(&y), Err(Error::Pole { order: 1 }));
        let c = RatFunc::from_poly(MPoly::constant(1, qi(7)));
        assert_eq!(rf_value_at_zero(&c), Ok(qi(7)));
    }
}
