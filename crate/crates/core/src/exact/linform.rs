use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{BigRational, MPoly};
use crate::exact::qi;

/// Integer linear form `a·t1 + b·t2` in the two torus parameters.
///
/// Characters of the torus, tangent weights and line-bundle fiber weights all
/// live here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LinForm {
    pub a: i64,
    pub b: i64,
}

impl LinForm {
    pub const ZERO: LinForm = LinForm { a: 0, b: 0 };
    pub const T1: LinForm = LinForm { a: 1, b: 0 };
    pub const T2: LinForm = LinForm { a: 0, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        LinForm { a, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Value at `(t1, t2)`.
    pub fn eval(&self, t1: &BigRational, t2: &BigRational) -> BigRational {
        qi(self.a) * t1 + qi(self.b) * t2
    }

    /// Linear independence over the rationals.
    pub fn independent(&self, other: &LinForm) -> bool {
        self.a * other.b - self.b * other.a != 0
    }

    pub fn to_mpoly(&self) -> MPoly {
        MPoly::linear(2, &[qi(self.a), qi(self.b)])
    }
}

impl Add for LinForm {
    type Output = LinForm;
    fn add(self, o: LinForm) -> LinForm {
        LinForm::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for LinForm {
    type Output = LinForm;
    fn sub(self, o: LinForm) -> LinForm {
        LinForm::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for LinForm {
    type Output = LinForm;
    fn neg(self) -> LinForm {
        LinForm::new(-self.a, -self.b)
    }
}

impl Mul<LinForm> for i64 {
    type Output = LinForm;
    fn mul(self, w: LinForm) -> LinForm {
        LinForm::new(self * w.a, self * w.b)
    }
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |c: i64, v: &str| match c {
            1 => v.to_string(),
            -1 => format!("-{v}"),
            c => format!("{c}{v}"),
        };
        match (self.a, self.b) {
            (0, 0) => write!(f, "0"),
            (a, 0) => write!(f, "{}", term(a, "t1")),
            (0, b) => write!(f, "{}", term(b, "t2")),
            (a, b) if b > 0 => write!(f, "{}+{}", term(a, "t1"), term(b, "t2")),
            (a, b) => write!(f, "{}{}", term(a, "t1"), term(b, "t2")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let w = LinForm::new(2, -1) + 3 * LinForm::T2;
        assert_eq!(w, LinForm::new(2, 2));
        assert_eq!((-w).to_string(), "-2t1-2t2");
        assert_eq!(LinForm::T1.to_string(), "t1");
        assert!(LinForm::ZERO.is_zero());
        assert!(LinForm::T1.independent(&LinForm::T2));
        assert!(!LinForm::new(2, 4).independent(&LinForm::new(1, 2)));
    }
}
