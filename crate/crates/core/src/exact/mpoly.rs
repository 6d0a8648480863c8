use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{BigInt, BigRational};

/// Sparse multivariate polynomial over the rationals.
///
/// Terms map exponent vectors (length `nvars`) to nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

/// Graded lexicographic order with variable 0 largest.
pub fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        MPoly::constant(nvars, BigRational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MPoly::monomial(e, BigRational::one())
    }

    pub fn monomial(exps: Vec<u32>, c: BigRational) -> Self {
        let mut p = MPoly::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// `Σ coeffs[i]·x_i`.
    pub fn linear(nvars: usize, coeffs: &[BigRational]) -> Self {
        let mut p = MPoly::zero(nvars);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(
                {
                    let mut e = vec![0; nvars];
                    e[i] = 1;
                    e
                },
                c.clone(),
            );
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>) -> Self {
        let mut p = MPoly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&vec![0; self.nvars])
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, exps: &[u32]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Leading term under graded lex.
    pub fn leading(&self) -> Option<(&Vec<u32>, &BigRational)> {
        self.terms.iter().max_by(|a, b| grlex(a.0, b.0))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    fn shift(&self, v: usize, k: u32) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e[v] += k;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Coefficient of `x_v^k` as a polynomial (still in `nvars` variables,
    /// free of `x_v`).
    pub fn coeff_in(&self, v: usize, k: u32) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[v] == k)
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e[v] = 0;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    fn coeffs_in(&self, v: usize) -> Vec<MPoly> {
        let mut out: BTreeMap<u32, MPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[v] = 0;
            out.entry(e[v])
                .or_insert_with(|| MPoly::zero(self.nvars))
                .terms
                .insert(e2, c.clone());
        }
        out.into_values().collect()
    }

    fn main_var(&self) -> Option<usize> {
        (0..self.nvars).find(|&v| self.degree_in(v) > 0)
    }

    /// Substitutes `x_i ← images[i]`; the result lives in the images' ring.
    pub fn substitute(&self, images: &[MPoly]) -> MPoly {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut powers: Vec<Vec<MPoly>> = images.iter().map(|p| vec![MPoly::one(p.nvars)]).collect();
        let mut out = MPoly::zero(target);
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                if k > 0 {
                    term = &term * &powers[i][k as usize];
                }
            }
            out = &out + &term;
        }
        out
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut out = MPoly::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Exact division; `None` if `other` does not divide `self`.
    pub fn div_exact(&self, other: &MPoly) -> Option<MPoly> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MPoly::zero(self.nvars));
        }
        let Some(v) = other.main_var() else {
            let c = other.constant_term();
            return Some(self.scale(&c.recip()));
        };
        let db = other.degree_in(v);
        let lcb = other.coeff_in(v, db);
        let mut r = self.clone();
        let mut quot = MPoly::zero(self.nvars);
        while !r.is_zero() {
            let dr = r.degree_in(v);
            if dr < db {
                return None;
            }
            let lcr = r.coeff_in(v, dr);
            let t = lcr.div_exact(&lcb)?.shift(v, dr - db);
            r = &r - &(&t * other);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Pseudo-remainder of `self` by `b` with respect to `x_v`.
    fn pseudo_rem(&self, b: &MPoly, v: usize) -> MPoly {
        let db = b.degree_in(v);
        let lcb = b.coeff_in(v, db);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= db {
            let dr = r.degree_in(v);
            let lcr = r.coeff_in(v, dr);
            r = &(&r * &lcb) - &(&lcr * b).shift(v, dr - db);
        }
        r
    }

    fn content_in(&self, v: usize) -> MPoly {
        let mut g = MPoly::zero(self.nvars);
        for c in self.coeffs_in(v) {
            g = g.gcd(&c);
            if g.is_constant() && !g.is_zero() {
                return MPoly::one(self.nvars);
            }
        }
        g
    }

    /// Scales to leading coefficient one (graded lex); zero stays zero.
    pub fn monic(&self) -> MPoly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Greatest common divisor, normalized to be monic.
    ///
    /// Recursive primitive-PRS: contents and primitive parts with respect to
    /// the smallest variable present, recursing on the remaining variables.
    pub fn gcd(&self, other: &MPoly) -> MPoly {
        let n = self.nvars;
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return MPoly::one(n);
        }
        let v = (0..n)
            .find(|&v| self.degree_in(v) > 0 || other.degree_in(v) > 0)
            .expect("non-constant polynomial has a variable");
        if self.degree_in(v) == 0 {
            return self.gcd(&other.content_in(v));
        }
        if other.degree_in(v) == 0 {
            return other.gcd(&self.content_in(v));
        }
        let ca = self.content_in(v);
        let cb = other.content_in(v);
        let c = ca.gcd(&cb);
        let mut a = self.div_exact(&ca).expect("content divides").primitive_integer().0;
        let mut b = other.div_exact(&cb).expect("content divides").primitive_integer().0;
        if a.degree_in(v) < b.degree_in(v) {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            let r = a.pseudo_rem(&b, v);
            if r.is_zero() {
                break;
            }
            if r.degree_in(v) == 0 {
                b = MPoly::one(n);
                break;
            }
            a = b;
            let cr = r.content_in(v);
            b = r.div_exact(&cr).expect("content divides").primitive_integer().0;
        }
        let g = if b.degree_in(v) == 0 {
            MPoly::one(n)
        } else {
            let cbv = b.content_in(v);
            b.div_exact(&cbv).expect("content divides")
        };
        (&c * &g).monic()
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Gcd of the numerators (after clearing denominators is assumed).
    pub fn numerator_gcd(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
    }

    /// Rescales to integer coefficients with unit content and a positive
    /// leading coefficient; returns the scaling factor applied.
    pub fn primitive_integer(&self) -> (MPoly, BigRational) {
        if self.is_zero() {
            return (self.clone(), BigRational::one());
        }
        let l = self.denominator_lcm();
        let cleared = self.scale(&BigRational::from_integer(l.clone()));
        let g = cleared.numerator_gcd();
        let mut factor = BigRational::new(l, g);
        let mut p = self.scale(&factor);
        if p.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            p = -p;
            factor = -factor;
        }
        (p, factor)
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, o: &MPoly) -> MPoly {
        assert_eq!(self.nvars, o.nvars, "ring mismatch");
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, o: &MPoly) -> MPoly {
        assert_eq!(self.nvars, o.nvars, "ring mismatch");
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, o: &MPoly) -> MPoly {
        assert_eq!(self.nvars, o.nvars, "ring mismatch");
        let mut out = MPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| grlex(b.0, a.0));
        for (k, (e, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    if x == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, x)
                    }
                })
                .collect();
            let sign = if c.is_negative() { "-" } else { "+" };
            let abs = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mono.is_empty() {
                write!(f, "{}", super::fmt_q(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", super::fmt_q(&abs), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qi;

    fn t(i: usize) -> MPoly {
        MPoly::var(2, i)
    }

    #[test]
    fn gcd_of_products_of_linear_forms() {
        let a = &(&t(0) - &t(1)) * &(&t(0) + &t(1));
        let b = &(&t(0) - &t(1)) * &t(1);
        let g = a.gcd(&b);
        assert_eq!(g, (&t(0) - &t(1)).monic());
    }

    #[test]
    fn gcd_coprime_is_one() {
        let a = &t(0) + &MPoly::one(2);
        let b = &t(1) + &MPoly::constant(2, qi(2));
        assert_eq!(a.gcd(&b), MPoly::one(2));
    }

    #[test]
    fn gcd_with_content_in_second_variable() {
        // t2*(t1 + t2) and t2^2*(t1 - 2)
        let a = &t(1) * &(&t(0) + &t(1));
        let b = &(&t(1) * &t(1)) * &(&t(0) - &MPoly::constant(2, qi(2)));
        assert_eq!(a.gcd(&b), t(1));
    }

    #[test]
    fn exact_division() {
        let f = &(&t(0) + &t(1)) * &(&t(0) - &t(1));
        let q = f.div_exact(&(&t(0) - &t(1))).unwrap();
        assert_eq!(q, &t(0) + &t(1));
        assert!(f.div_exact(&(&t(0) + &MPoly::one(2))).is_none());
    }

    #[test]
    fn substitute_along_a_ray() {
        let z = MPoly::var(1, 0);
        let f = &t(0) * &t(1);
        let g = f.substitute(&[z.clone(), z.scale(&crate::exact::q(1, 2))]);
        assert_eq!(g, MPoly::monomial(vec![2], crate::exact::q(1, 2)));
    }

    #[test]
    fn primitive_integer_form() {
        let f = MPoly::linear(2, &[crate::exact::q(-2, 3), crate::exact::q(4, 9)]);
        let (p, _) = f.primitive_integer();
        assert_eq!(p, MPoly::linear(2, &[qi(3), qi(-2)]));
    }
}
