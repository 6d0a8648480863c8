//! Young diagrams and the torus weights at monomial-ideal fixed points.
//!
//! A partition `λ` of `n` indexes the monomial ideal spanned by the monomials
//! `x^i y^j` with `(i, j)` outside the diagram. Box `(i, j)` sits in row `i`
//! (counted downward, paired with the `x`-exponent and weight `w1`) and column
//! `j` (rightward, `y`-exponent, weight `w2`). Arms run along rows, legs along
//! columns.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::LinForm;

/// Weakly decreasing list of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Box {
    pub i: usize,
    pub j: usize,
}

/// Selects which diagram direction carries the arm when forming tangent
/// weights. `Standard` is the convention validated end to end; `Swapped`
/// exchanges the roles of arm and leg and exists for diagnosis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VertexConvention {
    #[default]
    Standard,
    Swapped,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Column lengths `λ'`.
    pub fn conjugate(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0);
        Partition {
            parts: (0..width)
                .map(|j| self.parts.iter().filter(|&&p| p > j).count())
                .collect(),
        }
    }

    pub fn contains(&self, b: Box) -> bool {
        self.parts.get(b.i).is_some_and(|&p| b.j < p)
    }

    /// Boxes in row-major order.
    pub fn boxes(&self) -> impl Iterator<Item = Box> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (0..p).map(move |j| Box { i, j }))
    }

    pub fn hook_lengths(&self) -> Vec<usize> {
        let conj = self.conjugate();
        self.boxes()
            .map(|b| (self.parts[b.i] - b.j - 1) + (conj.parts[b.j] - b.i - 1) + 1)
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// All partitions of `n`, lexicographically decreasing (`(n)` first).
pub fn enumerate_partitions(n: usize) -> Vec<Partition> {
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// `(arm, leg)` of a box: boxes strictly right of it in its row and strictly
/// below it in its column.
pub fn arm_leg(lambda: &Partition, b: Box) -> Result<(usize, usize)> {
    if !lambda.contains(b) {
        return Err(Error::BoxOutside { i: b.i, j: b.j });
    }
    let arm = lambda.parts[b.i] - b.j - 1;
    let leg = lambda.parts.iter().skip(b.i + 1).filter(|&&p| p > b.j).count();
    Ok((arm, leg))
}

/// Torus weights of the tangent space to the Hilbert scheme of the chart at
/// the monomial ideal `λ`: per box, `(leg+1)·w1 - arm·w2` and
/// `-leg·w1 + (arm+1)·w2`.
pub fn tangent_weights(lambda: &Partition, w1: LinForm, w2: LinForm) -> Result<Vec<LinForm>> {
    tangent_weights_with(lambda, w1, w2, VertexConvention::Standard)
}

pub fn tangent_weights_with(
    lambda: &Partition,
    w1: LinForm,
    w2: LinForm,
    convention: VertexConvention,
) -> Result<Vec<LinForm>> {
    let mut out = Vec::with_capacity(2 * lambda.size());
    for b in lambda.boxes() {
        let (arm, leg) = arm_leg(lambda, b)?;
        let (arm, leg) = match convention {
            VertexConvention::Standard => (arm as i64, leg as i64),
            VertexConvention::Swapped => (leg as i64, arm as i64),
        };
        let x = (leg + 1) * w1 - arm * w2;
        let y = (arm + 1) * w2 - leg * w1;
        if x.is_zero() || y.is_zero() {
            return Err(Error::ZeroWeight);
        }
        out.push(x);
        out.push(y);
    }
    Ok(out)
}

/// Tangent weights shifted by the fiber weight `nu` of the twisting bundle.
pub fn twisted_tangent_weights(
    lambda: &Partition,
    w1: LinForm,
    w2: LinForm,
    nu: LinForm,
) -> Result<Vec<LinForm>> {
    Ok(tangent_weights(lambda, w1, w2)?
        .into_iter()
        .map(|w| nu + w)
        .collect())
}

/// Weights of the fiber of the tautological bundle `M^{[n]}` at `λ`:
/// `nu - (i·w1 + j·w2)` for each box, i.e. the bundle weight times the
/// characters of the monomials `x^i y^j` spanning `O/I`.
pub fn taut_weights(lambda: &Partition, w1: LinForm, w2: LinForm, nu: LinForm) -> Vec<LinForm> {
    lambda
        .boxes()
        .map(|b| nu - (b.i as i64 * w1 + b.j as i64 * w2))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec())
    }

    /// Euler's pentagonal recurrence, independent of the enumerator.
    fn partition_count(n: usize) -> usize {
        let mut p = vec![0i64; n + 1];
        p[0] = 1;
        for m in 1..=n {
            let mut acc = 0i64;
            for k in 1.. {
                let g1 = k * (3 * k - 1) / 2;
                if g1 > m {
                    break;
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                acc += sign * p[m - g1];
                let g2 = k * (3 * k + 1) / 2;
                if g2 <= m {
                    acc += sign * p[m - g2];
                }
            }
            p[m] = acc;
        }
        p[n] as usize
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_partitions(0), vec![Partition::empty()]);
        assert_eq!(enumerate_partitions(4).len(), 5);
        assert_eq!(enumerate_partitions(10).len(), 42);
        for n in 0..=30 {
            assert_eq!(enumerate_partitions(n).len(), partition_count(n), "n = {n}");
        }
    }

    #[test]
    fn enumeration_is_sorted_and_unique() {
        let ps = enumerate_partitions(8);
        for w in ps.windows(2) {
            assert!(w[0] > w[1]);
        }
        assert!(ps.iter().all(|p| p.size() == 8));
    }

    #[test]
    fn arm_leg_examples() {
        assert_eq!(arm_leg(&p(&[2, 1]), Box { i: 0, j: 0 }), Ok((1, 1)));
        assert_eq!(arm_leg(&p(&[1]), Box { i: 0, j: 0 }), Ok((0, 0)));
        assert_eq!(arm_leg(&p(&[3, 1]), Box { i: 0, j: 1 }), Ok((1, 0)));
        assert_eq!(
            arm_leg(&p(&[3, 1]), Box { i: 1, j: 1 }),
            Err(Error::BoxOutside { i: 1, j: 1 })
        );
    }

    #[test]
    fn single_box_tangent_weights() {
        let (w1, w2) = (LinForm::T1, LinForm::T2);
        assert_eq!(tangent_weights(&p(&[1]), w1, w2).unwrap(), vec![w1, w2]);
    }

    #[test]
    fn two_boxes_in_a_row() {
        // ideal (x, y^2): deformations x - a - b y, y^2 - c - d y
        let (w1, w2) = (LinForm::T1, LinForm::T2);
        let mut got = tangent_weights(&p(&[2]), w1, w2).unwrap();
        got.sort();
        let mut want = vec![w1 - w2, 2 * w2, w1, w2];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn tangent_weights_are_self_dual() {
        let (w1, w2) = (LinForm::new(2, -1), LinForm::new(-1, 3));
        for n in 1..=6 {
            for lam in enumerate_partitions(n) {
                let mut ws = tangent_weights(&lam, w1, w2).unwrap();
                assert_eq!(ws.len(), 2 * n);
                let mut dual: Vec<_> = ws.iter().map(|&w| (w1 + w2) - w).collect();
                ws.sort();
                dual.sort();
                assert_eq!(ws, dual, "{lam}");
            }
        }
    }

    #[test]
    fn tangent_product_is_hook_square() {
        for n in 1..=7 {
            for lam in enumerate_partitions(n) {
                let ws = tangent_weights(&lam, LinForm::T1, LinForm::T2).unwrap();
                // t1 = 1, t2 = -1: each box contributes h and -h
                let prod: i64 = ws.iter().map(|w| w.a - w.b).product();
                let hooks: i64 = lam.hook_lengths().iter().map(|&h| h as i64).product();
                assert_eq!(prod.abs(), hooks * hooks, "{lam}");
            }
        }
    }

    #[test]
    fn twisted_and_tautological() {
        let (w1, w2) = (LinForm::T1, LinForm::T2);
        let nu = LinForm::new(3, 5);
        let lam = p(&[2, 1]);
        assert_eq!(
            twisted_tangent_weights(&lam, w1, w2, LinForm::ZERO).unwrap(),
            tangent_weights(&lam, w1, w2).unwrap()
        );
        assert_eq!(
            twisted_tangent_weights(&p(&[1]), w1, w2, nu).unwrap(),
            vec![nu + w1, nu + w2]
        );
        assert_eq!(taut_weights(&p(&[1]), w1, w2, nu), vec![nu]);
        assert_eq!(taut_weights(&lam, w1, w2, nu), vec![nu, nu - w2, nu - w1]);
    }

    #[test]
    fn taut_weight_sum_matches_diagram_sum() {
        let (w1, w2) = (LinForm::new(1, 2), LinForm::new(-3, 1));
        for lam in enumerate_partitions(6) {
            let s = taut_weights(&lam, w1, w2, LinForm::ZERO)
                .into_iter()
                .fold(LinForm::ZERO, |a, b| a + b);
            let mut direct = LinForm::ZERO;
            for (i, &row) in lam.parts().iter().enumerate() {
                for j in 0..row {
                    direct = direct - (i as i64 * w1 + j as i64 * w2);
                }
            }
            assert_eq!(s, direct);
        }
    }

    #[test]
    fn swapped_convention_is_transpose() {
        let (w1, w2) = (LinForm::T1, LinForm::T2);
        for lam in enumerate_partitions(5) {
            let mut a = tangent_weights_with(&lam, w1, w2, VertexConvention::Swapped).unwrap();
            let mut b: Vec<_> = tangent_weights(&lam.conjugate(), w1, w2).unwrap();
            a.sort();
            b.sort();
            assert_eq!(a, b, "{lam}");
        }
    }
}
