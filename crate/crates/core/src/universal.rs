//! Interpolation of intersection numbers by polynomials in the intrinsic
//! invariants of a surface (and of a divisor on it).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{fmt_q, grlex, parse_q, qi, BigInt, BigRational, MPoly, QSeries};
use crate::localize::{equivariant_invariants, series_with, AssignmentKind, LimitOptions};
use crate::toric::{intersection_numbers, line_bundle_total_space, EqLineBundle, SurfaceInvariants, ToricSurface};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    M2,
    MK,
    K2,
    E,
    C2,
    MC,
    EC,
}

impl Var {
    pub const ABSOLUTE: [Var; 4] = [Var::M2, Var::MK, Var::K2, Var::E];
    pub const NORMAL: [Var; 2] = [Var::C2, Var::MC];

    pub fn name(&self) -> &'static str {
        match self {
            Var::M2 => "M2",
            Var::MK => "MK",
            Var::K2 => "K2",
            Var::E => "e",
            Var::C2 => "C2",
            Var::MC => "MC",
            Var::EC => "eC",
        }
    }

    pub fn value(&self, inv: &SurfaceInvariants) -> Result<i64> {
        let missing = || Error::MissingVariable(self.name().into());
        Ok(match self {
            Var::M2 => inv.m2,
            Var::MK => inv.mk,
            Var::K2 => inv.k2,
            Var::E => inv.e,
            Var::C2 => inv.c2.ok_or_else(missing)?,
            Var::MC => inv.mc.ok_or_else(missing)?,
            Var::EC => inv.e_c.ok_or_else(missing)?,
        })
    }
}

/// Polynomial in a chosen list of invariants, total degree at most `degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalPoly {
    pub vars: Vec<Var>,
    pub degree: u32,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl UniversalPoly {
    pub fn new(vars: Vec<Var>, degree: u32, terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        UniversalPoly { vars, degree, terms }
    }

    pub fn zero(vars: Vec<Var>) -> Self {
        UniversalPoly::new(vars, 0, [])
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Largest total degree of a term.
    pub fn actual_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, inv: &SurfaceInvariants) -> Result<BigRational> {
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        let point: Vec<BigRational> = self.vars.iter().map(|v| v.value(inv).map(qi)).collect::<Result<_>>()?;
        Ok(eval_monomials(&self.terms, &point))
    }

    fn to_wire(&self) -> UniversalPolyWire {
        UniversalPolyWire {
            variables: self.vars.iter().map(|v| v.name().to_string()).collect(),
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| WireTerm {
                    exponents: e.clone(),
                    coeff: fmt_q(c),
                })
                .collect(),
        }
    }
}

fn eval_monomials(terms: &BTreeMap<Vec<u32>, BigRational>, point: &[BigRational]) -> BigRational {
    terms.iter().fold(BigRational::zero(), |acc, (e, c)| {
        let mut t = c.clone();
        for (x, &k) in point.iter().zip(e) {
            for _ in 0..k {
                t *= x;
            }
        }
        acc + t
    })
}

pub fn eval_universal(p: &UniversalPoly, inv: &SurfaceInvariants) -> Result<BigRational> {
    p.eval(inv)
}

impl fmt::Display for UniversalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // highest degree first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| grlex(b.0, a.0));
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = self
                .vars
                .iter()
                .zip(e)
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| if k == 1 { v.name().to_string() } else { format!("{}^{k}", v.name()) })
                .collect();
            let neg = c.is_negative();
            let abs = c.abs();
            let sign = match (i, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let body = match (mono.is_empty(), abs.is_one()) {
                (true, _) => fmt_q(&abs),
                (false, true) => mono.join("*"),
                (false, false) => format!("{}*{}", fmt_q(&abs), mono.join("*")),
            };
            write!(f, "{sign}{body}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct WireTerm {
    exponents: Vec<u32>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct UniversalPolyWire {
    variables: Vec<String>,
    degree: u32,
    terms: Vec<WireTerm>,
}

impl Serialize for UniversalPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_wire().serialize(s)
    }
}

impl<'de> Deserialize<'de> for UniversalPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = UniversalPolyWire::deserialize(d)?;
        let all = [Var::M2, Var::MK, Var::K2, Var::E, Var::C2, Var::MC, Var::EC];
        let vars = w
            .variables
            .iter()
            .map(|n| {
                all.iter()
                    .find(|v| v.name() == n)
                    .copied()
                    .ok_or_else(|| D::Error::custom(format!("unknown variable {n}")))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let mut terms = Vec::new();
        for t in w.terms {
            if t.exponents.len() != vars.len() {
                return Err(D::Error::custom("exponent vector length"));
            }
            let c = parse_q(&t.coeff).ok_or_else(|| D::Error::custom(format!("bad fraction {}", t.coeff)))?;
            terms.push((t.exponents, c));
        }
        Ok(UniversalPoly::new(vars, w.degree, terms))
    }
}

/// Exponent vectors of total degree `≤ deg`, lowest degree first.
pub fn monomials(nvars: usize, deg: u32) -> Vec<Vec<u32>> {
    fn rec(nvars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == nvars {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in (0..=left).rev() {
            cur.push(k);
            rec(nvars, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        out.push(Vec::new());
        return out;
    }
    for d in 0..=deg {
        rec(nvars, d, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub label: String,
    pub inv: SurfaceInvariants,
    pub value: BigRational,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SampleFamily {
    pub samples: Vec<Sample>,
}

impl SampleFamily {
    /// Adds a sample unless an identical invariant vector is already present;
    /// in that case the two values must agree.
    pub fn push(&mut self, s: Sample) -> Result<()> {
        if let Some((i, prev)) = self.samples.iter().enumerate().find(|(_, p)| p.inv == s.inv) {
            if prev.value != s.value {
                return Err(Error::Residual {
                    sample: i,
                    fitted: fmt_q(&prev.value),
                    computed: fmt_q(&s.value),
                });
            }
            return Ok(());
        }
        self.samples.push(s);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Fraction-free (Bareiss) elimination of `[A | b]` over the first `ncols`
/// columns. Returns the pivot columns and the reduced rows.
fn eliminate(rows: Vec<Vec<BigInt>>, ncols: usize) -> (Vec<usize>, Vec<Vec<BigInt>>) {
    let mut m = rows;
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            for j in (c + 1..m[i].len()).rev() {
                // Bareiss step: exact division by the previous pivot
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    (pivots, m)
}

fn row_to_integers(row: &[BigRational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
    row.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect()
}

/// Exact polynomial fit on the monomial basis of total degree `≤ degree`.
pub fn fit(vars: &[Var], degree: u32, family: &SampleFamily) -> Result<UniversalPoly> {
    let basis = monomials(vars.len(), degree);
    let points: Vec<Vec<BigRational>> = family
        .samples
        .iter()
        .map(|s| vars.iter().map(|v| v.value(&s.inv).map(qi)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<BigInt>> = points
        .iter()
        .zip(&family.samples)
        .map(|(p, s)| {
            let mut row: Vec<BigRational> = basis
                .iter()
                .map(|e| eval_monomials(&BTreeMap::from([(e.clone(), BigRational::one())]), p))
                .collect();
            row.push(s.value.clone());
            row_to_integers(&row)
        })
        .collect();
    let ncols = basis.len();
    let (pivots, m) = eliminate(rows, ncols);
    if pivots.len() < ncols {
        let monos = (0..ncols)
            .filter(|c| !pivots.contains(c))
            .map(|c| UniversalPoly::new(vars.to_vec(), degree, [(basis[c].clone(), BigRational::one())]).to_string())
            .collect();
        return Err(Error::RankDeficient { monomials: monos });
    }
    // back substitution on the square upper triangle
    let mut x = vec![BigRational::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate().rev() {
        let mut acc = BigRational::from_integer(m[r][ncols].clone());
        for j in c + 1..ncols {
            acc -= BigRational::from_integer(m[r][j].clone()) * &x[j];
        }
        x[c] = acc / BigRational::from_integer(m[r][c].clone());
    }
    let poly = UniversalPoly::new(vars.to_vec(), degree, basis.into_iter().zip(x));
    for (i, s) in family.samples.iter().enumerate() {
        let fitted = poly.eval(&s.inv)?;
        if fitted != s.value {
            return Err(Error::Residual {
                sample: i,
                fitted: fmt_q(&fitted),
                computed: fmt_q(&s.value),
            });
        }
    }
    Ok(poly)
}

/// Polynomial of degree `≤ n` in `M², M·K, K², e` reproducing the `q^n`
/// coefficient across the family.
pub fn fit_absolute(n: usize, family: &SampleFamily) -> Result<UniversalPoly> {
    fit(&Var::ABSOLUTE, n as u32, family)
}

/// Polynomial of degree `≤ n` in `C², M·C` for normal bundle total spaces of
/// rational curves.
pub fn fit_relative_normal(n: usize, family: &SampleFamily) -> Result<UniversalPoly> {
    fit(&Var::NORMAL, n as u32, family)
}

/// A library surface with a bundle.
#[derive(Debug, Clone)]
pub struct LibraryPair {
    pub label: String,
    pub surface: ToricSurface,
    pub bundle: EqLineBundle,
}

/// `P²` with `O(m)`, `m ∈ [-3, 3]`, and Hirzebruch surfaces `a ∈ [0, 3]`
/// with `x C_0 + y f`, `x, y ∈ [-2, 2]`.
pub fn absolute_library() -> Vec<LibraryPair> {
    let mut out = Vec::new();
    for m in -3..=3 {
        out.push(LibraryPair {
            label: format!("P2 O({m})"),
            surface: ToricSurface::projective_plane(),
            bundle: EqLineBundle::new(vec![m, 0, 0]),
        });
    }
    for a in 0..=3 {
        for x in -2..=2 {
            for y in -2..=2 {
                let mut c = vec![0; 4];
                c[ToricSurface::HIRZEBRUCH_C0] = x;
                c[ToricSurface::HIRZEBRUCH_FIBER] = y;
                out.push(LibraryPair {
                    label: format!("F{a} {x}C0+{y}f"),
                    surface: ToricSurface::hirzebruch(a),
                    bundle: EqLineBundle::new(c),
                });
            }
        }
    }
    out
}

fn coefficient_of_union(parts: &[&QSeries], n: usize) -> BigRational {
    let mut acc = QSeries::one(n);
    for p in parts {
        acc = acc.mul(&p.truncate(n)).expect("same order");
    }
    acc.coeff(n).clone()
}

fn sum_invariants(parts: &[&SurfaceInvariants]) -> SurfaceInvariants {
    parts
        .iter()
        .skip(1)
        .fold(*parts[0], |acc, x| acc.disjoint_union(x))
}

/// Samples for the `q^n` coefficient of `kind` on library surfaces and on
/// disjoint unions of up to `n + 1` of them. Connected smooth toric surfaces
/// all satisfy `K² + e = 12`, so unions are needed to separate that
/// direction.
pub fn absolute_family(kind: AssignmentKind, n: usize, opts: &LimitOptions) -> Result<SampleFamily> {
    let lib = absolute_library();
    let mut computed: Vec<(String, SurfaceInvariants, QSeries)> = Vec::with_capacity(lib.len());
    for p in &lib {
        let inv = intersection_numbers(&p.surface, &p.bundle, None)?;
        let z = series_with(kind, &p.surface, &p.bundle, n, opts)?;
        computed.push((p.label.clone(), inv, z));
    }
    let mut fam = SampleFamily::default();
    for (label, inv, z) in &computed {
        fam.push(Sample {
            label: label.clone(),
            inv: *inv,
            value: z.coeff(n).clone(),
        })?;
    }
    // unions with every split into P2 and Hirzebruch components, so that
    // (K², e) runs over all (9a + 8b, 3a + 4b) with a + b ≤ n + 1
    let p2: Vec<usize> = (0..lib.len()).filter(|&i| lib[i].surface.rays().len() == 3).collect();
    let hz: Vec<usize> = (0..lib.len()).filter(|&i| lib[i].surface.rays().len() == 4).collect();
    for k in 2..=n + 1 {
        for a in 0..=k {
            for v in 0..3 {
                let mut parts: Vec<usize> = (0..a).map(|j| p2[(3 * v + 2 * j) % p2.len()]).collect();
                parts.extend((0..k - a).map(|j| hz[(7 * v + 11 * j) % hz.len()]));
                push_union(&mut fam, &computed, &parts, n)?;
            }
        }
    }
    Ok(fam)
}

fn push_union(
    fam: &mut SampleFamily,
    computed: &[(String, SurfaceInvariants, QSeries)],
    parts: &[usize],
    n: usize,
) -> Result<()> {
    let invs: Vec<&SurfaceInvariants> = parts.iter().map(|&i| &computed[i].1).collect();
    let zs: Vec<&QSeries> = parts.iter().map(|&i| &computed[i].2).collect();
    let label = parts.iter().map(|&i| computed[i].0.as_str()).collect::<Vec<_>>().join(" + ");
    fam.push(Sample {
        label,
        inv: sum_invariants(&invs),
        value: coefficient_of_union(&zs, n),
    })
}

/// Residues on `Tot(O_{P^1}(a))` with the pulled-back `O(d)`, `a ∈ [-3, 3]`,
/// `d ∈ [0, 3]`.
pub fn relative_normal_family(kind: AssignmentKind, n: usize, opts: &LimitOptions) -> Result<SampleFamily> {
    let mut fam = SampleFamily::default();
    for a in -3..=3 {
        for d in 0..=3 {
            let (s, m) = line_bundle_total_space(a, d);
            let inv = equivariant_invariants(&s, &m, Some(crate::toric::TOTAL_SPACE_ZERO_SECTION))?;
            let z = series_with(kind, &s, &m, n, opts)?;
            fam.push(Sample {
                label: format!("Tot O({a}), d = {d}"),
                inv,
                value: z.coeff(n).clone(),
            })?;
        }
    }
    Ok(fam)
}

fn sigma(k: usize) -> i64 {
    (1..=k).filter(|d| k.is_multiple_of(*d)).map(|d| d as i64).sum()
}

/// Coefficient polynomials `a_0, …, a_n` of `Ξ^{-x} = Σ a_k(x) q^k` where `x`
/// is a polynomial, via `a_k = (x / k) Σ_{j=1}^k σ(j) a_{k-j}`.
pub fn xi_coefficient_polys(x: &MPoly, n: usize) -> Vec<MPoly> {
    let nv = x.nvars();
    let mut a = vec![MPoly::one(nv)];
    for k in 1..=n {
        let mut acc = MPoly::zero(nv);
        for j in 1..=k {
            acc = &acc + &a[k - j].scale(&qi(sigma(j)));
        }
        a.push((x * &acc).scale(&BigRational::new(BigInt::one(), BigInt::from(k))));
    }
    a
}

/// The `q^n` coefficient of `Ξ^{-(e - M·K + M²)}` as a polynomial in the
/// absolute invariants.
pub fn xi_delta_coefficient(n: usize) -> UniversalPoly {
    let vars = Var::ABSOLUTE;
    // e - MK + M2 in the order (M2, MK, K2, e)
    let x = MPoly::linear(4, &[qi(1), qi(-1), qi(0), qi(1)]);
    let p = xi_coefficient_polys(&x, n).swap_remove(n);
    UniversalPoly::new(vars.to_vec(), n as u32, p.terms().map(|(e, c)| (e.clone(), c.clone())))
}

/// The `q^n` coefficient of `Ξ^{-(e(C) + M·C)}` at `e(C) = 2` in `(C², M·C)`.
pub fn xi_normal_coefficient(n: usize) -> UniversalPoly {
    let x = &MPoly::linear(2, &[qi(0), qi(1)]) + &MPoly::constant(2, qi(2));
    let p = xi_coefficient_polys(&x, n).swap_remove(n);
    UniversalPoly::new(Var::NORMAL.to_vec(), n as u32, p.terms().map(|(e, c)| (e.clone(), c.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, xi_pow};

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(4, 0), vec![vec![0, 0, 0, 0]]);
        assert_eq!(monomials(4, 1).len(), 5);
        assert_eq!(monomials(4, 3).len(), 35);
        assert_eq!(monomials(2, 3).len(), 10);
        let m = monomials(2, 2);
        assert_eq!(m[0], vec![0, 0]);
        assert!(m.windows(2).all(|w| w[0].iter().sum::<u32>() <= w[1].iter().sum::<u32>()));
    }

    #[test]
    fn evaluation() {
        let inv = SurfaceInvariants::absolute(4, -6, 9, 3);
        assert_eq!(UniversalPoly::zero(Var::ABSOLUTE.to_vec()).eval(&inv), Ok(qi(0)));
        let m2 = UniversalPoly::new(Var::ABSOLUTE.to_vec(), 1, [(vec![1, 0, 0, 0], qi(1))]);
        assert_eq!(m2.eval(&inv), Ok(qi(4)));
        let rel = UniversalPoly::new(Var::NORMAL.to_vec(), 1, [(vec![1, 0], qi(1))]);
        assert_eq!(rel.eval(&inv), Err(Error::MissingVariable("C2".into())));
    }

    #[test]
    fn exact_fit_recovers_known_polynomial() {
        // samples of 3 - x y + x^2 / 2 on a grid
        let truth = UniversalPoly::new(
            Var::NORMAL.to_vec(),
            2,
            [(vec![0, 0], qi(3)), (vec![1, 1], qi(-1)), (vec![2, 0], q(1, 2))],
        );
        let mut fam = SampleFamily::default();
        for x in 0..3 {
            for y in 0..3 {
                let inv = SurfaceInvariants::absolute(0, 0, 0, 0).with_divisor(x, y, 2);
                fam.push(Sample {
                    label: String::new(),
                    value: truth.eval(&inv).unwrap(),
                    inv,
                })
                .unwrap();
            }
        }
        assert_eq!(fit(&Var::NORMAL, 2, &fam).unwrap(), truth);
        // too few distinct points for degree 3 in x
        assert!(matches!(fit(&Var::NORMAL, 3, &fam), Err(Error::RankDeficient { .. })));
        // inconsistent data
        fam.samples[4].value += qi(1);
        assert!(matches!(fit(&Var::NORMAL, 2, &fam), Err(Error::Residual { .. })));
    }

    #[test]
    fn duplicate_invariants_must_agree() {
        let inv = SurfaceInvariants::absolute(1, 2, 3, 4);
        let mut fam = SampleFamily::default();
        let s = |v| Sample {
            label: String::new(),
            inv,
            value: qi(v),
        };
        fam.push(s(1)).unwrap();
        fam.push(s(1)).unwrap();
        assert_eq!(fam.len(), 1);
        assert!(fam.push(s(2)).is_err());
    }

    #[test]
    fn xi_coefficients_match_series() {
        let x = MPoly::var(1, 0);
        let polys = xi_coefficient_polys(&x, 5);
        for v in -3..=4 {
            let s = xi_pow(&qi(v), 5);
            for (k, p) in polys.iter().enumerate() {
                assert_eq!(&p.eval(&[qi(v)]), s.coeff(k), "x = {v}, k = {k}");
            }
        }
    }

    #[test]
    fn display_and_json() {
        let p = UniversalPoly::new(
            Var::NORMAL.to_vec(),
            3,
            [(vec![0, 1], qi(-192)), (vec![1, 0], qi(56)), (vec![0, 0], qi(144))],
        );
        assert_eq!(p.to_string(), "56*C2 - 192*MC + 144");
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.contains("\"-192\""));
        let back: UniversalPoly = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(
            xi_normal_coefficient(1).to_string(),
            "MC + 2",
        );
    }
}
