//! Fixed-point sums over Hilbert schemes of points on toric surfaces.
//!
//! Every fixed point contributes a ratio of products of linear forms in the
//! torus parameters. The non-equivariant limit substitutes
//! `(t1, t2) ← base + z·(1, ρ)`, sums the Laurent expansions in `z` and reads
//! off the `z^0` coefficient; negative powers surviving the sum are a pole.
//! Complete surfaces use `base = 0`. On a line-bundle total space `base` is
//! the fiberwise one-parameter subgroup, which computes the residue with
//! respect to that action.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{fmt_q, q, qi, BigRational, LinForm, MPoly, RatFunc, UPoly};
use crate::partition::{enumerate_partitions, taut_weights, tangent_weights_with, Partition, VertexConvention};
use crate::toric::{bundle_weights, EqLineBundle, SurfaceInvariants, ToricSurface};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AssignmentKind {
    /// Twisted tangent bundle `T^[n](M)`.
    T,
    /// Negative tautological bundle `-M^[n]`; its Euler class is the top Segre class.
    Seg,
    /// `M^[n] ⊕ M^[n]`.
    L,
}

impl AssignmentKind {
    pub const ALL: [AssignmentKind; 3] = [AssignmentKind::T, AssignmentKind::Seg, AssignmentKind::L];
}

impl fmt::Display for AssignmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AssignmentKind::T => "T",
            AssignmentKind::Seg => "Seg",
            AssignmentKind::L => "L",
        })
    }
}

impl FromStr for AssignmentKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t" | "tangent" => Ok(AssignmentKind::T),
            "seg" | "segre" => Ok(AssignmentKind::Seg),
            "l" => Ok(AssignmentKind::L),
            _ => Err(Error::Parse(format!("unknown assignment kind {s:?}"))),
        }
    }
}

/// One partition per chart.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FixedPointTuple {
    pub partitions: Vec<Partition>,
}

impl FixedPointTuple {
    pub fn size(&self) -> usize {
        self.partitions.iter().map(Partition::size).sum()
    }
}

/// All tuples of `charts` partitions with total size `n`.
pub fn fixed_point_tuples(charts: usize, n: usize) -> Vec<FixedPointTuple> {
    fn rec(charts: usize, rem: usize, cur: &mut Vec<Partition>, out: &mut Vec<FixedPointTuple>) {
        if cur.len() + 1 == charts {
            for p in enumerate_partitions(rem) {
                let mut parts = cur.clone();
                parts.push(p);
                out.push(FixedPointTuple { partitions: parts });
            }
            return;
        }
        for k in (0..=rem).rev() {
            for p in enumerate_partitions(k) {
                cur.push(p);
                rec(charts, rem - k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if charts == 0 {
        if n == 0 {
            out.push(FixedPointTuple { partitions: vec![] });
        }
        return out;
    }
    rec(charts, n, &mut Vec::new(), &mut out);
    out
}

/// `coeff · ∏ num / ∏ den`, times `h_deg(sym)` when `sym` is present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: i64,
    pub num: Vec<LinForm>,
    pub den: Vec<LinForm>,
    /// Arguments of a complete homogeneous symmetric polynomial factor and
    /// its degree.
    pub sym: Option<(Vec<LinForm>, usize)>,
}

impl Term {
    pub fn ratio(num: Vec<LinForm>, den: Vec<LinForm>) -> Self {
        let mut t = Term {
            coeff: 1,
            num,
            den,
            sym: None,
        };
        t.cancel();
        t
    }

    /// Removes linear forms common to numerator and denominator.
    fn cancel(&mut self) {
        self.num.sort_unstable();
        self.den.sort_unstable();
        let (mut i, mut j) = (0, 0);
        let (mut num, mut den) = (Vec::new(), Vec::new());
        while i < self.num.len() && j < self.den.len() {
            match self.num[i].cmp(&self.den[j]) {
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
                std::cmp::Ordering::Less => {
                    num.push(self.num[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    den.push(self.den[j]);
                    j += 1;
                }
            }
        }
        num.extend_from_slice(&self.num[i..]);
        den.extend_from_slice(&self.den[j..]);
        self.num = num;
        self.den = den;
    }

    /// Expanded form in `(t1, t2)`.
    pub fn to_ratfunc(&self) -> Result<RatFunc> {
        let mut num = MPoly::constant(2, qi(self.coeff));
        for w in &self.num {
            num = &num * &w.to_mpoly();
        }
        if let Some((args, deg)) = &self.sym {
            let vars: Vec<MPoly> = args.iter().map(LinForm::to_mpoly).collect();
            num = &num * &complete_homogeneous(&vars, *deg, MPoly::one(2), MPoly::zero(2), |a, b| a * b, |a, b| a + b);
        }
        let mut den = MPoly::one(2);
        for w in &self.den {
            den = &den * &w.to_mpoly();
        }
        RatFunc::new(num, den)
    }
}

/// `h_deg(x_1, …, x_k)` over any ring, via `h_d(x_1..x_j) = h_d(x_1..x_{j-1}) + x_j·h_{d-1}(x_1..x_j)`.
fn complete_homogeneous<R: Clone>(
    vars: &[R],
    deg: usize,
    one: R,
    zero: R,
    mul: impl Fn(&R, &R) -> R,
    add: impl Fn(&R, &R) -> R,
) -> R {
    let mut h = vec![zero; deg + 1];
    h[0] = one;
    for x in vars {
        for d in 1..=deg {
            h[d] = add(&h[d], &mul(x, &h[d - 1]));
        }
    }
    h.swap_remove(deg)
}

/// Fixed-point term of `kind` at `tuple`, with bundle weights already resolved
/// per chart.
pub fn tuple_term(
    kind: AssignmentKind,
    tuple: &FixedPointTuple,
    s: &ToricSurface,
    weights: &[LinForm],
    convention: VertexConvention,
) -> Result<Term> {
    let mut num = Vec::new();
    let mut den = Vec::new();
    let mut taut = Vec::new();
    for ((chart, lambda), &nu) in s.charts().iter().zip(&tuple.partitions).zip(weights) {
        let tw = tangent_weights_with(lambda, chart.w1, chart.w2, convention)?;
        match kind {
            AssignmentKind::T => num.extend(tw.iter().map(|&w| nu + w)),
            AssignmentKind::L => {
                for t in taut_weights(lambda, chart.w1, chart.w2, nu) {
                    num.push(t);
                    num.push(t);
                }
            }
            AssignmentKind::Seg => taut.extend(taut_weights(lambda, chart.w1, chart.w2, nu)),
        }
        den.extend(tw);
    }
    let mut t = Term::ratio(num, den);
    if kind == AssignmentKind::Seg {
        let deg = 2 * taut.len();
        t.sym = Some((taut, deg));
    }
    Ok(t)
}

/// The equivariant contribution of one fixed point as a rational function.
pub fn contribution(
    kind: AssignmentKind,
    tuple: &FixedPointTuple,
    s: &ToricSurface,
    m: &EqLineBundle,
) -> Result<RatFunc> {
    check_tuple(s, tuple)?;
    let weights = bundle_weights(s, m)?;
    tuple_term(kind, tuple, s, &weights, VertexConvention::Standard)?.to_ratfunc()
}

fn check_tuple(s: &ToricSurface, tuple: &FixedPointTuple) -> Result<()> {
    if tuple.partitions.len() != s.charts().len() {
        return Err(Error::Geometry(format!(
            "tuple has {} partitions for {} charts",
            tuple.partitions.len(),
            s.charts().len()
        )));
    }
    Ok(())
}

/// Slopes tried, in order, for the limiting direction `(1, ρ)`.
pub fn default_directions() -> Vec<BigRational> {
    [(2, 1), (3, 2), (5, 3), (7, 2), (11, 4), (13, 5), (17, 7), (19, 3), (23, 9), (29, 11)]
        .iter()
        .map(|&(n, d)| q(n, d))
        .collect()
}

#[derive(Debug, Clone)]
pub struct LimitOptions {
    pub directions: Vec<BigRational>,
    /// `None` uses the ambient thread pool.
    pub workers: Option<usize>,
    /// Report a pole as a value instead of an error.
    pub expect_pole: bool,
    pub convention: VertexConvention,
}

impl Default for LimitOptions {
    fn default() -> Self {
        LimitOptions {
            directions: default_directions(),
            workers: None,
            expect_pole: false,
            convention: VertexConvention::Standard,
        }
    }
}

impl LimitOptions {
    pub fn workers(mut self, w: usize) -> Self {
        self.workers = Some(w.max(1));
        self
    }

    pub fn directions(mut self, d: Vec<BigRational>) -> Self {
        self.directions = d;
        self
    }
}

/// Result of a limit computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Limit {
    Value(BigRational),
    /// Surviving principal part, coefficient of `z^-1` first.
    Pole { order: u32, principal: Vec<BigRational> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitReport {
    pub limit: Limit,
    /// Slopes whose results were compared.
    pub used: Vec<BigRational>,
    /// Slopes rejected because a denominator vanished on them.
    pub degenerate: Vec<BigRational>,
}

fn image(w: &LinForm, base: [i64; 2], rho: &BigRational) -> (i64, BigRational) {
    (w.a * base[0] + w.b * base[1], qi(w.a) + qi(w.b) * rho)
}

/// Laurent coefficients of one term along a direction: pole order and
/// coefficients of `z^-k, …, z^extra`.
fn term_laurent(
    t: &Term,
    base: [i64; 2],
    rho: &BigRational,
    extra: usize,
) -> Result<(usize, Vec<BigRational>)> {
    let mut k = 0usize;
    let mut den_const = BigRational::one();
    let mut den_lin: Vec<UPoly> = Vec::new();
    for w in &t.den {
        let (a, b) = image(w, base, rho);
        match (a == 0, b.is_zero()) {
            (true, true) => return Err(Error::DegenerateDirection { rho: fmt_q(rho) }),
            (true, false) => {
                k += 1;
                den_const *= b;
            }
            _ => den_lin.push(UPoly::linear(qi(a), b)),
        }
    }
    let len = k + 1 + extra;
    let mut den = UPoly::constant(den_const);
    for p in &den_lin {
        den = den.mul_trunc(p, len);
    }
    let mut num = UPoly::constant(qi(t.coeff));
    for w in &t.num {
        let (a, b) = image(w, base, rho);
        num = num.mul_trunc(&UPoly::linear(qi(a), b), len);
    }
    if let Some((args, deg)) = &t.sym {
        let vars: Vec<UPoly> = args
            .iter()
            .map(|w| {
                let (a, b) = image(w, base, rho);
                UPoly::linear(qi(a), b)
            })
            .collect();
        let h = complete_homogeneous(&vars, *deg, UPoly::one(), UPoly::zero(), |x, y| x.mul_trunc(y, len), |x, y| x + y);
        num = num.mul_trunc(&h, len);
    }
    Ok((k, num.series_div(&den, len)))
}

fn add_vecs(a: Vec<BigRational>, b: Vec<BigRational>) -> Vec<BigRational> {
    let (mut long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    for (x, y) in long.iter_mut().zip(short) {
        *x += y;
    }
    long
}

/// Pairwise sum in a fixed balanced tree.
fn tree_sum(mut items: Vec<Vec<BigRational>>) -> Vec<BigRational> {
    if items.is_empty() {
        return Vec::new();
    }
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len().div_ceil(2));
        let mut it = items.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => add_vecs(a, b),
                None => a,
            });
        }
        items = next;
    }
    items.pop().unwrap()
}

fn map_terms<T, F>(items: &[Term], workers: Option<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&Term) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        match workers {
            Some(1) => items.iter().map(f).collect(),
            Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
                Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
                Err(_) => items.iter().map(f).collect(),
            },
            None => items.par_iter().map(f).collect(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        items.iter().map(f).collect()
    }
}

/// Limit of `Σ terms` along one direction.
fn limit_along(
    terms: &[Term],
    base: [i64; 2],
    rho: &BigRational,
    workers: Option<usize>,
    check_constant: bool,
) -> Result<Limit> {
    let extra = usize::from(check_constant);
    let parts = map_terms(terms, workers, |t| term_laurent(t, base, rho, extra));
    let parts: Vec<(usize, Vec<BigRational>)> = parts.into_iter().collect::<Result<_>>()?;
    let kmax = parts.iter().map(|p| p.0).max().unwrap_or(0);
    let aligned: Vec<Vec<BigRational>> = parts
        .into_iter()
        .map(|(k, c)| {
            let mut v = vec![BigRational::zero(); kmax - k];
            v.extend(c);
            v
        })
        .collect();
    let mut total = tree_sum(aligned);
    total.resize(kmax + 1 + extra, BigRational::zero());
    if let Some(first) = total[..kmax].iter().position(|c| !c.is_zero()) {
        let order = (kmax - first) as u32;
        let principal = total[first..kmax].iter().rev().cloned().collect();
        return Ok(Limit::Pole { order, principal });
    }
    if check_constant && !total[kmax + 1].is_zero() {
        return Err(Error::Geometry(
            "limit of a degree-zero class is not constant along the direction".into(),
        ));
    }
    Ok(Limit::Value(total[kmax].clone()))
}

/// Non-equivariant limit of a sum of terms, compared along two directions.
pub fn limit_of_terms(
    terms: &[Term],
    base: [i64; 2],
    check_constant: bool,
    opts: &LimitOptions,
) -> Result<LimitReport> {
    let mut used: Vec<BigRational> = Vec::new();
    let mut degenerate = Vec::new();
    let mut first: Option<Limit> = None;
    for rho in &opts.directions {
        match limit_along(terms, base, rho, opts.workers, check_constant) {
            Err(Error::DegenerateDirection { .. }) => degenerate.push(rho.clone()),
            Err(e) => return Err(e),
            Ok(lim) => {
                used.push(rho.clone());
                match first.take() {
                    None => first = Some(lim),
                    Some(prev) => {
                        if prev != lim {
                            return Err(Error::DirectionDisagreement {
                                first: describe(&prev),
                                second: describe(&lim),
                            });
                        }
                        return finish(prev, used, degenerate, opts);
                    }
                }
            }
        }
    }
    Err(Error::NoGenericDirection {
        tried: opts.directions.len(),
    })
}

fn finish(
    limit: Limit,
    used: Vec<BigRational>,
    degenerate: Vec<BigRational>,
    opts: &LimitOptions,
) -> Result<LimitReport> {
    if let Limit::Pole { order, .. } = &limit {
        if !opts.expect_pole {
            return Err(Error::Pole { order: *order });
        }
    }
    Ok(LimitReport {
        limit,
        used,
        degenerate,
    })
}

fn describe(l: &Limit) -> String {
    match l {
        Limit::Value(v) => fmt_q(v),
        Limit::Pole { order, principal } => format!(
            "pole of order {order} ({})",
            principal.iter().map(fmt_q).collect::<Vec<_>>().join(", ")
        ),
    }
}

/// All fixed-point terms of `kind` on `S^[n]`.
pub fn terms(
    kind: AssignmentKind,
    s: &ToricSurface,
    m: &EqLineBundle,
    n: usize,
    convention: VertexConvention,
) -> Result<Vec<Term>> {
    let weights = bundle_weights(s, m)?;
    fixed_point_tuples(s.charts().len(), n)
        .iter()
        .map(|t| tuple_term(kind, t, s, &weights, convention))
        .collect()
}

pub fn integrate_with(
    kind: AssignmentKind,
    s: &ToricSurface,
    m: &EqLineBundle,
    n: usize,
    opts: &LimitOptions,
) -> Result<LimitReport> {
    let ts = terms(kind, s, m, n, opts.convention)?;
    limit_of_terms(&ts, s.limit(), s.is_complete(), opts)
}

/// `∫_{S^[n]} e(A^[n](M))`, as a residue when `S` is not complete.
pub fn integrate(kind: AssignmentKind, s: &ToricSurface, m: &EqLineBundle, n: usize) -> Result<BigRational> {
    match integrate_with(kind, s, m, n, &LimitOptions::default())?.limit {
        Limit::Value(v) => Ok(v),
        Limit::Pole { order, .. } => Err(Error::Pole { order }),
    }
}

pub fn series_with(
    kind: AssignmentKind,
    s: &ToricSurface,
    m: &EqLineBundle,
    order: usize,
    opts: &LimitOptions,
) -> Result<crate::exact::QSeries> {
    let mut coeffs = vec![BigRational::one()];
    for n in 1..=order {
        match integrate_with(kind, s, m, n, opts)?.limit {
            Limit::Value(v) => coeffs.push(v),
            Limit::Pole { order, .. } => return Err(Error::Pole { order }),
        }
    }
    Ok(crate::exact::QSeries::new(coeffs))
}

/// `1 + Σ_{n=1}^{order} q^n ∫_{S^[n]} e(A^[n](M))`.
pub fn series(
    kind: AssignmentKind,
    s: &ToricSurface,
    m: &EqLineBundle,
    order: usize,
) -> Result<crate::exact::QSeries> {
    series_with(kind, s, m, order, &LimitOptions::default())
}

/// The equivariant integral as a rational function of `(t1, t2)`, summed
/// without specializing.
pub fn equivariant_sum(kind: AssignmentKind, s: &ToricSurface, m: &EqLineBundle, n: usize) -> Result<RatFunc> {
    let mut acc = RatFunc::zero(2);
    for t in terms(kind, s, m, n, VertexConvention::Standard)? {
        acc = acc.add(&t.to_ratfunc()?);
    }
    Ok(acc)
}

/// Limit of a rational function of `(t1, t2)` along `base + z·(1, ρ)`.
pub fn ratfunc_limit(f: &RatFunc, base: [i64; 2], rho: &BigRational) -> Result<BigRational> {
    if base == [0, 0] {
        let g = crate::exact::rf_specialize(f, rho)?;
        return crate::exact::rf_value_at_zero(&g);
    }
    let z = MPoly::var(1, 0);
    let images = [
        &MPoly::constant(1, qi(base[0])) + &z,
        &MPoly::constant(1, qi(base[1])) + &z.scale(rho),
    ];
    let den = f.den().substitute(&images);
    if den.is_zero() {
        return Err(Error::DegenerateDirection { rho: fmt_q(rho) });
    }
    crate::exact::rf_value_at_zero(&RatFunc::new(f.num().substitute(&images), den)?)
}

/// Same number as [`integrate`], computed by summing the expanded rational
/// functions first.
pub fn integrate_by_ratfunc(
    kind: AssignmentKind,
    s: &ToricSurface,
    m: &EqLineBundle,
    n: usize,
) -> Result<BigRational> {
    let f = equivariant_sum(kind, s, m, n)?;
    let mut found: Option<BigRational> = None;
    for rho in default_directions() {
        match ratfunc_limit(&f, s.limit(), &rho) {
            Err(Error::DegenerateDirection { .. }) => continue,
            Err(e) => return Err(e),
            Ok(v) => match &found {
                None => found = Some(v),
                Some(prev) if *prev == v => return Ok(v),
                Some(prev) => {
                    return Err(Error::DirectionDisagreement {
                        first: fmt_q(prev),
                        second: fmt_q(&v),
                    })
                }
            },
        }
    }
    Err(Error::NoGenericDirection {
        tried: default_directions().len(),
    })
}

/// `M·D_r` for a compact invariant curve `D_r`.
pub fn divisor_degree(s: &ToricSurface, m: &EqLineBundle, r: usize) -> Result<i64> {
    let k = s.rays().len();
    let self_int = s.self_intersection(r)?;
    let a = &m.ray_coeffs;
    if a.len() != k {
        return Err(Error::Geometry("bundle does not match the fan".into()));
    }
    Ok(a[(r + k - 1) % k] + a[(r + 1) % k] + a[r] * self_int)
}

/// `e, K², M², M·K` as equivariant integrals over the surface (residues when
/// it is not complete), plus the data of a compact invariant curve.
pub fn equivariant_invariants(
    s: &ToricSurface,
    m: &EqLineBundle,
    relative: Option<usize>,
) -> Result<SurfaceInvariants> {
    let nu = bundle_weights(s, m)?;
    let mut by_kind: [Vec<Term>; 4] = Default::default();
    for (c, &v) in s.charts().iter().zip(&nu) {
        let (w1, w2) = (c.w1, c.w2);
        let k = w1 + w2;
        by_kind[0].push(Term::ratio(vec![w1, w2], vec![w1, w2]));
        by_kind[1].push(Term::ratio(vec![k, k], vec![w1, w2]));
        by_kind[2].push(Term::ratio(vec![v, v], vec![w1, w2]));
        let mut mk = Term::ratio(vec![v, k], vec![w1, w2]);
        mk.coeff = -1;
        by_kind[3].push(mk);
    }
    let opts = LimitOptions::default();
    let mut vals = [0i64; 4];
    for (slot, ts) in vals.iter_mut().zip(&by_kind) {
        let v = match limit_of_terms(ts, s.limit(), s.is_complete(), &opts)?.limit {
            Limit::Value(v) => v,
            Limit::Pole { order, .. } => return Err(Error::Pole { order }),
        };
        *slot = crate::exact::to_i64(&v).ok_or_else(|| Error::NotInteger(fmt_q(&v)))?;
    }
    let mut inv = SurfaceInvariants::absolute(vals[2], vals[3], vals[1], vals[0]);
    if let Some(r) = relative {
        inv = inv.with_divisor(s.self_intersection(r)?, divisor_degree(s, m, r)?, 2);
    }
    Ok(inv)
}
