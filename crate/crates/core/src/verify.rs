//! The acceptance criteria, runnable from tests and from the command line.
//! Every comparison is exact equality of rationals.

use std::fmt;

use rand::{Rng, SeedableRng};

use crate::error::Result;
use crate::exact::{fmt_q, q, qi, xi_pow, BigRational, QSeries};
use crate::identities::{
    degeneration_check, dt_series, epsilon, epsilon_tilde, eta, relative_series, rubber_ratio, RelativeGeometry,
    RuledData,
};
use crate::localize::{integrate_with, series_with, AssignmentKind, Limit, LimitOptions};
use crate::toric::{
    fiber_lift, intersection_numbers, line_bundle_total_space, EqLineBundle, ToricSurface,
};
use crate::universal::{
    absolute_family, fit_absolute, fit_relative_normal, relative_normal_family, xi_delta_coefficient, UniversalPoly,
    Var,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionReport {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{} {status} {}: {}", self.id, self.title, self.detail)
    }
}

/// Collects clause outcomes; the criterion passes when every clause does.
struct Clauses {
    failures: Vec<String>,
    checked: usize,
}

impl Clauses {
    fn new() -> Self {
        Clauses {
            failures: Vec::new(),
            checked: 0,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn eq_series(&mut self, label: &str, got: &Result<QSeries>, want: &QSeries) {
        match got {
            Ok(s) => self.check(s == want, || {
                let k = s.first_difference(want).unwrap_or(0);
                format!(
                    "{label}: q^{k} is {}, expected {}",
                    fmt_q(s.coeff(k)),
                    fmt_q(want.coeff(k))
                )
            }),
            Err(e) => self.check(false, || format!("{label}: {e}")),
        }
    }

    fn report(self, id: &'static str, title: &'static str) -> CriterionReport {
        let passed = self.failures.is_empty();
        let detail = if passed {
            format!("{} checks", self.checked)
        } else {
            let shown: Vec<&str> = self.failures.iter().take(3).map(String::as_str).collect();
            let more = self.failures.len().saturating_sub(3);
            let tail = if more > 0 { format!(" (+{more} more)") } else { String::new() };
            format!("{}/{} checks failed; {}{tail}", self.failures.len(), self.checked, shown.join("; "))
        };
        CriterionReport {
            id,
            title,
            passed,
            detail,
        }
    }
}

fn kind_t() -> AssignmentKind {
    AssignmentKind::T
}

fn p2_bundle(m: i64) -> EqLineBundle {
    EqLineBundle::new(vec![m, 0, 0])
}

fn p1p1_bundle(x: i64, y: i64) -> EqLineBundle {
    EqLineBundle::new(vec![x, y, 0, 0])
}

pub fn a1(opts: &LimitOptions) -> CriterionReport {
    let mut c = Clauses::new();
    let cases = [
        ("P2", ToricSurface::projective_plane(), 4),
        ("P1xP1", ToricSurface::p1_x_p1(), 3),
        ("F1", ToricSurface::hirzebruch(1), 3),
        ("F2", ToricSurface::hirzebruch(2), 3),
    ];
    for (name, s, order) in cases {
        let e = s.rays().len() as i64;
        let got = series_with(kind_t(), &s, &EqLineBundle::trivial(s.rays().len()), order, opts);
        c.eq_series(name, &got, &xi_pow(&qi(e), order));
    }
    c.report("A1", "Euler characteristics of Hilbert schemes")
}

pub fn a2(opts: &LimitOptions) -> CriterionReport {
    let mut c = Clauses::new();
    let p2 = ToricSurface::projective_plane();
    for m in -2..=2 {
        let got = series_with(kind_t(), &p2, &p2_bundle(m), 3, opts);
        c.eq_series(&format!("P2 O({m})"), &got, &xi_pow(&qi(m * m + 3 * m + 3), 3));
    }
    let pp = ToricSurface::p1_x_p1();
    for x in 0..=2 {
        for y in 0..=2 {
            let got = series_with(kind_t(), &pp, &p1p1_bundle(x, y), 2, opts);
            // δ = 4 + 2x + 2y + 2xy
            c.eq_series(&format!("P1xP1 O({x},{y})"), &got, &xi_pow(&qi(4 + 2 * x + 2 * y + 2 * x * y), 2));
        }
    }
    c.report("A2", "twisted tangent series on complete surfaces")
}

pub fn a3(opts: &LimitOptions) -> CriterionReport {
    let mut c = Clauses::new();
    for a in -2..=2 {
        for d in 0..=2 {
            let (s, m) = line_bundle_total_space(a, d);
            let got = series_with(kind_t(), &s, &m, 3, opts);
            c.eq_series(&format!("Tot O({a}) d={d}"), &got, &xi_pow(&qi(2 + d), 3));
        }
    }
    // a linearization with nonzero weight along the zero section
    let pole_opts = LimitOptions {
        expect_pole: true,
        ..opts.clone()
    };
    for a in [-1, 1] {
        for k in [1, -1] {
            let (s, m) = line_bundle_total_space(a, 1);
            let lifted = fiber_lift(m, k);
            for n in 1..=3 {
                match integrate_with(kind_t(), &s, &lifted, n, &pole_opts) {
                    Ok(rep) => match rep.limit {
                        Limit::Pole { .. } => c.check(true, String::new),
                        Limit::Value(v) => c.check(false, || {
                            format!("Tot O({a}) lift {k} n={n}: no pole, finite limit {}", fmt_q(&v))
                        }),
                    },
                    Err(e) => c.check(false, || format!("Tot O({a}) lift {k} n={n}: {e}")),
                }
            }
        }
    }
    c.report("A3", "normal bundle residues and the wrong-lift pole")
}

/// Instances `(S, C, M)` with `C` an invariant rational curve.
fn relative_instances() -> Vec<(String, ToricSurface, EqLineBundle, usize)> {
    let mut out = Vec::new();
    for m in 0..=2 {
        out.push((format!("P2 line O({m})"), ToricSurface::projective_plane(), p2_bundle(m), 1));
    }
    for a in 0..=1 {
        for (cname, ray) in [("C0", ToricSurface::HIRZEBRUCH_C0), ("Cinf", ToricSurface::HIRZEBRUCH_CINF)] {
            for x in 0..=1 {
                for y in 0..=1 {
                    let mut coeffs = vec![0; 4];
                    coeffs[ToricSurface::HIRZEBRUCH_C0] = x;
                    coeffs[ToricSurface::HIRZEBRUCH_FIBER] = y;
                    out.push((
                        format!("F{a} {cname} {x}C0+{y}f"),
                        ToricSurface::hirzebruch(a),
                        EqLineBundle::new(coeffs),
                        ray,
                    ));
                }
            }
        }
    }
    out
}

struct RelativeRun {
    label: String,
    z_abs: Result<QSeries>,
    z_normal: Result<QSeries>,
    eta: BigRational,
    c2: i64,
    mc: i64,
}

fn relative_runs(order: usize, opts: &LimitOptions) -> Result<Vec<RelativeRun>> {
    let mut out = Vec::new();
    for (label, s, m, ray) in relative_instances() {
        let inv = intersection_numbers(&s, &m, Some(ray))?;
        let (c2, mc) = (inv.c2.unwrap_or(0), inv.mc.unwrap_or(0));
        let (tot, tm) = line_bundle_total_space(c2, mc);
        out.push(RelativeRun {
            label,
            z_abs: series_with(kind_t(), &s, &m, order, opts),
            z_normal: series_with(kind_t(), &tot, &tm, order, opts),
            eta: eta(&RelativeGeometry::from_invariants(&inv)?),
            c2,
            mc,
        });
    }
    Ok(out)
}

pub fn a4(opts: &LimitOptions) -> CriterionReport {
    let mut c = Clauses::new();
    match relative_runs(3, opts) {
        Ok(runs) => {
            for r in runs {
                let got = match (&r.z_abs, &r.z_normal) {
                    (Ok(a), Ok(n)) => relative_series(a, n),
                    (Err(e), _) | (_, Err(e)) => Err(e.clone()),
                };
                c.eq_series(&r.label, &got, &xi_pow(&r.eta, 3));
            }
        }
        Err(e) => c.check(false, || e.to_string()),
    }
    c.report("A4", "relative series as a quotient by the normal bundle")
}

pub fn a5(opts: &LimitOptions) -> CriterionReport {
    let mut c = Clauses::new();
    match relative_runs(3, opts) {
        Ok(runs) => {
            for r in runs {
                let (Ok(z_s), Ok(z_n)) = (&r.z_abs, &r.z_normal) else {
                    c.check(false, || format!("{}: localization failed", r.label));
                    continue;
                };
                let ruled = RuledData::new(0, -r.c2, 0, r.mc);
                let z_ruled = xi_pow(&epsilon(&ruled), 3);
                let outcome = relative_series(z_s, z_n).and_then(|z_rel| degeneration_check(z_s, &z_rel, &z_ruled));
                match outcome {
                    Ok(chk) => c.check(chk.holds, || {
                        format!("{}: differs at q^{}", r.label, chk.first_difference.unwrap_or(0))
                    }),
                    Err(e) => c.check(false, || format!("{}: {e}", r.label)),
                }
            }
        }
        Err(e) => c.check(false, || e.to_string()),
    }
    c.report("A5", "degeneration product")
}

/// The anchor polynomial `56 C² - 192 M·C + 144` for the normal bundle
/// Segre numbers at `n = 3`.
pub fn segre_anchor() -> UniversalPoly {
    UniversalPoly::new(
        Var::NORMAL.to_vec(),
        3,
        [(vec![1, 0], qi(56)), (vec![0, 1], qi(-192)), (vec![0, 0], qi(144))],
    )
}

pub fn a6(opts: &LimitOptions) -> CriterionReport {
    let mut c = Clauses::new();
    for cc in -1..=2 {
        for d in 0..=2 {
            let (s, m) = line_bundle_total_space(cc, d);
            let want = qi(-192 * d + 56 * cc + 144);
            match integrate_with(AssignmentKind::Seg, &s, &m, 3, opts) {
                Ok(rep) => match rep.limit {
                    Limit::Value(v) => c.check(v == want, || {
                        format!("c={cc} d={d}: localization {}, expected {}", fmt_q(&v), fmt_q(&want))
                    }),
                    Limit::Pole { order, .. } => c.check(false, || format!("c={cc} d={d}: pole of order {order}")),
                },
                Err(e) => c.check(false, || format!("c={cc} d={d}: {e}")),
            }
        }
    }
    c.report("A6", "Segre numbers of the normal bundle at n = 3")
}

pub fn a7(opts: &LimitOptions) -> CriterionReport {
    let mut c = Clauses::new();
    for n in 1..=2 {
        let r = absolute_family(AssignmentKind::Seg, n, opts).and_then(|f| fit_absolute(n, &f));
        c.check(r.is_ok(), || format!("absolute Seg n={n}: {}", r.unwrap_err()));
    }
    match relative_normal_family(AssignmentKind::Seg, 3, opts).and_then(|f| fit_relative_normal(3, &f)) {
        Ok(p) => {
            let anchor = segre_anchor();
            c.check(p == anchor, || format!("relative Seg n=3 fit is {p}, anchor is {anchor}"));
        }
        Err(e) => c.check(false, || format!("relative Seg n=3: {e}")),
    }
    for n in 1..=3 {
        match absolute_family(AssignmentKind::T, n, opts).and_then(|f| fit_absolute(n, &f)) {
            Ok(p) => {
                let want = xi_delta_coefficient(n);
                c.check(p == want, || format!("absolute T n={n}: fit {p}, expected {want}"));
            }
            Err(e) => c.check(false, || format!("absolute T n={n}: {e}")),
        }
    }
    c.report("A7", "universal polynomial fits")
}

pub fn a8(opts: &LimitOptions) -> CriterionReport {
    let mut c = Clauses::new();
    for a in -2..=2 {
        for d in 0..=2 {
            let (s, m) = line_bundle_total_space(a, d);
            let z_zero = series_with(kind_t(), &s, &m, 3, opts);
            for m_f in 0..=1 {
                let z_inf = series_with(kind_t(), &s, &fiber_lift(m.clone(), m_f), 3, opts);
                let got = match (&z_inf, &z_zero) {
                    (Ok(i), Ok(z)) => rubber_ratio(i, z),
                    (Err(e), _) | (_, Err(e)) => Err(e.clone()),
                };
                let et = epsilon_tilde(&RuledData::new(0, -a, m_f, d));
                let want = if m_f == 0 { QSeries::one(3) } else { xi_pow(&et, 3) };
                c.eq_series(&format!("Tot O({a}) d={d} m_f={m_f}"), &got, &want);
            }
        }
    }
    c.report("A8", "rubber ratio of the two lifts")
}

pub fn a9(opts: &LimitOptions) -> CriterionReport {
    let mut c = Clauses::new();
    for d in 0..=4 {
        c.eq_series(&format!("d={d}"), &dt_series(d, 4), &xi_pow(&qi(d * d - 4 * d + 7), 4));
    }
    let p2 = ToricSurface::projective_plane();
    let (tot, tm) = line_bundle_total_space(1, 1);
    let rel = series_with(kind_t(), &p2, &p2_bundle(1), 4, opts)
        .and_then(|za| series_with(kind_t(), &tot, &tm, 4, opts).and_then(|zn| relative_series(&za, &zn)));
    match dt_series(1, 4) {
        Ok(dt) => c.eq_series("d=1 against the relative P2 series", &rel, &dt),
        Err(e) => c.check(false, || e.to_string()),
    }
    c.report("A9", "relative invariants of P3 against degree d surfaces")
}

pub fn a10(opts: &LimitOptions) -> CriterionReport {
    let mut c = Clauses::new();
    // disjoint direction pools
    let pools = [
        vec![qi(2), q(3, 2), q(5, 3), q(7, 2)],
        vec![q(11, 4), q(13, 5), q(17, 7), q(19, 3), q(23, 9)],
        vec![q(-5, 7), q(31, 6), q(-13, 11), q(41, 10)],
    ];
    let (tot, tm) = line_bundle_total_space(1, 2);
    let cases = [
        ("P2 O(1) T", ToricSurface::projective_plane(), p2_bundle(1), AssignmentKind::T, 3),
        ("P2 O(2) Seg", ToricSurface::projective_plane(), p2_bundle(2), AssignmentKind::Seg, 3),
        ("F1 L", ToricSurface::hirzebruch(1), EqLineBundle::new(vec![1, 0, 0, 1]), AssignmentKind::L, 2),
        ("Tot O(1) d=2 Seg", tot.clone(), tm.clone(), AssignmentKind::Seg, 3),
        ("Tot O(1) d=2 T", tot, tm, AssignmentKind::T, 3),
    ];
    for (label, s, m, kind, order) in &cases {
        let runs: Vec<Result<QSeries>> = pools
            .iter()
            .map(|p| series_with(*kind, s, m, *order, &opts.clone().directions(p.clone())))
            .collect();
        match &runs[0] {
            Ok(first) => {
                for r in &runs[1..] {
                    c.eq_series(&format!("{label} directions"), r, first);
                }
            }
            Err(e) => c.check(false, || format!("{label}: {e}")),
        }
        let by_workers: Vec<Result<QSeries>> = [1, 2, 4]
            .iter()
            .map(|&w| series_with(*kind, s, m, *order, &opts.clone().workers(w)))
            .collect();
        if let Ok(first) = &by_workers[0] {
            for r in &by_workers[1..] {
                c.eq_series(&format!("{label} workers"), r, first);
            }
        }
    }
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    for _ in 0..50 {
        let mut draw = || q(rng.gen_range(-40..=40), rng.gen_range(1..=12));
        let (x, y) = (draw(), draw());
        let lhs = xi_pow(&x, 6).mul(&xi_pow(&y, 6));
        c.eq_series(&format!("xi_pow({}) xi_pow({})", fmt_q(&x), fmt_q(&y)), &lhs, &xi_pow(&(&x + &y), 6));
    }
    c.report("A10", "direction independence, determinism, exponent additivity")
}

/// Every criterion in order.
pub fn run_all(opts: &LimitOptions) -> Vec<CriterionReport> {
    let all: [fn(&LimitOptions) -> CriterionReport; 10] = [a1, a2, a3, a4, a5, a6, a7, a8, a9, a10];
    all.iter().map(|f| f(opts)).collect()
}
