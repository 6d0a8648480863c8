//! Smooth toric surfaces, their fixed-point charts and equivariant line
//! bundles.
//!
//! Characters are linear forms in `(t1, t2)`. At the fixed point of the cone
//! spanned by consecutive rays `v_i, v_{i+1}`, the chart coordinates are the
//! characters `u1, u2` dual to the two rays; they are also the tangent
//! weights there. A torus-invariant divisor `Σ a_i D_i` gets the
//! linearization whose fiber weight `ν_σ` satisfies `⟨ν_σ, v⟩ = a_v` on the
//! two rays of the cone, so `O(D)` restricted to an invariant curve `D` has
//! the normal weight along it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::LinForm;

/// Fixed point of a two-dimensional cone with its tangent weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FixedChart {
    pub w1: LinForm,
    pub w2: LinForm,
    /// Index of the first ray of the cone.
    pub cone: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricSurface {
    rays: Vec<[i64; 2]>,
    complete: bool,
    /// One-parameter subgroup used to define residues on non-compact surfaces:
    /// the torus parameters are sent to `limit + z·(generic)` and `z → 0`.
    limit: [i64; 2],
    charts: Vec<FixedChart>,
}

/// Torus-invariant divisor `Σ a_i D_i` with its canonical linearization,
/// optionally twisted by a global character.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EqLineBundle {
    pub ray_coeffs: Vec<i64>,
    /// Character by which the canonical linearization is twisted.
    #[serde(default)]
    pub lift: [i64; 2],
}

impl EqLineBundle {
    pub fn new(ray_coeffs: Vec<i64>) -> Self {
        EqLineBundle {
            ray_coeffs,
            lift: [0, 0],
        }
    }

    pub fn trivial(nrays: usize) -> Self {
        EqLineBundle::new(vec![0; nrays])
    }

    pub fn with_lift(mut self, lift: [i64; 2]) -> Self {
        self.lift = lift;
        self
    }
}

/// Intersection numbers of `(S, M)` and, when a divisor `C` is given, of the
/// pair. `e_c` is `e(C) = 2 - 2g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    pub m2: i64,
    pub mk: i64,
    pub k2: i64,
    pub e: i64,
    pub c2: Option<i64>,
    pub mc: Option<i64>,
    pub e_c: Option<i64>,
}

impl SurfaceInvariants {
    pub fn absolute(m2: i64, mk: i64, k2: i64, e: i64) -> Self {
        SurfaceInvariants {
            m2,
            mk,
            k2,
            e,
            ..Default::default()
        }
    }

    pub fn with_divisor(mut self, c2: i64, mc: i64, e_c: i64) -> Self {
        self.c2 = Some(c2);
        self.mc = Some(mc);
        self.e_c = Some(e_c);
        self
    }

    /// Invariants of a disjoint union.
    pub fn disjoint_union(&self, other: &SurfaceInvariants) -> SurfaceInvariants {
        let add = |a: Option<i64>, b: Option<i64>| match (a, b) {
            (Some(x), Some(y)) => Some(x + y),
            _ => None,
        };
        SurfaceInvariants {
            m2: self.m2 + other.m2,
            mk: self.mk + other.mk,
            k2: self.k2 + other.k2,
            e: self.e + other.e,
            c2: add(self.c2, other.c2),
            mc: add(self.mc, other.mc),
            e_c: add(self.e_c, other.e_c),
        }
    }
}

fn det(a: [i64; 2], b: [i64; 2]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

impl ToricSurface {
    /// Complete surface from a cyclically ordered (counterclockwise) ray list.
    pub fn complete(rays: Vec<[i64; 2]>) -> Result<Self> {
        Self::build(rays, true, [0, 0])
    }

    /// Non-complete surface whose fan is the chain of cones between
    /// consecutive rays; `limit` is the one-parameter subgroup defining the
    /// residue.
    pub fn open(rays: Vec<[i64; 2]>, limit: [i64; 2]) -> Result<Self> {
        Self::build(rays, false, limit)
    }

    fn build(rays: Vec<[i64; 2]>, complete: bool, limit: [i64; 2]) -> Result<Self> {
        let k = rays.len();
        if k < 2 || (complete && k < 3) {
            return Err(Error::MalformedFan(format!("{k} rays")));
        }
        for r in &rays {
            if num_integer::gcd(r[0], r[1]) != 1 {
                return Err(Error::MalformedFan(format!("ray {r:?} is not primitive")));
            }
        }
        let ncones = if complete { k } else { k - 1 };
        let mut charts = Vec::with_capacity(ncones);
        for i in 0..ncones {
            let (v, w) = (rays[i], rays[(i + 1) % k]);
            let d = det(v, w);
            if d != 1 {
                return Err(Error::MalformedFan(format!(
                    "cone {v:?}, {w:?} is not unimodular and counterclockwise (det {d})"
                )));
            }
            // dual basis: <u1, v> = 1, <u1, w> = 0, <u2, v> = 0, <u2, w> = 1
            let u1 = LinForm::new(w[1], -w[0]);
            let u2 = LinForm::new(-v[1], v[0]);
            charts.push(FixedChart {
                w1: u1,
                w2: u2,
                cone: i,
            });
        }
        if complete {
            let winding: i64 = (0..k).map(|i| det(rays[i], rays[(i + 1) % k]).signum()).sum();
            if winding != k as i64 {
                return Err(Error::MalformedFan("rays do not wind once around the origin".into()));
            }
            let turn: f64 = (0..k)
                .map(|i| {
                    let (v, w) = (rays[i], rays[(i + 1) % k]);
                    (det(v, w) as f64).atan2((v[0] * w[0] + v[1] * w[1]) as f64)
                })
                .sum();
            if (turn - std::f64::consts::TAU).abs() > 1e-6 {
                return Err(Error::MalformedFan("rays do not wind once around the origin".into()));
            }
        }
        Ok(ToricSurface {
            rays,
            complete,
            limit,
            charts,
        })
    }

    pub fn projective_plane() -> Self {
        Self::complete(vec![[1, 0], [0, 1], [-1, -1]]).expect("valid fan")
    }

    pub fn p1_x_p1() -> Self {
        Self::complete(vec![[1, 0], [0, 1], [-1, 0], [0, -1]]).expect("valid fan")
    }

    /// `P(O ⊕ O(-a))` over `P^1`. Rays: fiber `(1,0)`, `C_∞ = (0,1)` with
    /// self-intersection `-a`, fiber `(-1,a)`, `C_0 = (0,-1)` with
    /// self-intersection `a`.
    pub fn hirzebruch(a: i64) -> Self {
        Self::complete(vec![[1, 0], [0, 1], [-1, a], [0, -1]]).expect("valid fan")
    }

    /// Ray indices of the fiber class, `C_0` (`C_0² = a`) and `C_∞` (`C_∞² = -a`)
    /// on [`Self::hirzebruch`].
    pub const HIRZEBRUCH_FIBER: usize = 0;
    pub const HIRZEBRUCH_C0: usize = 3;
    pub const HIRZEBRUCH_CINF: usize = 1;

    pub fn rays(&self) -> &[[i64; 2]] {
        &self.rays
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn limit(&self) -> [i64; 2] {
        self.limit
    }

    pub fn charts(&self) -> &[FixedChart] {
        &self.charts
    }

    /// Rays of a cone.
    fn cone_rays(&self, chart: &FixedChart) -> (usize, usize) {
        (chart.cone, (chart.cone + 1) % self.rays.len())
    }

    /// Self-intersection of the invariant curve `D_i` from
    /// `v_{i-1} + v_{i+1} = -(D_i²) v_i`; only defined for compact `D_i`.
    pub fn self_intersection(&self, i: usize) -> Result<i64> {
        let k = self.rays.len();
        if !self.complete && (i == 0 || i + 1 >= k) {
            return Err(Error::Geometry(format!("D_{i} is not compact")));
        }
        let (p, n) = (self.rays[(i + k - 1) % k], self.rays[(i + 1) % k]);
        let s = [p[0] + n[0], p[1] + n[1]];
        let v = self.rays[i];
        if det(s, v) != 0 {
            return Err(Error::MalformedFan(format!("neighbours of ray {i} are not balanced")));
        }
        let c = if v[0] != 0 { s[0] / v[0] } else { s[1] / v[1] };
        Ok(-c)
    }

    fn check_bundle(&self, m: &EqLineBundle) -> Result<()> {
        if m.ray_coeffs.len() != self.rays.len() {
            return Err(Error::Geometry(format!(
                "bundle has {} coefficients for {} rays",
                m.ray_coeffs.len(),
                self.rays.len()
            )));
        }
        Ok(())
    }
}

/// Fiber weight of `M` at the fixed point of `chart`.
pub fn bundle_weight_at(s: &ToricSurface, m: &EqLineBundle, chart: &FixedChart) -> LinForm {
    let (i, j) = s.cone_rays(chart);
    m.ray_coeffs[i] * chart.w1 + m.ray_coeffs[j] * chart.w2 + LinForm::new(m.lift[0], m.lift[1])
}

pub fn bundle_weights(s: &ToricSurface, m: &EqLineBundle) -> Result<Vec<LinForm>> {
    s.check_bundle(m)?;
    Ok(s.charts.iter().map(|c| bundle_weight_at(s, m, c)).collect())
}

/// Intersection numbers from the fan (complete surfaces): `D_i·D_{i±1} = 1`,
/// `D_i²` from the balancing relation, `K = -Σ D_i`, `e` = number of cones.
/// A relative divisor is a ray index; it is an invariant rational curve.
pub fn intersection_numbers(
    s: &ToricSurface,
    m: &EqLineBundle,
    relative: Option<usize>,
) -> Result<SurfaceInvariants> {
    if !s.complete {
        return Err(Error::Geometry(
            "fan intersection numbers need a complete surface; use the equivariant route".into(),
        ));
    }
    s.check_bundle(m)?;
    let k = s.rays.len();
    let selfs: Vec<i64> = (0..k).map(|i| s.self_intersection(i)).collect::<Result<_>>()?;
    let dot = |x: &[i64], y: &[i64]| -> i64 {
        (0..k)
            .map(|i| x[i] * (selfs[i] * y[i] + y[(i + 1) % k] + y[(i + k - 1) % k]))
            .sum()
    };
    let a = &m.ray_coeffs;
    let minus_k = vec![1i64; k];
    let mut inv = SurfaceInvariants::absolute(
        dot(a, a),
        -dot(a, &minus_k),
        dot(&minus_k, &minus_k),
        k as i64,
    );
    if let Some(r) = relative {
        if r >= k {
            return Err(Error::Geometry(format!("relative ray {r} out of range")));
        }
        let mut c = vec![0i64; k];
        c[r] = 1;
        inv = inv.with_divisor(selfs[r], dot(a, &c), 2);
    }
    Ok(inv)
}

/// Total space of `O(a)` over `P^1` with the pulled-back bundle `π*O(d)`.
///
/// Rays `(1,0)`, `(0,1)`, `(-1,-a)`: the middle ray is the zero section
/// (self-intersection `a`), the outer rays are fibers. The fiberwise
/// `C*` is the subgroup `(0,1)`; the bundle is `d` times a fiber, whose
/// canonical linearization has trivial fiberwise weight along the zero
/// section.
pub fn line_bundle_total_space(a: i64, d: i64) -> (ToricSurface, EqLineBundle) {
    let s = ToricSurface::open(vec![[1, 0], [0, 1], [-1, -a]], [0, 1]).expect("valid fan");
    (s, EqLineBundle::new(vec![d, 0, 0]))
}

/// Ray index of the zero section in [`line_bundle_total_space`].
pub const TOTAL_SPACE_ZERO_SECTION: usize = 1;

/// Twists the linearization by `k` times the fiberwise character, so the
/// fibers over the zero section carry weight `k·t`.
pub fn fiber_lift(m: EqLineBundle, k: i64) -> EqLineBundle {
    let lift = [m.lift[0], m.lift[1] + k];
    m.with_lift(lift)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(m: LinForm, v: [i64; 2]) -> i64 {
        m.a * v[0] + m.b * v[1]
    }

    #[test]
    fn standard_surfaces() {
        let p2 = ToricSurface::projective_plane();
        assert_eq!(p2.charts().len(), 3);
        let inv = intersection_numbers(&p2, &EqLineBundle::trivial(3), None).unwrap();
        assert_eq!(inv.e, 3);
        assert_eq!(inv.k2, 9);
        let f0 = ToricSurface::hirzebruch(0);
        let pp = ToricSurface::p1_x_p1();
        assert_eq!(f0.rays(), pp.rays());
        for a in 0..=5 {
            let f = ToricSurface::hirzebruch(a);
            let inv = intersection_numbers(&f, &EqLineBundle::trivial(4), None).unwrap();
            assert_eq!((inv.k2, inv.e), (8, 4), "a = {a}");
            assert_eq!(f.self_intersection(ToricSurface::HIRZEBRUCH_C0).unwrap(), a);
            assert_eq!(f.self_intersection(ToricSurface::HIRZEBRUCH_CINF).unwrap(), -a);
        }
    }

    #[test]
    fn p2_bundle_numbers() {
        let p2 = ToricSurface::projective_plane();
        for m in -3..=3 {
            let inv = intersection_numbers(&p2, &EqLineBundle::new(vec![m, 0, 0]), Some(1)).unwrap();
            assert_eq!((inv.m2, inv.mk, inv.k2, inv.e), (m * m, -3 * m, 9, 3));
            assert_eq!((inv.c2, inv.mc, inv.e_c), (Some(1), Some(m), Some(2)));
        }
    }

    #[test]
    fn p1xp1_bundle_numbers() {
        let s = ToricSurface::p1_x_p1();
        for x in -2..=2 {
            for y in -2..=2 {
                let inv = intersection_numbers(&s, &EqLineBundle::new(vec![x, y, 0, 0]), None).unwrap();
                assert_eq!((inv.m2, inv.mk, inv.k2, inv.e), (2 * x * y, -2 * x - 2 * y, 8, 4));
            }
        }
    }

    #[test]
    fn malformed_fans() {
        assert!(ToricSurface::complete(vec![[1, 0], [0, 1]]).is_err());
        assert!(ToricSurface::complete(vec![[1, 0], [1, 2], [-1, -1]]).is_err());
        assert!(ToricSurface::complete(vec![[2, 0], [0, 1], [-1, -1]]).is_err());
        assert!(ToricSurface::complete(vec![[1, 0], [-1, -1], [0, 1]]).is_err());
    }

    #[test]
    fn bundle_weights_examples() {
        let p2 = ToricSurface::projective_plane();
        let triv = bundle_weights(&p2, &EqLineBundle::trivial(3)).unwrap();
        assert!(triv.iter().all(LinForm::is_zero));

        // O(1): chart weights differ pairwise by chart coordinate weights
        let o1 = bundle_weights(&p2, &EqLineBundle::new(vec![1, 0, 0])).unwrap();
        let ch = p2.charts();
        assert_eq!(o1[0], ch[0].w1);
        assert_eq!(o1[1] - o1[0], -ch[0].w1);
        assert_eq!(o1[2], ch[2].w2);

        // Hirzebruch, M = fiber class: weights vanish on the two charts along
        // the other fiber
        for a in 0..=3 {
            let f = ToricSurface::hirzebruch(a);
            let mut c = vec![0; 4];
            c[ToricSurface::HIRZEBRUCH_FIBER] = 1;
            let w = bundle_weights(&f, &EqLineBundle::new(c)).unwrap();
            // cones 1 = (C_inf, fiber') and 2 = (fiber', C_0) avoid ray 0
            assert!(w[1].is_zero() && w[2].is_zero());
            assert!(!w[0].is_zero() && !w[3].is_zero());
        }
    }

    #[test]
    fn adjacent_charts_glue() {
        // the shared ray's dual coordinate transforms by the unimodular change
        // of basis: w2 of chart i and w1 of chart i+1 both vanish on the shared ray
        for s in [ToricSurface::projective_plane(), ToricSurface::hirzebruch(3)] {
            let k = s.rays().len();
            for i in 0..k {
                let (c, d) = (s.charts()[i], s.charts()[(i + 1) % k]);
                let shared = s.rays()[(i + 1) % k];
                assert_eq!(pair(c.w1, shared), 0);
                assert_eq!(pair(d.w2, shared), 0);
                assert_eq!(pair(c.w2, shared), 1);
                assert_eq!(pair(d.w1, shared), 1);
                // the coordinate along the shared curve is inverted
                assert_eq!(c.w1, -d.w2);
            }
        }
    }

    #[test]
    fn total_space_charts() {
        for a in -3..=3 {
            let (s, m) = line_bundle_total_space(a, 0);
            assert_eq!(s.charts().len(), 2);
            assert!(bundle_weights(&s, &m).unwrap().iter().all(LinForm::is_zero));
            let (c0, c1) = (s.charts()[0], s.charts()[1]);
            // fiber coordinates: w2 at the first chart, w1 at the second
            assert_eq!(c0.w2 - c1.w1, a * c0.w1);
            // the fiberwise subgroup sees weight 1 on both fiber coordinates
            assert_eq!(pair(c0.w2, s.limit()), 1);
            assert_eq!(pair(c1.w1, s.limit()), 1);
            assert_eq!(s.self_intersection(TOTAL_SPACE_ZERO_SECTION).unwrap(), a);
        }
        let (s, m) = line_bundle_total_space(2, 3);
        let w = bundle_weights(&s, &m).unwrap();
        assert_eq!(w[0] - w[1], 3 * s.charts()[0].w1);
        assert!(w.iter().all(|x| pair(*x, s.limit()) == 0));
        let lifted = bundle_weights(&s, &fiber_lift(m, 2)).unwrap();
        assert!(lifted.iter().all(|x| pair(*x, s.limit()) == 2));
    }
}
