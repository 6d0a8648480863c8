//! Closed-form exponents and the structural identities between generating
//! series: relative quotients, rubber ratios, degeneration products.

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{qi, xi_pow, BigRational, QSeries};
use crate::toric::SurfaceInvariants;

/// `e(S) - M·K + M²`.
pub fn delta(inv: &SurfaceInvariants) -> BigRational {
    qi(inv.e - inv.mk + inv.m2)
}

/// Data of one relative divisor component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DivisorData {
    pub c2: i64,
    pub mc: i64,
    /// `2 - 2g`.
    pub e_c: i64,
}

impl DivisorData {
    pub fn new(c2: i64, mc: i64, e_c: i64) -> Result<Self> {
        if e_c % 2 != 0 || e_c > 2 {
            return Err(Error::Geometry(format!("e(C) = {e_c} is not 2 - 2g")));
        }
        Ok(DivisorData { c2, mc, e_c })
    }

    pub fn genus(&self) -> i64 {
        (2 - self.e_c) / 2
    }

    /// Smooth plane curve of degree `d ≥ 1` against `O(1)`.
    pub fn plane_curve(d: i64) -> Self {
        DivisorData {
            c2: d * d,
            mc: d,
            e_c: 2 - (d - 1) * (d - 2),
        }
    }
}

/// A surface with disjoint smooth divisors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeGeometry {
    pub ambient: SurfaceInvariants,
    pub divisors: Vec<DivisorData>,
}

impl RelativeGeometry {
    pub fn new(ambient: SurfaceInvariants, divisors: Vec<DivisorData>) -> Result<Self> {
        for d in &divisors {
            DivisorData::new(d.c2, d.mc, d.e_c)?;
        }
        Ok(RelativeGeometry { ambient, divisors })
    }

    /// Ambient invariants carrying a single divisor.
    pub fn from_invariants(inv: &SurfaceInvariants) -> Result<Self> {
        let divisors = match (inv.c2, inv.mc, inv.e_c) {
            (Some(c2), Some(mc), Some(e_c)) => vec![DivisorData::new(c2, mc, e_c)?],
            _ => vec![],
        };
        Ok(RelativeGeometry {
            ambient: *inv,
            divisors,
        })
    }
}

/// `δ(S) - Σ (e(C_i) + M·C_i)`.
pub fn eta(rel: &RelativeGeometry) -> BigRational {
    let corr: i64 = rel.divisors.iter().map(|d| d.e_c + d.mc).sum();
    delta(&rel.ambient) - qi(corr)
}

/// Ruled surface `P(O ⊕ L)` over a genus `g` curve, with `m_f = M·f`,
/// `m_0 = M·C_0` and `l_0 = π*L·C_0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuledData {
    pub g: BigRational,
    pub l0: BigRational,
    pub m_f: BigRational,
    pub m0: BigRational,
}

impl RuledData {
    pub fn new(g: i64, l0: i64, m_f: i64, m0: i64) -> Self {
        RuledData {
            g: qi(g),
            l0: qi(l0),
            m_f: qi(m_f),
            m0: qi(m0),
        }
    }

    fn e_c(&self) -> BigRational {
        qi(2) - qi(2) * &self.g
    }
}

/// `m_f² l_0 + (1 + 2m_f) m_0 + (1 + m_f)(2 - 2g)`.
pub fn epsilon(r: &RuledData) -> BigRational {
    let one = BigRational::one();
    &r.m_f * &r.m_f * &r.l0 + (&one + qi(2) * &r.m_f) * &r.m0 + (&one + &r.m_f) * r.e_c()
}

/// `m_f² l_0 + 2 m_f m_0 + m_f (2 - 2g)`.
pub fn epsilon_tilde(r: &RuledData) -> BigRational {
    &r.m_f * &r.m_f * &r.l0 + qi(2) * &r.m_f * &r.m0 + &r.m_f * r.e_c()
}

/// `Z(S/C) = Z(S) / Z(N)` with `N` the normal bundle total space.
pub fn relative_series(z_abs: &QSeries, z_normal: &QSeries) -> Result<QSeries> {
    z_abs.div(z_normal)
}

/// Relative to several disjoint divisors: one quotient per component.
pub fn relative_series_multi(z_abs: &QSeries, z_normals: &[QSeries]) -> Result<QSeries> {
    z_normals.iter().try_fold(z_abs.clone(), |acc, zn| acc.div(zn))
}

/// Ratio of the series for the two lifts that are trivial over the infinity
/// and zero sections respectively.
pub fn rubber_ratio(z_inf: &QSeries, z_zero: &QSeries) -> Result<QSeries> {
    z_inf.div(z_zero)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegenerationCheck {
    pub holds: bool,
    pub first_difference: Option<usize>,
    pub product: QSeries,
}

/// Checks `Z(S) = Z(S/C) · Z(P/C_∞)` coefficientwise.
pub fn degeneration_check(z_s: &QSeries, z_rel: &QSeries, z_ruled_rel: &QSeries) -> Result<DegenerationCheck> {
    let product = z_rel.mul(z_ruled_rel)?;
    if product.order() != z_s.order() {
        return Err(Error::OrderMismatch(product.order(), z_s.order()));
    }
    let first_difference = z_s.first_difference(&product);
    Ok(DegenerationCheck {
        holds: first_difference.is_none(),
        first_difference,
        product,
    })
}

/// `η` of `(P², C_d)` against `O(1)`; `d = 0` is the empty divisor.
pub fn dt_exponent(d: i64) -> Result<BigRational> {
    if d < 0 {
        return Err(Error::Geometry(format!("negative degree {d}")));
    }
    let p2 = SurfaceInvariants::absolute(1, -3, 9, 3);
    let divisors = if d == 0 {
        vec![]
    } else {
        vec![DivisorData::plane_curve(d)]
    };
    Ok(eta(&RelativeGeometry::new(p2, divisors)?))
}

/// Generating series of the relative invariants of `P³` against a degree
/// `d` surface.
pub fn dt_series(d: i64, order: usize) -> Result<QSeries> {
    Ok(xi_pow(&dt_exponent(d)?, order))
}
