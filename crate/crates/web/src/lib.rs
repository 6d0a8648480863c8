use hilbloc::exact::{fmt_q, qi};
use hilbloc::geometry::{Format, GeometrySpec};
use hilbloc::identities::{delta, dt_exponent, dt_series, eta, relative_series, RelativeGeometry};
use hilbloc::localize::{equivariant_invariants, series_with};
use hilbloc::toric::{intersection_numbers, line_bundle_total_space};
use hilbloc::{xi_pow, AssignmentKind, LimitOptions, QSeries};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_ORDER: usize = 6;

fn check_order(order: usize) -> Result<(), String> {
    if order > MAX_ORDER {
        return Err(format!("order {order} is above the demo limit {MAX_ORDER}"));
    }
    Ok(())
}

fn rows(got: &QSeries, want: Option<&QSeries>) -> Vec<Value> {
    (0..=got.order())
        .map(|n| {
            let mut row = json!({ "n": n, "value": fmt_q(got.coeff(n)) });
            if let Some(w) = want {
                row["closed_form"] = json!(fmt_q(w.coeff(n)));
                row["match"] = json!(got.coeff(n) == w.coeff(n));
            }
            row
        })
        .collect()
}

fn spec(geometry: &str) -> Result<GeometrySpec, String> {
    GeometrySpec::parse(geometry, Format::Json).map_err(|e| e.to_string())
}

/// Series of one kind; tangent series also carry the closed form.
pub fn series_value(geometry: &str, kind: &str, order: usize) -> Result<Value, String> {
    check_order(order)?;
    let g = spec(geometry)?.resolve().map_err(|e| e.to_string())?;
    let kind: AssignmentKind = kind.parse().map_err(|e: hilbloc::Error| e.to_string())?;
    let opts = LimitOptions::default();
    let z = series_with(kind, &g.surface, &g.bundle, order, &opts).map_err(|e| e.to_string())?;
    let exponent = if kind != AssignmentKind::T {
        None
    } else if g.surface.is_complete() {
        Some(delta(&intersection_numbers(&g.surface, &g.bundle, None).map_err(|e| e.to_string())?))
    } else {
        let inv = equivariant_invariants(&g.surface, &g.bundle, None).map_err(|e| e.to_string())?;
        Some(qi(inv.e - inv.mk + inv.m2))
    };
    let want = exponent.as_ref().map(|x| xi_pow(x, order));
    Ok(json!({
        "kind": kind.to_string(),
        "exponent": exponent.as_ref().map(fmt_q),
        "rows": rows(&z, want.as_ref()),
    }))
}

/// `Z(S/C)` for a complete surface with a relative ray.
pub fn relative_value(geometry: &str, order: usize) -> Result<Value, String> {
    check_order(order)?;
    let g = spec(geometry)?.resolve().map_err(|e| e.to_string())?;
    if !g.surface.is_complete() || g.relative.is_none() {
        return Err("needs a complete surface and a relative ray".into());
    }
    let inv = intersection_numbers(&g.surface, &g.bundle, g.relative).map_err(|e| e.to_string())?;
    let (c2, mc) = (inv.c2.unwrap_or(0), inv.mc.unwrap_or(0));
    let (tot, tm) = line_bundle_total_space(c2, mc);
    let opts = LimitOptions::default();
    let run = || -> hilbloc::Result<(QSeries, hilbloc::BigRational)> {
        let z_abs = series_with(AssignmentKind::T, &g.surface, &g.bundle, order, &opts)?;
        let z_normal = series_with(AssignmentKind::T, &tot, &tm, order, &opts)?;
        Ok((relative_series(&z_abs, &z_normal)?, eta(&RelativeGeometry::from_invariants(&inv)?)))
    };
    let (z, e) = run().map_err(|e| e.to_string())?;
    Ok(json!({
        "c2": c2,
        "mc": mc,
        "exponent": fmt_q(&e),
        "rows": rows(&z, Some(&xi_pow(&e, order))),
    }))
}

pub fn dt_value(max_degree: i32, order: usize) -> Result<Value, String> {
    check_order(order)?;
    if !(0..=12).contains(&max_degree) {
        return Err(format!("degree {max_degree} outside 0..=12"));
    }
    let mut out = Vec::new();
    for d in 0..=i64::from(max_degree) {
        let e = dt_exponent(d).map_err(|e| e.to_string())?;
        let z = dt_series(d, order).map_err(|e| e.to_string())?;
        out.push(json!({ "d": d, "exponent": fmt_q(&e), "series": z }));
    }
    Ok(Value::Array(out))
}

fn to_js(r: Result<Value, String>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn series(geometry: &str, kind: &str, order: usize) -> Result<String, JsError> {
    to_js(series_value(geometry, kind, order))
}

#[wasm_bindgen]
pub fn relative(geometry: &str, order: usize) -> Result<String, JsError> {
    to_js(relative_value(geometry, order))
}

#[wasm_bindgen]
pub fn dt_table(max_degree: i32, order: usize) -> Result<String, JsError> {
    to_js(dt_value(max_degree, order))
}
