use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hilbloc::exact::{fmt_q, parse_q};
use hilbloc::geometry::{load, Geometry, GeometrySpec};
use hilbloc::identities::{dt_exponent, dt_series, epsilon_tilde, eta, relative_series, rubber_ratio, RelativeGeometry, RuledData};
use hilbloc::localize::{equivariant_invariants, integrate_with, series_with, Limit};
use hilbloc::toric::{fiber_lift, intersection_numbers, line_bundle_total_space};
use hilbloc::universal::{absolute_family, fit_absolute, fit_relative_normal, relative_normal_family, SampleFamily};
use hilbloc::verify::run_all;
use hilbloc::{xi_pow, AssignmentKind, LimitOptions, QSeries, SurfaceInvariants};
use serde_json::json;

#[derive(Parser)]
#[command(name = "hilbloc", version, about = "Exact localization on Hilbert schemes of points of toric surfaces")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for the term sums.
    #[arg(long, env = "HILBLOC_WORKERS", global = true)]
    workers: Option<usize>,
    /// Comma-separated slopes `ρ` tried in order, e.g. `2,3/2,5/3`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    directions: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct GeometryArgs {
    /// JSON or TOML geometry file.
    #[arg(long, conflicts_with_all = ["surface", "rays"])]
    geometry: Option<PathBuf>,
    /// p2, p1xp1, hirzebruch or total_space.
    #[arg(long)]
    surface: Option<String>,
    /// Explicit fan, e.g. `1,0;0,1;-1,-1`.
    #[arg(long, conflicts_with = "surface", allow_hyphen_values = true)]
    rays: Option<String>,
    /// Hirzebruch parameter, or the degree of the line bundle for total_space.
    #[arg(short, long, allow_hyphen_values = true)]
    a: Option<i64>,
    /// Degree of the pulled-back bundle on total_space.
    #[arg(long, allow_hyphen_values = true)]
    degree: Option<i64>,
    /// Ray coefficients of the line bundle, e.g. `1,0,0`.
    #[arg(long, allow_hyphen_values = true)]
    bundle: Option<String>,
    /// Ray index of the relative divisor.
    #[arg(long)]
    relative: Option<usize>,
    /// Character twisting the linearization, e.g. `0,1`.
    #[arg(long, allow_hyphen_values = true)]
    lift: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Generating series Σ q^n ∫ over Hilb^n.
    Series {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long, default_value = "t")]
        kind: AssignmentKind,
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// A single integral, reporting poles instead of failing on them.
    Integrate {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long, default_value = "t")]
        kind: AssignmentKind,
        #[arg(short, long)]
        n: usize,
        /// Treat a pole as an expected outcome.
        #[arg(long)]
        expect_pole: bool,
    },
    /// Series relative to an invariant curve: Z(S) / Z(normal bundle).
    Relative {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Ratio of the two lifts on the total space of O(a) over P^1.
    Rubber {
        #[arg(short, long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        degree: i64,
        /// Fiber degree of the lift at infinity.
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        mf: i64,
        #[arg(long, default_value_t = 3)]
        order: usize,
    },
    /// Fits a universal polynomial from localization samples.
    Fit {
        #[arg(long, default_value = "seg")]
        kind: AssignmentKind,
        #[arg(short, long)]
        n: usize,
        /// Fit in the normal-bundle variables C², M·C instead.
        #[arg(long)]
        relative: bool,
    },
    /// Relative invariants of P³ against surfaces of the given degrees.
    Dt {
        /// A degree or a range such as `0..4` (inclusive).
        #[arg(long, default_value = "0..4")]
        degree: String,
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Runs the acceptance criteria.
    Verify {
        /// Comma-separated ids, e.g. `A1,A4`.
        #[arg(long)]
        only: Option<String>,
    },
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<i64>().with_context(|| format!("bad integer {t:?}")))
        .collect()
}

fn parse_pair(s: &str) -> Result<[i64; 2]> {
    match parse_ints(s)?.as_slice() {
        &[x, y] => Ok([x, y]),
        _ => bail!("expected two integers, got {s:?}"),
    }
}

impl GeometryArgs {
    fn resolve(&self) -> Result<Geometry> {
        if let Some(path) = &self.geometry {
            return Ok(load(path)?);
        }
        let rays = match &self.rays {
            Some(r) => Some(r.split(';').map(parse_pair).collect::<Result<Vec<_>>>()?),
            None => None,
        };
        let spec = GeometrySpec {
            surface: self.surface.clone().or_else(|| rays.is_none().then(|| "p2".to_string())),
            a: self.a,
            degree: self.degree,
            rays,
            bundle: self.bundle.as_deref().map(parse_ints).transpose()?,
            relative: self.relative,
            lift: self.lift.as_deref().map(parse_pair).transpose()?,
        };
        Ok(spec.resolve()?)
    }
}

impl Global {
    fn options(&self) -> Result<LimitOptions> {
        let mut opts = LimitOptions::default();
        if let Some(w) = self.workers {
            opts = opts.workers(w);
        }
        if let Some(d) = &self.directions {
            let dirs = d
                .split(',')
                .map(|t| parse_q(t).with_context(|| format!("bad slope {t:?}")))
                .collect::<Result<Vec<_>>>()?;
            if dirs.len() < 2 {
                bail!("need at least two directions");
            }
            opts = opts.directions(dirs);
        }
        Ok(opts)
    }
}

fn invariants(g: &Geometry) -> Result<SurfaceInvariants> {
    Ok(if g.surface.is_complete() {
        intersection_numbers(&g.surface, &g.bundle, g.relative)?
    } else {
        equivariant_invariants(&g.surface, &g.bundle, g.relative)?
    })
}

/// A table that renders as aligned text, CSV, or a JSON array of objects.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn plain(&self) -> String {
        let widths: Vec<usize> = (0..self.header.len())
            .map(|i| self.rows.iter().map(|r| r[i].len()).chain([self.header[i].len()]).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        let line = |cells: Vec<&str>| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        writeln!(out, "{}", line(self.header.clone())).unwrap();
        for r in &self.rows {
            writeln!(out, "{}", line(r.iter().map(String::as_str).collect())).unwrap();
        }
        out
    }

    fn csv(&self) -> String {
        let mut out = self.header.join(",") + "\n";
        for r in &self.rows {
            out += &r.join(",");
            out.push('\n');
        }
        out
    }

    fn json(&self) -> serde_json::Value {
        self.rows
            .iter()
            .map(|r| {
                self.header
                    .iter()
                    .zip(r)
                    .map(|(h, c)| (h.to_string(), json!(c)))
                    .collect::<serde_json::Map<_, _>>()
            })
            .collect()
    }
}

struct Output {
    text: String,
    ok: bool,
}

fn render(format: Format, table: &Table, summary: &str, extra: serde_json::Value) -> String {
    match format {
        Format::Plain => {
            let mut s = table.plain();
            if !summary.is_empty() {
                s += summary;
                s.push('\n');
            }
            s
        }
        Format::Csv => table.csv(),
        Format::Json => {
            let mut v = extra;
            v["rows"] = table.json();
            serde_json::to_string_pretty(&v).unwrap() + "\n"
        }
    }
}

fn compare_table(got: &QSeries, want: &QSeries, label: &'static str) -> (Table, bool) {
    let mut t = Table::new(vec!["n", "computed", label, "match"]);
    for n in 0..=got.order() {
        let (a, b) = (got.coeff(n), want.coeff(n));
        t.push(vec![n.to_string(), fmt_q(a), fmt_q(b), (a == b).to_string()]);
    }
    (t, got == want)
}

fn series_cmd(g: &Global, geo: &GeometryArgs, kind: AssignmentKind, order: usize) -> Result<Output> {
    let geom = geo.resolve()?;
    let z = series_with(kind, &geom.surface, &geom.bundle, order, &g.options()?)?;
    let mut t = Table::new(vec!["n", "value"]);
    for (n, c) in z.coeffs().iter().enumerate() {
        t.push(vec![n.to_string(), fmt_q(c)]);
    }
    let extra = json!({ "kind": kind.to_string(), "series": z });
    Ok(Output {
        text: render(g.format, &t, "", extra),
        ok: true,
    })
}

fn integrate_cmd(g: &Global, geo: &GeometryArgs, kind: AssignmentKind, n: usize, expect_pole: bool) -> Result<Output> {
    let geom = geo.resolve()?;
    let opts = LimitOptions {
        expect_pole,
        ..g.options()?
    };
    let rep = integrate_with(kind, &geom.surface, &geom.bundle, n, &opts)?;
    let (value, pole) = match &rep.limit {
        Limit::Value(v) => (fmt_q(v), None),
        Limit::Pole { order, principal } => (
            format!("pole of order {order}"),
            Some(principal.iter().map(fmt_q).collect::<Vec<_>>()),
        ),
    };
    let mut t = Table::new(vec!["kind", "n", "value", "directions"]);
    let used = rep.used.iter().map(fmt_q).collect::<Vec<_>>().join(" ");
    t.push(vec![kind.to_string(), n.to_string(), value.clone(), used]);
    let extra = json!({ "kind": kind.to_string(), "n": n, "value": value, "principal_part": pole });
    Ok(Output {
        text: render(g.format, &t, "", extra),
        ok: pole.is_none() || expect_pole,
    })
}

fn relative_cmd(g: &Global, geo: &GeometryArgs, order: usize) -> Result<Output> {
    let geom = geo.resolve()?;
    if geom.relative.is_none() {
        bail!("relative needs a divisor (--relative RAY)");
    }
    if !geom.surface.is_complete() {
        bail!("relative needs a complete surface");
    }
    let opts = g.options()?;
    let inv = invariants(&geom)?;
    let (c2, mc) = (inv.c2.unwrap_or(0), inv.mc.unwrap_or(0));
    let (tot, tm) = line_bundle_total_space(c2, mc);
    let z_abs = series_with(AssignmentKind::T, &geom.surface, &geom.bundle, order, &opts)?;
    let z_normal = series_with(AssignmentKind::T, &tot, &tm, order, &opts)?;
    let z_rel = relative_series(&z_abs, &z_normal)?;
    let e = eta(&RelativeGeometry::from_invariants(&inv)?);
    let (t, ok) = compare_table(&z_rel, &xi_pow(&e, order), "closed_form");
    let summary = format!("C^2 = {c2}, M.C = {mc}, exponent {}", fmt_q(&e));
    let extra = json!({ "c2": c2, "mc": mc, "exponent": fmt_q(&e), "series": z_rel, "agrees": ok });
    Ok(Output {
        text: render(g.format, &t, &summary, extra),
        ok,
    })
}

fn rubber_cmd(g: &Global, a: i64, degree: i64, mf: i64, order: usize) -> Result<Output> {
    let opts = g.options()?;
    let (s, m) = line_bundle_total_space(a, degree);
    let z_zero = series_with(AssignmentKind::T, &s, &m, order, &opts)?;
    let z_inf = series_with(AssignmentKind::T, &s, &fiber_lift(m, mf), order, &opts)?;
    let ratio = rubber_ratio(&z_inf, &z_zero)?;
    let et = epsilon_tilde(&RuledData::new(0, -a, mf, degree));
    let (t, ok) = compare_table(&ratio, &xi_pow(&et, order), "closed_form");
    let summary = format!("exponent {}", fmt_q(&et));
    let extra = json!({ "exponent": fmt_q(&et), "series": ratio, "agrees": ok });
    Ok(Output {
        text: render(g.format, &t, &summary, extra),
        ok,
    })
}

fn fit_cmd(g: &Global, kind: AssignmentKind, n: usize, relative: bool) -> Result<Output> {
    let opts = g.options()?;
    let fam: SampleFamily = if relative {
        relative_normal_family(kind, n, &opts)?
    } else {
        absolute_family(kind, n, &opts)?
    };
    let p = if relative { fit_relative_normal(n, &fam)? } else { fit_absolute(n, &fam)? };
    let text = match g.format {
        Format::Json => serde_json::to_string_pretty(&p)? + "\n",
        Format::Csv => {
            let mut t = Table::new(vec!["exponents", "coeff"]);
            for (e, c) in p.terms() {
                t.push(vec![e.iter().map(u32::to_string).collect::<Vec<_>>().join(" "), fmt_q(c)]);
            }
            t.csv()
        }
        Format::Plain => format!("{p}\n({} samples)\n", fam.len()),
    };
    Ok(Output { text, ok: true })
}

fn parse_degrees(s: &str) -> Result<Vec<i64>> {
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: i64 = lo.trim().parse().context("range start")?;
        let hi: i64 = hi.trim().trim_start_matches('=').parse().context("range end")?;
        if hi < lo {
            bail!("empty range {s}");
        }
        Ok((lo..=hi).collect())
    } else {
        parse_ints(s)
    }
}

fn dt_cmd(g: &Global, degree: &str, order: usize) -> Result<Output> {
    let mut header = vec!["d", "exponent"];
    const COLS: [&str; 9] = ["q0", "q1", "q2", "q3", "q4", "q5", "q6", "q7", "q8"];
    if order >= COLS.len() {
        bail!("order above {} not tabulated", COLS.len() - 1);
    }
    header.extend_from_slice(&COLS[..=order]);
    let mut t = Table::new(header);
    for d in parse_degrees(degree)? {
        let e = dt_exponent(d)?;
        let z = dt_series(d, order)?;
        let mut row = vec![d.to_string(), fmt_q(&e)];
        row.extend(z.to_strings());
        t.push(row);
    }
    Ok(Output {
        text: render(g.format, &t, "", json!({})),
        ok: true,
    })
}

fn verify_cmd(g: &Global, only: Option<&str>) -> Result<Output> {
    let opts = g.options()?;
    let wanted: Option<Vec<String>> = only.map(|s| s.split(',').map(|x| x.trim().to_ascii_uppercase()).collect());
    let mut reports = run_all(&opts);
    if let Some(w) = &wanted {
        reports.retain(|r| w.iter().any(|x| x == r.id));
        if reports.is_empty() {
            bail!("no criteria match {w:?}");
        }
    }
    let ok = reports.iter().all(|r| r.passed);
    let mut t = Table::new(vec!["id", "status", "title", "detail"]);
    for r in &reports {
        let status = if r.passed { "PASS" } else { "FAIL" };
        t.push(vec![r.id.to_string(), status.to_string(), r.title.to_string(), r.detail.clone()]);
    }
    let text = match g.format {
        Format::Plain => reports.iter().map(|r| r.to_string() + "\n").collect(),
        _ => render(g.format, &t, "", json!({ "all_passed": ok })),
    };
    Ok(Output { text, ok })
}

fn run(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    match &cli.command {
        Command::Series { geometry, kind, order } => series_cmd(g, geometry, *kind, *order),
        Command::Integrate {
            geometry,
            kind,
            n,
            expect_pole,
        } => integrate_cmd(g, geometry, *kind, *n, *expect_pole),
        Command::Relative { geometry, order } => relative_cmd(g, geometry, *order),
        Command::Rubber { a, degree, mf, order } => rubber_cmd(g, *a, *degree, *mf, *order),
        Command::Fit { kind, n, relative } => fit_cmd(g, *kind, *n, *relative),
        Command::Dt { degree, order } => dt_cmd(g, degree, *order),
        Command::Verify { only } => verify_cmd(g, only.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.global.out {
        Some(path) => std::fs::write(path, &out.text).with_context(|| format!("writing {}", path.display())),
        None => std::io::stdout().write_all(out.text.as_bytes()).context("writing stdout"),
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
