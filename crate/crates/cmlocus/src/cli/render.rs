//! Table, JSON and CSV renderings of query results.

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::arith::{CompositumResult, FieldSymbol, Form, OrderDisc};
use crate::error::{Error, Result};
use crate::graph::IsogenyGraph;
use crate::locus::{FiberReport, PrimitiveSummary, X1Transfer};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
    Csv,
}

fn int(x: &BigUint) -> Result<Value> {
    x.to_u64()
        .map(Value::from)
        .ok_or_else(|| Error::InvalidArgument(format!("{x} exceeds the 64-bit range of the JSON output")))
}

fn signed(x: &BigInt) -> Result<Value> {
    x.to_i64()
        .map(Value::from)
        .ok_or_else(|| Error::InvalidArgument(format!("{x} exceeds the 64-bit range of the JSON output")))
}

fn field_value(f: &FieldSymbol) -> Value {
    json!({ "base": format!("{:?}", f.base), "m": f.m })
}

fn order_value(o: &OrderDisc) -> Value {
    json!({ "deltaK": o.delta_k, "f": o.f })
}

fn curve_value(m: u64, n: u64) -> Value {
    json!({ "M": m, "N": n })
}

fn to_json(v: &Value) -> String {
    let mut s = v.to_string();
    s.push('\n');
    s
}

/// Field name with the smallest equivalent conductor in brackets when it differs.
fn field_label(f: &FieldSymbol) -> Result<String> {
    let c = f.canonical_m()?;
    Ok(if c == f.m { f.to_string() } else { format!("{f} = {:?}({c})", f.base) })
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let mut s = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ");
        s.truncate(s.trim_end().len());
        s.push('\n');
        s
    };
    let mut s = line(header.to_vec());
    for r in rows {
        s += &line(r.iter().map(|c| c.as_str()).collect());
    }
    s
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s += &r.join(",");
        s.push('\n');
    }
    s
}

/// The JSON document for a fiber.
pub fn fiber_json(report: &FiberReport) -> Result<Value> {
    let classes: Vec<Value> = report
        .merged()
        .iter()
        .map(|(field, d, e, count)| json!({ "field": field_value(field), "d": d, "e": e, "count": count }))
        .collect();
    Ok(json!({
        "curve": curve_value(report.m, report.n),
        "order": order_value(&report.order),
        "classes": classes,
        "checkTotal": int(&report.check_total)?,
        "psiCheck": report.psi_check(),
    }))
}

pub fn fiber(report: &FiberReport, format: Format) -> Result<String> {
    if format == Format::Json {
        return Ok(to_json(&fiber_json(report)?));
    }
    let mut rows = Vec::new();
    for (field, d, e, count) in report.merged() {
        let degree = field.degree()?.to_string();
        let cells = match format {
            Format::Csv => vec![format!("{:?}", field.base), field.m.to_string(), degree],
            _ => vec![field_label(&field)?, degree],
        };
        rows.push([cells, vec![d.to_string(), e.to_string(), count.to_string()]].concat());
    }
    if format == Format::Csv {
        return Ok(csv(&["base", "m", "degree", "d", "e", "count"], &rows));
    }
    let mut s = format!(
        "X0({}, {}) over J_{} (delta_K = {}, f = {})\n",
        report.m, report.n, report.order.delta, report.order.delta_k, report.order.f
    );
    s += &table(&["field", "degree", "d", "e", "count"], &rows);
    s += &format!(
        "sum e*d*count = {}, psi(N)*M*phi(M) = {}: {}\n",
        report.check_total,
        report.expected_total,
        if report.psi_check() { "ok" } else { "MISMATCH" }
    );
    Ok(s)
}

pub fn primitive(order: &OrderDisc, m: u64, n: u64, p: &PrimitiveSummary, format: Format) -> Result<String> {
    let opt = |x: &Option<BigUint>| -> Result<Value> { x.as_ref().map(int).unwrap_or(Ok(Value::Null)) };
    match format {
        Format::Json => {
            let local: Vec<Value> = p
                .local
                .iter()
                .map(|(ell, lf)| json!({ "ell": ell, "case": lf.case, "fields": lf.fields.iter().map(field_value).collect::<Vec<_>>() }))
                .collect();
            let degrees: Vec<Value> = p.degrees.iter().map(int).collect::<Result<_>>()?;
            Ok(to_json(&json!({
                "curve": curve_value(m, n),
                "order": order_value(order),
                "fields": p.fields.iter().map(field_value).collect::<Vec<_>>(),
                "degrees": degrees,
                "s": p.s,
                "b": opt(&p.bold_b)?,
                "c": opt(&p.bold_c)?,
                "local": local,
            })))
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = p
                .fields
                .iter()
                .map(|f| Ok(vec![format!("{:?}", f.base), f.m.to_string(), f.degree()?.to_string()]))
                .collect::<Result<_>>()?;
            Ok(csv(&["base", "m", "degree"], &rows))
        }
        Format::Table => {
            let mut s = format!("primitive residue fields of delta = {} CM points on X0({m}, {n})\n", order.delta);
            let rows: Vec<Vec<String>> = p
                .local
                .iter()
                .map(|(ell, lf)| {
                    let names: Vec<String> = lf.fields.iter().map(|f| f.to_string()).collect();
                    vec![ell.to_string(), lf.case.to_string(), names.join(", ")]
                })
                .collect();
            s += &table(&["prime", "case", "local fields"], &rows);
            let names: Vec<String> = p.fields.iter().map(field_label).collect::<Result<_>>()?;
            let degrees: Vec<String> = p.degrees.iter().map(|d| d.to_string()).collect();
            s += &format!("fields: {}\ndegrees: {}\n", names.join(", "), degrees.join(", "));
            Ok(s)
        }
    }
}

pub fn x1(order: &OrderDisc, m: u64, n: u64, elliptic: bool, t: &X1Transfer, format: Format) -> Result<String> {
    let inert = t.e == 1;
    Ok(match format {
        Format::Json => to_json(&json!({
            "curve": curve_value(m, n),
            "order": order_value(order),
            "elliptic": elliptic,
            "e": t.e,
            "f": t.f,
            "points": t.points,
            "inert": inert,
        })),
        Format::Csv => csv(&["e", "f", "points"], &[vec![t.e.to_string(), t.f.to_string(), t.points.to_string()]]),
        Format::Table => format!(
            "X1({m}, {n}) -> X0({m}, {n}) above a delta = {} point: e={} f={} points={}{}\n",
            order.delta,
            t.e,
            t.f,
            t.points,
            if inert { " (inert)" } else { "" }
        ),
    })
}

pub fn classgroup(order: &OrderDisc, h: u64, two: u64, forms: &[Form], format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let fs: Vec<Value> = forms
                .iter()
                .map(|q| Ok(json!([signed(&q.a)?, signed(&q.b)?, signed(&q.c)?])))
                .collect::<Result<_>>()?;
            Ok(to_json(&json!({
                "disc": signed(&order.delta)?,
                "deltaK": order.delta_k,
                "f": order.f,
                "h": h,
                "twoTorsion": two,
                "forms": fs,
            })))
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> =
                forms.iter().map(|q| vec![q.a.to_string(), q.b.to_string(), q.c.to_string()]).collect();
            Ok(csv(&["a", "b", "c"], &rows))
        }
        Format::Table => {
            let mut s = format!(
                "disc {} = {}^2 * {}: h = {}, 2-torsion = {}\n",
                order.delta, order.f, order.delta_k, h, two
            );
            for q in forms {
                s += &format!("  {q}\n");
            }
            Ok(s)
        }
    }
}

pub fn compositum(fields: &[FieldSymbol], r: &CompositumResult, format: Format) -> Result<String> {
    let degree = r.degree()?;
    Ok(match format {
        Format::Json => to_json(&json!({
            "factors": fields.iter().map(field_value).collect::<Vec<_>>(),
            "closure": field_value(&r.closure),
            "index": r.index,
            "degree": int(&degree)?,
        })),
        Format::Csv => csv(
            &["base", "m", "index", "degree"],
            &[vec![format!("{:?}", r.closure.base), r.closure.m.to_string(), r.index.to_string(), degree.to_string()]],
        ),
        Format::Table => {
            let names: Vec<String> = fields.iter().map(|f| f.to_string()).collect();
            format!(
                "{} has index {} in {} (degree {})\n",
                names.join(" "),
                r.index,
                field_label(&r.closure)?,
                degree
            )
        }
    })
}

pub fn tensor(f1: &FieldSymbol, f2: &FieldSymbol, m: u64, pieces: &[CompositumResult], format: Format) -> Result<String> {
    let rows: Vec<Vec<String>> = pieces
        .iter()
        .map(|p| Ok(vec![format!("{:?}", p.closure.base), p.closure.m.to_string(), p.index.to_string(), p.degree()?.to_string()]))
        .collect::<Result<_>>()?;
    Ok(match format {
        Format::Json => {
            let ps: Vec<Value> = pieces
                .iter()
                .map(|p| Ok(json!({ "closure": field_value(&p.closure), "index": p.index, "degree": int(&p.degree()?)? })))
                .collect::<Result<_>>()?;
            to_json(&json!({ "first": field_value(f1), "second": field_value(f2), "over": m, "pieces": ps }))
        }
        Format::Csv => csv(&["base", "m", "index", "degree"], &rows),
        Format::Table => {
            let mut s = format!("{f1} tensor {f2} over Q({m}):\n");
            s += &table(&["base", "m", "index", "degree"], &rows);
            s
        }
    })
}

pub fn graph(g: &IsogenyGraph, format: Format) -> Result<String> {
    let mut rows = Vec::new();
    for level in 0..=g.depth {
        let real = g.real_vertex_count(level)?;
        rows.push(vec![
            level.to_string(),
            g.level_disc(level).to_string(),
            g.level_counts[level as usize].to_string(),
            real.to_string(),
        ]);
    }
    Ok(match format {
        Format::Json => {
            let levels: Vec<Value> = (0..=g.depth)
                .map(|level| {
                    Ok(json!({
                        "level": level,
                        "disc": signed(&g.level_disc(level))?,
                        "vertices": g.level_counts[level as usize],
                        "real": g.real_vertex_count(level)?,
                    }))
                })
                .collect::<Result<_>>()?;
            to_json(&json!({
                "deltaK": g.delta_k,
                "ell": g.ell,
                "f0": g.f0,
                "depth": g.depth,
                "doubled": g.doubled,
                "levels": levels,
            }))
        }
        Format::Csv => csv(&["level", "disc", "vertices", "real"], &rows),
        Format::Table => {
            let mut s = format!(
                "{}-isogeny graph of delta_K = {}, f0 = {}{}\n",
                g.ell,
                g.delta_k,
                g.f0,
                if g.doubled { " (surface loop unwrapped)" } else { "" }
            );
            s += &table(&["level", "disc", "vertices", "real"], &rows);
            s
        }
    })
}
