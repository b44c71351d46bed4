//! JSON reports with 17-significant-digit floats and sorted keys.

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use lqgame::solver::{ETA_FORMULA, IOTA_FORMULA, ITERATIONS_FORMULA};
use lqgame::{Report, RunParams, Vector};
use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::{json, Value};

use crate::error::{HarnessError, Result};
use crate::format::{encode_vector, write};

pub const REPORT_VERSION: u32 = 1;

/// `x̄` is written inline up to this dimension, otherwise to a sidecar file.
pub const INLINE_VECTOR_LIMIT: usize = 1000;

/// Pretty printing with every float in `{:.16e}` form, i.e. 17 significant digits.
struct PreciseFormatter {
    inner: serde_json::ser::PrettyFormatter<'static>,
}

impl Formatter for PreciseFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }
    fn end_object_key<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_key(w)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

/// Serializes `value`; non-finite floats become `null`.
pub fn to_json_string(value: &Value) -> String {
    let mut out = Vec::new();
    let formatter = PreciseFormatter {
        inner: serde_json::ser::PrettyFormatter::with_indent(b"  "),
    };
    let mut ser = serde_json::Serializer::with_formatter(&mut out, formatter);
    value.serialize(&mut ser).expect("serializing a Value cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("JSON is UTF-8")
}

pub fn float(v: f64) -> Value {
    serde_json::Number::from_f64(v)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// Run parameters plus the formulas they came from.
pub fn params_value(params: &RunParams<f64>, n: usize, d: usize) -> Value {
    json!({
        "n": n,
        "d": d,
        "q": params.q.map(float),
        "p": params.p.map(float),
        "epsilon": float(params.epsilon),
        "iterations": params.iterations,
        "eta": float(params.eta),
        "iota": params.iota.map(float),
        "seed": params.seed,
        "formulas": {
            "iterations": ITERATIONS_FORMULA,
            "eta": ETA_FORMULA,
            "iota": IOTA_FORMULA,
        },
    })
}

/// Inline array when `d ≤ 1000`; otherwise a path to an `LQV1` sidecar next to `out`.
pub fn vector_value(x: &Vector, out: Option<&Path>, stem: &str) -> Result<Value> {
    if x.len() <= INLINE_VECTOR_LIMIT {
        return Ok(Value::Array(x.iter().map(|v| float(*v)).collect()));
    }
    let path = sidecar_path(out, stem);
    write(&path, &encode_vector(x))?;
    Ok(json!({ "sidecar": path.display().to_string(), "len": x.len() }))
}

fn sidecar_path(out: Option<&Path>, stem: &str) -> PathBuf {
    match out {
        Some(p) => {
            let base = p.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
            p.with_file_name(format!("{base}.{stem}.lqv"))
        }
        None => PathBuf::from(format!("{stem}.lqv")),
    }
}

/// Fields shared by every solver-mode report.
pub fn solve_fields(report: &Report, n: usize, d: usize, out: Option<&Path>) -> Result<Value> {
    Ok(json!({
        "path": to_value(&report.path),
        "params": params_value(&report.params, n, d),
        "achieved_value": float(report.primal_value),
        "error_bound": float(report.error_bound),
        "queries": report.queries,
        "query_budget": report.iterations as u64 * (n + d) as u64,
        "evaluation_queries": report.evaluation_queries,
        "max_abs_update": float(report.max_abs_update),
        "skipped_primal_steps": report.skipped_primal_steps,
        "wall_ms": float(report.wall_time * 1e3),
        "x_bar": vector_value(&report.x_bar, out, "x_bar")?,
    }))
}

/// Wraps `body` with `version` and `mode`.
pub fn document(mode: &str, mut body: Value) -> Value {
    if let Value::Object(map) = &mut body {
        map.insert("version".into(), json!(REPORT_VERSION));
        map.insert("mode".into(), json!(mode));
    }
    body
}

/// Writes to `path`, or stdout when `path` is `None`.
pub fn emit(value: &Value, path: Option<&Path>) -> Result<()> {
    let text = to_json_string(value);
    match path {
        Some(p) => write(p, text.as_bytes()),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| HarnessError::io("<stdout>", e)),
    }
}
