//! Instance, vector and label files.
//!
//! * CSV instance: a line `n,d,p` (optionally preceded by the literal header
//!   `n,d,p`), then `n` rows of `d` comma-separated decimals.
//! * Binary instance: `LQG1`, `u32 n`, `u32 d`, `f64 p`, then `n·d` row-major
//!   `f64`, all little-endian.
//! * Hard stanza: `hard: case=<1|2> n=<> d=<> l=<> [k=<>] p=<>`.
//! * Binary vector sidecar: `LQV1`, `u32 len`, then `len` little-endian `f64`.
//!
//! Lines starting with `#` and blank lines are ignored in text formats.

use std::fs;
use std::path::Path;

use lqgame::{build_hard_instance, Game, HardCase, HardInstanceSpec, Vector};

use crate::error::{HarnessError, Result};

pub const INSTANCE_MAGIC: &[u8; 4] = b"LQG1";
pub const VECTOR_MAGIC: &[u8; 4] = b"LQV1";

/// A loaded instance, with its generator spec when it came from a stanza.
pub struct LoadedInstance {
    pub game: Game,
    pub hard: Option<HardInstanceSpec>,
}

pub fn load_instance(path: &Path) -> Result<LoadedInstance> {
    let bytes = fs::read(path).map_err(|e| HarnessError::io(path, e))?;
    if bytes.starts_with(INSTANCE_MAGIC) {
        return Ok(LoadedInstance {
            game: parse_binary(path, &bytes)?,
            hard: None,
        });
    }
    let text =
        String::from_utf8(bytes).map_err(|e| HarnessError::parse(path, "offset 0", format!("not UTF-8: {e}")))?;
    let first = content_lines(&text).next();
    match first {
        Some((_, line)) if line.starts_with("hard:") => {
            let (lineno, _) = first.unwrap();
            let spec = parse_hard_stanza(line).map_err(|m| HarnessError::parse(path, format!("line {lineno}"), m))?;
            let game = build_hard_instance(&spec)?;
            Ok(LoadedInstance { game, hard: Some(spec) })
        }
        _ => Ok(LoadedInstance {
            game: parse_csv(path, &text)?,
            hard: None,
        }),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_numbers(path: &Path, lineno: usize, line: &str) -> Result<Vec<f64>> {
    line.split(',')
        .map(|field| {
            let field = field.trim();
            let v: f64 = field
                .parse()
                .map_err(|_| HarnessError::parse(path, format!("line {lineno}"), format!("bad number {field:?}")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(HarnessError::parse(
                    path,
                    format!("line {lineno}"),
                    format!("non-finite value {field:?}"),
                ))
            }
        })
        .collect()
}

fn parse_csv(path: &Path, text: &str) -> Result<Game> {
    let mut lines = content_lines(text).peekable();
    if matches!(lines.peek(), Some((_, l)) if l.replace(' ', "") == "n,d,p") {
        lines.next();
    }
    let (hline, header) = lines
        .next()
        .ok_or_else(|| HarnessError::parse(path, "line 1", "empty instance file"))?;
    let fields = parse_numbers(path, hline, header)?;
    let at_header = |m: &str| HarnessError::parse(path, format!("line {hline}"), m.to_string());
    if fields.len() != 3 {
        return Err(at_header("header must be n,d,p"));
    }
    let (n, d, p) = (fields[0], fields[1], fields[2]);
    if n < 1.0 || d < 1.0 || n.fract() != 0.0 || d.fract() != 0.0 {
        return Err(at_header("n and d must be positive integers"));
    }
    let (n, d) = (n as usize, d as usize);
    let mut data = Vec::with_capacity(n * d);
    let mut rows = 0;
    for (lineno, line) in lines {
        if rows == n {
            return Err(HarnessError::parse(
                path,
                format!("line {lineno}"),
                format!("more than {n} rows"),
            ));
        }
        let row = parse_numbers(path, lineno, line)?;
        if row.len() != d {
            return Err(HarnessError::parse(
                path,
                format!("line {lineno}"),
                format!("expected {d} columns, got {}", row.len()),
            ));
        }
        data.extend(row);
        rows += 1;
    }
    if rows != n {
        return Err(HarnessError::parse(
            path,
            "end of file",
            format!("expected {n} rows, got {rows}"),
        ));
    }
    Ok(Game::dense(n, d, data, p)?)
}

fn parse_binary(path: &Path, bytes: &[u8]) -> Result<Game> {
    let need = |offset: usize, len: usize| {
        if bytes.len() < offset + len {
            Err(HarnessError::parse(path, format!("offset {offset}"), "truncated file"))
        } else {
            Ok(&bytes[offset..offset + len])
        }
    };
    let n = u32::from_le_bytes(need(4, 4)?.try_into().unwrap()) as usize;
    let d = u32::from_le_bytes(need(8, 4)?.try_into().unwrap()) as usize;
    let p = f64::from_le_bytes(need(12, 8)?.try_into().unwrap());
    if n == 0 || d == 0 {
        return Err(HarnessError::parse(path, "offset 4", format!("bad shape {n}x{d}")));
    }
    let body = need(20, n * d * 8)?;
    if bytes.len() != 20 + n * d * 8 {
        return Err(HarnessError::parse(
            path,
            format!("offset {}", 20 + n * d * 8),
            "trailing bytes",
        ));
    }
    let mut data = Vec::with_capacity(n * d);
    for (k, chunk) in body.chunks_exact(8).enumerate() {
        let v = f64::from_le_bytes(chunk.try_into().unwrap());
        if !v.is_finite() {
            return Err(HarnessError::parse(
                path,
                format!("offset {}", 20 + 8 * k),
                "non-finite entry",
            ));
        }
        data.push(v);
    }
    Ok(Game::dense(n, d, data, p)?)
}

/// Parses `hard: case=2 n=8 d=8 l=3 p=2`.
pub fn parse_hard_stanza(line: &str) -> std::result::Result<HardInstanceSpec, String> {
    let body = line.strip_prefix("hard:").ok_or("stanza must start with \"hard:\"")?;
    let (mut case, mut n, mut d, mut l, mut k, mut p) = (None, None, None, None, None, None);
    for token in body.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or(format!("expected key=value, got {token:?}"))?;
        let int = || {
            value
                .parse::<usize>()
                .map_err(|_| format!("bad integer for {key}: {value:?}"))
        };
        match key {
            "case" => case = Some(int()?),
            "n" => n = Some(int()?),
            "d" => d = Some(int()?),
            "l" => l = Some(int()?),
            "k" => k = Some(int()?),
            "p" => {
                p = Some(
                    value
                        .parse::<f64>()
                        .map_err(|_| format!("bad number for p: {value:?}"))?,
                )
            }
            other => return Err(format!("unknown key {other:?}")),
        }
    }
    let missing = |name: &str| format!("missing {name}=");
    let case = HardCase::from_number(case.ok_or(missing("case"))? as u8).map_err(|e| e.to_string())?;
    let spec = HardInstanceSpec {
        case,
        n: n.ok_or(missing("n"))?,
        d: d.ok_or(missing("d"))?,
        l: l.ok_or(missing("l"))?,
        k,
        p: p.ok_or(missing("p"))?,
    };
    spec.validate().map_err(|e| e.to_string())?;
    Ok(spec)
}

pub fn hard_stanza(spec: &HardInstanceSpec) -> String {
    let k = spec.k.map(|k| format!(" k={k}")).unwrap_or_default();
    format!(
        "hard: case={} n={} d={} l={}{k} p={}\n",
        spec.case.number(),
        spec.n,
        spec.d,
        spec.l,
        spec.p
    )
}

pub fn encode_binary(game: &Game) -> Vec<u8> {
    let entries = game.snapshot();
    let mut out = Vec::with_capacity(20 + 8 * entries.len());
    out.extend_from_slice(INSTANCE_MAGIC);
    out.extend_from_slice(&(game.n() as u32).to_le_bytes());
    out.extend_from_slice(&(game.d() as u32).to_le_bytes());
    out.extend_from_slice(&game.row_norm_exponent().to_le_bytes());
    for v in entries {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn save_binary(game: &Game, path: &Path) -> Result<()> {
    if game.n() > u32::MAX as usize || game.d() > u32::MAX as usize {
        return Err(HarnessError::Usage("binary format limits n and d to u32".into()));
    }
    write(path, &encode_binary(game))
}

pub fn save_csv(game: &Game, path: &Path) -> Result<()> {
    let entries = game.snapshot();
    let mut out = format!("n,d,p\n{},{},{}\n", game.n(), game.d(), game.row_norm_exponent());
    for row in entries.chunks(game.d()) {
        let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    write(path, out.as_bytes())
}

pub(crate) fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| HarnessError::io(path, e))
}

/// Rows of comma-separated decimals, all of the same length.
pub fn load_rows(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in content_lines(&text) {
        let row = parse_numbers(path, lineno, line)?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(HarnessError::parse(
                    path,
                    format!("line {lineno}"),
                    format!("expected {} columns, got {}", first.len(), row.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(HarnessError::parse(path, "line 1", "no rows"));
    }
    Ok(rows)
}

/// A single vector, written either as one row or one value per line.
pub fn load_vector(path: &Path) -> Result<Vector> {
    let bytes = fs::read(path).map_err(|e| HarnessError::io(path, e))?;
    if bytes.starts_with(VECTOR_MAGIC) {
        return decode_vector(path, &bytes);
    }
    let rows = load_rows(path)?;
    let coords = if rows.len() == 1 {
        rows.into_iter().next().unwrap()
    } else if rows.iter().all(|r| r.len() == 1) {
        rows.into_iter().map(|r| r[0]).collect()
    } else {
        return Err(HarnessError::parse(
            path,
            "line 1",
            "expected a single row or a single column",
        ));
    };
    Vector::new(coords).map_err(HarnessError::from)
}

/// Labels `+1`/`-1`, comma- or newline-separated.
pub fn load_labels(path: &Path) -> Result<Vec<i8>> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let mut labels = Vec::new();
    for (lineno, line) in content_lines(&text) {
        for field in line.split(',') {
            match field.trim() {
                "1" | "+1" => labels.push(1),
                "-1" => labels.push(-1),
                other => {
                    return Err(HarnessError::parse(
                        path,
                        format!("line {lineno}"),
                        format!("labels must be +1 or -1, got {other:?}"),
                    ))
                }
            }
        }
    }
    Ok(labels)
}

pub fn encode_vector(v: &Vector) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + 8 * v.len());
    out.extend_from_slice(VECTOR_MAGIC);
    out.extend_from_slice(&(v.len() as u32).to_le_bytes());
    for x in v.iter() {
        out.extend_from_slice(&x.to_le_bytes());
    }
    out
}

pub fn decode_vector(path: &Path, bytes: &[u8]) -> Result<Vector> {
    if bytes.len() < 8 || !bytes.starts_with(VECTOR_MAGIC) {
        return Err(HarnessError::parse(path, "offset 0", "bad vector header"));
    }
    let len = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    if bytes.len() != 8 + 8 * len {
        return Err(HarnessError::parse(path, "offset 8", format!("expected {len} entries")));
    }
    let coords = bytes[8..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Vector::new(coords).map_err(HarnessError::from)
}
