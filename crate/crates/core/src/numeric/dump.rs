//! Text dumps of real matrices and of whole codes.
//!
//! A matrix dump is a `rows cols` header followed by one line per row of
//! space-separated values with 17 significant digits. A code directory holds
//! `params.txt`, `f.txt` and one `b_<m1>-<m2>-...txt` per finished set.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;

use crate::codeplan::TieredParams;
use crate::error::{Error, Result};
use crate::numeric::TieredCode;

fn fmt_value(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v:.16e}")
    }
}

pub fn matrix_to_text(m: &DMatrix<f64>) -> String {
    let mut s = format!("{} {}\n", m.nrows(), m.ncols());
    for r in 0..m.nrows() {
        let line: Vec<String> = (0..m.ncols()).map(|c| fmt_value(m[(r, c)])).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

pub fn matrix_from_text(text: &str) -> Result<DMatrix<f64>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix dump".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header `{header}`"))))
        .collect::<Result<_>>()?;
    let [rows, cols] = dims[..] else {
        return Err(Error::Parse(format!("header must be `rows cols`, got `{header}`")));
    };
    let mut values = Vec::with_capacity(rows * cols);
    let mut seen = 0;
    for line in lines {
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad value `{t}`"))))
            .collect::<Result<_>>()?;
        if row.len() != cols {
            return Err(Error::Parse(format!("row {seen} has {} values, expected {cols}", row.len())));
        }
        values.extend(row);
        seen += 1;
    }
    if seen != rows {
        return Err(Error::Parse(format!("{seen} rows, header says {rows}")));
    }
    Ok(DMatrix::from_row_slice(rows, cols, &values))
}

fn set_name(m: &[usize]) -> String {
    let parts: Vec<String> = m.iter().map(|s| s.to_string()).collect();
    format!("b_{}.txt", parts.join("-"))
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Parse(format!("{}: {e}", path.display()))
}

/// Writes a code directory. Output is a pure function of the code.
pub fn write_code(code: &TieredCode, seed: u64, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let p = code.params();
    let params = format!(
        "n1 {}\nn2 {}\nk {}\nc {}\nseed {}\ntol {:e}\n",
        p.n1, p.n2, p.k, p.c, seed, code.tol
    );
    let write = |name: &str, body: String| {
        let path = dir.join(name);
        fs::write(&path, body).map_err(|e| io_err(&path, e))
    };
    write("params.txt", params)?;
    write("f.txt", matrix_to_text(&code.f))?;
    if p.n2 > code.f.nrows() {
        for m in code.finished_sets() {
            write(&set_name(m), matrix_to_text(code.b_for(m)?))?;
        }
    }
    Ok(())
}

/// Reads a code directory written by [`write_code`]. Returns the code and
/// its seed.
pub fn read_code(dir: &Path) -> Result<(TieredCode, u64)> {
    let read = |name: &str| {
        let path = dir.join(name);
        fs::read_to_string(&path).map_err(|e| io_err(&path, e))
    };
    let mut kv = BTreeMap::new();
    for line in read("params.txt")?.lines() {
        let mut it = line.split_whitespace();
        if let (Some(k), Some(v)) = (it.next(), it.next()) {
            kv.insert(k.to_string(), v.to_string());
        }
    }
    let get = |k: &str| -> Result<String> {
        kv.get(k).cloned().ok_or_else(|| Error::Parse(format!("params.txt lacks `{k}`")))
    };
    let num = |k: &str| -> Result<usize> {
        get(k)?.parse().map_err(|_| Error::Parse(format!("bad `{k}` in params.txt")))
    };
    let params = TieredParams::new(num("n1")?, num("n2")?, num("k")?, num("c")?)?;
    let seed: u64 = get("seed")?.parse().map_err(|_| Error::Parse("bad seed".into()))?;
    let tol: f64 = get("tol")?.parse().map_err(|_| Error::Parse("bad tol".into()))?;
    let f = matrix_from_text(&read("f.txt")?)?;
    let mut b = BTreeMap::new();
    if params.n2 > f.nrows() {
        for m in crate::numeric::finished_sets(params.n1, params.c) {
            b.insert(m.clone(), matrix_from_text(&read(&set_name(&m))?)?);
        }
    }
    Ok((TieredCode::from_parts(params, f, b, tol)?, seed))
}
