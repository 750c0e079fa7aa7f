use std::fmt;

use crate::error::{Error, Result};

/// Boolean rows-by-partitions matrix. Row `r` lists the partitions server
/// `r + 1` touches.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SupportMatrix {
    rows: usize,
    q: usize,
    bits: Vec<bool>,
}

impl SupportMatrix {
    pub fn new(rows: usize, q: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != rows * q {
            return Err(Error::Dimension(format!(
                "{} bits for a {rows}x{q} support",
                bits.len()
            )));
        }
        Ok(Self { rows, q, bits })
    }

    pub fn zeros(rows: usize, q: usize) -> Self {
        Self { rows, q, bits: vec![false; rows * q] }
    }

    pub fn from_rows(q: usize, rows: &[Vec<bool>]) -> Result<Self> {
        let mut bits = Vec::with_capacity(rows.len() * q);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != q {
                return Err(Error::Dimension(format!("row {i} has length {}, expected {q}", r.len())));
            }
            bits.extend_from_slice(r);
        }
        Self::new(rows.len(), q, bits)
    }

    pub fn from_supports(q: usize, supports: &[Vec<usize>]) -> Result<Self> {
        let mut m = Self::zeros(supports.len(), q);
        for (r, s) in supports.iter().enumerate() {
            for &col in s {
                if col >= q {
                    return Err(Error::Dimension(format!("partition {col} out of range for Q={q}")));
                }
                m.set(r, col, true);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn get(&self, r: usize, col: usize) -> bool {
        self.bits[r * self.q + col]
    }

    pub fn set(&mut self, r: usize, col: usize, v: bool) {
        self.bits[r * self.q + col] = v;
    }

    pub fn row(&self, r: usize) -> &[bool] {
        &self.bits[r * self.q..(r + 1) * self.q]
    }

    pub fn row_support(&self, r: usize) -> Vec<usize> {
        self.row(r).iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i).collect()
    }

    pub fn row_supports(&self) -> Vec<Vec<usize>> {
        (0..self.rows).map(|r| self.row_support(r)).collect()
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row(r).iter().filter(|b| **b).count()
    }

    pub fn max_row_weight(&self) -> usize {
        (0..self.rows).map(|r| self.row_weight(r)).max().unwrap_or(0)
    }

    /// Row as a bit mask; requires `q <= 128`.
    pub fn row_mask(&self, r: usize) -> u128 {
        assert!(self.q <= 128, "row masks need Q <= 128");
        self.row(r)
            .iter()
            .enumerate()
            .fold(0u128, |m, (i, b)| if *b { m | (1u128 << i) } else { m })
    }

    pub fn all_rows_nonempty(&self) -> bool {
        (0..self.rows).all(|r| self.row_weight(r) > 0)
    }

    /// Shifts every column index right by `shift` (mod Q).
    pub fn rotate(&self, shift: usize) -> Self {
        let mut out = Self::zeros(self.rows, self.q);
        for r in 0..self.rows {
            for col in 0..self.q {
                if self.get(r, col) {
                    out.set(r, (col + shift) % self.q, true);
                }
            }
        }
        out
    }

    /// First `n` rows.
    pub fn take_rows(&self, n: usize) -> Self {
        let n = n.min(self.rows);
        Self { rows: n, q: self.q, bits: self.bits[..n * self.q].to_vec() }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.q);
        for r in 0..self.rows {
            s.extend(self.row(r).iter().map(|b| if *b { '1' } else { '0' }));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty support text".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header `{header}`"))))
            .collect::<Result<_>>()?;
        let [rows, q] = dims[..] else {
            return Err(Error::Parse(format!("header must be `rows q`, got `{header}`")));
        };
        let mut bits = Vec::with_capacity(rows * q);
        for line in lines {
            let line = line.trim();
            if line.len() != q {
                return Err(Error::Parse(format!("row `{line}` does not have {q} entries")));
            }
            for ch in line.chars() {
                bits.push(match ch {
                    '0' => false,
                    '1' => true,
                    _ => return Err(Error::Parse(format!("unexpected `{ch}` in support row"))),
                });
            }
        }
        Self::new(rows, q, bits)
    }
}

impl fmt::Display for SupportMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
