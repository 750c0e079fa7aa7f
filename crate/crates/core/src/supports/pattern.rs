//! Row-pattern grammar for boosted phase-two rows.
//!
//! A pattern is a sequence of literals (`0` for a zero, `*` or `1` for a
//! nonzero entry) and repeated groups `(unit)^{expr}`. Exponent expressions
//! are sums of integers and the variables below:
//!
//! | name | value        |
//! |------|--------------|
//! | `p`  | `n1 - 3(k-1)` |
//! | `k`  | straggler tolerance |
//! | `N`  | block exponent, solved so the row has length `n1` |
//! | `Nc` | `ceil(N/2)`  |
//! | `Nf` | `floor(N/2)` |
//! | `h`  | `p/2` (even p) |
//! | `ho` | `(p-1)/2` (odd p) |
//! | `u`  | case-specific offset |

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Literal(bool),
    Group { unit: Vec<bool>, count: usize },
}

/// Concatenates the atoms into a boolean row and checks its length.
pub fn expand_pattern(atoms: &[Atom], q: usize) -> Result<Vec<bool>> {
    let row = expand_unchecked(atoms);
    if row.len() != q {
        return Err(Error::Pattern(format!(
            "expanded length {} does not match Q={q}",
            row.len()
        )));
    }
    Ok(row)
}

fn expand_unchecked(atoms: &[Atom]) -> Vec<bool> {
    let mut row = Vec::new();
    for atom in atoms {
        match atom {
            Atom::Literal(b) => row.push(*b),
            Atom::Group { unit, count } => {
                for _ in 0..*count {
                    row.extend_from_slice(unit);
                }
            }
        }
    }
    row
}

/// Variable bindings for exponent expressions.
#[derive(Debug, Clone, Copy)]
pub struct Vars {
    pub p: i64,
    pub k: i64,
    pub n: i64,
    pub u: Option<i64>,
}

impl Vars {
    fn get(&self, name: &str) -> Result<i64> {
        Ok(match name {
            "p" => self.p,
            "k" => self.k,
            "N" => self.n,
            "Nc" => (self.n + 1).div_euclid(2),
            "Nf" => self.n.div_euclid(2),
            "h" => self.p.div_euclid(2),
            "ho" => (self.p - 1).div_euclid(2),
            "u" => self
                .u
                .ok_or_else(|| Error::Pattern("offset u is undefined for this case".into()))?,
            other => return Err(Error::Pattern(format!("unknown variable `{other}`"))),
        })
    }
}

fn eval_expr(expr: &str, vars: &Vars) -> Result<i64> {
    let mut total = 0i64;
    let mut sign = 1i64;
    let mut term = String::new();
    let flush = |term: &mut String, sign: i64, total: &mut i64| -> Result<()> {
        let t = term.trim();
        if t.is_empty() {
            return Err(Error::Pattern(format!("empty term in `{expr}`")));
        }
        let v = match t.parse::<i64>() {
            Ok(v) => v,
            Err(_) => vars.get(t)?,
        };
        *total += sign * v;
        term.clear();
        Ok(())
    };
    for ch in expr.chars() {
        match ch {
            '+' | '-' => {
                flush(&mut term, sign, &mut total)?;
                sign = if ch == '+' { 1 } else { -1 };
            }
            _ => term.push(ch),
        }
    }
    flush(&mut term, sign, &mut total)?;
    Ok(total)
}

fn symbol(ch: char) -> Result<bool> {
    match ch {
        '0' => Ok(false),
        '*' | '1' => Ok(true),
        other => Err(Error::Pattern(format!("unexpected symbol `{other}`"))),
    }
}

/// Parses a pattern string into atoms under the given bindings.
///
/// Negative exponents are rejected.
pub fn parse_pattern(text: &str, vars: &Vars) -> Result<Vec<Atom>> {
    let mut atoms = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(ch) = chars.next() {
        match ch {
            c if c.is_whitespace() => {}
            '(' => {
                let mut unit = Vec::new();
                loop {
                    match chars.next() {
                        Some(')') => break,
                        Some(c) => unit.push(symbol(c)?),
                        None => return Err(Error::Pattern(format!("unclosed group in `{text}`"))),
                    }
                }
                if chars.next() != Some('^') || chars.next() != Some('{') {
                    return Err(Error::Pattern(format!("group without exponent in `{text}`")));
                }
                let mut expr = String::new();
                loop {
                    match chars.next() {
                        Some('}') => break,
                        Some(c) => expr.push(c),
                        None => {
                            return Err(Error::Pattern(format!("unclosed exponent in `{text}`")))
                        }
                    }
                }
                let count = eval_expr(&expr, vars)?;
                if count < 0 {
                    return Err(Error::Pattern(format!("negative exponent `{expr}` = {count}")));
                }
                atoms.push(Atom::Group { unit, count: count as usize });
            }
            c => atoms.push(Atom::Literal(symbol(c)?)),
        }
    }
    Ok(atoms)
}

const R1: &str = "(0**)^{p+1} (0*)^{N} 0 (*)^{k-1}";
const R2: &str = "0 (*0)^{N} (**0)^{p+1} (*)^{k-1}";
const R3: &str = "* (0*)^{Nc+1} (0**)^{p-1} (0*)^{Nf+2} (*)^{k-1}";
const R4: &str = "(0**)^{p} (0*)^{N+2} (*)^{k-1}";
const R5: &str = "(*0)^{N+2} (**0)^{p} (*)^{k-1}";
const R6: &str = "0 * (**0)^{h-1} (*0)^{N+1} * (0**)^{h} * 0 (*)^{k-1}";
const R7: &str = "0 * (**0)^{h} * (0*)^{N+1} (0**)^{h-1} * 0 (*)^{k-1}";
const R8: &str = "0 * (**0)^{p-1} (*0)^{N+2} * (*)^{k-1}";
const R9: &str = "* (0*)^{N+2} (0**)^{p-1} * 0 (*)^{k-1}";
const R10: &str = "0 * (**0)^{ho} (*0)^{N+1} * (0**)^{ho} * 0 (*)^{k-1}";
const R11: &str = "0 * (**0)^{u} (*0)^{N+1} 1 (0**)^{p-1-u} * 0 (*)^{k-1}";
const R12: &str = "0 * (**0)^{p-1-u} (*0)^{N+1} 1 (0**)^{u} * 0 (*)^{k-1}";
const R11S: &str = "0 * (**0)^{u} (*0)^{N+1} * (0**)^{p-1-u} * 0 (*)^{k-1}";
const R12S: &str = "0 * (**0)^{p-1-u} (*0)^{N+1} * (0**)^{u} * 0 (*)^{k-1}";

fn offset_five(p_prime: i64) -> Option<i64> {
    match p_prime.rem_euclid(6) {
        1 => Some((p_prime - 7) / 3),
        3 => Some((p_prime - 3) / 3),
        5 => Some((p_prime - 5) / 3),
        _ => None,
    }
}

fn offset_six(p_prime: i64) -> Option<i64> {
    match p_prime.rem_euclid(6) {
        1 => Some((p_prime + 2) / 3),
        3 => Some((p_prime - 3) / 3),
        5 => Some((p_prime - 2) / 3),
        _ => None,
    }
}

/// Row templates (and the offset `u`, if used) for a C* case.
pub fn cstar_templates(p: usize, p_prime: usize, cstar: usize) -> Result<(Vec<&'static str>, Option<i64>)> {
    let even = p % 2 == 0;
    let r3 = p_prime % 3;
    let undefined = || {
        Err(Error::Pattern(format!(
            "no row template for C*={cstar}, p={p}, p'={p_prime}"
        )))
    };
    let rows = match cstar {
        3 => vec![R1, R2, R3],
        4 if r3 != 0 => vec![R1, R2, R4, R5],
        4 if even => {
            // p' in [3, ceil((p-1)/2)]
            let hi = -(1 - p as i64).div_euclid(2);
            if (3..=hi).contains(&(p_prime as i64)) {
                vec![R1, R2, R6, R7]
            } else {
                return undefined();
            }
        }
        4 => vec![R1, R2, R8, R9],
        5 if even => vec![R1, R2, R6, R7, R3],
        5 if r3 != 0 => vec![R1, R2, R4, R5, R10],
        5 => match offset_five(p_prime as i64) {
            Some(u) => return Ok((vec![R1, R2, R3, R11, R12], Some(u))),
            None => return undefined(),
        },
        6 if even => vec![R1, R2, R4, R5, R6, R7],
        6 => match offset_six(p_prime as i64) {
            Some(u) => return Ok((vec![R1, R2, R4, R5, R11S, R12S], Some(u))),
            None => return undefined(),
        },
        _ => return undefined(),
    };
    Ok((rows, None))
}

/// Expands one template, solving for the block exponent `N` so the row has
/// length `q`. Returns the unique `N` and the row.
pub fn solve_template(text: &str, p: usize, k: usize, u: Option<i64>, q: usize) -> Result<(usize, Vec<bool>)> {
    let mut found = Vec::new();
    for n in 0..=q {
        let vars = Vars { p: p as i64, k: k as i64, n: n as i64, u };
        match parse_pattern(text, &vars) {
            Ok(atoms) => {
                let row = expand_unchecked(&atoms);
                if row.len() == q {
                    found.push((n, row));
                }
            }
            Err(Error::Pattern(msg)) if msg.starts_with("negative exponent") => {}
            Err(e) => return Err(e),
        }
    }
    match found.len() {
        1 => Ok(found.pop().unwrap()),
        0 => Err(Error::Pattern(format!("`{text}` has no exponent giving length {q}"))),
        _ => Err(Error::Pattern(format!("`{text}` has several exponents giving length {q}"))),
    }
}

/// Boosted phase-two rows for `(p, p')` and the given C*, with `k = p + p' + 4`
/// and `Q = n1 = 3(k-1) + p`. Each row must have exactly `k - 1` zeros.
pub fn cstar_rows(p: usize, p_prime: usize, cstar: usize) -> Result<Vec<Vec<bool>>> {
    let k = p + p_prime + 4;
    let q = 3 * (k - 1) + p;
    let (templates, u) = cstar_templates(p, p_prime, cstar)?;
    let mut rows = Vec::with_capacity(templates.len());
    for t in templates {
        let (_, row) = solve_template(t, p, k, u, q)?;
        let zeros = row.iter().filter(|b| !**b).count();
        if zeros != k - 1 {
            return Err(Error::Pattern(format!(
                "`{t}` expands with {zeros} zeros, expected {}",
                k - 1
            )));
        }
        rows.push(row);
    }
    Ok(rows)
}
