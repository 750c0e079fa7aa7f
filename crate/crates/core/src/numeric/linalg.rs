//! Small dense least squares for span checks.
//!
//! Span checks run millions of times on k-row systems, so this keeps a
//! reusable column-major buffer and a Householder QR with column pivoting
//! instead of allocating a general decomposition per call.

/// Relative cutoff used for numerical rank.
pub const RANK_CUTOFF: f64 = 1e-10;

/// Outcome of solving `x^T R = 1` in the least-squares sense.
#[derive(Debug, Clone, PartialEq)]
pub struct OnesSolve {
    /// One coefficient per input row.
    pub coeffs: Vec<f64>,
    /// `|| x^T R - 1 ||_2`.
    pub residual: f64,
    pub rank_rows: usize,
    /// Rank of the rows with the all-ones row appended.
    pub rank_augmented: usize,
}

impl OnesSolve {
    /// Two-sided membership test: small residual and no rank increase.
    pub fn in_span(&self, tol: f64) -> bool {
        self.residual <= tol && self.rank_rows == self.rank_augmented
    }
}

/// Reusable workspace for [`OnesSolver::solve`].
#[derive(Debug, Default, Clone)]
pub struct OnesSolver {
    a: Vec<f64>,
    b: Vec<f64>,
    perm: Vec<usize>,
    norms: Vec<f64>,
}

impl OnesSolver {
    pub fn new() -> Self {
        Self::default()
    }

    /// Solves for coefficients `x` minimising `|| sum_i x_i rows[i] - 1 ||`.
    ///
    /// Rank-deficient systems get the basic solution (zeros on dependent
    /// rows). The augmented rank comes from a second pivoted factorization
    /// with the all-ones row included among the pivot candidates.
    pub fn solve(&mut self, rows: &[&[f64]]) -> OnesSolve {
        let r = rows.len();
        let q = rows.first().map_or(0, |row| row.len());
        self.load(rows, false);
        self.b.clear();
        self.b.resize(q, 1.0);
        let rank = self.factor(r, q, true);

        // back substitution on the leading rank x rank triangle
        let mut x = vec![0.0; r];
        for i in (0..rank).rev() {
            let mut s = self.b[i];
            for j in i + 1..rank {
                s -= self.a[self.perm[j] * q + i] * x[self.perm[j]];
            }
            x[self.perm[i]] = s / self.norms[self.perm[i]];
        }

        let mut residual2 = 0.0;
        for col in 0..q {
            let mut s = -1.0;
            for (i, row) in rows.iter().enumerate() {
                s += x[i] * row[col];
            }
            residual2 += s * s;
        }

        self.load(rows, true);
        let rank_augmented = self.factor(r + 1, q, false);
        OnesSolve { coeffs: x, residual: residual2.sqrt(), rank_rows: rank, rank_augmented }
    }

    fn load(&mut self, rows: &[&[f64]], with_ones: bool) {
        let q = rows.first().map_or(0, |row| row.len());
        self.a.clear();
        for row in rows {
            debug_assert_eq!(row.len(), q);
            self.a.extend_from_slice(row);
        }
        if with_ones {
            self.a.resize(self.a.len() + q, 1.0);
        }
    }

    /// Householder QR with column pivoting of the `cols` columns in `a`
    /// (each of length `q`), optionally applying the reflections to `b`.
    /// Returns the numerical rank; the R diagonal is left in `norms`.
    fn factor(&mut self, cols: usize, q: usize, rhs: bool) -> usize {
        self.perm.clear();
        self.perm.extend(0..cols);
        self.norms.clear();
        self.norms.extend((0..cols).map(|j| col_norm(&self.a[j * q..(j + 1) * q])));
        let scale = self.norms.iter().copied().fold(0.0, f64::max);
        let cutoff = RANK_CUTOFF * scale;
        let mut rank = 0;
        for step in 0..cols.min(q) {
            // pivot on the largest remaining column norm (below the diagonal)
            let mut best = step;
            let mut best_norm = -1.0;
            for j in step..cols {
                let col = self.perm[j];
                let n = col_norm(&self.a[col * q + step..(col + 1) * q]);
                self.norms[col] = n;
                if n > best_norm {
                    best_norm = n;
                    best = j;
                }
            }
            if best_norm <= cutoff {
                break;
            }
            self.perm.swap(step, best);
            let pc = self.perm[step];
            let (alpha, beta) = {
                let v = &mut self.a[pc * q + step..(pc + 1) * q];
                let x0 = v[0];
                let alpha = if x0 >= 0.0 { -best_norm } else { best_norm };
                v[0] = x0 - alpha;
                let vnorm2: f64 = v.iter().map(|t| t * t).sum();
                (alpha, if vnorm2 > 0.0 { 2.0 / vnorm2 } else { 0.0 })
            };
            for j in step + 1..cols {
                let col = self.perm[j];
                let (v, w) = split_cols(&mut self.a, pc, col, q, step);
                reflect(v, w, beta);
            }
            if rhs {
                let v = &self.a[pc * q + step..(pc + 1) * q];
                reflect(v, &mut self.b[step..], beta);
            }
            self.norms[pc] = alpha;
            rank += 1;
        }
        rank
    }
}

fn col_norm(v: &[f64]) -> f64 {
    v.iter().map(|t| t * t).sum::<f64>().sqrt()
}

/// Borrows rows `step..` of two distinct columns.
fn split_cols(a: &mut [f64], v: usize, w: usize, q: usize, step: usize) -> (&[f64], &mut [f64]) {
    debug_assert_ne!(v, w);
    if v < w {
        let (lo, hi) = a.split_at_mut(w * q);
        (&lo[v * q + step..(v + 1) * q], &mut hi[step..q])
    } else {
        let (lo, hi) = a.split_at_mut(v * q);
        (&hi[step..q], &mut lo[w * q + step..(w + 1) * q])
    }
}

fn reflect(v: &[f64], w: &mut [f64], beta: f64) {
    let d: f64 = v.iter().zip(w.iter()).map(|(a, b)| a * b).sum();
    let f = beta * d;
    for (wi, vi) in w.iter_mut().zip(v) {
        *wi -= f * vi;
    }
}
