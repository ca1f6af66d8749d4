//! Weighted linear least squares through a column-pivoted Householder QR.
//!
//! Rows are scaled by `sqrt(w)` and the scaled design is factored as
//! `A P = Q R`. The numerical rank `r` is the number of diagonal entries of
//! `R` above `RCOND * |R[0,0]|`. When `r` is below the column count the
//! minimum-norm solution is found from a second QR of `[R11 R12]ᵀ`.

/// Relative threshold on `|R[k,k]| / |R[0,0]|` below which a column is
/// treated as dependent.
pub const RCOND: f64 = 1e-10;

/// Dense column-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[c * self.rows + r]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[c * self.rows + r] = v;
    }

    pub fn col(&self, c: usize) -> &[f64] {
        &self.data[c * self.rows..(c + 1) * self.rows]
    }

    fn col_mut(&mut self, c: usize) -> &mut [f64] {
        &mut self.data[c * self.rows..(c + 1) * self.rows]
    }

    /// `A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        for (c, &xc) in x.iter().enumerate().take(self.cols) {
            for (o, a) in out.iter_mut().zip(self.col(c)) {
                *o += a * xc;
            }
        }
        out
    }

    /// `Aᵀ y`.
    pub fn tr_mul_vec(&self, y: &[f64]) -> Vec<f64> {
        (0..self.cols)
            .map(|c| self.col(c).iter().zip(y).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Householder reflectors of a QR factorisation, stored below the diagonal.
struct Householder {
    qr: Matrix,
    tau: Vec<f64>,
    perm: Vec<usize>,
    rank: usize,
}

impl Householder {
    /// Factor `a` in place. With `pivot` the largest remaining column is moved
    /// forward at every step and the factorisation stops at the numerical rank.
    fn factor(mut a: Matrix, pivot: bool) -> Self {
        let (m, n) = (a.rows, a.cols);
        let steps = m.min(n);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut tau = Vec::with_capacity(steps);
        let mut norms: Vec<f64> = (0..n).map(|c| sq_norm(a.col(c))).collect();
        let mut exact = norms.clone();
        let mut rank = steps;
        let mut r00 = 0.0;

        for k in 0..steps {
            if pivot {
                let (best, _) = norms[k..]
                    .iter()
                    .enumerate()
                    .fold((0, -1.0), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
                let p = k + best;
                if p != k {
                    swap_cols(&mut a, k, p);
                    perm.swap(k, p);
                    norms.swap(k, p);
                    exact.swap(k, p);
                }
            }
            let col = &mut a.col_mut(k)[k..];
            let alpha = col[0];
            let sigma = sq_norm(&col[1..]);
            let norm = (alpha * alpha + sigma).sqrt();
            if pivot {
                if k == 0 {
                    r00 = norm;
                }
                if norm <= RCOND * r00 || norm == 0.0 {
                    rank = k;
                    break;
                }
            }
            let (beta, t) = if norm == 0.0 {
                (0.0, 0.0)
            } else {
                let beta = if alpha >= 0.0 { -norm } else { norm };
                let scale = alpha - beta;
                for v in col[1..].iter_mut() {
                    *v /= scale;
                }
                (beta, (beta - alpha) / beta)
            };
            col[0] = beta;
            tau.push(t);
            if t != 0.0 {
                let v: Vec<f64> = a.col(k)[k + 1..].to_vec();
                for c in k + 1..n {
                    let target = &mut a.col_mut(c)[k..];
                    let mut dot = target[0];
                    for (x, vi) in target[1..].iter().zip(&v) {
                        dot += x * vi;
                    }
                    let s = t * dot;
                    target[0] -= s;
                    for (x, vi) in target[1..].iter_mut().zip(&v) {
                        *x -= s * vi;
                    }
                }
            }
            if pivot {
                // Downdate the remaining column norms; recompute when
                // cancellation has eaten most of the value.
                for c in k + 1..n {
                    let r = a.get(k, c);
                    norms[c] -= r * r;
                    if norms[c] <= 1e-8 * exact[c] {
                        norms[c] = sq_norm(&a.col(c)[k + 1..]);
                        exact[c] = norms[c];
                    }
                }
            }
        }
        if !pivot {
            rank = tau.len();
        }
        Householder { qr: a, tau, perm, rank }
    }

    /// Overwrites `b` with `Qᵀ b`.
    fn apply_qt(&self, b: &mut [f64]) {
        for (k, &t) in self.tau.iter().enumerate() {
            if t == 0.0 {
                continue;
            }
            let v = &self.qr.col(k)[k + 1..];
            let mut dot = b[k];
            for (x, vi) in b[k + 1..].iter().zip(v) {
                dot += x * vi;
            }
            let s = t * dot;
            b[k] -= s;
            for (x, vi) in b[k + 1..].iter_mut().zip(v) {
                *x -= s * vi;
            }
        }
    }

    /// Overwrites `b` (length `rows`) with `Q b`.
    fn apply_q(&self, b: &mut [f64]) {
        for (k, &t) in self.tau.iter().enumerate().rev() {
            if t == 0.0 {
                continue;
            }
            let v = &self.qr.col(k)[k + 1..];
            let mut dot = b[k];
            for (x, vi) in b[k + 1..].iter().zip(v) {
                dot += x * vi;
            }
            let s = t * dot;
            b[k] -= s;
            for (x, vi) in b[k + 1..].iter_mut().zip(v) {
                *x -= s * vi;
            }
        }
    }

    #[inline]
    fn r(&self, i: usize, j: usize) -> f64 {
        self.qr.get(i, j)
    }
}

fn sq_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn swap_cols(a: &mut Matrix, i: usize, j: usize) {
    let rows = a.rows;
    for r in 0..rows {
        a.data.swap(i * rows + r, j * rows + r);
    }
}

/// Factorised weighted least-squares problem; solve for any number of
/// right-hand sides.
pub struct WeightedLeastSquares {
    qr: Householder,
    sqrt_w: Vec<f64>,
    /// QR of `[R11 R12]ᵀ`, present when the design is rank deficient.
    min_norm: Option<Householder>,
    cols: usize,
}

impl WeightedLeastSquares {
    pub fn new(design: &Matrix, weights: &[f64]) -> Self {
        assert_eq!(design.rows, weights.len(), "one weight per design row");
        let sqrt_w: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
        let mut scaled = design.clone();
        for c in 0..scaled.cols {
            for (x, s) in scaled.col_mut(c).iter_mut().zip(&sqrt_w) {
                *x *= s;
            }
        }
        let cols = scaled.cols;
        let qr = Householder::factor(scaled, true);
        let min_norm = (qr.rank < cols).then(|| {
            let r = qr.rank;
            let mut upper_t = Matrix::zeros(cols, r);
            for i in 0..r {
                for j in i..cols {
                    upper_t.set(j, i, qr.r(i, j));
                }
            }
            Householder::factor(upper_t, false)
        });
        Self { qr, sqrt_w, min_norm, cols }
    }

    pub fn rank(&self) -> usize {
        self.qr.rank
    }

    pub fn is_full_rank(&self) -> bool {
        self.qr.rank == self.cols
    }

    /// Coefficients minimising `Σ w_i (y_i - a_i·x)²`; minimum-norm when the
    /// design is rank deficient.
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let r = self.qr.rank;
        let mut b: Vec<f64> = rhs.iter().zip(&self.sqrt_w).map(|(y, s)| y * s).collect();
        self.qr.apply_qt(&mut b);
        let c = &b[..r];

        let permuted = match &self.min_norm {
            None => back_substitute(&self.qr, c),
            Some(lq) => {
                // [R11 R12] = R2ᵀ Q2ᵀ, so x = Q2 R2⁻ᵀ c.
                let mut z = vec![0.0; self.cols];
                for i in 0..r {
                    let mut s = c[i];
                    for j in 0..i {
                        s -= lq.r(j, i) * z[j];
                    }
                    z[i] = s / lq.r(i, i);
                }
                lq.apply_q(&mut z);
                z
            }
        };
        let mut x = vec![0.0; self.cols];
        for (k, &p) in self.qr.perm.iter().enumerate() {
            x[p] = permuted[k];
        }
        x
    }
}

fn back_substitute(qr: &Householder, c: &[f64]) -> Vec<f64> {
    let r = c.len();
    let mut x = vec![0.0; r];
    for i in (0..r).rev() {
        let mut s = c[i];
        for j in i + 1..r {
            s -= qr.r(i, j) * x[j];
        }
        x[i] = s / qr.r(i, i);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: usize, cols: usize, row_major: &[f64]) -> Matrix {
        let mut m = Matrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, row_major[r * cols + c]);
            }
        }
        m
    }

    #[test]
    fn fits_a_line() {
        let a = matrix(3, 2, &[1.0, 0.0, 1.0, 1.0, 1.0, 2.0]);
        let ls = WeightedLeastSquares::new(&a, &[1.0; 3]);
        let x = ls.solve(&[2.0, 5.0, 8.0]);
        assert!((x[0] - 2.0).abs() < 1e-12 && (x[1] - 3.0).abs() < 1e-12);
        assert!(ls.is_full_rank());
    }

    #[test]
    fn weights_pull_toward_heavy_rows() {
        // Constant model: the weighted mean.
        let a = matrix(2, 1, &[1.0, 1.0]);
        let ls = WeightedLeastSquares::new(&a, &[3.0, 1.0]);
        let x = ls.solve(&[0.0, 4.0]);
        assert!((x[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn duplicate_column_gives_minimum_norm() {
        let a = matrix(3, 2, &[1.0, 1.0, 2.0, 2.0, 3.0, 3.0]);
        let ls = WeightedLeastSquares::new(&a, &[1.0; 3]);
        assert_eq!(ls.rank(), 1);
        let x = ls.solve(&[2.0, 4.0, 6.0]);
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_column_gets_zero_coefficient() {
        let a = matrix(4, 3, &[1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 2.0, 1.0, 0.0, 3.0]);
        let ls = WeightedLeastSquares::new(&a, &[1.0; 4]);
        assert_eq!(ls.rank(), 2);
        let x = ls.solve(&[1.0, 3.0, 5.0, 7.0]);
        assert!((x[0] - 1.0).abs() < 1e-12);
        assert_eq!(x[1], 0.0);
        assert!((x[2] - 2.0).abs() < 1e-12);
    }
}
