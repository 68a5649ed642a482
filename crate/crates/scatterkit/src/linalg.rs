//! Small dense complex linear algebra used by the oracles.

use num_complex::Complex64;

/// Solve A x = b by Gaussian elimination with partial pivoting.
/// Returns None if a pivot underflows.
pub(crate) fn solve(a: &[Vec<Complex64>], b: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = b.len();
    let mut m: Vec<Vec<Complex64>> = a.iter().map(|row| row.clone()).collect();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let (piv, piv_norm) = (col..n)
            .map(|r| (r, m[r][col].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))?;
        if piv_norm < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                let sub = f * m[col][c];
                m[r][c] -= sub;
            }
            let sub = f * rhs[col];
            rhs[r] -= sub;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for c in row + 1..n {
            acc -= m[row][c] * x[c];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

/// 1-norm condition estimate: ||A||_1 * ||A^-1||_1 with the inverse built
/// column by column (fine for the 4x4 systems used here).
pub(crate) fn condition_1norm(a: &[Vec<Complex64>]) -> Option<f64> {
    let n = a.len();
    let norm_a = (0..n)
        .map(|c| (0..n).map(|r| a[r][c].norm()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let mut norm_inv = 0.0f64;
    for c in 0..n {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[c] = Complex64::new(1.0, 0.0);
        let col = solve(a, &e)?;
        let s: f64 = col.iter().map(|v| v.norm()).sum();
        norm_inv = norm_inv.max(s);
    }
    Some(norm_a * norm_inv)
}

/// Least squares min ||M c - y|| via normal equations (well-conditioned
/// oscillator bases only).
pub(crate) fn least_squares(m: &[Vec<Complex64>], y: &[Complex64]) -> Option<Vec<Complex64>> {
    let rows = m.len();
    let cols = m[0].len();
    let mut mtm = vec![vec![Complex64::new(0.0, 0.0); cols]; cols];
    let mut mty = vec![Complex64::new(0.0, 0.0); cols];
    for i in 0..cols {
        for j in 0..cols {
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..rows {
                acc += m[r][i].conj() * m[r][j];
            }
            mtm[i][j] = acc;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..rows {
            acc += m[r][i].conj() * y[r];
        }
        mty[i] = acc;
    }
    solve(&mtm, &mty)
}
