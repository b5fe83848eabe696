use num_rational::BigRational;
use num_traits::Zero;

/// Solves `a · x = b` exactly. `a` is given row-major (one row per equation)
/// and may be overdetermined. Returns `None` when the system is inconsistent;
/// free variables are set to zero.
pub(crate) fn solve_rational(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        b.swap(r, p);
        let inv = BigRational::from_integer(1.into()) / &a[r][c];
        for j in c..cols {
            a[r][j] = &a[r][j] * &inv;
        }
        b[r] = &b[r] * &inv;
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let factor = a[i][c].clone();
            for j in c..cols {
                let t = &factor * &a[r][j];
                a[i][j] -= t;
            }
            let t = &factor * &b[r];
            b[i] -= t;
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if b[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = b[row].clone();
    }
    Some(x)
}
