//! Exact determinants of matrices with Laurent-polynomial entries.

use std::collections::HashMap;

use num_traits::One;
use rayon::prelude::*;

use crate::exactnum::{BigInt, BigRational, Cyclotomic, LambdaPoly};
use crate::laurent::{Exponent, LaurentPoly};

/// How to expand det(A − λI).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DetStrategy {
    /// Bareiss elimination; `dispersion_with` may also pick the fiber.
    #[default]
    Auto,
    /// Fraction-free elimination over the Laurent ring.
    Bareiss,
    /// Exact evaluation at integer points and tensor Newton interpolation.
    Interpolation,
    /// Laplace expansion; small matrices only.
    Cofactor,
}

/// Largest size accepted by cofactor expansion.
pub const COFACTOR_LIMIT: usize = 8;

pub type Matrix = Vec<Vec<LaurentPoly>>;

/// det(a − λI) for a λ-free matrix `a`.
pub fn char_poly(a: &[Vec<LaurentPoly>], strategy: DetStrategy) -> LaurentPoly {
    let lambda_free = a.iter().flatten().all(|p| p.lambda_degree().unwrap_or(0) == 0);
    let strategy = match strategy {
        DetStrategy::Auto => DetStrategy::Bareiss,
        DetStrategy::Interpolation if !lambda_free => DetStrategy::Bareiss,
        s => s,
    };
    match strategy {
        DetStrategy::Interpolation => char_poly_interpolated(a),
        DetStrategy::Cofactor => cofactor(&minus_lambda(a)),
        _ => bareiss(minus_lambda(a)),
    }
}

fn minus_lambda(a: &[Vec<LaurentPoly>]) -> Matrix {
    let mut m = a.to_vec();
    for (i, row) in m.iter_mut().enumerate() {
        let vars = row[i].num_vars();
        row[i] = &row[i] - &LaurentPoly::lambda(vars);
    }
    m
}

fn vars_of(m: &[Vec<LaurentPoly>]) -> usize {
    m.first().and_then(|r| r.first()).map_or(0, LaurentPoly::num_vars)
}

/// Laplace expansion along the first row.
pub fn cofactor(m: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = m.len();
    assert!(n <= COFACTOR_LIMIT, "cofactor expansion is limited to {COFACTOR_LIMIT}x{COFACTOR_LIMIT}");
    let vars = vars_of(m);
    match n {
        0 => LaurentPoly::one(vars),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = LaurentPoly::zero(vars);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Matrix = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = &m[0][j] * &cofactor(&minor);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Fraction-free Gaussian elimination. Each row is first multiplied by a
/// monomial so that its entries are polynomials; the product of those
/// monomials is divided out at the end.
pub fn bareiss(mut m: Matrix) -> LaurentPoly {
    let n = m.len();
    let vars = vars_of(&m);
    if n == 0 {
        return LaurentPoly::one(vars);
    }
    let mut shift = Exponent::zero(vars);
    for row in m.iter_mut() {
        let Some(lo) = row
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| p.min_exponents().expect("nonzero"))
            .reduce(|a, b| Exponent(a.0.iter().zip(&b.0).map(|(x, y)| *x.min(y)).collect()))
        else {
            return LaurentPoly::zero(vars);
        };
        let neg = Exponent(lo.0.iter().map(|x| -x).collect());
        for p in row.iter_mut() {
            *p = p.shift(&neg);
        }
        shift = shift.add(&lo);
    }

    let mut negate = false;
    let mut prev = LaurentPoly::one(vars);
    for k in 0..n.saturating_sub(1) {
        // Cheapest nonzero pivot in column k; ties go to the upper row.
        let Some(p) = (k..n).filter(|&r| !m[r][k].is_zero()).min_by_key(|&r| (m[r][k].len(), r)) else {
            return LaurentPoly::zero(vars);
        };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        rest.par_iter_mut().for_each(|row| {
            let lead = std::mem::replace(&mut row[k], LaurentPoly::zero(vars));
            for j in k + 1..n {
                let num = if lead.is_zero() {
                    pivot * &row[j]
                } else {
                    &(pivot * &row[j]) - &(&lead * &pivot_row[j])
                };
                row[j] = num.exact_div(&prev).expect("Bareiss quotients are exact");
            }
        });
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].shift(&shift);
    if negate {
        -det
    } else {
        det
    }
}

/// det(M − λI) for a numeric matrix over Q(ζ_N), by reduction to upper
/// Hessenberg form followed by the Hessenberg characteristic recurrence.
pub fn char_poly_numeric(mut h: Vec<Vec<Cyclotomic>>) -> LambdaPoly {
    let n = h.len();
    for j in 0..n.saturating_sub(2) {
        let Some(p) = (j + 1..n).find(|&i| !h[i][j].is_zero()) else {
            continue;
        };
        if p != j + 1 {
            h.swap(p, j + 1);
            for row in h.iter_mut() {
                row.swap(p, j + 1);
            }
        }
        let inv = h[j + 1][j].inv().expect("pivot is nonzero");
        for i in j + 2..n {
            if h[i][j].is_zero() {
                continue;
            }
            let f = &h[i][j] * &inv;
            for c in j..n {
                let t = &f * &h[j + 1][c];
                h[i][c] -= &t;
            }
            for row in h.iter_mut() {
                let t = &f * &row[i];
                row[j + 1] += &t;
            }
        }
    }
    // p_k = det(λI − H_k) for the leading k×k block.
    let mut p: Vec<LambdaPoly> = vec![LambdaPoly::one()];
    for k in 0..n {
        let mut next = &LambdaPoly::lambda() * &p[k] - p[k].scale(&h[k][k]);
        let mut prod = Cyclotomic::one();
        for i in (0..k).rev() {
            prod = &prod * &h[i + 1][i];
            if prod.is_zero() {
                break;
            }
            if !h[i][k].is_zero() {
                next = &next - &p[i].scale(&(&prod * &h[i][k]));
            }
        }
        p.push(next);
    }
    let res = p.pop().expect("nonempty");
    if n % 2 == 1 {
        -res
    } else {
        res
    }
}

fn interpolation_points(count: usize) -> Vec<BigRational> {
    (0..count)
        .map(|i| {
            let k = (i / 2 + 1) as i64;
            BigRational::from_integer(BigInt::from(if i % 2 == 0 { k } else { -k }))
        })
        .collect()
}

/// Converts values at distinct points into monomial coefficients.
fn newton_interpolate(xs: &[BigRational], ys: &[LambdaPoly]) -> Vec<LambdaPoly> {
    let s = xs.len();
    let mut c = ys.to_vec();
    for j in 1..s {
        for i in (j..s).rev() {
            let denom = &xs[i] - &xs[i - j];
            c[i] = (&c[i] - &c[i - 1]).scale_rational(&(BigRational::one() / denom));
        }
    }
    let mut poly = vec![c[s - 1].clone()];
    for i in (0..s - 1).rev() {
        // poly ← poly·(x − x_i) + c_i
        let mut next = vec![LambdaPoly::zero(); poly.len() + 1];
        for (k, a) in poly.iter().enumerate() {
            next[k + 1] = &next[k + 1] + a;
            next[k] = &next[k] - &a.scale_rational(&xs[i]);
        }
        next[0] = &next[0] + &c[i];
        poly = next;
    }
    poly.truncate(s);
    poly
}

fn rational_pow(x: &BigRational, e: i64) -> BigRational {
    let mut r = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        r *= x;
    }
    if e < 0 {
        r.recip()
    } else {
        r
    }
}

/// det(a − λI) by evaluation at integer points of z and interpolation.
pub fn char_poly_interpolated(a: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = a.len();
    let vars = vars_of(a);
    if n == 0 {
        return LaurentPoly::one(vars);
    }
    // Degree bounds from the row-wise exponent ranges; the −λ on the
    // diagonal contributes exponent 0 to every row.
    let mut lo = vec![0i64; vars];
    let mut hi = vec![0i64; vars];
    for row in a {
        let mut rlo = vec![0i64; vars];
        let mut rhi = vec![0i64; vars];
        for p in row.iter().filter(|p| !p.is_zero()) {
            let mn = p.min_exponents().expect("nonzero");
            let mx = p.max_exponents().expect("nonzero");
            for t in 0..vars {
                rlo[t] = rlo[t].min(mn.0[t]);
                rhi[t] = rhi[t].max(mx.0[t]);
            }
        }
        for t in 0..vars {
            lo[t] += rlo[t];
            hi[t] += rhi[t];
        }
    }
    let lens: Vec<usize> = (0..vars).map(|t| (hi[t] - lo[t] + 1) as usize).collect();
    let points: Vec<Vec<BigRational>> = lens.iter().map(|&l| interpolation_points(l)).collect();
    let total: usize = lens.iter().product();

    let entries: Vec<Vec<Vec<(Exponent, Cyclotomic)>>> = a
        .iter()
        .map(|row| {
            row.iter()
                .map(|p| p.terms().map(|(e, c)| (e.clone(), c.coeff(0))).collect())
                .collect()
        })
        .collect();

    let mut values: Vec<LambdaPoly> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut idx = Vec::with_capacity(vars);
            let mut r = flat;
            for t in (0..vars).rev() {
                idx.push(r % lens[t]);
                r /= lens[t];
            }
            idx.reverse();
            let x: Vec<&BigRational> = (0..vars).map(|t| &points[t][idx[t]]).collect();
            let mut cache: HashMap<(usize, i64), BigRational> = HashMap::new();
            let mut pw = |t: usize, e: i64| -> BigRational {
                cache.entry((t, e)).or_insert_with(|| rational_pow(x[t], e)).clone()
            };
            let m: Vec<Vec<Cyclotomic>> = entries
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|terms| {
                            let mut acc = Cyclotomic::zero();
                            for (e, c) in terms {
                                let mut s = BigRational::one();
                                for t in 0..vars {
                                    s *= pw(t, e.0[t]);
                                }
                                acc += &c.scale(&s);
                            }
                            acc
                        })
                        .collect()
                })
                .collect();
            let mut s = BigRational::one();
            for t in 0..vars {
                s *= pw(t, -lo[t]);
            }
            char_poly_numeric(m).scale_rational(&s)
        })
        .collect();

    // Interpolate one axis at a time, in place.
    let mut stride = total;
    for t in 0..vars {
        let len = lens[t];
        stride /= len;
        let block = len * stride;
        for base in (0..total).step_by(block) {
            for off in 0..stride {
                let ys: Vec<LambdaPoly> = (0..len).map(|i| values[base + off + i * stride].clone()).collect();
                for (i, c) in newton_interpolate(&points[t], &ys).into_iter().enumerate() {
                    values[base + off + i * stride] = c;
                }
            }
        }
    }

    let mut out = LaurentPoly::zero(vars);
    for (flat, c) in values.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut e = vec![0i64; vars];
        let mut r = flat;
        for t in (0..vars).rev() {
            e[t] = (r % lens[t]) as i64 + lo[t];
            r /= lens[t];
        }
        out.add_term(Exponent(e), c);
    }
    out
}
