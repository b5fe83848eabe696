use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::{block_b, OperatorSpec};

fn to_f64(r: &crate::exactnum::BigRational) -> f64 {
    r.to_f64().expect("finite rational")
}

/// H̃(k) in the delta basis, orbit-major: row (i, w) ↦ i·Q + index(w).
pub fn direct_fiber(spec: &OperatorSpec, k: &[f64]) -> DMatrix<Complex64> {
    let d = spec.dimension;
    let q = &spec.period;
    let cells = spec.cells();
    let big_q = cells.len();
    let index = |w: &[i64]| -> usize { w.iter().zip(q).fold(0usize, |acc, (&x, &qk)| acc * qk as usize + x as usize) };
    let n = spec.fiber_size();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for ((i, j, off), v) in spec.effective_hopping() {
        let v = to_f64(&v);
        for (b, src) in cells.iter().enumerate() {
            let mut w = vec![0i64; d];
            let mut phase = 0.0;
            for t in 0..d {
                let s = src[t] + off[t];
                w[t] = s.rem_euclid(q[t]);
                let l = -s.div_euclid(q[t]);
                phase += (l * q[t]) as f64 * k[t];
            }
            m[(i * big_q + index(&w), j * big_q + b)] += Complex64::from_polar(v, TAU * phase);
        }
    }
    for ((o, w), v) in &spec.potential {
        let r = o * big_q + index(w);
        m[(r, r)] += Complex64::new(to_f64(v), 0.0);
    }
    m
}

/// D_z + B_V at z = exp(2πik), cell-major: row (w, i) ↦ index(w)·ν + i.
pub fn blocks_fiber(spec: &OperatorSpec, k: &[f64]) -> DMatrix<Complex64> {
    let nu = spec.orbits;
    let q = &spec.period;
    let cells = spec.cells();
    let n = spec.fiber_size();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    let hops = spec.effective_hopping();
    for (a, w) in cells.iter().enumerate() {
        for ((i, j, off), v) in &hops {
            // a^{ij}_n (μ_w⊙z)^{−n}
            let phase: f64 = (0..q.len())
                .map(|t| -(w[t] as f64 / q[t] as f64 + k[t]) * off[t] as f64)
                .sum();
            m[(a * nu + i, a * nu + j)] += Complex64::from_polar(to_f64(v), TAU * phase);
        }
    }
    for (a, row) in block_b(spec).iter().enumerate() {
        for (b, diag) in row.iter().enumerate() {
            for (j, c) in diag.iter().enumerate() {
                if !c.is_zero() {
                    m[(a * nu + j, b * nu + j)] += c.embed();
                }
            }
        }
    }
    m
}
