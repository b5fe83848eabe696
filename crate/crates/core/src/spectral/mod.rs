//! Numerical checks: finite tori against Floquet unions, compactly supported
//! eigenfunctions, dispersion roots and band data.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::exactnum::BigRational;
use crate::floquet::{blocks_fiber, cells, dispersion, FloquetError, OperatorSpec};
use crate::models::FlatBandState;

/// Largest torus matrix handed to the dense eigensolver.
pub const MAX_TORUS_SIZE: usize = 4096;

/// Absolute tolerance for comparing sorted spectra.
pub const SPECTRUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error("matrix dimension {size} exceeds the limit {limit}")]
    SizeLimitExceeded { size: usize, limit: usize },
    #[error("expected {expected} repetition counts, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("repetition counts must be positive")]
    NonPositiveRepetition,
    #[error("the operator is not Hermitian")]
    NotHermitian,
    #[error(transparent)]
    Floquet(#[from] FloquetError),
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("finite rational")
}

fn check_hermitian_spec(spec: &OperatorSpec) -> Result<(), SpectralError> {
    spec.validate()?;
    if !spec.is_hermitian() {
        return Err(SpectralError::NotHermitian);
    }
    Ok(())
}

/// max |M − M*| over all entries.
pub fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn sorted_eigenvalues(m: DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// H = A + V on Z^d/(N⊙q) with periodic boundary conditions.
#[derive(Clone, Debug)]
pub struct TorusOperator {
    pub spec: OperatorSpec,
    pub repetitions: Vec<i64>,
    /// Indexed orbit-major, torus cells lexicographic.
    pub matrix: DMatrix<Complex64>,
}

impl TorusOperator {
    pub fn new(spec: &OperatorSpec, repetitions: &[i64]) -> Result<Self, SpectralError> {
        check_hermitian_spec(spec)?;
        let d = spec.dimension;
        if repetitions.len() != d {
            return Err(SpectralError::DimensionMismatch {
                expected: d,
                found: repetitions.len(),
            });
        }
        if repetitions.iter().any(|&n| n < 1) {
            return Err(SpectralError::NonPositiveRepetition);
        }
        let sides: Vec<i64> = spec.period.iter().zip(repetitions).map(|(q, n)| q * n).collect();
        let torus_cells = sides.iter().product::<i64>() as usize;
        let size = spec.orbits * torus_cells;
        if size > MAX_TORUS_SIZE {
            return Err(SpectralError::SizeLimitExceeded {
                size,
                limit: MAX_TORUS_SIZE,
            });
        }
        let index = |c: &[i64]| -> usize {
            c.iter()
                .zip(&sides)
                .fold(0usize, |acc, (&x, &s)| acc * s as usize + x.rem_euclid(s) as usize)
        };
        let sites = cells(&sides);
        let mut m = DMatrix::<Complex64>::zeros(size, size);
        // (Hψ)(i, c) = Σ a^{ij}_n ψ(j, c − n)
        for ((i, j, n), v) in spec.effective_hopping() {
            let v = to_f64(&v);
            for src in &sites {
                let dst: Vec<i64> = src.iter().zip(&n).map(|(a, b)| a + b).collect();
                m[(i * torus_cells + index(&dst), j * torus_cells + index(src))] += Complex64::new(v, 0.0);
            }
        }
        for ((o, w), v) in &spec.potential {
            let v = to_f64(v);
            for c in &sites {
                if c.iter().zip(&spec.period).zip(w).all(|((x, q), y)| x.rem_euclid(*q) == *y) {
                    let r = o * torus_cells + index(c);
                    m[(r, r)] += Complex64::new(v, 0.0);
                }
            }
        }
        Ok(TorusOperator {
            spec: spec.clone(),
            repetitions: repetitions.to_vec(),
            matrix: m,
        })
    }

    pub fn spectrum(&self) -> Vec<f64> {
        sorted_eigenvalues(self.matrix.clone())
    }
}

pub fn torus_spectrum(spec: &OperatorSpec, repetitions: &[i64]) -> Result<Vec<f64>, SpectralError> {
    Ok(TorusOperator::new(spec, repetitions)?.spectrum())
}

/// The momenta k_j = m_j/(N_j q_j), 0 ≤ m_j < N_j, in lexicographic order.
pub fn torus_momenta(period: &[i64], repetitions: &[i64]) -> Vec<Vec<f64>> {
    cells(repetitions)
        .into_iter()
        .map(|m| {
            m.iter()
                .zip(period.iter().zip(repetitions))
                .map(|(&mj, (&q, &n))| mj as f64 / (n * q) as f64)
                .collect()
        })
        .collect()
}

/// Union of the spectra of D_z + B_V over the torus momenta.
pub fn floquet_union(spec: &OperatorSpec, repetitions: &[i64]) -> Result<Vec<f64>, SpectralError> {
    check_hermitian_spec(spec)?;
    if repetitions.len() != spec.dimension {
        return Err(SpectralError::DimensionMismatch {
            expected: spec.dimension,
            found: repetitions.len(),
        });
    }
    if repetitions.iter().any(|&n| n < 1) {
        return Err(SpectralError::NonPositiveRepetition);
    }
    let size = spec.fiber_size() * repetitions.iter().product::<i64>() as usize;
    if size > MAX_TORUS_SIZE {
        return Err(SpectralError::SizeLimitExceeded {
            size,
            limit: MAX_TORUS_SIZE,
        });
    }
    let ks = torus_momenta(&spec.period, repetitions);
    let parts: Vec<Vec<f64>> = ks.par_iter().map(|k| sorted_eigenvalues(blocks_fiber(spec, k))).collect();
    let mut all: Vec<f64> = parts.into_iter().flatten().collect();
    all.sort_by(f64::total_cmp);
    Ok(all)
}

/// Largest elementwise gap between two sorted sequences, infinite on a
/// length mismatch.
pub fn max_deviation(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// (H − λ₀)ψ on the neighborhood of the support, in exact arithmetic.
pub fn apply_shifted(spec: &OperatorSpec, state: &FlatBandState, lambda0: &BigRational) -> BTreeMap<(usize, Vec<i64>), BigRational> {
    let mut out: BTreeMap<(usize, Vec<i64>), BigRational> = BTreeMap::new();
    let hops = spec.effective_hopping();
    for ((j, c), amp) in &state.amplitudes {
        for ((i, j2, n), a) in &hops {
            if j2 != j {
                continue;
            }
            let dst: Vec<i64> = c.iter().zip(n).map(|(x, y)| x + y).collect();
            *out.entry((*i, dst)).or_insert_with(BigRational::zero) += a * amp;
        }
        let w: Vec<i64> = c.iter().zip(&spec.period).map(|(x, q)| x.rem_euclid(*q)).collect();
        let diag = spec.potential_at(*j, &w) - lambda0;
        *out.entry((*j, c.clone())).or_insert_with(BigRational::zero) += diag * amp;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// True iff (H − λ₀)ψ = 0 identically.
pub fn flat_band_check(spec: &OperatorSpec, state: &FlatBandState, lambda0: &BigRational) -> bool {
    apply_shifted(spec, state, lambda0).is_empty()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootCheck {
    pub samples: usize,
    pub max_residual: f64,
    /// 1 + the largest coefficient magnitude of P̃.
    pub scale: f64,
    pub passed: bool,
}

/// Relative residual bound used by [`dispersion_root_check`].
pub const ROOT_TOL: f64 = 1e-7;

/// Evaluates P̃ at every eigenvalue of D_z + B_V for `samples` random k.
pub fn dispersion_root_check(spec: &OperatorSpec, samples: usize, rng: &mut impl Rng) -> Result<RootCheck, SpectralError> {
    check_hermitian_spec(spec)?;
    let p = dispersion(spec)?;
    let scale = 1.0
        + p.terms()
            .map(|(_, c)| c)
            .flat_map(|c| c.coeffs().iter().map(|x| x.embed().norm()))
            .fold(0.0, f64::max);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let k: Vec<f64> = (0..spec.dimension).map(|_| rng.gen::<f64>()).collect();
        let z: Vec<Complex64> = k.iter().map(|&kj| Complex64::from_polar(1.0, TAU * kj)).collect();
        for e in sorted_eigenvalues(blocks_fiber(spec, &k)) {
            let r = p.lp_eval(&z, Complex64::new(e, 0.0)).map_err(FloquetError::from)?;
            worst = worst.max(r.norm());
        }
    }
    Ok(RootCheck {
        samples,
        max_residual: worst,
        scale,
        passed: worst <= ROOT_TOL * scale,
    })
}

/// Sorted fiber eigenvalues along a path.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BandTable {
    pub dimension: usize,
    pub rows: Vec<(Vec<f64>, Vec<f64>)>,
}

/// Points along the polyline through `path`: `samples` evenly spaced points
/// on each segment, then the final vertex.
pub fn path_points(path: &[Vec<f64>], samples: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let samples = samples.max(1);
    for seg in path.windows(2) {
        for s in 0..samples {
            let t = s as f64 / samples as f64;
            out.push(seg[0].iter().zip(&seg[1]).map(|(a, b)| a + t * (b - a)).collect());
        }
    }
    if let Some(last) = path.last() {
        out.push(last.clone());
    }
    out
}

pub fn band_functions(spec: &OperatorSpec, path: &[Vec<f64>], samples: usize) -> Result<BandTable, SpectralError> {
    check_hermitian_spec(spec)?;
    if let Some(k) = path.iter().find(|k| k.len() != spec.dimension) {
        return Err(SpectralError::DimensionMismatch {
            expected: spec.dimension,
            found: k.len(),
        });
    }
    let points = path_points(path, samples);
    let rows = points
        .par_iter()
        .map(|k| (k.clone(), sorted_eigenvalues(blocks_fiber(spec, k))))
        .collect();
    Ok(BandTable {
        dimension: spec.dimension,
        rows,
    })
}

/// Formats with 12 significant digits.
pub fn format_sig(x: f64) -> String {
    let r: f64 = format!("{x:.11e}").parse().expect("float round trip");
    if r == 0.0 {
        "0".to_string()
    } else {
        r.to_string()
    }
}

impl BandTable {
    pub fn to_csv(&self) -> String {
        let bands = self.rows.first().map_or(0, |r| r.1.len());
        let mut header: Vec<String> = (1..=self.dimension).map(|j| format!("k{j}")).collect();
        header.extend((1..=bands).map(|b| format!("E{b}")));
        let mut out = header.join(",");
        out.push('\n');
        for (k, e) in &self.rows {
            let line: Vec<String> = k.iter().chain(e).map(|&x| format_sig(x)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}
