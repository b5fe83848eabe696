//! Operator specifications, the symbolic Floquet fiber D_z + B_V − λI, and
//! dispersion polynomials.

mod blocks;
pub mod det;
mod dispersion;
mod fiber;
mod spec_io;

pub use blocks::{block_b, block_d, floquet_matrix, symbol_matrix, FloquetMatrix, SymbolMatrix};
pub use det::DetStrategy;
pub use dispersion::{direct_dispersion, dispersion, dispersion_with, reduce_quotient, DIRECT_ROUTE_THRESHOLD, MAX_FIBER_SIZE};
pub use fiber::{blocks_fiber, direct_fiber};
pub use spec_io::{parse_spec, Violation};

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::Zero;

use crate::exactnum::{ArithError, BigRational, Cyclotomic};
use crate::laurent::LaurentError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FloquetError {
    #[error("invalid operator specification: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidSpec(Vec<Violation>),
    #[error("orbit index {index} out of range 1..={orbits}")]
    InvalidOrbitIndex { index: usize, orbits: usize },
    #[error("fiber dimension {size} exceeds the limit {limit}")]
    SizeLimitExceeded { size: usize, limit: usize },
    #[error("twist invariance fails for w = {w:?}")]
    TwistInvarianceViolated { w: Vec<i64> },
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Key (i, j, n) of a hopping coefficient a^{ij}_n, orbits 0-based.
pub type HopKey = (usize, usize, Vec<i64>);

/// A Z^d-periodic operator A + V given by hopping coefficients a^{ij}_n, a
/// period q and a q-periodic potential. Orbits are 0-based in memory and
/// 1-based in files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorSpec {
    pub dimension: usize,
    pub orbits: usize,
    pub period: Vec<i64>,
    pub symmetrize: bool,
    pub hopping: BTreeMap<HopKey, BigRational>,
    pub potential: BTreeMap<(usize, Vec<i64>), BigRational>,
}

impl OperatorSpec {
    /// An operator with no hops and zero potential.
    pub fn new(dimension: usize, orbits: usize, period: Vec<i64>) -> Self {
        OperatorSpec {
            dimension,
            orbits,
            period,
            symmetrize: true,
            hopping: BTreeMap::new(),
            potential: BTreeMap::new(),
        }
    }

    /// Adds `v` to a^{ij}_n.
    pub fn add_hop(&mut self, i: usize, j: usize, offset: Vec<i64>, v: BigRational) {
        let e = self.hopping.entry((i, j, offset)).or_insert_with(BigRational::zero);
        *e += v;
    }

    pub fn set_potential(&mut self, orbit: usize, cell: Vec<i64>, v: BigRational) {
        if v.is_zero() {
            self.potential.remove(&(orbit, cell));
        } else {
            self.potential.insert((orbit, cell), v);
        }
    }

    /// V(j, w) for w ∈ W; missing entries are zero.
    pub fn potential_at(&self, orbit: usize, cell: &[i64]) -> BigRational {
        self.potential
            .get(&(orbit, cell.to_vec()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Q = q₁⋯q_d.
    pub fn cell_count(&self) -> usize {
        self.period.iter().product::<i64>() as usize
    }

    /// νQ, the dimension of a Floquet fiber.
    pub fn fiber_size(&self) -> usize {
        self.orbits * self.cell_count()
    }

    /// lcm(q), the conductor of every twist factor.
    pub fn conductor(&self) -> u64 {
        self.period.iter().fold(1i64, |a, b| a.lcm(b)) as u64
    }

    /// The fundamental domain W in lexicographic order.
    pub fn cells(&self) -> Vec<Vec<i64>> {
        cells(&self.period)
    }

    /// Checks structural validity, returning every violation found.
    pub fn violations(&self) -> Vec<Violation> {
        spec_io::structural_violations(self)
    }

    pub fn validate(&self) -> Result<(), FloquetError> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(FloquetError::InvalidSpec(v))
        }
    }

    /// The coefficient map a^{ij}_n actually in force: listed entries plus,
    /// when `symmetrize` is set, the implied partners a^{ji}_{−n}.
    pub fn effective_hopping(&self) -> BTreeMap<HopKey, BigRational> {
        let mut out = self.hopping.clone();
        if self.symmetrize {
            for ((i, j, n), v) in &self.hopping {
                let rev = (*j, *i, n.iter().map(|x| -x).collect::<Vec<_>>());
                out.entry(rev).or_insert_with(|| v.clone());
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// True when a^{ji}_{−n} = a^{ij}_n for the effective coefficients, so
    /// that every fiber is Hermitian.
    pub fn is_hermitian(&self) -> bool {
        let eff = self.effective_hopping();
        eff.iter().all(|((i, j, n), v)| {
            let rev = (*j, *i, n.iter().map(|x| -x).collect::<Vec<_>>());
            eff.get(&rev) == Some(v)
        })
    }

    pub fn total_potential(&self) -> BigRational {
        self.potential.values().fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn to_json(&self) -> String {
        spec_io::to_json(self)
    }
}

/// All w with 0 ≤ w_k < q_k, lexicographically.
pub fn cells(period: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &qk in period {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..qk).map(move |x| {
                    let mut v = w.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

/// μ_n with μ_n^j = ζ_{q_j}^{n_j}.
pub fn mu(n: &[i64], q: &[i64]) -> Vec<Cyclotomic> {
    n.iter()
        .zip(q)
        .map(|(&nj, &qj)| Cyclotomic::zeta(qj as u64, nj).expect("period entries are positive"))
        .collect()
}
