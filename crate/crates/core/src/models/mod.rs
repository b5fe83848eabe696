//! Catalog lattices (Z^d, Lieb, cycle-decorated Z^d) and the graph import.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::Rng;

use crate::exactnum::{BigInt, BigRational};
use crate::floquet::{HopKey, OperatorSpec};

/// Potential values V(orbit, cell) on the fundamental domain, orbits 0-based.
pub type Potential = BTreeMap<(usize, Vec<i64>), BigRational>;

/// Largest |offset| component accepted by [`from_graph`].
pub const MAX_RANGE: i64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("invalid period {0:?}: expected {1} positive entries")]
    InvalidPeriod(Vec<i64>, usize),
    #[error("invalid arguments: {0}")]
    InvalidArguments(String),
    #[error("edge offset {0:?} exceeds the finite-range bound {MAX_RANGE}")]
    InfiniteRange(Vec<i64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum CatalogModel {
    Zd,
    Lieb,
    Decorated { nu: usize },
}

fn check_period(q: &[i64], d: usize) -> Result<(), ModelError> {
    if q.len() != d || q.iter().any(|&x| x < 1) {
        Err(ModelError::InvalidPeriod(q.to_vec(), d))
    } else {
        Ok(())
    }
}

fn apply_potential(spec: &mut OperatorSpec, v: &Potential) -> Result<(), ModelError> {
    for ((o, w), val) in v {
        let in_w = w.len() == spec.period.len() && w.iter().zip(&spec.period).all(|(&c, &q)| 0 <= c && c < q);
        if *o >= spec.orbits || !in_w {
            return Err(ModelError::InvalidArguments(format!(
                "potential entry (orbit {}, cell {w:?}) outside {} orbits × W",
                o + 1,
                spec.orbits
            )));
        }
        spec.set_potential(*o, w.clone(), val.clone());
    }
    Ok(())
}

fn one() -> BigRational {
    BigRational::from_integer(BigInt::from(1))
}

/// Single-orbit Z^d with nearest-neighbour hops a_{±e_j} = 1.
pub fn zd_model(d: usize, q: &[i64], v: &Potential) -> Result<OperatorSpec, ModelError> {
    if d == 0 {
        return Err(ModelError::InvalidArguments("dimension must be at least 1".into()));
    }
    check_period(q, d)?;
    let mut s = OperatorSpec::new(d, 1, q.to_vec());
    for j in 0..d {
        let mut e = vec![0; d];
        e[j] = 1;
        s.add_hop(0, 0, e, one());
    }
    apply_potential(&mut s, v)?;
    Ok(s)
}

/// The Lieb lattice with orbits (corner, horizontal edge, vertical edge).
pub fn lieb_model(q: &[i64], v: &Potential) -> Result<OperatorSpec, ModelError> {
    check_period(q, 2)?;
    let mut s = OperatorSpec::new(2, 3, q.to_vec());
    s.add_hop(0, 1, vec![0, 0], one());
    s.add_hop(0, 1, vec![1, 0], one());
    s.add_hop(0, 2, vec![0, 0], one());
    s.add_hop(0, 2, vec![0, 1], one());
    apply_potential(&mut s, v)?;
    Ok(s)
}

/// Z^d on orbit 1 with a ν-cycle through orbits 1..ν attached at every
/// lattice point. For ν = 2 the cycle is a doubled edge.
pub fn decorated_model(d: usize, nu: usize, q: &[i64], v: &Potential) -> Result<OperatorSpec, ModelError> {
    if d == 0 || nu < 2 {
        return Err(ModelError::InvalidArguments(format!("need d ≥ 1 and ν ≥ 2, got d={d}, ν={nu}")));
    }
    check_period(q, d)?;
    let mut s = OperatorSpec::new(d, nu, q.to_vec());
    s.symmetrize = false;
    for j in 0..d {
        let mut e = vec![0; d];
        e[j] = 1;
        s.add_hop(0, 0, e.clone(), one());
        e[j] = -1;
        s.add_hop(0, 0, e, one());
    }
    for j in 0..nu {
        let k = (j + 1) % nu;
        s.add_hop(j, k, vec![0; d], one());
        s.add_hop(k, j, vec![0; d], one());
    }
    apply_potential(&mut s, v)?;
    Ok(s)
}

/// A Z^d-periodic graph: each edge (i, j, n) joins v_i to v_j + n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphDescription {
    pub dimension: usize,
    pub orbit_count: usize,
    pub edges: Vec<(usize, usize, Vec<i64>)>,
}

/// Adjacency operator of `g`: a^{ij}_n = ⟨δ_{v_i+n}, A δ_{v_j}⟩, counting
/// edges with multiplicity.
pub fn from_graph(g: &GraphDescription, q: &[i64], v: &Potential) -> Result<OperatorSpec, ModelError> {
    let d = g.dimension;
    if d == 0 || g.orbit_count == 0 {
        return Err(ModelError::InvalidArguments("empty graph".into()));
    }
    check_period(q, d)?;
    let mut s = OperatorSpec::new(d, g.orbit_count, q.to_vec());
    s.symmetrize = false;
    for (i, j, n) in &g.edges {
        if *i >= g.orbit_count || *j >= g.orbit_count || n.len() != d {
            return Err(ModelError::InvalidArguments(format!("bad edge ({}, {}, {n:?})", i + 1, j + 1)));
        }
        if n.iter().any(|x| x.abs() > MAX_RANGE) {
            return Err(ModelError::InfiniteRange(n.clone()));
        }
        s.add_hop(*j, *i, n.clone(), one());
        if !(i == j && n.iter().all(|&x| x == 0)) {
            s.add_hop(*i, *j, n.iter().map(|x| -x).collect(), one());
        }
    }
    apply_potential(&mut s, v)?;
    Ok(s)
}

pub fn zd_graph(d: usize) -> GraphDescription {
    GraphDescription {
        dimension: d,
        orbit_count: 1,
        edges: (0..d)
            .map(|j| {
                let mut e = vec![0; d];
                e[j] = 1;
                (0, 0, e)
            })
            .collect(),
    }
}

pub fn lieb_graph() -> GraphDescription {
    GraphDescription {
        dimension: 2,
        orbit_count: 3,
        edges: vec![
            (0, 1, vec![0, 0]),
            (0, 1, vec![-1, 0]),
            (0, 2, vec![0, 0]),
            (0, 2, vec![0, -1]),
        ],
    }
}

pub fn decorated_graph(d: usize, nu: usize) -> GraphDescription {
    let mut edges: Vec<(usize, usize, Vec<i64>)> = zd_graph(d).edges;
    for j in 0..nu {
        edges.push((j, (j + 1) % nu, vec![0; d]));
    }
    GraphDescription {
        dimension: d,
        orbit_count: nu,
        edges,
    }
}

/// Identifies a catalog model by its effective hopping coefficients; the
/// potential and period are ignored.
pub fn detect_catalog(spec: &OperatorSpec) -> Option<CatalogModel> {
    let eff = spec.effective_hopping();
    let none = Potential::new();
    let q = vec![1; spec.dimension];
    let same = |other: Result<OperatorSpec, ModelError>| other.map(|o| o.effective_hopping() == eff).unwrap_or(false);
    if spec.orbits == 1 && same(zd_model(spec.dimension, &q, &none)) {
        return Some(CatalogModel::Zd);
    }
    if spec.orbits == 3 && spec.dimension == 2 && same(lieb_model(&q, &none)) {
        return Some(CatalogModel::Lieb);
    }
    if spec.orbits >= 2 && same(decorated_model(spec.dimension, spec.orbits, &q, &none)) {
        return Some(CatalogModel::Decorated { nu: spec.orbits });
    }
    None
}

/// Random rational potential p/r with |p| ≤ 9 and 1 ≤ r ≤ 5 on every site.
pub fn random_potential(orbits: usize, q: &[i64], rng: &mut impl Rng) -> Potential {
    let mut v = Potential::new();
    for w in crate::floquet::cells(q) {
        for o in 0..orbits {
            let p: i64 = rng.gen_range(-9..=9);
            let r: i64 = rng.gen_range(1..=5);
            let val = BigRational::new(p.into(), r.into());
            if !val.is_zero() {
                v.insert((o, w.clone()), val);
            }
        }
    }
    v
}

/// Constant potential c on every site.
pub fn constant_potential(orbits: usize, q: &[i64], c: BigRational) -> Potential {
    let mut v = Potential::new();
    if c.is_zero() {
        return v;
    }
    for w in crate::floquet::cells(q) {
        for o in 0..orbits {
            v.insert((o, w.clone()), c.clone());
        }
    }
    v
}

/// A finitely supported function on orbits × Z^d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatBandState {
    pub amplitudes: BTreeMap<(usize, Vec<i64>), BigRational>,
}

impl FlatBandState {
    pub fn translate(&self, n: &[i64]) -> FlatBandState {
        FlatBandState {
            amplitudes: self
                .amplitudes
                .iter()
                .map(|((o, c), v)| ((*o, c.iter().zip(n).map(|(a, b)| a + b).collect()), v.clone()))
                .collect(),
        }
    }
}

/// Lieb vertex n ∈ Z² (coordinates not both odd) to (orbit, cell).
pub fn lieb_vertex_to_site(n: [i64; 2]) -> Option<(usize, Vec<i64>)> {
    let (a, b) = (n[0].rem_euclid(2), n[1].rem_euclid(2));
    let orbit = match (a, b) {
        (0, 0) => 0,
        (1, 0) => 1,
        (0, 1) => 2,
        _ => return None,
    };
    Some((orbit, vec![n[0].div_euclid(2), n[1].div_euclid(2)]))
}

/// Inverse of [`lieb_vertex_to_site`].
pub fn lieb_site_to_vertex(orbit: usize, cell: &[i64]) -> [i64; 2] {
    let off = [[0, 0], [1, 0], [0, 1]][orbit];
    [2 * cell[0] + off[0], 2 * cell[1] + off[1]]
}

/// The compactly supported kernel element of the free Lieb operator:
/// +1 at vertices (0,1), (2,1) and −1 at (1,0), (1,2).
pub fn lieb_flat_band_state() -> FlatBandState {
    let mut amplitudes = BTreeMap::new();
    for (vertex, sign) in [([0, 1], 1), ([2, 1], 1), ([1, 0], -1), ([1, 2], -1)] {
        let site = lieb_vertex_to_site(vertex).expect("Lieb vertex");
        amplitudes.insert(site, BigRational::from_integer(BigInt::from(sign)));
    }
    FlatBandState { amplitudes }
}

/// Effective coefficients as a plain map, for comparisons.
pub fn coefficient_map(spec: &OperatorSpec) -> BTreeMap<HopKey, BigRational> {
    spec.effective_hopping()
}
