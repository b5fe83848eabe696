use super::{cells, mu, OperatorSpec};
use crate::exactnum::{BigRational, Cyclotomic, LambdaPoly};
use crate::laurent::{Exponent, LaurentPoly};

/// The ν×ν symbol p(z) with p_ij(z) = Σ_n a^{ij}_n z^{−n}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolMatrix {
    pub entries: Vec<Vec<LaurentPoly>>,
}

impl SymbolMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// p(μ⊙z).
    pub fn twist(&self, mu: &[Cyclotomic]) -> SymbolMatrix {
        SymbolMatrix {
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|p| p.twist(mu)).collect())
                .collect(),
        }
    }
}

pub fn symbol_matrix(spec: &OperatorSpec) -> SymbolMatrix {
    let d = spec.dimension;
    let nu = spec.orbits;
    let mut entries = vec![vec![LaurentPoly::zero(d); nu]; nu];
    for ((i, j, n), v) in spec.effective_hopping() {
        let e = Exponent(n.iter().map(|x| -x).collect());
        entries[i][j].add_term(e, LambdaPoly::from_rational(v));
    }
    SymbolMatrix { entries }
}

/// The diagonal blocks p(μ_w⊙z) of D_z, one per w ∈ W in lexicographic order.
pub fn block_d(spec: &OperatorSpec) -> Vec<SymbolMatrix> {
    let p = symbol_matrix(spec);
    spec.cells().iter().map(|w| p.twist(&mu(w, &spec.period))).collect()
}

/// B_V as a Q×Q array of blocks, each the diagonal (length ν) of
/// B(w,w') = diag_j (1/Q)·Σ_{n∈W} e^{−2πi⟨(w−w')⊙q*, n⟩}·V(j,n).
pub fn block_b(spec: &OperatorSpec) -> Vec<Vec<Vec<Cyclotomic>>> {
    let w_all = spec.cells();
    let q = &spec.period;
    let big_n = spec.conductor() as i64;
    let inv_q = BigRational::new(1.into(), (spec.cell_count() as i64).into());
    let mut out = Vec::with_capacity(w_all.len());
    for w in &w_all {
        let mut row = Vec::with_capacity(w_all.len());
        for w2 in &w_all {
            let mut diag = vec![Cyclotomic::zero(); spec.orbits];
            for ((j, n), v) in &spec.potential {
                let phase: i64 = (0..q.len()).map(|t| (w[t] - w2[t]) * n[t] * (big_n / q[t])).sum();
                let z = Cyclotomic::zeta(big_n as u64, -phase).expect("conductor is positive");
                diag[*j] += &z.scale(&(v * &inv_q));
            }
            row.push(diag);
        }
        out.push(row);
    }
    out
}

/// D_z + B_V in block form, indexed cell-major: row (w, i) ↦ w·ν + i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FloquetMatrix {
    pub orbits: usize,
    pub cells: Vec<Vec<i64>>,
    pub d_blocks: Vec<SymbolMatrix>,
    pub b_blocks: Vec<Vec<Vec<Cyclotomic>>>,
}

impl FloquetMatrix {
    pub fn size(&self) -> usize {
        self.orbits * self.cells.len()
    }

    /// The full λ-free matrix D_z + B_V.
    pub fn matrix(&self) -> Vec<Vec<LaurentPoly>> {
        let vars = self.d_blocks.first().map_or(0, |b| b.entries[0][0].num_vars());
        let nu = self.orbits;
        let n = self.size();
        let mut m = vec![vec![LaurentPoly::zero(vars); n]; n];
        for (a, block) in self.d_blocks.iter().enumerate() {
            for i in 0..nu {
                for j in 0..nu {
                    m[a * nu + i][a * nu + j] = block.entries[i][j].clone();
                }
            }
        }
        for (a, row) in self.b_blocks.iter().enumerate() {
            for (b, diag) in row.iter().enumerate() {
                for (j, c) in diag.iter().enumerate() {
                    if !c.is_zero() {
                        m[a * nu + j][b * nu + j].add_term(Exponent::zero(vars), LambdaPoly::constant(c.clone()));
                    }
                }
            }
        }
        m
    }

    /// D_z + B_V − λI.
    pub fn with_lambda(&self) -> Vec<Vec<LaurentPoly>> {
        let mut m = self.matrix();
        for (i, row) in m.iter_mut().enumerate() {
            let vars = row[i].num_vars();
            row[i].add_term(Exponent::zero(vars), -LambdaPoly::lambda());
        }
        m
    }
}

pub fn floquet_matrix(spec: &OperatorSpec) -> FloquetMatrix {
    FloquetMatrix {
        orbits: spec.orbits,
        cells: cells(&spec.period),
        d_blocks: block_d(spec),
        b_blocks: block_b(spec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn chain(q: i64) -> OperatorSpec {
        let mut s = OperatorSpec::new(1, 1, vec![q]);
        s.add_hop(0, 0, vec![1], rat(1));
        s
    }

    fn lp1(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(1, terms.iter().map(|&(e, c)| (Exponent(vec![e]), LambdaPoly::from_int(c))))
    }

    #[test]
    fn chain_symbol_and_d_blocks() {
        let p = symbol_matrix(&chain(1));
        assert_eq!(p.entries[0][0], lp1(&[(1, 1), (-1, 1)]));
        let d = block_d(&chain(2));
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].entries[0][0], lp1(&[(1, 1), (-1, 1)]));
        assert_eq!(d[1].entries[0][0], lp1(&[(1, -1), (-1, -1)]));
    }

    #[test]
    fn empty_hopping_gives_zero_symbol() {
        let s = OperatorSpec::new(2, 3, vec![1, 1]);
        assert!(symbol_matrix(&s).entries.iter().flatten().all(LaurentPoly::is_zero));
    }

    #[test]
    fn two_point_dft() {
        let mut s = chain(2);
        s.set_potential(0, vec![0], rat(3));
        s.set_potential(0, vec![1], rat(7));
        let b = block_b(&s);
        let c = |x: i64| Cyclotomic::from_int(x);
        assert_eq!(b[0][0][0], c(5));
        assert_eq!(b[1][1][0], c(5));
        assert_eq!(b[0][1][0], c(-2));
        assert_eq!(b[1][0][0], c(-2));
    }

    #[test]
    fn constant_potential_gives_scalar_b() {
        let mut s = OperatorSpec::new(2, 2, vec![2, 3]);
        for w in s.cells() {
            for j in 0..2 {
                s.set_potential(j, w.clone(), rat(4));
            }
        }
        let b = block_b(&s);
        for (a, row) in b.iter().enumerate() {
            for (bb, diag) in row.iter().enumerate() {
                for c in diag {
                    assert_eq!(*c, Cyclotomic::from_int(if a == bb { 4 } else { 0 }));
                }
            }
        }
        assert!(block_b(&OperatorSpec::new(2, 2, vec![2, 3])).iter().flatten().flatten().all(Cyclotomic::is_zero));
    }
}
