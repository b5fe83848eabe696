use serde::{Serialize, Serializer};

use crate::exactnum::LambdaPoly;

/// A finite set of exceptional energies, described as the union of the zero
/// sets of monic λ-polynomials of positive degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LambdaExceptions {
    polys: Vec<LambdaPoly>,
}

impl LambdaExceptions {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn of(polys: &[LambdaPoly]) -> Self {
        let mut e = Self::new();
        for p in polys {
            e.add(p);
        }
        e
    }

    /// Records the zeros of `p`; constants contribute nothing.
    pub fn add(&mut self, p: &LambdaPoly) {
        assert!(!p.is_zero(), "the zero polynomial has no finite zero set");
        if p.degree().unwrap_or(0) == 0 {
            return;
        }
        let m = p.monic();
        if !self.polys.contains(&m) {
            self.polys.push(m);
            self.polys.sort_by_key(|q| (q.degree(), q.to_string()));
        }
    }

    pub fn extend(&mut self, other: &LambdaExceptions) {
        for p in &other.polys {
            self.add(p);
        }
    }

    pub fn polys(&self) -> &[LambdaPoly] {
        &self.polys
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// True when λ₀ avoids every listed zero set.
    pub fn avoids(&self, lambda0: &crate::exactnum::Cyclotomic) -> bool {
        self.polys.iter().all(|p| !p.eval(lambda0).is_zero())
    }

    pub fn describe(&self) -> String {
        if self.polys.is_empty() {
            "none".to_string()
        } else {
            let parts: Vec<String> = self.polys.iter().map(|p| format!("({p})")).collect();
            format!("zeros of {}", parts.join("·"))
        }
    }
}

impl Serialize for LambdaExceptions {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.polys.iter().map(|p| p.to_string()))
    }
}
