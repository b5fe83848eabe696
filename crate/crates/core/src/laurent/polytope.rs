use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{Exponent, LaurentError, LaurentPoly};
use crate::exactnum::BigInt;

/// Extreme points of the convex hull of the support, sorted canonically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonPolytope {
    pub vertices: Vec<Exponent>,
}

impl LaurentPoly {
    pub fn newton_polytope(&self) -> Result<NewtonPolytope, LaurentError> {
        if self.is_zero() {
            return Err(LaurentError::ZeroPolynomial);
        }
        Ok(NewtonPolytope::from_points(self.exponents().cloned().collect()))
    }
}

fn cross(o: &[i64], a: &[i64], b: &[i64]) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain; returns the strict hull counter-clockwise.
fn planar_hull(mut pts: Vec<Exponent>) -> Vec<Exponent> {
    pts.sort_by(|a, b| a.0.cmp(&b.0));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut hull: Vec<Exponent> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Exponent>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for p in iter {
            while hull.len() >= start + 2 && cross(&hull[hull.len() - 2].0, &hull[hull.len() - 1].0, &p.0) <= 0 {
                hull.pop();
            }
            hull.push(p.clone());
        }
        hull.pop();
    }
    hull
}

/// Decides whether `p` lies in the convex hull of `pts` by an exact
/// phase-one simplex with Bland's rule.
fn in_hull(p: &Exponent, pts: &[&Exponent]) -> bool {
    if pts.is_empty() {
        return false;
    }
    let m = p.len();
    let k = pts.len();
    let rows = m + 1;
    let cols = k + rows;
    let r = |v: i64| BigRational::from_integer(BigInt::from(v));
    // Constraints Σ w_i pts_i = p, Σ w_i = 1, w ≥ 0, plus one artificial per row.
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(rows);
    for i in 0..rows {
        let mut row = vec![BigRational::zero(); cols + 1];
        let rhs = if i < m { p.0[i] } else { 1 };
        let sign = if rhs < 0 { -1 } else { 1 };
        for (j, q) in pts.iter().enumerate() {
            row[j] = r(sign * if i < m { q.0[i] } else { 1 });
        }
        row[k + i] = BigRational::one();
        row[cols] = r(sign * rhs);
        t.push(row);
    }
    let mut basis: Vec<usize> = (k..cols).collect();
    loop {
        // Reduced costs of the phase-one objective Σ artificials.
        let entering = (0..cols).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let cost_j = if j >= k { BigRational::one() } else { BigRational::zero() };
            let z: BigRational = (0..rows)
                .filter(|&i| basis[i] >= k)
                .map(|i| t[i][j].clone())
                .sum();
            (cost_j - z).is_negative()
        });
        let Some(e) = entering else { break };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..rows {
            if t[i][e].is_positive() {
                let ratio = &t[i][cols] / &t[i][e];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else { break };
        let piv = t[pr][e].clone();
        for v in t[pr].iter_mut() {
            *v = &*v / &piv;
        }
        for i in 0..rows {
            if i != pr && !t[i][e].is_zero() {
                let f = t[i][e].clone();
                for j in 0..=cols {
                    let d = &f * &t[pr][j];
                    t[i][j] -= d;
                }
            }
        }
        basis[pr] = e;
    }
    (0..rows).all(|i| basis[i] < k || t[i][cols].is_zero())
}

fn primitive(v: [i64; 2]) -> Vec<i64> {
    let g = v[0].gcd(&v[1]).max(1);
    vec![v[0] / g, v[1] / g]
}

impl NewtonPolytope {
    pub fn from_points(points: Vec<Exponent>) -> Self {
        let m = points.first().map_or(0, Exponent::len);
        let mut vertices = match m {
            0 => points.into_iter().take(1).collect(),
            1 => {
                let lo = points.iter().min_by_key(|e| e.0[0]).cloned();
                let hi = points.iter().max_by_key(|e| e.0[0]).cloned();
                let mut v: Vec<Exponent> = lo.into_iter().chain(hi).collect();
                v.dedup();
                v
            }
            2 => planar_hull(points),
            _ => {
                let mut pts = points;
                pts.sort();
                pts.dedup();
                let mut i = 0;
                while i < pts.len() {
                    let others: Vec<&Exponent> = pts.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, e)| e).collect();
                    if in_hull(&pts[i], &others) {
                        pts.remove(i);
                    } else {
                        i += 1;
                    }
                }
                pts
            }
        };
        vertices.sort();
        NewtonPolytope { vertices }
    }

    /// Primitive inner normals of the edges of a planar polytope. Segments
    /// yield both normals; points yield none.
    pub fn inner_normals(&self) -> Vec<Vec<i64>> {
        assert!(self.vertices.first().map_or(true, |v| v.len() == 2), "planar polytopes only");
        let ccw = planar_hull(self.vertices.clone());
        match ccw.len() {
            0 | 1 => Vec::new(),
            2 => {
                let d = [ccw[1].0[0] - ccw[0].0[0], ccw[1].0[1] - ccw[0].0[1]];
                vec![primitive([-d[1], d[0]]), primitive([d[1], -d[0]])]
            }
            n => (0..n)
                .map(|i| {
                    let a = &ccw[i].0;
                    let b = &ccw[(i + 1) % n].0;
                    // The interior lies to the left of a counter-clockwise edge.
                    primitive([-(b[1] - a[1]), b[0] - a[0]])
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{arb_laurent, lp};
    use super::*;
    use proptest::prelude::*;

    fn ex(v: &[i64]) -> Exponent {
        Exponent(v.to_vec())
    }

    #[test]
    fn simple_polytopes() {
        let f = lp(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(f.newton_polytope().unwrap().vertices, vec![ex(&[0, 1]), ex(&[1, 0])]);
        let m = lp(2, &[(&[3, -1], 2)]);
        assert_eq!(m.newton_polytope().unwrap().vertices, vec![ex(&[3, -1])]);
        assert_eq!(LaurentPoly::zero(2).newton_polytope(), Err(LaurentError::ZeroPolynomial));
    }

    #[test]
    fn interior_and_collinear_points_are_dropped() {
        let pts = [[0, 0], [2, 0], [1, 0], [0, 2], [1, 1], [2, 2], [0, 1]];
        let poly = NewtonPolytope::from_points(pts.iter().map(|p| ex(p)).collect());
        assert_eq!(poly.vertices, vec![ex(&[0, 0]), ex(&[0, 2]), ex(&[2, 0]), ex(&[2, 2])]);
        let mut normals = poly.inner_normals();
        normals.sort();
        assert_eq!(normals, vec![vec![-1, 0], vec![0, -1], vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn three_dimensional_filter() {
        let mut pts = Vec::new();
        for x in 0..=2 {
            for y in 0..=2 {
                for z in 0..=2 {
                    pts.push(ex(&[x, y, z]));
                }
            }
        }
        let poly = NewtonPolytope::from_points(pts);
        assert_eq!(poly.vertices.len(), 8);
        assert!(poly.vertices.iter().all(|v| v.0.iter().all(|&c| c == 0 || c == 2)));
        let simplex = NewtonPolytope::from_points(vec![
            ex(&[0, 0, 0]),
            ex(&[3, 0, 0]),
            ex(&[0, 3, 0]),
            ex(&[0, 0, 3]),
            ex(&[1, 1, 1]),
            ex(&[1, 1, 0]),
            ex(&[-1, 0, 0]),
        ]);
        assert_eq!(simplex.vertices.len(), 4);
        assert!(simplex.vertices.contains(&ex(&[-1, 0, 0])));
    }

    #[test]
    fn segment_normals() {
        let poly = NewtonPolytope::from_points(vec![ex(&[0, 2]), ex(&[2, 0]), ex(&[1, 1])]);
        let mut normals = poly.inner_normals();
        normals.sort();
        assert_eq!(normals, vec![vec![-1, -1], vec![1, 1]]);
    }

    fn minkowski(a: &NewtonPolytope, b: &NewtonPolytope) -> NewtonPolytope {
        let mut pts = Vec::new();
        for x in &a.vertices {
            for y in &b.vertices {
                pts.push(x.add(y));
            }
        }
        NewtonPolytope::from_points(pts)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn product_polytope_is_minkowski_sum(f in arb_laurent(2, 7), g in arb_laurent(2, 7)) {
            let lhs = (&f * &g).newton_polytope().unwrap();
            let rhs = minkowski(&f.newton_polytope().unwrap(), &g.newton_polytope().unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn product_polytope_is_minkowski_sum_3d(f in arb_laurent(3, 5), g in arb_laurent(3, 4)) {
            let lhs = (&f * &g).newton_polytope().unwrap();
            let rhs = minkowski(&f.newton_polytope().unwrap(), &g.newton_polytope().unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
