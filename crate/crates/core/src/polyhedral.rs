//! Coordinate-level polyhedral kernels: double description for
//! `{x : a·x >= 0}` and an exact phase-1 simplex for conic feasibility.
//!
//! Everything here works on plain coefficient vectors with the Euclidean
//! dot product; the lattice pairing is applied by the caller.

use num_traits::{One, Signed, Zero};

use crate::linalg::echelon;
use crate::rational::{primitive_integral, qi, Q};

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [Q], t: &Q, x: &[Q]) {
    for (a, b) in y.iter_mut().zip(x) {
        *a += t * b;
    }
}

/// Positive rescaling to a primitive integral vector.
pub fn primitive(v: &[Q]) -> Vec<Q> {
    primitive_integral(v).iter().map(qi).collect()
}

fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[derive(Clone, Debug, Default)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn subset_of(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray {
    v: Vec<Q>,
    tight: Bits,
}

/// Generators of `{x : rows_i · x >= 0}`: a lineality basis plus the
/// extreme rays of the pointed part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generators {
    pub rays: Vec<Vec<Q>>,
    pub lineality: Vec<Vec<Q>>,
}

/// Double description with incremental constraint insertion. Starts from the
/// whole space (lineality = identity); constraints that cut the lineality
/// space pivot one lineality vector into a ray, the rest are ordinary steps
/// with the combinatorial adjacency test.
pub fn double_description(rows: &[Vec<Q>], d: usize) -> Generators {
    let nrows = rows.len();
    let mut lin: Vec<Vec<Q>> = (0..d)
        .map(|i| {
            let mut v = vec![Q::zero(); d];
            v[i] = Q::one();
            v
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();
    let mut done = Bits::new(nrows);

    for (ri, a) in rows.iter().enumerate() {
        if is_zero_vec(a) {
            continue;
        }
        if let Some(p) = lin.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lin.remove(p);
            let mut v0 = dot(a, &l0);
            if v0.is_negative() {
                l0.iter_mut().for_each(|x| *x = -x.clone());
                v0 = -v0;
            }
            for l in lin.iter_mut() {
                let t = -(dot(a, l) / &v0);
                axpy(l, &t, &l0);
            }
            for r in rays.iter_mut() {
                let t = -(dot(a, &r.v) / &v0);
                axpy(&mut r.v, &t, &l0);
                r.v = primitive(&r.v);
                r.tight.set(ri);
            }
            rays.push(Ray {
                v: primitive(&l0),
                tight: done.clone(),
            });
            done.set(ri);
            continue;
        }
        let vals: Vec<Q> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut next: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].tight.and(&rays[n].tight);
                let adjacent = (0..rays.len()).all(|r| r == p || r == n || !common.subset_of(&rays[r].tight));
                if !adjacent {
                    continue;
                }
                let mut v: Vec<Q> = rays[n].v.iter().map(|x| x * &vals[p]).collect();
                axpy(&mut v, &-vals[n].clone(), &rays[p].v);
                let mut tight = common;
                tight.set(ri);
                next.push(Ray { v: primitive(&v), tight });
            }
        }
        let old = std::mem::take(&mut rays);
        for (i, mut r) in old.into_iter().enumerate() {
            if vals[i].is_zero() {
                r.tight.set(ri);
                rays.push(r);
            } else if vals[i].is_positive() {
                rays.push(r);
            }
        }
        rays.extend(next);
        done.set(ri);
    }

    let mut out: Vec<Vec<Q>> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    Generators {
        rays: out,
        lineality: canonical_basis(&lin),
    }
}

/// Reduced row echelon basis of a span, each vector made primitive.
pub fn canonical_basis(vs: &[Vec<Q>]) -> Vec<Vec<Q>> {
    if vs.is_empty() {
        return Vec::new();
    }
    let mut m = vs.to_vec();
    let piv = echelon(&mut m);
    m.truncate(piv.len());
    m.iter().map(|v| primitive(v)).collect()
}

/// Outcome of the conic feasibility problem `Σ λj gj = t`, `λ >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conic {
    /// Nonnegative coefficients, one per generator.
    Combination(Vec<Q>),
    /// A covector `y` with `y·gj >= 0` for all `j` and `y·t < 0`.
    Separated(Vec<Q>),
}

/// Exact phase-1 simplex with Bland's rule.
pub fn conic_combination(gens: &[Vec<Q>], target: &[Q]) -> Conic {
    let m = target.len();
    let n = gens.len();
    let sign: Vec<Q> = target
        .iter()
        .map(|t| if t.is_negative() { -Q::one() } else { Q::one() })
        .collect();
    // columns: n structural, m artificial, then rhs
    let width = n + m + 1;
    let mut tab: Vec<Vec<Q>> = (0..m)
        .map(|i| {
            let mut row = vec![Q::zero(); width];
            for (j, g) in gens.iter().enumerate() {
                row[j] = &g[i] * &sign[i];
            }
            row[n + i] = Q::one();
            row[width - 1] = &target[i] * &sign[i];
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    // reduced costs for min Σ artificials
    let mut cost = vec![Q::zero(); width];
    for c in &mut cost[n..n + m] {
        *c = Q::one();
    }
    for row in &tab {
        for j in 0..width {
            cost[j] -= &row[j];
        }
    }
    while let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<usize> = None;
        for r in 0..m {
            if !tab[r][enter].is_positive() {
                continue;
            }
            let ratio = &tab[r][width - 1] / &tab[r][enter];
            leave = match leave {
                None => Some(r),
                Some(b) => {
                    let rb = &tab[b][width - 1] / &tab[b][enter];
                    if ratio < rb || (ratio == rb && basis[r] < basis[b]) {
                        Some(r)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        let Some(r) = leave else {
            // phase 1 is bounded below by 0, so this cannot happen
            unreachable!("unbounded phase-1 objective");
        };
        let piv = tab[r][enter].clone();
        for x in tab[r].iter_mut() {
            *x /= &piv;
        }
        let prow = tab[r].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = -row[enter].clone();
                axpy(row, &f, &prow);
            }
        }
        if !cost[enter].is_zero() {
            let f = -cost[enter].clone();
            axpy(&mut cost, &f, &prow);
        }
        basis[r] = enter;
    }
    let objective = -cost[width - 1].clone();
    if objective.is_zero() {
        let mut lambda = vec![Q::zero(); n];
        for (r, &b) in basis.iter().enumerate() {
            if b < n {
                lambda[b] = tab[r][width - 1].clone();
            }
        }
        return Conic::Combination(lambda);
    }
    // multipliers y_i = c_i - reduced cost of artificial i; the separating
    // covector is -y in the sign-adjusted rows
    let y: Vec<Q> = (0..m).map(|i| (Q::one() - &cost[n + i]) * &sign[i]).collect();
    Conic::Separated(primitive(&y.iter().map(|v| -v).collect::<Vec<_>>()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn orthant() {
        let g = double_description(&[v(&[1, 0]), v(&[0, 1])], 2);
        assert!(g.lineality.is_empty());
        assert_eq!(g.rays, vec![v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn half_space_and_line() {
        let g = double_description(&[v(&[1, 0, 0])], 3);
        assert_eq!(g.rays, vec![v(&[1, 0, 0])]);
        assert_eq!(g.lineality.len(), 2);
        let g = double_description(&[v(&[1, 1]), v(&[-1, -1])], 2);
        assert!(g.rays.is_empty());
        assert_eq!(g.lineality.len(), 1);
    }

    #[test]
    fn square_cone() {
        // x >= |y|, x >= |z|: four extreme rays
        let rows = vec![v(&[1, 1, 0]), v(&[1, -1, 0]), v(&[1, 0, 1]), v(&[1, 0, -1])];
        let g = double_description(&rows, 3);
        assert_eq!(g.rays.len(), 4);
        for r in &g.rays {
            assert_eq!(r[0], q(1));
        }
    }

    #[test]
    fn feasibility() {
        let gens = vec![v(&[1, 0]), v(&[1, 1])];
        match conic_combination(&gens, &v(&[3, 1])) {
            Conic::Combination(l) => assert_eq!(l, v(&[2, 1])),
            other => panic!("{other:?}"),
        }
        match conic_combination(&gens, &v(&[0, 1])) {
            Conic::Separated(y) => {
                for g in &gens {
                    assert!(!dot(&y, g).is_negative());
                }
                assert!(dot(&y, &v(&[0, 1])).is_negative());
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(conic_combination(&gens, &v(&[0, 0])), Conic::Combination(_)));
    }
}
