//! Cremona reflections on `CP² # k`: ordering, reduced forms, reduction
//! with cycle detection and orbit-based equivalence testing.

use std::collections::{HashMap, HashSet, VecDeque};

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{k_dot, DivisorClass};
use crate::rational::{q, Q};

/// Default number of visited classes for [`cremona_equivalent`].
pub const DEFAULT_EQUIV_BUDGET: usize = 10_000;
/// Default step budget for [`cremona_reduce`].
pub const DEFAULT_REDUCE_STEPS: usize = 1_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CremonaError {
    #[error("Cremona moves need a rational surface, got {0}")]
    NotRational(String),
    #[error("need at least 3 blowups, got k = {0}")]
    TooFewBlowups(usize),
    #[error("triple ({0}, {1}, {2}) must be distinct indices in 1..={3}")]
    BadTriple(usize, usize, usize, usize),
    #[error("class {0} is not integral")]
    NotIntegral(String),
    #[error("class {0} is not ordered")]
    Unordered(String),
    #[error("classes live on different surfaces")]
    SurfaceMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ReductionResult {
    Reduced { class: DivisorClass },
    /// Ordered classes visited; the last one repeats an earlier entry.
    Cycle { trace: Vec<DivisorClass> },
    BudgetExceeded { last: DivisorClass },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionOutcome {
    pub result: ReductionResult,
    pub steps: usize,
}

impl ReductionOutcome {
    pub fn reduced(&self) -> Option<&DivisorClass> {
        match &self.result {
            ReductionResult::Reduced { class } => Some(class),
            _ => None,
        }
    }

    pub fn is_cycle(&self) -> bool {
        matches!(self.result, ReductionResult::Cycle { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Invariant {
    Rank,
    Square,
    CanonicalPairing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Equivalence {
    /// Chain from the first class to the second; consecutive entries differ
    /// by one reflection up to relabeling.
    Equivalent { path: Vec<DivisorClass> },
    DistinctByInvariant { which: Invariant },
    Unknown { visited: usize },
}

fn check_rational(x: &DivisorClass) -> Result<(), CremonaError> {
    if x.surface().is_rational() {
        Ok(())
    } else {
        Err(CremonaError::NotRational(x.surface().to_string()))
    }
}

/// `H - Ei - Ej - El` (1-based indices).
pub fn root(x: &DivisorClass, triple: (usize, usize, usize)) -> Result<DivisorClass, CremonaError> {
    check_rational(x)?;
    let k = x.surface().k();
    if k < 3 {
        return Err(CremonaError::TooFewBlowups(k));
    }
    let (i, j, l) = triple;
    let bad = [i, j, l].iter().any(|&t| t == 0 || t > k) || i == j || j == l || i == l;
    if bad {
        return Err(CremonaError::BadTriple(i, j, l, k));
    }
    let mut c = vec![q(0); k + 1];
    c[0] = q(1);
    for t in [i, j, l] {
        c[t] = q(-1);
    }
    Ok(DivisorClass::new(x.surface(), c).expect("rank"))
}

/// `s(x) = x + (x·α)α` for `α = H - Ei - Ej - El`.
pub fn reflect(x: &DivisorClass, triple: (usize, usize, usize)) -> Result<DivisorClass, CremonaError> {
    let alpha = root(x, triple)?;
    if !x.is_integral() {
        return Err(CremonaError::NotIntegral(x.to_string()));
    }
    Ok(x.add_scaled(&x.dot(&alpha), &alpha))
}

/// Sorts the `Ei` so that `b1 >= b2 >= ..` in `aH - Σ bi Ei`.
pub fn order(x: &DivisorClass) -> DivisorClass {
    x.ordered()
}

/// `a >= b1 + b2 + b3` and every `bi >= 0`, for an ordered class.
pub fn is_reduced(x: &DivisorClass) -> Result<bool, CremonaError> {
    check_rational(x)?;
    if !x.is_ordered() {
        return Err(CremonaError::Unordered(x.to_string()));
    }
    let k = x.surface().k();
    let b: Vec<Q> = (1..=k).map(|i| -x.coeff(i)).collect();
    let top: Q = b.iter().take(3).sum();
    Ok(*x.coeff(0) >= top && b.iter().all(|v| !v.is_negative()))
}

/// Alternately orders and reflects in the top triple until the class is
/// reduced, repeats, or the budget runs out.
pub fn cremona_reduce(x: &DivisorClass, max_steps: usize) -> Result<ReductionOutcome, CremonaError> {
    check_rational(x)?;
    let k = x.surface().k();
    if k < 3 {
        return Err(CremonaError::TooFewBlowups(k));
    }
    if !x.is_integral() {
        return Err(CremonaError::NotIntegral(x.to_string()));
    }
    let mut cur = order(x);
    let mut seen = HashSet::new();
    let mut trace = Vec::new();
    let mut steps = 0;
    loop {
        if is_reduced(&cur)? {
            return Ok(ReductionOutcome {
                result: ReductionResult::Reduced { class: cur },
                steps,
            });
        }
        trace.push(cur.clone());
        if !seen.insert(cur.clone()) {
            return Ok(ReductionOutcome {
                result: ReductionResult::Cycle { trace },
                steps,
            });
        }
        if steps >= max_steps {
            return Ok(ReductionOutcome {
                result: ReductionResult::BudgetExceeded { last: cur },
                steps,
            });
        }
        cur = order(&reflect(&cur, (1, 2, 3))?);
        steps += 1;
    }
}

fn neighbours(x: &DivisorClass) -> Vec<DivisorClass> {
    let k = x.surface().k();
    let mut out = Vec::new();
    for i in 1..=k {
        for j in (i + 1)..=k {
            for l in (j + 1)..=k {
                let alpha = root(x, (i, j, l)).expect("valid triple");
                let p = x.dot(&alpha);
                if !p.is_zero() {
                    out.push(order(&x.add_scaled(&p, &alpha)));
                }
            }
        }
    }
    out
}

fn unwind(parents: &HashMap<DivisorClass, Option<DivisorClass>>, from: &DivisorClass) -> Vec<DivisorClass> {
    let mut path = vec![from.clone()];
    let mut cur = from.clone();
    while let Some(Some(p)) = parents.get(&cur) {
        path.push(p.clone());
        cur = p.clone();
    }
    path
}

/// Decides Cremona equivalence by invariants, then by a bidirectional
/// breadth-first orbit search over ordered classes.
pub fn cremona_equivalent(x: &DivisorClass, y: &DivisorClass, budget: usize) -> Result<Equivalence, CremonaError> {
    check_rational(x)?;
    check_rational(y)?;
    if x.surface() != y.surface() {
        return Ok(Equivalence::DistinctByInvariant { which: Invariant::Rank });
    }
    if x.square() != y.square() {
        return Ok(Equivalence::DistinctByInvariant { which: Invariant::Square });
    }
    if k_dot(x) != k_dot(y) {
        return Ok(Equivalence::DistinctByInvariant {
            which: Invariant::CanonicalPairing,
        });
    }
    for c in [x, y] {
        if !c.is_integral() {
            return Err(CremonaError::NotIntegral(c.to_string()));
        }
    }
    let (ox, oy) = (order(x), order(y));
    let finish = |mid: Vec<DivisorClass>| {
        let mut path = vec![x.clone()];
        path.extend(mid);
        path.push(y.clone());
        path.dedup();
        Equivalence::Equivalent { path }
    };
    if ox == oy {
        return Ok(finish(vec![ox]));
    }
    if x.surface().k() < 3 {
        return Ok(Equivalence::Unknown { visited: 2 });
    }
    let mut par_x: HashMap<DivisorClass, Option<DivisorClass>> = HashMap::from([(ox.clone(), None)]);
    let mut par_y: HashMap<DivisorClass, Option<DivisorClass>> = HashMap::from([(oy.clone(), None)]);
    let mut qx = VecDeque::from([ox]);
    let mut qy = VecDeque::from([oy]);
    while par_x.len() + par_y.len() < budget && (!qx.is_empty() || !qy.is_empty()) {
        let grow_x = !qx.is_empty() && (qy.is_empty() || qx.len() <= qy.len());
        let (queue, mine, other) = if grow_x {
            (&mut qx, &mut par_x, &par_y)
        } else {
            (&mut qy, &mut par_y, &par_x)
        };
        let Some(cur) = queue.pop_front() else { break };
        for nb in neighbours(&cur) {
            if mine.contains_key(&nb) {
                continue;
            }
            mine.insert(nb.clone(), Some(cur.clone()));
            if other.contains_key(&nb) {
                let (px, py) = (unwind(&par_x, &nb), unwind(&par_y, &nb));
                let mut mid: Vec<DivisorClass> = px.into_iter().rev().collect();
                mid.extend(py.into_iter().skip(1));
                return Ok(finish(mid));
            }
            queue.push_back(nb);
        }
    }
    Ok(Equivalence::Unknown {
        visited: par_x.len() + par_y.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::exceptional_classes;
    use crate::lattice::SurfaceModel;

    fn lit(s: &str, k: usize) -> DivisorClass {
        DivisorClass::parse(s, SurfaceModel::rational(k)).unwrap()
    }

    #[test]
    fn reflections() {
        assert_eq!(reflect(&lit("2H-E1-E2-E3", 3), (1, 2, 3)).unwrap(), lit("H", 3));
        assert_eq!(reflect(&lit("H", 3), (1, 2, 3)).unwrap(), lit("2H-E1-E2-E3", 3));
        assert_eq!(reflect(&lit("E4", 4), (1, 2, 3)).unwrap(), lit("E4", 4));
        assert!(reflect(&lit("H", 3), (1, 1, 2)).is_err());
        assert!(reflect(&lit("H", 3), (1, 2, 4)).is_err());
        assert!(reflect(&lit("H", 2), (1, 2, 3)).is_err());
    }

    #[test]
    fn ordering_and_reduced() {
        assert_eq!(order(&lit("H-E3", 3)), lit("H-E1", 3));
        assert_eq!(order(&lit("3H-E1-2E2", 3)), lit("3H-2E1-E2", 3));
        let o = order(&lit("3H-2E1-E2", 3));
        assert_eq!(order(&o), o);
        assert!(is_reduced(&lit("H", 3)).unwrap());
        assert!(!is_reduced(&lit("2H-E1-E2-E3", 3)).unwrap());
        assert!(!is_reduced(&order(&lit("E1", 3))).unwrap());
        assert!(is_reduced(&lit("H-E3", 3)).is_err());
    }

    #[test]
    fn reduction() {
        let out = cremona_reduce(&lit("2H-E1-E2-E3", 3), 10).unwrap();
        assert_eq!(out.reduced(), Some(&lit("H", 3)));
        assert!(out.steps <= 2);
        assert!(cremona_reduce(&lit("E1", 3), 10).unwrap().is_cycle());
        assert!(cremona_reduce(&lit("H-E1-E2", 3), 10).unwrap().is_cycle());
        for k in 3..=5 {
            for e in exceptional_classes(k).unwrap() {
                assert!(cremona_reduce(&e, 100).unwrap().is_cycle(), "{e}");
            }
        }
        let r = cremona_reduce(&lit("5H-2E1-2E2-2E3-2E4-2E5-2E6", 6), 100).unwrap();
        assert!(r.reduced().is_some());
    }

    #[test]
    fn equivalence() {
        let e = cremona_equivalent(&lit("2H-E1-E2-E3", 3), &lit("H", 3), DEFAULT_EQUIV_BUDGET).unwrap();
        assert!(matches!(e, Equivalence::Equivalent { .. }));
        assert_eq!(
            cremona_equivalent(&lit("H", 3), &lit("2H", 3), 100).unwrap(),
            Equivalence::DistinctByInvariant { which: Invariant::Square }
        );
        assert!(matches!(
            cremona_equivalent(&lit("E1", 3), &lit("E2", 3), 100).unwrap(),
            Equivalence::Equivalent { .. }
        ));
        let far = cremona_equivalent(&lit("E1", 6), &lit("2H-E1-E2-E3-E4-E5", 6), DEFAULT_EQUIV_BUDGET).unwrap();
        match far {
            Equivalence::Equivalent { path } => {
                for w in path.windows(2) {
                    assert_eq!(w[0].square(), w[1].square());
                }
            }
            other => panic!("{other:?}"),
        }
    }
}
