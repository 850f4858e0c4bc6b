//! Formal inflation: single and maximal steps, alternating inflation with
//! its closed-form limit, Gram-Schmidt over negative-definite spans, vertex
//! achievement by projection, and achieving every corner of a polytopic
//! positive dual.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cones::{membership, positive_dual, ConeError, Membership};
use crate::lattice::DivisorClass;
use crate::linalg::{independent_subset, rank};
use crate::rational::{fmt_q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InflationError {
    #[error("classes live on different surfaces")]
    SurfaceMismatch,
    #[error("A·C = {0} is negative")]
    NegativePairing(String),
    #[error("eps = {eps} is outside (0, {max}]")]
    EpsOutOfRange { eps: String, max: String },
    #[error("eps = {0} must be positive")]
    NonPositiveEps(String),
    #[error("{0} has non-negative square; no maximal inflation exists")]
    NonNegativeSquare(String),
    #[error("start pairs to {0} with the first curve, expected 0")]
    NotOnFacet(String),
    #[error("curves must have negative squares and non-negative pairing")]
    BadCurves,
    #[error("ratio x = {0} exceeds 1: light-cone violation")]
    LightConeViolation(String),
    #[error("orthogonalized curve {index} is {class} with square {square} >= 0")]
    OrthogonalizationFailed { index: usize, class: String, square: String },
    #[error("curve {0} is linearly dependent on the previous ones")]
    Dependent(usize),
    #[error("curve facets meet in a face of dimension {0}, not a ray")]
    NotARay(usize),
    #[error("round boundary: negative-square dual rays [{}]", .0.join(", "))]
    RoundBoundary(Vec<String>),
    #[error("start class {0} is not in the interior of the positive dual")]
    StartNotInterior(String),
    #[error("achieved {got}, expected the ray of {expected}")]
    RayMismatch { got: String, expected: String },
    #[error("inflation step along {0} would need a negative coefficient")]
    InadmissibleStep(String),
    #[error(transparent)]
    Cone(#[from] ConeError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InflationStep {
    pub curve: DivisorClass,
    #[serde(with = "crate::rational::qstr")]
    pub coefficient: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InflationTrace {
    pub start: DivisorClass,
    pub steps: Vec<InflationStep>,
    pub result: DivisorClass,
    /// The result is the limit ray of a divergent alternation rather than a
    /// finite sum of steps.
    pub limit_formula_used: bool,
}

impl InflationTrace {
    pub fn new(start: &DivisorClass) -> Self {
        InflationTrace {
            start: start.clone(),
            steps: Vec::new(),
            result: start.clone(),
            limit_formula_used: false,
        }
    }

    /// Appends a step; zero coefficients are skipped.
    pub fn push(&mut self, curve: &DivisorClass, coefficient: Q) {
        if coefficient.is_zero() {
            return;
        }
        self.result = self.result.add_scaled(&coefficient, curve);
        self.steps.push(InflationStep {
            curve: curve.clone(),
            coefficient,
        });
    }

    /// Exact recomputation of `start + Σ εi Ci` (for finite traces) and the
    /// admissibility of each step.
    pub fn verify(&self) -> bool {
        let mut cur = self.start.clone();
        for s in &self.steps {
            let sq = s.curve.square();
            if !s.coefficient.is_positive() {
                return false;
            }
            if sq.is_negative() && s.coefficient > cur.dot(&s.curve) / -sq {
                return false;
            }
            cur = cur.add_scaled(&s.coefficient, &s.curve);
        }
        self.limit_formula_used || cur == self.result
    }
}

fn same_surface(a: &DivisorClass, b: &DivisorClass) -> Result<(), InflationError> {
    if a.surface() == b.surface() {
        Ok(())
    } else {
        Err(InflationError::SurfaceMismatch)
    }
}

/// `A + eps·C` for an admissible `eps`.
pub fn formal_inflate(a: &DivisorClass, c: &DivisorClass, eps: &Q) -> Result<DivisorClass, InflationError> {
    same_surface(a, c)?;
    let p = a.dot(c);
    if p.is_negative() {
        return Err(InflationError::NegativePairing(fmt_q(&p)));
    }
    if !eps.is_positive() {
        return Err(InflationError::NonPositiveEps(fmt_q(eps)));
    }
    let sq = c.square();
    if sq.is_negative() {
        let max = p / -sq;
        if *eps > max {
            return Err(InflationError::EpsOutOfRange {
                eps: fmt_q(eps),
                max: fmt_q(&max),
            });
        }
    }
    Ok(a.add_scaled(eps, c))
}

/// `A + (A·C / -C²)·C`, which pairs to zero with `C`.
pub fn max_inflate(a: &DivisorClass, c: &DivisorClass) -> Result<(DivisorClass, Q), InflationError> {
    same_surface(a, c)?;
    let sq = c.square();
    if !sq.is_negative() {
        return Err(InflationError::NonNegativeSquare(c.to_string()));
    }
    let p = a.dot(c);
    if p.is_negative() {
        return Err(InflationError::NegativePairing(fmt_q(&p)));
    }
    let t = p / -sq;
    Ok((a.add_scaled(&t, c), t))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlternatingRun {
    pub trace: InflationTrace,
    /// Coefficient of every maximal step, zero steps included.
    #[serde(serialize_with = "ser_qs")]
    pub coefficients: Vec<Q>,
    #[serde(with = "crate::rational::qstr")]
    pub ratio: Q,
    #[serde(with = "crate::rational::qstr")]
    pub first_coefficient: Q,
    /// `A + (l1/(1-x))(C2 - (C1·C2/C1²)C1)` when `x < 1`; the null ray
    /// `C2 - (C1·C2/C1²)C1` when `x = 1`.
    pub limit: DivisorClass,
    pub divergent: bool,
    /// Odd coefficients equal `l1·x^k` exactly.
    pub progression_holds: bool,
    /// `l1/(1-x)` equals the maximal coefficient along the orthogonalized
    /// `C2`; `None` when `x = 1`.
    pub orthogonal_coefficient_matches: Option<bool>,
}

fn ser_qs<S: serde::Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(fmt_q))
}

/// Alternating maximal inflations along `C2`, `C1`, `C2`, ... starting from
/// `A` on the facet of `C1`; `steps` counts individual inflations.
pub fn alternate_inflate(
    a: &DivisorClass,
    c1: &DivisorClass,
    c2: &DivisorClass,
    steps: usize,
) -> Result<AlternatingRun, InflationError> {
    same_surface(a, c1)?;
    same_surface(a, c2)?;
    let on = a.dot(c1);
    if !on.is_zero() {
        return Err(InflationError::NotOnFacet(fmt_q(&on)));
    }
    let (s1, s2, p12) = (c1.square(), c2.square(), c1.dot(c2));
    if !s1.is_negative() || !s2.is_negative() || p12.is_negative() {
        return Err(InflationError::BadCurves);
    }
    let x = &p12 * &p12 / (&s1 * &s2);
    if x > Q::one() {
        return Err(InflationError::LightConeViolation(fmt_q(&x)));
    }
    let l1 = a.dot(c2) / -s2.clone();
    if l1.is_negative() {
        return Err(InflationError::NegativePairing(fmt_q(&a.dot(c2))));
    }

    let mut trace = InflationTrace::new(a);
    let mut coefficients = Vec::with_capacity(steps);
    let mut cur = a.clone();
    for i in 0..steps {
        let c = if i % 2 == 0 { c2 } else { c1 };
        let (next, t) = max_inflate(&cur, c)?;
        trace.push(c, t.clone());
        coefficients.push(t);
        cur = next;
    }
    let mut pow = Q::one();
    let mut progression_holds = true;
    for (i, t) in coefficients.iter().enumerate().step_by(2) {
        if i > 0 {
            pow *= &x;
        }
        progression_holds &= *t == &l1 * &pow;
    }

    let null = c2.add_scaled(&-(&p12 / &s1), c1);
    let (limit, divergent, orth) = if x == Q::one() {
        (null.primitive(), true, None)
    } else {
        let total = &l1 / (Q::one() - &x);
        let limit = a.add_scaled(&total, &null);
        let orth = a.dot(&null) / -null.square();
        (limit, false, Some(orth == total))
    };
    Ok(AlternatingRun {
        trace,
        coefficients,
        ratio: x,
        first_coefficient: l1,
        limit,
        divergent,
        progression_holds,
        orthogonal_coefficient_matches: orth,
    })
}

/// `C1, C2', C3'', ...` with every output square negative.
pub fn gram_schmidt_negative(curves: &[DivisorClass]) -> Result<Vec<DivisorClass>, InflationError> {
    let mut out: Vec<DivisorClass> = Vec::new();
    for (i, c) in curves.iter().enumerate() {
        if let Some(f) = out.first() {
            same_surface(f, c)?;
        }
        if !c.square().is_negative() {
            return Err(InflationError::OrthogonalizationFailed {
                index: i,
                class: c.to_string(),
                square: fmt_q(&c.square()),
            });
        }
        let mut v = c.clone();
        for o in &out {
            v = v.add_scaled(&-(c.dot(o) / o.square()), o);
        }
        if v.is_zero() {
            return Err(InflationError::Dependent(i));
        }
        let sq = v.square();
        if !sq.is_negative() {
            return Err(InflationError::OrthogonalizationFailed {
                index: i,
                class: v.to_string(),
                square: fmt_q(&sq),
            });
        }
        out.push(v);
    }
    Ok(out)
}

/// Maximal inflations along an orthogonal negative family; the result is the
/// orthogonal projection of `a` onto their complement.
fn project(a: &DivisorClass, orth: &[DivisorClass], trace: &mut InflationTrace) -> Result<DivisorClass, InflationError> {
    let mut cur = a.clone();
    for o in orth {
        let (next, t) = max_inflate(&cur, o).map_err(|_| InflationError::InadmissibleStep(o.to_string()))?;
        trace.push(o, t);
        cur = next;
    }
    Ok(cur)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexAchievement {
    pub ray: DivisorClass,
    pub trace: InflationTrace,
}

/// Inflates `a` onto the common facet ray of `curves`.
pub fn achieve_vertex(a: &DivisorClass, curves: &[DivisorClass]) -> Result<VertexAchievement, InflationError> {
    for c in curves {
        same_surface(a, c)?;
    }
    let d = a.surface().rank();
    let vs: Vec<Vec<Q>> = curves.iter().map(|c| c.coeffs().to_vec()).collect();
    let r = rank(&vs);
    if r + 1 != d {
        return Err(InflationError::NotARay(d - r));
    }
    let orth = gram_schmidt_negative(curves)?;
    let mut trace = InflationTrace::new(a);
    let res = project(a, &orth, &mut trace)?;
    if res.is_zero() || curves.iter().any(|c| !c.dot(&res).is_zero()) {
        return Err(InflationError::NotARay(0));
    }
    Ok(VertexAchievement {
        ray: res.primitive(),
        trace,
    })
}

fn achieve_one(
    start: &DivisorClass,
    ray: &DivisorClass,
    curves: &[DivisorClass],
) -> Result<InflationTrace, InflationError> {
    let tight: Vec<DivisorClass> = curves
        .iter()
        .filter(|c| c.square().is_negative() && c.dot(ray).is_zero())
        .cloned()
        .collect();
    let vs: Vec<Vec<Q>> = tight.iter().map(|c| c.coeffs().to_vec()).collect();
    let basis: Vec<DivisorClass> = independent_subset(&vs).into_iter().map(|i| tight[i].clone()).collect();
    let mismatch = |got: &DivisorClass| InflationError::RayMismatch {
        got: got.to_string(),
        expected: ray.to_string(),
    };
    match gram_schmidt_negative(&basis) {
        Ok(orth) => {
            let mut trace = InflationTrace::new(start);
            let res = project(start, &orth, &mut trace)?;
            if !res.same_ray(ray) {
                return Err(mismatch(&res));
            }
            Ok(trace)
        }
        Err(InflationError::OrthogonalizationFailed { .. }) if ray.square().is_zero() => {
            // the facets meet on the light cone: project onto a maximal
            // negative-definite part, then the alternation along the next
            // curve diverges towards the null ray
            let mut neg: Vec<DivisorClass> = Vec::new();
            let mut leftover = None;
            for c in &basis {
                let mut trial = neg.clone();
                trial.push(c.clone());
                if gram_schmidt_negative(&trial).is_ok() {
                    neg = trial;
                } else if leftover.is_none() {
                    leftover = Some(c.clone());
                }
            }
            let c = leftover.ok_or_else(|| mismatch(ray))?;
            let orth = gram_schmidt_negative(&neg)?;
            let mut trace = InflationTrace::new(start);
            project(start, &orth, &mut trace)?;
            let mut null = c.clone();
            for o in &orth {
                null = null.add_scaled(&-(c.dot(o) / o.square()), o);
            }
            if !null.square().is_zero() || !null.same_ray(ray) {
                return Err(mismatch(&null));
            }
            trace.result = null.primitive();
            trace.limit_formula_used = true;
            Ok(trace)
        }
        Err(e) => Err(e),
    }
}

/// Achieves every extremal ray of the positive dual of `cone(curves)` from
/// an interior start class.
pub fn achieve_all_rays(
    curves: &[DivisorClass],
    start: &DivisorClass,
) -> Result<BTreeMap<DivisorClass, InflationTrace>, InflationError> {
    let pd = positive_dual(curves)?;
    if !pd.polytopic {
        let mut bad: Vec<String> = pd.round_boundary_rays.iter().map(ToString::to_string).collect();
        bad.extend(pd.linear_dual.lineality.iter().map(|l| format!("±{l}")));
        return Err(InflationError::RoundBoundary(bad));
    }
    if membership(&pd.linear_dual, start) != Membership::Interior || !start.square().is_positive() {
        return Err(InflationError::StartNotInterior(start.to_string()));
    }
    let mut out = BTreeMap::new();
    for r in &pd.linear_dual.rays {
        out.insert(r.clone(), achieve_one(start, r, curves)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::SurfaceModel;
    use crate::rational::{q, qr};

    fn lit(s: &str, k: usize) -> DivisorClass {
        DivisorClass::parse(s, SurfaceModel::rational(k)).unwrap()
    }

    fn lits(xs: &[&str], k: usize) -> Vec<DivisorClass> {
        xs.iter().map(|s| lit(s, k)).collect()
    }

    #[test]
    fn single_steps() {
        let r = formal_inflate(&lit("H", 2), &lit("H-E1-E2", 2), &q(1)).unwrap();
        assert_eq!(r, lit("2H-E1-E2", 2));
        assert!(formal_inflate(&lit("H", 2), &lit("H-E1-E2", 2), &q(2)).is_err());
        assert!(formal_inflate(&lit("H", 1), &lit("E1", 1), &qr(1, 2)).is_err());
        let (r, t) = max_inflate(&lit("H-E1", 2), &lit("E1-E2", 2)).unwrap();
        assert_eq!(t, qr(1, 2));
        assert_eq!(r, lit("H-1/2E1-1/2E2", 2));
        let (r, t) = max_inflate(&lit("H", 1), &lit("E1", 1)).unwrap();
        assert!(t.is_zero() && r == lit("H", 1));
        let (r, t) = max_inflate(&lit("3H-E1-E2", 2), &lit("H-E1-E2", 2)).unwrap();
        assert_eq!((r, t), (lit("4H-2E1-2E2", 2), q(1)));
        assert!(max_inflate(&lit("H", 1), &lit("H-E1", 1)).is_err());
        let s = SurfaceModel::trivial_ruled(2, 0).unwrap();
        let b = DivisorClass::parse("U+T", s).unwrap();
        let t = DivisorClass::t(s);
        assert_eq!(formal_inflate(&b, &t, &q(5)).unwrap(), DivisorClass::parse("U+6T", s).unwrap());
    }

    #[test]
    fn alternating() {
        let run = alternate_inflate(&lit("H", 3), &lit("E3", 3), &lit("E1-E2", 3), 6).unwrap();
        assert!(run.ratio.is_zero());
        assert_eq!(run.limit, lit("H", 3));
        let (c1, c2) = (lit("H-E1-E2", 2), lit("E1-E2", 2));
        let run = alternate_inflate(&lit("H-E1", 2), &c1, &c2, 20).unwrap();
        assert_eq!(run.limit, lit("H-1/2E1-1/2E2", 2));
        assert!(run.limit.dot(&c1).is_zero() && run.limit.dot(&c2).is_zero());
        assert!(run.progression_holds);
        assert_eq!(run.orthogonal_coefficient_matches, Some(true));
        assert!(alternate_inflate(&lit("H-E1", 2), &lit("E1-E2", 2), &c1, 2).is_err());
    }

    #[test]
    fn alternating_light_cone_equality() {
        // E2 and H-E1-E2 meet once: x = 1 and the limit is the null ray H-E1
        let run = alternate_inflate(&lit("2H", 2), &lit("E2", 2), &lit("H-E1-E2", 2), 8).unwrap();
        assert!(run.divergent);
        assert_eq!(run.limit, lit("H-E1", 2));
        assert!(run.progression_holds);
    }

    #[test]
    fn gram_schmidt() {
        let cs = lits(&["E3", "E1-E2", "H-E1-E2"], 3);
        assert_eq!(gram_schmidt_negative(&cs).unwrap(), cs);
        let err = gram_schmidt_negative(&lits(&["E1", "H-E1-E2"], 2)).unwrap_err();
        assert!(matches!(err, InflationError::OrthogonalizationFailed { index: 1, .. }));
        assert_eq!(gram_schmidt_negative(&lits(&["E1"], 1)).unwrap(), lits(&["E1"], 1));
        assert_eq!(gram_schmidt_negative(&lits(&["E1", "2E1"], 1)), Err(InflationError::Dependent(1)));
    }

    #[test]
    fn vertices() {
        let cs = lits(&["E3", "E1-E2", "H-E1-E2"], 3);
        let v = achieve_vertex(&lit("H", 3), &cs).unwrap();
        assert_eq!(v.ray, lit("2H-E1-E2", 3));
        assert_eq!(v.trace.result, lit("2H-E1-E2", 3));
        assert!(v.trace.verify());
        let v = achieve_vertex(&lit("H-E1", 3), &cs).unwrap();
        assert_eq!(v.trace.result, lit("H-1/2E1-1/2E2", 3));
        assert_eq!(v.ray, lit("2H-E1-E2", 3));
        let v = achieve_vertex(&lit("H", 1), &lits(&["E1"], 1)).unwrap();
        assert_eq!(v.ray, lit("H", 1));
        assert!(matches!(achieve_vertex(&lit("H", 3), &cs[..2]), Err(InflationError::NotARay(2))));
    }

    #[test]
    fn all_rays() {
        let cfg = lits(&["E1", "E2", "H-E1-E2"], 2);
        let m = achieve_all_rays(&cfg, &lit("3H-E1-E2", 2)).unwrap();
        let rays: Vec<DivisorClass> = m.keys().cloned().collect();
        let mut want = lits(&["H", "H-E1", "H-E2"], 2);
        want.sort();
        assert_eq!(rays, want);
        assert!(m.values().all(InflationTrace::verify));
        let cfg = lits(&["-H+2E1", "E2", "H-E1-E2"], 2);
        let m = achieve_all_rays(&cfg, &lit("5H-3E1-E2", 2)).unwrap();
        let mut want = lits(&["2H-E1", "H-E1", "2H-E1-E2"], 2);
        want.sort();
        assert_eq!(m.keys().cloned().collect::<Vec<_>>(), want);
        assert!(matches!(
            achieve_all_rays(&lits(&["E1"], 2), &lit("3H-E1", 2)),
            Err(InflationError::RoundBoundary(_))
        ));
    }
}
