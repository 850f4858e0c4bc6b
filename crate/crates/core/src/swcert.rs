//! Wall-crossing nonvanishing certificates: magnitudes, dimension plus
//! witness certificates, non-extremality decompositions on irrational ruled
//! surfaces and the anticanonical decomposition audit on `CP² # 8`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::enumeration::{exceptional_classes, zero_square_sphere_classes, all_instances};
use crate::lattice::{canonical_class, j_genus, k_dot, sw_dimension, DivisorClass, SurfaceModel};
use crate::rational::{fmt_q, q, qr, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SwError {
    #[error("{0}: wall crossing needs a rational or irrationally ruled surface")]
    Unsupported(SurfaceModel),
    #[error("class {0} is not integral")]
    NotIntegral(String),
    #[error("class {class} does not meet the case guard: {reason}")]
    CaseGuard { class: String, reason: String },
    #[error("no certified decomposition found for {0}")]
    NoDecomposition(String),
    #[error("surfaces differ")]
    SurfaceMismatch,
}

fn ser_big<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// `|SW(K - e) - SW(e)|`: 1 on rational surfaces, `|1 + e·T|^h` on ruled
/// surfaces over a genus-`h` base.
pub fn wall_crossing_magnitude(e: &DivisorClass) -> Result<BigInt, SwError> {
    let s = e.surface();
    match s.base_genus() {
        None => Ok(BigInt::one()),
        Some(h) => {
            let et = e.dot(&DivisorClass::t(s));
            if !et.is_integer() {
                return Err(SwError::NotIntegral(e.to_string()));
            }
            let base = (Q::one() + et).to_integer();
            Ok(num_traits::pow(base.abs(), h as usize))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SwCertificate {
    pub class: DivisorClass,
    #[serde(with = "crate::rational::qstr")]
    pub dimension: Q,
    pub witness: DivisorClass,
    /// `(K - e)·W`, negative.
    #[serde(with = "crate::rational::qstr")]
    pub witness_pairing: Q,
    #[serde(serialize_with = "ser_big")]
    pub magnitude: BigInt,
}

impl SwCertificate {
    /// Recomputes every recorded quantity exactly.
    pub fn verify(&self) -> bool {
        let k = canonical_class(self.class.surface());
        let wp = (&k - &self.class).dot(&self.witness);
        let mag = wall_crossing_magnitude(&self.class);
        self.dimension == sw_dimension(&self.class)
            && !self.dimension.is_negative()
            && !self.witness.square().is_negative()
            && wp == self.witness_pairing
            && wp.is_negative()
            && mag.as_ref() == Ok(&self.magnitude)
            && self.magnitude.is_positive()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NoCertificate {
    NegativeDimension {
        #[serde(with = "crate::rational::qstr")]
        dimension: Q,
    },
    NoWitness,
    ZeroMagnitude,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SwOutcome {
    Certified(SwCertificate),
    NoCertificate(NoCertificate),
}

impl SwOutcome {
    pub fn certificate(&self) -> Option<&SwCertificate> {
        match self {
            SwOutcome::Certified(c) => Some(c),
            SwOutcome::NoCertificate(_) => None,
        }
    }
}

/// `{H} ∪ 𝓔_K` on rational surfaces (just `{H}` past `k = 8`), `{T}` on
/// ruled ones.
pub fn default_pool(s: SurfaceModel) -> Vec<DivisorClass> {
    if s.is_rational() {
        let mut pool = vec![DivisorClass::h(s)];
        if let Ok(es) = exceptional_classes(s.k()) {
            pool.extend(es);
        }
        pool
    } else {
        vec![DivisorClass::t(s)]
    }
}

/// Succeeds when `dim_SW(e) >= 0`, the magnitude is nonzero and some pool
/// member `W` has `W² >= 0` and `(K - e)·W < 0`.
pub fn sw_certificate(e: &DivisorClass, pool: &[DivisorClass]) -> Result<SwOutcome, SwError> {
    if pool.iter().any(|w| w.surface() != e.surface()) {
        return Err(SwError::SurfaceMismatch);
    }
    let dim = sw_dimension(e);
    if dim.is_negative() {
        return Ok(SwOutcome::NoCertificate(NoCertificate::NegativeDimension { dimension: dim }));
    }
    let magnitude = wall_crossing_magnitude(e)?;
    if magnitude.is_zero() {
        return Ok(SwOutcome::NoCertificate(NoCertificate::ZeroMagnitude));
    }
    let ke = &canonical_class(e.surface()) - e;
    for w in pool {
        let p = ke.dot(w);
        if !w.square().is_negative() && p.is_negative() {
            return Ok(SwOutcome::Certified(SwCertificate {
                class: e.clone(),
                dimension: dim,
                witness: w.clone(),
                witness_pairing: p,
                magnitude,
            }));
        }
    }
    Ok(SwOutcome::NoCertificate(NoCertificate::NoWitness))
}

/// `U + aT` for the three smallest `a` with `dim_SW >= 0`, plus `T`.
fn ruled_pattern_classes(s: SurfaceModel) -> Vec<DivisorClass> {
    let t = DivisorClass::t(s);
    let u = DivisorClass::u(s);
    let mut out = vec![t.clone()];
    let mut a = -(s.base_genus().unwrap_or(0) as i64) - 2;
    while out.len() < 4 {
        let c = u.add_scaled(&q(a), &t);
        if !sw_dimension(&c).is_negative() {
            out.push(c);
        }
        a += 1;
    }
    out
}

/// The exceptional classes the certificates range over: `𝓔_K` on rational
/// surfaces, `{Ei, T - Ei}` on ruled ones.
pub fn exceptional_set(s: SurfaceModel) -> Vec<DivisorClass> {
    if s.is_rational() {
        return exceptional_classes(s.k()).unwrap_or_default();
    }
    let t = DivisorClass::t(s);
    (1..=s.k())
        .flat_map(|i| {
            let e = DivisorClass::e(s, i);
            [e.clone(), &t - &e]
        })
        .collect()
}

/// Certified classes used as curve-cone generators: `𝓔_K`, the square-zero
/// genus-0 classes and `H` (rational); `T` (ruled).
pub fn certified_nontrivial_set(s: SurfaceModel) -> Vec<SwCertificate> {
    let pool = default_pool(s);
    let mut candidates: Vec<DivisorClass> = Vec::new();
    if s.is_rational() {
        candidates.push(DivisorClass::h(s));
        if let Ok(es) = exceptional_classes(s.k()) {
            candidates.extend(es);
        }
        if let Ok(zs) = zero_square_sphere_classes(s.k()) {
            candidates.extend(all_instances(&zs));
        }
    } else {
        candidates.extend(ruled_pattern_classes(s));
        candidates.extend(exceptional_set(s));
    }
    candidates
        .iter()
        .filter_map(|c| sw_certificate(c, &pool).ok()?.certificate().cloned())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessBranch {
    /// `h > 1`: `C = (C - T) + T`.
    HigherGenus,
    /// `h = 1`, trivial bundle, some `ci > a`: `C = (C - T + Ei) + (T - Ei)`.
    LargeExceptional,
    /// `h = 1` otherwise: `lC = (lC - T) + T` with `l > 2a`.
    Scaled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub branch: WitnessBranch,
    pub scale: u32,
    pub summands: Vec<SwCertificate>,
    /// `scale·C` equals the sum of the summands.
    pub sum_matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum NonExtremal {
    /// `T`, `Ei` or `T - Ei`: an extremal class, no witness expected.
    Extremal { class: DivisorClass },
    Decomposed(Decomposition),
}

fn certify_all(parts: &[DivisorClass], pool: &[DivisorClass]) -> Result<Option<Vec<SwCertificate>>, SwError> {
    let mut out = Vec::new();
    for p in parts {
        match sw_certificate(p, pool)? {
            SwOutcome::Certified(c) => out.push(c),
            SwOutcome::NoCertificate(_) => return Ok(None),
        }
    }
    Ok(Some(out))
}

fn is_ruled_extremal(c: &DivisorClass) -> bool {
    let s = c.surface();
    let t = DivisorClass::t(s);
    if *c == t {
        return true;
    }
    (1..=s.k()).any(|i| {
        let e = DivisorClass::e(s, i);
        *c == e || *c == &t - &e
    })
}

/// Splits a class on an irrationally ruled surface into certified pieces,
/// following the case split of the cone theorem argument.
pub fn non_extremal_witness(c: &DivisorClass) -> Result<NonExtremal, SwError> {
    let s = c.surface();
    let Some(h) = s.base_genus() else {
        return Err(SwError::Unsupported(s));
    };
    if !c.is_integral() {
        return Err(SwError::NotIntegral(c.to_string()));
    }
    if is_ruled_extremal(c) {
        return Ok(NonExtremal::Extremal { class: c.clone() });
    }
    let guard = |reason: &str| SwError::CaseGuard {
        class: c.to_string(),
        reason: reason.to_string(),
    };
    let kc = k_dot(c);
    if !kc.is_negative() {
        return Err(guard("K·C must be negative"));
    }
    if j_genus(c).is_zero() && kc >= q(-3) {
        return Err(guard("genus 0 with K·C >= -3 is not covered"));
    }
    let t = DivisorClass::t(s);
    let a = c.dot(&t);
    if !a.is_positive() {
        return Err(guard("C·T must be positive"));
    }
    let pool = vec![t.clone()];
    let decomposed = |branch, scale: u32, parts: Vec<DivisorClass>| -> Result<NonExtremal, SwError> {
        let certs = certify_all(&parts, &pool)?.ok_or_else(|| SwError::NoDecomposition(c.to_string()))?;
        let mut sum = DivisorClass::zero(s);
        for p in &parts {
            sum = &sum + p;
        }
        Ok(NonExtremal::Decomposed(Decomposition {
            branch,
            scale,
            summands: certs,
            sum_matches: sum == c.scale(&q(scale as i64)),
        }))
    };
    if h > 1 {
        return decomposed(WitnessBranch::HigherGenus, 1, vec![c - &t, t.clone()]);
    }
    let trivial = matches!(s, SurfaceModel::TrivialRuled { .. });
    if trivial {
        // ci is the coefficient of -Ei
        let big = (1..=s.k())
            .map(|i| (i, -c.e_coeff(i).clone()))
            .filter(|(_, ci)| *ci > a)
            .max_by(|x, y| x.1.cmp(&y.1).then(y.0.cmp(&x.0)));
        if let Some((i, _)) = big {
            let e = DivisorClass::e(s, i);
            return decomposed(WitnessBranch::LargeExceptional, 1, vec![&(c - &t) + &e, &t - &e]);
        }
    }
    let a_int = i64::try_from(a.to_integer()).map_err(|_| guard("C·T too large"))?;
    for l in (2 * a_int + 1)..=(2 * a_int + 10) {
        let lc = c.scale(&q(l));
        let first = &lc - &t;
        if !sw_dimension(&first).is_positive() {
            continue;
        }
        if let Ok(out) = decomposed(WitnessBranch::Scaled, l as u32, vec![first, t.clone()]) {
            return Ok(out);
        }
    }
    Err(SwError::NoDecomposition(c.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnticanonicalAudit {
    #[serde(with = "crate::rational::qstr")]
    pub minus_k_square: Q,
    pub halves: [DivisorClass; 2],
    pub halves_sum_to_minus_k: bool,
    pub halves_genus_zero: bool,
    pub halves_certified: bool,
    /// Smallest `-K·C` over the certified pool.
    #[serde(with = "crate::rational::qstr")]
    pub min_minus_k_pairing: Q,
    /// `m1 + m2 <= (-K)²` is impossible for positive integers once every
    /// certified class has `-K·C >= 1`.
    pub pairing_bound_excludes: bool,
    /// Brute force over the certified pool finds no `m1 C1 + m2 C2 = -K`.
    pub integral_pairs_found: Vec<(u32, DivisorClass, u32, DivisorClass)>,
    pub passed: bool,
}

/// The rational-only decomposition of `-K` on `CP² # 8`.
pub fn anticanonical_audit() -> AnticanonicalAudit {
    let s = SurfaceModel::rational(8);
    let mk = -&canonical_class(s);
    let big = DivisorClass::parse("6H-3E1-2E2-2E3-2E4-2E5-2E6-2E7-2E8", s).expect("literal");
    let e1 = DivisorClass::e(s, 1);
    let half = qr(1, 2);
    let sum = big.scale(&half).add_scaled(&half, &e1);
    let pool = default_pool(s);
    let certified = [&big, &e1]
        .iter()
        .all(|c| matches!(sw_certificate(c, &pool), Ok(SwOutcome::Certified(_))));
    let certs: Vec<DivisorClass> = certified_nontrivial_set(s).into_iter().map(|c| c.class).collect();
    let min_pair = certs.iter().map(|c| mk.dot(c)).min().unwrap_or_else(Q::zero);
    let mk2 = mk.square();
    let bound = min_pair >= Q::one() && mk2 < q(2);
    let index: std::collections::BTreeSet<&DivisorClass> = certs.iter().collect();
    let mut pairs = Vec::new();
    for c1 in &certs {
        for m1 in 1..=2u32 {
            for m2 in 1..=2u32 {
                let rest = mk.add_scaled(&q(-(m1 as i64)), c1).scale(&qr(1, m2 as i64));
                if index.contains(&rest) && (m1, c1) <= (m2, &rest) {
                    pairs.push((m1, c1.clone(), m2, rest));
                }
            }
        }
    }
    let halves_genus_zero = j_genus(&big).is_zero() && j_genus(&e1).is_zero();
    let passed = sum == mk && halves_genus_zero && certified && bound && pairs.is_empty() && mk2 == Q::one();
    AnticanonicalAudit {
        minus_k_square: mk2,
        halves: [big, e1],
        halves_sum_to_minus_k: sum == mk,
        halves_genus_zero,
        halves_certified: certified,
        min_minus_k_pairing: min_pair,
        pairing_bound_excludes: bound,
        integral_pairs_found: pairs,
        passed,
    }
}

/// Readable one-line summary of a certificate.
pub fn describe(c: &SwCertificate) -> String {
    format!(
        "{}: dim {}, witness {} with (K-e)·W = {}, |SW wall| = {}",
        c.class,
        fmt_q(&c.dimension),
        c.witness,
        fmt_q(&c.witness_pairing),
        c.magnitude
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(s: &str, surf: SurfaceModel) -> DivisorClass {
        DivisorClass::parse(s, surf).unwrap()
    }

    #[test]
    fn magnitudes() {
        let r2 = SurfaceModel::rational(2);
        assert_eq!(wall_crossing_magnitude(&cls("E1", r2)).unwrap(), BigInt::from(1));
        let t2 = SurfaceModel::trivial_ruled(2, 0).unwrap();
        assert_eq!(wall_crossing_magnitude(&cls("2U+3T", t2)).unwrap(), BigInt::from(9));
        let t3 = SurfaceModel::trivial_ruled(3, 0).unwrap();
        assert_eq!(wall_crossing_magnitude(&cls("T", t3)).unwrap(), BigInt::from(1));
    }

    #[test]
    fn certificates() {
        let t2 = SurfaceModel::trivial_ruled(2, 0).unwrap();
        let c = sw_certificate(&cls("U+T", t2), &[cls("T", t2)]).unwrap();
        let c = c.certificate().unwrap();
        assert_eq!(c.dimension, q(2));
        assert_eq!(c.witness_pairing, q(-3));
        assert_eq!(c.magnitude, BigInt::from(4));
        assert!(c.verify());
        let r2 = SurfaceModel::rational(2);
        let c = sw_certificate(&cls("H-E1-E2", r2), &[cls("H", r2)]).unwrap();
        assert_eq!(c.certificate().unwrap().witness_pairing, q(-4));
        let r1 = SurfaceModel::rational(1);
        let c = sw_certificate(&cls("3H-E1", r1), &[cls("H", r1)]).unwrap();
        assert_eq!(c.certificate().unwrap().dimension, q(16));
        let c = sw_certificate(&cls("-H", r1), &[cls("H", r1)]).unwrap();
        assert_eq!(
            c,
            SwOutcome::NoCertificate(NoCertificate::NegativeDimension { dimension: q(-2) })
        );
        for k in 1..=8 {
            let s = SurfaceModel::rational(k);
            for e in exceptional_classes(k).unwrap() {
                let out = sw_certificate(&e, &[DivisorClass::h(s)]).unwrap();
                assert!(out.certificate().is_some_and(SwCertificate::verify), "{e}");
            }
        }
    }

    #[test]
    fn witnesses() {
        let t2 = SurfaceModel::trivial_ruled(2, 0).unwrap();
        match non_extremal_witness(&cls("2U+3T", t2)).unwrap() {
            NonExtremal::Decomposed(d) => {
                assert_eq!(d.branch, WitnessBranch::HigherGenus);
                assert_eq!(d.summands[0].class, cls("2U+2T", t2));
                assert_eq!(d.summands[0].dimension, q(8));
                assert_eq!(d.summands[1].dimension, q(2));
                assert_eq!(d.summands[0].magnitude, BigInt::from(9));
                assert_eq!(d.summands[1].magnitude, BigInt::from(1));
                assert!(d.sum_matches);
            }
            other => panic!("{other:?}"),
        }
        let t1 = SurfaceModel::trivial_ruled(1, 0).unwrap();
        match non_extremal_witness(&cls("U+T", t1)).unwrap() {
            NonExtremal::Decomposed(d) => {
                assert_eq!(d.branch, WitnessBranch::Scaled);
                assert_eq!(d.scale, 3);
                assert_eq!(d.summands[0].class, cls("3U+2T", t1));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(non_extremal_witness(&cls("T", t1)).unwrap(), NonExtremal::Extremal { .. }));
    }

    #[test]
    fn anticanonical() {
        let a = anticanonical_audit();
        assert!(a.passed, "{a:?}");
    }
}
