//! Rational polyhedral cones in the intersection lattice: duals, extremal
//! rays, membership, the K-symplectic cone, the positive dual, the cone
//! theorem audit and nef thresholds.
//!
//! A facet class `f` stands for the inequality `f·x >= 0` under the
//! intersection pairing.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumeration::{exceptional_classes, EnumerationError};
use crate::lattice::{canonical_class, j_genus, k_dot, DivisorClass, LatticeError, SurfaceModel};
use crate::linalg::rank;
use crate::polyhedral::{canonical_basis, conic_combination, double_description, Conic};
use crate::rational::{fmt_q, q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConeError {
    #[error("a cone needs at least one nonzero generator")]
    Empty,
    #[error("generators live on different surfaces")]
    MixedSurfaces,
    #[error("cone is not pointed; lineality spanned by [{}]", list(.lineality))]
    NotPointed { lineality: Vec<DivisorClass> },
    #[error("{0} is not a rational surface")]
    NotRational(SurfaceModel),
    #[error("no curves given")]
    NoCurves,
    #[error("K is nef on the given curves (no curve with K·L < 0)")]
    KNef,
    #[error("omega pairs non-positively with {0}")]
    NotTamed(String),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

fn list(v: &[DivisorClass]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// A cone `cone(rays) + span(lineality)` together with its facets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalCone {
    pub ambient: SurfaceModel,
    /// Extremal rays of the pointed part, primitive and sorted.
    #[serde(default)]
    pub rays: Vec<DivisorClass>,
    /// Basis of the lineality space in reduced echelon form.
    #[serde(default)]
    pub lineality: Vec<DivisorClass>,
    /// Irredundant inequalities; an implicit equality `f·x = 0` appears as
    /// the pair `f`, `-f`.
    #[serde(default)]
    pub facets: Vec<DivisorClass>,
}

fn common_surface(v: &[DivisorClass]) -> Result<SurfaceModel, ConeError> {
    let s = v.first().ok_or(ConeError::Empty)?.surface();
    if v.iter().any(|c| c.surface() != s) {
        return Err(ConeError::MixedSurfaces);
    }
    Ok(s)
}

fn classes(s: SurfaceModel, vs: Vec<Vec<Q>>) -> Vec<DivisorClass> {
    let mut out: Vec<DivisorClass> = vs
        .into_iter()
        .map(|v| DivisorClass::new(s, v).expect("rank"))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Rays and lineality of `{x : f·x >= 0 for all f}`.
fn solve_facets(s: SurfaceModel, facets: &[DivisorClass]) -> (Vec<DivisorClass>, Vec<DivisorClass>) {
    let rows: Vec<Vec<Q>> = facets.iter().map(DivisorClass::covector).collect();
    let g = double_description(&rows, s.rank());
    let lin = canonical_basis(&g.lineality);
    (classes(s, g.rays), lin.into_iter().map(|v| DivisorClass::new(s, v).expect("rank")).collect())
}

/// Facets of `cone(rays) + span(lin)`.
fn dual_generators(s: SurfaceModel, rays: &[DivisorClass], lin: &[DivisorClass]) -> Vec<DivisorClass> {
    let mut gens: Vec<DivisorClass> = rays.to_vec();
    for l in lin {
        gens.push(l.clone());
        gens.push(-l);
    }
    let (r, l) = solve_facets(s, &gens);
    let mut facets = r;
    for m in l {
        facets.push(-&m);
        facets.push(m);
    }
    facets.sort();
    facets.dedup();
    facets
}

impl RationalCone {
    fn build(s: SurfaceModel, gens: &[DivisorClass]) -> Self {
        let facets = dual_generators(s, gens, &[]);
        let (rays, lineality) = solve_facets(s, &facets);
        RationalCone {
            ambient: s,
            rays,
            lineality,
            facets,
        }
    }

    /// The zero cone on `s`.
    pub fn origin(s: SurfaceModel) -> Self {
        Self::build(s, &[])
    }

    pub fn dimension(&self) -> usize {
        let vs: Vec<Vec<Q>> = self
            .rays
            .iter()
            .chain(&self.lineality)
            .map(|c| c.coeffs().to_vec())
            .collect();
        rank(&vs)
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_origin(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    /// Every ray and lineality direction satisfies every facet, and every
    /// facet is tight somewhere.
    pub fn is_consistent(&self) -> bool {
        let lin_ok = self
            .lineality
            .iter()
            .all(|l| self.facets.iter().all(|f| f.dot(l).is_zero()));
        let ray_ok = self
            .rays
            .iter()
            .all(|r| self.facets.iter().all(|f| !f.dot(r).is_negative()));
        lin_ok && ray_ok
    }

    pub fn contains(&self, x: &DivisorClass) -> bool {
        !matches!(membership(self, x), Membership::Outside { .. })
    }
}

/// Cone spanned by the given classes; zero generators are ignored.
pub fn cone_from_rays(rays: &[DivisorClass]) -> Result<RationalCone, ConeError> {
    let s = common_surface(rays)?;
    let gens: Vec<DivisorClass> = rays.iter().filter(|r| !r.is_zero()).map(DivisorClass::primitive).collect();
    if gens.is_empty() {
        return Err(ConeError::Empty);
    }
    Ok(RationalCone::build(s, &gens))
}

/// Cone cut out by `f·x >= 0`.
pub fn cone_from_facets(facets: &[DivisorClass]) -> Result<RationalCone, ConeError> {
    let s = common_surface(facets)?;
    let (rays, lin) = solve_facets(s, facets);
    let mut gens = rays;
    for l in &lin {
        gens.push(l.clone());
        gens.push(-l);
    }
    Ok(RationalCone::build(s, &gens))
}

/// `{y : y·x >= 0 for all x in C}`.
pub fn dual_cone(c: &RationalCone) -> RationalCone {
    RationalCone::build(c.ambient, &c.facets)
}

/// Extremal rays of a pointed cone.
pub fn extremal_rays(c: &RationalCone) -> Result<Vec<DivisorClass>, ConeError> {
    if !c.is_pointed() {
        return Err(ConeError::NotPointed {
            lineality: c.lineality.clone(),
        });
    }
    Ok(c.rays.clone())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Membership {
    Interior,
    Boundary { tight: Vec<DivisorClass> },
    Outside { violated: DivisorClass },
}

pub fn membership(c: &RationalCone, x: &DivisorClass) -> Membership {
    let mut tight = Vec::new();
    for f in &c.facets {
        let v = f.dot(x);
        if v.is_negative() {
            return Membership::Outside { violated: f.clone() };
        }
        if v.is_zero() {
            tight.push(f.clone());
        }
    }
    if tight.is_empty() {
        Membership::Interior
    } else {
        Membership::Boundary { tight }
    }
}

/// Exact answer to "is `x` a nonnegative combination of `gens`?".
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ConicCertificate {
    /// One coefficient per generator, as `p/q` strings.
    Combination { coefficients: Vec<String> },
    /// A class `F` with `F·g >= 0` for every generator and `F·x < 0`.
    Separated { functional: DivisorClass },
}

impl ConicCertificate {
    pub fn is_combination(&self) -> bool {
        matches!(self, ConicCertificate::Combination { .. })
    }

    /// Re-checks the certificate exactly.
    pub fn verify(&self, gens: &[DivisorClass], x: &DivisorClass) -> bool {
        match self {
            ConicCertificate::Combination { coefficients } => {
                let Some(lams) = coefficients
                    .iter()
                    .map(|s| crate::rational::parse_q(s))
                    .collect::<Option<Vec<Q>>>()
                else {
                    return false;
                };
                if lams.len() != gens.len() || lams.iter().any(Signed::is_negative) {
                    return false;
                }
                let mut acc = DivisorClass::zero(x.surface());
                for (l, g) in lams.iter().zip(gens) {
                    acc = acc.add_scaled(l, g);
                }
                &acc == x
            }
            ConicCertificate::Separated { functional } => {
                gens.iter().all(|g| !functional.dot(g).is_negative()) && functional.dot(x).is_negative()
            }
        }
    }
}

pub fn conic_certificate(gens: &[DivisorClass], x: &DivisorClass) -> Result<ConicCertificate, ConeError> {
    if gens.iter().any(|g| g.surface() != x.surface()) {
        return Err(ConeError::MixedSurfaces);
    }
    let cols: Vec<Vec<Q>> = gens.iter().map(|g| g.coeffs().to_vec()).collect();
    Ok(match conic_combination(&cols, x.coeffs()) {
        Conic::Combination(l) => ConicCertificate::Combination {
            coefficients: l.iter().map(fmt_q).collect(),
        },
        Conic::Separated(row) => ConicCertificate::Separated {
            functional: DivisorClass::from_covector(x.surface(), &row)?.primitive(),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Corner {
    pub ray: DivisorClass,
    pub square: String,
    pub genus: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KSymplecticCone {
    pub cone: RationalCone,
    pub corners: Vec<Corner>,
    /// Every corner has genus 0 and square 0 or 1.
    pub corners_ok: bool,
}

/// Classes pairing positively with every `-1` class inside the forward
/// cone. The round forward cone is replaced by its tangent planes along the
/// null classes `H - Ei` (and by `H·x >= 0`), which is exact whenever the
/// resulting corners have non-negative square; the corner report checks this.
pub fn k_symplectic_cone(k: usize) -> Result<KSymplecticCone, ConeError> {
    let s = SurfaceModel::rational(k);
    let h = DivisorClass::h(s);
    let mut facets = exceptional_classes(k)?;
    facets.push(h.clone());
    for i in 1..=k {
        facets.push(&h - &DivisorClass::e(s, i));
    }
    let cone = cone_from_facets(&facets)?;
    let corners: Vec<Corner> = cone
        .rays
        .iter()
        .map(|r| Corner {
            ray: r.clone(),
            square: fmt_q(&r.square()),
            genus: fmt_q(&j_genus(r)),
        })
        .collect();
    let corners_ok = cone.is_pointed()
        && cone.rays.iter().all(|r| {
            let sq = r.square();
            j_genus(r).is_zero() && (sq.is_zero() || sq == Q::one())
        });
    Ok(KSymplecticCone {
        cone,
        corners,
        corners_ok,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualRay {
    pub ray: DivisorClass,
    pub square: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositiveDual {
    pub linear_dual: RationalCone,
    pub rays: Vec<DualRay>,
    /// Extremal rays of the linear dual with negative square.
    pub round_boundary_rays: Vec<DivisorClass>,
    /// No round boundary: the dual is pointed and all its rays have
    /// non-negative square.
    pub polytopic: bool,
}

pub fn positive_dual(curves: &[DivisorClass]) -> Result<PositiveDual, ConeError> {
    let linear_dual = dual_cone(&cone_from_rays(curves)?);
    let round: Vec<DivisorClass> = linear_dual
        .rays
        .iter()
        .filter(|r| r.square().is_negative())
        .cloned()
        .collect();
    let polytopic = round.is_empty() && linear_dual.is_pointed();
    let rays = linear_dual
        .rays
        .iter()
        .map(|r| DualRay {
            ray: r.clone(),
            square: fmt_q(&r.square()),
        })
        .collect();
    Ok(PositiveDual {
        linear_dual,
        rays,
        round_boundary_rays: round,
        polytopic,
    })
}

/// Closure of the positive dual: in the linear dual, non-negative square,
/// and on the forward side.
pub fn in_positive_dual_closure(dual: &RationalCone, x: &DivisorClass) -> bool {
    let fwd = DivisorClass::forward(x.surface());
    dual.contains(x) && !x.square().is_negative() && !x.dot(&fwd).is_negative()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremalKind {
    MinusOne,
    Fiber,
    Line,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RayAudit {
    pub ray: DivisorClass,
    pub k_pairing: String,
    pub genus: String,
    pub kind: Option<ExtremalKind>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeTheoremAudit {
    pub rays: Vec<RayAudit>,
    pub violations: Vec<String>,
    pub passed: bool,
}

fn extremal_kind(r: &DivisorClass) -> Option<ExtremalKind> {
    let s = r.surface();
    let sq = r.square();
    let kr = k_dot(r);
    if sq == q(-1) && kr == q(-1) {
        return Some(ExtremalKind::MinusOne);
    }
    let minimal_ruled = s.is_ruled() && s.k() == 0;
    let one_point = s.is_rational() && s.k() == 1;
    if sq.is_zero() && kr == q(-2) && (minimal_ruled || one_point) {
        return Some(ExtremalKind::Fiber);
    }
    if s.is_rational() && s.k() == 0 && *r == DivisorClass::h(s) {
        return Some(ExtremalKind::Line);
    }
    None
}

/// Checks the extremal rays of `cone(generators)` with `K·r < 0`: genus 0,
/// `-3 <= K·r`, and one of the three extremal shapes.
pub fn cone_theorem_audit(generators: &[DivisorClass]) -> Result<ConeTheoremAudit, ConeError> {
    let c = cone_from_rays(generators)?;
    let mut violations = Vec::new();
    if !c.is_pointed() {
        violations.push(format!("curve cone is not pointed: lineality [{}]", list(&c.lineality)));
    }
    let mut rays = Vec::new();
    for r in &c.rays {
        let kr = k_dot(r);
        if !kr.is_negative() {
            continue;
        }
        let g = j_genus(r);
        let kind = extremal_kind(r);
        let mut ok = true;
        if !g.is_zero() {
            violations.push(format!("{r}: genus {} is not 0", fmt_q(&g)));
            ok = false;
        }
        if kr < q(-3) {
            violations.push(format!("{r}: K·r = {} < -3", fmt_q(&kr)));
            ok = false;
        }
        if kind.is_none() {
            violations.push(format!("{r}: not a -1 class, fiber or line"));
            ok = false;
        }
        rays.push(RayAudit {
            ray: r.clone(),
            k_pairing: fmt_q(&kr),
            genus: fmt_q(&g),
            kind,
            ok,
        });
    }
    Ok(ConeTheoremAudit {
        passed: violations.is_empty(),
        rays,
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NefThreshold {
    #[serde(with = "crate::rational::qstr")]
    pub value: Q,
    pub attained_by: DivisorClass,
    /// Set when `omega` is integral and the denominator is at most 3.
    pub denominator_ok: bool,
}

/// `max ω·L / (-K·L)` over the curves with `K·L < 0`.
pub fn nef_threshold(omega: &DivisorClass, curves: &[DivisorClass]) -> Result<NefThreshold, ConeError> {
    if curves.is_empty() {
        return Err(ConeError::NoCurves);
    }
    if curves.iter().any(|c| c.surface() != omega.surface()) {
        return Err(ConeError::MixedSurfaces);
    }
    let k = canonical_class(omega.surface());
    for c in curves {
        if !omega.dot(c).is_positive() {
            return Err(ConeError::NotTamed(c.to_string()));
        }
    }
    let mut best: Option<(Q, DivisorClass)> = None;
    for c in curves {
        let kc = k.dot(c);
        if !kc.is_negative() {
            continue;
        }
        let t = omega.dot(c) / -kc;
        if best.as_ref().is_none_or(|(b, _)| t > *b) {
            best = Some((t, c.clone()));
        }
    }
    let (t, l) = best.ok_or(ConeError::KNef)?;
    let denominator_ok = !omega.is_integral() || *t.denom() <= 3.into();
    Ok(NefThreshold {
        value: t,
        attained_by: l,
        denominator_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;

    fn lit(s: &str, k: usize) -> DivisorClass {
        DivisorClass::parse(s, SurfaceModel::rational(k)).unwrap()
    }

    fn lits(xs: &[&str], k: usize) -> Vec<DivisorClass> {
        let mut v: Vec<DivisorClass> = xs.iter().map(|s| lit(s, k)).collect();
        v.sort();
        v
    }

    #[test]
    fn construction() {
        let c = cone_from_rays(&[lit("E1", 2), lit("2E1", 2)]).unwrap();
        assert_eq!(c.rays, vec![lit("E1", 2)]);
        let c = cone_from_rays(&lits(&["H-E1-E2", "E1", "E2"], 2)).unwrap();
        assert_eq!(c.rays.len(), 3);
        assert!(c.is_consistent());
        let c = cone_from_facets(&[lit("H", 0)]).unwrap();
        assert_eq!(c.rays, vec![lit("H", 0)]);
        assert!(cone_from_rays(&[]).is_err());
        let c = cone_from_rays(&lits(&["E1", "E2", "E1+E2"], 2)).unwrap();
        assert_eq!(extremal_rays(&c).unwrap(), lits(&["E1", "E2"], 2));
    }

    #[test]
    fn duals_of_two_point_cones() {
        let c = cone_from_rays(&lits(&["E1", "E2", "H-E1-E2"], 2)).unwrap();
        assert_eq!(dual_cone(&c).rays, lits(&["H", "H-E1", "H-E2"], 2));
        let c = cone_from_rays(&lits(&["-H+2E1", "E2", "H-E1-E2"], 2)).unwrap();
        assert_eq!(dual_cone(&c).rays, lits(&["2H-E1", "H-E1", "2H-E1-E2"], 2));
        let full = cone_from_rays(&lits(&["H", "-H", "E1", "-E1"], 1)).unwrap();
        assert!(dual_cone(&full).is_origin());
    }

    #[test]
    fn double_dual() {
        let c = cone_from_rays(&lits(&["E1", "E2", "H-E1-E2", "E3-E1"], 3)).unwrap();
        let dd = dual_cone(&dual_cone(&c));
        assert_eq!(dd.rays, c.rays);
        assert_eq!(dd.lineality, c.lineality);
    }

    #[test]
    fn membership_examples() {
        let c = cone_from_rays(&lits(&["H", "H-E1", "H-E2"], 2)).unwrap();
        // sum of two rays only, so it sits on the facet cut by H-E1-E2
        assert_eq!(
            membership(&c, &lit("2H-E1-E2", 2)),
            Membership::Boundary {
                tight: vec![lit("H-E1-E2", 2)]
            }
        );
        assert_eq!(membership(&c, &lit("3H-E1-E2", 2)), Membership::Interior);
        assert!(matches!(membership(&c, &lit("E1", 2)), Membership::Outside { .. }));
        assert!(matches!(membership(&c, &DivisorClass::zero(SurfaceModel::rational(2))), Membership::Boundary { .. }));
    }

    #[test]
    fn certificates() {
        let gens = lits(&["-H+2E1", "H-E1-E2", "E2"], 2);
        let cert = conic_certificate(&gens, &lit("E1", 2)).unwrap();
        assert!(cert.is_combination() && cert.verify(&gens, &lit("E1", 2)));
        let gens = lits(&["E1", "E2", "H", "H-E1", "H-E2"], 2);
        let x = lit("H-E1-E2", 2);
        let cert = conic_certificate(&gens, &x).unwrap();
        assert!(!cert.is_combination());
        assert!(cert.verify(&gens, &x));
    }

    #[test]
    fn k_symplectic_corners() {
        let k1 = k_symplectic_cone(1).unwrap();
        assert_eq!(k1.cone.rays, lits(&["H", "H-E1"], 1));
        let k2 = k_symplectic_cone(2).unwrap();
        assert_eq!(k2.cone.rays, lits(&["H", "H-E1", "H-E2"], 2));
        let k3 = k_symplectic_cone(3).unwrap();
        assert!(k3.cone.rays.contains(&lit("2H-E1-E2-E3", 3)));
        assert!(k3.cone.rays.contains(&lit("H-E3", 3)));
        for k in 0..=3 {
            assert!(k_symplectic_cone(k).unwrap().corners_ok, "k = {k}");
        }
    }

    #[test]
    fn positive_duals() {
        let p = positive_dual(&lits(&["E1", "E2", "H-E1-E2"], 2)).unwrap();
        assert!(p.polytopic);
        let p = positive_dual(&lits(&["-H+2E1", "E2", "H-E1-E2"], 2)).unwrap();
        assert!(p.polytopic);
        let sq: Vec<String> = p.rays.iter().map(|r| r.square.clone()).collect();
        assert_eq!(sq, vec!["0", "2", "3"]);
        let p = positive_dual(&[lit("E1", 2)]).unwrap();
        assert!(!p.polytopic);
        assert_eq!(p.round_boundary_rays, vec![lit("-E1", 2)]);
    }

    #[test]
    fn audits() {
        assert!(cone_theorem_audit(&lits(&["E1", "E2", "H-E1-E2"], 2)).unwrap().passed);
        assert!(cone_theorem_audit(&[lit("H", 0)]).unwrap().passed);
        let bad = cone_theorem_audit(&[lit("3H-E1", 1)]).unwrap();
        assert!(!bad.passed);
        assert_eq!(bad.rays[0].k_pairing, "-8");
    }

    #[test]
    fn nef_thresholds() {
        let t = nef_threshold(&lit("H", 0), &[lit("H", 0)]).unwrap();
        assert_eq!(t.value, qr(1, 3));
        let t = nef_threshold(&lit("2H-E1", 1), &lits(&["E1", "H-E1"], 1)).unwrap();
        assert_eq!(t.value, q(1));
        let t = nef_threshold(&lit("3H-E1-E2", 2), &lits(&["E1", "E2", "H-E1-E2"], 2)).unwrap();
        assert_eq!(t.value, q(1));
        assert!(t.denominator_ok);
        assert_eq!(nef_threshold(&lit("H", 0), &[]), Err(ConeError::NoCurves));
        assert_eq!(nef_threshold(&lit("H", 1), &[lit("E1", 1)]).unwrap_err(), ConeError::NotTamed("E1".into()));
    }
}
