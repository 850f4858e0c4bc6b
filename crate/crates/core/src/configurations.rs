//! Negative-curve configurations: the three validity properties,
//! combinatorial blow-down, the `CP² # 3` catalog, minimal ruled negative
//! classes and the disjoint `-1` constructions.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::cones::{conic_certificate, dual_cone, cone_from_rays, ConeError, ConicCertificate};
use crate::cremona::reflect;
use crate::enumeration::{negative_family, NegativeFamily};
use crate::lattice::{j_genus, k_dot, DivisorClass, LatticeError, SurfaceModel};
use crate::rational::{fmt_q, q, Q};
use crate::swcert::{certified_nontrivial_set, exceptional_set};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("curve {0} lives on a different surface")]
    SurfaceMismatch(String),
    #[error("curve {0} has non-negative square")]
    NonNegativeSquare(String),
    #[error("curve {0} has negative genus")]
    NegativeGenus(String),
    #[error("extra class {0} must have square 0")]
    BadExtra(String),
    #[error("{0} is not a -1 class of the configuration")]
    NotMinusOne(String),
    #[error("{0} cannot be moved to a coordinate class Ei")]
    NoRelabeling(String),
    #[error("need 3 <= k and 1 <= l <= k, got k = {k}, l = {l}")]
    Range { k: usize, l: usize },
    #[error("{0} is not a minimal ruled surface")]
    NotMinimalRuled(SurfaceModel),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Cone(#[from] ConeError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NegativeConfiguration {
    pub surface: SurfaceModel,
    pub curves: Vec<DivisorClass>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub extra_square_zero: Vec<DivisorClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ClassInput {
    Literal(String),
    Class(DivisorClass),
}

#[derive(Deserialize)]
struct ConfigRepr {
    surface: SurfaceModel,
    curves: Vec<ClassInput>,
    #[serde(default)]
    extra_square_zero: Vec<ClassInput>,
    #[serde(default)]
    n: Option<u32>,
}

impl ClassInput {
    fn resolve(self, s: SurfaceModel) -> Result<DivisorClass, ConfigError> {
        match self {
            ClassInput::Literal(l) => Ok(DivisorClass::parse(&l, s)?),
            ClassInput::Class(c) => Ok(c),
        }
    }
}

impl<'de> Deserialize<'de> for NegativeConfiguration {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = ConfigRepr::deserialize(d)?;
        let s = r.surface.validated().map_err(serde::de::Error::custom)?;
        let build = || -> Result<Self, ConfigError> {
            let curves = r.curves.into_iter().map(|c| c.resolve(s)).collect::<Result<Vec<_>, _>>()?;
            let extra = r
                .extra_square_zero
                .into_iter()
                .map(|c| c.resolve(s))
                .collect::<Result<Vec<_>, _>>()?;
            let mut cfg = NegativeConfiguration::new(s, curves)?.with_extra(extra)?;
            cfg.n = r.n;
            Ok(cfg)
        };
        build().map_err(serde::de::Error::custom)
    }
}

impl NegativeConfiguration {
    pub fn new(surface: SurfaceModel, curves: Vec<DivisorClass>) -> Result<Self, ConfigError> {
        for c in &curves {
            if c.surface() != surface {
                return Err(ConfigError::SurfaceMismatch(c.to_string()));
            }
            if !c.square().is_negative() {
                return Err(ConfigError::NonNegativeSquare(c.to_string()));
            }
            if j_genus(c).is_negative() {
                return Err(ConfigError::NegativeGenus(c.to_string()));
            }
        }
        Ok(NegativeConfiguration {
            surface,
            curves,
            extra_square_zero: Vec::new(),
            n: None,
        })
    }

    pub fn from_literals(surface: SurfaceModel, curves: &[&str]) -> Result<Self, ConfigError> {
        let cs = curves
            .iter()
            .map(|l| DivisorClass::parse(l, surface))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(surface, cs)
    }

    pub fn with_extra(mut self, extra: Vec<DivisorClass>) -> Result<Self, ConfigError> {
        for c in &extra {
            if c.surface() != self.surface {
                return Err(ConfigError::SurfaceMismatch(c.to_string()));
            }
            if !c.square().is_zero() {
                return Err(ConfigError::BadExtra(c.to_string()));
            }
        }
        self.extra_square_zero = extra;
        Ok(self)
    }

    pub fn with_n(mut self, n: u32) -> Self {
        self.n = Some(n);
        self
    }

    /// Pairwise pairings of the curves (squares on the diagonal).
    pub fn intersection_matrix(&self) -> Vec<Vec<Q>> {
        self.curves
            .iter()
            .map(|a| self.curves.iter().map(|b| a.dot(b)).collect())
            .collect()
    }

    /// Same surface and same set of curves, ignoring order.
    pub fn same_curves(&self, other: &Self) -> bool {
        let a: BTreeSet<&DivisorClass> = self.curves.iter().collect();
        let b: BTreeSet<&DivisorClass> = other.curves.iter().collect();
        self.surface == other.surface && a == b
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassifiedCurve {
    pub class: DivisorClass,
    pub family: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct P1Report {
    pub passed: bool,
    pub classified: Vec<ClassifiedCurve>,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct P2Report {
    pub passed: bool,
    pub witness: Option<DivisorClass>,
    pub witness_square: Option<String>,
    pub certified: Vec<DivisorClass>,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct P3Entry {
    pub class: DivisorClass,
    pub certificate: ConicCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct P3Report {
    pub passed: bool,
    pub generators: Vec<DivisorClass>,
    pub entries: Vec<P3Entry>,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub p1: P1Report,
    pub p2: P2Report,
    pub p3: P3Report,
    pub passed: bool,
}

fn classify(c: &DivisorClass) -> Result<String, String> {
    let s = c.surface();
    if s.is_rational() {
        return match negative_family(c) {
            Some(NegativeFamily::Positive(i)) => Ok(format!("a>0 family {i}")),
            Some(NegativeFamily::NonPositive { n }) => Ok(format!("a<=0 family, n = {n}")),
            None => Err(format!("{c} is not in the negative genus-0 classification")),
        };
    }
    let t = DivisorClass::t(s);
    if let Some(k) = ruled_section_index(c) {
        return Ok(format!("U-{k}T"));
    }
    for i in 1..=s.k() {
        let e = DivisorClass::e(s, i);
        if *c == e || *c == &t - &e {
            return Ok("exceptional".into());
        }
    }
    Err(format!("{c} is outside the supported ruled classification"))
}

/// `k` when `c = U - kT` with `k >= 1` and negative square.
fn ruled_section_index(c: &DivisorClass) -> Option<i64> {
    let s = c.surface();
    if !s.is_ruled() {
        return None;
    }
    let k = crate::rational::to_i64(c.coeff(1))?;
    let rest_zero = (2..c.coeffs().len()).all(|i| c.coeff(i).is_zero());
    (c.coeff(0).is_one() && k < 0 && rest_zero && c.square().is_negative()).then_some(-k)
}

fn check_p1(cfg: &NegativeConfiguration) -> P1Report {
    let mut failures = Vec::new();
    let mut classified = Vec::new();
    for c in &cfg.curves {
        match classify(c) {
            Ok(family) => classified.push(ClassifiedCurve { class: c.clone(), family }),
            Err(e) => failures.push(e),
        }
    }
    for (i, a) in cfg.curves.iter().enumerate() {
        for b in &cfg.curves[i + 1..] {
            let p = a.dot(b);
            if p.is_negative() {
                failures.push(format!("{a}·{b} = {}", fmt_q(&p)));
            }
        }
    }
    P1Report {
        passed: failures.is_empty(),
        classified,
        failures,
    }
}

fn generator_pool(cfg: &NegativeConfiguration, certified: &[DivisorClass]) -> Vec<DivisorClass> {
    let mut seen = BTreeSet::new();
    cfg.curves
        .iter()
        .chain(&cfg.extra_square_zero)
        .chain(certified)
        .filter(|c| seen.insert((*c).clone()))
        .cloned()
        .collect()
}

fn check_p2(cfg: &NegativeConfiguration, certified: &[DivisorClass]) -> P2Report {
    let gens = generator_pool(cfg, certified);
    let mut failures = Vec::new();
    let witness = match cone_from_rays(&gens) {
        Ok(cone) => {
            let dual = dual_cone(&cone);
            let fwd = DivisorClass::forward(cfg.surface);
            let mut a = DivisorClass::zero(cfg.surface);
            for r in &dual.rays {
                a = &a + r;
            }
            for l in &dual.lineality {
                a = if l.dot(&fwd).is_negative() { &a - l } else { &a + l };
            }
            let mut boost = 0;
            while !a.square().is_positive() && boost < 8 {
                for r in dual.rays.iter().filter(|r| r.square().is_positive()) {
                    a = &a + r;
                }
                boost += 1;
            }
            Some(a.primitive())
        }
        Err(e) => {
            failures.push(e.to_string());
            None
        }
    };
    if let Some(a) = &witness {
        if !a.square().is_positive() {
            failures.push(format!("witness {a} has square {}", fmt_q(&a.square())));
        }
        for g in &gens {
            let p = a.dot(g);
            if !p.is_positive() {
                failures.push(format!("witness pairs to {} with {g}", fmt_q(&p)));
            }
        }
    }
    P2Report {
        passed: failures.is_empty() && witness.is_some(),
        witness_square: witness.as_ref().map(|a| fmt_q(&a.square())),
        witness,
        certified: certified.to_vec(),
        failures,
    }
}

fn check_p3(cfg: &NegativeConfiguration, certified: &[DivisorClass]) -> P3Report {
    let exceptional = exceptional_set(cfg.surface);
    let skip: BTreeSet<&DivisorClass> = exceptional.iter().collect();
    let non_exc: Vec<DivisorClass> = certified.iter().filter(|c| !skip.contains(c)).cloned().collect();
    let gens = generator_pool(cfg, &non_exc);
    let mut entries = Vec::new();
    let mut failures = Vec::new();
    for e in &exceptional {
        match conic_certificate(&gens, e) {
            Ok(cert) => {
                if !cert.is_combination() {
                    failures.push(format!("{e} is not in the cone"));
                }
                entries.push(P3Entry {
                    class: e.clone(),
                    certificate: cert,
                });
            }
            Err(err) => failures.push(format!("{e}: {err}")),
        }
    }
    P3Report {
        passed: failures.is_empty(),
        generators: gens,
        entries,
        failures,
    }
}

/// Runs the three validity properties. Never errors: problems are report
/// entries.
pub fn validate_configuration(cfg: &NegativeConfiguration) -> ValidationReport {
    let certified: Vec<DivisorClass> = if cfg.surface.is_rational() && cfg.surface.k() > 8 {
        Vec::new()
    } else {
        certified_nontrivial_set(cfg.surface).into_iter().map(|c| c.class).collect()
    };
    let (p1, p2, p3) = std::thread::scope(|sc| {
        let h1 = sc.spawn(|| check_p1(cfg));
        let h2 = sc.spawn(|| check_p2(cfg, &certified));
        let p3 = check_p3(cfg, &certified);
        (h1.join().expect("p1"), h2.join().expect("p2"), p3)
    });
    let mut p3 = p3;
    if cfg.surface.is_rational() && cfg.surface.k() > 8 {
        p3.passed = false;
        p3.failures.push("k > 8: no finite certified set".into());
    }
    let passed = p1.passed && p2.passed && p3.passed;
    ValidationReport { p1, p2, p3, passed }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlowDownRecord {
    pub original: DivisorClass,
    pub image: DivisorClass,
    #[serde(with = "crate::rational::qstr")]
    pub c_dot_e: Q,
    pub square_identity: bool,
    pub canonical_identity: bool,
    #[serde(with = "crate::rational::qstr")]
    pub genus_before: Q,
    #[serde(with = "crate::rational::qstr")]
    pub genus_after: Q,
    /// `g' >= g`, with equality exactly when `C·E ∈ {0, 1}`.
    pub monotone: bool,
    pub kept: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlowDown {
    pub at: DivisorClass,
    /// Cremona reflections applied first, as root triples.
    pub relabeling: Vec<(usize, usize, usize)>,
    pub contracted_index: usize,
    pub config: NegativeConfiguration,
    pub dropped: Vec<DivisorClass>,
    pub records: Vec<BlowDownRecord>,
    pub identities_hold: bool,
}

fn unit_index(e: &DivisorClass) -> Option<usize> {
    let s = e.surface();
    (1..=s.k()).find(|&i| *e == DivisorClass::e(s, i))
}

/// Shortest sequence of Cremona reflections taking `e` to some `Ei`.
fn path_to_unit(e: &DivisorClass) -> Option<Vec<(usize, usize, usize)>> {
    let k = e.surface().k();
    if !e.surface().is_rational() || k < 3 {
        return None;
    }
    let mut triples = Vec::new();
    for i in 1..=k {
        for j in i + 1..=k {
            for l in j + 1..=k {
                triples.push((i, j, l));
            }
        }
    }
    type Back = Option<(DivisorClass, (usize, usize, usize))>;
    let mut prev: BTreeMap<DivisorClass, Back> = BTreeMap::new();
    prev.insert(e.clone(), None);
    let mut queue = VecDeque::from([e.clone()]);
    while let Some(x) = queue.pop_front() {
        if unit_index(&x).is_some() {
            let mut path = Vec::new();
            let mut cur = x;
            while let Some(Some((p, t))) = prev.get(&cur).cloned() {
                path.push(t);
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        if prev.len() > 100_000 {
            return None;
        }
        for &t in &triples {
            let y = reflect(&x, t).ok()?;
            if !prev.contains_key(&y) {
                prev.insert(y.clone(), Some((x.clone(), t)));
                queue.push_back(y);
            }
        }
    }
    None
}

fn drop_coordinate(c: &DivisorClass, idx: usize) -> DivisorClass {
    let s = c.surface();
    let pos = s.offset() + idx - 1;
    let coeffs: Vec<Q> = c
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != pos)
        .map(|(_, v)| v.clone())
        .collect();
    DivisorClass::new(s.with_k(s.k() - 1), coeffs).expect("rank")
}

/// Contracts the `-1` class `e` of the configuration: `C' = C + (C·E)E`,
/// then the `E` coordinate is deleted and non-negative classes dropped.
pub fn blow_down(cfg: &NegativeConfiguration, e: &DivisorClass) -> Result<BlowDown, ConfigError> {
    let minus_one = e.square() == -Q::one() && j_genus(e).is_zero();
    if !cfg.curves.contains(e) || !minus_one {
        return Err(ConfigError::NotMinusOne(e.to_string()));
    }
    let path = match unit_index(e) {
        Some(_) => Vec::new(),
        None => path_to_unit(e).ok_or_else(|| ConfigError::NoRelabeling(e.to_string()))?,
    };
    let apply = |c: &DivisorClass| -> DivisorClass {
        path.iter()
            .fold(c.clone(), |acc, &t| reflect(&acc, t).expect("integral rational class"))
    };
    let target = apply(e);
    let idx = unit_index(&target).expect("path ends at a unit class");
    let ek = DivisorClass::e(cfg.surface, idx);
    let mut records = Vec::new();
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    let mut identities = true;
    for c in cfg.curves.iter().filter(|c| *c != e) {
        let moved = apply(c);
        let m = moved.dot(&ek);
        let full = moved.add_scaled(&m, &ek);
        identities &= full.dot(&ek).is_zero();
        let image = drop_coordinate(&full, idx);
        let square_identity = image.square() == moved.square() + &m * &m;
        let canonical_identity = k_dot(&image) == k_dot(&moved) - &m;
        let g0 = j_genus(c);
        let g1 = j_genus(&image);
        let small = m.is_zero() || m.is_one();
        let monotone = if small { g1 == g0 } else { g1 > g0 };
        identities &= square_identity && canonical_identity && monotone;
        let keep = image.square().is_negative();
        if keep {
            if !kept.contains(&image) {
                kept.push(image.clone());
            }
        } else {
            dropped.push(image.clone());
        }
        records.push(BlowDownRecord {
            original: c.clone(),
            image,
            c_dot_e: m,
            square_identity,
            canonical_identity,
            genus_before: g0,
            genus_after: g1,
            monotone,
            kept: keep,
        });
    }
    let extra: Vec<DivisorClass> = cfg
        .extra_square_zero
        .iter()
        .map(|c| {
            let moved = apply(c);
            let m = moved.dot(&ek);
            drop_coordinate(&moved.add_scaled(&m, &ek), idx)
        })
        .filter(|c| c.square().is_zero() && !c.is_zero())
        .collect();
    let mut config = NegativeConfiguration::new(cfg.surface.with_k(cfg.surface.k() - 1), kept)?.with_extra(extra)?;
    config.n = cfg.n;
    Ok(BlowDown {
        at: e.clone(),
        relabeling: path,
        contracted_index: idx,
        config,
        dropped,
        records,
        identities_hold: identities,
    })
}

/// The square `-1`, genus-0 classes of the configuration.
pub fn count_minus_one(cfg: &NegativeConfiguration) -> Vec<DivisorClass> {
    cfg.curves
        .iter()
        .filter(|c| c.square() == -Q::one() && j_genus(c).is_zero())
        .cloned()
        .collect()
}

/// `-nH + (n+1)E1 - Σ_{i in minus} Ei` together with plain `Ei`, `H - ..`
/// literals on `k` blow-ups.
fn rational_class(k: usize, a: i64, e: &[(usize, i64)]) -> DivisorClass {
    let mut c = vec![q(0); k + 1];
    c[0] = q(a);
    for &(i, v) in e {
        c[i] = &c[i] + q(v);
    }
    DivisorClass::new(SurfaceModel::rational(k), c).expect("rank")
}

fn section_class(k: usize, n: u32, minus: &[usize]) -> DivisorClass {
    let n = n as i64;
    let mut e = vec![(1, n + 1)];
    e.extend(minus.iter().map(|&i| (i, -1)));
    rational_class(k, -n, &e)
}

fn lit(k: usize, l: &str) -> DivisorClass {
    DivisorClass::parse(l, SurfaceModel::rational(k)).expect("literal")
}

fn config(k: usize, curves: Vec<DivisorClass>, n: u32) -> NegativeConfiguration {
    NegativeConfiguration::new(SurfaceModel::rational(k), curves)
        .expect("catalog curves are negative")
        .with_n(n)
}

/// `{(n+1)E1 - nH}` on `CP² # 1`.
pub fn cp2_1_configuration(n: u32) -> NegativeConfiguration {
    config(1, vec![section_class(1, n, &[])], n)
}

/// The two `CP² # 2` families.
pub fn cp2_2_configurations(n: u32) -> Vec<NegativeConfiguration> {
    let base = || vec![lit(2, "E2"), lit(2, "H-E1-E2")];
    let mut a = base();
    a.push(section_class(2, n, &[2]));
    let mut b = base();
    b.push(section_class(2, n, &[]));
    vec![config(2, a, n), config(2, b, n)]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub case: u8,
    pub variant: u8,
    pub n: u32,
    pub config: NegativeConfiguration,
    /// Index into `cp2_2_configurations(n)` reached by blowing down `E3`.
    pub blow_down_target: usize,
}

/// The seven blow-up positions over `CP² # 2`, with both variants where the
/// base configuration matters.
pub fn catalog_cp2_3(n: u32) -> Vec<CatalogEntry> {
    let l = |s: &str| lit(3, s);
    let nn = |minus: &[usize]| section_class(3, n, minus);
    let mut out = Vec::new();
    let mut push = |case: u8, variant: u8, target: usize, curves: Vec<DivisorClass>| {
        out.push(CatalogEntry {
            case,
            variant,
            n,
            config: config(3, curves, n),
            blow_down_target: target,
        });
    };
    push(1, 1, 0, vec![l("E3"), l("E2"), l("H-E1-E2"), l("H-E1-E3"), nn(&[2])]);
    let mut c12 = vec![l("E3"), l("E2"), l("H-E1-E2"), l("H-E1-E3")];
    if n == 0 {
        c12.push(l("H-E2-E3"));
    }
    c12.push(nn(&[]));
    push(1, 2, 1, c12);
    push(2, 1, 0, vec![l("E3"), l("E2-E3"), l("H-E1-E2"), nn(&[2])]);
    let mut c22 = vec![l("E3"), l("E2-E3"), l("H-E1-E2")];
    if n == 0 {
        c22.push(l("H-E2-E3"));
    }
    c22.push(nn(&[]));
    push(2, 2, 1, c22);
    push(3, 1, 0, vec![l("E3"), l("E2"), l("H-E1-E2-E3"), nn(&[2])]);
    push(3, 2, 1, vec![l("E3"), l("E2"), l("H-E1-E2-E3"), nn(&[])]);
    push(4, 1, 0, vec![l("E3"), l("E2"), l("H-E1-E2"), l("H-E1-E3"), nn(&[2, 3])]);
    push(4, 2, 1, vec![l("E3"), l("E2"), l("H-E1-E2"), l("H-E1-E3"), nn(&[3])]);
    push(5, 1, 1, vec![l("E3"), l("E2"), l("H-E1-E2-E3"), nn(&[3])]);
    push(6, 1, 0, vec![l("E3"), l("E2-E3"), l("H-E1-E2"), nn(&[2, 3])]);
    push(7, 1, 0, vec![l("E3"), l("E2-E3"), l("H-E1-E2-E3"), nn(&[2])]);
    push(7, 2, 1, vec![l("E3"), l("E2-E3"), l("H-E1-E2-E3"), nn(&[])]);
    out
}

/// `H - E1 - .. - Ek, E1, .., E(l-1), El - E(l+1), .., E(k-1) - Ek, Ek`.
pub fn disjoint_minus_one_configuration(k: usize, l: usize) -> Result<NegativeConfiguration, ConfigError> {
    if k < 3 || l < 1 || l > k {
        return Err(ConfigError::Range { k, l });
    }
    let all: Vec<(usize, i64)> = (1..=k).map(|i| (i, -1)).collect();
    let mut curves = vec![rational_class(k, 1, &all)];
    curves.extend((1..l).map(|i| rational_class(k, 0, &[(i, 1)])));
    curves.extend((l..k).map(|i| rational_class(k, 0, &[(i, 1), (i + 1, -1)])));
    curves.push(rational_class(k, 0, &[(k, 1)]));
    NegativeConfiguration::new(SurfaceModel::rational(k), curves)
}

/// All `aU + bT` with `|a|, |b| <= bound`, negative square, `g >= 0` and
/// `2g - 2 >= a(2h - 2)`.
pub fn ruled_negative_classes(s: SurfaceModel, bound: i64) -> Result<Vec<DivisorClass>, ConfigError> {
    let Some(h) = s.base_genus() else {
        return Err(ConfigError::NotMinimalRuled(s));
    };
    if s.k() != 0 {
        return Err(ConfigError::NotMinimalRuled(s));
    }
    let mut out = Vec::new();
    for a in -bound..=bound {
        for b in (-bound..=bound).rev() {
            let c = DivisorClass::from_ints(s, &[a, b])?;
            if !c.square().is_negative() {
                continue;
            }
            let g = j_genus(&c);
            if g.is_negative() {
                continue;
            }
            let lhs = &g * q(2) - q(2);
            if lhs >= q(a * (2 * h as i64 - 2)) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(k: usize) -> SurfaceModel {
        SurfaceModel::rational(k)
    }

    #[test]
    fn validation_examples() {
        let cfg = NegativeConfiguration::from_literals(r(2), &["E2", "H-E1-E2", "-H+2E1"]).unwrap();
        let rep = validate_configuration(&cfg);
        assert!(rep.passed, "{rep:#?}");
        let e1 = rep.p3.entries.iter().find(|e| e.class == lit(2, "E1")).unwrap();
        assert_eq!(
            e1.certificate,
            ConicCertificate::Combination {
                coefficients: vec!["1".into(), "1".into(), "1".into(), "0".into(), "0".into(), "0".into()]
            }
        );
        let bad = NegativeConfiguration::from_literals(r(2), &["E1", "E2"]).unwrap();
        let rep = validate_configuration(&bad);
        assert!(rep.p1.passed && !rep.p3.passed);
        assert!(rep.p3.failures.iter().any(|f| f.starts_with("H-E1-E2")));
    }

    #[test]
    fn catalog_validates_and_maps() {
        for n in 0..=2 {
            let targets = cp2_2_configurations(n);
            for t in &targets {
                assert!(validate_configuration(t).passed);
                assert!(count_minus_one(t).len() >= 2);
            }
            for entry in catalog_cp2_3(n) {
                let rep = validate_configuration(&entry.config);
                assert!(rep.passed, "case {} v{} n={n}: {:?} {:?} {:?}", entry.case, entry.variant, rep.p1.failures, rep.p2.failures, rep.p3.failures);
                let bd = blow_down(&entry.config, &lit(3, "E3")).unwrap();
                assert!(bd.identities_hold);
                assert!(
                    bd.config.same_curves(&targets[entry.blow_down_target]),
                    "case {} v{}: {:?}",
                    entry.case,
                    entry.variant,
                    bd.config.curves
                );
            }
        }
        let c12 = &catalog_cp2_3(0)[1];
        assert!(c12.config.curves.contains(&lit(3, "H-E2-E3")));
        let c22 = &catalog_cp2_3(0)[3];
        assert!(c22.config.curves.contains(&lit(3, "H-E2-E3")));
        assert!(!catalog_cp2_3(1)[3].config.curves.contains(&lit(3, "H-E2-E3")));
        let case7 = catalog_cp2_3(1).into_iter().find(|e| e.case == 7).unwrap();
        assert_eq!(count_minus_one(&case7.config), vec![lit(3, "E3")]);
    }

    #[test]
    fn blow_down_examples() {
        let cfg = NegativeConfiguration::from_literals(r(2), &["E2", "H-E1-E2", "-H+2E1"]).unwrap();
        let bd = blow_down(&cfg, &lit(2, "E2")).unwrap();
        assert_eq!(bd.dropped, vec![lit(1, "H-E1")]);
        assert_eq!(bd.config.curves, vec![lit(1, "-H+2E1")]);
        assert!(bd.config.same_curves(&cp2_1_configuration(1)));

        let s7 = r(7);
        let cfg = NegativeConfiguration::from_literals(s7, &["E7", "3H-E1-E2-E3-E4-E5-E6-2E7"]).unwrap();
        let bd = blow_down(&cfg, &lit(7, "E7")).unwrap();
        let rec = &bd.records[0];
        assert_eq!(rec.c_dot_e, q(2));
        assert!(rec.genus_after > rec.genus_before && rec.monotone);
        assert_eq!(bd.dropped.len(), 1);

        assert!(matches!(
            blow_down(&cfg, &lit(7, "E1")),
            Err(ConfigError::NotMinusOne(_))
        ));
        let cfg3 = NegativeConfiguration::from_literals(r(3), &["H-E1-E2", "E3"]).unwrap();
        let bd = blow_down(&cfg3, &lit(3, "H-E1-E2")).unwrap();
        assert_eq!(bd.relabeling.len(), 1);
        assert!(bd.identities_hold);
    }

    #[test]
    fn disjoint_constructions() {
        let c = disjoint_minus_one_configuration(3, 3).unwrap();
        assert_eq!(count_minus_one(&c), vec![lit(3, "E1"), lit(3, "E2"), lit(3, "E3")]);
        let c = disjoint_minus_one_configuration(4, 2).unwrap();
        let m = count_minus_one(&c);
        assert_eq!(m, vec![lit(4, "E1"), lit(4, "E4")]);
        assert!(m[0].dot(&m[1]).is_zero());
        let c = disjoint_minus_one_configuration(3, 1).unwrap();
        assert_eq!(count_minus_one(&c), vec![lit(3, "E3")]);
        let c = disjoint_minus_one_configuration(5, 3).unwrap();
        assert_eq!(count_minus_one(&c).len(), 3);
        assert!(validate_configuration(&c).passed);
        assert!(disjoint_minus_one_configuration(2, 1).is_err());
    }

    #[test]
    fn ruled_classes() {
        let t2 = SurfaceModel::trivial_ruled(2, 0).unwrap();
        let got = ruled_negative_classes(t2, 6).unwrap();
        let want: Vec<DivisorClass> = (1..=6).map(|k| DivisorClass::from_ints(t2, &[1, -k]).unwrap()).collect();
        assert_eq!(got, want);
        let n1 = SurfaceModel::nontrivial_ruled(1, 0).unwrap();
        let got = ruled_negative_classes(n1, 4).unwrap();
        let sq: Vec<Q> = got.iter().map(DivisorClass::square).collect();
        assert_eq!(sq, vec![q(-1), q(-3), q(-5), q(-7)]);
        assert!(got[0].dot(&got[1]).is_negative());
        let cfg = NegativeConfiguration::new(t2, vec![DivisorClass::from_ints(t2, &[1, -1]).unwrap()]).unwrap();
        assert!(validate_configuration(&cfg).passed, "{:#?}", validate_configuration(&cfg));
        assert!(ruled_negative_classes(r(1), 3).is_err());
    }

    #[test]
    fn json_round_trip() {
        let cfg = catalog_cp2_3(1).remove(0).config;
        let js = serde_json::to_string(&cfg).unwrap();
        let back: NegativeConfiguration = serde_json::from_str(&js).unwrap();
        assert_eq!(back, cfg);
        let lit_js = r#"{"surface":{"kind":"rational","k":2},"curves":["E2","H-E1-E2","-H+2E1"],"n":1}"#;
        let parsed: NegativeConfiguration = serde_json::from_str(lit_js).unwrap();
        assert!(parsed.same_curves(&cp2_2_configurations(1)[1]));
    }
}
