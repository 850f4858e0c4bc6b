//! Intersection lattices of rational and ruled surfaces.
//!
//! Coefficients are stored over the basis `(H, E1, .., Ek)` or
//! `(U, T, E1, .., Ek)`. A class usually written `aH - b1 E1 - ...` is stored
//! as `(a, -b1, ...)`; [`DivisorClass::tuple_view`] gives the `(a; b1, ..)`
//! view.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::rational::{fmt_q, parse_q, primitive_integral, q, qi, qr, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("surface mismatch: {0} vs {1}")]
    SurfaceMismatch(SurfaceModel, SurfaceModel),
    #[error("coefficient vector has length {got}, surface rank is {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("cannot parse class literal {literal:?}: {reason}")]
    Parse { literal: String, reason: String },
    #[error("reference class {0} does not fix a forward cone")]
    NoForwardReference(String),
    #[error("class {0} is not integral")]
    NotIntegral(String),
}

/// Which 4-manifold lattice is in play.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurfaceModel {
    /// CP² blown up `k` times.
    Rational { k: usize },
    /// Σ_h × S² blown up `k` times.
    TrivialRuled { h: u32, k: usize },
    /// The non-trivial S²-bundle over Σ_h blown up `k` times.
    NontrivialRuled { h: u32, k: usize },
}

impl SurfaceModel {
    pub fn rational(k: usize) -> Self {
        SurfaceModel::Rational { k }
    }

    pub fn trivial_ruled(h: u32, k: usize) -> Result<Self, LatticeError> {
        SurfaceModel::TrivialRuled { h, k }.validated()
    }

    pub fn nontrivial_ruled(h: u32, k: usize) -> Result<Self, LatticeError> {
        SurfaceModel::NontrivialRuled { h, k }.validated()
    }

    pub fn validated(self) -> Result<Self, LatticeError> {
        match self {
            SurfaceModel::TrivialRuled { h: 0, .. } | SurfaceModel::NontrivialRuled { h: 0, .. } => {
                Err(LatticeError::InvalidSurface(
                    "ruled surfaces need base genus h >= 1".into(),
                ))
            }
            s => Ok(s),
        }
    }

    pub fn k(&self) -> usize {
        match *self {
            SurfaceModel::Rational { k }
            | SurfaceModel::TrivialRuled { k, .. }
            | SurfaceModel::NontrivialRuled { k, .. } => k,
        }
    }

    /// Base genus for ruled kinds.
    pub fn base_genus(&self) -> Option<u32> {
        match *self {
            SurfaceModel::Rational { .. } => None,
            SurfaceModel::TrivialRuled { h, .. } | SurfaceModel::NontrivialRuled { h, .. } => Some(h),
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, SurfaceModel::Rational { .. })
    }

    pub fn is_ruled(&self) -> bool {
        !self.is_rational()
    }

    /// Index of `E1` in the coefficient vector.
    pub fn offset(&self) -> usize {
        if self.is_rational() {
            1
        } else {
            2
        }
    }

    pub fn rank(&self) -> usize {
        self.offset() + self.k()
    }

    /// Same kind with a different number of blowups.
    pub fn with_k(&self, k: usize) -> Self {
        match *self {
            SurfaceModel::Rational { .. } => SurfaceModel::Rational { k },
            SurfaceModel::TrivialRuled { h, .. } => SurfaceModel::TrivialRuled { h, k },
            SurfaceModel::NontrivialRuled { h, .. } => SurfaceModel::NontrivialRuled { h, k },
        }
    }

    /// Entry `(i, j)` of the Gram matrix.
    pub fn form(&self, i: usize, j: usize) -> i64 {
        let o = self.offset();
        if i >= o || j >= o {
            return if i == j { -1 } else { 0 };
        }
        match self {
            SurfaceModel::Rational { .. } => 1,
            SurfaceModel::TrivialRuled { .. } => match (i, j) {
                (0, 1) | (1, 0) => 1,
                _ => 0,
            },
            SurfaceModel::NontrivialRuled { .. } => match (i, j) {
                (0, 0) | (0, 1) | (1, 0) => 1,
                _ => 0,
            },
        }
    }

    /// Canonical class coefficients.
    pub fn canonical_coeffs(&self) -> Vec<i64> {
        let mut v = vec![1i64; self.rank()];
        match *self {
            SurfaceModel::Rational { .. } => v[0] = -3,
            SurfaceModel::TrivialRuled { h, .. } => {
                v[0] = -2;
                v[1] = 2 * h as i64 - 2;
            }
            SurfaceModel::NontrivialRuled { h, .. } => {
                v[0] = -2;
                v[1] = 2 * h as i64 - 1;
            }
        }
        v
    }
}

impl fmt::Display for SurfaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SurfaceModel::Rational { k } => write!(f, "rational:k={k}"),
            SurfaceModel::TrivialRuled { h, k } => write!(f, "ruled:h={h},k={k}"),
            SurfaceModel::NontrivialRuled { h, k } => write!(f, "ruled-nontrivial:h={h},k={k}"),
        }
    }
}

impl FromStr for SurfaceModel {
    type Err = LatticeError;

    /// Accepts `rational:k=3`, `ruled:h=2`, `ruled:h=2,k=1`,
    /// `ruled-nontrivial:h=1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| LatticeError::InvalidSurface(format!("{s:?}: {why}"));
        let s_trim: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (kind, rest) = s_trim.split_once(':').unwrap_or((s_trim.as_str(), ""));
        let mut k = 0usize;
        let mut h: Option<u32> = None;
        for part in rest.split(',').filter(|p| !p.is_empty()) {
            let (key, val) = part.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            match key {
                "k" => k = val.parse().map_err(|_| bad("k must be a non-negative integer"))?,
                "h" => h = Some(val.parse().map_err(|_| bad("h must be a positive integer"))?),
                _ => return Err(bad("unknown key")),
            }
        }
        match kind {
            "rational" => {
                if h.is_some() {
                    return Err(bad("rational surfaces take no h"));
                }
                Ok(SurfaceModel::Rational { k })
            }
            "ruled" | "trivial_ruled" | "ruled-trivial" => {
                SurfaceModel::trivial_ruled(h.ok_or_else(|| bad("missing h"))?, k)
            }
            "ruled-nontrivial" | "nontrivial_ruled" => {
                SurfaceModel::nontrivial_ruled(h.ok_or_else(|| bad("missing h"))?, k)
            }
            _ => Err(bad("unknown surface kind")),
        }
    }
}

/// An exact rational class over the fixed basis of its surface.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    surface: SurfaceModel,
    coeffs: Vec<Q>,
}

impl DivisorClass {
    pub fn new(surface: SurfaceModel, coeffs: Vec<Q>) -> Result<Self, LatticeError> {
        let surface = surface.validated()?;
        if coeffs.len() != surface.rank() {
            return Err(LatticeError::RankMismatch {
                expected: surface.rank(),
                got: coeffs.len(),
            });
        }
        Ok(DivisorClass { surface, coeffs })
    }

    pub fn from_ints(surface: SurfaceModel, coeffs: &[i64]) -> Result<Self, LatticeError> {
        Self::new(surface, coeffs.iter().map(|&c| q(c)).collect())
    }

    pub fn from_bigints(surface: SurfaceModel, coeffs: &[BigInt]) -> Result<Self, LatticeError> {
        Self::new(surface, coeffs.iter().map(qi).collect())
    }

    pub fn zero(surface: SurfaceModel) -> Self {
        DivisorClass {
            surface,
            coeffs: vec![Q::zero(); surface.rank()],
        }
    }

    fn unit(surface: SurfaceModel, idx: usize) -> Self {
        let mut c = Self::zero(surface);
        c.coeffs[idx] = Q::one();
        c
    }

    /// `H` on a rational surface.
    pub fn h(surface: SurfaceModel) -> Self {
        assert!(surface.is_rational(), "H lives on rational surfaces");
        Self::unit(surface, 0)
    }

    /// `U` on a ruled surface.
    pub fn u(surface: SurfaceModel) -> Self {
        assert!(surface.is_ruled(), "U lives on ruled surfaces");
        Self::unit(surface, 0)
    }

    /// Fiber class `T` on a ruled surface.
    pub fn t(surface: SurfaceModel) -> Self {
        assert!(surface.is_ruled(), "T lives on ruled surfaces");
        Self::unit(surface, 1)
    }

    /// Exceptional class `Ei`, 1-based.
    pub fn e(surface: SurfaceModel, i: usize) -> Self {
        assert!(i >= 1 && i <= surface.k(), "E{i} out of range for {surface}");
        Self::unit(surface, surface.offset() + i - 1)
    }

    /// `H` or `U + T`.
    pub fn forward(surface: SurfaceModel) -> Self {
        if surface.is_rational() {
            Self::h(surface)
        } else {
            &Self::u(surface) + &Self::t(surface)
        }
    }

    pub fn surface(&self) -> SurfaceModel {
        self.surface
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Q {
        &self.coeffs[i]
    }

    /// Coefficient of `Ei` (1-based) in stored sign.
    pub fn e_coeff(&self, i: usize) -> &Q {
        &self.coeffs[self.surface.offset() + i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn int_coeffs(&self) -> Option<Vec<BigInt>> {
        if self.is_integral() {
            Some(self.coeffs.iter().map(|c| c.to_integer()).collect())
        } else {
            None
        }
    }

    pub fn i64_coeffs(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(crate::rational::to_i64).collect()
    }

    fn check_same(&self, other: &Self) -> Result<(), LatticeError> {
        if self.surface != other.surface {
            Err(LatticeError::SurfaceMismatch(self.surface, other.surface))
        } else {
            Ok(())
        }
    }

    /// Intersection pairing.
    pub fn pair(&self, other: &Self) -> Result<Q, LatticeError> {
        self.check_same(other)?;
        Ok(self.dot(other))
    }

    /// Intersection pairing; panics on a surface mismatch.
    pub fn dot(&self, other: &Self) -> Q {
        assert_eq!(self.surface, other.surface, "pairing classes on different surfaces");
        let s = self.surface;
        let o = s.offset();
        let mut acc = Q::zero();
        for i in 0..o {
            for j in 0..o {
                let g = s.form(i, j);
                if g != 0 {
                    acc += &self.coeffs[i] * &other.coeffs[j] * q(g);
                }
            }
        }
        for i in o..s.rank() {
            acc -= &self.coeffs[i] * &other.coeffs[i];
        }
        acc
    }

    pub fn square(&self) -> Q {
        self.dot(self)
    }

    /// The linear functional `y ↦ self·y` as a coefficient row.
    pub fn covector(&self) -> Vec<Q> {
        let s = self.surface;
        (0..s.rank())
            .map(|j| {
                (0..s.rank())
                    .filter(|&i| s.form(i, j) != 0)
                    .map(|i| &self.coeffs[i] * q(s.form(i, j)))
                    .sum()
            })
            .collect()
    }

    /// The class `F` with `F·y = row·y` for every `y`.
    pub fn from_covector(surface: SurfaceModel, row: &[Q]) -> Result<Self, LatticeError> {
        if row.len() != surface.rank() {
            return Err(LatticeError::RankMismatch {
                expected: surface.rank(),
                got: row.len(),
            });
        }
        let cols: Vec<Vec<Q>> = (0..surface.rank())
            .map(|i| (0..surface.rank()).map(|j| q(surface.form(i, j))).collect())
            .collect();
        let coeffs = crate::linalg::solve_columns(&cols, row).expect("intersection form is unimodular");
        Self::new(surface, coeffs)
    }

    pub fn scale(&self, t: &Q) -> Self {
        DivisorClass {
            surface: self.surface,
            coeffs: self.coeffs.iter().map(|c| c * t).collect(),
        }
    }

    /// `self + t * other`.
    pub fn add_scaled(&self, t: &Q, other: &Self) -> Self {
        assert_eq!(self.surface, other.surface);
        DivisorClass {
            surface: self.surface,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + t * b)
                .collect(),
        }
    }

    /// Primitive integral multiple with positive scale; zero stays zero.
    pub fn primitive(&self) -> Self {
        let ints = primitive_integral(&self.coeffs);
        DivisorClass {
            surface: self.surface,
            coeffs: ints.iter().map(qi).collect(),
        }
    }

    /// Primitive integral vector signed so its first nonzero entry is positive.
    pub fn normalized_ray(&self) -> Self {
        let p = self.primitive();
        match p.coeffs.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => -&p,
            _ => p,
        }
    }

    /// Positive multiple of `other`, i.e. the same ray.
    pub fn same_ray(&self, other: &Self) -> bool {
        self.surface == other.surface && !self.is_zero() && !other.is_zero() && self.primitive() == other.primitive()
    }

    /// Exact parallelism test (either sign).
    pub fn parallel(&self, other: &Self) -> bool {
        if self.surface != other.surface {
            return false;
        }
        let n = self.coeffs.len();
        for i in 0..n {
            for j in (i + 1)..n {
                if &self.coeffs[i] * &other.coeffs[j] != &self.coeffs[j] * &other.coeffs[i] {
                    return false;
                }
            }
        }
        true
    }

    /// Reorders the `Ei` so the `b` values of `aH - Σ bi Ei` are
    /// non-increasing (stored coefficients non-decreasing).
    pub fn ordered(&self) -> Self {
        let o = self.surface.offset();
        let mut c = self.coeffs.clone();
        c[o..].sort();
        DivisorClass {
            surface: self.surface,
            coeffs: c,
        }
    }

    pub fn is_ordered(&self) -> bool {
        let o = self.surface.offset();
        self.coeffs[o..].windows(2).all(|w| w[0] <= w[1])
    }

    /// Applies a permutation of the `Ei`: new `E_{perm[i]}` coefficient is old `E_i`'s
    /// (0-based indices).
    pub fn permute_e(&self, perm: &[usize]) -> Self {
        let o = self.surface.offset();
        let mut c = self.coeffs.clone();
        for (i, &p) in perm.iter().enumerate() {
            c[o + p] = self.coeffs[o + i].clone();
        }
        DivisorClass {
            surface: self.surface,
            coeffs: c,
        }
    }

    /// Re-expresses the class on a surface with the same kind and a different
    /// number of blowups, truncating or zero-padding `Ei` coefficients.
    pub fn resized(&self, k: usize) -> Self {
        let s = self.surface.with_k(k);
        let mut c = self.coeffs.clone();
        c.resize(s.rank(), Q::zero());
        DivisorClass { surface: s, coeffs: c }
    }

    /// `(a; b1, .., bk)` with `b` in the `aH - Σ bi Ei` convention; ruled
    /// classes give `(a, b; c1, ..)` for `aU + bT - Σ ci Ei`.
    pub fn tuple_view(&self) -> String {
        let o = self.surface.offset();
        let head: Vec<String> = self.coeffs[..o].iter().map(fmt_q).collect();
        let tail: Vec<String> = self.coeffs[o..].iter().map(|c| fmt_q(&-c)).collect();
        if tail.is_empty() {
            format!("({})", head.join(", "))
        } else {
            format!("({}; {})", head.join(", "), tail.join(", "))
        }
    }

    /// Parses a literal such as `2H-E1-E2-E3`, `2U+3T`, `1/2H-1/2E1`, `-K`.
    pub fn parse(literal: &str, surface: SurfaceModel) -> Result<Self, LatticeError> {
        parse_literal(literal, surface)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.surface;
        let o = s.offset();
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sym = if i < o {
                if s.is_rational() {
                    "H".to_string()
                } else if i == 0 {
                    "U".to_string()
                } else {
                    "T".to_string()
                }
            } else {
                format!("E{}", i - o + 1)
            };
            let neg = c.is_negative();
            let mag = c.abs();
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            if !mag.is_one() {
                out.push_str(&fmt_q(&mag));
            }
            out.push_str(&sym);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        self.add_scaled(&Q::one(), rhs)
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self.add_scaled(&-Q::one(), rhs)
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scale(&-Q::one())
    }
}

#[derive(Serialize, Deserialize)]
struct ClassRepr {
    surface: SurfaceModel,
    coeffs: Vec<String>,
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ClassRepr {
            surface: self.surface,
            coeffs: self.coeffs.iter().map(fmt_q).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = ClassRepr::deserialize(deserializer)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| parse_q(s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        DivisorClass::new(repr.surface, coeffs).map_err(serde::de::Error::custom)
    }
}

/// `K` for the surface.
pub fn canonical_class(surface: SurfaceModel) -> DivisorClass {
    let c = surface.canonical_coeffs();
    DivisorClass::from_ints(surface, &c).expect("canonical class has surface rank")
}

/// `½(x·x + K·x) + 1`.
pub fn j_genus(x: &DivisorClass) -> Q {
    let k = canonical_class(x.surface());
    (x.square() + k.dot(x)) * qr(1, 2) + Q::one()
}

/// `x·x - K·x`.
pub fn sw_dimension(x: &DivisorClass) -> Q {
    let k = canonical_class(x.surface());
    x.square() - k.dot(x)
}

/// `K·x`.
pub fn k_dot(x: &DivisorClass) -> Q {
    canonical_class(x.surface()).dot(x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LightConeReport {
    pub both_forward: bool,
    pub pairing: String,
    pub pairing_sign: i8,
    /// Set when `A·B = 0` with both squares non-negative, which forces the
    /// classes onto a common null ray.
    pub proportional: bool,
}

/// Light-cone comparison of `b` against the reference `a`.
///
/// `a` must be a nonzero class with `a² ≥ 0` pairing positively with the
/// forward class (`H` or `U+T`). A null reference is allowed so that two
/// null classes can be compared.
pub fn light_cone_facts(a: &DivisorClass, b: &DivisorClass) -> Result<LightConeReport, LatticeError> {
    a.check_same(b)?;
    let fwd = DivisorClass::forward(a.surface());
    let a2 = a.square();
    if a.is_zero() || a2.is_negative() || !a.dot(&fwd).is_positive() {
        return Err(LatticeError::NoForwardReference(a.to_string()));
    }
    let p = a.dot(b);
    let b2 = b.square();
    let sign = if p.is_positive() {
        1
    } else if p.is_negative() {
        -1
    } else {
        0
    };
    let proportional = p.is_zero() && !b2.is_negative() && !b.is_zero() && a.parallel(b);
    let both_forward = !b.is_zero()
        && !b2.is_negative()
        && (p.is_positive() || (proportional && b.dot(&fwd).is_positive()));
    Ok(LightConeReport {
        both_forward,
        pairing: fmt_q(&p),
        pairing_sign: sign,
        proportional,
    })
}

fn parse_literal(literal: &str, surface: SurfaceModel) -> Result<DivisorClass, LatticeError> {
    let err = |reason: &str| LatticeError::Parse {
        literal: literal.to_string(),
        reason: reason.to_string(),
    };
    let s: Vec<char> = literal.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err("empty literal"));
    }
    let mut acc = DivisorClass::zero(surface);
    let mut i = 0;
    while i < s.len() {
        let mut sign = Q::one();
        let mut saw_sign = false;
        while i < s.len() && (s[i] == '+' || s[i] == '-') {
            if s[i] == '-' {
                sign = -sign;
            }
            saw_sign = true;
            i += 1;
        }
        if i >= s.len() {
            return Err(err("dangling sign"));
        }
        if !saw_sign && i > 0 {
            return Err(err("missing operator between terms"));
        }
        // coefficient
        let mut coeff: Option<Q> = None;
        if s[i] == '(' {
            let close = s[i..].iter().position(|&c| c == ')').ok_or_else(|| err("unclosed parenthesis"))? + i;
            let inner: String = s[i + 1..close].iter().collect();
            coeff = Some(parse_q(&inner).ok_or_else(|| err("bad coefficient"))?);
            i = close + 1;
        } else if s[i].is_ascii_digit() {
            let start = i;
            while i < s.len() && (s[i].is_ascii_digit() || s[i] == '/') {
                i += 1;
            }
            let txt: String = s[start..i].iter().collect();
            coeff = Some(parse_q(&txt).ok_or_else(|| err("bad coefficient"))?);
        }
        if i < s.len() && s[i] == '*' {
            i += 1;
        }
        let c = sign * coeff.clone().unwrap_or_else(Q::one);
        if i >= s.len() || s[i] == '+' || s[i] == '-' {
            match coeff {
                Some(v) if v.is_zero() => continue,
                _ => return Err(err("constant terms are not classes")),
            }
        }
        let sym = s[i];
        i += 1;
        let term = match sym {
            'H' | 'h' => {
                if !surface.is_rational() {
                    return Err(err("H needs a rational surface"));
                }
                DivisorClass::h(surface)
            }
            'U' | 'u' => {
                if !surface.is_ruled() {
                    return Err(err("U needs a ruled surface"));
                }
                DivisorClass::u(surface)
            }
            'T' | 't' => {
                if !surface.is_ruled() {
                    return Err(err("T needs a ruled surface"));
                }
                DivisorClass::t(surface)
            }
            'K' => canonical_class(surface),
            'E' | 'e' => {
                let start = i;
                while i < s.len() && s[i].is_ascii_digit() {
                    i += 1;
                }
                let idx: usize = s[start..i]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| err("E needs an index"))?;
                if idx == 0 || idx > surface.k() {
                    return Err(err(&format!("E{idx} out of range for {surface}")));
                }
                DivisorClass::e(surface, idx)
            }
            other => return Err(err(&format!("unexpected symbol {other:?}"))),
        };
        acc = acc.add_scaled(&c, &term);
    }
    Ok(acc)
}

/// Largest `Ei` index mentioned in a literal (0 when none).
pub fn max_e_index(literal: &str) -> usize {
    let s: Vec<char> = literal.chars().collect();
    let mut best = 0;
    let mut i = 0;
    while i < s.len() {
        if s[i] == 'E' || s[i] == 'e' {
            let start = i + 1;
            let mut j = start;
            while j < s.len() && s[j].is_ascii_digit() {
                j += 1;
            }
            if let Ok(v) = s[start..j].iter().collect::<String>().parse::<usize>() {
                best = best.max(v);
            }
            i = j;
        } else {
            i += 1;
        }
    }
    best
}
