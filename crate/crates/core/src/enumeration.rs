//! Bounded exhaustive enumeration of sphere classes on CP² # k(-CP²), and the
//! nine-squares representation search.
//!
//! Searches run over the `b` vector of `aH - Σ bi Ei`, depth first and
//! non-increasing, with running budgets that prune dead branches.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::lattice::{DivisorClass, SurfaceModel};
use crate::rational::q;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("k = {k} is out of range (need k <= {max})")]
    KTooLarge { k: usize, max: usize },
}

/// One orbit of classes under permutations of the `Ei`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ClassFamily {
    /// Ordered representative: `b1 >= b2 >= .. >= bk`.
    pub representative: DivisorClass,
    pub orbit_note: String,
}

impl ClassFamily {
    pub fn from_tuple(k: usize, a: i64, b: &[i64]) -> Self {
        let rep = class_from_tuple(k, a, b).ordered();
        let note = orbit_note(a, &b_tuple(&rep));
        ClassFamily {
            representative: rep,
            orbit_note: note,
        }
    }

    /// Every distinct permutation of the representative.
    pub fn instances(&self) -> Vec<DivisorClass> {
        let s = self.representative.surface();
        let a = self.representative.coeff(0).to_integer();
        let mut b: Vec<i64> = b_tuple(&self.representative);
        b.sort_unstable();
        let mut out = Vec::new();
        loop {
            out.push(class_from_tuple(s.k(), i64::try_from(a.clone()).expect("small"), &b));
            if !next_permutation(&mut b) {
                break;
            }
        }
        out.sort();
        out
    }

    pub fn a(&self) -> i64 {
        i64::try_from(self.representative.coeff(0).to_integer()).expect("small coefficient")
    }

    pub fn square(&self) -> i64 {
        crate::rational::to_i64(&self.representative.square()).expect("integral")
    }
}

fn next_permutation(v: &mut [i64]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// `aH - Σ bi Ei` on `CP² # k`.
pub fn class_from_tuple(k: usize, a: i64, b: &[i64]) -> DivisorClass {
    assert!(b.len() <= k, "too many exceptional coefficients");
    let mut c = vec![a];
    c.extend(b.iter().map(|x| -x));
    c.resize(k + 1, 0);
    DivisorClass::from_ints(SurfaceModel::rational(k), &c).expect("rank matches")
}

/// The `b` vector of an integral rational class.
pub fn b_tuple(c: &DivisorClass) -> Vec<i64> {
    c.i64_coeffs().expect("integral class")[1..].iter().map(|x| -x).collect()
}

fn orbit_note(a: i64, b: &[i64]) -> String {
    let mut sorted: Vec<i64> = b.iter().copied().filter(|&x| x != 0).collect();
    sorted.sort_unstable_by(|x, y| y.cmp(x));
    let mut parts = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let v = sorted[i];
        let n = sorted[i..].iter().take_while(|&&x| x == v).count();
        parts.push(format!("{n}x{v}"));
        i += n;
    }
    if parts.is_empty() {
        format!("a={a}; no exceptional terms")
    } else {
        format!("a={a}; b: {}", parts.join(", "))
    }
}

/// Depth-first walk over non-increasing `b` in `[lo, hi]` of length `k`.
/// `prune(prefix)` returning true cuts the branch.
fn walk_ordered(
    k: usize,
    lo: i64,
    hi: i64,
    prune: &dyn Fn(&[i64]) -> bool,
    visit: &mut dyn FnMut(&[i64]),
) {
    fn rec(
        k: usize,
        lo: i64,
        cap: i64,
        cur: &mut Vec<i64>,
        prune: &dyn Fn(&[i64]) -> bool,
        visit: &mut dyn FnMut(&[i64]),
    ) {
        if cur.len() == k {
            visit(cur);
            return;
        }
        let mut v = cap;
        while v >= lo {
            cur.push(v);
            if !prune(cur) {
                rec(k, lo, v, cur, prune, visit);
            }
            cur.pop();
            v -= 1;
        }
    }
    let mut cur = Vec::with_capacity(k);
    rec(k, lo, hi, &mut cur, prune, visit);
}

fn genus_twice_minus_two(a: i64, b: &[i64]) -> i64 {
    // 2g - 2 = C² + K·C
    let sq = a * a - b.iter().map(|x| x * x).sum::<i64>();
    let kc = -3 * a + b.iter().sum::<i64>();
    sq + kc
}

fn square(a: i64, b: &[i64]) -> i64 {
    a * a - b.iter().map(|x| x * x).sum::<i64>()
}

fn sorted_classes(set: BTreeSet<DivisorClass>) -> Vec<DivisorClass> {
    set.into_iter().collect()
}

/// Largest `a` allowed by the Cauchy-Schwarz bound for `-1` classes.
fn exceptional_a_bound(k: usize) -> i64 {
    // (3a-1)² <= k(a²+1)
    let k = k as i64;
    let mut a = 0;
    while (3 * (a + 1) - 1) * (3 * (a + 1) - 1) <= k * ((a + 1) * (a + 1) + 1) {
        a += 1;
    }
    a
}

/// The finite set of `-1` classes (`e² = -1`, genus 0, `e·H >= 0`) for `k <= 8`.
pub fn exceptional_classes(k: usize) -> Result<Vec<DivisorClass>, EnumerationError> {
    if k > 8 {
        return Err(EnumerationError::KTooLarge { k, max: 8 });
    }
    let mut out = BTreeSet::new();
    for a in 0..=exceptional_a_bound(k) {
        let target_sq = a * a + 1;
        let target_lin = 3 * a - 1;
        let prune = |p: &[i64]| p.iter().map(|x| x * x).sum::<i64>() > target_sq;
        walk_ordered(k, -(a + 1), a + 1, &prune, &mut |b| {
            if b.iter().map(|x| x * x).sum::<i64>() == target_sq && b.iter().sum::<i64>() == target_lin {
                let fam = ClassFamily::from_tuple(k, a, b);
                out.extend(fam.instances());
            }
        });
    }
    Ok(sorted_classes(out))
}

/// Search window for the `a > 0` sphere searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    pub a_max: i64,
    /// Extra room above `a + 1` for each `bi`.
    pub b_slack: i64,
}

impl SearchBounds {
    pub fn widened(self, by: i64) -> Self {
        SearchBounds {
            a_max: self.a_max + by,
            b_slack: self.b_slack + by,
        }
    }
}

/// Largest `a` satisfying the Cauchy-Schwarz inequality
/// `a² - 3a + (3c² - 9)a + (3a - 12)c² + c⁴ + 4 <= 0` for `c² = -C²` on `k = 8`.
pub fn cauchy_schwarz_a_bound(c2: i64) -> Option<i64> {
    let f = |a: i64| a * a - 3 * a + (3 * c2 - 9) * a + (3 * a - 12) * c2 + c2 * c2 + 4;
    (1..=64).filter(|&a| f(a) <= 0).max()
}

/// Default window for negative classes: the largest bound over `c² = 1, 2, 3`.
pub fn negative_bounds() -> SearchBounds {
    let a_max = (1..=3).filter_map(cauchy_schwarz_a_bound).max().unwrap_or(1);
    SearchBounds { a_max, b_slack: 0 }
}

pub fn zero_square_bounds() -> SearchBounds {
    SearchBounds {
        a_max: cauchy_schwarz_a_bound(0).unwrap_or(1),
        b_slack: 0,
    }
}

/// Ordered genus-0 classes with `a > 0`, `bi >= 0` and the square predicate.
fn positive_a_spheres(
    k: usize,
    bounds: SearchBounds,
    keep_square: &dyn Fn(i64) -> bool,
) -> Vec<ClassFamily> {
    let mut fams = BTreeSet::new();
    for a in 1..=bounds.a_max {
        // genus 0 means Σ b(b-1) = (a-1)(a-2)
        let budget = (a - 1) * (a - 2);
        let prune = |p: &[i64]| p.iter().map(|x| x * (x - 1)).sum::<i64>() > budget;
        walk_ordered(k, 0, a + 1 + bounds.b_slack, &prune, &mut |b| {
            if genus_twice_minus_two(a, b) == -2 && keep_square(square(a, b)) {
                fams.insert(ClassFamily::from_tuple(k, a, b));
            }
        });
    }
    fams.into_iter().collect()
}

/// `-nH + (n+1)E_i - Σ E_j` with `n >= 0`, one orbit per `(n, number of Ej)`.
fn nonpositive_a_spheres(k: usize, nbound: u32) -> Vec<ClassFamily> {
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    for n in 0..=nbound as i64 {
        for m in 0..k {
            let mut b = vec![1i64; m];
            b.push(-(n + 1));
            out.push(ClassFamily::from_tuple(k, -n, &b));
        }
    }
    out
}

/// Negative-square sphere classes satisfying the irreducibility constraints.
/// The `a <= 0` part is infinite in `n` and is cut at `nbound`.
pub fn negative_sphere_classes(k: usize, nbound: u32) -> Result<Vec<ClassFamily>, EnumerationError> {
    negative_sphere_classes_within(k, nbound, negative_bounds())
}

pub fn negative_sphere_classes_within(
    k: usize,
    nbound: u32,
    bounds: SearchBounds,
) -> Result<Vec<ClassFamily>, EnumerationError> {
    if k > 8 {
        return Err(EnumerationError::KTooLarge { k, max: 8 });
    }
    let mut out = nonpositive_a_spheres(k, nbound);
    out.extend(positive_a_spheres(k, bounds, &|sq| sq < 0));
    out.sort();
    Ok(out)
}

/// Square-zero sphere classes with `a > 0`.
pub fn zero_square_sphere_classes(k: usize) -> Result<Vec<ClassFamily>, EnumerationError> {
    zero_square_sphere_classes_within(k, zero_square_bounds())
}

pub fn zero_square_sphere_classes_within(
    k: usize,
    bounds: SearchBounds,
) -> Result<Vec<ClassFamily>, EnumerationError> {
    if k > 8 {
        return Err(EnumerationError::KTooLarge { k, max: 8 });
    }
    Ok(positive_a_spheres(k, bounds, &|sq| sq == 0))
}

/// Every instance of the given families.
pub fn all_instances(fams: &[ClassFamily]) -> Vec<DivisorClass> {
    let mut set = BTreeSet::new();
    for f in fams {
        set.extend(f.instances());
    }
    sorted_classes(set)
}

/// The six negative families with `a > 0`, by index 1..=6: `(a, fixed b's, filler)`.
/// The filler value may repeat any number of times.
pub const NEGATIVE_PATTERNS: [(i64, &[i64], i64); 6] = [
    (1, &[], 1),
    (2, &[], 1),
    (3, &[2], 1),
    (4, &[2, 2, 2], 1),
    (5, &[1, 1], 2),
    (6, &[3], 2),
];

/// The fifteen square-zero families, by index 1..=15, as `(a, b multiset)`.
pub const ZERO_SQUARE_PATTERNS: [(i64, &[i64]); 15] = [
    (1, &[1]),
    (2, &[1, 1, 1, 1]),
    (3, &[2, 1, 1, 1, 1, 1]),
    (4, &[2, 2, 2, 1, 1, 1, 1]),
    (5, &[2, 2, 2, 2, 2, 2, 1]),
    (6, &[3, 3, 2, 2, 2, 2, 1, 1]),
    (7, &[3, 3, 3, 3, 2, 2, 2, 1]),
    (5, &[3, 2, 2, 2, 1, 1, 1, 1]),
    (8, &[3, 3, 3, 3, 3, 3, 3, 1]),
    (4, &[3, 1, 1, 1, 1, 1, 1, 1]),
    (8, &[4, 3, 3, 3, 3, 2, 2, 2]),
    (7, &[4, 3, 2, 2, 2, 2, 2, 2]),
    (9, &[4, 4, 3, 3, 3, 3, 3, 2]),
    (11, &[4, 4, 4, 4, 4, 4, 4, 3]),
    (10, &[4, 4, 4, 4, 3, 3, 3, 3]),
];

fn nonzero_desc(b: &[i64]) -> Vec<i64> {
    let mut v: Vec<i64> = b.iter().copied().filter(|&x| x != 0).collect();
    v.sort_unstable_by(|x, y| y.cmp(x));
    v
}

/// Where a negative genus-0 class sits in the classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NegativeFamily {
    /// One of the six `a > 0` families.
    Positive(u8),
    /// `-nH + (n+1)E_i - Σ E_j`.
    NonPositive { n: u32 },
}

/// Classifies an integral rational class with negative square and genus 0.
pub fn negative_family(c: &DivisorClass) -> Option<NegativeFamily> {
    if !c.surface().is_rational() || !c.is_integral() {
        return None;
    }
    let a = crate::rational::to_i64(c.coeff(0))?;
    let b = b_tuple(c);
    if square(a, &b) >= 0 || genus_twice_minus_two(a, &b) != -2 {
        return None;
    }
    if a <= 0 {
        let n = -a;
        let negs: Vec<i64> = b.iter().copied().filter(|&x| x < 0).collect();
        let ok = negs == vec![-(n + 1)] && b.iter().all(|&x| x == 1 || x == 0 || x == -(n + 1));
        return ok.then_some(NegativeFamily::NonPositive { n: n as u32 });
    }
    if b.iter().any(|&x| x < 0) {
        return None;
    }
    let nz = nonzero_desc(&b);
    for (idx, (pa, fixed, filler)) in NEGATIVE_PATTERNS.iter().enumerate() {
        if *pa != a {
            continue;
        }
        let mut rest = nz.clone();
        let mut ok = true;
        for f in fixed.iter() {
            match rest.iter().position(|x| x == f) {
                Some(p) => {
                    rest.remove(p);
                }
                None => ok = false,
            }
        }
        if ok && rest.iter().all(|x| x == filler) {
            return Some(NegativeFamily::Positive(idx as u8 + 1));
        }
    }
    None
}

/// Index 1..=15 of a square-zero class in the classification.
pub fn zero_square_family(c: &DivisorClass) -> Option<u8> {
    if !c.surface().is_rational() || !c.is_integral() {
        return None;
    }
    let a = crate::rational::to_i64(c.coeff(0))?;
    let b = b_tuple(c);
    let nz = nonzero_desc(&b);
    if b.iter().any(|&x| x < 0) {
        return None;
    }
    ZERO_SQUARE_PATTERNS
        .iter()
        .position(|(pa, pb)| *pa == a && nz == *pb)
        .map(|i| i as u8 + 1)
}

/// All multisets of nine integers, pairwise congruent mod 3, whose squares sum
/// to `total` (and whose sum is 0 when `residue_sum_zero` is set). Each is
/// listed in non-increasing order.
pub fn nine_squares_representations(total: u64, residue_sum_zero: bool) -> Vec<[i64; 9]> {
    let total = total as i64;
    let mut m = 0i64;
    while (m + 1) * (m + 1) <= total {
        m += 1;
    }
    let mut out = Vec::new();
    let prune = |p: &[i64]| {
        let s: i64 = p.iter().map(|x| x * x).sum();
        if s > total {
            return true;
        }
        let r = p[0].rem_euclid(3);
        p.last().is_some_and(|x| x.rem_euclid(3) != r)
    };
    walk_ordered(9, -m, m, &prune, &mut |v| {
        let s: i64 = v.iter().map(|x| x * x).sum();
        if s != total {
            return;
        }
        if residue_sum_zero && v.iter().sum::<i64>() != 0 {
            return;
        }
        let mut arr = [0i64; 9];
        arr.copy_from_slice(v);
        out.push(arr);
    });
    out.sort_unstable_by(|x, y| y.cmp(x));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmallPlusReport {
    pub k: usize,
    pub bound: i64,
    /// Classes with `C² >= 0`, `a <= 2`, `g >= 0` whose genus is not 0;
    /// expected empty.
    pub small_a_positive_genus: Vec<DivisorClass>,
    /// Genus-0 classes with `C² >= 0` and `a >= 3` (such as `3H-2E1`), listed
    /// for information only.
    pub genus0_large_a: Vec<DivisorClass>,
    /// Minimum square over genus-1 classes, if any were found.
    pub genus1_min_square: Option<i64>,
    /// Genus-1 classes with square exactly `9 - k`.
    pub genus1_equality: Vec<DivisorClass>,
    /// Genus-1 classes with square below `9 - k`; expected empty.
    pub genus1_below: Vec<DivisorClass>,
    /// Classes with `C² >= 0` and `K·C >= 0`; expected empty for `k < 9`.
    pub nonneg_square_nonneg_k: Vec<DivisorClass>,
    pub passed: bool,
}

/// Audits the small-square genus claims over ordered classes with
/// `0 < a <= bound` and `0 <= bi <= bound`.
pub fn small_plus_audit(k: usize, bound: i64) -> Result<SmallPlusReport, EnumerationError> {
    if k >= 9 {
        return Err(EnumerationError::KTooLarge { k, max: 8 });
    }
    let mut g0 = Vec::new();
    let mut small_a = Vec::new();
    let mut g1_min: Option<i64> = None;
    let mut g1_eq = Vec::new();
    let mut g1_below = Vec::new();
    let mut nn = Vec::new();
    let target = 9 - k as i64;
    for a in 1..=bound {
        walk_ordered(k, 0, bound, &|_| false, &mut |b| {
            let sq = square(a, b);
            let kc = -3 * a + b.iter().sum::<i64>();
            let g2 = sq + kc; // 2g - 2
            if sq >= 0 && g2 == -2 && a >= 3 {
                g0.push(class_from_tuple(k, a, b));
            }
            if sq >= 0 && a <= 2 && g2 > -2 {
                small_a.push(class_from_tuple(k, a, b));
            }
            if g2 == 0 {
                g1_min = Some(g1_min.map_or(sq, |m| m.min(sq)));
                if sq == target {
                    g1_eq.push(class_from_tuple(k, a, b));
                } else if sq < target {
                    g1_below.push(class_from_tuple(k, a, b));
                }
            }
            if sq >= 0 && kc >= 0 {
                nn.push(class_from_tuple(k, a, b));
            }
        });
    }
    let expected_eq = class_from_tuple(k, 3, &vec![1; k]);
    let passed = small_a.is_empty() && g1_below.is_empty() && nn.is_empty() && g1_eq == vec![expected_eq];
    Ok(SmallPlusReport {
        k,
        bound,
        small_a_positive_genus: small_a,
        genus0_large_a: g0,
        genus1_min_square: g1_min,
        genus1_equality: g1_eq,
        genus1_below: g1_below,
        nonneg_square_nonneg_k: nn,
        passed,
    })
}

/// Ordered classes on `k = 9` with `C² >= 0` and `K·C >= 0` for `0 < a <= bound`.
pub fn nonneg_square_nonneg_k_classes(bound: i64) -> Vec<DivisorClass> {
    let mut out = Vec::new();
    for a in 1..=bound {
        walk_ordered(9, 0, a, &|_| false, &mut |b| {
            let sq = square(a, b);
            let kc = -3 * a + b.iter().sum::<i64>();
            if sq >= 0 && kc >= 0 {
                out.push(class_from_tuple(9, a, b));
            }
        });
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremeSweep {
    pub k: usize,
    pub bound: i64,
    /// `C² < 0` with positive genus.
    pub negative_positive_genus: Vec<DivisorClass>,
    /// `C² <= 0` with positive genus (only reported for `k <= 8`).
    pub nonpositive_positive_genus: Vec<DivisorClass>,
}

impl ExtremeSweep {
    pub fn clean(&self) -> bool {
        self.negative_positive_genus.is_empty() && self.nonpositive_positive_genus.is_empty()
    }
}

/// Searches ordered classes with `0 < a <= bound`, `0 <= bi <= bound` for
/// non-positive-square classes of positive genus.
pub fn extreme_sweep(k: usize, bound: i64) -> Result<ExtremeSweep, EnumerationError> {
    if k > 9 {
        return Err(EnumerationError::KTooLarge { k, max: 9 });
    }
    let mut neg = Vec::new();
    let mut nonpos = Vec::new();
    for a in 1..=bound {
        walk_ordered(k, 0, bound, &|_| false, &mut |b| {
            let sq = square(a, b);
            let g2 = genus_twice_minus_two(a, b);
            if g2 >= 0 {
                if sq < 0 {
                    neg.push(class_from_tuple(k, a, b));
                }
                if sq <= 0 && k <= 8 {
                    nonpos.push(class_from_tuple(k, a, b));
                }
            }
        });
    }
    Ok(ExtremeSweep {
        k,
        bound,
        negative_positive_genus: neg,
        nonpositive_positive_genus: nonpos,
    })
}

/// `H` as a class on `CP² # k`, convenient for callers.
pub fn h_class(k: usize) -> DivisorClass {
    let mut c = vec![q(0); k + 1];
    c[0] = q(1);
    DivisorClass::new(SurfaceModel::rational(k), c).expect("rank")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::j_genus;

    fn lit(s: &str, k: usize) -> DivisorClass {
        DivisorClass::parse(s, SurfaceModel::rational(k)).unwrap()
    }

    #[test]
    fn exceptional_small_k() {
        assert_eq!(exceptional_classes(1).unwrap(), vec![lit("E1", 1)]);
        let mut want = vec![lit("E1", 2), lit("E2", 2), lit("H-E1-E2", 2)];
        want.sort();
        assert_eq!(exceptional_classes(2).unwrap(), want);
        assert_eq!(exceptional_classes(3).unwrap().len(), 6);
        assert!(exceptional_classes(9).is_err());
    }

    #[test]
    fn exceptional_counts_match_known_values() {
        // 1, 2, 3, 6, 10, 16, 27, 56, 240
        let want = [0, 1, 3, 6, 10, 16, 27, 56, 240];
        for (k, &n) in want.iter().enumerate() {
            assert_eq!(exceptional_classes(k).unwrap().len(), n, "k = {k}");
        }
    }

    #[test]
    fn a_bounds() {
        assert_eq!(cauchy_schwarz_a_bound(0), Some(11));
        assert_eq!(cauchy_schwarz_a_bound(1), Some(7));
        assert_eq!(cauchy_schwarz_a_bound(2), Some(4));
        assert_eq!(cauchy_schwarz_a_bound(3), Some(2));
    }

    #[test]
    fn negative_filters() {
        let fams = negative_sphere_classes(7, 0).unwrap();
        let a3: Vec<_> = fams.iter().filter(|f| f.a() == 3 && f.square() == -1).collect();
        assert!(!a3.is_empty());
        for f in a3 {
            assert_eq!(negative_family(&f.representative), Some(NegativeFamily::Positive(3)));
        }
        let fams = negative_sphere_classes(8, 0).unwrap();
        let a6: Vec<_> = fams.iter().filter(|f| f.a() == 6 && f.square() == -1).collect();
        assert_eq!(a6.len(), 1);
        assert_eq!(a6[0].representative, lit("6H-3E1-2E2-2E3-2E4-2E5-2E6-2E7-2E8", 8));
    }

    #[test]
    fn exceptional_shape_at_k2() {
        let fams = negative_sphere_classes(2, 2).unwrap();
        let got: BTreeSet<DivisorClass> = fams
            .iter()
            .filter(|f| f.a() <= 0)
            .flat_map(|f| f.instances())
            .collect();
        let mut want = BTreeSet::new();
        for bb in 1..=3i64 {
            for (i, j) in [(1, 2), (2, 1)] {
                let mut c = vec![1 - bb, 0, 0];
                c[i] = bb;
                want.insert(DivisorClass::from_ints(SurfaceModel::rational(2), &c).unwrap());
                c[j] = -1;
                want.insert(DivisorClass::from_ints(SurfaceModel::rational(2), &c).unwrap());
            }
        }
        assert_eq!(got, want);
    }

    #[test]
    fn zero_square_has_h_minus_e1() {
        for k in 1..=8 {
            let inst = all_instances(&zero_square_sphere_classes(k).unwrap());
            assert!(inst.contains(&lit("H-E1", k)));
        }
        let inst = all_instances(&zero_square_sphere_classes(8).unwrap());
        assert!(inst.contains(&lit("10H-4E1-4E2-4E3-4E4-3E5-3E6-3E7-3E8", 8)));
    }

    #[test]
    fn patterns_are_spheres() {
        for (a, b) in ZERO_SQUARE_PATTERNS {
            let c = class_from_tuple(8, a, b);
            assert_eq!(c.square(), q(0), "{c}");
            assert_eq!(j_genus(&c), q(0), "{c}");
        }
    }

    #[test]
    fn nine_squares_small() {
        assert_eq!(nine_squares_representations(0, true), vec![[0; 9]]);
        let r18 = nine_squares_representations(18, true);
        assert_eq!(r18.len(), 3);
        assert!(r18.contains(&[3, 0, 0, 0, 0, 0, 0, 0, -3]));
        assert!(r18.contains(&[2, 2, 2, -1, -1, -1, -1, -1, -1]));
        assert!(r18.contains(&[1, 1, 1, 1, 1, 1, -2, -2, -2]));
    }

    #[test]
    fn small_plus_k6() {
        let rep = small_plus_audit(6, 8).unwrap();
        assert!(rep.passed);
        assert!(rep.genus0_large_a.contains(&lit("3H-2E1", 6)));
        assert_eq!(rep.genus1_equality, vec![lit("3H-E1-E2-E3-E4-E5-E6", 6)]);
        let rep8 = small_plus_audit(8, 8).unwrap();
        assert_eq!(rep8.genus1_min_square, Some(1));
        let rep3 = small_plus_audit(3, 6).unwrap();
        assert!(rep3.nonneg_square_nonneg_k.is_empty());
    }

    #[test]
    fn k9_minus_mk() {
        let got = nonneg_square_nonneg_k_classes(9);
        let want: Vec<_> = (1..=3).map(|m| class_from_tuple(9, 3 * m, &[m; 9])).collect();
        let mut got_sorted = got.clone();
        got_sorted.sort();
        let mut want_sorted = want;
        want_sorted.sort();
        assert_eq!(got_sorted, want_sorted);
    }
}
