use conelab_core::cones::{cone_from_rays, conic_certificate, dual_cone, RationalCone};
use conelab_core::configurations::{blow_down, NegativeConfiguration};
use conelab_core::cremona::{order, reflect};
use conelab_core::inflation::{formal_inflate, gram_schmidt_negative, max_inflate, InflationTrace};
use conelab_core::lattice::k_dot;
use conelab_core::rational::{q, qr};
use conelab_core::swcert::{default_pool, sw_certificate};
use conelab_core::{j_genus, DivisorClass, SurfaceModel, Q};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn surface() -> impl Strategy<Value = SurfaceModel> {
    prop_oneof![
        (0usize..=6).prop_map(SurfaceModel::rational),
        (1u32..=3, 0usize..=3).prop_map(|(h, k)| SurfaceModel::trivial_ruled(h, k).unwrap()),
        (1u32..=3, 0usize..=3).prop_map(|(h, k)| SurfaceModel::nontrivial_ruled(h, k).unwrap()),
    ]
}

fn class_on(s: SurfaceModel, spread: i64) -> impl Strategy<Value = DivisorClass> {
    prop::collection::vec(-spread..=spread, s.rank()).prop_map(move |v| DivisorClass::from_ints(s, &v).unwrap())
}

fn rational_class(k: usize, spread: i64) -> impl Strategy<Value = DivisorClass> {
    class_on(SurfaceModel::rational(k), spread)
}

fn positive_class() -> impl Strategy<Value = DivisorClass> {
    (7i64..=12, prop::collection::vec(-2i64..=2, 3)).prop_map(|(a, mut v)| {
        v.insert(0, a);
        DivisorClass::from_ints(SurfaceModel::rational(3), &v).unwrap()
    })
}

fn classes(n: usize) -> impl Strategy<Value = Vec<DivisorClass>> {
    surface().prop_flat_map(move |s| prop::collection::vec(class_on(s, 6), n))
}

fn triple(k: usize) -> impl Strategy<Value = (usize, usize, usize)> {
    Just((1..=k).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| (v[0], v[1], v[2]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn pairing_symmetric_bilinear(v in classes(3), s in -5i64..=5, t in -5i64..=5) {
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(x.dot(y), y.dot(x));
        let comb = x.scale(&q(s)).add_scaled(&q(t), y);
        prop_assert_eq!(comb.dot(z), q(s) * x.dot(z) + q(t) * y.dot(z));
    }

    #[test]
    fn adjunction_parity(v in classes(1)) {
        prop_assert!(j_genus(&v[0]).is_integer());
    }

    #[test]
    fn literal_and_json_round_trip(v in classes(1), d in 1i64..=4) {
        let x = v[0].scale(&qr(1, d));
        let back = DivisorClass::parse(&x.to_string(), x.surface()).unwrap();
        prop_assert_eq!(&back, &x);
        let js = serde_json::to_string(&x).unwrap();
        let back: DivisorClass = serde_json::from_str(&js).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn light_cone(a in positive_class(), b in positive_class(), shift in 0usize..3) {
        prop_assert!(a.dot(&b).is_positive());
        // square-zero fibre classes H - Ei still pair positively
        let f = DivisorClass::h(a.surface()).add_scaled(&-Q::one(), &DivisorClass::e(a.surface(), shift + 1));
        prop_assert!(f.square().is_zero());
        prop_assert!(a.dot(&f).is_positive());
    }

    #[test]
    fn reflections_preserve_invariants(x in rational_class(5, 8), t in triple(5)) {
        let y = reflect(&x, t).unwrap();
        prop_assert_eq!(y.square(), x.square());
        prop_assert_eq!(k_dot(&y), k_dot(&x));
        prop_assert!(y.is_integral());
        prop_assert_eq!(reflect(&y, t).unwrap(), x.clone());
        prop_assert_eq!(order(&order(&x)), order(&x));
    }

    #[test]
    fn reflection_is_equivariant(x in rational_class(5, 6), t in triple(5), perm in Just(vec![0usize, 1, 2, 3, 4]).prop_shuffle()) {
        // Ei moves to E(perm[i-1]+1), and the triple with it
        let moved = x.permute_e(&perm);
        let mt = |i: usize| perm[i - 1] + 1;
        let lhs = order(&reflect(&moved, (mt(t.0), mt(t.1), mt(t.2))).unwrap());
        let rhs = order(&reflect(&x, t).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

fn pointed_rays() -> impl Strategy<Value = Vec<DivisorClass>> {
    prop::collection::vec((1i64..=6, -5i64..=5, -5i64..=5), 3..=6).prop_map(|v| {
        let s = SurfaceModel::rational(2);
        v.into_iter()
            .map(|(a, b, c)| DivisorClass::from_ints(s, &[a, b, c]).unwrap())
            .collect()
    })
}

fn full(c: &RationalCone) -> bool {
    c.dimension() == c.ambient.rank() && c.is_pointed()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn double_dual(rays in pointed_rays()) {
        let c = cone_from_rays(&rays).unwrap();
        prop_assume!(full(&c));
        prop_assert!(c.is_consistent());
        let dd = dual_cone(&dual_cone(&c));
        prop_assert_eq!(dd.rays, c.rays.clone());
        for r in &rays {
            prop_assert!(c.contains(r));
        }
    }

    #[test]
    fn certificates_verify(rays in pointed_rays(), x in rational_class(2, 6)) {
        let cert = conic_certificate(&rays, &x).unwrap();
        prop_assert!(cert.verify(&rays, &x));
        let c = cone_from_rays(&rays).unwrap();
        prop_assert_eq!(cert.is_combination(), c.contains(&x));
    }

    #[test]
    fn inflation_trace_identity(a in rational_class(3, 6), c in rational_class(3, 3), num in 1i64..=4, den in 1i64..=4) {
        prop_assume!(c.square().is_negative() && a.dot(&c).is_positive());
        let (top, limit) = max_inflate(&a, &c).unwrap();
        prop_assert!(top.dot(&c).is_zero());
        let eps = &limit * qr(num.min(den), den);
        let step = formal_inflate(&a, &c, &eps).unwrap();
        let mut trace = InflationTrace::new(&a);
        trace.push(&c, eps.clone());
        prop_assert_eq!(&trace.result, &step);
        prop_assert!(trace.verify());
        prop_assert!(!step.dot(&c).is_negative());
        prop_assert!(formal_inflate(&a, &c, &(&limit + Q::one())).is_err());
    }

    #[test]
    fn gram_schmidt_orthogonal(v in prop::collection::vec(rational_class(4, 2), 1..=3)) {
        prop_assume!(v.iter().all(|c| c.square().is_negative()));
        if let Ok(out) = gram_schmidt_negative(&v) {
            for (i, a) in out.iter().enumerate() {
                prop_assert!(a.square().is_negative());
                for b in &out[i + 1..] {
                    prop_assert!(a.dot(b).is_zero());
                }
            }
        }
    }

    #[test]
    fn blow_down_identities(c in rational_class(4, 4)) {
        let s = c.surface();
        let e = DivisorClass::e(s, 4);
        prop_assume!(c != e && c.square().is_negative() && !j_genus(&c).is_negative() && !c.dot(&e).is_negative());
        let cfg = NegativeConfiguration::new(s, vec![e.clone(), c.clone()]).unwrap();
        let bd = blow_down(&cfg, &e).unwrap();
        let r = &bd.records[0];
        let m = c.dot(&e);
        prop_assert_eq!(r.image.square(), c.square() + &m * &m);
        prop_assert_eq!(k_dot(&r.image), k_dot(&c) - &m);
        prop_assert!(r.genus_after >= r.genus_before);
        prop_assert_eq!(r.genus_after == r.genus_before, m.is_zero() || m.is_one());
        prop_assert!(bd.identities_hold);
    }

    #[test]
    fn sw_certificates_revalidate(v in classes(1)) {
        let e = &v[0];
        let pool = default_pool(e.surface());
        if let Ok(out) = sw_certificate(e, &pool) {
            if let Some(c) = out.certificate() {
                prop_assert!(c.verify());
            }
        }
    }
}
