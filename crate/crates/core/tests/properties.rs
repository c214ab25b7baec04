use proptest::prelude::*;

use kummer_lab::binary_form::{BinaryForm, ParamPoint};
use kummer_lab::config::{build_standard, cyclic_selection, humbert_invariant, DivisorClass, SexticConfiguration};
use kummer_lab::cover::analyze_cover;
use kummer_lab::cycle::FormalDivisor;
use kummer_lab::enumerative::{conic_characteristic, random_query};
use kummer_lab::locus::humbert5_residual;
use kummer_lab::projective::{conic_through_five, are_collinear, ProjPoint, RationalMap, TernaryForm};
use kummer_lab::scalar::{q, ratio, QuadScalar};

fn small_form(deg: usize) -> impl Strategy<Value = BinaryForm> {
    prop::collection::vec(-6i64..=6, deg + 1)
        .prop_map(|c| BinaryForm::from_ints(&c))
        .prop_filter("nonzero", |f| !f.is_zero())
}

fn ternary(deg: u32) -> impl Strategy<Value = TernaryForm> {
    let n = ((deg + 1) * (deg + 2) / 2) as usize;
    prop::collection::vec(-4i64..=4, n).prop_map(move |c| {
        let mut f = TernaryForm::zero(deg);
        let mut k = 0;
        for a in 0..=deg {
            for b in 0..=deg - a {
                f.add_term([a, b, deg - a - b], q(c[k]));
                k += 1;
            }
        }
        f
    })
}

fn distinct_roots(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::btree_set(-30i64..=30, n).prop_map(|s| s.into_iter().collect())
}

fn lin(r: i64) -> BinaryForm {
    BinaryForm::from_ints(&[-r, 1])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pullback_is_multiplicative(a in small_form(2), b in small_form(2), c in small_form(2), f in ternary(1), g in ternary(2)) {
        let Ok(phi) = RationalMap::new([a, b, c]) else { return Ok(()) };
        let fg = f.mul(&g);
        let (pf, pg, pfg) = (phi.pullback(&f), phi.pullback(&g), phi.pullback(&fg));
        if let (Ok(pf), Ok(pg), Ok(pfg)) = (pf, pg, pfg) {
            prop_assert_eq!(pf.mul(&pg), pfg);
        }
    }

    #[test]
    fn squarefree_reconstructs(roots in distinct_roots(4), mult in prop::collection::vec(1usize..=3, 4), k in 1i64..=9) {
        let f = BinaryForm::product(&roots.iter().zip(&mult).map(|(r, m)| lin(*r).pow(*m)).collect::<Vec<_>>()).scale(&q(k));
        let dec = f.squarefree_decomposition().unwrap();
        let back = BinaryForm::product(&dec.iter().map(|d| d.factor.pow(d.multiplicity)).collect::<Vec<_>>());
        prop_assert!(back.proportional(&f));
        let total: usize = dec.iter().map(|d| d.factor.degree() * d.multiplicity).sum();
        prop_assert_eq!(total, f.degree());
    }

    #[test]
    fn conic_fit_ignores_scaling_and_order(
        pts in prop::collection::vec((-9i64..=9, -9i64..=9, 1i64..=4), 5),
        scales in prop::collection::vec(1i64..=7, 5),
        rot in 0usize..5,
    ) {
        let p: Vec<ProjPoint> = pts.iter().map(|&(x, y, z)| ProjPoint::from_ints(x, y, z)).collect();
        let Ok(arr) = <[ProjPoint; 5]>::try_from(p.clone()) else { return Ok(()) };
        let Ok(c) = conic_through_five(&arr) else { return Ok(()) };
        let scaled: Vec<ProjPoint> = pts
            .iter()
            .zip(&scales)
            .map(|(&(x, y, z), &s)| ProjPoint::from_ints(-s * x, -s * y, -s * z))
            .collect();
        let mut rotated = scaled.clone();
        rotated.rotate_left(rot);
        let c2 = conic_through_five(&<[ProjPoint; 5]>::try_from(rotated).unwrap()).unwrap();
        for x in &p {
            prop_assert!(c2.contains(x));
        }
        prop_assert_eq!(c, c2);
    }

    #[test]
    fn random_configurations_are_valid(params in prop::collection::btree_set(-12i64..=12, 6)) {
        let params: Vec<ParamPoint> = params.into_iter().map(|n| ParamPoint::rational(ratio(n, 1))).collect();
        let cfg = build_standard(&params).unwrap();
        prop_assert!(cfg.validate().is_valid());
        let nodes: Vec<&ProjPoint> = cfg.nodes().values().collect();
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                prop_assert_ne!(nodes[i], nodes[j]);
            }
        }
        for p in &nodes {
            prop_assert_eq!((1..=6).filter(|k| cfg.line(*k).contains(p)).count(), 2);
        }
        let back = SexticConfiguration::from_json(&cfg.to_json()).unwrap();
        prop_assert_eq!(&back, &cfg);
        let r = humbert5_residual(&cfg, &cyclic_selection(), 6).unwrap();
        prop_assert!(r.conic.is_smooth());
    }

    #[test]
    fn humbert_invariant_formula(a in -50i64..=50, b in -50i64..=50) {
        let d = DivisorClass { theta_pairing: a, self_intersection: b };
        let delta = a * a - 2 * b;
        match humbert_invariant(d) {
            Ok(v) => prop_assert_eq!(v as i64, delta),
            Err(_) => prop_assert!(delta < 0),
        }
        // multiples of θ have invariant zero
        let k = a;
        prop_assert_eq!(humbert_invariant(DivisorClass { theta_pairing: 2 * k, self_intersection: 2 * k * k }).unwrap(), 0);
    }

    #[test]
    fn quad_scalar_json_round_trip(a in -100i64..=100, b in -100i64..=100, d in 1i64..=50) {
        let x = QuadScalar::new(ratio(a, d), ratio(b, d + 1), 7.into());
        let s = serde_json::to_string(&x).unwrap();
        let y: QuadScalar = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(x, y);
    }

    #[test]
    fn divisor_algebra(xs in prop::collection::vec((0usize..5, -3i64..=3), 0..12)) {
        let names = ["A", "B", "C", "D", "E"];
        let mut d = FormalDivisor::new();
        for (i, m) in &xs {
            d.add_point(names[*i], *m);
        }
        prop_assert!(d.add(&d.neg()).is_zero());
        prop_assert_eq!(d.scale(2).degree(), 2 * d.degree());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// All-even exponents split; making one exponent odd gives branch points.
    #[test]
    fn splitting_criterion(
        roots in distinct_roots(4),
        half in prop::collection::vec(1usize..=2, 4),
        with_quadratic in any::<bool>(),
        flip in 0usize..4,
        k in 1i64..=5,
    ) {
        let mut factors: Vec<BinaryForm> = roots.iter().zip(&half).map(|(r, h)| lin(*r).pow(2 * h)).collect();
        if with_quadratic {
            factors.push(BinaryForm::from_ints(&[1, 0, 1]).pow(2));
        }
        let even = BinaryForm::product(&factors).scale(&q(k * k));
        let a = analyze_cover(&even).unwrap();
        prop_assert!(a.split);
        prop_assert!(a.branch_points.is_empty());
        prop_assert_eq!(a.components, 2);

        factors[flip] = lin(roots[flip]).pow(2 * half[flip] - 1);
        let odd = BinaryForm::product(&factors).mul(&lin(100));
        let b = analyze_cover(&odd).unwrap();
        prop_assert!(!b.split);
        prop_assert_eq!(b.branch_count, 2);
        prop_assert_eq!(b.genus_normalization, 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn characteristic_duality(k in 0usize..=5, seed in 0u64..10_000) {
        let qy = random_query(k, seed);
        let n = conic_characteristic(&qy).unwrap();
        prop_assert_eq!(n, conic_characteristic(&qy.dual()).unwrap());
        prop_assert_eq!(n, [1, 2, 4, 4, 2, 1][5 - k]);
        for (i, a) in qy.points.iter().enumerate() {
            for b in &qy.points[i + 1..] {
                for c in &qy.points {
                    prop_assert!(c == a || c == b || !are_collinear(a, b, c));
                }
            }
        }
    }
}
