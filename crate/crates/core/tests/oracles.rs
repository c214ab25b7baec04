//! Values frozen from independent computer-algebra runs and hand checks.

use kummer_lab::config::{cyclic_selection, preset_config, TwoTorsionLabel};
use kummer_lab::cover::{analyze_cover, normalization_model, pullback_sextic};
use kummer_lab::cycle::{build_new_cycle, pushforward_check, selection_curve};
use kummer_lab::enumerative::{deformation_witness, kontsevich_counts};
use kummer_lab::locus::{humbert5_residual, preset_wide_family, scan_family};
use kummer_lab::projective::{conic_through_five, parametrize_conic, tangent_line_at, Conic, ProjLine, ProjPoint, TernaryForm};
use kummer_lab::scalar::{q, ratio, QuadScalar};

fn lab(i: usize, j: usize) -> TwoTorsionLabel {
    TwoTorsionLabel::new(i, j).unwrap()
}

#[test]
fn conic_through_five_points() {
    let pts = [
        ProjPoint::from_ints(1, 0, 1),
        ProjPoint::from_ints(-1, 0, 1),
        ProjPoint::from_ints(0, 1, 1),
        ProjPoint::from_ints(0, -1, 1),
        ProjPoint::from_ints(1, 1, 1),
    ];
    let c = conic_through_five(&pts).unwrap();
    assert_eq!(c, Conic::from_ints([1, 1, -1, -1, 0, 0]));
}

#[test]
fn polar_tangent_line() {
    let c = Conic::from_ints([0, 1, 0, 0, -1, 0]);
    let l = tangent_line_at(&c, &ProjPoint::from_ints(1, 1, 1)).unwrap();
    assert_eq!(l, ProjLine::from_ints(1, -2, 1));
}

#[test]
fn circle_parametrization_lies_on_circle() {
    let c = Conic::from_ints([1, 1, -1, 0, 0, 0]);
    let par = parametrize_conic(&c, &ProjPoint::from_ints(1, 0, 1)).unwrap();
    assert_eq!(par.map.degree(), 2);
    assert!(par.map.pullback(&c.as_ternary()).unwrap().is_zero());
    let mut lin = TernaryForm::zero(1);
    lin.add_term([1, 0, 0], q(1));
    assert!(!par.map.pullback(&lin).unwrap().is_zero());
}

#[test]
fn preset_nodes_and_residual() {
    let cfg = preset_config();
    assert_eq!(cfg.nodes().len(), 15);
    for p in cfg.nodes().values() {
        assert_eq!((1..=6).filter(|k| cfg.line(*k).contains(p)).count(), 2);
    }
    let r = humbert5_residual(&cfg, &cyclic_selection(), 6).unwrap();
    assert_eq!(r.conic, Conic::from_ints([4, -8, 1, -4, 5, -6]));
    assert_eq!(r.residual, q(167184));
    assert_eq!(r.meets.len(), 2);
    let radicands: Vec<String> =
        r.meets[0].point.coords().iter().filter_map(|c| c.radicand().map(|m| m.to_string())).collect();
    assert!(!radicands.is_empty() && radicands.iter().all(|m| m == "129"));
}

#[test]
fn preset_pullback_profile() {
    let cfg = preset_config();
    let phi = selection_curve(&cfg, &cyclic_selection()).unwrap();
    let f = pullback_sextic(&cfg, &phi).unwrap();
    let a = analyze_cover(&f).unwrap();
    assert_eq!(f.degree(), 12);
    let doubles: usize = a.node_params.iter().filter(|n| n.multiplicity == 2).map(|n| n.factor.degree()).sum();
    let simples: usize = a.branch_points.iter().filter(|b| b.multiplicity == 1).map(|b| b.points).sum();
    assert_eq!((doubles, simples), (5, 2));
    assert!(!a.split);
    assert_eq!(a.genus_normalization, 0);
    // the simple roots are conjugate and irrational
    assert_eq!(a.branch_points.len(), 1);
    assert_eq!(a.branch_points[0].factor.degree(), 2);
    let m = normalization_model(&f).unwrap();
    assert_eq!(m.nodes.len(), 5);
}

#[test]
fn wide_family_scan_is_ordered() {
    let fam = preset_wide_family();
    assert_eq!((fam.lo.clone(), fam.hi.clone()), (ratio(5, 2), ratio(7, 2)));
    let s = scan_family(&fam, &cyclic_selection(), 6, 16).unwrap();
    assert_eq!(s.len(), 16);
    assert!(s.windows(2).all(|w| w[0].param < w[1].param));
    assert!(s.iter().all(|x| x.sign.is_some()));
}

#[test]
fn new_cycle_field_of_definition() {
    let cfg = preset_config();
    let phi = selection_curve(&cfg, &cyclic_selection()).unwrap();
    // square class of F_red(t_P)·F_red(t_R), independent of the parametrization
    for ((p, r), m) in [(((1, 2), (2, 3)), "6"), (((2, 3), (1, 2)), "6"), (((4, 5), (1, 5)), "-3")] {
        let z = build_new_cycle(&cfg, &phi, lab(p.0, p.1), lab(r.0, r.1)).unwrap();
        assert_eq!(z.aux_radicand, m);
        assert!(z.cycle.cocycle);
        assert_eq!(z.cycle.components.len(), 2);
    }
}

#[test]
fn pushforward_branch_form() {
    let cfg = preset_config();
    let phi = selection_curve(&cfg, &cyclic_selection()).unwrap();
    let z = build_new_cycle(&cfg, &phi, lab(1, 2), lab(2, 3)).unwrap();
    let rep = pushforward_check(&z).unwrap();
    assert!(rep.passed);
    assert_eq!(rep.branch_form.degree(), 10);
    assert_eq!(rep.genus, 4);
    assert_eq!(rep.factor, 2);
    assert!(rep.branch_form.squarefree_decomposition().unwrap().iter().all(|f| f.multiplicity == 1));
}

#[test]
fn witness_coordinates() {
    let cfg = preset_config();
    let nodes = [lab(2, 3), lab(3, 4), lab(4, 5), lab(1, 5)];
    let w1 = deformation_witness(&cfg, &nodes, 1).unwrap();
    let expect: Vec<QuadScalar> =
        [q(1), q(1), ratio(1, 4), q(2), ratio(5, 4), ratio(3, 4)].into_iter().map(QuadScalar::rational).collect();
    assert_eq!(w1.conics[0].coeffs.to_vec(), expect);
    assert_eq!((w1.count, w1.conics[0].multiplicity), (2, 2));

    let w6 = deformation_witness(&cfg, &nodes, 6).unwrap();
    assert_eq!(w6.count, 2);
    let yy: Vec<QuadScalar> = w6.conics.iter().map(|c| c.coeffs[1].clone()).collect();
    let s6 = |b: i64| QuadScalar::new(ratio(58, 529), ratio(b, 529), 6.into());
    assert!(yy.contains(&s6(160)) && yy.contains(&s6(-160)));
}

#[test]
fn kontsevich_regression() {
    let t = kontsevich_counts(4).unwrap();
    assert_eq!(t[&4], 620.into());
}
