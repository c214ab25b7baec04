//! The new cycle as the pushforward of a Collino cycle.
//!
//! `D̃ → Ĉ` is the double cover branched over the points of `Ĉ` lying over
//! the nodes; in the parameter `τ` of `Ĉ` it is `v² = h(τ)` with
//! `h = G_red(ψ_t, ψ_u)`. The two points over `P` are Weierstrass points of
//! `D̃`, and the function `f` on `Ĉ` pulls back to the Collino function for
//! that pair.

use serde::Serialize;

use super::hyperelliptic::{collino_cycle, hyperelliptic_divisor, CollinoCycle, HyperellipticModel, XExpression};
use super::{FormalDivisor, FunctionExpr, NewCycle};
use crate::binary_form::{BinaryForm, ParamPoint};
use crate::error::{Error, Result};
use crate::projective::QuadPoint;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PushCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PushforwardReport {
    /// Branch form `h(τ)` of `D̃ → Ĉ`.
    pub branch_form: BinaryForm,
    pub model: HyperellipticModel,
    pub tau1: ParamPoint,
    pub tau2: ParamPoint,
    pub tau_r: ParamPoint,
    pub collino: CollinoCycle,
    pub checks: Vec<PushCheck>,
    /// Number of Weierstrass points of `D̃` over the node.
    pub factor: usize,
    pub genus: usize,
    pub passed: bool,
    pub note: String,
}

/// `G(a, b)` for binary forms `a, b` of equal degree.
pub fn compose_forms(g: &BinaryForm, a: &BinaryForm, b: &BinaryForm) -> BinaryForm {
    let d = g.degree();
    let mut out = BinaryForm::zero(d * a.degree());
    for i in 0..=d {
        let c = g.coeff(i);
        if num_traits::Zero::is_zero(c) {
            continue;
        }
        out = out.add(&a.pow(i).mul(&b.pow(d - i)).scale(c));
    }
    out
}

fn check(name: &str, passed: bool, detail: String) -> PushCheck {
    PushCheck { name: name.into(), passed, detail }
}

pub fn pushforward_check(z: &NewCycle) -> Result<PushforwardReport> {
    let c_hat = &z.cycle.components[0];
    let FunctionExpr::Mobius { k, zero, pole } = &c_hat.function.expr else {
        return Err(Error::InvalidInput("function on the normalization is not a Möbius function".into()));
    };
    let param_of = |id: &str| {
        c_hat
            .curve
            .point(id)
            .and_then(|p| p.param.clone())
            .ok_or_else(|| Error::InvalidInput(format!("point {id} missing on {}", c_hat.curve.id)))
    };
    let (tau1, tau2, tau_r) = (param_of("P1")?, param_of("P2")?, param_of("R1")?);

    let g_red = BinaryForm::product(z.cover.node_params.iter().map(|n| &n.factor));
    let psi = z.normalization_param.map.forms();
    let h = compose_forms(&g_red, &psi[0], &psi[1]).canonical();
    let model = HyperellipticModel::new(h.dehomogenize())?;
    let mut checks = Vec::new();

    // (i) P1, P2 are branch points of D̃ → Ĉ
    let h1 = h.eval_at(&tau1).is_zero();
    let h2 = h.eval_at(&tau2).is_zero();
    checks.push(check("branch-over-node", h1 && h2, format!("h(τ1) = 0: {h1}, h(τ2) = 0: {h2}")));

    // (ii) pullback of f is the Collino function
    let collino = collino_cycle(&model, &tau1, &tau2, &tau_r)?;
    let same_fn = zero == &tau1 && pole == &tau2 && *k == collino.constant;
    checks.push(check(
        "function-pullback",
        same_fn,
        format!("f = {}, Collino function = {}", c_hat.function.expr, collino.function),
    ));
    let rat = |p: &ParamPoint| p.as_rational();
    let mut factors = Vec::new();
    if let Some(a) = rat(&tau1) {
        factors.push((a, 1));
    }
    if let Some(b) = rat(&tau2) {
        factors.push((b, -1));
    }
    let pulled = XExpression::new(k.clone(), &factors);
    let div = hyperelliptic_divisor(&pulled, &model)?;
    let mut expected = FormalDivisor::point(&HyperellipticModel::weierstrass_label(&tau1), 2);
    expected.add_point(&HyperellipticModel::weierstrass_label(&tau2), -2);
    checks.push(check("divisor-2P1-2P2", div == expected, format!("div f̃ = {div}")));
    checks.push(check(
        "collino-cocycle",
        collino.cycle.cocycle,
        format!("component divisors: {}", collino.component_divisors.join("; ")),
    ));

    // (iii) both Weierstrass points map to the node P
    let target = QuadPoint::from_rational(&z.node_point);
    let image = |tau: &ParamPoint| {
        let (t, u) = tau.homogeneous();
        let on_line = ParamPoint::from_homogeneous(&psi[0].eval_quad(&t, &u), &psi[1].eval_quad(&t, &u));
        z.curve.eval(&on_line)
    };
    let factor = [&tau1, &tau2].into_iter().filter(|t| image(t) == target).count();
    checks.push(check(
        "image-is-node",
        factor == 2,
        format!("{factor} of the two points map to q{} = {}", z.node, z.node_point),
    ));

    // (iv) genus from the branch count
    let branch = h.degree();
    let genus = (branch - 2) / 2;
    checks.push(check(
        "genus",
        genus == model.genus() && genus == 4,
        format!("{branch} branch points, genus {genus}"),
    ));
    let passed = checks.iter().all(|c| c.passed);
    Ok(PushforwardReport {
        branch_form: h,
        model,
        tau1,
        tau2,
        tau_r,
        collino,
        checks,
        factor,
        genus,
        passed,
        note: "verified at the level of divisors and explicit functions; equality of classes in motivic cohomology is not checked".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{cyclic_selection, preset_config, TwoTorsionLabel};
    use crate::cycle::new_cycle::{build_new_cycle, selection_curve};

    #[test]
    fn preset_pushforward() {
        let cfg = preset_config();
        let phi = selection_curve(&cfg, &cyclic_selection()).unwrap();
        let lab = |i, j| TwoTorsionLabel::new(i, j).unwrap();
        for (p, r) in [((1, 2), (2, 3)), ((2, 3), (1, 2)), ((4, 5), (1, 5))] {
            let z = build_new_cycle(&cfg, &phi, lab(p.0, p.1), lab(r.0, r.1)).unwrap();
            let rep = pushforward_check(&z).unwrap();
            assert!(rep.passed, "{:#?}", rep.checks);
            assert_eq!(rep.factor, 2);
            assert_eq!(rep.genus, 4);
            assert_eq!(rep.branch_form.degree(), 10);
        }
    }

    #[test]
    fn compose_identity() {
        let g = BinaryForm::from_ints(&[1, 2, 3]);
        assert_eq!(compose_forms(&g, &BinaryForm::t(), &BinaryForm::u()), g);
    }
}
