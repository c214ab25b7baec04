//! The cycle `(Ĉ, f) + (E_P, g)` on the blow-up of the Kummer plane model at
//! a node `P` of a conic through five nodes.
//!
//! The normalization `Ĉ` of the double cover `w² = F = G²·F_red` is written
//! as the plane conic `y² = c·F_red(t,u)` in `(t:u:y)`, twisted by
//! `c = F_red(t_P)` so that the two points over the node `P` are the rational
//! points `(t_P : y = ±c)`. The exceptional fiber over `P = l_i ∩ l_j` is
//! the conic `W² = c·κ·X·Y` in `(X:Y:W)`, where `X, Y` are the local values
//! of `l_i, l_j` and `κ = ∏_{k≠i,j} l_k(P)`. The strict transform of the
//! sheet `y = ±c` meets it at `(α : β : ±G'(t_P)·c)` with `α, β, G'` the
//! first derivatives of `l_i∘φ`, `l_j∘φ`, `G` in the local coordinate.

use num_traits::Zero;
use serde::Serialize;

use super::{assemble_cycle, function_with_divisor, ComponentKind, CurveComponent, CycleComponent, FormalPoint, MotivicCycle};
use crate::binary_form::{BinaryForm, ParamPoint};
use crate::config::{SexticConfiguration, TwoTorsionLabel};
use crate::cover::{analyze_cover, eval_form, line_pullbacks, normalization_model, square_class, CoverAnalysis};
use crate::error::{Error, Result};
use crate::projective::{parametrize_conic, Conic, ConicParametrization, ProjPoint, QuadPoint, RationalMap};
use crate::scalar::{fmt_rational, sqrt_rational, QuadScalar, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewCycle {
    pub node: TwoTorsionLabel,
    pub aux: TwoTorsionLabel,
    pub node_point: ProjPoint,
    /// The rational curve `φ : P¹ → P²` through the five nodes.
    pub curve: RationalMap,
    pub node_param: ParamPoint,
    pub aux_param: ParamPoint,
    /// Twist `c = F_red(t_P)`.
    #[serde(with = "crate::scalar::rational_str")]
    pub twist: Rational,
    /// Square class of `c·F_red(t_R)`: `R1` has coordinates in `Q(√m)`.
    pub aux_radicand: String,
    pub sextic_pullback: BinaryForm,
    pub reduced: BinaryForm,
    pub square_part: BinaryForm,
    /// `Ĉ : y² = c·F_red` as a conic in `(t:u:y)`.
    pub normalization: Conic,
    pub normalization_param: ConicParametrization,
    /// `E_P : W² = cκ·XY` in `(X:Y:W)`.
    pub exceptional: Conic,
    pub exceptional_param: ConicParametrization,
    #[serde(with = "crate::scalar::rational_str")]
    pub kappa: Rational,
    /// `(α, β, G')` in the local coordinate at `t_P`.
    pub local_derivatives: [String; 3],
    /// Constant of `f` on `Ĉ` (normalized by `f(R1) = 1`).
    pub f_constant: QuadScalar,
    /// Constant of `g` on `E_P` (normalized to 1 at `(1:0:0)`).
    pub g_constant: QuadScalar,
    pub cycle: MotivicCycle,
    #[serde(skip)]
    pub(crate) cover: CoverAnalysis,
}

fn first_order(f: &BinaryForm, at: &ParamPoint) -> (Rational, Rational) {
    let e = f.local_expansion(at);
    (e.coeff(0), e.coeff(1))
}

/// Link name for the point of the blown-up surface over node `P` on sheet `±`.
pub fn sheet_image(node: TwoTorsionLabel, plus: bool) -> String {
    format!("q{node}{}", if plus { "+" } else { "-" })
}

fn affine(t: &ParamPoint) -> (Rational, Rational) {
    match t {
        ParamPoint::Infinity => (Rational::from_integer(1.into()), Rational::zero()),
        ParamPoint::Finite(x) => (x.to_rational().expect("rational node parameter"), Rational::from_integer(1.into())),
    }
}

/// Parameter of a node on the curve `φ`, checked against the cover's nodes.
pub fn node_parameter(config: &SexticConfiguration, phi: &RationalMap, cover: &CoverAnalysis, label: TwoTorsionLabel) -> Result<ParamPoint> {
    let not_node = || Error::NotANode { label: format!("q{label}") };
    let t = phi.preimage(config.node(label)).map_err(|_| not_node())?;
    if cover.node_params.iter().any(|n| n.root.as_ref() == Some(&t)) {
        Ok(t)
    } else {
        Err(not_node())
    }
}

pub fn build_new_cycle(
    config: &SexticConfiguration,
    phi: &RationalMap,
    node: TwoTorsionLabel,
    aux: TwoTorsionLabel,
) -> Result<NewCycle> {
    if node == aux {
        return Err(Error::InvalidInput("node P and auxiliary R must be different nodes".into()));
    }
    if phi.degree() != 2 {
        return Err(Error::InvalidInput(format!("expected a conic parametrization, got degree {}", phi.degree())));
    }
    let pulls = line_pullbacks(config, phi)?;
    let f = BinaryForm::product(&pulls);
    let cover = analyze_cover(&f)?;
    if cover.split {
        return Err(Error::OnLocus);
    }
    if cover.genus_normalization != 0 {
        return Err(Error::InvalidInput(format!(
            "normalization has genus {}; the construction needs a rational curve",
            cover.genus_normalization
        )));
    }
    let model = normalization_model(&f)?;
    let tp = node_parameter(config, phi, &cover, node)?;
    let tr = node_parameter(config, phi, &cover, aux)?;
    if f.multiplicity_at(&tp) != 2 {
        return Err(Error::InvalidInput(format!("q{node} is not an ordinary node of the curve")));
    }
    let reduced = model.reduced.clone();
    let g = model.square_part.clone();
    let c = eval_form(&reduced, &tp);
    let vr = eval_form(&reduced, &tr);

    // Ĉ : y² − c·F_red(t,u) = 0, F_red = f0 u² + f1 tu + f2 t²
    let (f0, f1, f2) = (reduced.coeff(0).clone(), reduced.coeff(1).clone(), reduced.coeff(2).clone());
    let c_hat = Conic::new([-&c * &f2, -&c * &f0, Rational::from_integer(1.into()), -&c * &f1, Rational::zero(), Rational::zero()])?;
    let (t0, u0) = affine(&tp);
    let p1 = ProjPoint::new(t0.clone(), u0.clone(), c.clone())?;
    let p2 = ProjPoint::new(t0.clone(), u0.clone(), -c.clone())?;
    let (t_r, u_r) = affine(&tr);
    let y_r = sqrt_rational(&(&c * &vr));
    let r1 = QuadPoint::new([QuadScalar::rational(t_r), QuadScalar::rational(u_r), y_r]);
    let c_par = parametrize_conic(&c_hat, &p1)?;
    let tau1 = c_par.param_of_rational(&p1)?;
    let tau2 = c_par.param_of_rational(&p2)?;
    let tau_r = c_par.param_of(&r1)?;
    let c_hat_component = CurveComponent {
        id: "C".into(),
        kind: ComponentKind::RationalParametrized,
        model: format!("y^2 = ({})*({})", fmt_rational(&c), reduced.to_string_in("t", "u")),
        points: vec![
            FormalPoint::on("C", "P1", tau1.clone()).with_coords(p1.coords().iter().cloned().map(QuadScalar::rational).collect()).linked(&sheet_image(node, true)),
            FormalPoint::on("C", "P2", tau2.clone()).with_coords(p2.coords().iter().cloned().map(QuadScalar::rational).collect()).linked(&sheet_image(node, false)),
            FormalPoint::on("C", "R1", tau_r.clone()).with_coords(r1.coords().to_vec()),
        ],
    };
    let f_data = function_with_divisor(
        &c_hat_component,
        &c_hat_component.points[0],
        &c_hat_component.points[1],
        &c_hat_component.points[2],
        QuadScalar::one(),
    )?;

    // exceptional fiber over P = l_i ∩ l_j
    let (i, j) = (node.i(), node.j());
    let (li0, alpha) = first_order(&pulls[i - 1], &tp);
    let (lj0, beta) = first_order(&pulls[j - 1], &tp);
    debug_assert!(li0.is_zero() && lj0.is_zero());
    let kappa: Rational = (1..=6)
        .filter(|k| *k != i && *k != j)
        .map(|k| first_order(&pulls[k - 1], &tp).0)
        .product();
    let (_, g1) = first_order(&g, &tp);
    let lhs = &g1 * &g1 * &c;
    let rhs = &kappa * &alpha * &beta;
    if lhs != rhs || alpha.is_zero() || beta.is_zero() {
        return Err(Error::InvalidInput(format!("branch data at q{node} inconsistent: G'^2 c = {lhs}, κ α β = {rhs}")));
    }
    let ck = &c * &kappa;
    let e_conic = Conic::new([Rational::zero(), Rational::zero(), Rational::from_integer(1.into()), -ck.clone(), Rational::zero(), Rational::zero()])?;
    let e_base = ProjPoint::from_ints(1, 0, 0);
    let e_par = parametrize_conic(&e_conic, &e_base)?;
    let e1 = ProjPoint::new(alpha.clone(), beta.clone(), &g1 * &c)?;
    let e2 = ProjPoint::new(alpha.clone(), beta.clone(), -(&g1 * &c))?;
    let s1 = e_par.param_of_rational(&e1)?;
    let s2 = e_par.param_of_rational(&e2)?;
    let s0 = e_par.param_of_rational(&e_base)?;
    let e_id = format!("E_q{node}");
    let e_component = CurveComponent {
        id: e_id.clone(),
        kind: ComponentKind::ExceptionalFiber,
        model: format!("W^2 = ({})*X*Y", fmt_rational(&ck)),
        points: vec![
            FormalPoint::on(&e_id, "P1", s1).with_coords(e1.coords().iter().cloned().map(QuadScalar::rational).collect()).linked(&sheet_image(node, true)),
            FormalPoint::on(&e_id, "P2", s2).with_coords(e2.coords().iter().cloned().map(QuadScalar::rational).collect()).linked(&sheet_image(node, false)),
            FormalPoint::on(&e_id, "B", s0).with_coords(e_base.coords().iter().cloned().map(QuadScalar::rational).collect()),
        ],
    };
    let g_data = function_with_divisor(
        &e_component,
        &e_component.points[1],
        &e_component.points[0],
        &e_component.points[2],
        QuadScalar::one(),
    )?;
    let f_constant = f_data.expr.leading_constant();
    let g_constant = g_data.expr.leading_constant();
    let cycle = assemble_cycle(vec![
        CycleComponent { curve: c_hat_component, function: f_data },
        CycleComponent { curve: e_component, function: g_data },
    ])?;
    let m = square_class(&(&c * &vr));
    Ok(NewCycle {
        node,
        aux,
        node_point: config.node(node).clone(),
        curve: phi.clone(),
        node_param: tp,
        aux_param: tr,
        twist: c,
        aux_radicand: m.to_string(),
        sextic_pullback: f,
        reduced,
        square_part: g,
        normalization: c_hat,
        normalization_param: c_par,
        exceptional: e_conic,
        exceptional_param: e_par,
        kappa,
        local_derivatives: [fmt_rational(&alpha), fmt_rational(&beta), fmt_rational(&g1)],
        f_constant,
        g_constant,
        cycle,
        cover,
    })
}

/// The degree-2 parametrization of the conic through a five-node selection,
/// based at the first selected node.
pub fn selection_curve(config: &SexticConfiguration, selection: &crate::config::Selection) -> Result<RationalMap> {
    let pts: [ProjPoint; 5] = selection.map(|l| config.node(l).clone());
    let conic = crate::projective::conic_through_five(&pts).map_err(|_| Error::DegenerateSelection)?;
    if !conic.is_smooth() {
        return Err(Error::SingularConic { rank: conic.rank() });
    }
    Ok(parametrize_conic(&conic, &pts[0])?.map)
}
