//! The double cover `y² = F(t,u)` of a rational curve branched along the
//! pullback of the sextic: splitting, genus and node data.

use num_traits::Zero;
use serde::Serialize;

use crate::binary_form::{BinaryForm, ParamPoint};
use crate::config::{fmt_param, SexticConfiguration};
use crate::error::{Error, Result};
use crate::projective::RationalMap;
use crate::scalar::{square_free_split, QuadScalar, Rational};

/// Pullbacks of the six lines along `φ`, in line order.
pub fn line_pullbacks(config: &SexticConfiguration, phi: &RationalMap) -> Result<Vec<BinaryForm>> {
    config
        .lines()
        .iter()
        .enumerate()
        .map(|(k, l)| {
            let f = phi.pullback_line(l);
            if f.is_zero() {
                Err(Error::CurveInsideSextic { line: k + 1 })
            } else {
                Ok(f)
            }
        })
        .collect()
}

/// `∏ l_i ∘ φ`, of degree `6d`.
pub fn pullback_sextic(config: &SexticConfiguration, phi: &RationalMap) -> Result<BinaryForm> {
    Ok(BinaryForm::product(&line_pullbacks(config, phi)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileEntry {
    pub factor: String,
    pub degree: usize,
    pub multiplicity: usize,
    /// The root, for linear factors.
    pub root: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchProfile {
    pub degree: usize,
    pub entries: Vec<ProfileEntry>,
}

/// An odd-multiplicity factor: one branch point per root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchDescriptor {
    pub factor: BinaryForm,
    pub multiplicity: usize,
    pub points: usize,
    pub root: Option<ParamPoint>,
}

/// An even-multiplicity factor: nodes of the cover curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeDescriptor {
    pub factor: BinaryForm,
    pub multiplicity: usize,
    pub root: Option<ParamPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverAnalysis {
    pub profile: BranchProfile,
    pub split: bool,
    pub branch_points: Vec<BranchDescriptor>,
    pub branch_count: usize,
    /// Genus of each component of the normalization.
    pub genus_normalization: usize,
    pub components: usize,
    pub not_rational_curve: bool,
    pub node_params: Vec<NodeDescriptor>,
    pub node_count: usize,
    /// `G` with `F = G²·F_red`.
    pub square_part: BinaryForm,
    /// `F_red = F / G²`, the product of the odd-multiplicity factors up to
    /// the exact unit that makes the identity hold on the nose.
    pub reduced: BinaryForm,
}

/// Branch profile, split verdict, genus and nodes of `y² = F`.
pub fn analyze_cover(f: &BinaryForm) -> Result<CoverAnalysis> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    if f.degree() % 2 == 1 {
        return Err(Error::OddDegree { degree: f.degree() });
    }
    let factors = f.squarefree_decomposition()?;
    let profile = BranchProfile {
        degree: f.degree(),
        entries: factors
            .iter()
            .map(|ff| ProfileEntry {
                factor: ff.factor.to_string(),
                degree: ff.factor.degree(),
                multiplicity: ff.multiplicity,
                root: ff.root().map(|r| fmt_param(&r)),
            })
            .collect(),
    };
    let mut branch_points = Vec::new();
    let mut node_params = Vec::new();
    for ff in &factors {
        if ff.multiplicity % 2 == 1 {
            branch_points.push(BranchDescriptor {
                factor: ff.factor.clone(),
                multiplicity: ff.multiplicity,
                points: ff.factor.degree(),
                root: ff.root(),
            });
        }
        if ff.multiplicity >= 2 {
            node_params.push(NodeDescriptor { factor: ff.factor.clone(), multiplicity: ff.multiplicity, root: ff.root() });
        }
    }
    let branch_count: usize = branch_points.iter().map(|b| b.points).sum();
    let node_count: usize = node_params.iter().map(|n| n.factor.degree()).sum();
    let square_part = BinaryForm::product(
        &factors.iter().filter(|ff| ff.multiplicity >= 2).map(|ff| ff.factor.pow(ff.multiplicity / 2)).collect::<Vec<_>>(),
    );
    let reduced = f
        .divide(&square_part.mul(&square_part))
        .expect("square part divides the form");
    let split = branch_count == 0;
    if split {
        debug_assert!(reduced.degree() == 0);
    }
    let genus = if split { 0 } else { (branch_count - 2) / 2 };
    Ok(CoverAnalysis {
        profile,
        split,
        branch_points,
        branch_count,
        genus_normalization: genus,
        components: if split { 2 } else { 1 },
        not_rational_curve: genus > 0,
        node_params,
        node_count,
        square_part,
        reduced,
    })
}

/// True when `F` is a unit times a square, checked by re-expansion.
pub fn is_perfect_square(f: &BinaryForm) -> Result<bool> {
    let a = analyze_cover(f)?;
    Ok(a.split && a.square_part.mul(&a.square_part).proportional(f))
}

/// The two sheets over a node `t₀` of `y² = F_red`: `y = ±√F_red(t₀)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeSheets {
    pub param: ParamPoint,
    #[serde(with = "crate::scalar::rational_str")]
    pub value: Rational,
    /// Square-free `m` with `F_red(t₀) ∈ m·Q²`; `1` for rational sheets.
    pub radicand: String,
    pub plus: QuadScalar,
    pub minus: QuadScalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizationModel {
    pub reduced: BinaryForm,
    pub square_part: BinaryForm,
    pub genus: usize,
    pub nodes: Vec<NodeSheets>,
    pub branch: Vec<BranchDescriptor>,
}

impl NormalizationModel {
    pub fn node_at(&self, t: &ParamPoint) -> Option<&NodeSheets> {
        self.nodes.iter().find(|n| &n.param == t)
    }
}

/// Value of a form at a rational parameter, using `(τ, 1)` or `(1, 0)`.
pub fn eval_form(f: &BinaryForm, p: &ParamPoint) -> Rational {
    f.eval_at(p).to_rational().expect("rational parameter")
}

/// Model `y² = F_red` with labelled sheets over each node.
pub fn normalization_model(f: &BinaryForm) -> Result<NormalizationModel> {
    let a = analyze_cover(f)?;
    if a.split {
        return Err(Error::SplitCover);
    }
    let mut nodes = Vec::new();
    for n in &a.node_params {
        let Some(root) = &n.root else {
            return Err(Error::NestedExtension {
                detail: format!("node factor {} has no rational roots; its sheets need a second square root", n.factor),
            });
        };
        let value = eval_form(&a.reduced, root);
        debug_assert!(!value.is_zero());
        let root_y = crate::scalar::sqrt_rational(&value);
        let m = match root_y.radicand() {
            Some(m) => m.to_string(),
            None => "1".into(),
        };
        nodes.push(NodeSheets { param: root.clone(), value, radicand: m, minus: -root_y.clone(), plus: root_y });
    }
    Ok(NormalizationModel {
        reduced: a.reduced,
        square_part: a.square_part,
        genus: a.genus_normalization,
        nodes,
        branch: a.branch_points,
    })
}

/// Square-free kernel of a nonzero rational (the `m` with `r ∈ m·Q²`).
pub fn square_class(r: &Rational) -> num_bigint::BigInt {
    let n = r.numer() * r.denom();
    square_free_split(&n).1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{cyclic_selection, preset_config};
    use crate::locus::humbert5_residual;
    use crate::projective::parametrize_conic;
    use crate::scalar::q;

    fn lin(r: i64) -> BinaryForm {
        BinaryForm::from_ints(&[-r, 1])
    }

    #[test]
    fn five_nodes_two_branch_points() {
        let mut f = BinaryForm::from_ints(&[1, 0, 1]);
        for r in 1..=5 {
            f = f.mul(&lin(r).pow(2));
        }
        let a = analyze_cover(&f).unwrap();
        assert!(!a.split);
        assert_eq!(a.branch_count, 2);
        assert_eq!(a.genus_normalization, 0);
        assert_eq!(a.node_count, 5);
        assert_eq!(a.square_part.mul(&a.square_part).mul(&a.reduced), f);
    }

    #[test]
    fn all_even_splits() {
        let f = BinaryForm::product(&[
            lin(1).pow(2),
            lin(2).pow(2),
            BinaryForm::from_ints(&[1, 1, 1]).pow(2),
            BinaryForm::t().pow(2),
            BinaryForm::u().pow(2),
            lin(3).pow(2),
        ]);
        assert_eq!(f.degree(), 14);
        let a = analyze_cover(&f).unwrap();
        assert!(a.split);
        assert!(a.branch_points.is_empty());
        assert_eq!(a.components, 2);
        assert!(is_perfect_square(&f).unwrap());
        assert_eq!(normalization_model(&f).unwrap_err(), Error::SplitCover);
    }

    #[test]
    fn four_simple_roots_give_genus_one() {
        let f = BinaryForm::product(&[lin(1), lin(2), lin(3), lin(4), lin(5).pow(2)]);
        let a = analyze_cover(&f).unwrap();
        assert_eq!(a.genus_normalization, 1);
        assert!(a.not_rational_curve);
    }

    #[test]
    fn odd_degree_and_zero_rejected() {
        assert_eq!(analyze_cover(&lin(1)).unwrap_err(), Error::OddDegree { degree: 1 });
        assert_eq!(analyze_cover(&BinaryForm::zero(2)).unwrap_err(), Error::ZeroForm);
    }

    #[test]
    fn preset_pullback_structure() {
        let cfg = preset_config();
        let r = humbert5_residual(&cfg, &cyclic_selection(), 6).unwrap();
        let q12 = cfg.node(cyclic_selection()[0]).clone();
        let phi = parametrize_conic(&r.conic, &q12).unwrap().map;
        let f = pullback_sextic(&cfg, &phi).unwrap();
        assert_eq!(f.degree(), 12);
        let expect = BinaryForm::product(&[
            BinaryForm::t().pow(2),
            BinaryForm::from_ints(&[1, 1]).pow(2),
            BinaryForm::from_ints(&[3, 1]).pow(2),
            BinaryForm::from_ints(&[4, 1]).pow(2),
            BinaryForm::u().pow(2),
            BinaryForm::from_ints(&[-15, 3, 2]),
        ])
        .scale(&q(-16384));
        assert_eq!(f, expect);
        let m = normalization_model(&f).unwrap();
        assert_eq!(m.nodes.len(), 5);
        assert_eq!(m.branch.len(), 1);
        assert_eq!(m.branch[0].points, 2);
        for n in &m.nodes {
            assert!(!n.value.is_zero());
        }
    }

    #[test]
    fn curve_inside_sextic() {
        let cfg = preset_config();
        let l1 = cfg.line(1).clone();
        let (p, qq) = l1.spanning_points();
        let phi = RationalMap::new(std::array::from_fn(|k| BinaryForm::new(vec![p[k].clone(), qq[k].clone()]))).unwrap();
        assert_eq!(pullback_sextic(&cfg, &phi).unwrap_err(), Error::CurveInsideSextic { line: 1 });
    }
}
