//! Hyperelliptic curves `y² = h(x)`, divisors of functions of `x`, and the
//! Collino cycle built from three Weierstrass points.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{assemble_cycle, ComponentKind, CurveComponent, CycleComponent, FormalDivisor, FormalPoint, FunctionData, FunctionExpr, MotivicCycle};
use crate::binary_form::ParamPoint;
use crate::error::{Error, Result};
use crate::poly::UniPoly;
use crate::scalar::{fmt_rational, sqrt_rational, QuadScalar, Rational};

/// `y² = h(x)` with `h` square-free of degree at least 3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperellipticModel {
    pub h: UniPoly,
}

impl HyperellipticModel {
    pub fn new(h: UniPoly) -> Result<Self> {
        let d = h.degree().ok_or(Error::ZeroForm)?;
        if d < 3 {
            return Err(Error::InvalidInput(format!("hyperelliptic model needs degree at least 3, got {d}")));
        }
        if !h.gcd(&h.derivative()).is_constant() {
            return Err(Error::InvalidInput(format!("h = {h} is not square-free")));
        }
        Ok(HyperellipticModel { h })
    }

    /// `y² = ∏ (x − r)` over the given rational roots.
    pub fn from_roots(roots: &[Rational]) -> Result<Self> {
        let mut h = UniPoly::one();
        for r in roots {
            h = &h * &UniPoly::linear_root(r);
        }
        Self::new(h)
    }

    pub fn degree(&self) -> usize {
        self.h.degree().unwrap()
    }

    pub fn genus(&self) -> usize {
        (self.degree() - 1) / 2
    }

    /// Odd degree: one point at infinity, a Weierstrass point.
    pub fn infinity_is_weierstrass(&self) -> bool {
        self.degree() % 2 == 1
    }

    pub fn is_weierstrass(&self, x: &ParamPoint) -> bool {
        match x {
            ParamPoint::Infinity => self.infinity_is_weierstrass(),
            ParamPoint::Finite(a) => self.h.eval_quad(a).is_zero(),
        }
    }

    /// Rational Weierstrass points, finite ones by increasing `x`.
    pub fn rational_weierstrass_points(&self) -> Vec<ParamPoint> {
        let mut v: Vec<ParamPoint> = self.h.rational_roots().into_iter().map(ParamPoint::rational).collect();
        if self.infinity_is_weierstrass() {
            v.push(ParamPoint::Infinity);
        }
        v
    }

    pub fn weierstrass_count(&self) -> usize {
        self.degree() + usize::from(self.infinity_is_weierstrass())
    }

    pub fn weierstrass_label(x: &ParamPoint) -> String {
        match x {
            ParamPoint::Infinity => "inf".into(),
            ParamPoint::Finite(a) => format!("({a},0)"),
        }
    }
}

impl fmt::Display for HyperellipticModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = {}", self.h)
    }
}

/// `k · ∏ (x − a)^e` with rational `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XExpression {
    pub k: QuadScalar,
    #[serde(serialize_with = "ser_factors")]
    pub factors: Vec<(Rational, i64)>,
}

fn ser_factors<S: serde::Serializer>(v: &[(Rational, i64)], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(|(a, e)| (fmt_rational(a), *e)).collect::<Vec<_>>().serialize(s)
}

impl XExpression {
    /// Merges repeated roots and drops zero exponents.
    pub fn new(k: QuadScalar, factors: &[(Rational, i64)]) -> Self {
        let mut merged: Vec<(Rational, i64)> = Vec::new();
        for (a, e) in factors {
            match merged.iter_mut().find(|(b, _)| b == a) {
                Some(slot) => slot.1 += e,
                None => merged.push((a.clone(), *e)),
            }
        }
        merged.retain(|(_, e)| *e != 0);
        merged.sort_by(|x, y| x.0.cmp(&y.0));
        XExpression { k, factors: merged }
    }

    pub fn net_degree(&self) -> i64 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn eval(&self, at: &ParamPoint) -> Option<QuadScalar> {
        match at {
            ParamPoint::Infinity => (self.net_degree() == 0).then(|| self.k.clone()),
            ParamPoint::Finite(x) => {
                let mut v = self.k.clone();
                for (a, e) in &self.factors {
                    let d = x - &QuadScalar::rational(a.clone());
                    if d.is_zero() {
                        return None;
                    }
                    let p = d.pow(e.unsigned_abs() as u32);
                    v = if *e > 0 { &v * &p } else { &v / &p };
                }
                Some(v)
            }
        }
    }
}

impl fmt::Display for XExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.k)?;
        for (a, e) in &self.factors {
            let base = if a.is_zero() {
                "x".to_string()
            } else if a.is_negative() {
                format!("(x + {})", fmt_rational(&-a))
            } else {
                format!("(x - {})", fmt_rational(a))
            };
            if *e == 1 {
                write!(f, "*{base}")?;
            } else {
                write!(f, "*{base}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Divisor of `expr` on `y² = h`.
///
/// `(x − a)` contributes `2·(a,0)` when `h(a) = 0` and `(a,y) + (a,−y)`
/// otherwise. Each unit of net degree puts a pole at infinity: `2·inf` on an
/// odd-degree model, `inf+ + inf-` on an even one. An expression supported
/// on finite Weierstrass points with nonzero net degree on an even model
/// would drag the non-Weierstrass points `inf±` into its divisor; that is
/// reported as [`Error::UnbalancedAtInfinity`].
pub fn hyperelliptic_divisor(expr: &XExpression, model: &HyperellipticModel) -> Result<FormalDivisor> {
    let mut d = FormalDivisor::new();
    let mut all_weierstrass = true;
    for (a, e) in &expr.factors {
        let ha = model.h.eval(a);
        if ha.is_zero() {
            d.add_point(&HyperellipticModel::weierstrass_label(&ParamPoint::rational(a.clone())), 2 * e);
        } else {
            all_weierstrass = false;
            let y = sqrt_rational(&ha);
            d.add_point(&format!("({},{})", fmt_rational(a), y), *e);
            d.add_point(&format!("({},{})", fmt_rational(a), -y), *e);
        }
    }
    let n = expr.net_degree();
    if n != 0 {
        if model.infinity_is_weierstrass() {
            d.add_point("inf", -2 * n);
        } else {
            if all_weierstrass && !expr.factors.is_empty() {
                return Err(Error::UnbalancedAtInfinity { order: n });
            }
            d.add_point("inf+", -n);
            d.add_point("inf-", -n);
        }
    }
    Ok(d)
}

/// Points of the Jacobian named formally: the origin or a difference of
/// two Weierstrass points (a 2-torsion point).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum JacobianSymbol {
    O,
    Diff(String, String),
}

impl JacobianSymbol {
    /// `ι_Q(X) = X − Q`.
    pub fn embed(x: &str, base: &str) -> Self {
        if x == base {
            JacobianSymbol::O
        } else {
            JacobianSymbol::Diff(x.into(), base.into())
        }
    }

    /// Orders a 2-torsion difference using `T = −T`, logging the rewrite.
    pub fn canonical(self, log: &mut Vec<String>) -> Self {
        match self {
            JacobianSymbol::Diff(a, b) if a > b => {
                log.push(format!("T = -T: {a} - {b} -> {b} - {a}"));
                JacobianSymbol::Diff(b, a)
            }
            s => s,
        }
    }

    /// The group law restricted to the two identities the cocycle check
    /// needs: `x + O = x` and `T + T = O` for 2-torsion `T`.
    pub fn add(&self, other: &Self, log: &mut Vec<String>) -> Option<Self> {
        match (self, other) {
            (JacobianSymbol::O, x) | (x, JacobianSymbol::O) => {
                log.push("x + O = x".into());
                Some(x.clone())
            }
            (a, b) => {
                let a = a.clone().canonical(log);
                let b = b.clone().canonical(log);
                (a == b).then(|| {
                    log.push("T + T = T + (-T) = O".into());
                    JacobianSymbol::O
                })
            }
        }
    }
}

impl fmt::Display for JacobianSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JacobianSymbol::O => write!(f, "O"),
            JacobianSymbol::Diff(a, b) => write!(f, "{a} - {b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollinoCycle {
    pub model: HyperellipticModel,
    pub function: XExpression,
    /// Constant `c` in `f = c(x − x1)/(x − x2)`.
    pub constant: QuadScalar,
    /// `div f` on the curve, expected `2P1 − 2P2`.
    pub curve_divisor: FormalDivisor,
    /// `T` names the 2-torsion point `P1 − P2 = P2 − P1`.
    pub torsion_point: String,
    /// `div f_{P1}` and `div f_{P2}` in Jacobian symbols.
    pub component_divisors: Vec<String>,
    pub cycle: MotivicCycle,
}

fn finite_rational(x: &ParamPoint) -> Result<Option<Rational>> {
    match x {
        ParamPoint::Infinity => Ok(None),
        ParamPoint::Finite(a) => a
            .to_rational()
            .map(Some)
            .ok_or_else(|| Error::InvalidInput(format!("zero and pole must be rational, got {a}"))),
    }
}

/// `Z = (C_{P1}, f) + (C_{P2}, f)` with `div f = 2P1 − 2P2` and
/// `f(R) = 1`, checked through the Jacobian symbol rewrites.
pub fn collino_cycle(model: &HyperellipticModel, p1: &ParamPoint, p2: &ParamPoint, r: &ParamPoint) -> Result<CollinoCycle> {
    for p in [p1, p2, r] {
        if !model.is_weierstrass(p) {
            return Err(Error::NonWeierstrassInput { point: p.to_string() });
        }
    }
    if p1 == p2 {
        return Err(Error::CoincidentPoints);
    }
    if r == p1 || r == p2 {
        return Err(Error::RNotDistinct);
    }
    let mut factors = Vec::new();
    if let Some(a) = finite_rational(p1)? {
        factors.push((a, 1));
    }
    if let Some(b) = finite_rational(p2)? {
        factors.push((b, -1));
    }
    let unit = XExpression::new(QuadScalar::one(), &factors);
    let at_r = unit.eval(r).ok_or_else(|| Error::InvalidInput("function undefined at R".into()))?;
    let constant = at_r.inv();
    let function = XExpression::new(constant.clone(), &factors);
    let curve_divisor = hyperelliptic_divisor(&function, model)?;
    let l1 = HyperellipticModel::weierstrass_label(p1);
    let l2 = HyperellipticModel::weierstrass_label(p2);
    let mut expected = FormalDivisor::point(&l1, 2);
    expected.add_point(&l2, -2);
    if curve_divisor != expected {
        return Err(Error::InvalidInput(format!("div f = {curve_divisor}, expected {expected}")));
    }

    let mut log = Vec::new();
    let t_symbol = JacobianSymbol::embed(&l1, &l2).canonical(&mut Vec::new());
    let image_name = |s: &JacobianSymbol| if *s == JacobianSymbol::O { "O".to_string() } else if *s == t_symbol { "T".to_string() } else { s.to_string() };
    let mut components = Vec::new();
    let mut component_divisors = Vec::new();
    for (name, base) in [("C_P1", &l1), ("C_P2", &l2)] {
        let mut points = Vec::new();
        let mut image_div = FormalDivisor::new();
        for (label, m) in curve_divisor.terms() {
            let sym = JacobianSymbol::embed(label, base).canonical(&mut log);
            let img = image_name(&sym);
            image_div.add_point(&img, *m);
            points.push(FormalPoint { id: label.clone(), curve: name.into(), param: None, coords: None, image: Some(img) });
        }
        component_divisors.push(image_div.to_string());
        let curve = CurveComponent {
            id: name.into(),
            kind: ComponentKind::HyperellipticEmbedded,
            model: format!("image of {model} under x -> x - {base}"),
            points,
        };
        let function = FunctionData {
            host: name.into(),
            expr: FunctionExpr::X(function.clone()),
            divisor: curve_divisor.clone(),
            normalization: Some((HyperellipticModel::weierstrass_label(r), QuadScalar::one())),
        };
        components.push(CycleComponent { curve, function });
    }
    let mut cycle = assemble_cycle(components)?;
    cycle.rewrites = log;
    Ok(CollinoCycle {
        model: model.clone(),
        function,
        constant,
        curve_divisor,
        torsion_point: format!("T = {l1} - {l2} = {l2} - {l1}"),
        component_divisors,
        cycle,
    })
}
