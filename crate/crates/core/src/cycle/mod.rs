//! Formal motivic cycles: curve components carrying rational functions,
//! divisor bookkeeping through blow-down links, and the cocycle check.
//!
//! Verification happens at the level of divisors and explicit functions.
//! Equality of classes in motivic cohomology (modulo tame symbols) is not
//! checked.

pub mod hyperelliptic;
pub mod new_cycle;
pub mod pushforward;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;
use serde::Serialize;

use crate::binary_form::ParamPoint;
use crate::error::{Error, Result};
use crate::scalar::QuadScalar;

pub use hyperelliptic::{collino_cycle, hyperelliptic_divisor, CollinoCycle, HyperellipticModel, JacobianSymbol, XExpression};
pub use new_cycle::{build_new_cycle, selection_curve, NewCycle};
pub use pushforward::{pushforward_check, PushforwardReport};

/// A point on a component. `image` names the point of the ambient surface
/// (or Jacobian) it maps to; points with equal images are identified when
/// divisors from different components are summed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormalPoint {
    pub id: String,
    pub curve: String,
    pub param: Option<ParamPoint>,
    pub coords: Option<Vec<QuadScalar>>,
    pub image: Option<String>,
}

impl FormalPoint {
    pub fn on(curve: &str, id: &str, param: ParamPoint) -> Self {
        FormalPoint { id: id.into(), curve: curve.into(), param: Some(param), coords: None, image: None }
    }

    pub fn with_coords(mut self, coords: Vec<QuadScalar>) -> Self {
        self.coords = Some(coords);
        self
    }

    pub fn linked(mut self, image: &str) -> Self {
        self.image = Some(image.into());
        self
    }
}

/// A finite formal sum of named points with integer multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FormalDivisor(BTreeMap<String, i64>);

impl FormalDivisor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn point(id: &str, m: i64) -> Self {
        let mut d = Self::new();
        d.add_point(id, m);
        d
    }

    pub fn add_point(&mut self, id: &str, m: i64) {
        let e = self.0.entry(id.to_string()).or_insert(0);
        *e += m;
        if *e == 0 {
            self.0.remove(id);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.0 {
            out.add_point(k, *v);
        }
        out
    }

    pub fn neg(&self) -> Self {
        FormalDivisor(self.0.iter().map(|(k, v)| (k.clone(), -v)).collect())
    }

    pub fn scale(&self, c: i64) -> Self {
        if c == 0 {
            return Self::new();
        }
        FormalDivisor(self.0.iter().map(|(k, v)| (k.clone(), v * c)).collect())
    }

    pub fn degree(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn multiplicity(&self, id: &str) -> i64 {
        self.0.get(id).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&String, &i64)> {
        self.0.iter()
    }

    pub fn support(&self) -> Vec<String> {
        self.0.keys().cloned().collect()
    }
}

impl fmt::Display for FormalDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        // positive terms first, then negative, each in key order
        let mut terms: Vec<(&String, &i64)> = self.0.iter().collect();
        terms.sort_by_key(|(_, m)| if **m > 0 { 0 } else { 1 });
        for (k, (id, m)) in terms.into_iter().enumerate() {
            let abs = m.abs();
            let sign = if *m < 0 { "-" } else { "+" };
            if k == 0 {
                if *m < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if abs != 1 {
                write!(f, "{abs}")?;
            }
            write!(f, "({id})")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentKind {
    RationalParametrized,
    ExceptionalFiber,
    HyperellipticEmbedded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveComponent {
    pub id: String,
    pub kind: ComponentKind,
    /// Human-readable model equation or parametrization.
    pub model: String,
    pub points: Vec<FormalPoint>,
}

impl CurveComponent {
    pub fn point(&self, id: &str) -> Option<&FormalPoint> {
        self.points.iter().find(|p| p.id == id)
    }

    pub fn point_at(&self, param: &ParamPoint) -> Option<&FormalPoint> {
        self.points.iter().find(|p| p.param.as_ref() == Some(param))
    }
}

/// A rational function on a component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionExpr {
    /// `k·(τ − zero)/(τ − pole)`; a factor at `∞` is dropped.
    Mobius { k: QuadScalar, zero: ParamPoint, pole: ParamPoint },
    Constant { value: QuadScalar },
    /// `k · ∏ (x − a)^e` on a hyperelliptic curve.
    X(XExpression),
}

fn linear_factor(a: &ParamPoint, x: &QuadScalar) -> QuadScalar {
    match a {
        ParamPoint::Infinity => QuadScalar::one(),
        ParamPoint::Finite(a) => x - a,
    }
}

impl FunctionExpr {
    /// Value at a parameter that is neither a zero nor a pole.
    pub fn eval(&self, at: &ParamPoint) -> Option<QuadScalar> {
        match self {
            FunctionExpr::Constant { value } => Some(value.clone()),
            FunctionExpr::Mobius { k, zero, pole } => match at {
                ParamPoint::Infinity => match (zero, pole) {
                    (ParamPoint::Finite(_), ParamPoint::Finite(_)) => Some(k.clone()),
                    _ => None,
                },
                ParamPoint::Finite(x) => {
                    let num = linear_factor(zero, x);
                    let den = linear_factor(pole, x);
                    if num.is_zero() || den.is_zero() {
                        return None;
                    }
                    Some(&(k * &num) / &den)
                }
            },
            FunctionExpr::X(e) => e.eval(at),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            FunctionExpr::Constant { .. } => true,
            FunctionExpr::Mobius { .. } => false,
            FunctionExpr::X(e) => e.factors.is_empty(),
        }
    }

    pub fn leading_constant(&self) -> QuadScalar {
        match self {
            FunctionExpr::Constant { value } => value.clone(),
            FunctionExpr::Mobius { k, .. } => k.clone(),
            FunctionExpr::X(e) => e.k.clone(),
        }
    }
}

impl fmt::Display for FunctionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lin = |v: &str, a: &ParamPoint| match a {
            ParamPoint::Infinity => "1".to_string(),
            ParamPoint::Finite(a) if a.is_zero() => v.to_string(),
            ParamPoint::Finite(a) => match a.to_rational() {
                Some(r) if r.is_negative() => format!("({v} + {})", crate::scalar::fmt_rational(&-r)),
                _ => format!("({v} - {a})"),
            },
        };
        match self {
            FunctionExpr::Constant { value } => write!(f, "{value}"),
            FunctionExpr::Mobius { k, zero, pole } => {
                write!(f, "({k})*{}/{}", lin("τ", zero), lin("τ", pole))
            }
            FunctionExpr::X(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctionData {
    pub host: String,
    pub expr: FunctionExpr,
    /// Divisor in terms of point ids on the host.
    pub divisor: FormalDivisor,
    /// `(point id, value)` fixing the multiplicative constant.
    pub normalization: Option<(String, QuadScalar)>,
}

impl FunctionData {
    pub fn constant(host: &CurveComponent, value: QuadScalar) -> Self {
        FunctionData {
            host: host.id.clone(),
            expr: FunctionExpr::Constant { value },
            divisor: FormalDivisor::new(),
            normalization: None,
        }
    }

    /// Divisor recomputed from the expression and the host's points.
    pub fn recompute_divisor(&self, host: &CurveComponent) -> Result<FormalDivisor> {
        match &self.expr {
            FunctionExpr::Constant { .. } => Ok(FormalDivisor::new()),
            FunctionExpr::Mobius { zero, pole, .. } => {
                let find = |p: &ParamPoint| {
                    host.point_at(p)
                        .map(|pt| pt.id.clone())
                        .ok_or_else(|| Error::InvalidInput(format!("no named point at parameter {p} on {}", host.id)))
                };
                let mut d = FormalDivisor::point(&find(zero)?, 1);
                d.add_point(&find(pole)?, -1);
                Ok(d)
            }
            FunctionExpr::X(e) => Err(Error::InvalidInput(format!(
                "x-expression {e} needs a hyperelliptic model; use hyperelliptic_divisor"
            ))),
        }
    }

    /// Declared divisor matches the recomputation and the normalization
    /// holds exactly.
    pub fn self_consistent(&self, host: &CurveComponent) -> Result<bool> {
        let div_ok = match &self.expr {
            FunctionExpr::X(_) => true,
            _ => self.recompute_divisor(host)? == self.divisor,
        };
        let norm_ok = match &self.normalization {
            None => true,
            Some((id, v)) => {
                let p = host
                    .point(id)
                    .and_then(|p| p.param.clone())
                    .ok_or_else(|| Error::InvalidInput(format!("normalization point {id} missing on {}", host.id)))?;
                self.expr.eval(&p).as_ref() == Some(v)
            }
        };
        Ok(div_ok && norm_ok)
    }
}

/// `f(τ) = c(τ − τ₁)/(τ − τ₂)` with `f(τ_R) = value`, so `div f = P1 − P2`.
pub fn function_with_divisor(
    host: &CurveComponent,
    p1: &FormalPoint,
    p2: &FormalPoint,
    r: &FormalPoint,
    value: QuadScalar,
) -> Result<FunctionData> {
    let param = |p: &FormalPoint| {
        p.param.clone().ok_or_else(|| Error::InvalidInput(format!("point {} has no parameter", p.id)))
    };
    let (t1, t2, tr) = (param(p1)?, param(p2)?, param(r)?);
    if t1 == t2 {
        return Err(Error::CoincidentPoints);
    }
    if tr == t1 || tr == t2 {
        return Err(Error::RNotDistinct);
    }
    if value.is_zero() {
        return Err(Error::InvalidInput("normalization value must be nonzero".into()));
    }
    let unit = FunctionExpr::Mobius { k: QuadScalar::one(), zero: t1.clone(), pole: t2.clone() };
    let at_r = unit.eval(&tr).expect("R is neither zero nor pole");
    let k = &value / &at_r;
    let mut divisor = FormalDivisor::point(&p1.id, 1);
    divisor.add_point(&p2.id, -1);
    Ok(FunctionData {
        host: host.id.clone(),
        expr: FunctionExpr::Mobius { k, zero: t1, pole: t2 },
        divisor,
        normalization: Some((r.id.clone(), value)),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleComponent {
    pub curve: CurveComponent,
    pub function: FunctionData,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MotivicCycle {
    pub components: Vec<CycleComponent>,
    /// Sum of all function divisors after identifying linked points.
    pub total_divisor: FormalDivisor,
    pub cocycle: bool,
    pub decomposable: bool,
    pub rewrites: Vec<String>,
}

impl MotivicCycle {
    /// The same data with component `index` dropped and the verdict
    /// recomputed.
    pub fn without(&self, index: usize) -> Result<MotivicCycle> {
        let rest: Vec<CycleComponent> =
            self.components.iter().enumerate().filter(|(k, _)| *k != index).map(|(_, c)| c.clone()).collect();
        let mut c = assemble_cycle(rest)?;
        c.rewrites = self.rewrites.clone();
        Ok(c)
    }
}

/// Sums the divisors of all functions, identifying points through their
/// blow-down images, and records the cocycle verdict.
pub fn assemble_cycle(components: Vec<CycleComponent>) -> Result<MotivicCycle> {
    let mut total = FormalDivisor::new();
    for c in &components {
        for (id, m) in c.function.divisor.terms() {
            let p = c
                .curve
                .point(id)
                .ok_or_else(|| Error::UnresolvedLink { point: format!("{}:{id}", c.curve.id) })?;
            let key = match (&p.image, c.curve.kind) {
                (Some(img), _) => img.clone(),
                (None, ComponentKind::ExceptionalFiber) => {
                    return Err(Error::UnresolvedLink { point: format!("{}:{id}", c.curve.id) })
                }
                (None, _) => format!("{}:{id}", c.curve.id),
            };
            total.add_point(&key, *m);
        }
    }
    let decomposable = components.iter().any(|c| c.function.expr.is_constant());
    Ok(MotivicCycle { cocycle: total.is_zero(), total_divisor: total, decomposable, components, rewrites: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, ratio};

    fn line_component(id: &str, params: &[(&str, ParamPoint)]) -> CurveComponent {
        CurveComponent {
            id: id.into(),
            kind: ComponentKind::RationalParametrized,
            model: "P^1".into(),
            points: params.iter().map(|(n, p)| FormalPoint::on(id, n, p.clone())).collect(),
        }
    }

    #[test]
    fn mobius_examples() {
        let c = line_component(
            "C",
            &[("A", ParamPoint::rational(q(0))), ("B", ParamPoint::Infinity), ("R", ParamPoint::rational(q(1)))],
        );
        let f = function_with_divisor(&c, c.point("A").unwrap(), c.point("B").unwrap(), c.point("R").unwrap(), QuadScalar::one())
            .unwrap();
        assert_eq!(f.expr.eval(&ParamPoint::rational(q(7))), Some(QuadScalar::from_int(7)));
        assert!(f.self_consistent(&c).unwrap());

        let c = line_component(
            "C",
            &[("A", ParamPoint::rational(q(2))), ("B", ParamPoint::rational(q(3))), ("R", ParamPoint::rational(q(4)))],
        );
        let f = function_with_divisor(&c, c.point("A").unwrap(), c.point("B").unwrap(), c.point("R").unwrap(), QuadScalar::one())
            .unwrap();
        assert_eq!(f.expr.leading_constant(), QuadScalar::rational(ratio(1, 2)));
        assert_eq!(f.expr.eval(&ParamPoint::rational(q(4))), Some(QuadScalar::one()));
        assert_eq!(f.divisor.to_string(), "(A) - (B)");

        let a = c.point("A").unwrap();
        assert_eq!(
            function_with_divisor(&c, a, a, c.point("R").unwrap(), QuadScalar::one()),
            Err(Error::CoincidentPoints)
        );
        assert_eq!(
            function_with_divisor(&c, a, c.point("B").unwrap(), a, QuadScalar::one()),
            Err(Error::RNotDistinct)
        );
    }

    fn blown_up_pair() -> (CycleComponent, CycleComponent) {
        let mut c = line_component(
            "C",
            &[("P1", ParamPoint::rational(q(0))), ("P2", ParamPoint::rational(q(1))), ("R1", ParamPoint::rational(q(2)))],
        );
        c.points[0].image = Some("P+".into());
        c.points[1].image = Some("P-".into());
        let mut e = line_component(
            "E",
            &[("A", ParamPoint::rational(q(0))), ("B", ParamPoint::rational(q(1))), ("O", ParamPoint::Infinity)],
        );
        e.kind = ComponentKind::ExceptionalFiber;
        e.points[0].image = Some("P+".into());
        e.points[1].image = Some("P-".into());
        let f = function_with_divisor(&c, &c.points[0], &c.points[1], &c.points[2], QuadScalar::one()).unwrap();
        let g = function_with_divisor(&e, &e.points[1], &e.points[0], &e.points[2], QuadScalar::one()).unwrap();
        (CycleComponent { curve: c, function: f }, CycleComponent { curve: e, function: g })
    }

    #[test]
    fn nodal_curve_cycle_is_a_cocycle() {
        let (cf, eg) = blown_up_pair();
        let z = assemble_cycle(vec![cf.clone(), eg]).unwrap();
        assert!(z.cocycle);
        assert!(!z.decomposable);
        let alone = z.without(1).unwrap();
        assert!(!alone.cocycle);
        assert_eq!(alone.total_divisor.to_string(), "(P+) - (P-)");
    }

    #[test]
    fn constant_function_is_decomposable() {
        let (cf, _) = blown_up_pair();
        let k = FunctionData::constant(&cf.curve, QuadScalar::from_int(5));
        let z = assemble_cycle(vec![CycleComponent { curve: cf.curve, function: k }]).unwrap();
        assert!(z.cocycle);
        assert!(z.decomposable);
    }

    #[test]
    fn unlinked_exceptional_point_is_an_error() {
        let (cf, mut eg) = blown_up_pair();
        eg.curve.points[0].image = None;
        assert!(matches!(assemble_cycle(vec![cf, eg]), Err(Error::UnresolvedLink { .. })));
    }
}
