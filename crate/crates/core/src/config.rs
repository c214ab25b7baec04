//! Six lines tangent to a smooth conic, their fifteen nodes, and the Humbert
//! invariant of a divisor class.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::binary_form::ParamPoint;
use crate::error::{Error, Result};
use crate::projective::{
    are_concurrent, conic_through_five, meet_lines, parametrize_conic, tangency_residual, tangent_line_at, Conic,
    ConicParametrization, ProjLine, ProjPoint,
};
use crate::scalar::{fmt_rational, parse_rational, Rational};

/// Unordered pair `{i, j}` of line indices in `1..=6`, naming the node
/// `q_ij = l_i ∩ l_j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct TwoTorsionLabel(u8, u8);

impl TwoTorsionLabel {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i == j || !(1..=6).contains(&i) || !(1..=6).contains(&j) {
            return Err(Error::InvalidInput(format!("bad node label {{{i},{j}}}")));
        }
        Ok(TwoTorsionLabel(i.min(j) as u8, i.max(j) as u8))
    }

    pub fn i(&self) -> usize {
        self.0 as usize
    }

    pub fn j(&self) -> usize {
        self.1 as usize
    }

    pub fn contains(&self, line: usize) -> bool {
        self.i() == line || self.j() == line
    }

    pub fn all() -> Vec<TwoTorsionLabel> {
        let mut v = Vec::with_capacity(15);
        for i in 1..=6 {
            for j in i + 1..=6 {
                v.push(TwoTorsionLabel(i as u8, j as u8));
            }
        }
        v
    }
}

impl fmt::Display for TwoTorsionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.0, self.1)
    }
}

impl FromStr for TwoTorsionLabel {
    type Err = Error;

    /// Accepts `12`, `1,2`, `q12` or `{1,2}`.
    fn from_str(s: &str) -> Result<Self> {
        let digits: Vec<usize> = s
            .chars()
            .filter(|c| !matches!(c, 'q' | '{' | '}' | ',' | ' ' | '_'))
            .map(|c| c.to_digit(10).map(|d| d as usize))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Parse(format!("bad node label '{s}'")))?;
        if digits.len() != 2 {
            return Err(Error::Parse(format!("bad node label '{s}'")));
        }
        Self::new(digits[0], digits[1]).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl Serialize for TwoTorsionLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TwoTorsionLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Five node labels through which a conic is fitted.
pub type Selection = [TwoTorsionLabel; 5];

/// The cyclic selection `q12, q23, q34, q45, q51`.
pub fn cyclic_selection() -> Selection {
    [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)].map(|(i, j)| TwoTorsionLabel::new(i, j).unwrap())
}

/// Parses `cyclic` or a comma/space separated list of five labels such as
/// `12,23,34,45,15`.
pub fn parse_selection(s: &str) -> Result<Selection> {
    if s.trim().eq_ignore_ascii_case("cyclic") {
        return Ok(cyclic_selection());
    }
    let labels: Vec<TwoTorsionLabel> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    labels
        .try_into()
        .map_err(|v: Vec<_>| Error::Parse(format!("a selection has five labels, got {}", v.len())))
}

pub fn parse_param(s: &str) -> Result<ParamPoint> {
    let t = s.trim();
    if matches!(t, "inf" | "infinity" | "oo" | "∞") {
        Ok(ParamPoint::Infinity)
    } else {
        Ok(ParamPoint::rational(parse_rational(t)?))
    }
}

pub fn fmt_param(p: &ParamPoint) -> String {
    match p {
        ParamPoint::Infinity => "inf".into(),
        ParamPoint::Finite(x) => fmt_rational(&x.to_rational().expect("rational parameter")),
    }
}

/// Comma separated parameter list, e.g. `0,1,-1,2,-2,3` or `0,1/2,inf,...`.
pub fn parse_params(s: &str) -> Result<Vec<ParamPoint>> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(parse_param).collect()
}

/// The conic `y² − xz` with rational point `(1:0:0)`. Its parametrization
/// from that point is `τ ↦ (1 : τ : τ²)`, with `∞ ↦ (0:0:1)`.
pub fn standard_conic() -> (Conic, ProjPoint) {
    (Conic::from_ints([0, 1, 0, 0, -1, 0]), ProjPoint::from_ints(1, 0, 0))
}

pub fn preset_params() -> Vec<ParamPoint> {
    [0, 1, -1, 2, -2, 3].iter().map(|&n| ParamPoint::rational(crate::scalar::q(n))).collect()
}

/// A smooth conic with six tangent lines and their fifteen nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SexticConfiguration {
    base: Conic,
    generator: Option<Generator>,
    lines: [ProjLine; 6],
    nodes: BTreeMap<TwoTorsionLabel, ProjPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Generator {
    base_point: ProjPoint,
    params: [ParamPoint; 6],
}

/// Tangent lines at six parameters of the conic parametrized from
/// `base_point`.
pub fn build_config(base: &Conic, base_point: &ProjPoint, params: &[ParamPoint]) -> Result<SexticConfiguration> {
    let params: [ParamPoint; 6] = params
        .to_vec()
        .try_into()
        .map_err(|v: Vec<_>| Error::InvalidInput(format!("six tangency parameters expected, got {}", v.len())))?;
    if let Some(p) = params.iter().find(|p| !p.is_rational()) {
        return Err(Error::InvalidInput(format!("parameter {p} is not rational")));
    }
    for a in 0..6 {
        for b in a + 1..6 {
            if params[a] == params[b] {
                return Err(Error::DuplicateParameter { param: fmt_param(&params[a]) });
            }
        }
    }
    let par = parametrize_conic(base, base_point)?;
    let lines: Vec<ProjLine> = params
        .iter()
        .map(|p| tangent_line_at(base, &par.map.eval_rational(p)))
        .collect::<Result<_>>()?;
    let lines: [ProjLine; 6] = lines.try_into().unwrap();
    let nodes = checked_nodes(&lines)?;
    Ok(SexticConfiguration {
        base: base.clone(),
        generator: Some(Generator { base_point: base_point.clone(), params }),
        lines,
        nodes,
    })
}

pub fn build_standard(params: &[ParamPoint]) -> Result<SexticConfiguration> {
    let (c, p) = standard_conic();
    build_config(&c, &p, params)
}

pub fn preset_config() -> SexticConfiguration {
    build_standard(&preset_params()).expect("preset is valid")
}

/// Expert path: six raw lines, accepted when their dual points lie on a
/// smooth conic. The base conic is recovered as the dual of that conic.
pub fn config_from_lines(lines: &[ProjLine; 6]) -> Result<SexticConfiguration> {
    for a in 0..6 {
        for b in a + 1..6 {
            if lines[a] == lines[b] {
                return Err(Error::IdenticalLines);
            }
        }
    }
    let duals: [ProjPoint; 6] = lines.clone().map(|l| ProjPoint::from_triple(l.coords()).unwrap());
    let five: [ProjPoint; 5] = duals[..5].to_vec().try_into().unwrap();
    let dual_conic = conic_through_five(&five).map_err(|_| Error::NotCommonlyTangent)?;
    if !dual_conic.contains(&duals[5]) || !dual_conic.is_smooth() {
        return Err(Error::NotCommonlyTangent);
    }
    let base = dual_conic.dual()?;
    let nodes = checked_nodes(lines)?;
    Ok(SexticConfiguration { base, generator: None, lines: lines.clone(), nodes })
}

fn checked_nodes(lines: &[ProjLine; 6]) -> Result<BTreeMap<TwoTorsionLabel, ProjPoint>> {
    for a in 0..6 {
        for b in a + 1..6 {
            for c in b + 1..6 {
                if are_concurrent(&lines[a], &lines[b], &lines[c]) {
                    let point = meet_lines(&lines[a], &lines[b])?;
                    return Err(Error::ConcurrentLines { lines: [a + 1, b + 1, c + 1], point: point.to_string() });
                }
            }
        }
    }
    TwoTorsionLabel::all()
        .into_iter()
        .map(|lab| Ok((lab, meet_lines(&lines[lab.i() - 1], &lines[lab.j() - 1])?)))
        .collect()
}

impl SexticConfiguration {
    pub fn base(&self) -> &Conic {
        &self.base
    }

    pub fn lines(&self) -> &[ProjLine; 6] {
        &self.lines
    }

    /// Line `l_k` for `k` in `1..=6`.
    pub fn line(&self, k: usize) -> &ProjLine {
        &self.lines[k - 1]
    }

    pub fn params(&self) -> Option<&[ParamPoint; 6]> {
        self.generator.as_ref().map(|g| &g.params)
    }

    pub fn base_point(&self) -> Option<&ProjPoint> {
        self.generator.as_ref().map(|g| &g.base_point)
    }

    pub fn base_parametrization(&self) -> Option<ConicParametrization> {
        self.base_point().map(|p| parametrize_conic(&self.base, p).expect("validated on construction"))
    }

    pub fn nodes(&self) -> &BTreeMap<TwoTorsionLabel, ProjPoint> {
        &self.nodes
    }

    pub fn node(&self, label: TwoTorsionLabel) -> &ProjPoint {
        &self.nodes[&label]
    }

    pub fn validate(&self) -> ValidityReport {
        validate(&self.base, &self.lines)
    }

    pub fn to_json(&self) -> String {
        let doc = ConfigJson {
            base: self.base.clone(),
            base_point: self.base_point().cloned(),
            params: self.params().map(|p| p.iter().map(fmt_param).collect()),
            lines: self.lines.to_vec(),
            nodes: self.nodes.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    /// Parses a configuration and rebuilds it from its defining data
    /// (parameters when present, else the raw lines); stored lines and nodes
    /// must agree with the recomputation.
    pub fn from_json(s: &str) -> Result<Self> {
        let doc: ConfigJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let rebuilt = match (&doc.params, &doc.base_point) {
            (Some(params), Some(bp)) => {
                let params: Vec<ParamPoint> =
                    params.iter().map(|p| parse_param(p)).collect::<Result<_>>().map_err(|e| Error::Parse(e.to_string()))?;
                build_config(&doc.base, bp, &params)?
            }
            (None, _) => {
                let lines: [ProjLine; 6] = doc
                    .lines
                    .clone()
                    .try_into()
                    .map_err(|_| Error::Parse("six lines expected".into()))?;
                let c = config_from_lines(&lines)?;
                if c.base != doc.base {
                    return Err(Error::Parse(format!("stored base conic does not match the lines (expected {})", c.base)));
                }
                c
            }
            (Some(_), None) => return Err(Error::Parse("params given without base_point".into())),
        };
        if rebuilt.lines.as_slice() != doc.lines.as_slice() {
            return Err(Error::Parse("stored lines do not match the recomputed tangent lines".into()));
        }
        if rebuilt.nodes != doc.nodes {
            let bad = TwoTorsionLabel::all()
                .into_iter()
                .find(|l| doc.nodes.get(l) != rebuilt.nodes.get(l))
                .unwrap();
            return Err(Error::Parse(format!("stored node q{bad} does not match the recomputed node")));
        }
        Ok(rebuilt)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigJson {
    base: Conic,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base_point: Option<ProjPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<Vec<String>>,
    lines: Vec<ProjLine>,
    nodes: BTreeMap<TwoTorsionLabel, ProjPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Failure {
    SingularBase { rank: usize },
    TangencyFailure { line: usize, residual: String },
    IdenticalLines { lines: [usize; 2] },
    ConcurrentLines { lines: [usize; 3], point: String },
    CoincidentNodes { nodes: [String; 2], point: String },
    NodeIncidence { node: String, lines_through: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub checks: Vec<Check>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Failure> {
        self.checks.iter().flat_map(|c| c.failures.iter())
    }
}

/// Checks every configuration invariant on raw data, collecting witnesses.
pub fn validate(base: &Conic, lines: &[ProjLine; 6]) -> ValidityReport {
    let mut checks = Vec::new();
    let mut push = |name, failures: Vec<Failure>| checks.push(Check { name, passed: failures.is_empty(), failures });

    let smooth = if base.is_smooth() { vec![] } else { vec![Failure::SingularBase { rank: base.rank() }] };
    push("base conic smooth", smooth);

    let tangency = (0..6)
        .filter_map(|k| {
            let r = tangency_residual(base, &lines[k]);
            (r != Rational::from_integer(0.into())).then(|| Failure::TangencyFailure { line: k + 1, residual: fmt_rational(&r) })
        })
        .collect();
    push("lines tangent to base", tangency);

    let mut identical = Vec::new();
    for a in 0..6 {
        for b in a + 1..6 {
            if lines[a] == lines[b] {
                identical.push(Failure::IdenticalLines { lines: [a + 1, b + 1] });
            }
        }
    }
    let distinct = identical.is_empty();
    push("lines pairwise distinct", identical);

    let mut concurrent = Vec::new();
    if distinct {
        for a in 0..6 {
            for b in a + 1..6 {
                for c in b + 1..6 {
                    if are_concurrent(&lines[a], &lines[b], &lines[c]) {
                        let point = meet_lines(&lines[a], &lines[b]).unwrap();
                        concurrent.push(Failure::ConcurrentLines { lines: [a + 1, b + 1, c + 1], point: point.to_string() });
                    }
                }
            }
        }
    }
    push("no three lines concurrent", concurrent);

    let mut coincident = Vec::new();
    let mut incidence = Vec::new();
    if distinct {
        let nodes: Vec<(TwoTorsionLabel, ProjPoint)> = TwoTorsionLabel::all()
            .into_iter()
            .map(|l| (l, meet_lines(&lines[l.i() - 1], &lines[l.j() - 1]).unwrap()))
            .collect();
        for a in 0..nodes.len() {
            for b in a + 1..nodes.len() {
                if nodes[a].1 == nodes[b].1 {
                    coincident.push(Failure::CoincidentNodes {
                        nodes: [format!("q{}", nodes[a].0), format!("q{}", nodes[b].0)],
                        point: nodes[a].1.to_string(),
                    });
                }
            }
        }
        for (lab, p) in &nodes {
            let through: Vec<usize> = (1..=6).filter(|&k| lines[k - 1].contains(p)).collect();
            if through.len() != 2 {
                incidence.push(Failure::NodeIncidence { node: format!("q{lab}"), lines_through: through });
            }
        }
    }
    push("fifteen distinct nodes", coincident);
    push("each node on exactly two lines", incidence);
    ValidityReport { checks }
}

/// A divisor class recorded by its intersection numbers `D·θ` and `D²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorClass {
    pub theta_pairing: i64,
    pub self_intersection: i64,
}

impl DivisorClass {
    pub const THETA: DivisorClass = DivisorClass { theta_pairing: 2, self_intersection: 2 };
}

/// `Δ(D) = (D·θ)² − 2·D²`.
pub fn humbert_invariant(d: DivisorClass) -> Result<u128> {
    let a = d.theta_pairing as i128;
    let delta = a * a - 2 * d.self_intersection as i128;
    if delta < 0 {
        return Err(Error::NegativeInvariant { value: delta.clamp(i64::MIN as i128, 0) as i64 });
    }
    Ok(delta as u128)
}
