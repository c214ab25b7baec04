//! Humbert's tangency criterion as an exact residual, family scans and
//! certified bisection.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::binary_form::ParamPoint;
use crate::config::{build_config, fmt_param, preset_params, standard_conic, SexticConfiguration, Selection};
use crate::error::{Error, Result};
use crate::projective::{conic_through_five, tangency_residual, Conic, ProjLine, ProjPoint, QuadPoint};
use crate::scalar::{fmt_rational, q, ratio, sign_of, sqrt_rational, QuadScalar, Rational};

/// A point where the fitted conic meets the remaining line, with its
/// parameter along the line's canonical parametrization `u·P + t·Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meet {
    pub point: QuadPoint,
    pub param: ParamPoint,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HumbertResidual {
    #[serde(with = "crate::scalar::rational_str")]
    pub residual: Rational,
    pub conic: Conic,
    pub line: usize,
    pub meets: Vec<Meet>,
}

impl HumbertResidual {
    pub fn sign(&self) -> i32 {
        sign_of(&self.residual)
    }

    pub fn is_tangent(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Fits the conic through the five selected nodes and measures its
/// tangency to `l_line`.
pub fn humbert5_residual(config: &SexticConfiguration, selection: &Selection, line: usize) -> Result<HumbertResidual> {
    if !(1..=6).contains(&line) {
        return Err(Error::InvalidInput(format!("line index {line} outside 1..=6")));
    }
    let l = config.line(line);
    for lab in selection {
        if l.contains(config.node(*lab)) {
            return Err(Error::SelectionTouchesLine { label: format!("q{lab}"), line });
        }
    }
    for a in 0..5 {
        for b in a + 1..5 {
            if selection[a] == selection[b] {
                return Err(Error::DegenerateSelection);
            }
        }
    }
    let pts: [ProjPoint; 5] = selection.map(|lab| config.node(lab).clone());
    let conic = conic_through_five(&pts).map_err(|_| Error::DegenerateSelection)?;
    let residual = tangency_residual(&conic, l);
    let meets = line_meets(&conic, l)?;
    Ok(HumbertResidual { residual, conic, line, meets })
}

/// Intersection of a conic with a line, over `Q` or `Q(√disc)`.
pub fn line_meets(conic: &Conic, l: &ProjLine) -> Result<Vec<Meet>> {
    let form = conic.restrict_to_line(l);
    if form.is_zero() {
        return Ok(Vec::new());
    }
    let (p, qv) = l.spanning_points();
    let (a, b, c) = (form.coeff(0).clone(), form.coeff(1).clone(), form.coeff(2).clone());
    let disc = &b * &b - q(4) * &a * &c;
    let point_at = |tp: &ParamPoint| {
        let (t, u) = tp.homogeneous();
        let coords: [QuadScalar; 3] = std::array::from_fn(|k| {
            &(&u * &QuadScalar::rational(p[k].clone())) + &(&t * &QuadScalar::rational(qv[k].clone()))
        });
        QuadPoint::new(coords)
    };
    let mut params: Vec<(ParamPoint, usize)> = Vec::new();
    if c.is_zero() {
        // t² coefficient vanishes: u = 0 is a root
        params.push((ParamPoint::Infinity, if b.is_zero() { 2 } else { 1 }));
        if !b.is_zero() {
            params.push((ParamPoint::rational(-&a / &b), 1));
        }
    } else if disc.is_zero() {
        params.push((ParamPoint::rational(-&b / (q(2) * &c)), 2));
    } else {
        let root = sqrt_rational(&disc);
        let two_c = QuadScalar::rational(q(2) * &c);
        let mb = QuadScalar::rational(-b.clone());
        params.push((ParamPoint::Finite(&(&mb + &root) / &two_c), 1));
        params.push((ParamPoint::Finite(&(&mb - &root) / &two_c), 1));
    }
    Ok(params
        .into_iter()
        .map(|(param, multiplicity)| Meet { point: point_at(&param), param, multiplicity })
        .collect())
}

/// One-parameter family: five fixed tangency parameters on the base conic
/// and one varying over `[lo, hi]` in slot `slot` (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigFamily {
    pub name: String,
    pub base: Conic,
    pub base_point: ProjPoint,
    #[serde(with = "param_vec")]
    pub fixed: Vec<ParamPoint>,
    pub slot: usize,
    #[serde(with = "crate::scalar::rational_str")]
    pub lo: Rational,
    #[serde(with = "crate::scalar::rational_str")]
    pub hi: Rational,
}

mod param_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[ParamPoint], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().map(fmt_param).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<ParamPoint>, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        v.iter().map(|p| crate::config::parse_param(p)).collect::<Result<_>>().map_err(serde::de::Error::custom)
    }
}

impl ConfigFamily {
    /// Family over the standard conic varying the sixth parameter.
    pub fn standard(name: &str, fixed: &[ParamPoint], lo: Rational, hi: Rational) -> Result<Self> {
        if fixed.len() != 5 {
            return Err(Error::InvalidInput(format!("five fixed parameters expected, got {}", fixed.len())));
        }
        if lo >= hi {
            return Err(Error::InvalidInput("family interval must satisfy lo < hi".into()));
        }
        let (base, base_point) = standard_conic();
        Ok(ConfigFamily { name: name.into(), base, base_point, fixed: fixed.to_vec(), slot: 5, lo, hi })
    }

    pub fn params_at(&self, s: &Rational) -> Vec<ParamPoint> {
        let mut p = self.fixed.clone();
        p.insert(self.slot, ParamPoint::rational(s.clone()));
        p
    }

    pub fn member(&self, s: &Rational) -> Result<SexticConfiguration> {
        build_config(&self.base, &self.base_point, &self.params_at(s))
    }

    /// `n` equally spaced parameters from `lo` to `hi` inclusive.
    pub fn grid(&self, n: usize) -> Result<Vec<Rational>> {
        if n < 2 {
            return Err(Error::EmptyFamily { samples: n });
        }
        let step = (&self.hi - &self.lo) / Rational::from_integer((n as i64 - 1).into());
        Ok((0..n).map(|k| &self.lo + &step * Rational::from_integer((k as i64).into())).collect())
    }
}

/// The preset with its sixth parameter varying over `[5/4, 7/4]`; the
/// cyclic residual against `l6` changes sign once inside.
pub fn preset_crossing_family() -> ConfigFamily {
    ConfigFamily::standard("preset-crossing", &preset_params()[..5], ratio(5, 4), ratio(7, 4)).unwrap()
}

/// Parameters `0, −3, −2, 1/2, 1` with the sixth varying over `[4, 6]`; the
/// cyclic configuration at `τ6 = 5` is tangent to `l6` exactly.
pub fn rational_root_family() -> ConfigFamily {
    let fixed = [q(0), q(-3), q(-2), ratio(1, 2), q(1)].map(ParamPoint::rational);
    ConfigFamily::standard("rational-root", &fixed, q(4), q(6)).unwrap()
}

/// The preset with the sixth parameter over `[5/2, 7/2]`.
pub fn preset_wide_family() -> ConfigFamily {
    ConfigFamily::standard("preset-wide", &preset_params()[..5], ratio(5, 2), ratio(7, 2)).unwrap()
}

pub fn shipped_families() -> Vec<ConfigFamily> {
    vec![preset_crossing_family(), rational_root_family(), preset_wide_family()]
}

pub fn family_by_name(name: &str) -> Result<ConfigFamily> {
    shipped_families()
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::InvalidInput(format!("unknown family '{name}'")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanSample {
    #[serde(with = "crate::scalar::rational_str")]
    pub param: Rational,
    pub sign: Option<i32>,
    #[serde(serialize_with = "opt_rational")]
    pub residual: Option<Rational>,
    pub gap: Option<String>,
}

fn opt_rational<S: serde::Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&fmt_rational(r)),
        None => s.serialize_none(),
    }
}

impl ScanSample {
    pub fn is_exact_root(&self) -> bool {
        self.sign == Some(0)
    }
}

fn evaluate(family: &ConfigFamily, selection: &Selection, line: usize, s: &Rational) -> Result<Rational> {
    let cfg = family.member(s)?;
    Ok(humbert5_residual(&cfg, selection, line)?.residual)
}

/// Exact residual at each grid parameter. Grid points are evaluated in
/// parallel and returned in parameter order; degenerate members are gaps.
pub fn scan_family(family: &ConfigFamily, selection: &Selection, line: usize, n: usize) -> Result<Vec<ScanSample>> {
    let grid = family.grid(n)?;
    let out = grid
        .into_par_iter()
        .map(|s| match evaluate(family, selection, line, &s) {
            Ok(r) => ScanSample { sign: Some(sign_of(&r)), residual: Some(r), param: s, gap: None },
            Err(e) => ScanSample { param: s, sign: None, residual: None, gap: Some(e.to_string()) },
        })
        .collect();
    Ok(out)
}

/// Adjacent sample pairs with opposite nonzero signs.
pub fn sign_changes(samples: &[ScanSample]) -> Vec<(Rational, Rational)> {
    samples
        .windows(2)
        .filter_map(|w| match (w[0].sign, w[1].sign) {
            (Some(a), Some(b)) if a * b < 0 => Some((w[0].param.clone(), w[1].param.clone())),
            _ => None,
        })
        .collect()
}

pub fn exact_roots(samples: &[ScanSample]) -> Vec<Rational> {
    samples.iter().filter(|s| s.is_exact_root()).map(|s| s.param.clone()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootCertificate {
    pub family: String,
    pub selection: Vec<String>,
    pub line: usize,
    #[serde(with = "crate::scalar::rational_str")]
    pub lo: Rational,
    #[serde(with = "crate::scalar::rational_str")]
    pub hi: Rational,
    pub sign_lo: i32,
    pub sign_hi: i32,
    #[serde(with = "crate::scalar::rational_str")]
    pub width: Rational,
    #[serde(with = "crate::scalar::rational_str")]
    pub tol: Rational,
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Isolation {
    Certificate(RootCertificate),
    /// A bisection midpoint hit the tangency exactly.
    ExactRoot {
        #[serde(with = "crate::scalar::rational_str")]
        param: Rational,
    },
}

pub fn default_tolerance() -> Rational {
    ratio(1, 1_000_000)
}

/// Exact bisection on the residual sign.
pub fn isolate_root(
    family: &ConfigFamily,
    selection: &Selection,
    line: usize,
    lo: &Rational,
    hi: &Rational,
    tol: &Rational,
) -> Result<Isolation> {
    if !tol.is_positive() {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let (mut a, mut b) = if lo <= hi { (lo.clone(), hi.clone()) } else { (hi.clone(), lo.clone()) };
    let gap = |a: &Rational, b: &Rational| Error::DegenerateInside { lo: fmt_rational(a), hi: fmt_rational(b) };
    let sa = sign_of(&evaluate(family, selection, line, &a).map_err(|_| gap(&a, &a))?);
    let sb = sign_of(&evaluate(family, selection, line, &b).map_err(|_| gap(&b, &b))?);
    if sa * sb >= 0 {
        return Err(Error::NoSignChange { lo: fmt_rational(&a), hi: fmt_rational(&b) });
    }
    let two = Rational::from_integer(2.into());
    let mut steps = 0;
    while &b - &a > *tol {
        let mid = (&a + &b) / &two;
        let sm = sign_of(&evaluate(family, selection, line, &mid).map_err(|_| gap(&a, &b))?);
        steps += 1;
        if sm == 0 {
            return Ok(Isolation::ExactRoot { param: mid });
        }
        if sm == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(Isolation::Certificate(RootCertificate {
        family: family.name.clone(),
        selection: selection.iter().map(|l| format!("q{l}")).collect(),
        line,
        width: &b - &a,
        lo: a,
        hi: b,
        sign_lo: sa,
        sign_hi: -sa,
        tol: tol.clone(),
        steps,
    }))
}

/// Re-evaluates both endpoint residuals from scratch.
pub fn verify_certificate(family: &ConfigFamily, selection: &Selection, cert: &RootCertificate) -> Result<bool> {
    let sl = sign_of(&evaluate(family, selection, cert.line, &cert.lo)?);
    let sh = sign_of(&evaluate(family, selection, cert.line, &cert.hi)?);
    Ok(sl == cert.sign_lo && sh == cert.sign_hi && sl * sh == -1 && &cert.hi - &cert.lo <= cert.tol && cert.lo < cert.hi)
}

/// `τ ↦ −τ` is induced by `(x:y:z) ↦ (x:−y:z)`, which preserves `y² − xz`.
pub fn mirrored(family: &ConfigFamily) -> ConfigFamily {
    let neg = |p: &ParamPoint| match p {
        ParamPoint::Infinity => ParamPoint::Infinity,
        ParamPoint::Finite(x) => ParamPoint::Finite(-x),
    };
    ConfigFamily {
        name: format!("{}-mirrored", family.name),
        base: family.base.clone(),
        base_point: family.base_point.clone(),
        fixed: family.fixed.iter().map(neg).collect(),
        slot: family.slot,
        lo: -family.hi.clone(),
        hi: -family.lo.clone(),
    }
}
