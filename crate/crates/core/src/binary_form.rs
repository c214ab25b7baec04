//! Homogeneous polynomials in the parameter pair `(t:u)`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::UniPoly;
use crate::scalar::{fmt_rational, primitive_integer_vector, QuadScalar, Rational};

/// A point of the parameter line: `(τ:1)` or `(1:0)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamPoint {
    Finite(QuadScalar),
    Infinity,
}

impl ParamPoint {
    pub fn rational(r: Rational) -> Self {
        ParamPoint::Finite(QuadScalar::rational(r))
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            ParamPoint::Finite(x) => x.to_rational(),
            ParamPoint::Infinity => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        match self {
            ParamPoint::Finite(x) => x.is_rational(),
            ParamPoint::Infinity => true,
        }
    }

    /// Homogeneous coordinates `(t, u)`.
    pub fn homogeneous(&self) -> (QuadScalar, QuadScalar) {
        match self {
            ParamPoint::Finite(x) => (x.clone(), QuadScalar::one()),
            ParamPoint::Infinity => (QuadScalar::one(), QuadScalar::zero()),
        }
    }

    /// From homogeneous coordinates, not both zero.
    pub fn from_homogeneous(t: &QuadScalar, u: &QuadScalar) -> Self {
        assert!(!(t.is_zero() && u.is_zero()), "(0:0) is not a parameter");
        if u.is_zero() {
            ParamPoint::Infinity
        } else {
            ParamPoint::Finite(t / u)
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            ParamPoint::Finite(x) => ParamPoint::Finite(x.conj()),
            ParamPoint::Infinity => ParamPoint::Infinity,
        }
    }
}

impl fmt::Display for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamPoint::Finite(x) => write!(f, "{x}"),
            ParamPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// `Σ coeffs[i] · t^i · u^(d−i)` with the degree `d = coeffs.len() − 1`
/// carried explicitly, so vanishing top coefficients encode roots at `(1:0)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct BinaryForm {
    #[serde(with = "crate::scalar::rational_vec")]
    coeffs: Vec<Rational>,
}

impl BinaryForm {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        BinaryForm { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero(degree: usize) -> Self {
        Self::new(vec![Rational::zero(); degree + 1])
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn t() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn u() -> Self {
        Self::from_ints(&[1, 0])
    }

    /// The linear form vanishing at a rational parameter point.
    pub fn vanishing_at(p: &ParamPoint) -> Self {
        match p {
            ParamPoint::Infinity => Self::u(),
            ParamPoint::Finite(x) => {
                let r = x.to_rational().expect("vanishing_at needs a rational point");
                Self::new(vec![-r, Rational::one()])
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "adding forms of different degree");
        Self::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![Rational::zero(); self.degree() + other.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::constant(Rational::one()), |acc, _| acc.mul(self))
    }

    pub fn product<'a, I: IntoIterator<Item = &'a BinaryForm>>(forms: I) -> Self {
        forms.into_iter().fold(Self::constant(Rational::one()), |acc, f| acc.mul(f))
    }

    pub fn eval(&self, t: &Rational, u: &Rational) -> Rational {
        let mut acc = Rational::zero();
        let mut tp = Rational::one();
        let d = self.degree();
        let upow: Vec<Rational> = {
            let mut v = vec![Rational::one()];
            for _ in 0..d {
                let last = v.last().unwrap() * u;
                v.push(last);
            }
            v
        };
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += c * &tp * &upow[d - i];
            tp *= t;
        }
        acc
    }

    pub fn eval_quad(&self, t: &QuadScalar, u: &QuadScalar) -> QuadScalar {
        let d = self.degree();
        let mut acc = QuadScalar::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = &(&t.pow(i as u32) * &u.pow((d - i) as u32)) * &QuadScalar::rational(c.clone());
            acc = &acc + &term;
        }
        acc
    }

    pub fn eval_at(&self, p: &ParamPoint) -> QuadScalar {
        let (t, u) = p.homogeneous();
        self.eval_quad(&t, &u)
    }

    /// `F(t, 1)`.
    pub fn dehomogenize(&self) -> UniPoly {
        UniPoly::new(self.coeffs.clone())
    }

    /// Homogenizes `p` to degree `d ≥ deg p`.
    pub fn homogenize(p: &UniPoly, d: usize) -> Self {
        let deg = p.degree().unwrap_or(0);
        assert!(deg <= d, "cannot homogenize degree {deg} to {d}");
        Self::new((0..=d).map(|i| p.coeff(i)).collect())
    }

    /// Order of vanishing at `(1:0)`.
    pub fn multiplicity_at_infinity(&self) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        self.coeffs.iter().rev().take_while(|c| c.is_zero()).count()
    }

    pub fn multiplicity_at(&self, p: &ParamPoint) -> usize {
        match p {
            ParamPoint::Infinity => self.multiplicity_at_infinity(),
            ParamPoint::Finite(x) => {
                let r = x.to_rational().expect("multiplicity at a rational point");
                let mut f = self.dehomogenize();
                let lin = UniPoly::linear_root(&r);
                let mut m = 0;
                while !f.is_zero() && lin.divides(&f) {
                    f = f.exact_div(&lin);
                    m += 1;
                }
                m
            }
        }
    }

    /// The form in a local coordinate `s` centred at a rational point:
    /// `F(τ + s, 1)` for finite `τ`, `F(1, s)` at infinity.
    pub fn local_expansion(&self, p: &ParamPoint) -> UniPoly {
        match p {
            ParamPoint::Infinity => {
                UniPoly::new(self.coeffs.iter().rev().cloned().collect())
            }
            ParamPoint::Finite(x) => {
                let r = x.to_rational().expect("local expansion at a rational point");
                let shift = UniPoly::new(vec![r, Rational::one()]);
                self.dehomogenize().compose(&shift)
            }
        }
    }

    /// Primitive integer associate whose highest nonzero coefficient is positive.
    pub fn canonical(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let rev: Vec<Rational> = self.coeffs.iter().rev().cloned().collect();
        let mut prim = primitive_integer_vector(&rev).unwrap();
        prim.reverse();
        Self::new(prim)
    }

    /// Exact division by another form; `None` if it does not divide.
    pub fn divide(&self, d: &Self) -> Option<Self> {
        if d.degree() > self.degree() {
            return None;
        }
        let mi = d.multiplicity_at_infinity();
        if self.multiplicity_at_infinity() < mi {
            return None;
        }
        let (quo, rem) = self.dehomogenize().div_rem(&d.dehomogenize());
        rem.is_zero().then(|| Self::homogenize(&quo, self.degree() - d.degree()))
    }

    /// Greatest common divisor, in canonical form.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.canonical();
        }
        if other.is_zero() {
            return self.canonical();
        }
        let g = self.dehomogenize().gcd(&other.dehomogenize());
        let inf = self.multiplicity_at_infinity().min(other.multiplicity_at_infinity());
        let deg = g.degree().unwrap_or(0);
        Self::homogenize(&g, deg + inf).canonical()
    }

    /// Coefficientwise equality up to a nonzero rational factor.
    pub fn proportional(&self, other: &Self) -> bool {
        self.degree() == other.degree() && self.canonical() == other.canonical()
    }

    /// Square-free factorization with rational roots split off.
    ///
    /// Factors come back in a fixed order: linear factors `t − r·u` by
    /// increasing `r`, then `u` (the root at infinity), then the remaining
    /// rational-root-free square-free parts by increasing multiplicity. Each
    /// factor is in [`BinaryForm::canonical`] form and the product of
    /// `factor^multiplicity` equals `self` up to a rational unit.
    pub fn squarefree_decomposition(&self) -> Result<Vec<FormFactor>> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        let f = self.dehomogenize();
        let at_inf = self.multiplicity_at_infinity();
        let mut linear = Vec::new();
        let mut rest = Vec::new();
        for (part, mult) in f.square_free_factors() {
            let mut remaining = part.clone();
            for r in part.rational_roots() {
                remaining = remaining.exact_div(&UniPoly::linear_root(&r));
                linear.push((r, mult));
            }
            if !remaining.is_constant() {
                let deg = remaining.degree().unwrap();
                rest.push(FormFactor {
                    factor: Self::homogenize(&remaining, deg).canonical(),
                    multiplicity: mult,
                });
            }
        }
        linear.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<FormFactor> = linear
            .into_iter()
            .map(|(r, m)| FormFactor {
                factor: Self::vanishing_at(&ParamPoint::rational(r)).canonical(),
                multiplicity: m,
            })
            .collect();
        if at_inf > 0 {
            out.push(FormFactor { factor: Self::u(), multiplicity: at_inf });
        }
        rest.sort_by_key(|f| f.multiplicity);
        out.extend(rest);
        Ok(out)
    }

    pub fn to_string_in(&self, t: &str, u: &str) -> String {
        let d = self.degree();
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut parts = Vec::new();
            if !abs.is_one() || d == 0 {
                parts.push(fmt_rational(&abs));
            }
            match i {
                0 => {}
                1 => parts.push(t.to_string()),
                _ => parts.push(format!("{t}^{i}")),
            }
            match d - i {
                0 => {}
                1 => parts.push(u.to_string()),
                e => parts.push(format!("{u}^{e}")),
            }
            if parts.is_empty() {
                parts.push("1".into());
            }
            s.push_str(&parts.join("*"));
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_in("t", "u"))
    }
}

/// One entry of [`BinaryForm::squarefree_decomposition`].
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FormFactor {
    pub factor: BinaryForm,
    pub multiplicity: usize,
}

impl FormFactor {
    /// The root of a linear factor.
    pub fn root(&self) -> Option<ParamPoint> {
        if self.factor.degree() != 1 {
            return None;
        }
        let c = self.factor.coeffs();
        Some(if c[1].is_zero() {
            ParamPoint::Infinity
        } else {
            ParamPoint::rational(-&c[0] / &c[1])
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn t_minus(r: i64) -> BinaryForm {
        BinaryForm::from_ints(&[-r, 1])
    }

    #[test]
    fn decomposition_double_roots() {
        let f = t_minus(0).pow(2).mul(&t_minus(1).pow(2));
        let d = f.squarefree_decomposition().unwrap();
        assert_eq!(
            d,
            vec![
                FormFactor { factor: BinaryForm::t(), multiplicity: 2 },
                FormFactor { factor: t_minus(1), multiplicity: 2 },
            ]
        );
    }

    #[test]
    fn decomposition_three_simple_roots() {
        let f = t_minus(0).mul(&t_minus(1)).mul(&t_minus(2));
        let d = f.squarefree_decomposition().unwrap();
        assert_eq!(d.len(), 3);
        assert!(d.iter().all(|x| x.multiplicity == 1 && x.factor.degree() == 1));
    }

    #[test]
    fn decomposition_irreducible_cube() {
        let f = BinaryForm::from_ints(&[1, 0, 1]).pow(3);
        let d = f.squarefree_decomposition().unwrap();
        assert_eq!(d, vec![FormFactor { factor: BinaryForm::from_ints(&[1, 0, 1]), multiplicity: 3 }]);
    }

    #[test]
    fn decomposition_tracks_infinity() {
        // u^3 (t - 2u)
        let f = BinaryForm::u().pow(3).mul(&t_minus(2));
        let d = f.squarefree_decomposition().unwrap();
        assert_eq!(d[0].root(), Some(ParamPoint::rational(q(2))));
        assert_eq!(d[1], FormFactor { factor: BinaryForm::u(), multiplicity: 3 });
        assert_eq!(BinaryForm::zero(3).squarefree_decomposition(), Err(Error::ZeroForm));
    }

    #[test]
    fn local_expansion_and_multiplicity() {
        let f = BinaryForm::u().pow(2).mul(&t_minus(3));
        assert_eq!(f.multiplicity_at(&ParamPoint::Infinity), 2);
        assert_eq!(f.multiplicity_at(&ParamPoint::rational(q(3))), 1);
        // F(1, s) = s^2 (1 - 3 s)
        assert_eq!(f.local_expansion(&ParamPoint::Infinity), UniPoly::from_ints(&[0, 0, 1, -3]));
        assert_eq!(f.to_string(), "t*u^2 - 3*u^3");
    }

    #[test]
    fn division() {
        let a = t_minus(1).mul(&BinaryForm::u());
        assert_eq!(a.divide(&BinaryForm::u()), Some(t_minus(1)));
        assert_eq!(a.divide(&t_minus(2)), None);
    }
}
