//! Exact projective-plane primitives: points, lines, conics, rational maps
//! from the parameter line, and pullbacks of ternary forms.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::binary_form::{BinaryForm, ParamPoint};
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{primitive_integer_vector, QuadScalar, Rational};

pub type Triple = [Rational; 3];

fn cross(a: &Triple, b: &Triple) -> Triple {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn dot(a: &Triple, b: &Triple) -> Rational {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn canonical_triple(v: &[Rational]) -> Option<Triple> {
    let p = primitive_integer_vector(v)?;
    Some([p[0].clone(), p[1].clone(), p[2].clone()])
}

fn fmt_triple(v: &Triple, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "({}:{}:{})", v[0], v[1], v[2])
}

macro_rules! homogeneous_triple {
    ($name:ident, $what:literal) => {
        #[doc = concat!("A ", $what, " of the projective plane, stored as coprime integers with the first nonzero entry positive.")]
        #[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
        pub struct $name(Triple);

        impl $name {
            pub fn new(x: Rational, y: Rational, z: Rational) -> Result<Self> {
                canonical_triple(&[x, y, z])
                    .map($name)
                    .ok_or_else(|| Error::InvalidInput(concat!("all-zero ", $what).into()))
            }

            pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
                Self::new(crate::scalar::q(x), crate::scalar::q(y), crate::scalar::q(z)).expect("nonzero triple")
            }

            pub fn from_triple(v: &Triple) -> Result<Self> {
                Self::new(v[0].clone(), v[1].clone(), v[2].clone())
            }

            pub fn coords(&self) -> &Triple {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt_triple(&self.0, f)
            }
        }

        impl Serialize for $name {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let v: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
                v.serialize(s)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                use serde::de::Error as _;
                let v: Vec<String> = Vec::deserialize(d)?;
                if v.len() != 3 {
                    return Err(D::Error::custom("expected three coordinates"));
                }
                let r: Vec<Rational> = v
                    .iter()
                    .map(|s| crate::scalar::parse_rational(s))
                    .collect::<Result<_>>()
                    .map_err(D::Error::custom)?;
                $name::new(r[0].clone(), r[1].clone(), r[2].clone()).map_err(D::Error::custom)
            }
        }
    };
}

homogeneous_triple!(ProjPoint, "point");
homogeneous_triple!(ProjLine, "line");

impl ProjLine {
    pub fn contains(&self, p: &ProjPoint) -> bool {
        dot(&self.0, &p.0).is_zero()
    }

    /// Value of the linear form at `p` (depends on the representatives).
    pub fn eval(&self, p: &Triple) -> Rational {
        dot(&self.0, p)
    }

    /// The two spanning points used to parametrize the line as
    /// `u·P + t·Q`.
    ///
    /// With `k` the index of the first nonzero coefficient `l_k` and
    /// `i < j` the other two indices, `P = l_k e_i − l_i e_k` and
    /// `Q = l_k e_j − l_j e_k`.
    pub fn spanning_points(&self) -> (Triple, Triple) {
        let l = &self.0;
        let k = (0..3).find(|&i| !l[i].is_zero()).unwrap();
        let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
        let mk = |i: usize| {
            let mut v: Triple = [Rational::zero(), Rational::zero(), Rational::zero()];
            v[i] = l[k].clone();
            v[k] = -l[i].clone();
            v
        };
        (mk(others[0]), mk(others[1]))
    }
}

impl ProjPoint {
    pub fn is_on(&self, l: &ProjLine) -> bool {
        l.contains(self)
    }
}

/// Intersection point of two distinct lines.
pub fn meet_lines(l1: &ProjLine, l2: &ProjLine) -> Result<ProjPoint> {
    ProjPoint::from_triple(&cross(&l1.0, &l2.0)).map_err(|_| Error::IdenticalLines)
}

/// Line through two distinct points.
pub fn join_points(p1: &ProjPoint, p2: &ProjPoint) -> Result<ProjLine> {
    ProjLine::from_triple(&cross(&p1.0, &p2.0))
        .map_err(|_| Error::InvalidInput(format!("points {p1} and {p2} coincide")))
}

pub fn are_collinear(a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> bool {
    dot(&cross(&a.0, &b.0), &c.0).is_zero()
}

pub fn are_concurrent(a: &ProjLine, b: &ProjLine, c: &ProjLine) -> bool {
    dot(&cross(&a.0, &b.0), &c.0).is_zero()
}

/// A point with coordinates in `Q` or one `Q(√m)`, scaled so that the first
/// nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct QuadPoint(pub [QuadScalar; 3]);

impl QuadPoint {
    pub fn new(v: [QuadScalar; 3]) -> Self {
        let k = v.iter().position(|x| !x.is_zero()).expect("all-zero point");
        let inv = v[k].inv();
        QuadPoint([&v[0] * &inv, &v[1] * &inv, &v[2] * &inv])
    }

    pub fn from_rational(p: &ProjPoint) -> Self {
        Self::new(p.0.clone().map(QuadScalar::rational))
    }

    pub fn to_rational(&self) -> Option<ProjPoint> {
        let r: Option<Vec<Rational>> = self.0.iter().map(|x| x.to_rational()).collect();
        r.and_then(|r| ProjPoint::new(r[0].clone(), r[1].clone(), r[2].clone()).ok())
    }

    pub fn conj(&self) -> Self {
        QuadPoint(self.0.clone().map(|x| x.conj()))
    }

    pub fn coords(&self) -> &[QuadScalar; 3] {
        &self.0
    }
}

impl fmt::Display for QuadPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {} : {})", self.0[0], self.0[1], self.0[2])
    }
}

pub(crate) fn cross_quad(a: &[QuadScalar; 3], b: &[QuadScalar; 3]) -> [QuadScalar; 3] {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

pub(crate) fn lift(v: &Triple) -> [QuadScalar; 3] {
    v.clone().map(QuadScalar::rational)
}

/// A plane conic `xx·x² + yy·y² + zz·z² + xy·xy + xz·xz + yz·yz`, kept as
/// coprime integer coefficients with the first nonzero one positive.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Conic {
    coeffs: [Rational; 6],
    rank: usize,
}

pub const CONIC_MONOMIALS: [&str; 6] = ["x^2", "y^2", "z^2", "x*y", "x*z", "y*z"];

impl Conic {
    /// Coefficients in the order `(xx, yy, zz, xy, xz, yz)`.
    pub fn new(coeffs: [Rational; 6]) -> Result<Self> {
        let c = primitive_integer_vector(&coeffs).ok_or(Error::ZeroForm)?;
        let coeffs: [Rational; 6] = c.try_into().unwrap();
        let mut conic = Conic { coeffs, rank: 0 };
        conic.rank = linalg::rank(&conic.matrix_rows());
        Ok(conic)
    }

    pub fn from_ints(c: [i64; 6]) -> Self {
        Self::new(c.map(crate::scalar::q)).expect("nonzero conic")
    }

    /// Conic from a symmetric matrix.
    pub fn from_matrix(m: &[Triple; 3]) -> Result<Self> {
        let two = Rational::from_integer(2.into());
        Self::new([
            m[0][0].clone(),
            m[1][1].clone(),
            m[2][2].clone(),
            &m[0][1] * &two,
            &m[0][2] * &two,
            &m[1][2] * &two,
        ])
    }

    pub fn coeffs(&self) -> &[Rational; 6] {
        &self.coeffs
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_smooth(&self) -> bool {
        self.rank == 3
    }

    pub fn matrix(&self) -> [Triple; 3] {
        let c = &self.coeffs;
        let h = |x: &Rational| x / Rational::from_integer(2.into());
        [
            [c[0].clone(), h(&c[3]), h(&c[4])],
            [h(&c[3]), c[1].clone(), h(&c[5])],
            [h(&c[4]), h(&c[5]), c[2].clone()],
        ]
    }

    fn matrix_rows(&self) -> Vec<Vec<Rational>> {
        self.matrix().iter().map(|r| r.to_vec()).collect()
    }

    pub fn determinant(&self) -> Rational {
        linalg::determinant(&self.matrix_rows())
    }

    pub fn monomials(p: &Triple) -> [Rational; 6] {
        [
            &p[0] * &p[0],
            &p[1] * &p[1],
            &p[2] * &p[2],
            &p[0] * &p[1],
            &p[0] * &p[2],
            &p[1] * &p[2],
        ]
    }

    pub fn eval(&self, p: &Triple) -> Rational {
        Self::monomials(p).iter().zip(&self.coeffs).map(|(m, c)| m * c).sum()
    }

    pub fn eval_quad(&self, p: &[QuadScalar; 3]) -> QuadScalar {
        self.bilinear_quad(p, p)
    }

    /// `pᵀ M q` for the symmetric matrix `M`.
    pub fn bilinear(&self, p: &Triple, q: &Triple) -> Rational {
        let m = self.matrix();
        let mut acc = Rational::zero();
        for i in 0..3 {
            for j in 0..3 {
                acc += &p[i] * &m[i][j] * &q[j];
            }
        }
        acc
    }

    pub fn bilinear_quad(&self, p: &[QuadScalar; 3], q: &[QuadScalar; 3]) -> QuadScalar {
        let m = self.matrix();
        let mut acc = QuadScalar::zero();
        for i in 0..3 {
            for j in 0..3 {
                if m[i][j].is_zero() {
                    continue;
                }
                let term = &(&p[i] * &QuadScalar::rational(m[i][j].clone())) * &q[j];
                acc = &acc + &term;
            }
        }
        acc
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.eval(p.coords()).is_zero()
    }

    /// `M p` as line coordinates.
    pub fn polar(&self, p: &Triple) -> Triple {
        let m = self.matrix();
        [dot(&m[0], p), dot(&m[1], p), dot(&m[2], p)]
    }

    pub fn polar_quad(&self, p: &[QuadScalar; 3]) -> [QuadScalar; 3] {
        let m = self.matrix();
        let row = |r: &Triple| {
            let mut acc = QuadScalar::zero();
            for k in 0..3 {
                acc = &acc + &(&QuadScalar::rational(r[k].clone()) * &p[k]);
            }
            acc
        };
        [row(&m[0]), row(&m[1]), row(&m[2])]
    }

    /// The dual conic (adjugate matrix): the lines tangent to a smooth conic
    /// are exactly the points of its dual.
    pub fn dual(&self) -> Result<Conic> {
        let m = self.matrix();
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0];
        let adj = [
            [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
            [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
            [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
        ];
        Conic::from_matrix(&adj)
    }

    /// Restriction to a line along `u·P + t·Q` (see [`ProjLine::spanning_points`]).
    pub fn restrict_to_line(&self, l: &ProjLine) -> BinaryForm {
        let (p, q) = l.spanning_points();
        let two = Rational::from_integer(2.into());
        BinaryForm::new(vec![self.eval(&p), &two * self.bilinear(&p, &q), self.eval(&q)])
    }

    pub fn as_ternary(&self) -> TernaryForm {
        let mut f = TernaryForm::zero(2);
        let exps = [[2, 0, 0], [0, 2, 0], [0, 0, 2], [1, 1, 0], [1, 0, 1], [0, 1, 1]];
        for (e, c) in exps.iter().zip(&self.coeffs) {
            f.add_term(*e, c.clone());
        }
        f
    }
}

impl fmt::Display for Conic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for (c, m) in self.coeffs.iter().zip(CONIC_MONOMIALS) {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if !abs.is_one() {
                s.push_str(&format!("{abs}*"));
            }
            s.push_str(m);
        }
        write!(f, "{s}")
    }
}

impl Serialize for Conic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(|x| x.to_string()).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Conic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v: Vec<String> = Vec::deserialize(d)?;
        if v.len() != 6 {
            return Err(D::Error::custom("a conic has six coefficients (xx, yy, zz, xy, xz, yz)"));
        }
        let r: Vec<Rational> = v
            .iter()
            .map(|s| crate::scalar::parse_rational(s))
            .collect::<Result<_>>()
            .map_err(D::Error::custom)?;
        Conic::new(r.try_into().unwrap()).map_err(D::Error::custom)
    }
}

/// The unique conic through five points.
pub fn conic_through_five(pts: &[ProjPoint; 5]) -> Result<Conic> {
    let rows: Vec<Vec<Rational>> = pts.iter().map(|p| Conic::monomials(p.coords()).to_vec()).collect();
    let ns = linalg::null_space(&rows, 6);
    if ns.len() != 1 {
        return Err(Error::DegeneratePoints { nullity: ns.len() });
    }
    Conic::new(ns[0].clone().try_into().unwrap())
}

/// Discriminant `B² − 4AC` of the conic restricted to the line along its
/// canonical parametrization; zero exactly when the line is tangent (or
/// meets a singular point of a degenerate conic).
pub fn tangency_residual(c: &Conic, l: &ProjLine) -> Rational {
    let r = c.restrict_to_line(l);
    let (a, b, cc) = (r.coeff(0), r.coeff(1), r.coeff(2));
    b * b - Rational::from_integer(4.into()) * a * cc
}

pub fn tangent_line_at(c: &Conic, p: &ProjPoint) -> Result<ProjLine> {
    if !c.contains(p) {
        return Err(Error::PointNotOnConic { point: p.to_string() });
    }
    if !c.is_smooth() {
        return Err(Error::SingularConic { rank: c.rank() });
    }
    ProjLine::from_triple(&c.polar(p.coords()))
}

/// A homogeneous ternary form `Σ c · x^i y^j z^k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TernaryForm {
    degree: u32,
    terms: BTreeMap<[u32; 3], Rational>,
}

impl TernaryForm {
    pub fn zero(degree: u32) -> Self {
        TernaryForm { degree, terms: BTreeMap::new() }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn add_term(&mut self, exps: [u32; 3], c: Rational) {
        assert_eq!(exps.iter().sum::<u32>(), self.degree, "inhomogeneous term");
        let e = self.terms.entry(exps).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn from_line(l: &ProjLine) -> Self {
        let mut f = Self::zero(1);
        for (i, c) in l.coords().iter().enumerate() {
            let mut e = [0; 3];
            e[i] = 1;
            f.add_term(e, c.clone());
        }
        f
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], ca * cb);
            }
        }
        out
    }

    pub fn eval(&self, p: &Triple) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut v = c.clone();
                for k in 0..3 {
                    for _ in 0..e[k] {
                        v *= &p[k];
                    }
                }
                v
            })
            .sum()
    }
}

/// A map from the parameter line given by three binary forms of a common
/// degree without a common factor.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct RationalMap {
    forms: [BinaryForm; 3],
}

impl RationalMap {
    pub fn new(forms: [BinaryForm; 3]) -> Result<Self> {
        let d = forms[0].degree();
        if forms.iter().any(|f| f.degree() != d) {
            return Err(Error::InvalidInput("component forms differ in degree".into()));
        }
        let g = forms[0].gcd(&forms[1]).gcd(&forms[2]);
        if g.degree() > 0 || g.is_zero() {
            return Err(Error::InvalidInput(format!("component forms share the factor {g}")));
        }
        // joint canonical scaling: coprime integers, first nonzero positive
        let flat: Vec<Rational> = forms.iter().flat_map(|f| f.coeffs().to_vec()).collect();
        let prim = primitive_integer_vector(&flat).unwrap();
        let n = d + 1;
        let forms = [
            BinaryForm::new(prim[0..n].to_vec()),
            BinaryForm::new(prim[n..2 * n].to_vec()),
            BinaryForm::new(prim[2 * n..].to_vec()),
        ];
        Ok(RationalMap { forms })
    }

    pub fn degree(&self) -> usize {
        self.forms[0].degree()
    }

    pub fn forms(&self) -> &[BinaryForm; 3] {
        &self.forms
    }

    pub fn eval(&self, p: &ParamPoint) -> QuadPoint {
        let (t, u) = p.homogeneous();
        QuadPoint::new(self.forms.clone().map(|f| f.eval_quad(&t, &u)))
    }

    /// Image of a rational parameter, with the representative `φ(τ)` itself
    /// (not rescaled), so that form values stay consistent with pullbacks.
    pub fn eval_raw(&self, p: &ParamPoint) -> Triple {
        let (t, u) = p.homogeneous();
        let (t, u) = (t.to_rational().expect("rational parameter"), u.to_rational().unwrap());
        self.forms.clone().map(|f| f.eval(&t, &u))
    }

    pub fn eval_rational(&self, p: &ParamPoint) -> ProjPoint {
        ProjPoint::from_triple(&self.eval_raw(p)).expect("base-point-free map")
    }

    /// Pullback `f ∘ φ` of degree `d·k`. The zero form signals that the
    /// image lies inside `{f = 0}`.
    pub fn pullback(&self, f: &TernaryForm) -> Result<BinaryForm> {
        if f.is_zero() {
            return Err(Error::ZeroForm);
        }
        let d = self.degree();
        let mut powers: [Vec<BinaryForm>; 3] = Default::default();
        for k in 0..3 {
            powers[k].push(BinaryForm::constant(Rational::one()));
            for e in 1..=f.degree() as usize {
                let next = powers[k][e - 1].mul(&self.forms[k]);
                powers[k].push(next);
            }
        }
        let mut acc = BinaryForm::zero(d * f.degree() as usize);
        for (e, c) in &f.terms {
            let term = powers[0][e[0] as usize]
                .mul(&powers[1][e[1] as usize])
                .mul(&powers[2][e[2] as usize])
                .scale(c);
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    pub fn pullback_line(&self, l: &ProjLine) -> BinaryForm {
        self.pullback(&TernaryForm::from_line(l)).expect("lines are nonzero forms")
    }

    /// Parameters mapping to a rational point, as the common root of the
    /// pullbacks of two lines through it.
    pub fn preimage(&self, p: &ProjPoint) -> Result<ParamPoint> {
        let lines: Vec<ProjLine> = (0..3)
            .filter_map(|i| {
                let mut e: Triple = [Rational::zero(), Rational::zero(), Rational::zero()];
                e[i] = Rational::one();
                ProjLine::from_triple(&cross(p.coords(), &e)).ok()
            })
            .collect();
        let mut g: Option<BinaryForm> = None;
        for l in &lines {
            let f = self.pullback_line(l);
            g = Some(match g {
                None => f.canonical(),
                Some(g) => g.gcd(&f),
            });
        }
        let g = g.unwrap();
        match g.degree() {
            0 => Err(Error::PointNotOnConic { point: p.to_string() }),
            1 => {
                let c = g.coeffs();
                Ok(if c[1].is_zero() {
                    ParamPoint::Infinity
                } else {
                    ParamPoint::rational(-&c[0] / &c[1])
                })
            }
            _ => Err(Error::InvalidInput(format!("{p} has several preimages"))),
        }
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {} : {})", self.forms[0], self.forms[1], self.forms[2])
    }
}

/// Degree-2 parametrization of a smooth conic by the pencil of lines through
/// a rational base point.
///
/// With `A = e_a`, `B = e_b` the first pair of standard basis vectors
/// spanning the plane together with the base point `p`, the parameter
/// `(t:u)` picks `W = u·A + t·B` on the line `AB`, and the image is the second
/// intersection of the line `pW` with the conic:
/// `X = c(W)·p − 2·b(p, W)·W`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicParametrization {
    pub conic: Conic,
    pub base: ProjPoint,
    pub axes: (usize, usize),
    pub map: RationalMap,
}

pub fn parametrize_conic(c: &Conic, base: &ProjPoint) -> Result<ConicParametrization> {
    if !c.contains(base) {
        return Err(Error::PointNotOnConic { point: base.to_string() });
    }
    if !c.is_smooth() {
        return Err(Error::SingularConic { rank: c.rank() });
    }
    let p = base.coords();
    let unit = |i: usize| {
        let mut e: Triple = [Rational::zero(), Rational::zero(), Rational::zero()];
        e[i] = Rational::one();
        e
    };
    let (a, b) = [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .find(|&(a, b)| !dot(&cross(&unit(a), &unit(b)), p).is_zero())
        .unwrap();
    // W(t, u) = u e_a + t e_b as linear forms per coordinate
    let w: [BinaryForm; 3] = std::array::from_fn(|i| {
        if i == a {
            BinaryForm::u()
        } else if i == b {
            BinaryForm::t()
        } else {
            BinaryForm::zero(1)
        }
    });
    let m = c.matrix();
    // c(W) = Σ m_ij W_i W_j, b(p, W) = Σ (M p)_j W_j
    let mut cw = BinaryForm::zero(2);
    for i in 0..3 {
        for j in 0..3 {
            if !m[i][j].is_zero() {
                cw = cw.add(&w[i].mul(&w[j]).scale(&m[i][j]));
            }
        }
    }
    let mp = c.polar(p);
    let mut bw = BinaryForm::zero(1);
    for j in 0..3 {
        bw = bw.add(&w[j].scale(&mp[j]));
    }
    let two = Rational::from_integer(2.into());
    let forms: [BinaryForm; 3] = std::array::from_fn(|i| {
        cw.scale(&p[i]).sub(&bw.mul(&w[i]).scale(&two))
    });
    Ok(ConicParametrization { conic: c.clone(), base: base.clone(), axes: (a, b), map: RationalMap::new(forms)? })
}

impl ConicParametrization {
    /// Parameter of a point of the conic (coordinates in `Q` or `Q(√m)`).
    pub fn param_of(&self, x: &QuadPoint) -> Result<ParamPoint> {
        if !self.conic.eval_quad(x.coords()).is_zero() {
            return Err(Error::PointNotOnConic { point: x.to_string() });
        }
        let p = lift(self.base.coords());
        let joint = cross_quad(&p, x.coords());
        let line = if joint.iter().all(|c| c.is_zero()) {
            self.conic.polar_quad(&p)
        } else {
            joint
        };
        let (a, b) = self.axes;
        let c = 3 - a - b;
        let mut ec = [QuadScalar::zero(), QuadScalar::zero(), QuadScalar::zero()];
        ec[c] = QuadScalar::one();
        let w = cross_quad(&line, &ec);
        Ok(ParamPoint::from_homogeneous(&w[b], &w[a]))
    }

    pub fn param_of_rational(&self, x: &ProjPoint) -> Result<ParamPoint> {
        self.param_of(&QuadPoint::from_rational(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn pt(x: i64, y: i64, z: i64) -> ProjPoint {
        ProjPoint::from_ints(x, y, z)
    }

    fn ln(a: i64, b: i64, c: i64) -> ProjLine {
        ProjLine::from_ints(a, b, c)
    }

    #[test]
    fn canonical_representatives() {
        assert_eq!(ProjPoint::new(q(0), q(-2), q(4)).unwrap(), pt(0, 1, -2));
        assert!(ProjPoint::new(q(0), q(0), q(0)).is_err());
    }

    #[test]
    fn meets() {
        assert_eq!(meet_lines(&ln(1, 0, 0), &ln(0, 1, 0)).unwrap(), pt(0, 0, 1));
        assert_eq!(meet_lines(&ln(0, 1, -1), &ln(0, 1, 1)).unwrap(), pt(1, 0, 0));
        assert_eq!(meet_lines(&ln(1, 0, 0), &ln(2, 0, 0)), Err(Error::IdenticalLines));
    }

    #[test]
    fn conics_through_five_points() {
        let c = conic_through_five(&[pt(1, 0, 0), pt(1, 1, 1), pt(1, -1, 1), pt(1, 2, 4), pt(0, 0, 1)]).unwrap();
        assert_eq!(c, Conic::from_ints([0, 1, 0, 0, -1, 0]));
        let e = conic_through_five(&[pt(0, 0, 1), pt(1, 0, 1), pt(2, 0, 1), pt(3, 0, 1), pt(0, 1, 1)]);
        assert!(matches!(e, Err(Error::DegeneratePoints { .. })));
    }

    #[test]
    fn tangency_residuals() {
        let circle = Conic::from_ints([1, 1, -1, 0, 0, 0]);
        assert_eq!(tangency_residual(&circle, &ln(0, 1, -1)), q(0));
        assert_ne!(tangency_residual(&circle, &ln(0, 0, 1)), q(0));
        assert_ne!(tangency_residual(&circle, &ln(1, 0, 0)), q(0));
    }

    #[test]
    fn tangent_lines() {
        let c = Conic::from_ints([0, 1, 0, 0, -1, 0]);
        assert_eq!(tangent_line_at(&c, &pt(1, 0, 0)).unwrap(), ln(0, 0, 1));
        assert_eq!(tangent_line_at(&c, &pt(1, 1, 1)).unwrap(), ln(1, -2, 1));
        assert!(matches!(tangent_line_at(&c, &pt(1, 1, 0)), Err(Error::PointNotOnConic { .. })));
        let pair = Conic::from_ints([0, 0, 0, 1, 0, 0]);
        assert!(matches!(tangent_line_at(&pair, &pt(1, 0, 0)), Err(Error::SingularConic { rank: 2 })));
    }

    #[test]
    fn veronese_parametrization() {
        let c = Conic::from_ints([0, 1, 0, 0, -1, 0]);
        let par = parametrize_conic(&c, &pt(1, 0, 0)).unwrap();
        let expect = RationalMap::new([
            BinaryForm::from_ints(&[1, 0, 0]),
            BinaryForm::from_ints(&[0, 1, 0]),
            BinaryForm::from_ints(&[0, 0, 1]),
        ])
        .unwrap();
        assert_eq!(par.map, expect);
        assert!(par.map.pullback(&c.as_ternary()).unwrap().is_zero());
        assert!(matches!(parametrize_conic(&c, &pt(1, 1, 0)), Err(Error::PointNotOnConic { .. })));
    }

    #[test]
    fn pullbacks_along_veronese() {
        let c = Conic::from_ints([0, 1, 0, 0, -1, 0]);
        let phi = parametrize_conic(&c, &pt(1, 0, 0)).unwrap().map;
        assert_eq!(phi.pullback_line(&ln(0, 0, 1)), BinaryForm::from_ints(&[0, 0, 1]));
        assert_eq!(phi.pullback_line(&ln(1, 0, 1)), BinaryForm::from_ints(&[1, 0, 1]));
        assert_eq!(phi.pullback(&TernaryForm::zero(2)), Err(Error::ZeroForm));
    }

    #[test]
    fn circle_parametrization_round_trips_parameters() {
        let circle = Conic::from_ints([1, 1, -1, 0, 0, 0]);
        let par = parametrize_conic(&circle, &pt(1, 0, 1)).unwrap();
        assert!(par.map.pullback(&circle.as_ternary()).unwrap().is_zero());
        for tau in [ParamPoint::rational(q(0)), ParamPoint::rational(q(3)), ParamPoint::Infinity] {
            let x = par.map.eval(&tau);
            assert_eq!(par.param_of(&x).unwrap(), tau);
            assert_eq!(par.map.preimage(&x.to_rational().unwrap()).unwrap(), tau);
        }
        assert_eq!(par.param_of_rational(&pt(1, 0, 1)).unwrap(), par.map.preimage(&pt(1, 0, 1)).unwrap());
    }

    #[test]
    fn dual_conic_contains_tangent_lines() {
        let c = Conic::from_ints([0, 1, 0, 0, -1, 0]);
        let d = c.dual().unwrap();
        for p in [pt(1, 0, 0), pt(1, 1, 1), pt(1, 2, 4), pt(0, 0, 1)] {
            let l = tangent_line_at(&c, &p).unwrap();
            assert!(d.eval(l.coords()).is_zero());
        }
    }
}
