//! Counts of rational plane curves: the Kontsevich recursion for `n_d` and
//! characteristic numbers of conics through `k` points tangent to `5 − k`
//! lines.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::binary_form::{BinaryForm, ParamPoint};
use crate::config::{SexticConfiguration, TwoTorsionLabel};
use crate::error::{Error, Result};
use crate::linalg::null_space;
use crate::poly::UniPoly;
use crate::projective::{are_collinear, are_concurrent, meet_lines, Conic, ProjLine, ProjPoint, Triple};
use crate::scalar::{q, sqrt_rational, QuadScalar, Rational};

fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = k as u64;
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// `d ↦ n_d`, the number of rational degree-`d` plane curves through
/// `3d − 1` general points.
pub type CountTable = BTreeMap<u64, BigInt>;

fn kontsevich_with(d_max: u64, reversed: bool) -> CountTable {
    let mut n: CountTable = BTreeMap::new();
    n.insert(1, BigInt::one());
    for d in 2..=d_max {
        let mut parts: Vec<u64> = (1..d).collect();
        if reversed {
            parts.reverse();
        }
        let mut total = BigInt::zero();
        for d1 in parts {
            let d2 = d - d1;
            let (a, b) = (BigInt::from(d1), BigInt::from(d2));
            let w = &a * &a * &b * &b * binomial(3 * d - 4, 3 * d1 as i64 - 2)
                - &a * &a * &a * &b * binomial(3 * d - 4, 3 * d1 as i64 - 1);
            total += &n[&d1] * &n[&d2] * w;
        }
        n.insert(d, total);
    }
    n
}

pub fn kontsevich_counts(d_max: u64) -> Result<CountTable> {
    if d_max == 0 {
        return Err(Error::InvalidInput("d_max must be at least 1".into()));
    }
    Ok(kontsevich_with(d_max, false))
}

/// The same table with the inner sum taken in the opposite order.
pub fn kontsevich_counts_reversed(d_max: u64) -> Result<CountTable> {
    if d_max == 0 {
        return Err(Error::InvalidInput("d_max must be at least 1".into()));
    }
    Ok(kontsevich_with(d_max, true))
}

/// Conics through `points` tangent to `lines`, with five conditions in all.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacteristicQuery {
    pub points: Vec<ProjPoint>,
    pub lines: Vec<ProjLine>,
}

fn degenerate(detail: impl Into<String>) -> Error {
    Error::DegenerateConditions { detail: detail.into() }
}

impl CharacteristicQuery {
    /// Checks the count of conditions and general position: distinct points
    /// with no three collinear, distinct lines with no three concurrent, and
    /// no point on a line.
    pub fn new(points: Vec<ProjPoint>, lines: Vec<ProjLine>) -> Result<Self> {
        let qy = CharacteristicQuery { points, lines };
        qy.check_count()?;
        qy.check_general_position()?;
        Ok(qy)
    }

    fn check_count(&self) -> Result<()> {
        if self.points.len() + self.lines.len() != 5 {
            return Err(Error::InvalidInput(format!(
                "need five conditions, got {} points and {} lines",
                self.points.len(),
                self.lines.len()
            )));
        }
        Ok(())
    }

    fn check_general_position(&self) -> Result<()> {
        let (p, l) = (&self.points, &self.lines);
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] == p[j] {
                    return Err(degenerate(format!("points {} and {} coincide", i + 1, j + 1)));
                }
                for k in j + 1..p.len() {
                    if are_collinear(&p[i], &p[j], &p[k]) {
                        return Err(degenerate(format!("points {}, {}, {} are collinear", i + 1, j + 1, k + 1)));
                    }
                }
            }
        }
        for i in 0..l.len() {
            for j in i + 1..l.len() {
                if l[i] == l[j] {
                    return Err(degenerate(format!("lines {} and {} coincide", i + 1, j + 1)));
                }
                for k in j + 1..l.len() {
                    if are_concurrent(&l[i], &l[j], &l[k]) {
                        return Err(degenerate(format!("lines {}, {}, {} are concurrent", i + 1, j + 1, k + 1)));
                    }
                }
            }
        }
        for (i, pt) in p.iter().enumerate() {
            for (j, ln) in l.iter().enumerate() {
                if ln.contains(pt) {
                    return Err(degenerate(format!("point {} lies on line {}", i + 1, j + 1)));
                }
            }
        }
        Ok(())
    }

    /// Points become lines and lines become points, coordinates unchanged.
    pub fn dual(&self) -> Self {
        CharacteristicQuery {
            points: self.lines.iter().map(|l| ProjPoint::from_triple(l.coords()).unwrap()).collect(),
            lines: self.points.iter().map(|p| ProjLine::from_triple(p.coords()).unwrap()).collect(),
        }
    }
}

/// A solution conic with coefficients in `Q(√m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConicSolution {
    /// `(xx, yy, zz, xy, xz, yz)`, first nonzero entry 1.
    pub coeffs: [QuadScalar; 6],
    pub multiplicity: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacteristicResult {
    pub points: usize,
    pub lines: usize,
    /// Smooth solutions counted with multiplicity.
    pub count: usize,
    /// True when the count was taken on the dual query.
    pub dualized: bool,
    /// Explicit solutions when the system is a pencil.
    pub solutions: Vec<ConicSolution>,
    /// Multiplicity of rank-deficient solutions, reported and not counted.
    pub borderline: usize,
}

pub fn conic_characteristic(query: &CharacteristicQuery) -> Result<usize> {
    Ok(solve_characteristic(query)?.count)
}

pub fn solve_characteristic(query: &CharacteristicQuery) -> Result<CharacteristicResult> {
    query.check_count()?;
    query.check_general_position()?;
    if query.points.len() < 2 {
        let mut r = solve_direct(&query.dual())?;
        r.dualized = true;
        r.points = query.points.len();
        r.lines = query.lines.len();
        return Ok(r);
    }
    solve_direct(query)
}

fn solve_direct(query: &CharacteristicQuery) -> Result<CharacteristicResult> {
    let basis = conics_through(&query.points)?;
    let mut res = CharacteristicResult {
        points: query.points.len(),
        lines: query.lines.len(),
        count: 0,
        dualized: false,
        solutions: Vec::new(),
        borderline: 0,
    };
    match query.points.len() {
        5 => {
            let c = Conic::new(vec_to_six(&basis[0]))?;
            let sol = ConicSolution { coeffs: c.coeffs().clone().map(QuadScalar::rational), multiplicity: 1, rank: c.rank() };
            if sol.rank == 3 {
                res.count = 1;
            } else {
                res.borderline = 1;
            }
            res.solutions.push(sol);
        }
        4 => {
            for sol in pencil_tangent(&basis[0], &basis[1], &query.lines[0])? {
                if sol.rank == 3 {
                    res.count += sol.multiplicity;
                } else {
                    res.borderline += sol.multiplicity;
                }
                res.solutions.push(sol);
            }
        }
        3 => {
            let (count, borderline) = eliminate(|rng| net_system(&basis, &query.lines, rng))?;
            res.count = count;
            res.borderline = borderline;
        }
        2 => {
            let (count, borderline) = eliminate(|rng| web_system(&query.points, &query.lines, rng))?;
            res.count = count;
            res.borderline = borderline;
        }
        _ => unreachable!("dualized above"),
    }
    Ok(res)
}

fn vec_to_six(v: &[Rational]) -> [Rational; 6] {
    std::array::from_fn(|i| v[i].clone())
}

/// Basis of the linear system of conics through the points.
fn conics_through(points: &[ProjPoint]) -> Result<Vec<Vec<Rational>>> {
    let rows: Vec<Vec<Rational>> = points.iter().map(|p| Conic::monomials(p.coords()).to_vec()).collect();
    let ns = null_space(&rows, 6);
    if ns.len() != 6 - points.len() {
        return Err(degenerate(format!("points impose only {} conditions on conics", 6 - ns.len())));
    }
    Ok(ns)
}

/// Weights `w` with `w · v = 2B(P, Q)` for a conic coefficient vector `v`.
fn polar_weights(p: &Triple, r: &Triple) -> [Rational; 6] {
    let two = q(2);
    [
        &two * &p[0] * &r[0],
        &two * &p[1] * &r[1],
        &two * &p[2] * &r[2],
        &p[0] * &r[1] + &p[1] * &r[0],
        &p[0] * &r[2] + &p[2] * &r[0],
        &p[1] * &r[2] + &p[2] * &r[1],
    ]
}

fn dot(w: &[Rational; 6], v: &[Rational]) -> Rational {
    w.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Line products as conic coefficient vectors.
fn line_product(l: &ProjLine, m: &ProjLine) -> Vec<Rational> {
    let (a, b) = (l.coords(), m.coords());
    vec![
        &a[0] * &b[0],
        &a[1] * &b[1],
        &a[2] * &b[2],
        &a[0] * &b[1] + &a[1] * &b[0],
        &a[0] * &b[2] + &a[2] * &b[0],
        &a[1] * &b[2] + &a[2] * &b[1],
    ]
}

fn quad_det3(m: &[[QuadScalar; 3]; 3]) -> QuadScalar {
    let minor = |a: usize, b: usize, c: usize, d: usize| &(&m[1][a] * &m[2][b]) - &(&m[1][c] * &m[2][d]);
    let t0 = &m[0][0] * &minor(1, 2, 2, 1);
    let t1 = &m[0][1] * &minor(0, 2, 2, 0);
    let t2 = &m[0][2] * &minor(0, 1, 1, 0);
    &(&t0 - &t1) + &t2
}

fn quad_rank(c: &[QuadScalar; 6]) -> usize {
    let half = QuadScalar::rational(crate::scalar::ratio(1, 2));
    let h = |x: &QuadScalar| &half * x;
    let m = [
        [c[0].clone(), h(&c[3]), h(&c[4])],
        [h(&c[3]), c[1].clone(), h(&c[5])],
        [h(&c[4]), h(&c[5]), c[2].clone()],
    ];
    if !quad_det3(&m).is_zero() {
        return 3;
    }
    let mut any_minor = false;
    for (r1, r2) in [(0, 1), (0, 2), (1, 2)] {
        for (c1, c2) in [(0, 1), (0, 2), (1, 2)] {
            if !(&(&m[r1][c1] * &m[r2][c2]) - &(&m[r1][c2] * &m[r2][c1])).is_zero() {
                any_minor = true;
            }
        }
    }
    if any_minor {
        2
    } else if c.iter().any(|x| !x.is_zero()) {
        1
    } else {
        0
    }
}

fn normalize_quad(v: [QuadScalar; 6]) -> [QuadScalar; 6] {
    let lead = v.iter().find(|x| !x.is_zero()).cloned().unwrap_or_else(QuadScalar::one).inv();
    v.map(|x| &x * &lead)
}

/// Roots of a nonzero binary quadratic with multiplicities.
fn binary_quadratic_roots(f: &BinaryForm) -> Vec<(ParamPoint, usize)> {
    let (a, b, c) = (f.coeff(0).clone(), f.coeff(1).clone(), f.coeff(2).clone());
    if c.is_zero() {
        if b.is_zero() {
            return vec![(ParamPoint::Infinity, 2)];
        }
        return vec![(ParamPoint::Infinity, 1), (ParamPoint::rational(-&a / &b), 1)];
    }
    let disc = &b * &b - q(4) * &a * &c;
    let two_c = QuadScalar::rational(q(2) * &c);
    if disc.is_zero() {
        return vec![(ParamPoint::rational(-&b / (q(2) * &c)), 2)];
    }
    let s = sqrt_rational(&disc);
    let mb = QuadScalar::rational(-b);
    vec![
        (ParamPoint::Finite(&(&mb + &s) / &two_c), 1),
        (ParamPoint::Finite(&(&mb - &s) / &two_c), 1),
    ]
}

/// Members `u·C0 + t·C1` of a pencil tangent to `l`.
fn pencil_tangent(c0: &[Rational], c1: &[Rational], l: &ProjLine) -> Result<Vec<ConicSolution>> {
    let (p, r) = l.spanning_points();
    let (mp, mr, bw) = (Conic::monomials(&p), Conic::monomials(&r), polar_weights(&p, &r));
    let (a0, a1) = (dot(&mp, c0), dot(&mp, c1));
    let (b0, b1) = (dot(&bw, c0), dot(&bw, c1));
    let (e0, e1) = (dot(&mr, c0), dot(&mr, c1));
    let four = q(4);
    let disc = BinaryForm::new(vec![
        &b0 * &b0 - &four * &a0 * &e0,
        q(2) * &b0 * &b1 - &four * (&a0 * &e1 + &a1 * &e0),
        &b1 * &b1 - &four * &a1 * &e1,
    ]);
    if disc.is_zero() {
        return Err(degenerate("every member of the pencil is tangent to the line"));
    }
    Ok(binary_quadratic_roots(&disc)
        .into_iter()
        .map(|(root, multiplicity)| {
            let (t, u) = root.homogeneous();
            let v: [QuadScalar; 6] = std::array::from_fn(|i| {
                &(&u * &QuadScalar::rational(c0[i].clone())) + &(&t * &QuadScalar::rational(c1[i].clone()))
            });
            let coeffs = normalize_quad(v);
            let rank = quad_rank(&coeffs);
            ConicSolution { coeffs, multiplicity, rank }
        })
        .collect())
}

/// Polynomials in `x, y`: entry `j` is the coefficient of `y^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct BiPoly(Vec<UniPoly>);

impl BiPoly {
    fn zero() -> Self {
        BiPoly(Vec::new())
    }

    fn linear(c: Rational, cx: Rational, cy: Rational) -> Self {
        BiPoly(vec![UniPoly::new(vec![c, cx]), UniPoly::constant(cy)]).trim()
    }

    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(|p| p.is_zero()) {
            self.0.pop();
        }
        self
    }

    fn coeff(&self, j: usize) -> UniPoly {
        self.0.get(j).cloned().unwrap_or_else(UniPoly::zero)
    }

    fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        BiPoly((0..n).map(|j| &self.coeff(j) + &o.coeff(j)).collect()).trim()
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&q(-1)))
    }

    fn scale(&self, c: &Rational) -> Self {
        BiPoly(self.0.iter().map(|p| p.scale(c)).collect()).trim()
    }

    fn mul(&self, o: &Self) -> Self {
        if self.0.is_empty() || o.0.is_empty() {
            return Self::zero();
        }
        let mut out = vec![UniPoly::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        BiPoly(out).trim()
    }

    /// `D^n · P(x, N/D)` for `n ≥ deg_y P`.
    fn substitute_y(&self, num: &UniPoly, den: &UniPoly, n: usize) -> UniPoly {
        let mut out = UniPoly::zero();
        for (j, c) in self.0.iter().enumerate() {
            out = &out + &(&(c * &num.pow(j)) * &den.pow(n - j));
        }
        out
    }
}

/// An affine-linear family of conics `v = V0 + x·V1 + y·V2` restricted to
/// two quadrics `Q1 = Q2 = 0`; the solutions are the sought conics.
struct ChartSystem {
    eqs: [BiPoly; 2],
    /// Conic coefficients as polynomials in `x, y`.
    conic: [BiPoly; 6],
}

fn family_coeffs(v0: &[Rational], v1: &[Rational], v2: &[Rational]) -> [BiPoly; 6] {
    std::array::from_fn(|i| BiPoly::linear(v0[i].clone(), v1[i].clone(), v2[i].clone()))
}

fn weighted(w: &[Rational; 6], conic: &[BiPoly; 6]) -> BiPoly {
    let mut out = BiPoly::zero();
    for i in 0..6 {
        out = out.add(&conic[i].scale(&w[i]));
    }
    out
}

/// Tangency discriminant `b² − 4ac` of the family restricted to `l`.
fn tangency(conic: &[BiPoly; 6], p: &Triple, r: &Triple) -> (BiPoly, BiPoly, BiPoly) {
    (
        weighted(&Conic::monomials(p), conic),
        weighted(&polar_weights(p, r), conic),
        weighted(&Conic::monomials(r), conic),
    )
}

fn random_int(rng: &mut ChaCha8Rng) -> Rational {
    q(rng.gen_range(-9..=9))
}

fn random_combination(basis: &[Vec<Rational>], rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let w: Vec<Rational> = basis.iter().map(|_| random_int(rng)).collect();
    (0..6).map(|i| basis.iter().zip(&w).map(|(b, c)| &b[i] * c).sum()).collect()
}

/// Net through three points: a random affine chart of the `P²` of members.
fn net_system(basis: &[Vec<Rational>], lines: &[ProjLine], rng: &mut ChaCha8Rng) -> Option<ChartSystem> {
    let v: Vec<Vec<Rational>> = (0..3).map(|_| random_combination(basis, rng)).collect();
    let conic = family_coeffs(&v[0], &v[1], &v[2]);
    let eqs = [0, 1].map(|k| {
        let (p, r) = lines[k].spanning_points();
        let (a, b, c) = tangency(&conic, &p, &r);
        b.mul(&b).sub(&a.mul(&c).scale(&q(4)))
    });
    Some(ChartSystem { eqs, conic })
}

/// Web through two points `p, q` with `L = pq`: members
/// `C0 + x·L·M1 + y·L·M2 + e·L²`. The double line `L²` sits at infinity of
/// the chart, and each tangency condition is linear in `e`.
fn web_system(points: &[ProjPoint], lines: &[ProjLine], rng: &mut ChaCha8Rng) -> Option<ChartSystem> {
    let l = crate::projective::join_points(&points[0], &points[1]).ok()?;
    let random_line = |rng: &mut ChaCha8Rng| {
        ProjLine::new(random_int(rng), random_int(rng), random_int(rng)).ok()
    };
    let through = |p: &ProjPoint, rng: &mut ChaCha8Rng| loop {
        let other = ProjPoint::new(random_int(rng), random_int(rng), random_int(rng));
        if let Ok(o) = other {
            if let Ok(m) = crate::projective::join_points(p, &o) {
                return m;
            }
        }
    };
    let ma = through(&points[0], rng);
    let mb = through(&points[1], rng);
    let c0 = line_product(&ma, &mb);
    let v1 = line_product(&l, &random_line(rng)?);
    let v2 = line_product(&l, &random_line(rng)?);
    let v3 = line_product(&l, &l);
    let conic2 = family_coeffs(&c0, &v1, &v2);
    let mut e_solutions = Vec::new();
    for ln in lines {
        let s = meet_lines(&l, ln).ok()?;
        let t = loop {
            let (p, r) = ln.spanning_points();
            let (a, b) = (random_int(rng), random_int(rng));
            let cand: Triple = std::array::from_fn(|k| &a * &p[k] + &b * &r[k]);
            if cand.iter().any(|x| !x.is_zero()) && !l.eval(&cand).is_zero() {
                break cand;
            }
        };
        let (a, b, c) = tangency(&conic2, s.coords(), &t);
        let a0 = a.coeff(0).coeff(0);
        if a.0.len() > 1 || a.coeff(0).degree().unwrap_or(0) > 0 || a0.is_zero() {
            return None;
        }
        let gamma = dot(&Conic::monomials(&t), &v3);
        // b² − 4a(c + γe) = 0
        let e = b.mul(&b).sub(&c.scale(&(q(4) * &a0))).scale(&(q(4) * &a0 * &gamma).recip());
        e_solutions.push(e);
    }
    let eqs = [e_solutions[0].sub(&e_solutions[1]), e_solutions[0].sub(&e_solutions[2])];
    let e1 = &e_solutions[0];
    let conic: [BiPoly; 6] = std::array::from_fn(|i| conic2[i].add(&e1.scale(&v3[i])));
    Some(ChartSystem { eqs, conic })
}

/// Resultant in `y` of two polynomials of `y`-degree at most 2.
fn resultant_y(f: &BiPoly, g: &BiPoly) -> Option<UniPoly> {
    if f.0.len() > 3 || g.0.len() > 3 {
        return None;
    }
    let (a0, a1, a2) = (f.coeff(0), f.coeff(1), f.coeff(2));
    let (b0, b1, b2) = (g.coeff(0), g.coeff(1), g.coeff(2));
    if a2.is_zero() || b2.is_zero() {
        return None;
    }
    let u = &(&a2 * &b0) - &(&a0 * &b2);
    let v = &(&a2 * &b1) - &(&a1 * &b2);
    let w = &(&a1 * &b0) - &(&a0 * &b1);
    Some(&(&u * &u) - &(&v * &w))
}

fn conic_det(c: &[BiPoly; 6]) -> BiPoly {
    // 4·det of the symmetric matrix, kept integral
    let (a, b, cc, d, e, f) = (&c[0], &c[1], &c[2], &c[3], &c[4], &c[5]);
    let t1 = a.mul(b).mul(cc).scale(&q(4));
    let t2 = d.mul(e).mul(f);
    let t3 = a.mul(&f.mul(f));
    let t4 = b.mul(&e.mul(e));
    let t5 = cc.mul(&d.mul(d));
    t1.add(&t2).sub(&t3).sub(&t4).sub(&t5)
}

/// Solves a two-equation chart system by elimination, retrying on
/// non-generic charts. Returns (smooth count, rank-deficient count), both
/// with multiplicity.
fn eliminate<F>(mut build: F) -> Result<(usize, usize)>
where
    F: FnMut(&mut ChaCha8Rng) -> Option<ChartSystem>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b756d6d6572);
    for _ in 0..32 {
        let Some(sys) = build(&mut rng) else { continue };
        let Some(res) = resultant_y(&sys.eqs[0], &sys.eqs[1]) else { continue };
        let Some(deg) = res.degree() else { continue };
        // Bezout: two conics meet in four points; fewer in the chart means
        // a solution escaped to infinity or projections collided
        if deg != 4 || (res.gcd(&res.derivative()).degree() != Some(0) && !distinct_fibres(&sys, &res)) {
            continue;
        }
        // on common roots, y = N/D from the subresultant
        let (f, g) = (&sys.eqs[0], &sys.eqs[1]);
        let num = &(&f.coeff(2) * &g.coeff(0)) - &(&f.coeff(0) * &g.coeff(2));
        let den = &(&f.coeff(1) * &g.coeff(2)) - &(&f.coeff(2) * &g.coeff(1));
        if res.gcd(&den).degree() != Some(0) {
            continue;
        }
        let det = conic_det(&sys.conic);
        let n = det.0.len().saturating_sub(1);
        let det_x = det.substitute_y(&num, &den, n).rem(&res);
        let singular = if det_x.is_zero() { res.clone() } else { res.gcd(&det_x) };
        let bad = multiplicity_in(&res, &singular);
        return Ok((deg - bad, bad));
    }
    Err(degenerate("no generic elimination chart found"))
}

/// Repeated roots of the eliminant are accepted only when the fibre over
/// the root is a single solution, so the multiplicity is the solution's.
fn distinct_fibres(sys: &ChartSystem, res: &UniPoly) -> bool {
    let (f, g) = (&sys.eqs[0], &sys.eqs[1]);
    let den = &(&f.coeff(1) * &g.coeff(2)) - &(&f.coeff(2) * &g.coeff(1));
    let sq = res.gcd(&res.derivative());
    sq.gcd(&den).degree() == Some(0)
}

/// Number of roots of `p`, with multiplicity, that are roots of `g`.
fn multiplicity_in(p: &UniPoly, g: &UniPoly) -> usize {
    if g.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let mut rest = p.clone();
    let mut count = 0;
    loop {
        let c = rest.gcd(g);
        let Some(d) = c.degree().filter(|d| *d > 0) else { break };
        count += d;
        rest = rest.exact_div(&c);
    }
    count
}

/// Random conditions in general position, `k` points and `5 − k` lines.
pub fn random_query(k: usize, seed: u64) -> CharacteristicQuery {
    assert!(k <= 5);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut triple = || [0; 3].map(|_| q(rng.gen_range(-20..=20)));
        let points: Vec<ProjPoint> = (0..k).filter_map(|_| ProjPoint::from_triple(&triple()).ok()).collect();
        let lines: Vec<ProjLine> = (k..5).filter_map(|_| ProjLine::from_triple(&triple()).ok()).collect();
        if let Ok(qy) = CharacteristicQuery::new(points, lines) {
            return qy;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub nodes: Vec<TwoTorsionLabel>,
    pub line: usize,
    /// Solutions with multiplicity, smooth ones counted.
    pub count: usize,
    pub conics: Vec<ConicSolution>,
    pub borderline: usize,
}

/// Conics through four nodes of the configuration tangent to line `l_k`.
pub fn deformation_witness(config: &SexticConfiguration, nodes: &[TwoTorsionLabel; 4], line: usize) -> Result<Witness> {
    if !(1..=6).contains(&line) {
        return Err(Error::InvalidInput(format!("line index {line} out of range 1..6")));
    }
    let pts: Vec<ProjPoint> = nodes.iter().map(|l| config.node(*l).clone()).collect();
    for i in 0..4 {
        for j in i + 1..4 {
            if nodes[i] == nodes[j] {
                return Err(degenerate(format!("node q{} selected twice", nodes[i])));
            }
            for k in j + 1..4 {
                if are_collinear(&pts[i], &pts[j], &pts[k]) {
                    return Err(degenerate(format!("nodes q{}, q{}, q{} are collinear", nodes[i], nodes[j], nodes[k])));
                }
            }
        }
    }
    let basis = conics_through(&pts)?;
    let sols = pencil_tangent(&basis[0], &basis[1], config.line(line))?;
    let count = sols.iter().filter(|s| s.rank == 3).map(|s| s.multiplicity).sum();
    let borderline = sols.iter().filter(|s| s.rank < 3).map(|s| s.multiplicity).sum();
    let conics: Vec<ConicSolution> = sols.into_iter().filter(|s| s.rank == 3).collect();
    if count == 0 {
        return Err(degenerate("no smooth conic satisfies the conditions"));
    }
    Ok(Witness { nodes: nodes.to_vec(), line, count, conics, borderline })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::preset_config;

    #[test]
    fn small_kontsevich_values() {
        let t = kontsevich_counts(5).unwrap();
        let v: Vec<i64> = t.values().map(|x| i64::try_from(x.clone()).unwrap()).collect();
        assert_eq!(v, vec![1, 1, 12, 620, 87304]);
        assert_eq!(t, kontsevich_counts_reversed(5).unwrap());
    }

    #[test]
    fn characteristic_numbers() {
        let expect = [1, 2, 4, 4, 2, 1];
        for k in (0..=5).rev() {
            let qy = random_query(k, 7 + k as u64);
            assert_eq!(conic_characteristic(&qy).unwrap(), expect[5 - k], "k = {k}");
        }
    }

    #[test]
    fn duality_is_symmetric() {
        for k in 0..=5 {
            let qy = random_query(k, 100 + k as u64);
            assert_eq!(conic_characteristic(&qy).unwrap(), conic_characteristic(&qy.dual()).unwrap());
        }
    }

    #[test]
    fn collinear_points_rejected() {
        let pts = vec![
            ProjPoint::from_ints(0, 0, 1),
            ProjPoint::from_ints(1, 0, 1),
            ProjPoint::from_ints(2, 0, 1),
            ProjPoint::from_ints(0, 1, 1),
        ];
        let err = CharacteristicQuery::new(pts, vec![ProjLine::from_ints(1, 1, 5)]).unwrap_err();
        assert!(matches!(err, Error::DegenerateConditions { .. }));
    }

    #[test]
    fn preset_witness() {
        let cfg = preset_config();
        let lab = |i, j| TwoTorsionLabel::new(i, j).unwrap();
        let nodes = [lab(2, 3), lab(3, 4), lab(4, 5), lab(1, 5)];
        let w = deformation_witness(&cfg, &nodes, 1).unwrap();
        assert_eq!(w.count, 2);
        assert_eq!(w.conics.len(), 1);
        assert_eq!(w.conics[0].multiplicity, 2);
        let w6 = deformation_witness(&cfg, &nodes, 6).unwrap();
        assert_eq!(w6.count, 2);
        assert_eq!(w6.conics.len(), 2);
    }

    #[test]
    fn collinear_nodes_rejected() {
        let cfg = preset_config();
        let lab = |i, j| TwoTorsionLabel::new(i, j).unwrap();
        // q12, q13, q14 all lie on l1
        let nodes = [lab(1, 2), lab(1, 3), lab(1, 4), lab(2, 5)];
        assert!(matches!(deformation_witness(&cfg, &nodes, 6), Err(Error::DegenerateConditions { .. })));
    }
}
