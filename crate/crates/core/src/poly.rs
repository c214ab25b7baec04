//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{denominators_lcm, sign_of, QuadScalar, Rational};

/// `coeffs[i]` is the coefficient of `x^i`; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, serde::Serialize)]
pub struct UniPoly {
    #[serde(with = "crate::scalar::rational_vec")]
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    /// `x - r`
    pub fn linear_root(r: &Rational) -> Self {
        Self::new(vec![-r.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(Rational::one() / self.lc()))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_quad(&self, x: &QuadScalar) -> QuadScalar {
        self.coeffs
            .iter()
            .rev()
            .fold(QuadScalar::zero(), |acc, c| &(&acc * x) + &QuadScalar::rational(c.clone()))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `self(other(x))`
    pub fn compose(&self, other: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * other) + &Self::constant(c.clone()))
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let inv_lc = Rational::one() / d.lc();
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &inv_lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn exact_div(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.primitive_part_rational();
        }
        a.monic()
    }

    /// Rescales to keep coefficient growth down inside Euclid; the result is
    /// an associate of `self`.
    fn primitive_part_rational(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let ints = self.primitive_integer_coeffs();
        Self::new(ints.into_iter().map(Rational::from_integer).collect())
    }

    /// Associate with coprime integer coefficients and positive leading term.
    pub fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let l = denominators_lcm(&self.coeffs);
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        ints.into_iter().map(|x| x / &g).collect()
    }

    pub fn primitive(&self) -> Self {
        Self::new(self.primitive_integer_coeffs().into_iter().map(Rational::from_integer).collect())
    }

    /// Yun's algorithm: monic square-free `a_i` with `self = lc · ∏ a_i^i`.
    /// Only non-constant factors are returned, in increasing multiplicity.
    pub fn square_free_factors(&self) -> Vec<(UniPoly, usize)> {
        assert!(!self.is_zero(), "square-free decomposition of zero");
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0);
        let mut c = df.exact_div(&a0);
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            b = b.exact_div(&a);
            c = d.exact_div(&a);
            d = &c - &b.derivative();
            if !a.is_constant() {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }

    /// Product of the distinct monic irreducible factors.
    pub fn square_free_part(&self) -> Self {
        let f = self.monic();
        f.exact_div(&f.gcd(&f.derivative()))
    }

    pub fn sign_at(&self, x: &Rational) -> i32 {
        sign_of(&self.eval(x))
    }

    fn sturm_chain(&self) -> Vec<UniPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            // keep the sign of -r, scale positively
            let neg = -&r;
            let ints = neg.primitive_integer_coeffs();
            let mut p = UniPoly::new(ints.into_iter().map(Rational::from_integer).collect());
            if sign_of(&p.lc()) != sign_of(&neg.lc()) {
                p = -&p;
            }
            chain.push(p);
        }
        chain
    }

    fn sign_variations(chain: &[UniPoly], x: &Rational) -> usize {
        let signs: Vec<i32> = chain.iter().map(|p| p.sign_at(x)).filter(|&s| s != 0).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Cauchy bound on the absolute value of every root.
    pub fn root_bound(&self) -> Rational {
        let lc = self.lc().abs();
        let m = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / &lc)
            .max()
            .unwrap_or_else(Rational::zero);
        m + Rational::one()
    }

    /// Disjoint half-open intervals `(lo, hi]`, each holding exactly one real
    /// root of the square-free part, in increasing order.
    pub fn isolate_real_roots(&self) -> Vec<(Rational, Rational)> {
        let p = self.square_free_part();
        if p.is_constant() {
            return Vec::new();
        }
        let chain = p.sturm_chain();
        let b = p.root_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            let n = Self::sign_variations(&chain, &lo) - Self::sign_variations(&chain, &hi);
            match n {
                0 => {}
                1 => out.push((lo, hi)),
                _ => {
                    let mid = (&lo + &hi) / Rational::from_integer(2.into());
                    stack.push((mid.clone(), hi));
                    stack.push((lo, mid));
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// All rational roots, sorted ascending, without multiplicity.
    pub fn rational_roots(&self) -> Vec<Rational> {
        assert!(!self.is_zero(), "roots of the zero polynomial");
        let mut p = self.square_free_part();
        let mut roots = Vec::new();
        if !p.is_constant() && p.coeff(0).is_zero() {
            roots.push(Rational::zero());
            p = p.exact_div(&UniPoly::x());
        }
        if p.is_constant() {
            return roots;
        }
        let ints = p.primitive_integer_coeffs();
        let lead = Rational::from_integer(ints.last().unwrap().abs());
        let p = UniPoly::new(ints.into_iter().map(Rational::from_integer).collect());
        let chain = p.sturm_chain();
        let two = Rational::from_integer(2.into());
        for (mut lo, mut hi) in p.isolate_real_roots() {
            // a rational root r has lead·r ∈ Z; shrink until at most two
            // integer candidates remain in lead·(lo, hi]
            let mut exact = None;
            while (&hi - &lo) * &lead >= Rational::one() {
                let mid = (&lo + &hi) / &two;
                if p.eval(&mid).is_zero() {
                    exact = Some(mid);
                    break;
                }
                let left = Self::sign_variations(&chain, &lo) - Self::sign_variations(&chain, &mid);
                if left == 1 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            if let Some(r) = exact {
                roots.push(r);
                continue;
            }
            let from = (&lo * &lead).floor().to_integer();
            let to = (&hi * &lead).floor().to_integer();
            let mut k = from;
            while k <= to {
                let cand = Rational::from_integer(k.clone()) / &lead;
                if cand > lo && cand <= hi && p.eval(&cand).is_zero() {
                    roots.push(cand);
                    break;
                }
                k += 1;
            }
        }
        roots.sort();
        roots
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, abs) = (c.is_negative(), c.abs());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = !abs.is_one() || i == 0;
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn add(self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn sub(self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn mul(self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, ratio};

    fn lin(r: Rational) -> UniPoly {
        UniPoly::linear_root(&r)
    }

    #[test]
    fn division_and_gcd() {
        let a = &lin(q(1)) * &lin(q(2));
        let b = &lin(q(2)) * &lin(q(-3));
        assert_eq!(a.gcd(&b), lin(q(2)));
        let (quo, rem) = (&a * &b).div_rem(&a);
        assert!(rem.is_zero());
        assert_eq!(quo, b);
    }

    #[test]
    fn yun_multiplicities() {
        // (x-1)(x+2)^2(x^2+1)^3
        let x2p1 = UniPoly::from_ints(&[1, 0, 1]);
        let f = &(&lin(q(1)) * &lin(q(-2)).pow(2)) * &x2p1.pow(3);
        let sf = f.scale(&q(-5)).square_free_factors();
        assert_eq!(sf, vec![(lin(q(1)), 1), (lin(q(-2)), 2), (x2p1, 3)]);
    }

    #[test]
    fn rational_roots_found_exactly() {
        let f = &(&(&lin(ratio(3, 7)) * &lin(q(-5))) * &UniPoly::from_ints(&[-2, 0, 1])) * &lin(q(0));
        assert_eq!(f.rational_roots(), vec![q(-5), q(0), ratio(3, 7)]);
        assert!(UniPoly::from_ints(&[1, 0, 1]).rational_roots().is_empty());
        // close roots
        let g = &lin(ratio(1000, 1001)) * &lin(ratio(1001, 1002));
        assert_eq!(g.rational_roots(), vec![ratio(1000, 1001), ratio(1001, 1002)]);
    }

    #[test]
    fn isolation_counts_real_roots() {
        // x^3 - 2x has three real roots, two irrational
        let f = UniPoly::from_ints(&[0, -2, 0, 1]);
        let iv = f.isolate_real_roots();
        assert_eq!(iv.len(), 3);
        for (lo, hi) in &iv {
            assert!(lo < hi);
        }
    }

    #[test]
    fn compose_and_eval() {
        let f = UniPoly::from_ints(&[1, 0, 1]);
        let g = UniPoly::from_ints(&[1, 2]);
        assert_eq!(f.compose(&g), UniPoly::from_ints(&[2, 4, 4]));
        assert_eq!(f.eval(&q(3)), q(10));
        assert_eq!(format!("{}", UniPoly::from_ints(&[-1, 0, 2, -1])), "-x^3 + 2*x^2 - 1");
    }
}
