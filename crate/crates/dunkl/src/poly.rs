//! Sparse multivariate polynomials with exact coefficients.
//!
//! `MPoly<C>` is generic over the coefficient ring, so `KPoly` (polynomials in the
//! multiplicities κ_j over ℚ) and `XPoly` (polynomials in x with `KPoly`
//! coefficients) share one implementation. Exponent vectors are stored with
//! trailing zeros trimmed, so constants need no variable count.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{DunklError, Result};

pub type Rational = BigRational;

/// Commutative ring operations needed for polynomial coefficients.
pub trait Coeff: Clone + Eq + Ord + fmt::Debug {
    fn c_zero() -> Self;
    fn c_one() -> Self;
    fn c_is_zero(&self) -> bool;
    fn c_add(&self, other: &Self) -> Self;
    fn c_mul(&self, other: &Self) -> Self;
    fn c_neg(&self) -> Self;
    fn c_from_int(n: i64) -> Self;
}

impl Coeff for BigRational {
    fn c_zero() -> Self {
        Zero::zero()
    }
    fn c_one() -> Self {
        One::one()
    }
    fn c_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn c_add(&self, other: &Self) -> Self {
        self + other
    }
    fn c_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn c_neg(&self) -> Self {
        -self
    }
    fn c_from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Nearest rational with denominator at most `max_den` (continued fractions).
pub fn rat_from_f64(x: f64, max_den: i64) -> Rational {
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        let ai = a as i64;
        let p2 = ai.saturating_mul(p1).saturating_add(p0);
        let q2 = ai.saturating_mul(q1).saturating_add(q0);
        if q2 > max_den || q2 <= 0 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = v - a;
        if frac.abs() < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    rat(p1, q1)
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn exp_of(e: &[u32], i: usize) -> u32 {
    e.get(i).copied().unwrap_or(0)
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MPoly<C> {
    terms: BTreeMap<Vec<u32>, C>,
}

pub type KPoly = MPoly<Rational>;
pub type XPoly = MPoly<KPoly>;

impl<C: Coeff> MPoly<C> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(Vec::new(), c)
    }

    pub fn one() -> Self {
        Self::constant(C::c_one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(C::c_from_int(n))
    }

    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Self::monomial(e, C::c_one())
    }

    pub fn monomial(exp: Vec<u32>, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.c_is_zero() {
            terms.insert(trim(exp), c);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of x^exp.
    pub fn coeff(&self, exp: &[u32]) -> C {
        self.terms.get(&trim(exp.to_vec())).cloned().unwrap_or_else(C::c_zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&[])
    }

    pub fn add_term(&mut self, exp: Vec<u32>, c: C) {
        if c.c_is_zero() {
            return;
        }
        let key = trim(exp);
        let sum = match self.terms.get(&key) {
            Some(old) => old.c_add(&c),
            None => c,
        };
        if sum.c_is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v.c_mul(c));
        }
        out
    }

    /// Largest total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(first) => degs.all(|d| d == first),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// ∂/∂x_i.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            let a = exp_of(e, i);
            if a == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.add_term(f, v.c_mul(&C::c_from_int(a as i64)));
        }
        out
    }

    /// p(x) with x_i replaced by -x_i.
    pub fn flip(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            let c = if exp_of(e, i) % 2 == 1 { v.c_neg() } else { v.clone() };
            out.add_term(e.clone(), c);
        }
        out
    }

    /// Exact division by x_i.
    pub fn div_var(&self, i: usize) -> Result<Self> {
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            if exp_of(e, i) == 0 {
                return Err(DunklError::Consistency(format!("polynomial is not divisible by x{}", i + 1)));
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.add_term(f, v.clone());
        }
        Ok(out)
    }

    /// x^exp · p.
    pub fn shift(&self, exp: &[u32]) -> Self {
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            let n = e.len().max(exp.len());
            let f: Vec<u32> = (0..n).map(|i| exp_of(e, i) + exp_of(exp, i)).collect();
            out.add_term(f, v.clone());
        }
        out
    }

    /// Substitutes polynomials for the variables.
    pub fn compose(&self, subs: &[MPoly<C>]) -> Self {
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            let mut t = Self::constant(v.clone());
            for (i, &a) in e.iter().enumerate() {
                if a > 0 {
                    t = &t * &subs[i].pow(a);
                }
            }
            out = &out + &t;
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> MPoly<D> {
        let mut out = MPoly::<D>::zero();
        for (e, v) in &self.terms {
            out.add_term(e.clone(), f(v));
        }
        out
    }

    /// Evaluates with a caller-supplied coefficient and power map.
    pub fn eval_with<T>(&self, coeff: impl Fn(&C) -> T, point: &[T]) -> T
    where
        T: Clone + Add<Output = T> + Mul<Output = T> + Zero + One,
    {
        let mut acc = T::zero();
        for (e, v) in &self.terms {
            let mut t = coeff(v);
            for (i, &a) in e.iter().enumerate() {
                for _ in 0..a {
                    t = t * point[i].clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    pub fn fmt_with(&self, names: &dyn Fn(usize) -> String, coeff: &dyn Fn(&C) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, v)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a > 0)
                    .map(|(i, &a)| if a == 1 { names(i) } else { format!("{}^{}", names(i), a) })
                    .collect();
                let c = coeff(v);
                if mono.is_empty() {
                    c
                } else if c == "1" {
                    mono.join("*")
                } else {
                    format!("{}*{}", c, mono.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl<C: Coeff> Coeff for MPoly<C> {
    fn c_zero() -> Self {
        MPoly::zero()
    }
    fn c_one() -> Self {
        MPoly::one()
    }
    fn c_is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn c_add(&self, other: &Self) -> Self {
        self + other
    }
    fn c_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn c_neg(&self) -> Self {
        -self
    }
    fn c_from_int(n: i64) -> Self {
        MPoly::from_int(n)
    }
}

impl<C: Coeff> Add for &MPoly<C> {
    type Output = MPoly<C>;
    fn add(self, rhs: &MPoly<C>) -> MPoly<C> {
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.add_term(e.clone(), v.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for &MPoly<C> {
    type Output = MPoly<C>;
    fn sub(self, rhs: &MPoly<C>) -> MPoly<C> {
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.add_term(e.clone(), v.c_neg());
        }
        out
    }
}

impl<C: Coeff> Mul for &MPoly<C> {
    type Output = MPoly<C>;
    fn mul(self, rhs: &MPoly<C>) -> MPoly<C> {
        let mut out = MPoly::zero();
        for (a, u) in &self.terms {
            for (b, v) in &rhs.terms {
                let n = a.len().max(b.len());
                let e: Vec<u32> = (0..n).map(|i| exp_of(a, i) + exp_of(b, i)).collect();
                out.add_term(e, u.c_mul(v));
            }
        }
        out
    }
}

impl<C: Coeff> Neg for &MPoly<C> {
    type Output = MPoly<C>;
    fn neg(self) -> MPoly<C> {
        let mut out = MPoly::zero();
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v.c_neg());
        }
        out
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl<C: Coeff> $tr for MPoly<C> {
            type Output = MPoly<C>;
            fn $m(self, rhs: MPoly<C>) -> MPoly<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl<C: Coeff> Neg for MPoly<C> {
    type Output = MPoly<C>;
    fn neg(self) -> MPoly<C> {
        -&self
    }
}

impl<C: Coeff> fmt::Debug for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl KPoly {
    /// The formal multiplicity κ_j.
    pub fn kappa(j: usize) -> Self {
        Self::var(j)
    }

    pub fn rational(r: Rational) -> Self {
        Self::constant(r)
    }

    pub fn eval_f64(&self, kappas: &[f64]) -> f64 {
        self.eval_with(rat_to_f64, kappas)
    }

    pub fn eval_rational(&self, kappas: &[Rational]) -> Rational {
        self.eval_with(|c| c.clone(), kappas)
    }

    /// Leading rational coefficient (of the largest exponent vector).
    pub fn leading(&self) -> Option<Rational> {
        self.terms.values().next_back().cloned()
    }
}

impl fmt::Display for KPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.fmt_with(&|i| format!("k{}", i + 1), &|c| {
            let s = fmt_rational(c);
            if c.is_negative() || !c.is_integer() {
                format!("({s})")
            } else {
                s
            }
        });
        write!(f, "{s}")
    }
}

impl XPoly {
    pub fn x(i: usize) -> Self {
        Self::var(i)
    }

    /// Lifts a polynomial with rational coefficients.
    pub fn from_rational(p: &MPoly<Rational>) -> Self {
        p.map_coeffs(|c| KPoly::rational(c.clone()))
    }

    /// |x|² in d variables.
    pub fn norm_sq(d: usize) -> Self {
        let mut out = Self::zero();
        for i in 0..d {
            let mut e = vec![0; i + 1];
            e[i] = 2;
            out.add_term(e, KPoly::one());
        }
        out
    }

    /// Substitutes numeric multiplicities, leaving a polynomial in x over ℚ.
    pub fn at_kappa(&self, kappas: &[Rational]) -> MPoly<Rational> {
        self.map_coeffs(|c| c.eval_rational(kappas))
    }

    pub fn eval_f64(&self, kappas: &[f64], x: &[f64]) -> f64 {
        self.eval_with(|c| c.eval_f64(kappas), x)
    }

    pub fn eval_rational(&self, kappas: &[Rational], x: &[Rational]) -> Rational {
        self.eval_with(|c| c.eval_rational(kappas), x)
    }
}

impl fmt::Display for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.fmt_with(&|i| format!("x{}", i + 1), &|c| {
            if c.len() == 1 && c.constant_term() == Rational::one() {
                "1".into()
            } else {
                format!("[{c}]")
            }
        });
        write!(f, "{s}")
    }
}

/// Polynomial in r² given by coefficients a_n of r^{2n}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadialPoly {
    pub coeffs: Vec<KPoly>,
}

impl RadialPoly {
    pub fn new(coeffs: Vec<KPoly>) -> Self {
        Self { coeffs }
    }

    pub fn from_rationals(c: &[Rational]) -> Self {
        Self { coeffs: c.iter().cloned().map(KPoly::rational).collect() }
    }

    /// D_r = r⁻¹ d/dr, so D_r r^{2n} = 2n r^{2n-2}.
    pub fn d_r(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, c)| c.scale(&Rational::c_from_int(2 * n as i64)))
            .collect();
        Self { coeffs }
    }

    pub fn d_r_pow(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.d_r())
    }

    /// As a polynomial in x_1..x_d.
    pub fn to_xpoly(&self, d: usize) -> XPoly {
        let r2 = XPoly::norm_sq(d);
        let mut out = XPoly::zero();
        let mut pw = XPoly::one();
        for c in &self.coeffs {
            out = &out + &pw.scale(c);
            pw = &pw * &r2;
        }
        out
    }

    pub fn eval_f64(&self, kappas: &[f64], r: f64) -> f64 {
        let r2 = r * r;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r2 + c.eval_f64(kappas))
    }
}
