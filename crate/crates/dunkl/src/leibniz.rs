//! Exact higher-order Leibniz rules for Dunkl derivatives.
//!
//! Averaging operators A_ν m(x) = Σ_{λ∈R∪{0}} ν(λ) m(σ_λ x) are represented by
//! [`NuFunction`]s whose values are polynomials in the formal multiplicities, so
//! every identity produced here holds for all κ at once. The expansion of
//! 𝒟^α(m·g) for radial g = h(|·|) is built by the same induction that proves
//! it: Leibniz for a G-invariant factor, the monomial commutator, and pushing
//! averaging operators through Dunkl derivatives.

use num_complex::Complex64;
use num_traits::One;
use std::collections::BTreeMap;
use std::fmt;

use crate::dunkl_core::{dunkl_derivative_multi, ScalarField};
use crate::error::{DunklError, Result};
use crate::poly::{rat, Coeff, KPoly, MPoly, RadialPoly, Rational, XPoly};
use crate::quadrature::axis_rule;
use crate::root_system::ReflectionGroupSpec;

pub const DEFAULT_MAX_ORDER: usize = 4;

fn pad(e: &[u32], d: usize) -> Vec<u32> {
    (0..d).map(|i| e.get(i).copied().unwrap_or(0)).collect()
}

fn order(a: &[u32]) -> usize {
    a.iter().map(|&v| v as usize).sum()
}

fn axes_of(alpha: &[u32]) -> Vec<usize> {
    alpha.iter().enumerate().flat_map(|(j, &a)| std::iter::repeat_n(j, a as usize)).collect()
}

/// Index of a member of R ∪ {0}: 0 is the identity, then the roots in the
/// order (+√2e_1, -√2e_1, +√2e_2, ...).
fn slot_axis(slot: usize) -> Option<usize> {
    if slot == 0 {
        None
    } else {
        Some((slot - 1) / 2)
    }
}

/// Entry (j, l) of the matrix of σ_slot.
fn sigma_entry(slot: usize, j: usize, l: usize) -> i64 {
    let diag = i64::from(j == l);
    match slot_axis(slot) {
        Some(a) if j == a && l == a => -1,
        _ => diag,
    }
}

/// λ_j for a root slot, divided by √2.
fn root_sign_component(slot: usize, j: usize) -> i64 {
    match slot_axis(slot) {
        Some(a) if a == j => {
            if (slot - 1) % 2 == 0 {
                1
            } else {
                -1
            }
        }
        _ => 0,
    }
}

/// ν : R ∪ {0} → ℚ[κ].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NuFunction {
    pub values: Vec<KPoly>,
}

impl NuFunction {
    pub fn zero(d: usize) -> Self {
        Self { values: vec![KPoly::zero(); 2 * d + 1] }
    }

    /// δ_0, so that A_ν is the identity.
    pub fn identity(d: usize) -> Self {
        let mut v = Self::zero(d);
        v.values[0] = KPoly::one();
        v
    }

    pub fn d(&self) -> usize {
        (self.values.len() - 1) / 2
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Some(c) when ν = c·δ_0.
    pub fn identity_multiple(&self) -> Option<KPoly> {
        if self.values[1..].iter().all(|v| v.is_zero()) {
            Some(self.values[0].clone())
        } else {
            None
        }
    }

    /// Σ_λ ν(λ); A_ν acts on radial functions as multiplication by this.
    pub fn total(&self) -> KPoly {
        self.values.iter().fold(KPoly::zero(), |a, b| &a + b)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &KPoly) -> Self {
        Self { values: self.values.iter().map(|v| v * c).collect() }
    }

    /// Splits off a rational factor so that the first nonzero value has leading
    /// coefficient 1.
    fn normalized(&self) -> (Rational, Self) {
        let lead = self.values.iter().find(|v| !v.is_zero()).and_then(|v| v.leading());
        match lead {
            Some(r) if r != Rational::one() => {
                let inv = KPoly::rational(Rational::one() / &r);
                (r, self.scale(&inv))
            }
            _ => (Rational::one(), self.clone()),
        }
    }

    pub fn numeric(&self, kappas: &[f64]) -> Vec<f64> {
        self.values.iter().map(|v| v.eval_f64(kappas)).collect()
    }

    fn slot_name(slot: usize) -> String {
        match slot_axis(slot) {
            None => "0".into(),
            Some(a) => format!("{}e{}", if (slot - 1) % 2 == 0 { "+" } else { "-" }, a + 1),
        }
    }
}

impl fmt::Display for NuFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(s, v)| format!("{}:{}", Self::slot_name(s), v))
            .collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

impl fmt::Debug for NuFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A_{ν_1}∘…∘A_{ν_n}, outermost first; empty means the identity.
pub type AvgChain = Vec<NuFunction>;

/// A_ν p for an exact polynomial p.
pub fn apply_avg_poly(nu: &NuFunction, p: &XPoly) -> XPoly {
    let mut out = XPoly::zero();
    for (slot, v) in nu.values.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let moved = match slot_axis(slot) {
            None => p.clone(),
            Some(a) => p.flip(a),
        };
        out = &out + &moved.scale(v);
    }
    out
}

pub fn apply_chain_poly(chain: &[NuFunction], p: &XPoly) -> XPoly {
    chain.iter().rev().fold(p.clone(), |acc, nu| apply_avg_poly(nu, &acc))
}

/// A_ν f for a numeric field, with κ taken from `spec`.
pub fn apply_avg_field(spec: &ReflectionGroupSpec, nu: &NuFunction, f: &ScalarField) -> ScalarField {
    if f.is_radial {
        let c = nu.total().eval_f64(&spec.kappas);
        return f.scaled(Complex64::new(c, 0.0));
    }
    let weights = nu.numeric(&spec.kappas);
    let f = f.clone();
    ScalarField::new(move |x| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (slot, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let v = match slot_axis(slot) {
                None => f.eval(x),
                Some(a) => {
                    let mut y = x.to_vec();
                    y[a] = -y[a];
                    f.eval(&y)
                }
            };
            acc += w * v;
        }
        acc
    })
}

pub fn apply_chain_field(spec: &ReflectionGroupSpec, chain: &[NuFunction], f: &ScalarField) -> ScalarField {
    chain.iter().rev().fold(f.clone(), |acc, nu| apply_avg_field(spec, nu, &acc))
}

fn merge(map: &mut BTreeMap<Vec<u32>, NuFunction>, key: Vec<u32>, nu: NuFunction) {
    let entry = map.entry(key).or_insert_with(|| NuFunction::zero(nu.d()));
    *entry = entry.add(&nu);
}

fn nonzero(map: BTreeMap<Vec<u32>, NuFunction>) -> Vec<(Vec<u32>, NuFunction)> {
    map.into_iter().filter(|(_, nu)| !nu.is_zero()).collect()
}

/// A_ν(x^α m) = Σ_{|β|=|α|} x^β A_{ν_β} m, from expanding Π_j (σ_λ x)_j^{α_j}.
pub fn avg_of_monomial(nu: &NuFunction, alpha: &[u32]) -> Vec<(Vec<u32>, NuFunction)> {
    let d = nu.d();
    let mut out: BTreeMap<Vec<u32>, NuFunction> = BTreeMap::new();
    for (slot, v) in nu.values.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let mut prod = MPoly::<Rational>::one();
        for (j, &a) in alpha.iter().enumerate() {
            let mut row = MPoly::<Rational>::zero();
            for l in 0..d {
                let s = sigma_entry(slot, j, l);
                if s != 0 {
                    row = &row + &MPoly::var(l).scale(&Rational::c_from_int(s));
                }
            }
            prod = &prod * &row.pow(a);
        }
        for (beta, c) in prod.terms() {
            let mut nb = NuFunction::zero(d);
            nb.values[slot] = v.scale(c);
            merge(&mut out, pad(beta, d), nb);
        }
    }
    nonzero(out)
}

/// ν with 𝒟_j(x_l m) - x_l 𝒟_j m = A_ν m: ν(0) = δ_{jl}, ν(λ) = κ(λ)λ_jλ_l/2.
pub fn commutator_first_order(d: usize, j: usize, l: usize) -> NuFunction {
    let mut nu = NuFunction::zero(d);
    if j == l {
        nu.values[0] = KPoly::one();
    }
    for slot in 1..=2 * d {
        let a = slot_axis(slot).unwrap_or(0);
        // λ_jλ_l = 2·s_j·s_l with s the sign components
        let prod = 2 * root_sign_component(slot, j) * root_sign_component(slot, l);
        if prod != 0 {
            nu.values[slot] = KPoly::kappa(a).scale(&rat(prod, 2));
        }
    }
    nu
}

/// 𝒟_j(x^α m) - x^α 𝒟_j m = Σ_{|β|=|α|-1} x^β A_{ν_j(β)} m.
pub fn commutator_monomial(d: usize, j: usize, alpha: &[u32]) -> Vec<(Vec<u32>, NuFunction)> {
    let alpha = pad(alpha, d);
    let Some(k) = alpha.iter().position(|&a| a > 0) else {
        return Vec::new();
    };
    let mut prev = alpha.clone();
    prev[k] -= 1;
    let mut out: BTreeMap<Vec<u32>, NuFunction> = BTreeMap::new();
    for (beta, nu) in commutator_monomial(d, j, &prev) {
        let mut b = beta;
        b[k] += 1;
        merge(&mut out, b, nu);
    }
    for (beta, nu) in avg_of_monomial(&commutator_first_order(d, j, k), &prev) {
        merge(&mut out, beta, nu);
    }
    nonzero(out)
}

/// A_ν∘𝒟^γ = Σ 𝒟^{γ'}∘A_{ν'}, using A_ν𝒟_j = Σ_l 𝒟_l A_{ν_{j,l}} with
/// ν_{j,l}(λ) = ν(λ)(e_l·σ_λ e_j). Successive pushes compose into a single
/// averaging operator per output multi-index.
pub fn push_derivative_through_chain(gamma: &[u32], nu: &NuFunction) -> Vec<(Vec<u32>, NuFunction)> {
    let d = nu.d();
    let mut cur: BTreeMap<Vec<u32>, NuFunction> = BTreeMap::new();
    cur.insert(vec![0; d], nu.clone());
    for j in axes_of(&pad(gamma, d)) {
        let mut next: BTreeMap<Vec<u32>, NuFunction> = BTreeMap::new();
        for (g, v) in &cur {
            for l in 0..d {
                let mut moved = NuFunction::zero(d);
                for (slot, val) in v.values.iter().enumerate() {
                    let s = sigma_entry(slot, l, j);
                    if s != 0 && !val.is_zero() {
                        moved.values[slot] = val.scale(&Rational::c_from_int(s));
                    }
                }
                if !moved.is_zero() {
                    let mut g2 = g.clone();
                    g2[l] += 1;
                    merge(&mut next, g2, moved);
                }
            }
        }
        cur = next;
    }
    nonzero(cur)
}

/// One summand coeff · x^β · 𝒟^γ(A_chain m) · D_r^k h.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeibnizTerm {
    pub coeff: KPoly,
    pub beta: Vec<u32>,
    pub gamma: Vec<u32>,
    pub chain: AvgChain,
    pub k: usize,
}

impl LeibnizTerm {
    /// 2k + |γ| - |β|.
    pub fn weight(&self) -> i64 {
        2 * self.k as i64 + order(&self.gamma) as i64 - order(&self.beta) as i64
    }
}

fn fmt_multi(name: &str, a: &[u32]) -> String {
    format!("{}({})", name, a.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
}

impl fmt::Display for LeibnizTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let chain: String = self.chain.iter().map(|n| format!("A{n} ")).collect();
        write!(
            f,
            "[{}] {} {}[{}m] Dr^{} h",
            self.coeff,
            fmt_multi("x^", &self.beta),
            fmt_multi("D^", &self.gamma),
            chain,
            self.k
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeibnizExpansion {
    pub alpha: Vec<u32>,
    pub terms: Vec<LeibnizTerm>,
}

type TermKey = (Vec<u32>, Vec<u32>, AvgChain, usize);

fn insert_term(map: &mut BTreeMap<TermKey, KPoly>, coeff: KPoly, beta: Vec<u32>, gamma: Vec<u32>, chain: AvgChain, k: usize) {
    let d = beta.len();
    let mut scalar = coeff;
    let mut kept = Vec::with_capacity(chain.len());
    for nu in chain {
        if nu.is_zero() {
            return;
        }
        if let Some(c) = nu.identity_multiple() {
            scalar = &scalar * &c;
            continue;
        }
        let (r, n) = nu.normalized();
        scalar = scalar.scale(&r);
        kept.push(n);
    }
    if scalar.is_zero() {
        return;
    }
    debug_assert_eq!(gamma.len(), d);
    let key = (beta, gamma, kept, k);
    let entry = map.entry(key.clone()).or_insert_with(KPoly::zero);
    *entry = &*entry + &scalar;
    if entry.is_zero() {
        map.remove(&key);
    }
}

fn check_order(alpha: &[u32], d: usize, max_order: usize) -> Result<()> {
    if alpha.len() != d {
        return Err(DunklError::Domain(format!("multi-index has length {}, expected {d}", alpha.len())));
    }
    if order(alpha) > max_order {
        return Err(DunklError::MaxOrder { got: order(alpha), max: max_order });
    }
    Ok(())
}

/// 𝒟^α(m·g) for abstract m and radial g = h(|x|).
pub fn leibniz_expand(d: usize, alpha: &[u32], max_order: usize) -> Result<LeibnizExpansion> {
    check_order(alpha, d, max_order)?;
    let mut cur: BTreeMap<TermKey, KPoly> = BTreeMap::new();
    cur.insert((vec![0; d], vec![0; d], Vec::new(), 0), KPoly::one());
    for j in axes_of(alpha).into_iter().rev() {
        let mut next: BTreeMap<TermKey, KPoly> = BTreeMap::new();
        for ((beta, gamma, chain, k), c) in cur {
            let mut b1 = beta.clone();
            b1[j] += 1;
            insert_term(&mut next, c.clone(), b1, gamma.clone(), chain.clone(), k + 1);
            let mut g1 = gamma.clone();
            g1[j] += 1;
            insert_term(&mut next, c.clone(), beta.clone(), g1, chain.clone(), k);
            for (b2, nu) in commutator_monomial(d, j, &beta) {
                for (g2, nu2) in push_derivative_through_chain(&gamma, &nu) {
                    let mut ch = Vec::with_capacity(chain.len() + 1);
                    ch.push(nu2);
                    ch.extend(chain.iter().cloned());
                    insert_term(&mut next, c.clone(), b2.clone(), g2, ch, k);
                }
            }
        }
        cur = next;
    }
    let terms = cur
        .into_iter()
        .map(|((beta, gamma, chain, k), coeff)| LeibnizTerm { coeff, beta, gamma, chain, k })
        .collect();
    let exp = LeibnizExpansion { alpha: alpha.to_vec(), terms };
    exp.check_constraints()?;
    Ok(exp)
}

impl LeibnizExpansion {
    pub fn check_constraints(&self) -> Result<()> {
        let a = order(&self.alpha) as i64;
        for t in &self.terms {
            if t.weight() != a {
                return Err(DunklError::Consistency(format!("term {t} has 2k+|γ|-|β| = {} ≠ {a}", t.weight())));
            }
        }
        Ok(())
    }

    /// Exact value for polynomial m and h polynomial in r².
    pub fn evaluate_poly(&self, m: &XPoly, h: &RadialPoly) -> Result<XPoly> {
        let d = self.alpha.len();
        let mut out = XPoly::zero();
        let mut chained: BTreeMap<&AvgChain, XPoly> = BTreeMap::new();
        for t in &self.terms {
            let base = chained.entry(&t.chain).or_insert_with(|| apply_chain_poly(&t.chain, m)).clone();
            let dm = dunkl_derivative_poly_multi(&base, &t.gamma)?;
            let dh = h.d_r_pow(t.k).to_xpoly(d);
            let term = (&dm * &dh).shift(&t.beta).scale(&t.coeff);
            out = &out + &term;
        }
        Ok(out)
    }

    /// Numeric value at x for a field m; `dh(k, r)` returns D_r^k h(r).
    pub fn evaluate_field(
        &self,
        spec: &ReflectionGroupSpec,
        m: &ScalarField,
        dh: &dyn Fn(usize, f64) -> Complex64,
        x: &[f64],
    ) -> Result<Complex64> {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let mc = apply_chain_field(spec, &t.chain, m);
            let dm = dunkl_derivative_multi(spec, &mc, &t.gamma, x)?;
            let mono: f64 = t.beta.iter().zip(x).map(|(&b, &xi)| xi.powi(b as i32)).product();
            acc += t.coeff.eval_f64(&spec.kappas) * mono * dm * dh(t.k, r);
        }
        Ok(acc)
    }

    /// Substitutes rational multiplicities and recombines terms.
    pub fn specialize(&self, kappas: &[Rational]) -> LeibnizExpansion {
        let mut map: BTreeMap<TermKey, KPoly> = BTreeMap::new();
        for t in &self.terms {
            let fix = |p: &KPoly| KPoly::rational(p.eval_rational(kappas));
            let chain = t.chain.iter().map(|n| NuFunction { values: n.values.iter().map(fix).collect() }).collect();
            insert_term(&mut map, fix(&t.coeff), t.beta.clone(), t.gamma.clone(), chain, t.k);
        }
        let terms = map
            .into_iter()
            .map(|((beta, gamma, chain, k), coeff)| LeibnizTerm { coeff, beta, gamma, chain, k })
            .collect();
        LeibnizExpansion { alpha: self.alpha.clone(), terms }
    }
}

impl fmt::Display for LeibnizExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (m g) = sum of {} terms", fmt_multi("D^", &self.alpha), self.terms.len())?;
        for t in &self.terms {
            writeln!(f, "  {t}")?;
        }
        Ok(())
    }
}

/// 𝒟_j p from the definition: ∂_j p + Σ_λ (κ(λ)/2) λ_j (p - p∘σ_λ)/⟨λ,x⟩.
/// For λ = ±√2e_a the quotient λ_j/⟨λ,x⟩ is δ_{ja}/x_a.
pub fn dunkl_derivative_poly(p: &XPoly, d: usize, j: usize) -> Result<XPoly> {
    let mut out = p.partial(j);
    let diff = p - &p.flip(j);
    if !diff.is_zero() {
        let q = diff.div_var(j)?;
        let half = KPoly::kappa(j).scale(&rat(1, 2));
        for _sign in [1, -1] {
            out = &out + &q.scale(&half);
        }
    }
    debug_assert!(j < d);
    Ok(out)
}

pub fn dunkl_derivative_poly_multi(p: &XPoly, alpha: &[u32]) -> Result<XPoly> {
    let d = alpha.len();
    let mut q = p.clone();
    for j in axes_of(alpha) {
        q = dunkl_derivative_poly(&q, d, j)?;
    }
    Ok(q)
}

/// P(x) · D_r^k m₀ · D_r^ℓ h.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadialLeibnizTerm {
    pub poly: XPoly,
    pub degree: u32,
    pub k: usize,
    pub l: usize,
}

impl fmt::Display for RadialLeibnizTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}(x) Dr^{} m0 Dr^{} h, P = {}", self.degree, self.k, self.l, self.poly)
    }
}

/// 𝒟^α(m·g) for radial m = m₀(|x|) and g = h(|x|).
pub fn radial_leibniz_expand(d: usize, alpha: &[u32], max_order: usize) -> Result<Vec<RadialLeibnizTerm>> {
    check_order(alpha, d, max_order)?;
    let mut cur: BTreeMap<(usize, usize), XPoly> = BTreeMap::new();
    cur.insert((0, 0), XPoly::one());
    for j in axes_of(alpha).into_iter().rev() {
        let mut next: BTreeMap<(usize, usize), XPoly> = BTreeMap::new();
        let mut add = |key: (usize, usize), p: XPoly| {
            let e = next.entry(key).or_insert_with(XPoly::zero);
            *e = &*e + &p;
        };
        for ((k, l), p) in cur {
            add((k, l), dunkl_derivative_poly(&p, d, j)?);
            let xp = &p * &XPoly::x(j);
            add((k + 1, l), xp.clone());
            add((k, l + 1), xp);
        }
        cur = next.into_iter().filter(|(_, p)| !p.is_zero()).collect();
    }
    let a = order(alpha);
    let mut out = Vec::new();
    for ((k, l), poly) in cur {
        let degree = poly.degree();
        if !poly.is_homogeneous() || 2 * (k + l) as i64 - degree as i64 != a as i64 || k + l > a {
            return Err(DunklError::Consistency(format!("radial term (k={k}, l={l}) breaks 2(k+l)-j = |α|")));
        }
        out.push(RadialLeibnizTerm { poly, degree, k, l });
    }
    Ok(out)
}

/// Exact value of a radial expansion for m₀, h polynomial in r².
pub fn evaluate_radial_poly(terms: &[RadialLeibnizTerm], d: usize, m0: &RadialPoly, h: &RadialPoly) -> XPoly {
    terms.iter().fold(XPoly::zero(), |acc, t| {
        let v = &(&t.poly * &m0.d_r_pow(t.k).to_xpoly(d)) * &h.d_r_pow(t.l).to_xpoly(d);
        &acc + &v
    })
}

/// Numeric value of a radial expansion; `dm(k, r)` and `dh(l, r)` give D_r^k m₀ and D_r^ℓ h.
pub fn evaluate_radial_f64(
    terms: &[RadialLeibnizTerm],
    kappas: &[f64],
    x: &[f64],
    dm: &dyn Fn(usize, f64) -> Complex64,
    dh: &dyn Fn(usize, f64) -> Complex64,
) -> Complex64 {
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    terms.iter().map(|t| t.poly.eval_f64(kappas, x) * dm(t.k, r) * dh(t.l, r)).sum()
}

/// Exponent bookkeeping for 𝒟^α(m·h_t) with h_t(r) = r^{2K}e^{-tr²}, |α| = K.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayCertificate {
    pub order: usize,
    /// Power of |ξ| bounding each term before the Gaussian factor.
    pub term_exponents: Vec<i64>,
    pub amplitude_exponent: i64,
    /// Power of |ξ| in the squared integrand.
    pub squared_exponent: i64,
    /// Power of t in ∫|ξ|^{squared}e^{-2at|ξ|²}h_κ² dξ.
    pub t_exponent: f64,
    /// Gaussian rate: |D_r^j h_t(r)| ≤ C r^{2K-2j} e^{-a t r²} holds for any a < 1.
    pub a: f64,
}

fn certify(order_k: usize, exps: Vec<i64>, d_kappa: f64) -> Result<DecayCertificate> {
    let k = order_k as i64;
    if let Some(bad) = exps.iter().find(|&&e| e != k) {
        return Err(DunklError::Consistency(format!("term exponent {bad} differs from |α| = {k}")));
    }
    Ok(DecayCertificate {
        order: order_k,
        term_exponents: exps,
        amplitude_exponent: k,
        squared_exponent: 2 * k,
        t_exponent: -(k as f64) - d_kappa / 2.0,
        a: 0.5,
    })
}

/// Uses |x^β𝒟^γ m_ℓ| ≲ |ξ|^{|β|-|γ|} and |D_r^k h_t| ≲ |ξ|^{2K-2k}e^{-at|ξ|²}.
pub fn decay_check(exp: &LeibnizExpansion, d_kappa: f64) -> Result<DecayCertificate> {
    exp.check_constraints()?;
    let kk = order(&exp.alpha) as i64;
    let exps = exp
        .terms
        .iter()
        .map(|t| order(&t.beta) as i64 - order(&t.gamma) as i64 + 2 * kk - 2 * t.k as i64)
        .collect();
    certify(kk as usize, exps, d_kappa)
}

/// Radial case: |D_r^n m₀| ≲ |ξ|^{-2n}, so a term contributes j - 2n + 2K - 2ℓ.
pub fn decay_check_radial(terms: &[RadialLeibnizTerm], alpha_order: usize, d_kappa: f64) -> Result<DecayCertificate> {
    let kk = alpha_order as i64;
    let exps = terms
        .iter()
        .map(|t| t.degree as i64 - 2 * t.k as i64 + 2 * kk - 2 * t.l as i64)
        .collect();
    certify(alpha_order, exps, d_kappa)
}

/// ∫|ξ|^p e^{-2at|ξ|²} h_κ²(ξ) dξ by tensor quadrature.
pub fn gaussian_moment(spec: &ReflectionGroupSpec, p: f64, a: f64, t: f64, n: usize) -> Result<f64> {
    let l = ((p + 60.0) / (2.0 * a * t)).sqrt();
    let rules: Vec<(Vec<f64>, Vec<f64>)> =
        spec.kappas.iter().map(|&k| axis_rule(n, l, k)).collect::<Result<_>>()?;
    let mut total = 0.0;
    let mut idx = vec![0usize; spec.d];
    loop {
        let mut r2 = 0.0;
        let mut w = 1.0;
        for (ax, &i) in idx.iter().enumerate() {
            r2 += rules[ax].0[i] * rules[ax].0[i];
            w *= rules[ax].1[i];
        }
        total += w * r2.powf(p / 2.0) * (-2.0 * a * t * r2).exp();
        let mut ax = 0;
        loop {
            if ax == spec.d {
                return Ok(total);
            }
            idx[ax] += 1;
            if idx[ax] < n {
                break;
            }
            idx[ax] = 0;
            ax += 1;
        }
    }
}

/// Least-squares slope of log moment against log t.
pub fn gaussian_moment_slope(spec: &ReflectionGroupSpec, p: f64, a: f64, ts: &[f64]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = ts
        .iter()
        .map(|&t| Ok((t.ln(), gaussian_moment(spec, p, a, t, 96)?.ln())))
        .collect::<Result<_>>()?;
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(sxy / sxx)
}

/// Outcome of comparing expansions against direct exact differentiation.
#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Multi-indices of length d with |α| = n.
pub fn multi_indices(d: usize, n: usize) -> Vec<Vec<u32>> {
    if d == 1 {
        return vec![vec![n as u32]];
    }
    let mut out = Vec::new();
    for first in (0..=n).rev() {
        for mut rest in multi_indices(d - 1, n - first) {
            rest.insert(0, first as u32);
            out.push(rest);
        }
    }
    out
}

/// Polynomial symbols used by the exactness checks.
pub fn battery_m(d: usize) -> Vec<XPoly> {
    let x = |i: usize| XPoly::x(i.min(d - 1));
    let c = |n: i64, q: i64| KPoly::rational(rat(n, q));
    vec![
        XPoly::one(),
        x(0),
        &x(0).pow(2) + &(&x(0) * &x(d - 1)).scale(&c(3, 1)),
        &x(0).pow(3) - &x(d - 1).scale(&c(2, 1)),
        &(&x(0) * &x(d - 1).pow(2)).scale(&c(1, 2)) + &XPoly::from_int(5),
        &x(d - 1).pow(3).scale(&c(-1, 4)) + &(&x(0).pow(2) * &x(d - 1)).scale(&c(7, 2)),
    ]
}

/// Radial profiles h, polynomials in r².
pub fn battery_h() -> Vec<RadialPoly> {
    vec![
        RadialPoly::from_rationals(&[rat(1, 1), rat(1, 1)]),
        RadialPoly::from_rationals(&[rat(0, 1), rat(-2, 1), rat(1, 1)]),
        RadialPoly::from_rationals(&[rat(3, 1), rat(0, 1), rat(0, 1), rat(1, 3)]),
    ]
}

/// Checks both expansions of one 𝒟^α against direct differentiation on the battery.
pub fn verify_alpha(d: usize, alpha: &[u32], max_order: usize, report: &mut VerifyReport) -> Result<()> {
    let exp = leibniz_expand(d, alpha, max_order)?;
    let rad = radial_leibniz_expand(d, alpha, max_order)?;
    for h in battery_h() {
        let g = h.to_xpoly(d);
        for m in battery_m(d) {
            let want = dunkl_derivative_poly_multi(&(&m * &g), alpha)?;
            let got = exp.evaluate_poly(&m, &h)?;
            report.checked += 1;
            if got != want {
                report.failures.push(format!("alpha {alpha:?}: expansion differs for m = {m}"));
            }
        }
        for m0 in battery_h() {
            let m = m0.to_xpoly(d);
            let want = dunkl_derivative_poly_multi(&(&m * &g), alpha)?;
            report.checked += 1;
            if evaluate_radial_poly(&rad, d, &m0, &h) != want {
                report.failures.push(format!("alpha {alpha:?}: radial expansion differs"));
            }
        }
    }
    Ok(())
}

/// Checks both expansions against 𝒟^α(m·g) for every |α| ≤ max_order on a fixed battery.
pub fn verify_battery(d: usize, max_order: usize) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    for n in 1..=max_order {
        for alpha in multi_indices(d, n) {
            verify_alpha(d, &alpha, max_order, &mut report)?;
        }
    }
    Ok(report)
}
