//! Dense multivariate polynomials over `Z/l^b` with weighted variables.
//!
//! All gradings are algebraic: a variable's weight is its Chow degree, and a
//! topological degree is twice that. Exponent vectors are dense and indexed by
//! the ring's variable list.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{mul_mod, pow_mod};
use crate::error::{Error, Result};

pub type Exponents = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub weight: u32,
}

impl Variable {
    pub fn new(name: impl Into<String>, weight: u32) -> Self {
        Variable {
            name: name.into(),
            weight,
        }
    }
}

/// Variable context and coefficient modulus shared by a family of polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyRing {
    modulus: u64,
    vars: Vec<Variable>,
}

impl PolyRing {
    pub fn new(modulus: u64, vars: Vec<Variable>) -> Result<Arc<Self>> {
        if modulus < 2 {
            return Err(Error::input(format!(
                "modulus {modulus} must be at least 2"
            )));
        }
        if let Some(v) = vars.iter().find(|v| v.weight == 0) {
            return Err(Error::input(format!("variable {} has weight 0", v.name)));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(Error::input(format!("duplicate variable {}", v.name)));
            }
        }
        Ok(Arc::new(PolyRing { modulus, vars }))
    }

    /// `F_l[eta_1, ..., eta_m]`, all weights one.
    pub fn eta(modulus: u64, m: usize) -> Result<Arc<Self>> {
        let vars = (1..=m)
            .map(|j| Variable::new(format!("eta_{j}"), 1))
            .collect();
        PolyRing::new(modulus, vars)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn weights(&self) -> Vec<u32> {
        self.vars.iter().map(|v| v.weight).collect()
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn weighted_degree(&self, exps: &[u32]) -> u64 {
        exps.iter()
            .zip(&self.vars)
            .map(|(&e, v)| e as u64 * v.weight as u64)
            .sum()
    }

    pub fn zero(self: &Arc<Self>) -> ModPolynomial {
        ModPolynomial {
            ring: Arc::clone(self),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(self: &Arc<Self>) -> ModPolynomial {
        self.constant(1)
    }

    pub fn constant(self: &Arc<Self>, c: u64) -> ModPolynomial {
        self.monomial(vec![0; self.nvars()], c)
    }

    pub fn var(self: &Arc<Self>, i: usize) -> ModPolynomial {
        let mut exps = vec![0; self.nvars()];
        exps[i] = 1;
        self.monomial(exps, 1)
    }

    pub fn monomial(self: &Arc<Self>, exps: Exponents, c: u64) -> ModPolynomial {
        assert_eq!(exps.len(), self.nvars(), "exponent vector length");
        let mut f = self.zero();
        let c = c % self.modulus;
        if c != 0 {
            f.terms.insert(exps, c);
        }
        f
    }
}

/// Polynomial over `Z/l^b`; stored coefficients are always nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModPolynomial {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Exponents, u64>,
}

fn same_ring(f: &ModPolynomial, g: &ModPolynomial) -> Result<()> {
    if Arc::ptr_eq(&f.ring, &g.ring) || f.ring == g.ring {
        Ok(())
    } else {
        Err(Error::input("polynomials live in different rings"))
    }
}

impl ModPolynomial {
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn modulus(&self) -> u64 {
        self.ring.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, u64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> u64 {
        self.terms.get(exps).copied().unwrap_or(0)
    }

    /// Highest weighted degree of a term, `None` for zero.
    pub fn degree(&self) -> Option<u64> {
        self.terms
            .keys()
            .map(|e| self.ring.weighted_degree(e))
            .max()
    }

    fn insert_add(&mut self, exps: Exponents, c: u64) {
        let m = self.ring.modulus;
        let c = c % m;
        if c == 0 {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = ((*o.get() as u128 + c as u128) % m as u128) as u64;
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn try_add(&self, other: &ModPolynomial) -> Result<ModPolynomial> {
        same_ring(self, other)?;
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.insert_add(e.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &ModPolynomial) -> Result<ModPolynomial> {
        self.try_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> ModPolynomial {
        let m = self.ring.modulus;
        let terms = self
            .terms
            .iter()
            .map(|(e, &c)| (e.clone(), m - c))
            .collect();
        ModPolynomial {
            ring: Arc::clone(&self.ring),
            terms,
        }
    }

    pub fn scale(&self, c: u64) -> ModPolynomial {
        let m = self.ring.modulus;
        let c = c % m;
        let mut out = self.ring.zero();
        for (e, &a) in &self.terms {
            out.insert_add(e.clone(), mul_mod(a, c, m));
        }
        out
    }

    pub fn pow(&self, k: u32) -> ModPolynomial {
        let mut acc = self.ring.one();
        for _ in 0..k {
            acc = multiply(&acc, self).expect("same ring");
        }
        acc
    }

    /// Sum of the terms of weighted degree exactly `d`.
    pub fn homogeneous_component(&self, d: u64) -> ModPolynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| self.ring.weighted_degree(e) == d)
            .map(|(e, &c)| (e.clone(), c))
            .collect();
        ModPolynomial {
            ring: Arc::clone(&self.ring),
            terms,
        }
    }

    /// Drops every term of weighted degree above `cutoff`.
    pub fn truncate(&self, cutoff: u64) -> ModPolynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| self.ring.weighted_degree(e) <= cutoff)
            .map(|(e, &c)| (e.clone(), c))
            .collect();
        ModPolynomial {
            ring: Arc::clone(&self.ring),
            terms,
        }
    }

    /// Terms in canonical order: ascending weighted degree, then
    /// lexicographically descending exponent vectors.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, u64)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by(|(a, _), (b, _)| graded_lex(&self.ring, a, b));
        v
    }
}

fn graded_lex(ring: &PolyRing, a: &[u32], b: &[u32]) -> Ordering {
    ring.weighted_degree(a)
        .cmp(&ring.weighted_degree(b))
        .then_with(|| b.cmp(a))
}

/// Exact product, coefficients reduced mod `l^b`.
pub fn multiply(f: &ModPolynomial, g: &ModPolynomial) -> Result<ModPolynomial> {
    same_ring(f, g)?;
    let m = f.ring.modulus;
    let mut out = f.ring.zero();
    for (ea, &ca) in &f.terms {
        for (eb, &cb) in &g.terms {
            let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            out.insert_add(e, mul_mod(ca, cb, m));
        }
    }
    Ok(out)
}

impl Add for &ModPolynomial {
    type Output = ModPolynomial;
    fn add(self, rhs: &ModPolynomial) -> ModPolynomial {
        self.try_add(rhs)
            .expect("polynomials live in different rings")
    }
}

impl Sub for &ModPolynomial {
    type Output = ModPolynomial;
    fn sub(self, rhs: &ModPolynomial) -> ModPolynomial {
        self.try_sub(rhs)
            .expect("polynomials live in different rings")
    }
}

impl Mul for &ModPolynomial {
    type Output = ModPolynomial;
    fn mul(self, rhs: &ModPolynomial) -> ModPolynomial {
        multiply(self, rhs).expect("polynomials live in different rings")
    }
}

impl Neg for &ModPolynomial {
    type Output = ModPolynomial;
    fn neg(self) -> ModPolynomial {
        self.neg_ref()
    }
}

impl fmt::Display for ModPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (exps, c)) in self.sorted_terms().into_iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let factors: Vec<String> = exps
                .iter()
                .zip(&self.ring.vars)
                .filter(|(&e, _)| e > 0)
                .map(|(&e, v)| {
                    if e == 1 {
                        v.name.clone()
                    } else {
                        format!("{}^{}", v.name, e)
                    }
                })
                .collect();
            match (c, factors.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{}", factors.join("*"))?,
                _ => write!(f, "{}*{}", c, factors.join("*"))?,
            }
        }
        Ok(())
    }
}

/// `e_i(values)`, with `e_0 = 1`. The ring is passed explicitly so that
/// `values` may be empty.
pub fn elementary_symmetric(
    ring: &Arc<PolyRing>,
    i: usize,
    values: &[ModPolynomial],
) -> Result<ModPolynomial> {
    if i > values.len() {
        return Err(Error::input(format!(
            "e_{i} requested on {} values",
            values.len()
        )));
    }
    let mut e = vec![ring.one()];
    e.resize(i + 1, ring.zero());
    for v in values {
        same_ring(&e[0], v)?;
        for k in (1..=i).rev() {
            let t = multiply(&e[k - 1], v)?;
            e[k] = &e[k] + &t;
        }
    }
    Ok(e.swap_remove(i))
}

/// Diagonal action multiplying a monomial of weighted degree `w` by
/// `scalar^w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalAction {
    pub scalar: u64,
    pub weights: Vec<u32>,
}

impl DiagonalAction {
    /// The action matching a ring's own weights.
    pub fn for_ring(ring: &PolyRing, scalar: u64) -> Self {
        DiagonalAction {
            scalar,
            weights: ring.weights(),
        }
    }
}

pub fn apply_diagonal(action: &DiagonalAction, f: &ModPolynomial) -> Result<ModPolynomial> {
    let ring = f.ring();
    if action.weights != ring.weights() {
        return Err(Error::input(
            "action weights do not match the variable weights",
        ));
    }
    let m = ring.modulus;
    if action.scalar.gcd(&m) != 1 {
        return Err(Error::input(format!(
            "scalar {} is not a unit modulo {m}",
            action.scalar
        )));
    }
    let terms = f
        .terms
        .iter()
        .map(|(e, &c)| {
            let w = ring.weighted_degree(e);
            (e.clone(), mul_mod(c, pow_mod(action.scalar, w, m), m))
        })
        .collect();
    Ok(ModPolynomial {
        ring: Arc::clone(ring),
        terms,
    })
}

/// Integer coefficients `c_0, ..., c_D` of a Hilbert or Poincare series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TruncatedSeries {
    pub coefficients: Vec<u64>,
}

impl TruncatedSeries {
    pub fn new(coefficients: Vec<u64>) -> Self {
        assert!(!coefficients.is_empty(), "a series has at least c_0");
        TruncatedSeries { coefficients }
    }

    pub fn cutoff(&self) -> u32 {
        (self.coefficients.len() - 1) as u32
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coefficients.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Series of the free polynomial ring on generators of the given degrees,
/// `prod 1/(1 - t^d)`, truncated at `cutoff`.
pub fn hilbert_series_of_free_polynomial_ring(degrees: &[u32], cutoff: u32) -> TruncatedSeries {
    let len = cutoff as usize + 1;
    let mut c = vec![0u64; len];
    c[0] = 1;
    for &d in degrees {
        assert!(d > 0, "generator degrees are positive");
        let d = d as usize;
        for k in d..len {
            c[k] = c[k]
                .checked_add(c[k - d])
                .expect("series coefficient overflow");
        }
    }
    TruncatedSeries::new(c)
}

/// All exponent vectors of weighted degree exactly `d`, in lexicographically
/// descending order (the first variable varies slowest).
pub fn monomial_basis(weights: &[u32], d: u32) -> Vec<Exponents> {
    fn rec(weights: &[u32], d: u32, prefix: &mut Exponents, out: &mut Vec<Exponents>) {
        match weights.split_first() {
            None => {
                if d == 0 {
                    out.push(prefix.clone());
                }
            }
            Some((&w, rest)) => {
                for e in (0..=d / w).rev() {
                    prefix.push(e);
                    rec(rest, d - e * w, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    rec(weights, d, &mut Vec::with_capacity(weights.len()), &mut out);
    out
}

/// Number of exponent vectors of weighted degree `d`, without enumerating them.
pub fn monomial_count(weights: &[u32], d: u32) -> usize {
    let len = d as usize + 1;
    let mut c = vec![0usize; len];
    c[0] = 1;
    for &w in weights {
        let w = w as usize;
        for k in w..len {
            c[k] = c[k].saturating_add(c[k - w]);
        }
    }
    c[d as usize]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eta(modulus: u64) -> (Arc<PolyRing>, ModPolynomial) {
        let ring = PolyRing::eta(modulus, 1).unwrap();
        let x = ring.var(0);
        (ring, x)
    }

    #[test]
    fn multiply_examples() {
        let (ring, x) = eta(5);
        let f = &ring.one() + &x;
        let g = &ring.one() + &x.scale(4);
        let prod = multiply(&f, &g).unwrap();
        assert_eq!(prod, &ring.one() + &x.pow(2).scale(4));
        assert_eq!(prod.to_string(), "1 + 4*eta_1^2");
        assert_eq!(multiply(&f, &ring.one()).unwrap(), f);
        assert_eq!(multiply(&x, &x).unwrap().to_string(), "eta_1^2");
    }

    #[test]
    fn multiply_rejects_mismatched_rings() {
        let (_, x) = eta(5);
        let (_, y) = eta(7);
        assert!(multiply(&x, &y).is_err());
        let other = PolyRing::new(5, vec![Variable::new("s", 4)]).unwrap();
        assert!(multiply(&x, &other.var(0)).is_err());
    }

    #[test]
    fn elementary_symmetric_examples() {
        let ring = PolyRing::eta(5, 2).unwrap();
        let (a, b) = (ring.var(0), ring.var(1));
        let e1 = elementary_symmetric(&ring, 1, &[a.pow(4), b.pow(4)]).unwrap();
        assert_eq!(e1, &a.pow(4) + &b.pow(4));
        let e2 = elementary_symmetric(&ring, 2, &[a.clone(), b.clone()]).unwrap();
        assert_eq!(e2, &a * &b);
        let consts: Vec<_> = [1, 3, 9, 27].iter().map(|&c| ring.constant(c)).collect();
        assert!(elementary_symmetric(&ring, 2, &consts).unwrap().is_zero());
        assert_eq!(elementary_symmetric(&ring, 0, &[]).unwrap(), ring.one());
        assert!(elementary_symmetric(&ring, 3, &[a, b]).is_err());
    }

    #[test]
    fn diagonal_examples() {
        let (ring, x) = eta(5);
        let act = DiagonalAction::for_ring(&ring, 3);
        assert_eq!(apply_diagonal(&act, &x.pow(2)).unwrap(), x.pow(2).scale(4));
        let f = &(&ring.one() + &x) + &x.pow(3).scale(2);
        let trivial = DiagonalAction::for_ring(&ring, 1);
        assert_eq!(apply_diagonal(&trivial, &f).unwrap(), f);

        let s_ring = PolyRing::new(5, vec![Variable::new("s", 4)]).unwrap();
        let s = s_ring.var(0);
        let act = DiagonalAction::for_ring(&s_ring, 3);
        assert_eq!(apply_diagonal(&act, &s).unwrap(), s);
    }

    #[test]
    fn diagonal_errors() {
        let (_, x) = eta(5);
        let bad_weights = DiagonalAction {
            scalar: 3,
            weights: vec![2],
        };
        assert!(apply_diagonal(&bad_weights, &x).is_err());
        let not_unit = DiagonalAction {
            scalar: 10,
            weights: vec![1],
        };
        assert!(apply_diagonal(&not_unit, &x).is_err());
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(
            hilbert_series_of_free_polynomial_ring(&[], 4).coefficients,
            vec![1, 0, 0, 0, 0]
        );
        assert_eq!(
            hilbert_series_of_free_polynomial_ring(&[4], 8).coefficients,
            vec![1, 0, 0, 0, 1, 0, 0, 0, 1]
        );
        assert_eq!(
            hilbert_series_of_free_polynomial_ring(&[1, 2], 4).coefficients,
            vec![1, 1, 2, 2, 3]
        );
    }

    #[test]
    fn hilbert_matches_enumeration() {
        fn lists(len: usize, max: u32) -> Vec<Vec<u32>> {
            if len == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for l in lists(len - 1, max) {
                for d in 1..=max {
                    let mut v = l.clone();
                    v.push(d);
                    out.push(v);
                }
            }
            out
        }
        for len in 0..=4 {
            for degrees in lists(len, 6) {
                let series = hilbert_series_of_free_polynomial_ring(&degrees, 12);
                for d in 0..=12u32 {
                    let n = monomial_basis(&degrees, d).len() as u64;
                    assert_eq!(series.coefficients[d as usize], n, "{degrees:?} d={d}");
                    assert_eq!(monomial_count(&degrees, d) as u64, n);
                }
            }
        }
    }

    #[test]
    fn basis_order_is_lex_descending() {
        let basis = monomial_basis(&[1, 1], 2);
        assert_eq!(basis, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn display_mixed() {
        let ring = PolyRing::eta(7, 2).unwrap();
        let f =
            &(&ring.constant(3) + &(&ring.var(0) * &ring.var(1)).scale(6)) + &ring.var(1).pow(2);
        assert_eq!(f.to_string(), "3 + 6*eta_1*eta_2 + eta_2^2");
        assert_eq!(ring.zero().to_string(), "0");
    }

    #[test]
    fn components_and_truncation() {
        let (ring, x) = eta(5);
        let f = &(&ring.one() + &x) + &x.pow(4);
        assert_eq!(f.homogeneous_component(4), x.pow(4));
        assert_eq!(f.truncate(1), &ring.one() + &x);
        assert_eq!(f.degree(), Some(4));
        assert_eq!(ring.zero().degree(), None);
    }
}
