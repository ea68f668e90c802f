//! Brute-force verifiers over `F_l`.
//!
//! * graded coinvariants `R / (a - g.a)` by exact rank computations,
//! * invariants of `<diagonal> wr S_m` on `F_l[eta_1, ..., eta_m]`,
//! * the total Chern class of the restricted Brauer lift.
//!
//! None of the linear-algebra oracles consult the multiplicative order of `q`;
//! they only see the action itself.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, multiplicative_order, pow_mod, GaloisParams};
use crate::error::{Error, Result};
use crate::linalg::RowEchelon;
use crate::poly::{
    apply_diagonal, elementary_symmetric, hilbert_series_of_free_polynomial_ring, monomial_basis,
    monomial_count, DiagonalAction, Exponents, ModPolynomial, PolyRing, TruncatedSeries, Variable,
};
use crate::presentations::SCHEMA_VERSION;

pub const DEFAULT_MONOMIAL_LIMIT: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleLimits {
    /// Largest number of monomials allowed in a single degree.
    pub max_monomials: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_monomials: DEFAULT_MONOMIAL_LIMIT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PermutationComponent {
    None,
    /// The full symmetric group permuting the variables.
    Symmetric,
}

/// A graded polynomial ring over `F_l` with a diagonal action by `q` and
/// optionally the symmetric group on its variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedActionProblem {
    pub weights: Vec<u32>,
    pub l: u64,
    pub q: u64,
    pub permutation: PermutationComponent,
    pub cutoff: u32,
}

impl GradedActionProblem {
    /// `F_l[s_1, ..., s_n]` with `s_i -> q^{w_i} s_i`.
    pub fn cyclic(weights: Vec<u32>, l: u64, q: u64, cutoff: u32) -> Result<Self> {
        let p = GradedActionProblem {
            weights,
            l,
            q,
            permutation: PermutationComponent::None,
            cutoff,
        };
        p.validate()?;
        Ok(p)
    }

    /// `F_l[eta_1, ..., eta_m]` with `eta_1 -> q eta_1` and `S_m` permuting.
    pub fn wreath(m: usize, l: u64, q: u64, cutoff: u32) -> Result<Self> {
        let p = GradedActionProblem {
            weights: vec![1; m],
            l,
            q,
            permutation: PermutationComponent::Symmetric,
            cutoff,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if !is_prime(self.l) || self.l >= crate::arith::MAX_COEFFICIENT_PRIME {
            return Err(Error::input(format!(
                "l = {} is not a supported prime",
                self.l
            )));
        }
        if self.q.is_multiple_of(self.l) {
            return Err(Error::input(format!(
                "q = {} is not a unit mod {}",
                self.q, self.l
            )));
        }
        if self.weights.contains(&0) {
            return Err(Error::input("weights must be positive"));
        }
        Ok(())
    }

    fn ring(&self) -> Result<Arc<PolyRing>> {
        let vars = self
            .weights
            .iter()
            .enumerate()
            .map(|(i, &w)| Variable::new(format!("s_{}", i + 1), w))
            .collect();
        PolyRing::new(self.l, vars)
    }
}

/// Monomial bases of degrees `0..=cutoff`, refusing any degree above the limit.
fn graded_bases(weights: &[u32], cutoff: u32, limits: OracleLimits) -> Result<Vec<Vec<Exponents>>> {
    (0..=cutoff)
        .map(|d| {
            let count = monomial_count(weights, d);
            if count > limits.max_monomials {
                Err(Error::Resource {
                    degree: d,
                    count,
                    limit: limits.max_monomials,
                })
            } else {
                Ok(monomial_basis(weights, d))
            }
        })
        .collect()
}

fn index_of(basis: &[Exponents]) -> HashMap<&[u32], usize> {
    basis
        .iter()
        .enumerate()
        .map(|(i, e)| (e.as_slice(), i))
        .collect()
}

/// Hilbert series of `R / (a - g.a : a in R)` by linear algebra.
///
/// In degree `d` the ideal is spanned by `M' (a - g.a)` with `a` running over
/// monomials of degree `k >= 1` and `M'` over monomials of degree `d - k`;
/// the coinvariant dimension is the monomial count minus the rank of those
/// rows.
pub fn coinvariants_hilbert_bruteforce(
    problem: &GradedActionProblem,
    limits: OracleLimits,
) -> Result<TruncatedSeries> {
    if problem.permutation != PermutationComponent::None {
        return Err(Error::input(
            "coinvariant oracle handles cyclic actions only",
        ));
    }
    problem.validate()?;
    let ring = problem.ring()?;
    let action = DiagonalAction::for_ring(&ring, problem.q % problem.l);
    let bases = graded_bases(&problem.weights, problem.cutoff, limits)?;

    // a - g.a for every monomial a, grouped by degree
    let mut differences: Vec<Vec<ModPolynomial>> = Vec::with_capacity(bases.len());
    for basis in &bases {
        let mut diffs = Vec::with_capacity(basis.len());
        for exps in basis {
            let a = ring.monomial(exps.clone(), 1);
            let diff = &a - &apply_diagonal(&action, &a)?;
            if !diff.is_zero() {
                diffs.push(diff);
            }
        }
        differences.push(diffs);
    }

    let mut coefficients = Vec::with_capacity(bases.len());
    for (d, basis) in bases.iter().enumerate() {
        let index = index_of(basis);
        let mut ech = RowEchelon::new(problem.l, basis.len());
        let mut entries = Vec::new();
        'rows: for k in 1..=d {
            for diff in &differences[k] {
                for cofactor in &bases[d - k] {
                    entries.clear();
                    for (e, c) in diff.terms() {
                        let prod: Exponents = e.iter().zip(cofactor).map(|(x, y)| x + y).collect();
                        entries.push((index[prod.as_slice()], c));
                    }
                    ech.push_sparse(&entries);
                    if ech.is_full() {
                        break 'rows;
                    }
                }
            }
        }
        coefficients.push((basis.len() - ech.rank()) as u64);
    }
    Ok(TruncatedSeries::new(coefficients))
}

/// Series of `F_l[s_i : r | w_i]` with `r` the order of `q` mod `l`.
pub fn coinvariants_hilbert_closedform(problem: &GradedActionProblem) -> Result<TruncatedSeries> {
    problem.validate()?;
    let r = multiplicative_order(problem.q, problem.l)?;
    let kept: Vec<u32> = problem
        .weights
        .iter()
        .copied()
        .filter(|&w| (w as u64).is_multiple_of(r))
        .collect();
    Ok(hilbert_series_of_free_polynomial_ring(
        &kept,
        problem.cutoff,
    ))
}

/// Hilbert series of the ring of invariants of `<eta_1 -> q eta_1> wr S_m`.
///
/// The group is generated by the diagonal map on the first variable, the
/// transposition `(1 2)` and the cycle `(1 2 ... m)`. In each degree the
/// invariants are the joint kernel of `g - 1` over those generators.
pub fn invariants_hilbert_bruteforce(
    problem: &GradedActionProblem,
    limits: OracleLimits,
) -> Result<TruncatedSeries> {
    if problem.permutation != PermutationComponent::Symmetric {
        return Err(Error::input(
            "invariant oracle expects the symmetric permutation component",
        ));
    }
    problem.validate()?;
    if problem.weights.iter().any(|&w| w != 1) {
        return Err(Error::input(
            "invariant oracle expects weight-one variables",
        ));
    }
    let m = problem.weights.len();
    let l = problem.l;
    let q = problem.q % l;
    let bases = graded_bases(&problem.weights, problem.cutoff, limits)?;

    let mut permutations: Vec<Vec<usize>> = Vec::new();
    if m >= 2 {
        let mut swap: Vec<usize> = (0..m).collect();
        swap.swap(0, 1);
        permutations.push(swap);
        permutations.push((0..m).map(|i| (i + 1) % m).collect());
    }
    let blocks = 1 + permutations.len();

    let mut coefficients = Vec::with_capacity(bases.len());
    for basis in &bases {
        let dim = basis.len();
        let index = index_of(basis);
        let mut ech = RowEchelon::new(l, blocks * dim);
        // one row per basis monomial M: the images (g - 1) M for every generator g, side by side
        for (j, exps) in basis.iter().enumerate() {
            let mut row = vec![0u64; blocks * dim];
            let scaled = pow_mod(q, exps[0] as u64, l);
            row[j] = (scaled + l - 1) % l;
            for (b, perm) in permutations.iter().enumerate() {
                let mut image = vec![0u32; m];
                for (i, &e) in exps.iter().enumerate() {
                    image[perm[i]] = e;
                }
                let off = (b + 1) * dim;
                row[off + index[image.as_slice()]] += 1;
                row[off + j] += l - 1;
            }
            ech.push(row);
        }
        coefficients.push((dim - ech.rank()) as u64);
    }
    Ok(TruncatedSeries::new(coefficients))
}

/// `prod_{i=1}^m 1/(1 - t^{ir})`, the series of the symmetric functions in
/// `eta_1^r, ..., eta_m^r`.
pub fn wreath_invariants_closedform(m: usize, r: u64, cutoff: u32) -> TruncatedSeries {
    let degrees: Vec<u32> = (1..=m as u64).map(|i| (i * r) as u32).collect();
    hilbert_series_of_free_polynomial_ring(&degrees, cutoff)
}

/// `e_0, ..., e_r` of `1, q, ..., q^{r-1}` in `F_l`, where `r` is the order
/// of `q`. These are the coefficients of `prod (x + q^i)`.
pub fn root_power_elementary(q: u64, l: u64) -> Result<Vec<u64>> {
    let r = multiplicative_order(q, l)? as usize;
    let ring = PolyRing::new(l, Vec::new())?;
    let powers: Vec<ModPolynomial> = (0..r)
        .map(|i| ring.constant(pow_mod(q, i as u64, l)))
        .collect();
    (0..=r)
        .map(|j| Ok(elementary_symmetric(&ring, j, &powers)?.coefficient(&[])))
        .collect()
}

/// `prod_{j=1}^m prod_{i=0}^{r-1} (1 + q^i eta_j)` in `F_l[eta_1, ..., eta_m]`.
pub fn brauer_chern_total_class(m: usize, params: &GaloisParams) -> Result<ModPolynomial> {
    if params.l == params.p {
        return Err(Error::input("l must differ from p"));
    }
    if m == 0 {
        return Err(Error::input("m must be positive"));
    }
    let l = params.l;
    let ring = PolyRing::eta(l, m)?;
    let mut total = ring.one();
    for j in 0..m {
        let eta = ring.var(j);
        for i in 0..params.r {
            let factor = &ring.one() + &eta.scale(pow_mod(params.q, i, l));
            total = &total * &factor;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Clause {
    fn pass() -> Self {
        Clause {
            passed: true,
            witness: None,
        }
    }

    fn fail(witness: String) -> Self {
        Clause {
            passed: false,
            witness: Some(witness),
        }
    }
}

/// Per-clause outcome of [`verify_restricted_chern`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernReport {
    pub schema_version: u32,
    pub m: usize,
    pub q: u64,
    pub prime: u64,
    pub r: u64,
    pub total_class: String,
    /// Components in degrees not divisible by `r` vanish.
    pub vanishing: Clause,
    /// The degree `ir` component is `(-1)^{(r-1)i} e_i(eta_1^r, ..., eta_m^r)`.
    pub symmetric: Clause,
    /// The coefficient of `eta_1^r` is `q^{r(r-1)/2} = (-1)^{r-1}` mod `l`.
    pub sign: Clause,
    /// The diagonal action by `q` fixes the total class.
    pub galois_invariant: Clause,
}

impl ChernReport {
    pub fn passed(&self) -> bool {
        self.vanishing.passed
            && self.symmetric.passed
            && self.sign.passed
            && self.galois_invariant.passed
    }

    pub fn render_text(&self) -> String {
        let mark = |c: &Clause| {
            if c.passed {
                "pass".to_string()
            } else {
                format!("FAIL ({})", c.witness.as_deref().unwrap_or(""))
            }
        };
        format!(
            "total class (m={}, q={}, l={}, r={}): {}\nvanishing: {}\nsymmetric: {}\nsign: {}\ngalois_invariant: {}\n",
            self.m,
            self.q,
            self.prime,
            self.r,
            self.total_class,
            mark(&self.vanishing),
            mark(&self.symmetric),
            mark(&self.sign),
            mark(&self.galois_invariant),
        )
    }
}

/// Checks the restricted Chern classes against the symmetric functions in the
/// `eta_j^r`, with the sign fixed to `(-1)^{(r-1)i}`.
pub fn verify_restricted_chern(m: usize, params: &GaloisParams) -> Result<ChernReport> {
    let total = brauer_chern_total_class(m, params)?;
    let ring = Arc::clone(total.ring());
    let l = params.l;
    let r = params.r;

    let vanishing = match total
        .terms()
        .map(|(e, _)| ring.weighted_degree(e))
        .find(|d| d % r != 0)
    {
        None => Clause::pass(),
        Some(d) => Clause::fail(format!("nonzero component in degree {d}")),
    };

    let eta_r: Vec<ModPolynomial> = (0..m).map(|j| ring.var(j).pow(r as u32)).collect();
    let mut symmetric = Clause::pass();
    for i in 0..=m {
        let sign = if ((r - 1) * i as u64).is_multiple_of(2) {
            1
        } else {
            l - 1
        };
        let expected = elementary_symmetric(&ring, i, &eta_r)?.scale(sign);
        let got = total.homogeneous_component(i as u64 * r);
        if got != expected {
            symmetric = Clause::fail(format!(
                "degree {}: got {got}, expected {expected}",
                i as u64 * r
            ));
            break;
        }
    }
    if symmetric.passed && total.degree() != Some(m as u64 * r) {
        symmetric = Clause::fail(format!(
            "top degree {:?} != {}",
            total.degree(),
            m as u64 * r
        ));
    }

    let mut eta1_r = vec![0u32; m];
    eta1_r[0] = r as u32;
    let coeff = total.coefficient(&eta1_r);
    let from_q = pow_mod(params.q, r * (r - 1) / 2, l);
    let from_sign = if (r - 1).is_multiple_of(2) { 1 } else { l - 1 };
    let sign = if coeff == from_q && from_q == from_sign {
        Clause::pass()
    } else {
        Clause::fail(format!(
            "coefficient {coeff}, q^(r(r-1)/2) = {from_q}, (-1)^(r-1) = {from_sign}"
        ))
    };

    let action = DiagonalAction::for_ring(&ring, params.q % l);
    let moved = apply_diagonal(&action, &total)?;
    let galois_invariant = if moved == total {
        Clause::pass()
    } else {
        Clause::fail(format!("image {moved}"))
    };

    Ok(ChernReport {
        schema_version: SCHEMA_VERSION,
        m,
        q: params.q,
        prime: l,
        r,
        total_class: total.to_string(),
        vanishing,
        symmetric,
        sign,
        galois_invariant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::galois_params_for_field;

    const NO_LIMIT: OracleLimits = OracleLimits {
        max_monomials: usize::MAX,
    };

    fn coinv(weights: &[u32], l: u64, q: u64, d: u32) -> Vec<u64> {
        let p = GradedActionProblem::cyclic(weights.to_vec(), l, q, d).unwrap();
        coinvariants_hilbert_bruteforce(&p, NO_LIMIT)
            .unwrap()
            .coefficients
    }

    #[test]
    fn coinvariants_trivial_action_is_whole_ring() {
        let full = hilbert_series_of_free_polynomial_ring(&[1, 1, 1], 6).coefficients;
        assert_eq!(coinv(&[1, 1, 1], 5, 11, 6), full);
        assert_eq!(coinv(&[1, 1, 1], 5, 1, 6), full);
    }

    #[test]
    fn coinvariants_examples() {
        assert_eq!(coinv(&[1], 5, 3, 4), vec![1, 0, 0, 0, 0]);
        assert_eq!(coinv(&[1, 4], 5, 3, 8), vec![1, 0, 0, 0, 1, 0, 0, 0, 1]);
        let p = GradedActionProblem::cyclic(vec![1, 4], 5, 3, 8).unwrap();
        assert_eq!(
            coinvariants_hilbert_closedform(&p).unwrap().coefficients,
            vec![1, 0, 0, 0, 1, 0, 0, 0, 1]
        );
    }

    #[test]
    fn symplectic_pattern() {
        let p = GradedActionProblem::cyclic(vec![2, 4, 6, 8], 5, 3, 16).unwrap();
        let closed = coinvariants_hilbert_closedform(&p).unwrap();
        assert_eq!(closed, hilbert_series_of_free_polynomial_ring(&[4, 8], 16));
    }

    #[test]
    fn invariant_examples() {
        let inv = |m, q, d| {
            let p = GradedActionProblem::wreath(m, 5, q, d).unwrap();
            invariants_hilbert_bruteforce(&p, NO_LIMIT)
                .unwrap()
                .coefficients
        };
        assert_eq!(inv(1, 3, 8), vec![1, 0, 0, 0, 1, 0, 0, 0, 1]);
        assert_eq!(inv(1, 1, 3), vec![1, 1, 1, 1]);
        assert_eq!(inv(2, 3, 8), vec![1, 0, 0, 0, 1, 0, 0, 0, 2]);
        assert_eq!(
            wreath_invariants_closedform(2, 4, 8).coefficients,
            vec![1, 0, 0, 0, 1, 0, 0, 0, 2]
        );
    }

    #[test]
    fn cyclic_permutations_alone_are_not_enough() {
        // with r = 1 the invariants are the S_3-symmetric polynomials: 3 in degree 3
        let p = GradedActionProblem::wreath(3, 5, 1, 3).unwrap();
        assert_eq!(
            invariants_hilbert_bruteforce(&p, NO_LIMIT)
                .unwrap()
                .coefficients,
            vec![1, 1, 2, 3]
        );
    }

    #[test]
    fn oracle_refuses_oversize_degree() {
        let p = GradedActionProblem::cyclic(vec![1, 1], 5, 3, 12).unwrap();
        let err =
            coinvariants_hilbert_bruteforce(&p, OracleLimits { max_monomials: 10 }).unwrap_err();
        assert_eq!(
            err,
            Error::Resource {
                degree: 10,
                count: 11,
                limit: 10
            }
        );
        let p = GradedActionProblem::wreath(2, 5, 3, 12).unwrap();
        assert!(matches!(
            invariants_hilbert_bruteforce(&p, OracleLimits { max_monomials: 10 }),
            Err(Error::Resource { degree: 10, .. })
        ));
    }

    #[test]
    fn problem_validation() {
        assert!(GradedActionProblem::cyclic(vec![1], 5, 10, 3).is_err());
        assert!(GradedActionProblem::cyclic(vec![0], 5, 3, 3).is_err());
        assert!(GradedActionProblem::cyclic(vec![1], 6, 1, 3).is_err());
        let wreath = GradedActionProblem::wreath(2, 5, 3, 3).unwrap();
        assert!(coinvariants_hilbert_bruteforce(&wreath, NO_LIMIT).is_err());
    }

    #[test]
    fn total_class_examples() {
        let g = galois_params_for_field(3, 5).unwrap();
        let c = brauer_chern_total_class(1, &g).unwrap();
        assert_eq!(c.to_string(), "1 + 4*eta_1^4");

        let g = galois_params_for_field(11, 5).unwrap();
        assert_eq!(
            brauer_chern_total_class(1, &g).unwrap().to_string(),
            "1 + eta_1"
        );

        let g = galois_params_for_field(3, 5).unwrap();
        let c2 = brauer_chern_total_class(2, &g).unwrap();
        assert_eq!(
            c2.to_string(),
            "1 + 4*eta_1^4 + 4*eta_2^4 + eta_1^4*eta_2^4"
        );
    }

    #[test]
    fn verify_examples() {
        for (m, q, l) in [(1, 3, 5), (1, 11, 5), (3, 2, 7), (2, 3, 5), (3, 4, 13)] {
            let rep = verify_restricted_chern(m, &galois_params_for_field(q, l).unwrap()).unwrap();
            assert!(rep.passed(), "{}", rep.render_text());
        }
    }

    #[test]
    fn root_powers() {
        assert_eq!(root_power_elementary(3, 5).unwrap(), vec![1, 0, 0, 0, 4]);
        // 1 + 2 + 4 = 7, 2 + 8 + 4 = 14, 1 * 2 * 4 = 8
        assert_eq!(root_power_elementary(2, 7).unwrap(), vec![1, 0, 0, 1]);
        assert_eq!(root_power_elementary(1, 7).unwrap(), vec![1, 1]);
    }
}
