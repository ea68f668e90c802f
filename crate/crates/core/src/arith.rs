//! Exact arithmetic: primality, multiplicative orders, l-adic valuations and
//! the parameter tuples `(p, q, l, r, a, h)` and `(n, m, e)`.
//!
//! Every quantity that can grow with the input (`q^r - 1`, group orders) is a
//! [`BigUint`]; machine integers are only used for values bounded by the
//! inputs themselves.

use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Hypothesis, Result};

/// Coefficient primes must fit below this bound so that `l - 1` can be
/// factored by trial division.
pub const MAX_COEFFICIENT_PRIME: u64 = 1 << 32;

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the witness set is exact for all `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &w in &WITNESSES {
        let mut x = pow_mod(w, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Writes `q = p^k` with `p` prime, if possible.
pub fn prime_power_base(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    for k in (1..=63u32).rev() {
        let root = q.nth_root(k);
        if root >= 2 && root.checked_pow(k) == Some(q) && is_prime(root) {
            return Some((root, k));
        }
    }
    None
}

/// Distinct prime factors by trial division. Only used on `l - 1` with
/// `l < MAX_COEFFICIENT_PRIME`.
fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn check_coefficient_prime(l: u64) -> Result<()> {
    if !is_prime(l) {
        return Err(Error::input(format!("l = {l} is not prime")));
    }
    if l >= MAX_COEFFICIENT_PRIME {
        return Err(Error::input(format!(
            "l = {l} exceeds the supported bound 2^32"
        )));
    }
    Ok(())
}

/// Least `r >= 1` with `q^r = 1 (mod l)`.
///
/// Rejects `l | q`, which is the degenerate `l = p` case.
pub fn multiplicative_order(q: u64, l: u64) -> Result<u64> {
    check_coefficient_prime(l)?;
    if q.is_multiple_of(l) {
        return Err(Error::precondition(
            Hypothesis::CoprimeCharacteristic,
            format!("l = {l} divides q = {q}"),
        ));
    }
    let mut order = l - 1;
    for f in distinct_prime_factors(l - 1) {
        while order.is_multiple_of(f) && pow_mod(q, order / f, l) == 1 {
            order /= f;
        }
    }
    Ok(order)
}

/// Splits `x = l^v * cofactor` with `cofactor` prime to `l`.
pub fn l_valuation(x: &BigUint, l: u64) -> Result<(u32, BigUint)> {
    if x.is_zero() {
        return Err(Error::input("valuation of zero is undefined"));
    }
    if l < 2 {
        return Err(Error::input(format!("l = {l} is not a prime")));
    }
    let l_big = BigUint::from(l);
    let mut v = 0u32;
    let mut rest = x.clone();
    loop {
        let (quot, rem) = rest.div_rem(&l_big);
        if !rem.is_zero() {
            break;
        }
        rest = quot;
        v += 1;
    }
    Ok((v, rest))
}

/// The arithmetic data attached to a finite field `F_q` and a coefficient
/// prime `l`: `r` is the order of `q` mod `l` and `q^r - 1 = l^a h`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisParams {
    pub p: u64,
    pub q: u64,
    pub l: u64,
    pub r: u64,
    pub a: u32,
    pub h: BigUint,
}

impl GaloisParams {
    /// `q^r - 1`, recomputed exactly.
    pub fn q_r_minus_one(&self) -> BigUint {
        BigUint::from(self.q).pow(self.r as u32) - BigUint::one()
    }

    /// `q mod modulus`.
    pub fn q_mod(&self, modulus: u64) -> u64 {
        self.q % modulus
    }
}

/// Builds the full tuple after validating `p`, `q` and `l`.
pub fn galois_params(p: u64, q: u64, l: u64) -> Result<GaloisParams> {
    if !is_prime(p) {
        return Err(Error::input(format!("p = {p} is not prime")));
    }
    check_coefficient_prime(l)?;
    if l == p {
        return Err(Error::precondition(
            Hypothesis::CoprimeCharacteristic,
            format!("l = p = {l}"),
        ));
    }
    match prime_power_base(q) {
        Some((base, _)) if base == p => {}
        _ => return Err(Error::input(format!("q = {q} is not a power of p = {p}"))),
    }
    let r = multiplicative_order(q, l)?;
    if r > u32::MAX as u64 {
        return Err(Error::input(format!("order {r} too large")));
    }
    let qr1 = BigUint::from(q).pow(r as u32) - BigUint::one();
    let (a, h) = l_valuation(&qr1, l)?;
    Ok(GaloisParams { p, q, l, r, a, h })
}

/// Same as [`galois_params`] with `p` inferred as the prime dividing `q`.
pub fn galois_params_for_field(q: u64, l: u64) -> Result<GaloisParams> {
    let (p, _) =
        prime_power_base(q).ok_or_else(|| Error::input(format!("q = {q} is not a prime power")))?;
    galois_params(p, q, l)
}

/// `n = r m + e` with `0 <= e < r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GLParams {
    pub base: GaloisParams,
    pub n: u64,
    pub m: u64,
    pub e: u64,
}

pub fn gl_params(params: GaloisParams, n: u64) -> Result<GLParams> {
    if n == 0 {
        return Err(Error::input("matrix size n must be positive"));
    }
    let (m, e) = n.div_rem(&params.r);
    Ok(GLParams {
        base: params,
        n,
        m,
        e,
    })
}
