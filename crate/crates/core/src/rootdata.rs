//! Registry of split reductive group types: rank, fundamental degrees, Weyl
//! group order, torsion primes and the order of `G(F_q)`.
//!
//! The registry is a line-oriented text file (see `data/registry.txt` for the
//! grammar). A built-in copy is compiled in; [`Registry::parse`] accepts
//! user-supplied files in the same format.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::error::{Error, Result};

pub const BUILTIN_REGISTRY: &str = include_str!("../data/registry.txt");

/// Patterned records are expanded and checked for this many ranks at load.
pub const LOAD_CHECK_RANKS: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    GL,
    SL,
    Sp,
    #[serde(rename = "SO_odd")]
    SOOdd,
    #[serde(rename = "SO_even")]
    SOEven,
    Spin,
    G2,
    F4,
    E6,
    E7,
    E8,
}

impl Family {
    pub const ALL: [Family; 11] = [
        Family::GL,
        Family::SL,
        Family::Sp,
        Family::SOOdd,
        Family::SOEven,
        Family::Spin,
        Family::G2,
        Family::F4,
        Family::E6,
        Family::E7,
        Family::E8,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::GL => "GL",
            Family::SL => "SL",
            Family::Sp => "Sp",
            Family::SOOdd => "SO_odd",
            Family::SOEven => "SO_even",
            Family::Spin => "Spin",
            Family::G2 => "G2",
            Family::F4 => "F4",
            Family::E6 => "E6",
            Family::E7 => "E7",
            Family::E8 => "E8",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim();
        Family::ALL
            .into_iter()
            .find(|f| f.as_str().eq_ignore_ascii_case(key))
            .ok_or_else(|| Error::input(format!("unknown group family `{key}`")))
    }
}

/// Lie-theoretic constants of one split reductive group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDatum {
    pub family: Family,
    pub rank: u32,
    /// Fundamental degrees, ascending, in algebraic grading.
    pub degrees: Vec<u32>,
    pub weyl_order: BigUint,
    pub torsion_primes: Vec<u64>,
    /// Number of positive roots, `sum(d_i - 1)`.
    pub unipotent_exponent: u64,
}

impl RootDatum {
    pub fn topological_degrees(&self) -> Vec<u32> {
        self.degrees.iter().map(|d| 2 * d).collect()
    }
}

pub fn check_torsion_free(datum: &RootDatum, l: u64) -> bool {
    !datum.torsion_primes.contains(&l)
}

/// `|G(F_q)| = q^N prod (q^{d_i} - 1)`.
pub fn group_order(datum: &RootDatum, q: u64) -> BigUint {
    let q = BigUint::from(q);
    let mut order = q.pow(datum.unipotent_exponent as u32);
    for &d in &datum.degrees {
        order *= q.pow(d) - BigUint::one();
    }
    order
}

/// Looks a group up in the built-in registry.
pub fn lookup(family: Family, rank: u32) -> Result<RootDatum> {
    Registry::builtin().lookup(family, rank)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Affine {
    coef: i64,
    constant: i64,
}

impl Affine {
    fn eval(self, x: i64) -> i64 {
        self.coef * x + self.constant
    }

    /// Parses e.g. `2i`, `n-1`, `i+1`, `6` in the single variable `var`.
    fn parse(s: &str, var: char) -> std::result::Result<Self, String> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err("empty expression".into());
        }
        let mut out = Affine {
            coef: 0,
            constant: 0,
        };
        let mut rest = s.as_str();
        let mut sign = 1i64;
        if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r;
        }
        loop {
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let term = &rest[..end];
            if let Some(num) = term.strip_suffix(var) {
                let k = if num.is_empty() {
                    1
                } else {
                    num.parse::<i64>()
                        .map_err(|_| format!("bad term `{term}`"))?
                };
                out.coef += sign * k;
            } else {
                let k = term
                    .parse::<i64>()
                    .map_err(|_| format!("bad term `{term}`"))?;
                out.constant += sign * k;
            }
            if end == rest.len() {
                break;
            }
            sign = if rest.as_bytes()[end] == b'-' { -1 } else { 1 };
            rest = &rest[end + 1..];
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum DegreeTerm {
    Single(Affine),
    Range {
        expr: Affine,
        lo: Affine,
        hi: Affine,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum WeylFactor {
    Int(u64),
    Factorial(Affine),
    Power(u64, Affine),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RankPattern {
    Fixed(u32),
    AtLeast(u32),
}

impl RankPattern {
    fn admits(self, rank: u32) -> bool {
        match self {
            RankPattern::Fixed(k) => rank == k,
            RankPattern::AtLeast(k) => rank >= k,
        }
    }
}

#[derive(Debug, Clone)]
struct Record {
    line: usize,
    family: Family,
    ranks: RankPattern,
    degrees: Vec<DegreeTerm>,
    torsion: Vec<u64>,
    weyl: Vec<WeylFactor>,
}

impl Record {
    fn expand(&self, rank: u32) -> Result<RootDatum> {
        let err = |message: String| Error::Registry {
            line: self.line,
            message,
        };
        let n = rank as i64;
        let mut degrees = Vec::new();
        for term in &self.degrees {
            match *term {
                DegreeTerm::Single(a) => degrees.push(a.eval(n)),
                DegreeTerm::Range { expr, lo, hi } => {
                    for i in lo.eval(n)..=hi.eval(n) {
                        degrees.push(expr.eval(i));
                    }
                }
            }
        }
        if degrees.len() != rank as usize {
            return Err(err(format!(
                "{} rank {rank}: {} degrees listed",
                self.family,
                degrees.len()
            )));
        }
        if let Some(d) = degrees.iter().find(|&&d| d < 1) {
            return Err(err(format!(
                "{} rank {rank}: nonpositive degree {d}",
                self.family
            )));
        }
        let mut degrees: Vec<u32> = degrees.into_iter().map(|d| d as u32).collect();
        degrees.sort_unstable();

        let mut weyl = BigUint::one();
        for f in &self.weyl {
            match *f {
                WeylFactor::Int(k) => weyl *= k,
                WeylFactor::Factorial(a) => {
                    let k = a.eval(n);
                    if k < 0 {
                        return Err(err(format!("negative factorial argument {k}")));
                    }
                    for j in 2..=k as u64 {
                        weyl *= j;
                    }
                }
                WeylFactor::Power(b, a) => {
                    let k = a.eval(n);
                    if k < 0 {
                        return Err(err(format!("negative exponent {k}")));
                    }
                    weyl *= BigUint::from(b).pow(k as u32);
                }
            }
        }
        let product: BigUint = degrees.iter().map(|&d| BigUint::from(d)).product();
        if product != weyl {
            return Err(err(format!(
                "{} rank {rank}: product of degrees {product} != Weyl order {weyl}",
                self.family
            )));
        }
        let unipotent_exponent = degrees.iter().map(|&d| d as u64 - 1).sum();
        Ok(RootDatum {
            family: self.family,
            rank,
            degrees,
            weyl_order: weyl,
            torsion_primes: self.torsion.clone(),
            unipotent_exponent,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Registry {
    records: Vec<Record>,
}

fn split_terms(field: &str) -> std::result::Result<Vec<&str>, String> {
    let mut out = Vec::new();
    let mut rest = field.trim();
    while !rest.is_empty() {
        if rest.starts_with('{') {
            let close = rest.find('}').ok_or("unclosed `{`")?;
            out.push(&rest[..=close]);
            rest = rest[close + 1..].trim_start();
        } else {
            let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
            out.push(&rest[..end]);
            rest = rest[end..].trim_start();
        }
    }
    Ok(out)
}

fn parse_degree_term(tok: &str) -> std::result::Result<DegreeTerm, String> {
    let Some(inner) = tok.strip_prefix('{').and_then(|t| t.strip_suffix('}')) else {
        return Affine::parse(tok, 'n').map(DegreeTerm::Single);
    };
    let (expr, range) = inner
        .split_once(':')
        .ok_or("range needs `expr : i=lo..hi`")?;
    let range = range
        .trim()
        .strip_prefix("i=")
        .ok_or("range variable must be `i`")?;
    let (lo, hi) = range.split_once("..").ok_or("range needs `lo..hi`")?;
    Ok(DegreeTerm::Range {
        expr: Affine::parse(expr, 'i')?,
        lo: Affine::parse(lo, 'n')?,
        hi: Affine::parse(hi, 'n')?,
    })
}

fn parse_weyl_factor(tok: &str) -> std::result::Result<WeylFactor, String> {
    let bracketed = |s: &str| -> std::result::Result<Affine, String> {
        let inner = s
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| format!("expected `[expr]`, got `{s}`"))?;
        Affine::parse(inner, 'n')
    };
    if let Some(arg) = tok.strip_suffix('!') {
        return bracketed(arg).map(WeylFactor::Factorial);
    }
    if let Some((base, exp)) = tok.split_once('^') {
        let b = base
            .parse::<u64>()
            .map_err(|_| format!("bad base `{base}`"))?;
        return Ok(WeylFactor::Power(b, bracketed(exp)?));
    }
    tok.parse::<u64>()
        .map(WeylFactor::Int)
        .map_err(|_| format!("bad Weyl order factor `{tok}`"))
}

fn parse_record(line: usize, text: &str) -> Result<Record> {
    let err = |message: String| Error::Registry { line, message };
    let fields: Vec<&str> = text.split(',').map(str::trim).collect();
    if fields.len() != 5 {
        return Err(err(format!(
            "expected 5 comma-separated fields, found {}",
            fields.len()
        )));
    }
    let family: Family = fields[0].parse().map_err(|e: Error| err(e.to_string()))?;
    let ranks = if let Some(k) = fields[1].strip_prefix("n>=") {
        RankPattern::AtLeast(
            k.trim()
                .parse()
                .map_err(|_| err(format!("bad rank `{}`", fields[1])))?,
        )
    } else {
        RankPattern::Fixed(
            fields[1]
                .parse()
                .map_err(|_| err(format!("bad rank `{}`", fields[1])))?,
        )
    };
    let degrees = split_terms(fields[2])
        .map_err(|m| err(m.to_string()))?
        .into_iter()
        .map(parse_degree_term)
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(err)?;
    let torsion = if fields[3] == "none" {
        Vec::new()
    } else {
        let mut t = Vec::new();
        for tok in fields[3].split_whitespace() {
            let p: u64 = tok.parse().map_err(|_| err(format!("bad prime `{tok}`")))?;
            if !is_prime(p) {
                return Err(err(format!("torsion entry {p} is not prime")));
            }
            t.push(p);
        }
        t
    };
    let weyl = fields[4]
        .split_whitespace()
        .map(parse_weyl_factor)
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(err)?;
    Ok(Record {
        line,
        family,
        ranks,
        degrees,
        torsion,
        weyl,
    })
}

impl Registry {
    /// Parses a registry file and checks every record: fixed-rank records at
    /// their rank, patterned records for `LOAD_CHECK_RANKS` consecutive ranks.
    pub fn parse(text: &str) -> Result<Registry> {
        let mut records: Vec<Record> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let rec = parse_record(idx + 1, content)?;
            if let Some(prev) = records.iter().find(|r| r.family == rec.family) {
                return Err(Error::Registry {
                    line: rec.line,
                    message: format!("{} already defined on line {}", rec.family, prev.line),
                });
            }
            records.push(rec);
        }
        let registry = Registry { records };
        registry.expanded(LOAD_CHECK_RANKS)?;
        Ok(registry)
    }

    pub fn builtin() -> &'static Registry {
        static BUILTIN: OnceLock<Registry> = OnceLock::new();
        BUILTIN
            .get_or_init(|| Registry::parse(BUILTIN_REGISTRY).expect("built-in registry is valid"))
    }

    pub fn lookup(&self, family: Family, rank: u32) -> Result<RootDatum> {
        let rec = self
            .records
            .iter()
            .find(|r| r.family == family)
            .ok_or_else(|| Error::input(format!("family {family} is not in the registry")))?;
        if !rec.ranks.admits(rank) {
            return Err(Error::input(format!(
                "rank {rank} is not valid for {family}"
            )));
        }
        rec.expand(rank)
    }

    /// Every record expanded: fixed ranks once, patterns for `count` ranks
    /// starting at their minimum.
    pub fn expanded(&self, count: u32) -> Result<Vec<RootDatum>> {
        let mut out = Vec::new();
        for rec in &self.records {
            match rec.ranks {
                RankPattern::Fixed(k) => out.push(rec.expand(k)?),
                RankPattern::AtLeast(k) => {
                    for rank in k..k + count {
                        out.push(rec.expand(rank)?);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn families(&self) -> Vec<Family> {
        self.records.iter().map(|r| r.family).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symplectic_degrees() {
        let sp = lookup(Family::Sp, 4).unwrap();
        assert_eq!(sp.degrees, vec![2, 4, 6, 8]);
        assert_eq!(sp.topological_degrees(), vec![4, 8, 12, 16]);
    }

    #[test]
    fn gl_degrees_and_weyl() {
        let gl = lookup(Family::GL, 3).unwrap();
        assert_eq!(gl.degrees, vec![1, 2, 3]);
        assert_eq!(gl.weyl_order, BigUint::from(6u32));
        assert_eq!(gl.unipotent_exponent, 3);
    }

    #[test]
    fn so_even_is_sorted() {
        let d4 = lookup(Family::SOEven, 4).unwrap();
        assert_eq!(d4.degrees, vec![2, 4, 4, 6]);
        assert_eq!(d4.weyl_order, BigUint::from(192u32));
    }

    #[test]
    fn order_examples() {
        let gl2 = lookup(Family::GL, 2).unwrap();
        assert_eq!(group_order(&gl2, 3), BigUint::from(48u32));
        let gl1 = lookup(Family::GL, 1).unwrap();
        for q in [2u64, 3, 4, 5, 49] {
            assert_eq!(group_order(&gl1, q), BigUint::from(q - 1));
        }
        let sp1 = lookup(Family::Sp, 1).unwrap();
        assert_eq!(group_order(&sp1, 3), BigUint::from(24u32));
    }

    #[test]
    fn torsion() {
        for n in 1..6 {
            assert!(check_torsion_free(&lookup(Family::Sp, n).unwrap(), 2));
            assert!(check_torsion_free(&lookup(Family::GL, n).unwrap(), 2));
        }
        let spin = lookup(Family::Spin, 4).unwrap();
        assert!(!check_torsion_free(&spin, 2));
        assert!(check_torsion_free(&spin, 3));
        let e8 = lookup(Family::E8, 8).unwrap();
        assert!(!check_torsion_free(&e8, 5));
        assert!(check_torsion_free(&e8, 7));
    }

    #[test]
    fn lookup_errors() {
        assert!(lookup(Family::E8, 7).is_err());
        assert!(lookup(Family::GL, 0).is_err());
        assert!(lookup(Family::Spin, 2).is_err());
        assert!("Foo".parse::<Family>().is_err());
        assert_eq!("sp".parse::<Family>().unwrap(), Family::Sp);
        assert_eq!("so_even".parse::<Family>().unwrap(), Family::SOEven);
    }

    #[test]
    fn parser_rejects_bad_weyl_order() {
        let bad = "G2, 2, 2 6, 2, 13\n";
        let err = Registry::parse(bad).unwrap_err();
        assert!(matches!(err, Error::Registry { line: 1, .. }), "{err}");
        let bad = "Sp, n>=1, {2i : i=1..n}, none, [n]!\n";
        assert!(Registry::parse(bad).is_err());
    }

    #[test]
    fn parser_rejects_malformed_lines() {
        for text in [
            "GL, n>=1, {i : i=1..n}, none\n",
            "GL, n>=x, {i : i=1..n}, none, [n]!\n",
            "GL, n>=1, {i : j=1..n}, none, [n]!\n",
            "GL, n>=1, {i : i=1..n}, 4, [n]!\n",
            "GL, n>=1, {i : i=1..n, none, [n]!\n",
            "GL, n>=1, {i : i=1..n}, none, [n]!\nGL, 2, 1 2, none, 2\n",
            "GL, n>=1, {i : i=1..n-1}, none, [n]!\n",
        ] {
            assert!(Registry::parse(text).is_err(), "{text}");
        }
    }

    #[test]
    fn affine_parsing() {
        assert_eq!(Affine::parse("2n-2", 'n').unwrap().eval(5), 8);
        assert_eq!(Affine::parse("n", 'n').unwrap().eval(5), 5);
        assert_eq!(Affine::parse("i+1", 'i').unwrap().eval(5), 6);
        assert_eq!(Affine::parse("-3+n", 'n').unwrap().eval(5), 2);
        assert!(Affine::parse("2x", 'n').is_err());
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\n\nG2, 2, 2 6, 2, 12  # trailing\n";
        let reg = Registry::parse(text).unwrap();
        assert_eq!(reg.lookup(Family::G2, 2).unwrap().degrees, vec![2, 6]);
        assert!(reg.lookup(Family::GL, 1).is_err());
    }
}
