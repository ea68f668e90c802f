//! Presentations of `MU^*(BG(F_q)) (x) F_l` and `CH^*(BGL(n, F_q)) / l^b` as
//! free graded polynomial rings, with their Poincare series and the
//! Chow/cobordism comparison for GL_n.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{GLParams, GaloisParams};
use crate::error::{Error, Hypothesis, Result};
use crate::poly::{hilbert_series_of_free_polynomial_ring, TruncatedSeries};
use crate::rootdata::{check_torsion_free, lookup, Family, RootDatum};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theory {
    Cobordism,
    Chow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grading {
    Chow,
    Topological,
}

/// Which result a presentation instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// `MU^*(BG(k)) (x) F_l = F_l[s_i : r | d_i]`.
    CobordismTheorem,
    /// `CH^*(BGL(n,k))/l = Z/l[c_r, ..., c_mr]`.
    ChowGlTheorem,
    /// `CH^*(BGL(n,k))/l^b = Z/l^b[c_1, ..., c_n]` when `l^b | q - 1`.
    ChowGlCorollary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub algebraic_degree: u32,
    pub topological_degree: u32,
}

impl Generator {
    fn new(name: String, algebraic_degree: u32) -> Self {
        Generator {
            name,
            algebraic_degree,
            topological_degree: 2 * algebraic_degree,
        }
    }

    pub fn degree(&self, grading: Grading) -> u32 {
        match grading {
            Grading::Chow => self.algebraic_degree,
            Grading::Topological => self.topological_degree,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub family: Family,
    pub rank: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub q: u64,
}

/// A free graded polynomial ring over `Z/l^b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedPresentation {
    pub schema_version: u32,
    pub theory: Theory,
    pub group: GroupSpec,
    pub field: FieldSpec,
    pub prime: u64,
    pub b: u32,
    pub r: u64,
    pub m: Option<u64>,
    pub grading: Grading,
    pub provenance: Provenance,
    pub generators: Vec<Generator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<TruncatedSeries>,
}

impl GradedPresentation {
    /// `l^b`.
    pub fn modulus(&self) -> u64 {
        self.prime.pow(self.b)
    }

    pub fn degrees(&self, grading: Grading) -> Vec<u32> {
        self.generators.iter().map(|g| g.degree(grading)).collect()
    }

    pub fn with_grading(mut self, grading: Grading) -> Self {
        self.grading = grading;
        self
    }

    /// Attaches the Poincare series in the presentation's own grading.
    pub fn with_series(mut self, cutoff: u32) -> Self {
        self.series = Some(poincare_series(&self, cutoff, self.grading));
        self
    }

    /// `F_5`, `Z/5`, `Z/25`.
    pub fn coefficient_ring(&self) -> String {
        match (self.theory, self.b) {
            (Theory::Cobordism, 1) => format!("F_{}", self.prime),
            _ => format!("Z/{}", self.modulus()),
        }
    }

    fn coefficient_ring_latex(&self) -> String {
        match (self.theory, self.b) {
            (Theory::Cobordism, 1) => format!("\\mathbb{{F}}{}", latex_index(self.prime)),
            _ => format!("\\mathbb{{Z}}/{}", self.modulus()),
        }
    }

    /// `F_5[q_2, q_4]`, or just the coefficient ring when there are no
    /// generators.
    pub fn ring_text(&self) -> String {
        let base = self.coefficient_ring();
        if self.generators.is_empty() {
            return base;
        }
        let names: Vec<&str> = self.generators.iter().map(|g| g.name.as_str()).collect();
        format!("{base}[{}]", names.join(", "))
    }

    /// `\mathbb{F}_5[q_2,q_4]`.
    pub fn render_latex(&self) -> String {
        let base = self.coefficient_ring_latex();
        if self.generators.is_empty() {
            return base;
        }
        let names: Vec<String> = self
            .generators
            .iter()
            .map(|g| latex_subscript(&g.name))
            .collect();
        format!("{base}[{}]", names.join(","))
    }

    /// Ring on the first line, generator degrees in the active grading on
    /// the second, series (when attached) on the third.
    pub fn render_text(&self) -> String {
        let mut out = self.ring_text();
        out.push('\n');
        let label = match self.grading {
            Grading::Chow => "chow",
            Grading::Topological => "topological",
        };
        if self.generators.is_empty() {
            out.push_str(&format!("degrees ({label}): none\n"));
        } else {
            let parts: Vec<String> = self
                .generators
                .iter()
                .map(|g| format!("{}:{}", g.name, g.degree(self.grading)))
                .collect();
            out.push_str(&format!("degrees ({label}): {}\n", parts.join(" ")));
        }
        if let Some(s) = &self.series {
            out.push_str(&format!("series ({label}, D={}): {s}\n", s.cutoff()));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::input(format!("bad presentation JSON: {e}")))
    }
}

impl fmt::Display for GradedPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring_text())
    }
}

fn latex_index(k: u64) -> String {
    if k < 10 {
        format!("_{k}")
    } else {
        format!("_{{{k}}}")
    }
}

fn latex_subscript(name: &str) -> String {
    match name.split_once('_') {
        Some((stem, idx)) if idx.len() > 1 => format!("{stem}_{{{idx}}}"),
        _ => name.to_string(),
    }
}

/// Name of the generator of algebraic degree `degree`, sitting at position
/// `index` (0-based) in the ascending degree list.
fn generator_name(family: Family, degree: u32, index: usize) -> String {
    match family {
        Family::GL => format!("c_{degree}"),
        Family::Sp => format!("q_{}", degree / 2),
        _ => format!("s_{}", index + 1),
    }
}

fn check_coprime(params: &GaloisParams) -> Result<()> {
    if params.l == params.p {
        return Err(Error::precondition(
            Hypothesis::CoprimeCharacteristic,
            format!("l = p = {}", params.l),
        ));
    }
    Ok(())
}

/// `MU^*(BG(F_q)) (x) F_l = F_l[s_i : r | d_i]` (equivalently `2r | |s_i|`).
pub fn cobordism_presentation(
    datum: &RootDatum,
    params: &GaloisParams,
) -> Result<GradedPresentation> {
    check_coprime(params)?;
    if !check_torsion_free(datum, params.l) {
        return Err(Error::precondition(
            Hypothesis::TorsionFree,
            format!(
                "l = {} is a torsion prime of {} rank {}",
                params.l, datum.family, datum.rank
            ),
        ));
    }
    let mut generators: Vec<Generator> = datum
        .degrees
        .iter()
        .enumerate()
        .filter(|(_, &d)| (d as u64).is_multiple_of(params.r))
        .map(|(i, &d)| Generator::new(generator_name(datum.family, d, i), d))
        .collect();
    sort_generators(&mut generators);
    let m = (datum.family == Family::GL).then(|| datum.rank as u64 / params.r);
    Ok(GradedPresentation {
        schema_version: SCHEMA_VERSION,
        theory: Theory::Cobordism,
        group: GroupSpec {
            family: datum.family,
            rank: datum.rank,
        },
        field: FieldSpec {
            p: params.p,
            q: params.q,
        },
        prime: params.l,
        b: 1,
        r: params.r,
        m,
        grading: Grading::Topological,
        provenance: Provenance::CobordismTheorem,
        generators,
        series: None,
    })
}

fn sort_generators(gens: &mut [Generator]) {
    gens.sort_by(|a, b| {
        a.algebraic_degree
            .cmp(&b.algebraic_degree)
            .then_with(|| natural_key(&a.name).cmp(&natural_key(&b.name)))
    });
}

fn natural_key(name: &str) -> (String, u64) {
    match name.split_once('_') {
        Some((stem, idx)) => (stem.to_string(), idx.parse().unwrap_or(0)),
        None => (name.to_string(), 0),
    }
}

/// `CH^*(BGL(n, F_q))/l = Z/l[c_r, c_2r, ..., c_mr]` for `b = 1`, and
/// `Z/l^b[c_1, ..., c_n]` for `b >= 2` when `l^b | q - 1`.
pub fn chow_gl_presentation(params: &GLParams, b: u32) -> Result<GradedPresentation> {
    let base = &params.base;
    check_coprime(base)?;
    if base.l == 2 {
        return Err(Error::precondition(Hypothesis::OddPrime, "l = 2"));
    }
    if b == 0 {
        return Err(Error::input("b must be at least 1"));
    }
    let modulus = base
        .l
        .checked_pow(b)
        .ok_or_else(|| Error::input(format!("l^b = {}^{b} does not fit in 64 bits", base.l)))?;
    let (generators, provenance) = if b == 1 {
        let gens = (1..=params.m)
            .map(|i| {
                let d = (i * base.r) as u32;
                Generator::new(format!("c_{d}"), d)
            })
            .collect();
        (gens, Provenance::ChowGlTheorem)
    } else {
        if !(base.r == 1 && base.a >= b) {
            return Err(Error::precondition(
                Hypothesis::RootsOfUnity,
                format!("l^b = {modulus} does not divide q - 1 = {}", base.q - 1),
            ));
        }
        let gens = (1..=params.n as u32)
            .map(|d| Generator::new(format!("c_{d}"), d))
            .collect();
        (gens, Provenance::ChowGlCorollary)
    };
    Ok(GradedPresentation {
        schema_version: SCHEMA_VERSION,
        theory: Theory::Chow,
        group: GroupSpec {
            family: Family::GL,
            rank: params.n as u32,
        },
        field: FieldSpec {
            p: base.p,
            q: base.q,
        },
        prime: base.l,
        b,
        r: base.r,
        m: Some(params.m),
        grading: Grading::Chow,
        provenance,
        generators,
        series: None,
    })
}

pub fn poincare_series(
    pres: &GradedPresentation,
    cutoff: u32,
    grading: Grading,
) -> TruncatedSeries {
    hilbert_series_of_free_polynomial_ring(&pres.degrees(grading), cutoff)
}

/// Outcome of matching the Chow and cobordism presentations of `BGL_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub schema_version: u32,
    pub n: u64,
    pub q: u64,
    pub prime: u64,
    pub r: u64,
    pub m: u64,
    pub equal: bool,
    /// Chow generator degrees, doubled to topological grading.
    pub chow_topological_degrees: Vec<u32>,
    pub cobordism_topological_degrees: Vec<u32>,
    pub chow_generators: usize,
    pub cobordism_generators: usize,
}

impl ComparisonReport {
    pub fn render_text(&self) -> String {
        format!(
            "{}: GL_{} over F_{} mod {} (r={}, m={}); chow degrees {:?}, cobordism degrees {:?}\n",
            if self.equal { "equal" } else { "mismatch" },
            self.n,
            self.q,
            self.prime,
            self.r,
            self.m,
            self.chow_topological_degrees,
            self.cobordism_topological_degrees,
        )
    }
}

/// Checks that the two presentations have the same number of generators and
/// the same degree multiset once Chow degrees are doubled.
pub fn compare_chow_cobordism_gl(params: &GLParams) -> Result<ComparisonReport> {
    let chow = chow_gl_presentation(params, 1)?;
    let datum = lookup(Family::GL, params.n as u32)?;
    let cob = cobordism_presentation(&datum, &params.base)?;
    let mut chow_deg: Vec<u32> = chow
        .generators
        .iter()
        .map(|g| 2 * g.algebraic_degree)
        .collect();
    let mut cob_deg: Vec<u32> = cob
        .generators
        .iter()
        .map(|g| g.topological_degree)
        .collect();
    chow_deg.sort_unstable();
    cob_deg.sort_unstable();
    Ok(ComparisonReport {
        schema_version: SCHEMA_VERSION,
        n: params.n,
        q: params.base.q,
        prime: params.base.l,
        r: params.base.r,
        m: params.m,
        equal: chow.generators.len() == cob.generators.len() && chow_deg == cob_deg,
        chow_generators: chow.generators.len(),
        cobordism_generators: cob.generators.len(),
        chow_topological_degrees: chow_deg,
        cobordism_topological_degrees: cob_deg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{galois_params_for_field, gl_params};

    fn sp(n: u32, q: u64) -> GradedPresentation {
        let datum = lookup(Family::Sp, n).unwrap();
        cobordism_presentation(&datum, &galois_params_for_field(q, 5).unwrap()).unwrap()
    }

    fn gl(n: u64, q: u64, l: u64) -> GLParams {
        gl_params(galois_params_for_field(q, l).unwrap(), n).unwrap()
    }

    #[test]
    fn symplectic_block() {
        assert_eq!(sp(3, 81).ring_text(), "F_5[q_1, q_2, q_3]");
        assert_eq!(sp(3, 81).degrees(Grading::Topological), vec![4, 8, 12]);
        assert_eq!(sp(3, 9).ring_text(), "F_5[q_1, q_2, q_3]");
        assert_eq!(sp(5, 3).ring_text(), "F_5[q_2, q_4]");
        assert_eq!(sp(5, 3).degrees(Grading::Topological), vec![8, 16]);
        assert_eq!(sp(4, 27).render_latex(), "\\mathbb{F}_5[q_2,q_4]");
    }

    #[test]
    fn gl3_cobordism_is_trivial() {
        let datum = lookup(Family::GL, 3).unwrap();
        let p = cobordism_presentation(&datum, &galois_params_for_field(3, 5).unwrap()).unwrap();
        assert!(p.generators.is_empty());
        assert_eq!(p.ring_text(), "F_5");
    }

    #[test]
    fn torsion_gate() {
        let datum = lookup(Family::Spin, 4).unwrap();
        let err =
            cobordism_presentation(&datum, &galois_params_for_field(3, 2).unwrap()).unwrap_err();
        assert!(matches!(
            err,
            Error::Precondition {
                hypothesis: Hypothesis::TorsionFree,
                ..
            }
        ));
        assert!(err.to_string().contains("torsion"));
    }

    #[test]
    fn coprime_gate() {
        let mut params = galois_params_for_field(3, 5).unwrap();
        params.p = 5;
        let datum = lookup(Family::Sp, 2).unwrap();
        assert!(cobordism_presentation(&datum, &params)
            .unwrap_err()
            .is_precondition());
    }

    #[test]
    fn chow_examples() {
        assert_eq!(
            chow_gl_presentation(&gl(4, 3, 5), 1).unwrap().ring_text(),
            "Z/5[c_4]"
        );
        let trivial = chow_gl_presentation(&gl(3, 3, 5), 1).unwrap();
        assert_eq!(trivial.ring_text(), "Z/5");
        assert_eq!(trivial.m, Some(0));
        assert_eq!(
            chow_gl_presentation(&gl(2, 11, 5), 1).unwrap().ring_text(),
            "Z/5[c_1, c_2]"
        );
    }

    #[test]
    fn chow_corollary() {
        let err = chow_gl_presentation(&gl(2, 11, 5), 2).unwrap_err();
        assert!(matches!(
            err,
            Error::Precondition {
                hypothesis: Hypothesis::RootsOfUnity,
                ..
            }
        ));
        assert!(err.to_string().contains("25 does not divide q - 1 = 10"));
        // 101 - 1 = 4 * 25
        let p = chow_gl_presentation(&gl(3, 101, 5), 2).unwrap();
        assert_eq!(p.ring_text(), "Z/25[c_1, c_2, c_3]");
        assert_eq!(p.provenance, Provenance::ChowGlCorollary);
        assert!(chow_gl_presentation(&gl(3, 101, 5), 3).is_err());
        // r > 1 is rejected for b >= 2 even if l^b | q^r - 1
        assert!(chow_gl_presentation(&gl(2, 7, 5), 2).is_err());
    }

    #[test]
    fn chow_rejects_even_prime() {
        let err = chow_gl_presentation(&gl(2, 3, 2), 1).unwrap_err();
        assert!(matches!(
            err,
            Error::Precondition {
                hypothesis: Hypothesis::OddPrime,
                ..
            }
        ));
        assert!(err.to_string().contains("l must be odd"));
    }

    #[test]
    fn series_examples() {
        let c4 = chow_gl_presentation(&gl(4, 3, 5), 1).unwrap();
        assert_eq!(
            poincare_series(&c4, 8, Grading::Chow).coefficients,
            vec![1, 0, 0, 0, 1, 0, 0, 0, 1]
        );
        let trivial = chow_gl_presentation(&gl(3, 3, 5), 1).unwrap();
        assert_eq!(
            poincare_series(&trivial, 3, Grading::Chow).coefficients,
            vec![1, 0, 0, 0]
        );
        let sp1 = sp(1, 81);
        assert_eq!(
            poincare_series(&sp1, 8, Grading::Topological).coefficients,
            vec![1, 0, 0, 0, 1, 0, 0, 0, 1]
        );
    }

    #[test]
    fn comparison_examples() {
        let rep = compare_chow_cobordism_gl(&gl(4, 3, 5)).unwrap();
        assert!(rep.equal);
        assert_eq!(rep.chow_topological_degrees, vec![8]);
        assert!(compare_chow_cobordism_gl(&gl(3, 3, 5)).unwrap().equal);
        let rep = compare_chow_cobordism_gl(&gl(5, 4, 3)).unwrap();
        assert!(rep.equal);
        assert_eq!(rep.r, 1);
        assert_eq!(rep.cobordism_generators, 5);
    }

    #[test]
    fn generator_naming() {
        let e6 = lookup(Family::E6, 6).unwrap();
        let p = cobordism_presentation(&e6, &galois_params_for_field(11, 5).unwrap()).unwrap();
        assert_eq!(p.ring_text(), "F_5[s_1, s_2, s_3, s_4, s_5, s_6]");
        let sl = lookup(Family::SL, 11).unwrap();
        let p = cobordism_presentation(&sl, &galois_params_for_field(11, 5).unwrap()).unwrap();
        assert!(p.render_latex().contains("s_{10}"));
    }

    #[test]
    fn json_round_trip() {
        let p = sp(4, 3).with_series(16);
        let back = GradedPresentation::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
        let v: serde_json::Value = serde_json::from_str(&p.to_json()).unwrap();
        assert_eq!(v["group"]["family"], "Sp");
        assert_eq!(v["generators"][1]["topological_degree"], 16);
        assert_eq!(v["schema_version"], 1);
    }
}
