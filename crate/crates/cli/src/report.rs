//! Report sections, their computation and the three output formats.

use std::fmt::Write as _;

use diffdim::groups::{
    chain, closed_forms, generalized_report, kernels_of, projections, settle, twisted_kernels, zariski_indicators,
    AxiomCheck, Chain, Closure, DimensionPolynomial, GeneralizedGroupSpec, GenerationCheck, Schedule,
};
use diffdim::groebner::hilbert_function;
use diffdim::oracle::{brute_slice_rank, OracleConfig};
use diffdim::{Error, Invariants, NumericalPolynomial};
use serde::Serialize;

use crate::job::{describe_schedule, JobSpec};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Serialize)]
pub struct Document {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
    pub job: JobSpec,
    pub max_level: u32,
    pub sections: Vec<Section>,
}

#[derive(Debug, Serialize)]
pub struct PolyOut {
    pub coefficients: NumericalPolynomial,
    pub expanded: String,
    pub binomial: String,
    pub threshold: u32,
    pub proven: bool,
}

impl From<DimensionPolynomial> for PolyOut {
    fn from(p: DimensionPolynomial) -> Self {
        PolyOut {
            expanded: p.poly.render_expanded(),
            binomial: p.poly.render_binomial(),
            coefficients: p.poly,
            threshold: p.threshold,
            proven: p.proven,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OracleRow {
    pub level: u32,
    pub main: u64,
    pub oracle: Option<u64>,
    pub status: OracleStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleStatus {
    Match,
    Mismatch,
    Inconclusive,
}

#[derive(Debug, Serialize)]
#[serde(tag = "section", rename_all = "kebab-case")]
pub enum Section {
    ClosureDims {
        dims: Vec<u64>,
    },
    DimensionPolynomial {
        polynomial: PolyOut,
        invariants: Invariants,
    },
    Stabilization {
        m: u32,
        bound: u32,
        checks: Vec<GenerationCheck>,
    },
    Certificate {
        level: u32,
        verified_to: u32,
        generators: Vec<String>,
    },
    Generalized {
        schedule: String,
        dims: Vec<u64>,
        axioms: Vec<AxiomCheck>,
        polynomial: PolyOut,
        stabilization_m: u32,
        stabilization_bound: u32,
        indicators: Option<Vec<u32>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        indicator_note: Option<String>,
    },
    Projections {
        dims: Vec<u64>,
        axioms: Vec<AxiomCheck>,
        indicators: Vec<u32>,
        chain_indicators: Vec<u32>,
    },
    Kernels {
        dims: Vec<u64>,
        polynomial: PolyOut,
    },
    Twisted {
        dims: Vec<u64>,
        axioms: Vec<AxiomCheck>,
        polynomial: PolyOut,
    },
    Oracle {
        window: u32,
        rows: Vec<OracleRow>,
    },
}

impl Section {
    fn dims(&self) -> Option<&[u64]> {
        match self {
            Section::ClosureDims { dims }
            | Section::Generalized { dims, .. }
            | Section::Projections { dims, .. }
            | Section::Kernels { dims, .. }
            | Section::Twisted { dims, .. } => Some(dims),
            _ => None,
        }
    }
}

pub fn closure_dims(c: &Closure, max_level: u32) -> Result<Section, Error> {
    Ok(Section::ClosureDims { dims: c.dims(max_level)? })
}

pub fn dimension_polynomial(c: &Closure) -> Result<Section, Error> {
    let p = c.dimension_polynomial()?;
    let invariants = p.poly.invariants(c.n())?;
    Ok(Section::DimensionPolynomial { polynomial: p.into(), invariants })
}

pub fn stabilization(c: &Closure) -> Result<Section, Error> {
    let st = c.stabilization()?;
    Ok(Section::Stabilization { m: st.m, bound: st.bound, checks: st.checks })
}

pub fn certificate(c: &Closure) -> Result<Section, Error> {
    let cert = c.certificate(None)?;
    let d = c.descriptor();
    Ok(Section::Certificate {
        level: cert.level,
        verified_to: cert.verified_to,
        generators: cert.generators.iter().map(|g| g.render(d.family, &d.variables)).collect(),
    })
}

pub fn generalized(spec: &GeneralizedGroupSpec, max_level: u32, horizon: u32) -> Result<Section, Error> {
    let r = generalized_report(spec, max_level)?;
    let (indicators, indicator_note) = match zariski_indicators(spec, max_level, horizon) {
        Ok(j) => (Some(j), None),
        Err(e @ Error::IndicatorUnresolved { .. }) => (None, Some(format!("{e}; raise --horizon"))),
        Err(e) => return Err(e),
    };
    Ok(Section::Generalized {
        schedule: describe_schedule(&spec.schedule),
        dims: r.dims,
        axioms: r.axioms,
        polynomial: r.polynomial.into(),
        stabilization_m: r.stabilization.m,
        stabilization_bound: r.stabilization.bound,
        indicators,
        indicator_note,
    })
}

pub fn projection(spec: &GeneralizedGroupSpec, max_level: u32, horizon: u32) -> Result<Section, Error> {
    let p = projections(spec, max_level, horizon)?;
    Ok(Section::Projections {
        dims: p.dims,
        axioms: p.axioms,
        indicators: p.indicators,
        chain_indicators: p.chain_indicators,
    })
}

pub fn kernel(spec: &GeneralizedGroupSpec, c: &Closure, max_level: u32) -> Result<Section, Error> {
    let tail = match &spec.schedule {
        Schedule::Explicit { tail_from, .. } => Some(*tail_from),
        _ => None,
    };
    let g = chain(spec, c, max_level.max(tail.unwrap_or(0)))?;
    g.validate()?;
    let head = Chain { n: g.n, s: g.s, levels: g.levels[..=max_level as usize].to_vec() };
    let k = kernels_of(&head)?;
    let level_l = tail.map(|t| &g.levels[t as usize]);
    let (_, (poly, proven)) = closed_forms(spec, c, level_l)?;
    let polynomial = settle(poly, proven, &k.dims)?;
    Ok(Section::Kernels { dims: k.dims, polynomial: polynomial.into() })
}

pub fn twisted(spec: &GeneralizedGroupSpec, max_level: u32) -> Result<Section, Error> {
    let t = twisted_kernels(spec, max_level)?;
    Ok(Section::Twisted { dims: t.dims, axioms: t.axioms, polynomial: t.polynomial.into() })
}

/// Main-path `dim L_i` against the brute-force rank for every level.
pub fn oracle(c: &Closure, max_level: u32, window: u32) -> Result<Section, Error> {
    let d = c.descriptor();
    let st = c.groebner_basis().staircase();
    let cfg = OracleConfig { window, ..OracleConfig::default() };
    let mut rows = Vec::new();
    for level in 0..=max_level {
        let main = hilbert_function(&st, d.n, level)?;
        let (oracle, status) = match brute_slice_rank(d.n, &d.generators, level, cfg) {
            Ok(r) if r == main => (Some(r), OracleStatus::Match),
            Ok(r) => (Some(r), OracleStatus::Mismatch),
            Err(Error::OracleInconclusive { .. }) => (None, OracleStatus::Inconclusive),
            Err(e) => return Err(e),
        };
        rows.push(OracleRow { level, main, oracle, status });
    }
    Ok(Section::Oracle { window, rows })
}

/// The exit-relevant outcome of any oracle section: mismatches are
/// invariant failures, inconclusive rows are guard failures.
pub fn oracle_verdict(doc: &Document) -> Result<(), CliError> {
    for s in &doc.sections {
        if let Section::Oracle { rows, .. } = s {
            if let Some(r) = rows.iter().find(|r| r.status == OracleStatus::Mismatch) {
                return Err(CliError::OracleMismatch { level: r.level, main: r.main, oracle: r.oracle.unwrap_or_default() });
            }
            if let Some(r) = rows.iter().find(|r| r.status == OracleStatus::Inconclusive) {
                return Err(CliError::OracleInconclusive { level: r.level });
            }
        }
    }
    Ok(())
}

pub fn emit(doc: &Document, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).map_err(|e| CliError::Core(Error::Invariant(e.to_string())))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let tables: Vec<&[u64]> = doc.sections.iter().filter_map(Section::dims).collect();
            let [dims] = tables[..] else {
                return Err(CliError::Usage(format!(
                    "csv output needs exactly one dimension table; `{}` produces {}",
                    doc.command,
                    tables.len()
                )));
            };
            let mut out = String::from("level,dim\n");
            for (i, d) in dims.iter().enumerate() {
                writeln!(out, "{i},{d}").expect("string write");
            }
            Ok(out)
        }
        Format::Table => Ok(table(doc)),
    }
}

fn header(doc: &Document, out: &mut String) {
    let j = &doc.job;
    let label = if j.label.is_empty() { String::new() } else { format!(" \"{}\"", j.label) };
    writeln!(out, "job{label}: {} group, n = {}, variables {}", j.family, j.n, j.variables.join(", ")).unwrap();
    for g in &j.generators {
        writeln!(out, "  {g}").unwrap();
    }
    writeln!(out, "schedule: {}", describe_schedule(&j.schedule)).unwrap();
    if let Some(f) = &doc.fixture {
        writeln!(out, "fixture: {f}").unwrap();
    }
}

fn dims_table(out: &mut String, title: &str, dims: &[u64]) {
    writeln!(out, "{:>5}  {title}", "level").unwrap();
    for (i, d) in dims.iter().enumerate() {
        writeln!(out, "{i:>5}  {d}").unwrap();
    }
}

fn axioms_line(out: &mut String, axioms: &[AxiomCheck]) {
    let ok = axioms.iter().all(|a| a.orders_bounded && a.nested && a.shift_closed);
    let top = axioms.len().saturating_sub(1);
    writeln!(out, "axioms (order bound, nesting, shift closure): {} on levels 0..={top}", if ok { "hold" } else { "FAIL" })
        .unwrap();
}

fn poly_line(symbol: &str, p: &PolyOut) -> String {
    format!("{symbol}(t) = {} (threshold {})", p.expanded, p.threshold)
}

/// `j_i = i for i ≤ 3; j_i = i+1 for i ≥ 4 (checked to 10)`.
pub fn indicator_summary(j: &[u32]) -> String {
    let offset = |i: usize| i64::from(j[i]) - i as i64;
    let mut runs: Vec<(usize, usize, i64)> = Vec::new();
    for i in 0..j.len() {
        match runs.last_mut() {
            Some(r) if r.2 == offset(i) => r.1 = i,
            _ => runs.push((i, i, offset(i))),
        }
    }
    let last = j.len().saturating_sub(1);
    let parts: Vec<String> = runs
        .iter()
        .map(|&(a, b, k)| {
            let lhs = if k == 0 { "j_i = i".to_string() } else { format!("j_i = i+{k}") };
            let range = match (a, b) {
                (a, b) if a == b && b != last => format!("for i = {a}"),
                (0, b) if b == last => format!("for all i ≤ {last}"),
                (0, b) => format!("for i ≤ {b}"),
                (a, b) if b == last => format!("for i ≥ {a} (checked to {last})"),
                (a, b) => format!("for {a} ≤ i ≤ {b}"),
            };
            format!("{lhs} {range}")
        })
        .collect();
    parts.join("; ")
}

fn table(doc: &Document) -> String {
    let mut out = String::new();
    header(doc, &mut out);
    for s in &doc.sections {
        out.push('\n');
        match s {
            Section::ClosureDims { dims } => {
                writeln!(out, "Zariski closure dimensions").unwrap();
                dims_table(&mut out, "dim G_i", dims);
            }
            Section::DimensionPolynomial { polynomial, invariants } => {
                writeln!(
                    out,
                    "{}; σ-type {}, typical σ-dim {}, σ-dim {}",
                    poly_line("Φ", polynomial),
                    invariants.sigma_type,
                    invariants.typical_sigma_dim,
                    invariants.sigma_dim
                )
                .unwrap();
                writeln!(out, "binomial form: {}", polynomial.binomial).unwrap();
            }
            Section::Stabilization { m, bound, checks } => {
                writeln!(out, "stabilization index m = {m} (D = {bound})").unwrap();
                writeln!(out, "{:>5}  L_(i+1) generated by L_i", "level").unwrap();
                for c in checks {
                    writeln!(out, "{:>5}  {}", c.level, if c.holds { "yes" } else { "no" }).unwrap();
                }
            }
            Section::Certificate { level, verified_to, generators } => {
                writeln!(out, "σ-generators from level {level} (regeneration verified to level {verified_to}):").unwrap();
                if generators.is_empty() {
                    writeln!(out, "  (none: the ideal is zero)").unwrap();
                }
                for g in generators {
                    writeln!(out, "  {g}").unwrap();
                }
            }
            Section::Generalized {
                schedule,
                dims,
                axioms,
                polynomial,
                stabilization_m,
                stabilization_bound,
                indicators,
                indicator_note,
            } => {
                writeln!(out, "generalized chain, schedule {schedule}").unwrap();
                let ind = match (indicators, indicator_note) {
                    (Some(j), _) => format!("indicators {}", indicator_summary(j)),
                    (None, Some(note)) => format!("indicators unresolved: {note}"),
                    (None, None) => "indicators unavailable".into(),
                };
                writeln!(out, "{}; {ind}", poly_line("Ψ", polynomial)).unwrap();
                writeln!(out, "stabilization index m = {stabilization_m} (bound {stabilization_bound})").unwrap();
                axioms_line(&mut out, axioms);
                dims_table(&mut out, "dim G[i]", dims);
            }
            Section::Projections { dims, axioms, indicators, chain_indicators } => {
                writeln!(out, "projected chain F[i] = G[i+1] ∩ (order ≤ i)").unwrap();
                axioms_line(&mut out, axioms);
                writeln!(out, "{:>5}  {:>8}  {:>4}  {:>4}", "level", "dim F[i]", "f_i", "j_i").unwrap();
                for (i, d) in dims.iter().enumerate() {
                    writeln!(out, "{i:>5}  {d:>8}  {:>4}  {:>4}", indicators[i], chain_indicators[i]).unwrap();
                }
            }
            Section::Kernels { dims, polynomial } => {
                writeln!(out, "kernels H[i] of the truncation G[i] → G[i-1]").unwrap();
                writeln!(out, "{}", poly_line("κ", polynomial)).unwrap();
                dims_table(&mut out, "dim H[i]", dims);
            }
            Section::Twisted { dims, axioms, polynomial } => {
                writeln!(out, "twisted kernels over n - 1 shifts").unwrap();
                writeln!(out, "{}", poly_line("κ", polynomial)).unwrap();
                axioms_line(&mut out, axioms);
                dims_table(&mut out, "dim H'[i]", dims);
            }
            Section::Oracle { window, rows } => {
                writeln!(out, "oracle cross-check of dim L_i (escalation window {window})").unwrap();
                writeln!(out, "{:>5}  {:>8}  {:>8}  status", "level", "main", "oracle").unwrap();
                for r in rows {
                    let o = r.oracle.map_or("-".to_string(), |v| v.to_string());
                    let st = match r.status {
                        OracleStatus::Match => "match",
                        OracleStatus::Mismatch => "MISMATCH",
                        OracleStatus::Inconclusive => "inconclusive",
                    };
                    writeln!(out, "{:>5}  {:>8}  {o:>8}  {st}", r.level, r.main).unwrap();
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::indicator_summary;

    #[test]
    fn indicator_runs() {
        let j: Vec<u32> = (0..=10).map(|i| if i <= 3 { i } else { i + 1 }).collect();
        assert_eq!(indicator_summary(&j), "j_i = i for i ≤ 3; j_i = i+1 for i ≥ 4 (checked to 10)");
        assert_eq!(indicator_summary(&[0, 1, 2]), "j_i = i for all i ≤ 2");
        assert_eq!(indicator_summary(&[0, 2, 2, 4]), "j_i = i for i = 0; j_i = i+1 for i = 1; j_i = i for i = 2; j_i = i+1 for i ≥ 3 (checked to 3)");
    }
}
