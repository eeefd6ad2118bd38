//! Bundled fixtures and a seeded random corpus checked end to end.

use diffdim::groebner::hilbert_function;
use diffdim::groups::{generalized_report, kernels, projections, Closure, GeneralizedGroupSpec, Schedule};
use diffdim::oracle::{brute_slice_rank, random_corpus, random_generalized, CorpusParams, OracleConfig};
use diffdim::Error;

use crate::fixtures::FIXTURES;

pub struct Outcome {
    pub lines: Vec<String>,
    pub failures: usize,
}

fn record(out: &mut Outcome, name: &str, result: Result<String, String>) {
    match result {
        Ok(detail) => out.lines.push(format!("[PASS] {name}: {detail}")),
        Err(detail) => {
            out.failures += 1;
            out.lines.push(format!("[FAIL] {name}: {detail}"));
        }
    }
}

fn check_fixture(f: &crate::fixtures::Fixture) -> Result<String, String> {
    let job = f.job();
    let spec = job.spec().map_err(|e| e.to_string())?;
    let closure = Closure::new(&spec.base).map_err(|e| e.to_string())?;
    let top = f.closure_dims.len() as u32 - 1;
    let dims = closure.dims(top).map_err(|e| e.to_string())?;
    if dims != f.closure_dims {
        return Err(format!("closure dims {dims:?}, expected {:?}", f.closure_dims));
    }
    let top = f.chain_dims.len() as u32 - 1;
    let r = generalized_report(&spec, top).map_err(|e| e.to_string())?;
    if r.dims != f.chain_dims {
        return Err(format!("chain dims {:?}, expected {:?}", r.dims, f.chain_dims));
    }
    let p = r.polynomial.poly.render_expanded();
    if p != f.chain_polynomial {
        return Err(format!("polynomial {p}, expected {}", f.chain_polynomial));
    }
    Ok(format!("dims {:?}, polynomial {p} (threshold {})", r.dims, r.polynomial.threshold))
}

pub fn fixtures(out: &mut Outcome) {
    for f in FIXTURES {
        record(out, &format!("fixture {}", f.id), check_fixture(f));
    }
}

/// Oracle agreement, the quotient identity and the projection lag bound on
/// seeded random instances. Inconclusive oracle runs are counted, not failed.
pub fn corpus(out: &mut Outcome, seed: u64, count: usize, window: u32) {
    let params = CorpusParams::default();
    let cfg = OracleConfig { window, ..OracleConfig::default() };
    let mut compared = 0;
    let mut inconclusive = 0;
    let result = (|| -> Result<(), String> {
        for d in random_corpus(seed, count, &params) {
            let c = Closure::new(&d).map_err(|e| format!("{}: {e}", d.label))?;
            let st = c.groebner_basis().staircase();
            let dims = c.dims(6).map_err(|e| e.to_string())?;
            let k = kernels(&GeneralizedGroupSpec::new(d.clone(), Schedule::Zariski), 6).map_err(|e| e.to_string())?;
            for i in 0..=6u32 {
                let main = hilbert_function(&st, d.n, i).map_err(|e| e.to_string())?;
                match brute_slice_rank(d.n, &d.generators, i, cfg) {
                    Ok(r) if r == main => compared += 1,
                    Ok(r) => return Err(format!("{} level {i}: main {main}, oracle {r}", d.label)),
                    Err(Error::OracleInconclusive { .. }) => inconclusive += 1,
                    Err(e) => return Err(e.to_string()),
                }
                let step = if i == 0 { dims[0] } else { dims[i as usize] - dims[i as usize - 1] };
                if step != k.dims[i as usize] {
                    return Err(format!("{} level {i}: quotient identity fails", d.label));
                }
            }
        }
        Ok(())
    })();
    record(
        out,
        &format!("corpus seed {seed}"),
        result.map(|()| format!("{count} instances, {compared} oracle agreements, {inconclusive} inconclusive")),
    );

    let result = (|| -> Result<usize, String> {
        let mut lagging = 0;
        for sp in random_generalized(seed, count / 2, &CorpusParams { max_n: 2, ..params }) {
            let p = projections(&sp, 6, 18).map_err(|e| format!("{}: {e}", sp.base.label))?;
            for (i, (&f, &j)) in p.indicators.iter().zip(&p.chain_indicators).enumerate() {
                if j > i as u32 {
                    lagging += 1;
                    if f >= j {
                        return Err(format!("{} level {i}: f = {f}, j = {j}", sp.base.label));
                    }
                }
            }
        }
        Ok(lagging)
    })();
    record(
        out,
        &format!("generalized corpus seed {seed}"),
        result.map(|l| format!("{} instances, lag bound holds on {l} lagging levels", count / 2)),
    );
}
