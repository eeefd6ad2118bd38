use serde::{Deserialize, Serialize};

use crate::diffterm::{DiffTerm, GroupDescriptor, SliceVector};
use crate::groebner::{buchberger, graded_hilbert_polynomial, Staircase};
use crate::error::{Error, Result};
use crate::exactla::SliceBasis;
use crate::monoid::ShiftMonomial;
use crate::numpoly::NumericalPolynomial;

use super::closure::{
    ambient_dim, shift_closure, stabilization_from, tighten, top_dim, Closure, DimensionPolynomial, Stabilization,
};

/// How the ideal of each level `G[i]` is produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Schedule {
    /// `G[i] = G_i`, the Zariski closures.
    Zariski,
    /// `G[i]` cut out by the Zariski slice of order `i − d`.
    Delay { d: u32 },
    /// Levels `0..=tail_from` list `(generator index, shift)` pairs; every
    /// later level is generated by the previous one and its shifts.
    Explicit { levels: Vec<Vec<(usize, ShiftMonomial)>>, tail_from: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedGroupSpec {
    pub base: GroupDescriptor,
    pub schedule: Schedule,
}

/// Per-level outcome of the axiom checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub level: u32,
    pub orders_bounded: bool,
    pub nested: bool,
    pub shift_closed: bool,
}

/// The ideal slices of a chain `G[0], G[1], …`, level `i` at ambient level `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub n: usize,
    pub s: usize,
    pub levels: Vec<SliceBasis>,
}

impl Chain {
    pub fn dims(&self) -> Vec<u64> {
        self.levels
            .iter()
            .enumerate()
            .map(|(i, b)| ambient_dim(self.n, self.s, i as u32) - b.dim() as u64)
            .collect()
    }

    /// Checks every level: rows of order `≤ i`, `G[i−1] ⊆ G[i]` and
    /// `σ_j G[i−1] ⊆ G[i]`. The first failure is an error.
    pub fn validate(&self) -> Result<Vec<AxiomCheck>> {
        let mut out = Vec::with_capacity(self.levels.len());
        for (i, b) in self.levels.iter().enumerate() {
            let level = i as u32;
            if let Some(r) = b.rows().find(|r| r.order() > i64::from(level)) {
                return Err(Error::AxiomViolation {
                    level,
                    detail: format!("ideal row of order {} exceeds the level", r.order()),
                });
            }
            if i > 0 {
                let prev = &self.levels[i - 1];
                for r in prev.rows() {
                    if !b.contains(r)? {
                        return Err(Error::AxiomViolation {
                            level,
                            detail: format!("level {} is not contained in level {level}", level - 1),
                        });
                    }
                    for j in 0..self.n {
                        if !b.contains(&r.shift_by(j))? {
                            return Err(Error::AxiomViolation {
                                level,
                                detail: format!("shift s{} of level {} is not contained in level {level}", j + 1, level - 1),
                            });
                        }
                    }
                }
            }
            out.push(AxiomCheck { level, orders_bounded: true, nested: true, shift_closed: true });
        }
        Ok(out)
    }
}

/// Dimensions, axiom checks and the eventual polynomial of a chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedReport {
    pub dims: Vec<u64>,
    pub axioms: Vec<AxiomCheck>,
    pub polynomial: DimensionPolynomial,
    pub stabilization: Stabilization,
}

/// Projected chain `F[i] = G[i+1] ∩ (order ≤ i)` and its indicators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projections {
    pub chain: Chain,
    pub dims: Vec<u64>,
    pub axioms: Vec<AxiomCheck>,
    pub indicators: Vec<u32>,
    /// `j_i` of the original chain, for the lag bound `f_i ≤ j_i − 1`.
    pub chain_indicators: Vec<u32>,
}

/// Kernels of the one-step truncation restricted to the chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernels {
    pub dims: Vec<u64>,
    /// `K_i`: the exact-order-`i` parts of the level-`i` ideal.
    pub top_slices: Vec<SliceBasis>,
}

/// Kernels re-coordinatised over `n − 1` shifts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedKernels {
    pub chain: Chain,
    pub dims: Vec<u64>,
    pub axioms: Vec<AxiomCheck>,
    pub polynomial: DimensionPolynomial,
}

impl GeneralizedGroupSpec {
    pub fn new(base: GroupDescriptor, schedule: Schedule) -> Self {
        GeneralizedGroupSpec { base, schedule }
    }

    /// Structural checks on the schedule itself.
    pub fn check_schedule(&self) -> Result<()> {
        if let Schedule::Explicit { levels, tail_from } = &self.schedule {
            if levels.len() != *tail_from as usize + 1 {
                return Err(Error::Schedule(format!(
                    "explicit schedule lists {} levels but tail_from = {tail_from} needs {}",
                    levels.len(),
                    tail_from + 1
                )));
            }
            for (i, lv) in levels.iter().enumerate() {
                for (k, (g, shift)) in lv.iter().enumerate() {
                    if *g >= self.base.generators.len() {
                        return Err(Error::Schedule(format!(
                            "level {i} entry {k}: generator index {g} out of range (have {})",
                            self.base.generators.len()
                        )));
                    }
                    if shift.n() != self.base.n {
                        return Err(Error::Schedule(format!(
                            "level {i} entry {k}: shift has {} exponents, expected {}",
                            shift.n(),
                            self.base.n
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Extra levels beyond `max_level` that indicator searches may read.
    fn lookahead(&self, max_level: u32, horizon: u32) -> u32 {
        match &self.schedule {
            Schedule::Zariski => max_level,
            Schedule::Delay { d } => max_level + d,
            Schedule::Explicit { .. } => horizon.max(max_level),
        }
    }
}

/// Materialises `G[0..=max_level]` from the schedule.
pub fn chain(spec: &GeneralizedGroupSpec, closure: &Closure, max_level: u32) -> Result<Chain> {
    spec.check_schedule()?;
    let n = spec.base.n;
    let s = spec.base.s();
    let levels = match &spec.schedule {
        Schedule::Zariski => closure.slices(max_level)?,
        Schedule::Delay { d } => {
            let slices = closure.slices(max_level.saturating_sub(*d))?;
            (0..=max_level)
                .map(|i| if i < *d { SliceBasis::empty(n, i) } else { slices[(i - d) as usize].extend_to(i) })
                .collect()
        }
        Schedule::Explicit { levels, tail_from } => {
            let mut out: Vec<SliceBasis> = Vec::with_capacity(max_level as usize + 1);
            for i in 0..=max_level {
                let b = if i <= *tail_from {
                    let mut b = SliceBasis::empty(n, i);
                    for (g, shift) in &levels[i as usize] {
                        let v = spec.base.generators[*g].apply_shift(shift)?;
                        if v.order() > i64::from(i) {
                            return Err(Error::AxiomViolation {
                                level: i,
                                detail: format!("entry ({g}, {shift:?}) has order {}", v.order()),
                            });
                        }
                        b.insert(&v)?;
                    }
                    b.extend_to(i)
                } else {
                    shift_closure(&out[i as usize - 1], i)?
                };
                out.push(b);
            }
            out
        }
    };
    Ok(Chain { n, s, levels })
}

/// `dim G[i]` for every level, after validating the axioms.
pub fn generalized_dims(spec: &GeneralizedGroupSpec, max_level: u32) -> Result<(Vec<u64>, Vec<AxiomCheck>)> {
    let closure = Closure::new(&spec.base)?;
    let c = chain(spec, &closure, max_level)?;
    let axioms = c.validate()?;
    Ok((c.dims(), axioms))
}

/// Eventual polynomials of a chain: dimensions of `G[i]` and of the
/// kernels `H[i]`, each with a proved threshold.
///
/// Zariski and delay chains follow from the Hilbert polynomial of the
/// σ-ideal. An explicit chain is generated from level `L = tail_from` by
/// shifts alone, so `G[L+k]` is the span of `x^β r` with `|β| ≤ k` over the
/// rows `r` of `G[L]`. Homogenising those rows to degree `L` with an extra
/// last variable `x₀` identifies `G[i]` with the degree-`i` part of a graded
/// module `N` for `i ≥ L`. The top-order part of `G[i]` is the image of
/// `N_i` modulo `x₀`, whose dimension under grevlex (with `x₀` last) counts
/// the `x₀`-free staircase multiples.
pub fn closed_forms(
    spec: &GeneralizedGroupSpec,
    closure: &Closure,
    level_l: Option<&SliceBasis>,
) -> Result<((NumericalPolynomial, u32), (NumericalPolynomial, u32))> {
    let n = spec.base.n;
    let s = spec.base.s() as i64;
    let full = NumericalPolynomial::shifted_binomial(n, 0).scale(&s.into());
    let top = NumericalPolynomial::shifted_binomial(n - 1, 0).scale(&s.into());
    let hp = closure.hilbert_polynomial();
    let zariski_kernel = |phi: &NumericalPolynomial, t: u32| (phi.sub(&phi.shift(1)), t + 1);
    Ok(match &spec.schedule {
        Schedule::Zariski => {
            let phi = full.sub(&hp.poly);
            let k = zariski_kernel(&phi, hp.threshold);
            ((phi, hp.threshold), k)
        }
        Schedule::Delay { d } => {
            let psi = full.sub(&hp.poly.shift(i64::from(*d)));
            let k = if *d == 0 { zariski_kernel(&psi, hp.threshold) } else { (top, 0) };
            ((psi, hp.threshold + d), k)
        }
        Schedule::Explicit { tail_from, .. } => {
            let l = *tail_from;
            let base = level_l.ok_or_else(|| Error::Invariant("explicit closed form needs level tail_from".into()))?;
            let homogeneous: Vec<SliceVector> = base
                .rows()
                .map(|r| {
                    SliceVector::from_terms(
                        n + 1,
                        r.iter().map(|(t, c)| {
                            let mut e = t.shift.exponents().to_vec();
                            e.push(l - t.order());
                            (DiffTerm::new(t.var, ShiftMonomial::new(e)), c.clone())
                        }),
                    )
                })
                .collect::<Result<_>>()?;
            let st = buchberger(n + 1, &homogeneous)?.staircase();
            let hn = graded_hilbert_polynomial(&st, n + 1)?;
            let free = Staircase {
                terms: st
                    .terms
                    .iter()
                    .filter(|t| t.shift.exponents()[n] == 0)
                    .map(|t| DiffTerm::new(t.var, t.shift.truncate_last()))
                    .collect(),
            };
            let hk = graded_hilbert_polynomial(&free, n)?;
            ((full.sub(&hn.poly), hn.threshold.max(l)), (top.sub(&hk.poly), hk.threshold.max(l)))
        }
    })
}

/// Lowers a proved threshold using `values[i]` for the computed levels,
/// after confirming agreement on every computed level above it.
pub fn settle(poly: NumericalPolynomial, proven: u32, values: &[u64]) -> Result<DimensionPolynomial> {
    for (i, &v) in values.iter().enumerate().skip(proven as usize) {
        if poly.evaluate(i as i64) != v.into() {
            return Err(Error::Invariant(format!("closed form disagrees with the computed value at level {i}")));
        }
    }
    let threshold = if proven as usize >= values.len() {
        proven
    } else {
        tighten(&poly, proven, |i| Ok(values[i as usize]))?
    };
    Ok(DimensionPolynomial { poly, threshold, proven: true })
}

pub fn generalized_report(spec: &GeneralizedGroupSpec, max_level: u32) -> Result<GeneralizedReport> {
    let closure = Closure::new(&spec.base)?;
    let bound = stabilization_bound(spec, &closure);
    let c = chain(spec, &closure, max_level.max(bound + 1))?;
    let axioms = c.validate()?;
    let stabilization = stabilization_from(&c.levels, bound)?;
    if !stabilization.checks.last().is_some_and(|k| k.holds) {
        return Err(Error::Invariant(format!("chain generation fails at the bound {bound}")));
    }
    let level_l = tail_level(spec, &c);
    let ((poly, proven), _) = closed_forms(spec, &closure, level_l)?;
    let all = c.dims();
    let polynomial = settle(poly, proven, &all)?;
    Ok(GeneralizedReport {
        axioms: axioms.into_iter().take(max_level as usize + 1).collect(),
        dims: all[..=max_level as usize].to_vec(),
        polynomial,
        stabilization,
    })
}

fn tail_level<'a>(spec: &GeneralizedGroupSpec, c: &'a Chain) -> Option<&'a SliceBasis> {
    match &spec.schedule {
        Schedule::Explicit { tail_from, .. } => c.levels.get(*tail_from as usize),
        _ => None,
    }
}

/// Level from which the chain is generated by its predecessor by
/// construction: `D`, `D + d`, or `tail_from`.
pub fn stabilization_bound(spec: &GeneralizedGroupSpec, closure: &Closure) -> u32 {
    let d = closure.groebner_basis().max_elem_order();
    match &spec.schedule {
        Schedule::Zariski => d,
        Schedule::Delay { d: delay } => d + delay,
        Schedule::Explicit { tail_from, .. } => *tail_from,
    }
}

/// `j_i = min { j ≥ i : L_i ⊆ G[j] }` for `i ≤ max_level`.
pub fn zariski_indicators(spec: &GeneralizedGroupSpec, max_level: u32, horizon: u32) -> Result<Vec<u32>> {
    let closure = Closure::new(&spec.base)?;
    let c = chain(spec, &closure, spec.lookahead(max_level, horizon))?;
    c.validate()?;
    indicators_against(&closure.slices(max_level)?, &c, search_limit(spec, horizon), max_level)
}

fn search_limit(spec: &GeneralizedGroupSpec, horizon: u32) -> impl Fn(u32) -> u32 + '_ {
    move |i| match &spec.schedule {
        Schedule::Zariski => i,
        Schedule::Delay { d } => i + d,
        Schedule::Explicit { .. } => horizon,
    }
}

fn indicators_against(
    zariski: &[SliceBasis],
    c: &Chain,
    limit: impl Fn(u32) -> u32,
    max_level: u32,
) -> Result<Vec<u32>> {
    let mut out = Vec::with_capacity(max_level as usize + 1);
    for i in 0..=max_level {
        let lim = limit(i).min(c.levels.len() as u32 - 1);
        let mut found = None;
        for j in i..=lim {
            if zariski[i as usize].is_subspace_of(&c.levels[j as usize])? {
                found = Some(j);
                break;
            }
        }
        match found {
            Some(j) => out.push(j),
            None => return Err(Error::IndicatorUnresolved { level: i, horizon: lim }),
        }
    }
    Ok(out)
}

/// `F[i] = G[i+1] ∩ (order ≤ i)` with its indicators `f_i`; checks
/// `f_i ≤ j_i − 1` wherever `j_i > i`.
pub fn projections(spec: &GeneralizedGroupSpec, max_level: u32, horizon: u32) -> Result<Projections> {
    let closure = Closure::new(&spec.base)?;
    let look = spec.lookahead(max_level, horizon) + 1;
    let g = chain(spec, &closure, look)?;
    g.validate()?;
    let f = Chain {
        n: g.n,
        s: g.s,
        levels: (0..look).map(|i| g.levels[i as usize + 1].restrict_to_order(i)).collect::<Result<_>>()?,
    };
    let axioms = f.validate()?;
    let zariski = closure.slices(max_level)?;
    let limit = search_limit(spec, horizon);
    let chain_indicators = indicators_against(&zariski, &g, &limit, max_level)?;
    let indicators = indicators_against(&zariski, &f, &limit, max_level)?;
    for (i, (&fi, &ji)) in indicators.iter().zip(&chain_indicators).enumerate() {
        if ji > i as u32 && fi + 1 > ji {
            return Err(Error::Invariant(format!("projection indicator f_{i} = {fi} exceeds j_{i} − 1 = {}", ji - 1)));
        }
    }
    let mut dims = f.dims();
    dims.truncate(max_level as usize + 1);
    Ok(Projections {
        dims,
        axioms: axioms.into_iter().take(max_level as usize + 1).collect(),
        chain: Chain { levels: f.levels.into_iter().take(max_level as usize + 1).collect(), ..f },
        indicators,
        chain_indicators,
    })
}

/// Exact-order-`i` parts of the level-`i` ideal slice.
pub fn top_slice(b: &SliceBasis, i: u32) -> Result<SliceBasis> {
    let parts: Vec<SliceVector> = b.rows().map(|r| r.exact_order_part(i)).filter(|v| !v.is_zero()).collect();
    let mut k = SliceBasis::echelonize(b.n(), &parts)?;
    k = k.extend_to(i);
    Ok(k)
}

/// `dim H[i] = s·C(i+n−1, n−1) − dim K_i`.
pub fn kernels(spec: &GeneralizedGroupSpec, max_level: u32) -> Result<Kernels> {
    let closure = Closure::new(&spec.base)?;
    let c = chain(spec, &closure, max_level)?;
    c.validate()?;
    kernels_of(&c)
}

pub fn kernels_of(c: &Chain) -> Result<Kernels> {
    let mut dims = Vec::with_capacity(c.levels.len());
    let mut top_slices = Vec::with_capacity(c.levels.len());
    for (i, b) in c.levels.iter().enumerate() {
        let k = top_slice(b, i as u32)?;
        dims.push(top_dim(c.n, c.s, i as u32) - k.dim() as u64);
        top_slices.push(k);
    }
    Ok(Kernels { dims, top_slices })
}

/// Twists every `K_i` into `n − 1` shift variables, validates the result as
/// a chain and attaches the kernel polynomial (degree `≤ n − 1`).
pub fn twisted_kernels(spec: &GeneralizedGroupSpec, max_level: u32) -> Result<TwistedKernels> {
    let n = spec.base.n;
    if n < 2 {
        return Err(Error::InvalidDimension(n.saturating_sub(1)));
    }
    let closure = Closure::new(&spec.base)?;
    let c = chain(spec, &closure, max_level)?;
    c.validate()?;
    let ker = kernels_of(&c)?;
    let mut levels = Vec::with_capacity(ker.top_slices.len());
    for (i, k) in ker.top_slices.iter().enumerate() {
        let rows: Vec<SliceVector> = k.rows().map(|r| r.twist_slice(i as u32)).collect::<Result<_>>()?;
        levels.push(SliceBasis::echelonize(n - 1, &rows)?.extend_to(i as u32));
    }
    let twisted = Chain { n: n - 1, s: c.s, levels };
    let axioms = twisted.validate()?;
    let dims = twisted.dims();
    if dims != ker.dims {
        return Err(Error::Invariant("twisted kernel dimensions differ from the kernel dimensions".into()));
    }
    let level_l = match &spec.schedule {
        Schedule::Explicit { tail_from, .. } if *tail_from > max_level => {
            Some(chain(spec, &closure, *tail_from)?.levels.pop().expect("nonempty"))
        }
        _ => tail_level(spec, &c).cloned(),
    };
    let (_, (poly, proven)) = closed_forms(spec, &closure, level_l.as_ref())?;
    let polynomial = settle(poly, proven, &dims)?;
    Ok(TwistedKernels { chain: twisted, dims, axioms, polynomial })
}
