use serde::{Deserialize, Serialize};

use crate::diffterm::{family_check, DiffTerm, GroupDescriptor, SliceVector};
use crate::error::{Error, Result};
use crate::exactla::SliceBasis;
use crate::groebner::{buchberger, hilbert_function, hilbert_polynomial, GroebnerBasis, HilbertPolynomial};
use crate::monoid::{binomial_count, enumerate_shifts, small, Mode};
use crate::numpoly::{Invariants, NumericalPolynomial};

/// `s · C(i+n, n)`: coordinates of order `≤ i`.
pub fn ambient_dim(n: usize, s: usize, i: u32) -> u64 {
    s as u64 * small(&binomial_count(i64::from(i) + n as i64, n as u64))
}

/// `s · C(i+n−1, n−1)`: coordinates of order exactly `i`.
pub fn top_dim(n: usize, s: usize, i: u32) -> u64 {
    s as u64 * small(&binomial_count(i64::from(i) + n as i64 - 1, n as u64 - 1))
}

/// A polynomial with the least index from which it matches the sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionPolynomial {
    pub poly: NumericalPolynomial,
    pub threshold: u32,
    /// Whether agreement from `threshold` on is proved (closed form) rather
    /// than observed on a finite window (fit).
    pub proven: bool,
}

/// One row of the generation check `L_{i+1} = (L_i, σ₁L_i, …, σₙL_i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationCheck {
    pub level: u32,
    pub holds: bool,
}

/// Least `m` from which the slices are generated by their predecessor.
///
/// The checks cover `[0, bound]`; beyond `bound` generation holds by the
/// degree argument (for Zariski closures every basis product `x^β g` of
/// order `> D` has `β ≠ 0`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stabilization {
    pub m: u32,
    pub bound: u32,
    pub checks: Vec<GenerationCheck>,
}

/// A basis of the order-`≤ m` slice that generates the whole σ-ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub level: u32,
    pub generators: Vec<SliceVector>,
    pub verified_to: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub dims: Vec<u64>,
    pub stabilization: Stabilization,
    pub polynomial: DimensionPolynomial,
    pub invariants: Invariants,
}

/// Zariski closures of a presented group, backed by a reduced Gröbner basis.
#[derive(Clone, Debug)]
pub struct Closure {
    desc: GroupDescriptor,
    gb: GroebnerBasis,
    hp: HilbertPolynomial,
}

impl Closure {
    pub fn new(desc: &GroupDescriptor) -> Result<Self> {
        family_check(desc)?;
        let gb = buchberger(desc.n, &desc.generators)?;
        let hp = hilbert_polynomial(&gb.staircase(), desc.n)?;
        Ok(Closure { desc: desc.clone(), gb, hp })
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.desc
    }

    pub fn groebner_basis(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn hilbert_polynomial(&self) -> &HilbertPolynomial {
        &self.hp
    }

    pub fn n(&self) -> usize {
        self.desc.n
    }

    pub fn s(&self) -> usize {
        self.desc.s()
    }

    /// `dim L_i`, the order-`≤ i` slice of the σ-ideal; 0 for `i < 0`.
    pub fn hilbert(&self, i: i64) -> Result<u64> {
        if i < 0 {
            return Ok(0);
        }
        hilbert_function(&self.gb.staircase(), self.n(), i as u32)
    }

    /// `dim G_i = s·C(i+n, n) − dim L_i`.
    pub fn dim(&self, i: u32) -> Result<u64> {
        Ok(ambient_dim(self.n(), self.s(), i) - self.hilbert(i64::from(i))?)
    }

    pub fn dims(&self, max_level: u32) -> Result<Vec<u64>> {
        (0..=max_level).map(|i| self.dim(i)).collect()
    }

    /// `L_0, …, L_max`, each at its own ambient level.
    ///
    /// Level `k` adds one product `x^β g` per staircase-divisible term of
    /// order `k`; distinct leading terms make them independent, and their
    /// number is the Hilbert function, so they span the slice.
    pub fn slices(&self, max_level: u32) -> Result<Vec<SliceBasis>> {
        let n = self.n();
        let mut out: Vec<SliceBasis> = Vec::with_capacity(max_level as usize + 1);
        let mut cur = SliceBasis::empty(n, 0);
        for k in 0..=max_level {
            cur = cur.extend_to(k);
            if !self.gb.is_empty() {
                for shift in enumerate_shifts(n, k, Mode::Exactly)? {
                    for var in 0..self.s() {
                        let t = DiffTerm::new(var, shift.clone());
                        let hit = self.gb.elements().iter().find(|g| {
                            let lt = g.leading_term().expect("nonzero");
                            lt.var == var && lt.shift.divides(&t.shift)
                        });
                        if let Some(g) = hit {
                            let beta = t.shift.divide(&g.leading_term().expect("nonzero").shift).expect("divides");
                            if !cur.insert(&g.apply_shift(&beta)?)? {
                                return Err(Error::Invariant(format!("slice product for {t:?} is dependent")));
                            }
                        }
                    }
                }
            }
            out.push(cur.clone());
        }
        Ok(out)
    }

    /// `Φ(t) = s·C(t+n, n) − HP(t)`, with the threshold lowered as far as the
    /// exact dimensions allow.
    pub fn dimension_polynomial(&self) -> Result<DimensionPolynomial> {
        let poly = NumericalPolynomial::shifted_binomial(self.n(), 0)
            .scale(&(self.s() as i64).into())
            .sub(&self.hp.poly);
        let threshold = tighten(&poly, self.hp.threshold, |i| self.dim(i))?;
        Ok(DimensionPolynomial { poly, threshold, proven: true })
    }

    pub fn invariants(&self) -> Result<Invariants> {
        self.dimension_polynomial()?.poly.invariants(self.n())
    }

    pub fn stabilization(&self) -> Result<Stabilization> {
        let bound = self.gb.max_elem_order();
        let slices = self.slices(bound + 1)?;
        let st = stabilization_from(&slices, bound)?;
        if !st.checks.last().is_some_and(|c| c.holds) {
            return Err(Error::Invariant(format!("generation fails at the proved bound {bound}")));
        }
        Ok(st)
    }

    /// Basis of `L_m`, checked to regenerate every slice up to `horizon`
    /// (default `D + 3`).
    pub fn certificate(&self, horizon: Option<u32>) -> Result<Certificate> {
        let st = self.stabilization()?;
        let horizon = horizon.unwrap_or(st.bound + 3).max(st.m);
        let slices = self.slices(horizon)?;
        let generators: Vec<SliceVector> = slices[st.m as usize].rows().cloned().collect();
        let mut regen = slices[st.m as usize].clone();
        for i in st.m..horizon {
            regen = shift_closure(&regen, i + 1)?;
            if !regen.same_span(&slices[i as usize + 1]) {
                return Err(Error::Invariant(format!("certificate fails to generate level {}", i + 1)));
            }
        }
        Ok(Certificate { level: st.m, generators, verified_to: horizon })
    }

    pub fn report(&self, max_level: u32) -> Result<ClosureReport> {
        let polynomial = self.dimension_polynomial()?;
        Ok(ClosureReport {
            dims: self.dims(max_level)?,
            stabilization: self.stabilization()?,
            invariants: polynomial.poly.invariants(self.n())?,
            polynomial,
        })
    }
}

/// `span(b ∪ σ₁b ∪ … ∪ σₙb)` at ambient level `level`.
pub fn shift_closure(b: &SliceBasis, level: u32) -> Result<SliceBasis> {
    let mut out = b.extend_to(level);
    let rows: Vec<SliceVector> = b.rows().cloned().collect();
    for r in &rows {
        for j in 0..b.n() {
            out.insert(&r.shift_by(j))?;
        }
    }
    Ok(out)
}

/// Runs the generation check on `[0, bound]`; `levels` must reach `bound + 1`.
pub fn stabilization_from(levels: &[SliceBasis], bound: u32) -> Result<Stabilization> {
    let mut checks = Vec::with_capacity(bound as usize + 1);
    for i in 0..=bound {
        let generated = shift_closure(&levels[i as usize], i + 1)?;
        checks.push(GenerationCheck { level: i, holds: generated.same_span(&levels[i as usize + 1]) });
    }
    let m = checks.iter().rposition(|c| !c.holds).map_or(0, |k| k as u32 + 1);
    Ok(Stabilization { m, bound, checks })
}

/// Lowers a proved threshold while the polynomial still matches `dim`.
pub fn tighten(poly: &NumericalPolynomial, proven: u32, dim: impl Fn(u32) -> Result<u64>) -> Result<u32> {
    let mut t = proven;
    while t > 0 && poly.evaluate(i64::from(t) - 1) == dim(t - 1)?.into() {
        t -= 1;
    }
    Ok(t)
}

/// Raises a slice basis to a higher ambient level; rows are unchanged.
pub fn extend_ideal_slice(b: &SliceBasis, to_level: u32) -> Result<SliceBasis> {
    if to_level < b.ambient_level() {
        return Err(Error::LevelOutOfRange { level: to_level, ambient: b.ambient_level() });
    }
    Ok(b.extend_to(to_level))
}
