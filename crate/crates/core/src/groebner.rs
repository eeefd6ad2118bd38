//! Buchberger's algorithm for submodules of `Q[x₁,…,xₙ]^s`, staircases and
//! exact Hilbert functions of the order filtration.
//!
//! A slice vector `Σ c·τ(y_j)` is read as the module element `Σ c·x^τ e_j`.
//! The module order is term-over-position with grevlex on the shift part,
//! which is degree-compatible: the leading term of every vector has the
//! vector's order. That property is what makes the staircase count the
//! order-`≤ i` slice, and it is asserted on every basis built here.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::diffterm::{DiffTerm, SliceVector};
use crate::error::{Error, Result};
use crate::exactla::SliceBasis;
use crate::monoid::{enumerate_shifts, Mode, ShiftMonomial};
use crate::numpoly::NumericalPolynomial;

/// Default per-component limit for inclusion-exclusion.
pub const SUBSET_LIMIT: usize = 20;

/// Reduced, monic Gröbner basis sorted by ascending leading term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    n: usize,
    elements: Vec<SliceVector>,
}

/// Leading terms of a reduced basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Staircase {
    pub terms: Vec<DiffTerm>,
}

/// Closed form of the Hilbert function from `threshold` onward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertPolynomial {
    pub poly: NumericalPolynomial,
    pub threshold: u32,
}

impl GroebnerBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[SliceVector] {
        &self.elements
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `D`: largest element order, 0 for the empty basis.
    pub fn max_elem_order(&self) -> u32 {
        self.elements.iter().map(|g| g.order().max(0) as u32).max().unwrap_or(0)
    }

    pub fn staircase(&self) -> Staircase {
        Staircase { terms: self.elements.iter().filter_map(|g| g.leading_term().cloned()).collect() }
    }
}

fn lt(v: &SliceVector) -> &DiffTerm {
    v.leading_term().expect("basis elements are nonzero")
}

fn divides(a: &DiffTerm, b: &DiffTerm) -> bool {
    a.var == b.var && a.shift.divides(&b.shift)
}

fn single_component(v: &SliceVector) -> bool {
    let mut vars = v.terms().map(|t| t.var);
    let first = vars.next();
    vars.all(|w| Some(w) == first)
}

/// Fully reduces `v` modulo `basis` (every term, not only the leading one).
fn reduce_by(v: &SliceVector, basis: &[SliceVector]) -> SliceVector {
    let mut p = v.clone();
    let mut rem = SliceVector::zero(v.n());
    while let Some((t, c)) = p.leading().map(|(t, c)| (t.clone(), c.clone())) {
        match basis.iter().find(|g| divides(lt(g), &t)) {
            Some(g) => {
                let (_, lc) = g.leading().expect("nonzero");
                let q = t.shift.divide(&lt(g).shift).expect("divisible");
                p.add_scaled_shifted(g, &q, &(-(c / lc)));
            }
            None => {
                p.add_term(t.clone(), -c.clone());
                rem.add_term(t, c);
            }
        }
    }
    rem
}

fn s_vector(f: &SliceVector, g: &SliceVector) -> SliceVector {
    let (tf, cf) = f.leading().expect("nonzero");
    let (tg, cg) = g.leading().expect("nonzero");
    let l = tf.shift.lcm(&tg.shift);
    let mut s = SliceVector::zero(f.n());
    s.add_scaled_shifted(f, &l.divide(&tf.shift).expect("lcm"), &cf.recip());
    s.add_scaled_shifted(g, &l.divide(&tg.shift).expect("lcm"), &(-cg.recip()));
    s
}

/// Reduced Gröbner basis of the module generated by `generators`.
///
/// Pairs are processed lowest lcm first. The coprime criterion is applied
/// only to pairs of single-component elements, where it reduces to the ring
/// case; for general module elements it is unsound.
pub fn buchberger(n: usize, generators: &[SliceVector]) -> Result<GroebnerBasis> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    for g in generators {
        if g.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: g.n() });
        }
    }
    let mut basis: Vec<SliceVector> = Vec::new();
    // (lcm term, i, j) ordered by the module order on the lcm term
    let mut pairs: BTreeSet<(DiffTerm, usize, usize)> = BTreeSet::new();
    fn push(basis: &mut Vec<SliceVector>, pairs: &mut BTreeSet<(DiffTerm, usize, usize)>, v: SliceVector) {
        let v = v.monic();
        let k = basis.len();
        let tk = lt(&v).clone();
        for (i, g) in basis.iter().enumerate() {
            let ti = lt(g);
            if ti.var != tk.var {
                continue;
            }
            if ti.shift.is_coprime(&tk.shift) && single_component(g) && single_component(&v) {
                continue;
            }
            pairs.insert((DiffTerm::new(tk.var, ti.shift.lcm(&tk.shift)), i, k));
        }
        basis.push(v);
    }
    let mut gens: Vec<&SliceVector> = generators.iter().filter(|g| !g.is_zero()).collect();
    gens.sort_by(|a, b| lt(a).cmp(lt(b)));
    for g in gens {
        let r = reduce_by(g, &basis);
        if !r.is_zero() {
            push(&mut basis, &mut pairs, r);
        }
    }
    while let Some(pair) = pairs.pop_first() {
        let (_, i, j) = pair;
        let s = s_vector(&basis[i], &basis[j]);
        let r = reduce_by(&s, &basis);
        if !r.is_zero() {
            push(&mut basis, &mut pairs, r);
        }
    }
    let gb = GroebnerBasis { n, elements: interreduce(basis) };
    check_degree_compatible(&gb)?;
    Ok(gb)
}

fn interreduce(basis: Vec<SliceVector>) -> Vec<SliceVector> {
    // Keep elements whose leading term is minimal; among equal leading
    // terms keep the first.
    let mut minimal: Vec<SliceVector> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let t = lt(g);
        let dominated = basis.iter().enumerate().any(|(m, h)| {
            m != k && divides(lt(h), t) && (lt(h) != t || m < k)
        });
        if !dominated {
            minimal.push(g.clone());
        }
    }
    minimal.sort_by(|a, b| lt(a).cmp(lt(b)));
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let g = &minimal[k];
        let others: Vec<SliceVector> =
            minimal.iter().enumerate().filter(|(m, _)| *m != k).map(|(_, h)| h.clone()).collect();
        let (t, c) = g.leading().map(|(t, c)| (t.clone(), c.clone())).expect("nonzero");
        let mut tail = g.clone();
        tail.add_term(t.clone(), -c);
        let mut r = reduce_by(&tail, &others);
        r.add_term(t, BigRational::one());
        out.push(r.monic());
    }
    out
}

fn check_degree_compatible(gb: &GroebnerBasis) -> Result<()> {
    for g in &gb.elements {
        if i64::from(lt(g).order()) != g.order() {
            return Err(Error::Invariant(format!(
                "leading term {:?} has order {} but the element has order {}",
                lt(g),
                lt(g).order(),
                g.order()
            )));
        }
    }
    Ok(())
}

/// Remainder of `v` modulo the basis; zero iff `v` lies in the module.
pub fn normal_form(v: &SliceVector, gb: &GroebnerBasis) -> Result<SliceVector> {
    if v.n() != gb.n {
        return Err(Error::DimensionMismatch { expected: gb.n, found: v.n() });
    }
    Ok(reduce_by(v, &gb.elements))
}

/// Number of terms of order `≤ i` divisible by some staircase term.
pub fn hilbert_function(st: &Staircase, n: usize, i: u32) -> Result<u64> {
    if st.terms.is_empty() {
        return Ok(0);
    }
    let shifts = enumerate_shifts(n, i, Mode::UpTo)?;
    let vars: BTreeSet<usize> = st.terms.iter().map(|t| t.var).collect();
    let mut count = 0u64;
    for var in vars {
        let gens: Vec<&ShiftMonomial> = st.terms.iter().filter(|t| t.var == var).map(|t| &t.shift).collect();
        count += shifts.iter().filter(|m| gens.iter().any(|g| g.divides(m))).count() as u64;
    }
    Ok(count)
}

pub fn hilbert_polynomial(st: &Staircase, n: usize) -> Result<HilbertPolynomial> {
    hilbert_polynomial_with_limit(st, n, SUBSET_LIMIT)
}

/// Inclusion-exclusion over lcms of staircase subsets, per component.
///
/// Each subset contributes `±C(t − deg lcm + n, n)`, which counts the
/// multiples of the lcm exactly once `t ≥ deg lcm − n`. Repeated lcms are
/// merged while the subsets are built, so the signed multiplicities stay
/// small.
pub fn hilbert_polynomial_with_limit(st: &Staircase, n: usize, limit: usize) -> Result<HilbertPolynomial> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let mut by_component: BTreeMap<usize, Vec<&ShiftMonomial>> = BTreeMap::new();
    for t in &st.terms {
        by_component.entry(t.var).or_default().push(&t.shift);
    }
    let mut by_degree: BTreeMap<u32, BigInt> = BTreeMap::new();
    for (&component, gens) in &by_component {
        if gens.len() > limit {
            return Err(Error::SubsetBlowUp { component, count: gens.len(), limit });
        }
        let mut acc: BTreeMap<ShiftMonomial, BigInt> = BTreeMap::new();
        for g in gens {
            let mut delta: BTreeMap<ShiftMonomial, BigInt> = BTreeMap::new();
            *delta.entry((*g).clone()).or_default() += 1;
            for (l, c) in &acc {
                *delta.entry(l.lcm(g)).or_default() -= c;
            }
            for (l, c) in delta {
                let e = acc.entry(l).or_default();
                *e += c;
            }
            acc.retain(|_, c| !c.is_zero());
        }
        for (l, c) in acc {
            *by_degree.entry(l.order()).or_default() += c;
        }
    }
    by_degree.retain(|_, c| !c.is_zero());
    let mut poly = NumericalPolynomial::zero();
    for (&d, c) in &by_degree {
        poly = poly.add(&NumericalPolynomial::shifted_binomial(n, i64::from(d)).scale(c));
    }
    let threshold = by_degree.keys().max().map_or(0, |&d| d.saturating_sub(n as u32));
    Ok(HilbertPolynomial { poly, threshold })
}

/// Number of degree-exactly-`i` monomials in `nv` variables divisible by a
/// staircase term of the same component.
pub fn graded_hilbert_function(st: &Staircase, nv: usize, i: u32) -> Result<u64> {
    let shifts = enumerate_shifts(nv, i, Mode::Exactly)?;
    let vars: BTreeSet<usize> = st.terms.iter().map(|t| t.var).collect();
    let mut count = 0u64;
    for var in vars {
        let gens: Vec<&ShiftMonomial> = st.terms.iter().filter(|t| t.var == var).map(|t| &t.shift).collect();
        count += shifts.iter().filter(|m| gens.iter().any(|g| g.divides(m))).count() as u64;
    }
    Ok(count)
}

/// Graded Hilbert polynomial by exact interpolation, with no subset limit.
///
/// Every subset lcm divides the lcm of its whole component, so all the
/// inclusion-exclusion binomials are exact from `deg lcm(component) − nv + 1`
/// on; `nv + 1` counts from there determine the polynomial. The threshold is
/// then lowered while the counts still agree.
pub fn graded_hilbert_polynomial(st: &Staircase, nv: usize) -> Result<HilbertPolynomial> {
    if nv == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let mut lcms: BTreeMap<usize, ShiftMonomial> = BTreeMap::new();
    for t in &st.terms {
        let e = lcms.entry(t.var).or_insert_with(|| t.shift.clone());
        *e = e.lcm(&t.shift);
    }
    let top = lcms.values().map(|l| l.order()).max().unwrap_or(0);
    let start = top.saturating_sub(nv as u32 - 1);
    let values = (start..=start + nv as u32)
        .map(|i| graded_hilbert_function(st, nv, i).map(BigInt::from))
        .collect::<Result<Vec<_>>>()?;
    let poly = crate::numpoly::fit(i64::from(start), &values, nv - 1)?;
    let mut threshold = start;
    while threshold > 0 && poly.evaluate(i64::from(threshold) - 1) == graded_hilbert_function(st, nv, threshold - 1)?.into() {
        threshold -= 1;
    }
    Ok(HilbertPolynomial { poly, threshold })
}

/// Basis of the module's order-`≤ i` slice: the span of `x^β g` with
/// `order(x^β g) ≤ i`.
pub fn slice_basis(gb: &GroebnerBasis, i: u32) -> Result<SliceBasis> {
    let mut b = SliceBasis::empty(gb.n, i);
    for g in &gb.elements {
        let og = g.order() as u32;
        if og > i {
            continue;
        }
        for beta in enumerate_shifts(gb.n, i - og, Mode::UpTo)? {
            b.insert(&g.apply_shift(&beta)?)?;
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffterm::{parse_generator, Family};
    use crate::monoid::binomial_count;

    fn mult(n: usize, e: &str) -> SliceVector {
        parse_generator(e, Family::Multiplicative, n, &["x".to_string()]).unwrap()
    }

    fn term(var: usize, e: &[u32]) -> DiffTerm {
        DiffTerm::new(var, ShiftMonomial::new(e.to_vec()))
    }

    #[test]
    fn single_generator_is_its_own_basis() {
        let g = mult(2, "s1^2 s2(x) * s2^4(x) - 1");
        let gb = buchberger(2, std::slice::from_ref(&g)).unwrap();
        assert_eq!(gb.elements(), &[g]);
        assert_eq!(gb.staircase().terms, vec![term(0, &[0, 4])]);
        assert_eq!(gb.max_elem_order(), 4);
    }

    #[test]
    fn redundant_shift_is_removed() {
        let v = mult(2, "s1^2 s2(x) * s2^4(x)");
        let gb = buchberger(2, &[v.clone(), v.shift_by(0)]).unwrap();
        assert_eq!(gb.elements(), &[v]);
        let e1 = SliceVector::unit(term(0, &[0, 0]));
        assert_eq!(buchberger(2, std::slice::from_ref(&e1)).unwrap().elements(), &[e1]);
        assert!(buchberger(2, &[]).unwrap().is_empty());
    }

    #[test]
    fn normal_form_examples() {
        let g = mult(2, "s1^2 s2(x) * s2^4(x)");
        let gb = buchberger(2, std::slice::from_ref(&g)).unwrap();
        assert!(normal_form(&g, &gb).unwrap().is_zero());
        assert!(normal_form(&SliceVector::zero(2), &gb).unwrap().is_zero());
        let top = SliceVector::unit(term(0, &[0, 4]));
        let nf = normal_form(&top, &gb).unwrap();
        assert_eq!(nf, SliceVector::unit(term(0, &[2, 1])).scale(&BigRational::from_integer((-1).into())));
    }

    #[test]
    fn module_pair_with_coprime_leads_is_not_skipped() {
        // f = x e1 + y e2, g = y e1 + z e2: coprime leading monomials in the
        // same component, yet the S-vector y f − x g = y² e2 − xz e2 is new.
        let x = |e: &[u32], var| DiffTerm::new(var, ShiftMonomial::new(e.to_vec()));
        let one = || BigRational::one();
        let f = SliceVector::from_terms(3, [(x(&[1, 0, 0], 0), one()), (x(&[0, 1, 0], 1), one())]).unwrap();
        let g = SliceVector::from_terms(3, [(x(&[0, 1, 0], 0), one()), (x(&[0, 0, 1], 1), one())]).unwrap();
        let gb = buchberger(3, &[f.clone(), g.clone()]).unwrap();
        assert!(gb.elements().len() >= 3);
        let mut syz = f.apply_shift(&ShiftMonomial::new(vec![0, 1, 0])).unwrap();
        syz.add_scaled(&g.apply_shift(&ShiftMonomial::new(vec![1, 0, 0])).unwrap(), &(-one()));
        assert!(normal_form(&syz, &gb).unwrap().is_zero());
        // every S-vector reduces to zero
        for a in gb.elements() {
            for b in gb.elements() {
                if a != b && lt(a).var == lt(b).var {
                    assert!(normal_form(&s_vector(a, b), &gb).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn hilbert_function_examples() {
        let st = Staircase { terms: vec![term(0, &[0, 4])] };
        assert_eq!(hilbert_function(&st, 2, 4).unwrap(), 1);
        assert_eq!(hilbert_function(&st, 2, 7).unwrap(), 10);
        assert_eq!(hilbert_function(&st, 2, 3).unwrap(), 0);
        assert_eq!(hilbert_function(&Staircase { terms: vec![] }, 2, 9).unwrap(), 0);
        let all = Staircase { terms: vec![term(0, &[0, 0])] };
        for i in 0..8 {
            assert_eq!(hilbert_function(&all, 2, i).unwrap(), binomial_count(i as i64 + 2, 2).try_into().unwrap());
        }
    }

    #[test]
    fn hilbert_polynomial_examples() {
        let st = Staircase { terms: vec![term(0, &[0, 4])] };
        let hp = hilbert_polynomial(&st, 2).unwrap();
        assert_eq!(hp.poly, NumericalPolynomial::shifted_binomial(2, 4));
        assert!(hp.threshold <= 4);
        for i in hp.threshold..=12 {
            assert_eq!(hp.poly.evaluate(i as i64), BigInt::from(hilbert_function(&st, 2, i).unwrap()));
        }
        let empty = hilbert_polynomial(&Staircase { terms: vec![] }, 2).unwrap();
        assert!(empty.poly.is_zero());
        assert_eq!(empty.threshold, 0);
        let all = hilbert_polynomial(&Staircase { terms: vec![term(0, &[0, 0])] }, 3).unwrap();
        assert_eq!(all.poly, NumericalPolynomial::basis(3));
        assert_eq!(all.threshold, 0);
    }

    #[test]
    fn subset_guard() {
        let terms = (0..21).map(|k| term(0, &[k, 20 - k])).collect();
        let st = Staircase { terms };
        assert!(matches!(hilbert_polynomial(&st, 2), Err(Error::SubsetBlowUp { count: 21, .. })));
        assert!(hilbert_polynomial_with_limit(&st, 2, 30).is_ok());
    }

    #[test]
    fn slice_basis_examples() {
        let g = mult(2, "s1^2 s2(x) * s2^4(x) - 1");
        let gb = buchberger(2, &[g]).unwrap();
        assert_eq!(slice_basis(&gb, 3).unwrap().dim(), 0);
        assert_eq!(slice_basis(&gb, 4).unwrap().dim(), 1);
        assert_eq!(slice_basis(&gb, 5).unwrap().dim(), 3);
        let empty = buchberger(2, &[]).unwrap();
        assert_eq!(slice_basis(&empty, 5).unwrap().dim(), 0);
    }

    #[test]
    fn slices_are_nested() {
        let gens = [mult(2, "s1(x) * s2^2(x)"), mult(2, "s1^3(x) * x^-1")];
        let gb = buchberger(2, &gens).unwrap();
        let st = gb.staircase();
        for i in 0..8 {
            let a = slice_basis(&gb, i).unwrap();
            let b = slice_basis(&gb, i + 1).unwrap();
            assert!(a.is_subspace_of(&b).unwrap());
            assert_eq!(a.dim() as u64, hilbert_function(&st, 2, i).unwrap());
        }
    }
}
