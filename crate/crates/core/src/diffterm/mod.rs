//! Difference terms `τ(y_j)`, slice vectors and group descriptors.
//!
//! A [`SliceVector`] is a finite rational combination of difference terms. The
//! additive family reads it as a homogeneous linear σ-polynomial; the
//! multiplicative family reads it as the (integer) exponent vector of a
//! monomial `f` in the generator `f − 1`. Every computation downstream is the
//! same linear algebra for both readings.

mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monoid::ShiftMonomial;

pub use parse::parse_generator;

/// A shifted variable `τ(y_var)`. `var` is zero-based.
///
/// `Ord` is the module order: grevlex on the shift (degree first), then the
/// variable, with the lower variable index ranking higher.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiffTerm {
    pub var: usize,
    pub shift: ShiftMonomial,
}

impl DiffTerm {
    pub fn new(var: usize, shift: ShiftMonomial) -> Self {
        DiffTerm { var, shift }
    }

    pub fn order(&self) -> u32 {
        self.shift.order()
    }

    /// Listing order for printing: the shift enumeration order, then the
    /// variable index ascending.
    pub fn enumeration_cmp(&self, other: &DiffTerm) -> Ordering {
        self.shift
            .enumeration_cmp(&other.shift)
            .then_with(|| self.var.cmp(&other.var))
    }
}

impl Ord for DiffTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.shift.cmp(&other.shift).then_with(|| other.var.cmp(&self.var))
    }
}

impl PartialOrd for DiffTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for DiffTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y{}{:?}", self.var + 1, self.shift)
    }
}

/// Finite mapping from [`DiffTerm`] to nonzero rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SliceVector {
    n: usize,
    terms: BTreeMap<DiffTerm, BigRational>,
}

impl fmt::Debug for SliceVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(t, c)| (t, c.to_string()))).finish()
    }
}

impl SliceVector {
    pub fn zero(n: usize) -> Self {
        SliceVector { n, terms: BTreeMap::new() }
    }

    /// Builds a vector, summing repeated terms and dropping zeros.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (DiffTerm, BigRational)>,
    {
        let mut v = SliceVector::zero(n);
        for (t, c) in terms {
            if t.shift.n() != n {
                return Err(Error::DimensionMismatch { expected: n, found: t.shift.n() });
            }
            v.add_term(t, c);
        }
        Ok(v)
    }

    /// Single term with coefficient one.
    pub fn unit(term: DiffTerm) -> Self {
        let n = term.shift.n();
        let mut terms = BTreeMap::new();
        terms.insert(term, BigRational::one());
        SliceVector { n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Max order over the support; −1 for the zero vector.
    pub fn order(&self) -> i64 {
        self.terms.keys().map(|t| i64::from(t.order())).max().unwrap_or(-1)
    }

    /// Largest term in the module order with its coefficient.
    pub fn leading(&self) -> Option<(&DiffTerm, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_term(&self) -> Option<&DiffTerm> {
        self.terms.keys().next_back()
    }

    pub fn coeff(&self, t: &DiffTerm) -> Option<&BigRational> {
        self.terms.get(t)
    }

    /// Terms in ascending module order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&DiffTerm, &BigRational)> {
        self.terms.iter()
    }

    pub fn terms(&self) -> impl Iterator<Item = &DiffTerm> {
        self.terms.keys()
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().map(|t| t.var).max()
    }

    pub fn add_term(&mut self, t: DiffTerm, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &SliceVector, c: &BigRational) {
        debug_assert_eq!(self.n, other.n);
        if c.is_zero() {
            return;
        }
        for (t, a) in &other.terms {
            self.add_term(t.clone(), a * c);
        }
    }

    /// `self += c · x^shift · other` without materialising the shifted copy.
    pub fn add_scaled_shifted(&mut self, other: &SliceVector, shift: &ShiftMonomial, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        for (t, a) in &other.terms {
            self.add_term(DiffTerm::new(t.var, t.shift.multiply(shift)), a * c);
        }
    }

    pub fn scale(&self, c: &BigRational) -> SliceVector {
        if c.is_zero() {
            return SliceVector::zero(self.n);
        }
        SliceVector {
            n: self.n,
            terms: self.terms.iter().map(|(t, a)| (t.clone(), a * c)).collect(),
        }
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> SliceVector {
        match self.leading() {
            None => self.clone(),
            Some((_, lc)) => self.scale(&lc.recip()),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Applies the shift `m` to every term (trivial action on coefficients).
    pub fn apply_shift(&self, m: &ShiftMonomial) -> Result<SliceVector> {
        if m.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: m.n() });
        }
        Ok(SliceVector {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (DiffTerm::new(t.var, t.shift.multiply(m)), c.clone()))
                .collect(),
        })
    }

    /// `σ_j` applied to the vector; `j` is zero-based.
    pub fn shift_by(&self, j: usize) -> SliceVector {
        self.apply_shift(&ShiftMonomial::unit(self.n, j))
            .expect("unit shift has matching dimension")
    }

    /// Keeps only the terms of order exactly `i`.
    pub fn exact_order_part(&self, i: u32) -> SliceVector {
        SliceVector {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| t.order() == i)
                .map(|(t, c)| (t.clone(), c.clone()))
                .collect(),
        }
    }

    /// Re-coordinatises an exact-order-`i` vector over the `n − 1` twisted
    /// shifts `σ_jσ_n⁻¹`: a term with exponents `(a₁,…,aₙ)` maps to
    /// `(a₁,…,a_{n−1})`.
    pub fn twist_slice(&self, i: u32) -> Result<SliceVector> {
        if self.n < 2 {
            return Err(Error::InvalidDimension(self.n.saturating_sub(1)));
        }
        let mut out = SliceVector::zero(self.n - 1);
        for (t, c) in &self.terms {
            if t.order() != i {
                return Err(Error::OrderMismatch { expected: i, found: t.order() });
            }
            out.terms.insert(DiffTerm::new(t.var, t.shift.truncate_last()), c.clone());
        }
        Ok(out)
    }

    /// Terms in printing order.
    fn listing(&self) -> Vec<(&DiffTerm, &BigRational)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|a, b| a.0.enumeration_cmp(b.0));
        ts
    }

    /// Canonical text in the generator grammar.
    pub fn render(&self, family: Family, variables: &[String]) -> String {
        let name = |t: &DiffTerm| -> String {
            let v = variables.get(t.var).cloned().unwrap_or_else(|| format!("y{}", t.var + 1));
            if t.shift.is_identity() {
                v
            } else {
                format!("{}({})", t.shift, v)
            }
        };
        let mut out = String::new();
        match family {
            Family::Additive => {
                if self.is_zero() {
                    return "0".to_string();
                }
                for (k, (t, c)) in self.listing().into_iter().enumerate() {
                    let neg = c.is_negative();
                    if k == 0 {
                        if neg {
                            out.push('-');
                        }
                    } else {
                        out.push_str(if neg { " - " } else { " + " });
                    }
                    let a = c.abs();
                    if !a.is_one() {
                        out.push_str(&render_rational(&a));
                        out.push(' ');
                    }
                    out.push_str(&name(t));
                }
            }
            Family::Multiplicative => {
                if self.is_zero() {
                    return "1".to_string();
                }
                let parts: Vec<String> = self
                    .listing()
                    .into_iter()
                    .map(|(t, c)| {
                        if c.is_one() {
                            name(t)
                        } else {
                            format!("{}^{}", name(t), render_rational(c))
                        }
                    })
                    .collect();
                out = parts.join(" * ");
                out.push_str(" - 1");
            }
        }
        out
    }
}

/// Exact rational as `p` or `p/q`.
pub fn render_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        None => s.trim().parse::<BigInt>().ok().map(BigRational::from_integer),
        Some((p, q)) => {
            let p = p.trim().parse::<BigInt>().ok()?;
            let q = q.trim().parse::<BigInt>().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
    }
}

/// Which ambient group, and so which reading of a [`SliceVector`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Subgroups of `𝔾ₐˢ` cut out by homogeneous linear σ-polynomials.
    Additive,
    /// Subgroups of `𝔾ₘˢ` cut out by `f − 1` with `f` a Laurent monomial.
    Multiplicative,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Additive => "additive",
            Family::Multiplicative => "multiplicative",
        })
    }
}

/// A σ-closed subgroup presented by generators of its defining σ-ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDescriptor {
    pub family: Family,
    pub n: usize,
    pub variables: Vec<String>,
    pub generators: Vec<SliceVector>,
    pub label: String,
}

impl GroupDescriptor {
    pub fn new(family: Family, n: usize, variables: Vec<String>, generators: Vec<SliceVector>) -> Self {
        GroupDescriptor { family, n, variables, generators, label: String::new() }
    }

    /// Parses every expression with [`parse_generator`].
    pub fn parse(family: Family, n: usize, variables: &[&str], exprs: &[&str]) -> Result<Self> {
        let variables: Vec<String> = variables.iter().map(|s| s.to_string()).collect();
        let generators = exprs
            .iter()
            .map(|e| parse_generator(e, family, n, &variables))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupDescriptor::new(family, n, variables, generators))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Number of ambient variables `s`.
    pub fn s(&self) -> usize {
        self.variables.len()
    }

    /// Largest generator order, 0 for no generators.
    pub fn max_generator_order(&self) -> u32 {
        self.generators.iter().map(|g| g.order().max(0) as u32).max().unwrap_or(0)
    }
}

/// Confirms the generators have the structural shape of the descriptor's
/// family, which makes the presented σ-ideal a σ-Hopf ideal.
pub fn family_check(desc: &GroupDescriptor) -> Result<()> {
    if desc.n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let violation = |generator: usize, reason: String| Err(Error::FamilyViolation { generator, reason });
    for (k, g) in desc.generators.iter().enumerate() {
        if g.n() != desc.n {
            return violation(k, format!("built over n = {} but the group has n = {}", g.n(), desc.n));
        }
        if let Some(v) = g.max_var() {
            if v >= desc.s() {
                return violation(k, format!("variable index {} beyond the {} declared variables", v + 1, desc.s()));
            }
        }
        match desc.family {
            Family::Additive => {
                if g.is_zero() {
                    return violation(k, "zero generator".into());
                }
            }
            Family::Multiplicative => {
                if let Some((t, c)) = g.iter().find(|(_, c)| !c.is_integer()) {
                    return violation(
                        k,
                        format!("exponent {} of {:?} is not an integer", render_rational(c), t),
                    );
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u32]) -> ShiftMonomial {
        ShiftMonomial::new(e.to_vec())
    }

    fn q(p: i64) -> BigRational {
        BigRational::from_integer(p.into())
    }

    fn vec_of(n: usize, ts: &[(usize, &[u32], i64)]) -> SliceVector {
        SliceVector::from_terms(n, ts.iter().map(|(v, e, c)| (DiffTerm::new(*v, m(e)), q(*c)))).unwrap()
    }

    #[test]
    fn apply_shift_examples() {
        let v = vec_of(2, &[(0, &[2, 1], 1), (0, &[0, 4], 1)]);
        let w = v.apply_shift(&m(&[1, 0])).unwrap();
        assert_eq!(w, vec_of(2, &[(0, &[3, 1], 1), (0, &[1, 4], 1)]));
        assert_eq!(w.order(), v.order() + 1);
        assert!(SliceVector::zero(2).apply_shift(&m(&[3, 3])).unwrap().is_zero());
        let d = vec_of(2, &[(0, &[0, 0], 1), (1, &[0, 0], -1)]);
        assert_eq!(
            d.apply_shift(&m(&[0, 2])).unwrap(),
            vec_of(2, &[(0, &[0, 2], 1), (1, &[0, 2], -1)])
        );
        assert!(matches!(v.apply_shift(&m(&[1])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn zero_vector_order_sentinel() {
        assert_eq!(SliceVector::zero(3).order(), -1);
        let v = vec_of(2, &[(0, &[1, 1], 3), (0, &[1, 1], -3)]);
        assert!(v.is_zero());
    }

    #[test]
    fn leading_term_is_degree_compatible() {
        let v = vec_of(2, &[(0, &[2, 1], 1), (0, &[0, 4], 1)]);
        assert_eq!(v.leading_term().unwrap(), &DiffTerm::new(0, m(&[0, 4])));
        let w = vec_of(1, &[(0, &[0], 1), (1, &[0], -1)]);
        assert_eq!(w.leading_term().unwrap().var, 0);
    }

    #[test]
    fn twist_examples() {
        let v = vec_of(2, &[(0, &[0, 4], 1)]);
        assert_eq!(v.twist_slice(4).unwrap(), vec_of(1, &[(0, &[0], 1)]));
        let w = vec_of(2, &[(0, &[1, 4], 1)]);
        assert_eq!(w.twist_slice(5).unwrap(), vec_of(1, &[(0, &[1], 1)]));
        let bad = vec_of(2, &[(0, &[1, 4], 1), (0, &[0, 4], 1)]);
        assert!(matches!(bad.twist_slice(5), Err(Error::OrderMismatch { expected: 5, found: 4 })));
        assert!(vec_of(1, &[(0, &[2], 1)]).twist_slice(2).is_err());
    }

    #[test]
    fn family_checks() {
        let add = GroupDescriptor::parse(Family::Additive, 2, &["x"], &["s1^2 s2(x) + 2 s2^3(x)"]).unwrap();
        assert!(family_check(&add).is_ok());
        let half = SliceVector::from_terms(
            2,
            [(DiffTerm::new(0, m(&[1, 0])), BigRational::new(1.into(), 2.into()))],
        )
        .unwrap();
        let mult = GroupDescriptor::new(Family::Multiplicative, 2, vec!["x".into()], vec![half]);
        assert!(matches!(family_check(&mult), Err(Error::FamilyViolation { generator: 0, .. })));
        let free = GroupDescriptor::new(Family::Additive, 2, vec!["x".into()], vec![]);
        assert!(family_check(&free).is_ok());
        let zero = GroupDescriptor::new(Family::Additive, 2, vec!["x".into()], vec![SliceVector::zero(2)]);
        assert!(family_check(&zero).is_err());
        let stray = GroupDescriptor::new(Family::Additive, 2, vec!["x".into()], vec![vec_of(2, &[(1, &[0, 0], 1)])]);
        assert!(family_check(&stray).is_err());
    }

    #[test]
    fn render_matches_input_syntax() {
        let vars = vec!["x".to_string()];
        let a = vec_of(2, &[(0, &[2, 1], 1), (0, &[0, 3], 2)]);
        assert_eq!(a.render(Family::Additive, &vars), "s1^2 s2(x) + 2 s2^3(x)");
        let b = vec_of(2, &[(0, &[2, 1], 1), (0, &[0, 4], 1)]);
        assert_eq!(b.render(Family::Multiplicative, &vars), "s1^2 s2(x) * s2^4(x) - 1");
        let c = vec_of(2, &[(0, &[0, 0], -1)]);
        assert_eq!(c.render(Family::Additive, &vars), "-x");
    }

    fn arb_vector(n: usize, s: usize) -> impl Strategy<Value = SliceVector> {
        prop::collection::vec(
            (0..s, prop::collection::vec(0u32..4, n), -4i64..=4, 1i64..=3),
            0..5,
        )
        .prop_map(move |ts| {
            SliceVector::from_terms(
                n,
                ts.into_iter()
                    .map(|(v, e, p, d)| (DiffTerm::new(v, ShiftMonomial::new(e)), BigRational::new(p.into(), d.into()))),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn shift_is_a_monoid_action(
            v in arb_vector(3, 2),
            a in prop::collection::vec(0u32..3, 3),
            b in prop::collection::vec(0u32..3, 3),
        ) {
            let (a, b) = (ShiftMonomial::new(a), ShiftMonomial::new(b));
            let twice = v.apply_shift(&a).unwrap().apply_shift(&b).unwrap();
            prop_assert_eq!(twice, v.apply_shift(&a.multiply(&b)).unwrap());
        }

        #[test]
        fn render_then_parse_is_identity(v in arb_vector(2, 2)) {
            let vars = vec!["x".to_string(), "y".to_string()];
            prop_assume!(!v.is_zero());
            let text = v.render(Family::Additive, &vars);
            prop_assert_eq!(parse_generator(&text, Family::Additive, 2, &vars).unwrap(), v.clone());
            // integer part as an exponent vector
            let ints = SliceVector::from_terms(
                2,
                v.iter().map(|(t, c)| (t.clone(), BigRational::from_integer(c.to_integer()))),
            ).unwrap();
            let text = ints.render(Family::Multiplicative, &vars);
            prop_assert_eq!(parse_generator(&text, Family::Multiplicative, 2, &vars).unwrap(), ints);
        }
    }
}
