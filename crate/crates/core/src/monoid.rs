//! The free commutative monoid of shift monomials `σ₁^{a₁}···σₙ^{aₙ}` and its
//! order filtration.
//!
//! Two orders live here. [`Ord`] on [`ShiftMonomial`] is graded reverse
//! lexicographic (ascending), the monomial order used by the elimination and
//! Gröbner layers. [`ShiftMonomial::enumeration_cmp`] is the listing order of
//! [`enumerate_shifts`]: ascending grade, and within a grade the grevlex-largest
//! monomial first, so `σ₁` is listed before `σ₂`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent vector of a shift `τ = σ₁^{a₁}···σₙ^{aₙ}`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ShiftMonomial(Vec<u32>);

/// Which part of the filtration to enumerate or count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// `T_σ[i]`: every shift of order at most `i`.
    UpTo,
    /// `T_σ(i)`: every shift of order exactly `i`.
    Exactly,
}

impl ShiftMonomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        ShiftMonomial(exponents)
    }

    /// The identity shift in `n` variables.
    pub fn identity(n: usize) -> Self {
        ShiftMonomial(vec![0; n])
    }

    /// `σ_j` as a monomial; `j` is zero-based.
    pub fn unit(n: usize, j: usize) -> Self {
        let mut e = vec![0; n];
        e[j] = 1;
        ShiftMonomial(e)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// Composition of shifts. Panics on mismatched `n`; callers check.
    pub fn multiply(&self, other: &ShiftMonomial) -> ShiftMonomial {
        assert_eq!(self.n(), other.n(), "shift monomials over different n");
        ShiftMonomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, or `None` when some exponent would go negative.
    pub fn divide(&self, other: &ShiftMonomial) -> Option<ShiftMonomial> {
        assert_eq!(self.n(), other.n(), "shift monomials over different n");
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(ShiftMonomial)
    }

    pub fn divides(&self, other: &ShiftMonomial) -> bool {
        self.n() == other.n() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &ShiftMonomial) -> ShiftMonomial {
        ShiftMonomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &ShiftMonomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Drops the last exponent.
    pub fn truncate_last(&self) -> ShiftMonomial {
        ShiftMonomial(self.0[..self.0.len() - 1].to_vec())
    }

    /// Order used by [`enumerate_shifts`].
    pub fn enumeration_cmp(&self, other: &ShiftMonomial) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| grevlex_same_degree(other, self))
    }
}

/// Grevlex tie-break for equal total degree: `a > b` iff the last nonzero
/// entry of `a − b` is negative.
fn grevlex_same_degree(a: &ShiftMonomial, b: &ShiftMonomial) -> Ordering {
    for (x, y) in a.0.iter().zip(&b.0).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

impl Ord for ShiftMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| grevlex_same_degree(self, other))
            .then_with(|| self.0.len().cmp(&other.0.len()))
    }
}

impl PartialOrd for ShiftMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ShiftMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Renders in the input syntax: `s1^2 s2`, empty for the identity.
impl fmt::Display for ShiftMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "s{}", j + 1)?;
            if a > 1 {
                write!(f, "^{a}")?;
            }
        }
        Ok(())
    }
}

fn check_dimension(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidDimension(n));
    }
    Ok(())
}

/// All shifts of order exactly `i`, grevlex-descending.
fn exact_grade(n: usize, i: u32) -> Vec<ShiftMonomial> {
    // Grevlex-descending within a grade means the exponent of the last
    // variable grows slowest from the left; recurse on the last exponent.
    fn rec(n: usize, i: u32, out: &mut Vec<Vec<u32>>) {
        if n == 1 {
            out.push(vec![i]);
            return;
        }
        for last in 0..=i {
            let mut heads = Vec::new();
            rec(n - 1, i - last, &mut heads);
            for mut h in heads {
                h.push(last);
                out.push(h);
            }
        }
    }
    let mut raw = Vec::new();
    rec(n, i, &mut raw);
    raw.into_iter().map(ShiftMonomial).collect()
}

/// Lists `T_σ[i]` or `T_σ(i)` in the canonical enumeration order.
pub fn enumerate_shifts(n: usize, i: u32, mode: Mode) -> Result<Vec<ShiftMonomial>> {
    check_dimension(n)?;
    Ok(match mode {
        Mode::Exactly => exact_grade(n, i),
        Mode::UpTo => (0..=i).flat_map(|g| exact_grade(n, g)).collect(),
    })
}

/// `|T_σ[i]| = C(i+n, n)` and `|T_σ(i)| = C(i+n−1, n−1)`.
pub fn count_shifts(n: usize, i: u32, mode: Mode) -> Result<BigUint> {
    check_dimension(n)?;
    let i = u64::from(i);
    let n = n as u64;
    Ok(match mode {
        Mode::UpTo => binomial_nat(i + n, n),
        Mode::Exactly => binomial_nat(i + n - 1, n - 1),
    })
}

/// `C(top, k)` for natural numbers.
pub fn binomial_nat(top: u64, k: u64) -> BigUint {
    if k > top {
        return BigUint::zero();
    }
    let k = k.min(top - k);
    let mut acc = BigUint::one();
    for j in 0..k {
        acc *= top - j;
        acc /= j + 1;
    }
    acc
}

/// `C(k, n)` with the convention that it vanishes for every integer
/// `k < n` (including negative `k`). This is the counting binomial used by
/// the Hilbert engine.
pub fn binomial_count(k: i64, n: u64) -> BigUint {
    if k < 0 {
        return BigUint::zero();
    }
    binomial_nat(k as u64, n)
}

/// The polynomial binomial `x(x−1)···(x−k+1)/k!` evaluated at any integer.
pub fn binomial_poly(x: &BigInt, k: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k {
        num *= x - BigInt::from(j);
        den *= BigInt::from(j + 1);
    }
    num / den
}

/// Converts a count to `u64`; counts of enumerable objects always fit.
pub(crate) fn small(count: &BigUint) -> u64 {
    count.to_u64().expect("count exceeds u64")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> ShiftMonomial {
        ShiftMonomial::new(e.to_vec())
    }

    #[test]
    fn enumerate_small_cases() {
        assert_eq!(
            enumerate_shifts(2, 1, Mode::UpTo).unwrap(),
            vec![m(&[0, 0]), m(&[1, 0]), m(&[0, 1])]
        );
        assert_eq!(enumerate_shifts(2, 4, Mode::UpTo).unwrap().len(), 15);
        assert_eq!(enumerate_shifts(1, 3, Mode::Exactly).unwrap(), vec![m(&[3])]);
        assert_eq!(
            enumerate_shifts(2, 2, Mode::Exactly).unwrap(),
            vec![m(&[2, 0]), m(&[1, 1]), m(&[0, 2])]
        );
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(matches!(enumerate_shifts(0, 2, Mode::UpTo), Err(Error::InvalidDimension(0))));
        assert!(count_shifts(0, 1, Mode::Exactly).is_err());
    }

    #[test]
    fn counts() {
        assert_eq!(count_shifts(2, 4, Mode::UpTo).unwrap(), BigUint::from(15u32));
        assert_eq!(count_shifts(2, 5, Mode::Exactly).unwrap(), BigUint::from(6u32));
        assert_eq!(count_shifts(3, 0, Mode::UpTo).unwrap(), BigUint::from(1u32));
        // no overflow far beyond u64
        let big = count_shifts(40, 1000, Mode::UpTo).unwrap();
        assert!(big.bits() > 64);
    }

    #[test]
    fn counts_match_enumeration_and_grades_are_disjoint() {
        for n in 1..=4 {
            for i in 0..=12u32 {
                let upto = enumerate_shifts(n, i, Mode::UpTo).unwrap();
                assert_eq!(BigUint::from(upto.len()), count_shifts(n, i, Mode::UpTo).unwrap());
                let exact = enumerate_shifts(n, i, Mode::Exactly).unwrap();
                assert_eq!(BigUint::from(exact.len()), count_shifts(n, i, Mode::Exactly).unwrap());
                let mut sorted = upto.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted.len(), upto.len());
                if i >= 1 {
                    let prev = enumerate_shifts(n, i - 1, Mode::UpTo).unwrap();
                    let mut joined = prev.clone();
                    joined.extend(exact.iter().cloned());
                    assert_eq!(joined, upto);
                    assert!(exact.iter().all(|e| !prev.contains(e)));
                    assert_eq!(
                        count_shifts(n, i, Mode::UpTo).unwrap()
                            - count_shifts(n, i - 1, Mode::UpTo).unwrap(),
                        count_shifts(n, i, Mode::Exactly).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn enumeration_order_is_sorted_by_enumeration_cmp() {
        let all = enumerate_shifts(3, 5, Mode::UpTo).unwrap();
        for w in all.windows(2) {
            assert_eq!(w[0].enumeration_cmp(&w[1]), Ordering::Less);
        }
        assert_eq!(all, enumerate_shifts(3, 5, Mode::UpTo).unwrap());
    }

    #[test]
    fn multiply_and_divide() {
        assert_eq!(m(&[1, 0]).multiply(&m(&[0, 1])), m(&[1, 1]));
        assert_eq!(m(&[2, 1]).divide(&m(&[0, 1])), Some(m(&[2, 0])));
        assert_eq!(m(&[1, 0]).divide(&m(&[0, 1])), None);
    }

    #[test]
    fn grevlex_is_degree_compatible() {
        assert!(m(&[0, 4]) > m(&[2, 1]));
        assert!(m(&[2, 1]) > m(&[0, 3]));
        assert!(m(&[1, 0]) > m(&[0, 1]));
        assert!(m(&[1, 1, 0]) > m(&[1, 0, 1]));
        assert!(m(&[0, 2, 0]) > m(&[1, 0, 1]));
    }

    #[test]
    fn binomial_helpers() {
        assert_eq!(binomial_count(-3, 2), BigUint::zero());
        assert_eq!(binomial_count(1, 2), BigUint::zero());
        assert_eq!(binomial_count(6, 2), BigUint::from(15u32));
        assert_eq!(binomial_poly(&BigInt::from(-1), 2), BigInt::from(1));
        assert_eq!(binomial_poly(&BigInt::from(-2), 3), BigInt::from(-4));
        assert_eq!(binomial_poly(&BigInt::from(5), 2), BigInt::from(10));
    }

    #[test]
    fn display_uses_input_syntax() {
        assert_eq!(m(&[2, 1]).to_string(), "s1^2 s2");
        assert_eq!(m(&[0, 0]).to_string(), "");
        assert_eq!(format!("{:?}", m(&[0, 4])), "(0,4)");
    }
}
