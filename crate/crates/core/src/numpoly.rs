//! Numerical polynomials written in the basis `C(t+j, j)`.
//!
//! Every integer-valued polynomial has unique integer coordinates `c₀,…,c_d`
//! in this basis, and the difference invariants are read off the top
//! coordinate directly.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monoid::binomial_poly;

#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct NumericalPolynomial {
    #[serde(with = "bigint_strings")]
    coeffs: Vec<BigInt>,
}

/// Difference type, typical difference dimension and difference dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariants {
    pub sigma_type: usize,
    #[serde(with = "bigint_string")]
    pub typical_sigma_dim: BigInt,
    #[serde(with = "bigint_string")]
    pub sigma_dim: BigInt,
}

impl NumericalPolynomial {
    pub fn zero() -> Self {
        NumericalPolynomial { coeffs: Vec::new() }
    }

    /// Trailing zero coordinates are dropped.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        NumericalPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `C(t+j, j)`.
    pub fn basis(j: usize) -> Self {
        let mut c = vec![BigInt::zero(); j + 1];
        c[j] = BigInt::one();
        NumericalPolynomial { coeffs: c }
    }

    /// `C(t − shift + n, n)` as a polynomial in `t`.
    pub fn shifted_binomial(n: usize, shift: i64) -> Self {
        Self::from_fn(n, |t| binomial_poly(&(BigInt::from(t) - shift + n as i64), n as u64))
    }

    /// Coordinates of the degree-`≤ degree` polynomial `f`, from its values
    /// at `t = −1, −2, …, −1−degree`, where `C(t+j, j)` is triangular:
    /// `c_j = Σ_k (−1)^k C(j,k) f(−1−k)`.
    fn from_fn(degree: usize, f: impl Fn(i64) -> BigInt) -> Self {
        let at: Vec<BigInt> = (0..=degree).map(|k| f(-1 - k as i64)).collect();
        let coeffs = (0..=degree)
            .map(|j| {
                let mut acc = BigInt::zero();
                let mut binom = BigInt::one();
                for (k, a) in at.iter().enumerate().take(j + 1) {
                    if k > 0 {
                        binom = binom * BigInt::from(j + 1 - k) / BigInt::from(k);
                    }
                    let term = &binom * a;
                    if k % 2 == 0 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                acc
            })
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Value at any integer `t`.
    pub fn evaluate(&self, t: i64) -> BigInt {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * binomial_poly(&BigInt::from(t + j as i64), j as u64))
            .sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[BigInt], k: usize| v.get(k).cloned().unwrap_or_default();
        Self::from_coeffs((0..len).map(|k| get(&self.coeffs, k) + get(&other.coeffs, k)).collect())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    /// `p(t − d)`.
    pub fn shift(&self, d: i64) -> Self {
        let mut out = Self::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            out = out.add(&Self::shifted_binomial(j, d).scale(c));
        }
        out
    }

    /// `q(i) = Σ_{t=m}^{i} p(t)` for `i ≥ m − 1`.
    pub fn sum_transform(&self, m: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        // Σ_{t=0}^{i} C(t+j, j) = C(i+j+1, j+1): coordinates move up one slot.
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigInt::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        let head: BigInt = if m > 0 {
            (0..m).map(|t| self.evaluate(t)).sum()
        } else {
            -(m..0).map(|t| self.evaluate(t)).sum::<BigInt>()
        };
        coeffs[0] -= head;
        Self::from_coeffs(coeffs)
    }

    /// `(d, c_d, c_d if d = n else 0)`; the zero polynomial yields `(0, 0, 0)`.
    pub fn invariants(&self, n: usize) -> Result<Invariants> {
        let Some(d) = self.degree() else {
            return Ok(Invariants { sigma_type: 0, typical_sigma_dim: BigInt::zero(), sigma_dim: BigInt::zero() });
        };
        if d > n {
            return Err(Error::DegreeExceeds { degree: d, n });
        }
        let top = self.leading_coeff();
        let sigma_dim = if d == n { top.clone() } else { BigInt::zero() };
        Ok(Invariants { sigma_type: d, typical_sigma_dim: top, sigma_dim })
    }

    /// Coefficients in the power basis `1, t, t², …`.
    pub fn power_coeffs(&self) -> Vec<BigRational> {
        let mut out: Vec<BigRational> = vec![BigRational::zero(); self.coeffs.len()];
        for (j, c) in self.coeffs.iter().enumerate() {
            // C(t+j, j) = Π_{k=1}^{j} (t+k)/k
            let mut poly = vec![BigRational::one()];
            for k in 1..=j {
                let kq = BigRational::from_integer(BigInt::from(k));
                let mut next = vec![BigRational::zero(); poly.len() + 1];
                for (e, a) in poly.iter().enumerate() {
                    next[e + 1] += a / &kq;
                    next[e] += a;
                }
                poly = next;
            }
            for (e, a) in poly.into_iter().enumerate() {
                out[e] += a * BigRational::from_integer(c.clone());
            }
        }
        while out.last().is_some_and(|c| c.is_zero()) {
            out.pop();
        }
        out
    }

    /// Binomial-basis rendering, e.g. `4*C(t+1,1) - 6*C(t,0)`.
    pub fn render_binomial(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let basis = if j == 0 { "C(t,0)".to_string() } else { format!("C(t+{j},{j})") };
            push_signed(&mut out, c.is_negative());
            let a = c.abs();
            if a.is_one() {
                out.push_str(&basis);
            } else {
                out.push_str(&format!("{a}*{basis}"));
            }
        }
        out
    }

    /// Power-basis rendering, e.g. `4t - 2`.
    pub fn render_expanded(&self) -> String {
        let pc = self.power_coeffs();
        if pc.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (e, c) in pc.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            push_signed(&mut out, c.is_negative());
            let a = c.abs();
            let mag = if a.is_integer() { a.numer().to_string() } else { format!("{}/{}", a.numer(), a.denom()) };
            let var = match e {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{e}"),
            };
            match (e, a.is_one(), a.is_integer()) {
                (0, _, _) => out.push_str(&mag),
                (_, true, _) => out.push_str(&var),
                (_, false, true) => out.push_str(&format!("{mag}{var}")),
                (_, false, false) => out.push_str(&format!("{mag} {var}")),
            }
        }
        out
    }
}

fn push_signed(out: &mut String, negative: bool) {
    match (out.is_empty(), negative) {
        (true, true) => out.push('-'),
        (true, false) => {}
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
    }
}

impl fmt::Debug for NumericalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_binomial())
    }
}

impl fmt::Display for NumericalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_expanded())
    }
}

/// Recovers the polynomial through `values[k] = p(start + k)`.
///
/// Forward differences beyond `max_degree` must vanish across the whole
/// window; the window is never extended or guessed.
pub fn fit(start: i64, values: &[BigInt], max_degree: usize) -> Result<NumericalPolynomial> {
    if values.len() < max_degree + 2 {
        return Err(Error::WindowTooShort { len: values.len(), max_degree });
    }
    let mut newton = Vec::new();
    let mut row: Vec<BigInt> = values.to_vec();
    let mut order = 0;
    while !row.is_empty() {
        if order > max_degree && row.iter().any(|v| !v.is_zero()) {
            return Err(Error::NotEventuallyPolynomial { order });
        }
        if order <= max_degree {
            newton.push(row[0].clone());
        }
        row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
        order += 1;
    }
    // p(t) = Σ_k Δ^k p(start) · C(t − start, k)
    let eval = |t: i64| -> BigInt {
        newton
            .iter()
            .enumerate()
            .map(|(k, d)| d * binomial_poly(&BigInt::from(t - start), k as u64))
            .sum()
    };
    Ok(NumericalPolynomial::from_fn(max_degree, eval))
}

pub fn fit_i64(start: i64, values: &[i64], max_degree: usize) -> Result<NumericalPolynomial> {
    fit(start, &values.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>(), max_degree)
}

/// Converts an exact count to `i64` for display and tables.
pub fn to_i64(v: &BigInt) -> i64 {
    v.to_i64().expect("value exceeds i64")
}

pub(crate) mod bigint_strings {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|c| c.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|s| s.parse().map_err(D::Error::custom)).collect()
    }
}

pub(crate) mod bigint_string {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn evaluate_examples() {
        let four_t_minus_two = NumericalPolynomial::from_i64(&[-6, 4]);
        assert_eq!(four_t_minus_two.evaluate(4), b(14));
        assert_eq!(NumericalPolynomial::zero().evaluate(9), b(0));
        assert_eq!(NumericalPolynomial::basis(2).evaluate(4), b(15));
    }

    #[test]
    fn fit_examples() {
        let p = fit_i64(4, &[14, 18, 22, 26, 30], 2).unwrap();
        assert_eq!(p, NumericalPolynomial::from_i64(&[-6, 4]));
        assert_eq!(fit_i64(0, &[7, 7, 7], 1).unwrap(), NumericalPolynomial::from_i64(&[7]));
        assert_eq!(fit_i64(0, &[1, 3, 6, 10, 15], 2).unwrap(), NumericalPolynomial::basis(2));
    }

    #[test]
    fn fit_rejects_non_polynomial_windows() {
        // 3, 6 are pre-stable values of the order-4 multiplicative example
        assert_eq!(
            fit_i64(1, &[3, 6, 10, 14, 18], 2),
            Err(Error::NotEventuallyPolynomial { order: 3 })
        );
        assert!(matches!(fit_i64(0, &[1, 2, 3], 2), Err(Error::WindowTooShort { .. })));
    }

    #[test]
    fn shifted_binomial_matches_counts() {
        for n in 1..4usize {
            for d in 0..7i64 {
                let p = NumericalPolynomial::shifted_binomial(n, d);
                for t in (d - n as i64)..(d + 10) {
                    let count = crate::monoid::binomial_count(t - d + n as i64, n as u64);
                    assert_eq!(p.evaluate(t), BigInt::from(count), "n={n} d={d} t={t}");
                }
            }
        }
    }

    #[test]
    fn shift_moves_the_argument() {
        let p = NumericalPolynomial::from_i64(&[3, -2, 5]);
        for d in -3..4 {
            let q = p.shift(d);
            for t in -5..10 {
                assert_eq!(q.evaluate(t), p.evaluate(t - d));
            }
        }
    }

    #[test]
    fn sum_transform_examples() {
        // literal summation oracle
        let p = NumericalPolynomial::basis(1);
        let q = p.sum_transform(0);
        for i in 0..=10 {
            let lit: BigInt = (0..=i).map(|t| p.evaluate(t)).sum();
            assert_eq!(q.evaluate(i), lit);
        }
        assert_eq!(q.degree(), Some(2));
        assert!(NumericalPolynomial::zero().sum_transform(3).is_zero());
        let c = NumericalPolynomial::from_i64(&[5]);
        assert_eq!(c.sum_transform(0), NumericalPolynomial::from_i64(&[0, 5]));
    }

    #[test]
    fn invariants_examples() {
        let p = NumericalPolynomial::from_i64(&[-6, 4]);
        assert_eq!(
            p.invariants(2).unwrap(),
            Invariants { sigma_type: 1, typical_sigma_dim: b(4), sigma_dim: b(0) }
        );
        assert_eq!(
            NumericalPolynomial::basis(2).invariants(2).unwrap(),
            Invariants { sigma_type: 2, typical_sigma_dim: b(1), sigma_dim: b(1) }
        );
        assert_eq!(
            NumericalPolynomial::zero().invariants(2).unwrap(),
            Invariants { sigma_type: 0, typical_sigma_dim: b(0), sigma_dim: b(0) }
        );
        assert!(matches!(NumericalPolynomial::basis(3).invariants(2), Err(Error::DegreeExceeds { .. })));
    }

    #[test]
    fn renderings() {
        let p = NumericalPolynomial::from_i64(&[-6, 4]);
        assert_eq!(p.render_binomial(), "4*C(t+1,1) - 6*C(t,0)");
        assert_eq!(p.render_expanded(), "4t - 2");
        assert_eq!(NumericalPolynomial::from_i64(&[-10, 5]).render_expanded(), "5t - 5");
        assert_eq!(NumericalPolynomial::basis(2).render_expanded(), "1/2 t^2 + 3/2 t + 1");
        assert_eq!(NumericalPolynomial::zero().render_expanded(), "0");
        assert_eq!(NumericalPolynomial::from_i64(&[0, -1]).render_expanded(), "-t - 1");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn fit_inverts_evaluate(coeffs in prop::collection::vec(-9i64..=9, 1..=5), start in 0i64..6) {
            let p = NumericalPolynomial::from_i64(&coeffs);
            let d = coeffs.len() - 1;
            let values: Vec<BigInt> = (0..d as i64 + 3).map(|k| p.evaluate(start + k)).collect();
            prop_assert_eq!(fit(start, &values, d).unwrap(), p);
        }

        #[test]
        fn sum_transform_is_literal_summation(coeffs in prop::collection::vec(-9i64..=9, 0..=4), m in 0i64..5) {
            let p = NumericalPolynomial::from_i64(&coeffs);
            let q = p.sum_transform(m);
            for i in m..=20 {
                let lit: BigInt = (m..=i).map(|t| p.evaluate(t)).sum();
                prop_assert_eq!(q.evaluate(i), lit);
            }
            if !p.is_zero() {
                prop_assert_eq!(q.degree(), p.degree().map(|d| d + 1));
            }
        }

        #[test]
        fn values_are_integers_and_power_form_agrees(coeffs in prop::collection::vec(-9i64..=9, 0..=4)) {
            let p = NumericalPolynomial::from_i64(&coeffs);
            let pc = p.power_coeffs();
            for t in 0..=50i64 {
                let v: BigRational = pc.iter().enumerate()
                    .map(|(e, c)| c * BigRational::from_integer(BigInt::from(t).pow(e as u32)))
                    .sum();
                prop_assert!(v.is_integer());
                prop_assert_eq!(v.to_integer(), p.evaluate(t));
            }
        }
    }
}
