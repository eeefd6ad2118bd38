//! Exact linear algebra over the coordinate space spanned by difference terms.
//!
//! A [`SliceBasis`] is kept in reduced row-echelon form whose pivots are the
//! leading terms of the rows in the module order. Because that order is
//! degree-compatible, the subspace of vectors of order `≤ i` is spanned by the
//! rows whose pivot has order `≤ i`; restriction is a filter on the rows.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::diffterm::{DiffTerm, SliceVector};
use crate::error::{Error, Result};

/// Reduced echelon basis of a subspace, keyed by pivot term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceBasis {
    n: usize,
    ambient_level: u32,
    rows: BTreeMap<DiffTerm, SliceVector>,
}

impl SliceBasis {
    pub fn empty(n: usize, ambient_level: u32) -> Self {
        SliceBasis { n, ambient_level, rows: BTreeMap::new() }
    }

    /// Row-reduces `vs`. The ambient level is the largest order seen (0 when
    /// every vector is zero).
    pub fn echelonize(n: usize, vs: &[SliceVector]) -> Result<Self> {
        let level = vs.iter().map(|v| v.order()).max().unwrap_or(0).max(0) as u32;
        let mut b = SliceBasis::empty(n, level);
        for v in vs {
            b.insert(v)?;
        }
        Ok(b)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ambient_level(&self) -> u32 {
        self.ambient_level
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows in strictly decreasing pivot order.
    pub fn rows(&self) -> impl Iterator<Item = &SliceVector> {
        self.rows.values().rev()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &DiffTerm> {
        self.rows.keys().rev()
    }

    fn check(&self, v: &SliceVector) -> Result<()> {
        if v.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: v.n() });
        }
        Ok(())
    }

    /// Normal form of `v`: no pivot term survives.
    pub fn reduce(&self, v: &SliceVector) -> Result<SliceVector> {
        self.check(v)?;
        let mut r = v.clone();
        // Rows carry no foreign pivots, so one pass over the pivots present
        // in `v` clears them all.
        let hits: Vec<DiffTerm> = v.terms().filter(|t| self.rows.contains_key(*t)).cloned().collect();
        for t in hits {
            if let Some(c) = r.coeff(&t).cloned() {
                r.add_scaled(&self.rows[&t], &(-c));
            }
        }
        Ok(r)
    }

    pub fn contains(&self, v: &SliceVector) -> Result<bool> {
        Ok(self.reduce(v)?.is_zero())
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &SliceVector) -> Result<bool> {
        let r = self.reduce(v)?;
        let Some(lt) = r.leading_term().cloned() else {
            return Ok(false);
        };
        let r = r.monic();
        for row in self.rows.values_mut() {
            if let Some(c) = row.coeff(&lt).cloned() {
                row.add_scaled(&r, &(-c));
            }
        }
        let order = r.order() as u32;
        if order > self.ambient_level {
            self.ambient_level = order;
        }
        self.rows.insert(lt, r);
        Ok(true)
    }

    /// Span of both bases.
    pub fn sum(&self, other: &SliceBasis) -> Result<SliceBasis> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let mut out = self.clone();
        for r in other.rows() {
            out.insert(r)?;
        }
        out.ambient_level = self.ambient_level.max(other.ambient_level);
        Ok(out)
    }

    pub fn is_subspace_of(&self, other: &SliceBasis) -> Result<bool> {
        for r in self.rows() {
            if !other.contains(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality of spans (reduced bases are unique).
    pub fn same_span(&self, other: &SliceBasis) -> bool {
        self.rows == other.rows
    }

    /// Basis of `{v ∈ span : order(v) ≤ i}` at ambient level `i`.
    pub fn restrict_to_order(&self, i: u32) -> Result<SliceBasis> {
        if i > self.ambient_level {
            return Err(Error::LevelOutOfRange { level: i, ambient: self.ambient_level });
        }
        Ok(SliceBasis {
            n: self.n,
            ambient_level: i,
            rows: self
                .rows
                .iter()
                .filter(|(p, _)| p.order() <= i)
                .map(|(p, r)| (p.clone(), r.clone()))
                .collect(),
        })
    }

    /// Same rows, reinterpreted at a higher level.
    pub fn extend_to(&self, level: u32) -> SliceBasis {
        SliceBasis { ambient_level: self.ambient_level.max(level), ..self.clone() }
    }
}

/// Dimension of the span of `vs`.
pub fn subspace_dim(b: &SliceBasis) -> usize {
    b.dim()
}

/// Rank of integer vectors by Bareiss elimination, with no rational division
/// in intermediate steps.
pub fn fraction_free_rank(vs: &[SliceVector]) -> Result<usize> {
    let mut columns: Vec<&DiffTerm> = vs.iter().flat_map(|v| v.terms()).collect();
    columns.sort();
    columns.dedup();
    let index: BTreeMap<&DiffTerm, usize> = columns.iter().enumerate().map(|(k, t)| (*t, k)).collect();
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(vs.len());
    for v in vs {
        let mut row = vec![BigInt::zero(); columns.len()];
        for (t, c) in v.iter() {
            if !c.is_integer() {
                return Err(Error::NonIntegerInput);
            }
            row[index[t]] = c.to_integer();
        }
        m.push(row);
    }
    Ok(bareiss_rank(m))
}

fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = (&m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c]) / &prev;
                m[r][c] = v;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Converts an integer matrix into slice vectors over one variable and `n = 1`,
/// column `j` being the term `σ₁^j(y₁)`. Test and oracle helper.
pub fn matrix_rows(m: &[Vec<i64>]) -> Vec<SliceVector> {
    use crate::monoid::ShiftMonomial;
    m.iter()
        .map(|row| {
            SliceVector::from_terms(
                1,
                row.iter().enumerate().map(|(j, &c)| {
                    (DiffTerm::new(0, ShiftMonomial::new(vec![j as u32])), BigRational::from_integer(c.into()))
                }),
            )
            .expect("n = 1 throughout")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::ShiftMonomial;
    use proptest::prelude::*;

    fn e(j: u32) -> SliceVector {
        SliceVector::unit(DiffTerm::new(0, ShiftMonomial::new(vec![j])))
    }

    fn add(a: &SliceVector, b: &SliceVector) -> SliceVector {
        let mut r = a.clone();
        r.add_scaled(b, &BigRational::from_integer(1.into()));
        r
    }

    #[test]
    fn echelonize_examples() {
        let v = add(&e(0), &e(2));
        let two_v = v.scale(&BigRational::from_integer(2.into()));
        assert_eq!(SliceBasis::echelonize(1, &[v.clone(), two_v]).unwrap().dim(), 1);
        assert_eq!(SliceBasis::echelonize(1, &[]).unwrap().dim(), 0);
        let b = SliceBasis::echelonize(1, &[add(&e(0), &e(1)), e(1)]).unwrap();
        let rows: Vec<_> = b.rows().cloned().collect();
        assert_eq!(rows, vec![e(1), e(0)]);
    }

    #[test]
    fn echelonize_rejects_mixed_dimensions() {
        let other = SliceVector::unit(DiffTerm::new(0, ShiftMonomial::new(vec![0, 1])));
        assert!(matches!(
            SliceBasis::echelonize(1, &[e(0), other]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn subspace_operations() {
        let b1 = SliceBasis::echelonize(1, &[e(0)]).unwrap();
        assert!(!b1.contains(&add(&e(0), &e(1))).unwrap());
        let b2 = SliceBasis::echelonize(1, &[e(1)]).unwrap();
        assert_eq!(b1.sum(&b2).unwrap().dim(), 2);
        assert_eq!(subspace_dim(&SliceBasis::echelonize(1, &[e(0), e(0)]).unwrap()), 1);
        assert!(b1.sum(&b2).unwrap().same_span(&b2.sum(&b1).unwrap()));
        assert!(b1.sum(&b1).unwrap().same_span(&b1));
    }

    #[test]
    fn restriction_examples() {
        // the multiplicative example generator: its only low-order content is
        // tied to an order-4 term, so nothing of order ≤ 3 survives
        let two = ShiftMonomial::new(vec![2, 1]);
        let four = ShiftMonomial::new(vec![0, 4]);
        let g = SliceVector::from_terms(
            2,
            [
                (DiffTerm::new(0, two), BigRational::from_integer(1.into())),
                (DiffTerm::new(0, four), BigRational::from_integer(1.into())),
            ],
        )
        .unwrap();
        let b = SliceBasis::echelonize(2, &[g]).unwrap();
        assert_eq!(b.restrict_to_order(3).unwrap().dim(), 0);
        assert_eq!(b.restrict_to_order(4).unwrap(), b);
        assert!(b.restrict_to_order(5).is_err());
        let disjoint = SliceBasis::echelonize(1, &[e(1), e(5)]).unwrap();
        let low = disjoint.restrict_to_order(2).unwrap();
        assert_eq!(low.rows().cloned().collect::<Vec<_>>(), vec![e(1)]);
    }

    #[test]
    fn restriction_matches_brute_elimination() {
        // span{e5 + e1, e5 - e2, e3}: the order-≤2 part is spanned by e1 + e2
        let mut a = add(&e(5), &e(1));
        let b = {
            let mut b = e(5);
            b.add_scaled(&e(2), &BigRational::from_integer((-1).into()));
            b
        };
        let basis = SliceBasis::echelonize(1, &[a.clone(), b.clone(), e(3)]).unwrap();
        let low = basis.restrict_to_order(2).unwrap();
        assert_eq!(low.dim(), 1);
        a.add_scaled(&b, &BigRational::from_integer((-1).into()));
        assert!(low.contains(&a).unwrap());
    }

    #[test]
    fn fraction_free_rank_mirrors() {
        let v = add(&e(0), &e(2));
        assert_eq!(fraction_free_rank(&[v.clone(), v.scale(&BigRational::from_integer(2.into()))]).unwrap(), 1);
        assert_eq!(fraction_free_rank(&[]).unwrap(), 0);
        assert_eq!(fraction_free_rank(&[add(&e(0), &e(1)), e(1)]).unwrap(), 2);
        let half = e(0).scale(&BigRational::new(1.into(), 2.into()));
        assert_eq!(fraction_free_rank(&[half]), Err(Error::NonIntegerInput));
    }

    fn arb_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..=30, 1usize..=30).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(-5i64..=5, c), r)
        })
    }

    fn arb_low_rank() -> impl Strategy<Value = Vec<Vec<i64>>> {
        // products of thin factors exercise rank deficiency
        (2usize..=12, 2usize..=12, 1usize..=4).prop_flat_map(|(r, c, k)| {
            (
                prop::collection::vec(prop::collection::vec(-3i64..=3, k), r),
                prop::collection::vec(prop::collection::vec(-3i64..=3, c), k),
            )
                .prop_map(move |(a, b)| {
                    (0..r)
                        .map(|i| (0..c).map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum()).collect())
                        .collect()
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn bareiss_agrees_with_rational_echelon(m in arb_matrix()) {
            let rows = matrix_rows(&m);
            let b = SliceBasis::echelonize(1, &rows).unwrap();
            prop_assert_eq!(fraction_free_rank(&rows).unwrap(), subspace_dim(&b));
        }

        #[test]
        fn bareiss_agrees_on_low_rank(m in arb_low_rank()) {
            let rows = matrix_rows(&m);
            let b = SliceBasis::echelonize(1, &rows).unwrap();
            prop_assert_eq!(fraction_free_rank(&rows).unwrap(), subspace_dim(&b));
        }

        #[test]
        fn restriction_is_a_subspace_with_bounded_rows(m in arb_low_rank(), i in 0u32..12) {
            let b = SliceBasis::echelonize(1, &matrix_rows(&m)).unwrap();
            let i = i.min(b.ambient_level());
            let r = b.restrict_to_order(i).unwrap();
            prop_assert!(r.is_subspace_of(&b).unwrap());
            for row in r.rows() {
                prop_assert!(row.order() <= i64::from(i));
            }
            // brute force: every vector of the span with order ≤ i is caught
            for row in b.rows() {
                if row.order() <= i64::from(i) {
                    prop_assert!(r.contains(row).unwrap());
                }
            }
        }

        #[test]
        fn sum_commutes_and_is_idempotent(a in arb_low_rank(), b in arb_low_rank()) {
            let x = SliceBasis::echelonize(1, &matrix_rows(&a)).unwrap();
            let y = SliceBasis::echelonize(1, &matrix_rows(&b)).unwrap();
            prop_assert!(x.sum(&y).unwrap().same_span(&y.sum(&x).unwrap()));
            prop_assert!(x.sum(&x).unwrap().same_span(&x));
        }
    }
}
