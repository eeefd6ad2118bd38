//! Brute-force reference path with no Gröbner machinery.
//!
//! Slice dimensions come from Macaulay-style matrices: all products
//! `x^β g` of order `≤ B`, eliminated over the integers with the highest
//! orders first, so the rows whose pivot has order `≤ i` span the
//! order-`≤ i` part of the span. `B` grows until the count settles.
//!
//! The module also builds the seeded random corpora used to cross-check the
//! main path against this one.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diffterm::{DiffTerm, Family, GroupDescriptor, SliceVector};
use crate::error::{Error, Result};
use crate::groups::{ambient_dim, GeneralizedGroupSpec, Schedule};
use crate::monoid::{enumerate_shifts, Mode, ShiftMonomial};
use crate::numpoly::{fit, NumericalPolynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Smallest product bound tried; the search starts at `max(i, this)`.
    pub shift_bound_start: u32,
    /// Consecutive unchanged escalations required to stop (at least 2).
    pub window: u32,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { shift_bound_start: 0, window: 3 }
    }
}

/// Column key: order first, then variable, then exponents lexicographically.
/// Deliberately not the module order used by the main path.
type Key = (u32, usize, Vec<u32>);

fn key(t: &DiffTerm) -> Key {
    (t.order(), t.var, t.shift.exponents().to_vec())
}

/// Integer row echelon with top reduction only; pivots are leading keys.
struct Echelon {
    pivots: BTreeMap<Key, BTreeMap<Key, BigInt>>,
}

impl Echelon {
    fn insert(&mut self, mut row: BTreeMap<Key, BigInt>) {
        loop {
            let Some((lead, a)) = row.iter().next_back().map(|(k, a)| (k.clone(), a.clone())) else {
                return;
            };
            let Some(p) = self.pivots.get(&lead) else {
                primitive(&mut row);
                self.pivots.insert(lead, row);
                return;
            };
            let b = p[&lead].clone();
            // row ← b·row − a·p clears the leading entry
            for v in row.values_mut() {
                *v *= &b;
            }
            for (k, c) in p {
                let e = row.entry(k.clone()).or_default();
                *e -= &a * c;
            }
            row.retain(|_, v| !v.is_zero());
            primitive(&mut row);
        }
    }

    fn count_up_to(&self, i: u32) -> u64 {
        self.pivots.keys().filter(|k| k.0 <= i).count() as u64
    }
}

fn primitive(row: &mut BTreeMap<Key, BigInt>) {
    let g = row.values().fold(BigInt::zero(), |g, v| g.gcd(v));
    if g.is_zero() {
        return;
    }
    let lead_negative = row.values().next_back().is_some_and(|v| v.is_negative());
    let g = if lead_negative { -g } else { g };
    for v in row.values_mut() {
        *v /= &g;
    }
}

/// Clears denominators so every row is integral.
fn integer_row(v: &SliceVector) -> BTreeMap<Key, BigInt> {
    let den = v.iter().fold(BigInt::from(1), |l, (_, c)| l.lcm(c.denom()));
    v.iter()
        .map(|(t, c)| (key(t), (c * BigRational::from_integer(den.clone())).to_integer()))
        .collect()
}

/// Dimension of the order-`≤ i` slice of the σ-ideal generated by
/// `generators`, by escalating the product bound.
pub fn brute_slice_rank(n: usize, generators: &[SliceVector], i: u32, cfg: OracleConfig) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if cfg.window < 2 {
        return Err(Error::Invariant(format!("oracle window {} is below 2", cfg.window)));
    }
    let gens: Vec<&SliceVector> = generators.iter().filter(|g| !g.is_zero()).collect();
    if gens.is_empty() {
        return Ok(0);
    }
    let max_order = gens.iter().map(|g| g.order() as u32).max().unwrap_or(0);
    let ceiling = i + 3 * max_order + 10;
    let mut ech = Echelon { pivots: BTreeMap::new() };
    let mut added = 0u32;
    let add_order = |ech: &mut Echelon, total: u32| -> Result<()> {
        // products of order exactly `total`
        for g in &gens {
            let og = g.order() as u32;
            if og > total {
                continue;
            }
            for beta in enumerate_shifts(n, total - og, Mode::Exactly)? {
                ech.insert(integer_row(&g.apply_shift(&beta)?));
            }
        }
        Ok(())
    };
    let start = i.max(cfg.shift_bound_start);
    while added <= start {
        add_order(&mut ech, added)?;
        added += 1;
    }
    let mut bound = start;
    let mut last = ech.count_up_to(i);
    let mut unchanged = 0;
    while unchanged < cfg.window {
        bound += 1;
        if bound > ceiling {
            return Err(Error::OracleInconclusive { level: i, bound });
        }
        add_order(&mut ech, bound)?;
        let now = ech.count_up_to(i);
        if now < last {
            return Err(Error::Invariant("oracle count decreased under escalation".into()));
        }
        if now == last {
            unchanged += 1;
        } else {
            unchanged = 0;
            last = now;
        }
    }
    Ok(last)
}

/// Fits brute-force closure dimensions over `window` with degree `≤ n`.
pub fn brute_dim_poly(desc: &GroupDescriptor, window: RangeInclusive<u32>, cfg: OracleConfig) -> Result<NumericalPolynomial> {
    let len = window.clone().count();
    if len < desc.n + 2 {
        return Err(Error::WindowTooShort { len, max_degree: desc.n });
    }
    let start = *window.start();
    let values = window
        .map(|i| {
            let rank = brute_slice_rank(desc.n, &desc.generators, i, cfg)?;
            Ok(BigInt::from(ambient_dim(desc.n, desc.s(), i) - rank))
        })
        .collect::<Result<Vec<_>>>()?;
    fit(i64::from(start), &values, desc.n)
}

/// Bounds for random instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusParams {
    pub max_n: usize,
    pub max_s: usize,
    pub max_generators: usize,
    pub max_order: u32,
    pub max_coeff: i64,
    pub max_terms: usize,
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams { max_n: 3, max_s: 2, max_generators: 3, max_order: 4, max_coeff: 3, max_terms: 3 }
    }
}

fn random_shift(rng: &mut ChaCha8Rng, n: usize, order: u32) -> ShiftMonomial {
    let mut e = vec![0u32; n];
    for _ in 0..order {
        e[rng.gen_range(0..n)] += 1;
    }
    ShiftMonomial::new(e)
}

fn random_generator(rng: &mut ChaCha8Rng, n: usize, s: usize, p: &CorpusParams) -> SliceVector {
    loop {
        let terms = rng.gen_range(1..=p.max_terms);
        let mut v = SliceVector::zero(n);
        for _ in 0..terms {
            let order = rng.gen_range(0..=p.max_order);
            let t = DiffTerm::new(rng.gen_range(0..s), random_shift(rng, n, order));
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-p.max_coeff..=p.max_coeff);
            }
            v.add_term(t, BigRational::from_integer(c.into()));
        }
        if !v.is_zero() {
            return v;
        }
    }
}

/// Seeded random descriptors within `p`; the same seed gives the same list.
pub fn random_corpus(seed: u64, count: usize, p: &CorpusParams) -> Vec<GroupDescriptor> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let n = rng.gen_range(1..=p.max_n);
            let s = rng.gen_range(1..=p.max_s);
            let family = if rng.gen_bool(0.5) { Family::Additive } else { Family::Multiplicative };
            let g = rng.gen_range(1..=p.max_generators);
            let generators = (0..g).map(|_| random_generator(&mut rng, n, s, p)).collect();
            let variables = (1..=s).map(|j| format!("y{j}")).collect();
            GroupDescriptor::new(family, n, variables, generators).with_label(format!("random-{seed}-{k}"))
        })
        .collect()
}

/// Random generalized specs over a random corpus: delay schedules and
/// explicit schedules whose levels are closed under nesting and shifts by
/// construction, and which list every generator by the last listed level.
pub fn random_generalized(seed: u64, count: usize, p: &CorpusParams) -> Vec<GeneralizedGroupSpec> {
    let bases = random_corpus(seed, count, p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x005e_ed0f_5eed);
    bases
        .into_iter()
        .map(|base| {
            if rng.gen_bool(0.4) {
                let d = rng.gen_range(0..=2);
                return GeneralizedGroupSpec::new(base, Schedule::Delay { d });
            }
            let n = base.n;
            let orders: Vec<u32> = base.generators.iter().map(|g| g.order() as u32).collect();
            let max_order = orders.iter().copied().max().unwrap_or(0);
            let tail_from = max_order + rng.gen_range(0..=2);
            let mut levels: Vec<Vec<(usize, ShiftMonomial)>> = Vec::new();
            let mut cur: BTreeSet<(usize, ShiftMonomial)> = BTreeSet::new();
            for i in 0..=tail_from {
                let prev: Vec<_> = cur.iter().cloned().collect();
                for (g, tau) in prev {
                    for j in 0..n {
                        let up = tau.multiply(&ShiftMonomial::unit(n, j));
                        if orders[g] + up.order() <= i {
                            cur.insert((g, up));
                        }
                    }
                }
                for (g, &og) in orders.iter().enumerate() {
                    if og <= i && (i == tail_from || rng.gen_bool(0.3)) {
                        let extra = rng.gen_range(0..=(i - og));
                        cur.insert((g, random_shift(&mut rng, n, extra)));
                        if i == tail_from {
                            cur.insert((g, ShiftMonomial::identity(n)));
                        }
                    }
                }
                levels.push(cur.iter().cloned().collect());
            }
            GeneralizedGroupSpec::new(base, Schedule::Explicit { levels, tail_from })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffterm::parse_generator;

    fn example() -> GroupDescriptor {
        GroupDescriptor::parse(Family::Multiplicative, 2, &["x"], &["s1^2 s2(x) * s2^4(x) - 1"]).unwrap()
    }

    #[test]
    fn slice_rank_examples() {
        let d = example();
        let cfg = OracleConfig::default();
        assert_eq!(brute_slice_rank(2, &d.generators, 4, cfg).unwrap(), 1);
        assert_eq!(brute_slice_rank(2, &d.generators, 3, cfg).unwrap(), 0);
        assert_eq!(brute_slice_rank(2, &d.generators, 5, cfg).unwrap(), 3);
        assert_eq!(brute_slice_rank(2, &[], 7, cfg).unwrap(), 0);
    }

    #[test]
    fn rejects_short_window_setting() {
        let d = example();
        let cfg = OracleConfig { shift_bound_start: 0, window: 1 };
        assert!(brute_slice_rank(2, &d.generators, 4, cfg).is_err());
    }

    #[test]
    fn dim_poly_examples() {
        let cfg = OracleConfig::default();
        let d = example();
        assert_eq!(brute_dim_poly(&d, 4..=9, cfg).unwrap(), NumericalPolynomial::from_i64(&[-6, 4]));
        // 6, 10, 14, 18 already lie on 4t − 2
        assert_eq!(brute_dim_poly(&d, 2..=5, cfg).unwrap(), NumericalPolynomial::from_i64(&[-6, 4]));
        assert_eq!(brute_dim_poly(&d, 1..=5, cfg), Err(Error::NotEventuallyPolynomial { order: 3 }));
        assert!(matches!(brute_dim_poly(&d, 4..=6, cfg), Err(Error::WindowTooShort { .. })));
        let free = GroupDescriptor::parse(Family::Additive, 2, &["x", "y"], &[]).unwrap();
        let two = BigInt::from(2);
        assert_eq!(brute_dim_poly(&free, 0..=4, cfg).unwrap(), NumericalPolynomial::basis(2).scale(&two));
    }

    #[test]
    fn rational_generators_are_cleared() {
        let v = parse_generator("1/2 s1(x) + 1/3 x", Family::Additive, 1, &["x".to_string()]).unwrap();
        assert_eq!(brute_slice_rank(1, &[v], 3, OracleConfig::default()).unwrap(), 3);
    }

    #[test]
    fn corpus_is_deterministic_and_bounded() {
        let p = CorpusParams::default();
        let a = random_corpus(7, 20, &p);
        assert_eq!(a, random_corpus(7, 20, &p));
        for d in &a {
            assert!(d.n <= 3 && d.s() <= 2 && d.generators.len() <= 3);
            assert!(d.generators.iter().all(|g| g.order() <= 4 && !g.is_zero()));
            crate::diffterm::family_check(d).unwrap();
        }
        for spec in random_generalized(7, 20, &p) {
            spec.check_schedule().unwrap();
        }
    }
}
