use diffdim::groebner::hilbert_function;
use diffdim::groups::{ambient_dim, Closure};
use diffdim::oracle::{brute_dim_poly, brute_slice_rank, random_corpus, CorpusParams, OracleConfig};
use diffdim::{Error, Family, GroupDescriptor};
use proptest::prelude::*;

fn small() -> CorpusParams {
    CorpusParams { max_n: 2, max_order: 3, ..CorpusParams::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    // Escalation only ever adds rows inside L_i, so any window gives a
    // lower bound on dim L_i.
    #[test]
    fn oracle_never_exceeds_the_main_path(seed in any::<u64>(), i in 0u32..5) {
        let d = &random_corpus(seed, 1, &small())[0];
        let c = Closure::new(d).unwrap();
        let main = hilbert_function(&c.groebner_basis().staircase(), d.n, i).unwrap();
        match brute_slice_rank(d.n, &d.generators, i, OracleConfig::default()) {
            Ok(r) => prop_assert!(r <= main, "{}: oracle {r} > main {main}", d.label),
            Err(Error::OracleInconclusive { .. }) => {}
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn wide_window_oracle_matches_the_main_path(seed in any::<u64>(), i in 0u32..5) {
        let d = &random_corpus(seed, 1, &small())[0];
        let c = Closure::new(d).unwrap();
        let main = hilbert_function(&c.groebner_basis().staircase(), d.n, i).unwrap();
        let cfg = OracleConfig { window: 8, ..OracleConfig::default() };
        match brute_slice_rank(d.n, &d.generators, i, cfg) {
            Ok(r) => prop_assert_eq!(r, main, "{}", d.label),
            Err(Error::OracleInconclusive { .. }) => {}
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn fitted_oracle_polynomial_matches_the_closed_form() {
    let d = GroupDescriptor::parse(Family::Multiplicative, 2, &["x"], &["s1^2 s2(x) * s2^4(x) - 1"]).unwrap();
    let c = Closure::new(&d).unwrap();
    let fitted = brute_dim_poly(&d, 2..=5, OracleConfig::default()).unwrap();
    assert_eq!(fitted, c.dimension_polynomial().unwrap().poly);
}

#[test]
fn oracle_dims_agree_on_a_seeded_corpus() {
    let cfg = OracleConfig { window: 8, ..OracleConfig::default() };
    for d in random_corpus(11, 15, &CorpusParams::default()) {
        let c = Closure::new(&d).unwrap();
        for i in 0..=5 {
            let r = brute_slice_rank(d.n, &d.generators, i, cfg).unwrap();
            assert_eq!(ambient_dim(d.n, d.s(), i) - r, c.dim(i).unwrap(), "{} level {i}", d.label);
        }
    }
}
