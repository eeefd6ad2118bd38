//! Bundled regression jobs with their expected results.

use crate::job::{parse_job, JobSpec};

pub struct Fixture {
    pub id: &'static str,
    pub source: &'static str,
    /// Leading closure dimensions, from level 0.
    pub closure_dims: &'static [u64],
    /// Leading dimensions of the scheduled chain, from level 0.
    pub chain_dims: &'static [u64],
    /// Expanded form of the chain polynomial.
    pub chain_polynomial: &'static str,
}

pub const FIXTURES: &[Fixture] = &[
    Fixture {
        id: "order4-closure",
        source: include_str!("../fixtures/order4-closure.json"),
        closure_dims: &[1, 3, 6, 10, 14, 18, 22, 26, 30],
        chain_dims: &[1, 3, 6, 10, 14, 18, 22, 26, 30],
        chain_polynomial: "4t - 2",
    },
    Fixture {
        id: "order4-delay1",
        source: include_str!("../fixtures/order4-delay1.json"),
        closure_dims: &[1, 3, 6, 10, 14, 18, 22, 26, 30],
        chain_dims: &[1, 3, 6, 10, 15, 20, 25, 30, 35],
        chain_polynomial: "5t - 5",
    },
    Fixture {
        id: "free-additive-n3-s2",
        source: include_str!("../fixtures/free-additive-n3-s2.json"),
        closure_dims: &[2, 8, 20, 40, 70, 112],
        chain_dims: &[2, 8, 20, 40, 70, 112],
        chain_polynomial: "1/3 t^3 + 2t^2 + 11/3 t + 2",
    },
    Fixture {
        id: "trivial-additive-n2",
        source: include_str!("../fixtures/trivial-additive-n2.json"),
        closure_dims: &[0, 0, 0, 0, 0, 0, 0],
        chain_dims: &[0, 0, 0, 0, 0, 0, 0],
        chain_polynomial: "0",
    },
    Fixture {
        id: "explicit-additive-n2",
        source: include_str!("../fixtures/explicit-additive-n2.json"),
        closure_dims: &[1, 2, 3, 4, 5, 6, 7],
        chain_dims: &[1, 3, 5, 7, 9, 11, 13],
        chain_polynomial: "2t + 1",
    },
];

impl Fixture {
    pub fn job(&self) -> JobSpec {
        parse_job(self.source).expect("bundled fixture parses")
    }
}

/// Id of the bundled fixture describing the same group and schedule as
/// `job`; labels are ignored.
pub fn matching(job: &JobSpec) -> Option<&'static str> {
    let desc = job.descriptor().ok()?;
    FIXTURES.iter().find_map(|f| {
        let fj = f.job();
        let fd = fj.descriptor().ok()?;
        let same = fd.family == desc.family
            && fd.n == desc.n
            && fd.variables == desc.variables
            && fd.generators == desc.generators
            && fj.schedule == job.schedule;
        same.then_some(f.id)
    })
}
