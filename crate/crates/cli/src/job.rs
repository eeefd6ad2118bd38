//! Job files: the JSON schema, loading with pointer-precise errors, and
//! conversion into core descriptors.

use std::path::Path;

use diffdim::groups::{GeneralizedGroupSpec, Schedule};
use diffdim::{parse_generator, Family, GroupDescriptor};
use serde::{Deserialize, Serialize};
use serde_path_to_error::Segment;

use crate::CliError;

/// One job as written on disk. Generator strings are kept verbatim so that
/// re-emitting a job is lossless.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub n: usize,
    pub family: Family,
    pub variables: Vec<String>,
    pub generators: Vec<String>,
    #[serde(default = "zariski")]
    pub schedule: Schedule,
    #[serde(default)]
    pub label: String,
}

fn zariski() -> Schedule {
    Schedule::Zariski
}

pub fn load_job(path: &Path) -> Result<JobSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_job(&text)
}

pub fn parse_job(text: &str) -> Result<JobSpec, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| CliError::Schema {
        pointer: json_pointer(e.path()),
        message: e.inner().to_string(),
    })
}

fn json_pointer(path: &serde_path_to_error::Path) -> String {
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { .. } | Segment::Unknown => {}
        }
    }
    out
}

impl JobSpec {
    pub fn descriptor(&self) -> Result<GroupDescriptor, CliError> {
        if self.n == 0 {
            return Err(CliError::Schema { pointer: "/n".into(), message: "n must be at least 1".into() });
        }
        if self.variables.is_empty() {
            return Err(CliError::Schema { pointer: "/variables".into(), message: "at least one variable is needed".into() });
        }
        let generators = self
            .generators
            .iter()
            .enumerate()
            .map(|(k, g)| {
                parse_generator(g, self.family, self.n, &self.variables)
                    .map_err(|e| CliError::Schema { pointer: format!("/generators/{k}"), message: e.to_string() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GroupDescriptor::new(self.family, self.n, self.variables.clone(), generators).with_label(self.label.clone()))
    }

    pub fn spec(&self) -> Result<GeneralizedGroupSpec, CliError> {
        let spec = GeneralizedGroupSpec::new(self.descriptor()?, self.schedule.clone());
        spec.check_schedule().map_err(|e| CliError::Schema { pointer: "/schedule".into(), message: e.to_string() })?;
        Ok(spec)
    }
}

pub fn describe_schedule(s: &Schedule) -> String {
    match s {
        Schedule::Zariski => "zariski".into(),
        Schedule::Delay { d } => format!("delay({d})"),
        Schedule::Explicit { levels, tail_from } => format!("explicit ({} listed levels, tail from {tail_from})", levels.len()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointers_name_the_offending_field() {
        let err = parse_job(r#"{"n": 2, "family": "additive", "variables": ["x"], "generators": [3]}"#).unwrap_err();
        match err {
            CliError::Schema { pointer, .. } => assert_eq!(pointer, "/generators/0"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn schedule_defaults_to_zariski() {
        let job = parse_job(r#"{"n": 1, "family": "additive", "variables": ["x"], "generators": []}"#).unwrap();
        assert_eq!(job.schedule, Schedule::Zariski);
        assert_eq!(job.label, "");
    }

    #[test]
    fn bad_expressions_point_at_the_generator() {
        let job = parse_job(r#"{"n": 2, "family": "additive", "variables": ["x"], "generators": ["x", "x*x"]}"#).unwrap();
        match job.descriptor().unwrap_err() {
            CliError::Schema { pointer, .. } => assert_eq!(pointer, "/generators/1"),
            other => panic!("{other:?}"),
        }
    }
}
