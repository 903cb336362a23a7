//! JSON interchange formats for instances and solutions.
//!
//! Keys are always written in a fixed order, so reading a canonical file and
//! writing it back reproduces it byte for byte.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    validate_instance, Algorithm, Assignment, ClassReport, InstanceError, RawInstance, RunReport,
    Solution, TreeOps,
};
use crate::Instance;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON")]
    Json(#[from] serde_json::Error),
    #[error("invalid instance")]
    Instance(#[from] InstanceError),
    #[error("solution header says {header} drones but lists {listed}")]
    DroneCount { header: usize, listed: usize },
}

pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let raw: RawInstance = serde_json::from_str(text)?;
    Ok(validate_instance(&raw)?)
}

pub fn instance_to_json(inst: &Instance) -> String {
    let mut s = serde_json::to_string_pretty(&inst.to_raw()).expect("instance serializes");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct ReportFields {
    check_calls: u64,
    tree_ops: TreeOps,
    elapsed_ns: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    classes: Vec<ClassReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct SolutionFile {
    algorithm: Algorithm,
    drones_used: usize,
    assignments: Vec<Assignment>,
    report: ReportFields,
}

pub fn solution_to_json(sol: &Solution) -> String {
    let file = SolutionFile {
        algorithm: sol.report.algorithm,
        drones_used: sol.report.drones_used,
        assignments: sol.assignments.clone(),
        report: ReportFields {
            check_calls: sol.report.check_calls,
            tree_ops: sol.report.tree_ops,
            elapsed_ns: sol.report.elapsed_ns,
            classes: sol.report.classes.clone(),
        },
    };
    let mut s = serde_json::to_string_pretty(&file).expect("solution serializes");
    s.push('\n');
    s
}

pub fn parse_solution(text: &str) -> Result<Solution, FormatError> {
    let file: SolutionFile = serde_json::from_str(text)?;
    if file.drones_used != file.assignments.len() {
        return Err(FormatError::DroneCount {
            header: file.drones_used,
            listed: file.assignments.len(),
        });
    }
    Ok(Solution {
        assignments: file.assignments,
        report: RunReport {
            algorithm: file.algorithm,
            drones_used: file.drones_used,
            check_calls: file.report.check_calls,
            tree_ops: file.report.tree_ops,
            elapsed_ns: file.report.elapsed_ns,
            classes: file.report.classes,
        },
    })
}
