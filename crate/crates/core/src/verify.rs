//! Independent solution checker.
//!
//! Deliberately self-contained: it re-derives compatibility and cost sums from
//! the raw instance data and shares no predicate with the solvers.

use std::fmt;

use crate::model::{DeliveryId, Instance, Solution};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Unassigned(DeliveryId),
    AssignedTwice(DeliveryId),
    UnknownDelivery { drone: usize, id: DeliveryId },
    EmptyAssignment { drone: usize },
    DuplicateDrone { drone: usize },
    Conflict { drone: usize, a: DeliveryId, b: DeliveryId },
    OverBudget { drone: usize, used: u128, budget: u64 },
    DroneCountMismatch { reported: usize, actual: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Unassigned(id) => write!(f, "delivery {id} unassigned"),
            Violation::AssignedTwice(id) => write!(f, "delivery {id} assigned more than once"),
            Violation::UnknownDelivery { drone, id } => {
                write!(f, "unknown delivery {id} in drone {drone}")
            }
            Violation::EmptyAssignment { drone } => write!(f, "drone {drone} has no deliveries"),
            Violation::DuplicateDrone { drone } => write!(f, "drone {drone} listed twice"),
            Violation::Conflict { drone, a, b } => {
                write!(f, "conflict in drone {drone} (deliveries {a} and {b})")
            }
            Violation::OverBudget {
                drone,
                used,
                budget,
            } => write!(f, "drone {drone} over budget ({used} > {budget})"),
            Violation::DroneCountMismatch { reported, actual } => {
                write!(f, "report claims {reported} drones but {actual} are assigned")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Verification {
    pub violations: Vec<Violation>,
}

impl Verification {
    #[inline]
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for Verification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return f.write_str("pass");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks that `sol` covers every delivery exactly once with non-empty,
/// pairwise compatible, within-budget assignments.
pub fn verify_solution(inst: &Instance, sol: &Solution) -> Verification {
    let mut violations = Vec::new();
    let deliveries = inst.deliveries();
    let mut times_seen = vec![0usize; deliveries.len()];
    let mut drones = std::collections::BTreeSet::new();

    for asg in &sol.assignments {
        if !drones.insert(asg.drone) {
            violations.push(Violation::DuplicateDrone { drone: asg.drone });
        }
        if asg.delivery_ids.is_empty() {
            violations.push(Violation::EmptyAssignment { drone: asg.drone });
            continue;
        }
        let mut members = Vec::with_capacity(asg.delivery_ids.len());
        for &id in &asg.delivery_ids {
            match id.0.checked_sub(1).and_then(|i| deliveries.get(i)) {
                Some(d) => {
                    times_seen[id.0 - 1] += 1;
                    members.push(d);
                }
                None => violations.push(Violation::UnknownDelivery {
                    drone: asg.drone,
                    id,
                }),
            }
        }
        let used: u128 = members.iter().map(|d| d.cost as u128).sum();
        if used > inst.budget() as u128 {
            violations.push(Violation::OverBudget {
                drone: asg.drone,
                used,
                budget: inst.budget(),
            });
        }
        'pairs: for i in 0..members.len() {
            for j in i + 1..members.len() {
                let (a, b) = (members[i], members[j]);
                let disjoint = a.rendezvous < b.launch || b.rendezvous < a.launch;
                if !disjoint {
                    violations.push(Violation::Conflict {
                        drone: asg.drone,
                        a: a.id,
                        b: b.id,
                    });
                    break 'pairs;
                }
            }
        }
    }

    for (i, &count) in times_seen.iter().enumerate() {
        let id = DeliveryId(i + 1);
        match count {
            0 => violations.push(Violation::Unassigned(id)),
            1 => {}
            _ => violations.push(Violation::AssignedTwice(id)),
        }
    }

    if sol.report.drones_used != sol.assignments.len() {
        violations.push(Violation::DroneCountMismatch {
            reported: sol.report.drones_used,
            actual: sol.assignments.len(),
        });
    }

    Verification { violations }
}
