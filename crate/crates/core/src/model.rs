//! Problem data model: deliveries, instances, assignments and solutions.
//!
//! Times and energy costs are non-negative integers. Callers that work with
//! decimal quantities are expected to pre-scale them, which keeps every
//! feasibility comparison exact.

use std::collections::HashSet;
use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Time instant, in whatever integer unit the caller chose.
pub type Time = u64;

/// Battery energy, in whatever integer unit the caller chose.
pub type Energy = u64;

/// Dense, one-based delivery identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DeliveryId(pub usize);

impl DeliveryId {
    /// Zero-based position of this delivery inside its instance.
    #[inline]
    pub fn index(self) -> usize {
        self.0 - 1
    }

    #[inline]
    pub fn from_index(index: usize) -> Self {
        DeliveryId(index + 1)
    }
}

impl fmt::Display for DeliveryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A single delivery: the closed time window `[launch, rendezvous]` during
/// which a drone is away from the truck, and the energy it burns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Delivery {
    pub id: DeliveryId,
    pub launch: Time,
    pub rendezvous: Time,
    pub cost: Energy,
}

impl Delivery {
    /// True iff the two closed intervals share at least one instant.
    ///
    /// Touching windows such as `[0, 2]` and `[2, 3]` conflict.
    #[inline]
    pub fn conflicts_with(&self, other: &Delivery) -> bool {
        intervals_conflict(self, other)
    }

    #[inline]
    pub fn duration(&self) -> Time {
        self.rendezvous - self.launch
    }
}

/// Closed-interval intersection test. Symmetric in its arguments.
#[inline]
pub fn intervals_conflict(a: &Delivery, b: &Delivery) -> bool {
    a.launch <= b.rendezvous && b.launch <= a.rendezvous
}

/// Reasons an instance description is rejected.
///
/// Delivery references use the identifier the caller supplied (or the
/// one-based input position when no identifier was given).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("instance has no battery budget")]
    MissingBudget,
    #[error("battery budget must be positive, got {0}")]
    NonPositiveBudget(i64),
    #[error("delivery {id}: cost must be positive, got {cost}")]
    NonPositiveCost { id: i64, cost: i64 },
    #[error("delivery {id}: cost exceeds budget ({cost} > {budget})")]
    CostExceedsBudget { id: i64, cost: i64, budget: i64 },
    #[error("delivery {id}: launch {launch} is after rendezvous {rendezvous}")]
    InvertedInterval { id: i64, launch: i64, rendezvous: i64 },
    #[error("delivery {id}: negative time {time}")]
    NegativeTime { id: i64, time: i64 },
    #[error("delivery {id}: duplicate id")]
    DuplicateId { id: i64 },
}

/// A delivery as read from an external description, before validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDelivery {
    #[serde(default)]
    pub id: Option<i64>,
    pub launch: i64,
    pub rendezvous: i64,
    pub cost: i64,
}

/// An instance as read from an external description, before validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawInstance {
    #[serde(default)]
    pub budget: Option<i64>,
    #[serde(default)]
    pub deliveries: Vec<RawDelivery>,
}

/// A validated problem instance. Deliveries are stored in input order with
/// identifiers `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    budget: Energy,
    deliveries: Vec<Delivery>,
}

impl Instance {
    /// Builds an instance from `(launch, rendezvous, cost)` triples.
    pub fn new<I>(budget: Energy, windows: I) -> Result<Self, InstanceError>
    where
        I: IntoIterator<Item = (Time, Time, Energy)>,
    {
        let raw = RawInstance {
            budget: Some(to_i64(budget)),
            deliveries: windows
                .into_iter()
                .map(|(launch, rendezvous, cost)| RawDelivery {
                    id: None,
                    launch: to_i64(launch),
                    rendezvous: to_i64(rendezvous),
                    cost: to_i64(cost),
                })
                .collect(),
        };
        validate_instance(&raw)
    }

    #[inline]
    pub fn budget(&self) -> Energy {
        self.budget
    }

    #[inline]
    pub fn deliveries(&self) -> &[Delivery] {
        &self.deliveries
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.deliveries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.deliveries.is_empty()
    }

    #[inline]
    pub fn delivery(&self, id: DeliveryId) -> Option<&Delivery> {
        id.0.checked_sub(1).and_then(|i| self.deliveries.get(i))
    }

    pub fn ids(&self) -> impl Iterator<Item = DeliveryId> + '_ {
        self.deliveries.iter().map(|d| d.id)
    }

    pub fn total_cost(&self) -> Energy {
        self.deliveries.iter().map(|d| d.cost).sum()
    }

    /// Delivery identifiers ordered by `(launch, rendezvous, id)`.
    pub fn launch_order(&self) -> Vec<DeliveryId> {
        let mut ids: Vec<DeliveryId> = self.ids().collect();
        ids.sort_by_key(|id| {
            let d = &self.deliveries[id.index()];
            (d.launch, d.rendezvous, d.id)
        });
        ids
    }

    pub fn to_raw(&self) -> RawInstance {
        RawInstance {
            budget: Some(to_i64(self.budget)),
            deliveries: self
                .deliveries
                .iter()
                .map(|d| RawDelivery {
                    id: Some(d.id.0 as i64),
                    launch: to_i64(d.launch),
                    rendezvous: to_i64(d.rendezvous),
                    cost: to_i64(d.cost),
                })
                .collect(),
        }
    }
}

fn to_i64(v: u64) -> i64 {
    i64::try_from(v).unwrap_or(i64::MAX)
}

/// Validates a raw instance and returns its canonical form, with deliveries
/// re-indexed `1..=n` in input order.
pub fn validate_instance(raw: &RawInstance) -> Result<Instance, InstanceError> {
    let budget = raw.budget.ok_or(InstanceError::MissingBudget)?;
    if budget <= 0 {
        return Err(InstanceError::NonPositiveBudget(budget));
    }
    let mut seen = HashSet::with_capacity(raw.deliveries.len());
    let mut deliveries = Vec::with_capacity(raw.deliveries.len());
    for (pos, rd) in raw.deliveries.iter().enumerate() {
        let id = rd.id.unwrap_or(pos as i64 + 1);
        if !seen.insert(id) {
            return Err(InstanceError::DuplicateId { id });
        }
        if rd.cost <= 0 {
            return Err(InstanceError::NonPositiveCost { id, cost: rd.cost });
        }
        if rd.cost > budget {
            return Err(InstanceError::CostExceedsBudget {
                id,
                cost: rd.cost,
                budget,
            });
        }
        for time in [rd.launch, rd.rendezvous] {
            if time < 0 {
                return Err(InstanceError::NegativeTime { id, time });
            }
        }
        if rd.launch > rd.rendezvous {
            return Err(InstanceError::InvertedInterval {
                id,
                launch: rd.launch,
                rendezvous: rd.rendezvous,
            });
        }
        deliveries.push(Delivery {
            id: DeliveryId::from_index(pos),
            launch: rd.launch as Time,
            rendezvous: rd.rendezvous as Time,
            cost: rd.cost as Energy,
        });
    }
    Ok(Instance {
        budget: budget as Energy,
        deliveries,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("unknown delivery {0}")]
pub struct UnknownDelivery(pub DeliveryId);

/// True iff the given deliveries are pairwise compatible and their total cost
/// fits the battery budget.
pub fn is_feasible_set(ids: &[DeliveryId], inst: &Instance) -> Result<bool, UnknownDelivery> {
    let members = ids
        .iter()
        .map(|&id| inst.delivery(id).ok_or(UnknownDelivery(id)))
        .collect::<Result<Vec<_>, _>>()?;
    let total: Energy = members.iter().map(|d| d.cost).sum();
    if total > inst.budget() {
        return Ok(false);
    }
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            if intervals_conflict(a, b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The deliveries flown by one drone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    /// One-based drone index.
    pub drone: usize,
    pub delivery_ids: Vec<DeliveryId>,
}

impl Assignment {
    pub fn cost(&self, inst: &Instance) -> Energy {
        self.delivery_ids
            .iter()
            .filter_map(|&id| inst.delivery(id))
            .map(|d| d.cost)
            .sum()
    }
}

/// Which solver produced a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Greedy,
    Coloring,
    Exact,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Greedy => "greedy",
            Algorithm::Coloring => "coloring",
            Algorithm::Exact => "exact",
        })
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(Algorithm::Greedy),
            "coloring" => Ok(Algorithm::Coloring),
            "exact" => Ok(Algorithm::Exact),
            other => Err(format!("unknown algorithm '{other}'")),
        }
    }
}

/// Tree operation counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeOps {
    pub inserts: u64,
    pub updates: u64,
    pub finds: u64,
    /// Nodes pushed while descending towards the next node to probe.
    pub descents: u64,
}

/// Per-colour-class packing summary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub color: usize,
    pub size: usize,
    pub weight: Energy,
    pub drones: usize,
}

/// Instrumentation attached to every solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub algorithm: Algorithm,
    pub drones_used: usize,
    pub check_calls: u64,
    pub tree_ops: TreeOps,
    pub elapsed_ns: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub classes: Vec<ClassReport>,
}

impl RunReport {
    pub fn new(algorithm: Algorithm) -> Self {
        RunReport {
            algorithm,
            drones_used: 0,
            check_calls: 0,
            tree_ops: TreeOps::default(),
            elapsed_ns: 0,
            classes: Vec::new(),
        }
    }

    pub fn elapsed(&self) -> Duration {
        Duration::from_nanos(self.elapsed_ns)
    }

    pub(crate) fn set_elapsed(&mut self, d: Duration) {
        self.elapsed_ns = u64::try_from(d.as_nanos()).unwrap_or(u64::MAX);
    }
}

/// A partition of the deliveries into per-drone assignments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub assignments: Vec<Assignment>,
    pub report: RunReport,
}

impl Solution {
    #[inline]
    pub fn drones_used(&self) -> usize {
        self.assignments.len()
    }

    #[inline]
    pub fn algorithm(&self) -> Algorithm {
        self.report.algorithm
    }
}
