//! Exact minimum drone count by branch and bound, and LP-format export of the
//! 0/1 integer program.
//!
//! The search is exponential in the worst case and refuses instances above a
//! size cap.

use std::fmt::Write as _;
use std::time::Instant;

use thiserror::Error;

use crate::interval_graph::build_graph;
use crate::model::{Algorithm, Assignment, Delivery, DeliveryId, Energy, Instance, RunReport, Solution, Time};

/// Default instance size limit for [`solve_exact`].
pub const DEFAULT_CAP: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("instance has {n} deliveries, above the exact-search cap of {cap}")]
    OverCap { n: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct OpenDrone {
    remaining: Energy,
    last_rendezvous: Time,
}

struct Search {
    order: Vec<Delivery>,
    budget: Energy,
    /// `suffix_cost[p]` is the total cost of `order[p..]`.
    suffix_cost: Vec<Energy>,
    lower_bound: usize,
    drones: Vec<OpenDrone>,
    choice: Vec<usize>,
    best: usize,
    best_choice: Vec<usize>,
    nodes: u64,
}

impl Search {
    fn bound(&self, pos: usize) -> usize {
        let free: Energy = self.drones.iter().map(|d| d.remaining).sum();
        let overflow = self.suffix_cost[pos].saturating_sub(free);
        self.drones.len() + overflow.div_ceil(self.budget) as usize
    }

    fn dfs(&mut self, pos: usize) {
        self.nodes += 1;
        if self.best == self.lower_bound {
            return;
        }
        if pos == self.order.len() {
            if self.drones.len() < self.best {
                self.best = self.drones.len();
                self.best_choice.clone_from(&self.choice);
            }
            return;
        }
        if self.bound(pos) >= self.best {
            return;
        }
        let d = self.order[pos];
        for i in 0..self.drones.len() {
            let o = self.drones[i];
            if o.remaining < d.cost || o.last_rendezvous >= d.launch {
                continue;
            }
            // drones in an identical state are interchangeable
            if self.drones[..i].contains(&o) {
                continue;
            }
            self.drones[i] = OpenDrone {
                remaining: o.remaining - d.cost,
                last_rendezvous: d.rendezvous,
            };
            self.choice.push(i);
            self.dfs(pos + 1);
            self.choice.pop();
            self.drones[i] = o;
        }
        if self.drones.len() + 1 < self.best {
            self.drones.push(OpenDrone {
                remaining: self.budget - d.cost,
                last_rendezvous: d.rendezvous,
            });
            self.choice.push(self.drones.len() - 1);
            self.dfs(pos + 1);
            self.choice.pop();
            self.drones.pop();
        }
    }
}

/// Minimum drone count with a witness. Deliveries are placed in launch order
/// into a compatible open drone or the next new drone.
pub fn solve_exact(inst: &Instance, cap: usize) -> Result<Solution, ExactError> {
    let n = inst.len();
    if n > cap {
        return Err(ExactError::OverCap { n, cap });
    }
    let start = Instant::now();
    let order: Vec<Delivery> = inst
        .launch_order()
        .into_iter()
        .map(|id| inst.deliveries()[id.index()])
        .collect();
    let mut suffix_cost = vec![0; n + 1];
    for p in (0..n).rev() {
        suffix_cost[p] = suffix_cost[p + 1] + order[p].cost;
    }
    let omega = build_graph(inst).clique_number();
    let volume = inst.total_cost().div_ceil(inst.budget()) as usize;

    let mut search = Search {
        order,
        budget: inst.budget(),
        suffix_cost,
        lower_bound: omega.max(volume),
        drones: Vec::new(),
        choice: Vec::with_capacity(n),
        // one drone per delivery always works
        best: n,
        best_choice: (0..n).collect(),
        nodes: 0,
    };
    search.dfs(0);

    let mut assignments: Vec<Assignment> = Vec::new();
    for (d, &drone) in search.order.iter().zip(&search.best_choice) {
        if drone == assignments.len() {
            assignments.push(Assignment {
                drone: drone + 1,
                delivery_ids: Vec::new(),
            });
        }
        assignments[drone].delivery_ids.push(d.id);
    }
    let mut report = RunReport::new(Algorithm::Exact);
    report.drones_used = assignments.len();
    report.check_calls = search.nodes;
    report.set_elapsed(start.elapsed());
    Ok(Solution {
        assignments,
        report,
    })
}

/// Row structure of the integer program over a pool of `n` drones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpModel {
    pub budget: Energy,
    pub costs: Vec<Energy>,
    /// Conflicting delivery pairs `(j, k)`, `j < k`.
    pub conflicts: Vec<(DeliveryId, DeliveryId)>,
}

impl IlpModel {
    pub fn new(inst: &Instance) -> Self {
        IlpModel {
            budget: inst.budget(),
            costs: inst.deliveries().iter().map(|d| d.cost).collect(),
            conflicts: build_graph(inst).edges().collect(),
        }
    }

    #[inline]
    pub fn drones(&self) -> usize {
        self.costs.len()
    }

    pub fn capacity_rows(&self) -> usize {
        self.drones()
    }

    pub fn assignment_rows(&self) -> usize {
        self.costs.len()
    }

    pub fn conflict_rows(&self) -> usize {
        self.drones() * self.conflicts.len()
    }

    /// CPLEX LP text: objective, capacity rows, assignment rows, conflict
    /// rows, then binary declarations.
    pub fn to_lp(&self) -> String {
        let n = self.costs.len();
        let mut out = String::new();
        out.push_str("\\ drone-delivery packing\n");
        out.push_str("Minimize\n obj:");
        for i in 1..=n {
            if i > 1 {
                out.push_str(" +");
            }
            let _ = write!(out, " y_{i}");
        }
        out.push('\n');
        if n == 0 {
            out.push_str("End\n");
            return out;
        }
        out.push_str("Subject To\n");
        for i in 1..=n {
            let _ = write!(out, " cap_{i}:");
            for (j, c) in self.costs.iter().enumerate() {
                let sep = if j == 0 { "" } else { " +" };
                let _ = write!(out, "{sep} {c} x_{i}_{}", j + 1);
            }
            let _ = writeln!(out, " - {} y_{i} <= 0", self.budget);
        }
        for j in 1..=n {
            let _ = write!(out, " assign_{j}:");
            for i in 1..=n {
                let sep = if i == 1 { "" } else { " +" };
                let _ = write!(out, "{sep} x_{i}_{j}");
            }
            out.push_str(" = 1\n");
        }
        for i in 1..=n {
            for &(j, k) in &self.conflicts {
                let _ = writeln!(out, " conflict_{i}_{j}_{k}: x_{i}_{j} + x_{i}_{k} <= 1");
            }
        }
        out.push_str("Binary\n");
        for i in 1..=n {
            let _ = writeln!(out, " y_{i}");
        }
        for i in 1..=n {
            for j in 1..=n {
                let _ = writeln!(out, " x_{i}_{j}");
            }
        }
        out.push_str("End\n");
        out
    }
}

pub fn export_ilp(inst: &Instance) -> String {
    IlpModel::new(inst).to_lp()
}
