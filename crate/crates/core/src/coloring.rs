//! Colour-class packing.
//!
//! The interval graph is coloured with `ω` colours. Every colour class is
//! pairwise compatible, so packing it is plain bin packing: each delivery goes
//! to the class drone with the most remaining capacity (worst fit), or opens a
//! new one. Uses fewer than `2 * OPT + ω` drones.

use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::interval_graph::{build_graph, color_intervals, IntervalGraph};
use crate::model::{
    intervals_conflict, Algorithm, Assignment, ClassReport, DeliveryId, Energy, Instance,
    RunReport, Solution,
};
use crate::tree::ClassTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PackError {
    #[error("deliveries {0} and {1} conflict and cannot share a colour class")]
    Incompatible(DeliveryId, DeliveryId),
    #[error("unknown delivery {0}")]
    Unknown(DeliveryId),
}

/// Packing of one colour class. Drone indices are local, `1..=drones()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPacking {
    pub assignments: Vec<Assignment>,
    pub weight: Energy,
    pub finds: u64,
    pub inserts: u64,
    pub updates: u64,
}

impl ClassPacking {
    #[inline]
    pub fn drones(&self) -> usize {
        self.assignments.len()
    }
}

/// Worst-fit packs a pairwise compatible set, taking deliveries by
/// `(launch, id)`.
pub fn pack_class(class: &[DeliveryId], inst: &Instance) -> Result<ClassPacking, PackError> {
    let mut members = class
        .iter()
        .map(|&id| inst.delivery(id).copied().ok_or(PackError::Unknown(id)))
        .collect::<Result<Vec<_>, _>>()?;
    members.sort_by_key(|d| (d.launch, d.id));
    for w in members.windows(2) {
        // sorted by launch, so any conflict shows up between neighbours
        if intervals_conflict(&w[0], &w[1]) {
            return Err(PackError::Incompatible(w[0].id, w[1].id));
        }
    }

    let budget = inst.budget();
    let mut tree = ClassTree::new();
    let mut assignments: Vec<Assignment> = Vec::new();
    for d in &members {
        match tree.find_max_key(d.cost) {
            Some(node) => {
                assignments[node.index - 1].delivery_ids.push(d.id);
                tree.update(node.index, node.key - d.cost, ())
                    .expect("max node is in the tree");
            }
            None => {
                let drone = assignments.len() + 1;
                assignments.push(Assignment {
                    drone,
                    delivery_ids: vec![d.id],
                });
                tree.insert(drone, budget - d.cost, ())
                    .expect("fresh drone index");
            }
        }
    }
    let ops = tree.ops();
    Ok(ClassPacking {
        assignments,
        weight: members.iter().map(|d| d.cost).sum(),
        finds: ops.finds,
        inserts: ops.inserts,
        updates: ops.updates,
    })
}

pub fn solve_with_coloring(inst: &Instance) -> Solution {
    let g = build_graph(inst);
    solve_with_coloring_graph(inst, &g)
}

/// Colours `g`, packs every class independently and renumbers drones in
/// colour order.
pub fn solve_with_coloring_graph(inst: &Instance, g: &IntervalGraph) -> Solution {
    let start = Instant::now();
    let coloring = color_intervals(inst, g);
    debug_assert_eq!(coloring.color_count(), g.clique_number());
    let packings: Vec<ClassPacking> = coloring
        .classes()
        .par_iter()
        .map(|class| pack_class(class, inst).expect("colour classes are compatible"))
        .collect();

    let mut report = RunReport::new(Algorithm::Coloring);
    let mut assignments = Vec::new();
    for (k, p) in packings.into_iter().enumerate() {
        report.tree_ops.finds += p.finds;
        report.tree_ops.inserts += p.inserts;
        report.tree_ops.updates += p.updates;
        report.classes.push(ClassReport {
            color: k + 1,
            size: p.assignments.iter().map(|a| a.delivery_ids.len()).sum(),
            weight: p.weight,
            drones: p.drones(),
        });
        for mut a in p.assignments {
            a.drone = assignments.len() + 1;
            assignments.push(a);
        }
    }
    report.drones_used = assignments.len();
    report.set_elapsed(start.elapsed());
    Solution {
        assignments,
        report,
    }
}
