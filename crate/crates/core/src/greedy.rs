//! Launch-order greedy packing over the drone tree.
//!
//! Deliveries are taken by `(launch, rendezvous, id)`. Each goes to the open
//! drone with the most remaining capacity among those that can take it, or
//! opens a new drone. Uses at most `2 * OPT + Δ + 1` drones.

use std::time::Instant;

use crate::interval_graph::{build_graph, IntervalGraph};
use crate::model::{Algorithm, Assignment, Delivery, Instance, RunReport, Solution};
use crate::tree::{DroneNode, DroneTree, ProbeBudget};

/// Hooks into a greedy run. All methods default to no-ops.
pub trait GreedyObserver {
    /// Called before searching the tree for `delivery`.
    fn before_find(&mut self, _tree: &DroneTree, _delivery: &Delivery, _budget: ProbeBudget) {}

    /// Called with the search result, before the tree is mutated.
    fn after_find(&mut self, _tree: &DroneTree, _delivery: &Delivery, _found: Option<&DroneNode<u64>>) {}

    /// Called after every insert or update.
    fn after_mutation(&mut self, _tree: &DroneTree) {}
}

impl GreedyObserver for () {}

/// Result of a greedy run, including the final tree.
#[derive(Debug, Clone)]
pub struct GreedyRun {
    pub solution: Solution,
    pub tree: DroneTree,
}

pub fn solve_greedy(inst: &Instance) -> Solution {
    let g = build_graph(inst);
    run_greedy(inst, &g, &mut ()).solution
}

pub fn solve_greedy_with_graph(inst: &Instance, g: &IntervalGraph) -> Solution {
    run_greedy(inst, g, &mut ()).solution
}

/// Runs the greedy with conflict counts taken from `g`.
pub fn run_greedy<O: GreedyObserver>(inst: &Instance, g: &IntervalGraph, observer: &mut O) -> GreedyRun {
    let start = Instant::now();
    let budget = inst.budget();
    let mut report = RunReport::new(Algorithm::Greedy);
    let mut tree = DroneTree::new();
    let mut assignments: Vec<Assignment> = Vec::new();

    for id in inst.launch_order() {
        let d = inst.deliveries()[id.index()];
        let mut probe = ProbeBudget::new(g.degree(id));
        observer.before_find(&tree, &d, probe);
        let found = tree.find_feasible(&d, &mut probe, &mut report.check_calls);
        observer.after_find(&tree, &d, found.as_ref());
        match found {
            Some(node) => {
                assignments[node.index - 1].delivery_ids.push(id);
                tree.update(node.index, node.key - d.cost, node.data.max(d.rendezvous))
                    .expect("found node is in the tree");
            }
            None => {
                let drone = assignments.len() + 1;
                assignments.push(Assignment {
                    drone,
                    delivery_ids: vec![id],
                });
                tree.insert(drone, budget - d.cost, d.rendezvous)
                    .expect("fresh drone index");
            }
        }
        observer.after_mutation(&tree);
    }

    report.drones_used = assignments.len();
    report.tree_ops = tree.ops();
    report.set_elapsed(start.elapsed());
    GreedyRun {
        solution: Solution {
            assignments,
            report,
        },
        tree,
    }
}

/// Number of drones whose used energy is at least half the budget.
pub fn half_budget_census(sol: &Solution, inst: &Instance) -> usize {
    sol.assignments
        .iter()
        .filter(|a| 2 * a.cost(inst) >= inst.budget())
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_solution;

    fn groups(sol: &Solution) -> Vec<Vec<usize>> {
        sol.assignments
            .iter()
            .map(|a| a.delivery_ids.iter().map(|id| id.0).collect())
            .collect()
    }

    #[test]
    fn fixture_a_uses_four_singletons() {
        let inst = Instance::new(10, [(0, 2, 6), (1, 3, 6), (4, 5, 5), (4, 6, 5)]).unwrap();
        let sol = solve_greedy(&inst);
        assert_eq!(groups(&sol), vec![vec![1], vec![2], vec![3], vec![4]]);
        assert_eq!(sol.report.drones_used, 4);
        assert!(verify_solution(&inst, &sol).passed());
        assert_eq!(half_budget_census(&sol, &inst), 4);
    }

    #[test]
    fn fixture_b_packs_into_two() {
        let inst = Instance::new(10, [(0, 1, 3), (0, 1, 3), (2, 3, 3)]).unwrap();
        let sol = solve_greedy(&inst);
        // both drones have key 7 when delivery 3 arrives; the higher index is probed first
        assert_eq!(groups(&sol), vec![vec![1], vec![2, 3]]);
    }

    #[test]
    fn empty_instance() {
        let inst = Instance::new(3, []).unwrap();
        let sol = solve_greedy(&inst);
        assert_eq!(sol.drones_used(), 0);
        assert_eq!(half_budget_census(&sol, &inst), 0);
    }

    #[test]
    fn disjoint_unit_costs_share_one_drone() {
        let inst = Instance::new(20, (0..20).map(|j| (2 * j, 2 * j + 1, 1))).unwrap();
        let sol = solve_greedy(&inst);
        assert_eq!(sol.drones_used(), 1);
        assert_eq!(sol.assignments[0].delivery_ids.len(), 20);
    }

    #[test]
    fn census_single_light_delivery() {
        let inst = Instance::new(100, [(0, 1, 1)]).unwrap();
        let sol = solve_greedy(&inst);
        assert_eq!(half_budget_census(&sol, &inst), 0);
    }

    #[test]
    fn observer_sees_every_step() {
        #[derive(Default)]
        struct Count(usize, usize, usize);
        impl GreedyObserver for Count {
            fn before_find(&mut self, _: &DroneTree, _: &Delivery, _: ProbeBudget) {
                self.0 += 1;
            }
            fn after_find(&mut self, _: &DroneTree, _: &Delivery, _: Option<&DroneNode<u64>>) {
                self.1 += 1;
            }
            fn after_mutation(&mut self, t: &DroneTree) {
                t.audit().unwrap();
                self.2 += 1;
            }
        }
        let inst = Instance::new(10, [(0, 1, 3), (0, 1, 3), (2, 3, 3)]).unwrap();
        let g = build_graph(&inst);
        let mut c = Count::default();
        let run = run_greedy(&inst, &g, &mut c);
        assert_eq!((c.0, c.1, c.2), (3, 3, 3));
        assert_eq!(run.tree.len(), 2);
        assert_eq!(run.tree.get(2).unwrap().key, 4);
        assert_eq!(run.tree.get(2).unwrap().data, 3);
        assert_eq!(run.solution.report.tree_ops.inserts, 2);
        assert_eq!(run.solution.report.tree_ops.updates, 1);
        assert_eq!(run.solution.report.tree_ops.finds, 3);
    }
}
