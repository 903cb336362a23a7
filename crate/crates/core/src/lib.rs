//! Solvers for the drone-delivery packing problem.
//!
//! A truck carries identical drones with battery budget `B`. Each delivery
//! occupies a drone over a closed time window and burns a fixed amount of
//! energy. A drone may fly any set of deliveries whose windows are pairwise
//! disjoint and whose total cost fits in `B`. The goal is to cover all
//! deliveries with as few drones as possible.
//!
//! The crate provides:
//!
//! * [`greedy`]: launch-order greedy over an AVL tree of open drones, at most
//!   `2 * OPT + Δ + 1` drones;
//! * [`coloring`]: optimal interval colouring followed by worst-fit packing
//!   of each colour class, fewer than `2 * OPT + ω` drones;
//! * [`exact`]: branch-and-bound optimum for small instances and an LP-format
//!   export of the integer program;
//! * [`reduction`]: the embedding of bin packing into this problem;
//! * [`harness`]: seeded generators and bound certification.

pub mod coloring;
pub mod exact;
pub mod greedy;
pub mod harness;
pub mod interval_graph;
pub mod io;
pub mod model;
pub mod reduction;
pub mod tree;
pub mod verify;

pub use coloring::{pack_class, solve_with_coloring};
pub use exact::{export_ilp, solve_exact, DEFAULT_CAP};
pub use greedy::{half_budget_census, solve_greedy};
pub use interval_graph::{build_graph, clique_number, color_intervals, Coloring, IntervalGraph};
pub use model::{
    intervals_conflict, is_feasible_set, validate_instance, Algorithm, Assignment, Delivery,
    DeliveryId, Energy, Instance, InstanceError, RunReport, Solution, Time,
};
pub use reduction::{bp_to_ddp, solve_bp_exact, BinPackingInstance};
pub use verify::{verify_solution, Verification, Violation};
