//! Exact maximum independent sets, optimum enumeration, persistent-core
//! certification and heuristic comparators.

mod bitset;
mod exact;
mod heuristic;

pub use exact::{
    analyze_rigidity, certify_core, enumerate_optima, rho, solve_exact, MisResult, MisStats,
    OptimaCount, OptimaEnumeration, RigidityReport, VertexCheck, DEFAULT_OPTIMA_CAP,
};
pub use heuristic::{
    approximation_ratio, greedy_mis, greedy_with, make_maximal, ratio_with_alpha, sa_mis,
    GreedyRule, SaSchedule,
};

