//! Exact and Monte Carlo oracles for the walk-based edge classification.

mod checks;
mod classify;
mod cyc;
mod reach;
mod sample;

pub use checks::{
    check_dominant_forest, check_dominant_path_through_edge, check_no_bidirectional_dominance,
    count_recessive_vs_bound, CheckOutcome, ForestViolation, RecessiveReport,
};
pub use classify::{
    classify_edges, required_samples, ClassifyConfig, DirectedEdgeClass, EdgeClassification,
    Judgement, UndirectedEdgeClass, VertexClass,
};
pub use cyc::{creates_cycle, estimate_cyc, Heaviness, WalkStats};
pub use reach::{reach_profile, reach_profile_exact, Estimation, ReachMethod, ReachProfile};

/// Standard errors used for every confidence-qualified label.
pub const DEFAULT_Z: f64 = 5.0;

/// Wilson score interval for `successes / trials` at `z` standard errors.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}
