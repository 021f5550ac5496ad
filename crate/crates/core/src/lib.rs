//! Set-theoretic model of machine intelligence and of the tests that try to
//! measure it.
//!
//! * [`epistemic`]: intelligent behavior (IB), machine characteristics (MC),
//!   observers and the world model.
//! * [`test_model`]: label spaces, intelligence tests and the induced oracle.
//! * [`metrics`]: efficiency, accuracy, quality and error counts; tournaments.
//! * [`learning`]: acquirement, filtering and specialization, in discrete and
//!   circle-geometry form.
//! * [`scenario`]: JSON-configured runs used by the `mintel` CLI.

pub mod epistemic;
pub mod learning;
pub mod metrics;
pub mod numfmt;
pub mod scenario;
pub mod test_model;

pub use epistemic::{
    check_world_function, map_to_platonic, observe, CharacteristicId, EpistemicError, IdSet,
    ObservedView, Observer, PlatonicSets, PropertyReport, Universe, UniverseDocument, WorldModel,
};
pub use learning::{
    acquire, compare_machines, filter_step, lens_area, run_trajectory, specialize, venn_step,
    Focus, LearningError, LearningMethod, RelevanceRanking, Trajectory, VennConfiguration,
};
pub use metrics::{
    accuracy, efficiency, error_count, error_sum, evaluate_test, quality, tournament,
    EfficiencyInputs, ErrorSum, MetricsError, QualityReport, RankedTest,
};
pub use scenario::{generate_universe, run_scenario, Command, ScenarioConfig, ScenarioError};
pub use test_model::{
    classify_all, label_distance, oracle_for, IntelligenceTest, Label, LabelAssignment, LabelSpace,
};
