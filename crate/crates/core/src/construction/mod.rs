//! The nested-interval construction on `Θ = {θ} × [0, 1]`.

mod build;
mod measure;
mod params;

pub use build::{
    build_level, candidates_at, extract_point, family_removals, init_level0, per_line_bound, render_decimal,
    run_construction, Construction, FamilyCheck, Frontier, Interval, LevelReport, LineHit, PairReport,
    PointCertificate, RunOptions,
};
pub use measure::{
    assign_measure, check_mass_bound, refine_collections, ubiquity_adversary_test, AdversaryReport, MassReport,
    MeasureTree, RefinementState,
};
pub use params::{
    default_epsilon, derive_params, dyadic_floor_power, rat_to_exp, trim_viable, PairParams, Params, ParamsBuilder,
    ScheduleKind, TrimPolicy, Viability,
};
