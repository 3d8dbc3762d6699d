//! Elementary type and Pythagorean recipes, the two algebras attached to
//! them, and the verification pipelines.

mod build;
mod recipe;
mod verify;

pub use build::{
    build_cohomology, build_cohomology_with_hint, build_group_side, build_group_side_with_hint,
    demushkin_cup_table, demushkin_display_form, demushkin_group_relation, demushkin_relator,
    validate_demushkin, BuiltAlgebra,
};
pub use recipe::{random_et_recipe, random_pfr_recipe, DemushkinCase, DemushkinParam, EtRecipe};
pub use verify::{
    check_regime, classify_twisted_critical, verify_theorem, CobarCheck, DualityCheck,
    FamilyReport, HilbertCheck, NonConfluence, PbwCheck, Theorem, VerificationReport, Verdict,
    VerifyOptions, SCHEMA_VERSION,
};
