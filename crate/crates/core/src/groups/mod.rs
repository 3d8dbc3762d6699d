//! Pro-p presentations by words, Magnus expansion, initial forms, pairings,
//! strong freeness, and finite-group oracles for dimension subgroups.

mod finite;
mod magnus;
mod oracles;
mod presentation;
mod word;

pub use finite::FiniteGroupTable;
pub use magnus::{initial_form, magnus_expand, InitialForm};
pub use oracles::{jennings_oracle, lazard_oracle, zassenhaus_recursion, JenningsResult};
pub use presentation::{
    expected_strongly_free_prefix, graded_algebra_candidate, is_quadratic_presentation,
    pairing_value, relator_mod_s3, strongly_free_check, strongly_free_report, GradedCandidate,
    GroupPresentation, PresentationFile, S3Decomposition, StronglyFreeReport,
};
pub use word::GroupWord;
