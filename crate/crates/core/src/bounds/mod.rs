//! Numerical counterparts of the soundness analysis: constants, lemma
//! checkers, collision statistics and scaling experiments.

pub mod collision;
pub mod constants;
pub mod experiments;
pub mod lemmas;

pub use collision::{collision_stats, gap_precondition, CollisionConfig, CollisionStats, GapPrecondition};
pub use constants::{bt09_constants, Bt09Constants};
pub use experiments::{
    birthday_scaling, completeness_curve_cd10, doubling_experiment, fit_line, fit_loglog, n_squared_scaling,
    BirthdayConfig, BirthdayReport, Check, CompletenessReport, DoublingReport, Fit, NSquaredReport, ZRule,
};
pub use lemmas::{
    check_bt09_lemma_chain, check_gen_uniformity, check_swap_contraction, check_vertex_and_fourier, Basis,
    LemmaChainReport, Verdict,
};
