//! Executable checks of the one-step semantics: the comparison maps between lifted and
//! dual-side functors, their injectivity, and the small lemmas they rest on.

mod delta;
mod presentation;
mod tau;
mod suite;
mod transpose;

pub use delta::{
    box_rule, component_is_homomorphism, delta_classical, delta_generator_check, delta_prime, delta_top,
    naturality_check, one_step_injectivity_check, skeleton_agreement_check, InjectivityVerdict, OneStepComponent,
    EXHAUSTIVE_DOMAIN_LIMIT,
};
pub use presentation::{
    presentation_bijection_check, PresentationMode, PresentationReport, PresentedFunctionSpace,
    PRESENTATION_ELEMENT_LIMIT, PRESENTATION_POINT_LIMIT, PRESENTATION_TARGET_LIMIT,
};
pub use tau::{lemma_tau_check, TauLemmaReport};
pub use transpose::{transpose_expressivity_check, TransposeVerdict};
pub use suite::{corpus_objects, verify_all, CorpusConfig, Theorem, Verdict};
