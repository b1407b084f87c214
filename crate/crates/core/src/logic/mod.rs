//! Many-valued modal logic over marked frames: syntax, evaluation and behavioral equivalence.

mod bisim;
mod eval;
mod formula;
mod frame;
mod hml;
pub mod parse;

pub use bisim::{
    behavioral_quotient, bisim_certificate, bisimilarity, bisimilarity_on, formula_theory_crosscheck,
    partition_difference, render_partition, theory_partition, theory_partition_on, BisimCertificate, Partition,
    Quotient, FORMULA_VECTOR_LIMIT,
};
pub use eval::{evaluate, modal_step, modalities_for, Modality};
pub use formula::Formula;
pub use frame::{
    coalgebra_to_frame, coalgebra_to_nbhd_frame, frame_to_coalgebra, is_coalgebra_morphism, is_model_morphism,
    nbhd_frame_to_coalgebra, Frame, KripkeFrame, Model, NeighborhoodFrame, NEIGHBORHOOD_POINT_LIMIT,
};
pub use hml::{hennessy_milner_check, hml_harness, random_kripke_model, small_kripke_models, HmlReport, HmlVerdict};
pub use parse::{parse_formula, parse_formulas, print_formula, ParseError};
