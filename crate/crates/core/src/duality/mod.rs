//! Marked finite sets and the finite duality with the variety generated by `D`.
//!
//! On finite objects the topology of a Stone space is discrete, so a marked finite set
//! represents both sides of the topological and the set-based picture.

mod adjunction;
mod boolean;
mod homs;
mod lemma;
mod object;
mod variety;

pub use adjunction::{
    c_s, coend_reconstruct, epsilon_prime_check, eta_prime_check, u_points, v_s, CoendWitness, IsoWitness,
};
pub use boolean::{
    boolean_power, boolean_skeleton, is_boolean, k_s, partition_form_elements, partition_form_op, BooleanSkeleton,
    PowersetAlgebra,
};
pub use homs::{homomorphisms, Generators, HOM_DOMAIN_LIMIT};
pub use lemma::{lemma_isos_check, LemmaIsosReport};
pub use object::{SetDMorphism, SetDObject};
pub use variety::{p_prime, s_prime, Dual, VarietyAlgebra};
