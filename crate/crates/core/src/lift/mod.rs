//! Finite set functors and their canonical liftings to marked sets.
//!
//! The Vietoris functor agrees with the powerset on finite discrete spaces, so it has no
//! separate implementation.

mod functor;
mod lifting;

pub use functor::{
    apply_functor, apply_on_map, image_under_inclusion, in_inclusion_image, is_filter, map_element,
    render_element, SetFunctor, SizeCaps,
};
pub use lifting::{
    classical_l, lift_morphism, lift_object, lift_via_coend, lifted_l, CoendAgreement, LiftedObject,
};
