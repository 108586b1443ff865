//! L∞-models of mapping spaces: the convolution algebra on `Hom(C, L)`, its
//! transfer to `Hom(H, L)`, component models and the reduced cochain model.

mod bs;
mod hom;

pub use bs::{positive_part, reduced_bs_cochain, reduced_bs_direct};
pub use hom::{
    component_model, convolution_linf, hom_retract, mapping_space_model, pointed_convolution, HomSpace, MappingModel,
};
