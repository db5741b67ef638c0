//! The gl(2n)-module induced from the maximal parabolic with Levi part
//! gl_n + gl_n, realized on polynomials in the lowering variables `y_ij`.

mod gram;
mod jantzen;
mod module;

pub use gram::{Block, GramReport, GramTower, LevelGram};
pub use jantzen::{
    dims_from_valuations, irr_quotient_dims, jantzen, levi_kernel_dim, slice_dims, JantzenLevel,
    LayerCheck, SliceCache,
};
pub use module::{bracket, mono_name, GlContext, GlElem, ModElem, Part, YMono, E};
