//! Record-to-vector encoding and functionality-preserving masks.

mod encoding;
mod mask;

pub use encoding::{
    fit_encoding, fit_encoding_iter, stack, EncodedVector, EncodingModel, UNKNOWN_CATEGORY,
};
pub use mask::{build_mask, replaced_groups, FunctionalMask};
