//! Point sets, the counting function `nu_k`, resultant modulus sets, and the
//! exact checks of the counting argument.

mod claims;
mod nu;
mod pointset;

pub use claims::{
    claim1_check, claim2_check, claim3_check, theorem31_chain, theorem31_with, ClaimData,
    ClaimReport, Quantity, SubCheck, Theorem31Report,
};
pub use nu::{
    delta_set, nu_auto, nu_brute, nu_brute_with_cap, nu_fourier, nu_fourier_float,
    nu_fourier_with, NuProfile, BRUTE_CAP, DIRECT_LOOP_CAP,
};
pub use pointset::{isotropic_line, random_set, subfield_sets, PointSet};
pub(crate) use nu::common_space;

#[cfg(test)]
mod tests;
