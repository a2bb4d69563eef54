//! Fractional circulation, flux and volume integrals, and the Green, Stokes
//! and Gauss theorem checks built on them.

mod integrals;
mod region;
mod theorems;

pub use integrals::{circulation_alpha, flux_alpha, volume_alpha, Face, Segment, Side};
pub use region::{elementary_region_integral, indicator_embedding, ElementaryRegion2D};
pub use theorems::{
    gauss_residual, gauss_residual_classical, green_residual, green_residual_classical, stokes_residual,
    stokes_residual_classical, RectRegion2D, Surface, TheoremReport, VectorField2D,
};
