//! Single-valued polylogarithms, the truncated logarithm sheaf on the
//! torus `G_m^g`, exact de Rham cohomology with logarithm-sheaf
//! coefficients, and numerical verification of the explicit polylogarithm
//! cocycle and its specialization at roots of unity.

pub mod cocycle;
pub mod derham;
pub mod exact;
pub mod logsheaf;
pub mod specfun;
pub mod specialization;
