//! Special functions evaluated with log-space numerics where magnitudes can overflow.

mod bessel;
mod coupling;
mod factorial;
mod harmonics;
mod quadrature;
mod wigner;

use thiserror::Error;

pub use bessel::{
    log_mod_sph_bessel_i_array, log_sph_bessel_j_array, mod_sph_bessel_i, sph_bessel_j,
    sph_bessel_j_array, LogSigned,
};
pub use coupling::{clebsch_gordan, clebsch_gordan_m0};
pub use factorial::{log_factorial, LogFactorialTable, DEFAULT_LOG_FACTORIAL_CAPACITY};
pub use harmonics::{ylm, AngularPoint, LegendreTable};
pub use quadrature::{clenshaw_curtis, gauss_legendre, uniform_periodic};
pub use wigner::{wigner_d_lowest_row, wigner_small_d};

pub(crate) use factorial::{ln_double_factorial_odd, lnf};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecfunError {
    #[error("log-factorial table capacity exceeded: requested {requested}, capacity {capacity}")]
    Capacity { requested: usize, capacity: usize },
    #[error("domain error: {0}")]
    Domain(String),
}
