//! Concrete Banach-ring models: the Q-series field, the annulus field at an
//! irrational log-radius, and the weighted multivariate field.

pub mod annulus;
pub mod multivar;
pub mod qseries;

pub use annulus::{annulus_invert, AnnulusElement, AnnulusInverse};
pub use multivar::{multivar_norm_data, multivar_norm_upper, project, project_series, LaurentPoly, MultiVarElement, NormData};
pub use qseries::{qseries_norm, qseries_spectral_ball, qseries_unbounded_witness, QSeriesElement, WitnessRow};
