//! Counterexample sequences `x_n = N_lo / P_n` on a radius interval,
//! evaluated lazily and certified claim by claim.

mod cauchy;
mod centers;
mod certificate;
mod factors;
mod limit;
mod schedule;
mod search;

pub use cauchy::{cauchy_invert, CauchyInverse, ModulusRow};
pub use centers::{choose_centers, CenterSet};
pub use certificate::{
    build_certificate, check_certificate, verify_certificate, Cert, CheckReport, Claim, ForgeCertificate, Record, Relation, Zone,
};
pub use factors::{ExpandedForge, FactorData, ForgeFactors, Quantity, Tag};
pub use limit::{limit_table, LimitRow, LimitTable};
pub use schedule::{make_schedule, make_small_schedule, validate_schedule, ForgeSchedule, Mode, Step};
pub use search::{interval_search, ForcedDescentModel, IntervalModel, Probe, SearchOutcome, SearchStep, SearchTrace, SpectralOracle};
