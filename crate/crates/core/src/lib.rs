//! Transit of polarized light through a birefringent crystal followed by a
//! linear polarization filter.
//!
//! Units are dimensionless with `c = 1`; lengths are measured in the same unit
//! as the crystal width (which defaults to 1), so times come out in units of
//! `d/c`.
//!
//! - [`planewave`]: filtered monochromatic amplitude, its zeros and phase winding.
//! - [`timeshift`]: stationary-phase time shift of the filtered peak.
//! - [`pulse`]: closed-form Gaussian packet and the outgoing envelope extrema.
//! - [`oracle`]: brute-force frequency quadrature used to check the closed forms.
//! - [`sweeps`]: CSV tables behind the amplitude, time-shift and profile plots.
//! - [`cli`]: command-line front end.

pub mod cli;
pub mod error;
pub mod oracle;
pub mod planewave;
pub mod pulse;
pub mod quadrature;
pub mod sweeps;
pub mod timeshift;

pub use error::{Error, Result};
pub use planewave::{CrystalMedium, FilterSetting, PhasePoint, Window};
pub use pulse::{FieldSample, GaussianPulse, PeakSet, Region};
pub use timeshift::{SmallSignalCoords, TimeShiftResult};
