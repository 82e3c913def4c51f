//! Squeezing of light and of atomic spin ensembles on exact state vectors.
//!
//! The crate is organised bottom-up:
//!
//! * [`qalgebra`]: dense complex linear algebra over declared bases.
//! * [`qstates`]: mode/spin operators and coherent, cat and Dicke states.
//! * [`squeezing`]: principal quadrature squeezing, Kitagawa-Ueda and
//!   Wineland spin squeezing, frame normalisation.
//! * [`analytic`]: closed forms for cat states, factorial moments, scans and
//!   the large-spin contraction limit.
//! * [`dicke`]: resonant Tavis-Cummings evolution in total-excitation blocks
//!   and the two-mode beam-splitter reference.
//! * [`phasespace`]: Q and Husimi functions on rectangular grids.

pub mod analytic;
pub mod dicke;
pub mod error;
pub mod phasespace;
pub mod qalgebra;
pub mod qstates;
pub mod squeezing;

mod numeric;

pub use analytic::{FactorialMoments, LimitSequencePoint, ScanPoint};
pub use dicke::{DickeConfig, DickeRow, DickeRun, SwapRow, TransferMetrics};
pub use error::{Error, Result};
pub use phasespace::{GridSpec, PhaseGrid, Plane};
pub use qalgebra::{Basis, EigenSystem, Keep, OperatorMatrix, Spin, StateVector, C64};
pub use qstates::{CatParity, SpinCoherentParam};
pub use squeezing::SqueezingReport;
