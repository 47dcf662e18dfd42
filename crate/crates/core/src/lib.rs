//! Fuzzy-adaptive super-twisting sliding-mode control for a DC-DC buck
//! converter.
//!
//! * [`fuzzy`]: two-input Mamdani inference on uniform triangular partitions.
//! * [`adaptation`]: normalized error acceleration and the `k_c` slope factor.
//! * [`supertwisting`]: sliding surface and the discrete super-twisting law.
//! * [`baseline`]: first-order sliding-mode fuzzy and sign-switching controllers.
//! * [`buck`]: averaged converter model, RK4 step, disturbance schedule.
//! * [`harness`]: scenario catalog, closed-loop runs, metrics and CSV traces.

pub mod adaptation;
pub mod baseline;
pub mod buck;
pub mod error;
pub mod fuzzy;
pub mod harness;
pub mod supertwisting;

pub use error::{Error, Result};
