//! Dimension theory of cookie-cutter repellers and cocycles: Lyapunov
//! exponents, the Bowen equation `P(T, -sF) = 0`, dimensions of ergodic
//! measures, and box-counting cross-checks.

mod bowen;
mod boxdim;
mod cutter;
mod lyapunov;
mod report;

pub use bowen::{bowen_root, BowenParams, BowenRoot};
pub use boxdim::{box_dimension_estimate, ledrappier_dimension_estimate, BoxEstimate};
pub use cutter::{Branch, CookieCutter};
pub use lyapunov::{dimension_of_measure, lyapunov_pair, LyapunovReport, LyapunovSource};
pub use report::{hausdorff_dimension_cookie_cutter, DimensionEntry, DimensionParams, DimensionReport, Which};
