//! Exact measures on the isoperimetric constraint polytopes of a trivalent
//! ribbon graph: the incidence system, the total 2-form `Ω`, its Pfaffian
//! expansion against the perimeter differentials, and Leray volumes.
//!
//! Lengths are in units `u = (√3/3)a = 1`.

pub mod forms;
pub mod incidence;
pub mod kontsevich;
pub mod leray;
pub mod pfaffian;

pub use forms::{pullback_polygon_form, pullback_to_triangulation, total_form, SkewForm};
pub use incidence::{incidence_matrix, ConstraintSystem};
pub use kontsevich::{kontsevich_check, kontsevich_coefficient, KontsevichReport};
pub use leray::{leray_volume, leray_volume_with, LerayError, LerayOptions, LerayVolume};
pub use pfaffian::{pfaffian, PfaffianError};
