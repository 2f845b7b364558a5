//! Catalog enumeration, intersection numbers, and the duality pairing.

pub mod duality;
pub mod enumerate;
pub mod tau;

pub use duality::{cardinality_and_average, duality_pairing, CardinalityReport, PairingError, PairingReport, PairingTerm};
pub use enumerate::{enumerate_all, enumerate_triangulations, Catalog, CatalogEntry, EnumError, EnumOptions};
pub use tau::{generating_f, intersection_number, TauError, TauOptions};
