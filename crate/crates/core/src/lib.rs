pub mod acceptance;
pub mod cfloat;
pub mod dynatomic;
pub mod equidist;
pub mod exactpoly;
pub mod itinerary;
pub mod numroots;
pub mod potential;
pub mod tolerances;

pub use cfloat::CFloat;
pub use exactpoly::{MPoly, PolyError, Var};
pub use numroots::{Cycle, NumError, RootEntry, RootSet};
