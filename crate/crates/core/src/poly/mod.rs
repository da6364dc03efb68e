//! Exact polynomial arithmetic over ℚ used by the embedding certifier.

pub mod bpoly;
pub mod sturm;
pub mod upoly;

pub use bpoly::BPoly;
pub use sturm::{isolate_real_roots, isolate_real_roots_in, RealRoot, RootIsolation, SturmChain};
pub use upoly::UPoly;
