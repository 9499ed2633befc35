//! Thurston stretch rays on Teichmüller spaces of punctured surfaces.
//!
//! Surfaces are ideal triangulations, hyperbolic structures are shear
//! coordinates, and closed curves are corner words. Along a stretch ray every
//! shear is multiplied by `e^t`; the crate computes curve lengths along the
//! ray, the good stairstep representatives that bound them, and classifies
//! how each length behaves.

pub mod cli_io;
pub mod geometry;
pub mod harness;
pub mod horogeodesic;
pub mod laminations;
pub mod numeric;
pub mod topology;
