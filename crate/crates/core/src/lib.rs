//! Special-relativistic kinematics with numerically checkable identities.

pub mod error;
pub mod figures;
pub mod frame;
pub mod geometry;
pub mod hyperbolic;
pub mod lattice;
pub mod lie;
pub mod lorentz;
pub mod rigid;
pub mod rp;
pub mod velocity;
pub mod worldline;

pub use error::{Error, Result};
