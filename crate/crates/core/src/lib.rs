//! Urban FPS level generator: an interactive real-coded GA over 20×20 city
//! grids, with a learned design-intent agent that takes over some of the
//! designer's selection rounds and ray-casting playability evaluation.

pub mod error;
pub mod eval;
pub mod evo;
pub mod intent;
pub mod map;
pub mod rng;
pub mod session;
pub mod sim;
pub mod store;

pub use error::{Error, Result};
