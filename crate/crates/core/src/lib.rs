pub mod bounds;
pub mod clifford;
pub mod conformal;
pub mod connections;
pub mod energy_momentum;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod operators;
pub mod scenario;
pub mod special;
pub mod verify;
