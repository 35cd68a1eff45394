//! Exact algebra for real Jacobian pairs in the plane.

pub mod polyarith;
pub mod newton;
pub mod edgecheck;
pub mod certify;
pub mod pipeline;
pub mod enumerate;
