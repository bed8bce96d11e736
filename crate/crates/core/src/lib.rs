pub mod boundary;
pub mod census;
pub mod error;
pub mod group;
pub mod hyperbolic;
pub mod lemmas;
pub mod persist;
pub mod quadrature;
pub mod stats;
