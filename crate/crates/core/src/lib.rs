//! Universal finite-type invariant of framed oriented tangles in the solid
//! torus, with cyclotomic associators, weight systems and the quantum sl2 check.

pub mod config;
pub mod error;
pub mod ring;
pub mod skeleton;
pub mod tangle;
pub mod quantum;
pub mod diagram;
pub mod linalg;
pub mod free;
pub mod horizontal;
pub mod associator;
pub mod quotient;
pub mod invariant;
pub mod weights;
pub mod checks;
pub mod universal;
