//! Operator quantum error correction: Pauli algebra, subsystem codes,
//! distance and correctability, gauge-symmetry search, and a dense oracle.

pub mod catalog;
pub mod code;
pub mod codefile;
pub mod decoder;
pub mod distance;
pub mod gf2;
pub mod montecarlo;
pub mod oracle;
pub mod parallel;
pub mod pauli;
pub mod search;
pub mod tableau;

pub use code::{CodeError, CodeParams, PauliPair, SubsystemCode};
pub use distance::{Classifier, DistanceMethod, OperatorClass};
pub use pauli::{PauliError, PauliOp};
