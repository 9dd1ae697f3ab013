pub mod circuit;
pub mod dynamics;
pub mod error;
pub mod estimators;
pub mod experiment;
pub mod gate;
pub mod gf2;
pub mod lattice;
pub mod noise;
pub mod pauli;
pub mod prep;
pub mod rng;
pub mod tableau;

pub use circuit::{Circuit, Condition, Instruction};
pub use error::{Error, Result};
pub use gate::Gate;
pub use lattice::{Lattice, LatticeKind};
pub use noise::NoiseSpec;
pub use pauli::{Pauli, PauliOperator, Phase};
pub use tableau::StabilizerTableau;
