pub mod bits;
pub mod cli;
pub mod code;
pub mod decoder;
pub mod dem;
pub mod experiment;
pub mod homology;
pub mod lattice;
pub mod montecarlo;
pub mod pauli;

#[cfg(test)]
mod testutil;
