//! Search for symmetric rank decompositions of matrix multiplication tensors
//! over GF(2) by compiling each candidate to CNF and handing it to a SAT solver.

pub mod canonical;
pub mod cli;
pub mod driver;
pub mod encoder;
pub mod gf2;
pub mod oracle;
pub mod symmetry;
pub mod tensor;
