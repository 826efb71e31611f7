//! Gate-level circuit IR, polaritonic UCC ansatz construction and synthesis,
//! CNOT folding and resource counts.

mod gate;
mod ir;
mod pool;
mod synth;

pub use gate::{Angle, Gate};
pub use ir::{Circuit, Resources};
pub use pool::{build_pucc_pool, ExcitationClass, GeneratorPool, PoolEntry};
pub use synth::{conjugate_by_gates, synthesize, MAGIC_BASIS};

use crate::chem::IntegralSet;
use crate::error::Result;
use crate::hamiltonian::EncodedProblem;

/// Pool plus synthesized circuit for one encoded problem.
#[derive(Debug, Clone)]
pub struct Ansatz {
    pub pool: GeneratorPool,
    pub circuit: Circuit,
}

impl Ansatz {
    pub fn build(ints: &IntegralSet, problem: &EncodedProblem) -> Result<Self> {
        let pool = build_pucc_pool(ints, problem)?;
        let circuit = synthesize(&pool, problem.initial_bits())?;
        Ok(Self { pool, circuit })
    }

    pub fn n_params(&self) -> usize {
        self.circuit.n_params()
    }
}

#[cfg(test)]
mod tests;
