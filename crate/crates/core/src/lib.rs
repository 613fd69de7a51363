//! Exact computer algebra for cusped tangential families of plane curves:
//! jet arithmetic, A-equivalence tangent spaces and determinacy certificates,
//! envelope branches, graph singularities and bifurcation sweeps.

pub mod jetcalc;
pub mod orbitspace;
pub mod ctf;
pub mod envelope;
pub mod bifurcate;
pub mod cli;
