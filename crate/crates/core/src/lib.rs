//! Exact combinatorics of random forests and bridge-alterable graph classes.
//!
//! The modules build bottom-up:
//!
//! - [`exactnum`]: big rationals and rigorous enclosures of `e^x`.
//! - [`forestcount`]: labeled tree and forest counts, connectivity
//!   probabilities of uniform random forests and the verifiers built on them.
//! - [`weightmodel`]: the mass-weighted forest model on `[t]` and its
//!   identities and inequalities.
//! - [`graphcore`]: labeled graphs, bridges, bridgeless cores and exhaustive
//!   checks over all graphs on small vertex sets.
//! - [`sampler`]: exact samplers for uniform and mass-weighted forests.
//! - [`report`]: the row format every verifier emits.

pub mod exactnum;
pub mod forestcount;
pub mod graphcore;
pub mod report;
pub mod sampler;
pub mod weightmodel;
