//! The renormalization engine.
//!
//! A problem `N(y) = eps M(y)` is expanded order by order about an anchor
//! `m` with symbolic amplitudes on the homogeneous modes of `N`. Secular
//! terms `r^n C(n - m, 1)` in the corrections become update equations for
//! the amplitudes, which are solved and substituted back into the leading
//! order.

pub mod ampseq;
pub mod engine;
pub mod global;
pub mod htr;

pub use ampseq::{AmpSeq, Monomial, Series};
pub use engine::{
    apply_operator, collect_y, consistency_residuals, form_renorm_system, perturb_expand,
    secular_terms, solve_renorm, Amplitude, AmplitudePath, Closure, CollectedY, ForcingFn,
    PerturbationProblem, PerturbationSolution, RenormSystem, SecularTerm, SystemKind, UpdateTerm,
};
pub use global::{
    apply_boundary, assemble_global, residual_scan, Basis, BoundaryCondition, Component,
    GlobalSolution, Growth, Identification, ResidualScan,
};
pub use htr::{htr_expand, htr_problem, DomainWall, HtrBase, TargetFn};

#[cfg(test)]
mod tests;
