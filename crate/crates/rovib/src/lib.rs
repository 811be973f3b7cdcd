//! Ro-vibrational bound states of diatomic molecules in a q-deformed
//! hyperbolic well.
//!
//! The library computes energy levels and normalized radial wave functions
//! in two regimes: a relativistic one with equal scalar and vector coupling
//! (energies handled as the shift above rest mass throughout, so the
//! sub-milli-wavenumber structure survives double precision) and the
//! non-relativistic limit, which has a closed-form spectrum. Rotational
//! states use a three-term approximation to the centrifugal barrier in the
//! potential's natural exponential variable.
//!
//! Every analytic result can be cross-checked against the built-in
//! finite-difference eigensolver ([`oracle`]), which carries its own
//! grid-refinement acceptance gate, and against the criteria bundle in
//! [`validate`].

pub mod constants;
pub mod error;
pub mod nu;
pub mod oracle;
pub mod potential;
pub mod registry;
pub mod specfun;
pub mod spectrum;
pub mod validate;
pub mod wavefn;

pub use error::{Error, Result};

/// Runtime switch for the data-parallel code paths (the oracle's
/// per-eigenvalue bisections, the validation bundle). `Parallel` uses the
/// rayon thread pool when the crate is built with the default "parallel"
/// feature and silently degrades to the sequential path otherwise; results
/// are bitwise identical either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    #[default]
    Parallel,
    Sequential,
}

impl ExecMode {
    pub fn from_label(label: &str) -> Result<Self> {
        match label {
            "parallel" => Ok(ExecMode::Parallel),
            "sequential" => Ok(ExecMode::Sequential),
            other => Err(Error::RejectedInput(format!(
                "unknown execution mode '{other}' (expected parallel|sequential)"
            ))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ExecMode::Parallel => "parallel",
            ExecMode::Sequential => "sequential",
        }
    }
}
