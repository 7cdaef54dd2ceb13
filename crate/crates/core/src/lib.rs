//! Numerical verification of generalized convexity classes and the
//! Hadamard-type integral inequalities built on them.
//!
//! The crate is organized bottom-up: [`expr`] parses user functions,
//! [`funcat`] supplies catalog functions and the weight composite `h^s`,
//! [`quad`] and [`specfun`] provide integrals and Beta/Gamma values,
//! [`classes`] searches for class-membership violations, [`hadamard`]
//! evaluates each inequality with margins, and [`means`] covers the special
//! means and the inequalities derived for them. [`sweep`] batches theorem
//! evaluations and [`report`] writes the JSON envelope.

pub mod classes;
pub mod error;
pub mod expr;
pub mod funcat;
pub mod hadamard;
pub mod interval;
pub mod means;
pub mod quad;
pub mod report;
pub mod specfun;
pub mod sweep;

pub use classes::{
    check_membership, defect, find_valid_s_range, ClassKind, ClassSpec, MembershipStatus,
    MembershipVerdict, SRangeReport, SearchConfig, ViolationWitness,
};
pub use error::{DomainError, DomainReason, Error, ParseError, Result};
pub use expr::{parse, EvalOutcome, Expression};
pub use funcat::{builtin_f, builtin_h, h_power, FName, HName, HPower, RealFunction};
pub use hadamard::{
    closed_form_coefficients, endpoint_terms, evaluate_theorem, Comparison, InequalityReport,
    ProductEndpointTerms, Term, TheoremId, TheoremInput,
};
pub use interval::Interval;
pub use means::{
    chain_check, mean, p_log_mean, proposition_check, ChainReport, MeanKind, PropositionId,
    PropositionReport,
};
pub use quad::{integral_mean, integrate, QuadConfig, QuadResult};
pub use report::{to_json, Envelope};
pub use specfun::{beta, log_gamma};
pub use sweep::{random_subintervals, sweep, SweepSpec};
