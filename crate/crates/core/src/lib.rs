//! Words over a signed alphabet, free and cyclic reduction, presentations in
//! the `gens:`/`rel:` text format, and the symmetrized closure of a relator set.

mod closure;
mod presentation;
mod word;

pub use closure::{least_rotation, primitive_period, CyclicClass, MemberOrigin, MemberRef, SymmetrizedClosure};
pub use presentation::{parse_ratio, CoreError, Presentation, DEFAULT_LAMBDA};
pub use word::{Letter, Word};

pub use num_rational::Ratio;

/// Exact rational used for small cancellation parameters.
pub type Rational = Ratio<u64>;
