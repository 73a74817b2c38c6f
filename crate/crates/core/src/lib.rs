//! Approval-based social argumentation frameworks.
//!
//! An argumentation framework (AF) is a directed attack graph over
//! arguments. Voters approve subsets of arguments; the preferred extensions
//! of the AF are the candidate viewpoints, and a rule picks at most `k` of
//! them so that voters are represented well.
//!
//! ```
//! use absaf::{fixtures, Election, RuleKind, RuleSpec};
//!
//! let election = Election::new(fixtures::canada_absaf()).unwrap();
//! assert_eq!(election.prf().len(), 8);
//! let pick = absaf::rules::solve(&election, 2, &RuleSpec::exact(RuleKind::MaxCov)).unwrap();
//! assert_eq!(pick.objective_f64(), 159.0);
//! ```

pub mod absaf;
pub mod af;
pub mod axioms;
pub mod bitset;
pub mod error;
pub mod experiments;
pub mod fixtures;
pub mod generators;
pub mod representability;
pub mod rules;

pub use crate::absaf::{Absaf, Ballot, BallotFormat, Election, Outcome, RepMode};
pub use crate::af::{preferred_extensions, Af, ArgId, Format};
pub use crate::bitset::{ArgSet, BitSet};
pub use crate::error::{Error, Result};
pub use crate::rules::{RuleKind, RuleSpec, Strategy};
