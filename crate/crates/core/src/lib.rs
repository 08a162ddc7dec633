//! Exact h-fold sumsets of finite sets in `Z^d` under lexicographic order.
//!
//! - [`group`]: elements, sets, canonical forms and the set-literal format
//! - [`sumset`]: `hA`, the trivial chain and the nontrivial residue
//! - [`constructions`]: progression, `hk`, `B_h` and family witnesses
//! - [`spectrum`]: exhaustive scans of canonical sets and gap checks
//! - [`verifier`]: seeded and grid checks of the proved statements

pub mod constructions;
pub mod error;
pub mod group;
pub mod spectrum;
pub mod sumset;
pub mod verifier;

pub use constructions::{Prediction, Witness, WitnessCheck, WitnessKind, WitnessSpec};
pub use error::{Error, Result};
pub use group::{canonicalize_ints, lex_compare, Coord, FiniteSet, GroupElement};
pub use spectrum::{
    compute_spectrum, enumerate_canonical, gap_check, min_dichotomy_check, DichotomyVerdict, GapVerdict,
    SpectrumReport, VerdictStatus,
};
pub use sumset::{classify, hfold_sumset, sumset_size, SumsetResult};
pub use verifier::{CheckOutcome, Suite, SuiteParams};
