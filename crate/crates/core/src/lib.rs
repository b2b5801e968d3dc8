//! Tree-decomposition edit distance.
//!
//! The crate is organised around a b-ary decomposition of the compared strings:
//!
//! * [`exact`] — quadratic reference oracles (`ed`, `edd`, `lcs`, alignments).
//! * [`etree`] — the decomposition itself and the exact E-distance it induces.
//! * [`sampling`] — the content-oblivious pruned sample tree and its precisions.
//! * [`estimation`] — bottom-up estimation over a sample tree, the gap decider
//!   and the full approximation driver.
//! * [`hard`] — shift / substitution-product generators for lower-bound instances.
//! * [`similarity`] — exact checks of (uniform) similarity on tiny distributions.
//! * [`bench`] and [`cli`] — the experiment harness behind the `edist` binary.

pub mod bench;
pub mod cli;
pub mod error;
pub mod estimation;
pub mod etree;
pub mod exact;
pub mod hard;
pub mod rng;
pub mod sampling;
pub mod similarity;
pub mod text;
pub mod workload;

pub use error::{Error, Result};
pub use text::{Codec, Symbol, Text};
