//! Linear search ("cow path") on a two-branch line with untrusted hints.
//!
//! A searcher starts at the root and alternately explores the two branches to
//! growing distances. Given a hint about the target (its position, its
//! branch, or a k-bit answer), a strategy is judged by its *consistency*
//! (competitive ratio when the hint is correct) and its *robustness*
//! (competitive ratio when the hint is adversarial).
//!
//! * [`model`]: strategies, targets, hints, and the search-cost simulation.
//! * [`ratio`]: closed-form and brute-force competitive ratios.
//! * [`hints`]: the position, direction and k-bit strategy families.
//! * [`bounds`]: closed-form tradeoff curves, inequality checkers, frontiers.
//! * [`verify`]: seeded verification suites.
//! * [`cli`]: the `hinted-search` command line.
//!
//! See `examples/` for one runnable program per capability.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod hints;
pub mod model;
pub mod ratio;
pub mod verify;

pub use error::{Error, Result};
pub use hints::{Family, HintedStrategy};
pub use model::{Branch, Hint, Segment, Strategy, Target};
pub use ratio::{Method, TargetGrid, TradeoffPoint};
