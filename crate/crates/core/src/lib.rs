//! A novelty filter built from a self-organising map whose neurons drive the
//! output through habituating synapses.
//!
//! Perceptions that keep winning on the same neurons wear those synapses
//! down, so familiar input produces an output near the resting level while
//! anything the map has not yet absorbed produces a burst close to 1.
//!
//! ```
//! use hsom::NoveltyFilter;
//!
//! let mut filter = NoveltyFilter::with_defaults(7).unwrap();
//! let wall = [0.2; 16];
//! let first = filter.present(&wall, true).unwrap().novelty;
//! let mut last = first;
//! for _ in 0..30 {
//!     last = filter.present(&wall, true).unwrap().novelty;
//! }
//! assert_eq!(first, 1.0);
//! assert!(last < 0.05);
//! ```
//!
//! The crate also carries a deterministic corridor simulator ([`sim`]), the
//! sonar preprocessing that turns range scans into perceptions ([`sonar`]),
//! and the trial/experiment harness used to reproduce learning-then-detection
//! runs ([`harness`]). The guide in `book/` walks through each piece.

pub mod error;
pub mod habituation;
pub mod harness;
pub mod novelty;
pub mod sim;
pub mod som;
pub mod sonar;

pub use error::{Error, Result};
pub use habituation::{HabituationParams, SynapseState};
pub use novelty::{FilterConfig, NoveltyFilter, NoveltyReading};
pub use som::{GridCoord, SomGrid};
pub use sonar::{normalize, Perception, RawScan, ScanSample, SegmentAccumulator};

// Compile and run the guide's snippets with the doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/habituation.md")]
    mod habituation {}
    #[doc = include_str!("../../../book/src/som.md")]
    mod som {}
    #[doc = include_str!("../../../book/src/novelty-filter.md")]
    mod novelty_filter {}
    #[doc = include_str!("../../../book/src/sonar.md")]
    mod sonar {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
