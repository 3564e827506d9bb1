//! Sliding-window longest increasing subsequence queries.
//!
//! [`QnList`] keeps every item of a window in a grid of horizontal lists
//! keyed by rising length, with up and down links between neighbouring
//! lists. Appending is a binary search over list tails. Evicting the oldest
//! item re-threads the lists in time linear in the window. Queries in
//! [`queries`] read LIS and constrained LIS directly off the links.

pub mod error;
pub mod oracle;
pub mod qnlist;
pub mod queries;
pub mod stream;
pub mod window;

pub use error::{Error, Result};
pub use qnlist::{HorizontalList, InvariantViolation, Node, NodeId, OpCounters, QnList, Snapshot};
pub use queries::{RangeParams, ResultSequence};
pub use window::{delete_head, SlideOutcome, WindowState};
