use serde::{Deserialize, Serialize};

/// One friend request and the receiver's decision.
///
/// Indices refer to users of the graph the record was derived from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequestRecord {
    pub requester: usize,
    pub receiver: usize,
    /// `true` when the receiver reciprocated.
    pub label: bool,
    /// Set when the request direction cannot be observed, so the record may
    /// be the echo of a reciprocation rather than a real request.
    pub spurious_risk: bool,
}
