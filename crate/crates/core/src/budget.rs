//! Resource limits for exhaustive searches and the coverage they report.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default)]
pub struct Budget {
    pub max_cases: Option<u64>,
    pub deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn with_max_cases(mut self, cases: u64) -> Self {
        self.max_cases = Some(cases);
        self
    }

    pub fn with_max_duration(mut self, d: Duration) -> Self {
        self.deadline = Some(Instant::now() + d);
        self
    }

    pub fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    /// How many of `total` cases may be examined.
    pub fn case_limit(&self, total: u64) -> u64 {
        self.max_cases.map_or(total, |c| c.min(total))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    pub checked: u64,
    pub total: u64,
}

impl Coverage {
    pub fn complete(total: u64) -> Self {
        Coverage { checked: total, total }
    }

    pub fn is_complete(&self) -> bool {
        self.checked == self.total
    }
}
