//! Cooperative resource limits: an explicit-state cap and a wall-clock deadline.

use std::time::{Duration, Instant};

use thiserror::Error;

pub const DEFAULT_STATE_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum LimitError {
    #[error("explicit state cap of {0} exceeded")]
    StateCap(usize),
    #[error("timeout")]
    Timeout,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub state_cap: usize,
    pub deadline: Option<Instant>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { state_cap: DEFAULT_STATE_CAP, deadline: None }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { state_cap: usize::MAX, deadline: None }
    }

    pub fn with_state_cap(mut self, cap: usize) -> Self {
        self.state_cap = cap;
        self
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.deadline = Some(Instant::now() + timeout);
        self
    }

    pub fn check_states(&self, count: usize) -> Result<(), LimitError> {
        if count > self.state_cap {
            return Err(LimitError::StateCap(self.state_cap));
        }
        self.check_time()
    }

    pub fn check_time(&self) -> Result<(), LimitError> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(LimitError::Timeout),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cap_and_deadline() {
        let b = Budget::default().with_state_cap(3);
        assert!(b.check_states(3).is_ok());
        assert_eq!(b.check_states(4), Err(LimitError::StateCap(3)));
        let t = Budget::default().with_timeout(Duration::ZERO);
        assert_eq!(t.check_time(), Err(LimitError::Timeout));
    }
}
