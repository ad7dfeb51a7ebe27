use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

/// Wall-clock deadline plus an external stop flag (set by a signal handler
/// or watcher thread). Solvers poll `expired` at expansion and batch
/// boundaries.
#[derive(Clone, Debug, Default)]
pub struct Budget {
    deadline: Option<Instant>,
    stop: Option<Arc<AtomicBool>>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn with_timeout(limit: Duration) -> Self {
        Budget {
            deadline: Some(Instant::now() + limit),
            stop: None,
        }
    }

    pub fn with_stop_flag(mut self, flag: Arc<AtomicBool>) -> Self {
        self.stop = Some(flag);
        self
    }

    /// Same stop flag, no deadline.
    pub fn without_deadline(&self) -> Budget {
        Budget {
            deadline: None,
            stop: self.stop.clone(),
        }
    }

    pub fn deadline(&self) -> Option<Instant> {
        self.deadline
    }

    pub fn expired(&self) -> bool {
        if let Some(flag) = &self.stop {
            if flag.load(Ordering::Relaxed) {
                return true;
            }
        }
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    pub fn remaining(&self) -> Option<Duration> {
        self.deadline.map(|d| d.saturating_duration_since(Instant::now()))
    }

    /// A sub-budget ending after `limit` or at our own deadline, whichever
    /// is sooner. Shares the stop flag.
    pub fn slice(&self, limit: Duration) -> Budget {
        let end = Instant::now() + limit;
        Budget {
            deadline: Some(self.deadline.map_or(end, |d| d.min(end))),
            stop: self.stop.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_timeout_is_expired() {
        assert!(Budget::with_timeout(Duration::ZERO).expired());
        assert!(!Budget::unlimited().expired());
    }

    #[test]
    fn stop_flag_expires() {
        let flag = Arc::new(AtomicBool::new(false));
        let b = Budget::unlimited().with_stop_flag(flag.clone());
        assert!(!b.expired());
        flag.store(true, Ordering::Relaxed);
        assert!(b.expired());
        assert!(b.slice(Duration::from_secs(60)).expired());
    }
}
