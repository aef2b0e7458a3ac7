use super::path::{validate_all, PathSpec};
use super::PathError;
use crate::time::SimTime;

/// Where and when one packet goes out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub path: usize,
    /// Serialization start.
    pub start: SimTime,
    /// Serialization end; the packet leaves the sender.
    pub depart: SimTime,
}

/// Earliest-available path selection.
///
/// A packet goes to the path that can start sending it first; ties go to
/// the lowest index. With equal rates this is plain round robin, and for a
/// saturated sender each path's share converges to its share of the total
/// rate.
#[derive(Clone, Debug)]
pub struct Scheduler {
    next_free: Vec<SimTime>,
    serialization: Vec<SimTime>,
}

impl Scheduler {
    pub fn new(paths: &[PathSpec]) -> Result<Scheduler, PathError> {
        validate_all(paths)?;
        Ok(Scheduler {
            next_free: vec![SimTime::ZERO; paths.len()],
            serialization: paths.iter().map(PathSpec::serialization).collect(),
        })
    }

    pub fn next_free(&self) -> &[SimTime] {
        &self.next_free
    }

    /// Path with the smallest effective start `max(now, next_free[i])`.
    pub fn pick(&self, now: SimTime) -> usize {
        let mut best = 0;
        let mut best_start = self.next_free[0].max(now);
        for (i, nf) in self.next_free.iter().enumerate().skip(1) {
            let start = (*nf).max(now);
            if start < best_start {
                best = i;
                best_start = start;
            }
        }
        best
    }

    /// Occupies `path` for one packet that is ready at `now`.
    pub fn commit(&mut self, path: usize, now: SimTime) -> Assignment {
        let start = self.next_free[path].max(now);
        let depart = start + self.serialization[path];
        self.next_free[path] = depart;
        Assignment { path, start, depart }
    }

    pub fn send(&mut self, now: SimTime) -> Assignment {
        let path = self.pick(now);
        self.commit(path, now)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sched(rates: &[f64]) -> Scheduler {
        let paths: Vec<PathSpec> = rates.iter().map(|&r| PathSpec::new(r, 0.0, 0.0).unwrap()).collect();
        Scheduler::new(&paths).unwrap()
    }

    #[test]
    fn empty_path_list_rejected() {
        assert_eq!(Scheduler::new(&[]).unwrap_err(), PathError::NoPaths);
    }

    #[test]
    fn single_path_always_zero() {
        let mut s = sched(&[1000.0]);
        for k in 0..10 {
            assert_eq!(s.send(SimTime(k * 10)).path, 0);
        }
    }

    #[test]
    fn equal_rates_alternate() {
        let mut s = sched(&[1000.0, 1000.0]);
        let picks: Vec<usize> = (0..8).map(|_| s.send(SimTime::ZERO).path).collect();
        assert_eq!(picks, vec![0, 1, 0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn double_rate_takes_two_of_three() {
        // tx times 1 ms and 2 ms, all six packets ready at t = 0:
        // p0 free at 0,1,2,2(tie),3,3 -> 0,1,0,0,1,0
        let mut s = sched(&[1000.0, 500.0]);
        let picks: Vec<usize> = (0..6).map(|_| s.send(SimTime::ZERO).path).collect();
        assert_eq!(picks, vec![0, 1, 0, 0, 1, 0]);
        let mut s = sched(&[1000.0, 500.0]);
        let on0 = (0..3000).filter(|_| s.send(SimTime::ZERO).path == 0).count();
        assert_eq!(on0, 2000);
    }

    #[test]
    fn idle_path_is_used_before_busy_one() {
        let mut s = sched(&[10.0, 10.0]);
        s.send(SimTime::ZERO);
        let a = s.send(SimTime::ZERO);
        assert_eq!(a.path, 1);
        assert_eq!(a.start, SimTime::ZERO);
        assert_eq!(a.depart, SimTime::from_millis(100));
    }
}
