use rand::Rng;

use crate::multipath::PathSpec;
use crate::time::SimTime;

/// Sends one packet that left the sender at `depart`. Returns its arrival
/// time, or `None` if the path dropped it.
///
/// Exactly one uniform draw is consumed per packet, lost or not.
pub fn transmit<R: Rng>(path: &PathSpec, depart: SimTime, rng: &mut R) -> Option<SimTime> {
    let u: f64 = rng.gen();
    if u < path.loss {
        None
    } else {
        Some(depart + path.latency())
    }
}
