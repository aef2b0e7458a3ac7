use crate::time::SimTime;

/// Outcome of one simulated session. Delay statistics cover delivered
/// packets only and are in seconds; they are NaN when nothing was delivered.
#[derive(Clone, Debug, PartialEq)]
pub struct Metrics {
    pub delivered: u64,
    pub lost: u64,
    pub loss_probability: f64,
    pub mean_delay: f64,
    pub p50_delay: f64,
    pub p95_delay: f64,
    pub p99_delay: f64,
    pub max_delay: f64,
}

impl Metrics {
    /// Builds metrics from per-packet in-order delays.
    pub fn from_delays(mut delays: Vec<SimTime>, lost: u64) -> Metrics {
        let delivered = delays.len() as u64;
        let total = delivered + lost;
        let loss_probability = if total == 0 { 0.0 } else { lost as f64 / total as f64 };
        if delays.is_empty() {
            return Metrics {
                delivered,
                lost,
                loss_probability,
                mean_delay: f64::NAN,
                p50_delay: f64::NAN,
                p95_delay: f64::NAN,
                p99_delay: f64::NAN,
                max_delay: f64::NAN,
            };
        }
        delays.sort_unstable();
        let sum: u128 = delays.iter().map(|d| d.as_nanos() as u128).sum();
        let mean_ns = sum as f64 / delays.len() as f64;
        Metrics {
            delivered,
            lost,
            loss_probability,
            mean_delay: mean_ns / 1e9,
            p50_delay: nearest_rank(&delays, 0.50),
            p95_delay: nearest_rank(&delays, 0.95),
            p99_delay: nearest_rank(&delays, 0.99),
            max_delay: delays.last().unwrap().as_secs_f64(),
        }
    }
}

fn nearest_rank(sorted: &[SimTime], q: f64) -> f64 {
    let rank = (q * sorted.len() as f64).ceil().max(1.0) as usize;
    sorted[rank.min(sorted.len()) - 1].as_secs_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles_nearest_rank() {
        let d: Vec<SimTime> = (1..=100).rev().map(SimTime::from_millis).collect();
        let m = Metrics::from_delays(d, 0);
        assert_eq!(m.p50_delay, 0.050);
        assert_eq!(m.p95_delay, 0.095);
        assert_eq!(m.p99_delay, 0.099);
        assert_eq!(m.max_delay, 0.100);
        assert!((m.mean_delay - 0.0505).abs() < 1e-12);
    }

    #[test]
    fn nothing_delivered() {
        let m = Metrics::from_delays(Vec::new(), 10);
        assert_eq!(m.loss_probability, 1.0);
        assert!(m.mean_delay.is_nan());
    }
}
