//! Closed-form limits for a multipath coded session.

use super::path::PathSpec;
use super::PathError;

// Products like 6000 * 0.8 * 0.01 land a hair above or below the integer
// they denote; buffer sizes are whole packets.
const ROUNDING_SLACK: f64 = 1e-9;

fn ceil_packets(x: f64) -> u64 {
    (x - ROUNDING_SLACK).ceil().max(0.0) as u64
}

fn floor_packets(x: f64) -> u64 {
    (x + ROUNDING_SLACK).floor().max(0.0) as u64
}

/// Highest common code rate at which every path's losses can still be
/// repaired when redundancy is spread over all paths in proportion to their
/// rates.
///
/// The decodability condition is `sum_i r_i (1 - e_i)(1 - e_i - R) > 0`,
/// which gives `R_max = sum_i r_i (1 - e_i)^2 / sum_i r_i (1 - e_i)`.
/// With a single path this is `1 - e`.
///
/// Evaluated as a weighted mean of `1 - e_i` (weights `r_i (1 - e_i)`)
/// offset from the first path, so equal losses give `1 - e` bit-exactly.
pub fn code_rate_bound(paths: &[PathSpec]) -> Result<f64, PathError> {
    let Some(first) = paths.first() else {
        return Err(PathError::NoPaths);
    };
    let pivot = 1.0 - first.loss;
    let mut num = 0.0;
    let mut den = 0.0;
    for (index, p) in paths.iter().enumerate() {
        if !(p.rate.is_finite() && p.rate > 0.0) {
            return Err(PathError::BadRate { index, rate: p.rate });
        }
        if !(0.0..=1.0).contains(&p.loss) {
            return Err(PathError::BadLoss { index, loss: p.loss });
        }
        let delivered = 1.0 - p.loss;
        let weight = p.rate * delivered;
        num += weight * (delivered - pivot);
        den += weight;
    }
    if den <= 0.0 {
        return Err(PathError::AllPathsDead);
    }
    Ok(pivot + num / den)
}

/// Reorder buffer for uncoded traffic: `ceil(r1 * delta_d) + 1` packets,
/// where `r1` is the rate of the faster (lower-delay) path.
pub fn reorder_buffer_uncoded(r1: f64, delta_d: f64) -> u64 {
    ceil_packets(r1 * delta_d) + 1
}

/// Generations a block decoder must hold so that packets arriving on the
/// slow path still find their generation: `floor((r1 + r2) R dd / g) + 1`.
/// The packet buffer is `g` times this.
pub fn min_generations_block(r1: f64, r2: f64, rate: f64, delta_d: f64, g: u64) -> u64 {
    assert!(g >= 1, "generation size must be positive");
    floor_packets((r1 + r2) * rate * delta_d / g as f64) + 1
}

/// Sliding decoding window that still uses every packet from the slow path:
/// the source symbols sent during `delta_d` plus one encoding window,
/// `ceil((r1 + r2) R dd) + w_e`.
pub fn min_decoding_window_sliding(r1: f64, r2: f64, rate: f64, delta_d: f64, w_e: u64) -> u64 {
    assert!(w_e >= 1, "encoding window must be positive");
    ceil_packets((r1 + r2) * rate * delta_d) + w_e
}

/// Sum of path rates.
pub fn total_rate(paths: &[PathSpec]) -> f64 {
    paths.iter().map(|p| p.rate).sum()
}

/// Largest one-way delay difference between any two paths.
pub fn delay_spread(paths: &[PathSpec]) -> f64 {
    let max = paths.iter().map(|p| p.delay).fold(f64::NEG_INFINITY, f64::max);
    let min = paths.iter().map(|p| p.delay).fold(f64::INFINITY, f64::min);
    if paths.is_empty() {
        0.0
    } else {
        max - min
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two(e1: f64, e2: f64) -> Vec<PathSpec> {
        vec![
            PathSpec { rate: 1.0, delay: 0.0, loss: e1 },
            PathSpec { rate: 1.0, delay: 0.0, loss: e2 },
        ]
    }

    // Two equal-rate paths written out as the explicit closed form.
    fn two_path_closed_form(e1: f64, e2: f64) -> f64 {
        1.0 - (e1 * (1.0 - e1) + e2 * (1.0 - e2)) / ((1.0 - e1) + (1.0 - e2))
    }

    #[test]
    fn single_path_is_one_minus_loss() {
        for e in [0.0, 0.05, 0.1, 0.2, 0.5] {
            let b = code_rate_bound(&[PathSpec { rate: 3.0, delay: 0.0, loss: e }]).unwrap();
            assert!((b - (1.0 - e)).abs() < 1e-12);
        }
    }

    #[test]
    fn two_path_examples() {
        let b = code_rate_bound(&two(0.2, 0.1)).unwrap();
        assert!((b - 0.852941).abs() < 1e-6, "{b}");
        let b = code_rate_bound(&two(0.1, 0.05)).unwrap();
        assert!((b - 0.925676).abs() < 1e-6, "{b}");
        let b = code_rate_bound(&two(0.3, 0.3)).unwrap();
        assert!((b - 0.7).abs() < 1e-12);
    }

    #[test]
    fn generalized_form_matches_closed_form() {
        for e1 in [0.0, 0.1, 0.25, 0.6] {
            for e2 in [0.0, 0.05, 0.3, 0.9] {
                let b = code_rate_bound(&two(e1, e2)).unwrap();
                assert!((b - two_path_closed_form(e1, e2)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dead_paths() {
        assert!(code_rate_bound(&two(1.0, 0.2)).is_ok());
        assert_eq!(code_rate_bound(&two(1.0, 1.0)), Err(PathError::AllPathsDead));
        assert_eq!(code_rate_bound(&[]), Err(PathError::NoPaths));
    }

    #[test]
    fn uncoded_reorder_buffer() {
        assert_eq!(reorder_buffer_uncoded(3000.0, 0.0), 1);
        assert_eq!(reorder_buffer_uncoded(3000.0, 0.010), 31);
        assert_eq!(reorder_buffer_uncoded(1000.0, 0.020), 21);
    }

    #[test]
    fn block_generations() {
        assert_eq!(min_generations_block(3000.0, 3000.0, 0.8, 0.0, 48), 1);
        assert_eq!(min_generations_block(3000.0, 3000.0, 0.8, 0.010, 48), 2);
        assert_eq!(min_generations_block(3000.0, 3000.0, 0.8, 0.010, 64), 1);
    }

    #[test]
    fn sliding_window() {
        assert_eq!(min_decoding_window_sliding(3000.0, 3000.0, 0.8, 0.0, 32), 32);
        for w_e in [16, 32, 64] {
            assert_eq!(min_decoding_window_sliding(3000.0, 3000.0, 0.8, 0.010, w_e), 48 + w_e);
        }
        assert_eq!(min_decoding_window_sliding(1500.0, 1500.0, 1.0, 0.020, 64), 124);
    }

    #[test]
    fn spread_and_total() {
        let paths = vec![
            PathSpec { rate: 2.0, delay: 0.020, loss: 0.1 },
            PathSpec { rate: 3.0, delay: 0.010, loss: 0.2 },
        ];
        assert!((delay_spread(&paths) - 0.010).abs() < 1e-15);
        assert_eq!(total_rate(&paths), 5.0);
        assert_eq!(delay_spread(&[]), 0.0);
    }
}
