use std::collections::BTreeSet;

use bytes::Bytes;
use mpnc::coding::{CodeRate, Decoder, Encoder, EncoderConfig, Packet, PacketBody, SourceSymbol};
use mpnc::multipath::{code_rate_bound, min_decoding_window_sliding, PathSpec, Scheduler};
use mpnc::simnet::{run, run_traced, SimConfig, TraceEvent, TrafficConfig};
use mpnc::SimTime;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sources(n: u64, len: usize, seed: u64) -> Vec<SourceSymbol> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|seq| {
            let mut p = vec![0u8; len];
            rng.fill(&mut p[..]);
            SourceSymbol {
                seq,
                payload: Bytes::from(p),
                created_at: SimTime::ZERO,
            }
        })
        .collect()
}

fn encode(cfg: EncoderConfig, src: &[SourceSymbol], seed: u64) -> Vec<Packet> {
    let mut enc = Encoder::new(cfg, ChaCha8Rng::seed_from_u64(seed)).unwrap();
    let mut out = Vec::new();
    for s in src {
        out.extend(enc.push_source(s.clone()).unwrap());
    }
    out.extend(enc.finish());
    out
}

fn traffic(total: u64, symbol_bytes: Option<usize>) -> TrafficConfig {
    TrafficConfig {
        burst_size: 42,
        frame_rate: 60.0,
        payload_size: 1472,
        total_packets: total,
        header_bytes: 28,
        symbol_bytes,
    }
}

fn code_rate() -> impl Strategy<Value = CodeRate> {
    (50u64..=100).prop_map(|pct| CodeRate::new(pct, 100).unwrap())
}

fn encoder_config() -> impl Strategy<Value = EncoderConfig> {
    (code_rate(), 0usize..64, any::<bool>()).prop_map(|(rate, extra, sliding)| {
        let min = rate.min_sliding_window().unwrap_or(1) as usize;
        if sliding {
            EncoderConfig::sliding(rate, min + extra)
        } else {
            EncoderConfig::block(rate, 1 + extra)
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decoded_payloads_survive_the_wire(
        cfg in encoder_config(),
        seed in any::<u64>(),
        erasure in 0.0f64..0.4,
    ) {
        let src = sources(300, 24, seed);
        let packets = encode(cfg, &src, seed);
        let mut drop = ChaCha8Rng::seed_from_u64(seed ^ 0xABCD);
        let mut dec = Decoder::new(400).unwrap();
        let mut delivered = 0;
        for p in &packets {
            let back = Packet::from_bytes(p.to_bytes().unwrap()).unwrap();
            prop_assert_eq!(&back.body_without_time(), &p.body_without_time());
            if drop.gen_bool(erasure) {
                continue;
            }
            for r in dec.add(&back, SimTime::ZERO).unwrap() {
                prop_assert_eq!(&r.payload, &src[r.seq as usize].payload);
                delivered += 1;
            }
        }
        for r in dec.finish(SimTime::ZERO) {
            prop_assert_eq!(&r.payload, &src[r.seq as usize].payload);
            delivered += 1;
        }
        prop_assert!(delivered + dec.stats().lost <= 300);
    }

    #[test]
    fn lossless_channel_loses_nothing(
        code in encoder_config(),
        w_d in 1usize..200,
        delay_ms in 0u64..50,
        seed in any::<u64>(),
    ) {
        let cfg = SimConfig {
            paths: vec![PathSpec::new(5000.0, delay_ms as f64 / 1e3, 0.0).unwrap()],
            traffic: traffic(600, Some(8)),
            code,
            decoding_window: w_d,
        };
        let m = run(&cfg, seed).unwrap();
        prop_assert_eq!(m.lost, 0);
        prop_assert_eq!(m.delivered, 600);
    }

    #[test]
    fn rank_never_decreases(cfg in encoder_config(), seed in any::<u64>(), erasure in 0.0f64..0.5) {
        let src = sources(200, 8, seed);
        let packets = encode(cfg, &src, seed);
        let mut drop = ChaCha8Rng::seed_from_u64(!seed);
        // no eviction: every symbol stays tracked
        let mut dec = Decoder::new(1000).unwrap();
        let mut rank = 0;
        for p in &packets {
            if drop.gen_bool(erasure) {
                continue;
            }
            dec.add(p, SimTime::ZERO).unwrap();
            prop_assert!(dec.rank() >= rank);
            rank = dec.rank();
            // a repeated packet is linearly dependent
            prop_assert!(dec.add(p, SimTime::ZERO).unwrap().is_empty());
            prop_assert_eq!(dec.rank(), rank);
        }
        prop_assert!(dec.rank() <= 200);
    }

    #[test]
    fn credit_count_is_exact(rate in code_rate(), n in 0u64..5000) {
        let w = rate.min_sliding_window().unwrap_or(1) as usize;
        let src = sources(n, 1, 0);
        let mut enc = Encoder::new(EncoderConfig::sliding(rate, w), ChaCha8Rng::seed_from_u64(0)).unwrap();
        let mut coded = 0u64;
        for s in src {
            coded += enc.push_source(s).unwrap().iter().filter(|p| p.is_coded()).count() as u64;
            prop_assert!(enc.credit() < 1.0);
        }
        let expect = (n as u128 * (rate.denom() - rate.numer()) as u128 / rate.numer() as u128) as u64;
        prop_assert_eq!(coded, expect);
    }

    #[test]
    fn bound_non_increasing_in_loss(
        r1 in 1.0f64..10_000.0,
        r2 in 1.0f64..10_000.0,
        e1 in 0.0f64..0.45,
        e2 in 0.0f64..0.9,
        bump in 0.0f64..0.05,
    ) {
        let base = code_rate_bound(&[PathSpec::new(r1, 0.0, e1).unwrap(), PathSpec::new(r2, 0.0, e2).unwrap()]).unwrap();
        let worse = code_rate_bound(&[PathSpec::new(r1, 0.0, e1 + bump).unwrap(), PathSpec::new(r2, 0.0, e2).unwrap()]).unwrap();
        prop_assert!(worse <= base + 1e-12);
        prop_assert!(base <= 1.0 - e1.min(e2) + 1e-12);
    }

    #[test]
    fn identical_paths_match_single_path_bound(r in 1.0f64..10_000.0, e in 0.0f64..0.99, n in 1usize..5) {
        let paths = vec![PathSpec::new(r, 0.0, e).unwrap(); n];
        prop_assert!((code_rate_bound(&paths).unwrap() - (1.0 - e)).abs() < 1e-12);
    }

    #[test]
    fn decoding_window_covers_encoding_window(
        r1 in 1.0f64..10_000.0,
        r2 in 1.0f64..10_000.0,
        rate in 0.05f64..=1.0,
        dd in 0.0f64..0.5,
        w_e in 1u64..512,
    ) {
        let w = min_decoding_window_sliding(r1, r2, rate, dd, w_e);
        prop_assert!(w >= w_e);
        prop_assert!(min_decoding_window_sliding(r1, r2, rate, dd * 2.0, w_e) >= w);
    }

    #[test]
    fn scheduler_share_follows_rates(r1 in 100.0f64..5000.0, r2 in 100.0f64..5000.0) {
        let paths = [PathSpec::new(r1, 0.0, 0.0).unwrap(), PathSpec::new(r2, 0.0, 0.0).unwrap()];
        let mut s = Scheduler::new(&paths).unwrap();
        let n = 4000;
        let on_first = (0..n).filter(|_| s.send(SimTime::ZERO).path == 0).count() as f64;
        let expect = n as f64 * r1 / (r1 + r2);
        prop_assert!((on_first - expect).abs() <= 2.0, "{on_first} vs {expect}");
    }
}

/// The bound falls with a path's loss only while that path still carries
/// enough weight: d bound / d eps_i < 0 iff 2 (1 - eps_i) > bound, which
/// always holds below 50% loss. Past that a worse path can raise it.
#[test]
fn bound_rises_again_for_very_lossy_paths() {
    let bound = |e1: f64| {
        code_rate_bound(&[PathSpec::new(1.0, 0.0, e1).unwrap(), PathSpec::new(1.0, 0.0, 0.0).unwrap()]).unwrap()
    };
    assert!(bound(0.3) < bound(0.2));
    assert!(bound(0.9) > bound(0.8));
    // the turning point is at 1 - eps = sqrt(2) - 1
    let turn = 2.0 - 2f64.sqrt();
    assert!(bound(turn) <= bound(turn - 0.01) && bound(turn) <= bound(turn + 0.01));
}

trait BodyWithoutTime {
    fn body_without_time(&self) -> PacketBody;
}

impl BodyWithoutTime for Packet {
    fn body_without_time(&self) -> PacketBody {
        match &self.body {
            PacketBody::Systematic(s) => PacketBody::Systematic(SourceSymbol {
                created_at: SimTime::ZERO,
                ..s.clone()
            }),
            b => b.clone(),
        }
    }
}

fn lost_set(cfg: &SimConfig, seed: u64) -> BTreeSet<u64> {
    let mut lost: BTreeSet<u64> = (0..cfg.traffic.total_packets).collect();
    run_traced(cfg, seed, |e| {
        if let TraceEvent::Released { seq, .. } = e {
            lost.remove(&seq);
        }
    })
    .unwrap();
    lost
}

fn two_paths() -> Vec<PathSpec> {
    vec![
        PathSpec::new(3333.3, 0.020, 0.1).unwrap(),
        PathSpec::new(3333.3, 0.010, 0.2).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn larger_window_never_loses_more(
        seed in any::<u64>(),
        w_small in 8usize..120,
        extra in 1usize..120,
        sliding in any::<bool>(),
    ) {
        let rate = CodeRate::from_f64(0.8).unwrap();
        let code = if sliding { EncoderConfig::sliding(rate, 32) } else { EncoderConfig::block(rate, 32) };
        let mut cfg = SimConfig { paths: two_paths(), traffic: traffic(2000, Some(4)), code, decoding_window: w_small };
        let small = lost_set(&cfg, seed);
        cfg.decoding_window = w_small + extra;
        let large = lost_set(&cfg, seed);
        prop_assert!(large.is_subset(&small), "{} lost with the larger window vs {}", large.len(), small.len());
    }
}

#[test]
fn materialized_symbol_size_does_not_change_metrics() {
    for (rate, w_d) in [(0.78, 244), (0.85, 120), (1.0, 60)] {
        let mk = |symbol_bytes| SimConfig {
            paths: two_paths(),
            traffic: traffic(3000, symbol_bytes),
            code: EncoderConfig::sliding(CodeRate::from_f64(rate).unwrap(), 96),
            decoding_window: w_d,
        };
        for seed in 0..3 {
            let small = run(&mk(Some(16)), seed).unwrap();
            let full = run(&mk(None), seed).unwrap();
            assert_eq!(format!("{small:?}"), format!("{full:?}"), "R={rate} seed={seed}");
        }
    }
}
