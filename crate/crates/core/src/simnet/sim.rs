use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use super::channel::transmit;
use super::metrics::Metrics;
use super::rng::{stream_rng, Stream};
use super::traffic::{generate_traffic, TrafficConfig};
use super::SimError;
use crate::coding::{Decoder, Encoder, EncoderConfig, Packet, Released, SourceSymbol};
use crate::multipath::{total_rate, Assignment, PathSpec, Scheduler};
use crate::time::SimTime;

/// Everything one run needs, with the decoding window already resolved.
#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub paths: Vec<PathSpec>,
    pub traffic: TrafficConfig,
    pub code: EncoderConfig,
    pub decoding_window: usize,
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        crate::multipath::Scheduler::new(&self.paths)?;
        self.traffic.validate()?;
        self.code.validate()?;
        if self.decoding_window == 0 {
            return Err(SimError::Traffic("decoding window must be positive".into()));
        }

        Ok(())
    }

    /// Whether the coded stream fits the summed path capacity.
    pub fn is_admissible(&self) -> bool {
        self.traffic.packet_rate() <= self.code.rate.as_f64() * total_rate(&self.paths) + 1e-9
    }
}

/// Observable steps of a run, in processing order.
#[derive(Debug)]
pub enum TraceEvent<'a> {
    Sent {
        packet: &'a Packet,
        assignment: Assignment,
        arrival: Option<SimTime>,
    },
    Arrived {
        time: SimTime,
        path: usize,
        packet: &'a Packet,
    },
    Released {
        seq: u64,
        created_at: SimTime,
        at: SimTime,
    },
    Drained {
        at: SimTime,
    },
}

enum Event {
    Frame(u64),
    Delivery { path: usize, packet: Packet },
    Drain,
}

struct Scheduled {
    time: SimTime,
    order: u64,
    event: Event,
}

impl PartialEq for Scheduled {
    fn eq(&self, other: &Self) -> bool {
        (self.time, self.order) == (other.time, other.order)
    }
}
impl Eq for Scheduled {}
impl PartialOrd for Scheduled {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Scheduled {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.time, self.order).cmp(&(other.time, other.order))
    }
}

/// Min-heap on (time, insertion order).
#[derive(Default)]
struct EventQueue {
    heap: BinaryHeap<Reverse<Scheduled>>,
    next_order: u64,
}

impl EventQueue {
    fn push(&mut self, time: SimTime, event: Event) {
        let order = self.next_order;
        self.next_order += 1;
        self.heap.push(Reverse(Scheduled { time, order, event }));
    }

    fn pop(&mut self) -> Option<(SimTime, Event)> {
        self.heap.pop().map(|Reverse(s)| (s.time, s.event))
    }
}

/// Runs one session. The same `(config, seed)` always yields the same metrics.
pub fn run(config: &SimConfig, seed: u64) -> Result<Metrics, SimError> {
    run_traced(config, seed, |_| {})
}

/// Like [`run`], reporting every send, arrival, release and the final drain.
pub fn run_traced<F>(config: &SimConfig, seed: u64, mut observe: F) -> Result<Metrics, SimError>
where
    F: FnMut(TraceEvent<'_>),
{
    config.validate()?;
    if !config.is_admissible() {
        log::debug!(
            "source rate {:.1} pkt/s exceeds R x total path rate {:.1} pkt/s; sender queue will grow",
            config.traffic.packet_rate(),
            config.code.rate.as_f64() * total_rate(&config.paths)
        );
    }

    let source = generate_traffic(&config.traffic, &mut stream_rng(seed, Stream::Traffic));
    let mut encoder = Encoder::new(config.code, stream_rng(seed, Stream::Coefficients))?;
    let mut decoder = Decoder::new(config.decoding_window)?;
    let mut scheduler = Scheduler::new(&config.paths)?;
    let mut path_rngs: Vec<_> = (0..config.paths.len()).map(|i| stream_rng(seed, Stream::Path(i))).collect();
    let max_latency = config.paths.iter().map(PathSpec::latency).max().unwrap_or_default();

    let burst = config.traffic.burst_size as usize;
    let frames = config.traffic.frames();
    let mut queue = EventQueue::default();
    queue.push(config.traffic.frame_time(0), Event::Frame(0));

    // FIFO sender queue: a packet cannot start before its predecessor.
    let mut head_ready = SimTime::ZERO;
    let mut last_depart = SimTime::ZERO;
    let mut delays = Vec::with_capacity(source.len());
    let mut now = SimTime::ZERO;

    let on_released = |released: Vec<Released>, delays: &mut Vec<SimTime>, observe: &mut F| -> Result<(), SimError> {
        for r in released {
            let src: &SourceSymbol = &source[r.seq as usize];
            if r.payload != src.payload {
                return Err(SimError::Corrupted(r.seq));
            }
            delays.push(r.at - src.created_at);
            observe(TraceEvent::Released {
                seq: r.seq,
                created_at: src.created_at,
                at: r.at,
            });
        }
        Ok(())
    };

    while let Some((time, event)) = queue.pop() {
        now = time;
        match event {
            Event::Frame(k) => {
                let lo = k as usize * burst;
                let hi = (lo + burst).min(source.len());
                let mut packets = Vec::new();
                for s in &source[lo..hi] {
                    packets.extend(encoder.push_source(s.clone())?);
                }
                let last_frame = k + 1 == frames;
                if last_frame {
                    packets.extend(encoder.finish());
                }
                for packet in packets {
                    head_ready = head_ready.max(now);
                    let assignment = scheduler.send(head_ready);
                    head_ready = assignment.start;
                    last_depart = last_depart.max(assignment.depart);
                    let path = assignment.path;
                    let arrival = transmit(&config.paths[path], assignment.depart, &mut path_rngs[path]);
                    observe(TraceEvent::Sent {
                        packet: &packet,
                        assignment,
                        arrival,
                    });
                    if let Some(at) = arrival {
                        queue.push(at, Event::Delivery { path, packet });
                    }
                }
                if last_frame {
                    queue.push(last_depart + max_latency, Event::Drain);
                } else {
                    queue.push(config.traffic.frame_time(k + 1), Event::Frame(k + 1));
                }
            }
            Event::Delivery { path, packet } => {
                observe(TraceEvent::Arrived {
                    time,
                    path,
                    packet: &packet,
                });
                let released = decoder.add(&packet, time)?;
                on_released(released, &mut delays, &mut observe)?;
            }
            Event::Drain => break,
        }
    }

    // Symbols past the newest one any packet referenced never entered the
    // window; they count as lost.
    let released = decoder.finish(now);
    on_released(released, &mut delays, &mut observe)?;
    observe(TraceEvent::Drained { at: now });
    let stats = decoder.stats();
    let lost = source.len() as u64 - stats.delivered;
    debug_assert_eq!(stats.delivered, delays.len() as u64);
    debug_assert!(stats.lost <= lost);
    Ok(Metrics::from_delays(delays, lost))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::CodeRate;
    use crate::simnet::DEFAULT_HEADER_BYTES;

    fn traffic(burst: u32, fps: f64, total: u64) -> TrafficConfig {
        TrafficConfig {
            burst_size: burst,
            frame_rate: fps,
            payload_size: 1472,
            total_packets: total,
            header_bytes: DEFAULT_HEADER_BYTES,
            symbol_bytes: Some(16),
        }
    }

    fn config(paths: Vec<PathSpec>, rate: f64, w_e: usize, w_d: usize) -> SimConfig {
        SimConfig {
            paths,
            traffic: traffic(42, 60.0, 2_000),
            code: EncoderConfig::sliding(CodeRate::from_f64(rate).unwrap(), w_e),
            decoding_window: w_d,
        }
    }

    #[test]
    fn lossless_single_path_has_pure_latency_plus_serialization() {
        // 1 packet per ms on a 10 kpkt/s path: no queueing at all.
        let mut cfg = config(vec![PathSpec::new(10_000.0, 0.020, 0.0).unwrap()], 1.0, 8, 8);
        cfg.traffic = traffic(1, 1000.0, 500);
        let m = run(&cfg, 1).unwrap();
        assert_eq!(m.lost, 0);
        assert_eq!(m.delivered, 500);
        assert!((m.mean_delay - 0.0201).abs() < 1e-9, "{}", m.mean_delay);
        assert!((m.max_delay - 0.0201).abs() < 1e-9);
    }

    #[test]
    fn dead_channel_delivers_nothing() {
        let cfg = config(vec![PathSpec::new(5_000.0, 0.010, 0.999_999).unwrap()], 0.8, 16, 32);
        let m = run(&cfg, 2).unwrap();
        assert_eq!(m.delivered, 0);
        assert_eq!(m.lost, 2_000);
    }

    #[test]
    fn conservation_and_causality() {
        let paths = vec![
            PathSpec::new(3_333.0, 0.020, 0.1).unwrap(),
            PathSpec::new(3_333.0, 0.010, 0.2).unwrap(),
        ];
        let cfg = config(paths, 0.78, 32, 96);
        // earliest arrival of any packet that references each seq
        let mut first_seen = vec![None::<SimTime>; 2_000];
        let m = run_traced(&cfg, 5, |e| match e {
            TraceEvent::Sent { packet, assignment, arrival } => {
                if let crate::coding::PacketBody::Systematic(s) = &packet.body {
                    assert!(assignment.start >= s.created_at);
                }
                assert!(assignment.depart > assignment.start);
                if let Some(a) = arrival {
                    assert!(a >= assignment.depart);
                }
            }
            TraceEvent::Arrived { time, packet, .. } => {
                for seq in packet.oldest_seq()..=packet.newest_seq() {
                    first_seen[seq as usize].get_or_insert(time);
                }
            }
            TraceEvent::Released { seq, created_at, at } => {
                assert!(at >= created_at);
                assert!(at >= first_seen[seq as usize].expect("released before any arrival"));
            }
            _ => {}
        })
        .unwrap();
        assert_eq!(m.delivered + m.lost, 2_000);
    }

    #[test]
    fn same_seed_same_metrics() {
        let paths = vec![
            PathSpec::new(3_333.0, 0.020, 0.1).unwrap(),
            PathSpec::new(3_333.0, 0.010, 0.2).unwrap(),
        ];
        let cfg = config(paths, 0.8, 32, 96);
        let a = run(&cfg, 11).unwrap();
        let b = run(&cfg, 11).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
        let c = run(&cfg, 12).unwrap();
        assert_ne!(format!("{a:?}"), format!("{c:?}"));
    }

    #[test]
    fn invalid_config_rejected_before_running() {
        let mut cfg = config(vec![], 0.8, 16, 32);
        assert!(matches!(run(&cfg, 0), Err(SimError::Path(_))));
        cfg.paths = vec![PathSpec::new(1000.0, 0.0, 0.0).unwrap()];
        cfg.decoding_window = 0;
        assert!(run(&cfg, 0).is_err());
    }
}
