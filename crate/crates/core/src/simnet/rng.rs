use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent random streams derived from one root seed.
///
/// Every stream is ChaCha8 keyed by the root seed (expanded with
/// `seed_from_u64`, i.e. PCG32 key expansion) and selected by the cipher's
/// 64-bit stream id, so adding a path never shifts the draws of another.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    Traffic,
    Coefficients,
    Path(usize),
}

impl Stream {
    pub fn id(self) -> u64 {
        match self {
            Stream::Traffic => 0,
            Stream::Coefficients => 1,
            Stream::Path(i) => 2 + i as u64,
        }
    }
}

pub fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream.id());
    rng
}
