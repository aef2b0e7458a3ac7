use std::fmt;

use mpnc::multipath::{
    code_rate_bound, min_decoding_window_sliding, min_generations_block, reorder_buffer_uncoded, PathSpec,
};

use crate::HarnessError;

/// Two-path inputs for the buffer planner. Rates in packets per second,
/// `delta_d` in seconds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanInput {
    pub eps1: f64,
    pub eps2: f64,
    pub r1: f64,
    pub r2: f64,
    pub delta_d: f64,
    pub w_e: u64,
    pub g: u64,
    pub rate: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanReport {
    pub code_rate_bound: f64,
    pub reorder_buffer_uncoded: u64,
    pub min_generations_block: u64,
    pub min_decoding_window_sliding: u64,
}

pub fn plan(input: &PlanInput) -> Result<PlanReport, HarnessError> {
    let bad = |message: String| {
        Err(HarnessError::Config {
            origin: "plan".into(),
            message,
        })
    };
    if input.w_e == 0 || input.g == 0 {
        return bad("window and generation size must be positive".into());
    }
    if !(input.rate > 0.0 && input.rate <= 1.0) {
        return bad(format!("code rate must be in (0, 1], got {}", input.rate));
    }
    let paths = [
        PathSpec::new(input.r1, 0.0, input.eps1)?,
        PathSpec::new(input.r2, input.delta_d, input.eps2)?,
    ];
    Ok(PlanReport {
        code_rate_bound: code_rate_bound(&paths)?,
        reorder_buffer_uncoded: reorder_buffer_uncoded(input.r1, input.delta_d),
        min_generations_block: min_generations_block(input.r1, input.r2, input.rate, input.delta_d, input.g),
        min_decoding_window_sliding: min_decoding_window_sliding(
            input.r1,
            input.r2,
            input.rate,
            input.delta_d,
            input.w_e,
        ),
    })
}

impl fmt::Display for PlanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "code_rate_bound             {:.6}", self.code_rate_bound)?;
        writeln!(f, "reorder_buffer_uncoded      {}", self.reorder_buffer_uncoded)?;
        writeln!(f, "min_generations_block       {}", self.min_generations_block)?;
        writeln!(f, "min_decoding_window_sliding {}", self.min_decoding_window_sliding)
    }
}
