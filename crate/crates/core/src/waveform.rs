//! OFDM numerology and the data/sensing subcarrier split.

use std::fmt;
use std::str::FromStr;

use crate::error::{ensure_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OfdmNumerology {
    pub bandwidth_hz: f64,
    pub n_subcarriers: usize,
    pub n_cp_samples: usize,
    pub subcarrier_spacing_hz: f64,
    /// Useful (FFT) part of a symbol, s.
    pub t_useful: f64,
    pub t_cp: f64,
    pub t_symbol: f64,
    /// `t_useful / t_symbol`, the share of airtime not spent on the prefix.
    pub cp_overhead: f64,
}

impl OfdmNumerology {
    pub fn new(bandwidth_hz: f64, n_subcarriers: usize, n_cp_samples: usize) -> Result<Self> {
        ensure_positive("bandwidth_hz", bandwidth_hz)?;
        if n_subcarriers == 0 {
            return Err(Error::domain("n_subcarriers", "must be at least 1"));
        }
        let spacing = bandwidth_hz / n_subcarriers as f64;
        let t_useful = 1.0 / spacing;
        let t_cp = n_cp_samples as f64 / bandwidth_hz;
        let t_symbol = t_useful + t_cp;
        Ok(OfdmNumerology {
            bandwidth_hz,
            n_subcarriers,
            n_cp_samples,
            subcarrier_spacing_hz: spacing,
            t_useful,
            t_cp,
            t_symbol,
            cp_overhead: t_useful / t_symbol,
        })
    }

    /// Number of complete OFDM symbols within `t_integration_s`.
    pub fn symbols_in(&self, t_integration_s: f64) -> Result<u64> {
        if !(t_integration_s.is_finite() && t_integration_s >= 0.0) {
            return Err(Error::domain(
                "t_integration_s",
                format!("must be finite and >= 0, got {t_integration_s}"),
            ));
        }
        Ok((t_integration_s / self.t_symbol).floor() as u64)
    }
}

/// Free-function form of [`OfdmNumerology::new`].
pub fn numerology(bandwidth_hz: f64, n_subcarriers: usize, n_cp_samples: usize) -> Result<OfdmNumerology> {
    OfdmNumerology::new(bandwidth_hz, n_subcarriers, n_cp_samples)
}

pub fn symbols_in(t_integration_s: f64, num: &OfdmNumerology) -> Result<u64> {
    num.symbols_in(t_integration_s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubcarrierPlan {
    pub n_total: usize,
    pub n_data: usize,
    pub n_sense: usize,
    pub n_unused: usize,
    pub data_fraction: f64,
    pub sense_fraction: f64,
}

impl SubcarrierPlan {
    pub fn new(n_total: usize, n_data: usize, n_sense: usize) -> Result<Self> {
        if n_total == 0 {
            return Err(Error::domain("n_subcarriers", "must be at least 1"));
        }
        if n_data + n_sense > n_total {
            return Err(Error::PartitionOverflow {
                n_total,
                n_data,
                n_sense,
            });
        }
        Ok(SubcarrierPlan {
            n_total,
            n_data,
            n_sense,
            n_unused: n_total - n_data - n_sense,
            data_fraction: n_data as f64 / n_total as f64,
            sense_fraction: n_sense as f64 / n_total as f64,
        })
    }

    pub fn unused_fraction(&self) -> f64 {
        self.n_unused as f64 / self.n_total as f64
    }
}

pub fn partition(n_total: usize, n_data: usize, n_sense: usize) -> Result<SubcarrierPlan> {
    SubcarrierPlan::new(n_total, n_data, n_sense)
}

/// Where the sensing tones sit within the occupied band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TonePlacement {
    /// Evenly spaced from the lower band edge to the upper band edge.
    #[default]
    CombUniform,
    /// Contiguous runs of subcarriers at both band edges, the lower run
    /// taking the extra tone when the count is odd.
    BlockEdge,
}

impl TonePlacement {
    pub fn as_str(self) -> &'static str {
        match self {
            TonePlacement::CombUniform => "comb_uniform",
            TonePlacement::BlockEdge => "block_edge",
        }
    }
}

impl fmt::Display for TonePlacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TonePlacement {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "comb_uniform" => Ok(TonePlacement::CombUniform),
            "block_edge" => Ok(TonePlacement::BlockEdge),
            other => Err(format!(
                "unknown tone placement `{other}` (expected comb_uniform or block_edge)"
            )),
        }
    }
}

/// Frequency offsets from band center, Hz, of every sensing tone.
pub fn sensing_tone_offsets(
    plan: &SubcarrierPlan,
    num: &OfdmNumerology,
    placement: TonePlacement,
) -> Vec<f64> {
    let n = plan.n_sense;
    match placement {
        TonePlacement::CombUniform => {
            if n == 1 {
                return vec![0.0];
            }
            let b = num.bandwidth_hz;
            let step = b / (n - 1) as f64;
            // Pair tones from both ends so the comb is exactly symmetric.
            (0..n)
                .map(|i| {
                    let j = n - 1 - i;
                    if i <= j {
                        -0.5 * b + i as f64 * step
                    } else {
                        0.5 * b - j as f64 * step
                    }
                })
                .collect()
        }
        TonePlacement::BlockEdge => {
            let total = num.n_subcarriers;
            let center = (total as f64 - 1.0) / 2.0;
            let lower = n.div_ceil(2);
            let upper = n - lower;
            (0..lower)
                .chain(total - upper..total)
                .map(|k| (k as f64 - center) * num.subcarrier_spacing_hz)
                .collect()
        }
    }
}

/// RMS spread, Hz, of the sensing tones about band center.
pub fn sensing_rms_bandwidth(
    plan: &SubcarrierPlan,
    num: &OfdmNumerology,
    placement: TonePlacement,
) -> Result<f64> {
    if plan.n_sense < 2 {
        return Err(Error::domain(
            "n_sense",
            format!("RMS bandwidth needs at least 2 sensing tones, got {}", plan.n_sense),
        ));
    }
    let offsets = sensing_tone_offsets(plan, num, placement);
    Ok(rms(&offsets))
}

/// Root mean square of a set of offsets, summed in sorted-magnitude order so
/// the result does not depend on the order or sign of the inputs.
pub(crate) fn rms(offsets: &[f64]) -> f64 {
    let mut squares: Vec<f64> = offsets.iter().map(|f| f * f).collect();
    squares.sort_by(f64::total_cmp);
    (squares.iter().sum::<f64>() / offsets.len() as f64).sqrt()
}
