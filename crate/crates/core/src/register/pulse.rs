//! Pulse specifications exported as data for external sequence builders.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rabi frequency of the baseline ramp, rad/us.
pub const BASELINE_OMEGA: f64 = 3.30;
/// Rabi frequency for lattices whose next-nearest pairs are over-driven.
pub const REDUCED_OMEGA: f64 = 1.63;
/// Detuning endpoints are +/- this multiple of the Rabi frequency.
const SWEEP_SPAN: f64 = 3.0;
const TRAPEZOID_RAMP: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseVariant {
    Baseline,
    Trapezoid,
    FourKnot,
    CubicDetuning,
    ReducedOmega,
}

impl PulseVariant {
    pub const ALL: [PulseVariant; 5] = [
        PulseVariant::Baseline,
        PulseVariant::Trapezoid,
        PulseVariant::FourKnot,
        PulseVariant::CubicDetuning,
        PulseVariant::ReducedOmega,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PulseVariant::Baseline => "baseline",
            PulseVariant::Trapezoid => "trapezoid",
            PulseVariant::FourKnot => "four_knot",
            PulseVariant::CubicDetuning => "cubic_detuning",
            PulseVariant::ReducedOmega => "reduced_omega",
        }
    }
}

impl std::str::FromStr for PulseVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PulseVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::input(format!("unknown pulse variant {s:?}")))
    }
}

/// Detuning as `(time us, value rad/us)` knots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "interpolation", rename_all = "snake_case")]
pub enum Waveform {
    PiecewiseLinear { knots: Vec<[f64; 2]> },
    /// Monotone cubic Hermite interpolation through the knots.
    Cubic { knots: Vec<[f64; 2]> },
}

impl Waveform {
    pub fn knots(&self) -> &[[f64; 2]] {
        match self {
            Waveform::PiecewiseLinear { knots } | Waveform::Cubic { knots } => knots,
        }
    }

    pub fn start(&self) -> f64 {
        self.knots()[0][1]
    }

    pub fn end(&self) -> f64 {
        self.knots()[self.knots().len() - 1][1]
    }

    /// Value at time `t`, clamped to the end knots outside their span.
    pub fn value_at(&self, t: f64) -> f64 {
        let k = self.knots();
        if t <= k[0][0] {
            return k[0][1];
        }
        if t >= k[k.len() - 1][0] {
            return k[k.len() - 1][1];
        }
        let i = k.partition_point(|p| p[0] <= t) - 1;
        let (t0, y0) = (k[i][0], k[i][1]);
        let (t1, y1) = (k[i + 1][0], k[i + 1][1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        match self {
            Waveform::PiecewiseLinear { .. } => y0 + s * (y1 - y0),
            Waveform::Cubic { .. } => {
                let slopes = pchip_slopes(k);
                let (h00, h10) = (2.0 * s.powi(3) - 3.0 * s * s + 1.0, s.powi(3) - 2.0 * s * s + s);
                let (h01, h11) = (-2.0 * s.powi(3) + 3.0 * s * s, s.powi(3) - s * s);
                h00 * y0 + h10 * h * slopes[i] + h01 * y1 + h11 * h * slopes[i + 1]
            }
        }
    }
}

/// Fritsch-Carlson slopes; keep the interpolant monotone between knots.
fn pchip_slopes(k: &[[f64; 2]]) -> Vec<f64> {
    let n = k.len();
    let secant: Vec<f64> = k.windows(2).map(|w| (w[1][1] - w[0][1]) / (w[1][0] - w[0][0])).collect();
    let mut m = vec![0.0; n];
    m[0] = secant[0];
    m[n - 1] = secant[n - 2];
    for i in 1..n - 1 {
        m[i] = if secant[i - 1] * secant[i] <= 0.0 {
            0.0
        } else {
            let (h0, h1) = (k[i][0] - k[i - 1][0], k[i + 1][0] - k[i][0]);
            let (w1, w2) = (2.0 * h1 + h0, h1 + 2.0 * h0);
            (w1 + w2) / (w1 / secant[i - 1] + w2 / secant[i])
        };
    }
    m
}

/// Rabi-frequency envelope, as a fraction of `omega`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Envelope {
    Constant,
    /// Linear rise and fall around a plateau at full amplitude.
    Trapezoid { rise: f64, fall: f64 },
    Knots { knots: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    pub variant_name: String,
    /// rad/us
    pub omega: f64,
    /// us
    pub duration: f64,
    pub detuning: Waveform,
    pub envelope: Envelope,
}

impl PulseSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.duration > 0.0) {
            return Err(Error::input("pulse duration must be positive"));
        }
        let k = self.detuning.knots();
        if k.len() < 2 || k.windows(2).any(|w| w[1][0] <= w[0][0]) {
            return Err(Error::input("detuning knots must be at least two, strictly increasing in time"));
        }
        if k[0][0] != 0.0 || k[k.len() - 1][0] != self.duration {
            return Err(Error::input("detuning waveform must span the pulse duration"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("pulse serializes");
        s.push('\n');
        s
    }
}

fn round9(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

fn knots(duration: f64, span: f64, shape: &[(f64, f64)]) -> Vec<[f64; 2]> {
    shape
        .iter()
        .map(|&(ft, fy)| [round9(ft * duration), round9(fy * span)])
        .collect()
}

/// Ramp duration: 4 us, or 6 us for registers of 81 atoms and more.
pub fn ramp_duration(n_atoms: usize) -> f64 {
    if n_atoms >= 81 {
        6.0
    } else {
        4.0
    }
}

pub fn pulse_spec(n_atoms: usize, variant: PulseVariant) -> PulseSpec {
    let duration = ramp_duration(n_atoms);
    let omega = match variant {
        PulseVariant::ReducedOmega => REDUCED_OMEGA,
        _ => BASELINE_OMEGA,
    };
    let span = SWEEP_SPAN * omega;
    let linear = [(0.0, -1.0), (1.0, 1.0)];
    let (detuning, envelope) = match variant {
        PulseVariant::Baseline | PulseVariant::ReducedOmega => (
            Waveform::PiecewiseLinear {
                knots: knots(duration, span, &linear),
            },
            Envelope::Constant,
        ),
        PulseVariant::Trapezoid => (
            Waveform::PiecewiseLinear {
                knots: knots(duration, span, &linear),
            },
            Envelope::Trapezoid {
                rise: TRAPEZOID_RAMP,
                fall: TRAPEZOID_RAMP,
            },
        ),
        // slow passage just after resonance
        PulseVariant::FourKnot => (
            Waveform::PiecewiseLinear {
                knots: knots(duration, span, &[(0.0, -1.0), (0.25, -0.2), (0.75, 0.3), (1.0, 1.0)]),
            },
            Envelope::Constant,
        ),
        PulseVariant::CubicDetuning => (
            Waveform::Cubic {
                knots: knots(duration, span, &[(0.0, -1.0), (0.2, -0.5), (0.5, 0.0), (0.8, 0.5), (1.0, 1.0)]),
            },
            Envelope::Constant,
        ),
    };
    PulseSpec {
        variant_name: variant.name().to_string(),
        omega,
        duration,
        detuning,
        envelope,
    }
}
