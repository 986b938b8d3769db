//! First-passage levels of `gamma x ± g(x)` for piecewise-linear 1-Lipschitz
//! `g`, finite-horizon estimates of `limsup (Gamma+ + Gamma-)/t`, and the
//! resulting upper bounds on `f`.

use serde::{Deserialize, Serialize};

use crate::bounds::f_from_h;
use crate::error::{Error, Result};
use crate::extended;

/// Behaviour of `g` past its last breakpoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extension {
    /// One slope forever.
    Constant(f64),
    /// Repeating `(length, slope)` segments.
    Periodic(Vec<(f64, f64)>),
}

/// `g(0) = 0`, slope `slopes[i]` on `[breakpoints[i], breakpoints[i+1]]`,
/// then `extension` from the last breakpoint on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinearG {
    pub breakpoints: Vec<f64>,
    pub slopes: Vec<f64>,
    pub extension: Extension,
}

fn check_slope(s: f64) -> Result<()> {
    if !(s.abs() <= 1.0) {
        return Err(Error::Domain(format!("slope {s} breaks the 1-Lipschitz condition")));
    }
    Ok(())
}

impl PiecewiseLinearG {
    pub fn new(breakpoints: Vec<f64>, slopes: Vec<f64>, extension: Extension) -> Result<Self> {
        let g = PiecewiseLinearG { breakpoints, slopes, extension };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.breakpoints.first() != Some(&0.0) {
            return Err(Error::Domain("breakpoints must start at 0".into()));
        }
        if self.slopes.len() + 1 != self.breakpoints.len() {
            return Err(Error::Domain(format!(
                "{} breakpoints need {} slopes, got {}",
                self.breakpoints.len(),
                self.breakpoints.len() - 1,
                self.slopes.len()
            )));
        }
        if self.breakpoints.windows(2).any(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
            return Err(Error::Domain("breakpoints must be finite and strictly increasing".into()));
        }
        self.slopes.iter().try_for_each(|&s| check_slope(s))?;
        match &self.extension {
            Extension::Constant(s) => check_slope(*s),
            Extension::Periodic(pattern) => {
                if pattern.is_empty() {
                    return Err(Error::Domain("periodic extension needs at least one segment".into()));
                }
                for &(len, s) in pattern {
                    if !(len > 0.0 && len.is_finite()) {
                        return Err(Error::Domain(format!("segment length {len} must be positive")));
                    }
                    check_slope(s)?;
                }
                Ok(())
            }
        }
    }

    pub fn zero() -> Self {
        Self::linear(0.0).expect("slope 0")
    }

    pub fn linear(c: f64) -> Result<Self> {
        Self::new(vec![0.0], vec![], Extension::Constant(c))
    }

    /// Period `p`: slope `+1` for `duty * p`, then `-1` for the rest.
    pub fn sawtooth(p: f64, duty: f64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) || !(duty > 0.0 && duty < 1.0) {
            return Err(Error::Domain(format!("sawtooth needs p > 0 and duty in (0, 1), got {p}, {duty}")));
        }
        Self::new(vec![0.0], vec![], Extension::Periodic(vec![(duty * p, 1.0), ((1.0 - duty) * p, -1.0)]))
    }

    /// `zero`, `linear:<c>`, `sawtooth:<p>,<duty>`, or the JSON object form.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let num = |s: &str, at: usize| -> Result<f64> {
            s.trim().parse().map_err(|_| Error::parse(at, format!("'{s}' is not a number")))
        };
        if spec.starts_with('{') {
            let g: PiecewiseLinearG = serde_json::from_str(spec)?;
            g.validate()?;
            return Ok(g);
        }
        if spec == "zero" {
            return Ok(Self::zero());
        }
        if let Some(c) = spec.strip_prefix("linear:") {
            return Self::linear(num(c, 7)?);
        }
        if let Some(rest) = spec.strip_prefix("sawtooth:") {
            let (p, duty) = rest
                .split_once(',')
                .ok_or_else(|| Error::parse(spec.len(), "sawtooth needs <p>,<duty>"))?;
            return Self::sawtooth(num(p, 9)?, num(duty, 10 + p.len())?);
        }
        Err(Error::parse(0, format!("unknown g family '{spec}'")))
    }

    /// Segments `(start, length, slope)` before the last breakpoint.
    fn segments(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breakpoints.windows(2).zip(&self.slopes).map(|(w, &s)| (w[0], w[1] - w[0], s))
    }

    fn tail_start(&self) -> f64 {
        *self.breakpoints.last().expect("validated")
    }

    pub fn value(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for (a, len, s) in self.segments() {
            if x <= a + len {
                return acc + s * (x - a);
            }
            acc += s * len;
        }
        let a = self.tail_start();
        match &self.extension {
            Extension::Constant(s) => acc + s * (x - a),
            Extension::Periodic(pattern) => {
                let period: f64 = pattern.iter().map(|p| p.0).sum();
                let rise: f64 = pattern.iter().map(|p| p.0 * p.1).sum();
                let k = ((x - a) / period).floor();
                let mut pos = a + k * period;
                acc += k * rise;
                for &(len, s) in pattern {
                    if x <= pos + len {
                        return acc + s * (x - pos);
                    }
                    acc += s * len;
                    pos += len;
                }
                acc
            }
        }
    }
}

/// First `x` in the segment starting at `a` with value `v` and slope `m`
/// where the level `t` is reached, if within `len`.
fn hit(a: f64, v: f64, m: f64, len: f64, t: f64) -> Option<f64> {
    if v >= t {
        return Some(a);
    }
    if m > 0.0 && v + m * len >= t {
        Some(a + (t - v) / m)
    } else {
        None
    }
}

/// `min{x >= 0 : gamma x + sign g(x) >= t}`, `+inf` when never reached.
fn first_passage(g: &PiecewiseLinearG, gamma: f64, sign: f64, t: f64) -> f64 {
    let mut v = 0.0;
    for (a, len, s) in g.segments() {
        let m = gamma + sign * s;
        if let Some(x) = hit(a, v, m, len, t) {
            return x;
        }
        v += m * len;
    }
    let a = g.tail_start();
    match &g.extension {
        Extension::Constant(s) => hit(a, v, gamma + sign * s, f64::INFINITY, t).unwrap_or(f64::INFINITY),
        Extension::Periodic(pattern) => {
            let period: f64 = pattern.iter().map(|p| p.0).sum();
            let drift: f64 = pattern.iter().map(|&(len, s)| len * (gamma + sign * s)).sum();
            // highest point of one period above its starting value
            let mut peak = 0.0f64;
            let mut run = 0.0;
            for &(len, s) in pattern {
                run += len * (gamma + sign * s);
                peak = peak.max(run);
            }
            if v + peak < t && drift <= 0.0 {
                return f64::INFINITY;
            }
            let skip = if drift > 0.0 { ((t - v - peak) / drift).floor().max(0.0) } else { 0.0 };
            let mut pos = a + skip * period;
            v += skip * drift;
            loop {
                for &(len, s) in pattern {
                    let m = gamma + sign * s;
                    if let Some(x) = hit(pos, v, m, len, t) {
                        return x;
                    }
                    v += m * len;
                    pos += len;
                }
            }
        }
    }
}

/// `Gamma+_gamma(g, t) = min{x : gamma x + g(x) >= t}`.
pub fn gamma_plus(g: &PiecewiseLinearG, gamma: f64, t: f64) -> Result<f64> {
    check_level(t)?;
    Ok(first_passage(g, gamma, 1.0, t))
}

/// `Gamma-_gamma(g, t) = min{x : gamma x - g(x) >= t}`.
pub fn gamma_minus(g: &PiecewiseLinearG, gamma: f64, t: f64) -> Result<f64> {
    check_level(t)?;
    Ok(first_passage(g, gamma, -1.0, t))
}

fn check_level(t: f64) -> Result<()> {
    if !(t > 0.0) || t.is_infinite() {
        return Err(Error::Domain(format!("level t must be positive and finite, got {t}")));
    }
    Ok(())
}

pub const DEFAULT_RESOLUTION: usize = 4096;
pub const MIN_HORIZON: f64 = 64.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HorizonSup {
    pub horizon: f64,
    #[serde(with = "extended")]
    pub sup_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HEstimate {
    pub gamma: f64,
    pub horizon: f64,
    pub resolution: usize,
    /// Supremum at the largest horizon in the trace.
    #[serde(with = "extended")]
    pub sup_ratio: f64,
    /// `sup (Gamma+ + Gamma-)/t` over `t` in `[T/2, T]` for `T`, `2T`, `4T`.
    pub trace: Vec<HorizonSup>,
}

/// Supremum of `(Gamma+ + Gamma-)/t` over `resolution + 1` evenly spaced `t`
/// in `[T/2, T]`, repeated at `2T` and `4T`.
pub fn ratio_limsup_estimate(g: &PiecewiseLinearG, gamma: f64, horizon: f64, resolution: usize) -> Result<HEstimate> {
    if !(gamma > -1.0 && gamma < 1.0) {
        return Err(Error::Domain(format!("gamma must lie in (-1, 1), got {gamma}")));
    }
    if !(horizon >= MIN_HORIZON) || horizon.is_infinite() {
        return Err(Error::Domain(format!("horizon must be at least {MIN_HORIZON}, got {horizon}")));
    }
    if resolution == 0 {
        return Err(Error::Domain("resolution must be positive".into()));
    }
    let mut trace = Vec::new();
    for k in 0..3 {
        let big_t = horizon * f64::from(1 << k);
        let mut sup: f64 = 0.0;
        for j in 0..=resolution {
            let t = big_t / 2.0 + (big_t / 2.0) * j as f64 / resolution as f64;
            let r = (first_passage(g, gamma, 1.0, t) + first_passage(g, gamma, -1.0, t)) / t;
            sup = sup.max(r);
            if sup.is_infinite() {
                break;
            }
        }
        trace.push(HorizonSup { horizon: big_t, sup_ratio: sup });
    }
    Ok(HEstimate {
        gamma,
        horizon,
        resolution,
        sup_ratio: trace.last().expect("three horizons").sup_ratio,
        trace,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FBoundFromG {
    pub lambda: f64,
    pub estimate: HEstimate,
    pub f_bound: f64,
    /// The estimate was infinite, so the bound is the trivial value 1.
    pub vacuous: bool,
    /// Always true: a finite-horizon supremum only estimates the limsup.
    pub is_estimate: bool,
}

/// Upper bound on `f(lambda)` certified (up to the finite horizon) by `g`.
pub fn f_upper_bound_from_g(lambda: f64, g: &PiecewiseLinearG, horizon: f64, resolution: usize) -> Result<FBoundFromG> {
    if !(lambda > 0.0) || lambda.is_infinite() {
        return Err(Error::Domain(format!("lambda must be positive and finite, got {lambda}")));
    }
    let gamma = (lambda - 1.0) / (lambda + 1.0);
    let estimate = ratio_limsup_estimate(g, gamma, horizon, resolution)?;
    let (f_bound, vacuous) = if estimate.sup_ratio.is_infinite() {
        (1.0, true)
    } else {
        (f_from_h(lambda, estimate.sup_ratio)?, false)
    };
    Ok(FBoundFromG { lambda, estimate, f_bound, vacuous, is_estimate: true })
}
