//! Closed-form brackets for `f`, per-graph bound reports and the exact check
//! of the two constants behind the triangle-factor lower bound.
//!
//! `f` itself is unknown between its bounds, so every value handed out for it
//! is an [`FBoundPair`], never a single number.

use std::ops::ControlFlow;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    alpha, corollary_condition, for_each_independent_set, min_independent_ratio, to_graph6,
    FiniteGraph, RatioValue, VertexSet,
};

/// Tolerance for floating-point identities that hold exactly.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

fn check_arg(x: f64) -> Result<()> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!("f is defined on [0, +inf], got {x}")));
    }
    Ok(())
}

/// `(x+1)/(2x+1)`, with the limit `1/2` at `x = +inf`.
pub fn f_lower(x: f64) -> Result<f64> {
    check_arg(x)?;
    if x.is_infinite() {
        return Ok(0.5);
    }
    Ok((x + 1.0) / (2.0 * x + 1.0))
}

/// Exact `f_lower` at a rational argument `p/q`: `(p+q)/(2p+q)`.
pub fn f_lower_exact(x: RatioValue) -> RatioValue {
    let (p, q) = (x.numer(), x.denom());
    RatioValue::new(p + q, 2 * p + q).expect("2p+q >= 1")
}

/// Upper bound on `f`: `(2x^2+3x+7+2 sqrt(x+1))/(4x^2+4x+9)` below 3 and
/// `(x+1)/(2x)` from 3 on. Both pieces equal `2/3` at `x = 3`.
pub fn f_upper(x: f64) -> Result<f64> {
    check_arg(x)?;
    if x.is_infinite() {
        return Ok(0.5);
    }
    if x < 3.0 {
        Ok((2.0 * x * x + 3.0 * x + 7.0 + 2.0 * (x + 1.0).sqrt()) / (4.0 * x * x + 4.0 * x + 9.0))
    } else {
        Ok((x + 1.0) / (2.0 * x))
    }
}

/// `f(lambda)` computed from a value of `h((lambda-1)/(lambda+1))`.
pub fn f_from_h(lambda: f64, h_value: f64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("lambda must be positive and finite, got {lambda}")));
    }
    if h_value.is_nan() {
        return Err(Error::Domain("h value is NaN".into()));
    }
    let s = 1.0 + lambda;
    let denom = 2.0 * lambda / (s * s) * h_value + 2.0 * lambda / s;
    if !(denom > 0.0) {
        return Err(Error::Domain(format!(
            "nonpositive denominator {denom} for lambda = {lambda}, h = {h_value}"
        )));
    }
    Ok(1.0 - 1.0 / denom)
}

/// The certified bracket `lower <= f(x) <= upper`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FBoundPair {
    #[serde(with = "crate::extended")]
    pub x: f64,
    pub lower: f64,
    pub upper: f64,
}

impl FBoundPair {
    pub fn at(x: f64) -> Result<Self> {
        Ok(FBoundPair {
            x,
            lower: f_lower(x)?,
            upper: f_upper(x)?,
        })
    }

    pub fn at_ratio(x: RatioValue) -> Self {
        Self::at(x.to_f64()).expect("ratios are nonnegative")
    }
}

/// Which known lower bound on the Ramsey density a candidate comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    /// `f(|N(I)|/|I|)` for an independent `I` whose neighborhood is independent.
    NeighborhoodIndependent,
    /// `|V|/(2|V| - alpha)`.
    VertexRatio,
    /// `f(|V|/alpha - 1)`.
    IndependenceNumber,
    /// `1 - 1/sqrt 7`, only for the triangle.
    Triangle,
}

impl BoundSource {
    pub fn label(self) -> &'static str {
        match self {
            BoundSource::NeighborhoodIndependent => "neighborhood-independent",
            BoundSource::VertexRatio => "vertex-ratio",
            BoundSource::IndependenceNumber => "independence-number",
            BoundSource::Triangle => "triangle",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerCandidate {
    pub source: BoundSource,
    pub applicable: bool,
    /// Argument of `f` (or of its lower bound) when the candidate has one.
    pub argument: Option<RatioValue>,
    pub value: f64,
    /// The value as an exact rational when it is one.
    pub exact: Option<RatioValue>,
    pub witness: Option<VertexSet>,
}

/// Every bound on `rho(omega . F)` the toolkit knows for one graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub graph_id: String,
    pub graph6: String,
    pub vertices: usize,
    pub edges: usize,
    pub minratio: RatioValue,
    pub minratio_witness: VertexSet,
    pub alpha: usize,
    pub upper_arg: RatioValue,
    /// `rho <= f(upper_arg)`, and `f(upper_arg)` lies in this bracket.
    pub upper_interval: FBoundPair,
    pub lower_candidates: Vec<LowerCandidate>,
    pub best_lower: f64,
    pub best_lower_source: BoundSource,
    /// Set when some minimizer has size alpha: then `rho = f(|V|/alpha - 1)`.
    pub exact: Option<FBoundPair>,
}

impl BoundReport {
    pub fn validate(&self) -> Result<()> {
        let best = self
            .lower_candidates
            .iter()
            .filter(|c| c.applicable)
            .map(|c| c.value)
            .fold(f64::NEG_INFINITY, f64::max);
        if best != self.best_lower {
            return Err(Error::Verification(format!(
                "best_lower {} differs from the best applicable candidate {best}",
                self.best_lower
            )));
        }
        if self.best_lower > self.upper_interval.upper + IDENTITY_TOLERANCE {
            return Err(Error::Verification(format!(
                "best_lower {} exceeds the upper bound {}",
                self.best_lower, self.upper_interval.upper
            )));
        }
        if self.upper_interval.lower > self.upper_interval.upper {
            return Err(Error::Verification("inverted upper bracket".into()));
        }
        Ok(())
    }
}

/// Best `I` (smallest ratio, then smallest mask) whose neighborhood is independent.
fn best_neighborhood_independent(g: &FiniteGraph) -> Option<(RatioValue, VertexSet)> {
    let mut best: Option<(RatioValue, VertexSet)> = None;
    let _ = for_each_independent_set(g, |set| {
        if g.is_independent(g.neighborhood(set)) {
            let r = RatioValue::new(g.neighborhood(set).len() as u64, set.len() as u64)
                .expect("nonempty set");
            let better = match best {
                None => true,
                Some((br, bs)) => r < br || (r == br && set.bits() < bs.bits()),
            };
            if better {
                best = Some((r, set));
            }
        }
        ControlFlow::Continue(())
    });
    best
}

pub fn bound_report(g: &FiniteGraph, graph_id: &str) -> BoundReport {
    let n = g.n() as u64;
    let min = min_independent_ratio(g);
    let a = alpha(g) as u64;
    let mut candidates = Vec::with_capacity(4);

    match best_neighborhood_independent(g) {
        Some((r, set)) => {
            let exact = f_lower_exact(r);
            candidates.push(LowerCandidate {
                source: BoundSource::NeighborhoodIndependent,
                applicable: true,
                argument: Some(r),
                value: exact.to_f64(),
                exact: Some(exact),
                witness: Some(set),
            });
        }
        None => candidates.push(LowerCandidate {
            source: BoundSource::NeighborhoodIndependent,
            applicable: false,
            argument: None,
            value: 0.0,
            exact: None,
            witness: None,
        }),
    }

    let vertex_ratio = RatioValue::new(n, 2 * n - a).expect("2n - alpha >= n >= 1");
    candidates.push(LowerCandidate {
        source: BoundSource::VertexRatio,
        applicable: true,
        argument: None,
        value: vertex_ratio.to_f64(),
        exact: Some(vertex_ratio),
        witness: None,
    });

    let alpha_arg = RatioValue::new(n - a, a).expect("alpha >= 1");
    let alpha_bound = f_lower_exact(alpha_arg);
    candidates.push(LowerCandidate {
        source: BoundSource::IndependenceNumber,
        applicable: true,
        argument: Some(alpha_arg),
        value: alpha_bound.to_f64(),
        exact: Some(alpha_bound),
        witness: None,
    });

    let is_triangle = g.n() == 3 && g.is_complete();
    candidates.push(LowerCandidate {
        source: BoundSource::Triangle,
        applicable: is_triangle,
        argument: None,
        value: TriangleConstants::new().gamma_star,
        exact: None,
        witness: None,
    });

    let (best_lower, best_lower_source) = candidates
        .iter()
        .filter(|c| c.applicable)
        .map(|c| (c.value, c.source))
        .fold((f64::NEG_INFINITY, BoundSource::VertexRatio), |acc, c| {
            if c.0 > acc.0 {
                c
            } else {
                acc
            }
        });

    let exact = corollary_condition(g).then(|| FBoundPair::at_ratio(alpha_arg));

    BoundReport {
        graph_id: graph_id.to_string(),
        graph6: to_graph6(g),
        vertices: g.n(),
        edges: g.edge_count(),
        minratio: min.ratio,
        minratio_witness: min.witness,
        alpha: a as usize,
        upper_arg: min.ratio,
        upper_interval: FBoundPair::at_ratio(min.ratio),
        lower_candidates: candidates,
        best_lower,
        best_lower_source,
        exact,
    }
}

/// `a + b sqrt 7` with rational `a`, `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QSqrt7 {
    pub a: Rational64,
    pub b: Rational64,
}

impl QSqrt7 {
    pub fn new(a: Rational64, b: Rational64) -> Self {
        QSqrt7 { a, b }
    }

    pub fn int(a: i64) -> Self {
        QSqrt7::new(Rational64::from_integer(a), Rational64::from_integer(0))
    }

    pub fn frac(num: i64, den: i64) -> Self {
        QSqrt7::new(Rational64::new(num, den), Rational64::from_integer(0))
    }

    pub fn sqrt7() -> Self {
        QSqrt7::new(Rational64::from_integer(0), Rational64::from_integer(1))
    }

    pub fn is_zero(&self) -> bool {
        self.a == Rational64::from_integer(0) && self.b == Rational64::from_integer(0)
    }

    pub fn to_f64(self) -> f64 {
        let r = |q: Rational64| *q.numer() as f64 / *q.denom() as f64;
        r(self.a) + r(self.b) * 7f64.sqrt()
    }

    fn conjugate(self) -> Self {
        QSqrt7::new(self.a, -self.b)
    }

    /// `a^2 - 7 b^2`, which vanishes only at zero since 7 is not a square.
    fn norm(self) -> Rational64 {
        self.a * self.a - Rational64::from_integer(7) * self.b * self.b
    }
}

impl Add for QSqrt7 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        QSqrt7::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for QSqrt7 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        QSqrt7::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for QSqrt7 {
    type Output = Self;
    fn neg(self) -> Self {
        QSqrt7::new(-self.a, -self.b)
    }
}

impl Mul for QSqrt7 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let seven = Rational64::from_integer(7);
        QSqrt7::new(self.a * o.a + seven * self.b * o.b, self.a * o.b + self.b * o.a)
    }
}

impl Div for QSqrt7 {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let n = o.norm();
        assert!(n != Rational64::from_integer(0), "division by zero in Q(sqrt 7)");
        let num = self * o.conjugate();
        QSqrt7::new(num.a / n, num.b / n)
    }
}

/// `delta* = (4 sqrt 7 + 2)/27` and `gamma* = 1 - 1/sqrt 7`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleConstants {
    pub delta_star: f64,
    pub gamma_star: f64,
}

impl TriangleConstants {
    pub fn new() -> Self {
        let s7 = 7f64.sqrt();
        TriangleConstants {
            delta_star: (4.0 * s7 + 2.0) / 27.0,
            gamma_star: 1.0 - 1.0 / s7,
        }
    }

    pub fn delta_exact() -> QSqrt7 {
        (QSqrt7::int(4) * QSqrt7::sqrt7() + QSqrt7::int(2)) / QSqrt7::int(27)
    }

    pub fn gamma_exact() -> QSqrt7 {
        QSqrt7::int(1) - QSqrt7::int(1) / QSqrt7::sqrt7()
    }
}

impl Default for TriangleConstants {
    fn default() -> Self {
        Self::new()
    }
}

/// `gamma delta + 2 gamma + delta - 2`.
pub fn first_identity(delta: f64, gamma: f64) -> f64 {
    gamma * delta + 2.0 * gamma + delta - 2.0
}

/// `11 gamma delta + (10/3) gamma - 7 delta - 2`.
pub fn second_identity(delta: f64, gamma: f64) -> f64 {
    11.0 * gamma * delta + 10.0 / 3.0 * gamma - 7.0 * delta - 2.0
}

fn first_identity_exact(d: QSqrt7, g: QSqrt7) -> QSqrt7 {
    g * d + QSqrt7::int(2) * g + d - QSqrt7::int(2)
}

fn second_identity_exact(d: QSqrt7, g: QSqrt7) -> QSqrt7 {
    QSqrt7::int(11) * g * d + QSqrt7::frac(10, 3) * g - QSqrt7::int(7) * d - QSqrt7::int(2)
}

/// Newton's method on both identities from `start`, returning `(delta, gamma)`
/// and the iteration count.
pub fn solve_identities(start: (f64, f64), max_iter: usize) -> Result<((f64, f64), usize)> {
    let (mut d, mut g) = start;
    for iter in 1..=max_iter {
        let (e1, e2) = (first_identity(d, g), second_identity(d, g));
        // Jacobian rows: d/d(delta), d/d(gamma)
        let (j11, j12) = (g + 1.0, d + 2.0);
        let (j21, j22) = (11.0 * g - 7.0, 11.0 * d + 10.0 / 3.0);
        let det = j11 * j22 - j12 * j21;
        if det.abs() < 1e-300 {
            return Err(Error::Verification(format!("singular Jacobian at ({d}, {g})")));
        }
        let step_d = (e1 * j22 - j12 * e2) / det;
        let step_g = (j11 * e2 - j21 * e1) / det;
        d -= step_d;
        g -= step_g;
        if step_d.abs().max(step_g.abs()) < 1e-15 {
            return Ok(((d, g), iter));
        }
    }
    Ok(((d, g), max_iter))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantCheck {
    pub constants: TriangleConstants,
    pub first_residual: f64,
    pub second_residual: f64,
    pub first_exact_zero: bool,
    pub second_exact_zero: bool,
    pub newton_start: (f64, f64),
    pub newton_root: (f64, f64),
    pub newton_iterations: usize,
    pub root_error: f64,
    pub verified: bool,
}

/// Checks both identities at `(delta*, gamma*)` in `f64` and in `Q(sqrt 7)`,
/// and recovers the pair as the root of the system by Newton's method.
pub fn verify_constant_identities() -> Result<ConstantCheck> {
    let constants = TriangleConstants::new();
    let (d, g) = (constants.delta_star, constants.gamma_star);
    let first_residual = first_identity(d, g);
    let second_residual = second_identity(d, g);
    let (de, ge) = (TriangleConstants::delta_exact(), TriangleConstants::gamma_exact());
    let first_exact_zero = first_identity_exact(de, ge).is_zero();
    let second_exact_zero = second_identity_exact(de, ge).is_zero();
    let newton_start = (0.5, 0.6);
    let (newton_root, newton_iterations) = solve_identities(newton_start, 100)?;
    let root_error = (newton_root.0 - d).abs().max((newton_root.1 - g).abs());
    let verified = first_residual.abs() <= IDENTITY_TOLERANCE
        && second_residual.abs() <= IDENTITY_TOLERANCE
        && first_exact_zero
        && second_exact_zero
        && root_error <= 1e-10;
    let check = ConstantCheck {
        constants,
        first_residual,
        second_residual,
        first_exact_zero,
        second_exact_zero,
        newton_start,
        newton_root,
        newton_iterations,
        root_error,
        verified,
    };
    if !verified {
        return Err(Error::Verification(format!(
            "constant identities fail: residuals {first_residual:e}, {second_residual:e}, \
             exact zero {first_exact_zero}/{second_exact_zero}, root error {root_error:e}"
        )));
    }
    Ok(check)
}
