//! Moments of the diffusion time `T_N` and the Chebyshev-style message
//! budgets derived from them.
//!
//! The exact moment sums are the primary path. The closed forms for
//! complete graphs and the Cheeger/spectral routes are reporting
//! conveniences and always carry a [`ClosedFormVariant`].

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::diffusion::{AlphaKind, AlphaSequence};
use crate::error::{Error, Result};
use crate::graph::{Graph, SamplingMode};

/// Which printed constant a closed form uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ClosedFormVariant {
    /// `E-bound + sqrt(Var-bound / delta)`; for Cheeger-type bounds the edge
    /// count is the directed count `2m`.
    #[default]
    Principal,
    /// Constants exactly as printed: deviation `pi (N-1) / (3 sqrt(delta))`
    /// for complete graphs, undirected `m` for Cheeger-type bounds.
    PaperLiteral,
}

impl ClosedFormVariant {
    pub fn label(self) -> &'static str {
        match self {
            ClosedFormVariant::Principal => "principal",
            ClosedFormVariant::PaperLiteral => "paper-literal",
        }
    }

    /// Edge count fed into the Cheeger and spectral formulas.
    pub fn edge_count(self, g: &Graph) -> f64 {
        match self {
            ClosedFormVariant::Principal => g.directed_edge_count() as f64,
            ClosedFormVariant::PaperLiteral => g.edge_count() as f64,
        }
    }
}

impl fmt::Display for ClosedFormVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ClosedFormVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "principal" => Ok(ClosedFormVariant::Principal),
            "paper-literal" => Ok(ClosedFormVariant::PaperLiteral),
            other => Err(Error::InvalidParameter(format!(
                "unknown variant {other:?} (expected principal or paper-literal)"
            ))),
        }
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "delta = {delta} is not in (0, 1]"
        )))
    }
}

/// `H_n = 1 + 1/2 + ... + 1/n`.
pub fn harmonic(n: usize) -> f64 {
    // Summed smallest-first for accuracy.
    (1..=n).rev().map(|k| 1.0 / k as f64).sum()
}

/// `E[T_N] = sum_k 1 / alpha_k`.
pub fn expectation_from_alphas(alphas: &AlphaSequence) -> f64 {
    alphas.as_slice().iter().map(|a| 1.0 / a).sum()
}

/// `Var(T_N) = sum_k 1 / alpha_k^2 - sum_k 1 / alpha_k`.
pub fn variance_from_alphas(alphas: &AlphaSequence) -> f64 {
    // Each geometric contributes (1 - a) / a^2 >= 0; summing per term avoids
    // cancellation between two large sums.
    alphas.as_slice().iter().map(|a| (1.0 - a) / (a * a)).sum()
}

/// Budget exceeded with probability at most `delta`:
/// `E + sqrt(Var / delta)`.
pub fn chebyshev_bound(alphas: &AlphaSequence, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    Ok(chebyshev_from_moments(
        expectation_from_alphas(alphas),
        variance_from_alphas(alphas),
        delta,
    ))
}

pub fn chebyshev_from_moments(expectation: f64, variance: f64, delta: f64) -> f64 {
    expectation + (variance / delta).sqrt()
}

/// Closed-form budget for the complete graph on `n` nodes.
pub fn complete_graph_bound(n: usize, delta: f64, variant: ClosedFormVariant) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "complete-graph bound needs n >= 2 (got {n})"
        )));
    }
    check_delta(delta)?;
    let m1 = (n - 1) as f64;
    let mean_term = 2.0 * m1 * ((n + 1) as f64).ln();
    let deviation = match variant {
        ClosedFormVariant::Principal => PI * m1 / (3.0 * delta).sqrt(),
        ClosedFormVariant::PaperLiteral => PI * m1 / (3.0 * delta.sqrt()),
    };
    Ok(mean_term + deviation)
}

fn check_phi(phi: f64) -> Result<()> {
    if phi > 0.0 && phi.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "Cheeger constant {phi} must be positive (graph disconnected?)"
        )))
    }
}

fn check_edges(edges: f64) -> Result<()> {
    if edges > 0.0 && edges.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "edge count {edges} must be positive"
        )))
    }
}

/// `phi * min(k, n - k) / edges`, clamped to `(0, 1]`.
pub fn cheeger_alpha_lower(phi: f64, edges: f64, n: usize, k: usize) -> Result<f64> {
    check_phi(phi)?;
    check_edges(edges)?;
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "k = {k} outside 1..={} for n = {n}",
            n.saturating_sub(1)
        )));
    }
    Ok((phi * k.min(n - k) as f64 / edges).min(1.0))
}

/// `(2 edges / phi) ln(n/2 + 1) + pi edges / (phi sqrt(3 delta))`.
pub fn cheeger_bound(phi: f64, edges: f64, n: usize, delta: f64) -> Result<f64> {
    check_phi(phi)?;
    check_edges(edges)?;
    check_delta(delta)?;
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "Cheeger bound needs n >= 2 (got {n})"
        )));
    }
    let scale = edges / phi;
    Ok(2.0 * scale * (n as f64 / 2.0 + 1.0).ln() + PI * scale / (3.0 * delta).sqrt())
}

/// [`cheeger_bound`] with `phi` replaced by `sqrt(2 lambda2)`.
pub fn spectral_bound(lambda2: f64, edges: f64, n: usize, delta: f64) -> Result<f64> {
    if !(lambda2 > 0.0 && lambda2.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "lambda2 = {lambda2} must be positive"
        )));
    }
    cheeger_bound((2.0 * lambda2).sqrt(), edges, n, delta)
}

/// Which closed-form family a report row carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClosedFormKind {
    Complete,
    Cheeger,
    /// Cheeger formula evaluated with a sweep-cut value of the constant,
    /// which over-estimates it.
    CheegerSweep,
    Spectral,
}

impl ClosedFormKind {
    pub fn label(self) -> &'static str {
        match self {
            ClosedFormKind::Complete => "complete",
            ClosedFormKind::Cheeger => "cheeger",
            ClosedFormKind::CheegerSweep => "cheeger-sweep",
            ClosedFormKind::Spectral => "spectral",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub n: usize,
    pub delta: f64,
    pub mode: SamplingMode,
    pub alpha_kind: AlphaKind,
    pub expectation: f64,
    pub variance: f64,
    pub chebyshev: f64,
    pub closed_form: Option<(ClosedFormKind, f64)>,
    pub closed_form_variant: ClosedFormVariant,
}

impl BoundReport {
    pub const CSV_HEADER: &'static str =
        "n,delta,mode,alpha_kind,expectation,variance,chebyshev,closed_form,variant";

    pub fn from_alphas(
        alphas: &AlphaSequence,
        delta: f64,
        mode: SamplingMode,
        variant: ClosedFormVariant,
    ) -> Result<Self> {
        let expectation = expectation_from_alphas(alphas);
        let variance = variance_from_alphas(alphas);
        Ok(Self {
            n: alphas.node_count(),
            delta,
            mode,
            alpha_kind: alphas.kind(),
            expectation,
            variance,
            chebyshev: chebyshev_bound(alphas, delta)?,
            closed_form: None,
            closed_form_variant: variant,
        })
    }

    pub fn with_closed_form(mut self, kind: ClosedFormKind, value: f64) -> Self {
        self.closed_form = Some((kind, value));
        self
    }

    /// Exact moments plus the closed form for the complete graph.
    pub fn complete(n: usize, delta: f64, variant: ClosedFormVariant) -> Result<Self> {
        let alphas = AlphaSequence::complete(n)?;
        let closed = complete_graph_bound(n, delta, variant)?;
        Ok(
            Self::from_alphas(&alphas, delta, SamplingMode::NodeUniform, variant)?
                .with_closed_form(ClosedFormKind::Complete, closed),
        )
    }

    /// Moments from Cheeger lower bounds on `alpha_k` plus the Cheeger
    /// closed form. Both assume edge-uniform sampling.
    pub fn cheeger(g: &Graph, phi: f64, delta: f64, variant: ClosedFormVariant) -> Result<Self> {
        let n = g.node_count();
        let edges = variant.edge_count(g);
        let alphas = AlphaSequence::cheeger_lower(phi, edges, n)?;
        let closed = cheeger_bound(phi, edges, n, delta)?;
        Ok(
            Self::from_alphas(&alphas, delta, SamplingMode::EdgeUniform, variant)?
                .with_closed_form(ClosedFormKind::Cheeger, closed),
        )
    }

    /// As [`BoundReport::cheeger`] with `phi = sqrt(2 lambda2)`.
    pub fn spectral(
        g: &Graph,
        lambda2: f64,
        delta: f64,
        variant: ClosedFormVariant,
    ) -> Result<Self> {
        let n = g.node_count();
        let edges = variant.edge_count(g);
        let phi = (2.0 * lambda2).sqrt();
        let alphas = AlphaSequence::cheeger_lower(phi, edges, n)?;
        let closed = spectral_bound(lambda2, edges, n, delta)?;
        Ok(
            Self::from_alphas(&alphas, delta, SamplingMode::EdgeUniform, variant)?
                .with_closed_form(ClosedFormKind::Spectral, closed),
        )
    }

    /// The `variant` column reads `<family>/<variant>`, or just the variant
    /// when no closed form is attached.
    pub fn csv_row(&self) -> String {
        let (closed, label) = match self.closed_form {
            Some((kind, v)) => (
                v.to_string(),
                format!("{}/{}", kind.label(), self.closed_form_variant.label()),
            ),
            None => (
                "none".to_string(),
                self.closed_form_variant.label().to_string(),
            ),
        };
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.n,
            self.delta,
            self.mode.label(),
            self.alpha_kind.label(),
            self.expectation,
            self.variance,
            self.chebyshev,
            closed,
            label
        )
    }
}
