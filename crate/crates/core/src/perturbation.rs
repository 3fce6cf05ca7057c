//! First-order behaviour of the governing eigenvalue at `alpha = 0`.
//!
//! Writing `P(alpha) v = lambda v` as the pencil
//! `(A + (alpha/n) 1 1^T) v = lambda (D + alpha I) v` and expanding to first
//! order gives
//!
//! ```text
//! lambda'(0) = [ (1/n) (1^T v)^2 - lambda v^T v ] / (v^T D v)
//! ```
//!
//! for a simple eigenpair of `D^{-1} A`. A small jump rate shortens the
//! relaxation time exactly when it shrinks `|lambda_star|`.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::linalg::symmetric_eigen;
use crate::spectral::{
    build_transition, gap_at, spectrum, track_branch, Convention, SpectralSummary, TOL_UNIT,
};

/// `|lambda_star|` at or below this is handled as the zero case.
pub const TOL_SIGN: f64 = 1e-9;
/// First-order rates of `|lambda|` at or below this are treated as zero.
pub const TOL_RATE: f64 = 1e-9;
pub const DEFAULT_FD_STEP: f64 = 1e-5;
/// Jump rates used to confirm a classification on the actual spectrum.
pub const CONFIRM_ALPHAS: [f64; 2] = [1e-3, 1e-2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrder {
    pub numerator: f64,
    pub denominator: f64,
    pub value: f64,
}

pub fn first_order_terms(
    g: &WeightedGraph,
    lambda_star: f64,
    v: &DVector<f64>,
) -> Result<FirstOrder> {
    let n = g.n();
    if v.len() != n {
        return Err(Error::InvalidParameter(format!(
            "eigenvector has {} entries, graph has {n} vertices",
            v.len()
        )));
    }
    let sum = v.sum();
    let numerator = sum * sum / n as f64 - lambda_star * v.norm_squared();
    let denominator: f64 = g
        .degrees()
        .iter()
        .zip(v.iter())
        .map(|(d, x)| d * x * x)
        .sum();
    if !(denominator > 0.0) {
        return Err(Error::InvalidParameter(
            "eigenvector must be nonzero".into(),
        ));
    }
    Ok(FirstOrder {
        numerator,
        denominator,
        value: numerator / denominator,
    })
}

/// Derivative of a simple eigenvalue branch of `P(alpha)` at `alpha = 0`.
/// Invariant under rescaling of `v`.
pub fn lambda_first_order(g: &WeightedGraph, lambda_star: f64, v: &DVector<f64>) -> Result<f64> {
    Ok(first_order_terms(g, lambda_star, v)?.value)
}

/// Branch derivatives for a possibly repeated eigenvalue: the eigenvalues of
/// `V^T ((1/n) 1 1^T - lambda I) V` where the columns of `V` span the
/// eigenspace and satisfy `V^T D V = I`. Returned in ascending order.
pub fn degenerate_first_order(
    g: &WeightedGraph,
    lambda_star: f64,
    basis: &DMatrix<f64>,
) -> Result<Vec<f64>> {
    let n = g.n();
    let k = basis.ncols();
    if basis.nrows() != n || k == 0 {
        return Err(Error::InvalidBasis(format!(
            "expected an {n}-row basis with at least one column"
        )));
    }
    let d = g.degrees();
    let d_basis = DMatrix::from_fn(n, k, |i, j| d[i] * basis[(i, j)]);
    let gram = basis.transpose() * &d_basis;
    let gram_err = (gram - DMatrix::identity(k, k)).amax();
    if gram_err > 1e-10 {
        return Err(Error::InvalidBasis(format!(
            "columns are not D-orthonormal (error {gram_err:e})"
        )));
    }
    let residual = (g.adjacency() * basis - d_basis * lambda_star).amax();
    let scale = d.iter().copied().fold(1.0, f64::max);
    if residual > 1e-8 * scale {
        return Err(Error::InvalidBasis(format!(
            "columns do not lie in the eigenspace of {lambda_star} (residual {residual:e})"
        )));
    }
    let sums = basis.row_sum();
    let reduced = DMatrix::from_fn(k, k, |i, j| sums[i] * sums[j] / n as f64)
        - basis.transpose() * basis * lambda_star;
    let mut values = symmetric_eigen(&reduced)?.values;
    values.reverse();
    Ok(values)
}

/// One-sided second-order estimate `(-3 l(0) + 4 l(h/2) - l(h)) / h` of the
/// branch derivative, following the branch through `h/2` and `h`.
pub fn finite_difference_derivative(
    g: &WeightedGraph,
    lambda_star: f64,
    v_star: &DVector<f64>,
    h: f64,
) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "step must be positive, got {h}"
        )));
    }
    let branch = track_branch(g, &[0.0, 0.5 * h, h], v_star)?;
    Ok((-3.0 * lambda_star + 4.0 * branch[1].lambda - branch[2].lambda) / h)
}

/// `sum_{i<j} (v_i - v_j)^2`, over unordered pairs.
pub fn pair_sum(v: &DVector<f64>) -> f64 {
    let mut s = 0.0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            s += (v[i] - v[j]).powi(2);
        }
    }
    s
}

/// `v^T L_K v` with `L_K = n I - 1 1^T`, the Laplacian of the complete graph.
pub fn complete_laplacian_form(v: &DVector<f64>) -> f64 {
    v.len() as f64 * v.norm_squared() - v.sum().powi(2)
}

/// `v^T L_K v / (n v^T v)`.
pub fn laplacian_rayleigh(v: &DVector<f64>) -> f64 {
    complete_laplacian_form(v) / (v.len() as f64 * v.norm_squared())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NandS {
    /// `(1/n)(1^T v)^2 < lambda v^T v`.
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    /// `1 - lambda`, which is the gap when `lambda > 0`.
    pub laplacian_lhs: f64,
    /// `v^T L_K v / (n v^T v)`.
    pub laplacian_rhs: f64,
    /// `sum_{i<j} (v_i - v_j)^2 / (n v^T v)`; equal to `laplacian_rhs`.
    pub pair_sum_rhs: f64,
    /// The same condition decided through the Laplacian form.
    pub holds_laplacian: bool,
}

/// The necessary and sufficient condition for a small jump rate to shorten
/// the relaxation time when `lambda_star > 0`.
pub fn nand_s_check(lambda_star: f64, v_star: &DVector<f64>) -> Result<NandS> {
    if !(lambda_star > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "condition is only defined for a positive eigenvalue, got {lambda_star}"
        )));
    }
    let n = v_star.len() as f64;
    let norm_sq = v_star.norm_squared();
    if norm_sq == 0.0 {
        return Err(Error::InvalidParameter(
            "eigenvector must be nonzero".into(),
        ));
    }
    let lhs = v_star.sum().powi(2) / n;
    let rhs = lambda_star * norm_sq;
    let laplacian_lhs = 1.0 - lambda_star;
    let laplacian_rhs = laplacian_rayleigh(v_star);
    Ok(NandS {
        holds: lhs < rhs,
        lhs,
        rhs,
        laplacian_lhs,
        laplacian_rhs,
        pair_sum_rhs: pair_sum(v_star) / (n * norm_sq),
        holds_laplacian: laplacian_lhs < laplacian_rhs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    /// The relaxation time decreases for all small enough `alpha > 0`.
    Improves,
    /// The relaxation time increases for all small enough `alpha > 0`.
    Worsens,
    /// The first-order rate of `|lambda_star|` vanishes; undecided at this order.
    Stationary,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Improves => "IMPROVES",
            Classification::Worsens => "WORSENS",
            Classification::Stationary => "STATIONARY",
        })
    }
}

/// First-order rate of `|lambda(alpha)|` for a branch leaving `lambda`
/// with slope `first_order`. In the zero band the modulus grows as
/// `alpha |first_order|`.
pub fn modulus_rate(lambda: f64, first_order: f64) -> f64 {
    if lambda.abs() <= TOL_SIGN {
        first_order.abs()
    } else {
        lambda.signum() * first_order
    }
}

pub fn classify_rate(rate: f64) -> Classification {
    if rate > TOL_RATE {
        Classification::Worsens
    } else if rate < -TOL_RATE {
        Classification::Improves
    } else {
        Classification::Stationary
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReportFlags {
    /// `lambda_star` is repeated; classified from the worst branch.
    pub degenerate: bool,
    /// `+|lambda_star|` and `-|lambda_star|` both occur; worst side governs.
    pub tied: bool,
    /// `|lambda_star| <= TOL_SIGN`.
    pub zero_case: bool,
    /// Paper-literal convention on a graph with eigenvalue -1: the excluded
    /// eigenvalue re-enters for any `alpha > 0`, so the comparison is not
    /// continuous at zero.
    pub bipartite_artifact: bool,
}

impl ReportFlags {
    /// `|`-separated flag names, empty when none are set.
    pub fn labels(&self) -> String {
        let mut out = Vec::new();
        if self.degenerate {
            out.push("DEGENERATE_MULTI");
        }
        if self.tied {
            out.push("TIED");
        }
        if self.zero_case {
            out.push("ZERO");
        }
        if self.bipartite_artifact {
            out.push("BIPARTITE_ARTIFACT");
        }
        out.join("|")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    /// Eigenvalue at `alpha = 0`.
    pub lambda: f64,
    /// First-order derivative of the eigenvalue.
    pub first_order: f64,
    /// First-order derivative of its modulus.
    pub rate: f64,
}

#[derive(Debug, Clone)]
pub struct PerturbationReport {
    pub convention: Convention,
    pub lambda_star: f64,
    pub numerator: f64,
    pub denominator: f64,
    /// Derivative of the branch with the largest modulus rate.
    pub lambda_first: f64,
    pub fd_estimate: Option<f64>,
    /// `|fd - formula| / max(1, |formula|)` against the nearest branch.
    pub fd_agreement: Option<f64>,
    pub classification: Classification,
    /// Minus the worst first-order rate of `|lambda_star|`; negative for
    /// counterexamples, small for near misses.
    pub margin: f64,
    pub branches: Vec<Branch>,
    pub flags: ReportFlags,
    pub spectrum: SpectralSummary,
}

impl PerturbationReport {
    pub fn is_simple(&self) -> bool {
        !self.flags.degenerate
    }

    /// A worsening that is not an artifact of the paper-literal convention.
    pub fn is_counterexample_candidate(&self) -> bool {
        self.classification == Classification::Worsens && !self.flags.bipartite_artifact
    }
}

pub fn classify_small_alpha(
    g: &WeightedGraph,
    convention: Convention,
) -> Result<PerturbationReport> {
    classify_with_step(g, convention, DEFAULT_FD_STEP)
}

pub fn classify_with_step(
    g: &WeightedGraph,
    convention: Convention,
    h: f64,
) -> Result<PerturbationReport> {
    let summary = spectrum(&build_transition(g, 0.0)?, convention)?;
    let values = &summary.eigenvalues;
    let lambda_star = summary.lambda_star;
    let zero_case = lambda_star.abs() <= TOL_SIGN;

    let mut groups: [Vec<usize>; 3] = Default::default();
    for &i in &summary.level {
        let slot = if zero_case || values[i].abs() <= TOL_SIGN {
            0
        } else if values[i] > 0.0 {
            1
        } else {
            2
        };
        groups[slot].push(i);
    }

    let mut branches = Vec::new();
    for (slot, group) in groups.iter().enumerate() {
        if group.is_empty() {
            continue;
        }
        let lambda = group.iter().map(|&i| values[i]).sum::<f64>() / group.len() as f64;
        let derivatives = if group.len() == 1 {
            vec![lambda_first_order(
                g,
                lambda,
                &summary.system.basis.column(group[0]).into_owned(),
            )?]
        } else {
            degenerate_first_order(g, lambda, &summary.system.columns(group))?
        };
        for first_order in derivatives {
            let rate = if slot == 0 {
                first_order.abs()
            } else {
                modulus_rate(lambda, first_order)
            };
            branches.push(Branch {
                lambda,
                first_order,
                rate,
            });
        }
    }
    let worst = branches
        .iter()
        .copied()
        .max_by(|a, b| a.rate.total_cmp(&b.rate))
        .expect("selected eigenvalue has at least one branch");
    let classification = classify_rate(worst.rate);

    let terms = first_order_terms(g, lambda_star, &summary.v_star)?;
    let fd_estimate = finite_difference_derivative(g, lambda_star, &summary.v_star, h).ok();
    let fd_agreement = fd_estimate.map(|fd| {
        branches
            .iter()
            .filter(|b| (b.lambda - lambda_star).abs() <= TOL_SIGN)
            .map(|b| (fd - b.first_order).abs() / b.first_order.abs().max(1.0))
            .fold(f64::INFINITY, f64::min)
    });

    let flags = ReportFlags {
        degenerate: summary.flags.degenerate(),
        tied: summary.flags.tied_sign,
        zero_case,
        bipartite_artifact: convention == Convention::PaperLiteral
            && values.iter().any(|&l| (l + 1.0).abs() <= TOL_UNIT),
    };
    Ok(PerturbationReport {
        convention,
        lambda_star,
        numerator: terms.numerator,
        denominator: terms.denominator,
        lambda_first: worst.first_order,
        fd_estimate,
        fd_agreement,
        classification,
        margin: -worst.rate,
        branches,
        flags,
        spectrum: summary,
    })
}

/// Checks a classification against the gap of `P(alpha)` itself at each of
/// the given jump rates. `Stationary` has nothing to confirm.
pub fn confirm_by_sweep(
    g: &WeightedGraph,
    report: &PerturbationReport,
    alphas: &[f64],
) -> Result<Option<bool>> {
    let gap0 = report.spectrum.gap;
    let convention = report.convention;
    let confirmed = match report.classification {
        Classification::Stationary => return Ok(None),
        Classification::Worsens => {
            let mut all = true;
            for &a in alphas {
                all &= gap_at(g, a, convention)? < gap0;
            }
            all
        }
        Classification::Improves => {
            let mut all = true;
            for &a in alphas {
                all &= gap_at(g, a, convention)? > gap0;
            }
            all
        }
    };
    Ok(Some(confirmed))
}
