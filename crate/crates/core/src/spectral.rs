//! Transition matrices of the random walk with jumps and their spectra.
//!
//! Adding a complete graph of total weight `alpha` to `A` gives
//! `A(alpha) = A + (alpha/n) 1 1^T` with degrees `d_i + alpha`. The chain
//! `P(alpha) = D(alpha)^{-1} A(alpha)` is reversible, so its spectrum is read
//! off the symmetric matrix `D(alpha)^{-1/2} A(alpha) D(alpha)^{-1/2}`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::{is_connected, WeightedGraph};
use crate::linalg::{sign_normalize, symmetric_eigen};

/// Eigenvalues this close to +1 or -1 count as unit-modulus.
pub const TOL_UNIT: f64 = 1e-9;
/// Two moduli this close are treated as tied.
pub const TOL_TIE: f64 = 1e-9;
/// Gaps within this of 0 or 1 are snapped to 0 or 1.
pub const GAP_FLOOR: f64 = 1e-12;

/// How the governing eigenvalue `lambda_star` is selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    /// Second largest eigenvalue modulus: only the Perron eigenvalue is
    /// excluded, so periodic chains have zero gap.
    Slem,
    /// Exclude every eigenvalue equal to +1 or -1, then take the largest
    /// modulus among the rest.
    PaperLiteral,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Slem => "slem",
            Convention::PaperLiteral => "paper",
        })
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "slem" => Ok(Convention::Slem),
            "paper" | "paper-literal" => Ok(Convention::PaperLiteral),
            other => Err(Error::InvalidParameter(format!(
                "unknown convention {other:?} (expected slem or paper)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TransitionSystem {
    pub alpha: f64,
    /// `d_i + alpha`.
    pub degrees: Vec<f64>,
    /// `A(alpha)`.
    pub adjacency: DMatrix<f64>,
    pub p: DMatrix<f64>,
    pub pi: DVector<f64>,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "jump rate must be finite and non-negative, got {alpha}"
        )))
    }
}

pub fn build_transition(g: &WeightedGraph, alpha: f64) -> Result<TransitionSystem> {
    check_alpha(alpha)?;
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let jump = alpha / n as f64;
    let adjacency = g.adjacency().add_scalar(jump);
    let degrees: Vec<f64> = g.degrees().iter().map(|d| d + alpha).collect();
    let p = DMatrix::from_fn(n, n, |i, j| adjacency[(i, j)] / degrees[i]);
    let total: f64 = degrees.iter().sum();
    let pi = DVector::from_iterator(n, degrees.iter().map(|d| d / total));
    Ok(TransitionSystem {
        alpha,
        degrees,
        adjacency,
        p,
        pi,
    })
}

/// `P(alpha)` assembled as `(D + alpha I)^{-1} D P + (D + alpha I)^{-1} alpha 1 (1/n) 1^T`,
/// i.e. a degree-dependent mixture of the plain walk and a uniform restart.
pub fn split_form(g: &WeightedGraph, alpha: f64) -> Result<DMatrix<f64>> {
    check_alpha(alpha)?;
    let n = g.n();
    let d = g.degrees();
    let a = g.adjacency();
    Ok(DMatrix::from_fn(n, n, |i, j| {
        let stay = d[i] / (d[i] + alpha);
        let restart = alpha / (d[i] + alpha);
        stay * (a[(i, j)] / d[i]) + restart / n as f64
    }))
}

/// All eigenpairs of `P(alpha)`.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub alpha: f64,
    /// Descending.
    pub values: Vec<f64>,
    /// Right eigenvectors of `P(alpha)` as columns, orthonormal in the
    /// `D(alpha)`-weighted inner product.
    pub basis: DMatrix<f64>,
    /// `d_i + alpha`.
    pub weights: Vec<f64>,
}

impl EigenSystem {
    pub fn weighted_dot(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        self.weights
            .iter()
            .zip(x.iter().zip(y.iter()))
            .map(|(w, (a, b))| w * a * b)
            .sum()
    }

    /// Columns of the basis for the given eigen-indices.
    pub fn columns(&self, indices: &[usize]) -> DMatrix<f64> {
        DMatrix::from_columns(
            &indices
                .iter()
                .map(|&i| self.basis.column(i).into_owned())
                .collect::<Vec<_>>(),
        )
    }
}

pub fn eigensystem(ts: &TransitionSystem) -> Result<EigenSystem> {
    let n = ts.degrees.len();
    let inv_sqrt: Vec<f64> = ts.degrees.iter().map(|d| 1.0 / d.sqrt()).collect();
    let sym = DMatrix::from_fn(n, n, |i, j| {
        inv_sqrt[i] * ts.adjacency[(i, j)] * inv_sqrt[j]
    });
    let eig = symmetric_eigen(&sym)?;
    let mut basis = eig.vectors;
    for (i, s) in inv_sqrt.iter().enumerate() {
        basis.row_mut(i).scale_mut(*s);
    }
    Ok(EigenSystem {
        alpha: ts.alpha,
        values: eig.values,
        basis,
        weights: ts.degrees.clone(),
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpectralFlags {
    /// Number of candidate eigenvalues equal to `lambda_star` within tolerance.
    pub multiplicity: usize,
    /// Both `+|lambda_star|` and `-|lambda_star|` occur.
    pub tied_sign: bool,
    /// Non-Perron eigenvalues within tolerance of +1 or -1.
    pub near_unit: usize,
}

impl SpectralFlags {
    pub fn degenerate(&self) -> bool {
        self.multiplicity > 1
    }
}

#[derive(Debug, Clone)]
pub struct SpectralSummary {
    pub alpha: f64,
    pub convention: Convention,
    pub eigenvalues: Vec<f64>,
    pub lambda_star: f64,
    /// Index of `lambda_star` in `eigenvalues`.
    pub star_index: usize,
    /// Unit Euclidean norm, largest entry positive.
    pub v_star: DVector<f64>,
    pub gap: f64,
    pub t_rel: f64,
    pub flags: SpectralFlags,
    /// Eigen-indices of every candidate with `|lambda| = |lambda_star|`
    /// within [`TOL_TIE`], both signs.
    pub level: Vec<usize>,
    pub system: EigenSystem,
}

/// Candidate indices (Perron index 0 excluded) under a convention.
fn candidates(values: &[f64], convention: Convention) -> Vec<usize> {
    (1..values.len())
        .filter(|&i| match convention {
            Convention::Slem => true,
            Convention::PaperLiteral => {
                (values[i] - 1.0).abs() > TOL_UNIT && (values[i] + 1.0).abs() > TOL_UNIT
            }
        })
        .collect()
}

pub fn summarize(system: EigenSystem, convention: Convention) -> Result<SpectralSummary> {
    let values = &system.values;
    let cands = candidates(values, convention);
    let top = cands
        .iter()
        .map(|&i| values[i].abs())
        .fold(f64::NEG_INFINITY, f64::max);
    // descending order puts the positive member of a sign tie first
    let star_index = *cands
        .iter()
        .find(|&&i| values[i].abs() >= top - TOL_TIE)
        .ok_or(Error::NoCandidate)?;
    let lambda_star = values[star_index];
    let level: Vec<usize> = cands
        .iter()
        .copied()
        .filter(|&i| (values[i].abs() - lambda_star.abs()).abs() <= TOL_TIE)
        .collect();
    let multiplicity = level
        .iter()
        .filter(|&&i| (values[i] - lambda_star).abs() <= TOL_TIE)
        .count();
    let tied_sign = lambda_star.abs() > TOL_TIE
        && level
            .iter()
            .any(|&i| (values[i] + lambda_star).abs() <= TOL_TIE);
    let near_unit = (1..values.len())
        .filter(|&i| (values[i].abs() - 1.0).abs() <= TOL_UNIT)
        .count();

    let mut v_star = system.basis.column(star_index).into_owned();
    v_star.normalize_mut();
    sign_normalize(&mut v_star);
    let (gap, t_rel) = relaxation(lambda_star);
    Ok(SpectralSummary {
        alpha: system.alpha,
        convention,
        eigenvalues: values.clone(),
        lambda_star,
        star_index,
        v_star,
        gap,
        t_rel,
        flags: SpectralFlags {
            multiplicity,
            tied_sign,
            near_unit,
        },
        level,
        system,
    })
}

pub fn spectrum(ts: &TransitionSystem, convention: Convention) -> Result<SpectralSummary> {
    summarize(eigensystem(ts)?, convention)
}

/// Spectral gap and relaxation time for a selected eigenvalue.
pub fn relaxation(lambda_star: f64) -> (f64, f64) {
    let modulus = lambda_star.abs();
    let gap = if modulus <= GAP_FLOOR {
        1.0
    } else if 1.0 - modulus <= GAP_FLOOR {
        0.0
    } else {
        1.0 - modulus
    };
    let t_rel = if gap == 0.0 { f64::INFINITY } else { 1.0 / gap };
    (gap, t_rel)
}

/// Spectral gap of `P(alpha)` under a convention.
pub fn gap_at(g: &WeightedGraph, alpha: f64, convention: Convention) -> Result<f64> {
    Ok(spectrum(&build_transition(g, alpha)?, convention)?.gap)
}

/// Lower and upper bounds on the epsilon-mixing time from the relaxation
/// time, with natural logarithms.
pub fn mixing_time_bounds(t_rel: f64, pi_min: f64, epsilon: f64) -> Result<(f64, f64)> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1/2), got {epsilon}"
        )));
    }
    if !(pi_min > 0.0 && pi_min < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "pi_min must lie in (0, 1), got {pi_min}"
        )));
    }
    if !(t_rel.is_finite() && t_rel >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "relaxation time must be finite and at least 1, got {t_rel}"
        )));
    }
    let log_eps = (1.0 / epsilon).ln();
    let lower = (log_eps + 0.5f64.ln()) * (t_rel - 1.0);
    let upper = (log_eps + (1.0 / pi_min).ln()) * t_rel;
    Ok((lower, upper))
}

/// Dobrushin ergodic coefficient: the largest total-variation distance
/// between two rows of `P`.
pub fn dobrushin(ts: &TransitionSystem) -> f64 {
    let p = &ts.p;
    let n = p.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let tv: f64 = (0..n).map(|k| (p[(i, k)] - p[(j, k)]).abs()).sum();
            worst = worst.max(0.5 * tv);
        }
    }
    worst
}

/// The same coefficient as `1 - min_{i,j} sum_k min(p_ik, p_jk)`.
pub fn dobrushin_overlap_form(ts: &TransitionSystem) -> f64 {
    let p = &ts.p;
    let n = p.nrows();
    let mut least = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let overlap: f64 = (0..n).map(|k| p[(i, k)].min(p[(j, k)])).sum();
            least = least.min(overlap);
        }
    }
    1.0 - least
}

/// Lower bound `alpha / (d_max + alpha)` on the gap of `P(alpha)`.
pub fn dobrushin_bound(alpha: f64, d_max: f64) -> f64 {
    if alpha == 0.0 {
        0.0
    } else {
        alpha / (d_max + alpha)
    }
}

/// `count` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..count)
                .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
                .collect()
        }
    }
}

pub const ALPHA_BAR_GRID: (f64, f64, usize) = (1e-3, 1e3, 64);

/// Jump rates beyond which the gap is guaranteed (closed form) or observed
/// (grid search) to exceed the gap of the plain walk.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaBar {
    pub gap0: f64,
    /// `gap0 * d_max / (1 - gap0)`; infinite when `gap0 = 1`.
    pub closed_form: f64,
    /// Smallest grid point with a strictly larger gap.
    pub searched: Option<f64>,
}

pub fn alpha_bar(g: &WeightedGraph, convention: Convention, grid: &[f64]) -> Result<AlphaBar> {
    let gap0 = gap_at(g, 0.0, convention)?;
    let d_max = g.degrees().into_iter().fold(0.0, f64::max);
    let closed_form = if gap0 >= 1.0 {
        f64::INFINITY
    } else {
        gap0 * d_max / (1.0 - gap0)
    };
    let mut searched = None;
    for &alpha in grid {
        if gap_at(g, alpha, convention)? > gap0 {
            searched = Some(alpha);
            break;
        }
    }
    Ok(AlphaBar {
        gap0,
        closed_form,
        searched,
    })
}

#[derive(Debug, Clone)]
pub struct BranchPoint {
    pub alpha: f64,
    pub lambda: f64,
    /// Unit Euclidean norm, sign-aligned with the previous point.
    pub vector: DVector<f64>,
}

/// Groups consecutive eigenvalues (descending) closer than [`TOL_TIE`].
fn clusters(values: &[f64]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match out.last_mut() {
            Some(c) if values[*c.last().unwrap()] - v <= TOL_TIE => c.push(i),
            _ => out.push(vec![i]),
        }
    }
    out
}

/// Follows one eigen-branch across an ascending grid of jump rates by
/// maximal `D(alpha)`-weighted overlap with the previously tracked vector.
/// Degenerate eigenspaces are matched as a whole and the tracked vector is
/// projected into them.
pub fn track_branch(
    g: &WeightedGraph,
    alpha_grid: &[f64],
    v_ref: &DVector<f64>,
) -> Result<Vec<BranchPoint>> {
    if alpha_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter(
            "alpha grid must be ascending".into(),
        ));
    }
    if v_ref.len() != g.n() || v_ref.norm() == 0.0 {
        return Err(Error::InvalidParameter(
            "reference vector must be nonzero with one entry per vertex".into(),
        ));
    }
    let mut prev = v_ref.clone();
    let mut out = Vec::with_capacity(alpha_grid.len());
    for &alpha in alpha_grid {
        let es = eigensystem(&build_transition(g, alpha)?)?;
        let prev_norm = es.weighted_dot(&prev, &prev).sqrt();
        let mut best: Option<(f64, Vec<usize>, DVector<f64>)> = None;
        for cluster in clusters(&es.values) {
            let basis = es.columns(&cluster);
            let weighted_prev = DVector::from_iterator(
                prev.len(),
                prev.iter().zip(&es.weights).map(|(x, w)| x * w),
            );
            let coeffs = basis.transpose() * weighted_prev;
            let overlap = coeffs.norm() / prev_norm;
            if best.as_ref().is_none_or(|(o, _, _)| overlap > *o) {
                best = Some((overlap, cluster, basis * coeffs));
            }
        }
        let (overlap, cluster, mut vector) = best.expect("non-empty spectrum");
        if overlap < 0.5 {
            return Err(Error::BranchCrossing { alpha, overlap });
        }
        vector.normalize_mut();
        if vector.dot(&prev) < 0.0 {
            vector.neg_mut();
        }
        let lambda = cluster.iter().map(|&i| es.values[i]).sum::<f64>() / cluster.len() as f64;
        out.push(BranchPoint {
            alpha,
            lambda,
            vector: vector.clone(),
        });
        prev = vector;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::{complete, cycle, path, star, two_node};
    use approx::assert_relative_eq;

    #[test]
    fn path_row_and_stationary_law() {
        let g = path(3);
        let ts = build_transition(&g, 1.0).unwrap();
        assert_relative_eq!(ts.p[(0, 0)], 1.0 / 6.0, epsilon = 1e-15);
        assert_relative_eq!(ts.p[(0, 1)], 2.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(ts.p[(0, 2)], 1.0 / 6.0, epsilon = 1e-15);
        let expected = [2.0 / 7.0, 3.0 / 7.0, 2.0 / 7.0];
        for (p, e) in ts.pi.iter().zip(expected) {
            assert_relative_eq!(*p, e, epsilon = 1e-15);
        }
    }

    #[test]
    fn zero_alpha_is_simple_walk() {
        let g = two_node(4.0, 2.0, 1.0).unwrap();
        let ts = build_transition(&g, 0.0).unwrap();
        let a = g.adjacency();
        let d = g.degrees();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(ts.p[(i, j)], a[(i, j)] / d[i]);
            }
        }
    }

    #[test]
    fn rejects_negative_alpha_and_disconnected() {
        assert!(matches!(
            build_transition(&path(3), -0.1),
            Err(Error::InvalidParameter(_))
        ));
        let g = WeightedGraph::unweighted(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            build_transition(&g, 1.0),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn split_form_matches() {
        for alpha in [0.0, 0.3, 1.0, 7.5] {
            for g in [path(5), star(6), two_node(4.0, 2.0, 1.0).unwrap()] {
                let ts = build_transition(&g, alpha).unwrap();
                let split = split_form(&g, alpha).unwrap();
                assert!((ts.p.clone() - split).amax() <= 1e-14);
            }
        }
    }

    #[test]
    fn complete_graph_spectrum() {
        let g = complete(4);
        for conv in [Convention::Slem, Convention::PaperLiteral] {
            let s = spectrum(&build_transition(&g, 0.0).unwrap(), conv).unwrap();
            assert_relative_eq!(s.eigenvalues[0], 1.0, epsilon = 1e-12);
            for &l in &s.eigenvalues[1..] {
                assert_relative_eq!(l, -1.0 / 3.0, epsilon = 1e-12);
            }
            assert_relative_eq!(s.lambda_star, -1.0 / 3.0, epsilon = 1e-12);
            assert_relative_eq!(s.gap, 2.0 / 3.0, epsilon = 1e-12);
            assert_eq!(s.flags.multiplicity, 3);
        }
    }

    #[test]
    fn five_cycle_spectrum() {
        let s = spectrum(&build_transition(&cycle(5), 0.0).unwrap(), Convention::Slem).unwrap();
        let c1 = (2.0 * std::f64::consts::PI / 5.0).cos();
        let c2 = (4.0 * std::f64::consts::PI / 5.0).cos();
        let expected = [1.0, c1, c1, c2, c2];
        for (l, e) in s.eigenvalues.iter().zip(expected) {
            assert_relative_eq!(*l, e, epsilon = 1e-12);
        }
        assert_relative_eq!(s.lambda_star, -0.809016994374947, epsilon = 1e-12);
        assert_relative_eq!(s.gap, 0.190983005625053, epsilon = 1e-12);
        assert_eq!(s.flags.multiplicity, 2);
        assert!(s.flags.degenerate());
        assert!(!s.flags.tied_sign);
    }

    #[test]
    fn star_conventions_differ() {
        let ts = build_transition(&star(4), 0.0).unwrap();
        let slem = spectrum(&ts, Convention::Slem).unwrap();
        assert_relative_eq!(slem.lambda_star, -1.0, epsilon = 1e-12);
        assert_eq!(slem.gap, 0.0);
        assert!(slem.t_rel.is_infinite());
        assert_eq!(slem.flags.near_unit, 1);

        let paper = spectrum(&ts, Convention::PaperLiteral).unwrap();
        assert!(paper.lambda_star.abs() < 1e-12);
        assert_relative_eq!(paper.gap, 1.0, epsilon = 1e-12);
        assert_relative_eq!(paper.t_rel, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn sign_tie_on_path4() {
        let ts = build_transition(&path(4), 0.0).unwrap();
        let s = spectrum(&ts, Convention::PaperLiteral).unwrap();
        assert_relative_eq!(s.lambda_star, 0.5, epsilon = 1e-12);
        assert!(s.flags.tied_sign);
        assert_eq!(s.level.len(), 2);
    }

    #[test]
    fn k2_has_no_paper_candidate() {
        let ts = build_transition(&complete(2), 0.0).unwrap();
        assert!(matches!(
            spectrum(&ts, Convention::PaperLiteral),
            Err(Error::NoCandidate)
        ));
        let s = spectrum(&ts, Convention::Slem).unwrap();
        assert_relative_eq!(s.lambda_star, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn v_star_conventions() {
        let g = path(5);
        let ts = build_transition(&g, 0.0).unwrap();
        let s = spectrum(&ts, Convention::Slem).unwrap();
        assert_relative_eq!(s.v_star.norm(), 1.0, epsilon = 1e-14);
        let weighted: f64 = ts
            .degrees
            .iter()
            .zip(s.v_star.iter())
            .map(|(d, v)| d * v)
            .sum();
        assert!(weighted.abs() < 1e-9);
        let imax = s.v_star.iamax();
        assert!(s.v_star[imax] > 0.0);
    }

    #[test]
    fn relaxation_examples() {
        let (g, t) = relaxation(-1.0 / 3.0);
        assert_relative_eq!(g, 2.0 / 3.0);
        assert_relative_eq!(t, 1.5);
        assert_eq!(relaxation(0.0), (1.0, 1.0));
        let (g, t) = relaxation(-1.0);
        assert_eq!(g, 0.0);
        assert!(t.is_infinite());
    }

    #[test]
    fn mixing_bounds() {
        let (lo, hi) = mixing_time_bounds(10.0, 0.01, 0.01).unwrap();
        assert_relative_eq!(lo, 9.0 * (100f64.ln() - 2f64.ln()), epsilon = 1e-12);
        assert!((lo - 35.208).abs() < 1e-3);
        assert!((hi - 92.103).abs() < 1e-3);
        let (lo, _) = mixing_time_bounds(1.0, 0.2, 0.3).unwrap();
        assert_eq!(lo, 0.0);
        assert!(mixing_time_bounds(10.0, 0.01, 0.5).is_err());
        assert!(mixing_time_bounds(f64::INFINITY, 0.01, 0.1).is_err());
    }

    #[test]
    fn dobrushin_on_two_vertices() {
        let g = complete(2);
        let ts = build_transition(&g, 0.0).unwrap();
        assert_eq!(dobrushin(&ts), 1.0);
        for alpha in [0.1, 1.0, 3.0] {
            let ts = build_transition(&g, alpha).unwrap();
            assert_relative_eq!(dobrushin(&ts), 1.0 / (1.0 + alpha), epsilon = 1e-15);
        }
    }

    #[test]
    fn dobrushin_forms_agree() {
        for alpha in [0.0, 0.5, 2.0] {
            for g in [path(6), star(5), cycle(7)] {
                let ts = build_transition(&g, alpha).unwrap();
                assert!((dobrushin(&ts) - dobrushin_overlap_form(&ts)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn dobrushin_bound_values() {
        assert_eq!(dobrushin_bound(2.0, 6.0), 0.25);
        assert_eq!(dobrushin_bound(0.0, 6.0), 0.0);
        let grid = log_grid(1e-2, 1e4, 40);
        let bounds: Vec<f64> = grid.iter().map(|&a| dobrushin_bound(a, 5.0)).collect();
        assert!(bounds.windows(2).all(|w| w[1] > w[0]));
        assert!(*bounds.last().unwrap() > 0.99);
    }

    #[test]
    fn alpha_bar_cases() {
        let grid = log_grid(ALPHA_BAR_GRID.0, ALPHA_BAR_GRID.1, ALPHA_BAR_GRID.2);
        // regular: any positive rate helps
        let ab = alpha_bar(&cycle(5), Convention::PaperLiteral, &grid).unwrap();
        assert_eq!(ab.searched, Some(grid[0]));
        assert!(ab.searched.unwrap() <= ab.closed_form);
        // bipartite under slem: gap 0, first grid point
        let ab = alpha_bar(&star(5), Convention::Slem, &grid).unwrap();
        assert_eq!(ab.gap0, 0.0);
        assert_eq!(ab.closed_form, 0.0);
        assert_eq!(ab.searched, Some(grid[0]));
        // unit gap under paper convention
        let ab = alpha_bar(&star(5), Convention::PaperLiteral, &grid).unwrap();
        assert!(ab.closed_form.is_infinite());
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1e-3, 1e3, 64);
        assert_eq!(g.len(), 64);
        assert_relative_eq!(g[0], 1e-3, max_relative = 1e-12);
        assert_relative_eq!(g[63], 1e3, max_relative = 1e-12);
    }

    #[test]
    fn track_regular_branch() {
        let g = cycle(5);
        let s = spectrum(&build_transition(&g, 0.0).unwrap(), Convention::Slem).unwrap();
        let grid = [0.0, 0.25, 0.5, 1.0, 2.0];
        let branch = track_branch(&g, &grid, &s.v_star).unwrap();
        for pt in &branch {
            assert_relative_eq!(
                pt.lambda,
                2.0 / (2.0 + pt.alpha) * s.lambda_star,
                epsilon = 1e-12
            );
        }
        assert_relative_eq!(branch[3].lambda, -0.539344662916632, epsilon = 1e-12);
    }

    #[test]
    fn track_single_point() {
        let g = path(4);
        let s = spectrum(&build_transition(&g, 0.0).unwrap(), Convention::Slem).unwrap();
        let branch = track_branch(&g, &[0.0], &s.v_star).unwrap();
        assert_eq!(branch.len(), 1);
        assert_relative_eq!(branch[0].lambda, s.lambda_star, epsilon = 1e-14);
        assert!((branch[0].vector.clone() - &s.v_star).amax() < 1e-12);
    }

    #[test]
    fn track_rejects_descending_grid() {
        let g = path(4);
        let v = DVector::from_element(4, 1.0);
        assert!(track_branch(&g, &[1.0, 0.5], &v).is_err());
    }
}
