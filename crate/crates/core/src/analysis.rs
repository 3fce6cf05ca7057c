//! Everything known about one graph, collected for reporting.

use std::fmt::Write as _;

use nalgebra::DVector;

use crate::conditions::{report_from_summary, ConditionReport};
use crate::error::Result;
use crate::format::sig;
use crate::graph::{degree_stats, DegreeStats, WeightedGraph};
use crate::perturbation::{
    classify_with_step, confirm_by_sweep, PerturbationReport, CONFIRM_ALPHAS, DEFAULT_FD_STEP,
};
use crate::spectral::{
    build_transition, dobrushin, dobrushin_bound, log_grid, mixing_time_bounds, spectrum,
    Convention, SpectralSummary, ALPHA_BAR_GRID,
};

#[derive(Debug, Clone, Copy)]
pub struct AnalysisOptions {
    pub alpha: f64,
    pub convention: Convention,
    pub epsilon: f64,
    pub fd_step: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            alpha: 0.0,
            convention: Convention::PaperLiteral,
            epsilon: 0.01,
            fd_step: DEFAULT_FD_STEP,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub options: AnalysisOptions,
    pub stats: DegreeStats,
    pub pi: DVector<f64>,
    /// Spectrum of `P(alpha)` at the requested jump rate.
    pub at_alpha: SpectralSummary,
    pub mixing: Option<(f64, f64)>,
    pub dobrushin: f64,
    pub dobrushin_bound: f64,
    /// Small-jump-rate analysis at `alpha = 0`.
    pub perturbation: PerturbationReport,
    pub conditions: ConditionReport,
    pub confirmed: Option<bool>,
}

pub fn analyze(g: &WeightedGraph, options: AnalysisOptions) -> Result<Analysis> {
    let ts = build_transition(g, options.alpha)?;
    let at_alpha = spectrum(&ts, options.convention)?;
    let pi_min = ts.pi.min();
    let mixing = if at_alpha.t_rel.is_finite() {
        Some(mixing_time_bounds(at_alpha.t_rel, pi_min, options.epsilon)?)
    } else {
        None
    };
    let stats = degree_stats(g);
    let perturbation = classify_with_step(g, options.convention, options.fd_step)?;
    let (lo, hi, count) = ALPHA_BAR_GRID;
    let conditions = report_from_summary(g, &perturbation.spectrum, &log_grid(lo, hi, count))?;
    let confirmed = confirm_by_sweep(g, &perturbation, &CONFIRM_ALPHAS)?;
    Ok(Analysis {
        options,
        dobrushin: dobrushin(&ts),
        dobrushin_bound: dobrushin_bound(options.alpha, stats.d_max),
        stats,
        pi: ts.pi,
        at_alpha,
        mixing,
        perturbation,
        conditions,
        confirmed,
    })
}

fn list(xs: impl IntoIterator<Item = f64>) -> String {
    let items: Vec<String> = xs.into_iter().map(sig).collect();
    format!("[{}]", items.join(", "))
}

fn verdict(holds: bool) -> &'static str {
    if holds {
        "holds"
    } else {
        "fails"
    }
}

impl Analysis {
    pub fn render(&self, name: &str) -> String {
        let mut out = String::new();
        let o = &self.options;
        let s = &self.at_alpha;
        let _ = writeln!(
            out,
            "graph: {name}  n={}  convention={}  alpha={}",
            self.stats.degrees.len(),
            o.convention,
            sig(o.alpha)
        );
        self.render_degrees(&mut out);
        let _ = writeln!(
            out,
            "stationary distribution pi(alpha): {}",
            list(self.pi.iter().copied())
        );
        let _ = writeln!(
            out,
            "eigenvalues of P(alpha): {}",
            list(s.eigenvalues.iter().copied())
        );
        let _ = writeln!(
            out,
            "lambda_star = {}  gap = {}  t_rel = {}",
            sig(s.lambda_star),
            sig(s.gap),
            sig(s.t_rel)
        );
        let _ = writeln!(
            out,
            "  multiplicity={} tied_sign={} near_unit={}",
            s.flags.multiplicity, s.flags.tied_sign, s.flags.near_unit
        );
        let _ = writeln!(out, "  v_star = {}", list(s.v_star.iter().copied()));
        match self.mixing {
            Some((lo, hi)) => {
                let _ = writeln!(
                    out,
                    "mixing time bounds (natural log, epsilon={}): lower = {}  upper = {}",
                    sig(o.epsilon),
                    sig(lo),
                    sig(hi)
                );
            }
            None => {
                let _ = writeln!(out, "mixing time bounds: n/a (infinite relaxation time)");
            }
        }
        let _ = writeln!(
            out,
            "dobrushin: delta = {}  1 - delta = {}  alpha/(d_max+alpha) = {}",
            sig(self.dobrushin),
            sig(1.0 - self.dobrushin),
            sig(self.dobrushin_bound)
        );
        self.render_perturbation(&mut out);
        self.render_conditions(&mut out);
        out
    }

    /// Degree statistics and the sufficient-condition ladder only.
    pub fn render_conditions_only(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "graph: {name}  n={}  convention={}",
            self.stats.degrees.len(),
            self.options.convention
        );
        self.render_degrees(&mut out);
        self.render_conditions(&mut out);
        out
    }

    fn render_degrees(&self, out: &mut String) {
        let st = &self.stats;
        let _ = writeln!(out, "degrees: {}", list(st.degrees.iter().copied()));
        let _ = writeln!(
            out,
            "  volume = {}  d_max = {}  d_mean = {}  d_second_moment = {}  snr = {}",
            sig(st.volume),
            sig(st.d_max),
            sig(st.d_mean),
            sig(st.d_second_moment),
            sig(st.snr)
        );
    }

    fn render_perturbation(&self, out: &mut String) {
        let p = &self.perturbation;
        let _ = writeln!(out, "small jump rate (alpha -> 0):");
        let _ = writeln!(out, "  lambda_star(0) = {}", sig(p.lambda_star));
        let _ = writeln!(
            out,
            "  numerator = {}  denominator = {}  lambda_first = {}",
            sig(p.numerator),
            sig(p.denominator),
            sig(p.lambda_first)
        );
        match (p.fd_estimate, p.fd_agreement) {
            (Some(fd), Some(err)) => {
                let _ = writeln!(
                    out,
                    "  finite difference = {}  relative error = {}",
                    sig(fd),
                    sig(err)
                );
            }
            _ => {
                let _ = writeln!(
                    out,
                    "  finite difference = n/a (branch could not be tracked)"
                );
            }
        }
        for b in &p.branches {
            let _ = writeln!(
                out,
                "  branch lambda = {}  derivative = {}  modulus rate = {}",
                sig(b.lambda),
                sig(b.first_order),
                sig(b.rate)
            );
        }
        let flags = p.flags.labels();
        let _ = writeln!(
            out,
            "  classification: {}  margin = {}  flags = {}",
            p.classification,
            sig(p.margin),
            if flags.is_empty() { "-" } else { &flags }
        );
        let confirmed = match self.confirmed {
            Some(true) => "confirmed",
            Some(false) => "NOT confirmed",
            None => "n/a",
        };
        let alphas: Vec<String> = CONFIRM_ALPHAS.iter().map(|a| sig(*a)).collect();
        let _ = writeln!(
            out,
            "  sweep check at alpha in {{{}}}: {confirmed}",
            alphas.join(", ")
        );
    }

    fn render_conditions(&self, out: &mut String) {
        let c = &self.conditions;
        let _ = writeln!(out, "sufficient conditions (gamma = {}):", sig(c.gamma));
        let row = |out: &mut String, name: &str, desc: &str, threshold: f64, holds: bool| {
            let _ = writeln!(
                out,
                "  {name:<11} {desc:<28} threshold = {:<16} {}",
                sig(threshold),
                verdict(holds)
            );
        };
        row(out, "cor1", "gamma < 1/n", c.cor1.threshold, c.cor1.holds);
        match c.cor2 {
            Some(s) => {
                row(
                    out,
                    "cor2",
                    "gamma < min(#neg,#pos)/n",
                    s.verdict.threshold,
                    s.verdict.holds,
                );
                let _ = writeln!(out, "  {:<11} mu = {}", "", sig(s.mu));
            }
            None => {
                let _ = writeln!(out, "  cor2        n/a (eigenvector vanishes)");
            }
        }
        row(
            out,
            "thm2_sharp",
            "gamma < snr",
            c.thm2_sharp.threshold,
            c.thm2_sharp.holds,
        );
        row(
            out,
            "thm2_paper",
            "gamma < 4 snr",
            c.thm2_paper.threshold,
            c.thm2_paper.holds,
        );
        row(
            out,
            "cor4_sharp",
            "gamma < d_mean/d_max",
            c.cor4_sharp.threshold,
            c.cor4_sharp.holds,
        );
        row(
            out,
            "cor4_paper",
            "gamma < 4 d_mean/d_max",
            c.cor4_paper.threshold,
            c.cor4_paper.holds,
        );
        match c.nand_s {
            Some(n) => {
                let _ = writeln!(
                    out,
                    "  nand_s      (1/n)(1'v)^2 = {} vs lambda v'v = {}: {}",
                    sig(n.lhs),
                    sig(n.rhs),
                    verdict(n.holds)
                );
                let _ = writeln!(
                    out,
                    "  {:<11} 1 - lambda = {} vs v'L_K v/(n v'v) = {}",
                    "",
                    sig(n.laplacian_lhs),
                    sig(n.laplacian_rhs)
                );
            }
            None => {
                let _ = writeln!(out, "  nand_s      n/a (lambda_star <= 0)");
            }
        }
        let _ = writeln!(
            out,
            "  rayleigh    v'L_K v/(n v'v) = {}  floor = {}",
            sig(c.rayleigh_value),
            sig(c.rayleigh_floor)
        );
        let searched = c
            .alpha_bar
            .searched
            .map(sig)
            .unwrap_or_else(|| "none on grid".into());
        let _ = writeln!(
            out,
            "  alpha_bar   closed form = {}  searched = {}",
            sig(c.alpha_bar.closed_form),
            searched
        );
        if c.violations.is_empty() {
            let _ = writeln!(out, "  consistency: ok");
        } else {
            for v in &c.violations {
                let _ = writeln!(out, "  consistency VIOLATION: {v}");
            }
        }
    }
}
