//! One-call analysis: picks the cheapest method that applies to the
//! problem's class and cross-checks it against the others that fit within
//! the limits.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::optlen::{
    cycle_decomposition_length, optimal_length_minrank, reduce_unicast_uniprior,
    reduce_uniprior_unicast, CycleDecomposition, ReductionTrace,
};
use crate::problem::{IndexCodingProblem, ProblemClass};
use crate::Limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Cycle,
    StagedReduction,
    Minrank,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Cycle => "cycle",
            Method::StagedReduction => "staged-reduction",
            Method::Minrank => "minrank",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub messages: usize,
    pub receivers: usize,
    pub class: ProblemClass,
    pub c_opt: usize,
    /// Distinct row spaces of minimum-rank fitting matrices; `None` when the
    /// fitting-matrix search was not run.
    pub mu: Option<usize>,
    pub method: Method,
    /// Every method that ran, with the length it found.
    pub cross_checks: Vec<(Method, usize)>,
    pub dropped_messages: Vec<usize>,
    pub cycles: Option<CycleDecomposition>,
    pub trace: Option<ReductionTrace>,
    pub warnings: Vec<String>,
}

pub fn analyze(p: &IndexCodingProblem, limits: &Limits) -> Result<AnalysisReport> {
    let class = p.classify();
    let mut checks = Vec::new();
    let mut cycles = None;
    let mut trace = None;
    let mut warnings = p.warnings();

    if class.single_unicast && class.single_uniprior {
        let cd = cycle_decomposition_length(p)?;
        checks.push((Method::Cycle, cd.c_opt));
        cycles = Some(cd);
    }
    if class.single_unicast && class.uniprior {
        let t = reduce_unicast_uniprior(p)?;
        checks.push((Method::StagedReduction, t.c_total));
        trace = Some(t);
    } else if class.single_uniprior && class.unicast {
        let t = reduce_uniprior_unicast(p)?;
        checks.push((Method::StagedReduction, t.c_total));
        trace = Some(t);
    }

    let mut mu = None;
    match optimal_length_minrank(p, limits) {
        Ok(m) => {
            checks.push((Method::Minrank, m.c_opt));
            mu = Some(m.mu);
        }
        Err(e @ Error::CapExceeded { .. }) if !checks.is_empty() => {
            log::info!("skipping minrank cross-check: {e}");
            warnings.push(format!("minrank cross-check skipped: {e}"));
        }
        Err(e) => return Err(e),
    }

    let (method, c_opt) = checks[0];
    if let Some(&(other, len)) = checks.iter().find(|c| c.1 != c_opt) {
        return Err(Error::Inconsistent(format!(
            "{method} gives length {c_opt} but {other} gives {len}"
        )));
    }

    Ok(AnalysisReport {
        messages: p.messages(),
        receivers: p.receivers().len(),
        class,
        c_opt,
        mu,
        method,
        cross_checks: checks,
        dropped_messages: p.unwanted_messages(),
        cycles,
        trace,
        warnings,
    })
}
