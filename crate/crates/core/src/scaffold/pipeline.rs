use serde::{Deserialize, Serialize};

use super::{
    build_qs, chart_analysis, cox_presentation, fiber_avoidance, hypersurface_from_scaffolding,
    normal_fan, perturbation_family, section_monomials, ChartReport, CoxPolynomial, CoxPresentation,
    Fan, FiberVerdict, Hypersurface, ScaffoldError, Scaffolding,
};
use crate::lattice::{HalfspaceSystem, IntMat, IntVec};
use crate::param::ParamPoly;

/// A scaffolding plus run options, as read from JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaffoldInput {
    #[serde(flatten)]
    pub scaffolding: Scaffolding,
    /// Rows of a preferred class-group basis for the weights.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_basis: Option<Vec<IntVec>>,
    /// Variables whose common zero locus should miss every fibre.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avoid: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub forced_zero: Vec<String>,
    pub verdict: FiberVerdict,
    pub witness_names: Vec<String>,
}

/// Everything the Laurent inversion pipeline produces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScaffoldRun {
    pub hull_matches_target: Option<bool>,
    pub qs: HalfspaceSystem,
    pub fan: Fan,
    pub cox: CoxPresentation,
    pub hypersurface: Hypersurface,
    pub anticanonical_class: IntVec,
    pub sections: Vec<CoxPolynomial>,
    pub family: CoxPolynomial,
    pub charts: Vec<ChartReport>,
    pub fiber: Option<FiberReport>,
}

impl ScaffoldInput {
    pub fn new(scaffolding: Scaffolding) -> Self {
        ScaffoldInput {
            scaffolding,
            class_basis: None,
            avoid: None,
        }
    }

    /// The Cox presentation, in the requested class basis if any.
    pub fn cox(&self) -> Result<CoxPresentation, ScaffoldError> {
        let s = &self.scaffolding;
        let fan = normal_fan(&build_qs(s)?)?;
        let cox = cox_presentation(&fan, &fan.ray_labels(&s.labels()))?;
        self.rebase(cox)
    }

    fn rebase(&self, cox: CoxPresentation) -> Result<CoxPresentation, ScaffoldError> {
        match &self.class_basis {
            Some(rows) => cox.with_class_basis(&IntMat::from_rows_with_cols(rows, cox.nvars())?),
            None => Ok(cox),
        }
    }
}

pub fn run_scaffolding(input: &ScaffoldInput) -> Result<ScaffoldRun, ScaffoldError> {
    let s = &input.scaffolding;
    let hull_matches_target = s.hull_matches_target()?;
    let qs = build_qs(s)?;
    let fan = normal_fan(&qs)?;
    let cox = input.rebase(cox_presentation(&fan, &fan.ray_labels(&s.labels()))?)?;
    let hypersurface = hypersurface_from_scaffolding(s, &cox)?;
    let sections = section_monomials(&cox, &hypersurface.class)?
        .into_iter()
        .map(|e| {
            let mut p = CoxPolynomial::new(cox.names.clone());
            p.push(e, ParamPoly::one());
            p
        })
        .collect();
    let family = perturbation_family(&cox, &hypersurface)?;
    let charts = chart_analysis(&cox, &family)?;
    let fiber = match &input.avoid {
        None => None,
        Some(names) => {
            let forced = names
                .iter()
                .map(|n| {
                    cox.var_index(n)
                        .ok_or_else(|| ScaffoldError::VariableMismatch(format!("unknown variable {n}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let verdict = fiber_avoidance(&cox, &family, &forced)?;
            let witness_names = match &verdict {
                FiberVerdict::Verified => Vec::new(),
                FiberVerdict::Inconclusive(w) => w.iter().map(|&i| cox.names[i].clone()).collect(),
            };
            Some(FiberReport {
                forced_zero: names.clone(),
                verdict,
                witness_names,
            })
        }
    };
    Ok(ScaffoldRun {
        hull_matches_target,
        anticanonical_class: cox.anticanonical_class(),
        qs,
        fan,
        cox,
        hypersurface,
        sections,
        family,
        charts,
        fiber,
    })
}
