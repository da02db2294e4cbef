//! Laurent inversion: from a scaffolding on a Fano polygon to a toric ambient
//! space, its Cox presentation and the equation of the polygon's surface.

mod charts;
pub(crate) mod cox;
mod equation;
mod fan;
mod pipeline;

pub use charts::{chart_analysis, fiber_avoidance, AbelianQuotient, ChartReport, FiberVerdict};
pub use cox::{
    cox_presentation, expand_product_of_ideals, unstable_locus_equal, CoxPresentation, VarSet,
};
pub use equation::{
    hypersurface_from_scaffolding, perturbation_family, section_monomials, CoxPolynomial,
    Hypersurface,
};
pub use pipeline::{run_scaffolding, FiberReport, ScaffoldInput, ScaffoldRun};
pub use fan::{build_qs, normal_fan, Fan};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{vertices, Halfspace, HalfspaceSystem, IntMat, IntVec, LatticeError};
use crate::polygon::{LatticePolygon, PolygonError, PolygonJson};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScaffoldError {
    #[error("a scaffolding needs at least one strut")]
    NoStruts,
    #[error("duplicate strut name {0:?}")]
    DuplicateName(String),
    #[error("strut {name:?}: {what} has dimension {got}, expected {expected}")]
    BadDimension {
        name: String,
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("strut {0:?}: divisor is not nef (its moment polytope is empty or not a lattice polytope)")]
    NotNef(String),
    #[error("shape needs {expected} divisor names, got {got}")]
    BadNames { expected: usize, got: usize },
    #[error("a vertex of Q_S lies on {0} facets, so the normal fan is not simplicial")]
    NonSimplicial(usize),
    #[error("Q_S is unbounded")]
    Unbounded,
    #[error("the class group has torsion (invariant factors {0:?})")]
    Torsion(Vec<String>),
    #[error("the class basis is not related to the computed one by a unimodular change of basis")]
    BadClassBasis,
    #[error("theta(N) has corank {0} in the ambient lattice, expected 1")]
    Corank(usize),
    #[error("the shape divisors do not all pair positively with h")]
    ShapeSign,
    #[error("no strictly positive functional on the variable classes; sections are unbounded")]
    UnboundedSections,
    #[error("variable mismatch: {0}")]
    VariableMismatch(String),
    #[error("family is not homogeneous")]
    NotHomogeneous,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
}

/// A product of projective spaces `P^{n_1} x ... x P^{n_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeVariety {
    pub projective_dims: Vec<usize>,
    /// Names of the torus-invariant prime divisors, block by block.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisor_names: Option<Vec<String>>,
}

impl ShapeVariety {
    pub fn projective_line() -> Self {
        ShapeVariety {
            projective_dims: vec![1],
            divisor_names: None,
        }
    }

    /// Rank of the lattice on which the shape's torus acts via `rho*`.
    pub fn lattice_rank(&self) -> usize {
        self.projective_dims.iter().sum()
    }

    /// Rank of the torus-invariant divisor lattice.
    pub fn div_rank(&self) -> usize {
        self.projective_dims.iter().map(|n| n + 1).sum()
    }

    pub fn picard_rank(&self) -> usize {
        self.projective_dims.len()
    }

    pub fn names(&self) -> Vec<String> {
        match &self.divisor_names {
            Some(n) => n.clone(),
            None => (0..self.div_rank()).map(|i| format!("e{}", i + 1)).collect(),
        }
    }

    /// The divisor-sequence map `rho*`, a `div_rank x lattice_rank` matrix.
    /// For `P^n` with rays `e_1..e_n, -(e_1+..+e_n)` the block is the
    /// identity stacked on a row of `-1`s.
    pub fn rho_star(&self) -> IntMat {
        let mut m = IntMat::zeros(self.div_rank(), self.lattice_rank());
        let (mut r, mut c) = (0, 0);
        for &n in &self.projective_dims {
            for i in 0..n {
                m[(r + i, c + i)] = 1.into();
                m[(r + n, c + i)] = (-1).into();
            }
            r += n + 1;
            c += n;
        }
        m
    }

    /// The degree map `Div -> Pic`: every divisor of a block has class 1 in
    /// that block's factor.
    pub fn degree_map(&self) -> IntMat {
        let mut m = IntMat::zeros(self.picard_rank(), self.div_rank());
        let mut c = 0;
        for (b, &n) in self.projective_dims.iter().enumerate() {
            for i in 0..=n {
                m[(b, c + i)] = 1.into();
            }
            c += n + 1;
        }
        m
    }

    /// `P_D = {n : rho*(n) + D >= 0}`.
    pub fn moment_polytope(&self, divisor: &IntVec) -> HalfspaceSystem {
        let rho = self.rho_star();
        let rows = (0..self.div_rank())
            .map(|i| Halfspace::new(rho.row(i), -&divisor[i]))
            .collect();
        HalfspaceSystem::new(self.lattice_rank(), rows).expect("rows of rho* are nonzero")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strut {
    pub name: String,
    pub divisor: IntVec,
    pub chi: IntVec,
}

/// Shape, split `N = Nbar + N_U` (given by the rank of `N_U`) and struts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scaffolding {
    pub shape: ShapeVariety,
    pub n_u_rank: usize,
    pub struts: Vec<Strut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<PolygonJson>,
}

impl Scaffolding {
    pub fn validate(&self) -> Result<(), ScaffoldError> {
        if self.struts.is_empty() {
            return Err(ScaffoldError::NoStruts);
        }
        if let Some(names) = &self.shape.divisor_names {
            if names.len() != self.shape.div_rank() {
                return Err(ScaffoldError::BadNames {
                    expected: self.shape.div_rank(),
                    got: names.len(),
                });
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for name in self.shape.names() {
            seen.insert(name);
        }
        for s in &self.struts {
            if !seen.insert(s.name.clone()) {
                return Err(ScaffoldError::DuplicateName(s.name.clone()));
            }
            let check = |what, got, expected| {
                if got == expected {
                    Ok(())
                } else {
                    Err(ScaffoldError::BadDimension {
                        name: s.name.clone(),
                        what,
                        got,
                        expected,
                    })
                }
            };
            check("divisor", s.divisor.dim(), self.shape.div_rank())?;
            check("chi", s.chi.dim(), self.n_u_rank)?;
            let pd = self.shape.moment_polytope(&s.divisor);
            let vs = vertices(&pd).map_err(|_| ScaffoldError::NotNef(s.name.clone()))?;
            if vs.is_empty() || vs.iter().flatten().any(|x| !x.is_integer()) {
                return Err(ScaffoldError::NotNef(s.name.clone()));
            }
        }
        Ok(())
    }

    /// Ambient lattice rank, `rank Div + rank N_U`.
    pub fn ambient_rank(&self) -> usize {
        self.shape.div_rank() + self.n_u_rank
    }

    /// Strut names followed by shape divisor names; this is the order of the
    /// rows of [`build_qs`].
    pub fn labels(&self) -> Vec<String> {
        let mut out: Vec<String> = self.struts.iter().map(|s| s.name.clone()).collect();
        out.extend(self.shape.names());
        out
    }

    /// `theta = rho* + id : Nbar + N_U -> Div + N_U`.
    pub fn theta(&self) -> IntMat {
        let rho = self.shape.rho_star();
        let (dr, lr, u) = (self.shape.div_rank(), self.shape.lattice_rank(), self.n_u_rank);
        let mut m = IntMat::zeros(dr + u, lr + u);
        for i in 0..dr {
            for j in 0..lr {
                m[(i, j)] = rho[(i, j)].clone();
            }
        }
        for k in 0..u {
            m[(dr + k, lr + k)] = 1.into();
        }
        m
    }

    /// Lattice points of the translated moment polytopes `P_D + chi` in `N`.
    pub fn strut_points(&self) -> Result<Vec<IntVec>, ScaffoldError> {
        let mut out = Vec::new();
        for s in &self.struts {
            let pd = self.shape.moment_polytope(&s.divisor);
            for v in vertices(&pd)? {
                let v = IntVec::new(v.into_iter().map(|x| x.to_integer()).collect());
                out.push(v.concat(&s.chi));
            }
        }
        Ok(out)
    }

    /// `conv(union of P_D + chi)` as a polygon, when `N` has rank 2.
    pub fn strut_hull(&self) -> Result<LatticePolygon, ScaffoldError> {
        Ok(LatticePolygon::hull(&self.strut_points()?)?)
    }

    /// `None` when no target polygon is attached.
    pub fn hull_matches_target(&self) -> Result<Option<bool>, ScaffoldError> {
        let Some(t) = &self.target else {
            return Ok(None);
        };
        let target = LatticePolygon::hull(&t.vertices)?;
        Ok(Some(self.strut_hull()? == target))
    }
}
