use std::collections::BTreeSet;

use num_traits::{One, Signed};
use serde::Serialize;

use super::{Fan, ScaffoldError};
use crate::lattice::{det, hnf, snf, IntMat, IntVec, Rat};

/// A squarefree monomial, as the sorted indices of its variables.
pub type VarSet = Vec<usize>;

/// The Cox / GIT data of a simplicial toric variety.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoxPresentation {
    pub names: Vec<String>,
    /// Rows are the ray generators, one per variable.
    pub rays: IntMat,
    pub cones: Vec<VarSet>,
    /// `r x n`; column `i` is the class of variable `i`.
    pub weights: IntMat,
    /// One generator per maximal cone: the variables off the cone.
    pub irrelevant: Vec<VarSet>,
}

impl CoxPresentation {
    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn class_rank(&self) -> usize {
        self.weights.nrows()
    }

    pub fn class_of_var(&self, i: usize) -> IntVec {
        self.weights.column(i)
    }

    /// Class of a monomial given by its exponent vector.
    pub fn class_of(&self, exponent: &[u32]) -> IntVec {
        let e = IntVec::new(exponent.iter().map(|&x| x.into()).collect());
        self.weights.mul_vec(&e)
    }

    /// `-K`, the sum of all variable classes.
    pub fn anticanonical_class(&self) -> IntVec {
        (0..self.nvars())
            .map(|i| self.class_of_var(i))
            .fold(IntVec::zeros(self.class_rank()), |a, b| a.add(&b))
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Names of a variable set, joined by `*`.
    pub fn monomial_name(&self, vars: &[usize]) -> String {
        vars.iter()
            .map(|&i| self.names[i].as_str())
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Re-expresses the weights in another basis of the class group.
    ///
    /// `basis` must equal `T * weights` for some unimodular `T`; this is
    /// checked and `T` is recovered by rational solving.
    pub fn with_class_basis(&self, basis: &IntMat) -> Result<CoxPresentation, ScaffoldError> {
        let r = self.class_rank();
        if basis.nrows() != r || basis.ncols() != self.nvars() {
            return Err(ScaffoldError::BadClassBasis);
        }
        // T = basis * W^t (W W^t)^-1
        let w = &self.weights;
        let gram = w.mul(&w.transpose());
        let rhs = basis.mul(&w.transpose());
        let mut t_rows = Vec::with_capacity(r);
        for i in 0..r {
            let b: Vec<Rat> = rhs.row(i).to_rat();
            // row_i(T) * gram = row_i(rhs)  <=>  gram^t * row_i(T)^t = row_i(rhs)^t
            let sol = crate::lattice::solve_rational(&gram.transpose(), &b)
                .map_err(|_| ScaffoldError::BadClassBasis)?;
            if sol.iter().any(|x| !x.is_integer()) {
                return Err(ScaffoldError::BadClassBasis);
            }
            t_rows.push(IntVec::new(sol.into_iter().map(|x| x.to_integer()).collect()));
        }
        let t = IntMat::from_rows_with_cols(&t_rows, r)?;
        if !det(&t).abs().is_one() || &t.mul(w) != basis {
            return Err(ScaffoldError::BadClassBasis);
        }
        Ok(CoxPresentation {
            weights: basis.clone(),
            ..self.clone()
        })
    }

    /// `true` when the zero pattern `vanishing` (bitmask over variables) is
    /// in the unstable locus, i.e. kills every irrelevant generator.
    pub fn is_unstable(&self, vanishing: u64) -> bool {
        self.irrelevant
            .iter()
            .all(|g| g.iter().any(|&i| vanishing >> i & 1 == 1))
    }
}

/// Cox presentation of a complete simplicial fan with named rays.
///
/// The weight matrix spans the left kernel of the ray matrix: with
/// `S = U R V` the Smith form of the `n x d` ray matrix `R`, the last
/// `n - d` rows of `U` kill `R`, and they present the class group
/// `Z^n / R(M)` when the first `d` invariant factors are all 1. It is stored
/// in row Hermite form.
pub fn cox_presentation(fan: &Fan, names: &[String]) -> Result<CoxPresentation, ScaffoldError> {
    let n = fan.rays.len();
    if names.len() != n {
        return Err(ScaffoldError::VariableMismatch(format!(
            "{} names for {} rays",
            names.len(),
            n
        )));
    }
    let rays = fan.ray_matrix();
    let s = snf(&rays);
    let diag = s.diagonal();
    let torsion: Vec<String> = diag.iter().filter(|d| !d.is_one()).map(|d| d.to_string()).collect();
    if !torsion.is_empty() || s.rank() < fan.dim {
        return Err(ScaffoldError::Torsion(torsion));
    }
    let kernel_rows: Vec<IntVec> = (fan.dim..n).map(|i| s.u.row(i)).collect();
    let w = IntMat::from_rows_with_cols(&kernel_rows, n)?;
    let weights = hnf(&w).h;
    debug_assert!(weights.mul(&rays).is_zero());

    let all: BTreeSet<usize> = (0..n).collect();
    let irrelevant = fan
        .cones
        .iter()
        .map(|c| all.iter().filter(|i| !c.contains(i)).copied().collect())
        .collect();
    Ok(CoxPresentation {
        names: names.to_vec(),
        rays,
        cones: fan.cones.clone(),
        weights,
        irrelevant,
    })
}

/// Variable supports of all products `g_1 * ... * g_k` with `g_i` a generator
/// of the `i`-th ideal. Supports suffice for comparing vanishing loci.
pub fn expand_product_of_ideals(ideals: &[Vec<VarSet>]) -> Vec<VarSet> {
    let mut acc: BTreeSet<VarSet> = [Vec::new()].into_iter().collect();
    for ideal in ideals {
        let mut next = BTreeSet::new();
        for a in &acc {
            for g in ideal {
                let mut m: VarSet = a.iter().chain(g).copied().collect();
                m.sort_unstable();
                m.dedup();
                next.insert(m);
            }
        }
        acc = next;
    }
    acc.into_iter().collect()
}

/// Compares the vanishing loci of two monomial ideals by scanning every
/// coordinate zero pattern of `nvars` variables.
pub fn unstable_locus_equal(
    a: &[VarSet],
    b: &[VarSet],
    nvars: usize,
) -> Result<bool, ScaffoldError> {
    if nvars > 63 {
        return Err(ScaffoldError::VariableMismatch(format!("{nvars} variables is too many to scan")));
    }
    for g in a.iter().chain(b) {
        if let Some(&i) = g.iter().find(|&&i| i >= nvars) {
            return Err(ScaffoldError::VariableMismatch(format!(
                "variable index {i} out of range for {nvars} variables"
            )));
        }
    }
    let vanishes = |gens: &[VarSet], s: u64| gens.iter().all(|g| g.iter().any(|&i| s >> i & 1 == 1));
    Ok((0..1u64 << nvars).all(|s| vanishes(a, s) == vanishes(b, s)))
}
