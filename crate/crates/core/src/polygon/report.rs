use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::{
    barycenter, is_k_polystable, lattice_symmetries, normalized_volume, polar,
    polar_facets_with_interior_points, polar_volume_by_fan, qg_dimension, singularity_multiset,
    singularity_report, validate_fano, PolygonError, SingularityRecord,
};
use crate::lattice::{fmt_rat, IntMat, IntVec, Rat, RatVec};

/// All invariants of a Fano polygon in one place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonReport {
    pub vertices: Vec<IntVec>,
    pub polar_vertices: Vec<RatVec>,
    pub polar_volume: Rat,
    pub polar_barycenter: RatVec,
    pub k_polystable: bool,
    pub singularities: Vec<SingularityRecord>,
    /// Nontrivial quotients with multiplicities, keyed by `1/r(1,a)`.
    pub singularity_multiset: BTreeMap<String, usize>,
    pub symmetries: Vec<IntMat>,
    pub symmetry_is_plus_minus_identity: bool,
    pub qg_dimension: u64,
    /// Vertices of the polygon whose dual polar edge has interior lattice
    /// points; each one gives a root of the automorphism group.
    pub polar_edges_with_interior_points: Vec<IntVec>,
}

pub fn polygon_report(points: &[IntVec]) -> Result<PolygonReport, PolygonError> {
    let p = validate_fano(points)?;
    let q = polar(&p);
    let polar_volume = normalized_volume(&q);
    debug_assert_eq!(polar_volume, polar_volume_by_fan(&p));
    let singularities = singularity_report(&p);
    let singularity_multiset = singularity_multiset(&singularities)
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    let group = lattice_symmetries(&p);
    let qg = qg_dimension(&p);
    Ok(PolygonReport {
        vertices: p.vertices().to_vec(),
        polar_vertices: q.vertices().to_vec(),
        polar_volume,
        polar_barycenter: barycenter(&q)?,
        k_polystable: is_k_polystable(&p),
        singularities,
        singularity_multiset,
        symmetry_is_plus_minus_identity: group.is_plus_minus_identity(),
        symmetries: group.elements,
        qg_dimension: u64::try_from(&qg).expect("deformation count fits in u64"),
        polar_edges_with_interior_points: polar_facets_with_interior_points(&p),
    })
}

impl PolygonReport {
    pub fn symmetry_order(&self) -> usize {
        self.symmetries.len()
    }

    pub fn barycenter_is_origin(&self) -> bool {
        self.polar_barycenter.iter().all(Zero::is_zero)
    }
}

fn rats(v: &[Rat]) -> Vec<String> {
    v.iter().map(fmt_rat).collect()
}

impl Serialize for PolygonReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            vertices: &'a [IntVec],
            polar_vertices: Vec<Vec<String>>,
            polar_volume: String,
            polar_barycenter: Vec<String>,
            k_polystable: bool,
            singularities: &'a [SingularityRecord],
            singularity_multiset: &'a BTreeMap<String, usize>,
            symmetry_order: usize,
            symmetries: &'a [IntMat],
            symmetry_is_plus_minus_identity: bool,
            qg_dimension: u64,
            polar_edges_with_interior_points: &'a [IntVec],
        }
        Repr {
            vertices: &self.vertices,
            polar_vertices: self.polar_vertices.iter().map(|v| rats(v)).collect(),
            polar_volume: fmt_rat(&self.polar_volume),
            polar_barycenter: rats(&self.polar_barycenter),
            k_polystable: self.k_polystable,
            singularities: &self.singularities,
            singularity_multiset: &self.singularity_multiset,
            symmetry_order: self.symmetry_order(),
            symmetries: &self.symmetries,
            symmetry_is_plus_minus_identity: self.symmetry_is_plus_minus_identity,
            qg_dimension: self.qg_dimension,
            polar_edges_with_interior_points: &self.polar_edges_with_interior_points,
        }
        .serialize(s)
    }
}
