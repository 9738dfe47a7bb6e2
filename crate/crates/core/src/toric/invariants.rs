//! Invariants of reflexive pairs `(Δ, Δ*)`: Batyrev Hodge numbers in
//! dimension 4, toric divisor ranks and the edge condition in dimension 3.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{as_i64, dual_polytope, FaceInfo, LatticePolytope};
use crate::error::{Error, Result};

/// A reflexive polytope, its dual, and both face lattices with duality
/// indices filled in.
#[derive(Debug, Clone)]
pub struct ReflexivePair {
    pub delta: LatticePolytope,
    pub dual: LatticePolytope,
    pub faces: Vec<FaceInfo>,
    pub dual_faces: Vec<FaceInfo>,
}

fn link(from: &mut [FaceInfo], facet_to_vertex: &[usize], to: &[FaceInfo]) {
    let index: BTreeMap<&Vec<usize>, usize> = to.iter().enumerate().map(|(i, f)| (&f.vertices, i)).collect();
    for face in from.iter_mut() {
        let mut image: Vec<usize> = face.facets.iter().map(|&i| facet_to_vertex[i]).collect();
        image.sort();
        face.dual = index.get(&image).copied();
    }
}

/// For each facet of `p`, the index of the matching vertex of `dual`.
fn facet_vertex_map(p: &LatticePolytope, dual: &LatticePolytope) -> Vec<usize> {
    p.facets()
        .iter()
        .map(|f| {
            dual.vertices()
                .iter()
                .position(|v| *v == f.normal)
                .expect("facet normal is a dual vertex")
        })
        .collect()
}

impl ReflexivePair {
    pub fn new(delta: &LatticePolytope) -> Result<Self> {
        if !delta.is_reflexive()? {
            return Err(Error::NotReflexive);
        }
        let dual = dual_polytope(delta)?.to_lattice()?;
        let mut faces = delta.face_info();
        let mut dual_faces = dual.face_info();
        link(&mut faces, &facet_vertex_map(delta, &dual), &dual_faces);
        link(&mut dual_faces, &facet_vertex_map(&dual, delta), &faces);
        Ok(ReflexivePair {
            delta: delta.clone(),
            dual,
            faces,
            dual_faces,
        })
    }

    /// The same pair with the roles of `Δ` and `Δ*` exchanged.
    pub fn swapped(&self) -> ReflexivePair {
        ReflexivePair {
            delta: self.dual.clone(),
            dual: self.delta.clone(),
            faces: self.dual_faces.clone(),
            dual_faces: self.faces.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.delta.dim()
    }

    /// `l(Δ)`.
    pub fn points(&self) -> usize {
        self.faces.last().expect("polytope face").l
    }

    /// `Σ_{facets Γ} l*(Γ)`.
    pub fn facet_interior_sum(&self) -> usize {
        let d = self.dim();
        self.faces.iter().filter(|f| f.dim == d - 1).map(|f| f.l_star).sum()
    }

    /// `Σ_{codim-2 faces θ} l*(θ)·l*(θ*)`, where `θ*` is an edge of `Δ*`.
    pub fn codim2_correction(&self) -> usize {
        let d = self.dim();
        self.faces
            .iter()
            .filter(|f| f.dim + 2 == d)
            .map(|f| f.l_star * self.dual_faces[f.dual.expect("dual face")].l_star)
            .sum()
    }

    /// Face-lattice duality: dimensions complement to `d − 1`, the pairing
    /// is an involution and containment is reversed.
    pub fn duality_holds(&self) -> bool {
        let d = self.dim();
        let proper = |f: &FaceInfo| f.dim < d;
        let ok_dims = self.faces.iter().filter(|f| proper(f)).all(|f| match f.dual {
            Some(j) => {
                let g = &self.dual_faces[j];
                g.dim + f.dim + 1 == d && g.dual.map(|k| &self.faces[k]) == Some(f)
            }
            None => false,
        });
        let subset = |a: &[usize], b: &[usize]| a.iter().all(|x| b.contains(x));
        let reversed = self.faces.iter().filter(|f| proper(f)).all(|f| {
            self.faces.iter().filter(|g| proper(g)).all(|g| {
                let fd = &self.dual_faces[f.dual.unwrap()];
                let gd = &self.dual_faces[g.dual.unwrap()];
                subset(&f.vertices, &g.vertices) == subset(&gd.vertices, &fd.vertices)
            })
        });
        ok_dims && reversed
    }
}

/// Stringy Hodge numbers of the Calabi–Yau hypersurface of a reflexive
/// 4-polytope `Δ` (the Newton polytope).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HodgeNumbers {
    pub h11: i64,
    pub h21: i64,
    /// `l(Δ) − 5 − Σ l*(facets)`: deformations realized by polynomials.
    pub polynomial: i64,
    /// `h21 − polynomial`.
    pub correction: i64,
}

fn h21_parts(pair: &ReflexivePair) -> (i64, i64) {
    let poly = as_i64(pair.points()) - 5 - as_i64(pair.facet_interior_sum());
    (poly, as_i64(pair.codim2_correction()))
}

pub fn hodge_numbers(delta: &LatticePolytope) -> Result<HodgeNumbers> {
    if delta.dim() != 4 {
        return Err(Error::UnsupportedDimension(delta.dim()));
    }
    let pair = ReflexivePair::new(delta)?;
    Ok(hodge_from_pair(&pair))
}

pub(crate) fn hodge_from_pair(pair: &ReflexivePair) -> HodgeNumbers {
    let (poly, corr) = h21_parts(pair);
    let (dpoly, dcorr) = h21_parts(&pair.swapped());
    HodgeNumbers {
        h11: dpoly + dcorr,
        h21: poly + corr,
        polynomial: poly,
        correction: corr,
    }
}

/// Rank of the lattice of toric divisors `M_Δ` on the K3 hypersurface of a
/// reflexive 3-polytope, and the full Picard rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DivisorRank {
    pub rank: i64,
    pub picard: i64,
}

fn check_dim3(delta: &LatticePolytope) -> Result<()> {
    if delta.dim() != 3 {
        return Err(Error::UnsupportedDimension(delta.dim()));
    }
    Ok(())
}

pub(crate) fn rank_from_pair(pair: &ReflexivePair) -> DivisorRank {
    let dual = pair.swapped();
    let rank = as_i64(dual.points()) - 4 - as_i64(dual.facet_interior_sum());
    DivisorRank {
        rank,
        picard: rank + as_i64(pair.codim2_correction()),
    }
}

/// `rank M_Δ = l(Δ*) − 4 − Σ_{facets F* of Δ*} l*(F*)` and
/// `ρ = rank M_Δ + Σ_{edges Γ of Δ} l*(Γ)·l*(Γ*)`.
pub fn toric_divisor_rank(delta: &LatticePolytope) -> Result<DivisorRank> {
    check_dim3(delta)?;
    Ok(rank_from_pair(&ReflexivePair::new(delta)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeEntry {
    pub endpoints: [Vec<BigInt>; 2],
    pub l_star: usize,
    pub dual_l_star: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeReport {
    pub edges: Vec<EdgeEntry>,
    /// No edge and no dual edge has interior points.
    pub literal: bool,
    /// `l*(Γ)·l*(Γ*) = 0` for every edge.
    pub product: bool,
}

pub fn edge_condition(delta: &LatticePolytope) -> Result<EdgeReport> {
    check_dim3(delta)?;
    let pair = ReflexivePair::new(delta)?;
    let edges: Vec<EdgeEntry> = pair
        .faces
        .iter()
        .filter(|f| f.dim == 1)
        .map(|f| EdgeEntry {
            endpoints: [
                delta.vertices()[f.vertices[0]].clone(),
                delta.vertices()[f.vertices[1]].clone(),
            ],
            l_star: f.l_star,
            dual_l_star: pair.dual_faces[f.dual.expect("dual edge")].l_star,
        })
        .collect();
    Ok(EdgeReport {
        literal: edges.iter().all(|e| e.l_star == 0 && e.dual_l_star == 0),
        product: edges.iter().all(|e| e.l_star * e.dual_l_star == 0),
        edges,
    })
}

/// Numerical evidence for a primitive embedding `M_{Δ*} ↪ M̌_Δ`: the
/// necessary rank condition `rank M_{Δ*} ≤ 20 − rank M_Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DolgachevReport {
    pub rank_delta: i64,
    pub rank_dual: i64,
    pub picard_delta: i64,
    pub picard_dual: i64,
    pub necessary: bool,
    /// `20 − rank M_Δ − rank M_{Δ*}`.
    pub defect: i64,
}

impl DolgachevReport {
    pub fn equality(&self) -> bool {
        self.defect == 0
    }
}

pub fn dolgachev_evidence(delta: &LatticePolytope) -> Result<DolgachevReport> {
    check_dim3(delta)?;
    let pair = ReflexivePair::new(delta)?;
    let a = rank_from_pair(&pair);
    let b = rank_from_pair(&pair.swapped());
    let defect = 20 - a.rank - b.rank;
    Ok(DolgachevReport {
        rank_delta: a.rank,
        rank_dual: b.rank,
        picard_delta: a.picard,
        picard_dual: b.picard,
        necessary: defect >= 0,
        defect,
    })
}
