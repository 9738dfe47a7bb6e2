//! Lattice polytopes in dimension 3 and 4: exact hulls, duals, face
//! lattices, lattice point counts and the Batyrev-type invariants built on
//! them.

mod hull;
mod invariants;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::{dot, vsub, zvec, ZMatrix};

pub(crate) use hull::Bits;
pub use hull::{facet_representation, Facet};
pub use invariants::{
    dolgachev_evidence, edge_condition, hodge_numbers, toric_divisor_rank, DivisorRank,
    DolgachevReport, EdgeEntry, EdgeReport, HodgeNumbers, ReflexivePair,
};

/// A full-dimensional polytope with integer vertices.
#[derive(Debug, Clone)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<Vec<BigInt>>,
    facets: Vec<Facet>,
    /// Vertex set of each facet.
    incidence: Vec<Bits>,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Eq for LatticePolytope {}

fn affine_rank(points: &[&Vec<BigInt>]) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    let rows: Vec<Vec<BigInt>> = points[1..].iter().map(|p| vsub(p, first)).collect();
    if rows.is_empty() {
        return 0;
    }
    ZMatrix::from_rows(rows, first.len()).rank()
}

impl LatticePolytope {
    /// Convex hull of `points`; the vertex list keeps only extreme points, in
    /// lexicographic order.
    pub fn new(points: Vec<Vec<BigInt>>) -> Result<Self> {
        let d = points.first().map(Vec::len).ok_or(Error::NotFullDimensional)?;
        if !(2..=4).contains(&d) {
            return Err(Error::UnsupportedDimension(d));
        }
        let pts: Vec<Vec<BigInt>> = points.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let facets = facet_representation(&pts)?;
        let vertices: Vec<Vec<BigInt>> = pts
            .into_iter()
            .filter(|p| {
                let tight: Vec<Vec<BigInt>> =
                    facets.iter().filter(|f| f.slack(p).is_zero()).map(|f| f.normal.clone()).collect();
                tight.len() >= d && ZMatrix::from_rows(tight, d).rank() == d
            })
            .collect();
        let incidence = facets
            .iter()
            .map(|f| Bits::from_indices(vertices.len(), (0..vertices.len()).filter(|&i| f.slack(&vertices[i]).is_zero())))
            .collect();
        Ok(LatticePolytope {
            dim: d,
            vertices,
            facets,
            incidence,
        })
    }

    pub fn from_i64(points: &[&[i64]]) -> Result<Self> {
        LatticePolytope::new(points.iter().map(|p| zvec(p)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<BigInt>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Indices of the vertices on facet `i`.
    pub fn facet_vertices(&self, i: usize) -> Vec<usize> {
        self.incidence[i].ones()
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.facets.iter().all(|f| !f.slack(x).is_negative())
    }

    pub fn origin_interior(&self) -> bool {
        self.facets.iter().all(|f| f.offset.is_positive())
    }

    pub fn scaled(&self, k: &BigInt) -> Result<Self> {
        LatticePolytope::new(self.vertices.iter().map(|v| v.iter().map(|x| x * k).collect()).collect())
    }

    /// Reflexive: origin interior and every facet at lattice distance one.
    pub fn is_reflexive(&self) -> Result<bool> {
        if !self.origin_interior() {
            return Err(Error::OriginNotInterior);
        }
        Ok(self.facets.iter().all(|f| f.offset.is_one()))
    }

    /// All lattice points together with the set of facets they lie on. The
    /// first `dim − 1` coordinates range over the bounding box; the last one
    /// over the exact interval cut out by the facets.
    pub(crate) fn points_with_facets(&self) -> Vec<(Vec<BigInt>, Bits)> {
        let d = self.dim;
        let lo: Vec<BigInt> = (0..d).map(|k| self.vertices.iter().map(|v| v[k].clone()).min().unwrap()).collect();
        let hi: Vec<BigInt> = (0..d).map(|k| self.vertices.iter().map(|v| v[k].clone()).max().unwrap()).collect();
        let nf = self.facets.len();
        let mut out = Vec::new();
        let mut prefix: Vec<BigInt> = lo[..d - 1].to_vec();
        'outer: loop {
            // interval for the last coordinate
            let mut t_lo = lo[d - 1].clone();
            let mut t_hi = hi[d - 1].clone();
            let mut feasible = true;
            for f in &self.facets {
                let a = &f.normal[d - 1];
                let rest = -(dot(&f.normal[..d - 1], &prefix) + &f.offset);
                if a.is_zero() {
                    if rest.is_positive() {
                        feasible = false;
                        break;
                    }
                } else if a.is_positive() {
                    t_lo = t_lo.max(num_integer::Integer::div_ceil(&rest, a));
                } else {
                    t_hi = t_hi.min(num_integer::Integer::div_floor(&rest, a));
                }
            }
            if feasible {
                let mut t = t_lo;
                while t <= t_hi {
                    let mut x = prefix.clone();
                    x.push(t.clone());
                    let tight = Bits::from_indices(nf, (0..nf).filter(|&i| self.facets[i].slack(&x).is_zero()));
                    out.push((x, tight));
                    t += 1;
                }
            }
            for k in (0..d - 1).rev() {
                if prefix[k] < hi[k] {
                    prefix[k] += 1;
                    prefix[k + 1..d - 1].clone_from_slice(&lo[k + 1..d - 1]);
                    continue 'outer;
                }
            }
            break;
        }
        out
    }

    pub fn lattice_points(&self) -> Vec<Vec<BigInt>> {
        self.points_with_facets().into_iter().map(|(x, _)| x).collect()
    }

    /// All nonempty faces, the polytope itself last, each with lattice point
    /// counts; `dual` is left unset.
    pub fn face_info(&self) -> Vec<FaceInfo> {
        let nv = self.vertices.len();
        let nf = self.facets.len();
        let mut seen: BTreeSet<Bits> = self.incidence.iter().cloned().collect();
        let mut queue: Vec<Bits> = seen.iter().cloned().collect();
        while let Some(face) = queue.pop() {
            for f in &self.incidence {
                let g = face.and(f);
                if !g.is_empty() && seen.insert(g.clone()) {
                    queue.push(g);
                }
            }
        }
        seen.insert(Bits::from_indices(nv, 0..nv));
        let mut faces: Vec<FaceInfo> = seen
            .into_iter()
            .map(|vs| {
                let vertices = vs.ones();
                let pts: Vec<&Vec<BigInt>> = vertices.iter().map(|&i| &self.vertices[i]).collect();
                let facets = (0..nf).filter(|&i| self.incidence[i].contains(&vs)).collect();
                FaceInfo {
                    dim: affine_rank(&pts),
                    vertices,
                    facets,
                    l: 0,
                    l_star: 0,
                    dual: None,
                }
            })
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
        let by_facets: BTreeMap<Vec<usize>, usize> =
            faces.iter().enumerate().map(|(i, f)| (f.facets.clone(), i)).collect();
        for (_, tight) in self.points_with_facets() {
            let idx = by_facets[&tight.ones()];
            faces[idx].l_star += 1;
        }
        let bits: Vec<Bits> = faces.iter().map(|f| Bits::from_indices(nv, f.vertices.iter().copied())).collect();
        for i in 0..faces.len() {
            faces[i].l = (0..faces.len()).filter(|&j| bits[i].contains(&bits[j])).map(|j| faces[j].l_star).sum();
        }
        faces
    }
}

/// A face with its lattice point counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceInfo {
    pub dim: usize,
    /// Indices into the polytope's vertex list.
    pub vertices: Vec<usize>,
    /// Facets containing the face (empty for the polytope itself).
    pub facets: Vec<usize>,
    pub l: usize,
    /// Points in the relative interior.
    pub l_star: usize,
    /// Index of the dual face in the dual polytope's face list.
    pub dual: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointCount {
    pub l: usize,
    pub l_star: usize,
}

pub fn count_points(p: &LatticePolytope) -> PointCount {
    let pts = p.points_with_facets();
    PointCount {
        l: pts.len(),
        l_star: pts.iter().filter(|(_, t)| t.is_empty()).count(),
    }
}

/// `{y : x·y ≥ −1 for all x ∈ Δ}`, whose vertices are `normal / offset` of
/// the facets of `Δ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualPolytope {
    pub vertices: Vec<Vec<BigRational>>,
    pub integral: bool,
}

impl DualPolytope {
    pub fn to_lattice(&self) -> Result<LatticePolytope> {
        if !self.integral {
            return Err(Error::NotReflexive);
        }
        LatticePolytope::new(self.vertices.iter().map(|v| v.iter().map(|x| x.to_integer()).collect()).collect())
    }
}

pub fn dual_polytope(p: &LatticePolytope) -> Result<DualPolytope> {
    if !p.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    let mut vertices: Vec<Vec<BigRational>> = p
        .facets
        .iter()
        .map(|f| f.normal.iter().map(|a| BigRational::new(a.clone(), f.offset.clone())).collect())
        .collect();
    vertices.sort();
    let integral = vertices.iter().all(|v| v.iter().all(|x| x.is_integer()));
    Ok(DualPolytope { vertices, integral })
}

/// Newton polytope of the anticanonical hypersurface in weighted projective
/// space `P(w)`: exponents `m ≥ 0` with `w·m = Σw`, shifted by `−1`, in
/// coordinates of a basis of `{u ∈ ℤⁿ : w·u = 0}`.
pub fn weighted_newton_polytope(weights: &[u32]) -> Result<LatticePolytope> {
    let n = weights.len();
    if !(4..=5).contains(&n) {
        return Err(Error::UnsupportedDimension(n.saturating_sub(1)));
    }
    if weights.contains(&0) {
        return Err(Error::Invalid("weights must be positive".into()));
    }
    let degree: u32 = weights.iter().sum();
    let mut exps = Vec::new();
    let mut cur = vec![0u32; n];
    monomials(weights, degree, 0, &mut cur, &mut exps);
    let w = ZMatrix::from_rows(vec![weights.iter().map(|&x| BigInt::from(x)).collect()], n);
    let basis = w.integer_kernel();
    let points = exps
        .iter()
        .map(|m| {
            let u: Vec<BigInt> = m.iter().map(|&e| BigInt::from(e) - 1).collect();
            basis.solve_row_combination(&u).expect("kernel basis is saturated")
        })
        .collect();
    LatticePolytope::new(points)
}

fn monomials(w: &[u32], left: u32, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if k == w.len() {
        if left == 0 {
            out.push(cur.clone());
        }
        return;
    }
    for e in 0..=left / w[k] {
        cur[k] = e;
        monomials(w, left - e * w[k], k + 1, cur, out);
    }
    cur[k] = 0;
}

/// Number of degree-`Σw` monomials, the lattice point count of the Newton
/// polytope.
pub fn weighted_monomial_count(weights: &[u32]) -> usize {
    let mut out = Vec::new();
    let mut cur = vec![0u32; weights.len()];
    monomials(weights, weights.iter().sum(), 0, &mut cur, &mut out);
    out.len()
}

/// Converts a small count into `i64`.
pub(crate) fn as_i64(x: usize) -> i64 {
    x.to_i64().expect("count fits in i64")
}
