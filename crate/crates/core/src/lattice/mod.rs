//! Integral quadratic lattices.
//!
//! A lattice is ℤⁿ with a symmetric integer Gram matrix. Sublattices are
//! given by row bases in ambient coordinates; isometries by matrices whose
//! columns are the images of the standard basis vectors.

mod enumerate;
mod isometry;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use enumerate::{definite_vectors, enumerate_vectors, Enumeration};
pub use isometry::{
    extend_by_identity, orientation_sign, reflect_root, reflection, Isometry, Orientation,
    PositiveFrame,
};

use crate::error::{Error, Result};
use crate::matrix::{dot, to_q_vec, QMatrix, ZMatrix};

/// Rank of the K3 lattice `U³ ⊥ E8(−1)²`.
pub const K3_RANK: usize = 22;
/// Rank of the Mukai lattice of a K3 surface.
pub const MUKAI_RANK: usize = 24;
/// Coordinate of `h₀` (the class of a point's dual, `H⁰`) in the Mukai lattice.
pub const H0: usize = 22;
/// Coordinate of `h₄` (the point class, `H⁴`) in the Mukai lattice.
pub const H4: usize = 23;

#[derive(Clone, PartialEq, Eq)]
pub struct IntegralLattice {
    gram: ZMatrix,
    label: Option<String>,
}

impl fmt::Debug for IntegralLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntegralLattice")
            .field("rank", &self.rank())
            .field("label", &self.label)
            .finish()
    }
}

/// Counts of positive, negative and zero pivots of a symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub nullity: usize,
}

impl IntegralLattice {
    pub fn new(gram: ZMatrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(IntegralLattice { gram, label: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// The rank-0 lattice.
    pub fn zero() -> Self {
        IntegralLattice {
            gram: ZMatrix::zeros(0, 0),
            label: None,
        }
    }

    pub fn standard(name: StandardLattice) -> Self {
        name.build()
    }

    pub fn rank(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &ZMatrix {
        &self.gram
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Same Gram matrix, ignoring labels.
    pub fn same_form(&self, other: &IntegralLattice) -> bool {
        self.gram == other.gram
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)].is_even())
    }

    pub fn det(&self) -> BigInt {
        self.gram.det()
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.det().is_zero()
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    fn check_len(&self, v: &[BigInt]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: v.len(),
            });
        }
        Ok(())
    }

    pub fn pair(&self, v: &[BigInt], w: &[BigInt]) -> Result<BigInt> {
        self.check_len(v)?;
        self.check_len(w)?;
        Ok(dot(&self.gram.vec_mul(v), w))
    }

    pub fn norm(&self, v: &[BigInt]) -> Result<BigInt> {
        self.pair(v, v)
    }

    pub fn pair_q(&self, v: &[BigRational], w: &[BigRational]) -> BigRational {
        let g = self.gram.to_q();
        dot(&g.vec_mul(v), w)
    }

    /// `G · v`, the linear form `x ↦ x · v` in coordinates.
    pub fn dual_form(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.gram.mul_vec(v)
    }

    /// Gram matrix of the given rows: `B G Bᵀ`.
    pub fn restrict(&self, basis: &ZMatrix) -> IntegralLattice {
        let g = basis.mul(&self.gram).mul(&basis.transpose());
        IntegralLattice { gram: g, label: None }
    }

    pub fn direct_sum(&self, other: &IntegralLattice) -> IntegralLattice {
        let label = match (&self.label, &other.label) {
            (Some(a), Some(b)) => Some(format!("{a} + {b}")),
            (Some(a), None) if other.rank() == 0 => Some(a.clone()),
            (None, Some(b)) if self.rank() == 0 => Some(b.clone()),
            _ => None,
        };
        IntegralLattice {
            gram: ZMatrix::block_diag(&self.gram, &other.gram),
            label,
        }
    }

    /// Inertia by symmetric Gaussian elimination over ℚ.
    pub fn inertia(&self) -> Inertia {
        let diag = congruence_diagonalize(&self.gram);
        let mut out = Inertia {
            positive: 0,
            negative: 0,
            nullity: 0,
        };
        for (d, _) in &diag {
            if d.is_positive() {
                out.positive += 1;
            } else if d.is_negative() {
                out.negative += 1;
            } else {
                out.nullity += 1;
            }
        }
        out
    }

    /// `(p, q)`: numbers of positive and negative eigenvalues.
    pub fn signature(&self) -> Result<(usize, usize)> {
        let i = self.inertia();
        if i.nullity > 0 {
            return Err(Error::Degenerate(i.nullity));
        }
        Ok((i.positive, i.negative))
    }

    /// An orthogonal frame spanning a maximal positive definite subspace,
    /// read off the congruence diagonalization.
    pub fn positive_frame(&self) -> Result<PositiveFrame> {
        let diag = congruence_diagonalize(&self.gram);
        let vectors = diag
            .into_iter()
            .filter(|(d, _)| d.is_positive())
            .map(|(_, v)| v)
            .collect();
        PositiveFrame::new(self.clone(), vectors)
    }
}

/// Congruence diagonalization `P G Pᵀ = diag`. Returns pivots with the
/// corresponding rows of `P` (rational vectors in the original basis).
fn congruence_diagonalize(gram: &ZMatrix) -> Vec<(BigRational, Vec<BigRational>)> {
    let n = gram.nrows();
    let mut g: QMatrix = gram.to_q();
    let mut p = QMatrix::identity(n);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let pivot = (k..n).find(|&i| !g[(i, i)].is_zero());
        let pivot = match pivot {
            Some(i) => i,
            None => {
                let off = (k..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !g[(i, j)].is_zero());
                match off {
                    // v_i ← v_i + v_j gives a nonzero diagonal 2·g_ij
                    Some((i, j)) => {
                        add_row_col(&mut g, &mut p, i, j, &BigRational::one());
                        i
                    }
                    None => {
                        for i in k..n {
                            out.push((BigRational::zero(), p.row(i).to_vec()));
                        }
                        return out;
                    }
                }
            }
        };
        swap_row_col(&mut g, &mut p, k, pivot);
        let d = g[(k, k)].clone();
        for j in k + 1..n {
            if g[(j, k)].is_zero() {
                continue;
            }
            let c = -(&g[(j, k)] / &d);
            add_row_col(&mut g, &mut p, j, k, &c);
        }
        out.push((d, p.row(k).to_vec()));
    }
    out
}

// v_i ← v_i + c·v_j as a congruence on g
fn add_row_col(g: &mut QMatrix, p: &mut QMatrix, i: usize, j: usize, c: &BigRational) {
    let n = g.nrows();
    for t in 0..n {
        let s = c * &g[(j, t)];
        g[(i, t)] += s;
    }
    for t in 0..n {
        let s = c * &g[(t, j)];
        g[(t, i)] += s;
    }
    for t in 0..n {
        let s = c * &p[(j, t)];
        p[(i, t)] += s;
    }
}

fn swap_row_col(g: &mut QMatrix, p: &mut QMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    let n = g.nrows();
    for t in 0..n {
        let tmp = g[(a, t)].clone();
        g[(a, t)] = g[(b, t)].clone();
        g[(b, t)] = tmp;
    }
    for t in 0..n {
        let tmp = g[(t, a)].clone();
        g[(t, a)] = g[(t, b)].clone();
        g[(t, b)] = tmp;
    }
    for t in 0..n {
        let tmp = p[(a, t)].clone();
        p[(a, t)] = p[(b, t)].clone();
        p[(b, t)] = tmp;
    }
}

/// Named lattices with a fixed basis convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardLattice {
    /// Hyperbolic plane, basis `e, f`.
    U,
    /// The `H⁰ ⊕ H⁴` block under the Mukai pairing, basis `h₀, h₄`.
    UMukai,
    /// Negative definite E8, simple-root basis.
    E8Neg,
    /// `U³ ⊥ E8(−1)²`.
    K3,
    /// `K3 ⊥ U_mukai`.
    MukaiK3,
}

impl StandardLattice {
    pub const ALL: [StandardLattice; 5] = [
        StandardLattice::U,
        StandardLattice::UMukai,
        StandardLattice::E8Neg,
        StandardLattice::K3,
        StandardLattice::MukaiK3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StandardLattice::U => "U",
            StandardLattice::UMukai => "U_mukai",
            StandardLattice::E8Neg => "E8neg",
            StandardLattice::K3 => "K3",
            StandardLattice::MukaiK3 => "MukaiK3",
        }
    }

    pub fn build(self) -> IntegralLattice {
        let gram = match self {
            StandardLattice::U => hyperbolic(1),
            StandardLattice::UMukai => hyperbolic(-1),
            StandardLattice::E8Neg => e8_cartan().neg(),
            StandardLattice::K3 => k3_gram(),
            StandardLattice::MukaiK3 => ZMatrix::block_diag(&k3_gram(), &hyperbolic(-1)),
        };
        IntegralLattice {
            gram,
            label: Some(self.name().to_string()),
        }
    }
}

impl FromStr for StandardLattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StandardLattice::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownLattice(s.to_string()))
    }
}

fn hyperbolic(off: i64) -> ZMatrix {
    crate::matrix::zmat(&[&[0, off], &[off, 0]])
}

/// Cartan matrix of E8 in Bourbaki numbering: chain 1-3-4-5-6-7-8, node 2 on 4.
pub fn e8_cartan() -> ZMatrix {
    const EDGES: [(usize, usize); 7] = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)];
    let mut c = ZMatrix::identity(8).scale(&BigInt::from(2));
    for (a, b) in EDGES {
        c[(a - 1, b - 1)] = BigInt::from(-1);
        c[(b - 1, a - 1)] = BigInt::from(-1);
    }
    c
}

fn k3_gram() -> ZMatrix {
    let u = hyperbolic(1);
    let e8 = e8_cartan().neg();
    let mut g = ZMatrix::zeros(0, 0);
    for _ in 0..3 {
        g = ZMatrix::block_diag(&g, &u);
    }
    for _ in 0..2 {
        g = ZMatrix::block_diag(&g, &e8);
    }
    g
}

/// Unit vector of length `n`.
pub fn unit(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::one();
    v
}

/// `e_i` of the i-th hyperbolic summand (0-based) of the K3 lattice.
pub fn k3_e(block: usize) -> Vec<BigInt> {
    unit(K3_RANK, 2 * block)
}

/// `f_i` of the i-th hyperbolic summand (0-based) of the K3 lattice.
pub fn k3_f(block: usize) -> Vec<BigInt> {
    unit(K3_RANK, 2 * block + 1)
}

/// Simple root `α_k` (0-based, Bourbaki order) of the `which`-th E8(−1) summand.
pub fn k3_e8_root(which: usize, k: usize) -> Vec<BigInt> {
    unit(K3_RANK, 6 + 8 * which + k)
}

/// A vector bound to the lattice whose form it is measured with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeVector {
    lattice: Arc<IntegralLattice>,
    coords: Vec<BigInt>,
}

impl LatticeVector {
    pub fn new(lattice: Arc<IntegralLattice>, coords: Vec<BigInt>) -> Result<Self> {
        lattice.check_len(&coords)?;
        Ok(LatticeVector { lattice, coords })
    }

    pub fn lattice(&self) -> &Arc<IntegralLattice> {
        &self.lattice
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    pub fn pair(&self, other: &LatticeVector) -> Result<BigInt> {
        if !Arc::ptr_eq(&self.lattice, &other.lattice) && !self.lattice.same_form(&other.lattice) {
            return Err(Error::LatticeMismatch);
        }
        self.lattice.pair(&self.coords, &other.coords)
    }

    pub fn norm(&self) -> BigInt {
        dot(&self.lattice.gram.vec_mul(&self.coords), &self.coords)
    }
}

/// A sublattice given by independent basis rows in ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sublattice {
    ambient: IntegralLattice,
    basis: ZMatrix,
}

impl Sublattice {
    pub fn new(ambient: IntegralLattice, basis: ZMatrix) -> Result<Self> {
        if basis.ncols() != ambient.rank() {
            return Err(Error::DimensionMismatch {
                expected: ambient.rank(),
                got: basis.ncols(),
            });
        }
        if basis.rank() != basis.nrows() {
            return Err(Error::DependentRows);
        }
        Ok(Sublattice { ambient, basis })
    }

    /// Sublattice spanned by arbitrary (possibly dependent) generators.
    pub fn spanned_by(ambient: IntegralLattice, generators: &ZMatrix) -> Result<Self> {
        let basis = if generators.nrows() == 0 {
            ZMatrix::zeros(0, ambient.rank())
        } else {
            generators.hnf()
        };
        Sublattice::new(ambient, basis)
    }

    pub fn whole(ambient: IntegralLattice) -> Self {
        let basis = ZMatrix::identity(ambient.rank());
        Sublattice { ambient, basis }
    }

    pub fn ambient(&self) -> &IntegralLattice {
        &self.ambient
    }

    pub fn basis(&self) -> &ZMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    /// The restricted form on the basis rows.
    pub fn lattice(&self) -> IntegralLattice {
        self.ambient.restrict(&self.basis)
    }

    /// True iff every elementary divisor of the basis is 1.
    pub fn is_primitive(&self) -> bool {
        self.basis
            .elementary_divisors()
            .iter()
            .all(|d| d.is_one())
    }

    /// `(ℚ-span) ∩ ℤⁿ`.
    pub fn saturation(&self) -> Sublattice {
        let n = self.ambient.rank();
        if self.rank() == 0 {
            return self.clone();
        }
        let k = self.basis.integer_kernel();
        let basis = if k.nrows() == 0 {
            ZMatrix::identity(n)
        } else {
            k.integer_kernel()
        };
        Sublattice {
            ambient: self.ambient.clone(),
            basis,
        }
    }

    /// Primitive sublattice of vectors orthogonal to every basis row.
    pub fn orthogonal_complement(&self) -> Sublattice {
        let n = self.ambient.rank();
        let basis = if self.rank() == 0 {
            ZMatrix::identity(n)
        } else {
            self.basis.mul(self.ambient.gram()).integer_kernel()
        };
        let basis = if basis.nrows() == 0 {
            ZMatrix::zeros(0, n)
        } else {
            basis
        };
        Sublattice {
            ambient: self.ambient.clone(),
            basis,
        }
    }

    /// Whether the form restricted to this sublattice is nondegenerate.
    pub fn restriction_nondegenerate(&self) -> bool {
        self.lattice().is_nondegenerate()
    }

    /// Membership of an integer vector in the ℤ-span.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        v.len() == self.ambient.rank() && self.basis.solve_row_combination(v).is_some()
    }

    /// Membership in the ℚ-span.
    pub fn spans_rationally(&self, v: &[BigRational]) -> bool {
        let q = self.basis.to_q().transpose();
        q.solve(v).is_some()
    }

    /// Equality of ℤ-spans (Hermite normal forms agree).
    pub fn same_span(&self, other: &Sublattice) -> bool {
        self.ambient.rank() == other.ambient.rank() && canonical(&self.basis) == canonical(&other.basis)
    }

    /// Canonical basis: the Hermite normal form of the rows.
    pub fn canonical_basis(&self) -> ZMatrix {
        canonical(&self.basis)
    }

    /// The sublattice spanned by the images of the basis rows.
    pub fn image(&self, g: &Isometry) -> Result<Sublattice> {
        let rows = self
            .basis
            .rows_iter()
            .map(|r| {
                g.apply_int(r)
                    .ok_or_else(|| Error::NonIntegral("image of a basis vector".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let m = ZMatrix::from_rows(rows, self.ambient.rank());
        Sublattice::new(g.target().clone(), m)
    }

    /// Setwise preservation: `g(S) = S` as ℤ-modules.
    pub fn preserved_by(&self, g: &Isometry) -> bool {
        match self.image(g) {
            Ok(img) => img.same_span(self),
            Err(_) => false,
        }
    }

    /// `g(S) ⊆ S` as ℚ-spans (enough for saturated `S` and integral `g`).
    pub fn mapped_into_by(&self, g: &Isometry) -> bool {
        self.basis
            .rows_iter()
            .all(|r| self.spans_rationally(&g.apply(&to_q_vec(r))))
    }

    /// Coordinates of a vector of the sublattice with respect to its basis.
    pub fn coordinates_of(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        self.basis.solve_row_combination(v)
    }

    /// Ambient vector for basis coordinates.
    pub fn to_ambient(&self, coords: &[BigInt]) -> Vec<BigInt> {
        self.basis.vec_mul(coords)
    }
}

fn canonical(basis: &ZMatrix) -> ZMatrix {
    if basis.nrows() == 0 {
        basis.clone()
    } else {
        basis.hnf()
    }
}
