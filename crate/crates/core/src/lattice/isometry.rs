use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{IntegralLattice, LatticeVector};
use crate::error::{Error, Result};
use crate::matrix::{clear_denominators, dot, to_q_vec, QMatrix, ZMatrix};

/// A form-preserving linear map `source → target`.
///
/// The matrix acts on column vectors: column `j` is the image of the j-th
/// basis vector. It is stored as an integer numerator over a positive
/// common denominator kept in lowest terms.
#[derive(Clone, PartialEq, Eq)]
pub struct Isometry {
    source: IntegralLattice,
    target: IntegralLattice,
    numer: ZMatrix,
    denom: BigInt,
}

impl fmt::Debug for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Isometry")
            .field("rank", &self.numer.nrows())
            .field("denom", &self.denom)
            .field("matrix", &self.numer)
            .finish()
    }
}

impl Isometry {
    /// Validates `Aᵀ G_target A = G_source` exactly.
    pub fn new(source: IntegralLattice, target: IntegralLattice, matrix: &QMatrix) -> Result<Self> {
        let (numer, denom) = split_denominator(matrix);
        let iso = Isometry::from_parts(source, target, numer, denom);
        iso.validate()?;
        Ok(iso)
    }

    pub fn from_integer(source: IntegralLattice, target: IntegralLattice, matrix: ZMatrix) -> Result<Self> {
        let iso = Isometry::from_parts(source, target, matrix, BigInt::one());
        iso.validate()?;
        Ok(iso)
    }

    /// Automorphism of one lattice.
    pub fn automorphism(lattice: &IntegralLattice, matrix: ZMatrix) -> Result<Self> {
        Isometry::from_integer(lattice.clone(), lattice.clone(), matrix)
    }

    pub fn identity(lattice: &IntegralLattice) -> Self {
        Isometry::from_parts(
            lattice.clone(),
            lattice.clone(),
            ZMatrix::identity(lattice.rank()),
            BigInt::one(),
        )
    }

    pub(crate) fn from_parts(
        source: IntegralLattice,
        target: IntegralLattice,
        numer: ZMatrix,
        denom: BigInt,
    ) -> Self {
        let mut iso = Isometry {
            source,
            target,
            numer,
            denom,
        };
        iso.reduce();
        iso
    }

    fn reduce(&mut self) {
        if self.denom.is_one() {
            return;
        }
        let g = self
            .numer
            .data()
            .iter()
            .fold(self.denom.clone(), |acc, x| acc.gcd(x));
        if !g.is_one() && !g.is_zero() {
            self.numer = self.numer.map(|x| x / &g);
            self.denom = &self.denom / &g;
        }
    }

    fn validate(&self) -> Result<()> {
        let n_s = self.source.rank();
        let n_t = self.target.rank();
        if self.numer.nrows() != n_t || self.numer.ncols() != n_s {
            return Err(Error::DimensionMismatch {
                expected: n_t,
                got: self.numer.nrows(),
            });
        }
        let lhs = self
            .numer
            .transpose()
            .mul(self.target.gram())
            .mul(&self.numer);
        let rhs = self.source.gram().scale(&(&self.denom * &self.denom));
        if lhs != rhs {
            return Err(Error::NotIsometry);
        }
        Ok(())
    }

    /// Integer numerator of the matrix; see [`Isometry::denom`].
    pub fn numer(&self) -> &ZMatrix {
        &self.numer
    }

    /// Positive common denominator, in lowest terms with the numerator.
    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    /// Re-checks the Gram identity; always true for values built by this crate.
    pub fn preserves_form(&self) -> bool {
        self.validate().is_ok()
    }

    pub fn source(&self) -> &IntegralLattice {
        &self.source
    }

    pub fn target(&self) -> &IntegralLattice {
        &self.target
    }

    pub fn rank(&self) -> usize {
        self.source.rank()
    }

    pub fn matrix(&self) -> QMatrix {
        let d = BigRational::from_integer(self.denom.clone());
        self.numer.to_q().map(|x| x / &d)
    }

    /// The integer matrix when every entry is integral.
    pub fn integer_matrix(&self) -> Option<&ZMatrix> {
        self.denom.is_one().then_some(&self.numer)
    }

    /// All entries integral and the inverse integral as well.
    pub fn is_integral(&self) -> bool {
        self.denom.is_one()
            && self.numer.is_square()
            && self.numer.det().abs().is_one()
    }

    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        let d = BigRational::from_integer(self.denom.clone());
        self.numer
            .to_q()
            .mul_vec(v)
            .into_iter()
            .map(|x| x / &d)
            .collect()
    }

    /// Image of an integer vector, if integral.
    pub fn apply_int(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let w = self.numer.mul_vec(v);
        if self.denom.is_one() {
            return Some(w);
        }
        w.iter()
            .all(|x| x.is_multiple_of(&self.denom))
            .then(|| w.iter().map(|x| x / &self.denom).collect())
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Isometry) -> Result<Isometry> {
        if !other.target.same_form(&self.source) {
            return Err(Error::LatticeMismatch);
        }
        Ok(Isometry::from_parts(
            other.source.clone(),
            self.target.clone(),
            self.numer.mul(&other.numer),
            &self.denom * &other.denom,
        ))
    }

    pub fn inverse(&self) -> Result<Isometry> {
        let inv = self
            .matrix()
            .inverse()
            .ok_or_else(|| Error::Invalid("isometry matrix is singular".into()))?;
        let (numer, denom) = split_denominator(&inv);
        Ok(Isometry::from_parts(
            self.target.clone(),
            self.source.clone(),
            numer,
            denom,
        ))
    }

    pub fn negate(&self) -> Isometry {
        Isometry::from_parts(
            self.source.clone(),
            self.target.clone(),
            self.numer.neg(),
            self.denom.clone(),
        )
    }

    /// `self^k` for an automorphism; negative powers use the inverse.
    pub fn pow(&self, k: i64) -> Result<Isometry> {
        if !self.source.same_form(&self.target) {
            return Err(Error::LatticeMismatch);
        }
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Isometry::identity(&self.source);
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.compose(&sq)?;
            }
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        self.denom.is_one() && self.numer.is_identity()
    }

    pub fn det(&self) -> BigRational {
        self.matrix().det()
    }
}

fn split_denominator(m: &QMatrix) -> (ZMatrix, BigInt) {
    let denom = m
        .data()
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let d = BigRational::from_integer(denom.clone());
    (m.map(|x| (x * &d).to_integer()), denom)
}

/// Reflection `x ↦ x − 2 (x·v)/(v·v) v` in a non-isotropic vector.
pub fn reflection(lattice: &IntegralLattice, v: &[BigInt]) -> Result<Isometry> {
    let vv = lattice.norm(v)?;
    if vv.is_zero() {
        return Err(Error::WrongNorm {
            expected: -2,
            got: "0".into(),
        });
    }
    let gv = lattice.dual_form(v);
    let n = lattice.rank();
    // A = vv·I − 2 v (Gv)ᵀ over denominator vv
    let mut numer = ZMatrix::identity(n).scale(&vv);
    for i in 0..n {
        for j in 0..n {
            let s = BigInt::from(2) * &v[i] * &gv[j];
            numer[(i, j)] -= s;
        }
    }
    let (numer, denom) = if vv.is_negative() {
        (numer.neg(), -vv)
    } else {
        (numer, vv)
    };
    Ok(Isometry::from_parts(lattice.clone(), lattice.clone(), numer, denom))
}

/// Reflection in a (−2)-vector: `x ↦ x + (x·v) v`, the cohomological action
/// of a spherical twist.
pub fn reflect_root(v: &LatticeVector) -> Result<Isometry> {
    let norm = v.norm();
    if norm != BigInt::from(-2) {
        return Err(Error::WrongNorm {
            expected: -2,
            got: norm.to_string(),
        });
    }
    reflection(v.lattice(), v.coords())
}

/// Extends an isometry of `L` to `L ⊥ N` by the identity on `N`, where
/// `ambient` must have `L` as its leading orthogonal block.
pub fn extend_by_identity(g: &Isometry, ambient: &IntegralLattice) -> Result<Isometry> {
    let k = g.source.rank();
    let n = ambient.rank();
    if !g.source.same_form(&g.target) {
        return Err(Error::BlockMismatch("isometry is not an automorphism".into()));
    }
    if k > n {
        return Err(Error::BlockMismatch(format!("block of rank {k} in rank {n}")));
    }
    let gram = ambient.gram();
    let leading_ok = (0..k).all(|i| (0..k).all(|j| gram[(i, j)] == g.source.gram()[(i, j)]));
    let split_ok = (0..k).all(|i| (k..n).all(|j| gram[(i, j)].is_zero()));
    if !leading_ok || !split_ok {
        return Err(Error::BlockMismatch(
            "ambient lattice does not split off the isometry's lattice".into(),
        ));
    }
    let mut numer = ZMatrix::identity(n).scale(&g.denom);
    for i in 0..k {
        for j in 0..k {
            numer[(i, j)] = g.numer[(i, j)].clone();
        }
    }
    Ok(Isometry::from_parts(
        ambient.clone(),
        ambient.clone(),
        numer,
        g.denom.clone(),
    ))
}

/// A basis of a positive definite subspace of maximal dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveFrame {
    lattice: IntegralLattice,
    vectors: Vec<Vec<BigRational>>,
}

impl PositiveFrame {
    /// Checks positivity through the leading principal minors of the frame Gram.
    pub fn new(lattice: IntegralLattice, vectors: Vec<Vec<BigRational>>) -> Result<Self> {
        for v in &vectors {
            if v.len() != lattice.rank() {
                return Err(Error::DimensionMismatch {
                    expected: lattice.rank(),
                    got: v.len(),
                });
            }
        }
        let frame = PositiveFrame { lattice, vectors };
        let g = frame.gram();
        for k in 1..=g.nrows() {
            let minor = QMatrix::from_fn(k, k, |i, j| g[(i, j)].clone());
            if !minor.det().is_positive() {
                return Err(Error::NotPositiveDefinite);
            }
        }
        Ok(frame)
    }

    pub fn from_integer(lattice: IntegralLattice, vectors: &[Vec<BigInt>]) -> Result<Self> {
        PositiveFrame::new(lattice, vectors.iter().map(|v| to_q_vec(v)).collect())
    }

    pub fn lattice(&self) -> &IntegralLattice {
        &self.lattice
    }

    pub fn vectors(&self) -> &[Vec<BigRational>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn gram(&self) -> QMatrix {
        let g = self.lattice.gram().to_q();
        let p = self.vectors.len();
        QMatrix::from_fn(p, p, |i, j| dot(&g.vec_mul(&self.vectors[i]), &self.vectors[j]))
    }

    /// Image of the frame under an isometry of its lattice.
    pub fn transformed(&self, g: &Isometry) -> Result<PositiveFrame> {
        PositiveFrame::new(
            self.lattice.clone(),
            self.vectors.iter().map(|v| g.apply(v)).collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Preserved,
    Reversed,
}

impl Orientation {
    pub fn sign(self) -> i32 {
        match self {
            Orientation::Preserved => 1,
            Orientation::Reversed => -1,
        }
    }
}

/// Sign of `det[(g fᵢ)·fⱼ]` for a maximal positive frame.
///
/// The projection of `g(P)` back onto `P` is an isomorphism for maximal
/// positive `P`, so the sign does not depend on the frame chosen.
pub fn orientation_sign(g: &Isometry, frame: &PositiveFrame) -> Result<Orientation> {
    if !g.source.same_form(&g.target) || !g.source.same_form(&frame.lattice) {
        return Err(Error::LatticeMismatch);
    }
    let inertia = frame.lattice.inertia();
    if inertia.positive != frame.len() {
        return Err(Error::FrameSize {
            expected: inertia.positive,
            got: frame.len(),
        });
    }
    // integer frame rows (positive rescaling leaves the sign alone)
    let rows: Vec<Vec<BigInt>> = frame.vectors.iter().map(|v| clear_denominators(v)).collect();
    let gram = frame.lattice.gram();
    let images: Vec<Vec<BigInt>> = rows.iter().map(|r| g.numer.mul_vec(r)).collect();
    let duals: Vec<Vec<BigInt>> = rows.iter().map(|r| gram.mul_vec(r)).collect();
    let p = rows.len();
    let m = ZMatrix::from_fn(p, p, |i, j| dot(&images[i], &duals[j]));
    let det = m.det();
    if det.is_zero() {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(if det.is_positive() {
        Orientation::Preserved
    } else {
        Orientation::Reversed
    })
}
