//! Graded cohomology classes of Calabi–Yau manifolds of dimension at most 3,
//! the Mukai pairing, Mukai vectors and the actions of line bundles and shifts.
//!
//! A class of an `n`-dimensional manifold is a list of rational components
//! indexed by degree `j = 0..=2n`. A [`PairingFrame`] fixes, for each degree,
//! the matrix of `∫ α_j ∪ β_{2n−j}` in chosen bases.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{Isometry, StandardLattice, H0, H4, K3_RANK, MUKAI_RANK};
use crate::matrix::{dot, to_q_vec, QMatrix, ZMatrix};

/// An element of `ℚ(i)`; integral values are Gaussian integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gaussian {
    pub re: BigRational,
    pub im: BigRational,
}

impl Gaussian {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gaussian { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Gaussian {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Gaussian::new(
            BigRational::from_integer(re.into()),
            BigRational::from_integer(im.into()),
        )
    }

    pub fn zero() -> Self {
        Gaussian::from_ints(0, 0)
    }

    /// `iᵏ`.
    pub fn i_pow(k: usize) -> Self {
        match k % 4 {
            0 => Gaussian::from_ints(1, 0),
            1 => Gaussian::from_ints(0, 1),
            2 => Gaussian::from_ints(-1, 0),
            _ => Gaussian::from_ints(0, -1),
        }
    }

    pub fn conj(&self) -> Self {
        Gaussian::new(self.re.clone(), -self.im.clone())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }

    fn scale(&self, c: &BigRational) -> Self {
        Gaussian::new(&self.re * c, &self.im * c)
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im < BigRational::zero() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for Gaussian {
    type Output = Gaussian;
    fn add(self, o: Gaussian) -> Gaussian {
        Gaussian::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for Gaussian {
    type Output = Gaussian;
    fn sub(self, o: Gaussian) -> Gaussian {
        Gaussian::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for Gaussian {
    type Output = Gaussian;
    fn mul(self, o: Gaussian) -> Gaussian {
        Gaussian::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        Gaussian::new(-self.re, -self.im)
    }
}

/// The intersection data needed to evaluate the Mukai pairing.
///
/// `blocks[j]` has rows indexed by a basis of `Hʲ` and columns by a basis of
/// `H^{2n−j}`; its entries are `∫ xᵢ ∪ yₖ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingFrame {
    name: Option<String>,
    dim: usize,
    blocks: Vec<QMatrix>,
    /// `c₂/24` in `H⁴` coordinates (threefolds only).
    c2_over_24: Option<Vec<BigRational>>,
}

impl PairingFrame {
    pub fn new(dim: usize, blocks: Vec<QMatrix>) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if blocks.len() != 2 * dim + 1 {
            return Err(Error::DimensionMismatch {
                expected: 2 * dim + 1,
                got: blocks.len(),
            });
        }
        for j in [0, 2 * dim] {
            if blocks[j].nrows() != 1 || blocks[j].ncols() != 1 {
                return Err(Error::Invalid(format!("degree {j} space must be one-dimensional")));
            }
        }
        for j in 0..=2 * dim {
            let k = 2 * dim - j;
            let (a, b) = (&blocks[j], &blocks[k]);
            if a.nrows() != b.ncols() || a.ncols() != b.nrows() {
                return Err(Error::Invalid(format!("blocks {j} and {k} have incompatible shapes")));
            }
            // ∫ α_j ∪ β_k = (−1)^{jk} ∫ β_k ∪ α_j
            let expected = if (j * k) % 2 == 1 {
                a.transpose().neg()
            } else {
                a.transpose()
            };
            if *b != expected {
                return Err(Error::Invalid(format!(
                    "blocks {j} and {k} violate graded symmetry"
                )));
            }
        }
        Ok(PairingFrame {
            name: None,
            dim,
            blocks,
            c2_over_24: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Attaches `c₂(X)/24` given in `H⁴` coordinates.
    pub fn with_c2(mut self, c2_over_24: Vec<BigRational>) -> Result<Self> {
        if self.dim != 3 {
            return Err(Error::Invalid("c2 data only applies to threefolds".into()));
        }
        if c2_over_24.len() != self.degree_dim(4) {
            return Err(Error::DimensionMismatch {
                expected: self.degree_dim(4),
                got: c2_over_24.len(),
            });
        }
        self.c2_over_24 = Some(c2_over_24);
        Ok(self)
    }

    /// The K3 frame: `H²` is the K3 lattice, `∫ 1 ∪ pt = 1`.
    pub fn k3() -> Self {
        let l = StandardLattice::K3.build();
        PairingFrame {
            name: Some("K3-standard".into()),
            dim: 2,
            blocks: vec![
                QMatrix::identity(1),
                QMatrix::zeros(0, 0),
                l.gram().to_q(),
                QMatrix::zeros(0, 0),
                QMatrix::identity(1),
            ],
            c2_over_24: None,
        }
    }

    /// An elliptic curve with `H¹` basis `(A, B)`, `∫ A ∪ B = 1`.
    pub fn curve() -> Self {
        let one = BigRational::one();
        let z = BigRational::zero();
        let h1 = QMatrix::from_rows(vec![vec![z.clone(), one.clone()], vec![-one, z]], 2);
        PairingFrame {
            name: Some("curve-standard".into()),
            dim: 1,
            blocks: vec![QMatrix::identity(1), h1, QMatrix::identity(1)],
            c2_over_24: None,
        }
    }

    /// A threefold from `∫ H² ∪ H⁴` and the antisymmetric form on `H³`.
    pub fn threefold(h2_h4: QMatrix, h3: QMatrix) -> Result<Self> {
        let h4_h2 = h2_h4.transpose();
        PairingFrame::new(
            3,
            vec![
                QMatrix::identity(1),
                QMatrix::zeros(0, 0),
                h2_h4,
                h3,
                h4_h2,
                QMatrix::zeros(0, 0),
                QMatrix::identity(1),
            ],
        )
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn block(&self, j: usize) -> &QMatrix {
        &self.blocks[j]
    }

    /// Dimension of the degree-`j` space.
    pub fn degree_dim(&self, j: usize) -> usize {
        self.blocks[j].nrows()
    }

    pub fn c2_over_24(&self) -> Option<&[BigRational]> {
        self.c2_over_24.as_deref()
    }

    /// `∫ d ∪ c₂/24` for `d ∈ H²`.
    pub fn c2_form(&self, d: &[BigRational]) -> Result<BigRational> {
        let c = self.c2_over_24.as_ref().ok_or(Error::MissingC2)?;
        Ok(dot(&self.blocks[2].mul_vec(c), d))
    }

    fn integrate(&self, j: usize, a: &[BigRational], b: &[BigRational]) -> BigRational {
        dot(&self.blocks[j].vec_mul(a), b)
    }
}

/// A cohomology class, one rational vector per degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedClass {
    frame: Arc<PairingFrame>,
    components: Vec<Vec<BigRational>>,
}

impl GradedClass {
    pub fn new(frame: Arc<PairingFrame>, components: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = frame.dim;
        if components.len() != 2 * n + 1 {
            return Err(Error::DimensionMismatch {
                expected: 2 * n + 1,
                got: components.len(),
            });
        }
        for (j, c) in components.iter().enumerate() {
            if c.len() != frame.degree_dim(j) {
                return Err(Error::DimensionMismatch {
                    expected: frame.degree_dim(j),
                    got: c.len(),
                });
            }
        }
        Ok(GradedClass { frame, components })
    }

    pub fn zero(frame: Arc<PairingFrame>) -> Self {
        let components = (0..=2 * frame.dim)
            .map(|j| vec![BigRational::zero(); frame.degree_dim(j)])
            .collect();
        GradedClass { frame, components }
    }

    pub fn frame(&self) -> &Arc<PairingFrame> {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.dim
    }

    pub fn component(&self, j: usize) -> &[BigRational] {
        &self.components[j]
    }

    pub fn components(&self) -> &[Vec<BigRational>] {
        &self.components
    }

    /// The scalar in degree 0 or `2n`.
    pub fn scalar(&self, j: usize) -> &BigRational {
        &self.components[j][0]
    }

    /// Nonzero only in even degrees.
    pub fn is_even(&self) -> bool {
        self.components
            .iter()
            .enumerate()
            .all(|(j, c)| j % 2 == 0 || c.iter().all(Zero::is_zero))
    }

    pub fn is_integral(&self) -> bool {
        self.components.iter().flatten().all(BigRational::is_integer)
    }

    pub fn map(&self, f: impl Fn(&BigRational) -> BigRational) -> GradedClass {
        GradedClass {
            frame: self.frame.clone(),
            components: self
                .components
                .iter()
                .map(|c| c.iter().map(&f).collect())
                .collect(),
        }
    }

    /// Coordinates `r·h₀ + c + s·h₄` in the Mukai lattice of a K3 class.
    pub fn to_mukai_coords(&self) -> Result<Vec<BigRational>> {
        self.require_k3()?;
        let mut v = self.components[2].clone();
        v.push(self.components[0][0].clone());
        v.push(self.components[4][0].clone());
        Ok(v)
    }

    /// Inverse of [`GradedClass::to_mukai_coords`] for the standard K3 frame.
    pub fn from_mukai_coords(v: &[BigRational]) -> Result<GradedClass> {
        if v.len() != MUKAI_RANK {
            return Err(Error::DimensionMismatch {
                expected: MUKAI_RANK,
                got: v.len(),
            });
        }
        GradedClass::new(
            Arc::new(PairingFrame::k3()),
            vec![
                vec![v[H0].clone()],
                Vec::new(),
                v[..K3_RANK].to_vec(),
                Vec::new(),
                vec![v[H4].clone()],
            ],
        )
    }

    fn require_k3(&self) -> Result<()> {
        if self.frame.dim != 2 || self.frame.degree_dim(2) != K3_RANK {
            return Err(Error::Invalid("expected a class on the standard K3 frame".into()));
        }
        Ok(())
    }

    fn same_frame(&self, other: &GradedClass) -> bool {
        Arc::ptr_eq(&self.frame, &other.frame) || self.frame == other.frame
    }
}

/// `(−1)^{n−1} Σⱼ iʲ ∫ aⱼ ∪ b_{2n−j}`.
pub fn mukai_pairing(a: &GradedClass, b: &GradedClass) -> Result<Gaussian> {
    if !a.same_frame(b) {
        return Err(Error::FrameMismatch);
    }
    let n = a.dim();
    let mut total = Gaussian::zero();
    for j in 0..=2 * n {
        let v = a.frame.integrate(j, &a.components[j], &b.components[2 * n - j]);
        total = total + Gaussian::i_pow(j).scale(&v);
    }
    Ok(if n.is_multiple_of(2) { -total } else { total })
}

/// `ch · √td` for a K3 surface: `(r, c₁, r + c₁²/2 − c₂)`.
pub fn mukai_vector_k3(r: &BigInt, c1: &[BigInt], c2: &BigInt) -> Result<GradedClass> {
    let frame = Arc::new(PairingFrame::k3());
    if c1.len() != K3_RANK {
        return Err(Error::DimensionMismatch {
            expected: K3_RANK,
            got: c1.len(),
        });
    }
    let l = StandardLattice::K3.build();
    let c1sq = l.norm(c1)?;
    let s = r + c1sq / 2 - c2;
    GradedClass::new(
        frame,
        vec![
            vec![BigRational::from_integer(r.clone())],
            Vec::new(),
            to_q_vec(c1),
            Vec::new(),
            vec![BigRational::from_integer(s)],
        ],
    )
}

/// On a curve `td = 1`, so the Mukai vector is `(r, 0, deg)`.
pub fn mukai_vector_curve(r: &BigInt, deg: &BigInt) -> GradedClass {
    let frame = Arc::new(PairingFrame::curve());
    GradedClass {
        frame,
        components: vec![
            vec![BigRational::from_integer(r.clone())],
            vec![BigRational::zero(); 2],
            vec![BigRational::from_integer(deg.clone())],
        ],
    }
}

/// `ch · √td` on a Calabi–Yau threefold, `√td = 1 + c₂/24`.
pub fn mukai_vector_threefold(ch: &[Vec<BigRational>], frame: Arc<PairingFrame>) -> Result<GradedClass> {
    if frame.dim != 3 {
        return Err(Error::UnsupportedDimension(frame.dim));
    }
    let c = frame.c2_over_24.clone().ok_or(Error::MissingC2)?;
    if ch.len() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: ch.len(),
        });
    }
    let ch0 = ch[0].first().cloned().unwrap_or_else(BigRational::zero);
    let ch3 = ch[3].first().cloned().unwrap_or_else(BigRational::zero);
    if ch[0].len() != 1 || ch[3].len() != 1 {
        return Err(Error::Invalid("ch0 and ch3 must be scalars".into()));
    }
    for (k, j) in [(1, 2), (2, 4)] {
        if ch[k].len() != frame.degree_dim(j) {
            return Err(Error::DimensionMismatch {
                expected: frame.degree_dim(j),
                got: ch[k].len(),
            });
        }
    }
    let v4: Vec<BigRational> = ch[2].iter().zip(&c).map(|(x, y)| x + &ch0 * y).collect();
    let v6 = ch3 + frame.c2_form(&ch[1])?;
    let h3 = frame.degree_dim(3);
    GradedClass::new(
        frame,
        vec![
            vec![ch0],
            Vec::new(),
            ch[1].clone(),
            vec![BigRational::zero(); h3],
            v4,
            Vec::new(),
            vec![v6],
        ],
    )
}

/// Multiplication by `exp(d)`: `(r, c, s) ↦ (r, c + r d, s + c·d + r d²/2)`.
pub fn tensor_action(a: &GradedClass, d: &[BigInt]) -> Result<GradedClass> {
    if a.dim() != 2 {
        return Err(Error::UnsupportedDimension(a.dim()));
    }
    let g = a.frame.block(2);
    if d.len() != g.nrows() {
        return Err(Error::DimensionMismatch {
            expected: g.nrows(),
            got: d.len(),
        });
    }
    let d = to_q_vec(d);
    let r = a.components[0][0].clone();
    let c = &a.components[2];
    let s = &a.components[4][0];
    let d2 = dot(&g.vec_mul(&d), &d);
    let cd = dot(&g.vec_mul(c), &d);
    let two = BigRational::from_integer(2.into());
    let new_c: Vec<BigRational> = c.iter().zip(&d).map(|(x, y)| x + &r * y).collect();
    let new_s = s + cd + &r * d2 / two;
    let mut components = a.components.clone();
    components[2] = new_c;
    components[4] = vec![new_s];
    Ok(GradedClass {
        frame: a.frame.clone(),
        components,
    })
}

/// The cohomological action of the shift functor `[1]`: multiplication by −1.
pub fn shift_action(a: &GradedClass) -> GradedClass {
    a.map(|x| -x.clone())
}

/// `exp(d)` as an isometry of the Mukai lattice:
/// `h₀ ↦ h₀ + d + (d²/2) h₄`, `x ↦ x + (x·d) h₄` on `H²`, `h₄ ↦ h₄`.
pub fn tensor_action_as_isometry(d: &[BigInt]) -> Result<Isometry> {
    if d.len() != K3_RANK {
        return Err(Error::DimensionMismatch {
            expected: K3_RANK,
            got: d.len(),
        });
    }
    let mk = StandardLattice::MukaiK3.build();
    let k3 = StandardLattice::K3.build();
    let gd = k3.dual_form(d);
    let d2 = k3.norm(d)?;
    let mut m = ZMatrix::identity(MUKAI_RANK);
    for k in 0..K3_RANK {
        m[(k, H0)] = d[k].clone();
        m[(H4, k)] = gd[k].clone();
    }
    m[(H4, H0)] = d2 / 2;
    Isometry::automorphism(&mk, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{k3_e, k3_e8_root, k3_f};
    use crate::matrix::vadd;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    fn k3_class(r: i64, c: &[BigInt], s: i64) -> GradedClass {
        GradedClass::new(
            Arc::new(PairingFrame::k3()),
            vec![vec![q(r)], Vec::new(), to_q_vec(c), Vec::new(), vec![q(s)]],
        )
        .unwrap()
    }

    fn zero_c() -> Vec<BigInt> {
        vec![BigInt::zero(); K3_RANK]
    }

    #[test]
    fn pairing_examples() {
        let a = k3_class(1, &zero_c(), 1);
        assert_eq!(mukai_pairing(&a, &a).unwrap(), Gaussian::from_ints(-2, 0));
        let delta = k3_e8_root(0, 0);
        let d = k3_class(0, &delta, 0);
        assert_eq!(mukai_pairing(&d, &d).unwrap(), Gaussian::from_ints(-2, 0));
        let z = GradedClass::zero(a.frame().clone());
        assert!(mukai_pairing(&z, &a).unwrap().is_zero());
    }

    #[test]
    fn curve_pairing_is_imaginary_on_h1() {
        let frame = Arc::new(PairingFrame::curve());
        let e1 = GradedClass::new(frame.clone(), vec![vec![q(0)], vec![q(1), q(0)], vec![q(0)]]).unwrap();
        let e2 = GradedClass::new(frame, vec![vec![q(0)], vec![q(0), q(1)], vec![q(0)]]).unwrap();
        assert_eq!(mukai_pairing(&e1, &e2).unwrap(), Gaussian::from_ints(0, 1));
        assert_eq!(mukai_pairing(&e2, &e1).unwrap(), Gaussian::from_ints(0, -1));
    }

    #[test]
    fn frame_mismatch() {
        let a = k3_class(1, &zero_c(), 0);
        let b = mukai_vector_curve(&1.into(), &0.into());
        assert!(matches!(mukai_pairing(&a, &b), Err(Error::FrameMismatch)));
    }

    #[test]
    fn k3_vectors() {
        let o = mukai_vector_k3(&1.into(), &zero_c(), &0.into()).unwrap();
        assert_eq!(o, k3_class(1, &zero_c(), 1));
        let pt = mukai_vector_k3(&0.into(), &zero_c(), &(-1).into()).unwrap();
        assert_eq!(pt, k3_class(0, &zero_c(), 1));
        let d = vadd(&k3_e(0), &k3_f(0)); // d² = 2
        let line = mukai_vector_k3(&1.into(), &d, &0.into()).unwrap();
        assert_eq!(line, k3_class(1, &d, 2));
        assert_eq!(tensor_action(&o, &d).unwrap(), line);
    }

    #[test]
    fn curve_vectors() {
        let v = mukai_vector_curve(&2.into(), &3.into());
        assert_eq!(v.scalar(0), &q(2));
        assert_eq!(v.scalar(2), &q(3));
        assert!(v.is_even());
    }

    #[test]
    fn threefold_vectors() {
        // two-dimensional H², H⁴ with ∫ Hᵢ ∪ Lⱼ = δᵢⱼ, empty H³
        let frame = PairingFrame::threefold(QMatrix::identity(2), QMatrix::zeros(0, 0))
            .unwrap()
            .with_c2(vec![BigRational::new(7.into(), 2.into()), q(1)])
            .unwrap();
        let frame = Arc::new(frame);
        let o = mukai_vector_threefold(&[vec![q(1)], vec![q(0), q(0)], vec![q(0), q(0)], vec![q(0)]], frame.clone()).unwrap();
        assert_eq!(o.component(4), &[BigRational::new(7.into(), 2.into()), q(1)]);
        let pt = mukai_vector_threefold(&[vec![q(0)], vec![q(0), q(0)], vec![q(0), q(0)], vec![q(1)]], frame.clone()).unwrap();
        assert_eq!(pt.scalar(6), &q(1));
        let d = mukai_vector_threefold(&[vec![q(0)], vec![q(1), q(1)], vec![q(0), q(0)], vec![q(0)]], frame.clone()).unwrap();
        assert_eq!(d.scalar(6), &BigRational::new(9.into(), 2.into()));
        let bare = Arc::new(PairingFrame::threefold(QMatrix::identity(2), QMatrix::zeros(0, 0)).unwrap());
        assert!(matches!(
            mukai_vector_threefold(&[vec![q(1)], vec![q(0), q(0)], vec![q(0), q(0)], vec![q(0)]], bare),
            Err(Error::MissingC2)
        ));
        // even classes pair to rationals
        assert!(mukai_pairing(&o, &d).unwrap().is_real());
    }

    #[test]
    fn graded_symmetry_is_checked() {
        let bad = PairingFrame::new(1, vec![QMatrix::identity(1), QMatrix::identity(2), QMatrix::identity(1)]);
        assert!(bad.is_err());
    }

    #[test]
    fn shift_is_negation() {
        let o = k3_class(1, &zero_c(), 1);
        assert_eq!(shift_action(&o), k3_class(-1, &zero_c(), -1));
        assert_eq!(shift_action(&shift_action(&o)), o);
    }

    #[test]
    fn tensor_isometry_fixes_h4() {
        let d = vadd(&k3_e(1), &k3_e8_root(1, 3));
        let t = tensor_action_as_isometry(&d).unwrap();
        assert!(t.is_integral());
        let h4 = crate::lattice::unit(MUKAI_RANK, H4);
        assert_eq!(t.apply_int(&h4).unwrap(), h4);
        assert!(tensor_action_as_isometry(&zero_c()).unwrap().is_identity());
    }
}
