//! Mirror symmetry for lattice-polarized K3 surfaces at the level of lattices.
//!
//! A polarization is a sublattice `M` of the K3 lattice `L`. A hyperbolic
//! pair `(f, f′)` in `M^⊥` splits `M^⊥ = M̌ ⊥ ⟨f, f′⟩`, and the isometry
//! `mir_P` of the Mukai lattice `L̃ = L ⊥ ⟨h₀, h₄⟩` exchanges `h₀, h₄` with
//! `f′, −f` while fixing everything orthogonal to those four vectors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    definite_vectors, enumerate_vectors, extend_by_identity, orientation_sign, IntegralLattice,
    Isometry, Orientation, StandardLattice, Sublattice, H0, H4, K3_RANK, MUKAI_RANK,
};
use crate::matrix::{clear_denominators, dot, vec_gcd, vscale, vsub, ZMatrix};

/// Outcome of checking that `M` is an even nondegenerate primitive
/// sublattice of signature `(1, t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarizationReport {
    pub rank: usize,
    pub even: bool,
    pub nondegenerate: bool,
    pub signature: Option<(usize, usize)>,
    pub t: Option<usize>,
    pub primitive: bool,
    pub pass: bool,
}

pub fn validate_polarization(m: &Sublattice) -> PolarizationReport {
    let lat = m.lattice();
    let even = lat.is_even();
    let nondegenerate = lat.is_nondegenerate();
    let signature = lat.signature().ok();
    let t = signature.and_then(|(p, q)| (p == 1).then_some(q));
    let primitive = m.is_primitive();
    PolarizationReport {
        rank: m.rank(),
        even,
        nondegenerate,
        signature,
        t,
        primitive,
        pass: even && nondegenerate && t.is_some() && primitive,
    }
}

/// Largest support tried by [`find_hyperbolic_pair`].
pub const MAX_SEARCH_SUPPORT: usize = 4;

/// Searches `M^⊥` for `f, f′` with `f² = f′² = 0`, `f·f′ = 1`.
///
/// Candidates are ambient vectors with entries in `[−bound, bound]`, visited
/// by support size (up to [`MAX_SEARCH_SUPPORT`]), then support positions
/// lexicographically, then values in the order `1, −1, 2, −2, …`. The first
/// primitive isotropic `f` that admits a partner within the bound wins; the
/// partner is the first candidate in the same order, or else
/// `y − (y²/2) f` for a `y ∈ M^⊥` with `f·y = 1`.
pub fn find_hyperbolic_pair(mperp: &Sublattice, bound: u32) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
    let inertia = mperp.lattice().inertia();
    if inertia.positive == 0 || inertia.negative == 0 || bound == 0 {
        return Err(Error::NoneFound { bound });
    }
    let search = PairSearch::new(mperp, bound);
    let mut found = None;
    search.for_each_candidate(|f| {
        if !search.norm(f).is_zero() || !vec_gcd(f).is_one() {
            return false;
        }
        if let Some(fp) = search.partner(f) {
            found = Some((f.to_vec(), fp));
            return true;
        }
        false
    });
    found.ok_or(Error::NoneFound { bound })
}

struct PairSearch<'a> {
    mperp: &'a Sublattice,
    gram: &'a ZMatrix,
    annihilator: ZMatrix,
    bound: u32,
}

impl<'a> PairSearch<'a> {
    fn new(mperp: &'a Sublattice, bound: u32) -> Self {
        let annihilator = if mperp.rank() == 0 {
            ZMatrix::identity(mperp.ambient().rank())
        } else {
            mperp.basis().integer_kernel()
        };
        PairSearch {
            mperp,
            gram: mperp.ambient().gram(),
            annihilator,
            bound,
        }
    }

    fn norm(&self, x: &[BigInt]) -> BigInt {
        dot(&self.gram.vec_mul(x), x)
    }

    fn pair(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        dot(&self.gram.vec_mul(x), y)
    }

    fn inside(&self, x: &[BigInt]) -> bool {
        self.annihilator.rows_iter().all(|a| dot(a, x).is_zero()) && self.mperp.contains(x)
    }

    fn within_bound(&self, x: &[BigInt]) -> bool {
        let b = BigInt::from(self.bound);
        x.iter().all(|c| c.abs() <= b)
    }

    /// Visits in-lattice candidates until `visit` returns true.
    fn for_each_candidate(&self, mut visit: impl FnMut(&[BigInt]) -> bool) {
        let n = self.mperp.ambient().rank();
        let values: Vec<i64> = (1..=self.bound as i64).flat_map(|v| [v, -v]).collect();
        for support in 1..=n.min(MAX_SEARCH_SUPPORT) {
            let mut positions: Vec<usize> = (0..support).collect();
            loop {
                let mut choice = vec![0usize; support];
                loop {
                    let mut x = vec![BigInt::zero(); n];
                    for (p, c) in positions.iter().zip(&choice) {
                        x[*p] = BigInt::from(values[*c]);
                    }
                    if self.inside(&x) && visit(&x) {
                        return;
                    }
                    if !advance(&mut choice, values.len()) {
                        break;
                    }
                }
                if !next_combination(&mut positions, n) {
                    break;
                }
            }
        }
    }

    fn partner(&self, f: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut found = None;
        self.for_each_candidate(|y| {
            if self.norm(y).is_zero() && self.pair(f, y).is_one() {
                found = Some(y.to_vec());
                return true;
            }
            false
        });
        if found.is_some() {
            return found;
        }
        // y ∈ M^⊥ with f·y = 1 from a Bézout combination of the basis
        let basis = self.mperp.basis();
        let gf = self.gram.mul_vec(f);
        let u = ZMatrix::from_rows(basis.rows_iter().map(|b| vec![dot(b, &gf)]).collect(), 1);
        let (h, t, _) = u.hnf_with_transform();
        if !h[(0, 0)].is_one() {
            return None;
        }
        let y = basis.vec_mul(t.row(0));
        let c = self.norm(&y) / 2;
        let fp = vsub(&y, &vscale(&c, f));
        self.within_bound(&fp).then_some(fp)
    }
}

fn advance(choice: &mut [usize], base: usize) -> bool {
    for c in choice.iter_mut().rev() {
        *c += 1;
        if *c < base {
            return true;
        }
        *c = 0;
    }
    false
}

fn next_combination(pos: &mut [usize], n: usize) -> bool {
    let k = pos.len();
    for i in (0..k).rev() {
        if pos[i] < n - k + i {
            pos[i] += 1;
            for j in i + 1..k {
                pos[j] = pos[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn check_pair(l: &IntegralLattice, f: &[BigInt], fp: &[BigInt]) -> Result<()> {
    let ff = l.norm(f)?;
    let gg = l.norm(fp)?;
    let fg = l.pair(f, fp)?;
    if !ff.is_zero() || !gg.is_zero() || !fg.is_one() {
        return Err(Error::NotHyperbolicPair(format!(
            "f² = {ff}, f′² = {gg}, f·f′ = {fg}"
        )));
    }
    Ok(())
}

fn check_orthogonal(m: &Sublattice, v: &[BigInt], name: &str) -> Result<()> {
    for b in m.basis().rows_iter() {
        if !m.ambient().pair(b, v)?.is_zero() {
            return Err(Error::NotOrthogonal(format!("{name} is not orthogonal to M")));
        }
    }
    Ok(())
}

/// `M̌`: the orthogonal complement of `⟨f, f′⟩` inside `M^⊥`.
pub fn mirror_lattice(m: &Sublattice, f: &[BigInt], fp: &[BigInt]) -> Result<Sublattice> {
    check_pair(m.ambient(), f, fp)?;
    check_orthogonal(m, f, "f")?;
    check_orthogonal(m, fp, "f′")?;
    let mut rows = m.basis().to_rows();
    rows.push(f.to_vec());
    rows.push(fp.to_vec());
    let gens = ZMatrix::from_rows(rows, m.ambient().rank());
    Ok(Sublattice::spanned_by(m.ambient().clone(), &gens)?.orthogonal_complement())
}

/// `mir_P` on `L̃`: `h₀ ↦ f′`, `h₄ ↦ −f`, `f ↦ −h₄`, `f′ ↦ h₀`, identity on
/// `⟨h₀, h₄, f, f′⟩^⊥`. On `x ∈ L` it reads
/// `x ↦ (x·f) h₀ − (x·f′) h₄ + x − (x·f′) f − (x·f) f′`.
pub fn build_mirp(f: &[BigInt], fp: &[BigInt]) -> Result<Isometry> {
    let l = StandardLattice::K3.build();
    check_pair(&l, f, fp)?;
    let gf = l.dual_form(f);
    let gfp = l.dual_form(fp);
    let mut m = ZMatrix::zeros(MUKAI_RANK, MUKAI_RANK);
    for j in 0..K3_RANK {
        // column j is the image of the j-th basis vector x = e_j
        let (xf, xfp) = (&gf[j], &gfp[j]);
        m[(j, j)] = BigInt::one();
        for i in 0..K3_RANK {
            let s = xfp * &f[i] + xf * &fp[i];
            m[(i, j)] -= s;
        }
        m[(H0, j)] = xf.clone();
        m[(H4, j)] = -xfp;
    }
    for i in 0..K3_RANK {
        m[(i, H0)] = fp[i].clone();
        m[(i, H4)] = -&f[i];
    }
    let mk = StandardLattice::MukaiK3.build();
    let mirp = Isometry::automorphism(&mk, m)?;
    if !mirp.is_integral() {
        return Err(Error::NonIntegral("mirror isometry".into()));
    }
    Ok(mirp)
}

/// Embeds a K3-lattice vector into the Mukai lattice.
pub fn to_mukai(v: &[BigInt]) -> Vec<BigInt> {
    let mut out = v.to_vec();
    out.resize(MUKAI_RANK, BigInt::zero());
    out
}

/// A polarization with a chosen cusp and everything derived from it.
#[derive(Debug, Clone)]
pub struct MirrorData {
    l: IntegralLattice,
    ltilde: IntegralLattice,
    m: Sublattice,
    f: Vec<BigInt>,
    fp: Vec<BigInt>,
    mcheck: Sublattice,
    mirp: Isometry,
    mirp_inv: Isometry,
    t: usize,
}

impl MirrorData {
    pub fn new(m: Sublattice, f: Vec<BigInt>, fp: Vec<BigInt>) -> Result<Self> {
        let l = StandardLattice::K3.build();
        if !m.ambient().same_form(&l) {
            return Err(Error::BlockMismatch("polarization must live in the K3 lattice".into()));
        }
        let report = validate_polarization(&m);
        let t = match (report.pass, report.t) {
            (true, Some(t)) => t,
            _ => {
                return Err(Error::Invalid(format!(
                    "not an even primitive nondegenerate sublattice of signature (1, t): {report:?}"
                )))
            }
        };
        let mcheck = mirror_lattice(&m, &f, &fp)?;
        let mirp = build_mirp(&f, &fp)?;
        let mirp_inv = mirp.inverse()?;
        Ok(MirrorData {
            l,
            ltilde: StandardLattice::MukaiK3.build(),
            m,
            f,
            fp,
            mcheck,
            mirp,
            mirp_inv,
            t,
        })
    }

    /// Builds the data with the first hyperbolic pair found in `M^⊥`.
    pub fn search(m: Sublattice, bound: u32) -> Result<Self> {
        let (f, fp) = find_hyperbolic_pair(&m.orthogonal_complement(), bound)?;
        MirrorData::new(m, f, fp)
    }

    pub fn l(&self) -> &IntegralLattice {
        &self.l
    }

    pub fn ltilde(&self) -> &IntegralLattice {
        &self.ltilde
    }

    pub fn m(&self) -> &Sublattice {
        &self.m
    }

    pub fn f(&self) -> &[BigInt] {
        &self.f
    }

    pub fn fprime(&self) -> &[BigInt] {
        &self.fp
    }

    pub fn mcheck(&self) -> &Sublattice {
        &self.mcheck
    }

    pub fn mirp(&self) -> &Isometry {
        &self.mirp
    }

    pub fn mirp_inverse(&self) -> &Isometry {
        &self.mirp_inv
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Signature of `M̌`; `(1, 18 − t)` whenever the construction is sound.
    pub fn mcheck_signature(&self) -> Result<(usize, usize)> {
        self.mcheck.lattice().signature()
    }

    /// `M̌^⊥ = M ⊥ ⟨f, f′⟩`, as a sublattice of `L̃`.
    pub fn mcheck_perp_in_ltilde(&self) -> Sublattice {
        let mut rows: Vec<Vec<BigInt>> = self.m.basis().rows_iter().map(to_mukai).collect();
        rows.push(to_mukai(&self.f));
        rows.push(to_mukai(&self.fp));
        let basis = ZMatrix::from_rows(rows, MUKAI_RANK);
        Sublattice::new(self.ltilde.clone(), basis).expect("M, f and f′ are independent")
    }

    /// The mirror construction applied to `M̌` with the same cusp pair.
    pub fn double_mirror(&self) -> Result<Sublattice> {
        mirror_lattice(&self.mcheck, &self.f, &self.fp)
    }

    /// Flag `⟨f⟩ ⊂ f^⊥ ∩ T ⊂ T` on `T = M ⊥ ⟨f, f′⟩ ⊂ L̃`.
    pub fn filtration_flag(&self) -> Result<FiltrationFlag> {
        FiltrationFlag::new(self.mcheck_perp_in_ltilde(), to_mukai(&self.f))
    }
}

/// `γ(M) = M` setwise (on the saturation), by Hermite normal form equality.
pub fn is_m_allowable(g: &Isometry, m: &Sublattice) -> bool {
    g.is_integral() && m.saturation().preserved_by(g)
}

/// Allowability together with the orientation of positive 3-planes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Membership {
    pub allowable: bool,
    pub orientation: Orientation,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        self.allowable && self.orientation == Orientation::Preserved
    }
}

pub fn diff_coh_membership(g: &Isometry, m: &Sublattice) -> Result<Membership> {
    let frame = g.source().positive_frame()?;
    Ok(Membership {
        allowable: is_m_allowable(g, m),
        orientation: orientation_sign(g, &frame)?,
    })
}

/// `σ = ±mir_P ∘ (g ⊕ id) ∘ mir_P⁻¹` with the checks made on it.
#[derive(Debug, Clone)]
pub struct Conjugate {
    pub sigma: Isometry,
    /// Whether `g` itself passed [`diff_coh_membership`].
    pub input_member: bool,
    pub preserves_setwise: bool,
    pub fixes_pointwise: bool,
    /// Orientation of positive 4-planes in `L̃`.
    pub orientation: Orientation,
}

pub fn mirror_conjugate(g: &Isometry, sign: i32, data: &MirrorData) -> Result<Conjugate> {
    if sign != 1 && sign != -1 {
        return Err(Error::Invalid(format!("sign must be ±1, got {sign}")));
    }
    let ext = extend_by_identity(g, &data.ltilde)?;
    let mut sigma = data.mirp.compose(&ext)?.compose(&data.mirp_inv)?;
    if sign == -1 {
        sigma = sigma.negate();
    }
    if !sigma.is_integral() {
        return Err(Error::NonIntegral("mirror conjugate".into()));
    }
    let member = diff_coh_membership(g, &data.m)?.is_member();
    let s = data.mcheck_perp_in_ltilde();
    let preserves_setwise = s.preserved_by(&sigma);
    let fixes_pointwise = s
        .basis()
        .rows_iter()
        .all(|r| sigma.apply_int(r).as_deref() == Some(r));
    let frame = data.ltilde.positive_frame()?;
    Ok(Conjugate {
        orientation: orientation_sign(&sigma, &frame)?,
        sigma,
        input_member: member,
        preserves_setwise,
        fixes_pointwise,
    })
}

/// `σ⁻¹` restricted to `M ⊥ ⟨f, f′⟩`, with its fixed sublattice.
#[derive(Debug, Clone)]
pub struct BaseMap {
    /// Column `j` holds the coordinates of `σ⁻¹(b_j)` in the basis `b`.
    pub matrix: ZMatrix,
    pub basis: ZMatrix,
    pub is_identity: bool,
    pub is_minus_identity: bool,
    /// Vectors of `M ⊥ ⟨f, f′⟩` fixed by `σ`, in `L̃` coordinates.
    pub fixed: Sublattice,
}

impl BaseMap {
    /// The induced map on the period domain is trivial exactly for `±id`.
    pub fn is_trivial(&self) -> bool {
        self.is_identity || self.is_minus_identity
    }
}

pub fn induced_base_map(sigma: &Isometry, data: &MirrorData) -> Result<BaseMap> {
    let s = data.mcheck_perp_in_ltilde();
    if !s.preserved_by(sigma) {
        return Err(Error::NotPreserved);
    }
    let inv = sigma.inverse()?;
    let k = s.rank();
    let mut matrix = ZMatrix::zeros(k, k);
    for (j, b) in s.basis().rows_iter().enumerate() {
        let img = inv
            .apply_int(b)
            .ok_or_else(|| Error::NonIntegral("inverse image".into()))?;
        let c = s.coordinates_of(&img).ok_or(Error::NotPreserved)?;
        for (i, x) in c.into_iter().enumerate() {
            matrix[(i, j)] = x;
        }
    }
    let id = ZMatrix::identity(k);
    let fixed_coords = matrix.sub(&id).integer_kernel();
    let fixed_rows: Vec<Vec<BigInt>> = fixed_coords.rows_iter().map(|c| s.to_ambient(c)).collect();
    let fixed = Sublattice::new(
        data.ltilde.clone(),
        ZMatrix::from_rows(fixed_rows, MUKAI_RANK),
    )?;
    Ok(BaseMap {
        is_identity: matrix == id,
        is_minus_identity: matrix == id.neg(),
        basis: s.basis().clone(),
        matrix,
        fixed,
    })
}

/// `z = re + i·im` in coordinates of a lattice (typically `M^⊥`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodPoint {
    pub re: Vec<BigRational>,
    pub im: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodReport {
    /// `z² = 0`, i.e. `re² = im²` and `re·im = 0`.
    pub isotropic: bool,
    /// `z·z̄ = re² + im² > 0`.
    pub positive: bool,
    /// A (−2)-vector orthogonal to `z` within the bound, if any.
    pub witness: Option<Vec<BigInt>>,
    pub bound: u32,
    /// True when every (−2)-vector orthogonal to `z` was inspected, so the
    /// verdict does not depend on the bound.
    pub exhaustive: bool,
}

impl PeriodReport {
    /// Valid up to the bound (or unconditionally when exhaustive).
    pub fn valid(&self) -> bool {
        self.isotropic && self.positive && self.witness.is_none()
    }
}

/// Period-domain membership of `z` in a lattice `N = M^⊥`.
///
/// When the orthogonal complement of `z` in `N` is negative definite (the
/// case for signature `(2, *)`), all of its roots are listed and the bound
/// only filters coordinates. Otherwise the bounded box in `N` is scanned.
/// The witness is the lexicographically greatest offending root.
pub fn is_period_point(n: &IntegralLattice, z: &PeriodPoint, bound: u32) -> Result<PeriodReport> {
    for v in [&z.re, &z.im] {
        if v.len() != n.rank() {
            return Err(Error::DimensionMismatch {
                expected: n.rank(),
                got: v.len(),
            });
        }
    }
    let rr = n.pair_q(&z.re, &z.re);
    let ii = n.pair_q(&z.im, &z.im);
    let ri = n.pair_q(&z.re, &z.im);
    let isotropic = rr == ii && ri.is_zero();
    let positive = (&rr + &ii).is_positive();
    let mut report = PeriodReport {
        isotropic,
        positive,
        witness: None,
        bound,
        exhaustive: false,
    };
    if !(isotropic && positive) {
        return Ok(report);
    }
    let g = n.gram().to_q();
    let constraints = ZMatrix::from_rows(
        vec![
            clear_denominators(&g.mul_vec(&z.re)),
            clear_denominators(&g.mul_vec(&z.im)),
        ],
        n.rank(),
    );
    let kernel = constraints.integer_kernel();
    let k = n.restrict(&kernel);
    let minus_two = BigInt::from(-2);
    let b = BigInt::from(bound);
    let in_box = |x: &Vec<BigInt>| x.iter().all(|c| c.abs() <= b);
    let inertia = k.inertia();
    let roots: Vec<Vec<BigInt>> = if kernel.nrows() > 0 && inertia.positive == 0 && inertia.nullity == 0 {
        let all: Vec<Vec<BigInt>> = definite_vectors(&k, &minus_two)?
            .iter()
            .map(|c| kernel.vec_mul(c))
            .collect();
        report.exhaustive = all.iter().all(in_box);
        all.into_iter().filter(in_box).collect()
    } else {
        let zq = |x: &[BigInt]| -> bool {
            let xq: Vec<BigRational> = x.iter().map(|c| BigRational::from_integer(c.clone())).collect();
            n.pair_q(&xq, &z.re).is_zero() && n.pair_q(&xq, &z.im).is_zero()
        };
        enumerate_vectors(n, &minus_two, bound)
            .vectors
            .into_iter()
            .filter(|x| zq(x))
            .collect()
    };
    report.witness = roots.into_iter().max();
    Ok(report)
}

/// `⟨w⟩ ⊂ w^⊥ ∩ T ⊂ T` for an isotropic `w` in a sublattice `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationFlag {
    pub w: Vec<BigInt>,
    pub steps: [Sublattice; 3],
}

impl FiltrationFlag {
    pub fn new(t: Sublattice, w: Vec<BigInt>) -> Result<Self> {
        let amb = t.ambient().clone();
        if w.iter().all(Zero::is_zero) || !t.contains(&w) {
            return Err(Error::Invalid("w must be a nonzero vector of T".into()));
        }
        if !amb.norm(&w)?.is_zero() {
            return Err(Error::Invalid("w must be isotropic".into()));
        }
        let line = Sublattice::new(amb.clone(), ZMatrix::from_rows(vec![w.clone()], amb.rank()))?
            .saturation();
        // x ∈ T with x·w = 0, in T-coordinates
        let gw = amb.dual_form(&w);
        let form = ZMatrix::from_rows(vec![t.basis().mul_vec(&gw)], t.rank());
        let coords = form.integer_kernel();
        let rows: Vec<Vec<BigInt>> = coords.rows_iter().map(|c| t.to_ambient(c)).collect();
        let middle = Sublattice::new(amb.clone(), ZMatrix::from_rows(rows, amb.rank()))?.saturation();
        Ok(FiltrationFlag {
            w,
            steps: [line, middle, t.saturation()],
        })
    }
}

/// Whether `σ` maps every step of the flag into itself.
pub fn preserves_filtration(sigma: &Isometry, flag: &FiltrationFlag) -> bool {
    flag.steps.iter().all(|s| s.mapped_into_by(sigma))
}

/// Positive 4-frame of `L̃` used for orientation checks.
pub fn mukai_positive_frame() -> Result<crate::lattice::PositiveFrame> {
    StandardLattice::MukaiK3.build().positive_frame()
}
