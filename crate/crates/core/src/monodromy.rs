//! Monodromy isometries `T_d` around a cusp, their mirror identity with
//! tensor actions, and the `SL(2, ℤ)` picture for elliptic curves.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::k3::MirrorData;
use crate::lattice::{extend_by_identity, IntegralLattice, Isometry};
use crate::matrix::ZMatrix;
use crate::mukai::tensor_action_as_isometry;

/// `T_d(x) = x + (x·f) d − ((d²/2)(x·f) + d·x) f` for `d ⊥ f, f′`.
///
/// So `T_d(f) = f`, `T_d(f′) = f′ + d − (d²/2) f` and `T_d(m) = m − (d·m) f`
/// on `⟨f, f′⟩^⊥`.
pub fn monodromy_td(l: &IntegralLattice, f: &[BigInt], fp: &[BigInt], d: &[BigInt]) -> Result<Isometry> {
    if !l.norm(f)?.is_zero() || !l.norm(fp)?.is_zero() || !l.pair(f, fp)?.is_one() {
        return Err(Error::NotHyperbolicPair("f, f′".into()));
    }
    if !l.pair(d, f)?.is_zero() || !l.pair(d, fp)?.is_zero() {
        return Err(Error::NotOrthogonal("d must be orthogonal to f and f′".into()));
    }
    let d2 = l.norm(d)?;
    if d2.is_odd() {
        return Err(Error::Invalid("d² must be even".into()));
    }
    let half = &d2 / 2;
    let gf = l.dual_form(f);
    let gd = l.dual_form(d);
    let n = l.rank();
    let mut m = ZMatrix::identity(n);
    for j in 0..n {
        let xf = &gf[j];
        let coef = &half * xf + &gd[j];
        for i in 0..n {
            let s = xf * &d[i] - &coef * &f[i];
            m[(i, j)] += s;
        }
    }
    Isometry::automorphism(l, m)
}

/// Outcome of comparing `mir_P ∘ (T_d ⊕ id) ∘ mir_P⁻¹` with `exp(d)`.
#[derive(Debug, Clone)]
pub struct MirrorIdentity {
    pub conjugate: Isometry,
    pub tensor: Isometry,
    /// Entries `(row, column, conjugate, tensor)` where the matrices differ.
    pub discrepancies: Vec<(usize, usize, BigInt, BigInt)>,
}

impl MirrorIdentity {
    pub fn holds(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

pub fn verify_monodromy_mirror(data: &MirrorData, d: &[BigInt]) -> Result<MirrorIdentity> {
    let td = monodromy_td(data.l(), data.f(), data.fprime(), d)?;
    let ext = extend_by_identity(&td, data.ltilde())?;
    let conjugate = data
        .mirp()
        .compose(&ext)?
        .compose(data.mirp_inverse())?;
    let tensor = tensor_action_as_isometry(d)?;
    let a = conjugate
        .integer_matrix()
        .ok_or_else(|| Error::NonIntegral("conjugated monodromy".into()))?;
    let b = tensor.integer_matrix().expect("tensor action is integral");
    let mut discrepancies = Vec::new();
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            if a[(i, j)] != b[(i, j)] {
                discrepancies.push((i, j, a[(i, j)].clone(), b[(i, j)].clone()));
            }
        }
    }
    Ok(MirrorIdentity {
        conjugate,
        tensor,
        discrepancies,
    })
}

/// A 2×2 integer matrix of determinant 1, acting on column vectors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sl2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl fmt::Debug for Sl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl Sl2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        let det = &a * &d - &b * &c;
        if !det.is_one() {
            return Err(Error::DetNotOne(det.to_string()));
        }
        Ok(Sl2 { a, b, c, d })
    }

    pub fn from_i64(m: [[i64; 2]; 2]) -> Result<Self> {
        Sl2::new(m[0][0].into(), m[0][1].into(), m[1][0].into(), m[1][1].into())
    }

    fn raw(a: i64, b: i64, c: i64, d: i64) -> Self {
        Sl2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Self {
        Sl2::raw(1, 0, 0, 1)
    }

    /// `[[0, −1], [1, 0]]`.
    pub fn s() -> Self {
        Sl2::raw(0, -1, 1, 0)
    }

    /// `[[1, 1], [0, 1]]`.
    pub fn t() -> Self {
        Sl2::raw(1, 1, 0, 1)
    }

    pub fn mul(&self, o: &Sl2) -> Sl2 {
        Sl2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn inverse(&self) -> Sl2 {
        Sl2 {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn neg(&self) -> Sl2 {
        Sl2 {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    pub fn pow(&self, k: i64) -> Sl2 {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Sl2::identity();
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&sq);
            }
            sq = sq.mul(&sq);
            e >>= 1;
        }
        out
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_identity(&self) -> bool {
        *self == Sl2::identity()
    }

    /// `±I`: trivial in `PSL(2, ℤ)`.
    pub fn is_central(&self) -> bool {
        self.is_identity() || self.neg().is_identity()
    }

    /// Representative of the class in `PSL(2, ℤ)`: the sign making the first
    /// nonzero entry positive.
    pub fn psl_representative(&self) -> Sl2 {
        let first = [&self.a, &self.b].into_iter().find(|x| !x.is_zero()).unwrap();
        if first.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn to_matrix(&self) -> ZMatrix {
        ZMatrix::from_rows(
            vec![vec![self.a.clone(), self.b.clone()], vec![self.c.clone(), self.d.clone()]],
            2,
        )
    }

    /// Preserves the alternating form `(r, s)·(r′, s′) = r s′ − s r′`
    /// (equivalent to determinant 1).
    pub fn preserves_alternating_form(&self) -> bool {
        let m = self.to_matrix();
        let j = crate::matrix::zmat(&[&[0, 1], &[-1, 0]]);
        m.transpose().mul(&j).mul(&m) == j
    }
}

/// `(S, T)`.
pub fn elliptic_generators() -> (Sl2, Sl2) {
    (Sl2::s(), Sl2::t())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    S,
    T,
    /// Monodromy `T_d` for the given vector `d`.
    Td(Vec<BigInt>),
}

impl Generator {
    pub fn label(&self) -> &'static str {
        match self {
            Generator::S => "S",
            Generator::T => "T",
            Generator::Td(_) => "Td",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: Generator,
    pub pow: i64,
}

/// A product of generator powers, read left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GroupWord {
    pub letters: Vec<Letter>,
}

impl GroupWord {
    pub fn new() -> Self {
        GroupWord::default()
    }

    /// Appends `gen^pow`, merging with an equal trailing generator. Powers of
    /// `S` are reduced modulo 4 and trivial letters are dropped.
    pub fn push(&mut self, gen: Generator, pow: i64) {
        let reduce = |g: &Generator, p: i64| if *g == Generator::S { p.rem_euclid(4) } else { p };
        match self.letters.last_mut() {
            Some(last) if last.gen == gen => {
                last.pow = reduce(&gen, last.pow + pow);
                if last.pow == 0 {
                    self.letters.pop();
                }
            }
            _ => {
                let pow = reduce(&gen, pow);
                if pow != 0 {
                    self.letters.push(Letter { gen, pow });
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Value in `SL(2, ℤ)`; only `S` and `T` letters are allowed.
    pub fn evaluate_sl2(&self) -> Result<Sl2> {
        let mut out = Sl2::identity();
        for l in &self.letters {
            let g = match l.gen {
                Generator::S => Sl2::s(),
                Generator::T => Sl2::t(),
                Generator::Td(_) => {
                    return Err(Error::Invalid("Td letters need a lattice".into()))
                }
            };
            out = out.mul(&g.pow(l.pow));
        }
        Ok(out)
    }

    /// Value as an isometry of `l`; only `Td` letters are allowed.
    pub fn evaluate_td(&self, l: &IntegralLattice, f: &[BigInt], fp: &[BigInt]) -> Result<Isometry> {
        let mut out = Isometry::identity(l);
        for letter in &self.letters {
            let Generator::Td(d) = &letter.gen else {
                return Err(Error::Invalid("S and T letters act on the elliptic lattice".into()));
            };
            let g = monodromy_td(l, f, fp, d)?.pow(letter.pow)?;
            out = out.compose(&g)?;
        }
        Ok(out)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| {
                if l.pow == 1 {
                    l.gen.label().to_string()
                } else {
                    format!("{}^{}", l.gen.label(), l.pow)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Writes `A ∈ SL(2, ℤ)` as a word in `S` and `T` by Euclid's algorithm:
/// repeatedly `A = T^q S A′` with `A′ = S⁻¹ T^{−q} A` and a smaller lower-left
/// entry, ending at `±T^b` (the sign becomes `S²`).
pub fn sl2z_decompose(m: &Sl2) -> Result<GroupWord> {
    let det = m.det();
    if !det.is_one() {
        return Err(Error::DetNotOne(det.to_string()));
    }
    let mut word = GroupWord::new();
    let mut cur = m.clone();
    while !cur.c.is_zero() {
        let q = cur.a.div_floor(&cur.c);
        let q_i64: i64 = (&q)
            .try_into()
            .map_err(|_| Error::Invalid("quotient exceeds 64 bits".into()))?;
        word.push(Generator::T, q_i64);
        word.push(Generator::S, 1);
        cur = Sl2::s().inverse().mul(&Sl2::t().pow(-q_i64)).mul(&cur);
    }
    // upper triangular with a = d = ±1
    let b: i64 = (&cur.b)
        .try_into()
        .map_err(|_| Error::Invalid("entry exceeds 64 bits".into()))?;
    if cur.a.is_one() {
        word.push(Generator::T, b);
    } else {
        // −[[1, −b], [0, 1]] = S² T^{−b}
        word.push(Generator::S, 2);
        word.push(Generator::T, -b);
    }
    Ok(word)
}

/// Basis order of `H*(E)` for an elliptic curve: `1, A, B, pt`.
pub const ELLIPTIC_BASIS: [&str; 4] = ["1", "A", "B", "pt"];

/// The permutation `1 ↔ A`, `pt ↔ B` exchanging even and odd cohomology.
pub fn elliptic_mirp() -> ZMatrix {
    let mut m = ZMatrix::zeros(4, 4);
    for (from, to) in [(0, 1), (1, 0), (2, 3), (3, 2)] {
        m[(to, from)] = BigInt::one();
    }
    m
}

/// `g` acting on `H¹ = ⟨A, B⟩`, identity on `H⁰ ⊕ H²`.
pub fn odd_action(g: &Sl2) -> ZMatrix {
    let mut m = ZMatrix::identity(4);
    m[(1, 1)] = g.a.clone();
    m[(1, 2)] = g.b.clone();
    m[(2, 1)] = g.c.clone();
    m[(2, 2)] = g.d.clone();
    m
}

/// `g` acting on `H⁰ ⊕ H² = ⟨1, pt⟩`, identity on `H¹`.
pub fn even_action(g: &Sl2) -> ZMatrix {
    let mut m = ZMatrix::identity(4);
    m[(0, 0)] = g.a.clone();
    m[(0, 3)] = g.b.clone();
    m[(3, 0)] = g.c.clone();
    m[(3, 3)] = g.d.clone();
    m
}

/// A diffeomorphism action on `H¹` carried to the even side by `mir_P`.
#[derive(Debug, Clone)]
pub struct Transport {
    pub conjugate: ZMatrix,
    pub word: GroupWord,
    /// Even-part action of the evaluated word.
    pub word_action: ZMatrix,
    /// Whether the transported action keeps the flag `⟨A⟩ ⊂ H¹`.
    pub preserves_flag: bool,
}

impl Transport {
    pub fn holds(&self) -> bool {
        self.conjugate == self.word_action
    }
}

pub fn elliptic_transport(g: &Sl2) -> Result<Transport> {
    let mir = elliptic_mirp();
    // mir_P is an involution
    let conjugate = mir.mul(&odd_action(g)).mul(&mir);
    let word = sl2z_decompose(g)?;
    let word_action = even_action(&word.evaluate_sl2()?);
    Ok(Transport {
        preserves_flag: preserves_elliptic_flag(&conjugate),
        conjugate,
        word,
        word_action,
    })
}

/// `⟨A⟩ ⊂ H¹` is mapped into itself, and `H¹` into itself.
pub fn preserves_elliptic_flag(m: &ZMatrix) -> bool {
    let a = m.column(1);
    let b = m.column(2);
    let only = |v: &[BigInt], keep: &[usize]| v.iter().enumerate().all(|(i, x)| keep.contains(&i) || x.is_zero());
    only(&a, &[1]) && only(&b, &[1, 2])
}

/// Elements that can be multiplied and compared canonically.
pub trait GroupElement: Clone {
    fn op(&self, other: &Self) -> Self;
    fn key(&self) -> Vec<BigInt>;
}

impl GroupElement for Sl2 {
    fn op(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn key(&self) -> Vec<BigInt> {
        vec![self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()]
    }
}

impl GroupElement for Isometry {
    fn op(&self, other: &Self) -> Self {
        self.compose(other).expect("closure generators share a lattice")
    }

    fn key(&self) -> Vec<BigInt> {
        let mut k = self.numer().data().to_vec();
        k.push(self.denom().clone());
        k
    }
}

/// Distinct products of generators up to a word length.
#[derive(Debug, Clone)]
pub struct Closure<G> {
    /// Canonically ordered by key; each with its shortest (then least) word
    /// of generator indices.
    pub elements: Vec<(Vec<usize>, G)>,
    pub commutative: bool,
    /// Pairs of distinct words found to give the same element.
    pub relations: Vec<(Vec<usize>, Vec<usize>)>,
}

/// Cap on recorded relations.
pub const MAX_RELATIONS: usize = 64;

pub fn group_closure<G: GroupElement>(identity: G, generators: &[G], max_len: usize) -> Closure<G> {
    let mut seen: BTreeMap<Vec<BigInt>, (Vec<usize>, G)> = BTreeMap::new();
    seen.insert(identity.key(), (Vec::new(), identity.clone()));
    let mut relations = Vec::new();
    let mut frontier = vec![(Vec::new(), identity)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (word, g) in &frontier {
            for (i, h) in generators.iter().enumerate() {
                let prod = g.op(h);
                let mut w = word.clone();
                w.push(i);
                match seen.get(&prod.key()) {
                    Some((existing, _)) => {
                        if relations.len() < MAX_RELATIONS {
                            relations.push((w, existing.clone()));
                        }
                    }
                    None => {
                        seen.insert(prod.key(), (w.clone(), prod.clone()));
                        next.push((w, prod));
                    }
                }
            }
        }
        frontier = next;
    }
    let commutative = generators.iter().all(|g| {
        generators
            .iter()
            .all(|h| g.op(h).key() == h.op(g).key())
    });
    Closure {
        elements: seen.into_values().collect(),
        commutative,
        relations,
    }
}

/// `T_d` for `d` in the K3 lattice, with the cusp of `data`.
pub fn td_for(data: &MirrorData, d: &[BigInt]) -> Result<Isometry> {
    monodromy_td(data.l(), data.f(), data.fprime(), d)
}
