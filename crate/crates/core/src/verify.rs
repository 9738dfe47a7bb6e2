//! Self-checks over the bundled corpus, grouped into suites. Each check is
//! exact; random inputs come from fixed seeds so reports are reproducible.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus;
use crate::error::{Error, Result};
use crate::k3::{
    diff_coh_membership, is_period_point, mirror_conjugate, mukai_positive_frame, MirrorData,
    PeriodPoint,
};
use crate::lattice::{
    enumerate_vectors, extend_by_identity, orientation_sign, reflection, IntegralLattice, Isometry,
    Orientation, PositiveFrame, StandardLattice, Sublattice, K3_RANK,
};
use crate::matrix::{to_q_vec, vadd, vscale, zvec, ZMatrix};
use crate::monodromy::{
    elliptic_generators, elliptic_transport, monodromy_td, sl2z_decompose, td_for,
    verify_monodromy_mirror, Generator, GroupWord, Sl2,
};
use crate::toric::{
    count_points, dolgachev_evidence, dual_polytope, hodge_numbers, toric_divisor_rank, HodgeNumbers,
    LatticePolytope,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Lattice,
    Mirror,
    Monodromy,
    Elliptic,
    Toric,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Lattice,
        Suite::Mirror,
        Suite::Monodromy,
        Suite::Elliptic,
        Suite::Toric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lattice => "lattice",
            Suite::Mirror => "mirror",
            Suite::Monodromy => "monodromy",
            Suite::Elliptic => "elliptic",
            Suite::Toric => "toric",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {}: {} ({})", self.suite.name(), self.name, self.detail)
    }
}

fn check(suite: Suite, name: &str, outcome: Result<(bool, String)>) -> Check {
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    Check {
        suite,
        name: name.to_string(),
        passed,
        detail,
    }
}

pub fn run(suite: Suite) -> Vec<Check> {
    let s = suite;
    match suite {
        Suite::Lattice => vec![
            check(s, "standard signatures", standard_signatures()),
            check(s, "E8 root count", e8_roots()),
            check(s, "orientation suite", orientation_suite()),
        ],
        Suite::Mirror => vec![
            check(s, "mirP integral isometry", mirp_integrality()),
            check(s, "mirror lattice signatures", mirror_signatures()),
            check(s, "quartic mirror chain", quartic_chain_lattice()),
            check(s, "period-point walls", period_walls()),
            check(s, "mirror conjugation homomorphism", conjugation_homomorphism()),
        ],
        Suite::Monodromy => vec![
            check(s, "monodromy-tensor identity", monodromy_mirror_identity()),
            check(s, "Td homomorphism", td_homomorphism()),
            check(s, "Td membership", td_membership()),
        ],
        Suite::Elliptic => vec![check(s, "SL(2,Z) suite", elliptic_suite())],
        Suite::Toric => vec![
            check(s, "octic Hodge numbers", octic_numbers()),
            check(s, "quartic divisor ranks", quartic_chain_toric()),
            check(s, "duality and point oracle", duality_and_points()),
        ],
    }
}

pub fn run_all() -> Vec<Check> {
    Suite::ALL.into_iter().flat_map(run).collect()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_combination(rng: &mut impl Rng, basis: &ZMatrix, spread: i64) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); basis.ncols()];
    for row in basis.rows_iter() {
        let c = BigInt::from(rng.gen_range(-spread..=spread));
        v = vadd(&v, &vscale(&c, row));
    }
    v
}

/// Basis of `⟨f, f′⟩^⊥` in the K3 lattice.
fn cusp_complement(data: &MirrorData) -> ZMatrix {
    let pair = ZMatrix::from_rows(vec![data.f().to_vec(), data.fprime().to_vec()], K3_RANK);
    Sublattice::new(data.l().clone(), pair)
        .expect("independent pair")
        .orthogonal_complement()
        .basis()
        .clone()
}

/// A K3 lattice vector of norm `norm` (even), supported on random
/// coordinates outside the first hyperbolic plane plus `e₁ + c f₁`.
pub fn random_vector_of_norm(rng: &mut impl Rng, norm: i64) -> Vec<BigInt> {
    let k3 = StandardLattice::K3.build();
    let mut w = vec![BigInt::zero(); K3_RANK];
    for c in w.iter_mut().skip(2) {
        if rng.gen_bool(0.3) {
            *c = BigInt::from(rng.gen_range(-2..=2));
        }
    }
    let w2 = k3.norm(&w).expect("rank matches");
    let c = (BigInt::from(norm) - w2) / 2;
    w[0] += 1;
    w[1] += c;
    w
}

fn random_isometry(rng: &mut impl Rng, k3: &IntegralLattice, len: usize) -> Result<Isometry> {
    let mut g = Isometry::identity(k3);
    for _ in 0..len {
        let norm = if rng.gen_bool(0.5) { -2 } else { 2 };
        g = g.compose(&reflection(k3, &random_vector_of_norm(rng, norm))?)?;
    }
    Ok(g)
}

fn standard_signatures() -> Result<(bool, String)> {
    let expected = [(1, 1), (1, 1), (0, 8), (3, 19), (4, 20)];
    let mut got = Vec::new();
    for name in StandardLattice::ALL {
        got.push(name.build().signature()?);
    }
    Ok((got == expected, format!("{got:?}")))
}

fn e8_roots() -> Result<(bool, String)> {
    let e8 = StandardLattice::E8Neg.build();
    let n = enumerate_vectors(&e8, &BigInt::from(-2), 6).vectors.len();
    Ok((n == 240, format!("{n} roots at bound 6")))
}

fn orientation_suite() -> Result<(bool, String)> {
    let k3 = StandardLattice::K3.build();
    let mk = StandardLattice::MukaiK3.build();
    let f3 = k3.positive_frame()?;
    let f4 = mukai_positive_frame()?;
    let minus3 = orientation_sign(&Isometry::identity(&k3).negate(), &f3)?;
    let minus4 = orientation_sign(&Isometry::identity(&mk).negate(), &f4)?;
    let mut ok = minus3 == Orientation::Reversed && minus4 == Orientation::Preserved;
    let mut r = rng(7);
    let mut reflections_ok = 0;
    for _ in 0..50 {
        let g = reflection(&k3, &random_vector_of_norm(&mut r, -2))?;
        let ext = extend_by_identity(&g, &mk)?;
        if orientation_sign(&g, &f3)? == Orientation::Preserved
            && orientation_sign(&ext, &f4)? == Orientation::Preserved
        {
            reflections_ok += 1;
        }
    }
    ok &= reflections_ok == 50;
    let mut independent = 0;
    let mut multiplicative = 0;
    for _ in 0..50 {
        let g = random_isometry(&mut r, &k3, 4)?;
        let base = orientation_sign(&g, &f3)?;
        let mut same = true;
        for _ in 0..10 {
            let frame: PositiveFrame = f3.transformed(&random_isometry(&mut r, &k3, 3)?)?;
            same &= orientation_sign(&g, &frame)? == base;
        }
        independent += usize::from(same);
        let h = random_isometry(&mut r, &k3, 3)?;
        let gh = orientation_sign(&g.compose(&h)?, &f3)?.sign();
        if gh == base.sign() * orientation_sign(&h, &f3)?.sign() {
            multiplicative += 1;
        }
    }
    ok &= independent == 50 && multiplicative == 50;
    Ok((
        ok,
        format!(
            "-Id: p=3 {minus3:?}, p=4 {minus4:?}; reflections {reflections_ok}/50; frame-independent {independent}/50; multiplicative {multiplicative}/50"
        ),
    ))
}

fn mirp_integrality() -> Result<(bool, String)> {
    let all = corpus::polarizations()?;
    let gram = StandardLattice::MukaiK3.build().gram().clone();
    let good = all
        .iter()
        .filter(|(_, d)| {
            d.mirp()
                .integer_matrix()
                .is_some_and(|m| m.transpose().mul(&gram).mul(m) == gram)
        })
        .count();
    Ok((good == all.len() && all.len() >= 5, format!("{good}/{} polarizations", all.len())))
}

fn mirror_signatures() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, d) in corpus::polarizations()? {
        let sig = d.mcheck_signature()?;
        let t = d.t();
        ok &= d.mcheck().rank() == 19 - t && sig == (1, 18 - t);
        let dm = d.double_mirror()?;
        let m = d.m().saturation();
        ok &= dm.rank() == m.rank() && dm.lattice().signature()? == m.lattice().signature()?;
        ok &= dm.lattice().det() == m.lattice().det();
        parts.push(format!("{name} (1,{})", sig.1));
    }
    Ok((ok, parts.join(", ")))
}

fn quartic_chain_lattice() -> Result<(bool, String)> {
    let d = corpus::polarization("k3-quartic")?;
    let sig = d.mcheck_signature()?;
    let dm = d.double_mirror()?;
    let gram = dm.lattice().gram().clone();
    let ok = d.mcheck().rank() == 19 && sig == (1, 18) && gram == ZMatrix::from_rows(vec![zvec(&[4])], 1);
    Ok((ok, format!("Mcheck rank {} signature {:?}, double mirror Gram {:?}", d.mcheck().rank(), sig, gram.data())))
}

fn period_walls() -> Result<(bool, String)> {
    let n = StandardLattice::U.build().direct_sum(&StandardLattice::U.build());
    let bad = PeriodPoint {
        re: to_q_vec(&zvec(&[1, 1, 0, 0])),
        im: to_q_vec(&zvec(&[0, 0, 1, 1])),
    };
    let good = PeriodPoint {
        re: to_q_vec(&zvec(&[1, 2, 0, 0])),
        im: to_q_vec(&zvec(&[0, 0, 1, 2])),
    };
    let rb = is_period_point(&n, &bad, 5)?;
    let rg = is_period_point(&n, &good, 5)?;
    let ok = !rb.valid() && rb.witness == Some(zvec(&[1, -1, 0, 0])) && rg.valid();
    Ok((ok, format!("witness {:?}, second valid: {}", rb.witness, rg.valid())))
}

/// M-allowable generators of Donaldson type: reflections in roots of `M̌`
/// and monodromies `T_d` with `d ∈ M̌`.
fn conjugation_generators(data: &MirrorData, rng: &mut impl Rng) -> Result<Vec<Isometry>> {
    let l = data.l();
    let mut gens = Vec::new();
    for row in data.mcheck().basis().rows_iter() {
        if l.norm(row)? == BigInt::from(-2) {
            gens.push(reflection(l, row)?);
        }
        if gens.len() == 3 {
            break;
        }
    }
    for _ in 0..3 {
        let d = random_combination(rng, data.mcheck().basis(), 1);
        gens.push(td_for(data, &d)?);
    }
    Ok(gens)
}

fn random_word(rng: &mut impl Rng, gens: &[Isometry], max_len: usize) -> Result<Isometry> {
    let len = rng.gen_range(1..=max_len);
    let mut g = gens[rng.gen_range(0..gens.len())].clone();
    for _ in 1..len {
        g = g.compose(&gens[rng.gen_range(0..gens.len())])?;
    }
    Ok(g)
}

fn conjugation_homomorphism() -> Result<(bool, String)> {
    let mut r = rng(10);
    let mut good = 0;
    let mut total = 0;
    let all = corpus::polarizations()?;
    for k in 0..30 {
        let data = &all[k % all.len()].1;
        let gens = conjugation_generators(data, &mut r)?;
        let g = random_word(&mut r, &gens, 3)?;
        let h = random_word(&mut r, &gens, 3)?;
        let cg = mirror_conjugate(&g, 1, data)?;
        let ch = mirror_conjugate(&h, 1, data)?;
        let cgh = mirror_conjugate(&g.compose(&h)?, 1, data)?;
        let hom = cgh.sigma == cg.sigma.compose(&ch.sigma)?;
        let shape = [&cg, &ch, &cgh]
            .iter()
            .all(|c| c.sigma.is_integral() && c.sigma.preserves_form() && c.preserves_setwise);
        let orient = [&cg, &ch, &cgh]
            .iter()
            .all(|c| !c.input_member || c.orientation == Orientation::Preserved);
        total += 1;
        good += usize::from(hom && shape && orient);
    }
    Ok((good == total, format!("{good}/{total} pairs")))
}

fn monodromy_mirror_identity() -> Result<(bool, String)> {
    let mut r = rng(2);
    let mut good = 0;
    let mut total = 0;
    for (_, data) in corpus::polarizations()? {
        let basis = cusp_complement(&data);
        for _ in 0..20 {
            let d = random_combination(&mut r, &basis, 2);
            total += 1;
            good += usize::from(verify_monodromy_mirror(&data, &d)?.holds());
        }
    }
    Ok((good == total, format!("{good}/{total} vectors d")))
}

fn td_homomorphism() -> Result<(bool, String)> {
    let data = corpus::polarization("k3-quartic")?;
    let basis = cusp_complement(&data);
    let mut r = rng(3);
    let mut good = 0;
    for _ in 0..50 {
        let d = random_combination(&mut r, &basis, 2);
        let e = random_combination(&mut r, &basis, 2);
        let lhs = td_for(&data, &d)?.compose(&td_for(&data, &e)?)?;
        let rhs = td_for(&data, &vadd(&d, &e))?;
        let injective = td_for(&data, &d)?.is_identity() == d.iter().all(Zero::is_zero);
        good += usize::from(lhs == rhs && injective);
    }
    Ok((good == 50, format!("{good}/50 pairs")))
}

fn td_membership() -> Result<(bool, String)> {
    let mut r = rng(4);
    let mut good = 0;
    let mut total = 0;
    for (_, data) in corpus::polarizations()? {
        for _ in 0..5 {
            let d = random_combination(&mut r, data.mcheck().basis(), 2);
            let t = monodromy_td(data.l(), data.f(), data.fprime(), &d)?;
            total += 1;
            good += usize::from(diff_coh_membership(&t, data.m())?.is_member());
        }
    }
    Ok((good == total, format!("{good}/{total} monodromies")))
}

/// A random word in `S^{±}, T^{±k}` of length at most `max_len`.
pub fn random_sl2_word(rng: &mut impl Rng, max_len: usize) -> GroupWord {
    let len = rng.gen_range(0..=max_len);
    let mut w = GroupWord::new();
    for _ in 0..len {
        if rng.gen_bool(0.5) {
            w.letters.push(crate::monodromy::Letter {
                gen: Generator::S,
                pow: rng.gen_range(1..=3),
            });
        } else {
            let mut k = rng.gen_range(-4..=4);
            if k == 0 {
                k = 1;
            }
            w.letters.push(crate::monodromy::Letter { gen: Generator::T, pow: k });
        }
    }
    w
}

fn elliptic_suite() -> Result<(bool, String)> {
    let (s, t) = elliptic_generators();
    let st = s.mul(&t);
    let relations = s.pow(4).is_identity()
        && st.pow(6).is_identity()
        && s.pow(2).mul(&t) == t.mul(&s.pow(2))
        && s.pow(2).mul(&s) == s.mul(&s.pow(2))
        && s.pow(2) == Sl2::identity().neg();
    let mut r = rng(5);
    let mut round_trips = 0;
    for _ in 0..100 {
        let a = random_sl2_word(&mut r, 30).evaluate_sl2()?;
        if sl2z_decompose(&a)?.evaluate_sl2()? == a {
            round_trips += 1;
        }
    }
    let mut transports = 0;
    for _ in 0..20 {
        let g = random_sl2_word(&mut r, 10).evaluate_sl2()?;
        let tr = elliptic_transport(&g)?;
        if tr.holds() && tr.preserves_flag {
            transports += 1;
        }
    }
    Ok((
        relations && round_trips == 100 && transports == 20,
        format!("relations {relations}; round trips {round_trips}/100; transports {transports}/20"),
    ))
}

fn octic_numbers() -> Result<(bool, String)> {
    let p = corpus::polytope("octic-11222")?;
    let h = hodge_numbers(&p)?;
    let dual = dual_polytope(&p)?.to_lattice()?;
    let hd = hodge_numbers(&dual)?;
    let ok = h.h21 == 86 && h.polynomial == 83 && h.correction == 3 && h.h11 == hd.h21 && h.h21 == hd.h11;
    Ok((ok, format_hodge(&h)))
}

pub fn format_hodge(h: &HodgeNumbers) -> String {
    format!(
        "h11 = {}, h21 = {}, polynomial = {}, correction = {}",
        h.h11, h.h21, h.polynomial, h.correction
    )
}

fn quartic_chain_toric() -> Result<(bool, String)> {
    let p = corpus::polytope("quartic")?;
    let r = toric_divisor_rank(&p)?;
    let d = dolgachev_evidence(&p)?;
    let ok = r.rank == 1 && d.rank_delta == 1 && d.rank_dual == 19 && d.equality();
    Ok((ok, format!("rank M = {}, rank M* = {}, sum {}", d.rank_delta, d.rank_dual, d.rank_delta + d.rank_dual)))
}

/// Full box scan against the facet inequalities.
fn brute_force_count(p: &LatticePolytope) -> (usize, usize) {
    let d = p.dim();
    let lo: Vec<i64> = (0..d)
        .map(|k| p.vertices().iter().map(|v| i64::try_from(&v[k]).unwrap()).min().unwrap())
        .collect();
    let hi: Vec<i64> = (0..d)
        .map(|k| p.vertices().iter().map(|v| i64::try_from(&v[k]).unwrap()).max().unwrap())
        .collect();
    let (mut l, mut interior) = (0, 0);
    let mut x = lo.clone();
    loop {
        let xb: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
        let slacks: Vec<BigInt> = p.facets().iter().map(|f| f.slack(&xb)).collect();
        if slacks.iter().all(|s| *s >= BigInt::zero()) {
            l += 1;
            if slacks.iter().all(|s| *s > BigInt::zero()) {
                interior += 1;
            }
        }
        let mut k = 0;
        loop {
            if k == d {
                return (l, interior);
            }
            if x[k] < hi[k] {
                x[k] += 1;
                break;
            }
            x[k] = lo[k];
            k += 1;
        }
    }
}

fn duality_and_points() -> Result<(bool, String)> {
    let all = corpus::polytopes()?;
    let mut involution = 0;
    let mut oracle = 0;
    let mut hodge_pairs = 0;
    let mut hodge_ok = 0;
    for (_, p) in &all {
        let dual = dual_polytope(p)?.to_lattice()?;
        let back = dual_polytope(&dual)?.to_lattice()?;
        involution += usize::from(back == *p);
        let c = count_points(p);
        oracle += usize::from(brute_force_count(p) == (c.l, c.l_star));
        if p.dim() == 4 {
            hodge_pairs += 1;
            let (h, hd) = (hodge_numbers(p)?, hodge_numbers(&dual)?);
            hodge_ok += usize::from(h.h11 == hd.h21 && h.h21 == hd.h11);
        }
    }
    let n = all.len();
    Ok((
        involution == n && oracle == n && hodge_ok == hodge_pairs,
        format!("involution {involution}/{n}, point oracle {oracle}/{n}, Hodge duality {hodge_ok}/{hodge_pairs}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn lattice_and_elliptic_suites_pass() {
        for c in run(Suite::Lattice).into_iter().chain(run(Suite::Elliptic)) {
            assert!(c.passed, "{c}");
        }
    }
}
