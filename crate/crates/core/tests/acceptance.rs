//! The ten acceptance criteria, each checked against test-side oracles and
//! timed. Prints one line per criterion and exits non-zero on any failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{oracle_count, oracle_facets, to_i64};
use mirrorlat::corpus;
use mirrorlat::k3::{is_period_point, mirror_conjugate, mirror_lattice, MirrorData, PeriodPoint};
use mirrorlat::lattice::{
    orientation_sign, reflection, IntegralLattice, Isometry, Orientation, PositiveFrame, StandardLattice, Sublattice,
    K3_RANK, MUKAI_RANK,
};
use mirrorlat::matrix::{to_q_vec, ZMatrix};
use mirrorlat::monodromy::{elliptic_transport, sl2z_decompose, td_for, verify_monodromy_mirror, Generator, Sl2};
use mirrorlat::toric::{count_points, dolgachev_evidence, dual_polytope, hodge_numbers, toric_divisor_rank};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// ---- lattice oracles ------------------------------------------------------

/// Gram matrix of `U³ ⊥ E8(−1)² ⊥ U(−1)`, written out from the Dynkin diagram.
fn mukai_gram() -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; MUKAI_RANK]; MUKAI_RANK];
    for b in 0..3 {
        g[2 * b][2 * b + 1] = 1;
        g[2 * b + 1][2 * b] = 1;
    }
    let edges = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)];
    for start in [6, 14] {
        for k in 0..8 {
            g[start + k][start + k] = -2;
        }
        for (a, b) in edges {
            g[start + a - 1][start + b - 1] = 1;
            g[start + b - 1][start + a - 1] = 1;
        }
    }
    g[22][23] = -1;
    g[23][22] = -1;
    g
}

fn gram_pair(g: &[Vec<i64>], a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut s = BigInt::zero();
    for (i, row) in g.iter().enumerate().take(a.len()) {
        for (j, &x) in row.iter().enumerate().take(b.len()) {
            if x != 0 {
                s += &a[i] * &b[j] * x;
            }
        }
    }
    s
}

fn k3_pair(a: &[BigInt], b: &[BigInt]) -> BigInt {
    gram_pair(&mukai_gram(), a, b)
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scale(c: &BigInt, a: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|x| c * x).collect()
}

/// Signature of a symmetric rational matrix by symmetric Gaussian elimination.
fn inertia(mut a: Vec<Vec<BigRational>>) -> (usize, usize, usize) {
    let n = a.len();
    let (mut pos, mut neg) = (0, 0);
    let mut k = 0;
    while k < n {
        if a[k][k].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                a.swap(k, i);
                for row in a.iter_mut() {
                    row.swap(k, i);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // replace e_k by e_k + e_j, whose norm is 2 a_kj ≠ 0
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[k][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][k] += v;
                }
            } else {
                k += 1;
                continue;
            }
        }
        let p = a[k][k].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &p;
            for j in k..n {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
        }
        for row in a.iter_mut().skip(k + 1) {
            row[k] = BigRational::zero();
        }
        for j in k + 1..n {
            a[k][j] = BigRational::zero();
        }
        k += 1;
    }
    (pos, neg, n - pos - neg)
}

fn restricted_gram(basis: &ZMatrix) -> Vec<Vec<BigRational>> {
    let rows: Vec<&[BigInt]> = basis.rows_iter().collect();
    rows.iter()
        .map(|a| rows.iter().map(|b| BigRational::from_integer(k3_pair(a, b))).collect())
        .collect()
}

fn complement(data: &MirrorData) -> ZMatrix {
    let pair = ZMatrix::from_rows(vec![data.f().to_vec(), data.fprime().to_vec()], K3_RANK);
    Sublattice::new(data.l().clone(), pair)
        .unwrap()
        .orthogonal_complement()
        .basis()
        .clone()
}

fn random_combination(rng: &mut ChaCha8Rng, basis: &ZMatrix) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); basis.ncols()];
    for row in basis.rows_iter() {
        let c = BigInt::from(rng.gen_range(-3..=3));
        v = add(&v, &scale(&c, row));
    }
    v
}

// ---- criteria -------------------------------------------------------------

fn mirp_integrality() -> Outcome {
    let all = corpus::polarizations().map_err(err)?;
    ensure(all.len() >= 5, "fewer than five polarizations")?;
    let g = mukai_gram();
    for (name, data) in &all {
        let m = data
            .mirp()
            .integer_matrix()
            .ok_or(format!("{name}: mir_P not integral"))?;
        ensure(m.nrows() == MUKAI_RANK && m.ncols() == MUKAI_RANK, format!("{name}: wrong shape"))?;
        // Mᵀ G M = G, entry by entry
        for i in 0..MUKAI_RANK {
            for j in 0..MUKAI_RANK {
                let (ci, cj) = (m.column(i), m.column(j));
                let want = BigInt::from(g[i][j]);
                ensure(gram_pair(&g, &ci, &cj) == want, format!("{name}: Gram entry ({i},{j})"))?;
            }
        }
    }
    Ok(format!("{} polarizations", all.len()))
}

/// `exp(d)(r h₀ + x + s h₄) = r h₀ + (x + r d) + (s + x·d + r d²/2) h₄`.
fn exp_oracle(d: &[BigInt], v: &[BigInt]) -> Vec<BigInt> {
    let (x, r, s) = (&v[..K3_RANK], &v[K3_RANK], &v[K3_RANK + 1]);
    let mut out = add(x, &scale(r, d));
    out.push(r.clone());
    out.push(s + k3_pair(x, d) + r * k3_pair(d, d) / 2);
    out
}

/// `T_d(x) = x + (x·f) d − ((d²/2)(x·f) + d·x) f`.
fn td_oracle(f: &[BigInt], d: &[BigInt], x: &[BigInt]) -> Vec<BigInt> {
    let xf = k3_pair(x, f);
    let coef: BigInt = k3_pair(d, d) / 2 * &xf + k3_pair(d, x);
    add(&add(x, &scale(&xf, d)), &scale(&-coef, f))
}

fn unit(n: usize, i: usize) -> Vec<BigInt> {
    (0..n).map(|k| BigInt::from(i64::from(k == i))).collect()
}

fn monodromy_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA2);
    let mut count = 0;
    for (name, data) in corpus::polarizations().map_err(err)? {
        let basis = complement(&data);
        let mirp = data.mirp();
        for _ in 0..20 {
            let d = random_combination(&mut rng, &basis);
            let report = verify_monodromy_mirror(&data, &d).map_err(err)?;
            ensure(report.holds(), format!("{name}: matrices differ"))?;
            // column by column: mir_P (T_d ⊕ id) mir_P⁻¹ e_j = exp(d) e_j,
            // using mir_P² = id
            for j in 0..MUKAI_RANK {
                let w = mirp.apply_int(&unit(MUKAI_RANK, j)).unwrap();
                let mut moved = td_oracle(data.f(), &d, &w[..K3_RANK]);
                moved.extend_from_slice(&w[K3_RANK..]);
                let lhs = mirp.apply_int(&moved).unwrap();
                let rhs = exp_oracle(&d, &unit(MUKAI_RANK, j));
                ensure(lhs == rhs, format!("{name}: column {j} differs from the oracle"))?;
                ensure(
                    report.tensor.apply_int(&unit(MUKAI_RANK, j)).unwrap() == rhs,
                    format!("{name}: tensor action column {j}"),
                )?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} vectors d"))
}

fn td_homomorphism() -> Outcome {
    let data = corpus::polarization("k3-quartic").map_err(err)?;
    let basis = complement(&data);
    let mut rng = ChaCha8Rng::seed_from_u64(0xA3);
    for k in 0..50 {
        let d = random_combination(&mut rng, &basis);
        let e = random_combination(&mut rng, &basis);
        let sum = add(&d, &e);
        let lhs = td_for(&data, &d).and_then(|a| a.compose(&td_for(&data, &e)?)).map_err(err)?;
        let rhs = td_for(&data, &sum).map_err(err)?;
        ensure(lhs == rhs, format!("pair {k}: T_d T_e ≠ T_(d+e)"))?;
        for j in 0..K3_RANK {
            let x = unit(K3_RANK, j);
            let want = td_oracle(data.f(), &d, &td_oracle(data.f(), &e, &x));
            ensure(lhs.apply_int(&x).unwrap() == want, format!("pair {k}: column {j} differs from the oracle"))?;
        }
    }
    Ok("50 pairs".into())
}

type M2 = [[i128; 2]; 2];

fn mul2(a: M2, b: M2) -> M2 {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn pow2(a: M2, k: u32) -> M2 {
    (0..k).fold([[1, 0], [0, 1]], |acc, _| mul2(acc, a))
}

fn to_m2(g: &Sl2) -> M2 {
    let c = |x: &BigInt| i128::try_from(x).unwrap();
    [[c(&g.a), c(&g.b)], [c(&g.c), c(&g.d)]]
}

const S: M2 = [[0, -1], [1, 0]];
const T: M2 = [[1, 1], [0, 1]];

fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> M2 {
    let len = rng.gen_range(0..=max_len);
    (0..len).fold([[1, 0], [0, 1]], |acc, _| {
        let g = if rng.gen_bool(0.5) {
            S
        } else {
            [[1, rng.gen_range(-4..=4)], [0, 1]]
        };
        mul2(acc, g)
    })
}

fn eval_letters(word: &mirrorlat::monodromy::GroupWord) -> M2 {
    word.letters.iter().fold([[1, 0], [0, 1]], |acc, l| {
        let g = match l.gen {
            Generator::S => pow2(S, l.pow.rem_euclid(4) as u32),
            Generator::T => [[1, l.pow as i128], [0, 1]],
            Generator::Td(_) => panic!("unexpected generator"),
        };
        mul2(acc, g)
    })
}

fn sl2(m: M2) -> Sl2 {
    Sl2::new(m[0][0].into(), m[0][1].into(), m[1][0].into(), m[1][1].into()).unwrap()
}

fn elliptic_suite() -> Outcome {
    let id = [[1, 0], [0, 1]];
    ensure(pow2(S, 4) == id, "S⁴ ≠ I")?;
    ensure(pow2(mul2(S, T), 6) == id, "(ST)⁶ ≠ I")?;
    let s2 = pow2(S, 2);
    ensure(mul2(s2, S) == mul2(S, s2) && mul2(s2, T) == mul2(T, s2), "S² not central")?;
    let (ls, lt) = mirrorlat::monodromy::elliptic_generators();
    ensure(to_m2(&ls) == S && to_m2(&lt) == T, "generator convention")?;
    ensure(ls.pow(4).is_identity() && ls.mul(&lt).pow(6).is_identity() && ls.pow(2).is_central(), "library relations")?;

    let mut rng = ChaCha8Rng::seed_from_u64(0xA4);
    for k in 0..100 {
        let a = random_word(&mut rng, 30);
        let w = sl2z_decompose(&sl2(a)).map_err(err)?;
        ensure(eval_letters(&w) == a, format!("word {k}: round trip"))?;
    }
    // mir swaps 1 ↔ A and B ↔ pt, so conjugating the H¹ action gives the
    // action on ⟨1, pt⟩ with the same entries
    let perm = [1usize, 0, 3, 2];
    for k in 0..20 {
        let g = random_word(&mut rng, 10);
        let tr = elliptic_transport(&sl2(g)).map_err(err)?;
        let word = eval_letters(&tr.word);
        ensure(word == g, format!("transport {k}: word"))?;
        let mut odd = [[0i128; 4]; 4];
        for (i, row) in odd.iter_mut().enumerate() {
            row[i] = 1;
        }
        odd[1][1] = g[0][0];
        odd[1][2] = g[0][1];
        odd[2][1] = g[1][0];
        odd[2][2] = g[1][1];
        for i in 0..4 {
            for j in 0..4 {
                let conj = odd[perm[i]][perm[j]];
                let even = match (i, j) {
                    (0, 0) => word[0][0],
                    (0, 3) => word[0][1],
                    (3, 0) => word[1][0],
                    (3, 3) => word[1][1],
                    _ => i128::from(i == j),
                };
                ensure(conj == even, format!("transport {k}: entry ({i},{j})"))?;
                ensure(
                    i128::try_from(&tr.conjugate[(i, j)]).unwrap() == conj,
                    format!("transport {k}: library conjugate ({i},{j})"),
                )?;
            }
        }
        ensure(tr.holds() && tr.preserves_flag, format!("transport {k}: library check"))?;
    }
    Ok("relations, 100 round trips, 20 transports".into())
}

fn octic_numbers() -> Outcome {
    let p = corpus::polytope("octic-11222").map_err(err)?;
    let dual = dual_polytope(&p).and_then(|d| d.to_lattice()).map_err(err)?;
    for q in [&p, &dual] {
        let v = to_i64(q);
        let c = count_points(q);
        ensure((c.l, c.l_star) == oracle_count(&v, &oracle_facets(&v)), "point counts disagree with the box scan")?;
    }
    let h = hodge_numbers(&p).map_err(err)?;
    let hd = hodge_numbers(&dual).map_err(err)?;
    ensure(h.h21 == 86, format!("h21 = {}", h.h21))?;
    ensure(h.polynomial == 83, format!("polynomial = {}", h.polynomial))?;
    ensure(h.correction == 3, format!("correction = {}", h.correction))?;
    ensure(h.h11 == hd.h21 && h.h21 == hd.h11, "dual does not swap the Hodge numbers")?;
    Ok(format!("h11 = {}, h21 = {}, polynomial = {}, correction = {}", h.h11, h.h21, h.polynomial, h.correction))
}

fn quartic_chain() -> Outcome {
    let rank = toric_divisor_rank(&corpus::polytope("quartic").map_err(err)?).map_err(err)?;
    ensure(rank.rank == 1, format!("rank M = {}", rank.rank))?;
    let data = corpus::polarization("k3-quartic").map_err(err)?;
    let h = data.m().basis().row(0).to_vec();
    ensure(k3_pair(&h, &h) == BigInt::from(4), "polarization is not ⟨4⟩")?;
    let mcheck = mirror_lattice(data.m(), data.f(), data.fprime()).map_err(err)?;
    let basis = mcheck.basis();
    ensure(mcheck.rank() == 19, format!("mirror rank {}", mcheck.rank()))?;
    for row in basis.rows_iter() {
        for v in [&h, data.f(), data.fprime()] {
            ensure(k3_pair(row, v).is_zero(), "mirror lattice not orthogonal to M, f, f′")?;
        }
    }
    let sig = inertia(restricted_gram(basis));
    ensure(sig == (1, 18, 0), format!("mirror signature {sig:?}"))?;
    let d = dolgachev_evidence(&corpus::polytope("quartic").map_err(err)?).map_err(err)?;
    ensure(d.rank_delta == 1 && d.rank_dual == 19 && d.rank_delta + d.rank_dual == 20, "Dolgachev sum")?;
    Ok(format!("rank 1, mirror rank 19 signature (1,18), {} + {} = 20", d.rank_delta, d.rank_dual))
}

fn random_root(rng: &mut ChaCha8Rng) -> Vec<BigInt> {
    let mut w = vec![BigInt::zero(); K3_RANK];
    for c in w.iter_mut().skip(2) {
        if rng.gen_bool(0.3) {
            *c = BigInt::from(rng.gen_range(-2..=2));
        }
    }
    let c: BigInt = (BigInt::from(-2) - k3_pair(&w, &w)) / 2;
    w[0] += 1;
    w[1] += c;
    w
}

/// Sign of `det ⟨g vᵢ, vⱼ⟩` for a positive frame `v`: the projection of
/// `g W` onto `W` is invertible, and the Gram of `W` is positive.
fn orientation_oracle(g: &Isometry, frame: &[Vec<BigInt>]) -> i32 {
    let gv: Vec<Vec<BigInt>> = frame.iter().map(|v| g.apply_int(v).unwrap()).collect();
    let m: Vec<Vec<BigRational>> = gv
        .iter()
        .map(|a| {
            frame
                .iter()
                .map(|b| BigRational::from_integer(gram_pair(&mukai_gram(), a, b)))
                .collect()
        })
        .collect();
    let det = ZMatrix::from_rows(
        m.iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect(),
        frame.len(),
    )
    .det();
    if det.is_positive() {
        1
    } else {
        -1
    }
}

fn frame_vectors(rank: usize) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = (0..3).map(|b| add(&unit(rank, 2 * b), &unit(rank, 2 * b + 1))).collect();
    if rank == MUKAI_RANK {
        out.push(add(&unit(rank, 22), &scale(&BigInt::from(-1), &unit(rank, 23))));
    }
    out
}

fn extend(g: &Isometry, mk: &IntegralLattice) -> Isometry {
    let m = g.integer_matrix().unwrap();
    let mut e = ZMatrix::identity(MUKAI_RANK);
    for i in 0..K3_RANK {
        for j in 0..K3_RANK {
            e[(i, j)] = m[(i, j)].clone();
        }
    }
    Isometry::automorphism(mk, e).unwrap()
}

fn orientation_suite() -> Outcome {
    let k3 = StandardLattice::K3.build();
    let mk = StandardLattice::MukaiK3.build();
    let (v3, v4) = (frame_vectors(K3_RANK), frame_vectors(MUKAI_RANK));
    let f3 = PositiveFrame::from_integer(k3.clone(), &v3).map_err(err)?;
    let f4 = PositiveFrame::from_integer(mk.clone(), &v4).map_err(err)?;
    let sign = |g: &Isometry, f: &PositiveFrame| orientation_sign(g, f).map(Orientation::sign).map_err(err);

    let minus3 = Isometry::identity(&k3).negate();
    let minus4 = Isometry::identity(&mk).negate();
    ensure(orientation_oracle(&minus3, &v3) == -1 && sign(&minus3, &f3)? == -1, "−Id should fail for 3-planes")?;
    ensure(orientation_oracle(&minus4, &v4) == 1 && sign(&minus4, &f4)? == 1, "−Id should pass for 4-planes")?;

    let mut rng = ChaCha8Rng::seed_from_u64(0xA7);
    for k in 0..50 {
        let r = random_root(&mut rng);
        ensure(k3_pair(&r, &r) == BigInt::from(-2), "root norm")?;
        let g = reflection(&k3, &r).map_err(err)?;
        let x = unit(K3_RANK, k % K3_RANK);
        let want = add(&x, &scale(&k3_pair(&x, &r), &r));
        ensure(g.apply_int(&x).unwrap() == want, format!("reflection {k} formula"))?;
        let ext = extend(&g, &mk);
        ensure(orientation_oracle(&g, &v3) == 1 && sign(&g, &f3)? == 1, format!("reflection {k} fails p = 3"))?;
        ensure(orientation_oracle(&ext, &v4) == 1 && sign(&ext, &f4)? == 1, format!("reflection {k} fails p = 4"))?;
    }

    let random_isometry = |rng: &mut ChaCha8Rng, len: usize| -> Result<Isometry, String> {
        let mut g = Isometry::identity(&k3);
        for _ in 0..len {
            let mut r = random_root(rng);
            if rng.gen_bool(0.5) {
                // a +2 vector: e₁ + f₁ shifted the same way
                r[1] += 2;
            }
            g = g.compose(&reflection(&k3, &r).map_err(err)?).map_err(err)?;
        }
        Ok(g)
    };
    for k in 0..50 {
        let g = random_isometry(&mut rng, 4)?;
        let h = random_isometry(&mut rng, 3)?;
        let sg = sign(&g, &f3)?;
        ensure(sg == orientation_oracle(&g, &v3), format!("isometry {k}: disagrees with oracle"))?;
        for _ in 0..5 {
            let other = f3.transformed(&random_isometry(&mut rng, 3)?).map_err(err)?;
            ensure(sign(&g, &other)? == sg, format!("isometry {k}: frame dependent"))?;
        }
        let gh = g.compose(&h).map_err(err)?;
        ensure(sign(&gh, &f3)? == sg * sign(&h, &f3)?, format!("isometry {k}: not multiplicative"))?;
    }
    Ok("−Id, 50 reflections, 50 isometries".into())
}

fn duality_and_oracle() -> Outcome {
    let all = corpus::polytopes().map_err(err)?;
    let mut pairs = 0;
    for (name, p) in &all {
        let dual = dual_polytope(p).and_then(|d| d.to_lattice()).map_err(err)?;
        let back = dual_polytope(&dual).and_then(|d| d.to_lattice()).map_err(err)?;
        ensure(back == *p, format!("{name}: (Δ*)* ≠ Δ"))?;
        let v = to_i64(p);
        let facets = oracle_facets(&v);
        let c = count_points(p);
        ensure((c.l, c.l_star) == oracle_count(&v, &facets), format!("{name}: point count"))?;
        let normals: std::collections::BTreeSet<Vec<i64>> = facets.into_iter().map(|(n, _)| n).collect();
        ensure(to_i64(&dual).into_iter().collect::<std::collections::BTreeSet<_>>() == normals, format!("{name}: dual vertices"))?;
        if p.dim() == 4 {
            let (h, hd) = (hodge_numbers(p).map_err(err)?, hodge_numbers(&dual).map_err(err)?);
            ensure(h.h11 == hd.h21 && h.h21 == hd.h11, format!("{name}: Hodge duality"))?;
            pairs += 1;
        }
    }
    Ok(format!("{} polytopes, {pairs} Hodge pairs", all.len()))
}

fn period_walls() -> Outcome {
    let g = [[0i64, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]];
    let n = IntegralLattice::new(ZMatrix::from_rows(g.iter().map(|r| big(r)).collect(), 4)).map_err(err)?;
    let dot = |a: &[i64], b: &[i64]| -> i64 { (0..4).map(|i| (0..4).map(|j| a[i] * g[i][j] * b[j]).sum::<i64>()).sum() };
    // all −2 vectors in the box orthogonal to both parts
    let killers = |re: &[i64], im: &[i64]| -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        for a in -5..=5 {
            for b in -5..=5 {
                for c in -5..=5 {
                    for d in -5..=5 {
                        let x = [a, b, c, d];
                        if dot(&x, &x) == -2 && dot(&x, re) == 0 && dot(&x, im) == 0 {
                            out.push(x.to_vec());
                        }
                    }
                }
            }
        }
        out
    };
    let point = |re: [i64; 4], im: [i64; 4]| PeriodPoint {
        re: to_q_vec(&big(&re)),
        im: to_q_vec(&big(&im)),
    };
    let (re1, im1) = ([1, 1, 0, 0], [0, 0, 1, 1]);
    let (re2, im2) = ([1, 2, 0, 0], [0, 0, 1, 2]);
    for (re, im) in [(re1, im1), (re2, im2)] {
        ensure(dot(&re, &re) == dot(&im, &im) && dot(&re, &im) == 0 && dot(&re, &re) > 0, "not a period")?;
    }
    let bad = is_period_point(&n, &point(re1, im1), 5).map_err(err)?;
    let expected = killers(&re1, &im1);
    ensure(expected.contains(&vec![1, -1, 0, 0]), "oracle misses e₁ − f₁")?;
    ensure(!bad.valid(), "first point should be invalid")?;
    ensure(bad.witness == Some(big(&[1, -1, 0, 0])), format!("witness {:?}", bad.witness))?;
    let good = is_period_point(&n, &point(re2, im2), 5).map_err(err)?;
    ensure(killers(&re2, &im2).is_empty(), "oracle finds a wall for the second point")?;
    ensure(good.valid(), "second point should be valid at bound 5")?;
    Ok("witness e₁ − f₁; second point valid at bound 5".into())
}

fn conjugation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAA);
    let all = corpus::polarizations().map_err(err)?;
    let mk = StandardLattice::MukaiK3.build();
    for k in 0..30 {
        let data = &all[k % all.len()].1;
        let l = data.l();
        let mut gens: Vec<Isometry> = data
            .mcheck()
            .basis()
            .rows_iter()
            .filter(|r| k3_pair(r, r) == BigInt::from(-2))
            .take(3)
            .map(|r| reflection(l, r))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        gens.push(td_for(data, &random_combination(&mut rng, data.mcheck().basis())).map_err(err)?);
        // an involution that fails the Donaldson condition
        gens.push(Isometry::identity(l).negate());
        let word = |rng: &mut ChaCha8Rng| -> Result<Isometry, String> {
            let len = rng.gen_range(1..=4);
            (0..len).try_fold(Isometry::identity(l), |acc, _| acc.compose(&gens[rng.gen_range(0..gens.len())]).map_err(err))
        };
        let (g, h) = (word(&mut rng)?, word(&mut rng)?);
        let gh = g.compose(&h).map_err(err)?;
        let (cg, ch, cgh) = (
            mirror_conjugate(&g, 1, data).map_err(err)?,
            mirror_conjugate(&h, 1, data).map_err(err)?,
            mirror_conjugate(&gh, 1, data).map_err(err)?,
        );
        ensure(cgh.sigma == cg.sigma.compose(&ch.sigma).map_err(err)?, format!("word {k}: not a homomorphism"))?;
        // the subspace to preserve, computed independently
        let mut span: Vec<Vec<BigInt>> = data.m().basis().to_rows();
        span.push(data.f().to_vec());
        span.push(data.fprime().to_vec());
        let span: Vec<Vec<BigInt>> = span
            .into_iter()
            .map(|mut v| {
                v.extend([BigInt::zero(), BigInt::zero()]);
                v
            })
            .collect();
        let target = Sublattice::spanned_by(mk.clone(), &ZMatrix::from_rows(span.clone(), MUKAI_RANK)).map_err(err)?;
        let frame = frame_vectors(MUKAI_RANK);
        for (input, c) in [(&g, &cg), (&h, &ch), (&gh, &cgh)] {
            let sigma = &c.sigma;
            ensure(sigma.is_integral(), format!("word {k}: not integral"))?;
            let m = sigma.integer_matrix().unwrap();
            let gram = mukai_gram();
            for i in 0..MUKAI_RANK {
                for j in 0..MUKAI_RANK {
                    ensure(
                        gram_pair(&gram, &m.column(i), &m.column(j)) == BigInt::from(gram[i][j]),
                        format!("word {k}: not an isometry"),
                    )?;
                }
            }
            for v in &span {
                ensure(target.contains(&sigma.apply_int(v).unwrap()), format!("word {k}: M ⊥ ⟨f, f′⟩ not preserved"))?;
            }
            ensure(c.preserves_setwise, format!("word {k}: library setwise check"))?;
            let donaldson = orientation_oracle(input, &frame_vectors(K3_RANK)) == 1;
            ensure(c.input_member == donaldson, format!("word {k}: membership disagrees with the oracle"))?;
            if donaldson {
                ensure(orientation_oracle(sigma, &frame) == 1, format!("word {k}: 4-plane orientation"))?;
                ensure(c.orientation == Orientation::Preserved, format!("word {k}: library orientation"))?;
            }
        }
    }
    Ok("30 word pairs".into())
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("mir_P integral isometry", mirp_integrality, Duration::from_secs(1)),
        ("monodromy-tensor mirror identity", monodromy_identity, Duration::from_secs(5)),
        ("T_d T_e = T_(d+e)", td_homomorphism, Duration::from_secs(1)),
        ("elliptic SL(2,Z) suite", elliptic_suite, Duration::from_secs(2)),
        ("octic Hodge numbers", octic_numbers, Duration::from_secs(5)),
        ("quartic chain", quartic_chain, Duration::from_secs(5)),
        ("orientation suite", orientation_suite, Duration::from_secs(5)),
        ("duality involution and point oracle", duality_and_oracle, Duration::from_secs(60)),
        ("period-point walls", period_walls, Duration::from_secs(1)),
        ("mirror conjugation homomorphism", conjugation, Duration::from_secs(10)),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= *limit => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!(
            "criterion {:>2} {} {name}: {detail} [{:.3} s, limit {} s]",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
