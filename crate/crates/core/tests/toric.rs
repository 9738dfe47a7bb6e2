mod common;

use std::collections::BTreeSet;

use common::{from_i64, oracle_count, oracle_facets, to_i64};
use mirrorlat::corpus;
use mirrorlat::toric::{
    count_points, dolgachev_evidence, dual_polytope, edge_condition, hodge_numbers, toric_divisor_rank,
    weighted_monomial_count, weighted_newton_polytope, LatticePolytope, ReflexivePair,
};
use mirrorlat::ErrorKind;
use num_bigint::BigInt;
use proptest::prelude::*;

#[test]
fn facets_and_counts_match_brute_force() {
    for (name, p) in corpus::polytopes().unwrap() {
        let verts = to_i64(&p);
        let facets = oracle_facets(&verts);
        let ours: BTreeSet<(Vec<i64>, i64)> = p
            .facets()
            .iter()
            .map(|f| {
                (
                    f.normal.iter().map(|x| i64::try_from(x).unwrap()).collect(),
                    i64::try_from(&f.offset).unwrap(),
                )
            })
            .collect();
        assert_eq!(ours, facets, "{name}");
        let c = count_points(&p);
        assert_eq!((c.l, c.l_star), oracle_count(&verts, &facets), "{name}");
        assert_eq!(p.lattice_points().len(), c.l, "{name}");
        assert_eq!(c.l_star, 1, "{name} is reflexive");
    }
}

#[test]
fn dual_vertices_are_normals_over_offsets() {
    for (name, p) in corpus::polytopes().unwrap() {
        let facets = oracle_facets(&to_i64(&p));
        assert!(facets.iter().all(|(_, o)| *o == 1), "{name}");
        let expected: BTreeSet<Vec<i64>> = facets.into_iter().map(|(n, _)| n).collect();
        let dual = dual_polytope(&p).unwrap().to_lattice().unwrap();
        let got: BTreeSet<Vec<i64>> = to_i64(&dual).into_iter().collect();
        assert_eq!(got, expected, "{name}");
        let back = dual_polytope(&dual).unwrap().to_lattice().unwrap();
        assert_eq!(back, p, "{name}");
        assert!(ReflexivePair::new(&p).unwrap().duality_holds(), "{name}");
    }
}

#[test]
fn hodge_numbers_of_the_four_dimensional_corpus() {
    let known = [
        ("quintic", 1, 101),
        ("octic-11222", 2, 86),
        ("sextic-11112", 1, 103),
        ("octic-11114", 1, 149),
        ("tesseract", 4, 68),
        ("cross-polytope", 68, 4),
    ];
    for (name, h11, h21) in known {
        let p = corpus::polytope(name).unwrap();
        let h = hodge_numbers(&p).unwrap();
        assert_eq!((h.h11, h.h21), (h11, h21), "{name}");
        let hd = hodge_numbers(&dual_polytope(&p).unwrap().to_lattice().unwrap()).unwrap();
        assert_eq!((hd.h11, hd.h21), (h21, h11), "{name}");
        assert_eq!(h.polynomial + h.correction, h.h21, "{name}");
    }
    let octic = hodge_numbers(&corpus::polytope("octic-11222").unwrap()).unwrap();
    assert_eq!((octic.polynomial, octic.correction), (83, 3));
}

#[test]
fn polynomial_part_counts_monomials_modulo_automorphisms() {
    // deformations of a smooth hypersurface: monomials minus dim GL(5)
    let quintic = hodge_numbers(&corpus::polytope("quintic").unwrap()).unwrap();
    assert_eq!(quintic.polynomial, 126 - 25);
}

#[test]
fn three_dimensional_ranks_and_picard_numbers() {
    let known = [
        ("quartic", 1, 1),
        ("sextic-1113", 1, 1),
        ("octahedron", 17, 17),
        ("cube", 3, 3),
        ("diamond-prism", 7, 11),
        ("triangle-prism", 8, 14),
    ];
    for (name, rank, picard) in known {
        let r = toric_divisor_rank(&corpus::polytope(name).unwrap()).unwrap();
        assert_eq!((r.rank, r.picard), (rank, picard), "{name}");
    }
}

#[test]
fn picard_plus_dual_rank_is_twenty() {
    for (name, p) in corpus::polytopes().unwrap() {
        if p.dim() != 3 {
            continue;
        }
        let d = dolgachev_evidence(&p).unwrap();
        assert_eq!(d.picard_delta + d.rank_dual, 20, "{name}");
        assert!(d.rank_delta <= d.picard_delta && d.picard_delta <= 20, "{name}");
        assert!(d.rank_dual <= d.picard_dual && d.picard_dual <= 20, "{name}");
        assert_eq!(d.equality(), d.rank_delta + d.rank_dual == 20, "{name}");
    }
}

#[test]
fn quartic_satisfies_the_rank_equality() {
    let d = dolgachev_evidence(&corpus::polytope("quartic").unwrap()).unwrap();
    assert_eq!((d.rank_delta, d.rank_dual), (1, 19));
    assert!(d.equality() && d.necessary);
    assert_eq!(d.defect, 0);
}

#[test]
fn diamond_prism_fails_the_edge_condition() {
    let p = corpus::polytope("diamond-prism").unwrap();
    let e = edge_condition(&p).unwrap();
    assert!(!e.product);
    assert!(e.edges.iter().any(|x| x.l_star * x.dual_l_star > 0));
    let d = dolgachev_evidence(&p).unwrap();
    assert!(!d.equality());
    assert_eq!(d.defect, 20 - d.rank_delta - d.rank_dual);
}

fn monomials(weights: &[u32], degree: u32) -> usize {
    match weights.split_first() {
        None => usize::from(degree == 0),
        Some((&w, rest)) => (0..=degree / w).map(|k| monomials(rest, degree - k * w)).sum(),
    }
}

#[test]
fn weighted_newton_polytopes() {
    for (name, w) in corpus::WEIGHTED {
        let degree = w.iter().sum();
        let n = monomials(w, degree);
        assert_eq!(weighted_monomial_count(w), n, "{name}");
        let p = weighted_newton_polytope(w).unwrap();
        assert_eq!(count_points(&p).l, n, "{name}");
    }
    assert_eq!(weighted_monomial_count(&[1, 1, 1, 1, 1]), 126);
}

#[test]
fn error_kinds() {
    let quartic = corpus::polytope("quartic").unwrap();
    let doubled = quartic.scaled(&BigInt::from(2)).unwrap();
    assert!(!doubled.is_reflexive().unwrap());
    assert_eq!(ReflexivePair::new(&doubled).unwrap_err().kind(), ErrorKind::Domain);
    let shifted = from_i64(&[vec![1, 1, 1], vec![2, 1, 1], vec![1, 2, 1], vec![1, 1, 2]]);
    assert_eq!(shifted.is_reflexive().unwrap_err().kind(), ErrorKind::Domain);
    let flat = LatticePolytope::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
    assert!(flat.is_err());
    assert!(LatticePolytope::from_i64(&[&[0], &[1]]).is_err());
    assert!(hodge_numbers(&quartic).is_err());
    assert!(toric_divisor_rank(&corpus::polytope("quintic").unwrap()).is_err());
}

fn unimodular(d: usize, ops: &[(usize, usize, i64)]) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
    for &(i, j, c) in ops {
        let (i, j) = (i % d, j % d);
        if i != j {
            for k in 0..d {
                m[i][k] += c * m[j][k];
            }
        }
    }
    m
}

fn transform(verts: &[Vec<i64>], m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    verts
        .iter()
        .map(|v| m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn invariants_survive_unimodular_changes_and_reordering(
        ops in prop::collection::vec((0usize..4, 0usize..4, -1i64..=1), 0..6),
        idx in 0usize..14,
        seed in any::<u64>(),
    ) {
        let all = corpus::polytopes().unwrap();
        let (_, p) = &all[idx % all.len()];
        let m = unimodular(p.dim(), &ops);
        let mut verts = transform(&to_i64(p), &m);
        // reorder and pad with the origin, which is not a vertex
        let n = verts.len();
        verts.rotate_left((seed as usize) % n);
        verts.push(vec![0; p.dim()]);
        let q = from_i64(&verts);
        prop_assert_eq!(q.vertices().len(), p.vertices().len());
        let (cp, cq) = (count_points(p), count_points(&q));
        prop_assert_eq!((cp.l, cp.l_star), (cq.l, cq.l_star));
        if p.dim() == 4 {
            prop_assert_eq!(hodge_numbers(p).unwrap(), hodge_numbers(&q).unwrap());
        } else {
            prop_assert_eq!(toric_divisor_rank(p).unwrap(), toric_divisor_rank(&q).unwrap());
        }
    }
}
