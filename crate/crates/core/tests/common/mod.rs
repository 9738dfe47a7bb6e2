//! Brute-force polytope oracles shared by the toric and acceptance tests.
#![allow(dead_code)]


use std::collections::BTreeSet;

use mirrorlat::toric::LatticePolytope;
use num_bigint::BigInt;
use num_integer::Integer;

pub fn to_i64(p: &LatticePolytope) -> Vec<Vec<i64>> {
    p.vertices()
        .iter()
        .map(|v| v.iter().map(|x| i64::try_from(x).unwrap()).collect())
        .collect()
}

pub fn from_i64(points: &[Vec<i64>]) -> LatticePolytope {
    LatticePolytope::new(points.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect()).unwrap()
}

fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det(&minor)
        })
        .sum()
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Facets `(normal, offset)` with `normal·x + offset ≥ 0`, found by trying
/// every hyperplane through `d` vertices.
pub fn oracle_facets(verts: &[Vec<i64>]) -> BTreeSet<(Vec<i64>, i64)> {
    let d = verts[0].len();
    let mut out = BTreeSet::new();
    for s in subsets(verts.len(), d) {
        let base = &verts[s[0]];
        let rows: Vec<Vec<i128>> = s[1..]
            .iter()
            .map(|&i| (0..d).map(|k| (verts[i][k] - base[k]) as i128).collect())
            .collect();
        // cofactor expansion gives a normal to the d−1 difference vectors
        let normal: Vec<i128> = (0..d)
            .map(|j| {
                let mut m: Vec<Vec<i128>> = vec![(0..d).map(|k| i128::from(k == j)).collect()];
                m.extend(rows.iter().cloned());
                det(&m)
            })
            .collect();
        if normal.iter().all(|&x| x == 0) {
            continue;
        }
        let g = normal.iter().fold(0i128, |a, &b| a.gcd(&b));
        let mut normal: Vec<i128> = normal.iter().map(|x| x / g).collect();
        let dotv = |v: &[i64], n: &[i128]| v.iter().zip(n).map(|(&a, &b)| a as i128 * b).sum::<i128>();
        let mut offset = -dotv(base, &normal);
        let slacks: Vec<i128> = verts.iter().map(|v| dotv(v, &normal) + offset).collect();
        if slacks.iter().all(|&x| x <= 0) {
            normal.iter_mut().for_each(|x| *x = -*x);
            offset = -offset;
        } else if !slacks.iter().all(|&x| x >= 0) {
            continue;
        }
        out.insert((normal.iter().map(|&x| x as i64).collect(), offset as i64));
    }
    out
}

/// `(l, l*)` by scanning the bounding box.
pub fn oracle_count(verts: &[Vec<i64>], facets: &BTreeSet<(Vec<i64>, i64)>) -> (usize, usize) {
    let d = verts[0].len();
    let lo: Vec<i64> = (0..d).map(|k| verts.iter().map(|v| v[k]).min().unwrap()).collect();
    let hi: Vec<i64> = (0..d).map(|k| verts.iter().map(|v| v[k]).max().unwrap()).collect();
    let mut pts = vec![Vec::new()];
    for k in 0..d {
        pts = pts
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (lo[k]..=hi[k]).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    let (mut l, mut interior) = (0, 0);
    for p in pts {
        let slacks: Vec<i64> = facets
            .iter()
            .map(|(n, o)| n.iter().zip(&p).map(|(a, b)| a * b).sum::<i64>() + o)
            .collect();
        if slacks.iter().all(|&s| s >= 0) {
            l += 1;
            interior += usize::from(slacks.iter().all(|&s| s > 0));
        }
    }
    (l, interior)
}
