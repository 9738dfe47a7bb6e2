//! Facets of the convex hull of a finite point set, by the double
//! description method on the homogenized cone `{a : a·(1, p) ≥ 0}`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{clear_denominators, dot, vec_gcd, vscale, vsub, ZMatrix};

/// Fixed-width set of small indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Bits(Vec<u64>);

impl Bits {
    pub(crate) fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    pub(crate) fn from_indices(n: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut b = Bits::new(n);
        for i in idx {
            b.set(i);
        }
        b
    }

    pub(crate) fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub(crate) fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }

    pub(crate) fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }

    pub(crate) fn contains(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & b == *b)
    }

    pub(crate) fn ones(&self) -> Vec<usize> {
        (0..self.0.len() * 64).filter(|&i| self.get(i)).collect()
    }
}

/// The inequality `normal · x ≥ −offset`, with `normal` primitive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Facet {
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
}

impl Facet {
    /// `normal · x + offset`, zero exactly on the facet hyperplane.
    pub fn slack(&self, x: &[BigInt]) -> BigInt {
        dot(&self.normal, x) + &self.offset
    }
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = vec_gcd(&v);
    if g.is_zero() || g == BigInt::from(1) {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

struct Ray {
    v: Vec<BigInt>,
    zero: Bits,
}

/// Extreme rays of `{a : r·a ≥ 0 for all rows r}` for rows spanning the space.
fn cone_rays(rows: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
    let n = rows[0].len();
    let m = rows.len();
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..m {
        let mut cand = basis.clone();
        cand.push(i);
        let mat = ZMatrix::from_rows(cand.iter().map(|&k| rows[k].clone()).collect(), n);
        if mat.rank() == cand.len() {
            basis = cand;
            if basis.len() == n {
                break;
            }
        }
    }
    if basis.len() < n {
        return Err(Error::NotFullDimensional);
    }
    let h0 = ZMatrix::from_rows(basis.iter().map(|&k| rows[k].clone()).collect(), n).to_q();
    let inv = h0.inverse().expect("independent rows");
    let mut rays: Vec<Ray> = (0..n)
        .map(|j| {
            let v = primitive(clear_denominators(&inv.column(j)));
            let zero = Bits::from_indices(m, basis.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, &r)| r));
            Ray { v, zero }
        })
        .collect();
    let in_basis = Bits::from_indices(m, basis.iter().copied());
    for (i, row) in rows.iter().enumerate() {
        if in_basis.get(i) {
            continue;
        }
        let s: Vec<BigInt> = rays.iter().map(|r| dot(row, &r.v)).collect();
        let mut next = Vec::new();
        for (r, si) in rays.iter().zip(&s) {
            if !si.is_negative() {
                let mut zero = r.zero.clone();
                if si.is_zero() {
                    zero.set(i);
                }
                next.push(Ray { v: r.v.clone(), zero });
            }
        }
        for p in (0..rays.len()).filter(|&p| s[p].is_positive()) {
            for q in (0..rays.len()).filter(|&q| s[q].is_negative()) {
                let common = rays[p].zero.and(&rays[q].zero);
                if common.count() + 2 < n {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(k, r)| k != p && k != q && r.zero.contains(&common));
                if blocked {
                    continue;
                }
                let v = primitive(vsub(&vscale(&s[p], &rays[q].v), &vscale(&s[q], &rays[p].v)));
                let mut zero = common;
                zero.set(i);
                next.push(Ray { v, zero });
            }
        }
        rays = next;
    }
    Ok(rays.into_iter().map(|r| r.v).collect())
}

/// Irredundant facet inequalities of `conv(points)`, sorted.
pub fn facet_representation(points: &[Vec<BigInt>]) -> Result<Vec<Facet>> {
    let Some(first) = points.first() else {
        return Err(Error::NotFullDimensional);
    };
    let d = first.len();
    if let Some(bad) = points.iter().find(|p| p.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: bad.len(),
        });
    }
    let rows: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| std::iter::once(BigInt::from(1)).chain(p.iter().cloned()).collect())
        .collect();
    let mut facets: Vec<Facet> = cone_rays(&rows)?
        .into_iter()
        .map(|v| {
            let normal = v[1..].to_vec();
            let g = vec_gcd(&normal);
            Facet {
                normal: normal.into_iter().map(|x| x / &g).collect(),
                offset: &v[0] / &g,
            }
        })
        .collect();
    facets.sort();
    facets.dedup();
    Ok(facets)
}
