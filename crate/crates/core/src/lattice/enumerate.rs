//! Bounded enumeration of lattice vectors of a fixed norm.
//!
//! Indefinite lattices have infinitely many vectors of a given norm, so the
//! public entry point scans the coordinate box `[-B, B]ⁿ`. Definite forms are
//! pruned with an exact Fincke–Pohst recursion; everything else runs an
//! odometer that updates the norm incrementally.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::IntegralLattice;
use crate::error::{Error, Result};
use crate::matrix::QMatrix;

/// Vectors of one norm, lexicographically sorted, with the bound used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub norm: BigInt,
    pub bound: u32,
    pub vectors: Vec<Vec<BigInt>>,
}

pub fn enumerate_vectors(lattice: &IntegralLattice, norm: &BigInt, bound: u32) -> Enumeration {
    let n = lattice.rank();
    let mut vectors = if n == 0 {
        if norm.is_zero() {
            vec![Vec::new()]
        } else {
            Vec::new()
        }
    } else {
        let inertia = lattice.inertia();
        let definite = inertia.nullity == 0 && (inertia.positive == 0 || inertia.negative == 0);
        if definite {
            fincke_pohst(lattice, norm, Some(bound))
        } else if let Some(v) = odometer_i128(lattice, norm, bound) {
            v
        } else {
            odometer_big(lattice, norm, bound)
        }
    };
    vectors.sort();
    Enumeration {
        norm: norm.clone(),
        bound,
        vectors,
    }
}

/// All vectors of the given norm in a definite lattice (a finite set).
pub fn definite_vectors(lattice: &IntegralLattice, norm: &BigInt) -> Result<Vec<Vec<BigInt>>> {
    let i = lattice.inertia();
    if i.nullity > 0 || (i.positive > 0 && i.negative > 0) {
        return Err(Error::Invalid("lattice is not definite".into()));
    }
    let mut v = if lattice.rank() == 0 {
        if norm.is_zero() {
            vec![Vec::new()]
        } else {
            Vec::new()
        }
    } else {
        fincke_pohst(lattice, norm, None)
    };
    v.sort();
    Ok(v)
}

fn fincke_pohst(lattice: &IntegralLattice, norm: &BigInt, bound: Option<u32>) -> Vec<Vec<BigInt>> {
    let n = lattice.rank();
    // work with a positive definite form
    let negative = lattice.inertia().negative > 0;
    let (gram, target) = if negative {
        (lattice.gram().neg(), -norm)
    } else {
        (lattice.gram().clone(), norm.clone())
    };
    if target.is_negative() {
        return Vec::new();
    }
    // Q(x) = Σ d_i (x_i + Σ_{j>i} μ_ij x_j)²
    let mut q: QMatrix = gram.to_q();
    for i in 0..n {
        for j in i + 1..n {
            q[(j, i)] = q[(i, j)].clone();
            q[(i, j)] = &q[(i, j)] / &q[(i, i)];
        }
        for k in i + 1..n {
            for l in k..n {
                let s = &q[(k, i)] * &q[(i, l)];
                q[(k, l)] -= s;
            }
        }
    }
    let target = BigRational::from_integer(target);
    let mut out = Vec::new();
    let mut x = vec![BigInt::zero(); n];
    fp_level(&q, n, n - 1, &target, bound, &mut x, &mut out, lattice, norm);
    out
}

#[allow(clippy::too_many_arguments)]
fn fp_level(
    q: &QMatrix,
    n: usize,
    i: usize,
    remaining: &BigRational,
    bound: Option<u32>,
    x: &mut Vec<BigInt>,
    out: &mut Vec<Vec<BigInt>>,
    lattice: &IntegralLattice,
    norm: &BigInt,
) {
    let mut center = BigRational::zero();
    for j in i + 1..n {
        center -= &q[(i, j)] * BigRational::from_integer(x[j].clone());
    }
    let d = &q[(i, i)];
    let fits = |xi: &BigInt| -> Option<BigRational> {
        let t = BigRational::from_integer(xi.clone()) - &center;
        let used = d * &t * &t;
        (used <= *remaining).then(|| remaining - used)
    };
    let within = |xi: &BigInt| bound.is_none_or(|b| xi.abs() <= BigInt::from(b));
    let start = center.floor().to_integer();
    let mut visit = |xi: BigInt, x: &mut Vec<BigInt>, rest: BigRational| {
        x[i] = xi;
        if i == 0 {
            if lattice.norm(x).is_ok_and(|v| &v == norm) {
                out.push(x.clone());
            }
        } else {
            fp_level(q, n, i - 1, &rest, bound, x, out, lattice, norm);
        }
    };
    let mut xi = start.clone();
    while let Some(rest) = fits(&xi) {
        if within(&xi) {
            visit(xi.clone(), x, rest);
        }
        xi -= 1;
    }
    let mut xi = start + 1;
    while let Some(rest) = fits(&xi) {
        if within(&xi) {
            visit(xi.clone(), x, rest);
        }
        xi += 1;
    }
    x[i] = BigInt::zero();
}

/// Box scan in `i128` when all intermediate values provably fit.
fn odometer_i128(lattice: &IntegralLattice, norm: &BigInt, bound: u32) -> Option<Vec<Vec<BigInt>>> {
    let n = lattice.rank();
    let g: Vec<i128> = lattice
        .gram()
        .data()
        .iter()
        .map(|x| x.to_i128())
        .collect::<Option<_>>()?;
    let max_g = g.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0);
    // |norm| ≤ n² · max|G| · B², with headroom for the update terms
    let worst = BigInt::from(n * n) * BigInt::from(max_g) * BigInt::from(bound as u64 + 1).pow(2u32) * BigInt::from(8);
    if worst.bits() > 120 {
        return None;
    }
    let target = norm.to_i128()?;
    let b = bound as i128;
    let mut x = vec![-b; n];
    // gx = G·x, val = xᵀGx
    let mut gx: Vec<i128> = (0..n).map(|i| (0..n).map(|j| g[i * n + j] * x[j]).sum()).collect();
    let mut val: i128 = (0..n).map(|i| x[i] * gx[i]).sum();
    let mut out = Vec::new();
    loop {
        if val == target {
            out.push(x.iter().map(|&c| BigInt::from(c)).collect());
        }
        // advance the last coordinate fastest: lexicographic order
        let mut k = n;
        loop {
            if k == 0 {
                return Some(out);
            }
            k -= 1;
            let delta = if x[k] < b { 1 } else { -2 * b };
            val += 2 * delta * gx[k] + delta * delta * g[k * n + k];
            for (i, gxi) in gx.iter_mut().enumerate() {
                *gxi += delta * g[i * n + k];
            }
            x[k] += delta;
            if delta == 1 {
                break;
            }
        }
    }
}

fn odometer_big(lattice: &IntegralLattice, norm: &BigInt, bound: u32) -> Vec<Vec<BigInt>> {
    let n = lattice.rank();
    let b = BigInt::from(bound);
    let mut x = vec![-b.clone(); n];
    let mut out = Vec::new();
    loop {
        if lattice.norm(&x).is_ok_and(|v| &v == norm) {
            out.push(x.clone());
        }
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if x[k] < b {
                x[k] += BigInt::one();
                break;
            }
            x[k] = -b.clone();
        }
    }
}
