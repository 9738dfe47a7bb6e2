//! JSON encodings of lattices, classes, polytopes and group words.
//!
//! Integers are JSON numbers when they fit in the 53-bit safe range and
//! decimal strings otherwise; rationals are integers or `"p/q"` strings.

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::k3::{MirrorData, PeriodPoint};
use crate::lattice::{IntegralLattice, Isometry, StandardLattice, Sublattice};
use crate::matrix::{QMatrix, ZMatrix};
use crate::monodromy::{Generator, GroupWord, Letter, Sl2};
use crate::mukai::{Gaussian, GradedClass, PairingFrame};
use crate::toric::LatticePolytope;

const SAFE_BITS: u64 = 53;

fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

pub fn parse(text: &str) -> Result<Value> {
    Ok(serde_json::from_str(text)?)
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| invalid(format!("missing field `{key}`")))
}

fn array(v: &Value) -> Result<&Vec<Value>> {
    v.as_array().ok_or_else(|| invalid(format!("expected an array, got {v}")))
}

pub fn int_to_json(x: &BigInt) -> Value {
    if x.bits() <= SAFE_BITS {
        json!(x.to_i64().expect("fits"))
    } else {
        json!(x.to_string())
    }
}

pub fn int_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| invalid(format!("not an integer: {n}"))),
        Value::String(s) => BigInt::from_str(s.trim()).map_err(|_| invalid(format!("not an integer: {s}"))),
        _ => Err(invalid(format!("not an integer: {v}"))),
    }
}

pub fn ints_to_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int_to_json).collect())
}

pub fn ints_from_json(v: &Value) -> Result<Vec<BigInt>> {
    array(v)?.iter().map(int_from_json).collect()
}

pub fn rational_to_json(q: &BigRational) -> Value {
    if q.is_integer() {
        int_to_json(q.numer())
    } else {
        json!(format!("{}/{}", q.numer(), q.denom()))
    }
}

pub fn rational_from_json(v: &Value) -> Result<BigRational> {
    if let Value::String(s) = v {
        if let Some((p, q)) = s.split_once('/') {
            let p = BigInt::from_str(p.trim()).map_err(|_| invalid(format!("bad rational {s}")))?;
            let q = BigInt::from_str(q.trim()).map_err(|_| invalid(format!("bad rational {s}")))?;
            if q.is_zero() {
                return Err(invalid(format!("zero denominator in {s}")));
            }
            return Ok(BigRational::new(p, q));
        }
    }
    Ok(BigRational::from_integer(int_from_json(v)?))
}

pub fn rationals_to_json(v: &[BigRational]) -> Value {
    Value::Array(v.iter().map(rational_to_json).collect())
}

pub fn rationals_from_json(v: &Value) -> Result<Vec<BigRational>> {
    array(v)?.iter().map(rational_from_json).collect()
}

pub fn zmatrix_to_json(m: &ZMatrix) -> Value {
    Value::Array(m.rows_iter().map(ints_to_json).collect())
}

/// Rows of equal length; `cols` is required when there are no rows.
pub fn zmatrix_from_json(v: &Value, cols: Option<usize>) -> Result<ZMatrix> {
    let rows: Vec<Vec<BigInt>> = array(v)?.iter().map(ints_from_json).collect::<Result<_>>()?;
    let n = rows.first().map(Vec::len).or(cols).unwrap_or(0);
    if let Some(expected) = cols {
        if n != expected {
            return Err(Error::DimensionMismatch { expected, got: n });
        }
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: bad.len(),
        });
    }
    Ok(ZMatrix::from_rows(rows, n))
}

pub fn qmatrix_to_json(m: &QMatrix) -> Value {
    Value::Array(m.rows_iter().map(rationals_to_json).collect())
}

pub fn qmatrix_from_json(v: &Value) -> Result<QMatrix> {
    let rows: Vec<Vec<BigRational>> = array(v)?.iter().map(rationals_from_json).collect::<Result<_>>()?;
    let n = rows.first().map(Vec::len).unwrap_or(0);
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: bad.len(),
        });
    }
    Ok(QMatrix::from_rows(rows, n))
}

fn standard_name(l: &IntegralLattice) -> Option<&'static str> {
    let s = StandardLattice::from_str(l.label()?).ok()?;
    s.build().same_form(l).then(|| s.name())
}

/// Standard lattices are written by name.
pub fn lattice_to_json(l: &IntegralLattice) -> Value {
    if let Some(name) = standard_name(l) {
        return json!(name);
    }
    let mut m = Map::new();
    m.insert("rank".into(), json!(l.rank()));
    m.insert("gram".into(), zmatrix_to_json(l.gram()));
    if let Some(label) = l.label() {
        m.insert("label".into(), json!(label));
    }
    Value::Object(m)
}

pub fn lattice_from_json(v: &Value) -> Result<IntegralLattice> {
    if let Value::String(name) = v {
        return Ok(StandardLattice::from_str(name)?.build());
    }
    let gram = zmatrix_from_json(field(v, "gram")?, None)?;
    if let Some(rank) = v.get("rank") {
        let rank = rank.as_u64().ok_or_else(|| invalid("rank must be a nonnegative integer"))? as usize;
        if rank != gram.nrows() {
            return Err(Error::DimensionMismatch {
                expected: rank,
                got: gram.nrows(),
            });
        }
    }
    let l = IntegralLattice::new(gram)?;
    Ok(match v.get("label").and_then(Value::as_str) {
        Some(label) => l.with_label(label),
        None => l,
    })
}

pub fn sublattice_to_json(s: &Sublattice) -> Value {
    json!({
        "ambient": lattice_to_json(s.ambient()),
        "basis": zmatrix_to_json(s.basis()),
    })
}

pub fn sublattice_from_json(v: &Value) -> Result<Sublattice> {
    let ambient = lattice_from_json(field(v, "ambient")?)?;
    let basis = zmatrix_from_json(field(v, "basis")?, Some(ambient.rank()))?;
    Sublattice::new(ambient, basis)
}

pub fn isometry_to_json(g: &Isometry) -> Value {
    match g.integer_matrix() {
        Some(m) => json!({ "matrix": zmatrix_to_json(m) }),
        None => json!({ "matrix": qmatrix_to_json(&g.matrix()) }),
    }
}

pub fn isometry_from_json(v: &Value, lattice: &IntegralLattice) -> Result<Isometry> {
    let m = qmatrix_from_json(field(v, "matrix")?)?;
    Isometry::new(lattice.clone(), lattice.clone(), &m)
}

/// A polarization with an optional caller-supplied cusp pair.
#[derive(Debug, Clone)]
pub struct MirrorSpec {
    pub m: Sublattice,
    pub pair: Option<(Vec<BigInt>, Vec<BigInt>)>,
}

impl MirrorSpec {
    /// Uses the supplied pair, or searches `M^⊥` within `bound`.
    pub fn build(self, bound: u32) -> Result<MirrorData> {
        match self.pair {
            Some((f, fp)) => MirrorData::new(self.m, f, fp),
            None => MirrorData::search(self.m, bound),
        }
    }
}

/// `{"M": <sublattice>, "f": [..], "fprime": [..]}`, the pair optional. A
/// bare sublattice is accepted as well.
pub fn mirror_spec_from_json(v: &Value) -> Result<MirrorSpec> {
    let m = match v.get("M") {
        Some(m) => sublattice_from_json(m)?,
        None => sublattice_from_json(v)?,
    };
    let pair = match (v.get("f"), v.get("fprime")) {
        (Some(f), Some(fp)) => Some((ints_from_json(f)?, ints_from_json(fp)?)),
        (None, None) => None,
        _ => return Err(invalid("`f` and `fprime` must be given together")),
    };
    Ok(MirrorSpec { m, pair })
}

pub fn mirror_data_to_json(d: &MirrorData) -> Result<Value> {
    let (p, q) = d.mcheck_signature()?;
    Ok(json!({
        "M": sublattice_to_json(d.m()),
        "f": ints_to_json(d.f()),
        "fprime": ints_to_json(d.fprime()),
        "t": d.t(),
        "Mcheck": sublattice_to_json(d.mcheck()),
        "Mcheck_signature": [p, q],
        "mirP": isometry_to_json(d.mirp())["matrix"].clone(),
    }))
}

pub fn gaussian_to_json(g: &Gaussian) -> Value {
    json!({ "re": rational_to_json(&g.re), "im": rational_to_json(&g.im) })
}

fn frame_to_json(f: &PairingFrame) -> Value {
    if let Some(name) = f.name() {
        return json!(name);
    }
    let mut m = Map::new();
    m.insert("h2_h4".into(), qmatrix_to_json(f.block(2)));
    if f.dim() == 3 {
        m.insert("h3".into(), qmatrix_to_json(f.block(3)));
    }
    if let Some(c) = f.c2_over_24() {
        m.insert("c2_over_24".into(), rationals_to_json(c));
    }
    Value::Object(m)
}

/// Named frames (`K3-standard`, `curve-standard`) or an inline threefold
/// frame `{"h2_h4": .., "h3": .., "c2_over_24": ..}`. Dimensions 1 and 2
/// default to the named frames.
pub fn frame_from_json(v: Option<&Value>, dim: usize) -> Result<Arc<PairingFrame>> {
    let frame = match v {
        None | Some(Value::Null) => match dim {
            1 => PairingFrame::curve(),
            2 => PairingFrame::k3(),
            _ => return Err(invalid("threefold classes need an inline frame")),
        },
        Some(Value::String(name)) => match name.as_str() {
            "K3-standard" => PairingFrame::k3(),
            "curve-standard" => PairingFrame::curve(),
            _ => return Err(invalid(format!("unknown frame `{name}`"))),
        },
        Some(obj) => {
            if dim != 3 {
                return Err(invalid("inline frames are for threefolds"));
            }
            let h24 = qmatrix_from_json(field(obj, "h2_h4")?)?;
            let h3 = match obj.get("h3") {
                Some(h) => qmatrix_from_json(h)?,
                None => QMatrix::zeros(0, 0),
            };
            let frame = PairingFrame::threefold(h24, h3)?;
            match obj.get("c2_over_24") {
                Some(c) => frame.with_c2(rationals_from_json(c)?)?,
                None => frame,
            }
        }
    };
    if frame.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: frame.dim(),
        });
    }
    Ok(Arc::new(frame))
}

pub fn graded_class_to_json(a: &GradedClass) -> Value {
    let mut comps = Map::new();
    for (j, c) in a.components().iter().enumerate() {
        if c.is_empty() {
            continue;
        }
        let v = if j == 0 || j == 2 * a.dim() {
            rational_to_json(&c[0])
        } else {
            rationals_to_json(c)
        };
        comps.insert(j.to_string(), v);
    }
    json!({
        "dim": a.dim(),
        "frame": frame_to_json(a.frame()),
        "components": comps,
    })
}

/// `{"dim": n, "frame": .., "components": {"0": q, "2": [..], ..}}`; missing
/// degrees are zero.
pub fn graded_class_from_json(v: &Value) -> Result<GradedClass> {
    let dim = field(v, "dim")?.as_u64().ok_or_else(|| invalid("dim must be 1, 2 or 3"))? as usize;
    if !(1..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    let frame = frame_from_json(v.get("frame"), dim)?;
    let mut comps: Vec<Vec<BigRational>> =
        (0..=2 * dim).map(|j| vec![BigRational::zero(); frame.degree_dim(j)]).collect();
    let given = field(v, "components")?
        .as_object()
        .ok_or_else(|| invalid("components must be an object keyed by degree"))?;
    for (key, val) in given {
        let j: usize = key.parse().map_err(|_| invalid(format!("bad degree `{key}`")))?;
        if j > 2 * dim {
            return Err(invalid(format!("degree {j} exceeds {}", 2 * dim)));
        }
        comps[j] = match val {
            Value::Array(_) => rationals_from_json(val)?,
            _ => vec![rational_from_json(val)?],
        };
    }
    GradedClass::new(frame, comps)
}

pub fn polytope_to_json(p: &LatticePolytope) -> Value {
    json!({
        "dim": p.dim(),
        "vertices": Value::Array(p.vertices().iter().map(|v| ints_to_json(v)).collect()),
    })
}

pub fn polytope_from_json(v: &Value) -> Result<LatticePolytope> {
    let dim = field(v, "dim")?.as_u64().ok_or_else(|| invalid("dim must be an integer"))? as usize;
    let verts = zmatrix_from_json(field(v, "vertices")?, Some(dim))?;
    LatticePolytope::new(verts.to_rows())
}

pub fn sl2_to_json(g: &Sl2) -> Value {
    json!([[int_to_json(&g.a), int_to_json(&g.b)], [int_to_json(&g.c), int_to_json(&g.d)]])
}

pub fn sl2_from_json(v: &Value) -> Result<Sl2> {
    let m = zmatrix_from_json(v, Some(2))?;
    if m.nrows() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: m.nrows(),
        });
    }
    Sl2::new(m[(0, 0)].clone(), m[(0, 1)].clone(), m[(1, 0)].clone(), m[(1, 1)].clone())
}

pub fn word_to_json(w: &GroupWord) -> Value {
    Value::Array(
        w.letters
            .iter()
            .map(|l| match &l.gen {
                Generator::Td(d) => json!({ "gen": "Td", "d": ints_to_json(d), "pow": l.pow }),
                g => json!({ "gen": g.label(), "pow": l.pow }),
            })
            .collect(),
    )
}

/// `[{"gen": "S"|"T"|"Td", "d": [..], "pow": k}, ..]`; `pow` defaults to 1.
pub fn word_from_json(v: &Value) -> Result<GroupWord> {
    let mut letters = Vec::new();
    for item in array(v)? {
        let pow = match item.get("pow") {
            Some(p) => p.as_i64().ok_or_else(|| invalid("pow must be an integer"))?,
            None => 1,
        };
        let gen = match field(item, "gen")?.as_str() {
            Some("S") => Generator::S,
            Some("T") => Generator::T,
            Some("Td") => Generator::Td(ints_from_json(field(item, "d")?)?),
            other => return Err(invalid(format!("unknown generator {other:?}"))),
        };
        letters.push(Letter { gen, pow });
    }
    Ok(GroupWord { letters })
}

pub fn period_point_to_json(z: &PeriodPoint) -> Value {
    json!({ "re": rationals_to_json(&z.re), "im": rationals_to_json(&z.im) })
}

pub fn period_point_from_json(v: &Value) -> Result<PeriodPoint> {
    Ok(PeriodPoint {
        re: rationals_from_json(field(v, "re")?)?,
        im: rationals_from_json(field(v, "im")?)?,
    })
}

/// Whether an integer needs the string encoding.
pub fn is_large(x: &BigInt) -> bool {
    x.abs().bits() > SAFE_BITS
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_round_trip() {
        let small = BigInt::from(-12345);
        assert_eq!(int_to_json(&small), json!(-12345));
        let big = BigInt::from(1u64 << 60);
        assert_eq!(int_to_json(&big), json!("1152921504606846976"));
        assert!(is_large(&big));
        for x in [small, big, BigInt::from(-(1i64 << 53))] {
            assert_eq!(int_from_json(&int_to_json(&x)).unwrap(), x);
        }
        assert!(int_from_json(&json!(1.5)).is_err());
        assert!(int_from_json(&json!("abc")).is_err());
    }

    #[test]
    fn rationals_round_trip() {
        let q = BigRational::new((-3).into(), 4.into());
        assert_eq!(rational_to_json(&q), json!("-3/4"));
        assert_eq!(rational_from_json(&json!("-3/4")).unwrap(), q);
        assert_eq!(rational_from_json(&json!(7)).unwrap(), BigRational::from_integer(7.into()));
        assert!(rational_from_json(&json!("1/0")).is_err());
    }

    #[test]
    fn lattices_and_sublattices() {
        let k3 = StandardLattice::K3.build();
        assert_eq!(lattice_to_json(&k3), json!("K3"));
        let l = lattice_from_json(&json!({"rank": 2, "gram": [[2, 1], [1, 2]], "label": "A2"})).unwrap();
        assert_eq!(lattice_from_json(&lattice_to_json(&l)).unwrap(), l);
        assert!(lattice_from_json(&json!({"rank": 3, "gram": [[2, 1], [1, 2]]})).is_err());
        assert!(lattice_from_json(&json!({"gram": [[0, 1], [2, 0]]})).is_err());
        let s = sublattice_from_json(&json!({"ambient": "U", "basis": [[1, 1]]})).unwrap();
        assert_eq!(sublattice_to_json(&s), json!({"ambient": "U", "basis": [[1, 1]]}));
    }

    #[test]
    fn classes_and_words() {
        let a = graded_class_from_json(&json!({"dim": 1, "components": {"0": 2, "1": ["1/2", 0]}})).unwrap();
        assert_eq!(
            graded_class_to_json(&a),
            json!({"dim": 1, "frame": "curve-standard", "components": {"0": 2, "1": ["1/2", 0], "2": 0}})
        );
        assert!(graded_class_from_json(&json!({"dim": 3, "components": {}})).is_err());
        let w = word_from_json(&json!([{"gen": "S"}, {"gen": "T", "pow": -2}, {"gen": "Td", "d": [1, 0], "pow": 3}]))
            .unwrap();
        assert_eq!(word_from_json(&word_to_json(&w)).unwrap(), w);
        assert!(word_from_json(&json!([{"gen": "X"}])).is_err());
        let g = sl2_from_json(&json!([[2, 1], [1, 1]])).unwrap();
        assert_eq!(sl2_from_json(&sl2_to_json(&g)).unwrap(), g);
        assert!(sl2_from_json(&json!([[2, 0], [0, 2]])).is_err());
    }

    #[test]
    fn polytopes_and_periods() {
        let p = polytope_from_json(&json!({"dim": 3, "vertices": [[1,0,0],[0,1,0],[0,0,1],[-1,-1,-1],[0,0,0]]}))
            .unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(polytope_from_json(&polytope_to_json(&p)).unwrap(), p);
        assert!(polytope_from_json(&json!({"dim": 3, "vertices": [[1, 0]]})).is_err());
        let z = period_point_from_json(&json!({"re": [1, "1/2"], "im": [0, 0]})).unwrap();
        assert_eq!(z.re[1], BigRational::new(1.into(), 2.into()));
        assert_eq!(period_point_from_json(&period_point_to_json(&z)).unwrap(), z);
    }
}
