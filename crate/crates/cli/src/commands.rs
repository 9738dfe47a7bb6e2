//! Command implementations. Each reads its inputs through [`Ctx`], so the
//! digest covers exactly what was used, and writes outputs and checks back.

use std::path::Path;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use mirrorlat::error::{Error, Result};
use mirrorlat::io::{
    gaussian_to_json, graded_class_from_json, graded_class_to_json, int_to_json, ints_to_json, isometry_from_json,
    isometry_to_json, lattice_from_json, mirror_data_to_json, mirror_spec_from_json, parse, period_point_from_json,
    polytope_from_json, rationals_to_json, sl2_to_json, sublattice_from_json, sublattice_to_json, word_to_json,
    zmatrix_to_json, MirrorSpec,
};
use mirrorlat::k3::{
    find_hyperbolic_pair, induced_base_map, is_period_point, mirror_conjugate, preserves_filtration,
    validate_polarization, MirrorData,
};
use mirrorlat::lattice::{enumerate_vectors, reflection, IntegralLattice, Isometry, Orientation, StandardLattice};
use mirrorlat::monodromy::{
    elliptic_generators, elliptic_transport, group_closure, sl2z_decompose, td_for, verify_monodromy_mirror, Sl2,
};
use mirrorlat::mukai::{mukai_pairing, mukai_vector_curve, mukai_vector_k3, tensor_action};
use mirrorlat::toric::{
    count_points, dolgachev_evidence, dual_polytope, edge_condition, hodge_numbers, toric_divisor_rank,
    LatticePolytope,
};
use mirrorlat::verify::{self as suites, Suite};

use crate::report::CheckLine;
use crate::{
    EllipticCmd, IntVec, LatticeCmd, LatticeSource, MirrorCmd, MirrorInput, MonodromyCmd, MukaiCmd, PolytopeInput, SuiteArg,
    ToricCmd, Variety,
};

/// Largest coordinate box scanned for indefinite lattices.
const MAX_BOX: f64 = 5.0e7;

#[derive(Default)]
pub struct Ctx {
    inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    pub checks: Vec<CheckLine>,
}

impl Ctx {
    pub fn inputs_value(&self) -> Value {
        Value::Object(self.inputs.clone())
    }

    fn file(&mut self, key: &str, path: &Path) -> Result<Value> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
        let v = parse(&text)?;
        self.inputs.insert(key.into(), v.clone());
        Ok(v)
    }

    fn arg(&mut self, key: &str, v: Value) {
        self.inputs.insert(key.into(), v);
    }

    fn out(&mut self, key: &str, v: Value) {
        self.outputs.insert(key.into(), v);
    }

    fn check(&mut self, name: &str, passed: bool, message: impl Into<String>) {
        self.checks.push(CheckLine {
            name: name.into(),
            passed,
            message: message.into(),
        });
    }
}

fn ints(v: &[BigInt]) -> Value {
    ints_to_json(v)
}

fn signature_text(l: &IntegralLattice) -> String {
    let i = l.inertia();
    if i.nullity == 0 {
        format!("({},{})", i.positive, i.negative)
    } else {
        format!("({},{},{})", i.positive, i.negative, i.nullity)
    }
}

fn lattice_source(src: &LatticeSource, ctx: &mut Ctx) -> Result<IntegralLattice> {
    match (&src.name, &src.gram) {
        (Some(name), _) => {
            ctx.arg("name", json!(name));
            Ok(name.parse::<StandardLattice>()?.build())
        }
        (None, Some(path)) => {
            let v = ctx.file("gram", path)?;
            lattice_from_json(&v)
        }
        (None, None) => Err(Error::Invalid("give --name or --gram".into())),
    }
}

fn mirror_spec(input: &MirrorInput, ctx: &mut Ctx) -> Result<MirrorSpec> {
    let v = ctx.file("M", &input.m)?;
    ctx.arg("bound", json!(input.bound));
    mirror_spec_from_json(&v)
}

fn mirror_data(input: &MirrorInput, ctx: &mut Ctx) -> Result<MirrorData> {
    mirror_spec(input, ctx)?.build(input.bound)
}

fn orientation_name(o: Orientation) -> &'static str {
    match o {
        Orientation::Preserved => "preserved",
        Orientation::Reversed => "reversed",
    }
}

pub fn lattice(cmd: LatticeCmd, ctx: &mut Ctx) -> Result<()> {
    match cmd {
        LatticeCmd::Sig(src) => {
            let l = lattice_source(&src, ctx)?;
            ctx.out("signature", json!(signature_text(&l)));
            ctx.out("rank", json!(l.rank()));
            ctx.out("determinant", int_to_json(&l.det()));
            ctx.out("even", json!(l.is_even()));
            ctx.out("unimodular", json!(l.is_unimodular()));
        }
        LatticeCmd::Ocomp { sub } => {
            let s = sublattice_from_json(&ctx.file("sub", &sub)?)?;
            let c = s.orthogonal_complement();
            ctx.out("complement", sublattice_to_json(&c));
            ctx.out("rank", json!(c.rank()));
            ctx.out("signature", json!(signature_text(&c.lattice())));
            let meets = s.rank() + c.rank() == s.ambient().rank();
            ctx.check("ranks add up", meets, format!("{} + {} = {}", s.rank(), c.rank(), s.ambient().rank()));
        }
        LatticeCmd::Primitive { sub } => {
            let s = sublattice_from_json(&ctx.file("sub", &sub)?)?;
            let index: BigInt = s.basis().elementary_divisors().iter().product();
            ctx.out("primitive", json!(s.is_primitive()));
            ctx.out("index", int_to_json(&index));
            ctx.out("saturation", sublattice_to_json(&s.saturation()));
        }
        LatticeCmd::Roots { lattice, norm, bound } => {
            let l = lattice_source(&lattice, ctx)?;
            ctx.arg("norm", int_to_json(&norm));
            ctx.arg("bound", json!(bound));
            let i = l.inertia();
            let definite = i.nullity == 0 && (i.positive == 0 || i.negative == 0);
            let size = f64::from(2 * bound + 1).powi(l.rank() as i32);
            if !definite && size > MAX_BOX {
                return Err(Error::Invalid(format!(
                    "box [-{bound}, {bound}]^{} is too large to scan; lower --bound",
                    l.rank()
                )));
            }
            let e = enumerate_vectors(&l, &norm, bound);
            ctx.out("norm", int_to_json(&e.norm));
            ctx.out("bound", json!(e.bound));
            ctx.out("count", json!(e.vectors.len()));
            ctx.out("vectors", Value::Array(e.vectors.iter().map(|v| ints(v)).collect()));
        }
        LatticeCmd::Reflect { lattice, root, vector } => {
            let root = root.0;
            let l = lattice_source(&lattice, ctx)?;
            ctx.arg("root", ints(&root));
            let g = reflection(&l, &root)?;
            ctx.out("reflection", isometry_to_json(&g));
            ctx.check("isometry", g.preserves_form(), "preserves the form");
            ctx.check("involution", g.compose(&g)?.is_identity(), "squares to the identity");
            if let Some(IntVec(x)) = vector {
                ctx.arg("vector", ints(&x));
                let image = g
                    .apply_int(&x)
                    .ok_or_else(|| Error::NonIntegral("reflected vector".into()))?;
                ctx.out("image", ints(&image));
            }
        }
    }
    Ok(())
}

pub fn mukai(cmd: MukaiCmd, ctx: &mut Ctx) -> Result<()> {
    match cmd {
        MukaiCmd::Pair { a, b } => {
            let a = graded_class_from_json(&ctx.file("a", &a)?)?;
            let b = graded_class_from_json(&ctx.file("b", &b)?)?;
            let p = mukai_pairing(&a, &b)?;
            ctx.out("pairing", gaussian_to_json(&p));
            ctx.out("real", json!(p.is_real()));
        }
        MukaiCmd::Vector {
            variety,
            rank,
            c1,
            c2,
            degree,
        } => {
            ctx.arg("rank", int_to_json(&rank));
            let v = match variety {
                Variety::K3 => {
                    ctx.arg("variety", json!("K3"));
                    let (c1, c2) = match (c1, c2) {
                        (Some(IntVec(c1)), Some(c2)) => (c1, c2),
                        _ => return Err(Error::Invalid("K3 vectors need --c1 and --c2".into())),
                    };
                    ctx.arg("c1", ints(&c1));
                    ctx.arg("c2", int_to_json(&c2));
                    mukai_vector_k3(&rank, &c1, &c2)?
                }
                Variety::Curve => {
                    ctx.arg("variety", json!("curve"));
                    let d = degree.ok_or_else(|| Error::Invalid("curve vectors need --degree".into()))?;
                    ctx.arg("degree", int_to_json(&d));
                    mukai_vector_curve(&rank, &d)
                }
            };
            let square = mukai_pairing(&v, &v)?;
            ctx.out("vector", graded_class_to_json(&v));
            ctx.out("square", gaussian_to_json(&square));
        }
        MukaiCmd::Tensor { class, d: IntVec(d) } => {
            let a = graded_class_from_json(&ctx.file("class", &class)?)?;
            ctx.arg("d", ints(&d));
            let b = tensor_action(&a, &d)?;
            let (aa, bb) = (mukai_pairing(&a, &a)?, mukai_pairing(&b, &b)?);
            ctx.out("image", graded_class_to_json(&b));
            ctx.check("pairing preserved", aa == bb, "⟨a, a⟩ equals ⟨e^d a, e^d a⟩");
        }
    }
    Ok(())
}

pub fn mirror(cmd: MirrorCmd, ctx: &mut Ctx) -> Result<()> {
    match cmd {
        MirrorCmd::Validate(input) => {
            let spec = mirror_spec(&input, ctx)?;
            let r = validate_polarization(&spec.m);
            ctx.out("rank", json!(r.rank));
            ctx.out("even", json!(r.even));
            ctx.out("nondegenerate", json!(r.nondegenerate));
            ctx.out("signature", json!(r.signature.map(|(p, q)| format!("({p},{q})"))));
            ctx.out("t", json!(r.t));
            ctx.out("primitive", json!(r.primitive));
            ctx.check("polarization", r.pass, "even, primitive, signature (1, t)");
        }
        MirrorCmd::Pair(input) => {
            let spec = mirror_spec(&input, ctx)?;
            let perp = spec.m.orthogonal_complement();
            let (f, fp) = find_hyperbolic_pair(&perp, input.bound)?;
            let l = spec.m.ambient();
            ctx.out("f", ints(&f));
            ctx.out("fprime", ints(&fp));
            let ok = l.norm(&f)? == BigInt::from(0) && l.norm(&fp)? == BigInt::from(0) && l.pair(&f, &fp)? == BigInt::from(1);
            ctx.check("hyperbolic pair", ok, "f² = f′² = 0, f·f′ = 1");
        }
        MirrorCmd::Build(input) => {
            let d = mirror_data(&input, ctx)?;
            if let Value::Object(m) = mirror_data_to_json(&d)? {
                for (k, v) in m {
                    ctx.out(&k, v);
                }
            }
            let (p, q) = d.mcheck_signature()?;
            ctx.check("mirror signature", p == 1 && q + 1 == d.mcheck().rank(), format!("({p},{q})"));
        }
        MirrorCmd::Mirp(input) => {
            let d = mirror_data(&input, ctx)?;
            let m = d.mirp();
            ctx.out("mirP", isometry_to_json(m));
            ctx.check("integral", m.is_integral(), "all entries are integers");
            ctx.check("isometry", m.preserves_form(), "Gram matrix is preserved");
            ctx.check("involution", m.compose(m)?.is_identity(), "mir_P² = id");
        }
        MirrorCmd::Conjugate { input, g, sign } => {
            let d = mirror_data(&input, ctx)?;
            let g = isometry_from_json(&ctx.file("g", &g)?, d.l())?;
            ctx.arg("sign", json!(sign));
            let c = mirror_conjugate(&g, sign, &d)?;
            ctx.out("sigma", isometry_to_json(&c.sigma));
            ctx.out("input_member", json!(c.input_member));
            ctx.out("preserves_setwise", json!(c.preserves_setwise));
            ctx.out("fixes_pointwise", json!(c.fixes_pointwise));
            ctx.out("orientation", json!(orientation_name(c.orientation)));
            ctx.check("integral", c.sigma.is_integral(), "conjugate is integral");
            ctx.check(
                "orientation compatible",
                !c.input_member || c.orientation == Orientation::Preserved,
                "positive 4-planes keep their orientation when g does",
            );
        }
        MirrorCmd::Basemap { input, sigma } => {
            let d = mirror_data(&input, ctx)?;
            let s = isometry_from_json(&ctx.file("sigma", &sigma)?, d.ltilde())?;
            let b = induced_base_map(&s, &d)?;
            ctx.out("matrix", zmatrix_to_json(&b.matrix));
            ctx.out("basis", zmatrix_to_json(&b.basis));
            ctx.out("is_identity", json!(b.is_identity));
            ctx.out("is_minus_identity", json!(b.is_minus_identity));
            ctx.out("trivial", json!(b.is_trivial()));
            ctx.out("fixed", zmatrix_to_json(b.fixed.basis()));
        }
        MirrorCmd::Period { lattice, point, bound } => {
            let n = lattice_source(&lattice, ctx)?;
            let z = period_point_from_json(&ctx.file("point", &point)?)?;
            ctx.arg("bound", json!(bound));
            let r = is_period_point(&n, &z, bound)?;
            ctx.out("isotropic", json!(r.isotropic));
            ctx.out("positive", json!(r.positive));
            ctx.out("witness", r.witness.as_deref().map_or(Value::Null, ints));
            ctx.out("bound", json!(r.bound));
            ctx.out("exhaustive", json!(r.exhaustive));
            ctx.out("valid", json!(r.valid()));
        }
        MirrorCmd::Filtr { input, sigma } => {
            let d = mirror_data(&input, ctx)?;
            let s = isometry_from_json(&ctx.file("sigma", &sigma)?, d.ltilde())?;
            let flag = d.filtration_flag()?;
            ctx.out("w", ints(&flag.w));
            ctx.out("step_ranks", json!(flag.steps.iter().map(|s| s.rank()).collect::<Vec<_>>()));
            ctx.out("preserves", json!(preserves_filtration(&s, &flag)));
        }
    }
    Ok(())
}

fn monodromy_data(input: &MirrorInput, d: &[BigInt], ctx: &mut Ctx) -> Result<MirrorData> {
    let data = mirror_data(input, ctx)?;
    ctx.arg("d", ints(d));
    Ok(data)
}

pub fn monodromy(cmd: MonodromyCmd, ctx: &mut Ctx) -> Result<()> {
    match cmd {
        MonodromyCmd::Td { input, d: IntVec(d) } => {
            let data = monodromy_data(&input, &d, ctx)?;
            let t = td_for(&data, &d)?;
            ctx.out("Td", isometry_to_json(&t));
            ctx.check("isometry", t.preserves_form(), "preserves the K3 form");
        }
        MonodromyCmd::Verify { input, d: IntVec(d) } => {
            let data = monodromy_data(&input, &d, ctx)?;
            let r = verify_monodromy_mirror(&data, &d)?;
            ctx.out("conjugate", isometry_to_json(&r.conjugate));
            ctx.out("tensor", isometry_to_json(&r.tensor));
            ctx.out("discrepancies", json!(r.discrepancies.len()));
            ctx.check(
                "mirror identity",
                r.holds(),
                format!("{} differing entries", r.discrepancies.len()),
            );
        }
        MonodromyCmd::Closure { input, d, max_len } => {
            let data = mirror_data(&input, ctx)?;
            ctx.arg("d", Value::Array(d.iter().map(|v| ints(&v.0)).collect()));
            ctx.arg("max_len", json!(max_len));
            let gens = d.iter().map(|v| td_for(&data, &v.0)).collect::<Result<Vec<_>>>()?;
            let c = group_closure(Isometry::identity(data.l()), &gens, max_len);
            ctx.out("elements", json!(c.elements.len()));
            ctx.out("commutative", json!(c.commutative));
            ctx.out("relations", json!(c.relations));
        }
    }
    Ok(())
}

fn sl2_arg(m: &[BigInt], ctx: &mut Ctx) -> Result<Sl2> {
    if m.len() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: m.len(),
        });
    }
    ctx.arg("matrix", ints(m));
    Sl2::new(m[0].clone(), m[1].clone(), m[2].clone(), m[3].clone())
}

pub fn elliptic(cmd: EllipticCmd, ctx: &mut Ctx) -> Result<()> {
    match cmd {
        EllipticCmd::Gens => {
            let (s, t) = elliptic_generators();
            ctx.out("S", sl2_to_json(&s));
            ctx.out("T", sl2_to_json(&t));
            ctx.check("S^4 = I", s.pow(4).is_identity(), "order four");
            ctx.check("(ST)^6 = I", s.mul(&t).pow(6).is_identity(), "order six");
            ctx.check("S^2 central", s.pow(2).is_central(), "S² = −I");
        }
        EllipticCmd::Decompose { matrix: IntVec(matrix) } => {
            let g = sl2_arg(&matrix, ctx)?;
            let w = sl2z_decompose(&g)?;
            ctx.out("word", json!(w.to_string()));
            ctx.out("letters", word_to_json(&w));
            ctx.check("round trip", w.evaluate_sl2()? == g, "the word evaluates to the input");
        }
        EllipticCmd::Transport { matrix: IntVec(matrix) } => {
            let g = sl2_arg(&matrix, ctx)?;
            let t = elliptic_transport(&g)?;
            ctx.out("conjugate", zmatrix_to_json(&t.conjugate));
            ctx.out("word", json!(t.word.to_string()));
            ctx.out("word_action", zmatrix_to_json(&t.word_action));
            ctx.check("transport identity", t.holds(), "mir ∘ g ∘ mir equals the even action of the word");
            ctx.check("filtration", t.preserves_flag, "⟨A⟩ ⊂ H¹ is preserved");
        }
    }
    Ok(())
}

fn polytope(input: &PolytopeInput, ctx: &mut Ctx) -> Result<LatticePolytope> {
    polytope_from_json(&ctx.file("polytope", &input.polytope)?)
}

pub fn toric(cmd: ToricCmd, ctx: &mut Ctx) -> Result<()> {
    match cmd {
        ToricCmd::Dual(input) => {
            let p = polytope(&input, ctx)?;
            let d = dual_polytope(&p)?;
            ctx.out("vertices", Value::Array(d.vertices.iter().map(|v| rationals_to_json(v)).collect()));
            ctx.out("integral", json!(d.integral));
        }
        ToricCmd::Reflexive(input) => {
            let p = polytope(&input, ctx)?;
            ctx.out("origin_interior", json!(p.origin_interior()));
            ctx.out("reflexive", json!(p.is_reflexive()?));
        }
        ToricCmd::Points(input) => {
            let p = polytope(&input, ctx)?;
            let c = count_points(&p);
            ctx.out("l", json!(c.l));
            ctx.out("l_star", json!(c.l_star));
            ctx.out("vertices", json!(p.vertices().len()));
            ctx.out("facets", json!(p.facets().len()));
        }
        ToricCmd::Rank(input) => {
            let r = toric_divisor_rank(&polytope(&input, ctx)?)?;
            ctx.out("rank", json!(r.rank));
            ctx.out("picard", json!(r.picard));
        }
        ToricCmd::Edges(input) => {
            let e = edge_condition(&polytope(&input, ctx)?)?;
            let edges: Vec<Value> = e
                .edges
                .iter()
                .map(|x| {
                    json!({
                        "endpoints": [ints(&x.endpoints[0]), ints(&x.endpoints[1])],
                        "l_star": x.l_star,
                        "dual_l_star": x.dual_l_star,
                    })
                })
                .collect();
            ctx.out("edges", Value::Array(edges));
            ctx.out("literal", json!(e.literal));
            ctx.out("product", json!(e.product));
        }
        ToricCmd::Hodge(input) => {
            let h = hodge_numbers(&polytope(&input, ctx)?)?;
            ctx.out("h11", json!(h.h11));
            ctx.out("h21", json!(h.h21));
            ctx.out("polynomial", json!(h.polynomial));
            ctx.out("correction", json!(h.correction));
            ctx.out("euler", json!(2 * (h.h11 - h.h21)));
        }
        ToricCmd::Dolgachev(input) => {
            let d = dolgachev_evidence(&polytope(&input, ctx)?)?;
            ctx.out("rank_delta", json!(d.rank_delta));
            ctx.out("rank_dual", json!(d.rank_dual));
            ctx.out("picard_delta", json!(d.picard_delta));
            ctx.out("picard_dual", json!(d.picard_dual));
            ctx.out("necessary", json!(d.necessary));
            ctx.out("defect", json!(d.defect));
            ctx.out("equality", json!(d.equality()));
        }
    }
    Ok(())
}

pub fn verify(suite: SuiteArg, ctx: &mut Ctx) -> Result<()> {
    let selected: Vec<Suite> = match suite {
        SuiteArg::All => Suite::ALL.to_vec(),
        SuiteArg::Lattice => vec![Suite::Lattice],
        SuiteArg::Mirror => vec![Suite::Mirror],
        SuiteArg::Monodromy => vec![Suite::Monodromy],
        SuiteArg::Elliptic => vec![Suite::Elliptic],
        SuiteArg::Toric => vec![Suite::Toric],
    };
    let names: Vec<&str> = selected.iter().map(|s| s.name()).collect();
    ctx.arg("suites", json!(names));
    ctx.out("suites", json!(names));
    for s in selected {
        for c in suites::run(s) {
            ctx.check(&format!("{}: {}", c.suite.name(), c.name), c.passed, c.detail);
        }
    }
    Ok(())
}
