//! The bundled example inputs under `corpus/`.

use crate::error::{Error, Result};
use crate::io::{mirror_spec_from_json, parse, polytope_from_json, MirrorSpec};
use crate::k3::MirrorData;
use crate::toric::LatticePolytope;

macro_rules! corpus_file {
    ($name:literal) => {
        ($name, include_str!(concat!("../../../corpus/", $name, ".json")))
    };
}

/// Polarizations of the K3 lattice with a cusp pair.
pub const POLARIZATIONS: &[(&str, &str)] = &[
    corpus_file!("k3-quartic"),
    corpus_file!("k3-degree2"),
    corpus_file!("k3-hyperbolic"),
    corpus_file!("k3-two-minus-two"),
    corpus_file!("k3-rank10"),
    corpus_file!("k3-toy-rank4"),
];

/// A polarization whose complement is negative definite beyond `U³`.
pub const NEG_DEF: (&str, &str) = corpus_file!("neg-def");

pub const POLYTOPES_3D: &[(&str, &str)] = &[
    corpus_file!("cube"),
    corpus_file!("octahedron"),
    corpus_file!("quartic"),
    corpus_file!("quartic-dual"),
    corpus_file!("sextic-1113"),
    corpus_file!("diamond-prism"),
    corpus_file!("triangle-prism"),
];

pub const POLYTOPES_4D: &[(&str, &str)] = &[
    corpus_file!("quintic"),
    corpus_file!("quintic-dual"),
    corpus_file!("octic-11222"),
    corpus_file!("sextic-11112"),
    corpus_file!("octic-11114"),
    corpus_file!("tesseract"),
    corpus_file!("cross-polytope"),
];

/// Weight systems behind the weighted-projective corpus polytopes.
pub const WEIGHTED: &[(&str, &[u32])] = &[
    ("quartic", &[1, 1, 1, 1]),
    ("sextic-1113", &[1, 1, 1, 3]),
    ("quintic", &[1, 1, 1, 1, 1]),
    ("octic-11222", &[1, 1, 2, 2, 2]),
    ("sextic-11112", &[1, 1, 1, 1, 2]),
    ("octic-11114", &[1, 1, 1, 1, 4]),
];

fn lookup<'a>(table: &[(&'a str, &'a str)], name: &str) -> Option<&'a str> {
    table.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn polarization_spec(name: &str) -> Result<MirrorSpec> {
    let text = lookup(POLARIZATIONS, name)
        .or_else(|| (name == NEG_DEF.0).then_some(NEG_DEF.1))
        .ok_or_else(|| Error::Invalid(format!("no corpus polarization `{name}`")))?;
    mirror_spec_from_json(&parse(text)?)
}

pub fn polarization(name: &str) -> Result<MirrorData> {
    polarization_spec(name)?.build(3)
}

pub fn polarizations() -> Result<Vec<(&'static str, MirrorData)>> {
    POLARIZATIONS.iter().map(|(n, _)| Ok((*n, polarization(n)?))).collect()
}

pub fn polytope(name: &str) -> Result<LatticePolytope> {
    let text = lookup(POLYTOPES_3D, name)
        .or_else(|| lookup(POLYTOPES_4D, name))
        .ok_or_else(|| Error::Invalid(format!("no corpus polytope `{name}`")))?;
    polytope_from_json(&parse(text)?)
}

pub fn polytopes() -> Result<Vec<(&'static str, LatticePolytope)>> {
    POLYTOPES_3D
        .iter()
        .chain(POLYTOPES_4D)
        .map(|(n, _)| Ok((*n, polytope(n)?)))
        .collect()
}
