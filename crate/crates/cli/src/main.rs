mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use commands::Ctx;
use report::{Failure, RunReport};

#[derive(Parser, Debug)]
#[command(name = "mirrorlat", version, about = "Exact lattice and toric computations for K3 and Calabi-Yau mirror symmetry")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integral lattices.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Mukai pairing and Mukai vectors.
    #[command(subcommand)]
    Mukai(MukaiCmd),
    /// Lattice-polarized K3 mirrors.
    #[command(subcommand)]
    Mirror(MirrorCmd),
    /// Monodromy around the cusp.
    #[command(subcommand)]
    Monodromy(MonodromyCmd),
    /// SL(2,Z) for elliptic curves.
    #[command(subcommand)]
    Elliptic(EllipticCmd),
    /// Reflexive polytopes.
    #[command(subcommand)]
    Toric(ToricCmd),
    /// Run the built-in check suites over the bundled corpus.
    Verify {
        #[arg(value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    All,
    Lattice,
    Mirror,
    Monodromy,
    Elliptic,
    Toric,
}

/// A lattice given by standard name or by a JSON file.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct LatticeSource {
    /// Standard lattice: U, U_mukai, E8neg, K3, MukaiK3.
    #[arg(long)]
    name: Option<String>,
    /// JSON file: a standard name or {"gram": [[..]]}.
    #[arg(long)]
    gram: Option<PathBuf>,
}

/// Comma-separated integer coordinates, brackets optional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntVec(pub Vec<BigInt>);

fn parse_vector(s: &str) -> Result<IntVec, String> {
    parse_ints(s).map(IntVec)
}

fn parse_ints(s: &str) -> Result<Vec<BigInt>, String> {
    let body = s.trim().trim_start_matches('[').trim_end_matches(']');
    if body.trim().is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|t| t.trim().parse::<BigInt>().map_err(|e| format!("`{}`: {e}", t.trim())))
        .collect()
}

#[derive(Subcommand, Debug)]
enum LatticeCmd {
    /// Signature, determinant and parity.
    Sig(LatticeSource),
    /// Orthogonal complement of a sublattice.
    Ocomp {
        /// Sublattice JSON: {"ambient": .., "basis": [[..]]}.
        #[arg(long)]
        sub: PathBuf,
    },
    /// Primitivity and saturation of a sublattice.
    Primitive {
        #[arg(long)]
        sub: PathBuf,
    },
    /// Vectors of a given norm with coordinates in [-bound, bound].
    Roots {
        #[command(flatten)]
        lattice: LatticeSource,
        #[arg(long, default_value_t = BigInt::from(-2), allow_hyphen_values = true)]
        norm: BigInt,
        #[arg(long, default_value_t = 5)]
        bound: u32,
    },
    /// Reflection in a vector of norm ±1 or ±2.
    Reflect {
        #[command(flatten)]
        lattice: LatticeSource,
        /// Comma-separated coordinates.
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        root: IntVec,
        /// Optional vector to reflect.
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        vector: Option<IntVec>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Variety {
    K3,
    Curve,
}

#[derive(Subcommand, Debug)]
enum MukaiCmd {
    /// Mukai pairing of two graded classes.
    Pair {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Mukai vector from rank and Chern data.
    Vector {
        #[arg(long, value_enum, default_value_t = Variety::K3)]
        variety: Variety,
        #[arg(long, allow_hyphen_values = true)]
        rank: BigInt,
        /// First Chern class in K3-lattice coordinates.
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        c1: Option<IntVec>,
        #[arg(long, allow_hyphen_values = true)]
        c2: Option<BigInt>,
        /// Degree, for curves.
        #[arg(long, allow_hyphen_values = true)]
        degree: Option<BigInt>,
    },
    /// Tensoring a K3 class by the line bundle with c1 = d.
    Tensor {
        #[arg(long)]
        class: PathBuf,
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        d: IntVec,
    },
}

/// A polarization file, optionally carrying the cusp pair.
#[derive(Args, Debug)]
struct MirrorInput {
    /// {"M": <sublattice>, "f": [..], "fprime": [..]} or a bare sublattice.
    #[arg(long = "M")]
    m: PathBuf,
    /// Coefficient bound for the hyperbolic-pair search.
    #[arg(long, default_value_t = 3)]
    bound: u32,
}

#[derive(Subcommand, Debug)]
enum MirrorCmd {
    /// Check that M is an even primitive sublattice of signature (1, t).
    Validate(MirrorInput),
    /// Search M^⊥ for a hyperbolic pair f, f′.
    Pair(MirrorInput),
    /// Mirror lattice, cusp and mir_P.
    Build(MirrorInput),
    /// The isometry mir_P of the Mukai lattice.
    Mirp(MirrorInput),
    /// Conjugate a K3 isometry by mir_P.
    Conjugate {
        #[command(flatten)]
        input: MirrorInput,
        /// Isometry JSON {"matrix": [[..]]} on the K3 lattice.
        #[arg(long)]
        g: PathBuf,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        sign: i32,
    },
    /// Map induced on M ⊥ ⟨f, f′⟩ by a Mukai-lattice isometry.
    Basemap {
        #[command(flatten)]
        input: MirrorInput,
        #[arg(long)]
        sigma: PathBuf,
    },
    /// Period-domain membership of z = re + i·im.
    Period {
        #[command(flatten)]
        lattice: LatticeSource,
        /// JSON {"re": [..], "im": [..]}.
        #[arg(long)]
        point: PathBuf,
        #[arg(long, default_value_t = 5)]
        bound: u32,
    },
    /// Whether a Mukai-lattice isometry keeps the filtration at the cusp.
    Filtr {
        #[command(flatten)]
        input: MirrorInput,
        #[arg(long)]
        sigma: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum MonodromyCmd {
    /// The monodromy isometry T_d.
    Td {
        #[command(flatten)]
        input: MirrorInput,
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        d: IntVec,
    },
    /// Compare mir_P T_d mir_P⁻¹ with tensoring by d.
    Verify {
        #[command(flatten)]
        input: MirrorInput,
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        d: IntVec,
    },
    /// Products of T_d for the given vectors up to a word length.
    Closure {
        #[command(flatten)]
        input: MirrorInput,
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true, required = true)]
        d: Vec<IntVec>,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
}

#[derive(Subcommand, Debug)]
enum EllipticCmd {
    /// The generators S, T and their relations.
    Gens,
    /// Write a matrix as a word in S and T.
    Decompose {
        /// Entries a,b,c,d of [[a, b], [c, d]].
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        matrix: IntVec,
    },
    /// Carry the action on H¹ to the even cohomology.
    Transport {
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        matrix: IntVec,
    },
}

#[derive(Args, Debug)]
struct PolytopeInput {
    /// JSON {"dim": d, "vertices": [[..]]}.
    #[arg(long)]
    polytope: PathBuf,
}

#[derive(Subcommand, Debug)]
enum ToricCmd {
    /// Polar dual.
    Dual(PolytopeInput),
    /// Reflexivity test.
    Reflexive(PolytopeInput),
    /// Lattice points and interior points.
    Points(PolytopeInput),
    /// Rank of the toric divisor lattice (dimension 3).
    Rank(PolytopeInput),
    /// Edge interior points against dual edges (dimension 3).
    Edges(PolytopeInput),
    /// Batyrev Hodge numbers (dimension 4).
    Hodge(PolytopeInput),
    /// Rank comparison with the dual (dimension 3).
    Dolgachev(PolytopeInput),
}

fn command_name(c: &Command) -> String {
    let debug = |x: &dyn std::fmt::Debug| {
        let s = format!("{x:?}");
        let head: String = s.chars().take_while(|c| c.is_alphanumeric()).collect();
        head.to_lowercase()
    };
    match c {
        Command::Lattice(x) => format!("lattice {}", debug(x)),
        Command::Mukai(x) => format!("mukai {}", debug(x)),
        Command::Mirror(x) => format!("mirror {}", debug(x)),
        Command::Monodromy(x) => format!("monodromy {}", debug(x)),
        Command::Elliptic(x) => format!("elliptic {}", debug(x)),
        Command::Toric(x) => format!("toric {}", debug(x)),
        Command::Verify { .. } => "verify".into(),
    }
}

fn run(cmd: Command, ctx: &mut Ctx) -> mirrorlat::Result<()> {
    match cmd {
        Command::Lattice(c) => commands::lattice(c, ctx),
        Command::Mukai(c) => commands::mukai(c, ctx),
        Command::Mirror(c) => commands::mirror(c, ctx),
        Command::Monodromy(c) => commands::monodromy(c, ctx),
        Command::Elliptic(c) => commands::elliptic(c, ctx),
        Command::Toric(c) => commands::toric(c, ctx),
        Command::Verify { suite } => commands::verify(suite, ctx),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // help and version are successes; usage errors are input errors
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let start = Instant::now();
    let command = command_name(&cli.command);
    let mut ctx = Ctx::default();
    let error = run(cli.command, &mut ctx).err().map(|e| Failure {
        kind: e.kind(),
        message: e.to_string(),
    });
    let report = RunReport {
        command,
        inputs_digest: report::digest(&ctx.inputs_value()),
        outputs: ctx.outputs,
        checks: ctx.checks,
        error,
        wall_time: start.elapsed().as_secs_f64(),
    };
    let text = match cli.format {
        Format::Json => report::render_json(&report.to_json()),
        Format::Text => report.to_text(),
    };
    print!("{text}");
    if let Some(f) = &report.error {
        eprintln!("mirrorlat: {}", f.message);
    }
    if let Some(path) = cli.out {
        if let Err(e) = std::fs::write(&path, &text) {
            eprintln!("mirrorlat: cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    ExitCode::from(report.exit_code())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn vectors_parse_with_or_without_brackets() {
        let want: Vec<BigInt> = [1, -1, 0].into_iter().map(BigInt::from).collect();
        assert_eq!(parse_ints("1,-1,0").unwrap(), want);
        assert_eq!(parse_ints("[1, -1, 0]").unwrap(), want);
        assert!(parse_ints("1,x").is_err());
        assert!(parse_ints("").unwrap().is_empty());
    }

    #[test]
    fn command_names() {
        let cli = Cli::try_parse_from(["mirrorlat", "toric", "hodge", "--polytope", "p.json"]).unwrap();
        assert_eq!(command_name(&cli.command), "toric hodge");
        let cli = Cli::try_parse_from(["mirrorlat", "lattice", "sig", "--name", "K3"]).unwrap();
        assert_eq!(command_name(&cli.command), "lattice sig");
        let cli = Cli::try_parse_from(["mirrorlat", "lattice", "reflect", "--name", "U", "--root", "1,-1"]).unwrap();
        match cli.command {
            Command::Lattice(LatticeCmd::Reflect { root, vector, .. }) => {
                assert_eq!(root.0.len(), 2);
                assert!(vector.is_none());
            }
            other => panic!("parsed {other:?}"),
        }
    }
}
