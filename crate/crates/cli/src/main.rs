//! `chainpoly`: JSON in, exact certificates out.
//!
//! Exit status 0 means success, 2 a mathematical failure reported with a
//! witness, 1 an input error.

mod commands;
mod input;
mod report;

use std::io::Write;
use std::process::ExitCode;

use chainpoly::families::FamilyKind;
use chainpoly::partition::FallingVariant;
use chainpoly::{graph, poset, qarr, tnmat, Polynomial, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{envelope, render, CliError, Format, Outcome};

#[derive(Parser, Debug)]
#[command(name = "chainpoly", version, about = "Exact chain polynomials, TN certificates and h-vectors")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,

    #[command(flatten)]
    pub caps: Caps,

    #[command(subcommand)]
    pub command: Command,
}

/// Safety limits for exponential computations.
#[derive(Args, Debug, Clone)]
pub struct Caps {
    /// Largest matrix order for brute-force minor enumeration.
    #[arg(long, global = true, default_value_t = tnmat::DEFAULT_MINOR_CAP)]
    pub cap_minors: usize,
    /// Largest explicit poset realized from a matrix.
    #[arg(long, global = true, default_value_t = poset::DEFAULT_ELEMENT_CAP)]
    pub cap_elements: usize,
    /// Most hyperplanes for subset enumeration of characteristic polynomials (at most 63).
    #[arg(long, global = true, default_value_t = qarr::DEFAULT_SUBSET_CAP)]
    pub cap_subsets: usize,
    /// Most linear maps enumerated by the critical-problem count.
    #[arg(long, global = true, default_value_t = qarr::DEFAULT_HOM_CAP)]
    pub cap_hom: u64,
    /// Most graph vertices for chromatic polynomials (at most 32).
    #[arg(long, global = true, default_value_t = graph::DEFAULT_VERTEX_CAP)]
    pub cap_vertices: usize,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Source {
    /// JSON input file; `-` reads stdin. Repeatable.
    #[arg(long = "input", short = 'i')]
    pub inputs: Vec<String>,
    /// Inline JSON document. Repeatable.
    #[arg(long = "json")]
    pub inline: Vec<String>,
}

/// A matrix given by a named family or as JSON.
#[derive(Args, Debug, Clone)]
pub struct MatrixSource {
    #[command(flatten)]
    pub source: Source,
    /// boolean, gaussian:q, cubical:r or partition.
    #[arg(long)]
    pub family: Option<FamilyKind>,
    /// Truncation order N.
    #[arg(long = "n")]
    pub n: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    K,
    KPlusOne,
}

impl From<Variant> for FallingVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::K => FallingVariant::K,
            Variant::KPlusOne => FallingVariant::KPlusOne,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide total nonnegativity by Whitney reduction.
    TnCheck {
        #[command(flatten)]
        m: MatrixSource,
        /// Also enumerate every minor (bounded by --cap-minors).
        #[arg(long)]
        brute_force: bool,
    },
    /// The normalized resolution (λ, R_{n,k}) of a TN matrix.
    Resolve {
        #[command(flatten)]
        m: MatrixSource,
    },
    /// Chain polynomials p_0, ..., p_N.
    Chain {
        #[command(flatten)]
        m: MatrixSource,
    },
    /// The subdivision operator E applied to a polynomial.
    Subdivide {
        #[command(flatten)]
        m: MatrixSource,
        /// Ascending coefficients, e.g. "0,1,1".
        #[arg(long, value_parser = input::parse_poly, allow_hyphen_values = true)]
        poly: Polynomial,
    },
    /// Zeta polynomial Z(m) = (R^m)_{i,j}, and the PF test on row i.
    Zeta {
        #[command(flatten)]
        m: MatrixSource,
        #[arg(long)]
        i: usize,
        #[arg(long, default_value_t = 0)]
        j: usize,
    },
    /// Rank-selected Möbius value μ_S(k).
    Mobius {
        #[command(flatten)]
        m: MatrixSource,
        /// Rank set S = {0 = s_0 < s_1 < ...}, comma separated.
        #[arg(long = "S", value_delimiter = ',', required = true)]
        s: Vec<usize>,
        /// Index k of the top element s_k; defaults to the last.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Flag h-vector entries β(S) of the rank-n interval.
    FlagH {
        #[command(flatten)]
        m: MatrixSource,
        /// Subset of 1..rank-1; all subsets when omitted.
        #[arg(long = "S", value_delimiter = ',')]
        s: Option<Vec<usize>>,
        /// Rank of the interval; defaults to N.
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Pólya frequency tests for a sequence or the values of a polynomial.
    Pf {
        /// Sequence a_0, a_1, ...; PF up to --order.
        #[arg(long, value_parser = input::parse_rational, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "poly")]
        values: Option<Vec<Rational>>,
        /// Order of the Toeplitz truncation; defaults to the sequence length minus one.
        #[arg(long)]
        order: Option<usize>,
        /// Test the sequence P(0), P(1), ... of this polynomial.
        #[arg(long, value_parser = input::parse_poly, allow_hyphen_values = true)]
        poly: Option<Polynomial>,
    },
    /// Real-rooted family from a PF generating function given as JSON.
    Pft {
        #[command(flatten)]
        source: Source,
        /// Largest index of the family.
        #[arg(long = "n")]
        n: usize,
    },
    /// The family q_n(t) from 1/(Q(x) - t x^r).
    ForgacsTran {
        /// Ascending coefficients of Q.
        #[arg(long, value_parser = input::parse_poly, allow_hyphen_values = true)]
        q_poly: Polynomial,
        #[arg(long)]
        r: usize,
        #[arg(long = "n")]
        n: usize,
    },
    /// Matrix, λ and R_{n,k} of a named family.
    Family {
        #[arg(long)]
        family: FamilyKind,
        #[arg(long = "n")]
        n: usize,
        /// Include the explicit rank-n poset.
        #[arg(long)]
        explicit: bool,
    },
    /// h-vector of a poset against a family.
    HVector {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "boolean")]
        family: FamilyKind,
    },
    /// θ-expansion of an arrangement over F_q.
    Theta {
        #[command(flatten)]
        source: Source,
    },
    /// Critical-problem count against χ(q^m).
    Critical {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        m: usize,
    },
    /// Shelling search or check for a q-poset or q-matroid.
    QShelling {
        #[command(flatten)]
        source: Source,
        /// Facet order to check instead of searching.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
    },
    /// r-cubical h-vector and the comparison with Adin's h.
    CubicalH {
        #[command(flatten)]
        source: Source,
        /// Cubical parameter r.
        #[arg(long, default_value_t = 2)]
        r: u32,
        /// f-polynomial, ascending coefficients (instead of JSON input).
        #[arg(long, value_parser = input::parse_poly, requires = "rank")]
        f: Option<Polynomial>,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Check a facet order of an r-cubical complex.
    CubicalShelling {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
    },
    /// Check a facet order of a partition complex.
    PartitionShelling {
        #[command(flatten)]
        source: Source,
        /// Ground set size for the lex ideal (instead of JSON input).
        #[arg(long = "n", requires = "k")]
        n: Option<usize>,
        /// Block count for the lex ideal.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
    },
    /// Chromatic polynomial in a falling-factorial basis.
    ChromaticExpand {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Variant::K)]
        variant: Variant,
    },
    /// Interlacing certificates for every row of one or more matrices.
    Certify {
        #[command(flatten)]
        m: MatrixSource,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::TnCheck { .. } => "tn-check",
            Command::Resolve { .. } => "resolve",
            Command::Chain { .. } => "chain",
            Command::Subdivide { .. } => "subdivide",
            Command::Zeta { .. } => "zeta",
            Command::Mobius { .. } => "mobius",
            Command::FlagH { .. } => "flag-h",
            Command::Pf { .. } => "pf",
            Command::Pft { .. } => "pft",
            Command::ForgacsTran { .. } => "forgacs-tran",
            Command::Family { .. } => "family",
            Command::HVector { .. } => "h-vector",
            Command::Theta { .. } => "theta",
            Command::Critical { .. } => "critical",
            Command::QShelling { .. } => "q-shelling",
            Command::CubicalH { .. } => "cubical-h",
            Command::CubicalShelling { .. } => "cubical-shelling",
            Command::PartitionShelling { .. } => "partition-shelling",
            Command::ChromaticExpand { .. } => "chromatic-expand",
            Command::Certify { .. } => "certify",
        }
    }
}

/// Parses `argv`, runs the subcommand and renders the report.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome { code: 0, stdout: text, stderr: String::new() },
                _ => Outcome { code: 1, stdout: String::new(), stderr: text },
            };
        }
    };
    let name = cli.command.name();
    match commands::dispatch(&cli) {
        Ok(rep) => {
            let (code, status, stderr) = match &rep.failure {
                None => (0, "ok", String::new()),
                Some(msg) => (2, "failure", format!("{name}: {msg}\n")),
            };
            Outcome { code, stdout: render(&envelope(name, status, rep.result), cli.format), stderr }
        }
        Err(CliError::Math(msg)) => {
            let body = serde_json::json!({ "error": msg });
            Outcome {
                code: 2,
                stdout: render(&envelope(name, "failure", body), cli.format),
                stderr: format!("{name}: {msg}\n"),
            }
        }
        Err(CliError::Input(msg)) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {msg}\n") },
    }
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("CHAINPOLY_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // Only fails if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let out = run(std::env::args_os());
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code)
}
