use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Polynomials are given as JSON (`{"ring": ..., "coeffs": [...]}` or a bare
/// coefficient list), as a path to such a file, or as an expression in `T`
/// such as `1 + T + q*T^2`.
#[derive(Debug, Parser)]
#[command(name = "affaut", version, about = "Automorphisms of the affine line over non-reduced rings")]
pub struct Cli {
    /// Coefficient ring: zmod:<m>[:q=<p>] | tq:<p|Q>:<e> | sym[:<n>] | int[:q=<p>]
    #[arg(long, global = true)]
    pub ring: Option<String>,
    /// Seed for randomized verbs
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// f∘g
    Compose {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Compositional inverse
    Invert {
        #[arg(long)]
        f: String,
        /// Compare with the brute-force inverse and report the recursion depth
        #[arg(long)]
        check: bool,
    },
    /// Order under composition
    Order {
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
    },
    /// Membership in full | A:<d> | Atilde:<d> | N:<n>:<r> | K:<n>:<r>
    Member {
        #[arg(long)]
        f: String,
        #[arg(long)]
        spec: String,
    },
    /// k-fold composite f∘...∘f
    Iterate {
        #[arg(long)]
        f: String,
        #[arg(long)]
        k: u64,
    },
    /// Composition series of the ring with a commutativity check per kernel
    Series(SeriesArgs),
    /// Universal Witt addition and multiplication polynomials
    WittDerive {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
    },
    /// Witt vector sum (base ring from --ring, default Z)
    WittAdd(WittPair),
    /// Witt vector product (base ring from --ring, default Z)
    WittMul(WittPair),
    /// Ghost components (base ring from --ring, default Z)
    Ghost {
        #[arg(long)]
        p: u64,
        /// Components as JSON, a file, or a comma-separated list
        #[arg(long)]
        u: String,
    },
    /// W_n(F_p) <-> Z/p^(n+1): give --u to map a vector, or --x and --n
    WittIso {
        #[arg(long)]
        p: u64,
        #[arg(long, conflicts_with_all = ["x", "n"])]
        u: Option<String>,
        #[arg(long, requires = "n")]
        x: Option<String>,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Greenberg transform of an integer polynomial
    Greenberg {
        #[arg(long)]
        p: u64,
        /// Witt level (n + 1 components)
        #[arg(long)]
        n: u32,
        /// Polynomial expression over Z
        #[arg(long)]
        f: String,
        /// Comma-separated variable order (default: sorted names)
        #[arg(long)]
        vars: Option<String>,
    },
    /// Group law over F_p for A_d or for degree-capped automorphisms
    GreenbergLaw(LawArgs),
    /// Group-axiom check of a stored law
    VerifyLaw {
        #[arg(long)]
        law: String,
        #[arg(long, value_enum, default_value_t = VerifyChoice::Exhaustive)]
        mode: VerifyChoice,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
    /// f∘g∘f^(-1) for g = T + q^r h(T)
    Ad {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        r: u32,
    },
    /// Matrix of the adjoint action on N(n, r)
    AdMatrix(AdMatrixArgs),
    /// Annihilator orders of the basis of N(n, r), compared with (R/q^m)^(m+1) + R/q^m + ... + R/q
    ModuleDecomp {
        /// Half-precision m: works over Z/p^(2m) with r = m
        #[arg(long, conflicts_with = "r")]
        m: Option<u32>,
        #[arg(long, requires = "m", default_value_t = 2)]
        p: u64,
        /// Kernel level over the ring given by --ring
        #[arg(long)]
        r: Option<u32>,
    },
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long, default_value_t = 4)]
    pub degree_cap: usize,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 1024)]
    pub exhaustive_limit: u64,
}

#[derive(Debug, Args)]
pub struct WittPair {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub u: String,
    #[arg(long)]
    pub v: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SimplifyChoice {
    Integral,
    ModP,
    Fermat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CapChoice {
    Graded,
    Uniform,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyChoice {
    None,
    Exhaustive,
    Sampled,
}

#[derive(Debug, Args)]
pub struct LawArgs {
    #[arg(long)]
    pub p: u64,
    /// A_d law
    #[arg(long, conflicts_with_all = ["precision", "cap"])]
    pub d: Option<u32>,
    /// Full group mod p^precision
    #[arg(long, requires = "cap")]
    pub precision: Option<u32>,
    /// Degree cap of the full group
    #[arg(long, requires = "precision")]
    pub cap: Option<u32>,
    #[arg(long, value_enum, default_value_t = CapChoice::Graded)]
    pub cap_mode: CapChoice,
    #[arg(long, value_enum, default_value_t = SimplifyChoice::Fermat)]
    pub simplify: SimplifyChoice,
    #[arg(long, value_enum, default_value_t = VerifyChoice::None)]
    pub verify: VerifyChoice,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
}

#[derive(Debug, Args)]
pub struct AdMatrixArgs {
    /// Acting element (numeric mode)
    #[arg(long, required_unless_present = "symbolic")]
    pub f: Option<String>,
    /// Use a + bT + qcT^2 + q^2dT^3 + q^3eT^4 over Z[a,b,c,d,e,1/b][q]
    #[arg(long, conflicts_with = "f")]
    pub symbolic: bool,
    /// Precision of the symbolic ring
    #[arg(long, requires = "symbolic")]
    pub n: Option<u32>,
    #[arg(long)]
    pub r: u32,
    /// Degree of the symbolic element (default n)
    #[arg(long, requires = "symbolic")]
    pub degree: Option<usize>,
}
