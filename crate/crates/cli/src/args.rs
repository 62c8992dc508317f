use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use sdw_core::Caps;

#[derive(Parser, Debug)]
#[command(name = "sdw", version, about = "Finite algebras, subdirect products, commutators and free structures")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Add wall-clock timing to the report.
    #[arg(long, global = true)]
    pub timing: bool,
    /// Largest carrier that may be materialized [default: 10000000, or $SDW_MAX_CARRIER].
    #[arg(long, global = true)]
    pub max_carrier: Option<u64>,
    /// Largest congruence lattice to enumerate [default: 100000].
    #[arg(long, global = true)]
    pub max_congruences: Option<usize>,
    /// Largest cube-function algebra M to generate [default: 1000000].
    #[arg(long, global = true)]
    pub max_cube_functions: Option<usize>,
    /// Largest commutator arity [default: 3].
    #[arg(long, global = true)]
    pub max_arity: Option<usize>,
}

impl Global {
    pub fn caps(&self) -> Caps {
        let mut caps = Caps::from_env();
        if let Some(v) = self.max_carrier {
            caps.max_carrier = v;
        }
        if let Some(v) = self.max_congruences {
            caps.max_congruences = v;
        }
        if let Some(v) = self.max_cube_functions {
            caps.max_cube_functions = v;
        }
        if let Some(v) = self.max_arity {
            caps.max_commutator_arity = v;
        }
        caps
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Inspect algebras.
    #[command(subcommand)]
    Alg(AlgCmd),
    /// Congruence lattices and principal congruences.
    #[command(subcommand)]
    Con(ConCmd),
    /// Subdirect and fiber products.
    #[command(subcommand)]
    Sdp(SdpCmd),
    /// Term-condition commutators.
    #[command(subcommand)]
    Comm(CommCmd),
    /// Search for a Mal'cev term.
    Malcev(MalcevArgs),
    /// Free lattices, monoid presentations, monomial ideals, vector monoids.
    #[command(subcommand)]
    Free(FreeCmd),
    /// Run a directory of experiment specifications.
    Corpus(CorpusArgs),
}

/// An algebra file, or a built-in name such as `s3`, `d4`, `zring8`.
pub type AlgebraArg = String;

#[derive(Subcommand, Debug)]
pub enum AlgCmd {
    /// Size, signature and fingerprint.
    Show { algebra: AlgebraArg },
    /// The algebra in the JSON file format.
    Export { algebra: AlgebraArg },
    /// Names of the built-in algebras.
    List,
}

#[derive(Subcommand, Debug)]
pub enum ConCmd {
    /// All congruences with covers, modularity and distributivity.
    Lattice { algebra: AlgebraArg },
    /// The congruence generated by pairs such as `0,2;1,3`.
    Cg {
        algebra: AlgebraArg,
        #[arg(long)]
        pairs: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum SdpCmd {
    /// Whether the subproduct is subdirect.
    Check { subproduct: PathBuf },
    /// Builds `{(a,b) : g(a) = h(b)}`.
    Fiber {
        #[arg(long)]
        left: AlgebraArg,
        #[arg(long)]
        right: AlgebraArg,
        #[arg(long)]
        onto: AlgebraArg,
        /// Map file or inline JSON array for `g: left → onto`.
        #[arg(long)]
        g: String,
        /// Map file or inline JSON array for `h: right → onto`.
        #[arg(long)]
        h: String,
    },
    /// Pairwise projections and the kernels `λ_ij`.
    Pairs { subproduct: PathBuf },
    /// Whether a two-factor subdirect product is a fiber product.
    Fleischer { subproduct: PathBuf },
    /// Lifts generators of the factors and of `λ_B` to generators of C.
    Lift {
        subproduct: PathBuf,
        /// Generators of the first factor, e.g. `1` or `1,2`.
        #[arg(long)]
        gens_a: String,
        #[arg(long)]
        gens_b: String,
        /// Pairs of the second factor generating `λ_B`, e.g. `0,2;1,3`.
        #[arg(long, default_value = "")]
        lambda_pairs: String,
        /// Mal'cev term in prefix syntax; found automatically when omitted.
        #[arg(long)]
        term: Option<String>,
    },
    /// Checks that C is a union of `γ_1 × ⋯ × γ_n` classes.
    Thm41 { subproduct: PathBuf },
    /// Checks the finite-generation clauses for a candidate set.
    Certify {
        subproduct: PathBuf,
        /// Tuples such as `0,1,1;2,0,1`.
        #[arg(long)]
        gens: String,
    },
    /// A greedy generating set.
    Gens { subproduct: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum CommCmd {
    /// `[α₁,…,α_k]` for congruence files, inline block lists, `0` or `1`.
    Compute {
        algebra: AlgebraArg,
        #[arg(long, num_args = 1.., required = true)]
        congs: Vec<String>,
    },
    /// Least k with the (k+1)-ary commutator of the congruence vanishing.
    Class {
        algebra: AlgebraArg,
        #[arg(long, default_value_t = 2)]
        max_k: usize,
        /// Congruence to measure [default: the total congruence].
        #[arg(long)]
        relative: Option<String>,
    },
    /// Checks the commutator properties on every congruence tuple.
    Properties {
        algebra: AlgebraArg,
        #[arg(long, default_value_t = 2)]
        max_k: usize,
    },
}

#[derive(Args, Debug)]
pub struct MalcevArgs {
    pub algebra: AlgebraArg,
    /// Largest number of ternary term operations to generate.
    #[arg(long, default_value_t = sdw_core::synthesis::DEFAULT_MALCEV_BUDGET)]
    pub budget: u64,
}

#[derive(Subcommand, Debug)]
pub enum FreeCmd {
    /// Decides `p ≤ q` in the free lattice.
    LatticeLeq { p: String, q: String },
    /// Checks the claims about `x_n, y_n, z_n` up to `max_n`.
    XyzClaims {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
    /// Bounded search for a derivation `u ~ v` (file or inline presentation).
    MonoidRelate {
        presentation: String,
        u: String,
        v: String,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_states: usize,
    },
    /// Whether `m` lies in a monomial ideal (file or inline generators).
    IdealMember {
        generators: String,
        monomial: String,
        #[arg(long, default_value = "two")]
        sided: String,
    },
    /// Compares `I ∩ J` with the ideal generated by candidates up to a degree.
    IntersectCheck {
        #[arg(long)]
        i_gens: String,
        #[arg(long)]
        j_gens: String,
        #[arg(long)]
        candidates: String,
        #[arg(long, default_value_t = 8)]
        max_degree: usize,
        #[arg(long, default_value = "xy")]
        alphabet: String,
    },
    /// Checks that σ and τ lie in ρ and that σ ∩ τ is trivial, within bounds.
    JoinCheck {
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        tau: String,
        #[arg(long)]
        rho: String,
        #[arg(long, default_value_t = 6)]
        max_index: usize,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_states: usize,
        #[arg(long, default_value_t = 8)]
        intersection_len: usize,
    },
    /// Bounded evidence that a pumped family needs all of its instances.
    PumpCheck {
        presentation: String,
        #[arg(long, default_value_t = 0)]
        family: usize,
        #[arg(long, default_value_t = 5)]
        max_index: usize,
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        #[arg(long, default_value_t = 100_000)]
        max_states: usize,
    },
    /// Pair surjectivity and indecomposability in a submonoid of `N₀^k`.
    Vector {
        /// Generators such as `perms(1,0,3); 0,2,n : n>=7`.
        generators: String,
        /// Elements to test, e.g. `0,2,7`.
        #[arg(long)]
        query: Vec<String>,
        #[arg(long, default_value_t = 40)]
        bound: usize,
    },
}

#[derive(Args, Debug)]
pub struct CorpusArgs {
    pub directory: PathBuf,
    /// Entries run concurrently.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}
