use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Svg,
    Tikz,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "grasscat", version, about = "Cohen-Macaulay modules over B_{k,n}: Hom, Ext, syzygies, tubes and rigid-module censuses")]
pub struct Cli {
    /// Emit JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Working t-adic precision (default 2n).
    #[arg(long, global = true, env = "GRASSCAT_TRUNCATION")]
    pub trunc: Option<u32>,
    /// Largest precision tried when a result does not stabilize (default 8n).
    #[arg(long, global = true)]
    pub cap: Option<u32>,
    /// Directory for written reports.
    #[arg(long, global = true, env = "GRASSCAT_OUT", default_value = "out")]
    pub out: PathBuf,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for parallel commands.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Combinatorial data of a rim, e.g. `145@(3,8)`.
    Rim { rim: String },
    /// Build a module from a profile such as `135|246@(3,6)` and show its maps.
    Module { profile: String },
    /// Rank of Hom(M, N) over the center.
    Hom { m: String, n: String },
    /// Cyclic decomposition of Ext^1(M, N).
    Ext { m: String, n: String },
    /// Syzygy of a module.
    Syzygy { profile: String },
    /// Rigidity and indecomposability of a module.
    Rigid { profile: String },
    /// Almost split sequence ending in the syzygy of an almost consecutive rim.
    ArSeq { rim: String },
    /// Syzygy orbit of a rank one or rank two module.
    Orbit { profile: String },
    /// Orbits of all rank one and rigid rank two modules, checked against stored tube fixtures.
    Tubes { k: u32, n: u32 },
    /// Real roots of a given degree.
    Roots {
        k: u32,
        n: u32,
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
    /// Census of rigid indecomposable rank two modules.
    Census {
        k: u32,
        n: u32,
        /// Test every candidate (the default).
        #[arg(long, conflicts_with = "sample")]
        full: bool,
        /// Test each candidate with probability p.
        #[arg(long)]
        sample: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest n accepted.
        #[arg(long, default_value_t = 9)]
        max_n: u32,
        /// Return a cached report without recomputing, if one exists.
        #[arg(long)]
        use_cache: bool,
    },
    /// Lattice diagram of a profile (SVG or TikZ).
    Diagram { profile: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = commands::exit_code(&e);
            if let Some(out) = e.downcast_ref::<commands::FixtureMismatch>() {
                print!("{}", out.output);
            }
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
