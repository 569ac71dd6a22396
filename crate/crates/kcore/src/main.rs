use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use kcore::{
    build_core, export_dot, intersection_witness, kurosh_rank, load_group_file, monodromy,
    parse_generators, parse_word, separating_witness, verify_separation, CoreComplex, Error,
    SampleParams,
};

#[derive(Parser)]
#[command(
    name = "kcore",
    version,
    about = "Core complexes for subgroups of free products of finite groups",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fold generator words into a core complex and write it to a file.
    Build {
        /// JSON file with the two factor groups.
        #[arg(long)]
        groups: PathBuf,
        /// Generator words, separated by ';'.
        #[arg(long)]
        gens: String,
        /// Output path for the complex.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print vertex count, index and Kurosh rank data.
    Info { core: PathBuf },
    /// Print whether a word lies in the subgroup.
    Member { core: PathBuf, word: String },
    /// Print the monodromy rank of a word and its vertex pairs.
    Rank { core: PathBuf, word: String },
    /// Print a separating witness for an infinite-index subgroup.
    Witness { core: PathBuf },
    /// Print an intersection witness for a finite-index subgroup.
    Intersect { core: PathBuf, word: String },
    /// Sample the normal closure of the separating witness and report
    /// membership violations.
    Verify {
        core: PathBuf,
        /// Number of samples to draw.
        #[arg(long)]
        samples: u64,
        /// Largest number of conjugate factors per sample.
        #[arg(long = "max-conj")]
        max_conj: usize,
        /// Largest conjugator length per factor.
        #[arg(long = "max-len")]
        max_len: usize,
        /// RNG seed; identical seeds reproduce the report byte for byte.
        #[arg(long)]
        seed: u64,
        /// Also run the spelling diagnostic on every sample.
        #[arg(long)]
        spelling: bool,
    },
    /// Print the complex as a DOT digraph.
    Dot { core: PathBuf },
}

#[derive(Serialize)]
struct WitnessOut {
    g: String,
    exponent: u32,
    rebase_conjugator: String,
    trace: Vec<(String, usize)>,
}

#[derive(Serialize)]
struct IntersectOut {
    h: String,
    expression: Vec<(String, i8)>,
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::FiniteIndex | Error::InfiniteIndex => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(command: Command) -> kcore::Result<ExitCode> {
    match command {
        Command::Build { groups, gens, out } => {
            let pair = load_group_file(&groups)?;
            let words = parse_generators(&pair, &gens)?;
            let core = build_core(&pair, &words)?;
            core.save(&out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Info { core } => {
            let c = CoreComplex::load(&core)?;
            let data = kurosh_rank(&c);
            println!(
                "vertices={} index={} krank={}",
                c.vertex_count(),
                c.index(),
                data.krank
            );
            let vertex_groups: Vec<String> = data
                .nontrivial_vertex_groups
                .iter()
                .map(|(tag, sub)| format!("{tag}:order{}", sub.len()))
                .collect();
            println!(
                "krank={}; graph_rank={}; vertex_groups=[{}]",
                data.krank,
                data.graph_rank,
                vertex_groups.join(", ")
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Member { core, word } => {
            let c = CoreComplex::load(&core)?;
            let w = parse_word(c.groups(), &word)?;
            println!("{}", c.member(&w));
            Ok(ExitCode::SUCCESS)
        }
        Command::Rank { core, word } => {
            let c = CoreComplex::load(&core)?;
            let w = parse_word(c.groups(), &word)?;
            let p = monodromy(&c, &w);
            let pairs: Vec<String> = p
                .pairs()
                .iter()
                .map(|(v, image)| format!("({v},{image})"))
                .collect();
            println!("rank={} pairs=[{}]", p.rank(), pairs.join(","));
            Ok(ExitCode::SUCCESS)
        }
        Command::Witness { core } => {
            let c = CoreComplex::load(&core)?;
            let w = separating_witness(&c)?;
            let out = WitnessOut {
                g: w.g.to_string(),
                exponent: w.exponent,
                rebase_conjugator: w.rebase_conjugator.as_word().to_string(),
                trace: w
                    .descent_trace
                    .iter()
                    .map(|(word, rank)| (word.as_word().to_string(), *rank))
                    .collect(),
            };
            println!("{}", serde_json::to_string(&out)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Intersect { core, word } => {
            let c = CoreComplex::load(&core)?;
            let x = parse_word(c.groups(), &word)?;
            let iw = intersection_witness(&c, &x)?;
            let out = IntersectOut {
                h: iw.h.as_word().to_string(),
                expression: iw
                    .expression
                    .iter()
                    .map(|(t, e)| (t.as_word().to_string(), *e))
                    .collect(),
            };
            println!("{}", serde_json::to_string(&out)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            core,
            samples,
            max_conj,
            max_len,
            seed,
            spelling,
        } => {
            let c = CoreComplex::load(&core)?;
            let witness = separating_witness(&c)?;
            let params = SampleParams {
                samples,
                max_conjugates: max_conj,
                max_conjugator_len: max_len,
                seed,
            };
            let report = verify_separation(&c, &witness, &params, spelling);
            println!("{}", serde_json::to_string(&report)?);
            Ok(if report.violations == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Dot { core } => {
            let c = CoreComplex::load(&core)?;
            print!("{}", export_dot(&c));
            Ok(ExitCode::SUCCESS)
        }
    }
}
