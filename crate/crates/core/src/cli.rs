//! Command-line surface.
//!
//! Exit codes: 0 success, 1 parse or input error, 2 unsupported graph,
//! 3 certificate failure or counterexample, 4 certificate unavailable,
//! 5 render constraint.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::dyadic::Rectangle;
use crate::embedding::{
    bounded_check, build_abelian_embedding, build_embedding, lemma_h, verify_pingpong,
    CheckOptions, Construction, EmbeddingError, SliceSpec, DEFAULT_PIECE_CEILING,
};
use crate::io::{self, IoError};
use crate::nv::Element;
use crate::raag::Word;
use crate::svg;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_UNSUPPORTED_GRAPH: i32 = 2;
pub const EXIT_VERIFICATION_FAILED: i32 = 3;
pub const EXIT_CERTIFICATE_UNAVAILABLE: i32 = 4;
pub const EXIT_RENDER: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "nv-raag",
    version,
    about = "Right-angled Artin groups inside higher-dimensional Thompson groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the embedding of a graph's RAAG and write a manifest directory.
    Embed {
        /// Graph file (`v <name>` / `e <a> <b>` lines).
        graph: PathBuf,
        /// Output manifest directory.
        #[arg(long)]
        out: PathBuf,
        /// Accept complete graphs, embedding Z^m into 1V.
        #[arg(long)]
        abelian: bool,
    },
    /// Evaluate a word (`a b^-1 ...`) in the generators of a manifest.
    Eval {
        manifest: PathBuf,
        /// Letters of the word; none for the empty word.
        word: Vec<String>,
        /// Write the resulting element here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        limits: Limits,
    },
    /// Compare the embedding with the word-problem oracle on all short words.
    Check {
        manifest: PathBuf,
        /// Maximum word length.
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
        max_len: u32,
        /// Include words that are not freely reduced.
        #[arg(long)]
        all_words: bool,
        #[command(flatten)]
        limits: Limits,
    },
    /// Verify the ping-pong hypotheses exactly and print the certificate.
    VerifyPingpong { manifest: PathBuf },
    /// Draw a 2-dimensional element as SVG.
    Render {
        element: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the slice map of a single slice.
    SliceMap {
        /// Axes of the slice, 1-based and comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        axes: Vec<usize>,
        /// The slice, e.g. `[{0,1},{0,1}]`.
        #[arg(long)]
        slice: String,
        /// Lower part of the division (default: lower half on the first axis).
        #[arg(long, requires = "minus")]
        plus: Option<String>,
        /// Upper part of the division.
        #[arg(long, requires = "plus")]
        minus: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct Limits {
    /// Abort when an intermediate element exceeds this many pieces.
    #[arg(long, default_value_t = DEFAULT_PIECE_CEILING)]
    pub max_pieces: usize,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn parse(message: impl ToString) -> Self {
        CliError {
            code: EXIT_PARSE,
            message: message.to_string(),
        }
    }
}

impl From<EmbeddingError> for CliError {
    fn from(e: EmbeddingError) -> Self {
        let code = match e {
            EmbeddingError::NoComplementaryEdges | EmbeddingError::NotComplete => {
                EXIT_UNSUPPORTED_GRAPH
            }
            EmbeddingError::CertificateUnavailable => EXIT_CERTIFICATE_UNAVAILABLE,
            _ => EXIT_PARSE,
        };
        let message = match e {
            EmbeddingError::CertificateUnavailable => {
                "certificate unavailable for assembled embeddings; use `check` instead".to_string()
            }
            other => other.to_string(),
        };
        CliError { code, message }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Embedding(inner) => inner.into(),
            other => CliError::parse(other),
        }
    }
}

fn out_err(e: std::io::Error) -> CliError {
    CliError::parse(format!("writing output: {e}"))
}

/// Runs one command, writing its report to `out`. `Ok` carries the exit
/// code for outcomes that are not errors (a failed certificate, a found
/// counterexample).
pub fn run(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Embed {
            graph,
            out: dir,
            abelian,
        } => {
            let graph = io::read_graph(&graph)?;
            let map = if abelian && graph.complementary_edges().is_empty() {
                build_abelian_embedding(&graph)?
            } else {
                build_embedding(&graph)?
            };
            io::write_manifest(&map, &dir)?;
            let kind = match map.construction() {
                Construction::Slices { .. } => "slices",
                Construction::Assembled { .. } => "assembled",
                Construction::Abelian => "abelian",
            };
            writeln!(out, "dimension {}", map.dim()).map_err(out_err)?;
            writeln!(
                out,
                "complementary-edges {}",
                graph.complementary_edges().len()
            )
            .map_err(out_err)?;
            writeln!(out, "construction {kind}").map_err(out_err)?;
            writeln!(out, "generators {}", map.generators().len()).map_err(out_err)?;
            Ok(EXIT_OK)
        }
        Command::Eval {
            manifest,
            word,
            out: file,
            limits,
        } => {
            let map = io::read_manifest(&manifest)?;
            let word = Word::parse(&word.join(" "), map.graph()).map_err(CliError::parse)?;
            let value = map.evaluate_with_ceiling(&word, limits.max_pieces)?;
            let identity = value
                .equals(&Element::identity(map.dim()))
                .map_err(CliError::parse)?;
            writeln!(out, "pieces {}", value.len()).map_err(out_err)?;
            writeln!(out, "{}", if identity { "identity" } else { "nontrivial" })
                .map_err(out_err)?;
            if let Some(file) = file {
                io::write_file(&file, &value.to_string())?;
            }
            Ok(EXIT_OK)
        }
        Command::Check {
            manifest,
            max_len,
            all_words,
            limits,
        } => {
            let map = io::read_manifest(&manifest)?;
            let opts = CheckOptions {
                max_len: max_len as usize,
                freely_reduced: !all_words,
                piece_ceiling: limits.max_pieces,
            };
            let report = bounded_check(&map, &opts)?;
            writeln!(out, "max-length {max_len}").map_err(out_err)?;
            writeln!(out, "words {}", report.words).map_err(out_err)?;
            writeln!(out, "trivial {}", report.trivial).map_err(out_err)?;
            writeln!(out, "nontrivial {}", report.nontrivial).map_err(out_err)?;
            writeln!(out, "max-pieces {}", report.max_pieces).map_err(out_err)?;
            writeln!(out, "counterexamples {}", report.counterexamples.len()).map_err(out_err)?;
            for c in &report.counterexamples {
                let expected = if c.trivial_in_group {
                    "identity"
                } else {
                    "non-identity"
                };
                writeln!(
                    out,
                    "counterexample {} expected={expected}",
                    c.word.display(map.graph())
                )
                .map_err(out_err)?;
            }
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_VERIFICATION_FAILED
            })
        }
        Command::VerifyPingpong { manifest } => {
            let map = io::read_manifest(&manifest)?;
            let cert = verify_pingpong(&map)?;
            write!(out, "{}", io::certificate_report(&cert, map.graph())).map_err(out_err)?;
            Ok(if cert.is_valid() {
                EXIT_OK
            } else {
                EXIT_VERIFICATION_FAILED
            })
        }
        Command::Render { element, out: file } => {
            let e = io::read_element(&element)?;
            let doc = svg::render_element(&e).map_err(|err| CliError {
                code: EXIT_RENDER,
                message: err.to_string(),
            })?;
            io::write_file(&file, &doc)?;
            writeln!(out, "pieces {}", e.len()).map_err(out_err)?;
            Ok(EXIT_OK)
        }
        Command::SliceMap {
            axes,
            slice,
            plus,
            minus,
            out: file,
        } => {
            let rect = |s: &str| s.parse::<Rectangle>().map_err(CliError::parse);
            let slice = rect(&slice)?;
            if axes.contains(&0) {
                return Err(CliError::parse("axes are 1-based"));
            }
            let axes: BTreeSet<usize> = axes.into_iter().map(|a| a - 1).collect();
            let spec = match (plus, minus) {
                (Some(p), Some(m)) => SliceSpec::with_division(axes, slice, rect(&p)?, rect(&m)?)?,
                _ => SliceSpec::new(axes, slice)?,
            };
            let h = lemma_h(&spec)?;
            io::write_file(&file, &h.to_string())?;
            writeln!(out, "pieces {}", h.len()).map_err(out_err)?;
            writeln!(out, "plus {}", spec.plus).map_err(out_err)?;
            writeln!(out, "minus {}", spec.minus).map_err(out_err)?;
            Ok(EXIT_OK)
        }
    }
}
