//! `segcode`: construct, exercise and verify segmented VT codes.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use segcode::ChannelKind;

#[derive(Parser, Debug)]
#[command(
    name = "segcode",
    version,
    about = "Zero-error codes for segmented edit channels"
)]
pub struct Cli {
    /// Seed for every random choice (sampled verification, random corruption).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for verification (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Maximum number of decodes for exhaustive verification.
    #[arg(long, global = true, default_value_t = segcode::verify::DEFAULT_BUDGET)]
    pub budget: u128,
    #[command(subcommand)]
    pub command: Command,
}

/// Where a code comes from: a codebook file or fresh construction.
#[derive(Args, Debug, Clone)]
pub struct CodeArgs {
    /// Codebook file in `segcode v1` format.
    #[arg(long, conflicts_with_all = ["kind", "q", "b"])]
    pub code: Option<PathBuf>,
    /// Channel: deletion, insertion or insdel.
    #[arg(long, required_unless_present = "code")]
    pub kind: Option<ChannelKind>,
    /// Alphabet size.
    #[arg(long, default_value_t = 2)]
    pub q: u16,
    /// Segment length.
    #[arg(long, required_unless_present = "code")]
    pub b: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a code and write its codebook.
    Construct {
        #[arg(long)]
        kind: ChannelKind,
        #[arg(long, default_value_t = 2)]
        q: u16,
        #[arg(long)]
        b: usize,
        /// Output file; the codebook goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Codewords per segment and rates over a range of segment lengths.
    Table {
        #[arg(long)]
        kind: ChannelKind,
        #[arg(long, default_value_t = 2)]
        q: u16,
        #[arg(long)]
        b_min: usize,
        #[arg(long)]
        b_max: usize,
        /// Number of segments used for the upper bound column.
        #[arg(long, default_value_t = 100)]
        k: usize,
        /// Tab-separated output.
        #[arg(long)]
        tsv: bool,
    },
    /// Encode messages read from stdin, one per line (comma or space separated indices).
    Encode {
        #[command(flatten)]
        code: CodeArgs,
    },
    /// Apply an edit pattern to words read from stdin.
    Corrupt {
        /// Channel for random patterns.
        #[arg(long, default_value = "insdel")]
        kind: ChannelKind,
        #[arg(long, default_value_t = 2)]
        q: u16,
        #[arg(long)]
        b: usize,
        /// Pattern text, e.g. `seg1:del@3;seg2:ins@0=1`.
        #[arg(long, conflicts_with_all = ["random", "p_edit"], required_unless_present = "random")]
        pattern: Option<String>,
        /// Draw a random pattern per input line.
        #[arg(long)]
        random: bool,
        /// Per-segment edit probability for random patterns.
        #[arg(long, default_value_t = segcode::verify::DEFAULT_P_EDIT, requires = "random")]
        p_edit: f64,
    },
    /// Decode received words read from stdin and print the trace.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        /// Number of segments.
        #[arg(long)]
        k: usize,
    },
    /// Check that every codeword survives every (or sampled) edit pattern.
    Verify {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        k: usize,
        /// Enumerate all messages and patterns.
        #[arg(long, conflicts_with = "sampled")]
        exhaustive: bool,
        /// Random messages and patterns.
        #[arg(long)]
        sampled: bool,
        /// Messages drawn in sampled mode.
        #[arg(long, default_value_t = 10_000)]
        messages: u64,
        /// Patterns per message in sampled mode.
        #[arg(long, default_value_t = 100)]
        patterns: u64,
        #[arg(long, default_value_t = segcode::verify::DEFAULT_P_EDIT)]
        p_edit: f64,
    },
    /// Check the three Liu-Mitzenmacher conditions on a binary codebook.
    LmCheck {
        #[command(flatten)]
        code: CodeArgs,
    },
    /// Evaluate the converse rate bound.
    Bounds {
        #[arg(long, default_value_t = 2)]
        q: u16,
        #[arg(long)]
        b: usize,
        #[arg(long, default_value_t = 100)]
        k: usize,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        kappa: Option<f64>,
        /// Also search a coarse grid of (alpha, kappa) with this many steps per axis.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Check the binomial tail inequality used by the converse.
    ChernoffCheck {
        #[arg(long, default_value_t = 2)]
        q: u16,
        #[arg(long)]
        b: usize,
        /// Defaults to the converse's default kappa.
        #[arg(long)]
        kappa: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    match commands::run(&cli, &mut stdin.lock(), &mut stdout.lock()) {
        Ok(code) => ExitCode::from(code),
        Err(e)
            if e.downcast_ref::<std::io::Error>()
                .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
