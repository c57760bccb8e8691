use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dnacodec::CoderKind;

mod commands;

#[derive(Parser)]
#[command(name = "dnacodec", version, about = "Store quantized latent tensors as constrained DNA oligo pools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
pub struct LayoutArgs {
    /// Oligo length in nucleotides (even).
    #[arg(long, default_value_t = 200)]
    pub oligo_length: usize,
    /// File barcode written into every oligo.
    #[arg(long, default_value_t = 0)]
    pub barcode: u64,
}

#[derive(Args, Clone, Copy)]
pub struct ConstraintArgs {
    #[arg(long, default_value_t = 3)]
    pub max_run: usize,
    #[arg(long, default_value_t = 0.4)]
    pub gc_min: f64,
    #[arg(long, default_value_t = 0.6)]
    pub gc_max: f64,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Distribution {
    Uniform,
    Geometric,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a QLT1 tensor into a FASTA oligo pool.
    Encode {
        input: PathBuf,
        #[arg(long, default_value = "sfc4", value_parser = parse_coder)]
        coder: CoderKind,
        #[command(flatten)]
        layout: LayoutArgs,
        #[command(flatten)]
        constraints: ConstraintArgs,
        /// Output FASTA (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode a FASTA oligo pool back into a QLT1 tensor.
    Decode {
        input: PathBuf,
        #[command(flatten)]
        layout: LayoutArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Symbol statistics and entropy of a QLT1 tensor.
    Stats { input: PathBuf },
    /// Check every oligo of a FASTA pool against biochemical constraints.
    Validate {
        input: PathBuf,
        #[command(flatten)]
        constraints: ConstraintArgs,
        /// List every violating oligo.
        #[arg(long)]
        verbose: bool,
    },
    /// Pass a FASTA pool through a substitution channel.
    Channel {
        input: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        sub_rate: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a rate-distortion point as a CSV line.
    Rate {
        input: PathBuf,
        #[arg(long, default_value = "sfc4", value_parser = parse_coder)]
        coder: CoderKind,
        #[command(flatten)]
        layout: LayoutArgs,
        #[arg(long)]
        image_height: u64,
        #[arg(long)]
        image_width: u64,
        /// Bits per pixel of the source image (all channels).
        #[arg(long, default_value_t = 24)]
        depth: u64,
        /// Raw 8-bit samples of the original image.
        #[arg(long, requires = "reconstruction")]
        reference: Option<PathBuf>,
        /// Raw 8-bit samples of the decoded image.
        #[arg(long, requires = "reference")]
        reconstruction: Option<PathBuf>,
        /// Emit the CSV header line first.
        #[arg(long)]
        header: bool,
    },
    /// Write a seeded synthetic QLT1 tensor.
    Synth {
        /// Tensor dimensions as C,H,W.
        #[arg(long, value_parser = parse_dims, default_value = "8,16,16")]
        dims: (u32, u32, u32),
        #[arg(long, default_value_t = 17)]
        levels: usize,
        #[arg(long, value_enum, default_value = "geometric")]
        dist: Distribution,
        #[arg(long, default_value_t = 0.7)]
        ratio: f64,
        #[arg(long, default_value_t = 0.125)]
        step: f32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_coder(s: &str) -> Result<CoderKind, String> {
    s.parse().map_err(|e: dnacodec::coders::CoderError| e.to_string())
}

fn parse_dims(s: &str) -> Result<(u32, u32, u32), String> {
    let parts: Vec<u32> = s
        .split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [c, h, w] if c > 0 && h > 0 && w > 0 => Ok((c, h, w)),
        _ => Err("expected three positive integers C,H,W".into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Encode { input, coder, layout, constraints, out } => {
            commands::encode(&input, coder, layout, constraints, out.as_deref())
        }
        Command::Decode { input, layout, out } => commands::decode(&input, layout, out.as_deref()),
        Command::Stats { input } => commands::stats(&input),
        Command::Validate { input, constraints, verbose } => commands::validate(&input, constraints, verbose),
        Command::Channel { input, sub_rate, seed, out } => commands::channel(&input, sub_rate, seed, out.as_deref()),
        Command::Rate { input, coder, layout, image_height, image_width, depth, reference, reconstruction, header } => {
            let samples = reference.zip(reconstruction);
            commands::rate(&input, coder, layout, (image_height, image_width, depth), samples, header)
        }
        Command::Synth { dims, levels, dist, ratio, step, seed, out } => {
            commands::synth(dims, levels, dist, ratio, step, seed, out.as_deref())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
