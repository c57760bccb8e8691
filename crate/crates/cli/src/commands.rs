use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use dnacodec::coders::{expected_length, CodeBook};
use dnacodec::metrics::{compression_rate, entropy_base4, peak_for_depth, psnr, RatePoint};
use dnacodec::quaternary::validate_sequence;
use dnacodec::synthetic::{random_tensor, LevelDistribution};
use dnacodec::{
    decode_pool, encode_tensor, read_pool, transmit, write_pool, ChannelSpec, CodecConfig, CoderKind,
    ConstraintSpec, FrequencyTable, LatentTensor, OligoLayout, OligoPool,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{ConstraintArgs, Distribution, LayoutArgs};

fn read_tensor(path: &Path) -> Result<LatentTensor> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    LatentTensor::read_qlt(BufReader::new(file)).with_context(|| format!("reading QLT1 tensor {}", path.display()))
}

fn read_fasta(path: &Path) -> Result<OligoPool> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_pool(BufReader::new(file)).with_context(|| format!("reading FASTA pool {}", path.display()))
}

fn output(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_fasta(pool: &OligoPool, out: Option<&Path>) -> Result<()> {
    write_pool(pool, output(out)?).context("writing FASTA pool")
}

fn layout(args: LayoutArgs) -> Result<OligoLayout> {
    let layout = OligoLayout::with_length(args.oligo_length)?;
    if args.barcode > layout.max_barcode() {
        bail!("barcode {} exceeds the {}-pair barcode field", args.barcode, layout.barcode_pairs);
    }
    Ok(layout)
}

fn constraint_spec(args: ConstraintArgs) -> Result<ConstraintSpec> {
    Ok(ConstraintSpec::new(args.max_run, args.gc_min, args.gc_max)?)
}

pub fn encode(
    input: &Path,
    coder: CoderKind,
    layout_args: LayoutArgs,
    constraints: ConstraintArgs,
    out: Option<&Path>,
) -> Result<()> {
    let tensor = read_tensor(input)?;
    let spec = constraint_spec(constraints)?;
    let config = CodecConfig { coder, layout: layout(layout_args)?, barcode: layout_args.barcode };
    let encoded = encode_tensor(&tensor, &config).with_context(|| format!("encoding {}", input.display()))?;
    write_fasta(&encoded.pool, out)?;

    let s = &encoded.summary;
    let over_run = encoded
        .pool
        .oligos()
        .iter()
        .filter(|o| validate_sequence(o.as_str(), &spec).map(|r| !r.runs.is_empty()).unwrap_or(true))
        .count();
    eprintln!("coder: {}", s.coder);
    eprintln!("symbols: {} ({} distinct)", s.symbols, s.distinct_symbols);
    eprintln!("oligos: {} GIO, {} FIO, {} DO", s.gio_oligos, s.fio_oligos, s.do_oligos);
    eprintln!("n_nuc: {}", s.n_nuc);
    eprintln!("entropy: {:.6} nt/component", s.entropy);
    eprintln!("nt_per_symbol: {:.6}", s.nt_per_symbol);
    if over_run > 0 {
        eprintln!("warning: {over_run} oligos exceed max homopolymer run {}", spec.max_homopolymer_run);
    }
    Ok(())
}

pub fn decode(input: &Path, layout_args: LayoutArgs, out: Option<&Path>) -> Result<()> {
    let pool = read_fasta(input)?;
    let layout = layout(layout_args)?;
    let decoded = decode_pool(&pool, layout_args.barcode, &layout)
        .with_context(|| format!("decoding barcode {} from {}", layout_args.barcode, input.display()))?;
    for w in &decoded.warnings {
        eprintln!("warning: {w}");
    }
    let mut sink = output(out)?;
    decoded.tensor.write_qlt(&mut sink).context("writing QLT1 tensor")?;
    sink.flush()?;
    let (c, h, w) = decoded.tensor.dims();
    eprintln!("decoded {c}x{h}x{w} tensor, step {}, coder {}", decoded.tensor.step(), decoded.info.coder);
    Ok(())
}

pub fn stats(input: &Path) -> Result<()> {
    let tensor = read_tensor(input)?;
    let table = FrequencyTable::from_symbols(tensor.indices());
    let (c, h, w) = tensor.dims();
    let mut out = io::stdout().lock();
    writeln!(out, "dims: {c}x{h}x{w}")?;
    writeln!(out, "step: {}", tensor.step())?;
    writeln!(out, "symbols: {}", table.total())?;
    writeln!(out, "distinct: {}", table.len())?;
    writeln!(out, "entropy: {} nt/component", entropy_base4(&table)?)?;
    for coder in CoderKind::ALL {
        let book = CodeBook::build(coder, &table)?;
        writeln!(out, "expected_length[{coder}]: {:.6} nt/symbol", expected_length(&book, &table)?)?;
    }
    writeln!(out, "level,count")?;
    for &(k, n) in table.entries() {
        writeln!(out, "{k},{n}")?;
    }
    Ok(())
}

pub fn validate(input: &Path, constraints: ConstraintArgs, verbose: bool) -> Result<()> {
    let pool = read_fasta(input)?;
    let spec = constraint_spec(constraints)?;
    let mut run_violations = 0usize;
    let mut gc_violations = 0usize;
    let mut longest = 0usize;
    let mut out = io::stdout().lock();
    for (i, oligo) in pool.oligos().iter().enumerate() {
        let report = validate_sequence(oligo.as_str(), &spec).with_context(|| format!("oligo {i}"))?;
        longest = longest.max(report.longest_run);
        if !report.runs.is_empty() {
            run_violations += 1;
            if verbose {
                for r in &report.runs {
                    writeln!(out, "oligo {i}: run of {} x{} at {}", r.nucleotide, r.length, r.position)?;
                }
            }
        }
        if report.gc_out_of_range {
            gc_violations += 1;
            if verbose {
                writeln!(out, "oligo {i}: gc {:.3} outside [{}, {}]", report.gc_fraction, spec.gc_min, spec.gc_max)?;
            }
        }
    }
    writeln!(out, "oligos: {}", pool.len())?;
    writeln!(out, "longest_run: {longest}")?;
    writeln!(out, "homopolymer_violations: {run_violations}")?;
    writeln!(out, "gc_violations: {gc_violations}")?;
    out.flush()?;
    if run_violations > 0 {
        bail!("{run_violations} oligos exceed max homopolymer run {}", spec.max_homopolymer_run);
    }
    Ok(())
}

pub fn channel(input: &Path, sub_rate: f64, seed: u64, out: Option<&Path>) -> Result<()> {
    let pool = read_fasta(input)?;
    let spec = ChannelSpec::new(sub_rate, seed)?;
    write_fasta(&transmit(&pool, &spec), out)
}

fn read_samples(path: &Path) -> Result<Vec<f64>> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(bytes.into_iter().map(f64::from).collect())
}

pub fn rate(
    input: &Path,
    coder: CoderKind,
    layout_args: LayoutArgs,
    image: (u64, u64, u64),
    samples: Option<(std::path::PathBuf, std::path::PathBuf)>,
    header: bool,
) -> Result<()> {
    let tensor = read_tensor(input)?;
    let config = CodecConfig { coder, layout: layout(layout_args)?, barcode: layout_args.barcode };
    let encoded = encode_tensor(&tensor, &config)?;
    let (h, w, d) = image;
    let psnr = match samples {
        Some((reference, reconstruction)) => {
            psnr(&read_samples(&reference)?, &read_samples(&reconstruction)?, peak_for_depth(8))?
        }
        None => f64::NAN,
    };
    let point = RatePoint {
        compression_rate: compression_rate(h, w, d, encoded.summary.n_nuc as u64)?,
        psnr,
        entropy: encoded.summary.entropy,
        n_nuc: encoded.summary.n_nuc as u64,
    };
    let mut out = io::stdout().lock();
    if header {
        writeln!(out, "{}", RatePoint::CSV_HEADER)?;
    }
    writeln!(out, "{}", point.csv_line())?;
    Ok(())
}

pub fn synth(
    dims: (u32, u32, u32),
    levels: usize,
    dist: Distribution,
    ratio: f64,
    step: f32,
    seed: u64,
    out: Option<&Path>,
) -> Result<()> {
    if levels == 0 || levels > 65535 {
        bail!("levels must be in 1..=65535");
    }
    let dist = match dist {
        Distribution::Uniform => LevelDistribution::Uniform,
        Distribution::Geometric => LevelDistribution::Geometric { ratio },
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tensor = random_tensor(&mut rng, dims, levels, dist, step)?;
    let mut sink = output(out)?;
    tensor.write_qlt(&mut sink)?;
    sink.flush()?;
    Ok(())
}
