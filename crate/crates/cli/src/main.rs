use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pebbledepth::complexity::{
    dk_fst, dk_fst_naive, dk_pb_upper, encode_fst, encode_pb, enumerate_fsts, enumerate_pbs, to_hex, PbPoolEntry,
};
use pebbledepth::constructions::{build_cprime, witness_pref, witness_remark1_prefix, witness_thm4_prefix};
use pebbledepth::fst::{il_check, il_decode, IlVerdict};
use pebbledepth::lz78::{lz78_decode, lz78_parse, parse_pairs, Coding};
use pebbledepth::pebble::pb_run;
use pebbledepth::profiles::{
    emit_csv, profile, remark1_pb_measure, sgl_experiment, thm4_pb_measure, MeasureConfig, PbMeasure,
};
use pebbledepth::pushdown::{pdc_il_check, pdc_il_decode, pdc_run, PdcIlVerdict};
use pebbledepth::sequences::{
    pref_sequence, Remark1Params, Remark1Sequence, Selector, Thm4Params, Thm4Sequence,
};
use pebbledepth::textfmt::{parse_machine, Machine};
use pebbledepth::words::{BitStreamSource, BitWord, Champernowne, Periodic};

#[derive(Parser)]
#[command(name = "pebbledepth", version, about = "Pebble transducers, finite-state depth and LZ78 experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a machine file on an input.
    Run {
        #[arg(long)]
        machine: PathBuf,
        #[command(flatten)]
        input: BitsArg,
    },
    /// Exhaustive information-lossless check.
    Ilcheck {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
    /// Recover the input from an output and end state.
    Decode {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        output: String,
        #[arg(long, default_value_t = 0)]
        end_state: usize,
        #[arg(long, default_value_t = 16)]
        max_len: usize,
    },
    /// LZ78 parse, encoded lengths, or decoding of a pair list.
    Lz78 {
        #[command(flatten)]
        input: OptBitsArg,
        #[arg(long, value_enum, default_value_t = Lz78Emit::Phrases)]
        emit: Lz78Emit,
        /// Comma-separated `pointer:bit` pairs to decode.
        #[arg(long, conflicts_with_all = ["input", "input_file"])]
        decode: Option<String>,
    },
    /// k-bounded complexity of a word, or the machine enumeration.
    Dk {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        input: OptBitsArg,
        /// Also run the brute-force reference and compare.
        #[arg(long)]
        oracle: bool,
        /// Print every enumerated machine encoding (hex), one per line.
        #[arg(long)]
        enumerate: bool,
        /// Input-length cap for the pebble search.
        #[arg(long, default_value_t = 12)]
        cap: usize,
    },
    /// Emit a prefix of a sequence.
    Gen {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, value_parser = parse_count)]
        n: usize,
        #[arg(long, value_enum, default_value_t = GenEmit::Bits)]
        emit: GenEmit,
    },
    /// Emit a construction's input and expected output as two lines.
    Witness {
        #[arg(long, value_enum)]
        construction: WitnessKind,
        /// Prefix length (thm4, remark1).
        #[arg(long, value_parser = parse_count)]
        n: Option<usize>,
        #[arg(long)]
        x: Option<String>,
        #[arg(long, default_value = "")]
        z: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        v: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Depth profile of a sequence as CSV.
    Profile {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, value_parser = parse_count_list)]
        n_list: CountList,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dk_k: Option<usize>,
        /// Add C' with parameters `m,k,v`.
        #[arg(long)]
        with_cprime: Option<String>,
    },
    /// Paired profiles of a sequence and its image under an FST.
    Sgl {
        #[command(flatten)]
        seq: SeqArgs,
        /// FST machine file; must be information lossless.
        #[arg(long)]
        transform: PathBuf,
        #[arg(long, value_parser = parse_count_list)]
        n_list: CountList,
        /// Writes `<prefix>.source.csv` and `<prefix>.image.csv`.
        #[arg(long)]
        out_prefix: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BitsArg {
    /// ASCII bits; whitespace is ignored.
    #[arg(long, required_unless_present = "input_file")]
    input: Option<String>,
    /// File of ASCII bits, `-` for stdin.
    #[arg(long, conflicts_with = "input")]
    input_file: Option<PathBuf>,
}

#[derive(Args)]
struct OptBitsArg {
    #[arg(long)]
    input: Option<String>,
    #[arg(long, conflicts_with = "input")]
    input_file: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SeqArgs {
    #[arg(long, value_enum)]
    seq: SeqKind,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    v: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of candidates drawn per remark1 block; 1 takes the first draw.
    #[arg(long, default_value_t = 64)]
    samples: usize,
    /// Repeated pattern for `periodic`, or the inner periodic pattern of `prefseq`.
    #[arg(long)]
    pattern: Option<String>,
    /// Source for `prefseq`.
    #[arg(long, value_enum, default_value_t = InnerKind::Champernowne)]
    inner: InnerKind,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeqKind {
    Thm4,
    Remark1,
    Prefseq,
    Champernowne,
    Periodic,
}

#[derive(Clone, Copy, ValueEnum)]
enum InnerKind {
    Champernowne,
    Periodic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Lz78Emit {
    Phrases,
    Plain,
    Gamma,
    Lengths,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Fst,
    Pb,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenEmit {
    Bits,
    Meta,
}

#[derive(Clone, Copy, ValueEnum)]
enum WitnessKind {
    Pref,
    Thm4,
    Remark1,
}

type CountList = Vec<usize>;

/// Accepts plain integers and `1e5` style powers.
fn parse_count(s: &str) -> Result<usize, String> {
    if let Ok(n) = s.parse::<usize>() {
        return Ok(n);
    }
    let f: f64 = s.parse().map_err(|_| format!("not a count: {s}"))?;
    if f < 0.0 || f.fract() != 0.0 || f > 1e15 {
        return Err(format!("not a count: {s}"));
    }
    Ok(f as usize)
}

fn parse_count_list(s: &str) -> Result<CountList, String> {
    s.split(',').map(|p| parse_count(p.trim())).collect()
}

enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    fn usage(e: impl ToString) -> Self {
        CliError::Usage(e.to_string())
    }

    fn domain(e: impl ToString) -> Self {
        CliError::Domain(e.to_string())
    }
}

type CliResult = Result<(), CliError>;

fn read_bits(input: &Option<String>, file: &Option<PathBuf>) -> Result<Option<BitWord>, CliError> {
    let text = match (input, file) {
        (Some(s), _) => s.clone(),
        (None, Some(p)) if p == Path::new("-") => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(CliError::usage)?;
            s
        }
        (None, Some(p)) => fs::read_to_string(p).map_err(|e| CliError::usage(format!("{}: {e}", p.display())))?,
        (None, None) => return Ok(None),
    };
    BitWord::parse_lenient(&text).map(Some).map_err(CliError::usage)
}

fn required_bits(input: &Option<String>, file: &Option<PathBuf>) -> Result<BitWord, CliError> {
    read_bits(input, file)?.ok_or_else(|| CliError::usage("--input or --input-file is required"))
}

fn load_machine(path: &Path) -> Result<Machine, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    parse_machine(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn parse_word(s: &str) -> Result<BitWord, CliError> {
    BitWord::parse_lenient(s).map_err(CliError::usage)
}

fn need(v: Option<usize>, flag: &str) -> Result<usize, CliError> {
    v.ok_or_else(|| CliError::usage(format!("--{flag} is required")))
}

enum Source {
    Thm4(Arc<Thm4Sequence>),
    Remark1(Arc<Remark1Sequence>),
    Other(Arc<dyn BitStreamSource>),
}

impl Source {
    fn stream(&self) -> Arc<dyn BitStreamSource> {
        match self {
            Source::Thm4(s) => s.clone(),
            Source::Remark1(s) => s.clone(),
            Source::Other(s) => s.clone(),
        }
    }

    fn pb_measure(&self) -> Result<PbMeasure, CliError> {
        Ok(match self {
            Source::Thm4(s) => {
                let p = s.params();
                thm4_pb_measure(p.k, p.v).map_err(CliError::usage)?
            }
            Source::Remark1(s) => remark1_pb_measure(s.clone()),
            Source::Other(_) => PbMeasure::Absent,
        })
    }
}

fn periodic(pattern: &Option<String>) -> Result<Periodic, CliError> {
    let p = parse_word(pattern.as_deref().ok_or_else(|| CliError::usage("--pattern is required"))?)?;
    if p.is_empty() {
        return Err(CliError::usage("--pattern must be nonempty"));
    }
    Ok(Periodic::new(p))
}

fn build_source(a: &SeqArgs) -> Result<Source, CliError> {
    Ok(match a.seq {
        SeqKind::Thm4 => {
            let p = Thm4Params::new(need(a.k, "k")?, need(a.v, "v")?).map_err(CliError::usage)?;
            Source::Thm4(Arc::new(Thm4Sequence::new(p)))
        }
        SeqKind::Remark1 => {
            let selector = if a.samples <= 1 { Selector::FixedSeedHash } else { Selector::SampleMaxLz(a.samples) };
            let p = Remark1Params::new(need(a.k, "k")?, need(a.v, "v")?, selector, a.seed).map_err(CliError::usage)?;
            Source::Remark1(Arc::new(Remark1Sequence::new(p)))
        }
        SeqKind::Prefseq => match a.inner {
            InnerKind::Champernowne => Source::Other(Arc::new(pref_sequence(Champernowne))),
            InnerKind::Periodic => Source::Other(Arc::new(pref_sequence(periodic(&a.pattern)?))),
        },
        SeqKind::Champernowne => Source::Other(Arc::new(Champernowne)),
        SeqKind::Periodic => Source::Other(Arc::new(periodic(&a.pattern)?)),
    })
}

fn write_out(out: &mut impl Write, text: &str) -> CliResult {
    out.write_all(text.as_bytes()).map_err(CliError::domain)
}

fn cmd_run(machine: &Path, input: &BitsArg, out: &mut impl Write) -> CliResult {
    let x = required_bits(&input.input, &input.input_file)?;
    let y = match load_machine(machine)? {
        Machine::Fst(t) => t.run(&x).0,
        Machine::Pb(m) => pb_run(&m, &x).map_err(CliError::domain)?,
        Machine::Pdc(m) => pdc_run(&m, &x).map_err(CliError::domain)?.output,
    };
    write_out(out, &format!("{y}\n"))
}

fn cmd_ilcheck(machine: &Path, max_len: usize, out: &mut impl Write) -> CliResult {
    let line = match load_machine(machine)? {
        Machine::Fst(t) => match il_check(&t, max_len).map_err(CliError::usage)? {
            IlVerdict::InjectiveUpTo(l) => format!("lossless up to {l}"),
            IlVerdict::Collision(a, b) => format!("collision {} {}", show(&a), show(&b)),
        },
        Machine::Pdc(m) => match pdc_il_check(&m, max_len).map_err(CliError::usage)? {
            PdcIlVerdict::Collision(a, b) => format!("collision {} {}", show(&a), show(&b)),
            PdcIlVerdict::InjectiveUpTo { max_len, skipped } => {
                format!("lossless up to {max_len} ({skipped} inputs without a complete run)")
            }
        },
        Machine::Pb(_) => return Err(CliError::usage("ilcheck needs an fst or pushdown machine")),
    };
    write_out(out, &format!("{line}\n"))
}

fn cmd_decode(machine: &Path, output: &str, end_state: usize, max_len: usize, out: &mut impl Write) -> CliResult {
    let y = parse_word(output)?;
    let x = match load_machine(machine)? {
        Machine::Fst(t) => il_decode(&t, &y, end_state, max_len).map_err(CliError::domain)?,
        Machine::Pdc(m) => pdc_il_decode(&m, &y, end_state, max_len).map_err(CliError::domain)?,
        Machine::Pb(_) => return Err(CliError::usage("decode needs an fst or pushdown machine")),
    };
    write_out(out, &format!("{x}\n"))
}

fn cmd_lz78(input: &OptBitsArg, emit: Lz78Emit, decode: &Option<String>, out: &mut impl Write) -> CliResult {
    if let Some(pairs) = decode {
        let pairs = parse_pairs(pairs).map_err(CliError::usage)?;
        let x = lz78_decode(&pairs).map_err(CliError::domain)?;
        return write_out(out, &format!("{x}\n"));
    }
    let x = required_bits(&input.input, &input.input_file)?;
    let p = lz78_parse(&x);
    let line = match emit {
        Lz78Emit::Phrases => p.to_string(),
        Lz78Emit::Plain => pebbledepth::lz78::lz78_encoded_len(&p, Coding::Plain).to_string(),
        Lz78Emit::Gamma => pebbledepth::lz78::lz78_encoded_len(&p, Coding::Gamma).to_string(),
        Lz78Emit::Lengths => format!("{} {}", p.encoded_len_plain, p.encoded_len_gamma),
    };
    write_out(out, &format!("{line}\n"))
}

/// Bits, with the empty word shown as `λ`.
fn show(w: &BitWord) -> String {
    if w.is_empty() {
        "λ".to_string()
    } else {
        w.to_string()
    }
}

fn fmt_value(v: Option<usize>) -> String {
    v.map_or("inf".to_string(), |v| v.to_string())
}

fn cmd_dk(
    family: FamilyArg,
    k: usize,
    input: &OptBitsArg,
    oracle: bool,
    enumerate: bool,
    cap: usize,
    out: &mut impl Write,
) -> CliResult {
    if enumerate {
        let mut text = String::new();
        match family {
            FamilyArg::Fst => {
                for t in enumerate_fsts(k).map_err(CliError::usage)? {
                    text.push_str(&to_hex(&encode_fst(&t)));
                    text.push('\n');
                }
            }
            FamilyArg::Pb => {
                for m in enumerate_pbs(k).map_err(CliError::usage)? {
                    text.push_str(&to_hex(&encode_pb(&m)));
                    text.push('\n');
                }
            }
        }
        return write_out(out, &text);
    }
    let x = required_bits(&input.input, &input.input_file)?;
    let r = match family {
        FamilyArg::Fst => dk_fst(&x, k).map_err(CliError::usage)?,
        FamilyArg::Pb => {
            let pool: Vec<PbPoolEntry> = enumerate_pbs(k)
                .map_err(CliError::usage)?
                .into_iter()
                .map(|m| PbPoolEntry::new(to_hex(&encode_pb(&m)), m))
                .collect();
            dk_pb_upper(&x, &pool, cap)
        }
    };
    let mut text = format!("{}\t{}\n", fmt_value(r.value), if r.exact { "exact" } else { "upper" });
    if let Some((machine, y)) = &r.witness {
        text.push_str(&format!("{machine}\t{}\n", show(y)));
    }
    if oracle {
        let FamilyArg::Fst = family else {
            return Err(CliError::usage("--oracle is only available for --family fst"));
        };
        let naive = dk_fst_naive(&x, k).map_err(CliError::usage)?;
        text.push_str(&format!("oracle\t{}\t{}\n", fmt_value(naive), if naive == r.value { "agree" } else { "DISAGREE" }));
        write_out(out, &text)?;
        if naive != r.value {
            return Err(CliError::domain("enumeration and brute force disagree"));
        }
        return Ok(());
    }
    write_out(out, &text)
}

fn cmd_gen(seq: &SeqArgs, n: usize, emit: GenEmit, out: &mut impl Write) -> CliResult {
    let src = build_source(seq)?;
    match emit {
        GenEmit::Bits => write_out(out, &format!("{}\n", src.stream().prefix(n))),
        GenEmit::Meta => {
            let mut w = csv::Writer::from_writer(Vec::new());
            match &src {
                Source::Thm4(s) => {
                    for seg in s.layout(n) {
                        w.serialize(seg).map_err(CliError::domain)?;
                    }
                }
                Source::Remark1(s) => {
                    w.write_record(["block", "end"]).map_err(CliError::domain)?;
                    for (j, b) in s.boundaries(n).into_iter().enumerate() {
                        w.write_record([(j + 1).to_string(), b.to_string()]).map_err(CliError::domain)?;
                    }
                }
                Source::Other(_) => return Err(CliError::usage("--emit meta is only available for thm4 and remark1")),
            }
            let bytes = w.into_inner().map_err(CliError::domain)?;
            out.write_all(&bytes).map_err(CliError::domain)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_witness(
    kind: WitnessKind,
    n: Option<usize>,
    x: &Option<String>,
    z: &str,
    k: Option<usize>,
    v: Option<usize>,
    seed: u64,
    out: &mut impl Write,
) -> CliResult {
    let w = match kind {
        WitnessKind::Pref => {
            let x = parse_word(x.as_deref().ok_or_else(|| CliError::usage("--x is required"))?)?;
            witness_pref(&x, &parse_word(z)?)
        }
        WitnessKind::Thm4 => witness_thm4_prefix(need(k, "k")?, need(v, "v")?, need(n, "n")?).map_err(CliError::usage)?,
        WitnessKind::Remark1 => {
            let p = Remark1Params::new(need(k, "k")?, need(v, "v")?, Selector::default(), seed).map_err(CliError::usage)?;
            witness_remark1_prefix(&Remark1Sequence::new(p), need(n, "n")?).map_err(CliError::domain)?
        }
    };
    write_out(out, &format!("{}\n{}\n", w.input, w.expected_output))
}

fn measure_config(src: &Source, dk_k: Option<usize>, with_cprime: &Option<String>) -> Result<MeasureConfig, CliError> {
    let mut cfg = MeasureConfig { dk_k, pb: src.pb_measure()?, ..Default::default() };
    if let Some(arg) = with_cprime {
        let parts: Vec<usize> = arg
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::usage("--with-cprime expects m,k,v"))?;
        let [m, k, v] = parts[..] else {
            return Err(CliError::usage("--with-cprime expects m,k,v"));
        };
        cfg.cprime = Some(Arc::new(build_cprime(m, k, v).map_err(CliError::usage)?));
    }
    Ok(cfg)
}

fn emit_to(path: &Option<PathBuf>, csv: &str, out: &mut impl Write) -> CliResult {
    match path {
        Some(p) => fs::write(p, csv).map_err(|e| CliError::domain(format!("{}: {e}", p.display()))),
        None => write_out(out, csv),
    }
}

fn cmd_profile(
    seq: &SeqArgs,
    n_list: &[usize],
    path: &Option<PathBuf>,
    dk_k: Option<usize>,
    with_cprime: &Option<String>,
    out: &mut impl Write,
) -> CliResult {
    let src = build_source(seq)?;
    let cfg = measure_config(&src, dk_k, with_cprime)?;
    let rows = profile(&src.stream(), n_list, &cfg).map_err(CliError::domain)?;
    emit_to(path, &emit_csv(&rows).map_err(CliError::domain)?, out)
}

fn cmd_sgl(
    seq: &SeqArgs,
    transform: &Path,
    n_list: &[usize],
    out_prefix: &Option<PathBuf>,
    out: &mut impl Write,
) -> CliResult {
    let Machine::Fst(m) = load_machine(transform)? else {
        return Err(CliError::usage("--transform must be an fst machine"));
    };
    let src = build_source(seq)?;
    let cfg = measure_config(&src, None, &None)?;
    let report = sgl_experiment(src.stream(), &m, n_list, &cfg).map_err(CliError::domain)?;
    if let Some(prefix) = out_prefix {
        let with = |suffix: &str| {
            let mut p = prefix.clone().into_os_string();
            p.push(suffix);
            Some(PathBuf::from(p))
        };
        emit_to(&with(".source.csv"), &emit_csv(&report.source).map_err(CliError::domain)?, out)?;
        emit_to(&with(".image.csv"), &emit_csv(&report.image).map_err(CliError::domain)?, out)?;
    }
    let gap = |g: Option<f64>| g.map_or("none".to_string(), |g| format!("{g:.6}"));
    write_out(
        out,
        &format!(
            "source_gap\t{}\nimage_gap\t{}\nbeta\t{}\nconsistent\t{}\n",
            gap(report.source_gap),
            gap(report.image_gap),
            report.beta,
            report.consistent()
        ),
    )
}

fn dispatch(cmd: Command, out: &mut impl Write) -> CliResult {
    match cmd {
        Command::Run { machine, input } => cmd_run(&machine, &input, out),
        Command::Ilcheck { machine, max_len } => cmd_ilcheck(&machine, max_len, out),
        Command::Decode { machine, output, end_state, max_len } => cmd_decode(&machine, &output, end_state, max_len, out),
        Command::Lz78 { input, emit, decode } => cmd_lz78(&input, emit, &decode, out),
        Command::Dk { family, k, input, oracle, enumerate, cap } => cmd_dk(family, k, &input, oracle, enumerate, cap, out),
        Command::Gen { seq, n, emit } => cmd_gen(&seq, n, emit, out),
        Command::Witness { construction, n, x, z, k, v, seed } => cmd_witness(construction, n, &x, &z, k, v, seed, out),
        Command::Profile { seq, n_list, out: path, dk_k, with_cprime } => {
            cmd_profile(&seq, &n_list, &path, dk_k, &with_cprime, out)
        }
        Command::Sgl { seq, transform, n_list, out_prefix } => cmd_sgl(&seq, &transform, &n_list, &out_prefix, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = dispatch(cli.command, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
