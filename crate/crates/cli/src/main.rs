use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use matwaring::nt::is_prime;
use matwaring::oracle::{self, census, render_csv, weil_check, CensusSpec};
use matwaring::text::{self, parse_fel, parse_poly, render_decomposition, render_fel};
use matwaring::{minus_one_is_kth_power, waring_constant, Engine, Error, Execution, FieldCtx, KthPowers, Mat};

const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser)]
#[command(name = "matwaring", version, about = "Sums of k-th powers of matrices over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Characteristic
    #[arg(long)]
    p: Option<u64>,
    /// Extension degree
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Monic defining polynomial over F_p, coefficients lowest first, e.g. 1,0,1
    #[arg(long)]
    modulus: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the field order, modulus, generator and k-th power data
    FieldInfo {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(short, long)]
        k: Option<u64>,
    },
    /// Solve x^k + y^k = c in F_q
    SolveScalar {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(short, long)]
        k: u64,
        #[arg(long)]
        c: String,
    },
    /// Solve x^k + y^k = c with x^k != y^k and x^k y^k != lambda
    SolvePair {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(short, long)]
        k: u64,
        #[arg(long)]
        c: String,
        #[arg(long)]
        lambda: String,
    },
    /// Decompose a matrix (from --input, or random of size --n) into k-th powers
    Decompose {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(short, long)]
        k: u64,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Size of the random matrix generated when no input is given
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Treat decompositions with more terms as failures
        #[arg(long)]
        max_terms: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that the witnesses' k-th powers sum to the matrix
    Verify {
        /// A matrix block, optionally followed by a decomposition block
        #[arg(long)]
        input: PathBuf,
        /// Decomposition output, if not appended to the input
        #[arg(long)]
        witnesses: Option<PathBuf>,
    },
    /// Largest Waring number over the similarity classes of each cell
    Census {
        #[arg(long)]
        p_range: Span,
        #[arg(long, default_value = "2:2")]
        k_range: Span,
        /// Matrix size, or a range A:B
        #[arg(long, default_value = "2")]
        n: Span,
        /// Extension degree, or a range A:B
        #[arg(long, default_value = "1")]
        m: Span,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        sequential: bool,
    },
    /// Count points of y^d = f(x) and test the Weil bound
    WeilCheck {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: u64,
        /// Coefficients of f, lowest first
        #[arg(long)]
        f: String,
    },
    /// Print the field-size threshold (k + 2k^2)^2
    Constant {
        #[arg(short, long)]
        k: u64,
    },
}

/// `A:B` or a single value.
#[derive(Clone, Copy, Debug)]
struct Span {
    lo: u64,
    hi: u64,
}

impl Span {
    fn values(self) -> impl Iterator<Item = u64> {
        self.lo..=self.hi
    }
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Span, String> {
        let parse = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("bad range `{s}`"));
        let (lo, hi) = match s.split_once(':') {
            Some((a, b)) => (parse(a)?, parse(b)?),
            None => (parse(s)?, parse(s)?),
        };
        Ok(Span { lo, hi })
    }
}

enum Failure {
    Input(String),
    NotFound(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::NoRepresentation
            | Error::NoSolution
            | Error::NeedLargerField(_)
            | Error::NotRepresentable => Failure::NotFound(e.to_string()),
            Error::VerificationFailed(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::NotFound(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    let (text, out) = match command {
        Command::FieldInfo { field, k } => (field_info(&field, k)?, None),
        Command::SolveScalar { field, k, c } => (solve_scalar(&field, k, &c)?, None),
        Command::SolvePair { field, k, c, lambda } => (solve_pair(&field, k, &c, &lambda)?, None),
        Command::Decompose {
            field,
            k,
            input,
            n,
            seed,
            max_terms,
            out,
        } => (decompose(&field, k, input.as_deref(), n, seed, max_terms)?, out),
        Command::Verify { input, witnesses } => {
            let (report, ok) = verify(&input, witnesses.as_deref())?;
            print!("{report}");
            if !ok {
                return Err(Failure::NotFound("witnesses do not sum to the matrix".into()));
            }
            return Ok(());
        }
        Command::Census {
            p_range,
            k_range,
            n,
            m,
            out,
            sequential,
        } => (run_census(p_range, k_range, n, m, sequential)?, out),
        Command::WeilCheck { field, d, f } => (weil(&field, d, &f)?, None),
        Command::Constant { k } => (format!("{}\n", waring_constant(k)), None),
    };
    match out {
        Some(path) => fs::write(&path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn build_field(args: &FieldArgs) -> Result<FieldCtx, Failure> {
    let p = args.p.ok_or_else(|| Failure::Input("--p is required".into()))?;
    let modulus = match &args.modulus {
        Some(s) => Some(
            s.split(',')
                .map(|t| t.trim().parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| Failure::Input(format!("bad modulus `{s}`")))?,
        ),
        None => None,
    };
    Ok(FieldCtx::new(p, args.m, modulus.as_deref())?)
}

fn check_k(k: u64) -> Result<(), Failure> {
    if k == 0 {
        return Err(Failure::Input("k must be positive".into()));
    }
    Ok(())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn field_info(args: &FieldArgs, k: Option<u64>) -> Outcome {
    let f = build_field(args)?;
    let mut s = String::new();
    writeln!(s, "p={}", f.p()).unwrap();
    writeln!(s, "m={}", f.m()).unwrap();
    writeln!(s, "q={}", f.q()).unwrap();
    if let Some(modulus) = f.modulus() {
        let c: Vec<String> = modulus.iter().map(u64::to_string).collect();
        writeln!(s, "modulus={}", c.join(",")).unwrap();
    }
    writeln!(s, "generator={}", render_fel(&f, f.generator())).unwrap();
    if let Some(k) = k {
        check_k(k)?;
        writeln!(s, "k={k}").unwrap();
        writeln!(s, "kth_powers={}", f.kth_power_count(k)).unwrap();
        writeln!(s, "minus_one_is_kth_power={}", minus_one_is_kth_power(f.p(), f.m() as u32, k)).unwrap();
        writeln!(s, "above_threshold={}", f.q() > waring_constant(k)).unwrap();
    }
    Ok(s)
}

fn solve_scalar(args: &FieldArgs, k: u64, c: &str) -> Outcome {
    check_k(k)?;
    let f = build_field(args)?;
    let c = parse_fel(&f, c)?;
    let w = KthPowers::new(&f, k).two_power_rep(&f, c)?;
    Ok(pair_text(&f, &w))
}

fn solve_pair(args: &FieldArgs, k: u64, c: &str, lambda: &str) -> Outcome {
    check_k(k)?;
    let f = build_field(args)?;
    let c = parse_fel(&f, c)?;
    if c.is_zero() {
        return Err(Failure::Input("c must be nonzero".into()));
    }
    let lambda = parse_fel(&f, lambda)?;
    let w = KthPowers::new(&f, k).constrained_pair(&f, c, lambda)?;
    Ok(pair_text(&f, &w))
}

fn pair_text(f: &FieldCtx, w: &matwaring::PairWitness) -> String {
    format!(
        "x={}\ny={}\nxk={}\nyk={}\n",
        render_fel(f, w.x),
        render_fel(f, w.y),
        render_fel(f, w.xk),
        render_fel(f, w.yk)
    )
}

fn decompose(
    args: &FieldArgs,
    k: u64,
    input: Option<&Path>,
    n: Option<usize>,
    seed: u64,
    max_terms: Option<usize>,
) -> Outcome {
    check_k(k)?;
    let (f, a) = match input {
        Some(path) => {
            let (f, a) = text::parse_matrix(&read(path)?)?;
            if args.p.is_some() && build_field(args)? != f {
                return Err(Failure::Input("--p/--m/--modulus disagree with the input file".into()));
            }
            (f, a)
        }
        None => {
            let f = build_field(args)?;
            let n = n.ok_or_else(|| Failure::Input("give --input or --n".into()))?;
            if n == 0 {
                return Err(Failure::Input("n must be positive".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let data = (0..n * n).map(|_| f.elem(rng.gen_range(0..f.q()))).collect();
            let a = Mat::from_vec(n, data)?;
            (f, a)
        }
    };
    let engine = Engine::new(&f, k);
    let d = engine.decompose(&a)?;
    if let Some(max) = max_terms {
        if d.terms() > max {
            return Err(Failure::NotFound(format!("needed {} terms, more than --max-terms {max}", d.terms())));
        }
    }
    // independent re-check before reporting success
    if !oracle::verify(&f, &a, k, &d.witnesses)? {
        return Err(Failure::Internal("decomposition failed verification".into()));
    }
    let mut s = String::new();
    if input.is_none() {
        s.push_str(&text::render_matrix(&f, &a));
    }
    s.push_str(&render_decomposition(&f, &d, true));
    Ok(s)
}

fn verify(input: &Path, witnesses: Option<&Path>) -> Result<(String, bool), Failure> {
    let (f, a, d) = match witnesses {
        Some(w) => {
            let (f, a) = text::parse_matrix(&read(input)?)?;
            let (g, d) = text::parse_decomposition(&read(w)?)?;
            if f != g {
                return Err(Failure::Input("witnesses are over a different field".into()));
            }
            (f, a, d)
        }
        None => text::parse_problem(&read(input)?)?,
    };
    if d.witnesses.iter().any(|w| w.n() != a.n()) {
        return Err(Failure::Input("witness size differs from the matrix".into()));
    }
    let ok = oracle::verify(&f, &a, d.k, &d.witnesses)?;
    Ok((format!("verified={ok}\n"), ok))
}

fn run_census(p_range: Span, k_range: Span, n: Span, m: Span, sequential: bool) -> Outcome {
    let spec = CensusSpec {
        primes: p_range.values().filter(|&p| is_prime(p)).collect(),
        degrees: m.values().map(|v| v as usize).collect(),
        sizes: n.values().map(|v| v as usize).collect(),
        exponents: k_range.values().collect(),
    };
    let exec = if sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let cells = census(&spec, exec);
    for c in &cells {
        if let Err(e) = &c.outcome {
            eprintln!("skipped p={} m={} n={} k={}: {e}", c.p, c.m, c.n, c.k);
        }
    }
    Ok(render_csv(&cells))
}

fn weil(args: &FieldArgs, d: u64, f_text: &str) -> Outcome {
    let f = build_field(args)?;
    let g = parse_poly(&f, f_text)?;
    if d == 0 || g.is_zero() {
        return Err(Failure::Input("need d >= 1 and a nonzero f".into()));
    }
    let r = weil_check(&f, d, &g)?;
    Ok(format!(
        "q={}\nd={d}\ndeg_f={}\nN={}\nabs_irreducible={}\nhypothesis_met={}\nbound_holds={}\n",
        f.q(),
        g.deg(),
        r.n_points,
        r.abs_irreducible,
        r.hypothesis_met,
        r.bound_holds
    ))
}
