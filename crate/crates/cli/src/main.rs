use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pre_core::deriv::derivative_automaton;
use pre_core::error::ParseErrorKind;
use pre_core::expr::alphabet_from_str;
use pre_core::gpts::{load, to_dot, to_json_string};
use pre_core::harness::check_all;
use pre_core::prob::to_decimal;
use pre_core::random::GenConfig;
use pre_core::{
    bisim_classes, expr_equiv, gpts_to_expr, lang_equiv, parse_with_alphabet, reachable, Alphabet, Expr, Gpts,
    GptsError, Letter, ParseError, SolveError, StateNaming,
};

#[derive(Parser)]
#[command(name = "pre", version, about = "Probabilistic regular expressions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Probability that an expression generates a word.
    Eval {
        expr: String,
        /// The word; pass "" for the empty word.
        word: String,
        /// Also print a decimal approximation with this many digits.
        #[arg(long, value_name = "DIGITS")]
        approx: Option<usize>,
        /// Letters allowed in the expression and the word.
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Decide language equivalence of two expressions.
    Equiv {
        left: String,
        right: String,
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Write the reachable derivative automaton of an expression.
    Derive {
        expr: String,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Convert a state of a GPTS file into an expression.
    Solve {
        gpts: PathBuf,
        state: String,
        /// Check that the expression denotes the state's language.
        #[arg(long)]
        check: bool,
    },
    /// Print the bisimilarity classes of a GPTS file.
    Bisim {
        gpts: PathBuf,
        /// Also report language-equivalent pairs that are not bisimilar.
        #[arg(long)]
        cross_check: bool,
    },
    /// Test every axiom schema on random instances.
    AxiomsCheck {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 12)]
        max_denominator: i64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

/// A failure with its exit status and message for stderr.
struct Failure(u8, String);

const PARSE: u8 = 2;
const ALPHABET: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval {
            expr,
            word,
            approx,
            alphabet,
        } => eval(&expr, &word, approx, alphabet.as_deref()),
        Command::Equiv { left, right, alphabet } => equiv(&left, &right, alphabet.as_deref()),
        Command::Derive { expr, out, format } => derive(&expr, out, format),
        Command::Solve { gpts, state, check } => solve(&gpts, &state, check),
        Command::Bisim { gpts, cross_check } => bisim(&gpts, cross_check),
        Command::AxiomsCheck {
            seed,
            trials,
            depth,
            max_denominator,
        } => axioms_check(seed, trials, depth, max_denominator),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

fn user_alphabet(spec: Option<&str>) -> Result<Option<Alphabet>, Failure> {
    spec.map(|s| alphabet_from_str(s).map_err(|c| Failure(ALPHABET, format!("`{c}` is not a letter"))))
        .transpose()
}

fn parse_expr(text: &str, alphabet: Option<&Alphabet>) -> Result<Expr, Failure> {
    let result = match alphabet {
        Some(a) => parse_with_alphabet(text, a),
        None => pre_core::parse(text),
    };
    result.map_err(|e: ParseError| {
        let code = match e.kind {
            ParseErrorKind::UnknownSymbol(_) => ALPHABET,
            _ => PARSE,
        };
        Failure(code, format!("{e} in `{text}`"))
    })
}

fn parse_word(text: &str, alphabet: Option<&Alphabet>) -> Result<Vec<Letter>, Failure> {
    text.chars()
        .map(|c| match Letter::new(c) {
            Some(a) if alphabet.is_none_or(|s| s.contains(&a)) => Ok(a),
            _ => Err(Failure(ALPHABET, format!("`{c}` is not in the alphabet"))),
        })
        .collect()
}

fn eval(expr: &str, word: &str, approx: Option<usize>, alphabet: Option<&str>) -> Result<u8, Failure> {
    let allowed = user_alphabet(alphabet)?;
    let e = parse_expr(expr, allowed.as_ref())?;
    let w = parse_word(word, allowed.as_ref())?;
    let letters: Alphabet = allowed.unwrap_or_else(|| w.iter().copied().collect());
    let auto = derivative_automaton(&e, StateNaming::Indexed, &letters);
    let p = auto.gpts.word_prob(0, &w).expect("word letters are in the alphabet");
    println!("{p}");
    if let Some(digits) = approx {
        println!("{}", to_decimal(&p, digits));
    }
    Ok(0)
}

fn equiv(left: &str, right: &str, alphabet: Option<&str>) -> Result<u8, Failure> {
    let allowed = user_alphabet(alphabet)?;
    let e = parse_expr(left, allowed.as_ref())?;
    let f = parse_expr(right, allowed.as_ref())?;
    let verdict = expr_equiv(&e, &f);
    println!("{verdict}");
    Ok(if verdict.is_equal() { 0 } else { 1 })
}

fn derive(expr: &str, out: Option<PathBuf>, format: Format) -> Result<u8, Failure> {
    let e = parse_expr(expr, None)?;
    let g = reachable(&e);
    let text = match format {
        Format::Json => to_json_string(&g).map_err(|err| Failure(1, err.to_string()))?,
        Format::Dot => to_dot(&g),
    };
    match out {
        Some(path) => fs::write(&path, text).map_err(|err| Failure(1, format!("{}: {err}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn load_gpts(path: &PathBuf) -> Result<Gpts, Failure> {
    load(path).map_err(|e| Failure(PARSE, format!("{}: {e}", path.display())))
}

fn solve(path: &PathBuf, state: &str, check: bool) -> Result<u8, Failure> {
    let g = load_gpts(path)?;
    let e = gpts_to_expr(&g, state).map_err(|err| match err {
        SolveError::Gpts(GptsError::UnknownState(s)) => Failure(3, format!("unknown state `{s}`")),
        SolveError::Gpts(other) => Failure(PARSE, other.to_string()),
        SolveError::System(other) => Failure(4, other.to_string()),
    })?;
    println!("{e}");
    if !check {
        return Ok(0);
    }
    let x = g.state_id(state).expect("solved states exist");
    let auto = derivative_automaton(&e, StateNaming::Indexed, g.alphabet());
    let (union, offset) = g.disjoint_union(&auto.gpts);
    let verdict = lang_equiv(&union, x, offset).expect("both states exist");
    if verdict.is_equal() {
        println!("ROUNDTRIP OK");
        Ok(0)
    } else {
        println!("ROUNDTRIP FAILED: {verdict}");
        Ok(1)
    }
}

fn bisim(path: &PathBuf, cross_check: bool) -> Result<u8, Failure> {
    let g = load_gpts(path)?;
    let partition = bisim_classes(&g);
    let mut blocks: Vec<Vec<&str>> = partition
        .blocks()
        .into_iter()
        .map(|b| {
            let mut names: Vec<&str> = b.into_iter().map(|x| g.state_name(x)).collect();
            names.sort_unstable();
            names
        })
        .collect();
    blocks.sort();
    for block in &blocks {
        println!("{}", block.join(" "));
    }
    if cross_check {
        let mut ids: Vec<usize> = (0..g.num_states()).collect();
        ids.sort_by_key(|&x| g.state_name(x));
        for (i, &x) in ids.iter().enumerate() {
            for &y in &ids[i + 1..] {
                if !partition.same_block(x, y) && lang_equiv(&g, x, y).expect("states exist").is_equal() {
                    println!(
                        "LANG-EQUAL BUT NOT BISIMILAR: ({},{})",
                        g.state_name(x),
                        g.state_name(y)
                    );
                }
            }
        }
    }
    Ok(0)
}

fn axioms_check(seed: u64, trials: usize, depth: usize, max_denominator: i64) -> Result<u8, Failure> {
    if trials == 0 {
        return Err(Failure(PARSE, "--trials must be positive".into()));
    }
    if max_denominator < 1 {
        return Err(Failure(PARSE, "--max-denominator must be positive".into()));
    }
    let cfg = GenConfig::new(&alphabet_from_str("ab").expect("letters"), max_denominator, depth);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = true;
    for report in check_all(&mut rng, trials, &cfg) {
        println!("{:<7}{}/{}", report.schema.name(), report.passed, report.trials);
        if let Some(c) = &report.first_failure {
            ok = false;
            eprintln!("{}: {} vs {}: {}", report.schema, c.lhs, c.rhs, c.verdict);
        }
    }
    Ok(if ok { 0 } else { 1 })
}
