use std::collections::BTreeSet;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use zlab_core::lie::{lie_expand, restricted_power_expand};
use zlab_core::shuffle::{infiltration, shuffle};
use zlab_core::unitriangular::{
    binomial_equiv_check, ut_filtration_summary, verify_identities_with, verify_section6, Filtrations,
};
use zlab_core::words::{bracketing, lyndon_words, necklace_count};
use zlab_core::zassenhaus::{
    dimension_count, fundamental_matrix, h2_dimension, jump_set, jump_set_equivalence, verify_shuffle_relations,
};
use zlab_core::{Alphabet, FiniteUTGroup, IntPoly, Integers, LevelParams, ModRing, Report, Word};

/// Lyndon words, Magnus expansions and p-Zassenhaus filtrations, computed exactly.
///
/// Set ZLAB_THREADS to cap the number of worker threads.
#[derive(Parser)]
#[command(name = "zlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List Lyndon words with their standard bracketings
    Lyndon {
        /// Alphabet size (letters a, b, c, ...)
        #[arg(long)]
        m: usize,
        /// Comma-separated lengths
        #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 3, 4])]
        lengths: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Shuffle product of two words
    Shuffle {
        u: String,
        v: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Infiltration product of two words
    Infiltrate {
        u: String,
        v: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// The level-n fundamental matrix (entries are residues mod p)
    FundamentalMatrix {
        #[command(flatten)]
        level: Level,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Text)]
        format: MatrixFormat,
    },
    /// Dimension bookkeeping at level n
    Dims {
        #[command(flatten)]
        level: Level,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// The jump set J(n)
    JumpSet {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
    },
    /// Verification suites
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Filtration orders of U_i(Z/p^(j+1)) against their predicted values
    UtFiltration {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: u32,
        #[arg(long)]
        n: u32,
    },
    /// Expand the bracketing of a Lyndon word, or its p^j-th power over F_p
    LieExpand {
        word: String,
        /// Alphabet size (defaults to the letters used)
        #[arg(long)]
        m: Option<usize>,
        /// Prime for a restricted power
        #[arg(long, requires = "j")]
        p: Option<u64>,
        /// Exponent j of the power p^j
        #[arg(long, requires = "p")]
        j: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args, Clone, Copy)]
struct Level {
    /// Prime p
    #[arg(long)]
    p: u64,
    /// Level n (2..=8)
    #[arg(long)]
    n: u32,
    /// Alphabet size
    #[arg(long)]
    m: usize,
    /// Working precision K of Z/p^K (default j_n(1)+1)
    #[arg(long)]
    precision: Option<u32>,
}

#[derive(Subcommand)]
enum Suite {
    /// Pairings annihilate shuffle products
    ShuffleRelations {
        #[command(flatten)]
        level: Level,
    },
    /// Powers of lower central terms of unitriangular groups
    Section6 {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        i_max: usize,
        #[arg(long, default_value_t = 1)]
        j_max: u32,
        #[arg(long, default_value_t = 6)]
        n_max: u32,
        /// Skip groups larger than this
        #[arg(long, default_value_t = 4096)]
        max_order: u64,
    },
    /// Zassenhaus identities on U_i(Z/p^(j+1)) for 1 <= n <= n_max
    Identities {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        i: usize,
        #[arg(long, default_value_t = 0)]
        j: u32,
        /// Defaults to 2p
        #[arg(long)]
        n_max: Option<u32>,
    },
    /// Binomial divisibility lemma on a grid
    Binomial {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 4)]
        j_max: u32,
        #[arg(long, default_value_t = 5)]
        jp_max: u32,
        #[arg(long, default_value_t = 200)]
        t_max: u64,
    },
    /// Every suite at the given level
    All {
        #[command(flatten)]
        level: Level,
    },
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum MatrixFormat {
    Text,
    Json,
    Csv,
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<zlab_core::Error> for Failure {
    fn from(e: zlab_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("ZLAB_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .expect("thread pool configured once");
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Lyndon { m, lengths, format } => cmd_lyndon(m, &lengths, format),
        Command::Shuffle { u, v, format } => print_product(&shuffle(&word(&u)?, &word(&v)?)?, format),
        Command::Infiltrate { u, v, format } => print_product(&infiltration(&word(&u)?, &word(&v)?)?, format),
        Command::FundamentalMatrix { level, format } => cmd_matrix(level, format),
        Command::Dims { level, format } => cmd_dims(level, format),
        Command::JumpSet { p, n } => {
            if !zlab_core::ring::is_prime(p) {
                return Err(Failure::Usage(format!("{p} is not prime")));
            }
            let js: Vec<String> = jump_set(n, p).iter().map(u32::to_string).collect();
            println!("{}", js.join(" "));
            Ok(())
        }
        Command::Verify { suite } => cmd_verify(suite),
        Command::UtFiltration { p, i, j, n } => cmd_ut(p, i, j, n),
        Command::LieExpand {
            word: w,
            m,
            p,
            j,
            format,
        } => cmd_lie(&w, m, p.zip(j), format),
    }
}

fn word(s: &str) -> Result<Word, Failure> {
    if s == "1" || s.is_empty() {
        return Ok(Word::empty());
    }
    s.parse().map_err(|e: zlab_core::Error| Failure::Usage(e.to_string()))
}

fn level_params(level: Level) -> Result<LevelParams, Failure> {
    let lp = LevelParams::new(level.p, level.n, level.m)?;
    match level.precision {
        None => Ok(lp),
        Some(k) => {
            if k < lp.default_precision() {
                eprintln!(
                    "warning: precision K = {k} is below j_n(1)+1 = {}; results are unreliable",
                    lp.default_precision()
                );
            }
            Ok(lp.with_precision(k)?)
        }
    }
}

fn cmd_lyndon(m: usize, lengths: &[usize], format: Format) -> Outcome {
    let set: BTreeSet<usize> = lengths.iter().copied().collect();
    let words = lyndon_words(Alphabet::new(m)?, &set)?;
    let rows: Vec<(String, String)> = words
        .iter()
        .map(|w| Ok((w.to_string(), bracketing(w)?.to_string())))
        .collect::<Result<_, zlab_core::Error>>()?;
    match format {
        Format::Json => {
            let items: Vec<_> = rows.iter().map(|(w, b)| json!({"word": w, "bracketing": b})).collect();
            println!("{}", json!({"m": m, "lengths": set, "words": items}));
        }
        Format::Text => {
            for (w, b) in &rows {
                println!("{w}\t{b}");
            }
            for &i in &set {
                let count = words.iter().filter(|w| w.len() == i).count();
                println!(
                    "# length {i}: {count} words (necklace count {})",
                    necklace_count(m as u64, i as u32)
                );
            }
        }
    }
    Ok(())
}

fn print_product(f: &IntPoly, format: Format) -> Outcome {
    match format {
        Format::Json => {
            let terms: Vec<_> = f
                .terms()
                .map(|(w, c)| json!({"word": w.to_string(), "coeff": c}))
                .collect();
            println!("{}", json!({ "terms": terms }));
        }
        Format::Text => {
            for (w, c) in f.terms() {
                let w = if w.is_empty() { "1".to_string() } else { w.to_string() };
                println!("{c} {w}");
            }
        }
    }
    Ok(())
}

fn cmd_matrix(level: Level, format: MatrixFormat) -> Outcome {
    let fm = fundamental_matrix(&level_params(level)?)?;
    match format {
        MatrixFormat::Json => println!("{}", serde_json::to_string(&fm.to_record()).expect("serializable")),
        MatrixFormat::Csv => print!("{}", fm.to_csv()),
        MatrixFormat::Text => {
            let labels: Vec<String> = fm.index.iter().map(Word::to_string).collect();
            let width = labels.iter().map(String::len).max().unwrap_or(1).max(2);
            print!("{:>width$}", "");
            for l in &labels {
                print!(" {l:>width$}");
            }
            println!();
            for (label, row) in labels.iter().zip(fm.signed_matrix()) {
                print!("{label:>width$}");
                for v in row {
                    print!(" {v:>width$}");
                }
                println!();
            }
        }
    }
    Ok(())
}

fn cmd_dims(level: Level, format: Format) -> Outcome {
    let lp = level_params(level)?;
    let js: Vec<u32> = jump_set(lp.n, lp.p).into_iter().collect();
    let h2 = h2_dimension(&lp);
    let index = lp.index().len();
    let count = if (lp.n as u64) < lp.p {
        Some(dimension_count(&lp)?)
    } else {
        None
    };
    match format {
        Format::Json => {
            let mut v =
                json!({"p": lp.p, "n": lp.n, "m": lp.m, "jump_set": js, "h2_dimension": h2, "index_size": index});
            if let Some(c) = count {
                v["indec_dimension"] = json!(c.indec);
                v["lyndon_span"] = json!(c.lyndon_span);
            }
            println!("{v}");
        }
        Format::Text => {
            let js: Vec<String> = js.iter().map(u32::to_string).collect();
            println!("J(n)            {}", js.join(" "));
            println!("dim H^2         {h2}");
            println!("index size      {index}");
            if let Some(c) = count {
                println!("dim indec       {}", c.indec);
                println!("m + dim indec   {}", c.m + c.indec);
                println!("Lyndon span     {}", c.lyndon_span);
            }
        }
    }
    Ok(())
}

fn print_report(name: &str, r: &Report) -> bool {
    let status = if r.passed() { "PASS" } else { "FAIL" };
    print!(
        "{status} {name}: {} checks, {} violations",
        r.checked,
        r.violations.len()
    );
    if !r.skipped.is_empty() {
        print!(", {} skipped", r.skipped.len());
    }
    println!();
    for v in &r.violations {
        println!("  violation: {v}");
    }
    for s in &r.skipped {
        println!("  skipped: {s}");
    }
    r.passed()
}

fn identities_report(p: u64, i: usize, j: u32, n_max: u32) -> Result<Report, Failure> {
    let g = FiniteUTGroup::new(i, p, j)?;
    let mut f = Filtrations::new(&g, p)?;
    let mut total = Report::default();
    for n in 1..=n_max {
        total.merge(verify_identities_with(&mut f, n)?);
    }
    Ok(total)
}

fn binomial_report(p: u64, j_max: u32, jp_max: u32, t_max: u64) -> Result<Report, Failure> {
    let mut r = Report::default();
    for j in 0..=j_max {
        for jp in 1..=jp_max {
            let top = p.checked_pow(jp).unwrap_or(u64::MAX).min(t_max).min(500);
            for t in 1..=top {
                r.checked += 1;
                if !binomial_equiv_check(p, j, jp, t)? {
                    r.violations.push(format!("p={p} j={j} j'={jp} t={t}"));
                }
            }
        }
    }
    Ok(r)
}

fn cmd_verify(suite: Suite) -> Outcome {
    let ok = match suite {
        Suite::ShuffleRelations { level } => {
            print_report("shuffle relations", &verify_shuffle_relations(&level_params(level)?)?)
        }
        Suite::Section6 {
            p,
            i_max,
            j_max,
            n_max,
            max_order,
        } => print_report(
            "powers of unitriangular groups",
            &verify_section6(p, i_max, j_max, n_max, max_order)?,
        ),
        Suite::Identities { p, i, j, n_max } => {
            let n_max = n_max.unwrap_or(2 * p.min(64) as u32);
            print_report("Zassenhaus identities", &identities_report(p, i, j, n_max)?)
        }
        Suite::Binomial {
            p,
            j_max,
            jp_max,
            t_max,
        } => print_report("binomial lemma", &binomial_report(p, j_max, jp_max, t_max)?),
        Suite::All { level } => verify_all(level)?,
    };
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn verify_all(level: Level) -> Result<bool, Failure> {
    let lp = level_params(level)?;
    let mut ok = true;

    let fm = fundamental_matrix(&lp)?;
    let mut tri = Report::default();
    tri.checked += 1;
    if !fm.is_upper_unitriangular() {
        tri.violations
            .push("fundamental matrix is not upper unitriangular".into());
    }
    ok &= print_report("fundamental matrix unitriangular", &tri);

    ok &= print_report("shuffle relations", &verify_shuffle_relations(&lp)?);

    let mut js = Report::default();
    for n in 1..=lp.n {
        js.checked += 1;
        if !jump_set_equivalence(n, lp.p)? {
            js.violations.push(format!("n={n}"));
        }
    }
    ok &= print_report("jump set equivalence", &js);

    let mut dims = Report::default();
    dims.checked += 1;
    if h2_dimension(&lp) != fm.size() as u64 {
        dims.violations.push("dim H^2 differs from the index size".into());
    }
    if (lp.n as u64) < lp.p {
        let c = dimension_count(&lp)?;
        dims.checked += 1;
        if !c.holds() {
            dims.violations.push(format!("{c:?}"));
        }
    } else {
        dims.skipped.push("shuffle quotient count needs n < p".into());
    }
    ok &= print_report("dimension count", &dims);

    ok &= print_report("binomial lemma", &binomial_report(lp.p, 4, 5, 200)?);
    ok &= print_report(
        "powers of unitriangular groups",
        &verify_section6(lp.p, 2, 1, lp.n, 4096)?,
    );
    ok &= print_report("Zassenhaus identities", &identities_report(lp.p, 2, 0, lp.n)?);
    Ok(ok)
}

fn cmd_ut(p: u64, i: usize, j: u32, n: u32) -> Outcome {
    let s = ut_filtration_summary(p, i, j, n)?;
    println!("G = {}, n = {n}, p = {p}", s.group);
    println!(
        "{:>3} {:>10} {:>10} {:>4} {:>10} {:>6}",
        "k", "|G^(k)|", "predicted", "j", "|power|", "check"
    );
    for r in &s.rows {
        let ok = r.power_check && r.lower_order as u64 == r.lower_predicted;
        println!(
            "{:>3} {:>10} {:>10} {:>4} {:>10} {:>6}",
            r.k,
            r.lower_order,
            r.lower_predicted,
            r.power_exponent,
            r.power_order,
            if ok { "pass" } else { "FAIL" }
        );
    }
    println!("|G_(n,p)| = {}", s.zassenhaus_order);
    if let Some((predicted, got)) = s.corner_check {
        println!(
            "G_(n,p) = I + p^j Z E_(1,i+1): predicted {predicted}, observed {got} ({})",
            if predicted == got { "pass" } else { "FAIL" }
        );
    }
    if s.passed() {
        println!("PASS");
        Ok(())
    } else {
        println!("FAIL");
        Err(Failure::Verification)
    }
}

fn cmd_lie(w: &str, m: Option<usize>, power: Option<(u64, u32)>, format: Format) -> Outcome {
    let w = word(w)?;
    let b = bracketing(&w)?;
    let alphabet = Alphabet::new(m.unwrap_or(w.min_alphabet()))?;
    let terms: Vec<(String, i64)> = match power {
        None => lie_expand(&b, Integers::<i64>::new(), alphabet, w.len())?
            .terms()
            .map(|(x, c)| (x.to_string(), *c))
            .collect(),
        Some((p, j)) => {
            let field = ModRing::field(p)?;
            let trunc = (w.len() as u64).saturating_mul(p.checked_pow(j).unwrap_or(u64::MAX));
            let trunc = usize::try_from(trunc)
                .unwrap_or(usize::MAX)
                .min(zlab_core::words::MAX_WORD_LEN);
            restricted_power_expand(j, &b, field, alphabet, trunc)?
                .terms()
                .map(|(x, c)| (x.to_string(), field.signed(*c)))
                .collect()
        }
    };
    match format {
        Format::Json => {
            let items: Vec<_> = terms.iter().map(|(w, c)| json!({"word": w, "coeff": c})).collect();
            println!("{}", json!({"bracketing": b.to_string(), "terms": items}));
        }
        Format::Text => {
            println!("{b}");
            for (x, c) in &terms {
                println!("{c} {x}");
            }
        }
    }
    Ok(())
}
