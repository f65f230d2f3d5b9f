use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cowordism::acg::{acg_language, acg_to_llg, AcgError};
use cowordism::grammar::{parse_grammar, Grammar, GrammarError};
use cowordism::laws::{run_laws, LawConfig, Mutant};
use cowordism::lambda::SemanticsError;
use cowordism::llg::{
    generate_cut_only_with, generate_with, language_with, member, DerivedJudgement, Llg, LlgError,
    Membership, SearchOptions,
};
use cowordism::mcfg::{llg_to_mcfg, mcfg_derive, mcfg_language, mcfg_to_llg, Fact, McfgError};
use cowordism::mll::{interpret_proof, sequent_to_string, InterpretError, MllProof, MllRule};
use cowordism::word::AlphabetError;
use cowordism::{Alphabet, Word};
use thiserror::Error;

const DEFAULT_BUDGET: usize = 9;
const DEFAULT_MCFG_BOUND: usize = 4;

#[derive(Parser)]
#[command(name = "cowordism", version, about = "Grammars interpreted in word cobordisms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the words or judgements of a grammar.
    Generate {
        file: PathBuf,
        /// Largest derivation size, counting axioms, identities and cuts.
        #[arg(long)]
        budget: Option<usize>,
        /// Longest word to report. For MCFGs this is the fixpoint bound.
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long, value_enum, default_value_t = ListFormat::Words)]
        format: ListFormat,
    },
    /// Decide membership of a word up to a derivation budget.
    Member {
        file: PathBuf,
        word: String,
        /// Defaults to four times the word length plus five.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Translate a grammar into another formalism.
    Compile {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the category laws on random instances.
    Laws {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        cases: usize,
        #[arg(long, default_value_t = 6)]
        max_cardinality: usize,
        #[arg(long, default_value_t = 3)]
        alphabet_size: usize,
        /// Break composition on purpose to see the suite catch it.
        #[arg(long, value_enum)]
        mutant: Option<MutantArg>,
    },
    /// Draw the cowordism of a derivation.
    ///
    /// The derivation is either a number from `generate --format judgements`
    /// run with the same limits, or a word, whose cheapest derivation is used.
    Render {
        file: PathBuf,
        derivation: String,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long, value_enum, default_value_t = RenderFormat::Text)]
        format: RenderFormat,
        /// Also draw every axiom and cut below the conclusion, innermost first.
        #[arg(long)]
        steps: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ListFormat {
    Words,
    Judgements,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Llg,
    Mcfg,
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderFormat {
    Dot,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum MutantArg {
    LabelSwap,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Grammar {
        path: PathBuf,
        source: GrammarError,
    },
    #[error(transparent)]
    Llg(#[from] LlgError),
    #[error(transparent)]
    Acg(#[from] AcgError),
    #[error(transparent)]
    Mcfg(#[from] McfgError),
    #[error(transparent)]
    Word(#[from] AlphabetError),
    #[error(transparent)]
    Interpret(#[from] InterpretError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error("no derivation #{index}: the listing has {count}")]
    UnknownDerivation { index: usize, count: usize },
    #[error("`{0}` has no derivation within the budget")]
    NotDerived(String),
}

/// What a command prints and how it exits.
struct Outcome {
    stdout: String,
    code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(o) => {
            print!("{}", o.stdout);
            ExitCode::from(o.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Generate {
            file,
            budget,
            max_len,
            format,
        } => generate(&load(&file)?, budget, max_len, format).map(Outcome::ok),
        Command::Member { file, word, budget } => membership(&load(&file)?, &word, budget),
        Command::Compile { file, to, out } => {
            let text = compile(&load(&file)?, to)?.to_text();
            match out {
                Some(path) => {
                    fs::write(&path, &text).map_err(|source| CliError::Io { path, source })?;
                    Ok(Outcome::ok(String::new()))
                }
                None => Ok(Outcome::ok(text)),
            }
        }
        Command::Laws {
            seed,
            cases,
            max_cardinality,
            alphabet_size,
            mutant,
        } => {
            let report = run_laws(&LawConfig {
                seed,
                cases,
                max_cardinality,
                alphabet_size,
                mutant: mutant.map(|MutantArg::LabelSwap| Mutant::LabelSwap),
            });
            Ok(Outcome {
                stdout: format!("{report}"),
                code: if report.passed() { 0 } else { 1 },
            })
        }
        Command::Render {
            file,
            derivation,
            budget,
            max_len,
            format,
            steps,
        } => render(&load(&file)?, &derivation, budget, max_len, format, steps).map(Outcome::ok),
    }
}

fn load(path: &Path) -> Result<Grammar, CliError> {
    let src = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_grammar(&src).map_err(|source| CliError::Grammar {
        path: path.to_path_buf(),
        source,
    })
}

/// The grammar as an LLG, the form every derivation-level command works on.
fn as_llg(g: &Grammar) -> Result<Llg, CliError> {
    Ok(match g {
        Grammar::Llg(l) => l.clone(),
        Grammar::Acg(a) => acg_to_llg(a)?,
        Grammar::Mcfg(m) => mcfg_to_llg(m),
    })
}

fn options(budget: Option<usize>, max_len: Option<usize>) -> SearchOptions {
    let opts = SearchOptions::budget(budget.unwrap_or(DEFAULT_BUDGET)).pruned();
    match max_len {
        Some(k) => opts.with_max_len(k),
        None => opts,
    }
}

fn judgements(g: &Llg, opts: &SearchOptions) -> Result<Vec<DerivedJudgement>, CliError> {
    let gen = if g.is_flat() {
        generate_cut_only_with(g, opts)?
    } else {
        generate_with(g, opts)?
    };
    let mut js: Vec<DerivedJudgement> = gen
        .judgements
        .into_iter()
        .filter(|j| opts.max_len.map_or(true, |k| j.body.body().label_length() <= k))
        .collect();
    js.sort_by(|a, b| a.body.cmp(&b.body).then(a.size.cmp(&b.size)));
    js.dedup_by(|a, b| a.body == b.body);
    Ok(js)
}

fn generate(
    g: &Grammar,
    budget: Option<usize>,
    max_len: Option<usize>,
    format: ListFormat,
) -> Result<String, CliError> {
    let mut out = String::new();
    let opts = options(budget, max_len);
    match (g, format) {
        (Grammar::Mcfg(m), format) => {
            if budget.is_some() {
                eprintln!("note: --budget does not apply to MCFGs, use --max-len");
            }
            let bound = max_len.unwrap_or(DEFAULT_MCFG_BOUND);
            match format {
                ListFormat::Words => {
                    for w in mcfg_language(m, bound) {
                        writeln!(out, "{}", m.alphabet.display(&w)).unwrap();
                    }
                }
                ListFormat::Judgements => {
                    for f in mcfg_derive(m, bound) {
                        writeln!(out, "{}", show_fact(&m.alphabet, &f)).unwrap();
                    }
                }
            }
        }
        (Grammar::Acg(a), ListFormat::Words) => {
            for w in acg_language(a, &opts)?.words {
                writeln!(out, "{}", a.alphabet.display(&w)).unwrap();
            }
        }
        (Grammar::Llg(l), ListFormat::Words) => {
            for w in language_with(l, &opts)?.words {
                writeln!(out, "{}", l.alphabet.display(&w)).unwrap();
            }
        }
        (_, ListFormat::Judgements) => {
            let llg = as_llg(g)?;
            for (k, j) in judgements(&llg, &opts)?.iter().enumerate() {
                writeln!(out, "#{k} size {}  |- {}", j.size, sequent_to_string(&j.sequent)).unwrap();
                out.push_str(&j.body.body().to_text());
                out.push('\n');
            }
        }
    }
    Ok(out)
}

fn show_fact(a: &Alphabet, f: &Fact) -> String {
    let args: Vec<String> = f.args.iter().map(|w| a.display(w)).collect();
    format!("{}({})", f.predicate, args.join(", "))
}

fn parse_word(a: &Alphabet, s: &str) -> Result<Word, CliError> {
    Ok(a.parse_display(s)?)
}

fn default_budget(w: &Word) -> usize {
    4 * w.len() + 5
}

fn membership(g: &Grammar, word: &str, budget: Option<usize>) -> Result<Outcome, CliError> {
    let llg = as_llg(g)?;
    let w = parse_word(&llg.alphabet, word)?;
    let budget = budget.unwrap_or_else(|| default_budget(&w));
    match member(&llg, &w, Some(budget))? {
        Membership::Yes(j) => {
            let mut out = String::new();
            writeln!(out, "yes").unwrap();
            writeln!(out, "size {}", j.size).unwrap();
            writeln!(out, "axioms {}", j.provenance.axioms_used().join(" ")).unwrap();
            out.push_str(&j.provenance.proof().render());
            Ok(Outcome::ok(out))
        }
        Membership::NoAtBudget(_) => Ok(Outcome {
            stdout: format!("no-at-budget {budget}\n"),
            code: 1,
        }),
    }
}

fn compile(g: &Grammar, to: Target) -> Result<Grammar, CliError> {
    Ok(match (g, to) {
        (Grammar::Acg(a), Target::Llg) => Grammar::Llg(acg_to_llg(a)?),
        (Grammar::Mcfg(m), Target::Llg) => Grammar::Llg(mcfg_to_llg(m)),
        (Grammar::Llg(l), Target::Llg) => Grammar::Llg(l.clone()),
        (Grammar::Llg(l), Target::Mcfg) => Grammar::Mcfg(llg_to_mcfg(l)?),
        (Grammar::Acg(a), Target::Mcfg) => Grammar::Mcfg(llg_to_mcfg(&acg_to_llg(a)?)?),
        (Grammar::Mcfg(m), Target::Mcfg) => Grammar::Mcfg(m.clone()),
    })
}

fn render(
    g: &Grammar,
    derivation: &str,
    budget: Option<usize>,
    max_len: Option<usize>,
    format: RenderFormat,
    steps: bool,
) -> Result<String, CliError> {
    let llg = as_llg(g)?;
    let judgement = match derivation.trim_start_matches('#').parse::<usize>() {
        Ok(index) => {
            let js = judgements(&llg, &options(budget, max_len))?;
            let count = js.len();
            js.into_iter()
                .nth(index)
                .ok_or(CliError::UnknownDerivation { index, count })?
        }
        Err(_) => {
            let w = parse_word(&llg.alphabet, derivation)?;
            let b = budget.unwrap_or_else(|| default_budget(&w));
            match member(&llg, &w, Some(b))? {
                Membership::Yes(j) => *j,
                Membership::NoAtBudget(_) => return Err(CliError::NotDerived(derivation.into())),
            }
        }
    };
    let mut out = String::new();
    if steps {
        let proof = judgement.provenance.proof();
        let mut nodes = Vec::new();
        collect_steps(&proof, &mut nodes);
        let mut last = None;
        let mut k = 0;
        for p in nodes {
            let c = interpret_proof(&llg.lexicon, p)?;
            // Flattening adds cuts that leave the body as it was.
            if last.as_ref() == Some(c.body()) {
                continue;
            }
            last = Some(c.body().clone());
            k += 1;
            match format {
                RenderFormat::Text => {
                    writeln!(out, "# step {} |- {}   [{}]", k, sequent_to_string(&p.conclusion), p.rule)
                        .unwrap();
                    out.push_str(&c.body().to_text());
                    out.push('\n');
                }
                RenderFormat::Dot => out.push_str(&c.to_dot()),
            }
        }
        return Ok(out);
    }
    match format {
        RenderFormat::Text => {
            out.push_str(&judgement.body.body().to_text());
            out.push('\n');
        }
        RenderFormat::Dot => out.push_str(&judgement.body.to_dot()),
    }
    Ok(out)
}

fn collect_steps<'a>(p: &'a MllProof, out: &mut Vec<&'a MllProof>) {
    for q in &p.premises {
        collect_steps(q, out);
    }
    if matches!(p.rule, MllRule::Axiom(_) | MllRule::Cut) {
        out.push(p);
    }
}
