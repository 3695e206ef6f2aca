//! Command-line front end. `run` takes the arguments and output streams and
//! returns the process exit code: 0 when the answer is positive, 1 when it is
//! negative, 2 on any error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::dgrma::{build_dgrma, DgrmaOptions, SlaveAutomaton};
use crate::error::{Error, Result};
use crate::formula::{parse_formula, Formula};
use crate::lasso::Lasso;
use crate::master::{boolfn_dot, DEFAULT_STATE_CAP};
use crate::mdp::{mec_decomposition, parse_mdp, product_mdp, Mdp, Valuation};
use crate::mec_analysis::{flow_lp_text, build_flow_lp, EpochPolicy, EpochSchedule, MecVerdict, DEFAULT_EPOCH_CAP};
use crate::rational::{fmt_approx, parse_rational, Rational};
use crate::slave::{count_dot, slave_dot, token_dot};
use crate::synthesis::{lift_pairs, pair_mecs, synthesize, SynthesisOptions};

#[derive(Parser, Debug)]
#[command(name = "freqsynth", version, about = "Strategy synthesis for frequency LTL on MDPs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Maximal satisfaction probability and threshold check.
    Synth {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long)]
        threshold: String,
        /// Require probability strictly above the threshold.
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        limits: Limits,
        /// Write the product, shaded by winning states, as Graphviz.
        #[arg(long, value_name = "OUT")]
        dot: Option<PathBuf>,
        /// Print stage timings on stderr.
        #[arg(short, long)]
        verbose: bool,
    },
    /// Translate a formula and print the automaton.
    Automaton {
        #[command(flatten)]
        formula: FormulaArg,
        #[command(flatten)]
        limits: Limits,
        /// Graphviz output file; stdout when absent.
        #[arg(long, value_name = "OUT")]
        dot: Option<PathBuf>,
        /// Also emit every slave and its token or count automaton.
        #[arg(long)]
        export_slaves: bool,
    },
    /// Compare formula semantics with the automaton on a lasso word.
    CheckWord {
        #[command(flatten)]
        formula: FormulaArg,
        /// Stem letters, e.g. "{a b};{}".
        #[arg(long, default_value = "")]
        stem: String,
        /// Loop letters, non-empty.
        #[arg(long = "loop")]
        cycle: String,
    },
    /// End components of the model, or of its product with a formula.
    Mec {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        formula: Option<String>,
        #[arg(long, value_name = "FILE", conflicts_with = "formula")]
        formula_file: Option<PathBuf>,
        #[command(flatten)]
        limits: Limits,
        /// Print the flow program of every component.
        #[arg(short, long)]
        verbose: bool,
    },
    /// Run the synthesized strategy.
    Simulate {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        steps: u64,
        #[arg(long, default_value_t = 1)]
        episodes: u64,
        /// Tolerance for the empirical checks.
        #[arg(long, default_value_t = 0.05)]
        tolerance: f64,
        #[command(flatten)]
        limits: Limits,
    },
}

#[derive(Args, Debug)]
struct ModelArg {
    #[arg(long, value_name = "FILE")]
    model: PathBuf,
}

#[derive(Args, Debug)]
struct FormulaArg {
    #[arg(long, required_unless_present = "formula_file")]
    formula: Option<String>,
    #[arg(long, value_name = "FILE", conflicts_with = "formula")]
    formula_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Limits {
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Cap on automaton and product states.
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    max_states: usize,
    /// Longest epoch of the witness strategy; 0 disables the cap.
    #[arg(long, default_value_t = DEFAULT_EPOCH_CAP)]
    epoch_cap: u64,
    /// Epoch length as this multiple of the history instead of doubling.
    #[arg(long, value_name = "K")]
    epoch_growth: Option<u64>,
}

impl Limits {
    fn options(&self, strict: bool) -> Result<SynthesisOptions> {
        if self.jobs == 0 {
            return Err(Error::Invalid("--jobs must be at least 1".into()));
        }
        Ok(SynthesisOptions {
            automaton: DgrmaOptions {
                max_states: self.max_states,
                jobs: self.jobs,
            },
            max_product_states: self.max_states,
            epochs: EpochPolicy {
                schedule: self.epoch_growth.map_or(EpochSchedule::Doubling, EpochSchedule::Geometric),
                cap: if self.epoch_cap == 0 { u64::MAX } else { self.epoch_cap },
            },
            strict,
        })
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_formula(text: Option<&String>, file: Option<&PathBuf>) -> Result<Formula> {
    match (text, file) {
        (Some(t), _) => parse_formula(t),
        (None, Some(f)) => parse_formula(read(f)?.trim()),
        (None, None) => Err(Error::Invalid("a formula is required".into())),
    }
}

fn load_model(arg: &ModelArg) -> Result<(Mdp, Valuation)> {
    parse_mdp(&read(&arg.model)?)
}

fn write_file(path: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn set(names: impl IntoIterator<Item = String>) -> String {
    format!("{{{}}}", names.into_iter().collect::<Vec<_>>().join(","))
}

/// Report text and exit code of one command.
struct Outcome {
    text: String,
    code: i32,
}

fn synth_cmd(cmd: &Command, err: &mut dyn Write) -> Result<Outcome> {
    let Command::Synth {
        model,
        formula,
        threshold,
        strict,
        limits,
        dot,
        verbose,
    } = cmd
    else {
        unreachable!()
    };
    let threshold: Rational = parse_rational(threshold)?;
    let phi = load_formula(formula.formula.as_ref(), formula.formula_file.as_ref())?;
    let (m, v) = load_model(model)?;
    let s = synthesize(&m, &v, &phi, &threshold, &limits.options(*strict)?)?;
    if let Some(path) = dot {
        write_file(path, &s.product_dot())?;
    }
    if *verbose {
        for (stage, t) in &s.report.timings {
            let _ = writeln!(err, "time.{stage}: {:.3}s", t.as_secs_f64());
        }
    }
    Ok(Outcome {
        text: s.report.to_text(),
        code: if s.report.threshold_met { 0 } else { 1 },
    })
}

fn automaton_cmd(cmd: &Command) -> Result<Outcome> {
    let Command::Automaton {
        formula,
        limits,
        dot,
        export_slaves,
    } = cmd
    else {
        unreachable!()
    };
    let phi = load_formula(formula.formula.as_ref(), formula.formula_file.as_ref())?;
    let a = build_dgrma(&phi, &[], &limits.options(false)?.automaton)?;
    let mut text = String::new();
    let _ = writeln!(text, "formula: {phi}");
    let _ = writeln!(text, "master.states: {}", a.master.num_states());
    for (k, (member, f)) in a.rec.iter().zip(a.rec_formulas()).enumerate() {
        let _ = writeln!(
            text,
            "rec.{k}: {f} (slave {} states, automaton {} states)",
            member.slave.num_states(),
            member.automaton.num_states()
        );
    }
    let _ = writeln!(text, "automaton.states: {}", a.num_states());
    let _ = writeln!(text, "automaton.pairs: {} of {}", a.pairs.len(), a.candidate_pairs);
    text.push_str(&a.acceptance_text());

    let mut graphs = boolfn_dot(&a.universe, &a.master, "master");
    graphs.push_str(&a.to_dot());
    if *export_slaves {
        for (k, member) in a.rec.iter().enumerate() {
            graphs.push_str(&slave_dot(&a.universe, &member.slave, &format!("slave{k}")));
            graphs.push_str(&match &member.automaton {
                SlaveAutomaton::Tokens(l) => token_dot(&a.universe, &member.slave, l, &format!("tokens{k}")),
                SlaveAutomaton::Counts(l) => count_dot(&a.universe, &member.slave, l, &format!("counts{k}")),
            });
        }
    }
    match dot {
        Some(path) => write_file(path, &graphs)?,
        None => text.push_str(&graphs),
    }
    Ok(Outcome { text, code: 0 })
}

fn check_word_cmd(cmd: &Command) -> Result<Outcome> {
    let Command::CheckWord { formula, stem, cycle } = cmd else { unreachable!() };
    let phi = load_formula(formula.formula.as_ref(), formula.formula_file.as_ref())?;
    let w = Lasso::parse(stem, cycle)?;
    let extra: Vec<String> = w.atoms().into_iter().collect();
    let a = build_dgrma(&phi, &extra, &DgrmaOptions::default())?;
    let oracle = w.models(&phi);
    let automaton = a.accepts_lasso(&w);
    let verdict = if oracle == automaton { "MATCH" } else { "MISMATCH" };
    Ok(Outcome {
        text: format!("word: {w}\noracle: {oracle}\nautomaton: {automaton}\n{verdict}\n"),
        code: if oracle == automaton { 0 } else { 1 },
    })
}

fn mec_cmd(cmd: &Command) -> Result<Outcome> {
    let Command::Mec {
        model,
        formula,
        formula_file,
        limits,
        verbose,
    } = cmd
    else {
        unreachable!()
    };
    let (m, v) = load_model(model)?;
    let mut text = String::new();
    if formula.is_none() && formula_file.is_none() {
        for (k, ec) in mec_decomposition(&m).iter().enumerate() {
            let names = ec.states.iter().map(|&s| m.state_names[s].clone());
            let _ = writeln!(text, "mec.{k}: {} actions={}", set(names), ec.actions.len());
        }
        return Ok(Outcome { text, code: 0 });
    }
    let phi = load_formula(formula.as_ref(), formula_file.as_ref())?;
    let opts = limits.options(false)?;
    let a = build_dgrma(&phi, &[], &opts.automaton)?;
    let product = product_mdp(&m, &v, &a.lts, opts.max_product_states)?;
    let p = &product.mdp;
    let _ = writeln!(text, "product.states: {}", p.num_states());
    let mut any = false;
    for (k, pair) in lift_pairs(&product, &a.pairs).iter().enumerate() {
        let _ = writeln!(text, "pair.{k}.assumed: {}", a.assumed_text(&a.pairs[k].assumed));
        for (j, mec) in pair_mecs(p, pair)?.iter().enumerate() {
            let names = mec.component.states.iter().map(|&s| p.state_names[s].clone());
            let verdict = match &mec.verdict {
                MecVerdict::Accepting(sol) => {
                    any = true;
                    match &sol.slack {
                        Some(t) => format!("accepting (slack {})", fmt_approx(t)),
                        None => "accepting".into(),
                    }
                }
                MecVerdict::MissesInf(i) => format!("rejecting (misses INF {i})"),
                MecVerdict::Infeasible => "rejecting (flow program infeasible)".into(),
            };
            let _ = writeln!(text, "pair.{k}.mec.{j}: {} {verdict}", set(names));
            if *verbose {
                text.push_str(&flow_lp_text(&mec.mdp, &build_flow_lp(&mec.mdp, &mec.cond)));
            }
        }
    }
    Ok(Outcome {
        text,
        code: if any { 0 } else { 1 },
    })
}

fn simulate_cmd(cmd: &Command) -> Result<Outcome> {
    let Command::Simulate {
        model,
        formula,
        seed,
        steps,
        episodes,
        tolerance,
        limits,
    } = cmd
    else {
        unreachable!()
    };
    if *steps == 0 || *episodes == 0 {
        return Err(Error::Invalid("--steps and --episodes must be positive".into()));
    }
    let phi = load_formula(formula.formula.as_ref(), formula.formula_file.as_ref())?;
    let (m, v) = load_model(model)?;
    let s = synthesize(&m, &v, &phi, &Rational::default(), &limits.options(false)?)?;
    if s.analysis.union.winners.is_empty() {
        return Err(Error::Invalid("no strategy available: the formula holds with probability 0".into()));
    }
    let mut text = String::new();
    let _ = writeln!(text, "max_probability: {}", fmt_approx(&s.report.max_probability));
    let (mut entered, mut satisfied) = (0u64, 0u64);
    for e in 0..*episodes {
        let ep = s.simulate(*steps, seed.wrapping_add(e), *tolerance);
        entered += u64::from(ep.entered.is_some());
        satisfied += u64::from(ep.satisfied);
        let key = format!("episode.{e}");
        let Some((k, t)) = ep.entered else {
            let _ = writeln!(text, "{key}: never entered the winning states");
            continue;
        };
        let w = &s.analysis.union.winners[k];
        let stats = ep.stats.as_ref().expect("stats after entry");
        let names = w.component.states.iter().map(|&q| s.product.mdp.state_names[q].clone());
        let _ = writeln!(text, "{key}.entered: pair {} component {} at step {t}", w.pair, set(names));
        let _ = writeln!(
            text,
            "{key}.epochs: {} ({} visited every INF set)",
            stats.epochs, stats.epochs_visiting_all
        );
        for (b, got) in w.cond.mp_inf.iter().zip(&stats.inf_min) {
            let _ = writeln!(text, "{key}.mp_inf: least late average {got:.4} vs {} {}", b.cmp.symbol(), fmt_approx(&b.bound));
        }
        for (b, got) in w.cond.mp_sup.iter().zip(&stats.sup_max) {
            let _ = writeln!(text, "{key}.mp_sup: greatest average {got:.4} vs {} {}", b.cmp.symbol(), fmt_approx(&b.bound));
        }
        let _ = writeln!(text, "{key}.satisfied: {}", ep.satisfied);
    }
    let _ = writeln!(text, "episodes: {episodes}");
    let _ = writeln!(text, "entered: {entered}");
    let _ = writeln!(text, "satisfied: {satisfied}");
    Ok(Outcome {
        text,
        code: if satisfied > 0 { 0 } else { 1 },
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Synth { .. } => synth_cmd(&cli.command, err),
        Command::Automaton { .. } => automaton_cmd(&cli.command),
        Command::CheckWord { .. } => check_word_cmd(&cli.command),
        Command::Mec { .. } => mec_cmd(&cli.command),
        Command::Simulate { .. } => simulate_cmd(&cli.command),
    };
    match result {
        Ok(o) => {
            let _ = out.write_all(o.text.as_bytes());
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
