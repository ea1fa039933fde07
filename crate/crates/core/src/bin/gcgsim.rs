use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use gcgsim::categorial::parse_category_string;
use gcgsim::experiments::{
    default_share_series, emergence, gnuplot_blocks, language_share_series, learn_effect_traced, pref_evolution, render_wml_table,
    resolve_genome, wml_rank, EmergenceConfig, EmergenceMode, Format, LearnEffectConfig, PrefConfig, Report, WmlMode,
};
use gcgsim::language::{dump_language, enumerate_grammars, language_of, GrammarSpace, NamedLanguage};
use gcgsim::learner::{LearnerKind, SessionConfig};
use gcgsim::parser::parse;
use gcgsim::psetting::decode;

#[derive(Parser)]
#[command(name = "gcgsim", version, about = "Categorial-grammar learning and language-agent evolution experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Kind {
    Default,
    Unset,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Space {
    Ordering,
    Full,
}

#[derive(clap::Args)]
struct Output {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "jsonl")]
    format: Format,
}

#[derive(clap::Args)]
struct Population {
    #[arg(long)]
    cycles: Option<usize>,
    #[arg(long)]
    interactions: Option<usize>,
    #[arg(long)]
    population: Option<usize>,
    /// Gnuplot data file for the per-cycle series.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Inputs to convergence for single learner/adult sessions.
    LearnEffect {
        #[arg(long, default_value = "english")]
        language: String,
        #[arg(long, value_enum, default_value = "default")]
        kind: Kind,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        max_inputs: usize,
        /// Disable the working-memory gate on triggers.
        #[arg(long)]
        no_memory: bool,
        /// Per-trigger learning trace (JSON lines).
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Default against unset learners in an evolving population.
    PrefEvolution {
        #[arg(long, default_value = "english")]
        language: String,
        #[arg(long, value_enum, default_value = "both")]
        wml: WmlMode,
        #[arg(long, default_value_t = 5)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        population: Population,
        #[command(flatten)]
        output: Output,
    },
    /// Emergence of language from randomly initialised agents.
    Emergence {
        #[arg(long, value_enum, default_value = "seeded-german")]
        mode: EmergenceMode,
        #[arg(long, default_value_t = 5)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        mutation: Option<f64>,
        #[command(flatten)]
        population: Population,
        #[command(flatten)]
        output: Output,
    },
    /// Mean working-memory load per language, with pairwise ratios.
    WmlRank {
        /// Language names (optionally with -N, -Rc, -PP, -Sc, -GWP, -COMP
        /// suffixes), `mixed`, or genome files.
        #[arg(required = true)]
        languages: Vec<String>,
    },
    /// Parse a category string and print the load trace.
    Parse {
        /// Genome file or language name.
        #[arg(long, default_value = "english")]
        genome: String,
        /// e.g. 'NP (S\NP)/NP NP'
        categories: String,
    },
    /// Count distinct grammars in the parameter space.
    Enumerate {
        #[arg(long, value_enum, default_value = "ordering")]
        space: Space,
    },
    /// Print a genome in the text format read by `--genome`.
    Genome { language: String },
    /// Print the sentence types of a language.
    Dump { language: String },
}

fn write_out(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn language(name: &str) -> Result<NamedLanguage> {
    Ok(NamedLanguage::lookup(name)?)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::LearnEffect { language: l, kind, trials, seed, max_inputs, no_memory, trace, output } => {
            let kind = match kind {
                Kind::Default => LearnerKind::Default,
                Kind::Unset => LearnerKind::Unset,
            };
            let session = SessionConfig { max_inputs, memory_limited: !no_memory, ..SessionConfig::default() };
            let cfg = LearnEffectConfig { language: language(&l)?, kind, trials, seed, session };
            let (report, log) = learn_effect_traced(&cfg, trace.is_some())?;
            if let Some(p) = trace {
                let mut text = String::new();
                for r in &log {
                    text.push_str(&serde_json::to_string(r)?);
                    text.push('\n');
                }
                std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?;
            }
            write_out(&output, &report.render(output.format))?;
        }
        Command::PrefEvolution { language: l, wml, runs, seed, population, output } => {
            let mut cfg = PrefConfig::new(language(&l)?, wml, runs, seed);
            apply_population(&mut cfg.sim, &population);
            let report = pref_evolution(&cfg)?;
            if let Some(p) = &population.plot {
                std::fs::write(p, gnuplot_blocks(&default_share_series(&report.runs)))?;
            }
            write_out(&output, &report.render(output.format))?;
        }
        Command::Emergence { mode, runs, seed, mutation, population, output } => {
            let mut cfg = EmergenceConfig::new(mode, runs, seed);
            apply_population(&mut cfg.sim, &population);
            if let Some(m) = mutation {
                cfg.sim.mutation_prob = m;
            }
            let report = emergence(&cfg)?;
            if let Some(p) = &population.plot {
                let mut text = String::new();
                for r in &report.runs {
                    let series: Vec<_> =
                        language_share_series(&r.history).into_iter().map(|(label, pts)| (format!("run {} {label}", r.run), pts)).collect();
                    if !text.is_empty() && !series.is_empty() {
                        text.push_str("\n\n");
                    }
                    text.push_str(&gnuplot_blocks(&series));
                }
                std::fs::write(p, text)?;
            }
            write_out(&output, &report.render(output.format))?;
        }
        Command::WmlRank { languages } => {
            print!("{}", render_wml_table(&wml_rank(&languages)?));
        }
        Command::Parse { genome, categories } => {
            let g = decode(&resolve_genome(&genome)?)?;
            let cats = parse_category_string(&categories)?;
            let out = parse(&cats, &g.rules);
            print!("{}", out.render_table());
            if let Some(lf) = &out.lf {
                println!("LF: {lf}");
            }
            if !out.success {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Enumerate { space } => {
            let space = match space {
                Space::Ordering => GrammarSpace::Ordering,
                Space::Full => GrammarSpace::Full,
            };
            let e = enumerate_grammars(space);
            println!("genomes {}", e.genomes);
            println!("decodable {}", e.valid);
            println!("distinct {}", e.count());
            for (family, n) in e.families() {
                println!("  {family} {n}");
            }
        }
        Command::Genome { language } => {
            print!("{}", resolve_genome(&language)?.to_text());
        }
        Command::Dump { language } => {
            let lang = language_of(&resolve_genome(&language)?)?;
            print!("{}", dump_language(&lang));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn apply_population(sim: &mut gcgsim::evolution::SimConfig, p: &Population) {
    if let Some(c) = p.cycles {
        sim.cycles = c;
    }
    if let Some(i) = p.interactions {
        sim.interactions_per_cycle = i;
    }
    if let Some(n) = p.population {
        sim.population_size = n;
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
