use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use chowtree::chow::{cycle_class, orbit_class, separates_boundary};
use chowtree::contraction::{configuration_cycle, contract, ConfigurationCycle};
use chowtree::curves::{chow_form_111, chow_form_of_cycle, limit_chow_form, separates, triple_invariant};
use chowtree::degeneration::{check_limit_compatibility, limit_tree, FamilyConfiguration};
use chowtree::trees::random_tree;
use chowtree::{Configuration, Error, StableTree, StratumShape};

#[derive(Parser)]
#[command(name = "chowtree", version, about = "Exact computations on stable rooted trees of pointed projective spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Tree file; `separate` takes two.
    #[arg(long, global = true)]
    tree: Vec<PathBuf>,
    /// Configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Polynomial family file.
    #[arg(long, global = true)]
    family: Option<PathBuf>,
    /// Configuration cycle file.
    #[arg(long, global = true)]
    cycle: Option<PathBuf>,
    /// Three labels, e.g. `1,2,3`.
    #[arg(long, global = true)]
    triple: Option<String>,
    #[arg(long, global = true)]
    vertex: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 3)]
    trials: usize,
    #[arg(long, global = true)]
    count: Option<usize>,
    #[arg(long, global = true)]
    d: Option<usize>,
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Check the stability conditions of a tree.
    Validate,
    /// Component configuration of one vertex.
    Contract,
    /// Configuration cycle of a tree.
    Cycle,
    /// Künneth class of a configuration, cycle, or tree.
    Class,
    /// Limit tree of a family.
    Limit,
    /// Compare rescaled limits with the component configurations of the limit tree.
    CheckLimit,
    /// Triple invariant of a line tree.
    Forget,
    /// Whether two trees are told apart.
    Separate,
    /// Multidegree (1,1,1) form of a configuration, cycle, or line family.
    Chowform,
    /// Check that random trees have all class coefficients equal to 1.
    AllOnes,
}

enum Failure {
    Malformed(String),
    Module(Error),
    /// The command ran but the checked property did not hold.
    Rejected(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(msg) => Failure::Malformed(msg),
            other => Failure::Module(other),
        }
    }
}

type Outcome = Result<String, Failure>;

fn read<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        Failure::Malformed(format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column()))
    })
}

fn need<'a, T>(value: &'a Option<T>, flag: &str) -> Result<&'a T, Failure> {
    value.as_ref().ok_or_else(|| Failure::Malformed(format!("missing --{flag}")))
}

fn one_tree(cli: &Cli) -> Result<StableTree, Failure> {
    match cli.tree.as_slice() {
        [path] => read(path),
        [] => Err(Failure::Malformed("missing --tree".into())),
        _ => Err(Failure::Malformed("expected exactly one --tree".into())),
    }
}

fn json<T: Serialize>(value: &T) -> Outcome {
    serde_json::to_string_pretty(value).map_err(|e| Failure::Malformed(e.to_string()))
}

fn parse_triple(s: &str) -> Result<[usize; 3], Failure> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Malformed(format!("--triple {s:?}: {e}")))?;
    parts.try_into().map_err(|_| Failure::Malformed(format!("--triple {s:?}: expected three labels")))
}

fn run(cli: &Cli) -> Outcome {
    match cli.command {
        Command::Validate => {
            let tree = one_tree(cli)?;
            match tree.validate() {
                Ok(()) => Ok("Valid".into()),
                Err(violations) => {
                    let lines: Vec<String> = violations.iter().map(|v| format!("  {v}")).collect();
                    Err(Failure::Rejected(format!("Invalid\n{}", lines.join("\n"))))
                }
            }
        }
        Command::Contract => {
            let tree = one_tree(cli)?;
            tree.ensure_valid()?;
            json(&contract(&tree, *need(&cli.vertex, "vertex")?)?)
        }
        Command::Cycle => json(&configuration_cycle(&one_tree(cli)?)?),
        Command::Class => {
            let class = if let Some(path) = &cli.config {
                orbit_class(&read::<Configuration>(path)?, cli.trials, cli.seed)?
            } else if let Some(path) = &cli.cycle {
                cycle_class(&read::<ConfigurationCycle>(path)?, cli.trials, cli.seed)?
            } else {
                cycle_class(&configuration_cycle(&one_tree(cli)?)?, cli.trials, cli.seed)?
            };
            json(&class)
        }
        Command::Limit => json(&limit_tree(&read::<FamilyConfiguration>(need(&cli.family, "family")?)?)?),
        Command::CheckLimit => {
            let f: FamilyConfiguration = read(need(&cli.family, "family")?)?;
            if check_limit_compatibility(&f)? {
                Ok("true".into())
            } else {
                Err(Failure::Rejected("false".into()))
            }
        }
        Command::Forget => {
            let tree = one_tree(cli)?;
            let triple = parse_triple(need(&cli.triple, "triple")?)?;
            json(&triple_invariant(&tree, triple)?)
        }
        Command::Separate => {
            let [a, b] = cli.tree.as_slice() else {
                return Err(Failure::Malformed("separate needs exactly two --tree files".into()));
            };
            let (t1, t2): (StableTree, StableTree) = (read(a)?, read(b)?);
            let apart = if t1.d == 1 && t2.d == 1 { separates(&t1, &t2)? } else { separates_boundary(&t1, &t2)? };
            Ok(apart.to_string())
        }
        Command::Chowform => {
            let form = if let Some(path) = &cli.config {
                chow_form_111(&read::<Configuration>(path)?)?
            } else if let Some(path) = &cli.cycle {
                chow_form_of_cycle(&read::<ConfigurationCycle>(path)?)?
            } else if let Some(path) = &cli.family {
                limit_chow_form(&read::<FamilyConfiguration>(path)?)?
            } else {
                chow_form_of_cycle(&configuration_cycle(&one_tree(cli)?)?)?
            };
            json(&form)
        }
        Command::AllOnes => {
            let d = *need(&cli.d, "d")?;
            let n = *need(&cli.n, "n")?;
            let count = cli.count.unwrap_or(50);
            let shapes = StratumShape::enumerate(n);
            if shapes.is_empty() {
                return Err(Failure::Module(Error::InvalidShape(format!("no strata for n = {n}"))));
            }
            let mut pass = 0;
            for i in 0..count {
                let seed = cli.seed.wrapping_add(i as u64);
                let tree = random_tree(d, n, &shapes[i % shapes.len()], seed)?;
                if cycle_class(&configuration_cycle(&tree)?, cli.trials, seed)?.is_all_ones() {
                    pass += 1;
                }
            }
            let line = format!("{pass}/{count} pass");
            if pass == count {
                Ok(line)
            } else {
                Err(Failure::Rejected(line))
            }
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|text| emit(&cli, &text));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rejected(text)) => {
            println!("{text}");
            ExitCode::from(1)
        }
        Err(Failure::Module(e)) => {
            eprintln!("{}: {e}", e.name());
            ExitCode::from(1)
        }
        Err(Failure::Malformed(msg)) => {
            eprintln!("MalformedInput: {msg}");
            ExitCode::from(2)
        }
    }
}
