use std::collections::HashSet;
use std::path::Path;

use clap::Parser;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::{Cli, Command, ExperimentArgs};
use crate::{execute, CliError, CliResult, Output};

/// A declarative list of invocations sharing one seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Recipe {
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub runs: Vec<RecipeRun>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecipeRun {
    pub name: String,
    /// Subcommand and its flags, without the program name.
    pub args: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub file: Option<String>,
    pub status: String,
    pub exit_code: i32,
    pub error: Option<Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub recipe: String,
    pub seed: u64,
    pub runs: Vec<ManifestEntry>,
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) && !s.starts_with('.')
}

fn argv_for(parent: &Cli, seed: u64, run: &RecipeRun) -> Vec<String> {
    let mut argv = vec!["degseq".to_string()];
    if let Some(t) = parent.threads {
        argv.extend(["--threads".into(), t.to_string()]);
    }
    if parent.sequential {
        argv.push("--sequential".into());
    }
    argv.extend(["--cap".into(), parent.cap.to_string()]);
    if !run.args.iter().any(|a| a == "--seed" || a.starts_with("--seed=")) {
        argv.extend(["--seed".into(), seed.to_string()]);
    }
    argv.extend(run.args.iter().cloned());
    argv
}

fn run_one(parent: &Cli, seed: u64, run: &RecipeRun, out: &Path) -> CliResult<String> {
    let cli = Cli::try_parse_from(argv_for(parent, seed, run)).map_err(|e| CliError::Parse(e.to_string().trim_end().into()))?;
    if matches!(cli.command, Command::Experiment(_)) {
        return Err(CliError::Parse("recipes cannot nest experiments".into()));
    }
    let (report, _) = execute(&cli)?;
    let file = format!("{}.json", run.name);
    std::fs::write(out.join(&file), serde_json::to_string_pretty(&report).expect("serializable") + "\n")?;
    Ok(file)
}

pub(crate) fn run(parent: &Cli, a: &ExperimentArgs) -> CliResult<Output> {
    let text = std::fs::read_to_string(&a.recipe).map_err(|e| CliError::Parse(format!("{}: {e}", a.recipe.display())))?;
    let recipe: Recipe = serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("recipe: {e}")))?;
    let mut seen = HashSet::new();
    for r in &recipe.runs {
        if !valid_name(&r.name) {
            return Err(CliError::Parse(format!("run name {:?} must be [A-Za-z0-9_.-]+", r.name)));
        }
        if !seen.insert(r.name.as_str()) {
            return Err(CliError::Parse(format!("duplicate run name {:?}", r.name)));
        }
    }
    std::fs::create_dir_all(&a.out)?;
    let seed = recipe.seed.unwrap_or(parent.seed);
    let runs = recipe
        .runs
        .iter()
        .map(|r| match run_one(parent, seed, r, &a.out) {
            Ok(file) => ManifestEntry {
                name: r.name.clone(),
                file: Some(file),
                status: "ok".into(),
                exit_code: 0,
                error: None,
            },
            Err(e) => ManifestEntry {
                name: r.name.clone(),
                file: None,
                status: "error".into(),
                exit_code: e.exit_code(),
                error: Some(e.to_json()["error"].clone()),
            },
        })
        .collect();
    let manifest = Manifest {
        recipe: a.recipe.display().to_string(),
        seed,
        runs,
    };
    let value = serde_json::to_value(&manifest).expect("serializable");
    std::fs::write(a.out.join("manifest.json"), serde_json::to_string_pretty(&value).expect("serializable") + "\n")?;
    Ok(Output::json(value))
}
