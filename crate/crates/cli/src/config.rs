//! Flat key-value experiment files for `mc --table custom`.
//!
//! Grammar (one entry per line, `#` starts a comment):
//!
//! ```text
//! distribution = ml | gml
//! replicates   = <positive integer>        # optional, flags override
//! seed         = <u64>                     # optional, flags override
//! estimators   = log,frac                  # subset, comma-separated
//! psi_mode     = accurate | paper          # optional
//! cell         = <param1> <param2> <n>     # repeated, one per cell
//! ```

use crate::Failure;
use mlefit::estimators::Method;
use mlefit::harness::{Cell, Distribution, ExperimentConfig};
use mlefit::special::PsiMode;
use std::path::Path;

pub struct FileConfig {
    pub distribution: Distribution,
    pub cells: Vec<Cell>,
    pub replicates: Option<usize>,
    pub seed: Option<u64>,
    pub estimators: Vec<Method>,
    pub psi_mode: Option<PsiMode>,
}

impl FileConfig {
    /// Merges file values with the command line: explicit flags win for
    /// replicates; the seed was already resolved by the caller.
    pub fn into_experiment(
        self,
        flag_replicates: usize,
        seed: u64,
        flag_psi_mode: PsiMode,
        flags_set_replicates: bool,
    ) -> ExperimentConfig {
        let replicates = if flags_set_replicates {
            flag_replicates
        } else {
            self.replicates.unwrap_or(flag_replicates)
        };
        ExperimentConfig {
            distribution: self.distribution,
            cells: self.cells,
            replicates,
            master_seed: seed,
            estimators: self.estimators,
            psi_mode: self.psi_mode.unwrap_or(flag_psi_mode),
        }
    }
}

pub fn parse_file(path: &Path) -> Result<FileConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    parse_str(&text)
}

fn parse_str(text: &str) -> Result<FileConfig, Failure> {
    let mut distribution = None;
    let mut cells = Vec::new();
    let mut replicates = None;
    let mut seed = None;
    let mut estimators = vec![Method::LogMoment, Method::FractionalMoment];
    let mut psi_mode = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Failure::usage(format!("config line {line_no}: expected key = value"))
        })?;
        let key = key.trim();
        let value = value.trim();
        let bad = |msg: String| Failure::usage(format!("config line {line_no}: {msg}"));
        match key {
            "distribution" => {
                distribution = Some(match value {
                    "ml" => Distribution::Ml,
                    "gml" => Distribution::Gml,
                    other => return Err(bad(format!("distribution must be ml or gml, got {other:?}"))),
                });
            }
            "replicates" => {
                replicates = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| bad(format!("bad replicates {value:?}")))?,
                );
            }
            "seed" => {
                seed = Some(
                    value
                        .parse::<u64>()
                        .map_err(|_| bad(format!("bad seed {value:?}")))?,
                );
            }
            "estimators" => {
                let mut set = Vec::new();
                for part in value.split(',') {
                    match part.trim() {
                        "log" => set.push(Method::LogMoment),
                        "frac" => set.push(Method::FractionalMoment),
                        other => return Err(bad(format!("unknown estimator {other:?}"))),
                    }
                }
                if set.is_empty() {
                    return Err(bad("estimators list is empty".to_string()));
                }
                estimators = set;
            }
            "psi_mode" => {
                psi_mode = Some(match value {
                    "accurate" => PsiMode::Accurate,
                    "paper" => PsiMode::PaperTruncated,
                    other => return Err(bad(format!("psi_mode must be accurate or paper, got {other:?}"))),
                });
            }
            "cell" => {
                let parts: Vec<&str> = value.split_whitespace().collect();
                if parts.len() != 3 {
                    return Err(bad(format!(
                        "cell needs `param1 param2 n`, got {value:?}"
                    )));
                }
                let param1: f64 = parts[0]
                    .parse()
                    .map_err(|_| bad(format!("bad param1 {:?}", parts[0])))?;
                let param2: f64 = parts[1]
                    .parse()
                    .map_err(|_| bad(format!("bad param2 {:?}", parts[1])))?;
                let n: usize = parts[2]
                    .parse()
                    .map_err(|_| bad(format!("bad n {:?}", parts[2])))?;
                cells.push(Cell { param1, param2, n });
            }
            other => return Err(bad(format!("unknown key {other:?}"))),
        }
    }

    let distribution =
        distribution.ok_or_else(|| Failure::usage("config is missing `distribution =`"))?;
    if cells.is_empty() {
        return Err(Failure::usage("config defines no `cell =` lines"));
    }
    Ok(FileConfig {
        distribution,
        cells,
        replicates,
        seed,
        estimators,
        psi_mode,
    })
}
