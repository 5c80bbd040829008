//! Power sweeps over (setting, dimension, method) cells, written as tidy CSV
//! plus plot-ready companions, with an on-disk journal so interrupted runs
//! resume where they stopped.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{invalid, Error, Result};

use super::methods::{Method, MethodConfig};
use super::power::{estimate_power, PowerReport};
use super::settings::{Setting, SimSetting};

pub const POWER_FILE: &str = "power.csv";
pub const BY_DIMENSION_FILE: &str = "power_by_dimension.csv";
pub const AVERAGES_FILE: &str = "power_averages.csv";
pub const JOURNAL_FILE: &str = "journal.txt";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub settings: Vec<Setting>,
    pub methods: Vec<Method>,
    pub dims: Vec<usize>,
    pub n: usize,
    pub replicates: usize,
    pub alpha: f64,
    pub methods_cfg: MethodConfig,
    pub seed: u64,
}

impl SweepConfig {
    /// The desk-scale study: all settings and methods, `p` in
    /// {1, 2, 5, 10, 20, 50, 100}, `n = 100`, 200 replicates, 100 trees.
    pub fn desk(seed: u64) -> Self {
        Self {
            settings: Setting::ALL.to_vec(),
            methods: Method::ALL.to_vec(),
            dims: vec![1, 2, 5, 10, 20, 50, 100],
            n: 100,
            replicates: 200,
            alpha: 0.05,
            methods_cfg: MethodConfig::desk(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.settings.is_empty() {
            return Err(invalid("settings", "list is empty"));
        }
        if self.methods.is_empty() {
            return Err(invalid("methods", "list is empty"));
        }
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(invalid("dims", "need at least one dimension, all >= 1"));
        }
        if self.n < 2 {
            return Err(invalid("n", "must be at least 2"));
        }
        if self.replicates < 20 {
            return Err(invalid("replicates", "must be at least 20"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(invalid("alpha", "must be in (0, 1)"));
        }
        self.methods_cfg.mix.validate()
    }

    /// Resolved configuration, one `key=value` per line.
    pub fn header(&self) -> Vec<String> {
        let join = |v: Vec<String>| v.join(";");
        let s = &self.methods_cfg.supervised;
        let u = &self.methods_cfg.unsupervised;
        vec![
            format!(
                "settings={}",
                join(self.settings.iter().map(|s| s.to_string()).collect())
            ),
            format!(
                "methods={}",
                join(self.methods.iter().map(|m| m.to_string()).collect())
            ),
            format!(
                "dims={}",
                join(self.dims.iter().map(|d| d.to_string()).collect())
            ),
            format!("n={}", self.n),
            format!("replicates={}", self.replicates),
            format!("alpha={}", self.alpha),
            format!(
                "srf: trees={} mtry={} min_leaf={} max_depth={:?} bootstrap={}",
                s.num_trees, s.mtry, s.min_leaf, s.max_depth, s.bootstrap
            ),
            format!(
                "urf: trees={} mtry={} min_leaf={} max_depth={:?} bootstrap={}",
                u.num_trees, u.mtry, u.min_leaf, u.max_depth, u.bootstrap
            ),
            format!(
                "pi={} r={}",
                self.methods_cfg.mix.pi, self.methods_cfg.mix.r
            ),
            format!(
                "noise={}",
                join(
                    self.settings
                        .iter()
                        .map(|&s| format!("{s}:{}", super::noise::default_noise(s, 1)))
                        .collect()
                ) + " (p=1; 0 above)"
            ),
            format!("seed={}", self.seed),
        ]
    }

    fn cells(&self) -> Vec<(Setting, usize, Method)> {
        let mut cells = Vec::new();
        for &s in &self.settings {
            for &p in &self.dims {
                for &m in &self.methods {
                    cells.push((s, p, m));
                }
            }
        }
        cells
    }
}

fn cell_key(setting: Setting, method: Method, p: usize, seed: u64) -> String {
    format!("{setting},{method},{p},{seed}")
}

/// Completed cells read back from a journal: key to hit count.
fn read_journal(path: &Path, fingerprint: &str) -> Result<HashMap<String, usize>> {
    let mut done = HashMap::new();
    if !path.exists() {
        return Ok(done);
    }
    let mut lines = BufReader::new(File::open(path)?).lines();
    match lines.next().transpose()? {
        Some(first) if first == fingerprint => {}
        None => return Ok(done),
        Some(_) => {
            return Err(Error::Config(format!(
                "{} was written by a different configuration; remove it or use another output directory",
                path.display()
            )))
        }
    }
    for line in lines {
        let line = line?;
        // a torn final line from an interrupted write is ignored
        let Some((key, hits)) = line.split_once('\t') else {
            continue;
        };
        let Ok(hits) = hits.parse() else { continue };
        done.insert(key.to_string(), hits);
    }
    Ok(done)
}

/// Results of a sweep in canonical cell order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub reports: Vec<PowerReport>,
    pub resumed_cells: usize,
}

impl SweepOutcome {
    /// Mean power of `method` on `setting` over the swept dimensions.
    pub fn setting_average(&self, setting: Setting, method: Method) -> Option<f64> {
        mean(
            self.reports
                .iter()
                .filter(|r| r.setting.setting == setting && r.method == method)
                .map(|r| r.power),
        )
    }

    /// Mean over settings of the per-setting averages.
    pub fn grand_average(&self, method: Method) -> Option<f64> {
        let mut settings: Vec<Setting> = self.reports.iter().map(|r| r.setting.setting).collect();
        settings.dedup();
        mean(
            settings
                .iter()
                .filter_map(|&s| self.setting_average(s, method)),
        )
    }
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

/// Run every cell not already in `out_dir`'s journal, then rewrite the three
/// result files from the complete set.
pub fn run_sweep(cfg: &SweepConfig, out_dir: &Path) -> Result<SweepOutcome> {
    run_sweep_with_progress(cfg, out_dir, |_| {})
}

pub fn run_sweep_with_progress(
    cfg: &SweepConfig,
    out_dir: &Path,
    mut progress: impl FnMut(&PowerReport),
) -> Result<SweepOutcome> {
    cfg.validate()?;
    fs::create_dir_all(out_dir)?;
    let header = cfg.header();
    let fingerprint = format!("# {}", header.join(" | "));
    let journal_path = out_dir.join(JOURNAL_FILE);
    let done = read_journal(&journal_path, &fingerprint)?;

    let mut journal = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&journal_path)?;
    if journal.metadata()?.len() == 0 {
        writeln!(journal, "{fingerprint}")?;
    }

    let mut reports = Vec::new();
    let mut resumed_cells = 0;
    for (setting, p, method) in cfg.cells() {
        let sim = SimSetting::new(setting, p)?;
        let key = cell_key(setting, method, p, cfg.seed);
        let report = if let Some(&hits) = done.get(&key) {
            resumed_cells += 1;
            PowerReport {
                setting: sim,
                method,
                n: cfg.n,
                replicates: cfg.replicates,
                alpha: cfg.alpha,
                hits,
                power: hits as f64 / cfg.replicates as f64,
                seed: cfg.seed,
            }
        } else {
            let report = estimate_power(
                &sim,
                method,
                cfg.n,
                cfg.replicates,
                cfg.alpha,
                &cfg.methods_cfg,
                cfg.seed,
            )?;
            writeln!(journal, "{key}\t{}", report.hits)?;
            journal.flush()?;
            report
        };
        progress(&report);
        reports.push(report);
    }

    let outcome = SweepOutcome {
        reports,
        resumed_cells,
    };
    write_outputs(cfg, &header, &outcome, out_dir)?;
    Ok(outcome)
}

fn create(path: PathBuf, header: &[String]) -> Result<BufWriter<File>> {
    let mut w = BufWriter::new(File::create(path)?);
    for line in header {
        writeln!(w, "# {line}")?;
    }
    Ok(w)
}

fn write_outputs(
    cfg: &SweepConfig,
    header: &[String],
    outcome: &SweepOutcome,
    dir: &Path,
) -> Result<()> {
    let mut w = create(dir.join(POWER_FILE), header)?;
    writeln!(w, "setting,method,n,p,noise,replicates,alpha,power,seed")?;
    for r in &outcome.reports {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.setting.setting,
            r.method,
            r.n,
            r.setting.p,
            r.setting.noise,
            r.replicates,
            r.alpha,
            r.power,
            r.seed
        )?;
    }
    w.flush()?;

    let method_cols: Vec<String> = cfg.methods.iter().map(|m| m.to_string()).collect();
    let mut w = create(dir.join(BY_DIMENSION_FILE), header)?;
    writeln!(w, "setting,p,{}", method_cols.join(","))?;
    for &s in &cfg.settings {
        for &p in &cfg.dims {
            let row: Vec<String> = cfg
                .methods
                .iter()
                .map(|&m| {
                    outcome
                        .reports
                        .iter()
                        .find(|r| r.setting.setting == s && r.setting.p == p && r.method == m)
                        .map_or(String::new(), |r| r.power.to_string())
                })
                .collect();
            writeln!(w, "{s},{p},{}", row.join(","))?;
        }
    }
    w.flush()?;

    let fmt = |v: Option<f64>| v.map_or(String::new(), |v| format!("{v:.4}"));
    let mut w = create(dir.join(AVERAGES_FILE), header)?;
    writeln!(w, "setting,{}", method_cols.join(","))?;
    for &s in &cfg.settings {
        let row: Vec<String> = cfg
            .methods
            .iter()
            .map(|&m| fmt(outcome.setting_average(s, m)))
            .collect();
        writeln!(w, "{s},{}", row.join(","))?;
    }
    let row: Vec<String> = cfg
        .methods
        .iter()
        .map(|&m| fmt(outcome.grand_average(m)))
        .collect();
    writeln!(w, "average,{}", row.join(","))?;
    w.flush()?;
    Ok(())
}
