use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::seeds::derive_seed;
use crate::error::{Error, Result};
use crate::lds::{read_point_file, Generator, GeneratorId, PointSet};
use crate::objectives::{lookup, ObjectiveSeeds};
use crate::stream::{Construction, SwarmMode};
use crate::swarm::{ClpsoSchedule, EngineSettings, PsoSchedule, DEFAULT_VELOCITY_FRACTION};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionEntry {
    pub id: String,
    pub dim: usize,
    /// Seeds default to values derived from the master seed and function id.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation_seed: Option<u64>,
}

impl FunctionEntry {
    pub fn seeds(&self, master: u64) -> ObjectiveSeeds {
        let d = self.dim.to_string();
        let derive = |purpose| derive_seed(master, &["function", &self.id, &d, purpose]);
        ObjectiveSeeds {
            shift: self.shift_seed.unwrap_or_else(|| derive("shift")),
            rotation: self.rotation_seed.unwrap_or_else(|| derive("rotation")),
            permutation: self.permutation_seed.unwrap_or_else(|| derive("permutation")),
        }
    }

    /// Directory and table label, unique per (id, dim).
    pub fn label(&self) -> String {
        format!("{}_d{}", self.id, self.dim)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineKind {
    Pso,
    Clpso,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerSpec {
    pub construction: Construction,
    /// Required for direct and combined constructions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_index: Option<u64>,
    /// Seed-set file for a combined construction with an external generator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_set_path: Option<PathBuf>,
}

impl SamplerSpec {
    pub fn generator_with_seed(&self, seed: u64) -> Option<Generator> {
        self.generator.map(|id| {
            let g = Generator::new(id, seed);
            match self.start_index {
                Some(s) => g.with_start_index(s),
                None => g,
            }
        })
    }

    pub fn load_seed_set(&self) -> Result<Option<PointSet>> {
        match (&self.seed_set_path, self.generator) {
            (Some(path), Some(GeneratorId::External)) => read_point_file(path).map(Some),
            _ => Ok(None),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmEntry {
    pub id: String,
    pub engine: EngineKind,
    pub sampler: SamplerSpec,
    #[serde(default)]
    pub pso: PsoSchedule,
    #[serde(default)]
    pub clpso: ClpsoSchedule,
}

impl AlgorithmEntry {
    pub fn settings(&self) -> EngineSettings {
        match self.engine {
            EngineKind::Pso => EngineSettings::Pso(self.pso),
            EngineKind::Clpso => EngineSettings::Clpso(self.clpso),
        }
    }

    pub fn mode(&self) -> SwarmMode {
        self.settings().mode()
    }
}

fn default_runs() -> usize {
    60
}

fn default_tolerances() -> Vec<f64> {
    vec![0.05, 0.01]
}

fn default_output() -> PathBuf {
    PathBuf::from("results")
}

fn default_velocity_fraction() -> f64 {
    DEFAULT_VELOCITY_FRACTION
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: String,
    pub master_seed: u64,
    pub n_particles: usize,
    pub horizon: usize,
    #[serde(default = "default_runs")]
    pub runs_per_cell: usize,
    #[serde(default = "default_tolerances")]
    pub tolerances: Vec<f64>,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    /// Worker threads; 0 uses every core.
    #[serde(default)]
    pub jobs: usize,
    #[serde(default = "default_velocity_fraction")]
    pub velocity_fraction: f64,
    pub functions: Vec<FunctionEntry>,
    pub algorithms: Vec<AlgorithmEntry>,
}

/// Reads and validates a TOML experiment file. Relative seed-set paths are
/// resolved against the file's directory.
pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut config: ExperimentConfig = toml::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let base = path.parent().unwrap_or(Path::new(""));
    for alg in &mut config.algorithms {
        if let Some(p) = &alg.sampler.seed_set_path {
            if p.is_relative() {
                alg.sampler.seed_set_path = Some(base.join(p));
            }
        }
    }
    config.validate()?;
    Ok(config)
}

fn check_label(kind: &str, label: &str) -> Result<()> {
    let ok = !label.is_empty()
        && label
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
        && !label.starts_with('.');
    if ok {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "{kind} id {label:?} must be non-empty and use only letters, digits, '_', '-' and '.'"
        )))
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.functions.is_empty() || self.algorithms.is_empty() {
            return fail("at least one function and one algorithm are required".into());
        }
        if self.runs_per_cell == 0 {
            return fail("runs_per_cell must be at least 1".into());
        }
        if self.horizon == 0 || self.n_particles == 0 {
            return fail("horizon and n_particles must be at least 1".into());
        }
        if let Some(t) = self.tolerances.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
            return fail(format!("tolerance {t} outside (0, 1)"));
        }
        if !(self.velocity_fraction > 0.0 && self.velocity_fraction.is_finite()) {
            return fail(format!("velocity_fraction must be positive, got {}", self.velocity_fraction));
        }
        let mut seen = HashSet::new();
        for f in &self.functions {
            check_label("function", &f.id)?;
            if !seen.insert(f.label()) {
                return fail(format!("function {} listed twice with dim {}", f.id, f.dim));
            }
            let def = lookup(&f.id).map_err(|e| Error::Config(e.to_string()))?;
            def.build(f.dim, f.seeds(self.master_seed))
                .map_err(|e| Error::Config(format!("function {}: {e}", f.id)))?;
        }
        let mut seen = HashSet::new();
        for a in &self.algorithms {
            check_label("algorithm", &a.id)?;
            if !seen.insert(a.id.as_str()) {
                return fail(format!("algorithm id {} listed twice", a.id));
            }
            if a.engine == EngineKind::Clpso && self.n_particles < 3 {
                return fail(format!("algorithm {}: CLPSO needs at least 3 particles", a.id));
            }
            self.validate_sampler(a).map_err(|e| match e {
                Error::Config(m) => Error::Config(format!("algorithm {}: {m}", a.id)),
                other => Error::Config(format!("algorithm {}: {other}", a.id)),
            })?;
        }
        Ok(())
    }

    fn validate_sampler(&self, a: &AlgorithmEntry) -> Result<()> {
        let s = &a.sampler;
        let blocks = a.mode().block_count(self.horizon);
        match s.construction {
            Construction::Random => {
                if s.generator.is_some_and(|g| g != GeneratorId::Uniform) {
                    return Err(Error::Config("random construction takes no generator".into()));
                }
            }
            Construction::DirectLds => {
                let g = s
                    .generator_with_seed(0)
                    .ok_or_else(|| Error::Config("direct construction needs a generator".into()))?;
                for f in &self.functions {
                    let total = blocks * f.dim;
                    if g.id == GeneratorId::External || g.id.max_dim().is_some_and(|m| total > m) {
                        return Err(Error::Config(format!(
                            "direct {} stream for {} needs {total} dimensions, generator supports {}",
                            g.id,
                            f.label(),
                            g.id.max_dim().map_or("any".to_string(), |m| m.to_string())
                        )));
                    }
                }
            }
            Construction::CombinedLds => {
                let id = s
                    .generator
                    .ok_or_else(|| Error::Config("combined construction needs a generator".into()))?;
                if id == GeneratorId::External {
                    let set = s
                        .load_seed_set()?
                        .ok_or_else(|| Error::Config("external generator needs seed_set_path".into()))?;
                    if set.n() != self.n_particles {
                        return Err(Error::Config(format!(
                            "seed set has {} points, n_particles is {}",
                            set.n(),
                            self.n_particles
                        )));
                    }
                    if let Some(f) = self.functions.iter().find(|f| f.dim != set.dim()) {
                        return Err(Error::Config(format!(
                            "seed set has {} dimensions, {} needs {}",
                            set.dim(),
                            f.label(),
                            f.dim
                        )));
                    }
                } else {
                    for f in &self.functions {
                        Generator::new(id, 0).generate(1, f.dim)?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
master_seed = 7
n_particles = 10
horizon = 20
runs_per_cell = 2

[[functions]]
id = "f03_rastrigin_sr"
dim = 2

[[algorithms]]
id = "rand"
engine = "pso"
sampler = { construction = "random" }

[[algorithms]]
id = "hss"
engine = "pso"
sampler = { construction = "combined", generator = "scrambled_halton" }
pso = { omega = { start = 0.7, end = 0.7 } }
"#;

    #[test]
    fn parses_defaults_and_overrides() {
        let c = ExperimentConfig::from_toml(BASE).unwrap();
        assert_eq!(c.tolerances, vec![0.05, 0.01]);
        assert_eq!(c.algorithms[1].sampler.construction, Construction::CombinedLds);
        assert_eq!(c.algorithms[1].pso.omega.start, 0.7);
        assert_eq!(c.algorithms[1].pso.c1, PsoSchedule::default().c1);
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = [
            BASE.replace("f03_rastrigin_sr", "nope"),
            BASE.replace("runs_per_cell = 2", "runs_per_cell = 0"),
            BASE.replace("horizon = 20", "horizon = 20\ntolerances = [1.5]"),
            BASE.replace("id = \"hss\"", "id = \"rand\""),
            BASE.replace("\"combined\", generator = \"scrambled_halton\"", "\"combined\""),
            BASE.replace("\"combined\", generator = \"scrambled_halton\"", "\"direct\", generator = \"sobol\"")
                .replace("horizon = 20", "horizon = 2000"),
            BASE.replace("n_particles", "particles"),
            BASE.replace("id = \"hss\"", "id = \"../x\""),
        ];
        for text in bad {
            assert!(ExperimentConfig::from_toml(&text).is_err(), "{text}");
        }
    }

    #[test]
    fn function_seeds_derive_from_master() {
        let c = ExperimentConfig::from_toml(BASE).unwrap();
        let s = c.functions[0].seeds(7);
        assert_eq!(s, c.functions[0].seeds(7));
        assert_ne!(s, c.functions[0].seeds(8));
        let mut f = c.functions[0].clone();
        f.shift_seed = Some(3);
        assert_eq!(f.seeds(7).shift, 3);
    }
}
