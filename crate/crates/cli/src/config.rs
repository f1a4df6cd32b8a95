//! Job configuration schema: TOML for human-authored files, JSON for
//! programmatic ones, both mapping to the same structure. Unknown keys are
//! rejected and every angle string is parsed against the declared basis at
//! load time.

use etale_core::angle::{ExactAngle, IrrationalBasis};
use etale_core::cohomology::{Bicharacter, Cocycle2, OneCochain};
use etale_core::graph::{EdgeLabeling, Graph, ProductSystem};
use etale_core::groupoid::CocycleSpec;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Simplicity,
    CrossedProduct,
    Cohomology,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisConfig {
    pub generators: Vec<GeneratorConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub symbol: String,
    pub approx: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeConfig {
    pub name: String,
    pub o: String,
    pub t: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentConfig {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub components: Vec<ComponentConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainEntry {
    pub vector: Vec<i64>,
    pub value: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CocycleVariant {
    Degree,
    LabelCrossed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleConfig {
    pub variant: CocycleVariant,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cochain: Option<Vec<CochainEntry>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsConfig {
    pub prefix_len: usize,
    pub cycle_len: usize,
    pub degree: i64,
    pub epsilon: f64,
    pub samples: usize,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self {
            prefix_len: 4,
            cycle_len: 4,
            degree: 4,
            epsilon: 0.05,
            samples: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub mode: Mode,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<CocycleConfig>,
    #[serde(default)]
    pub bounds: BoundsConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Toml,
    Json,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("toml parse error: {0}")]
    Toml(String),
    #[error("json parse error: {0}")]
    Json(String),
    #[error("field `{field}`: {problem}")]
    Invalid { field: String, problem: String },
}

impl ConfigError {
    fn invalid(field: &str, problem: impl ToString) -> Self {
        Self::Invalid {
            field: field.to_string(),
            problem: problem.to_string(),
        }
    }
}

/// Parse a config document in the given format; unknown keys are rejected.
pub fn parse_config(text: &str, format: Format) -> Result<JobConfig, ConfigError> {
    match format {
        Format::Toml => toml::from_str(text).map_err(|e| ConfigError::Toml(e.to_string())),
        Format::Json => serde_json::from_str(text).map_err(|e| ConfigError::Json(e.to_string())),
    }
}

/// Everything the runner needs, resolved from a validated config.
pub struct ResolvedJob {
    pub config: JobConfig,
    pub basis: IrrationalBasis,
    pub system: Option<ProductSystem>,
    pub cocycle: Option<Cocycle2>,
    pub spec: Option<CocycleSpec>,
}

pub fn resolve(config: JobConfig) -> Result<ResolvedJob, ConfigError> {
    let basis = match &config.basis {
        None => IrrationalBasis::empty(),
        Some(b) => IrrationalBasis::new(
            b.generators
                .iter()
                .map(|g| (g.symbol.clone(), g.approx))
                .collect(),
        )
        .map_err(|e| ConfigError::invalid("basis.generators", e))?,
    };

    let system = match &config.system {
        None => None,
        Some(sys) => {
            if sys.components.is_empty() {
                return Err(ConfigError::invalid(
                    "system.components",
                    "at least one component is required",
                ));
            }
            let mut components = Vec::new();
            for (i, comp) in sys.components.iter().enumerate() {
                let field = format!("system.components[{i}]");
                let graph = Graph::new(
                    comp.vertices.clone(),
                    comp.edges
                        .iter()
                        .map(|e| (e.name.clone(), e.o.clone(), e.t.clone()))
                        .collect(),
                )
                .map_err(|e| ConfigError::invalid(&field, e))?;
                let labeled = comp.edges.iter().any(|e| e.label.is_some());
                let labeling = if labeled {
                    let mut labels = Vec::new();
                    for e in &comp.edges {
                        let text = e.label.as_ref().ok_or_else(|| {
                            ConfigError::invalid(
                                &format!("{field}.edges.{}.label", e.name),
                                "labelings must be total: this edge has no label",
                            )
                        })?;
                        let angle = ExactAngle::parse(text, &basis).map_err(|err| {
                            ConfigError::invalid(
                                &format!("{field}.edges.{}.label", e.name),
                                err,
                            )
                        })?;
                        labels.push(angle);
                    }
                    Some(
                        EdgeLabeling::new(&graph, labels)
                            .map_err(|e| ConfigError::invalid(&field, e))?,
                    )
                } else {
                    None
                };
                components.push((graph, labeling));
            }
            Some(ProductSystem::new(components))
        }
    };

    let cocycle = match &config.cocycle {
        None => None,
        Some(c) if c.variant == CocycleVariant::Degree => {
            let rank = c
                .rank
                .ok_or_else(|| ConfigError::invalid("cocycle.rank", "required for degree"))?;
            let pairing_rows = c.pairing.as_ref().ok_or_else(|| {
                ConfigError::invalid("cocycle.pairing", "required for degree")
            })?;
            if pairing_rows.len() != rank || pairing_rows.iter().any(|r| r.len() != rank) {
                return Err(ConfigError::invalid(
                    "cocycle.pairing",
                    format!("must be a {rank}x{rank} matrix"),
                ));
            }
            let mut pairing = Vec::new();
            for (i, row) in pairing_rows.iter().enumerate() {
                let mut out = Vec::new();
                for (j, entry) in row.iter().enumerate() {
                    out.push(ExactAngle::parse(entry, &basis).map_err(|e| {
                        ConfigError::invalid(&format!("cocycle.pairing[{i}][{j}]"), e)
                    })?);
                }
                pairing.push(out);
            }
            let cochain = match &c.cochain {
                None => None,
                Some(entries) => {
                    let mut values = BTreeMap::new();
                    for (i, entry) in entries.iter().enumerate() {
                        if entry.vector.len() != rank {
                            return Err(ConfigError::invalid(
                                &format!("cocycle.cochain[{i}].vector"),
                                format!("must have length {rank}"),
                            ));
                        }
                        let angle = ExactAngle::parse(&entry.value, &basis).map_err(|e| {
                            ConfigError::invalid(&format!("cocycle.cochain[{i}].value"), e)
                        })?;
                        values.insert(entry.vector.clone(), angle);
                    }
                    Some(OneCochain::new(rank, values))
                }
            };
            Some(Cocycle2::new(Bicharacter::new(pairing), cochain))
        }
        Some(_) => None,
    };

    let spec = match &config.cocycle {
        None => None,
        Some(c) => match c.variant {
            CocycleVariant::Degree => cocycle.clone().map(CocycleSpec::Degree),
            CocycleVariant::LabelCrossed => Some(CocycleSpec::LabelCrossed),
        },
    };

    Ok(ResolvedJob {
        config,
        basis,
        system,
        cocycle,
        spec,
    })
}

/// Apply environment overrides (prefix `ETALE_`) and flag overrides to the
/// bounds; flags win over the environment, which wins over the file.
pub fn apply_overrides(
    bounds: &mut BoundsConfig,
    seed: &mut u64,
    depth: Option<usize>,
    epsilon: Option<f64>,
    samples: Option<usize>,
    seed_flag: Option<u64>,
) -> Result<(), ConfigError> {
    let env = |name: &str| std::env::var(format!("ETALE_{name}")).ok();
    if let Some(v) = env("PREFIX_LEN") {
        bounds.prefix_len = v
            .parse()
            .map_err(|_| ConfigError::invalid("ETALE_PREFIX_LEN", "not an integer"))?;
    }
    if let Some(v) = env("CYCLE_LEN") {
        bounds.cycle_len = v
            .parse()
            .map_err(|_| ConfigError::invalid("ETALE_CYCLE_LEN", "not an integer"))?;
    }
    if let Some(v) = env("DEGREE") {
        bounds.degree = v
            .parse()
            .map_err(|_| ConfigError::invalid("ETALE_DEGREE", "not an integer"))?;
    }
    if let Some(v) = env("EPSILON") {
        bounds.epsilon = v
            .parse()
            .map_err(|_| ConfigError::invalid("ETALE_EPSILON", "not a number"))?;
    }
    if let Some(v) = env("SAMPLES") {
        bounds.samples = v
            .parse()
            .map_err(|_| ConfigError::invalid("ETALE_SAMPLES", "not an integer"))?;
    }
    if let Some(v) = env("SEED") {
        *seed = v
            .parse()
            .map_err(|_| ConfigError::invalid("ETALE_SEED", "not an integer"))?;
    }
    if let Some(d) = depth {
        bounds.prefix_len = d;
        bounds.cycle_len = d;
    }
    if let Some(e) = epsilon {
        bounds.epsilon = e;
    }
    if let Some(s) = samples {
        bounds.samples = s;
    }
    if let Some(s) = seed_flag {
        *seed = s;
    }
    Ok(())
}
