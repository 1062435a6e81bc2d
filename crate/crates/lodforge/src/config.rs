//! Pipeline configuration file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use lodforge_core::audit::{AuditConfig, Axioms, LiteralRules, DEFAULT_SEED};
use lodforge_core::enrich::{EntityKind, VocabularyName, VocabularyTable};
use lodforge_core::mapping::rules::{Profile, RuleSet};
use lodforge_core::mapping::{MappingConfig, Serialization};
use lodforge_core::publish::VoidMetadata;
use lodforge_core::term::Iri;
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Invalid(String),
}

fn read(path: &Path) -> Result<String, ConfigError> {
    crate::input::read_text(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceKind {
    #[default]
    Marcxml,
    DublinCore,
}

impl std::str::FromStr for SourceKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "marcxml" | "marc" => Ok(SourceKind::Marcxml),
            "dublin-core" | "dc" | "dublincore" => Ok(SourceKind::DublinCore),
            other => Err(format!("unknown source kind {other:?} (expected marcxml or dublin-core)")),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InputSettings {
    pub paths: Vec<PathBuf>,
    pub source_kind: SourceKind,
    /// Element wrapping one Dublin Core record.
    pub container: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MappingSettings {
    pub base_uri: Option<String>,
    pub id_field: Option<String>,
    pub dc_url_patterns: BTreeMap<String, String>,
    pub ordinal_counts_control_fields: Option<bool>,
    pub admin_date: Option<String>,
    pub admin_source: Option<String>,
    pub marc_rules: Option<PathBuf>,
    pub dc_rules: Option<PathBuf>,
    pub languages: Option<PathBuf>,
    pub geographic_areas: Option<PathBuf>,
    pub relators: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnrichSettings {
    pub endpoint: Option<String>,
    pub fixture: Option<PathBuf>,
    pub accept_file: Option<PathBuf>,
    pub auto_accept: bool,
    pub concurrency: usize,
    pub timeout_secs: u64,
    pub floor: f64,
    pub kinds: Vec<String>,
}

impl Default for EnrichSettings {
    fn default() -> Self {
        EnrichSettings {
            endpoint: None,
            fixture: None,
            accept_file: None,
            auto_accept: false,
            concurrency: 4,
            timeout_secs: 10,
            floor: 0.4,
            kinds: vec!["agent".into()],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AuditSettings {
    pub gold: Vec<PathBuf>,
    pub reference: Option<PathBuf>,
    pub link_sample: usize,
    pub seed: u64,
    pub allow_network: bool,
    pub declared: BTreeMap<String, f64>,
    pub literal_rules: Option<PathBuf>,
    pub axioms: Option<PathBuf>,
}

impl Default for AuditSettings {
    fn default() -> Self {
        AuditSettings {
            gold: Vec::new(),
            reference: None,
            link_sample: 500,
            seed: DEFAULT_SEED,
            allow_network: false,
            declared: BTreeMap::new(),
            literal_rules: None,
            axioms: None,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PublishSettings {
    pub out: Option<PathBuf>,
    pub formats: Vec<String>,
    pub pin_modified: Option<String>,
    pub title: Option<String>,
    pub description: Option<String>,
    pub license: Option<String>,
    pub publisher: Option<String>,
    pub contributors: Vec<String>,
    pub sources: Vec<String>,
    pub dataset: Option<String>,
    /// Where dump files are served; defaults to the base URI.
    pub dump_base: Option<String>,
    pub example_resource: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    pub input: InputSettings,
    pub mapping: MappingSettings,
    pub enrich: EnrichSettings,
    pub audit: AuditSettings,
    pub publish: PublishSettings,
}

fn iri(field: &str, value: &str) -> Result<Iri, ConfigError> {
    Iri::new(value).map_err(|e| ConfigError::Invalid(format!("{field}: {e}")))
}

impl PipelineConfig {
    pub fn parse(text: &str, path: &Path) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse { path: path.to_path_buf(), message: e.to_string() })
    }

    /// Load a file; relative paths inside it are taken from its directory.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let mut cfg = Self::parse(&read(path)?, path)?;
        if let Some(dir) = path.parent() {
            cfg.rebase(dir);
        }
        Ok(cfg)
    }

    fn rebase(&mut self, dir: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        };
        let fix_opt = |p: &mut Option<PathBuf>| {
            if let Some(p) = p {
                if p.is_relative() {
                    *p = dir.join(&*p);
                }
            }
        };
        self.input.paths.iter_mut().for_each(fix);
        self.audit.gold.iter_mut().for_each(fix);
        let m = &mut self.mapping;
        for p in [&mut m.marc_rules, &mut m.dc_rules, &mut m.languages, &mut m.geographic_areas, &mut m.relators] {
            fix_opt(p);
        }
        fix_opt(&mut self.enrich.fixture);
        fix_opt(&mut self.enrich.accept_file);
        fix_opt(&mut self.audit.reference);
        fix_opt(&mut self.audit.literal_rules);
        fix_opt(&mut self.audit.axioms);
        fix_opt(&mut self.publish.out);
    }

    /// Checks that need no file access.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.formats()?;
        self.entity_kinds()?;
        if let Some(b) = &self.mapping.base_uri {
            MappingConfig::default().with_base_uri(b).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        let e = &self.enrich;
        if !(0.0..=1.0).contains(&e.floor) {
            return Err(ConfigError::Invalid("enrich.floor must lie in [0, 1]".into()));
        }
        if e.concurrency == 0 || e.timeout_secs == 0 {
            return Err(ConfigError::Invalid("enrich.concurrency and enrich.timeout_secs must be positive".into()));
        }
        if e.endpoint.is_some() && e.fixture.is_some() {
            return Err(ConfigError::Invalid("enrich.endpoint and enrich.fixture are exclusive".into()));
        }
        if self.audit.link_sample == 0 {
            return Err(ConfigError::Invalid("audit.link_sample must be positive".into()));
        }
        let mut probe = AuditConfig::default();
        for (id, score) in &self.audit.declared {
            probe.declare(id, *score).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        if let Some(d) = &self.publish.pin_modified {
            if chrono::NaiveDate::parse_from_str(d, "%Y-%m-%d").is_err() {
                return Err(ConfigError::Invalid(format!("publish.pin_modified {d:?} is not YYYY-MM-DD")));
            }
        }
        self.void_metadata_template()?;
        Ok(())
    }

    /// Output formats; Turtle when none are given.
    pub fn formats(&self) -> Result<Vec<Serialization>, ConfigError> {
        let mut out: Vec<Serialization> = Vec::new();
        for f in &self.publish.formats {
            let s: Serialization = f.parse().map_err(ConfigError::Invalid)?;
            if !out.contains(&s) {
                out.push(s);
            }
        }
        if out.is_empty() {
            out.push(Serialization::Turtle);
        }
        Ok(out)
    }

    pub fn entity_kinds(&self) -> Result<Vec<EntityKind>, ConfigError> {
        self.enrich.kinds.iter().map(|k| k.parse().map_err(ConfigError::Invalid)).collect()
    }

    pub fn mapping_config(&self) -> Result<MappingConfig, ConfigError> {
        let m = &self.mapping;
        let mut cfg = MappingConfig::default();
        let invalid = |e: lodforge_core::mapping::MappingError| ConfigError::Invalid(e.to_string());
        if let Some(b) = &m.base_uri {
            cfg.set_base_uri(b).map_err(invalid)?;
        }
        if let Some(id) = &m.id_field {
            cfg.id_field = id.clone();
        }
        for (kind, template) in &m.dc_url_patterns {
            cfg.set_dc_url_pattern(kind, template).map_err(invalid)?;
        }
        if let Some(v) = m.ordinal_counts_control_fields {
            cfg.ordinal_counts_control_fields = v;
        }
        cfg.admin_date = m.admin_date.clone();
        if let Some(s) = &m.admin_source {
            cfg.admin_source = s.clone();
        }
        cfg.serialization = self.formats()?[0];
        let rules = |path: &Path, profile: Profile| {
            RuleSet::parse(profile, &read(path)?)
                .map_err(|e| ConfigError::Parse { path: path.to_path_buf(), message: e.to_string() })
        };
        if let Some(p) = &m.marc_rules {
            cfg.marc_rules = rules(p, Profile::Marc)?;
        }
        if let Some(p) = &m.dc_rules {
            cfg.dc_rules = rules(p, Profile::DublinCore)?;
        }
        let table = |path: &Path, name: VocabularyName| {
            VocabularyTable::parse(name, &read(path)?)
                .map_err(|e| ConfigError::Parse { path: path.to_path_buf(), message: e.to_string() })
        };
        if let Some(p) = &m.languages {
            cfg.vocabularies.languages = table(p, VocabularyName::Languages)?;
        }
        if let Some(p) = &m.geographic_areas {
            cfg.vocabularies.geographic_areas = table(p, VocabularyName::GeographicAreas)?;
        }
        if let Some(p) = &m.relators {
            cfg.vocabularies.relators = table(p, VocabularyName::Relators)?;
        }
        Ok(cfg)
    }

    pub fn audit_config(&self, mapping: &MappingConfig) -> Result<AuditConfig, ConfigError> {
        let a = &self.audit;
        let mut cfg = AuditConfig::from_mapping(mapping);
        cfg.formats = self.formats()?;
        cfg.link_sample_size = a.link_sample;
        cfg.seed = a.seed;
        for (id, score) in &a.declared {
            cfg.declare(id, *score).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        let parse_err = |path: &Path, e: lodforge_core::audit::AuditError| ConfigError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        if let Some(p) = &a.literal_rules {
            cfg.literal_rules = LiteralRules::parse(&read(p)?).map_err(|e| parse_err(p, e))?;
        }
        if let Some(p) = &a.axioms {
            cfg.axioms = Axioms::parse(&read(p)?).map_err(|e| parse_err(p, e))?;
        }
        Ok(cfg)
    }

    /// Dataset metadata from the publish section, without the parts that
    /// depend on the graph or the clock.
    pub fn void_metadata_template(&self) -> Result<VoidMetadata, ConfigError> {
        let p = &self.publish;
        let opt = |field: &str, v: &Option<String>| v.as_deref().map(|v| iri(field, v)).transpose();
        let list = |field: &str, v: &[String]| v.iter().map(|x| iri(field, x)).collect::<Result<Vec<_>, _>>();
        Ok(VoidMetadata {
            dataset: opt("publish.dataset", &p.dataset)?,
            title: p.title.clone().unwrap_or_default(),
            description: p.description.clone(),
            license: opt("publish.license", &p.license)?,
            publisher: opt("publish.publisher", &p.publisher)?,
            contributors: list("publish.contributors", &p.contributors)?,
            sources: list("publish.sources", &p.sources)?,
            modified: p.pin_modified.clone(),
            features: Vec::new(),
            data_dumps: Vec::new(),
            example_resource: opt("publish.example_resource", &p.example_resource)?,
        })
    }

    /// Prefix under which dump files are announced.
    pub fn dump_base(&self, mapping: &MappingConfig) -> String {
        self.publish.dump_base.clone().unwrap_or_else(|| mapping.base_uri().as_str().to_owned())
    }
}
