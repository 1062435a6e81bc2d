//! Source record types and profiling.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordError {
    #[error("invalid field tag {0:?}")]
    Tag(String),
    #[error("data field {0} has no subfields")]
    NoSubfields(String),
}

fn valid_tag(tag: &str) -> bool {
    tag.len() == 3 && tag.bytes().all(|b| b.is_ascii_digit())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ControlField {
    pub tag: String,
    pub value: String,
    pub ordinal: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subfield {
    pub code: char,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DataField {
    pub tag: String,
    pub indicator1: char,
    pub indicator2: char,
    pub subfields: Vec<Subfield>,
    pub ordinal: u32,
}

impl Subfield {
    pub fn new(code: char, value: impl Into<String>) -> Self {
        Subfield { code, value: value.into() }
    }
}

impl DataField {
    /// First value of a subfield code.
    pub fn subfield(&self, code: char) -> Option<&str> {
        self.subfields.iter().find(|s| s.code == code).map(|s| s.value.as_str())
    }

    pub fn subfields_of(&self, code: char) -> impl Iterator<Item = &str> {
        self.subfields.iter().filter(move |s| s.code == code).map(|s| s.value.as_str())
    }

    /// Values of the listed codes in field order, joined with a space.
    pub fn join(&self, codes: &[char]) -> String {
        let mut out = String::new();
        for s in self.subfields.iter().filter(|s| codes.contains(&s.code)) {
            let v = s.value.trim();
            if v.is_empty() {
                continue;
            }
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(v);
        }
        out
    }
}

/// A MARC bibliographic record. Fields are pushed in document order and
/// receive 1-based ordinals as they arrive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarcRecord {
    pub leader: String,
    pub control_fields: Vec<ControlField>,
    pub data_fields: Vec<DataField>,
    #[serde(skip)]
    counts_control: bool,
    #[serde(skip)]
    next_ordinal: u32,
}

impl MarcRecord {
    pub fn new(leader: impl Into<String>) -> Self {
        Self::with_ordinals(leader, true)
    }

    /// `counts_control_fields = false` numbers data fields only.
    pub fn with_ordinals(leader: impl Into<String>, counts_control_fields: bool) -> Self {
        MarcRecord {
            leader: leader.into(),
            control_fields: Vec::new(),
            data_fields: Vec::new(),
            counts_control: counts_control_fields,
            next_ordinal: 1,
        }
    }

    pub fn push_control(&mut self, tag: &str, value: impl Into<String>) -> Result<(), RecordError> {
        if !valid_tag(tag) {
            return Err(RecordError::Tag(tag.into()));
        }
        let ordinal = if self.counts_control {
            self.next_ordinal += 1;
            self.next_ordinal - 1
        } else {
            0
        };
        self.control_fields.push(ControlField { tag: tag.into(), value: value.into(), ordinal });
        Ok(())
    }

    pub fn push_data(
        &mut self,
        tag: &str,
        indicator1: char,
        indicator2: char,
        subfields: Vec<Subfield>,
    ) -> Result<(), RecordError> {
        if !valid_tag(tag) {
            return Err(RecordError::Tag(tag.into()));
        }
        if subfields.is_empty() {
            return Err(RecordError::NoSubfields(tag.into()));
        }
        let ordinal = self.next_ordinal;
        self.next_ordinal += 1;
        self.data_fields.push(DataField { tag: tag.into(), indicator1, indicator2, subfields, ordinal });
        Ok(())
    }

    /// Position the next pushed field will receive.
    pub fn next_ordinal(&self) -> u32 {
        self.next_ordinal
    }

    pub fn control(&self, tag: &str) -> Option<&ControlField> {
        self.control_fields.iter().find(|c| c.tag == tag)
    }

    pub fn fields<'a>(&'a self, tag: &str) -> impl Iterator<Item = &'a DataField> + use<'a> {
        let tag: String = tag.into();
        self.data_fields.iter().filter(move |f| f.tag == tag)
    }

    /// Look up an identifier selector: `001` (control field) or `035$a`.
    /// Returns the trimmed value with the tag and ordinal that carried it.
    pub fn identifier<'a>(&'a self, selector: &str) -> Option<(&'a str, &'a str, u32)> {
        match selector.split_once('$') {
            None => self
                .control(selector)
                .map(|c| (c.value.trim(), c.tag.as_str(), c.ordinal))
                .filter(|(v, _, _)| !v.is_empty()),
            Some((tag, code)) => {
                let code = code.chars().next()?;
                self.data_fields.iter().filter(|f| f.tag == tag).find_map(|f| {
                    f.subfield(code).map(str::trim).filter(|v| !v.is_empty()).map(|v| (v, f.tag.as_str(), f.ordinal))
                })
            }
        }
    }

    pub fn record_type(&self) -> RecordType {
        RecordType::from_leader(&self.leader)
    }
}

/// Resource type from leader position 06.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecordType {
    Text,
    NotatedMusic,
    Cartography,
    MovingImage,
    Audio,
    StillImage,
    Multimedia,
    Kit,
    MixedMaterial,
    Object,
    Unknown,
}

impl RecordType {
    pub fn from_leader(leader: &str) -> Self {
        match leader.as_bytes().get(6) {
            Some(b'a' | b't') => RecordType::Text,
            Some(b'c' | b'd') => RecordType::NotatedMusic,
            Some(b'e' | b'f') => RecordType::Cartography,
            Some(b'g') => RecordType::MovingImage,
            Some(b'i' | b'j') => RecordType::Audio,
            Some(b'k') => RecordType::StillImage,
            Some(b'm') => RecordType::Multimedia,
            Some(b'o') => RecordType::Kit,
            Some(b'p') => RecordType::MixedMaterial,
            Some(b'r') => RecordType::Object,
            _ => RecordType::Unknown,
        }
    }

    /// BIBFRAME Work subclass local name, if any.
    pub fn bibframe_class(self) -> Option<&'static str> {
        Some(match self {
            RecordType::Text => "Text",
            RecordType::NotatedMusic => "NotatedMusic",
            RecordType::Cartography => "Cartography",
            RecordType::MovingImage => "MovingImage",
            RecordType::Audio => "Audio",
            RecordType::StillImage => "StillImage",
            RecordType::Multimedia => "Multimedia",
            RecordType::Kit => "Kit",
            RecordType::MixedMaterial => "MixedMaterial",
            RecordType::Object => "Object",
            RecordType::Unknown => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RecordType::Text => "text",
            RecordType::NotatedMusic => "notated-music",
            RecordType::Cartography => "cartography",
            RecordType::MovingImage => "moving-image",
            RecordType::Audio => "audio",
            RecordType::StillImage => "still-image",
            RecordType::Multimedia => "multimedia",
            RecordType::Kit => "kit",
            RecordType::MixedMaterial => "mixed-material",
            RecordType::Object => "object",
            RecordType::Unknown => "unknown",
        }
    }
}

/// The fifteen Dublin Core elements.
pub const DC_ELEMENTS: [&str; 15] = [
    "title",
    "creator",
    "subject",
    "description",
    "publisher",
    "contributor",
    "date",
    "type",
    "format",
    "identifier",
    "source",
    "language",
    "relation",
    "coverage",
    "rights",
];

/// A Dublin Core record: element name → values in document order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DcRecord {
    pub elements: BTreeMap<String, Vec<String>>,
    pub source_ordinal: usize,
    pub warnings: Vec<String>,
}

impl DcRecord {
    pub fn new(source_ordinal: usize) -> Self {
        DcRecord { source_ordinal, ..Default::default() }
    }

    pub fn push(&mut self, element: &str, value: impl Into<String>) {
        self.elements.entry(element.to_string()).or_default().push(value.into());
    }

    /// Record an element from outside the DC namespaces: kept under its local
    /// name and flagged.
    pub fn push_foreign(&mut self, namespace: Option<&str>, local: &str, value: impl Into<String>) {
        self.warnings.push(alloc::format!("element {local} outside the Dublin Core namespace ({})", namespace.unwrap_or("none")));
        self.push(local, value);
    }

    pub fn get(&self, element: &str) -> &[String] {
        self.elements.get(element).map_or(&[], Vec::as_slice)
    }

    pub fn first(&self, element: &str) -> Option<&str> {
        self.get(element).iter().map(|s| s.trim()).find(|s| !s.is_empty())
    }
}

/// Histogram key: a field or DC element, optionally narrowed to a subfield.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FieldKey {
    pub field: String,
    pub subfield: Option<char>,
}

impl fmt::Display for FieldKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.subfield {
            Some(c) => write!(f, "{}${}", self.field, c),
            None => f.write_str(&self.field),
        }
    }
}

impl Serialize for FieldKey {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SourceProfile {
    pub total_records: usize,
    pub field_frequency: BTreeMap<String, usize>,
    pub distinct_values: BTreeMap<FieldKey, Vec<(String, usize)>>,
    pub distinct_value_counts: BTreeMap<FieldKey, usize>,
    pub record_type_counts: BTreeMap<String, usize>,
}

/// Accumulates a [`SourceProfile`] one record at a time.
#[derive(Debug, Clone)]
pub struct Profiler {
    k: usize,
    total: usize,
    freq: BTreeMap<String, usize>,
    values: BTreeMap<FieldKey, BTreeMap<String, usize>>,
    types: BTreeMap<String, usize>,
}

impl Profiler {
    /// `k` is clamped to at least 1.
    pub fn new(k: usize) -> Self {
        Profiler { k: k.max(1), total: 0, freq: BTreeMap::new(), values: BTreeMap::new(), types: BTreeMap::new() }
    }

    fn count_value(&mut self, field: &str, subfield: Option<char>, value: &str) {
        let value = value.trim();
        if value.is_empty() {
            return;
        }
        let key = FieldKey { field: field.into(), subfield };
        *self.values.entry(key).or_default().entry(value.into()).or_default() += 1;
    }

    pub fn add_marc(&mut self, record: &MarcRecord) {
        self.total += 1;
        *self.types.entry(record.record_type().as_str().into()).or_default() += 1;
        for c in &record.control_fields {
            *self.freq.entry(c.tag.clone()).or_default() += 1;
        }
        for f in &record.data_fields {
            *self.freq.entry(f.tag.clone()).or_default() += 1;
            // First value per code, so a histogram never outgrows its field count.
            let mut seen: Vec<char> = Vec::new();
            for s in &f.subfields {
                if !seen.contains(&s.code) {
                    seen.push(s.code);
                    self.count_value(&f.tag, Some(s.code), &s.value);
                }
            }
        }
    }

    pub fn add_dc(&mut self, record: &DcRecord) {
        self.total += 1;
        let kind = record.first("type").map(|t| t.to_lowercase()).unwrap_or_else(|| "unknown".into());
        *self.types.entry(kind).or_default() += 1;
        for (element, values) in &record.elements {
            *self.freq.entry(element.clone()).or_default() += values.len();
            for v in values {
                self.count_value(element, None, v);
            }
        }
    }

    pub fn finish(self) -> SourceProfile {
        let k = self.k;
        let mut distinct_values = BTreeMap::new();
        let mut distinct_value_counts = BTreeMap::new();
        for (key, hist) in self.values {
            distinct_value_counts.insert(key.clone(), hist.len());
            let mut entries: Vec<(String, usize)> = hist.into_iter().collect();
            entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            entries.truncate(k);
            distinct_values.insert(key, entries);
        }
        SourceProfile {
            total_records: self.total,
            field_frequency: self.freq,
            distinct_values,
            distinct_value_counts,
            record_type_counts: self.types,
        }
    }
}

/// Either kind of source record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourceRecord {
    Marc(MarcRecord),
    Dc(DcRecord),
}

pub fn profile<'a>(records: impl IntoIterator<Item = &'a SourceRecord>, k: usize) -> SourceProfile {
    let mut p = Profiler::new(k);
    for r in records {
        match r {
            SourceRecord::Marc(m) => p.add_marc(m),
            SourceRecord::Dc(d) => p.add_dc(d),
        }
    }
    p.finish()
}
