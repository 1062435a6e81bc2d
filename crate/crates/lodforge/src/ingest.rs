//! Streaming MARCXML and Dublin Core XML readers.

use std::io::BufRead;

use lodforge_core::ingest::{DcRecord, MarcRecord, RecordError, Subfield, DC_ELEMENTS};
use quick_xml::events::{BytesStart, Event};
use quick_xml::name::ResolveResult;
use quick_xml::reader::NsReader;

const DC_NS: &str = "http://purl.org/dc/elements/1.1/";
const DCTERMS_NS: &str = "http://purl.org/dc/terms/";

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    /// Malformed input; iteration stops.
    #[error("XML error at byte {offset}: {message}")]
    Xml { offset: u64, message: String },
    /// One record was unusable and skipped; iteration continues.
    #[error("record {index}: {message}")]
    Record { index: usize, message: String },
}

impl IngestError {
    pub fn is_fatal(&self) -> bool {
        matches!(self, IngestError::Xml { .. })
    }
}

fn local_part(name: &[u8]) -> String {
    let i = name.iter().rposition(|&b| b == b':').map_or(0, |i| i + 1);
    String::from_utf8_lossy(&name[i..]).into_owned()
}

fn attr(e: &BytesStart<'_>, key: &str) -> Result<Option<String>, String> {
    for a in e.attributes() {
        let a = a.map_err(|err| err.to_string())?;
        if local_part(a.key.as_ref()) == key {
            return a.unescape_value().map(|v| Some(v.into_owned())).map_err(|err| err.to_string());
        }
    }
    Ok(None)
}

enum Ev {
    Start { ns: Option<String>, local: String, start: BytesStart<'static>, empty: bool },
    End,
    Text(String),
    Eof,
}

/// Event pump that tracks depth so a truncated document is an error rather
/// than a silent end of input.
struct Pump<R: BufRead> {
    reader: NsReader<R>,
    buf: Vec<u8>,
    depth: usize,
    done: bool,
}

impl<R: BufRead> Pump<R> {
    fn new(reader: R) -> Self {
        let mut reader = NsReader::from_reader(reader);
        reader.config_mut().trim_text(false);
        Pump { reader, buf: Vec::new(), depth: 0, done: false }
    }

    fn fail(&mut self, message: impl Into<String>, offset: Option<u64>) -> IngestError {
        self.done = true;
        let offset = offset.unwrap_or_else(|| self.reader.buffer_position());
        IngestError::Xml { offset, message: message.into() }
    }

    fn next(&mut self) -> Result<Ev, IngestError> {
        loop {
            self.buf.clear();
            let (res, event) = match self.reader.read_resolved_event_into(&mut self.buf) {
                Ok((r, e)) => {
                    let ns = match r {
                        ResolveResult::Bound(n) => Some(String::from_utf8_lossy(n.as_ref()).into_owned()),
                        _ => None,
                    };
                    (ns, e.into_owned())
                }
                Err(e) => {
                    let at = self.reader.error_position();
                    return Err(self.fail(e.to_string(), Some(at)));
                }
            };
            match event {
                Event::Start(e) => {
                    self.depth += 1;
                    let local = local_part(e.name().as_ref());
                    return Ok(Ev::Start { ns: res, local, start: e, empty: false });
                }
                Event::Empty(e) => {
                    let local = local_part(e.name().as_ref());
                    return Ok(Ev::Start { ns: res, local, start: e, empty: true });
                }
                Event::End(_) => {
                    self.depth -= 1;
                    return Ok(Ev::End);
                }
                Event::Text(t) => match t.unescape() {
                    Ok(s) => return Ok(Ev::Text(s.into_owned())),
                    Err(e) => return Err(self.fail(e.to_string(), None)),
                },
                Event::CData(c) => match std::str::from_utf8(&c) {
                    Ok(s) => return Ok(Ev::Text(s.to_owned())),
                    Err(e) => return Err(self.fail(e.to_string(), None)),
                },
                Event::Eof => {
                    if self.depth > 0 {
                        let n = self.depth;
                        return Err(self.fail(format!("unexpected end of input with {n} open element(s)"), None));
                    }
                    self.done = true;
                    return Ok(Ev::Eof);
                }
                _ => {}
            }
        }
    }
}

enum Pending {
    Leader(String),
    Control(String, String),
    Subfield(char, String),
}

enum MarcField {
    Control(String, String),
    Data(String, char, char, Vec<Subfield>),
}

#[derive(Default)]
struct MarcBuilder {
    leader: Option<String>,
    fields: Vec<MarcField>,
    open: Option<Pending>,
    data: Option<(String, char, char, Vec<Subfield>)>,
    problem: Option<String>,
}

impl MarcBuilder {
    fn start(&mut self, local: &str, e: &BytesStart<'_>) -> Result<(), String> {
        match local {
            "leader" => self.open = Some(Pending::Leader(String::new())),
            "controlfield" => self.open = Some(Pending::Control(attr(e, "tag")?.unwrap_or_default(), String::new())),
            "datafield" => {
                let tag = attr(e, "tag")?.unwrap_or_default();
                let ind = |k| -> Result<char, String> { Ok(attr(e, k)?.and_then(|v| v.chars().next()).unwrap_or(' ')) };
                self.data = Some((tag, ind("ind1")?, ind("ind2")?, Vec::new()));
            }
            "subfield" => {
                let code = attr(e, "code")?.unwrap_or_default();
                let mut chars = code.chars();
                let c = match (chars.next(), chars.next()) {
                    (Some(c), None) => c,
                    _ => {
                        self.problem.get_or_insert(format!("subfield code {code:?} is not a single character"));
                        ' '
                    }
                };
                self.open = Some(Pending::Subfield(c, String::new()));
            }
            _ => {}
        }
        Ok(())
    }

    fn text(&mut self, t: &str) {
        match &mut self.open {
            Some(Pending::Leader(s)) | Some(Pending::Control(_, s)) | Some(Pending::Subfield(_, s)) => s.push_str(t),
            None => {}
        }
    }

    fn end(&mut self, local: &str) {
        match (local, self.open.take()) {
            ("leader", Some(Pending::Leader(s))) => self.leader = Some(s),
            ("controlfield", Some(Pending::Control(tag, s))) => self.fields.push(MarcField::Control(tag, s)),
            ("subfield", Some(Pending::Subfield(code, s))) => {
                if let Some((_, _, _, subs)) = self.data.as_mut() {
                    subs.push(Subfield::new(code, s));
                }
            }
            ("datafield", open) => {
                self.open = open;
                if let Some((tag, i1, i2, subs)) = self.data.take() {
                    self.fields.push(MarcField::Data(tag, i1, i2, subs));
                }
            }
            (_, open) => self.open = open,
        }
    }

    fn finish(self, counts_control_fields: bool) -> Result<MarcRecord, String> {
        if let Some(p) = self.problem {
            return Err(p);
        }
        let leader = self.leader.unwrap_or_else(|| " ".repeat(24));
        let mut record = MarcRecord::with_ordinals(leader, counts_control_fields);
        for f in self.fields {
            match f {
                MarcField::Control(tag, v) => record.push_control(&tag, v),
                MarcField::Data(tag, i1, i2, subs) => record.push_data(&tag, i1, i2, subs),
            }
            .map_err(|e: RecordError| e.to_string())?;
        }
        Ok(record)
    }
}

/// Lazily yields one [`MarcRecord`] per `record` element. Record-level
/// problems yield a non-fatal error and iteration continues; malformed XML
/// yields one fatal error and ends iteration.
pub struct MarcXmlReader<R: BufRead> {
    pump: Pump<R>,
    counts_control_fields: bool,
    index: usize,
}

impl<R: BufRead> MarcXmlReader<R> {
    pub fn new(reader: R) -> Self {
        Self::with_ordinals(reader, true)
    }

    pub fn with_ordinals(reader: R, counts_control_fields: bool) -> Self {
        MarcXmlReader { pump: Pump::new(reader), counts_control_fields, index: 0 }
    }

    fn read_record(&mut self) -> Result<MarcRecord, IngestError> {
        let mut b = MarcBuilder::default();
        let mut stack: Vec<String> = vec!["record".into()];
        while !stack.is_empty() {
            match self.pump.next()? {
                Ev::Start { local, start, empty, .. } => {
                    if let Err(m) = b.start(&local, &start) {
                        return Err(self.pump.fail(m, None));
                    }
                    if empty {
                        b.end(&local);
                    } else {
                        stack.push(local);
                    }
                }
                Ev::End => {
                    let local = stack.pop().unwrap_or_default();
                    b.end(&local);
                }
                Ev::Text(t) => b.text(&t),
                Ev::Eof => return Err(self.pump.fail("unexpected end of input inside record", None)),
            }
        }
        b.finish(self.counts_control_fields).map_err(|message| IngestError::Record { index: self.index, message })
    }
}

impl<R: BufRead> Iterator for MarcXmlReader<R> {
    type Item = Result<MarcRecord, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.pump.done {
            match self.pump.next() {
                Ok(Ev::Start { local, empty, .. }) if local == "record" => {
                    self.index += 1;
                    if empty {
                        return Some(MarcBuilder::default()
                            .finish(self.counts_control_fields)
                            .map_err(|message| IngestError::Record { index: self.index, message }));
                    }
                    return Some(self.read_record());
                }
                Ok(_) => {}
                Err(e) => return Some(Err(e)),
            }
        }
        None
    }
}

/// Lazily yields one [`DcRecord`] per container element (`record` by
/// default). Leaf elements inside a container become values: the fifteen
/// DC elements and DC terms by local name, anything else under its local
/// name with a warning.
pub struct DcReader<R: BufRead> {
    pump: Pump<R>,
    container: String,
    index: usize,
}

impl<R: BufRead> DcReader<R> {
    pub fn new(reader: R) -> Self {
        Self::with_container(reader, "record")
    }

    pub fn with_container(reader: R, container: &str) -> Self {
        DcReader { pump: Pump::new(reader), container: container.into(), index: 0 }
    }

    fn read_record(&mut self) -> Result<DcRecord, IngestError> {
        let mut record = DcRecord::new(self.index);
        // (namespace, local name, text, has element children)
        let mut stack: Vec<(Option<String>, String, String, bool)> = Vec::new();
        loop {
            match self.pump.next()? {
                Ev::Start { ns, local, empty, .. } => {
                    if let Some(parent) = stack.last_mut() {
                        parent.3 = true;
                    }
                    if empty {
                        push_value(&mut record, ns.as_deref(), &local, String::new());
                    } else {
                        stack.push((ns, local, String::new(), false));
                    }
                }
                Ev::End => match stack.pop() {
                    Some((ns, local, text, false)) => push_value(&mut record, ns.as_deref(), &local, text.trim().to_string()),
                    Some(_) => {}
                    None => return Ok(record),
                },
                Ev::Text(t) => {
                    if let Some(top) = stack.last_mut() {
                        top.2.push_str(&t);
                    }
                }
                Ev::Eof => return Err(self.pump.fail("unexpected end of input inside record", None)),
            }
        }
    }
}

fn push_value(record: &mut DcRecord, ns: Option<&str>, local: &str, value: String) {
    match ns {
        Some(DC_NS) if DC_ELEMENTS.contains(&local) => record.push(local, value),
        Some(DCTERMS_NS) => record.push(local, value),
        other => record.push_foreign(other, local, value),
    }
}

impl<R: BufRead> Iterator for DcReader<R> {
    type Item = Result<DcRecord, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.pump.done {
            match self.pump.next() {
                Ok(Ev::Start { local, empty, .. }) if local == self.container => {
                    self.index += 1;
                    if empty {
                        return Some(Ok(DcRecord::new(self.index)));
                    }
                    return Some(self.read_record());
                }
                Ok(_) => {}
                Err(e) => return Some(Err(e)),
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<collection xmlns="http://www.loc.gov/MARC21/slim">
  <record>
    <leader>00000cam a2200000 i 4500</leader>
    <controlfield tag="001">15726</controlfield>
    <datafield tag="245" ind1="1" ind2="0">
      <subfield code="a">Treasure island /</subfield>
      <subfield code="c">R.L. Stevenson &amp; co.</subfield>
    </datafield>
  </record>
</collection>"#;

    fn marc(xml: &str) -> Vec<Result<MarcRecord, IngestError>> {
        MarcXmlReader::new(xml.as_bytes()).collect()
    }

    #[test]
    fn minimal_record() {
        let recs = marc(ONE);
        assert_eq!(recs.len(), 1);
        let r = recs[0].as_ref().unwrap();
        assert_eq!(r.leader, "00000cam a2200000 i 4500");
        assert_eq!(r.control("001").unwrap().value, "15726");
        let f = r.fields("245").next().unwrap();
        assert_eq!(f.subfield('a'), Some("Treasure island /"));
        assert_eq!(f.subfield('c'), Some("R.L. Stevenson & co."));
        assert_eq!((f.indicator1, f.indicator2, f.ordinal), ('1', '0', 2));
    }

    #[test]
    fn ordinal_modes() {
        let r = MarcXmlReader::with_ordinals(ONE.as_bytes(), false).next().unwrap().unwrap();
        assert_eq!(r.fields("245").next().unwrap().ordinal, 1);
    }

    #[test]
    fn empty_collection() {
        assert!(marc("<collection/>").is_empty());
        assert!(marc("<collection></collection>").is_empty());
    }

    #[test]
    fn truncated_after_first_record() {
        let cut = ONE.find("</collection>").unwrap();
        let xml = format!("{}<record><controlfield tag=\"001\">2</contr", &ONE[..cut]);
        let recs = marc(&xml);
        assert_eq!(recs.len(), 2);
        assert!(recs[0].is_ok());
        let err = recs[1].as_ref().unwrap_err();
        assert!(err.is_fatal());
        let IngestError::Xml { offset, .. } = err else { unreachable!() };
        assert!(*offset as usize > cut, "offset {offset} inside the second record");
    }

    #[test]
    fn bad_record_skipped_not_fatal() {
        let xml = r#"<collection>
  <record><controlfield tag="1X">x</controlfield></record>
  <record><controlfield tag="001">2</controlfield></record>
  <record><datafield tag="245" ind1=" " ind2=" "/></record>
</collection>"#;
        let recs = marc(xml);
        assert_eq!(recs.len(), 3);
        assert!(matches!(recs[0], Err(IngestError::Record { index: 1, .. })));
        assert!(recs[1].is_ok());
        assert!(matches!(recs[2], Err(IngestError::Record { index: 3, .. })));
    }

    #[test]
    fn mismatched_tags_fatal() {
        let recs = marc("<collection><record><leader>x</controlfield></record></collection>");
        assert!(recs.last().unwrap().as_ref().unwrap_err().is_fatal());
    }

    #[test]
    fn invalid_utf8_fatal() {
        let mut bytes = b"<collection><record><controlfield tag=\"001\">".to_vec();
        bytes.extend([0xff, 0xfe]);
        bytes.extend(b"</controlfield></record></collection>");
        let recs: Vec<_> = MarcXmlReader::new(&bytes[..]).collect();
        assert!(recs.iter().any(|r| r.as_ref().is_err_and(|e| e.is_fatal())));
    }

    const DC: &str = r#"<records xmlns:dc="http://purl.org/dc/elements/1.1/" xmlns:x="http://example.org/x/">
  <record>
    <dc:title>Dummy title</dc:title>
    <dc:subject>Ships</dc:subject>
    <dc:subject>Clyde</dc:subject>
    <x:shelfmark>4/1/2</x:shelfmark>
  </record>
  <record><dc:title/></record>
</records>"#;

    #[test]
    fn dublin_core() {
        let recs: Vec<DcRecord> = DcReader::new(DC.as_bytes()).map(Result::unwrap).collect();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].get("title"), ["Dummy title"]);
        assert_eq!(recs[0].get("subject"), ["Ships", "Clyde"]);
        assert_eq!(recs[0].get("shelfmark"), ["4/1/2"]);
        assert_eq!(recs[0].warnings.len(), 1);
        assert_eq!(recs[0].source_ordinal, 1);
        assert_eq!(recs[1].source_ordinal, 2);
        assert_eq!(recs[1].get("title"), [""]);
    }

    #[test]
    fn oai_container() {
        let xml = r#"<OAI-PMH><record><header><identifier>oai:1</identifier></header><metadata>
<oai_dc:dc xmlns:oai_dc="http://www.openarchives.org/OAI/2.0/oai_dc/" xmlns:dc="http://purl.org/dc/elements/1.1/">
<dc:title>T</dc:title></oai_dc:dc></metadata></record></OAI-PMH>"#;
        let recs: Vec<DcRecord> = DcReader::with_container(xml.as_bytes(), "dc").map(Result::unwrap).collect();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].get("title"), ["T"]);
        assert!(recs[0].warnings.is_empty());
    }
}
