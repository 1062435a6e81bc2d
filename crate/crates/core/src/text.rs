//! String normalization shared by mapping, enrichment and audit.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

const TERMINAL_PUNCT: &[char] = &['.', ',', ';', ':'];

/// Strip trailing whitespace and ISBD-style terminal punctuation (` /`, ` :`, `,`, ...).
pub fn trim_terminal(s: &str) -> &str {
    s.trim().trim_end_matches(|c: char| c.is_whitespace() || matches!(c, '.' | ',' | ';' | ':' | '/' | '='))
}

fn collapse_ws(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for word in s.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

/// NFC, case fold, collapse whitespace, strip terminal `.,;:`.
pub fn normalize_label(s: &str) -> String {
    let nfc: String = s.nfc().collect();
    let folded = collapse_ws(&nfc.to_lowercase());
    String::from(folded.trim_end_matches(|c: char| TERMINAL_PUNCT.contains(&c) || c == ' '))
}

/// Remove diacritics by decomposing and dropping combining marks.
pub fn fold_diacritics(s: &str) -> String {
    s.nfd().filter(|c| !is_combining_mark(*c)).nfc().collect()
}

/// Find a life-date range (`\d{3,4}-\d{0,4}`) and return the label with it
/// removed plus the range itself.
pub fn split_life_dates(label: &str) -> (String, Option<String>) {
    let chars: Vec<(usize, char)> = label.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        if !chars[i].1.is_ascii_digit() || (i > 0 && chars[i - 1].1.is_ascii_digit()) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j < chars.len() && chars[j].1.is_ascii_digit() {
            j += 1;
        }
        let lead = j - i;
        if (3..=4).contains(&lead) && chars.get(j).is_some_and(|c| c.1 == '-') {
            let mut k = j + 1;
            while k < chars.len() && chars[k].1.is_ascii_digit() && k - j <= 4 {
                k += 1;
            }
            if k - (j + 1) <= 4 && !chars.get(k).is_some_and(|c| c.1.is_ascii_digit()) {
                let start = chars[i].0;
                let end = chars.get(k).map_or(label.len(), |c| c.0);
                let dates = String::from(&label[start..end]);
                let mut rest = String::from(&label[..start]);
                rest.push_str(&label[end..]);
                return (String::from(trim_terminal(&collapse_ws(&rest))), Some(dates));
            }
        }
        i = j;
    }
    (String::from(trim_terminal(label)), None)
}

/// Comparison key used for reconciliation and population matching: dates
/// removed, diacritics folded, normalized.
pub fn match_key(label: &str) -> String {
    let (name, _) = split_life_dates(label);
    normalize_label(&fold_diacritics(&name))
}

/// `Surname, Forename` → `Forename Surname`; other strings unchanged.
pub fn uninvert_name(name: &str) -> String {
    match name.split_once(',') {
        Some((surname, rest)) if !rest.contains(',') && !surname.trim().is_empty() && !rest.trim().is_empty() => {
            let mut out = String::from(rest.trim());
            out.push(' ');
            out.push_str(surname.trim());
            out
        }
        _ => String::from(name),
    }
}

fn is_unreserved(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '-' | '.' | '_' | '~')
}

fn percent_encode_char(out: &mut String, c: char) {
    let mut buf = [0u8; 4];
    for b in c.encode_utf8(&mut buf).bytes() {
        let _ = write!(out, "%{b:02X}");
    }
}

/// Path slug: NFC, lowercase, whitespace runs to one hyphen, everything
/// outside the unreserved set percent-encoded.
pub fn slug(s: &str) -> String {
    let nfc: String = s.trim().nfc().collect();
    let lower = nfc.to_lowercase();
    let mut out = String::with_capacity(lower.len());
    let mut in_ws = false;
    for c in lower.chars() {
        if c.is_whitespace() {
            if !in_ws {
                out.push('-');
            }
            in_ws = true;
            continue;
        }
        in_ws = false;
        if is_unreserved(c) {
            out.push(c);
        } else {
            percent_encode_char(&mut out, c);
        }
    }
    out
}

/// Percent-encode characters that cannot appear in an IRI path segment.
/// Returns the encoded string and whether anything changed.
pub fn encode_path_segment(s: &str) -> (String, bool) {
    let mut out = String::with_capacity(s.len());
    let mut changed = false;
    let chars: Vec<char> = s.chars().collect();
    for (i, &c) in chars.iter().enumerate() {
        let valid_escape = c == '%' && chars.get(i + 1..i + 3).is_some_and(|h| h.iter().all(|d| d.is_ascii_hexdigit()));
        let bad = crate::term::is_forbidden_iri_char(c) || matches!(c, '#' | '?' | '/' | '\\') || (c == '%' && !valid_escape);
        if bad {
            percent_encode_char(&mut out, c);
            changed = true;
        } else {
            out.push(c);
        }
    }
    (out, changed)
}

/// Lexical check for `xsd:gYear` (four-digit year, optional sign and zone omitted).
pub fn is_gyear(s: &str) -> bool {
    s.len() == 4 && s.bytes().all(|b| b.is_ascii_digit())
}

/// Lexical and calendar check for `xsd:date` in `YYYY-MM-DD` form.
pub fn is_xsd_date(s: &str) -> bool {
    let b = s.as_bytes();
    if b.len() != 10 || b[4] != b'-' || b[7] != b'-' {
        return false;
    }
    let num = |r: core::ops::Range<usize>| s.get(r).filter(|d| d.bytes().all(|c| c.is_ascii_digit()))?.parse::<u32>().ok();
    let (Some(y), Some(m), Some(d)) = (num(0..4), num(5..7), num(8..10)) else { return false };
    let leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    let days = match m {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 if leap => 29,
        2 => 28,
        _ => return false,
    };
    (1..=days).contains(&d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn label_normalization() {
        assert_eq!(normalize_label("  Stevenson,  Robert Louis, 1850-1894. "), "stevenson, robert louis, 1850-1894");
        assert_eq!(normalize_label("A."), normalize_label("a"));
    }

    #[test]
    fn life_dates() {
        assert_eq!(
            split_life_dates("Stevenson, Robert Louis, 1850-1894."),
            ("Stevenson, Robert Louis".into(), Some("1850-1894".into()))
        );
        assert_eq!(split_life_dates("Burns, Robert, 1759-"), ("Burns, Robert".into(), Some("1759-".into())));
        assert_eq!(split_life_dates("Scott, Walter"), ("Scott, Walter".into(), None));
        assert_eq!(split_life_dates("Item 12345-6").1, None);
    }

    #[test]
    fn keys_and_names() {
        assert_eq!(match_key("Pérez Galdós, Benito, 1843-1920"), "perez galdos, benito");
        assert_eq!(uninvert_name("Stevenson, Robert Louis"), "Robert Louis Stevenson");
        assert_eq!(uninvert_name("Glasgow Corporation"), "Glasgow Corporation");
    }

    #[test]
    fn slugs() {
        assert_eq!(slug("Glasgow"), "glasgow");
        assert_eq!(slug("Fort  William"), "fort-william");
        assert_eq!(slug("Île d'Arran"), "%C3%AEle-d%27arran");
    }

    #[test]
    fn path_segments() {
        assert_eq!(encode_path_segment("(filmRef)0002"), ("(filmRef)0002".into(), false));
        assert_eq!(encode_path_segment("a b#c"), ("a%20b%23c".into(), true));
        assert_eq!(encode_path_segment("x%20y"), ("x%20y".into(), false));
    }

    #[test]
    fn dates() {
        assert!(is_gyear("1850"));
        assert!(!is_gyear("19uu"));
        assert!(is_xsd_date("2022-11-09"));
        assert!(!is_xsd_date("2023-02-29"));
        assert!(is_xsd_date("2024-02-29"));
    }

    proptest! {
        #[test]
        fn slug_is_iri_safe(s in "\\PC{0,20}") {
            let out = slug(&s);
            prop_assert!(out.chars().all(|c| is_unreserved(c) || c == '%'));
            prop_assert_eq!(slug(&s), out);
        }

        #[test]
        fn normalize_is_idempotent(s in "\\PC{0,30}") {
            let once = normalize_label(&s);
            prop_assert_eq!(normalize_label(&once), once);
        }
    }
}
