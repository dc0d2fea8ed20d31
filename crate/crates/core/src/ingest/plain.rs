//! Plain sectioned text format used for fixtures:
//!
//! ```text
//! DOC-ID: US1000001
//! CPC: G06F 3/00; G06F 9/00
//!
//! BRIEF DESCRIPTION OF THE DRAWINGS
//! FIG. 1 is a block diagram of a system.
//! FIG. 2 illustrates a flow.
//!
//! DETAILED DESCRIPTION
//! [0001] First paragraph text.
//!
//! [0002] Second paragraph text.
//!
//! CLAIMS
//! 1. A system comprising: a processor; and a memory.
//! 2. The system of claim 1, wherein the processor is multicore.
//! ```
//!
//! Paragraph blocks are separated by blank lines; a leading `[dddd]` sets
//! the ordinal explicitly. Any other all-caps line starts another body
//! section whose paragraphs still count as specification text.

use std::sync::LazyLock;

use regex::Regex;

use super::{IngestError, ParsedSections, RawPatentFile};

static PARA_NUM_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\[(\d{1,6})\]\s*").unwrap());
static CLAIM_START_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^(\d+)\.\s+").unwrap());

#[derive(PartialEq)]
enum Section {
    Body,
    Brief,
    Claims,
}

pub(crate) fn parse_sections(raw: &RawPatentFile) -> Result<ParsedSections, IngestError> {
    let text = String::from_utf8_lossy(&raw.bytes);
    let mut sections = ParsedSections::default();
    let mut mode = Section::Body;
    let mut block: Vec<&str> = Vec::new();
    let mut claim_lines: Vec<String> = Vec::new();

    let flush_block = |sections: &mut ParsedSections, mode: &Section, block: &mut Vec<&str>| {
        if block.is_empty() {
            return;
        }
        let joined = block.join(" ");
        block.clear();
        match mode {
            Section::Brief => {
                if !sections.brief_text.is_empty() {
                    sections.brief_text.push(' ');
                }
                sections.brief_text.push_str(&joined);
            }
            Section::Body => {
                let (ordinal, text) = match PARA_NUM_RE.captures(&joined) {
                    Some(cap) => {
                        let n: u32 = cap[1].parse().unwrap_or(0);
                        (Some(n), joined[cap.get(0).unwrap().end()..].to_string())
                    }
                    None => (None, joined.clone()),
                };
                if !text.trim().is_empty() {
                    sections.paragraphs.push((ordinal, text.trim().to_string()));
                }
            }
            Section::Claims => {}
        }
    };

    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            flush_block(&mut sections, &mode, &mut block);
            continue;
        }
        if let Some(id) = trimmed.strip_prefix("DOC-ID:") {
            sections.doc_id = id.trim().to_string();
            continue;
        }
        if let Some(cpc) = trimmed.strip_prefix("CPC:") {
            sections
                .cpc_codes
                .extend(cpc.split(';').map(|c| c.trim().to_string()).filter(|c| !c.is_empty()));
            continue;
        }
        if is_section_heading(trimmed) {
            flush_block(&mut sections, &mode, &mut block);
            mode = match trimmed {
                "BRIEF DESCRIPTION OF THE DRAWINGS" => Section::Brief,
                "CLAIMS" => Section::Claims,
                _ => Section::Body,
            };
            continue;
        }
        if mode == Section::Claims {
            if CLAIM_START_RE.is_match(trimmed) {
                claim_lines.push(trimmed.to_string());
            } else if let Some(last) = claim_lines.last_mut() {
                last.push(' ');
                last.push_str(trimmed);
            }
            continue;
        }
        block.push(trimmed);
    }
    flush_block(&mut sections, &mode, &mut block);

    for line in claim_lines {
        let cap = CLAIM_START_RE.captures(&line).expect("claim line shape");
        let number: u32 = cap[1].parse().map_err(|_| IngestError::MalformedDocument {
            path: raw.path.display().to_string(),
            reason: format!("bad claim number in {line:?}"),
        })?;
        let text = line[cap.get(0).unwrap().end()..].to_string();
        sections.claims.push((number, text));
    }
    Ok(sections)
}

/// All-caps lines of letters and spaces (at least two words or a known
/// heading) delimit sections.
fn is_section_heading(line: &str) -> bool {
    if line == "CLAIMS" {
        return true;
    }
    line.len() >= 4
        && line.contains(' ')
        && line
            .chars()
            .all(|c| c.is_ascii_uppercase() || c == ' ')
}
