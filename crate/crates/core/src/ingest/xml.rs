//! USPTO full-text XML (`us-patent-grant` / `us-patent-application`)
//! subset parser. Reads the publication doc-number, CPC classifications,
//! description paragraphs (with `description-of-drawings` routed to the
//! brief-description section), and claims with nested `claim-text`
//! elements flattened.

use quick_xml::events::Event;
use quick_xml::Reader;

use super::{IngestError, ParsedSections, RawPatentFile};

#[derive(Default)]
struct CpcParts {
    section: String,
    class: String,
    subclass: String,
    main_group: String,
    subgroup: String,
}

impl CpcParts {
    fn render(&self) -> Option<String> {
        if self.section.is_empty() || self.class.is_empty() || self.subclass.is_empty() {
            return None;
        }
        let mut code = format!("{}{}{}", self.section, self.class, self.subclass);
        if !self.main_group.is_empty() {
            code.push(' ');
            code.push_str(&self.main_group);
            if !self.subgroup.is_empty() {
                code.push('/');
                code.push_str(&self.subgroup);
            }
        }
        Some(code)
    }
}

pub(crate) fn parse_sections(raw: &RawPatentFile) -> Result<ParsedSections, IngestError> {
    let text = String::from_utf8_lossy(&raw.bytes);
    let mut reader = Reader::from_str(&text);
    reader.config_mut().trim_text(false);

    let mut sections = ParsedSections::default();
    let mut stack: Vec<String> = Vec::new();
    let mut in_drawings_desc = false;

    let mut para_num: Option<u32> = None;
    let mut para_buf = String::new();
    let mut claim_num: Option<u32> = None;
    let mut claim_buf = String::new();
    let mut text_buf = String::new();
    let mut cpc = CpcParts::default();

    let malformed = |reason: String| IngestError::MalformedDocument {
        path: raw.path.display().to_string(),
        reason,
    };

    loop {
        match reader.read_event() {
            Err(e) => return Err(malformed(format!("xml error: {e}"))),
            Ok(Event::Eof) => break,
            Ok(Event::Start(e)) => {
                let name = String::from_utf8_lossy(e.name().as_ref()).into_owned();
                match name.as_str() {
                    "description-of-drawings" => in_drawings_desc = true,
                    "classification-cpc" => cpc = CpcParts::default(),
                    "p" if in_description(&stack) => {
                        para_num = attr(&e, "num").and_then(|v| parse_num(&v));
                        para_buf.clear();
                    }
                    "claim" if stack.last().is_some_and(|s| s == "claims") => {
                        claim_num = attr(&e, "num").and_then(|v| parse_num(&v));
                        claim_buf.clear();
                    }
                    _ => {}
                }
                text_buf.clear();
                stack.push(name);
            }
            Ok(Event::Empty(_)) => {}
            Ok(Event::Text(t)) => {
                let chunk = t
                    .decode()
                    .map_err(|e| malformed(format!("bad text encoding: {e}")))?;
                if in_element(&stack, "p") && in_description(&stack[..position_of(&stack, "p")]) {
                    para_buf.push_str(&chunk);
                } else if in_element(&stack, "claim") {
                    claim_buf.push_str(&chunk);
                } else {
                    text_buf.push_str(&chunk);
                }
            }
            Ok(Event::End(e)) => {
                let name = String::from_utf8_lossy(e.name().as_ref()).into_owned();
                let content = crate::text::normalize_ws(&text_buf);
                match name.as_str() {
                    "description-of-drawings" => in_drawings_desc = false,
                    "doc-number" => {
                        if sections.doc_id.is_empty() && stack.iter().any(|s| s == "publication-reference")
                        {
                            sections.doc_id = content.clone();
                        }
                    }
                    "section" if in_element(&stack, "classification-cpc") => cpc.section = content.clone(),
                    "class" if in_element(&stack, "classification-cpc") => cpc.class = content.clone(),
                    "subclass" if in_element(&stack, "classification-cpc") => cpc.subclass = content.clone(),
                    "main-group" if in_element(&stack, "classification-cpc") => {
                        cpc.main_group = content.clone()
                    }
                    "subgroup" if in_element(&stack, "classification-cpc") => cpc.subgroup = content.clone(),
                    "classification-cpc" => {
                        if let Some(code) = cpc.render() {
                            if !sections.cpc_codes.contains(&code) {
                                sections.cpc_codes.push(code);
                            }
                        }
                    }
                    "classification-cpc-text" => {
                        if !content.is_empty() && !sections.cpc_codes.contains(&content) {
                            sections.cpc_codes.push(content.clone());
                        }
                    }
                    "p" => {
                        let para = crate::text::normalize_ws(&para_buf);
                        if !para.is_empty() && in_description(&stack[..stack.len().saturating_sub(1)]) {
                            if in_drawings_desc {
                                if !sections.brief_text.is_empty() {
                                    sections.brief_text.push(' ');
                                }
                                sections.brief_text.push_str(&para);
                            } else {
                                sections.paragraphs.push((para_num, para));
                            }
                        }
                        para_buf.clear();
                        para_num = None;
                    }
                    "claim" => {
                        let body = crate::text::normalize_ws(&claim_buf);
                        if let (Some(num), false) = (claim_num, body.is_empty()) {
                            sections.claims.push((num, body));
                        }
                        claim_buf.clear();
                        claim_num = None;
                    }
                    _ => {}
                }
                text_buf.clear();
                stack.pop();
            }
            Ok(_) => {}
        }
    }
    sections.claims.sort_by_key(|(n, _)| *n);
    Ok(sections)
}

fn attr(e: &quick_xml::events::BytesStart<'_>, key: &str) -> Option<String> {
    e.attributes()
        .flatten()
        .find(|a| a.key.as_ref() == key.as_bytes())
        .and_then(|a| String::from_utf8(a.value.into_owned()).ok())
}

fn parse_num(value: &str) -> Option<u32> {
    value.trim_start_matches('0').parse().ok().or(Some(0)).filter(|n| *n > 0)
}

fn in_element(stack: &[String], name: &str) -> bool {
    stack.iter().any(|s| s == name)
}

fn position_of(stack: &[String], name: &str) -> usize {
    stack.iter().position(|s| s == name).unwrap_or(stack.len())
}

fn in_description(stack: &[String]) -> bool {
    stack.iter().any(|s| s == "description")
}
