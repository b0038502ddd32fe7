//! A small, forgiving markup scanner.
//!
//! Patent table sections mix HTML (`tr`/`td`) with CALS-style table markup
//! (`row`/`entry`) that an HTML5 tree builder would foster-parent out of the
//! table, so the table code works on byte spans and a flat token stream
//! instead of a DOM.

use std::ops::Range;
use std::sync::OnceLock;

use regex::Regex;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Start {
        name: String,
        span: Range<usize>,
        self_closing: bool,
    },
    End {
        name: String,
        span: Range<usize>,
    },
    Text(Range<usize>),
}

const RAW_TEXT: [&str; 2] = ["script", "style"];
const VOID: [&str; 9] = ["br", "hr", "img", "meta", "link", "input", "col", "colspec", "wbr"];

pub fn tokenize(src: &str) -> Vec<Token> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    let mut text_start = 0;

    let flush = |tokens: &mut Vec<Token>, from: usize, to: usize| {
        if to > from {
            tokens.push(Token::Text(from..to));
        }
    };

    while pos < bytes.len() {
        if bytes[pos] != b'<' {
            pos += 1;
            continue;
        }
        let rest = &src[pos..];
        if rest.starts_with("<!--") {
            flush(&mut tokens, text_start, pos);
            let end = rest.find("-->").map_or(bytes.len(), |i| pos + i + 3);
            pos = end;
            text_start = pos;
        } else if rest.starts_with("<!") || rest.starts_with("<?") {
            flush(&mut tokens, text_start, pos);
            let end = rest.find('>').map_or(bytes.len(), |i| pos + i + 1);
            pos = end;
            text_start = pos;
        } else if rest.starts_with("</") && rest[2..].starts_with(|c: char| c.is_ascii_alphabetic()) {
            flush(&mut tokens, text_start, pos);
            let name = tag_name(&rest[2..]);
            let end = rest.find('>').map_or(bytes.len(), |i| pos + i + 1);
            tokens.push(Token::End {
                name,
                span: pos..end,
            });
            pos = end;
            text_start = pos;
        } else if rest[1..].starts_with(|c: char| c.is_ascii_alphabetic()) {
            flush(&mut tokens, text_start, pos);
            let name = tag_name(&rest[1..]);
            let end = pos + tag_end(rest);
            let self_closing = src[..end].ends_with("/>") || VOID.contains(&name.as_str());
            tokens.push(Token::Start {
                name: name.clone(),
                span: pos..end,
                self_closing,
            });
            pos = end;
            text_start = pos;
            if RAW_TEXT.contains(&name.as_str()) {
                let close = format!("</{name}");
                let lower = src[pos..].to_ascii_lowercase();
                let body_end = lower.find(&close).map_or(bytes.len(), |i| pos + i);
                flush(&mut tokens, pos, body_end);
                pos = body_end;
                text_start = pos;
            }
        } else {
            pos += 1;
        }
    }
    flush(&mut tokens, text_start, bytes.len());
    tokens
}

fn tag_name(s: &str) -> String {
    s.chars()
        .take_while(|c| c.is_ascii_alphanumeric() || *c == '-' || *c == ':' || *c == '_')
        .collect::<String>()
        .to_ascii_lowercase()
}

/// Byte length of the tag starting at `s[0] == '<'`, honoring quoted attributes.
fn tag_end(s: &str) -> usize {
    let mut quote: Option<u8> = None;
    for (i, b) in s.bytes().enumerate().skip(1) {
        match (quote, b) {
            (Some(q), _) if b == q => quote = None,
            (Some(_), _) => {}
            (None, b'"') | (None, b'\'') => quote = Some(b),
            (None, b'>') => return i + 1,
            _ => {}
        }
    }
    s.len()
}

/// Byte spans of the outermost `<tag>…</tag>` elements, in document order.
/// Elements of the same name nested inside a match stay inside its span.
pub fn outer_elements(src: &str, tag: &str) -> Result<Vec<Range<usize>>> {
    let mut spans = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for token in tokenize(src) {
        match token {
            Token::Start {
                name,
                span,
                self_closing,
            } if name == tag => {
                if self_closing {
                    if depth == 0 {
                        spans.push(span);
                    }
                    continue;
                }
                if depth == 0 {
                    start = span.start;
                }
                depth += 1;
            }
            Token::End { name, span } if name == tag => {
                if depth == 0 {
                    continue;
                }
                depth -= 1;
                if depth == 0 {
                    spans.push(start..span.end);
                }
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Markup(format!("unclosed <{tag}> at byte {start}")));
    }
    Ok(spans)
}

/// Visible text of a markup fragment with entities decoded.
pub fn visible_text(src: &str) -> String {
    let mut out = String::new();
    for token in tokenize(src) {
        match token {
            Token::Text(range) => out.push_str(&html_escape::decode_html_entities(&src[range])),
            Token::Start { name, .. } | Token::End { name, .. } if is_break(&name) => out.push(' '),
            _ => {}
        }
    }
    out
}

fn is_break(name: &str) -> bool {
    matches!(
        name,
        "br" | "p" | "div" | "td" | "th" | "tr" | "entry" | "row" | "li" | "table"
    )
}

fn is_row(name: &str) -> bool {
    name == "tr" || name == "row"
}

fn is_cell(name: &str) -> bool {
    name == "td" || name == "th" || name == "entry"
}

/// Cell text grid of one table block. Rows and cells of nested tables are
/// folded into the enclosing cell's text. `colspan` is expanded with empty
/// cells so that columns stay positionally aligned.
pub fn parse_grid(block: &str) -> Vec<Vec<String>> {
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut row: Option<Vec<String>> = None;
    let mut cell: Option<(String, usize)> = None;
    let mut depth = 0usize;

    fn close_cell(row: &mut Option<Vec<String>>, cell: &mut Option<(String, usize)>) {
        if let Some((text, span)) = cell.take() {
            let r = row.get_or_insert_with(Vec::new);
            r.push(text.split_whitespace().collect::<Vec<_>>().join(" "));
            for _ in 1..span {
                r.push(String::new());
            }
        }
    }
    fn close_row(
        rows: &mut Vec<Vec<String>>,
        row: &mut Option<Vec<String>>,
        cell: &mut Option<(String, usize)>,
    ) {
        close_cell(row, cell);
        if let Some(r) = row.take() {
            if !r.is_empty() {
                rows.push(r);
            }
        }
    }

    for token in tokenize(block) {
        match token {
            Token::Start {
                ref name,
                ref span,
                self_closing,
            } => {
                if name == "table" && !self_closing {
                    depth += 1;
                    if depth > 1 {
                        if let Some((text, _)) = cell.as_mut() {
                            text.push(' ');
                        }
                    }
                } else if depth == 1 && is_row(name) {
                    close_row(&mut rows, &mut row, &mut cell);
                    row = Some(Vec::new());
                } else if depth == 1 && is_cell(name) {
                    close_cell(&mut row, &mut cell);
                    let span_n = colspan_regex()
                        .captures(&block[span.clone()])
                        .and_then(|c| c[1].parse::<usize>().ok())
                        .filter(|n| (1..=64).contains(n))
                        .unwrap_or(1);
                    cell = Some((String::new(), span_n));
                    if self_closing {
                        close_cell(&mut row, &mut cell);
                    }
                } else if is_break(name) {
                    if let Some((text, _)) = cell.as_mut() {
                        text.push(' ');
                    }
                }
            }
            Token::End { ref name, .. } => {
                if name == "table" {
                    if depth == 1 {
                        close_row(&mut rows, &mut row, &mut cell);
                    }
                    depth = depth.saturating_sub(1);
                } else if depth == 1 && is_row(name) {
                    close_row(&mut rows, &mut row, &mut cell);
                } else if depth == 1 && is_cell(name) {
                    close_cell(&mut row, &mut cell);
                } else if is_break(name) {
                    if let Some((text, _)) = cell.as_mut() {
                        text.push(' ');
                    }
                }
            }
            Token::Text(range) => {
                if let Some((text, _)) = cell.as_mut() {
                    text.push_str(&html_escape::decode_html_entities(&block[range]));
                }
            }
        }
    }
    close_row(&mut rows, &mut row, &mut cell);
    rows
}

fn colspan_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r#"(?i)\bcolspan\s*=\s*["']?(\d+)"#).unwrap())
}
