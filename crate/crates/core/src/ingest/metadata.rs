use scraper::{Html, Selector};

use crate::ingest::PatentRecord;
use crate::tabular::markup::outer_elements;

/// Element wrapping the tables of a patent page.
pub const TABLE_SECTION_TAG: &str = "patent-tables";

struct Meta<'a> {
    name: &'a str,
    content: String,
    scheme: String,
}

fn meta_tags(doc: &Html) -> Vec<Meta<'_>> {
    let selector = Selector::parse("meta[name]").expect("static selector");
    doc.select(&selector)
        .filter_map(|el| {
            let v = el.value();
            Some(Meta {
                name: v.attr("name")?,
                content: v.attr("content").unwrap_or_default().trim().to_string(),
                scheme: v.attr("scheme").unwrap_or_default().to_ascii_lowercase(),
            })
        })
        .collect()
}

/// Publication number from a patent URL such as
/// `https://patents.google.com/patent/US11485676B2/en`.
pub fn publication_from_url(url: &str) -> Option<String> {
    let parsed = url::Url::parse(url.trim()).ok()?;
    let mut segments = parsed.path_segments()?;
    segments.find(|s| s.eq_ignore_ascii_case("patent"))?;
    let candidate = segments.next()?;
    let clean: String = candidate
        .chars()
        .filter(char::is_ascii_alphanumeric)
        .collect();
    (!clean.is_empty()).then(|| clean.to_ascii_uppercase())
}

/// Collapses `US:11485676:B2` and similar forms into `US11485676B2`.
fn compact_publication(raw: &str) -> String {
    raw.chars()
        .filter(char::is_ascii_alphanumeric)
        .collect::<String>()
        .to_ascii_uppercase()
}

/// Reads the page's metadata tags into a record with no tables. Absent tags
/// leave the corresponding field empty.
pub fn extract_metadata(url: &str, html: &str) -> PatentRecord {
    let doc = Html::parse_document(html);
    let metas = meta_tags(&doc);
    let first = |names: &[&str]| -> String {
        metas
            .iter()
            .find(|m| names.iter().any(|n| m.name.eq_ignore_ascii_case(n)) && !m.content.is_empty())
            .map(|m| m.content.clone())
            .unwrap_or_default()
    };
    let contributors = |scheme: &str| -> Vec<String> {
        metas
            .iter()
            .filter(|m| m.name.eq_ignore_ascii_case("DC.contributor") && m.scheme == scheme)
            .map(|m| m.content.clone())
            .filter(|c| !c.is_empty())
            .collect()
    };

    let dated = |schemes: &[&str]| {
        metas
            .iter()
            .find(|m| {
                m.name.eq_ignore_ascii_case("DC.date") && schemes.contains(&m.scheme.as_str())
            })
            .map(|m| m.content.clone())
    };
    let mut dates: Vec<String> = [
        dated(&["datesubmitted", "filed", "application"]),
        dated(&["issue", "issued", "dateissued", "datepublished", "publication"]),
    ]
    .into_iter()
    .flatten()
    .collect();
    if dates.is_empty() {
        dates = metas
            .iter()
            .filter(|m| m.name.eq_ignore_ascii_case("DC.date") && !m.content.is_empty())
            .map(|m| m.content.clone())
            .collect();
    }

    let mut publication_number = compact_publication(&first(&[
        "citation_patent_publication_number",
        "citation_patent_number",
    ]));
    if publication_number.is_empty() {
        publication_number = publication_from_url(url).unwrap_or_default();
    }

    let mut title = first(&["DC.title", "citation_title"]);
    if title.is_empty() {
        let sel = Selector::parse("title").expect("static selector");
        title = doc
            .select(&sel)
            .next()
            .map(|t| t.text().collect::<String>().trim().to_string())
            .unwrap_or_default();
    }

    PatentRecord {
        url: url.to_string(),
        title,
        doc_type: first(&["DC.type"]),
        description: first(&["DC.description", "description"]),
        application_number: first(&["citation_patent_application_number"]),
        publication_number,
        pdf_url: first(&["citation_pdf_url"]),
        inventors: contributors("inventor"),
        assignee: contributors("assignee").into_iter().next().unwrap_or_default(),
        dates,
        html_tables: Vec::new(),
    }
}

/// Verbatim markup of every table section, in document order.
pub fn extract_table_sections(html: &str) -> Vec<String> {
    match outer_elements(html, TABLE_SECTION_TAG) {
        Ok(spans) => spans.into_iter().map(|s| html[s].to_string()).collect(),
        Err(e) => {
            log::warn!("table sections unreadable: {e}");
            Vec::new()
        }
    }
}
