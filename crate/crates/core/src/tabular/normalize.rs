use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

/// Folds a string for matching: compatibility decomposition (which also turns
/// subscript and superscript digits into ASCII digits), removal of combining
/// marks, lowercasing, and whitespace collapsing.
///
/// The fold is applied until it reaches a fixed point, so the function is
/// idempotent even for characters whose lowercase form decomposes further.
pub fn normalize_text(s: &str) -> String {
    let mut current = fold_once(s);
    for _ in 0..4 {
        let next = fold_once(&current);
        if next == current {
            break;
        }
        current = next;
    }
    current
}

fn fold_once(s: &str) -> String {
    let stripped: String = s.nfkd().filter(|c| !is_combining_mark(*c)).collect();
    let lowered = stripped.to_lowercase();
    let mut out = String::with_capacity(lowered.len());
    for word in lowered.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}
