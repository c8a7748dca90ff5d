//! Name cleanup applied before indexing.

use crate::normalize::is_abbrev_shape;

/// Removes one trailing `[...]` or `(...)` group, e.g. a source or type tag.
pub fn strip_trailing_group(name: &str) -> &str {
    let trimmed = name.trim_end();
    for (open, close) in [('[', ']'), ('(', ')')] {
        if trimmed.ends_with(close) {
            if let Some(pos) = trimmed.rfind(open) {
                let head = trimmed[..pos].trim_end();
                if !head.is_empty() {
                    return head;
                }
            }
        }
    }
    trimmed
}

/// A name is an abbreviation when flagged, or when it is short and uppercase.
pub fn is_abbreviation(cleaned: &str, hint: Option<bool>) -> bool {
    hint == Some(true) || is_abbrev_shape(cleaned.trim())
}
