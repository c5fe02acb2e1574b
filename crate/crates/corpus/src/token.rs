//! The token grammar shared by indexing, alias matching and listing names.
//!
//! A token is a maximal run of Unicode letters or digits, optionally joined
//! to further runs by single hyphens (`1p-lsd`, `α-pvp`). Tokens are
//! lowercased, must be at least two characters long, and must contain at
//! least one letter, so bare numbers such as `100` or `2010-03` are dropped.

/// Splits `text` into tokens, in order of appearance.
///
/// ```
/// use npswatch_corpus::tokenize;
/// assert_eq!(tokenize("Tried 1P-LSD, then α-PVP!"), ["tried", "1p-lsd", "then", "α-pvp"]);
/// assert_eq!(tokenize("100 mg of MDPV -- wow"), ["mg", "of", "mdpv", "wow"]);
/// ```
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut current = String::new();
    while let Some(c) = chars.next() {
        if c.is_alphanumeric() {
            current.extend(c.to_lowercase());
        } else if c == '-' && !current.is_empty() && !current.ends_with('-') {
            // Only a hyphen followed directly by a letter or digit joins runs.
            match chars.peek() {
                Some(next) if next.is_alphanumeric() => current.push('-'),
                _ => flush(&mut current, &mut out),
            }
        } else {
            flush(&mut current, &mut out);
        }
    }
    flush(&mut current, &mut out);
    out
}

fn flush(current: &mut String, out: &mut Vec<String>) {
    if current.chars().count() >= 2 && current.chars().any(char::is_alphabetic) {
        out.push(std::mem::take(current));
    } else {
        current.clear();
    }
}

/// Whether `s` is exactly one token under the grammar, in folded form.
pub fn is_token(s: &str) -> bool {
    matches!(tokenize(s).as_slice(), [t] if t == s)
}
