//! Small helpers for the bracket-aware literal grammars.

/// Splits `s` on `sep` occurring outside any `()`, `[]` or `{}` group.
pub(crate) fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (pos, ch) in s.char_indices() {
        match ch {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&s[start..pos]);
                start = pos + ch.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// Returns the inside of `s` if the whole string is one `open ... close` group.
pub(crate) fn strip_group(s: &str, open: char, close: char) -> Option<&str> {
    let s = s.trim();
    if !(s.starts_with(open) && s.ends_with(close)) || s.len() < 2 {
        return None;
    }
    let mut depth = 0i32;
    for (pos, ch) in s.char_indices() {
        match ch {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => {
                depth -= 1;
                if depth == 0 && pos + ch.len_utf8() != s.len() {
                    return None;
                }
            }
            _ => {}
        }
    }
    Some(&s[open.len_utf8()..s.len() - close.len_utf8()])
}

/// True when `s` is balanced with respect to all three bracket kinds.
pub(crate) fn balanced(s: &str) -> bool {
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_respects_nesting() {
        assert_eq!(split_top("(1,2),[3,4]", ','), vec!["(1,2)", "[3,4]"]);
        assert_eq!(split_top("{1+i}x+x^2", '+'), vec!["{1+i}x", "x^2"]);
    }

    #[test]
    fn strip_whole_group_only() {
        assert_eq!(strip_group("(1,2)", '(', ')'), Some("1,2"));
        assert_eq!(strip_group("(1,2)x(3)", '(', ')'), None);
        assert_eq!(strip_group("{[0,1]}", '{', '}'), Some("[0,1]"));
    }
}
