use super::diag::{Diagnostic, LineIndex, Span};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    /// Raw numeric literal text.
    Number(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Semi,
    Colon,
    Eq,
    Plus,
    Arrow,
    Gt,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Number(s) => format!("number {s}"),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Semi => "';'".into(),
            Tok::Colon => "':'".into(),
            Tok::Eq => "'='".into(),
            Tok::Plus => "'+'".into(),
            Tok::Arrow => "'->'".into(),
            Tok::Gt => "'>'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits `src` into tokens. Unknown characters are reported and skipped.
/// The returned list always ends with `Eof`.
pub fn lex(src: &str, diags: &mut Vec<Diagnostic>) -> Vec<Token> {
    let index = LineIndex::new(src);
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c == '#' {
            while let Some(&(_, c)) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
            continue;
        }
        let single = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ';' => Some(Tok::Semi),
            ':' => Some(Tok::Colon),
            '=' => Some(Tok::Eq),
            '+' => Some(Tok::Plus),
            '>' => Some(Tok::Gt),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            out.push(Token {
                tok,
                span: index.span(start, start + 1),
            });
            continue;
        }
        if c == '-' && bytes.get(start + 1) == Some(&b'>') {
            chars.next();
            chars.next();
            out.push(Token {
                tok: Tok::Arrow,
                span: index.span(start, start + 2),
            });
            continue;
        }
        let signed_number = c == '-' && bytes.get(start + 1).is_some_and(u8::is_ascii_digit);
        if c.is_ascii_digit() || signed_number {
            let end = scan_number(bytes, start);
            while chars.peek().is_some_and(|&(i, _)| i < end) {
                chars.next();
            }
            out.push(Token {
                tok: Tok::Number(src[start..end].to_string()),
                span: index.span(start, end),
            });
            continue;
        }
        if is_ident_start(c) {
            let mut end = start;
            while let Some(&(i, c)) = chars.peek() {
                if !is_ident_char(c) {
                    break;
                }
                end = i + c.len_utf8();
                chars.next();
            }
            out.push(Token {
                tok: Tok::Ident(src[start..end].to_string()),
                span: index.span(start, end),
            });
            continue;
        }
        chars.next();
        let span = index.span(start, start + c.len_utf8());
        let shown = if c.is_control() {
            format!("U+{:04X}", c as u32)
        } else {
            c.to_string()
        };
        diags.push(Diagnostic::error(
            "E001",
            span,
            format!("unexpected character '{shown}'"),
        ));
    }
    out.push(Token {
        tok: Tok::Eof,
        span: index.span(src.len(), src.len()),
    });
    out
}

/// End of the numeric literal starting at `start`: `-?digits(.digits)?([eE][+-]?digits)?`.
fn scan_number(b: &[u8], start: usize) -> usize {
    let digits = |mut i: usize| {
        while b.get(i).is_some_and(u8::is_ascii_digit) {
            i += 1;
        }
        i
    };
    let mut i = start;
    if b[i] == b'-' {
        i += 1;
    }
    i = digits(i);
    if b.get(i) == Some(&b'.') && b.get(i + 1).is_some_and(u8::is_ascii_digit) {
        i = digits(i + 1);
    }
    if matches!(b.get(i), Some(b'e' | b'E')) {
        let mut j = i + 1;
        if matches!(b.get(j), Some(b'+' | b'-')) {
            j += 1;
        }
        if b.get(j).is_some_and(u8::is_ascii_digit) {
            i = digits(j);
        }
    }
    i
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<Tok> {
        let mut d = Vec::new();
        let t = lex(src, &mut d);
        assert!(d.is_empty(), "{d:?}");
        t.into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn tokens() {
        assert_eq!(
            kinds("map F { a -> b; } # comment\n x = -0.5e3"),
            vec![
                Tok::Ident("map".into()),
                Tok::Ident("F".into()),
                Tok::LBrace,
                Tok::Ident("a".into()),
                Tok::Arrow,
                Tok::Ident("b".into()),
                Tok::Semi,
                Tok::RBrace,
                Tok::Ident("x".into()),
                Tok::Eq,
                Tok::Number("-0.5e3".into()),
                Tok::Eof,
            ]
        );
    }

    #[test]
    fn reports_bad_characters_with_spans() {
        let mut d = Vec::new();
        let t = lex("a @ é b", &mut d);
        assert_eq!(d.len(), 2);
        assert_eq!((d[0].span.start.offset, d[0].span.end.offset), (2, 3));
        assert_eq!((d[1].span.start.offset, d[1].span.end.offset), (4, 6));
        assert_eq!(d[1].span.start.column, 5);
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn lone_minus_is_an_error() {
        let mut d = Vec::new();
        lex("a - b", &mut d);
        assert_eq!(d.len(), 1);
    }
}
