use super::FrontendError;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Tok {
    Ident(String),
    Int(i64),
    // keywords
    Var,
    Bool,
    IntTy,
    Qubit,
    If,
    Else,
    While,
    Skip,
    Consume,
    Meas,
    Def,
    True,
    False,
    // punctuation
    Assign,   // :=
    FromMeas, // <-
    GateApply, // *=
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Colon,
    Ket0, // |0>
    KetPlus, // |+>
    Not,
    AndAnd,
    OrOr,
    Plus,
    Minus,
    Star,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: u32,
    pub col: u32,
}

pub fn lex(src: &str) -> Result<Vec<Token>, FrontendError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut line = 1u32;
    let mut col = 1u32;
    let err = |line, col, msg: String| FrontendError::Lex { line, col, msg };

    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let mut push = |tok| out.push(Token { tok, line: tl, col: tc });
        match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            ' ' | '\t' | '\r' => {}
            '/' if chars.get(i + 1) == Some(&'/') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '(' => push(Tok::LParen),
            ')' => push(Tok::RParen),
            '{' => push(Tok::LBrace),
            '}' => push(Tok::RBrace),
            '[' => push(Tok::LBracket),
            ']' => push(Tok::RBracket),
            ';' => push(Tok::Semi),
            ',' => push(Tok::Comma),
            '+' => push(Tok::Plus),
            '-' => push(Tok::Minus),
            '=' => push(Tok::Eq),
            ':' => {
                if chars.get(i + 1) == Some(&'=') {
                    push(Tok::Assign);
                    i += 1;
                    col += 1;
                } else {
                    push(Tok::Colon);
                }
            }
            '<' => match chars.get(i + 1) {
                Some('-') => {
                    push(Tok::FromMeas);
                    i += 1;
                    col += 1;
                }
                Some('=') => {
                    push(Tok::Le);
                    i += 1;
                    col += 1;
                }
                _ => push(Tok::Lt),
            },
            '>' => {
                if chars.get(i + 1) == Some(&'=') {
                    push(Tok::Ge);
                    i += 1;
                    col += 1;
                } else {
                    push(Tok::Gt);
                }
            }
            '*' => {
                if chars.get(i + 1) == Some(&'=') {
                    push(Tok::GateApply);
                    i += 1;
                    col += 1;
                } else {
                    push(Tok::Star);
                }
            }
            '!' => {
                if chars.get(i + 1) == Some(&'=') {
                    push(Tok::Ne);
                    i += 1;
                    col += 1;
                } else {
                    push(Tok::Not);
                }
            }
            '&' => {
                if chars.get(i + 1) == Some(&'&') {
                    push(Tok::AndAnd);
                    i += 1;
                    col += 1;
                } else {
                    return Err(err(line, col, "expected `&&`".into()));
                }
            }
            '|' => match (chars.get(i + 1), chars.get(i + 2)) {
                (Some('|'), _) => {
                    push(Tok::OrOr);
                    i += 1;
                    col += 1;
                }
                (Some('0'), Some('>')) => {
                    push(Tok::Ket0);
                    i += 2;
                    col += 2;
                }
                (Some('+'), Some('>')) => {
                    push(Tok::KetPlus);
                    i += 2;
                    col += 2;
                }
                _ => return Err(err(line, col, "expected `||`, `|0>` or `|+>`".into())),
            },
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                    col += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = text
                    .parse::<i64>()
                    .map_err(|_| err(tl, tc, format!("integer literal out of range: {}", text)))?;
                out.push(Token { tok: Tok::Int(n), line: tl, col: tc });
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                    col += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let tok = match text.as_str() {
                    "var" => Tok::Var,
                    "bool" => Tok::Bool,
                    "int" => Tok::IntTy,
                    "qubit" => Tok::Qubit,
                    "if" => Tok::If,
                    "else" => Tok::Else,
                    "while" => Tok::While,
                    "skip" => Tok::Skip,
                    "consume" => Tok::Consume,
                    "meas" => Tok::Meas,
                    "def" => Tok::Def,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(text),
                };
                out.push(Token { tok, line: tl, col: tc });
                continue;
            }
            other => {
                return Err(err(line, col, format!("unexpected character `{}`", other)));
            }
        }
        i += 1;
        col += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kets_and_or_disambiguate() {
        let ts = lex("q := |0>; p := |+>; b := x || y;").unwrap();
        let toks: Vec<Tok> = ts.into_iter().map(|t| t.tok).collect();
        assert!(toks.contains(&Tok::Ket0));
        assert!(toks.contains(&Tok::KetPlus));
        assert!(toks.contains(&Tok::OrOr));
    }

    #[test]
    fn comments_and_positions() {
        let ts = lex("x := 1; // trailing\n  y := 2;").unwrap();
        let y = ts.iter().find(|t| t.tok == Tok::Ident("y".into())).unwrap();
        assert_eq!((y.line, y.col), (2, 3));
    }

    #[test]
    fn compound_operators() {
        let ts = lex("x <- meas(q); k *= 2; a <= b; a >= b; a != b;").unwrap();
        let toks: Vec<Tok> = ts.into_iter().map(|t| t.tok).collect();
        assert!(toks.contains(&Tok::FromMeas));
        assert!(toks.contains(&Tok::GateApply));
        assert!(toks.contains(&Tok::Le));
        assert!(toks.contains(&Tok::Ge));
        assert!(toks.contains(&Tok::Ne));
    }

    #[test]
    fn stray_ket_is_an_error() {
        assert!(matches!(lex("x := |1>;"), Err(FrontendError::Lex { .. })));
    }
}
