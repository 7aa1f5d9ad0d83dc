use crate::{Error, Result};

/// S-expression node: an atom or a list of nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SExpr {
    Atom(String),
    List(Vec<SExpr>),
}

impl SExpr {
    pub fn atom(text: &str) -> Self {
        SExpr::Atom(text.to_string())
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(a) => Some(a),
            SExpr::List(_) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::Atom(_) => None,
            SExpr::List(items) => Some(items),
        }
    }

    /// Head atom of a list node, e.g. `HJ` in `(HJ (n laj3) (ax -1.02))`.
    pub fn head(&self) -> Option<&str> {
        self.as_list()?.first()?.as_atom()
    }

    /// Canonical text form: atoms separated by single spaces.
    pub fn serialize(&self) -> String {
        match self {
            SExpr::Atom(a) => a.clone(),
            SExpr::List(items) => {
                let inner: Vec<String> = items.iter().map(SExpr::serialize).collect();
                format!("({})", inner.join(" "))
            }
        }
    }
}

/// Parses exactly one expression; trailing non-whitespace is an error.
pub fn parse_sexpr(text: &str) -> Result<SExpr> {
    let bytes = text.as_bytes();
    let mut at = skip_ws(bytes, 0);
    if at >= bytes.len() {
        return Err(Error::EmptyInput);
    }
    let (expr, next) = parse_node(bytes, at)?;
    at = skip_ws(bytes, next);
    if at < bytes.len() {
        return Err(Error::TrailingText(at));
    }
    Ok(expr)
}

/// Parses a whole server message: a concatenation of top-level expressions.
pub fn parse_message(text: &str) -> Result<Vec<SExpr>> {
    let bytes = text.as_bytes();
    let mut at = skip_ws(bytes, 0);
    if at >= bytes.len() {
        return Err(Error::EmptyInput);
    }
    let mut out = Vec::new();
    while at < bytes.len() {
        let (expr, next) = parse_node(bytes, at)?;
        out.push(expr);
        at = skip_ws(bytes, next);
    }
    Ok(out)
}

fn skip_ws(bytes: &[u8], mut at: usize) -> usize {
    while at < bytes.len() && bytes[at].is_ascii_whitespace() {
        at += 1;
    }
    at
}

fn parse_node(bytes: &[u8], at: usize) -> Result<(SExpr, usize)> {
    if bytes[at] == b'(' {
        let open = at;
        let mut items = Vec::new();
        let mut at = skip_ws(bytes, at + 1);
        loop {
            if at >= bytes.len() {
                return Err(Error::Unbalanced(open));
            }
            if bytes[at] == b')' {
                return Ok((SExpr::List(items), at + 1));
            }
            let (node, next) = parse_node(bytes, at)?;
            items.push(node);
            at = skip_ws(bytes, next);
        }
    } else if bytes[at] == b')' {
        Err(Error::Unbalanced(at))
    } else {
        let start = at;
        let mut at = at;
        while at < bytes.len() && !bytes[at].is_ascii_whitespace() && bytes[at] != b'(' && bytes[at] != b')' {
            at += 1;
        }
        let atom = std::str::from_utf8(&bytes[start..at])
            .map_err(|_| Error::Unbalanced(start))?
            .to_string();
        Ok((SExpr::Atom(atom), at))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_message_parses_to_expected_tree() {
        let expr = parse_sexpr("(time (now 46.62))").unwrap();
        assert_eq!(
            expr,
            SExpr::List(vec![
                SExpr::atom("time"),
                SExpr::List(vec![SExpr::atom("now"), SExpr::atom("46.62")]),
            ])
        );
    }

    #[test]
    fn round_trip_normalizes_whitespace() {
        let expr = parse_sexpr("((a)(b   c))").unwrap();
        assert_eq!(expr.serialize(), "((a) (b c))");
        let again = parse_sexpr(&expr.serialize()).unwrap();
        assert_eq!(expr, again);
    }

    #[test]
    fn message_with_multiple_top_level_nodes() {
        let msg = parse_message("(time (now 1.0))(GYR (n torso) (rt 0 0 0))").unwrap();
        assert_eq!(msg.len(), 2);
        assert_eq!(msg[0].head(), Some("time"));
        assert_eq!(msg[1].head(), Some("GYR"));
    }

    #[test]
    fn errors_carry_byte_offsets() {
        assert_eq!(parse_sexpr(""), Err(Error::EmptyInput));
        assert_eq!(parse_sexpr("   "), Err(Error::EmptyInput));
        assert_eq!(parse_sexpr("(a (b)"), Err(Error::Unbalanced(0)));
        assert_eq!(parse_sexpr(")"), Err(Error::Unbalanced(0)));
        assert_eq!(parse_sexpr("(a) junk)"), Err(Error::TrailingText(4)));
        match parse_sexpr("(a (b (c))") {
            Err(Error::Unbalanced(offset)) => assert_eq!(offset, 0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn atoms_split_on_parentheses() {
        let expr = parse_sexpr("(he1(x))").unwrap();
        assert_eq!(
            expr,
            SExpr::List(vec![
                SExpr::atom("he1"),
                SExpr::List(vec![SExpr::atom("x")]),
            ])
        );
    }
}
