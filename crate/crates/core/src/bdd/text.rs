use super::{Bdd, BddError, BddManager, Result};

/// Parses the `ite(v, hi, lo)` text produced by
/// [`BddManager::to_ite_string`]. Variable names must already be registered.
pub fn parse_ite(m: &mut BddManager, text: &str) -> Result<Bdd> {
    let mut p = Cursor { text, pos: 0 };
    let f = p.node(m)?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("trailing input"));
    }
    Ok(f)
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn error(&self, message: &str) -> BddError {
        BddError::Parse { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        let text = self.text;
        let rest = &text[start..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '\''))
            .unwrap_or(rest.len());
        self.pos += len;
        &text[start..self.pos]
    }

    fn node(&mut self, m: &mut BddManager) -> Result<Bdd> {
        let start = self.pos;
        match self.ident() {
            "0" => Ok(m.zero()),
            "1" => Ok(m.one()),
            "ite" => {
                self.expect('(')?;
                let name_at = self.pos;
                let name = self.ident().to_string();
                let v = m.var_by_name(&name).ok_or_else(|| {
                    if name.is_empty() {
                        BddError::Parse { offset: name_at, message: "expected variable".into() }
                    } else {
                        BddError::UnknownName(name.clone())
                    }
                })?;
                self.expect(',')?;
                let hi = self.node(m)?;
                self.expect(',')?;
                let lo = self.node(m)?;
                self.expect(')')?;
                let x = m.var(v)?;
                m.ite(x, hi, lo)
            }
            _ => {
                self.pos = start;
                self.skip_ws();
                Err(self.error("expected `0`, `1` or `ite(`"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors() {
        let mut m = BddManager::with_vars(["a"]).unwrap();
        assert!(matches!(parse_ite(&mut m, "ite(b, 1, 0)"), Err(BddError::UnknownName(_))));
        assert!(matches!(parse_ite(&mut m, "ite(a, 1)"), Err(BddError::Parse { .. })));
        assert!(matches!(parse_ite(&mut m, "2"), Err(BddError::Parse { offset: 0, .. })));
        assert!(matches!(parse_ite(&mut m, "1 1"), Err(BddError::Parse { offset: 2, .. })));
    }

    #[test]
    fn non_canonical_input_is_reduced() {
        let mut m = BddManager::with_vars(["a"]).unwrap();
        let f = parse_ite(&mut m, "ite(a, 1, 1)").unwrap();
        assert!(f.is_one());
    }
}
