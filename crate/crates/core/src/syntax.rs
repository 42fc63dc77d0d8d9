//! Concrete syntax for terms.
//!
//! ```text
//! ord  := "0" | "K" | prin ("+" prin)*
//! prin := "phi(" ord "," ord ")" | "w^(" ord ")" | "Om(" ord ")"
//!       | "psi(" ord ";" ord ")" | "psi(" ord ";" "[" exp ("," exp)* "]" ";" ord ")"
//! exp  := "0" | ord | lam ("+" lam)*
//! lam  := "L^(" exp ")*(" ord ")"
//! ```
//!
//! A decimal `n` stands for `n` copies of `phi(0,0)`; decimals and `K` may
//! also appear as summands. Whitespace is ignored.

use crate::error::{OtError, Result};
use crate::term::{CoeffSeq, ExponentTerm, LamTerm, OrdKind, OrdinalTerm};

const MAX_DECIMAL: usize = 1 << 16;

/// Parses an ordinal term; ψ-sequences must have `n - 2` entries.
pub fn parse_ord(text: &str, n: usize) -> Result<OrdinalTerm> {
    Parser::new(text, Some(n)).finish(|p| p.ord())
}

/// Parses an exponent term, accepting ψ-sequences of any length.
pub fn parse_exp(text: &str) -> Result<ExponentTerm> {
    Parser::new(text, None).finish(|p| p.exp())
}

/// Parses an exponent term; ψ-sequences must have `n - 2` entries.
pub fn parse_exp_n(text: &str, n: usize) -> Result<ExponentTerm> {
    Parser::new(text, Some(n)).finish(|p| p.exp())
}

/// Parses a bracketed sequence `[e, …, e]` of exactly `n - 2` entries.
pub fn parse_seq(text: &str, n: usize) -> Result<CoeffSeq> {
    Parser::new(text, Some(n)).finish(|p| p.seq())
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: Option<usize>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, n: Option<usize>) -> Self {
        Self {
            src: text.as_bytes(),
            pos: 0,
            n,
        }
    }

    fn finish<T>(mut self, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        let v = f(&mut self)?;
        self.skip_ws();
        if self.pos < self.src.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(v)
    }

    fn err(&self, msg: &str) -> OtError {
        OtError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Consumes `tok` (ignoring inner whitespace) if it comes next.
    fn eat(&mut self, tok: &str) -> bool {
        let save = self.pos;
        for &c in tok.as_bytes() {
            self.skip_ws();
            if self.src.get(self.pos) == Some(&c) {
                self.pos += 1;
            } else {
                self.pos = save;
                return false;
            }
        }
        true
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.skip_ws();
            Err(self.err(&format!("expected `{tok}`")))
        }
    }

    fn peek_digit(&mut self) -> bool {
        self.skip_ws();
        self.src.get(self.pos).is_some_and(u8::is_ascii_digit)
    }

    fn decimal(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("digits are ASCII");
        match s.parse::<usize>() {
            Ok(v) if v <= MAX_DECIMAL => Ok(v),
            _ => {
                self.pos = start;
                Err(self.err("decimal literal too large"))
            }
        }
    }

    fn ord(&mut self) -> Result<OrdinalTerm> {
        let mut parts = Vec::new();
        let mut saw_zero = false;
        loop {
            let start = self.pos;
            let summand = self.summand()?;
            if summand.is_zero() {
                saw_zero = true;
            }
            if saw_zero && (!parts.is_empty() || self.peek_plus()) {
                self.pos = start;
                self.skip_ws();
                return Err(self.err("0 cannot be a summand"));
            }
            parts.extend(summand.parts().iter().cloned());
            if !self.eat_plus_before_ord() {
                break;
            }
        }
        Ok(OrdinalTerm::from_parts(parts))
    }

    fn peek_plus(&mut self) -> bool {
        self.skip_ws();
        self.src.get(self.pos) == Some(&b'+')
    }

    /// Consumes a `+` unless it introduces a Λ-summand.
    fn eat_plus_before_ord(&mut self) -> bool {
        let save = self.pos;
        if !self.eat("+") {
            return false;
        }
        if self.eat("L^(") {
            self.pos = save;
            return false;
        }
        true
    }

    fn summand(&mut self) -> Result<OrdinalTerm> {
        if self.peek_digit() {
            return Ok(OrdinalTerm::nat(self.decimal()?));
        }
        if self.eat("phi(") {
            let b = self.ord()?;
            self.expect(",")?;
            let g = self.ord()?;
            self.expect(")")?;
            return Ok(OrdinalTerm::raw_veblen(b, g));
        }
        if self.eat("w^(") {
            let b = self.ord()?;
            self.expect(")")?;
            return Ok(OrdinalTerm::raw_omega_exp(b));
        }
        if self.eat("Om(") {
            let b = self.ord()?;
            self.expect(")")?;
            return Ok(OrdinalTerm::raw_omega_idx(b));
        }
        if self.eat("psi(") {
            let pi = self.ord()?;
            self.expect(";")?;
            let nu = if self.peek_bracket() {
                let s = self.seq()?;
                self.expect(";")?;
                Some(s)
            } else {
                None
            };
            let a = self.ord()?;
            self.expect(")")?;
            return Ok(OrdinalTerm::raw_psi(pi, nu, a));
        }
        if self.eat("K") {
            return Ok(OrdinalTerm::big_k());
        }
        self.skip_ws();
        Err(self.err("expected an ordinal term"))
    }

    fn peek_bracket(&mut self) -> bool {
        self.skip_ws();
        self.src.get(self.pos) == Some(&b'[')
    }

    fn seq(&mut self) -> Result<CoeffSeq> {
        self.expect("[")?;
        let mut entries = vec![self.exp()?];
        while self.eat(",") {
            entries.push(self.exp()?);
        }
        self.expect("]")?;
        if let Some(n) = self.n {
            if entries.len() + 2 != n {
                return Err(OtError::Arity {
                    found: entries.len(),
                    expected: n.saturating_sub(2),
                });
            }
        }
        Ok(CoeffSeq::new(entries))
    }

    fn exp(&mut self) -> Result<ExponentTerm> {
        let save = self.pos;
        if !self.eat("L^(") {
            return Ok(ExponentTerm::ord(self.ord()?));
        }
        self.pos = save;
        let mut ts = vec![self.lam()?];
        loop {
            let save = self.pos;
            if !self.eat("+") {
                break;
            }
            let at = self.pos;
            if !self.eat("L^(") {
                self.pos = at;
                self.skip_ws();
                return Err(self.err("Λ-sums cannot mix with ordinal summands"));
            }
            self.pos = save;
            self.expect("+")?;
            ts.push(self.lam()?);
        }
        Ok(ExponentTerm::raw_lam_sum(ts))
    }

    fn lam(&mut self) -> Result<LamTerm> {
        self.expect("L^(")?;
        self.skip_ws();
        let at = self.pos;
        let exp = self.exp()?;
        if exp.is_zero() {
            self.pos = at;
            return Err(self.err("zero exponent in a Λ-sum"));
        }
        self.expect(")")?;
        self.expect("*(")?;
        self.skip_ws();
        let at = self.pos;
        let coeff = self.ord()?;
        if coeff.is_zero() {
            self.pos = at;
            return Err(self.err("zero coefficient in a Λ-sum"));
        }
        self.expect(")")?;
        Ok(LamTerm { exp, coeff })
    }
}

/// Prints an ordinal term in the grammar above.
pub fn print_ord(t: &OrdinalTerm) -> String {
    let mut s = String::new();
    write_ord(t, &mut s);
    s
}

fn write_ord(t: &OrdinalTerm, out: &mut String) {
    match t.kind() {
        OrdKind::Zero => out.push('0'),
        _ => {
            let parts = t.parts();
            let mut i = 0;
            let mut first = true;
            while i < parts.len() {
                if !first {
                    out.push('+');
                }
                first = false;
                if parts[i].is_one() {
                    let run = parts[i..].iter().take_while(|p| p.is_one()).count();
                    out.push_str(&run.to_string());
                    i += run;
                } else {
                    write_principal(&parts[i], out);
                    i += 1;
                }
            }
        }
    }
}

fn write_principal(t: &OrdinalTerm, out: &mut String) {
    match t.kind() {
        OrdKind::BigK => out.push('K'),
        OrdKind::Veblen(b, g) => {
            out.push_str("phi(");
            write_ord(b, out);
            out.push(',');
            write_ord(g, out);
            out.push(')');
        }
        OrdKind::OmegaExp(b) => {
            out.push_str("w^(");
            write_ord(b, out);
            out.push(')');
        }
        OrdKind::OmegaIdx(b) => {
            out.push_str("Om(");
            write_ord(b, out);
            out.push(')');
        }
        OrdKind::Psi { pi, nu, a } => {
            out.push_str("psi(");
            write_ord(pi, out);
            out.push_str("; ");
            if let Some(nu) = nu {
                out.push_str(&print_seq(nu.entries()));
                out.push_str("; ");
            }
            write_ord(a, out);
            out.push(')');
        }
        OrdKind::Zero | OrdKind::Sum(_) => write_ord(t, out),
    }
}

/// Prints an exponent term.
pub fn print_exp(x: &ExponentTerm) -> String {
    match x {
        ExponentTerm::Zero => "0".into(),
        ExponentTerm::Ord(a) => print_ord(a),
        ExponentTerm::LamSum(ts) => ts
            .iter()
            .map(|t| format!("L^({})*({})", print_exp(&t.exp), print_ord(&t.coeff)))
            .collect::<Vec<_>>()
            .join("+"),
    }
}

/// Prints a sequence as `[e,…,e]`.
pub fn print_seq(xs: &[ExponentTerm]) -> String {
    let inner: Vec<String> = xs.iter().map(print_exp).collect();
    format!("[{}]", inner.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sugar() {
        let t = parse_ord("psi(K; 0)", 4).unwrap();
        assert!(matches!(t.kind(), OrdKind::Psi { nu: None, .. }));
        let t = parse_ord("psi(K; [0,1]; 1)", 4).unwrap();
        assert_eq!(t.psi_nu().unwrap().len(), 2);
        assert_eq!(parse_ord("3", 4).unwrap(), OrdinalTerm::nat(3));
        assert_eq!(parse_ord("phi(0,0)", 4).unwrap(), OrdinalTerm::one());
        assert_eq!(parse_ord(" K + 1 ", 4).unwrap().to_string(), "K+1");
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_exp("L^(1)*(2) + L^(0)*(1)"), Err(OtError::Syntax { .. })));
        assert!(matches!(parse_exp("L^(1)*(0)"), Err(OtError::Syntax { .. })));
        assert!(matches!(parse_exp("L^(1)*(1)+1"), Err(OtError::Syntax { .. })));
        assert!(matches!(
            parse_ord("psi(K; [0,1,2]; 1)", 4),
            Err(OtError::Arity { found: 3, expected: 2 })
        ));
        assert!(matches!(parse_ord("K+0", 4), Err(OtError::Syntax { .. })));
        assert!(matches!(parse_ord("0+K", 4), Err(OtError::Syntax { .. })));
        assert!(matches!(parse_ord("phi(0,0", 4), Err(OtError::Syntax { .. })));
        assert!(matches!(parse_ord("K K", 4), Err(OtError::Syntax { .. })));
        assert!(matches!(parse_ord("", 4), Err(OtError::Syntax { .. })));
    }

    #[test]
    fn printing() {
        let cases = [
            "0",
            "K",
            "K+1",
            "3",
            "phi(1,0)",
            "w^(K+1)",
            "Om(1)",
            "psi(Om(1); w^(K+1))",
            "psi(K; [0,1]; 1)",
            "psi(psi(K; [0,1]; 1); [L^(1)*(2),0]; 2)",
            "psi(K; [L^(L^(1)*(1))*(2)+L^(K)*(K),0]; 1)",
        ];
        for c in cases {
            let t = parse_ord(c, 4).unwrap();
            assert_eq!(t.to_string(), c);
            assert_eq!(parse_ord(&t.to_string(), 4).unwrap(), t);
        }
    }

    #[test]
    fn sequences() {
        let s = parse_seq("[L^(2)*(1), 1]", 4).unwrap();
        assert_eq!(s.to_string(), "[L^(2)*(1),1]");
        assert!(parse_seq("[1]", 4).is_err());
    }
}
