//! Text form of product expressions.
//!
//! ```text
//! product  := factor+
//! factor   := vector pow? | family
//! vector   := '[' int ',' int ']'
//! pow      := '^' rational | '^(' rational ')'
//! family   := ('fam'|'famrev') ident 'in' int '..' '{' item+ '}'
//! item     := vecexpr pow?
//! ```
//!
//! Family vector components are integer-linear in the index (`1+p`, `2p`,
//! `3`) or base-2 geometric (`2^p`, `3*2^p`); the two kinds cannot mix inside
//! one vector. Family exponents additionally admit a halving suffix,
//! `rational '/' '2^' index`, as in `[2^p,2^p]^4/2^p`. All numbers are exact
//! integers or fractions; decimals are rejected by the grammar. `famrev`
//! emits its factor groups in descending index order.
//!
//! `print_product` renders the same grammar back and `parse_product` of the
//! result reproduces the expression, so the two functions round-trip.

use crate::error::Error;
use crate::lattice::LatticeVector;
use crate::product::{
    Direction, ExponentMap, Factor, Family, FamilyItem, ProductExpr, VectorMap,
};
use crate::rat::{format_rat, is_integer, rat_int, Rat};

use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq)]
enum TokKind {
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Caret,
    Slash,
    Star,
    Plus,
    Minus,
    DotDot,
    Int(i64),
    Ident(String),
}

impl TokKind {
    fn describe(&self) -> String {
        match self {
            TokKind::LBracket => "`[`".into(),
            TokKind::RBracket => "`]`".into(),
            TokKind::LBrace => "`{`".into(),
            TokKind::RBrace => "`}`".into(),
            TokKind::LParen => "`(`".into(),
            TokKind::RParen => "`)`".into(),
            TokKind::Comma => "`,`".into(),
            TokKind::Caret => "`^`".into(),
            TokKind::Slash => "`/`".into(),
            TokKind::Star => "`*`".into(),
            TokKind::Plus => "`+`".into(),
            TokKind::Minus => "`-`".into(),
            TokKind::DotDot => "`..`".into(),
            TokKind::Int(v) => format!("`{v}`"),
            TokKind::Ident(s) => format!("`{s}`"),
        }
    }
}

#[derive(Debug, Clone)]
struct Tok {
    kind: TokKind,
    pos: usize,
}

fn syntax_error(text: &str, pos: usize, msg: impl Into<String>) -> Error {
    let mut line = 1;
    let mut column = 1;
    for (i, ch) in text.char_indices() {
        if i >= pos {
            break;
        }
        if ch == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    Error::Parse {
        pos,
        msg: format!("line {line}, column {column}: {}", msg.into()),
    }
}

fn tokenize(text: &str) -> Result<Vec<Tok>, Error> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let pos = i;
        let c = bytes[i] as char;
        let kind = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '[' => TokKind::LBracket,
            ']' => TokKind::RBracket,
            '{' => TokKind::LBrace,
            '}' => TokKind::RBrace,
            '(' => TokKind::LParen,
            ')' => TokKind::RParen,
            ',' => TokKind::Comma,
            '^' => TokKind::Caret,
            '/' => TokKind::Slash,
            '*' => TokKind::Star,
            '+' => TokKind::Plus,
            '-' => TokKind::Minus,
            '.' => {
                if bytes.get(i + 1) == Some(&b'.') {
                    i += 1;
                    TokKind::DotDot
                } else {
                    return Err(syntax_error(
                        text,
                        pos,
                        "single `.`: only integer and `p/q` literals are accepted",
                    ));
                }
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let value: i64 = text[i..j]
                    .parse()
                    .map_err(|_| syntax_error(text, pos, "integer literal too large"))?;
                i = j - 1;
                TokKind::Int(value)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < bytes.len()
                    && ((bytes[j] as char).is_ascii_alphanumeric() || bytes[j] == b'_')
                {
                    j += 1;
                }
                let word = text[i..j].to_string();
                i = j - 1;
                TokKind::Ident(word)
            }
            other => {
                return Err(syntax_error(text, pos, format!("unexpected `{other}`")));
            }
        };
        toks.push(Tok { kind, pos });
        i += 1;
    }
    Ok(toks)
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<Tok>,
    at: usize,
}

/// A parsed exponent: constant, or constant over `2^index`.
enum PowVal {
    Const(Rat),
    Halving(Rat),
}

/// One family vector component while its kind is still open.
#[derive(Default)]
struct Component {
    constant: i64,
    step: i64,
    pow2: Option<i64>,
}

impl<'a> Parser<'a> {
    fn error(&self, pos: usize, msg: impl Into<String>) -> Error {
        syntax_error(self.text, pos, msg)
    }

    fn end_pos(&self) -> usize {
        self.text.len()
    }

    fn peek(&self) -> Option<&TokKind> {
        self.toks.get(self.at).map(|t| &t.kind)
    }

    fn peek2(&self) -> Option<&TokKind> {
        self.toks.get(self.at + 1).map(|t| &t.kind)
    }

    fn pos(&self) -> usize {
        self.toks
            .get(self.at)
            .map(|t| t.pos)
            .unwrap_or_else(|| self.end_pos())
    }

    fn next(&mut self, what: &str) -> Result<Tok, Error> {
        let tok = self
            .toks
            .get(self.at)
            .cloned()
            .ok_or_else(|| self.error(self.end_pos(), format!("expected {what}, found end")))?;
        self.at += 1;
        Ok(tok)
    }

    fn eat(&mut self, kind: &TokKind) -> bool {
        if self.peek() == Some(kind) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokKind, what: &str) -> Result<(), Error> {
        let tok = self.next(what)?;
        if tok.kind != kind {
            return Err(self.error(
                tok.pos,
                format!("expected {what}, found {}", tok.kind.describe()),
            ));
        }
        Ok(())
    }

    fn signed_int(&mut self, what: &str) -> Result<i64, Error> {
        let negative = self.eat(&TokKind::Minus);
        let tok = self.next(what)?;
        match tok.kind {
            TokKind::Int(v) => Ok(if negative { -v } else { v }),
            other => Err(self.error(
                tok.pos,
                format!("expected {what}, found {}", other.describe()),
            )),
        }
    }

    /// `p/q` with an exact zero-denominator check.
    fn make_rat(&self, num: i64, den: i64, pos: usize) -> Result<Rat, Error> {
        if den == 0 {
            return Err(self.error(pos, format!("zero denominator in `{num}/{den}`")));
        }
        Ok(Rat::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Exponent after `^`. `index` enables the halving form `c/2^index`.
    fn parse_pow(&mut self, index: Option<&str>) -> Result<PowVal, Error> {
        let paren = self.eat(&TokKind::LParen);
        let num = self.signed_int("an exponent")?;
        let mut value = Rat::from_integer(BigInt::from(num));
        let mut halving = false;
        if self.peek() == Some(&TokKind::Slash) {
            let slash_pos = self.pos();
            self.at += 1;
            let den_pos = self.pos();
            let den = self.signed_int("a denominator")?;
            if self.peek() == Some(&TokKind::Caret) {
                // `c/2^p`: the slash starts the halving suffix
                self.halving_suffix(index, slash_pos, den, den_pos)?;
                halving = true;
            } else {
                value = self.make_rat(num, den, den_pos)?;
            }
        }
        if !halving && self.peek() == Some(&TokKind::Slash) {
            // fractional halving, `c/d/2^p`
            let slash_pos = self.pos();
            self.at += 1;
            let den_pos = self.pos();
            let den = self.signed_int("`2`")?;
            self.halving_suffix(index, slash_pos, den, den_pos)?;
            halving = true;
        }
        if paren {
            self.expect(TokKind::RParen, "`)` closing the exponent")?;
        }
        Ok(if halving {
            PowVal::Halving(value)
        } else {
            PowVal::Const(value)
        })
    }

    /// Consumes `^index` after `c/2`, validating the base and index name.
    fn halving_suffix(
        &mut self,
        index: Option<&str>,
        slash_pos: usize,
        den: i64,
        den_pos: usize,
    ) -> Result<(), Error> {
        let Some(index) = index else {
            return Err(self.error(
                slash_pos,
                "geometric exponents are only available inside a family",
            ));
        };
        if den != 2 {
            return Err(self.error(den_pos, "geometric exponents halve by 2"));
        }
        self.expect(TokKind::Caret, "`^` of the halving suffix")?;
        let tok = self.next("the family index")?;
        match tok.kind {
            TokKind::Ident(name) if name == index => Ok(()),
            other => Err(self.error(
                tok.pos,
                format!("expected the family index `{index}`, found {}", other.describe()),
            )),
        }
    }

    /// Explicit `[a, b]` with constant components.
    fn parse_vector_literal(&mut self) -> Result<LatticeVector, Error> {
        self.expect(TokKind::LBracket, "`[`")?;
        let a = self.signed_int("a coordinate")?;
        self.expect(TokKind::Comma, "`,`")?;
        let b = self.signed_int("a coordinate")?;
        self.expect(TokKind::RBracket, "`]`")?;
        LatticeVector::try_new(a, b)
    }

    /// One term of a family component; `sign` multiplies its contribution.
    fn component_term(
        &mut self,
        comp: &mut Component,
        sign: i64,
        index: &str,
    ) -> Result<(), Error> {
        let tok = self.next("a component term")?;
        match tok.kind {
            TokKind::Int(v) => {
                match self.peek() {
                    // `2^p`
                    Some(TokKind::Caret) => {
                        if v != 2 {
                            return Err(self
                                .error(tok.pos, "geometric components scale by powers of 2"));
                        }
                        self.at += 1;
                        self.expect_index(index)?;
                        *comp.pow2.get_or_insert(0) += sign;
                    }
                    // `3p` or `3*p` or `3*2^p`
                    Some(TokKind::Star) | Some(TokKind::Ident(_)) => {
                        let star = self.eat(&TokKind::Star);
                        if star && matches!(self.peek(), Some(TokKind::Int(2)))
                            && self.peek2() == Some(&TokKind::Caret)
                        {
                            self.at += 2;
                            self.expect_index(index)?;
                            *comp.pow2.get_or_insert(0) += sign * v;
                        } else {
                            self.expect_index(index)?;
                            comp.step += sign * v;
                        }
                    }
                    _ => comp.constant += sign * v,
                }
            }
            TokKind::Ident(name) if name == index => comp.step += sign,
            TokKind::Ident(name) => {
                return Err(self.error(
                    tok.pos,
                    format!("unknown index `{name}` (the family index is `{index}`)"),
                ));
            }
            other => {
                return Err(self.error(
                    tok.pos,
                    format!("expected a component term, found {}", other.describe()),
                ));
            }
        }
        Ok(())
    }

    fn expect_index(&mut self, index: &str) -> Result<(), Error> {
        let tok = self.next("the family index")?;
        match tok.kind {
            TokKind::Ident(name) if name == index => Ok(()),
            other => Err(self.error(
                tok.pos,
                format!("expected the family index `{index}`, found {}", other.describe()),
            )),
        }
    }

    fn parse_component(&mut self, index: &str) -> Result<Component, Error> {
        let start = self.pos();
        let mut comp = Component::default();
        let sign = if self.eat(&TokKind::Minus) { -1 } else { 1 };
        self.component_term(&mut comp, sign, index)?;
        loop {
            let sign = if self.eat(&TokKind::Plus) {
                1
            } else if self.eat(&TokKind::Minus) {
                -1
            } else {
                break;
            };
            self.component_term(&mut comp, sign, index)?;
        }
        if comp.pow2.is_some() && (comp.constant != 0 || comp.step != 0) {
            return Err(self.error(
                start,
                "component mixes linear and geometric terms",
            ));
        }
        Ok(comp)
    }

    /// `[vecexpr, vecexpr]` inside a family body.
    fn parse_vector_map(&mut self, index: &str) -> Result<VectorMap, Error> {
        let open = self.pos();
        self.expect(TokKind::LBracket, "`[`")?;
        let first = self.parse_component(index)?;
        self.expect(TokKind::Comma, "`,`")?;
        let second = self.parse_component(index)?;
        self.expect(TokKind::RBracket, "`]`")?;
        if first.pow2.is_none() && second.pow2.is_none() {
            return Ok(VectorMap::Affine {
                base: (first.constant, second.constant),
                step: (first.step, second.step),
            });
        }
        let coeff = |c: &Component| -> Option<i64> {
            match c.pow2 {
                Some(k) => Some(k),
                None if c.constant == 0 && c.step == 0 => Some(0),
                None => None,
            }
        };
        match (coeff(&first), coeff(&second)) {
            (Some(a), Some(b)) => Ok(VectorMap::Pow2 { base: (a, b) }),
            _ => Err(self.error(
                open,
                "vector mixes linear and geometric components",
            )),
        }
    }

    fn parse_family(&mut self, direction: Direction) -> Result<Family, Error> {
        let tok = self.next("the family index name")?;
        let index = match tok.kind {
            TokKind::Ident(name) if name != "fam" && name != "famrev" && name != "in" => name,
            TokKind::Ident(name) => {
                return Err(self.error(tok.pos, format!("`{name}` is reserved")));
            }
            other => {
                return Err(self.error(
                    tok.pos,
                    format!("expected the family index name, found {}", other.describe()),
                ));
            }
        };
        let tok = self.next("`in`")?;
        if tok.kind != TokKind::Ident("in".to_string()) {
            return Err(self.error(tok.pos, format!("expected `in`, found {}", tok.kind.describe())));
        }
        let start = self.signed_int("the start index")?;
        self.expect(TokKind::DotDot, "`..`")?;
        self.expect(TokKind::LBrace, "`{`")?;
        let mut items = Vec::new();
        while self.peek() != Some(&TokKind::RBrace) {
            let vector = self.parse_vector_map(&index)?;
            let exponent = if self.eat(&TokKind::Caret) {
                match self.parse_pow(Some(&index))? {
                    PowVal::Const(c) => ExponentMap::Const(c),
                    PowVal::Halving(c) => ExponentMap::Halving(c),
                }
            } else {
                ExponentMap::Const(rat_int(1))
            };
            items.push(FamilyItem { vector, exponent });
            if self.peek().is_none() {
                return Err(self.error(self.end_pos(), "expected `}` closing the family"));
            }
        }
        self.expect(TokKind::RBrace, "`}`")?;
        if items.is_empty() {
            return Err(self.error(self.pos(), "family has no factors"));
        }
        Family::new(direction, index, start, items)
    }

    fn parse_factor(&mut self) -> Result<Factor, Error> {
        match self.peek() {
            Some(TokKind::LBracket) => {
                let n = self.parse_vector_literal()?;
                let exponent = if self.eat(&TokKind::Caret) {
                    match self.parse_pow(None)? {
                        PowVal::Const(c) => c,
                        PowVal::Halving(_) => unreachable!("rejected without an index"),
                    }
                } else {
                    rat_int(1)
                };
                Ok(Factor::Explicit { n, exponent })
            }
            Some(TokKind::Ident(name)) if name == "fam" => {
                self.at += 1;
                Ok(Factor::Family(self.parse_family(Direction::Forward)?))
            }
            Some(TokKind::Ident(name)) if name == "famrev" => {
                self.at += 1;
                Ok(Factor::Family(self.parse_family(Direction::Backward)?))
            }
            Some(other) => {
                let msg = format!("expected a factor, found {}", other.describe());
                Err(self.error(self.pos(), msg))
            }
            None => Err(self.error(self.end_pos(), "expected a factor, found end")),
        }
    }
}

/// Parses a product expression; see the module grammar.
pub fn parse_product(text: &str) -> Result<ProductExpr, Error> {
    let toks = tokenize(text)?;
    let mut parser = Parser { text, toks, at: 0 };
    let mut factors = Vec::new();
    while parser.peek().is_some() {
        factors.push(parser.parse_factor()?);
    }
    if factors.is_empty() {
        return Err(syntax_error(text, 0, "empty product"));
    }
    Ok(ProductExpr::new(factors))
}

/// Parses a single `[a, b]` vector literal (used for command-line values).
pub fn parse_vector(text: &str) -> Result<LatticeVector, Error> {
    let toks = tokenize(text)?;
    let mut parser = Parser { text, toks, at: 0 };
    let n = parser.parse_vector_literal()?;
    if let Some(tok) = parser.toks.get(parser.at) {
        return Err(syntax_error(
            text,
            tok.pos,
            format!("unexpected {} after the vector", tok.kind.describe()),
        ));
    }
    Ok(n)
}

fn print_exponent(c: &Rat) -> String {
    if *c == rat_int(1) {
        String::new()
    } else if is_integer(c) && c > &rat_int(0) {
        format!("^{}", format_rat(c))
    } else {
        format!("^({})", format_rat(c))
    }
}

fn print_affine_component(base: i64, step: i64, idx: &str) -> String {
    match (base, step) {
        (b, 0) => format!("{b}"),
        (0, 1) => idx.to_string(),
        (0, -1) => format!("-{idx}"),
        (0, s) => format!("{s}{idx}"),
        (b, 1) => format!("{b}+{idx}"),
        (b, s) if s < 0 => format!("{b}{s}{idx}"),
        (b, s) => format!("{b}+{s}{idx}"),
    }
}

fn print_pow2_component(coeff: i64, idx: &str) -> String {
    match coeff {
        0 => "0".to_string(),
        1 => format!("2^{idx}"),
        k => format!("{k}*2^{idx}"),
    }
}

/// Renders a product in the grammar of this module; parsing the result
/// reproduces the expression exactly, family index names included.
pub fn print_product(expr: &ProductExpr) -> String {
    let mut parts: Vec<String> = Vec::new();
    for factor in &expr.factors {
        match factor {
            Factor::Explicit { n, exponent } => {
                parts.push(format!("{n}{}", print_exponent(exponent)));
            }
            Factor::Family(family) => {
                let keyword = match family.direction {
                    Direction::Forward => "fam",
                    Direction::Backward => "famrev",
                };
                let idx = family.index.as_str();
                let mut body = String::new();
                for item in &family.items {
                    if !body.is_empty() {
                        body.push(' ');
                    }
                    let vec_str = match &item.vector {
                        VectorMap::Affine { base, step } => format!(
                            "[{}, {}]",
                            print_affine_component(base.0, step.0, idx),
                            print_affine_component(base.1, step.1, idx)
                        ),
                        VectorMap::Pow2 { base } => format!(
                            "[{}, {}]",
                            print_pow2_component(base.0, idx),
                            print_pow2_component(base.1, idx)
                        ),
                    };
                    let pow_str = match &item.exponent {
                        ExponentMap::Const(c) => print_exponent(c),
                        ExponentMap::Halving(c) => {
                            if is_integer(c) {
                                format!("^{}/2^{idx}", format_rat(c))
                            } else {
                                // the parenthesis must close after the
                                // suffix, or the suffix would dangle
                                format!("^({}/2^{idx})", format_rat(c))
                            }
                        }
                    };
                    body.push_str(&vec_str);
                    body.push_str(&pow_str);
                }
                parts.push(format!(
                    "{keyword} {idx} in {}.. {{ {body} }}",
                    family.start
                ));
            }
        }
    }
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, IdentityId, IdentityParams};
    use crate::lattice::Context;
    use crate::rat::rat;

    fn v(a: u32, b: u32) -> LatticeVector {
        LatticeVector::new(a, b)
    }

    #[test]
    fn explicit_factors_parse() {
        let expr = parse_product("[0,1]^2 [1,0]^2").unwrap();
        assert_eq!(
            expr,
            ProductExpr::explicit(vec![(v(0, 1), rat_int(2)), (v(1, 0), rat_int(2))])
        );
        let expr = parse_product("[2,1] [1,1]^(-1/2) [0,3]^1/3").unwrap();
        assert_eq!(
            expr,
            ProductExpr::explicit(vec![
                (v(2, 1), rat_int(1)),
                (v(1, 1), rat(-1, 2)),
                (v(0, 3), rat(1, 3)),
            ])
        );
    }

    #[test]
    fn forward_family_parses() {
        let expr = parse_product("fam p in 0.. { [1+p,p]^2 }").unwrap();
        let expected = ProductExpr::new(vec![Factor::Family(
            Family::new(
                Direction::Forward,
                "p",
                0,
                vec![FamilyItem {
                    vector: VectorMap::Affine {
                        base: (1, 0),
                        step: (1, 1),
                    },
                    exponent: ExponentMap::Const(rat_int(2)),
                }],
            )
            .unwrap(),
        )]);
        assert_eq!(expr, expected);
    }

    #[test]
    fn geometric_family_with_halving_exponent_parses() {
        for text in [
            "fam j in 0.. { [2^j, 2*2^j]^4/2^j }",
            "fam j in 0.. { [2^j, 2*2^j]^(4/2^j) }",
        ] {
            let expr = parse_product(text).unwrap();
            let expected = ProductExpr::new(vec![Factor::Family(
                Family::new(
                    Direction::Forward,
                    "j",
                    0,
                    vec![FamilyItem {
                        vector: VectorMap::Pow2 { base: (1, 2) },
                        exponent: ExponentMap::Halving(rat_int(4)),
                    }],
                )
                .unwrap(),
            )]);
            assert_eq!(expr, expected, "for {text:?}");
        }
    }

    #[test]
    fn fractional_and_negative_halving_exponents_parse() {
        let expr = parse_product("fam p in 1.. { [2^p, 0]^1/2/2^p }").unwrap();
        let Factor::Family(family) = &expr.factors[0] else {
            panic!("expected a family");
        };
        assert_eq!(family.items[0].exponent, ExponentMap::Halving(rat(1, 2)));

        let expr = parse_product("fam p in 0.. { [2^p, 2^p]^-4/2^p }").unwrap();
        let Factor::Family(family) = &expr.factors[0] else {
            panic!("expected a family");
        };
        assert_eq!(family.items[0].exponent, ExponentMap::Halving(rat_int(-4)));
    }

    #[test]
    fn multi_factor_family_groups_per_index() {
        let expr = parse_product("fam p in 0.. { [1+2p, p]^4 [4+4p, 1+2p] }").unwrap();
        let expanded = expr.expand(11).unwrap();
        assert_eq!(
            expanded,
            vec![
                (v(1, 0), rat_int(4)),
                (v(4, 1), rat_int(1)),
                (v(3, 1), rat_int(4)),
                (v(8, 3), rat_int(1)),
                (v(5, 2), rat_int(4)),
                (v(7, 3), rat_int(4)),
            ]
        );
    }

    #[test]
    fn backward_family_parses() {
        let expr = parse_product("famrev p in 0.. { [p, 1+p]^2 }").unwrap();
        let Factor::Family(family) = &expr.factors[0] else {
            panic!("expected a family");
        };
        assert_eq!(family.direction, Direction::Backward);
        let expanded = expr.expand(5).unwrap();
        assert_eq!(
            expanded,
            vec![
                (v(2, 3), rat_int(2)),
                (v(1, 2), rat_int(2)),
                (v(0, 1), rat_int(2)),
            ]
        );
    }

    #[test]
    fn default_exponent_is_one() {
        let expr = parse_product("[3,4]").unwrap();
        assert_eq!(expr, ProductExpr::explicit(vec![(v(3, 4), rat_int(1))]));
    }

    #[test]
    fn semantic_errors_surface() {
        assert!(matches!(
            parse_product("[0,0]^1").unwrap_err(),
            Error::NotInPositiveLattice(0, 0)
        ));
        assert!(matches!(
            parse_product("[-1,2]").unwrap_err(),
            Error::NotInPositiveLattice(-1, 2)
        ));
        assert!(matches!(
            parse_product("fam p in 0.. { [1,1]^2 }").unwrap_err(),
            Error::FamilyNotIncreasing
        ));
        assert!(matches!(
            parse_product("fam p in 0.. { [1+p, 2-p] }").unwrap_err(),
            Error::FamilyNotIncreasing
        ));
        assert!(matches!(
            parse_product("fam p in 0.. { [-1+p, p] }").unwrap_err(),
            Error::FamilyLeavesLattice(0)
        ));
        // (0, 1) at p = 0 is inside N+, so a zero coordinate at the start is fine
        assert!(parse_product("fam p in 0.. { [p, 1+p] }").is_ok());
    }

    #[test]
    fn syntax_errors_carry_line_and_column() {
        let err = parse_product("[0,1]^2\n[1,0]^^2").unwrap_err();
        match err {
            Error::Parse { msg, .. } => {
                assert!(msg.contains("line 2"), "{msg}");
            }
            other => panic!("unexpected error {other:?}"),
        }
        assert!(matches!(parse_product(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_product("[1,1] extra"), Err(Error::Parse { .. })));
        assert!(matches!(parse_product("[1,1]^1.5"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_product("[1,1]^1/0"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_product("fam p in 0.. { [1+q, p] }"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_product("fam p in 0.. { [1+2^p, p] }"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_product("fam p in 0.. { [3^p, p] }"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_product("[1,1]^4/2^p"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_product("fam p in 0.. { }"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_product("fam in in 0.. { [1+p, p] }"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn print_then_parse_round_trips_catalog_products() {
        let ctx = Context::standard(8);
        let instances = vec![
            build(
                IdentityId::Pentagon,
                &IdentityParams::pair(v(1, 0), v(0, 1)).with_c(rat_int(1)),
                &ctx,
            )
            .unwrap(),
            build(
                IdentityId::Thm31,
                &IdentityParams::pair(v(1, 0), v(0, 1)).with_c(rat_int(1)),
                &ctx,
            )
            .unwrap(),
            build(
                IdentityId::Thm41,
                &IdentityParams::pair(v(0, 1), v(1, 0)).with_c(rat_int(-1)),
                &ctx,
            )
            .unwrap(),
            build(
                IdentityId::Lem43a,
                &IdentityParams::pair(v(1, 0), v(0, 1)).with_c(rat_int(1)),
                &ctx,
            )
            .unwrap(),
            build(IdentityId::A11, &IdentityParams::default(), &ctx).unwrap(),
            build(IdentityId::A22, &IdentityParams::default(), &ctx).unwrap(),
        ];
        for instance in instances {
            for expr in [&instance.lhs, &instance.rhs] {
                let text = print_product(expr);
                let reparsed = parse_product(&text).unwrap_or_else(|e| {
                    panic!("printed form failed to parse: {text:?}: {e}")
                });
                assert_eq!(reparsed, *expr, "round trip changed {text:?}");
            }
        }
    }

    #[test]
    fn parse_print_parse_is_stable() {
        for text in [
            "[0,1]^2 [1,0]^2",
            "[1,1]^(-3/7)",
            "fam p in 0.. { [1+p,p]^2 } fam p in 0.. { [2^p,2^p]^4/2^p } famrev p in 0.. { [p,1+p]^2 }",
            "fam p in 1.. { [1+2p, 3p]^4 [4+4p, 1+2p] }",
        ] {
            let once = parse_product(text).unwrap();
            let twice = parse_product(&print_product(&once)).unwrap();
            assert_eq!(once, twice, "for {text:?}");
        }
    }

    #[test]
    fn vector_literal_helper() {
        assert_eq!(parse_vector("[3, 5]").unwrap(), v(3, 5));
        assert!(parse_vector("[3, 5] junk").is_err());
        assert!(matches!(
            parse_vector("[0, 0]"),
            Err(Error::NotInPositiveLattice(0, 0))
        ));
    }
}
