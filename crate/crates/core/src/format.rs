//! Text format for modules, one statement per line:
//!
//! ```text
//! # two rectangles
//! rect 0 0 7 7
//! rect 0 4 7 inf
//! ```
//!
//! or a presentation:
//!
//! ```text
//! gen a 0 0
//! gen b 1/2 0
//! rel r 1.5 2 a b
//! ```
//!
//! Numbers are integers, exact decimals or fractions `p/q`; `inf` is allowed
//! only for the upper corner of a rectangle. A file holds either only `rect`
//! statements or only `gen`/`rel` statements.

use std::collections::HashSet;
use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::module::{Generator, Presentation, Rect, Relation, TwoParamModule};
use crate::scalar::Extended;
use crate::Rational;

#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Rect,
    Presentation,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let code = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in code.char_indices().chain(std::iter::once((code.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token { text: &code[s..i], column: code[..s].chars().count() + 1 });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

fn digits(s: &str) -> Option<BigInt> {
    (!s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())).then(|| s.parse().expect("ascii digits"))
}

/// Parses an integer, exact decimal or fraction.
pub fn parse_number(text: &str) -> Option<Rational> {
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let value = if let Some((p, q)) = body.split_once('/') {
        let q = digits(q)?;
        if q.is_zero() {
            return None;
        }
        Rational::new(digits(p)?, q)
    } else if let Some((int, frac)) = body.split_once('.') {
        let scale = BigInt::from(10).pow(frac.len() as u32);
        Rational::new(digits(int)? * &scale + digits(frac)?, scale)
    } else {
        Rational::from_integer(digits(body)?)
    };
    Some(if negative { -value } else { value })
}

struct Parser {
    line: usize,
}

impl Parser {
    fn error(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line, column, message: message.into() }
    }

    fn number(&self, tok: Token) -> Result<Rational> {
        parse_number(tok.text).ok_or_else(|| self.error(tok.column, format!("invalid number `{}`", tok.text)))
    }

    fn bound(&self, tok: Token) -> Result<Extended<Rational>> {
        if tok.text == "inf" {
            Ok(Extended::Infinite)
        } else {
            self.number(tok).map(Extended::Finite)
        }
    }

    fn point(&self, x: Token, y: Token) -> Result<Point<Rational>> {
        Ok(Point::new(self.number(x)?, self.number(y)?))
    }
}

/// Parses a module file. An empty file is the trivial module.
pub fn parse_module(text: &str) -> Result<TwoParamModule<Rational>> {
    let mut kind = None;
    let mut rects = Vec::new();
    let mut gens: Vec<Generator<Rational>> = Vec::new();
    let mut rels: Vec<Relation<Rational>> = Vec::new();
    let mut names = HashSet::new();

    for (i, line) in text.lines().enumerate() {
        let p = Parser { line: i + 1 };
        let toks = tokens(line);
        let Some(&head) = toks.first() else { continue };
        let this = match head.text {
            "rect" => Kind::Rect,
            "gen" | "rel" => Kind::Presentation,
            other => return Err(p.error(head.column, format!("unknown statement `{other}`"))),
        };
        if kind.is_some_and(|k| k != this) {
            return Err(p.error(head.column, "cannot mix `rect` with `gen`/`rel` statements"));
        }
        kind = Some(this);
        let end = line.split('#').next().unwrap_or("").chars().count() + 1;

        match head.text {
            "rect" => {
                if toks.len() != 5 {
                    let col = toks.get(5).map_or(end, |t| t.column);
                    return Err(p.error(col, format!("`rect` takes 4 coordinates, got {}", toks.len() - 1)));
                }
                let lower = p.point(toks[1], toks[2])?;
                let upper = (p.bound(toks[3])?, p.bound(toks[4])?);
                let rect = Rect::new(lower, upper).map_err(|e| p.error(head.column, e.to_string()))?;
                rects.push(rect);
            }
            "gen" => {
                if toks.len() != 4 {
                    let col = toks.get(4).map_or(end, |t| t.column);
                    return Err(p.error(col, "`gen` takes a name and 2 coordinates"));
                }
                let name = toks[1];
                if !names.insert(name.text) {
                    return Err(p.error(name.column, format!("duplicate name `{}`", name.text)));
                }
                gens.push(Generator { name: name.text.to_string(), grade: p.point(toks[2], toks[3])? });
            }
            _ => {
                if toks.len() < 4 {
                    return Err(p.error(end, "`rel` takes a name, 2 coordinates and generator names"));
                }
                let name = toks[1];
                if !names.insert(name.text) {
                    return Err(p.error(name.column, format!("duplicate name `{}`", name.text)));
                }
                let grade = p.point(toks[2], toks[3])?;
                let mut column = Vec::new();
                for g in &toks[4..] {
                    let idx = gens
                        .iter()
                        .position(|x| x.name == g.text)
                        .ok_or_else(|| p.error(g.column, format!("unknown generator `{}`", g.text)))?;
                    if column.contains(&idx) {
                        return Err(p.error(g.column, format!("generator `{}` repeated", g.text)));
                    }
                    if !gens[idx].grade.le(&grade) {
                        return Err(p.error(
                            g.column,
                            format!("relation grade {grade} is not above generator `{}` at {}", g.text, gens[idx].grade),
                        ));
                    }
                    column.push(idx);
                }
                rels.push(Relation { name: name.text.to_string(), grade, column });
            }
        }
    }

    match kind {
        Some(Kind::Presentation) => Ok(TwoParamModule::Presented(Presentation::new(gens, rels)?)),
        _ => Ok(TwoParamModule::Rectangles(rects)),
    }
}

/// Renders an integer or `p/q`.
pub fn format_number(v: &Rational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

fn format_bound(v: &Extended<Rational>) -> String {
    match v {
        Extended::Finite(x) => format_number(x),
        Extended::Infinite => "inf".to_string(),
    }
}

/// Writes a module in the text format; [`parse_module`] reads it back.
pub fn write_module(m: &TwoParamModule<Rational>) -> String {
    let mut out = String::new();
    match m {
        TwoParamModule::Rectangles(rs) => {
            for r in rs {
                let (lo, (x2, y2)) = (r.lower(), r.upper());
                let _ = writeln!(
                    out,
                    "rect {} {} {} {}",
                    format_number(&lo.x),
                    format_number(&lo.y),
                    format_bound(x2),
                    format_bound(y2)
                );
            }
        }
        TwoParamModule::Presented(p) => {
            let gens = p.generators();
            for g in gens {
                let _ = writeln!(out, "gen {} {} {}", g.name, format_number(&g.grade.x), format_number(&g.grade.y));
            }
            for r in p.relations() {
                let _ = write!(out, "rel {} {} {}", r.name, format_number(&r.grade.x), format_number(&r.grade.y));
                for &i in &r.column {
                    let _ = write!(out, " {}", gens[i].name);
                }
                out.push('\n');
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn parse_err(text: &str) -> (usize, usize, String) {
        match parse_module(text) {
            Err(Error::Parse { line, column, message }) => (line, column, message),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn numbers() {
        assert_eq!(parse_number("7"), Some(q(7, 1)));
        assert_eq!(parse_number("-3/6"), Some(q(-1, 2)));
        assert_eq!(parse_number("2.25"), Some(q(9, 4)));
        assert_eq!(parse_number("-0.1"), Some(q(-1, 10)));
        for bad in ["x", "1/0", "1.", ".5", "1/-2", "--1", "1e3", "", "inf"] {
            assert_eq!(parse_number(bad), None, "{bad}");
        }
    }

    #[test]
    fn rectangles() {
        let m = parse_module("rect 0 4 7 11\n# comment\n\nrect 2 2 inf 7 # trailing\n").unwrap();
        let TwoParamModule::Rectangles(rs) = m else { panic!() };
        assert_eq!(rs[0], Rect::bounded(q(0, 1), q(4, 1), q(7, 1), q(11, 1)).unwrap());
        assert_eq!(rs[1].upper(), &(Extended::Infinite, Extended::Finite(q(7, 1))));
    }

    #[test]
    fn presentation_with_one_bar() {
        let m = parse_module("gen g 0 0\nrel r 0 7 g\n").unwrap();
        let TwoParamModule::Presented(p) = m else { panic!() };
        assert_eq!(p.generators().len(), 1);
        assert_eq!(p.relations()[0].column, vec![0]);
    }

    #[test]
    fn empty_file_is_trivial() {
        assert!(parse_module("# nothing\n").unwrap().is_trivial());
    }

    #[test]
    fn bad_token_is_named() {
        let (line, column, message) = parse_err("rect 0 0 7 x");
        assert_eq!((line, column), (1, 12));
        assert!(message.contains("`x`"), "{message}");
    }

    #[test]
    fn structural_errors() {
        assert_eq!(parse_err("rect inf 0 7 7").1, 6);
        assert_eq!(parse_err("rect 0 0 7").0, 1);
        assert!(parse_err("rect 0 0 7 7\ngen a 0 0").2.contains("mix"));
        assert_eq!(parse_err("gen a 0 0\ngen a 1 1").0, 2);
        assert!(parse_err("gen a 0 0\nrel r 1 1 b").2.contains("unknown generator"));
        assert!(parse_err("gen a 0 0\nrel r 1 1 a a").2.contains("repeated"));
        assert!(parse_err("gen a 2 0\nrel r 1 1 a").2.contains("not above"));
        assert!(parse_err("rect 3 0 2 5").2.contains("invalid rectangle"));
        assert!(parse_err("circle 1 2").2.contains("unknown statement"));
    }

    fn arb_number() -> impl Strategy<Value = Rational> {
        (-40i64..40, 1i64..5).prop_map(|(n, d)| q(n, d))
    }

    fn arb_rect() -> impl Strategy<Value = Rect<Rational>> {
        (arb_number(), arb_number(), 1i64..20, 1i64..20, any::<bool>(), any::<bool>()).prop_map(|(x, y, w, h, ix, iy)| {
            let up = |base: &Rational, d: i64, inf: bool| {
                if inf {
                    Extended::Infinite
                } else {
                    Extended::Finite(base + q(d, 2))
                }
            };
            let upper = (up(&x, w, ix), up(&y, h, iy));
            Rect::new(Point::new(x, y), upper).unwrap()
        })
    }

    proptest! {
        #[test]
        fn rectangle_round_trip(rs in prop::collection::vec(arb_rect(), 0..5)) {
            let m = TwoParamModule::Rectangles(rs);
            prop_assert_eq!(parse_module(&write_module(&m)).unwrap(), m);
        }

        #[test]
        fn presentation_round_trip(
            gens in prop::collection::vec((arb_number(), arb_number()), 1..5),
            rels in prop::collection::vec((0i64..10, 0i64..10, prop::collection::vec(any::<bool>(), 5)), 0..5),
        ) {
            let gens: Vec<Generator<Rational>> = gens
                .into_iter()
                .enumerate()
                .map(|(i, (x, y))| Generator { name: format!("g{i}"), grade: Point::new(x, y) })
                .collect();
            let top = gens.iter().fold(gens[0].grade.clone(), |a, g| a.lub(&g.grade));
            let rels = rels
                .into_iter()
                .enumerate()
                .map(|(i, (dx, dy, mask))| Relation {
                    name: format!("r{i}"),
                    grade: top.translate(&q(dx, 3), &q(dy, 3)),
                    column: (0..gens.len()).filter(|&j| mask[j]).collect(),
                })
                .collect();
            let m = TwoParamModule::Presented(Presentation::new(gens, rels).unwrap());
            prop_assert_eq!(parse_module(&write_module(&m)).unwrap(), m);
        }
    }
}
