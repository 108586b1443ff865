//! The line-oriented model file format: lexer, parser and serializers.
//!
//! ```text
//! kind cdga
//! gen a : 3
//! gen c : 5
//! d c = a^b
//! ```
//!
//! Degrees are cohomological for `cdga` and homological otherwise. Product
//! words are written `a^b` (a repeated letter as `u^4`, `*` is accepted as
//! well), tensor words `a|b`, Lie elements either as tensor words or as
//! bracket expressions `[a,[a,b]]`. Names wrapped in `<…>` may contain any
//! characters except newlines and `#`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::functors::{fmt_lie, lie_bracket, Cdga, FreeDgl};
use crate::graded::{fmt_sum, GradedSpace, Lin, Rational, Tensor, Vector, Word};
use crate::structures::{check_ainf, check_linf, AInfCoalgebra, LInfAlgebra};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Cdga,
    Dgc,
    Ainf,
    Linf,
    Dgl,
    Mc,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Cdga => "cdga",
            Kind::Dgc => "dgc",
            Kind::Ainf => "ainf",
            Kind::Linf => "linf",
            Kind::Dgl => "dgl",
            Kind::Mc => "mc",
        }
    }

    fn from_name(s: &str) -> Option<Kind> {
        [Kind::Cdga, Kind::Dgc, Kind::Ainf, Kind::Linf, Kind::Dgl, Kind::Mc].into_iter().find(|k| k.name() == s)
    }
}

/// A parsed and validated model file. Maurer–Cartan elements refer to the
/// basis of another structure and stay unresolved until paired with it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Model {
    Cdga(Cdga),
    Dgc(AInfCoalgebra),
    Ainf(AInfCoalgebra),
    Linf(LInfAlgebra),
    Dgl(FreeDgl),
    Mc(Lin<String>),
}

impl Model {
    pub fn kind(&self) -> Kind {
        match self {
            Model::Cdga(_) => Kind::Cdga,
            Model::Dgc(_) => Kind::Dgc,
            Model::Ainf(_) => Kind::Ainf,
            Model::Linf(_) => Kind::Linf,
            Model::Dgl(_) => Kind::Dgl,
            Model::Mc(_) => Kind::Mc,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Name(String),
    Num(Rational),
    Sym(char),
}

const SYMBOLS: &str = "^|+-*=()[],:";

/// A token with its 1-based column.
type Located = (Tok, usize);

fn lex(line: &str, lineno: usize) -> Result<Vec<Located>> {
    let chars: Vec<char> = line.chars().collect();
    let err = |col: usize, msg: String| Error::Parse { line: lineno, col, msg };
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if SYMBOLS.contains(c) {
            out.push((Tok::Sym(c), col));
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let num: BigInt = chars[start..i].iter().collect::<String>().parse().expect("digits");
            let mut value = Rational::from_integer(num);
            if i < chars.len() && chars[i] == '/' {
                i += 1;
                let s = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let den: BigInt =
                    chars[s..i].iter().collect::<String>().parse().map_err(|_| err(s + 1, "expected a denominator".into()))?;
                if den.is_zero() {
                    return Err(err(s + 1, "zero denominator".into()));
                }
                value /= Rational::from_integer(den);
            }
            out.push((Tok::Num(value), col));
        } else if c == '/' || c == '>' {
            return Err(err(col, format!("unexpected `{c}`")));
        } else {
            let mut name = String::new();
            while i < chars.len() {
                let c = chars[i];
                if c == '<' {
                    let mut depth = 0;
                    loop {
                        let Some(&c) = chars.get(i) else {
                            return Err(err(col, "unclosed `<` in a name".into()));
                        };
                        name.push(c);
                        i += 1;
                        match c {
                            '<' => depth += 1,
                            '>' => {
                                depth -= 1;
                                if depth == 0 {
                                    break;
                                }
                            }
                            _ => {}
                        }
                    }
                } else if c.is_whitespace() || SYMBOLS.contains(c) || c == '/' || c == '>' {
                    break;
                } else {
                    name.push(c);
                    i += 1;
                }
            }
            out.push((Tok::Name(name), col));
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [Located],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, col: self.col(), msg: msg.into() }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn name(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Name(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.err("expected a name")),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        let col = self.col();
        match self.peek() {
            Some(Tok::Num(q)) if q.is_integer() => {
                let v: i64 = q.to_integer().try_into().map_err(|_| self.err("integer out of range"))?;
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => Err(Error::Parse { line: self.line, col, msg: "expected an integer".into() }),
        }
    }

    fn done(&self) -> Result<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }

    fn at_end(&self) -> bool {
        self.pos == self.toks.len()
    }
}

/// How the words of a sum are written.
#[derive(Clone, Copy)]
enum Words {
    Product,
    Tensor,
    Single,
    Lie,
}

/// A generator name, resolved against `space`.
fn named(space: &GradedSpace, cur: &mut Cursor) -> Result<usize> {
    let col = cur.col();
    let n = cur.name()?;
    space.index_of(&n).ok_or(Error::Parse { line: cur.line, col, msg: format!("unknown generator `{n}`") })
}

fn lie_expr(space: &GradedSpace, cur: &mut Cursor) -> Result<Tensor> {
    if cur.eat('[') {
        let p = lie_expr(space, cur)?;
        cur.expect(',')?;
        let q = lie_expr(space, cur)?;
        cur.expect(']')?;
        Ok(lie_bracket(space, &p, &q))
    } else {
        Ok(Tensor::basis(vec![named(space, cur)?]))
    }
}

fn word(space: &GradedSpace, cur: &mut Cursor, words: Words) -> Result<Tensor> {
    if let (Words::Lie, Some(Tok::Sym('['))) = (words, cur.peek()) {
        return lie_expr(space, cur);
    }
    let mut w = vec![named(space, cur)?];
    loop {
        match (words, cur.peek()) {
            (Words::Product, Some(Tok::Sym('^' | '*'))) => {
                cur.pos += 1;
                if let Some(Tok::Num(_)) = cur.peek() {
                    let n = cur.integer()?;
                    if n < 1 {
                        return Err(cur.err("exponents start at 1"));
                    }
                    let last = *w.last().expect("nonempty");
                    w.extend(std::iter::repeat_n(last, n as usize - 1));
                } else {
                    w.push(named(space, cur)?);
                }
            }
            (Words::Tensor | Words::Lie, Some(Tok::Sym('|'))) => {
                cur.pos += 1;
                w.push(named(space, cur)?);
            }
            _ => return Ok(Tensor::basis(w)),
        }
    }
}

/// `[±] [c] word (± [c] word)*`, or `0`.
fn sum(space: &GradedSpace, cur: &mut Cursor, words: Words) -> Result<Tensor> {
    let mut out = Tensor::zero();
    let mut first = true;
    loop {
        let neg = if cur.eat('-') {
            true
        } else if first || cur.eat('+') {
            false
        } else {
            return Ok(out);
        };
        let mut coeff = Rational::from_integer(1.into());
        if let Some(Tok::Num(q)) = cur.peek() {
            coeff = q.clone();
            cur.pos += 1;
            cur.eat('*');
        }
        let term = match cur.peek() {
            Some(Tok::Name(_)) | Some(Tok::Sym('[')) => word(space, cur, words)?,
            _ if !matches!(words, Words::Product) && coeff.is_zero() && first => Tensor::zero(),
            _ if matches!(words, Words::Product) => Tensor::basis(vec![]),
            _ => return Err(cur.err("expected a term")),
        };
        out.add_scaled(&term, &if neg { -coeff } else { coeff });
        first = false;
        if cur.at_end() {
            return Ok(out);
        }
    }
}

fn vector(t: &Tensor, cur: &Cursor) -> Result<Vector> {
    let mut v = Vector::zero();
    for (w, c) in t.iter() {
        match w.as_slice() {
            [x] => v.add_term(*x, c.clone()),
            _ => return Err(cur.err("expected a linear combination of basis elements")),
        }
    }
    Ok(v)
}

fn located(line: usize, e: Error) -> Error {
    let at = |m: String| format!("line {line}: {m}");
    match e {
        Error::Input(m) => Error::Input(at(m)),
        Error::Degree(m) => Error::Degree(at(m)),
        Error::Unsupported(m) => Error::Unsupported(at(m)),
        Error::Axiom(m) => Error::Axiom(at(m)),
        Error::BoundExceeded(m) => Error::BoundExceeded(at(m)),
        Error::Construction(m) => Error::Construction(at(m)),
        e @ Error::Parse { .. } => e,
    }
}

struct Statement<'a> {
    line: usize,
    head: String,
    cur: Cursor<'a>,
}

/// Parses a model file and runs the axiom checker of its kind.
pub fn parse(text: &str) -> Result<Model> {
    // (line, column past the end, tokens)
    let lexed: Vec<(usize, usize, Vec<Located>)> = text
        .lines()
        .enumerate()
        .map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            lex(body, i + 1).map(|t| (i + 1, body.chars().count() + 1, t))
        })
        .collect::<Result<_>>()?;
    let mut statements = Vec::new();
    for (line, end_col, toks) in lexed.iter().filter(|(_, _, t)| !t.is_empty()) {
        let mut cur = Cursor { toks, pos: 0, line: *line, end_col: *end_col };
        let head = cur.name()?;
        statements.push(Statement { line: *line, head, cur });
    }
    let mut it = statements.into_iter();
    let Some(mut first) = it.next() else {
        return Err(Error::Parse { line: 1, col: 1, msg: "empty file: expected `kind …`".into() });
    };
    if first.head != "kind" {
        return Err(Error::Parse { line: first.line, col: 1, msg: "the first statement must be `kind …`".into() });
    }
    let kind_name = first.cur.name()?;
    let kind = Kind::from_name(&kind_name)
        .ok_or_else(|| first.cur.err(format!("unknown kind `{kind_name}`")))?;
    first.cur.done()?;

    let (header, body): (Vec<Statement>, Vec<Statement>) =
        it.partition(|s| matches!(s.head.as_str(), "gen" | "option" | "rel"));
    let mut gens: Vec<(String, i64)> = Vec::new();
    let mut reduced = true;
    let mut rels: Vec<Statement> = Vec::new();
    for mut s in header {
        match s.head.as_str() {
            "gen" => {
                let col = s.cur.col();
                let name = s.cur.name()?;
                s.cur.expect(':')?;
                let deg = s.cur.integer()?;
                s.cur.done()?;
                if gens.iter().any(|(n, _)| *n == name) {
                    return Err(Error::Parse { line: s.line, col, msg: format!("generator `{name}` declared twice") });
                }
                gens.push((name, deg));
            }
            "option" if matches!(kind, Kind::Dgc | Kind::Ainf) => {
                match s.cur.name()?.as_str() {
                    "full" => reduced = false,
                    "reduced" => reduced = true,
                    other => return Err(Error::Parse { line: s.line, col: 8, msg: format!("unknown option `{other}`") }),
                }
                s.cur.done()?;
            }
            "rel" if kind == Kind::Cdga => rels.push(s),
            other => {
                return Err(Error::Parse { line: s.line, col: 1, msg: format!("`{other}` is not allowed in a {} file", kind.name()) })
            }
        }
    }
    let space = GradedSpace::new(gens.clone()).map_err(|e| located(1, e))?;

    let model = match kind {
        Kind::Cdga => {
            let mut a = Cdga::free(space.clone());
            for mut s in rels {
                let t = word(&space, &mut s.cur, Words::Product)?;
                s.cur.done()?;
                let w = t.keys().next().expect("a single word");
                a.add_relation(w).map_err(|e| located(s.line, e))?;
            }
            for mut s in body {
                expect_head(&s, &["d"], kind)?;
                let x = target(&space, &mut s.cur)?;
                let p = sum(&space, &mut s.cur, Words::Product)?;
                s.cur.done()?;
                a.set_d(x, p).map_err(|e| located(s.line, e))?;
            }
            a.validate()?;
            Model::Cdga(a)
        }
        Kind::Dgc | Kind::Ainf => {
            let mut c = AInfCoalgebra::new(space.clone(), reduced);
            let heads: &[&str] = if kind == Kind::Dgc { &["diff", "cop"] } else { &["diff", "cop", "D<k>"] };
            for mut s in body {
                let k = match s.head.as_str() {
                    "diff" => 1,
                    "cop" => 2,
                    h if kind == Kind::Ainf && h.starts_with('D') => {
                        h[1..].parse().map_err(|_| Error::Parse { line: s.line, col: 1, msg: format!("bad co-operation `{h}`") })?
                    }
                    _ => return Err(bad_head(&s, heads, kind)),
                };
                let x = target(&space, &mut s.cur)?;
                let words = if k == 1 { Words::Single } else { Words::Tensor };
                let t = sum(&space, &mut s.cur, words)?;
                s.cur.done()?;
                c.set_op(k, x, t).map_err(|e| located(s.line, e))?;
            }
            check_ainf(&c).map_err(|v| Error::Axiom(v.to_string()))?;
            if kind == Kind::Dgc { Model::Dgc(c) } else { Model::Ainf(c) }
        }
        Kind::Linf => {
            let mut l = LInfAlgebra::new(space.clone());
            for mut s in body {
                let k = bracket_arity(&s, kind)?;
                let args = arguments(&space, &mut s.cur)?;
                if args.len() != k {
                    return Err(Error::Parse { line: s.line, col: 1, msg: format!("l{k} given {} arguments", args.len()) });
                }
                s.cur.expect('=')?;
                let t = sum(&space, &mut s.cur, Words::Single)?;
                let v = vector(&t, &s.cur)?;
                s.cur.done()?;
                l.set_bracket(&args, v).map_err(|e| located(s.line, e))?;
            }
            check_linf(&l).map_err(|v| Error::Axiom(v.to_string()))?;
            Model::Linf(l)
        }
        Kind::Dgl => {
            let mut m = FreeDgl::new(space.clone());
            for mut s in body {
                let x = match s.head.as_str() {
                    "d" => target(&space, &mut s.cur)?,
                    "l1" => {
                        let args = arguments(&space, &mut s.cur)?;
                        let [x] = args[..] else {
                            return Err(Error::Parse { line: s.line, col: 1, msg: "l1 takes one argument".into() });
                        };
                        s.cur.expect('=')?;
                        x
                    }
                    _ => return Err(bad_head(&s, &["d", "l1"], kind)),
                };
                let t = sum(&space, &mut s.cur, Words::Lie)?;
                s.cur.done()?;
                m.set_d(x, t).map_err(|e| located(s.line, e))?;
            }
            m.check_d_squared()?;
            Model::Dgl(m)
        }
        Kind::Mc => {
            let mut out: Option<Lin<String>> = None;
            for mut s in body {
                expect_head(&s, &["mc"], kind)?;
                if out.is_some() {
                    return Err(Error::Parse { line: s.line, col: 1, msg: "more than one `mc` line".into() });
                }
                s.cur.expect('=')?;
                out = Some(mc_sum(&mut s.cur)?);
            }
            if !gens.is_empty() {
                return Err(Error::Parse { line: 1, col: 1, msg: "mc files declare no generators".into() });
            }
            Model::Mc(out.unwrap_or_default())
        }
    };
    Ok(model)
}

fn expect_head(s: &Statement, heads: &[&str], kind: Kind) -> Result<()> {
    if heads.contains(&s.head.as_str()) {
        Ok(())
    } else {
        Err(bad_head(s, heads, kind))
    }
}

fn bad_head(s: &Statement, heads: &[&str], kind: Kind) -> Error {
    Error::Parse {
        line: s.line,
        col: 1,
        msg: format!("`{}` is not a {} statement (expected {})", s.head, kind.name(), heads.join(", ")),
    }
}

fn bracket_arity(s: &Statement, kind: Kind) -> Result<usize> {
    s.head
        .strip_prefix('l')
        .and_then(|k| k.parse().ok())
        .filter(|&k: &usize| k >= 1)
        .ok_or_else(|| bad_head(s, &["l<k>"], kind))
}

/// `NAME =`
fn target(space: &GradedSpace, cur: &mut Cursor) -> Result<usize> {
    let x = named(space, cur)?;
    cur.expect('=')?;
    Ok(x)
}

/// `( a ^ b ^ … )`; commas are accepted as separators too.
fn arguments(space: &GradedSpace, cur: &mut Cursor) -> Result<Vec<usize>> {
    cur.expect('(')?;
    let mut args = Vec::new();
    loop {
        args.push(named(space, cur)?);
        if cur.eat(')') {
            return Ok(args);
        }
        if !(cur.eat('^') || cur.eat(',')) {
            return Err(cur.err("expected `^` or `)`"));
        }
    }
}

fn mc_sum(cur: &mut Cursor) -> Result<Lin<String>> {
    let mut out = Lin::zero();
    let mut first = true;
    while !cur.at_end() {
        let neg = if cur.eat('-') {
            true
        } else if first || cur.eat('+') {
            false
        } else {
            return Err(cur.err("expected `+` or `-`"));
        };
        let mut coeff = Rational::from_integer(1.into());
        if let Some(Tok::Num(q)) = cur.peek() {
            coeff = q.clone();
            cur.pos += 1;
            cur.eat('*');
            if first && coeff.is_zero() && cur.at_end() {
                break;
            }
        }
        let n = cur.name()?;
        out.add_term(n, if neg { -coeff } else { coeff });
        first = false;
    }
    Ok(out)
}

/// Resolves a Maurer–Cartan element against the basis it refers to.
pub fn resolve_mc(mc: &Lin<String>, space: &GradedSpace) -> Result<Vector> {
    let mut v = Vector::zero();
    for (n, c) in mc.iter() {
        let i = space.index_of(n).ok_or_else(|| Error::Input(format!("`{n}` is not a basis element of the mapping model")))?;
        v.add_term(i, c.clone());
    }
    Ok(v)
}

fn product_word(space: &GradedSpace, w: &[usize]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let j = (i..w.len()).find(|&j| w[j] != w[i]).unwrap_or(w.len());
        let name = space.name(w[i]);
        parts.push(if j - i > 1 { format!("{name}^{}", j - i) } else { name.to_string() });
        i = j;
    }
    parts.join("^")
}

fn header(out: &mut String, kind: Kind, space: &GradedSpace) {
    let _ = writeln!(out, "kind {}", kind.name());
    for (_, name, deg) in space.basis() {
        let _ = writeln!(out, "gen {name} : {deg}");
    }
}

pub fn serialize_cdga(a: &Cdga) -> String {
    let mut out = String::new();
    header(&mut out, Kind::Cdga, &a.gens);
    for r in a.relations() {
        let _ = writeln!(out, "rel {}", product_word(&a.gens, r));
    }
    for x in 0..a.gens.dim() {
        let d = a.d_of(x);
        if !d.is_zero() {
            let body = fmt_sum(d.iter().map(|(w, c)| (c.clone(), product_word(&a.gens, w))));
            let _ = writeln!(out, "d {} = {body}", a.gens.name(x));
        }
    }
    out
}

pub fn serialize_coalgebra(c: &AInfCoalgebra, kind: Kind) -> String {
    let mut out = String::new();
    header(&mut out, kind, &c.space);
    if !c.reduced {
        out.push_str("option full\n");
    }
    for k in c.arities() {
        for x in 0..c.space.dim() {
            let t = c.op(k, x);
            if t.is_zero() {
                continue;
            }
            let head = match (kind, k) {
                (Kind::Dgc, 1) => "diff".to_string(),
                (Kind::Dgc, 2) => "cop".to_string(),
                _ => format!("D{k}"),
            };
            let _ = writeln!(out, "{head} {} = {}", c.space.name(x), c.space.fmt_tensor(&t));
        }
    }
    out
}

pub fn serialize_linf(l: &LInfAlgebra) -> String {
    let mut out = String::new();
    header(&mut out, Kind::Linf, &l.space);
    let mut lines: BTreeMap<(usize, Word), String> = BTreeMap::new();
    for k in l.arities() {
        for (w, v) in l.brackets_of_arity(k) {
            let args: Vec<&str> = w.iter().map(|&i| l.space.name(i)).collect();
            lines.insert((k, w.clone()), format!("l{k} ( {} ) = {}", args.join(" ^ "), l.space.fmt_vector(v)));
        }
    }
    for line in lines.values() {
        out.push_str(line);
        out.push('\n');
    }
    out
}

pub fn serialize_dgl(m: &FreeDgl) -> String {
    let mut out = String::new();
    header(&mut out, Kind::Dgl, &m.gens);
    for (x, t) in m.differentials() {
        let body = fmt_lie(&m.gens, t).unwrap_or_else(|| m.gens.fmt_tensor(t));
        let _ = writeln!(out, "d {} = {body}", m.gens.name(x));
    }
    out
}

pub fn serialize_mc(z: &Vector, space: &GradedSpace) -> String {
    format!("kind mc\nmc = {}\n", space.fmt_vector(z))
}

pub fn serialize(m: &Model) -> String {
    match m {
        Model::Cdga(a) => serialize_cdga(a),
        Model::Dgc(c) => serialize_coalgebra(c, Kind::Dgc),
        Model::Ainf(c) => serialize_coalgebra(c, Kind::Ainf),
        Model::Linf(l) => serialize_linf(l),
        Model::Dgl(d) => serialize_dgl(d),
        Model::Mc(z) => format!("kind mc\nmc = {}\n", fmt_sum(z.iter().map(|(n, c)| (c.clone(), n.clone())))),
    }
}
