//! The workbench input format.
//!
//! A document is a sequence of top-level statements, one per line, with `#`
//! starting a comment:
//!
//! ```text
//! ring Q
//! cap 4
//! group Z2 { elements e s; table e s / s e }
//! action tri { group S3; points 1 2 3; act 213 : 1->2 2->1 }
//! groupoid pair {
//!   objects a b
//!   mor f : a -> b
//!   mor g : b -> a
//!   id a = 1a
//!   ...
//! }
//! sectors pt { sector e age 0 betti 1; sector s age 1/2 betti 1 }
//! ```
//!
//! Inside a block, clauses end at `;` or at the end of a line; a line ending
//! in `/` continues a `table` clause. Compositions with an identity are
//! filled in when a groupoid omits them, and inverses are derived from the
//! composition table. Actions and groups may name the builtins `trivial`,
//! `Z<n>`, `S<n>` and `S<n>_on_<n>` unless the document defines a
//! same-named entity.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use inertia_core::catalog;
use inertia_core::chen_ruan::SectorData;
use inertia_core::groupoid::{
    action_groupoid, group_as_groupoid, FiniteGroupoid, GroupTable, GroupoidTables, MorphismId, ObjectId,
};
use inertia_core::homology::Ring;
use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    DuplicateName,
    UnresolvedReference,
    Validation,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::DuplicateName => "duplicate name",
            ParseErrorKind::UnresolvedReference => "unresolved reference",
            ParseErrorKind::Validation => "validation failed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    fn error(self, kind: ParseErrorKind, message: impl Into<String>) -> ParseError {
        ParseError {
            kind,
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntityKind {
    Group,
    Action,
    Groupoid,
    Sectors,
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntityKind::Group => "group",
            EntityKind::Action => "action",
            EntityKind::Groupoid => "groupoid",
            EntityKind::Sectors => "sectors",
        })
    }
}

#[derive(Clone, Debug)]
pub enum Entity {
    Group(GroupTable, FiniteGroupoid),
    Action(FiniteGroupoid),
    Groupoid(FiniteGroupoid),
    Sectors(Vec<SectorData>),
}

impl Entity {
    pub fn kind(&self) -> EntityKind {
        match self {
            Entity::Group(..) => EntityKind::Group,
            Entity::Action(_) => EntityKind::Action,
            Entity::Groupoid(_) => EntityKind::Groupoid,
            Entity::Sectors(_) => EntityKind::Sectors,
        }
    }

    pub fn groupoid(&self) -> Option<&FiniteGroupoid> {
        match self {
            Entity::Group(_, g) | Entity::Action(g) | Entity::Groupoid(g) => Some(g),
            Entity::Sectors(_) => None,
        }
    }
}

/// A parsed document: entities in definition order plus global options.
#[derive(Clone, Debug, Default)]
pub struct WorkbenchInput {
    pub entities: Vec<(String, Entity)>,
    pub ring: Option<Ring>,
    pub cap: Option<usize>,
}

impl WorkbenchInput {
    pub fn get(&self, name: &str) -> Option<&Entity> {
        self.entities.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }

    /// A defined entity, or else a builtin groupoid.
    pub fn resolve(&self, name: &str) -> Option<Entity> {
        self.get(name).cloned().or_else(|| builtin(name))
    }
}

/// The builtin entity of this name, if any.
pub fn builtin(name: &str) -> Option<Entity> {
    if let Some(t) = catalog::group(name) {
        let g = group_as_groupoid(&t);
        return Some(Entity::Group(t, g));
    }
    catalog::groupoid(name).map(Entity::Action)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    LBrace,
    RBrace,
    Semi,
    Slash,
    Colon,
    Arrow,
    Equals,
    Newline,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Equals => f.write_str("`=`"),
            Tok::Newline => f.write_str("end of line"),
        }
    }
}

fn tokenize(text: &str) -> Vec<(Tok, Pos)> {
    let mut out = Vec::new();
    for (l, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let chars: Vec<(usize, char)> = line.chars().enumerate().collect();
        let mut i = 0;
        while i < chars.len() {
            let (col, c) = chars[i];
            let pos = Pos {
                line: l + 1,
                column: col + 1,
            };
            let single = match c {
                '{' => Some(Tok::LBrace),
                '}' => Some(Tok::RBrace),
                ';' => Some(Tok::Semi),
                '/' => Some(Tok::Slash),
                ':' => Some(Tok::Colon),
                '=' => Some(Tok::Equals),
                _ => None,
            };
            if let Some(t) = single {
                out.push((t, pos));
                i += 1;
            } else if c == '-' && chars.get(i + 1).map(|p| p.1) == Some('>') {
                out.push((Tok::Arrow, pos));
                i += 2;
            } else if c.is_whitespace() {
                i += 1;
            } else {
                let mut word = String::new();
                while let Some(&(_, c)) = chars.get(i) {
                    let arrow = c == '-' && chars.get(i + 1).map(|p| p.1) == Some('>');
                    if c.is_whitespace() || "{};/:=".contains(c) || arrow {
                        break;
                    }
                    word.push(c);
                    i += 1;
                }
                out.push((Tok::Word(word), pos));
            }
        }
        let end = Pos {
            line: l + 1,
            column: chars.len() + 1,
        };
        out.push((Tok::Newline, end));
    }
    out
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    eof: Pos,
}

type Clause = Vec<(Tok, Pos)>;
type Toks<'a> = &'a [(Tok, Pos)];
type Named = (String, Pos);
type MorDecl = (Named, Named, Named);

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn next(&mut self) -> Option<(Tok, Pos)> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn skip_newlines(&mut self) {
        while self.peek() == Some(&Tok::Newline) {
            self.at += 1;
        }
    }

    fn word(&mut self, what: &str) -> Result<Named, ParseError> {
        match self.next() {
            Some((Tok::Word(w), p)) => Ok((w, p)),
            Some((t, p)) => Err(p.error(ParseErrorKind::Syntax, format!("expected {what}, found {t}"))),
            None => Err(self
                .eof
                .error(ParseErrorKind::Syntax, format!("expected {what}, found end of input"))),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, ParseError> {
        match self.next() {
            Some((t, p)) if t == tok => Ok(p),
            Some((t, p)) => Err(p.error(ParseErrorKind::Syntax, format!("expected {tok}, found {t}"))),
            None => Err(self
                .eof
                .error(ParseErrorKind::Syntax, format!("expected {tok}, found end of input"))),
        }
    }

    fn end_of_statement(&mut self) -> Result<(), ParseError> {
        match self.next() {
            None | Some((Tok::Newline, _)) => Ok(()),
            Some((t, p)) => Err(p.error(ParseErrorKind::Syntax, format!("expected end of line, found {t}"))),
        }
    }

    /// The clauses of a `{ ... }` block, each a non-empty token list.
    fn block(&mut self) -> Result<Vec<Clause>, ParseError> {
        self.skip_newlines();
        let open = self.expect(Tok::LBrace)?;
        let mut clauses = Vec::new();
        let mut cur: Clause = Vec::new();
        loop {
            match self.next() {
                None => return Err(open.error(ParseErrorKind::Syntax, "unclosed `{`")),
                Some((Tok::RBrace, _)) => break,
                Some((Tok::LBrace, p)) => return Err(p.error(ParseErrorKind::Syntax, "nested `{`")),
                Some((Tok::Semi, _)) => clauses.push(std::mem::take(&mut cur)),
                Some((Tok::Newline, _)) => {
                    if cur.last().map(|t| &t.0) != Some(&Tok::Slash) {
                        clauses.push(std::mem::take(&mut cur));
                    }
                }
                Some(t) => cur.push(t),
            }
        }
        clauses.push(cur);
        clauses.retain(|c| !c.is_empty());
        self.end_of_statement()?;
        Ok(clauses)
    }
}

fn syntax(p: Pos, message: impl Into<String>) -> ParseError {
    p.error(ParseErrorKind::Syntax, message)
}

fn validation(p: Pos, message: impl Into<String>) -> ParseError {
    p.error(ParseErrorKind::Validation, message)
}

/// Reads a clause as a keyword followed by its remaining tokens.
fn split_clause(c: &Clause) -> Result<(&str, Pos, Toks<'_>), ParseError> {
    match &c[0] {
        (Tok::Word(w), p) => Ok((w.as_str(), *p, &c[1..])),
        (t, p) => Err(syntax(*p, format!("expected a clause keyword, found {t}"))),
    }
}

fn words(rest: &[(Tok, Pos)], at: Pos, what: &str) -> Result<Vec<Named>, ParseError> {
    if rest.is_empty() {
        return Err(syntax(at, format!("expected at least one {what}")));
    }
    rest.iter()
        .map(|(t, p)| match t {
            Tok::Word(w) => Ok((w.clone(), *p)),
            t => Err(syntax(*p, format!("expected {what}, found {t}"))),
        })
        .collect()
}

/// Matches a clause body against a pattern of word slots (`None`) and
/// literal tokens.
fn shape(rest: &[(Tok, Pos)], at: Pos, pattern: &[Option<Tok>]) -> Result<Vec<Named>, ParseError> {
    let mut out = Vec::new();
    for (i, want) in pattern.iter().enumerate() {
        let Some((t, p)) = rest.get(i) else {
            let end = rest.last().map_or(at, |t| t.1);
            return Err(syntax(end, "clause ends early"));
        };
        match (want, t) {
            (None, Tok::Word(w)) => out.push((w.clone(), *p)),
            (Some(lit), t) if lit == t => {}
            (None, t) => return Err(syntax(*p, format!("expected a name, found {t}"))),
            (Some(lit), t) => return Err(syntax(*p, format!("expected {lit}, found {t}"))),
        }
    }
    if let Some((t, p)) = rest.get(pattern.len()) {
        return Err(syntax(*p, format!("unexpected {t}")));
    }
    Ok(out)
}

fn unique<'a>(names: impl IntoIterator<Item = &'a Named>, what: &str) -> Result<HashMap<String, usize>, ParseError> {
    let mut index = HashMap::new();
    for (i, (n, p)) in names.into_iter().enumerate() {
        if index.insert(n.clone(), i).is_some() {
            return Err(p.error(ParseErrorKind::DuplicateName, format!("{what} `{n}` is listed twice")));
        }
    }
    Ok(index)
}

fn lookup(index: &HashMap<String, usize>, (name, p): &Named, what: &str) -> Result<usize, ParseError> {
    index
        .get(name)
        .copied()
        .ok_or_else(|| p.error(ParseErrorKind::UnresolvedReference, format!("unknown {what} `{name}`")))
}

fn once<T>(slot: &mut Option<T>, value: T, keyword: &str, p: Pos) -> Result<(), ParseError> {
    if slot.replace(value).is_some() {
        return Err(syntax(p, format!("`{keyword}` given twice")));
    }
    Ok(())
}

fn parse_group(clauses: &[Clause], at: Pos) -> Result<GroupTable, ParseError> {
    let mut elements: Option<Vec<Named>> = None;
    let mut table: Option<(Vec<Vec<Named>>, Pos)> = None;
    for c in clauses {
        let (kw, p, rest) = split_clause(c)?;
        match kw {
            "elements" => once(&mut elements, words(rest, p, "element")?, kw, p)?,
            "table" => {
                let mut rows = vec![Vec::new()];
                for (t, q) in rest {
                    match t {
                        Tok::Word(w) => rows.last_mut().expect("nonempty").push((w.clone(), *q)),
                        Tok::Slash => rows.push(Vec::new()),
                        t => return Err(syntax(*q, format!("expected an element or `/`, found {t}"))),
                    }
                }
                once(&mut table, (rows, p), kw, p)?;
            }
            other => return Err(syntax(p, format!("unknown group clause `{other}`"))),
        }
    }
    let elements = elements.ok_or_else(|| syntax(at, "group needs an `elements` clause"))?;
    let (rows, tp) = table.ok_or_else(|| syntax(at, "group needs a `table` clause"))?;
    let index = unique(&elements, "element")?;
    if rows.len() != elements.len() {
        return Err(validation(
            tp,
            format!("table has {} rows, expected {}", rows.len(), elements.len()),
        ));
    }
    let mut t = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != elements.len() {
            let p = row.first().map_or(tp, |w| w.1);
            return Err(validation(
                p,
                format!("row {} has {} entries, expected {}", i + 1, row.len(), elements.len()),
            ));
        }
        t.push(
            row.iter()
                .map(|w| lookup(&index, w, "element"))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    let names = elements.into_iter().map(|e| e.0).collect();
    GroupTable::new(names, t).map_err(|e| validation(at, e.to_string()))
}

struct RawAction {
    group: Named,
    points: Vec<Named>,
    acts: Vec<(Named, Vec<(Named, Named)>)>,
}

fn parse_action(clauses: &[Clause], at: Pos) -> Result<RawAction, ParseError> {
    let mut group = None;
    let mut points = None;
    let mut acts = Vec::new();
    for c in clauses {
        let (kw, p, rest) = split_clause(c)?;
        match kw {
            "group" => {
                let g = shape(rest, p, &[None])?.remove(0);
                once(&mut group, g, kw, p)?;
            }
            "points" => once(&mut points, words(rest, p, "point")?, kw, p)?,
            "act" => {
                let (el, rest) = match rest {
                    [(Tok::Word(w), q), (Tok::Colon, _), rest @ ..] => ((w.clone(), *q), rest),
                    _ => return Err(syntax(p, "expected `act <element> : <point>-><point> ...`")),
                };
                let mut maps = Vec::new();
                for chunk in rest.chunks(3) {
                    match chunk {
                        [(Tok::Word(a), pa), (Tok::Arrow, _), (Tok::Word(b), pb)] => {
                            maps.push(((a.clone(), *pa), (b.clone(), *pb)))
                        }
                        _ => return Err(syntax(chunk[0].1, "expected `<point>-><point>`")),
                    }
                }
                acts.push((el, maps));
            }
            other => return Err(syntax(p, format!("unknown action clause `{other}`"))),
        }
    }
    Ok(RawAction {
        group: group.ok_or_else(|| syntax(at, "action needs a `group` clause"))?,
        points: points.ok_or_else(|| syntax(at, "action needs a `points` clause"))?,
        acts,
    })
}

fn build_action(raw: &RawAction, group: &GroupTable, at: Pos) -> Result<FiniteGroupoid, ParseError> {
    let pindex = unique(&raw.points, "point")?;
    let gindex: HashMap<String, usize> = group.names().iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
    let np = raw.points.len();
    let mut action: Vec<Vec<Option<(usize, Pos)>>> = vec![vec![None; np]; group.order()];
    for (el, maps) in &raw.acts {
        let g = lookup(&gindex, el, "element")?;
        for (a, b) in maps {
            let (x, y) = (lookup(&pindex, a, "point")?, lookup(&pindex, b, "point")?);
            match action[g][x] {
                Some((z, _)) if z != y => {
                    return Err(validation(
                        a.1,
                        format!("`{}` sends `{}` to two different points", el.0, a.0),
                    ))
                }
                _ => action[g][x] = Some((y, a.1)),
            }
        }
    }
    let table: Vec<Vec<usize>> = action
        .iter()
        .map(|row| row.iter().enumerate().map(|(x, y)| y.map_or(x, |y| y.0)).collect())
        .collect();
    let points: Vec<String> = raw.points.iter().map(|p| p.0.clone()).collect();
    action_groupoid(&group_as_groupoid(group), &points, &table).map_err(|e| validation(at, e.to_string()))
}

fn parse_groupoid(clauses: &[Clause], at: Pos) -> Result<FiniteGroupoid, ParseError> {
    let mut objects: Option<Vec<Named>> = None;
    let mut mors: Vec<MorDecl> = Vec::new();
    let mut comps: Vec<[Named; 3]> = Vec::new();
    let mut ids: Vec<(Named, Named)> = Vec::new();
    for c in clauses {
        let (kw, p, rest) = split_clause(c)?;
        match kw {
            "objects" => once(&mut objects, words(rest, p, "object")?, kw, p)?,
            "mor" => {
                let mut w = shape(rest, p, &[None, Some(Tok::Colon), None, Some(Tok::Arrow), None])?.into_iter();
                let (m, a, b) = (w.next().unwrap(), w.next().unwrap(), w.next().unwrap());
                mors.push((m, a, b));
            }
            "comp" => {
                let w = shape(rest, p, &[None, None, Some(Tok::Equals), None])?;
                comps.push(w.try_into().expect("three words"));
            }
            "id" => {
                let mut w = shape(rest, p, &[None, Some(Tok::Equals), None])?.into_iter();
                ids.push((w.next().unwrap(), w.next().unwrap()));
            }
            other => return Err(syntax(p, format!("unknown groupoid clause `{other}`"))),
        }
    }
    let objects = objects.ok_or_else(|| syntax(at, "groupoid needs an `objects` clause"))?;
    let oindex = unique(&objects, "object")?;
    let mindex = unique(mors.iter().map(|m| &m.0), "morphism")?;
    let n_mor = mors.len();
    let mut src = Vec::with_capacity(n_mor);
    let mut tgt = Vec::with_capacity(n_mor);
    for (_, a, b) in &mors {
        src.push(lookup(&oindex, a, "object")?);
        tgt.push(lookup(&oindex, b, "object")?);
    }
    let mut ident: Vec<Option<MorphismId>> = vec![None; objects.len()];
    for (o, m) in &ids {
        let x = lookup(&oindex, o, "object")?;
        let g = lookup(&mindex, m, "morphism")?;
        if ident[x].replace(g).is_some() {
            return Err(syntax(o.1, format!("identity of `{}` declared twice", o.0)));
        }
    }
    let ident: Vec<MorphismId> = ident
        .iter()
        .zip(&objects)
        .map(|(i, (name, p))| i.ok_or_else(|| validation(*p, format!("object `{name}` has no `id` declaration"))))
        .collect::<Result<_, _>>()?;
    let mut comp: BTreeMap<(MorphismId, MorphismId), (MorphismId, Pos)> = BTreeMap::new();
    for [g, h, k] in &comps {
        let key = (lookup(&mindex, g, "morphism")?, lookup(&mindex, h, "morphism")?);
        let v = lookup(&mindex, k, "morphism")?;
        if comp.insert(key, (v, g.1)).is_some() {
            return Err(syntax(g.1, format!("composite `{} {}` listed twice", g.0, h.0)));
        }
    }
    for m in 0..n_mor {
        comp.entry((ident[src[m]], m)).or_insert((m, at));
        comp.entry((m, ident[tgt[m]])).or_insert((m, at));
    }
    let inv = derive_inverses(&comp, &src, &tgt, &ident, &mors)?;
    let tables = GroupoidTables {
        objects: objects.into_iter().map(|o| o.0).collect(),
        morphisms: mors.into_iter().map(|m| m.0 .0).collect(),
        src,
        tgt,
        comp: comp.into_iter().map(|((g, h), (k, _))| (g, h, k)).collect(),
        inv,
        ident,
    };
    let g = FiniteGroupoid::from_tables(tables).map_err(|e| validation(at, e.to_string()))?;
    let report = g.validate();
    if !report.is_empty() {
        let lines = report.render(&g);
        return Err(validation(
            at,
            format!("{} axiom violation(s); first: {}", lines.len(), lines[0]),
        ));
    }
    Ok(g)
}

fn derive_inverses(
    comp: &BTreeMap<(MorphismId, MorphismId), (MorphismId, Pos)>,
    src: &[ObjectId],
    tgt: &[ObjectId],
    ident: &[MorphismId],
    mors: &[MorDecl],
) -> Result<Vec<MorphismId>, ParseError> {
    (0..src.len())
        .map(|g| {
            (0..src.len())
                .find(|&h| {
                    comp.get(&(g, h)).map(|c| c.0) == Some(ident[src[g]])
                        && comp.get(&(h, g)).map(|c| c.0) == Some(ident[tgt[g]])
                })
                .ok_or_else(|| {
                    let (name, p) = &mors[g].0;
                    validation(*p, format!("morphism `{name}` has no two-sided inverse"))
                })
        })
        .collect()
}

fn parse_int(w: &str, p: Pos) -> Result<BigInt, ParseError> {
    w.parse().map_err(|_| syntax(p, format!("`{w}` is not an integer")))
}

fn parse_sectors(clauses: &[Clause]) -> Result<Vec<SectorData>, ParseError> {
    let mut out = Vec::new();
    let mut seen = Vec::new();
    for (i, c) in clauses.iter().enumerate() {
        let (kw, p, rest) = split_clause(c)?;
        if kw != "sector" {
            return Err(syntax(p, format!("unknown sectors clause `{kw}`")));
        }
        let (id, rest) = match rest {
            [(Tok::Word(w), q), rest @ ..] if w != "age" => ((w.clone(), *q), rest),
            _ => ((format!("s{}", i + 1), p), rest),
        };
        let (age, rest) = match rest {
            [(Tok::Word(a), _), (Tok::Word(n), q), (Tok::Slash, _), (Tok::Word(d), r), rest @ ..] if a == "age" => {
                let d = parse_int(d, *r)?;
                if d == BigInt::from(0) {
                    return Err(validation(*r, "age has zero denominator"));
                }
                (BigRational::new(parse_int(n, *q)?, d), rest)
            }
            [(Tok::Word(a), _), (Tok::Word(n), q), rest @ ..] if a == "age" => {
                (BigRational::from_integer(parse_int(n, *q)?), rest)
            }
            _ => return Err(syntax(p, "expected `age <p/q>`")),
        };
        let betti = match rest {
            [(Tok::Word(b), q), nums @ ..] if b == "betti" => words(nums, *q, "Betti number")?
                .into_iter()
                .map(|(w, q)| {
                    w.parse::<usize>()
                        .map_err(|_| syntax(q, format!("`{w}` is not a Betti number")))
                })
                .collect::<Result<Vec<_>, _>>()?,
            _ => return Err(syntax(p, "expected `betti <ints>`")),
        };
        seen.push(id.clone());
        let sector = SectorData::new(id.0, age, betti).map_err(|e| validation(p, e.to_string()))?;
        out.push(sector);
    }
    unique(&seen, "sector")?;
    Ok(out)
}

/// Parses a workbench document.
pub fn parse_input(text: &str) -> Result<WorkbenchInput, ParseError> {
    let toks = tokenize(text);
    let eof = toks.last().map_or(Pos { line: 1, column: 1 }, |t| t.1);
    let mut p = Parser { toks, at: 0, eof };
    let mut input = WorkbenchInput::default();
    let mut names: HashMap<String, Pos> = HashMap::new();
    let mut pending: Vec<(String, Pos, RawAction)> = Vec::new();
    let mut order: Vec<(String, Option<Entity>)> = Vec::new();
    loop {
        p.skip_newlines();
        let Some(_) = p.peek() else { break };
        let (kw, at) = p.word("a statement")?;
        match kw.as_str() {
            "ring" => {
                let (r, q) = p.word("a ring")?;
                let ring = r.parse::<Ring>().map_err(|e| syntax(q, e))?;
                once(&mut input.ring, ring, "ring", at)?;
                p.end_of_statement()?;
            }
            "cap" => {
                let (c, q) = p.word("a cap")?;
                let cap = c
                    .parse::<usize>()
                    .map_err(|_| syntax(q, format!("`{c}` is not a cap")))?;
                if cap == 0 {
                    return Err(validation(q, "cap must be positive"));
                }
                once(&mut input.cap, cap, "cap", at)?;
                p.end_of_statement()?;
            }
            "group" | "action" | "groupoid" | "sectors" => {
                let (name, np) = p.word("a name")?;
                if let Some(first) = names.insert(name.clone(), np) {
                    return Err(np.error(
                        ParseErrorKind::DuplicateName,
                        format!("`{name}` is already defined at line {}", first.line),
                    ));
                }
                let clauses = p.block()?;
                let entity = match kw.as_str() {
                    "group" => {
                        let t = parse_group(&clauses, np)?;
                        let g = group_as_groupoid(&t);
                        Some(Entity::Group(t, g))
                    }
                    "groupoid" => Some(Entity::Groupoid(parse_groupoid(&clauses, np)?)),
                    "sectors" => Some(Entity::Sectors(parse_sectors(&clauses)?)),
                    _ => {
                        pending.push((name.clone(), np, parse_action(&clauses, np)?));
                        None
                    }
                };
                order.push((name, entity));
            }
            other => return Err(syntax(at, format!("unknown statement `{other}`"))),
        }
    }
    let groups: HashMap<&str, &GroupTable> = order
        .iter()
        .filter_map(|(n, e)| match e {
            Some(Entity::Group(t, _)) => Some((n.as_str(), t)),
            _ => None,
        })
        .collect();
    let mut actions = HashMap::new();
    for (name, np, raw) in &pending {
        let (gname, gp) = &raw.group;
        let builtin_group = catalog::group(gname);
        let table = match (groups.get(gname.as_str()), &builtin_group) {
            (Some(t), _) => *t,
            (None, Some(t)) if !names.contains_key(gname) => t,
            (None, _) if names.contains_key(gname) => {
                return Err(gp.error(ParseErrorKind::Validation, format!("`{gname}` is not a group")))
            }
            _ => {
                return Err(gp.error(ParseErrorKind::UnresolvedReference, format!("unknown group `{gname}`")));
            }
        };
        actions.insert(name.clone(), build_action(raw, table, *np)?);
    }
    input.entities = order
        .into_iter()
        .map(|(n, e)| {
            let e = e.unwrap_or_else(|| Entity::Action(actions.remove(&n).expect("built above")));
            (n, e)
        })
        .collect();
    Ok(input)
}
