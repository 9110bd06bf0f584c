//! Finite groupoids given by explicit structure tables.
//!
//! Composition is written in diagrammatic order: `comp(g, h)` is "`g` then
//! `h`" and is defined exactly when `tgt(g) == src(h)`. Every formula in this
//! crate (nerve faces, conjugation in the inertia groupoid, the cyclic
//! operators) is transcribed in that convention, so `v⁻¹·a·v` means
//! `comp(comp(inv(v), a), v)`.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

pub type ObjectId = usize;
pub type MorphismId = usize;

/// Raw tables describing a groupoid, before any checking.
#[derive(Clone, Debug, Default)]
pub struct GroupoidTables {
    pub objects: Vec<String>,
    pub morphisms: Vec<String>,
    pub src: Vec<ObjectId>,
    pub tgt: Vec<ObjectId>,
    /// `(g, h, g·h)` triples; pairs that are absent are undefined.
    pub comp: Vec<(MorphismId, MorphismId, MorphismId)>,
    pub inv: Vec<MorphismId>,
    pub ident: Vec<MorphismId>,
}

/// Tables that cannot even be read as a groupoid (wrong lengths, ids out of
/// range). Distinct from [`AxiomViolation`], which is about well-formed tables
/// that fail the groupoid axioms.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum StructuralError {
    #[error("table `{table}` has {found} entries, expected {expected}")]
    Length {
        table: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("table `{table}` refers to {kind} id {id}, but only {bound} exist")]
    OutOfRange {
        table: &'static str,
        kind: &'static str,
        id: usize,
        bound: usize,
    },
    #[error("composition of morphisms {0} and {1} is listed twice")]
    DuplicateComposition(MorphismId, MorphismId),
    #[error("duplicate {kind} name `{name}`")]
    DuplicateName { kind: &'static str, name: String },
}

/// A single failed groupoid axiom together with its witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AxiomViolation {
    /// `ident(x)` is not a loop at `x`.
    IdentityLoop {
        object: ObjectId,
    },
    /// `comp(g, h)` is defined although `tgt(g) != src(h)`, or undefined
    /// although they match.
    CompositionDomain {
        first: MorphismId,
        second: MorphismId,
        defined: bool,
    },
    /// `src(g·h) != src(g)` or `tgt(g·h) != tgt(h)`.
    CompositionEndpoints {
        first: MorphismId,
        second: MorphismId,
        result: MorphismId,
    },
    Associativity {
        f: MorphismId,
        g: MorphismId,
        h: MorphismId,
    },
    LeftUnit {
        object: ObjectId,
        morphism: MorphismId,
    },
    RightUnit {
        object: ObjectId,
        morphism: MorphismId,
    },
    /// `g·inv(g) != ident(src g)`.
    RightInverse {
        morphism: MorphismId,
    },
    /// `inv(g)·g != ident(tgt g)`.
    LeftInverse {
        morphism: MorphismId,
    },
}

impl AxiomViolation {
    pub fn axiom(&self) -> &'static str {
        match self {
            AxiomViolation::IdentityLoop { .. } => "identity",
            AxiomViolation::CompositionDomain { .. } => "composability",
            AxiomViolation::CompositionEndpoints { .. } => "composition endpoints",
            AxiomViolation::Associativity { .. } => "associativity",
            AxiomViolation::LeftUnit { .. } | AxiomViolation::RightUnit { .. } => "unit",
            AxiomViolation::RightInverse { .. } | AxiomViolation::LeftInverse { .. } => "inverse",
        }
    }

    /// Human-readable description using the groupoid's names.
    pub fn describe(&self, g: &FiniteGroupoid) -> String {
        let m = |id: MorphismId| g.morphism_name(id).to_string();
        let o = |id: ObjectId| g.object_name(id).to_string();
        match *self {
            AxiomViolation::IdentityLoop { object } => {
                format!(
                    "identity: ident({}) = {} is not a loop at {}",
                    o(object),
                    m(g.ident(object)),
                    o(object)
                )
            }
            AxiomViolation::CompositionDomain { first, second, defined } => {
                if defined {
                    format!(
                        "composability: {}·{} is defined but tgt({}) != src({})",
                        m(first),
                        m(second),
                        m(first),
                        m(second)
                    )
                } else {
                    format!("composability: {}·{} is composable but undefined", m(first), m(second))
                }
            }
            AxiomViolation::CompositionEndpoints { first, second, result } => format!(
                "composition endpoints: {}·{} = {} has wrong source or target",
                m(first),
                m(second),
                m(result)
            ),
            AxiomViolation::Associativity { f, g: gg, h } => {
                format!(
                    "associativity: ({}·{})·{} != {}·({}·{})",
                    m(f),
                    m(gg),
                    m(h),
                    m(f),
                    m(gg),
                    m(h)
                )
            }
            AxiomViolation::LeftUnit { object, morphism } => {
                format!("unit: ident({})·{} != {}", o(object), m(morphism), m(morphism))
            }
            AxiomViolation::RightUnit { object, morphism } => {
                format!("unit: {}·ident({}) != {}", m(morphism), o(object), m(morphism))
            }
            AxiomViolation::RightInverse { morphism } => {
                format!(
                    "inverse: {}·inv({}) != ident(src {})",
                    m(morphism),
                    m(morphism),
                    m(morphism)
                )
            }
            AxiomViolation::LeftInverse { morphism } => {
                format!(
                    "inverse: inv({})·{} != ident(tgt {})",
                    m(morphism),
                    m(morphism),
                    m(morphism)
                )
            }
        }
    }
}

/// List of violated axioms; empty iff the tables form a groupoid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<AxiomViolation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn render(&self, g: &FiniteGroupoid) -> Vec<String> {
        self.violations.iter().map(|v| v.describe(g)).collect()
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GroupoidError {
    #[error("groupoid fails {} axiom check(s), first: {}", .0.violations.len(), .0.violations[0].axiom())]
    Invalid(ValidationReport),
    #[error("unknown object id {0}")]
    UnknownObject(ObjectId),
    #[error(transparent)]
    Structural(#[from] StructuralError),
}

/// A finite groupoid: objects, morphisms and the five structure maps.
///
/// Values may be built from arbitrary (structurally sound) tables so that
/// [`FiniteGroupoid::validate`] can report what is wrong with them; the
/// constructions in this crate assume a valid groupoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    object_names: Vec<String>,
    morphism_names: Vec<String>,
    src: Vec<ObjectId>,
    tgt: Vec<ObjectId>,
    comp: Vec<Option<MorphismId>>,
    inv: Vec<MorphismId>,
    ident: Vec<MorphismId>,
    outgoing: Vec<Vec<MorphismId>>,
}

impl FiniteGroupoid {
    pub fn from_tables(t: GroupoidTables) -> Result<Self, StructuralError> {
        let n_obj = t.objects.len();
        let n_mor = t.morphisms.len();
        check_len("src", n_mor, t.src.len())?;
        check_len("tgt", n_mor, t.tgt.len())?;
        check_len("inv", n_mor, t.inv.len())?;
        check_len("ident", n_obj, t.ident.len())?;
        check_range("src", "object", &t.src, n_obj)?;
        check_range("tgt", "object", &t.tgt, n_obj)?;
        check_range("inv", "morphism", &t.inv, n_mor)?;
        check_range("ident", "morphism", &t.ident, n_mor)?;
        unique_names("object", &t.objects)?;
        unique_names("morphism", &t.morphisms)?;

        let mut comp = vec![None; n_mor * n_mor];
        for &(g, h, gh) in &t.comp {
            for id in [g, h, gh] {
                if id >= n_mor {
                    return Err(StructuralError::OutOfRange {
                        table: "comp",
                        kind: "morphism",
                        id,
                        bound: n_mor,
                    });
                }
            }
            let slot = &mut comp[g * n_mor + h];
            if slot.is_some() {
                return Err(StructuralError::DuplicateComposition(g, h));
            }
            *slot = Some(gh);
        }

        let mut outgoing = vec![Vec::new(); n_obj];
        for (m, &x) in t.src.iter().enumerate() {
            outgoing[x].push(m);
        }

        Ok(FiniteGroupoid {
            object_names: t.objects,
            morphism_names: t.morphisms,
            src: t.src,
            tgt: t.tgt,
            comp,
            inv: t.inv,
            ident: t.ident,
            outgoing,
        })
    }

    pub fn num_objects(&self) -> usize {
        self.object_names.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphism_names.len()
    }

    pub fn object_name(&self, x: ObjectId) -> &str {
        &self.object_names[x]
    }

    pub fn morphism_name(&self, g: MorphismId) -> &str {
        &self.morphism_names[g]
    }

    pub fn object_names(&self) -> &[String] {
        &self.object_names
    }

    pub fn morphism_names(&self) -> &[String] {
        &self.morphism_names
    }

    pub fn object_by_name(&self, name: &str) -> Option<ObjectId> {
        self.object_names.iter().position(|n| n == name)
    }

    pub fn morphism_by_name(&self, name: &str) -> Option<MorphismId> {
        self.morphism_names.iter().position(|n| n == name)
    }

    pub fn src(&self, g: MorphismId) -> ObjectId {
        self.src[g]
    }

    pub fn tgt(&self, g: MorphismId) -> ObjectId {
        self.tgt[g]
    }

    pub fn comp(&self, g: MorphismId, h: MorphismId) -> Option<MorphismId> {
        self.comp[g * self.num_morphisms() + h]
    }

    /// Composition of a pair known to be composable in a valid groupoid.
    ///
    /// Panics if the pair is undefined.
    pub fn compose(&self, g: MorphismId, h: MorphismId) -> MorphismId {
        self.comp(g, h).unwrap_or_else(|| {
            panic!(
                "composition {}·{} is undefined",
                self.morphism_name(g),
                self.morphism_name(h)
            )
        })
    }

    /// `g₁·g₂·…·g_k` for a nonempty composable chain.
    pub fn compose_all(&self, chain: &[MorphismId]) -> MorphismId {
        let (&first, rest) = chain.split_first().expect("empty chain");
        rest.iter().fold(first, |acc, &g| self.compose(acc, g))
    }

    pub fn inv(&self, g: MorphismId) -> MorphismId {
        self.inv[g]
    }

    pub fn ident(&self, x: ObjectId) -> MorphismId {
        self.ident[x]
    }

    pub fn is_identity(&self, g: MorphismId) -> bool {
        self.ident[self.src[g]] == g
    }

    pub fn is_automorphism(&self, g: MorphismId) -> bool {
        self.src[g] == self.tgt[g]
    }

    /// Morphisms with source `x`, in id order.
    pub fn outgoing(&self, x: ObjectId) -> &[MorphismId] {
        &self.outgoing[x]
    }

    /// All automorphisms in id order (the objects of the inertia groupoid).
    pub fn automorphisms(&self) -> impl Iterator<Item = MorphismId> + '_ {
        (0..self.num_morphisms()).filter(move |&g| self.is_automorphism(g))
    }

    /// `inv(v)·a·v`.
    pub fn conjugate(&self, a: MorphismId, v: MorphismId) -> MorphismId {
        self.compose(self.compose(self.inv(v), a), v)
    }

    /// Checks every groupoid axiom exhaustively.
    pub fn validate(&self) -> ValidationReport {
        let n = self.num_morphisms();
        let mut violations = Vec::new();

        for x in 0..self.num_objects() {
            let e = self.ident(x);
            if self.src(e) != x || self.tgt(e) != x {
                violations.push(AxiomViolation::IdentityLoop { object: x });
            }
        }

        for g in 0..n {
            for h in 0..n {
                let composable = self.tgt(g) == self.src(h);
                match self.comp(g, h) {
                    Some(gh) if composable => {
                        if self.src(gh) != self.src(g) || self.tgt(gh) != self.tgt(h) {
                            violations.push(AxiomViolation::CompositionEndpoints {
                                first: g,
                                second: h,
                                result: gh,
                            });
                        }
                    }
                    Some(_) => violations.push(AxiomViolation::CompositionDomain {
                        first: g,
                        second: h,
                        defined: true,
                    }),
                    None if composable => violations.push(AxiomViolation::CompositionDomain {
                        first: g,
                        second: h,
                        defined: false,
                    }),
                    None => {}
                }
            }
        }
        // Later checks assume a total composition on composable pairs.
        if !violations.is_empty() {
            return ValidationReport { violations };
        }

        for f in 0..n {
            for &g in self.outgoing(self.tgt(f)) {
                let fg = self.compose(f, g);
                for &h in self.outgoing(self.tgt(g)) {
                    if self.compose(fg, h) != self.compose(f, self.compose(g, h)) {
                        violations.push(AxiomViolation::Associativity { f, g, h });
                    }
                }
            }
        }

        for g in 0..n {
            let (x, y) = (self.src(g), self.tgt(g));
            if self.comp(self.ident(x), g) != Some(g) {
                violations.push(AxiomViolation::LeftUnit { object: x, morphism: g });
            }
            if self.comp(g, self.ident(y)) != Some(g) {
                violations.push(AxiomViolation::RightUnit { object: y, morphism: g });
            }
            let gi = self.inv(g);
            if self.comp(g, gi) != Some(self.ident(x)) {
                violations.push(AxiomViolation::RightInverse { morphism: g });
            }
            if self.comp(gi, g) != Some(self.ident(y)) {
                violations.push(AxiomViolation::LeftInverse { morphism: g });
            }
        }

        ValidationReport { violations }
    }

    pub fn ensure_valid(&self) -> Result<(), GroupoidError> {
        let report = self.validate();
        if report.is_empty() {
            Ok(())
        } else {
            Err(GroupoidError::Invalid(report))
        }
    }

    /// `self ⊔ other`, with the objects and morphisms of `other` appended.
    pub fn disjoint_union(&self, other: &FiniteGroupoid) -> FiniteGroupoid {
        let (no, nm) = (self.num_objects(), self.num_morphisms());
        let tag = |s: &String, side: &str| format!("{side}{s}");
        let mut t = GroupoidTables {
            objects: self.object_names.iter().map(|s| tag(s, "0:")).collect(),
            morphisms: self.morphism_names.iter().map(|s| tag(s, "0:")).collect(),
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            comp: Vec::new(),
            inv: self.inv.clone(),
            ident: self.ident.clone(),
        };
        t.objects.extend(other.object_names.iter().map(|s| tag(s, "1:")));
        t.morphisms.extend(other.morphism_names.iter().map(|s| tag(s, "1:")));
        t.src.extend(other.src.iter().map(|&x| x + no));
        t.tgt.extend(other.tgt.iter().map(|&x| x + no));
        t.inv.extend(other.inv.iter().map(|&g| g + nm));
        t.ident.extend(other.ident.iter().map(|&g| g + nm));
        for (gr, shift) in [(self, 0), (other, nm)] {
            let n = gr.num_morphisms();
            for g in 0..n {
                for h in 0..n {
                    if let Some(gh) = gr.comp(g, h) {
                        t.comp.push((g + shift, h + shift, gh + shift));
                    }
                }
            }
        }
        FiniteGroupoid::from_tables(t).expect("disjoint union of well-formed tables")
    }
}

fn check_len(table: &'static str, expected: usize, found: usize) -> Result<(), StructuralError> {
    if expected == found {
        Ok(())
    } else {
        Err(StructuralError::Length { table, expected, found })
    }
}

fn check_range(table: &'static str, kind: &'static str, ids: &[usize], bound: usize) -> Result<(), StructuralError> {
    match ids.iter().find(|&&id| id >= bound) {
        Some(&id) => Err(StructuralError::OutOfRange { table, kind, id, bound }),
        None => Ok(()),
    }
}

fn unique_names(kind: &'static str, names: &[String]) -> Result<(), StructuralError> {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(StructuralError::DuplicateName { kind, name: n.clone() });
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GroupTableError {
    #[error("group table is empty")]
    Empty,
    #[error("table is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("closure: entry {entry} at ({row}, {col}) is not an element")]
    NotClosed { row: usize, col: usize, entry: usize },
    #[error("identity: no element acts as a two-sided identity")]
    NoIdentity,
    #[error("associativity: ({a}·{b})·{c} != {a}·({b}·{c})")]
    NotAssociative { a: String, b: String, c: String },
    #[error("inverse: element {0} has no inverse")]
    NoInverse(String),
    #[error("duplicate element name `{0}`")]
    DuplicateName(String),
}

/// A finite group given by its Cayley table; `table[a][b]` is `a·b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, GroupTableError> {
        let n = names.len();
        if n == 0 {
            return Err(GroupTableError::Empty);
        }
        unique_names("element", &names).map_err(|e| match e {
            StructuralError::DuplicateName { name, .. } => GroupTableError::DuplicateName(name),
            _ => unreachable!(),
        })?;
        if table.len() != n {
            return Err(GroupTableError::NotSquare {
                row: table.len(),
                len: 0,
                expected: n,
            });
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != n {
                return Err(GroupTableError::NotSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
            if let Some((col, &entry)) = r.iter().enumerate().find(|(_, &e)| e >= n) {
                return Err(GroupTableError::NotClosed { row, col, entry });
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(GroupTableError::NoIdentity)?;
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GroupTableError::NotAssociative {
                            a: names[a].clone(),
                            b: names[b].clone(),
                            c: names[c].clone(),
                        });
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| GroupTableError::NoInverse(names[a].clone()))?;
            inverse.push(inv);
        }
        Ok(GroupTable {
            names,
            table,
            identity,
            inverse,
        })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// ℤ/n with elements named `0..n-1`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        let names = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(names, table).expect("cyclic group table")
    }

    /// Symmetric group on `n` letters, elements listed in lexicographic
    /// order of their one-line notation (the identity first). The product
    /// `p·q` is "apply `p`, then `q`".
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        let names = perms
            .iter()
            .map(|p| p.iter().map(|i| (i + 1).to_string()).collect::<String>())
            .collect();
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| index(&(0..n).map(|i| q[p[i]]).collect()))
                    .collect()
            })
            .collect();
        Self::new(names, table).expect("symmetric group table")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// Conjugacy classes, each sorted, ordered by least element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for a in 0..n {
            if class_of[a] != usize::MAX {
                continue;
            }
            let mut class: Vec<usize> = (0..n).map(|v| self.mul(self.mul(self.inverse(v), a), v)).collect();
            class.sort_unstable();
            class.dedup();
            for &b in &class {
                class_of[b] = classes.len();
            }
            classes.push(class);
        }
        classes
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// A group as a groupoid with a single object `*`; morphisms are the group
/// elements in table order.
pub fn group_as_groupoid(group: &GroupTable) -> FiniteGroupoid {
    let n = group.order();
    let mut comp = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            comp.push((a, b, group.mul(a, b)));
        }
    }
    FiniteGroupoid::from_tables(GroupoidTables {
        objects: vec!["*".to_string()],
        morphisms: group.names().to_vec(),
        src: vec![0; n],
        tgt: vec![0; n],
        comp,
        inv: (0..n).map(|a| group.inverse(a)).collect(),
        ident: vec![group.identity()],
    })
    .expect("group tables are well formed")
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ActionError {
    #[error("acting groupoid has {0} objects; a group (one object) is required")]
    NotAGroup(usize),
    #[error(transparent)]
    InvalidGroup(#[from] GroupoidError),
    #[error("action table has {found} rows, expected one per group element ({expected})")]
    Shape { expected: usize, found: usize },
    #[error("action sends point {point} under `{element}` to {image}, which is not a point")]
    PointOutOfRange {
        element: String,
        point: String,
        image: usize,
    },
    #[error("identity moves point {0}")]
    IdentityMoves(String),
    #[error("not a right action: ({point}·{g})·{h} != {point}·({g}{h})")]
    NotCompatible { g: String, h: String, point: String },
}

/// The action groupoid `X ⋊ G` of a right action of a one-object groupoid on
/// a finite point set. `action[g][x]` is `x·g`.
///
/// Objects are the points; the morphism `(x, g)` goes from `x` to `x·g` and
/// has id `x·|G| + g`.
pub fn action_groupoid(
    group: &FiniteGroupoid,
    points: &[String],
    action: &[Vec<usize>],
) -> Result<FiniteGroupoid, ActionError> {
    if group.num_objects() != 1 {
        return Err(ActionError::NotAGroup(group.num_objects()));
    }
    group.ensure_valid()?;
    let order = group.num_morphisms();
    let np = points.len();
    if action.len() != order {
        return Err(ActionError::Shape {
            expected: order,
            found: action.len(),
        });
    }
    for (g, row) in action.iter().enumerate() {
        if row.len() != np {
            return Err(ActionError::Shape {
                expected: np,
                found: row.len(),
            });
        }
        if let Some((x, &y)) = row.iter().enumerate().find(|(_, &y)| y >= np) {
            return Err(ActionError::PointOutOfRange {
                element: group.morphism_name(g).to_string(),
                point: points[x].clone(),
                image: y,
            });
        }
    }
    let e = group.ident(0);
    if let Some(x) = (0..np).find(|&x| action[e][x] != x) {
        return Err(ActionError::IdentityMoves(points[x].clone()));
    }
    for g in 0..order {
        for h in 0..order {
            let gh = group.compose(g, h);
            for x in 0..np {
                if action[h][action[g][x]] != action[gh][x] {
                    return Err(ActionError::NotCompatible {
                        g: group.morphism_name(g).to_string(),
                        h: group.morphism_name(h).to_string(),
                        point: points[x].clone(),
                    });
                }
            }
        }
    }

    let id = |x: usize, g: usize| x * order + g;
    let mut t = GroupoidTables {
        objects: points.to_vec(),
        ..Default::default()
    };
    for x in 0..np {
        for g in 0..order {
            t.morphisms.push(format!("({},{})", points[x], group.morphism_name(g)));
            t.src.push(x);
            t.tgt.push(action[g][x]);
            t.inv.push(id(action[g][x], group.inv(g)));
            for h in 0..order {
                t.comp.push((id(x, g), id(action[g][x], h), id(x, group.compose(g, h))));
            }
        }
        t.ident.push(id(x, e));
    }
    Ok(FiniteGroupoid::from_tables(t).expect("action tables are well formed"))
}

/// Labels tying the inertia groupoid back to the original groupoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InertiaLabel {
    /// For each object of `∧G`, the automorphism `a` of `G` it stands for.
    pub object_automorphism: Vec<MorphismId>,
    /// For each morphism of `∧G`, the pair `(a, v)`: source `a`, target
    /// `inv(v)·a·v`.
    pub morphism_pair: Vec<(MorphismId, MorphismId)>,
}

impl InertiaLabel {
    /// Object of `∧G` labelled by the automorphism `a`, if `a` is one.
    pub fn object_of(&self, a: MorphismId) -> Option<ObjectId> {
        self.object_automorphism.binary_search(&a).ok()
    }

    /// Morphism of `∧G` labelled by `(a, v)`.
    pub fn morphism_of(&self, a: MorphismId, v: MorphismId) -> Option<MorphismId> {
        self.morphism_pair.binary_search(&(a, v)).ok()
    }
}

/// The inertia groupoid `∧G`: objects are the automorphisms of `G`, a
/// morphism `(a, v)` conjugates `a` into `inv(v)·a·v`.
///
/// Ids are lexicographic in the labels, so both label tables are sorted.
pub fn inertia(g: &FiniteGroupoid) -> Result<(FiniteGroupoid, InertiaLabel), GroupoidError> {
    g.ensure_valid()?;
    let autos: Vec<MorphismId> = g.automorphisms().collect();
    let mut pairs = Vec::new();
    for &a in &autos {
        for &v in g.outgoing(g.src(a)) {
            pairs.push((a, v));
        }
    }
    let label = InertiaLabel {
        object_automorphism: autos,
        morphism_pair: pairs,
    };

    let obj = |a: MorphismId| label.object_of(a).expect("conjugate of an automorphism");
    let mor = |a: MorphismId, v: MorphismId| label.morphism_of(a, v).expect("inertia pair");
    let mut t = GroupoidTables {
        objects: label
            .object_automorphism
            .iter()
            .map(|&a| g.morphism_name(a).to_string())
            .collect(),
        ..Default::default()
    };
    for &(a, v) in &label.morphism_pair {
        let b = g.conjugate(a, v);
        t.morphisms
            .push(format!("({},{})", g.morphism_name(a), g.morphism_name(v)));
        t.src.push(obj(a));
        t.tgt.push(obj(b));
        t.inv.push(mor(b, g.inv(v)));
        for &w in g.outgoing(g.tgt(v)) {
            t.comp.push((mor(a, v), mor(b, w), mor(a, g.compose(v, w))));
        }
    }
    for &a in &label.object_automorphism {
        t.ident.push(mor(a, g.ident(g.src(a))));
    }
    let out = FiniteGroupoid::from_tables(t).expect("inertia tables are well formed");
    Ok((out, label))
}

/// Objects grouped by the equivalence "joined by a morphism"; blocks are
/// sorted and ordered by their least object.
pub fn connected_components(g: &FiniteGroupoid) -> Vec<Vec<ObjectId>> {
    let n = g.num_objects();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for m in 0..g.num_morphisms() {
        let (a, b) = (find(&mut parent, g.src(m)), find(&mut parent, g.tgt(m)));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            parent[hi] = lo;
        }
    }
    let mut blocks: Vec<Vec<ObjectId>> = Vec::new();
    let mut block_of_root = vec![usize::MAX; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        if block_of_root[r] == usize::MAX {
            block_of_root[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[block_of_root[r]].push(x);
    }
    blocks
}

/// The automorphism group `G_x` as a multiplication table, elements in
/// morphism id order.
pub fn isotropy_group(g: &FiniteGroupoid, x: ObjectId) -> Result<GroupTable, GroupoidError> {
    if x >= g.num_objects() {
        return Err(GroupoidError::UnknownObject(x));
    }
    let elems: Vec<MorphismId> = g.outgoing(x).iter().copied().filter(|&m| g.tgt(m) == x).collect();
    let pos = |m: MorphismId| elems.iter().position(|&e| e == m).expect("closed under composition");
    let names = elems.iter().map(|&m| g.morphism_name(m).to_string()).collect();
    let table = elems
        .iter()
        .map(|&a| elems.iter().map(|&b| pos(g.compose(a, b))).collect())
        .collect();
    GroupTable::new(names, table).map_err(|_| GroupoidError::Invalid(g.validate()))
}

impl fmt::Display for FiniteGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "groupoid with {} objects and {} morphisms",
            self.num_objects(),
            self.num_morphisms()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2_tables(ss: usize) -> GroupoidTables {
        GroupoidTables {
            objects: vec!["*".into()],
            morphisms: vec!["e".into(), "s".into()],
            src: vec![0, 0],
            tgt: vec![0, 0],
            comp: vec![(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, ss)],
            inv: vec![0, 1],
            ident: vec![0],
        }
    }

    #[test]
    fn trivial_groupoid_is_valid() {
        let g = group_as_groupoid(&GroupTable::trivial());
        assert!(g.validate().is_empty());
        assert_eq!((g.num_objects(), g.num_morphisms()), (1, 1));
    }

    #[test]
    fn z2_from_tables_is_valid() {
        let g = FiniteGroupoid::from_tables(z2_tables(0)).unwrap();
        assert!(g.validate().is_empty());
    }

    #[test]
    fn broken_z2_reports_inverse_at_s() {
        let g = FiniteGroupoid::from_tables(z2_tables(1)).unwrap();
        let report = g.validate();
        assert!(report
            .violations
            .contains(&AxiomViolation::RightInverse { morphism: 1 }));
        assert!(report
            .render(&g)
            .iter()
            .any(|l| l.starts_with("inverse") && l.contains('s')));
    }

    #[test]
    fn out_of_range_is_structural() {
        let mut t = z2_tables(0);
        t.tgt[1] = 3;
        assert!(matches!(
            FiniteGroupoid::from_tables(t),
            Err(StructuralError::OutOfRange { table: "tgt", .. })
        ));
    }

    #[test]
    fn group_tables() {
        assert_eq!(group_as_groupoid(&GroupTable::cyclic(2)).num_morphisms(), 2);
        let s3 = group_as_groupoid(&GroupTable::symmetric(3));
        assert_eq!((s3.num_objects(), s3.num_morphisms()), (1, 6));
        assert!(s3.validate().is_empty());

        let bad = GroupTable::new(vec!["e".into(), "s".into()], vec![vec![0, 1], vec![1, 1]]);
        assert_eq!(bad, Err(GroupTableError::NoInverse("s".into())));
        let bad = GroupTable::new(vec!["e".into(), "s".into()], vec![vec![0, 1], vec![1, 2]]);
        assert!(matches!(bad, Err(GroupTableError::NotClosed { .. })));
    }

    #[test]
    fn action_groupoids() {
        let trivial = group_as_groupoid(&GroupTable::trivial());
        let pts = vec!["1".to_string(), "2".to_string()];
        let g = action_groupoid(&trivial, &pts, &[vec![0, 1]]).unwrap();
        assert_eq!(connected_components(&g).len(), 2);

        let z2 = group_as_groupoid(&GroupTable::cyclic(2));
        let g = action_groupoid(&z2, &pts, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!((g.num_objects(), g.num_morphisms()), (2, 4));
        assert!(g.validate().is_empty());
        assert_eq!(connected_components(&g), vec![vec![0, 1]]);

        let s3t = GroupTable::symmetric(3);
        let s3 = group_as_groupoid(&s3t);
        let pts3: Vec<String> = (1..=3).map(|i| i.to_string()).collect();
        let act: Vec<Vec<usize>> = natural_action(&s3t);
        let g = action_groupoid(&s3, &pts3, &act).unwrap();
        assert_eq!((g.num_objects(), g.num_morphisms()), (3, 18));
        assert!(g.validate().is_empty());
        assert_eq!(isotropy_group(&g, 0).unwrap().order(), 2);
    }

    fn natural_action(s3: &GroupTable) -> Vec<Vec<usize>> {
        // element names are one-line notation, so x·p = p(x)
        s3.names()
            .iter()
            .map(|p| p.chars().map(|c| c.to_digit(10).unwrap() as usize - 1).collect())
            .collect()
    }

    #[test]
    fn non_action_is_rejected() {
        let z2 = group_as_groupoid(&GroupTable::cyclic(2));
        let pts = vec!["1".to_string(), "2".to_string()];
        assert!(matches!(
            action_groupoid(&z2, &pts, &[vec![1, 0], vec![1, 0]]),
            Err(ActionError::IdentityMoves(_))
        ));
        let z3 = group_as_groupoid(&GroupTable::cyclic(3));
        let pts3: Vec<String> = (1..=3).map(|i| i.to_string()).collect();
        // 1 acts as a swap: not compatible with 1+1 = 2
        let act = vec![vec![0, 1, 2], vec![1, 0, 2], vec![0, 1, 2]];
        assert!(matches!(
            action_groupoid(&z3, &pts3, &act),
            Err(ActionError::NotCompatible { .. })
        ));
    }

    #[test]
    fn inertia_examples() {
        let (t, _) = inertia(&group_as_groupoid(&GroupTable::trivial())).unwrap();
        assert_eq!((t.num_objects(), t.num_morphisms()), (1, 1));

        let (i2, label) = inertia(&group_as_groupoid(&GroupTable::cyclic(2))).unwrap();
        assert_eq!((i2.num_objects(), i2.num_morphisms()), (2, 4));
        assert_eq!(connected_components(&i2).len(), 2);
        assert_eq!(label.morphism_pair, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);

        let (i6, _) = inertia(&group_as_groupoid(&GroupTable::symmetric(3))).unwrap();
        assert_eq!((i6.num_objects(), i6.num_morphisms()), (6, 36));
        assert!(i6.validate().is_empty());
        assert_eq!(connected_components(&i6).len(), 3);
    }

    #[test]
    fn components_of_disjoint_union() {
        let z2 = group_as_groupoid(&GroupTable::cyclic(2));
        let u = z2.disjoint_union(&z2);
        assert!(u.validate().is_empty());
        assert_eq!(connected_components(&u), vec![vec![0], vec![1]]);
    }

    #[test]
    fn isotropy_examples() {
        let t = group_as_groupoid(&GroupTable::trivial());
        assert_eq!(isotropy_group(&t, 0).unwrap().order(), 1);
        let z2 = group_as_groupoid(&GroupTable::cyclic(2));
        assert_eq!(isotropy_group(&z2, 0).unwrap().order(), 2);
        assert_eq!(isotropy_group(&z2, 1), Err(GroupoidError::UnknownObject(1)));
    }

    #[test]
    fn symmetric_group_has_three_classes() {
        assert_eq!(GroupTable::symmetric(3).conjugacy_classes().len(), 3);
        assert_eq!(GroupTable::symmetric(4).conjugacy_classes().len(), 5);
    }
}
