//! Command dispatch: each command renders a report and says whether every
//! check it ran passed.

use std::fmt::Write;

use inertia_core::chen_ruan::{compare_hp_horb, orbifold_cohomology_ranks, ChenRuanError, SectorData};
use inertia_core::groupoid::{connected_components, inertia, isotropy_group, FiniteGroupoid, GroupoidError};
use inertia_core::homology::{
    cyclic_homology, hochschild_homology, homology, normalized_chains, periodic_homology, HomologyError,
    HomologyResult, Ring,
};
use inertia_core::nerve::{cyclic_nerve, nerve, DEFAULT_CAP};
use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::input::{Entity, EntityKind, WorkbenchInput};
use crate::suites::{self, SuiteResult};
use crate::table::{Format, Table};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Inertia { entity: Option<String> },
    Homology { entity: String },
    Hh { entity: String },
    Hc { entity: String },
    Hp { entity: String, dim_bound: usize },
    Verify { entity: String },
    Cr { sectors: String, against: Option<String> },
}

/// Flags given on the command line; `None` falls back to the document and
/// then to the defaults (ring ℤ, cap 6).
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub ring: Option<Ring>,
    pub cap: Option<usize>,
    pub format: Format,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("unknown entity `{0}`")]
    UnknownEntity(String),
    #[error("`{command}` needs a {expected}, but `{entity}` is a {found}")]
    Mismatch {
        command: &'static str,
        entity: String,
        expected: &'static str,
        found: EntityKind,
    },
    #[error("`hp` is computed over Q; drop `--ring Z`")]
    PeriodicOverIntegers,
    #[error("cap must be at least 1")]
    ZeroCap,
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    ChenRuan(#[from] ChenRuanError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub text: String,
    pub ok: bool,
}

struct Ctx<'a> {
    input: &'a WorkbenchInput,
    ring: Ring,
    cap: usize,
    format: Format,
}

impl Ctx<'_> {
    fn entity(&self, name: &str) -> Result<Entity, RunError> {
        self.input
            .resolve(name)
            .ok_or_else(|| RunError::UnknownEntity(name.to_string()))
    }

    fn groupoid(&self, command: &'static str, name: &str) -> Result<FiniteGroupoid, RunError> {
        let e = self.entity(name)?;
        e.groupoid().cloned().ok_or(RunError::Mismatch {
            command,
            entity: name.to_string(),
            expected: "group, action or groupoid",
            found: e.kind(),
        })
    }

    fn sectors(&self, name: &str) -> Result<Vec<SectorData>, RunError> {
        match self.entity(name)? {
            Entity::Sectors(s) => Ok(s),
            e => Err(RunError::Mismatch {
                command: "cr",
                entity: name.to_string(),
                expected: "sector list",
                found: e.kind(),
            }),
        }
    }

    /// A title line in plain mode; nothing in TSV mode.
    fn title(&self, out: &mut String, line: impl AsRef<str>) {
        if self.format == Format::Plain {
            writeln!(out, "{}", line.as_ref()).expect("write to string");
        }
    }
}

pub fn run(command: &Command, input: &WorkbenchInput, opts: &Options) -> Result<Report, RunError> {
    let cap = opts.cap.or(input.cap).unwrap_or(DEFAULT_CAP);
    if cap == 0 {
        return Err(RunError::ZeroCap);
    }
    let ctx = Ctx {
        input,
        ring: opts.ring.or(input.ring).unwrap_or(Ring::Integers),
        cap,
        format: opts.format,
    };
    match command {
        Command::Validate => Ok(validate(&ctx)),
        Command::Inertia { entity } => inertia_report(&ctx, entity.as_deref()),
        Command::Homology { entity } => {
            let g = ctx.groupoid("homology", entity)?;
            let h = homology(&normalized_chains(&nerve(&g, cap), ctx.ring, cap)?);
            Ok(homology_report(&ctx, &format!("H_*(nerve {entity})"), &h))
        }
        Command::Hh { entity } => {
            let g = ctx.groupoid("hh", entity)?;
            let h = hochschild_homology(&cyclic_nerve(&g, cap), ctx.ring, cap)?;
            Ok(homology_report(&ctx, &format!("HH_*(cyclic nerve {entity})"), &h))
        }
        Command::Hc { entity } => {
            let g = ctx.groupoid("hc", entity)?;
            let h = cyclic_homology(&cyclic_nerve(&g, cap), ctx.ring, cap)?;
            Ok(homology_report(&ctx, &format!("HC_*(cyclic nerve {entity})"), &h))
        }
        Command::Hp { entity, dim_bound } => {
            if opts.ring == Some(Ring::Integers) {
                return Err(RunError::PeriodicOverIntegers);
            }
            let g = ctx.groupoid("hp", entity)?;
            hp_report(&ctx, entity, &g, *dim_bound)
        }
        Command::Verify { entity } => {
            let g = ctx.groupoid("verify", entity)?;
            verify_report(&ctx, entity, &g)
        }
        Command::Cr { sectors, against } => cr_report(&ctx, sectors, against.as_deref()),
    }
}

fn validate(ctx: &Ctx<'_>) -> Report {
    let mut out = String::new();
    ctx.title(&mut out, format!("{} entities", ctx.input.entities.len()));
    let mut t = Table::new(["name", "kind", "objects", "morphisms", "sectors", "status"]);
    let mut ok = true;
    for (name, e) in &ctx.input.entities {
        let (objects, morphisms, sectors, status) = match e {
            Entity::Sectors(s) => ("-".into(), "-".into(), s.len().to_string(), "ok"),
            e => {
                let g = e.groupoid().expect("groupoid entity");
                let valid = g.validate().is_empty();
                ok &= valid;
                (
                    g.num_objects().to_string(),
                    g.num_morphisms().to_string(),
                    "-".into(),
                    if valid { "ok" } else { "invalid" },
                )
            }
        };
        t.row([
            name.clone(),
            e.kind().to_string(),
            objects,
            morphisms,
            sectors,
            status.into(),
        ]);
    }
    out.push_str(&t.render(ctx.format));
    Report { text: out, ok }
}

fn inertia_report(ctx: &Ctx<'_>, only: Option<&str>) -> Result<Report, RunError> {
    let names: Vec<String> = match only {
        Some(n) => vec![n.to_string()],
        None => ctx
            .input
            .entities
            .iter()
            .filter(|(_, e)| e.groupoid().is_some())
            .map(|(n, _)| n.clone())
            .collect(),
    };
    let mut out = String::new();
    let mut t = Table::new(["entity", "component", "representative", "objects", "isotropy order"]);
    for name in &names {
        let g = ctx.groupoid("inertia", name)?;
        let (ig, _) = inertia(&g)?;
        let comps = connected_components(&ig);
        ctx.title(
            &mut out,
            format!(
                "{name}: inertia has {} objects, {} morphisms, {} components",
                ig.num_objects(),
                ig.num_morphisms(),
                comps.len()
            ),
        );
        for (i, c) in comps.iter().enumerate() {
            let order = isotropy_group(&ig, c[0])?.order();
            t.row([
                name.clone(),
                i.to_string(),
                ig.object_name(c[0]).to_string(),
                c.len().to_string(),
                order.to_string(),
            ]);
        }
    }
    out.push_str(&t.render(ctx.format));
    Ok(Report { text: out, ok: true })
}

fn group_name(ring: Ring, rank: usize, torsion: &[BigInt]) -> String {
    let letter = ring.to_string();
    let mut parts = Vec::new();
    match rank {
        0 => {}
        1 => parts.push(letter),
        r => parts.push(format!("{letter}^{r}")),
    }
    let mut i = 0;
    while i < torsion.len() {
        let d = &torsion[i];
        let run = torsion[i..].iter().take_while(|t| *t == d).count();
        parts.push(if run == 1 {
            format!("Z/{d}")
        } else {
            format!("(Z/{d})^{run}")
        });
        i += run;
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn homology_table(h: &HomologyResult) -> Table {
    let mut t = Table::new(["degree", "rank", "torsion", "group"]);
    for (n, d) in h.degrees().iter().enumerate() {
        let torsion: Vec<&BigInt> = d.torsion.iter().filter(|x| !x.is_one()).collect();
        let tors = if torsion.is_empty() {
            "-".to_string()
        } else {
            torsion.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        };
        t.row([
            n.to_string(),
            d.rank.to_string(),
            tors,
            group_name(h.ring, d.rank, &d.torsion),
        ]);
    }
    t
}

fn validity_line(h: &HomologyResult) -> String {
    match h.validity() {
        Some(v) => format!("exact through degree {v}"),
        None => "no degree is within the validity bound".into(),
    }
}

fn homology_report(ctx: &Ctx<'_>, what: &str, h: &HomologyResult) -> Report {
    let mut out = String::new();
    ctx.title(
        &mut out,
        format!("{what}  ring {}  cap {}  {}", ctx.ring, ctx.cap, validity_line(h)),
    );
    out.push_str(&homology_table(h).render(ctx.format));
    Report { text: out, ok: true }
}

fn hp_report(ctx: &Ctx<'_>, name: &str, g: &FiniteGroupoid, dim_bound: usize) -> Result<Report, RunError> {
    let p = periodic_homology(&cyclic_nerve(g, ctx.cap), dim_bound, ctx.cap)?;
    let mut out = String::new();
    ctx.title(
        &mut out,
        format!(
            "HP_*(cyclic nerve {name})  ring Q  cap {}  HH bound {dim_bound}",
            ctx.cap
        ),
    );
    let mut t = Table::new(["degree", "rank", "read from", "HH sum"]);
    for k in 0..2 {
        t.row([
            k.to_string(),
            p.hp[k].to_string(),
            format!("HC_{}", p.source_degree[k]),
            p.hochschild_sum[k].to_string(),
        ]);
    }
    out.push_str(&t.render(ctx.format));
    Ok(Report { text: out, ok: true })
}

fn verify_report(ctx: &Ctx<'_>, name: &str, g: &FiniteGroupoid) -> Result<Report, RunError> {
    let cap = ctx.cap;
    let small = cap.min(2);
    let mut results: Vec<SuiteResult> = suites::identities(g, cap);
    results.push(suites::isomorphisms(g, cap));
    results.push(suites::hochschild_theorem(g, ctx.ring, cap)?);
    results.push(suites::connes_splitting(g, cap)?);
    if cap >= 2 {
        results.push(suites::periodic(g, cap)?);
    }
    results.push(suites::equivariance(g, small, 4));
    results.extend(suites::round_trips(g, small, 4));
    let ok = results.iter().all(SuiteResult::passed);
    let mut out = String::new();
    ctx.title(&mut out, format!("verify {name}  ring {}  cap {cap}", ctx.ring));
    let mut t = Table::new(["suite", "cases", "failures", "status", "scope"]);
    for r in &results {
        let scope = if r.detail.is_empty() {
            format!("levels 0..{cap}")
        } else {
            r.detail.clone()
        };
        t.row([
            r.name.clone(),
            r.cases.to_string(),
            r.failures.to_string(),
            if r.passed() { "pass" } else { "FAIL" }.to_string(),
            scope,
        ]);
    }
    out.push_str(&t.render(ctx.format));
    let failed = results.iter().filter(|r| !r.passed()).count();
    ctx.title(
        &mut out,
        if ok {
            "all suites pass".to_string()
        } else {
            format!("{failed} suite(s) failed")
        },
    );
    Ok(Report { text: out, ok })
}

fn cr_report(ctx: &Ctx<'_>, name: &str, against: Option<&str>) -> Result<Report, RunError> {
    let sectors = ctx.sectors(name)?;
    let table = orbifold_cohomology_ranks(&sectors);
    let mut out = String::new();
    ctx.title(&mut out, format!("H_orb({name})  {} sectors", sectors.len()));
    let mut t = Table::new(["degree", "rank"]);
    for (d, r) in &table {
        t.row([d.to_string(), r.to_string()]);
    }
    out.push_str(&t.render(ctx.format));
    let Some(other) = against else {
        return Ok(Report { text: out, ok: true });
    };
    let g = ctx.groupoid("cr", other)?;
    let p = periodic_homology(&cyclic_nerve(&g, ctx.cap), 0, ctx.cap)?;
    let c = compare_hp_horb(&sectors, p.hp[0], p.hp[1])?;
    ctx.title(
        &mut out,
        format!("comparison with HP_*(cyclic nerve {other})  ring Q  cap {}", ctx.cap),
    );
    let mut t = Table::new(["parity", "H_orb", "HP", "status"]);
    let status = |a: usize, b: usize| if a == b { "match" } else { "MISMATCH" };
    t.row([
        "even".to_string(),
        c.even_rank.to_string(),
        c.hp0_rank.to_string(),
        status(c.even_rank, c.hp0_rank).into(),
    ]);
    t.row([
        "odd".to_string(),
        c.odd_rank.to_string(),
        c.hp1_rank.to_string(),
        status(c.odd_rank, c.hp1_rank).into(),
    ]);
    out.push_str(&t.render(ctx.format));
    Ok(Report {
        text: out,
        ok: c.matches(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::parse_input;

    fn run_on(text: &str, cmd: Command, opts: Options) -> Result<Report, RunError> {
        run(&cmd, &parse_input(text).unwrap(), &opts)
    }

    #[test]
    fn hh_z2_table() {
        let r = run_on(
            "",
            Command::Hh { entity: "Z2".into() },
            Options {
                format: Format::Tsv,
                ..Default::default()
            },
        )
        .unwrap();
        let expected = "degree\trank\ttorsion\tgroup\n0\t2\t-\tZ^2\n1\t0\t2,2\t(Z/2)^2\n2\t0\t-\t0\n\
                        3\t0\t2,2\t(Z/2)^2\n4\t0\t-\t0\n5\t0\t2,2\t(Z/2)^2\n";
        assert_eq!(r.text, expected);
        assert!(r.ok);
    }

    #[test]
    fn hp_z3() {
        let r = run_on(
            "",
            Command::Hp {
                entity: "Z3".into(),
                dim_bound: 0,
            },
            Options::default(),
        )
        .unwrap();
        assert!(r.text.lines().any(|l| l.split_whitespace().take(2).eq(["0", "3"])));
        assert!(r.text.lines().any(|l| l.split_whitespace().take(2).eq(["1", "0"])));
        let err = run_on(
            "",
            Command::Hp {
                entity: "Z3".into(),
                dim_bound: 0,
            },
            Options {
                ring: Some(Ring::Integers),
                ..Default::default()
            },
        );
        assert!(matches!(err, Err(RunError::PeriodicOverIntegers)));
    }

    #[test]
    fn mismatches() {
        let doc = "sectors pt { sector age 0 betti 1 }";
        let e = run_on(doc, Command::Hh { entity: "pt".into() }, Options::default()).unwrap_err();
        assert!(matches!(e, RunError::Mismatch { .. }));
        let e = run_on(
            doc,
            Command::Cr {
                sectors: "Z2".into(),
                against: None,
            },
            Options::default(),
        )
        .unwrap_err();
        assert!(matches!(e, RunError::Mismatch { .. }));
        let e = run_on(doc, Command::Hh { entity: "nope".into() }, Options::default()).unwrap_err();
        assert!(matches!(e, RunError::UnknownEntity(_)));
    }

    #[test]
    fn cr_against_group() {
        let doc = "sectors pt3 { sector e age 0 betti 1; sector r age 0 betti 1; sector s age 0 betti 1 }";
        let opts = Options {
            cap: Some(3),
            ..Default::default()
        };
        let r = run_on(
            doc,
            Command::Cr {
                sectors: "pt3".into(),
                against: Some("S3".into()),
            },
            opts.clone(),
        )
        .unwrap();
        assert!(r.ok, "{}", r.text);
        let r = run_on(
            doc,
            Command::Cr {
                sectors: "pt3".into(),
                against: Some("Z2".into()),
            },
            opts,
        )
        .unwrap();
        assert!(!r.ok);
    }

    #[test]
    fn verify_z3() {
        let opts = Options {
            cap: Some(3),
            ..Default::default()
        };
        let r = run_on("", Command::Verify { entity: "Z3".into() }, opts).unwrap();
        assert!(r.ok, "{}", r.text);
        assert!(r.text.ends_with("all suites pass\n"));
    }
}
