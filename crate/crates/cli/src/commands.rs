//! The batch subcommands. Each returns a report that prints as text or JSON,
//! plus the graphs to export when `--dot` is given.

use std::fmt;

use hyperset::canon::{automorphisms_with, to_dot};
use hyperset::gen::{random_apg, rng};
use hyperset::group::{aut_group_of_with, build_a_g_with, groups_isomorphic, GroupTable};
use hyperset::hsl::unparse_with_prefix;
use hyperset::search::pointed_isomorphic_with;
use hyperset::wf::{all_automorphisms_with, build_universe_with, classify_map, extend_map, parse_cycles};
use hyperset::{Apg, Limits};
use rand::Rng;
use serde::Serialize;

use crate::session::{self, Input, Mode, Solved};
use crate::CliError;

pub struct Outcome<R> {
    pub report: R,
    pub pictures: Vec<Apg>,
    pub exit: u8,
}

pub fn dot_of(pictures: &[Apg]) -> String {
    pictures.iter().map(to_dot).collect()
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Cycle notation, fixed points omitted; `()` for the identity.
pub fn cycles(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            cycle.push(v.to_string());
            v = p[v];
        }
        out.push_str(&format!("({})", cycle.join(" ")));
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

#[derive(Debug, Serialize)]
pub struct SetReport {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub nodes: usize,
    pub canonical: String,
}

#[derive(Debug, Serialize)]
pub struct Equality {
    pub left: String,
    pub right: String,
    pub equal: bool,
}

#[derive(Debug, Serialize)]
pub struct SolveReport {
    pub mode: String,
    pub sets: Vec<SetReport>,
    pub equalities: Vec<Equality>,
}

impl fmt::Display for SolveReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mode: {}", self.mode)?;
        for s in &self.sets {
            match &s.id {
                Some(id) => writeln!(f, "{}: {id}", s.name)?,
                None => writeln!(f, "{}:", s.name)?,
            }
            for line in s.canonical.lines() {
                writeln!(f, "  {line}")?;
            }
        }
        for e in &self.equalities {
            let op = if e.equal { "=" } else { "!=" };
            writeln!(f, "{} {op} {}", e.left, e.right)?;
        }
        Ok(())
    }
}

pub fn solve(input: &Input, mode: Mode, limits: &Limits) -> Result<Outcome<SolveReport>, CliError> {
    let solved = session::solve(input, mode)?;
    let names: Vec<String> = solved.names().into_iter().map(String::from).collect();
    let mut sets = Vec::new();
    let mut pictures = Vec::new();
    for name in &names {
        let c = session::canonical(&solved, name, mode, limits)?;
        let id = match &solved {
            Solved::Boffa(..) => Some(solved.id(name)?.to_string()),
            Solved::Graphs(_) => None,
        };
        sets.push(SetReport {
            name: name.clone(),
            id,
            nodes: c.node_count(),
            canonical: unparse_with_prefix(&c, &format!("{name}_")),
        });
        pictures.push(c);
    }
    let mut equalities = Vec::new();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            let equal = match &solved {
                Solved::Boffa(..) => solved.id(&names[i])? == solved.id(&names[j])?,
                Solved::Graphs(_) => pointed_isomorphic_with(&pictures[i], &pictures[j], limits)?.is_some(),
            };
            equalities.push(Equality {
                left: names[i].clone(),
                right: names[j].clone(),
                equal,
            });
        }
    }
    Ok(Outcome {
        report: SolveReport {
            mode: mode.to_string(),
            sets,
            equalities,
        },
        pictures,
        exit: 0,
    })
}

#[derive(Debug, Serialize)]
pub struct EqReport {
    pub mode: String,
    pub left: String,
    pub right: String,
    pub equal: bool,
}

impl fmt::Display for EqReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.equal { "equal" } else { "unequal" };
        writeln!(f, "{} and {} are {verdict} under {}", self.left, self.right, self.mode)
    }
}

pub const EXIT_UNEQUAL: u8 = 10;

pub fn eq(input: &Input, left: &str, right: &str, mode: Mode, limits: &Limits) -> Result<Outcome<EqReport>, CliError> {
    let solved = session::solve(input, mode)?;
    let equal = session::equal(&solved, left, right, mode, limits)?;
    let pictures = vec![solved.picture(left)?, solved.picture(right)?];
    Ok(Outcome {
        report: EqReport {
            mode: mode.to_string(),
            left: left.to_string(),
            right: right.to_string(),
            equal,
        },
        pictures,
        exit: if equal { 0 } else { EXIT_UNEQUAL },
    })
}

#[derive(Debug, Serialize)]
pub struct AutReport {
    pub mode: String,
    pub name: String,
    pub nodes: usize,
    pub order: String,
    pub rigid: bool,
    pub generators: Vec<String>,
}

impl fmt::Display for AutReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: order {} on {} nodes", self.name, self.order, self.nodes)?;
        writeln!(f, "rigid: {}", yes(self.rigid))?;
        for g in &self.generators {
            writeln!(f, "generator: {g}")?;
        }
        Ok(())
    }
}

/// Automorphisms of the picture of `name`: the flattened graph as written, or
/// the stored set's picture in Boffa mode.
pub fn aut_of(solved: &Solved, name: &str, mode: Mode, limits: &Limits) -> Result<AutReport, CliError> {
    let g = solved.picture(name)?;
    let group = automorphisms_with(&g, limits)?;
    Ok(AutReport {
        mode: mode.to_string(),
        name: name.to_string(),
        nodes: g.node_count(),
        order: group.order.to_string(),
        rigid: group.is_trivial(),
        generators: group.generators.iter().map(|p| cycles(p)).collect(),
    })
}

pub fn aut(input: &Input, name: Option<&str>, mode: Mode, limits: &Limits) -> Result<Outcome<AutReport>, CliError> {
    let solved = session::solve(input, mode)?;
    let name = match name {
        Some(n) => n.to_string(),
        None => solved
            .names()
            .first()
            .map(|n| n.to_string())
            .ok_or_else(|| CliError::Usage("the input defines no sets".into()))?,
    };
    let report = aut_of(&solved, &name, mode, limits)?;
    Ok(Outcome {
        report,
        pictures: vec![solved.picture(&name)?],
        exit: 0,
    })
}

#[derive(Debug, Serialize)]
pub struct MapSummary {
    pub atom_map: Vec<usize>,
    pub target_atoms: usize,
    pub kind: String,
    pub injective: bool,
    pub surjective: bool,
    pub membership_preserved: bool,
    pub rank_preserved: bool,
    pub pure_sets_fixed: bool,
    pub pairs_checked: usize,
    pub fixed_points: Option<usize>,
    pub missed: usize,
}

#[derive(Debug, Serialize)]
pub struct WfReport {
    pub atoms: usize,
    pub levels: usize,
    pub level_sizes: Vec<usize>,
    pub elements: usize,
    /// Absent when the stage is too large to search.
    pub automorphisms: Option<String>,
    pub map: Option<MapSummary>,
}

impl fmt::Display for WfReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "atoms: {}", self.atoms)?;
        writeln!(f, "levels: {}", self.levels)?;
        let sizes: Vec<String> = self.level_sizes.iter().map(|s| s.to_string()).collect();
        writeln!(f, "level sizes: {}", sizes.join(" "))?;
        writeln!(f, "elements: {}", self.elements)?;
        match &self.automorphisms {
            Some(order) => writeln!(f, "automorphisms: {order}")?,
            None => writeln!(f, "automorphisms: not searched (stage above the search cap)")?,
        }
        if let Some(m) = &self.map {
            let images: Vec<String> = m
                .atom_map
                .iter()
                .enumerate()
                .map(|(a, b)| format!("{a}->{b}"))
                .collect();
            writeln!(f, "map {} into {} atoms: {}", images.join(" "), m.target_atoms, m.kind)?;
            writeln!(f, "  injective: {}", yes(m.injective))?;
            writeln!(f, "  surjective: {}", yes(m.surjective))?;
            writeln!(
                f,
                "  membership preserved: {} ({} pairs)",
                yes(m.membership_preserved),
                m.pairs_checked
            )?;
            writeln!(f, "  rank preserved: {}", yes(m.rank_preserved))?;
            writeln!(f, "  pure sets fixed: {}", yes(m.pure_sets_fixed))?;
            if let Some(fixed) = m.fixed_points {
                writeln!(f, "  fixed points: {fixed}")?;
            }
            writeln!(f, "  missed: {}", m.missed)?;
        }
        Ok(())
    }
}

pub struct WfArgs<'a> {
    pub atoms: usize,
    pub levels: usize,
    pub perm: Option<&'a str>,
    pub images: Option<&'a [usize]>,
    pub into: Option<usize>,
}

pub fn wf(args: &WfArgs<'_>, limits: &Limits) -> Result<Outcome<WfReport>, CliError> {
    let src = build_universe_with(args.atoms, args.levels, limits)?;
    let automorphisms = if src.len() < limits.iso_nodes {
        Some(all_automorphisms_with(&src, limits)?.order.to_string())
    } else {
        None
    };
    let sigma = match (args.perm, args.images) {
        (Some(_), Some(_)) => return Err(CliError::Usage("give --perm or --images, not both".into())),
        (Some(text), None) => Some(parse_cycles(text, args.atoms)?),
        (None, Some(images)) => Some(images.to_vec()),
        (None, None) => None,
    };
    if args.into.is_some() && sigma.is_none() {
        return Err(CliError::Usage("--into needs --perm or --images".into()));
    }
    let map = match sigma {
        None => None,
        Some(sigma) => {
            let target_atoms = args.into.unwrap_or(args.atoms);
            let same = target_atoms == args.atoms;
            let dst = if same {
                src.clone()
            } else {
                build_universe_with(target_atoms, args.levels, limits)?
            };
            let m = extend_map(&src, &dst, &sigma)?;
            let r = classify_map(&src, &dst, &m);
            Some(MapSummary {
                atom_map: sigma,
                target_atoms,
                kind: r.kind.to_string(),
                injective: r.injective,
                surjective: r.surjective,
                membership_preserved: r.membership_preserved,
                rank_preserved: r.rank_preserved,
                pure_sets_fixed: r.pure_sets_fixed,
                pairs_checked: r.pairs_checked,
                fixed_points: same.then_some(r.fixed_points),
                missed: r.missed,
            })
        }
    };
    Ok(Outcome {
        report: WfReport {
            atoms: args.atoms,
            levels: args.levels,
            level_sizes: src.level_sizes(),
            elements: src.len(),
            automorphisms,
            map,
        },
        pictures: vec![src.to_apg()],
        exit: 0,
    })
}

#[derive(Debug, Serialize)]
pub struct GroupReport {
    pub group: String,
    pub order: usize,
    pub abelian: bool,
    pub universe_sets: usize,
    pub picture_nodes: usize,
    pub automorphisms: usize,
    pub isomorphic: bool,
    pub numerals_fixed: bool,
    pub left_translations: bool,
    pub gadgets_follow: bool,
    pub homomorphism: bool,
}

impl fmt::Display for GroupReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "group: {} (order {}, {})",
            self.group,
            self.order,
            if self.abelian { "abelian" } else { "non-abelian" }
        )?;
        writeln!(f, "universe sets: {}", self.universe_sets)?;
        writeln!(f, "picture nodes: {}", self.picture_nodes)?;
        writeln!(f, "automorphisms: {}", self.automorphisms)?;
        writeln!(f, "isomorphic to group: {}", yes(self.isomorphic))?;
        writeln!(f, "numerals fixed: {}", yes(self.numerals_fixed))?;
        writeln!(f, "atoms move by left translation: {}", yes(self.left_translations))?;
        writeln!(f, "gadgets follow atoms: {}", yes(self.gadgets_follow))?;
        writeln!(f, "homomorphism: {}", yes(self.homomorphism))
    }
}

pub fn group(arg: &str, limits: &Limits) -> Result<Outcome<GroupReport>, CliError> {
    let (name, table) = match GroupTable::preset(&arg.to_ascii_lowercase()) {
        Some(t) => (arg.to_ascii_lowercase(), t),
        None if std::path::Path::new(arg).exists() || arg == "-" => {
            let text = session::read_source(arg)?;
            let table = GroupTable::from_json_str(&text).map_err(|e| match e {
                hyperset::Error::Json(m) => CliError::Parse(m),
                other => other.into(),
            })?;
            (arg.to_string(), table)
        }
        None => {
            return Err(CliError::Usage(format!(
                "`{arg}` is neither a preset ({}) nor a file",
                GroupTable::PRESETS.join(", ")
            )))
        }
    };
    let art = build_a_g_with(&table, limits)?;
    let report = aut_group_of_with(&art, limits)?;
    let picture = art.universe.picture_of(art.root)?;
    Ok(Outcome {
        report: GroupReport {
            group: name,
            order: table.order(),
            abelian: table.is_abelian(),
            universe_sets: art.universe.len(),
            picture_nodes: picture.node_count(),
            automorphisms: report.order(),
            isomorphic: groups_isomorphic(&report.table, &table)?,
            numerals_fixed: report.numerals_fixed,
            left_translations: report.left_translations,
            gadgets_follow: report.gadgets_follow,
            homomorphism: report.homomorphism,
        },
        pictures: vec![picture],
        exit: 0,
    })
}

#[derive(Debug, Serialize)]
pub struct Witness {
    pub pair: usize,
    pub first_equal: bool,
    pub second_equal: bool,
    pub program: String,
}

#[derive(Debug, Serialize)]
pub struct SearchReport {
    pub modes: [String; 2],
    pub max_nodes: usize,
    pub seed: u64,
    pub budget: usize,
    pub tried: usize,
    pub witness: Option<Witness>,
}

impl fmt::Display for SearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = &self.modes;
        match &self.witness {
            Some(w) => {
                let says = |e: bool| if e { "equal" } else { "unequal" };
                writeln!(
                    f,
                    "witness at pair {}: {a} says {}, {b} says {}",
                    w.pair,
                    says(w.first_equal),
                    says(w.second_equal)
                )?;
                write!(f, "{}", w.program)
            }
            None => writeln!(
                f,
                "no witness separating {a} and {b} in {} pairs of at most {} nodes",
                self.tried, self.max_nodes
            ),
        }
    }
}

pub const EXIT_NO_WITNESS: u8 = 11;

/// Random pairs of growing size until the two modes disagree on equality.
pub fn search_separation(
    first: Mode,
    second: Mode,
    max_nodes: usize,
    seed: u64,
    budget: usize,
    limits: &Limits,
) -> Result<Outcome<SearchReport>, CliError> {
    if first == second {
        return Err(CliError::Usage(format!("modes must differ, got {first} twice")));
    }
    let (Some(s1), Some(s2)) = (first.semantics(), second.semantics()) else {
        return Err(CliError::Usage("boffa has no graph equality to compare".into()));
    };
    let mut r = rng(seed);
    let max_nodes = max_nodes.max(1);
    let mut witness = None;
    let mut pictures = Vec::new();
    let mut tried = 0;
    for i in 0..budget {
        tried = i + 1;
        let n = 1 + i % max_nodes;
        let p = r.gen_range(0.1..0.6);
        let g1 = random_apg(&mut r, n, p);
        let g2 = random_apg(&mut r, n, p);
        let e1 = hyperset::canon::equal_with(&g1, &g2, s1, limits)?;
        let e2 = hyperset::canon::equal_with(&g1, &g2, s2, limits)?;
        if e1 != e2 {
            let program = format!(
                "# {first}: {}, {second}: {}\n{}{}",
                if e1 { "l0 = r0" } else { "l0 != r0" },
                if e2 { "l0 = r0" } else { "l0 != r0" },
                unparse_with_prefix(&g1, "l"),
                unparse_with_prefix(&g2, "r")
            );
            witness = Some(Witness {
                pair: i,
                first_equal: e1,
                second_equal: e2,
                program,
            });
            pictures = vec![g1, g2];
            break;
        }
    }
    let exit = if witness.is_some() { 0 } else { EXIT_NO_WITNESS };
    Ok(Outcome {
        report: SearchReport {
            modes: [first.to_string(), second.to_string()],
            max_nodes,
            seed,
            budget,
            tried,
            witness,
        },
        pictures,
        exit,
    })
}
