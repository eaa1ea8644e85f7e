use std::collections::BTreeMap;

use super::parse::{Program, Statement, Term};
use crate::apg::{trim_to_accessible, Apg, NodeId, RawGraph};
use crate::boffa::{Extension, SetId, Universe};
use crate::{Error, Result};

/// Largest numeral literal accepted; numeral `k` flattens to `k(k-1)/2` edges.
pub const MAX_NUMERAL: usize = 1024;

/// A program flattened into one graph: every name points at its node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct System {
    pub children: Vec<Vec<NodeId>>,
    /// Defined and declared names, in program order.
    pub names: Vec<(String, NodeId)>,
    /// Nodes of declared atoms.
    pub atoms: BTreeMap<String, NodeId>,
}

impl System {
    pub fn node(&self, name: &str) -> Option<NodeId> {
        self.names.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    /// The set named `name` as a stand-alone graph.
    pub fn apg(&self, name: &str) -> Result<Apg> {
        let v = self.node(name).ok_or_else(|| Error::UndefinedName(name.to_string()))?;
        self.apg_at(v)
    }

    pub fn apg_at(&self, v: NodeId) -> Result<Apg> {
        Ok(trim_to_accessible(&RawGraph::new(self.children.clone(), v)?).0)
    }
}

struct Builder<'a> {
    defs: BTreeMap<&'a str, &'a Statement>,
    children: Vec<Vec<NodeId>>,
    resolved: BTreeMap<&'a str, NodeId>,
    numerals: Vec<NodeId>,
    atoms: BTreeMap<String, NodeId>,
}

impl<'a> Builder<'a> {
    fn node(&mut self) -> NodeId {
        self.children.push(Vec::new());
        self.children.len() - 1
    }

    fn edge(&mut self, from: NodeId, to: NodeId) {
        if !self.children[from].contains(&to) {
            self.children[from].push(to);
        }
    }

    fn numeral(&mut self, k: usize) -> Result<NodeId> {
        if k > MAX_NUMERAL {
            return Err(Error::SizeLimitExceeded {
                what: "numeral literal",
                actual: k,
                limit: MAX_NUMERAL,
            });
        }
        while self.numerals.len() <= k {
            let v = self.node();
            for i in 0..self.numerals.len() {
                let c = self.numerals[i];
                self.edge(v, c);
            }
            self.numerals.push(v);
        }
        Ok(self.numerals[k])
    }

    fn name(&mut self, name: &'a str) -> Result<NodeId> {
        if let Some(&v) = self.resolved.get(name) {
            return Ok(v);
        }
        // follow the alias chain to the statement that actually builds a set
        let mut chain = vec![name];
        let mut current = name;
        let stmt = loop {
            let stmt = *self
                .defs
                .get(current)
                .ok_or_else(|| Error::UndefinedName(current.to_string()))?;
            match stmt {
                Statement::Define {
                    term: Term::Name(next, _),
                    ..
                } => {
                    if let Some(&v) = self.resolved.get(next.as_str()) {
                        self.finish(&chain, v);
                        return Ok(v);
                    }
                    if chain.contains(&next.as_str()) {
                        return Err(Error::UnguardedAlias(name.to_string()));
                    }
                    chain.push(next);
                    current = next;
                }
                _ => break stmt,
            }
        };
        let v = match stmt {
            Statement::Atom { .. } => {
                let v = self.node();
                self.edge(v, v);
                self.atoms.insert(current.to_string(), v);
                self.finish(&chain, v);
                v
            }
            Statement::Define { term: Term::Nat(k), .. } => {
                let v = self.numeral(*k)?;
                self.finish(&chain, v);
                v
            }
            Statement::Define { term, .. } => {
                // the node exists before its members so self references resolve
                let v = self.node();
                self.finish(&chain, v);
                self.fill(v, term)?;
                v
            }
        };
        Ok(v)
    }

    fn finish(&mut self, chain: &[&'a str], v: NodeId) {
        for &n in chain {
            self.resolved.insert(n, v);
        }
    }

    fn term(&mut self, term: &'a Term) -> Result<NodeId> {
        match term {
            Term::Name(n, _) => self.name(n),
            Term::Nat(k) => self.numeral(*k),
            _ => {
                let v = self.node();
                self.fill(v, term)?;
                Ok(v)
            }
        }
    }

    /// Builds the members of a set or tuple term under the existing node `v`.
    fn fill(&mut self, v: NodeId, term: &'a Term) -> Result<()> {
        match term {
            Term::Set(items) => {
                for item in items {
                    let c = self.term(item)?;
                    self.edge(v, c);
                }
            }
            Term::Tuple(items) => self.fill_tuple(v, items)?,
            Term::Name(..) | Term::Nat(_) => unreachable!("handled by term"),
        }
        Ok(())
    }

    fn fill_tuple(&mut self, v: NodeId, items: &'a [Term]) -> Result<()> {
        let head = self.term(&items[0])?;
        let tail = match &items[1..] {
            [last] => self.term(last)?,
            rest => {
                let t = self.node();
                self.fill_tuple(t, rest)?;
                t
            }
        };
        self.pair_into(v, head, tail);
        Ok(())
    }

    /// Makes `v` the Kuratowski pair `{{a}, {a, b}}`.
    fn pair_into(&mut self, v: NodeId, a: NodeId, b: NodeId) {
        let single = self.node();
        self.edge(single, a);
        let double = self.node();
        self.edge(double, a);
        self.edge(double, b);
        self.edge(v, single);
        self.edge(v, double);
    }
}

fn build(program: &Program) -> Result<System> {
    let mut b = Builder {
        defs: program.statements.iter().map(|s| (s.name(), s)).collect(),
        children: Vec::new(),
        resolved: BTreeMap::new(),
        numerals: Vec::new(),
        atoms: BTreeMap::new(),
    };
    let mut names = Vec::new();
    for s in &program.statements {
        names.push((s.name().to_string(), b.name(s.name())?));
    }
    Ok(System {
        children: b.children,
        names,
        atoms: b.atoms,
    })
}

/// Flattens a program outside Boffa mode into one shared graph.
pub fn flatten_system(program: &Program) -> Result<System> {
    if let Some(Statement::Atom { name, .. }) = program.statements.iter().find(|s| matches!(s, Statement::Atom { .. }))
    {
        return Err(Error::AtomOutsideBoffa(name.clone()));
    }
    build(program)
}

/// One graph per name, in program order.
pub fn flatten(program: &Program) -> Result<Vec<(String, Apg)>> {
    let sys = flatten_system(program)?;
    sys.names
        .iter()
        .map(|(name, v)| Ok((name.clone(), sys.apg_at(*v)?)))
        .collect()
}

/// Flattens into a Boffa universe: every `atom` mints a fresh labeled Quine
/// atom, everything else is inserted on top. The universe is left unchanged
/// on error.
pub fn flatten_boffa(program: &Program, universe: &mut Universe) -> Result<Vec<(String, SetId)>> {
    let sys = build(program)?;
    let mut u = universe.clone();
    let mut ext = Extension::new();
    for _ in &sys.children {
        ext.new_node();
    }
    let atom_nodes: BTreeMap<NodeId, &String> = sys.atoms.iter().map(|(n, &v)| (v, n)).collect();
    for (v, kids) in sys.children.iter().enumerate() {
        match atom_nodes.get(&v) {
            Some(name) => {
                let id = u.add_labeled_atom(name.as_str());
                ext.old[v] = Some(id);
                ext.children[v] = vec![v];
            }
            None => ext.children[v] = kids.clone(),
        }
    }
    let ids = u.insert(&ext)?;
    *universe = u;
    Ok(sys.names.iter().map(|(n, v)| (n.clone(), ids[*v])).collect())
}
