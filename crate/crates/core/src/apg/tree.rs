use std::collections::VecDeque;

use super::{Apg, NodeId};

/// A finite rooted tree whose vertices are paths of child positions.
///
/// Vertices are stored in breadth-first order; vertex 0 is the empty path.
/// `arity` records how many children the underlying graph node has, which
/// exceeds the stored child count for vertices at the truncation depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTree {
    paths: Vec<Vec<usize>>,
    arity: Vec<usize>,
    children: Vec<Vec<usize>>,
    origin: Vec<NodeId>,
}

impl FiniteTree {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn path(&self, vertex: usize) -> &[usize] {
        &self.paths[vertex]
    }

    pub fn arity(&self, vertex: usize) -> usize {
        self.arity[vertex]
    }

    pub fn children(&self, vertex: usize) -> &[usize] {
        &self.children[vertex]
    }

    /// The graph node the vertex's path ends at.
    pub fn origin(&self, vertex: usize) -> NodeId {
        self.origin[vertex]
    }

    pub fn depth(&self) -> usize {
        self.paths.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn paths(&self) -> impl Iterator<Item = &[usize]> {
        self.paths.iter().map(Vec::as_slice)
    }

    pub fn contains_path(&self, path: &[usize]) -> bool {
        self.find(path).is_some()
    }

    pub fn find(&self, path: &[usize]) -> Option<usize> {
        let mut v = 0;
        for &step in path {
            v = *self.children[v].get(step)?;
        }
        Some(v)
    }

    /// The subtree of vertices at depth at most `depth`.
    pub fn truncate(&self, depth: usize) -> FiniteTree {
        let keep: Vec<usize> = (0..self.len()).filter(|&v| self.paths[v].len() <= depth).collect();
        let mut index = vec![usize::MAX; self.len()];
        for (new, &old) in keep.iter().enumerate() {
            index[old] = new;
        }
        FiniteTree {
            paths: keep.iter().map(|&v| self.paths[v].clone()).collect(),
            arity: keep.iter().map(|&v| self.arity[v]).collect(),
            children: keep
                .iter()
                .map(|&v| {
                    if self.paths[v].len() < depth {
                        self.children[v].iter().map(|&c| index[c]).collect()
                    } else {
                        Vec::new()
                    }
                })
                .collect(),
            origin: keep.iter().map(|&v| self.origin[v]).collect(),
        }
    }
}

/// Unfolds `g` from its root into the tree of all child paths of length at
/// most `depth`.
pub fn unfold(g: &Apg, depth: usize) -> FiniteTree {
    let mut tree = FiniteTree {
        paths: vec![Vec::new()],
        arity: vec![g.children(g.root()).len()],
        children: vec![Vec::new()],
        origin: vec![g.root()],
    };
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        if tree.paths[v].len() == depth {
            continue;
        }
        let node = tree.origin[v];
        for (i, &c) in g.children(node).iter().enumerate() {
            let mut path = tree.paths[v].clone();
            path.push(i);
            let id = tree.paths.len();
            tree.paths.push(path);
            tree.arity.push(g.children(c).len());
            tree.children.push(Vec::new());
            tree.origin.push(c);
            tree.children[v].push(id);
            queue.push_back(id);
        }
    }
    tree
}
