//! Rooted binary plane trees and the duality with triangulations.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::triangulation::{Diagonal, Triangulation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct Node {
    pub left: Option<usize>,
    pub right: Option<usize>,
}

/// Binary plane tree; node ids are in preorder when built by this crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CatalanTree {
    pub nodes: Vec<Node>,
    pub root: Option<usize>,
}

impl CatalanTree {
    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    /// Checks reachability from the root and that every non-root node has one parent.
    pub fn validate(&self) -> Result<(), CoreError> {
        let n = self.nodes.len();
        let bad = |m: &str| Err(CoreError::InvalidTriangulation(format!("tree: {m}")));
        let Some(r) = self.root else {
            return if n == 0 { Ok(()) } else { bad("missing root") };
        };
        let mut parents = vec![0usize; n];
        for node in &self.nodes {
            for c in [node.left, node.right].into_iter().flatten() {
                if c >= n {
                    return bad("child out of range");
                }
                parents[c] += 1;
            }
        }
        if r >= n || parents[r] != 0 {
            return bad("root has a parent");
        }
        if parents.iter().enumerate().any(|(i, &p)| i != r && p != 1) {
            return bad("node without exactly one parent");
        }
        let mut seen = 0;
        let mut stack = vec![r];
        while let Some(v) = stack.pop() {
            seen += 1;
            stack.extend([self.nodes[v].left, self.nodes[v].right].into_iter().flatten());
            if seen > n {
                return bad("cycle");
            }
        }
        if seen != n {
            return bad("unreachable nodes");
        }
        Ok(())
    }

    /// Balanced-parenthesis form: a node is `"(" left ")" right`.
    pub fn to_parens(&self) -> String {
        let mut s = String::with_capacity(2 * self.n());
        // Stack items: Some(node) to open, None to close.
        let mut stack: Vec<Option<Option<usize>>> = vec![Some(self.root)];
        while let Some(item) = stack.pop() {
            match item {
                Some(Some(v)) => {
                    s.push('(');
                    stack.push(Some(self.nodes[v].right));
                    stack.push(None);
                    stack.push(Some(self.nodes[v].left));
                }
                Some(None) => {}
                None => s.push(')'),
            }
        }
        s
    }

    /// Inverse of [`CatalanTree::to_parens`]; node ids come out in preorder.
    pub fn from_parens(s: &str) -> Result<Self, CoreError> {
        let b = s.as_bytes();
        let mut mate = vec![usize::MAX; b.len()];
        let mut open = Vec::new();
        for (i, &c) in b.iter().enumerate() {
            match c {
                b'(' => open.push(i),
                b')' => {
                    let j = open.pop().ok_or_else(|| CoreError::Parse("unbalanced ')'".into()))?;
                    mate[j] = i;
                }
                _ => return Err(CoreError::Parse(format!("unexpected byte {c}"))),
            }
        }
        if !open.is_empty() {
            return Err(CoreError::Parse("unbalanced '('".into()));
        }
        let mut nodes: Vec<Node> = Vec::with_capacity(b.len() / 2);
        let mut root = None;
        // (start, end, parent, is_left)
        let mut work: Vec<(usize, usize, Option<usize>, bool)> = vec![(0, b.len(), None, false)];
        while let Some((lo, hi, parent, is_left)) = work.pop() {
            if lo == hi {
                continue;
            }
            let id = nodes.len();
            nodes.push(Node::default());
            match parent {
                None => root = Some(id),
                Some(p) if is_left => nodes[p].left = Some(id),
                Some(p) => nodes[p].right = Some(id),
            }
            let m = mate[lo];
            work.push((m + 1, hi, Some(id), false));
            work.push((lo + 1, m, Some(id), true));
        }
        Ok(CatalanTree { nodes, root })
    }

    /// Node depths with the root at depth 0.
    pub fn depths(&self) -> Vec<usize> {
        let mut d = vec![0; self.n()];
        let mut q = VecDeque::new();
        q.extend(self.root);
        while let Some(v) = q.pop_front() {
            for c in [self.nodes[v].left, self.nodes[v].right].into_iter().flatten() {
                d[c] = d[v] + 1;
                q.push_back(c);
            }
        }
        d
    }

    fn subtree_sizes(&self) -> Vec<usize> {
        let n = self.n();
        let mut order = Vec::with_capacity(n);
        let mut stack: Vec<usize> = self.root.into_iter().collect();
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend([self.nodes[v].left, self.nodes[v].right].into_iter().flatten());
        }
        let mut size = vec![1; n];
        for &v in order.iter().rev() {
            for c in [self.nodes[v].left, self.nodes[v].right].into_iter().flatten() {
                size[v] += size[c];
            }
        }
        size
    }

    /// All trees one rotation away, in parenthesis form.
    pub fn rotation_neighbors(&self) -> Vec<String> {
        let mut out = Vec::new();
        for v in 0..self.n() {
            // right rotation at v: left child l becomes the parent
            if let Some(l) = self.nodes[v].left {
                let mut t = self.clone();
                t.nodes[v].left = self.nodes[l].right;
                t.nodes[l].right = Some(v);
                t.replace_child(v, l);
                out.push(t.to_parens());
            }
            if let Some(r) = self.nodes[v].right {
                let mut t = self.clone();
                t.nodes[v].right = self.nodes[r].left;
                t.nodes[r].left = Some(v);
                t.replace_child(v, r);
                out.push(t.to_parens());
            }
        }
        out
    }

    fn replace_child(&mut self, old: usize, new: usize) {
        if self.root == Some(old) {
            self.root = Some(new);
            return;
        }
        for node in self.nodes.iter_mut() {
            if node.left == Some(old) {
                node.left = Some(new);
                return;
            }
            if node.right == Some(old) {
                node.right = Some(new);
                return;
            }
        }
    }

    /// True when `other` is exactly one rotation away.
    pub fn differs_by_one_rotation(&self, other: &CatalanTree) -> bool {
        let target = other.to_parens();
        self.rotation_neighbors().contains(&target)
    }

    /// Dual tree: the root is the triangle on the special edge `(0, n+1)`;
    /// the left child sits on side `(a,k)` and the right child on `(k,b)`.
    pub fn from_triangulation(x: &Triangulation) -> CatalanTree {
        let tris = x.triangles();
        let mut nodes = vec![Node::default(); tris.len()];
        // triangles() is preorder, so children follow their parent.
        let mut slot = std::collections::HashMap::new();
        for (id, t) in tris.iter().enumerate() {
            slot.insert((t.a, t.b), id);
        }
        for (id, t) in tris.iter().enumerate() {
            nodes[id].left = slot.get(&(t.a, t.k)).copied();
            nodes[id].right = slot.get(&(t.k, t.b)).copied();
        }
        CatalanTree { root: if tris.is_empty() { None } else { Some(0) }, nodes }
    }

    /// Inverse of [`CatalanTree::from_triangulation`].
    pub fn to_triangulation(&self) -> Result<Triangulation, CoreError> {
        self.validate()?;
        let n = self.n();
        let size = self.subtree_sizes();
        let mut diags = Vec::new();
        let mut stack: Vec<(usize, usize, usize)> = self.root.map(|r| (r, 0, n + 1)).into_iter().collect();
        while let Some((v, a, b)) = stack.pop() {
            let ls = self.nodes[v].left.map_or(0, |l| size[l]);
            let k = a + ls + 1;
            for (u, w) in [(a, k), (k, b)] {
                if w - u >= 2 {
                    diags.push((u, w));
                }
            }
            if let Some(l) = self.nodes[v].left {
                stack.push((l, a, k));
            }
            if let Some(r) = self.nodes[v].right {
                stack.push((r, k, b));
            }
        }
        Triangulation::new(n, diags)
    }
}

impl Triangulation {
    pub fn to_dual_tree(&self) -> CatalanTree {
        CatalanTree::from_triangulation(self)
    }
}

/// Convenience for the dual edge of diagonal `d`: the depth of the child
/// triangle (the one inside `d`) in the dual tree, root at 0.
pub fn child_depth_of_diagonal(x: &Triangulation, d: &Diagonal) -> Option<usize> {
    let tris = x.triangles();
    let tree = x.to_dual_tree();
    let depths = tree.depths();
    tris.iter().position(|t| t.a == d.a && t.b == d.b).map(|i| depths[i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::enumerate_triangulations;

    #[test]
    fn n2_trees_are_one_child_chains() {
        let all = enumerate_triangulations(2).unwrap();
        let p: Vec<String> = all.iter().map(|x| x.to_dual_tree().to_parens()).collect();
        // {(0,2)}: root (0,2,3) has its left child on (0,2).
        assert_eq!(p, vec!["(())", "()()"]);
    }

    #[test]
    fn round_trips() {
        for n in 1..=7 {
            for x in enumerate_triangulations(n).unwrap() {
                let t = x.to_dual_tree();
                t.validate().unwrap();
                assert_eq!(t.n(), n);
                assert_eq!(t.to_triangulation().unwrap(), x);
                let back = CatalanTree::from_parens(&t.to_parens()).unwrap();
                assert_eq!(back, t);
            }
        }
    }

    #[test]
    fn depths_root_zero() {
        let t = CatalanTree::from_parens("((()))").unwrap();
        assert_eq!(t.depths(), vec![0, 1, 2]);
        let t = CatalanTree::from_parens("()()()").unwrap();
        assert_eq!(t.depths(), vec![0, 1, 2]);
        let t = CatalanTree::from_parens("(())()").unwrap();
        assert_eq!(t.depths(), vec![0, 1, 1]);
    }

    #[test]
    fn bad_parens() {
        assert!(CatalanTree::from_parens("(()").is_err());
        assert!(CatalanTree::from_parens(")(").is_err());
        assert!(CatalanTree::from_parens("(x)").is_err());
    }

    #[test]
    fn rotation_neighbors_of_three_node_path() {
        let t = CatalanTree::from_parens("((()))").unwrap();
        let mut r = t.rotation_neighbors();
        r.sort();
        assert_eq!(r, vec!["(()())".to_string(), "(())()".to_string()]);
    }

    #[test]
    fn invalid_tree_detected() {
        let t = CatalanTree { nodes: vec![Node { left: Some(1), right: None }, Node { left: Some(0), right: None }], root: Some(0) };
        assert!(t.validate().is_err());
    }
}
