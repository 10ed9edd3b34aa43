//! Triangulations of the convex `(n+2)`-gon with vertices `0..=n+1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::DEFAULT_ENUMERATION_CAP;

/// A chord `(a, b)` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Diagonal {
    pub a: usize,
    pub b: usize,
}

impl Diagonal {
    pub fn new(u: usize, v: usize) -> Self {
        Diagonal { a: u.min(v), b: u.max(v) }
    }

    /// Number of polygon edges on the shorter side.
    pub fn length(&self, n: usize) -> usize {
        let d = self.b - self.a;
        d.min(n + 2 - d)
    }
}

impl fmt::Display for Diagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

/// Triangle with sorted vertices `a < k < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triangle {
    pub a: usize,
    pub k: usize,
    pub b: usize,
}

impl Triangle {
    pub fn new(u: usize, v: usize, w: usize) -> Self {
        let mut t = [u, v, w];
        t.sort_unstable();
        Triangle { a: t[0], k: t[1], b: t[2] }
    }

    pub fn vertices(&self) -> [usize; 3] {
        [self.a, self.k, self.b]
    }

    pub fn has_vertex(&self, v: usize) -> bool {
        self.a == v || self.k == v || self.b == v
    }

    /// The three sides as sorted pairs: `(a,k)`, `(k,b)`, `(a,b)`.
    pub fn sides(&self) -> [(usize, usize); 3] {
        [(self.a, self.k), (self.k, self.b), (self.a, self.b)]
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.k, self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triangulation {
    pub n: usize,
    /// Sorted, lexicographic.
    pub diagonals: Vec<Diagonal>,
}

fn crosses(p: &Diagonal, q: &Diagonal) -> bool {
    (p.a < q.a && q.a < p.b && p.b < q.b) || (q.a < p.a && p.a < q.b && q.b < p.b)
}

impl Triangulation {
    /// Builds and validates.
    pub fn new(n: usize, diagonals: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, CoreError> {
        let mut d: Vec<Diagonal> = diagonals.into_iter().map(|(u, v)| Diagonal::new(u, v)).collect();
        d.sort_unstable();
        let t = Triangulation { n, diagonals: d };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        let n = self.n;
        let bad = |m: String| Err(CoreError::InvalidTriangulation(m));
        if self.diagonals.len() != n.saturating_sub(1) {
            return bad(format!("expected {} diagonals, found {}", n.saturating_sub(1), self.diagonals.len()));
        }
        for w in self.diagonals.windows(2) {
            if w[0] >= w[1] {
                return bad("diagonals not strictly sorted".into());
            }
        }
        for d in &self.diagonals {
            if d.b > n + 1 || d.b - d.a < 2 || (d.a == 0 && d.b == n + 1) {
                return bad(format!("({},{}) is not a diagonal", d.a, d.b));
            }
        }
        for (i, p) in self.diagonals.iter().enumerate() {
            for q in &self.diagonals[i + 1..] {
                if crosses(p, q) {
                    return bad(format!("{p} crosses {q}"));
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, d: &Diagonal) -> bool {
        self.diagonals.binary_search(d).is_ok()
    }

    /// Sides, the special edge and diagonals all count as edges.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let d = Diagonal::new(u, v);
        d.b - d.a == 1 || (d.a == 0 && d.b == self.n + 1) || self.contains(&d)
    }

    fn edge_matrix(&self) -> Vec<bool> {
        let m = self.n + 2;
        let mut e = vec![false; m * m];
        let mut set = |u: usize, v: usize| {
            e[u * m + v] = true;
            e[v * m + u] = true;
        };
        for u in 0..m - 1 {
            set(u, u + 1);
        }
        set(0, m - 1);
        for d in &self.diagonals {
            set(d.a, d.b);
        }
        e
    }

    /// Apex of the triangle lying inside the chord `(u, v)`, i.e. with apex in `u+1..v`.
    pub fn inner_apex(&self, u: usize, v: usize) -> Option<usize> {
        (u + 1..v).find(|&k| self.has_edge(u, k) && self.has_edge(k, v))
    }

    /// Triangles in preorder of the dual tree: root `(0,k,n+1)`, then the
    /// subtree on `(a,k)`, then the subtree on `(k,b)`.
    pub fn triangles(&self) -> Vec<Triangle> {
        let m = self.n + 2;
        let e = self.edge_matrix();
        let mut out = Vec::with_capacity(self.n);
        let mut stack = vec![(0usize, m - 1)];
        while let Some((u, v)) = stack.pop() {
            if v - u < 2 {
                continue;
            }
            let k = (u + 1..v)
                .find(|&k| e[u * m + k] && e[k * m + v])
                .expect("valid triangulation has an apex for every chord");
            out.push(Triangle { a: u, k, b: v });
            stack.push((k, v));
            stack.push((u, k));
        }
        out
    }

    pub fn contains_triangle(&self, t: &Triangle) -> bool {
        t.sides().iter().all(|&(u, v)| self.has_edge(u, v))
    }

    /// Apex `k` of the root triangle `(0, k, n+1)`.
    pub fn root_apex(&self) -> usize {
        self.inner_apex(0, self.n + 1).expect("n >= 1")
    }

    /// Replaces `d` with the other diagonal of the quadrilateral formed by its two triangles.
    pub fn flip(&self, d: &Diagonal) -> Result<(Triangulation, Diagonal), CoreError> {
        if !self.contains(d) {
            return Err(CoreError::DiagonalNotPresent(d.a, d.b));
        }
        let inner = self.inner_apex(d.a, d.b).expect("diagonal bounds a triangle inside");
        let outer = (0..=self.n + 1)
            .filter(|&v| v < d.a || v > d.b)
            .find(|&v| self.has_edge(v, d.a) && self.has_edge(v, d.b))
            .expect("diagonal bounds a triangle outside");
        let nd = Diagonal::new(inner, outer);
        let mut diagonals: Vec<Diagonal> = self.diagonals.iter().copied().filter(|x| x != d).collect();
        diagonals.push(nd);
        diagonals.sort_unstable();
        Ok((Triangulation { n: self.n, diagonals }, nd))
    }

    /// All flip neighbors, in the order of the flipped diagonal.
    pub fn flips(&self) -> Vec<(Diagonal, Triangulation)> {
        self.diagonals
            .iter()
            .map(|d| {
                let (y, _) = self.flip(d).expect("own diagonal");
                (*d, y)
            })
            .collect()
    }

    /// Image under the dihedral map `v -> (v + rot) mod (n+2)`, preceded by
    /// `v -> n+1-v` when `reflect`.
    pub fn dihedral_image(&self, rot: usize, reflect: bool) -> Triangulation {
        let m = self.n + 2;
        let map = |v: usize| {
            let v = if reflect { m - 1 - v } else { v };
            (v + rot) % m
        };
        // The old special edge may become a diagonal and one diagonal may become the new special edge.
        let mut diagonals: Vec<Diagonal> = self
            .diagonals
            .iter()
            .chain(std::iter::once(&Diagonal::new(0, m - 1)))
            .map(|d| Diagonal::new(map(d.a), map(d.b)))
            .collect();
        diagonals.retain(|d| d.b - d.a >= 2 && !(d.a == 0 && d.b == m - 1));
        diagonals.sort_unstable();
        Triangulation { n: self.n, diagonals }
    }

    /// Canonical text form `n=K;diag=a-b,a-b,...`.
    pub fn encode(&self) -> String {
        let parts: Vec<String> = self.diagonals.iter().map(|d| d.to_string()).collect();
        format!("n={};diag={}", self.n, parts.join(","))
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl FromStr for Triangulation {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let perr = |m: &str| CoreError::Parse(format!("{m}: {s:?}"));
        let (np, dp) = s.split_once(';').ok_or_else(|| perr("missing ';'"))?;
        let n: usize = np
            .strip_prefix("n=")
            .ok_or_else(|| perr("missing n="))?
            .parse()
            .map_err(|_| perr("bad n"))?;
        let body = dp.strip_prefix("diag=").ok_or_else(|| perr("missing diag="))?;
        let mut ds = Vec::new();
        for tok in body.split(',').filter(|t| !t.is_empty()) {
            let (a, b) = tok.split_once('-').ok_or_else(|| perr("bad diagonal"))?;
            let a: usize = a.parse().map_err(|_| perr("bad endpoint"))?;
            let b: usize = b.parse().map_err(|_| perr("bad endpoint"))?;
            ds.push((a, b));
        }
        Triangulation::new(n, ds)
    }
}

fn triangle_sets(u: usize, v: usize, memo: &mut Vec<Option<Vec<Vec<Diagonal>>>>, m: usize) -> Vec<Vec<Diagonal>> {
    // Results depend only on (u, v); memoized by u*m+v.
    if let Some(r) = &memo[u * m + v] {
        return r.clone();
    }
    let mut out = Vec::new();
    if v - u < 2 {
        out.push(Vec::new());
    } else {
        for k in u + 1..v {
            let left = triangle_sets(u, k, memo, m);
            let right = triangle_sets(k, v, memo, m);
            for l in &left {
                for r in &right {
                    let mut d = Vec::with_capacity(l.len() + r.len() + 2);
                    d.extend_from_slice(l);
                    d.extend_from_slice(r);
                    if k - u >= 2 {
                        d.push(Diagonal::new(u, k));
                    }
                    if v - k >= 2 {
                        d.push(Diagonal::new(k, v));
                    }
                    out.push(d);
                }
            }
        }
    }
    memo[u * m + v] = Some(out.clone());
    out
}

/// All triangulations with `1 <= n <= cap`, sorted lexicographically by diagonal set.
pub fn enumerate_triangulations_capped(n: usize, cap: usize) -> Result<Vec<Triangulation>, CoreError> {
    if n < 1 {
        return Err(CoreError::TooSmall { n, min: 1 });
    }
    if n > cap {
        return Err(CoreError::CapExceeded { n, cap });
    }
    let m = n + 2;
    // Only the sub-polygons hanging off the root triangle are memoized;
    // the root level is expanded directly to avoid one huge clone.
    let mut memo = vec![None; m * m];
    let mut out = Vec::new();
    for k in 1..=n {
        let left = triangle_sets(0, k, &mut memo, m);
        let right = triangle_sets(k, n + 1, &mut memo, m);
        for l in &left {
            for r in &right {
                let mut d = Vec::with_capacity(n - 1);
                d.extend_from_slice(l);
                d.extend_from_slice(r);
                if k >= 2 {
                    d.push(Diagonal::new(0, k));
                }
                if n + 1 - k >= 2 {
                    d.push(Diagonal::new(k, n + 1));
                }
                d.sort_unstable();
                out.push(Triangulation { n, diagonals: d });
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// [`enumerate_triangulations_capped`] with the default cap.
pub fn enumerate_triangulations(n: usize) -> Result<Vec<Triangulation>, CoreError> {
    enumerate_triangulations_capped(n, DEFAULT_ENUMERATION_CAP)
}
