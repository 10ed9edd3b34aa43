//! Product structure of central blocks and boundary sets between them.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::chain::{build_flip_chain_capped, FlipChain, MarkovChainModel};
use crate::error::CoreError;
use crate::partition::{restriction_chain, BlockKey, Partition};
use crate::product::{product_chain, product_index};
use crate::triangulation::{Diagonal, Triangle, Triangulation};
use crate::Rational;

/// A sub-polygon cut off by one side of a central triangle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubPolygon {
    /// Side of the central triangle; becomes the special edge of the sub-polygon.
    pub side: (usize, usize),
    /// Global vertex labels in local order `0..=m+1`.
    pub vertices: Vec<usize>,
    /// Polygon parameter: the sub-polygon has `m + 2` vertices.
    pub m: usize,
}

impl SubPolygon {
    fn local(&self, v: usize) -> Option<usize> {
        self.vertices.iter().position(|&u| u == v)
    }

    /// Diagonals of `x` inside this sub-polygon, relabeled.
    pub fn restrict(&self, x: &Triangulation) -> Triangulation {
        let mut ds: Vec<Diagonal> = x
            .diagonals
            .iter()
            .filter_map(|d| {
                let (a, b) = (self.local(d.a)?, self.local(d.b)?);
                let d = Diagonal::new(a, b);
                (d.b - d.a >= 2 && !(d.a == 0 && d.b == self.m + 1)).then_some(d)
            })
            .collect();
        ds.sort_unstable();
        Triangulation { n: self.m, diagonals: ds }
    }
}

/// The three sub-polygons on the sides `(a,k)`, `(k,b)` and the wrap-around side `(b,a)`.
pub fn sub_polygons(n: usize, t: &Triangle) -> [SubPolygon; 3] {
    let mk = |side: (usize, usize), vertices: Vec<usize>| SubPolygon { side, m: vertices.len() - 2, vertices };
    let outer: Vec<usize> = (t.b..=n + 1).chain(0..=t.a).collect();
    [mk((t.a, t.k), (t.a..=t.k).collect()), mk((t.k, t.b), (t.k..=t.b).collect()), mk((t.b, t.a), outer)]
}

fn factor_chain(m: usize) -> (Vec<Triangulation>, MarkovChainModel) {
    if m == 0 {
        let x = Triangulation { n: 0, diagonals: vec![] };
        let model = MarkovChainModel::new(vec![x.encode()], vec![vec![(0, Rational::one())]], vec![Rational::one()]);
        return (vec![x], model);
    }
    let c = build_flip_chain_capped(m, usize::MAX).expect("small factor");
    (c.states, c.model)
}

#[derive(Debug, Clone, Serialize)]
pub struct CartesianReport {
    pub triangle: Triangle,
    pub sub_polygons: Vec<SubPolygon>,
    pub factor_sizes: Vec<usize>,
    pub block_size: usize,
    /// Factor coordinates of each block member, in block order.
    pub bijection: Vec<[usize; 3]>,
    /// Coordinate weights `w_k = 2(m_k - 1)/(2n - 2 - s)` (zero when `m_k < 2`);
    /// the remaining mass is an extra holding term.
    pub weights: Vec<String>,
    /// `P_t` equals the product chain of the factor walks entrywise.
    pub kernel_matches_product: bool,
    /// Restriction factor `P_t(x,y)/P(x,y)` on in-block edges.
    pub restriction_factor: Option<String>,
    pub max_vertex_count: usize,
    /// Every sub-polygon has at most `n/2 + 1` vertices.
    pub vertex_bound_holds: bool,
    /// Every sub-polygon parameter is at most `n/2`.
    pub parameter_bound_holds: bool,
}

/// Checks that the restriction chain on central block `t` is the product of
/// the flip walks on the three sub-polygons.
pub fn verify_cartesian_structure(chain: &FlipChain, partition: &Partition, t: usize) -> Result<CartesianReport, CoreError> {
    let fail = |m: String| CoreError::BijectionFailure(m);
    let tri = match partition.keys.get(t) {
        Some(BlockKey::Triangle(tri)) => *tri,
        _ => return Err(CoreError::EmptyBlock(t)),
    };
    let n = chain.n;
    let subs = sub_polygons(n, &tri);
    let factors: Vec<(Vec<Triangulation>, MarkovChainModel)> = subs.iter().map(|s| factor_chain(s.m)).collect();
    let lookups: Vec<HashMap<&Triangulation, usize>> =
        factors.iter().map(|(st, _)| st.iter().enumerate().map(|(i, x)| (x, i)).collect()).collect();
    let sizes: Vec<usize> = factors.iter().map(|(st, _)| st.len()).collect();

    let members = &partition.blocks[t];
    let mut bijection = Vec::with_capacity(members.len());
    let mut seen = BTreeSet::new();
    for &x in members {
        let mut c = [0usize; 3];
        for k in 0..3 {
            let local = subs[k].restrict(&chain.states[x]);
            c[k] = *lookups[k].get(&local).ok_or_else(|| fail(format!("{} is not a valid factor state", local.encode())))?;
        }
        if !seen.insert(c) {
            return Err(fail(format!("two states map to {c:?}")));
        }
        bijection.push(c);
    }
    if bijection.len() != sizes.iter().product::<usize>() {
        return Err(fail("block size differs from product of factor sizes".into()));
    }

    let s = [(tri.a, tri.k), (tri.k, tri.b), (tri.a, tri.b)].iter().filter(|(u, v)| v - u >= 2 && !(*u == 0 && *v == n + 1)).count();
    let denom = (2 * n - 2 - s) as i64;
    let mut weights: Vec<Rational> = subs
        .iter()
        .map(|sp| if sp.m >= 2 { Rational::new(BigInt::from(2 * (sp.m as i64 - 1)), BigInt::from(denom.max(1))) } else { Rational::zero() })
        .collect();
    let rest = Rational::one() - weights.iter().sum::<Rational>();
    let restricted = restriction_chain(&chain.model, partition, t)?;

    let mut components: Vec<MarkovChainModel> = factors.iter().map(|(_, m)| m.clone()).collect();
    components.push(MarkovChainModel::new(vec!["*".into()], vec![vec![(0, Rational::one())]], vec![Rational::one()]));
    weights.push(rest);
    let prod = product_chain(&components, &weights)?;
    let mut psizes = sizes.clone();
    psizes.push(1);
    let image: Vec<usize> = bijection.iter().map(|c| product_index(&psizes, &[c[0], c[1], c[2], 0])).collect();
    let mut matches = true;
    for (lx, &px) in image.iter().enumerate() {
        let mut mapped: Vec<(usize, Rational)> = restricted.model.rows[lx].iter().map(|(ly, p)| (image[*ly], p.clone())).collect();
        mapped.sort_by_key(|(y, _)| *y);
        if mapped != prod.rows[px] {
            matches = false;
            break;
        }
    }
    let factor = if n >= 2 { restricted.constant_factor() } else { None };
    let max_vertex_count = subs.iter().map(|sp| sp.m + 2).max().unwrap_or(0);
    weights.pop();
    Ok(CartesianReport {
        triangle: tri,
        factor_sizes: sizes,
        block_size: members.len(),
        bijection,
        weights: weights.iter().map(|w| w.to_string()).collect(),
        kernel_matches_product: matches,
        restriction_factor: factor.map(|f| f.to_string()),
        vertex_bound_holds: subs.iter().all(|sp| 2 * (sp.m + 2) <= n + 2),
        parameter_bound_holds: subs.iter().all(|sp| 2 * sp.m <= n),
        max_vertex_count,
        sub_polygons: subs.to_vec(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryReport {
    /// `Omega_{tt'}`: states of block t with a neighbor in block t'.
    pub omega_tt: Vec<usize>,
    pub omega_t_t: Vec<usize>,
    /// All edges between the two boundary sets.
    pub matching: Vec<(usize, usize)>,
    pub is_perfect_matching: bool,
    /// The triangle across the side of t facing t'.
    pub u: Triangle,
    /// `Omega_{tt'}` equals the states of block t containing `u`.
    pub characterization_holds: bool,
}

/// Boundary sets between central blocks `t` and `t2` (block positions).
pub fn boundary_sets(chain: &FlipChain, partition: &Partition, t: usize, t2: usize) -> Result<BoundaryReport, CoreError> {
    let (BlockKey::Triangle(tri), BlockKey::Triangle(tri2)) =
        (partition.keys.get(t).ok_or(CoreError::EmptyBlock(t))?, partition.keys.get(t2).ok_or(CoreError::EmptyBlock(t2))?)
    else {
        return Err(CoreError::BlocksNotAdjacent(t, t2));
    };
    let mut a = BTreeSet::new();
    let mut b = BTreeSet::new();
    let mut edges = Vec::new();
    for &x in &partition.blocks[t] {
        for &y in &chain.neighbors[x] {
            if partition.block_of[y] == t2 {
                a.insert(x);
                b.insert(y);
                edges.push((x, y));
            }
        }
    }
    if edges.is_empty() || t == t2 {
        return Err(CoreError::BlocksNotAdjacent(t, t2));
    }
    let mut deg: HashMap<usize, usize> = HashMap::new();
    for &(x, y) in &edges {
        *deg.entry(x).or_default() += 1;
        *deg.entry(y).or_default() += 1;
    }
    let perfect = a.len() == b.len() && edges.len() == a.len() && deg.values().all(|&d| d == 1);

    let i = tri2.vertices().into_iter().find(|v| !tri.has_vertex(*v)).ok_or(CoreError::BlocksNotAdjacent(t, t2))?;
    let (p, q) = if tri.a < i && i < tri.k {
        (tri.a, tri.k)
    } else if tri.k < i && i < tri.b {
        (tri.k, tri.b)
    } else {
        (tri.a, tri.b)
    };
    let u = Triangle::new(p, q, i);
    let via_u: BTreeSet<usize> = partition.blocks[t].iter().copied().filter(|&x| chain.states[x].contains_triangle(&u)).collect();
    Ok(BoundaryReport {
        characterization_holds: via_u == a,
        omega_tt: a.into_iter().collect(),
        omega_t_t: b.into_iter().collect(),
        matching: edges,
        is_perfect_matching: perfect,
        u,
    })
}
