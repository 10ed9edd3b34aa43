//! Position of the polygon center relative to triangles of the regular embedding.

use crate::triangulation::{Triangle, Triangulation};

/// Whether the center of the regular `m`-gon lies strictly inside `t`.
/// Holds iff every arc cut off by a side spans fewer than `m/2` edges.
pub fn strictly_contains_center(t: &Triangle, m: usize) -> bool {
    let arcs = [t.k - t.a, t.b - t.k, m - (t.b - t.a)];
    arcs.iter().all(|&r| 2 * r < m)
}

/// The triangle of `x` containing the center of the regular `(n+2)`-gon.
///
/// When the center lies on a diameter `(p,q)` of `x`, the triangle on the
/// side of the midpoint of edge `(0,1)` is chosen; that midpoint lies inside
/// `(p,q)` exactly when `p == 0`.
pub fn central_triangle(x: &Triangulation) -> Triangle {
    let m = x.n + 2;
    let tris = x.triangles();
    if let Some(t) = tris.iter().find(|t| strictly_contains_center(t, m)) {
        return *t;
    }
    let d = x
        .diagonals
        .iter()
        .find(|d| 2 * (d.b - d.a) == m)
        .expect("center not strictly inside a triangle lies on a diameter");
    let inside = d.a == 0;
    *tris
        .iter()
        .find(|t| {
            let apex_inside = t.vertices().iter().any(|&v| d.a < v && v < d.b);
            let has_d = t.has_vertex(d.a) && t.has_vertex(d.b);
            has_d && apex_inside == inside
        })
        .expect("diameter borders two triangles")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::enumerate_triangulations;

    fn tr(n: usize, d: &[(usize, usize)]) -> Triangulation {
        Triangulation::new(n, d.iter().copied()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(central_triangle(&tr(2, &[(0, 2)])), Triangle::new(0, 1, 2));
        // midpoint of (0,1) is on the side of vertex 0
        assert_eq!(central_triangle(&tr(2, &[(1, 3)])), Triangle::new(0, 1, 3));
        assert_eq!(central_triangle(&tr(3, &[(0, 2), (2, 4)])), Triangle::new(0, 2, 4));
    }

    #[test]
    fn result_is_a_triangle_of_x() {
        for n in 1..=8 {
            for x in enumerate_triangulations(n).unwrap() {
                let t = central_triangle(&x);
                assert!(x.contains_triangle(&t));
            }
        }
    }

    #[test]
    fn odd_polygons_never_tie() {
        for n in [1, 3, 5, 7] {
            for x in enumerate_triangulations(n).unwrap() {
                assert!(strictly_contains_center(&central_triangle(&x), n + 2));
            }
        }
    }
}
