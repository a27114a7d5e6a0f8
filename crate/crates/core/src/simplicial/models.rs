//! Small named triangulations used throughout the tests and the verifier.

use super::SimplicialComplex;

fn numbered(n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n).map(|i| format!("{i:0width$}")).collect()
}

fn build(n: usize, facets: Vec<Vec<usize>>) -> SimplicialComplex {
    SimplicialComplex::from_facets(numbered(n), facets).expect("fixture triangulation")
}

/// `n` isolated points.
pub fn points(n: usize) -> SimplicialComplex {
    build(n, Vec::new())
}

/// The n-gon circle, `n >= 3`.
pub fn polygon(n: usize) -> SimplicialComplex {
    build(n, (0..n).map(|i| vec![i, (i + 1) % n]).collect())
}

/// Path with `n` vertices.
pub fn path(n: usize) -> SimplicialComplex {
    build(n, (1..n).map(|i| vec![i - 1, i]).collect())
}

/// The full simplex on `n` vertices.
pub fn simplex(n: usize) -> SimplicialComplex {
    build(n, vec![(0..n).collect()])
}

/// Boundary of the full simplex on `n` vertices.
pub fn simplex_boundary(n: usize) -> SimplicialComplex {
    build(n, (0..n).map(|i| (0..n).filter(|&j| j != i).collect()).collect())
}

pub fn tetrahedron_boundary() -> SimplicialComplex {
    simplex_boundary(4)
}

pub fn octahedron() -> SimplicialComplex {
    // antipodal pairs (0,1), (2,3), (4,5)
    let mut facets = Vec::new();
    for a in [0, 1] {
        for b in [2, 3] {
            for c in [4, 5] {
                facets.push(vec![a, b, c]);
            }
        }
    }
    build(6, facets)
}

/// Minimal 6-vertex triangulation of the real projective plane.
pub fn rp2() -> SimplicialComplex {
    build(
        6,
        vec![
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 3, 4],
            vec![0, 4, 5],
            vec![0, 5, 1],
            vec![1, 2, 4],
            vec![2, 3, 5],
            vec![3, 4, 1],
            vec![4, 5, 2],
            vec![5, 1, 3],
        ],
    )
}

/// Seven-vertex torus.
pub fn torus() -> SimplicialComplex {
    let mut facets = Vec::new();
    for i in 0..7 {
        facets.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        facets.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    build(7, facets)
}

fn grid_surface(m: usize, n: usize, flip: bool) -> SimplicialComplex {
    let id = |i: usize, j: usize| {
        let wraps = j / n;
        let i = if flip && wraps % 2 == 1 { (m - i % m) % m } else { i % m };
        i * n + j % n
    };
    let mut facets = Vec::new();
    for i in 0..m {
        for j in 0..n {
            facets.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            facets.push(vec![id(i, j), id(i, j + 1), id(i + 1, j + 1)]);
        }
    }
    build(m * n, facets)
}

/// Torus as a 4x4 grid quotient.
pub fn torus_grid() -> SimplicialComplex {
    grid_surface(4, 4, false)
}

/// Klein bottle as a 4x4 grid quotient with one flipped identification.
pub fn klein_bottle() -> SimplicialComplex {
    grid_surface(4, 4, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surfaces_are_closed_pseudomanifolds() {
        for k in [rp2(), torus(), torus_grid(), klein_bottle(), octahedron()] {
            let tri = k.simplices(2);
            for e in k.simplices(1) {
                let n = tri.iter().filter(|t| e.iter().all(|v| t.contains(v))).count();
                assert_eq!(n, 2, "edge {e:?}");
            }
        }
        assert_eq!(torus_grid().betti().from_zero(), vec![1, 2, 1]);
        assert_eq!(klein_bottle().euler_characteristic(), 0);
    }
}
