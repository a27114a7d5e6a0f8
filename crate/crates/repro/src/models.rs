//! Finite models of links and fibers used by the verification registry.

use ordercx_core::chain::Betti;
use ordercx_core::poset::{FinitePoset, PosetJson};
use ordercx_core::simplicial::action::factor_permutations;
use ordercx_core::simplicial::models::polygon;
use ordercx_core::simplicial::{cone_with_apex, suspension, GroupAction, SimplicialComplex, SimplicialError};
use ordercx_core::transfer::{self, TransferError};

pub const J4C: &str = include_str!("../fixtures/j4c.json");
pub const J4D: &str = include_str!("../fixtures/j4d.json");
pub const J3C: &str = include_str!("../fixtures/j3c.json");

pub fn shipped_poset(text: &str) -> FinitePoset {
    let json: PosetJson = serde_json::from_str(text).expect("shipped poset parses");
    FinitePoset::from_json(&json).expect("shipped poset is a poset")
}

/// Link of a singular point: its own vertex coned over the circle of tangent directions.
pub fn singular_point_link(n: usize) -> SimplicialComplex {
    let dirs = polygon(n).relabel(|v| format!("(x,{v})")).expect("relabel");
    cone_with_apex(&dirs, "x").expect("fresh apex")
}

/// Two cones glued along a segment `z -- (z,L)`: the order complexes of a line and of a
/// singular point on it, meeting in the segment between the point and its direction.
pub fn line_with_singular_point() -> (SimplicialComplex, SimplicialComplex, SimplicialComplex) {
    let line = SimplicialComplex::from_labelled_facets(&[
        vec!["L", "z", "(z,L)"],
        vec!["L", "(z,L)", "a1"],
        vec!["L", "a1", "a2"],
        vec!["L", "a2", "z"],
    ])
    .expect("cone over a square");
    let point = SimplicialComplex::from_labelled_facets(&[
        vec!["Z", "z", "(z,L)"],
        vec!["Z", "(z,L)", "b1"],
        vec!["Z", "b1", "b2"],
        vec!["Z", "b2", "z"],
    ])
    .expect("cone over a square");
    let mut facets: Vec<Vec<String>> = Vec::new();
    for k in [&line, &point] {
        for f in k.facets() {
            facets.push(f.iter().map(|&v| k.vertex_label(v).to_string()).collect());
        }
    }
    let union = SimplicialComplex::from_labelled_facets(&facets).expect("union");
    (line, point, union)
}

/// Common part of two complexes, by vertex labels.
pub fn intersection(a: &SimplicialComplex, b: &SimplicialComplex) -> SimplicialComplex {
    let mut facets: Vec<Vec<String>> = Vec::new();
    for d in 0..=a.dim().max(0) as usize {
        for s in a.simplices(d) {
            let labels: Vec<String> = s.iter().map(|&v| a.vertex_label(v).to_string()).collect();
            let mut idx: Vec<usize> = match labels.iter().map(|l| b.vertex_index(l)).collect::<Option<Vec<_>>>() {
                Some(v) => v,
                None => continue,
            };
            idx.sort_unstable();
            if b.contains(&idx) {
                facets.push(labels);
            }
        }
    }
    SimplicialComplex::from_labelled_facets(&facets).expect("intersection")
}

/// The `r`-fold join of an `n`-gon with the symmetric group permuting the factors.
pub fn symmetric_join(n: usize, r: usize) -> Result<GroupAction, SimplicialError> {
    factor_permutations(&polygon(n), r)
}

/// The action extended to a complex whose extra vertices, placed last, are fixed.
fn extend_fixed(action: &GroupAction, complex: SimplicialComplex) -> Result<GroupAction, SimplicialError> {
    let n = action.complex().num_vertices();
    let extra = complex.num_vertices() - n;
    let gens = action.generators().iter().map(|g| g.iter().copied().chain(n..n + extra).collect()).collect();
    GroupAction::new(complex, gens)
}

pub fn coned(action: &GroupAction) -> Result<GroupAction, SimplicialError> {
    extend_fixed(action, cone_with_apex(action.complex(), "apex")?)
}

pub fn suspended(action: &GroupAction) -> Result<GroupAction, SimplicialError> {
    extend_fixed(action, suspension(action.complex()))
}

/// Homology of the orbit space (invariant part), by the orbit-sum complex and by the
/// homology projector.
pub fn invariant_betti(action: &GroupAction) -> Result<(Betti, Betti), TransferError> {
    let cx = action.complex().to_chain_complex();
    let cells = action.cell_action(&cx)?;
    let psi = vec![1; action.generators().len()];
    Ok((transfer::isotypic_betti_chain(&cx, &cells, &psi)?, transfer::isotypic_betti_homology(&cx, &cells, &psi)?))
}

/// `psi`-isotypic relative homology of an invariant pair `(action.complex(), sub)`.
pub fn isotypic_relative_betti(
    action: &GroupAction,
    sub: &SimplicialComplex,
    psi: &[i8],
) -> Result<Betti, Box<dyn std::error::Error + Send + Sync>> {
    let k = action.complex();
    let cx = k.to_chain_complex();
    let cells = action.cell_action(&cx)?;
    let sel = k.selection_of(sub)?;
    let (q, qa) = transfer::quotient_action(&cx, &cells, &sel)?;
    Ok(transfer::isotypic_betti_chain(&q, &qa, psi)?)
}

/// Borel–Moore homology of the open cone on a link, from the link's Betti numbers.
pub fn open_cone_bm(link: &Betti) -> Vec<(i32, usize)> {
    let mut out = Vec::new();
    for (d, n) in link.nonzero() {
        let n = if d == 0 { n - 1 } else { n };
        if n > 0 {
            out.push((d + 1, n));
        }
    }
    out
}

/// Whether `k` is a 2-dimensional disc: acyclic, every edge in one or two triangles, and
/// the edges in exactly one triangle forming a single circle.
pub fn is_disc(k: &SimplicialComplex) -> bool {
    if k.dim() != 2 || !k.reduced_betti().is_zero() {
        return false;
    }
    let mut boundary = Vec::new();
    for e in k.simplices(1) {
        let cofaces = k.simplices(2).iter().filter(|t| e.iter().all(|v| t.contains(v))).count();
        match cofaces {
            1 => boundary.push(e.clone()),
            2 => {}
            _ => return false,
        }
    }
    let Ok(circle) = SimplicialComplex::from_facets(k.vertices().to_vec(), boundary) else { return false };
    let used: Vec<usize> = (0..k.num_vertices()).filter(|v| circle.simplices(1).iter().any(|e| e.contains(v))).collect();
    let circle = circle.induced(&used);
    circle.betti() == Betti::sphere(1) && circle.simplices(0).iter().all(|v| {
        circle.simplices(1).iter().filter(|e| e.contains(&v[0])).count() == 2
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ordercx_core::poset::lower_link;

    #[test]
    fn fixtures_parse() {
        for text in [J4C, J4D, J3C] {
            let p = shipped_poset(text);
            assert!(lower_link(&p, "X").is_ok());
        }
    }

    #[test]
    fn singular_link_is_a_disc() {
        assert!(is_disc(&singular_point_link(6)));
        assert!(!is_disc(&polygon(5)));
    }

    #[test]
    fn glued_cones_meet_in_a_segment() {
        let (a, b, u) = line_with_singular_point();
        let i = intersection(&a, &b);
        assert_eq!(i.f_vector(), vec![2, 1]);
        assert!(u.reduced_betti().is_zero());
    }

    #[test]
    fn open_cone_shift() {
        assert_eq!(open_cone_bm(&Betti::sphere(3)), vec![(4, 1)]);
        assert_eq!(open_cone_bm(&Betti::point()), vec![]);
    }
}
