//! The graph-pair predicate: a witness circuit whose gap is
//! `#iso(g1 -> g2) - #aut(g1)`, hence zero exactly when the graphs are
//! isomorphic.

use super::families;
use super::graph::Graph;
use super::predicate::{Operand, PredicateBuilder, WitnessPredicate};

/// Builds the predicate over witness `y = (s, code)`: one selector bit and
/// one `ceil(log2 v)`-bit image index per vertex.
///
/// Accept iff `s = 0` and `code` is a valid permutation mapping `g1` onto
/// `g2`, or `s = 1` and `code` is NOT a valid permutation mapping `g1` onto
/// itself. Counting witnesses: A = #iso + (2^(v*b) - #aut), so the gap is
/// `#iso - #aut`.
///
/// Graphs of different sizes are trivially non-isomorphic; a constant-true
/// predicate (gap 1) is returned for that case.
pub fn build_gni_predicate(g1: &Graph, g2: &Graph) -> WitnessPredicate {
    let v = g1.vertex_count();
    if v != g2.vertex_count() {
        return families::constant(0, 1, true);
    }
    let b = bits_per_vertex(v);
    let m = 1 + v * b;
    let mut bld = PredicateBuilder::new(0, m);

    let code_bit = |i: usize, j: usize| Operand::Witness(1 + i * b + j);

    // maps_to[i][p]: vertex i's code equals p (codes read MSB-first)
    let mut maps_to = vec![Vec::with_capacity(v); v];
    for (i, row) in maps_to.iter_mut().enumerate() {
        for p in 0..v {
            let mut lits = Vec::with_capacity(b);
            for j in 0..b {
                let bit = code_bit(i, j);
                let set = (p >> (b - 1 - j)) & 1 == 1;
                lits.push(if set { bit } else { bld.not(bit) });
            }
            row.push(bld.and_all(&lits));
        }
    }

    // every code is in range
    let mut in_range = Vec::with_capacity(v);
    for row in &maps_to {
        let r = bld.or_all(row);
        in_range.push(r);
    }
    let all_in_range = bld.and_all(&in_range);

    // codes pairwise distinct
    let mut distinct = Vec::new();
    for i in 0..v {
        for j in (i + 1)..v {
            let mut same_bits = Vec::with_capacity(b.max(1));
            for t in 0..b {
                let x = bld.xor(code_bit(i, t), code_bit(j, t));
                same_bits.push(bld.not(x));
            }
            let eq = bld.and_all(&same_bits);
            distinct.push(bld.not(eq));
        }
    }
    let all_distinct = bld.and_all(&distinct);
    let valid = bld.and(all_in_range, all_distinct);

    // edge-preservation against a target graph
    let match_against = |target: &Graph, bld: &mut PredicateBuilder| -> Operand {
        let mut conditions = Vec::new();
        for i in 0..v {
            for j in (i + 1)..v {
                let mut hits = Vec::new();
                for (p, q) in target.edges() {
                    let fwd = bld.and(maps_to[i][p], maps_to[j][q]);
                    let rev = bld.and(maps_to[i][q], maps_to[j][p]);
                    hits.push(bld.or(fwd, rev));
                }
                let image_edge = bld.or_all(&hits);
                conditions.push(if g1.has_edge(i, j) {
                    image_edge
                } else {
                    bld.not(image_edge)
                });
            }
        }
        bld.and_all(&conditions)
    };
    let match12 = match_against(g2, &mut bld);
    let match11 = match_against(g1, &mut bld);

    let s = Operand::Witness(0);
    let not_s = bld.not(s);
    let valid_match12 = bld.and(valid, match12);
    let branch0 = bld.and(not_s, valid_match12);
    let valid_match11 = bld.and(valid, match11);
    let not_match = bld.not(valid_match11);
    let branch1 = bld.and(s, not_match);
    let out = bld.or(branch0, branch1);
    bld.finish(out)
}

pub fn bits_per_vertex(v: usize) -> usize {
    (usize::BITS - (v - 1).leading_zeros()) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitString;
    use crate::gap_oracle::graph::{count_automorphisms, count_isomorphisms};
    use crate::gap_oracle::{gap, Graph};

    fn gap_of(g1: &Graph, g2: &Graph) -> i64 {
        gap(&build_gni_predicate(g1, g2), &BitString::empty())
            .unwrap()
            .gap
    }

    #[test]
    fn code_widths() {
        assert_eq!(bits_per_vertex(1), 0);
        assert_eq!(bits_per_vertex(2), 1);
        assert_eq!(bits_per_vertex(3), 2);
        assert_eq!(bits_per_vertex(4), 2);
        assert_eq!(bits_per_vertex(5), 3);
    }

    #[test]
    fn identical_path_gives_zero_gap() {
        let p = Graph::with_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(gap_of(&p, &p), 0);
    }

    #[test]
    fn triangle_vs_path() {
        let t = Graph::with_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let p = Graph::with_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(gap_of(&t, &p), -6);
    }

    #[test]
    fn relabeled_path_gives_zero_gap() {
        let p1 = Graph::with_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let p2 = Graph::with_edges(3, &[(0, 2), (1, 2)]).unwrap();
        assert_eq!(gap_of(&p1, &p2), 0);
    }

    #[test]
    fn size_mismatch_is_trivially_nonzero() {
        let a = Graph::new(2).unwrap();
        let b = Graph::new(3).unwrap();
        assert_eq!(gap_of(&a, &b), 1);
    }

    #[test]
    fn gap_matches_permutation_search_up_to_three_vertices() {
        let mut catalog = Vec::new();
        for v in 1..=3usize {
            let pairs: Vec<(usize, usize)> = (0..v)
                .flat_map(|a| ((a + 1)..v).map(move |b| (a, b)))
                .collect();
            for mask in 0u32..(1 << pairs.len()) {
                let edges: Vec<(usize, usize)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| (mask >> i) & 1 == 1)
                    .map(|(_, e)| *e)
                    .collect();
                catalog.push(Graph::with_edges(v, &edges).unwrap());
            }
        }
        for g1 in &catalog {
            for g2 in &catalog {
                if g1.vertex_count() != g2.vertex_count() {
                    continue;
                }
                let expected =
                    count_isomorphisms(g1, g2) as i64 - count_automorphisms(g1) as i64;
                assert_eq!(gap_of(g1, g2), expected, "{g1} vs {g2}");
            }
        }
    }
}
