//! Finite-index subgroups of a free group as basepointed Schreier graphs:
//! cyclic covers, arbitrary transitive permutation covers, relator lifts,
//! homology of the corresponding one-relator 2-complex, the second Betti
//! number of the pulled-back double, and Schreier-basis rewriting.
//!
//! A generator acts on the fiber as a permutation; the spanning tree is
//! breadth-first from the basepoint with generator order a < b < ..., so
//! Schreier bases are reproducible. The tree can be overridden where a
//! construction fixes a different one.

use num_bigint::BigInt;
use thiserror::Error;

use crate::intlinalg::{cokernel_invariants, smith_normal_form, IntMatrix};
use crate::words::{Letter, PhiMap, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("cover index must be at least 1")]
    BadIndex,
    #[error("permutation {0} is not a bijection on 0..{1}")]
    NotPermutation(usize, usize),
    #[error("the action is not transitive: the cover would be disconnected")]
    NotTransitive,
    #[error("expected {expected} permutations, got {got}")]
    WrongPermutationCount { expected: usize, got: usize },
    #[error("word of rank {word} does not act on a cover of rank {cover}")]
    RankMismatch { word: usize, cover: usize },
    #[error("word does not fix the basepoint: it is not in the subgroup")]
    NotInSubgroup,
    #[error("proposed tree is not a spanning tree")]
    BadTree,
}

/// A directed edge of the Schreier graph: `src` goes to `src . gen`.
/// Generators are 0-indexed here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId {
    pub src: usize,
    pub gen: usize,
}

/// Basepointed Schreier graph of a finite-index subgroup.
#[derive(Clone, Debug)]
pub struct CoverGraph {
    rank: usize,
    degree: usize,
    basepoint: usize,
    /// perms[g][v] = v . g
    perms: Vec<Vec<usize>>,
    /// inverse permutations
    inv_perms: Vec<Vec<usize>>,
    /// tree[e] for each edge, row-major by (src, gen)
    tree_edge: Vec<bool>,
    /// non-tree edges in canonical order: the homology basis of the graph
    basis: Vec<EdgeId>,
    /// basis index per edge, usize::MAX for tree edges
    basis_index: Vec<usize>,
}

impl CoverGraph {
    /// Schreier graph of the preimage of `k Z` under `phi`: vertices are the
    /// integers mod k, generator `g` translates by `phi(g)`.
    pub fn cyclic(rank: usize, phi: &PhiMap, k: u64) -> Result<CoverGraph, CoverError> {
        if k < 1 {
            return Err(CoverError::BadIndex);
        }
        if phi.rank() != rank {
            return Err(CoverError::RankMismatch {
                word: phi.rank(),
                cover: rank,
            });
        }
        let k = k as usize;
        let perms: Vec<Vec<usize>> = (0..rank)
            .map(|g| {
                let shift = phi.values()[g].rem_euclid(k as i64) as usize;
                (0..k).map(|v| (v + shift) % k).collect()
            })
            .collect();
        CoverGraph::from_perms(rank, perms, 0)
    }

    /// Schreier graph of an arbitrary transitive permutation action.
    pub fn from_perms(
        rank: usize,
        perms: Vec<Vec<usize>>,
        basepoint: usize,
    ) -> Result<CoverGraph, CoverError> {
        if perms.len() != rank {
            return Err(CoverError::WrongPermutationCount {
                expected: rank,
                got: perms.len(),
            });
        }
        let degree = perms.first().map_or(1, |p| p.len());
        for (g, p) in perms.iter().enumerate() {
            let mut seen = vec![false; degree];
            if p.len() != degree {
                return Err(CoverError::NotPermutation(g, degree));
            }
            for &image in p {
                if image >= degree || seen[image] {
                    return Err(CoverError::NotPermutation(g, degree));
                }
                seen[image] = true;
            }
        }
        let mut inv_perms = vec![vec![0usize; degree]; rank];
        for g in 0..rank {
            for v in 0..degree {
                inv_perms[g][perms[g][v]] = v;
            }
        }

        let mut cover = CoverGraph {
            rank,
            degree,
            basepoint,
            perms,
            inv_perms,
            tree_edge: vec![false; rank * degree],
            basis: Vec::new(),
            basis_index: Vec::new(),
        };
        let tree = cover.bfs_tree()?;
        cover.install_tree(tree)?;
        Ok(cover)
    }

    /// Breadth-first spanning tree from the basepoint, exploring generators
    /// in order and the forward edge before the backward one.
    fn bfs_tree(&self) -> Result<Vec<EdgeId>, CoverError> {
        let mut visited = vec![false; self.degree];
        visited[self.basepoint] = true;
        let mut queue = std::collections::VecDeque::from([self.basepoint]);
        let mut tree = Vec::new();
        while let Some(v) = queue.pop_front() {
            for g in 0..self.rank {
                let fwd = self.perms[g][v];
                if !visited[fwd] {
                    visited[fwd] = true;
                    tree.push(EdgeId { src: v, gen: g });
                    queue.push_back(fwd);
                }
                let back = self.inv_perms[g][v];
                if !visited[back] {
                    visited[back] = true;
                    tree.push(EdgeId { src: back, gen: g });
                    queue.push_back(back);
                }
            }
        }
        if visited.iter().all(|&b| b) {
            Ok(tree)
        } else {
            Err(CoverError::NotTransitive)
        }
    }

    fn install_tree(&mut self, tree: Vec<EdgeId>) -> Result<(), CoverError> {
        if tree.len() != self.degree - 1 {
            return Err(CoverError::BadTree);
        }
        let mut tree_edge = vec![false; self.rank * self.degree];
        for e in &tree {
            tree_edge[self.edge_slot(*e)] = true;
        }
        // validate: tree edges connect everything without the non-tree ones
        let mut visited = vec![false; self.degree];
        visited[self.basepoint] = true;
        let mut stack = vec![self.basepoint];
        while let Some(v) = stack.pop() {
            for g in 0..self.rank {
                let fwd = self.perms[g][v];
                if tree_edge[self.edge_slot(EdgeId { src: v, gen: g })] && !visited[fwd] {
                    visited[fwd] = true;
                    stack.push(fwd);
                }
                let back = self.inv_perms[g][v];
                if tree_edge[self.edge_slot(EdgeId { src: back, gen: g })] && !visited[back] {
                    visited[back] = true;
                    stack.push(back);
                }
            }
        }
        if !visited.iter().all(|&b| b) {
            return Err(CoverError::BadTree);
        }
        let mut basis = Vec::new();
        let mut basis_index = vec![usize::MAX; self.rank * self.degree];
        for v in 0..self.degree {
            for g in 0..self.rank {
                let e = EdgeId { src: v, gen: g };
                if !tree_edge[self.edge_slot(e)] {
                    basis_index[self.edge_slot(e)] = basis.len();
                    basis.push(e);
                }
            }
        }
        self.tree_edge = tree_edge;
        self.basis = basis;
        self.basis_index = basis_index;
        Ok(())
    }

    /// Replaces the spanning tree by an explicit one (same edge format).
    pub fn with_spanning_tree(mut self, tree: Vec<EdgeId>) -> Result<CoverGraph, CoverError> {
        self.install_tree(tree)?;
        Ok(self)
    }

    fn edge_slot(&self, e: EdgeId) -> usize {
        e.src * self.rank + e.gen
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of sheets (vertices of the cover).
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    /// Rank of the first homology of the cover graph: E - V + 1.
    pub fn h1_rank(&self) -> usize {
        self.basis.len()
    }

    /// The non-tree edges, in the canonical (src, gen) order.
    pub fn h1_basis(&self) -> &[EdgeId] {
        &self.basis
    }

    pub fn is_tree_edge(&self, e: EdgeId) -> bool {
        self.tree_edge[self.edge_slot(e)]
    }

    /// Endpoint of one letter step from `v`.
    pub fn step(&self, v: usize, l: Letter) -> usize {
        let g = l.gen_index() - 1;
        if l.is_positive() {
            self.perms[g][v]
        } else {
            self.inv_perms[g][v]
        }
    }

    /// Image of `v` under the whole word.
    pub fn act(&self, v: usize, w: &Word) -> usize {
        w.letters().iter().fold(v, |v, &l| self.step(v, l))
    }

    /// Walks `w` from `v`, invoking the callback with every crossed edge and
    /// its direction (+1 forward, -1 backward).
    fn walk(&self, v: usize, w: &Word, mut visit: impl FnMut(EdgeId, i64)) -> usize {
        let mut cur = v;
        for &l in w.letters() {
            let g = l.gen_index() - 1;
            if l.is_positive() {
                visit(EdgeId { src: cur, gen: g }, 1);
                cur = self.perms[g][cur];
            } else {
                let prev = self.inv_perms[g][cur];
                visit(EdgeId { src: prev, gen: g }, -1);
                cur = prev;
            }
        }
        cur
    }
}

/// One lift of the relator circle: a cycle of the relator permutation,
/// traced `multiplicity` times from its minimal vertex, with the homology
/// class of the resulting loop.
#[derive(Clone, Debug)]
pub struct Lift {
    pub start: usize,
    pub multiplicity: usize,
    pub class: Vec<BigInt>,
}

/// The complete set of relator lifts over a cover.
#[derive(Clone, Debug)]
pub struct RelatorLifts {
    pub lifts: Vec<Lift>,
    /// Rows are lift classes, columns the graph homology basis.
    pub matrix: IntMatrix,
}

/// Decomposes the relator permutation into cycles and records the homology
/// class of `w^multiplicity` traced from the minimal vertex of each cycle.
pub fn lift_relator(cover: &CoverGraph, w: &Word) -> Result<RelatorLifts, CoverError> {
    if w.rank() != cover.rank() {
        return Err(CoverError::RankMismatch {
            word: w.rank(),
            cover: cover.rank(),
        });
    }
    let mut assigned = vec![false; cover.degree()];
    let mut lifts = Vec::new();
    for start in 0..cover.degree() {
        if assigned[start] {
            continue;
        }
        let mut multiplicity = 0;
        let mut v = start;
        loop {
            assigned[v] = true;
            multiplicity += 1;
            v = cover.act(v, w);
            if v == start {
                break;
            }
        }
        let mut class = vec![BigInt::from(0); cover.h1_rank()];
        let mut cur = start;
        for _ in 0..multiplicity {
            cur = cover.walk(cur, w, |e, dir| {
                let idx = cover.basis_index[cover.edge_slot(e)];
                if idx != usize::MAX {
                    class[idx] += dir;
                }
            });
        }
        debug_assert_eq!(cur, start);
        lifts.push(Lift {
            start,
            multiplicity,
            class,
        });
    }
    let rows: Vec<Vec<BigInt>> = lifts.iter().map(|l| l.class.clone()).collect();
    let matrix = if rows.is_empty() {
        IntMatrix::zero(0, cover.h1_rank())
    } else {
        IntMatrix::from_rows(&rows)
    };
    Ok(RelatorLifts { lifts, matrix })
}

/// Homology of the 2-complex obtained from the cover graph by attaching one
/// 2-cell along each relator lift: first Betti number and torsion.
pub fn homology_one_relator_cover(
    cover: &CoverGraph,
    w: &Word,
) -> Result<(usize, Vec<BigInt>), CoverError> {
    let lifts = lift_relator(cover, w)?;
    let (free_rank, torsion) = cokernel_invariants(&lifts.matrix);
    Ok((free_rank, torsion))
}

/// Second Betti number of the pulled-back double: the kernel dimension of
/// the lift-class map, `|J| - rank(M)`.
pub fn betti2_double(cover: &CoverGraph, w: &Word) -> Result<usize, CoverError> {
    let lifts = lift_relator(cover, w)?;
    let snf = smith_normal_form(&lifts.matrix);
    Ok(lifts.lifts.len() - snf.rank)
}

/// Whether every relator lift has multiplicity one, i.e. the cover comes
/// from a subgroup of the one-relator quotient. The homology identities
/// relating the double to the one-relator cover hold exactly on these.
pub fn is_relator_trivial(cover: &CoverGraph, w: &Word) -> bool {
    (0..cover.degree()).all(|v| cover.act(v, w) == v)
}

/// Expresses a subgroup element in the Schreier basis given by the non-tree
/// edges: trace the word from the basepoint and emit one signed basis letter
/// per non-tree edge crossed.
pub fn rewrite_in_schreier_basis(cover: &CoverGraph, w: &Word) -> Result<Word, CoverError> {
    if w.rank() != cover.rank() {
        return Err(CoverError::RankMismatch {
            word: w.rank(),
            cover: cover.rank(),
        });
    }
    if cover.act(cover.basepoint(), w) != cover.basepoint() {
        return Err(CoverError::NotInSubgroup);
    }
    let mut letters: Vec<Letter> = Vec::new();
    cover.walk(cover.basepoint(), w, |e, dir| {
        let idx = cover.basis_index[cover.edge_slot(e)];
        if idx != usize::MAX {
            letters.push(Letter::new(idx + 1, dir > 0));
        }
    });
    Ok(Word::from_letters(cover.h1_rank().max(1), letters))
}

/// Pushes a word over the Schreier basis back down to the ambient free
/// group: each basis generator expands to tree-path, edge, reverse
/// tree-path. Inverse to [`rewrite_in_schreier_basis`] on subgroup elements.
pub fn expand_schreier_word(cover: &CoverGraph, w: &Word) -> Word {
    let paths = tree_paths(cover);
    let mut letters: Vec<Letter> = Vec::new();
    for &l in w.letters() {
        let e = cover.h1_basis()[l.gen_index() - 1];
        let tgt = cover.perms[e.gen][e.src];
        let mut expanded: Vec<Letter> = paths[e.src].clone();
        expanded.push(Letter::new(e.gen + 1, true));
        expanded.extend(paths[tgt].iter().rev().map(|x| x.inverse()));
        if l.is_positive() {
            letters.extend(expanded);
        } else {
            letters.extend(expanded.iter().rev().map(|x| x.inverse()));
        }
    }
    Word::from_letters(cover.rank(), letters)
}

/// Tree path from the basepoint to every vertex, as ambient letters.
fn tree_paths(cover: &CoverGraph) -> Vec<Vec<Letter>> {
    let mut paths: Vec<Option<Vec<Letter>>> = vec![None; cover.degree()];
    paths[cover.basepoint()] = Some(Vec::new());
    let mut queue = std::collections::VecDeque::from([cover.basepoint()]);
    while let Some(v) = queue.pop_front() {
        for g in 0..cover.rank() {
            let fwd = cover.perms[g][v];
            if cover.is_tree_edge(EdgeId { src: v, gen: g }) && paths[fwd].is_none() {
                let mut p = paths[v].clone().unwrap();
                p.push(Letter::new(g + 1, true));
                paths[fwd] = Some(p);
                queue.push_back(fwd);
            }
            let back = cover.inv_perms[g][v];
            if cover.is_tree_edge(EdgeId { src: back, gen: g }) && paths[back].is_none() {
                let mut p = paths[v].clone().unwrap();
                p.push(Letter::new(g + 1, false));
                paths[back] = Some(p);
                queue.push_back(back);
            }
        }
    }
    paths.into_iter().map(|p| p.expect("tree spans")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{parse_word, phi_for_rank2};

    fn phi01() -> PhiMap {
        PhiMap::new(vec![0, 1]).unwrap()
    }

    #[test]
    fn cyclic_cover_shape() {
        let c = CoverGraph::cyclic(2, &phi01(), 1).unwrap();
        assert_eq!(c.degree(), 1);
        assert_eq!(c.h1_rank(), 2);

        let c = CoverGraph::cyclic(2, &phi01(), 3).unwrap();
        assert_eq!(c.degree(), 3);
        // a fixes every vertex, b cycles them
        for v in 0..3 {
            assert_eq!(c.step(v, Letter::new(1, true)), v);
            assert_eq!(c.step(v, Letter::new(2, true)), (v + 1) % 3);
        }
        assert_eq!(c.h1_rank(), 6 - 3 + 1);
        assert!(CoverGraph::cyclic(2, &phi01(), 0).is_err());
    }

    #[test]
    fn perm_cover_shape() {
        let c = CoverGraph::from_perms(2, vec![vec![0], vec![0]], 0).unwrap();
        assert_eq!((c.degree(), c.h1_rank()), (1, 2));

        let c = CoverGraph::from_perms(2, vec![vec![1, 0], vec![0, 1]], 0).unwrap();
        assert_eq!(c.h1_rank(), 4 - 2 + 1);

        assert_eq!(
            CoverGraph::from_perms(2, vec![vec![0, 1], vec![0, 1]], 0).unwrap_err(),
            CoverError::NotTransitive
        );
        assert_eq!(
            CoverGraph::from_perms(2, vec![vec![0, 0], vec![0, 1]], 0).unwrap_err(),
            CoverError::NotPermutation(0, 2)
        );
    }

    #[test]
    fn lift_relator_examples() {
        let trivial = CoverGraph::from_perms(2, vec![vec![0], vec![0]], 0).unwrap();
        let comm = parse_word("abAB", 2).unwrap();
        let lifts = lift_relator(&trivial, &comm).unwrap();
        assert_eq!(lifts.lifts.len(), 1);
        assert_eq!(lifts.lifts[0].multiplicity, 1);
        assert!(lifts.lifts[0].class.iter().all(|c| c == &BigInt::from(0)));

        let ab = parse_word("ab", 2).unwrap();
        let lifts = lift_relator(&trivial, &ab).unwrap();
        assert_eq!(lifts.lifts[0].class, vec![BigInt::from(1), BigInt::from(1)]);

        let c3 = CoverGraph::cyclic(2, &phi01(), 3).unwrap();
        let b = parse_word("b", 2).unwrap();
        let lifts = lift_relator(&c3, &b).unwrap();
        assert_eq!(lifts.lifts.len(), 1);
        assert_eq!(lifts.lifts[0].multiplicity, 3);
    }

    #[test]
    fn multiplicities_sum_to_degree() {
        let words = ["ab", "aab", "abAB", "Ba^2ba^3"];
        let c = CoverGraph::from_perms(2, vec![vec![1, 2, 0], vec![1, 0, 2]], 0).unwrap();
        for text in words {
            let w = parse_word(text, 2).unwrap();
            let lifts = lift_relator(&c, &w).unwrap();
            let total: usize = lifts.lifts.iter().map(|l| l.multiplicity).sum();
            assert_eq!(total, c.degree());
        }
    }

    #[test]
    fn homology_examples() {
        let trivial = CoverGraph::from_perms(2, vec![vec![0], vec![0]], 0).unwrap();
        let (b1, torsion) = homology_one_relator_cover(&trivial, &parse_word("a", 2).unwrap()).unwrap();
        assert_eq!((b1, torsion.len()), (1, 0));

        let (b1, torsion) =
            homology_one_relator_cover(&trivial, &parse_word("abAB", 2).unwrap()).unwrap();
        assert_eq!((b1, torsion.len()), (2, 0));

        let c3 = CoverGraph::cyclic(2, &phi01(), 3).unwrap();
        let (b1, _) = homology_one_relator_cover(&c3, &parse_word("ababaB^2", 2).unwrap()).unwrap();
        assert_eq!(b1, 3);
    }

    #[test]
    fn betti2_examples() {
        let trivial = CoverGraph::from_perms(2, vec![vec![0], vec![0]], 0).unwrap();
        assert_eq!(betti2_double(&trivial, &parse_word("abAB", 2).unwrap()).unwrap(), 1);
        assert_eq!(betti2_double(&trivial, &parse_word("ab", 2).unwrap()).unwrap(), 0);
    }

    #[test]
    fn euler_identity_on_pullback_covers() {
        // beta_2(double) = beta_1(one-relator cover) + k(2-n) - 1, on covers
        // where the relator acts trivially
        let cases: Vec<(Word, CoverGraph)> = vec![
            (
                parse_word("abAB", 2).unwrap(),
                CoverGraph::from_perms(2, vec![vec![0], vec![0]], 0).unwrap(),
            ),
            (
                parse_word("ababaB^2", 2).unwrap(),
                CoverGraph::cyclic(2, &phi_for_rank2(&parse_word("ababaB^2", 2).unwrap()).unwrap(), 3)
                    .unwrap(),
            ),
            (
                parse_word("Ba^2ba^3", 2).unwrap(),
                CoverGraph::cyclic(2, &phi01(), 4).unwrap(),
            ),
        ];
        for (w, cover) in cases {
            assert!(is_relator_trivial(&cover, &w));
            let n = cover.rank() as i64;
            let k = cover.degree() as i64;
            let (b1, _) = homology_one_relator_cover(&cover, &w).unwrap();
            let b2 = betti2_double(&cover, &w).unwrap() as i64;
            assert_eq!(b2, b1 as i64 + k * (2 - n) - 1, "word {w}");
        }
    }

    #[test]
    fn rewrite_identity_on_trivial_cover() {
        let trivial = CoverGraph::from_perms(2, vec![vec![0], vec![0]], 0).unwrap();
        let w = parse_word("aBab", 2).unwrap();
        let rewritten = rewrite_in_schreier_basis(&trivial, &w).unwrap();
        // basis order: (0,a), (0,b) -> a, b in the same order
        assert_eq!(rewritten.letters(), w.letters());
    }

    #[test]
    fn rewrite_requires_subgroup_membership() {
        let c3 = CoverGraph::cyclic(2, &phi01(), 3).unwrap();
        assert_eq!(
            rewrite_in_schreier_basis(&c3, &parse_word("b", 2).unwrap()).unwrap_err(),
            CoverError::NotInSubgroup
        );
    }

    #[test]
    fn rewrite_expand_round_trip() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        let covers = vec![
            CoverGraph::cyclic(2, &phi01(), 3).unwrap(),
            CoverGraph::from_perms(2, vec![vec![1, 2, 0], vec![1, 0, 2]], 0).unwrap(),
            CoverGraph::from_perms(3, vec![vec![1, 0], vec![0, 1], vec![1, 0]], 0).unwrap(),
        ];
        for cover in covers {
            let rank = cover.rank();
            let mut found = 0;
            while found < 10 {
                let len = rng.gen_range(2..10);
                let letters: Vec<_> = (0..len)
                    .map(|_| Letter::new(rng.gen_range(1..=rank), rng.gen_bool(0.5)))
                    .collect();
                let w = Word::from_letters(rank, letters);
                if w.is_empty() || cover.act(cover.basepoint(), &w) != cover.basepoint() {
                    continue;
                }
                found += 1;
                let rewritten = rewrite_in_schreier_basis(&cover, &w).unwrap();
                assert_eq!(expand_schreier_word(&cover, &rewritten), w);
            }
        }
    }
}
