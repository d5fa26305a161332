//! Free-factor membership via Whitehead's algorithm: minimize the cyclic
//! word with length-reducing Whitehead automorphisms, then decide whether
//! the word lies in a proper free factor. The double of the free group
//! along `w` is one-ended exactly when it does not.
//!
//! The decision runs in three stages: a minimal form omitting a generator
//! certifies membership; a connected, cut-vertex-free Whitehead graph at
//! minimal length certifies non-membership; otherwise the whole minimal
//! level of the orbit is searched under length-preserving moves.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use crate::words::{cyclic_reduce, Letter, Word, WordError};

/// Graph on the `2n` signed letters with one edge per adjacent pair of the
/// cyclic word: the pair `x.y` contributes the edge between the vertex of
/// `x^{-1}` and the vertex of `y`.
#[derive(Clone, Debug, Serialize)]
pub struct WhiteheadGraph {
    pub rank: usize,
    /// Multiplicity-weighted adjacency over the `2n` letter vertices;
    /// vertex `2(g-1)` is the positive letter, `2(g-1)+1` its inverse.
    pub adjacency: Vec<Vec<usize>>,
    pub edge_count: usize,
}

fn vertex_of(l: Letter) -> usize {
    2 * (l.gen_index() - 1) + usize::from(!l.is_positive())
}

impl WhiteheadGraph {
    /// Requires a cyclically reduced word.
    pub fn new(w: &Word) -> Result<WhiteheadGraph, WordError> {
        if w.is_empty() {
            return Err(WordError::EmptyWord);
        }
        if !w.is_cyclically_reduced() {
            return Err(WordError::NotCyclicallyReduced);
        }
        let n = w.rank();
        let mut adjacency = vec![vec![0usize; 2 * n]; 2 * n];
        let ls = w.letters();
        for i in 0..ls.len() {
            let x = ls[i];
            let y = ls[(i + 1) % ls.len()];
            let (u, v) = (vertex_of(x.inverse()), vertex_of(y));
            adjacency[u][v] += 1;
            adjacency[v][u] += 1;
        }
        Ok(WhiteheadGraph {
            rank: n,
            adjacency,
            edge_count: ls.len(),
        })
    }

    pub fn is_connected(&self) -> bool {
        let verts = 2 * self.rank;
        let mut seen = vec![false; verts];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for u in 0..verts {
                if self.adjacency[v][u] > 0 && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    /// Whether removing some single vertex disconnects the rest. Only
    /// meaningful on connected graphs; callers check connectivity first.
    pub fn has_cut_vertex(&self) -> bool {
        let verts = 2 * self.rank;
        for cut in 0..verts {
            let Some(start) = (0..verts).find(|&v| v != cut) else {
                continue;
            };
            let mut seen = vec![false; verts];
            seen[cut] = true;
            seen[start] = true;
            let mut reached = 1;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for u in 0..verts {
                    if u != cut && self.adjacency[v][u] > 0 && !seen[u] {
                        seen[u] = true;
                        reached += 1;
                        stack.push(u);
                    }
                }
            }
            if reached < verts - 1 {
                return true;
            }
        }
        false
    }
}

/// A type II Whitehead automorphism, determined by a multiplier letter and a
/// set of letters containing it but not its inverse. Letters are encoded as
/// signed generator indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeIIMove {
    pub multiplier: i32,
    pub set: Vec<i32>,
}

fn letter_code(l: Letter) -> i32 {
    let g = l.gen_index() as i32;
    if l.is_positive() {
        g
    } else {
        -g
    }
}

fn letter_from_code(c: i32) -> Letter {
    Letter::new(c.unsigned_abs() as usize, c > 0)
}

impl TypeIIMove {
    /// Images of the positive generators under this move: a letter in the
    /// set picks up the multiplier on the right, a letter whose inverse is
    /// in the set picks up the inverse multiplier on the left.
    pub fn images(&self, rank: usize) -> Vec<Word> {
        let a = letter_from_code(self.multiplier);
        let in_set = |l: Letter| self.set.contains(&letter_code(l));
        (1..=rank)
            .map(|g| {
                let pos = Letter::new(g, true);
                if g == a.gen_index() {
                    return Word::from_letters(rank, [pos]);
                }
                let mut letters = Vec::new();
                if in_set(pos.inverse()) {
                    letters.push(a.inverse());
                }
                letters.push(pos);
                if in_set(pos) {
                    letters.push(a);
                }
                Word::from_letters(rank, letters)
            })
            .collect()
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(&self.images(w.rank()))
    }
}

/// All type II moves for the given rank.
fn all_type_ii_moves(rank: usize) -> Vec<TypeIIMove> {
    let mut letters = Vec::new();
    for g in 1..=rank {
        letters.push(Letter::new(g, true));
        letters.push(Letter::new(g, false));
    }
    let mut moves = Vec::new();
    for &a in &letters {
        let others: Vec<Letter> = letters
            .iter()
            .copied()
            .filter(|&l| l.gen_index() != a.gen_index())
            .collect();
        for mask in 0..(1u32 << others.len()) {
            let mut set = vec![letter_code(a)];
            for (bit, &l) in others.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    set.push(letter_code(l));
                }
            }
            moves.push(TypeIIMove {
                multiplier: letter_code(a),
                set,
            });
        }
    }
    moves
}

/// Signed generator permutations (the type I moves), as image vectors.
pub(crate) fn signed_permutations(rank: usize) -> Vec<Vec<Word>> {
    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 1 {
            return vec![vec![0]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }
    let mut out = Vec::new();
    for perm in permutations(rank) {
        for signs in 0..(1u32 << rank) {
            let images: Vec<Word> = (0..rank)
                .map(|i| {
                    Word::from_letters(rank, [Letter::new(perm[i] + 1, signs & (1 << i) == 0)])
                })
                .collect();
            out.push(images);
        }
    }
    out
}

fn cyclic_core(w: &Word) -> Word {
    cyclic_reduce(w).0
}

/// Lexicographic minimum over all rotations of the core and of its inverse:
/// the dedup key for orbit exploration.
fn canonical_form(w: &Word) -> Vec<Letter> {
    let core = cyclic_core(w);
    if core.is_empty() {
        return Vec::new();
    }
    let mut best: Option<Vec<Letter>> = None;
    for word in [core.clone(), core.inverse()] {
        for r in 0..word.len() {
            let rot = word.rotate(r).letters().to_vec();
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap()
}

/// Applies the length-reducing move with the greatest saving until none
/// shortens the cyclic word; peak reduction guarantees the result has
/// globally minimal cyclic length in the automorphism orbit.
pub fn whitehead_minimize(w: &Word) -> Result<(Word, Vec<TypeIIMove>), WordError> {
    if w.is_empty() {
        return Err(WordError::EmptyWord);
    }
    let moves = all_type_ii_moves(w.rank());
    let mut current = cyclic_core(w);
    let mut log = Vec::new();
    loop {
        let mut best: Option<(usize, &TypeIIMove, Word)> = None;
        for m in &moves {
            let image = cyclic_core(&m.apply(&current));
            if image.len() < current.len()
                && best.as_ref().is_none_or(|(len, _, _)| image.len() < *len)
            {
                best = Some((image.len(), m, image));
            }
        }
        match best {
            Some((_, m, image)) => {
                log.push(m.clone());
                current = image;
            }
            None => return Ok((current, log)),
        }
    }
}

fn omitted_generator(w: &Word) -> Option<usize> {
    let mut used = vec![false; w.rank()];
    for l in w.letters() {
        used[l.gen_index() - 1] = true;
    }
    used.iter().position(|&b| !b).map(|i| i + 1)
}

/// Certificate for the free-factor decision.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind")]
pub enum FactorCertificate {
    /// A minimal-length orbit representative omitting a generator.
    OmitsGenerator {
        representative: String,
        omitted_generator: usize,
        minimization_moves: usize,
    },
    /// The Whitehead graph of the minimal form is connected with no cut
    /// vertex, which certifies non-membership.
    RigidWhiteheadGraph { graph: WhiteheadGraph },
    /// The whole minimal level of the orbit was searched and no element
    /// omits a generator.
    OrbitExhausted { explored: usize },
}

/// Decides whether `w` lies in a proper free factor of its free group.
pub fn in_proper_free_factor(w: &Word) -> Result<(bool, FactorCertificate), WordError> {
    let (min, log) = whitehead_minimize(w)?;
    if let Some(g) = omitted_generator(&min) {
        return Ok((
            true,
            FactorCertificate::OmitsGenerator {
                representative: min.to_string(),
                omitted_generator: g,
                minimization_moves: log.len(),
            },
        ));
    }
    let graph = WhiteheadGraph::new(&min)?;
    if graph.is_connected() && !graph.has_cut_vertex() {
        return Ok((false, FactorCertificate::RigidWhiteheadGraph { graph }));
    }
    let mut found = None;
    let mut explored = 0usize;
    orbit_for_each(&min, |w| {
        explored += 1;
        if omitted_generator(w).is_some() {
            found = Some(w.clone());
            false
        } else {
            true
        }
    });
    match found {
        Some(found) => {
            let omitted = omitted_generator(&found).expect("search returns omitting words");
            Ok((
                true,
                FactorCertificate::OmitsGenerator {
                    representative: found.to_string(),
                    omitted_generator: omitted,
                    minimization_moves: log.len(),
                },
            ))
        }
        None => Ok((false, FactorCertificate::OrbitExhausted { explored })),
    }
}

/// Visits every element of the minimal level reachable by length-preserving
/// type II and type I moves, deduplicated up to rotation and inversion.
/// The callback returns false to stop early.
pub(crate) fn orbit_for_each(min: &Word, mut visit: impl FnMut(&Word) -> bool) {
    let rank = min.rank();
    let type_ii = all_type_ii_moves(rank);
    let type_i = signed_permutations(rank);
    let target = min.len();
    let mut seen: HashSet<Vec<Letter>> = HashSet::new();
    let mut queue = VecDeque::new();
    let start = canonical_form(min);
    seen.insert(start.clone());
    queue.push_back(Word::from_letters(rank, start));
    while let Some(cur) = queue.pop_front() {
        if !visit(&cur) {
            return;
        }
        let push = |image: Word, seen: &mut HashSet<Vec<Letter>>, queue: &mut VecDeque<Word>| {
            if image.len() != target {
                return;
            }
            let key = canonical_form(&image);
            if seen.insert(key.clone()) {
                queue.push_back(Word::from_letters(rank, key));
            }
        };
        for m in &type_ii {
            push(cyclic_core(&m.apply(&cur)), &mut seen, &mut queue);
        }
        for images in &type_i {
            push(cyclic_core(&cur.substitute(images)), &mut seen, &mut queue);
        }
    }
}

/// One-endedness of the double: the complement of free-factor membership.
pub fn is_one_ended_double(w: &Word) -> Result<bool, WordError> {
    Ok(!in_proper_free_factor(w)?.0)
}

/// Exhaustive census of the minimal level: the Whitehead-minimal form, an
/// omitting representative when one exists anywhere in the level, and the
/// number of classes explored. Used to cross-check the graph shortcut.
#[derive(Clone, Debug)]
pub struct MinimalLevel {
    pub minimal: Word,
    pub omitting: Option<Word>,
    pub explored: usize,
}

pub fn search_minimal_level(w: &Word) -> Result<MinimalLevel, WordError> {
    let (minimal, _) = whitehead_minimize(w)?;
    let mut omitting = None;
    let mut explored = 0usize;
    orbit_for_each(&minimal, |x| {
        explored += 1;
        if omitting.is_none() && omitted_generator(x).is_some() {
            omitting = Some(x.clone());
        }
        true
    });
    Ok(MinimalLevel {
        minimal,
        omitting,
        explored,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn w2(text: &str) -> Word {
        parse_word(text, 2).unwrap()
    }

    #[test]
    fn minimize_examples() {
        let (min, log) = whitehead_minimize(&w2("abAB")).unwrap();
        assert_eq!(min.len(), 4);
        assert!(log.is_empty());

        let (min, log) = whitehead_minimize(&w2("abab")).unwrap();
        assert_eq!(min.len(), 2);
        assert!(!log.is_empty());
        assert!(omitted_generator(&min).is_some());

        let (min, _) = whitehead_minimize(&w2("a")).unwrap();
        assert_eq!(min, w2("a"));

        assert_eq!(whitehead_minimize(&w2("")), Err(WordError::EmptyWord));
    }

    #[test]
    fn minimize_never_increases_and_symmetry_invariant() {
        for text in ["abAB", "aabb", "ababab", "aabAB", "Ba^2ba^3"] {
            let word = w2(text);
            let (min, _) = whitehead_minimize(&word).unwrap();
            assert!(min.len() <= word.len());
            for r in 0..word.len() {
                let (m2, _) = whitehead_minimize(&word.rotate(r)).unwrap();
                assert_eq!(m2.len(), min.len(), "rotation {r} of {text}");
            }
            let (m3, _) = whitehead_minimize(&word.inverse()).unwrap();
            assert_eq!(m3.len(), min.len(), "inverse of {text}");
        }
    }

    #[test]
    fn whitehead_graph_of_commutator() {
        let g = WhiteheadGraph::new(&w2("abAB")).unwrap();
        assert_eq!(g.edge_count, 4);
        assert!(g.is_connected());
        assert!(!g.has_cut_vertex());
    }

    #[test]
    fn free_factor_examples() {
        let (verdict, cert) = in_proper_free_factor(&w2("a")).unwrap();
        assert!(verdict);
        assert!(matches!(
            cert,
            FactorCertificate::OmitsGenerator {
                omitted_generator: 2,
                ..
            }
        ));

        let (verdict, cert) = in_proper_free_factor(&w2("abAB")).unwrap();
        assert!(!verdict);
        assert!(matches!(cert, FactorCertificate::RigidWhiteheadGraph { .. }));

        let (verdict, _) = in_proper_free_factor(&w2("abab")).unwrap();
        assert!(verdict);
    }

    #[test]
    fn one_endedness() {
        assert!(is_one_ended_double(&w2("abAB")).unwrap());
        assert!(!is_one_ended_double(&w2("a")).unwrap());
        for (p, q) in [(1, 1), (2, 3), (2, 4), (3, 5)] {
            let word = parse_word(&format!("Ba^{p}ba^{q}"), 2).unwrap();
            assert!(is_one_ended_double(&word).unwrap(), "BS({p},{q})");
        }
    }

    #[test]
    fn primitive_images_are_in_factors() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let moves = all_type_ii_moves(2);
        for _ in 0..25 {
            let mut word = w2("a");
            for _ in 0..rng.gen_range(1..6) {
                let m = &moves[rng.gen_range(0..moves.len())];
                word = m.apply(&word);
            }
            let core = cyclic_core(&word);
            if core.is_empty() {
                continue;
            }
            let (verdict, _) = in_proper_free_factor(&core).unwrap();
            assert!(verdict, "automorphic image of a generator: {core}");
        }
    }

    #[test]
    fn conjugation_invariance() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        for text in ["abAB", "abab", "aabb", "Ba^2ba^3"] {
            let word = w2(text);
            let expected = in_proper_free_factor(&word).unwrap().0;
            for _ in 0..5 {
                let len = rng.gen_range(1..5);
                let letters: Vec<_> = (0..len)
                    .map(|_| Letter::new(rng.gen_range(1..=2), rng.gen_bool(0.5)))
                    .collect();
                let g = Word::from_letters(2, letters);
                let conj = word.conjugate_by(&g);
                if conj.is_empty() {
                    continue;
                }
                assert_eq!(
                    in_proper_free_factor(&conj).unwrap().0,
                    expected,
                    "{text} conj {g}"
                );
            }
        }
    }
}
