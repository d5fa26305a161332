//! Free group words: parsing, free and cyclic reduction, exponent data,
//! proper-power detection, and Nielsen normalization of a basis adapted to a
//! homomorphism onto the integers.
//!
//! A [`Word`] is a freely reduced sequence of signed generators of the free
//! group of a given rank. Generator indices are 1-based; the CLI text syntax
//! maps `a..z` to generators `1..26` (uppercase for inverses), but the library
//! accepts any rank internally.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// A single signed generator: `+i` is the `i`-th generator, `-i` its inverse.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(i32);

impl Letter {
    pub fn new(gen: usize, positive: bool) -> Letter {
        assert!(gen >= 1 && gen <= i32::MAX as usize);
        Letter(if positive { gen as i32 } else { -(gen as i32) })
    }

    /// 1-based generator index.
    pub fn gen_index(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn sign(self) -> i64 {
        if self.0 > 0 {
            1
        } else {
            -1
        }
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gen_index() <= 26 {
            let c = (b'a' + (self.gen_index() - 1) as u8) as char;
            if self.is_positive() {
                write!(f, "{c}")
            } else {
                write!(f, "{}", c.to_ascii_uppercase())
            }
        } else if self.is_positive() {
            write!(f, "g{}", self.gen_index())
        } else {
            write!(f, "g{}^-1", self.gen_index())
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("rank {0} outside supported range 1..=26 for text syntax")]
    RankOutOfRange(usize),
    #[error("invalid character {0:?} in word")]
    InvalidCharacter(char),
    #[error("malformed exponent near {0:?}")]
    ExponentSyntax(String),
    #[error("generator {0} exceeds rank {1}")]
    GeneratorOutOfRank(usize, usize),
    #[error("word is empty")]
    EmptyWord,
    #[error("word is not cyclically reduced")]
    NotCyclicallyReduced,
    #[error("phi is not primitive (gcd of entries is {0})")]
    PhiNotPrimitive(i64),
    #[error("phi does not vanish on the word (phi(w) = {0})")]
    PhiNonZero(i64),
    #[error("exponent vector is zero: word lies in the commutator subgroup")]
    ZeroExponentVector,
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
}

/// A freely reduced word in the free group of rank `rank`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(rank {}, {})", self.rank, self)
    }
}

impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == l {
                run += 1;
            }
            if l.gen_index() <= 26 {
                let c = (b'a' + (l.gen_index() - 1) as u8) as char;
                let c = if l.is_positive() {
                    c
                } else {
                    c.to_ascii_uppercase()
                };
                if run == 1 {
                    write!(f, "{c}")?;
                } else {
                    write!(f, "{c}^{run}")?;
                }
            } else {
                // beyond-alphabet ranks only arise internally
                let e = if l.is_positive() {
                    run as i64
                } else {
                    -(run as i64)
                };
                if e == 1 {
                    write!(f, "<{}>", l.gen_index())?;
                } else {
                    write!(f, "<{}>^{}", l.gen_index(), e)?;
                }
            }
            i += run;
        }
        Ok(())
    }
}

impl Word {
    /// Builds a word from raw letters, freely reducing.
    pub fn from_letters(rank: usize, letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut reduced: Vec<Letter> = Vec::new();
        for l in letters {
            debug_assert!(l.gen_index() >= 1 && l.gen_index() <= rank);
            if reduced.last() == Some(&l.inverse()) {
                reduced.pop();
            } else {
                reduced.push(l);
            }
        }
        Word {
            rank,
            letters: reduced,
        }
    }

    pub fn empty(rank: usize) -> Word {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Concatenation followed by free reduction.
    pub fn concat(&self, other: &Word) -> Word {
        debug_assert_eq!(self.rank, other.rank);
        Word::from_letters(
            self.rank,
            self.letters.iter().chain(other.letters.iter()).copied(),
        )
    }

    pub fn pow(&self, n: u32) -> Word {
        let mut out = Word::empty(self.rank);
        for _ in 0..n {
            out = out.concat(self);
        }
        out
    }

    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.concat(self).concat(&g.inverse())
    }

    /// Rotation of the letter sequence by `k` (only meaningful on cyclically
    /// reduced words, where it stays reduced).
    pub fn rotate(&self, k: usize) -> Word {
        if self.letters.is_empty() {
            return self.clone();
        }
        let k = k % self.letters.len();
        let mut letters = Vec::with_capacity(self.letters.len());
        letters.extend_from_slice(&self.letters[k..]);
        letters.extend_from_slice(&self.letters[..k]);
        Word::from_letters(self.rank, letters)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(a), Some(z)) => self.letters.len() == 1 || *a != z.inverse(),
            _ => true,
        }
    }

    /// Substitutes `images[i]` for generator `i+1` and freely reduces.
    ///
    /// `images` must have one entry per generator of `self`; the result lives
    /// in the rank of the images.
    pub fn substitute(&self, images: &[Word]) -> Word {
        assert_eq!(images.len(), self.rank);
        let out_rank = images.first().map_or(self.rank, |w| w.rank);
        let mut letters = Vec::new();
        for l in &self.letters {
            let img = &images[l.gen_index() - 1];
            if l.is_positive() {
                letters.extend_from_slice(img.letters());
            } else {
                letters.extend(img.letters.iter().rev().map(|x| x.inverse()));
            }
        }
        Word::from_letters(out_rank, letters)
    }
}

/// Parses the CLI word syntax: `a..z` lowercase for generators, uppercase for
/// inverses, optional `^k` integer exponents, optional whitespace.
pub fn parse_word(text: &str, rank: usize) -> Result<Word, WordError> {
    if rank < 1 || rank > 26 {
        return Err(WordError::RankOutOfRange(rank));
    }
    let mut letters: Vec<Letter> = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        // "1" denotes the identity, matching the printed form of the empty word
        if c == '1' {
            i += 1;
            continue;
        }
        if !c.is_ascii_alphabetic() {
            return Err(WordError::InvalidCharacter(c));
        }
        let gen = (c.to_ascii_lowercase() as u8 - b'a') as usize + 1;
        if gen > rank {
            return Err(WordError::GeneratorOutOfRank(gen, rank));
        }
        let positive = c.is_ascii_lowercase();
        i += 1;
        let mut exponent: i64 = 1;
        if i < chars.len() && chars[i] == '^' {
            let start = i;
            i += 1;
            let mut digits = String::new();
            if i < chars.len() && (chars[i] == '-' || chars[i] == '+') {
                digits.push(chars[i]);
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                digits.push(chars[i]);
                i += 1;
            }
            exponent = digits
                .parse::<i64>()
                .map_err(|_| WordError::ExponentSyntax(chars[start..i.min(chars.len())].iter().collect()))?;
        }
        let letter = Letter::new(gen, positive == (exponent >= 0));
        for _ in 0..exponent.unsigned_abs() {
            letters.push(letter);
        }
    }
    Ok(Word::from_letters(rank, letters))
}

/// Splits `w` as `conjugator * core * conjugator^-1` with `core` cyclically
/// reduced.
pub fn cyclic_reduce(w: &Word) -> (Word, Word) {
    let mut letters = w.letters.clone();
    let mut prefix: Vec<Letter> = Vec::new();
    while letters.len() >= 2 && *letters.first().unwrap() == letters.last().unwrap().inverse() {
        prefix.push(letters.remove(0));
        letters.pop();
    }
    (
        Word {
            rank: w.rank,
            letters,
        },
        Word {
            rank: w.rank,
            letters: prefix,
        },
    )
}

/// Signed count of each generator.
pub fn exponent_vector(w: &Word) -> Vec<i64> {
    let mut v = vec![0i64; w.rank];
    for l in w.letters() {
        v[l.gen_index() - 1] += l.sign();
    }
    v
}

pub fn is_in_commutator_subgroup(w: &Word) -> bool {
    exponent_vector(w).iter().all(|&x| x == 0)
}

/// Smallest period of a sequence via the KMP failure function.
fn smallest_period<T: PartialEq>(s: &[T]) -> usize {
    let n = s.len();
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && s[i] != s[k] {
            k = fail[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i] = k;
    }
    n - fail[n - 1]
}

/// If `w = u^r` with maximal `r >= 2`, returns the root and exponent.
///
/// The cyclic core is a proper power exactly when its letter string is a
/// nontrivial repetition, so the smallest string period decides.
pub fn is_proper_power(w: &Word) -> Option<(Word, u32)> {
    if w.is_empty() {
        return None;
    }
    let (core, conj) = cyclic_reduce(w);
    let n = core.len();
    let p = smallest_period(core.letters());
    if p == n || n % p != 0 {
        return None;
    }
    let r = (n / p) as u32;
    let root_core = Word {
        rank: w.rank,
        letters: core.letters[..p].to_vec(),
    };
    Some((root_core.conjugate_by(&conj), r))
}

/// Homomorphism from the free group to the integers, one value per generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiMap {
    values: Vec<i64>,
}

impl PhiMap {
    /// Requires the entries to have gcd 1 (an epimorphism onto the integers).
    pub fn new(values: Vec<i64>) -> Result<PhiMap, WordError> {
        let g = values.iter().fold(0i64, |acc, &v| gcd_i64(acc, v));
        if g.abs() != 1 {
            return Err(WordError::PhiNotPrimitive(g));
        }
        Ok(PhiMap { values })
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn of_letter(&self, l: Letter) -> i64 {
        self.values[l.gen_index() - 1] * l.sign()
    }

    pub fn of_word(&self, w: &Word) -> i64 {
        w.letters().iter().map(|&l| self.of_letter(l)).sum()
    }
}

pub(crate) fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// The unique-up-to-sign primitive vector orthogonal to the exponent vector
/// of a rank-2 word, normalized so the first nonzero entry is positive.
pub fn phi_for_rank2(w: &Word) -> Result<PhiMap, WordError> {
    if w.rank() != 2 {
        return Err(WordError::RankMismatch {
            expected: 2,
            got: w.rank(),
        });
    }
    let e = exponent_vector(w);
    if e[0] == 0 && e[1] == 0 {
        return Err(WordError::ZeroExponentVector);
    }
    let g = gcd_i64(e[0], e[1]);
    let mut v = [e[1] / g, -e[0] / g];
    let lead = if v[0] != 0 { v[0] } else { v[1] };
    if lead < 0 {
        v[0] = -v[0];
        v[1] = -v[1];
    }
    PhiMap::new(vec![v[0], v[1]])
}

/// A basis change of the free group, recorded as the images of the new basis
/// in the old one.
#[derive(Clone, Debug)]
pub struct BasisWitness {
    /// `images[i]` is the old-basis word for the new generator `i+1`.
    pub images: Vec<Word>,
}

impl BasisWitness {
    pub fn identity(rank: usize) -> BasisWitness {
        BasisWitness {
            images: (1..=rank)
                .map(|g| Word::from_letters(rank, [Letter::new(g, true)]))
                .collect(),
        }
    }

    /// Rewrites a word over the new basis into the old one.
    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(&self.images)
    }
}

/// Rewrites `w` in a basis `x_1, ..., x_{n-1}, z` with `phi(x_i) = 0` and
/// `phi(z) = 1`, realized by running the Euclidean algorithm on the phi
/// vector through elementary Nielsen moves.
///
/// Returns the rewritten word together with the witness mapping the new basis
/// to the old: `phi` composed with the witness takes values `(0,...,0,1)`,
/// and the witness applied to the rewritten word freely reduces to `w`.
pub fn nielsen_normalize(w: &Word, phi: &PhiMap) -> Result<(Word, BasisWitness), WordError> {
    let n = w.rank();
    if phi.rank() != n {
        return Err(WordError::RankMismatch {
            expected: n,
            got: phi.rank(),
        });
    }
    let total = phi.of_word(w);
    if total != 0 {
        return Err(WordError::PhiNonZero(total));
    }

    // psi is the forward automorphism (new basis -> old), tracked by its
    // images; inv tracks psi^{-1} so the rewritten word is inv applied to w.
    let mut values: Vec<i64> = phi.values().to_vec();
    let mut images = BasisWitness::identity(n).images;
    let mut inv = BasisWitness::identity(n).images;

    // Elementary right Nielsen move x_i -> x_i * x_j^sign updates
    // values[i] += sign * values[j]; its inverse is applied to `inv`.
    let apply_move = |values: &mut Vec<i64>,
                          images: &mut Vec<Word>,
                          inv: &mut Vec<Word>,
                          i: usize,
                          j: usize,
                          sign: i64| {
        debug_assert_ne!(i, j);
        values[i] += sign * values[j];
        let xj = if sign > 0 {
            images[j].clone()
        } else {
            images[j].inverse()
        };
        images[i] = images[i].concat(&xj);
        // inverse move: x_i -> x_i * x_j^{-sign}
        let mut sub = BasisWitness::identity(n).images;
        sub[i] = sub[i].concat(&if sign > 0 {
            Word::from_letters(n, [Letter::new(j + 1, false)])
        } else {
            Word::from_letters(n, [Letter::new(j + 1, true)])
        });
        for word in inv.iter_mut() {
            *word = word.substitute(&sub);
        }
    };

    // Euclid: drive all but one entry to zero.
    loop {
        let mut nonzero: Vec<usize> = (0..n).filter(|&i| values[i] != 0).collect();
        if nonzero.len() <= 1 {
            break;
        }
        nonzero.sort_by_key(|&i| values[i].abs());
        let pivot = nonzero[0];
        let target = nonzero[1];
        // |values[target]| >= |values[pivot]| > 0, so q != 0; repeated
        // subtraction stays within elementary moves.
        let q = values[target] / values[pivot];
        let sign = if (values[target] > 0) == (values[pivot] > 0) {
            -1
        } else {
            1
        };
        for _ in 0..q.unsigned_abs() {
            apply_move(&mut values, &mut images, &mut inv, target, pivot, sign);
        }
    }

    let hot = (0..n).position(|i| values[i] != 0).expect("phi is primitive");
    debug_assert_eq!(values[hot].abs(), 1);

    // Flip sign if needed: x -> x^{-1}.
    if values[hot] < 0 {
        values[hot] = -values[hot];
        images[hot] = images[hot].inverse();
        let mut sub = BasisWitness::identity(n).images;
        sub[hot] = sub[hot].inverse();
        for word in inv.iter_mut() {
            *word = word.substitute(&sub);
        }
    }

    // Swap the +-1 entry into the last slot: transposition of basis elements.
    if hot != n - 1 {
        values.swap(hot, n - 1);
        images.swap(hot, n - 1);
        let mut sub = BasisWitness::identity(n).images;
        sub.swap(hot, n - 1);
        for word in inv.iter_mut() {
            *word = word.substitute(&sub);
        }
    }
    debug_assert!(values[..n - 1].iter().all(|&v| v == 0) && values[n - 1] == 1);

    let inv_witness = BasisWitness { images: inv };
    let w_new = inv_witness.apply(w);
    Ok((w_new, BasisWitness { images }))
}

/// Deduplicated set of all cyclic rotations of `w` and of `w^{-1}`.
///
/// Used by the small-cancellation module; lives here because it is pure word
/// combinatorics.
pub fn symmetrized_set(w: &Word) -> Result<BTreeSet<Vec<Letter>>, WordError> {
    if w.is_empty() {
        return Err(WordError::EmptyWord);
    }
    if !w.is_cyclically_reduced() {
        return Err(WordError::NotCyclicallyReduced);
    }
    let mut out = BTreeSet::new();
    let inv = w.inverse();
    for k in 0..w.len() {
        out.insert(w.rotate(k).letters().to_vec());
        out.insert(inv.rotate(k).letters().to_vec());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str, rank: usize) -> Word {
        parse_word(text, rank).unwrap()
    }

    #[test]
    fn parse_transliteration() {
        let word = w("abAB", 2);
        assert_eq!(
            word.letters(),
            &[
                Letter::new(1, true),
                Letter::new(2, true),
                Letter::new(1, false),
                Letter::new(2, false)
            ]
        );
    }

    #[test]
    fn parse_free_reduction() {
        assert!(w("aA", 2).is_empty());
    }

    #[test]
    fn parse_exponents() {
        let word = w("Ba^3bA^2", 2);
        assert_eq!(
            word.letters(),
            &[
                Letter::new(2, false),
                Letter::new(1, true),
                Letter::new(1, true),
                Letter::new(1, true),
                Letter::new(2, true),
                Letter::new(1, false),
                Letter::new(1, false),
            ]
        );
        assert_eq!(w("a^-2", 2), w("AA", 2));
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_word("a!b", 2), Err(WordError::InvalidCharacter('!')));
        assert!(matches!(
            parse_word("a^x", 2),
            Err(WordError::ExponentSyntax(_))
        ));
        assert_eq!(parse_word("c", 2), Err(WordError::GeneratorOutOfRank(3, 2)));
        assert_eq!(parse_word("a", 0), Err(WordError::RankOutOfRange(0)));
        assert_eq!(parse_word("a", 27), Err(WordError::RankOutOfRange(27)));
    }

    #[test]
    fn display_round_trip() {
        for text in ["abAB", "Ba^3bA^2", "a^4B^2a", "b"] {
            let word = w(text, 2);
            assert_eq!(w(&word.to_string(), 2), word);
        }
        assert_eq!(w("", 2).to_string(), "1");
    }

    #[test]
    fn cyclic_reduce_examples() {
        let (core, conj) = cyclic_reduce(&w("abAB", 2));
        assert_eq!(core, w("abAB", 2));
        assert!(conj.is_empty());

        let (core, conj) = cyclic_reduce(&w("abA", 2));
        assert_eq!(core, w("b", 2));
        assert_eq!(conj, w("a", 2));

        let (core, conj) = cyclic_reduce(&w("", 2));
        assert!(core.is_empty() && conj.is_empty());
    }

    #[test]
    fn cyclic_reduce_contract() {
        for text in ["abA", "aabAA", "BaabbA", "abAB"] {
            let word = w(text, 2);
            let (core, conj) = cyclic_reduce(&word);
            assert!(core.is_cyclically_reduced());
            assert_eq!(core.conjugate_by(&conj), word);
        }
    }

    #[test]
    fn exponent_vectors() {
        assert_eq!(exponent_vector(&w("abAB", 2)), vec![0, 0]);
        assert_eq!(exponent_vector(&w("Ba^2ba^3", 2)), vec![5, 0]);
        assert_eq!(exponent_vector(&parse_word("a^3", 1).unwrap()), vec![3]);
    }

    #[test]
    fn commutator_membership() {
        assert!(is_in_commutator_subgroup(&w("abAB", 2)));
        assert!(!is_in_commutator_subgroup(&w("ab", 2)));
        assert!(is_in_commutator_subgroup(&w("a^2b^2A^2B^2", 2)));
    }

    #[test]
    fn proper_power_examples() {
        let (root, r) = is_proper_power(&w("ababab", 2)).unwrap();
        assert_eq!((root, r), (w("ab", 2), 3));

        assert!(is_proper_power(&w("abAB", 2)).is_none());
        assert!(is_proper_power(&w("", 2)).is_none());

        let (root, r) = is_proper_power(&w("ba^3B", 2)).unwrap();
        assert_eq!(r, 3);
        assert_eq!(root, w("baB", 2));
    }

    #[test]
    fn proper_power_randomized() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let len = rng.gen_range(1..6);
            let mut letters = Vec::new();
            for _ in 0..len {
                letters.push(Letter::new(rng.gen_range(1..=2), rng.gen_bool(0.5)));
            }
            let u = Word::from_letters(2, letters);
            if u.is_empty() {
                continue;
            }
            let r = rng.gen_range(2..=4u32);
            let power = u.pow(r);
            if power.is_empty() {
                continue;
            }
            let (_, found) = is_proper_power(&power).expect("power must be detected");
            assert_eq!(found % r, 0, "u={u} r={r} power={power} found={found}");
        }
    }

    #[test]
    fn phi_for_rank2_examples() {
        assert_eq!(phi_for_rank2(&w("Ba^2ba^3", 2)).unwrap().values(), &[0, 1]);
        // Baumslag word has exponent vector (-1, 0)
        let baumslag = w("A^2BAbaBab", 2);
        assert_eq!(exponent_vector(&baumslag), vec![-1, 0]);
        assert_eq!(phi_for_rank2(&baumslag).unwrap().values(), &[0, 1]);
        // exponent vector (2, -4)
        let word = w("a^2b^-4", 2);
        assert_eq!(phi_for_rank2(&word).unwrap().values(), &[2, 1]);
        assert_eq!(
            phi_for_rank2(&w("abAB", 2)),
            Err(WordError::ZeroExponentVector)
        );
    }

    fn check_normalization(word: &Word, phi: &PhiMap) {
        let (w_new, witness) = nielsen_normalize(word, phi).unwrap();
        let n = word.rank();
        for (i, img) in witness.images.iter().enumerate() {
            let expected = if i == n - 1 { 1 } else { 0 };
            assert_eq!(phi.of_word(img), expected, "phi of witness image {i}");
        }
        assert_eq!(&witness.apply(&w_new), word);
    }

    #[test]
    fn nielsen_normalize_identity_case() {
        let phi = PhiMap::new(vec![0, 1]).unwrap();
        let word = w("Ba^2ba^3", 2);
        let (w_new, witness) = nielsen_normalize(&word, &phi).unwrap();
        assert_eq!(w_new, word);
        assert_eq!(witness.images[0], w("a", 2));
        assert_eq!(witness.images[1], w("b", 2));
    }

    #[test]
    fn nielsen_normalize_rank2() {
        let phi = PhiMap::new(vec![1, 1]).unwrap();
        let word = w("aB", 2);
        check_normalization(&word, &phi);
    }

    #[test]
    fn nielsen_normalize_rank3() {
        let phi = PhiMap::new(vec![2, 3, 0]).unwrap();
        // phi(w) = 0 for w = a^3 B^2 (3*2 - 2*3 = 0)
        let word = parse_word("a^3b^-2", 3).unwrap();
        check_normalization(&word, &phi);
        // a few more phi vectors
        for (vals, text) in [
            (vec![3, -2, 1], "abc"),
            (vec![5, 3, 7], "a^2B^3c^-1ba"),
            (vec![1, 0, 0], "bcBC"),
        ] {
            let phi = PhiMap::new(vals).unwrap();
            let word = parse_word(text, 3).unwrap();
            if phi.of_word(&word) == 0 {
                check_normalization(&word, &phi);
            }
        }
    }

    #[test]
    fn nielsen_normalize_rejects_bad_inputs() {
        let phi = PhiMap::new(vec![0, 1]).unwrap();
        assert_eq!(
            nielsen_normalize(&w("b", 2), &phi).unwrap_err(),
            WordError::PhiNonZero(1)
        );
        assert_eq!(PhiMap::new(vec![2, 4]), Err(WordError::PhiNotPrimitive(2)));
    }

    #[test]
    fn symmetrized_set_examples() {
        assert_eq!(symmetrized_set(&w("ab", 2)).unwrap().len(), 4);
        assert_eq!(symmetrized_set(&w("a^3", 2)).unwrap().len(), 2);
        assert_eq!(symmetrized_set(&w("abAB", 2)).unwrap().len(), 8);
        assert_eq!(
            symmetrized_set(&w("abA", 2)),
            Err(WordError::NotCyclicallyReduced)
        );
    }

    proptest::proptest! {
        #[test]
        fn parse_print_parse_identity(letters in proptest::collection::vec((1usize..=3, proptest::bool::ANY), 0..20)) {
            let word = Word::from_letters(3, letters.into_iter().map(|(g, s)| Letter::new(g, s)));
            let text = word.to_string();
            let reparsed = parse_word(&text, 3).unwrap();
            proptest::prop_assert_eq!(reparsed, word);
        }

        #[test]
        fn cyclic_core_no_longer(letters in proptest::collection::vec((1usize..=3, proptest::bool::ANY), 0..20)) {
            let word = Word::from_letters(3, letters.into_iter().map(|(g, s)| Letter::new(g, s)));
            let (core, _) = cyclic_reduce(&word);
            proptest::prop_assert!(core.len() <= word.len());
        }
    }
}
