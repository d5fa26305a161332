//! Positive-word metric small-cancellation detection: piece data for the
//! symmetrized set of a relator and the C'(1/6) criterion.
//!
//! A piece is a common initial segment of two distinct elements of the
//! symmetrized set, compared at syllable boundaries: only rotations that
//! start a maximal run participate (equivalently, elements that do not begin
//! and end with the same letter), so each power of a generator is matched as
//! a block from its start. Proper powers are rejected up front: rotating a
//! power by its period reproduces the whole relator as an overlap.
//! Enumeration is brute force over element pairs; relators are desk-scale.

use serde::Serialize;
use serde_json::json;

use crate::report::CriterionVerdict;
use crate::whitehead::whitehead_minimize;
use crate::words::{cyclic_reduce, is_proper_power, Letter, Word, WordError};

pub use crate::words::symmetrized_set;

/// A maximal piece together with the two symmetrized-set elements it
/// prefixes. Families: 0 is the word itself, 1 its inverse; positions index
/// the rotation start in the cyclic letters.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PieceWitness {
    pub piece: String,
    pub length: usize,
    pub first: (u8, usize),
    pub second: (u8, usize),
}

/// Piece census of a cyclically reduced relator.
#[derive(Clone, Debug, Serialize)]
pub struct PieceData {
    pub relator_length: usize,
    pub symmetrized_set_size: usize,
    pub max_piece_length: usize,
    /// Distinct maximal pieces (one witness pair each); every prefix of a
    /// piece is a piece as well.
    pub pieces: Vec<PieceWitness>,
}

/// Rotation start positions at syllable boundaries of the cyclic word: the
/// letter differs from its cyclic predecessor.
fn aligned_starts(letters: &[Letter]) -> Vec<usize> {
    let m = letters.len();
    (0..m)
        .filter(|&i| letters[i] != letters[(i + m - 1) % m])
        .collect()
}

fn rotation(letters: &[Letter], start: usize) -> Vec<Letter> {
    let m = letters.len();
    (0..m).map(|x| letters[(start + x) % m]).collect()
}

fn common_prefix_len(a: &[Letter], b: &[Letter]) -> usize {
    a.iter().zip(b.iter()).take_while(|(x, y)| x == y).count()
}

/// Enumerates pieces of the relator and reports the maximum piece length
/// with witnesses.
pub fn max_piece_length(w: &Word) -> Result<PieceData, WordError> {
    if w.is_empty() {
        return Err(WordError::EmptyWord);
    }
    if !w.is_cyclically_reduced() {
        return Err(WordError::NotCyclicallyReduced);
    }
    let set_size = symmetrized_set(w)?.len();
    let fwd = w.letters().to_vec();
    let inv = w.inverse().letters().to_vec();

    // one entry per syllable-aligned rotation of w and of its inverse
    let mut elements: Vec<(u8, usize, Vec<Letter>)> = Vec::new();
    for (family, seq) in [(0u8, &fwd), (1u8, &inv)] {
        for start in aligned_starts(seq) {
            elements.push((family, start, rotation(seq, start)));
        }
    }

    let mut best = 0usize;
    let mut witnesses: Vec<PieceWitness> = Vec::new();
    for a in 0..elements.len() {
        for b in a + 1..elements.len() {
            if elements[a].2 == elements[b].2 {
                continue;
            }
            let len = common_prefix_len(&elements[a].2, &elements[b].2);
            if len == 0 || len < best {
                continue;
            }
            if len > best {
                best = len;
                witnesses.clear();
            }
            let piece_letters = elements[a].2[..len].to_vec();
            let rank = piece_letters.iter().map(|l| l.gen_index()).max().unwrap();
            let piece = Word::from_letters(rank, piece_letters).to_string();
            if !witnesses.iter().any(|p| p.piece == piece) {
                witnesses.push(PieceWitness {
                    piece,
                    length: len,
                    first: (elements[a].0, elements[a].1),
                    second: (elements[b].0, elements[b].1),
                });
            }
        }
    }

    Ok(PieceData {
        relator_length: w.len(),
        symmetrized_set_size: set_size,
        max_piece_length: best,
        pieces: witnesses,
    })
}

/// The positive C'(1/6) criterion: fires when the cyclic core is a positive
/// word that is not a proper power, every piece is strictly shorter than one
/// sixth of the relator, and the relator is not primitive (a primitive
/// relator presents a cyclic group, where the largeness conclusion fails).
pub fn criterion_positive_c16(w: &Word) -> CriterionVerdict {
    let name = "positive_c16";
    let (core, _) = cyclic_reduce(w);
    if core.is_empty() {
        return CriterionVerdict::inapplicable(name, "empty word".into());
    }
    let positive = core.letters().iter().all(|l| l.is_positive());
    let data = match max_piece_length(&core) {
        Ok(data) => data,
        Err(e) => return CriterionVerdict::inapplicable(name, e.to_string()),
    };
    let metric_ok = 6 * data.max_piece_length < data.relator_length;
    let power = is_proper_power(&core);
    let fraction = format!("{}/{}", data.max_piece_length, data.relator_length);

    let mut notes = Vec::new();
    let mut fired = positive && metric_ok && power.is_none();
    if !positive {
        notes.push("word is not positive".into());
    } else if let Some((root, r)) = &power {
        notes.push(format!(
            "proper power ({root})^{r}: rotating by the period overlaps the relator with itself, so the metric condition fails"
        ));
    } else if !metric_ok {
        notes.push(format!(
            "metric condition fails: max piece {} vs |w|/6 = {}/6",
            data.max_piece_length, data.relator_length
        ));
    }
    if fired && core.rank() <= 2 {
        // a relator whose orbit minimum is a single letter is primitive and
        // the two-generator one-relator group is infinite cyclic
        let (min, _) = whitehead_minimize(&core).expect("core is nonempty");
        if min.len() == 1 {
            fired = false;
            notes.push(
                "degenerate: relator is primitive, the one-relator group is cyclic and not large"
                    .into(),
            );
        }
    }
    if fired {
        notes.push(format!(
            "positive C'(1/6) word: every piece has length < {}/6, so the one-relator group is large",
            data.relator_length
        ));
    }
    CriterionVerdict {
        name: name.into(),
        applicable: true,
        fired,
        certificate: json!({
            "positive": positive,
            "proper_power": power.is_some(),
            "max_piece_length": data.max_piece_length,
            "relator_length": data.relator_length,
            "fraction": fraction,
            "symmetrized_set_size": data.symmetrized_set_size,
            "pieces": serde_json::to_value(&data.pieces).unwrap(),
        }),
        notes,
    }
}

/// Whether the full criterion fires (positivity, no proper power, metric
/// bound, non-degenerate).
pub fn is_positive_c16(w: &Word) -> Result<bool, WordError> {
    let (core, _) = cyclic_reduce(w);
    if core.is_empty() {
        return Err(WordError::EmptyWord);
    }
    Ok(criterion_positive_c16(w).fired)
}
