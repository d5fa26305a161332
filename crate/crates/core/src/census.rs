//! Bounded-length census: enumerate cyclically reduced words up to length
//! `max_len` modulo rotation, inversion, and signed generator permutations,
//! run the criterion battery on one representative per class, and tabulate
//! which criteria fire.

use serde::Serialize;

use crate::report::{analyze_word, ReportError};
use crate::words::{Letter, Word};

/// One census line; the column order matches the CSV.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CensusRow {
    pub word: String,
    pub len: usize,
    pub proper_power: bool,
    pub commutator: bool,
    pub one_ended: bool,
    pub crit_d: bool,
    pub crit_e: bool,
    pub crit_c16: bool,
    pub crit_bs: bool,
    pub certified: bool,
}

pub const CSV_HEADER: &str =
    "word,len,proper_power,commutator,one_ended,crit_D,crit_E,crit_C16,crit_BS,certified";

fn enumerate_cyclically_reduced(rank: usize, len: usize) -> Vec<Word> {
    let mut letters: Vec<Letter> = Vec::new();
    for g in 1..=rank {
        letters.push(Letter::new(g, true));
        letters.push(Letter::new(g, false));
    }
    let mut out = Vec::new();
    let mut current: Vec<Letter> = Vec::with_capacity(len);
    fn rec(
        letters: &[Letter],
        rank: usize,
        len: usize,
        current: &mut Vec<Letter>,
        out: &mut Vec<Word>,
    ) {
        if current.len() == len {
            if len == 1 || current[0] != current[len - 1].inverse() {
                out.push(Word::from_letters(rank, current.clone()));
            }
            return;
        }
        for &l in letters {
            if let Some(&last) = current.last() {
                if last == l.inverse() {
                    continue;
                }
            }
            current.push(l);
            rec(letters, rank, len, current, out);
            current.pop();
        }
    }
    rec(&letters, rank, len, &mut current, &mut out);
    out
}

/// Ordering for canonical representatives: positive letters before inverses,
/// then by generator.
fn letter_sort_key(l: Letter) -> (usize, u8) {
    (l.gen_index(), u8::from(!l.is_positive()))
}

fn seq_key(letters: &[Letter]) -> Vec<(usize, u8)> {
    letters.iter().map(|&l| letter_sort_key(l)).collect()
}

/// Canonical key: lexicographic minimum over signed generator permutations,
/// rotations, and inversion.
fn canonical_key(w: &Word) -> Vec<Letter> {
    let mut best: Option<Vec<Letter>> = None;
    for images in crate::whitehead::signed_permutations(w.rank()) {
        let image = w.substitute(&images);
        for candidate in [image.clone(), image.inverse()] {
            for r in 0..candidate.len().max(1) {
                let rot = candidate.rotate(r).letters().to_vec();
                if best
                    .as_ref()
                    .is_none_or(|b| seq_key(&rot) < seq_key(b))
                {
                    best = Some(rot);
                }
            }
        }
    }
    best.unwrap_or_default()
}

/// One representative per symmetry class of cyclically reduced words of
/// each length `1..=max_len`.
pub fn class_representatives(rank: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        for w in enumerate_cyclically_reduced(rank, len) {
            if w.letters() == canonical_key(&w).as_slice() {
                out.push(w);
            }
        }
    }
    out
}

/// Runs the criterion battery on one word and flattens the flags.
pub fn census_row(w: &Word) -> Result<CensusRow, ReportError> {
    let report = analyze_word(w)?;
    let fired = |name: &str| {
        report
            .criteria
            .iter()
            .find(|c| c.name == name)
            .is_some_and(|c| c.fired)
    };
    Ok(CensusRow {
        word: report.word.clone(),
        len: w.len(),
        proper_power: report.flags.proper_power,
        commutator: report.flags.in_commutator_subgroup,
        one_ended: report.flags.one_ended,
        crit_d: fired("roots_of_unity"),
        crit_e: fired("alexander_mod_p"),
        crit_c16: fired("positive_c16"),
        crit_bs: fired("bs_virtually_geometric"),
        certified: report.certified,
    })
}

/// Full census, serial and canonically ordered.
pub fn census(rank: usize, max_len: usize) -> Result<Vec<CensusRow>, ReportError> {
    let mut rows = class_representatives(rank, max_len)
        .iter()
        .map(census_row)
        .collect::<Result<Vec<_>, _>>()?;
    sort_rows(&mut rows);
    Ok(rows)
}

/// Canonical output order: by length, then word text.
pub fn sort_rows(rows: &mut [CensusRow]) {
    rows.sort_by(|a, b| a.len.cmp(&b.len).then_with(|| a.word.cmp(&b.word)));
}

pub fn rows_to_csv(rows: &[CensusRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.word,
            r.len,
            r.proper_power,
            r.commutator,
            r.one_ended,
            r.crit_d,
            r.crit_e,
            r.crit_c16,
            r.crit_bs,
            r.certified
        ));
    }
    out
}
