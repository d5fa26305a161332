//! Combinatorial Heegaard diagrams for Baumslag-Solitar words: for coprime
//! positive `p`, `q`, the word `b^-1 a^p b a^q` raised to the power `pq`
//! lifts to an embedded simple closed curve on the boundary of a
//! genus-(pq+1) handlebody. This module rewrites the lift in a Schreier
//! basis, builds the diagram of arcs on the cut-open handlebody, and
//! verifies it: single curve, embeddedness (order-reversing gluings plus a
//! ribbon-graph planarity count), and agreement with the rewritten word.

use serde::Serialize;
use thiserror::Error;

use crate::covers::{rewrite_in_schreier_basis, CoverGraph, EdgeId};
use crate::words::{Letter, PhiMap, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HeegaardError {
    #[error("p and q must be positive")]
    NonPositive,
    #[error("p = {0} and q = {1} are not coprime; the power pq is not minimal")]
    NotCoprime(u64, u64),
    #[error("diagram verification failed: {0}")]
    VerificationFailed(String),
}

/// The two orbit partitions of the residues mod `n = pq`: orbits of adding
/// `p` (each of size `q`) labelled by `k = 1..p`, and orbits of adding `q`
/// (each of size `p`) labelled by `l = 1..q`.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitData {
    pub n: u64,
    pub omega: Vec<Vec<u64>>,
    pub lambda: Vec<Vec<u64>>,
}

pub fn orbits(p: u64, q: u64) -> Result<OrbitData, HeegaardError> {
    check_params(p, q)?;
    let n = p * q;
    let omega = (1..=p)
        .map(|k| (0..q).map(|s| (k + s * p) % n).collect())
        .collect();
    let lambda = (1..=q)
        .map(|l| (0..p).map(|s| (l + s * q) % n).collect())
        .collect();
    Ok(OrbitData { n, omega, lambda })
}

fn check_params(p: u64, q: u64) -> Result<(), HeegaardError> {
    if p == 0 || q == 0 {
        return Err(HeegaardError::NonPositive);
    }
    if num_integer::gcd(p, q) != 1 {
        return Err(HeegaardError::NotCoprime(p, q));
    }
    Ok(())
}

/// Rewrites `w^{pq}` for `w = b^-1 a^p b a^q` in the Schreier basis of the
/// kernel of the map to the integers mod `pq` sending `a` to 1 and `b` to 0,
/// with the maximal tree consisting of all `a`-edges except the one at the
/// basepoint. Basis letters: 1 is the loop `a_0`, and `2 + i` is `b_i`.
pub fn lift_bs_word(p: u64, q: u64) -> Result<Word, HeegaardError> {
    check_params(p, q)?;
    let n = (p * q) as usize;
    let cover = bs_cover(n);
    let w = bs_base_word(p, q);
    let lifted = w.pow(n as u32);
    Ok(rewrite_in_schreier_basis(&cover, &lifted).expect("w^{pq} lies in the kernel"))
}

fn bs_cover(n: usize) -> CoverGraph {
    let phi = PhiMap::new(vec![1, 0]).unwrap();
    let cover = CoverGraph::cyclic(2, &phi, n as u64).unwrap();
    let tree: Vec<EdgeId> = (1..n).map(|i| EdgeId { src: i, gen: 0 }).collect();
    cover.with_spanning_tree(tree).unwrap()
}

fn bs_base_word(p: u64, q: u64) -> Word {
    let mut letters = vec![Letter::new(2, false)];
    letters.extend(std::iter::repeat(Letter::new(1, true)).take(p as usize));
    letters.push(Letter::new(2, true));
    letters.extend(std::iter::repeat(Letter::new(1, true)).take(q as usize));
    Word::from_letters(2, letters)
}

/// A slot on a disc; slots are cyclically ordered by position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SlotRef {
    pub disc: usize,
    pub slot: usize,
}

/// An oriented arc on the boundary of the cut-open handlebody.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Arc {
    pub from: SlotRef,
    pub to: SlotRef,
}

/// An identified disc pair with its slot bijection (`map[s]` on the plus
/// side matches slot `map[s]` on the minus side).
#[derive(Clone, Debug, Serialize)]
pub struct Pairing {
    pub plus: usize,
    pub minus: usize,
    pub map: Vec<usize>,
}

/// The full combinatorial Heegaard diagram.
///
/// Disc indices: 0 is `A0+`, 1 is `A0-`, `2 + 2i` is `B_i+` and `3 + 2i` is
/// `B_i-`. Slot 0 of a B-disc is the inbound (curve-ending) slot, slot 1
/// the outbound one; the A-discs carry one slot per meridian crossing, in
/// chain order on the plus side and reversed on the minus side.
#[derive(Clone, Debug, Serialize)]
pub struct Diagram {
    pub p: u64,
    pub q: u64,
    pub n: u64,
    pub disc_labels: Vec<String>,
    pub disc_slots: Vec<usize>,
    pub arcs: Vec<Arc>,
    pub pairings: Vec<Pairing>,
}

const A_PLUS: usize = 0;
const A_MINUS: usize = 1;

fn b_plus(i: u64) -> usize {
    2 + 2 * i as usize
}

fn b_minus(i: u64) -> usize {
    3 + 2 * i as usize
}

/// Builds the arc system: one chain of `q + 1` arcs through the minus-side
/// B-discs per orbit of adding `p`, one chain of `p + 1` arcs through the
/// plus-side B-discs per orbit of adding `q`, all attached to the two
/// A-discs in chain order.
pub fn build_diagram(p: u64, q: u64) -> Result<Diagram, HeegaardError> {
    let data = orbits(p, q)?;
    let n = data.n;
    let chains = (p + q) as usize;

    let mut disc_labels = vec!["A0+".to_string(), "A0-".to_string()];
    let mut disc_slots = vec![chains, chains];
    for i in 0..n {
        disc_labels.push(format!("B{i}+"));
        disc_labels.push(format!("B{i}-"));
        disc_slots.push(2);
        disc_slots.push(2);
    }

    let mut arcs = Vec::new();
    // chain index t: 0..p are the omega chains, p..p+q the lambda chains
    for (t, orbit) in data.omega.iter().enumerate() {
        let start = orbit[0]; // k
        let end = orbit[orbit.len() - 1]; // k - p mod n
        arcs.push(Arc {
            from: SlotRef { disc: A_PLUS, slot: t },
            to: SlotRef { disc: b_minus(start), slot: 0 },
        });
        for pair in orbit.windows(2) {
            arcs.push(Arc {
                from: SlotRef { disc: b_minus(pair[0]), slot: 1 },
                to: SlotRef { disc: b_minus(pair[1]), slot: 0 },
            });
        }
        arcs.push(Arc {
            from: SlotRef { disc: b_minus(end), slot: 1 },
            to: SlotRef { disc: A_MINUS, slot: chains - 1 - t },
        });
    }
    for (idx, orbit) in data.lambda.iter().enumerate() {
        let t = p as usize + idx;
        let start = orbit[0]; // l
        let end = orbit[orbit.len() - 1]; // l - q mod n
        arcs.push(Arc {
            from: SlotRef { disc: A_PLUS, slot: t },
            to: SlotRef { disc: b_plus(start), slot: 0 },
        });
        for pair in orbit.windows(2) {
            arcs.push(Arc {
                from: SlotRef { disc: b_plus(pair[0]), slot: 1 },
                to: SlotRef { disc: b_plus(pair[1]), slot: 0 },
            });
        }
        arcs.push(Arc {
            from: SlotRef { disc: b_plus(end), slot: 1 },
            to: SlotRef { disc: A_MINUS, slot: chains - 1 - t },
        });
    }

    // gluing: the inbound endpoint on one side matches the outbound endpoint
    // on the other; the chain start on A0+ matches the same chain's end on
    // A0-
    let mut pairings = vec![Pairing {
        plus: A_PLUS,
        minus: A_MINUS,
        map: (0..chains).map(|t| chains - 1 - t).collect(),
    }];
    for i in 0..n {
        pairings.push(Pairing {
            plus: b_plus(i),
            minus: b_minus(i),
            map: vec![1, 0],
        });
    }

    Ok(Diagram {
        p,
        q,
        n,
        disc_labels,
        disc_slots,
        arcs,
        pairings,
    })
}

/// Result of the three diagram checks.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub single_curve: bool,
    pub curve_cycles: usize,
    pub order_reversing: bool,
    pub ribbon_planar: bool,
    pub sphere_euler: i64,
    pub closed_surface_euler: i64,
    pub genus: i64,
    pub word_matches: bool,
    pub traced_word: String,
    pub expected_word: String,
    pub failures: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.single_curve && self.order_reversing && self.ribbon_planar && self.word_matches
    }
}

struct SlotTables {
    /// arc index leaving each slot, if any
    outgoing: Vec<Vec<Option<usize>>>,
    /// partner slot under the disc pairings
    partner: Vec<Vec<Option<SlotRef>>>,
}

fn slot_tables(d: &Diagram) -> Result<SlotTables, String> {
    let mut outgoing: Vec<Vec<Option<usize>>> =
        d.disc_slots.iter().map(|&k| vec![None; k]).collect();
    let mut incoming = outgoing.clone();
    for (idx, arc) in d.arcs.iter().enumerate() {
        let o = &mut outgoing[arc.from.disc][arc.from.slot];
        if o.is_some() {
            return Err(format!("slot {:?} used twice as a source", arc.from));
        }
        *o = Some(idx);
        let i = &mut incoming[arc.to.disc][arc.to.slot];
        if i.is_some() {
            return Err(format!("slot {:?} used twice as a target", arc.to));
        }
        *i = Some(idx);
    }
    // every slot must be used exactly once overall
    for disc in 0..d.disc_slots.len() {
        for slot in 0..d.disc_slots[disc] {
            let used = usize::from(outgoing[disc][slot].is_some())
                + usize::from(incoming[disc][slot].is_some());
            if used != 1 {
                return Err(format!(
                    "slot {slot} of disc {} used {used} times",
                    d.disc_labels[disc]
                ));
            }
        }
    }
    let mut partner: Vec<Vec<Option<SlotRef>>> =
        d.disc_slots.iter().map(|&k| vec![None; k]).collect();
    for pairing in &d.pairings {
        if pairing.map.len() != d.disc_slots[pairing.plus]
            || d.disc_slots[pairing.plus] != d.disc_slots[pairing.minus]
        {
            return Err(format!(
                "pairing {} <-> {} has mismatched slot counts",
                d.disc_labels[pairing.plus], d.disc_labels[pairing.minus]
            ));
        }
        for (s, &m) in pairing.map.iter().enumerate() {
            partner[pairing.plus][s] = Some(SlotRef {
                disc: pairing.minus,
                slot: m,
            });
            partner[pairing.minus][m] = Some(SlotRef {
                disc: pairing.plus,
                slot: s,
            });
        }
    }
    for disc in 0..d.disc_slots.len() {
        for slot in 0..d.disc_slots[disc] {
            if partner[disc][slot].is_none() {
                return Err(format!(
                    "slot {slot} of disc {} is not glued",
                    d.disc_labels[disc]
                ));
            }
        }
    }
    Ok(SlotTables { outgoing, partner })
}

/// Letter emitted when the curve crosses from the end slot of one arc to the
/// matched resume slot: `a_0` is generator 1, `b_i` is generator `2 + i`.
fn crossing_letter(d: &Diagram, end: SlotRef) -> Letter {
    let rank = d.n as usize + 1;
    let _ = rank;
    match end.disc {
        A_MINUS => Letter::new(1, true),
        A_PLUS => Letter::new(1, false),
        disc => {
            let i = (disc - 2) / 2;
            let minus_side = disc % 2 == 1;
            Letter::new(2 + i, minus_side)
        }
    }
}

/// Runs the three checks: single curve, embeddedness (order-reversing
/// gluings and ribbon planarity), and the traced word against the rewritten
/// lift, compared up to cyclic rotation and inversion.
pub fn verify_diagram(d: &Diagram, p: u64, q: u64) -> Result<VerificationReport, HeegaardError> {
    check_params(p, q)?;
    let n = d.n as i64;
    let mut failures = Vec::new();

    let tables = match slot_tables(d) {
        Ok(t) => t,
        Err(e) => {
            return Ok(VerificationReport {
                single_curve: false,
                curve_cycles: 0,
                order_reversing: false,
                ribbon_planar: false,
                sphere_euler: 0,
                closed_surface_euler: 0,
                genus: 0,
                word_matches: false,
                traced_word: String::new(),
                expected_word: String::new(),
                failures: vec![e],
            })
        }
    };

    // --- check 1: the arcs close into a single curve ---
    let successor: Vec<Option<usize>> = d
        .arcs
        .iter()
        .map(|arc| {
            let glued = tables.partner[arc.to.disc][arc.to.slot]?;
            tables.outgoing[glued.disc][glued.slot]
        })
        .collect();
    let mut curve_cycles = 0;
    let mut seen = vec![false; d.arcs.len()];
    let mut first_cycle: Vec<usize> = Vec::new();
    let mut single_curve = true;
    for start in 0..d.arcs.len() {
        if seen[start] {
            continue;
        }
        curve_cycles += 1;
        let mut cycle = Vec::new();
        let mut cur = start;
        loop {
            if seen[cur] {
                break;
            }
            seen[cur] = true;
            cycle.push(cur);
            match successor[cur] {
                Some(next) => cur = next,
                None => {
                    failures.push(format!(
                        "arc {cur} ends at a slot whose glued partner has no outgoing arc"
                    ));
                    single_curve = false;
                    break;
                }
            }
        }
        if curve_cycles == 1 {
            first_cycle = cycle;
        }
    }
    if curve_cycles != 1 {
        single_curve = false;
        failures.push(format!("curve splits into {curve_cycles} cycles"));
    }

    // --- check 2a: every gluing reverses the cyclic slot order ---
    let mut order_reversing = true;
    for pairing in &d.pairings {
        let m = pairing.map.len();
        if m <= 1 {
            continue;
        }
        for s in 0..m {
            let image_of_next = pairing.map[(s + 1) % m];
            let prev_of_image = (pairing.map[s] + m - 1) % m;
            if image_of_next != prev_of_image {
                order_reversing = false;
                failures.push(format!(
                    "gluing {} <-> {} is not order-reversing at slot {s}",
                    d.disc_labels[pairing.plus], d.disc_labels[pairing.minus]
                ));
                break;
            }
        }
    }

    // --- check 2b: the disc/arc ribbon graph embeds in the sphere ---
    // darts are arc ends; rotation advances along the disc boundary, the
    // involution jumps to the other end of the arc
    let total_slots: usize = d.disc_slots.iter().sum();
    let faces = {
        let slot_base: Vec<usize> = d
            .disc_slots
            .iter()
            .scan(0, |acc, &k| {
                let base = *acc;
                *acc += k;
                Some(base)
            })
            .collect();
        let dart_of = |s: SlotRef| slot_base[s.disc] + s.slot;
        // alpha: slot -> the other end of its arc
        let mut alpha = vec![usize::MAX; total_slots];
        for arc in &d.arcs {
            alpha[dart_of(arc.from)] = dart_of(arc.to);
            alpha[dart_of(arc.to)] = dart_of(arc.from);
        }
        // sigma: slot -> next slot on the same disc
        let mut sigma = vec![0usize; total_slots];
        for disc in 0..d.disc_slots.len() {
            let k = d.disc_slots[disc];
            for s in 0..k {
                sigma[slot_base[disc] + s] = slot_base[disc] + (s + 1) % k;
            }
        }
        let mut seen = vec![false; total_slots];
        let mut faces = 0usize;
        for start in 0..total_slots {
            if seen[start] {
                continue;
            }
            faces += 1;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = sigma[alpha[cur]];
            }
        }
        faces as i64
    };
    let vertices = d.disc_slots.len() as i64;
    let edges = d.arcs.len() as i64;
    let sphere_euler = vertices - edges + faces;
    let ribbon_planar = sphere_euler == 2;
    if !ribbon_planar {
        failures.push(format!(
            "ribbon graph closes to Euler characteristic {sphere_euler}, not a sphere"
        ));
    }
    // removing the 2(n+1) discs and regluing their boundary circles in pairs
    let closed_surface_euler = sphere_euler - (2 * n + 2);
    let genus = (2 - closed_surface_euler) / 2;

    // --- check 3: the traced word is the rewritten lift ---
    let traced = {
        let mut letters = Vec::new();
        for &arc in &first_cycle {
            letters.push(crossing_letter(d, d.arcs[arc].to));
        }
        Word::from_letters(d.n as usize + 1, letters)
    };
    let expected = lift_bs_word(p, q)?;
    let word_matches = single_curve && cyclic_words_equal_up_to_inversion(&traced, &expected);
    if !word_matches {
        failures.push(format!(
            "traced word {traced} does not match the lifted word {expected}"
        ));
    }

    Ok(VerificationReport {
        single_curve,
        curve_cycles,
        order_reversing,
        ribbon_planar,
        sphere_euler,
        closed_surface_euler,
        genus,
        word_matches,
        traced_word: traced.to_string(),
        expected_word: expected.to_string(),
        failures,
    })
}

fn min_rotation(w: &Word) -> Vec<Letter> {
    let mut best: Option<Vec<Letter>> = None;
    for r in 0..w.len().max(1) {
        let rot = w.rotate(r).letters().to_vec();
        if best.as_ref().is_none_or(|b| rot < *b) {
            best = Some(rot);
        }
    }
    best.unwrap_or_default()
}

fn cyclic_words_equal_up_to_inversion(a: &Word, b: &Word) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let key = min_rotation(a);
    key == min_rotation(b) || key == min_rotation(&b.inverse())
}

/// Counts for a verified diagram: what the certificate records.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Outcome {
    pub discs: usize,
    pub arcs: usize,
    pub genus: i64,
}

/// Builds and fully verifies the diagram for coprime positive `p`, `q`.
pub fn build_and_verify(p: u64, q: u64) -> Result<Outcome, HeegaardError> {
    let d = build_diagram(p, q)?;
    let report = verify_diagram(&d, p, q)?;
    if !report.passed() {
        return Err(HeegaardError::VerificationFailed(
            report.failures.join("; "),
        ));
    }
    Ok(Outcome {
        discs: d.disc_labels.len(),
        arcs: d.arcs.len(),
        genus: report.genus,
    })
}

/// Plain-text edge/slot listing, the regression golden format.
pub fn diagram_to_text(d: &Diagram) -> String {
    let mut out = String::new();
    out.push_str(&format!("heegaard p={} q={} n={}\n", d.p, d.q, d.n));
    for (i, label) in d.disc_labels.iter().enumerate() {
        out.push_str(&format!("disc {i} {label} slots={}\n", d.disc_slots[i]));
    }
    for (i, arc) in d.arcs.iter().enumerate() {
        out.push_str(&format!(
            "arc {i} {}:{} -> {}:{}\n",
            d.disc_labels[arc.from.disc], arc.from.slot, d.disc_labels[arc.to.disc], arc.to.slot
        ));
    }
    for pairing in &d.pairings {
        let map = pairing
            .map
            .iter()
            .enumerate()
            .map(|(s, m)| format!("{s}->{m}"))
            .collect::<Vec<_>>()
            .join(",");
        out.push_str(&format!(
            "pair {} {} {}\n",
            d.disc_labels[pairing.plus], d.disc_labels[pairing.minus], map
        ));
    }
    out
}

/// Minimal SVG schematic of the diagram (documentation output, not part of
/// the verified surface).
pub fn diagram_to_svg(d: &Diagram) -> String {
    let chains = (d.p + d.q) as usize;
    let row_height = 40.0;
    let height = (chains as f64 + 2.0) * row_height;
    let max_len = (d.q.max(d.p) + 2) as f64;
    let width = max_len * 80.0 + 160.0;
    let mut positions = vec![(0.0f64, 0.0f64); d.disc_labels.len()];
    positions[A_PLUS] = (40.0, height / 2.0);
    positions[A_MINUS] = (width - 40.0, height / 2.0);
    // lay each chain on its own row, spacing the B-discs evenly
    let mut row = 0usize;
    for arcs_chunk in chain_rows(d) {
        let count = arcs_chunk.len();
        for (j, disc) in arcs_chunk.into_iter().enumerate() {
            let x = 100.0 + (j as f64 + 1.0) * (width - 200.0) / (count as f64 + 1.0);
            let y = (row as f64 + 1.0) * row_height;
            positions[disc] = (x, y);
        }
        row += 1;
    }
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\">\n"
    ));
    for arc in &d.arcs {
        let (x1, y1) = positions[arc.from.disc];
        let (x2, y2) = positions[arc.to.disc];
        svg.push_str(&format!(
            "  <line x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" stroke=\"black\" marker-end=\"url(#end)\"/>\n"
        ));
    }
    for (i, label) in d.disc_labels.iter().enumerate() {
        let (x, y) = positions[i];
        svg.push_str(&format!(
            "  <circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"12\" fill=\"white\" stroke=\"black\"/>\n  <text x=\"{x:.1}\" y=\"{y:.1}\" font-size=\"8\" text-anchor=\"middle\" dominant-baseline=\"middle\">{label}</text>\n"
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Disc rows per chain for the schematic, in chain order.
fn chain_rows(d: &Diagram) -> Vec<Vec<usize>> {
    let Ok(data) = orbits(d.p, d.q) else {
        return Vec::new();
    };
    let mut rows = Vec::new();
    for orbit in &data.omega {
        rows.push(orbit.iter().map(|&i| b_minus(i)).collect());
    }
    for orbit in &data.lambda {
        rows.push(orbit.iter().map(|&i| b_plus(i)).collect());
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_partitions() {
        let data = orbits(3, 4).unwrap();
        assert_eq!(data.n, 12);
        assert_eq!(data.omega.len(), 3);
        assert_eq!(data.lambda.len(), 4);
        for (k, orbit) in data.omega.iter().enumerate() {
            assert_eq!(orbit.len(), 4);
            assert_eq!(orbit[0], k as u64 + 1);
        }
        let mut all: Vec<u64> = data.omega.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..12).collect::<Vec<_>>());
        let mut all: Vec<u64> = data.lambda.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..12).collect::<Vec<_>>());
    }

    #[test]
    fn lift_word_letter_counts() {
        for (p, q) in [(1, 1), (1, 2), (2, 3), (3, 4)] {
            let w = lift_bs_word(p, q).unwrap();
            let n = (p * q) as usize;
            assert_eq!(w.len(), 2 * n + (p + q) as usize, "({p},{q})");
            let a0_count = w.letters().iter().filter(|l| l.gen_index() == 1).count();
            assert_eq!(a0_count, (p + q) as usize);
            assert!(w.letters().iter().filter(|l| l.gen_index() == 1).all(|l| l.is_positive()));
            let b_count = w.letters().iter().filter(|l| l.gen_index() >= 2).count();
            assert_eq!(b_count, 2 * n);
        }
        assert_eq!(lift_bs_word(2, 4), Err(HeegaardError::NotCoprime(2, 4)));
    }

    #[test]
    fn lift_word_syllable_structure() {
        // successive b letters come as (b_i^-1, b_{i+p}) and (b_j, b_{j+q}^-1),
        // with a_0 inserted exactly when the run crosses the residue 0
        for (p, q) in [(2, 3), (3, 4), (1, 5)] {
            let n = p * q;
            let w = lift_bs_word(p, q).unwrap();
            let letters = w.letters();
            let b_positions: Vec<usize> = (0..letters.len())
                .filter(|&i| letters[i].gen_index() >= 2)
                .collect();
            for (pos_idx, &pos) in b_positions.iter().enumerate() {
                let cur = letters[pos];
                let next_pos = b_positions[(pos_idx + 1) % b_positions.len()];
                let next = letters[next_pos];
                let i = (cur.gen_index() - 2) as u64;
                let j = (next.gen_index() - 2) as u64;
                // count a_0 letters strictly between the two b letters (cyclically)
                let mut a_between = 0;
                let mut t = (pos + 1) % letters.len();
                while t != next_pos {
                    if letters[t].gen_index() == 1 {
                        a_between += 1;
                    }
                    t = (t + 1) % letters.len();
                }
                if !cur.is_positive() {
                    assert_eq!(j, (i + p) % n, "after b_i^-1 comes b_(i+p): ({p},{q})");
                    assert!(next.is_positive());
                    // a_0 occurs iff 0 in [i, i+p)
                    let crosses = (0..p).any(|s| (i + s) % n == 0);
                    assert_eq!(a_between == 1, crosses, "a_0 in the p-run from {i}");
                    assert!(a_between <= 1);
                } else {
                    assert_eq!(j, (i + q) % n, "after b_j comes b_(j+q)^-1: ({p},{q})");
                    assert!(!next.is_positive());
                    let crosses = (0..q).any(|s| (i + s) % n == 0);
                    assert_eq!(a_between == 1, crosses, "a_0 in the q-run from {i}");
                    assert!(a_between <= 1);
                }
            }
        }
    }

    #[test]
    fn minimal_power_is_pq() {
        // the smallest m with w^m in the kernel is pq
        for (p, q) in [(2, 3), (3, 4)] {
            let n = (p * q) as usize;
            let cover = bs_cover(n);
            let w = bs_base_word(p, q);
            let base = cover.basepoint();
            let mut v = base;
            for m in 1..n {
                v = cover.act(v, &w);
                assert_ne!(v, base, "w^{m} already in the kernel for ({p},{q})");
            }
            assert_eq!(cover.act(v, &w), base);
        }
    }

    #[test]
    fn diagram_counts() {
        let d = build_diagram(3, 4).unwrap();
        assert_eq!(d.disc_labels.len(), 26);
        assert_eq!(d.arcs.len(), 31);

        let d = build_diagram(1, 2).unwrap();
        assert_eq!(d.disc_labels.len(), 6);
        assert_eq!(d.arcs.len(), 7);

        let d = build_diagram(2, 3).unwrap();
        assert_eq!(d.disc_labels.len(), 14);
        assert_eq!(d.arcs.len(), 17);

        assert_eq!(
            build_diagram(2, 4).unwrap_err(),
            HeegaardError::NotCoprime(2, 4)
        );
    }

    #[test]
    fn verify_small_diagrams() {
        for (p, q) in [(1, 1), (1, 2), (2, 3), (3, 4)] {
            let d = build_diagram(p, q).unwrap();
            let report = verify_diagram(&d, p, q).unwrap();
            assert!(
                report.passed(),
                "({p},{q}) failed: {:?}",
                report.failures
            );
            assert_eq!(report.genus, (p * q) as i64 + 1);
            assert_eq!(report.closed_surface_euler, -2 * (p * q) as i64);
        }
    }

    #[test]
    fn mutated_diagram_fails() {
        let mut d = build_diagram(2, 3).unwrap();
        // swap the slot bijection on one B-disc pair
        let pairing = d
            .pairings
            .iter_mut()
            .find(|pp| pp.plus != A_PLUS)
            .unwrap();
        pairing.map.swap(0, 1);
        let report = verify_diagram(&d, 2, 3).unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn text_and_svg_emitters() {
        let d = build_diagram(2, 3).unwrap();
        let text = diagram_to_text(&d);
        assert!(text.contains("heegaard p=2 q=3 n=6"));
        assert!(text.lines().count() > d.arcs.len());
        let svg = diagram_to_svg(&d);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("B3-"));
    }
}
